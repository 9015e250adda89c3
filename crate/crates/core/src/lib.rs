//! Multi-controlled Toffoli synthesis with clean ancillas.
//!
//! Builders produce [`Circuit`]s over Toffoli, CNOT and single-qubit gates
//! ([`ladder`], [`cycle`]); [`decomp`] lowers them into CNOT + local or CV
//! bases; [`cost`] holds the closed-form counts; [`verify`] checks circuits
//! against reference actions by statevector simulation.

pub mod circuit;
pub mod cost;
pub mod cycle;
pub mod decomp;
pub mod error;
pub mod ladder;
pub mod unitary;
pub mod verify;

pub use circuit::{Circuit, CircuitMeta, Gate, GateCounts, GateKind, GateTally, QubitId, QubitRole, RoleCounts};
pub use cost::{CostReport, DiscrepancyFlag, Scheme};
pub use cycle::{build_barenco_two_cycle_cnx, build_cycle_cnx, build_cycle_cnu, build_cycle_cnx_auto, plan_cycles, CyclePlan};
pub use decomp::{lower_circuit, lower_toffoli, peres_pairing, GateBasis, PairingPlan, ToffoliRule};
pub use error::{Error, Result};
pub use ladder::{build_ladder_cnu, build_ladder_cnx, build_lanyon_qubit_c3x, build_lanyon_qubit_toffoli};
pub use unitary::LocalUnitary;
pub use verify::{check_cnx, check_equivalence, oracle_cnu, oracle_cnx, EquivalenceClass, EquivalenceVerdict};
