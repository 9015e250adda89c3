//! Brute-force simulation oracle.
//!
//! Circuits are checked by enumerating every computational basis input with
//! all ancillas at `|0⟩`, simulating, and comparing against a reference
//! [`Oracle`]. Nothing larger than a state vector is ever materialised
//! except by [`Simulator::full_unitary`], which is capped at 10 qubits.

mod oracle;
mod state;

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use oracle::{oracle_cnu, oracle_cnx, CircuitOracle, CnuOracle, CnxOracle, MatrixOracle, Oracle};
pub use state::{StateVector, FLUSH_TOLERANCE};

use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_WIDTH: usize = 24;
pub const FULL_UNITARY_MAX_WIDTH: usize = 10;
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EquivalenceClass {
    Exact,
    GlobalPhase,
    DiagonalPhase,
    Mismatch,
}

impl fmt::Display for EquivalenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceClass::Exact => "EXACT",
            EquivalenceClass::GlobalPhase => "GLOBAL_PHASE",
            EquivalenceClass::DiagonalPhase => "DIAGONAL_PHASE",
            EquivalenceClass::Mismatch => "MISMATCH",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessReason {
    AncillaNotRestored,
    OutputMismatch,
}

/// A computational basis input on which the circuit misbehaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Input index; bit `j` is computational qubit `j`.
    pub input: usize,
    /// The same input as `|b₀b₁…⟩` in computational-qubit order.
    pub bits: String,
    pub reason: WitnessReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub class: EquivalenceClass,
    pub witness: Option<Witness>,
    pub max_deviation: f64,
    /// Number of basis inputs that were simulated.
    pub inputs_checked: usize,
}

impl EquivalenceVerdict {
    pub fn is_exact(&self) -> bool {
        self.class == EquivalenceClass::Exact
    }
}

impl fmt::Display for EquivalenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (max deviation {:.3e}, {} inputs)",
            self.class, self.max_deviation, self.inputs_checked
        )?;
        if let Some(w) = &self.witness {
            let why = match w.reason {
                WitnessReason::AncillaNotRestored => "ancilla not restored",
                WitnessReason::OutputMismatch => "output differs",
            };
            write!(f, "; witness {} ({why})", w.bits)?;
        }
        Ok(())
    }
}

fn bit_string(input: usize, k: usize) -> String {
    let bits: String = (0..k)
        .map(|j| if input >> j & 1 == 1 { '1' } else { '0' })
        .collect();
    format!("|{bits}⟩")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    max_width: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self {
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

impl Simulator {
    pub fn new(max_width: usize) -> Self {
        Self { max_width }
    }

    pub fn max_width(&self) -> usize {
        self.max_width
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width > self.max_width {
            return Err(Error::WidthOverBudget {
                width,
                max: self.max_width,
            });
        }
        Ok(())
    }

    /// Applies the gates of `circuit` in order.
    pub fn apply(&self, circuit: &Circuit, mut state: StateVector) -> Result<StateVector> {
        self.check_width(circuit.width())?;
        if state.width() != circuit.width() {
            return Err(Error::DimensionMismatch {
                width: circuit.width(),
                got: state.dim(),
            });
        }
        for g in circuit.gates() {
            state.apply_gate(g);
        }
        Ok(state)
    }

    /// Classifies `circuit` against `oracle` on `computational` qubits, with
    /// every other qubit treated as an ancilla initialised to 0.
    pub fn check_equivalence(
        &self,
        circuit: &Circuit,
        oracle: &dyn Oracle,
        computational: &[usize],
    ) -> Result<EquivalenceVerdict> {
        let width = circuit.width();
        self.check_width(width)?;
        let k = computational.len();
        if oracle.width() != k {
            return Err(Error::param(format!(
                "oracle acts on {} qubits but {k} computational qubits were given",
                oracle.width()
            )));
        }
        let mut comp_mask = 0usize;
        for &q in computational {
            if q >= width {
                return Err(Error::OperandOutOfRange { qubit: q, width });
            }
            if comp_mask & (1 << q) != 0 {
                return Err(Error::DuplicateOperand { qubit: q });
            }
            comp_mask |= 1 << q;
        }
        let deposit = |x: usize| -> usize {
            computational
                .iter()
                .enumerate()
                .filter(|(j, _)| x >> j & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | 1 << q)
        };

        let mut state = StateVector::zero(width);
        let mut max_exact: f64 = 0.0;
        let mut max_phased: f64 = 0.0;
        let mut first_phase: Option<Complex64> = None;
        let mut common_phase = true;
        let mut first_bad: Option<(usize, f64)> = None;
        let inputs = 1usize << k;

        for x in 0..inputs {
            state.reset_to_basis(deposit(x));
            for g in circuit.gates() {
                state.apply_gate(g);
            }

            let mut leak = 0.0;
            state.for_each_support(|i, a| {
                if i & !comp_mask != 0 {
                    leak += a.norm_sqr();
                }
            });
            let leak = leak.sqrt();
            if leak > EQUIVALENCE_TOLERANCE {
                return Ok(EquivalenceVerdict {
                    class: EquivalenceClass::Mismatch,
                    witness: Some(Witness {
                        input: x,
                        bits: bit_string(x, k),
                        reason: WitnessReason::AncillaNotRestored,
                    }),
                    max_deviation: leak,
                    inputs_checked: x + 1,
                });
            }

            let expected: Vec<(usize, Complex64)> = oracle
                .evaluate(x)
                .into_iter()
                .map(|(y, a)| (deposit(y), a))
                .collect();
            let overlap: Complex64 = expected
                .iter()
                .map(|&(i, e)| e.conj() * state.amplitude(i))
                .sum();
            let phase = if overlap.norm() > 0.0 {
                overlap / overlap.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let expected_at = |i: usize| -> Complex64 {
                expected
                    .iter()
                    .filter(|(j, _)| *j == i)
                    .map(|(_, a)| *a)
                    .sum()
            };
            let (mut dev_exact, mut dev_phased) = (0.0f64, 0.0f64);
            state.for_each_support(|i, a| {
                let e = expected_at(i);
                dev_exact = dev_exact.max((a - e).norm());
                dev_phased = dev_phased.max((a - phase * e).norm());
            });
            // Expected entries outside the live sub-cube have amplitude zero there.
            for &(i, e) in &expected {
                let a = state.amplitude(i);
                dev_exact = dev_exact.max((a - e).norm());
                dev_phased = dev_phased.max((a - phase * e).norm());
            }

            max_exact = max_exact.max(dev_exact);
            max_phased = max_phased.max(dev_phased);
            if dev_phased > EQUIVALENCE_TOLERANCE && first_bad.is_none() {
                first_bad = Some((x, dev_phased));
            }
            match first_phase {
                None => first_phase = Some(phase),
                Some(p) if (p - phase).norm() > EQUIVALENCE_TOLERANCE => common_phase = false,
                Some(_) => {}
            }
        }

        let (class, witness, max_deviation) = if let Some((x, dev)) = first_bad {
            let witness = Witness {
                input: x,
                bits: bit_string(x, k),
                reason: WitnessReason::OutputMismatch,
            };
            (EquivalenceClass::Mismatch, Some(witness), dev)
        } else if max_exact <= EQUIVALENCE_TOLERANCE {
            (EquivalenceClass::Exact, None, max_exact)
        } else if common_phase {
            (EquivalenceClass::GlobalPhase, None, max_phased)
        } else {
            (EquivalenceClass::DiagonalPhase, None, max_phased)
        };
        Ok(EquivalenceVerdict {
            class,
            witness,
            max_deviation,
            inputs_checked: inputs,
        })
    }

    /// Full `2^m × 2^m` unitary, `U[(i, j)] = ⟨i|U|j⟩`; limited to 10 qubits.
    pub fn full_unitary(&self, circuit: &Circuit) -> Result<Array2<Complex64>> {
        let width = circuit.width();
        let max = FULL_UNITARY_MAX_WIDTH.min(self.max_width);
        if width > max {
            return Err(Error::WidthOverBudget { width, max });
        }
        let dim = 1usize << width;
        let mut u = Array2::zeros((dim, dim));
        for j in 0..dim {
            let out = self.apply(circuit, StateVector::basis(width, j))?;
            for (i, a) in out.amplitudes().iter().enumerate() {
                u[(i, j)] = *a;
            }
        }
        Ok(u)
    }
}

/// [`Simulator::apply`] with the default width budget.
pub fn apply(circuit: &Circuit, state: StateVector) -> Result<StateVector> {
    Simulator::default().apply(circuit, state)
}

/// [`Simulator::check_equivalence`] with the default width budget.
pub fn check_equivalence(
    circuit: &Circuit,
    oracle: &dyn Oracle,
    computational: &[usize],
) -> Result<EquivalenceVerdict> {
    Simulator::default().check_equivalence(circuit, oracle, computational)
}

/// [`Simulator::full_unitary`] with the default width budget.
pub fn full_unitary(circuit: &Circuit) -> Result<Array2<Complex64>> {
    Simulator::default().full_unitary(circuit)
}

/// Checks a synthesized C^nX circuit on its declared controls and target.
pub fn check_cnx(circuit: &Circuit, n: usize) -> Result<EquivalenceVerdict> {
    check_equivalence(circuit, &oracle_cnx(n), &circuit.computational_qubits())
}

/// Max-abs entrywise distance between two matrices of equal shape.
pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QubitRole::*};
    use crate::unitary::LocalUnitary;

    #[test]
    fn empty_two_qubit_circuit_is_identity() {
        let c = Circuit::new(&[Control, Target]).unwrap();
        let u = full_unitary(&c).unwrap();
        assert_eq!(max_abs_diff(&u, &Array2::eye(4)), 0.0);
    }

    #[test]
    fn width_budget_enforced() {
        let c = Circuit::new(&[Control, Target, Workspace]).unwrap();
        let sim = Simulator::new(2);
        assert_eq!(
            sim.apply(&c, StateVector::zero(3)),
            Err(Error::WidthOverBudget { width: 3, max: 2 })
        );
        assert!(matches!(
            sim.check_equivalence(&c, &oracle_cnx(1), &[0, 1]),
            Err(Error::WidthOverBudget { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let c = Circuit::new(&[Control, Target]).unwrap();
        assert!(matches!(
            apply(&c, StateVector::zero(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn global_phase_detected() {
        // Z·X·Z·X = -I on one qubit.
        let c = Circuit::new(&[Target])
            .unwrap()
            .extend([
                Gate::x(0),
                Gate::local(LocalUnitary::z(), 0),
                Gate::x(0),
                Gate::local(LocalUnitary::z(), 0),
            ])
            .unwrap();
        let id = MatrixOracle::new(Array2::eye(2));
        let v = check_equivalence(&c, &id, &[0]).unwrap();
        assert_eq!(v.class, EquivalenceClass::GlobalPhase);
    }

    #[test]
    fn diagonal_phase_detected() {
        let c = Circuit::new(&[Target])
            .unwrap()
            .append(Gate::local(LocalUnitary::z(), 0))
            .unwrap();
        let id = MatrixOracle::new(Array2::eye(2));
        let v = check_equivalence(&c, &id, &[0]).unwrap();
        assert_eq!(v.class, EquivalenceClass::DiagonalPhase);
    }

    #[test]
    fn ancilla_leak_reported_with_witness() {
        let c = Circuit::new(&[Control, Control, Target, ProcessAncilla])
            .unwrap()
            .extend([Gate::toffoli(0, 1, 3), Gate::cnot(3, 2)])
            .unwrap();
        let v = check_equivalence(&c, &oracle_cnx(2), &[0, 1, 2]).unwrap();
        assert_eq!(v.class, EquivalenceClass::Mismatch);
        let w = v.witness.unwrap();
        assert_eq!(w.reason, WitnessReason::AncillaNotRestored);
        assert_eq!(w.bits, "|110⟩");
    }

    #[test]
    fn oracle_width_must_match() {
        let c = Circuit::new(&[Control, Target]).unwrap();
        assert!(check_equivalence(&c, &oracle_cnx(2), &[0, 1]).is_err());
    }
}
