//! Lowering of Toffoli gates into two-qubit gate bases.
//!
//! Four rules are available. Only the exact ones may be used for a Toffoli
//! that stands alone; the cheaper relative-phase (Margolus) and Peres forms
//! are reserved for compute/uncompute mirror pairs, where the phase or the
//! extra CNOT of the first copy is undone by the second.

use std::fmt;
use std::str::FromStr;

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind, QubitRole};
use crate::error::{Error, Result};
use crate::unitary::LocalUnitary;

const CU_MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateBasis {
    /// Toffoli, CNOT, X, local and controlled-U gates are native.
    NativeToffoli,
    /// CNOT plus arbitrary single-qubit gates.
    CnotLocal,
    /// CNOT, CV, CV† plus single-qubit gates.
    CvBasis,
}

impl GateBasis {
    pub const ALL: [GateBasis; 3] = [GateBasis::NativeToffoli, GateBasis::CnotLocal, GateBasis::CvBasis];

    pub fn name(self) -> &'static str {
        match self {
            GateBasis::NativeToffoli => "toffoli",
            GateBasis::CnotLocal => "cnot",
            GateBasis::CvBasis => "cv",
        }
    }

    pub fn permits(self, kind: &GateKind) -> bool {
        match self {
            GateBasis::NativeToffoli => matches!(
                kind,
                GateKind::Toffoli | GateKind::Cnot | GateKind::X | GateKind::Local(_) | GateKind::Cu(_)
            ),
            GateBasis::CnotLocal => matches!(kind, GateKind::Cnot | GateKind::Local(_)),
            GateBasis::CvBasis => matches!(
                kind,
                GateKind::Cnot | GateKind::Cv | GateKind::Cvdg | GateKind::Local(_)
            ),
        }
    }
}

impl fmt::Display for GateBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toffoli" | "native" | "native_toffoli" => Ok(GateBasis::NativeToffoli),
            "cnot" | "cnot_local" => Ok(GateBasis::CnotLocal),
            "cv" | "cv_basis" => Ok(GateBasis::CvBasis),
            other => Err(Error::param(format!(
                "unknown basis '{other}' (expected toffoli, cnot or cv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToffoliRule {
    /// 6 CNOT + 9 single-qubit gates.
    Exact6Cnot,
    /// 3 CNOT + 4 Ry rotations; Toffoli up to a diagonal sign.
    Margolus,
    /// 2 CNOT + 3 controlled-V gates.
    BarencoCv,
    /// 1 CNOT + 3 controlled-V gates; Toffoli combined with a CNOT on the controls.
    Peres,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    DiagonalPhase,
    /// Equals `TOFFOLI · CNOT(c1→c2)`: the CNOT acts first.
    PeresSemantics,
}

impl ToffoliRule {
    pub const ALL: [ToffoliRule; 4] = [
        ToffoliRule::Exact6Cnot,
        ToffoliRule::Margolus,
        ToffoliRule::BarencoCv,
        ToffoliRule::Peres,
    ];

    pub fn exactness(self) -> Exactness {
        match self {
            ToffoliRule::Exact6Cnot | ToffoliRule::BarencoCv => Exactness::Exact,
            ToffoliRule::Margolus => Exactness::DiagonalPhase,
            ToffoliRule::Peres => Exactness::PeresSemantics,
        }
    }

    pub fn op_count(self) -> usize {
        match self {
            ToffoliRule::Exact6Cnot => 15,
            ToffoliRule::Margolus => 7,
            ToffoliRule::BarencoCv => 5,
            ToffoliRule::Peres => 4,
        }
    }

    /// Gate sequence for a Toffoli on controls `(a, b)` and target `t`.
    pub fn gates(self, a: usize, b: usize, t: usize) -> Vec<Gate> {
        use LocalUnitary as U;
        match self {
            ToffoliRule::Exact6Cnot => vec![
                Gate::local(U::h(), t),
                Gate::cnot(b, t),
                Gate::local(U::tdg(), t),
                Gate::cnot(a, t),
                Gate::local(U::t(), t),
                Gate::cnot(b, t),
                Gate::local(U::tdg(), t),
                Gate::cnot(a, t),
                Gate::local(U::t(), b),
                Gate::local(U::t(), t),
                Gate::local(U::h(), t),
                Gate::cnot(a, b),
                Gate::local(U::t(), a),
                Gate::local(U::tdg(), b),
                Gate::cnot(a, b),
            ],
            ToffoliRule::Margolus => vec![
                Gate::local(U::ry(FRAC_PI_4), t),
                Gate::cnot(b, t),
                Gate::local(U::ry(FRAC_PI_4), t),
                Gate::cnot(a, t),
                Gate::local(U::ry(-FRAC_PI_4), t),
                Gate::cnot(b, t),
                Gate::local(U::ry(-FRAC_PI_4), t),
            ],
            ToffoliRule::BarencoCv => vec![
                Gate::cv(b, t),
                Gate::cnot(a, b),
                Gate::cvdg(b, t),
                Gate::cnot(a, b),
                Gate::cv(a, t),
            ],
            ToffoliRule::Peres => vec![
                Gate::cv(b, t),
                Gate::cnot(a, b),
                Gate::cvdg(a, t),
                Gate::cvdg(b, t),
            ],
        }
    }
}

impl fmt::Display for ToffoliRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ToffoliRule::Exact6Cnot => "exact_6cnot",
            ToffoliRule::Margolus => "margolus",
            ToffoliRule::BarencoCv => "barenco_cv",
            ToffoliRule::Peres => "peres",
        })
    }
}

/// A single Toffoli lowered by `rule`, as a circuit just wide enough to hold
/// the three operands.
pub fn lower_toffoli(controls: (usize, usize), target: usize, rule: ToffoliRule) -> Result<Circuit> {
    let (a, b) = controls;
    Gate::new(GateKind::Toffoli, vec![a, b, target])?;
    let width = a.max(b).max(target) + 1;
    let mut layout = vec![QubitRole::Workspace; width];
    layout[a] = QubitRole::Control;
    layout[b] = QubitRole::Control;
    layout[target] = QubitRole::Target;
    Circuit::new(&layout)?.extend(rule.gates(a, b, target))
}

/// Two occurrences of the same Toffoli enclosing a stretch of the circuit
/// that neither reads nor writes `garbage` and never writes `keep` or the
/// target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorPair {
    pub compute: usize,
    pub uncompute: usize,
    /// Control that stays readable between the two copies.
    pub keep: usize,
    /// Control that may carry the Peres CNOT garbage in between.
    pub garbage: usize,
}

/// Toffoli gate indices split into mirror pairs and stand-alone gates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingPlan {
    pub pairs: Vec<MirrorPair>,
    pub unpaired: Vec<usize>,
}

impl PairingPlan {
    pub fn paired_toffolis(&self) -> usize {
        2 * self.pairs.len()
    }
}

fn same_toffoli(x: &Gate, y: &Gate) -> bool {
    if !(x.is_toffoli() && y.is_toffoli()) || x.target() != y.target() {
        return false;
    }
    let (xc, yc) = (x.controls(), y.controls());
    (xc[0] == yc[0] && xc[1] == yc[1]) || (xc[0] == yc[1] && xc[1] == yc[0])
}

/// Can the Toffoli at `i` and its copy at `j` be lowered as a mirror pair
/// with `garbage` as the CNOT-garbage control?
fn pair_is_sound(gates: &[Gate], i: usize, j: usize, keep: usize, garbage: usize) -> bool {
    let t = gates[i].target();
    gates[i + 1..j]
        .iter()
        .all(|g| !g.touches(garbage) && !g.writes(keep) && !g.writes(t))
}

/// Matches Toffoli occurrences into properly nested compute/uncompute pairs.
///
/// Each Toffoli is paired with its next identical occurrence when the gates
/// in between leave its operands alone (see [`MirrorPair`]) and the new pair
/// nests with the pairs already chosen. Everything else is left unpaired
/// and must be lowered exactly.
pub fn peres_pairing(circuit: &Circuit) -> Result<PairingPlan> {
    let gates = circuit.gates();
    if let Some(index) = gates.iter().position(|g| matches!(g.kind(), GateKind::Mcx(_))) {
        return Err(Error::NoMirrorStructure(format!(
            "gate {index} is an unexpanded multi-controlled X"
        )));
    }
    let mut partner: Vec<Option<usize>> = vec![None; gates.len()];
    let mut plan = PairingPlan::default();
    for i in 0..gates.len() {
        if !gates[i].is_toffoli() || partner[i].is_some() {
            continue;
        }
        let Some(j) = (i + 1..gates.len()).find(|&j| same_toffoli(&gates[i], &gates[j])) else {
            continue;
        };
        if partner[j].is_some() {
            continue;
        }
        // Nesting: every pair opened inside (i, j) must also close inside it.
        let crosses = (i + 1..j).any(|k| matches!(partner[k], Some(p) if p > j || p < i));
        if crosses {
            continue;
        }
        let c = gates[i].controls();
        let orientation = [(c[0], c[1]), (c[1], c[0])]
            .into_iter()
            .find(|&(keep, garbage)| pair_is_sound(gates, i, j, keep, garbage));
        if let Some((keep, garbage)) = orientation {
            partner[i] = Some(j);
            partner[j] = Some(i);
            plan.pairs.push(MirrorPair {
                compute: i,
                uncompute: j,
                keep,
                garbage,
            });
        }
    }
    plan.unpaired = (0..gates.len())
        .filter(|&i| gates[i].is_toffoli() && partner[i].is_none())
        .collect();
    Ok(plan)
}

fn validate_plan(circuit: &Circuit, plan: &PairingPlan) -> Result<()> {
    let gates = circuit.gates();
    let mut seen = vec![false; gates.len()];
    let mut claim = |i: usize| -> Result<()> {
        if i >= gates.len() || !gates[i].is_toffoli() {
            return Err(Error::InvalidPairing(format!("gate {i} is not a Toffoli")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPairing(format!("gate {i} assigned twice")));
        }
        Ok(())
    };
    for p in &plan.pairs {
        claim(p.compute)?;
        claim(p.uncompute)?;
    }
    for &u in &plan.unpaired {
        claim(u)?;
    }
    for p in &plan.pairs {
        let (i, j) = (p.compute, p.uncompute);
        let ctrls = gates[i].controls();
        let orientation_ok = (ctrls[0] == p.keep && ctrls[1] == p.garbage)
            || (ctrls[1] == p.keep && ctrls[0] == p.garbage);
        if i >= j
            || !same_toffoli(&gates[i], &gates[j])
            || !orientation_ok
            || !pair_is_sound(gates, i, j, p.keep, p.garbage)
        {
            return Err(Error::InvalidPairing(format!(
                "gates {i} and {j} do not form a sound mirror pair"
            )));
        }
    }
    if let Some(i) = (0..gates.len()).find(|&i| gates[i].is_toffoli() && !seen[i]) {
        return Err(Error::InvalidPairing(format!("Toffoli {i} has no assignment")));
    }
    Ok(())
}

/// Controlled-U as `C, CNOT, B, CNOT, A` on the target plus a phase on the
/// control, from the ZYZ angles of `u` (`ABC = I`, `AXBXC = e^{-iα}U`).
pub fn controlled_u_gates(u: &LocalUnitary, control: usize, target: usize) -> Vec<Gate> {
    use LocalUnitary as U;
    let z = u.zyz();
    let a = U::rz(z.beta) * U::ry(z.gamma / 2.0);
    let b = U::ry(-z.gamma / 2.0) * U::rz(-(z.delta + z.beta) / 2.0);
    let c = U::rz((z.delta - z.beta) / 2.0);
    vec![
        Gate::local(c, target),
        Gate::cnot(control, target),
        Gate::local(b, target),
        Gate::cnot(control, target),
        Gate::local(a, target),
        Gate::local(U::phase(z.phase), control),
    ]
}

fn lower_cu(u: &LocalUnitary, control: usize, target: usize, basis: GateBasis) -> Vec<Gate> {
    if u.approx_eq(&LocalUnitary::x(), CU_MATCH_TOLERANCE) {
        return vec![Gate::cnot(control, target)];
    }
    match basis {
        GateBasis::NativeToffoli => vec![Gate::cu(*u, control, target)],
        GateBasis::CvBasis if u.approx_eq(&LocalUnitary::v(), CU_MATCH_TOLERANCE) => {
            vec![Gate::cv(control, target)]
        }
        GateBasis::CvBasis if u.approx_eq(&LocalUnitary::vdg(), CU_MATCH_TOLERANCE) => {
            vec![Gate::cvdg(control, target)]
        }
        _ => controlled_u_gates(u, control, target),
    }
}

/// Rewrites every gate of `circuit` into `basis`, pairing Toffolis with
/// [`peres_pairing`].
pub fn lower_circuit(circuit: &Circuit, basis: GateBasis) -> Result<Circuit> {
    if let Some(index) = circuit
        .gates()
        .iter()
        .position(|g| matches!(g.kind(), GateKind::Mcx(_)))
    {
        return Err(Error::UnexpandedMcx { index });
    }
    let plan = peres_pairing(circuit)?;
    lower_circuit_with_plan(circuit, basis, &plan)
}

/// [`lower_circuit`] with a caller-supplied pairing, validated first.
pub fn lower_circuit_with_plan(circuit: &Circuit, basis: GateBasis, plan: &PairingPlan) -> Result<Circuit> {
    if let Some(index) = circuit
        .gates()
        .iter()
        .position(|g| matches!(g.kind(), GateKind::Mcx(_)))
    {
        return Err(Error::UnexpandedMcx { index });
    }
    validate_plan(circuit, plan)?;

    let mut role_of: Vec<Option<(MirrorPair, bool)>> = vec![None; circuit.size()];
    for p in &plan.pairs {
        role_of[p.compute] = Some((*p, true));
        role_of[p.uncompute] = Some((*p, false));
    }

    let mut meta = circuit.meta().clone();
    meta.basis = Some(basis);
    let mut out = Circuit::new(circuit.roles())?.with_meta(meta);
    for (i, g) in circuit.gates().iter().enumerate() {
        let q = g.qubits();
        let lowered: Vec<Gate> = match (g.kind(), basis) {
            (GateKind::Toffoli, GateBasis::NativeToffoli) => vec![g.clone()],
            (GateKind::Toffoli, _) => {
                let t = g.target();
                match role_of[i] {
                    None => {
                        let rule = if basis == GateBasis::CnotLocal {
                            ToffoliRule::Exact6Cnot
                        } else {
                            ToffoliRule::BarencoCv
                        };
                        rule.gates(q[0], q[1], t)
                    }
                    Some((p, is_compute)) => {
                        let rule = if basis == GateBasis::CnotLocal {
                            ToffoliRule::Margolus
                        } else {
                            ToffoliRule::Peres
                        };
                        // PERES realises "CNOT then Toffoli"; its inverse, "Toffoli
                        // then CNOT", goes first so the two CNOTs meet in between.
                        let seq = rule.gates(p.keep, p.garbage, t);
                        if is_compute {
                            seq.iter().rev().map(Gate::inverse).collect()
                        } else {
                            seq
                        }
                    }
                }
            }
            (GateKind::X, GateBasis::NativeToffoli) => vec![g.clone()],
            (GateKind::X, _) => vec![Gate::local(LocalUnitary::x(), q[0])],
            (GateKind::Cnot | GateKind::Local(_), _) => vec![g.clone()],
            (GateKind::Cv | GateKind::Cvdg, GateBasis::CvBasis) => vec![g.clone()],
            (GateKind::Cv | GateKind::Cvdg | GateKind::Cu(_), _) => {
                lower_cu(&g.kind().target_unitary(), q[0], q[1], basis)
            }
            (GateKind::Mcx(_), _) => unreachable!("rejected above"),
        };
        for lg in lowered {
            out.push(lg)?;
        }
    }
    debug_assert!(out.gates().iter().all(|g| basis.permits(g.kind())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QubitRole::*;

    fn ladder3() -> Circuit {
        // controls 0,1,2 ; target 3 ; ancilla 4
        Circuit::new(&[Control, Control, Control, Target, ProcessAncilla])
            .unwrap()
            .extend([
                Gate::toffoli(0, 1, 4),
                Gate::toffoli(4, 2, 3),
                Gate::toffoli(0, 1, 4),
            ])
            .unwrap()
    }

    #[test]
    fn rule_op_counts() {
        for rule in ToffoliRule::ALL {
            let c = lower_toffoli((0, 1), 2, rule).unwrap();
            assert_eq!(c.size(), rule.op_count(), "{rule}");
        }
        let tally = |r| lower_toffoli((0, 1), 2, r).unwrap().count_gates().gates;
        let e = tally(ToffoliRule::Exact6Cnot);
        assert_eq!((e.cnot, e.local), (6, 9));
        let m = tally(ToffoliRule::Margolus);
        assert_eq!((m.cnot, m.local), (3, 4));
        let b = tally(ToffoliRule::BarencoCv);
        assert_eq!((b.cnot, b.cv + b.cvdg), (2, 3));
        let p = tally(ToffoliRule::Peres);
        assert_eq!((p.cnot, p.cv + p.cvdg), (1, 3));
    }

    #[test]
    fn lower_toffoli_rejects_duplicates() {
        assert!(matches!(
            lower_toffoli((0, 0), 2, ToffoliRule::Peres),
            Err(Error::DuplicateOperand { .. })
        ));
    }

    #[test]
    fn ladder3_has_one_pair_and_one_middle() {
        let plan = peres_pairing(&ladder3()).unwrap();
        assert_eq!(plan.pairs.len(), 1);
        assert_eq!(plan.unpaired, vec![1]);
        assert_eq!((plan.pairs[0].compute, plan.pairs[0].uncompute), (0, 2));
    }

    #[test]
    fn single_toffoli_stays_unpaired() {
        let c = Circuit::new(&[Control, Control, Target])
            .unwrap()
            .append(Gate::toffoli(0, 1, 2))
            .unwrap();
        let plan = peres_pairing(&c).unwrap();
        assert!(plan.pairs.is_empty());
        assert_eq!(plan.unpaired, vec![0]);
        assert_eq!(lower_circuit(&c, GateBasis::CvBasis).unwrap().size(), 5);
        assert_eq!(lower_circuit(&c, GateBasis::CnotLocal).unwrap().size(), 15);
    }

    #[test]
    fn writing_a_control_in_between_blocks_pairing() {
        let c = Circuit::new(&[Control, Control, Target])
            .unwrap()
            .extend([Gate::toffoli(0, 1, 2), Gate::x(0), Gate::x(1), Gate::toffoli(0, 1, 2)])
            .unwrap();
        let plan = peres_pairing(&c).unwrap();
        assert!(plan.pairs.is_empty());
        assert_eq!(plan.unpaired, vec![0, 3]);
    }

    #[test]
    fn mcx_is_rejected() {
        let c = Circuit::new(&[Control, Control, Control, Target])
            .unwrap()
            .append(Gate::mcx(&[0, 1, 2], 3))
            .unwrap();
        assert_eq!(
            lower_circuit(&c, GateBasis::CvBasis),
            Err(Error::UnexpandedMcx { index: 0 })
        );
        assert!(matches!(peres_pairing(&c), Err(Error::NoMirrorStructure(_))));
    }

    #[test]
    fn plan_validation_catches_unsound_pairs() {
        let c = ladder3();
        let bogus = PairingPlan {
            pairs: vec![MirrorPair {
                compute: 0,
                uncompute: 1,
                keep: 0,
                garbage: 1,
            }],
            unpaired: vec![2],
        };
        assert!(matches!(
            lower_circuit_with_plan(&c, GateBasis::CvBasis, &bogus),
            Err(Error::InvalidPairing(_))
        ));
        let missing = PairingPlan {
            pairs: vec![],
            unpaired: vec![0, 1],
        };
        assert!(matches!(
            lower_circuit_with_plan(&c, GateBasis::CvBasis, &missing),
            Err(Error::InvalidPairing(_))
        ));
    }

    #[test]
    fn lowered_gates_respect_basis() {
        let c = ladder3()
            .append(Gate::cu(LocalUnitary::h(), 0, 3))
            .unwrap()
            .append(Gate::x(2))
            .unwrap()
            .append(Gate::cv(1, 3))
            .unwrap();
        for basis in GateBasis::ALL {
            let low = lower_circuit(&c, basis).unwrap();
            assert!(low.gates().iter().all(|g| basis.permits(g.kind())), "{basis}");
            assert_eq!(low.meta().basis, Some(basis));
        }
    }

    #[test]
    fn basis_parses() {
        assert_eq!("cv".parse::<GateBasis>().unwrap(), GateBasis::CvBasis);
        assert!("qutrit".parse::<GateBasis>().is_err());
    }
}
