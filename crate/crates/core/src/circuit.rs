//! Qubits, gates and circuits.
//!
//! A [`Circuit`] is a value: [`Circuit::append`] consumes the circuit and
//! returns the extended one, so a circuit handed to the verifier can never
//! change underneath it. Controlled gates list their controls first and the
//! target last.

use std::collections::HashSet;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::decomp::GateBasis;
use crate::error::{Error, Result};
use crate::unitary::LocalUnitary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitRole {
    Control,
    Target,
    /// Holds the AND of one control group between cycles.
    CycleAncilla,
    /// Scratch ancilla of a single ladder, uncomputed before reuse.
    ProcessAncilla,
    /// Any other ancilla (e.g. the extra qubit of a controlled-U ladder).
    Workspace,
}

impl QubitRole {
    pub fn is_ancilla(self) -> bool {
        matches!(
            self,
            QubitRole::CycleAncilla | QubitRole::ProcessAncilla | QubitRole::Workspace
        )
    }

    pub fn short_name(self) -> &'static str {
        match self {
            QubitRole::Control => "c",
            QubitRole::Target => "t",
            QubitRole::CycleAncilla => "y",
            QubitRole::ProcessAncilla => "p",
            QubitRole::Workspace => "w",
        }
    }

    pub fn from_short_name(s: &str) -> Option<Self> {
        Some(match s {
            "c" => QubitRole::Control,
            "t" => QubitRole::Target,
            "y" => QubitRole::CycleAncilla,
            "p" => QubitRole::ProcessAncilla,
            "w" => QubitRole::Workspace,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitId {
    pub index: usize,
    pub role: QubitRole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Cnot,
    /// Controlled square root of X.
    Cv,
    Cvdg,
    Toffoli,
    /// Multi-controlled X with `k` controls.
    Mcx(usize),
    Local(LocalUnitary),
    Cu(LocalUnitary),
}

impl GateKind {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Cv => "cv",
            GateKind::Cvdg => "cvdg",
            GateKind::Toffoli => "ccx",
            GateKind::Mcx(_) => "mcx",
            GateKind::Local(_) => "u",
            GateKind::Cu(_) => "cu",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::X | GateKind::Local(_) => 1,
            GateKind::Cnot | GateKind::Cv | GateKind::Cvdg | GateKind::Cu(_) => 2,
            GateKind::Toffoli => 3,
            GateKind::Mcx(k) => k + 1,
        }
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::Cv => GateKind::Cvdg,
            GateKind::Cvdg => GateKind::Cv,
            GateKind::Local(u) => GateKind::Local(u.adjoint()),
            GateKind::Cu(u) => GateKind::Cu(u.adjoint()),
            other => *other,
        }
    }

    /// The single-qubit operator applied to the target when all controls are set.
    pub fn target_unitary(&self) -> LocalUnitary {
        match self {
            GateKind::X | GateKind::Cnot | GateKind::Toffoli | GateKind::Mcx(_) => LocalUnitary::x(),
            GateKind::Cv => LocalUnitary::v(),
            GateKind::Cvdg => LocalUnitary::vdg(),
            GateKind::Local(u) | GateKind::Cu(u) => *u,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    /// Checked constructor: operand count must match the kind and operands
    /// must be distinct. Range checks happen on [`Circuit::append`].
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self> {
        if let GateKind::Mcx(0) = kind {
            return Err(Error::param("mcx needs at least one control"));
        }
        if qubits.len() != kind.arity() {
            return Err(Error::OperandCount {
                kind: kind.mnemonic(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        let mut seen = HashSet::with_capacity(qubits.len());
        for &q in &qubits {
            if !seen.insert(q) {
                return Err(Error::DuplicateOperand { qubit: q });
            }
        }
        Ok(Self { kind, qubits })
    }

    fn unchecked(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self { kind, qubits }
    }

    pub fn x(q: usize) -> Self {
        Self::unchecked(GateKind::X, vec![q])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::unchecked(GateKind::Cnot, vec![control, target])
    }

    pub fn cv(control: usize, target: usize) -> Self {
        Self::unchecked(GateKind::Cv, vec![control, target])
    }

    pub fn cvdg(control: usize, target: usize) -> Self {
        Self::unchecked(GateKind::Cvdg, vec![control, target])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::unchecked(GateKind::Toffoli, vec![c1, c2, target])
    }

    pub fn mcx(controls: &[usize], target: usize) -> Self {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        Self::unchecked(GateKind::Mcx(controls.len()), qubits)
    }

    pub fn local(u: LocalUnitary, q: usize) -> Self {
        Self::unchecked(GateKind::Local(u), vec![q])
    }

    pub fn cu(u: LocalUnitary, control: usize, target: usize) -> Self {
        Self::unchecked(GateKind::Cu(u), vec![control, target])
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn controls(&self) -> &[usize] {
        &self.qubits[..self.qubits.len() - 1]
    }

    pub fn target(&self) -> usize {
        self.qubits[self.qubits.len() - 1]
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubits.contains(&q)
    }

    pub fn is_toffoli(&self) -> bool {
        matches!(self.kind, GateKind::Toffoli)
    }

    /// True when the gate can change the computational-basis value of `q`.
    /// Diagonal single-qubit gates leave basis values alone.
    pub fn writes(&self, q: usize) -> bool {
        if self.target() != q {
            return false;
        }
        let u = self.kind.target_unitary();
        u.entry(0, 1).norm() > 0.0 || u.entry(1, 0).norm() > 0.0
    }

    pub fn inverse(&self) -> Gate {
        Self::unchecked(self.kind.inverse(), self.qubits.clone())
    }

    fn check_range(&self, width: usize) -> Result<()> {
        for &q in &self.qubits {
            if q >= width {
                return Err(Error::OperandOutOfRange { qubit: q, width });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.mnemonic())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMeta {
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<GateBasis>,
}

impl CircuitMeta {
    pub fn new(scheme: impl Into<String>) -> Self {
        Self {
            scheme: scheme.into(),
            ..Default::default()
        }
    }
}

/// Per-kind gate tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub x: usize,
    pub cnot: usize,
    pub cv: usize,
    pub cvdg: usize,
    pub toffoli: usize,
    pub mcx: usize,
    pub local: usize,
    pub cu: usize,
    pub total: usize,
}

impl GateCounts {
    fn record(&mut self, kind: &GateKind) {
        match kind {
            GateKind::X => self.x += 1,
            GateKind::Cnot => self.cnot += 1,
            GateKind::Cv => self.cv += 1,
            GateKind::Cvdg => self.cvdg += 1,
            GateKind::Toffoli => self.toffoli += 1,
            GateKind::Mcx(_) => self.mcx += 1,
            GateKind::Local(_) => self.local += 1,
            GateKind::Cu(_) => self.cu += 1,
        }
        self.total += 1;
    }

    pub fn of_gates<'a>(gates: impl IntoIterator<Item = &'a Gate>) -> Self {
        let mut counts = Self::default();
        for g in gates {
            counts.record(g.kind());
        }
        counts
    }
}

impl Add for GateCounts {
    type Output = GateCounts;

    fn add(self, o: GateCounts) -> GateCounts {
        GateCounts {
            x: self.x + o.x,
            cnot: self.cnot + o.cnot,
            cv: self.cv + o.cv,
            cvdg: self.cvdg + o.cvdg,
            toffoli: self.toffoli + o.toffoli,
            mcx: self.mcx + o.mcx,
            local: self.local + o.local,
            cu: self.cu + o.cu,
            total: self.total + o.total,
        }
    }
}

/// Qubit tallies by role.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleCounts {
    pub controls: usize,
    pub targets: usize,
    pub cycle_ancillas: usize,
    pub process_ancillas: usize,
    pub workspace: usize,
}

impl RoleCounts {
    pub fn ancillas(&self) -> usize {
        self.cycle_ancillas + self.process_ancillas + self.workspace
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateTally {
    pub gates: GateCounts,
    pub roles: RoleCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    roles: Vec<QubitRole>,
    gates: Vec<Gate>,
    meta: CircuitMeta,
}

impl Circuit {
    /// Empty circuit over `layout`; qubit `i` gets role `layout[i]`.
    pub fn new(layout: &[QubitRole]) -> Result<Self> {
        if layout.is_empty() {
            return Err(Error::EmptyLayout);
        }
        Ok(Self {
            roles: layout.to_vec(),
            gates: Vec::new(),
            meta: CircuitMeta::default(),
        })
    }

    pub fn with_meta(mut self, meta: CircuitMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn append(mut self, gate: Gate) -> Result<Self> {
        self.push(gate)?;
        Ok(self)
    }

    pub fn extend(mut self, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    /// Builders inside the crate mutate a circuit they still own exclusively.
    pub(crate) fn push(&mut self, gate: Gate) -> Result<()> {
        // Re-validate arity and distinctness; the shorthand constructors skip it.
        let gate = Gate::new(gate.kind, gate.qubits)?;
        gate.check_range(self.width())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.roles.len()
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Greedy layering: a gate starts after the latest gate sharing a qubit.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.width()];
        let mut depth = 0;
        for g in &self.gates {
            let next = g.qubits().iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in g.qubits() {
                level[q] = next;
            }
            depth = depth.max(next);
        }
        depth
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> &[QubitRole] {
        &self.roles
    }

    pub fn role(&self, q: usize) -> QubitRole {
        self.roles[q]
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.roles
            .iter()
            .enumerate()
            .map(|(index, &role)| QubitId { index, role })
    }

    pub fn meta(&self) -> &CircuitMeta {
        &self.meta
    }

    pub fn qubits_with_role(&self, role: QubitRole) -> Vec<usize> {
        self.qubits()
            .filter(|q| q.role == role)
            .map(|q| q.index)
            .collect()
    }

    /// Controls in index order followed by the target(s); ancillas excluded.
    pub fn computational_qubits(&self) -> Vec<usize> {
        let mut out = self.qubits_with_role(QubitRole::Control);
        out.extend(self.qubits_with_role(QubitRole::Target));
        out
    }

    pub fn ancilla_qubits(&self) -> Vec<usize> {
        self.qubits()
            .filter(|q| q.role.is_ancilla())
            .map(|q| q.index)
            .collect()
    }

    pub fn count_gates(&self) -> GateTally {
        let mut roles = RoleCounts::default();
        for r in &self.roles {
            match r {
                QubitRole::Control => roles.controls += 1,
                QubitRole::Target => roles.targets += 1,
                QubitRole::CycleAncilla => roles.cycle_ancillas += 1,
                QubitRole::ProcessAncilla => roles.process_ancillas += 1,
                QubitRole::Workspace => roles.workspace += 1,
            }
        }
        GateTally {
            gates: GateCounts::of_gates(&self.gates),
            roles,
        }
    }

    /// Reversed gate order, each gate replaced by its inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            roles: self.roles.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            meta: self.meta.clone(),
        }
    }

    /// `self` followed by `other`; both must share the same layout.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.roles != other.roles {
            return Err(Error::param("concatenated circuits must share a qubit layout"));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    /// Structural checks every synthesized circuit must pass.
    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            Gate::new(g.kind, g.qubits.clone())?;
            g.check_range(self.width())?;
        }
        let targets = self.qubits_with_role(QubitRole::Target).len();
        if targets != 1 {
            return Err(Error::param(format!(
                "expected exactly one target qubit, found {targets}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layout: Vec<_> = self.roles.iter().map(|r| r.short_name()).collect();
        writeln!(f, "circuit[{}] {}", self.width(), layout.join(" "))?;
        for g in &self.gates {
            writeln!(f, "  {g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QubitRole::*;

    #[test]
    fn new_assigns_indices_in_layout_order() {
        let c = Circuit::new(&[Control, Control, Target]).unwrap();
        assert_eq!(c.width(), 3);
        assert_eq!(c.size(), 0);
        let ids: Vec<_> = c.qubits().collect();
        assert_eq!(ids[2], QubitId { index: 2, role: Target });
    }

    #[test]
    fn empty_layout_rejected() {
        assert_eq!(Circuit::new(&[]), Err(Error::EmptyLayout));
    }

    #[test]
    fn append_extends_by_one() {
        let c = Circuit::new(&[Control, Target]).unwrap();
        let c = c.append(Gate::cnot(0, 1)).unwrap();
        assert_eq!(c.size(), 1);
    }

    #[test]
    fn append_rejects_duplicates_and_out_of_range() {
        let c = Circuit::new(&[Control, Control, Target]).unwrap();
        assert_eq!(
            c.clone().append(Gate::toffoli(0, 1, 1)),
            Err(Error::DuplicateOperand { qubit: 1 })
        );
        assert_eq!(
            c.append(Gate::mcx(&[0, 1], 9)),
            Err(Error::OperandOutOfRange { qubit: 9, width: 3 })
        );
    }

    #[test]
    fn gate_new_checks_arity() {
        assert!(matches!(
            Gate::new(GateKind::Toffoli, vec![0, 1]),
            Err(Error::OperandCount { expected: 3, got: 2, .. })
        ));
        assert!(Gate::new(GateKind::Mcx(3), vec![0, 1, 2, 3]).is_ok());
    }

    #[test]
    fn empty_circuit_counts_zero() {
        let c = Circuit::new(&[Target]).unwrap();
        assert_eq!(c.count_gates().gates, GateCounts::default());
    }

    #[test]
    fn inverse_swaps_cv_and_reverses() {
        let c = Circuit::new(&[Control, Control, Target])
            .unwrap()
            .append(Gate::cv(0, 1))
            .unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::cvdg(0, 1)]);

        let c = Circuit::new(&[Control, Control, Target])
            .unwrap()
            .extend([Gate::cnot(0, 1), Gate::toffoli(0, 1, 2)])
            .unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::toffoli(0, 1, 2), Gate::cnot(0, 1)]);
        assert_eq!(c.inverse().inverse(), c);
    }

    #[test]
    fn diagonal_locals_do_not_write() {
        assert!(!Gate::local(LocalUnitary::t(), 0).writes(0));
        assert!(Gate::local(LocalUnitary::h(), 0).writes(0));
        assert!(!Gate::toffoli(0, 1, 2).writes(0));
    }

    #[test]
    fn depth_of_ladder_like_sequence() {
        let c = Circuit::new(&[Control, Control, Control, Target])
            .unwrap()
            .extend([Gate::cnot(0, 1), Gate::cnot(2, 3), Gate::cnot(1, 2)])
            .unwrap();
        assert_eq!(c.depth(), 2);
    }
}
