//! Ladder constructions: C^nX with n−2 clean ancillas, C^nU with one more,
//! and the qubit adaptations of the qutrit/ququart controlled gates.

use crate::circuit::{Circuit, CircuitMeta, Gate, QubitRole};
use crate::decomp::GateBasis;
use crate::error::{Error, Result};
use crate::unitary::LocalUnitary;

/// Toffolis computing the running AND of `inputs` into `ancillas`, in order.
///
/// `ancillas[0] = inputs[0] ∧ inputs[1]`, `ancillas[k] = ancillas[k-1] ∧ inputs[k+1]`.
/// Needs `inputs.len() - 2` ancillas.
fn and_chain(inputs: &[usize], ancillas: &[usize]) -> Vec<Gate> {
    debug_assert_eq!(ancillas.len() + 2, inputs.len());
    let mut gates = Vec::with_capacity(ancillas.len());
    let mut acc = inputs[0];
    for (k, &anc) in ancillas.iter().enumerate() {
        gates.push(Gate::toffoli(acc, inputs[k + 1], anc));
        acc = anc;
    }
    gates
}

/// C^kX from `inputs` (k ≥ 2) onto `out`, using the first `k - 2` of
/// `scratch` and returning them to 0. Costs `2k - 3` Toffolis.
pub(crate) fn ladder_gates(inputs: &[usize], scratch: &[usize], out: usize) -> Vec<Gate> {
    let k = inputs.len();
    assert!(k >= 2, "a ladder needs at least two inputs");
    let ancillas = &scratch[..k - 2];
    let compute = and_chain(inputs, ancillas);
    let last = ancillas.last().copied().unwrap_or(inputs[0]);
    let mut gates = compute.clone();
    gates.push(Gate::toffoli(last, inputs[k - 1], out));
    gates.extend(compute.into_iter().rev());
    gates
}

fn meta(scheme: &str, n: usize) -> CircuitMeta {
    CircuitMeta {
        scheme: scheme.into(),
        n: Some(n),
        c: None,
        basis: Some(GateBasis::NativeToffoli),
    }
}

/// Layout: controls `0..n`, target `n`, process ancillas after it.
pub fn build_ladder_cnx(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::param(format!("ladder C^nX needs n >= 2, got n = {n}")));
    }
    let ancillas = n.saturating_sub(2);
    let mut layout = vec![QubitRole::Control; n];
    layout.push(QubitRole::Target);
    layout.extend(std::iter::repeat_n(QubitRole::ProcessAncilla, ancillas));

    let controls: Vec<usize> = (0..n).collect();
    let scratch: Vec<usize> = (n + 1..n + 1 + ancillas).collect();
    Circuit::new(&layout)?
        .with_meta(meta("ladder", n))
        .extend(ladder_gates(&controls, &scratch, n))
}

/// C^nU: the ladder ANDs all controls into an extra workspace ancilla, which
/// then controls `u` on the target. One Toffoli and one ancilla more than
/// [`build_ladder_cnx`], plus the single controlled-U.
///
/// Layout: controls `0..n`, target `n`, `n - 2` process ancillas, workspace last.
pub fn build_ladder_cnu(n: usize, u: LocalUnitary) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::param(format!("ladder C^nU needs n >= 2, got n = {n}")));
    }
    LocalUnitary::new(*u.matrix())?;
    let process = n - 2;
    let mut layout = vec![QubitRole::Control; n];
    layout.push(QubitRole::Target);
    layout.extend(std::iter::repeat_n(QubitRole::ProcessAncilla, process));
    layout.push(QubitRole::Workspace);

    let controls: Vec<usize> = (0..n).collect();
    let ancillas: Vec<usize> = (n + 1..n + 1 + process).collect();
    let work = n + 1 + process;
    let compute = and_chain(&controls, &ancillas);
    let last = ancillas.last().copied().unwrap_or(controls[0]);
    let flip_work = Gate::toffoli(last, controls[n - 1], work);

    let mut gates = compute.clone();
    gates.push(flip_work.clone());
    gates.push(Gate::cu(u, work, n));
    gates.push(flip_work);
    gates.extend(compute.into_iter().rev());
    Circuit::new(&layout)?
        .with_meta(meta("ladder_cnu", n))
        .extend(gates)
}

/// Qubit form of the qutrit Toffoli: the qutrit control becomes control 1
/// plus an ancilla. Level 2 is `|11⟩` on that pair, so lifting level 1 to 2
/// when control 0 is set, firing the target on level 2, and lowering again
/// takes three Toffolis for one.
///
/// Layout: controls `0, 1`, target `2`, ancilla `3`.
pub fn build_lanyon_qubit_toffoli() -> Result<Circuit> {
    use QubitRole::*;
    Circuit::new(&[Control, Control, Target, Workspace])?
        .with_meta(meta("lanyon_toffoli", 2))
        .extend([
            Gate::toffoli(0, 1, 3),
            Gate::toffoli(1, 3, 2),
            Gate::toffoli(0, 1, 3),
        ])
}

/// Qubit form of the ququart C³X: the ququart control becomes control 2
/// plus an ancilla, with levels `0 = |00⟩, 1 = |10⟩, 2 = |11⟩, 3 = |01⟩`
/// (control bit first). Control 0 lifts 1→2, control 1 lifts 2→3, level 3
/// fires the target, then both lifts are undone. Every Toffoli acts on the
/// former ququart pair; the X gates select level 3 (control bit at 0).
///
/// Layout: controls `0, 1, 2`, target `3`, ancilla `4`.
pub fn build_lanyon_qubit_c3x() -> Result<Circuit> {
    use QubitRole::*;
    Circuit::new(&[Control, Control, Control, Target, Workspace])?
        .with_meta(meta("lanyon_c3x", 3))
        .extend([
            Gate::toffoli(0, 2, 4),
            Gate::toffoli(1, 4, 2),
            Gate::x(2),
            Gate::toffoli(2, 4, 3),
            Gate::x(2),
            Gate::toffoli(1, 4, 2),
            Gate::toffoli(0, 2, 4),
        ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check_cnx, check_equivalence, oracle_cnu};

    #[test]
    fn base_case_is_bare_toffoli() {
        let c = build_ladder_cnx(2).unwrap();
        assert_eq!(c.gates(), &[Gate::toffoli(0, 1, 2)]);
        assert_eq!(c.ancilla_qubits().len(), 0);
    }

    #[test]
    fn n_three_uses_three_toffolis_and_one_ancilla() {
        let c = build_ladder_cnx(3).unwrap();
        assert_eq!(c.count_gates().gates.toffoli, 3);
        assert_eq!(c.count_gates().roles.process_ancillas, 1);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_small_n() {
        assert!(build_ladder_cnx(1).is_err());
        assert!(build_ladder_cnu(1, LocalUnitary::x()).is_err());
    }

    #[test]
    fn n_six_matches_oracle() {
        let c = build_ladder_cnx(6).unwrap();
        assert_eq!(c.count_gates().gates.toffoli, 9);
        let v = check_cnx(&c, 6).unwrap();
        assert!(v.is_exact(), "{v}");
        assert_eq!(v.inputs_checked, 1 << 7);
    }

    #[test]
    fn toffoli_sequence_is_a_palindrome() {
        for n in 2..=8 {
            let c = build_ladder_cnx(n).unwrap();
            let g = c.gates();
            let rev: Vec<_> = g.iter().rev().cloned().collect();
            assert_eq!(g, rev.as_slice());
        }
    }

    #[test]
    fn cnu_structure_and_semantics() {
        let x = build_ladder_cnu(3, LocalUnitary::x()).unwrap();
        let base = build_ladder_cnx(3).unwrap();
        let (tx, tb) = (x.count_gates(), base.count_gates());
        assert_eq!(tx.gates.toffoli, tb.gates.toffoli + 1);
        assert_eq!(tx.gates.cu, 1);
        assert_eq!(tx.roles.ancillas(), tb.roles.ancillas() + 1);
        assert!(check_cnx(&x, 3).unwrap().is_exact());

        let z = build_ladder_cnu(3, LocalUnitary::z()).unwrap();
        let v = check_equivalence(&z, &oracle_cnu(3, LocalUnitary::z()), &z.computational_qubits()).unwrap();
        assert!(v.is_exact(), "{v}");

        let sqrt_x = build_ladder_cnu(2, LocalUnitary::v()).unwrap();
        let v = check_equivalence(&sqrt_x, &oracle_cnu(2, LocalUnitary::v()), &[0, 1, 2]).unwrap();
        assert!(v.is_exact(), "{v}");
    }

    #[test]
    fn lanyon_circuits() {
        let t = build_lanyon_qubit_toffoli().unwrap();
        assert_eq!(t.count_gates().gates.toffoli, 3);
        assert!(check_cnx(&t, 2).unwrap().is_exact());

        let c3 = build_lanyon_qubit_c3x().unwrap();
        assert_eq!(c3.width(), 5);
        assert_eq!(c3.count_gates().gates.toffoli, 5);
        assert!(check_cnx(&c3, 3).unwrap().is_exact());
        for g in c3.gates().iter().filter(|g| g.is_toffoli()) {
            assert!(g.touches(2) && g.touches(4), "{g} must act on the former ququart");
        }
    }
}
