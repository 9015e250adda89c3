mod common;

use common::*;
use mct_core::cost::{ancilla_count, optimal_c, total_toffolis};
use mct_core::decomp::{lower_circuit, GateBasis};
use mct_core::verify::{check_cnx, check_equivalence, full_unitary, oracle_cnu};
use mct_core::{
    build_barenco_two_cycle_cnx, build_cycle_cnu, build_cycle_cnx, build_cycle_cnx_auto, build_ladder_cnu,
    build_ladder_cnx, build_lanyon_qubit_c3x, plan_cycles, LocalUnitary, QubitRole,
};

#[test]
fn ladder_counts() {
    for n in 2..=12 {
        let t = build_ladder_cnx(n).unwrap().count_gates();
        assert_eq!(t.gates.toffoli, 2 * n - 3);
        assert_eq!(t.roles.ancillas(), n - 2);
        assert_eq!(t.roles.controls, n);
    }
}

#[test]
fn ladder_three_matches_kron_reference() {
    // Controls 0,1,2, target 3, ancilla 4: the C³X block of the full matrix.
    let circ = build_ladder_cnx(3).unwrap();
    let u = full_unitary(&circ).unwrap();
    let reference = controlled(5, &[0, 1, 2], 3, &x());
    for j in 0..16 {
        for i in 0..32 {
            assert!((u[(i, j)] - reference[(i, j)]).norm() < 1e-10);
        }
    }
}

#[test]
fn cycle_builds_are_correct_on_desk_grid() {
    for n in 3..=9 {
        for c in 1..=optimal_c(n).unwrap() + 1 {
            if c > n - 1 {
                continue;
            }
            let circ = build_cycle_cnx(n, c).unwrap();
            let v = check_cnx(&circ, n).unwrap();
            assert!(v.is_exact(), "n={n} c={c}: {v}");
            let plan = plan_cycles(n, c).unwrap();
            assert_eq!(circ.count_gates().roles.ancillas(), plan.ancilla_budget.total());
            assert_eq!(circ.count_gates().gates.toffoli, plan.predicted_toffolis());
        }
    }
}

#[test]
fn built_toffolis_never_exceed_closed_form_and_are_odd() {
    for n in 3..=20 {
        for c in 1..n {
            let built = build_cycle_cnx(n, c).unwrap().count_gates().gates.toffoli as u64;
            let eq2 = total_toffolis(n, c).unwrap();
            assert_eq!(built % 2, 1, "n={n} c={c}");
            assert!(eq2 == built || eq2 == built + 1, "n={n} c={c}: built {built}, eq2 {eq2}");
        }
    }
}

#[test]
fn built_ancillas_follow_eq3_and_cnu_follows_conclusion_form() {
    for n in 3..=15 {
        let c = optimal_c(n).unwrap();
        let a = ancilla_count(n, c).unwrap();
        let x = build_cycle_cnx_auto(n).unwrap().count_gates().roles.ancillas() as u64;
        let u = build_cycle_cnu(n, c, LocalUnitary::x()).unwrap().count_gates().roles.ancillas() as u64;
        assert_eq!(x, a.eq3, "n={n}");
        assert_eq!(u, a.conclusion_form, "n={n}");
    }
}

#[test]
fn monotone_trade_off_up_to_optimal_c() {
    for n in 3..=30 {
        let opt = optimal_c(n).unwrap();
        let mut prev: Option<(usize, usize)> = None;
        for c in 1..=opt {
            let p = plan_cycles(n, c).unwrap();
            let now = (p.ancilla_budget.total(), p.predicted_toffolis());
            if let Some((anc, tof)) = prev {
                assert!(now.0 <= anc, "n={n} c={c}: ancillas rose");
                assert!(now.1 >= tof, "n={n} c={c}: Toffolis fell");
            }
            prev = Some(now);
        }
    }
}

#[test]
fn ancillas_restored_in_every_basis() {
    for (n, c) in [(4, 2), (5, 2), (6, 3)] {
        let circ = build_cycle_cnx(n, c).unwrap();
        for basis in GateBasis::ALL {
            let low = lower_circuit(&circ, basis).unwrap();
            let v = check_cnx(&low, n).unwrap();
            assert!(v.is_exact(), "n={n} c={c} {basis}: {v}");
        }
    }
}

#[test]
fn layouts_put_roles_in_order() {
    let circ = build_cycle_cnx(7, 2).unwrap();
    let roles = circ.roles();
    assert!(roles[..7].iter().all(|&r| r == QubitRole::Control));
    assert_eq!(roles[7], QubitRole::Target);
    assert_eq!(roles[8], QubitRole::CycleAncilla);
    assert!(roles[9..].iter().all(|&r| r == QubitRole::ProcessAncilla));
}

#[test]
fn two_cycle_split_is_correct() {
    for n in 3..=8 {
        let circ = build_barenco_two_cycle_cnx(n).unwrap();
        assert!(check_cnx(&circ, n).unwrap().is_exact(), "n={n}");
        let odd = n % 2 == 1;
        let expected = if odd { 3 * (n - 2) } else { 3 * n - 7 };
        assert_eq!(circ.count_gates().gates.toffoli, expected, "n={n}");
    }
}

#[test]
fn controlled_unitaries_in_all_bases() {
    let u = LocalUnitary::ry(0.7) * LocalUnitary::rz(-1.3);
    for n in 2..=4 {
        let circ = build_ladder_cnu(n, u).unwrap();
        let oracle = oracle_cnu(n, u);
        for basis in GateBasis::ALL {
            let low = lower_circuit(&circ, basis).unwrap();
            let v = check_equivalence(&low, &oracle, &low.computational_qubits()).unwrap();
            assert!(v.is_exact(), "n={n} {basis}: {v}");
        }
    }
    let circ = build_cycle_cnu(7, 2, u).unwrap();
    let v = check_equivalence(&circ, &oracle_cnu(7, u), &circ.computational_qubits()).unwrap();
    assert!(v.is_exact(), "{v}");
}

#[test]
fn lanyon_c3x_lowers_to_77_cnot_local_ops() {
    let circ = build_lanyon_qubit_c3x().unwrap();
    let low = lower_circuit(&circ, GateBasis::CnotLocal).unwrap();
    assert_eq!(low.size(), 5 * 15 + 2);
    assert!(check_cnx(&low, 3).unwrap().is_exact());
}
