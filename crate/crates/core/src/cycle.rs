//! Cycle scheme: the n−1 controls after the first are split into `c` groups;
//! cycle `i` ANDs group `i` with the previous cycle's result (or control 0)
//! into a cycle ancilla, and the last cycle writes the target. The first
//! `c−1` cycles are then run again to clear the cycle ancillas.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitMeta, Gate, QubitRole};
use crate::cost::optimal_c;
use crate::decomp::GateBasis;
use crate::error::{Error, Result};
use crate::ladder::ladder_gates;
use crate::unitary::LocalUnitary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaBudget {
    pub cycle: usize,
    pub process: usize,
}

impl AncillaBudget {
    pub fn total(&self) -> usize {
        self.cycle + self.process
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePlan {
    pub n: usize,
    pub c: usize,
    /// Controls per cycle, in compute order. Balanced and ascending, so the
    /// last (never repeated) cycle is the most expensive one.
    pub group_sizes: Vec<usize>,
    /// Cycles run a second time during uncompute, in the order they run.
    pub repeated_cycles: Vec<usize>,
    pub ancilla_budget: AncillaBudget,
}

impl CyclePlan {
    /// Toffolis in cycle `i`: a ladder over the group plus one chained input.
    pub fn cycle_toffolis(&self, i: usize) -> usize {
        2 * self.group_sizes[i] - 1
    }

    pub fn predicted_toffolis(&self) -> usize {
        let once: usize = (0..self.c).map(|i| self.cycle_toffolis(i)).sum();
        let again: usize = self.repeated_cycles.iter().map(|&i| self.cycle_toffolis(i)).sum();
        once + again
    }

    /// Total number of cycles run, `2c − 1`.
    pub fn cycles_run(&self) -> usize {
        self.c + self.repeated_cycles.len()
    }
}

fn check_range(n: usize, c: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::param(format!("cycle scheme needs n >= 3, got n = {n}")));
    }
    if c < 1 || c > n - 1 {
        return Err(Error::param(format!("cycle count c = {c} outside 1..={}", n - 1)));
    }
    Ok(())
}

pub fn plan_cycles(n: usize, c: usize) -> Result<CyclePlan> {
    check_range(n, c)?;
    let (q, r) = ((n - 1) / c, (n - 1) % c);
    let group_sizes: Vec<usize> = (0..c).map(|i| if i < c - r { q } else { q + 1 }).collect();

    // Cheapest c−1 cycles, lowest index first among ties. With ascending
    // sizes this always leaves out the last cycle.
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by_key(|&i| (group_sizes[i], i));
    let mut repeated: Vec<usize> = order[..c - 1].to_vec();
    debug_assert!(!repeated.contains(&(c - 1)));
    repeated.sort_unstable_by(|a, b| b.cmp(a));

    let largest = *group_sizes.last().expect("c >= 1");
    Ok(CyclePlan {
        n,
        c,
        group_sizes,
        repeated_cycles: repeated,
        ancilla_budget: AncillaBudget {
            cycle: c - 1,
            process: largest - 1,
        },
    })
}

/// Layout: controls `0..n`, target `n`, cycle ancillas, then process ancillas.
pub fn build_cycle_cnx(n: usize, c: usize) -> Result<Circuit> {
    let plan = plan_cycles(n, c)?;
    build_from_plan(&plan, "cycle")
}

/// [`build_cycle_cnx`] with `c = ⌊√(n−1)⌋`.
pub fn build_cycle_cnx_auto(n: usize) -> Result<Circuit> {
    build_cycle_cnx(n, optimal_c(n)?)
}

/// Two halves joined through one ancilla: the first half's AND is computed
/// into it, the second half (with that ancilla as a control) fires the
/// target, and the first half is undone. This is the `c = 2` plan.
pub fn build_barenco_two_cycle_cnx(n: usize) -> Result<Circuit> {
    let plan = plan_cycles(n, 2)?;
    build_from_plan(&plan, "barenco2")
}

pub fn build_from_plan(plan: &CyclePlan, scheme: &str) -> Result<Circuit> {
    build_cycles(plan, scheme, None)
}

/// Cycle-scheme C^nU. The last cycle's final Toffoli writes a workspace
/// ancilla, which controls `u` on the target and is then cleared by the
/// same Toffoli: one Toffoli and one ancilla more than [`build_cycle_cnx`].
///
/// Layout as [`build_cycle_cnx`], with the workspace ancilla last.
pub fn build_cycle_cnu(n: usize, c: usize, u: LocalUnitary) -> Result<Circuit> {
    LocalUnitary::new(*u.matrix())?;
    let plan = plan_cycles(n, c)?;
    build_cycles(&plan, "cycle_cnu", Some(u))
}

fn build_cycles(plan: &CyclePlan, scheme: &str, u: Option<LocalUnitary>) -> Result<Circuit> {
    let (n, c) = (plan.n, plan.c);
    let budget = plan.ancilla_budget;
    let mut layout = vec![QubitRole::Control; n];
    layout.push(QubitRole::Target);
    layout.extend(std::iter::repeat_n(QubitRole::CycleAncilla, budget.cycle));
    layout.extend(std::iter::repeat_n(QubitRole::ProcessAncilla, budget.process));
    if u.is_some() {
        layout.push(QubitRole::Workspace);
    }
    let work = layout.len() - 1;

    let cycle_anc: Vec<usize> = (n + 1..n + 1 + budget.cycle).collect();
    let process: Vec<usize> = (n + 1 + budget.cycle..n + 1 + budget.cycle + budget.process).collect();

    let mut start = 1;
    let mut cycles = Vec::with_capacity(c);
    for (i, &size) in plan.group_sizes.iter().enumerate() {
        let mut inputs = vec![if i == 0 { 0 } else { cycle_anc[i - 1] }];
        inputs.extend(start..start + size);
        start += size;
        let last = i + 1 == c;
        let out = match (last, u) {
            (false, _) => cycle_anc[i],
            (true, None) => n,
            (true, Some(_)) => work,
        };
        let mut gates = ladder_gates(&inputs, &process, out);
        if let (true, Some(u)) = (last, u) {
            // Ladders are palindromes around the Toffoli that writes `out`.
            let mid = gates.len() / 2;
            let flip = gates[mid].clone();
            gates.splice(mid + 1..mid + 1, [Gate::cu(u, work, n), flip]);
        }
        cycles.push(gates);
    }
    debug_assert_eq!(start, n);

    let mut gates: Vec<_> = cycles.iter().flatten().cloned().collect();
    for &i in &plan.repeated_cycles {
        gates.extend(cycles[i].iter().cloned());
    }
    let meta = CircuitMeta {
        scheme: scheme.into(),
        n: Some(n),
        c: Some(c),
        basis: Some(GateBasis::NativeToffoli),
    };
    Circuit::new(&layout)?.with_meta(meta).extend(gates)
}
