//! Runnable versions of the analytical definitions used to reason about WP
//! on planted instances: support deficiency, stability and violation of
//! variables w.r.t. an edge order and an initial message vector, the
//! iterative core construction, message-correctness oracles, and a clause
//! density counter.
//!
//! These are diagnostics and test oracles. The solving pipeline never
//! consults them.
//!
//! All threshold comparisons are exact: a condition like `count < d/3` is
//! evaluated as `3 * count < d`, so fractional thresholds never go through
//! a division.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::factor_graph::{EdgeId, FactorGraph, OccurrenceIndex};
use crate::formula::{Assignment, Clause, Formula, PartialAssignment, VarSet, Variable};
use crate::wp::{EdgeOrder, MessageState};

/// Density parameter and the thresholds derived from it. Thresholds are
/// compared exactly via cross-multiplication, never materialized as floats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityParams {
    pub d: f64,
}

impl StabilityParams {
    pub fn new(d: f64) -> Self {
        assert!(d > 0.0, "density parameter must be positive");
        StabilityParams { d }
    }

    /// A1 membership: support strictly below d/3.
    pub fn support_deficient(&self, support: usize) -> bool {
        3.0 * (support as f64) < self.d
    }

    /// Stability conditions (a)/(b): an absolute count difference within d/30.
    pub fn within_gap(&self, diff: u64) -> bool {
        30.0 * (diff as f64) <= self.d
    }

    /// Violation conditions (a)/(b): strictly above d/30.
    pub fn exceeds_gap(&self, diff: u64) -> bool {
        30.0 * (diff as f64) > self.d
    }

    /// Violation condition (c): warned support strictly below d/7.
    pub fn warn_deficient(&self, warned_support: usize) -> bool {
        7.0 * (warned_support as f64) < self.d
    }

    /// Iterative condition: supports fewer than d/4 clauses inside the core.
    pub fn core_support_short(&self, supported_inside: usize) -> bool {
        4.0 * (supported_inside as f64) < self.d
    }

    /// Iterative condition: appears in more than d/30 clauses leaving the core.
    pub fn core_external_excess(&self, external: usize) -> bool {
        30.0 * (external as f64) > self.d
    }

    /// Derived thresholds for display.
    pub fn support_min(&self) -> f64 {
        self.d / 3.0
    }

    pub fn gap(&self) -> f64 {
        self.d / 30.0
    }

    pub fn core_support_min(&self) -> f64 {
        self.d / 4.0
    }

    pub fn warn_min(&self) -> f64 {
        self.d / 7.0
    }
}

/// Category of a clause-to-variable edge relative to a reference assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeCat {
    /// The variable is the clause's unique satisfier.
    Support,
    /// The variable's literal agrees with the reference, not uniquely.
    AgreeNonsupport,
    /// The variable's literal disagrees with the reference.
    Disagree,
}

fn edge_categories(formula: &Formula, graph: &FactorGraph, phi: &Assignment) -> Vec<EdgeCat> {
    let mut cats = vec![EdgeCat::Disagree; graph.edge_count()];
    for (c, clause) in formula.clauses().iter().enumerate() {
        let sat = clause
            .literals()
            .iter()
            .filter(|l| l.satisfied_by(phi.get(l.var)))
            .count();
        for e in graph.clause_edges(c) {
            let lit = clause.literal_for(graph.edge_var(e)).expect("incident");
            cats[e.index()] = if lit.satisfied_by(phi.get(lit.var)) {
                if sat == 1 {
                    EdgeCat::Support
                } else {
                    EdgeCat::AgreeNonsupport
                }
            } else {
                EdgeCat::Disagree
            };
        }
    }
    cats
}

/// Per-variable sorted lists of order positions, split by edge category,
/// optionally restricted to edges carrying a 1 in a message vector.
struct PositionProfile {
    agree_ns: Vec<Vec<u32>>,
    disagree: Vec<Vec<u32>>,
}

impl PositionProfile {
    fn build(
        graph: &FactorGraph,
        cats: &[EdgeCat],
        order: &EdgeOrder,
        only_ones_of: Option<&MessageState>,
    ) -> Self {
        let n = graph.n() as usize;
        let mut agree_ns = vec![Vec::new(); n];
        let mut disagree = vec![Vec::new(); n];
        for (pos, &e) in order.edges().iter().enumerate() {
            if let Some(state) = only_ones_of {
                if state.get(e) == 0 {
                    continue;
                }
            }
            let var = graph.edge_var(e).index();
            match cats[e.index()] {
                EdgeCat::AgreeNonsupport => agree_ns[var].push(pos as u32),
                EdgeCat::Disagree => disagree[var].push(pos as u32),
                EdgeCat::Support => {}
            }
        }
        PositionProfile { agree_ns, disagree }
    }

    /// |#(agreeing non-support edges of `var` before `pos`)
    ///  - #(disagreeing edges of `var` before `pos`)|
    fn prefix_diff(&self, var: Variable, pos: u32) -> u64 {
        let a = prefix_count(&self.agree_ns[var.index()], pos);
        let d = prefix_count(&self.disagree[var.index()], pos);
        a.abs_diff(d)
    }

    fn total_diff(&self, var: Variable) -> u64 {
        (self.agree_ns[var.index()].len() as u64)
            .abs_diff(self.disagree[var.index()].len() as u64)
    }
}

fn prefix_count(sorted: &[u32], pos: u32) -> u64 {
    sorted.partition_point(|&p| p < pos) as u64
}

/// Variables whose support w.r.t. the reference assignment is below d/3 (A1).
pub fn support_deficient(occ: &OccurrenceIndex, n: u32, params: &StabilityParams) -> VarSet {
    let mut set = VarSet::empty(n);
    for i in 1..=n {
        let var = Variable::new(i);
        if params.support_deficient(occ.supported(var).len()) {
            set.insert(var);
        }
    }
    set
}

/// Variables that are not stable w.r.t. the edge order (A2).
///
/// A variable is stable iff for every incident edge (at position `i` in the
/// order) each co-occurring variable `y` of that edge's clause satisfies:
/// (a) the counts of y's agreeing-non-support and disagreeing edges before
/// `i` differ by at most d/30, (b) the totals differ by at most d/30, and
/// (c) y supports at least d/3 clauses. Variables without incident edges
/// are vacuously stable.
pub fn unstable(
    formula: &Formula,
    graph: &FactorGraph,
    phi: &Assignment,
    occ: &OccurrenceIndex,
    order: &EdgeOrder,
    params: &StabilityParams,
) -> VarSet {
    let cats = edge_categories(formula, graph, phi);
    let profile = PositionProfile::build(graph, &cats, order, None);
    let n = graph.n();

    // (b) and (c) do not depend on the position; precompute per variable.
    let static_bad: Vec<bool> = (1..=n)
        .map(|i| {
            let var = Variable::new(i);
            !params.within_gap(profile.total_diff(var))
                || params.support_deficient(occ.supported(var).len())
        })
        .collect();

    let mut set = VarSet::empty(n);
    for (pos, &e) in order.edges().iter().enumerate() {
        let var = graph.edge_var(e);
        if set.contains(var) {
            continue;
        }
        let clause = graph.edge_clause(e);
        for f in graph.clause_edges(clause) {
            if f == e {
                continue;
            }
            let other = graph.edge_var(f);
            if static_bad[other.index()]
                || !params.within_gap(profile.prefix_diff(other, pos as u32))
            {
                set.insert(var);
                break;
            }
        }
    }
    set
}

/// Stable variables violated by the initial message vector (A3).
///
/// Mirrors the stability conditions with counts restricted to edges whose
/// initial message is 1, with strict thresholds, plus condition (c): a
/// co-occurring variable whose warned support is below d/7.
pub fn violated(
    formula: &Formula,
    graph: &FactorGraph,
    phi: &Assignment,
    order: &EdgeOrder,
    alpha: &MessageState,
    params: &StabilityParams,
    stable: &VarSet,
) -> VarSet {
    let cats = edge_categories(formula, graph, phi);
    let profile = PositionProfile::build(graph, &cats, order, Some(alpha));
    let n = graph.n();

    // warned support per variable: support edges carrying an initial 1
    let mut warned_support = vec![0usize; n as usize];
    for e in 0..graph.edge_count() as u32 {
        let e = EdgeId(e);
        if cats[e.index()] == EdgeCat::Support && alpha.get(e) == 1 {
            warned_support[graph.edge_var(e).index()] += 1;
        }
    }

    let static_bad: Vec<bool> = (1..=n)
        .map(|i| {
            let var = Variable::new(i);
            params.exceeds_gap(profile.total_diff(var))
                || params.warn_deficient(warned_support[var.index()])
        })
        .collect();

    let mut set = VarSet::empty(n);
    for (pos, &e) in order.edges().iter().enumerate() {
        let var = graph.edge_var(e);
        if !stable.contains(var) || set.contains(var) {
            continue;
        }
        let clause = graph.edge_clause(e);
        for f in graph.clause_edges(clause) {
            if f == e {
                continue;
            }
            let other = graph.edge_var(f);
            if static_bad[other.index()]
                || params.exceeds_gap(profile.prefix_diff(other, pos as u32))
            {
                set.insert(var);
                break;
            }
        }
    }
    set
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RemovalReason {
    /// Supported fewer than d/4 clauses inside the shrinking core.
    SupportShort { supported_inside: usize },
    /// Appeared in more than d/30 clauses with a variable outside the core.
    ExternalExcess { external: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct RemovalRecord {
    pub var: u32,
    pub reason: RemovalReason,
}

/// Result of the iterative core construction.
#[derive(Clone, Debug)]
pub struct CoreReport {
    /// The surviving core.
    pub core: VarSet,
    /// A1: support-deficient variables.
    pub support_deficient: VarSet,
    /// A2: unstable variables.
    pub unstable: VarSet,
    /// A3: stable variables violated by the initial messages.
    pub violated: VarSet,
    /// Iterative removals, in processing order.
    pub trace: Vec<RemovalRecord>,
}

/// Builds the core: start from all variables minus A1, A2, A3, then
/// repeatedly remove any variable that supports fewer than d/4 clauses
/// whose variables all remain in the set, or appears in more than d/30
/// clauses with a removed/excluded variable. The result is independent of
/// the removal order; processing is lowest-variable-first for determinism.
pub fn core(
    formula: &Formula,
    graph: &FactorGraph,
    phi: &Assignment,
    occ: &OccurrenceIndex,
    order: &EdgeOrder,
    alpha: &MessageState,
    params: &StabilityParams,
) -> CoreReport {
    let n = graph.n();
    let a1 = support_deficient(occ, n, params);
    let a2 = unstable(formula, graph, phi, occ, order, params);
    let stable = {
        let mut s = VarSet::full(n);
        s.subtract(&a2);
        s
    };
    let a3 = violated(formula, graph, phi, order, alpha, params, &stable);

    let mut in_core = vec![true; n as usize];
    for v in a1.iter().chain(a2.iter()).chain(a3.iter()) {
        in_core[v.index()] = false;
    }

    // supporter of each clause w.r.t. phi, if any
    let supporter: Vec<Option<Variable>> = formula
        .clauses()
        .iter()
        .map(|c| {
            let mut sat = c.literals().iter().filter(|l| l.satisfied_by(phi.get(l.var)));
            match (sat.next(), sat.next()) {
                (Some(l), None) => Some(l.var),
                _ => None,
            }
        })
        .collect();

    // out_count[c]: variables of clause c currently outside the core
    let mut out_count = vec![0usize; formula.len()];
    for (c, clause) in formula.clauses().iter().enumerate() {
        out_count[c] = clause
            .literals()
            .iter()
            .filter(|l| !in_core[l.var.index()])
            .count();
    }

    let mut supported_inside = vec![0usize; n as usize];
    let mut external = vec![0usize; n as usize];
    for (c, clause) in formula.clauses().iter().enumerate() {
        if out_count[c] == 0 {
            if let Some(s) = supporter[c] {
                supported_inside[s.index()] += 1;
            }
        } else {
            for l in clause.literals() {
                if in_core[l.var.index()] {
                    external[l.var.index()] += 1;
                }
            }
        }
    }

    let violates = |supported: usize, ext: usize| {
        params.core_support_short(supported) || params.core_external_excess(ext)
    };

    let mut pending: BTreeSet<u32> = (0..n as usize)
        .filter(|&i| in_core[i] && violates(supported_inside[i], external[i]))
        .map(|i| i as u32 + 1)
        .collect();

    let mut trace = Vec::new();
    while let Some(&num) = pending.iter().next() {
        pending.remove(&num);
        let var = Variable::new(num);
        if !in_core[var.index()]
            || !violates(supported_inside[var.index()], external[var.index()])
        {
            continue;
        }
        let reason = if params.core_support_short(supported_inside[var.index()]) {
            RemovalReason::SupportShort { supported_inside: supported_inside[var.index()] }
        } else {
            RemovalReason::ExternalExcess { external: external[var.index()] }
        };
        trace.push(RemovalRecord { var: num, reason });
        in_core[var.index()] = false;

        for &e in graph.pos_edges(var).iter().chain(graph.neg_edges(var)) {
            let c = graph.edge_clause(e);
            out_count[c] += 1;
            if out_count[c] != 1 {
                continue; // clause was already external
            }
            // clause just left the core-restricted formula
            if let Some(s) = supporter[c] {
                if in_core[s.index()] {
                    supported_inside[s.index()] -= 1;
                    if violates(supported_inside[s.index()], external[s.index()]) {
                        pending.insert(s.number());
                    }
                }
            }
            for f in graph.clause_edges(c) {
                let w = graph.edge_var(f);
                if w == var || !in_core[w.index()] {
                    continue;
                }
                external[w.index()] += 1;
                if violates(supported_inside[w.index()], external[w.index()]) {
                    pending.insert(w.number());
                }
            }
        }
    }

    let core = VarSet::from_vars(
        n,
        (0..n as usize)
            .filter(|&i| in_core[i])
            .map(|i| Variable::new(i as u32 + 1)),
    );
    CoreReport { core, support_deficient: a1, unstable: a2, violated: a3, trace }
}

/// The reference value of a clause-to-variable message when the other
/// variables signal their planted values: 1 iff the variable's literal
/// agrees with the reference and every other literal disagrees (the
/// variable supports the clause).
pub fn correct_message(clause: &Clause, var: Variable, phi: &Assignment) -> u8 {
    let Some(own) = clause.literal_for(var) else { return 0 };
    if !own.satisfied_by(phi.get(var)) {
        return 0;
    }
    let alone = clause
        .literals()
        .iter()
        .all(|l| l.var == var || !l.satisfied_by(phi.get(l.var)));
    alone as u8
}

/// Number of stored messages on core-internal clauses differing from their
/// reference value, together with the total number of such messages. A
/// clause is core-internal when all its variables lie in `core`.
pub fn core_message_mismatch_stats(
    formula: &Formula,
    graph: &FactorGraph,
    state: &MessageState,
    core: &VarSet,
    phi: &Assignment,
) -> (usize, usize) {
    let mut total = 0usize;
    let mut bad = 0usize;
    for (c, clause) in formula.clauses().iter().enumerate() {
        if !clause.literals().iter().all(|l| core.contains(l.var)) {
            continue;
        }
        for e in graph.clause_edges(c) {
            total += 1;
            let var = graph.edge_var(e);
            if state.get(e) != correct_message(clause, var, phi) {
                bad += 1;
            }
        }
    }
    (bad, total)
}

/// True iff every stored message within the core-restricted formula equals
/// its reference value.
pub fn core_messages_correct(
    formula: &Formula,
    graph: &FactorGraph,
    state: &MessageState,
    core: &VarSet,
    phi: &Assignment,
) -> bool {
    core_message_mismatch_stats(formula, graph, state, core, phi).0 == 0
}

/// Number of clauses containing at least two variables from `set`.
pub fn density_count(formula: &Formula, set: &VarSet) -> usize {
    formula
        .clauses()
        .iter()
        .filter(|c| c.literals().iter().filter(|l| set.contains(l.var)).count() >= 2)
        .count()
}

/// The factor graph WP effectively runs on once the core has converged:
/// substitute every core variable with its reference value and simplify.
/// The returned formula keeps the original variable numbering.
pub fn noncore_residual(formula: &Formula, phi: &Assignment, core: &VarSet) -> Formula {
    let mut psi = PartialAssignment::unassigned(formula.n());
    for var in core.iter() {
        psi.assign(var, phi.get(var));
    }
    formula.simplify(&psi).formula
}
