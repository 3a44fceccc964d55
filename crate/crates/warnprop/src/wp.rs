//! The Warning Propagation engine.
//!
//! Only clause-to-variable messages are stored, one bit per directed edge.
//! A pass visits the edges in a random order and rewrites each message from
//! the currently stored values: the variable-to-clause messages it needs are
//! recomputed on the fly, so updates made earlier in the same pass feed back
//! into later ones. The engine draws a fresh edge order for every pass and
//! stops after the first pass that changes nothing.
//!
//! Variable-to-clause recomputation is O(1) per query: the engine keeps, for
//! every variable, the running sums of its incoming messages over positive
//! and negative occurrences and adjusts them whenever a stored message
//! flips. All arithmetic is exact integer arithmetic.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::factor_graph::{EdgeId, FactorGraph};
use crate::formula::{Formula, PartialAssignment, Ternary, Variable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WpError {
    #[error("variable x{var} does not occur in clause {clause}")]
    VarNotInClause { var: u32, clause: usize },
    #[error("edge order is not a permutation of the graph's edges")]
    InvalidOrder,
}

/// The clause-to-variable message vector, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageState {
    values: Vec<u8>,
}

impl MessageState {
    pub fn zero(edge_count: usize) -> Self {
        MessageState { values: vec![0; edge_count] }
    }

    /// Builds a state from explicit 0/1 values.
    pub fn from_values(values: Vec<u8>) -> Self {
        assert!(values.iter().all(|&v| v <= 1), "messages are 0 or 1");
        MessageState { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> u8 {
        self.values[e.index()]
    }

    pub(crate) fn set(&mut self, e: EdgeId, v: u8) {
        self.values[e.index()] = v;
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn ones(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }
}

/// A visiting order over the directed clause-to-variable edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrder {
    edges: Vec<EdgeId>,
}

impl EdgeOrder {
    /// Validates that `edges` is a permutation of 0..edge_count.
    pub fn new(edges: Vec<EdgeId>, edge_count: usize) -> Result<Self, WpError> {
        if edges.len() != edge_count {
            return Err(WpError::InvalidOrder);
        }
        let mut seen = vec![false; edge_count];
        for e in &edges {
            if e.index() >= edge_count || seen[e.index()] {
                return Err(WpError::InvalidOrder);
            }
            seen[e.index()] = true;
        }
        Ok(EdgeOrder { edges })
    }

    pub fn random(edge_count: usize, rng: &mut impl Rng) -> Self {
        let mut edges: Vec<EdgeId> = (0..edge_count as u32).map(EdgeId).collect();
        edges.shuffle(rng);
        EdgeOrder { edges }
    }

    pub fn identity(edge_count: usize) -> Self {
        EdgeOrder { edges: (0..edge_count as u32).map(EdgeId).collect() }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WpConfig {
    pub max_passes: usize,
    pub seed: u64,
    /// Keep the initial state and a snapshot after every pass, plus the
    /// edge orders used. Needed by the core diagnostics.
    pub record_history: bool,
}

impl WpConfig {
    /// Default pass cap for an n-variable instance: max(100, ceil(20 log2 n)).
    pub fn default_max_passes(n: u32) -> usize {
        let bits = (n.max(2) as f64).log2();
        100usize.max((20.0 * bits).ceil() as usize)
    }

    pub fn for_instance(n: u32, seed: u64) -> Self {
        WpConfig {
            max_passes: Self::default_max_passes(n),
            seed,
            record_history: false,
        }
    }
}

/// Snapshots of a recorded run: the initial message vector, the state after
/// each pass, and the edge order each pass used.
#[derive(Clone, Debug)]
pub struct WpHistory {
    pub initial: MessageState,
    pub after_pass: Vec<MessageState>,
    pub orders: Vec<EdgeOrder>,
}

#[derive(Clone, Debug)]
pub struct WpResult {
    pub converged: bool,
    /// Total passes executed, including the final all-quiet pass that
    /// confirms convergence.
    pub passes_used: usize,
    pub final_messages: MessageState,
    /// Per-variable warning balance; sign determines the assignment.
    pub bias: Vec<i64>,
    pub assignment: PartialAssignment,
    /// Messages changed in each pass.
    pub changes_per_pass: Vec<usize>,
    pub history: Option<WpHistory>,
}

/// Draws every message independently 0 or 1 with probability 1/2.
pub fn init_messages(graph: &FactorGraph, rng: &mut impl Rng) -> MessageState {
    MessageState {
        values: (0..graph.edge_count())
            .map(|_| rng.random_bool(0.5) as u8)
            .collect(),
    }
}

/// The message a variable sends a clause it occurs in: the warning balance
/// over its other occurrences (positive occurrences count +1 per warning,
/// negative ones -1). A variable occurring only in `clause` sends 0.
pub fn var_to_clause(
    graph: &FactorGraph,
    state: &MessageState,
    var: Variable,
    clause: usize,
) -> Result<i64, WpError> {
    let own = graph
        .edge_of(clause, var)
        .ok_or(WpError::VarNotInClause { var: var.number(), clause })?;
    let mut sum = 0i64;
    for &e in graph.pos_edges(var) {
        if e != own {
            sum += state.get(e) as i64;
        }
    }
    for &e in graph.neg_edges(var) {
        if e != own {
            sum -= state.get(e) as i64;
        }
    }
    Ok(sum)
}

/// The warning a clause sends a variable, recomputed from the stored state:
/// 1 iff every other literal currently signals it will not satisfy the
/// clause. A width-1 clause always warns.
pub fn clause_to_var_value(
    graph: &FactorGraph,
    state: &MessageState,
    clause: usize,
    var: Variable,
) -> Result<u8, WpError> {
    let own = graph
        .edge_of(clause, var)
        .ok_or(WpError::VarNotInClause { var: var.number(), clause })?;
    let mut value = 1u8;
    for f in graph.clause_edges(clause) {
        if f == own {
            continue;
        }
        let other = graph.edge_var(f);
        let msg = var_to_clause(graph, state, other, clause)?;
        let fires = if graph.edge_positive(f) { msg < 0 } else { msg > 0 };
        if !fires {
            value = 0;
            break;
        }
    }
    Ok(value)
}

/// Per-variable running sums of stored messages, kept in step with flips so
/// variable-to-clause messages cost O(1) to evaluate mid-pass.
struct WarningSums {
    pos: Vec<i64>,
    neg: Vec<i64>,
}

impl WarningSums {
    fn build(graph: &FactorGraph, state: &MessageState) -> Self {
        let mut pos = vec![0i64; graph.n() as usize];
        let mut neg = vec![0i64; graph.n() as usize];
        for e in 0..graph.edge_count() as u32 {
            let e = EdgeId(e);
            let var = graph.edge_var(e).index();
            if graph.edge_positive(e) {
                pos[var] += state.get(e) as i64;
            } else {
                neg[var] += state.get(e) as i64;
            }
        }
        WarningSums { pos, neg }
    }

    #[inline]
    fn var_to_clause(
        &self,
        graph: &FactorGraph,
        state: &MessageState,
        other_edge: EdgeId,
    ) -> i64 {
        // other_edge is the clause's own message to that variable, which is
        // excluded from the variable's reply.
        let var = graph.edge_var(other_edge).index();
        let own = state.get(other_edge) as i64;
        if graph.edge_positive(other_edge) {
            self.pos[var] - own - self.neg[var]
        } else {
            self.pos[var] - (self.neg[var] - own)
        }
    }

    #[inline]
    fn apply_flip(&mut self, graph: &FactorGraph, e: EdgeId, delta: i64) {
        let var = graph.edge_var(e).index();
        if graph.edge_positive(e) {
            self.pos[var] += delta;
        } else {
            self.neg[var] += delta;
        }
    }
}

fn update_edge(
    graph: &FactorGraph,
    state: &mut MessageState,
    sums: &mut WarningSums,
    e: EdgeId,
) -> bool {
    let clause = graph.edge_clause(e);
    let mut new = 1u8;
    for f in graph.clause_edges(clause) {
        if f == e {
            continue;
        }
        let reply = sums.var_to_clause(graph, state, f);
        let fires = if graph.edge_positive(f) { reply < 0 } else { reply > 0 };
        if !fires {
            new = 0;
            break;
        }
    }
    let old = state.get(e);
    if new != old {
        state.set(e, new);
        sums.apply_flip(graph, e, new as i64 - old as i64);
        true
    } else {
        false
    }
}

/// Runs one pass over the edges in the given order, updating messages in
/// place with within-pass feedback. Returns the number of changed messages.
pub fn run_pass(graph: &FactorGraph, state: &mut MessageState, order: &EdgeOrder) -> usize {
    debug_assert_eq!(order.len(), graph.edge_count());
    let mut sums = WarningSums::build(graph, state);
    let mut changed = 0usize;
    for &e in order.edges() {
        if update_edge(graph, state, &mut sums, e) {
            changed += 1;
        }
    }
    changed
}

/// Warning balance of every variable under the given state.
pub fn compute_bias(graph: &FactorGraph, state: &MessageState) -> Vec<i64> {
    let sums = WarningSums::build(graph, state);
    (0..graph.n() as usize)
        .map(|i| sums.pos[i] - sums.neg[i])
        .collect()
}

/// Partial assignment read off a bias vector: positive balance means TRUE,
/// negative means FALSE, zero stays unassigned.
pub fn assignment_from_bias(bias: &[i64]) -> PartialAssignment {
    let mut psi = PartialAssignment::unassigned(bias.len() as u32);
    for (i, &b) in bias.iter().enumerate() {
        let var = Variable::new(i as u32 + 1);
        if b > 0 {
            psi.set(var, Ternary::True);
        } else if b < 0 {
            psi.set(var, Ternary::False);
        }
    }
    psi
}

/// Order-independent fixed-point check: recomputing every message from the
/// stored state must reproduce it.
pub fn is_fixed_point(graph: &FactorGraph, state: &MessageState) -> bool {
    let sums = WarningSums::build(graph, state);
    (0..graph.edge_count() as u32).all(|id| {
        let e = EdgeId(id);
        let clause = graph.edge_clause(e);
        let mut expect = 1u8;
        for f in graph.clause_edges(clause) {
            if f == e {
                continue;
            }
            let reply = sums.var_to_clause(graph, state, f);
            let fires = if graph.edge_positive(f) { reply < 0 } else { reply > 0 };
            if !fires {
                expect = 0;
                break;
            }
        }
        expect == state.get(e)
    })
}

/// Runs Warning Propagation on a prebuilt graph.
pub fn run_on_graph(graph: &FactorGraph, config: &WpConfig) -> WpResult {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = init_messages(graph, &mut rng);

    let mut history = config.record_history.then(|| WpHistory {
        initial: state.clone(),
        after_pass: Vec::new(),
        orders: Vec::new(),
    });

    let mut converged = false;
    let mut passes_used = 0usize;
    let mut changes_per_pass = Vec::new();
    while passes_used < config.max_passes {
        let order = EdgeOrder::random(graph.edge_count(), &mut rng);
        let changed = run_pass(graph, &mut state, &order);
        passes_used += 1;
        changes_per_pass.push(changed);
        if let Some(h) = history.as_mut() {
            h.after_pass.push(state.clone());
            h.orders.push(order);
        }
        if changed == 0 {
            converged = true;
            break;
        }
    }

    let bias = compute_bias(graph, &state);
    let assignment = assignment_from_bias(&bias);
    WpResult {
        converged,
        passes_used,
        final_messages: state,
        bias,
        assignment,
        changes_per_pass,
        history,
    }
}

/// Runs Warning Propagation on a formula; non-convergence within the pass
/// cap is reported through `converged`, never an error.
pub fn run(formula: &Formula, config: &WpConfig) -> WpResult {
    run_on_graph(&FactorGraph::build(formula), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Literal};

    fn v(i: u32) -> Variable {
        Variable::new(i)
    }

    fn formula(n: u32, clauses: &[&[i32]]) -> Formula {
        Formula::new(
            n,
            clauses
                .iter()
                .map(|lits| {
                    Clause::new(
                        lits.iter()
                            .map(|&l| Literal {
                                var: v(l.unsigned_abs()),
                                positive: l > 0,
                            })
                            .collect(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn init_is_deterministic_and_balanced() {
        // ~1e5 edges via 2-clauses over disjoint variable pairs
        let n = 100_000u32;
        let mut cl = Vec::new();
        for i in (1..n).step_by(2) {
            cl.push(
                Clause::new(vec![Literal::pos(v(i)), Literal::neg(v(i + 1))]).unwrap(),
            );
        }
        let f = Formula::new(n, cl).unwrap();
        let g = FactorGraph::build(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = init_messages(&g, &mut rng);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = init_messages(&g, &mut rng);
        assert_eq!(a, b);
        let mean = a.ones() as f64 / a.len() as f64;
        assert!((0.49..=0.51).contains(&mean), "mean {mean}");
    }

    #[test]
    fn init_on_edgeless_graph_is_empty() {
        let g = FactorGraph::build(&Formula::empty(4));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(init_messages(&g, &mut rng).is_empty());
    }

    #[test]
    fn var_to_clause_examples() {
        // x1 occurs only in clause 0 -> message 0
        let f = formula(3, &[&[1, 2, 3]]);
        let g = FactorGraph::build(&f);
        let state = MessageState::zero(g.edge_count());
        assert_eq!(var_to_clause(&g, &state, v(1), 0), Ok(0));

        // two positive warnings and one negative, target excluded -> 2 - 1 = 1
        let f = formula(4, &[&[1, 2, 3], &[1, 2, 4], &[-1, 3, 4], &[1, 3, 4]]);
        let g = FactorGraph::build(&f);
        let mut state = MessageState::zero(g.edge_count());
        for c in [0usize, 1, 2] {
            let e = g.edge_of(c, v(1)).unwrap();
            state.set(e, 1);
        }
        // from clause 3's perspective: positives {c0:1, c1:1}, negatives {c2:1}
        assert_eq!(var_to_clause(&g, &state, v(1), 3), Ok(1));

        // all incoming zero -> 0
        let state = MessageState::zero(g.edge_count());
        assert_eq!(var_to_clause(&g, &state, v(1), 3), Ok(0));

        // error path
        assert_eq!(
            var_to_clause(&g, &state, v(2), 2),
            Err(WpError::VarNotInClause { var: 2, clause: 2 })
        );
    }

    #[test]
    fn clause_to_var_examples() {
        // unit clause always warns
        let f = formula(1, &[&[1]]);
        let g = FactorGraph::build(&f);
        let state = MessageState::zero(1);
        assert_eq!(clause_to_var_value(&g, &state, 0, v(1)), Ok(1));

        // C = (x | !y | !z) with y -> C = 1 > 0 and z -> C = 3 > 0: warning fires
        let f = formula(
            7,
            &[
                &[1, -2, -3],
                // y = x2 receives one positive warning besides C
                &[2, 4, 5],
                // z = x3 receives three positive warnings besides C
                &[3, 4, 5],
                &[3, 5, 6],
                &[3, 6, 7],
            ],
        );
        let g = FactorGraph::build(&f);
        let mut state = MessageState::zero(g.edge_count());
        state.set(g.edge_of(1, v(2)).unwrap(), 1);
        for c in [2usize, 3, 4] {
            state.set(g.edge_of(c, v(3)).unwrap(), 1);
        }
        assert_eq!(var_to_clause(&g, &state, v(2), 0), Ok(1));
        assert_eq!(var_to_clause(&g, &state, v(3), 0), Ok(3));
        assert_eq!(clause_to_var_value(&g, &state, 0, v(1)), Ok(1));

        // any other-literal message equal to 0 kills the warning
        let quiet = MessageState::zero(g.edge_count());
        assert_eq!(clause_to_var_value(&g, &quiet, 0, v(1)), Ok(0));
    }

    #[test]
    fn all_zero_is_quiet_for_min_width_two() {
        let f = formula(5, &[&[1, -2, 3], &[2, 4], &[-3, -4, 5]]);
        let g = FactorGraph::build(&f);
        let mut state = MessageState::zero(g.edge_count());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let order = EdgeOrder::random(g.edge_count(), &mut rng);
            assert_eq!(run_pass(&g, &mut state, &order), 0);
        }
        assert!(is_fixed_point(&g, &state));
    }

    #[test]
    fn all_positive_formula_quiets_in_one_pass() {
        // every variable appears only positively
        let f = formula(6, &[&[1, 2, 3], &[2, 3, 4], &[3, 4, 5], &[1, 5, 6]]);
        let g = FactorGraph::build(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut state = init_messages(&g, &mut rng);
        let order = EdgeOrder::random(g.edge_count(), &mut rng);
        run_pass(&g, &mut state, &order);
        assert_eq!(state.values().iter().map(|&x| x as usize).sum::<usize>(), 0);

        let result = run(&f, &WpConfig { max_passes: 10, seed: 5, record_history: false });
        assert!(result.converged);
        assert!(result.passes_used <= 2);
        assert!(result.bias.iter().all(|&b| b == 0));
        assert!(result.assignment.assigned_count() == 0);
    }

    #[test]
    fn run_pass_is_deterministic() {
        let f = formula(5, &[&[1, -2, 3], &[-1, 2, 4], &[2, -4, 5], &[-3, 4, -5]]);
        let g = FactorGraph::build(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let init = init_messages(&g, &mut rng);
        let order = EdgeOrder::random(g.edge_count(), &mut rng);
        let mut a = init.clone();
        let mut b = init.clone();
        assert_eq!(run_pass(&g, &mut a, &order), run_pass(&g, &mut b, &order));
        assert_eq!(a, b);
    }

    #[test]
    fn contradictory_units_balance_to_unassigned() {
        let f = formula(1, &[&[1], &[-1]]);
        let result = run(&f, &WpConfig { max_passes: 10, seed: 3, record_history: false });
        assert!(result.converged);
        assert_eq!(result.bias, vec![0]);
        assert_eq!(result.assignment.get(v(1)), Ternary::Unassigned);
    }

    #[test]
    fn bias_examples() {
        // no incident edges -> 0
        let g = FactorGraph::build(&Formula::empty(2));
        assert_eq!(compute_bias(&g, &MessageState::zero(0)), vec![0, 0]);

        // positive warnings {1,1}, negative {1} -> bias 1 -> TRUE
        let f = formula(4, &[&[1, 2, 3], &[1, 2, 4], &[-1, 3, 4]]);
        let g = FactorGraph::build(&f);
        let mut state = MessageState::zero(g.edge_count());
        for c in 0..3 {
            state.set(g.edge_of(c, v(1)).unwrap(), 1);
        }
        let bias = compute_bias(&g, &state);
        assert_eq!(bias[0], 1);
        assert_eq!(assignment_from_bias(&bias).get(v(1)), Ternary::True);

        // symmetric warnings -> 0 -> UNASSIGNED
        let f = formula(3, &[&[1, 2, 3], &[-1, 2, 3]]);
        let g = FactorGraph::build(&f);
        let mut state = MessageState::zero(g.edge_count());
        state.set(g.edge_of(0, v(1)).unwrap(), 1);
        state.set(g.edge_of(1, v(1)).unwrap(), 1);
        let bias = compute_bias(&g, &state);
        assert_eq!(bias[0], 0);
        assert_eq!(assignment_from_bias(&bias).get(v(1)), Ternary::Unassigned);
    }

    #[test]
    fn fixed_point_check_rejects_perturbation() {
        let f = formula(4, &[&[1, -2, 3], &[2, -3, 4]]);
        let g = FactorGraph::build(&f);
        let zero = MessageState::zero(g.edge_count());
        assert!(is_fixed_point(&g, &zero));
        let mut bad = zero;
        bad.set(EdgeId(0), 1);
        assert!(!is_fixed_point(&g, &bad));
    }

    #[test]
    fn fixed_points_survive_random_orders() {
        let f = formula(5, &[&[1, -2, 3], &[-1, 2, 4], &[2, -4, 5]]);
        let g = FactorGraph::build(&f);
        let config = WpConfig { max_passes: 50, seed: 17, record_history: false };
        let result = run(&f, &config);
        assert!(result.converged);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let mut state = result.final_messages.clone();
            let order = EdgeOrder::random(g.edge_count(), &mut rng);
            assert_eq!(run_pass(&g, &mut state, &order), 0);
            assert_eq!(state, result.final_messages);
        }
    }

    #[test]
    fn run_is_deterministic_per_seed() {
        let f = formula(6, &[&[1, -2, 3], &[-1, 4, -5], &[2, 5, 6], &[-3, -4, 6]]);
        let config = WpConfig { max_passes: 50, seed: 21, record_history: true };
        let a = run(&f, &config);
        let b = run(&f, &config);
        assert_eq!(a.final_messages, b.final_messages);
        assert_eq!(a.passes_used, b.passes_used);
        assert_eq!(a.bias, b.bias);
        assert_eq!(a.assignment, b.assignment);
        let (ha, hb) = (a.history.unwrap(), b.history.unwrap());
        assert_eq!(ha.initial, hb.initial);
        assert_eq!(ha.orders.len(), hb.orders.len());
        for (x, y) in ha.orders.iter().zip(&hb.orders) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn dense_planted_instance_recovers_planted() {
        // strong signal: p = c log n / n^2 territory at small scale
        let n = 300u32;
        let ln_n = (n as f64).ln();
        let p = 40.0 * ln_n / (n as f64 * n as f64);
        let inst = crate::generator::generate(&crate::generator::GenParams::new(
            n,
            crate::generator::Density::ClauseProb(p),
            77,
        ))
        .unwrap();
        let result = run(&inst.formula, &WpConfig::for_instance(n, 7));
        assert!(result.converged);
        assert!(result.passes_used <= 5, "passes {}", result.passes_used);
        let recovered = result.assignment;
        assert!(recovered.is_total());
        for i in 1..=n {
            assert_eq!(
                recovered.get(v(i)).as_option(),
                Some(inst.planted.get(v(i))),
                "x{i} disagrees with planted"
            );
        }
    }

    #[test]
    fn default_pass_cap_formula() {
        assert_eq!(WpConfig::default_max_passes(2), 100);
        assert_eq!(WpConfig::default_max_passes(10_000), 266);
    }

    #[test]
    fn order_validation() {
        assert!(EdgeOrder::new(vec![EdgeId(0), EdgeId(1)], 2).is_ok());
        assert_eq!(
            EdgeOrder::new(vec![EdgeId(0), EdgeId(0)], 2),
            Err(WpError::InvalidOrder)
        );
        assert_eq!(EdgeOrder::new(vec![EdgeId(0)], 2), Err(WpError::InvalidOrder));
    }

    #[test]
    fn run_on_empty_graph_converges_immediately() {
        let result = run(&Formula::empty(3), &WpConfig { max_passes: 5, seed: 0, record_history: false });
        assert!(result.converged);
        assert_eq!(result.passes_used, 1);
        assert!(result.assignment.assigned_count() == 0);
    }

    /// In trees satisfied by the all-TRUE assignment, a converged state only
    /// ever warns variables that occur positively in the warning clause.
    #[test]
    fn tree_warnings_target_positive_occurrences() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for trial in 0..100 {
            let f = random_all_true_tree(&mut rng);
            let result = run(
                &f,
                &WpConfig { max_passes: 200, seed: trial, record_history: false },
            );
            assert!(result.converged, "trees converge");
            let g = FactorGraph::build(&f);
            for id in 0..g.edge_count() as u32 {
                let e = EdgeId(id);
                if result.final_messages.get(e) == 1 {
                    assert!(
                        g.edge_positive(e),
                        "warning to a negatively occurring variable in {f:?}"
                    );
                }
            }
        }
    }

    /// Random tree-structured formula in which every clause contains at
    /// least one positive literal (hence all-TRUE satisfies it).
    fn random_all_true_tree(rng: &mut ChaCha8Rng) -> Formula {
        let clauses_n = rng.random_range(1..=6);
        let mut next_var = 1u32;
        let mut used: Vec<u32> = Vec::new();
        let mut clauses = Vec::new();
        for _ in 0..clauses_n {
            let width = rng.random_range(1..=3usize);
            let mut vars = Vec::new();
            // at most one already-used variable keeps the graph acyclic
            if !used.is_empty() && rng.random_bool(0.5) && width > 1 {
                vars.push(used[rng.random_range(0..used.len())]);
            }
            while vars.len() < width {
                vars.push(next_var);
                used.push(next_var);
                next_var += 1;
            }
            let positive_slot = rng.random_range(0..width);
            let lits = vars
                .iter()
                .enumerate()
                .map(|(i, &var)| Literal {
                    var: v(var),
                    positive: i == positive_slot || rng.random_bool(0.5),
                })
                .collect();
            clauses.push(Clause::new(lits).unwrap());
        }
        Formula::new(next_var - 1, clauses).unwrap()
    }
}
