//! Bipartite clause-variable incidence structure.
//!
//! Every (clause, variable) occurrence becomes one directed clause-to-
//! variable edge with a dense stable id: edges are numbered clause-major, in
//! literal order, so a 3-CNF with m clauses has exactly 3m edges. The graph
//! also carries per-variable incidence lists split by polarity and supports
//! connected-component extraction with tree/unicyclic/multicyclic
//! classification by edge-vs-node counting.

use serde::Serialize;

use crate::formula::{Assignment, Formula, PartialAssignment, Variable};

/// Dense id of a directed clause-to-variable edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct FactorGraph {
    n: u32,
    clause_count: usize,
    // per edge, aligned by edge id
    edge_var: Vec<Variable>,
    edge_clause: Vec<u32>,
    edge_positive: Vec<bool>,
    // per clause: edge ids are the contiguous range offsets[c]..offsets[c+1]
    clause_offsets: Vec<u32>,
    // per variable: incident edges split by occurrence polarity
    pos_edges: Vec<Vec<EdgeId>>,
    neg_edges: Vec<Vec<EdgeId>>,
}

impl FactorGraph {
    pub fn build(formula: &Formula) -> Self {
        let n = formula.n();
        let edge_count = formula.occurrence_count();
        let mut edge_var = Vec::with_capacity(edge_count);
        let mut edge_clause = Vec::with_capacity(edge_count);
        let mut edge_positive = Vec::with_capacity(edge_count);
        let mut clause_offsets = Vec::with_capacity(formula.len() + 1);
        let mut pos_edges = vec![Vec::new(); n as usize];
        let mut neg_edges = vec![Vec::new(); n as usize];

        clause_offsets.push(0);
        for (c, clause) in formula.clauses().iter().enumerate() {
            for lit in clause.literals() {
                let id = EdgeId(edge_var.len() as u32);
                edge_var.push(lit.var);
                edge_clause.push(c as u32);
                edge_positive.push(lit.positive);
                if lit.positive {
                    pos_edges[lit.var.index()].push(id);
                } else {
                    neg_edges[lit.var.index()].push(id);
                }
            }
            clause_offsets.push(edge_var.len() as u32);
        }

        FactorGraph {
            n,
            clause_count: formula.len(),
            edge_var,
            edge_clause,
            edge_positive,
            clause_offsets,
            pos_edges,
            neg_edges,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn clause_count(&self) -> usize {
        self.clause_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_var.len()
    }

    pub fn edge_var(&self, e: EdgeId) -> Variable {
        self.edge_var[e.index()]
    }

    pub fn edge_clause(&self, e: EdgeId) -> usize {
        self.edge_clause[e.index()] as usize
    }

    /// Polarity of the edge's variable within the edge's clause.
    pub fn edge_positive(&self, e: EdgeId) -> bool {
        self.edge_positive[e.index()]
    }

    /// Edge ids of clause `c`, in literal order.
    pub fn clause_edges(&self, c: usize) -> impl Iterator<Item = EdgeId> + '_ {
        (self.clause_offsets[c]..self.clause_offsets[c + 1]).map(EdgeId)
    }

    pub fn clause_width(&self, c: usize) -> usize {
        (self.clause_offsets[c + 1] - self.clause_offsets[c]) as usize
    }

    /// Edges whose clause contains `var` positively.
    pub fn pos_edges(&self, var: Variable) -> &[EdgeId] {
        &self.pos_edges[var.index()]
    }

    /// Edges whose clause contains `var` negatively.
    pub fn neg_edges(&self, var: Variable) -> &[EdgeId] {
        &self.neg_edges[var.index()]
    }

    pub fn var_degree(&self, var: Variable) -> usize {
        self.pos_edges[var.index()].len() + self.neg_edges[var.index()].len()
    }

    /// The edge `clause -> var`, if `var` occurs in the clause.
    pub fn edge_of(&self, c: usize, var: Variable) -> Option<EdgeId> {
        self.clause_edges(c).find(|&e| self.edge_var(e) == var)
    }

    /// Connected components of the non-isolated part of the graph.
    ///
    /// Isolated variables (degree 0) belong to no component. Components are
    /// reported in order of their smallest variable.
    pub fn components(&self) -> Vec<Component> {
        let mut var_seen = vec![false; self.n as usize];
        let mut clause_seen = vec![false; self.clause_count];
        let mut out = Vec::new();

        for start in 0..self.n as usize {
            if var_seen[start] || self.var_degree(Variable::new(start as u32 + 1)) == 0 {
                continue;
            }
            let mut variables = Vec::new();
            let mut clauses = Vec::new();
            let mut stack = vec![Variable::new(start as u32 + 1)];
            var_seen[start] = true;
            while let Some(var) = stack.pop() {
                variables.push(var);
                for &e in self.pos_edges(var).iter().chain(self.neg_edges(var)) {
                    let c = self.edge_clause(e);
                    if clause_seen[c] {
                        continue;
                    }
                    clause_seen[c] = true;
                    clauses.push(c);
                    for f in self.clause_edges(c) {
                        let w = self.edge_var(f);
                        if !var_seen[w.index()] {
                            var_seen[w.index()] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            variables.sort_unstable();
            clauses.sort_unstable();
            let edges: usize = clauses.iter().map(|&c| self.clause_width(c)).sum();
            let nodes = variables.len() + clauses.len();
            out.push(Component {
                class: Component::classify(nodes, edges),
                variables,
                clauses,
                nodes,
                edges,
            });
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentClass {
    Tree,
    Unicyclic,
    Multicyclic,
}

/// A connected component of the factor graph. `nodes` counts variable and
/// clause nodes together; `edges` counts undirected incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub variables: Vec<Variable>,
    pub clauses: Vec<usize>,
    pub nodes: usize,
    pub edges: usize,
    pub class: ComponentClass,
}

impl Component {
    fn classify(nodes: usize, edges: usize) -> ComponentClass {
        // connected: edges >= nodes - 1 always
        if edges == nodes - 1 {
            ComponentClass::Tree
        } else if edges == nodes {
            ComponentClass::Unicyclic
        } else {
            ComponentClass::Multicyclic
        }
    }
}

/// Occurrence lists of each variable relative to a reference assignment,
/// split into supported clauses (the variable is the unique satisfier),
/// agreeing-but-not-supporting clauses, and disagreeing clauses.
///
/// For a variable assigned TRUE these are the supported subset of its
/// positive occurrences, the remaining positive occurrences, and its
/// negative occurrences; mirrored when the reference assigns FALSE.
#[derive(Clone, Debug)]
pub struct OccurrenceIndex {
    supported: Vec<Vec<usize>>,
    agree_nonsupport: Vec<Vec<usize>>,
    disagree: Vec<Vec<usize>>,
}

impl OccurrenceIndex {
    pub fn build(formula: &Formula, reference: &Assignment) -> Self {
        let n = formula.n() as usize;
        let mut supported = vec![Vec::new(); n];
        let mut agree_nonsupport = vec![Vec::new(); n];
        let mut disagree = vec![Vec::new(); n];
        for (c, clause) in formula.clauses().iter().enumerate() {
            let sat = clause
                .literals()
                .iter()
                .filter(|l| l.satisfied_by(reference.get(l.var)))
                .count();
            for lit in clause.literals() {
                let ix = lit.var.index();
                if lit.satisfied_by(reference.get(lit.var)) {
                    if sat == 1 {
                        supported[ix].push(c);
                    } else {
                        agree_nonsupport[ix].push(c);
                    }
                } else {
                    disagree[ix].push(c);
                }
            }
        }
        OccurrenceIndex { supported, agree_nonsupport, disagree }
    }

    /// Clauses the variable supports w.r.t. the reference assignment.
    pub fn supported(&self, var: Variable) -> &[usize] {
        &self.supported[var.index()]
    }

    /// Clauses where the variable agrees with the reference but is not the
    /// unique satisfier.
    pub fn agree_nonsupport(&self, var: Variable) -> &[usize] {
        &self.agree_nonsupport[var.index()]
    }

    /// Clauses where the variable's literal disagrees with the reference.
    pub fn disagree(&self, var: Variable) -> &[usize] {
        &self.disagree[var.index()]
    }
}

/// Clauses supported by `var` under a partial assignment: the variable's
/// literal is satisfied, every other variable in the clause is assigned,
/// and no other literal is satisfied.
pub fn support_of(formula: &Formula, var: Variable, psi: &PartialAssignment) -> Vec<usize> {
    let mut out = Vec::new();
    'clauses: for (c, clause) in formula.clauses().iter().enumerate() {
        let Some(own) = clause.literal_for(var) else { continue };
        match psi.get(var).as_option() {
            Some(v) if own.satisfied_by(v) => {}
            _ => continue,
        }
        for lit in clause.literals() {
            if lit.var == var {
                continue;
            }
            match psi.get(lit.var).as_option() {
                None => continue 'clauses,
                Some(v) if lit.satisfied_by(v) => continue 'clauses,
                Some(_) => {}
            }
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Literal, PartialAssignment, Ternary};

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
    fn single_clause_graph() {
        let g = FactorGraph::build(&formula(3, &[&[1, 2, 3]]));
        assert_eq!(g.edge_count(), 3);
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].nodes, 4);
        assert_eq!(comps[0].edges, 3);
        assert_eq!(comps[0].class, ComponentClass::Tree);
    }

    #[test]
    fn three_cnf_has_three_m_edges() {
        let f = crate::generator::generate(&crate::generator::GenParams::new(
            40,
            crate::generator::Density::Ratio(6.0),
            3,
        ))
        .unwrap()
        .formula;
        let g = FactorGraph::build(&f);
        assert_eq!(g.edge_count(), 3 * f.len());
    }

    #[test]
    fn empty_formula_has_no_components() {
        let g = FactorGraph::build(&Formula::empty(5));
        assert_eq!(g.edge_count(), 0);
        assert!(g.components().is_empty());
    }

    #[test]
    fn shared_pair_closes_one_cycle() {
        let g = FactorGraph::build(&formula(4, &[&[1, 2, 3], &[-1, -2, 4]]));
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].nodes, 6);
        assert_eq!(comps[0].edges, 6);
        assert_eq!(comps[0].class, ComponentClass::Unicyclic);
    }

    #[test]
    fn double_cycle_is_multicyclic() {
        let g = FactorGraph::build(&formula(2, &[&[1, 2], &[-1, 2], &[1, -2]]));
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].nodes, 5);
        assert_eq!(comps[0].edges, 6);
        assert_eq!(comps[0].class, ComponentClass::Multicyclic);
    }

    #[test]
    fn incidence_counts_are_symmetric() {
        let f = formula(4, &[&[1, -2, 3], &[-1, 2, 4], &[2, 3, 4]]);
        let g = FactorGraph::build(&f);
        let var_side: usize = (1..=4).map(|i| g.var_degree(v(i))).sum();
        let clause_side: usize = (0..f.len()).map(|c| g.clause_width(c)).sum();
        assert_eq!(var_side, clause_side);
        assert_eq!(var_side, g.edge_count());
    }

    #[test]
    fn support_of_examples() {
        let phi = PartialAssignment::from_total(&Assignment::all_true(3));
        // x supports (x | !y | !z)
        let f = formula(3, &[&[1, -2, -3]]);
        assert_eq!(support_of(&f, v(1), &phi), vec![0]);
        // nobody supports (x | y | !z): two satisfied literals
        let f = formula(3, &[&[1, 2, -3]]);
        for i in 1..=3 {
            assert!(support_of(&f, v(i), &phi).is_empty());
        }
        // unassigned co-variable blocks support
        let f = formula(3, &[&[1, -2, -3]]);
        let mut psi = phi.clone();
        psi.set(v(3), Ternary::Unassigned);
        assert!(support_of(&f, v(1), &psi).is_empty());
    }

    #[test]
    fn occurrence_index_splits_by_support() {
        let phi = Assignment::all_true(3);
        let f = formula(3, &[&[1, -2, -3], &[1, 2, -3], &[-1, -2, -3]]);
        let occ = OccurrenceIndex::build(&f, &phi);
        assert_eq!(occ.supported(v(1)), &[0]);
        assert_eq!(occ.agree_nonsupport(v(1)), &[1]);
        assert_eq!(occ.disagree(v(1)), &[2]);
        // clause 2 is falsified by phi: everyone disagrees there
        assert_eq!(occ.disagree(v(2)), &[0, 2]);
        assert_eq!(occ.agree_nonsupport(v(2)), &[1]);
    }
}
