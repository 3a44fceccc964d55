//! CNF formulas over 1-based variables, with evaluation, simplification by a
//! partial assignment, and restriction to a variable set.
//!
//! Clauses have width 1 to 3. Generated formulas are strict 3-CNF; width-1
//! and width-2 clauses arise from simplification. A clause that shrinks to
//! width 0 under simplification is not representable as a [`Clause`]; it is
//! recorded on the [`Simplified`] result instead.

use std::fmt;

use thiserror::Error;

pub mod dimacs;

/// Maximum clause width. Generation and simplification never exceed it.
pub const MAX_CLAUSE_WIDTH: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause has no literals")]
    EmptyClause,
    #[error("clause width {0} exceeds {MAX_CLAUSE_WIDTH}")]
    WidthExceeded(usize),
    #[error("variable x{0} repeats within a clause")]
    DuplicateVariable(u32),
    #[error("variable x{var} out of range (n = {n})")]
    VariableOutOfRange { var: u32, n: u32 },
}

/// A propositional variable, numbered 1..=n within its formula.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(u32);

impl Variable {
    /// `number` is 1-based.
    pub fn new(number: u32) -> Self {
        debug_assert!(number >= 1, "variables are numbered from 1");
        Variable(number)
    }

    /// 1-based number, as used in DIMACS.
    pub fn number(self) -> u32 {
        self.0
    }

    /// 0-based index for array lookups.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: Variable,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Variable) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: Variable) -> Self {
        Literal { var, positive: false }
    }

    pub fn negated(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    /// Truth of the literal when its variable takes `value`.
    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var.number())
        } else {
            write!(f, "!x{}", self.var.number())
        }
    }
}

/// A disjunction of 1 to 3 literals over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self, FormulaError> {
        if literals.is_empty() {
            return Err(FormulaError::EmptyClause);
        }
        if literals.len() > MAX_CLAUSE_WIDTH {
            return Err(FormulaError::WidthExceeded(literals.len()));
        }
        for (i, a) in literals.iter().enumerate() {
            for b in &literals[i + 1..] {
                if a.var == b.var {
                    return Err(FormulaError::DuplicateVariable(a.var.number()));
                }
            }
        }
        Ok(Clause { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn contains_var(&self, var: Variable) -> bool {
        self.literals.iter().any(|l| l.var == var)
    }

    pub fn literal_for(&self, var: Variable) -> Option<Literal> {
        self.literals.iter().copied().find(|l| l.var == var)
    }
}

/// A total truth assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all_true(n: u32) -> Self {
        Assignment { values: vec![true; n as usize] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, var: Variable) -> bool {
        self.values[var.index()]
    }

    pub fn set(&mut self, var: Variable, value: bool) {
        self.values[var.index()] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// Ternary truth value of a variable under a partial assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ternary {
    True,
    False,
    Unassigned,
}

impl Ternary {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Ternary::True
        } else {
            Ternary::False
        }
    }

    pub fn as_option(self) -> Option<bool> {
        match self {
            Ternary::True => Some(true),
            Ternary::False => Some(false),
            Ternary::Unassigned => None,
        }
    }

    pub fn is_assigned(self) -> bool {
        !matches!(self, Ternary::Unassigned)
    }
}

/// A partial truth assignment over n variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment {
    values: Vec<Ternary>,
}

impl PartialAssignment {
    pub fn unassigned(n: u32) -> Self {
        PartialAssignment { values: vec![Ternary::Unassigned; n as usize] }
    }

    pub fn from_total(a: &Assignment) -> Self {
        PartialAssignment {
            values: a.values().iter().map(|&b| Ternary::from_bool(b)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, var: Variable) -> Ternary {
        self.values[var.index()]
    }

    pub fn set(&mut self, var: Variable, value: Ternary) {
        self.values[var.index()] = value;
    }

    pub fn assign(&mut self, var: Variable, value: bool) {
        self.values[var.index()] = Ternary::from_bool(value);
    }

    pub fn assigned_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_assigned()).count()
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(|v| v.is_assigned())
    }

    pub fn assigned_fraction(&self) -> f64 {
        if self.values.is_empty() {
            return 1.0;
        }
        self.assigned_count() as f64 / self.values.len() as f64
    }

    /// Fills every unassigned slot with `default`.
    pub fn to_total_with_default(&self, default: bool) -> Assignment {
        Assignment::new(
            self.values
                .iter()
                .map(|v| v.as_option().unwrap_or(default))
                .collect(),
        )
    }

    /// Overlays the assigned entries of `other` on top of `self`.
    /// Panics if both assign the same variable differently.
    pub fn merge(&self, other: &PartialAssignment) -> PartialAssignment {
        assert_eq!(self.len(), other.len());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| match (a, b) {
                (Ternary::Unassigned, v) => v,
                (v, Ternary::Unassigned) => v,
                (v, w) => {
                    assert_eq!(v, w, "conflicting assignments in merge");
                    v
                }
            })
            .collect();
        PartialAssignment { values }
    }

    pub fn as_options(&self) -> Vec<Option<bool>> {
        self.values.iter().map(|v| v.as_option()).collect()
    }

    /// Variables assigned by this partial assignment, ascending.
    pub fn assigned_vars(&self) -> impl Iterator<Item = (Variable, bool)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| {
            v.as_option().map(|b| (Variable::new(i as u32 + 1), b))
        })
    }
}

/// A set of variables out of 1..=n, with O(1) membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    member: Vec<bool>,
    count: usize,
}

impl VarSet {
    pub fn empty(n: u32) -> Self {
        VarSet { member: vec![false; n as usize], count: 0 }
    }

    pub fn full(n: u32) -> Self {
        VarSet { member: vec![true; n as usize], count: n as usize }
    }

    pub fn from_vars<I: IntoIterator<Item = Variable>>(n: u32, vars: I) -> Self {
        let mut s = VarSet::empty(n);
        for v in vars {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> u32 {
        self.member.len() as u32
    }

    pub fn insert(&mut self, var: Variable) -> bool {
        let slot = &mut self.member[var.index()];
        if *slot {
            false
        } else {
            *slot = true;
            self.count += 1;
            true
        }
    }

    pub fn remove(&mut self, var: Variable) -> bool {
        let slot = &mut self.member[var.index()];
        if *slot {
            *slot = false;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, var: Variable) -> bool {
        self.member[var.index()]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Variable> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| Variable::new(i as u32 + 1))
    }

    /// Removes every member of `other` from `self`.
    pub fn subtract(&mut self, other: &VarSet) {
        for v in other.iter() {
            self.remove(v);
        }
    }
}

/// Mapping between original variable numbers and the compacted numbering of
/// a simplified formula. Only unassigned variables are mapped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    old_to_new: Vec<Option<u32>>,
    new_to_old: Vec<Variable>,
}

impl VarMap {
    fn identity_over(n: u32, kept: impl Iterator<Item = Variable>) -> Self {
        let mut old_to_new = vec![None; n as usize];
        let mut new_to_old = Vec::new();
        for var in kept {
            old_to_new[var.index()] = Some(new_to_old.len() as u32 + 1);
            new_to_old.push(var);
        }
        VarMap { old_to_new, new_to_old }
    }

    pub fn to_new(&self, old: Variable) -> Option<Variable> {
        self.old_to_new[old.index()].map(Variable::new)
    }

    pub fn to_old(&self, new: Variable) -> Variable {
        self.new_to_old[new.index()]
    }

    /// Number of variables kept by the simplification.
    pub fn kept(&self) -> usize {
        self.new_to_old.len()
    }
}

/// Result of simplifying a formula by a partial assignment.
///
/// The residual formula keeps the original variable numbering so residual
/// variables stay relatable to the input; `map` gives the compacted
/// numbering for output. Clauses that lost all their literals are counted in
/// `empty_clauses`: the input is unsatisfiable under any extension of the
/// partial assignment iff that count is nonzero.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub formula: Formula,
    pub empty_clauses: usize,
    pub map: VarMap,
}

impl Simplified {
    pub fn has_empty_clause(&self) -> bool {
        self.empty_clauses > 0
    }

    /// The residual formula renumbered onto 1..=kept.
    pub fn compacted(&self) -> Formula {
        let clauses = self
            .formula
            .clauses()
            .iter()
            .map(|c| {
                let lits = c
                    .literals()
                    .iter()
                    .map(|l| Literal {
                        var: self.map.to_new(l.var).expect("kept variable"),
                        positive: l.positive,
                    })
                    .collect();
                Clause::new(lits).expect("clause shape preserved")
            })
            .collect();
        Formula::new(self.map.kept() as u32, clauses).expect("remapped formula")
    }
}

/// A CNF formula: a conjunction of clauses over variables 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    n: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for c in &clauses {
            for l in c.literals() {
                if l.var.number() > n {
                    return Err(FormulaError::VariableOutOfRange { var: l.var.number(), n });
                }
            }
        }
        Ok(Formula { n, clauses })
    }

    pub fn empty(n: u32) -> Self {
        Formula { n, clauses: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of clauses.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, i: usize) -> &Clause {
        &self.clauses[i]
    }

    /// Total number of literal occurrences (= factor graph edges).
    pub fn occurrence_count(&self) -> usize {
        self.clauses.iter().map(|c| c.width()).sum()
    }

    pub fn min_width(&self) -> Option<usize> {
        self.clauses.iter().map(|c| c.width()).min()
    }

    /// True iff every clause has a literal satisfied by the total assignment.
    ///
    /// Panics if the assignment covers a different variable count.
    pub fn eval(&self, a: &Assignment) -> bool {
        assert_eq!(a.len(), self.n as usize, "assignment dimension mismatch");
        self.clauses
            .iter()
            .all(|c| c.literals().iter().any(|l| l.satisfied_by(a.get(l.var))))
    }

    /// True iff every clause already has a literal satisfied by the partial
    /// assignment (unassigned variables do not satisfy anything).
    pub fn satisfied_by_partial(&self, psi: &PartialAssignment) -> bool {
        assert_eq!(psi.len(), self.n as usize, "assignment dimension mismatch");
        self.clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| psi.get(l.var).as_option().is_some_and(|v| l.satisfied_by(v)))
        })
    }

    /// Substitutes every assigned variable: satisfied clauses are dropped,
    /// falsified literals are deleted, and clauses that lose every literal
    /// are tallied as empty clauses on the result.
    pub fn simplify(&self, psi: &PartialAssignment) -> Simplified {
        assert_eq!(psi.len(), self.n as usize, "assignment dimension mismatch");
        let mut clauses = Vec::new();
        let mut empty_clauses = 0usize;
        'next: for c in &self.clauses {
            let mut kept = Vec::with_capacity(c.width());
            for &l in c.literals() {
                match psi.get(l.var) {
                    Ternary::Unassigned => kept.push(l),
                    v => {
                        if l.satisfied_by(v == Ternary::True) {
                            continue 'next; // clause satisfied
                        }
                        // falsified literal: drop it
                    }
                }
            }
            if kept.is_empty() {
                empty_clauses += 1;
            } else {
                clauses.push(Clause { literals: kept });
            }
        }
        let formula = Formula { n: self.n, clauses };
        let map = VarMap::identity_over(
            self.n,
            (1..=self.n)
                .map(Variable::new)
                .filter(|&v| !psi.get(v).is_assigned()),
        );
        Simplified { formula, empty_clauses, map }
    }

    /// The clauses whose variables all belong to `vars`.
    pub fn restrict(&self, vars: &VarSet) -> Formula {
        let clauses = self
            .clauses
            .iter()
            .filter(|c| c.literals().iter().all(|l| vars.contains(l.var)))
            .cloned()
            .collect();
        Formula { n: self.n, clauses }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Variable {
        Variable::new(i)
    }

    fn clause(lits: &[i32]) -> Clause {
        Clause::new(
            lits.iter()
                .map(|&l| Literal {
                    var: v(l.unsigned_abs()),
                    positive: l > 0,
                })
                .collect(),
        )
        .unwrap()
    }

    fn formula(n: u32, clauses: &[&[i32]]) -> Formula {
        Formula::new(n, clauses.iter().map(|c| clause(c)).collect()).unwrap()
    }

    #[test]
    fn eval_positive_clause_under_all_true() {
        let f = formula(3, &[&[1, 2, 3]]);
        assert!(f.eval(&Assignment::all_true(3)));
    }

    #[test]
    fn eval_negated_unit_clause() {
        let f = formula(1, &[&[-1]]);
        assert!(!f.eval(&Assignment::new(vec![true])));
        assert!(f.eval(&Assignment::new(vec![false])));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn eval_dimension_mismatch_panics() {
        let f = formula(3, &[&[1, 2, 3]]);
        f.eval(&Assignment::new(vec![true, true]));
    }

    #[test]
    fn clause_rejects_duplicates_and_bad_widths() {
        assert_eq!(
            Clause::new(vec![Literal::pos(v(1)), Literal::pos(v(1))]),
            Err(FormulaError::DuplicateVariable(1))
        );
        assert_eq!(Clause::new(vec![]), Err(FormulaError::EmptyClause));
        let wide: Vec<_> = (1..=4).map(|i| Literal::pos(v(i))).collect();
        assert_eq!(Clause::new(wide), Err(FormulaError::WidthExceeded(4)));
    }

    #[test]
    fn formula_rejects_out_of_range_variable() {
        let c = clause(&[1, 2, 4]);
        assert_eq!(
            Formula::new(3, vec![c]),
            Err(FormulaError::VariableOutOfRange { var: 4, n: 3 })
        );
    }

    #[test]
    fn simplify_removes_satisfied_clause() {
        let f = formula(3, &[&[1, 2, 3]]);
        let mut psi = PartialAssignment::unassigned(3);
        psi.assign(v(1), true);
        let s = f.simplify(&psi);
        assert!(s.formula.is_empty());
        assert_eq!(s.empty_clauses, 0);
    }

    #[test]
    fn simplify_drops_false_literal() {
        let f = formula(3, &[&[-1, 2, 3]]);
        let mut psi = PartialAssignment::unassigned(3);
        psi.assign(v(1), true);
        let s = f.simplify(&psi);
        assert_eq!(s.formula.clauses(), &[clause(&[2, 3])]);
    }

    #[test]
    fn simplify_flags_empty_clause() {
        let f = formula(1, &[&[-1]]);
        let mut psi = PartialAssignment::unassigned(1);
        psi.assign(v(1), true);
        let s = f.simplify(&psi);
        assert!(s.has_empty_clause());
        assert_eq!(s.empty_clauses, 1);
        assert!(s.formula.is_empty());
    }

    #[test]
    fn simplify_keeps_original_numbering_and_maps_compacted() {
        let f = formula(4, &[&[-1, 3, 4]]);
        let mut psi = PartialAssignment::unassigned(4);
        psi.assign(v(1), true);
        psi.assign(v(2), false);
        let s = f.simplify(&psi);
        // residual clause still speaks about x3, x4
        assert_eq!(s.formula.clauses(), &[clause(&[3, 4])]);
        // compacted numbering: x3 -> 1, x4 -> 2
        assert_eq!(s.map.to_new(v(3)), Some(v(1)));
        assert_eq!(s.map.to_new(v(4)), Some(v(2)));
        assert_eq!(s.map.to_new(v(1)), None);
        let compact = s.compacted();
        assert_eq!(compact.n(), 2);
        assert_eq!(compact.clauses(), &[clause(&[1, 2])]);
    }

    #[test]
    fn restrict_examples() {
        let f = formula(4, &[&[1, 2, 3], &[1, 2, 4]]);
        assert!(f.restrict(&VarSet::empty(4)).is_empty());
        assert_eq!(f.restrict(&VarSet::full(4)), f);
        let a = VarSet::from_vars(4, [v(1), v(2), v(3)]);
        assert_eq!(f.restrict(&a).clauses(), &[clause(&[1, 2, 3])]);
    }

    #[test]
    fn merge_overlays_disjoint_assignments() {
        let mut a = PartialAssignment::unassigned(3);
        a.assign(v(1), true);
        let mut b = PartialAssignment::unassigned(3);
        b.assign(v(3), false);
        let m = a.merge(&b);
        assert_eq!(m.get(v(1)), Ternary::True);
        assert_eq!(m.get(v(2)), Ternary::Unassigned);
        assert_eq!(m.get(v(3)), Ternary::False);
    }

    #[test]
    fn varset_basics() {
        let mut s = VarSet::empty(5);
        assert!(s.insert(v(2)));
        assert!(!s.insert(v(2)));
        assert!(s.contains(v(2)));
        assert_eq!(s.len(), 1);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![v(2)]);
        assert!(s.remove(v(2)));
        assert!(s.is_empty());
    }
}
