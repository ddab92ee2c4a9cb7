//! CNF formulas over densely indexed Boolean variables, partial assignments,
//! and a brute-force satisfiability oracle for small instances.
//!
//! Variables are 1-based (matching DIMACS); clauses are stored with their
//! literals sorted by variable so that clause equality and deduplication are
//! canonical. The empty clause is representable and marks a falsified
//! formula rather than being an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Enumeration ceiling for [`CnfFormula::satisfying_assignments`].
pub const SAT_ENUMERATION_GUARD: u32 = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause contains variable x{0} more than once")]
    DuplicateVariable(u32),
    #[error("literal references x{var} but the formula has only {num_vars} variables")]
    VariableOutOfRange { var: u32, num_vars: u32 },
    #[error("variable x{0} is already assigned in this restriction")]
    AlreadyAssigned(u32),
    #[error("formula has {num_vars} variables, exhaustive enumeration is capped at {guard}")]
    TooManyVariables { num_vars: u32, guard: u32 },
    #[error("assignment has length {got}, expected {expected}")]
    AssignmentLength { got: usize, expected: usize },
}

/// A propositional variable, 1-based as in DIMACS.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(u32);

impl Var {
    pub fn new(number: u32) -> Var {
        assert!(number >= 1, "variables are 1-based");
        Var(number)
    }

    /// The 1-based number as written in DIMACS.
    pub fn number(self) -> u32 {
        self.0
    }

    /// 0-based index for slice lookups.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_index(index: usize) -> Var {
        Var::new(index as u32 + 1)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal: a variable together with a polarity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    pub fn positive(var: Var) -> Literal {
        Literal::new(var, true)
    }

    pub fn negative(var: Var) -> Literal {
        Literal::new(var, false)
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Literal {
        Literal::new(self.var, !self.positive)
    }

    /// Signed DIMACS integer: `3` for x3, `-3` for ¬x3.
    pub fn to_dimacs(self) -> i64 {
        let n = i64::from(self.var.number());
        if self.positive {
            n
        } else {
            -n
        }
    }

    pub fn satisfied_by(self, assignment: &[bool]) -> bool {
        assignment[self.var.index()] == self.positive
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "¬")?;
        }
        write!(f, "{}", self.var)
    }
}

/// A disjunction of literals, at most one per variable, sorted by variable.
///
/// The empty clause is the falsified clause.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, sorting literals by variable. Duplicate literals are
    /// merged; two literals on the same variable with opposite signs are an
    /// error (tautologies are rejected at this level).
    pub fn new(mut literals: Vec<Literal>) -> Result<Clause, CnfError> {
        literals.sort();
        literals.dedup();
        for pair in literals.windows(2) {
            if pair[0].var() == pair[1].var() {
                return Err(CnfError::DuplicateVariable(pair[0].var().number()));
            }
        }
        Ok(Clause { literals })
    }

    /// The falsified clause.
    pub fn empty() -> Clause {
        Clause { literals: Vec::new() }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Polarity of `var` in this clause, if present.
    pub fn polarity_of(&self, var: Var) -> Option<bool> {
        self.literals
            .binary_search_by_key(&var, |l| l.var())
            .ok()
            .map(|i| self.literals[i].is_positive())
    }

    pub fn max_var(&self) -> Option<Var> {
        self.literals.last().map(|l| l.var())
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.literals.iter().any(|l| l.satisfied_by(assignment))
    }

    /// The clause with the literal on `var` removed (used when restricting).
    pub(crate) fn without_var(&self, var: Var) -> Clause {
        Clause {
            literals: self
                .literals
                .iter()
                .copied()
                .filter(|l| l.var() != var)
                .collect(),
        }
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "⊥");
        }
        let parts: Vec<String> = self.literals.iter().map(|l| format!("{l:?}")).collect();
        write!(f, "({})", parts.join("∨"))
    }
}

/// A CNF formula: an ordered list of clauses over variables `x1..=x{num_vars}`.
///
/// Duplicate clauses are permitted; [`CnfFormula::dedup_clauses`] produces the
/// canonical deduplicated form when needed.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<CnfFormula, CnfError> {
        for clause in &clauses {
            if let Some(v) = clause.max_var() {
                if v.number() > num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        var: v.number(),
                        num_vars,
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// Maximum clause width, 0 for an empty clause list.
    pub fn max_clause_width(&self) -> usize {
        self.clauses.iter().map(|c| c.width()).max().unwrap_or(0)
    }

    /// Variables that occur in at least one clause.
    pub fn vars_in_clauses(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().map(|l| l.var()))
            .collect()
    }

    /// All variables `x1..=x{num_vars}` in ascending order.
    pub fn all_vars(&self) -> impl Iterator<Item = Var> + '_ {
        (1..=self.num_vars).map(Var::new)
    }

    /// Same clause list with duplicates removed, order of first occurrence kept.
    pub fn dedup_clauses(&self) -> CnfFormula {
        let mut seen = BTreeSet::new();
        let clauses = self
            .clauses
            .iter()
            .filter(|c| seen.insert((*c).clone()))
            .cloned()
            .collect();
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
        }
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool, CnfError> {
        if assignment.len() != self.num_vars as usize {
            return Err(CnfError::AssignmentLength {
                got: assignment.len(),
                expected: self.num_vars as usize,
            });
        }
        Ok(self.clauses.iter().all(|c| c.satisfied_by(assignment)))
    }

    /// The formula `F|_rho`: clauses with a satisfied literal are removed,
    /// falsified literals are deleted from the remaining clauses, and a clause
    /// emptied this way is kept as the falsified clause marker.
    pub fn restrict(&self, rho: &Restriction) -> CnfFormula {
        let mut clauses = Vec::with_capacity(self.clauses.len());
        'clauses: for clause in &self.clauses {
            let mut kept = Vec::with_capacity(clause.width());
            for &lit in clause.literals() {
                match rho.get(lit.var()) {
                    Some(bit) if bit == lit.is_positive() => continue 'clauses,
                    Some(_) => {}
                    None => kept.push(lit),
                }
            }
            clauses.push(Clause { literals: kept });
        }
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
        }
    }

    /// Exhaustively enumerates all satisfying assignments in lexicographic
    /// order (`x1` most significant). Refuses above [`SAT_ENUMERATION_GUARD`]
    /// variables.
    pub fn satisfying_assignments(&self) -> Result<Vec<Vec<bool>>, CnfError> {
        let n = self.num_vars;
        if n > SAT_ENUMERATION_GUARD {
            return Err(CnfError::TooManyVariables {
                num_vars: n,
                guard: SAT_ENUMERATION_GUARD,
            });
        }
        // Bit i of the counter is x_{i+1}; to walk lexicographically with x1
        // most significant, x_{i+1} maps to counter bit n-1-i.
        let masks: Vec<(u32, u32)> = self
            .clauses
            .iter()
            .map(|c| {
                let mut pos = 0u32;
                let mut neg = 0u32;
                for lit in c.literals() {
                    let bit = 1u32 << (n - 1 - lit.var().index() as u32);
                    if lit.is_positive() {
                        pos |= bit;
                    } else {
                        neg |= bit;
                    }
                }
                (pos, neg)
            })
            .collect();
        let mut out = Vec::new();
        for a in 0u64..(1u64 << n) {
            let a = a as u32;
            if masks
                .iter()
                .all(|&(pos, neg)| a & pos != 0 || !a & neg != 0)
            {
                let assignment = (0..n)
                    .map(|i| a & (1 << (n - 1 - i)) != 0)
                    .collect::<Vec<bool>>();
                out.push(assignment);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CnfFormula(n={}, {:?})", self.num_vars, self.clauses)
    }
}

/// A partial assignment of variables to bits.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Restriction {
    map: BTreeMap<Var, bool>,
}

impl Restriction {
    pub fn new() -> Restriction {
        Restriction::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, bool)>) -> Result<Restriction, CnfError> {
        let mut rho = Restriction::new();
        for (var, bit) in pairs {
            rho.assign(var, bit)?;
        }
        Ok(rho)
    }

    /// The restriction `S -> b` that fixes every variable in `vars` to its
    /// value under the full assignment `b`.
    pub fn fixing(vars: &[Var], b: &[bool]) -> Restriction {
        let map = vars.iter().map(|&v| (v, b[v.index()])).collect();
        Restriction { map }
    }

    /// Fixes every variable in `vars` to the constant `bit`.
    pub fn constant(vars: impl IntoIterator<Item = Var>, bit: bool) -> Restriction {
        Restriction {
            map: vars.into_iter().map(|v| (v, bit)).collect(),
        }
    }

    pub fn assign(&mut self, var: Var, bit: bool) -> Result<(), CnfError> {
        if self.map.insert(var, bit).is_some() {
            return Err(CnfError::AlreadyAssigned(var.number()));
        }
        Ok(())
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.map.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.map.iter().map(|(&v, &b)| (v, b))
    }

    /// Union of two restrictions with disjoint domains.
    pub fn union(&self, other: &Restriction) -> Result<Restriction, CnfError> {
        let mut out = self.clone();
        for (v, b) in other.iter() {
            out.assign(v, b)?;
        }
        Ok(out)
    }

    /// Is the full assignment `b` consistent with this restriction?
    pub fn consistent_with(&self, b: &[bool]) -> bool {
        self.iter().all(|(v, bit)| b[v.index()] == bit)
    }
}

/// Clauses forbidding every odd-parity assignment of `vars`, i.e. the CNF of
/// the constraint `sum of vars = 0 (mod 2)`. For `d` variables this is the
/// standard set of `2^(d-1)` width-`d` clauses.
pub fn xor_zero_clauses(vars: &[Var]) -> Vec<Clause> {
    let d = vars.len();
    if d == 0 {
        return Vec::new();
    }
    assert!(d < 31, "parity constraint too wide to expand");
    let mut out = Vec::with_capacity(1 << (d - 1));
    for pattern in 0u32..(1 << d) {
        if pattern.count_ones() % 2 == 1 {
            let lits = vars
                .iter()
                .enumerate()
                .map(|(i, &v)| Literal::new(v, pattern & (1 << i) == 0))
                .collect();
            out.push(Clause::new(lits).expect("distinct vars"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i64) -> Literal {
        let var = Var::new(v.unsigned_abs() as u32);
        Literal::new(var, v > 0)
    }

    fn clause(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&v| lit(v)).collect()).unwrap()
    }

    pub(crate) fn formula(num_vars: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::new(num_vars, clauses.iter().map(|c| clause(c)).collect()).unwrap()
    }

    #[test]
    fn restrict_removes_satisfied_clauses_and_falsified_literals() {
        let f = formula(3, &[&[1, 2], &[-1, 3]]);
        let rho = Restriction::from_pairs([(Var::new(1), false)]).unwrap();
        let g = f.restrict(&rho);
        assert_eq!(g.clauses(), &[clause(&[2])]);
    }

    #[test]
    fn restrict_keeps_falsified_clause_marker() {
        let f = formula(1, &[&[1]]);
        let rho = Restriction::from_pairs([(Var::new(1), false)]).unwrap();
        let g = f.restrict(&rho);
        assert!(g.has_empty_clause());
    }

    #[test]
    fn restrict_by_empty_is_identity() {
        let f = formula(2, &[&[1, 2]]);
        assert_eq!(f.restrict(&Restriction::new()), f);
    }

    #[test]
    fn satisfying_assignments_single_solution() {
        let f = formula(2, &[&[1], &[-1, 2]]);
        assert_eq!(f.satisfying_assignments().unwrap(), vec![vec![true, true]]);
    }

    #[test]
    fn satisfying_assignments_unconstrained() {
        let f = formula(2, &[]);
        let sats = f.satisfying_assignments().unwrap();
        assert_eq!(
            sats,
            vec![
                vec![false, false],
                vec![false, true],
                vec![true, false],
                vec![true, true]
            ]
        );
    }

    #[test]
    fn satisfying_assignments_unsat() {
        let f = formula(1, &[&[1], &[-1]]);
        assert!(f.satisfying_assignments().unwrap().is_empty());
    }

    #[test]
    fn satisfying_assignments_guard() {
        let f = CnfFormula::new(31, vec![]).unwrap();
        assert!(matches!(
            f.satisfying_assignments(),
            Err(CnfError::TooManyVariables { .. })
        ));
    }

    #[test]
    fn max_clause_width_cases() {
        assert_eq!(formula(3, &[&[1, 2], &[3]]).max_clause_width(), 2);
        assert_eq!(formula(3, &[]).max_clause_width(), 0);
        assert_eq!(formula(3, &[&[1, 2, 3]]).max_clause_width(), 3);
    }

    #[test]
    fn clause_rejects_duplicate_variable() {
        assert!(matches!(
            Clause::new(vec![lit(1), lit(-1)]),
            Err(CnfError::DuplicateVariable(1))
        ));
    }

    #[test]
    fn xor_zero_clause_counts_and_semantics() {
        let vars: Vec<Var> = (1..=2).map(Var::new).collect();
        let clauses = xor_zero_clauses(&vars);
        assert_eq!(clauses.len(), 2);
        assert!(clauses.contains(&clause(&[-1, 2])));
        assert!(clauses.contains(&clause(&[1, -2])));

        let vars3: Vec<Var> = (1..=3).map(Var::new).collect();
        let f = CnfFormula::new(3, xor_zero_clauses(&vars3)).unwrap();
        for sat in f.satisfying_assignments().unwrap() {
            let parity = sat.iter().filter(|&&b| b).count() % 2;
            assert_eq!(parity, 0);
        }
        assert_eq!(f.num_clauses(), 4);
        assert!(xor_zero_clauses(&[]).is_empty());
    }
}
