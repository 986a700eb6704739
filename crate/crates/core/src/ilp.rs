//! The 0/1 integer program that selects a consistent set of candidate paths.
//!
//! Decision variables are the path selection vector `P̂` (one binary per
//! candidate path) followed by the terminal association `T_R` (one binary per
//! terminal/element pair, terminal-major). The program maximizes
//! `Σ P̂ − λ·Σ T_R` subject to three families of rows:
//!
//! * validity, one row per (terminal `t`, path `h`):
//!   `n_h·H_T(h,t)·P̂_h − Σ_r H_R(h,r)·H_T(h,t)·T_R(t,r) ≤ 0`
//!   where `n_h` is the number of intermediate elements of `h`. A selected
//!   path therefore needs every one of its elements assigned to its terminal.
//! * unique path, one row per customer: `Σ_{h of c} P̂_h ≤ 1`.
//! * unique terminal, one row per element: `Σ_t T_R(t,r) ≤ 1`.

use std::fmt;

use thiserror::Error;

use crate::matrices::{PathMatrices, TerminalAssociation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Validity,
    UniquePath,
    UniqueTerminal,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Validity => "validity",
            Family::UniquePath => "unique-path",
            Family::UniqueTerminal => "unique-terminal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Le,
    Ge,
}

impl Comparator {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Comparator::Le => lhs <= rhs,
            Comparator::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Le => "<=",
            Comparator::Ge => ">=",
        }
    }
}

/// Where a row comes from, in matrix coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrigin {
    Validity { terminal: usize, path: usize },
    UniquePath { customer: usize },
    UniqueTerminal { element: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub origin: RowOrigin,
    /// Sparse `(variable, coefficient)` terms, variables ascending.
    pub terms: Vec<(usize, i64)>,
    pub cmp: Comparator,
    pub rhs: i64,
    /// No non-zero coefficient: the row always holds.
    pub trivial: bool,
}

impl Constraint {
    pub fn activity(&self, x: &[bool]) -> i64 {
        self.terms.iter().filter(|(v, _)| x[*v]).map(|(_, a)| a).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IlpError {
    #[error("lambda must be a finite non-negative number, got {0}")]
    InvalidLambda(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlpProblem {
    pub num_path_vars: usize,
    pub num_assoc_vars: usize,
    pub num_terminals: usize,
    pub num_remaining: usize,
    pub lambda: f64,
    /// Objective coefficient per variable (maximized).
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub var_names: Vec<String>,
}

/// Penalty that keeps every path worth more than any possible number of
/// assignments: `1 / (|R|·|T| + 1)`.
pub fn auto_lambda(m: &PathMatrices) -> f64 {
    1.0 / ((m.remaining().len() * m.terminals().len()) as f64 + 1.0)
}

/// Objective of a solution with `paths` selected paths and `assignments`
/// ones in `T_R`. Every objective in the crate goes through here so that
/// equal counts give bit-identical values.
pub fn objective_value(paths: usize, assignments: usize, lambda: f64) -> f64 {
    paths as f64 - lambda * assignments as f64
}

impl IlpProblem {
    pub fn num_vars(&self) -> usize {
        self.num_path_vars + self.num_assoc_vars
    }

    pub fn assoc_var(&self, terminal: usize, element: usize) -> usize {
        self.num_path_vars + terminal * self.num_remaining + element
    }

    /// Concatenates `P̂` and `T_R` into one variable vector.
    pub fn pack(&self, p_hat: &[bool], tr: &TerminalAssociation) -> Result<Vec<bool>, IlpError> {
        if p_hat.len() != self.num_path_vars {
            return Err(IlpError::Dimension(format!(
                "P̂ has {} entries, expected {}",
                p_hat.len(),
                self.num_path_vars
            )));
        }
        if self.num_assoc_vars > 0 && (tr.terminals() != self.num_terminals || tr.remaining() != self.num_remaining) {
            return Err(IlpError::Dimension(format!(
                "T_R is {}x{}, expected {}x{}",
                tr.terminals(),
                tr.remaining(),
                self.num_terminals,
                self.num_remaining
            )));
        }
        let mut x = p_hat.to_vec();
        for t in 0..self.num_terminals {
            for r in 0..self.num_remaining {
                x.push(tr.get(t, r));
            }
        }
        Ok(x)
    }

    /// Splits a variable vector back into `P̂` and `T_R`.
    pub fn unpack(&self, x: &[bool]) -> (Vec<bool>, TerminalAssociation) {
        let p_hat = x[..self.num_path_vars].to_vec();
        let mut tr = TerminalAssociation::zeros(self.num_terminals, self.num_remaining);
        for t in 0..self.num_terminals {
            for r in 0..self.num_remaining {
                tr.set(t, r, x[self.assoc_var(t, r)]);
            }
        }
        (p_hat, tr)
    }

    pub fn objective_of(&self, x: &[bool]) -> f64 {
        let paths = x[..self.num_path_vars].iter().filter(|&&v| v).count();
        let assigns = x[self.num_path_vars..].iter().filter(|&&v| v).count();
        objective_value(paths, assigns, self.lambda)
    }

    pub fn rows(&self, family: Family) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(move |c| c.family == family)
    }
}

/// Builds the program for a set of candidate paths.
pub fn build_problem(m: &PathMatrices, lambda: f64) -> Result<IlpProblem, IlpError> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(IlpError::InvalidLambda(lambda));
    }
    let (nh, nt, nr) = (m.num_paths(), m.terminals().len(), m.remaining().len());
    let mut problem = IlpProblem {
        num_path_vars: nh,
        num_assoc_vars: nt * nr,
        num_terminals: nt,
        num_remaining: nr,
        lambda,
        objective: Vec::with_capacity(nh + nt * nr),
        constraints: Vec::with_capacity(nt * nh + m.customers().len() + nr),
        var_names: Vec::with_capacity(nh + nt * nr),
    };
    for k in 0..nh {
        problem.objective.push(1.0);
        problem.var_names.push(format!("P_{}", k + 1));
    }
    for t in m.terminals() {
        for r in m.remaining() {
            problem.objective.push(-lambda);
            problem.var_names.push(format!("A_{t}_{r}"));
        }
    }

    let counts = m.row_element_counts();
    for (t, tid) in m.terminals().iter().enumerate() {
        for (h, row) in m.rows().iter().enumerate() {
            let mut terms = Vec::new();
            if row.terminal == t && counts[h] > 0 {
                terms.push((h, counts[h] as i64));
                terms.extend(row.interior.iter().map(|&r| (problem.assoc_var(t, r), -1)));
            }
            problem.constraints.push(Constraint {
                name: format!("V_{tid}_{}", h + 1),
                family: Family::Validity,
                origin: RowOrigin::Validity { terminal: t, path: h },
                trivial: terms.is_empty(),
                terms,
                cmp: Comparator::Le,
                rhs: 0,
            });
        }
    }
    for (c, paths) in m.paths_by_customer().into_iter().enumerate() {
        let terms: Vec<(usize, i64)> = paths.into_iter().map(|h| (h, 1)).collect();
        problem.constraints.push(Constraint {
            name: format!("C_{}", m.customers()[c]),
            family: Family::UniquePath,
            origin: RowOrigin::UniquePath { customer: c },
            trivial: terms.is_empty(),
            terms,
            cmp: Comparator::Le,
            rhs: 1,
        });
    }
    for (r, rid) in m.remaining().iter().enumerate() {
        let terms: Vec<(usize, i64)> = (0..nt).map(|t| (problem.assoc_var(t, r), 1)).collect();
        problem.constraints.push(Constraint {
            name: format!("E_{rid}"),
            family: Family::UniqueTerminal,
            origin: RowOrigin::UniqueTerminal { element: r },
            trivial: terms.is_empty(),
            terms,
            cmp: Comparator::Le,
            rhs: 1,
        });
    }
    Ok(problem)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub row: usize,
    pub name: String,
    pub family: Family,
    pub origin: RowOrigin,
    pub lhs: i64,
    pub rhs: i64,
}

impl RowViolation {
    /// Path index for validity violations.
    pub fn path(&self) -> Option<usize> {
        match self.origin {
            RowOrigin::Validity { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub feasible: bool,
    pub objective: f64,
    pub violations: Vec<RowViolation>,
}

/// Checks every row of the program for a proposed `(P̂, T_R)`.
pub fn evaluate(problem: &IlpProblem, p_hat: &[bool], tr: &TerminalAssociation) -> Result<Evaluation, IlpError> {
    let x = problem.pack(p_hat, tr)?;
    Ok(evaluate_vector(problem, &x))
}

pub fn evaluate_vector(problem: &IlpProblem, x: &[bool]) -> Evaluation {
    let violations: Vec<RowViolation> = problem
        .constraints
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let lhs = c.activity(x);
            (!c.cmp.holds(lhs, c.rhs)).then(|| RowViolation {
                row: i,
                name: c.name.clone(),
                family: c.family,
                origin: c.origin,
                lhs,
                rhs: c.rhs,
            })
        })
        .collect();
    Evaluation {
        feasible: violations.is_empty(),
        objective: problem.objective_of(x),
        violations,
    }
}

/// The matrices of the validity check, laid out terminal-major (`|T| x |H|`).
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityTerms {
    /// Intermediate element count per path (`Σ_r H_R`).
    pub counts: Vec<i64>,
    /// Counts masked by `P̂`.
    pub selected_counts: Vec<i64>,
    /// Masked counts broadcast onto `H_T`.
    pub lhs: Vec<Vec<i64>>,
    /// `T_R · H_Rᵀ`: elements shared by each terminal and path.
    pub shared: Vec<Vec<i64>>,
    /// Shared counts masked by `H_T`.
    pub rhs: Vec<Vec<i64>>,
}

impl ValidityTerms {
    /// Element-wise `lhs ≤ rhs`.
    pub fn holds(&self) -> bool {
        self.lhs
            .iter()
            .flatten()
            .zip(self.rhs.iter().flatten())
            .all(|(l, r)| l <= r)
    }
}

/// Computes the validity matrices step by step, with the broadcasting of a
/// per-path column against `H_T` written out explicitly.
pub fn constraint1_intermediates(
    m: &PathMatrices,
    p_hat: &[bool],
    tr: &TerminalAssociation,
) -> Result<ValidityTerms, IlpError> {
    let (nh, nt, nr) = (m.num_paths(), m.terminals().len(), m.remaining().len());
    if p_hat.len() != nh {
        return Err(IlpError::Dimension(format!(
            "P̂ has {} entries, expected {nh}",
            p_hat.len()
        )));
    }
    if nr > 0 && (tr.terminals() != nt || tr.remaining() != nr) {
        return Err(IlpError::Dimension(format!(
            "T_R is {}x{}, expected {nt}x{nr}",
            tr.terminals(),
            tr.remaining()
        )));
    }
    let h_r = m.h_r();
    let h_t = m.h_t();

    let counts: Vec<i64> = h_r.iter().map(|row| row.iter().map(|&v| v as i64).sum()).collect();
    let selected_counts: Vec<i64> = counts.iter().zip(p_hat).map(|(&c, &p)| c * p as i64).collect();

    let mut lhs = vec![vec![0i64; nh]; nt];
    let mut shared = vec![vec![0i64; nh]; nt];
    let mut rhs = vec![vec![0i64; nh]; nt];
    for t in 0..nt {
        for h in 0..nh {
            let on_terminal = h_t[h][t] as i64;
            lhs[t][h] = selected_counts[h] * on_terminal;
            shared[t][h] = (0..nr).map(|r| tr.get(t, r) as i64 * h_r[h][r] as i64).sum();
            rhs[t][h] = shared[t][h] * on_terminal;
        }
    }
    Ok(ValidityTerms {
        counts,
        selected_counts,
        lhs,
        shared,
        rhs,
    })
}

/// `P̂ × H_C`: number of selected paths per customer.
pub fn paths_per_customer(m: &PathMatrices, p_hat: &[bool]) -> Vec<usize> {
    let mut out = vec![0; m.customers().len()];
    for (row, &p) in m.rows().iter().zip(p_hat) {
        if p {
            out[row.customer] += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::ElementId;
    use crate::path::Path;

    fn ids(v: &[&str]) -> Vec<ElementId> {
        v.iter().map(|s| ElementId::from(*s)).collect()
    }

    #[test]
    fn single_path_single_row() {
        let m = PathMatrices::from_parts(
            vec![Path::from_ids(["c", "l", "j"], 0.0)],
            ids(&["c"]),
            ids(&["l"]),
            ids(&["j"]),
        )
        .unwrap();
        let p = build_problem(&m, 0.5).unwrap();
        let v: Vec<_> = p.rows(Family::Validity).collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].terms, vec![(0, 1), (1, -1)]);
        assert_eq!((v[0].cmp, v[0].rhs), (Comparator::Le, 0));
        assert_eq!(p.objective, vec![1.0, -0.5]);
        assert_eq!(p.var_names, vec!["P_1", "A_j_l"]);
    }

    #[test]
    fn empty_problem() {
        let m = PathMatrices::from_parts(vec![], vec![], vec![], vec![]).unwrap();
        let p = build_problem(&m, auto_lambda(&m)).unwrap();
        assert_eq!(p.num_vars(), 0);
        assert!(p.constraints.is_empty());
        let e = evaluate(&p, &[], &TerminalAssociation::zeros(0, 0)).unwrap();
        assert!(e.feasible);
        assert_eq!(e.objective, 0.0);
    }

    #[test]
    fn lambda_must_be_non_negative() {
        let m = PathMatrices::from_parts(vec![], vec![], vec![], vec![]).unwrap();
        assert!(matches!(build_problem(&m, -0.1), Err(IlpError::InvalidLambda(_))));
        assert!(matches!(build_problem(&m, f64::NAN), Err(IlpError::InvalidLambda(_))));
        assert!(build_problem(&m, 0.0).is_ok());
    }

    #[test]
    fn zero_rows_are_kept_and_marked() {
        let m = PathMatrices::from_parts(
            vec![Path::from_ids(["c", "l", "j1"], 0.0), Path::from_ids(["c", "j2"], 0.0)],
            ids(&["c"]),
            ids(&["l"]),
            ids(&["j1", "j2"]),
        )
        .unwrap();
        let p = build_problem(&m, 0.1).unwrap();
        let trivial: Vec<_> = p.rows(Family::Validity).map(|c| c.trivial).collect();
        // (j1,h1) (j1,h2) (j2,h1) (j2,h2)
        assert_eq!(trivial, vec![false, true, true, true]);
    }

    #[test]
    fn masked_lhs_is_zero_without_selection() {
        let m = PathMatrices::from_parts(
            vec![Path::from_ids(["c", "l", "j"], 0.0)],
            ids(&["c"]),
            ids(&["l"]),
            ids(&["j"]),
        )
        .unwrap();
        let terms = constraint1_intermediates(&m, &[false], &TerminalAssociation::zeros(1, 1)).unwrap();
        assert_eq!(terms.lhs, vec![vec![0]]);
        assert!(terms.holds());
        assert!(constraint1_intermediates(&m, &[true, false], &TerminalAssociation::zeros(1, 1)).is_err());
    }
}
