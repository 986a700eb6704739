//! Exact optimization of the path selection program.
//!
//! `solve` is a depth-first branch-and-bound over the binary variables with
//! bound propagation on every row. Variables are branched in order of
//! decreasing objective coefficient (path selections before assignments),
//! trying the objective-improving value first. The bound is the current
//! objective plus one for every customer group that could still receive a
//! path. Leaves are met in lexicographically decreasing `P̂` order (then
//! increasing `T_R`), and the incumbent is only replaced by strictly better
//! solutions, so among optima the lexicographically greatest `P̂` wins.

mod brute;
pub mod export;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

pub use brute::{brute_force, BRUTE_FORCE_MAX_PATHS};

use crate::ilp::{Comparator, Family, IlpProblem};
use crate::matrices::TerminalAssociation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    InfeasibleModel,
    Aborted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Limits {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub p_hat: Vec<bool>,
    pub tr: TerminalAssociation,
    pub objective: f64,
    pub status: Status,
    pub stats: SolveStats,
}

impl Solution {
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.p_hat.iter().enumerate().filter(|(_, &v)| v).map(|(k, _)| k)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("brute force refuses {paths} paths (limit {limit})")]
    TooLarge { paths: usize, limit: usize },
    #[error(transparent)]
    Matrix(#[from] crate::matrices::MatrixError),
}

const UNSET: i8 = -1;

/// Rows normalized to `Σ a·x ≤ b`.
struct Rows {
    terms: Vec<Vec<(usize, i64)>>,
    rhs: Vec<i64>,
    occurs: Vec<Vec<usize>>,
}

impl Rows {
    fn new(problem: &IlpProblem) -> Self {
        let n = problem.num_vars();
        let mut rows = Rows {
            terms: Vec::with_capacity(problem.constraints.len()),
            rhs: Vec::with_capacity(problem.constraints.len()),
            occurs: vec![Vec::new(); n],
        };
        for c in problem.constraints.iter().filter(|c| !c.trivial) {
            let (terms, rhs) = match c.cmp {
                Comparator::Le => (c.terms.clone(), c.rhs),
                Comparator::Ge => (c.terms.iter().map(|&(v, a)| (v, -a)).collect(), -c.rhs),
            };
            let id = rows.terms.len();
            for &(v, _) in &terms {
                rows.occurs[v].push(id);
            }
            rows.terms.push(terms);
            rows.rhs.push(rhs);
        }
        rows
    }
}

struct Search<'a> {
    problem: &'a IlpProblem,
    rows: Rows,
    values: Vec<i8>,
    trail: Vec<usize>,
    /// Customer group per path variable, from the unique-path rows.
    group_of: Vec<Option<usize>>,
    groups: usize,
}

impl<'a> Search<'a> {
    fn new(problem: &'a IlpProblem) -> Self {
        let rows = Rows::new(problem);
        let mut group_of = vec![None; problem.num_path_vars];
        let mut groups = 0;
        for c in problem.rows(Family::UniquePath) {
            let at_most_one = c.cmp == Comparator::Le
                && c.rhs == 1
                && c.terms.iter().all(|&(v, a)| a == 1 && v < problem.num_path_vars);
            if at_most_one && !c.terms.is_empty() {
                for &(v, _) in &c.terms {
                    group_of[v].get_or_insert(groups);
                }
                groups += 1;
            }
        }
        Search {
            problem,
            values: vec![UNSET; problem.num_vars()],
            rows,
            trail: Vec::new(),
            group_of,
            groups,
        }
    }

    fn assign(&mut self, var: usize, val: bool) {
        self.values[var] = val as i8;
        self.trail.push(var);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            self.values[v] = UNSET;
        }
    }

    /// Propagates a single row; returns false on conflict.
    fn propagate_row(&mut self, row: usize, queue: &mut Vec<usize>) -> bool {
        let terms = &self.rows.terms[row];
        let rhs = self.rows.rhs[row];
        let mut min_act = 0i64;
        for &(v, a) in terms {
            match self.values[v] {
                UNSET if a < 0 => min_act += a,
                1 => min_act += a,
                _ => {}
            }
        }
        if min_act > rhs {
            return false;
        }
        let mut forced = Vec::new();
        for &(v, a) in terms {
            if self.values[v] != UNSET {
                continue;
            }
            if a > 0 && min_act + a > rhs {
                forced.push((v, false));
            } else if a < 0 && min_act - a > rhs {
                forced.push((v, true));
            }
        }
        for (v, val) in forced {
            if self.values[v] == UNSET {
                self.assign(v, val);
                queue.push(v);
            }
        }
        true
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(v) = queue.pop() {
            for i in 0..self.rows.occurs[v].len() {
                let row = self.rows.occurs[v][i];
                if !self.propagate_row(row, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    fn propagate_all(&mut self) -> bool {
        let mut queue = Vec::new();
        for row in 0..self.rows.terms.len() {
            if !self.propagate_row(row, &mut queue) {
                return false;
            }
        }
        self.propagate(queue)
    }

    fn bound(&self) -> f64 {
        let np = self.problem.num_path_vars;
        let mut fixed_paths = 0;
        let mut open = 0;
        let mut group_open = vec![false; self.groups];
        let mut group_done = vec![false; self.groups];
        for v in 0..np {
            match (self.values[v], self.group_of[v]) {
                (1, Some(g)) => {
                    fixed_paths += 1;
                    group_done[g] = true;
                }
                (1, None) => fixed_paths += 1,
                (UNSET, Some(g)) => group_open[g] = true,
                (UNSET, None) => open += 1,
                _ => {}
            }
        }
        open += group_open.iter().zip(&group_done).filter(|(&o, &d)| o && !d).count();
        let assigns = self.values[np..].iter().filter(|&&v| v == 1).count();
        crate::ilp::objective_value(fixed_paths + open, assigns, self.problem.lambda)
    }
}

struct Decision {
    position: usize,
    second: bool,
    trail_len: usize,
}

/// Finds a provably optimal `(P̂, T_R)` within the given limits.
pub fn solve(problem: &IlpProblem, limits: Limits) -> Solution {
    let started = Instant::now();
    let n = problem.num_vars();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| problem.objective[b].total_cmp(&problem.objective[a]).then(a.cmp(&b)));
    let preferred = |v: usize| problem.objective[v] > 0.0;

    let mut search = Search::new(problem);
    let mut incumbent: Option<(Vec<bool>, f64)> = None;
    let mut nodes = 0u64;
    let mut aborted = false;
    let mut stack: Vec<Decision> = Vec::new();

    let mut consistent = search.propagate_all();
    'outer: loop {
        if consistent {
            nodes += 1;
            let over_nodes = limits.node_limit.is_some_and(|l| nodes > l);
            let over_time = nodes.is_multiple_of(256) && limits.time_limit.is_some_and(|l| started.elapsed() > l);
            if over_nodes || over_time {
                aborted = true;
                break;
            }
            let pruned = incumbent.as_ref().is_some_and(|(_, best)| search.bound() <= *best);
            if !pruned {
                let from = stack.last().map_or(0, |d| d.position + 1);
                match (from..n).find(|&i| search.values[order[i]] == UNSET) {
                    None => {
                        let x: Vec<bool> = search.values.iter().map(|&v| v == 1).collect();
                        debug_assert!(crate::ilp::evaluate_vector(problem, &x).feasible);
                        let value = problem.objective_of(&x);
                        if incumbent.as_ref().is_none_or(|(_, best)| value > *best) {
                            incumbent = Some((x, value));
                        }
                    }
                    Some(position) => {
                        let var = order[position];
                        let trail_len = search.trail.len();
                        stack.push(Decision {
                            position,
                            second: false,
                            trail_len,
                        });
                        search.assign(var, preferred(var));
                        consistent = search.propagate(vec![var]);
                        continue;
                    }
                }
            }
        }
        // Backtrack to the most recent decision with an untried value.
        loop {
            let Some(top) = stack.last_mut() else {
                break 'outer;
            };
            search.undo_to(top.trail_len);
            if top.second {
                stack.pop();
                continue;
            }
            top.second = true;
            let var = order[top.position];
            search.assign(var, !preferred(var));
            consistent = search.propagate(vec![var]);
            continue 'outer;
        }
    }

    let stats = SolveStats {
        nodes,
        elapsed: started.elapsed(),
    };
    let status = match (&incumbent, aborted) {
        (_, true) => Status::Aborted,
        (Some(_), false) => Status::Optimal,
        (None, false) => Status::InfeasibleModel,
    };
    let (x, objective) = incumbent.unwrap_or_else(|| (vec![false; n], 0.0));
    let (p_hat, tr) = problem.unpack(&x);
    Solution {
        p_hat,
        tr,
        objective,
        status,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{build_problem, evaluate, Constraint, RowOrigin};
    use crate::matrices::PathMatrices;
    use crate::network::ElementId;
    use crate::path::Path;

    fn ids(v: &[&str]) -> Vec<ElementId> {
        v.iter().map(|s| ElementId::from(*s)).collect()
    }

    fn two_paths_one_customer() -> PathMatrices {
        PathMatrices::from_parts(
            vec![
                Path::from_ids(["c", "l1", "j1"], 0.0),
                Path::from_ids(["c", "l2", "j2"], 0.0),
            ],
            ids(&["c"]),
            ids(&["l1", "l2"]),
            ids(&["j1", "j2"]),
        )
        .unwrap()
    }

    #[test]
    fn empty_problem_is_optimal_at_zero() {
        let m = PathMatrices::from_parts(vec![], vec![], vec![], vec![]).unwrap();
        let sol = solve(&build_problem(&m, 0.1).unwrap(), Limits::none());
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.objective, 0.0);
        assert!(sol.p_hat.is_empty());
    }

    #[test]
    fn one_path_per_customer_and_greatest_p_hat() {
        let m = two_paths_one_customer();
        let p = build_problem(&m, 0.2).unwrap();
        let sol = solve(&p, Limits::none());
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.p_hat, vec![true, false]);
        assert_eq!(sol.tr.to_dense(), vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(sol.objective, 1.0 - 0.2);
        assert!(evaluate(&p, &sol.p_hat, &sol.tr).unwrap().feasible);
    }

    #[test]
    fn lambda_zero_still_gives_minimal_assignment() {
        let m = two_paths_one_customer();
        let sol = solve(&build_problem(&m, 0.0).unwrap(), Limits::none());
        assert_eq!(sol.tr.count(), 1);
    }

    #[test]
    fn node_limit_aborts() {
        let m = two_paths_one_customer();
        let sol = solve(
            &build_problem(&m, 0.2).unwrap(),
            Limits {
                node_limit: Some(1),
                time_limit: None,
            },
        );
        assert_eq!(sol.status, Status::Aborted);
    }

    #[test]
    fn contradictory_row_is_infeasible() {
        let m = two_paths_one_customer();
        let mut p = build_problem(&m, 0.2).unwrap();
        p.constraints.push(Constraint {
            name: "X".into(),
            family: Family::UniquePath,
            origin: RowOrigin::UniquePath { customer: 0 },
            terms: vec![(0, 1)],
            cmp: Comparator::Ge,
            rhs: 2,
            trivial: false,
        });
        assert_eq!(solve(&p, Limits::none()).status, Status::InfeasibleModel);
    }

    #[test]
    fn repeated_solves_are_identical() {
        let m = two_paths_one_customer();
        let p = build_problem(&m, 0.0).unwrap();
        let a = solve(&p, Limits::none());
        let b = solve(&p, Limits::none());
        assert_eq!((a.p_hat, a.tr, a.objective), (b.p_hat, b.tr, b.objective));
    }
}
