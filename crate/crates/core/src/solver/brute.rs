use std::time::Instant;

use super::{Solution, SolveStats, SolverError, Status};
use crate::ilp::objective_value;
use crate::matrices::{PathMatrices, TerminalAssociation};

/// Largest candidate set `brute_force` agrees to enumerate.
pub const BRUTE_FORCE_MAX_PATHS: usize = 20;

struct Enumeration<'a> {
    m: &'a PathMatrices,
    by_customer: Vec<Vec<usize>>,
    lambda: f64,
    chosen: Vec<bool>,
    /// (terminal, number of selected paths using the element)
    owner: Vec<Option<(usize, usize)>>,
    assigned: usize,
    best: Option<(f64, Vec<bool>)>,
    visited: u64,
}

impl Enumeration<'_> {
    fn fits(&self, k: usize) -> bool {
        let row = &self.m.rows()[k];
        row.interior
            .iter()
            .all(|&r| self.owner[r].is_none_or(|(t, _)| t == row.terminal))
    }

    fn take(&mut self, k: usize) {
        let row = &self.m.rows()[k];
        for &r in &row.interior {
            match &mut self.owner[r] {
                Some((_, n)) => *n += 1,
                slot @ None => {
                    *slot = Some((row.terminal, 1));
                    self.assigned += 1;
                }
            }
        }
        self.chosen[k] = true;
    }

    fn release(&mut self, k: usize) {
        let row = &self.m.rows()[k];
        for &r in &row.interior {
            if let Some((_, n)) = &mut self.owner[r] {
                *n -= 1;
                if *n == 0 {
                    self.owner[r] = None;
                    self.assigned -= 1;
                }
            }
        }
        self.chosen[k] = false;
    }

    fn walk(&mut self, customer: usize, selected: usize) {
        self.visited += 1;
        if customer == self.by_customer.len() {
            let value = objective_value(selected, self.assigned, self.lambda);
            let better = match &self.best {
                None => true,
                Some((best, p)) => value > *best || (value == *best && self.chosen > *p),
            };
            if better {
                self.best = Some((value, self.chosen.clone()));
            }
            return;
        }
        self.walk(customer + 1, selected);
        for i in 0..self.by_customer[customer].len() {
            let k = self.by_customer[customer][i];
            if self.fits(k) {
                self.take(k);
                self.walk(customer + 1, selected + 1);
                self.release(k);
            }
        }
    }
}

/// Exhaustive reference optimizer: tries every choice of at most one path per
/// customer and derives the smallest consistent `T_R` for each. Ties are
/// broken exactly as in [`super::solve`].
pub fn brute_force(m: &PathMatrices, lambda: f64) -> Result<Solution, SolverError> {
    let started = Instant::now();
    let h = m.num_paths();
    if h > BRUTE_FORCE_MAX_PATHS {
        return Err(SolverError::TooLarge {
            paths: h,
            limit: BRUTE_FORCE_MAX_PATHS,
        });
    }
    let mut e = Enumeration {
        m,
        by_customer: m.paths_by_customer(),
        lambda,
        chosen: vec![false; h],
        owner: vec![None; m.remaining().len()],
        assigned: 0,
        best: None,
        visited: 0,
    };
    e.walk(0, 0);
    let (objective, p_hat) = e.best.take().expect("the empty selection is always feasible");
    let mut tr = TerminalAssociation::zeros(m.terminals().len(), m.remaining().len());
    for k in p_hat.iter().enumerate().filter(|(_, &v)| v).map(|(k, _)| k) {
        let row = &m.rows()[k];
        for &r in &row.interior {
            tr.set(row.terminal, r, true);
        }
    }
    Ok(Solution {
        p_hat,
        tr,
        objective,
        status: Status::Optimal,
        stats: SolveStats {
            nodes: e.visited,
            elapsed: started.elapsed(),
        },
    })
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
    fn refuses_large_inputs() {
        let paths = (0..21)
            .map(|i| Path::from_ids([format!("c{i}"), "j".to_string()], 0.0))
            .collect();
        let customers = (0..21).map(|i| ElementId::new(format!("c{i}"))).collect();
        let m = PathMatrices::from_parts(paths, customers, vec![], ids(&["j"])).unwrap();
        assert!(matches!(
            brute_force(&m, 0.1),
            Err(SolverError::TooLarge { paths: 21, .. })
        ));
    }

    #[test]
    fn conflicting_customers_share_nothing() {
        // Both customers need `l`, but through different terminals.
        let m = PathMatrices::from_parts(
            vec![
                Path::from_ids(["a", "l", "j1"], 0.0),
                Path::from_ids(["b", "l", "j2"], 0.0),
            ],
            ids(&["a", "b"]),
            ids(&["l"]),
            ids(&["j1", "j2"]),
        )
        .unwrap();
        let sol = brute_force(&m, 0.1).unwrap();
        assert_eq!(sol.p_hat, vec![true, false]);
        assert_eq!(sol.tr.to_dense(), vec![vec![1], vec![0]]);
    }
}
