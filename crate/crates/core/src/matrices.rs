//! Path incidence blocks `H_C`, `H_R`, `H_T` plus the decision-variable
//! layouts (`P̂` selection vector and `T_R` terminal association).
//!
//! Rows follow the candidate path order; columns are id-sorted customers,
//! intermediate ("remaining") elements and feeder terminal junctions.
//! Transformers never appear as columns. Storage is sparse: each row keeps
//! its customer column, terminal column and the sorted interior columns.

use std::collections::HashMap;
use std::io::Write;

use thiserror::Error;

use crate::network::{ElementId, Network};
use crate::path::Path;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("path {path}: `{element}` is not a {role} column")]
    NotAColumn {
        path: usize,
        element: ElementId,
        role: &'static str,
    },
    #[error("path {path} has fewer than two elements")]
    TooShort { path: usize },
    #[error("path {path} repeats `{element}`")]
    Repeat { path: usize, element: ElementId },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRow {
    pub customer: usize,
    pub terminal: usize,
    /// Sorted `H_R` column indices.
    pub interior: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathMatrices {
    paths: Vec<Path>,
    customers: Vec<ElementId>,
    remaining: Vec<ElementId>,
    terminals: Vec<ElementId>,
    rows: Vec<PathRow>,
}

impl PathMatrices {
    /// Assembles the blocks with column orders taken from the network.
    pub fn build(paths: Vec<Path>, net: &Network) -> Result<Self, MatrixError> {
        let ids = |v: Vec<&crate::network::Element>| v.into_iter().map(|e| e.id.clone()).collect();
        Self::from_parts(paths, ids(net.customers()), ids(net.remaining()), ids(net.terminals()))
    }

    /// Assembles the blocks for explicit column sets; the columns are sorted
    /// by id.
    pub fn from_parts(
        paths: Vec<Path>,
        mut customers: Vec<ElementId>,
        mut remaining: Vec<ElementId>,
        mut terminals: Vec<ElementId>,
    ) -> Result<Self, MatrixError> {
        customers.sort();
        remaining.sort();
        terminals.sort();
        let index = |cols: &[ElementId]| -> HashMap<ElementId, usize> {
            cols.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect()
        };
        let (ci, ri, ti) = (index(&customers), index(&remaining), index(&terminals));

        let mut rows = Vec::with_capacity(paths.len());
        for (k, p) in paths.iter().enumerate() {
            if p.elements.len() < 2 {
                return Err(MatrixError::TooShort { path: k });
            }
            let col = |map: &HashMap<ElementId, usize>, id: &ElementId, role| {
                map.get(id).copied().ok_or_else(|| MatrixError::NotAColumn {
                    path: k,
                    element: id.clone(),
                    role,
                })
            };
            let customer = col(&ci, p.customer(), "customer")?;
            let terminal = col(&ti, p.terminal(), "terminal")?;
            let mut interior = p
                .interior()
                .iter()
                .map(|id| col(&ri, id, "remaining"))
                .collect::<Result<Vec<_>, _>>()?;
            interior.sort_unstable();
            if let Some(w) = interior.windows(2).find(|w| w[0] == w[1]) {
                return Err(MatrixError::Repeat {
                    path: k,
                    element: remaining[w[0]].clone(),
                });
            }
            rows.push(PathRow {
                customer,
                terminal,
                interior,
            });
        }
        Ok(PathMatrices {
            paths,
            customers,
            remaining,
            terminals,
            rows,
        })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn rows(&self) -> &[PathRow] {
        &self.rows
    }

    pub fn customers(&self) -> &[ElementId] {
        &self.customers
    }

    pub fn remaining(&self) -> &[ElementId] {
        &self.remaining
    }

    pub fn terminals(&self) -> &[ElementId] {
        &self.terminals
    }

    pub fn num_paths(&self) -> usize {
        self.rows.len()
    }

    /// Number of intermediate elements on each path: the row sums of `H_R`.
    pub fn row_element_counts(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.interior.len()).collect()
    }

    pub fn h_c(&self) -> Vec<Vec<u8>> {
        self.dense(self.customers.len(), |r| vec![r.customer])
    }

    pub fn h_r(&self) -> Vec<Vec<u8>> {
        self.dense(self.remaining.len(), |r| r.interior.clone())
    }

    pub fn h_t(&self) -> Vec<Vec<u8>> {
        self.dense(self.terminals.len(), |r| vec![r.terminal])
    }

    fn dense(&self, width: usize, ones: impl Fn(&PathRow) -> Vec<usize>) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![0u8; width];
                for c in ones(r) {
                    row[c] = 1;
                }
                row
            })
            .collect()
    }

    /// Indices of the paths that belong to each customer column.
    pub fn paths_by_customer(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.customers.len()];
        for (k, r) in self.rows.iter().enumerate() {
            out[r.customer].push(k);
        }
        out
    }

    /// Dense dump: one row per path, header lists every column id.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<&str> = std::iter::once("path")
            .chain(self.customers.iter().map(|i| i.as_str()))
            .chain(self.remaining.iter().map(|i| i.as_str()))
            .chain(self.terminals.iter().map(|i| i.as_str()))
            .collect();
        w.write_record(&header)?;
        let (hc, hr, ht) = (self.h_c(), self.h_r(), self.h_t());
        for k in 0..self.rows.len() {
            let mut rec = vec![format!("h{}", k + 1)];
            rec.extend(hc[k].iter().chain(&hr[k]).chain(&ht[k]).map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()
    }
}

/// Binary `|T| x |R|` assignment of intermediate elements to terminals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerminalAssociation {
    cells: Vec<Vec<bool>>,
}

impl TerminalAssociation {
    pub fn zeros(terminals: usize, remaining: usize) -> Self {
        TerminalAssociation {
            cells: vec![vec![false; remaining]; terminals],
        }
    }

    pub fn from_dense(rows: Vec<Vec<u8>>) -> Self {
        TerminalAssociation {
            cells: rows
                .into_iter()
                .map(|r| r.into_iter().map(|v| v != 0).collect())
                .collect(),
        }
    }

    /// Builds the association from (terminal id, element id) pairs.
    pub fn from_pairs<'a, I>(m: &PathMatrices, pairs: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut tr = Self::zeros(m.terminals.len(), m.remaining.len());
        for (t, r) in pairs {
            let ti = m.terminals.iter().position(|x| x.as_str() == t);
            let ri = m.remaining.iter().position(|x| x.as_str() == r);
            match (ti, ri) {
                (Some(ti), Some(ri)) => tr.set(ti, ri, true),
                _ => return Err(MatrixError::Dimension(format!("no cell for ({t}, {r})"))),
            }
        }
        Ok(tr)
    }

    pub fn terminals(&self) -> usize {
        self.cells.len()
    }

    pub fn remaining(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn get(&self, t: usize, r: usize) -> bool {
        self.cells[t][r]
    }

    pub fn set(&mut self, t: usize, r: usize, v: bool) {
        self.cells[t][r] = v;
    }

    pub fn count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&v| v).count()
    }

    /// Number of terminals each element is assigned to.
    pub fn column_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.remaining()];
        for row in &self.cells {
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += v as usize;
            }
        }
        sums
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.cells
            .iter()
            .map(|r| r.iter().map(|&v| v as u8).collect())
            .collect()
    }

    /// Terminal column an element is assigned to, if exactly one.
    pub fn terminal_of(&self, r: usize) -> Option<usize> {
        let mut hits = (0..self.cells.len()).filter(|&t| self.cells[t][r]);
        match (hits.next(), hits.next()) {
            (Some(t), None) => Some(t),
            _ => None,
        }
    }
}
