//! Candidate path generation.
//!
//! For one customer the search grows partial paths from the customer towards
//! its labelled feeder terminal junction, always expanding the partial path
//! of least cost, where cost is the sum of the current edge weights plus the
//! straight-line distance from the last element to the junction. Edge weights
//! start at the element distance. Each time a complete path is found, the
//! weights of its edges are multiplied by `alpha`, which pushes the search
//! towards routes that reuse fewer already-found edges. A branch ends at the
//! junction, at a dead end, or once its geometric length exceeds `L`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use thiserror::Error;

use crate::network::{
    dist, is_remaining, ConnectionConditions, Element, ElementId, ElementType, Network, NetworkError,
};
use crate::path::{Path, PathConditions};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Maximum number of paths returned per customer (`N`).
    pub max_paths: usize,
    /// Maximum total path length in meters (`L`).
    pub max_length: f64,
    /// Edge weight scaling applied after each found path; must exceed 1.
    pub alpha: f64,
    /// Connection distance `D` and allowed type adjacencies.
    pub connection: ConnectionConditions,
    /// Upper bound on partial-path expansions per customer.
    pub expansion_limit: usize,
}

impl SearchConfig {
    pub const DEFAULT_ALPHA: f64 = 2.0;

    pub fn new(max_paths: usize, max_distance: f64, max_length: f64) -> Self {
        SearchConfig {
            max_paths,
            max_length,
            alpha: Self::DEFAULT_ALPHA,
            connection: ConnectionConditions::new(max_distance),
            expansion_limit: 1_000_000,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn max_distance(&self) -> f64 {
        self.connection.max_distance
    }

    pub fn path_conditions(&self) -> PathConditions {
        PathConditions {
            connection: self.connection.clone(),
            max_length: self.max_length,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidConfig(msg));
        if self.max_paths < 1 {
            return bad("max paths must be at least 1".into());
        }
        if self.connection.max_distance.is_nan() || self.connection.max_distance <= 0.0 {
            return bad(format!(
                "max distance must be positive, got {}",
                self.connection.max_distance
            ));
        }
        if self.max_length.is_nan() || self.max_length <= 0.0 {
            return bad(format!("max length must be positive, got {}", self.max_length));
        }
        if !self.alpha.is_finite() || self.alpha <= 1.0 {
            return bad(format!("alpha must be a finite value above 1, got {}", self.alpha));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("`{0}` is not a customer")]
    NotCustomer(ElementId),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

impl SearchError {
    /// True when the failure comes from the customer's junction label.
    pub fn is_label_problem(&self) -> bool {
        matches!(
            self,
            SearchError::Network(NetworkError::MissingJunction(_) | NetworkError::UnknownJunction { .. })
        )
    }
}

/// Direct-connection graph of a network, by element position.
#[derive(Debug, Clone)]
pub struct Adjacency {
    neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn build(net: &Network, cond: &ConnectionConditions) -> Result<Self, NetworkError> {
        cond.validate()?;
        let elements = net.elements();
        let extent = |e: &Element| match &e.endpoints {
            Some([a, b]) => (a.x.min(b.x), a.x.max(b.x)),
            None => (e.coor.x, e.coor.x),
        };
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| extent(&elements[a]).0.total_cmp(&extent(&elements[b]).0));

        let mut neighbors = vec![Vec::new(); elements.len()];
        for (k, &i) in order.iter().enumerate() {
            let reach = extent(&elements[i]).1 + cond.max_distance;
            for &j in &order[k + 1..] {
                if extent(&elements[j]).0 > reach {
                    break;
                }
                if cond.connectable(&elements[i], &elements[j]) {
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Adjacency { neighbors })
    }

    pub fn neighbors(&self, position: usize) -> &[usize] {
        &self.neighbors[position]
    }
}

struct Frontier {
    cost: f64,
    version: u64,
    length: f64,
    elements: Vec<usize>,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl Ord for Frontier {
    // Reversed: BinaryHeap pops the cheapest partial path, ties going to the
    // lexicographically smallest element sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.elements.cmp(&self.elements))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable search context: holds the adjacency graph for one network and
/// configuration.
pub struct CandidateGenerator<'a> {
    net: &'a Network,
    cfg: SearchConfig,
    adjacency: Adjacency,
}

/// Result of one customer search.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomerSearch {
    pub paths: Vec<Path>,
    /// The expansion limit stopped the search early.
    pub truncated: bool,
}

impl<'a> CandidateGenerator<'a> {
    pub fn new(net: &'a Network, cfg: SearchConfig) -> Result<Self, SearchError> {
        cfg.validate()?;
        let adjacency = Adjacency::build(net, &cfg.connection)?;
        Ok(CandidateGenerator { net, cfg, adjacency })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn customer_paths(&self, customer: &ElementId) -> Result<CustomerSearch, SearchError> {
        let net = self.net;
        let start = net
            .position(customer)
            .ok_or_else(|| NetworkError::UnknownElement(customer.clone()))?;
        let c = &net.elements()[start];
        if c.kind != ElementType::Customer {
            return Err(SearchError::NotCustomer(customer.clone()));
        }
        let leaf = net.customer_junction(c)?;
        let target = net.position(&leaf.id).expect("junction resolved from the same network");
        let elements = net.elements();

        let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
        let edge = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let weight = |w: &HashMap<(usize, usize), f64>, a: usize, b: usize| {
            w.get(&edge(a, b))
                .copied()
                .unwrap_or_else(|| dist(&elements[a], &elements[b]))
        };
        let cost = |w: &HashMap<(usize, usize), f64>, seq: &[usize]| {
            let walked: f64 = seq.windows(2).map(|p| weight(w, p[0], p[1])).sum();
            walked + dist(&elements[seq[seq.len() - 1]], leaf)
        };

        let mut version = 0u64;
        let mut heap = BinaryHeap::new();
        heap.push(Frontier {
            cost: cost(&weights, &[start]),
            version,
            length: 0.0,
            elements: vec![start],
        });
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut expansions = 0usize;
        let mut truncated = false;

        while let Some(mut node) = heap.pop() {
            if found.len() >= self.cfg.max_paths {
                break;
            }
            if node.version != version {
                // Weights only grow, so a stale cost is a lower bound.
                let fresh = cost(&weights, &node.elements);
                node.version = version;
                if fresh > node.cost {
                    node.cost = fresh;
                    heap.push(node);
                    continue;
                }
            }
            let last = node.elements[node.elements.len() - 1];
            if last == target {
                if seen.insert(node.elements.clone()) {
                    for pair in node.elements.windows(2) {
                        let w = weight(&weights, pair[0], pair[1]) * self.cfg.alpha;
                        weights.insert(edge(pair[0], pair[1]), w);
                    }
                    version += 1;
                    found.push(node.elements);
                }
                continue;
            }
            expansions += 1;
            if expansions > self.cfg.expansion_limit {
                truncated = true;
                break;
            }
            for &next in self.adjacency.neighbors(last) {
                if node.elements.contains(&next) {
                    continue;
                }
                if next != target && !is_remaining(&elements[next].kind) {
                    continue;
                }
                let length = node.length + dist(&elements[last], &elements[next]);
                if length > self.cfg.max_length {
                    continue;
                }
                let mut seq = Vec::with_capacity(node.elements.len() + 1);
                seq.extend_from_slice(&node.elements);
                seq.push(next);
                heap.push(Frontier {
                    cost: cost(&weights, &seq),
                    version,
                    length,
                    elements: seq,
                });
            }
        }

        let paths = found
            .into_iter()
            .map(|seq| {
                let ids: Vec<ElementId> = seq.iter().map(|&i| elements[i].id.clone()).collect();
                Path::measured(ids, net).expect("ids come from the network")
            })
            .collect();
        Ok(CustomerSearch { paths, truncated })
    }

    /// Runs the search for every customer, in id order.
    pub fn generate(&self) -> Candidates {
        let customers: Vec<&ElementId> = self.net.customers().into_iter().map(|c| &c.id).collect();
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        let results: Vec<Result<CustomerSearch, SearchError>> = if customers.len() < 64 || threads < 2 {
            customers.iter().map(|c| self.customer_paths(c)).collect()
        } else {
            let chunk = customers.len().div_ceil(threads);
            std::thread::scope(|s| {
                let handles: Vec<_> = customers
                    .chunks(chunk)
                    .map(|part| s.spawn(move || part.iter().map(|c| self.customer_paths(c)).collect::<Vec<_>>()))
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("search worker panicked"))
                    .collect()
            })
        };

        let mut out = Candidates::default();
        for (customer, result) in customers.into_iter().zip(results) {
            match result {
                Ok(search) => {
                    if search.truncated {
                        log::warn!("search for {customer} hit the expansion limit");
                        out.truncated.push(customer.clone());
                    }
                    out.paths.extend(search.paths);
                }
                Err(error) => out.failures.push(GenerationFailure {
                    customer: customer.clone(),
                    error,
                }),
            }
        }
        out
    }
}

/// A customer whose search could not run.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationFailure {
    pub customer: ElementId,
    pub error: SearchError,
}

/// Candidate paths for all customers, concatenated in customer id order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Candidates {
    pub paths: Vec<Path>,
    pub failures: Vec<GenerationFailure>,
    pub truncated: Vec<ElementId>,
}

/// Candidate paths for a single customer.
pub fn customer_paths(net: &Network, customer: &ElementId, cfg: &SearchConfig) -> Result<Vec<Path>, SearchError> {
    Ok(CandidateGenerator::new(net, cfg.clone())?
        .customer_paths(customer)?
        .paths)
}

/// Candidate paths for every customer of the network.
pub fn generate_candidates(net: &Network, cfg: &SearchConfig) -> Result<Candidates, SearchError> {
    Ok(CandidateGenerator::new(net, cfg.clone())?.generate())
}
