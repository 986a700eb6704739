//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use feederpath::matrices::PathMatrices;
use feederpath::network::{Element, ElementId, ElementType, Network};
use feederpath::path::Path;
use rand::Rng;

/// Counts customer → distinct intermediates (at least one) → terminal
/// sequences by walking them one by one.
pub fn enumerate_hypothetical(n_c: usize, n_r: usize, n_t: usize) -> u64 {
    fn orderings(used: &mut Vec<bool>, depth: usize) -> u64 {
        let mut total = if depth > 0 { 1 } else { 0 };
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                total += orderings(used, depth + 1);
                used[i] = false;
            }
        }
        total
    }
    let mut count = 0;
    for _c in 0..n_c {
        for _t in 0..n_t {
            count += orderings(&mut vec![false; n_r], 0);
        }
    }
    count
}

/// A point-element network in plain coordinates, for the exhaustive path oracle.
#[derive(Debug, Clone)]
pub struct Plain {
    pub ids: Vec<String>,
    pub kinds: Vec<&'static str>,
    pub xy: Vec<(f64, f64)>,
    pub label: Vec<Option<usize>>,
}

impl Plain {
    pub fn random(rng: &mut impl Rng, max_lines: usize) -> Plain {
        let n_c = rng.gen_range(1..=3);
        let n_l = rng.gen_range(1..=max_lines);
        let n_j = rng.gen_range(1..=3);
        let mut p = Plain {
            ids: vec![],
            kinds: vec![],
            xy: vec![],
            label: vec![],
        };
        let mut push = |p: &mut Plain, id: String, kind, label| {
            p.ids.push(id);
            p.kinds.push(kind);
            p.xy.push((rng.gen_range(0.0..30.0), rng.gen_range(0.0..30.0)));
            p.label.push(label);
        };
        let first_junction = n_c + n_l;
        for i in 0..n_c {
            let j = first_junction + (i % n_j);
            push(&mut p, format!("c{i}"), "customer", Some(j));
        }
        for i in 0..n_l {
            push(&mut p, format!("l{i}"), "line", None);
        }
        for i in 0..n_j {
            push(&mut p, format!("j{i}"), "junction", None);
        }
        p
    }

    pub fn network(&self) -> Network {
        let elements = (0..self.ids.len())
            .map(|i| {
                let (x, y) = self.xy[i];
                match self.kinds[i] {
                    "customer" => {
                        Element::customer(self.ids[i].as_str(), x, y, self.ids[self.label[i].unwrap()].as_str())
                    }
                    "line" => Element::point(self.ids[i].as_str(), ElementType::Line, x, y),
                    _ => Element::point(self.ids[i].as_str(), ElementType::Junction, x, y),
                }
            })
            .collect();
        Network::new(elements, Default::default()).unwrap()
    }

    fn d(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.xy[a], self.xy[b]);
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    }

    fn linked(&self, a: usize, b: usize, max_d: f64) -> bool {
        let pair = (self.kinds[a], self.kinds[b]);
        let allowed = matches!(
            pair,
            ("customer", "line")
                | ("line", "customer")
                | ("line", "line")
                | ("line", "junction")
                | ("junction", "line")
        );
        allowed && self.d(a, b) <= max_d
    }

    /// Every simple customer → line* → labelled junction path within the
    /// limits, with its length.
    pub fn all_paths(&self, customer: usize, max_d: f64, max_l: f64) -> Vec<(Vec<String>, f64)> {
        let target = self.label[customer].unwrap();
        let mut out = vec![];
        let mut stack = vec![customer];
        self.walk(&mut stack, 0.0, target, max_d, max_l, &mut out);
        out
    }

    fn walk(
        &self,
        stack: &mut Vec<usize>,
        len: f64,
        target: usize,
        max_d: f64,
        max_l: f64,
        out: &mut Vec<(Vec<String>, f64)>,
    ) {
        let last = *stack.last().unwrap();
        for next in 0..self.ids.len() {
            if stack.contains(&next) || !self.linked(last, next, max_d) {
                continue;
            }
            let l = len + self.d(last, next);
            if l > max_l {
                continue;
            }
            if next == target {
                let mut ids: Vec<String> = stack.iter().map(|&i| self.ids[i].clone()).collect();
                ids.push(self.ids[next].clone());
                out.push((ids, l));
            } else if self.kinds[next] == "line" {
                stack.push(next);
                self.walk(stack, l, target, max_d, max_l, out);
                stack.pop();
            }
        }
    }
}

/// Random candidate matrices within the given size limits.
pub fn random_matrices(rng: &mut impl Rng, max_h: usize, max_t: usize, max_r: usize, max_c: usize) -> PathMatrices {
    let n_c = rng.gen_range(1..=max_c);
    let n_r = rng.gen_range(1..=max_r);
    let n_t = rng.gen_range(1..=max_t);
    let n_h = rng.gen_range(0..=max_h);
    let cid = |i: usize| format!("c{i}");
    let rid = |i: usize| format!("r{i}");
    let tid = |i: usize| format!("t{i}");
    let paths = (0..n_h)
        .map(|_| {
            let mut interior: Vec<usize> = (0..n_r).filter(|_| rng.gen_bool(0.4)).collect();
            if interior.is_empty() && rng.gen_bool(0.8) {
                interior.push(rng.gen_range(0..n_r));
            }
            let mut ids = vec![cid(rng.gen_range(0..n_c))];
            ids.extend(interior.into_iter().map(rid));
            ids.push(tid(rng.gen_range(0..n_t)));
            Path::from_ids(ids, 0.0)
        })
        .collect();
    let ids = |n: usize, f: &dyn Fn(usize) -> String| (0..n).map(|i| ElementId::new(f(i))).collect::<Vec<_>>();
    PathMatrices::from_parts(paths, ids(n_c, &cid), ids(n_r, &rid), ids(n_t, &tid)).unwrap()
}

pub fn id_set<'a>(v: impl IntoIterator<Item = &'a ElementId>) -> BTreeSet<String> {
    v.into_iter().map(|i| i.to_string()).collect()
}
