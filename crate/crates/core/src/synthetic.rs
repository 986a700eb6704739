//! Seeded radial test networks with known customer paths.
//!
//! Feeders are straight rays out of one substation. Each ray starts at its
//! junction `R0` from the centre and continues with point-like line elements
//! every `SPACING`; customers sit `OFFSET` to either side of a line element.
//! With `D = MAX_DISTANCE` only neighbouring trunk elements connect, so every
//! customer has exactly one admissible path and removing trunk element `k`
//! cuts off every customer hanging at `k` or further out.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{Element, ElementId, ElementType, Network, Point};
use crate::path::Path;
use crate::search::SearchConfig;

pub const R0: f64 = 30.0;
pub const SPACING: f64 = 8.0;
pub const OFFSET: f64 = 7.0;
pub const MAX_DISTANCE: f64 = 10.0;
pub const MAX_FEEDERS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialSpec {
    pub feeders: usize,
    pub customers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Radial {
    pub network: Network,
    /// The one true path of every customer.
    pub truth: BTreeMap<ElementId, Path>,
    /// Trunk line ids per feeder, from the junction outwards.
    pub trunks: Vec<Vec<ElementId>>,
    /// `(feeder, trunk index)` each customer hangs off.
    pub attachment: BTreeMap<ElementId, (usize, usize)>,
    pub search: SearchConfig,
}

impl Radial {
    pub fn generate(spec: RadialSpec) -> Radial {
        assert!((1..=MAX_FEEDERS).contains(&spec.feeders), "1..={MAX_FEEDERS} feeders");
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let f = spec.feeders;

        // Customers per feeder: at least one each when possible.
        let mut per_feeder = vec![0usize; f];
        for i in 0..spec.customers {
            let k = if i < f { i } else { rng.gen_range(0..f) };
            per_feeder[k] += 1;
        }

        let mut elements = Vec::new();
        let mut j2t = BTreeMap::new();
        let mut trunks = Vec::with_capacity(f);
        let mut attachment = BTreeMap::new();
        let mut truth = BTreeMap::new();
        let mut next_customer = 1;
        let mut longest = 0;
        elements.push(Element::point("t1", ElementType::Transformer, 0.0, 0.0));

        for (fi, &n_cust) in per_feeder.iter().enumerate() {
            let jitter = 0.1 * TAU / f as f64;
            let angle = TAU * fi as f64 / f as f64 + rng.gen_range(-jitter..=jitter);
            let (u, n) = (
                Point::new(angle.cos(), angle.sin()),
                Point::new(-angle.sin(), angle.cos()),
            );
            let at = |r: f64, side: f64| Point::new(u.x * r + n.x * side, u.y * r + n.y * side);

            let junction = ElementId::new(format!("j{}", fi + 1));
            let p = at(R0, 0.0);
            elements.push(Element::point(junction.clone(), ElementType::Junction, p.x, p.y));
            j2t.insert(junction.clone(), ElementId::from("t1"));

            // Room for some gaps; the trunk then stops at the outermost customer
            // so that every line element carries at least one path.
            let room = n_cust.div_ceil(2) + rng.gen_range(0..=2);
            let mut slots: Vec<(usize, f64)> = (0..room).flat_map(|k| [(k, 1.0), (k, -1.0)]).collect();
            slots.shuffle(&mut rng);
            let mut taken: Vec<(usize, f64)> = slots.into_iter().take(n_cust).collect();
            taken.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            let n_lines = taken.last().map_or(0, |&(k, _)| k + 1);
            longest = longest.max(n_lines);
            let trunk: Vec<ElementId> = (1..=n_lines)
                .map(|k| ElementId::new(format!("f{}l{k}", fi + 1)))
                .collect();
            for (k, id) in trunk.iter().enumerate() {
                let p = at(R0 + SPACING * (k + 1) as f64, 0.0);
                elements.push(Element::point(id.clone(), ElementType::Line, p.x, p.y));
            }

            for (k, side) in taken {
                let id = ElementId::new(format!("c{next_customer}"));
                next_customer += 1;
                let p = at(R0 + SPACING * (k + 1) as f64, side * OFFSET);
                elements.push(Element::customer(id.clone(), p.x, p.y, junction.clone()));
                attachment.insert(id.clone(), (fi, k));
                let mut ids = vec![id.clone()];
                ids.extend(trunk[..=k].iter().rev().cloned());
                ids.push(junction.clone());
                truth.insert(id, ids);
            }
            trunks.push(trunk);
        }

        let network = Network::new(elements, j2t).expect("generated network is consistent");
        let truth = truth
            .into_iter()
            .map(|(c, ids)| (c, Path::measured(ids, &network).expect("ids exist")))
            .collect();
        let max_length = OFFSET + SPACING * longest as f64 + 1.0;
        Radial {
            network,
            truth,
            trunks,
            attachment,
            search: SearchConfig::new(3, MAX_DISTANCE, max_length),
        }
    }

    /// The network with one element removed.
    pub fn without(&self, id: &ElementId) -> Network {
        let elements = self
            .network
            .elements()
            .iter()
            .filter(|e| &e.id != id)
            .cloned()
            .collect();
        let j2t = self
            .network
            .junction_to_transformer()
            .iter()
            .filter(|(j, t)| *j != id && *t != id)
            .map(|(j, t)| (j.clone(), t.clone()))
            .collect();
        Network::new(elements, j2t).expect("removing a line keeps the network consistent")
    }

    /// Customers cut off when trunk element `k` of `feeder` is removed.
    pub fn disconnected_by(&self, feeder: usize, k: usize) -> Vec<ElementId> {
        self.attachment
            .iter()
            .filter(|(_, &(f, at))| f == feeder && at >= k)
            .map(|(c, _)| c.clone())
            .collect()
    }

    /// Picks a trunk element at random: `(feeder, index, id)`.
    pub fn random_trunk_element(&self, rng: &mut impl Rng) -> (usize, usize, ElementId) {
        let fed: Vec<usize> = (0..self.trunks.len()).filter(|&f| !self.trunks[f].is_empty()).collect();
        let f = fed[rng.gen_range(0..fed.len())];
        let k = rng.gen_range(0..self.trunks[f].len());
        (f, k, self.trunks[f][k].clone())
    }
}
