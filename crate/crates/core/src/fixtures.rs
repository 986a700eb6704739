//! Small reference cases with known answers.
//!
//! The academic network has 18 elements: customers `e1`–`e6`, point-like
//! line elements `e7`–`e12`, feeder terminal junctions `e13`–`e16` and
//! transformers `e17` (for `e13`, `e14`) and `e18` (for `e15`, `e16`). With
//! `N = 5`, `D = 10`, `L = 30` it yields ten candidate paths, five of them for
//! `e2`, and every `e2` path competes with `e3`'s only path for `e7`/`e8`.
//!
//! The split-path case is four hand-written paths over two customers and two
//! junctions, with a feasible and an infeasible terminal association.

use std::collections::BTreeMap;

use crate::matrices::{PathMatrices, TerminalAssociation};
use crate::network::{Element, ElementId, ElementType, Network};
use crate::path::Path;
use crate::search::SearchConfig;

pub const ACADEMIC_MAX_PATHS: usize = 5;
pub const ACADEMIC_MAX_DISTANCE: f64 = 10.0;
pub const ACADEMIC_MAX_LENGTH: f64 = 30.0;

const ACADEMIC_CUSTOMERS: [(&str, f64, f64, &str); 6] = [
    ("e1", 3.0, -14.5, "e14"),
    ("e2", -2.5, -12.5, "e16"),
    ("e3", -16.5, -6.0, "e14"),
    ("e4", 37.0, 21.5, "e15"),
    ("e5", 17.5, -17.5, "e13"),
    ("e6", 11.5, 0.0, "e13"),
];

const ACADEMIC_POINTS: [(&str, ElementType, f64, f64); 12] = [
    ("e7", ElementType::Line, -7.5, -4.5),
    ("e8", ElementType::Line, 0.0, -10.0),
    ("e9", ElementType::Line, 32.0, 21.0),
    ("e10", ElementType::Line, 0.0, 0.0),
    ("e11", ElementType::Line, 16.0, -10.5),
    ("e12", ElementType::Line, 7.5, -5.5),
    ("e13", ElementType::Junction, 14.0, 1.0),
    ("e14", ElementType::Junction, -3.5, -15.5),
    ("e15", ElementType::Junction, 26.0, 25.5),
    ("e16", ElementType::Junction, 3.5, 3.5),
    ("e17", ElementType::Transformer, 5.0, -25.0),
    ("e18", ElementType::Transformer, 20.0, 32.0),
];

pub fn academic_network() -> Network {
    let mut elements: Vec<Element> = ACADEMIC_CUSTOMERS
        .iter()
        .map(|&(id, x, y, j)| Element::customer(id, x, y, j))
        .collect();
    elements.extend(
        ACADEMIC_POINTS
            .iter()
            .map(|(id, kind, x, y)| Element::point(*id, kind.clone(), *x, *y)),
    );
    let j2t: BTreeMap<ElementId, ElementId> = [("e13", "e17"), ("e14", "e17"), ("e15", "e18"), ("e16", "e18")]
        .into_iter()
        .map(|(j, t)| (j.into(), t.into()))
        .collect();
    Network::new(elements, j2t).expect("academic fixture is consistent")
}

pub fn academic_search() -> SearchConfig {
    SearchConfig::new(ACADEMIC_MAX_PATHS, ACADEMIC_MAX_DISTANCE, ACADEMIC_MAX_LENGTH)
}

/// Four paths: `h1 = e1 e3 e4 e6`, `h2 = e1 e3 e5 e7`, `h3 = e2 e3 e6`,
/// `h4 = e2 e5 e7`, with `e6`, `e7` the junctions.
pub fn split_case_matrices() -> PathMatrices {
    let ids = |v: &[&str]| v.iter().map(|s| ElementId::from(*s)).collect::<Vec<_>>();
    PathMatrices::from_parts(
        vec![
            Path::from_ids(["e1", "e3", "e4", "e6"], 0.0),
            Path::from_ids(["e1", "e3", "e5", "e7"], 0.0),
            Path::from_ids(["e2", "e3", "e6"], 0.0),
            Path::from_ids(["e2", "e5", "e7"], 0.0),
        ],
        ids(&["e1", "e2"]),
        ids(&["e3", "e4", "e5"]),
        ids(&["e6", "e7"]),
    )
    .expect("split-path fixture is consistent")
}

/// `h1` and `h3` selected.
pub fn split_case_selection() -> Vec<bool> {
    vec![true, false, true, false]
}

/// Case (a): `e3`, `e4` both on `e6`; consistent with the selection.
pub fn split_case_association_a(m: &PathMatrices) -> TerminalAssociation {
    TerminalAssociation::from_pairs(m, [("e6", "e3"), ("e6", "e4")]).expect("columns exist")
}

/// Case (b): `e4` on `e6` but `e3` on `e7`, which splits `h1` across feeders.
pub fn split_case_association_b(m: &PathMatrices) -> TerminalAssociation {
    TerminalAssociation::from_pairs(m, [("e6", "e4"), ("e7", "e3")]).expect("columns exist")
}
