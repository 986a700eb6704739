//! Randomized properties checked against brute force and plain re-derivations.

mod common;

use std::collections::BTreeSet;

use common::{id_set, random_matrices, Plain};
use feederpath::diagnostics::{diagnose, IssueKind};
use feederpath::ilp::{auto_lambda, build_problem, evaluate};
use feederpath::network::{dist, ConnectionConditions, Element, ElementType, Point};
use feederpath::path::validate_path;
use feederpath::search::{generate_candidates, SearchConfig};
use feederpath::solver::export::{parse_lp, parse_mps, write_lp, write_mps, ParsedModel};
use feederpath::solver::{brute_force, solve, Limits, Status};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn element(kind: u8, i: usize, xy: [f64; 4]) -> Element {
    let id = format!("x{i}");
    match kind % 4 {
        0 => Element::customer(id, xy[0], xy[1], "j"),
        1 => Element::point(id, ElementType::Line, xy[0], xy[1]),
        2 => Element::segment(id, Point::new(xy[0], xy[1]), Point::new(xy[2], xy[3])),
        _ => Element::point(id, ElementType::Junction, xy[0], xy[1]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_and_connection_are_symmetric(
        ka in 0u8..4, kb in 0u8..4,
        a in prop::array::uniform4(-50.0f64..50.0),
        b in prop::array::uniform4(-50.0f64..50.0),
        d in 0.0f64..40.0,
    ) {
        let (ea, eb) = (element(ka, 0, a), element(kb, 1, b));
        prop_assert_eq!(dist(&ea, &eb), dist(&eb, &ea));
        prop_assert!(dist(&ea, &eb) >= 0.0);
        let cond = ConnectionConditions::new(d);
        prop_assert_eq!(cond.connectable(&ea, &eb), cond.connectable(&eb, &ea));
    }

    #[test]
    fn solver_matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrices(&mut rng, 9, 3, 5, 4);
        let lambda = auto_lambda(&m);
        let problem = build_problem(&m, lambda).unwrap();
        let sol = solve(&problem, Limits::none());
        let oracle = brute_force(&m, lambda).unwrap();
        prop_assert_eq!(sol.status, Status::Optimal);
        let check = evaluate(&problem, &sol.p_hat, &sol.tr).unwrap();
        prop_assert!(check.feasible, "{:?}", check.violations);
        prop_assert!((sol.objective - oracle.objective).abs() < 1e-9);
        prop_assert_eq!(&sol.p_hat, &oracle.p_hat);
        prop_assert_eq!(&sol.tr, &oracle.tr);
    }

    #[test]
    fn generated_paths_are_admissible_and_complete(seed in any::<u64>(), d in 6.0f64..14.0, l in 15.0f64..40.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plain = Plain::random(&mut rng, 5);
        let net = plain.network();
        let cfg = SearchConfig::new(50, d, l);
        let cond = cfg.path_conditions();
        let found = generate_candidates(&net, &cfg).unwrap();
        for p in &found.paths {
            prop_assert!(validate_path(p, &net, &cond).unwrap().is_valid(), "{}", p);
        }
        // With a generous N every admissible path comes out, each once.
        for (c, kind) in plain.kinds.iter().enumerate() {
            if *kind != "customer" {
                continue;
            }
            let want: BTreeSet<Vec<String>> = plain.all_paths(c, d, l).into_iter().map(|(ids, _)| ids).collect();
            let got: Vec<Vec<String>> = found
                .paths
                .iter()
                .filter(|p| p.customer().as_str() == plain.ids[c])
                .map(|p| p.elements.iter().map(|e| e.to_string()).collect())
                .collect();
            prop_assert_eq!(got.len(), got.iter().collect::<BTreeSet<_>>().len());
            prop_assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
        }
    }

    #[test]
    fn diagnostics_partition_customers_and_elements(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plain = Plain::random(&mut rng, 6);
        let net = plain.network();
        let cfg = SearchConfig::new(4, 10.0, 35.0);
        let found = generate_candidates(&net, &cfg).unwrap();
        let m = feederpath::matrices::PathMatrices::build(found.paths, &net).unwrap();
        let problem = build_problem(&m, auto_lambda(&m)).unwrap();
        let sol = solve(&problem, Limits::none());
        let report = diagnose(&sol, &m, &net, 3);

        let covered: BTreeSet<String> = sol.selected().map(|k| m.paths()[k].customer().to_string()).collect();
        let flagged = id_set(report.subjects(IssueKind::CustomerWithoutPath));
        let customers = id_set(net.customers().into_iter().map(|e| &e.id));
        prop_assert!(covered.is_disjoint(&flagged));
        prop_assert_eq!(covered.union(&flagged).cloned().collect::<BTreeSet<_>>(), customers);

        let assigned: BTreeSet<String> = (0..m.remaining().len())
            .filter(|&r| sol.tr.terminal_of(r).is_some())
            .map(|r| m.remaining()[r].to_string())
            .collect();
        let unassigned = id_set(report.subjects(IssueKind::ElementUnassigned));
        let remaining = id_set(net.remaining().into_iter().map(|e| &e.id));
        prop_assert!(assigned.is_disjoint(&unassigned));
        prop_assert_eq!(assigned.union(&unassigned).cloned().collect::<BTreeSet<_>>(), remaining);
    }

    #[test]
    fn lp_and_mps_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrices(&mut rng, 12, 4, 6, 5);
        let problem = build_problem(&m, auto_lambda(&m)).unwrap();
        let expected = ParsedModel::expected(&problem);
        prop_assert_eq!(parse_lp(&write_lp(&problem)).unwrap(), expected.clone());
        prop_assert_eq!(parse_mps(&write_mps(&problem)).unwrap(), expected);
    }
}
