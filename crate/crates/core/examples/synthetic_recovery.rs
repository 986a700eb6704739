//! Builds a seeded radial network, checks that every customer gets its true
//! path back, then removes one trunk line and looks at who is reported.
//!
//!     cargo run --example synthetic_recovery -- [seed]

use std::fmt::Write as _;

use feederpath::diagnostics::IssueKind;
use feederpath::io::{solve_network, Params};
use feederpath::synthetic::{Radial, RadialSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example_with(seed: u64) -> Result<String, Box<dyn std::error::Error>> {
    let radial = Radial::generate(RadialSpec {
        feeders: 5,
        customers: 50,
        seed,
    });
    let params = Params::new(radial.search.clone());
    let mut out = String::new();

    let full = solve_network(radial.network.clone(), &params)?;
    let recovered = full
        .solution
        .selected()
        .filter(|&h| {
            let p = &full.matrices.paths()[h];
            radial.truth[p.customer()].elements == p.elements
        })
        .count();
    writeln!(
        out,
        "{} customers on {} feeders: {recovered} true paths recovered, exit status {}",
        radial.truth.len(),
        radial.trunks.len(),
        full.exit_code()
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (feeder, k, line) = radial.random_trunk_element(&mut rng);
    let cut = solve_network(radial.without(&line), &params)?;
    let flagged = cut.report.subjects(IssueKind::CustomerWithoutPath);
    let expected = radial.disconnected_by(feeder, k);
    writeln!(out, "without {line}: flagged {flagged:?}")?;
    writeln!(out, "disconnected by construction: {expected:?}")?;
    writeln!(out, "match: {}", flagged.into_iter().eq(expected.iter()))?;
    Ok(out)
}

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    run_example_with(11)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(11);
    print!("{}", run_example_with(seed)?);
    Ok(())
}
