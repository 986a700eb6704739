//! Writes the academic selection model as LP and MPS and reads both back.
//!
//!     cargo run --example model_export            # summary
//!     cargo run --example model_export -- lp      # the LP text
//!     cargo run --example model_export -- mps     # the MPS text

use std::fmt::Write as _;

use feederpath::fixtures::{academic_network, academic_search};
use feederpath::ilp::{auto_lambda, build_problem};
use feederpath::matrices::PathMatrices;
use feederpath::search::generate_candidates;
use feederpath::solver::export::{parse_lp, parse_mps, write_lp, write_mps, ParsedModel};

pub fn models() -> Result<(String, String, ParsedModel), Box<dyn std::error::Error>> {
    let net = academic_network();
    let candidates = generate_candidates(&net, &academic_search())?;
    let m = PathMatrices::build(candidates.paths, &net)?;
    let problem = build_problem(&m, auto_lambda(&m))?;
    Ok((write_lp(&problem), write_mps(&problem), ParsedModel::expected(&problem)))
}

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let (lp, mps, expected) = models()?;
    let from_lp = parse_lp(&lp)?;
    let from_mps = parse_mps(&mps)?;
    let mut out = String::new();
    writeln!(
        out,
        "{} binaries, {} rows, {} objective terms",
        expected.binaries.len(),
        expected.rows.len(),
        expected.objective.len()
    )?;
    writeln!(
        out,
        "LP: {} lines, re-import identical: {}",
        lp.lines().count(),
        from_lp == expected
    )?;
    writeln!(
        out,
        "MPS: {} lines, re-import identical: {}",
        mps.lines().count(),
        from_mps == expected
    )?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    match std::env::args().nth(1).as_deref() {
        Some("lp") => print!("{}", models()?.0),
        Some("mps") => print!("{}", models()?.1),
        _ => print!("{}", run_example()?),
    }
    Ok(())
}
