//! Candidate generation for one customer, how the weight multiplier changes
//! what comes out, and how big the unrestricted path space would be.
//!
//!     cargo run --example candidate_search

use std::fmt::Write as _;

use feederpath::fixtures::{academic_network, academic_search};
use feederpath::path::{hypothetical_count, validate_path};
use feederpath::search::CandidateGenerator;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let net = academic_network();
    let mut out = String::new();

    // A looser length limit than the fixture's, so there is more to choose from.
    for alpha in [2.0, 1.05] {
        let mut cfg = academic_search().with_alpha(alpha);
        cfg.max_length = 45.0;
        let cond = cfg.path_conditions();
        let found = CandidateGenerator::new(&net, cfg)?.customer_paths(&"e2".into())?;
        writeln!(out, "alpha = {alpha}")?;
        for p in &found.paths {
            let verdict = validate_path(p, &net, &cond)?;
            writeln!(out, "  {p}  length {:.2}  valid {}", p.length, verdict.is_valid())?;
        }
    }

    let (c, r, t) = (net.customers().len(), net.remaining().len(), net.terminals().len());
    writeln!(
        out,
        "unrestricted hypothetical paths for |C|={c}, |R|={r}, |T|={t}: {}",
        hypothetical_count(c as u64, r as u64, t as u64)
    )?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
