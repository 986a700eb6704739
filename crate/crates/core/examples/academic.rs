//! The 18-element academic network end to end: candidate paths, the exact
//! selection, and what the data cannot explain.
//!
//!     cargo run --example academic

use std::fmt::Write as _;

use feederpath::fixtures::{academic_network, academic_search};
use feederpath::io::{solve_network, Params};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let result = solve_network(academic_network(), &Params::new(academic_search()))?;
    let mut out = String::new();

    writeln!(out, "candidate paths")?;
    for (h, p) in result.matrices.paths().iter().enumerate() {
        let mark = if result.solution.p_hat[h] { "*" } else { " " };
        writeln!(out, " {mark} h{:<2} {p}", h + 1)?;
    }
    writeln!(
        out,
        "lambda = {}, objective = {} ({:?}, {} nodes)",
        result.problem.lambda, result.solution.objective, result.solution.status, result.solution.stats.nodes
    )?;
    writeln!(out, "assignments")?;
    for (r, id) in result.matrices.remaining().iter().enumerate() {
        let t = result
            .solution
            .tr
            .terminal_of(r)
            .map_or("-".to_string(), |t| result.matrices.terminals()[t].to_string());
        writeln!(out, "   {id} -> {t}")?;
    }
    writeln!(out, "issues")?;
    for issue in &result.report.issues {
        writeln!(out, "   {} {}: {}", issue.kind, issue.subject, issue.detail)?;
        if let Some(s) = &issue.suggestion {
            writeln!(out, "      suggestion: {s}")?;
        }
    }
    writeln!(out, "exit status {}", result.exit_code())?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
