//! The element-to-feeder validity rows worked out step by step on a
//! four-path network: one consistent terminal association and one that
//! splits a selected path across two feeders.
//!
//!     cargo run --example validity_check

use std::fmt::Write as _;

use feederpath::fixtures::{
    split_case_association_a, split_case_association_b, split_case_matrices, split_case_selection,
};
use feederpath::ilp::{build_problem, constraint1_intermediates, evaluate, Family};

fn grid(out: &mut String, label: &str, rows: &[Vec<i64>]) -> std::fmt::Result {
    writeln!(out, "  {label}")?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
        writeln!(out, "    [{}]", cells.join(" "))?;
    }
    Ok(())
}

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let m = split_case_matrices();
    let p_hat = split_case_selection();
    let problem = build_problem(&m, 0.1)?;
    let mut out = String::new();
    for (name, tr) in [("a", split_case_association_a(&m)), ("b", split_case_association_b(&m))] {
        let terms = constraint1_intermediates(&m, &p_hat, &tr)?;
        writeln!(
            out,
            "case ({name}): rows are terminals {:?}, columns paths h1..h4",
            m.terminals()
        )?;
        grid(
            &mut out,
            "left (selected element counts on the path's terminal)",
            &terms.lhs,
        )?;
        grid(
            &mut out,
            "right (elements of the path assigned to that terminal)",
            &terms.rhs,
        )?;
        let eval = evaluate(&problem, &p_hat, &tr)?;
        writeln!(out, "  feasible: {}", eval.feasible)?;
        for v in eval.violations.iter().filter(|v| v.family == Family::Validity) {
            let h = v.path().expect("validity rows name a path");
            let split: Vec<String> = m.rows()[h]
                .interior
                .iter()
                .map(|&r| {
                    let at = tr
                        .terminal_of(r)
                        .map_or("nowhere".into(), |t| m.terminals()[t].to_string());
                    format!("{} on {at}", m.remaining()[r])
                })
                .collect();
            writeln!(
                out,
                "  violated {} ({} > {}): h{} has {}",
                v.name,
                v.lhs,
                v.rhs,
                h + 1,
                split.join(", ")
            )?;
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
