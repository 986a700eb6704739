//! LP and fixed-column MPS writers, plus small readers used to check that an
//! export re-imports to the same model.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::ilp::{Comparator, IlpProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Lp,
    Mps,
}

impl ModelFormat {
    /// Picks the format from a file extension (`.mps`, anything else is LP).
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("mps") => ModelFormat::Mps,
            _ => ModelFormat::Lp,
        }
    }
}

pub fn export_model(problem: &IlpProblem, format: ModelFormat) -> String {
    match format {
        ModelFormat::Lp => write_lp(problem),
        ModelFormat::Mps => write_mps(problem),
    }
}

/// Makes ids safe for LP/MPS: anything outside `[A-Za-z0-9_.]` becomes `_`,
/// and clashes get a numeric suffix.
fn safe_names(names: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .into_iter()
        .map(|n| {
            let base: String = n
                .chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                        c
                    } else {
                        '_'
                    }
                })
                .collect();
            let mut name = base.clone();
            let mut k = 1;
            while !seen.insert(name.clone()) {
                k += 1;
                name = format!("{base}.{k}");
            }
            name
        })
        .collect()
}

fn exported_rows(problem: &IlpProblem) -> impl Iterator<Item = &crate::ilp::Constraint> {
    problem.constraints.iter().filter(|c| !c.trivial)
}

fn row_names(problem: &IlpProblem) -> Vec<String> {
    safe_names(exported_rows(problem).map(|c| c.name.clone()))
}

fn push_term(line: &mut String, coef: f64, var: &str, first: bool) {
    let sign = if coef < 0.0 { "-" } else { "+" };
    let mag = coef.abs();
    match (first, sign) {
        (true, "+") => {}
        (true, _) => line.push_str("- "),
        (false, s) => {
            line.push_str(s);
            line.push(' ');
        }
    }
    if mag != 1.0 {
        let _ = write!(line, "{mag} ");
    }
    line.push_str(var);
}

const TERMS_PER_LINE: usize = 6;

fn write_expr(out: &mut String, label: &str, terms: &[(f64, &str)]) {
    let _ = write!(out, " {label}:");
    if terms.is_empty() {
        out.push_str(" 0");
    }
    for (i, (coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let mut t = String::new();
        push_term(&mut t, *coef, var, i == 0);
        out.push(' ');
        out.push_str(&t);
    }
}

/// CPLEX-style LP text. Coefficients use the shortest decimal that reads back
/// to the same `f64`. Rows without terms are left out.
pub fn write_lp(problem: &IlpProblem) -> String {
    let vars = safe_names(problem.var_names.iter().cloned());
    let rows = row_names(problem);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ feeder path selection: {} paths, {} assignment variables, lambda = {}",
        problem.num_path_vars, problem.num_assoc_vars, problem.lambda
    );
    out.push_str("maximize\n");
    let obj: Vec<(f64, &str)> = problem
        .objective
        .iter()
        .zip(&vars)
        .filter(|(c, _)| **c != 0.0)
        .map(|(c, v)| (*c, v.as_str()))
        .collect();
    write_expr(&mut out, "obj", &obj);
    out.push_str("\nsubject to\n");
    for (c, name) in exported_rows(problem).zip(&rows) {
        let terms: Vec<(f64, &str)> = c.terms.iter().map(|&(v, a)| (a as f64, vars[v].as_str())).collect();
        write_expr(&mut out, name, &terms);
        let _ = writeln!(out, " {} {}", c.cmp.symbol(), c.rhs);
    }
    if !vars.is_empty() {
        out.push_str("binary\n");
        for v in &vars {
            let _ = writeln!(out, " {v}");
        }
    }
    out.push_str("end\n");
    out
}

/// Fixed-column MPS. Fields start at columns 2, 5, 15, 25, 40 and 50; they
/// shift right only when a name is longer than eight characters.
pub fn write_mps(problem: &IlpProblem) -> String {
    let vars = safe_names(problem.var_names.iter().cloned());
    let rows = row_names(problem);
    let width = vars.iter().chain(&rows).map(String::len).max().unwrap_or(0).max(8);
    let mut out = String::new();
    out.push_str("NAME          FEEDERPATH\nOBJSENSE\n    MAX\nROWS\n N  OBJ\n");
    for (c, name) in exported_rows(problem).zip(&rows) {
        let kind = match c.cmp {
            Comparator::Le => 'L',
            Comparator::Ge => 'G',
        };
        let _ = writeln!(out, " {kind}  {name}");
    }
    // Column-major entries.
    let mut by_var: Vec<Vec<(&str, f64)>> = vec![Vec::new(); vars.len()];
    for (v, &c) in problem.objective.iter().enumerate() {
        if c != 0.0 {
            by_var[v].push(("OBJ", c));
        }
    }
    for (c, name) in exported_rows(problem).zip(&rows) {
        for &(v, a) in &c.terms {
            by_var[v].push((name.as_str(), a as f64));
        }
    }
    out.push_str("COLUMNS\n");
    for (v, entries) in by_var.iter().enumerate() {
        let entries: Vec<(&str, f64)> = if entries.is_empty() {
            vec![("OBJ", 0.0)]
        } else {
            entries.clone()
        };
        for pair in entries.chunks(2) {
            let mut line = format!(
                "    {:<width$}  {:<width$}  {:>12}",
                vars[v],
                pair[0].0,
                pair[0].1.to_string()
            );
            if let Some((row, val)) = pair.get(1) {
                let _ = write!(line, "   {:<width$}  {:>12}", row, val.to_string());
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
    out.push_str("RHS\n");
    for (c, name) in exported_rows(problem).zip(&rows) {
        if c.rhs != 0 {
            let _ = writeln!(out, "    {:<width$}  {:<width$}  {:>12}", "RHS", name, c.rhs);
        }
    }
    out.push_str("BOUNDS\n");
    for v in &vars {
        let _ = writeln!(out, " BV {:<width$}  {v}", "BND");
    }
    out.push_str("ENDATA\n");
    out
}

/// A linear model as read back from LP or MPS text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedModel {
    pub maximize: bool,
    pub objective: BTreeMap<String, f64>,
    pub rows: BTreeMap<String, ParsedRow>,
    pub binaries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedRow {
    pub terms: BTreeMap<String, f64>,
    pub sense: String,
    pub rhs: f64,
}

impl ParsedModel {
    /// The model an exporter is expected to produce for `problem`.
    pub fn expected(problem: &IlpProblem) -> Self {
        let vars = safe_names(problem.var_names.iter().cloned());
        let rows = row_names(problem);
        let objective = problem
            .objective
            .iter()
            .zip(&vars)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, v)| (v.clone(), *c))
            .collect();
        let rows = exported_rows(problem)
            .zip(rows)
            .map(|(c, name)| {
                let row = ParsedRow {
                    terms: c.terms.iter().map(|&(v, a)| (vars[v].clone(), a as f64)).collect(),
                    sense: c.cmp.symbol().to_string(),
                    rhs: c.rhs as f64,
                };
                (name, row)
            })
            .collect();
        ParsedModel {
            maximize: true,
            objective,
            rows,
            binaries: vars,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Reads the LP subset written by [`write_lp`].
pub fn parse_lp(text: &str) -> Result<ParsedModel, ParseError> {
    #[derive(PartialEq)]
    enum Section {
        Head,
        Objective,
        Rows,
        Binary,
        End,
    }
    let mut model = ParsedModel::default();
    let mut section = Section::Head;
    // Statement text plus the line it started on.
    let mut pending: Option<(usize, String)> = None;

    fn flush(model: &mut ParsedModel, objective: bool, stmt: (usize, String)) -> Result<(), ParseError> {
        let (line, s) = stmt;
        let (name, body) = s.split_once(':').ok_or_else(|| perr(line, "expected `name:`"))?;
        let name = name.trim().to_string();
        let mut tokens: Vec<&str> = body.split_whitespace().collect();
        let mut rhs = None;
        if !objective {
            let at = tokens
                .iter()
                .position(|t| matches!(*t, "<=" | ">=" | "="))
                .ok_or_else(|| perr(line, "row without comparison"))?;
            let sense = tokens[at].to_string();
            let value: f64 = tokens
                .get(at + 1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| perr(line, "bad right-hand side"))?;
            rhs = Some((sense, value));
            tokens.truncate(at);
        }
        let mut terms = BTreeMap::new();
        let mut sign = 1.0;
        let mut coef: Option<f64> = None;
        for t in tokens {
            match t {
                "+" => sign = 1.0,
                "-" => sign = -1.0,
                _ => {
                    if let Ok(v) = t.parse::<f64>() {
                        coef = Some(v);
                    } else {
                        *terms.entry(t.to_string()).or_insert(0.0) += sign * coef.unwrap_or(1.0);
                        sign = 1.0;
                        coef = None;
                    }
                }
            }
        }
        match rhs {
            None => model.objective = terms,
            Some((sense, rhs)) => {
                model.rows.insert(name, ParsedRow { terms, sense, rhs });
            }
        }
        Ok(())
    }

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let keyword = line.to_ascii_lowercase();
        let next = match keyword.as_str() {
            "maximize" | "maximise" | "max" => Some(Section::Objective),
            "minimize" | "minimise" | "min" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Rows),
            "binary" | "binaries" | "bin" => Some(Section::Binary),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = next {
            if let Some(stmt) = pending.take() {
                flush(&mut model, section == Section::Objective, stmt)?;
            }
            if next == Section::Objective {
                model.maximize = keyword.starts_with("max");
            }
            section = next;
            continue;
        }
        match section {
            Section::Objective | Section::Rows => {
                let starts_new = line.contains(':');
                if starts_new {
                    if let Some(stmt) = pending.take() {
                        flush(&mut model, section == Section::Objective, stmt)?;
                    }
                    pending = Some((n, line.to_string()));
                } else {
                    let (_, s) = pending
                        .as_mut()
                        .ok_or_else(|| perr(n, "continuation without statement"))?;
                    s.push(' ');
                    s.push_str(line);
                }
            }
            Section::Binary => model.binaries.extend(line.split_whitespace().map(String::from)),
            Section::Head | Section::End => return Err(perr(n, format!("unexpected `{line}`"))),
        }
    }
    if section != Section::End {
        return Err(perr(text.lines().count(), "missing `end`"));
    }
    Ok(model)
}

/// Reads the MPS subset written by [`write_mps`] (whitespace-separated fields).
pub fn parse_mps(text: &str) -> Result<ParsedModel, ParseError> {
    let mut model = ParsedModel::default();
    let mut section = String::new();
    let mut objective_row = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = fields[0].to_string();
            continue;
        }
        match section.as_str() {
            "OBJSENSE" => model.maximize = fields[0] == "MAX" || fields[0] == "MAXIMIZE",
            "ROWS" => {
                let [kind, name] = fields[..] else {
                    return Err(perr(n, "ROWS entry needs two fields"));
                };
                match kind {
                    "N" => objective_row = Some(name.to_string()),
                    "L" | "G" | "E" => {
                        let sense = match kind {
                            "L" => "<=",
                            "G" => ">=",
                            _ => "=",
                        };
                        model.rows.insert(
                            name.to_string(),
                            ParsedRow {
                                sense: sense.to_string(),
                                ..ParsedRow::default()
                            },
                        );
                    }
                    _ => return Err(perr(n, format!("unknown row type `{kind}`"))),
                }
            }
            "COLUMNS" | "RHS" => {
                if fields.len() != 3 && fields.len() != 5 {
                    return Err(perr(n, "expected 3 or 5 fields"));
                }
                for pair in fields[1..].chunks(2) {
                    let value: f64 = pair[1]
                        .parse()
                        .map_err(|_| perr(n, format!("bad number `{}`", pair[1])))?;
                    let row = pair[0];
                    if section == "RHS" {
                        let r = model
                            .rows
                            .get_mut(row)
                            .ok_or_else(|| perr(n, format!("unknown row `{row}`")))?;
                        r.rhs = value;
                    } else if Some(row) == objective_row.as_deref() {
                        if value != 0.0 {
                            model.objective.insert(fields[0].to_string(), value);
                        }
                    } else {
                        let r = model
                            .rows
                            .get_mut(row)
                            .ok_or_else(|| perr(n, format!("unknown row `{row}`")))?;
                        r.terms.insert(fields[0].to_string(), value);
                    }
                }
            }
            "BOUNDS" => match fields[..] {
                ["BV", _, var] => model.binaries.push(var.to_string()),
                _ => return Err(perr(n, "only BV bounds are supported")),
            },
            other => return Err(perr(n, format!("unexpected section `{other}`"))),
        }
    }
    if section != "ENDATA" {
        return Err(perr(text.lines().count(), "missing ENDATA"));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_sanitized_and_unique() {
        let names = safe_names(vec!["A_x-1".into(), "A_x_1".into(), "A_x 1".into()]);
        assert_eq!(names, vec!["A_x_1", "A_x_1.2", "A_x_1.3"]);
    }

    #[test]
    fn lp_terms() {
        let mut s = String::new();
        push_term(&mut s, -0.04, "A", true);
        assert_eq!(s, "- 0.04 A");
        let mut s = String::new();
        push_term(&mut s, 1.0, "P", false);
        assert_eq!(s, "+ P");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_lp("maximize\n obj: P\nsubject to\n r: P\nend\n").is_err());
        assert!(parse_mps("NAME x\nROWS\n Q  r\nENDATA\n").is_err());
    }
}
