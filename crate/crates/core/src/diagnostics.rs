//! Post-solve checks: which customers and elements the chosen paths do not
//! explain, with a hint for where an uncovered customer probably belongs.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::matrices::PathMatrices;
use crate::network::{ElementId, Network};
use crate::search::GenerationFailure;
use crate::solver::Solution;

/// Neighbours consulted for a junction suggestion.
pub const DEFAULT_NEIGHBORS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    CustomerWithoutPath,
    ElementUnassigned,
    MissingJunctionLabel,
    GenerationFailure,
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IssueKind::CustomerWithoutPath => "customer-without-path",
            IssueKind::ElementUnassigned => "element-unassigned",
            IssueKind::MissingJunctionLabel => "missing-junction-label",
            IssueKind::GenerationFailure => "generation-failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub subject: ElementId,
    pub detail: String,
    pub suggestion: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiagnosticReport {
    pub issues: Vec<Issue>,
}

impl DiagnosticReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn of_kind(&self, kind: IssueKind) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(move |i| i.kind == kind)
    }

    /// Subjects of all issues of one kind, in report order.
    pub fn subjects(&self, kind: IssueKind) -> Vec<&ElementId> {
        self.of_kind(kind).map(|i| &i.subject).collect()
    }

    /// Folds search failures into the report.
    pub fn add_generation_failures(&mut self, failures: &[GenerationFailure]) {
        for f in failures {
            let kind = if f.error.is_label_problem() {
                IssueKind::MissingJunctionLabel
            } else {
                IssueKind::GenerationFailure
            };
            self.issues.push(Issue {
                kind,
                subject: f.customer.clone(),
                detail: f.error.to_string(),
                suggestion: None,
            });
        }
        self.sort();
    }

    fn sort(&mut self) {
        self.issues
            .sort_by(|a, b| (a.kind, &a.subject).cmp(&(b.kind, &b.subject)));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Lists uncovered customers and unused intermediate elements.
pub fn diagnose(sol: &Solution, m: &PathMatrices, net: &Network, k: usize) -> DiagnosticReport {
    let rows = m.rows();
    let mut covered_by: Vec<Option<usize>> = vec![None; m.customers().len()];
    let mut used = vec![false; m.remaining().len()];
    let mut candidates = vec![0usize; m.customers().len()];
    for (h, row) in rows.iter().enumerate() {
        candidates[row.customer] += 1;
        if sol.p_hat.get(h).copied().unwrap_or(false) {
            covered_by[row.customer] = Some(row.terminal);
            for &r in &row.interior {
                used[r] = true;
            }
        }
    }

    let covered: Vec<(&ElementId, &ElementId)> = m
        .customers()
        .iter()
        .zip(&covered_by)
        .filter_map(|(c, t)| t.map(|t| (c, &m.terminals()[t])))
        .collect();

    let mut report = DiagnosticReport::default();
    for (c, id) in m.customers().iter().enumerate() {
        if covered_by[c].is_some() {
            continue;
        }
        let detail = match candidates[c] {
            0 => "no candidate path was found".to_string(),
            n => format!("none of its {n} candidate paths fits the selected solution"),
        };
        report.issues.push(Issue {
            kind: IssueKind::CustomerWithoutPath,
            subject: id.clone(),
            detail,
            suggestion: suggest_junction(id, &covered, net, k),
        });
    }
    for (r, id) in m.remaining().iter().enumerate() {
        if !used[r] {
            report.issues.push(Issue {
                kind: IssueKind::ElementUnassigned,
                subject: id.clone(),
                detail: "not used by any selected path, so it is not assigned to a feeder terminal junction".into(),
                suggestion: None,
            });
        }
    }
    report.sort();
    report
}

/// Majority junction among the `k` nearest covered customers; ties go to
/// the junction of the nearest tied neighbour.
fn suggest_junction(
    customer: &ElementId,
    covered: &[(&ElementId, &ElementId)],
    net: &Network,
    k: usize,
) -> Option<String> {
    let here = net.get(customer)?.coor;
    let mut near: Vec<(f64, &ElementId, &ElementId)> = covered
        .iter()
        .filter_map(|&(c, t)| net.get(c).map(|e| (e.coor.distance(&here), c, t)))
        .collect();
    near.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    near.truncate(k);
    if near.is_empty() {
        return None;
    }
    let mut votes: BTreeMap<&ElementId, usize> = BTreeMap::new();
    for (_, _, t) in &near {
        *votes.entry(t).or_default() += 1;
    }
    let top = *votes.values().max()?;
    let (_, _, junction) = near.iter().find(|(_, _, t)| votes[t] == top)?;
    let current = net.get(customer).and_then(|e| e.junction.as_ref());
    let note = match current {
        Some(j) if j == *junction => "matches its current label".to_string(),
        Some(j) => format!("currently labelled {j}"),
        None => "currently unlabelled".to_string(),
    };
    Some(format!(
        "junction {junction} ({top} of {} nearest covered customers; {note})",
        near.len()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::build_problem;
    use crate::network::Element;
    use crate::path::Path;
    use crate::solver::{solve, Limits};

    #[test]
    fn suggestion_follows_nearest_majority() {
        let els = vec![
            Element::customer("a", 0.0, 0.0, "j1"),
            Element::customer("b", 1.0, 0.0, "j2"),
            Element::customer("c", 2.0, 0.0, "j2"),
            Element::customer("d", 50.0, 0.0, "j1"),
            Element::point("j1", crate::network::ElementType::Junction, 0.0, 10.0),
            Element::point("j2", crate::network::ElementType::Junction, 0.0, -10.0),
        ];
        let net = Network::new(els, Default::default()).unwrap();
        let (b, c, d) = (ElementId::from("b"), ElementId::from("c"), ElementId::from("d"));
        let (j1, j2) = (ElementId::from("j1"), ElementId::from("j2"));
        let covered = [(&b, &j2), (&c, &j2), (&d, &j1)];
        let s = suggest_junction(&"a".into(), &covered, &net, 3).unwrap();
        assert!(s.starts_with("junction j2 (2 of 3"), "{s}");
        let s = suggest_junction(&"a".into(), &covered, &net, 1).unwrap();
        assert!(s.starts_with("junction j2 (1 of 1"), "{s}");
        assert_eq!(suggest_junction(&"a".into(), &[], &net, 3), None);
    }

    #[test]
    fn fully_covered_is_clean() {
        let els = vec![
            Element::customer("c", 0.0, 0.0, "j"),
            Element::point("l", crate::network::ElementType::Line, 1.0, 0.0),
            Element::point("j", crate::network::ElementType::Junction, 2.0, 0.0),
        ];
        let net = Network::new(els, Default::default()).unwrap();
        let m = PathMatrices::build(vec![Path::from_ids(["c", "l", "j"], 2.0)], &net).unwrap();
        let sol = solve(&build_problem(&m, 0.1).unwrap(), Limits::none());
        let report = diagnose(&sol, &m, &net, DEFAULT_NEIGHBORS);
        assert!(report.is_empty());
        assert_eq!(report.to_json(), "{\n  \"issues\": []\n}\n");
    }
}
