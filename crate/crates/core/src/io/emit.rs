//! Result files: solution JSON, coloured GeoJSON, SVG and diagnostics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::load::Projection;
use crate::matrices::PathMatrices;
use crate::network::{Element, ElementId, ElementType, Network, Point};
use crate::solver::{Solution, Status};

/// Twenty-colour cycle; feeder `k` (in terminal id order) gets `PALETTE[k % 20]`.
pub const PALETTE: [&str; 20] = [
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f", "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
];
pub const UNASSIGNED_COLOR: &str = "#000000";
pub const UNASSIGNED: &str = "unassigned";

/// Feeder terminal (column index) of every element the solution explains:
/// covered customers, assigned intermediate elements and the terminals of
/// selected paths.
pub fn feeder_of(m: &PathMatrices, sol: &Solution) -> BTreeMap<ElementId, usize> {
    let mut out = BTreeMap::new();
    for (h, row) in m.rows().iter().enumerate() {
        if sol.p_hat.get(h).copied().unwrap_or(false) {
            out.insert(m.customers()[row.customer].clone(), row.terminal);
            out.insert(m.terminals()[row.terminal].clone(), row.terminal);
        }
    }
    for (r, id) in m.remaining().iter().enumerate() {
        if let Some(t) = sol.tr.terminal_of(r) {
            out.insert(id.clone(), t);
        }
    }
    out
}

pub fn color_of(terminal: Option<usize>) -> &'static str {
    terminal.map_or(UNASSIGNED_COLOR, |t| PALETTE[t % PALETTE.len()])
}

#[derive(Serialize)]
struct PathRecord<'a> {
    customer: &'a ElementId,
    terminal: &'a ElementId,
    elements: &'a [ElementId],
    length: f64,
}

#[derive(Serialize)]
struct Assignment<'a> {
    element: &'a ElementId,
    terminal: &'a ElementId,
}

#[derive(Serialize)]
struct SolutionDoc<'a> {
    status: Status,
    objective: f64,
    lambda: f64,
    nodes: u64,
    paths: Vec<PathRecord<'a>>,
    assignments: Vec<Assignment<'a>>,
    uncovered: Vec<&'a ElementId>,
}

/// Selected paths, assignments and objective. Contains no timing, so equal
/// inputs give identical bytes.
pub fn solution_json(m: &PathMatrices, sol: &Solution, lambda: f64) -> String {
    let mut covered = vec![false; m.customers().len()];
    let paths = sol
        .selected()
        .map(|h| {
            let p = &m.paths()[h];
            covered[m.rows()[h].customer] = true;
            PathRecord {
                customer: p.customer(),
                terminal: p.terminal(),
                elements: &p.elements,
                length: p.length,
            }
        })
        .collect();
    let assignments = m
        .remaining()
        .iter()
        .enumerate()
        .filter_map(|(r, id)| {
            sol.tr.terminal_of(r).map(|t| Assignment {
                element: id,
                terminal: &m.terminals()[t],
            })
        })
        .collect();
    let doc = SolutionDoc {
        status: sol.status,
        objective: sol.objective,
        lambda,
        nodes: sol.stats.nodes,
        paths,
        assignments,
        uncovered: m
            .customers()
            .iter()
            .zip(&covered)
            .filter(|(_, c)| !**c)
            .map(|(id, _)| id)
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("solution serializes");
    s.push('\n');
    s
}

fn position(p: Point, projection: Option<&Projection>) -> Value {
    match projection {
        Some(proj) => {
            let (lon, lat) = proj.inverse(p);
            json!([lon, lat])
        }
        None => json!([p.x, p.y]),
    }
}

fn geometry(e: &Element, projection: Option<&Projection>) -> Value {
    match e.endpoints {
        Some([a, b]) => {
            json!({"type": "LineString", "coordinates": [position(a, projection), position(b, projection)]})
        }
        None => json!({"type": "Point", "coordinates": position(e.coor, projection)}),
    }
}

/// The network as GeoJSON with `feeder_id` and `color` on every feature and
/// `uncovered` on customers. Passing no solution colours everything black.
pub fn geojson(net: &Network, solved: Option<(&PathMatrices, &Solution)>, projection: Option<&Projection>) -> String {
    let feeders = solved.map(|(m, s)| feeder_of(m, s)).unwrap_or_default();
    let terminals: &[ElementId] = solved.map_or(&[], |(m, _)| m.terminals());
    let mut by_transformer: BTreeMap<&ElementId, Vec<&ElementId>> = BTreeMap::new();
    for (j, t) in net.junction_to_transformer() {
        by_transformer.entry(t).or_default().push(j);
    }
    let features: Vec<Value> = net
        .elements()
        .iter()
        .map(|e| {
            let mut props = Map::new();
            props.insert("id".into(), json!(e.id));
            props.insert("type".into(), json!(e.kind.label()));
            match e.kind {
                ElementType::Customer => {
                    if let Some(j) = &e.junction {
                        props.insert("junction".into(), json!(j));
                    }
                }
                ElementType::Transformer => {
                    if let Some(js) = by_transformer.get(&e.id) {
                        props.insert("junction".into(), json!(js));
                    }
                }
                _ => {}
            }
            let feeder = feeders.get(&e.id).copied();
            props.insert(
                "feeder_id".into(),
                feeder.map_or(json!(UNASSIGNED), |t| json!(terminals[t])),
            );
            props.insert("color".into(), json!(color_of(feeder)));
            if e.kind == ElementType::Customer {
                props.insert("uncovered".into(), json!(feeder.is_none()));
            }
            json!({"type": "Feature", "geometry": geometry(e, projection), "properties": props})
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!({"type": "FeatureCollection", "features": features}))
        .expect("geojson serializes");
    s.push('\n');
    s
}

fn anchors(e: &Element) -> Vec<Point> {
    match e.endpoints {
        Some([a, b]) => vec![a, b],
        None => vec![e.coor],
    }
}

fn closest_pair(a: &Element, b: &Element) -> (Point, Point) {
    let mut best = (a.coor, b.coor, f64::INFINITY);
    for p in anchors(a) {
        for q in anchors(b) {
            let d = p.distance(&q);
            if d < best.2 {
                best = (p, q, d);
            }
        }
    }
    (best.0, best.1)
}

/// Plain SVG map: feeder colours, dashed hops along selected paths, black
/// crossed squares for uncovered customers.
pub fn svg(net: &Network, m: &PathMatrices, sol: &Solution) -> String {
    const WIDTH: f64 = 800.0;
    const MARGIN: f64 = 20.0;
    let pts: Vec<Point> = net.elements().iter().flat_map(anchors).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if let Some(first) = pts.first() {
        (x0, y0, x1, y1) = (first.x, first.y, first.x, first.y);
        for p in &pts {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let k = (WIDTH - 2.0 * MARGIN) / span;
    let height = ((y1 - y0) * k + 2.0 * MARGIN).ceil();
    let tx = |p: Point| (MARGIN + (p.x - x0) * k, height - MARGIN - (p.y - y0) * k);

    let feeders = feeder_of(m, sol);
    let color = |id: &ElementId| color_of(feeders.get(id).copied());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    out.push_str("<g id=\"connections\" stroke-width=\"1.2\" stroke-dasharray=\"4 3\" fill=\"none\">\n");
    for h in sol.selected() {
        let path = &m.paths()[h];
        let c = color(path.terminal());
        for pair in path.elements.windows(2) {
            let (Some(a), Some(b)) = (net.get(&pair[0]), net.get(&pair[1])) else {
                continue;
            };
            let (p, q) = closest_pair(a, b);
            let ((ax, ay), (bx, by)) = (tx(p), tx(q));
            let _ = writeln!(
                out,
                r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{c}"/>"#
            );
        }
    }
    out.push_str("</g>\n<g id=\"elements\">\n");
    for e in net.elements() {
        let c = color(&e.id);
        let title = format!(
            "<title>{} ({})</title>",
            xml_escape(e.id.as_str()),
            xml_escape(e.kind.label())
        );
        if let Some([a, b]) = e.endpoints {
            let ((ax, ay), (bx, by)) = (tx(a), tx(b));
            let _ = writeln!(
                out,
                r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{c}" stroke-width="2.5">{title}</line>"#
            );
            continue;
        }
        let (x, y) = tx(e.coor);
        let _ = match e.kind {
            ElementType::Customer if !feeders.contains_key(&e.id) => writeln!(
                out,
                r#"<g>{title}<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{UNASSIGNED_COLOR}"/><path d="M{:.2} {:.2}l10 10m0 -10l-10 10" stroke="white" stroke-width="1.5"/></g>"#,
                x - 5.0,
                y - 5.0,
                x - 5.0,
                y - 5.0
            ),
            ElementType::Customer => {
                writeln!(
                    out,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="4.5" fill="{c}" stroke="black" stroke-width="0.5">{title}</circle>"#
                )
            }
            ElementType::Junction => writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="9" height="9" fill="{c}" stroke="black">{title}</rect>"#,
                x - 4.5,
                y - 4.5
            ),
            ElementType::Transformer => writeln!(
                out,
                r#"<path d="M{x:.2} {:.2}l6 10h-12z" fill="{UNASSIGNED_COLOR}">{title}</path>"#,
                y - 6.0
            ),
            _ => writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{c}">{title}</circle>"#
            ),
        };
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palette_is_distinct() {
        let mut p = PALETTE.to_vec();
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 20);
        assert!(!PALETTE.contains(&UNASSIGNED_COLOR));
        assert_eq!(color_of(Some(21)), PALETTE[1]);
    }

    #[test]
    fn escapes_titles() {
        assert_eq!(xml_escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }
}
