use std::collections::BTreeMap;
use std::fs;
use std::path::Path as FsPath;

use serde_json::Value;
use thiserror::Error;

use crate::network::{Element, ElementId, ElementType, LabelPolicy, Network, NetworkError, Point};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{locus}: {message}")]
    Record { locus: String, message: String },
    #[error("{0}")]
    Network(#[from] NetworkError),
}

fn record(locus: impl Into<String>, message: impl Into<String>) -> LoadError {
    LoadError::Record {
        locus: locus.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LoadOptions {
    pub policy: LabelPolicy,
    /// Coordinates are longitude/latitude degrees; project them to metres.
    pub lonlat: bool,
}

/// Equirectangular projection about a reference point, in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub lon0: f64,
    pub lat0: f64,
}

const EARTH_RADIUS_M: f64 = 6_371_008.8;

impl Projection {
    fn scale(&self) -> (f64, f64) {
        let k = EARTH_RADIUS_M * std::f64::consts::PI / 180.0;
        (k * self.lat0.to_radians().cos(), k)
    }

    pub fn forward(&self, lon: f64, lat: f64) -> Point {
        let (kx, ky) = self.scale();
        Point::new((lon - self.lon0) * kx, (lat - self.lat0) * ky)
    }

    pub fn inverse(&self, p: Point) -> (f64, f64) {
        let (kx, ky) = self.scale();
        (self.lon0 + p.x / kx, self.lat0 + p.y / ky)
    }
}

/// A loaded network plus the projection applied to its coordinates, if any.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub network: Network,
    pub projection: Option<Projection>,
}

/// One element as read from a file, before geometry is finalized.
struct Raw {
    locus: String,
    id: String,
    kind: ElementType,
    points: Vec<(f64, f64)>,
    junctions: Vec<String>,
}

fn parse_kind(label: &str, locus: &str) -> Result<ElementType, LoadError> {
    let kind = ElementType::parse(label);
    if kind.is_canonical() {
        Ok(kind)
    } else {
        Err(record(locus, format!("unknown type label `{label}`")))
    }
}

fn finish(raws: Vec<Raw>, opts: &LoadOptions) -> Result<Loaded, LoadError> {
    let projection = if opts.lonlat {
        let all: Vec<&(f64, f64)> = raws.iter().flat_map(|r| &r.points).collect();
        let n = all.len().max(1) as f64;
        Some(Projection {
            lon0: all.iter().map(|p| p.0).sum::<f64>() / n,
            lat0: all.iter().map(|p| p.1).sum::<f64>() / n,
        })
    } else {
        None
    };
    let mut seen = BTreeMap::new();
    let mut elements = Vec::with_capacity(raws.len());
    let mut j2t = BTreeMap::new();
    for raw in raws {
        if let Some(first) = seen.insert(raw.id.clone(), raw.locus.clone()) {
            return Err(record(
                raw.locus,
                format!("duplicate id `{}` (first seen at {first})", raw.id),
            ));
        }
        let pts: Vec<Point> = raw
            .points
            .iter()
            .map(|&(x, y)| match projection {
                Some(p) => p.forward(x, y),
                None => Point::new(x, y),
            })
            .collect();
        if pts.iter().any(|p| !p.is_finite()) {
            return Err(record(&raw.locus, format!("non-finite coordinate for `{}`", raw.id)));
        }
        let mut e = match pts[..] {
            [p] => Element::point(raw.id.as_str(), raw.kind.clone(), p.x, p.y),
            [a, .., b] => {
                let mut e = Element::segment(raw.id.as_str(), a, b);
                e.kind = raw.kind.clone();
                e
            }
            [] => return Err(record(&raw.locus, "no coordinates")),
        };
        match raw.kind {
            ElementType::Customer => match &raw.junctions[..] {
                [] => {
                    if opts.policy == LabelPolicy::Strict {
                        return Err(record(
                            &raw.locus,
                            format!("customer `{}` has no junction label", raw.id),
                        ));
                    }
                }
                [j] => e.junction = Some(ElementId::new(j.clone())),
                _ => {
                    return Err(record(
                        &raw.locus,
                        format!("customer `{}` has several junction labels", raw.id),
                    ))
                }
            },
            ElementType::Transformer => {
                for j in &raw.junctions {
                    j2t.insert(ElementId::new(j.clone()), ElementId::new(raw.id.clone()));
                }
            }
            _ => {}
        }
        elements.push(e);
    }
    let network = Network::with_policy(elements, j2t, opts.policy)?;
    Ok(Loaded { network, projection })
}

fn junction_list(v: Option<&Value>, locus: &str) -> Result<Vec<String>, LoadError> {
    match v {
        None | Some(Value::Null) => Ok(vec![]),
        Some(Value::String(s)) if s.trim().is_empty() => Ok(vec![]),
        Some(Value::String(s)) => Ok(s
            .split(';')
            .map(|j| j.trim().to_string())
            .filter(|j| !j.is_empty())
            .collect()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|i| match i {
                Value::String(s) => Ok(s.clone()),
                _ => Err(record(locus, "`junction` entries must be strings")),
            })
            .collect(),
        Some(_) => Err(record(locus, "`junction` must be a string or an array of strings")),
    }
}

fn coordinate(v: &Value, locus: &str) -> Result<(f64, f64), LoadError> {
    match v.as_array().map(|a| &a[..]) {
        Some([x, y, ..]) => match (x.as_f64(), y.as_f64()) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(record(locus, "coordinates must be numbers")),
        },
        _ => Err(record(locus, "a position needs two numbers")),
    }
}

/// Parses a GeoJSON FeatureCollection of Point / LineString features with
/// `id`, `type` and optional `junction` properties.
pub fn parse_geojson(text: &str, opts: &LoadOptions) -> Result<Loaded, LoadError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| record(format!("line {}", e.line()), e.to_string()))?;
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(record("document", "expected a FeatureCollection"));
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| record("document", "missing `features` array"))?;
    let mut raws = Vec::with_capacity(features.len());
    for (i, f) in features.iter().enumerate() {
        let mut locus = format!("feature {i}");
        let props = f.get("properties").and_then(Value::as_object);
        let prop = |k: &str| props.and_then(|p| p.get(k));
        let id = match prop("id").or_else(|| f.get("id")) {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(record(locus, "missing `id` property")),
        };
        locus = format!("feature {i} (`{id}`)");
        let label = prop("type")
            .and_then(Value::as_str)
            .ok_or_else(|| record(&locus, "missing `type` property"))?;
        let kind = parse_kind(label, &locus)?;
        let geometry = f.get("geometry").ok_or_else(|| record(&locus, "missing geometry"))?;
        let coords = geometry
            .get("coordinates")
            .ok_or_else(|| record(&locus, "missing coordinates"))?;
        let points = match geometry.get("type").and_then(Value::as_str) {
            Some("Point") => vec![coordinate(coords, &locus)?],
            Some("LineString") => {
                let pts = coords
                    .as_array()
                    .ok_or_else(|| record(&locus, "LineString coordinates must be an array"))?
                    .iter()
                    .map(|c| coordinate(c, &locus))
                    .collect::<Result<Vec<_>, _>>()?;
                if pts.len() < 2 {
                    return Err(record(&locus, "a LineString needs at least two positions"));
                }
                pts
            }
            other => return Err(record(&locus, format!("unsupported geometry {other:?}"))),
        };
        let junctions = junction_list(prop("junction"), &locus)?;
        raws.push(Raw {
            locus,
            id,
            kind,
            points,
            junctions,
        });
    }
    finish(raws, opts)
}

/// Parses CSV with columns `id,type,x,y[,x2,y2][,junction]`. Transformers
/// list their junctions separated by `;`.
pub fn parse_csv(text: &str, opts: &LoadOptions) -> Result<Loaded, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| record("line 1", e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let need = |name: &str| col(name).ok_or_else(|| record("line 1", format!("missing column `{name}`")));
    let (ci, ct, cx, cy) = (need("id")?, need("type")?, need("x")?, need("y")?);
    let (cx2, cy2, cj) = (col("x2"), col("y2"), col("junction"));

    let mut raws = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            record(format!("line {line}"), e.to_string())
        })?;
        let locus = format!("line {}", rec.position().map_or(0, |p| p.line()));
        let field = |i: Option<usize>| i.and_then(|i| rec.get(i)).filter(|s| !s.is_empty());
        let num = |i: Option<usize>, name: &str| -> Result<Option<f64>, LoadError> {
            field(i)
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| record(&locus, format!("`{name}` is not a number: `{s}`")))
                })
                .transpose()
        };
        let id = field(Some(ci)).ok_or_else(|| record(&locus, "empty id"))?.to_string();
        let kind = parse_kind(field(Some(ct)).unwrap_or(""), &locus)?;
        let x = num(Some(cx), "x")?.ok_or_else(|| record(&locus, "missing x"))?;
        let y = num(Some(cy), "y")?.ok_or_else(|| record(&locus, "missing y"))?;
        let mut points = vec![(x, y)];
        match (num(cx2, "x2")?, num(cy2, "y2")?) {
            (Some(x2), Some(y2)) => points.push((x2, y2)),
            (None, None) => {}
            _ => return Err(record(&locus, "x2 and y2 must be given together")),
        }
        let junctions = field(cj)
            .map(|s| {
                s.split(';')
                    .map(|j| j.trim().to_string())
                    .filter(|j| !j.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        raws.push(Raw {
            locus,
            id,
            kind,
            points,
            junctions,
        });
    }
    finish(raws, opts)
}

/// Loads a `.csv` or GeoJSON (anything else) file.
pub fn load_network_with(path: &FsPath, opts: &LoadOptions) -> Result<Loaded, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        parse_csv(&text, opts)
    } else {
        parse_geojson(&text, opts)
    }
}

pub fn load_network(path: &FsPath) -> Result<Network, LoadError> {
    Ok(load_network_with(path, &LoadOptions::default())?.network)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR: &str = r#"{"type":"FeatureCollection","features":[
      {"type":"Feature","geometry":{"type":"Point","coordinates":[0,0]},"properties":{"id":"c1","type":"customer","junction":"j1"}},
      {"type":"Feature","geometry":{"type":"LineString","coordinates":[[1,0],[2,0],[3,0]]},"properties":{"id":"l1","type":"line"}},
      {"type":"Feature","geometry":{"type":"Point","coordinates":[4,0]},"properties":{"id":"j1","type":"junction"}},
      {"type":"Feature","geometry":{"type":"Point","coordinates":[5,0]},"properties":{"id":"t1","type":"transformer","junction":["j1"]}}
    ]}"#;

    #[test]
    fn four_features() {
        let net = parse_geojson(FOUR, &LoadOptions::default()).unwrap().network;
        assert_eq!(net.len(), 4);
        assert_eq!(net.customers().len(), 1);
        assert_eq!(net.remaining().len(), 1);
        assert_eq!(net.terminals().len(), 1);
        let line = net.get(&"l1".into()).unwrap();
        assert_eq!(line.endpoints, Some([Point::new(1.0, 0.0), Point::new(3.0, 0.0)]));
        assert_eq!(
            net.junction_to_transformer()[&ElementId::from("j1")],
            ElementId::from("t1")
        );
    }

    #[test]
    fn csv_duplicate_names_the_id() {
        let text = "id,type,x,y,junction\nc1,customer,0,0,j1\nj1,junction,1,0,\nc1,customer,2,0,j1\n";
        let err = parse_csv(text, &LoadOptions::default()).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("duplicate id `c1`"), "{err}");
    }

    #[test]
    fn loci_in_errors() {
        let err = parse_csv("id,type,x,y\na,pylon,0,0\n", &LoadOptions::default())
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2") && err.contains("pylon"), "{err}");
        let err = parse_csv("id,type,x,y\na,customer,0,0\n", &LoadOptions::default())
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2") && err.contains("no junction label"), "{err}");
        let err = parse_csv("id,type,x,y\na,line,NaN,0\n", &LoadOptions::default())
            .unwrap_err()
            .to_string();
        assert!(err.contains("non-finite"), "{err}");
        let bad = FOUR.replace("\"id\":\"l1\",\"type\":\"line\"", "\"id\":\"l1\"");
        let err = parse_geojson(&bad, &LoadOptions::default()).unwrap_err().to_string();
        assert!(err.starts_with("feature 1 (`l1`)"), "{err}");
    }

    #[test]
    fn lenient_keeps_unlabelled_customers() {
        let opts = LoadOptions {
            policy: LabelPolicy::Lenient,
            lonlat: false,
        };
        let net = parse_csv("id,type,x,y\na,customer,0,0\n", &opts).unwrap().network;
        assert_eq!(net.get(&"a".into()).unwrap().junction, None);
    }

    #[test]
    fn projection_round_trips() {
        let p = Projection {
            lon0: 4.35,
            lat0: 50.85,
        };
        let q = p.forward(4.36, 50.86);
        // ~0.01° of latitude is about 1.1 km.
        assert!((q.y - 1111.95).abs() < 0.1, "{q:?}");
        let (lon, lat) = p.inverse(q);
        assert!((lon - 4.36).abs() < 1e-12 && (lat - 50.86).abs() < 1e-12);
    }
}
