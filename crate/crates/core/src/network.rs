//! Network elements and the three topological primitives every later stage
//! consumes: type subsets, element distance and direct connectability.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a network element.
///
/// Ordering is "natural": runs of ASCII digits compare numerically, so
/// `e2 < e10`. Every listing in this crate is sorted with this order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(String);

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl ElementId {
    pub fn new(id: impl Into<String>) -> Self {
        ElementId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        ElementId(s.to_string())
    }
}

impl From<String> for ElementId {
    fn from(s: String) -> Self {
        ElementId(s)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Ord for ElementId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for ElementId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let na = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let nb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (&a[..na], &b[..nb]);
                let ta = trim_zeros(da);
                let tb = trim_zeros(db);
                let ord = ta
                    .len()
                    .cmp(&tb.len())
                    .then_with(|| ta.cmp(tb))
                    .then_with(|| na.cmp(&nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[na..];
                b = &b[nb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits.iter().take_while(|&&c| c == b'0').count();
    &digits[start.min(digits.len().saturating_sub(1))..]
}

/// Element type label. The four canonical labels are fixed; operators can
/// carry their own labels through `Other`, which are treated as ordinary
/// intermediate elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementType {
    Customer,
    Line,
    Junction,
    Transformer,
    Other(String),
}

impl ElementType {
    pub fn parse(label: &str) -> Self {
        match label.trim().to_ascii_lowercase().as_str() {
            "customer" => ElementType::Customer,
            "line" => ElementType::Line,
            "junction" => ElementType::Junction,
            "transformer" => ElementType::Transformer,
            _ => ElementType::Other(label.trim().to_string()),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            ElementType::Customer => "customer",
            ElementType::Line => "line",
            ElementType::Junction => "junction",
            ElementType::Transformer => "transformer",
            ElementType::Other(s) => s,
        }
    }

    pub fn is_canonical(&self) -> bool {
        !matches!(self, ElementType::Other(_))
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Planar point in a projected, meter-based coordinate system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub id: ElementId,
    pub kind: ElementType,
    /// Representative point. For a line with endpoints this is their midpoint.
    pub coor: Point,
    /// Feeder terminal junction the customer is reported to be supplied from.
    pub junction: Option<ElementId>,
    /// Segment endpoints, only for line-like elements.
    pub endpoints: Option<[Point; 2]>,
}

impl Element {
    pub fn point(id: impl Into<ElementId>, kind: ElementType, x: f64, y: f64) -> Self {
        Element {
            id: id.into(),
            kind,
            coor: Point::new(x, y),
            junction: None,
            endpoints: None,
        }
    }

    pub fn customer(id: impl Into<ElementId>, x: f64, y: f64, junction: impl Into<ElementId>) -> Self {
        let mut e = Element::point(id, ElementType::Customer, x, y);
        e.junction = Some(junction.into());
        e
    }

    pub fn segment(id: impl Into<ElementId>, a: Point, b: Point) -> Self {
        Element {
            id: id.into(),
            kind: ElementType::Line,
            coor: a.midpoint(&b),
            junction: None,
            endpoints: Some([a, b]),
        }
    }

    fn anchor_points(&self) -> &[Point] {
        match &self.endpoints {
            Some(ends) => ends,
            None => std::slice::from_ref(&self.coor),
        }
    }

    fn is_finite(&self) -> bool {
        self.coor.is_finite() && self.endpoints.is_none_or(|[a, b]| a.is_finite() && b.is_finite())
    }
}

/// Euclidean distance between two elements.
///
/// Elements with segment endpoints are measured from their nearest endpoint;
/// everything else from its representative point.
pub fn dist(a: &Element, b: &Element) -> f64 {
    let mut best = f64::INFINITY;
    for p in a.anchor_points() {
        for q in b.anchor_points() {
            best = best.min(p.distance(q));
        }
    }
    best
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("duplicate element id `{0}`")]
    DuplicateId(ElementId),
    #[error("customer `{0}` has no junction label")]
    MissingJunction(ElementId),
    #[error("customer `{customer}` refers to `{junction}`, which is not a junction element")]
    UnknownJunction { customer: ElementId, junction: ElementId },
    #[error("element `{0}` has a non-finite coordinate")]
    NonFinite(ElementId),
    #[error("unknown element `{0}`")]
    UnknownElement(ElementId),
    #[error("junction `{junction}` is mapped to `{transformer}`, which is not a transformer element")]
    BadTransformer {
        junction: ElementId,
        transformer: ElementId,
    },
    #[error("invalid connection condition: {0}")]
    InvalidCondition(String),
}

/// How strictly customer junction labels are checked when a network is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelPolicy {
    /// Every customer must carry a label naming an existing junction.
    #[default]
    Strict,
    /// Missing or dangling labels are kept and surface later as diagnostics.
    Lenient,
}

/// Immutable element set with id-ordered storage.
#[derive(Debug, Clone, Default)]
pub struct Network {
    elements: Vec<Element>,
    index: HashMap<ElementId, usize>,
    junction_to_transformer: BTreeMap<ElementId, ElementId>,
}

impl Network {
    pub fn new(
        elements: Vec<Element>,
        junction_to_transformer: BTreeMap<ElementId, ElementId>,
    ) -> Result<Self, NetworkError> {
        Self::with_policy(elements, junction_to_transformer, LabelPolicy::Strict)
    }

    pub fn with_policy(
        mut elements: Vec<Element>,
        junction_to_transformer: BTreeMap<ElementId, ElementId>,
        policy: LabelPolicy,
    ) -> Result<Self, NetworkError> {
        elements.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(NetworkError::DuplicateId(e.id.clone()));
            }
            if !e.is_finite() {
                return Err(NetworkError::NonFinite(e.id.clone()));
            }
        }
        let net = Network {
            elements,
            index,
            junction_to_transformer,
        };
        if policy == LabelPolicy::Strict {
            for c in net.elements.iter().filter(|e| e.kind == ElementType::Customer) {
                net.customer_junction(c)?;
            }
        }
        for (j, t) in &net.junction_to_transformer {
            let junction = net.get(j).ok_or_else(|| NetworkError::UnknownElement(j.clone()))?;
            if junction.kind != ElementType::Junction {
                return Err(NetworkError::UnknownElement(j.clone()));
            }
            match net.get(t) {
                Some(e) if e.kind == ElementType::Transformer => {}
                _ => {
                    return Err(NetworkError::BadTransformer {
                        junction: j.clone(),
                        transformer: t.clone(),
                    })
                }
            }
        }
        Ok(net)
    }

    /// Resolves a customer's junction label to the junction element.
    pub fn customer_junction(&self, customer: &Element) -> Result<&Element, NetworkError> {
        let label = customer
            .junction
            .as_ref()
            .ok_or_else(|| NetworkError::MissingJunction(customer.id.clone()))?;
        match self.get(label) {
            Some(j) if j.kind == ElementType::Junction => Ok(j),
            _ => Err(NetworkError::UnknownJunction {
                customer: customer.id.clone(),
                junction: label.clone(),
            }),
        }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: &ElementId) -> Option<&Element> {
        self.index.get(id).map(|&i| &self.elements[i])
    }

    pub fn position(&self, id: &ElementId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn lookup(&self, id: &ElementId) -> Result<&Element, NetworkError> {
        self.get(id).ok_or_else(|| NetworkError::UnknownElement(id.clone()))
    }

    pub fn junction_to_transformer(&self) -> &BTreeMap<ElementId, ElementId> {
        &self.junction_to_transformer
    }

    /// Elements of one type, ordered by id.
    pub fn subset(&self, kind: &ElementType) -> Vec<&Element> {
        self.elements.iter().filter(|e| &e.kind == kind).collect()
    }

    pub fn customers(&self) -> Vec<&Element> {
        self.subset(&ElementType::Customer)
    }

    /// Feeder terminal junctions.
    pub fn terminals(&self) -> Vec<&Element> {
        self.subset(&ElementType::Junction)
    }

    /// Everything that is neither a customer, a terminal junction nor a
    /// transformer: the candidates for path interiors.
    pub fn remaining(&self) -> Vec<&Element> {
        self.elements.iter().filter(|e| is_remaining(&e.kind)).collect()
    }

    /// Elements directly connectable to `e` under `cond`, ordered by id.
    pub fn connections(&self, e: &Element, cond: &ConnectionConditions) -> Result<Vec<&Element>, NetworkError> {
        cond.validate()?;
        Ok(self
            .elements
            .iter()
            .filter(|m| m.id != e.id && cond.connectable(e, m))
            .collect())
    }
}

pub(crate) fn is_remaining(kind: &ElementType) -> bool {
    !matches!(
        kind,
        ElementType::Customer | ElementType::Junction | ElementType::Transformer
    )
}

/// Maximum connection distance plus the set of type pairs that may touch.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionConditions {
    pub max_distance: f64,
    allowed: BTreeSet<(ElementType, ElementType)>,
    /// Extension labels behave like lines unless listed explicitly.
    pub other_as_line: bool,
}

impl ConnectionConditions {
    /// Customer-line, line-line and line-junction adjacency.
    pub fn new(max_distance: f64) -> Self {
        let mut cond = ConnectionConditions {
            max_distance,
            allowed: BTreeSet::new(),
            other_as_line: true,
        };
        cond.allow(ElementType::Customer, ElementType::Line);
        cond.allow(ElementType::Line, ElementType::Line);
        cond.allow(ElementType::Line, ElementType::Junction);
        cond
    }

    /// Every pair of types is allowed.
    pub fn any_type(max_distance: f64) -> Self {
        let mut cond = ConnectionConditions::new(max_distance);
        let kinds = [
            ElementType::Customer,
            ElementType::Line,
            ElementType::Junction,
            ElementType::Transformer,
        ];
        for a in &kinds {
            for b in &kinds {
                cond.allow(a.clone(), b.clone());
            }
        }
        cond
    }

    pub fn allow(&mut self, a: ElementType, b: ElementType) -> &mut Self {
        self.allowed.insert(ordered_pair(a, b));
        self
    }

    pub fn with_customer_junction(mut self) -> Self {
        self.allow(ElementType::Customer, ElementType::Junction);
        self
    }

    pub fn allows(&self, a: &ElementType, b: &ElementType) -> bool {
        let map = |k: &ElementType| match k {
            ElementType::Other(_) if self.other_as_line => ElementType::Line,
            k => k.clone(),
        };
        self.allowed.contains(&ordered_pair(a.clone(), b.clone()))
            || self.allowed.contains(&ordered_pair(map(a), map(b)))
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.max_distance.is_nan() || self.max_distance < 0.0 {
            return Err(NetworkError::InvalidCondition(format!(
                "maximum connection distance must be non-negative, got {}",
                self.max_distance
            )));
        }
        Ok(())
    }

    pub fn connectable(&self, a: &Element, b: &Element) -> bool {
        self.allows(&a.kind, &b.kind) && dist(a, b) <= self.max_distance
    }
}

fn ordered_pair(a: ElementType, b: ElementType) -> (ElementType, ElementType) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
