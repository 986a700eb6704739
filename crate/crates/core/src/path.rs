//! Customer-to-terminal paths, their validity rules and the size of the
//! unrestricted hypothetical path space.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

use crate::network::{dist, is_remaining, ConnectionConditions, ElementId, ElementType, Network, NetworkError};

/// Ordered element sequence from a customer to a feeder terminal junction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub elements: Vec<ElementId>,
    /// Sum of consecutive element distances, in meters.
    pub length: f64,
}

impl Path {
    /// Builds a path and measures it against the network geometry.
    pub fn measured(elements: Vec<ElementId>, net: &Network) -> Result<Self, NetworkError> {
        let mut length = 0.0;
        for pair in elements.windows(2) {
            length += dist(net.lookup(&pair[0])?, net.lookup(&pair[1])?);
        }
        Ok(Path { elements, length })
    }

    /// A path with a known (or irrelevant) length, for synthetic instances.
    pub fn from_ids<I, S>(ids: I, length: f64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<ElementId>,
    {
        Path {
            elements: ids.into_iter().map(Into::into).collect(),
            length,
        }
    }

    pub fn customer(&self) -> &ElementId {
        &self.elements[0]
    }

    pub fn terminal(&self) -> &ElementId {
        &self.elements[self.elements.len() - 1]
    }

    /// Elements strictly between the customer and the terminal.
    pub fn interior(&self) -> &[ElementId] {
        match self.elements.len() {
            0..=2 => &[],
            n => &self.elements[1..n - 1],
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Rules a path must satisfy: connectability (distance `D` and allowed type
/// pairs) and the maximum total length `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathConditions {
    pub connection: ConnectionConditions,
    pub max_length: f64,
}

impl PathConditions {
    pub fn new(max_distance: f64, max_length: f64) -> Self {
        PathConditions {
            connection: ConnectionConditions::new(max_distance),
            max_length,
        }
    }
}

/// First rule a path breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooShort,
    StartNotCustomer(ElementId),
    EndNotJunction(ElementId),
    InteriorNotRemaining(ElementId),
    Repeat(ElementId),
    NotConnectable { from: ElementId, to: ElementId },
    TooLong { length: f64, max: f64 },
    MissingLabel(ElementId),
    WrongTerminal { expected: ElementId, found: ElementId },
}

impl Violation {
    /// Short machine-friendly name of the broken rule.
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::TooShort | Violation::StartNotCustomer(_) | Violation::EndNotJunction(_) => "endpoint-type",
            Violation::InteriorNotRemaining(_) => "interior-type",
            Violation::Repeat(_) => "repeat",
            Violation::NotConnectable { .. } => "not-connectable",
            Violation::TooLong { .. } => "too-long",
            Violation::MissingLabel(_) => "missing-label",
            Violation::WrongTerminal { .. } => "wrong-terminal",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooShort => write!(f, "a path needs at least a customer and a terminal"),
            Violation::StartNotCustomer(id) => write!(f, "path starts at `{id}`, not a customer"),
            Violation::EndNotJunction(id) => write!(f, "path ends at `{id}`, not a junction"),
            Violation::InteriorNotRemaining(id) => write!(f, "`{id}` cannot be an intermediate element"),
            Violation::Repeat(id) => write!(f, "`{id}` appears more than once"),
            Violation::NotConnectable { from, to } => write!(f, "`{from}` and `{to}` cannot be directly connected"),
            Violation::TooLong { length, max } => write!(f, "length {length:.3} m exceeds {max} m"),
            Violation::MissingLabel(id) => write!(f, "customer `{id}` has no junction label"),
            Violation::WrongTerminal { expected, found } => {
                write!(f, "path ends at `{found}` but the customer is labelled `{expected}`")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks `path` against the network, in rule order: endpoint types, repeats,
/// connectability, total length, terminal label.
pub fn validate_path(path: &Path, net: &Network, cond: &PathConditions) -> Result<Verdict, NetworkError> {
    let elements = path
        .elements
        .iter()
        .map(|id| net.lookup(id))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match check(&elements, cond) {
        Some(v) => Verdict::Invalid(v),
        None => Verdict::Valid,
    })
}

fn check(elements: &[&crate::network::Element], cond: &PathConditions) -> Option<Violation> {
    if elements.len() < 2 {
        return Some(Violation::TooShort);
    }
    let first = elements[0];
    let last = elements[elements.len() - 1];
    if first.kind != ElementType::Customer {
        return Some(Violation::StartNotCustomer(first.id.clone()));
    }
    if last.kind != ElementType::Junction {
        return Some(Violation::EndNotJunction(last.id.clone()));
    }
    if let Some(e) = elements[1..elements.len() - 1].iter().find(|e| !is_remaining(&e.kind)) {
        return Some(Violation::InteriorNotRemaining(e.id.clone()));
    }
    let mut seen = HashSet::new();
    if let Some(e) = elements.iter().find(|e| !seen.insert(&e.id)) {
        return Some(Violation::Repeat(e.id.clone()));
    }
    let mut length = 0.0;
    for pair in elements.windows(2) {
        if !cond.connection.connectable(pair[0], pair[1]) {
            return Some(Violation::NotConnectable {
                from: pair[0].id.clone(),
                to: pair[1].id.clone(),
            });
        }
        length += dist(pair[0], pair[1]);
    }
    if length > cond.max_length {
        return Some(Violation::TooLong {
            length,
            max: cond.max_length,
        });
    }
    match &first.junction {
        None => Some(Violation::MissingLabel(first.id.clone())),
        Some(j) if j != &last.id => Some(Violation::WrongTerminal {
            expected: j.clone(),
            found: last.id.clone(),
        }),
        Some(_) => None,
    }
}

/// Number of hypothetical paths over `n_customers` customers,
/// `n_remaining` intermediate candidates and `n_terminals` terminals: every
/// customer, followed by every ordered selection of one or more distinct
/// intermediate elements, followed by every terminal.
pub fn hypothetical_count(n_customers: u64, n_remaining: u64, n_terminals: u64) -> BigUint {
    let mut sum = BigUint::from(0u32);
    let mut falling = BigUint::from(1u32);
    for k in 0..n_remaining {
        falling *= n_remaining - k;
        sum += &falling;
    }
    sum * n_customers * n_terminals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Element;
    use std::collections::BTreeMap;

    fn chain() -> Network {
        Network::new(
            vec![
                Element::customer("c", 0.0, 0.0, "j"),
                Element::point("l1", ElementType::Line, 3.0, 0.0),
                Element::point("l2", ElementType::Line, 6.0, 0.0),
                Element::point("j", ElementType::Junction, 9.0, 0.0),
                Element::point("k", ElementType::Junction, 9.0, 3.0),
            ],
            BTreeMap::new(),
        )
        .unwrap()
    }

    fn verdict(ids: &[&str], d: f64, l: f64) -> Verdict {
        let net = chain();
        let p = Path::measured(ids.iter().map(|s| ElementId::from(*s)).collect(), &net).unwrap();
        validate_path(&p, &net, &PathConditions::new(d, l)).unwrap()
    }

    fn rule(v: Verdict) -> &'static str {
        match v {
            Verdict::Valid => "valid",
            Verdict::Invalid(v) => v.rule(),
        }
    }

    #[test]
    fn chain_is_valid() {
        assert_eq!(verdict(&["c", "l1", "l2", "j"], 3.0, 9.0), Verdict::Valid);
        let p = Path::measured(vec!["c".into(), "l1".into(), "l2".into(), "j".into()], &chain()).unwrap();
        assert_eq!(p.length, 9.0);
        assert_eq!(p.interior(), &["l1".into(), "l2".into()]);
    }

    #[test]
    fn violations_in_rule_order() {
        assert_eq!(rule(verdict(&["c", "l1", "l2", "l1", "j"], 3.0, 100.0)), "repeat");
        assert_eq!(rule(verdict(&["c", "l1", "l2", "k"], 5.0, 100.0)), "wrong-terminal");
        assert_eq!(rule(verdict(&["c", "l2", "j"], 3.0, 100.0)), "not-connectable");
        assert_eq!(rule(verdict(&["c", "l1", "l2", "j"], 3.0, 8.9)), "too-long");
        assert_eq!(rule(verdict(&["l1", "l2", "j"], 3.0, 100.0)), "endpoint-type");
        assert_eq!(rule(verdict(&["c", "l1", "l2"], 3.0, 100.0)), "endpoint-type");
        assert_eq!(rule(verdict(&["c", "k", "j"], 10.0, 100.0)), "interior-type");
        assert_eq!(rule(verdict(&["c"], 3.0, 100.0)), "endpoint-type");
    }

    #[test]
    fn unknown_id_is_a_lookup_error() {
        let net = chain();
        let p = Path::from_ids(["c", "zz", "j"], 0.0);
        assert_eq!(
            validate_path(&p, &net, &PathConditions::new(3.0, 9.0)).unwrap_err(),
            NetworkError::UnknownElement("zz".into())
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(hypothetical_count(1, 1, 1), BigUint::from(1u32));
        assert_eq!(hypothetical_count(2, 2, 1), BigUint::from(8u32));
        assert_eq!(hypothetical_count(2, 3, 2), BigUint::from(60u32));
        assert_eq!(hypothetical_count(0, 5, 5), BigUint::from(0u32));
        // 30! alone overflows u64; the formula must not.
        assert!(hypothetical_count(1, 30, 1) > BigUint::from(u64::MAX));
    }
}
