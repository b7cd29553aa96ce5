//! Token game on a built net.
//!
//! A transition is enabled in a marking `M` when all of its input places are
//! marked and none of its output places is (the contact condition is part of
//! the rule). Firing exchanges the two input tokens for the two output
//! tokens, so the token count is preserved.
//!
//! Initial markings are caller input; the library does not synthesize them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{CycloidError, Result};
use crate::net::{CycloidNet, NodeId, PlaceId, TransitionId};

/// A set of marked places, validated against one net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking(BTreeSet<PlaceId>);

impl Marking {
    /// Builds a marking, rejecting places that are not part of `net`.
    pub fn new(net: &CycloidNet, places: impl IntoIterator<Item = PlaceId>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in places {
            if !net.contains(NodeId::Place(p)) {
                return Err(CycloidError::InvalidMarking(format!(
                    "place {p} is not part of the net"
                )));
            }
            set.insert(p);
        }
        Ok(Marking(set))
    }

    /// Parses the literal syntax `F:ξ,η,B:ξ,η,…`. An empty string is the
    /// empty marking.
    pub fn parse(net: &CycloidNet, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Marking(BTreeSet::new()));
        }
        let bad = |what: &str| CycloidError::InvalidMarking(format!("{what} in '{text}'"));
        let chunks: Vec<&str> = text.split(',').collect();
        if !chunks.len().is_multiple_of(2) {
            return Err(bad("odd number of comma fields"));
        }
        let mut places = Vec::new();
        for pair in chunks.chunks(2) {
            let key = format!("{},{}", pair[0].trim(), pair[1].trim());
            let node: NodeId = key
                .parse()
                .map_err(|_| bad("expected tokens of the form F:x,y or B:x,y"))?;
            match node.as_place() {
                Some(p) => places.push(p),
                None => return Err(bad("transitions cannot be marked")),
            }
        }
        Marking::new(net, places)
    }

    pub fn contains(&self, p: &PlaceId) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn places(&self) -> impl Iterator<Item = &PlaceId> {
        self.0.iter()
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl CycloidNet {
    fn transition_places(&self, t: TransitionId) -> Result<(Vec<PlaceId>, Vec<PlaceId>)> {
        let node = NodeId::Transition(t);
        let take = |nodes: &[NodeId]| nodes.iter().filter_map(NodeId::as_place).collect();
        Ok((
            take(self.pre_set(node)?),
            take(self.post_set(node)?),
        ))
    }

    /// `t` is enabled when every input place is marked and no output place is.
    pub fn enabled(&self, marking: &Marking, t: TransitionId) -> Result<bool> {
        let (pre, post) = self.transition_places(t)?;
        Ok(pre.iter().all(|p| marking.contains(p)) && post.iter().all(|p| !marking.contains(p)))
    }

    /// Fires `t`, exchanging its input tokens for its output tokens.
    pub fn fire(&self, marking: &Marking, t: TransitionId) -> Result<Marking> {
        if !self.enabled(marking, t)? {
            return Err(CycloidError::NotEnabled(t.to_string()));
        }
        let (pre, post) = self.transition_places(t)?;
        let mut set: BTreeSet<PlaceId> = marking.0.clone();
        for p in pre {
            set.remove(&p);
        }
        for p in post {
            set.insert(p);
        }
        Ok(Marking(set))
    }

    /// All transitions enabled in `marking`, in coordinate order.
    pub fn enabled_set(&self, marking: &Marking) -> Vec<TransitionId> {
        self.transitions()
            .iter()
            .copied()
            .filter(|&t| self.enabled(marking, t).expect("own transition"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CycloidParams, Point};
    use crate::net::PlaceKind;
    use crate::rng::SplitMix64;

    fn net(a: i64, b: i64, g: i64, d: i64) -> CycloidNet {
        CycloidNet::build(&CycloidParams::new(a, b, g, d).unwrap()).unwrap()
    }

    fn place(kind: PlaceKind, xi: i64, eta: i64) -> PlaceId {
        PlaceId {
            kind,
            at: Point::new(xi, eta),
        }
    }

    #[test]
    fn enabling_examples() {
        let n = net(4, 2, 2, 3);
        let t = TransitionId(Point::new(1, 0));
        let m = Marking::new(
            &n,
            [
                place(PlaceKind::Forward, 0, 0),
                place(PlaceKind::Backward, 3, 2),
            ],
        )
        .unwrap();
        assert!(n.enabled(&m, t).unwrap());

        let empty = Marking::new(&n, []).unwrap();
        for t in n.transitions() {
            assert!(!n.enabled(&empty, *t).unwrap());
        }

        // contact: a token on an output place blocks the transition
        let contact = Marking::new(
            &n,
            [
                place(PlaceKind::Forward, 0, 0),
                place(PlaceKind::Backward, 3, 2),
                place(PlaceKind::Forward, 1, 0),
            ],
        )
        .unwrap();
        assert!(!n.enabled(&contact, t).unwrap());
    }

    #[test]
    fn firing_example() {
        let n = net(4, 2, 2, 3);
        let t = TransitionId(Point::new(1, 0));
        let m = Marking::new(
            &n,
            [
                place(PlaceKind::Forward, 0, 0),
                place(PlaceKind::Backward, 3, 2),
            ],
        )
        .unwrap();
        let m2 = n.fire(&m, t).unwrap();
        let expected = Marking::new(
            &n,
            [
                place(PlaceKind::Forward, 1, 0),
                place(PlaceKind::Backward, 1, 0),
            ],
        )
        .unwrap();
        assert_eq!(m2, expected);
        assert_eq!(m2.len(), m.len());
        assert!(!n.enabled(&m2, t).unwrap());
        assert!(matches!(n.fire(&m2, t), Err(CycloidError::NotEnabled(_))));
    }

    #[test]
    fn preset_marking_enables_exactly_its_transition() {
        let n = net(4, 2, 2, 3);
        for t in n.transitions() {
            let pre: Vec<PlaceId> = n
                .pre_set(NodeId::Transition(*t))
                .unwrap()
                .iter()
                .filter_map(NodeId::as_place)
                .collect();
            let m = Marking::new(&n, pre).unwrap();
            assert_eq!(n.enabled_set(&m), vec![*t]);
        }
    }

    #[test]
    fn full_marking_enables_nothing() {
        let n = net(2, 2, 2, 2);
        let m = Marking::new(&n, n.places().iter().copied()).unwrap();
        assert!(n.enabled_set(&m).is_empty());
    }

    #[test]
    fn random_firing_conserves_tokens() {
        let n = net(3, 2, 2, 3);
        let mut rng = SplitMix64::new(7);
        // start from the preset of some transition and walk
        let t0 = n.transitions()[0];
        let pre: Vec<PlaceId> = n
            .pre_set(NodeId::Transition(t0))
            .unwrap()
            .iter()
            .filter_map(NodeId::as_place)
            .collect();
        let mut m = Marking::new(&n, pre).unwrap();
        for _ in 0..200 {
            let enabled = n.enabled_set(&m);
            if enabled.is_empty() {
                break;
            }
            let t = enabled[rng.below(enabled.len() as u64) as usize];
            let next = n.fire(&m, t).unwrap();
            assert_eq!(next, n.fire(&m, t).unwrap());
            assert_eq!(next.len(), m.len());
            // outputs now marked, inputs now free
            let (pre, post) = n.transition_places(t).unwrap();
            assert!(post.iter().all(|p| next.contains(p)));
            assert!(pre.iter().all(|p| !next.contains(p)));
            m = next;
        }
    }

    #[test]
    fn marking_parsing() {
        let n = net(4, 2, 2, 3);
        let m = Marking::parse(&n, "F:0,0,B:3,2").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.to_string(), "F:0,0,B:3,2");
        assert!(Marking::parse(&n, "").unwrap().is_empty());
        assert!(Marking::parse(&n, "F:0,0,B:3").is_err());
        assert!(Marking::parse(&n, "T:0,0,F:0,0").is_err());
        // place exists only with canonical coordinates
        assert!(Marking::parse(&n, "F:9,9").is_err());
    }
}
