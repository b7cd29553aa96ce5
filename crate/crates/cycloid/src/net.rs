//! Materialization of the finite quotient net.
//!
//! Each transition class is identified by its canonical coordinates. A
//! transition `t` at `(ξ,η)` owns two output places, one forward and one
//! backward, named after `t` itself; the forward place feeds the class of
//! `(ξ+1,η)`, the backward place the class of `(ξ,η+1)`. Consequently every
//! transition has exactly two inputs (the forward place of `(ξ−1,η)` and the
//! backward place of `(ξ,η−1)`, both canonicalized) and every place exactly
//! one input and one output.
//!
//! Nets are immutable after construction and freely shareable across
//! threads. Node lists and the arc list are kept sorted so that exports are
//! byte-reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CycloidError, Result};
use crate::lattice::{CycloidParams, Point};

/// Default cap on the number of transitions a net may have.
pub const DEFAULT_AREA_CAP: i64 = 1_000_000;

/// Orientation of a place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Forward,
    Backward,
}

impl fmt::Display for PlaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceKind::Forward => write!(f, "F"),
            PlaceKind::Backward => write!(f, "B"),
        }
    }
}

/// A transition class, identified by its canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionId(pub Point);

/// A place, identified by kind and the canonical coordinates of its unique
/// input transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceId {
    pub kind: PlaceKind,
    pub at: Point,
}

/// Any node of the net; ordering is transitions, then forward places, then
/// backward places, each block by coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Transition(TransitionId),
    Place(PlaceId),
}

impl NodeId {
    pub fn transition(p: Point) -> Self {
        NodeId::Transition(TransitionId(p))
    }

    pub fn place(kind: PlaceKind, at: Point) -> Self {
        NodeId::Place(PlaceId { kind, at })
    }

    pub fn as_place(&self) -> Option<PlaceId> {
        match self {
            NodeId::Place(p) => Some(*p),
            NodeId::Transition(_) => None,
        }
    }

    pub fn as_transition(&self) -> Option<TransitionId> {
        match self {
            NodeId::Transition(t) => Some(*t),
            NodeId::Place(_) => None,
        }
    }
}

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T:{},{}", self.0.xi, self.0.eta)
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{}", self.kind, self.at.xi, self.at.eta)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Transition(t) => t.fmt(f),
            NodeId::Place(p) => p.fmt(f),
        }
    }
}

impl FromStr for NodeId {
    type Err = CycloidError;

    /// Parses the stable keys `T:ξ,η`, `F:ξ,η`, `B:ξ,η`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CycloidError::InvalidNet(format!("malformed node key '{s}'"));
        let (tag, coords) = s.split_once(':').ok_or_else(bad)?;
        let at: Point = coords.parse()?;
        match tag.trim() {
            "T" => Ok(NodeId::transition(at)),
            "F" => Ok(NodeId::place(PlaceKind::Forward, at)),
            "B" => Ok(NodeId::place(PlaceKind::Backward, at)),
            _ => Err(bad()),
        }
    }
}

/// A structural defect found by [`CycloidNet::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TransitionCount { expected: i64, actual: usize },
    PlaceCount { expected: i64, actual: usize },
    NonCanonical { node: NodeId },
    DanglingArc { from: NodeId, to: NodeId },
    ArcShape { from: NodeId, to: NodeId },
    TransitionDegree { t: TransitionId, inputs: usize, outputs: usize },
    TransitionKinds { t: TransitionId, detail: String },
    PlaceDegree { p: PlaceId, inputs: usize, outputs: usize },
    NotPermutation { kind: PlaceKind },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TransitionCount { expected, actual } => {
                write!(f, "transition count {actual} differs from area {expected}")
            }
            Violation::PlaceCount { expected, actual } => {
                write!(f, "place count {actual} differs from 2*area {expected}")
            }
            Violation::NonCanonical { node } => {
                write!(f, "node {node} has non-canonical coordinates")
            }
            Violation::DanglingArc { from, to } => {
                write!(f, "arc {from} -> {to} references an undeclared node")
            }
            Violation::ArcShape { from, to } => {
                write!(f, "arc {from} -> {to} does not alternate place/transition")
            }
            Violation::TransitionDegree { t, inputs, outputs } => {
                write!(f, "transition {t} has degree in={inputs} out={outputs}, want 2/2")
            }
            Violation::TransitionKinds { t, detail } => {
                write!(f, "transition {t} has unbalanced place kinds: {detail}")
            }
            Violation::PlaceDegree { p, inputs, outputs } => {
                write!(f, "place {p} has degree in={inputs} out={outputs}, want 1/1")
            }
            Violation::NotPermutation { kind } => {
                write!(f, "{kind}-successor map is not a permutation of the transitions")
            }
        }
    }
}

/// The finite quotient net for one parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloidNet {
    params: CycloidParams,
    transitions: Vec<TransitionId>,
    places: Vec<PlaceId>,
    arcs: Vec<(NodeId, NodeId)>,
    succ_forward: BTreeMap<Point, Point>,
    succ_backward: BTreeMap<Point, Point>,
    pre: BTreeMap<NodeId, Vec<NodeId>>,
    post: BTreeMap<NodeId, Vec<NodeId>>,
}

impl CycloidNet {
    /// Builds the quotient net, refusing areas above [`DEFAULT_AREA_CAP`].
    pub fn build(params: &CycloidParams) -> Result<Self> {
        Self::build_with_cap(params, DEFAULT_AREA_CAP)
    }

    /// Builds the quotient net, refusing areas above `cap`.
    pub fn build_with_cap(params: &CycloidParams, cap: i64) -> Result<Self> {
        let area = params.area();
        if area > cap {
            return Err(CycloidError::AreaCapExceeded { area, cap });
        }

        let transitions = enumerate_representatives(params);
        assert_eq!(
            transitions.len() as i64,
            area,
            "representative enumeration does not match the area for {params}"
        );

        let mut succ_forward = BTreeMap::new();
        let mut succ_backward = BTreeMap::new();
        let mut arcs = Vec::with_capacity(transitions.len() * 4);
        for &p in &transitions {
            let fwd = params.canonical(Point::new(p.xi + 1, p.eta));
            let bwd = params.canonical(Point::new(p.xi, p.eta + 1));
            succ_forward.insert(p, fwd);
            succ_backward.insert(p, bwd);
            arcs.push((NodeId::transition(p), NodeId::place(PlaceKind::Forward, p)));
            arcs.push((NodeId::place(PlaceKind::Forward, p), NodeId::transition(fwd)));
            arcs.push((NodeId::transition(p), NodeId::place(PlaceKind::Backward, p)));
            arcs.push((NodeId::place(PlaceKind::Backward, p), NodeId::transition(bwd)));
        }
        arcs.sort_unstable();

        let mut places: Vec<PlaceId> = transitions
            .iter()
            .map(|&p| PlaceId {
                kind: PlaceKind::Forward,
                at: p,
            })
            .chain(transitions.iter().map(|&p| PlaceId {
                kind: PlaceKind::Backward,
                at: p,
            }))
            .collect();
        places.sort_unstable();

        let (pre, post) = adjacency(&arcs);

        Ok(CycloidNet {
            params: *params,
            transitions: transitions.into_iter().map(TransitionId).collect(),
            places,
            arcs,
            succ_forward,
            succ_backward,
            pre,
            post,
        })
    }

    pub fn params(&self) -> &CycloidParams {
        &self.params
    }

    pub fn transitions(&self) -> &[TransitionId] {
        &self.transitions
    }

    pub fn places(&self) -> &[PlaceId] {
        &self.places
    }

    pub fn arcs(&self) -> &[(NodeId, NodeId)] {
        &self.arcs
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.pre.contains_key(&node)
    }

    /// The transition reached through `t`'s forward place.
    pub fn forward_successor(&self, t: TransitionId) -> Option<TransitionId> {
        self.succ_forward.get(&t.0).map(|&p| TransitionId(p))
    }

    /// The transition reached through `t`'s backward place.
    pub fn backward_successor(&self, t: TransitionId) -> Option<TransitionId> {
        self.succ_backward.get(&t.0).map(|&p| TransitionId(p))
    }

    /// Input nodes of `node` under the flow relation.
    pub fn pre_set(&self, node: NodeId) -> Result<&[NodeId]> {
        self.pre
            .get(&node)
            .map(Vec::as_slice)
            .ok_or_else(|| CycloidError::UnknownNode(node.to_string()))
    }

    /// Output nodes of `node` under the flow relation.
    pub fn post_set(&self, node: NodeId) -> Result<&[NodeId]> {
        self.post
            .get(&node)
            .map(Vec::as_slice)
            .ok_or_else(|| CycloidError::UnknownNode(node.to_string()))
    }

    /// Checks every structural invariant; an empty list means the net is
    /// well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let area = self.params.area();
        if self.transitions.len() as i64 != area {
            out.push(Violation::TransitionCount {
                expected: area,
                actual: self.transitions.len(),
            });
        }
        if self.places.len() as i64 != 2 * area {
            out.push(Violation::PlaceCount {
                expected: 2 * area,
                actual: self.places.len(),
            });
        }
        for t in &self.transitions {
            if !self.params.in_fundamental(t.0) {
                out.push(Violation::NonCanonical {
                    node: NodeId::Transition(*t),
                });
            }
        }
        for p in &self.places {
            if !self.params.in_fundamental(p.at) {
                out.push(Violation::NonCanonical {
                    node: NodeId::Place(*p),
                });
            }
        }

        // degree bookkeeping from the arc list alone
        let mut indeg: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        let mut outdeg: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        let declared: std::collections::BTreeSet<NodeId> = self
            .transitions
            .iter()
            .map(|&t| NodeId::Transition(t))
            .chain(self.places.iter().map(|&p| NodeId::Place(p)))
            .collect();
        for &(from, to) in &self.arcs {
            if !declared.contains(&from) || !declared.contains(&to) {
                out.push(Violation::DanglingArc { from, to });
                continue;
            }
            let place_to_transition =
                matches!(from, NodeId::Place(_)) && matches!(to, NodeId::Transition(_));
            let transition_to_place =
                matches!(from, NodeId::Transition(_)) && matches!(to, NodeId::Place(_));
            if !place_to_transition && !transition_to_place {
                out.push(Violation::ArcShape { from, to });
                continue;
            }
            outdeg.entry(from).or_default().push(to);
            indeg.entry(to).or_default().push(from);
        }

        let empty: Vec<NodeId> = Vec::new();
        for t in &self.transitions {
            let node = NodeId::Transition(*t);
            let ins = indeg.get(&node).unwrap_or(&empty);
            let outs = outdeg.get(&node).unwrap_or(&empty);
            if ins.len() != 2 || outs.len() != 2 {
                out.push(Violation::TransitionDegree {
                    t: *t,
                    inputs: ins.len(),
                    outputs: outs.len(),
                });
                continue;
            }
            let kinds = |nodes: &[NodeId]| {
                let f = nodes
                    .iter()
                    .filter(|n| matches!(n, NodeId::Place(p) if p.kind == PlaceKind::Forward))
                    .count();
                let b = nodes
                    .iter()
                    .filter(|n| matches!(n, NodeId::Place(p) if p.kind == PlaceKind::Backward))
                    .count();
                (f, b)
            };
            let (fi, bi) = kinds(ins);
            let (fo, bo) = kinds(outs);
            if (fi, bi) != (1, 1) || (fo, bo) != (1, 1) {
                out.push(Violation::TransitionKinds {
                    t: *t,
                    detail: format!("in F/B={fi}/{bi}, out F/B={fo}/{bo}"),
                });
            }
        }
        for p in &self.places {
            let node = NodeId::Place(*p);
            let ins = indeg.get(&node).map_or(0, Vec::len);
            let outs = outdeg.get(&node).map_or(0, Vec::len);
            if ins != 1 || outs != 1 {
                out.push(Violation::PlaceDegree {
                    p: *p,
                    inputs: ins,
                    outputs: outs,
                });
            }
        }

        // each successor map must permute the transition set
        for kind in [PlaceKind::Forward, PlaceKind::Backward] {
            let map = match kind {
                PlaceKind::Forward => &self.succ_forward,
                PlaceKind::Backward => &self.succ_backward,
            };
            let domain_ok = self.transitions.iter().all(|t| map.contains_key(&t.0));
            let mut image: Vec<Point> = map.values().copied().collect();
            image.sort_unstable();
            image.dedup();
            if !domain_ok || image.len() != self.transitions.len() {
                out.push(Violation::NotPermutation { kind });
            }
        }
        out
    }

    /// GraphViz text; transitions are boxes, places circles. Output is
    /// byte-stable for a given net.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph cycloid {\n");
        for t in &self.transitions {
            s.push_str(&format!("  \"{t}\" [shape=box];\n"));
        }
        for p in &self.places {
            s.push_str(&format!("  \"{p}\" [shape=circle];\n"));
        }
        for (from, to) in &self.arcs {
            s.push_str(&format!("  \"{from}\" -> \"{to}\";\n"));
        }
        s.push_str("}\n");
        s
    }

    /// JSON text carrying params, node lists and the arc list, with nodes
    /// referenced by the keys `T:ξ,η`, `F:ξ,η`, `B:ξ,η`.
    pub fn to_json(&self) -> String {
        let schema = NetJson {
            params: {
                let (a, b, g, d) = self.params.as_tuple();
                [a, b, g, d]
            },
            transitions: self.transitions.iter().map(|t| [t.0.xi, t.0.eta]).collect(),
            places: self
                .places
                .iter()
                .map(|p| PlaceJson {
                    kind: p.kind.to_string(),
                    at: [p.at.xi, p.at.eta],
                })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|(from, to)| [from.to_string(), to.to_string()])
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&schema).expect("net serialization");
        text.push('\n');
        text
    }

    /// Rebuilds a net from [`CycloidNet::to_json`] output.
    pub fn from_json(text: &str) -> Result<Self> {
        let schema: NetJson = serde_json::from_str(text)
            .map_err(|e| CycloidError::InvalidNet(format!("json parse: {e}")))?;
        let [a, b, g, d] = schema.params;
        let params = CycloidParams::new(a, b, g, d)?;

        let mut transitions: Vec<Point> = schema
            .transitions
            .iter()
            .map(|&[xi, eta]| Point::new(xi, eta))
            .collect();
        transitions.sort_unstable();

        let mut places: Vec<PlaceId> = Vec::with_capacity(schema.places.len());
        for p in &schema.places {
            let kind = match p.kind.as_str() {
                "F" => PlaceKind::Forward,
                "B" => PlaceKind::Backward,
                other => {
                    return Err(CycloidError::InvalidNet(format!(
                        "unknown place kind '{other}'"
                    )))
                }
            };
            places.push(PlaceId {
                kind,
                at: Point::new(p.at[0], p.at[1]),
            });
        }
        places.sort_unstable();

        let declared: std::collections::BTreeSet<NodeId> = transitions
            .iter()
            .map(|&p| NodeId::transition(p))
            .chain(places.iter().map(|&p| NodeId::Place(p)))
            .collect();
        let mut arcs = Vec::with_capacity(schema.arcs.len());
        for [from, to] in &schema.arcs {
            let from: NodeId = from.parse()?;
            let to: NodeId = to.parse()?;
            if !declared.contains(&from) || !declared.contains(&to) {
                return Err(CycloidError::InvalidNet(format!(
                    "arc {from} -> {to} references an undeclared node"
                )));
            }
            arcs.push((from, to));
        }
        arcs.sort_unstable();

        let (pre, post) = adjacency(&arcs);

        // successor maps through each transition's own output places
        let mut succ_forward = BTreeMap::new();
        let mut succ_backward = BTreeMap::new();
        for &t in &transitions {
            for (kind, map) in [
                (PlaceKind::Forward, &mut succ_forward),
                (PlaceKind::Backward, &mut succ_backward),
            ] {
                let place = NodeId::place(kind, t);
                let outs = post.get(&place).map_or(&[] as &[NodeId], Vec::as_slice);
                match outs {
                    [NodeId::Transition(next)] => {
                        map.insert(t, next.0);
                    }
                    _ => {
                        return Err(CycloidError::InvalidNet(format!(
                            "place {place} must feed exactly one transition"
                        )))
                    }
                }
            }
        }

        Ok(CycloidNet {
            params,
            transitions: transitions.into_iter().map(TransitionId).collect(),
            places,
            arcs,
            succ_forward,
            succ_backward,
            pre,
            post,
        })
    }

    #[cfg(test)]
    pub(crate) fn drop_arc_for_test(&mut self, index: usize) {
        self.arcs.remove(index);
    }
}

fn adjacency(
    arcs: &[(NodeId, NodeId)],
) -> (BTreeMap<NodeId, Vec<NodeId>>, BTreeMap<NodeId, Vec<NodeId>>) {
    let mut pre: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut post: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(from, to) in arcs {
        pre.entry(from).or_default();
        post.entry(to).or_default();
        post.entry(from).or_default().push(to);
        pre.entry(to).or_default().push(from);
    }
    (pre, post)
}

/// All canonical representatives, sorted by `(ξ, η)`.
///
/// For each column `ξ ∈ [0, α+γ)` the admissible `η` form one interval, read
/// off the two numerator constraints `0 ≤ δξ − γη < A` and `0 ≤ βξ + αη < A`.
/// This visits exactly `A` points regardless of parameter skew.
fn enumerate_representatives(params: &CycloidParams) -> Vec<Point> {
    let (al, be, ga, de) = params.as_tuple();
    let a = params.area();
    let mut out = Vec::with_capacity(a as usize);
    for xi in 0..(al + ga) {
        let hi1 = floor_div(de * xi, ga);
        let lo1 = floor_div(de * xi - a, ga) + 1;
        let lo2 = -floor_div(be * xi, al);
        let hi2 = ceil_div(a - be * xi, al) - 1;
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        for eta in lo..=hi {
            debug_assert!(params.in_fundamental(Point::new(xi, eta)));
            out.push(Point::new(xi, eta));
        }
    }
    out
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

#[derive(Serialize, Deserialize)]
struct NetJson {
    params: [i64; 4],
    transitions: Vec<[i64; 2]>,
    places: Vec<PlaceJson>,
    arcs: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct PlaceJson {
    kind: String,
    at: [i64; 2],
}
