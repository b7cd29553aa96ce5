//! Parameter transformations that preserve the net up to isomorphism, plus a
//! small-scale exhaustive isomorphism oracle.
//!
//! Three moves leave the quotient structure unchanged:
//!
//! * `(α,β,γ,δ) → (α,β,γ−α,δ+β)` when `γ > α`,
//! * `(α,β,γ,δ) → (α,β,γ+α,δ−β)` when `δ > β` (the two shearings), and
//! * `(α,β,γ,δ) → (β,α,δ,γ)` (the symmetric cycloid), realized pointwise by
//!   `(ξ,η) ↦ (η+β, ξ−α)`.
//!
//! The bounded closure of a tuple under these moves is this crate's working
//! notion of "reachable isomorphic forms". Membership is a sufficient
//! condition for isomorphism; absence proves nothing, which is why the
//! exhaustive oracle exists for desk-scale nets.

use std::collections::BTreeSet;

use crate::error::{CycloidError, Result};
use crate::lattice::{CycloidParams, Point};
use crate::net::{CycloidNet, TransitionId};

/// Which shearing to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearDirection {
    /// `(γ,δ) → (γ−α, δ+β)`, guarded by `γ > α`.
    ReduceGamma,
    /// `(γ,δ) → (γ+α, δ−β)`, guarded by `δ > β`.
    ReduceDelta,
}

/// Applies one shearing; the area is unchanged.
pub fn shear(params: &CycloidParams, direction: ShearDirection) -> Result<CycloidParams> {
    let (a, b, g, d) = params.as_tuple();
    match direction {
        ShearDirection::ReduceGamma => {
            if g <= a {
                return Err(CycloidError::ShearGuard(format!(
                    "gamma must exceed alpha to reduce gamma, got {params}"
                )));
            }
            CycloidParams::new(a, b, g - a, d + b)
        }
        ShearDirection::ReduceDelta => {
            if d <= b {
                return Err(CycloidError::ShearGuard(format!(
                    "delta must exceed beta to reduce delta, got {params}"
                )));
            }
            CycloidParams::new(a, b, g + a, d - b)
        }
    }
}

/// The symmetric tuple `(β,α,δ,γ)`; an involution with the same area.
pub fn symmetric_params(params: &CycloidParams) -> CycloidParams {
    let (a, b, g, d) = params.as_tuple();
    CycloidParams::new(b, a, d, g).expect("symmetric tuple stays within bounds")
}

/// Pointwise map into the symmetric cycloid: `(ξ,η) ↦ (η+β, ξ−α)`.
/// Equivalent points map to equivalent points.
pub fn map_to_symmetric(params: &CycloidParams, x: Point) -> Point {
    Point::new(x.eta + params.beta(), x.xi - params.alpha())
}

/// Breadth-first closure of `params` under both shearings and the symmetric
/// move, up to `max_steps` transformation applications deep. Every member has
/// the same area as the seed.
pub fn iso_closure(params: &CycloidParams, max_steps: u32) -> BTreeSet<CycloidParams> {
    let mut seen: BTreeSet<CycloidParams> = BTreeSet::new();
    seen.insert(*params);
    let mut frontier = vec![*params];
    for _ in 0..max_steps {
        let mut next = Vec::new();
        for p in frontier {
            let mut candidates = vec![symmetric_params(&p)];
            // a guard or bounds failure just means the move is unavailable
            if let Ok(q) = shear(&p, ShearDirection::ReduceGamma) {
                candidates.push(q);
            }
            if let Ok(q) = shear(&p, ShearDirection::ReduceDelta) {
                candidates.push(q);
            }
            for q in candidates {
                if seen.insert(q) {
                    next.push(q);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// True when `p2` is reachable from `p1` within `max_steps` transformation
/// applications. `false` means "not shown isomorphic", not a refutation.
pub fn are_isomorphic_by_closure(
    p1: &CycloidParams,
    p2: &CycloidParams,
    max_steps: u32,
) -> bool {
    if p1.area() != p2.area() {
        return false;
    }
    iso_closure(p1, max_steps).contains(p2)
}

/// Settings for the exhaustive isomorphism search.
#[derive(Debug, Clone, Copy)]
pub struct IsoOptions {
    /// Refuse nets with more transitions than this.
    pub max_area: i64,
    /// Require forward places to map to forward places (and backward to
    /// backward). When false the matcher may pair them freely per transition.
    pub respect_place_kinds: bool,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            max_area: 30,
            respect_place_kinds: true,
        }
    }
}

/// Successor structure of a net, with transitions re-indexed densely.
struct TransGraph {
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    fwd_pre: Vec<Vec<usize>>,
    bwd_pre: Vec<Vec<usize>>,
}

impl TransGraph {
    fn new(net: &CycloidNet) -> Self {
        let index: std::collections::BTreeMap<TransitionId, usize> = net
            .transitions()
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i))
            .collect();
        let n = net.transitions().len();
        let mut fwd = vec![0; n];
        let mut bwd = vec![0; n];
        let mut fwd_pre = vec![Vec::new(); n];
        let mut bwd_pre = vec![Vec::new(); n];
        for (i, t) in net.transitions().iter().enumerate() {
            let f = index[&net.forward_successor(*t).expect("total successor map")];
            let b = index[&net.backward_successor(*t).expect("total successor map")];
            fwd[i] = f;
            bwd[i] = b;
            fwd_pre[f].push(i);
            bwd_pre[b].push(i);
        }
        TransGraph {
            fwd,
            bwd,
            fwd_pre,
            bwd_pre,
        }
    }

    fn len(&self) -> usize {
        self.fwd.len()
    }
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = perm[v];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

/// Visit order such that every vertex after the first touches an already
/// visited one, which lets the matcher prune on partial maps.
fn anchored_order(g: &TransGraph) -> Vec<usize> {
    let n = g.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut neighbors = vec![g.fwd[v], g.bwd[v]];
            neighbors.extend(g.fwd_pre[v].iter().copied());
            neighbors.extend(g.bwd_pre[v].iter().copied());
            for w in neighbors {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Decides whether the two nets admit a flow-preserving bijection, searching
/// exhaustively over transition maps with incremental consistency pruning.
pub fn net_isomorphic(n1: &CycloidNet, n2: &CycloidNet, opts: &IsoOptions) -> Result<bool> {
    for n in [n1, n2] {
        let area = n.transitions().len() as i64;
        if area > opts.max_area {
            return Err(CycloidError::AreaCapExceeded {
                area,
                cap: opts.max_area,
            });
        }
    }
    if n1.transitions().len() != n2.transitions().len() {
        return Ok(false);
    }
    let g1 = TransGraph::new(n1);
    let g2 = TransGraph::new(n2);
    if opts.respect_place_kinds {
        // orbits of each successor permutation are invariants
        if cycle_type(&g1.fwd) != cycle_type(&g2.fwd) || cycle_type(&g1.bwd) != cycle_type(&g2.bwd)
        {
            return Ok(false);
        }
    }
    let order = anchored_order(&g1);
    let mut map = vec![usize::MAX; g1.len()];
    let mut used = vec![false; g2.len()];
    Ok(extend(&g1, &g2, &order, 0, &mut map, &mut used, opts.respect_place_kinds))
}

const UNASSIGNED: usize = usize::MAX;

fn extend(
    g1: &TransGraph,
    g2: &TransGraph,
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
    respect_kinds: bool,
) -> bool {
    if pos == order.len() {
        return verify(g1, g2, map, respect_kinds);
    }
    let t = order[pos];
    for u in 0..g2.len() {
        if used[u] || !consistent(g1, g2, t, u, map, respect_kinds) {
            continue;
        }
        map[t] = u;
        used[u] = true;
        if extend(g1, g2, order, pos + 1, map, used, respect_kinds) {
            return true;
        }
        map[t] = UNASSIGNED;
        used[u] = false;
    }
    false
}

/// Checks the successor constraints at one source vertex, given a partial map.
fn source_ok(g1: &TransGraph, g2: &TransGraph, s: usize, map: &[usize], respect_kinds: bool) -> bool {
    let us = map[s];
    if us == UNASSIGNED {
        return true;
    }
    let pf = map[g1.fwd[s]];
    let pb = map[g1.bwd[s]];
    if respect_kinds {
        (pf == UNASSIGNED || pf == g2.fwd[us]) && (pb == UNASSIGNED || pb == g2.bwd[us])
    } else {
        // the image pair must match the successor pair of us, in either order
        let (tf, tb) = (g2.fwd[us], g2.bwd[us]);
        match (pf == UNASSIGNED, pb == UNASSIGNED) {
            (true, true) => true,
            (false, true) => pf == tf || pf == tb,
            (true, false) => pb == tf || pb == tb,
            (false, false) => (pf == tf && pb == tb) || (pf == tb && pb == tf),
        }
    }
}

fn consistent(
    g1: &TransGraph,
    g2: &TransGraph,
    t: usize,
    u: usize,
    map: &mut [usize],
    respect_kinds: bool,
) -> bool {
    map[t] = u;
    // the assignment affects t as a source and every assigned predecessor of t
    let mut ok = source_ok(g1, g2, t, map, respect_kinds);
    if ok {
        for &s in g1.fwd_pre[t].iter().chain(g1.bwd_pre[t].iter()) {
            if !source_ok(g1, g2, s, map, respect_kinds) {
                ok = false;
                break;
            }
        }
    }
    map[t] = UNASSIGNED;
    ok
}

fn verify(g1: &TransGraph, g2: &TransGraph, map: &[usize], respect_kinds: bool) -> bool {
    (0..g1.len()).all(|s| source_ok(g1, g2, s, map, respect_kinds))
}
