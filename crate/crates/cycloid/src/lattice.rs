//! Exact integer arithmetic over the cycloid lattice.
//!
//! A cycloid `C(α,β,γ,δ)` folds the infinite coordinate grid by identifying
//! every point `x` with `x + m·(α,−β) + n·(γ,δ)` for all integers `m`, `n`.
//! The two generators are the columns of the fold matrix
//!
//! ```text
//!     | α   γ |                       | δ  −γ |
//! M = |       |   with adjugate   N = |       |   and det(M) = A = αδ + βγ.
//!     | −β  δ |                       | β   α |
//! ```
//!
//! Two points are equivalent exactly when `N·(x2 − x1)` is divisible by the
//! area `A` in both components; the quotient of the division is the unique
//! integer witness pair `(m, n)`.
//!
//! Every equivalence class has one representative in the half-open
//! fundamental parallelogram `{ s·(α,−β) + t·(γ,δ) | s, t ∈ [0,1) }`. The
//! half-open convention is a deliberate choice: the two edges through the
//! origin belong to the domain, the far corners and far edges do not, so the
//! representative is unique.
//!
//! All arithmetic is exact. Products are taken in `i128`, divisions floor
//! toward negative infinity (`a mod b = a − b·⌊a/b⌋`, also for negative `a`),
//! and no floating point is ever consulted for an equivalence decision.
//! All values are immutable; every operation here is pure.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use crate::error::{CycloidError, Result};

/// Largest admissible value for each of the four fold parameters.
///
/// Keeps the area `A ≤ 2·10¹²` and every intermediate product within `i128`
/// for arbitrary `i64` point coordinates.
pub const MAX_PARAM: i64 = 1_000_000;

/// A grid point `(ξ, η)` of the unfolded coordinate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub xi: i64,
    pub eta: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { xi: 0, eta: 0 };

    pub fn new(xi: i64, eta: i64) -> Self {
        Point { xi, eta }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.xi, self.eta)
    }
}

impl FromStr for Point {
    type Err = CycloidError;

    /// Parses the bare `ξ,η` form used in node keys and markings.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CycloidError::InvalidNet(format!("malformed coordinate pair '{s}'"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let xi = a.trim().parse().map_err(|_| bad())?;
        let eta = b.trim().parse().map_err(|_| bad())?;
        Ok(Point { xi, eta })
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.xi + rhs.xi, self.eta + rhs.eta)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.xi - rhs.xi, self.eta - rhs.eta)
    }
}

/// The four fold parameters of a cycloid, validated to be positive and
/// within [`MAX_PARAM`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloidParams {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

/// Exact value of `N·v / A`: a pair of rationals sharing the denominator `A`.
///
/// Numerators are kept unreduced so integrality and floor tests stay plain
/// integer divisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamVector {
    first_num: i128,
    second_num: i128,
    denom: i128,
}

impl ParamVector {
    /// Numerators over the common denominator, in order (first, second).
    pub fn numerators(&self) -> (i128, i128) {
        (self.first_num, self.second_num)
    }

    /// The common denominator (always the area, positive).
    pub fn denominator(&self) -> i128 {
        self.denom
    }

    /// True when both components are integers.
    pub fn is_integral(&self) -> bool {
        self.first_num % self.denom == 0 && self.second_num % self.denom == 0
    }

    /// Componentwise floor toward negative infinity.
    pub fn floor(&self) -> (i128, i128) {
        (
            self.first_num.div_euclid(self.denom),
            self.second_num.div_euclid(self.denom),
        )
    }

    /// Both components reduced to lowest terms, as (numerator, denominator).
    pub fn reduced(&self) -> ((i128, i128), (i128, i128)) {
        (
            reduce(self.first_num, self.denom),
            reduce(self.second_num, self.denom),
        )
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((n1, d1), (n2, d2)) = self.reduced();
        let part = |n: i128, d: i128| {
            if d == 1 {
                format!("{n}")
            } else {
                format!("{n}/{d}")
            }
        };
        write!(f, "({},{})", part(n1, d1), part(n2, d2))
    }
}

fn reduce(num: i128, den: i128) -> (i128, i128) {
    let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
    (num / g, den / g)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Integer pair `(m, n)` with `x2 − x1 = m·(α,−β) + n·(γ,δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub m: i64,
    pub n: i64,
}

/// Corners of the fundamental parallelogram.
///
/// `o` and the edges toward `p` and `q` carry representatives; `p`, `q`, `r`
/// themselves are already folded back onto other points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corners {
    pub o: Point,
    pub p: Point,
    pub r: Point,
    pub q: Point,
}

impl CycloidParams {
    /// Validates and stores the four fold parameters.
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        Self::with_max(alpha, beta, gamma, delta, MAX_PARAM)
    }

    /// Like [`CycloidParams::new`] with a tighter entry bound; [`MAX_PARAM`]
    /// stays the hard ceiling because the overflow analysis depends on it.
    pub fn with_max(alpha: i64, beta: i64, gamma: i64, delta: i64, max: i64) -> Result<Self> {
        let max = max.min(MAX_PARAM);
        for (name, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if value < 1 {
                return Err(CycloidError::NonPositiveParam { name, value });
            }
            if value > max {
                return Err(CycloidError::ParamTooLarge { name, value, max });
            }
        }
        Ok(CycloidParams {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn as_tuple(&self) -> (i64, i64, i64, i64) {
        (self.alpha, self.beta, self.gamma, self.delta)
    }

    /// Number of transition classes: `A = αδ + βγ`, the determinant of the
    /// fold matrix.
    pub fn area(&self) -> i64 {
        // entries ≤ MAX_PARAM keep this well inside i64
        self.alpha * self.delta + self.beta * self.gamma
    }

    /// `β | δ`: the time fold is a multiple of the space fold.
    pub fn is_regular(&self) -> bool {
        self.delta % self.beta == 0
    }

    /// `α | γ`: the mirrored divisibility.
    pub fn is_coregular(&self) -> bool {
        self.gamma % self.alpha == 0
    }

    /// The lattice point `m·(α,−β) + n·(γ,δ)`.
    pub fn lattice_point(&self, m: i64, n: i64) -> Point {
        let xi = (m as i128) * (self.alpha as i128) + (n as i128) * (self.gamma as i128);
        let eta = -(m as i128) * (self.beta as i128) + (n as i128) * (self.delta as i128);
        Point::new(
            xi.try_into().expect("lattice point exceeds i64"),
            eta.try_into().expect("lattice point exceeds i64"),
        )
    }

    /// Coordinates of the difference vector `v` in the fold basis:
    /// `((δ·vξ − γ·vη)/A, (β·vξ + α·vη)/A)`, exact.
    pub fn param_vector(&self, v: Point) -> ParamVector {
        let (al, be, ga, de) = (
            self.alpha as i128,
            self.beta as i128,
            self.gamma as i128,
            self.delta as i128,
        );
        let (vx, vy) = (v.xi as i128, v.eta as i128);
        ParamVector {
            first_num: de * vx - ga * vy,
            second_num: be * vx + al * vy,
            denom: self.area() as i128,
        }
    }

    /// Integer witness `(m, n)` with `x2 − x1 = m·(α,−β) + n·(γ,δ)`, when the
    /// two points are in the same fold class.
    pub fn equivalence_witness(&self, x1: Point, x2: Point) -> Option<EquivalenceWitness> {
        let pv = self.param_vector(x2 - x1);
        if !pv.is_integral() {
            return None;
        }
        let (m, n) = (pv.first_num / pv.denom, pv.second_num / pv.denom);
        Some(EquivalenceWitness {
            m: m.try_into().expect("equivalence witness exceeds i64"),
            n: n.try_into().expect("equivalence witness exceeds i64"),
        })
    }

    /// True when `x1` and `x2` fold onto the same point.
    pub fn equivalent(&self, x1: Point, x2: Point) -> bool {
        self.param_vector(x2 - x1).is_integral()
    }

    /// True when `x` lies in the half-open fundamental parallelogram, i.e.
    /// both basis coordinates of `x` are in `[0, 1)`.
    pub fn in_fundamental(&self, x: Point) -> bool {
        let pv = self.param_vector(x);
        let a = pv.denom;
        (0..a).contains(&pv.first_num) && (0..a).contains(&pv.second_num)
    }

    /// The unique representative of `x`'s fold class inside the fundamental
    /// parallelogram. Idempotent, and constant on each class.
    pub fn canonical(&self, x: Point) -> Point {
        let (f1, f2) = self.param_vector(x).floor();
        let (al, be, ga, de) = (
            self.alpha as i128,
            self.beta as i128,
            self.gamma as i128,
            self.delta as i128,
        );
        let xi = x.xi as i128 - (f1 * al + f2 * ga);
        let eta = x.eta as i128 - (-f1 * be + f2 * de);
        Point::new(
            xi.try_into().expect("canonical representative fits i64"),
            eta.try_into().expect("canonical representative fits i64"),
        )
    }

    /// Corner coordinates of the fundamental parallelogram.
    pub fn corners(&self) -> Corners {
        Corners {
            o: Point::ORIGIN,
            p: Point::new(self.alpha, -self.beta),
            r: Point::new(self.alpha + self.gamma, self.delta - self.beta),
            q: Point::new(self.gamma, self.delta),
        }
    }
}

impl fmt::Display for CycloidParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "C({},{},{},{})",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn params(a: i64, b: i64, g: i64, d: i64) -> CycloidParams {
        CycloidParams::new(a, b, g, d).unwrap()
    }

    /// Independent oracle: exhaustive witness search over a bounded window.
    fn witness_search(p: &CycloidParams, v: Point, bound: i64) -> Option<(i64, i64)> {
        for m in -bound..=bound {
            for n in -bound..=bound {
                if p.lattice_point(m, n) == v {
                    return Some((m, n));
                }
            }
        }
        None
    }

    #[test]
    fn area_examples() {
        assert_eq!(params(4, 3, 3, 3).area(), 21);
        assert_eq!(params(1, 1, 1, 1).area(), 2);
        assert_eq!(params(4, 2, 2, 3).area(), 16);
    }

    #[test]
    fn params_validation() {
        assert!(CycloidParams::new(0, 1, 1, 1).is_err());
        assert!(CycloidParams::new(1, -3, 1, 1).is_err());
        assert!(CycloidParams::new(1, 1, MAX_PARAM + 1, 1).is_err());
        assert!(CycloidParams::new(MAX_PARAM, MAX_PARAM, MAX_PARAM, MAX_PARAM).is_ok());
        assert!(CycloidParams::with_max(4, 2, 2, 3, 3).is_err());
        assert!(CycloidParams::with_max(3, 2, 2, 3, 3).is_ok());
    }

    #[test]
    fn param_vector_examples() {
        let p = params(4, 2, 2, 3);
        // hand matrix multiply: N·(4,−2) = (16,0), A = 16
        let pv = p.param_vector(Point::new(4, -2));
        assert_eq!(pv.numerators(), (16, 0));
        assert!(pv.is_integral());
        assert_eq!(pv.floor(), (1, 0));

        let zero = p.param_vector(Point::ORIGIN);
        assert_eq!(zero.numerators(), (0, 0));
        assert!(zero.is_integral());

        // N·(5,−1) = (17,6)
        let pv = p.param_vector(Point::new(5, -1));
        assert_eq!(pv.numerators(), (17, 6));
        assert_eq!(pv.denominator(), 16);
        assert!(!pv.is_integral());
        assert_eq!(pv.reduced(), ((17, 16), (3, 8)));
    }

    #[test]
    fn equivalence_examples() {
        let p = params(4, 2, 2, 3);
        // the two fused transitions from the traffic-queue construction
        assert!(p.equivalent(Point::new(5, -1), Point::new(1, 1)));
        let w = p
            .equivalence_witness(Point::new(5, -1), Point::new(1, 1))
            .unwrap();
        assert_eq!(p.lattice_point(w.m, w.n), Point::new(1, 1) - Point::new(5, -1));
        assert_eq!((w.m, w.n), (-1, 0));

        let x = Point::new(7, -3);
        let w = p.equivalence_witness(x, x).unwrap();
        assert_eq!((w.m, w.n), (0, 0));

        assert!(!p.equivalent(Point::ORIGIN, Point::new(1, 0)));
        assert_eq!(witness_search(&p, Point::new(1, 0), 10), None);
    }

    #[test]
    fn in_fundamental_examples() {
        let p = params(4, 2, 2, 3);
        assert!(p.in_fundamental(Point::ORIGIN));
        // corner P is folded out by the half-open convention
        assert!(!p.in_fundamental(Point::new(4, -2)));
        assert!(p.in_fundamental(Point::new(1, 1)));
    }

    #[test]
    fn canonical_examples() {
        let p = params(4, 2, 2, 3);
        assert_eq!(p.canonical(Point::new(5, -1)), Point::new(1, 1));
        assert_eq!(p.canonical(Point::ORIGIN), Point::ORIGIN);
        assert_eq!(p.canonical(Point::new(4, -2)), Point::ORIGIN);
        assert!(p.equivalent(Point::new(4, -2), Point::ORIGIN));
    }

    #[test]
    fn corners_examples() {
        let c = params(4, 2, 2, 3).corners();
        assert_eq!(c.o, Point::new(0, 0));
        assert_eq!(c.p, Point::new(4, -2));
        assert_eq!(c.r, Point::new(6, 1));
        assert_eq!(c.q, Point::new(2, 3));

        let c = params(1, 1, 1, 1).corners();
        assert_eq!(
            (c.o, c.p, c.r, c.q),
            (
                Point::new(0, 0),
                Point::new(1, -1),
                Point::new(2, 0),
                Point::new(1, 1)
            )
        );

        let c = params(2, 3, 2, 8).corners();
        assert_eq!(
            (c.o, c.p, c.r, c.q),
            (
                Point::new(0, 0),
                Point::new(2, -3),
                Point::new(4, 5),
                Point::new(2, 8)
            )
        );
    }

    #[test]
    fn fundamental_point_count_equals_area() {
        // every class has exactly one representative, so scanning a box that
        // covers the parallelogram must find area-many points
        for a in 1..=6 {
            for b in 1..=6 {
                for g in 1..=6 {
                    for d in 1..=6 {
                        let p = params(a, b, g, d);
                        let mut count = 0;
                        for xi in -g..=(a + g) {
                            for eta in -b..=(b + d) {
                                if p.in_fundamental(Point::new(xi, eta)) {
                                    count += 1;
                                }
                            }
                        }
                        assert_eq!(count, p.area(), "count mismatch for {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_relation_laws() {
        let cases = [params(4, 2, 2, 3), params(1, 1, 1, 1), params(3, 5, 2, 7)];
        let mut rng = SplitMix64::new(0xC0FFEE);
        for p in cases {
            for _ in 0..1000 {
                let pt = |rng: &mut SplitMix64| {
                    Point::new(rng.range_i64(-50, 50), rng.range_i64(-50, 50))
                };
                let x = pt(&mut rng);
                let y = pt(&mut rng);
                let z = pt(&mut rng);
                assert!(p.equivalent(x, x));
                assert_eq!(p.equivalent(x, y), p.equivalent(y, x));
                if p.equivalent(x, y) && p.equivalent(y, z) {
                    assert!(p.equivalent(x, z));
                }
                // canonical() is constant exactly on classes
                assert_eq!(p.equivalent(x, y), p.canonical(x) == p.canonical(y));
                assert_eq!(p.canonical(p.canonical(x)), p.canonical(x));
                assert!(p.in_fundamental(p.canonical(x)));
            }
        }
    }

    #[test]
    fn witness_search_agrees_with_integrality_test() {
        // The bounded search is complete only while the true witness lies in
        // its window, so the positive direction is checked by exact
        // multiplication instead whenever the witness is out of range.
        let mut rng = SplitMix64::new(42);
        for _ in 0..2000 {
            let p = params(
                rng.range_i64(1, 6),
                rng.range_i64(1, 6),
                rng.range_i64(1, 6),
                rng.range_i64(1, 6),
            );
            let s = p.alpha() + p.beta() + p.gamma() + p.delta();
            let x1 = Point::new(rng.range_i64(-4 * s, 4 * s), rng.range_i64(-4 * s, 4 * s));
            let x2 = Point::new(rng.range_i64(-4 * s, 4 * s), rng.range_i64(-4 * s, 4 * s));
            let v = x2 - x1;
            let found = witness_search(&p, v, 10);
            match p.equivalence_witness(x1, x2) {
                Some(w) => {
                    assert_eq!(p.lattice_point(w.m, w.n), v);
                    if w.m.abs() <= 10 && w.n.abs() <= 10 {
                        assert_eq!(found, Some((w.m, w.n)));
                    }
                }
                None => assert_eq!(found, None),
            }
        }
    }

    proptest! {
        #[test]
        fn basis_coordinates_roundtrip(
            a in 1i64..=9, b in 1i64..=9, g in 1i64..=9, d in 1i64..=9,
            m in -5i64..=5, n in -5i64..=5,
        ) {
            let p = params(a, b, g, d);
            let v = p.lattice_point(m, n);
            let pv = p.param_vector(v);
            prop_assert!(pv.is_integral());
            let (mm, nn) = (pv.numerators().0 / pv.denominator(), pv.numerators().1 / pv.denominator());
            prop_assert_eq!((mm, nn), (m as i128, n as i128));
        }

        #[test]
        fn canonical_is_class_representative(
            a in 1i64..=8, b in 1i64..=8, g in 1i64..=8, d in 1i64..=8,
            xi in -100i64..=100, eta in -100i64..=100,
        ) {
            let p = params(a, b, g, d);
            let x = Point::new(xi, eta);
            let c = p.canonical(x);
            prop_assert!(p.in_fundamental(c));
            prop_assert!(p.equivalent(x, c));
            prop_assert_eq!(p.canonical(c), c);
        }
    }
}
