//! Cycloid nets: construction, equivalence, isomorphism and minimal cycles.
//!
//! A cycloid `C(α,β,γ,δ)` is the finite net obtained by folding an infinite
//! grid of transitions, each flanked by one forward and one backward place,
//! along the two directions `(α,−β)` and `(γ,δ)`. Four positive integers
//! determine the whole net: its `αδ + βγ` transitions, twice as many places,
//! and every arc.
//!
//! The crate keeps all lattice arithmetic exact ([`lattice`]), materializes
//! and validates the quotient net ([`net`]), plays the token game
//! ([`semantics`]), applies isomorphism-preserving parameter moves and
//! decides small-net isomorphism exhaustively ([`transforms`]), and computes
//! the minimal directed cycle length by independent methods that are checked
//! against each other ([`cycles`]). The `cycloid` binary in this crate
//! exposes all of it ([`cli`]).

pub mod cli;
pub mod cycles;
pub mod error;
pub mod lattice;
pub mod net;
pub mod rng;
pub mod semantics;
pub mod transforms;

pub use error::{CycloidError, Result};
pub use lattice::{Corners, CycloidParams, EquivalenceWitness, ParamVector, Point};
pub use net::{CycloidNet, NodeId, PlaceId, PlaceKind, TransitionId, Violation};
pub use semantics::Marking;
