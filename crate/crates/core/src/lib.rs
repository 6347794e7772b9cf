//! Coarse geometry on finite truncations.
//!
//! The crate builds the machinery for telling subsets of a countable group
//! apart up to coarse equivalence, with every check exact and finite:
//!
//! * [`ballean`] — truncated ball structures (metric and group flavored),
//!   ball calculus, axiom sampling, expansion moduli of bijections, and an
//!   exhaustive bounded-distortion search used as ground truth.
//! * [`adfamily`] — an almost disjoint family of subsets of the naturals,
//!   one per binary-tree branch, with exactly computable intersections.
//! * [`fingen`] — interval unions on the natural line selected by branch
//!   seeds, the geodesic-ray reduction from lattices, and the counting
//!   refuter producing non-equivalence certificates.
//! * [`locfin`] — block families inside an ambient locally finite group,
//!   the subgroup chain and translate allocation behind them, and the
//!   four-condition refuter.
//! * [`classify`] — decision procedures for asymorphism of locally finite
//!   sums and coarse equivalence of countable abelian groups, Smith normal
//!   form, and the subset taxonomy.
//! * [`certificate`] — versioned certificate files with canonical JSON and
//!   validation that recomputes instead of trusting.

pub mod adfamily;
pub mod ballean;
pub mod certificate;
pub mod classify;
pub mod error;
pub mod exact;
pub mod fingen;
pub mod locfin;
pub mod subset;

pub use error::{CoarseError, Result};
