//! Exact numerical invariants of Fano 3-folds with terminal quotient
//! singularities, and certificate checking for the birational bookkeeping
//! built on them.
//!
//! The crate has five layers, each usable on its own:
//!
//! - [`rr`]: orbifold Riemann-Roch over the rationals — anticanonical
//!   degrees, genera and Hilbert sequences of a Fano 3-fold from its genus
//!   and basket of quotient singularities.
//! - [`families`]: Hilbert series of weighted hypersurfaces and
//!   codimension-2 weighted complete intersections, well-formedness, and
//!   the invariant-matching search recovering candidate families from
//!   target numerics.
//! - [`links`]: degree bookkeeping of Sarkisov links of Type II —
//!   divisorial extraction data, anticanonical degree drops, and
//!   end-to-end link verification.
//! - [`exclusion`]: the inequality engine for excluding maximal centers —
//!   adjunction self-intersections, nef-quadratic multiplicity bounds,
//!   two-curve-germ thresholds, component pairing bounds, and exact
//!   discriminant infeasibility certificates.
//! - [`catalog`]: the built-in regression corpus (every variety, link,
//!   blowup and exclusion case the toolkit is pinned against), plus a JSON
//!   file format for user-supplied catalogs.
//!
//! All arithmetic is exact rational ([`rat::Rat`]); integrality of a value
//! is itself a checkable property, never an assumption.

// error enums carry exact rationals for reporting; two of them cross
// clippy's 128-byte threshold
#![allow(clippy::result_large_err)]

pub mod catalog;
pub mod exclusion;
pub mod families;
pub mod links;
pub mod rat;
pub mod rr;

pub use rat::{rat, rint, QuadRoot, Rat};
