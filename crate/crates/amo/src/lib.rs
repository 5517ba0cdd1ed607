//! Spectra of the almost Mathieu operator at rational rotation number,
//! together with exact mechanical verification of the continuant and
//! cyclotomic identities the spectral computation rests on.
//!
//! The crate is organized in layers:
//!
//! * [`exactfield`]: rationals, Laurent polynomials, canonical rational
//!   functions, cyclotomic residue rings.  All "holds exactly" claims bottom
//!   out here.
//! * [`ring`]: a small context-object ring trait so the same recurrences run
//!   over any of those coefficient types.
//! * [`combinatorics`]: the index families obtained by deleting disjoint
//!   adjacent pairs from a path or a cycle, with their joins and recurrences.
//! * [`continuants`]: continuants, their periodic variants, expansions over
//!   the index families, and the exact vanishing theorem for cosine
//!   diagonals.
//! * [`identities`]: the ladder of trigonometric product/sum identities,
//!   verified as rational-function identities with exact equality.
//! * [`spectrum`]: the operator itself: discriminant, characteristic
//!   polynomial, band edges, butterfly sweeps, coefficient checks.

pub mod combinatorics;
pub mod continuants;
pub mod error;
pub mod exactfield;
pub mod fp;
pub mod identities;
pub mod ring;
pub mod spectrum;

pub use error::{Error, Result};
