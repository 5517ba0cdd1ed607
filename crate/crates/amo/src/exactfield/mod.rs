//! Exact arithmetic: rationals, Laurent and ordinary polynomials, canonical
//! rational functions, and the cyclotomic residue rings.
//!
//! Everything downstream that claims an identity "holds exactly" reduces to
//! an equality test in one of these types.

pub mod bigq;
pub mod cyclo;
pub mod laurent;
pub mod poly;
pub mod ratfn;

pub use bigq::{bigq, bigq_pow, bigq_ratio, bigq_to_f64, BigQ, RationalSampler};
pub use cyclo::{cyclo_cos_term, cyclotomic_poly, CycloElement};
pub use laurent::LaurentPoly;
pub use poly::{qpoly_gcd, QPoly, ZPoly};
pub use ratfn::RationalFunction;
