//! Exact verification of the trigonometric-product identity grid.
//!
//! Everything here manipulates the atoms f_i = x^-i + x^i and
//! g_i = x^-i - x^i symbolically: the checkers in [`checks`] establish each
//! closed form as an identity of rational functions, valid for every x at
//! once, not just at sampled points.  Each check yields an
//! [`IdentityReport`] whose verdict is exact: `ExactPass` means the
//! cross-multiplied difference is the zero polynomial, `ExactFail` comes
//! with a nonzero witness term.

mod checks;
mod engine;

pub use checks::{
    check_bordered_nested_sum,
    check_cycle_complement_bridge,
    check_inverse_product_split,
    check_nested_sum,
    check_nested_sum_difference,
    check_telescoping_pair_sum,
    check_windowed_pair_sum,
    default_suite,
    SuiteGrid,
};
pub use engine::{nested_sum, Atom, Expr, Exprs};

use serde::Serialize;

/// Outcome of one exact identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Cross-multiplied difference is identically zero.
    ExactPass,
    /// A nonzero difference was found; the report carries a witness.
    ExactFail,
    /// The parameters fall outside the identity's stated range, so no
    /// claim is made (recorded, never counted as a failure).
    OutOfStatedRange,
}

/// Result of checking one identity instance (or one randomized batch).
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    /// Which identity was checked, named by its shape.
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    pub verdict: Verdict,
    /// On failure, a human-readable nonzero residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Conventions this checker fixes where printed variants of the formula
    /// differ (sign of a constant, range of a product index, and so on).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub resolved_typos: Vec<String>,
    /// RNG seed for randomized checks; absent for fully symbolic ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of random trials behind the verdict, when randomized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
}

impl IdentityReport {
    fn symbolic(name: &str, k: impl Into<Option<u32>>, q: impl Into<Option<u32>>) -> Self {
        IdentityReport {
            name: name.to_string(),
            k: k.into(),
            q: q.into(),
            verdict: Verdict::ExactPass,
            witness: None,
            resolved_typos: Vec::new(),
            seed: None,
            trials: None,
        }
    }

    fn fail(mut self, witness: String) -> Self {
        self.verdict = Verdict::ExactFail;
        self.witness = Some(witness);
        self
    }

    fn note(mut self, convention: &str) -> Self {
        self.resolved_typos.push(convention.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::ExactFail
    }
}

/// True when no report in the slice failed.
pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::passed)
}
