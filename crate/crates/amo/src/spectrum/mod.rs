//! Numeric spectral engine for the almost Mathieu operator at rational
//! rotation number.
//!
//! The q x q matrix model h(z1, z2), its characteristic polynomial, the
//! discriminant by two independent routes (transfer matrices and periodic
//! continuants), coefficient checks against the frozen small-q expansions,
//! band computation by root isolation, and full butterfly sweeps.
//!
//! Precision policy: discriminant *coefficients* are always accumulated in
//! double-double and rounded once at the end, because the parity and
//! route-agreement tolerances are absolute while same-parity intermediate
//! terms grow combinatorially; the cost is negligible at desk scale.  Point
//! evaluation (band isolation, butterfly sweeps) runs in plain f64 by
//! default, with `AMO_PRECISION_BITS` as the escape hatch to double-double;
//! see [`spectrum_precision`].  Matrix factorizations (determinants,
//! Hessenberg reduction) use complex f64 throughout, which holds the stated
//! accuracy for q <= 64.

mod bands;
mod butterfly;
mod delta;
mod matrix;

pub use bands::bands;
pub use butterfly::{butterfly, render_csv, render_json, render_svg, ButterflyData, ButterflyRow};
pub use delta::{
    check_affine_dependence, coeff_check, constant_term_check, delta_continuant, delta_transfer,
    frozen_delta_coeffs_lambda2, global_coupling_sign, parity_defect, resolve_coupling_sign,
    xi_harmonic, xi_theta, AffineDependenceReport, CoeffReport, ConstantTermReport,
    CouplingSignReport, DeltaEvaluator,
};
pub use matrix::{build_h, charpoly, cpoly_eval, hermitian_eigenvalues, lu_det, CMat};

use crate::error::{Error, Result};
use crate::fp::Precision;
use serde::Serialize;

/// Working precision for spectral *point* evaluation: plain f64 unless
/// `AMO_PRECISION_BITS` asks for more.  Coefficient extraction ignores this
/// and always runs double-double internally (see the module docs).
pub fn spectrum_precision() -> Result<Precision> {
    Precision::from_env_or(Precision::F64)
}

/// A reduced rational rotation number p/q with 1 <= p < q and gcd(p, q) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RotationNumber {
    p: u32,
    q: u32,
}

impl RotationNumber {
    pub fn new(p: u32, q: u32) -> Result<RotationNumber> {
        if p < 1 || p >= q || num_integer::gcd(p, q) != 1 {
            return Err(Error::domain(format!(
                "rotation number needs 1 <= p < q with gcd(p, q) = 1, got {p}/{q}"
            )));
        }
        Ok(RotationNumber { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn theta(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl std::fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Parameters of the matrix model: rotation number, coupling, and the two
/// unit-modulus boundary phases.
#[derive(Clone, Copy, Debug)]
pub struct ModelParams {
    pub theta: RotationNumber,
    pub lambda: f64,
    pub z1: num_complex::Complex64,
    pub z2: num_complex::Complex64,
}

impl ModelParams {
    pub fn new(
        theta: RotationNumber,
        lambda: f64,
        z1: num_complex::Complex64,
        z2: num_complex::Complex64,
    ) -> Result<ModelParams> {
        if !(lambda > 0.0) {
            return Err(Error::domain(format!("coupling must be positive, got {lambda}")));
        }
        for (name, z) in [("z1", z1), ("z2", z2)] {
            if (z.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::domain(format!(
                    "{name} must lie on the unit circle to 1e-12, got |{name}| = {}",
                    z.norm()
                )));
            }
        }
        Ok(ModelParams { theta, lambda, z1, z2 })
    }

    /// Phases given in turns: z_j = exp(2 pi i angle_j).
    pub fn from_angles(
        theta: RotationNumber,
        lambda: f64,
        angle1: f64,
        angle2: f64,
    ) -> Result<ModelParams> {
        let z = |a: f64| {
            let t = 2.0 * std::f64::consts::PI * a;
            num_complex::Complex64::new(t.cos(), t.sin())
        };
        ModelParams::new(theta, lambda, z(angle1), z(angle2))
    }

    /// The periodic point z1 = z2 = 1.
    pub fn periodic(theta: RotationNumber, lambda: f64) -> Result<ModelParams> {
        ModelParams::new(
            theta,
            lambda,
            num_complex::Complex64::new(1.0, 0.0),
            num_complex::Complex64::new(1.0, 0.0),
        )
    }
}

/// Dense real polynomial, coefficients ascending by degree.  Discriminants
/// and characteristic polynomials stored here are monic of degree q.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn from_coeffs(coeffs: Vec<f64>) -> RealPoly {
        assert!(!coeffs.is_empty(), "use a single zero for the zero polynomial");
        RealPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of x^k, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn max_coeff_deviation(&self, other: &RealPoly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).fold(0.0f64, |m, k| m.max((self.coeff(k) - other.coeff(k)).abs()))
    }

    /// Horner evaluation.  Fine for display and for small degrees; the band
    /// code never uses it because coefficient-form evaluation cancels
    /// catastrophically at large q (see [`DeltaEvaluator`]).
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Derivative, one degree down.
    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() == 1 {
            return RealPoly { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        RealPoly { coeffs }
    }

    /// Human-readable form, highest degree first, with integer-valued
    /// coefficients printed as integers: "x^4 - 8x^2 + 4".
    pub fn display_string(&self) -> String {
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            let mag = c.abs();
            let first = out.is_empty();
            if first {
                if c < 0.0 {
                    out.push('-');
                }
            } else if c < 0.0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_str = if mag.fract() == 0.0 && mag < 1e15 {
                format!("{}", mag as i64)
            } else {
                format!("{mag}")
            };
            match k {
                0 => out.push_str(&coeff_str),
                _ => {
                    if mag != 1.0 {
                        out.push_str(&coeff_str);
                    }
                    if k == 1 {
                        out.push('x');
                    } else {
                        out.push_str(&format!("x^{k}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The spectrum at one rotation number: q closed bands, sorted, possibly
/// sharing endpoints but never overlapping with positive length.
#[derive(Clone, Debug, Serialize)]
pub struct BandList {
    intervals: Vec<[f64; 2]>,
    theta: RotationNumber,
    lambda: f64,
    flags: Vec<String>,
}

impl BandList {
    pub(crate) fn new(
        intervals: Vec<[f64; 2]>,
        theta: RotationNumber,
        lambda: f64,
        flags: Vec<String>,
    ) -> BandList {
        debug_assert!(intervals.iter().all(|iv| iv[0] <= iv[1]));
        debug_assert!(intervals.windows(2).all(|w| w[0][1] <= w[1][0]));
        BandList { intervals, theta, lambda, flags }
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn theta(&self) -> RotationNumber {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Touching-band and diagnostic notes; empty for a clean row.
    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    /// Largest |[lo, hi] + reversed [hi, lo]| mismatch against the negated,
    /// reversed band set; the spectrum is symmetric under x -> -x, so this
    /// measures numeric drift.
    pub fn negation_defect(&self) -> f64 {
        let n = self.intervals.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            let a = self.intervals[i];
            let b = self.intervals[n - 1 - i];
            worst = worst.max((a[0] + b[1]).abs()).max((a[1] + b[0]).abs());
        }
        worst
    }
}
