//! Spectral bands from the two boundary-condition eigenproblems.
//!
//! The spectrum at p/q is the preimage Delta^-1([-c, c]) with c =
//! 2 (1 + mu^q).  Its 2q edges are the roots of Delta - c and Delta + c,
//! and those are exactly the eigenvalues of the Hermitian matrices
//! h(1, 1) (Delta = +c) and h(z, z) with z = exp(i pi / q) (Delta = -c).
//! Both eigenproblems are perfectly conditioned, return exactly q real
//! values each, and need no root isolation even where bands cluster far
//! below f64 resolution, which defeats any grid-based search.  Pairing
//! the 2q sorted edges yields the q bands; every edge is then certified
//! against the independent transfer-product evaluator with a backward
//! error scaled by max(1, c, |Delta'|), and a violation is recorded as an
//! "error:" flag rather than a lost band.

use super::delta::DeltaEvaluator;
use super::matrix::{build_h, hermitian_eigenvalues};
use super::{BandList, ModelParams, RotationNumber};
use crate::error::{Error, Result};
use crate::fp::Precision;
use num_complex::Complex64;

/// The q spectral bands at one rotation number, sorted ascending, possibly
/// sharing endpoints.  Edges sit within [-(2 + lambda), 2 + lambda] by
/// Gershgorin; shared endpoints are snapped bitwise and flagged
/// "touching@...", certification failures are flagged "error: ...".
pub fn bands(theta: &RotationNumber, lambda: f64) -> Result<BandList> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("coupling must be positive, got {lambda}")));
    }
    let q = theta.q() as usize;
    let c = 2.0 * (1.0 + (lambda / 2.0).powi(theta.q() as i32));
    let periodic = ModelParams::periodic(*theta, lambda)?;
    let angle = std::f64::consts::PI / theta.q() as f64;
    let z = Complex64::new(angle.cos(), angle.sin());
    let anti = ModelParams::new(*theta, lambda, z, z)?;

    // Row sums bound every eigenvalue by lambda |cos| + 2, so anything the
    // solver reports beyond that is roundoff to trim.
    let bound = 2.0 + lambda;
    let mut edges: Vec<(f64, f64)> = Vec::with_capacity(2 * q);
    for (params, target) in [(&periodic, c), (&anti, -c)] {
        for e in hermitian_eigenvalues(&build_h(params)) {
            edges.push((e.clamp(-bound, bound), target));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));

    // The band set is exactly symmetric under x -> -x (Delta(-x) =
    // (-1)^q Delta(x)), so project the sorted edges onto the symmetric
    // configuration; solver noise is halved and the center lands on 0
    // bitwise.  Certification below still checks the projected values.
    for i in 0..q {
        let v = 0.5 * (edges[i].0 - edges[2 * q - 1 - i].0);
        edges[i].0 = v;
        edges[2 * q - 1 - i].0 = -v;
    }

    let mut intervals: Vec<[f64; 2]> = edges.chunks(2).map(|w| [w[0].0, w[1].0]).collect();
    let mut flags = Vec::new();

    // A gap at eigenvalue-noise scale is a shared edge: snap both bands to
    // the midpoint bitwise, as the gap is closed in exact arithmetic.
    let snap = 32.0 * f64::EPSILON;
    for i in 0..intervals.len().saturating_sub(1) {
        let r = intervals[i][1];
        let l = intervals[i + 1][0];
        if l - r <= snap * r.abs().max(1.0) {
            let m = 0.5 * (r + l);
            intervals[i][1] = m;
            intervals[i + 1][0] = m;
            flags.push(format!("touching@{m:.12e} (bands {i} and {})", i + 1));
        }
    }

    // Certification must resolve |Delta(e) - target| at absolute scale
    // c * 1e-8 even where Delta' vanishes (touching edges), which sits
    // below f64 transfer noise for q in the twenties; the few 2q jet
    // evaluations are cheap enough to always run double-double.
    let ev = DeltaEvaluator::with_precision(theta, lambda, Precision::DoubleDouble);
    for &(e, target) in &edges {
        let (v, s) = ev.jet(e);
        let resid = (v - target).abs() / c.max(1.0).max(s.abs());
        if resid > 1e-8 {
            flags.push(format!("error: edge residual {resid:.3e} at x = {e:.6}"));
        }
    }

    Ok(BandList::new(intervals, *theta, lambda, flags))
}

#[cfg(test)]
mod tests {
    use super::*;


    fn theta(p: u32, q: u32) -> RotationNumber {
        RotationNumber::new(p, q).unwrap()
    }

    #[test]
    fn two_bands_touch_at_zero_for_any_coupling() {
        // q = 2: Delta + c = x^2 exactly, so the bands always share x = 0.
        for (lambda, outer) in [(2.0, 8f64.sqrt()), (1.0, 5f64.sqrt())] {
            let b = bands(&theta(1, 2), lambda).unwrap();
            let iv = b.intervals();
            assert_eq!(iv.len(), 2);
            assert!(iv[0][1] == iv[1][0], "expected a shared endpoint, got {iv:?}");
            assert!(iv[0][1].abs() < 1e-12);
            assert!((iv[0][0] + outer).abs() < 1e-12, "lambda={lambda}");
            assert!((iv[1][1] - outer).abs() < 1e-12, "lambda={lambda}");
            assert_eq!(b.flags().len(), 1);
            assert!(b.flags()[0].starts_with("touching@"), "{:?}", b.flags());
        }
    }

    #[test]
    fn three_band_edges_in_closed_form() {
        // q = 3, lambda = 2: Delta - 4 = (x + 2)(x^2 - 2x - 2) and
        // Delta + 4 = (x - 2)(x^2 + 2x - 2).
        let b = bands(&theta(1, 3), 2.0).unwrap();
        let iv = b.intervals();
        let r3 = 3f64.sqrt();
        let want = [[-1.0 - r3, -2.0], [1.0 - r3, -1.0 + r3], [2.0, 1.0 + r3]];
        assert_eq!(iv.len(), 3);
        for (got, want) in iv.iter().zip(&want) {
            assert!((got[0] - want[0]).abs() < 1e-12, "{iv:?}");
            assert!((got[1] - want[1]).abs() < 1e-12, "{iv:?}");
        }
        assert!(b.flags().is_empty());
    }

    #[test]
    fn edges_satisfy_the_edge_equation_in_double_double() {
        // Every edge must be a root of Delta -+ c under the transfer-product
        // evaluator, a route fully independent of the eigensolver.
        for (p, q) in [(2u32, 5u32), (3, 8), (2, 11)] {
            let t = theta(p, q);
            let b = bands(&t, 2.0).unwrap();
            let ev = DeltaEvaluator::with_precision(&t, 2.0, Precision::DoubleDouble);
            let c = 4.0f64;
            for iv in b.intervals() {
                for &e in iv {
                    let (v, s) = ev.jet(e);
                    let resid = (v.abs() - c).abs() / c.max(s.abs());
                    assert!(resid < 1e-10, "p={p} q={q} edge {e}: residual {resid:.3e}");
                }
            }
        }
    }

    #[test]
    fn clustered_rows_isolate_cleanly() {
        // Near theta = 0 the bands cluster with gaps far below f64
        // resolution; the eigenvalue route must still deliver exactly q
        // certified bands.
        for (p, q) in [(2u32, 23u32), (3, 37), (3, 50)] {
            let b = bands(&theta(p, q), 2.0).unwrap();
            assert_eq!(b.intervals().len(), q as usize, "p={p} q={q}");
            assert!(
                !b.flags().iter().any(|f| f.starts_with("error:")),
                "p={p} q={q}: {:?}",
                b.flags()
            );
            assert!(b.negation_defect() < 1e-8, "p={p} q={q}");
        }
    }

    #[test]
    fn band_grid_properties() {
        for q in 2..=20u32 {
            for p in 1..q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for lambda in [1.0, 2.0, 3.0] {
                    let b = bands(&theta(p, q), lambda).unwrap();
                    let iv = b.intervals();
                    assert_eq!(iv.len(), q as usize, "q={q} p={p} lambda={lambda}");
                    let e = 2.0 + lambda;
                    for w in iv {
                        assert!(w[0] <= w[1]);
                        assert!(w[0] >= -e && w[1] <= e, "q={q} p={p} lambda={lambda}: {w:?}");
                    }
                    for w in iv.windows(2) {
                        assert!(w[0][1] <= w[1][0]);
                    }
                    assert!(
                        !b.flags().iter().any(|f| f.starts_with("error:")),
                        "q={q} p={p} lambda={lambda}: {:?}",
                        b.flags()
                    );
                    assert!(
                        b.negation_defect() < 1e-8,
                        "q={q} p={p} lambda={lambda}: {:.3e}",
                        b.negation_defect()
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive_coupling() {
        assert!(bands(&theta(1, 3), 0.0).is_err());
        assert!(bands(&theta(1, 3), -2.0).is_err());
    }
}
