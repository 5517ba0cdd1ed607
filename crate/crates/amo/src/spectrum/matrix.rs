//! Dense complex matrices for the q x q model: construction of h(z1, z2),
//! pivoted determinants, and characteristic polynomials via Hessenberg
//! reduction plus the leading-principal-minor recurrence.

use super::ModelParams;
use crate::error::{Error, Result};
use crate::fp::dd_cos_2pi;
use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct CMat {
    n: usize,
    a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> CMat {
        CMat { n, a: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] += v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    /// Largest |a_ij - conj(a_ji)|; zero for an exactly Hermitian matrix.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// e^(2 pi i m / den) with the real and imaginary parts reduced through
/// exact integer quadrant arithmetic, so the roots of unity used in v come
/// out clean (the imaginary part of rho^q is exactly zero, not 1e-16).
fn unit_root(m: i64, den: i64) -> Complex64 {
    let re = dd_cos_2pi(m, den).to_f64();
    // sin(2 pi m/den) = cos(2 pi (4m - den) / (4 den)).
    let im = dd_cos_2pi(4 * m - den, 4 * den).to_f64();
    Complex64::new(re, im)
}

/// h = z1 u + (z1 u)^-1 + (lambda/2)(z2 v + (z2 v)^-1) where u cyclically
/// permutes the standard basis and v = diag(rho, rho^2, ..., rho^(q-1), 1)
/// with rho = e^(2 pi i p/q).  Hermitian by construction: the off-diagonal
/// part is z1 U + conj(z1) U^T and the diagonal is 2 mu Re(z2 rho^k).
pub fn build_h(params: &ModelParams) -> CMat {
    let q = params.theta.q() as usize;
    let p = params.theta.p() as i64;
    let mu = params.lambda / 2.0;
    let mut h = CMat::zeros(q);
    for j in 0..q {
        let succ = (j + 1) % q;
        h.add_at(succ, j, params.z1);
        h.add_at(j, succ, params.z1.conj());
    }
    for k in 1..=q {
        let rho_k = unit_root(k as i64 * p, q as i64);
        let d = 2.0 * mu * (params.z2 * rho_k).re;
        h.add_at(k - 1, k - 1, Complex64::new(d, 0.0));
    }
    h
}

/// det(xI - m) by LU with partial pivoting.  Backward stable; the absolute
/// error scales with the size of the partial products, so keep x inside the
/// spectral hull when differences near zero matter.
pub fn lu_det(m: &CMat, x: Complex64) -> Complex64 {
    let n = m.n;
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = -m.at(i, j);
        }
        a[i * n + i] += x;
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm_sqr();
        for r in col + 1..n {
            let cand = a[r * n + col].norm_sqr();
            if cand > best {
                best = cand;
                piv = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let t = f * a[col * n + j];
                a[r * n + j] -= t;
            }
        }
    }
    det
}

/// In-place unitary reduction to upper Hessenberg form by complex
/// Householder reflections; similarity transforms, so the characteristic
/// polynomial is preserved.
fn hessenberg_in_place(a: &mut [Complex64], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut w: Vec<Complex64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        // Reflect onto -phase(w0) * norm * e1; adding in phase avoids
        // cancellation in the leading component.
        let phase = if w[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            w[0] / w[0].norm()
        };
        w[0] += phase * norm;
        let wnorm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if wnorm == 0.0 {
            continue;
        }
        for z in w.iter_mut() {
            *z /= wnorm;
        }
        // Left: rows k+1.., all columns.
        for j in 0..n {
            let s: Complex64 = (0..m).map(|i| w[i].conj() * a[(k + 1 + i) * n + j]).sum();
            let s2 = s * 2.0;
            for i in 0..m {
                a[(k + 1 + i) * n + j] -= s2 * w[i];
            }
        }
        // Right: all rows, columns k+1...
        for i in 0..n {
            let s: Complex64 = (0..m).map(|j| a[i * n + (k + 1 + j)] * w[j]).sum();
            let s2 = s * 2.0;
            for j in 0..m {
                a[i * n + (k + 1 + j)] -= s2 * w[j].conj();
            }
        }
        // The reflected column is now norm * e1 up to roundoff; pin the
        // subdiagonal zeros so the minor recurrence sees a clean Hessenberg.
        for i in k + 2..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Monic characteristic polynomial det(xI - m), coefficients ascending.
///
/// Reduces to Hessenberg form, then expands the leading principal minors:
/// with H upper Hessenberg and b_i the subdiagonal entries,
///
/// ```text
/// p_k = (x - H[k][k]) p_(k-1) - sum_{j<k} H[j][k] (b_(j+1) ... b_(k-1)) p_(j-1).
/// ```
///
/// Relative coefficient accuracy is 1e-9 for q <= 64; beyond that the
/// recurrence still runs (up to q = 512) but the bound is not claimed.
pub fn charpoly(m: &CMat) -> Result<Vec<Complex64>> {
    let n = m.n;
    if n == 0 || n > 512 {
        return Err(Error::domain(format!("charpoly handles 1 <= q <= 512, got {n}")));
    }
    let mut a = m.a.clone();
    hessenberg_in_place(&mut a, n);
    // minors[k] is the charpoly of the leading k x k block.
    let mut minors: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    minors.push(vec![Complex64::new(1.0, 0.0)]);
    for k in 1..=n {
        let mut next = vec![Complex64::new(0.0, 0.0); k + 1];
        let prev = &minors[k - 1];
        // (x - h_kk) * p_(k-1)
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
        }
        let hkk = a[(k - 1) * n + (k - 1)];
        for (d, c) in prev.iter().enumerate() {
            next[d] -= hkk * c;
        }
        // Subdiagonal product accumulates as j walks down from k-1.
        let mut beta = Complex64::new(1.0, 0.0);
        for j in (1..k).rev() {
            beta *= a[j * n + (j - 1)];
            let hjk = a[(j - 1) * n + (k - 1)];
            if hjk.norm_sqr() == 0.0 {
                continue;
            }
            let f = hjk * beta;
            for (d, c) in minors[j - 1].iter().enumerate() {
                next[d] -= f * c;
            }
        }
        minors.push(next);
    }
    Ok(minors.pop().expect("n >= 1"))
}

/// Horner evaluation of a complex polynomial, coefficients ascending.
pub fn cpoly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// Eigenvalues of a Hermitian matrix, ascending, via the real symmetric
/// 2n x 2n embedding [[Re, -Im], [Im, Re]].  Each eigenvalue of the
/// embedding appears twice; one copy of each pair is kept.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let n = m.n;
    let em = nalgebra::DMatrix::from_fn(2 * n, 2 * n, |r, s| {
        let z = m.at(r % n, s % n);
        match (r < n, s < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = em.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::RotationNumber;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(rng: &mut ChaCha8Rng, q_max: u32) -> ModelParams {
        loop {
            let q = rng.gen_range(2..=q_max);
            let p = rng.gen_range(1..q);
            if let Ok(theta) = RotationNumber::new(p, q) {
                let lambda = rng.gen_range(0.2..4.0);
                let a1: f64 = rng.gen_range(0.0..1.0);
                let a2: f64 = rng.gen_range(0.0..1.0);
                return ModelParams::from_angles(theta, lambda, a1, a2).unwrap();
            }
        }
    }

    #[test]
    fn model_matrix_is_hermitian_with_zero_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let params = random_params(&mut rng, 12);
            let h = build_h(&params);
            assert!(h.hermitian_defect() < 1e-12);
            // Diagonal sums over a full set of q-th roots, which cancels.
            assert!(h.trace().norm() < 1e-10, "trace {:?}", h.trace());
        }
    }

    #[test]
    fn frozen_two_by_two_model() {
        let theta = RotationNumber::new(1, 2).unwrap();
        let params = ModelParams::periodic(theta, 2.0).unwrap();
        let h = build_h(&params);
        // rho = -1: diagonal (2 Re(rho), 2 Re(rho^2)) = (-2, 2); the wrap
        // and step terms stack onto the same off-diagonal pair.
        let want = [
            [Complex64::new(-2.0, 0.0), Complex64::new(2.0, 0.0)],
            [Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!((h.at(i, j) - want[i][j]).norm() < 1e-13);
            }
        }
        // det(xI - h) = x^2 - 8.
        let cp = charpoly(&h).unwrap();
        let want_cp = [-8.0, 0.0, 1.0];
        for (c, w) in cp.iter().zip(want_cp) {
            assert!((c - Complex64::new(w, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn charpoly_identity_and_diagonal() {
        let mut id = CMat::zeros(2);
        id.set(0, 0, Complex64::new(1.0, 0.0));
        id.set(1, 1, Complex64::new(1.0, 0.0));
        let cp = charpoly(&id).unwrap();
        let want = [1.0, -2.0, 1.0];
        for (c, w) in cp.iter().zip(want) {
            assert!((c - Complex64::new(w, 0.0)).norm() < 1e-14);
        }

        let mut d = CMat::zeros(3);
        for (i, v) in [1.0, 2.0, 3.0].iter().enumerate() {
            d.set(i, i, Complex64::new(*v, 0.0));
        }
        let cp = charpoly(&d).unwrap();
        let want = [-6.0, 11.0, -6.0, 1.0];
        for (c, w) in cp.iter().zip(want) {
            assert!((c - Complex64::new(w, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn charpoly_matches_general_hessenberg_cofactors() {
        // 3x3 already-Hessenberg matrix with a non-trivial (0,2) entry,
        // against the hand-expanded determinant.
        let mut m = CMat::zeros(3);
        let e = |re: f64, im: f64| Complex64::new(re, im);
        m.set(0, 0, e(1.0, 0.0));
        m.set(0, 1, e(2.0, -1.0));
        m.set(0, 2, e(0.5, 0.25));
        m.set(1, 0, e(3.0, 1.0));
        m.set(1, 1, e(-1.0, 0.0));
        m.set(1, 2, e(1.0, 1.0));
        m.set(2, 1, e(2.0, 0.0));
        m.set(2, 2, e(0.0, 2.0));
        let cp = charpoly(&m).unwrap();
        for x in [e(0.3, -0.7), e(-1.2, 0.4), e(2.0, 1.0)] {
            let got = cpoly_eval(&cp, x);
            let want = lu_det(&m, x);
            assert!((got - want).norm() < 1e-10 * want.norm().max(1.0));
        }
    }

    #[test]
    fn lu_det_agrees_with_charpoly_on_the_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let params = random_params(&mut rng, 8);
            let h = build_h(&params);
            let cp = charpoly(&h).unwrap();
            let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
            let got = cpoly_eval(&cp, x);
            let want = lu_det(&h, x);
            assert!(
                (got - want).norm() < 1e-9 * want.norm().max(1.0),
                "q = {}: {got} vs {want}",
                params.theta.q()
            );
        }
    }

    #[test]
    fn charpoly_roots_match_eigensolver_oracle() {
        // Random Hermitian 6x6, eigenvalues from the real 12x12 embedding
        // [[Re, -Im], [Im, Re]]; each eigenvalue must root the charpoly.
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..10 {
            let n = 6;
            let mut m = CMat::zeros(n);
            for i in 0..n {
                m.set(i, i, Complex64::new(rng.gen_range(-2.0..2.0), 0.0));
                for j in i + 1..n {
                    let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    m.set(i, j, z);
                    m.set(j, i, z.conj());
                }
            }
            let mut emb = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    let z = m.at(i, j);
                    emb[(i, j)] = z.re;
                    emb[(i, j + n)] = -z.im;
                    emb[(i + n, j)] = z.im;
                    emb[(i + n, j + n)] = z.re;
                }
            }
            let eig = nalgebra::SymmetricEigen::new(emb);
            let cp = charpoly(&m).unwrap();
            let scale: f64 = cp.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for &ev in eig.eigenvalues.iter() {
                let v = cpoly_eval(&cp, Complex64::new(ev, 0.0));
                assert!(v.norm() < 1e-8 * scale, "eigenvalue {ev}: residual {v}");
            }
        }
    }

    #[test]
    fn charpoly_rejects_outsized_matrices() {
        assert!(charpoly(&CMat::zeros(0)).is_err());
        assert!(charpoly(&CMat::zeros(513)).is_err());
    }
}
