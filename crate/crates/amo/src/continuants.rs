//! Continuants, periodic continuants, and their family expansions.
//!
//! The continuant (a_1 ... a_n) follows the three-term recurrence
//! C_m = a_m C_(m-1) - C_(m-2) with C_0 = 1, C_(-1) = 0; it equals the
//! determinant of the tridiagonal matrix with diagonal a_i and unit
//! off-diagonal products.  The periodic continuant closes the band into a
//! ring:
//!
//! ```text
//! [[a_1 ... a_n]] = (a_1 ... a_n) - (a_2 ... a_(n-1)) + 2 (-1)^(n-1),  n >= 3.
//! ```
//!
//! Both expand as alternating sums over the pair-deletion families of
//! [`crate::combinatorics`], and on the cosine diagonal
//! a_j = 2 cos(2 pi j p/q) the inner family sums vanish identically for
//! 1 <= k < q/2: the sums, read in Q[x]/(x^q - 1), are divisible by the
//! q-th cyclotomic polynomial.  This module carries both the exact route
//! (residue arithmetic) and an independent numeric route (double-double
//! matching recurrences) to that vanishing, plus the exact closed forms it
//! implies for the full cosine continuants.

use crate::combinatorics::{alternating_family_sum, FamilyKind};
use crate::error::{Error, Result};
use crate::exactfield::{bigq, bigq_pow, BigQ, CycloElement, ZPoly};
use crate::fp::{dd_cos_2pi, Dd, Scalar};
use crate::ring::{Cyclo, Ring};

/// (a_1 ... a_n) by the three-term recurrence; the empty continuant is 1.
pub fn continuant<R: Ring>(ring: &R, diag: &[R::Elem]) -> R::Elem {
    let mut prev = ring.zero(); // C_(-1)
    let mut curr = ring.one(); // C_0
    for a in diag {
        let next = ring.sub(&ring.mul(a, &curr), &prev);
        prev = curr;
        curr = next;
    }
    curr
}

/// [[a_1 ... a_n]] for n >= 3.
pub fn periodic_continuant<R: Ring>(ring: &R, diag: &[R::Elem]) -> Result<R::Elem> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::domain("periodic continuant needs n >= 3"));
    }
    let outer = continuant(ring, diag);
    let inner = continuant(ring, &diag[1..n - 1]);
    let two = ring.from_i64(if n % 2 == 1 { 2 } else { -2 });
    Ok(ring.add(&ring.sub(&outer, &inner), &two))
}

/// (a_1 ... a_n) as the alternating sum over the path families.
pub fn continuant_via_families<R: Ring>(ring: &R, diag: &[R::Elem]) -> Result<R::Elem> {
    alternating_family_sum(ring, FamilyKind::Linear, diag.len() as u32, diag)
}

/// [[a_1 ... a_n]] as the alternating sum over the cycle families: the sum
/// plus 2 for odd n, the sum minus 2 plus (-1)^(n/2) for even n (the even
/// cycle's single empty member enters the alternating sum once, which the
/// constant absorbs).
pub fn periodic_continuant_via_families<R: Ring>(ring: &R, diag: &[R::Elem]) -> Result<R::Elem> {
    let n = diag.len() as u32;
    if n < 3 {
        return Err(Error::domain("periodic continuant needs n >= 3"));
    }
    let base = alternating_family_sum(ring, FamilyKind::Cyclic, n, diag)?;
    let shift = if n % 2 == 1 {
        2
    } else if (n / 2) % 2 == 0 {
        -1
    } else {
        -3
    };
    Ok(ring.add(&base, &ring.from_i64(shift)))
}

/// Chebyshev polynomial of the first kind, exact integer coefficients.
pub fn chebyshev_t(n: u32) -> ZPoly {
    let mut prev = ZPoly::one();
    if n == 0 {
        return prev;
    }
    let mut curr = ZPoly::from_i64_coeffs(&[0, 1]);
    let two_x = ZPoly::from_i64_coeffs(&[0, 2]);
    for _ in 1..n {
        let next = two_x.mul(&curr).sub(&prev);
        prev = curr;
        curr = next;
    }
    curr
}

/// prod_{k=1..q} 2 cos(2 pi k/q), exactly.  The factors are the roots of
/// 2 (T_q(x/2) - 1), so the product is (-1)^q 2 (T_q(0) - 1): 2 for odd q,
/// 0 for q divisible by 4, -4 for q = 2 mod 4.  Replacing k by kp for any p
/// coprime to q permutes the factors and leaves the product unchanged.
pub fn diag_product_exact(q: u32) -> Result<BigQ> {
    if q == 0 {
        return Err(Error::domain("q must be >= 1"));
    }
    let t0 = BigQ::from_integer(chebyshev_t(q).coeffs()[0].clone());
    let sign = if q % 2 == 0 { bigq(1) } else { bigq(-1) };
    Ok(sign * bigq(2) * (t0 - bigq(1)))
}

fn require_rotation(q: u32, p: u32) -> Result<()> {
    if q < 1 || p < 1 || p >= q.max(2) || num_integer::gcd(p, q) != 1 {
        return Err(Error::domain(format!(
            "need 1 <= p < q with gcd(p, q) = 1, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

/// Exact value of [[b_1 ... b_q]] with b_j = 2 mu cos(2 pi j p/q), q >= 3.
///
/// The continuant is evaluated in Q[x]/(x^q - 1) with
/// b_j -> mu (x^(jp) + x^(-jp)) and the result is certified equal to the
/// closed form
///
/// * 0                 for q = 0 mod 4,
/// * -4 (1 + mu^q)     for q = 2 mod 4,
/// *  2 (1 + mu^q)     for q odd,
///
/// by checking that the difference is divisible by the q-th cyclotomic
/// polynomial.  A failed certificate is an error, not a wrong answer.
pub fn periodic_continuant_cos_exact(q: u32, p: u32, mu: &BigQ) -> Result<BigQ> {
    if q < 3 {
        return Err(Error::domain("periodic continuant needs q >= 3"));
    }
    require_rotation(q, p)?;
    let ring = Cyclo { q: q as usize };
    let diag: Vec<CycloElement> = (1..=q as i64)
        .map(|j| CycloElement::cos_pair(q as usize, j * p as i64).scale(mu))
        .collect();
    let value = periodic_continuant(&ring, &diag)?;
    let mu_q = bigq_pow(mu, q as i64);
    let claimed = match q % 4 {
        0 => bigq(0),
        2 => bigq(-4) * (bigq(1) + &mu_q),
        _ => bigq(2) * (bigq(1) + &mu_q),
    };
    let diff = value.sub(&CycloElement::scalar(q as usize, claimed.clone()))?;
    if !diff.vanishes_at_primitive_roots() {
        return Err(Error::VerificationFailed(format!(
            "cosine periodic continuant at q = {q}, p = {p} does not reduce to {claimed}: \
             residue {:?}",
            diff.residue_mod_cyclotomic().coeffs()
        )));
    }
    Ok(claimed)
}

/// Matching sums of a path with vertex values `vals`: entry k is the sum
/// over all ways to delete k disjoint adjacent pairs of the product of the
/// surviving values.  Computed by the two-term recurrence
/// P_m = a_m P_(m-1) + t P_(m-2) on polynomials in t, truncated at t^kmax.
fn path_matching_sums<R: Ring>(ring: &R, vals: &[R::Elem], kmax: usize) -> Vec<R::Elem> {
    let width = kmax + 1;
    let mut p_prev = vec![ring.zero(); width];
    p_prev[0] = ring.one(); // P_0
    if vals.is_empty() {
        return p_prev;
    }
    let mut p_curr = vec![ring.zero(); width];
    p_curr[0] = vals[0].clone(); // P_1
    for a in &vals[1..] {
        let mut next = vec![ring.zero(); width];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut v = ring.mul(a, &p_curr[k]);
            if k >= 1 {
                v = ring.add(&v, &p_prev[k - 1]);
            }
            *slot = v;
        }
        p_prev = p_curr;
        p_curr = next;
    }
    p_curr
}

/// Matching sums of the cycle on `vals`: the path sums plus, one t-degree
/// up, the sums of the interior path (both endpoints deleted by the wrap
/// pair).  Entry k equals the cycle-family sum for k < n/2; at k = n/2 it
/// counts the two perfect matchings of the even cycle, i.e. it is 2, while
/// the family has a single empty member.
fn cycle_matching_sums<R: Ring>(ring: &R, vals: &[R::Elem], kmax: usize) -> Vec<R::Elem> {
    let mut out = path_matching_sums(ring, vals, kmax);
    if vals.len() >= 2 {
        let inner = path_matching_sums(ring, &vals[1..vals.len() - 1], kmax.saturating_sub(1));
        for (k, c) in inner.iter().enumerate() {
            if k + 1 <= kmax {
                out[k + 1] = ring.add(&out[k + 1], c);
            }
        }
    }
    out
}

/// sum_{I in cycle family(q, k)} prod_{j in I} 2 cos(2 pi j p/q) as elements
/// of Q[x]/(x^q - 1), for k = 0..=q/2.  The k = q/2 entry (even q) counts
/// matchings, not members: it is the scalar 2.
pub fn cyclic_cos_family_sums_exact(q: u32, p: u32) -> Result<Vec<CycloElement>> {
    if q < 3 {
        return Err(Error::domain("cycle families need q >= 3"));
    }
    require_rotation(q, p)?;
    let ring = Cyclo { q: q as usize };
    let vals: Vec<CycloElement> = (1..=q as i64)
        .map(|j| CycloElement::cos_pair(q as usize, j * p as i64))
        .collect();
    Ok(cycle_matching_sums(&ring, &vals, (q / 2) as usize))
}

/// Report of the exact vanishing check at one rotation number p/q.
#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub q: u32,
    pub p: u32,
    /// k values checked: 1 <= k < q/2.
    pub checked: Vec<u32>,
    /// (k, nonzero residue mod the cyclotomic polynomial) for each failure.
    pub failures: Vec<(u32, String)>,
}

impl VanishingReport {
    pub fn all_vanish(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact verification that every cycle-family cosine sum with 1 <= k < q/2
/// vanishes at the primitive q-th roots of unity.
pub fn check_vanishing_exact(q: u32, p: u32) -> Result<VanishingReport> {
    let sums = cyclic_cos_family_sums_exact(q, p)?;
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    // 1 <= k < q/2 in both parities: the upper bound (q+1)/2 excludes the
    // even-q half point on its own.
    for k in 1..((q + 1) / 2) {
        checked.push(k);
        let s = &sums[k as usize];
        if !s.vanishes_at_primitive_roots() {
            failures.push((
                k,
                format!("{:?}", s.residue_mod_cyclotomic().coeffs()),
            ));
        }
    }
    Ok(VanishingReport { q, p, checked, failures })
}

/// Same family sums as [`cyclic_cos_family_sums_exact`] but evaluated in
/// scalar arithmetic.  With S = f64 the cancellation drowns in roundoff for
/// large q; the double-double instantiation keeps it visible.
pub fn cyclic_cos_family_sums_numeric<S: Scalar>(q: u32, p: u32) -> Result<Vec<S>> {
    if q < 3 {
        return Err(Error::domain("cycle families need q >= 3"));
    }
    require_rotation(q, p)?;
    let ring = ScalarRing::<S>::new();
    let vals: Vec<S> = (1..=q as i64)
        .map(|j| {
            let c = dd_cos_2pi(j * p as i64, q as i64);
            let two_cos = c.add(c);
            S::from_f64(two_cos.hi).add(S::from_f64(two_cos.lo))
        })
        .collect();
    Ok(cycle_matching_sums(&ring, &vals, (q / 2) as usize))
}

/// |cycle family(q, k)|: q/(q-k) C(q-k, k) members for 1 <= k < q/2, one at
/// k = q/2, one at k = 0.
pub fn cyclic_family_count(q: u32, k: u32) -> u128 {
    if k == 0 || 2 * k == q {
        return 1;
    }
    let (n, k) = (q as u128, k as u128);
    let mut binom: u128 = 1;
    for i in 0..k {
        binom = binom * (n - k - i) / (i + 1);
    }
    n * binom / (n - k)
}

/// One numeric vanishing measurement: the accumulated |sum| against the
/// tolerance 1e-8 * (number of family members).
#[derive(Clone, Debug)]
pub struct NumericVanishingCase {
    pub p: u32,
    pub k: u32,
    pub abs_sum: f64,
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct NumericVanishingReport {
    pub q: u32,
    pub cases_checked: usize,
    pub all_within: bool,
    /// The case with the largest |sum|/bound ratio.
    pub worst: Option<NumericVanishingCase>,
}

/// Numeric (double-double) verification of the vanishing sums over every p
/// coprime to q, 1 <= k < q/2.
pub fn check_vanishing_numeric(q: u32) -> Result<NumericVanishingReport> {
    if q < 3 {
        return Err(Error::domain("cycle families need q >= 3"));
    }
    let mut worst: Option<(f64, NumericVanishingCase)> = None;
    let mut cases = 0usize;
    let mut all_within = true;
    for p in 1..q {
        if num_integer::gcd(p, q) != 1 {
            continue;
        }
        let sums: Vec<Dd> = cyclic_cos_family_sums_numeric(q, p)?;
        for k in 1..((q + 1) / 2) {
            let abs_sum = sums[k as usize].abs().to_f64();
            let bound = 1e-8 * cyclic_family_count(q, k) as f64;
            cases += 1;
            if abs_sum >= bound {
                all_within = false;
            }
            let ratio = abs_sum / bound;
            if worst.as_ref().map_or(true, |(r, _)| ratio > *r) {
                worst = Some((ratio, NumericVanishingCase { p, k, abs_sum, bound }));
            }
        }
    }
    Ok(NumericVanishingReport {
        q,
        cases_checked: cases,
        all_within,
        worst: worst.map(|(_, c)| c),
    })
}

/// Adapter exposing a [`Scalar`] as a [`Ring`] context.
struct ScalarRing<S: Scalar> {
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> ScalarRing<S> {
    fn new() -> Self {
        ScalarRing { _marker: std::marker::PhantomData }
    }
}

impl<S: Scalar> Ring for ScalarRing<S> {
    type Elem = S;

    fn zero(&self) -> S {
        S::zero()
    }
    fn one(&self) -> S {
        S::one()
    }
    fn from_i64(&self, n: i64) -> S {
        S::from_f64(n as f64)
    }
    fn add(&self, a: &S, b: &S) -> S {
        S::add(*a, *b)
    }
    fn sub(&self, a: &S, b: &S) -> S {
        S::sub(*a, *b)
    }
    fn mul(&self, a: &S, b: &S) -> S {
        S::mul(*a, *b)
    }
    fn neg(&self, a: &S) -> S {
        S::neg(*a)
    }
    fn eq(&self, a: &S, b: &S) -> bool {
        a.to_f64() == b.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enum_family, family_sum, subset_product};
    use crate::exactfield::{bigq_ratio, bigq_to_f64, RationalSampler};
    use crate::ring::Rationals;
    use num_traits::Zero;

    /// Dense determinant over Q by fraction-full Gaussian elimination.
    fn dense_det(mut m: Vec<Vec<BigQ>>) -> BigQ {
        let n = m.len();
        let mut det = bigq(1);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { return bigq(0) };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let inv = m[col][col].clone().recip();
            det *= &m[col][col];
            for r in col + 1..n {
                let f = &m[r][col] * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
        det
    }

    fn tridiagonal(diag: &[BigQ]) -> Vec<Vec<BigQ>> {
        let n = diag.len();
        let mut m = vec![vec![bigq(0); n]; n];
        for i in 0..n {
            m[i][i] = diag[i].clone();
            if i + 1 < n {
                m[i][i + 1] = bigq(1);
                m[i + 1][i] = bigq(1);
            }
        }
        m
    }

    #[test]
    fn continuant_equals_tridiagonal_determinant() {
        let ring = Rationals;
        let mut sampler = RationalSampler::new(11);
        for n in 1..=8usize {
            for _ in 0..5 {
                let diag = sampler.values(n);
                assert_eq!(continuant(&ring, &diag), dense_det(tridiagonal(&diag)));
            }
        }
    }

    #[test]
    fn small_continuants_match_hand_expansion() {
        let ring = Rationals;
        let (a, b, c) = (bigq(2), bigq(3), bigq(5));
        assert_eq!(continuant(&ring, &[]), bigq(1));
        assert_eq!(continuant(&ring, &[a.clone()]), bigq(2));
        assert_eq!(continuant(&ring, &[a.clone(), b.clone()]), bigq(5)); // ab - 1
        // (abc) = abc - a - c.
        assert_eq!(continuant(&ring, &[a, b, c]), bigq(23));
    }

    #[test]
    fn periodic_continuant_matches_frozen_symbolic_forms() {
        let ring = Rationals;
        let mut sampler = RationalSampler::new(23);
        for _ in 0..10 {
            let v = sampler.values(5);
            let (a, b, c, d, e) =
                (v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone());
            // [[abc]] = abc - a - b - c + 2.
            let want3 = &a * &b * &c - &a - &b - &c + bigq(2);
            assert_eq!(periodic_continuant(&ring, &v[..3]).unwrap(), want3);
            // [[abcd]] = abcd - ab - bc - cd - da.
            let want4 = &a * &b * &c * &d - &a * &b - &b * &c - &c * &d - &d * &a;
            assert_eq!(periodic_continuant(&ring, &v[..4]).unwrap(), want4);
            // [[abcde]] = abcde - abc - bcd - cde - dea - eab
            //             + a + b + c + d + e + 2.
            let want5 = &a * &b * &c * &d * &e
                - &a * &b * &c
                - &b * &c * &d
                - &c * &d * &e
                - &d * &e * &a
                - &e * &a * &b
                + &a
                + &b
                + &c
                + &d
                + &e
                + bigq(2);
            assert_eq!(periodic_continuant(&ring, &v[..5]).unwrap(), want5);
        }
    }

    #[test]
    fn periodic_needs_three_terms() {
        let ring = Rationals;
        assert!(periodic_continuant(&ring, &[bigq(1), bigq(2)]).is_err());
    }

    #[test]
    fn family_expansions_agree_with_recurrences() {
        let ring = Rationals;
        let mut sampler = RationalSampler::new(37);
        for n in 1..=9usize {
            for _ in 0..4 {
                let diag = sampler.values(n);
                assert_eq!(
                    continuant_via_families(&ring, &diag).unwrap(),
                    continuant(&ring, &diag)
                );
                if n >= 3 {
                    assert_eq!(
                        periodic_continuant_via_families(&ring, &diag).unwrap(),
                        periodic_continuant(&ring, &diag).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn negating_the_diagonal() {
        let ring = Rationals;
        let mut sampler = RationalSampler::new(53);
        for n in 3..=8usize {
            let diag = sampler.values(n);
            let negated: Vec<BigQ> = diag.iter().map(|a| -a).collect();
            // (-a_1 ... -a_n) = (-1)^n (a_1 ... a_n).
            let sign = if n % 2 == 0 { bigq(1) } else { bigq(-1) };
            assert_eq!(continuant(&ring, &negated), &sign * continuant(&ring, &diag));
            // [[-a]] = (-1)^n [[a]] + 2 (-1)^(n-1) + 2: the constant keeps
            // its sign while the rest alternates.
            let lhs = periodic_continuant(&ring, &negated).unwrap();
            let rhs = &sign * periodic_continuant(&ring, &diag).unwrap()
                + bigq(2) * (bigq(1) - sign);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chebyshev_small_table_and_product_rule() {
        assert_eq!(chebyshev_t(0), ZPoly::one());
        assert_eq!(chebyshev_t(1), ZPoly::from_i64_coeffs(&[0, 1]));
        assert_eq!(chebyshev_t(2), ZPoly::from_i64_coeffs(&[-1, 0, 2]));
        assert_eq!(chebyshev_t(5), ZPoly::from_i64_coeffs(&[0, 5, 0, -20, 0, 16]));
        // T_m(T_n(x)) = T_(mn)(x) spot check via evaluation.
        let t6 = chebyshev_t(6);
        let t2 = chebyshev_t(2);
        let t3 = chebyshev_t(3);
        for x in [-2i64, -1, 0, 1, 3] {
            let xq = bigq(x);
            assert_eq!(t6.eval_bigq(&xq), t2.eval_bigq(&t3.eval_bigq(&xq)));
        }
    }

    #[test]
    fn chebyshev_large_coefficients_are_exact() {
        // Leading coefficient of T_n is 2^(n-1); at n = 50 that is far past
        // i64, which is why the coefficients are big integers.
        let t50 = chebyshev_t(50);
        assert_eq!(t50.degree(), 50);
        let lead = t50.coeffs().last().unwrap().clone();
        let mut want = num_bigint::BigInt::from(1);
        for _ in 0..49 {
            want *= 2;
        }
        assert_eq!(lead, want);
        // T_n(1) = 1 for all n: the coefficients sum to 1 exactly.
        let sum: num_bigint::BigInt = t50.coeffs().iter().sum();
        assert_eq!(sum, num_bigint::BigInt::from(1));
    }

    #[test]
    fn diag_product_mod_four_table() {
        for q in 1..=50u32 {
            let got = diag_product_exact(q).unwrap();
            let want = match q % 4 {
                0 => bigq(0),
                2 => bigq(-4),
                _ => bigq(2),
            };
            assert_eq!(got, want, "q = {q}");
        }
    }

    #[test]
    fn diag_product_agrees_with_residue_route() {
        // Independent route: prod (x^k + x^-k) in Q[x]/(x^q - 1) minus the
        // claimed constant must vanish at the primitive q-th roots.
        for q in 2..=16usize {
            let ring = Cyclo { q };
            let prod = ring.product((1..=q as i64).map(|k| CycloElement::cos_pair(q, k)));
            let claimed = diag_product_exact(q as u32).unwrap();
            let diff = prod.sub(&CycloElement::scalar(q, claimed)).unwrap();
            assert!(diff.vanishes_at_primitive_roots(), "q = {q}");
        }
    }

    #[test]
    fn diag_product_agrees_with_f64() {
        for q in 2..=30u32 {
            let mut prod = 1.0f64;
            for k in 1..=q {
                prod *= 2.0 * (2.0 * std::f64::consts::PI * k as f64 / q as f64).cos();
            }
            let exact = bigq_to_f64(&diag_product_exact(q).unwrap());
            assert!((prod - exact).abs() < 1e-7, "q = {q}: {prod} vs {exact}");
        }
    }

    #[test]
    fn cosine_periodic_continuant_closed_forms() {
        // Frozen: q = 6, mu = 1/2 gives -4 (1 + 1/64) = -65/16.
        let v = periodic_continuant_cos_exact(6, 1, &bigq_ratio(1, 2)).unwrap();
        assert_eq!(v, bigq_ratio(-65, 16));
        assert_eq!(periodic_continuant_cos_exact(4, 1, &bigq(1)).unwrap(), bigq(0));
        assert_eq!(periodic_continuant_cos_exact(5, 2, &bigq(1)).unwrap(), bigq(4));
        assert_eq!(
            periodic_continuant_cos_exact(7, 3, &bigq_ratio(3, 2)).unwrap(),
            bigq(2) * (bigq(1) + bigq_ratio(2187, 128))
        );
    }

    #[test]
    fn cosine_periodic_continuant_matches_f64_recurrence() {
        let ring = crate::ring::Floats;
        for (q, p) in [(3u32, 1u32), (5, 2), (6, 1), (8, 3), (9, 4), (12, 5)] {
            for (mn, md) in [(1i64, 2i64), (1, 1), (3, 2)] {
                let mu = mn as f64 / md as f64;
                let diag: Vec<f64> = (1..=q)
                    .map(|j| {
                        2.0 * mu
                            * (2.0 * std::f64::consts::PI * (j * p) as f64 / q as f64).cos()
                    })
                    .collect();
                let numeric = periodic_continuant(&ring, &diag).unwrap();
                let exact = periodic_continuant_cos_exact(q, p, &bigq_ratio(mn, md)).unwrap();
                let exact_f = bigq_to_f64(&exact);
                assert!(
                    (numeric - exact_f).abs() < 1e-9 * exact_f.abs().max(1.0),
                    "q={q} p={p} mu={mu}: {numeric} vs {exact_f}"
                );
            }
        }
    }

    #[test]
    fn matching_recurrence_equals_family_enumeration() {
        // The t-degree DP and the explicit family enumeration compute the
        // same sums, over rationals and over residues.
        let ring = Rationals;
        let mut sampler = RationalSampler::new(71);
        for n in 3..=10u32 {
            let vals = sampler.values(n as usize);
            let cyc = cycle_matching_sums(&ring, &vals, (n / 2) as usize);
            for k in 0..=(n / 2) {
                let fam = family_sum(&ring, FamilyKind::Cyclic, n, k, &vals).unwrap();
                let dp = cyc[k as usize].clone();
                if 2 * k == n {
                    // Two matchings, one member: the DP sees the empty
                    // product twice.
                    assert_eq!(dp, bigq(2) * fam);
                } else {
                    assert_eq!(dp, fam, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn exact_vanishing_small_q_all_p() {
        for q in [5u32, 7, 8, 9, 10, 12] {
            for p in 1..q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let report = check_vanishing_exact(q, p).unwrap();
                assert!(report.all_vanish(), "q={q} p={p}: {:?}", report.failures);
                let want = if q % 2 == 1 { (q - 1) / 2 } else { q / 2 - 1 };
                assert_eq!(report.checked.len() as u32, want);
            }
        }
    }

    #[test]
    fn exact_sums_match_direct_enumeration() {
        for (q, p) in [(7u32, 2u32), (9, 4), (10, 3)] {
            let ring = Cyclo { q: q as usize };
            let vals: Vec<CycloElement> = (1..=q as i64)
                .map(|j| CycloElement::cos_pair(q as usize, j * p as i64))
                .collect();
            let sums = cyclic_cos_family_sums_exact(q, p).unwrap();
            for k in 0..q / 2 {
                let members = enum_family(FamilyKind::Cyclic, q, k).unwrap();
                let direct = ring.sum(
                    members
                        .iter()
                        .map(|s| subset_product(&ring, s, &vals)),
                );
                assert_eq!(sums[k as usize], direct, "q={q} p={p} k={k}");
            }
        }
    }

    #[test]
    fn numeric_vanishing_moderate_q() {
        for q in [13u32, 21, 24, 30] {
            let report = check_vanishing_numeric(q).unwrap();
            assert!(
                report.all_within,
                "q = {q}, worst case: {:?}",
                report.worst
            );
        }
    }

    #[test]
    fn double_double_margin_on_vanishing_sums() {
        // Measured headroom of both scalar types against the 1e-8 * count
        // bound near the top of the swept range.  Plain f64 sits about five
        // orders inside the bound (worst ratio ~5e-6); double-double sits
        // ~20 orders inside (~4e-21).  The sweep runs in double-double by
        // default so the margin does not depend on how the roundoff happens
        // to cancel.
        let mut worst_f64 = 0.0f64;
        let mut worst_dd = 0.0f64;
        for q in [48u32, 55, 57, 60] {
            for p in 1..q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let f: Vec<f64> = cyclic_cos_family_sums_numeric::<f64>(q, p).unwrap();
                let d: Vec<Dd> = cyclic_cos_family_sums_numeric::<Dd>(q, p).unwrap();
                for k in 1..((q + 1) / 2) as usize {
                    let bound = 1e-8 * cyclic_family_count(q, k as u32) as f64;
                    worst_f64 = worst_f64.max(f[k].abs() / bound);
                    worst_dd = worst_dd.max(d[k].abs().to_f64() / bound);
                }
            }
        }
        assert!(worst_f64 < 1.0, "f64 ratio {worst_f64}");
        assert!(worst_dd < 1e-15, "double-double ratio {worst_dd}");
        // Double-double must genuinely improve on f64, not just match it.
        assert!(worst_dd < worst_f64 * 1e-9);
    }

    #[test]
    fn family_counts() {
        assert_eq!(cyclic_family_count(5, 1), 5);
        assert_eq!(cyclic_family_count(5, 2), 5);
        assert_eq!(cyclic_family_count(6, 3), 1);
        assert_eq!(cyclic_family_count(60, 1), 60);
        // Cross-check against enumeration.
        for q in 3..=14u32 {
            for k in 1..=(q / 2) {
                let n = enum_family(FamilyKind::Cyclic, q, k).unwrap().len();
                assert_eq!(cyclic_family_count(q, k), n as u128, "q={q} k={k}");
            }
        }
    }

    #[test]
    fn rotation_number_validation() {
        assert!(periodic_continuant_cos_exact(6, 2, &bigq(1)).is_err());
        assert!(periodic_continuant_cos_exact(6, 0, &bigq(1)).is_err());
        assert!(periodic_continuant_cos_exact(6, 7, &bigq(1)).is_err());
        assert!(cyclic_cos_family_sums_exact(9, 3).is_err());
    }
}
