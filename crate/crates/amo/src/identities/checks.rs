//! The identity grid: closed forms for sums of inverse products of the
//! f_i = x^-i + x^i atoms, their defining recurrences, and the bridge from
//! cycle-deletion families to nested sums.
//!
//! Each sum is computed along a ladder (running sums in q, or a dynamic
//! program over its recurrence) and compared against its closed form by
//! exact cross-multiplication.  The recurrences themselves are verified
//! separately against direct enumeration of the nested sums, so no check
//! is circular: enumeration ties the ladders to the definitions, and the
//! closed forms are checked against the ladders.

use super::engine::{nested_sum, Atom, Expr, Exprs};
use super::IdentityReport;
use crate::combinatorics::{enum_family, subset_product, FamilyKind};
use crate::exactfield::{bigq, BigQ, LaurentPoly, RationalSampler};
use crate::ring::{Rationals, Ring};

fn af(i: i64) -> Atom {
    assert!(i >= 1, "f-atom index must be positive, got {i}");
    Atom::F(i as u32)
}

fn ag(i: i64) -> Atom {
    assert!(i >= 1, "g-atom index must be positive, got {i}");
    Atom::G(i as u32)
}

/// 1 / (f_i f_(i+1)), the term every sum in the grid is built from.
fn pair_term(i: u32) -> Expr {
    Expr::inverse_atoms(&[af(i as i64), af(i as i64 + 1)])
}

fn witness_from(diff: &LaurentPoly) -> String {
    let mut parts: Vec<String> = diff
        .terms()
        .take(4)
        .map(|(e, c)| format!("{c} x^{e}"))
        .collect();
    if diff.num_terms() > 4 {
        parts.push(format!("... ({} terms total)", diff.num_terms()));
    }
    format!("cross-multiplied difference: {}", parts.join(" + "))
}

fn report_eq(name: &str, k: impl Into<Option<u32>>, q: impl Into<Option<u32>>, lhs: &Expr, rhs: &Expr) -> IdentityReport {
    let r = IdentityReport::symbolic(name, k, q);
    if lhs.eq(rhs) {
        r
    } else {
        r.fail(witness_from(&lhs.cross_difference(rhs)))
    }
}

/// Denominator shared by the nested-sum closed forms:
/// prod_(i=1..k) g_(2i) * prod_(i=-1..k-2) f_(q-i).
fn grid_denominator(k: u32, q: u32) -> Vec<Atom> {
    let (k, q) = (k as i64, q as i64);
    let mut den: Vec<Atom> = (1..=k).map(|i| ag(2 * i)).collect();
    den.extend((-1..=k - 2).map(|i| af(q - i)));
    den
}

/// Closed form of the k-fold nested sum over 1..q:
/// prod_(i=k-1..2k-2) g_(q-i) / grid denominator.
fn nested_closed_form(k: u32, q: u32) -> Expr {
    let (ki, qi) = (k as i64, q as i64);
    let num: Vec<Atom> = (ki - 1..=2 * ki - 2).map(|i| ag(qi - i)).collect();
    Expr::term(bigq(1), &num, &grid_denominator(k, q))
}

/// Closed form of the bordered variant (prefactor 1/(f_1 f_2 f_q f_(q+1)),
/// inner indices confined to 3..q-2):
/// g_(k-1) g_k prod_(i=k+1..2k-2) g_(q-i) / grid denominator.
fn bordered_closed_form(k: u32, q: u32) -> Expr {
    let (ki, qi) = (k as i64, q as i64);
    let mut num: Vec<Atom> = vec![ag(ki - 1), ag(ki)];
    num.extend((ki + 1..=2 * ki - 2).map(|i| ag(qi - i)));
    Expr::term(bigq(1), &num, &grid_denominator(k, q))
}

/// Closed form of the difference of the two:
/// g_q prod_(i=k+1..2k-1) g_(q-i) / grid denominator.  At q = 2k-1 the last
/// numerator index is zero, so the difference vanishes identically.
fn difference_closed_form(k: u32, q: u32) -> Expr {
    let (ki, qi) = (k as i64, q as i64);
    if qi - (2 * ki - 1) == 0 {
        return Expr::zero();
    }
    let mut num: Vec<Atom> = vec![ag(qi)];
    num.extend((ki + 1..=2 * ki - 1).map(|i| ag(qi - i)));
    Expr::term(bigq(1), &num, &grid_denominator(k, q))
}

/// table[k][q] = k-fold nested sum over 1..q, built from the recurrence
/// S(k,q) = S(k,q-1) + S(k-1,q-2)/(f_q f_(q+1)).
fn build_nested_table(k_max: u32, q_max: u32) -> Vec<Vec<Expr>> {
    let mut t = vec![vec![Expr::zero(); q_max as usize + 1]; k_max as usize + 1];
    for cell in &mut t[0] {
        *cell = Expr::one();
    }
    for k in 1..=k_max as usize {
        for q in 1..=q_max as usize {
            if q < 2 * k - 1 {
                continue;
            }
            let lower = if q >= 2 { t[k - 1][q - 2].clone() } else { Expr::one() };
            let step = pair_term(q as u32).mul(&lower);
            t[k][q] = t[k][q - 1].add(&step);
        }
    }
    t
}

/// Prefactor of the bordered sums: 1/(f_1 f_2 f_q f_(q+1)).
fn border_prefactor(q: u32) -> Expr {
    Expr::inverse_atoms(&[af(1), af(2), af(q as i64), af(q as i64 + 1)])
}

/// table[k][q] = bordered k-fold nested sum (k >= 2; rows 0 and 1 unused).
/// The k = 2 row is the definition itself (empty inner nest), higher rows
/// come from the recurrence
/// S(k,q) = S(k,q-1) f_(q-1)/f_(q+1) + S(k-1,q-2)/(f_q f_(q+1)).
fn build_bordered_table(k_max: u32, q_max: u32) -> Vec<Vec<Expr>> {
    let rows = k_max.max(2) as usize + 1;
    let mut t = vec![vec![Expr::zero(); q_max as usize + 1]; rows];
    for q in 3..=q_max as usize {
        t[2][q] = border_prefactor(q as u32);
    }
    for k in 3..=k_max as usize {
        for q in 1..=q_max as usize {
            if q < 2 * k - 1 {
                continue;
            }
            let carry = t[k][q - 1].mul(&Expr::term(
                bigq(1),
                &[af(q as i64 - 1)],
                &[af(q as i64 + 1)],
            ));
            let step = pair_term(q as u32).mul(&t[k - 1][q - 2]);
            t[k][q] = carry.add(&step);
        }
    }
    t
}

/// Direct enumeration of the k-fold nested sum over lo..hi of
/// 1/(f_i f_(i+1)); the oracle the tables are checked against.
fn nested_direct(k: i32, lo: u32, hi: u32) -> Expr {
    nested_sum(&Exprs, k, lo, hi, &pair_term)
}

/// Direct enumeration of the bordered sum for k >= 2 (empty nest at k = 2).
fn bordered_direct(k: u32, q: u32) -> Expr {
    border_prefactor(q).mul(&nested_direct(k as i32 - 2, 3, q - 2))
}

/// Running sum of 1/(f_i f_(i+1)) for i = 1..q against its closed form
/// g_q/(g_2 f_(q+1)), for every q up to q_max.
pub fn check_telescoping_pair_sum(q_max: u32) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    let mut acc = Expr::zero();
    for q in 1..=q_max {
        acc = acc.add(&pair_term(q));
        let rhs = Expr::term(bigq(1), &[ag(q as i64)], &[ag(2), af(q as i64 + 1)]);
        reports.push(report_eq("telescoping_pair_sum", None, q, &acc, &rhs));
    }
    reports
}

/// Product split: 1/prod_(i=1..2k) f_i = prod_(i=1..k) g_i/(g_(2i) f_(k+i)),
/// for every k up to k_max.
pub fn check_inverse_product_split(k_max: u32) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    for k in 1..=k_max {
        let ki = k as i64;
        let lhs_atoms: Vec<Atom> = (1..=2 * ki).map(af).collect();
        let lhs = Expr::inverse_atoms(&lhs_atoms);
        let num: Vec<Atom> = (1..=ki).map(ag).collect();
        let mut den: Vec<Atom> = (1..=ki).map(|i| ag(2 * i)).collect();
        den.extend((1..=ki).map(|i| af(ki + i)));
        let rhs = Expr::term(bigq(1), &num, &den);
        reports.push(report_eq("inverse_product_split", k, None, &lhs, &rhs));
    }
    reports
}

/// The windowed sum sum_(i=3..q-2) 1/(f_i f_(i+1)), 5 <= q <= q_max.  Two
/// clauses per q: the window telescopes to a difference of prefix closed
/// forms, and with the 1/(f_1 f_2 f_q f_(q+1)) prefactor it equals the
/// bordered closed form at k = 3.
pub fn check_windowed_pair_sum(q_max: u32) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    if q_max < 5 {
        return reports;
    }
    let prefix = |m: i64| Expr::term(bigq(1), &[ag(m)], &[ag(2), af(m + 1)]);
    let mut window = Expr::zero();
    for q in 5..=q_max {
        if q == 5 {
            window = pair_term(3);
        } else {
            window = window.add(&pair_term(q - 2));
        }
        let telescoped = prefix(q as i64 - 2).sub(&prefix(2));
        reports.push(report_eq(
            "windowed_pair_sum_telescopes",
            None,
            q,
            &window,
            &telescoped,
        ));
        let lhs = border_prefactor(q).mul(&window);
        reports.push(report_eq(
            "windowed_pair_sum_closed_form",
            None,
            q,
            &lhs,
            &bordered_closed_form(3, q),
        ));
    }
    reports
}

fn nested_reports_from(table: &[Vec<Expr>], k_max: u32, q_max: u32) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    // Tie the recurrence ladder to the definition by direct enumeration.
    for (k, q) in [(1u32, 6u32), (2, 8), (2, 9), (3, 9), (3, 11), (4, 12)] {
        if k > k_max || q > q_max {
            continue;
        }
        reports.push(report_eq(
            "nested_pair_sum_matches_enumeration",
            k,
            q,
            &table[k as usize][q as usize],
            &nested_direct(k as i32, 1, q),
        ));
    }
    // The recurrence itself, on directly enumerated sums.
    for (k, q) in [(1u32, 4u32), (2, 5), (2, 7), (3, 8), (3, 10)] {
        if k > k_max || q > q_max {
            continue;
        }
        let lhs = nested_direct(k as i32, 1, q);
        let rhs = nested_direct(k as i32, 1, q - 1)
            .add(&pair_term(q).mul(&nested_direct(k as i32 - 1, 1, q - 2)));
        reports.push(report_eq("nested_pair_sum_recurrence", k, q, &lhs, &rhs));
    }
    // The closed form across the whole grid.
    for k in 1..=k_max {
        for q in (2 * k - 1)..=q_max {
            reports.push(report_eq(
                "nested_pair_sum_closed_form",
                k,
                q,
                &table[k as usize][q as usize],
                &nested_closed_form(k, q),
            ));
        }
    }
    reports
}

/// Nested sums over 1..q with step-2 separation: recurrence, enumeration
/// tie-in, and closed form for 1 <= k <= k_max, 2k-1 <= q <= q_max.
pub fn check_nested_sum(k_max: u32, q_max: u32) -> Vec<IdentityReport> {
    nested_reports_from(&build_nested_table(k_max, q_max), k_max, q_max)
}

fn bordered_reports_from(table: &[Vec<Expr>], k_max: u32, q_max: u32) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    for (k, q) in [(3u32, 7u32), (3, 10), (4, 11), (5, 12)] {
        if k > k_max || q > q_max {
            continue;
        }
        reports.push(report_eq(
            "bordered_pair_sum_matches_enumeration",
            k,
            q,
            &table[k as usize][q as usize],
            &bordered_direct(k, q),
        ));
    }
    for (k, q) in [(3u32, 6u32), (3, 8), (4, 11)] {
        if k > k_max || q > q_max {
            continue;
        }
        let lhs = bordered_direct(k, q);
        let carry = bordered_direct(k, q - 1).mul(&Expr::term(
            bigq(1),
            &[af(q as i64 - 1)],
            &[af(q as i64 + 1)],
        ));
        let rhs = carry.add(&pair_term(q).mul(&bordered_direct(k - 1, q - 2)));
        reports.push(report_eq("bordered_pair_sum_recurrence", k, q, &lhs, &rhs));
    }
    for k in 3..=k_max {
        for q in (2 * k - 1)..=q_max {
            reports.push(report_eq(
                "bordered_pair_sum_closed_form",
                k,
                q,
                &table[k as usize][q as usize],
                &bordered_closed_form(k, q),
            ));
        }
    }
    reports
}

/// Bordered nested sums (prefactor 1/(f_1 f_2 f_q f_(q+1)), inner indices
/// 3..q-2): recurrence, enumeration tie-in, and closed form for
/// 3 <= k <= k_max, 2k-1 <= q <= q_max.
pub fn check_bordered_nested_sum(k_max: u32, q_max: u32) -> Vec<IdentityReport> {
    bordered_reports_from(&build_bordered_table(k_max, q_max), k_max, q_max)
}

fn difference_reports_from(
    nested: &[Vec<Expr>],
    bordered: &[Vec<Expr>],
    k_max: u32,
    q_max: u32,
) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    for k in 3..=k_max {
        for q in (2 * k - 1)..=q_max {
            let (ki, qi) = (k as i64, q as i64);
            // The two-product difference the closed form hinges on:
            // g_(q-k+1) g_(q-k) - g_(k-1) g_k = g_q g_(q-2k+1).
            let lhs = Expr::g(qi - ki + 1)
                .mul(&Expr::g(qi - ki))
                .sub(&Expr::g(ki - 1).mul(&Expr::g(ki)));
            let rhs = Expr::g(qi).mul(&Expr::g(qi - 2 * ki + 1));
            reports.push(report_eq(
                "antisymmetric_pair_product_difference",
                k,
                q,
                &lhs,
                &rhs,
            ));
            let diff = nested[k as usize][q as usize].sub(&bordered[k as usize][q as usize]);
            reports.push(
                report_eq(
                    "nested_pair_sum_difference",
                    k,
                    q,
                    &diff,
                    &difference_closed_form(k, q),
                )
                .note("denominator product of antisymmetric pairs runs over i = 1..=k"),
            );
        }
    }
    reports
}

/// Difference of the two nested sums against its closed form
/// g_q prod_(i=k+1..2k-1) g_(q-i) / grid denominator, together with the
/// product-difference identity that resolves it.
pub fn check_nested_sum_difference(k_max: u32, q_max: u32) -> Vec<IdentityReport> {
    difference_reports_from(
        &build_nested_table(k_max, q_max),
        &build_bordered_table(k_max, q_max),
        k_max,
        q_max,
    )
}

/// Sums over cycle-deletion families of products over the complement equal
/// a nested sum over deleted-pair positions minus a border correction for
/// tuples that select both boundary pairs:
///
/// ```text
/// sum_(I in cyclic family(q,k)) prod_(i not in I) a_i
///   = nested_k(a_i a_(i+1), wrap a_(q+1) = a_1)
///   - a_1 a_2 * nested_(k-2) over 3..q-2 * a_q a_1
/// ```
///
/// Checked on random rational inputs for 4 <= q <= q_max and every
/// 1 <= k < q/2.  Exact equality per trial; any mismatch fails the batch.
pub fn check_cycle_complement_bridge(q_max: u32, seed: u64, trials: u32) -> Vec<IdentityReport> {
    let ring = Rationals;
    let mut sampler = RationalSampler::new(seed);
    let mut report = IdentityReport::symbolic("cycle_complement_bridge", None, q_max);
    report.seed = Some(seed);
    report.trials = Some(trials);
    'outer: for trial in 0..trials {
        for q in 4..=q_max {
            let a = sampler.values(q as usize);
            let term = |i: u32| -> BigQ {
                let j = if i == q { 1 } else { i + 1 };
                &a[i as usize - 1] * &a[j as usize - 1]
            };
            for k in 1..=(q - 1) / 2 {
                let family = enum_family(FamilyKind::Cyclic, q, k)
                    .expect("family parameters are in range");
                let lhs = ring.sum(
                    family
                        .iter()
                        .map(|subset| subset_product(&ring, &subset.complement(), &a)),
                );
                let border = &a[0] * &a[1] * term(q);
                let rhs = nested_sum(&ring, k as i32, 1, q, &term)
                    - border * nested_sum(&ring, k as i32 - 2, 3, q - 2, &term);
                if lhs != rhs {
                    report = report.fail(format!(
                        "trial {trial}, q = {q}, k = {k}: family sum {lhs} != nested sum {rhs}"
                    ));
                    break 'outer;
                }
            }
        }
    }
    vec![report]
}

/// Grid sizes for [`default_suite`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteGrid {
    pub telescoping_q_max: u32,
    pub split_k_max: u32,
    pub windowed_q_max: u32,
    pub nested_k_max: u32,
    pub nested_q_max: u32,
    pub bridge_q_max: u32,
    pub bridge_trials: u32,
    pub bridge_seed: u64,
}

impl Default for SuiteGrid {
    fn default() -> Self {
        SuiteGrid {
            telescoping_q_max: 40,
            split_k_max: 10,
            windowed_q_max: 40,
            nested_k_max: 5,
            nested_q_max: 30,
            bridge_q_max: 16,
            bridge_trials: 25,
            bridge_seed: 1105,
        }
    }
}

/// Runs every checker in the module on the given grid.  The nested and
/// bordered tables are built once and shared.
pub fn default_suite(grid: &SuiteGrid) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    reports.extend(check_telescoping_pair_sum(grid.telescoping_q_max));
    reports.extend(check_inverse_product_split(grid.split_k_max));
    reports.extend(check_windowed_pair_sum(grid.windowed_q_max));
    let nested = build_nested_table(grid.nested_k_max, grid.nested_q_max);
    let bordered = build_bordered_table(grid.nested_k_max, grid.nested_q_max);
    reports.extend(nested_reports_from(&nested, grid.nested_k_max, grid.nested_q_max));
    reports.extend(bordered_reports_from(&bordered, grid.nested_k_max, grid.nested_q_max));
    reports.extend(difference_reports_from(
        &nested,
        &bordered,
        grid.nested_k_max,
        grid.nested_q_max,
    ));
    reports.extend(check_cycle_complement_bridge(
        grid.bridge_q_max,
        grid.bridge_seed,
        grid.bridge_trials,
    ));
    reports
}
