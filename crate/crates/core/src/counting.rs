//! Aggregated counts, finite-difference fits, δ-nodal sums and the α, β, γ sequences.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{rat, rat_serde, rat_to_f64, Rational};
use crate::mgcenum::{enumerate_mgc, EnumeratedCircuit, MgcDescriptor};
use crate::simplex::SimplexContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("need at least {need} values, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("the d values are not consecutive")]
    NotConsecutive,
    #[error("z lies outside the disc of convergence")]
    OutOfRadius,
    #[error("invalid argument: {0}")]
    BadArgument(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DescriptorStats {
    pub count: u64,
    pub total_mult: u64,
    pub total_m1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub d: i64,
    pub per_descriptor: BTreeMap<MgcDescriptor, DescriptorStats>,
    /// `(Σ m(C), Σ m(C₁))`.
    pub totals: (u64, u64),
    /// `a ↦ K_{d,a}`, circuits centered at points with `w_n = d − a`.
    pub k: BTreeMap<i64, u64>,
    /// Same grouping with `Σ m(C₁)` in place of the count.
    pub k_real: BTreeMap<i64, u64>,
}

impl CountReport {
    pub fn circuit_count(&self) -> u64 {
        self.per_descriptor.values().map(|s| s.count).sum()
    }
}

pub fn count_report(ctx: &SimplexContext) -> CountReport {
    report_from(ctx.n, ctx.d, &enumerate_mgc(ctx))
}

pub fn report_from(n: usize, d: i64, circuits: &[EnumeratedCircuit]) -> CountReport {
    let mut per: BTreeMap<MgcDescriptor, DescriptorStats> = BTreeMap::new();
    let mut k: BTreeMap<i64, u64> = (0..=d).map(|a| (a, 0)).collect();
    let mut k_real = k.clone();
    for e in circuits {
        let (m, m1) = (e.multiplicity(), e.first_level_multiplicity());
        let s = per.entry(e.descriptor.clone()).or_default();
        s.count += 1;
        s.total_mult += m;
        s.total_m1 += m1;
        let a = d - e.circuit.center.0[n];
        *k.get_mut(&a).unwrap() += 1;
        *k_real.get_mut(&a).unwrap() += m1;
    }
    let totals = per.values().fold((0, 0), |t, s| (t.0 + s.total_mult, t.1 + s.total_m1));
    CountReport { n, d, per_descriptor: per, totals, k, k_real }
}

/// `n`-th finite difference at the largest `d`, divided by `n!`.
pub fn leading_coeff_estimate(values: &[(i64, BigInt)], n: usize) -> Result<Rational, CountError> {
    if values.len() < n + 1 {
        return Err(CountError::TooFewPoints { need: n + 1, got: values.len() });
    }
    let mut v = values.to_vec();
    v.sort_by_key(|x| x.0);
    let tail = &v[v.len() - n - 1..];
    if tail.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return Err(CountError::NotConsecutive);
    }
    let mut diffs: Vec<BigInt> = tail.iter().map(|x| x.1.clone()).collect();
    for _ in 0..n {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    Ok(Rational::new(diffs[0].clone(), fact))
}

/// Leading coefficients per descriptor and for both totals over a window of degrees.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub n: usize,
    pub degrees: Vec<i64>,
    #[serde(serialize_with = "rat_serde::map")]
    pub per_descriptor: BTreeMap<MgcDescriptor, Rational>,
    #[serde(with = "rat_serde")]
    pub total: Rational,
    #[serde(with = "rat_serde")]
    pub total_real: Rational,
}

pub fn fit_leading_coefficients(n: usize, degrees: &[i64]) -> Result<FitReport, CountError> {
    let reports: Vec<CountReport> = degrees.iter().map(|&d| count_report(&SimplexContext::new(n, d))).collect();
    fit_from_reports(n, &reports)
}

pub fn fit_from_reports(n: usize, reports: &[CountReport]) -> Result<FitReport, CountError> {
    let mut keys: Vec<MgcDescriptor> = reports.iter().flat_map(|r| r.per_descriptor.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let series = |f: &dyn Fn(&CountReport) -> u64| -> Vec<(i64, BigInt)> {
        reports.iter().map(|r| (r.d, BigInt::from(f(r)))).collect()
    };
    let mut per = BTreeMap::new();
    for k in keys {
        let s = series(&|r| r.per_descriptor.get(&k).map_or(0, |s| s.total_mult));
        per.insert(k, leading_coeff_estimate(&s, n)?);
    }
    Ok(FitReport {
        n,
        degrees: reports.iter().map(|r| r.d).collect(),
        per_descriptor: per,
        total: leading_coeff_estimate(&series(&|r| r.totals.0), n)?,
        total_real: leading_coeff_estimate(&series(&|r| r.totals.1), n)?,
    })
}

/// `Σ_{0<k₁<…<k_δ<d} Π K_{d,kᵢ}`, the elementary symmetric sum of the interior groups.
pub fn delta_nodal_count(report: &CountReport, delta: usize, real: bool) -> Result<BigInt, CountError> {
    if delta == 0 {
        return Err(CountError::BadArgument("δ must be at least 1".into()));
    }
    let groups = if real { &report.k_real } else { &report.k };
    let mut e: Vec<BigInt> = vec![BigInt::zero(); delta + 1];
    e[0] = BigInt::one();
    for a in 1..report.d {
        let x = BigInt::from(*groups.get(&a).unwrap_or(&0));
        for j in (1..=delta).rev() {
            let add = &e[j - 1] * &x;
            e[j] += add;
        }
    }
    Ok(e[delta].clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceTriple {
    #[serde(serialize_with = "rat_serde::vec")]
    pub alpha: Vec<Rational>,
    #[serde(serialize_with = "rat_serde::vec")]
    pub beta: Vec<Rational>,
    #[serde(serialize_with = "rat_serde::vec")]
    pub gamma: Vec<Rational>,
}

/// Exact sequences for indices `0..=max_n`; `β₀` is set to 1 and never enters a recurrence.
///
/// Runs on the integers `n!·α_n`, `r!·β_r` and `n!·γ_n`, which satisfy binomial-weighted recurrences.
pub fn recurrence_sequences(max_n: usize) -> SequenceTriple {
    integer_sequences(max_n, false)
}

/// Same, but with γ following the parenthesization `(1 + β_{n−1−r}·γ_r)` of the theorem statement.
pub fn recurrence_sequences_printed_gamma(max_n: usize) -> SequenceTriple {
    integer_sequences(max_n, true)
}

/// `n!·α_n`, `r!·β_r`, `n!·γ_n` and `n!` as integers.
struct ScaledSequences {
    fact: Vec<BigInt>,
    a: Vec<BigInt>,
    b: Vec<BigInt>,
    g: Vec<BigInt>,
}

fn scaled_sequences(m: usize, printed_gamma: bool) -> ScaledSequences {
    let m = m.max(1);
    let mut fact: Vec<BigInt> = vec![BigInt::one()];
    for i in 1..=m {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    let mut binom_row: Vec<BigInt> = vec![BigInt::one()];
    let mut rows: Vec<Vec<BigInt>> = vec![binom_row.clone()];
    for _ in 1..=m {
        let mut next = Vec::with_capacity(binom_row.len() + 1);
        next.push(BigInt::one());
        for j in 1..binom_row.len() {
            next.push(&binom_row[j - 1] + &binom_row[j]);
        }
        next.push(BigInt::one());
        binom_row = next;
        rows.push(binom_row.clone());
    }
    let mut b: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for r in 2..=m {
        let mut s = b[r - 1].clone();
        // the sum is symmetric under r0 ↔ r − 1 − r0
        let (lo, hi) = (1, r - 2);
        let mut i = lo;
        while i <= hi {
            let j = r - 1 - i;
            let term = &rows[r - 1][i] * (&b[i] * &b[j]);
            if i < j {
                s += &term + &term;
            } else if i == j {
                s += term;
            } else {
                break;
            }
            i += 1;
        }
        b.push(s);
    }
    let c: Vec<BigInt> = (0..=m).map(|k| &fact[k] + &b[k]).collect();
    let mut a: Vec<BigInt> = vec![BigInt::one(), BigInt::from(2)];
    let mut g: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for n in 2..=m {
        let mut sa = a[n - 1].clone();
        let mut sg = g[n - 1].clone();
        for r in 0..=n - 2 {
            let k = n - 1 - r;
            if printed_gamma {
                sa += &rows[n - 1][r] * &c[k] * &a[r];
                // (n−1)!·(1 + β_k γ_r) = (n−1)! + C(n−1, r)·b_k·g_r
                sg += &fact[n - 1] + &rows[n - 1][r] * &b[k] * &g[r];
            } else {
                let t = &rows[n - 1][r] * &c[k];
                sa += &t * &a[r];
                sg += &t * &g[r];
            }
        }
        a.push(sa);
        g.push(sg);
    }
    ScaledSequences { fact, a, b, g }
}

fn integer_sequences(max_n: usize, printed_gamma: bool) -> SequenceTriple {
    let sc = scaled_sequences(max_n, printed_gamma);
    let to_rat = |v: &[BigInt]| -> Vec<Rational> {
        v.iter().take(max_n + 1).enumerate().map(|(i, x)| Rational::new(x.clone(), sc.fact[i].clone())).collect()
    };
    let mut beta = to_rat(&sc.b);
    beta[0] = rat(1);
    SequenceTriple { alpha: to_rat(&sc.a), beta, gamma: to_rat(&sc.g) }
}

/// Radius of convergence of the β generating function.
pub fn beta_radius() -> f64 {
    2.0 * std::f64::consts::PI / (3.0 * 3f64.sqrt())
}

/// `|Σ_{r=1}^{terms} β_r z^r + 1/2 − (√3/2)·tan(√3z/2 + π/6)|`.
pub fn beta_genfun_residual(z: f64, terms: usize) -> Result<f64, CountError> {
    if !(z.abs() < beta_radius()) {
        return Err(CountError::OutOfRadius);
    }
    if terms < 1 {
        return Err(CountError::BadArgument("terms must be positive".into()));
    }
    let seq = recurrence_sequences(terms);
    let mut sum = 0.0f64;
    let mut zp = 1.0f64;
    for b in &seq.beta[1..=terms] {
        zp *= z;
        sum += rat_to_f64(b) * zp;
    }
    let h = 3f64.sqrt() / 2.0;
    let closed = h * (h * z + std::f64::consts::PI / 6.0).tan();
    Ok((sum + 0.5 - closed).abs())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub holds: bool,
    /// First index violating the bound, if any.
    pub first_failure: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub max_n: usize,
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// All five bound families, compared exactly on the scaled integer sequences.
pub fn bounds_check(max_n: usize) -> Result<BoundsReport, CountError> {
    if max_n < 100 {
        return Err(CountError::BadArgument("bounds are checked up to at least 100".into()));
    }
    let sc = scaled_sequences(max_n, false);
    let f = &sc.fact;
    let first = |from: usize, ok: &dyn Fn(usize) -> bool| (from..=max_n).find(|&i| !ok(i));
    let (two, three, four, five) = (BigInt::from(2), BigInt::from(3), BigInt::from(4), BigInt::from(5));
    let mut beta_fail = None;
    let (mut p9, mut p10) = (BigInt::from(81), BigInt::from(100));
    for r in 2..=max_n {
        p9 *= 9;
        p10 *= 10;
        // β_r ≤ (9/10)^{r+1}  ⇔  b_r·10^{r+1} ≤ 9^{r+1}·r!
        if &sc.b[r] * &p10 > &p9 * &f[r] && beta_fail.is_none() {
            beta_fail = Some(r);
        }
    }
    let mk = |name: &str, fail: Option<usize>| BoundCheck { name: name.to_string(), holds: fail.is_none(), first_failure: fail };
    let checks = vec![
        mk("alpha_n > 4 for n >= 14", first(14, &|i| sc.a[i] > &four * &f[i])),
        mk("alpha_n < 5 for all n", first(0, &|i| sc.a[i] < &five * &f[i])),
        mk("gamma_n >= 5/2 for n >= 9", first(9, &|i| &two * &sc.g[i] >= &five * &f[i])),
        mk("gamma_n < 3 for all n", first(0, &|i| sc.g[i] < &three * &f[i])),
        mk("beta_r <= 0.9^(r+1) for r >= 2", beta_fail),
    ];
    Ok(BoundsReport { max_n, checks })
}

/// Decimal rendering with `digits` places, rounding half away from zero.
pub fn decimal(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Rational::from_integer(scale.clone());
    let r = scaled.abs().round().to_integer();
    let sign = if x.is_negative() && !r.is_zero() { "-" } else { "" };
    let int = &r / &scale;
    let frac = &r % &scale;
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_u64().unwrap_or(0), width = digits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[(i64, i64)]) -> Vec<(i64, BigInt)> {
        v.iter().map(|&(d, x)| (d, BigInt::from(x))).collect()
    }

    #[test]
    fn report_line() {
        let r = count_report(&SimplexContext::new(1, 5));
        assert_eq!(r.totals, (8, 8));
        assert_eq!(r.circuit_count(), 4);
        assert_eq!(r.k.values().sum::<u64>(), 4);
        let r = count_report(&SimplexContext::new(2, 4));
        for k in r.per_descriptor.keys() {
            assert!(["I||I", "II", "III^(2)", "IV_2"].contains(&k.to_string().as_str()));
        }
        let s = r.per_descriptor.values().fold((0, 0), |t, s| (t.0 + s.total_mult, t.1 + s.total_m1));
        assert_eq!(s, r.totals);
    }

    #[test]
    fn finite_differences() {
        let p = |d: i64| 3 * d * d;
        assert_eq!(leading_coeff_estimate(&big(&[(5, p(5)), (6, p(6)), (7, p(7))]), 2).unwrap(), rat(3));
        let q = |d: i64| 3 * d * d + 7 * d + 1;
        assert_eq!(leading_coeff_estimate(&big(&[(7, q(7)), (5, q(5)), (6, q(6))]), 2).unwrap(), rat(3));
        assert_eq!(leading_coeff_estimate(&big(&[(5, 1), (6, 2)]), 2), Err(CountError::TooFewPoints { need: 3, got: 2 }));
        assert_eq!(leading_coeff_estimate(&big(&[(5, 1), (6, 2), (8, 3)]), 2), Err(CountError::NotConsecutive));
    }

    #[test]
    fn delta_nodal_small() {
        let r = count_report(&SimplexContext::new(2, 6));
        let interior: u64 = (1..6).map(|a| r.k[&a]).sum();
        assert_eq!(delta_nodal_count(&r, 1, false).unwrap(), BigInt::from(interior));
        assert_eq!(delta_nodal_count(&r, 6, false).unwrap(), BigInt::zero());
        assert!(delta_nodal_count(&r, 0, false).is_err());
    }

    #[test]
    fn sequences_exact() {
        let s = recurrence_sequences(6);
        assert_eq!(s.alpha[4], Rational::new(11.into(), 4.into()));
        assert_eq!(s.beta[4], Rational::new(3.into(), 8.into()));
        assert_eq!(s.gamma[3], Rational::new(5.into(), 3.into()));
        assert_eq!((s.alpha[0].clone(), s.alpha[1].clone(), s.beta[1].clone()), (rat(1), rat(2), rat(1)));
        assert_eq!((s.gamma[0].clone(), s.gamma[1].clone()), (rat(1), rat(1)));
        assert_eq!(s.alpha.len(), 7);
        assert_eq!(decimal(&s.gamma[3], 3), "1.667");
        assert_eq!(s.gamma[4], Rational::new(23.into(), 12.into()));
        let p = recurrence_sequences_printed_gamma(6);
        assert_eq!(p.alpha, s.alpha);
        assert_eq!(p.gamma[3], s.gamma[3]);
        assert_eq!(p.gamma[4], Rational::new(43.into(), 24.into()));
    }

    #[test]
    fn genfun() {
        assert!(beta_genfun_residual(0.0, 10).unwrap() < 1e-15);
        assert!(beta_genfun_residual(0.4, 400).unwrap() < 1e-6);
        assert_eq!(beta_genfun_residual(1.3, 10), Err(CountError::OutOfRadius));
    }

    #[test]
    fn bounds() {
        let b = bounds_check(100).unwrap();
        assert!(b.all_hold(), "{b:?}");
        assert!(bounds_check(20).is_err());
        // the strict α bound starts exactly at 14
        let s = recurrence_sequences(14);
        assert!(s.alpha[13] < rat(4) && s.alpha[14] > rat(4));
    }
}
