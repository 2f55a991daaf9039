//! Acceptance suite. One line per criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tropsing::counting::{self, leading_coeff_estimate, CountReport, FitReport};
use tropsing::exactlin::{rat, rat_frac, rat_to_f64, Rational};
use tropsing::gradedcircuits::{admits_mikhalkin, first_level_multiplicity};
use tropsing::mgcenum::{elementary_circuit, enumerate_mgc, mikhalkin_triangulation, type_iv_chains, MgcDescriptor};
use tropsing::realsigns::{average_mt, multinodal_average};
use tropsing::simplex::{LatticePoint, SimplexContext};
use tropsing::symweights::{mikhalkin_certificate, WeightFunction};
use tropsing::gradedcircuits::LevelTag;
use tropsing::tropdual::{geometric_type_check, is_singular_at_origin, normalized_volume, regular_subdivision, GeometricType};

type Outcome = Result<String, String>;

const SEQUENCE_TABLE: [[f64; 26]; 3] = [
    [
        1.000, 2.000, 2.000, 2.500, 2.750, 3.025, 3.225, 3.402, 3.543, 3.662, 3.760, 3.841, 3.908, 3.963, 4.009, 4.047, 4.078,
        4.104, 4.125, 4.143, 4.158, 4.170, 4.180, 4.188, 4.195, 4.201,
    ],
    [
        1.000, 1.000, 0.500, 0.500, 0.375, 0.325, 0.262, 0.220, 0.181, 0.150, 0.124, 0.102, 0.085, 0.070, 0.058, 0.048, 0.040,
        0.033, 0.027, 0.022, 0.019, 0.015, 0.013, 0.010, 0.009, 0.007,
    ],
    [
        1.000, 1.000, 1.500, 1.667, 1.917, 2.075, 2.226, 2.343, 2.443, 2.524, 2.592, 2.648, 2.694, 2.732, 2.764, 2.790, 2.812,
        2.830, 2.845, 2.857, 2.867, 2.875, 2.882, 2.888, 2.893, 2.897,
    ],
];

fn sequence_table() -> Outcome {
    let t = counting::recurrence_sequences(25);
    let mut worst = 0.0f64;
    for (name, seq, row) in [("alpha", &t.alpha, &SEQUENCE_TABLE[0]), ("beta", &t.beta, &SEQUENCE_TABLE[1]), ("gamma", &t.gamma, &SEQUENCE_TABLE[2])] {
        for (i, printed) in row.iter().enumerate() {
            let err = (rat_to_f64(&seq[i]) - printed).abs();
            worst = worst.max(err);
            if err > 0.0005 + 1e-12 {
                return Err(format!("{name}_{i} = {} vs printed {printed}", counting::decimal(&seq[i], 4)));
            }
        }
    }
    Ok(format!("78 entries, max |error| {worst:.2e}"))
}

fn bounds() -> Outcome {
    let b = counting::bounds_check(1000).map_err(|e| e.to_string())?;
    match b.checks.iter().find(|c| !c.holds) {
        None => Ok(format!("{} bounds hold up to n = {}", b.checks.len(), b.max_n)),
        Some(c) => Err(format!("{} fails at {:?}", c.name, c.first_failure)),
    }
}

fn genfun() -> Outcome {
    let res = counting::beta_genfun_residual(0.4, 400).map_err(|e| e.to_string())?;
    if res >= 1e-6 {
        return Err(format!("residual {res:e}"));
    }
    let t = counting::recurrence_sequences(201);
    let ratio = rat_to_f64(&(&t.beta[201] / &t.beta[200]));
    let limit = 3.0 * 3f64.sqrt() / (2.0 * std::f64::consts::PI);
    let rel = (ratio / limit - 1.0).abs();
    if rel > 0.01 {
        return Err(format!("β_201/β_200 = {ratio:.6}, limit {limit:.6}"));
    }
    Ok(format!("residual {res:.1e}; β_201/β_200 = {ratio:.6} ({:.3}% from 3√3/2π)", rel * 100.0))
}

fn triangulation() -> Outcome {
    let mut cases = 0;
    for (n, dmax) in [(2usize, 10i64), (3, 5)] {
        for d in 1..=dmax {
            let ctx = SimplexContext::new(n, d);
            let t = mikhalkin_triangulation(&ctx.points, None).map_err(|e| e.to_string())?;
            if t.len() as i64 != d.pow(n as u32) {
                return Err(format!("({n},{d}): {} cells", t.len()));
            }
            if let Some(c) = t.cells.iter().find(|c| normalized_volume(c) != 1) {
                return Err(format!("({n},{d}): cell {c:?} not unimodular"));
            }
            let nu = common::super_increasing(n, d, &ctx.points);
            let reg = regular_subdivision(&nu, &ctx.points).map_err(|e| e.to_string())?;
            if reg != t {
                return Err(format!("({n},{d}): differs from the super-increasing regular subdivision"));
            }
            cases += 1;
        }
    }
    let fig = mikhalkin_triangulation(&SimplexContext::new(2, 4).points, None).map_err(|e| e.to_string())?;
    if fig != common::quartic_triangulation() {
        return Err("Δ_4^(2) differs from the reference triangulation".into());
    }
    Ok(format!("{cases} simplices; reference Δ_4^(2) triangulation reproduced"))
}

fn line_total() -> Outcome {
    for d in 2..=50 {
        let s: u64 = enumerate_mgc(&SimplexContext::new(1, d)).iter().map(|e| e.multiplicity()).sum();
        if s as i64 != 2 * (d - 1) {
            return Err(format!("d = {d}: Σm = {s}"));
        }
    }
    Ok("Σm(C) = 2(d−1) for 2 ≤ d ≤ 50".into())
}

const WINDOWS: [(usize, std::ops::RangeInclusive<i64>); 3] = [(2, 20..=24), (3, 12..=16), (4, 8..=12)];

fn fits() -> &'static BTreeMap<usize, FitReport> {
    static FITS: OnceLock<BTreeMap<usize, FitReport>> = OnceLock::new();
    FITS.get_or_init(|| {
        WINDOWS
            .iter()
            .map(|(n, ds)| {
                let reports: Vec<CountReport> = ds.clone().map(|d| counting::count_report(&SimplexContext::new(*n, d))).collect();
                (*n, counting::fit_from_reports(*n, &reports).expect("consecutive window"))
            })
            .collect()
    })
}

fn within(est: &Rational, target: &Rational, tol: f64) -> bool {
    if target.is_zero() {
        return rat_to_f64(est).abs() <= 0.05;
    }
    (rat_to_f64(est) / rat_to_f64(target) - 1.0).abs() <= tol
}

fn complex_leading() -> Outcome {
    let mut out = Vec::new();
    for (n, tol) in [(2usize, 0.05), (3, 0.10), (4, 0.15)] {
        let f = &fits()[&n];
        let target = rat(n as i64 + 1);
        if !within(&f.total, &target, tol) {
            return Err(format!("n = {n}: estimate {} vs {target}", f.total));
        }
        out.push(format!("n={n}: {}", f.total));
    }
    Ok(out.join(", "))
}

fn per_descriptor() -> Outcome {
    let mut checked = 0;
    for (n, tol, only) in [(2usize, 0.10, Some(&["I||I", "III^(2)", "IV_2"][..])), (3, 0.15, None), (4, 0.20, Some(&["III^(4)", "IV_4||IV_2"][..]))] {
        let f = &fits()[&n];
        for (name, target) in common::leading_rows(n) {
            if only.is_some_and(|o| !o.contains(&name)) {
                continue;
            }
            let key: MgcDescriptor = name.parse().map_err(|e| format!("{e}"))?;
            let est = f.per_descriptor.get(&key).cloned().unwrap_or_else(|| rat(0));
            if !within(&est, &target, tol) {
                return Err(format!("{name}: estimate {est} vs {target}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} rows within tolerance"))
}

fn real_leading() -> Outcome {
    let alpha = counting::recurrence_sequences(3).alpha;
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let f = &fits()[&n];
        if !within(&f.total_real, &alpha[n], 0.10) {
            return Err(format!("n = {n}: estimate {} vs α = {}", f.total_real, alpha[n]));
        }
        out.push(format!("n={n}: {}", f.total_real));
    }
    Ok(out.join(", "))
}

fn exact_leading(values: &[(i64, BigInt)], deg: usize) -> Result<Rational, String> {
    // the deg-th difference must be constant over the tail and give the coefficient
    let a = leading_coeff_estimate(values, deg).map_err(|e| e.to_string())?;
    let b = leading_coeff_estimate(&values[..values.len() - 1], deg).map_err(|e| e.to_string())?;
    if a != b {
        return Err(format!("not polynomial of degree {deg} on the window: {b} then {a}"));
    }
    Ok(a)
}

fn chains_and_census() -> Outcome {
    let beta = counting::recurrence_sequences(3).beta;
    let mut out = Vec::new();
    for l in [2usize, 3] {
        let n = l + 1;
        // fit on the top of u'_0 ∈ [10, 30]
        let us: Vec<i64> = (30 - l as i64 - 1..=30).collect();
        let mut s = Vec::new();
        let mut sr = Vec::new();
        for &u0 in &us {
            let cs = type_iv_chains(n, u0, &LatticePoint(vec![u0, 0]), l).map_err(|e| e.to_string())?;
            s.push((u0, BigInt::from(cs.s)));
            sr.push((u0, BigInt::from(cs.s_real)));
        }
        let (a, b) = (exact_leading(&s, l)?, exact_leading(&sr, l)?);
        if a != rat(1) || b != beta[l] {
            return Err(format!("ℓ = {l}: s leading {a}, s^R leading {b} (β = {})", beta[l]));
        }
        out.push(format!("ℓ={l}: 1, {b}"));
    }
    for n in [2usize, 3] {
        let mut v = Vec::new();
        for wm in 10..=30i64 {
            let mut w = vec![0i64; n + 1];
            w[n - 1] = wm;
            w[n] = 1;
            let ctx = SimplexContext::new(n, wm + 1);
            let cs = elementary_circuit(&ctx, &LatticePoint(w), &LevelTag::III { lower: 0, upper: n }).map_err(|e| e.to_string())?;
            v.push((wm, BigInt::from(cs.len())));
        }
        let c = exact_leading(&v, n - 1)?;
        if c != rat(1) {
            return Err(format!("type III census n = {n}: leading {c}"));
        }
        out.push(format!("III census n={n}: 1"));
    }
    Ok(out.join(", "))
}

fn oracle() -> Outcome {
    let mut total = 0;
    for (n, dmax) in [(2usize, 6i64), (3, 4)] {
        for d in 2..=dmax {
            let brute: BTreeMap<_, u64> = common::brute_force_mgc(n, d)
                .into_iter()
                .map(|k| {
                    let m = k.1.iter().map(|l| if l.len() == 2 { 2 } else { 1 }).product();
                    (k, m)
                })
                .collect();
            let ours: BTreeMap<_, u64> =
                enumerate_mgc(&SimplexContext::new(n, d)).iter().map(|e| (e.circuit.canonical_key(), e.multiplicity())).collect();
            if brute != ours {
                let extra = brute.keys().filter(|k| !ours.contains_key(k)).count();
                let missing = ours.keys().filter(|k| !brute.contains_key(k)).count();
                return Err(format!("({n},{d}): {extra} only in oracle, {missing} only in enumeration"));
            }
            total += ours.len();
        }
    }
    Ok(format!("{total} circuits over 8 simplices"))
}

fn singularity() -> Outcome {
    if !is_singular_at_origin(&common::nodal_cubic()) {
        return Err("nodal cubic weights not singular".into());
    }
    let ctx = SimplexContext::new(2, 3);
    let mut rng = StdRng::seed_from_u64(0x7a0b);
    for trial in 0..100 {
        let nu = WeightFunction::from_rationals(
            2,
            3,
            ctx.points.iter().map(|p| {
                let quad: i64 = p.0.iter().map(|x| x * x).sum();
                let jitter = rat_frac(rng.gen_range(1..1_000_000), 1_000_000_000);
                (p.clone(), rat(quad) + jitter)
            }),
        );
        if is_singular_at_origin(&nu) {
            return Err(format!("random convex weight #{trial} reported singular"));
        }
    }
    let flat = WeightFunction::from_rationals(1, 2, SimplexContext::new(1, 2).points.into_iter().map(|p| (p, rat(0))));
    if !is_singular_at_origin(&flat) || geometric_type_check(&flat) != GeometricType::SingularMaximal {
        return Err("ν ≡ 0 on Δ_2^(1) not singular maximal".into());
    }
    Ok("nodal cubic singular; 100/100 convex generic regular; ν ≡ 0 maximal".into())
}

fn mikhalkin_condition() -> Outcome {
    let mut certs = 0;
    for (n, d) in [(1usize, 3i64), (2, 2), (2, 3)] {
        let ctx = SimplexContext::new(n, d);
        for w in &ctx.points {
            if !mikhalkin_certificate(&ctx, w).map_err(|e| e.to_string())? {
                return Err(format!("path weights fail at ({n},{d}), w = {w}"));
            }
            certs += 1;
        }
    }
    let mut circuits = 0;
    for (n, dmax) in [(2usize, 6i64), (3, 4)] {
        for d in 2..=dmax {
            for e in enumerate_mgc(&SimplexContext::new(n, d)) {
                if !admits_mikhalkin(&e.circuit) {
                    return Err(format!("{} at {} rejected", e.descriptor, e.circuit.center));
                }
                circuits += 1;
            }
        }
    }
    if admits_mikhalkin(&common::parallel_top_circuit()) {
        return Err("parallel-top circuit accepted".into());
    }
    Ok(format!("{certs} path certificates, {circuits} circuits admitted, parallel-top circuit rejected"))
}

fn real_averages() -> Outcome {
    let mut n_avg = 0;
    for d in [2i64, 3] {
        let ctx = SimplexContext::new(2, d);
        for e in enumerate_mgc(&ctx) {
            let avg = average_mt(&e.circuit, &ctx).map_err(|x| x.to_string())?;
            if avg != rat(first_level_multiplicity(&e.circuit) as i64) {
                return Err(format!("{} at {}: Ω-average {avg}", e.descriptor, e.circuit.center));
            }
            n_avg += 1;
        }
    }
    let ctx = SimplexContext::new(2, 4);
    let all = enumerate_mgc(&ctx);
    let mut picked = Vec::new();
    for name in ["I||I", "III^(2)", "IV_2"] {
        let e = all.iter().find(|e| e.descriptor.to_string() == name).ok_or(format!("no {name} at (2,4)"))?;
        let avg = multinodal_average(std::slice::from_ref(&e.circuit), &ctx).map_err(|x| x.to_string())?;
        if avg != rat(1) {
            return Err(format!("{name}: full-cube average {avg}"));
        }
        picked.push(name);
    }
    let a = all.iter().find(|e| e.descriptor.to_string() == "I||I" && e.circuit.center == common::lp(&[1, 1, 2])).ok_or("no I||I at [1,1,2]")?;
    let b = all.iter().find(|e| e.descriptor.to_string() == "III^(2)" && e.circuit.center == common::lp(&[0, 4, 0])).ok_or("no III^(2) at [0,4,0]")?;
    let pair = [a.circuit.clone(), b.circuit.clone()];
    let avg = multinodal_average(&pair, &ctx).map_err(|x| x.to_string())?;
    if avg != rat(1) {
        return Err(format!("δ = 2 pair average {avg}"));
    }
    Ok(format!("{n_avg} Ω-averages = m(C₁); full cube = 1 for {}; δ=2 pair {} + {} = 1", picked.join(", "), a.circuit.center, b.circuit.center))
}

fn delta_nodal() -> Outcome {
    let d = 40i64;
    let r = counting::count_report(&SimplexContext::new(2, d));
    let c = counting::delta_nodal_count(&r, 2, false).map_err(|e| e.to_string())?;
    let ratio = c.to_f64().unwrap() / (d as f64).powi(4);
    let target = 9.0 / 8.0;
    let rel = ratio / target - 1.0;
    let msg = format!("count/d⁴ = {ratio:.4} at d = {d}, target 9/8, off by {:.1}%", rel * 100.0);
    if rel.abs() <= 0.10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    tropsing::mgcenum::configure_threads();
    let criteria: [(&str, fn() -> Outcome, u64); 14] = [
        ("sequence_table", sequence_table, 1),
        ("bounds", bounds, 10),
        ("beta-genfun", genfun, 1),
        ("triangulation", triangulation, 10),
        ("dim1-total", line_total, 1),
        ("complex-leading", complex_leading, 600),
        ("per-descriptor", per_descriptor, 600),
        ("real-leading", real_leading, 600),
        ("chains-census", chains_and_census, 600),
        ("oracle", oracle, 600),
        ("singularity", singularity, 600),
        ("mikhalkin-condition", mikhalkin_condition, 600),
        ("real-averages", real_averages, 600),
        ("delta-nodal", delta_nodal, 600),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let el = t.elapsed();
        let r = match r {
            Ok(m) if el > Duration::from_secs(*budget) => Err(format!("{m}; took {el:.1?}, budget {budget}s")),
            r => r,
        };
        match r {
            Ok(m) => println!("PASS {:>2} {name}: {m} [{el:.2?}]", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {m} [{el:.2?}]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
