//! Regular subdivisions, Legendre duals, the singularity criterion, lattice paths and illuminated sets.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{adjugate_i128, det_i128, nonneg_solution, rat, RatMatrix, Rational};
use crate::simplex::{LatticePoint, SimplexContext};
use crate::symweights::{Sign, SymWeight, WeightFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    #[error("empty domain")]
    EmptyDomain,
    #[error("point outside the convex hull of the domain")]
    OutsideHull,
    #[error("too few points for a path")]
    TooFewPoints,
    #[error("empty point set")]
    EmptySet,
    #[error("weight function is not defined on {0}")]
    Undefined(LatticePoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub cells: Vec<Vec<LatticePoint>>,
    pub dim: usize,
}

#[derive(Serialize, Deserialize)]
struct SubdivisionJson {
    cells: Vec<Vec<LatticePoint>>,
}

impl Serialize for Subdivision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubdivisionJson { cells: self.cells.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subdivision {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SubdivisionJson::deserialize(d)?;
        let dim = j.cells.first().and_then(|c| c.first()).map_or(0, |p| p.dim());
        Ok(Subdivision::new(j.cells, dim))
    }
}

impl Subdivision {
    /// Canonical order: points in a cell by ≺, cells lexicographically by coordinates.
    pub fn new(mut cells: Vec<Vec<LatticePoint>>, dim: usize) -> Self {
        for c in &mut cells {
            c.sort();
            c.dedup();
        }
        cells.sort_by(|a, b| {
            let ka: Vec<&Vec<i64>> = a.iter().map(|p| &p.0).collect();
            let kb: Vec<&Vec<i64>> = b.iter().map(|p| &p.0).collect();
            ka.cmp(&kb)
        });
        cells.dedup();
        Subdivision { cells, dim }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePathEdge {
    pub tail: LatticePoint,
    pub head: LatticePoint,
}

/// Coordinates on which the linear span of `points` projects isomorphically.
pub fn frame_coordinates(points: &[LatticePoint]) -> Vec<usize> {
    let rows: Vec<Vec<i64>> = points.iter().map(|p| p.0.clone()).collect();
    let m = RatMatrix::from_int_rows(&rows);
    m.rref().1
}

fn restrict(p: &LatticePoint, coords: &[usize]) -> Vec<i128> {
    coords.iter().map(|&c| p.0[c] as i128).collect()
}

/// Dense integer table of weights: one row per point, one column per symbol, common denominator.
struct DenseWeights {
    symbols: Vec<usize>,
    rows: Vec<Vec<i128>>,
}

impl DenseWeights {
    fn new(vals: &[&SymWeight]) -> Option<Self> {
        let mut symbols: BTreeSet<usize> = BTreeSet::new();
        let mut den = num_bigint::BigInt::one();
        for v in vals {
            for (k, c) in v.coeffs() {
                symbols.insert(*k);
                den = num_integer::Integer::lcm(&den, c.denom());
            }
        }
        let symbols: Vec<usize> = symbols.into_iter().rev().collect();
        let den = Rational::from_integer(den);
        let mut rows = Vec::with_capacity(vals.len());
        for v in vals {
            let mut r = Vec::with_capacity(symbols.len());
            for k in &symbols {
                let x = (v.coeff(*k) * &den).to_integer();
                let x: i128 = num_traits::ToPrimitive::to_i128(&x)?;
                if x.abs() > (1i128 << 60) {
                    return None;
                }
                r.push(x);
            }
            rows.push(r);
        }
        Some(DenseWeights { symbols, rows })
    }

    /// Sign of `det·h(v) − Σ num_s h(s)`, highest symbol first.
    fn sign_of(&self, det: i128, v: usize, simplex: &[usize], num: &[i128]) -> Option<Sign> {
        for k in 0..self.symbols.len() {
            let mut acc = det.checked_mul(self.rows[v][k])?;
            for (s, c) in simplex.iter().zip(num) {
                acc = acc.checked_sub(c.checked_mul(self.rows[*s][k])?)?;
            }
            if acc != 0 {
                return Some(if acc > 0 { Sign::Positive } else { Sign::Negative });
            }
        }
        Some(Sign::Zero)
    }
}

/// Lower-hull subdivision of `{(v, ν(v))}` over `domain`.
pub fn regular_subdivision(nu: &WeightFunction, domain: &[LatticePoint]) -> Result<Subdivision, DualError> {
    if domain.is_empty() {
        return Err(DualError::EmptyDomain);
    }
    let mut pts: Vec<LatticePoint> = domain.to_vec();
    pts.sort();
    pts.dedup();
    let vals: Vec<&SymWeight> =
        pts.iter().map(|p| nu.get(p).ok_or_else(|| DualError::Undefined(p.clone()))).collect::<Result<_, _>>()?;
    let dim = pts[0].dim();
    if pts.len() == 1 {
        return Ok(Subdivision::new(vec![pts], dim));
    }
    let coords = frame_coordinates(&pts);
    let k1 = coords.len();
    let proj: Vec<Vec<i128>> = pts.iter().map(|p| restrict(p, &coords)).collect();
    let dense = DenseWeights::new(&vals);
    let m = pts.len();

    let check = |subset: &[usize]| -> Option<Vec<usize>> {
        let b: Vec<Vec<i128>> = (0..k1).map(|r| subset.iter().map(|&s| proj[s][r]).collect()).collect();
        let det = det_i128(&b);
        if det == 0 {
            return None;
        }
        let adj = adjugate_i128(&b);
        let sgn = det.signum();
        let mut cell = subset.to_vec();
        for v in 0..m {
            if subset.contains(&v) {
                continue;
            }
            let num: Vec<i128> = (0..k1).map(|i| (0..k1).map(|j| adj[i][j] * proj[v][j]).sum()).collect();
            let s = dense
                .as_ref()
                .and_then(|dw| dw.sign_of(det, v, subset, &num))
                .unwrap_or_else(|| slow_sign(det, &vals, v, subset, &num));
            let s = if sgn < 0 { flip(s) } else { s };
            match s {
                Sign::Negative => return None,
                Sign::Zero => cell.push(v),
                Sign::Positive => {}
            }
        }
        cell.sort();
        Some(cell)
    };

    let firsts: Vec<usize> = (0..m).collect();
    let found: Vec<Vec<usize>> = firsts
        .par_iter()
        .flat_map_iter(|&f| {
            let mut local = Vec::new();
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for_each_subset_starting(m, k1, f, |subset| {
                if let Some(c) = check(subset) {
                    if seen.insert(c.clone()) {
                        local.push(c);
                    }
                }
            });
            local
        })
        .collect();
    let uniq: BTreeSet<Vec<usize>> = found.into_iter().collect();
    let cells = uniq.into_iter().map(|c| c.into_iter().map(|i| pts[i].clone()).collect()).collect();
    Ok(Subdivision::new(cells, dim))
}

fn flip(s: Sign) -> Sign {
    match s {
        Sign::Negative => Sign::Positive,
        Sign::Zero => Sign::Zero,
        Sign::Positive => Sign::Negative,
    }
}

fn slow_sign(det: i128, vals: &[&SymWeight], v: usize, subset: &[usize], num: &[i128]) -> Sign {
    let mut acc = vals[v].scale(&Rational::from_integer(det.into()));
    for (s, c) in subset.iter().zip(num) {
        acc.add_scaled(vals[*s], &Rational::from_integer((-c).into()));
    }
    acc.sign()
}

/// Calls `f` on every increasing `k`-subset of `0..m` whose smallest element is `first`.
fn for_each_subset_starting(m: usize, k: usize, first: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 || first + k > m {
        return;
    }
    let mut idx: Vec<usize> = (first..first + k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 1 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i <= 1 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Barycentric coordinates of `x` with respect to affinely independent `simplex`, if `x` is in its span.
fn barycentric(x: &[Rational], simplex: &[LatticePoint]) -> Option<Vec<Rational>> {
    let h = x.len();
    let mut m = RatMatrix::zeros(h + 1, simplex.len());
    for (j, p) in simplex.iter().enumerate() {
        for i in 0..h {
            m.set(i, j, rat(p.0[i]));
        }
        m.set(h, j, Rational::one());
    }
    let mut b = x.to_vec();
    b.push(Rational::one());
    m.solve(&b)
}

fn affinely_spanning_subset(cell: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut chosen: Vec<LatticePoint> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for p in cell {
        let mut r = p.0.clone();
        r.push(1);
        rows.push(r);
        if crate::exactlin::rank_int(&rows) > chosen.len() {
            chosen.push(p.clone());
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Value at `x` of the convex piecewise-linear function whose graph is the lower hull.
pub fn legendre_value(nu: &WeightFunction, x: &[Rational]) -> Result<SymWeight, DualError> {
    let domain = nu.domain();
    if domain.is_empty() {
        return Err(DualError::EmptyDomain);
    }
    if !in_convex_hull(x, &domain) {
        return Err(DualError::OutsideHull);
    }
    let sub = regular_subdivision(nu, &domain)?;
    let mut best: Option<SymWeight> = None;
    for cell in &sub.cells {
        let s = affinely_spanning_subset(cell);
        let Some(lam) = barycentric(x, &s) else { continue };
        let mut v = SymWeight::zero();
        for (p, l) in s.iter().zip(&lam) {
            v.add_scaled(&nu.values[p], l);
        }
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or(DualError::OutsideHull)
}

pub fn in_convex_hull(x: &[Rational], points: &[LatticePoint]) -> bool {
    let h = x.len();
    let mut m = RatMatrix::zeros(h + 1, points.len());
    for (j, p) in points.iter().enumerate() {
        for i in 0..h {
            m.set(i, j, rat(p.0[i]));
        }
        m.set(h, j, Rational::one());
    }
    let mut b = x.to_vec();
    b.push(Rational::one());
    nonneg_solution(&m, &b).is_some()
}

/// Level sets of ν in increasing order of value.
pub fn levels(nu: &WeightFunction) -> Vec<(SymWeight, Vec<LatticePoint>)> {
    let mut entries: Vec<(&LatticePoint, &SymWeight)> = nu.values.iter().collect();
    entries.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
    let mut out: Vec<(SymWeight, Vec<LatticePoint>)> = Vec::new();
    for (p, v) in entries {
        match out.last_mut() {
            Some((val, pts)) if val == v => pts.push(p.clone()),
            _ => out.push((v.clone(), vec![p.clone()])),
        }
    }
    out
}

/// Kernel of `α ↦ Σ α_v v` modulo the span of `prior`.
pub fn level_kernel(level: &[LatticePoint], prior: &[LatticePoint]) -> Vec<Vec<Rational>> {
    let h = level[0].0.len();
    let prior_cols: Vec<Vec<i64>> = prior.iter().map(|p| p.0.clone()).collect();
    let ann = crate::exactlin::annihilator(&prior_cols, h);
    let cols: Vec<Vec<i64>> = level.iter().map(|p| p.0.clone()).collect();
    let x = RatMatrix::from_int_columns(&cols, h);
    if ann.rows == 0 {
        return (0..level.len()).map(|i| unit(level.len(), i)).collect();
    }
    ann.mul(&x).kernel_basis()
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Some kernel vector with every entry nonzero exists iff no coordinate vanishes on the whole kernel.
pub fn has_all_nonzero_vector(kernel: &[Vec<Rational>], len: usize) -> bool {
    !kernel.is_empty() && (0..len).all(|j| kernel.iter().any(|v| !v[j].is_zero()))
}

pub fn is_singular_at_origin(nu: &WeightFunction) -> bool {
    let mut prior: Vec<LatticePoint> = Vec::new();
    for (_, level) in levels(nu) {
        let ker = level_kernel(&level, &prior);
        if !has_all_nonzero_vector(&ker, level.len()) {
            return false;
        }
        prior.extend(level);
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricType {
    NotSingular,
    SingularNonMaximal,
    SingularMaximal,
}

pub fn geometric_type_check(nu: &WeightFunction) -> GeometricType {
    if !is_singular_at_origin(nu) {
        return GeometricType::NotSingular;
    }
    let distinct = levels(nu).len();
    if distinct + nu.n + 1 == nu.values.len() {
        GeometricType::SingularMaximal
    } else {
        GeometricType::SingularNonMaximal
    }
}

pub fn complete_path(a: &[LatticePoint]) -> Result<Vec<LatticePathEdge>, DualError> {
    if a.len() < 2 {
        return Err(DualError::TooFewPoints);
    }
    let mut s = a.to_vec();
    s.sort();
    Ok(s.windows(2).map(|p| LatticePathEdge { tail: p[0].clone(), head: p[1].clone() }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Connected,
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDescriptor {
    pub kind: PathKind,
    pub point: LatticePoint,
    pub edges: Vec<LatticePathEdge>,
}

/// The connected paths `Γ_w` and the disconnected paths missing the edge into `w`.
pub fn pencil_paths(ctx: &SimplexContext) -> Vec<PathDescriptor> {
    let full = complete_path(&ctx.points).unwrap_or_default();
    let mut out = Vec::new();
    for w in &ctx.points {
        let rest: Vec<LatticePoint> = ctx.points.iter().filter(|p| *p != w).cloned().collect();
        out.push(PathDescriptor {
            kind: PathKind::Connected,
            point: w.clone(),
            edges: complete_path(&rest).unwrap_or_default(),
        });
    }
    for (i, w) in ctx.points.iter().enumerate().skip(1) {
        let edges = full.iter().enumerate().filter(|(j, _)| *j != i - 1).map(|(_, e)| e.clone()).collect();
        out.push(PathDescriptor { kind: PathKind::Disconnected, point: w.clone(), edges });
    }
    out
}

/// `w − a` lies in the cone spanned by `b − a`, `b ∈ A`.
fn direction_enters(w: &LatticePoint, a: &LatticePoint, set: &[LatticePoint]) -> bool {
    let gens: Vec<Vec<i64>> = set.iter().filter(|b| *b != a).map(|b| b.sub(a).0).collect();
    if gens.is_empty() {
        return false;
    }
    let h = a.0.len();
    let m = RatMatrix::from_int_columns(&gens, h);
    let target: Vec<Rational> = w.sub(a).0.into_iter().map(rat).collect();
    nonneg_solution(&m, &target).is_some()
}

/// Points `a ∈ A` with `[a, w] ∩ conv(A) = {a}`.
pub fn illuminated_set(w: &LatticePoint, a: &[LatticePoint]) -> Result<Vec<LatticePoint>, DualError> {
    if a.is_empty() {
        return Err(DualError::EmptySet);
    }
    let mut out: Vec<LatticePoint> =
        a.par_iter().filter(|p| *p != w && !direction_enters(w, p, a)).cloned().collect();
    out.sort();
    Ok(out)
}

/// `face` is the full set of points of `set` on some face of `conv(set)`.
pub fn is_face(face: &[LatticePoint], set: &[LatticePoint]) -> bool {
    if face.is_empty() {
        return true;
    }
    let h = face[0].0.len();
    let k = face.len() as i64;
    let g: Vec<Rational> = (0..h).map(|i| Rational::new(face.iter().map(|p| p.0[i]).sum::<i64>().into(), k.into())).collect();
    for a in set {
        if face.contains(a) {
            continue;
        }
        // a must not lie in the tangent cone of conv(set) at g: g − a ∉ cone{b − g}.
        let mut m = RatMatrix::zeros(h, set.len());
        for (j, b) in set.iter().enumerate() {
            for i in 0..h {
                m.set(i, j, rat(b.0[i]) - &g[i]);
            }
        }
        let target: Vec<Rational> = (0..h).map(|i| &g[i] - rat(a.0[i])).collect();
        if nonneg_solution(&m, &target).is_some() {
            return false;
        }
    }
    true
}

/// Normalized volume of a lattice simplex relative to the lattice of its affine span:
/// the gcd of the maximal minors of its edge vectors.
pub fn normalized_volume(simplex: &[LatticePoint]) -> i128 {
    if simplex.len() < 2 {
        return 1;
    }
    let edges: Vec<Vec<i128>> = simplex[1..].iter().map(|p| p.sub(&simplex[0]).0.iter().map(|&x| x as i128).collect()).collect();
    let k = edges.len();
    let h = edges[0].len();
    let mut g = 0i128;
    let mut rows: Vec<usize> = (0..k).collect();
    if k > h {
        return 0;
    }
    loop {
        let minor: Vec<Vec<i128>> = rows.iter().map(|&r| edges.iter().map(|e| e[r]).collect()).collect();
        g = num_integer::Integer::gcd(&g, &det_i128(&minor));
        let mut i = k;
        while i > 0 && rows[i - 1] == h - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return g;
        }
        rows[i - 1] += 1;
        for j in i..k {
            rows[j] = rows[j - 1] + 1;
        }
    }
}

/// Lower-hull certificate: an affine function equals ν on the cell and is strictly below elsewhere.
pub fn certify_cell(nu: &WeightFunction, cell: &[LatticePoint], domain: &[LatticePoint]) -> bool {
    let s = affinely_spanning_subset(cell);
    for v in domain {
        let x: Vec<Rational> = v.0.iter().map(|&c| rat(c)).collect();
        let Some(lam) = barycentric(&x, &s) else { return false };
        let mut interp = SymWeight::zero();
        for (p, l) in s.iter().zip(&lam) {
            interp.add_scaled(&nu.values[p], l);
        }
        let diff = &nu.values[v] - &interp;
        let on = cell.contains(v);
        match diff.sign() {
            Sign::Zero if on => {}
            Sign::Positive if !on => {}
            _ => return false,
        }
    }
    true
}

pub fn rational_point(v: &[i64], den: i64) -> Vec<Rational> {
    v.iter().map(|&c| Rational::new(c.into(), den.into())).collect()
}

pub fn is_negative_free(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
