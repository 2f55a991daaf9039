//! Recursive enumeration by gluing along parallel and type IV projections.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::gradedcircuits::{first_level_multiplicity, multiplicity, GradedCircuit, LevelTag, Projection, SectionComparator};
use crate::simplex::{compositions, project_type_iv, type_iv_offset, LatticePoint, SimplexContext};

use super::elementary::elementary_levels;
use super::{Block, MgcDescriptor, MgcError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumeratedCircuit {
    pub circuit: GradedCircuit,
    pub descriptor: MgcDescriptor,
}

impl EnumeratedCircuit {
    pub fn multiplicity(&self) -> u64 {
        multiplicity(&self.circuit)
    }

    pub fn first_level_multiplicity(&self) -> u64 {
        first_level_multiplicity(&self.circuit)
    }
}

#[derive(Debug, Clone)]
struct Raw {
    levels: Vec<Vec<LatticePoint>>,
    desc: Vec<Block>,
}

#[derive(Debug, Clone)]
enum Fiber {
    Parallel { l1: usize, l2: usize },
    TypeIV { l: usize, b: i64, c: Vec<i64>, deg: i64 },
}

impl Fiber {
    fn points(&self, y: &LatticePoint) -> Vec<LatticePoint> {
        match self {
            Fiber::Parallel { l1, l2 } => compositions(y.0[*l1], l2 - l1 + 1)
                .into_iter()
                .map(|comp| {
                    let mut x = y.0[..*l1].to_vec();
                    x.extend(comp);
                    x.extend_from_slice(&y.0[l1 + 1..]);
                    LatticePoint(x)
                })
                .collect(),
            Fiber::TypeIV { l, b, c, deg } => {
                let mut out = Vec::new();
                for t in 0..=*deg {
                    let s = t - b + 1;
                    let z: Vec<i64> = y.0.iter().zip(c).map(|(yi, ci)| yi - s * ci).collect();
                    if z.iter().any(|&v| v < 0) {
                        continue;
                    }
                    for comp in compositions(z[0], l + 1) {
                        let mut x = comp;
                        x.extend_from_slice(&z[1..]);
                        x.push(t);
                        out.push(LatticePoint(x));
                    }
                }
                out
            }
        }
    }
}

/// Lifts projected levels by the min-section of `base`.
fn lift_levels(base: &GradedCircuit, fiber: &Fiber, levels: &[Vec<LatticePoint>]) -> Option<Vec<Vec<LatticePoint>>> {
    let cmp = SectionComparator::new(base)?;
    let mut memo: HashMap<&LatticePoint, LatticePoint> = HashMap::new();
    let mut out = Vec::with_capacity(levels.len());
    for level in levels {
        let mut lifted = Vec::with_capacity(level.len());
        for y in level {
            let x = match memo.get(y) {
                Some(x) => x.clone(),
                None => {
                    let pts = fiber.points(y);
                    let x = cmp.min(pts.iter())?.clone();
                    memo.insert(y, x.clone());
                    x
                }
            };
            lifted.push(x);
        }
        lifted.sort();
        out.push(lifted);
    }
    Some(out)
}

fn map_levels(levels: &[Vec<LatticePoint>], f: impl Fn(&[i64]) -> Vec<i64>) -> Vec<Vec<LatticePoint>> {
    levels.iter().map(|l| l.iter().map(|p| LatticePoint(f(&p.0))).collect()).collect()
}

fn single(levels: Vec<Vec<LatticePoint>>, block: Block) -> Vec<Raw> {
    levels.into_iter().map(|l| Raw { levels: vec![l], desc: vec![block] }).collect()
}

/// Full-span Mikhalkin graded circuits of `Δ_dd^{(n)}` centered at `w`.
fn full(n: usize, dd: i64, w: &LatticePoint) -> Vec<Raw> {
    let c = &w.0;
    let mut out: Vec<Raw> = Vec::new();
    if n == 0 {
        return out;
    }
    if n == 1 {
        if let Ok(l) = elementary_levels(1, w, &LevelTag::I { index: 0 }) {
            out.extend(single(l, Block::I));
        }
        return out;
    }
    if n == 2 {
        if let Ok(l) = elementary_levels(2, w, &LevelTag::II { index: 1 }) {
            out.extend(single(l, Block::II));
        }
    }
    if c[..n - 1].iter().all(|&x| x == 0) && c[n - 1] > 0 {
        if let Ok(l) = elementary_levels(n, w, &LevelTag::III { lower: 0, upper: n }) {
            out.extend(single(l, Block::III(n)));
        }
    }
    if c[0] > 0 && c[1..n].iter().all(|&x| x == 0) && c[n] > 0 {
        out.extend(iv_graded(n, c[0], c[n]));
    }
    let wn = c[n];
    let rest = dd - wn;
    if rest <= 0 {
        return out;
    }
    // (I) parallel gluing of a type I circuit over the last coordinate
    if wn > 0 {
        let sub = full(n - 1, rest, &LatticePoint(c[..n].to_vec()));
        let top = elementary_levels(1, &LatticePoint(vec![rest, wn]), &LevelTag::I { index: 0 }).unwrap_or_default();
        glue_parallel(n, dd, w, &sub, &top, 0, n - 1, &[Block::I], |p| {
            let mut x = p.to_vec();
            x.push(wn);
            x
        }, &mut out);
    }
    // (II)
    if n >= 3 && c[0] == 0 && wn > 0 {
        let sub = full(n - 2, rest, &LatticePoint(c[1..n].to_vec()));
        if let Ok(top) = elementary_levels(2, &LatticePoint(vec![0, rest, wn]), &LevelTag::II { index: 1 }) {
            glue_parallel(n, dd, w, &sub, &top, 1, n - 1, &[Block::II], |p| {
                let mut x = vec![0];
                x.extend_from_slice(p);
                x.push(wn);
                x
            }, &mut out);
        }
    }
    for r in 2..n {
        // (III)
        if c[..r - 1].iter().all(|&x| x == 0) {
            let sub = full(n - r, rest, &LatticePoint(c[r - 1..n].to_vec()));
            let mut y = vec![0i64; r + 1];
            y[r - 1] = rest;
            y[r] = wn;
            if let Ok(top) = elementary_levels(r, &LatticePoint(y), &LevelTag::III { lower: 0, upper: r }) {
                glue_parallel(n, dd, w, &sub, &top, r - 1, n - 1, &[Block::III(r)], |p| {
                    let mut x = vec![0i64; r - 1];
                    x.extend_from_slice(p);
                    x.push(wn);
                    x
                }, &mut out);
            }
        }
        // (IV)
        if wn > 0 && c[n - r + 1..n].iter().all(|&x| x == 0) {
            let sub = full(n - r, rest, &LatticePoint(c[..=n - r].to_vec()));
            if sub.is_empty() {
                continue;
            }
            for chain in iv_graded(r, rest, wn) {
                let before = out.len();
                glue_parallel(n, dd, w, &sub, &chain.levels, 0, n - r, &chain.desc, |p| {
                    let mut x = p.to_vec();
                    x.extend(std::iter::repeat(0).take(r - 1));
                    x.push(wn);
                    x
                }, &mut out);
                debug_assert!(out.len() >= before);
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn glue_parallel(
    n: usize,
    dd: i64,
    w: &LatticePoint,
    sub: &[Raw],
    top: &[Vec<LatticePoint>],
    l1: usize,
    l2: usize,
    top_desc: &[Block],
    embed: impl Fn(&[i64]) -> Vec<i64>,
    out: &mut Vec<Raw>,
) {
    if top.is_empty() {
        return;
    }
    let fiber = Fiber::Parallel { l1, l2 };
    for s in sub {
        let levels = map_levels(&s.levels, &embed);
        let base = GradedCircuit::new(n, dd, w.clone(), levels);
        // `top` holds either alternatives of one level (elementary) or one chain's levels
        let chains: Vec<Vec<Vec<LatticePoint>>> = if top_desc.len() == 1 && !matches!(top_desc[0], Block::IV(_)) {
            top.iter().map(|l| vec![l.clone()]).collect()
        } else {
            vec![top.to_vec()]
        };
        for ch in chains {
            if let Some(lifted) = lift_levels(&base, &fiber, &ch) {
                let mut levels = base.levels.clone();
                levels.extend(lifted);
                let mut desc = s.desc.clone();
                desc.extend_from_slice(top_desc);
                out.push(Raw { levels, desc });
            }
        }
    }
}

/// Type IV graded chains in `Δ_{a+b}^{(r)}` at `[a,0,…,0,b]`, spanning all `r` dimensions.
fn iv_graded(r: usize, a: i64, b: i64) -> Vec<Raw> {
    let mut out = Vec::new();
    for_each_iv_state(r, a, b, None, &mut |levels, l, desc| {
        if l == r - 1 {
            out.push(Raw { levels: levels.to_vec(), desc: desc.to_vec() });
        }
    });
    out
}

fn iv_center(r: usize, a: i64, b: i64) -> LatticePoint {
    let mut w = vec![0i64; r + 1];
    w[0] = a;
    w[r] = b;
    LatticePoint(w)
}

/// Visits every prefix state `(levels, ℓ, descriptor)` of type IV chains, optionally for one `u`.
fn for_each_iv_state(
    r: usize,
    a: i64,
    b: i64,
    only_u: Option<&LatticePoint>,
    visit: &mut dyn FnMut(&[Vec<LatticePoint>], usize, &[Block]),
) {
    let w = iv_center(r, a, b);
    let Ok(firsts) = elementary_levels(r, &w, &LevelTag::IV { lower: 0, upper: r }) else {
        return;
    };
    for first in firsts {
        let u = first[0].clone();
        if only_u.is_some_and(|v| *v != u) {
            continue;
        }
        extend_iv(r, a, b, &u, &w, vec![first], 1, vec![Block::IV(r)], visit);
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_iv(
    r: usize,
    a: i64,
    b: i64,
    u: &LatticePoint,
    w: &LatticePoint,
    levels: Vec<Vec<LatticePoint>>,
    l: usize,
    desc: Vec<Block>,
    visit: &mut dyn FnMut(&[Vec<LatticePoint>], usize, &[Block]),
) {
    visit(&levels, l, &desc);
    if l + 1 >= r {
        return;
    }
    let base = GradedCircuit::new(r, a + b, w.clone(), levels.clone());
    let fiber = Fiber::TypeIV { l, b, c: type_iv_offset(u, w, l), deg: a + b };
    let wp = project_type_iv(w, l, u, w).expect("valid projection");
    let m = r - l - 1;
    if let Ok(top) = elementary_levels(m, &wp, &LevelTag::I { index: 0 }) {
        if let Some(lifted) = lift_levels(&base, &fiber, &top) {
            let mut lv = levels.clone();
            lv.extend(lifted);
            let mut d2 = desc.clone();
            d2.push(Block::I);
            extend_iv(r, a, b, u, w, lv, l + 1, d2, visit);
        }
    }
    for lp in 2..=m {
        if wp.0[1..lp].iter().any(|&x| x != 0) || wp.0[lp] == 0 {
            continue;
        }
        let tail = wp.0[lp + 1..].to_vec();
        for chain in iv_graded(lp, wp.0[0], wp.0[lp]) {
            let embedded = map_levels(&chain.levels, |p| {
                let mut x = p.to_vec();
                x.extend_from_slice(&tail);
                x
            });
            if let Some(lifted) = lift_levels(&base, &fiber, &embedded) {
                let mut lv = levels.clone();
                lv.extend(lifted);
                let mut d2 = desc.clone();
                d2.extend_from_slice(&chain.desc);
                extend_iv(r, a, b, u, w, lv, l + lp, d2, visit);
            }
        }
    }
}

fn finish(n: usize, d: i64, w: &LatticePoint, raws: Vec<Raw>) -> Vec<EnumeratedCircuit> {
    raws.into_iter()
        .map(|r| {
            let levels = r.levels.into_iter().map(|mut l| {
                l.sort();
                l
            });
            EnumeratedCircuit {
                circuit: GradedCircuit::new(n, d, w.clone(), levels.collect()),
                descriptor: MgcDescriptor(r.desc),
            }
        })
        .collect()
}

fn sort_key(e: &EnumeratedCircuit) -> (LatticePoint, String, Vec<Vec<LatticePoint>>) {
    (e.circuit.center.clone(), e.descriptor.to_string(), e.circuit.levels.clone())
}

fn sort_output(v: &mut [EnumeratedCircuit]) {
    v.sort_by_cached_key(sort_key);
}

/// All full-dimensional Mikhalkin graded circuits of the context, sorted by center, descriptor and levels.
pub fn enumerate_mgc(ctx: &SimplexContext) -> Vec<EnumeratedCircuit> {
    let mut all: Vec<EnumeratedCircuit> = ctx
        .points
        .par_iter()
        .flat_map_iter(|w| finish(ctx.n, ctx.d, w, full(ctx.n, ctx.d, w)))
        .collect();
    sort_output(&mut all);
    all
}

/// Circuits centered at one point.
pub fn enumerate_mgc_at(ctx: &SimplexContext, w: &LatticePoint) -> Result<Vec<EnumeratedCircuit>, MgcError> {
    if !ctx.contains(w) {
        return Err(MgcError::OutOfSimplex);
    }
    let mut v = finish(ctx.n, ctx.d, w, full(ctx.n, ctx.d, w));
    sort_output(&mut v);
    Ok(v)
}

/// Glues `c_prime` on top of `c_tilde` by min-section lifting along `pr`.
pub fn glue(c_tilde: &GradedCircuit, c_prime: &GradedCircuit, pr: &Projection) -> Result<GradedCircuit, MgcError> {
    let hv = |m: &str| MgcError::HypothesesViolated(m.to_string());
    let target = pr.apply(&c_tilde.center);
    if target != c_prime.center {
        return Err(hv("the projected center differs from the center of the top circuit"));
    }
    if c_tilde.levels.iter().flatten().any(|p| pr.apply(p) != target) {
        return Err(hv("the lower circuit is not contained in the central fiber"));
    }
    let cmp = SectionComparator::new(c_tilde).ok_or_else(|| hv("the lower circuit does not determine a section"))?;
    let ctx = SimplexContext::new(c_tilde.n, c_tilde.d);
    let mut levels = c_tilde.levels.clone();
    for level in &c_prime.levels {
        let mut lifted = Vec::new();
        for y in level {
            let x = cmp.min(ctx.points.iter().filter(|x| pr.apply(x) == *y)).ok_or(MgcError::OutOfSimplex)?;
            lifted.push(x.clone());
        }
        lifted.sort();
        levels.push(lifted);
    }
    Ok(GradedCircuit::new(c_tilde.n, c_tilde.d, c_tilde.center.clone(), levels))
}

/// Prefixes of dimension exactly `l` of type IV chains with projected first point `u'`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainSet {
    pub circuits: Vec<EnumeratedCircuit>,
    /// Sum of multiplicities.
    pub s: u64,
    /// Sum of first-level multiplicities.
    pub s_real: u64,
}

/// `u' = [Σ_{i≤ℓ} u_i, u_{ℓ+1}, …, u_n]` for chains in `Δ_d^{(n)}` centered at `[d − u_n − 1, 0, …, 0, u_n + 1]`.
pub fn type_iv_chains(n: usize, d: i64, u_proj: &LatticePoint, l: usize) -> Result<ChainSet, MgcError> {
    let pre = |m: &str| MgcError::PreconditionViolated(m.to_string());
    if l == 0 || l >= n || u_proj.0.len() != n - l + 1 || !u_proj.is_nonneg() {
        return Err(pre("need 0 < l < n and u' of length n − l + 1"));
    }
    let b = u_proj.0[n - l] + 1;
    let a = d - b;
    if a < 1 || u_proj.0[..n - l].iter().sum::<i64>() != a + 1 || u_proj.0[0] < 1 {
        return Err(pre("u' does not lie over a type IV center"));
    }
    let w = iv_center(n, a, b);
    let mut circuits = Vec::new();
    for head in compositions(u_proj.0[0], l + 1) {
        if head[0] == 0 {
            continue;
        }
        let mut u = head;
        u.extend_from_slice(&u_proj.0[1..]);
        let u = LatticePoint(u);
        for_each_iv_state(n, a, b, Some(&u), &mut |levels, ll, desc| {
            if ll == l {
                circuits.push(Raw { levels: levels.to_vec(), desc: desc.to_vec() });
            }
        });
    }
    let mut circuits = finish(n, d, &w, circuits);
    sort_output(&mut circuits);
    let s = circuits.iter().map(|c| c.multiplicity()).sum();
    let s_real = circuits.iter().map(|c| c.first_level_multiplicity()).sum();
    Ok(ChainSet { circuits, s, s_real })
}

#[allow(non_snake_case)]
pub fn type_IV_chains(n: usize, d: i64, u_proj: &LatticePoint, l: usize) -> Result<ChainSet, MgcError> {
    type_iv_chains(n, d, u_proj, l)
}
