#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use tropsing::exactlin::{rank_int, rat, Rational};
use tropsing::gradedcircuits::{admits_mikhalkin_in, compare_by_decomposition, GradedCircuit, LevelTag};
use tropsing::mgcenum::elementary_circuit;
use tropsing::simplex::{LatticePoint, SimplexContext};
use tropsing::symweights::{SymWeight, WeightFunction};
use tropsing::tropdual::Subdivision;

pub fn lp(v: &[i64]) -> LatticePoint {
    LatticePoint(v.to_vec())
}

/// Weights ν(v) = −c_v of a cubic with a node at the origin.
pub fn nodal_cubic() -> WeightFunction {
    let c: [([i64; 3], i64); 10] = [
        ([3, 0, 0], 2),
        ([2, 1, 0], 3),
        ([1, 2, 0], 3),
        ([0, 3, 0], 0),
        ([2, 0, 1], 3),
        ([1, 1, 1], 3),
        ([0, 2, 1], 1),
        ([1, 0, 2], 1),
        ([0, 1, 2], 0),
        ([0, 0, 3], -3),
    ];
    WeightFunction::from_rationals(2, 3, c.into_iter().map(|(p, v)| (lp(&p), rat(-v))))
}

/// Height-2 circuit with a parallel top level.
pub fn parallel_top_circuit() -> GradedCircuit {
    GradedCircuit::new(
        2,
        4,
        lp(&[1, 2, 1]),
        vec![vec![lp(&[2, 1, 1]), lp(&[0, 3, 1])], vec![lp(&[1, 1, 2]), lp(&[0, 2, 2])]],
    )
}

/// The 16 triangles of the Mikhalkin triangulation of Δ_4^(2); (a, b) is the point [4 − a − b, b, a].
pub fn quartic_triangulation() -> Subdivision {
    let tris = [
        [(1, 0), (0, 1), (0, 0)],
        [(1, 0), (0, 1), (0, 2)],
        [(1, 0), (0, 3), (0, 2)],
        [(1, 0), (0, 3), (0, 4)],
        [(1, 0), (1, 1), (0, 4)],
        [(1, 2), (1, 1), (0, 4)],
        [(1, 2), (1, 3), (0, 4)],
        [(1, 0), (2, 0), (1, 1)],
        [(1, 2), (2, 0), (1, 1)],
        [(1, 2), (2, 0), (1, 3)],
        [(2, 1), (2, 0), (1, 3)],
        [(2, 2), (1, 3), (2, 1)],
        [(3, 0), (2, 0), (2, 1)],
        [(3, 0), (2, 2), (2, 1)],
        [(3, 0), (3, 1), (2, 2)],
        [(3, 0), (4, 0), (3, 1)],
    ];
    Subdivision::new(tris.iter().map(|t| t.iter().map(|&(a, b)| lp(&[4 - a - b, b, a])).collect()).collect(), 2)
}

/// ν(v_k) = M_k with k the ≺-rank of v_k within `pts`.
pub fn super_increasing(n: usize, d: i64, pts: &[LatticePoint]) -> WeightFunction {
    let mut sorted = pts.to_vec();
    sorted.sort();
    let mut nu = WeightFunction::new(n, d);
    for (k, p) in sorted.into_iter().enumerate() {
        nu.values.insert(p, SymWeight::symbol(k + 1));
    }
    nu
}

/// Leading coefficients of Σm(C) per descriptor, dimensions 2 to 4.
pub fn leading_rows(n: usize) -> Vec<(&'static str, Rational)> {
    let q = |a: i64, b: i64| tropsing::exactlin::rat_frac(a, b);
    match n {
        2 => vec![("I||I", q(2, 1)), ("II", q(0, 1)), ("III^(2)", q(1, 2)), ("IV_2", q(1, 2))],
        3 => vec![
            ("I||I||I", q(4, 3)),
            ("II||I", q(0, 1)),
            ("III^(2)||I", q(1, 3)),
            ("IV_2||I", q(1, 3)),
            ("I||II", q(0, 1)),
            ("I||III^(2)", q(2, 3)),
            ("III^(3)", q(1, 3)),
            ("I||IV_2", q(2, 3)),
            ("IV_3||I", q(1, 3)),
        ],
        4 => vec![
            ("I||I||I||I", q(2, 3)),
            ("II||I||I", q(0, 1)),
            ("III^(2)||I||I", q(1, 6)),
            ("IV_2||I||I", q(1, 6)),
            ("I||II||I", q(0, 1)),
            ("I||III^(2)||I", q(1, 3)),
            ("III^(3)||I", q(1, 6)),
            ("I||IV_2||I", q(1, 3)),
            ("IV_3||I||I", q(1, 6)),
            ("I||I||II", q(0, 1)),
            ("II||II", q(0, 1)),
            ("III^(2)||II", q(0, 1)),
            ("IV_2||II", q(0, 1)),
            ("I||I||III^(2)", q(1, 2)),
            ("II||III^(2)", q(0, 1)),
            ("III^(2)||III^(2)", q(1, 8)),
            ("IV_2||III^(2)", q(1, 8)),
            ("I||III^(3)", q(1, 2)),
            ("III^(4)", q(1, 4)),
            ("I||I||IV_2", q(1, 2)),
            ("II||IV_2", q(0, 1)),
            ("III^(2)||IV_2", q(1, 8)),
            ("IV_2||IV_2", q(1, 8)),
            ("I||IV_3||I", q(1, 2)),
            ("IV_4||I||I", q(1, 6)),
            ("IV_4||IV_2", q(1, 12)),
        ],
        _ => vec![],
    }
}

// Brute-force MGC constructor. It shares only the elementary templates, the validity test and the
// slow decomposition comparator with the library; the search below is a plain closure under gluing.

pub type Key = (LatticePoint, Vec<Vec<LatticePoint>>);

fn all_tags(n: usize) -> Vec<LevelTag> {
    let mut t = Vec::new();
    for l in 0..n {
        t.push(LevelTag::I { index: l });
    }
    for l in 1..n {
        t.push(LevelTag::II { index: l });
    }
    for u in 2..=n {
        for r in 0..u - 1 {
            t.push(LevelTag::III { lower: r, upper: u });
            t.push(LevelTag::IV { lower: r, upper: u });
        }
    }
    t
}

fn rank(w: &LatticePoint, levels: &[Vec<LatticePoint>], extra: Option<&LatticePoint>) -> usize {
    let rows: Vec<Vec<i64>> = std::iter::once(&w.0)
        .chain(levels.iter().flatten().map(|p| &p.0))
        .chain(extra.map(|p| &p.0))
        .cloned()
        .collect();
    rank_int(&rows)
}

fn subsets<T: Clone>(v: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        for mut s in subsets(&v[i + 1..], k - 1) {
            s.insert(0, v[i].clone());
            out.push(s);
        }
    }
    out
}

/// `p` is the ν-minimum of its fiber along `c` for every admitted Mikhalkin ν.
fn is_section_point(c: &GradedCircuit, ctx: &SimplexContext, p: &LatticePoint, r: usize) -> bool {
    ctx.points.iter().all(|y| y == p || rank(&c.center, &c.levels, Some(&y.sub(p))) > r || compare_by_decomposition(c, p, y) == Some(true))
}

/// Completes a type IV first level to every graded circuit spanning its face whose upper levels are
/// lifted type I circuits of the (one-dimensional) projection.
fn complete_iv(ctx: &SimplexContext, w: &LatticePoint, levels: &mut Vec<Vec<LatticePoint>>, pool: &[LatticePoint], target: usize, out: &mut Vec<GradedCircuit>) {
    let r = rank(w, levels, None);
    if r == target {
        out.push(GradedCircuit::new(ctx.n, ctx.d, w.clone(), levels.clone()));
        return;
    }
    let prefix = GradedCircuit::new(ctx.n, ctx.d, w.clone(), levels.clone());
    let cand: Vec<LatticePoint> =
        pool.iter().filter(|p| rank(w, levels, Some(p)) > r && is_section_point(&prefix, ctx, p, r)).cloned().collect();
    for pair in subsets(&cand, 2) {
        let mid = LatticePoint(pair[0].0.iter().zip(&pair[1].0).zip(&w.0).map(|((a, b), c)| a + b - 2 * c).collect());
        if rank(w, levels, Some(&mid)) != r {
            continue;
        }
        levels.push(pair);
        if rank(w, levels, None) == r + 1 && admits_mikhalkin_in(&GradedCircuit::new(ctx.n, ctx.d, w.clone(), levels.clone()), ctx) {
            complete_iv(ctx, w, levels, pool, target, out);
        }
        levels.pop();
    }
}

/// Elementary graded Mikhalkin circuits of `ctx` at every center.
pub fn elementary_all(ctx: &SimplexContext) -> Vec<GradedCircuit> {
    let mut out = Vec::new();
    for w in &ctx.points {
        for t in all_tags(ctx.n) {
            let Ok(cs) = elementary_circuit(ctx, w, &t) else { continue };
            for c in cs {
                let c = GradedCircuit::new(c.n, c.d, c.center.clone(), c.levels.clone());
                if !admits_mikhalkin_in(&c, ctx) {
                    continue;
                }
                match t {
                    LevelTag::IV { lower, upper } => {
                        let pool: Vec<LatticePoint> = ctx
                            .points
                            .iter()
                            .filter(|x| *x != w && (0..=ctx.n).all(|i| (lower..=upper).contains(&i) || x.0[i] == w.0[i]))
                            .cloned()
                            .collect();
                        complete_iv(ctx, w, &mut c.levels.clone(), &pool, 1 + upper - lower, &mut out);
                    }
                    _ => out.push(c),
                }
            }
        }
    }
    out
}

fn merge(x: &LatticePoint, l1: usize, l2: usize) -> LatticePoint {
    let mut v = x.0[..l1].to_vec();
    v.push(x.0[l1..=l2].iter().sum());
    v.extend_from_slice(&x.0[l2 + 1..]);
    LatticePoint(v)
}

fn key(c: &GradedCircuit) -> Key {
    let mut l = c.levels.clone();
    for x in &mut l {
        x.sort();
    }
    (c.center.clone(), l)
}

/// Full-span graded circuits reachable from elementary ones by gluing along coordinate merges,
/// keeping only those that admit Mikhalkin condition.
pub fn brute_force_mgc(n: usize, d: i64) -> BTreeSet<Key> {
    let ctx = SimplexContext::new(n, d);
    let elem: BTreeMap<usize, Vec<GradedCircuit>> = (1..=n).map(|k| (k, elementary_all(&SimplexContext::new(k, d)))).collect();
    let mut seen: BTreeSet<Key> = elem[&n].iter().map(key).collect();
    let mut queue = elem[&n].clone();
    while let Some(ct) = queue.pop() {
        let r = rank(&ct.center, &ct.levels, None);
        let span: BTreeSet<&LatticePoint> = ctx.points.iter().filter(|x| rank(&ct.center, &ct.levels, Some(x)) == r).collect();
        for l1 in 0..n {
            for l2 in l1 + 1..=n {
                let Some(tops) = elem.get(&(n - (l2 - l1))) else { continue };
                let wp = merge(&ct.center, l1, l2);
                let fiber: BTreeSet<&LatticePoint> = ctx.points.iter().filter(|x| merge(x, l1, l2) == wp).collect();
                if fiber != span {
                    continue;
                }
                'top: for cp in tops.iter().filter(|c| c.center == wp) {
                    let mut levels = ct.levels.clone();
                    for lv in &cp.levels {
                        let mut lifted = Vec::new();
                        for y in lv {
                            let fib: Vec<&LatticePoint> = ctx.points.iter().filter(|x| merge(x, l1, l2) == *y).collect();
                            let mut best = fib[0];
                            for x in &fib[1..] {
                                match compare_by_decomposition(&ct, x, best) {
                                    Some(true) => best = x,
                                    Some(false) => {}
                                    None => continue 'top,
                                }
                            }
                            lifted.push(best.clone());
                        }
                        lifted.sort();
                        levels.push(lifted);
                    }
                    let g = GradedCircuit::new(n, d, ct.center.clone(), levels);
                    if admits_mikhalkin_in(&g, &ctx) && seen.insert(key(&g)) {
                        queue.push(g);
                    }
                }
            }
        }
    }
    seen.into_iter().filter(|(w, l)| rank(w, l, None) == n + 1).collect()
}
