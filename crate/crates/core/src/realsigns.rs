//! Sign assignments on the point conditions, coefficient signs along the lattice path, the set Ω
//! and real solution counts.
//!
//! Everything is computed in the sign group, written additively over GF(2): bit 1 means a negative
//! sign. The leading-order equations of a circuit are binomial in the singular point q, so for a
//! fixed sign pattern of the coefficients the number of real solutions is the number of sign
//! vectors σ of q solving an integer system reduced mod 2. Magnitudes never enter.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{det_i128, Rational};
use crate::gradedcircuits::{self, level_relation, multiplicity, CircuitError, GradedCircuit};
use crate::mgcenum::enumerate_mgc;
use crate::simplex::{LatticePoint, SimplexContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealSignError {
    #[error("path degenerate: {0}")]
    PathDegenerate(String),
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("sign space too large: {0} free bits")]
    TooLarge(usize),
    #[error("centers share the last coordinate")]
    CentersCollide,
    #[error("sign assignment has shape {got:?}, expected {want:?}")]
    BadShape { got: (usize, usize), want: (usize, usize) },
    #[error("entries of a sign assignment must be 1 or -1")]
    BadEntry,
    #[error("no sign assignment satisfies every first-level condition")]
    OmegaEmpty,
    #[error("invalid circuit: {0}")]
    Circuit(#[from] CircuitError),
}

/// Signs ξ_{j,i}: one row per point condition along the path, one column per affine coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignAssignment {
    pub signs: Vec<Vec<i8>>,
}

impl SignAssignment {
    pub fn all_plus(rows: usize, n: usize) -> Self {
        SignAssignment { signs: vec![vec![1; n]; rows] }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.signs.len(), self.signs.first().map_or(0, Vec::len))
    }

    /// Flips ξ_{j,i}; both indices 1-based.
    pub fn flip(&mut self, j: usize, i: usize) {
        self.signs[j - 1][i - 1] *= -1;
    }

    fn check(&self, want: (usize, usize)) -> Result<(), RealSignError> {
        if self.signs.iter().flatten().any(|&s| s != 1 && s != -1) {
            return Err(RealSignError::BadEntry);
        }
        let got = (self.signs.len(), if self.signs.is_empty() { want.1 } else { self.signs[0].len() });
        if got != want || self.signs.iter().any(|r| r.len() != want.1) {
            return Err(RealSignError::BadShape { got, want });
        }
        Ok(())
    }

    fn bits(&self) -> Bits {
        let n = self.shape().1;
        let mut b = Bits::zeros(self.signs.len() * n);
        for (j, row) in self.signs.iter().enumerate() {
            for (i, &s) in row.iter().enumerate() {
                if s < 0 {
                    b.set(j * n + i);
                }
            }
        }
        b
    }

    fn from_bits(b: &Bits, rows: usize, n: usize) -> Self {
        let signs = (0..rows).map(|j| (0..n).map(|i| if b.get(j * n + i) { -1 } else { 1 }).collect()).collect();
        SignAssignment { signs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn toggle(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }
    fn dot(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).fold(0, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }
    fn lowest(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// Affine function GF(2)^bits → GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Form {
    c: bool,
    lin: Bits,
}

impl Form {
    fn constant(c: bool, len: usize) -> Self {
        Form { c, lin: Bits::zeros(len) }
    }
    fn add(&self, o: &Form) -> Form {
        let mut lin = self.lin.clone();
        lin.xor(&o.lin);
        Form { c: self.c ^ o.c, lin }
    }
    fn eval(&self, x: &Bits) -> bool {
        self.c ^ self.lin.dot(x)
    }
}

/// The lattice path through Δ minus the centers, with the sign of each coefficient as an affine
/// form in the bits of ξ.
struct SignPath {
    n: usize,
    pts: Vec<LatticePoint>,
    pos: HashMap<LatticePoint, usize>,
    signs: Vec<Form>,
}

impl SignPath {
    fn new(ctx: &SimplexContext, centers: &[LatticePoint]) -> Result<Self, RealSignError> {
        let n = ctx.n;
        let pts: Vec<LatticePoint> = ctx.points.iter().filter(|p| !centers.contains(p)).cloned().collect();
        if pts.len() < 2 {
            return Err(RealSignError::PathDegenerate(format!("{} points left on the path", pts.len())));
        }
        let bits = (pts.len() - 1) * n;
        let mut signs = vec![Form::constant(false, bits)];
        for k in 0..pts.len() - 1 {
            let delta = pts[k].sub(&pts[k + 1]);
            let g = delta.0.iter().fold(0i64, |g, x| g.gcd(x));
            let mut f = signs[k].clone();
            match g {
                1 => f.c ^= true,
                // squared binomial on the edge through a type I center: a_{u⁻} and a_{u⁺} agree up to ξ²
                2 if centers.iter().any(|w| w.add(w) == pts[k].add(&pts[k + 1])) => {}
                _ => {
                    return Err(RealSignError::PathDegenerate(format!("edge {} → {} has lattice length {g}", pts[k], pts[k + 1])));
                }
            }
            for i in 1..=n {
                if delta.0[i] % 2 != 0 {
                    f.lin.toggle(k * n + i - 1);
                }
            }
            signs.push(f);
        }
        let pos = pts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(SignPath { n, pts, pos, signs })
    }

    fn edges(&self) -> usize {
        self.pts.len() - 1
    }

    fn bits(&self) -> usize {
        self.edges() * self.n
    }

    fn sign(&self, v: &LatticePoint) -> Result<&Form, RealSignError> {
        self.pos
            .get(v)
            .map(|&i| &self.signs[i])
            .ok_or_else(|| RealSignError::UnsupportedConfiguration(format!("coefficient at {v} is not fixed by a point condition")))
    }

    /// Σ_i (x_i mod 2)·b(k, i): the sign of ξ_k^x.
    fn xi_power(&self, k: usize, x: &LatticePoint) -> Form {
        let mut f = Form::constant(false, self.bits());
        for i in 1..=self.n {
            if x.0[i] % 2 != 0 {
                f.lin.toggle(k * self.n + i - 1);
            }
        }
        f
    }
}

/// Leading-order sign system of one circuit: rows D (coordinates 1..n of level differences),
/// right-hand sides as forms, and the extra factor for a first level lying on the path.
struct CircuitSystem {
    n: usize,
    rows: Vec<Vec<i64>>,
    rhs: Vec<Form>,
    on_path: Option<Form>,
    first_pair: bool,
}

impl CircuitSystem {
    fn build(path: &SignPath, ctx: &SimplexContext, c: &GradedCircuit) -> Result<Self, RealSignError> {
        let c = gradedcircuits::validate(c)?;
        let n = ctx.n;
        if c.dim() != n {
            return Err(RealSignError::UnsupportedConfiguration("circuit does not span the simplex".into()));
        }
        let w = &c.center;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut on_path = None;
        let first = &c.levels[0];
        let pred = ctx.predecessor(w).map_err(|_| RealSignError::PathDegenerate(format!("{w} not in simplex")))?;
        let succ = ctx.successor(w).map_err(|_| RealSignError::PathDegenerate(format!("{w} not in simplex")))?;
        let collinear = matches!((pred, succ), (Some(a), Some(b)) if a.add(b) == w.add(w));
        let first_on_path = first.len() == 2 && collinear && first.contains(pred.unwrap()) && first.contains(succ.unwrap());
        if collinear && !first_on_path {
            return Err(RealSignError::UnsupportedConfiguration(format!("three collinear path points at {w} without a type I first level")));
        }
        for (h, level) in c.levels.iter().enumerate() {
            if h == 0 && first_on_path {
                let (um, up) = (pred.unwrap(), succ.unwrap());
                let k = path.pos[um];
                // last point before the segment w + t(e1 − e0), outside its span
                let mut start = w.clone();
                start.0[0] += start.0[1];
                start.0[1] = 0;
                let wpr = ctx
                    .predecessor(&start)
                    .expect("segment start lies in the simplex")
                    .ok_or_else(|| RealSignError::PathDegenerate(format!("no point precedes the segment through {w}")))?;
                let f = path.sign(up)?.add(path.sign(wpr)?).add(&path.xi_power(k, &wpr.sub(um)));
                on_path = Some(f);
                let dir = w.sub(um);
                rows.push(dir.0[1..].to_vec());
                rhs.push(path.xi_power(k, &dir));
                continue;
            }
            let rel = level_relation(&c, h + 1)?;
            let neg = |x: &Rational| x.is_negative();
            let v0 = &level[0];
            for (j, v) in level.iter().enumerate().skip(1) {
                rows.push(v.sub(v0).0[1..].to_vec());
                let mut f = path.sign(v)?.add(path.sign(v0)?);
                f.c ^= neg(&rel[j]) ^ neg(&rel[0]);
                rhs.push(f);
            }
        }
        debug_assert_eq!(rows.len(), n);
        let sys = CircuitSystem { n, rows, rhs, on_path, first_pair: first.len() == 2 };
        let det = det_i128(&sys.rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>()).unsigned_abs();
        let expect = multiplicity(&c) as u128 / if sys.on_path.is_some() { 2 } else { 1 };
        if det != expect {
            return Err(RealSignError::UnsupportedConfiguration(format!("binomial system index {det} differs from {expect}")));
        }
        Ok(sys)
    }

    fn forms(&self) -> Vec<Form> {
        let mut v = self.rhs.clone();
        v.extend(self.on_path.iter().cloned());
        v
    }

    /// Real count from the values of `forms()`.
    fn count_from(&self, vals: &[bool]) -> u64 {
        if self.on_path.is_some() && vals[self.rhs.len()] {
            return 0;
        }
        let sols = gf2_solutions(&self.rows, &vals[..self.rhs.len()], self.n);
        sols * if self.on_path.is_some() { 2 } else { 1 }
    }

    fn level1_from(&self, vals: &[bool]) -> u64 {
        if self.on_path.is_some() {
            if vals[self.rhs.len()] {
                0
            } else {
                2
            }
        } else if self.first_pair {
            if vals[0] {
                0
            } else {
                2
            }
        } else {
            1
        }
    }
}

/// Number of σ ∈ GF(2)^n with rows·σ = rhs (mod 2).
fn gf2_solutions(rows: &[Vec<i64>], rhs: &[bool], n: usize) -> u64 {
    let mut m: Vec<(u64, bool)> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| (r.iter().enumerate().fold(0u64, |acc, (i, x)| acc | (((x & 1) as u64) << i)), b))
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&i| m[i].0 >> col & 1 == 1) else { continue };
        m.swap(rank, p);
        let piv = m[rank];
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row.0 >> col & 1 == 1 {
                row.0 ^= piv.0;
                row.1 ^= piv.1;
            }
        }
        rank += 1;
    }
    if m[rank..].iter().any(|r| r.1) {
        0
    } else {
        1 << (n - rank)
    }
}

/// Row-reduced affine system over GF(2), used for Ω.
struct AffineSpace {
    len: usize,
    pivots: Vec<(usize, Form)>,
}

impl AffineSpace {
    /// Solutions of f(x) = 0 for all `eqs`; None if inconsistent.
    fn solve(eqs: &[Form], len: usize) -> Option<Self> {
        let mut pivots: Vec<(usize, Form)> = Vec::new();
        for e in eqs {
            let mut f = e.clone();
            for (p, g) in &pivots {
                if f.lin.get(*p) {
                    f = f.add(g);
                }
            }
            match f.lin.lowest() {
                None if f.c => return None,
                None => {}
                Some(p) => {
                    for (_, g) in pivots.iter_mut() {
                        if g.lin.get(p) {
                            *g = g.add(&f);
                        }
                    }
                    pivots.push((p, f));
                }
            }
        }
        Some(AffineSpace { len, pivots })
    }

    fn dim(&self) -> usize {
        self.len - self.pivots.len()
    }

    fn contains(&self, x: &Bits) -> bool {
        self.pivots.iter().all(|(_, f)| !f.eval(x))
    }

    /// The point with every free coordinate 0.
    fn witness(&self) -> Bits {
        let mut x = Bits::zeros(self.len);
        for (p, f) in &self.pivots {
            if f.c {
                x.set(*p);
            }
        }
        x
    }

    /// Direction vectors: one per free coordinate.
    fn directions(&self) -> Vec<Bits> {
        let piv: BTreeSet<usize> = self.pivots.iter().map(|(p, _)| *p).collect();
        (0..self.len)
            .filter(|i| !piv.contains(i))
            .map(|free| {
                let mut x = Bits::zeros(self.len);
                x.set(free);
                for (p, f) in &self.pivots {
                    if f.lin.get(free) {
                        x.set(*p);
                    }
                }
                x
            })
            .collect()
    }
}

/// Exact average of `g` over the image of a uniform affine subspace under the forms. Every fiber
/// of the affine map has the same size, so the image can be swept instead of the space itself.
fn average_over_image(forms: &[Form], base: &Bits, dirs: &[Bits], g: impl Fn(&[bool]) -> u64) -> Result<Rational, RealSignError> {
    let m = forms.len();
    let pack = |vals: Vec<bool>| vals.iter().enumerate().fold(0u64, |a, (i, &b)| a | ((b as u64) << i));
    let origin = pack(forms.iter().map(|f| f.eval(base)).collect());
    let mut basis: Vec<u64> = Vec::new();
    for d in dirs {
        let mut v = pack(forms.iter().map(|f| f.lin.dot(d)).collect());
        for b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    if basis.len() > 24 {
        return Err(RealSignError::TooLarge(basis.len()));
    }
    let mut total = BigInt::zero();
    for mask in 0u64..1 << basis.len() {
        let mut v = origin;
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v ^= b;
            }
        }
        let vals: Vec<bool> = (0..m).map(|i| v >> i & 1 == 1).collect();
        total += g(&vals);
    }
    Ok(Rational::new(total, BigInt::from(1u64 << basis.len())))
}

fn single_path(ctx: &SimplexContext, w: &LatticePoint) -> Result<SignPath, RealSignError> {
    if !ctx.contains(w) {
        return Err(RealSignError::PathDegenerate(format!("{w} not in simplex")));
    }
    SignPath::new(ctx, std::slice::from_ref(w))
}

fn ctx_of(c: &GradedCircuit) -> SimplexContext {
    SimplexContext::new(c.n, c.d)
}

/// Number of point conditions (rows of ξ) when `delta` centers are removed: N − δ.
pub fn condition_count(ctx: &SimplexContext, delta: usize) -> usize {
    ctx.len().saturating_sub(delta + 1)
}

/// Signs of a_v(0) along the path avoiding `w`, normalized to + at the first point.
pub fn coefficient_signs(ctx: &SimplexContext, w: &LatticePoint, xi: &SignAssignment) -> Result<BTreeMap<LatticePoint, i8>, RealSignError> {
    let path = single_path(ctx, w)?;
    xi.check((path.edges(), ctx.n))?;
    let x = xi.bits();
    Ok(path.pts.iter().zip(&path.signs).map(|(p, f)| (p.clone(), if f.eval(&x) { -1 } else { 1 })).collect())
}

/// Real solutions of the first-level equations: 1 for a simplex level, 0 or 2 for type I.
pub fn level1_real_count(c: &GradedCircuit, xi: &SignAssignment) -> Result<u64, RealSignError> {
    let ctx = ctx_of(c);
    let path = single_path(&ctx, &c.center)?;
    xi.check((path.edges(), ctx.n))?;
    let sys = CircuitSystem::build(&path, &ctx, c)?;
    let x = xi.bits();
    Ok(sys.level1_from(&sys.forms().iter().map(|f| f.eval(&x)).collect::<Vec<_>>()))
}

/// mt(C, ξ): real singular hypersurfaces through the signed points whose singular point
/// tropicalizes to the one of `c`.
pub fn real_count(c: &GradedCircuit, xi: &SignAssignment) -> Result<u64, RealSignError> {
    let ctx = ctx_of(c);
    let path = single_path(&ctx, &c.center)?;
    xi.check((path.edges(), ctx.n))?;
    let sys = CircuitSystem::build(&path, &ctx, c)?;
    let x = xi.bits();
    Ok(sys.count_from(&sys.forms().iter().map(|f| f.eval(&x)).collect::<Vec<_>>()))
}

/// The first-level conditions defining Ω, one per distinct (center, first level) of type I.
/// Circuits whose first level cannot be evaluated (dimension 1, no point before the segment)
/// impose no condition.
struct Omega {
    rows: usize,
    eqs: Vec<Form>,
}

fn omega_conditions(ctx: &SimplexContext) -> Omega {
    let rows = condition_count(ctx, 1);
    let mut seen = BTreeSet::new();
    let mut eqs = Vec::new();
    for e in enumerate_mgc(ctx) {
        let c = &e.circuit;
        if c.levels[0].len() != 2 || !seen.insert((c.center.clone(), c.levels[0].clone())) {
            continue;
        }
        let Ok(path) = single_path(ctx, &c.center) else { continue };
        if let Ok(sys) = CircuitSystem::build(&path, ctx, c) {
            eqs.push(sys.on_path.clone().unwrap_or_else(|| sys.rhs[0].clone()));
        }
    }
    Omega { rows, eqs }
}

fn omega_space(ctx: &SimplexContext) -> Result<(AffineSpace, usize), RealSignError> {
    let om = omega_conditions(ctx);
    let len = om.rows * ctx.n;
    let sp = AffineSpace::solve(&om.eqs, len).ok_or(RealSignError::OmegaEmpty)?;
    Ok((sp, om.rows))
}

/// ξ ∈ Ω(Δ): every type I first level has two real solutions.
pub fn omega_membership(ctx: &SimplexContext, xi: &SignAssignment) -> Result<bool, RealSignError> {
    let (sp, rows) = omega_space(ctx)?;
    xi.check((rows, ctx.n))?;
    Ok(sp.contains(&xi.bits()))
}

/// A member of Ω(Δ), found by elimination with all free signs +.
pub fn omega_witness(ctx: &SimplexContext) -> Result<SignAssignment, RealSignError> {
    let (sp, rows) = omega_space(ctx)?;
    Ok(SignAssignment::from_bits(&sp.witness(), rows, ctx.n))
}

/// log₂ |Ω(Δ)|.
pub fn omega_dimension(ctx: &SimplexContext) -> Result<usize, RealSignError> {
    Ok(omega_space(ctx)?.0.dim())
}

/// Exact average of mt(C, ξ) over ξ ∈ Ω(Δ).
pub fn average_mt(c: &GradedCircuit, ctx: &SimplexContext) -> Result<Rational, RealSignError> {
    let (sp, _) = omega_space(ctx)?;
    let path = single_path(ctx, &c.center)?;
    let sys = CircuitSystem::build(&path, ctx, c)?;
    average_over_image(&sys.forms(), &sp.witness(), &sp.directions(), |v| sys.count_from(v))
}

fn check_centers(circuits: &[GradedCircuit], ctx: &SimplexContext) -> Result<Vec<LatticePoint>, RealSignError> {
    let mut last = BTreeSet::new();
    for c in circuits {
        if c.n != ctx.n || c.d != ctx.d || !ctx.contains(&c.center) {
            return Err(RealSignError::PathDegenerate(format!("circuit at {} does not live in the simplex", c.center)));
        }
        if !last.insert(c.center.0[ctx.n]) {
            return Err(RealSignError::CentersCollide);
        }
    }
    Ok(circuits.iter().map(|c| c.center.clone()).collect())
}

/// Product of the real counts of several circuits, all conditions on one path avoiding every center.
pub fn multinodal_real_count(circuits: &[GradedCircuit], ctx: &SimplexContext, xi: &SignAssignment) -> Result<u64, RealSignError> {
    let centers = check_centers(circuits, ctx)?;
    let path = SignPath::new(ctx, &centers)?;
    xi.check((path.edges(), ctx.n))?;
    let x = xi.bits();
    let mut total = 1;
    for c in circuits {
        let sys = CircuitSystem::build(&path, ctx, c)?;
        total *= sys.count_from(&sys.forms().iter().map(|f| f.eval(&x)).collect::<Vec<_>>());
    }
    Ok(total)
}

/// Exact average of the product count over every ξ ∈ {±1}^{(N−δ)·n}.
pub fn multinodal_average(circuits: &[GradedCircuit], ctx: &SimplexContext) -> Result<Rational, RealSignError> {
    let centers = check_centers(circuits, ctx)?;
    let path = SignPath::new(ctx, &centers)?;
    let systems = circuits.iter().map(|c| CircuitSystem::build(&path, ctx, c)).collect::<Result<Vec<_>, _>>()?;
    let mut forms = Vec::new();
    let mut cuts = vec![0];
    for s in &systems {
        forms.extend(s.forms());
        cuts.push(forms.len());
    }
    let len = path.bits();
    let dirs: Vec<Bits> = (0..len)
        .map(|i| {
            let mut b = Bits::zeros(len);
            b.set(i);
            b
        })
        .collect();
    let base = Bits::zeros(len);
    average_over_image(&forms, &base, &dirs, |v| systems.iter().enumerate().map(|(i, s)| s.count_from(&v[cuts[i]..cuts[i + 1]])).product())
}
