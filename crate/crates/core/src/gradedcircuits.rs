//! Graded circuits: validation, parallel levels, the combinatorial Mikhalkin test, multiplicity and
//! min-sections.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, adjugate_i128, det_i128, LinError, RatMatrix, Rational};
use crate::simplex::{self, LatticePoint, SimplexContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("level {0} is linearly dependent")]
    LevelDependent(usize),
    #[error("level {0} has no dependency modulo the lower levels")]
    DependencyMissing(usize),
    #[error("level {0} has more than one dependency modulo the lower levels")]
    DependencyNotUnique(usize),
    #[error("level {0} has a relation with a zero coefficient")]
    ZeroCoefficientInRelation(usize),
    #[error("no level {0}")]
    BadLevelIndex(usize),
    #[error("the projected point is the image of the center")]
    CenterFiber,
    #[error("empty fiber")]
    EmptyFiber,
    #[error("point {0} is not in the simplex")]
    NotInSimplex(LatticePoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum LevelTag {
    I { index: usize },
    II { index: usize },
    III { lower: usize, upper: usize },
    IV { lower: usize, upper: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedCircuit {
    pub n: usize,
    pub d: i64,
    pub center: LatticePoint,
    pub levels: Vec<Vec<LatticePoint>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<LevelTag>,
}

impl GradedCircuit {
    pub fn new(n: usize, d: i64, center: LatticePoint, levels: Vec<Vec<LatticePoint>>) -> Self {
        GradedCircuit { n, d, center, levels, tags: Vec::new() }
    }

    pub fn with_tags(mut self, tags: Vec<LevelTag>) -> Self {
        self.tags = tags;
        self
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Dimension of the difference space of all points.
    pub fn dim(&self) -> usize {
        let rows: Vec<Vec<i64>> = self.levels.iter().flatten().map(|p| p.sub(&self.center).0).collect();
        exactlin::rank_int(&rows)
    }

    /// Points of levels `0..=h`, center first.
    pub fn closure(&self, h: usize) -> Vec<LatticePoint> {
        let mut out = vec![self.center.clone()];
        for l in self.levels.iter().take(h) {
            out.extend(l.iter().cloned());
        }
        out
    }

    pub fn all_points(&self) -> Vec<LatticePoint> {
        self.closure(self.levels.len())
    }

    /// Same center and levels up to order inside levels.
    pub fn canonical_key(&self) -> (LatticePoint, Vec<Vec<LatticePoint>>) {
        let mut lv = self.levels.clone();
        for l in &mut lv {
            l.sort();
        }
        (self.center.clone(), lv)
    }
}

/// Relation of level `i` (1-based) modulo the span of the lower levels.
pub fn level_relation(c: &GradedCircuit, i: usize) -> Result<Vec<Rational>, CircuitError> {
    if i == 0 || i > c.levels.len() {
        return Err(CircuitError::BadLevelIndex(i));
    }
    let pts: Vec<Vec<i64>> = c.levels[i - 1].iter().map(|p| p.0.clone()).collect();
    let prior: Vec<Vec<i64>> = c.closure(i - 1).into_iter().map(|p| p.0).collect();
    exactlin::dependency_mod_span(&pts, &prior).map_err(|e| match e {
        LinError::NoSuchDependency | LinError::NotACircuit => CircuitError::DependencyMissing(i),
        LinError::NotUnique => CircuitError::DependencyNotUnique(i),
        LinError::ZeroCoefficient => CircuitError::ZeroCoefficientInRelation(i),
    })
}

/// Checks the invariants, removes trivial levels and sorts each level by ≺.
pub fn validate(c: &GradedCircuit) -> Result<GradedCircuit, CircuitError> {
    for p in c.all_points() {
        if p.0.len() != c.n + 1 || !p.is_nonneg() || p.degree() != c.d {
            return Err(CircuitError::NotInSimplex(p));
        }
    }
    let mut out = GradedCircuit::new(c.n, c.d, c.center.clone(), Vec::new());
    let mut tags = Vec::new();
    for (i, level) in c.levels.iter().enumerate() {
        let rows: Vec<Vec<i64>> = level.iter().map(|p| p.0.clone()).collect();
        if exactlin::rank_int(&rows) != level.len() {
            return Err(CircuitError::LevelDependent(i + 1));
        }
        let probe = GradedCircuit::new(c.n, c.d, c.center.clone(), c.levels[..=i].to_vec());
        level_relation(&probe, i + 1)?;
        if level.len() > 1 {
            let mut l = level.clone();
            l.sort();
            out.levels.push(l);
            if let Some(t) = c.tags.get(i) {
                tags.push(t.clone());
            }
        }
    }
    if tags.len() == out.levels.len() {
        out.tags = tags;
    }
    Ok(out)
}

pub fn is_parallel_level(c: &GradedCircuit, i: usize) -> Result<bool, CircuitError> {
    let rel = level_relation(c, i)?;
    Ok(rel.iter().fold(Rational::zero(), |a, b| a + b).is_zero())
}

/// Product over levels of 2 for two-point levels and 1 otherwise.
pub fn multiplicity(c: &GradedCircuit) -> u64 {
    c.levels.iter().map(|l| if l.len() == 2 { 2 } else { 1 }).product()
}

pub fn first_level_multiplicity(c: &GradedCircuit) -> u64 {
    match c.levels.first() {
        Some(l) if l.len() == 2 => 2,
        _ => 1,
    }
}

/// Integer rows whose common kernel is the linear span of `pts`.
pub fn span_annihilator(pts: &[LatticePoint], h: usize) -> Vec<Vec<i64>> {
    let cols: Vec<Vec<i64>> = pts.iter().map(|p| p.0.clone()).collect();
    let ann = exactlin::annihilator(&cols, h);
    (0..ann.rows)
        .map(|i| exactlin::primitive(ann.row(i)).iter().map(|x| exactlin::rat_to_i64(x).expect("small annihilator")).collect())
        .collect()
}

pub fn in_annihilated(v: &LatticePoint, ann: &[Vec<i64>]) -> bool {
    ann.iter().all(|r| r.iter().zip(&v.0).map(|(a, b)| a * b).sum::<i64>() == 0)
}

/// Combinatorial test: no parallel levels, and every lattice point newly spanned at level `h` has a
/// positive ≺-last coefficient in its decomposition.
pub fn admits_mikhalkin(c: &GradedCircuit) -> bool {
    let ctx = SimplexContext::new(c.n, c.d);
    admits_mikhalkin_in(c, &ctx)
}

pub fn admits_mikhalkin_in(c: &GradedCircuit, ctx: &SimplexContext) -> bool {
    let Ok(c) = validate(c) else { return false };
    let h_max = c.levels.len();
    for i in 1..=h_max {
        match is_parallel_level(&c, i) {
            Ok(false) => {}
            _ => return false,
        }
    }
    let dim = c.n + 1;
    let mut lower_ann = span_annihilator(&c.closure(0), dim);
    for h in 1..=h_max {
        let upper = c.closure(h);
        let upper_ann = span_annihilator(&upper, dim);
        // Unknowns: coefficients on every point of levels 1..=h.
        let pts: Vec<(usize, &LatticePoint)> =
            c.levels[..h].iter().enumerate().flat_map(|(i, l)| l.iter().map(move |p| (i, p))).collect();
        let mut m = RatMatrix::zeros(dim + h - 1, pts.len());
        for (j, (lvl, p)) in pts.iter().enumerate() {
            for r in 0..dim {
                m.set(r, j, Rational::from_integer(p.0[r].into()));
            }
            if *lvl + 1 < h {
                m.set(dim + *lvl, j, Rational::from_integer(1.into()));
            }
        }
        if m.rank() != pts.len() {
            return false;
        }
        for v in &ctx.points {
            if !in_annihilated(v, &upper_ann) || in_annihilated(v, &lower_ann) || c.levels[h - 1].contains(v) {
                continue;
            }
            let mut b: Vec<Rational> = v.0.iter().map(|&x| Rational::from_integer(x.into())).collect();
            b.extend(std::iter::repeat_with(Rational::zero).take(h - 1));
            let Some(alpha) = m.solve(&b) else { return false };
            let mut best: Option<(&LatticePoint, Rational)> = Some((v, Rational::from_integer(1.into())));
            for ((_, p), a) in pts.iter().zip(&alpha) {
                if a.is_zero() {
                    continue;
                }
                if best.as_ref().is_some_and(|(q, _)| *p > *q) {
                    best = Some((p, -a.clone()));
                }
            }
            if !best.unwrap().1.is_positive() {
                return false;
            }
        }
        lower_ann = upper_ann;
    }
    true
}

/// A projection along a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Projection {
    Parallel { l1: usize, l2: usize },
    TypeIV { l: usize, u: LatticePoint, w: LatticePoint },
}

impl Projection {
    pub fn apply(&self, v: &LatticePoint) -> LatticePoint {
        match self {
            Projection::Parallel { l1, l2 } => simplex::project_parallel(v, *l1, *l2).expect("valid indices"),
            Projection::TypeIV { l, u, w } => simplex::project_type_iv(v, *l, u, w).expect("valid indices"),
        }
    }
}

/// Orders points of one fiber of a projection along an admitting circuit by any admitted ν.
#[derive(Debug, Clone)]
pub struct SectionComparator {
    d: i64,
    rows: Vec<usize>,
    /// Circuit points by decreasing φ, with the integer row giving `|det|·α_p(y)`.
    order: Vec<(i64, Vec<i128>)>,
}

impl SectionComparator {
    pub fn new(c: &GradedCircuit) -> Option<Self> {
        let d = c.d;
        let mut cols: Vec<Vec<i128>> = Vec::new();
        // (level, owner column per point): first point of a level takes minus the sum of its columns.
        let mut owners: Vec<(LatticePoint, Vec<(usize, i128)>)> = Vec::new();
        for level in &c.levels {
            let p0 = &level[0];
            let first = cols.len();
            for p in &level[1..] {
                owners.push((p.clone(), vec![(cols.len(), 1)]));
                cols.push(p.sub(p0).0.iter().map(|&x| x as i128).collect());
            }
            owners.push((p0.clone(), (first..cols.len()).map(|j| (j, -1)).collect()));
        }
        let k = cols.len();
        let h = c.n + 1;
        let rows = independent_rows(&cols, h, k)?;
        let b: Vec<Vec<i128>> = rows.iter().map(|&r| cols.iter().map(|col| col[r]).collect()).collect();
        let det = det_i128(&b);
        if det == 0 {
            return None;
        }
        let mut adj = if k == 0 { Vec::new() } else { adjugate_i128(&b) };
        if det < 0 {
            for r in &mut adj {
                for x in r.iter_mut() {
                    *x = -*x;
                }
            }
        }
        let mut order: Vec<(i64, Vec<i128>)> = owners
            .into_iter()
            .map(|(p, parts)| {
                let mut row = vec![0i128; k];
                for (j, s) in parts {
                    for (t, x) in row.iter_mut().enumerate() {
                        *x += s * adj[j][t];
                    }
                }
                (p.phi(d), row)
            })
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0));
        Some(SectionComparator { d, rows, order })
    }

    fn eval(&self, row: &[i128], x: &LatticePoint) -> i128 {
        self.rows.iter().zip(row).map(|(&r, a)| a * x.0[r] as i128).sum()
    }

    /// `ν(a) < ν(b)` for two distinct points of one fiber.
    pub fn less(&self, a: &LatticePoint, b: &LatticePoint) -> bool {
        let (pa, pb) = (a.phi(self.d), b.phi(self.d));
        let hi = pa.max(pb);
        for (phi, row) in &self.order {
            if *phi <= hi {
                break;
            }
            let diff = self.eval(row, b) - self.eval(row, a);
            if diff != 0 {
                // α_p(b − a) > 0 puts −α_p on p, so ν(b) < ν(a).
                return diff < 0;
            }
        }
        pa < pb
    }

    pub fn min<'a>(&self, fiber: impl IntoIterator<Item = &'a LatticePoint>) -> Option<&'a LatticePoint> {
        let mut best: Option<&LatticePoint> = None;
        for x in fiber {
            best = match best {
                None => Some(x),
                Some(b) if self.less(x, b) => Some(x),
                keep => keep,
            };
        }
        best
    }
}

fn independent_rows(cols: &[Vec<i128>], h: usize, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let rows: Vec<Vec<i64>> = (0..h).map(|r| cols.iter().map(|c| c[r] as i64).collect()).collect();
    let mut chosen = Vec::new();
    let mut acc: Vec<Vec<i64>> = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        acc.push(row.clone());
        if exactlin::rank_int(&acc) > chosen.len() {
            chosen.push(r);
            if chosen.len() == k {
                return Some(chosen);
            }
        } else {
            acc.pop();
        }
    }
    None
}

/// The fiber point of `y` minimizing every ν admitted by `c`.
pub fn min_section(c: &GradedCircuit, pr: &Projection, y: &LatticePoint) -> Result<LatticePoint, CircuitError> {
    if pr.apply(&c.center) == *y {
        return Err(CircuitError::CenterFiber);
    }
    let ctx = SimplexContext::new(c.n, c.d);
    let fiber: Vec<&LatticePoint> = ctx.points.iter().filter(|x| pr.apply(x) == *y).collect();
    if fiber.is_empty() {
        return Err(CircuitError::EmptyFiber);
    }
    let cmp = SectionComparator::new(c).ok_or(CircuitError::DependencyNotUnique(c.levels.len()))?;
    Ok(cmp.min(fiber.into_iter()).unwrap().clone())
}

/// Slow comparator: decompose `b − a` over the level differences and read the ≺-last coefficient.
pub fn compare_by_decomposition(c: &GradedCircuit, a: &LatticePoint, b: &LatticePoint) -> Option<bool> {
    let h = c.n + 1;
    let pts: Vec<(usize, &LatticePoint)> =
        c.levels.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |p| (i, p))).collect();
    let nl = c.levels.len();
    let mut m = RatMatrix::zeros(h + nl, pts.len());
    for (j, (lvl, p)) in pts.iter().enumerate() {
        for r in 0..h {
            m.set(r, j, Rational::from_integer(p.0[r].into()));
        }
        m.set(h + lvl, j, Rational::from_integer(1.into()));
    }
    let mut rhs: Vec<Rational> = b.sub(a).0.iter().map(|&x| Rational::from_integer(x.into())).collect();
    rhs.extend(std::iter::repeat_with(Rational::zero).take(nl));
    let alpha = m.solve(&rhs)?;
    let mut entries: Vec<(&LatticePoint, Rational)> = vec![(b, Rational::from_integer(1.into())), (a, Rational::from_integer((-1).into()))];
    for ((_, p), x) in pts.iter().zip(alpha) {
        if !x.is_zero() {
            entries.push((p, -x));
        }
    }
    let (_, coef) = entries.into_iter().max_by(|x, y| x.0.cmp(y.0))?;
    // true when ν(a) < ν(b)
    Some(coef.is_positive())
}
