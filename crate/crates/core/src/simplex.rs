//! Lattice points of dilated simplices, the reversed lexicographic order and the gluing projections.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("point {0} is not in the simplex")]
    NotInSimplex(LatticePoint),
    #[error("bad projection indices")]
    BadIndices,
}

/// Homogeneous lattice point; ordered by the reversed lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + k (e_i - e_j)`.
    pub fn shift(&self, i: usize, j: usize, k: i64) -> LatticePoint {
        let mut c = self.0.clone();
        c[i] += k;
        c[j] -= k;
        LatticePoint(c)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn phi(&self, d: i64) -> i64 {
        let mut acc = 0i64;
        for &x in self.0.iter().rev() {
            acc = acc * (d + 1) + x;
        }
        acc
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, "]")
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

#[macro_export]
macro_rules! lp {
    ($($x:expr),* $(,)?) => { $crate::simplex::LatticePoint(vec![$($x as i64),*]) };
}

/// All compositions of `d` into `parts` nonnegative parts, in no particular order.
pub fn compositions(d: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; parts];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(i + 1, left - x, cur, out);
        }
    }
    if parts == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct SimplexContext {
    pub n: usize,
    pub d: i64,
    pub points: Vec<LatticePoint>,
    pub index: HashMap<LatticePoint, usize>,
}

pub fn lattice_points(n: usize, d: i64) -> SimplexContext {
    SimplexContext::new(n, d)
}

impl SimplexContext {
    pub fn new(n: usize, d: i64) -> Self {
        let mut points: Vec<LatticePoint> = compositions(d, n + 1).into_iter().map(LatticePoint).collect();
        points.sort();
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        SimplexContext { n, d, points, index }
    }

    /// N, one less than the number of lattice points.
    pub fn big_n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &LatticePoint) -> bool {
        self.index.contains_key(v)
    }

    pub fn position(&self, v: &LatticePoint) -> Result<usize, SimplexError> {
        self.index.get(v).copied().ok_or_else(|| SimplexError::NotInSimplex(v.clone()))
    }

    /// 1-based position under ≺.
    pub fn ord_index(&self, v: &LatticePoint) -> Result<usize, SimplexError> {
        self.position(v).map(|i| i + 1)
    }

    pub fn predecessor(&self, v: &LatticePoint) -> Result<Option<&LatticePoint>, SimplexError> {
        let i = self.position(v)?;
        Ok(if i == 0 { None } else { Some(&self.points[i - 1]) })
    }

    pub fn successor(&self, v: &LatticePoint) -> Result<Option<&LatticePoint>, SimplexError> {
        let i = self.position(v)?;
        Ok(self.points.get(i + 1))
    }

    pub fn phi_value(&self, v: &LatticePoint) -> Result<i64, SimplexError> {
        self.position(v)?;
        Ok(v.phi(self.d))
    }

    pub fn vertex(&self, i: usize) -> LatticePoint {
        let mut c = vec![0; self.n + 1];
        c[i] = self.d;
        LatticePoint(c)
    }
}

pub fn ord_index(ctx: &SimplexContext, v: &LatticePoint) -> Result<usize, SimplexError> {
    ctx.ord_index(v)
}

pub fn phi_value(ctx: &SimplexContext, v: &LatticePoint) -> Result<i64, SimplexError> {
    ctx.phi_value(v)
}

/// Merge coordinates `l1..=l2` into one.
pub fn project_parallel(v: &LatticePoint, l1: usize, l2: usize) -> Result<LatticePoint, SimplexError> {
    if l1 >= l2 || l2 >= v.0.len() {
        return Err(SimplexError::BadIndices);
    }
    let mut c = Vec::with_capacity(v.0.len() - (l2 - l1));
    c.extend_from_slice(&v.0[..l1]);
    c.push(v.0[l1..=l2].iter().sum());
    c.extend_from_slice(&v.0[l2 + 1..]);
    Ok(LatticePoint(c))
}

/// Affine projection along a type IV prefix with center `w = [w0,0,..,0,wn]` and first point `u`.
pub fn project_type_iv(
    v: &LatticePoint,
    l: usize,
    u: &LatticePoint,
    w: &LatticePoint,
) -> Result<LatticePoint, SimplexError> {
    let n = v.dim();
    if u.dim() != n || w.dim() != n || l >= n {
        return Err(SimplexError::BadIndices);
    }
    let c = type_iv_offset(u, w, l);
    let t = v.0[n] - w.0[n] + 1;
    let mut out = Vec::with_capacity(n - l);
    out.push(v.0[..=l].iter().sum::<i64>() + t * c[0]);
    for (k, i) in (l + 1..n).enumerate() {
        out.push(v.0[i] + t * c[k + 1]);
    }
    Ok(LatticePoint(out))
}

/// The direction `[Σ_{i≤l} u_i − w_0, u_{l+1}, …, u_{n−1}]` of the type IV projection.
pub fn type_iv_offset(u: &LatticePoint, w: &LatticePoint, l: usize) -> Vec<i64> {
    let n = u.dim();
    let mut c = Vec::with_capacity(n - l);
    c.push(u.0[..=l].iter().sum::<i64>() - w.0[0]);
    c.extend_from_slice(&u.0[l + 1..n]);
    c
}

#[allow(non_snake_case)]
pub fn project_typeIV(v: &LatticePoint, l: usize, u: &LatticePoint, w: &LatticePoint) -> Result<LatticePoint, SimplexError> {
    project_type_iv(v, l, u, w)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
