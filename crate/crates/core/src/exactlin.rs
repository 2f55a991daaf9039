//! Exact linear algebra over the rationals and the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("points are not a circuit")]
    NotACircuit,
    #[error("no dependency modulo the prior span")]
    NoSuchDependency,
    #[error("dependency modulo the prior span is not unique")]
    NotUnique,
    #[error("dependency has a zero coefficient")]
    ZeroCoefficient,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = RatMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = RatMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = rat(x);
            }
        }
        m
    }

    /// Matrix whose columns are the given integer vectors.
    pub fn from_int_columns(cols: &[Vec<i64>], height: usize) -> Self {
        let mut m = RatMatrix::zeros(height, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), height);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = rat(x);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, each vector primitive integral with first nonzero entry positive.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            out.push(normalize_first_positive(&v));
        }
        out
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Scale a rational vector to a primitive integer vector (sign untouched).
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

fn normalize_first_positive(v: &[Rational]) -> Vec<Rational> {
    let mut p = primitive(v);
    if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut p {
            *x = -x.clone();
        }
    }
    p
}

fn to_rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

/// Index of the reverse-lexicographically largest vector.
pub fn revlex_max_index(points: &[Vec<i64>]) -> usize {
    let mut best = 0;
    for i in 1..points.len() {
        if revlex_cmp(&points[i], &points[best]) == std::cmp::Ordering::Greater {
            best = i;
        }
    }
    best
}

/// Compare from the last coordinate backwards.
pub fn revlex_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn orient_last_positive(points: &[Vec<i64>], mut v: Vec<Rational>) -> Vec<Rational> {
    let last = revlex_max_index(points);
    if v[last].is_negative() {
        for x in &mut v {
            *x = -x.clone();
        }
    }
    v
}

/// The unique relation among the points; every coefficient nonzero.
pub fn circuit_relation(points: &[Vec<i64>]) -> Result<Vec<Rational>, LinError> {
    if points.len() < 2 {
        return Err(LinError::NotACircuit);
    }
    let h = points[0].len();
    let m = RatMatrix::from_int_columns(points, h);
    let ker = m.kernel_basis();
    if ker.len() != 1 || ker[0].iter().any(|x| x.is_zero()) {
        return Err(LinError::NotACircuit);
    }
    Ok(orient_last_positive(points, ker.into_iter().next().unwrap()))
}

/// Rows spanning the annihilator of the column span of `cols`.
pub fn annihilator(cols: &[Vec<i64>], height: usize) -> RatMatrix {
    if cols.is_empty() {
        let mut id = RatMatrix::zeros(height, height);
        for i in 0..height {
            id.set(i, i, Rational::one());
        }
        return id;
    }
    let rows = RatMatrix::from_int_rows(cols);
    let ker = rows.kernel_basis();
    if ker.is_empty() {
        return RatMatrix::zeros(0, height);
    }
    RatMatrix::from_rows(&ker)
}

/// Unique relation among `points` modulo the span of `prior`.
pub fn dependency_mod_span(points: &[Vec<i64>], prior: &[Vec<i64>]) -> Result<Vec<Rational>, LinError> {
    if points.is_empty() {
        return Err(LinError::NoSuchDependency);
    }
    let h = points[0].len();
    let ann = annihilator(prior, h);
    let x = RatMatrix::from_int_columns(points, h);
    let ker = ann.mul(&x).kernel_basis();
    match ker.len() {
        0 => Err(LinError::NoSuchDependency),
        1 => {
            let v = ker.into_iter().next().unwrap();
            if v.iter().any(|c| c.is_zero()) {
                Err(LinError::ZeroCoefficient)
            } else {
                Ok(orient_last_positive(points, v))
            }
        }
        _ => Err(LinError::NotUnique),
    }
}

pub fn rank_int(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_int_rows(vectors).rank()
}

pub fn in_span(v: &[i64], span: &[Vec<i64>]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if span.is_empty() {
        return false;
    }
    let m = RatMatrix::from_int_columns(span, v.len());
    m.solve(&to_rat_vec(v)).is_some()
}

/// Coefficients expressing `v` in the columns `span`, if possible.
pub fn express(v: &[i64], span: &[Vec<i64>]) -> Option<Vec<Rational>> {
    let m = RatMatrix::from_int_columns(span, v.len());
    m.solve(&to_rat_vec(v))
}

/// Bareiss determinant of a square integer matrix.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Adjugate of a square integer matrix, via cofactors.
pub fn adjugate_i128(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let c = det_i128(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// Basis of the saturated lattice `Z^n ∩ ker(A)` for an integer matrix `A` given by rows.
pub fn int_kernel_basis(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // Column-reduce A with unimodular ops tracked in U; zero columns of AU give the kernel.
    let m = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut col = 0;
    for r in 0..m {
        if col == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (col..n).filter(|&j| a[r][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&j| a[r][j].abs()).unwrap();
            swap_cols(&mut a, &mut u, col, piv);
            let mut done = true;
            for j in col + 1..n {
                if a[r][j] != 0 {
                    let q = Integer::div_floor(&a[r][j], &a[r][col]);
                    add_col(&mut a, &mut u, j, col, -q);
                    if a[r][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    (col..n).map(|j| (0..n).map(|i| u[i][j] as i64).collect()).collect()
}

fn swap_cols(a: &mut [Vec<i128>], u: &mut [Vec<i128>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    for row in u.iter_mut() {
        row.swap(x, y);
    }
}

fn add_col(a: &mut [Vec<i128>], u: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    for row in a.iter_mut() {
        row[dst] += k * row[src];
    }
    for row in u.iter_mut() {
        row[dst] += k * row[src];
    }
}

pub fn rat_to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn rat_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(v: &[i64]) -> Vec<Rational> {
        to_rat_vec(v)
    }

    #[test]
    fn kernel_of_square_example() {
        let cols = vec![vec![2, 1, 0], vec![1, 2, 0], vec![2, 0, 1], vec![1, 1, 1]];
        let m = RatMatrix::from_int_columns(&cols, 3);
        assert_eq!(m.kernel_basis(), vec![ri(&[1, -1, -1, 1])]);
    }

    #[test]
    fn circuit_relations() {
        assert_eq!(circuit_relation(&[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap(), ri(&[1, -2, 1]));
        let sq = [vec![2, 1, 0], vec![1, 2, 0], vec![2, 0, 1], vec![1, 1, 1]];
        assert_eq!(circuit_relation(&sq).unwrap(), ri(&[1, -1, -1, 1]));
        let tri = [vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3], vec![1, 1, 1]];
        assert_eq!(circuit_relation(&tri).unwrap(), ri(&[1, 1, 1, -3]));
    }

    #[test]
    fn not_a_circuit() {
        let pts = [vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1], vec![0, 0, 2]];
        assert_eq!(circuit_relation(&pts), Err(LinError::NotACircuit));
        let ind = [vec![1, 0], vec![0, 1]];
        assert_eq!(circuit_relation(&ind), Err(LinError::NotACircuit));
    }

    #[test]
    fn dependency_examples() {
        let d = dependency_mod_span(&[vec![0, 3, 1], vec![2, 1, 1]], &[vec![1, 2, 1]]).unwrap();
        assert_eq!(d, ri(&[1, 1]));
        let prior = [vec![1, 2, 1], vec![0, 3, 1], vec![2, 1, 1]];
        let d = dependency_mod_span(&[vec![1, 1, 2], vec![0, 2, 2]], &prior).unwrap();
        assert_eq!(d, ri(&[-1, 1]));
    }

    #[test]
    fn dependency_errors() {
        let r = dependency_mod_span(&[vec![1, 0, 0], vec![0, 1, 0]], &[vec![0, 0, 1]]);
        assert_eq!(r, Err(LinError::NoSuchDependency));
        let r = dependency_mod_span(&[vec![1, 0, 0], vec![2, 0, 0], vec![3, 0, 0]], &[]);
        assert_eq!(r, Err(LinError::NotUnique));
        let r = dependency_mod_span(&[vec![1, 0, 0], vec![2, 0, 0], vec![0, 1, 0]], &[]);
        assert_eq!(r, Err(LinError::ZeroCoefficient));
    }

    #[test]
    fn det_and_adjugate() {
        let m = vec![vec![2i128, 1, 0], vec![1, 3, 1], vec![0, 1, 4]];
        let d = det_i128(&m);
        assert_eq!(d, 2 * 11 - 4);
        let adj = adjugate_i128(&m);
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| m[i][k] * adj[k][j]).sum();
                assert_eq!(s, if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn saturated_kernel() {
        let k = int_kernel_basis(&[vec![2, 4, 6]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
        }
        // Saturation: the lattice x + 2y + 3z = 0 has covolume sqrt(14); a basis here must too.
        let gram = |a: &Vec<i64>, b: &Vec<i64>| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
        let g = gram(&k[0], &k[0]) * gram(&k[1], &k[1]) - gram(&k[0], &k[1]).pow(2);
        assert_eq!(g, 14);
    }

    #[test]
    fn solve_inconsistent() {
        let m = RatMatrix::from_int_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&ri(&[1, 3])).is_none());
        assert_eq!(m.solve(&ri(&[1, 2])).unwrap(), ri(&[1, 0]));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..5, c), r))
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(rows in small_matrix()) {
            let m = RatMatrix::from_int_rows(&rows);
            let ker = m.kernel_basis();
            prop_assert_eq!(ker.len() + m.rank(), m.cols);
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn int_kernel_matches_rank(rows in small_matrix()) {
            let n = rows[0].len();
            let k = int_kernel_basis(&rows, n);
            let m = RatMatrix::from_int_rows(&rows);
            prop_assert_eq!(k.len(), n - m.rank());
            for v in &k {
                for r in &rows {
                    prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
                }
            }
            if !k.is_empty() {
                prop_assert_eq!(rank_int(&k), k.len());
            }
        }

        #[test]
        fn adjugate_identity(m in prop::collection::vec(prop::collection::vec(-5i128..6, 3), 3)) {
            let d = det_i128(&m);
            let adj = adjugate_i128(&m);
            for i in 0..3 {
                for j in 0..3 {
                    let s: i128 = (0..3).map(|k| m[i][k] * adj[k][j]).sum();
                    prop_assert_eq!(s, if i == j { d } else { 0 });
                }
            }
        }
    }
}

/// Some `x ≥ 0` with `A x = b`, by a phase-one simplex with Bland's rule.
pub fn nonneg_solution(a: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.rows;
    let nv = a.cols;
    let width = nv + m + 1;
    let mut t = vec![vec![Rational::zero(); width]; m + 1];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..nv {
            let v = a.get(i, j).clone();
            t[i][j] = if flip { -v } else { v };
        }
        t[i][nv + i] = Rational::one();
        t[i][width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    for j in 0..width {
        if (nv..nv + m).contains(&j) {
            continue;
        }
        let s = (0..m).fold(Rational::zero(), |acc, i| acc + &t[i][j]);
        t[m][j] = -s;
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    loop {
        let Some(enter) = (0..width - 1).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let rl = &t[l][width - 1] / &t[l][enter];
                    if ratio < rl || (ratio == rl && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(r) = leave else {
            // Phase one is bounded below by zero, so this cannot happen.
            return None;
        };
        let inv = t[r][enter].recip();
        for j in 0..width {
            if !t[r][j].is_zero() {
                t[r][j] = &t[r][j] * &inv;
            }
        }
        for i in 0..=m {
            if i == r || t[i][enter].is_zero() {
                continue;
            }
            let f = t[i][enter].clone();
            for j in 0..width {
                if !t[r][j].is_zero() {
                    let v = &t[i][j] - &f * &t[r][j];
                    t[i][j] = v;
                }
            }
        }
        basis[r] = enter;
    }
    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod lp_tests {
    use super::*;

    #[test]
    fn feasible_and_infeasible() {
        let a = RatMatrix::from_int_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let x = nonneg_solution(&a, &[rat(2), rat(3)]).unwrap();
        assert!(x.iter().all(|v| !v.is_negative()));
        assert_eq!(a.mul_vec(&x), vec![rat(2), rat(3)]);
        let a = RatMatrix::from_int_rows(&[vec![1, 1]]);
        assert!(nonneg_solution(&a, &[rat(-1)]).is_none());
        let a = RatMatrix::from_int_rows(&[vec![1, -1]]);
        assert!(nonneg_solution(&a, &[rat(-1)]).is_some());
    }
}

/// Serializes rationals as `"p/q"` strings.
pub mod rat_serde {
    use super::Rational;
    use serde::ser::{SerializeMap, SerializeSeq};
    use serde::{Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn map<K: Serialize, S: Serializer>(m: &BTreeMap<K, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let mut out = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            out.serialize_entry(k, &v.to_string())?;
        }
        out.end()
    }
}
