//! Symbolic weights `c_0 + Σ c_k M_k` with `1 ≪ M_1 ≪ M_2 ≪ …`, and the weights induced by a lattice path.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactlin::{rat, Rational};
use crate::simplex::{LatticePoint, SimplexContext, SimplexError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Finite Q-linear combination of symbols; index 0 is the constant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymWeight {
    coeffs: BTreeMap<usize, Rational>,
}

impl SymWeight {
    pub fn zero() -> Self {
        SymWeight::default()
    }

    pub fn constant(c: Rational) -> Self {
        SymWeight::term(0, c)
    }

    pub fn symbol(k: usize) -> Self {
        SymWeight::term(k, rat(1))
    }

    pub fn term(k: usize, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        SymWeight { coeffs }
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The constant part, if nothing else is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, k: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, other: &SymWeight, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.coeffs {
            self.add_term(*k, &(c * s));
        }
    }

    pub fn scale(&self, s: &Rational) -> SymWeight {
        let mut out = SymWeight::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn sign(&self) -> Sign {
        match self.coeffs.iter().next_back() {
            None => Sign::Zero,
            Some((_, c)) if c.is_positive() => Sign::Positive,
            Some(_) => Sign::Negative,
        }
    }
}

pub fn sym_sign(w: &SymWeight) -> Sign {
    w.sign()
}

impl Ord for SymWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl PartialOrd for SymWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &SymWeight {
    type Output = SymWeight;
    fn add(self, rhs: &SymWeight) -> SymWeight {
        let mut out = self.clone();
        out.add_scaled(rhs, &rat(1));
        out
    }
}

impl Sub for &SymWeight {
    type Output = SymWeight;
    fn sub(self, rhs: &SymWeight) -> SymWeight {
        let mut out = self.clone();
        out.add_scaled(rhs, &rat(-1));
        out
    }
}

impl Neg for &SymWeight {
    type Output = SymWeight;
    fn neg(self) -> SymWeight {
        self.scale(&rat(-1))
    }
}

impl Mul<&Rational> for &SymWeight {
    type Output = SymWeight;
    fn mul(self, rhs: &Rational) -> SymWeight {
        self.scale(rhs)
    }
}

impl From<Rational> for SymWeight {
    fn from(c: Rational) -> Self {
        SymWeight::constant(c)
    }
}

impl Serialize for SymWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self.coeffs.iter().map(|(k, c)| (k.to_string(), c.to_string())).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw: BTreeMap<String, serde_json::Value> = BTreeMap::deserialize(d)?;
        let mut out = SymWeight::zero();
        for (k, v) in raw {
            let idx: usize = k.parse().map_err(D::Error::custom)?;
            let c = match v {
                serde_json::Value::String(s) => parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s}")))?,
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(rat)
                    .ok_or_else(|| D::Error::custom("non-integer number; use \"a/b\""))?,
                _ => return Err(D::Error::custom("coefficient must be a string or integer")),
            };
            out.add_term(idx, &c);
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: num_bigint::BigInt = a.trim().parse().ok()?;
        let b: num_bigint::BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Rational::new(a, b))
    } else {
        s.parse::<num_bigint::BigInt>().ok().map(Rational::from_integer)
    }
}

/// A weight on some lattice points of `Δ_d^{(n)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    pub n: usize,
    pub d: i64,
    pub values: BTreeMap<LatticePoint, SymWeight>,
}

#[derive(Serialize, Deserialize)]
struct WeightEntry {
    point: LatticePoint,
    value: SymWeight,
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    n: usize,
    d: i64,
    entries: Vec<WeightEntry>,
}

impl Serialize for WeightFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightJson {
            n: self.n,
            d: self.d,
            entries: self.values.iter().map(|(p, v)| WeightEntry { point: p.clone(), value: v.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = WeightJson::deserialize(d)?;
        Ok(WeightFunction { n: j.n, d: j.d, values: j.entries.into_iter().map(|e| (e.point, e.value)).collect() })
    }
}

impl WeightFunction {
    pub fn new(n: usize, d: i64) -> Self {
        WeightFunction { n, d, values: BTreeMap::new() }
    }

    pub fn from_rationals(n: usize, d: i64, vals: impl IntoIterator<Item = (LatticePoint, Rational)>) -> Self {
        WeightFunction { n, d, values: vals.into_iter().map(|(p, v)| (p, SymWeight::constant(v))).collect() }
    }

    pub fn get(&self, v: &LatticePoint) -> Option<&SymWeight> {
        self.values.get(v)
    }

    pub fn domain(&self) -> Vec<LatticePoint> {
        self.values.keys().cloned().collect()
    }
}

/// ν on `Δ ∖ {w}` along the connected path avoiding `w`, starting from 0.
pub fn path_weights(ctx: &SimplexContext, w: &LatticePoint) -> Result<WeightFunction, SimplexError> {
    ctx.position(w)?;
    let mut out = WeightFunction::new(ctx.n, ctx.d);
    let mut prev: Option<(&LatticePoint, SymWeight)> = None;
    let mut edge = 0usize;
    for v in ctx.points.iter().filter(|p| *p != w) {
        let val = match &prev {
            None => SymWeight::zero(),
            Some((u, nu)) => {
                edge += 1;
                let mut x = nu.clone();
                x.add_term(edge, &rat(v.phi(ctx.d) - u.phi(ctx.d)));
                x
            }
        };
        out.values.insert(v.clone(), val.clone());
        prev = Some((v, val));
    }
    Ok(out)
}

/// All circuits among `points` (minimal dependent subsets), with relation oriented so the ≺-last
/// coefficient is positive.
pub fn circuits_among(points: &[LatticePoint]) -> Vec<(Vec<LatticePoint>, Vec<Rational>)> {
    let h = points.first().map_or(0, |p| p.0.len());
    let mut out = Vec::new();
    let m = points.len();
    for size in 2..=(h + 1).min(m) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let sub: Vec<Vec<i64>> = idx.iter().map(|&i| points[i].0.clone()).collect();
            if let Ok(rel) = crate::exactlin::circuit_relation(&sub) {
                out.push((idx.iter().map(|&i| points[i].clone()).collect(), rel));
            }
            let mut k = size;
            while k > 0 && idx[k - 1] == m - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Every circuit avoiding `w` has `Σ α_v ν(v) > 0`.
pub fn mikhalkin_certificate(ctx: &SimplexContext, w: &LatticePoint) -> Result<bool, SimplexError> {
    let nu = path_weights(ctx, w)?;
    let pts: Vec<LatticePoint> = ctx.points.iter().filter(|p| *p != w).cloned().collect();
    for (c, rel) in circuits_among(&pts) {
        let mut s = SymWeight::zero();
        for (p, a) in c.iter().zip(&rel) {
            s.add_scaled(&nu.values[p], a);
        }
        if s.sign() != Sign::Positive {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_frac;
    use crate::lp;
    use crate::simplex::lattice_points;

    fn sw(terms: &[(usize, Rational)]) -> SymWeight {
        let mut s = SymWeight::zero();
        for (k, c) in terms {
            s.add_term(*k, c);
        }
        s
    }

    #[test]
    fn signs() {
        assert_eq!(sw(&[(0, rat(5)), (2, rat(-3))]).sign(), Sign::Negative);
        assert_eq!(sw(&[(1, rat(1)), (3, rat(-1)), (3, rat(1))]).sign(), Sign::Positive);
        assert_eq!(sw(&[(3, rat(-1)), (3, rat(1))]).sign(), Sign::Zero);
        assert_eq!(sw(&[(4, rat(-100)), (5, rat_frac(1, 7))]).sign(), Sign::Positive);
    }

    #[test]
    fn path_weight_examples() {
        let c = lattice_points(1, 2);
        let nu = path_weights(&c, &lp![1, 1]).unwrap();
        assert!(nu.get(&lp![2, 0]).unwrap().is_zero());
        assert_eq!(nu.get(&lp![0, 2]).unwrap(), &SymWeight::term(1, rat(4)));
        assert!(nu.get(&lp![1, 1]).is_none());

        let c = lattice_points(1, 3);
        let nu = path_weights(&c, &lp![0, 3]).unwrap();
        assert_eq!(nu.get(&lp![2, 1]).unwrap(), &SymWeight::term(1, rat(3)));
        assert_eq!(nu.get(&lp![1, 2]).unwrap(), &sw(&[(1, rat(3)), (2, rat(3))]));
    }

    #[test]
    fn path_weights_increase() {
        let c = lattice_points(2, 4);
        for w in &c.points {
            let nu = path_weights(&c, w).unwrap();
            let vals: Vec<&SymWeight> = c.points.iter().filter(|p| *p != w).map(|p| &nu.values[p]).collect();
            for pair in vals.windows(2) {
                assert!(pair[0] < pair[1]);
            }
        }
    }

    #[test]
    fn certificate_small() {
        for (n, d) in [(1, 3), (2, 2)] {
            let c = lattice_points(n, d);
            for w in &c.points {
                assert!(mikhalkin_certificate(&c, w).unwrap(), "{n} {d} {w}");
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = lattice_points(1, 3);
        let nu = path_weights(&c, &lp![1, 2]).unwrap();
        let s = serde_json::to_string(&nu).unwrap();
        let back: WeightFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, nu);
        let parsed: WeightFunction =
            serde_json::from_str(r#"{"n":1,"d":2,"entries":[{"point":[2,0],"value":{"0":"1/2","3":-2}}]}"#).unwrap();
        assert_eq!(parsed.values[&lp![2, 0]], sw(&[(0, rat_frac(1, 2)), (3, rat(-2))]));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn weight() -> impl Strategy<Value = SymWeight> {
        prop::collection::vec((0usize..5, -6i64..7, 1i64..4), 0..5).prop_map(|ts| {
            let mut s = SymWeight::zero();
            for (k, a, b) in ts {
                s.add_term(k, &Rational::new(a.into(), b.into()));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn total_order_laws(a in weight(), b in weight(), c in weight(), k in 1i64..5) {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
            prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
            prop_assert_eq!(a.cmp(&b), a.scale(&rat(k)).cmp(&b.scale(&rat(k))));
            prop_assert_eq!((&a - &a).sign(), Sign::Zero);
        }
    }
}
