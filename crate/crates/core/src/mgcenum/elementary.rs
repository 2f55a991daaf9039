//! Elementary circuits of types I to IV.

use crate::gradedcircuits::{GradedCircuit, LevelTag};
use crate::simplex::{compositions, LatticePoint, SimplexContext};

use super::triangulation::admissible_cells;
use super::MgcError;

pub type ElementaryType = LevelTag;

fn pre(msg: impl Into<String>) -> MgcError {
    MgcError::PreconditionViolated(msg.into())
}

fn zeros_below(w: &LatticePoint, upto: usize, except: Option<usize>) -> bool {
    (0..upto).all(|i| Some(i) == except || w.0[i] == 0)
}

/// All elementary circuits of the given type centered at `w`, each with a single level.
pub fn elementary_circuit(ctx: &SimplexContext, w: &LatticePoint, ty: &ElementaryType) -> Result<Vec<GradedCircuit>, MgcError> {
    let n = ctx.n;
    if w.0.len() != n + 1 || !w.is_nonneg() || w.degree() != ctx.d {
        return Err(MgcError::OutOfSimplex);
    }
    let levels = elementary_levels(n, w, ty)?;
    Ok(levels
        .into_iter()
        .map(|l| GradedCircuit::new(n, ctx.d, w.clone(), vec![l]).with_tags(vec![ty.clone()]))
        .collect())
}

pub(crate) fn elementary_levels(n: usize, w: &LatticePoint, ty: &ElementaryType) -> Result<Vec<Vec<LatticePoint>>, MgcError> {
    let h = n + 1;
    let c = &w.0;
    match *ty {
        LevelTag::I { index: l } => {
            if l + 1 > n || !zeros_below(w, l, None) || c[l] == 0 || c[l + 1] == 0 {
                return Err(pre("type I needs w_i = 0 below the index and w_l, w_{l+1} > 0"));
            }
            Ok(vec![vec![w.shift(l, l + 1, 1), w.shift(l + 1, l, 1)]])
        }
        LevelTag::II { index: l } => {
            if l == 0 || l + 1 > n || !zeros_below(w, l, None) || c[l] < 2 || c[l + 1] < 1 {
                return Err(pre("type II needs 0 < l < n, w_i = 0 below l, w_l ≥ 2 and w_{l+1} ≥ 1"));
            }
            let a = w.shift(l, l + 1, 1);
            let b = w.shift(l - 1, l, 1);
            let mut cc = w.shift(l + 1, l, 1);
            cc = cc.shift(l - 1, l, 1);
            Ok(vec![vec![a, b, cc]])
        }
        LevelTag::III { lower: r, upper: l } => {
            if r + 1 >= l || l > n || !zeros_below(w, l - 1, None) || c[l - 1] == 0 {
                return Err(pre("type III needs r + 1 < l ≤ n, w_i = 0 for i < l − 1 and w_{l−1} > 0"));
            }
            let u = w.shift(l - 2, l - 1, 1);
            let cells = admissible_cells(l - r, c[l - 1] - 1);
            Ok(cells
                .iter()
                .map(|cell| {
                    let mut level = vec![u.clone()];
                    for loc in cell {
                        let mut x = vec![0i64; h];
                        x[r..l].copy_from_slice(loc);
                        x[l] = c[l] + 1;
                        x[l + 1..].copy_from_slice(&c[l + 1..]);
                        level.push(LatticePoint(x));
                    }
                    level
                })
                .collect())
        }
        LevelTag::IV { lower: r, upper: l } => {
            if r + 1 >= l || l > n || !zeros_below(w, l, Some(r)) || c[r] == 0 || c[l] == 0 {
                return Err(pre("type IV needs r + 1 < l ≤ n, w_i = 0 below l except r, and w_r, w_l > 0"));
            }
            let wr = w.shift(r + 1, r, 1);
            let mut out = Vec::new();
            for mid in compositions(c[r] + 1, l - r) {
                if mid[0] == 0 {
                    continue;
                }
                let mut u = vec![0i64; h];
                u[r..l].copy_from_slice(&mid);
                u[l] = c[l] - 1;
                u[l + 1..].copy_from_slice(&c[l + 1..]);
                let u = LatticePoint(u);
                let up = u.shift(r + 1, r, 1);
                out.push(vec![u, up, wr.clone()]);
            }
            Ok(out)
        }
    }
}
