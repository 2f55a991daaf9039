//! Placing triangulation in ≺ order, and the admissible cells used by type III circuits.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::exactlin::{det_i128, rank_int};
use crate::simplex::{LatticePoint, SimplexContext};
use crate::tropdual::{frame_coordinates, Subdivision};

use super::MgcError;

/// Maximal cells, as sorted index lists into the ≺-sorted `points`.
pub fn placing_triangulation(points: &[LatticePoint]) -> Vec<Vec<usize>> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut cells: Vec<Vec<usize>> = vec![vec![0]];
    let mut hull: Vec<Vec<i64>> = vec![points[0].0.clone()];
    let mut frame = frame_coordinates(&points[..1]);
    let mut boundary: HashMap<Vec<usize>, usize> = HashMap::new();
    for i in 1..points.len() {
        let p = &points[i];
        hull.push(p.0.clone());
        if rank_int(&hull) > frame.len() {
            for c in &mut cells {
                c.push(i);
            }
            frame = frame_coordinates(&points[..=i]);
            boundary = boundary_of(&cells);
            continue;
        }
        hull.pop();
        let orient = |pts: &[usize], extra: usize| -> i128 {
            let m: Vec<Vec<i128>> = pts
                .iter()
                .chain(std::iter::once(&extra))
                .map(|&k| frame.iter().map(|&c| points[k].0[c] as i128).collect())
                .collect();
            det_i128(&m).signum()
        };
        let visible: Vec<(Vec<usize>, usize)> = boundary
            .iter()
            .filter(|(f, &opp)| {
                let sp = orient(f, i);
                sp != 0 && sp == -orient(f, opp)
            })
            .map(|(f, &o)| (f.clone(), o))
            .collect();
        for (f, _) in visible {
            boundary.remove(&f);
            for skip in 0..f.len() {
                let mut g: Vec<usize> = f.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &x)| x).collect();
                g.push(i);
                g.sort_unstable();
                if boundary.remove(&g).is_none() {
                    boundary.insert(g, f[skip]);
                }
            }
            let mut cell = f;
            cell.push(i);
            cell.sort_unstable();
            cells.push(cell);
        }
    }
    cells.sort();
    cells
}

fn boundary_of(cells: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    let mut count: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for c in cells {
        for skip in 0..c.len() {
            let f: Vec<usize> = c.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &x)| x).collect();
            let e = count.entry(f).or_insert((0, c[skip]));
            e.0 += 1;
        }
    }
    count.into_iter().filter(|(_, (k, _))| *k == 1).map(|(f, (_, o))| (f, o)).collect()
}

/// Mikhalkin triangulation of a point set avoiding `w`.
pub fn mikhalkin_triangulation(face: &[LatticePoint], w: Option<&LatticePoint>) -> Result<Subdivision, MgcError> {
    if let Some(w) = w {
        if face.contains(w) {
            return Err(MgcError::ContainsExcludedPoint);
        }
    }
    let mut pts = face.to_vec();
    pts.sort();
    pts.dedup();
    let dim = pts.first().map_or(0, |p| p.dim());
    let cells = placing_triangulation(&pts).into_iter().map(|c| c.into_iter().map(|i| pts[i].clone()).collect()).collect();
    Ok(Subdivision::new(cells, dim))
}

/// Lattice points of `Δ` with the given coordinates fixed.
pub fn face_points(ctx: &SimplexContext, fixed: &[(usize, i64)]) -> Vec<LatticePoint> {
    ctx.points.iter().filter(|p| fixed.iter().all(|&(i, v)| p.0[i] == v)).cloned().collect()
}

type CellCache = Mutex<HashMap<(usize, i64), Arc<Vec<Vec<Vec<i64>>>>>>;

fn cache() -> &'static CellCache {
    static CACHE: OnceLock<CellCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Admissible type III cells of the Mikhalkin triangulation of `Δ_{d'}^{(k−1)}`, in local coordinates,
/// each sorted by ≺.
pub fn admissible_cells(k: usize, dp: i64) -> Arc<Vec<Vec<Vec<i64>>>> {
    if let Some(v) = cache().lock().unwrap().get(&(k, dp)) {
        return v.clone();
    }
    let computed = Arc::new(compute_admissible(k, dp));
    cache().lock().unwrap().insert((k, dp), computed.clone());
    computed
}

fn compute_admissible(k: usize, dp: i64) -> Vec<Vec<Vec<i64>>> {
    if k < 2 || dp < 1 {
        return Vec::new();
    }
    let local = SimplexContext::new(k - 1, dp);
    let mut dir = vec![0i64; k];
    dir[k - 1] = 1;
    dir[k - 2] = -1;
    let mut out = Vec::new();
    for cell in placing_triangulation(&local.points) {
        if cell.len() != k {
            continue;
        }
        let pts: Vec<&LatticePoint> = cell.iter().map(|&i| &local.points[i]).collect();
        // cell indices are ≺-sorted, so the last one is the ≺-last vertex
        if pts[..k - 1].iter().any(|p| p.0[k - 1] >= dp - 1) {
            continue;
        }
        if proper_face_contains_direction(&pts, &dir) {
            continue;
        }
        out.push(pts.iter().map(|p| p.0.clone()).collect());
    }
    out
}

fn proper_face_contains_direction(pts: &[&LatticePoint], dir: &[i64]) -> bool {
    let k = pts.len();
    for mask in 1u32..(1u32 << k) - 1 {
        let face: Vec<&LatticePoint> = (0..k).filter(|&j| mask & (1 << j) != 0).map(|j| pts[j]).collect();
        if face.len() < 2 {
            continue;
        }
        let diffs: Vec<Vec<i64>> = face[1..].iter().map(|p| p.sub(face[0]).0).collect();
        let r = rank_int(&diffs);
        let mut with = diffs.clone();
        with.push(dir.to_vec());
        if rank_int(&with) == r {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp;
    use crate::tropdual::normalized_volume;

    fn picture(a: i64, b: i64) -> LatticePoint {
        lp![4 - a - b, b, a]
    }

    #[test]
    fn quartic_triangulation() {
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
        let expected = Subdivision::new(
            tris.iter().map(|t| t.iter().map(|&(a, b)| picture(a, b)).collect()).collect(),
            2,
        );
        let ctx = SimplexContext::new(2, 4);
        let got = mikhalkin_triangulation(&ctx.points, None).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn segments_and_volume() {
        let ctx = SimplexContext::new(1, 7);
        assert_eq!(mikhalkin_triangulation(&ctx.points, None).unwrap().len(), 7);
        let ctx = SimplexContext::new(3, 2);
        let t = mikhalkin_triangulation(&ctx.points, None).unwrap();
        assert_eq!(t.len(), 8);
        assert!(t.cells.iter().all(|c| normalized_volume(c) == 1));
    }

    #[test]
    fn excluded_point() {
        let ctx = SimplexContext::new(1, 2);
        assert_eq!(mikhalkin_triangulation(&ctx.points, Some(&lp![1, 1])), Err(MgcError::ContainsExcludedPoint));
    }

    #[test]
    fn type_iii_cells_dim2() {
        // F for w = [0,3,1] is a segment of length 2; only its first unit segment qualifies.
        assert_eq!(*admissible_cells(2, 2), vec![vec![vec![2, 0], vec![1, 1]]]);
        for dp in 1..12 {
            assert_eq!(admissible_cells(2, dp).len() as i64, (dp - 1).max(0));
        }
    }
}
