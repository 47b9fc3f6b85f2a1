//! Polyhedral helpers for subdifferential graphs: V-representations of the
//! regions of a max-affine function, relative-interior sample points, and
//! exact Euclidean distances to H-polyhedra and point polytopes.
//!
//! Dimensions are tiny (<= 3), so face enumeration by tight-constraint
//! subsets is exact and cheap. Fat tolerances are deliberate: generators that
//! are merely feasible (not extreme) are harmless for every consumer here.

use crate::error::Result;
use crate::linalg::{self, dot, lstsq, norm2, sub, Mat};

const FEAS_TOL: f64 = 1e-8;
const DEDUP_TOL: f64 = 1e-7;

/// Generators of a polyhedron: conv(points) + cone(rays). Lineality is folded
/// into +-ray pairs. `points` empty means the polyhedron is empty.
#[derive(Clone, Debug, Default)]
pub struct VRep {
    pub points: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A point in the relative interior (generator average nudged along all
    /// rays). None when empty.
    pub fn relint_point(&self) -> Option<Vec<f64>> {
        if self.points.is_empty() {
            return None;
        }
        let n = self.points[0].len();
        let mut p = vec![0.0; n];
        for q in &self.points {
            linalg::axpy(&mut p, 1.0 / self.points.len() as f64, q);
        }
        for r in &self.rays {
            linalg::axpy(&mut p, 0.5, r);
        }
        Some(p)
    }
}

fn feasible(a: &Mat, b: &[f64], x: &[f64], scale: f64) -> bool {
    let ax = a.matvec(x);
    ax.iter().zip(b).all(|(l, r)| *l <= *r + FEAS_TOL * scale)
}

fn push_dedup(list: &mut Vec<Vec<f64>>, cand: Vec<f64>, scale: f64) {
    if !list
        .iter()
        .any(|p| norm2(&sub(p, &cand)) <= DEDUP_TOL * scale)
    {
        list.push(cand);
    }
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(m, k, 0, &mut cur, &mut out);
    out
}

/// V-representation of {y : a y <= b}. Exact for the dimensions used here
/// (cols <= 3); lineality directions come back as +-ray pairs.
pub fn hrep_to_vrep(a: &Mat, b: &[f64]) -> Result<VRep> {
    let n = a.cols();
    let scale = 1.0 + a.max_abs() + linalg::norm_inf(b);

    // Zero rows constrain nothing but can make the set empty.
    let mut live_rows: Vec<usize> = Vec::new();
    for i in 0..a.rows() {
        let row_norm = norm2(a.row(i));
        if row_norm <= 1e-12 * scale {
            if b[i] < -FEAS_TOL * scale {
                return Ok(VRep::default());
            }
        } else {
            live_rows.push(i);
        }
    }
    if live_rows.is_empty() {
        let mut rays = Vec::new();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            rays.push(e.clone());
            e[i] = -1.0;
            rays.push(e);
        }
        return Ok(VRep {
            points: vec![vec![0.0; n]],
            rays,
        });
    }
    let am = Mat::from_fn(live_rows.len(), n, |i, j| a[(live_rows[i], j)]);
    let bm: Vec<f64> = live_rows.iter().map(|&i| b[i]).collect();
    let m = am.rows();

    // Split off the lineality space and work in row-space coordinates, where
    // the polyhedron is pointed.
    let lin = linalg::null_space(&am, 1e-10);
    let w = linalg::row_space(&am, 1e-10);
    let k = w.cols();
    let ap = am.matmul(&w); // m x k

    let mut points = Vec::new();
    let mut rays = Vec::new();
    if k == 0 {
        points.push(vec![0.0; n]);
    } else {
        for set in subsets(m, k) {
            let sys = Mat::from_fn(k, k, |i, j| ap[(set[i], j)]);
            let rhs: Vec<f64> = set.iter().map(|&i| bm[i]).collect();
            let (t, resid) = lstsq(&sys, &rhs);
            if resid > 1e-7 * scale {
                continue;
            }
            if feasible(&ap, &bm, &t, scale) {
                push_dedup(&mut points, w.matvec(&t), scale);
            }
        }
        if points.is_empty() {
            return Ok(VRep::default());
        }
        // Extreme-ray candidates: directions with k-1 tight rows.
        let ray_sets = if k == 1 {
            vec![vec![]]
        } else {
            subsets(m, k - 1)
        };
        for set in ray_sets {
            let dirs: Vec<Vec<f64>> = if k == 1 {
                vec![vec![1.0], vec![-1.0]]
            } else {
                let sys = Mat::from_fn(set.len(), k, |i, j| ap[(set[i], j)]);
                let null = linalg::null_space(&sys, 1e-10);
                if null.cols() != 1 {
                    continue;
                }
                let d = null.col(0);
                vec![d.clone(), linalg::scale(&d, -1.0)]
            };
            for d in dirs {
                let ad = ap.matvec(&d);
                if ad.iter().all(|&v| v <= FEAS_TOL) {
                    push_dedup(&mut rays, w.matvec(&d), 2.0);
                }
            }
        }
    }
    for j in 0..lin.cols() {
        let d = lin.col(j);
        push_dedup(&mut rays, d.clone(), 2.0);
        push_dedup(&mut rays, linalg::scale(&d, -1.0), 2.0);
    }
    Ok(VRep { points, rays })
}

/// Euclidean distance from x to {y : a y <= b}; +inf when empty. The
/// projection lies on a face, and the face's affine hull is cut out by at
/// most `dim` independent tight rows, so scanning tight subsets is exact.
pub fn dist_to_hpoly(x: &[f64], a: &Mat, b: &[f64]) -> f64 {
    let n = a.cols();
    let m = a.rows();
    let scale = 1.0 + a.max_abs() + linalg::norm_inf(b) + norm2(x);
    if feasible(a, b, x, scale) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for size in 1..=n.min(m) {
        for set in subsets(m, size) {
            let sys = Mat::from_fn(size, n, |i, j| a[(set[i], j)]);
            let rhs: Vec<f64> = set.iter().map(|&i| b[i]).collect();
            // projection of x onto {A_T y = b_T}: y = x + A_T^T mu with
            // A_T (x + A_T^T mu) = b_T
            let gram = sys.matmul(&sys.transpose());
            let target = sub(&rhs, &sys.matvec(x));
            let (mu, resid) = lstsq(&gram, &target);
            if resid > 1e-7 * scale {
                continue;
            }
            let y = linalg::add(x, &sys.tr_matvec(&mu));
            if norm2(&sub(&sys.matvec(&y), &rhs)) > 1e-6 * scale {
                continue; // subset inconsistent with itself (degenerate)
            }
            if feasible(a, b, &y, scale) {
                best = best.min(norm2(&sub(x, &y)));
            }
        }
    }
    best
}

/// Euclidean distance from x to conv(gens). Carathéodory: the projection is a
/// convex combination of at most dim+1 affinely independent generators.
pub fn dist_to_polytope(x: &[f64], gens: &[Vec<f64>]) -> f64 {
    assert!(!gens.is_empty());
    let n = x.len();
    let mut best = f64::INFINITY;
    for size in 1..=(n + 1).min(gens.len()) {
        for set in subsets(gens.len(), size) {
            // minimize ||x - (s0 + M mu)||, M columns s_i - s0
            let s0 = &gens[set[0]];
            if size == 1 {
                best = best.min(norm2(&sub(x, s0)));
                continue;
            }
            let mcols = Mat::from_fn(n, size - 1, |i, j| gens[set[j + 1]][i] - s0[i]);
            let (mu, _) = lstsq(&mcols, &sub(x, s0));
            let mut lam = vec![0.0; size];
            lam[0] = 1.0 - mu.iter().sum::<f64>();
            lam[1..].copy_from_slice(&mu);
            if lam.iter().any(|&l| l < -1e-9) {
                continue;
            }
            let y = linalg::add(s0, &mcols.matvec(&mu));
            best = best.min(norm2(&sub(x, &y)));
        }
    }
    best
}

/// Membership check A x <= b + tol, sharing the feasibility convention of the
/// other routines.
pub fn hpoly_contains(a: &Mat, b: &[f64], x: &[f64]) -> bool {
    let scale = 1.0 + a.max_abs() + linalg::norm_inf(b) + norm2(x);
    feasible(a, b, x, scale)
}

/// Support function sup {<c, y> : a y <= b} with its LP route; thin wrapper
/// kept here so geometric call sites read uniformly.
pub fn support(c: &[f64], a: &Mat, b: &[f64]) -> Result<f64> {
    crate::lp::sup_over_hpoly(c, a, b)
}

#[allow(dead_code)]
fn dotv(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<f64>>) -> Mat {
        Mat::from_rows(rows).unwrap()
    }

    fn square() -> (Mat, Vec<f64>) {
        (
            mat(vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ]),
            vec![1.0; 4],
        )
    }

    #[test]
    fn vrep_of_square() {
        let (a, b) = square();
        let v = hrep_to_vrep(&a, &b).unwrap();
        assert_eq!(v.points.len(), 4);
        assert!(v.rays.is_empty());
        for corner in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            assert!(v.points.iter().any(|p| norm2(&sub(p, &corner)) < 1e-8));
        }
    }

    #[test]
    fn vrep_of_quadrant() {
        // y >= 0 componentwise: -y <= 0
        let a = mat(vec![vec![-1.0, 0.0], vec![0.0, -1.0]]);
        let v = hrep_to_vrep(&a, &[0.0, 0.0]).unwrap();
        assert_eq!(v.points.len(), 1);
        assert!(norm2(&v.points[0]) < 1e-9);
        assert_eq!(v.rays.len(), 2);
        for e in [[1.0, 0.0], [0.0, 1.0]] {
            assert!(v.rays.iter().any(|r| norm2(&sub(r, &e)) < 1e-7));
        }
    }

    #[test]
    fn vrep_of_halfplane_has_lineality() {
        // x1 <= 1 in R^2: lineality along e2
        let a = mat(vec![vec![1.0, 0.0]]);
        let v = hrep_to_vrep(&a, &[1.0]).unwrap();
        assert!(!v.is_empty());
        assert!(v.rays.iter().any(|r| r[1] > 0.9));
        assert!(v.rays.iter().any(|r| r[1] < -0.9));
        assert!(v.rays.iter().any(|r| r[0] < -0.9));
    }

    #[test]
    fn vrep_of_empty() {
        let a = mat(vec![vec![1.0], vec![-1.0]]);
        let v = hrep_to_vrep(&a, &[-1.0, 0.0]).unwrap();
        assert!(v.is_empty());
        // zero row with negative rhs
        let a = mat(vec![vec![0.0, 0.0]]);
        let v = hrep_to_vrep(&a, &[-1.0]).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn vrep_whole_space() {
        let a = mat(vec![vec![0.0, 0.0]]);
        let v = hrep_to_vrep(&a, &[0.5]).unwrap();
        assert_eq!(v.points.len(), 1);
        assert_eq!(v.rays.len(), 4);
    }

    #[test]
    fn vrep_interval_1d() {
        // 0 <= y <= 2
        let a = mat(vec![vec![1.0], vec![-1.0]]);
        let v = hrep_to_vrep(&a, &[2.0, 0.0]).unwrap();
        assert_eq!(v.points.len(), 2);
        assert!(v.rays.is_empty());
    }

    #[test]
    fn distances_to_square() {
        let (a, b) = square();
        assert_eq!(dist_to_hpoly(&[0.0, 0.0], &a, &b), 0.0);
        assert!((dist_to_hpoly(&[3.0, 0.0], &a, &b) - 2.0).abs() < 1e-9);
        // corner distance
        let d = dist_to_hpoly(&[2.0, 2.0], &a, &b);
        assert!((d - 2.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn distance_to_empty_is_inf() {
        let a = mat(vec![vec![1.0], vec![-1.0]]);
        assert!(dist_to_hpoly(&[0.0], &a, &[-1.0, 0.0]).is_infinite());
    }

    #[test]
    fn distance_to_polytope_cases() {
        let gens = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(dist_to_polytope(&[0.2, 0.2], &gens) < 1e-12);
        assert!((dist_to_polytope(&[2.0, 0.0], &gens) - 1.0).abs() < 1e-9);
        // off the hypotenuse
        let d = dist_to_polytope(&[1.0, 1.0], &gens);
        assert!((d - 0.5f64.sqrt()).abs() < 1e-9);
        // single point
        assert!((dist_to_polytope(&[3.0, 4.0], &[vec![0.0, 0.0]]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn vrep_triangle_3d_cone() {
        // cone {y in R^3 : y3 >= |y1|, y3 >= |y2|} given by 4 rows
        let a = mat(vec![
            vec![1.0, 0.0, -1.0],
            vec![-1.0, 0.0, -1.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, -1.0, -1.0],
        ]);
        let v = hrep_to_vrep(&a, &[0.0; 4]).unwrap();
        assert_eq!(v.points.len(), 1); // apex
        assert_eq!(v.rays.len(), 4); // four edge rays
        for r in &v.rays {
            assert!(r[2] > 0.0);
            assert!(r[0].abs() <= r[2] + 1e-7 && r[1].abs() <= r[2] + 1e-7);
        }
    }
}
