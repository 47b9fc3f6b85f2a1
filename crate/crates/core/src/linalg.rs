//! Small dense linear algebra: the matrices here are at most ~10x10 (Gram
//! matrices, affine-graph operators) so everything is written directly against
//! row-major `Vec<f64>` storage. The one nontrivial routine is a cyclic Jacobi
//! eigensolver for symmetric matrices, which backs every PSD certificate,
//! pseudo-inverse solve and null-space basis in the crate.

use crate::error::{check_dim, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("matrix must have at least one row"));
        }
        let nrows = rows.len();
        let cols = rows[0].len();
        for r in &rows {
            check_dim(cols, r.len())?;
        }
        let data = rows.into_iter().flatten().collect();
        Ok(Mat {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// A^T x.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for (j, o) in out.iter_mut().enumerate() {
                *o += self[(i, j)] * xi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn symmetry_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        d
    }

    pub fn symmetric_part(&self) -> Mat {
        debug_assert_eq!(self.rows, self.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| {
            0.5 * (self[(i, j)] + self[(j, i)])
        })
    }

    /// Stack rows of `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Spectral norm of a symmetric matrix (max |eigenvalue|).
    pub fn sym_op_norm(&self) -> f64 {
        let e = eigen_sym(self);
        e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Eigendecomposition of a symmetric matrix. `vectors` holds orthonormal
/// eigenvectors as columns, `values` is ascending, A = V diag(values) V^T.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Cyclic Jacobi. The input is symmetrized first; callers validate symmetry
/// to their own tolerance before relying on the result.
pub fn eigen_sym(a: &Mat) -> SymEigen {
    assert_eq!(a.rows(), a.cols(), "eigen_sym needs a square matrix");
    let n = a.rows();
    let mut m = a.symmetric_part();
    let mut v = Mat::identity(n);
    if n == 0 {
        return SymEigen {
            values: vec![],
            vectors: v,
        };
    }
    let scale = m.max_abs().max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values: Vec<f64> = idx.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, idx[j])]);
    SymEigen { values, vectors }
}

/// Outcome of solving S x = rhs for symmetric PSD S.
#[derive(Clone, Debug)]
pub enum PsdSolve {
    Solution(Vec<f64>),
    Inconsistent,
}

/// Minimal-norm solution of S x = rhs for symmetric (PSD up to tolerance) S,
/// or `Inconsistent` when rhs has a component in the kernel. This is the
/// dichotomy behind every "finite value vs unbounded" branch of the quadratic
/// suprema in the crate.
pub fn solve_sym_consistent(s: &Mat, rhs: &[f64], tol_rel: f64) -> PsdSolve {
    let n = s.rows();
    debug_assert_eq!(rhs.len(), n);
    let e = eigen_sym(s);
    let lmax = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tau = tol_rel * lmax.max(1.0);
    let mut x = vec![0.0; n];
    for j in 0..n {
        let lam = e.values[j];
        let vj = e.vectors.col(j);
        let coef = dot(&vj, rhs);
        if lam.abs() > tau {
            axpy(&mut x, coef / lam, &vj);
        } else if coef.abs() > tol_rel * (1.0 + norm2(rhs)) {
            return PsdSolve::Inconsistent;
        }
    }
    let resid = norm2(&sub(&s.matvec(&x), rhs));
    if resid <= 1e-8 * (1.0 + norm2(rhs)) {
        PsdSolve::Solution(x)
    } else {
        PsdSolve::Inconsistent
    }
}

/// Orthonormal basis (columns) of the null space of A, via the spectrum of
/// A^T A. An empty basis is returned as a matrix with zero columns.
pub fn null_space(a: &Mat, tol_rel: f64) -> Mat {
    let n = a.cols();
    let gram = a.transpose().matmul(a);
    let e = eigen_sym(&gram);
    let lmax = e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tau = tol_rel * lmax.max(1.0);
    let cols: Vec<Vec<f64>> = (0..n)
        .filter(|&j| e.values[j].abs() <= tau)
        .map(|j| e.vectors.col(j))
        .collect();
    basis_from_cols(n, cols)
}

/// Orthonormal basis (columns) of the row space of A.
pub fn row_space(a: &Mat, tol_rel: f64) -> Mat {
    let n = a.cols();
    let gram = a.transpose().matmul(a);
    let e = eigen_sym(&gram);
    let lmax = e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tau = tol_rel * lmax.max(1.0);
    let cols: Vec<Vec<f64>> = (0..n)
        .filter(|&j| e.values[j].abs() > tau)
        .map(|j| e.vectors.col(j))
        .collect();
    basis_from_cols(n, cols)
}

fn basis_from_cols(n: usize, cols: Vec<Vec<f64>>) -> Mat {
    let k = cols.len();
    Mat::from_fn(n, k, |i, j| cols[j][i])
}

/// Minimal-norm least-squares solution of A x ~ b (pseudo-inverse through the
/// spectrum of A^T A). Returns (x, residual_norm).
pub fn lstsq(a: &Mat, b: &[f64]) -> (Vec<f64>, f64) {
    let gram = a.transpose().matmul(a);
    let atb = a.tr_matvec(b);
    let e = eigen_sym(&gram);
    let lmax = e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tau = 1e-12 * lmax.max(1.0);
    let mut x = vec![0.0; a.cols()];
    for j in 0..a.cols() {
        let lam = e.values[j];
        if lam.abs() > tau {
            let vj = e.vectors.col(j);
            axpy(&mut x, dot(&vj, &atb) / lam, &vj);
        }
    }
    let resid = norm2(&sub(&a.matvec(&x), b));
    (x, resid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_diag() {
        let m = Mat::from_rows(vec![vec![3.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let e = eigen_sym(&m);
        assert!((e.values[0] + 1.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_reconstructs() {
        let m = Mat::from_rows(vec![
            vec![2.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 1.5],
        ])
        .unwrap();
        let e = eigen_sym(&m);
        // A v = lambda v for each column
        for j in 0..3 {
            let v = e.vectors.col(j);
            let av = m.matvec(&v);
            let lv = scale(&v, e.values[j]);
            assert!(norm2(&sub(&av, &lv)) < 1e-10);
        }
    }

    #[test]
    fn psd_solve_consistent_and_not() {
        // S = diag(2, 0): consistent iff rhs_2 = 0
        let s = Mat::from_rows(vec![vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        match solve_sym_consistent(&s, &[4.0, 0.0], 1e-10) {
            PsdSolve::Solution(x) => {
                assert!((x[0] - 2.0).abs() < 1e-10);
                assert!(x[1].abs() < 1e-10);
            }
            PsdSolve::Inconsistent => panic!("expected a solution"),
        }
        assert!(matches!(
            solve_sym_consistent(&s, &[1.0, 1.0], 1e-10),
            PsdSolve::Inconsistent
        ));
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = Mat::from_rows(vec![vec![1.0, 1.0]]).unwrap();
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.cols(), 1);
        let v = ns.col(0);
        assert!((v[0] + v[1]).abs() < 1e-10);
        assert!((norm2(&v) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lstsq_exact_system() {
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let (x, r) = lstsq(&a, &[5.0, 11.0]);
        assert!(r < 1e-9);
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] - 2.0).abs() < 1e-8);
    }
}
