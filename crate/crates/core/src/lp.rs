//! Dense two-phase simplex with Bland's rule.
//!
//! Everything polyhedral in the crate funnels through here: conjugates of
//! max-affine functions (hull LPs), evaluation of polyhedral hulls, suprema of
//! linear functionals over H-polyhedra, and the epigraph LPs for conjugates of
//! subdifferential-graph Fitzpatrick functions. Problems stay at desk scale
//! (<= ~200 variables), so a plain tableau is the right tool; Bland's rule
//! guarantees termination without perturbation machinery.

use crate::error::{Error, Result};
use crate::linalg::{norm_inf, Mat};

const PIV_TOL: f64 = 1e-9;
const RED_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// min cost^T x  subject to  eq x = rhs, x >= 0.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub cost: Vec<f64>,
    pub eq: Mat,
    pub rhs: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub value: f64,
    /// ||eq x - rhs||_inf of the returned point.
    pub primal_residual: f64,
    /// max(0, -min reduced cost) at the final basis.
    pub dual_residual: f64,
}

struct Tableau {
    m: usize,
    n_total: usize,
    rows: Vec<Vec<f64>>, // m rows, each n_total + 1 wide (last entry = rhs)
    basis: Vec<usize>,
    pivots_left: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n_total]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        if self.pivots_left == 0 {
            return Err(Error::solver("simplex pivot cap exceeded (cycling guard)"));
        }
        self.pivots_left -= 1;
        let piv = self.rows[r][c];
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Bland: entering = lowest-index column with reduced cost < -RED_TOL,
    /// leaving = ratio test with lowest basic index breaking ties.
    fn run(&mut self, red: &mut Vec<f64>, obj: &mut f64, cols: usize) -> Result<LpStatus> {
        loop {
            let entering = (0..cols).find(|&j| red[j] < -RED_TOL);
            let j = match entering {
                Some(j) => j,
                None => return Ok(LpStatus::Optimal),
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.rows[i][j];
                if a > PIV_TOL {
                    let ratio = self.rhs(i) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio < lr + 1e-12 && self.basis[i] < self.basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let (r, _) = match leave {
                Some(x) => x,
                None => return Ok(LpStatus::Unbounded),
            };
            let rc = red[j];
            let ratio = self.rhs(r) / self.rows[r][j];
            *obj += rc * ratio;
            let pivot_row_scaled: Vec<f64> = {
                let piv = self.rows[r][j];
                self.rows[r].iter().map(|v| v / piv).collect()
            };
            for (k, v) in red.iter_mut().enumerate() {
                *v -= rc * pivot_row_scaled[k];
            }
            self.pivot(r, j)?;
        }
    }
}

pub fn lp_solve(p: &LpProblem) -> Result<LpSolution> {
    let m = p.eq.rows();
    let n = p.cost.len();
    if p.eq.cols() != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: p.eq.cols(),
        });
    }
    if p.rhs.len() != m {
        return Err(Error::DimMismatch {
            expected: m,
            got: p.rhs.len(),
        });
    }
    if n == 0 {
        let pr = norm_inf(&p.rhs);
        return Ok(LpSolution {
            status: if pr <= 1e-9 {
                LpStatus::Optimal
            } else {
                LpStatus::Infeasible
            },
            x: vec![],
            value: 0.0,
            primal_residual: pr,
            dual_residual: 0.0,
        });
    }
    if m == 0 {
        return Ok(if p.cost.iter().all(|&c| c >= -RED_TOL) {
            LpSolution {
                status: LpStatus::Optimal,
                x: vec![0.0; n],
                value: 0.0,
                primal_residual: 0.0,
                dual_residual: 0.0,
            }
        } else {
            LpSolution {
                status: LpStatus::Unbounded,
                x: vec![0.0; n],
                value: f64::NEG_INFINITY,
                primal_residual: 0.0,
                dual_residual: 0.0,
            }
        });
    }

    let cap = 10 * (m + n) * (m + n);
    let n_total = n + m; // artificials appended
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; n_total + 1];
        let sign = if p.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = sign * p.eq[(i, j)];
        }
        row[n + i] = 1.0;
        row[n_total] = sign * p.rhs[i];
        rows.push(row);
    }
    let mut t = Tableau {
        m,
        n_total,
        rows,
        basis: (n..n_total).collect(),
        pivots_left: cap,
    };

    // Phase 1: minimize the sum of artificials.
    let mut red = vec![0.0; n_total];
    let mut obj = 0.0;
    for i in 0..m {
        obj += t.rhs(i);
        for j in 0..n {
            red[j] -= t.rows[i][j];
        }
    }
    let scale = 1.0 + norm_inf(&p.rhs);
    if t.run(&mut red, &mut obj, n_total)? != LpStatus::Optimal {
        return Err(Error::solver("phase-1 objective unbounded (cannot happen)"));
    }
    if obj > 1e-9 * scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            value: f64::INFINITY,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
        });
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.m {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[r][j].abs() > PIV_TOL) {
                t.pivot(r, j)?;
            } else {
                t.rows.remove(r);
                t.basis.remove(r);
                t.m -= 1;
                continue;
            }
        }
        r += 1;
    }

    // Phase 2: keep the tableau width (artificial columns simply never enter
    // because the scan is restricted to the original columns).
    let mut red = vec![0.0; n_total];
    let mut obj = 0.0;
    red[..n].copy_from_slice(&p.cost);
    for i in 0..t.m {
        let b = t.basis[i];
        debug_assert!(b < n);
        let cb = p.cost[b];
        if cb != 0.0 {
            obj += cb * t.rhs(i);
            for j in 0..n_total {
                red[j] -= cb * t.rows[i][j];
            }
        }
    }
    let status = t.run(&mut red, &mut obj, n)?;

    let mut x = vec![0.0; n];
    for i in 0..t.m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i);
        }
    }
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status,
            x,
            value: f64::NEG_INFINITY,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
        });
    }
    let residual_of = |x: &[f64]| {
        let ax = p.eq.matvec(x);
        (0..m).fold(0.0f64, |r, i| r.max((ax[i] - p.rhs[i]).abs()))
    };
    // repolish: re-solve the final basic system against the original data,
    // discarding the tableau's accumulated pivot drift and the phase-1
    // feasibility leftovers (which the dual can amplify into value error)
    {
        let cols: Vec<usize> = t.basis.clone();
        let bmat = Mat::from_fn(m, cols.len(), |i, j| p.eq[(i, cols[j])]);
        let (xb, _) = crate::linalg::lstsq(&bmat, &p.rhs);
        let mut xr = vec![0.0; n];
        for (v, &c) in xb.iter().zip(&cols) {
            xr[c] = *v;
        }
        if residual_of(&xr) <= residual_of(&x).max(1e-12 * scale) {
            x = xr;
        }
    }
    // the exact basic point decides marginal feasibility: a negative entry
    // beyond tolerance means the problem only looked feasible through
    // phase-1 slack
    if x.iter().any(|&v| v < -1e-10) {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            value: f64::INFINITY,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
        });
    }
    let value = p.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    let primal_residual = residual_of(&x);
    let dual_residual = (0..n).fold(0.0f64, |acc, j| acc.max(-red[j])).max(0.0);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        value,
        primal_residual,
        dual_residual,
    })
}

/// Outcome of minimizing a linear functional over {y : a y <= b} (free y).
#[derive(Clone, Debug)]
pub enum PolyMin {
    Finite { value: f64, point: Vec<f64> },
    Unbounded,
    Infeasible,
}

/// min c^T y over the H-polyhedron {y : a y <= b}, y free. Free variables are
/// split (y = u - w) and slacks close the rows.
pub fn minimize_over_hpoly(c: &[f64], a: &Mat, b: &[f64]) -> Result<PolyMin> {
    let m = a.rows();
    let d = a.cols();
    if c.len() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: c.len(),
        });
    }
    if m == 0 {
        // whole space: bounded only if c = 0
        return Ok(if norm_inf(c) <= RED_TOL {
            PolyMin::Finite {
                value: 0.0,
                point: vec![0.0; d],
            }
        } else {
            PolyMin::Unbounded
        });
    }
    let n = 2 * d + m;
    let eq = Mat::from_fn(m, n, |i, j| {
        if j < d {
            a[(i, j)]
        } else if j < 2 * d {
            -a[(i, j - d)]
        } else if j - 2 * d == i {
            1.0
        } else {
            0.0
        }
    });
    let mut cost = vec![0.0; n];
    for j in 0..d {
        cost[j] = c[j];
        cost[d + j] = -c[j];
    }
    let sol = lp_solve(&LpProblem {
        cost,
        eq,
        rhs: b.to_vec(),
    })?;
    Ok(match sol.status {
        LpStatus::Optimal => {
            let point = (0..d).map(|j| sol.x[j] - sol.x[d + j]).collect();
            PolyMin::Finite {
                value: sol.value,
                point,
            }
        }
        LpStatus::Unbounded => PolyMin::Unbounded,
        LpStatus::Infeasible => PolyMin::Infeasible,
    })
}

/// sup c^T y over {y : a y <= b} as an extended real: +inf when unbounded,
/// -inf when the polyhedron is empty.
pub fn sup_over_hpoly(c: &[f64], a: &Mat, b: &[f64]) -> Result<f64> {
    Ok(sup_over_hpoly_with_point(c, a, b)?.0)
}

/// As `sup_over_hpoly`, also returning a maximizer when the supremum is
/// finite and attained.
pub fn sup_over_hpoly_with_point(
    c: &[f64],
    a: &Mat,
    b: &[f64],
) -> Result<(f64, Option<Vec<f64>>)> {
    let neg: Vec<f64> = c.iter().map(|v| -v).collect();
    Ok(match minimize_over_hpoly(&neg, a, b)? {
        PolyMin::Finite { value, point } => (-value, Some(point)),
        PolyMin::Unbounded => (f64::INFINITY, None),
        PolyMin::Infeasible => (f64::NEG_INFINITY, None),
    })
}

/// Value at `target` of the lsc convex function generated by lifted points
/// (p_k, v_k) and lifted rays (d_r, w_r):
///   min sum a_k v_k + sum b_r w_r
///   s.t. sum a_k p_k + sum b_r d_r = target, sum a_k = 1, a, b >= 0.
/// +inf when infeasible; -inf when unbounded below (never for valid inputs of
/// this crate, but reported honestly).
pub fn hull_eval(
    points: &[(Vec<f64>, f64)],
    rays: &[(Vec<f64>, f64)],
    target: &[f64],
) -> Result<f64> {
    if points.is_empty() {
        return Ok(f64::INFINITY);
    }
    let d = target.len();
    for (p, _) in points.iter().chain(rays.iter()) {
        if p.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    let nv = points.len();
    let nr = rays.len();
    let n = nv + nr;
    let eq = Mat::from_fn(d + 1, n, |i, j| {
        if i < d {
            if j < nv {
                points[j].0[i]
            } else {
                rays[j - nv].0[i]
            }
        } else if j < nv {
            1.0
        } else {
            0.0
        }
    });
    let mut rhs = target.to_vec();
    rhs.push(1.0);
    let mut cost: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    cost.extend(rays.iter().map(|(_, w)| *w));
    let sol = lp_solve(&LpProblem { cost, eq, rhs })?;
    Ok(match sol.status {
        LpStatus::Optimal => sol.value,
        LpStatus::Infeasible => f64::INFINITY,
        LpStatus::Unbounded => f64::NEG_INFINITY,
    })
}
