//! Exactly evaluable convex functions on an SSD space, with exact Fenchel
//! conjugation per representation:
//!
//! * `MaxAffine` — sup of affine pieces; conjugate = polyhedral hull of the
//!   lifted pieces, evaluated by LP.
//! * `QuadOnGraph` — q restricted to an affine graph in a product space;
//!   conjugate through the general quadratic-on-affine-set form.
//! * `PolyhedralHull` — hull of lifted points by LP; conjugate = finite max.
//! * `QuadAffine` — (1/2) z^T Q z + l^T z + c0 on {Cz = d}. Closed under
//!   conjugation (pseudo-inverse on the reduced Hessian; kernel directions
//!   become equality constraints of the conjugate), which is what makes the
//!   affine-graph Fitzpatrick functions exactly computable, singular
//!   symmetric parts included.
//! * `Phi` / `ThetaStar` — set-backed Fitzpatrick-type functions, dispatched
//!   per set representation in `fitz`.
//! * `FenchelSum` — f(x) + f*(x*) on a product space (the Lambda-function of
//!   the epsilon-subdifferential enlargement).
//! * `PlusQ`, `Blend` — pointwise combinations (evaluation only).
//! * `GridOracle` — brute-force point-cloud reference for conjugates.
//! * `ClampedMin` — max(0, min of affine pieces); not convex, kept as the
//!   negative control for convexity-sensitive checks.

use crate::error::{Error, Result};
use crate::fitz;
use crate::linalg::{self, dot, norm2, norm_inf, Mat};
use crate::lp::hull_eval;
use crate::sets::PositiveSet;
use crate::space::SsdSpace;

/// Relative tolerance for deciding that a point sits on an affine constraint
/// set (off it the value is +inf).
pub const EQ_EVAL_TOL: f64 = 1e-7;

/// f(x) = max_i <g_i, x> - c_i on R^dim.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxAffine {
    dim: usize,
    pieces: Vec<(Vec<f64>, f64)>,
}

impl MaxAffine {
    pub fn new(dim: usize, pieces: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::input("max-affine function needs at least one piece"));
        }
        for (g, _) in &pieces {
            if g.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: g.len(),
                });
            }
        }
        let mut dedup: Vec<(Vec<f64>, f64)> = Vec::with_capacity(pieces.len());
        for (g, c) in pieces {
            if !dedup.iter().any(|(h, d)| h == &g && *d == c) {
                dedup.push((g, c));
            }
        }
        Ok(MaxAffine { dim, pieces: dedup })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[(Vec<f64>, f64)] {
        &self.pieces
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|(g, c)| dot(g, x) - c)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// f*(y) as the hull of the lifted pieces (g_i, c_i): +inf outside
    /// conv{g_i}.
    pub fn conjugate(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: y.len(),
            });
        }
        hull_eval(&self.pieces, &[], y)
    }

    /// Indices of pieces attaining the max at x within `tol`.
    pub fn active(&self, x: &[f64], tol: f64) -> Vec<usize> {
        let v = self.eval(x);
        self.pieces
            .iter()
            .enumerate()
            .filter(|(_, (g, c))| dot(g, x) - c >= v - tol)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn max_grad_norm(&self) -> f64 {
        self.pieces
            .iter()
            .map(|(g, _)| norm2(g))
            .fold(0.0, f64::max)
    }
}

/// (1/2) z^T Q z + l^T z + c0 on {z : C z = d} (+inf off the set).
#[derive(Clone, Debug)]
pub struct QuadAffine {
    pub quad: Mat,
    pub lin: Vec<f64>,
    pub constant: f64,
    pub eq: Option<(Mat, Vec<f64>)>,
}

impl QuadAffine {
    pub fn new(
        quad: Mat,
        lin: Vec<f64>,
        constant: f64,
        eq: Option<(Mat, Vec<f64>)>,
    ) -> Result<Self> {
        let n = quad.rows();
        if quad.cols() != n {
            return Err(Error::input("quadratic term must be square"));
        }
        if lin.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: lin.len(),
            });
        }
        if quad.symmetry_defect() > 1e-10 * (1.0 + quad.max_abs()) {
            return Err(Error::input("quadratic term must be symmetric"));
        }
        if let Some((c, d)) = &eq {
            if c.cols() != n {
                return Err(Error::DimMismatch {
                    expected: n,
                    got: c.cols(),
                });
            }
            if c.rows() != d.len() {
                return Err(Error::DimMismatch {
                    expected: c.rows(),
                    got: d.len(),
                });
            }
        }
        Ok(QuadAffine {
            quad,
            lin,
            constant,
            eq,
        })
    }

    pub fn dim(&self) -> usize {
        self.quad.rows()
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        if let Some((c, d)) = &self.eq {
            let r = linalg::sub(&c.matvec(z), d);
            let scale = 1.0 + norm2(z) + norm_inf(d);
            if norm_inf(&r) > EQ_EVAL_TOL * scale {
                return f64::INFINITY;
            }
        }
        0.5 * dot(z, &self.quad.matvec(z)) + dot(&self.lin, z) + self.constant
    }

    /// z -> f(T z).
    pub fn precompose(&self, t: &Mat) -> QuadAffine {
        let quad = t.transpose().matmul(&self.quad).matmul(t).symmetric_part();
        let lin = t.tr_matvec(&self.lin);
        let eq = self.eq.as_ref().map(|(c, d)| (c.matmul(t), d.clone()));
        QuadAffine {
            quad,
            lin,
            constant: self.constant,
            eq,
        }
    }

    /// Closed-form Fenchel conjugate. Parameterize the domain as z0 + N t
    /// (N an orthonormal null-space basis of C); the supremum over t of a
    /// concave quadratic with reduced Hessian H = N^T Q N gives
    ///   f*(y) = (1/2) w^T H^+ w + <y, z0> - f(z0),  w = N^T (y - Q z0 - l),
    /// finite exactly when w is orthogonal to ker H; those kernel directions
    /// become the equality constraints of the conjugate.
    pub fn conjugate_form(&self) -> Result<QuadAffine> {
        let n = self.dim();
        let (z0, nbasis) = match &self.eq {
            None => (vec![0.0; n], Mat::identity(n)),
            Some((c, d)) => {
                let (z0, resid) = linalg::lstsq(c, d);
                if resid > 1e-8 * (1.0 + norm_inf(d)) {
                    return Err(Error::input(
                        "improper function: equality constraints are infeasible",
                    ));
                }
                (z0, linalg::null_space(c, 1e-10))
            }
        };
        let k = nbasis.cols();
        let qz0 = self.quad.matvec(&z0);
        let e0 = 0.5 * dot(&z0, &qz0) + dot(&self.lin, &z0) + self.constant;
        if k == 0 {
            // point domain: f* is affine
            let quad = Mat::zeros(n, n);
            return QuadAffine::new(quad, z0, -e0, None);
        }
        let h = nbasis
            .transpose()
            .matmul(&self.quad)
            .matmul(&nbasis)
            .symmetric_part();
        let eig = linalg::eigen_sym(&h);
        let lmax = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tau = 1e-9 * lmax.max(1.0);
        if eig.values[0] < -1e-7 * lmax.max(1.0) {
            return Err(Error::input("function is not convex on its domain"));
        }
        let mut hp = Mat::zeros(k, k);
        let mut kernel: Vec<Vec<f64>> = Vec::new();
        for j in 0..k {
            let lam = eig.values[j];
            let v = eig.vectors.col(j);
            if lam.abs() > tau {
                for a in 0..k {
                    for b in 0..k {
                        hp[(a, b)] += v[a] * v[b] / lam;
                    }
                }
            } else {
                kernel.push(v);
            }
        }
        let m0 = nbasis.tr_matvec(&linalg::add(&qz0, &self.lin));
        let nhp = nbasis.matmul(&hp); // n x k
        let quad = nhp.matmul(&nbasis.transpose()).symmetric_part();
        let lin = linalg::sub(&z0, &nhp.matvec(&m0));
        let constant = 0.5 * dot(&m0, &hp.matvec(&m0)) - e0;
        let eq = if kernel.is_empty() {
            None
        } else {
            // rows (N kappa)^T, rhs kappa^T m0
            let rows: Vec<Vec<f64>> = kernel.iter().map(|kv| nbasis.matvec(kv)).collect();
            let rhs: Vec<f64> = kernel.iter().map(|kv| dot(kv, &m0)).collect();
            Some((Mat::from_rows(rows)?, rhs))
        };
        QuadAffine::new(quad, lin, constant, eq)
    }
}

/// Point-cloud reference for conjugates: f*(y) ~ max_k <p_k, y> - v_k.
#[derive(Clone, Debug)]
pub struct GridOracle {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    /// Max finite-difference slope between neighboring samples, for the
    /// discretization tolerance 2 * step * Lipschitz.
    pub lip: f64,
    pub step: f64,
}

impl GridOracle {
    pub fn conjugate(&self, y: &[f64]) -> f64 {
        self.points
            .iter()
            .zip(&self.values)
            .map(|(p, v)| dot(p, y) - v)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug)]
pub enum FnRepr {
    MaxAffine(MaxAffine),
    QuadOnGraph {
        m: Mat,
        p: Vec<f64>,
    },
    PolyhedralHull {
        points: Vec<(Vec<f64>, f64)>,
    },
    PlusQ(Box<ConvexFn>),
    GridOracle(GridOracle),
    QuadAffine(QuadAffine),
    Phi(Box<PositiveSet>),
    ThetaStar(Box<PositiveSet>),
    FenchelSum(MaxAffine),
    Blend {
        weight: f64,
        first: Box<ConvexFn>,
        second: Box<ConvexFn>,
    },
    ClampedMin(MaxAffine),
}

impl FnRepr {
    pub fn name(&self) -> &'static str {
        match self {
            FnRepr::MaxAffine(_) => "max_affine",
            FnRepr::QuadOnGraph { .. } => "quad_on_graph",
            FnRepr::PolyhedralHull { .. } => "hull",
            FnRepr::PlusQ(_) => "plus_q",
            FnRepr::GridOracle(_) => "grid_oracle",
            FnRepr::QuadAffine(_) => "quad",
            FnRepr::Phi(_) => "phi",
            FnRepr::ThetaStar(_) => "theta_star",
            FnRepr::FenchelSum(_) => "fenchel_sum",
            FnRepr::Blend { .. } => "blend",
            FnRepr::ClampedMin(_) => "clamped_min",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConvexFn {
    space: SsdSpace,
    repr: FnRepr,
}

impl ConvexFn {
    pub fn space(&self) -> &SsdSpace {
        &self.space
    }

    pub fn repr(&self) -> &FnRepr {
        &self.repr
    }

    pub fn max_affine(space: SsdSpace, pieces: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let ma = MaxAffine::new(space.dim(), pieces)?;
        Ok(ConvexFn {
            space,
            repr: FnRepr::MaxAffine(ma),
        })
    }

    /// q on the graph {(x, Mx + p)} in product(n).
    pub fn quad_on_graph(m: Mat, p: Vec<f64>) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::input("graph operator must be square"));
        }
        if p.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: p.len(),
            });
        }
        Ok(ConvexFn {
            space: SsdSpace::product(n),
            repr: FnRepr::QuadOnGraph { m, p },
        })
    }

    pub fn polyhedral_hull(space: SsdSpace, points: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("hull needs at least one lifted point"));
        }
        for (a, _) in &points {
            space.check_vec(a)?;
        }
        Ok(ConvexFn {
            space,
            repr: FnRepr::PolyhedralHull { points },
        })
    }

    pub fn plus_q(base: ConvexFn) -> Self {
        let space = base.space.clone();
        ConvexFn {
            space,
            repr: FnRepr::PlusQ(Box::new(base)),
        }
    }

    pub fn quad_affine(space: SsdSpace, qa: QuadAffine) -> Result<Self> {
        if qa.dim() != space.dim() {
            return Err(Error::DimMismatch {
                expected: space.dim(),
                got: qa.dim(),
            });
        }
        Ok(ConvexFn {
            space,
            repr: FnRepr::QuadAffine(qa),
        })
    }

    pub fn phi_of(set: &PositiveSet) -> Self {
        ConvexFn {
            space: set.space().clone(),
            repr: FnRepr::Phi(Box::new(set.clone())),
        }
    }

    pub fn theta_star_of(set: &PositiveSet) -> Self {
        ConvexFn {
            space: set.space().clone(),
            repr: FnRepr::ThetaStar(Box::new(set.clone())),
        }
    }

    /// f(x) + f*(x*) on product(n) for a max-affine f on R^n.
    pub fn fenchel_sum(f: MaxAffine) -> Self {
        ConvexFn {
            space: SsdSpace::product(f.dim()),
            repr: FnRepr::FenchelSum(f),
        }
    }

    pub fn blend(weight: f64, first: ConvexFn, second: ConvexFn) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::input("blend weight must lie in [0, 1]"));
        }
        if first.space != second.space {
            return Err(Error::input("blend components live in different spaces"));
        }
        let space = first.space.clone();
        Ok(ConvexFn {
            space,
            repr: FnRepr::Blend {
                weight,
                first: Box::new(first),
                second: Box::new(second),
            },
        })
    }

    /// max(0, min_i <g_i, b> - c_i): non-convex bump used as negative control.
    pub fn clamped_min(space: SsdSpace, pieces: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let ma = MaxAffine::new(space.dim(), pieces)?;
        Ok(ConvexFn {
            space,
            repr: FnRepr::ClampedMin(ma),
        })
    }

    pub fn variant_name(&self) -> &'static str {
        self.repr.name()
    }

    /// Extended-real evaluation (never NaN; +inf off effective domains).
    pub fn eval(&self, b: &[f64]) -> Result<f64> {
        self.space.check_vec(b)?;
        Ok(match &self.repr {
            FnRepr::MaxAffine(ma) => ma.eval(b),
            FnRepr::QuadOnGraph { m, p } => {
                let n = m.rows();
                let (x, xs) = (&b[..n], &b[n..]);
                let graph = linalg::add(&m.matvec(x), p);
                let scale = 1.0 + norm2(b) + norm_inf(p);
                if norm_inf(&linalg::sub(xs, &graph)) > EQ_EVAL_TOL * scale {
                    f64::INFINITY
                } else {
                    self.space.q_unchecked(b)
                }
            }
            FnRepr::PolyhedralHull { points } => hull_eval(points, &[], b)?,
            FnRepr::PlusQ(base) => {
                let v = base.eval(b)?;
                v + self.space.q_unchecked(b)
            }
            FnRepr::GridOracle(go) => {
                match go
                    .points
                    .iter()
                    .position(|p| norm2(&linalg::sub(p, b)) < 1e-12)
                {
                    Some(i) => go.values[i],
                    None => f64::INFINITY,
                }
            }
            FnRepr::QuadAffine(qa) => qa.eval(b),
            FnRepr::Phi(set) => fitz::phi(set, b)?,
            FnRepr::ThetaStar(set) => fitz::theta_star(set, b)?,
            FnRepr::FenchelSum(f) => {
                let n = f.dim();
                let (x, xs) = (&b[..n], &b[n..]);
                let fs = f.conjugate(xs)?;
                if fs.is_infinite() {
                    f64::INFINITY
                } else {
                    f.eval(x) + fs
                }
            }
            FnRepr::Blend {
                weight,
                first,
                second,
            } => {
                let a = first.eval(b)?;
                let c = second.eval(b)?;
                if a.is_infinite() || c.is_infinite() {
                    f64::INFINITY
                } else {
                    weight * a + (1.0 - weight) * c
                }
            }
            FnRepr::ClampedMin(ma) => {
                let v = ma
                    .pieces()
                    .iter()
                    .map(|(g, c)| dot(g, b) - c)
                    .fold(f64::INFINITY, f64::min);
                v.max(0.0)
            }
        })
    }

    /// f*(y) in the standard pairing. Exact per variant; `PlusQ`, `Blend` and
    /// `ClampedMin` have no exact conjugation route and report unsupported.
    pub fn conjugate(&self, y: &[f64]) -> Result<f64> {
        self.space.check_vec(y)?;
        match &self.repr {
            FnRepr::MaxAffine(ma) => ma.conjugate(y),
            FnRepr::QuadOnGraph { m, p } => {
                let qa = quad_on_graph_form(&self.space, m, p);
                Ok(qa.conjugate_form()?.eval(y))
            }
            FnRepr::PolyhedralHull { points } => Ok(points
                .iter()
                .map(|(a, v)| dot(a, y) - v)
                .fold(f64::NEG_INFINITY, f64::max)),
            FnRepr::GridOracle(go) => Ok(go.conjugate(y)),
            FnRepr::QuadAffine(qa) => Ok(qa.conjugate_form()?.eval(y)),
            FnRepr::Phi(set) => fitz::phi_conjugate(set, y),
            FnRepr::ThetaStar(set) => fitz::theta_star_conjugate(set, y),
            FnRepr::FenchelSum(f) => {
                let n = f.dim();
                let (u, v) = (&y[..n], &y[n..]);
                let fs = f.conjugate(u)?;
                if fs.is_infinite() {
                    return Ok(f64::INFINITY);
                }
                // conjugate of the polyhedral hull backing f*: finite max
                let fss = f
                    .pieces()
                    .iter()
                    .map(|(g, c)| dot(g, v) - c)
                    .fold(f64::NEG_INFINITY, f64::max);
                Ok(fs + fss)
            }
            FnRepr::PlusQ(_) | FnRepr::Blend { .. } | FnRepr::ClampedMin(_) => {
                Err(Error::Unsupported {
                    op: "conjugate",
                    variant: self.variant_name(),
                })
            }
        }
    }

    /// f^@(c) = f*(iota(c)), conjugation in the SSD pairing.
    pub fn at_conjugate(&self, c: &[f64]) -> Result<f64> {
        let y = self.space.iota(c)?;
        self.conjugate(&y)
    }

    /// Sample f on a window to build a brute-force conjugate reference.
    /// Lattice sampling for functions finite on open sets; parameter-grid
    /// sampling along the graph for `QuadOnGraph`; column-cached sums for
    /// `FenchelSum`. Only dim <= 2 windows are supported (desk scale).
    pub fn grid_oracle(&self, lo: f64, hi: f64, step: f64) -> Result<ConvexFn> {
        let d = self.space.dim();
        let steps = ((hi - lo) / step).round() as usize + 1;
        let mut points = Vec::new();
        let mut values = Vec::new();
        let mut lip = 0.0f64;
        match &self.repr {
            FnRepr::QuadOnGraph { m, p } => {
                let n = m.rows();
                if n > 2 {
                    return Err(Error::input("grid oracle supports parameter dim <= 2"));
                }
                let params = lattice_grid(n, lo, step, steps);
                let mut prev: Option<(Vec<f64>, f64)> = None;
                for y in params {
                    let mut b = y.clone();
                    b.extend(linalg::add(&m.matvec(&y), p));
                    let v = self.space.q_unchecked(&b);
                    if let Some((pb, pv)) = &prev {
                        let dist = norm2(&linalg::sub(&b, pb));
                        if dist > 1e-12 {
                            lip = lip.max((v - pv).abs() / dist);
                        }
                    }
                    prev = Some((b.clone(), v));
                    points.push(b);
                    values.push(v);
                }
            }
            _ => {
                if d > 2 {
                    return Err(Error::input("grid oracle supports dim <= 2"));
                }
                // cache f* per x*-column for FenchelSum so the lattice stays
                // O(steps^2) evaluations of cheap pieces
                let fsum_cache: Option<(usize, Vec<f64>)> = match &self.repr {
                    FnRepr::FenchelSum(f) if f.dim() == 1 => {
                        let mut cache = Vec::with_capacity(steps);
                        for j in 0..steps {
                            let xs = lo + j as f64 * step;
                            cache.push(f.conjugate(&[xs])?);
                        }
                        Some((steps, cache))
                    }
                    _ => None,
                };
                let lattice = lattice_grid(d, lo, step, steps);
                let mut grid_vals: Vec<f64> = Vec::with_capacity(lattice.len());
                for b in &lattice {
                    let v = match (&self.repr, &fsum_cache) {
                        (FnRepr::FenchelSum(f), Some((_, cache))) => {
                            let j = ((b[1] - lo) / step).round() as usize;
                            let fs = cache[j];
                            if fs.is_infinite() {
                                f64::INFINITY
                            } else {
                                f.eval(&b[..1]) + fs
                            }
                        }
                        _ => self.eval(b)?,
                    };
                    grid_vals.push(v);
                }
                // neighbor slopes along the last axis
                for (i, b) in lattice.iter().enumerate() {
                    let v = grid_vals[i];
                    if !v.is_finite() {
                        continue;
                    }
                    if i > 0 && grid_vals[i - 1].is_finite() {
                        let dist = norm2(&linalg::sub(b, &lattice[i - 1]));
                        if dist > 1e-12 && dist < 2.0 * step {
                            lip = lip.max((v - grid_vals[i - 1]).abs() / dist);
                        }
                    }
                    points.push(b.clone());
                    values.push(v);
                }
            }
        }
        if points.is_empty() {
            return Err(Error::input(
                "grid oracle window misses the effective domain",
            ));
        }
        Ok(ConvexFn {
            space: self.space.clone(),
            repr: FnRepr::GridOracle(GridOracle {
                points,
                values,
                lip,
                step,
            }),
        })
    }

    /// A crude max-gradient bound used in oracle tolerances.
    pub fn grad_bound_hint(&self) -> Option<f64> {
        match &self.repr {
            FnRepr::MaxAffine(ma) | FnRepr::FenchelSum(ma) | FnRepr::ClampedMin(ma) => {
                Some(ma.max_grad_norm())
            }
            FnRepr::GridOracle(go) => Some(go.lip),
            _ => None,
        }
    }
}

/// Lattice of `steps^d` points with coordinates lo, lo+step, ... The last
/// axis varies fastest, so consecutive entries are grid neighbors.
fn lattice_grid(d: usize, lo: f64, step: f64, steps: usize) -> Vec<Vec<f64>> {
    let coords: Vec<f64> = (0..steps).map(|i| lo + i as f64 * step).collect();
    match d {
        0 => vec![vec![]],
        1 => coords.iter().map(|&x| vec![x]).collect(),
        _ => {
            let inner = lattice_grid(d - 1, lo, step, steps);
            let mut out = Vec::with_capacity(steps * inner.len());
            for &x in &coords {
                for rest in &inner {
                    let mut p = Vec::with_capacity(d);
                    p.push(x);
                    p.extend_from_slice(rest);
                    out.push(p);
                }
            }
            out
        }
    }
}

/// q + indicator of the graph {(x, Mx + p)} as a QuadAffine on product(n).
pub fn quad_on_graph_form(space: &SsdSpace, m: &Mat, p: &[f64]) -> QuadAffine {
    let n = m.rows();
    let c = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            -m[(i, j)]
        } else if j - n == i {
            1.0
        } else {
            0.0
        }
    });
    QuadAffine {
        quad: space.gram().clone(),
        lin: vec![0.0; 2 * n],
        constant: 0.0,
        eq: Some((c, p.to_vec())),
    }
}

/// (x, x*) in graph(partial_eps f): f(x) + f*(x*) <= <x, x*> + eps (+1e-10).
pub fn subdiff_membership(f: &MaxAffine, x: &[f64], xstar: &[f64], eps: f64) -> Result<bool> {
    if eps < 0.0 {
        return Err(Error::input("eps must be nonnegative"));
    }
    let fs = f.conjugate(xstar)?;
    if fs.is_infinite() {
        return Ok(false);
    }
    Ok(f.eval(x) + fs <= dot(x, xstar) + eps + 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn abs_fn() -> MaxAffine {
        MaxAffine::new(1, vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]).unwrap()
    }

    #[test]
    fn max_affine_eval_and_conjugate() {
        let f = abs_fn();
        assert_eq!(f.eval(&[-2.0]), 2.0);
        // f* = indicator of [-1, 1]
        assert!((f.conjugate(&[0.5]).unwrap() - 0.0).abs() < 1e-10);
        assert!(f.conjugate(&[2.0]).unwrap().is_infinite());
        assert!((f.conjugate(&[1.0]).unwrap() - 0.0).abs() < 1e-10);
        // affine piece <g, .> - c conjugates to c at g, +inf elsewhere
        let aff = MaxAffine::new(2, vec![(vec![1.0, 2.0], 3.0)]).unwrap();
        assert!((aff.conjugate(&[1.0, 2.0]).unwrap() - 3.0).abs() < 1e-10);
        assert!(aff.conjugate(&[1.0, 1.0]).unwrap().is_infinite());
    }

    #[test]
    fn quad_on_graph_eval() {
        let f = ConvexFn::quad_on_graph(Mat::identity(1), vec![0.0]).unwrap();
        assert!((f.eval(&[2.0, 2.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!(f.eval(&[2.0, 1.0]).unwrap().is_infinite());
    }

    #[test]
    fn hull_eval_and_conjugate() {
        let s = crate::space::SsdSpace::product(1);
        let f = ConvexFn::polyhedral_hull(s, vec![(vec![0.0, 0.0], 0.0), (vec![1.0, 1.0], 1.0)])
            .unwrap();
        assert!((f.eval(&[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-10);
        assert!(f.eval(&[1.0, 0.0]).unwrap().is_infinite());
        // hull never exceeds generators
        assert!(f.eval(&[1.0, 1.0]).unwrap() <= 1.0 + 1e-10);
        // conjugate: max(0, y1 + y2 - 1)
        assert!((f.conjugate(&[2.0, 1.0]).unwrap() - 2.0).abs() < 1e-10);
        assert!((f.conjugate(&[-1.0, 0.5]).unwrap() - 0.0).abs() < 1e-10);
    }

    #[test]
    fn at_conjugate_examples() {
        // product(1), f = q + delta_{identity graph}:
        // f^@(x, x*) = sup_y [y x* + x y - y^2] = (x + x*)^2 / 4
        let f = ConvexFn::quad_on_graph(Mat::identity(1), vec![0.0]).unwrap();
        assert!((f.at_conjugate(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-10);
        assert!((f.at_conjugate(&[1.0, 0.0]).unwrap() - 0.25).abs() < 1e-10);
        // hilbert: iota = id so f^@ = f*
        let h = crate::space::SsdSpace::hilbert(1);
        let f = ConvexFn::max_affine(h, vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]).unwrap();
        assert_eq!(
            f.at_conjugate(&[0.5]).unwrap(),
            f.conjugate(&[0.5]).unwrap()
        );
        // f = indicator of {0} (hull of one lifted point): f^@ = 0
        let s = crate::space::SsdSpace::product(1);
        let f = ConvexFn::polyhedral_hull(s, vec![(vec![0.0, 0.0], 0.0)]).unwrap();
        assert_eq!(f.at_conjugate(&[3.0, -2.0]).unwrap(), 0.0);
    }

    #[test]
    fn quad_affine_conjugates() {
        // f = x^2/2 on R: f* = y^2/2
        let qa = QuadAffine::new(Mat::identity(1), vec![0.0], 0.0, None).unwrap();
        let conj = qa.conjugate_form().unwrap();
        assert!((conj.eval(&[3.0]) - 4.5).abs() < 1e-10);
        // f = (x + x*)^2/4: f*(u, v) = (u + v)^2/4 + indicator{u = v}
        let q = Mat::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let qa = QuadAffine::new(q, vec![0.0, 0.0], 0.0, None).unwrap();
        assert!((qa.eval(&[1.0, 1.0]) - 1.0).abs() < 1e-12);
        let conj = qa.conjugate_form().unwrap();
        assert!((conj.eval(&[2.0, 2.0]) - 4.0).abs() < 1e-9);
        assert!(conj.eval(&[1.0, 0.0]).is_infinite());
        // biconjugate returns the original on samples
        let back = conj.conjugate_form().unwrap();
        let mut rng = Rng::new(9);
        for _ in 0..100 {
            let b = rng.normal_vec(2);
            assert!((back.eval(&b) - qa.eval(&b)).abs() < 1e-9);
        }
    }

    #[test]
    fn quad_affine_point_domain_and_improper() {
        // domain = {(1, 2)}: f* is affine <y, z0> - f(z0)
        let c = Mat::identity(2);
        let qa = QuadAffine::new(
            Mat::identity(2),
            vec![0.0, 0.0],
            0.0,
            Some((c, vec![1.0, 2.0])),
        )
        .unwrap();
        let conj = qa.conjugate_form().unwrap();
        let f_at = 0.5 * (1.0 + 4.0);
        assert!((conj.eval(&[1.0, 1.0]) - (3.0 - f_at)).abs() < 1e-10);
        // infeasible constraints: improper
        let c = Mat::from_rows(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let qa = QuadAffine::new(
            Mat::identity(2),
            vec![0.0, 0.0],
            0.0,
            Some((c, vec![0.0, 1.0])),
        )
        .unwrap();
        assert!(qa.conjugate_form().is_err());
    }

    #[test]
    fn fenchel_sum_is_self_at_conjugate() {
        let f = ConvexFn::fenchel_sum(abs_fn());
        // lambda(x, x*) = f(x) + f*(x*) - <x, x*>
        assert!((f.eval(&[0.0, 0.5]).unwrap() - 0.0).abs() < 1e-10);
        assert!((f.eval(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-10);
        assert!(f.eval(&[0.0, 2.0]).unwrap().is_infinite());
        // (f + f*)^@ = f + f* pointwise where finite
        let mut rng = Rng::new(13);
        let mut seen_finite = 0;
        for _ in 0..200 {
            let b = vec![rng.range(-2.0, 2.0), rng.range(-1.5, 1.5)];
            let direct = f.eval(&b).unwrap();
            let atc = f.at_conjugate(&b).unwrap();
            if direct.is_finite() {
                seen_finite += 1;
                assert!((direct - atc).abs() < 1e-9, "{direct} vs {atc} at {b:?}");
            } else {
                assert!(atc.is_infinite());
            }
        }
        assert!(seen_finite > 50);
    }

    #[test]
    fn blend_and_plus_q_and_clamped_min() {
        let s = crate::space::SsdSpace::product(1);
        let zero = ConvexFn::max_affine(s.clone(), vec![(vec![0.0, 0.0], 0.0)]).unwrap();
        let pq = ConvexFn::plus_q(zero.clone());
        assert!((pq.eval(&[2.0, 3.0]).unwrap() - 6.0).abs() < 1e-12);
        assert!(pq.conjugate(&[0.0, 0.0]).is_err());
        let one = ConvexFn::max_affine(s.clone(), vec![(vec![0.0, 0.0], -1.0)]).unwrap();
        let b = ConvexFn::blend(0.25, zero, one).unwrap();
        assert!((b.eval(&[5.0, 5.0]).unwrap() - 0.75).abs() < 1e-12);
        // tent: max(0, min(x - x* - 2, 4 - (x - x*)))
        let tent = ConvexFn::clamped_min(s, vec![(vec![1.0, -1.0], 2.0), (vec![-1.0, 1.0], -4.0)])
            .unwrap();
        assert_eq!(tent.eval(&[3.0, 0.0]).unwrap(), 1.0);
        assert_eq!(tent.eval(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(tent.eval(&[2.0, 0.0]).unwrap(), 0.0);
        assert!(tent.conjugate(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn grid_oracle_agrees_with_engine() {
        // |.| on R^1: engine conjugate vs discrete sup
        let h = crate::space::SsdSpace::hilbert(1);
        let f = ConvexFn::max_affine(h, vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]).unwrap();
        let oracle = f.grid_oracle(-5.0, 5.0, 0.01).unwrap();
        let lip = f.grad_bound_hint().unwrap();
        for y in [-0.9, -0.3, 0.0, 0.4, 0.99] {
            let engine = f.conjugate(&[y]).unwrap();
            let by_grid = match oracle.repr() {
                FnRepr::GridOracle(go) => go.conjugate(&[y]),
                _ => unreachable!(),
            };
            let tol = 2.0 * 0.01 * (lip + y.abs() + 1.0);
            assert!(engine >= by_grid - 1e-9);
            assert!(engine - by_grid <= tol, "engine {engine} grid {by_grid}");
        }
    }

    #[test]
    fn subdiff_membership_examples() {
        let f = abs_fn();
        assert!(subdiff_membership(&f, &[0.0], &[0.5], 0.0).unwrap());
        assert!(subdiff_membership(&f, &[1.0], &[1.0], 0.0).unwrap());
        assert!(!subdiff_membership(&f, &[1.0], &[0.0], 0.5).unwrap());
        assert!(subdiff_membership(&f, &[1.0], &[0.0], 1.0).unwrap());
        assert!(subdiff_membership(&f, &[1.0], &[0.0], 1.5).unwrap());
        assert!(subdiff_membership(&f, &[1.0], &[2.0], 0.0).is_ok());
        assert!(!subdiff_membership(&f, &[1.0], &[2.0], 5.0).unwrap());
        assert!(subdiff_membership(&f, &[0.0], &[0.0], -1.0).is_err());
    }
}
