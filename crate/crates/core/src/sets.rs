//! q-positive sets in three exact representations: finite point lists,
//! monotone affine graphs {(x, Mx + p)} in product spaces, and
//! subdifferential graphs of max-affine functions. Each carries whatever
//! precomputed structure makes the Fitzpatrick-type evaluations exact:
//! affine graphs cache the three quadratic forms, subdifferential graphs
//! cache the polyhedral complex of their pieces.

pub use crate::convex::subdiff_membership;

use crate::convex::{quad_on_graph_form, MaxAffine, QuadAffine};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm2, Mat, PsdSolve};
use crate::lp;
use crate::poly::{self, VRep};
use crate::report::{CheckReport, ReportBuilder};
use crate::rng::Rng;
use crate::space::SsdSpace;

pub const PAIR_POS_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const WITNESS_DIST: f64 = 1e-6;
pub const WITNESS_SLACK: f64 = 1e-9;
/// Finite sets whose smallest pairwise q-gap is below this are accepted but
/// flagged (reports carry a warning note).
pub const DEGENERATE_GAP: f64 = 1e-9;

/// Quadratic forms attached to an affine graph A = {(x, Mx+p)}:
/// `theta_star` is q + indicator(A) (its own closed convex hull), `theta` its
/// conjugate, `phi` = theta composed with iota.
#[derive(Clone, Debug)]
pub struct AffineForms {
    pub theta_star: QuadAffine,
    pub theta: QuadAffine,
    pub phi: QuadAffine,
}

/// One product cell of a subdifferential graph: {x : a x <= b} times
/// conv(fiber).
#[derive(Clone, Debug)]
pub struct Cell {
    pub a: Mat,
    pub b: Vec<f64>,
    pub fiber: Vec<Vec<f64>>,
}

/// Region of one affine piece plus the lifted generators of the whole graph.
#[derive(Clone, Debug)]
pub struct SubdiffComplex {
    /// Per piece: H-representation rows (g_j - g_s | c_j - c_s) and V-rep.
    pub regions: Vec<(Mat, Vec<f64>, VRep)>,
    /// Product cells covering the graph exactly (used for distances).
    pub cells: Vec<Cell>,
    /// Lifted generators ((y, g_s), <y, g_s>) of the graph's cells.
    pub lifted_points: Vec<(Vec<f64>, f64)>,
    pub lifted_rays: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone, Debug)]
pub enum SetRepr {
    Finite {
        points: Vec<Vec<f64>>,
    },
    AffineGraph {
        m: Mat,
        p: Vec<f64>,
        forms: Box<AffineForms>,
    },
    SubdiffGraph {
        f: MaxAffine,
        complex: Box<SubdiffComplex>,
    },
}

impl SetRepr {
    pub fn name(&self) -> &'static str {
        match self {
            SetRepr::Finite { .. } => "finite",
            SetRepr::AffineGraph { .. } => "affine",
            SetRepr::SubdiffGraph { .. } => "subdiff",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PositiveSet {
    space: SsdSpace,
    repr: SetRepr,
    degenerate_gap: bool,
}

impl PositiveSet {
    /// Finite q-positive set in an arbitrary SSD space. Pairs with
    /// q(b - c) < -1e-12 are rejected; tolerance-scale gaps set the warning
    /// flag that reports propagate.
    pub fn finite(space: SsdSpace, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("a q-positive set must be nonempty"));
        }
        for p in &points {
            space.check_vec(p)?;
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let d = linalg::sub(&points[i], &points[j]);
                let g = space.q_unchecked(&d);
                if g < -PAIR_POS_TOL {
                    return Err(Error::input(format!(
                        "points {i} and {j} violate q-positivity (q = {g:.3e})"
                    )));
                }
                min_gap = min_gap.min(g);
            }
        }
        let degenerate_gap = points.len() > 1 && min_gap < DEGENERATE_GAP;
        Ok(PositiveSet {
            space,
            repr: SetRepr::Finite { points },
            degenerate_gap,
        })
    }

    /// Affine graph {(x, Mx + p)} in product(n); q-positive iff the symmetric
    /// part of M is PSD (that is exactly q(b-c) = (x-y)^T (M+M^T)/2 (x-y)).
    pub fn affine_graph(m: Mat, p: Vec<f64>) -> Result<Self> {
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
        let sym = m.symmetric_part();
        let eig = linalg::eigen_sym(&sym);
        if eig.values[0] < -PSD_TOL {
            return Err(Error::input(format!(
                "symmetric part of M is not PSD (lambda_min = {:.3e})",
                eig.values[0]
            )));
        }
        let space = SsdSpace::product(n);
        let theta_star = quad_on_graph_form(&space, &m, &p);
        let theta = theta_star.conjugate_form()?;
        let phi = theta.precompose(space.gram());
        let forms = Box::new(AffineForms {
            theta_star,
            theta,
            phi,
        });
        Ok(PositiveSet {
            space,
            repr: SetRepr::AffineGraph { m, p, forms },
            degenerate_gap: false,
        })
    }

    /// Graph of the subdifferential of a max-affine f on R^n (n <= 3,
    /// <= 32 pieces: the caps under which cell enumeration stays exact).
    pub fn subdiff_graph(f: MaxAffine) -> Result<Self> {
        let n = f.dim();
        if n == 0 || n > 3 {
            return Err(Error::input("subdifferential graphs support 1 <= dim <= 3"));
        }
        if f.pieces().len() > 32 {
            return Err(Error::input(
                "subdifferential graphs support at most 32 pieces",
            ));
        }
        let complex = Box::new(build_complex(&f)?);
        Ok(PositiveSet {
            space: SsdSpace::product(n),
            repr: SetRepr::SubdiffGraph { f, complex },
            degenerate_gap: false,
        })
    }

    pub fn space(&self) -> &SsdSpace {
        &self.space
    }

    pub fn repr(&self) -> &SetRepr {
        &self.repr
    }

    pub fn repr_name(&self) -> &'static str {
        self.repr.name()
    }

    pub fn degenerate_gap(&self) -> bool {
        self.degenerate_gap
    }

    /// Sets whose maximality is known rather than searched for: PSD affine
    /// graphs (full-domain monotone affine maps), subdifferential graphs, and
    /// singletons in anti-Hilbert spaces (q(b-c) >= 0 forces b = c there).
    pub fn maximal_by_theory(&self) -> bool {
        match &self.repr {
            SetRepr::AffineGraph { .. } | SetRepr::SubdiffGraph { .. } => true,
            SetRepr::Finite { points } => {
                points.len() == 1 && {
                    let g = self.space.gram();
                    let n = self.space.dim();
                    let mut neg_id = true;
                    for i in 0..n {
                        for j in 0..n {
                            let want = if i == j { -1.0 } else { 0.0 };
                            if (g[(i, j)] - want).abs() > 1e-12 {
                                neg_id = false;
                            }
                        }
                    }
                    neg_id
                }
            }
        }
    }

    /// inf over c in A of q(b - c), as an extended real (-inf possible).
    pub fn inf_q(&self, b: &[f64]) -> Result<f64> {
        self.space.check_vec(b)?;
        match &self.repr {
            SetRepr::Finite { points } => Ok(points
                .iter()
                .map(|a| self.space.q_unchecked(&linalg::sub(b, a)))
                .fold(f64::INFINITY, f64::min)),
            SetRepr::AffineGraph { m, p, .. } => {
                // q(b - (y, My+p)) = y^T S y - <w, y> + <x, x* - p>,
                // w = M^T x + x* - p, S = (M + M^T)/2
                let n = m.rows();
                let (x, xs) = (&b[..n], &b[n..]);
                let s = m.symmetric_part();
                let w = {
                    let mut w = m.tr_matvec(x);
                    for i in 0..n {
                        w[i] += xs[i] - p[i];
                    }
                    w
                };
                let two_s = s.scale(2.0);
                match linalg::solve_sym_consistent(&two_s, &w, 1e-10) {
                    PsdSolve::Solution(y) => {
                        let quad = dot(&y, &s.matvec(&y));
                        let lin = dot(&w, &y);
                        let c0 = dot(x, &linalg::sub(xs, p));
                        Ok(quad - lin + c0)
                    }
                    PsdSolve::Inconsistent => Ok(f64::NEG_INFINITY),
                }
            }
            SetRepr::SubdiffGraph { f, complex } => {
                // the inner inf over the fiber is attained at a generator
                // g_s, so one support LP per nonempty piece region is exact
                let n = f.dim();
                let (x, xs) = (&b[..n], &b[n..]);
                let mut best = f64::INFINITY;
                for (s, (rows, rhs, vrep)) in complex.regions.iter().enumerate() {
                    if vrep.is_empty() {
                        continue;
                    }
                    let g = &f.pieces()[s].0;
                    let c = linalg::sub(xs, g);
                    let sup = lp::sup_over_hpoly(&c, rows, rhs)?;
                    let val = if sup.is_infinite() && sup > 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        dot(x, &c) - sup
                    };
                    best = best.min(val);
                }
                Ok(best)
            }
        }
    }

    /// Euclidean distance from b to the set.
    pub fn distance(&self, b: &[f64]) -> Result<f64> {
        self.space.check_vec(b)?;
        match &self.repr {
            SetRepr::Finite { points } => Ok(points
                .iter()
                .map(|a| norm2(&linalg::sub(b, a)))
                .fold(f64::INFINITY, f64::min)),
            SetRepr::AffineGraph { m, p, .. } => {
                // projection: (I + M^T M) y = x + M^T (x* - p)
                let n = m.rows();
                let (x, xs) = (&b[..n], &b[n..]);
                let sys = Mat::identity(n).add(&m.transpose().matmul(m));
                let rhs = linalg::add(x, &m.tr_matvec(&linalg::sub(xs, p)));
                match linalg::solve_sym_consistent(&sys, &rhs, 1e-12) {
                    PsdSolve::Solution(y) => {
                        let gy = linalg::add(&m.matvec(&y), p);
                        let dx = norm2(&linalg::sub(x, &y));
                        let ds = norm2(&linalg::sub(xs, &gy));
                        Ok((dx * dx + ds * ds).sqrt())
                    }
                    PsdSolve::Inconsistent => {
                        Err(Error::solver("projection system unexpectedly inconsistent"))
                    }
                }
            }
            SetRepr::SubdiffGraph { f, complex } => {
                let n = f.dim();
                let (x, xs) = (&b[..n], &b[n..]);
                let mut best = f64::INFINITY;
                for cell in &complex.cells {
                    let dx = poly::dist_to_hpoly(x, &cell.a, &cell.b);
                    if !dx.is_finite() || dx >= best {
                        continue;
                    }
                    let ds = poly::dist_to_polytope(xs, &cell.fiber);
                    best = best.min((dx * dx + ds * ds).sqrt());
                }
                Ok(best)
            }
        }
    }

    /// A point of the set, randomized; anchors for member sampling.
    pub fn sample_point(&self, rng: &mut Rng) -> Vec<f64> {
        match &self.repr {
            SetRepr::Finite { points } => points[rng.index(points.len())].clone(),
            SetRepr::AffineGraph { m, p, .. } => {
                let n = m.rows();
                let y: Vec<f64> = (0..n).map(|_| 1.2 * rng.normal()).collect();
                let mut b = y.clone();
                b.extend(linalg::add(&m.matvec(&y), p));
                b
            }
            SetRepr::SubdiffGraph { f, .. } => {
                let n = f.dim();
                let x: Vec<f64> = (0..n).map(|_| 1.2 * rng.normal()).collect();
                let act = f.active(&x, 1e-12);
                let g = &f.pieces()[act[0]].0;
                let mut b = x.clone();
                b.extend_from_slice(g);
                b
            }
        }
    }

    /// Exhaustive pairwise check for finite sets; eigenvalue certificate plus
    /// random graph pairs otherwise.
    pub fn q_positivity_report(&self, sample_budget: u64, seed: u64) -> Result<CheckReport> {
        let mut rb = ReportBuilder::new("q_positivity", self.repr_name(), seed, PAIR_POS_TOL);
        if self.degenerate_gap {
            rb.note("warning: pairwise q-gaps at tolerance scale");
        }
        let mut rng = Rng::new(seed);
        match &self.repr {
            SetRepr::Finite { points } => {
                for i in 0..points.len() {
                    for j in (i + 1)..points.len() {
                        let d = linalg::sub(&points[i], &points[j]);
                        rb.record_lower_bound(self.space.q_unchecked(&d), 0.0);
                    }
                }
                if points.len() == 1 {
                    rb.record(0.0); // singleton: vacuously positive
                }
            }
            SetRepr::AffineGraph { m, .. } => {
                let eig = linalg::eigen_sym(&m.symmetric_part());
                rb.record_lower_bound(eig.values[0], 0.0);
                for _ in 0..sample_budget {
                    let b1 = self.sample_point(&mut rng);
                    let b2 = self.sample_point(&mut rng);
                    rb.record_lower_bound(self.space.q_unchecked(&linalg::sub(&b1, &b2)), 0.0);
                }
            }
            SetRepr::SubdiffGraph { .. } => {
                for _ in 0..sample_budget {
                    let b1 = self.sample_point(&mut rng);
                    let b2 = self.sample_point(&mut rng);
                    rb.record_lower_bound(self.space.q_unchecked(&linalg::sub(&b1, &b2)), 0.0);
                }
            }
        }
        Ok(rb.finish())
    }

    /// Search for b (not in A) with inf_{c in A} q(b - c) >= -1e-9: a witness
    /// that A is not maximal. Refutation only; None is inconclusive for
    /// finite sets and means "maximal by theory" for the constructed families.
    pub fn maximality_refute(&self, budget: u64, seed: u64) -> Result<Option<Vec<f64>>> {
        if self.maximal_by_theory() {
            return Ok(None);
        }
        let points = match &self.repr {
            SetRepr::Finite { points } => points,
            _ => return Ok(None),
        };
        let dim = self.space.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in points {
            for i in 0..dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let margin = 1.0 + points.iter().map(|p| norm2(p)).fold(0.0, f64::max) * 0.5;
        for i in 0..dim {
            lo[i] -= margin;
            hi[i] += margin;
        }
        let qualifies = |b: &[f64]| -> Result<bool> {
            Ok(self.inf_q(b)? >= -WITNESS_SLACK && self.distance(b)? > WITNESS_DIST)
        };

        // deterministic candidates first: pairwise midpoints and coordinate
        // swaps often certify non-maximality outright
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        for i in 0..points.len() {
            for j in 0..points.len() {
                if i == j {
                    continue;
                }
                let mid: Vec<f64> = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect();
                candidates.push(mid);
                if let Some(n) = self.space.product_half() {
                    let mut swap = points[i].clone();
                    swap[n..].copy_from_slice(&points[j][n..]);
                    candidates.push(swap);
                }
            }
        }
        // coarse grid
        let per_axis = (budget as f64).powf(1.0 / dim as f64).floor().max(2.0) as usize;
        let per_axis = per_axis.min(9);
        let mut grid_idx = vec![0usize; dim];
        loop {
            let b: Vec<f64> = (0..dim)
                .map(|i| lo[i] + (hi[i] - lo[i]) * grid_idx[i] as f64 / (per_axis - 1) as f64)
                .collect();
            candidates.push(b);
            let mut k = 0;
            while k < dim {
                grid_idx[k] += 1;
                if grid_idx[k] < per_axis {
                    break;
                }
                grid_idx[k] = 0;
                k += 1;
            }
            if k == dim {
                break;
            }
        }
        for cand in &candidates {
            if qualifies(cand)? {
                return Ok(Some(cand.clone()));
            }
        }

        // multi-start compass ascent on b -> inf_q(b)
        let mut rng = Rng::new(seed);
        let starts = (budget / 50).clamp(4, 40);
        for _ in 0..starts {
            let mut b: Vec<f64> = (0..dim).map(|i| rng.range(lo[i], hi[i])).collect();
            let mut step = 0.5 * (hi[0] - lo[0]).max(1.0);
            let mut val = self.inf_q(&b)?;
            for _ in 0..60 {
                let mut improved = false;
                for i in 0..dim {
                    for sgn in [1.0, -1.0] {
                        let mut cand = b.clone();
                        cand[i] += sgn * step;
                        let v = self.inf_q(&cand)?;
                        if v > val {
                            b = cand;
                            val = v;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    step *= 0.5;
                    if step < 1e-7 {
                        break;
                    }
                }
                if val >= -WITNESS_SLACK && qualifies(&b)? {
                    return Ok(Some(b));
                }
            }
            if qualifies(&b)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }
}

/// Polyhedral complex of a max-affine function and the product cells of its
/// subdifferential graph.
fn build_complex(f: &MaxAffine) -> Result<SubdiffComplex> {
    let n = f.dim();
    let pieces = f.pieces();
    let m = pieces.len();

    let region_hrep = |s: usize| -> (Mat, Vec<f64>) {
        let rows: Vec<Vec<f64>> = (0..m)
            .filter(|&j| j != s)
            .map(|j| linalg::sub(&pieces[j].0, &pieces[s].0))
            .collect();
        let rhs: Vec<f64> = (0..m)
            .filter(|&j| j != s)
            .map(|j| pieces[j].1 - pieces[s].1)
            .collect();
        if rows.is_empty() {
            (Mat::zeros(1, n), vec![0.0])
        } else {
            (Mat::from_rows(rows).expect("consistent dims"), rhs)
        }
    };

    let mut regions = Vec::with_capacity(m);
    for s in 0..m {
        let (a, b) = region_hrep(s);
        let vrep = poly::hrep_to_vrep(&a, &b)?;
        regions.push((a, b, vrep));
    }

    // active pieces at a point, by value gap
    let active_at = |x: &[f64]| -> Vec<usize> { f.active(x, 1e-7 * (1.0 + norm2(x))) };

    let mut cells: Vec<Cell> = Vec::new();
    let mut push_cell = |a: Mat, b: Vec<f64>, actives: &[usize]| {
        let fiber: Vec<Vec<f64>> = actives.iter().map(|&i| pieces[i].0.clone()).collect();
        cells.push(Cell { a, b, fiber });
    };

    // full-dimensional cells, one per nonempty region
    for (s, (a, b, vrep)) in regions.iter().enumerate() {
        if vrep.is_empty() {
            continue;
        }
        let rp = vrep.relint_point().expect("nonempty");
        let mut act = active_at(&rp);
        if !act.contains(&s) {
            act.push(s);
        }
        push_cell(a.clone(), b.clone(), &act);
    }

    // equality cells for pairs (and triples in R^3): the faces where several
    // pieces tie, fibered by the convex hull of the active gradients
    let mut tie_cell = |tied: &[usize]| -> Result<()> {
        let s = tied[0];
        let (mut a, mut b) = region_hrep(s);
        for &t in &tied[1..] {
            let row = linalg::sub(&pieces[t].0, &pieces[s].0);
            let rhs = pieces[t].1 - pieces[s].1;
            a = a.vstack(&Mat::from_rows(vec![linalg::scale(&row, -1.0)])?);
            let mut brows = b.clone();
            brows.push(-rhs);
            b = brows;
        }
        let vrep = poly::hrep_to_vrep(&a, &b)?;
        if vrep.is_empty() {
            return Ok(());
        }
        let rp = vrep.relint_point().expect("nonempty");
        let mut act = active_at(&rp);
        for &t in tied {
            if !act.contains(&t) {
                act.push(t);
            }
        }
        push_cell(a, b, &act);
        Ok(())
    };
    for s in 0..m {
        for t in (s + 1)..m {
            tie_cell(&[s, t])?;
        }
    }
    if n == 3 {
        for s in 0..m {
            for t in (s + 1)..m {
                for u in (t + 1)..m {
                    tie_cell(&[s, t, u])?;
                }
            }
        }
    }

    // vertex cells: at each region vertex all active gradients mix
    for (_, _, vrep) in &regions {
        for v in &vrep.points {
            let act = active_at(v);
            if act.len() < 2 {
                continue;
            }
            let a = Mat::from_fn(2 * n, n, |i, j| {
                if i < n {
                    if i == j {
                        1.0
                    } else {
                        0.0
                    }
                } else if i - n == j {
                    -1.0
                } else {
                    0.0
                }
            });
            let mut b = v.clone();
            b.extend(v.iter().map(|x| -x));
            let fiber: Vec<Vec<f64>> = act.iter().map(|&i| pieces[i].0.clone()).collect();
            cells.push(Cell { a, b, fiber });
        }
    }

    // lifted generators: on each region the lift of (y, g_s) is linear in y
    let mut lifted_points = Vec::new();
    let mut lifted_rays = Vec::new();
    for (s, (_, _, vrep)) in regions.iter().enumerate() {
        let g = &pieces[s].0;
        for y in &vrep.points {
            let mut pt = y.clone();
            pt.extend_from_slice(g);
            lifted_points.push((pt, dot(y, g)));
        }
        for d in &vrep.rays {
            let mut ray = d.clone();
            ray.extend(std::iter::repeat_n(0.0, n));
            lifted_rays.push((ray, dot(d, g)));
        }
    }

    Ok(SubdiffComplex {
        regions,
        cells,
        lifted_points,
        lifted_rays,
    })
}
