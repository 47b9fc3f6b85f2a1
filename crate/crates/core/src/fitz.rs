//! Fitzpatrick-type functions of a q-positive set A:
//!
//! * theta(y)      = sup_{a in A} <a, y> - q(a)   (on the dual coordinates),
//! * phi(b)        = theta(iota(b)) = sup_{a in A} [a, b] - q(a),
//! * theta_star(b) = conjugate of theta back on B = closed convex hull of
//!   q + indicator(A).
//!
//! For maximal A, phi and theta_star are the smallest and biggest
//! representative functions; each set representation gets its own exact
//! route (finite max / hull LP, closed quadratic forms, per-piece support
//! LPs with hull LPs over lifted cell generators).

use crate::convex::ConvexFn;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Mat};
use crate::lp::{self, hull_eval, LpProblem, LpStatus};
use crate::report::{CheckReport, ReportBuilder};
use crate::rng::Rng;
use crate::sets::{PositiveSet, SetRepr};

pub const VALUE_TOL: f64 = 1e-9;

/// phi(b) = sup_{a in A} [a, b] - q(a).
pub fn phi(a: &PositiveSet, b: &[f64]) -> Result<f64> {
    let space = a.space();
    space.check_vec(b)?;
    match a.repr() {
        SetRepr::Finite { points } => Ok(points
            .iter()
            .map(|pt| space.bracket_unchecked(pt, b) - space.q_unchecked(pt))
            .fold(f64::NEG_INFINITY, f64::max)),
        SetRepr::AffineGraph { forms, .. } => Ok(forms.phi.eval(b)),
        SetRepr::SubdiffGraph { f, complex } => {
            let n = f.dim();
            let (x, xs) = (&b[..n], &b[n..]);
            let mut best = f64::NEG_INFINITY;
            for (s, (rows, rhs, vrep)) in complex.regions.iter().enumerate() {
                if vrep.is_empty() {
                    continue;
                }
                let g = &f.pieces()[s].0;
                let w = linalg::sub(xs, g);
                let sup = lp::sup_over_hpoly(&w, rows, rhs)?;
                best = best.max(dot(x, g) + sup);
                if best.is_infinite() {
                    return Ok(f64::INFINITY);
                }
            }
            Ok(best)
        }
    }
}

/// theta(y) = sup_{a in A} <a, y> - q(a) on the dual coordinate space.
pub fn theta(a: &PositiveSet, y: &[f64]) -> Result<f64> {
    let space = a.space();
    space.check_vec(y)?;
    match a.repr() {
        SetRepr::Finite { points } => Ok(points
            .iter()
            .map(|pt| dot(pt, y) - space.q_unchecked(pt))
            .fold(f64::NEG_INFINITY, f64::max)),
        SetRepr::AffineGraph { forms, .. } => Ok(forms.theta.eval(y)),
        SetRepr::SubdiffGraph { f, complex } => {
            let n = f.dim();
            let (u, v) = (&y[..n], &y[n..]);
            let mut best = f64::NEG_INFINITY;
            for (s, (rows, rhs, vrep)) in complex.regions.iter().enumerate() {
                if vrep.is_empty() {
                    continue;
                }
                let g = &f.pieces()[s].0;
                let w = linalg::sub(u, g);
                let sup = lp::sup_over_hpoly(&w, rows, rhs)?;
                best = best.max(dot(g, v) + sup);
                if best.is_infinite() {
                    return Ok(f64::INFINITY);
                }
            }
            Ok(best)
        }
    }
}

/// theta_star(b): the biggest representative function, as the closed convex
/// hull of q + indicator(A).
pub fn theta_star(a: &PositiveSet, b: &[f64]) -> Result<f64> {
    let space = a.space();
    space.check_vec(b)?;
    match a.repr() {
        SetRepr::Finite { points } => {
            let lifted: Vec<(Vec<f64>, f64)> = points
                .iter()
                .map(|p| (p.clone(), space.q_unchecked(p)))
                .collect();
            hull_eval(&lifted, &[], b)
        }
        SetRepr::AffineGraph { forms, .. } => Ok(forms.theta_star.eval(b)),
        SetRepr::SubdiffGraph { complex, .. } => {
            hull_eval(&complex.lifted_points, &complex.lifted_rays, b)
        }
    }
}

/// (phi)^*(y) in the standard pairing, by a route independent of
/// `theta_star`: hull LP over the iota-image for finite sets, conjugation of
/// the closed quadratic form for affine graphs, and an epigraph LP for
/// subdifferential graphs.
pub fn phi_conjugate(a: &PositiveSet, y: &[f64]) -> Result<f64> {
    Ok(phi_conjugate_argsup(a, y)?.0)
}

/// As `phi_conjugate`, also returning a point attaining the supremum
/// sup_b <b, y> - phi(b) when one is available (the epigraph LP's optimizer
/// for subdifferential graphs; None for the other representations).
pub fn phi_conjugate_argsup(a: &PositiveSet, y: &[f64]) -> Result<(f64, Option<Vec<f64>>)> {
    let space = a.space();
    space.check_vec(y)?;
    match a.repr() {
        SetRepr::Finite { points } => {
            let lifted: Vec<(Vec<f64>, f64)> = points
                .iter()
                .map(|p| (space.iota_unchecked(p), space.q_unchecked(p)))
                .collect();
            Ok((hull_eval(&lifted, &[], y)?, None))
        }
        SetRepr::AffineGraph { forms, .. } => {
            Ok((forms.phi.conjugate_form()?.eval(y), None))
        }
        SetRepr::SubdiffGraph { f, complex } => {
            // sup over epi(phi) of <b, y> - t, with epi(phi) the H-polyhedron
            // cut out by the lifted cell generators
            let n = f.dim();
            let mut rows: Vec<Vec<f64>> = Vec::new();
            let mut rhs: Vec<f64> = Vec::new();
            for (s, (_, _, vrep)) in complex.regions.iter().enumerate() {
                if vrep.is_empty() {
                    continue;
                }
                let g = &f.pieces()[s].0;
                for yv in &vrep.points {
                    // <g_s, x> + <y_v, x*> - t <= <y_v, g_s>
                    let mut row = Vec::with_capacity(2 * n + 1);
                    row.extend_from_slice(g);
                    row.extend_from_slice(yv);
                    row.push(-1.0);
                    rows.push(row);
                    rhs.push(dot(yv, g));
                }
                for d in &vrep.rays {
                    // <d_r, x*> <= <d_r, g_s>
                    let mut row = vec![0.0; 2 * n + 1];
                    row[n..2 * n].copy_from_slice(d);
                    rows.push(row);
                    rhs.push(dot(d, g));
                }
            }
            let amat = Mat::from_rows(rows)?;
            let mut c = y.to_vec();
            c.push(-1.0);
            let (value, point) = lp::sup_over_hpoly_with_point(&c, &amat, &rhs)?;
            let arg = point.map(|mut p| {
                p.truncate(2 * n); // drop the epigraph coordinate
                p
            });
            Ok((value, arg))
        }
    }
}

/// (theta_star)^*(y); for finite sets by an explicit epigraph LP (the dual
/// route against the finite max of `theta`).
pub fn theta_star_conjugate(a: &PositiveSet, y: &[f64]) -> Result<f64> {
    let space = a.space();
    space.check_vec(y)?;
    match a.repr() {
        SetRepr::Finite { points } => {
            // sup over epi(theta_star) = co{(a_i, q(a_i))} + vertical ray:
            // LP in (alpha, tau)
            let k = points.len();
            let mut cost: Vec<f64> = points
                .iter()
                .map(|p| space.q_unchecked(p) - dot(p, y))
                .collect();
            cost.push(1.0); // tau
            let eq = Mat::from_fn(1, k + 1, |_, j| if j < k { 1.0 } else { 0.0 });
            let sol = lp::lp_solve(&LpProblem {
                cost,
                eq,
                rhs: vec![1.0],
            })?;
            match sol.status {
                LpStatus::Optimal => Ok(-sol.value),
                LpStatus::Unbounded => Ok(f64::INFINITY),
                LpStatus::Infeasible => Err(Error::solver("simplex row cannot be infeasible")),
            }
        }
        SetRepr::AffineGraph { forms, .. } => Ok(forms.theta_star.conjugate_form()?.eval(y)),
        SetRepr::SubdiffGraph { complex, .. } => {
            let ray_slope = complex
                .lifted_rays
                .iter()
                .map(|(d, w)| dot(d, y) - w)
                .fold(f64::NEG_INFINITY, f64::max);
            if ray_slope > 1e-10 {
                return Ok(f64::INFINITY);
            }
            Ok(complex
                .lifted_points
                .iter()
                .map(|(p, v)| dot(p, y) - v)
                .fold(f64::NEG_INFINITY, f64::max))
        }
    }
}

/// Random probe point: a set anchor blurred by Gaussian noise most of the
/// time, a wide cloud otherwise.
pub fn probe_point(a: &PositiveSet, rng: &mut Rng) -> Vec<f64> {
    if rng.uniform() < 0.7 {
        let mut b = a.sample_point(rng);
        for v in &mut b {
            *v += 0.8 * rng.normal();
        }
        b
    } else {
        rng.normal_vec(a.space().dim())
            .iter()
            .map(|v| 2.0 * v)
            .collect()
    }
}

/// h is a representative function of A when h >= q on B and h = q on A.
pub fn repr_membership_report(
    a: &PositiveSet,
    h: &ConvexFn,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let space = a.space();
    let mut rb = ReportBuilder::new("repr_membership", a.repr_name(), seed, VALUE_TOL);
    if a.degenerate_gap() {
        rb.note("warning: pairwise q-gaps at tolerance scale");
    }
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = probe_point(a, &mut rng);
        rb.record_lower_bound(h.eval(&b)?, space.q_unchecked(&b));
        let on_a = a.sample_point(&mut rng);
        let hv = h.eval(&on_a)?;
        let qv = space.q_unchecked(&on_a);
        rb.record(if hv.is_finite() {
            (hv - qv).abs()
        } else {
            f64::INFINITY
        });
    }
    Ok(rb.finish())
}

/// phi <= h <= theta_star pointwise (extended-real conventions).
pub fn sandwich_report(
    a: &PositiveSet,
    h: &ConvexFn,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let mut rb = ReportBuilder::new("sandwich", a.repr_name(), seed, VALUE_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = probe_point(a, &mut rng);
        let hv = h.eval(&b)?;
        rb.record_lower_bound(hv, phi(a, &b)?);
        rb.record_lower_bound(theta_star(a, &b)?, hv);
    }
    Ok(rb.finish())
}

/// h in H(A) implies h^@ in H(A): check h^@ >= q everywhere sampled and
/// h^@ = q on sampled points of A.
pub fn h_at_membership_report(
    a: &PositiveSet,
    h: &ConvexFn,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let space = a.space();
    let mut rb = ReportBuilder::new("h_at_membership", a.repr_name(), seed, VALUE_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = probe_point(a, &mut rng);
        rb.record_lower_bound(h.at_conjugate(&b)?, space.q_unchecked(&b));
        let on_a = a.sample_point(&mut rng);
        let hv = h.at_conjugate(&on_a)?;
        let qv = space.q_unchecked(&on_a);
        rb.record(if hv.is_finite() {
            (hv - qv).abs()
        } else {
            f64::INFINITY
        });
    }
    Ok(rb.finish())
}

/// Theta composed with iota equals phi (definitional; exercised over the two
/// implementations' distinct arithmetic).
pub fn theta_phi_report(a: &PositiveSet, samples: u64, seed: u64) -> Result<CheckReport> {
    let space = a.space().clone();
    let mut rb = ReportBuilder::new("theta_phi_iota", a.repr_name(), seed, VALUE_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = probe_point(a, &mut rng);
        let via_theta = theta(a, &space.iota(&b)?)?;
        let direct = phi(a, &b)?;
        if via_theta.is_finite() && direct.is_finite() {
            rb.record((via_theta - direct).abs());
        } else if via_theta.is_finite() != direct.is_finite() {
            rb.record(f64::INFINITY);
        } else {
            rb.record(0.0);
        }
    }
    Ok(rb.finish())
}

/// Both closed forms of phi agree: the direct supremum and q - inf_q.
pub fn phi_forms_report(a: &PositiveSet, samples: u64, seed: u64) -> Result<CheckReport> {
    let space = a.space().clone();
    let mut rb = ReportBuilder::new("phi_two_forms", a.repr_name(), seed, VALUE_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = probe_point(a, &mut rng);
        let direct = phi(a, &b)?;
        let inf = a.inf_q(&b)?;
        let via_inf = if inf.is_infinite() {
            f64::INFINITY
        } else {
            space.q_unchecked(&b) - inf
        };
        if direct.is_finite() && via_inf.is_finite() {
            let mag = 1.0 + direct.abs().max(via_inf.abs());
            rb.record((direct - via_inf).abs() / mag);
        } else if direct.is_finite() != via_inf.is_finite() {
            rb.record(f64::INFINITY);
        } else {
            rb.record(0.0);
        }
    }
    Ok(rb.finish())
}

pub const CROSS_TOL: f64 = 1e-8;

/// Finite-dimensional collapse: phi^@ computed by the conjugate route equals
/// theta_star computed by the hull route, and (theta_star)^* equals theta.
pub fn fitz_cross_report(a: &PositiveSet, samples: u64, seed: u64) -> Result<CheckReport> {
    let space = a.space().clone();
    let mut rb = ReportBuilder::new("fitz_cross", a.repr_name(), seed, CROSS_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = probe_point(a, &mut rng);
        let lhs = phi_conjugate(a, &space.iota(&b)?)?;
        let rhs = theta_star(a, &b)?;
        if lhs.is_finite() && rhs.is_finite() {
            let mag = 1.0 + lhs.abs().max(rhs.abs());
            rb.record((lhs - rhs).abs() / mag);
        } else if lhs.is_finite() != rhs.is_finite() {
            rb.record(f64::INFINITY);
        } else {
            rb.record(0.0);
        }
        let y = rng.normal_vec(space.dim());
        let l = theta_star_conjugate(a, &y)?;
        let t = theta(a, &y)?;
        if l.is_finite() && t.is_finite() {
            let mag = 1.0 + l.abs().max(t.abs());
            rb.record((l - t).abs() / mag);
        } else if l.is_finite() != t.is_finite() {
            rb.record(f64::INFINITY);
        } else {
            rb.record(0.0);
        }
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::MaxAffine;
    use crate::space::SsdSpace;

    fn identity_graph() -> PositiveSet {
        PositiveSet::affine_graph(Mat::identity(1), vec![0.0]).unwrap()
    }

    fn two_point_set() -> PositiveSet {
        PositiveSet::finite(SsdSpace::product(1), vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap()
    }

    fn abs_graph() -> PositiveSet {
        PositiveSet::subdiff_graph(
            MaxAffine::new(1, vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn phi_identity_graph_closed_form() {
        let a = identity_graph();
        // phi(x, x*) = (x + x*)^2 / 4
        assert!((phi(&a, &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-10);
        assert!((phi(&a, &[1.0, 0.0]).unwrap() - 0.25).abs() < 1e-10);
        assert!((phi(&a, &[2.0, -1.0]).unwrap() - 0.25).abs() < 1e-10);
        // cross-check against q - inf_q
        let space = a.space().clone();
        let mut rng = Rng::new(11);
        for _ in 0..200 {
            let b = rng.normal_vec(2);
            let lhs = phi(&a, &b).unwrap();
            let rhs = space.q(&b).unwrap() - a.inf_q(&b).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn phi_finite_sets() {
        // singleton {(0,0)}: phi = 0 everywhere
        let single = PositiveSet::finite(SsdSpace::product(1), vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(phi(&single, &[3.0, -2.0]).unwrap(), 0.0);
        // {(0,0),(1,1)}: phi(b) = max(0, x + x* - 1); at (0,2) -> 1
        let a = two_point_set();
        assert!((phi(&a, &[0.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_matches_phi_through_iota() {
        for a in [identity_graph(), two_point_set(), abs_graph()] {
            let space = a.space().clone();
            let mut rng = Rng::new(23);
            for _ in 0..100 {
                let b = rng.normal_vec(space.dim());
                let via_theta = theta(&a, &space.iota(&b).unwrap()).unwrap();
                let direct = phi(&a, &b).unwrap();
                if via_theta.is_infinite() || direct.is_infinite() {
                    assert_eq!(via_theta.is_infinite(), direct.is_infinite());
                } else {
                    assert!((via_theta - direct).abs() < 1e-9);
                }
            }
        }
        // product(1), identity graph, theta(u, v) = (u + v)^2 / 4
        let a = identity_graph();
        assert!((theta(&a, &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn theta_star_examples() {
        // finite {(0,0),(1,1)}: hull of q-lift
        let a = two_point_set();
        assert!((theta_star(&a, &[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-10);
        assert!(theta_star(&a, &[1.0, 0.0]).unwrap().is_infinite());
        assert!((theta_star(&a, &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-10);
        // affine: q on the graph, +inf off it
        let id = identity_graph();
        assert!((theta_star(&id, &[2.0, 2.0]).unwrap() - 4.0).abs() < 1e-10);
        assert!(theta_star(&id, &[1.0, 0.0]).unwrap().is_infinite());
        // singleton {a}: q(a) + indicator
        let single = PositiveSet::finite(SsdSpace::product(1), vec![vec![1.0, 2.0]]).unwrap();
        assert!((theta_star(&single, &[1.0, 2.0]).unwrap() - 2.0).abs() < 1e-10);
        assert!(theta_star(&single, &[1.0, 2.1]).unwrap().is_infinite());
    }

    #[test]
    fn phi_conjugate_identity_graph_is_q_plus_indicator() {
        // phi^@ = q + delta_A for the scalar identity graph (computed, not
        // assumed: the iota swap turns the self-conjugate quadratic into the
        // graph-constrained one)
        let a = identity_graph();
        let space = a.space().clone();
        for (b, want) in [
            (vec![1.0, 1.0], 1.0),
            (vec![-0.5, -0.5], 0.25),
            (vec![0.0, 0.0], 0.0),
        ] {
            let got = phi_conjugate(&a, &space.iota(&b).unwrap()).unwrap();
            assert!(
                (got - want).abs() < 1e-9,
                "phi^@({b:?}) = {got}, want {want}"
            );
        }
        assert!(phi_conjugate(&a, &space.iota(&[1.0, 0.0]).unwrap())
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn conjugate_cross_validation_finite() {
        // phi^@ (conjugate hull-LP route) = theta_star (hull-LP route) and
        // (theta_star)^* (epigraph LP) = theta (finite max) on samples
        let a = two_point_set();
        let space = a.space().clone();
        let mut rng = Rng::new(37);
        for _ in 0..150 {
            let b = rng.normal_vec(2);
            let lhs = phi_conjugate(&a, &space.iota(&b).unwrap()).unwrap();
            let rhs = theta_star(&a, &b).unwrap();
            if lhs.is_finite() || rhs.is_finite() {
                assert!(
                    (lhs - rhs).abs() < 1e-8 || (lhs.is_infinite() && rhs.is_infinite()),
                    "phi^@ {lhs} vs theta_star {rhs} at {b:?}"
                );
            }
            let y = rng.normal_vec(2);
            let l = theta_star_conjugate(&a, &y).unwrap();
            let t = theta(&a, &y).unwrap();
            assert!((l - t).abs() < 1e-8, "(theta_star)* {l} vs theta {t}");
        }
    }

    #[test]
    fn subdiff_phi_and_theta_star() {
        // A = graph d|.|: phi(x, x*) = |x| for |x*| <= 1, +inf beyond;
        // theta_star coincides here
        let a = abs_graph();
        assert!((phi(&a, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-9);
        assert!((phi(&a, &[-2.0, 0.5]).unwrap() - 2.0).abs() < 1e-9);
        assert!(phi(&a, &[0.0, 1.5]).unwrap().is_infinite());
        assert!((theta_star(&a, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-9);
        assert!(theta_star(&a, &[0.0, 2.0]).unwrap().is_infinite());
        // equal on the graph to q
        assert!((theta_star(&a, &[2.0, 1.0]).unwrap() - 2.0).abs() < 1e-9);
        // (theta_star)^* = theta on samples
        let mut rng = Rng::new(41);
        for _ in 0..100 {
            let y = rng.normal_vec(2);
            let l = theta_star_conjugate(&a, &y).unwrap();
            let t = theta(&a, &y).unwrap();
            if l.is_finite() || t.is_finite() {
                assert!(
                    (l - t).abs() < 1e-8 || (l.is_infinite() && t.is_infinite()),
                    "{l} vs {t} at {y:?}"
                );
            }
        }
    }

    #[test]
    fn representative_chain_pointwise() {
        // theta_star >= phi^@ >= max(phi, q) everywhere sampled, all three
        // equal q on the set, and their coincidence sets with q collapse
        // onto A for maximal instances
        for a in [identity_graph(), abs_graph()] {
            let space = a.space().clone();
            let mut rng = Rng::new(61);
            for _ in 0..300 {
                let b = probe_point(&a, &mut rng);
                let ts = theta_star(&a, &b).unwrap();
                let phat = phi_conjugate(&a, &space.iota(&b).unwrap()).unwrap();
                let ph = phi(&a, &b).unwrap();
                let qb = space.q(&b).unwrap();
                let ge = |x: f64, y: f64| x >= y - 1e-9 || x.is_infinite() && x > 0.0;
                assert!(ge(ts, phat), "theta_star {ts} < phi^@ {phat} at {b:?}");
                assert!(ge(phat, ph.max(qb)), "phi^@ {phat} < max(phi, q) at {b:?}");
                assert!(ge(ph, qb), "phi {ph} < q {qb} at {b:?} (maximal set)");
                for v in [ts, phat, ph] {
                    if v.is_finite() && (v - qb).abs() <= 1e-9 {
                        assert!(a.distance(&b).unwrap() <= 1e-5, "{v} = q off A at {b:?}");
                    }
                }
            }
            for _ in 0..100 {
                let on_a = a.sample_point(&mut rng);
                let qa = space.q(&on_a).unwrap();
                assert!((theta_star(&a, &on_a).unwrap() - qa).abs() <= 1e-9);
                assert!(
                    (phi_conjugate(&a, &space.iota(&on_a).unwrap()).unwrap() - qa).abs() <= 1e-9
                );
                assert!((phi(&a, &on_a).unwrap() - qa).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn cross_validation_reports() {
        for a in [identity_graph(), two_point_set(), abs_graph()] {
            assert!(theta_phi_report(&a, 500, 51).unwrap().passed());
            assert!(phi_forms_report(&a, 300, 52).unwrap().passed());
            assert!(fitz_cross_report(&a, 200, 53).unwrap().passed());
        }
        let singular = PositiveSet::affine_graph(
            Mat::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap(),
            vec![0.0, 0.0],
        )
        .unwrap();
        assert!(theta_phi_report(&singular, 300, 54).unwrap().passed());
        assert!(phi_forms_report(&singular, 300, 55).unwrap().passed());
        assert!(fitz_cross_report(&singular, 150, 56).unwrap().passed());
    }

    #[test]
    fn repr_reports_identity_graph() {
        let a = identity_graph();
        // h = (x + x*)^2/4 = phi: in H(A)
        let h = ConvexFn::phi_of(&a);
        assert!(repr_membership_report(&a, &h, 300, 7).unwrap().passed());
        // h = (x^2 + x*^2)/2: in H(A) since h - q = (x - x*)^2 / 2
        let h2 = ConvexFn::quad_affine(
            a.space().clone(),
            crate::convex::QuadAffine::new(Mat::identity(2), vec![0.0, 0.0], 0.0, None).unwrap(),
        )
        .unwrap();
        assert!(repr_membership_report(&a, &h2, 300, 7).unwrap().passed());
        // h = 0 fails at (1,1)
        let h0 = ConvexFn::max_affine(a.space().clone(), vec![(vec![0.0, 0.0], 0.0)]).unwrap();
        let r = repr_membership_report(&a, &h0, 300, 7).unwrap();
        assert!(!r.passed());
        // sandwich for h2
        assert!(sandwich_report(&a, &h2, 300, 7).unwrap().passed());
        // h^@ membership for phi and for q + delta_A
        assert!(h_at_membership_report(&a, &h, 200, 7).unwrap().passed());
        let qd = ConvexFn::quad_on_graph(Mat::identity(1), vec![0.0]).unwrap();
        assert!(h_at_membership_report(&a, &qd, 200, 7).unwrap().passed());
    }
}
