//! Enlargements of a q-positive set A: multifunctions E with A inside every
//! E(eps), represented intensionally by Lambda_E = lambda_E + q (a ConvexFn),
//! with membership b in E(eps) iff lambda_E(b) <= eps. The extremal closed
//! enlargements are E^A (Lambda = phi) and the closure of the smallest one
//! (Lambda = theta_star); every representative function h gives one via
//! A_h(eps) = {b : h(b) <= eps + q(b)}, and the eps-subdifferential of a
//! max-affine f is the member with Lambda(x, x*) = f(x) + f*(x*).

use crate::convex::{ConvexFn, MaxAffine};
use crate::error::{Error, Result};
use crate::fitz;
use crate::linalg;
use crate::report::{CheckReport, ReportBuilder};
use crate::rng::Rng;
use crate::sets::PositiveSet;
use crate::space::SsdSpace;

pub const LEVEL_TOL: f64 = 1e-9;
pub const MEMBER_SLACK: f64 = 1e-10;
/// lambda <= this counts as "level zero" for the E(0) = A checks.
pub const ZERO_LEVEL: f64 = 1e-9;
/// Points at level zero must be this close to A.
pub const ZERO_DIST: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// E^A, the biggest enlargement: Lambda = phi.
    Biggest,
    /// Closure of the smallest enlargement: Lambda = theta_star.
    SmallestClosed,
    /// A_h for a representative function h.
    FromRepr,
    /// Graph of the eps-subdifferential of a max-affine function.
    EpsSubdiff,
    /// Unvalidated Lambda (negative controls).
    Custom,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Biggest => "ea",
            Provenance::SmallestClosed => "ebar",
            Provenance::FromRepr => "from_repr",
            Provenance::EpsSubdiff => "eps_subdiff",
            Provenance::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enlargement {
    set: PositiveSet,
    big_lambda: ConvexFn,
    provenance: Provenance,
}

impl Enlargement {
    /// E^A(eps) = {b : q(b - c) >= -eps for all c in A}; equivalently
    /// Lambda = phi. Requires A maximal by construction; use the unchecked
    /// constructor to study non-maximal finite sets.
    pub fn biggest(a: &PositiveSet) -> Result<Self> {
        if !a.maximal_by_theory() {
            return Err(Error::contract(
                "E^A as a member of the enlargement family needs maximal A; \
                 use biggest_unchecked to override",
            ));
        }
        Ok(Self::biggest_unchecked(a))
    }

    pub fn biggest_unchecked(a: &PositiveSet) -> Self {
        Enlargement {
            set: a.clone(),
            big_lambda: ConvexFn::phi_of(a),
            provenance: Provenance::Biggest,
        }
    }

    /// Closure of the smallest enlargement: Lambda = theta_star.
    pub fn smallest_closed(a: &PositiveSet) -> Result<Self> {
        if !a.maximal_by_theory() {
            return Err(Error::contract(
                "the smallest closed enlargement needs maximal A; \
                 use smallest_closed_unchecked to override",
            ));
        }
        Ok(Self::smallest_closed_unchecked(a))
    }

    pub fn smallest_closed_unchecked(a: &PositiveSet) -> Self {
        Enlargement {
            set: a.clone(),
            big_lambda: ConvexFn::theta_star_of(a),
            provenance: Provenance::SmallestClosed,
        }
    }

    /// A_h for h in H(A); membership of h in H(A) is validated on a fixed
    /// seeded sample and a violation is a contract error.
    pub fn from_repr(a: &PositiveSet, h: ConvexFn) -> Result<Self> {
        let report = fitz::repr_membership_report(a, &h, 400, 0x5EED)?;
        if !report.passed() {
            return Err(Error::contract(format!(
                "h is not a representative function of A (worst residual {:.3e})",
                report.worst_residual
            )));
        }
        Ok(Self::from_repr_unchecked(a, h))
    }

    pub fn from_repr_unchecked(a: &PositiveSet, h: ConvexFn) -> Self {
        Enlargement {
            set: a.clone(),
            big_lambda: h,
            provenance: Provenance::FromRepr,
        }
    }

    /// Graph of the eps-subdifferential of f: A = graph(partial f),
    /// Lambda(x, x*) = f(x) + f*(x*), lambda = the Young-Fenchel gap.
    pub fn eps_subdiff(f: MaxAffine) -> Result<Self> {
        let set = PositiveSet::subdiff_graph(f.clone())?;
        Ok(Enlargement {
            set,
            big_lambda: ConvexFn::fenchel_sum(f),
            provenance: Provenance::EpsSubdiff,
        })
    }

    /// Arbitrary lambda >= 0 with lambda = 0 on A, unvalidated: the crooked
    /// enlargements used as negative controls. Lambda = lambda + q.
    pub fn from_lambda_unchecked(a: &PositiveSet, lambda: ConvexFn) -> Self {
        Enlargement {
            set: a.clone(),
            big_lambda: ConvexFn::plus_q(lambda),
            provenance: Provenance::Custom,
        }
    }

    pub fn space(&self) -> &SsdSpace {
        self.set.space()
    }

    pub fn set(&self) -> &PositiveSet {
        &self.set
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn big_lambda(&self) -> &ConvexFn {
        &self.big_lambda
    }

    pub fn big_lambda_at(&self, b: &[f64]) -> Result<f64> {
        self.big_lambda.eval(b)
    }

    /// lambda_E(b) = inf{eps >= 0 : b in E(eps)} = max(0, Lambda(b) - q(b)).
    pub fn lambda(&self, b: &[f64]) -> Result<f64> {
        let v = self.big_lambda.eval(b)?;
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok((v - self.space().q_unchecked(b)).max(0.0))
    }

    /// b in E(eps) iff Lambda(b) <= eps + q(b) (+1e-10 slack).
    pub fn membership(&self, eps: f64, b: &[f64]) -> Result<bool> {
        if eps < 0.0 {
            return Err(Error::input("eps must be nonnegative"));
        }
        let v = self.big_lambda.eval(b)?;
        Ok(v <= eps + self.space().q_unchecked(b) + MEMBER_SLACK)
    }

    /// lambda through the sublevel representation: bisection on the
    /// membership predicate. Used to exercise the E <-> Lambda roundtrip
    /// without reading Lambda directly.
    pub fn lambda_by_bisection(&self, b: &[f64]) -> Result<f64> {
        if self.membership(0.0, b)? {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        while !self.membership(hi, b)? {
            hi *= 4.0;
            if hi > 1e12 {
                return Ok(f64::INFINITY);
            }
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.membership(mid, b)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// A member pair (b, eps) with b in E(eps): a Gaussian blur of an anchor
    /// when its level is finite, the anchor itself otherwise; eps sits at the
    /// exact level a quarter of the time and above it otherwise.
    pub fn sample_member(
        &self,
        rng: &mut Rng,
        noise: f64,
        eps_pad: f64,
    ) -> Result<(Vec<f64>, f64)> {
        let anchor = self.set.sample_point(rng);
        let cand: Vec<f64> = anchor.iter().map(|v| v + noise * rng.normal()).collect();
        let (b, level) = match self.lambda(&cand)? {
            l if l.is_finite() => (cand, l),
            _ => {
                let l = self.lambda(&anchor)?;
                (anchor, l)
            }
        };
        let eps = if rng.uniform() < 0.25 {
            level
        } else {
            level + eps_pad * rng.uniform()
        };
        Ok((b, eps))
    }
}

/// Psi(eps, b) = (eps + q(b), b): the shift identifying epi(lambda) with
/// epi(Lambda).
pub fn psi(space: &SsdSpace, eps: f64, b: &[f64]) -> Result<(f64, Vec<f64>)> {
    Ok((eps + space.q(b)?, b.to_vec()))
}

pub fn psi_inv(space: &SsdSpace, mu: f64, b: &[f64]) -> Result<(f64, Vec<f64>)> {
    Ok((mu - space.q(b)?, b.to_vec()))
}

/// Two-point transportation formula: for members b1 in E(eps1), b2 in
/// E(eps2) and weights (a, 1-a), eps := a eps1 + (1-a) eps2 +
/// a (1-a) q(b1 - b2) must be >= 0 with the combination in E(eps).
pub fn transportation_report_2pt(e: &Enlargement, trials: u64, seed: u64) -> Result<CheckReport> {
    let mut rb = ReportBuilder::new("transportation_2pt", e.provenance.name(), seed, LEVEL_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..trials {
        let (b1, e1) = e.sample_member(&mut rng, 0.75, 0.5)?;
        let (b2, e2) = e.sample_member(&mut rng, 0.75, 0.5)?;
        let alpha = rng.uniform();
        let q12 = e.space().q_unchecked(&linalg::sub(&b1, &b2));
        let eps = alpha * e1 + (1.0 - alpha) * e2 + alpha * (1.0 - alpha) * q12;
        rb.record(-eps);
        let mid: Vec<f64> = b1
            .iter()
            .zip(&b2)
            .map(|(x, y)| alpha * x + (1.0 - alpha) * y)
            .collect();
        rb.record_lower_bound(eps, e.lambda(&mid)?);
    }
    Ok(rb.finish())
}

/// n-point transportation formula plus the quadratic mean identity
/// sum a_i q(b_i - bbar) = sum a_i q(b_i) - q(bbar) used in its proof.
pub fn transportation_report_npt(
    e: &Enlargement,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<CheckReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::input("n-point transportation supports 2 <= n <= 8"));
    }
    let mut rb = ReportBuilder::new("transportation_npt", e.provenance.name(), seed, LEVEL_TOL);
    let mut rng = Rng::new(seed);
    let space = e.space().clone();
    for _ in 0..trials {
        let members: Vec<(Vec<f64>, f64)> = (0..n)
            .map(|_| e.sample_member(&mut rng, 0.75, 0.5))
            .collect::<Result<_>>()?;
        let alpha = rng.simplex(n);
        let dim = space.dim();
        let mut bbar = vec![0.0; dim];
        for ((b, _), &a) in members.iter().zip(&alpha) {
            linalg::axpy(&mut bbar, a, b);
        }
        let spread: f64 = members
            .iter()
            .zip(&alpha)
            .map(|((b, _), &a)| a * space.q_unchecked(&linalg::sub(b, &bbar)))
            .sum();
        let eps: f64 = members
            .iter()
            .zip(&alpha)
            .map(|((_, ei), &a)| a * ei)
            .sum::<f64>()
            + spread;
        rb.record(-eps);
        rb.record_lower_bound(eps, e.lambda(&bbar)?);
        // proof identity, at 1e-10 relative
        let rhs: f64 = members
            .iter()
            .zip(&alpha)
            .map(|((b, _), &a)| a * space.q_unchecked(b))
            .sum::<f64>()
            - space.q_unchecked(&bbar);
        let mag = 1.0 + spread.abs() + rhs.abs();
        rb.record_scaled((spread - rhs).abs() / mag, 1e-10);
    }
    Ok(rb.finish())
}

/// Midpoint convexity of Lambda on sampled finite pairs: the convexity of
/// Psi(G(E)) in level-function form.
pub fn psi_convexity_report(e: &Enlargement, trials: u64, seed: u64) -> Result<CheckReport> {
    let mut rb = ReportBuilder::new("psi_convexity", e.provenance.name(), seed, LEVEL_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..trials {
        let (b, _) = e.sample_member(&mut rng, 1.0, 0.0)?;
        let (c, _) = e.sample_member(&mut rng, 1.0, 0.0)?;
        let vb = e.big_lambda_at(&b)?;
        let vc = e.big_lambda_at(&c)?;
        if !(vb.is_finite() && vc.is_finite()) {
            rb.record(0.0);
            continue;
        }
        let mid: Vec<f64> = b.iter().zip(&c).map(|(x, y)| 0.5 * (x + y)).collect();
        rb.record_lower_bound(0.5 * (vb + vc), e.big_lambda_at(&mid)?);
    }
    Ok(rb.finish())
}

/// Bijection roundtrip: Lambda of A_h, reconstructed through sublevel
/// bisection, equals h at samples; and points where h = q lie on A
/// (P(h) = A).
pub fn roundtrip_report(
    a: &PositiveSet,
    h: &ConvexFn,
    e: &Enlargement,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let space = a.space().clone();
    let mut rb = ReportBuilder::new("roundtrip", e.provenance.name(), seed, LEVEL_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = fitz::probe_point(a, &mut rng);
        let hv = h.eval(&b)?;
        let lam = e.lambda_by_bisection(&b)?;
        if hv.is_finite() && lam.is_finite() {
            rb.record((lam + space.q_unchecked(&b) - hv).abs());
        } else if hv.is_finite() != lam.is_finite() {
            // one side finite, the other not: only acceptable when h sits
            // within membership slack of the finite side's level
            rb.record(f64::INFINITY);
        } else {
            rb.record(0.0);
        }
        // P(h) = A at the sample
        if hv.is_finite() && (hv - space.q_unchecked(&b)).abs() <= LEVEL_TOL {
            rb.record_scaled(a.distance(&b)?, ZERO_DIST);
        }
    }
    Ok(rb.finish())
}

/// Graph ordering in level form: lambda_{E^A} <= lambda_E <= lambda_{Ebar_A}.
pub fn ordering_report(
    a: &PositiveSet,
    e: &Enlargement,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let biggest = Enlargement::biggest_unchecked(a);
    let smallest = Enlargement::smallest_closed_unchecked(a);
    let mut rb = ReportBuilder::new("ordering", e.provenance.name(), seed, LEVEL_TOL);
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let b = fitz::probe_point(a, &mut rng);
        let lam = e.lambda(&b)?;
        rb.record_lower_bound(lam, biggest.lambda(&b)?);
        rb.record_lower_bound(smallest.lambda(&b)?, lam);
    }
    Ok(rb.finish())
}

/// E(0) = intersection of E(eps) over eps > 0 = A: zero-level points lie on
/// A, A-points have level zero, and the eps -> 0+ limit is tested at
/// eps = 1e-9.
pub fn e_zero_report(
    a: &PositiveSet,
    e: &Enlargement,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let mut rb = ReportBuilder::new("e_zero", e.provenance.name(), seed, LEVEL_TOL);
    let mut rng = Rng::new(seed);
    let dim = a.space().dim();
    let mut probes: Vec<Vec<f64>> = Vec::new();
    for _ in 0..samples {
        probes.push(fitz::probe_point(a, &mut rng));
    }
    // coarse lattice over the window where the suite instances live
    let per_axis: usize = match dim {
        1 => 41,
        2 => 21,
        3 => 9,
        4 => 7,
        _ => 3,
    };
    let mut idx = vec![0usize; dim];
    loop {
        let b: Vec<f64> = (0..dim)
            .map(|i| -3.0 + 6.0 * idx[i] as f64 / (per_axis - 1) as f64)
            .collect();
        probes.push(b);
        let mut k = 0;
        while k < dim {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == dim {
            break;
        }
    }
    for b in &probes {
        if e.membership(ZERO_LEVEL, b)? {
            rb.record_scaled(a.distance(b)?, ZERO_DIST);
        } else {
            rb.record(0.0);
        }
    }
    for _ in 0..samples {
        let on_a = a.sample_point(&mut rng);
        rb.record(e.lambda(&on_a)?);
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;

    fn identity_graph() -> PositiveSet {
        PositiveSet::affine_graph(Mat::identity(1), vec![0.0]).unwrap()
    }

    fn abs_fn() -> MaxAffine {
        MaxAffine::new(1, vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]).unwrap()
    }

    fn two_point_set() -> PositiveSet {
        PositiveSet::finite(SsdSpace::product(1), vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn biggest_identity_graph_levels() {
        let e = Enlargement::biggest(&identity_graph()).unwrap();
        // lambda(x, x*) = (x - x*)^2 / 4
        assert!((e.lambda(&[1.0, 0.0]).unwrap() - 0.25).abs() < 1e-10);
        assert!(e.lambda(&[0.7, 0.7]).unwrap().abs() < 1e-10);
        assert!(e.membership(0.25, &[1.0, 0.0]).unwrap());
        assert!(!e.membership(0.2, &[1.0, 0.0]).unwrap());
        assert!(e.membership(0.0, &[2.0, 2.0]).unwrap());
    }

    #[test]
    fn biggest_requires_maximality() {
        assert!(Enlargement::biggest(&two_point_set()).is_err());
        // override: (1,0) is at level 0 without lying on A
        let e = Enlargement::biggest_unchecked(&two_point_set());
        assert!(e.lambda(&[1.0, 0.0]).unwrap().abs() < 1e-12);
        assert!(e.membership(0.0, &[1.0, 0.0]).unwrap());
        assert!(e.set().distance(&[1.0, 0.0]).unwrap() > 0.5);
    }

    #[test]
    fn smallest_closed_levels() {
        let id = identity_graph();
        let e = Enlargement::smallest_closed(&id).unwrap();
        assert!(e.lambda(&[1.5, 1.5]).unwrap().abs() < 1e-10);
        assert!(e.lambda(&[1.0, 0.0]).unwrap().is_infinite());
        assert!(!e.membership(10.0, &[1.0, 0.0]).unwrap());
        // finite two-point set: lambda(1/2, 1/2) = 1/2 - 1/4
        let e = Enlargement::smallest_closed_unchecked(&two_point_set());
        assert!((e.lambda(&[0.5, 0.5]).unwrap() - 0.25).abs() < 1e-10);
    }

    #[test]
    fn from_repr_validates() {
        let id = identity_graph();
        // (x^2 + x*^2)/2 is representative: lambda = (x+x*... (x-x*)^2/2
        let h = ConvexFn::quad_affine(
            id.space().clone(),
            crate::convex::QuadAffine::new(Mat::identity(2), vec![0.0, 0.0], 0.0, None).unwrap(),
        )
        .unwrap();
        let e = Enlargement::from_repr(&id, h).unwrap();
        assert!((e.lambda(&[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-10);
        assert!(e.membership(0.5, &[1.0, 0.0]).unwrap());
        assert!(!e.membership(0.49, &[1.0, 0.0]).unwrap());
        // h = 0 is not representative
        let h0 = ConvexFn::max_affine(id.space().clone(), vec![(vec![0.0, 0.0], 0.0)]).unwrap();
        assert!(Enlargement::from_repr(&id, h0).is_err());
    }

    #[test]
    fn eps_subdiff_levels() {
        let e = Enlargement::eps_subdiff(abs_fn()).unwrap();
        assert!(e.lambda(&[0.0, 0.5]).unwrap().abs() < 1e-12);
        assert!(e.membership(0.0, &[0.0, 0.5]).unwrap());
        assert!((e.lambda(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(e.membership(1.0, &[1.0, 0.0]).unwrap());
        assert!(!e.membership(0.9, &[1.0, 0.0]).unwrap());
    }

    #[test]
    fn psi_roundtrip() {
        let s = SsdSpace::product(1);
        let (mu, b) = psi(&s, 1.0, &[1.0, 2.0]).unwrap();
        assert_eq!(mu, 3.0);
        let (eps, b2) = psi_inv(&s, mu, &b).unwrap();
        assert_eq!(eps, 1.0);
        assert_eq!(b2, vec![1.0, 2.0]);
    }

    #[test]
    fn transportation_tight_pair() {
        // b1 = (1,0), b2 = (0,1) at eps = 1/4 each, alpha = 1/2:
        // eps = 1/4 + (1/4) q((1,-1)) = 1/4 - 1/4 = 0 and the midpoint
        // (1/2, 1/2) has lambda = 0
        let e = Enlargement::biggest(&identity_graph()).unwrap();
        let space = e.space().clone();
        let q12 = space.q(&[1.0, -1.0]).unwrap();
        assert_eq!(q12, -1.0);
        let eps = 0.5 * 0.25 + 0.5 * 0.25 + 0.25 * q12;
        assert_eq!(eps, 0.0);
        assert!(e.lambda(&[0.5, 0.5]).unwrap() <= 1e-12);
    }

    #[test]
    fn transportation_reports_pass_for_family() {
        let id = identity_graph();
        let e = Enlargement::biggest(&id).unwrap();
        assert!(transportation_report_2pt(&e, 400, 3).unwrap().passed());
        let eb = Enlargement::smallest_closed(&id).unwrap();
        assert!(transportation_report_2pt(&eb, 400, 4).unwrap().passed());
        let es = Enlargement::eps_subdiff(abs_fn()).unwrap();
        assert!(transportation_report_2pt(&es, 400, 5).unwrap().passed());
        assert!(transportation_report_npt(&e, 3, 150, 6).unwrap().passed());
        assert!(transportation_report_npt(&es, 5, 150, 7).unwrap().passed());
        assert!(psi_convexity_report(&e, 300, 8).unwrap().passed());
        assert!(psi_convexity_report(&es, 300, 9).unwrap().passed());
    }

    #[test]
    fn corrupted_lambda_fails_both_ways() {
        // lambda = max(0, min(x - x* - 2, 4 - (x - x*))): zero on A but its
        // Lambda is not convex, so both the transportation formula and
        // midpoint convexity must fail
        let id = identity_graph();
        let tent = ConvexFn::clamped_min(
            id.space().clone(),
            vec![(vec![1.0, -1.0], 2.0), (vec![-1.0, 1.0], -4.0)],
        )
        .unwrap();
        let e = Enlargement::from_lambda_unchecked(&id, tent);
        assert!(e.lambda(&[0.0, 0.0]).unwrap().abs() < 1e-12);
        assert!((e.lambda(&[3.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        let t = transportation_report_2pt(&e, 600, 10).unwrap();
        assert!(!t.passed(), "corrupted enlargement passed transportation");
        let c = psi_convexity_report(&e, 600, 11).unwrap();
        assert!(!c.passed(), "corrupted enlargement passed convexity");
    }

    #[test]
    fn roundtrip_and_ordering_and_zero() {
        let id = identity_graph();
        let h = ConvexFn::quad_affine(
            id.space().clone(),
            crate::convex::QuadAffine::new(Mat::identity(2), vec![0.0, 0.0], 0.0, None).unwrap(),
        )
        .unwrap();
        let e = Enlargement::from_repr(&id, h.clone()).unwrap();
        assert!(roundtrip_report(&id, &h, &e, 200, 12).unwrap().passed());
        assert!(ordering_report(&id, &e, 200, 13).unwrap().passed());
        assert!(e_zero_report(&id, &e, 150, 14).unwrap().passed());
        // E^A and Ebar_A have tight bounds
        let ea = Enlargement::biggest(&id).unwrap();
        assert!(ordering_report(&id, &ea, 200, 15).unwrap().passed());
        let es = Enlargement::eps_subdiff(abs_fn()).unwrap();
        let a = es.set().clone();
        assert!(ordering_report(&a, &es, 200, 16).unwrap().passed());
        assert!(e_zero_report(&a, &es, 100, 17).unwrap().passed());
    }

    #[test]
    fn from_repr_of_the_extremes_matches_the_constructors() {
        let id = identity_graph();
        let ea = Enlargement::biggest(&id).unwrap();
        let via_phi = Enlargement::from_repr(&id, ConvexFn::phi_of(&id)).unwrap();
        let eb = Enlargement::smallest_closed(&id).unwrap();
        let via_ts = Enlargement::from_repr(&id, ConvexFn::theta_star_of(&id)).unwrap();
        let mut rng = Rng::new(29);
        for _ in 0..100 {
            let b = rng.normal_vec(2);
            assert_eq!(ea.lambda(&b).unwrap(), via_phi.lambda(&b).unwrap());
            let l1 = eb.lambda(&b).unwrap();
            let l2 = via_ts.lambda(&b).unwrap();
            assert!(l1 == l2 || (l1.is_infinite() && l2.is_infinite()));
        }
    }

    #[test]
    fn lambda_bisection_matches_direct() {
        let id = identity_graph();
        let e = Enlargement::biggest(&id).unwrap();
        let mut rng = Rng::new(19);
        for _ in 0..50 {
            let b = rng.normal_vec(2);
            let direct = e.lambda(&b).unwrap();
            let bis = e.lambda_by_bisection(&b).unwrap();
            assert!((direct - bis).abs() < 1e-9, "{direct} vs {bis}");
        }
    }
}
