//! Property tests for the algebraic invariants that hold on all inputs:
//! bilinear-form symmetry, the quadratic calculus identity, iota adjointness,
//! Young-Fenchel, hull domination, level shifts, and solver certificates.

use proptest::prelude::*;

use qpos::convex::{subdiff_membership, ConvexFn, MaxAffine};
use qpos::enlarge::{psi, psi_inv, Enlargement};
use qpos::linalg::{dot, Mat};
use qpos::lp::{lp_solve, LpProblem, LpStatus};
use qpos::sets::PositiveSet;
use qpos::space::SsdSpace;

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n)
}

fn spaces() -> Vec<SsdSpace> {
    vec![
        SsdSpace::hilbert(2),
        SsdSpace::anti_hilbert(3),
        SsdSpace::r3_example(),
        SsdSpace::product(1),
        SsdSpace::product(2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_symmetric(b in vec_strategy(4), c in vec_strategy(4)) {
        for space in spaces() {
            let n = space.dim();
            let bb = &b[..n];
            let cc = &c[..n];
            let lhs = space.bracket(bb, cc).unwrap();
            let rhs = space.bracket(cc, bb).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn quadratic_calculus_identity(
        alpha in -4.0f64..4.0,
        gamma in -4.0f64..4.0,
        b in vec_strategy(4),
        c in vec_strategy(4),
    ) {
        for space in spaces() {
            let n = space.dim();
            let resid = space.calculus_residual(alpha, gamma, &b[..n], &c[..n]).unwrap();
            let mag = 1.0
                + space.q(&b[..n]).unwrap().abs()
                + space.q(&c[..n]).unwrap().abs()
                + space.bracket(&b[..n], &c[..n]).unwrap().abs();
            prop_assert!(resid.abs() <= 1e-9 * mag);
        }
    }

    #[test]
    fn iota_realizes_the_pairing(b in vec_strategy(4), c in vec_strategy(4)) {
        for space in spaces() {
            let n = space.dim();
            let ic = space.iota(&c[..n]).unwrap();
            let lhs = dot(&b[..n], &ic);
            let rhs = space.bracket(&b[..n], &c[..n]).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn psi_inverts(eps in 0.0f64..10.0, b in vec_strategy(2)) {
        let space = SsdSpace::product(1);
        let (mu, point) = psi(&space, eps, &b).unwrap();
        let (back, point2) = psi_inv(&space, mu, &point).unwrap();
        prop_assert!((back - eps).abs() <= 1e-12 * (1.0 + eps));
        prop_assert_eq!(point2, b);
    }

    #[test]
    fn young_fenchel_gap_is_nonnegative(
        pieces in prop::collection::vec((vec_strategy(1), -2.0f64..2.0), 1..6),
        x in -4.0f64..4.0,
        xstar in -4.0f64..4.0,
    ) {
        let f = MaxAffine::new(1, pieces).unwrap();
        let fs = f.conjugate(&[xstar]).unwrap();
        if fs.is_finite() {
            let gap = f.eval(&[x]) + fs - x * xstar;
            prop_assert!(gap >= -1e-10 * (1.0 + gap.abs()));
            // the gap is exactly the eps-subdifferential threshold
            prop_assert!(subdiff_membership(&f, &[x], &[xstar], gap.max(0.0) + 1e-9).unwrap());
            if gap > 1e-6 {
                prop_assert!(!subdiff_membership(&f, &[x], &[xstar], gap - 1e-6).unwrap());
            }
        }
    }

    #[test]
    fn hull_never_exceeds_generators(
        points in prop::collection::vec((vec_strategy(2), -3.0f64..3.0), 1..6),
    ) {
        let space = SsdSpace::product(1);
        let f = ConvexFn::polyhedral_hull(space, points.clone()).unwrap();
        for (a, v) in &points {
            let val = f.eval(a).unwrap();
            prop_assert!(val <= v + 1e-8, "hull({a:?}) = {val} > generator {v}");
        }
    }

    #[test]
    fn affine_inf_q_is_a_lower_bound_on_graph_points(
        m00 in 0.0f64..3.0,
        skew in -2.0f64..2.0,
        p in vec_strategy(2),
        b in vec_strategy(4),
        y in vec_strategy(2),
    ) {
        // M = diag-ish PSD symmetric part plus a skew part
        let m = Mat::from_rows(vec![vec![m00, skew], vec![-skew, 1.0]]).unwrap();
        let a = PositiveSet::affine_graph(m.clone(), p.clone()).unwrap();
        let space = a.space().clone();
        let inf = a.inf_q(&b).unwrap();
        // any explicit graph point gives an upper bound for the infimum
        let mut c0 = y.clone();
        c0.extend(qpos::linalg::add(&m.matvec(&y), &p));
        let diff: Vec<f64> = b.iter().zip(&c0).map(|(u, v)| u - v).collect();
        let ub = space.q(&diff).unwrap();
        prop_assert!(inf <= ub + 1e-9 * (1.0 + ub.abs()));
    }

    #[test]
    fn lambda_is_nonnegative_and_zero_on_the_set(
        mdiag in 0.0f64..3.0,
        b in vec_strategy(2),
        t in -3.0f64..3.0,
    ) {
        let m = Mat::from_rows(vec![vec![mdiag]]).unwrap();
        let a = PositiveSet::affine_graph(m.clone(), vec![0.0]).unwrap();
        for e in [Enlargement::biggest(&a).unwrap(), Enlargement::smallest_closed(&a).unwrap()] {
            let lam = e.lambda(&b).unwrap();
            prop_assert!(lam >= -1e-10);
            let on_a = [t, mdiag * t];
            let lam0 = e.lambda(&on_a).unwrap();
            prop_assert!(lam0.abs() <= 1e-9 * (1.0 + on_a.iter().map(|v| v*v).sum::<f64>()));
        }
    }

    #[test]
    fn lp_certificates_on_random_feasible_problems(
        coeffs in prop::collection::vec(-2.0f64..2.0, 12),
        x0 in prop::collection::vec(0.0f64..2.0, 4),
        cost in prop::collection::vec(-1.0f64..3.0, 4),
    ) {
        let eq = Mat::from_fn(3, 4, |i, j| coeffs[i * 4 + j]);
        let rhs = eq.matvec(&x0);
        let sol = lp_solve(&LpProblem { cost, eq, rhs: rhs.clone() }).unwrap();
        prop_assert_ne!(sol.status, LpStatus::Infeasible);
        if sol.status == LpStatus::Optimal {
            prop_assert!(sol.x.iter().all(|&v| v >= -1e-10));
            let scale = 1.0 + rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            prop_assert!(sol.primal_residual <= 1e-9 * scale);
            prop_assert!(sol.dual_residual <= 1e-8);
        }
    }

    #[test]
    fn members_of_level_zero_are_pairwise_positive(
        t1 in -2.0f64..2.0,
        t2 in -2.0f64..2.0,
    ) {
        // E(0) = A for the family: pairwise q >= 0 among zero-level points
        let a = PositiveSet::affine_graph(Mat::identity(1), vec![0.0]).unwrap();
        let e = Enlargement::biggest(&a).unwrap();
        let b1 = [t1, t1];
        let b2 = [t2, t2];
        prop_assert!(e.membership(0.0, &b1).unwrap());
        prop_assert!(e.membership(0.0, &b2).unwrap());
        let diff = [b1[0] - b2[0], b1[1] - b2[1]];
        prop_assert!(e.space().q(&diff).unwrap() >= -1e-9);
    }
}

#[test]
fn evaluation_is_bitwise_deterministic() {
    // repeated evaluation of LP-backed values must agree bit for bit
    let space = SsdSpace::product(1);
    let f = ConvexFn::polyhedral_hull(
        space,
        vec![
            (vec![0.0, 0.0], 0.0),
            (vec![1.0, 1.0], 1.0),
            (vec![-1.0, 0.5], 0.7),
        ],
    )
    .unwrap();
    let pts = [[0.3, 0.4], [0.5, 0.5], [-0.2, 0.3], [2.0, 2.0]];
    for p in &pts {
        let a = f.eval(p).unwrap();
        let b = f.eval(p).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
