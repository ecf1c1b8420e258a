//! Property tests for the algebraic invariants of each module.

use g2dt::ddt::{cartan_solutions, ddt_residual, ddt_residual_decomposed, relative_residual};
use g2dt::dhym::{radius_angle, random_point, HermitianPoint};
use g2dt::exterior::{binomial, parity};
use g2dt::g2::{metric_from_three_form, project2, standard_g2};
use g2dt::sampling::{near_identity, random_g2_element, random_metric, random_unitary, sample_rng};
use g2dt::{KForm, LinearMap};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn form(dim: usize, grade: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec(-3.0f64..3.0, binomial(dim, grade)).prop_map(move |c| KForm::from_coeffs(dim, grade, c))
}

fn form_any_grade(dim: usize) -> impl Strategy<Value = KForm> {
    (0..=dim).prop_flat_map(move |k| form(dim, k))
}

fn matrix(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v))
}

fn close(a: &KForm, b: &KForm, rel: f64) -> bool {
    (a - b).coeff_norm() <= rel * a.coeff_norm().max(b.coeff_norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_graded_commutative(a in form_any_grade(7), b in form_any_grade(7)) {
        let sign = parity(a.grade() * b.grade());
        prop_assert!(close(&a.wedge(&b), &(b.wedge(&a) * sign), 1e-12));
    }

    #[test]
    fn wedge_associative(a in form(7, 1), b in form(7, 2), c in form(7, 3)) {
        prop_assert!(close(&a.wedge(&b).wedge(&c), &a.wedge(&b.wedge(&c)), 1e-12));
    }

    #[test]
    fn odd_forms_square_to_zero(a in form(7, 3)) {
        prop_assert!(a.wedge(&a).max_abs() < 1e-12);
    }

    #[test]
    fn pullback_is_contravariant(l in matrix(6), m in matrix(6), a in form_any_grade(6)) {
        let (l, m) = (LinearMap::new(l), LinearMap::new(m));
        let lhs = l.compose(&m).pullback(&a);
        let rhs = m.pullback(&l.pullback(&a));
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn pullback_respects_wedge(l in matrix(7), a in form(7, 2), b in form(7, 3)) {
        let l = LinearMap::new(l);
        prop_assert!(close(&l.pullback(&a.wedge(&b)), &l.pullback(&a).wedge(&l.pullback(&b)), 1e-10));
    }

    #[test]
    fn hodge_star_identities(seed in any::<u64>(), dim in 6usize..=8, k in 0usize..=8) {
        let k = k.min(dim);
        let mut rng = sample_rng(seed, "prop-hodge", 0);
        let m = random_metric(&mut rng, dim);
        let a = g2dt::sampling::random_form(&mut rng, dim, k, 1.0);
        let b = g2dt::sampling::random_form(&mut rng, dim, k, 1.0);
        prop_assert!(close(&m.hodge(&m.hodge(&a)), &(&a * parity(k * (dim - k))), 1e-10));
        let (lhs, rhs) = (m.inner(&m.hodge(&a), &m.hodge(&b)), m.inner(&a, &b));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (m.norm(&a) * m.norm(&b)).max(1.0));
        prop_assert!(close(&m.hodge_inverse(&m.hodge(&a)), &a, 1e-10));
    }

    #[test]
    fn sharp_of_two_form_is_metric_skew(seed in any::<u64>(), f in form(7, 2)) {
        let m = random_metric(&mut sample_rng(seed, "prop-sharp", 0), 7);
        let x = m.sharp2(&f);
        let gx = m.gram() * x.matrix();
        prop_assert!((&gx + gx.transpose()).amax() < 1e-10 * gx.amax().max(1.0));
    }

    #[test]
    fn metric_of_moved_structure(seed in any::<u64>(), eps in 0.0f64..0.3) {
        let g = standard_g2();
        let l = near_identity(&mut sample_rng(seed, "prop-equivariance", 0), 7, eps);
        let moved = metric_from_three_form(&l.pullback(g.phi())).unwrap();
        let expected = l.matrix().transpose() * l.matrix();
        prop_assert!((moved.gram() - &expected).amax() < 1e-10);
    }

    #[test]
    fn two_form_projections(f in form(7, 2)) {
        let g = standard_g2();
        let split = project2(&f, g);
        let f7 = split.f7(g);
        // Eigenvalues 2 and -1 of the operator a -> *(phi ^ a).
        prop_assert!(close(&g.hodge(&g.phi().wedge(&f7)), &(&f7 * 2.0), 1e-10));
        prop_assert!(close(&g.hodge(&g.phi().wedge(&split.f14)), &(&split.f14 * -1.0), 1e-10));
        prop_assert!(g.metric().inner(&f7, &split.f14).abs() < 1e-10 * f.coeff_norm().powi(2).max(1.0));
        let p = g.proj2_7();
        prop_assert!((p * p - p).amax() < 1e-12);
    }

    #[test]
    fn residual_decompositions_agree(f in form(7, 2)) {
        let g = standard_g2();
        prop_assert!(close(&ddt_residual(&f, g), &ddt_residual_decomposed(&f, g), 1e-10));
    }

    #[test]
    fn rotated_solutions_stay_solutions(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let g = standard_g2();
        let mut rng = sample_rng(seed, "prop-rotation", 0);
        let l = random_g2_element(&mut rng, g, 0.7).unwrap_or_else(|| LinearMap::identity(7));
        for f in cartan_solutions([a, b, -a - b], g).unwrap() {
            prop_assert!(relative_residual(&l.pullback(&f), g) < 1e-9);
        }
    }

    #[test]
    fn normal_form_is_unitary_invariant(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sample_rng(seed, "prop-normal", 0);
        let pt = random_point(&mut rng, n);
        let lambdas = pt.normal_form().unwrap().lambdas.clone();
        let moved = HermitianPoint::from_eigenvalues(&lambdas, &random_unitary(&mut rng, n)).unwrap();
        let again = &moved.normal_form().unwrap().lambdas;
        for (x, y) in lambdas.iter().zip(again) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!(radius_angle(&pt).unwrap().r >= 1.0);
    }
}
