//! The pointwise deformed Donaldson–Thomas equation on `R^7`.
//!
//! Curvatures are stored as real 2-forms `F` (the physical curvature is
//! `i F`), so the equation reads `-F^3/6 + F ^ *phi = 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{CForm, KForm};
use crate::g2::{metric_from_three_form, project2, G2Data};
use crate::linalg::numerical_rank;
use crate::Tolerance;

/// `-F^3/6 + F ^ *phi`.
pub fn ddt_residual(f: &KForm, g: &G2Data) -> KForm {
    check_two_form(f);
    &f.wedge(g.star_phi()) - &(f.wedge_power(3) * (1.0 / 6.0))
}

/// The residual rewritten through `F = i(u)phi + F14`:
///
/// `(3 - |u|^2 + |F14|^2/2) *u^flat - F14^3/6 - *phi ^ u^flat ^ i(u)F14 - phi ^ F14 ^ i(u)F14`.
///
/// Equal to [`ddt_residual`] for every 2-form.
pub fn ddt_residual_decomposed(f: &KForm, g: &G2Data) -> KForm {
    check_two_form(f);
    let m = g.metric();
    let split = project2(f, g);
    let u = &split.u;
    let f14 = &split.f14;
    let uflat = m.flat(u);
    let iu_f14 = f14.interior(u);
    let coeff = 3.0 - m.inner(&uflat, &uflat) + 0.5 * m.inner(f14, f14);
    let mut out = m.hodge(&uflat) * coeff;
    out = out - f14.wedge_power(3) * (1.0 / 6.0);
    out = out - g.star_phi().wedge(&uflat).wedge(&iu_f14);
    out - g.phi().wedge(f14).wedge(&iu_f14)
}

fn check_two_form(f: &KForm) {
    assert_eq!((f.dim(), f.grade()), (7, 2), "expected a 2-form on R^7");
}

/// Magnitude against which the residual of `f` is compared: the larger of
/// the two terms of the equation.
fn residual_scale(f: &KForm, g: &G2Data) -> f64 {
    let m = g.metric();
    (m.norm(&f.wedge_power(3)) / 6.0).max(m.norm(&f.wedge(g.star_phi())))
}

/// Normalised residual of the equation at `f`.
pub fn relative_residual(f: &KForm, g: &G2Data) -> f64 {
    let r = g.metric().norm(&ddt_residual(f, g));
    Tolerance::default().residual(r, residual_scale(f, g))
}

/// Whether `f` solves the equation to relative tolerance `tol`.
pub fn is_solution(f: &KForm, g: &G2Data, tol: &Tolerance) -> bool {
    let r = g.metric().norm(&ddt_residual(f, g));
    tol.accepts(r, residual_scale(f, g))
}

fn require_solution(f: &KForm, g: &G2Data) -> Result<()> {
    if is_solution(f, g, &Tolerance::default()) {
        Ok(())
    } else {
        Err(Error::NotDdtSolution(g.metric().norm(&ddt_residual(f, g))))
    }
}

/// `max(|i(u)F14|, |phi ^ *(F^2)|)`, both of which vanish on solutions.
pub fn orthogonality_check(f: &KForm, g: &G2Data) -> Result<f64> {
    require_solution(f, g)?;
    let m = g.metric();
    let split = project2(f, g);
    let a = m.norm(&split.f14.interior(&split.u));
    let b = m.norm(&g.phi().wedge(&m.hodge(&f.wedge(f))));
    Ok(a.max(b))
}

/// Real roots of `x^3 + p x + q = 0` in ascending order, repeated roots
/// reported once.
pub fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    let mut roots = if p == 0.0 {
        vec![-q.cbrt()]
    } else {
        let disc = -(4.0 * p * p * p + 27.0 * q * q);
        if disc >= 0.0 {
            // Three real roots: x = 2 sqrt(-p/3) cos(t/3 - 2 pi k/3).
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = ((3.0 * q / (p * m)).clamp(-1.0, 1.0)).acos() / 3.0;
            (0..3).map(|k| m * (arg - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos()).collect()
        } else {
            let h = (q * q / 4.0 + p * p * p / 27.0).sqrt();
            vec![(-q / 2.0 + h).cbrt() + (-q / 2.0 - h).cbrt()]
        }
    };
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let fx = *x * *x * *x + p * *x + q;
            let dfx = 3.0 * *x * *x + p;
            if dfx.abs() < f64::EPSILON {
                break;
            }
            let step = fx / dfx;
            if !step.is_finite() {
                break;
            }
            *x -= step;
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    let scale = 1.0 + p.abs().sqrt() + q.abs().cbrt();
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10 * scale);
    roots
}

/// `l1 e^23 + l2 e^45 + l3 e^67`.
pub fn cartan_two_form(lambdas: [f64; 3]) -> KForm {
    KForm::from_labels(7, &[(lambdas[0], "23"), (lambdas[1], "45"), (lambdas[2], "67")])
}

/// Values `x` for which `x i(e_1)phi + l1 e^23 + l2 e^45 + l3 e^67` solves the
/// equation, i.e. real roots of `(3 - x^2 + |l|^2/2) x = l1 l2 l3`.
pub fn cartan_solve(lambdas: [f64; 3]) -> Result<Vec<f64>> {
    let sum: f64 = lambdas.iter().sum();
    let scale = lambdas.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    if sum.abs() > 1e-12 * scale {
        return Err(Error::Contract(format!("eigenvalues must sum to zero, got {sum:e}")));
    }
    let sq: f64 = lambdas.iter().map(|l| l * l).sum();
    let prod: f64 = lambdas.iter().product();
    Ok(depressed_cubic_roots(-(3.0 + 0.5 * sq), prod))
}

/// The solution `x i(e_1)phi + cartan_two_form(lambdas)`.
pub fn cartan_solution(x: f64, lambdas: [f64; 3], g: &G2Data) -> KForm {
    let mut e1 = vec![0.0; 7];
    e1[0] = x;
    &g.seven_two_form(&e1) + &cartan_two_form(lambdas)
}

/// All solutions generated by [`cartan_solve`] for one triple.
pub fn cartan_solutions(lambdas: [f64; 3], g: &G2Data) -> Result<Vec<KForm>> {
    Ok(cartan_solve(lambdas)?.into_iter().map(|x| cartan_solution(x, lambdas, g)).collect())
}

/// `1 - <F^2, *phi>/2`.
pub fn scalar_factor(f: &KForm, g: &G2Data) -> f64 {
    1.0 - 0.5 * g.metric().inner(&f.wedge(f), g.star_phi())
}

/// The same factor written for the imaginary-valued curvature `F_nabla`:
/// `1 + <F_nabla^2, *phi>/2` (complex-bilinear pairing).
pub fn scalar_factor_from_curvature(f_nabla: &CForm, g: &G2Data) -> Complex64 {
    let sq = f_nabla.wedge(f_nabla);
    let m = g.metric();
    Complex64::new(1.0 + 0.5 * m.inner(&sq.re, g.star_phi()), 0.5 * m.inner(&sq.im, g.star_phi()))
}

/// `phi_F = (I + F^sharp)^* phi` and its conformal rescaling.
#[derive(Clone, Debug, Serialize)]
pub struct InducedStructure {
    pub phi_f: KForm,
    pub tilde_phi: KForm,
    pub scalar_factor: f64,
}

/// The G2-structure induced by `F`, rescaled by `|1 - <F^2,*phi>/2|^{-3/4}`.
pub fn induced_phi(f: &KForm, g: &G2Data) -> Result<InducedStructure> {
    check_two_form(f);
    let s = scalar_factor(f, g);
    if s.abs() <= 1e-10 {
        return Err(Error::DegenerateInducedStructure(s));
    }
    let l = g.metric().sharp2(f).plus_identity();
    let phi_f = l.pullback(g.phi());
    let tilde_phi = &phi_f * s.abs().powf(-0.75);
    Ok(InducedStructure { phi_f, tilde_phi, scalar_factor: s })
}

fn rel_dev(a: &KForm, b: &KForm) -> f64 {
    Tolerance::default().residual((a - b).coeff_norm(), a.coeff_norm().max(b.coeff_norm()))
}

/// Result of checking the closed-form Hodge dual of the induced structure.
#[derive(Clone, Debug, Serialize)]
pub struct DdtReport {
    pub residual: KForm,
    pub residual_norm: f64,
    pub scalar_factor: f64,
    /// Largest pairwise relative deviation between the three computations
    /// of the dual 4-form.
    #[serde(rename = "thmC1_max_deviation")]
    pub max_deviation: f64,
    /// Relative deviation of the conformally rescaled identity.
    pub conformal_deviation: f64,
    #[serde(rename = "sign_C")]
    pub sign_c: i8,
    pub bound_lhs: f64,
    pub bound_rhs: f64,
}

/// Compare, on a solution `F`, the three expressions
///
/// * the Hodge dual of `phi_F` in the metric it determines,
/// * `(I + F^sharp)^* *phi`,
/// * `(1 - <F^2,*phi>/2) (*phi - F^2/2)`,
///
/// and the conformal identity `*~ phi~ = C (*phi - F^2/2)`.
pub fn verify_closed_form_dual(f: &KForm, g: &G2Data) -> Result<DdtReport> {
    require_solution(f, g)?;
    let induced = induced_phi(f, g)?;
    let s = induced.scalar_factor;
    let half_sq = f.wedge(f) * 0.5;
    let target = g.star_phi() - &half_sq;

    let own_metric = metric_from_three_form(&induced.phi_f)?;
    let a = own_metric.hodge(&induced.phi_f);
    let b = g.metric().sharp2(f).plus_identity().pullback(g.star_phi());
    let c = &target * s;
    let max_deviation = rel_dev(&a, &b).max(rel_dev(&a, &c)).max(rel_dev(&b, &c));

    let sign_c: i8 = if s > 0.0 { 1 } else { -1 };
    let tilde_metric = metric_from_three_form(&induced.tilde_phi)?;
    let tilde_dual = tilde_metric.hodge(&induced.tilde_phi);
    let conformal_deviation = rel_dev(&tilde_dual, &(&target * sign_c as f64));

    let residual = ddt_residual(f, g);
    let bound = norm_bound_check(f, g);
    Ok(DdtReport {
        residual_norm: g.metric().norm(&residual),
        residual,
        scalar_factor: s,
        max_deviation,
        conformal_deviation,
        sign_c,
        bound_lhs: bound.lhs,
        bound_rhs: bound.rhs,
    })
}

/// The two expressions of the linearised operator's density at a solution.
#[derive(Clone, Debug, Serialize)]
pub struct LinearizationDensity {
    /// `b ^ (*phi - F^2/2)`.
    pub density: KForm,
    /// Relative deviation from `C b ^ *~ phi~`.
    pub deviation: f64,
}

/// `b ^ (*phi - F^2/2)` for a 2-form `b` (standing in for `db`), compared
/// with `C b ^ (*~ phi~)` computed through the rescaled induced structure.
pub fn linearization_density(f: &KForm, b: &KForm, g: &G2Data) -> Result<LinearizationDensity> {
    require_solution(f, g)?;
    check_two_form(b);
    let density = b.wedge(&(g.star_phi() - &(f.wedge(f) * 0.5)));
    let induced = induced_phi(f, g)?;
    let c = induced.scalar_factor.signum();
    let tilde_dual = metric_from_three_form(&induced.tilde_phi)?.hodge(&induced.tilde_phi);
    let other = b.wedge(&tilde_dual) * c;
    let scale = b.coeff_norm() * (g.star_phi() - &(f.wedge(f) * 0.5)).coeff_norm();
    let deviation = Tolerance::default().residual((&density - &other).coeff_norm(), scale);
    Ok(LinearizationDensity { density, deviation })
}

/// Upper bound for `|F7|` on solutions with `|F14| = a`: the largest root of
/// the governing cubic, `sqrt(2 a^2 + 12) cos(arccos(a^3 / (a^2 + 6)^{3/2}) / 3)`.
pub fn seven_part_bound(f14_norm: f64) -> f64 {
    let a = f14_norm;
    let ratio = (a.powi(3) / (a * a + 6.0).powf(1.5)).clamp(-1.0, 1.0);
    (2.0 * a * a + 12.0).sqrt() * (ratio.acos() / 3.0).cos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `|F7| <= seven_part_bound(|F14|)`.
pub fn norm_bound_check(f: &KForm, g: &G2Data) -> BoundCheck {
    let split = project2(f, g);
    let lhs = g.norm(&split.f7(g));
    let rhs = seven_part_bound(g.norm(&split.f14));
    BoundCheck { lhs, rhs, ok: lhs <= rhs + 1e-9 }
}

/// `(|beta^3|, (sqrt 6 / 3) |beta|^3)` for `beta` in `Lambda^2_14`.
pub fn f14_cube_bound(beta: &KForm, g: &G2Data) -> (f64, f64) {
    let lhs = g.norm(&beta.wedge_power(3));
    let rhs = 6f64.sqrt() / 3.0 * g.norm(beta).powi(3);
    (lhs, rhs)
}

/// Matrix of `gamma -> F ^ gamma` from `Lambda^2` to `Lambda^4`.
pub fn wedge_matrix(f: &KForm) -> nalgebra::DMatrix<f64> {
    let n = f.dim();
    let k = crate::exterior::binomial(n, 2);
    let rows = crate::exterior::binomial(n, f.grade() + 2);
    let mut m = nalgebra::DMatrix::zeros(rows, k);
    for j in 0..k {
        let mut c = vec![0.0; k];
        c[j] = 1.0;
        let col = f.wedge(&KForm::from_coeffs(n, 2, c));
        m.column_mut(j).copy_from_slice(col.coeffs());
    }
    m
}

/// Rank of `gamma -> F ^ gamma` on 2-forms (singular values above
/// `1e-10` of the largest) together with `|F^3|`.
pub fn wedge_injectivity(f: &KForm, g: &G2Data) -> (usize, f64) {
    check_two_form(f);
    (numerical_rank(&wedge_matrix(f), 1e-10), g.norm(&f.wedge_power(3)))
}

/// `*F + phi ^ F - (*F^3)/6 ^ *phi`, which vanishes on solutions.
pub fn reformulation_residual(f: &KForm, g: &G2Data) -> KForm {
    let m = g.metric();
    let cube = m.hodge(&f.wedge_power(3));
    &(&m.hodge(f) + &g.phi().wedge(f)) - &(cube.wedge(g.star_phi()) * (1.0 / 6.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::standard_g2;
    use crate::sampling::{random_form, random_lambda214, sample_rng, zero_sum_lambdas};

    fn g() -> &'static G2Data {
        standard_g2()
    }

    #[test]
    fn zero_is_a_solution() {
        let z = KForm::zero(7, 2);
        assert!(ddt_residual(&z, g()).is_zero());
        assert_eq!(orthogonality_check(&z, g()).unwrap(), 0.0);
    }

    #[test]
    fn seven_part_of_length_sqrt3_solves() {
        let s3 = 3f64.sqrt();
        let f = KForm::from_labels(7, &[(s3, "23"), (s3, "45"), (s3, "67")]);
        assert!(ddt_residual(&f, g()).max_abs() < 1e-13);
    }

    #[test]
    fn unit_seven_part_residual() {
        // |u| = 1, F14 = 0: residual (3 - 1) *e^1.
        let f = KForm::from_labels(7, &[(1.0, "23"), (1.0, "45"), (1.0, "67")]);
        let expect = g().hodge(&KForm::covector(7, 0)) * 2.0;
        assert!((ddt_residual(&f, g()) - expect).max_abs() < 1e-13);
    }

    #[test]
    fn decomposed_matches_direct() {
        let mut rng = sample_rng(3, "propD1", 0);
        for _ in 0..50 {
            let f = random_form(&mut rng, 7, 2, 1.0);
            let a = ddt_residual(&f, g());
            let b = ddt_residual_decomposed(&f, g());
            assert!((&a - &b).coeff_norm() <= 1e-12 * (1.0 + a.coeff_norm()));
        }
    }

    #[test]
    fn decomposed_without_seven_part() {
        let mut rng = sample_rng(4, "propD1", 0);
        let f14 = random_lambda214(&mut rng, g(), 1.0);
        let expect = f14.wedge_power(3) * (-1.0 / 6.0);
        assert!((ddt_residual_decomposed(&f14, g()) - expect).max_abs() < 1e-12);
        let diag = cartan_two_form([1.0, -1.0, 0.0]);
        assert!(ddt_residual_decomposed(&diag, g()).max_abs() < 1e-14);
    }

    #[test]
    fn cubic_roots() {
        let r = depressed_cubic_roots(-3.0, 0.0);
        assert_eq!(r.len(), 3);
        let s3 = 3f64.sqrt();
        for (a, b) in r.iter().zip([-s3, 0.0, s3]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(depressed_cubic_roots(0.0, 0.0), vec![0.0]);
        assert_eq!(depressed_cubic_roots(0.0, -8.0), vec![2.0]);
        let one = depressed_cubic_roots(1.0, 1.0);
        assert_eq!(one.len(), 1);
        assert!((one[0].powi(3) + one[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn cartan_closed_forms() {
        let s3 = 3f64.sqrt();
        assert_eq!(cartan_solve([0.0; 3]).unwrap().len(), 3);
        for (a, b) in cartan_solve([0.0; 3]).unwrap().iter().zip([-s3, 0.0, s3]) {
            assert!((a - b).abs() < 1e-12);
        }
        let l: f64 = 1.7;
        let r = (3.0 + l * l).sqrt();
        for (a, b) in cartan_solve([l, -l, 0.0]).unwrap().iter().zip([-r, 0.0, r]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(cartan_solve([1.0, 1.0, 1.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn cartan_one_one_minus_two() {
        // x^3 - 6x - 2 = 0.
        let roots = cartan_solve([1.0, 1.0, -2.0]).unwrap();
        assert_eq!(roots.len(), 3);
        for &x in &roots {
            assert!((x.powi(3) - 6.0 * x - 2.0).abs() < 1e-12);
            let f = cartan_solution(x, [1.0, 1.0, -2.0], g());
            assert!(relative_residual(&f, g()) < 1e-12, "root {x}");
        }
    }

    #[test]
    fn random_cartan_solutions_solve() {
        let mut rng = sample_rng(5, "cartan", 0);
        for _ in 0..100 {
            let l = zero_sum_lambdas(&mut rng);
            for f in cartan_solutions(l, g()).unwrap() {
                assert!(relative_residual(&f, g()) < 1e-11);
                assert!(orthogonality_check(&f, g()).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonality_rejects_non_solutions() {
        let f = KForm::from_labels(7, &[(1.0, "23"), (1.0, "45"), (1.0, "67"), (0.5, "12")]);
        assert!(matches!(orthogonality_check(&f, g()), Err(Error::NotDdtSolution(_))));
    }

    #[test]
    fn induced_structure_at_sqrt3() {
        let s3 = 3f64.sqrt();
        let f = cartan_solution(s3, [0.0; 3], g());
        let ind = induced_phi(&f, g()).unwrap();
        assert!((ind.scalar_factor + 8.0).abs() < 1e-12);
        assert!((&ind.tilde_phi - &(&ind.phi_f * 8f64.powf(-0.75))).max_abs() < 1e-14);
        let rep = verify_closed_form_dual(&f, g()).unwrap();
        assert_eq!(rep.sign_c, -1);
        assert!(rep.max_deviation < 1e-12);
        assert!(rep.conformal_deviation < 1e-12);
    }

    #[test]
    fn induced_structure_at_zero() {
        let ind = induced_phi(&KForm::zero(7, 2), g()).unwrap();
        assert_eq!(&ind.phi_f, g().phi());
        assert_eq!(&ind.tilde_phi, g().phi());
        let rep = verify_closed_form_dual(&KForm::zero(7, 2), g()).unwrap();
        assert!(rep.max_deviation < 1e-14);
    }

    #[test]
    fn small_random_f_induces_g2_structure() {
        let mut rng = sample_rng(6, "induced", 0);
        for _ in 0..20 {
            let f = random_form(&mut rng, 7, 2, 0.2);
            let ind = induced_phi(&f, g()).unwrap();
            assert!(metric_from_three_form(&ind.phi_f).is_ok());
            assert!(g().metric().sharp2(&f).plus_identity().determinant() > 0.0);
        }
    }

    #[test]
    fn closed_form_dual_rejects_non_solutions() {
        let f = KForm::from_labels(7, &[(1.0, "12")]);
        assert!(matches!(verify_closed_form_dual(&f, g()), Err(Error::NotDdtSolution(_))));
    }

    #[test]
    fn degenerate_factor_rejected() {
        // <F^2, *phi> = 2 |F7|^2 - |F14|^2 = 6 |u|^2 for F14 = 0; |u|^2 = 1/3.
        let x = (1.0f64 / 3.0).sqrt();
        let f = cartan_solution(x, [0.0; 3], g());
        assert!(scalar_factor(&f, g()).abs() < 1e-14);
        assert!(matches!(induced_phi(&f, g()), Err(Error::DegenerateInducedStructure(_))));
    }

    #[test]
    fn imaginary_convention_agrees() {
        let mut rng = sample_rng(8, "conv", 0);
        for _ in 0..10 {
            let f = random_form(&mut rng, 7, 2, 1.0);
            let z = scalar_factor_from_curvature(&CForm::imaginary(f.clone()), g());
            assert!((z.re - scalar_factor(&f, g())).abs() < 1e-12);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn reformulation_on_solutions() {
        let mut rng = sample_rng(9, "reform", 0);
        for _ in 0..20 {
            for f in cartan_solutions(zero_sum_lambdas(&mut rng), g()).unwrap() {
                let r = reformulation_residual(&f, g()).coeff_norm();
                assert!(r < 1e-10 * (1.0 + f.coeff_norm().powi(3)), "{r}");
            }
        }
        let f = KForm::from_labels(7, &[(1.0, "12")]);
        assert!(reformulation_residual(&f, g()).coeff_norm() > 0.1);
    }

    #[test]
    fn linearization_flat_and_fourteen() {
        let z = KForm::zero(7, 2);
        let b = KForm::from_labels(7, &[(1.0, "12")]);
        let d = linearization_density(&z, &b, g()).unwrap();
        assert!((&d.density - &b.wedge(g().star_phi())).max_abs() < 1e-15);
        let beta = KForm::from_labels(7, &[(1.0, "23"), (-1.0, "45")]);
        assert!(linearization_density(&z, &beta, g()).unwrap().density.max_abs() < 1e-15);
    }

    #[test]
    fn viete_bound_values() {
        assert!((seven_part_bound(0.0) - 3.0).abs() < 1e-14);
        let b = norm_bound_check(&KForm::zero(7, 2), g());
        assert!(b.ok && b.lhs == 0.0);
    }

    #[test]
    fn cube_bound_diagonal() {
        let l = [1.0, 1.0, -2.0];
        let (lhs, rhs) = f14_cube_bound(&cartan_two_form(l), g());
        assert!((lhs - 12.0).abs() < 1e-12);
        assert!((rhs - 6f64.sqrt() / 3.0 * 6f64.powf(1.5)).abs() < 1e-12);
        assert!((lhs - rhs).abs() < 1e-12);
        let (lhs, _) = f14_cube_bound(&KForm::from_labels(7, &[(1.0, "23"), (-1.0, "45")]), g());
        assert_eq!(lhs, 0.0);
    }

    #[test]
    fn wedge_kernel_counterexample() {
        let beta = KForm::from_labels(7, &[(1.0, "23"), (-1.0, "45")]);
        let gamma = KForm::from_labels(7, &[(1.0, "24"), (1.0, "35")]);
        assert!(beta.wedge(&gamma).is_zero());
        let (rank, f3) = wedge_injectivity(&beta, g());
        assert!(rank <= 20);
        assert_eq!(f3, 0.0);
        assert_eq!(wedge_injectivity(&KForm::zero(7, 2), g()).0, 0);
    }

    #[test]
    fn wedge_injective_on_solutions() {
        let f = cartan_solution(3f64.sqrt(), [0.0; 3], g());
        let (rank, f3) = wedge_injectivity(&f, g());
        assert!(f3 > 1e-9);
        assert_eq!(rank, 21);
    }

    #[test]
    fn pullback_matches_monomial_expansion() {
        // (I + F^sharp)^* e^j = e^j - i(e_j)F, so every monomial pulls back
        // to a wedge of such 1-forms.
        let mut rng = sample_rng(10, "expansion", 0);
        for _ in 0..10 {
            let f = random_form(&mut rng, 7, 2, 1.0);
            let alpha = random_form(&mut rng, 7, 4, 1.0);
            let l = g().metric().sharp2(&f).plus_identity();
            let mut oracle = KForm::zero(7, 4);
            for (idx, c) in alpha.terms() {
                let mut acc = KForm::scalar(7, c);
                for &j in &idx {
                    acc = acc.wedge(&(&KForm::covector(7, j) - &f.interior_basis(j)));
                }
                oracle += &acc;
            }
            assert!((l.pullback(&alpha) - oracle).max_abs() < 1e-12);
        }
    }
}
