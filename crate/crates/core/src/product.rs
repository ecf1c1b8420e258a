//! The product `S^1 x Y^6`: a G2-structure built from flat Calabi–Yau data,
//! and the pointwise match between dHYM with phase one on `Y` and dDT on
//! the product.
//!
//! `R^7` is ordered `(x, y_1, ..., y_6)` and `R^6` uses the Kähler layout
//! `(u_1, v_1, u_2, v_2, u_3, v_3)`. With `Omega = dz_1 ^ dz_2 ^ dz_3`,
//! `dz_j = u^j + i v^j`, the product 3-form coincides term by term with the
//! standard one, so no relabelling is needed.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::ddt::{ddt_residual, relative_residual};
use crate::dhym::{dhym_residual, random_one_one, realify, standard_j, HermitianPoint};
use crate::error::{Error, Result};
use crate::exterior::{CForm, KForm, Metric};
use crate::g2::{metric_from_three_form, G2Data};
use crate::sampling::{random_form, random_lambda, random_unitary};
use crate::Tolerance;

/// Linear SU(3) data on `R^6`.
#[derive(Clone, Debug)]
pub struct SU3Point {
    pub omega6: KForm,
    pub re_omega3: KForm,
    pub im_omega3: KForm,
    pub j6: DMatrix<f64>,
}

impl SU3Point {
    /// Flat `C^3`.
    pub fn standard() -> Self {
        let dz = |j: usize| CForm::new(KForm::covector(6, 2 * j), KForm::covector(6, 2 * j + 1));
        let omega = dz(0).wedge(&dz(1)).wedge(&dz(2));
        Self {
            omega6: KForm::from_labels(6, &[(1.0, "12"), (1.0, "34"), (1.0, "56")]),
            re_omega3: omega.re,
            im_omega3: omega.im,
            j6: standard_j(3),
        }
    }

    pub fn holomorphic_volume(&self) -> CForm {
        CForm::new(self.re_omega3.clone(), self.im_omega3.clone())
    }

    /// The Hermitian point on `Y` carrying the curvature `f6`.
    pub fn hermitian_point(&self, f6: KForm) -> Result<HermitianPoint> {
        HermitianPoint::new(Metric::identity(6), self.j6.clone(), f6)
    }
}

/// `phi = dx ^ omega + Re Omega` and `psi = omega^2/2 - dx ^ Im Omega`.
#[derive(Clone, Debug)]
pub struct ProductStructure {
    pub phi7: KForm,
    pub psi7: KForm,
}

pub fn product_g2(p: &SU3Point) -> Result<ProductStructure> {
    let dx = KForm::covector(7, 0);
    let omega = p.omega6.shift_into(7, 1);
    let phi7 = &dx.wedge(&omega) + &p.re_omega3.shift_into(7, 1);
    let psi7 = &(omega.wedge(&omega) * 0.5) - &dx.wedge(&p.im_omega3.shift_into(7, 1));
    metric_from_three_form(&phi7)?;
    Ok(ProductStructure { phi7, psi7 })
}

/// Restrict a 2-form on `R^7` with no `dx` component to `R^6`.
pub fn restrict_to_slice(f: &KForm) -> Result<KForm> {
    assert_eq!((f.dim(), f.grade()), (7, 2));
    let scale = f.max_abs().max(1.0);
    let mut out = KForm::zero(6, 2);
    for (idx, c) in f.terms() {
        if idx[0] == 0 {
            if c.abs() > 1e-14 * scale {
                return Err(Error::Contract("curvature has a dx component".into()));
            }
        } else {
            out += &(KForm::monomial(6, &[idx[0] - 1, idx[1] - 1]) * c);
        }
    }
    Ok(out)
}

/// Normalised residuals of both sides of the correspondence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Correspondence {
    /// Relative dDT residual of the pulled-back curvature.
    pub ddt_side: f64,
    /// `|Im (omega + iF)^3| / |(omega + iF)^3|`.
    pub dhym_im: f64,
    /// `|F^{0,2}| / |F|`.
    pub p02_norm: f64,
}

impl Correspondence {
    pub fn ddt_holds(&self, threshold: f64) -> bool {
        self.ddt_side < threshold
    }

    pub fn dhym_holds(&self, threshold: f64) -> bool {
        self.dhym_im < threshold && self.p02_norm < threshold
    }

    pub fn agrees(&self, threshold: f64) -> bool {
        self.ddt_holds(threshold) == self.dhym_holds(threshold)
    }
}

/// Evaluate both sides for a curvature on `Y` (a 2-form on `R^6`, or a
/// 2-form on `R^7` without `dx` component). `g` must be the product
/// structure of `p`.
pub fn correspondence_check(p: &SU3Point, f: &KForm, g: &G2Data) -> Result<Correspondence> {
    let f6 = match f.dim() {
        6 => f.clone(),
        7 => restrict_to_slice(f)?,
        d => return Err(Error::Contract(format!("curvature lives on R^{d}, expected R^6 or R^7"))),
    };
    let lifted = f6.shift_into(7, 1);
    let ddt_side = relative_residual(&lifted, g);
    let pt = p.hermitian_point(f6.clone())?;
    let rep = dhym_residual(&pt, 0.0);
    let tol = Tolerance::default();
    let zeta = pt.zeta();
    Ok(Correspondence {
        ddt_side,
        dhym_im: tol.residual(rep.im_residual.abs(), zeta.norm()),
        p02_norm: tol.residual(rep.p02_norm, f6.coeff_norm()),
    })
}

/// `|F ^ Im Omega|`, which vanishes exactly when `F^{0,2} = 0`.
pub fn im_omega_wedge(p: &SU3Point, f6: &KForm) -> f64 {
    f6.wedge(&p.im_omega3).coeff_norm()
}

/// Absolute dDT residual of the pulled-back curvature.
pub fn lifted_residual(f6: &KForm, g: &G2Data) -> KForm {
    ddt_residual(&f6.shift_into(7, 1), g)
}

/// Test curvatures for the correspondence, cycling through
/// phase-one (1,1) solutions, random (1,1) forms, arbitrary 2-forms and
/// slightly perturbed solutions.
pub fn sample_curvature<R: Rng + ?Sized>(rng: &mut R, index: u64) -> KForm {
    let solution = |rng: &mut R| {
        let (a, b) = (random_lambda(rng), random_lambda(rng));
        let c = -(a.atan() + b.atan()).tan();
        let q = realify(&random_unitary(rng, 3));
        let diag = crate::dhym::diagonal_two_form(&[a, b, c]);
        crate::exterior::LinearMap::new(q.transpose()).pullback(&diag)
    };
    match index % 4 {
        0 => solution(rng),
        1 => random_one_one(rng, 3, 1.0),
        2 => random_form(rng, 6, 2, 1.0),
        _ => {
            let f = solution(rng);
            &f + &random_form(rng, 6, 2, 1e-3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::{standard_g2, PHI_TERMS, STAR_PHI_TERMS};
    use crate::sampling::sample_rng;
    use num_complex::Complex64;

    fn setup() -> (SU3Point, &'static G2Data) {
        (SU3Point::standard(), standard_g2())
    }

    #[test]
    fn flat_model_constants() {
        let p = SU3Point::standard();
        assert_eq!(p.omega6.wedge_power(3) * (1.0 / 6.0), KForm::volume(6));
        let om = p.holomorphic_volume();
        assert!(om.wedge(&CForm::real(p.omega6.clone())).re.is_zero());
        assert!(om.wedge(&CForm::real(p.omega6.clone())).im.is_zero());
        assert_eq!(om.wedge(&om.conj()).top_coeff(), Complex64::new(0.0, -8.0));
    }

    #[test]
    fn product_is_standard() {
        let (p, g) = setup();
        let s = product_g2(&p).unwrap();
        assert_eq!(s.phi7, KForm::from_labels(7, &PHI_TERMS));
        assert_eq!(s.psi7, KForm::from_labels(7, &STAR_PHI_TERMS));
        assert!((g.hodge(&s.phi7) - s.psi7.clone()).max_abs() < 1e-12);
        assert_eq!(s.phi7.wedge(&s.psi7).coeffs()[0], 7.0);
    }

    #[test]
    fn zero_curvature() {
        let (p, g) = setup();
        let c = correspondence_check(&p, &KForm::zero(6, 2), g).unwrap();
        assert_eq!((c.ddt_side, c.dhym_im, c.p02_norm), (0.0, 0.0, 0.0));
    }

    #[test]
    fn balanced_eigenvalues_solve_both() {
        let (p, g) = setup();
        let l = 1.3;
        let f = KForm::from_labels(6, &[(l, "12"), (-l, "34")]);
        let c = correspondence_check(&p, &f, g).unwrap();
        assert!(c.ddt_holds(1e-9) && c.dhym_holds(1e-9));
        assert!(lifted_residual(&f, g).max_abs() < 1e-12);
    }

    #[test]
    fn zero_two_part_breaks_both() {
        let (p, g) = setup();
        let f = KForm::from_labels(6, &[(1.0, "13"), (-1.0, "24")]);
        let c = correspondence_check(&p, &f, g).unwrap();
        assert!(c.p02_norm > 0.1 && c.ddt_side > 0.1);
        assert!(im_omega_wedge(&p, &f) > 0.1);
    }

    #[test]
    fn dx_component_rejected() {
        let (p, g) = setup();
        let f = KForm::from_labels(7, &[(1.0, "12")]);
        assert!(matches!(correspondence_check(&p, &f, g), Err(Error::Contract(_))));
        let ok = KForm::from_labels(7, &[(1.0, "23"), (-1.0, "45")]);
        assert!(correspondence_check(&p, &ok, g).unwrap().ddt_holds(1e-9));
    }

    #[test]
    fn sampled_classifications_agree() {
        let (p, g) = setup();
        let mut solutions = 0;
        for i in 0..80 {
            let f = sample_curvature(&mut sample_rng(11, "product", i), i);
            let c = correspondence_check(&p, &f, g).unwrap();
            assert!(c.agrees(1e-8), "{i}: {c:?}");
            solutions += c.ddt_holds(1e-8) as usize;
            let zero_two = c.p02_norm < 1e-8;
            assert_eq!(zero_two, im_omega_wedge(&p, &f) < 1e-8 * f.coeff_norm());
        }
        assert_eq!(solutions, 20);
    }
}
