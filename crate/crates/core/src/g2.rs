//! G2-structures on `R^7`: the standard 3-form, the metric it determines,
//! and the irreducible splittings `Lambda^2 = Lambda^2_7 + Lambda^2_14` and
//! `Lambda^3 = Lambda^3_1 + Lambda^3_7 + Lambda^3_27`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{KForm, Metric};
use crate::Tolerance;

/// Monomials of the standard 3-form, 1-based labels.
pub const PHI_TERMS: [(f64, &str); 7] = [
    (1.0, "123"),
    (1.0, "145"),
    (1.0, "167"),
    (1.0, "246"),
    (-1.0, "257"),
    (-1.0, "347"),
    (-1.0, "356"),
];

/// Monomials of the Hodge dual of the standard 3-form.
pub const STAR_PHI_TERMS: [(f64, &str); 7] = [
    (1.0, "4567"),
    (1.0, "2367"),
    (1.0, "2345"),
    (1.0, "1357"),
    (-1.0, "1346"),
    (-1.0, "1256"),
    (-1.0, "1247"),
];

/// A G2-structure on `R^7` together with its metric, its Hodge dual and
/// the cached projection matrices (acting on coefficient vectors in the
/// lexicographic basis).
#[derive(Clone, Debug)]
pub struct G2Data {
    phi: KForm,
    star_phi: KForm,
    metric: Metric,
    proj2_7: DMatrix<f64>,
    proj2_14: DMatrix<f64>,
    proj3_1: DMatrix<f64>,
    proj3_7: DMatrix<f64>,
    proj3_27: DMatrix<f64>,
}

static STANDARD: OnceLock<G2Data> = OnceLock::new();

/// The standard G2-structure.
pub fn standard_g2() -> &'static G2Data {
    STANDARD.get_or_init(|| {
        let phi = KForm::from_labels(7, &PHI_TERMS);
        G2Data::with_metric(phi, Metric::identity(7))
    })
}

impl G2Data {
    pub fn standard() -> &'static G2Data {
        standard_g2()
    }

    /// Build the structure determined by an arbitrary G2 3-form.
    pub fn from_phi(phi: KForm) -> Result<G2Data> {
        let metric = metric_from_three_form(&phi)?;
        Ok(Self::with_metric(phi, metric))
    }

    fn with_metric(phi: KForm, metric: Metric) -> G2Data {
        let star_phi = metric.hodge(&phi);

        let basis2 = |j: usize| {
            let mut c = vec![0.0; 21];
            c[j] = 1.0;
            KForm::from_coeffs(7, 2, c)
        };
        // M: alpha -> *(phi ^ alpha); eigenvalues 2 on Lambda^2_7, -1 on Lambda^2_14.
        let mut m = DMatrix::zeros(21, 21);
        for j in 0..21 {
            let col = metric.hodge(&phi.wedge(&basis2(j)));
            m.set_column(j, &DVector::from_column_slice(col.coeffs()));
        }
        let id21 = DMatrix::<f64>::identity(21, 21);
        let proj2_7 = (&m + &id21) / 3.0;
        let proj2_14 = (&id21 * 2.0 - &m) / 3.0;

        let mut proj3_1 = DMatrix::zeros(35, 35);
        let mut proj3_7 = DMatrix::zeros(35, 35);
        for j in 0..35 {
            let mut c = vec![0.0; 35];
            c[j] = 1.0;
            let gamma = KForm::from_coeffs(7, 3, c);
            let one = one_part(&phi, &metric, &gamma);
            let seven = seven_part(&phi, &star_phi, &metric, &gamma);
            proj3_1.set_column(j, &DVector::from_column_slice(one.coeffs()));
            proj3_7.set_column(j, &DVector::from_column_slice(seven.coeffs()));
        }
        let proj3_27 = DMatrix::<f64>::identity(35, 35) - &proj3_1 - &proj3_7;

        G2Data { phi, star_phi, metric, proj2_7, proj2_14, proj3_1, proj3_7, proj3_27 }
    }

    pub fn phi(&self) -> &KForm {
        &self.phi
    }

    pub fn star_phi(&self) -> &KForm {
        &self.star_phi
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn hodge(&self, a: &KForm) -> KForm {
        self.metric.hodge(a)
    }

    pub fn norm(&self, a: &KForm) -> f64 {
        self.metric.norm(a)
    }

    pub fn proj2_7(&self) -> &DMatrix<f64> {
        &self.proj2_7
    }

    pub fn proj2_14(&self) -> &DMatrix<f64> {
        &self.proj2_14
    }

    pub fn proj3_1(&self) -> &DMatrix<f64> {
        &self.proj3_1
    }

    pub fn proj3_7(&self) -> &DMatrix<f64> {
        &self.proj3_7
    }

    pub fn proj3_27(&self) -> &DMatrix<f64> {
        &self.proj3_27
    }

    /// `i(u) phi`.
    pub fn seven_two_form(&self, u: &[f64]) -> KForm {
        self.phi.interior(u)
    }

    /// `i(u) *phi`.
    pub fn seven_three_form(&self, u: &[f64]) -> KForm {
        self.star_phi.interior(u)
    }

    /// The vector `u` of the `Lambda^2_7` part, via `*(F ^ *phi) = 3 u^flat`.
    pub fn two_form_vector(&self, f: &KForm) -> Vec<f64> {
        let uflat = self.hodge(&f.wedge(&self.star_phi)) * (1.0 / 3.0);
        self.metric.sharp(&uflat)
    }

    /// Apply a cached projection to a form of matching grade.
    pub fn apply(&self, proj: &DMatrix<f64>, a: &KForm) -> KForm {
        assert_eq!(proj.ncols(), a.coeffs().len(), "projection/grade mismatch");
        let out = proj * DVector::from_column_slice(a.coeffs());
        KForm::from_coeffs(7, a.grade(), out.iter().copied().collect())
    }

    /// Whether a 2-form lies in `Lambda^2_14` (`*phi ^ beta = 0`).
    pub fn in_lambda214(&self, beta: &KForm, tol: &Tolerance) -> bool {
        let w = self.norm(&self.star_phi.wedge(beta));
        tol.accepts(w, self.norm(beta))
    }
}

fn one_part(phi: &KForm, metric: &Metric, gamma: &KForm) -> KForm {
    // |phi|^2 = 7 for a G2-structure measured in its own metric.
    phi * (metric.inner(gamma, phi) / metric.inner(phi, phi))
}

fn seven_part(phi: &KForm, star_phi: &KForm, metric: &Metric, gamma: &KForm) -> KForm {
    // phi ^ i(u)*phi = -4 *u^flat, while phi ^ (Lambda^3_1 + Lambda^3_27) = 0.
    let uflat = metric.hodge(&phi.wedge(gamma)) * (-0.25);
    star_phi.interior(&metric.sharp(&uflat))
}

/// The metric determined by a G2 3-form.
///
/// `B(u, v)` is the coefficient of `e^{1..7}` in `i(u)phi ^ i(v)phi ^ phi / 6`;
/// the metric is `det(B)^{-1/9} B` (real ninth root). A positive-definite
/// `B` gives the standard orientation, a negative-definite one the reversed
/// orientation; an indefinite `B` is rejected.
pub fn metric_from_three_form(phi: &KForm) -> Result<Metric> {
    assert_eq!((phi.dim(), phi.grade()), (7, 3), "expected a 3-form on R^7");
    let contractions: Vec<KForm> = (0..7).map(|i| phi.interior_basis(i)).collect();
    let mut b = DMatrix::zeros(7, 7);
    for i in 0..7 {
        let left = contractions[i].wedge(phi);
        for j in i..7 {
            let v = contractions[j].wedge(&left).coeffs()[0] / 6.0;
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    let eig = b.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let floor = 1e-12 * max.max(f64::MIN_POSITIVE);
    let orientation = if eig.eigenvalues.iter().all(|&e| e > floor) {
        1
    } else if eig.eigenvalues.iter().all(|&e| e < -floor) {
        -1
    } else {
        return Err(Error::NotG2Structure);
    };
    let det: f64 = eig.eigenvalues.iter().product();
    let scale = det.signum() * det.abs().powf(-1.0 / 9.0);
    Metric::new(b * scale, orientation)
}

/// `F = i(u) phi + f14` with `f14` in `Lambda^2_14`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoFormSplit {
    pub u: Vec<f64>,
    pub f14: KForm,
}

impl TwoFormSplit {
    pub fn f7(&self, g: &G2Data) -> KForm {
        g.seven_two_form(&self.u)
    }

    pub fn reassemble(&self, g: &G2Data) -> KForm {
        &self.f7(g) + &self.f14
    }

    /// `|u|` in the metric of `g`.
    pub fn u_norm(&self, g: &G2Data) -> f64 {
        g.norm(&g.metric().flat(&self.u))
    }
}

/// Split a 2-form into its `Lambda^2_7` and `Lambda^2_14` parts.
pub fn project2(f: &KForm, g: &G2Data) -> TwoFormSplit {
    assert_eq!((f.dim(), f.grade()), (7, 2), "project2 expects a 2-form on R^7");
    TwoFormSplit { u: g.two_form_vector(f), f14: g.apply(&g.proj2_14, f) }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThreeFormSplit {
    pub one: KForm,
    pub seven: KForm,
    pub twenty_seven: KForm,
}

/// Split a 3-form into its `Lambda^3_1`, `Lambda^3_7` and `Lambda^3_27` parts.
pub fn project3(gamma: &KForm, g: &G2Data) -> ThreeFormSplit {
    assert_eq!((gamma.dim(), gamma.grade()), (7, 3), "project3 expects a 3-form on R^7");
    let one = one_part(&g.phi, &g.metric, gamma);
    let seven = seven_part(&g.phi, &g.star_phi, &g.metric, gamma);
    let twenty_seven = &(gamma - &one) - &seven;
    ThreeFormSplit { one, seven, twenty_seven }
}

/// Normalised residuals of the six pointwise G2 identities, in order:
///
/// 1. `phi ^ i(u)*phi = -4 *u^flat`
/// 2. `*phi ^ i(u)phi = 3 *u^flat`
/// 3. `phi ^ i(u)phi = 2 *(i(u)phi)`
/// 4. `(i(u)phi)^3 = 6 |u|^2 *u^flat`
/// 5. `(i(u)phi)^2 ^ beta = 2 *phi ^ u^flat ^ i(u)beta`
/// 6. `i(u)phi ^ beta^2 = -|beta|^2 *u^flat + phi ^ i(u)(beta^2)`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub residuals: [f64; 6],
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Evaluate the identity battery for `u` and `beta` in `Lambda^2_14`.
pub fn identity_battery(u: &[f64], beta: &KForm, g: &G2Data) -> Result<IdentityReport> {
    let tol = Tolerance::default();
    if !g.in_lambda214(beta, &tol.with_rel(1e-8)) {
        return Err(Error::Contract("beta is not in Lambda^2_14".into()));
    }
    let m = g.metric();
    let phi = g.phi();
    let psi = g.star_phi();
    let uflat = m.flat(u);
    let star_u = m.hodge(&uflat);
    let u2 = m.inner(&uflat, &uflat);
    let iu_phi = phi.interior(u);
    let iu_psi = psi.interior(u);
    let iu_beta = beta.interior(u);
    let beta2 = beta.wedge(beta);

    let pairs = [
        (phi.wedge(&iu_psi), &star_u * -4.0),
        (psi.wedge(&iu_phi), &star_u * 3.0),
        (phi.wedge(&iu_phi), m.hodge(&iu_phi) * 2.0),
        (iu_phi.wedge_power(3), &star_u * (6.0 * u2)),
        (iu_phi.wedge(&iu_phi).wedge(beta), psi.wedge(&uflat).wedge(&iu_beta) * 2.0),
        (iu_phi.wedge(&beta2), &(&star_u * -m.inner(beta, beta)) + &phi.wedge(&beta2.interior(u))),
    ];
    let mut residuals = [0.0; 6];
    for (r, (lhs, rhs)) in residuals.iter_mut().zip(pairs.iter()) {
        let scale = m.norm(lhs).max(m.norm(rhs));
        *r = tol.residual(m.norm(&(lhs - rhs)), scale);
    }
    Ok(IdentityReport { residuals })
}

/// `|beta ^ *phi|`, which vanishes exactly on `Lambda^2_14`.
pub fn lambda214_wedge_vanishing(beta: &KForm, g: &G2Data) -> f64 {
    g.norm(&beta.wedge(g.star_phi()))
}
