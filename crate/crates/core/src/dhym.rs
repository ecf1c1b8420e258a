//! Pointwise Kähler linear algebra for deformed Hermitian Yang–Mills.
//!
//! Real coordinates on `R^{2n}` are ordered `(u_1, v_1, u_2, v_2, ...)` with
//! `J u_i = v_i`, so the standard Kähler form is `e^12 + e^34 + ...`. As on
//! the G2 side, a curvature is stored as its real 2-form `F` (the physical
//! curvature is `i F`). 1-forms are moved by `J` through pullback,
//! `(J a)(x) = a(J x)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{skew_matrix, two_form_from_matrix, CForm, KForm, LinearMap, Metric};
use crate::sampling::{random_form, random_lambda, random_unitary};
use crate::Tolerance;

/// Largest supported complex dimension.
pub const MAX_COMPLEX_DIM: usize = 4;

/// The standard complex structure on `R^{2n}`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(2 * i + 1, 2 * i)] = 1.0;
        j[(2 * i, 2 * i + 1)] = -1.0;
    }
    j
}

/// `sum_i l_i u^i ^ v^i` in the standard layout.
pub fn diagonal_two_form(lambdas: &[f64]) -> KForm {
    let n = lambdas.len();
    let mut f = KForm::zero(2 * n, 2);
    for (i, &l) in lambdas.iter().enumerate() {
        f += &(KForm::monomial(2 * n, &[2 * i, 2 * i + 1]) * l);
    }
    f
}

/// Real `2n x 2n` matrix of a complex `n x n` matrix acting on `z_j = u_j + i v_j`.
pub fn realify(u: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let z = u[(j, k)];
            m[(2 * j, 2 * k)] = z.re;
            m[(2 * j, 2 * k + 1)] = -z.im;
            m[(2 * j + 1, 2 * k)] = z.im;
            m[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    m
}

/// `J a = J^* a`.
pub fn j_action(a: &KForm, j: &DMatrix<f64>) -> KForm {
    LinearMap::new(j.clone()).pullback(a)
}

/// `J^{-1} a`, using `J^{-1} = -J`.
pub fn j_inverse_action(a: &KForm, j: &DMatrix<f64>) -> KForm {
    LinearMap::new(-j).pullback(a)
}

/// Principal symbol of `d_c = J^{-1} d J` at the covector `xi`:
/// `a -> J^{-1}(xi ^ J a)`.
pub fn dc_symbol(xi: &KForm, a: &KForm, j: &DMatrix<f64>) -> KForm {
    j_inverse_action(&xi.wedge(&j_action(a, j)), j)
}

/// Eigenvalues `l_1 >= ... >= l_n` of a (1,1)-form together with a
/// g-orthonormal basis `(u'_1, J u'_1, ...)` (as matrix columns) in which
/// `F = sum l_i u'^i ^ v'^i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalForm {
    pub lambdas: Vec<f64>,
    #[serde(skip)]
    pub basis: DMatrix<f64>,
}

impl NormalForm {
    /// Express a form given in the adapted coframe in the original one.
    pub fn to_original(&self, a: &KForm) -> KForm {
        let inv = self.basis.clone().try_inverse().expect("adapted basis is invertible");
        LinearMap::new(inv).pullback(a)
    }

    pub fn reassemble(&self) -> KForm {
        self.to_original(&diagonal_two_form(&self.lambdas))
    }

    /// `prod sqrt(1 + l_i^2)`.
    pub fn radius(&self) -> f64 {
        self.lambdas.iter().map(|l| (1.0 + l * l).sqrt()).product()
    }

    /// `sum arctan l_i`, not reduced modulo `2 pi`.
    pub fn angle(&self) -> f64 {
        self.lambdas.iter().map(|l| l.atan()).sum()
    }
}

/// Norm of `F - F(J., J.)`, twice the real (2,0)+(0,2) part.
fn non_one_one(f: &KForm, j: &DMatrix<f64>) -> f64 {
    (f - &j_action(f, j)).max_abs()
}

fn check_complex_structure(g: &Metric, j: &DMatrix<f64>) -> Result<()> {
    let d = g.dim();
    if !d.is_multiple_of(2) || d / 2 > MAX_COMPLEX_DIM || j.nrows() != d || j.ncols() != d {
        return Err(Error::Contract(format!("complex structure must be {d}x{d} with even {d} <= 8")));
    }
    let id = DMatrix::<f64>::identity(d, d);
    let sq = (j * j + &id).amax();
    let orth = (j.transpose() * g.gram() * j - g.gram()).amax();
    if sq > 1e-12 || orth > 1e-12 * g.gram().amax() {
        return Err(Error::Contract(format!("J^2 + I = {sq:e}, g(J.,J.) - g = {orth:e}")));
    }
    Ok(())
}

/// Diagonalise a (1,1)-form by the Hermitian matrix `F(u_j, v_k) + i F(u_j, u_k)`
/// in a g-orthonormal J-adapted basis.
pub fn normal_form(g: &Metric, j: &DMatrix<f64>, f: &KForm) -> Result<NormalForm> {
    check_complex_structure(g, j)?;
    let scale = f.max_abs().max(1.0);
    let defect = non_one_one(f, j);
    if defect > 1e-10 * scale {
        return Err(Error::NotOneOne(defect));
    }
    let d = g.dim();
    let n = d / 2;
    let gram = g.gram();
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for k in 0..d {
                s += a[i] * gram[(i, k)] * b[k];
            }
        }
        s
    };

    // Gram-Schmidt over the standard basis, adding u and J u together.
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
    for c in 0..d {
        if frame.len() == d {
            break;
        }
        let mut w = vec![0.0; d];
        w[c] = 1.0;
        for _ in 0..2 {
            for b in &frame {
                let p = inner(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let len = inner(&w, &w).sqrt();
        if len < 1e-8 {
            continue;
        }
        w.iter_mut().for_each(|x| *x /= len);
        let jw: Vec<f64> = (j * nalgebra::DVector::from_column_slice(&w)).iter().copied().collect();
        frame.push(w);
        frame.push(jw);
    }
    debug_assert_eq!(frame.len(), d);

    let a = skew_matrix(f);
    let pair = |x: &[f64], y: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for k in 0..d {
                s += x[i] * a[(i, k)] * y[k];
            }
        }
        s
    };
    let h = DMatrix::from_fn(n, n, |r, c| {
        let (ur, uc, vc) = (&frame[2 * r], &frame[2 * c], &frame[2 * c + 1]);
        Complex64::new(pair(ur, vc), pair(ur, uc))
    });
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));

    let mut basis = DMatrix::zeros(d, d);
    for (slot, &m) in order.iter().enumerate() {
        let mut u = vec![0.0; d];
        for jj in 0..n {
            let z = eig.eigenvectors[(jj, m)];
            for i in 0..d {
                u[i] += z.re * frame[2 * jj][i] + z.im * frame[2 * jj + 1][i];
            }
        }
        let uv = nalgebra::DVector::from_column_slice(&u);
        let v = j * &uv;
        basis.set_column(2 * slot, &uv);
        basis.set_column(2 * slot + 1, &v);
    }
    let lambdas = order.iter().map(|&m| eig.eigenvalues[m]).collect();
    Ok(NormalForm { lambdas, basis })
}

/// A point of a Kähler manifold: metric, complex structure, Kähler form,
/// and a real curvature 2-form.
#[derive(Clone, Debug)]
pub struct HermitianPoint {
    n: usize,
    metric: Metric,
    j: DMatrix<f64>,
    omega: KForm,
    f: KForm,
    normal: Option<NormalForm>,
}

/// Flat `C^n` with `F = 0`.
pub fn standard_kahler(n: usize) -> HermitianPoint {
    assert!((1..=MAX_COMPLEX_DIM).contains(&n), "complex dimension must be in 1..=4");
    HermitianPoint::new(Metric::identity(2 * n), standard_j(n), KForm::zero(2 * n, 2))
        .expect("standard structure is valid")
}

impl HermitianPoint {
    /// Any real 2-form is accepted; the normal form is only available when
    /// it is of type (1,1).
    pub fn new(metric: Metric, j: DMatrix<f64>, f: KForm) -> Result<Self> {
        check_complex_structure(&metric, &j)?;
        assert_eq!((f.dim(), f.grade()), (metric.dim(), 2), "curvature must be a 2-form");
        let omega = two_form_from_matrix(&(j.transpose() * metric.gram()));
        let normal = normal_form(&metric, &j, &f).ok();
        Ok(Self { n: metric.dim() / 2, metric, j, omega, f, normal })
    }

    pub fn with_curvature(&self, f: KForm) -> Result<Self> {
        Self::new(self.metric.clone(), self.j.clone(), f)
    }

    /// Flat point whose curvature has the given eigenvalues in a basis
    /// rotated by the unitary `u`.
    pub fn from_eigenvalues(lambdas: &[f64], u: &DMatrix<Complex64>) -> Result<Self> {
        let n = lambdas.len();
        let q = realify(u);
        let f = LinearMap::new(q.transpose()).pullback(&diagonal_two_form(lambdas));
        standard_kahler(n).with_curvature(f)
    }

    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn curvature(&self) -> &KForm {
        &self.f
    }

    pub fn normal_form(&self) -> Result<&NormalForm> {
        self.normal.as_ref().ok_or_else(|| Error::NotOneOne(non_one_one(&self.f, &self.j)))
    }

    /// `omega + i F`.
    pub fn complex_curvature(&self) -> CForm {
        CForm::new(self.omega.clone(), self.f.clone())
    }

    /// `(omega + i F)^n / omega^n` by direct expansion.
    pub fn zeta(&self) -> Complex64 {
        let top = self.complex_curvature().wedge_power(self.n).top_coeff();
        top / self.omega.wedge_power(self.n).coeffs()[0]
    }
}

/// Random flat point with eigenvalues uniform in `[-3, 3]`, rotated by a
/// Haar unitary.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianPoint {
    let lambdas: Vec<f64> = (0..n).map(|_| random_lambda(rng)).collect();
    let u = random_unitary(rng, n);
    HermitianPoint::from_eigenvalues(&lambdas, &u).expect("unitary rotation preserves (1,1)")
}

/// Random (1,1)-form: the J-invariant part of a Gaussian 2-form.
pub fn random_one_one<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> KForm {
    let f = random_form(rng, 2 * n, 2, scale);
    (&f + &j_action(&f, &standard_j(n))) * 0.5
}

/// `eta = sum (1 + l_i^2)(u^i u^i + v^i v^i)` and its Kähler form.
#[derive(Clone, Debug)]
pub struct EtaMetrics {
    pub eta: Metric,
    pub omega_eta: KForm,
}

pub fn eta_metrics(pt: &HermitianPoint) -> Result<EtaMetrics> {
    let nf = pt.normal_form()?;
    let weights: Vec<f64> = nf.lambdas.iter().map(|l| 1.0 + l * l).collect();
    let omega_eta = nf.to_original(&diagonal_two_form(&weights));
    let inv = nf.basis.clone().try_inverse().expect("adapted basis is invertible");
    let d = DMatrix::from_fn(2 * pt.n, 2 * pt.n, |r, c| if r == c { weights[r / 2] } else { 0.0 });
    let gram = inv.transpose() * d * &inv;
    let gram = (&gram + gram.transpose()) * 0.5;
    let eta = Metric::new(gram, pt.metric.orientation())?;
    Ok(EtaMetrics { eta, omega_eta })
}

/// `g(u, v) + g((i(u)F)^sharp, (i(v)F)^sharp)`, the basis-free form of `eta`.
pub fn eta_gram_direct(pt: &HermitianPoint) -> DMatrix<f64> {
    let a = skew_matrix(&pt.f);
    pt.metric.gram() + &a * pt.metric.inverse_gram() * a.transpose()
}

/// `(1/r)^{1/(n-1)}` times `eta` and `omega_eta`; undefined for `n = 1`.
pub fn tilde_eta_metrics(pt: &HermitianPoint) -> Result<EtaMetrics> {
    if pt.n < 2 {
        return Err(Error::Unsupported("the conformal metric needs complex dimension at least 2"));
    }
    let base = eta_metrics(pt)?;
    let r = pt.normal_form()?.radius();
    let c = r.powf(-1.0 / (pt.n as f64 - 1.0));
    Ok(EtaMetrics {
        eta: Metric::new(base.eta.gram() * c, pt.metric.orientation())?,
        omega_eta: base.omega_eta * c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusAngle {
    pub r: f64,
    /// Unreduced `sum arctan l_i`.
    pub theta: f64,
    /// `|zeta - r e^{i theta}| / r` with `zeta` from the wedge expansion.
    pub deviation: f64,
}

pub fn radius_angle(pt: &HermitianPoint) -> Result<RadiusAngle> {
    let nf = pt.normal_form()?;
    let (r, theta) = (nf.radius(), nf.angle());
    let zeta = pt.zeta();
    let deviation = (zeta - Complex64::from_polar(r, theta)).norm() / r;
    Ok(RadiusAngle { r, theta, deviation })
}

/// Reduce an angle to `(-pi, pi]`.
pub fn reduce_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

fn serialize_reduced<S: Serializer>(theta: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(reduce_angle(*theta))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DhymReport {
    pub r: f64,
    /// Kept unreduced; serialised modulo `2 pi` in `(-pi, pi]`.
    #[serde(serialize_with = "serialize_reduced")]
    pub theta: f64,
    pub p02_norm: f64,
    pub im_residual: f64,
    /// `omega_eta^n = r^2 omega^n`; absent when F is not (1,1).
    pub vol_identity_residual: Option<f64>,
    pub im_identity_residual: Option<f64>,
}

/// Residuals of the dHYM system `F^{0,2} = 0`, `Im(e^{-i theta0}(omega + iF)^n) = 0`.
///
/// `r` and `theta` come from the normal form when F is (1,1), otherwise
/// from the modulus and argument of the expansion.
pub fn dhym_residual(pt: &HermitianPoint, theta0: f64) -> DhymReport {
    let zeta = pt.zeta();
    let im_residual = (Complex64::from_polar(1.0, -theta0) * zeta).im;
    let p02_norm = pq_project(&CForm::real(pt.f.clone()), 0, 2, &pt.j).norm(&pt.metric);
    let (r, theta) = match &pt.normal {
        Some(nf) => (nf.radius(), nf.angle()),
        None => (zeta.norm(), zeta.arg()),
    };
    DhymReport {
        r,
        theta,
        p02_norm,
        im_residual,
        vol_identity_residual: volume_identity_residual(pt).ok(),
        im_identity_residual: im_identity_check(pt).ok(),
    }
}

/// Relative residual of `omega_eta^n = r^2 omega^n`.
pub fn volume_identity_residual(pt: &HermitianPoint) -> Result<f64> {
    let eta = eta_metrics(pt)?;
    let r = pt.normal_form()?.radius();
    let lhs = eta.omega_eta.wedge_power(pt.n);
    let rhs = pt.omega.wedge_power(pt.n) * (r * r);
    Ok(Tolerance::default().residual((&lhs - &rhs).coeff_norm(), rhs.coeff_norm()))
}

/// Relative residual of `Im(i e^{-i theta}(omega + iF)^{n-1}) = omega_eta^{n-1} / r`,
/// the left side by complex expansion, the right side from the normal form.
pub fn im_identity_check(pt: &HermitianPoint) -> Result<f64> {
    let nf = pt.normal_form()?;
    let (r, theta) = (nf.radius(), nf.angle());
    let power = pt.complex_curvature().wedge_power(pt.n - 1);
    let lhs = power.scale(Complex64::i() * Complex64::from_polar(1.0, -theta)).im;
    let rhs = eta_metrics(pt)?.omega_eta.wedge_power(pt.n - 1) * (1.0 / r);
    Ok(Tolerance::default().residual((&lhs - &rhs).coeff_norm(), rhs.coeff_norm()))
}

/// The `(p, q)` component of a complex form, by averaging the action of the
/// rotations `cos t + sin t J` (which act on `Lambda^{p,q}` as `e^{i(p-q)t}`)
/// over `2k + 1` equally spaced angles.
pub fn pq_project(a: &CForm, p: usize, q: usize, j: &DMatrix<f64>) -> CForm {
    let k = a.grade();
    assert_eq!(p + q, k, "p + q must equal the grade");
    let d = a.dim();
    let samples = 2 * k + 1;
    let freq = p as f64 - q as f64;
    let mut acc = CForm::zero(d, k);
    for m in 0..samples {
        let t = 2.0 * std::f64::consts::PI * m as f64 / samples as f64;
        let rot = LinearMap::new(DMatrix::identity(d, d) * t.cos() + j * t.sin());
        let moved = a.pullback(&rot).scale(Complex64::from_polar(1.0 / samples as f64, -freq * t));
        acc = &acc + &moved;
    }
    acc
}

/// Principal symbol estimate of the linearised dHYM operator at covector `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymbolBound {
    /// `sum (a_i^2 + b_i^2) / (1 + l_i^2)` in the adapted coframe.
    pub sigma: f64,
    /// `|xi|^2 / (1 + max l_i^2)`.
    pub bound: f64,
    /// `n omega_eta^{n-1} ^ (xi ^ J^{-1} xi) / omega_eta^n`.
    pub sigma_wedge: f64,
}

pub fn symbol_bound(pt: &HermitianPoint, xi: &KForm) -> Result<SymbolBound> {
    assert_eq!((xi.dim(), xi.grade()), (2 * pt.n, 1), "xi must be a 1-form");
    if xi.is_zero() {
        return Err(Error::Contract("the covector must be nonzero".into()));
    }
    let nf = pt.normal_form()?;
    let comps: Vec<f64> = (nf.basis.transpose() * nalgebra::DVector::from_column_slice(xi.coeffs())).iter().copied().collect();
    let sigma = nf
        .lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| (comps[2 * i].powi(2) + comps[2 * i + 1].powi(2)) / (1.0 + l * l))
        .sum();
    let max_sq = nf.lambdas.iter().fold(0.0f64, |m, l| m.max(l * l));
    let bound = pt.metric.inner(xi, xi) / (1.0 + max_sq);

    let omega_eta = eta_metrics(pt)?.omega_eta;
    let symbol = xi.wedge(&j_inverse_action(xi, &pt.j));
    let num = omega_eta.wedge_power(pt.n - 1).wedge(&symbol).coeffs()[0];
    let den = omega_eta.wedge_power(pt.n).coeffs()[0];
    Ok(SymbolBound { sigma, bound, sigma_wedge: pt.n as f64 * num / den })
}

/// Relative residual of `omega^{n-1} ^ a = (n-1)! *(J a)` for a 1-form `a`.
pub fn lemma_a1_residual(pt: &HermitianPoint, a: &KForm) -> f64 {
    assert_eq!(a.grade(), 1);
    let fact: f64 = (1..pt.n).map(|i| i as f64).product();
    let lhs = pt.omega.wedge_power(pt.n - 1).wedge(a);
    let rhs = pt.metric.hodge(&j_action(a, &pt.j)) * fact;
    Tolerance::default().residual((&lhs - &rhs).coeff_norm(), lhs.coeff_norm().max(rhs.coeff_norm()))
}
