use nalgebra::{DMatrix, DVector};

use super::basis::{binomial, index_of, masks};
use super::{KForm, LinearMap};
use crate::error::{Error, Result};
use crate::linalg::compound;

/// An oriented inner product on `R^n`.
///
/// `gram[(i, j)] = g(e_i, e_j)`. The induced inner products on every
/// `Lambda^k` are computed once at construction (compound matrices of the
/// inverse gram); the identity metric skips them.
#[derive(Clone, Debug)]
pub struct Metric {
    dim: usize,
    gram: DMatrix<f64>,
    inverse: DMatrix<f64>,
    orientation: f64,
    sqrt_det: f64,
    /// Induced inner product on `Lambda^k` for each k; `None` means identity.
    cometric: Option<Vec<DMatrix<f64>>>,
}

impl Metric {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            gram: DMatrix::identity(dim, dim),
            inverse: DMatrix::identity(dim, dim),
            orientation: 1.0,
            sqrt_det: 1.0,
            cometric: None,
        }
    }

    /// `orientation` is `+1` when `e^1 ^ ... ^ e^n` is positive, `-1` otherwise.
    pub fn new(gram: DMatrix<f64>, orientation: i8) -> Result<Self> {
        let dim = gram.nrows();
        if gram.ncols() != dim || dim > super::basis::MAX_DIM {
            return Err(Error::InvalidMetric(format!("gram must be square, got {}x{}", dim, gram.ncols())));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidMetric(format!("orientation must be +1 or -1, got {orientation}")));
        }
        let scale = gram.amax().max(f64::MIN_POSITIVE);
        let asym = (&gram - gram.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::InvalidMetric(format!("asymmetry {asym:e}")));
        }
        let chol = gram
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidMetric("not positive-definite".into()))?;
        let inverse = chol.inverse();
        let det: f64 = chol.l_dirty().diagonal().iter().map(|d| d * d).product();
        let cometric = (0..=dim).map(|k| compound(&inverse, k)).collect();
        Ok(Self {
            dim,
            gram,
            inverse,
            orientation: orientation as f64,
            sqrt_det: det.sqrt(),
            cometric: Some(cometric),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn inverse_gram(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn orientation(&self) -> i8 {
        self.orientation as i8
    }

    pub fn is_identity(&self) -> bool {
        self.cometric.is_none()
    }

    /// Same gram, opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut m = self.clone();
        m.orientation = -m.orientation;
        m
    }

    /// Metric volume form `orientation * sqrt(det g) e^{1..n}`.
    pub fn volume_form(&self) -> KForm {
        KForm::volume(self.dim) * (self.orientation * self.sqrt_det)
    }

    fn raise(&self, a: &KForm) -> Vec<f64> {
        match &self.cometric {
            None => a.coeffs().to_vec(),
            Some(c) => (&c[a.grade()] * DVector::from_column_slice(a.coeffs())).iter().copied().collect(),
        }
    }

    /// Matrix of the induced inner product on `Lambda^k` in the
    /// lexicographic basis.
    pub fn form_gram(&self, k: usize) -> DMatrix<f64> {
        match &self.cometric {
            None => DMatrix::identity(binomial(self.dim, k), binomial(self.dim, k)),
            Some(c) => c[k].clone(),
        }
    }

    /// Induced inner product on `Lambda^k`.
    pub fn inner(&self, a: &KForm, b: &KForm) -> f64 {
        assert_eq!(a.dim(), self.dim, "dimension mismatch");
        assert_eq!((a.dim(), a.grade()), (b.dim(), b.grade()), "shape mismatch in inner product");
        self.raise(a).iter().zip(b.coeffs()).map(|(x, y)| x * y).sum()
    }

    pub fn norm(&self, a: &KForm) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    /// Hodge star, characterised by `a ^ *b = <a, b> vol`.
    pub fn hodge(&self, b: &KForm) -> KForm {
        assert_eq!(b.dim(), self.dim, "dimension mismatch in hodge star");
        let n = self.dim;
        let k = b.grade();
        let full: u16 = ((1u32 << n) - 1) as u16;
        let raised = self.raise(b);
        let factor = self.orientation * self.sqrt_det;
        let mut out = KForm::zero(n, n - k);
        let coeffs = out.coeffs_mut();
        for (pos, &m) in masks(n, k).iter().enumerate() {
            let comp = full & !m;
            coeffs[index_of(n, comp)] = super::basis::merge_sign(m, comp) * factor * raised[pos];
        }
        out
    }

    /// Inverse of the Hodge star, `(-1)^{k(n-k)} *`.
    pub fn hodge_inverse(&self, a: &KForm) -> KForm {
        let k = a.grade();
        let s = if (k * (self.dim - k)).is_multiple_of(2) { 1.0 } else { -1.0 };
        self.hodge(a) * s
    }

    /// `v^flat = g(v, .)`.
    pub fn flat(&self, v: &[f64]) -> KForm {
        assert_eq!(v.len(), self.dim);
        let out = &self.gram * DVector::from_column_slice(v);
        KForm::from_coeffs(self.dim, 1, out.iter().copied().collect())
    }

    /// Inverse of [`Metric::flat`].
    pub fn sharp(&self, a: &KForm) -> Vec<f64> {
        assert_eq!(a.grade(), 1, "sharp expects a 1-form");
        assert_eq!(a.dim(), self.dim);
        (&self.inverse * DVector::from_column_slice(a.coeffs())).iter().copied().collect()
    }

    /// `F^sharp` with `g(F^sharp u, v) = F(u, v)`.
    ///
    /// With the identity metric and `F = e^{12}` this sends `e_1` to `e_2` and
    /// `e_2` to `-e_1`, and `(I + F^sharp)^* e^j = e^j - i(e_j) F`.
    pub fn sharp2(&self, f: &KForm) -> LinearMap {
        assert_eq!(f.grade(), 2, "sharp2 expects a 2-form");
        assert_eq!(f.dim(), self.dim);
        let a = skew_matrix(f);
        // g(X u, v) = u^T X^T G v = u^T A v  =>  X = G^{-1} A^T.
        LinearMap::new(&self.inverse * a.transpose())
    }

    /// Pull the metric back along `l`: `(l^* g)(u, v) = g(l u, l v)`.
    pub fn pullback(&self, l: &LinearMap) -> Result<Metric> {
        let m = l.matrix();
        let gram = m.transpose() * &self.gram * m;
        let sym = (&gram + gram.transpose()) * 0.5;
        let orientation = if m.determinant() >= 0.0 { self.orientation } else { -self.orientation };
        Metric::new(sym, orientation as i8)
    }
}

/// Full skew matrix `A[(i, j)] = F(e_i, e_j)` of a 2-form.
pub fn skew_matrix(f: &KForm) -> DMatrix<f64> {
    assert_eq!(f.grade(), 2);
    let n = f.dim();
    let mut a = DMatrix::zeros(n, n);
    for (idx, c) in f.terms() {
        a[(idx[0], idx[1])] = c;
        a[(idx[1], idx[0])] = -c;
    }
    a
}

/// 2-form with `F(e_i, e_j) = A[(i, j)]` (upper triangle of `a`).
pub fn two_form_from_matrix(a: &DMatrix<f64>) -> KForm {
    let n = a.nrows();
    let mut f = KForm::zero(n, 2);
    for (pos, &m) in masks(n, 2).iter().enumerate() {
        let i = m.trailing_zeros() as usize;
        let j = 15 - (m.leading_zeros() as usize);
        f.coeffs_mut()[pos] = a[(i, j)];
    }
    f
}
