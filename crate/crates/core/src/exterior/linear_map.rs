use nalgebra::{DMatrix, DVector};

use super::KForm;
use crate::linalg::compound;

/// A linear endomorphism of `R^n`, acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    matrix: DMatrix<f64>,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "linear map must be square");
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn scaling(dim: usize, c: f64) -> Self {
        Self::new(DMatrix::identity(dim, dim) * c)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(v)).iter().copied().collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap::new(&self.matrix * &other.matrix)
    }

    /// `I + self`.
    pub fn plus_identity(&self) -> LinearMap {
        LinearMap::new(&self.matrix + DMatrix::identity(self.dim(), self.dim()))
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// `(L^* a)(v_1, ..., v_k) = a(L v_1, ..., L v_k)`.
    ///
    /// Coefficients transform by the k-th compound matrix:
    /// `(L^* a)_J = sum_I a_I det L[I, J]`.
    pub fn pullback(&self, a: &KForm) -> KForm {
        assert_eq!(a.dim(), self.dim(), "dimension mismatch in pullback");
        let c = compound(&self.matrix, a.grade());
        let out = c.transpose() * DVector::from_column_slice(a.coeffs());
        KForm::from_coeffs(a.dim(), a.grade(), out.iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneity() {
        let e123 = KForm::from_labels(7, &[(1.0, "123")]);
        assert_eq!(LinearMap::scaling(7, 2.0).pullback(&e123), e123.clone() * 8.0);
        assert_eq!(LinearMap::identity(7).pullback(&e123), e123);
    }

    #[test]
    fn one_forms_pull_back_by_rows() {
        // L e_1 = e_1 + 3 e_2  =>  L^* e^2 = 3 e^1 + e^2.
        let l = LinearMap::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 3.0, 1.0]));
        let e2 = KForm::covector(2, 1);
        assert_eq!(l.pullback(&e2), KForm::from_coeffs(2, 1, vec![3.0, 1.0]));
    }
}
