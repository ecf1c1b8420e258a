//! Small dense helpers shared by the algebraic modules.

use nalgebra::{ComplexField, DMatrix};

use crate::exterior::basis::{self, indices};

/// Determinant of the square submatrix `m[rows, cols]`, at most 8x8.
pub(crate) fn minor_det(m: &DMatrix<f64>, rows: u16, cols: u16) -> f64 {
    let r: Vec<usize> = indices(rows).collect();
    let c: Vec<usize> = indices(cols).collect();
    let k = r.len();
    debug_assert_eq!(k, c.len());
    match k {
        0 => 1.0,
        1 => m[(r[0], c[0])],
        2 => m[(r[0], c[0])] * m[(r[1], c[1])] - m[(r[0], c[1])] * m[(r[1], c[0])],
        _ => {
            let mut a = [0.0f64; 64];
            for i in 0..k {
                for j in 0..k {
                    a[i * k + j] = m[(r[i], c[j])];
                }
            }
            det_in_place(&mut a, k)
        }
    }
}

fn det_in_place(a: &mut [f64; 64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let mut piv = col;
        for row in col + 1..k {
            if a[row * k + col].abs() > a[piv * k + col].abs() {
                piv = row;
            }
        }
        let p = a[piv * k + col];
        if p == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..k {
                a.swap(col * k + j, piv * k + j);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..k {
            let f = a[row * k + col] / p;
            if f != 0.0 {
                for j in col..k {
                    a[row * k + j] -= f * a[col * k + j];
                }
            }
        }
    }
    det
}

/// k-th compound matrix: entry `(I, J)` is `det(m[I, J])` with multi-indices
/// in the normative lexicographic order.
pub(crate) fn compound(m: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = m.nrows();
    let masks = basis::masks(n, k);
    let len = masks.len();
    DMatrix::from_fn(len, len, |i, j| minor_det(m, masks[i], masks[j]))
}

/// Numerical rank by singular-value thresholding relative to the largest
/// singular value. The zero matrix has rank 0.
pub fn numerical_rank<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel: f64) -> usize {
    let sv = singular_values(m);
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

/// Dimension of the kernel of `m` (as a map on its column space).
pub fn kernel_dim<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel: f64) -> usize {
    m.ncols() - numerical_rank(m, rel)
}

pub(crate) fn singular_values<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minor_det_matches_nalgebra() {
        let m = DMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.7 + (i == j) as u8 as f64);
        let full = basis::mask_from(&[0, 1, 2, 3, 4, 5]);
        assert!((minor_det(&m, full, full) - m.determinant()).abs() < 1e-9);
        let rows = basis::mask_from(&[1, 3, 4]);
        let cols = basis::mask_from(&[0, 2, 5]);
        let sub = DMatrix::from_fn(3, 3, |i, j| m[([1, 3, 4][i], [0, 2, 5][j])]);
        assert!((minor_det(&m, rows, cols) - sub.determinant()).abs() < 1e-12);
    }

    #[test]
    fn compound_is_multiplicative() {
        let a = DMatrix::from_fn(5, 5, |i, j| ((i + 2 * j) % 4) as f64 * 0.3 - 0.2);
        let b = DMatrix::from_fn(5, 5, |i, j| ((3 * i + j) % 5) as f64 * 0.25 - 0.5);
        for k in 0..=5 {
            let lhs = compound(&(&a * &b), k);
            let rhs = compound(&a, k) * compound(&b, k);
            assert!((lhs - rhs).abs().max() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn rank_of_zero_is_zero() {
        assert_eq!(numerical_rank(&DMatrix::<f64>::zeros(3, 4), 1e-10), 0);
        assert_eq!(numerical_rank(&DMatrix::<f64>::identity(3, 3), 1e-10), 3);
    }
}
