//! Fourier-mode realisation of the deformation complex on the flat 7-torus
//! with zero curvature.
//!
//! On the mode `e^{i<k,x>}` the exterior derivative is `i k^flat ^ .`, so
//! every operator becomes a small constant matrix. The blocks below keep
//! the factor `i`; kernel counts use the real factor, which has the same
//! kernel.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::exterior::{binomial, KForm, Metric};
use crate::g2::G2Data;

/// First Betti number of `T^7`.
pub const B1: usize = 7;

/// Relative singular-value threshold for kernels.
pub const KERNEL_TOL: f64 = 1e-10;

/// Matrices of the complex at a single Fourier mode. Forms of degree six
/// are written in the lexicographic basis of `Lambda^6`.
#[derive(Clone, Debug)]
pub struct ModeBlock {
    pub k: [i64; 7],
    /// `d` on functions, 7x1.
    pub d0: DMatrix<Complex64>,
    /// `d` on 1-forms, 21x7.
    pub d1: DMatrix<Complex64>,
    /// `a -> C da ^ *phi`, 7x7.
    pub d1_prime: DMatrix<Complex64>,
    /// `d^*` on 1-forms, 1x7.
    pub d_star1: DMatrix<Complex64>,
}

/// Real factors of the blocks for each basis covector `e^j`; a block at
/// mode `k` is `i sum_j k_j (factor_j)`.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    metric: Metric,
    constant: f64,
    d1: [DMatrix<f64>; 7],
    d1_prime: [DMatrix<f64>; 7],
    d1_prime_seven: [DMatrix<f64>; 7],
    d_star1: [DMatrix<f64>; 7],
    star6_to_1: DMatrix<f64>,
}

fn basis_form(dim: usize, grade: usize, i: usize) -> KForm {
    let mut c = vec![0.0; binomial(dim, grade)];
    c[i] = 1.0;
    KForm::from_coeffs(dim, grade, c)
}

fn matrix_of(rows: usize, cols: usize, src_grade: usize, f: impl Fn(&KForm) -> KForm) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    for c in 0..cols {
        let out = f(&basis_form(7, src_grade, c));
        assert_eq!(out.coeffs().len(), rows);
        m.column_mut(c).copy_from_slice(out.coeffs());
    }
    m
}

impl ModeOperators {
    /// Operators for the G2-structure `g` with `D1' = C d . ^ *phi`.
    pub fn new(g: &G2Data, constant: f64) -> Self {
        let m = g.metric().clone();
        let psi = g.star_phi();
        let e = |j: usize| KForm::covector(7, j);
        let d1 = std::array::from_fn(|j| matrix_of(21, 7, 1, |a| e(j).wedge(a)));
        let d1_prime = std::array::from_fn(|j| matrix_of(7, 7, 1, |a| e(j).wedge(a).wedge(psi) * constant));
        let d1_prime_seven = std::array::from_fn(|j| {
            matrix_of(7, 7, 1, |a| g.apply(g.proj2_7(), &e(j).wedge(a)).wedge(psi) * constant)
        });
        // d^* a = -*(d *a) on 1-forms in dimension 7.
        let d_star1 = std::array::from_fn(|j| matrix_of(1, 7, 1, |a| m.hodge(&e(j).wedge(&m.hodge(a))) * -1.0));
        let star6_to_1 = matrix_of(7, 7, 6, |a| m.hodge(a));
        Self { metric: m, constant, d1, d1_prime, d1_prime_seven, d_star1, star6_to_1 }
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    fn combine(parts: &[DMatrix<f64>; 7], k: &[i64; 7]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(parts[0].nrows(), parts[0].ncols());
        for (p, &kj) in parts.iter().zip(k) {
            if kj != 0 {
                out += p * kj as f64;
            }
        }
        out
    }

    /// Real factor of `D1'` at mode `k`.
    pub fn d1_prime_real(&self, k: &[i64; 7]) -> DMatrix<f64> {
        Self::combine(&self.d1_prime, k)
    }

    /// `D1'` composed with the projection onto `Lambda^2_7`, real factor.
    pub fn d1_prime_through_seven(&self, k: &[i64; 7]) -> DMatrix<f64> {
        Self::combine(&self.d1_prime_seven, k)
    }

    pub fn block(&self, k: [i64; 7]) -> ModeBlock {
        let i = Complex64::i();
        let cx = |m: DMatrix<f64>| m.map(|v| i * v);
        let kf: Vec<f64> = k.iter().map(|&x| x as f64).collect();
        ModeBlock {
            k,
            d0: cx(DMatrix::from_column_slice(7, 1, &kf)),
            d1: cx(Self::combine(&self.d1, &k)),
            d1_prime: cx(Self::combine(&self.d1_prime, &k)),
            d_star1: cx(Self::combine(&self.d_star1, &k)),
        }
    }

    /// Real factor of the stacked operator `(D1', d^*)`.
    fn stacked(&self, k: &[i64; 7]) -> SMatrix<f64, 8, 7> {
        let mut s = SMatrix::<f64, 8, 7>::zeros();
        for (j, &kj) in k.iter().enumerate() {
            if kj == 0 {
                continue;
            }
            let kj = kj as f64;
            for c in 0..7 {
                for r in 0..7 {
                    s[(r, c)] += kj * self.d1_prime[j][(r, c)];
                }
                s[(7, c)] += kj * self.d_star1[j][(0, c)];
            }
        }
        s
    }

    /// Dimension of `ker D1' ∩ ker d^*` on 1-forms at mode `k`.
    pub fn harmonic_kernel(&self, k: &[i64; 7]) -> usize {
        let sv = self.stacked(k).singular_values();
        let max = sv.max();
        if max == 0.0 {
            return 7;
        }
        7 - sv.iter().filter(|&&s| s > KERNEL_TOL * max).count()
    }

    /// Formal adjoint of `D1'` at mode `k` with respect to the induced inner
    /// products on `Lambda^1` and `Lambda^6`.
    pub fn adjoint_block(&self, k: &[i64; 7]) -> DMatrix<Complex64> {
        let p = self.d1_prime_real(k);
        let c1 = self.metric.form_gram(1);
        let c6 = self.metric.form_gram(6);
        let adj = c1.try_inverse().expect("cometric is invertible") * p.transpose() * c6;
        adj.map(|v| Complex64::new(0.0, -v))
    }

    /// `* D1' *` at mode `k`, a map from `Lambda^6` to `Lambda^1`.
    pub fn star_conjugate_block(&self, k: &[i64; 7]) -> DMatrix<Complex64> {
        let p = self.d1_prime_real(k);
        (&self.star6_to_1 * p * &self.star6_to_1).map(|v| Complex64::new(0.0, v))
    }
}

/// The blocks of the complex for the G2-structure `g` at mode `k`, with
/// constant `C = 1`.
pub fn mode_block(k: [i64; 7], g: &G2Data) -> ModeBlock {
    ModeOperators::new(g, 1.0).block(k)
}

/// Harmonic dimension counts up to `|k|_inf <= cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub cutoff: usize,
    #[serde(rename = "dim_check_H1")]
    pub dim_check_h1: usize,
    #[serde(rename = "dim_H2")]
    pub dim_h2: i64,
    pub b1: usize,
}

/// All integer vectors with `|k|_inf <= cutoff`.
pub fn modes(cutoff: usize) -> impl ParallelIterator<Item = [i64; 7]> {
    let side = 2 * cutoff as u64 + 1;
    let total = side.pow(7);
    (0..total).into_par_iter().map(move |mut idx| {
        let mut k = [0i64; 7];
        for slot in k.iter_mut() {
            *slot = (idx % side) as i64 - cutoff as i64;
            idx /= side;
        }
        k
    })
}

/// Sum of per-mode kernel dimensions of `(D1', d^*)` over all modes with
/// `|k|_inf <= cutoff`.
pub fn harmonic_dim(cutoff: usize, g: &G2Data) -> CohomologySummary {
    harmonic_dim_with(cutoff, &ModeOperators::new(g, 1.0))
}

pub fn harmonic_dim_with(cutoff: usize, ops: &ModeOperators) -> CohomologySummary {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    let dim: usize = modes(cutoff).map(|k| ops.harmonic_kernel(&k)).sum();
    CohomologySummary { cutoff, dim_check_h1: dim, dim_h2: dim as i64 - B1 as i64, b1: B1 }
}

fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.iter().all(|z| z.norm() == 0.0) {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `|| (D1'(k))^H - (* D1' *)(k) ||`, relative to `||(D1'(k))^H||`: the formal
/// adjoint identity read on a single mode.
pub fn adjoint_check(k: [i64; 7], ops: &ModeOperators) -> f64 {
    adjoint_deviation(&k, &k, ops)
}

/// The same comparison with the right side read at mode `-k`. Since the
/// blocks are odd in `k` this equals `2` for every `k != 0`.
pub fn reflected_adjoint_check(k: [i64; 7], ops: &ModeOperators) -> f64 {
    let minus: [i64; 7] = std::array::from_fn(|i| -k[i]);
    adjoint_deviation(&k, &minus, ops)
}

fn adjoint_deviation(k: &[i64; 7], other: &[i64; 7], ops: &ModeOperators) -> f64 {
    let lhs = ops.adjoint_block(k);
    let rhs = ops.star_conjugate_block(other);
    let scale = operator_norm(&lhs);
    crate::Tolerance::default().residual(operator_norm(&(lhs - rhs)), scale)
}

/// `|| D1' - T (pi_7 d) ||` at mode `k`: wedging with `*phi` only sees the
/// `Lambda^2_7` part of `da`.
pub fn diagram_residual(k: [i64; 7], ops: &ModeOperators) -> f64 {
    (ops.d1_prime_real(&k) - ops.d1_prime_through_seven(&k)).amax()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::standard_g2;
    use crate::sampling::{near_identity, sample_rng};
    use rand::Rng;

    fn ops() -> ModeOperators {
        ModeOperators::new(standard_g2(), 1.0)
    }

    fn random_mode<R: Rng>(rng: &mut R) -> [i64; 7] {
        std::array::from_fn(|_| rng.random_range(-4..=4))
    }

    fn cnorm(m: &DMatrix<Complex64>) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    #[test]
    fn zero_mode_vanishes() {
        let b = mode_block([0; 7], standard_g2());
        for m in [&b.d0, &b.d1, &b.d1_prime, &b.d_star1] {
            assert_eq!(cnorm(m), 0.0);
        }
        assert_eq!(ops().harmonic_kernel(&[0; 7]), 7);
        assert_eq!(adjoint_check([0; 7], &ops()), 0.0);
    }

    #[test]
    fn axis_mode_has_no_kernel() {
        assert_eq!(ops().harmonic_kernel(&[1, 0, 0, 0, 0, 0, 0]), 0);
    }

    #[test]
    fn complex_property() {
        let o = ops();
        let mut rng = sample_rng(1, "torus", 0);
        for _ in 0..100 {
            let b = o.block(random_mode(&mut rng));
            assert!(cnorm(&(&b.d1_prime * &b.d0)) < 1e-12);
            assert!(cnorm(&(&b.d1 * &b.d0)) < 1e-12);
        }
    }

    #[test]
    fn diagram_commutes() {
        let o = ops();
        let mut rng = sample_rng(2, "torus", 0);
        for _ in 0..20 {
            assert!(diagram_residual(random_mode(&mut rng), &o) < 1e-12);
        }
    }

    #[test]
    fn codifferential_is_contraction() {
        // d^* a = -i <k, a> on the mode k.
        let b = mode_block([1, 2, 0, 0, -1, 0, 3], standard_g2());
        let expect = [1.0, 2.0, 0.0, 0.0, -1.0, 0.0, 3.0];
        for (z, e) in b.d_star1.iter().zip(expect) {
            assert!((z - Complex64::new(0.0, -e)).norm() < 1e-14);
        }
    }

    #[test]
    fn adjoint_on_random_modes() {
        let o = ops();
        let mut rng = sample_rng(3, "torus", 0);
        for _ in 0..100 {
            let k = random_mode(&mut rng);
            assert!(adjoint_check(k, &o) < 1e-12);
            if k != [0; 7] {
                assert!((reflected_adjoint_check(k, &o) - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn blocks_are_odd_in_k() {
        let o = ops();
        let k = [2, -1, 0, 1, 3, 0, -2];
        let minus: [i64; 7] = std::array::from_fn(|i| -k[i]);
        let sum = o.star_conjugate_block(&k) + o.star_conjugate_block(&minus);
        assert_eq!(cnorm(&sum), 0.0);
    }

    #[test]
    fn cohomology_small_cutoffs() {
        let g = standard_g2();
        for cutoff in 1..=2 {
            let s = harmonic_dim(cutoff, g);
            assert_eq!((s.dim_check_h1, s.dim_h2, s.b1), (7, 0, 7));
        }
    }

    #[test]
    fn constant_does_not_change_kernels() {
        let s = harmonic_dim_with(1, &ModeOperators::new(standard_g2(), -2.0));
        assert_eq!(s.dim_check_h1, 7);
    }

    #[test]
    fn perturbed_structure() {
        let mut rng = sample_rng(4, "torus", 0);
        let l = near_identity(&mut rng, 7, 0.05);
        let g = G2Data::from_phi(l.pullback(standard_g2().phi())).unwrap();
        assert!(!g.metric().is_identity());
        let o = ModeOperators::new(&g, 1.0);
        assert_eq!(harmonic_dim_with(1, &o).dim_check_h1, 7);
        for _ in 0..10 {
            let k = random_mode(&mut rng);
            assert!(adjoint_check(k, &o) < 1e-10);
            if k != [0; 7] {
                assert!((reflected_adjoint_check(k, &o) - 2.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn summary_json_names() {
        let s = CohomologySummary { cutoff: 1, dim_check_h1: 7, dim_h2: 0, b1: 7 };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"cutoff":1,"dim_check_H1":7,"dim_H2":0,"b1":7}"#);
    }
}
