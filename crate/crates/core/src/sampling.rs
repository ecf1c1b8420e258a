//! Seeded random generators for forms, metrics and group elements.
//!
//! Every stream is a ChaCha generator derived from `(seed, label, index)`,
//! so a sample can be regenerated independently of the order in which
//! samples are drawn (and of thread scheduling).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::exterior::{binomial, KForm, LinearMap, Metric};
use crate::g2::G2Data;

pub type SampleRng = ChaCha8Rng;

/// Range of normal-form eigenvalue samples.
pub const LAMBDA_RANGE: f64 = 3.0;

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// The generator for sample `index` of the stream named `label`.
pub fn sample_rng(seed: u64, label: &str, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(label));
    rng.set_stream(index);
    rng
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * normal(rng)).collect()
}

/// A form with independent standard normal coefficients times `scale`.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, dim: usize, grade: usize, scale: f64) -> KForm {
    KForm::from_coeffs(dim, grade, random_vector(rng, binomial(dim, grade), scale))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| scale * normal(rng))
}

/// A well-conditioned random metric: `I + B B^T / n` with `B` standard
/// normal, and a random orientation.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Metric {
    let b = random_matrix(rng, dim, 1.0);
    let gram = DMatrix::identity(dim, dim) + &b * b.transpose() / dim as f64;
    let gram = (&gram + gram.transpose()) * 0.5;
    let orientation = if rng.random::<bool>() { 1 } else { -1 };
    Metric::new(gram, orientation).expect("I + BB^T is positive-definite")
}

/// `I + eps * N` with `N` standard normal.
pub fn near_identity<R: Rng + ?Sized>(rng: &mut R, dim: usize, eps: f64) -> LinearMap {
    LinearMap::new(DMatrix::identity(dim, dim) + random_matrix(rng, dim, eps))
}

/// Uniform sample in `[-LAMBDA_RANGE, LAMBDA_RANGE]`.
pub fn random_lambda<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Uniform::new_inclusive(-LAMBDA_RANGE, LAMBDA_RANGE).unwrap().sample(rng)
}

/// `(l1, l2, -l1 - l2)` with `l1, l2` uniform.
pub fn zero_sum_lambdas<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let a = random_lambda(rng);
    let b = random_lambda(rng);
    [a, b, -a - b]
}

/// Projection of a random 2-form onto `Lambda^2_14`.
pub fn random_lambda214<R: Rng + ?Sized>(rng: &mut R, g: &G2Data, scale: f64) -> KForm {
    g.apply(g.proj2_14(), &random_form(rng, 7, 2, scale))
}

/// A random element of G2 as `exp(beta^sharp)` for random `beta` in
/// `Lambda^2_14`. The candidate is returned only if its pullback fixes
/// `phi` to `1e-9`.
pub fn random_g2_element<R: Rng + ?Sized>(rng: &mut R, g: &G2Data, scale: f64) -> Option<LinearMap> {
    let beta = random_lambda214(rng, g, scale);
    let x = g.metric().sharp2(&beta);
    let l = LinearMap::new(x.matrix().clone().exp());
    let moved = l.pullback(g.phi()) - g.phi();
    (moved.max_abs() < 1e-9).then_some(l)
}

/// Haar-distributed `n x n` unitary matrix (QR of a complex Gaussian with
/// the phases of `R`'s diagonal divided out).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(n, n, |_, _| Complex64::new(normal(rng), normal(rng)));
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::standard_g2;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = random_vector(&mut sample_rng(42, "dhym", 3), 5, 1.0);
        let b: Vec<f64> = random_vector(&mut sample_rng(42, "dhym", 3), 5, 1.0);
        let c: Vec<f64> = random_vector(&mut sample_rng(42, "dhym", 4), 5, 1.0);
        let d: Vec<f64> = random_vector(&mut sample_rng(42, "torus", 3), 5, 1.0);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn g2_elements_fix_phi_and_metric() {
        let g = standard_g2();
        let mut rng = sample_rng(1, "g2", 0);
        let mut accepted = 0;
        for _ in 0..20 {
            if let Some(l) = random_g2_element(&mut rng, g, 0.5) {
                let m = l.matrix();
                assert!((m.transpose() * m - DMatrix::<f64>::identity(7, 7)).amax() < 1e-10);
                assert!((l.determinant() - 1.0).abs() < 1e-10);
                accepted += 1;
            }
        }
        assert_eq!(accepted, 20);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(&mut sample_rng(7, "u", 0), 3);
        let id = u.adjoint() * &u;
        assert!((id - DMatrix::<Complex64>::identity(3, 3)).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn zero_sum() {
        let l = zero_sum_lambdas(&mut sample_rng(0, "l", 0));
        assert_eq!(l[0] + l[1] + l[2], 0.0);
    }
}
