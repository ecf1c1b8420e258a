use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{KForm, LinearMap, Metric};

/// A complexified form `re + i im`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CForm {
    pub re: KForm,
    pub im: KForm,
}

impl CForm {
    pub fn new(re: KForm, im: KForm) -> Self {
        assert_eq!((re.dim(), re.grade()), (im.dim(), im.grade()), "shape mismatch in complex form");
        Self { re, im }
    }

    pub fn real(re: KForm) -> Self {
        let im = KForm::zero(re.dim(), re.grade());
        Self { re, im }
    }

    pub fn imaginary(im: KForm) -> Self {
        let re = KForm::zero(im.dim(), im.grade());
        Self { re, im }
    }

    pub fn zero(dim: usize, grade: usize) -> Self {
        Self::real(KForm::zero(dim, grade))
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn grade(&self) -> usize {
        self.re.grade()
    }

    pub fn wedge(&self, other: &CForm) -> CForm {
        CForm {
            re: &self.re.wedge(&other.re) - &self.im.wedge(&other.im),
            im: &self.re.wedge(&other.im) + &self.im.wedge(&other.re),
        }
    }

    pub fn wedge_power(&self, power: usize) -> CForm {
        let mut acc = CForm::real(KForm::scalar(self.dim(), 1.0));
        for _ in 0..power {
            acc = acc.wedge(self);
        }
        acc
    }

    pub fn scale(&self, z: Complex64) -> CForm {
        CForm {
            re: &self.re * z.re - &self.im * z.im,
            im: &self.re * z.im + &self.im * z.re,
        }
    }

    pub fn conj(&self) -> CForm {
        CForm { re: self.re.clone(), im: -&self.im }
    }

    pub fn pullback(&self, l: &LinearMap) -> CForm {
        CForm { re: l.pullback(&self.re), im: l.pullback(&self.im) }
    }

    /// Coefficient of the top-degree monomial as a complex number.
    pub fn top_coeff(&self) -> Complex64 {
        assert_eq!(self.grade(), self.dim(), "top_coeff expects a top-degree form");
        Complex64::new(self.re.coeffs()[0], self.im.coeffs()[0])
    }

    /// Hermitian norm `sqrt(|re|^2 + |im|^2)`.
    pub fn norm(&self, g: &Metric) -> f64 {
        (g.inner(&self.re, &self.re) + g.inner(&self.im, &self.im)).sqrt()
    }
}

impl Add<&CForm> for &CForm {
    type Output = CForm;
    fn add(self, rhs: &CForm) -> CForm {
        CForm { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&CForm> for &CForm {
    type Output = CForm;
    fn sub(self, rhs: &CForm) -> CForm {
        CForm { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dz_wedge_dzbar() {
        // dz = e1 + i e2, dz ^ dzbar = -2i e12.
        let dz = CForm::new(KForm::covector(2, 0), KForm::covector(2, 1));
        let w = dz.wedge(&dz.conj());
        assert_eq!(w.top_coeff(), Complex64::new(0.0, -2.0));
    }
}
