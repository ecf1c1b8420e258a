use std::fmt;
use std::ops::{Add, AddAssign, BitXor, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::basis::{binomial, indices, index_of, mask_from, masks, merge_sign, MAX_DIM};

/// A degree-`grade` alternating form on an oriented `dim`-dimensional space.
///
/// Coefficients are dense over strictly increasing multi-indices in
/// lexicographic order, so `coeffs.len() == C(dim, grade)` always holds.
/// Indices are 0-based in the API; [`KForm::from_labels`] accepts the
/// conventional 1-based digit labels (`"257"` for `e^2 ^ e^5 ^ e^7`).
///
/// Combining forms of different dimension, or adding forms of different
/// grade, is a contract violation and panics.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKForm")]
pub struct KForm {
    dim: usize,
    grade: usize,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawKForm {
    dim: usize,
    grade: usize,
    coeffs: Vec<f64>,
}

impl TryFrom<RawKForm> for KForm {
    type Error = String;

    fn try_from(raw: RawKForm) -> Result<Self, String> {
        if raw.dim > MAX_DIM || raw.grade > raw.dim {
            return Err(format!("unsupported shape dim={} grade={}", raw.dim, raw.grade));
        }
        let want = binomial(raw.dim, raw.grade);
        if raw.coeffs.len() != want {
            return Err(format!("expected {want} coefficients, got {}", raw.coeffs.len()));
        }
        Ok(KForm { dim: raw.dim, grade: raw.grade, coeffs: raw.coeffs })
    }
}

impl KForm {
    pub fn zero(dim: usize, grade: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        assert!(grade <= dim, "grade {grade} exceeds dimension {dim}");
        Self { dim, grade, coeffs: vec![0.0; binomial(dim, grade)] }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut f = Self::zero(dim, 0);
        f.coeffs[0] = value;
        f
    }

    /// Panics unless `coeffs.len() == C(dim, grade)`.
    pub fn from_coeffs(dim: usize, grade: usize, coeffs: Vec<f64>) -> Self {
        assert!(dim <= MAX_DIM && grade <= dim);
        assert_eq!(coeffs.len(), binomial(dim, grade), "coefficient count for dim={dim} grade={grade}");
        Self { dim, grade, coeffs }
    }

    /// `e^{i_1} ^ ... ^ e^{i_k}` for 0-based indices in any order; repeated
    /// indices give zero.
    pub fn monomial(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(dim, idx.len());
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return f;
        }
        assert!(sorted.last().is_none_or(|&i| i < dim), "index out of range");
        // Parity of the sorting permutation by inversion count.
        let inversions = (0..idx.len())
            .flat_map(|a| (a + 1..idx.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| idx[a] > idx[b])
            .count();
        let pos = index_of(dim, mask_from(&sorted));
        f.coeffs[pos] = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        f
    }

    /// Sum of labelled monomials, e.g. `[(1.0, "123"), (-1.0, "257")]`.
    /// Labels are 1-based single digits.
    pub fn from_labels(dim: usize, terms: &[(f64, &str)]) -> Self {
        let mut grade = None;
        let mut out: Option<KForm> = None;
        for &(c, label) in terms {
            let idx: Vec<usize> = label
                .chars()
                .map(|ch| ch.to_digit(10).expect("digit label") as usize - 1)
                .collect();
            assert!(grade.is_none_or(|g| g == idx.len()), "mixed grades in from_labels");
            grade = Some(idx.len());
            let m = Self::monomial(dim, &idx) * c;
            out = Some(match out {
                Some(acc) => acc + m,
                None => m,
            });
        }
        out.unwrap_or_else(|| Self::zero(dim, 0))
    }

    /// `e^1 ^ ... ^ e^n`.
    pub fn volume(dim: usize) -> Self {
        let mut f = Self::zero(dim, dim);
        f.coeffs[0] = 1.0;
        f
    }

    /// Basis covector `e^i`.
    pub fn covector(dim: usize, i: usize) -> Self {
        Self::monomial(dim, &[i])
    }

    pub fn from_vector(components: &[f64]) -> Self {
        Self::from_coeffs(components.len(), 1, components.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of the sorted monomial with the given 0-based indices.
    pub fn coeff(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.grade);
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        self.coeffs[index_of(self.dim, mask_from(&sorted))]
    }

    /// Coefficient by 1-based digit label.
    pub fn coeff_label(&self, label: &str) -> f64 {
        let idx: Vec<usize> = label.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
        self.coeff(&idx)
    }

    /// Iterate `(sorted 0-based indices, coefficient)` over all basis slots.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        masks(self.dim, self.grade).iter().zip(&self.coeffs).map(|(&m, &c)| (indices(m).collect(), c))
    }

    pub(crate) fn mask_terms(&self) -> impl Iterator<Item = (u16, f64)> + '_ {
        masks(self.dim, self.grade).iter().copied().zip(self.coeffs.iter().copied())
    }

    /// Euclidean norm of the coefficient vector (the induced norm for an
    /// orthonormal basis).
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean inner product of coefficient vectors.
    pub fn dot(&self, other: &KForm) -> f64 {
        self.assert_same_shape(other);
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    fn assert_same_shape(&self, other: &KForm) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.grade, other.grade, "grade mismatch");
    }

    /// Exterior product. Overflowing the top degree yields the zero form of
    /// grade `dim`.
    pub fn wedge(&self, other: &KForm) -> KForm {
        assert_eq!(self.dim, other.dim, "dimension mismatch in wedge");
        let n = self.dim;
        if self.grade + other.grade > n {
            return KForm::zero(n, n);
        }
        let mut out = KForm::zero(n, self.grade + other.grade);
        for (ma, ca) in self.mask_terms() {
            if ca == 0.0 {
                continue;
            }
            for (mb, cb) in other.mask_terms() {
                if cb == 0.0 || ma & mb != 0 {
                    continue;
                }
                out.coeffs[index_of(n, ma | mb)] += merge_sign(ma, mb) * ca * cb;
            }
        }
        out
    }

    /// `self ^ self ^ ... ^ self` (`power` factors); the zeroth power is 1.
    pub fn wedge_power(&self, power: usize) -> KForm {
        let mut acc = KForm::scalar(self.dim, 1.0);
        for _ in 0..power {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Interior product `i(v)` with a vector given by its components.
    /// On scalars the result is the zero scalar.
    pub fn interior(&self, v: &[f64]) -> KForm {
        assert_eq!(v.len(), self.dim, "dimension mismatch in interior product");
        let n = self.dim;
        if self.grade == 0 {
            return KForm::zero(n, 0);
        }
        let mut out = KForm::zero(n, self.grade - 1);
        for (m, c) in self.mask_terms() {
            if c == 0.0 {
                continue;
            }
            for (pos, j) in indices(m).enumerate() {
                if v[j] == 0.0 {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[index_of(n, m & !(1 << j))] += sign * v[j] * c;
            }
        }
        out
    }

    /// Interior product with the basis vector `e_i`.
    pub fn interior_basis(&self, i: usize) -> KForm {
        let mut v = vec![0.0; self.dim];
        v[i] = 1.0;
        self.interior(&v)
    }

    /// Embed into a space of dimension `dim + offset` by shifting every
    /// index up by `offset`.
    pub fn shift_into(&self, dim: usize, offset: usize) -> KForm {
        assert!(self.dim + offset <= dim);
        let mut out = KForm::zero(dim, self.grade);
        for (m, c) in self.mask_terms() {
            out.coeffs[index_of(dim, m << offset)] = c;
        }
        out
    }

    pub fn scale(&self, s: f64) -> KForm {
        KForm { dim: self.dim, grade: self.grade, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}, {}>(", self.dim, self.grade)?;
        let mut first = true;
        for (idx, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let label: String = idx.iter().map(|i| char::from_digit(*i as u32 + 1, 10).unwrap()).collect();
            if label.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}e{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Add<&KForm> for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        self.assert_same_shape(rhs);
        KForm {
            dim: self.dim,
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for KForm {
    type Output = KForm;
    fn add(self, rhs: KForm) -> KForm {
        &self + &rhs
    }
}

impl Add<&KForm> for KForm {
    type Output = KForm;
    fn add(mut self, rhs: &KForm) -> KForm {
        self += rhs;
        self
    }
}

impl Sub<&KForm> for KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        &self - rhs
    }
}

impl AddAssign<&KForm> for KForm {
    fn add_assign(&mut self, rhs: &KForm) {
        self.assert_same_shape(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub<&KForm> for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self.assert_same_shape(rhs);
        KForm {
            dim: self.dim,
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(self, rhs: KForm) -> KForm {
        &self - &rhs
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(-1.0)
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &KForm {
    type Output = KForm;
    fn mul(self, s: f64) -> KForm {
        self.scale(s)
    }
}

impl Mul<f64> for KForm {
    type Output = KForm;
    fn mul(self, s: f64) -> KForm {
        self.scale(s)
    }
}

impl Mul<&KForm> for f64 {
    type Output = KForm;
    fn mul(self, f: &KForm) -> KForm {
        f.scale(self)
    }
}

/// `a ^ b` is the exterior product.
impl BitXor<&KForm> for &KForm {
    type Output = KForm;
    fn bitxor(self, rhs: &KForm) -> KForm {
        self.wedge(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_wedges() {
        let e1 = KForm::covector(3, 0);
        let e2 = KForm::covector(3, 1);
        assert_eq!(e1.wedge(&e2), KForm::monomial(3, &[0, 1]));
        assert_eq!(e2.wedge(&e1), KForm::monomial(3, &[1, 0]));
        assert_eq!(KForm::monomial(3, &[1, 0]).coeff(&[0, 1]), -1.0);

        let e12 = KForm::from_labels(4, &[(1.0, "12")]);
        let e13 = KForm::from_labels(4, &[(1.0, "13")]);
        assert!(e12.wedge(&e13).is_zero());
    }

    #[test]
    fn repeated_index_counterexample() {
        let f = KForm::from_labels(7, &[(1.0, "23"), (-1.0, "45")]);
        let g = KForm::from_labels(7, &[(1.0, "24"), (1.0, "35")]);
        assert!(f.wedge(&g).is_zero());
    }

    #[test]
    fn overflow_is_zero_top_form() {
        let a = KForm::from_labels(3, &[(1.0, "12")]);
        let b = KForm::from_labels(3, &[(1.0, "23")]);
        let w = a.wedge(&b);
        assert_eq!(w.grade(), 3);
        assert!(w.is_zero());
    }

    #[test]
    fn interior_examples() {
        let e12 = KForm::from_labels(3, &[(1.0, "12")]);
        assert_eq!(e12.interior(&[1.0, 0.0, 0.0]), KForm::covector(3, 1));
        assert_eq!(e12.interior(&[0.0, 1.0, 0.0]), -KForm::covector(3, 0));
        assert!(KForm::scalar(3, 2.0).interior(&[1.0, 1.0, 1.0]).is_zero());
    }

    #[test]
    fn labels_round_trip() {
        let f = KForm::from_labels(7, &[(2.0, "257"), (-1.0, "134")]);
        assert_eq!(f.coeff_label("257"), 2.0);
        assert_eq!(f.coeff_label("134"), -1.0);
        assert_eq!(f.coeff_label("123"), 0.0);
    }

    #[test]
    fn json_shape() {
        let f = KForm::from_labels(3, &[(1.5, "13")]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dim":3,"grade":2,"coeffs":[0.0,1.5,0.0]}"#);
        let back: KForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<KForm>(r#"{"dim":3,"grade":2,"coeffs":[1.0]}"#).is_err());
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mismatched_wedge_panics() {
        KForm::covector(3, 0).wedge(&KForm::covector(4, 0));
    }
}
