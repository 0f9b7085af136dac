//! Operators on ℓ²(ℕ) ⊗ L²(𝕋), truncated in the ℕ direction only: finite
//! sums x = Σ_k x_k ζᵏ with x_k ∈ B(ℂᴺ). The 𝕋 direction is exact — the
//! Haar integral over 𝕋 picks the constant Fourier mode, so no quadrature
//! enters Haar values.
//!
//! Conventions: the product convolves the ζ-degrees and multiplies slices;
//! the adjoint sends slice k to the adjoint matrix at −k.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::linalg::{schatten_norm, CMatrix};
use crate::Result;

/// Element of B(ℂᴺ) ⊗ (Laurent polynomials on 𝕋).
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentOperator {
    dim: usize,
    slices: BTreeMap<i32, CMatrix>,
}

impl LaurentOperator {
    pub fn zero(dim: usize) -> Self {
        LaurentOperator {
            dim,
            slices: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_slice(0, CMatrix::identity(dim, dim))
    }

    /// Single-slice operator m · ζᵏ.
    pub fn from_slice(degree: i32, m: CMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "slices must be square");
        let dim = m.nrows();
        let mut slices = BTreeMap::new();
        if m.iter().any(|c| c.norm_sqr() != 0.0) {
            slices.insert(degree, m);
        }
        LaurentOperator { dim, slices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slice(&self, degree: i32) -> Option<&CMatrix> {
        self.slices.get(&degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.slices.keys().copied()
    }

    /// The unique degree when the operator is homogeneous in ζ.
    pub fn sole_degree(&self) -> Option<i32> {
        let mut it = self.slices.keys();
        match (it.next(), it.next()) {
            (Some(k), None) => Some(*k),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, m) in &other.slices {
            match out.slices.get_mut(k) {
                Some(existing) => *existing += m,
                None => {
                    out.slices.insert(*k, m.clone());
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        LaurentOperator {
            dim: self.dim,
            slices: self.slices.iter().map(|(k, m)| (*k, m * c)).collect(),
        }
    }

    /// Product: (xy)_k = Σ_{k₁+k₂=k} x_{k₁} y_{k₂}.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = LaurentOperator::zero(self.dim);
        for (k1, m1) in &self.slices {
            for (k2, m2) in &other.slices {
                let k = k1 + k2;
                let prod = m1 * m2;
                match out.slices.get_mut(&k) {
                    Some(existing) => *existing += &prod,
                    None => {
                        out.slices.insert(k, prod);
                    }
                }
            }
        }
        out
    }

    /// Adjoint: x(ζ)* = Σ_k x_k† ζ^{−k} on the unit circle.
    pub fn adjoint(&self) -> Self {
        LaurentOperator {
            dim: self.dim,
            slices: self.slices.iter().map(|(k, m)| (-k, m.adjoint())).collect(),
        }
    }

    /// Largest entry modulus across slices.
    pub fn max_abs(&self) -> f64 {
        self.slices
            .values()
            .flat_map(|m| m.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Upper bound Σ_k ‖x_k‖ on the operator norm sup_t ‖x(t)‖; exact for a
    /// homogeneous operator.
    pub fn operator_norm_upper(&self) -> Result<f64> {
        let mut acc = 0.0;
        for m in self.slices.values() {
            acc += schatten_norm(m, f64::INFINITY)?;
        }
        Ok(acc)
    }

    /// Evaluates the matrix-valued symbol x(t) at the circle point e^{it}.
    pub fn evaluate(&self, theta: f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (k, m) in &self.slices {
            let phase = Complex64::new(0.0, f64::from(*k) * theta).exp();
            out += m * phase;
        }
        out
    }

    /// Frobenius norm over all slices (the L²(𝕋)-mean of ‖x(t)‖_F²).
    pub fn frobenius(&self) -> f64 {
        self.slices
            .values()
            .flat_map(|m| m.iter())
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}
