//! Dense complex matrix arithmetic: Schatten norms, powers of positive
//! diagonal densities, and the weighted Lᵖ norms
//!
//!   ‖x‖_{p,(z)} = ‖ρ^{(1/2+Re z)/p} · x · ρ^{(1/2−Re z)/p}‖_{S_p},
//!
//! which realize the interpolation-space norms in finite dimension. The
//! closed form is pinned by the anchor parameters z = −1/2, 0, +1/2 and by
//! the transport law tested in `weighted_norm_transport_is_isometric`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::halfint::HalfInt;
use crate::params::InterpolationParams;
use crate::{Error, Result};

/// Dense complex matrix used throughout.
pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for rank/singular-value decisions.
pub const SV_RELATIVE_TOL: f64 = 1e-12;

/// Returns an error when any entry is NaN or infinite.
pub fn check_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteEntries)
    }
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Schatten p-norm: (Σ σᵢ^p)^{1/p} for finite p, the largest singular value
/// for p = ∞.
pub fn schatten_norm(a: &CMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    check_finite(a)?;
    if p == 2.0 {
        // Hilbert-Schmidt norm needs no singular values.
        return Ok(a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
    }
    let sv = singular_values(a);
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    // Scale out the largest singular value to avoid overflow for large p.
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = sv.iter().map(|s| (s / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

/// Strictly positive diagonal density of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDiagonal {
    weights: Vec<f64>,
}

impl PositiveDiagonal {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty diagonal".into()));
        }
        if !weights.iter().all(|w| *w > 0.0 && w.is_finite()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(PositiveDiagonal { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn trace(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Entrywise real power, as a diagonal matrix.
    pub fn power(&self, s: f64) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.weights
                .iter()
                .map(|w| Complex64::new(w.powf(s), 0.0)),
        ))
    }
}

/// Entrywise complex power w_i^s of a positive diagonal, principal branch.
/// `diag_power(rho, 0)` is the identity and
/// `diag_power(rho, s) · diag_power(rho, -s) = I`.
pub fn diag_power(rho: &PositiveDiagonal, s: Complex64) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        rho.dim(),
        rho.weights().iter().map(|w| {
            // w > 0, so the principal branch is exp(s ln w).
            (s * w.ln()).exp()
        }),
    ))
}

/// Raw weighted Schatten norm ‖ρ^a x ρ^b‖_{S_p} with (a, b) taken from
/// `params`. No state normalization is required of ρ; the dual Haar weight
/// of a compact quantum group is an unbounded weight and reuses this kernel.
pub fn weighted_schatten_norm(
    x: &CMatrix,
    rho: &PositiveDiagonal,
    params: &InterpolationParams,
) -> Result<f64> {
    if x.nrows() != x.ncols() || x.nrows() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} against diagonal of dim {}",
            x.nrows(),
            x.ncols(),
            rho.dim()
        )));
    }
    if params.p.is_infinite() {
        // Operator norm of x itself; the weight exponents vanish.
        return schatten_norm(x, f64::INFINITY);
    }
    let (a, b) = params.weight_exponents();
    let weighted = rho.power(a) * x * rho.power(b);
    schatten_norm(&weighted, params.p)
}

/// Weighted Lᵖ norm against a Haar **state** density: requires tr ρ = 1
/// within 1e-12. Independent of Im z by construction.
pub fn weighted_lp_norm(
    x: &CMatrix,
    rho: &PositiveDiagonal,
    params: &InterpolationParams,
) -> Result<f64> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-12 {
        return Err(Error::NotAState(tr));
    }
    weighted_schatten_norm(x, rho, params)
}

/// Block-diagonal element of ⊕_l M_{d_l}(ℂ) with strictly increasing labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonal {
    blocks: Vec<(HalfInt, CMatrix)>,
}

impl BlockDiagonal {
    pub fn new(blocks: Vec<(HalfInt, CMatrix)>) -> Result<Self> {
        for w in blocks.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidParameter(
                    "block labels must be strictly increasing".into(),
                ));
            }
        }
        for (label, m) in &blocks {
            if m.nrows() != m.ncols() {
                return Err(Error::DimensionMismatch(format!(
                    "block {label} is {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            check_finite(m)?;
        }
        Ok(BlockDiagonal { blocks })
    }

    /// Zero element with the given shape (label, dimension).
    pub fn zeros(shape: &[(HalfInt, usize)]) -> Self {
        BlockDiagonal {
            blocks: shape
                .iter()
                .map(|(l, d)| (*l, CMatrix::zeros(*d, *d)))
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[(HalfInt, CMatrix)] {
        &self.blocks
    }

    pub fn block(&self, label: HalfInt) -> Option<&CMatrix> {
        self.blocks
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| m)
    }

    pub fn block_mut(&mut self, label: HalfInt) -> Option<&mut CMatrix> {
        self.blocks
            .iter_mut()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| m)
    }

    pub fn shape(&self) -> Vec<(HalfInt, usize)> {
        self.blocks.iter().map(|(l, m)| (*l, m.nrows())).collect()
    }

    fn zip_check(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(
                "block shapes differ".into(),
            ));
        }
        Ok(())
    }

    /// Blockwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_check(other)?;
        Ok(BlockDiagonal {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|((l, a), (_, b))| (*l, a * b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_check(other)?;
        Ok(BlockDiagonal {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|((l, a), (_, b))| (*l, a - b))
                .collect(),
        })
    }

    pub fn adjoint(&self) -> Self {
        BlockDiagonal {
            blocks: self.blocks.iter().map(|(l, m)| (*l, m.adjoint())).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        BlockDiagonal {
            blocks: self.blocks.iter().map(|(l, m)| (*l, m.scale(1.0) * c)).collect(),
        }
    }

    /// Largest entry modulus across all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|(_, m)| m.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest blockwise operator norm (the M̂ norm of the element).
    pub fn sup_operator_norm(&self) -> Result<f64> {
        let mut best: f64 = 0.0;
        for (_, m) in &self.blocks {
            best = best.max(schatten_norm(m, f64::INFINITY)?);
        }
        Ok(best)
    }
}
