//! The contract every quantum-group model satisfies: a matrix-coefficient
//! basis t⁽ˡ⁾ᵢⱼ with Haar data, the coproduct on basis elements, the modular
//! action as a diagonal scalar, and an involution table — everything the
//! Fourier/Lᵖ layer consumes, so that layer is backend-agnostic.
//!
//! Elements of M (in the coefficient span), normal functionals ω ∈ M_* and
//! GNS vectors all carry the same kind of coefficient data and are kept as
//! distinct newtypes over [`CoeffMap`].

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::halfint::HalfInt;
use crate::params::InterpolationParams;
use crate::{Error, Result};

/// Identifier of a backend instance; coefficient data is tagged with it so
/// cross-backend operations fail loudly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BackendId(pub String);

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One level of the Peter-Weyl decomposition: a label and the block
/// dimension. For SU_q(2) the label is l and the dimension 2l+1; group
/// backends label irreps by their list position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelInfo {
    pub label: HalfInt,
    pub dim: usize,
}

impl LevelInfo {
    /// Row/column labels run over {−λ, …, λ} with λ = (dim−1)/2.
    pub fn index_bound(&self) -> HalfInt {
        HalfInt::from_twice(self.dim as i32 - 1)
    }
}

/// Index of a matrix coefficient t⁽ˡ⁾ᵢⱼ.
///
/// `i` and `j` are half-integers in {−λ, …, λ} stepping by one, where λ is
/// determined by the block dimension ((dim−1)/2; equal to `level` for
/// SU_q(2)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffIndex {
    pub level: HalfInt,
    pub i: HalfInt,
    pub j: HalfInt,
}

impl CoeffIndex {
    pub fn new(level: HalfInt, i: HalfInt, j: HalfInt) -> Self {
        CoeffIndex { level, i, j }
    }

    /// Validates i, j against a block of the given dimension.
    pub fn check_against(&self, info: &LevelInfo) -> Result<()> {
        let bound = info.index_bound();
        for x in [self.i, self.j] {
            if x.abs() > bound || !x.same_parity(bound) {
                return Err(Error::InvalidParameter(format!(
                    "coefficient index {self} invalid for block of dim {}",
                    info.dim
                )));
            }
        }
        Ok(())
    }

    /// Storage row of `i` inside the block: the top label +λ sits first, so
    /// t⁽ˡ⁾_{l,l} occupies the upper-left corner.
    pub fn storage_row(&self, info: &LevelInfo) -> usize {
        ((info.index_bound() - self.i).twice() / 2) as usize
    }

    pub fn storage_col(&self, info: &LevelInfo) -> usize {
        ((info.index_bound() - self.j).twice() / 2) as usize
    }
}

impl fmt::Display for CoeffIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t[{}]({},{})", self.level, self.i, self.j)
    }
}

/// Finitely supported coefficient data: CoeffIndex → ℂ.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffMap(BTreeMap<CoeffIndex, Complex64>);

impl CoeffMap {
    pub fn new() -> Self {
        CoeffMap(BTreeMap::new())
    }

    pub fn singleton(idx: CoeffIndex, value: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(idx, value);
        CoeffMap(m)
    }

    pub fn get(&self, idx: &CoeffIndex) -> Complex64 {
        self.0.get(idx).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn insert(&mut self, idx: CoeffIndex, value: Complex64) {
        if value.norm_sqr() == 0.0 {
            self.0.remove(&idx);
        } else {
            self.0.insert(idx, value);
        }
    }

    pub fn add_assign(&mut self, idx: CoeffIndex, value: Complex64) {
        let v = self.get(&idx) + value;
        self.insert(idx, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoeffIndex, &Complex64)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CoeffMap(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_assign(*k, *v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

macro_rules! coeff_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            pub backend: BackendId,
            pub coeffs: CoeffMap,
        }

        impl $name {
            pub fn zero(backend: BackendId) -> Self {
                $name { backend, coeffs: CoeffMap::new() }
            }

            pub fn singleton(backend: BackendId, idx: CoeffIndex, value: Complex64) -> Self {
                $name { backend, coeffs: CoeffMap::singleton(idx, value) }
            }

            pub fn get(&self, idx: &CoeffIndex) -> Complex64 {
                self.coeffs.get(idx)
            }

            pub fn scale(&self, c: Complex64) -> Self {
                $name { backend: self.backend.clone(), coeffs: self.coeffs.scale(c) }
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                check_same_backend(&self.backend, &other.backend)?;
                Ok($name { backend: self.backend.clone(), coeffs: self.coeffs.add(&other.coeffs) })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                check_same_backend(&self.backend, &other.backend)?;
                Ok($name { backend: self.backend.clone(), coeffs: self.coeffs.sub(&other.coeffs) })
            }
        }
    };
}

coeff_newtype!(
    /// Element of M inside the coefficient span: x = Σ c_{lij} t⁽ˡ⁾ᵢⱼ.
    Element
);
coeff_newtype!(
    /// Normal functional ω ∈ M_* recorded through its values ω(t⁽ˡ⁾ᵢⱼ).
    Functional
);
coeff_newtype!(
    /// GNS vector Σ c_{lij} Λ(t⁽ˡ⁾ᵢⱼ).
    GnsVector
);

pub fn check_same_backend(a: &BackendId, b: &BackendId) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::BackendMismatch {
            expected: a.0.clone(),
            got: b.0.clone(),
        })
    }
}

/// Contract for a compact quantum group model in Peter-Weyl coordinates.
///
/// All Haar-state data refers to the *left* Haar weight φ; the implemented
/// backends have φ = ψ. Backend objects are immutable after construction and
/// every query is pure, so shared concurrent use is safe.
pub trait QgBackend {
    fn id(&self) -> BackendId;

    /// Levels of the truncation, labels strictly increasing.
    fn levels(&self) -> &[LevelInfo];

    /// True when the Haar functional is a trace; the modular action is then
    /// trivial and every z-dependence degenerates.
    fn is_tracial(&self) -> bool;

    /// φ(1). A state gives 1 (up to truncation tail); counting-measure
    /// group backends give |G|.
    fn haar_of_unit(&self) -> f64;

    /// Index of the coefficient equal to the unit of M.
    fn unit_index(&self) -> CoeffIndex;

    /// φ(t_idx).
    fn haar_coefficient(&self, idx: &CoeffIndex) -> Complex64;

    /// φ(t_a · t_b).
    fn haar_product(&self, a: &CoeffIndex, b: &CoeffIndex) -> Complex64;

    /// Diagonal entry of the Haar Gram form: ⟨Λ(t_idx), Λ(t_idx)⟩ =
    /// φ(t_idx* t_idx) > 0. Off-diagonal Gram entries vanish by the
    /// orthogonality relations, which are verified against the backend in
    /// its construction tests.
    fn gram_weight(&self, idx: &CoeffIndex) -> f64;

    /// Expansion of (t_idx)* in the coefficient basis.
    fn involution(&self, idx: &CoeffIndex) -> Vec<(CoeffIndex, Complex64)>;

    /// Scalar s with σ_w(t_idx) = s · t_idx. Identically 1 for tracial
    /// backends.
    fn modular_scale(&self, idx: &CoeffIndex, w: Complex64) -> Complex64;

    /// Weighted Lᵖ norm of an element of the coefficient span against the
    /// Haar density.
    fn element_lp_norm(&self, x: &Element, params: &InterpolationParams) -> Result<f64>;

    /// Δ(t⁽ˡ⁾ᵢⱼ) = Σ_k t⁽ˡ⁾ᵢₖ ⊗ t⁽ˡ⁾ₖⱼ as the list of index pairs, all with
    /// unit coefficient.
    fn coproduct_on_basis(&self, idx: &CoeffIndex) -> Result<Vec<(CoeffIndex, CoeffIndex)>> {
        let info = self.level_info(idx.level)?;
        idx.check_against(&info)?;
        let bound = info.index_bound();
        let mut out = Vec::with_capacity(info.dim);
        let mut k = -bound;
        loop {
            out.push((
                CoeffIndex::new(idx.level, idx.i, k),
                CoeffIndex::new(idx.level, k, idx.j),
            ));
            if k == bound {
                break;
            }
            k = k + HalfInt::ONE;
        }
        Ok(out)
    }

    /// Validates that an index lies inside the truncation.
    fn check_index(&self, idx: &CoeffIndex) -> Result<()> {
        let info = self.level_info(idx.level)?;
        idx.check_against(&info)
    }

    fn level_info(&self, label: HalfInt) -> Result<LevelInfo> {
        self.levels()
            .iter()
            .find(|li| li.label == label)
            .copied()
            .ok_or_else(|| {
                Error::TruncationOverflow(format!("level {label}"), self.id().0.clone())
            })
    }

    /// φ applied to an element of the coefficient span (linear extension).
    /// Support outside the truncation is a truncation-overflow error.
    fn haar_element(&self, x: &Element) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in x.coeffs.iter() {
            self.check_index(idx)?;
            acc += c * self.haar_coefficient(idx);
        }
        Ok(acc)
    }

    /// All coefficient indices of the truncation, in storage order.
    fn all_indices(&self) -> Vec<CoeffIndex> {
        let mut out = Vec::new();
        for info in self.levels() {
            let bound = info.index_bound();
            let mut i = bound;
            loop {
                let mut j = bound;
                loop {
                    out.push(CoeffIndex::new(info.label, i, j));
                    if j == -bound {
                        break;
                    }
                    j = j - HalfInt::ONE;
                }
                if i == -bound {
                    break;
                }
                i = i - HalfInt::ONE;
            }
        }
        out
    }

    /// ⟨u, v⟩ through the diagonal Haar Gram form (linear in the first
    /// entry).
    fn gns_inner(&self, u: &GnsVector, v: &GnsVector) -> Result<Complex64> {
        check_same_backend(&u.backend, &v.backend)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, cu) in u.coeffs.iter() {
            let cv = v.coeffs.get(idx);
            acc += cu * cv.conj() * self.gram_weight(idx);
        }
        Ok(acc)
    }

    fn gns_norm(&self, u: &GnsVector) -> Result<f64> {
        Ok(self.gns_inner(u, u)?.re.max(0.0).sqrt())
    }

    /// Conjugate functional: ω̄(t_idx) = conj(ω((t_idx)*)), expanded through
    /// the involution table.
    fn conjugate_functional(&self, omega: &Functional) -> Functional {
        let mut out = Functional::zero(omega.backend.clone());
        for idx in self.all_indices() {
            let mut val = Complex64::new(0.0, 0.0);
            for (partner, c) in self.involution(&idx) {
                val += c * omega.get(&partner);
            }
            let conj = val.conj();
            if conj.norm_sqr() > 0.0 {
                out.coeffs.insert(idx, conj);
            }
        }
        out
    }

    /// The counit functional ε(t⁽ˡ⁾ᵢⱼ) = δᵢⱼ; neutral for convolution.
    fn counit(&self) -> Functional {
        let mut out = Functional::zero(self.id());
        for idx in self.all_indices() {
            if idx.i == idx.j {
                out.coeffs.insert(idx, Complex64::new(1.0, 0.0));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_positions_put_top_label_first() {
        let info = LevelInfo {
            label: HalfInt::HALF,
            dim: 2,
        };
        let top = CoeffIndex::new(HalfInt::HALF, HalfInt::HALF, HalfInt::HALF);
        assert_eq!(top.storage_row(&info), 0);
        assert_eq!(top.storage_col(&info), 0);
        let bottom = CoeffIndex::new(HalfInt::HALF, -HalfInt::HALF, -HalfInt::HALF);
        assert_eq!(bottom.storage_row(&info), 1);
    }

    #[test]
    fn index_validation() {
        let info = LevelInfo {
            label: HalfInt::ONE,
            dim: 3,
        };
        let ok = CoeffIndex::new(HalfInt::ONE, HalfInt::ZERO, HalfInt::ONE);
        assert!(ok.check_against(&info).is_ok());
        // i = 1/2 has the wrong parity for an integer level.
        let bad = CoeffIndex::new(HalfInt::ONE, HalfInt::HALF, HalfInt::ZERO);
        assert!(bad.check_against(&info).is_err());
        let out = CoeffIndex::new(HalfInt::ONE, HalfInt::from_int(2), HalfInt::ZERO);
        assert!(out.check_against(&info).is_err());
    }

    #[test]
    fn coeff_map_drops_zeros() {
        let idx = CoeffIndex::new(HalfInt::ZERO, HalfInt::ZERO, HalfInt::ZERO);
        let mut m = CoeffMap::new();
        m.insert(idx, Complex64::new(1.0, 0.0));
        m.add_assign(idx, Complex64::new(-1.0, 0.0));
        assert!(m.is_empty());
    }
}
