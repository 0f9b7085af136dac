//! The Fourier/Lᵖ layer over any backend: left functionals _xφ = φ(·x),
//! GNS representatives ξ(ω), the transforms F₁/F₂/Fₚ, the Plancherel
//! calibration of the dual Haar weight, convolution and its module actions,
//! the Izumi transport isometry between interpolation parameters, and the
//! z-sweep experiment on SU_q(2).
//!
//! The multiplicative unitary W is never materialized: every use of it in
//! the theory reduces to Peter-Weyl coordinates, where λ(ω) is the block
//! matrix of values ω(t⁽ˡ⁾ᵢⱼ) and the convolution theorem
//! F₁(ω∗θ) = F₁(ω)·F₁(θ) is an exact finite sum.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::backend::{
    check_same_backend, BackendId, CoeffIndex, Element, Functional, GnsVector, QgBackend,
};
use crate::halfint::HalfInt;
use crate::linalg::{diag_power, weighted_schatten_norm, BlockDiagonal, PositiveDiagonal};
use crate::params::InterpolationParams;
use crate::suq2::Suq2Backend;
use crate::{Error, Result};

const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// Element of the dual algebra M̂ ≅ ⊕_l M_{d_l}(ℂ).
#[derive(Debug, Clone)]
pub struct DualElement {
    pub backend: BackendId,
    pub blocks: BlockDiagonal,
}

impl DualElement {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same_backend(&self.backend, &other.backend)?;
        Ok(DualElement {
            backend: self.backend.clone(),
            blocks: self.blocks.mul(&other.blocks)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_backend(&self.backend, &other.backend)?;
        Ok(DualElement {
            backend: self.backend.clone(),
            blocks: self.blocks.sub(&other.blocks)?,
        })
    }
}

/// Plancherel-calibrated dual Haar weight: per-level positive diagonals D̂⁽ˡ⁾
/// with φ̂(y) = Σ_l tr(D̂⁽ˡ⁾ y⁽ˡ⁾).
#[derive(Debug, Clone)]
pub struct DualWeight {
    pub backend: BackendId,
    diagonals: Vec<(HalfInt, PositiveDiagonal)>,
}

impl DualWeight {
    pub fn diagonal(&self, label: HalfInt) -> Option<&PositiveDiagonal> {
        self.diagonals
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, d)| d)
    }

    /// φ̂ of a dual element: Σ_l tr(D̂⁽ˡ⁾ y⁽ˡ⁾).
    pub fn apply(&self, y: &DualElement) -> Result<Complex64> {
        check_same_backend(&self.backend, &y.backend)?;
        let mut acc = ZERO_C;
        for (label, d) in &self.diagonals {
            let block = y
                .blocks
                .block(*label)
                .ok_or_else(|| Error::DimensionMismatch(format!("missing block {label}")))?;
            for (r, w) in d.weights().iter().enumerate() {
                acc += block[(r, r)] * *w;
            }
        }
        Ok(acc)
    }
}

/// Result of the Lᵖ Fourier transform with both norms of the
/// Hausdorff-Young contract.
#[derive(Debug, Clone)]
pub struct FpResult {
    pub dual: DualElement,
    pub primal_norm: f64,
    pub dual_norm: f64,
}

impl FpResult {
    /// Margin of dual_norm ≤ primal_norm; negative values beyond tolerance
    /// are a reported violation, never silently accepted.
    pub fn hausdorff_young_margin(&self) -> f64 {
        self.primal_norm - self.dual_norm
    }

    pub fn hausdorff_young_ok(&self, tol: f64) -> bool {
        self.dual_norm <= self.primal_norm + tol
    }
}

/// ω ∗ (_xφ) together with the two contract residuals of the convolution
/// theorem: `xi_residual` compares ξ(ω∗_xφ) against the calibrated dual
/// action of F₁(ω) on Λ(x); `fourier_residual` compares F₁(ω∗_xφ) against
/// the blockwise product F₁(ω)·F₁(_xφ).
#[derive(Debug, Clone)]
pub struct ModuleActionResult {
    pub functional: Functional,
    pub xi_residual: f64,
    pub fourier_residual: f64,
    pub lp_norm_in: f64,
    pub lp_norm_out: f64,
    pub omega_l1_norm: f64,
}

/// Which α-power family the z-sweep drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// αⁿ = t^{(n/2)}_{n/2,n/2}.
    Lowering,
    /// (α*)ⁿ = t^{(n/2)}_{−n/2,−n/2}.
    Raising,
}

impl SweepFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepFamily::Lowering => "lowering",
            SweepFamily::Raising => "raising",
        }
    }
}

/// Output of the z-sweep at one z: the norm ratios r_n of
/// U_{(z')}F₂U_{(z)}* on the α-power family, measured against the
/// normalized reference Λ(αⁿ), and the fitted slope of ln r_n.
#[derive(Debug, Clone)]
pub struct ZsweepResult {
    pub z: Complex64,
    pub family: SweepFamily,
    pub ratios: Vec<(u32, f64)>,
    pub fitted_slope: f64,
    pub expected_slope: f64,
}

/// Backend plus calibrated dual weight; all Fourier operations live here.
///
/// Calibration runs once in `new`; afterwards every method is pure, so a
/// context can be shared across threads for parameter sweeps.
pub struct FourierContext<'a, B: QgBackend> {
    backend: &'a B,
    dual_weight: DualWeight,
    indices: Vec<CoeffIndex>,
    /// Dense pair-product matrix T[a][b] = φ(t_a t_b) and its LU, used to
    /// invert x ↦ _xφ.
    pair_lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl<'a, B: QgBackend> FourierContext<'a, B> {
    pub fn new(backend: &'a B) -> Result<Self> {
        let indices = backend.all_indices();
        let n = indices.len();
        let mut pair = DMatrix::<Complex64>::zeros(n, n);
        for (ai, a) in indices.iter().enumerate() {
            for (bi, b) in indices.iter().enumerate() {
                pair[(ai, bi)] = backend.haar_product(a, b);
            }
        }
        let pair_lu = pair.lu();
        let dual_weight = calibrate_dual_weight(backend, &indices)?;
        Ok(FourierContext {
            backend,
            dual_weight,
            indices,
            pair_lu,
        })
    }

    pub fn backend(&self) -> &B {
        self.backend
    }

    pub fn dual_weight(&self) -> &DualWeight {
        &self.dual_weight
    }

    fn check(&self, id: &BackendId) -> Result<()> {
        check_same_backend(&self.backend.id(), id)
    }

    /// Left injection x ↦ _xφ = φ(·x), valid for every x in the coefficient
    /// span (the truncation puts all of it inside L).
    pub fn left_functional(&self, x: &Element) -> Result<Functional> {
        self.check(&x.backend)?;
        let mut out = Functional::zero(x.backend.clone());
        for (idx, c) in x.coeffs.iter() {
            self.backend.check_index(idx)?;
            for a in &self.indices {
                let v = self.backend.haar_product(a, idx) * c;
                if v.norm_sqr() > 0.0 {
                    out.coeffs.add_assign(*a, v);
                }
            }
        }
        Ok(out)
    }

    /// Inverts the left injection: finds x with _xφ = ω by a dense solve
    /// against the pair-product matrix.
    pub fn element_from_functional(&self, omega: &Functional) -> Result<Element> {
        self.check(&omega.backend)?;
        let n = self.indices.len();
        let mut rhs = DMatrix::<Complex64>::zeros(n, 1);
        for (pos, idx) in self.indices.iter().enumerate() {
            rhs[(pos, 0)] = omega.get(idx);
        }
        let sol = self
            .pair_lu
            .solve(&rhs)
            .ok_or_else(|| Error::InternalConsistency("singular pair-product matrix".into()))?;
        let mut out = Element::zero(omega.backend.clone());
        for (pos, idx) in self.indices.iter().enumerate() {
            let v = sol[(pos, 0)];
            if v.norm() > 1e-300 {
                out.coeffs.insert(*idx, v);
            }
        }
        Ok(out)
    }

    /// GNS representative ξ(ω): the unique vector with
    /// ⟨ξ(ω), Λ(y)⟩ = ω(y*) on the coefficient span. Finitely supported
    /// functionals always lie in the intersection 𝓘, so ξ exists.
    pub fn xi(&self, omega: &Functional) -> Result<GnsVector> {
        self.check(&omega.backend)?;
        let mut out = GnsVector::zero(omega.backend.clone());
        for a in &self.indices {
            let mut val = ZERO_C;
            for (p, cf) in self.backend.involution(a) {
                val += cf * omega.get(&p);
            }
            let g = self.backend.gram_weight(a);
            if !(g > 0.0) {
                return Err(Error::InternalConsistency(format!(
                    "non-positive Gram weight at {a}"
                )));
            }
            let c = val / g;
            if c.norm_sqr() > 0.0 {
                out.coeffs.insert(*a, c);
            }
        }
        Ok(out)
    }

    /// Λ(x) in coefficient coordinates.
    pub fn gns_of_element(&self, x: &Element) -> Result<GnsVector> {
        self.check(&x.backend)?;
        Ok(GnsVector {
            backend: x.backend.clone(),
            coeffs: x.coeffs.clone(),
        })
    }

    /// F₁: ω ↦ λ(ω), the block matrix of values ω(t⁽ˡ⁾ᵢⱼ).
    pub fn fourier_f1(&self, omega: &Functional) -> Result<DualElement> {
        self.check(&omega.backend)?;
        let shape: Vec<(HalfInt, usize)> = self
            .backend
            .levels()
            .iter()
            .map(|li| (li.label, li.dim))
            .collect();
        let mut blocks = BlockDiagonal::zeros(&shape);
        for (idx, v) in omega.coeffs.iter() {
            let info = self.backend.level_info(idx.level)?;
            idx.check_against(&info)?;
            let block = blocks.block_mut(idx.level).unwrap();
            block[(idx.storage_row(&info), idx.storage_col(&info))] = *v;
        }
        Ok(DualElement {
            backend: omega.backend.clone(),
            blocks,
        })
    }

    /// Reads a dual element back as the functional with those values.
    pub fn functional_from_dual(&self, y: &DualElement) -> Result<Functional> {
        self.check(&y.backend)?;
        let mut out = Functional::zero(y.backend.clone());
        for idx in &self.indices {
            let info = self.backend.level_info(idx.level)?;
            let v = y.blocks.block(idx.level).unwrap()
                [(idx.storage_row(&info), idx.storage_col(&info))];
            if v.norm_sqr() > 0.0 {
                out.coeffs.insert(*idx, v);
            }
        }
        Ok(out)
    }

    /// Dual GNS norm ‖Λ̂(y)‖ = φ̂(y*y)^{1/2}.
    pub fn dual_gns_norm(&self, y: &DualElement) -> Result<f64> {
        self.check(&y.backend)?;
        let mut acc = 0.0;
        for (label, block) in y.blocks.blocks() {
            let d = self
                .dual_weight
                .diagonal(*label)
                .ok_or_else(|| Error::InternalConsistency(format!("no dual weight at {label}")))?;
            for r in 0..block.nrows() {
                for c in 0..block.ncols() {
                    acc += d.weights()[c] * block[(r, c)].norm_sqr();
                }
            }
        }
        Ok(acc.sqrt())
    }

    /// Dual Lᵖ norm: the weighted Schatten closed form with the calibrated
    /// dual weight as density, levelwise, combined in ℓᵖ across levels.
    pub fn dual_lp_norm(&self, y: &DualElement, params: &InterpolationParams) -> Result<f64> {
        self.check(&y.backend)?;
        if params.p.is_infinite() {
            return y.blocks.sup_operator_norm();
        }
        let mut acc = 0.0;
        for (label, block) in y.blocks.blocks() {
            let d = self
                .dual_weight
                .diagonal(*label)
                .ok_or_else(|| Error::InternalConsistency(format!("no dual weight at {label}")))?;
            let nrm = weighted_schatten_norm(block, d, params)?;
            acc += nrm.powf(params.p);
        }
        Ok(acc.powf(1.0 / params.p))
    }

    /// F₂ in concrete coordinates: Λ(x) ↦ Λ̂(λ(_xφ)).
    pub fn fourier_f2(&self, x: &Element) -> Result<DualElement> {
        self.fourier_f1(&self.left_functional(x)?)
    }

    /// The inverse Plancherel map F̂₂: recovers x from λ(_xφ).
    pub fn fourier_f2_inverse(&self, y: &DualElement) -> Result<Element> {
        self.element_from_functional(&self.functional_from_dual(y)?)
    }

    /// Round trip Λ(x) → F₂ → F̂₂ → Λ(x); returns the GNS-norm residual.
    pub fn fourier_f2_inverse_check(&self, x: &Element) -> Result<f64> {
        let y = self.fourier_f2(x)?;
        let back = self.fourier_f2_inverse(&y)?;
        let diff = back.sub(x)?;
        self.backend.gns_norm(&GnsVector {
            backend: diff.backend.clone(),
            coeffs: diff.coeffs,
        })
    }

    /// Fₚ for 1 ≤ p ≤ 2: the F₁ values, with the primal weighted Lᵖ norm at
    /// z = −1/2 and the dual L^q norm against the calibrated weight at the
    /// same left parameter. The transform lives at Re z = −1/2 only, so the
    /// norms are pinned there whatever z the caller carries (Im z never
    /// enters a norm).
    pub fn fourier_fp(&self, x: &Element, params: &InterpolationParams) -> Result<FpResult> {
        if !(params.p >= 1.0 && params.p <= 2.0) {
            return Err(Error::InvalidExponent(params.p));
        }
        let left = InterpolationParams::new(Complex64::new(-0.5, params.z.im), params.p)?;
        let dual = self.fourier_f2(x)?;
        let primal_norm = self.backend.element_lp_norm(x, &left)?;
        let dual_norm = self.dual_lp_norm(&dual, &left.dual())?;
        Ok(FpResult {
            dual,
            primal_norm,
            dual_norm,
        })
    }

    /// M_*-norm of a finitely supported functional, through its predual
    /// realization: ‖ω‖ = ‖x‖_{L¹} where _xφ = ω.
    pub fn functional_norm(&self, omega: &Functional) -> Result<f64> {
        let x = self.element_from_functional(omega)?;
        self.backend
            .element_lp_norm(&x, &InterpolationParams::left(1.0)?)
    }

    /// Convolution ω ∗ θ = (ω ⊗ θ)∘Δ:
    /// (ω∗θ)(t⁽ˡ⁾ᵢⱼ) = Σ_k ω(t⁽ˡ⁾ᵢₖ) θ(t⁽ˡ⁾ₖⱼ).
    pub fn convolve(&self, omega: &Functional, theta: &Functional) -> Result<Functional> {
        self.check(&omega.backend)?;
        check_same_backend(&omega.backend, &theta.backend)?;
        let mut out = Functional::zero(omega.backend.clone());
        for idx in &self.indices {
            let mut acc = ZERO_C;
            for (left, right) in self.backend.coproduct_on_basis(idx)? {
                acc += omega.get(&left) * theta.get(&right);
            }
            if acc.norm_sqr() > 0.0 {
                out.coeffs.insert(*idx, acc);
            }
        }
        Ok(out)
    }

    /// Module action ω ∗ᵖ x through ω ∗ (_xφ), with both contract residuals
    /// of the convolution theorem evaluated.
    pub fn conv_module_action(
        &self,
        omega: &Functional,
        x: &Element,
        params: &InterpolationParams,
    ) -> Result<ModuleActionResult> {
        let xphi = self.left_functional(x)?;
        let result = self.convolve(omega, &xphi)?;

        // (a) ξ(ω ∗ _xφ) against the dual action of F₁(ω) on Λ(x).
        let lhs = self.xi(&result)?;
        let product = self.fourier_f1(omega)?.mul(&self.fourier_f1(&xphi)?)?;
        let rhs_element = self.fourier_f2_inverse(&product)?;
        let rhs = self.gns_of_element(&rhs_element)?;
        let xi_residual = self.backend.gns_norm(&GnsVector {
            backend: lhs.backend.clone(),
            coeffs: lhs.coeffs.sub(&rhs.coeffs),
        })?;

        // (b) F₁ is multiplicative on the convolution.
        let fourier_residual = self
            .fourier_f1(&result)?
            .sub(&product)?
            .blocks
            .max_abs();

        let lp_norm_in = self.backend.element_lp_norm(x, params)?;
        let out_elem = self.element_from_functional(&result)?;
        let lp_norm_out = self.backend.element_lp_norm(&out_elem, params)?;
        let omega_l1_norm = self.functional_norm(omega)?;

        Ok(ModuleActionResult {
            functional: result,
            xi_residual,
            fourier_residual,
            lp_norm_in,
            lp_norm_out,
            omega_l1_norm,
        })
    }

    /// λ(ω) as an operator on the GNS space, defined through
    /// ξ(ω ∗ _xφ) = λ(ω)Λ(x): transport to dual coordinates, multiply by
    /// F₁(ω) blockwise, transport back. The multiplicative unitary never
    /// appears; its operator norm is the block sup-norm of F₁(ω).
    pub fn lambda_apply(&self, omega: &Functional, v: &GnsVector) -> Result<GnsVector> {
        self.check(&omega.backend)?;
        check_same_backend(&omega.backend, &v.backend)?;
        let as_element = Element {
            backend: v.backend.clone(),
            coeffs: v.coeffs.clone(),
        };
        let dual = self.fourier_f2(&as_element)?;
        let product = self.fourier_f1(omega)?.mul(&dual)?;
        let back = self.fourier_f2_inverse(&product)?;
        Ok(GnsVector {
            backend: back.backend,
            coeffs: back.coeffs,
        })
    }

    /// Izumi transport a ↦ σ_{i(r'−r)/p − (s'−s)}(a) realizing the isometric
    /// isomorphism between the Lᵖ spaces at z and z'.
    pub fn izumi_transport(
        &self,
        x: &Element,
        from_z: Complex64,
        to_z: Complex64,
        p: f64,
    ) -> Result<Element> {
        self.check(&x.backend)?;
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        let shift_re = if p.is_infinite() {
            0.0
        } else {
            (to_z.re - from_z.re) / p
        };
        // w = i(r'−r)/p − (s'−s) with z = r+is, z' = r'+is'.
        let w = Complex64::new(from_z.im - to_z.im, shift_re);
        let mut out = Element::zero(x.backend.clone());
        for (idx, c) in x.coeffs.iter() {
            out.coeffs
                .insert(*idx, c * self.backend.modular_scale(idx, w));
        }
        Ok(out)
    }

    /// Modular conjugation on GNS vectors: J Λ(x) = Λ(σ_{i/2}(x)*). Provided
    /// for completeness; J enters the theory only through this identity.
    pub fn j_conjugation(&self, v: &GnsVector) -> Result<GnsVector> {
        self.check(&v.backend)?;
        let half_i = Complex64::new(0.0, 0.5);
        let mut out = GnsVector::zero(v.backend.clone());
        for (idx, c) in v.coeffs.iter() {
            let scaled = c * self.backend.modular_scale(idx, half_i);
            for (p, cf) in self.backend.involution(idx) {
                out.coeffs.add_assign(p, scaled.conj() * cf);
            }
        }
        Ok(out)
    }
}

impl<'a> FourierContext<'a, Suq2Backend> {
    /// The z-sweep of the boundedness experiment: drives
    /// U_{(z')}F₂U_{(z)}* (z' = z) on the normalized family Λ(αⁿ)
    /// (lowering) or Λ((α*)ⁿ) (raising) and reports
    /// r_n = ‖pipeline(Λ(σ_{−i(z+1/2)/2}(αⁿ)))‖ / ‖Λ(αⁿ)‖ together with the
    /// fitted slope of ln r_n against n. Boundedness for all n forces
    /// Re z = −1/2, where every r_n is 1.
    pub fn zsweep(
        &self,
        z: Complex64,
        n_range: &[u32],
        family: SweepFamily,
    ) -> Result<ZsweepResult> {
        let be = self.backend;
        let two_l = be.params().tower_l.twice();
        if n_range.is_empty() {
            return Err(Error::InvalidParameter("empty n range".into()));
        }
        for &n in n_range {
            if n == 0 || (n as i32) > two_l {
                return Err(Error::TruncationOverflow(
                    format!("n = {n} outside [1, 2L] with 2L = {two_l}"),
                    be.id().0,
                ));
            }
        }

        let zp = z; // dual-side parameter z' = z
        let shift = Complex64::new(0.0, -0.5) * (z + 0.5); // −i(z+1/2)/2
        let mut ratios = Vec::with_capacity(n_range.len());
        for &n in n_range {
            let level = HalfInt::from_twice(n as i32);
            let corner = match family {
                SweepFamily::Lowering => CoeffIndex::new(level, level, level),
                SweepFamily::Raising => CoeffIndex::new(level, -level, -level),
            };
            // Unit reference Λ(αⁿ)/‖Λ(αⁿ)‖.
            let gram = be.gram_weight(&corner);
            let unit = Complex64::new(1.0 / gram.sqrt(), 0.0);
            // Input vector Λ(σ_{−i(z+1/2)/2}(·)) of the reference.
            let input_coeff = unit * be.modular_scale(&corner, shift);
            // U_{(z)}*: Λ(σ_{−i(z+1/2)/2}(a)) ↦ a.
            let a_coeff = input_coeff * be.modular_scale(&corner, -shift);
            // F₂ at parameter z: λ(φ^{(z)}_a) with φ^{(z)}_a = _{σ_{−i(z+1/2)}(a)}φ.
            let b = Element::singleton(
                be.id(),
                corner,
                a_coeff * be.modular_scale(&corner, Complex64::new(0.0, -1.0) * (z + 0.5)),
            );
            let y = self.fourier_f1(&self.left_functional(&b)?)?;
            // U_{(z')}: Λ̂(σ̂_{−i(z'+1/2)/2}(y)), with σ̂_w(y) = Q^{−iw} y Q^{iw}.
            let corrected = self.dual_modular(&y, Complex64::new(0.0, -0.5) * (zp + 0.5))?;
            let out_norm = self.dual_gns_norm(&corrected)?;
            ratios.push((n, out_norm));
        }

        let expected_slope = match family {
            SweepFamily::Lowering => -2.0 * (z.re + 0.5) * be.params().q.ln(),
            SweepFamily::Raising => 2.0 * (z.re + 0.5) * be.params().q.ln(),
        };
        let fitted_slope = fit_slope(
            &ratios
                .iter()
                .map(|(n, r)| (*n as f64, r.ln()))
                .collect::<Vec<_>>(),
        );
        Ok(ZsweepResult {
            z,
            family,
            ratios,
            fitted_slope,
            expected_slope,
        })
    }

    /// Dual modular action σ̂_w(y) = Q^{−iw} y Q^{iw} blockwise.
    pub fn dual_modular(&self, y: &DualElement, w: Complex64) -> Result<DualElement> {
        let be = self.backend;
        let mut blocks = Vec::new();
        for (label, block) in y.blocks.blocks() {
            let q = &be.q_matrix(*label)?.diag;
            let left = diag_power(q, Complex64::new(0.0, -1.0) * w);
            let right = diag_power(q, Complex64::new(0.0, 1.0) * w);
            blocks.push((*label, &left * block * &right));
        }
        Ok(DualElement {
            backend: y.backend.clone(),
            blocks: BlockDiagonal::new(blocks)?,
        })
    }
}

/// Least-squares slope of y against x.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in points {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Solves the dual weight from Plancherel on the coefficient basis:
/// ‖Λ̂(F₁(_xφ))‖ = ‖Λ(x)‖ for every basis x, levelwise, as a least-squares
/// system in the diagonal entries of D̂.
fn calibrate_dual_weight<B: QgBackend>(
    backend: &B,
    indices: &[CoeffIndex],
) -> Result<DualWeight> {
    let levels = backend.levels().to_vec();
    // Unknown positions: (level, column) pairs.
    let mut unknown_pos = Vec::new();
    for li in &levels {
        for c in 0..li.dim {
            unknown_pos.push((li.label, c));
        }
    }
    let nu = unknown_pos.len();
    let ne = indices.len();
    let mut a = DMatrix::<f64>::zeros(ne, nu);
    let mut rhs = DMatrix::<f64>::zeros(ne, 1);

    for (row, x_idx) in indices.iter().enumerate() {
        // ω = _xφ has values ω(t_a) = φ(t_a t_x).
        rhs[(row, 0)] = backend.gram_weight(x_idx);
        for a_idx in indices {
            let v = backend.haar_product(a_idx, x_idx);
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let info = backend.level_info(a_idx.level)?;
            let col_pos = a_idx.storage_col(&info);
            let u = unknown_pos
                .iter()
                .position(|(l, c)| *l == a_idx.level && *c == col_pos)
                .unwrap();
            a[(row, u)] += v.norm_sqr();
        }
    }

    // Normal equations; the system is diagonal-dominant in practice (one
    // unknown per equation for the implemented backends).
    let ata = a.transpose() * &a;
    let atb = a.transpose() * &rhs;
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::InternalConsistency("dual weight system is singular".into()))?;

    // Residual check: a broken orthogonality upstream shows up here.
    let resid = (&a * &sol - &rhs).abs().max();
    let scale = rhs.abs().max().max(1.0);
    if resid > 1e-8 * scale {
        return Err(Error::InternalConsistency(format!(
            "dual weight calibration residual {resid:.3e}"
        )));
    }

    let mut diagonals = Vec::new();
    for li in &levels {
        let mut weights = Vec::with_capacity(li.dim);
        for c in 0..li.dim {
            let u = unknown_pos
                .iter()
                .position(|(l, cc)| *l == li.label && *cc == c)
                .unwrap();
            let v = sol[(u, 0)];
            if !(v > 0.0) {
                return Err(Error::InternalConsistency(format!(
                    "calibrated dual weight not positive at level {} col {c}: {v}",
                    li.label
                )));
            }
            weights.push(v);
        }
        diagonals.push((li.label, PositiveDiagonal::new(weights)?));
    }
    Ok(DualWeight {
        backend: backend.id(),
        diagonals,
    })
}
