//! Truncated model of the compact quantum group SU_q(2).
//!
//! The ambient algebra is B(ℓ²(ℕ)) ⊗ L^∞(𝕋), cut to ℂᴺ in the ℕ direction;
//! the 𝕋 direction stays exact (Laurent polynomials). The generators act by
//!
//!   α e_i ⊗ f_k = √(1−q^{2i}) e_{i−1} ⊗ f_k,
//!   γ e_i ⊗ f_k = qⁱ e_i ⊗ f_{k+1},
//!
//! and the Haar state is φ(x) = (1−q²) Σ_i q^{2i} ⟨x₀ e_i, e_i⟩ where x₀ is
//! the constant Fourier mode of x. Truncation affects Haar identities by
//! terms of size O(q^{2(N−2l)}) per level l.
//!
//! The corepresentation tower t⁽ˡ⁾ is built recursively: t^{(1/2)} is the
//! fundamental 2×2 matrix [[α, −qγ*], [γ, α*]], and t^{(l+1/2)} is cut out
//! of t^{(1/2)} ⊗ t^{(l)} by removing the known t^{(l−1/2)} copy with the
//! Haar Gram form and compressing with Clebsch-Gordan vectors recovered,
//! weight space by weight space, from the Gram of the top column. No
//! little q-Jacobi closed forms enter; the orthogonality relations are the
//! self-validation.

pub mod laurent;

pub use laurent::LaurentOperator;

use num_complex::Complex64;

use crate::backend::{BackendId, CoeffIndex, Element, LevelInfo, QgBackend};
use crate::halfint::HalfInt;
use crate::linalg::{schatten_norm, weighted_schatten_norm, CMatrix, PositiveDiagonal};
use crate::params::InterpolationParams;
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// Irreducible corepresentation t⁽ˡ⁾: a (2l+1)×(2l+1) array of homogeneous
/// Laurent operators, stored with row 0 ↔ i = +l.
#[derive(Debug, Clone)]
pub struct Corepresentation {
    pub level: HalfInt,
    entries: Vec<Vec<LaurentOperator>>,
}

impl Corepresentation {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentOperator {
        &self.entries[row][col]
    }
}

/// Schur orthogonality matrix Q⁽ˡ⁾, diagonal in the weight basis.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub level: HalfInt,
    pub diag: PositiveDiagonal,
}

/// Construction parameters.
#[derive(Debug, Clone, Copy)]
pub struct Suq2Params {
    pub q: f64,
    /// ℕ-direction cutoff N.
    pub trunc_n: usize,
    /// Largest tower level L.
    pub tower_l: HalfInt,
    /// Circle nodes for Lᵖ quadrature (p ∉ {2}; the Haar state itself never
    /// uses quadrature).
    pub quadrature_points: usize,
}

impl Default for Suq2Params {
    fn default() -> Self {
        Suq2Params {
            q: 0.5,
            trunc_n: 64,
            tower_l: HalfInt::from_int(3),
            quadrature_points: 64,
        }
    }
}

/// The truncated SU_q(2) backend. Immutable after construction.
#[derive(Debug)]
pub struct Suq2Backend {
    params: Suq2Params,
    id: BackendId,
    alpha: LaurentOperator,
    gamma: LaurentOperator,
    levels: Vec<LevelInfo>,
    coreps: Vec<Corepresentation>,
    q_matrices: Vec<QMatrix>,
    /// involution[level][row][col] = (partner, coefficient) with
    /// (t⁽ˡ⁾ᵢⱼ)* = coefficient · t⁽ˡ⁾₋ᵢ,₋ⱼ.
    involution: Vec<Vec<Vec<Complex64>>>,
    haar_coeffs: Vec<Vec<Vec<Complex64>>>,
    rho: PositiveDiagonal,
    haar_unit: f64,
}

/// Builds the generator pair (α, γ) at the given truncation.
pub fn build_generators(q: f64, n: usize) -> Result<(LaurentOperator, LaurentOperator)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} outside (0,1)")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("truncation N = {n} < 2")));
    }
    let mut a = CMatrix::zeros(n, n);
    for i in 1..n {
        a[(i - 1, i)] = Complex64::new((1.0 - q.powi(2 * i as i32)).sqrt(), 0.0);
    }
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = Complex64::new(q.powi(i as i32), 0.0);
    }
    Ok((
        LaurentOperator::from_slice(0, a),
        LaurentOperator::from_slice(1, g),
    ))
}

impl Suq2Backend {
    pub fn new(params: Suq2Params) -> Result<Self> {
        let q = params.q;
        let n = params.trunc_n;
        if params.tower_l.twice() < 0 {
            return Err(Error::InvalidParameter("tower level must be >= 0".into()));
        }
        // Safety margin: products of coefficients up to level L reach 2L
        // steps into the cutoff.
        if 2 * params.tower_l.twice() as usize + 4 > n {
            return Err(Error::TruncationTooSmall(format!(
                "N = {n} cannot hold tower up to l = {} (need N >= 4l + 4)",
                params.tower_l
            )));
        }
        if params.quadrature_points < 16 {
            return Err(Error::InvalidParameter(
                "need at least 16 quadrature points".into(),
            ));
        }
        let (alpha, gamma) = build_generators(q, n)?;
        let rho = PositiveDiagonal::new(
            (0..n)
                .map(|i| (1.0 - q * q) * q.powi(2 * i as i32))
                .collect(),
        )?;

        let mut backend = Suq2Backend {
            id: BackendId(format!("suq2(q={q},N={n},L={})", params.tower_l)),
            params,
            alpha,
            gamma,
            levels: Vec::new(),
            coreps: Vec::new(),
            q_matrices: Vec::new(),
            involution: Vec::new(),
            haar_coeffs: Vec::new(),
            haar_unit: rho.trace(),
            rho,
        };
        backend.build_tower()?;
        backend.build_tables()?;
        Ok(backend)
    }

    pub fn with_defaults() -> Result<Self> {
        Self::new(Suq2Params::default())
    }

    pub fn params(&self) -> &Suq2Params {
        &self.params
    }

    pub fn alpha(&self) -> &LaurentOperator {
        &self.alpha
    }

    pub fn gamma(&self) -> &LaurentOperator {
        &self.gamma
    }

    /// Haar-state density (1−q²)·diag(q^{2i}) on the ℕ leg.
    pub fn rho(&self) -> &PositiveDiagonal {
        &self.rho
    }

    /// φ(x) for a general truncated operator: (1−q²) Σ_i q^{2i} (x₀)ᵢᵢ.
    pub fn haar_state(&self, x: &LaurentOperator) -> Complex64 {
        match x.slice(0) {
            None => ZERO_C,
            Some(m) => {
                let mut acc = ZERO_C;
                for (i, w) in self.rho.weights().iter().enumerate() {
                    acc += m[(i, i)] * *w;
                }
                acc
            }
        }
    }

    /// φ(a* b) without forming the product: Σ_k tr(ρ a_k† b_k).
    pub fn haar_pair(&self, a: &LaurentOperator, b: &LaurentOperator) -> Complex64 {
        let mut acc = ZERO_C;
        for k in a.degrees() {
            if let (Some(am), Some(bm)) = (a.slice(k), b.slice(k)) {
                for (i, w) in self.rho.weights().iter().enumerate() {
                    let mut col = ZERO_C;
                    for r in 0..am.nrows() {
                        col += am[(r, i)].conj() * bm[(r, i)];
                    }
                    acc += col * *w;
                }
            }
        }
        acc
    }

    pub fn corepresentation(&self, level: HalfInt) -> Result<&Corepresentation> {
        self.coreps
            .iter()
            .find(|c| c.level == level)
            .ok_or_else(|| Error::TruncationOverflow(format!("level {level}"), self.id.0.clone()))
    }

    pub fn q_matrix(&self, level: HalfInt) -> Result<&QMatrix> {
        self.q_matrices
            .iter()
            .find(|c| c.level == level)
            .ok_or_else(|| Error::TruncationOverflow(format!("level {level}"), self.id.0.clone()))
    }

    /// The coefficient operator t⁽ˡ⁾ᵢⱼ.
    pub fn coefficient_operator(&self, idx: &CoeffIndex) -> Result<&LaurentOperator> {
        let info = self.level_info(idx.level)?;
        idx.check_against(&info)?;
        let corep = self.corepresentation(idx.level)?;
        Ok(corep.entry(idx.storage_row(&info), idx.storage_col(&info)))
    }

    /// Σ c_{lij} t⁽ˡ⁾ᵢⱼ as a truncated operator.
    pub fn materialize(&self, x: &Element) -> Result<LaurentOperator> {
        let mut acc = LaurentOperator::zero(self.params.trunc_n);
        for (idx, c) in x.coeffs.iter() {
            acc = acc.add(&self.coefficient_operator(idx)?.scale(*c));
        }
        Ok(acc)
    }

    /// (γγ*)^{it} as a diagonal operator; conjugation by it is the modular
    /// group σ_t.
    pub fn modular_unitary(&self, t: f64) -> LaurentOperator {
        let n = self.params.trunc_n;
        let lnq = self.params.q.ln();
        let mut d = CMatrix::zeros(n, n);
        for r in 0..n {
            d[(r, r)] = Complex64::new(0.0, 2.0 * r as f64 * t * lnq).exp();
        }
        LaurentOperator::from_slice(0, d)
    }

    /// σ_w for complex w, entrywise: the (r, c) entry of every slice scales
    /// by q^{2iw(r−c)}. Agrees with conjugation by (γγ*)^{it} at w = t real
    /// and with the analytic continuation on homogeneous coefficients.
    pub fn modular_conjugate(&self, x: &LaurentOperator, w: Complex64) -> LaurentOperator {
        let lnq = self.params.q.ln();
        let mut out = LaurentOperator::zero(x.dim());
        for k in x.degrees() {
            let m = x.slice(k).unwrap();
            let mut scaled = m.clone();
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let expo = Complex64::new(0.0, 2.0) * w * ((r as f64 - c as f64) * lnq);
                    scaled[(r, c)] = m[(r, c)] * expo.exp();
                }
            }
            out = out.add(&LaurentOperator::from_slice(k, scaled));
        }
        out
    }

    /// Bound C·q^{2(N−2l)} on the truncation error of Haar identities that
    /// involve coefficients of level ≤ l. C = 8 is generous; the observed
    /// errors in the tests sit well below it.
    pub fn truncation_error_bound(&self, level: HalfInt) -> f64 {
        let n = self.params.trunc_n as f64;
        8.0 * self.params.q.powf(2.0 * (n - level.as_f64() * 2.0))
    }

    fn build_tower(&mut self) -> Result<()> {
        let n = self.params.trunc_n;
        let l_max = self.params.tower_l;

        // Level 0: the unit.
        self.coreps.push(Corepresentation {
            level: HalfInt::ZERO,
            entries: vec![vec![LaurentOperator::identity(n)]],
        });
        if l_max >= HalfInt::HALF {
            // Fundamental corepresentation [[α, −qγ*], [γ, α*]].
            let fund = vec![
                vec![
                    self.alpha.clone(),
                    self.gamma.adjoint().scale(Complex64::new(-self.params.q, 0.0)),
                ],
                vec![self.gamma.clone(), self.alpha.adjoint()],
            ];
            self.coreps.push(Corepresentation {
                level: HalfInt::HALF,
                entries: fund,
            });
        }

        let mut level = HalfInt::ONE;
        while level <= l_max {
            let next = self.build_next_level(level)?;
            self.coreps.push(next);
            level = level + HalfInt::HALF;
        }

        // Q matrices, in tower order (needed by build_next_level for the
        // projection, so they are computed as we go; redo cleanly here).
        self.q_matrices.clear();
        for corep in &self.coreps {
            self.q_matrices.push(self.compute_q_matrix(corep)?);
        }

        self.levels = self
            .coreps
            .iter()
            .map(|c| LevelInfo {
                label: c.level,
                dim: c.dim(),
            })
            .collect();
        Ok(())
    }

    fn compute_q_matrix(&self, corep: &Corepresentation) -> Result<QMatrix> {
        // Q⁽ˡ⁾ᵢᵢ = φ((tᵢⱼ)* tᵢⱼ) at the fixed column j = l; the tests assert
        // j-independence.
        let dim = corep.dim();
        let mut diag = Vec::with_capacity(dim);
        for r in 0..dim {
            let e = corep.entry(r, 0);
            let v = self.haar_pair(e, e).re;
            if !(v > 0.0) {
                return Err(Error::InternalConsistency(format!(
                    "Q[{}] row {r} is {v}; orthogonality broken",
                    corep.level
                )));
            }
            diag.push(v);
        }
        Ok(QMatrix {
            level: corep.level,
            diag: PositiveDiagonal::new(diag)?,
        })
    }

    /// Builds t^{(l+1/2)} out of t^{(1/2)} ⊗ t^{(l)}; `prev_top` is l.
    fn build_next_level(&self, new_level: HalfInt) -> Result<Corepresentation> {
        let prev = self.corepresentation(new_level - HalfInt::HALF)?;
        let old = self.corepresentation(new_level - HalfInt::ONE)?;
        let old_q = self.compute_q_matrix(old)?;
        let fund = self.corepresentation(HalfInt::HALF)?;

        let dim_prev = prev.dim();
        let t_prev = dim_prev as i32 - 1; // twice the previous bound
        let dim_new = dim_prev + 1;
        let t_old = t_prev - 1;

        // Tensor entries w[(a,b)][(c,d)] = t^{1/2}_{ac} · t^{(l)}_{bd},
        // pair index p = 2*b + a is not used; flat p = a*dim_prev + b.
        let np = 2 * dim_prev;
        let flat = |a: usize, b: usize| a * dim_prev + b;
        // Twice the weight carried by pair (a, b).
        let wt = |a: usize, b: usize| (1 - 2 * a as i32) + (t_prev - 2 * b as i32);

        let mut w: Vec<Vec<LaurentOperator>> = Vec::with_capacity(np);
        for a in 0..2 {
            for b in 0..dim_prev {
                let mut row = Vec::with_capacity(np);
                for c in 0..2 {
                    for d in 0..dim_prev {
                        row.push(fund.entry(a, c).mul(prev.entry(b, d)));
                    }
                }
                w.push(row);
            }
        }

        // Remove the t^{(l−1/2)} copy: each entry carries one bi-degree, so
        // at most one old coefficient matches it.
        for a in 0..2 {
            for b in 0..dim_prev {
                let ti = wt(a, b);
                for c in 0..2 {
                    for d in 0..dim_prev {
                        let tj = wt(c, d);
                        if ti.abs() <= t_old && tj.abs() <= t_old {
                            let row_old = ((t_old - ti) / 2) as usize;
                            let col_old = ((t_old - tj) / 2) as usize;
                            let old_op = old.entry(row_old, col_old);
                            let entry = &w[flat(a, b)][flat(c, d)];
                            let coeff = self.haar_pair(old_op, entry)
                                / old_q.diag.weights()[row_old];
                            if coeff.norm_sqr() > 0.0 {
                                let corrected = entry.sub(&old_op.scale(coeff));
                                w[flat(a, b)][flat(c, d)] = corrected;
                            }
                        }
                    }
                }
            }
        }

        // Clebsch-Gordan vector per weight space, recovered from the Gram of
        // the projected top column (pure new-copy by the bi-degree count).
        // Pairs for new row r: (a=0, b=r) then (a=1, b=r−1), where present.
        let weight_pairs = |r: usize| -> Vec<(usize, usize)> {
            let mut ps = Vec::with_capacity(2);
            if r < dim_prev {
                ps.push((0usize, r));
            }
            if r >= 1 && r - 1 < dim_prev {
                ps.push((1usize, r - 1));
            }
            ps
        };

        let top = flat(0, 0);
        let mut cg: Vec<Vec<Complex64>> = Vec::with_capacity(dim_new);
        for r in 0..dim_new {
            let pairs = weight_pairs(r);
            if pairs.len() == 1 {
                cg.push(vec![ONE]);
                continue;
            }
            let x0 = &w[flat(pairs[0].0, pairs[0].1)][top];
            let x1 = &w[flat(pairs[1].0, pairs[1].1)][top];
            // G = Q·u u*, so any nonzero column of G is proportional to u.
            let g00 = self.haar_pair(x0, x0);
            let g11 = self.haar_pair(x1, x1);
            let g10 = self.haar_pair(x1, x0); // φ(x1* x0) = u₀ ū₁ Q... row 0, col 1 of G
            let (mut u0, mut u1) = if g00.re >= g11.re {
                (g00, g10.conj())
            } else {
                (g10, g11)
            };
            let norm = (u0.norm_sqr() + u1.norm_sqr()).sqrt();
            if norm == 0.0 {
                return Err(Error::InternalConsistency(format!(
                    "vanishing Clebsch-Gordan Gram at level {new_level}, row {r}"
                )));
            }
            u0 /= norm;
            u1 /= norm;
            // Phase: make the first sizable coordinate real positive.
            let lead = if u0.norm() > 1e-10 { u0 } else { u1 };
            let phase = lead / lead.norm();
            cg.push(vec![u0 * phase.conj(), u1 * phase.conj()]);
        }

        // Compress: v_{rc} = Σ conj(u_r[p]) W₊[p][p'] u_c[p'].
        let mut entries: Vec<Vec<LaurentOperator>> = Vec::with_capacity(dim_new);
        for r in 0..dim_new {
            let prs = weight_pairs(r);
            let mut row = Vec::with_capacity(dim_new);
            for c in 0..dim_new {
                let pcs = weight_pairs(c);
                let mut acc = LaurentOperator::zero(self.params.trunc_n);
                for (pi, (a, b)) in prs.iter().enumerate() {
                    for (qi, (cc, d)) in pcs.iter().enumerate() {
                        let coeff = cg[r][pi].conj() * cg[c][qi];
                        if coeff.norm_sqr() > 0.0 {
                            acc = acc.add(&w[flat(*a, *b)][flat(*cc, *d)].scale(coeff));
                        }
                    }
                }
                row.push(acc);
            }
            entries.push(row);
        }

        Ok(Corepresentation {
            level: new_level,
            entries,
        })
    }

    fn build_tables(&mut self) -> Result<()> {
        let mut involution = Vec::with_capacity(self.coreps.len());
        let mut haar_coeffs = Vec::with_capacity(self.coreps.len());
        for (li, corep) in self.coreps.iter().enumerate() {
            let dim = corep.dim();
            let qm = &self.q_matrices[li];
            let mut inv_level = vec![vec![ZERO_C; dim]; dim];
            let mut haar_level = vec![vec![ZERO_C; dim]; dim];
            for r in 0..dim {
                for c in 0..dim {
                    let op = corep.entry(r, c);
                    haar_level[r][c] = self.haar_state(op);
                    // (tᵢⱼ)* lives on the bi-degree of t₋ᵢ,₋ⱼ; its expansion
                    // coefficient is ⟨(tᵢⱼ)*, t₋ᵢ₋ⱼ⟩ / Q.
                    let pr = dim - 1 - r;
                    let pc = dim - 1 - c;
                    let partner = corep.entry(pr, pc);
                    let coeff =
                        self.haar_pair(partner, &op.adjoint()) / qm.diag.weights()[pr];
                    inv_level[r][c] = coeff;
                }
            }
            involution.push(inv_level);
            haar_coeffs.push(haar_level);
        }
        self.involution = involution;
        self.haar_coeffs = haar_coeffs;
        Ok(())
    }

    fn level_pos(&self, level: HalfInt) -> Result<usize> {
        self.levels
            .iter()
            .position(|li| li.label == level)
            .ok_or_else(|| Error::TruncationOverflow(format!("level {level}"), self.id.0.clone()))
    }
}

impl QgBackend for Suq2Backend {
    fn id(&self) -> BackendId {
        self.id.clone()
    }

    fn levels(&self) -> &[LevelInfo] {
        &self.levels
    }

    fn is_tracial(&self) -> bool {
        false
    }

    fn haar_of_unit(&self) -> f64 {
        self.haar_unit
    }

    fn unit_index(&self) -> CoeffIndex {
        CoeffIndex::new(HalfInt::ZERO, HalfInt::ZERO, HalfInt::ZERO)
    }

    fn haar_coefficient(&self, idx: &CoeffIndex) -> Complex64 {
        let Ok(pos) = self.level_pos(idx.level) else {
            return ZERO_C;
        };
        let info = self.levels[pos];
        self.haar_coeffs[pos][idx.storage_row(&info)][idx.storage_col(&info)]
    }

    fn haar_product(&self, a: &CoeffIndex, b: &CoeffIndex) -> Complex64 {
        // φ(t_a t_b) = Σ over the (t_a)*-expansion of conj(c) φ(t_p* t_b)
        // = conj(c_{a→b}) Q_b by orthogonality.
        self.involution(a)
            .into_iter()
            .filter(|(p, _)| p == b)
            .map(|(_, c)| c.conj() * self.gram_weight(b))
            .sum()
    }

    fn gram_weight(&self, idx: &CoeffIndex) -> f64 {
        let Ok(pos) = self.level_pos(idx.level) else {
            return 0.0;
        };
        let info = self.levels[pos];
        self.q_matrices[pos].diag.weights()[idx.storage_row(&info)]
    }

    fn involution(&self, idx: &CoeffIndex) -> Vec<(CoeffIndex, Complex64)> {
        let Ok(pos) = self.level_pos(idx.level) else {
            return Vec::new();
        };
        let info = self.levels[pos];
        let c = self.involution[pos][idx.storage_row(&info)][idx.storage_col(&info)];
        vec![(CoeffIndex::new(idx.level, -idx.i, -idx.j), c)]
    }

    fn modular_scale(&self, idx: &CoeffIndex, w: Complex64) -> Complex64 {
        // σ_w(t⁽ˡ⁾ᵢⱼ) = q^{−2iw(i+j)} t⁽ˡ⁾ᵢⱼ, pinned by σ_z(α) = q^{−2iz}α
        // and σ_z(α*) = q^{2iz}α*.
        let m = (idx.i + idx.j).as_f64();
        (Complex64::new(0.0, -2.0) * w * (m * self.params.q.ln())).exp()
    }

    fn element_lp_norm(&self, x: &Element, params: &InterpolationParams) -> Result<f64> {
        let op = self.materialize(x)?;
        let m = self.params.quadrature_points;
        if params.p.is_infinite() {
            let mut best: f64 = 0.0;
            for node in 0..m {
                let theta = 2.0 * std::f64::consts::PI * node as f64 / m as f64;
                best = best.max(schatten_norm(&op.evaluate(theta), f64::INFINITY)?);
            }
            return Ok(best);
        }
        // τ(|ρ^a x ρ^b|^p) with τ = Tr ⊗ ∫dt/2π; the circle integral is a
        // trapezoid rule on equispaced nodes, spectrally accurate for the
        // low-degree trig-polynomial symbols that arise here.
        let mut acc = 0.0;
        for node in 0..m {
            let theta = 2.0 * std::f64::consts::PI * node as f64 / m as f64;
            let fiber = op.evaluate(theta);
            let nrm = weighted_schatten_norm(&fiber, &self.rho, params)?;
            acc += nrm.powf(params.p);
        }
        Ok((acc / m as f64).powf(1.0 / params.p))
    }
}
