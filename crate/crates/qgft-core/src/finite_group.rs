//! Exact oracle backends: C(G) for G ∈ {ℤ/N, S₃} with the counting-measure
//! Haar functional, so φ(1) = |G| and every construct can be brute-forced
//! over the group table. These backends are tracial, which makes them the
//! negative control for all z-dependence: the interpolation norms coincide
//! bit for bit across z.
//!
//! The coefficient basis is the Peter-Weyl basis of matrix-coefficient
//! functions πᵢⱼ(·); levels are irreps in list order. In this basis the
//! block of the Fourier transform F₁ at π is exactly f̂(π) = Σ_x f(x) π(x).

use num_complex::Complex64;

use crate::backend::{BackendId, CoeffIndex, Element, Functional, LevelInfo, QgBackend};
use crate::halfint::HalfInt;
use crate::linalg::{BlockDiagonal, CMatrix};
use crate::params::InterpolationParams;
use crate::{Error, Result};

const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// Multiplication table of a finite group.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    name: String,
}

impl GroupTable {
    /// Builds a table and checks the group laws exhaustively.
    pub fn new(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter("table must be square".into()));
        }
        if table
            .iter()
            .flat_map(|row| row.iter())
            .any(|&v| v >= n)
        {
            return Err(Error::InvalidParameter("table entry out of range".into()));
        }
        // Identity.
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidParameter("no identity element".into()))?;
        // Inverses.
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("element {x} has no inverse"))
                })?;
        }
        // Associativity, exhaustively.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidParameter(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable {
            order: n,
            table,
            identity,
            inverse,
            name: name.to_string(),
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic(0)".into()));
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::new(&format!("cyclic({n})"), table)
    }

    /// S₃ as permutations of {0,1,2}: e, (01), (02), (12), (012), (021).
    pub fn s3() -> Result<Self> {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
            // (p∘q)(x) = p(q(x)).
            [p[q[0]], p[q[1]], p[q[2]]]
        };
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let r = compose(p, q);
                        perms.iter().position(|s| *s == r).unwrap()
                    })
                    .collect()
            })
            .collect();
        Self::new("s3", table)
    }

    pub fn s3_permutations() -> Vec<[usize; 3]> {
        vec![
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A unitary irreducible representation: one matrix per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

/// Complete set of irreps with Σ d² = |G|.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    irreps: Vec<Irrep>,
}

impl IrrepSet {
    pub fn new(table: &GroupTable, irreps: Vec<Irrep>) -> Result<Self> {
        let n = table.order();
        let dim_sq: usize = irreps.iter().map(|p| p.dim * p.dim).sum();
        if dim_sq != n {
            return Err(Error::InvalidParameter(format!(
                "Σ d² = {dim_sq}, expected |G| = {n}"
            )));
        }
        for (k, p) in irreps.iter().enumerate() {
            if p.matrices.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "irrep {k} has {} matrices",
                    p.matrices.len()
                )));
            }
            for (x, m) in p.matrices.iter().enumerate() {
                if m.nrows() != p.dim || m.ncols() != p.dim {
                    return Err(Error::DimensionMismatch(format!("irrep {k}, element {x}")));
                }
                // Unitarity.
                let uu = m.adjoint() * m;
                if (uu - CMatrix::identity(p.dim, p.dim))
                    .iter()
                    .any(|c| c.norm() > 1e-12)
                {
                    return Err(Error::InternalConsistency(format!(
                        "irrep {k} not unitary at element {x}"
                    )));
                }
            }
            // Multiplicativity, exhaustively.
            for a in 0..n {
                for b in 0..n {
                    let prod = &p.matrices[a] * &p.matrices[b];
                    let target = &p.matrices[table.mul(a, b)];
                    if (&prod - target).iter().any(|c| c.norm() > 1e-12) {
                        return Err(Error::InternalConsistency(format!(
                            "irrep {k} not multiplicative at ({a},{b})"
                        )));
                    }
                }
            }
        }
        // Character orthonormality under the normalized counting measure.
        for (a, pa) in irreps.iter().enumerate() {
            for (b, pb) in irreps.iter().enumerate() {
                let mut acc = ZERO_C;
                for x in 0..n {
                    let ca: Complex64 = pa.matrices[x].diagonal().iter().sum();
                    let cb: Complex64 = pb.matrices[x].diagonal().iter().sum();
                    acc += ca * cb.conj();
                }
                acc /= n as f64;
                let expect = if a == b { 1.0 } else { 0.0 };
                if (acc - expect).norm() > 1e-12 {
                    return Err(Error::InternalConsistency(format!(
                        "character orthonormality fails at ({a},{b})"
                    )));
                }
            }
        }
        Ok(IrrepSet { irreps })
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    /// Characters of ℤ/N: χ_k(x) = e^{2πikx/N}.
    pub fn cyclic(table: &GroupTable) -> Result<Self> {
        let n = table.order();
        let irreps = (0..n)
            .map(|k| Irrep {
                dim: 1,
                matrices: (0..n)
                    .map(|x| {
                        let th = 2.0 * std::f64::consts::PI * (k * x) as f64 / n as f64;
                        CMatrix::from_row_slice(1, 1, &[Complex64::new(th.cos(), th.sin())])
                    })
                    .collect(),
            })
            .collect();
        Self::new(table, irreps)
    }

    /// Trivial, sign and the standard 2-dim irrep of S₃. The 2-dim matrices
    /// come from the permutation action restricted to the plane x+y+z = 0 in
    /// the orthonormal basis (1,−1,0)/√2, (1,1,−2)/√6, so multiplicativity
    /// is automatic.
    pub fn s3(table: &GroupTable) -> Result<Self> {
        let perms = GroupTable::s3_permutations();
        let n = table.order();
        let trivial = Irrep {
            dim: 1,
            matrices: (0..n)
                .map(|_| CMatrix::from_row_slice(1, 1, &[Complex64::new(1.0, 0.0)]))
                .collect(),
        };
        let sign = Irrep {
            dim: 1,
            matrices: perms
                .iter()
                .map(|p| {
                    let mut parity = 1.0;
                    for a in 0..3 {
                        for b in a + 1..3 {
                            if p[a] > p[b] {
                                parity = -parity;
                            }
                        }
                    }
                    CMatrix::from_row_slice(1, 1, &[Complex64::new(parity, 0.0)])
                })
                .collect(),
        };
        let u1 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
        let u2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
        let basis = [u1, u2];
        let standard = Irrep {
            dim: 2,
            matrices: perms
                .iter()
                .map(|p| {
                    // σ acts on coordinates by (σ·v)_{p[k]} = v_k.
                    let mut m = CMatrix::zeros(2, 2);
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut acted = [0.0; 3];
                            for k in 0..3 {
                                acted[p[k]] = basis[b][k];
                            }
                            let dot: f64 =
                                (0..3).map(|k| basis[a][k] * acted[k]).sum();
                            m[(a, b)] = Complex64::new(dot, 0.0);
                        }
                    }
                    m
                })
                .collect(),
        };
        Self::new(table, vec![trivial, sign, standard])
    }
}

/// Fourier transform of f: G → ℂ, blockwise f̂(π) = Σ_x f(x) π(x).
pub fn group_fourier(
    f: &[Complex64],
    table: &GroupTable,
    irreps: &IrrepSet,
) -> Result<BlockDiagonal> {
    if f.len() != table.order() {
        return Err(Error::DimensionMismatch(format!(
            "f has {} values for group of order {}",
            f.len(),
            table.order()
        )));
    }
    let blocks = irreps
        .irreps()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let mut acc = CMatrix::zeros(p.dim, p.dim);
            for (x, fx) in f.iter().enumerate() {
                acc += &p.matrices[x] * *fx;
            }
            (HalfInt::from_int(k as i32), acc)
        })
        .collect();
    BlockDiagonal::new(blocks)
}

/// Convolution with counting measure: (f∗g)(x) = Σ_{st=x} f(s) g(t).
pub fn group_convolve(f: &[Complex64], g: &[Complex64], table: &GroupTable) -> Vec<Complex64> {
    let n = table.order();
    let mut out = vec![ZERO_C; n];
    for s in 0..n {
        for t in 0..n {
            out[table.mul(s, t)] += f[s] * g[t];
        }
    }
    out
}

/// C(G) as a quantum-group backend in the Peter-Weyl coefficient basis.
#[derive(Debug)]
pub struct GroupBackend {
    id: BackendId,
    table: GroupTable,
    irreps: IrrepSet,
    levels: Vec<LevelInfo>,
}

impl GroupBackend {
    pub fn cyclic(n: usize) -> Result<Self> {
        let table = GroupTable::cyclic(n)?;
        let irreps = IrrepSet::cyclic(&table)?;
        Self::new(table, irreps)
    }

    pub fn s3() -> Result<Self> {
        let table = GroupTable::s3()?;
        let irreps = IrrepSet::s3(&table)?;
        Self::new(table, irreps)
    }

    pub fn new(table: GroupTable, irreps: IrrepSet) -> Result<Self> {
        let levels = irreps
            .irreps()
            .iter()
            .enumerate()
            .map(|(k, p)| LevelInfo {
                label: HalfInt::from_int(k as i32),
                dim: p.dim,
            })
            .collect();
        Ok(GroupBackend {
            id: BackendId(format!("group({})", table.name())),
            table,
            irreps,
            levels,
        })
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn irreps(&self) -> &IrrepSet {
        &self.irreps
    }

    /// The coefficient function t_idx evaluated at a group element.
    pub fn coefficient_value(&self, idx: &CoeffIndex, x: usize) -> Complex64 {
        let k = (idx.level.twice() / 2) as usize;
        let info = self.levels[k];
        self.irreps.irreps()[k].matrices[x][(idx.storage_row(&info), idx.storage_col(&info))]
    }

    /// Materializes a coefficient-span element as a function on G.
    pub fn element_to_function(&self, e: &Element) -> Result<Vec<Complex64>> {
        let mut out = vec![ZERO_C; self.table.order()];
        for (idx, c) in e.coeffs.iter() {
            self.check_index(idx)?;
            for (x, v) in out.iter_mut().enumerate() {
                *v += c * self.coefficient_value(idx, x);
            }
        }
        Ok(out)
    }

    /// Expands a function on G over the coefficient basis (Schur
    /// orthogonality): c_{πij} = (d_π/|G|) Σ_x f(x) conj(πᵢⱼ(x)).
    pub fn function_to_element(&self, f: &[Complex64]) -> Result<Element> {
        if f.len() != self.table.order() {
            return Err(Error::DimensionMismatch("function length".into()));
        }
        let mut out = Element::zero(self.id.clone());
        for idx in self.all_indices() {
            let k = (idx.level.twice() / 2) as usize;
            let d = self.irreps.irreps()[k].dim as f64;
            let mut acc = ZERO_C;
            for (x, fx) in f.iter().enumerate() {
                acc += fx * self.coefficient_value(&idx, x).conj();
            }
            acc *= d / self.table.order() as f64;
            if acc.norm() > 1e-15 {
                out.coeffs.insert(idx, acc);
            }
        }
        Ok(out)
    }

    /// The functional ω_f(g) = Σ_x f(x) g(x); its coefficient values are
    /// exactly the blocks of the group Fourier transform.
    pub fn function_to_functional(&self, f: &[Complex64]) -> Result<Functional> {
        if f.len() != self.table.order() {
            return Err(Error::DimensionMismatch("function length".into()));
        }
        let mut out = Functional::zero(self.id.clone());
        for idx in self.all_indices() {
            let mut acc = ZERO_C;
            for (x, fx) in f.iter().enumerate() {
                acc += fx * self.coefficient_value(&idx, x);
            }
            if acc.norm() > 1e-15 {
                out.coeffs.insert(idx, acc);
            }
        }
        Ok(out)
    }

    /// Point mass at a group element, as a function.
    pub fn delta(&self, x: usize) -> Vec<Complex64> {
        let mut f = vec![ZERO_C; self.table.order()];
        f[x] = Complex64::new(1.0, 0.0);
        f
    }
}

impl QgBackend for GroupBackend {
    fn id(&self) -> BackendId {
        self.id.clone()
    }

    fn levels(&self) -> &[LevelInfo] {
        &self.levels
    }

    fn is_tracial(&self) -> bool {
        true
    }

    fn haar_of_unit(&self) -> f64 {
        self.table.order() as f64
    }

    fn unit_index(&self) -> CoeffIndex {
        CoeffIndex::new(HalfInt::ZERO, HalfInt::ZERO, HalfInt::ZERO)
    }

    fn haar_coefficient(&self, idx: &CoeffIndex) -> Complex64 {
        (0..self.table.order())
            .map(|x| self.coefficient_value(idx, x))
            .sum()
    }

    fn haar_product(&self, a: &CoeffIndex, b: &CoeffIndex) -> Complex64 {
        // Brute force over the group: φ(t_a t_b) = Σ_x t_a(x) t_b(x).
        (0..self.table.order())
            .map(|x| self.coefficient_value(a, x) * self.coefficient_value(b, x))
            .sum()
    }

    fn gram_weight(&self, idx: &CoeffIndex) -> f64 {
        // Schur: Σ_x |πᵢⱼ(x)|² = |G|/d_π.
        let k = (idx.level.twice() / 2) as usize;
        self.table.order() as f64 / self.irreps.irreps()[k].dim as f64
    }

    fn involution(&self, idx: &CoeffIndex) -> Vec<(CoeffIndex, Complex64)> {
        // (πᵢⱼ)* = conj∘πᵢⱼ, expanded by brute force against the basis.
        let mut out = Vec::new();
        for b in self.all_indices() {
            let mut acc = ZERO_C;
            for x in 0..self.table.order() {
                acc += self.coefficient_value(&b, x).conj()
                    * self.coefficient_value(idx, x).conj();
            }
            acc /= self.gram_weight(&b);
            if acc.norm() > 1e-12 {
                out.push((b, acc));
            }
        }
        out
    }

    fn modular_scale(&self, _idx: &CoeffIndex, _w: Complex64) -> Complex64 {
        // Tracial Haar: the modular group is trivial.
        Complex64::new(1.0, 0.0)
    }

    fn element_lp_norm(&self, x: &Element, params: &InterpolationParams) -> Result<f64> {
        // Counting measure: the density is the identity, so the ρ-powers are
        // the identity for every z and the value is the plain ℓᵖ norm.
        let f = self.element_to_function(x)?;
        if params.p.is_infinite() {
            return Ok(f.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        Ok(f.iter()
            .map(|v| v.norm().powf(params.p))
            .sum::<f64>()
            .powf(1.0 / params.p))
    }
}
