//! The named experiments behind the CLI subcommands. Each returns an
//! [`Outcome`]: CSV rows (full parameter tuple on every row), aggregate
//! metrics, and a pass verdict derived only from the configured tolerances.

use anyhow::{bail, Context};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use qgft_core::finite_group::{group_convolve, group_fourier, GroupBackend};
use qgft_core::fourier::SweepFamily;
use qgft_core::sampling;
use qgft_core::suq2::Suq2Backend;
use qgft_core::{CoeffIndex, FourierContext, HalfInt, InterpolationParams, QgBackend};

use crate::config::Config;

#[derive(Debug)]
pub struct Outcome {
    pub experiment: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub metrics: Map<String, Value>,
    pub tolerance: Value,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl Outcome {
    fn new(experiment: &str, header: &[&str], tolerance: Value) -> Self {
        Outcome {
            experiment: experiment.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metrics: Map::new(),
            tolerance,
            pass: true,
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        self.failures.push(msg);
    }

    /// Rows sorted by the full tuple so output is order-independent.
    pub fn sorted_rows(&self) -> Vec<Vec<String>> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }
}

fn fnum(v: f64) -> String {
    format!("{v:e}")
}

pub enum AnyBackend {
    Suq2(Suq2Backend),
    Group(GroupBackend),
}

impl AnyBackend {
    pub fn build(cfg: &Config) -> anyhow::Result<Self> {
        Ok(match cfg.backend.as_str() {
            "suq2" => AnyBackend::Suq2(cfg.build_suq2()?),
            _ => AnyBackend::Group(cfg.build_group()?),
        })
    }
}

fn base_cols(cfg: &Config) -> Vec<String> {
    vec![
        cfg.backend.clone(),
        format!("{}", cfg.q),
        format!("{}", cfg.trunc_n),
        format!("{}", cfg.tower_l),
        format!("{}", cfg.seed),
    ]
}

const BASE_HEADER: [&str; 5] = ["backend", "q", "trunc_n", "tower_l", "seed"];

fn with_base<'a>(rest: &[&'a str]) -> Vec<&'a str> {
    BASE_HEADER.iter().copied().chain(rest.iter().copied()).collect()
}

// ---------------------------------------------------------------------------
// orthogonality
// ---------------------------------------------------------------------------

/// Residuals of the Schur orthogonality relations
/// φ((t⁽ˡ⁾ᵢⱼ)* t⁽ˡ'⁾ᵢ'ⱼ') = δ δ δ Q⁽ˡ⁾ᵢᵢ over all index pairs, plus the
/// j-independence of Q, evaluated through raw Haar sums.
pub fn orthogonality(cfg: &Config) -> anyhow::Result<Outcome> {
    let tol = cfg.tolerances.orthogonality;
    let mut out = Outcome::new(
        "orthogonality",
        &with_base(&["check", "l", "i", "j", "l2", "i2", "j2", "residual"]),
        json!({ "orthogonality": tol }),
    );
    let be = AnyBackend::build(cfg)?;
    let (pairs, jdep) = match &be {
        AnyBackend::Suq2(b) => orthogonality_table(b, |a, x| {
            let ta = b.coefficient_operator(a).unwrap();
            let tx = b.coefficient_operator(x).unwrap();
            b.haar_pair(ta, tx)
        }),
        AnyBackend::Group(b) => orthogonality_table(b, |a, x| {
            (0..b.table().order())
                .map(|g| b.coefficient_value(a, g).conj() * b.coefficient_value(x, g))
                .sum()
        }),
    };

    let mut max_resid: f64 = 0.0;
    for (a, x, resid) in pairs {
        max_resid = max_resid.max(resid);
        let mut row = base_cols(cfg);
        row.extend([
            "orthogonality".to_string(),
            a.level.to_string(),
            a.i.to_string(),
            a.j.to_string(),
            x.level.to_string(),
            x.i.to_string(),
            x.j.to_string(),
            fnum(resid),
        ]);
        out.rows.push(row);
    }
    let mut max_jdep: f64 = 0.0;
    for (idx, resid) in jdep {
        max_jdep = max_jdep.max(resid);
        let mut row = base_cols(cfg);
        row.extend([
            "q_j_independence".to_string(),
            idx.level.to_string(),
            idx.i.to_string(),
            idx.j.to_string(),
            String::new(),
            String::new(),
            String::new(),
            fnum(resid),
        ]);
        out.rows.push(row);
    }

    out.metrics.insert("max_orthogonality_residual".into(), json!(max_resid));
    out.metrics.insert("max_q_j_dependence".into(), json!(max_jdep));
    if max_resid > tol {
        out.fail(format!("orthogonality residual {max_resid:e} > {tol:e}"));
    }
    if max_jdep > tol {
        out.fail(format!("Q j-dependence {max_jdep:e} > {tol:e}"));
    }
    Ok(out)
}

type PairResiduals = (Vec<(CoeffIndex, CoeffIndex, f64)>, Vec<(CoeffIndex, f64)>);

fn orthogonality_table<B, F>(backend: &B, pair_haar: F) -> PairResiduals
where
    B: QgBackend + Sync,
    F: Fn(&CoeffIndex, &CoeffIndex) -> Complex64 + Sync + Send,
{
    let idxs = backend.all_indices();
    let ph = &pair_haar;
    let pairs: Vec<(CoeffIndex, CoeffIndex, f64)> = idxs
        .par_iter()
        .flat_map_iter(|a| {
            idxs.iter().map(move |x| {
                let val = ph(a, x);
                let expect = if a == x {
                    Complex64::new(backend.gram_weight(a), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (*a, *x, (val - expect).norm())
            })
        })
        .collect();
    // Q must not depend on the column used to evaluate it.
    let mut jdep = Vec::new();
    for info in backend.levels() {
        let bound = info.index_bound();
        let mut i = bound;
        loop {
            let reference = CoeffIndex::new(info.label, i, bound);
            let q_ref = pair_haar(&reference, &reference).re;
            let mut j = bound;
            loop {
                let idx = CoeffIndex::new(info.label, i, j);
                let q_here = pair_haar(&idx, &idx).re;
                jdep.push((idx, (q_here - q_ref).abs()));
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
    (pairs, jdep)
}

// ---------------------------------------------------------------------------
// plancherel
// ---------------------------------------------------------------------------

/// Plancherel norm preservation and the F₂/F̂₂ round trip on random
/// elements, plus the closed-form dual-weight anchor on SU_q(2).
pub fn plancherel(cfg: &Config) -> anyhow::Result<Outcome> {
    let tol = cfg.tolerances.plancherel;
    let mut out = Outcome::new(
        "plancherel",
        &with_base(&["metric", "sample", "value"]),
        json!({ "plancherel": tol }),
    );
    let be = AnyBackend::build(cfg)?;
    let rows = match &be {
        AnyBackend::Suq2(b) => plancherel_rows(b, cfg)?,
        AnyBackend::Group(b) => plancherel_rows(b, cfg)?,
    };
    let mut max_resid: f64 = 0.0;
    for (metric, sample, value) in rows {
        max_resid = max_resid.max(value);
        let mut row = base_cols(cfg);
        row.extend([metric, sample.to_string(), fnum(value)]);
        out.rows.push(row);
    }

    if let AnyBackend::Suq2(b) = &be {
        if b.params().tower_l >= HalfInt::HALF {
            let ctx = FourierContext::new(b)?;
            let d = ctx
                .dual_weight()
                .diagonal(HalfInt::HALF)
                .context("missing level 1/2")?;
            // φ̂(e^{(1/2)}_{−1/2,−1/2}) · φ(α*α) = 1 for any q.
            let alpha = b.alpha();
            let phi = b.haar_state(&alpha.adjoint().mul(alpha)).re;
            let anchor = (d.weights()[1] * phi - 1.0).abs();
            out.metrics.insert("dual_weight_anchor_residual".into(), json!(anchor));
            let mut row = base_cols(cfg);
            row.extend(["dual_weight_anchor".to_string(), "0".to_string(), fnum(anchor)]);
            out.rows.push(row);
            max_resid = max_resid.max(anchor);
        }
    }

    out.metrics.insert("max_residual".into(), json!(max_resid));
    if max_resid > tol {
        out.fail(format!("plancherel residual {max_resid:e} > {tol:e}"));
    }
    Ok(out)
}

fn plancherel_rows<B: QgBackend + Sync>(
    backend: &B,
    cfg: &Config,
) -> anyhow::Result<Vec<(String, usize, f64)>> {
    let ctx = FourierContext::new(backend)?;
    let rows: Result<Vec<_>, qgft_core::Error> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sampling::rng_for_case(cfg.seed, k as u64);
            let x = sampling::random_element(backend, &mut rng);
            let primal = backend.gns_norm(&ctx.gns_of_element(&x)?)?;
            let dual = ctx.dual_gns_norm(&ctx.fourier_f2(&x)?)?;
            let scale = primal.max(1.0);
            let norm_resid = (primal - dual).abs() / scale;
            let round = ctx.fourier_f2_inverse_check(&x)? / scale;
            Ok(vec![
                ("norm_preservation".to_string(), k, norm_resid),
                ("round_trip".to_string(), k, round),
            ])
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

// ---------------------------------------------------------------------------
// hausdorff-young
// ---------------------------------------------------------------------------

/// dual_norm ≤ primal_norm for every configured p over random samples.
pub fn hausdorff_young(cfg: &Config) -> anyhow::Result<Outcome> {
    let tol = cfg.tolerances.hausdorff_young;
    if cfg.p_grid.iter().any(|p| *p > 2.0) {
        bail!("hausdorff-young needs p_grid inside [1, 2] (got {:?})", cfg.p_grid);
    }
    let mut out = Outcome::new(
        "hausdorff-young",
        &with_base(&["p", "sample", "metric", "value"]),
        json!({ "hausdorff_young": tol }),
    );
    let be = AnyBackend::build(cfg)?;
    let rows = match &be {
        AnyBackend::Suq2(b) => hy_rows(b, cfg)?,
        AnyBackend::Group(b) => hy_rows(b, cfg)?,
    };
    let mut min_margin = f64::INFINITY;
    let mut violations = 0usize;
    for (p, sample, primal, dual) in rows {
        let margin = primal - dual;
        min_margin = min_margin.min(margin);
        if margin < -tol {
            violations += 1;
        }
        for (metric, value) in [
            ("primal_norm", primal),
            ("dual_norm", dual),
            ("hy_margin", margin),
        ] {
            let mut row = base_cols(cfg);
            row.extend([
                format!("{p}"),
                sample.to_string(),
                metric.to_string(),
                fnum(value),
            ]);
            out.rows.push(row);
        }
    }
    out.metrics.insert("min_margin".into(), json!(min_margin));
    out.metrics.insert("violations".into(), json!(violations));
    if violations > 0 {
        out.fail(format!("{violations} Hausdorff-Young violations beyond {tol:e}"));
    }
    Ok(out)
}

fn hy_rows<B: QgBackend + Sync>(
    backend: &B,
    cfg: &Config,
) -> anyhow::Result<Vec<(f64, usize, f64, f64)>> {
    let ctx = FourierContext::new(backend)?;
    let cases: Vec<(f64, usize)> = cfg
        .p_grid
        .iter()
        .flat_map(|p| (0..cfg.samples).map(move |k| (*p, k)))
        .collect();
    let rows: Result<Vec<_>, qgft_core::Error> = cases
        .par_iter()
        .map(|(p, k)| {
            let mut rng = sampling::rng_for_case(cfg.seed, *k as u64);
            let x = sampling::random_element(backend, &mut rng);
            let res = ctx.fourier_fp(&x, &InterpolationParams::left(*p)?)?;
            Ok((*p, *k, res.primal_norm, res.dual_norm))
        })
        .collect();
    Ok(rows?)
}

// ---------------------------------------------------------------------------
// convolution-check
// ---------------------------------------------------------------------------

/// Blockwise F₁(ω∗θ) = F₁(ω)F₁(θ) on random pairs, the module-action
/// contracts, and (for group backends) exhaustive brute force over deltas.
pub fn convolution_check(cfg: &Config) -> anyhow::Result<Outcome> {
    let tol = cfg.tolerances.convolution;
    let mtol = cfg.tolerances.module_action;
    let mut out = Outcome::new(
        "convolution-check",
        &with_base(&["metric", "sample", "value"]),
        json!({ "convolution": tol, "module_action": mtol }),
    );
    let be = AnyBackend::build(cfg)?;

    let (conv_rows, module_rows) = match &be {
        AnyBackend::Suq2(b) => convolution_rows(b, cfg)?,
        AnyBackend::Group(b) => convolution_rows(b, cfg)?,
    };
    let mut max_conv: f64 = 0.0;
    for (k, v) in conv_rows {
        max_conv = max_conv.max(v);
        let mut row = base_cols(cfg);
        row.extend(["f1_homomorphism".to_string(), k.to_string(), fnum(v)]);
        out.rows.push(row);
    }
    let mut max_module: f64 = 0.0;
    for (metric, k, v) in module_rows {
        max_module = max_module.max(v);
        let mut row = base_cols(cfg);
        row.extend([metric, k.to_string(), fnum(v)]);
        out.rows.push(row);
    }

    let mut max_brute: f64 = 0.0;
    if let AnyBackend::Group(b) = &be {
        let ctx = FourierContext::new(b)?;
        let n = b.table().order();
        for a in 0..n {
            for bb in 0..n {
                let fa = b.delta(a);
                let fb = b.delta(bb);
                let oa = b.function_to_functional(&fa)?;
                let ob = b.function_to_functional(&fb)?;
                let conv = ctx.convolve(&oa, &ob)?;
                let brute = b.function_to_functional(&group_convolve(&fa, &fb, b.table()))?;
                let resid = conv.sub(&brute)?.coeffs.max_abs();
                max_brute = max_brute.max(resid);
                let mut row = base_cols(cfg);
                row.extend([
                    "delta_pair_brute_force".to_string(),
                    format!("{a}_{bb}"),
                    fnum(resid),
                ]);
                out.rows.push(row);
            }
        }
        out.metrics.insert("max_brute_force_residual".into(), json!(max_brute));
    }

    out.metrics.insert("max_f1_homomorphism_residual".into(), json!(max_conv));
    out.metrics.insert("max_module_action_residual".into(), json!(max_module));
    if max_conv > tol {
        out.fail(format!("convolution homomorphism residual {max_conv:e} > {tol:e}"));
    }
    if max_brute > tol {
        out.fail(format!("brute-force convolution residual {max_brute:e} > {tol:e}"));
    }
    if max_module > mtol {
        out.fail(format!("module action residual {max_module:e} > {mtol:e}"));
    }
    Ok(out)
}

type ConvRows = (Vec<(usize, f64)>, Vec<(String, usize, f64)>);

fn convolution_rows<B: QgBackend + Sync>(backend: &B, cfg: &Config) -> anyhow::Result<ConvRows> {
    let ctx = FourierContext::new(backend)?;
    let conv: Result<Vec<_>, qgft_core::Error> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sampling::rng_for_case(cfg.seed, k as u64);
            let om = sampling::random_functional(backend, &mut rng);
            let th = sampling::random_functional(backend, &mut rng);
            let lhs = ctx.fourier_f1(&ctx.convolve(&om, &th)?)?;
            let rhs = ctx.fourier_f1(&om)?.mul(&ctx.fourier_f1(&th)?)?;
            let scale = rhs.blocks.max_abs().max(1.0);
            Ok((k, lhs.blocks.sub(&rhs.blocks)?.max_abs() / scale))
        })
        .collect();
    // Counit neutrality: ω ∗ ε = ω.
    let mut rng = sampling::rng_for_case(cfg.seed.wrapping_add(2), 0);
    let om = sampling::random_functional(backend, &mut rng);
    let eps = backend.counit();
    let counit_resid = ctx.convolve(&om, &eps)?.sub(&om)?.coeffs.max_abs();
    // Module action on a smaller batch; each case runs two Lᵖ norms.
    let module_samples = cfg.samples.min(20);
    let params = InterpolationParams::left(1.5)?;
    let module: Result<Vec<_>, qgft_core::Error> = (0..module_samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sampling::rng_for_case(cfg.seed.wrapping_add(1), k as u64);
            let om = sampling::random_functional(backend, &mut rng);
            let x = sampling::random_element(backend, &mut rng);
            let res = ctx.conv_module_action(&om, &x, &params)?;
            let scale = res.lp_norm_in.max(1.0);
            Ok(vec![
                ("module_xi".to_string(), k, res.xi_residual / scale),
                ("module_fourier".to_string(), k, res.fourier_residual / scale),
            ])
        })
        .collect();
    let mut module_rows: Vec<(String, usize, f64)> = module?.into_iter().flatten().collect();
    module_rows.push(("counit_neutrality".to_string(), 0, counit_resid));
    Ok((conv?, module_rows))
}

// ---------------------------------------------------------------------------
// zsweep
// ---------------------------------------------------------------------------

/// The boundedness experiment: ratios r_n and fitted slopes over the
/// configured z grid, on both α-power families, with the Im z invariance
/// control.
pub fn zsweep(cfg: &Config) -> anyhow::Result<Outcome> {
    if cfg.backend != "suq2" {
        bail!("zsweep requires the suq2 backend (got '{}')", cfg.backend);
    }
    let slope_tol = cfg.tolerances.zsweep_slope * cfg.q.ln().abs();
    let const_tol = cfg.tolerances.zsweep_const;
    let imz_tol = cfg.tolerances.imz_invariance;
    let mut out = Outcome::new(
        "zsweep",
        &with_base(&["z_re", "z_im", "family", "metric", "n", "value"]),
        json!({
            "slope_abs": slope_tol,
            "const": const_tol,
            "imz_invariance": imz_tol
        }),
    );
    let backend = cfg.build_suq2()?;
    let ctx = FourierContext::new(&backend)?;
    let zs = cfg.z_values()?;

    let cases: Vec<(Complex64, SweepFamily)> = zs
        .iter()
        .flat_map(|z| [(*z, SweepFamily::Lowering), (*z, SweepFamily::Raising)])
        .collect();
    let results: Result<Vec<_>, qgft_core::Error> = cases
        .par_iter()
        .map(|(z, family)| {
            let base = ctx.zsweep(*z, &cfg.n_range, *family)?;
            let shifted = ctx.zsweep(*z + Complex64::new(0.0, 0.7), &cfg.n_range, *family)?;
            Ok((base, shifted))
        })
        .collect();

    let mut max_slope_dev: f64 = 0.0;
    let mut max_const_dev: f64 = 0.0;
    let mut max_imz_dev: f64 = 0.0;
    for (base, shifted) in results? {
        let zc = base.z;
        let fam = base.family.as_str().to_string();
        let push = |metric: &str, n: String, value: f64, out: &mut Outcome| {
            let mut row = base_cols(cfg);
            row.extend([
                format!("{}", zc.re),
                format!("{}", zc.im),
                fam.clone(),
                metric.to_string(),
                n,
                fnum(value),
            ]);
            out.rows.push(row);
        };
        for (n, r) in &base.ratios {
            push("ratio", n.to_string(), *r, &mut out);
        }
        push("fitted_slope", String::new(), base.fitted_slope, &mut out);
        push("expected_slope", String::new(), base.expected_slope, &mut out);
        let dev = (base.fitted_slope - base.expected_slope).abs();
        push("slope_deviation", String::new(), dev, &mut out);
        max_slope_dev = max_slope_dev.max(dev);
        if dev > slope_tol {
            out.fail(format!(
                "slope deviation {dev:e} > {slope_tol:e} at z = ({}, {}), {fam}",
                zc.re, zc.im
            ));
        }
        if (zc.re + 0.5).abs() < 1e-14 {
            let r1 = base.ratios[0].1;
            for (n, r) in &base.ratios {
                let cdev = (r - r1).abs();
                max_const_dev = max_const_dev.max(cdev);
                push("const_deviation", n.to_string(), cdev, &mut out);
                if cdev > const_tol {
                    out.fail(format!("r_{n} not constant at Re z = -1/2: {cdev:e}"));
                }
            }
        }
        for ((n, a), (_, b)) in base.ratios.iter().zip(&shifted.ratios) {
            let idev = (a - b).abs() / a.max(1.0);
            max_imz_dev = max_imz_dev.max(idev);
            push("imz_invariance", n.to_string(), idev, &mut out);
            if idev > imz_tol {
                out.fail(format!("r_{n} moved under Im z shift: {idev:e}"));
            }
        }
    }
    out.metrics.insert("max_slope_deviation".into(), json!(max_slope_dev));
    out.metrics.insert("max_const_deviation".into(), json!(max_const_dev));
    out.metrics.insert("max_imz_deviation".into(), json!(max_imz_dev));
    Ok(out)
}

// ---------------------------------------------------------------------------
// transport-check
// ---------------------------------------------------------------------------

/// Norm preservation of the Izumi transport on random (x, z, z', p) tuples;
/// on tracial backends the transport must be the identity map.
pub fn transport_check(cfg: &Config) -> anyhow::Result<Outcome> {
    let tol = cfg.tolerances.transport;
    let mut out = Outcome::new(
        "transport-check",
        &with_base(&[
            "sample", "from_z_re", "from_z_im", "to_z_re", "to_z_im", "p", "metric", "value",
        ]),
        json!({ "transport": tol }),
    );
    let be = AnyBackend::build(cfg)?;
    let rows = match &be {
        AnyBackend::Suq2(b) => transport_rows(b, cfg, false)?,
        AnyBackend::Group(b) => transport_rows(b, cfg, true)?,
    };
    let mut max_resid: f64 = 0.0;
    for (k, from_z, to_z, p, metric, v) in rows {
        max_resid = max_resid.max(v);
        let mut row = base_cols(cfg);
        row.extend([
            k.to_string(),
            format!("{}", from_z.re),
            format!("{}", from_z.im),
            format!("{}", to_z.re),
            format!("{}", to_z.im),
            format!("{p}"),
            metric,
            fnum(v),
        ]);
        out.rows.push(row);
    }
    out.metrics.insert("max_residual".into(), json!(max_resid));
    if max_resid > tol {
        out.fail(format!("transport residual {max_resid:e} > {tol:e}"));
    }
    Ok(out)
}

type TransportRow = (usize, Complex64, Complex64, f64, String, f64);

fn transport_rows<B: QgBackend + Sync>(
    backend: &B,
    cfg: &Config,
    tracial: bool,
) -> anyhow::Result<Vec<TransportRow>> {
    let ctx = FourierContext::new(backend)?;
    let p_grid = cfg.p_grid.clone();
    let rows: Result<Vec<_>, qgft_core::Error> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            use rand::Rng;
            let mut rng = sampling::rng_for_case(cfg.seed, k as u64);
            let x = sampling::random_element(backend, &mut rng);
            let from_z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-1.0..1.0));
            let to_z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-1.0..1.0));
            let p = p_grid[rng.gen_range(0..p_grid.len())];
            let moved = ctx.izumi_transport(&x, from_z, to_z, p)?;
            let n_from = backend.element_lp_norm(&x, &InterpolationParams::new(from_z, p)?)?;
            let n_to = backend.element_lp_norm(&moved, &InterpolationParams::new(to_z, p)?)?;
            let resid = (n_from - n_to).abs() / n_from.max(1.0);
            let mut case = vec![(k, from_z, to_z, p, "norm_preservation".to_string(), resid)];
            if tracial {
                let ident = moved.sub(&x)?.coeffs.max_abs();
                case.push((k, from_z, to_z, p, "tracial_identity".to_string(), ident));
            }
            Ok(case)
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

/// Group brute-force suite: DFT match on deltas, exhaustive convolution,
/// Plancherel, and the f(e) Plancherel weight, everything recomputed from
/// the group table.
pub fn oracle(cfg: &Config) -> anyhow::Result<Outcome> {
    let tol = cfg.tolerances.oracle;
    let mut out = Outcome::new(
        "oracle",
        &with_base(&["metric", "case", "value"]),
        json!({ "oracle": tol }),
    );
    let AnyBackend::Group(b) = AnyBackend::build(cfg)? else {
        bail!("oracle requires a group backend (cyclic or s3)");
    };
    let ctx = FourierContext::new(&b)?;
    let n = b.table().order();
    let mut max_resid: f64 = 0.0;
    let push = |metric: &str, case: String, v: f64, out: &mut Outcome| {
        let mut row = base_cols(cfg);
        row.extend([metric.to_string(), case, fnum(v)]);
        out.rows.push(row);
    };

    // F₁ against the plain group Fourier transform on every delta.
    for x in 0..n {
        let f = b.delta(x);
        let lhs = ctx.fourier_f1(&b.function_to_functional(&f)?)?;
        let rhs = group_fourier(&f, b.table(), b.irreps())?;
        let resid = lhs.blocks.sub(&rhs)?.max_abs();
        max_resid = max_resid.max(resid);
        push("dft_delta_match", x.to_string(), resid, &mut out);
    }
    // Exhaustive convolution brute force.
    for a in 0..n {
        for c in 0..n {
            let fa = b.delta(a);
            let fc = b.delta(c);
            let lhs = ctx.convolve(
                &b.function_to_functional(&fa)?,
                &b.function_to_functional(&fc)?,
            )?;
            let rhs = b.function_to_functional(&group_convolve(&fa, &fc, b.table()))?;
            let resid = lhs.sub(&rhs)?.coeffs.max_abs();
            max_resid = max_resid.max(resid);
            push("convolution_brute_force", format!("{a}_{c}"), resid, &mut out);
        }
    }
    // Plancherel with the counting-measure constant, on random functions.
    for k in 0..cfg.samples.min(50) {
        let mut rng = sampling::rng_for_case(cfg.seed, k as u64);
        let x = sampling::random_element(&b, &mut rng);
        let f = b.element_to_function(&x)?;
        let fhat = group_fourier(&f, b.table(), b.irreps())?;
        let lhs: f64 = f.iter().map(|v| v.norm_sqr()).sum();
        let rhs: f64 = fhat
            .blocks()
            .iter()
            .zip(b.irreps().irreps())
            .map(|((_, m), p)| p.dim as f64 * m.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            / n as f64;
        let resid = (lhs - rhs).abs() / lhs.max(1.0);
        max_resid = max_resid.max(resid);
        push("plancherel_counting", k.to_string(), resid, &mut out);

        // φ̂(λ(ω_f)) = f(e).
        let lam = ctx.fourier_f1(&b.function_to_functional(&f)?)?;
        let val = ctx.dual_weight().apply(&lam)?;
        let resid = (val - f[b.table().identity()]).norm();
        max_resid = max_resid.max(resid);
        push("plancherel_weight_f_at_e", k.to_string(), resid, &mut out);
    }

    out.metrics.insert("max_residual".into(), json!(max_resid));
    if max_resid > tol {
        out.fail(format!("oracle residual {max_resid:e} > {tol:e}"));
    }
    Ok(out)
}
