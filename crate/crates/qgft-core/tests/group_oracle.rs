//! Brute-force oracle checks on the finite-group backends: every identity
//! the Fourier layer claims is recomputed here directly from the group
//! table, with no shared code path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use qgft_core::finite_group::{group_convolve, group_fourier, GroupBackend};
use qgft_core::sampling;
use qgft_core::{FourierContext, HalfInt, InterpolationParams, QgBackend};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_function(order: usize, rng: &mut impl rand::Rng) -> Vec<Complex64> {
    use rand_distr::StandardNormal;
    (0..order)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c(re, im)
        })
        .collect()
}

#[test]
fn f1_matches_group_fourier_on_all_deltas() {
    for be in [GroupBackend::cyclic(8).unwrap(), GroupBackend::s3().unwrap()] {
        let ctx = FourierContext::new(&be).unwrap();
        for x in 0..be.table().order() {
            let f = be.delta(x);
            let omega = be.function_to_functional(&f).unwrap();
            let lhs = ctx.fourier_f1(&omega).unwrap();
            let rhs = group_fourier(&f, be.table(), be.irreps()).unwrap();
            assert!(
                lhs.blocks.sub(&rhs).unwrap().max_abs() < 1e-12,
                "F₁ ≠ group Fourier at delta {x} on {}",
                be.id()
            );
        }
    }
}

#[test]
fn left_functional_density_is_pointwise_product() {
    // On C(G), the density of _fφ is the function f itself: ω_f(g) = Σ f·g.
    let be = GroupBackend::s3().unwrap();
    let ctx = FourierContext::new(&be).unwrap();
    let mut rng = sampling::rng_from_seed(11);
    let f = random_function(6, &mut rng);
    let x = be.function_to_element(&f).unwrap();
    let omega = ctx.left_functional(&x).unwrap();
    let direct = be.function_to_functional(&f).unwrap();
    let diff = omega.sub(&direct).unwrap();
    assert!(diff.coeffs.max_abs() < 1e-11);
    // And the inverse map recovers the element.
    let back = ctx.element_from_functional(&omega).unwrap();
    assert!(back.sub(&x).unwrap().coeffs.max_abs() < 1e-11);
}

#[test]
fn convolution_matches_brute_force_exhaustively_on_s3() {
    let be = GroupBackend::s3().unwrap();
    let ctx = FourierContext::new(&be).unwrap();
    for a in 0..6 {
        for b in 0..6 {
            let fa = be.delta(a);
            let fb = be.delta(b);
            let oa = be.function_to_functional(&fa).unwrap();
            let ob = be.function_to_functional(&fb).unwrap();
            let conv = ctx.convolve(&oa, &ob).unwrap();
            let brute = be
                .function_to_functional(&group_convolve(&fa, &fb, be.table()))
                .unwrap();
            assert!(
                conv.sub(&brute).unwrap().coeffs.max_abs() < 1e-12,
                "convolution differs from brute force at deltas ({a},{b})"
            );
        }
    }
}

#[test]
fn convolution_matches_brute_force_on_z8_via_dft() {
    let be = GroupBackend::cyclic(8).unwrap();
    let ctx = FourierContext::new(&be).unwrap();
    let mut rng = sampling::rng_from_seed(5);
    for _ in 0..20 {
        let f = random_function(8, &mut rng);
        let g = random_function(8, &mut rng);
        let of = be.function_to_functional(&f).unwrap();
        let og = be.function_to_functional(&g).unwrap();
        let conv = ctx.convolve(&of, &og).unwrap();
        let brute = be
            .function_to_functional(&group_convolve(&f, &g, be.table()))
            .unwrap();
        assert!(conv.sub(&brute).unwrap().coeffs.max_abs() < 1e-10);
        // DFT oracle: blockwise product of the transforms.
        let prod = group_fourier(&f, be.table(), be.irreps())
            .unwrap()
            .mul(&group_fourier(&g, be.table(), be.irreps()).unwrap())
            .unwrap();
        let viaf1 = ctx.fourier_f1(&conv).unwrap();
        assert!(viaf1.blocks.sub(&prod).unwrap().max_abs() < 1e-10);
    }
}

#[test]
fn coproduct_on_basis_matches_group_multiplication() {
    // Δ(πᵢⱼ)(s,t) = πᵢⱼ(st): expand both sides over all (s,t) pairs.
    for be in [GroupBackend::cyclic(6).unwrap(), GroupBackend::s3().unwrap()] {
        let n = be.table().order();
        for idx in be.all_indices() {
            let pairs = be.coproduct_on_basis(&idx).unwrap();
            for s in 0..n {
                for t in 0..n {
                    let lhs = be.coefficient_value(&idx, be.table().mul(s, t));
                    let rhs: Complex64 = pairs
                        .iter()
                        .map(|(l, r)| be.coefficient_value(l, s) * be.coefficient_value(r, t))
                        .sum();
                    assert!(
                        (lhs - rhs).norm() < 1e-12,
                        "coproduct fails at {idx}, ({s},{t}) on {}",
                        be.id()
                    );
                }
            }
        }
    }
}

#[test]
fn xi_matches_dense_solve_of_the_defining_system() {
    // ⟨ξ(ω), Λ(t_a)⟩ = ω(t_a*), with the Gram matrix and the right-hand
    // side both brute-forced pointwise over S₃.
    let be = GroupBackend::s3().unwrap();
    let ctx = FourierContext::new(&be).unwrap();
    let mut rng = sampling::rng_from_seed(23);
    let f = random_function(6, &mut rng);
    let omega = be.function_to_functional(&f).unwrap();

    let idxs = be.all_indices();
    let n = idxs.len();
    // Gram[a][b] = ⟨Λ(t_b), Λ(t_a)⟩ = φ(t_a* t_b) = Σ_x conj(t_a(x)) t_b(x).
    let mut gram = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = DMatrix::<Complex64>::zeros(n, 1);
    for (ai, a) in idxs.iter().enumerate() {
        for (bi, b) in idxs.iter().enumerate() {
            let mut acc = c(0.0, 0.0);
            for x in 0..6 {
                acc += be.coefficient_value(a, x).conj() * be.coefficient_value(b, x);
            }
            gram[(ai, bi)] = acc;
        }
        // ω(t_a*) = Σ_x f(x) conj(t_a(x)).
        let mut acc = c(0.0, 0.0);
        for (x, fx) in f.iter().enumerate() {
            acc += fx * be.coefficient_value(a, x).conj();
        }
        rhs[(ai, 0)] = acc;
    }
    let sol = gram.lu().solve(&rhs).expect("Gram must be invertible");

    let xi = ctx.xi(&omega).unwrap();
    for (bi, b) in idxs.iter().enumerate() {
        assert!(
            (xi.get(b) - sol[(bi, 0)]).norm() < 1e-11,
            "ξ coefficient differs from dense solve at {b}"
        );
    }

    // ξ(0) = 0.
    let zero = qgft_core::Functional::zero(be.id());
    assert!(ctx.xi(&zero).unwrap().coeffs.is_empty());
}

#[test]
fn plancherel_constant_frozen_from_z2() {
    // Counting measure on G, blocks f̂(π) = Σ f(x)π(x): the normalization
    // linking the two sides is 1/|G|, derived by brute force on ℤ/2.
    let be = GroupBackend::cyclic(2).unwrap();
    // f = (a, b): f̂ = (a+b, a−b); Σ|f̂|²/2 = (|a+b|²+|a−b|²)/2 = |a|²+|b|².
    for (a, b) in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.3, -1.2), c(2.0, 0.7))] {
        let f = vec![a, b];
        let fhat = group_fourier(&f, be.table(), be.irreps()).unwrap();
        let lhs: f64 = f.iter().map(|v| v.norm_sqr()).sum();
        let rhs: f64 = fhat
            .blocks()
            .iter()
            .map(|(_, m)| m.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            / 2.0;
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

#[test]
fn plancherel_exhaustive_on_small_groups() {
    // Σ_x |f(x)|² = (1/|G|) Σ_π d_π ‖f̂(π)‖²_{S₂}.
    let mut rng = sampling::rng_from_seed(7);
    for be in [
        GroupBackend::cyclic(3).unwrap(),
        GroupBackend::cyclic(8).unwrap(),
        GroupBackend::s3().unwrap(),
    ] {
        let n = be.table().order();
        for _ in 0..50 {
            let f = random_function(n, &mut rng);
            let fhat = group_fourier(&f, be.table(), be.irreps()).unwrap();
            let lhs: f64 = f.iter().map(|v| v.norm_sqr()).sum();
            let rhs: f64 = fhat
                .blocks()
                .iter()
                .zip(be.irreps().irreps())
                .map(|((_, m), p)| {
                    p.dim as f64 * m.iter().map(|v| v.norm_sqr()).sum::<f64>()
                })
                .sum::<f64>()
                / n as f64;
            assert!((lhs - rhs).abs() < 1e-9 * lhs.max(1.0), "Plancherel fails on {}", be.id());
        }
    }
}

#[test]
fn calibration_recovers_the_plancherel_weight() {
    // φ̂(λ(f)) = f(e): the dual weight must be D̂⁽π⁾ = (d_π/|G|)·I.
    let mut rng = sampling::rng_from_seed(31);
    for be in [GroupBackend::cyclic(8).unwrap(), GroupBackend::s3().unwrap()] {
        let ctx = FourierContext::new(&be).unwrap();
        let n = be.table().order() as f64;
        for (k, p) in be.irreps().irreps().iter().enumerate() {
            let d = ctx
                .dual_weight()
                .diagonal(HalfInt::from_int(k as i32))
                .unwrap();
            for w in d.weights() {
                assert!(
                    (w - p.dim as f64 / n).abs() < 1e-10,
                    "dual weight at irrep {k} of {} is {w}",
                    be.id()
                );
            }
        }
        // And pointwise: φ̂(λ(ω_f)) = f(e) on random f.
        for _ in 0..25 {
            let f = random_function(be.table().order(), &mut rng);
            let omega = be.function_to_functional(&f).unwrap();
            let lam = ctx.fourier_f1(&omega).unwrap();
            let val = ctx.dual_weight().apply(&lam).unwrap();
            let expect = f[be.table().identity()];
            assert!((val - expect).norm() < 1e-10);
        }
    }
}

#[test]
fn plancherel_round_trip_on_group_backends() {
    let mut rng = sampling::rng_from_seed(101);
    for be in [GroupBackend::cyclic(8).unwrap(), GroupBackend::s3().unwrap()] {
        let ctx = FourierContext::new(&be).unwrap();
        for _ in 0..200 {
            let x = sampling::random_element(&be, &mut rng);
            // Norm preservation.
            let lam = ctx.fourier_f2(&x).unwrap();
            let primal = be.gns_norm(&ctx.gns_of_element(&x).unwrap()).unwrap();
            let dual = ctx.dual_gns_norm(&lam).unwrap();
            assert!((primal - dual).abs() < 1e-8 * primal.max(1.0));
            // Round trip.
            assert!(ctx.fourier_f2_inverse_check(&x).unwrap() < 1e-8);
        }
    }
}

#[test]
fn hausdorff_young_tracial() {
    let mut rng = sampling::rng_from_seed(55);
    for be in [GroupBackend::cyclic(8).unwrap(), GroupBackend::s3().unwrap()] {
        let ctx = FourierContext::new(&be).unwrap();
        for p in [1.0, 4.0 / 3.0, 1.5, 2.0] {
            for _ in 0..200 {
                let x = sampling::random_element(&be, &mut rng);
                let res = ctx
                    .fourier_fp(&x, &InterpolationParams::left(p).unwrap())
                    .unwrap();
                assert!(
                    res.hausdorff_young_ok(1e-8),
                    "HY violated on {} at p={p}: dual {} > primal {}",
                    be.id(),
                    res.dual_norm,
                    res.primal_norm
                );
            }
        }
    }
}

#[test]
fn counit_is_convolution_neutral_and_transport_is_identity() {
    let be = GroupBackend::s3().unwrap();
    let ctx = FourierContext::new(&be).unwrap();
    let mut rng = sampling::rng_from_seed(77);
    let f = random_function(6, &mut rng);
    let omega = be.function_to_functional(&f).unwrap();
    let eps = be.counit();
    let left = ctx.convolve(&eps, &omega).unwrap();
    let right = ctx.convolve(&omega, &eps).unwrap();
    assert!(left.sub(&omega).unwrap().coeffs.max_abs() < 1e-11);
    assert!(right.sub(&omega).unwrap().coeffs.max_abs() < 1e-11);

    // Tracial backend: the Izumi transport is the identity map for any z.
    let x = sampling::random_element(&be, &mut rng);
    let moved = ctx
        .izumi_transport(&x, c(-0.5, 0.3), c(0.4, -1.0), 1.5)
        .unwrap();
    assert!(moved.sub(&x).unwrap().coeffs.max_abs() == 0.0);
}

#[test]
fn module_action_three_formulations_agree_on_s3() {
    let be = GroupBackend::s3().unwrap();
    let ctx = FourierContext::new(&be).unwrap();
    let mut rng = sampling::rng_from_seed(99);
    let params = InterpolationParams::left(1.5).unwrap();
    for _ in 0..30 {
        let f = random_function(6, &mut rng);
        let omega = be.function_to_functional(&f).unwrap();
        let x = sampling::random_element(&be, &mut rng);
        let res = ctx.conv_module_action(&omega, &x, &params).unwrap();
        assert!(res.xi_residual < 1e-9, "ξ route residual {}", res.xi_residual);
        assert!(res.fourier_residual < 1e-10);
        // Third formulation, fully brute force: ω ∗ _xφ as functions,
        // (f ∗ g)(y) = Σ_{st=y} f(s) g(t) with g the density of _xφ.
        let g = be.element_to_function(&x).unwrap();
        let brute = be
            .function_to_functional(&group_convolve(&f, &g, be.table()))
            .unwrap();
        assert!(res.functional.sub(&brute).unwrap().coeffs.max_abs() < 1e-9);
    }
}
