//! Seeded random coefficient data for property tests and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::backend::{Element, Functional, QgBackend};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream per case index, so parallel sweeps draw the same
/// samples regardless of scheduling.
pub fn rng_for_case(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Random element of the coefficient span with complex Gaussian
/// coefficients over all indices of the truncation.
pub fn random_element<B: QgBackend>(backend: &B, rng: &mut impl Rng) -> Element {
    let mut out = Element::zero(backend.id());
    for idx in backend.all_indices() {
        out.coeffs.insert(idx, gaussian(rng));
    }
    out
}

/// Random finitely supported functional.
pub fn random_functional<B: QgBackend>(backend: &B, rng: &mut impl Rng) -> Functional {
    let mut out = Functional::zero(backend.id());
    for idx in backend.all_indices() {
        out.coeffs.insert(idx, gaussian(rng));
    }
    out
}
