//! Seeded random field families used by the diagnostics and the verify suite.

use crate::hermite_basis::HermiteField;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Unit-norm field with independent complex Gaussian coefficients.
pub fn random_field(dim: usize, cutoff: usize, rng: &mut ChaCha8Rng) -> HermiteField {
    let count = cutoff.pow(dim as u32);
    let coeffs: Vec<Complex64> = (0..count)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    let f = HermiteField::from_coeffs(dim, cutoff, coeffs).expect("count matches cutoff^dim");
    let n = f.l2_norm();
    f.scale(Complex64::new(1.0 / n, 0.0))
}

/// `count` unit-norm random fields drawn from one seeded stream.
pub fn field_family(dim: usize, cutoff: usize, count: usize, seed: u64) -> Vec<HermiteField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_field(dim, cutoff, &mut rng)).collect()
}

/// Family whose coefficients decay like `e^{-|α|/decay}`, so the fields stay
/// well inside a fixed spatial box.
pub fn smooth_family(dim: usize, cutoff: usize, count: usize, decay: f64, seed: u64) -> Vec<HermiteField> {
    field_family(dim, cutoff, count, seed)
        .into_iter()
        .map(|f| {
            let degrees = f.degrees();
            let coeffs: Vec<Complex64> =
                f.coeffs().iter().zip(&degrees).map(|(c, &k)| c * (-(k as f64) / decay).exp()).collect();
            let g = HermiteField::from_coeffs(dim, cutoff, coeffs).expect("same shape");
            let n = g.l2_norm();
            g.scale(Complex64::new(1.0 / n, 0.0))
        })
        .collect()
}
