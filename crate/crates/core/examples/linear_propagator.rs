//! The free harmonic-oscillator flow as a spectral multiplier: revival at
//! t = π, periodicity of |u|, and the level decomposition.

use hermion::family::field_family;
use hermion::spectral_propagator::{evolve_linear, level_count, projection};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> hermion::Result<()> {
    for d in 1..=3 {
        let f = &field_family(d, 10, 1, 3)[0];
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let revived = evolve_linear(f, PI);
        println!("d = {d}: |e^(-iπH) f - (-1)^d f| = {:.2e}", revived.max_abs_diff(&f.scale(Complex64::new(sign, 0.0)))?);
    }
    let f = &field_family(1, 10, 1, 3)[0];
    let mut sum = f.scale(Complex64::new(0.0, 0.0));
    for k in 0..level_count(1, 10) {
        let p = projection(f, k);
        println!("level {k}: ‖P_k f‖ = {:.4}", p.l2_norm());
        sum = sum.add(&p)?;
    }
    println!("Σ P_k f = f to {:.2e}", sum.max_abs_diff(f)?);
    for t in [0.3, 1.0, PI / 2.0] {
        println!("t = {t:.4}: ‖u(t)‖₂ = {:.15}", evolve_linear(f, t).l2_norm());
    }
    Ok(())
}
