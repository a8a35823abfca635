//! Hermite analysis and synthesis: sample a Gaussian on a Gauss–Hermite grid,
//! recover its coefficients, and compare L^p norms computed two ways.

use hermion::hermite_basis::{analyze, lp_norm, resolving_grid, synthesize, GridField, HermiteField};
use num_complex::Complex64;

fn main() -> hermion::Result<()> {
    let cutoff = 24;
    let grid = resolving_grid(1, cutoff)?;
    // e^{-(x-1)²/2}: a shifted ground state, so only the low modes are large
    let u = GridField::from_fn(grid.clone(), |x| Complex64::new((-(x[0] - 1.0).powi(2) / 2.0).exp(), 0.0))?;
    let c = analyze(&u, cutoff)?;
    for n in 0..6 {
        println!("c_{n} = {:+.6e}", c.get(&[n]).re);
    }
    let back = synthesize(&c, &grid)?;
    let err = back.values().iter().zip(u.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("synthesis round trip: {err:.2e}");
    println!("‖u‖₂ from coefficients {:.12}, from nodes {:.12}", c.l2_norm(), u.l2_norm());
    for p in [1.0, 4.0] {
        println!("‖u‖_{p} = {:.10}", lp_norm(&c, p)?);
    }
    let phi3 = HermiteField::basis(1, cutoff, &[3])?;
    println!("energy of Φ₃ = {}", phi3.energy());
    Ok(())
}
