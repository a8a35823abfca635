//! The Hartree kernel |x|^{-γ}: its Fourier constant, the split into a
//! bounded and an integrable multiplier, and HLS scale invariance.

use hermion::hermite_basis::{uniform_grid, GridField};
use hermion::nonlinearity::{extrapolated_hartree_transform, hartree_constant, hls_exponent, hls_ratio, kernel_split};
use num_complex::Complex64;

fn main() -> hermion::Result<()> {
    for (d, gamma) in [(1, 0.4), (2, 0.5), (3, 1.0)] {
        let c = hartree_constant(d, gamma)?;
        let numeric = extrapolated_hartree_transform(d, gamma, 1.0)?;
        println!("d = {d}, γ = {gamma}: C = {c:.10}, numerical transform at |ξ| = 1: {numeric:.10}");
    }
    let (inner, outer) = kernel_split(1.0, 0.4, 1)?;
    println!("split at |ξ| = 0.5: {:.6} + {:.6}", inner.eval(&[0.5])?, outer.eval(&[0.5])?);
    let (gamma, p) = (0.5, 4.0 / 3.0);
    println!("HLS target exponent q = {}", hls_exponent(1, gamma, p)?);
    for lambda in [0.5, 1.0, 2.0] {
        let f = GridField::from_fn(uniform_grid(1, 40.0, 4001)?, |x| Complex64::new((-(x[0] / lambda).powi(2)).exp(), 0.0))?;
        println!("λ = {lambda}: ratio {:.8}", hls_ratio(&f, gamma, p)?);
    }
    Ok(())
}
