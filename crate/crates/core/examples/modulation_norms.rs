//! Modulation-space norms from the short-time Fourier transform: M^{p,p} is
//! kept by the free flow, M^{1,2} is not.

use hermion::hermite_basis::HermiteField;
use hermion::spectral_propagator::evolve_linear;
use hermion::tf_analysis::{modulation_norm, stft, TFLattice};
use std::f64::consts::PI;

fn main() -> hermion::Result<()> {
    let f = HermiteField::basis(1, 8, &[0])?.add(&HermiteField::basis(1, 8, &[1])?)?;
    let lat = TFLattice::for_cutoff(1, 8, 0.25, 1.0)?;
    let table = stft(&f, &lat)?;
    println!("lattice {:?}, boundary/max = {:.1e}", table.shape(), table.boundary_relative());
    let base: Vec<f64> = [(1.0, 1.0), (2.0, 2.0), (4.0, 4.0), (1.0, 2.0)]
        .iter()
        .map(|&(p, q)| modulation_norm(&f, p, q, &lat))
        .collect::<hermion::Result<_>>()?;
    println!("t       M11      M22      M44      M12");
    for j in 0..=8 {
        let t = j as f64 * PI / 8.0;
        let u = evolve_linear(&f, t);
        let row: Vec<String> = [(1.0, 1.0), (2.0, 2.0), (4.0, 4.0), (1.0, 2.0)]
            .iter()
            .zip(&base)
            .map(|(&(p, q), b)| modulation_norm(&u, p, q, &lat).map(|m| format!("{:+.1e}", m / b - 1.0)))
            .collect::<hermion::Result<_>>()?;
        println!("{t:.3}  {}", row.join("  "));
    }
    Ok(())
}
