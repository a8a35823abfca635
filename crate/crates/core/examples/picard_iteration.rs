//! Picard iteration for the Duhamel formula on the contraction time
//! T = 1/(2cM²), compared against Strang splitting.

use hermion::family::smooth_family;
use hermion::nonlinearity::KernelSpec;
use hermion::solver::{empirical_trilinear_constant, evolve_nonlinear, local_existence_time, picard_solve, NonlinearitySpec, Scheme, SolverConfig};
use hermion::tf_analysis::{modulation_norm, TFLattice};
use num_complex::Complex64;

fn main() -> hermion::Result<()> {
    let kernel = KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 };
    let c = empirical_trilinear_constant(&kernel, &smooth_family(1, 8, 20, 3.0, 1), 1.0, 1.0)?;
    let u0 = smooth_family(1, 8, 1, 3.0, 5)[0].scale(Complex64::new(0.5, 0.0));
    let m = 2.0 * modulation_norm(&u0, 1.0, 1.0, &TFLattice::for_cutoff(1, 8, 0.25, 1.0)?)?;
    let horizon = local_existence_time(m, c, 10.0)?;
    println!("c = {c:.4}, M = {m:.4}, T = {horizon:.4}");
    let nonlinearity = NonlinearitySpec::Hartree { kernel, k: 1, box_grid: None };
    let cfg = SolverConfig::new(horizon, horizon / 200.0, Scheme::Strang, nonlinearity);
    let picard = picard_solve(&u0, &cfg)?;
    for (i, (d, r)) in picard.differences.iter().zip(picard.ratios.iter().map(Some).chain(std::iter::repeat(None))).enumerate() {
        println!("iterate {i}: difference {d:.3e}{}", r.map_or(String::new(), |r| format!(", ratio {r:.3}")));
    }
    let strang = evolve_nonlinear(&u0, &cfg)?;
    println!("Picard vs Strang at T: {:.2e}", picard.field.sub(&strang.last().unwrap().field)?.l2_norm());
    Ok(())
}
