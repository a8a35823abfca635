//! Strang splitting for cubic and Hartree nonlinearities: mass stays put,
//! and halving dt cuts the error by four.

use hermion::family::smooth_family;
use hermion::nonlinearity::KernelSpec;
use hermion::solver::{evolve_nonlinear, NonlinearitySpec, Scheme, SolverConfig};

fn config(nonlinearity: NonlinearitySpec, dt: f64) -> SolverConfig {
    SolverConfig::new(0.5, dt, Scheme::Strang, nonlinearity)
}

fn main() -> hermion::Result<()> {
    let u0 = &smooth_family(1, 16, 1, 3.0, 2)[0];
    let cubic = NonlinearitySpec::Power { k: 1, sign: 1.0 };
    let hartree = NonlinearitySpec::Hartree { kernel: KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 }, k: 1, box_grid: None };
    for (name, nl) in [("cubic", cubic.clone()), ("hartree", hartree)] {
        let trace = evolve_nonlinear(u0, &config(nl, 1e-3))?;
        let first = &trace.snapshots()[0].monitors;
        let last = &trace.last().unwrap().monitors;
        println!("{name}: {} snapshots, mass drift {:.1e}, energy {:.6} -> {:.6}",
            trace.len(), last.l2_norm / first.l2_norm - 1.0, first.energy, last.energy);
    }
    let finals: Vec<_> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| evolve_nonlinear(u0, &config(cubic.clone(), dt)).map(|t| t.last().unwrap().field.clone()))
        .collect::<hermion::Result<_>>()?;
    let coarse = finals[0].sub(&finals[1])?.l2_norm();
    let fine = finals[1].sub(&finals[2])?.l2_norm();
    println!("observed order {:.4}", (coarse / fine).log2());
    Ok(())
}
