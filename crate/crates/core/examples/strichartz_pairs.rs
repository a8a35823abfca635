//! Admissible Strichartz pairs in exact rational arithmetic, and a
//! space-time norm of a free trajectory.

use hermion::hermite_basis::HermiteField;
use hermion::solver::{hartree_pair, is_admissible, linear_trace, spacetime_norm};
use hermion::spectral_propagator::SignConvention;
use num_rational::Ratio;

fn main() -> hermion::Result<()> {
    for gamma in [Ratio::new(3, 10), Ratio::new(7, 10)] {
        for d in 1..=3 {
            let (q, r) = hartree_pair(gamma, d)?;
            println!("γ = {gamma}, d = {d}: (q, r) = ({q}, {r}), admissible: {}", is_admissible(q, r, d));
        }
    }
    let phi = HermiteField::basis(1, 8, &[0])?.add(&HermiteField::basis(1, 8, &[3])?)?;
    let trace = linear_trace(&phi, 1.0, 33, SignConvention::Minus)?;
    println!("‖u‖ in L^8_t L^4_x on [0, 1]: {:.8}", spacetime_norm(&trace, 8.0, 4.0)?);
    Ok(())
}
