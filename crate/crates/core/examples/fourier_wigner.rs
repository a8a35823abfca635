//! The Fourier–Wigner transform of Hermite functions: special Hermite
//! functions, their closed form, and the STFT identity that links the two.

use hermion::hermite_basis::HermiteField;
use hermion::tf_analysis::{fourier_wigner, mpp_norm_via_wigner, modulation_norm, special_hermite_table, ui_identity_deviation, TFLattice};

fn main() -> hermion::Result<()> {
    let lat = TFLattice::for_cutoff(1, 6, 0.25, 1.0)?;
    for n in 0..4 {
        let phi = HermiteField::basis(1, 6, &[n])?;
        let transform = fourier_wigner(&phi, &lat)?;
        let closed = special_hermite_table(&[n], &lat)?;
        let mut dev: f64 = 0.0;
        for i in 0..lat.nx() {
            for j in 0..lat.ny() {
                dev = dev.max((transform.get(&[i], &[j]) - closed.get(&[i], &[j])).norm());
            }
        }
        println!("Φ_{n}: transform vs closed form {dev:.1e}, identity deviation {:.1e}", ui_identity_deviation(&phi, &lat)?);
    }
    let f = HermiteField::basis(1, 6, &[0])?.add(&HermiteField::basis(1, 6, &[2])?)?;
    println!("M11 via STFT {:.10}, via Wigner {:.10}", modulation_norm(&f, 1.0, 1.0, &lat)?, mpp_norm_via_wigner(&f, 1.0, 1.0, &lat)?);
    Ok(())
}
