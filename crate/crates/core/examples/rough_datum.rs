//! The slowly decaying datum Σ |k|^{-d/q-ε} e^{ik·x} e^{-|x|²}: every
//! truncation is smooth, but the norms creep up as kmax grows.

use hermion::cli_io::{make_datum, DatumSpec};

fn main() -> hermion::Result<()> {
    for (kmax, cutoff) in [(4, 48), (8, 96), (16, 256)] {
        let d = make_datum(&DatumSpec::RoughExample { q: 2.0, epsilon: 0.1, kmax }, 1, cutoff)?;
        let tail = d.tail.unwrap();
        println!(
            "kmax {kmax:>2}: ‖u‖₂ = {:.10} (closed form {:.10}), energy {:.1}, next term {:.3}, ℓ^q tail {:.3}",
            d.field.l2_norm(), d.exact_l2.unwrap(), d.field.energy(), tail.tail_term, tail.lq_tail
        );
    }
    match make_datum(&DatumSpec::RoughExample { q: 2.0, epsilon: 0.1, kmax: 16 }, 1, 64) {
        Err(e) => println!("kmax 16 at cutoff 64: {e}"),
        Ok(_) => println!("kmax 16 at cutoff 64 unexpectedly resolved"),
    }
    Ok(())
}
