//! Recomputes the Hartree transform constants from the mollified-kernel
//! oracle and prints them next to the pinned table.

#[path = "../tests/support/hartree_oracle.rs"]
mod hartree_oracle;

fn main() {
    for (d, gamma) in [(1usize, 0.4), (2, 0.5), (3, 1.0)] {
        let (mean, spread) = hartree_oracle::pinned_estimate(d, gamma);
        let at: Vec<String> =
            [0.5, 1.0, 2.0].iter().map(|&xi| format!("{:.15e}", hartree_oracle::constant_at(d, gamma, xi))).collect();
        println!("d = {d}, gamma = {gamma}: C = {mean:.15e} +/- {spread:.1e}  [{}]", at.join(", "));
    }
}
