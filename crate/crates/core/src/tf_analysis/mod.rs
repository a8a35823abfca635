//! Short-time Fourier transform, Fourier–Wigner transform, special Hermite
//! functions, and discretized modulation-space norms.
//!
//! With the window `g = Φ_0` the two transforms are linked by
//! `F(x,y) = (2π)^{d/2} e^{-ix·y/2} V_g f(y, −x)`, so every modulation norm has
//! two independent quadrature routes plus, for basis fields, a closed form.

mod export;
mod lattice;
mod report;
mod stft;
mod wigner;

pub use export::{write_table_csv, BinaryDump, MAGIC};
pub use lattice::TFLattice;
pub use report::{embedding_ratio_report, evaluate_norm, NormKind, RatioRow};
pub use stft::{modulation_norm, stft, GridStftPlan, STFTTable, Signal, StftPlan};
pub use wigner::{
    fourier_wigner, mpp_norm_via_wigner, special_hermite, special_hermite_table, ui_identity_deviation, WignerPlan,
};
