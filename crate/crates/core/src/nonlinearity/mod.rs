//! Nonlinear terms `F(u)`: Hartree convolutions `(K ∗ |u|^{2k}) u`, powers
//! `±|u|^{2k} u`, and real-entire series `F(u_1, u_2)`, with the ratio
//! diagnostics behind the multilinear estimates.

mod convolution;
mod estimates;
mod kernel;
mod pointwise;

pub use convolution::{hartree_term, BoxGrid, ConvolutionPlan, BOUNDARY_DECAY};
pub use estimates::{check_multilinear_exponents, hls_exponent, hls_ratio, trilinear_ratio, MultilinearProbe};
pub use kernel::{
    extrapolated_hartree_transform, hartree_constant, hartree_kernel_fourier, kernel_split,
    mollified_hartree_transform, KernelSpec, Multiplier, Support, PINNED_HARTREE_CONSTANTS,
};
pub use pointwise::{
    power_nonlinearity, power_value, split_by_level, RealEntireSeries, SeriesTerm, DEFAULT_SERIES_DEGREE,
};
