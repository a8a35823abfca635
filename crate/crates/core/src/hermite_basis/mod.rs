//! Normalized Hermite functions, Gauss–Hermite quadrature, and the
//! grid ⇄ coefficient transforms in `d` dimensions.

mod field;
mod functions;
mod quadrature;
mod transform;

pub use field::{GridField, HermiteField};
pub use functions::{eigenvalue, hermite_1d, hermite_functions, hermite_nd, ln_factorial, PI_QUARTER_INV};
pub use quadrature::{gauss_hermite_rule, gauss_legendre, QuadratureRule, RuleKind};
pub use transform::{
    analysis_matrix, analyze, analyze_unchecked, check_resolution, evaluate, gauss_hermite_grid, gram_matrix,
    lp_norm, resolving_grid, sample_basis, synthesis_matrix, synthesize, uniform_grid,
};
