//! Time evolution of `i∂ₜu − Hu = F(u)`: Picard iteration of the Duhamel map
//! and Lie/Strang splitting, with conservation and growth monitors.
//!
//! The Duhamel integrand is `U(t−τ)F(u(τ))`. The linear group follows
//! [`SignConvention`](crate::spectral_propagator::SignConvention); the default
//! `e^{−itH}` solves `i∂ₜu − Hu = 0`.

mod collocation;
mod config;
mod picard;
mod splitting;
mod strichartz;
mod trace;

pub use collocation::Collocation;
pub use config::{MonitorConfig, NonlinearitySpec, Scheme, SolverConfig, Tolerances};
pub use picard::{empirical_trilinear_constant, local_existence_time, picard_solve, PicardOutcome, TRILINEAR_SAFETY};
pub use splitting::{evolve_nonlinear, evolve_streaming, BLOW_UP_FACTOR};
pub use strichartz::{
    admissible_pair, admissible_pair_exact, hartree_pair, is_admissible, linear_trace, spacetime_norm,
};
pub use trace::{EvolutionTrace, Monitors, Snapshot, TraceRecord};
