//! Strichartz bookkeeping: admissible pairs `2/q = d(1/2 − 1/r)` and the
//! space-time norm `‖u‖_{L^q_t L^r_x}` of a recorded trace.

use super::trace::{EvolutionTrace, Monitors, Snapshot};
use crate::error::{Error, Result};
use crate::hermite_basis::{lp_norm, HermiteField};
use crate::spectral_propagator::{LinearPropagator, SignConvention};
use num_rational::Ratio;

fn check_window(r: f64, dim: usize) -> Result<()> {
    let ok = match dim {
        0 => false,
        1 => r >= 2.0,
        2 => r >= 2.0 && r.is_finite(),
        d => r >= 2.0 && r < 2.0 * d as f64 / (d as f64 - 2.0),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ExponentRange(format!("r = {r} is outside the admissible window for d = {dim}")))
    }
}

/// `q` with `2/q = d(1/2 − 1/r)`; `r = 2` gives `q = ∞`.
pub fn admissible_pair(r: f64, dim: usize) -> Result<f64> {
    check_window(r, dim)?;
    let rhs = dim as f64 * (0.5 - 1.0 / r);
    Ok(if rhs == 0.0 { f64::INFINITY } else { 2.0 / rhs })
}

/// [`admissible_pair`] in exact arithmetic; `None` encodes `q = ∞`.
pub fn admissible_pair_exact(r: Ratio<i64>, dim: usize) -> Result<Option<Ratio<i64>>> {
    let two = Ratio::from_integer(2);
    let d = Ratio::from_integer(dim as i64);
    if r < two || (dim >= 3 && r >= two * d / (d - two)) || dim == 0 {
        return Err(Error::ExponentRange(format!("r = {r} is outside the admissible window for d = {dim}")));
    }
    let rhs = d * (Ratio::new(1, 2) - r.recip());
    Ok(if rhs == Ratio::from_integer(0) { None } else { Some(two / rhs) })
}

/// Whether `2/q = d(1/2 − 1/r)` holds exactly.
pub fn is_admissible(q: Ratio<i64>, r: Ratio<i64>, dim: usize) -> bool {
    Ratio::from_integer(2) / q == Ratio::from_integer(dim as i64) * (Ratio::new(1, 2) - r.recip())
}

/// The pair `(q, r) = (8/γ, 4d/(2d−γ))` used for the Hartree contraction.
pub fn hartree_pair(gamma: Ratio<i64>, dim: usize) -> Result<(Ratio<i64>, Ratio<i64>)> {
    let d = Ratio::from_integer(dim as i64);
    if gamma <= Ratio::from_integer(0) || gamma >= d {
        return Err(Error::ExponentRange(format!("need 0 < γ < d (got {gamma}, d = {dim})")));
    }
    let four = Ratio::from_integer(4);
    Ok((Ratio::from_integer(8) / gamma, four * d / (Ratio::from_integer(2) * d - gamma)))
}

/// `‖u‖_{L^q(I, L^r)}` over the snapshot times: spatial norms by quadrature,
/// then the trapezoid rule in `t` (`q = ∞` takes the maximum).
pub fn spacetime_norm(trace: &EvolutionTrace, q: f64, r: f64) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::invalid("space-time norm of an empty trace"));
    }
    if !(q >= 1.0) || !(r >= 1.0) {
        return Err(Error::ExponentRange(format!("exponents ({q}, {r}) must be at least 1")));
    }
    let values: Vec<f64> = trace.snapshots().iter().map(|s| lp_norm(&s.field, r)).collect::<Result<_>>()?;
    if q.is_infinite() {
        return Ok(values.iter().cloned().fold(0.0, f64::max));
    }
    if trace.len() < 2 {
        return Err(Error::invalid("a finite-q space-time norm needs at least two snapshots"));
    }
    let t = trace.times();
    let mut acc = 0.0;
    for j in 1..t.len() {
        acc += 0.5 * (t[j] - t[j - 1]) * (values[j].powf(q) + values[j - 1].powf(q));
    }
    Ok(acc.powf(1.0 / q))
}

/// `U(t)φ` at `samples + 1` equally spaced times on `[0, horizon]`.
pub fn linear_trace(phi: &HermiteField, horizon: f64, samples: usize, sign: SignConvention) -> Result<EvolutionTrace> {
    if !(horizon > 0.0) || samples == 0 {
        return Err(Error::invalid("linear trace needs a positive horizon and at least one interval"));
    }
    let prop = LinearPropagator::new(sign);
    let mut trace = EvolutionTrace::new();
    for j in 0..=samples {
        let t = horizon * j as f64 / samples as f64;
        let field = prop.evolve(phi, t);
        let monitors = Monitors::measure(&field, None, &[])?;
        trace.push(Snapshot { t, field, monitors, flags: vec![] })?;
    }
    Ok(trace)
}
