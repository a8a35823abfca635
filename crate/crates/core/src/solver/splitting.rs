//! Operator splitting: exact linear flow in coefficient space alternated with
//! the nodal nonlinear flow of [`Collocation`].

use super::collocation::Collocation;
use super::config::{Scheme, SolverConfig};
use super::picard::picard_window;
use super::trace::{EvolutionTrace, Monitors, Snapshot};
use crate::error::{Error, Result};
use crate::hermite_basis::HermiteField;
use crate::spectral_propagator::LinearPropagator;
use crate::tf_analysis::StftPlan;

/// Runs abort once any monitored norm exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// Evolves `u0` to the horizon and collects every snapshot.
pub fn evolve_nonlinear(u0: &HermiteField, cfg: &SolverConfig) -> Result<EvolutionTrace> {
    let mut trace = EvolutionTrace::new();
    evolve_streaming(u0, cfg, |s| trace.push(s.clone()))?;
    Ok(trace)
}

/// Evolves `u0`, handing each snapshot to `sink` as soon as it is taken, and
/// returns the field at the horizon.
///
/// A breach (conservation drift for gauge nonlinearities, blow-up, or a
/// non-finite value) is reported to `sink` as a flagged snapshot before the
/// error is returned.
pub fn evolve_streaming(
    u0: &HermiteField,
    cfg: &SolverConfig,
    mut sink: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<HermiteField> {
    let dim = u0.dim();
    cfg.validate(dim)?;
    let col = Collocation::new(&cfg.nonlinearity, cfg.coupling, dim, u0.cutoff())?;
    let prop = LinearPropagator::new(cfg.sign_convention);
    let plan = if cfg.monitors.p.is_empty() {
        None
    } else {
        Some(StftPlan::new(&cfg.monitors.lattice_for(dim, u0.cutoff())?, u0.cutoff())?)
    };
    let measure = |f: &HermiteField| Monitors::measure(f, plan.as_ref(), &cfg.monitors.p);

    let (steps, dt) = cfg.steps();
    let interval = cfg.snapshot_interval.unwrap_or(cfg.horizon / 10.0);
    let every = ((interval / dt).round() as usize).max(1);
    let gauge = col.is_gauge();
    let base_flags: Vec<String> = if gauge { vec![] } else { vec!["mass_unmonitored".into()] };

    let initial = measure(u0)?;
    let mass0 = initial.l2_norm;
    let mut flags = base_flags.clone();
    flags.push("initial".into());
    sink(&Snapshot { t: 0.0, field: u0.clone(), monitors: initial.clone(), flags })?;

    let mut c = u0.clone();
    for step in 1..=steps {
        c = match cfg.scheme {
            Scheme::Strang => {
                let half = prop.evolve(&c, 0.5 * dt);
                prop.evolve(&col.flow(&half, dt)?, 0.5 * dt)
            }
            Scheme::Lie => col.flow(&prop.evolve(&c, dt), dt)?,
            Scheme::Picard => picard_window(&col, &prop, &c, dt, cfg)?.field,
        };
        let t = step as f64 * dt;
        let mass = c.l2_norm();
        let energy = c.energy();
        let mut breach = None;
        if !mass.is_finite() || !energy.is_finite() {
            breach = Some("non-finite field".to_string());
        } else if gauge && mass0 > 0.0 && (mass / mass0 - 1.0).abs() > cfg.tolerances.conservation {
            breach = Some(format!(
                "relative l2 drift {:.3e} exceeds {:.1e}",
                (mass / mass0 - 1.0).abs(),
                cfg.tolerances.conservation
            ));
        } else if mass > BLOW_UP_FACTOR * mass0 || energy > BLOW_UP_FACTOR * initial.energy {
            breach = Some("norm growth beyond the blow-up guard".to_string());
        }
        let record = breach.is_some() || step % every == 0 || step == steps;
        if !record {
            continue;
        }
        let monitors = match (&breach, measure(&c)) {
            (None, Ok(m)) => m,
            (None, Err(e)) => return Err(e),
            (Some(_), m) => m.unwrap_or(Monitors { l2_norm: mass, mpp_norms: vec![], energy }),
        };
        if breach.is_none() && monitors.growth_over(&initial) > BLOW_UP_FACTOR {
            breach = Some("modulation norm growth beyond the blow-up guard".to_string());
        }
        let mut flags = base_flags.clone();
        if let Some(reason) = &breach {
            flags.push("breach".into());
            if monitors.all_finite() {
                sink(&Snapshot { t, field: c.clone(), monitors, flags })?;
            }
            return Err(Error::MonitorBreach { t, reason: reason.clone() });
        }
        if step == steps {
            flags.push("final".into());
        }
        sink(&Snapshot { t, field: c.clone(), monitors, flags })?;
    }
    Ok(c)
}
