//! Climber–rope dynamics: taut/slack event handling, carabiner and
//! hysteretic laws, and the energy ledger.

mod carabiner;
mod engine;
mod force;
mod trajectory;

pub use carabiner::{capstan_mu, solve_segment_tension, CarabinerScenario, SegmentSolution};
pub use trajectory::{EventKind, Sample, Trajectory, TrajectoryMeta, TRAJECTORY_HEADER};

use serde::{Deserialize, Serialize};

use crate::analysis::Scenario;
use crate::constitutive::{HysteresisLaw, TensionCurve};
use crate::error::{Error, Result};
use engine::{Engine, Model};

/// Integration settings. Fixed-step fourth-order Runge–Kutta with bisection
/// localization of knot crossings, taut/slack transitions and velocity
/// reversals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Step size, s.
    pub step: f64,
    /// Time resolution of event localization, s.
    pub event_tol: f64,
    pub max_time: f64,
    /// Record one uniform sample every this many steps; events are always recorded.
    pub record_every: usize,
    /// Stop at the first velocity reversal.
    pub stop_at_arrest: bool,
    /// Fail with `ElongationExceeded` once the stretch passes
    /// `max_stretch + elongation_tol·(taut_length + max_stretch)`.
    pub enforce_elongation: bool,
    pub elongation_tol: f64,
    /// Relative energy-drift tolerance; drift beyond 100× fails with `StepTooLarge`.
    pub energy_tol: f64,
    /// Kinetic-energy threshold (J) below which a hysteretic rope is at rest.
    pub rest_energy: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 1e-5,
            event_tol: 1e-12,
            max_time: 5.0,
            record_every: 10,
            stop_at_arrest: false,
            enforce_elongation: true,
            elongation_tol: 1e-3,
            energy_tol: 1e-6,
            rest_energy: 1e-6,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) {
            return Err(Error::Config(format!("step must be > 0, got {}", self.step)));
        }
        if !(self.event_tol > 0.0 && self.event_tol < self.step) {
            return Err(Error::Config(format!(
                "event_tol must lie in (0, step), got {}",
                self.event_tol
            )));
        }
        if !(self.max_time > 0.0) || self.record_every == 0 {
            return Err(Error::Config(
                "max_time must be > 0 and record_every >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Elastic or hysteretic constitutive law driving a simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum RopeLaw {
    Elastic(TensionCurve),
    Hysteretic(HysteresisLaw),
}

impl RopeLaw {
    fn id(&self) -> String {
        match self {
            RopeLaw::Elastic(c) => format!("elastic({} knots)", c.knots().len()),
            RopeLaw::Hysteretic(h) => format!(
                "hysteretic({}/{} knots)",
                h.loading().knots().len(),
                h.unloading().knots().len()
            ),
        }
    }
}

impl From<TensionCurve> for RopeLaw {
    fn from(c: TensionCurve) -> Self {
        RopeLaw::Elastic(c)
    }
}

impl From<&TensionCurve> for RopeLaw {
    fn from(c: &TensionCurve) -> Self {
        RopeLaw::Elastic(c.clone())
    }
}

impl From<HysteresisLaw> for RopeLaw {
    fn from(h: HysteresisLaw) -> Self {
        RopeLaw::Hysteretic(h)
    }
}

impl From<&HysteresisLaw> for RopeLaw {
    fn from(h: &HysteresisLaw) -> Self {
        RopeLaw::Hysteretic(h.clone())
    }
}

/// Energy bookkeeping at one state, in joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLedger {
    pub e_kin: f64,
    /// Gravitational potential, zero at the anchor and decreasing downwards.
    pub e_grav: f64,
    pub e_el: f64,
    pub e_diss: f64,
}

impl EnergyLedger {
    pub fn total(&self) -> f64 {
        self.e_kin + self.e_grav + self.e_el + self.e_diss
    }
}

/// Ledger of a single rope at climber position `y` and velocity `v` under
/// homogeneous stretching.
pub fn energy_ledger(s: &Scenario, law: &RopeLaw, y: f64, v: f64) -> EnergyLedger {
    let strain = y / s.length - 1.0;
    let (e_el, e_diss) = match law {
        RopeLaw::Elastic(c) => (s.length * c.energy().value(strain), 0.0),
        RopeLaw::Hysteretic(h) => (
            s.length * h.stored_energy(strain),
            s.length * h.dissipated(),
        ),
    };
    EnergyLedger {
        e_kin: 0.5 * s.mass * v * v,
        e_grav: -s.weight() * y,
        e_el,
        e_diss,
    }
}

/// Simulates a fall from the taut instant, `(y, v) = (L, v0)`, until
/// `max_time`, or until rest for a hysteretic law.
pub fn simulate_fall(
    s: &Scenario,
    law: impl Into<RopeLaw>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    s.validate()?;
    let law = law.into();
    let id = law.id();
    let model = match law {
        RopeLaw::Elastic(c) => Model::elastic(&c, s.length),
        RopeLaw::Hysteretic(mut h) => {
            h.reset();
            Model::hysteretic(h, s.length)
        }
    };
    Engine::new(s, model, cfg, id)?.run(false)
}

/// Runs a hysteretic law through repeated stretch/retract cycles until the
/// climber comes to rest; fails with `NoRest` otherwise.
pub fn simulate_cycles(
    s: &Scenario,
    law: &HysteresisLaw,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    s.validate()?;
    let mut h = law.clone();
    h.reset();
    let id = RopeLaw::Hysteretic(h.clone()).id();
    Engine::new(s, Model::hysteretic(h, s.length), cfg, id)?.run(true)
}

/// Simulates a fall with the rope running over a carabiner. The climber
/// starts at `l1 + l2` with the impact speed of the base scenario.
pub fn simulate_carabiner_fall(
    cs: &CarabinerScenario,
    law: &TensionCurve,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cs.validate()?;
    let curve = carabiner::equivalent_force_curve(law, cs.mu, cs.upper_length, cs.lower_length)?;
    let model = Model::carabiner(curve, law.clone(), cs);
    let id = format!("carabiner(mu = {}, {} knots)", cs.mu, law.knots().len());
    Engine::new(&cs.base(), model, cfg, id)?.run(false)
}
