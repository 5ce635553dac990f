//! Fixed-step RK4 on a piecewise-affine force law.
//!
//! The integrator always works inside one "mode": a single affine piece of the
//! force curve selected by the direction of motion. Leaving the piece or
//! reversing the velocity is an event, localized by bisection on the sub-step.

use super::carabiner::{solve_segment_tension, CarabinerScenario};
use super::force::{ForceCurve, Piece};
use super::trajectory::{EventKind, Sample, Trajectory, TrajectoryMeta};
use super::IntegratorConfig;
use crate::analysis::{initial_velocity, Scenario};
use crate::constitutive::{Direction, EnergyDensity, HysteresisLaw, TensionCurve};
use crate::error::{Error, Result};

/// Balance tolerance for deciding that the climber is held at rest.
const TRAP_TOL: f64 = 1e-9;
/// Event budget within a single grid step before the motion is declared stalled.
const MAX_EVENTS_PER_STEP: usize = 256;

enum Kind {
    Elastic,
    Hysteretic {
        law: HysteresisLaw,
        length: f64,
    },
    Carabiner {
        law: TensionCurve,
        energy: EnergyDensity,
        mu: f64,
        l1: f64,
        l2: f64,
    },
}

pub(crate) struct Model {
    up: ForceCurve,
    down: ForceCurve,
    kind: Kind,
}

impl Model {
    pub fn elastic(curve: &TensionCurve, length: f64) -> Self {
        let f = ForceCurve::from_tension(curve, length);
        Self {
            up: f.clone(),
            down: f,
            kind: Kind::Elastic,
        }
    }

    pub fn hysteretic(law: HysteresisLaw, length: f64) -> Self {
        Self {
            up: ForceCurve::from_tension(law.loading(), length),
            down: ForceCurve::from_tension(law.unloading(), length),
            kind: Kind::Hysteretic { law, length },
        }
    }

    pub fn carabiner(curve: ForceCurve, law: TensionCurve, cs: &CarabinerScenario) -> Self {
        Self {
            up: curve.clone(),
            down: curve,
            kind: Kind::Carabiner {
                energy: law.energy(),
                law,
                mu: cs.mu,
                l1: cs.upper_length,
                l2: cs.lower_length,
            },
        }
    }

    fn curve(&self, dir: f64) -> &ForceCurve {
        if dir > 0.0 {
            &self.up
        } else {
            &self.down
        }
    }

    fn is_hysteretic(&self) -> bool {
        matches!(self.kind, Kind::Hysteretic { .. })
    }
}

#[derive(Debug, Clone, Copy)]
struct State {
    d: f64,
    v: f64,
}

struct Mode {
    piece: Piece,
    dir: f64,
}

enum Exit {
    Crossing,
    Turn,
}

/// Appends `s`, merging it into the last row when it does not advance time.
fn push(samples: &mut Vec<Sample>, s: Sample) {
    match samples.last_mut() {
        Some(last) if s.t <= last.t => {
            let event = s.event.or(last.event);
            *last = Sample { event, ..s };
        }
        _ => samples.push(s),
    }
}

pub(crate) struct Engine {
    model: Model,
    cfg: IntegratorConfig,
    mass: f64,
    gravity: f64,
    taut_length: f64,
    max_stretch: f64,
    v0: f64,
    law_id: String,
}

impl Engine {
    pub fn new(s: &Scenario, model: Model, cfg: &IntegratorConfig, law_id: String) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            model,
            cfg: *cfg,
            mass: s.mass,
            gravity: s.gravity,
            taut_length: s.length,
            max_stretch: s.max_stretch,
            v0: initial_velocity(s),
            law_id,
        })
    }

    fn weight(&self) -> f64 {
        self.mass * self.gravity
    }

    fn mode(&self, d: f64, dir: f64) -> Mode {
        let curve = self.model.curve(dir);
        Mode {
            piece: *curve.piece(curve.select(d, dir)),
            dir,
        }
    }

    fn accel(&self, piece: &Piece, d: f64) -> f64 {
        self.gravity - piece.tension(d) / self.mass
    }

    fn rk4(&self, piece: &Piece, x: State, h: f64) -> State {
        let f = |s: State| (s.v, self.accel(piece, s.d));
        let (k1d, k1v) = f(x);
        let (k2d, k2v) = f(State {
            d: x.d + 0.5 * h * k1d,
            v: x.v + 0.5 * h * k1v,
        });
        let (k3d, k3v) = f(State {
            d: x.d + 0.5 * h * k2d,
            v: x.v + 0.5 * h * k2v,
        });
        let (k4d, k4v) = f(State {
            d: x.d + h * k3d,
            v: x.v + h * k3v,
        });
        State {
            d: x.d + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
            v: x.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        }
    }

    fn exit(mode: &Mode, x: State) -> Option<Exit> {
        if x.v * mode.dir < 0.0 {
            Some(Exit::Turn)
        } else if (mode.dir > 0.0 && x.d > mode.piece.end)
            || (mode.dir < 0.0 && x.d < mode.piece.start)
        {
            Some(Exit::Crossing)
        } else {
            None
        }
    }

    /// True when the loading branch can hold the climber up and the unloading
    /// branch cannot pull it back: the climber stays put.
    fn trapped(&self, d: f64) -> bool {
        let w = self.weight();
        let b_up = self.model.up.tension(d, 1.0);
        let b_down = self.model.down.tension(d, -1.0);
        b_up >= w * (1.0 - TRAP_TOL) && b_down <= w * (1.0 + TRAP_TOL)
    }

    fn sample(
        &mut self,
        t: f64,
        x: State,
        dir: f64,
        tension: f64,
        event: Option<EventKind>,
    ) -> Result<Sample> {
        let y = self.taut_length + x.d;
        let mut strain = y / self.taut_length - 1.0;
        let mut strain_upper = None;
        let (e_el, e_diss) = match &mut self.model.kind {
            Kind::Elastic => (self.model.up.potential(x.d), 0.0),
            Kind::Hysteretic { law, length } => {
                let dir = if dir > 0.0 {
                    Direction::Increasing
                } else {
                    Direction::Decreasing
                };
                law.hysteretic_tension(strain, dir);
                (
                    *length * law.stored_energy(strain),
                    *length * law.dissipated(),
                )
            }
            Kind::Carabiner {
                law,
                energy,
                mu,
                l1,
                l2,
            } => {
                let mut upper = 0.0;
                if x.d > 0.0 {
                    let sol = solve_segment_tension(law, *mu, *l1, *l2, x.d)?;
                    strain = sol.strain_lower;
                    upper = sol.strain_upper;
                }
                strain_upper = Some(upper);
                let e_el = *l1 * energy.value(upper) + *l2 * energy.value(strain);
                let friction = (self.model.up.potential(x.d) - e_el).max(0.0);
                (e_el, friction)
            }
        };
        Ok(Sample {
            t,
            y,
            v: x.v,
            strain,
            strain_upper,
            tension,
            e_kin: 0.5 * self.mass * x.v * x.v,
            e_grav: -self.weight() * y,
            e_el,
            e_diss,
            event,
        })
    }

    pub fn run(mut self, require_rest: bool) -> Result<Trajectory> {
        let cfg = self.cfg;
        let h = cfg.step;
        let weight = self.weight();
        let limit = self.max_stretch + cfg.elongation_tol * (self.taut_length + self.max_stretch);
        let hysteretic = self.model.is_hysteretic();

        let mut samples: Vec<Sample> = Vec::new();

        let mut x = State { d: 0.0, v: self.v0 };
        let mut t = 0.0;

        if self.v0 <= 0.0 && self.trapped(0.0) {
            let s = self.sample(0.0, x, 1.0, weight, Some(EventKind::Rest))?;
            push(&mut samples, s);
            return self.finish(samples);
        }

        let mut mode = self.mode(x.d, 1.0);
        let first_event = (self.v0 > 0.0).then_some(EventKind::Taut);
        let s = self.sample(t, x, mode.dir, mode.piece.tension(x.d), first_event)?;
        let scale = {
            let e0 = s.total_energy().abs();
            if e0 > 0.0 {
                e0
            } else {
                weight * (self.taut_length + self.max_stretch)
            }
        };
        let e_start = s.total_energy();
        push(&mut samples, s);

        let mut ke_since_turn = 0.5 * self.mass * self.v0 * self.v0;
        let mut n: u64 = 0;
        let mut stop: Option<EventKind> = None;

        'outer: while t < cfg.max_time {
            let t_next = ((n + 1) as f64 * h).min(cfg.max_time);
            let mut events = 0usize;
            while t < t_next {
                let dt = t_next - t;
                let x1 = self.rk4(&mode.piece, x, dt);
                if Self::exit(&mode, x1).is_none() {
                    x = x1;
                    t = t_next;
                    ke_since_turn = ke_since_turn.max(0.5 * self.mass * x.v * x.v);
                    break;
                }
                let (mut lo, mut hi) = (0.0, dt);
                while hi - lo > cfg.event_tol {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if Self::exit(&mode, self.rk4(&mode.piece, x, mid)).is_some() {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let xe = self.rk4(&mode.piece, x, hi);
                let exit = Self::exit(&mode, xe).unwrap_or(Exit::Crossing);
                t = if hi >= dt { t_next } else { t + hi };
                events += 1;
                match exit {
                    Exit::Turn => {
                        let pre = mode.piece.tension(xe.d);
                        x = State { d: xe.d, v: 0.0 };
                        let new_dir = -mode.dir;
                        if let Kind::Hysteretic { law, length } = &mut self.model.kind {
                            law.reverse(x.d / *length);
                        }
                        let at_rest = self.trapped(x.d)
                            || (hysteretic && ke_since_turn < cfg.rest_energy)
                            || events > MAX_EVENTS_PER_STEP;
                        if at_rest {
                            let b_down = self.model.down.tension(x.d, -1.0);
                            let b_up = self.model.up.tension(x.d, 1.0).max(b_down);
                            let tension = weight.clamp(b_down, b_up);
                            let s = self.sample(t, x, new_dir, tension, Some(EventKind::Rest))?;
                            push(&mut samples, s);
                            stop = Some(EventKind::Rest);
                            break 'outer;
                        }
                        let s = self.sample(t, x, new_dir, pre, Some(EventKind::Turn))?;
                        push(&mut samples, s);
                        ke_since_turn = 0.0;
                        mode = self.mode(x.d, new_dir);
                        if cfg.stop_at_arrest {
                            stop = Some(EventKind::Turn);
                            break 'outer;
                        }
                    }
                    Exit::Crossing => {
                        x = xe;
                        ke_since_turn = ke_since_turn.max(0.5 * self.mass * x.v * x.v);
                        let was_slack = mode.piece.start.is_infinite();
                        mode = self.mode(x.d, mode.dir);
                        let now_slack = mode.piece.start.is_infinite();
                        let event = match (was_slack, now_slack) {
                            (true, false) => Some(EventKind::Taut),
                            (false, true) => Some(EventKind::Slack),
                            _ => None,
                        };
                        let s = self.sample(t, x, mode.dir, mode.piece.tension(x.d), event)?;
                        push(&mut samples, s);
                    }
                }
                if cfg.enforce_elongation && x.d > limit {
                    return Err(Error::ElongationExceeded {
                        t,
                        y: self.taut_length + x.d,
                        limit: self.taut_length + self.max_stretch,
                    });
                }
            }
            n += 1;
            if cfg.enforce_elongation && x.d > limit {
                return Err(Error::ElongationExceeded {
                    t,
                    y: self.taut_length + x.d,
                    limit: self.taut_length + self.max_stretch,
                });
            }
            let last_step = t >= cfg.max_time;
            if n % cfg.record_every as u64 == 0 || last_step {
                let s = self.sample(t, x, mode.dir, mode.piece.tension(x.d), None)?;
                let drift = (s.total_energy() - e_start).abs() / scale;
                if drift > 100.0 * cfg.energy_tol {
                    return Err(Error::StepTooLarge { t, drift });
                }
                push(&mut samples, s);
            }
        }

        if stop.is_none() && t >= cfg.max_time {
            let s = self.sample(t, x, mode.dir, mode.piece.tension(x.d), None)?;
            push(&mut samples, s);
        }
        if require_rest && stop != Some(EventKind::Rest) {
            return Err(Error::NoRest {
                t_max: cfg.max_time,
            });
        }
        self.finish(samples)
    }

    fn finish(self, samples: Vec<Sample>) -> Result<Trajectory> {
        let meta = TrajectoryMeta {
            taut_length: self.taut_length,
            mass: self.mass,
            gravity: self.gravity,
            max_stretch: self.max_stretch,
            law_id: self.law_id,
            config: self.cfg,
        };
        Ok(Trajectory::new(meta, samples))
    }
}
