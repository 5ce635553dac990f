//! Numerical search for the rope law with the smallest peak force.
//!
//! Candidate laws are monotone piecewise-linear curves on a fixed strain grid,
//! parameterized by non-negative tension increments. A coordinate pattern
//! search minimizes the simulated peak tension plus an exact penalty on
//! overshooting the elongation budget.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{lower_bound_b0, Scenario};
use crate::constitutive::{TensionCurve, DEFAULT_RAMP};
use crate::dynamics::{simulate_fall, IntegratorConfig};
use crate::error::{Error, Result};

const PENALTY_WEIGHT: f64 = 100.0;
/// Relative elongation overshoot still counted as arresting within budget.
const FEASIBILITY_TOL: f64 = 1e-6;
const BOUND_TOL: f64 = 1e-3;
/// Laws stretching beyond `(1 + REJECT_FACTOR)·ΔL` are rejected outright.
const REJECT_FACTOR: f64 = 2.0;
pub const MIN_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// First knot at the ramp width, the rest uniform up to `ΔL/L`.
    #[default]
    Uniform,
    /// First knot at the ramp width, the rest geometric up to `ΔL/L`.
    Log,
}

/// Fixed strain grid on `(0, ΔL/L]`; a law is the cumulative sum of
/// non-negative increments placed on it.
#[derive(Debug, Clone, PartialEq)]
pub struct LawParameterization {
    strains: Vec<f64>,
}

impl LawParameterization {
    pub fn new(s: &Scenario, n_knots: usize, kind: GridKind) -> Result<Self> {
        s.validate()?;
        if n_knots < 2 {
            return Err(Error::Usage(format!("need at least 2 knots, got {n_knots}")));
        }
        let top = s.max_stretch / s.length;
        let first = DEFAULT_RAMP.min(0.5 * top / (n_knots - 1) as f64);
        let m = (n_knots - 1) as f64;
        let mut strains = vec![first];
        for k in 1..n_knots {
            let f = k as f64 / m;
            strains.push(match kind {
                GridKind::Uniform => f * top,
                GridKind::Log => first * (top / first).powf(f),
            });
        }
        Self::from_strains(strains)
    }

    pub fn from_strains(strains: Vec<f64>) -> Result<Self> {
        if strains.len() < 2 {
            return Err(Error::Usage("need at least 2 knots".into()));
        }
        if !(strains[0] > 0.0) || strains.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve(
                "grid strains must be positive and strictly increasing".into(),
            ));
        }
        Ok(Self { strains })
    }

    pub fn strains(&self) -> &[f64] {
        &self.strains
    }

    pub fn len(&self) -> usize {
        self.strains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strains.is_empty()
    }

    pub fn curve(&self, increments: &[f64]) -> Result<TensionCurve> {
        let mut knots = Vec::with_capacity(self.strains.len() + 1);
        knots.push((0.0, 0.0));
        let mut b = 0.0;
        for (&e, &db) in self.strains.iter().zip(increments) {
            b += db.max(0.0);
            knots.push((e, b));
        }
        TensionCurve::new(knots)
    }

    /// Increments of the linear law through `(ΔL/L, peak)`.
    fn linear_start(&self, peak: f64) -> Vec<f64> {
        let top = self.strains[self.strains.len() - 1];
        let mut prev = 0.0;
        self.strains
            .iter()
            .map(|&e| {
                let b = peak * e / top;
                let d = b - prev;
                prev = b;
                d
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    pub n_knots: usize,
    pub budget: usize,
    pub seed: u64,
    pub grid: GridKind,
    /// Largest admissible tension, N.
    pub tension_cap: Option<f64>,
    /// Integrator step used for every evaluation, s.
    pub step: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            n_knots: 8,
            budget: 5000,
            seed: 0,
            grid: GridKind::Uniform,
            tension_cap: None,
            step: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub law: TensionCurve,
    pub peak_tension: f64,
    /// Elongation beyond the budget, m; zero for a feasible law.
    pub constraint_residual: f64,
    pub max_elongation: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Incumbent objective after each sweep.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Eval {
    objective: f64,
    peak: f64,
    elongation: f64,
}

struct Problem<'a> {
    s: &'a Scenario,
    grid: LawParameterization,
    cfg: IntegratorConfig,
    b0: f64,
    any_feasible: bool,
    evaluations: usize,
}

impl Problem<'_> {
    fn evaluate(&mut self, x: &[f64]) -> Result<Eval> {
        self.evaluations += 1;
        let law = self.grid.curve(x)?;
        let rejected = Eval {
            objective: f64::INFINITY,
            peak: f64::INFINITY,
            elongation: f64::INFINITY,
        };
        let traj = match simulate_fall(self.s, law.clone(), &self.cfg) {
            Ok(t) => t,
            Err(Error::ElongationExceeded { .. }) => return Ok(rejected),
            Err(e) => return Err(e),
        };
        if traj.arrest_time().is_none() {
            return Ok(rejected);
        }
        let peak = traj.peak_tension();
        let elongation = traj.max_position() - self.s.length;
        let dl = self.s.max_stretch;
        let r = (elongation - dl).max(0.0) / dl;
        if r <= FEASIBILITY_TOL {
            self.any_feasible = true;
            if peak < self.b0 * (1.0 - BOUND_TOL) {
                return Err(Error::BoundViolation {
                    peak,
                    bound: self.b0,
                    knots: law.knots().to_vec(),
                });
            }
        }
        Ok(Eval {
            objective: peak + PENALTY_WEIGHT * self.b0 * (r + r * r),
            peak,
            elongation,
        })
    }
}

/// Better objective, or an equal objective reached with less stretch.
fn improves(cand: &Eval, best: &Eval) -> bool {
    let tol = 1e-12 * best.objective.abs().max(1.0);
    cand.objective < best.objective - tol
        || (cand.objective <= best.objective && cand.elongation < best.elongation * (1.0 - 1e-9))
}

/// Searches for the law with the smallest peak tension that arrests the fall
/// within `max_stretch`. Deterministic for a given seed.
pub fn optimize_law(
    s: &Scenario,
    n_knots: usize,
    budget: usize,
    seed: u64,
) -> Result<OptimizationResult> {
    optimize_law_with(
        s,
        &OptimizeOptions {
            n_knots,
            budget,
            seed,
            ..Default::default()
        },
    )
}

pub fn optimize_law_with(s: &Scenario, opts: &OptimizeOptions) -> Result<OptimizationResult> {
    s.validate()?;
    if opts.budget < MIN_BUDGET {
        return Err(Error::Usage(format!(
            "budget must be at least {MIN_BUDGET} evaluations, got {}",
            opts.budget
        )));
    }
    let grid = LawParameterization::new(s, opts.n_knots, opts.grid)?;
    let n = grid.len();
    let b0 = lower_bound_b0(s);
    let cap = opts.tension_cap.unwrap_or(f64::INFINITY);
    let cfg = IntegratorConfig {
        step: opts.step,
        event_tol: 1e-12_f64.min(0.01 * opts.step),
        max_time: 60.0 * (s.length + s.max_stretch).sqrt() / s.gravity.sqrt() + 1.0,
        record_every: 1000,
        stop_at_arrest: true,
        enforce_elongation: true,
        elongation_tol: REJECT_FACTOR * s.max_stretch / (s.length + s.max_stretch),
        ..Default::default()
    };
    let mut problem = Problem {
        s,
        grid: grid.clone(),
        cfg,
        b0,
        any_feasible: false,
        evaluations: 0,
    };

    let clamp_cap = |x: &mut Vec<f64>| {
        let mut total = 0.0;
        for v in x.iter_mut() {
            *v = v.max(0.0).min((cap - total).max(0.0));
            total += *v;
        }
    };

    let mut x = grid.linear_start(2.0 * b0);
    clamp_cap(&mut x);
    let mut best = problem.evaluate(&x)?;

    // directions: shift the tail from knot i, or move knot i alone
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(4 * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[i] = sign;
            dirs.push(d);
            if i + 1 < n {
                let mut d = vec![0.0; n];
                d[i] = sign;
                d[i + 1] = -sign;
                dirs.push(d);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let step_max = 0.5 * b0;
    let step_min = 1e-7 * b0;
    let mut step = 0.25 * b0;
    let mut history = vec![best.objective];
    let mut iterations = 0;
    let mut order: Vec<usize> = (0..dirs.len()).collect();

    'search: while problem.evaluations < opts.budget && step > step_min {
        iterations += 1;
        order.shuffle(&mut rng);
        let mut improved = false;
        for &k in &order {
            if problem.evaluations >= opts.budget {
                break 'search;
            }
            let mut cand: Vec<f64> = x.iter().zip(&dirs[k]).map(|(a, d)| a + step * d).collect();
            clamp_cap(&mut cand);
            if cand == x {
                continue;
            }
            let e = problem.evaluate(&cand)?;
            if improves(&e, &best) {
                x = cand;
                best = e;
                improved = true;
                step = (step * 1.25).min(step_max);
            }
        }
        if !improved {
            step *= 0.5;
        }
        history.push(best.objective);
    }

    if !problem.any_feasible {
        return Err(Error::Infeasible);
    }
    Ok(OptimizationResult {
        law: grid.curve(&x)?,
        peak_tension: best.peak,
        constraint_residual: (best.elongation - s.max_stretch).max(0.0),
        max_elongation: best.elongation,
        iterations,
        evaluations: problem.evaluations,
        history,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `peak/b0 − 1`.
    pub gap: f64,
    /// Largest `|b(ε)/b0 − 1|` over the middle 80% of the strain range.
    pub plateau_deviation: f64,
}

/// Measures how close `law` is to the ideal plateau for `s`.
pub fn optimality_certificate(law: &TensionCurve, s: &Scenario) -> Result<Certificate> {
    s.validate()?;
    let cfg = IntegratorConfig {
        stop_at_arrest: true,
        max_time: 60.0 * (s.length + s.max_stretch).sqrt() / s.gravity.sqrt() + 1.0,
        record_every: 1000,
        ..Default::default()
    };
    let traj = match simulate_fall(s, law.clone(), &cfg) {
        Ok(t) => t,
        Err(Error::ElongationExceeded { .. }) => return Err(Error::NotArresting),
        Err(e) => return Err(e),
    };
    if traj.arrest_time().is_none() {
        return Err(Error::NotArresting);
    }
    let b0 = lower_bound_b0(s);
    let top = s.max_stretch / s.length;
    let (lo, hi) = (0.1 * top, 0.9 * top);
    let deviation = law
        .knots()
        .iter()
        .map(|k| k.0)
        .filter(|&e| e > lo && e < hi)
        .chain([lo, hi])
        .map(|e| (law.tension(e) / b0 - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Certificate {
        gap: traj.peak_tension() / b0 - 1.0,
        plateau_deviation: deviation,
    })
}
