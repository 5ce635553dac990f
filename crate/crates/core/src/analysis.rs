//! Closed-form fall quantities, the Jensen check and report assembly.

use serde::{Deserialize, Serialize};

use crate::constitutive::EnergyDensity;
use crate::dynamics::{EventKind, Trajectory};
use crate::error::{Error, Result};

/// Physical data of a single-rope fall, SI units.
///
/// `h0` is the climber's starting coordinate measured downwards from the
/// anchor; it is negative when the climber starts above the anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub mass: f64,
    pub gravity: f64,
    /// Unstretched rope length.
    pub length: f64,
    /// Maximal admissible stretch.
    pub max_stretch: f64,
    pub h0: f64,
}

impl Scenario {
    pub fn new(mass: f64, gravity: f64, length: f64, max_stretch: f64, h0: f64) -> Result<Self> {
        let s = Self {
            mass,
            gravity,
            length,
            max_stretch,
            h0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m", self.mass),
            ("g", self.gravity),
            ("L", self.length),
            ("delta_l", self.max_stretch),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidScenario(format!("{name} must be > 0, got {v}")));
            }
        }
        if !self.h0.is_finite() || self.h0.abs() > self.length {
            return Err(Error::InvalidScenario(format!(
                "h0 must satisfy |h0| <= L, got h0 = {} with L = {}",
                self.h0, self.length
            )));
        }
        Ok(())
    }

    pub fn weight(&self) -> f64 {
        self.mass * self.gravity
    }
}

/// Speed at the instant the rope becomes taut, `sqrt(2g(L − h0))`.
pub fn initial_velocity(s: &Scenario) -> f64 {
    (2.0 * s.gravity * (s.length - s.h0)).max(0.0).sqrt()
}

/// Lower bound on the peak tension of any rope arresting within `max_stretch`:
/// `mg(L + ΔL − h0)/ΔL`.
pub fn lower_bound_b0(s: &Scenario) -> f64 {
    s.weight() * (s.length + s.max_stretch - s.h0) / s.max_stretch
}

/// Constant acceleration under the optimal rope, `g(h0 − L)/ΔL` (non-positive).
pub fn ideal_acceleration(s: &Scenario) -> f64 {
    s.gravity * (s.h0 - s.length) / s.max_stretch
}

/// Arrest time under the optimal rope, `−v0/a0`; zero for a start at the taut point.
pub fn ideal_arrest_time(s: &Scenario) -> f64 {
    let a0 = ideal_acceleration(s);
    if a0 == 0.0 {
        0.0
    } else {
        -initial_velocity(s) / a0
    }
}

/// Climber position and velocity under the optimal rope during the first
/// stretch, `0 <= t <= T`.
pub fn closed_form_trajectory(s: &Scenario, t: f64) -> Result<(f64, f64)> {
    let t_max = ideal_arrest_time(s);
    if !(t >= 0.0 && t <= t_max) {
        return Err(Error::OutsideIdealWindow { t, t_max });
    }
    let a0 = ideal_acceleration(s);
    let v0 = initial_velocity(s);
    Ok((0.5 * a0 * t * t + v0 * t + s.length, a0 * t + v0))
}

/// Position at time `t` of the rope point with unstretched coordinate `x`,
/// assuming homogeneous stretching.
pub fn closed_form_field(s: &Scenario, x: f64, t: f64) -> Result<f64> {
    let (y_end, _) = closed_form_trajectory(s, t)?;
    Ok(x / s.length * y_end)
}

const JENSEN_PANELS: usize = 4096;

/// `∫₀ᴸ W(profile(x)) dx − L·W(mean strain)`; non-negative for convex `W`.
///
/// Both integrals use the same composite Simpson rule, whose weights are
/// positive, so the discrete gap obeys Jensen's inequality exactly.
pub fn jensen_gap(w: &EnergyDensity, profile: impl Fn(f64) -> f64, s: &Scenario) -> f64 {
    let n = JENSEN_PANELS;
    let h = s.length / n as f64;
    let nodes: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let weight = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (weight, profile(i as f64 * h))
        })
        .collect();
    let total: f64 = nodes.iter().map(|p| p.0).sum();
    let origin = nodes[0].1;
    let mean = origin + nodes.iter().map(|&(wt, e)| wt * (e - origin)).sum::<f64>() / total;
    let w_mean = w.value(mean);
    // summing differences keeps a constant profile at exactly zero
    let excess: f64 = nodes.iter().map(|&(wt, e)| wt * (w.value(e) - w_mean)).sum();
    excess * s.length / total
}

/// Summary of one simulated fall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FallReport {
    pub peak_tension: f64,
    pub bound_b0: f64,
    pub optimality_gap: f64,
    pub max_elongation: f64,
    pub arrest_time_t: f64,
    pub rest_position: Option<f64>,
    pub energy_dissipated: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_strain_max: Option<f64>,
}

const ARREST_SPEED_TOL: f64 = 1e-9;

pub fn make_report(traj: &Trajectory, s: &Scenario) -> Result<FallReport> {
    let samples = traj.samples();
    let first = samples.first().ok_or(Error::NoArrest)?;
    let arrest = samples
        .iter()
        .find(|p| matches!(p.event, Some(EventKind::Turn | EventKind::Rest)))
        .map(|p| p.t);
    let arrest_time = match arrest {
        Some(t) => t,
        None if samples.iter().all(|p| p.v.abs() < ARREST_SPEED_TOL) => first.t,
        None => return Err(Error::NoArrest),
    };
    let peak = samples.iter().fold(0.0_f64, |m, p| m.max(p.tension));
    let y_max = samples.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.y));
    let bound = lower_bound_b0(s);
    let rest_position = samples
        .iter()
        .rev()
        .find(|p| p.event == Some(EventKind::Rest))
        .map(|p| p.y);
    let upper_strain_max = samples
        .iter()
        .filter_map(|p| p.strain_upper)
        .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))));
    Ok(FallReport {
        peak_tension: peak,
        bound_b0: bound,
        optimality_gap: peak / bound - 1.0,
        max_elongation: y_max - traj.meta().taut_length,
        arrest_time_t: arrest_time,
        rest_position,
        energy_dissipated: samples[samples.len() - 1].e_diss,
        upper_strain_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::TensionCurve;
    use proptest::prelude::*;

    fn reference() -> Scenario {
        Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Scenario::new(0.0, 9.8, 10.0, 1.0, 5.0).is_err());
        assert!(Scenario::new(80.0, 9.8, 10.0, 0.0, 5.0).is_err());
        assert!(Scenario::new(80.0, 9.8, 10.0, 1.0, 10.5).is_err());
        assert!(Scenario::new(80.0, 9.8, 10.0, 1.0, -10.0).is_ok());
    }

    #[test]
    fn initial_velocity_examples() {
        assert!((initial_velocity(&reference()) - 98f64.sqrt()).abs() < 1e-12);
        assert!((initial_velocity(&reference()) - 9.89949).abs() < 1e-5);
        let hang = Scenario::new(80.0, 9.8, 10.0, 1.0, 10.0).unwrap();
        assert_eq!(initial_velocity(&hang), 0.0);
        let above = Scenario::new(80.0, 9.8, 10.0, 1.0, -10.0).unwrap();
        assert!((initial_velocity(&above) - 19.79899).abs() < 1e-5);
    }

    #[test]
    fn bound_examples() {
        assert!((lower_bound_b0(&reference()) - 4704.0).abs() < 1e-9);
        let hang = Scenario::new(80.0, 9.8, 10.0, 1.0, 10.0).unwrap();
        assert!((lower_bound_b0(&hang) - 784.0).abs() < 1e-9);
        let long = Scenario::new(80.0, 9.8, 10.0, 2.0, 5.0).unwrap();
        // 80·9.8·(10 + 2 − 5)/2
        assert!((lower_bound_b0(&long) - 2744.0).abs() < 1e-9);
    }

    #[test]
    fn acceleration_examples() {
        assert!((ideal_acceleration(&reference()) + 49.0).abs() < 1e-12);
        let hang = Scenario::new(80.0, 9.8, 10.0, 1.0, 10.0).unwrap();
        assert_eq!(ideal_acceleration(&hang), 0.0);
        let long = Scenario::new(80.0, 9.8, 10.0, 2.0, 5.0).unwrap();
        assert!((ideal_acceleration(&long) + 24.5).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let s = reference();
        let t_arrest = ideal_arrest_time(&s);
        assert!((t_arrest - 0.20203).abs() < 1e-5);
        let (y, v) = closed_form_trajectory(&s, t_arrest).unwrap();
        assert!((y - 11.0).abs() < 1e-12);
        assert!(v.abs() < 1e-12);
        let (y, v) = closed_form_trajectory(&s, 0.0).unwrap();
        assert_eq!(y, 10.0);
        assert!((v - 9.89949).abs() < 1e-5);
        let mid = closed_form_field(&s, 5.0, t_arrest).unwrap();
        assert!((mid - 5.5).abs() < 1e-12);
        assert!(matches!(
            closed_form_trajectory(&s, t_arrest * 1.01),
            Err(Error::OutsideIdealWindow { .. })
        ));
    }

    #[test]
    fn jensen_examples() {
        let s = reference();
        let quad = TensionCurve::linear(1e4).unwrap().energy();
        assert!(jensen_gap(&quad, |_| 0.05, &s).abs() < 1e-10);

        // W = ½E e² on a profile of 0 and 0.1 halves: the gap is
        // L·½E·(0.005 − 0.0025).
        let step = |x: f64| if x < 5.0 { 0.0 } else { 0.1 };
        let gap = jensen_gap(&quad, step, &s);
        let oracle = 10.0 * 0.5 * 1e4 * (0.005 - 0.0025);
        assert!(gap > 0.0);
        assert!((gap - oracle).abs() < 1e-3 * oracle, "{gap} vs {oracle}");

        let ideal = TensionCurve::plateau(4704.0, 1e-4, 0.1).unwrap().energy();
        let wavy = |x: f64| 0.05 + 0.03 * (x * 1.3).sin();
        assert!(jensen_gap(&ideal, wavy, &s).abs() < 1e-9);
    }

    fn arb_scenario() -> impl Strategy<Value = Scenario> {
        (1.0..150.0f64, 1.0..20.0f64, 0.5..60.0f64, 0.05..10.0f64, -1.0..1.0f64).prop_map(
            |(m, g, l, dl, frac)| Scenario::new(m, g, l, dl, frac * l).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn bound_equals_weight_minus_ideal_inertia(s in arb_scenario()) {
            let b0 = lower_bound_b0(&s);
            let alt = s.mass * (s.gravity - ideal_acceleration(&s));
            prop_assert!((b0 - alt).abs() <= 1e-12 * b0);
        }

        #[test]
        fn arrest_lands_at_max_stretch(s in arb_scenario()) {
            prop_assume!(s.h0 < s.length);
            let t = ideal_arrest_time(&s);
            let (y, v) = closed_form_trajectory(&s, t).unwrap();
            let scale = s.length + s.max_stretch;
            prop_assert!((y - scale).abs() <= 1e-12 * scale);
            prop_assert!(v.abs() <= 1e-12 * initial_velocity(&s).max(1.0));
        }

        #[test]
        fn bound_monotonicity(s in arb_scenario(), bump in 0.01..1.0f64) {
            let mut longer = s;
            longer.max_stretch += bump;
            prop_assert!(lower_bound_b0(&longer) < lower_bound_b0(&s));
            let mut higher = s;
            higher.length += bump;
            prop_assert!(lower_bound_b0(&higher) > lower_bound_b0(&s));
        }
    }
}
