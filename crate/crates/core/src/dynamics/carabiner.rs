//! Rope running over one frictional carabiner.
//!
//! The rope is modelled as two massless segments in series: `upper` from the
//! anchor to the carabiner and `lower` from the carabiner to the climber. The
//! carabiner scales the tension by the capstan factor `mu`, so the upper
//! segment carries `mu·b` while the climber feels `b`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analysis::Scenario;
use crate::constitutive::TensionCurve;
use crate::dynamics::force::ForceCurve;
use crate::error::{Error, Result};

/// Capstan ratio `exp(−(π − alpha)·k)` between the tension above and below
/// the carabiner.
pub fn capstan_mu(alpha: f64, k: f64) -> Result<f64> {
    if !(0.0..PI).contains(&alpha) {
        return Err(Error::InvalidAngle(format!(
            "alpha must lie in [0, pi), got {alpha}"
        )));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::InvalidAngle(format!(
            "friction coefficient must be >= 0, got {k}"
        )));
    }
    Ok((-(PI - alpha) * k).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarabinerScenario {
    pub mass: f64,
    pub gravity: f64,
    pub max_stretch: f64,
    /// Starting coordinate of the climber, measured down from the anchor.
    pub h0: f64,
    /// Unstretched length from the anchor to the carabiner.
    pub upper_length: f64,
    /// Unstretched length from the carabiner to the climber.
    pub lower_length: f64,
    pub mu: f64,
}

impl CarabinerScenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mass: f64,
        gravity: f64,
        max_stretch: f64,
        h0: f64,
        upper_length: f64,
        lower_length: f64,
        alpha: f64,
        k: f64,
    ) -> Result<Self> {
        let mu = capstan_mu(alpha, k)?;
        Self::with_mu(mass, gravity, max_stretch, h0, upper_length, lower_length, mu)
    }

    pub fn with_mu(
        mass: f64,
        gravity: f64,
        max_stretch: f64,
        h0: f64,
        upper_length: f64,
        lower_length: f64,
        mu: f64,
    ) -> Result<Self> {
        let cs = Self {
            mass,
            gravity,
            max_stretch,
            h0,
            upper_length,
            lower_length,
            mu,
        };
        cs.validate()?;
        Ok(cs)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.upper_length > 0.0) || !(self.lower_length > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "segment lengths must be > 0, got l1 = {}, l2 = {}",
                self.upper_length, self.lower_length
            )));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(Error::InvalidAngle(format!(
                "mu must lie in (0, 1], got {}",
                self.mu
            )));
        }
        if (self.h0 - self.upper_length).abs() > self.lower_length {
            return Err(Error::InvalidScenario(format!(
                "climber start h0 = {} is out of reach of the carabiner (|h0 − l1| > l2)",
                self.h0
            )));
        }
        self.base().validate()
    }

    /// Single-rope scenario of total length `l1 + l2`; same fall height.
    pub fn base(&self) -> Scenario {
        Scenario {
            mass: self.mass,
            gravity: self.gravity,
            length: self.upper_length + self.lower_length,
            max_stretch: self.max_stretch,
            h0: self.h0,
        }
    }

    /// Scenario of the lower segment alone, with coordinates measured from the
    /// carabiner; it has the same impact speed and the same bound `b0`.
    pub fn lower_segment_scenario(&self) -> Scenario {
        Scenario {
            mass: self.mass,
            gravity: self.gravity,
            length: self.lower_length,
            max_stretch: self.max_stretch,
            h0: self.h0 - self.upper_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSolution {
    /// Tension below the carabiner, felt by the climber.
    pub tension: f64,
    pub strain_upper: f64,
    pub strain_lower: f64,
}

/// Quasi-static tension for a total stretch `d` of the two segments:
/// `l1·s(mu·b) + l2·s(b) = d`, with `s` the left-endpoint inverse of `law`.
///
/// When a segment sits on a plateau the split is not unique; the lower
/// segment takes up the extra stretch first.
pub fn solve_segment_tension(
    law: &TensionCurve,
    mu: f64,
    l1: f64,
    l2: f64,
    d: f64,
) -> Result<SegmentSolution> {
    if !d.is_finite() {
        return Err(Error::NoEquilibrium { displacement: d });
    }
    if d <= 0.0 {
        return Ok(SegmentSolution {
            tension: 0.0,
            strain_upper: 0.0,
            strain_lower: 0.0,
        });
    }
    let reach = |b: f64| -> Result<f64> {
        Ok(l1 * law.strain_of_tension(mu * b)? + l2 * law.strain_of_tension(b)?)
    };
    let sup = law.supremum();
    let b = if sup.is_finite() && reach(sup)? <= d {
        sup
    } else {
        let mut hi = if sup.is_finite() {
            sup
        } else {
            law.knots()[law.knots().len() - 1].1.max(1.0)
        };
        while reach(hi)? <= d {
            hi *= 2.0;
            if !hi.is_finite() || hi > 1e300 {
                return Err(Error::NoEquilibrium { displacement: d });
            }
        }
        let mut lo = 0.0;
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if reach(mid)? <= d {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let up0 = law.strain_of_tension(mu * b)?;
    let (low0, low_hi) = law.strain_interval(b)?;
    let rest = (d - l1 * up0 - l2 * low0).max(0.0);
    let take_low = rest.min(l2 * (low_hi - low0));
    Ok(SegmentSolution {
        tension: b,
        strain_upper: up0 + (rest - take_low) / l1,
        strain_lower: low0 + take_low / l2,
    })
}

/// Climber tension as a function of total stretch, assembled from the
/// segment solve at every displacement where either segment meets a knot.
pub(crate) fn equivalent_force_curve(
    law: &TensionCurve,
    mu: f64,
    l1: f64,
    l2: f64,
) -> Result<ForceCurve> {
    let sup = law.supremum();
    let mut levels: Vec<f64> = vec![0.0];
    for &(_, b) in law.knots() {
        levels.push(b);
        levels.push(b / mu);
    }
    levels.retain(|c| c.is_finite() && *c <= sup);
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut points: Vec<(f64, f64)> = Vec::with_capacity(2 * levels.len());
    for &c in &levels {
        let (up_lo, up_hi) = law.strain_interval(mu * c)?;
        let (low_lo, low_hi) = law.strain_interval(c)?;
        points.push((l1 * up_lo + l2 * low_lo, c));
        let d_hi = l1 * up_hi + l2 * low_hi;
        if d_hi.is_finite() {
            points.push((d_hi, c));
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup();
    let tail = law.final_slope() / (l2 + mu * l1);
    Ok(ForceCurve::from_points(&points, tail))
}
