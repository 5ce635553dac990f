//! Lower convex envelope of a sampled microscopic energy.
//!
//! Where the sampled energy is not convex the material splits into a mixture
//! of two strains `e1 < e2`. A fraction `(e2 − e)/(e2 − e1)` sits at `e1` and
//! the rest at `e2`, so the mixture energy is the chord between the two
//! samples and the macroscopic tension is constant on `[e1, e2]`.

use crate::constitutive::energy::EnergyDensity;
use crate::error::{Error, Result};

/// Samples `(strain, W_mic)` of a possibly non-convex energy density.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroEnergySamples {
    points: Vec<(f64, f64)>,
}

impl MicroEnergySamples {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidSamples(format!(
                "at least 3 samples are required, got {}",
                points.len()
            )));
        }
        for (i, &(e, w)) in points.iter().enumerate() {
            if !e.is_finite() || !w.is_finite() {
                return Err(Error::InvalidSamples(format!("sample {i} is not finite")));
            }
            if w < 0.0 {
                return Err(Error::InvalidSamples(format!(
                    "sample {i} has negative energy {w}"
                )));
            }
            if i > 0 && e <= points[i - 1].0 {
                return Err(Error::InvalidSamples(format!(
                    "strains must be strictly increasing (sample {i} at {e})"
                )));
            }
        }
        Ok(Self { points })
    }

    /// Samples `f` at `n` evenly spaced strains on `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 3 || !(hi > lo) {
            return Err(Error::InvalidSamples(format!(
                "need n >= 3 and hi > lo (n {n}, range [{lo}, {hi}])"
            )));
        }
        let step = (hi - lo) / (n - 1) as f64;
        Self::new(
            (0..n)
                .map(|i| {
                    let e = if i == n - 1 { hi } else { lo + i as f64 * step };
                    (e, f(e))
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// The samples as a piecewise-linear density, without convexification.
    pub fn as_density(&self) -> EnergyDensity {
        EnergyDensity::piecewise_linear(&self.points)
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Indices of the samples on the lower convex hull, left to right.
pub fn lower_hull(samples: &MicroEnergySamples) -> Vec<usize> {
    let p = &samples.points;
    let mut hull: Vec<usize> = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(p[a], p[b], p[i]) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Envelope values at every sample strain.
pub fn envelope_values(samples: &MicroEnergySamples) -> Vec<f64> {
    let p = &samples.points;
    let hull = lower_hull(samples);
    let mut out = Vec::with_capacity(p.len());
    for seg in hull.windows(2) {
        let (i1, i2) = (seg[0], seg[1]);
        let ((e1, w1), (e2, w2)) = (p[i1], p[i2]);
        out.push(w1);
        for &(e, _) in &p[i1 + 1..i2] {
            let frac = (e - e1) / (e2 - e1);
            out.push(w1 + frac * (w2 - w1));
        }
    }
    out.push(p[p.len() - 1].1);
    out
}

/// Lower convex envelope of the samples, as a piecewise-linear density on the
/// sample grid.
pub fn convexify(samples: &MicroEnergySamples) -> EnergyDensity {
    let values = envelope_values(samples);
    let pts: Vec<(f64, f64)> = samples
        .points
        .iter()
        .zip(values)
        .map(|(&(e, _), w)| (e, w))
        .collect();
    EnergyDensity::piecewise_linear(&pts)
}

/// Strain intervals `[e1, e2]` replaced by a chord, i.e. the phase-mixture
/// regions where the macroscopic tension is flat.
pub fn mixture_intervals(samples: &MicroEnergySamples) -> Vec<(f64, f64)> {
    let p = &samples.points;
    lower_hull(samples)
        .windows(2)
        .filter(|w| w[1] > w[0] + 1)
        .map(|w| (p[w[0]].0, p[w[1]].0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimum over every chord whose endpoints bracket the sample.
    fn brute_force(samples: &MicroEnergySamples) -> Vec<f64> {
        let p = samples.points();
        (0..p.len())
            .map(|k| {
                let mut best = p[k].1;
                for i in 0..=k {
                    for j in k..p.len() {
                        if i == j {
                            continue;
                        }
                        let ((e1, w1), (e2, w2)) = (p[i], p[j]);
                        let t = (p[k].0 - e1) / (e2 - e1);
                        best = best.min(w1 + t * (w2 - w1));
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn validation() {
        assert!(MicroEnergySamples::new(vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(MicroEnergySamples::new(vec![(0.0, 0.0), (1.0, 1.0), (0.5, 1.0)]).is_err());
        assert!(MicroEnergySamples::new(vec![(0.0, 0.0), (1.0, -1.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn convex_input_is_unchanged() {
        let s = MicroEnergySamples::from_fn(-0.2, 0.3, 51, |e| 3.0 * e * e + 0.5).unwrap();
        let env = envelope_values(&s);
        for (v, &(_, w)) in env.iter().zip(s.points()) {
            assert_eq!(*v, w);
        }
        assert!(mixture_intervals(&s).is_empty());
    }

    #[test]
    fn collinear_input_is_unchanged() {
        let s = MicroEnergySamples::new(vec![(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)]).unwrap();
        let env = envelope_values(&s);
        assert_eq!(env, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn double_well_gets_flat_chord() {
        let s =
            MicroEnergySamples::from_fn(-0.15, 0.15, 61, |e| (e * e - 0.01).powi(2)).unwrap();
        let env = envelope_values(&s);
        let oracle = brute_force(&s);
        for (k, (a, b)) in env.iter().zip(&oracle).enumerate() {
            assert!((a - b).abs() <= 1e-12, "sample {k}: {a} vs {b}");
        }
        for (&(e, _), v) in s.points().iter().zip(&env) {
            if e.abs() <= 0.1 {
                assert!(v.abs() < 1e-12, "envelope at {e} is {v}");
            }
        }
        let intervals = mixture_intervals(&s);
        assert_eq!(intervals.len(), 1);
        assert!((intervals[0].0 + 0.1).abs() < 1e-12 && (intervals[0].1 - 0.1).abs() < 1e-12);

        let w = convexify(&s);
        assert!(w.check_properties().convex);
        // flat tension across the mixture region
        assert!(w.derivative(-0.05).abs() < 1e-12 && w.derivative(0.05).abs() < 1e-12);
    }
}
