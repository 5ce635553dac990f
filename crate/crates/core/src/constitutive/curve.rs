use crate::constitutive::energy::EnergyDensity;
use crate::error::{Error, Result};

/// Default width of the ramp that replaces the tension step at zero strain.
pub const DEFAULT_RAMP: f64 = 1e-4;

/// Monotone piecewise-linear tension-vs-strain law of a rope.
///
/// Knots are `(strain, tension_n)` pairs. The first knot is `(0, 0)` and
/// compression is free: the tension is zero for every strain `<= 0`. Beyond
/// the last knot the final segment is continued linearly, so a law whose last
/// segment is flat has a bounded tension range.
///
/// A single repeated strain is accepted at the origin, `(0, 0), (0, b)`, which
/// encodes an exact step from zero to `b` as the rope becomes taut.
#[derive(Debug, Clone, PartialEq)]
pub struct TensionCurve {
    knots: Vec<(f64, f64)>,
}

impl TensionCurve {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidCurve("at least two knots are required".into()));
        }
        if knots.iter().any(|(e, b)| !e.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidCurve("knots must be finite".into()));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::InvalidCurve(format!(
                "first knot must be (0, 0), got {:?}",
                knots[0]
            )));
        }
        for (i, w) in knots.windows(2).enumerate() {
            let ((e0, b0), (e1, b1)) = (w[0], w[1]);
            let step_at_origin = i == 0 && e1 == 0.0;
            if !(e1 > e0 || step_at_origin) {
                return Err(Error::InvalidCurve(format!(
                    "strains must be strictly increasing (knot {} at {e1})",
                    i + 1
                )));
            }
            if b1 < b0 {
                return Err(Error::InvalidCurve(format!(
                    "tension must be non-decreasing (knot {} drops from {b0} to {b1})",
                    i + 1
                )));
            }
        }
        let n = knots.len();
        if knots[n - 1].0 <= knots[n - 2].0 {
            return Err(Error::InvalidCurve(
                "final segment must have positive length".into(),
            ));
        }
        Ok(Self { knots })
    }

    /// Straight line through the origin with the given slope (N per unit strain).
    pub fn linear(slope: f64) -> Result<Self> {
        if !(slope >= 0.0) {
            return Err(Error::InvalidCurve(format!("slope must be >= 0, got {slope}")));
        }
        Self::new(vec![(0.0, 0.0), (1.0, slope)])
    }

    /// Ramp from zero to `height` over `[0, ramp]`, then flat up to `end` and beyond.
    /// `ramp == 0` gives an exact step at the origin.
    pub fn plateau(height: f64, ramp: f64, end: f64) -> Result<Self> {
        if !(height >= 0.0) || !(ramp >= 0.0) || !(end > ramp) {
            return Err(Error::InvalidCurve(format!(
                "plateau needs height >= 0 and 0 <= ramp < end (height {height}, ramp {ramp}, end {end})"
            )));
        }
        Self::new(vec![(0.0, 0.0), (ramp, height), (end, height)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn last_strain(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    /// Slope of the final segment, used for extrapolation.
    pub fn final_slope(&self) -> f64 {
        let n = self.knots.len();
        let (e0, b0) = self.knots[n - 2];
        let (e1, b1) = self.knots[n - 1];
        (b1 - b0) / (e1 - e0)
    }

    /// Least upper bound of the tension; infinite unless the final segment is flat.
    pub fn supremum(&self) -> f64 {
        if self.final_slope() > 0.0 {
            f64::INFINITY
        } else {
            self.knots[self.knots.len() - 1].1
        }
    }

    pub fn tension(&self, strain: f64) -> f64 {
        if strain <= 0.0 {
            return 0.0;
        }
        let k = &self.knots;
        let idx = k.partition_point(|&(e, _)| e < strain);
        if idx == k.len() {
            let (e, b) = k[k.len() - 1];
            return b + self.final_slope() * (strain - e);
        }
        let (e0, b0) = k[idx - 1];
        let (e1, b1) = k[idx];
        b0 + (b1 - b0) * (strain - e0) / (e1 - e0)
    }

    /// Right limit of the tension; differs from [`tension`](Self::tension) only at a step.
    pub fn tension_right(&self, strain: f64) -> f64 {
        if strain == 0.0 && self.knots[1].0 == 0.0 {
            self.knots[1].1
        } else {
            self.tension(strain)
        }
    }

    /// Smallest strain `>= 0` whose tension reaches `tension`. On a plateau at
    /// exactly that tension this is the plateau's left endpoint.
    pub fn strain_of_tension(&self, tension: f64) -> Result<f64> {
        self.check_reachable(tension)?;
        if tension <= 0.0 {
            return Ok(0.0);
        }
        let k = &self.knots;
        let j = k.partition_point(|&(_, b)| b < tension);
        if j == k.len() {
            let (e, b) = k[k.len() - 1];
            return Ok(e + (tension - b) / self.final_slope());
        }
        let (e0, b0) = k[j - 1];
        let (e1, b1) = k[j];
        if e1 == e0 {
            return Ok(e1);
        }
        Ok(e0 + (tension - b0) / (b1 - b0) * (e1 - e0))
    }

    /// The full interval `[lo, hi]` of strains `>= 0` at which the law carries
    /// `tension`; `hi` is infinite on an unbounded final plateau.
    pub fn strain_interval(&self, tension: f64) -> Result<(f64, f64)> {
        let lo = self.strain_of_tension(tension)?;
        let k = &self.knots;
        let j = k.partition_point(|&(_, b)| b <= tension);
        let hi = if j == k.len() {
            let slope = self.final_slope();
            if slope > 0.0 {
                let (e, b) = k[k.len() - 1];
                e + (tension - b) / slope
            } else {
                f64::INFINITY
            }
        } else {
            let (e0, b0) = k[j - 1];
            let (e1, b1) = k[j];
            if e1 == e0 {
                e0
            } else {
                e0 + (tension - b0) / (b1 - b0) * (e1 - e0)
            }
        };
        Ok((lo, hi.max(lo)))
    }

    fn check_reachable(&self, tension: f64) -> Result<()> {
        if !(tension >= 0.0) {
            return Err(Error::InvalidCurve(format!(
                "tension query must be >= 0, got {tension}"
            )));
        }
        let sup = self.supremum();
        if tension > sup {
            return Err(Error::TensionUnreachable {
                tension,
                supremum: sup,
            });
        }
        Ok(())
    }

    /// Elastic energy density obtained by integrating the tension exactly.
    pub fn energy(&self) -> EnergyDensity {
        EnergyDensity::from_tension(self)
    }

    /// Same curve with every tension multiplied by `factor >= 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.knots.iter().map(|&(e, b)| (e, b * factor)).collect())
    }

    /// Segments of positive length as `(start, end, tension_at_start, slope)`,
    /// with `end = inf` for the extrapolated tail.
    pub(crate) fn segments(&self) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.knots.len());
        for w in self.knots.windows(2) {
            let ((e0, b0), (e1, b1)) = (w[0], w[1]);
            if e1 > e0 {
                out.push((e0, e1, b0, (b1 - b0) / (e1 - e0)));
            }
        }
        let (e, b) = self.knots[self.knots.len() - 1];
        out.push((e, f64::INFINITY, b, self.final_slope()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_01() -> TensionCurve {
        TensionCurve::new(vec![(0.0, 0.0), (0.1, 1000.0)]).unwrap()
    }

    fn ideal_step() -> TensionCurve {
        TensionCurve::plateau(4704.0, 0.0, 0.1).unwrap()
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(TensionCurve::new(vec![(0.0, 0.0)]).is_err());
        assert!(TensionCurve::new(vec![(0.1, 0.0), (0.2, 1.0)]).is_err());
        assert!(TensionCurve::new(vec![(0.0, 0.0), (0.2, 5.0), (0.1, 6.0)]).is_err());
        assert!(TensionCurve::new(vec![(0.0, 0.0), (0.1, 5.0), (0.2, 4.0)]).is_err());
        assert!(TensionCurve::new(vec![(0.0, 0.0), (0.1, 5.0), (0.1, 6.0)]).is_err());
        assert!(TensionCurve::new(vec![(0.0, 0.0), (0.0, 5.0)]).is_err());
        assert!(TensionCurve::new(vec![(0.0, 0.0), (f64::NAN, 5.0)]).is_err());
    }

    #[test]
    fn tension_examples() {
        let law = linear_01();
        assert_eq!(law.tension(0.05), 500.0);
        assert_eq!(law.tension(-0.1), 0.0);
        assert_eq!(ideal_step().tension(-0.1), 0.0);
        assert_eq!(ideal_step().tension(0.05), 4704.0);
        // extrapolation continues the last slope
        assert!((law.tension(0.2) - 2000.0).abs() < 1e-9);
        assert_eq!(ideal_step().tension(3.0), 4704.0);
    }

    #[test]
    fn step_has_distinct_one_sided_values() {
        let law = ideal_step();
        assert_eq!(law.tension(0.0), 0.0);
        assert_eq!(law.tension_right(0.0), 4704.0);
        assert_eq!(law.tension(1e-300), 4704.0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ideal_step().strain_of_tension(3000.0).unwrap(), 0.0);
        assert_eq!(ideal_step().strain_of_tension(4704.0).unwrap(), 0.0);
        assert!((linear_01().strain_of_tension(500.0).unwrap() - 0.05).abs() < 1e-15);
        assert!(matches!(
            ideal_step().strain_of_tension(5000.0),
            Err(Error::TensionUnreachable { .. })
        ));
    }

    #[test]
    fn inverse_on_ramped_plateau_returns_left_endpoint() {
        let law = TensionCurve::plateau(4704.0, 1e-4, 0.1).unwrap();
        assert_eq!(law.strain_of_tension(4704.0).unwrap(), 1e-4);
        assert_eq!(law.strain_interval(4704.0).unwrap(), (1e-4, f64::INFINITY));
        let (lo, hi) = law.strain_interval(2352.0).unwrap();
        assert!((lo - 5e-5).abs() < 1e-18 && lo == hi);
    }

    #[test]
    fn interval_of_interior_plateau() {
        let law =
            TensionCurve::new(vec![(0.0, 0.0), (0.1, 10.0), (0.3, 10.0), (0.4, 20.0)]).unwrap();
        assert_eq!(law.strain_interval(10.0).unwrap(), (0.1, 0.3));
        let zero = TensionCurve::new(vec![(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert_eq!(zero.strain_interval(0.0).unwrap(), (0.0, f64::INFINITY));
        assert_eq!(ideal_step().strain_interval(0.0).unwrap(), (0.0, 0.0));
        assert_eq!(ideal_step().strain_interval(100.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn supremum() {
        assert_eq!(linear_01().supremum(), f64::INFINITY);
        assert_eq!(ideal_step().supremum(), 4704.0);
    }
}
