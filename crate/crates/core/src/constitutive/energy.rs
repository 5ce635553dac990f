use crate::constitutive::curve::TensionCurve;

/// How an [`EnergyDensity`] continues outside its knot range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Constant at the boundary value.
    Flat,
    /// The boundary segment's polynomial continued.
    Continue,
}

/// Piecewise-quadratic elastic energy density `W(strain)`, in newtons
/// (energy per unit unstretched length).
///
/// On segment `i` the value is
/// `values[i] + slopes[i]·(e − e_i) + ½·curvatures[i]·(e − e_i)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDensity {
    strains: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    curvatures: Vec<f64>,
    left: Tail,
    right: Tail,
}

/// Outcome of checking an energy density against the three admissibility
/// properties: non-negative, zero at zero strain, convex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyReport {
    pub non_negative: bool,
    pub zero_at_origin: bool,
    pub convex: bool,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.non_negative && self.zero_at_origin && self.convex
    }
}

impl EnergyDensity {
    pub(crate) fn from_tension(curve: &TensionCurve) -> Self {
        let mut strains = vec![0.0];
        let mut values = vec![0.0];
        let mut slopes = Vec::new();
        let mut curvatures = Vec::new();
        for (start, end, b0, slope) in curve.segments() {
            if end.is_infinite() {
                break;
            }
            let len = end - start;
            let w0 = *values.last().unwrap();
            slopes.push(b0);
            curvatures.push(slope);
            strains.push(end);
            values.push(w0 + b0 * len + 0.5 * slope * len * len);
        }
        // extrapolated tail segment, stored so `Continue` can use it
        slopes.push(curve.knots()[curve.knots().len() - 1].1);
        curvatures.push(curve.final_slope());
        Self {
            strains,
            values,
            slopes,
            curvatures,
            left: Tail::Flat,
            right: Tail::Continue,
        }
    }

    /// Piecewise-linear interpolant through `(strain, value)` points with
    /// strictly increasing strains; tails continue the end chords.
    pub(crate) fn piecewise_linear(points: &[(f64, f64)]) -> Self {
        let strains: Vec<f64> = points.iter().map(|p| p.0).collect();
        let values: Vec<f64> = points.iter().map(|p| p.1).collect();
        let mut slopes: Vec<f64> = points
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        slopes.push(*slopes.last().unwrap());
        let curvatures = vec![0.0; slopes.len()];
        Self {
            strains,
            values,
            slopes,
            curvatures,
            left: Tail::Continue,
            right: Tail::Continue,
        }
    }

    pub fn strains(&self) -> &[f64] {
        &self.strains
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Same density shifted by a constant.
    pub fn offset(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v += c);
        out
    }

    fn segment_index(&self, strain: f64) -> usize {
        let n = self.strains.len();
        let idx = self.strains.partition_point(|&e| e <= strain);
        idx.saturating_sub(1).min(n - 1)
    }

    fn eval_segment(&self, i: usize, strain: f64) -> f64 {
        let dx = strain - self.strains[i];
        self.values[i] + self.slopes[i] * dx + 0.5 * self.curvatures[i] * dx * dx
    }

    /// `W(strain)`, evaluated exactly.
    pub fn value(&self, strain: f64) -> f64 {
        let first = self.strains[0];
        let last = self.strains[self.strains.len() - 1];
        if strain < first {
            return match self.left {
                Tail::Flat => self.values[0],
                Tail::Continue => self.eval_segment(0, strain),
            };
        }
        if strain > last && self.right == Tail::Flat {
            return self.values[self.values.len() - 1];
        }
        self.eval_segment(self.segment_index(strain), strain)
    }

    /// Right derivative `dW/dstrain`, i.e. the tension.
    pub fn derivative(&self, strain: f64) -> f64 {
        if strain < self.strains[0] && self.left == Tail::Flat {
            return 0.0;
        }
        let i = if strain < self.strains[0] {
            0
        } else {
            self.segment_index(strain)
        };
        self.slopes[i] + self.curvatures[i] * (strain - self.strains[i])
    }

    /// Checks non-negativity and convexity over the knot range and `W(0) = 0`.
    pub fn check_properties(&self) -> PropertyReport {
        let scale = self
            .values
            .iter()
            .fold(1e-300_f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let n = self.strains.len();

        let mut non_negative = self.values.iter().all(|&v| v >= -tol);
        for i in 0..n - 1 {
            // interior minimum of a convex quadratic piece
            let c = self.curvatures[i];
            if c > 0.0 {
                let dx = -self.slopes[i] / c;
                if dx > 0.0 && dx < self.strains[i + 1] - self.strains[i] {
                    non_negative &= self.eval_segment(i, self.strains[i] + dx) >= -tol;
                }
            }
        }

        let zero_at_origin = if 0.0 < self.strains[0] || 0.0 > self.strains[n - 1] {
            false
        } else {
            self.value(0.0).abs() <= tol
        };

        let slope_scale = self
            .slopes
            .iter()
            .fold(1e-300_f64, |m, v| m.max(v.abs()));
        let stol = 1e-12 * slope_scale;
        let mut convex = self.curvatures[..n - 1].iter().all(|&c| c >= -stol);
        if self.left == Tail::Flat {
            convex &= self.slopes[0] >= -stol;
        }
        for i in 0..n - 1 {
            let left_derivative =
                self.slopes[i] + self.curvatures[i] * (self.strains[i + 1] - self.strains[i]);
            let right_derivative = self.slopes[i + 1];
            convex &= left_derivative <= right_derivative + stol;
        }

        PropertyReport {
            non_negative,
            zero_at_origin,
            convex,
        }
    }
}

/// `W(strain)` for a density.
pub fn energy_of_strain(w: &EnergyDensity, strain: f64) -> f64 {
    w.value(strain)
}
