use crate::constitutive::TensionCurve;

/// One affine piece of a tension-vs-displacement law:
/// `b(d) = b0 + slope·(d − anchor)` on `[start, end]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub start: f64,
    pub end: f64,
    anchor: f64,
    b0: f64,
    slope: f64,
    /// Potential `∫₀^anchor b` at the anchor.
    u0: f64,
}

impl Piece {
    pub fn tension(&self, d: f64) -> f64 {
        self.b0 + self.slope * (d - self.anchor)
    }

    fn potential(&self, d: f64) -> f64 {
        let x = d - self.anchor;
        self.u0 + self.b0 * x + 0.5 * self.slope * x * x
    }
}

/// Climber-end tension as a piecewise-affine function of the displacement `d`
/// beyond the taut length. Piece 0 is the slack region `d < 0`.
#[derive(Debug, Clone)]
pub(crate) struct ForceCurve {
    pieces: Vec<Piece>,
    starts: Vec<f64>,
}

impl ForceCurve {
    /// Builds from monotone `(d, b)` points starting at `(0, 0)`; a repeated
    /// displacement encodes a jump. Beyond the last point the slope is `tail`.
    pub fn from_points(points: &[(f64, f64)], tail: f64) -> Self {
        let mut pieces = vec![Piece {
            start: f64::NEG_INFINITY,
            end: 0.0,
            anchor: 0.0,
            b0: 0.0,
            slope: 0.0,
            u0: 0.0,
        }];
        let mut u = 0.0;
        for w in points.windows(2) {
            let ((d0, b0), (d1, b1)) = (w[0], w[1]);
            if d1 > d0 {
                let slope = (b1 - b0) / (d1 - d0);
                pieces.push(Piece {
                    start: d0,
                    end: d1,
                    anchor: d0,
                    b0,
                    slope,
                    u0: u,
                });
                u += (b0 + 0.5 * slope * (d1 - d0)) * (d1 - d0);
            }
        }
        let (d_last, b_last) = points[points.len() - 1];
        pieces.push(Piece {
            start: d_last,
            end: f64::INFINITY,
            anchor: d_last,
            b0: b_last,
            slope: tail,
            u0: u,
        });
        let starts = pieces.iter().map(|p| p.start).collect();
        Self { pieces, starts }
    }

    pub fn from_tension(curve: &TensionCurve, length: f64) -> Self {
        let pts: Vec<(f64, f64)> = curve.knots().iter().map(|&(e, b)| (e * length, b)).collect();
        Self::from_points(&pts, curve.final_slope() / length)
    }

    pub fn piece(&self, idx: usize) -> &Piece {
        &self.pieces[idx]
    }

    /// Piece active at `d` when moving in direction `dir` (`+1` or `−1`);
    /// ties at a boundary go to the piece ahead.
    pub fn select(&self, d: f64, dir: f64) -> usize {
        let n = if dir > 0.0 {
            self.starts.partition_point(|&s| s <= d)
        } else {
            self.starts.partition_point(|&s| s < d)
        };
        n.saturating_sub(1)
    }

    pub fn tension(&self, d: f64, dir: f64) -> f64 {
        self.pieces[self.select(d, dir)].tension(d)
    }

    /// `∫₀^d b`, continuous in `d`.
    pub fn potential(&self, d: f64) -> f64 {
        self.pieces[self.select(d, 1.0)].potential(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_curve_selection() {
        let law = TensionCurve::plateau(4704.0, 0.0, 0.1).unwrap();
        let f = ForceCurve::from_tension(&law, 10.0);
        assert_eq!(f.tension(0.0, 1.0), 4704.0);
        assert_eq!(f.tension(0.0, -1.0), 0.0);
        assert_eq!(f.tension(-0.5, 1.0), 0.0);
        assert_eq!(f.tension(3.0, -1.0), 4704.0);
        assert!((f.potential(1.0) - 4704.0).abs() < 1e-9);
        assert_eq!(f.potential(-1.0), 0.0);
    }

    #[test]
    fn matches_curve_energy() {
        let law = TensionCurve::new(vec![(0.0, 0.0), (0.02, 300.0), (0.05, 900.0)]).unwrap();
        let f = ForceCurve::from_tension(&law, 8.0);
        let w = law.energy();
        for &e in &[0.0, 0.01, 0.02, 0.04, 0.05, 0.09] {
            assert!((f.potential(8.0 * e) - 8.0 * w.value(e)).abs() < 1e-9);
            assert!((f.tension(8.0 * e, 1.0) - law.tension_right(e)).abs() < 1e-9);
        }
    }
}
