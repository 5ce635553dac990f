use crate::constitutive::curve::TensionCurve;
use crate::constitutive::energy::EnergyDensity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Virgin loading beyond the largest strain reached so far.
    Loading,
    Unloading,
    /// Increasing strain below the previous maximum.
    ReloadingInterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HysteresisState {
    pub branch: Branch,
    pub max_strain: f64,
    /// Strain of the most recent branch switch.
    pub anchor: f64,
    last_strain: f64,
    /// Dissipated energy per unit length, credited at each loading-to-unloading reversal.
    dissipated: f64,
}

impl Default for HysteresisState {
    fn default() -> Self {
        Self {
            branch: Branch::Loading,
            max_strain: 0.0,
            anchor: 0.0,
            last_strain: 0.0,
            dissipated: 0.0,
        }
    }
}

/// Loading/unloading tension curves with a branch state machine.
///
/// Increasing strain follows the loading curve, decreasing strain follows the
/// unloading curve, and a reversal jumps between them at constant strain.
/// Every closed excursion `[a, b]` dissipates the area between the curves on
/// that interval.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisLaw {
    loading: TensionCurve,
    unloading: TensionCurve,
    loading_energy: EnergyDensity,
    unloading_energy: EnergyDensity,
    state: HysteresisState,
}

impl HysteresisLaw {
    pub fn loading(&self) -> &TensionCurve {
        &self.loading
    }

    pub fn unloading(&self) -> &TensionCurve {
        &self.unloading
    }

    pub fn state(&self) -> &HysteresisState {
        &self.state
    }

    pub fn reset(&mut self) {
        self.state = HysteresisState::default();
    }

    /// True when both branches coincide, i.e. the law is elastic.
    pub fn is_elastic(&self) -> bool {
        self.loading == self.unloading
    }

    pub fn branch_curve(&self, dir: Direction) -> &TensionCurve {
        match dir {
            Direction::Increasing => &self.loading,
            Direction::Decreasing => &self.unloading,
        }
    }

    fn increasing(&self) -> bool {
        self.state.branch != Branch::Unloading
    }

    /// Advances the state to `strain` moving in `dir` and returns the tension.
    /// A change of direction is treated as a reversal at the previous strain.
    pub fn hysteretic_tension(&mut self, strain: f64, dir: Direction) -> f64 {
        let up = dir == Direction::Increasing;
        if up != self.increasing() {
            self.reverse(self.state.last_strain);
        }
        self.state.last_strain = strain;
        if up && strain >= self.state.max_strain {
            self.state.max_strain = strain;
            self.state.branch = Branch::Loading;
        }
        self.branch_curve(dir).tension(strain)
    }

    /// Switches branch at `strain`.
    pub fn reverse(&mut self, strain: f64) {
        let s = &mut self.state;
        if s.branch == Branch::Unloading {
            s.branch = if strain < s.max_strain {
                Branch::ReloadingInterior
            } else {
                Branch::Loading
            };
        } else {
            let area = self.loop_area(self.state.anchor, strain);
            let s = &mut self.state;
            s.dissipated += area;
            s.max_strain = s.max_strain.max(strain);
            s.branch = Branch::Unloading;
        }
        self.state.anchor = strain;
        self.state.last_strain = strain;
    }

    /// Area between loading and unloading curves over `[from, to]`, per unit length.
    pub fn loop_area(&self, from: f64, to: f64) -> f64 {
        (self.loading_energy.value(to) - self.loading_energy.value(from))
            - (self.unloading_energy.value(to) - self.unloading_energy.value(from))
    }

    /// Energy per unit length dissipated so far.
    pub fn dissipated(&self) -> f64 {
        self.state.dissipated
    }

    /// Recoverable elastic energy per unit length at `strain` on the current branch.
    pub fn stored_energy(&self, strain: f64) -> f64 {
        let a = self.state.anchor;
        if self.increasing() {
            self.unloading_energy.value(a) + self.loading_energy.value(strain)
                - self.loading_energy.value(a)
        } else {
            self.unloading_energy.value(strain)
        }
    }

    pub fn loading_energy(&self) -> &EnergyDensity {
        &self.loading_energy
    }

    pub fn unloading_energy(&self) -> &EnergyDensity {
        &self.unloading_energy
    }
}

/// Pairs a loading and an unloading curve. Fails if the unloading curve
/// carries more tension than the loading curve at any strain.
pub fn make_hysteresis(loading: TensionCurve, unloading: TensionCurve) -> Result<HysteresisLaw> {
    let scale = loading.knots().iter().chain(unloading.knots()).fold(1.0_f64, |m, k| m.max(k.1));
    let tol = 1e-9 * scale;
    let mut grid: Vec<f64> = loading
        .knots()
        .iter()
        .chain(unloading.knots())
        .map(|k| k.0)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    for &e in &grid {
        for (lo, un) in [
            (loading.tension(e), unloading.tension(e)),
            (loading.tension_right(e), unloading.tension_right(e)),
        ] {
            if un > lo + tol {
                return Err(Error::BranchOrderViolation { strain: e });
            }
        }
    }
    if unloading.final_slope() > loading.final_slope() {
        let last = grid[grid.len() - 1];
        let gap = loading.tension(last) - unloading.tension(last);
        let far = last + gap / (unloading.final_slope() - loading.final_slope());
        return Err(Error::BranchOrderViolation { strain: far });
    }
    let loading_energy = loading.energy();
    let unloading_energy = unloading.energy();
    Ok(HysteresisLaw {
        loading,
        unloading,
        loading_energy,
        unloading_energy,
        state: HysteresisState::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plateau(h: f64) -> TensionCurve {
        TensionCurve::plateau(h, 0.0, 0.1).unwrap()
    }

    /// Midpoint quadrature of `loading − unloading` on a fine grid.
    fn area_oracle(law: &HysteresisLaw, a: f64, b: f64) -> f64 {
        let n = 200_000;
        let h = (b - a) / n as f64;
        let f = |e: f64| law.loading().tension(e) - law.unloading().tension(e);
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    }

    fn drive(law: &mut HysteresisLaw, path: &[f64]) {
        for w in path.windows(2) {
            let dir = if w[1] >= w[0] {
                Direction::Increasing
            } else {
                Direction::Decreasing
            };
            let n = 50;
            for i in 1..=n {
                let e = w[0] + (w[1] - w[0]) * i as f64 / n as f64;
                law.hysteretic_tension(e, dir);
            }
        }
    }

    #[test]
    fn rejects_unloading_above_loading() {
        assert!(matches!(
            make_hysteresis(plateau(900.0), plateau(4704.0)),
            Err(Error::BranchOrderViolation { .. })
        ));
        let steep = TensionCurve::linear(5e4).unwrap();
        let soft = TensionCurve::linear(1e4).unwrap();
        assert!(make_hysteresis(soft, steep).is_err());
    }

    #[test]
    fn identical_branches_are_elastic() {
        let mut law = make_hysteresis(plateau(4704.0), plateau(4704.0)).unwrap();
        assert!(law.is_elastic());
        drive(&mut law, &[0.0, 0.1, 0.0, 0.05, 0.0]);
        assert_eq!(law.dissipated(), 0.0);
        assert_eq!(law.hysteretic_tension(0.03, Direction::Decreasing), 4704.0);
    }

    #[test]
    fn full_loop_dissipates_area() {
        let mut law = make_hysteresis(plateau(4704.0), plateau(900.0)).unwrap();
        drive(&mut law, &[0.0, 0.1, 0.0]);
        let rope_length = 10.0;
        assert!((law.dissipated() * rope_length - 3804.0).abs() < 1e-9);
        let oracle = area_oracle(&law, 0.0, 0.1) * rope_length;
        assert!((law.dissipated() * rope_length - oracle).abs() < 1e-6 * oracle);
    }

    #[test]
    fn monotone_history_dissipates_nothing() {
        let mut law = make_hysteresis(plateau(4704.0), plateau(900.0)).unwrap();
        drive(&mut law, &[0.0, 0.08]);
        assert_eq!(law.dissipated(), 0.0);
        assert_eq!(law.state().branch, Branch::Loading);
    }

    #[test]
    fn branch_switches_at_reversal() {
        let mut law = make_hysteresis(plateau(4704.0), plateau(900.0)).unwrap();
        assert_eq!(law.hysteretic_tension(0.05, Direction::Increasing), 4704.0);
        assert_eq!(law.hysteretic_tension(0.04, Direction::Decreasing), 900.0);
        assert_eq!(law.state().branch, Branch::Unloading);
        assert_eq!(law.state().anchor, 0.05);
        assert_eq!(law.hysteretic_tension(0.045, Direction::Increasing), 4704.0);
        assert_eq!(law.state().branch, Branch::ReloadingInterior);
        law.hysteretic_tension(0.06, Direction::Increasing);
        assert_eq!(law.state().branch, Branch::Loading);
    }

    #[test]
    fn interior_excursions_sum_to_loop_areas() {
        let load = TensionCurve::new(vec![(0.0, 0.0), (0.02, 3000.0), (0.2, 4000.0)]).unwrap();
        let un = TensionCurve::new(vec![(0.0, 0.0), (0.05, 800.0), (0.2, 1500.0)]).unwrap();
        let mut law = make_hysteresis(load, un).unwrap();
        let path = [0.0, 0.12, 0.04, 0.09, 0.01, 0.15, 0.0];
        drive(&mut law, &path);
        let oracle = area_oracle(&law, 0.0, 0.12)
            + area_oracle(&law, 0.04, 0.09)
            + area_oracle(&law, 0.01, 0.15);
        assert!((law.dissipated() - oracle).abs() < 1e-9 * oracle);
    }

    #[test]
    fn stored_energy_tracks_branches() {
        let mut law = make_hysteresis(plateau(4704.0), plateau(900.0)).unwrap();
        law.hysteretic_tension(0.1, Direction::Increasing);
        assert!((law.stored_energy(0.1) - 470.4).abs() < 1e-9);
        law.hysteretic_tension(0.09, Direction::Decreasing);
        assert!((law.stored_energy(0.09) - 81.0).abs() < 1e-9);
    }
}
