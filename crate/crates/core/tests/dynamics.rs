use ropesim::analysis::{
    closed_form_trajectory, ideal_arrest_time, initial_velocity, lower_bound_b0, make_report,
    Scenario,
};
use ropesim::constitutive::{ideal_plateau_law_with_ramp, make_hysteresis, TensionCurve};
use ropesim::dynamics::{
    energy_ledger, simulate_carabiner_fall, simulate_cycles, simulate_fall, CarabinerScenario,
    EventKind, IntegratorConfig, RopeLaw,
};
use ropesim::Error;

fn reference() -> Scenario {
    Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0).unwrap()
}

fn step_law(s: &Scenario) -> TensionCurve {
    ideal_plateau_law_with_ramp(s, 0.0).unwrap()
}

fn plateau(h: f64) -> TensionCurve {
    TensionCurve::plateau(h, 0.0, 0.1).unwrap()
}

#[test]
fn ideal_law_follows_closed_form() {
    let s = reference();
    let cfg = IntegratorConfig {
        max_time: 0.5,
        stop_at_arrest: true,
        ..Default::default()
    };
    let traj = simulate_fall(&s, step_law(&s), &cfg).unwrap();
    let t_arrest = ideal_arrest_time(&s);
    for p in traj.samples() {
        let (y, _) = closed_form_trajectory(&s, p.t.min(t_arrest)).unwrap();
        assert!((p.y - y).abs() < 1e-8, "t = {}: {} vs {}", p.t, p.y, y);
    }
    let report = make_report(&traj, &s).unwrap();
    assert!((report.peak_tension - 4704.0).abs() < 1e-9);
    assert!((report.max_elongation - 1.0).abs() < 1e-9);
    assert!((report.arrest_time_t - 0.20203).abs() < 1e-5);
    assert_eq!(traj.samples()[0].event, Some(EventKind::Taut));
}

#[test]
fn no_rope_free_falls_past_the_limit() {
    let s = reference();
    let zero = TensionCurve::new(vec![(0.0, 0.0), (1.0, 0.0)]).unwrap();
    match simulate_fall(&s, zero, &IntegratorConfig::default()) {
        Err(Error::ElongationExceeded { t, y, .. }) => {
            let v0 = initial_velocity(&s);
            let parabola = 10.0 + v0 * t + 0.5 * 9.8 * t * t;
            assert!((y - parabola).abs() < 1e-9);
        }
        other => panic!("expected ElongationExceeded, got {other:?}"),
    }
}

#[test]
fn elastic_motion_is_periodic() {
    let s = reference();
    let law = TensionCurve::new(vec![(0.0, 0.0), (0.02, 3000.0), (0.08, 9000.0)]).unwrap();
    let cfg = IntegratorConfig {
        max_time: 3.0,
        ..Default::default()
    };
    let traj = simulate_fall(&s, law, &cfg).unwrap();
    let taut: Vec<_> = traj
        .events()
        .filter(|p| p.event == Some(EventKind::Taut))
        .collect();
    assert!(taut.len() >= 2);
    let v0 = initial_velocity(&s);
    let back = taut[1];
    assert!((back.y - 10.0).abs() < 1e-6 * 10.0);
    assert!((back.v - v0).abs() < 1e-6 * v0);
    let e0 = traj.samples()[0].total_energy();
    for p in traj.samples().iter().filter(|p| p.t <= back.t) {
        assert!((p.total_energy() - e0).abs() < 1e-6 * e0.abs());
        assert!(p.e_kin >= 0.0 && p.e_el >= 0.0 && p.e_diss == 0.0);
    }
    assert!(traj.samples().windows(2).all(|w| w[0].t < w[1].t));
}

#[test]
fn ledger_examples() {
    let s = reference();
    let law = RopeLaw::from(step_law(&s));
    let start = energy_ledger(&s, &law, 10.0, initial_velocity(&s));
    assert_eq!(start.e_el, 0.0);
    assert!((start.e_kin - 3920.0).abs() < 1e-9);
    let end = energy_ledger(&s, &law, 11.0, 0.0);
    assert!((end.e_el - 4704.0).abs() < 1e-9);
    let slack = energy_ledger(&s, &law, 9.0, 3.0);
    assert_eq!(slack.e_el, 0.0);
    assert!((slack.e_grav + 80.0 * 9.8 * 9.0).abs() < 1e-12);
}

#[test]
fn carabiner_ideal_lower_law_keeps_upper_segment_unstretched() {
    let cs = CarabinerScenario::with_mu(80.0, 9.8, 1.0, 5.0, 4.0, 6.0, 0.6).unwrap();
    let lower = cs.lower_segment_scenario();
    let law = step_law(&lower);
    let cfg = IntegratorConfig {
        max_time: 0.5,
        stop_at_arrest: true,
        ..Default::default()
    };
    let traj = simulate_carabiner_fall(&cs, &law, &cfg).unwrap();
    assert!(traj.samples().iter().all(|p| p.strain_upper == Some(0.0)));
    let b0 = lower_bound_b0(&lower);
    assert!((traj.peak_tension() - b0).abs() < 1e-3 * b0);
}

#[test]
fn frictionless_carabiner_matches_series_rope() {
    let e = 2.0e5;
    let law = TensionCurve::linear(e).unwrap();
    let cs = CarabinerScenario::with_mu(80.0, 9.8, 1.0, 5.0, 4.0, 6.0, 1.0).unwrap();
    let cfg = IntegratorConfig {
        max_time: 1.0,
        enforce_elongation: false,
        ..Default::default()
    };
    let a = simulate_carabiner_fall(&cs, &law, &cfg).unwrap();
    let b = simulate_fall(&cs.base(), law.clone(), &cfg).unwrap();
    assert_eq!(a.samples().len(), b.samples().len());
    for (p, q) in a.samples().iter().zip(b.samples()) {
        assert!((p.y - q.y).abs() < 1e-6 * q.y);
        assert!((p.tension - q.tension).abs() < 1e-6 * q.tension.max(1.0));
    }
}

#[test]
fn strong_friction_decouples_upper_segment() {
    let e = 2.0e5;
    let law = TensionCurve::linear(e).unwrap();
    let cs = CarabinerScenario::with_mu(80.0, 9.8, 1.0, 5.0, 4.0, 6.0, 1e-12).unwrap();
    let cfg = IntegratorConfig {
        max_time: 0.6,
        enforce_elongation: false,
        ..Default::default()
    };
    let a = simulate_carabiner_fall(&cs, &law, &cfg).unwrap();
    // same impact speed on a rope of length l2 alone
    let single = Scenario::new(80.0, 9.8, 6.0, 1.0, 1.0).unwrap();
    let b = simulate_fall(&single, law, &cfg).unwrap();
    for (p, q) in a.samples().iter().zip(b.samples()) {
        assert!((p.tension - q.tension).abs() < 1e-6 * q.tension.max(1.0));
    }
}

#[test]
fn strong_unloading_lowers_climber_back() {
    let s = reference();
    let law = make_hysteresis(plateau(4704.0), plateau(1000.0)).unwrap();
    let traj = simulate_cycles(&s, &law, &IntegratorConfig::default()).unwrap();
    let report = make_report(&traj, &s).unwrap();
    let rest = report.rest_position.unwrap();
    assert!((rest - 10.0).abs() < 0.05, "rest at {rest}");
    assert!(report.energy_dissipated > 0.0);
}

#[test]
fn weak_unloading_holds_climber_near_full_stretch() {
    let s = reference();
    let law = make_hysteresis(plateau(4704.0), plateau(500.0)).unwrap();
    let traj = simulate_cycles(&s, &law, &IntegratorConfig::default()).unwrap();
    let report = make_report(&traj, &s).unwrap();
    let rest = report.rest_position.unwrap();
    assert!((rest - 11.0).abs() < 0.05);
    let area = (4704.0 - 500.0) * (traj.max_position() - 10.0);
    assert!((report.energy_dissipated - area).abs() < 1e-6 * area);
}

#[test]
fn elastic_hysteresis_never_rests() {
    let s = reference();
    let law = make_hysteresis(plateau(4704.0), plateau(4704.0)).unwrap();
    let cfg = IntegratorConfig {
        max_time: 1.0,
        ..Default::default()
    };
    assert!(matches!(
        simulate_cycles(&s, &law, &cfg),
        Err(Error::NoRest { .. })
    ));
    let traj = simulate_fall(&s, &law, &cfg).unwrap();
    assert!(traj.samples().iter().all(|p| p.e_diss == 0.0));
}

#[test]
fn static_start_is_at_rest() {
    let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 10.0).unwrap();
    let traj = simulate_fall(&s, step_law(&s), &IntegratorConfig::default()).unwrap();
    assert_eq!(traj.samples().len(), 1);
    assert!((traj.peak_tension() - 784.0).abs() < 1e-9);
}

#[test]
fn invalid_config_is_rejected() {
    let s = reference();
    let cfg = IntegratorConfig {
        event_tol: 1e-3,
        step: 1e-4,
        ..Default::default()
    };
    assert!(matches!(
        simulate_fall(&s, step_law(&s), &cfg),
        Err(Error::Config(_))
    ));
}
