use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IntegratorConfig;
use crate::error::Result;

pub const TRAJECTORY_HEADER: &str = "t,y,v,strain,tension_n,e_kin,e_grav,e_el,e_diss,event";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// Rope becomes taut while the climber moves down.
    Taut,
    /// Rope goes slack while the climber moves up.
    Slack,
    /// Velocity reversal.
    Turn,
    Rest,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Taut => "taut",
            EventKind::Slack => "slack",
            EventKind::Turn => "turn",
            EventKind::Rest => "rest",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// Climber position, measured down from the anchor.
    pub y: f64,
    pub v: f64,
    /// Strain of the segment attached to the climber.
    pub strain: f64,
    /// Strain above the carabiner, when there is one.
    pub strain_upper: Option<f64>,
    /// Tension at the climber end.
    pub tension: f64,
    pub e_kin: f64,
    pub e_grav: f64,
    pub e_el: f64,
    pub e_diss: f64,
    pub event: Option<EventKind>,
}

impl Sample {
    pub fn total_energy(&self) -> f64 {
        self.e_kin + self.e_grav + self.e_el + self.e_diss
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    /// Unstretched rope length between the anchor and the climber.
    pub taut_length: f64,
    pub mass: f64,
    pub gravity: f64,
    pub max_stretch: f64,
    pub law_id: String,
    pub config: IntegratorConfig,
}

/// Uniformly spaced samples plus one row per event, in strictly increasing time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    meta: TrajectoryMeta,
    samples: Vec<Sample>,
}

impl Trajectory {
    pub(crate) fn new(meta: TrajectoryMeta, samples: Vec<Sample>) -> Self {
        Self { meta, samples }
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn events(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.event.is_some())
    }

    pub fn peak_tension(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.tension))
    }

    pub fn max_position(&self) -> f64 {
        self.samples.iter().fold(f64::NEG_INFINITY, |m, s| m.max(s.y))
    }

    /// Time of the first velocity reversal.
    pub fn arrest_time(&self) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| matches!(s.event, Some(EventKind::Turn | EventKind::Rest)))
            .map(|s| s.t)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRAJECTORY_HEADER.split(','))?;
        for s in &self.samples {
            w.write_record(&[
                s.t.to_string(),
                s.y.to_string(),
                s.v.to_string(),
                s.strain.to_string(),
                s.tension.to_string(),
                s.e_kin.to_string(),
                s.e_grav.to_string(),
                s.e_el.to_string(),
                s.e_diss.to_string(),
                s.event.map(EventKind::as_str).unwrap_or("").to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}
