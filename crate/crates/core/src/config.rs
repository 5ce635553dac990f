//! JSON scenario files.
//!
//! ```json
//! {
//!   "scenario": { "m": 80, "g": 9.8, "L": 10, "delta_l": 1, "h0": 5 },
//!   "carabiner": { "l1": 4, "l2": 6, "alpha_rad": 1.5708, "k": 0.2 },
//!   "law": { "kind": "ideal" },
//!   "integrator": { "step": 1e-5 }
//! }
//! ```
//!
//! `carabiner` and `integrator` are optional. With a carabiner, `L` may be
//! omitted and defaults to `l1 + l2`. Law kinds: `ideal` (optional `ramp`),
//! `linear` (`slope_n`), `csv:<path>`, and `hysteresis` with `loading` and
//! `unloading` curve references (`ideal`, `plateau:<N>`, `linear:<slope>`,
//! `csv:<path>`). Relative CSV paths are resolved against the file's directory.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::{
    ideal_acceleration, ideal_arrest_time, initial_velocity, lower_bound_b0, Scenario,
};
use crate::constitutive::{
    ideal_plateau_law_with_ramp, make_hysteresis, TensionCurve, DEFAULT_RAMP,
};
use crate::dynamics::{CarabinerScenario, IntegratorConfig, RopeLaw};
use crate::error::{Error, Result};
use crate::io::read_curve_file;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    m: f64,
    g: f64,
    #[serde(rename = "L")]
    length: Option<f64>,
    delta_l: f64,
    h0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCarabiner {
    l1: f64,
    l2: f64,
    alpha_rad: Option<f64>,
    k: Option<f64>,
    mu: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    kind: String,
    ramp: Option<f64>,
    slope_n: Option<f64>,
    loading: Option<String>,
    unloading: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    scenario: RawScenario,
    carabiner: Option<RawCarabiner>,
    law: RawLaw,
    #[serde(default)]
    integrator: Option<serde_json::Map<String, Value>>,
}

/// Deserializes `value`, naming the offending key on failure.
fn from_value<T: DeserializeOwned>(value: &Value, what: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::Config(format!("{what}: key `{path}`: {}", e.into_inner()))
    })
}

/// Physical setup described by a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Setup {
    Single(Scenario),
    Carabiner(CarabinerScenario),
}

impl Setup {
    /// Single-rope scenario with the same fall; for a carabiner, the rope of
    /// length `l1 + l2`.
    pub fn base(&self) -> Scenario {
        match self {
            Setup::Single(s) => *s,
            Setup::Carabiner(cs) => cs.base(),
        }
    }

    /// Scenario the `ideal` law is designed for: the lower segment when a
    /// carabiner is present.
    pub fn design_scenario(&self) -> Scenario {
        match self {
            Setup::Single(s) => *s,
            Setup::Carabiner(cs) => cs.lower_segment_scenario(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub b0: f64,
    pub a0: f64,
    pub v0: f64,
    pub arrest_time_t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

/// A parsed scenario file, kept alongside its JSON so that keys can be
/// overridden for sweeps.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    value: Value,
    base_dir: PathBuf,
    pub setup: Setup,
    pub law: RopeLaw,
    integrator: serde_json::Map<String, Value>,
}

impl ScenarioFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let value: Value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let inner = e.into_inner();
            Error::Config(format!(
                "malformed JSON at line {} column {}: {inner}",
                inner.line(),
                inner.column()
            ))
        })?;
        Self::from_value(value, base_dir)
    }

    pub fn from_value(value: Value, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let base_dir = base_dir.into();
        let raw: RawFile = from_value(&value, "scenario file")?;
        let setup = build_setup(&raw)?;
        let law = build_law(&raw.law, &setup, &base_dir)?;
        if matches!(law, RopeLaw::Hysteretic(_)) && matches!(setup, Setup::Carabiner(_)) {
            return Err(Error::Unsupported(
                "hysteretic laws are not supported with a carabiner".into(),
            ));
        }
        let integrator = raw.integrator.unwrap_or_default();
        // validate the overrides up front so errors point at the file
        merge_integrator(&IntegratorConfig::default(), &integrator)?;
        Ok(Self {
            value,
            base_dir,
            setup,
            law,
            integrator,
        })
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Integrator settings: `defaults` overridden by the file's `integrator` block.
    pub fn integrator(&self, defaults: &IntegratorConfig) -> Result<IntegratorConfig> {
        merge_integrator(defaults, &self.integrator)
    }

    /// Returns a copy with `key` set to `x`. The key is looked up in
    /// `scenario`, then `carabiner`, then `law`; a dotted key such as
    /// `carabiner.k` addresses a section explicitly.
    pub fn with_override(&self, key: &str, x: f64) -> Result<Self> {
        let mut value = self.value.clone();
        let (section, field) = match key.split_once('.') {
            Some((s, f)) => (s.to_string(), f.to_string()),
            None => {
                let section = ["scenario", "carabiner", "law"]
                    .into_iter()
                    .find(|s| {
                        value
                            .get(*s)
                            .and_then(|o| o.as_object())
                            .is_some_and(|o| o.contains_key(key))
                    })
                    .ok_or_else(|| Error::Usage(format!("unknown sweep key `{key}`")))?;
                (section.to_string(), key.to_string())
            }
        };
        let obj = value
            .get_mut(&section)
            .and_then(Value::as_object_mut)
            .ok_or_else(|| Error::Usage(format!("no `{section}` section for key `{key}`")))?;
        if section == "carabiner" {
            match field.as_str() {
                "k" | "alpha_rad" => {
                    obj.remove("mu");
                }
                "mu" => {
                    obj.remove("k");
                    obj.remove("alpha_rad");
                }
                _ => {}
            }
        }
        obj.insert(field, Value::from(x));
        Self::from_value(value, self.base_dir.clone())
    }

    pub fn bound(&self) -> BoundSummary {
        let s = self.setup.base();
        BoundSummary {
            b0: lower_bound_b0(&s),
            a0: ideal_acceleration(&s),
            v0: initial_velocity(&s),
            arrest_time_t: ideal_arrest_time(&s),
            mu: match self.setup {
                Setup::Carabiner(cs) => Some(cs.mu),
                Setup::Single(_) => None,
            },
        }
    }
}

fn merge_integrator(
    defaults: &IntegratorConfig,
    overrides: &serde_json::Map<String, Value>,
) -> Result<IntegratorConfig> {
    let mut v = serde_json::to_value(defaults)?;
    if let Value::Object(m) = &mut v {
        for (k, x) in overrides {
            m.insert(k.clone(), x.clone());
        }
    }
    let cfg: IntegratorConfig = from_value(&v, "integrator")?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a file of integrator defaults (the `--config` file).
pub fn load_integrator_defaults(path: impl AsRef<Path>) -> Result<IntegratorConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        Error::Config(format!(
            "{}: malformed JSON at line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let overrides = value
        .as_object()
        .ok_or_else(|| Error::Config(format!("{}: expected a JSON object", path.display())))?;
    merge_integrator(&IntegratorConfig::default(), overrides)
}

fn build_setup(raw: &RawFile) -> Result<Setup> {
    let s = &raw.scenario;
    match &raw.carabiner {
        None => {
            let length = s
                .length
                .ok_or_else(|| Error::Config("scenario file: key `scenario.L`: missing".into()))?;
            Ok(Setup::Single(Scenario::new(s.m, s.g, length, s.delta_l, s.h0)?))
        }
        Some(c) => {
            if let Some(length) = s.length {
                if (length - (c.l1 + c.l2)).abs() > 1e-9 * length.abs().max(1.0) {
                    return Err(Error::InvalidScenario(format!(
                        "L = {length} does not equal l1 + l2 = {}",
                        c.l1 + c.l2
                    )));
                }
            }
            let cs = match (c.mu, c.alpha_rad, c.k) {
                (Some(mu), None, None) => {
                    CarabinerScenario::with_mu(s.m, s.g, s.delta_l, s.h0, c.l1, c.l2, mu)?
                }
                (None, Some(alpha), Some(k)) => {
                    CarabinerScenario::new(s.m, s.g, s.delta_l, s.h0, c.l1, c.l2, alpha, k)?
                }
                _ => {
                    return Err(Error::Config(
                        "scenario file: key `carabiner`: give either `mu` or both `alpha_rad` and `k`"
                            .into(),
                    ))
                }
            };
            Ok(Setup::Carabiner(cs))
        }
    }
}

fn curve_ref(spec: &str, setup: &Setup, base_dir: &Path, ramp: f64) -> Result<TensionCurve> {
    let design = setup.design_scenario();
    let bad = || Error::Config(format!("law: unrecognized curve reference `{spec}`"));
    if spec == "ideal" {
        return ideal_plateau_law_with_ramp(&design, ramp);
    }
    let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "csv" => {
            let p = Path::new(arg);
            let p = if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.join(p)
            };
            read_curve_file(p)
        }
        "plateau" => {
            let h: f64 = arg.trim().parse().map_err(|_| bad())?;
            let end = (design.max_stretch / design.length).max(2.0 * ramp);
            TensionCurve::plateau(h, ramp, end)
        }
        "linear" => TensionCurve::linear(arg.trim().parse().map_err(|_| bad())?),
        _ => Err(bad()),
    }
}

fn build_law(raw: &RawLaw, setup: &Setup, base_dir: &Path) -> Result<RopeLaw> {
    let ramp = raw.ramp.unwrap_or(DEFAULT_RAMP);
    let unexpected = |key: &str| {
        Error::Config(format!(
            "scenario file: key `law.{key}`: not allowed for kind `{}`",
            raw.kind
        ))
    };
    let check_absent = |fields: &[(&str, bool)]| -> Result<()> {
        match fields.iter().find(|f| f.1) {
            Some((k, _)) => Err(unexpected(k)),
            None => Ok(()),
        }
    };
    match raw.kind.as_str() {
        "ideal" => {
            check_absent(&[
                ("slope_n", raw.slope_n.is_some()),
                ("loading", raw.loading.is_some()),
                ("unloading", raw.unloading.is_some()),
            ])?;
            Ok(ideal_plateau_law_with_ramp(&setup.design_scenario(), ramp)?.into())
        }
        "linear" => {
            check_absent(&[
                ("ramp", raw.ramp.is_some()),
                ("loading", raw.loading.is_some()),
                ("unloading", raw.unloading.is_some()),
            ])?;
            let slope = raw.slope_n.ok_or_else(|| {
                Error::Config("scenario file: key `law.slope_n`: missing".into())
            })?;
            Ok(TensionCurve::linear(slope)?.into())
        }
        "hysteresis" => {
            check_absent(&[("slope_n", raw.slope_n.is_some())])?;
            let get = |v: &Option<String>, key: &str| {
                v.clone().ok_or_else(|| {
                    Error::Config(format!("scenario file: key `law.{key}`: missing"))
                })
            };
            let loading = curve_ref(&get(&raw.loading, "loading")?, setup, base_dir, ramp)?;
            let unloading = curve_ref(&get(&raw.unloading, "unloading")?, setup, base_dir, ramp)?;
            Ok(make_hysteresis(loading, unloading)?.into())
        }
        kind if kind.starts_with("csv:") => {
            check_absent(&[
                ("ramp", raw.ramp.is_some()),
                ("slope_n", raw.slope_n.is_some()),
                ("loading", raw.loading.is_some()),
                ("unloading", raw.unloading.is_some()),
            ])?;
            Ok(curve_ref(kind, setup, base_dir, ramp)?.into())
        }
        other => Err(Error::Config(format!(
            "scenario file: key `law.kind`: unknown kind `{other}` \
             (expected ideal, linear, csv:<path> or hysteresis)"
        ))),
    }
}
