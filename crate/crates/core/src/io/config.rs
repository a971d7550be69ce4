//! Flat `key = value` configuration with `#` comments. Command-line
//! `--key value` pairs use the same keys and override file values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::MEDIATING_CUTOFF;
use crate::ladder::{InitialState, LadderParams, LegTopology, MAX_DENSE_RUNGS};
use crate::propagator::TimeGrid;
use crate::signal::CARRIER_PROMINENCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Reference,
    FieldSweep,
    Heatmap,
    Disorder,
    Scaling,
    FreqTable,
    EffectiveCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Reference,
        Experiment::FieldSweep,
        Experiment::Heatmap,
        Experiment::Disorder,
        Experiment::Scaling,
        Experiment::FreqTable,
        Experiment::EffectiveCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Reference => "reference",
            Experiment::FieldSweep => "field-sweep",
            Experiment::Heatmap => "heatmap",
            Experiment::Disorder => "disorder",
            Experiment::Scaling => "scaling",
            Experiment::FreqTable => "freq-table",
            Experiment::EffectiveCheck => "effective-check",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown experiment `{s}`")))
    }
}

/// Which rungs feel the field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSpec {
    Mediating,
    Uniform,
    Rungs(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_rungs: usize,
    pub j_perp: f64,
    pub j_parallel: f64,
    pub g: f64,
    pub d: f64,
    pub h: f64,
    pub field: FieldSpec,
    pub legs: LegTopology,
    pub state: InitialState,
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub mediating_cutoff: f64,
    /// Carrier-peak prominence used by trajectory summaries.
    pub peak_prominence: f64,
    pub mutual_info: bool,
    pub h_values: Vec<f64>,
    pub g_min: f64,
    pub g_max: f64,
    pub g_points: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub d_points: usize,
    pub deltas: Vec<f64>,
    pub n_samples: usize,
    pub rungs: Vec<usize>,
    pub d_values: Vec<f64>,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            n_rungs: 3,
            j_perp: 1.0,
            j_parallel: 1.0,
            g: 1.0,
            d: 0.5,
            h: 100.0,
            field: FieldSpec::Mediating,
            legs: LegTopology::Both,
            state: InitialState::PhiPlus,
            t_start: 0.0,
            t_end: 10.0,
            n_points: 4001,
            seed: 42,
            out: None,
            mediating_cutoff: MEDIATING_CUTOFF,
            peak_prominence: CARRIER_PROMINENCE,
            mutual_info: false,
            h_values: vec![50.0, 100.0, 200.0, 400.0],
            g_min: 0.0,
            g_max: 1.0,
            g_points: 30,
            d_min: 0.0,
            // Step 0.05, so the grid contains d = 0.5 exactly.
            d_max: 1.45,
            d_points: 30,
            deltas: vec![0.05, 0.1, 0.2],
            n_samples: 200,
            rungs: vec![3, 4, 5],
            d_values: vec![0.0, 0.1, 0.5, 1.0],
        }
    }

    pub fn params(&self) -> LadderParams {
        let mut p = LadderParams {
            n_rungs: self.n_rungs,
            j_perp: self.j_perp,
            j_parallel: self.j_parallel,
            g: self.g,
            d: self.d,
            h: self.h,
            field_mask: LadderParams::mediating_rungs(self.n_rungs),
            legs: self.legs,
        };
        match &self.field {
            FieldSpec::Mediating => {}
            FieldSpec::Uniform => p = p.with_uniform_field(),
            FieldSpec::Rungs(r) => p.field_mask = r.iter().copied().collect(),
        }
        p
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t_start, self.t_end, self.n_points)
    }

    /// Renders the config in the file format; parsing it back yields `self`.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let ulist = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let field = match &self.field {
            FieldSpec::Mediating => "mediating".to_string(),
            FieldSpec::Uniform => "uniform".to_string(),
            FieldSpec::Rungs(r) => ulist(r),
        };
        let legs = match self.legs {
            LegTopology::Both => "both",
            LegTopology::BottomOnly => "bottom-only",
        };
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("writing to a String");
        kv("experiment", self.experiment.name().into());
        kv("n_rungs", self.n_rungs.to_string());
        kv("j_perp", format!("{:?}", self.j_perp));
        kv("j_parallel", format!("{:?}", self.j_parallel));
        kv("g", format!("{:?}", self.g));
        kv("d", format!("{:?}", self.d));
        kv("h", format!("{:?}", self.h));
        kv("field", field);
        kv("legs", legs.into());
        kv("state", self.state.to_string());
        kv("t_start", format!("{:?}", self.t_start));
        kv("t_end", format!("{:?}", self.t_end));
        kv("n_points", self.n_points.to_string());
        kv("seed", self.seed.to_string());
        if let Some(out) = &self.out {
            kv("out", out.display().to_string());
        }
        kv("mediating_cutoff", format!("{:?}", self.mediating_cutoff));
        kv("peak_prominence", format!("{:?}", self.peak_prominence));
        kv("mutual_info", self.mutual_info.to_string());
        kv("h_values", list(&self.h_values));
        kv("g_min", format!("{:?}", self.g_min));
        kv("g_max", format!("{:?}", self.g_max));
        kv("g_points", self.g_points.to_string());
        kv("d_min", format!("{:?}", self.d_min));
        kv("d_max", format!("{:?}", self.d_max));
        kv("d_points", self.d_points.to_string());
        kv("deltas", list(&self.deltas));
        kv("n_samples", self.n_samples.to_string());
        kv("rungs", ulist(&self.rungs));
        kv("d_values", list(&self.d_values));
        s
    }
}

/// Where a setting came from, for error messages.
#[derive(Clone, Debug)]
struct Setting {
    value: String,
    location: String,
}

fn config_error(key: &str, location: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        location: location.to_string(),
        message: message.into(),
    }
}

/// Reads `text` (may be empty) and then `flags`, which win over file values.
///
/// `experiment` picks the defaults; an `experiment` key must agree with it.
pub fn parse_config(
    experiment: Experiment,
    text: &str,
    flags: &[(String, String)],
) -> Result<ExperimentConfig> {
    let mut settings: BTreeMap<String, Setting> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let location = format!("line {}", n + 1);
        let Some((k, v)) = line.split_once('=') else {
            return Err(config_error(line, &location, "expected `key = value`"));
        };
        let key = k.trim().to_string();
        if settings.contains_key(&key) {
            return Err(config_error(&key, &location, "key given twice"));
        }
        settings.insert(
            key,
            Setting {
                value: v.trim().to_string(),
                location,
            },
        );
    }
    for (k, v) in flags {
        settings.insert(
            k.clone(),
            Setting {
                value: v.clone(),
                location: format!("flag --{k}"),
            },
        );
    }

    let mut cfg = ExperimentConfig::defaults(experiment);
    // n_rungs first: the default field mask depends on it.
    if let Some(s) = settings.get("n_rungs") {
        cfg.n_rungs = parse_value("n_rungs", s)?;
    }
    for (key, s) in settings.iter().filter(|(k, _)| k.as_str() != "n_rungs") {
        apply(&mut cfg, key, s)?;
    }
    validate(&cfg, &settings)?;
    Ok(cfg)
}

fn parse_value<T: FromStr>(key: &str, s: &Setting) -> Result<T> {
    s.value.parse::<T>().map_err(|_| {
        config_error(
            key,
            &s.location,
            format!("cannot parse `{}` as {}", s.value, std::any::type_name::<T>()),
        )
    })
}

fn parse_list<T: FromStr>(key: &str, s: &Setting) -> Result<Vec<T>> {
    s.value
        .split(',')
        .map(|item| {
            item.trim().parse::<T>().map_err(|_| {
                config_error(key, &s.location, format!("cannot parse list item `{}`", item.trim()))
            })
        })
        .collect()
}

fn apply(cfg: &mut ExperimentConfig, key: &str, s: &Setting) -> Result<()> {
    let wrap = |e: Error| config_error(key, &s.location, e.to_string());
    match key {
        "experiment" => {
            let e: Experiment = s.value.parse().map_err(wrap)?;
            if e != cfg.experiment {
                return Err(config_error(
                    key,
                    &s.location,
                    format!("config is for `{}`, but `{}` was requested", e.name(), cfg.experiment.name()),
                ));
            }
        }
        "j_perp" => cfg.j_perp = parse_value(key, s)?,
        "j_parallel" => cfg.j_parallel = parse_value(key, s)?,
        "g" => cfg.g = parse_value(key, s)?,
        "d" => cfg.d = parse_value(key, s)?,
        "h" => cfg.h = parse_value(key, s)?,
        "field" => {
            cfg.field = match s.value.as_str() {
                "mediating" => FieldSpec::Mediating,
                "uniform" => FieldSpec::Uniform,
                _ => FieldSpec::Rungs(parse_list(key, s)?),
            }
        }
        "legs" => cfg.legs = s.value.parse().map_err(wrap)?,
        "state" => cfg.state = s.value.parse().map_err(wrap)?,
        "t_start" => cfg.t_start = parse_value(key, s)?,
        "t_end" => cfg.t_end = parse_value(key, s)?,
        "n_points" => cfg.n_points = parse_value(key, s)?,
        "seed" => cfg.seed = parse_value(key, s)?,
        "out" => cfg.out = Some(PathBuf::from(&s.value)),
        "mediating_cutoff" => cfg.mediating_cutoff = parse_value(key, s)?,
        "peak_prominence" => cfg.peak_prominence = parse_value(key, s)?,
        "mutual_info" => cfg.mutual_info = parse_value(key, s)?,
        "h_values" => cfg.h_values = parse_list(key, s)?,
        "g_min" => cfg.g_min = parse_value(key, s)?,
        "g_max" => cfg.g_max = parse_value(key, s)?,
        "g_points" => cfg.g_points = parse_value(key, s)?,
        "d_min" => cfg.d_min = parse_value(key, s)?,
        "d_max" => cfg.d_max = parse_value(key, s)?,
        "d_points" => cfg.d_points = parse_value(key, s)?,
        "deltas" => cfg.deltas = parse_list(key, s)?,
        "n_samples" => cfg.n_samples = parse_value(key, s)?,
        "rungs" => cfg.rungs = parse_list(key, s)?,
        "d_values" => cfg.d_values = parse_list(key, s)?,
        _ => return Err(config_error(key, &s.location, "unknown key")),
    }
    Ok(())
}

fn validate(cfg: &ExperimentConfig, settings: &BTreeMap<String, Setting>) -> Result<()> {
    let loc = |key: &str| {
        settings
            .get(key)
            .map_or_else(|| "default".to_string(), |s| s.location.clone())
    };
    let check = |ok: bool, key: &str, msg: &str| -> Result<()> {
        if ok { Ok(()) } else { Err(config_error(key, &loc(key), msg)) }
    };
    check(
        (2..=MAX_DENSE_RUNGS).contains(&cfg.n_rungs),
        "n_rungs",
        &format!("must be between 2 and {MAX_DENSE_RUNGS}"),
    )?;
    for (key, v) in [
        ("j_perp", cfg.j_perp),
        ("j_parallel", cfg.j_parallel),
        ("g", cfg.g),
        ("d", cfg.d),
        ("h", cfg.h),
        ("mediating_cutoff", cfg.mediating_cutoff),
    ] {
        check(v.is_finite(), key, "must be finite")?;
    }
    check(
        cfg.peak_prominence > 0.0 && cfg.peak_prominence <= 1.0,
        "peak_prominence",
        "must be in (0, 1]",
    )?;
    if let FieldSpec::Rungs(r) = &cfg.field {
        check(
            r.iter().all(|&x| (1..=cfg.n_rungs).contains(&x)),
            "field",
            "rung index out of range",
        )?;
    }
    check(
        cfg.t_start >= 0.0 && cfg.t_end > cfg.t_start && cfg.t_end.is_finite(),
        "t_end",
        "need 0 ≤ t_start < t_end",
    )?;
    check(cfg.n_points >= 2, "n_points", "must be at least 2")?;
    check(cfg.g_points >= 1, "g_points", "must be at least 1")?;
    check(cfg.d_points >= 1, "d_points", "must be at least 1")?;
    check(cfg.n_samples >= 1, "n_samples", "must be at least 1")?;
    check(
        cfg.deltas.iter().all(|&x| x >= 0.0 && x.is_finite()),
        "deltas",
        "must be finite and ≥ 0",
    )?;
    check(
        cfg.rungs.iter().all(|&n| (3..=MAX_DENSE_RUNGS).contains(&n)),
        "rungs",
        &format!("scaling sizes must be between 3 and {MAX_DENSE_RUNGS}"),
    )?;
    check(
        cfg.h_values.iter().all(|h| h.is_finite() && *h >= 0.0),
        "h_values",
        "must be finite and ≥ 0",
    )?;
    Ok(())
}
