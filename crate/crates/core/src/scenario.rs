//! Scenario runner: one named computation per invocation, configured from a
//! JSON file and/or flags, producing a JSON report or CSV.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::catalog::{frame_by_name, make_friedmann, minkowski, u_from_v, v_from_u, Model, ModelKind};
use crate::equivalence::{
    equivalence_verdict_with_mode, plli_expansion_pair, plli_frames, ComparisonMode, EQUIVALENCE_TOLERANCE,
};
use crate::error::Error;
use crate::frames::{
    classify_synchronizability, is_pirf, kinematic_decompose, FrameField, SampleSet, FORM_ZERO_THRESHOLD,
};
use crate::geodesic::{
    free_particle_experiment, integrate_geodesic_span, launch_velocity, tetrad_from_velocity, StepControl,
    DEFAULT_ADAPTIVE_TOLERANCE,
};
use crate::geometry::ChartPoint;
use crate::normal::{NormalChart, DEFAULT_VALIDITY_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    Decompose,
    Classify,
    PirfCheck,
    Geodesic,
    Experiment,
    NormalChart,
    Plli,
    Equivalence,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 8] = [
        ScenarioName::Decompose,
        ScenarioName::Classify,
        ScenarioName::PirfCheck,
        ScenarioName::Geodesic,
        ScenarioName::Experiment,
        ScenarioName::NormalChart,
        ScenarioName::Plli,
        ScenarioName::Equivalence,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::Decompose => "decompose",
            ScenarioName::Classify => "classify",
            ScenarioName::PirfCheck => "pirf-check",
            ScenarioName::Geodesic => "geodesic",
            ScenarioName::Experiment => "experiment",
            ScenarioName::NormalChart => "normal-chart",
            ScenarioName::Plli => "plli",
            ScenarioName::Equivalence => "equivalence",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Every setting of a run. Keys are the long flag names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_probe: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speeds: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adaptive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $(if $src.$f.is_some() { $dst.$f = $src.$f; })*
    };
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Validation(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: ScenarioConfig) -> Self {
        overlay_fields!(self, other; scenario, model, a, u, v, frame, frame_b, omega, radius_cap, boost, point,
            v_probe, speeds, smin, smax, step, adaptive, half_width, grid, strict, radius, tol, out, format);
        self
    }
}

#[derive(Debug)]
pub enum ScenarioError {
    Validation(String),
    Numeric(Error),
    Io(io::Error),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Validation(_) | ScenarioError::Io(_) => 2,
            ScenarioError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Validation(m) => write!(f, "invalid input: {m}"),
            ScenarioError::Numeric(e) => write!(f, "numerical failure: {e}"),
            ScenarioError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<Error> for ScenarioError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::StepUnderflow(_) | Error::NonFinite(_) | Error::SingularMetric(_) => {
                ScenarioError::Numeric(e)
            }
            other => ScenarioError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub scenario: ScenarioName,
    pub input: ScenarioConfig,
    pub result: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    pub tool_version: String,
    /// Seconds.
    pub wall_time: f64,
    #[serde(skip)]
    pub csv: Option<String>,
}

struct Run<'a> {
    cfg: &'a ScenarioConfig,
    tolerances: BTreeMap<String, f64>,
    csv: Option<String>,
}

fn json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report values serialize")
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation(msg.into())
}

impl Run<'_> {
    fn tol(&mut self, name: &str, default: f64) -> Result<f64, ScenarioError> {
        let t = self.cfg.tol.unwrap_or(default);
        if !(t > 0.0) {
            return Err(invalid(format!("tolerance {t} must be positive")));
        }
        self.tolerances.insert(name.to_string(), t);
        Ok(t)
    }

    fn fixed(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.to_string(), value);
    }

    fn u(&self) -> Result<f64, ScenarioError> {
        match (self.cfg.u, self.cfg.v) {
            (Some(_), Some(_)) => Err(invalid("give either `u` or `v`, not both")),
            (Some(u), None) => Ok(u),
            (None, Some(v)) => Ok(u_from_v(v)?),
            (None, None) => Ok(0.0),
        }
    }

    fn model(&self) -> Result<Model, ScenarioError> {
        let kind = self.cfg.model.unwrap_or(if self.cfg.a.is_some() || self.cfg.u.is_some() || self.cfg.v.is_some() {
            ModelKind::Friedmann
        } else {
            ModelKind::Minkowski
        });
        match kind {
            ModelKind::Minkowski => {
                if self.cfg.a.is_some() || self.cfg.u.is_some() || self.cfg.v.is_some() {
                    return Err(invalid("minkowski takes no `a`, `u` or `v`"));
                }
                Ok(Model::Minkowski(minkowski()))
            }
            ModelKind::Friedmann => {
                Ok(Model::Friedmann(Box::new(make_friedmann(self.cfg.a.unwrap_or(0.0), self.u()?)?)))
            }
        }
    }

    fn frame(&self, model: &Model, name: Option<&str>) -> Result<FrameField, ScenarioError> {
        let lower = name.map(str::to_ascii_lowercase);
        if let (Model::Friedmann(f), Some(n @ ("l" | "lprime" | "l'"))) = (model, lower.as_deref()) {
            if f.u == 0.0 {
                return Err(invalid("tube frames need a non-zero `u` or `v`"));
            }
            let a = self.cfg.a.unwrap_or(0.0);
            let (_, l, lp) = plli_frames(a, f.v.abs())?;
            return Ok(if n == "l" { l.frame } else { lp.frame });
        }
        Ok(frame_by_name(model, name, self.cfg.omega, self.cfg.radius_cap, self.cfg.boost)?)
    }

    fn point(&self, model: &Model) -> Result<ChartPoint, ScenarioError> {
        Ok(model.metric().point(self.cfg.point.unwrap_or([0.0; 4]))?)
    }

    fn samples(&self, center: &ChartPoint) -> Result<SampleSet, ScenarioError> {
        let h = self.cfg.half_width.unwrap_or(0.5);
        let n = self.cfg.grid.unwrap_or(3);
        if !(h > 0.0) || n < 2 {
            return Err(invalid(format!("sample grid needs half-width > 0 and grid ≥ 2, got {h} and {n}")));
        }
        let lo = center.coords.map(|c| c - h);
        let hi = center.coords.map(|c| c + h);
        Ok(SampleSet::grid(&center.chart, lo, hi, n)?)
    }

    fn decompose(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let model = self.model()?;
        let frame = self.frame(&model, self.cfg.frame.as_deref())?;
        let p = self.point(&model)?;
        let d = kinematic_decompose(model.metric(), &frame, &p)?;
        Ok(serde_json::json!({
            "frame": frame.label(),
            "expansion": d.expansion,
            "shear_scalar": d.shear_scalar(),
            "vorticity_scalar": d.vorticity_scalar(),
            "acceleration_magnitude": d.acceleration_magnitude(),
            "decomposition": json(&d),
        }))
    }

    fn classify(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let model = self.model()?;
        let frame = self.frame(&model, self.cfg.frame.as_deref())?;
        let samples = self.samples(&self.point(&model)?)?;
        self.fixed("form-threshold", FORM_ZERO_THRESHOLD);
        let r = classify_synchronizability(model.metric(), &frame, &samples)?;
        Ok(serde_json::json!({ "frame": frame.label(), "report": json(&r) }))
    }

    fn pirf_check(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let model = self.model()?;
        let frame = self.frame(&model, self.cfg.frame.as_deref())?;
        let samples = self.samples(&self.point(&model)?)?;
        let tol = self.tol("pirf", FORM_ZERO_THRESHOLD)?;
        let r = is_pirf(model.metric(), &frame, &samples.points, tol)?;
        Ok(serde_json::json!({ "frame": frame.label(), "report": json(&r) }))
    }

    fn geodesic(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let model = self.model()?;
        let metric = model.metric();
        let p = self.point(&model)?;
        let velocity = match self.cfg.speeds {
            Some(s) => launch_velocity(&metric.eval(&p)?, s)?,
            None => {
                let default = match &model {
                    Model::Friedmann(_) => "z",
                    Model::Minkowski(_) => "inertial",
                };
                self.frame(&model, Some(self.cfg.frame.as_deref().unwrap_or(default)))?.eval(&p)?
            }
        };
        let control = if self.cfg.adaptive.unwrap_or(false) {
            StepControl::adaptive(self.tol("adaptive-step", DEFAULT_ADAPTIVE_TOLERANCE)?)
        } else {
            let h = self.cfg.step.unwrap_or(1e-3);
            self.fixed("step", h);
            StepControl::fixed(h)
        };
        let (smin, smax) = (self.cfg.smin.unwrap_or(0.0), self.cfg.smax.unwrap_or(10.0));
        let path = integrate_geodesic_span(metric, &p, velocity, smin, smax, control)?;
        self.csv = Some(path.to_csv());
        let last = path.last();
        Ok(serde_json::json!({
            "initial_velocity": velocity,
            "samples": path.samples.len(),
            "termination": json(&path.termination),
            "stats": json(&path.stats),
            "max_norm_defect": path.max_norm_defect(metric)?,
            "final": json(last),
            "trajectory": path.samples.iter().map(|s| {
                let mut row = vec![s.s];
                row.extend(s.point.coords);
                row.extend(s.velocity);
                row
            }).collect::<Vec<_>>(),
        }))
    }

    fn experiment(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let a = self.cfg.a.unwrap_or(1e-3);
        let u = if self.cfg.u.is_none() && self.cfg.v.is_none() { 0.1005 } else { self.u()? };
        let (ra, rb) = free_particle_experiment(a, u, self.cfg.v_probe.unwrap_or(0.01))?;
        Ok(serde_json::json!({ "asymmetry": ra.asymmetry, "case_a": json(&ra), "case_b": json(&rb) }))
    }

    fn normal_chart(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let model = self.model()?;
        let metric = model.metric();
        let p = self.point(&model)?;
        let frame = self.frame(&model, self.cfg.frame.as_deref())?;
        let tetrad = tetrad_from_velocity(&metric.eval(&p)?, &frame.eval(&p)?)?;
        let radius = self.cfg.radius.unwrap_or(DEFAULT_VALIDITY_RADIUS);
        let chart = Arc::new(NormalChart::new(metric, &p, tetrad, radius)?);
        let check = chart.check(metric)?;
        Ok(serde_json::json!({ "chart": json(&chart.record()), "check": json(&check) }))
    }

    fn plli(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let a = self.cfg.a.unwrap_or(1e-3);
        let v = match (self.cfg.u, self.cfg.v) {
            (Some(_), Some(_)) => return Err(invalid("give either `u` or `v`, not both")),
            (Some(u), None) => v_from_u(u),
            (None, v) => v.unwrap_or(0.1),
        };
        let r = plli_expansion_pair(a, v)?;
        Ok(serde_json::json!({
            "a": r.a,
            "v": r.v,
            "u": r.u,
            "point": json(&r.point),
            "theta_L": r.theta_l,
            "theta_Lprime": r.theta_lprime,
            "ratio_to_av2": r.ratio_to_av2,
            "raw_theta_L": r.l.raw,
            "raw_theta_Lprime": r.lprime.raw,
        }))
    }

    fn equivalence(&mut self) -> Result<serde_json::Value, ScenarioError> {
        let model = self.model()?;
        let (da, db) = match &model {
            Model::Friedmann(_) => ("v", "z"),
            Model::Minkowski(_) => ("inertial", "boosted"),
        };
        let fa = self.frame(&model, Some(self.cfg.frame.as_deref().unwrap_or(da)))?;
        let fb = self.frame(&model, Some(self.cfg.frame_b.as_deref().unwrap_or(db)))?;
        let p = self.point(&model)?;
        let tol = self.tol("equivalence", EQUIVALENCE_TOLERANCE)?;
        let mode = if self.cfg.strict.unwrap_or(false) { ComparisonMode::Strict } else { ComparisonMode::Invariants };
        let v = equivalence_verdict_with_mode(model.metric(), &fa, &fb, &p, tol, mode)?;
        Ok(serde_json::json!({ "frames": [fa.label(), fb.label()], "verdict": json(&v) }))
    }
}

/// Run the configured scenario.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport, ScenarioError> {
    let name = config.scenario.ok_or_else(|| {
        let names: Vec<_> = ScenarioName::ALL.iter().map(|s| s.as_str()).collect();
        invalid(format!("no scenario given; choose one of {}", names.join(", ")))
    })?;
    let start = Instant::now();
    log::info!("running {name}");
    let mut run = Run { cfg: config, tolerances: BTreeMap::new(), csv: None };
    let result = match name {
        ScenarioName::Decompose => run.decompose(),
        ScenarioName::Classify => run.classify(),
        ScenarioName::PirfCheck => run.pirf_check(),
        ScenarioName::Geodesic => run.geodesic(),
        ScenarioName::Experiment => run.experiment(),
        ScenarioName::NormalChart => run.normal_chart(),
        ScenarioName::Plli => run.plli(),
        ScenarioName::Equivalence => run.equivalence(),
    }?;
    let wall_time = start.elapsed().as_secs_f64();
    log::debug!("{name} finished in {wall_time:.3} s");
    Ok(ScenarioReport {
        scenario: name,
        input: config.clone(),
        result,
        tolerances: run.tolerances,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time,
        csv: run.csv,
    })
}

/// JSON writer printing every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn report_json(report: &ScenarioReport) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    report.serialize(&mut ser).expect("report serializes");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json is utf-8")
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        serde_json::Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        serde_json::Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        serde_json::Value::Number(n) => {
            let text = n.as_f64().filter(|_| n.is_f64()).map(crate::geodesic::format_sig17).unwrap_or(n.to_string());
            out.push((prefix.to_string(), text));
        }
        serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// CSV form: the trajectory for `geodesic`, `key,value` rows otherwise.
pub fn report_csv(report: &ScenarioReport) -> String {
    if let Some(csv) = &report.csv {
        return csv.clone();
    }
    let mut rows = Vec::new();
    flatten("", &report.result, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&k);
        out.push(',');
        out.push_str(&v);
        out.push('\n');
    }
    out
}

/// Write the report in the configured format to `out`, or stdout.
pub fn write_report(report: &ScenarioReport) -> Result<(), ScenarioError> {
    let text = match report.input.format.unwrap_or_default() {
        OutputFormat::Json => report_json(report),
        OutputFormat::Csv => report_csv(report),
    };
    match &report.input.out {
        Some(path) => std::fs::write(path, text).map_err(ScenarioError::Io),
        None => {
            use io::Write;
            io::stdout().write_all(text.as_bytes()).map_err(ScenarioError::Io)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ScenarioConfig {
        ScenarioConfig::from_json(text).unwrap()
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = cfg(r#"{"scenario":"plli","a":1e-3,"v":0.1}"#);
        let flags = ScenarioConfig { v: Some(0.2), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!(merged.a, Some(1e-3));
        assert_eq!(merged.v, Some(0.2));
        assert!(ScenarioConfig::from_json(r#"{"scenario":"plli","speed":1}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"scenario":"warp"}"#).is_err());
    }

    #[test]
    fn minkowski_decomposition_is_zero() {
        let r = run_scenario(&cfg(r#"{"scenario":"decompose","model":"minkowski","frame":"inertial"}"#)).unwrap();
        for k in ["expansion", "shear_scalar", "vorticity_scalar", "acceleration_magnitude"] {
            assert_eq!(r.result[k], 0.0, "{k}");
        }
    }

    #[test]
    fn error_classes() {
        let e = run_scenario(&cfg(r#"{"scenario":"decompose","model":"minkowski","a":1}"#)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_scenario(&ScenarioConfig::default()).unwrap_err();
        assert!(e.to_string().contains("pirf-check"));
        assert_eq!(ScenarioError::from(Error::StepUnderflow(1e-13)).exit_code(), 3);
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let r = run_scenario(&cfg(r#"{"scenario":"experiment","a":1e-3}"#)).unwrap();
        let text = report_json(&r);
        assert!(text.contains("\"a\":1.0000000000000000e-3"), "{text}");
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["result"]["asymmetry"].as_f64(), r.result["asymmetry"].as_f64());
        assert!(report_csv(&r).starts_with("key,value\nasymmetry,"));
    }
}
