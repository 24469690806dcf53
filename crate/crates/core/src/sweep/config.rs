//! Strict JSON configuration for sweeps, single-point runs and Wigner grids.
//!
//! Parsing walks the document by hand so that every violation is reported
//! with its field path, not just the first one serde would hit.

use std::fmt;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::measures::{linspace, DEFAULT_N_PHI, DEFAULT_N_THETA};
use crate::models::ModelSpec;
use crate::sync::LimitCycleClass;

pub const SCHEMA_VERSION: &str = "1";
/// Oracle samples per cell for `omega_r_certificate` unless overridden.
pub const DEFAULT_ORACLE_SAMPLES: usize = 2000;

/// One config violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Linearly spaced sweep axis over one model parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

/// Plain coordinate range for Wigner grids.
#[derive(Clone, Debug, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureId {
    OmegaR,
    OmegaD,
    /// `oracle_min − Ω_R`, the sampled certificate of the closed form.
    OmegaRCertificate,
    SCoh,
    L1Coherence,
    MutualInformation,
    ClassicalMutualInformation,
    C1,
    SPhase,
    MeanOccupation,
}

impl MeasureId {
    pub const ALL: [MeasureId; 10] = [
        MeasureId::OmegaR,
        MeasureId::OmegaD,
        MeasureId::OmegaRCertificate,
        MeasureId::SCoh,
        MeasureId::L1Coherence,
        MeasureId::MutualInformation,
        MeasureId::ClassicalMutualInformation,
        MeasureId::C1,
        MeasureId::SPhase,
        MeasureId::MeanOccupation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::OmegaR => "omega_r",
            MeasureId::OmegaD => "omega_d",
            MeasureId::OmegaRCertificate => "omega_r_certificate",
            MeasureId::SCoh => "s_coh",
            MeasureId::L1Coherence => "l1_coherence",
            MeasureId::MutualInformation => "mutual_information",
            MeasureId::ClassicalMutualInformation => "classical_mutual_information",
            MeasureId::C1 => "c1",
            MeasureId::SPhase => "s_phase",
            MeasureId::MeanOccupation => "mean_occupation",
        }
    }

    pub fn from_name(name: &str) -> Option<MeasureId> {
        MeasureId::ALL.into_iter().find(|m| m.name() == name)
    }

    fn takes_class(self) -> bool {
        matches!(self, MeasureId::OmegaR | MeasureId::OmegaD | MeasureId::OmegaRCertificate)
    }

    fn takes_site(self) -> bool {
        matches!(self, MeasureId::C1 | MeasureId::SPhase | MeasureId::MeanOccupation)
    }
}

/// A requested measure and its options.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    pub id: MeasureId,
    /// Limit-cycle family for the distance measures.
    pub class: Option<LimitCycleClass>,
    /// Subsystem for single-site measures.
    pub site: Option<usize>,
    /// Oracle samples for `omega_r_certificate`.
    pub samples: Option<usize>,
    /// Quadrature sizes for `s_phase`.
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    /// Output column name; defaults to the measure id.
    pub label: Option<String>,
}

impl MeasureSpec {
    pub fn new(id: MeasureId) -> Self {
        MeasureSpec {
            id,
            class: None,
            site: None,
            samples: None,
            n_theta: None,
            n_phi: None,
            label: None,
        }
    }

    pub fn with_class(mut self, class: LimitCycleClass) -> Self {
        self.class = Some(class);
        self
    }

    pub fn with_site(mut self, site: usize) -> Self {
        self.site = Some(site);
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn column(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.id.name().to_string())
    }

    /// Class with the diagonal family as the default.
    pub fn class_or_default(&self) -> LimitCycleClass {
        self.class.clone().unwrap_or(LimitCycleClass::DiagonalCorrelated)
    }

    pub fn n_theta_or_default(&self) -> usize {
        self.n_theta.unwrap_or(DEFAULT_N_THETA)
    }

    pub fn n_phi_or_default(&self) -> usize {
        self.n_phi.unwrap_or(DEFAULT_N_PHI)
    }

    pub fn samples_or_default(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_ORACLE_SAMPLES)
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), json!(self.id.name()));
        if let Some(class) = &self.class {
            m.insert("class".into(), json!(class.label()));
            if let LimitCycleClass::PartiallyCoherentProduct { pairs } = class {
                let pairs: Vec<[usize; 2]> = pairs.iter().map(|&(a, b)| [a, b]).collect();
                m.insert("pairs".into(), json!(pairs));
            }
        }
        let mut put = |key: &str, v: Option<usize>| {
            if let Some(v) = v {
                m.insert(key.into(), json!(v));
            }
        };
        put("site", self.site);
        put("samples", self.samples);
        put("n_theta", self.n_theta);
        put("n_phi", self.n_phi);
        if let Some(label) = &self.label {
            m.insert("label".into(), json!(label));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<OutputFormat> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Runtime {
    pub workers: usize,
    pub convergence_check: bool,
    /// Base seed for oracle sampling; cell `k` uses `seed + k`.
    pub seed: u64,
}

impl Default for Runtime {
    fn default() -> Self {
        Runtime {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            convergence_check: true,
            seed: 0,
        }
    }
}

/// Wigner grid request.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerSpec {
    pub site: Option<usize>,
    pub x: Range,
    pub p: Range,
}

/// Validated configuration. Sections a subcommand does not need are optional.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub model: ModelSpec,
    pub axes: Option<(Axis, Axis)>,
    pub measures: Vec<MeasureSpec>,
    pub wigner: Option<WignerSpec>,
    pub output: OutputSpec,
    pub runtime: Runtime,
}

impl SweepConfig {
    /// Config for `model` with no sweep, measures or Wigner section.
    pub fn for_model(model: ModelSpec) -> Self {
        SweepConfig {
            model,
            axes: None,
            measures: Vec::new(),
            wigner: None,
            output: OutputSpec::default(),
            runtime: Runtime::default(),
        }
    }

    /// Serializes to the config schema; [`parse_config`] inverts it.
    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .model
            .params()
            .into_iter()
            .map(|(name, v)| {
                let value = if name.starts_with("cutoff") { json!(v as u64) } else { json!(v) };
                (name.to_string(), value)
            })
            .collect();
        let mut root = Map::new();
        root.insert("schema_version".into(), json!(SCHEMA_VERSION));
        root.insert("model".into(), json!({ "type": self.model.kind(), "params": params }));
        if let Some((a1, a2)) = &self.axes {
            let axis = |a: &Axis| json!({ "param": a.param, "min": a.min, "max": a.max, "count": a.count });
            root.insert("sweep".into(), json!({ "axis1": axis(a1), "axis2": axis(a2) }));
        }
        if !self.measures.is_empty() {
            root.insert("measures".into(), Value::Array(self.measures.iter().map(MeasureSpec::to_json).collect()));
        }
        if let Some(w) = &self.wigner {
            let range = |r: &Range| json!({ "min": r.min, "max": r.max, "count": r.count });
            let mut m = Map::new();
            if let Some(site) = w.site {
                m.insert("site".into(), json!(site));
            }
            m.insert("x".into(), range(&w.x));
            m.insert("p".into(), range(&w.p));
            root.insert("wigner".into(), Value::Object(m));
        }
        let mut output = Map::new();
        if let Some(path) = &self.output.path {
            output.insert("path".into(), json!(path.to_string_lossy()));
        }
        output.insert("format".into(), json!(self.output.format.name()));
        root.insert("output".into(), Value::Object(output));
        root.insert(
            "runtime".into(),
            json!({
                "workers": self.runtime.workers,
                "convergence_check": self.runtime.convergence_check,
                "seed": self.runtime.seed,
            }),
        );
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("config values serialize")
    }
}

struct Walker {
    errors: Vec<ConfigError>,
}

impl Walker {
    fn err(&mut self, path: &str, message: impl Into<String>) {
        self.errors.push(ConfigError {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(m) = v.as_object() else {
            self.err(path, "expected an object");
            return None;
        };
        for key in m.keys() {
            if !allowed.contains(&key.as_str()) {
                let at = join(path, key);
                self.err(&at, format!("unknown field (expected one of {})", allowed.join(", ")));
            }
        }
        Some(m)
    }

    fn number(&mut self, v: &Value, path: &str) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.err(path, format!("expected a finite number, got {v}"));
                None
            }
        }
    }

    fn count(&mut self, v: &Value, path: &str, min: u64) -> Option<usize> {
        match v.as_u64() {
            Some(n) if n >= min => Some(n as usize),
            _ => {
                self.err(path, format!("expected an integer >= {min}, got {v}"));
                None
            }
        }
    }

    fn string<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a str> {
        let s = v.as_str();
        if s.is_none() {
            self.err(path, format!("expected a string, got {v}"));
        }
        s
    }

    fn required<'a>(&mut self, m: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a Value> {
        let v = m.get(key);
        if v.is_none() {
            self.err(&join(path, key), "missing required field");
        }
        v
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Parses and validates a config document, collecting every violation.
pub fn parse_config(text: &[u8]) -> Result<SweepConfig, Vec<ConfigError>> {
    let text = std::str::from_utf8(text).map_err(|e| {
        vec![ConfigError {
            path: String::new(),
            message: format!("config is not UTF-8: {e}"),
        }]
    })?;
    let root: Value = serde_json::from_str(text).map_err(|e| {
        vec![ConfigError {
            path: String::new(),
            message: format!("invalid JSON: {e}"),
        }]
    })?;
    let mut w = Walker { errors: Vec::new() };
    let top = w
        .object(&root, "", &["schema_version", "model", "sweep", "measures", "wigner", "output", "runtime"])
        .ok_or_else(|| w.errors.clone())?;

    if let Some(v) = top.get("schema_version") {
        if v.as_str() != Some(SCHEMA_VERSION) {
            w.err("schema_version", format!("unsupported schema version {v}; expected \"{SCHEMA_VERSION}\""));
        }
    }

    let model = match top.get("model") {
        Some(v) => parse_model(&mut w, v),
        None => {
            w.err("model", "missing required field");
            None
        }
    };
    let axes = top.get("sweep").and_then(|v| parse_sweep(&mut w, v, model.as_ref()));
    let measures = match top.get("measures") {
        None => Vec::new(),
        Some(v) => parse_measures(&mut w, v, model.as_ref()),
    };
    let wigner = top.get("wigner").and_then(|v| parse_wigner(&mut w, v, model.as_ref()));
    let output = top.get("output").map(|v| parse_output(&mut w, v)).unwrap_or_default();
    let runtime = top.get("runtime").map(|v| parse_runtime(&mut w, v)).unwrap_or_default();

    if axes.is_some() && measures.is_empty() && top.get("measures").is_some() {
        w.err("measures", "a sweep needs at least one measure");
    }

    match (w.errors.is_empty(), model) {
        (true, Some(model)) => Ok(SweepConfig {
            model,
            axes,
            measures,
            wigner,
            output,
            runtime,
        }),
        _ => Err(w.errors),
    }
}

fn parse_model(w: &mut Walker, v: &Value) -> Option<ModelSpec> {
    let m = w.object(v, "model", &["type", "params"])?;
    let kind = w.required(m, "model", "type").and_then(|t| w.string(t, "model.type"))?;
    let mut params = Vec::new();
    if let Some(p) = m.get("params") {
        let Some(obj) = p.as_object() else {
            w.err("model.params", "expected an object");
            return None;
        };
        for (name, value) in obj {
            if let Some(x) = w.number(value, &format!("model.params.{name}")) {
                params.push((name.as_str(), x));
            }
        }
    }
    match ModelSpec::from_params(kind, params) {
        Ok(spec) => Some(spec),
        Err(errors) => {
            for e in errors {
                match e {
                    Error::InvalidParameter { name, reason } if name == "type" => w.err("model.type", reason),
                    Error::InvalidParameter { name, reason } => w.err(&format!("model.params.{name}"), reason),
                    other => w.err("model", other.to_string()),
                }
            }
            None
        }
    }
}

fn parse_axis(w: &mut Walker, v: &Value, path: &str, model: Option<&ModelSpec>) -> Option<Axis> {
    let m = w.object(v, path, &["param", "min", "max", "count"])?;
    let param = w.required(m, path, "param").and_then(|p| w.string(p, &join(path, "param")));
    let min = w.required(m, path, "min").and_then(|x| w.number(x, &join(path, "min")));
    let max = w.required(m, path, "max").and_then(|x| w.number(x, &join(path, "max")));
    let count = w.required(m, path, "count").and_then(|x| w.count(x, &join(path, "count"), 2));
    let (param, min, max, count) = (param?, min?, max?, count?);
    if min > max {
        w.err(&join(path, "max"), format!("max ({max}) is below min ({min})"));
        return None;
    }
    let axis = Axis {
        param: param.to_string(),
        min,
        max,
        count,
    };
    let model = model?;
    if !model.param_names().contains(&param) {
        w.err(
            &join(path, "param"),
            format!("`{param}` is not a parameter of `{}` (expected one of {})", model.kind(), model.param_names().join(", ")),
        );
        return None;
    }
    // every grid value must give a valid model; the endpoints decide the
    // sign constraints, integrality needs every point
    let mut bad = None;
    for x in axis.values() {
        let problem = match model.with_param(param, x) {
            Err(e) => Some(e),
            Ok(spec) => spec.validate().into_iter().next(),
        };
        if let Some(e) = problem {
            bad = Some((x, e));
            break;
        }
    }
    if let Some((x, e)) = bad {
        w.err(path, format!("value {x} gives an invalid model: {e}"));
        return None;
    }
    Some(axis)
}

fn parse_sweep(w: &mut Walker, v: &Value, model: Option<&ModelSpec>) -> Option<(Axis, Axis)> {
    let m = w.object(v, "sweep", &["axis1", "axis2"])?;
    let a1 = w.required(m, "sweep", "axis1").and_then(|a| parse_axis(w, a, "sweep.axis1", model));
    let a2 = w.required(m, "sweep", "axis2").and_then(|a| parse_axis(w, a, "sweep.axis2", model));
    let (a1, a2) = (a1?, a2?);
    if a1.param == a2.param {
        w.err("sweep.axis2.param", format!("both axes sweep `{}`", a1.param));
        return None;
    }
    Some((a1, a2))
}

fn parse_class(w: &mut Walker, m: &Map<String, Value>, path: &str) -> Option<Option<LimitCycleClass>> {
    let Some(v) = m.get("class") else {
        if m.contains_key("pairs") {
            w.err(&join(path, "pairs"), "pairs need class partially_coherent_product");
            return None;
        }
        return Some(None);
    };
    let name = w.string(v, &join(path, "class"))?;
    let class = match name {
        "diagonal_correlated" => LimitCycleClass::DiagonalCorrelated,
        "diagonal_product" => LimitCycleClass::DiagonalProduct,
        "marginal_product" => LimitCycleClass::MarginalProduct,
        "partially_coherent_product" => {
            let pairs = match m.get("pairs") {
                None => vec![(1, 2), (1, 2)],
                Some(p) => parse_pairs(w, p, &join(path, "pairs"))?,
            };
            LimitCycleClass::PartiallyCoherentProduct { pairs }
        }
        other => {
            w.err(
                &join(path, "class"),
                format!(
                    "unknown class `{other}` (expected diagonal_correlated, diagonal_product, marginal_product or partially_coherent_product)"
                ),
            );
            return None;
        }
    };
    if m.contains_key("pairs") && !matches!(class, LimitCycleClass::PartiallyCoherentProduct { .. }) {
        w.err(&join(path, "pairs"), "pairs need class partially_coherent_product");
        return None;
    }
    Some(Some(class))
}

fn parse_pairs(w: &mut Walker, v: &Value, path: &str) -> Option<Vec<(usize, usize)>> {
    let parsed: Option<Vec<(usize, usize)>> = v.as_array().and_then(|items| {
        items
            .iter()
            .map(|p| match p.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => Some((a.as_u64()? as usize, b.as_u64()? as usize)),
                _ => None,
            })
            .collect()
    });
    match parsed {
        Some(pairs) if pairs.len() == 2 && pairs.iter().all(|&(a, b)| a < 3 && b < 3 && a != b) => Some(pairs),
        _ => {
            w.err(path, "expected two pairs of distinct qutrit levels, e.g. [[1, 2], [1, 2]]");
            None
        }
    }
}

fn parse_measures(w: &mut Walker, v: &Value, model: Option<&ModelSpec>) -> Vec<MeasureSpec> {
    let Some(items) = v.as_array() else {
        w.err("measures", "expected an array");
        return Vec::new();
    };
    let mut out: Vec<MeasureSpec> = Vec::new();
    for (k, item) in items.iter().enumerate() {
        let path = format!("measures[{k}]");
        let Some(id) = item.get("id").and_then(Value::as_str) else {
            w.err(&join(&path, "id"), "missing or non-string measure id");
            continue;
        };
        let Some(id) = MeasureId::from_name(id) else {
            let known: Vec<&str> = MeasureId::ALL.iter().map(|m| m.name()).collect();
            w.err(&join(&path, "id"), format!("unknown measure `{id}` (expected one of {})", known.join(", ")));
            continue;
        };
        let mut allowed = vec!["id", "label"];
        if id.takes_class() {
            allowed.extend(["class", "pairs"]);
        }
        if id.takes_site() {
            allowed.push("site");
        }
        if id == MeasureId::OmegaRCertificate {
            allowed.push("samples");
        }
        if id == MeasureId::SPhase {
            allowed.extend(["n_theta", "n_phi"]);
        }
        let Some(m) = w.object(item, &path, &allowed) else { continue };
        let mut spec = MeasureSpec::new(id);
        match parse_class(w, m, &path) {
            Some(class) => spec.class = class,
            None => continue,
        }
        let mut uint = |key: &str, min: u64| m.get(key).map(|x| w.count(x, &join(&path, key), min));
        let site = uint("site", 0);
        let samples = uint("samples", 1);
        let n_theta = uint("n_theta", 2);
        let n_phi = uint("n_phi", 1);
        if [site, samples, n_theta, n_phi].iter().any(|x| matches!(x, Some(None))) {
            continue;
        }
        spec.site = site.flatten();
        spec.samples = samples.flatten();
        spec.n_theta = n_theta.flatten();
        spec.n_phi = n_phi.flatten();
        if let Some(label) = m.get("label") {
            match w.string(label, &join(&path, "label")) {
                Some(s) if !s.is_empty() && !s.contains([',', '"', '\n']) => spec.label = Some(s.to_string()),
                Some(_) => {
                    w.err(&join(&path, "label"), "label must be nonempty without commas, quotes or newlines");
                    continue;
                }
                None => continue,
            }
        }
        if let Some(model) = model {
            if let Err(reason) = applicable(&spec, model) {
                w.err(&path, reason);
                continue;
            }
        }
        if out.iter().any(|o| o.column() == spec.column()) {
            w.err(&path, format!("duplicate column `{}`; set a distinct label", spec.column()));
            continue;
        }
        out.push(spec);
    }
    out
}

/// Checks that a measure can be evaluated on the model's steady states.
pub fn applicable(spec: &MeasureSpec, model: &ModelSpec) -> Result<(), String> {
    let dims = model.dims();
    let bosons = model.boson_sites();
    let bipartite = || {
        if dims.len() == 2 {
            Ok(())
        } else {
            Err(format!("`{}` needs a two-subsystem model, `{}` has {}", spec.id.name(), model.kind(), dims.len()))
        }
    };
    match spec.id {
        MeasureId::OmegaR | MeasureId::OmegaRCertificate => match spec.class_or_default() {
            LimitCycleClass::DiagonalCorrelated => Ok(()),
            LimitCycleClass::DiagonalProduct | LimitCycleClass::MarginalProduct => bipartite(),
            LimitCycleClass::PartiallyCoherentProduct { .. } => {
                if dims == [3, 3] {
                    Ok(())
                } else {
                    Err(format!("partially coherent class needs two spin-1 atoms, `{}` has dims {dims:?}", model.kind()))
                }
            }
        },
        MeasureId::OmegaD => match spec.class_or_default() {
            LimitCycleClass::DiagonalCorrelated => Ok(()),
            other => Err(format!("omega_d supports only the diagonal_correlated class, got {}", other.label())),
        },
        MeasureId::SCoh | MeasureId::L1Coherence => Ok(()),
        MeasureId::MutualInformation | MeasureId::ClassicalMutualInformation => bipartite(),
        MeasureId::C1 | MeasureId::MeanOccupation => match default_site(spec, model) {
            Some(site) if bosons.contains(&site) => Ok(()),
            Some(site) => Err(format!("site {site} of `{}` is not an oscillator", model.kind())),
            None => Err(format!("`{}` has no oscillator", model.kind())),
        },
        MeasureId::SPhase => match default_site(spec, model) {
            Some(site) if site < dims.len() && !bosons.contains(&site) => Ok(()),
            Some(site) => Err(format!("site {site} of `{}` is not a spin-1 atom", model.kind())),
            None => Err(format!("`{}` has no spin-1 atom", model.kind())),
        },
    }
}

/// Explicit site, else the first oscillator (C1, occupation) or first spin.
pub fn default_site(spec: &MeasureSpec, model: &ModelSpec) -> Option<usize> {
    if spec.site.is_some() {
        return spec.site;
    }
    let bosons = model.boson_sites();
    match spec.id {
        MeasureId::SPhase => (0..model.dims().len()).find(|k| !bosons.contains(k)),
        _ => bosons.first().copied(),
    }
}

fn parse_range(w: &mut Walker, v: &Value, path: &str) -> Option<Range> {
    let m = w.object(v, path, &["min", "max", "count"])?;
    let min = w.required(m, path, "min").and_then(|x| w.number(x, &join(path, "min")));
    let max = w.required(m, path, "max").and_then(|x| w.number(x, &join(path, "max")));
    let count = w.required(m, path, "count").and_then(|x| w.count(x, &join(path, "count"), 1));
    let (min, max, count) = (min?, max?, count?);
    if min > max {
        w.err(&join(path, "max"), format!("max ({max}) is below min ({min})"));
        return None;
    }
    Some(Range { min, max, count })
}

fn parse_wigner(w: &mut Walker, v: &Value, model: Option<&ModelSpec>) -> Option<WignerSpec> {
    let m = w.object(v, "wigner", &["site", "x", "p"])?;
    let site = match m.get("site") {
        None => None,
        Some(s) => Some(w.count(s, "wigner.site", 0)?),
    };
    let x = w.required(m, "wigner", "x").and_then(|r| parse_range(w, r, "wigner.x"));
    let p = w.required(m, "wigner", "p").and_then(|r| parse_range(w, r, "wigner.p"));
    let spec = WignerSpec { site, x: x?, p: p? };
    if let Some(model) = model {
        let bosons = model.boson_sites();
        let ok = match site {
            Some(s) => bosons.contains(&s),
            None => !bosons.is_empty(),
        };
        if !ok {
            w.err("wigner.site", format!("`{}` has no oscillator at this site", model.kind()));
            return None;
        }
    }
    Some(spec)
}

fn parse_output(w: &mut Walker, v: &Value) -> OutputSpec {
    let mut out = OutputSpec::default();
    let Some(m) = w.object(v, "output", &["path", "format"]) else { return out };
    if let Some(p) = m.get("path") {
        if let Some(s) = w.string(p, "output.path") {
            out.path = Some(PathBuf::from(s));
        }
    }
    if let Some(f) = m.get("format") {
        if let Some(s) = w.string(f, "output.format") {
            match OutputFormat::parse(s) {
                Some(format) => out.format = format,
                None => w.err("output.format", format!("expected csv or json, got `{s}`")),
            }
        }
    }
    out
}

fn parse_runtime(w: &mut Walker, v: &Value) -> Runtime {
    let mut rt = Runtime::default();
    let Some(m) = w.object(v, "runtime", &["workers", "convergence_check", "seed"]) else { return rt };
    if let Some(n) = m.get("workers").and_then(|x| w.count(x, "runtime.workers", 1)) {
        rt.workers = n;
    }
    if let Some(b) = m.get("convergence_check") {
        match b.as_bool() {
            Some(b) => rt.convergence_check = b,
            None => w.err("runtime.convergence_check", format!("expected a boolean, got {b}")),
        }
    }
    if let Some(s) = m.get("seed") {
        match s.as_u64() {
            Some(s) => rt.seed = s,
            None => w.err("runtime.seed", format!("expected an unsigned integer, got {s}")),
        }
    }
    rt
}
