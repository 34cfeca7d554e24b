use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::Value;

use super::HarnessError;
use crate::algebra::{FiveVectorField, Flavor, Frame, ParametrizedCurve, FIFTH};
use crate::connection::{rescale_constants, rescale_field};
use crate::error::Error;
use crate::field::{parse_expr, ScalarField, COORDS, DEFAULT_PROBE_SEED};
use crate::metric::{Constants, MetricField, Mode};

/// Scenario problem located by a JSON pointer.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

impl std::error::Error for ScenarioError {}

fn fail(pointer: impl Into<String>, message: impl fmt::Display) -> ScenarioError {
    ScenarioError { pointer: pointer.into(), message: message.to_string() }
}

/// How a frame was specified, kept so it can be rebuilt under new constants.
#[derive(Debug, Clone)]
pub enum FrameSpec {
    Regular(Flavor),
    Coordinate([f64; 4]),
    Matrix(Flavor, Box<[[ScalarField; 5]; 5]>),
}

impl FrameSpec {
    pub fn build(&self, c: &Constants) -> Result<Frame, Error> {
        match self {
            FrameSpec::Regular(flavor) => Frame::regular(*flavor, c),
            FrameSpec::Coordinate(offsets) => Ok(Frame::coordinate(*offsets, c)),
            FrameSpec::Matrix(flavor, l) => Frame::from_matrix((**l).clone(), *flavor, c),
        }
    }
}

/// A connection coefficient shifted for fault injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub index: (usize, usize, usize),
    pub delta: f64,
}

/// A suite selection with optional per-check tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub suite: String,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub metric: MetricField,
    pub constants: Constants,
    pub frames: BTreeMap<String, (FrameSpec, Frame)>,
    pub fields: BTreeMap<String, FiveVectorField>,
    pub curves: BTreeMap<String, ParametrizedCurve>,
    pub checks: Vec<CheckSpec>,
    pub probe_seed: u64,
    pub perturbations: Vec<Perturbation>,
}

pub fn load_scenario(path: &Path) -> Result<Scenario, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(parse_scenario(&text)?)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let root: Value = serde_json::from_str(text).map_err(|e| fail("", format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| fail("", "scenario must be a JSON object"))?;
    let metric = parse_metric(obj.get("metric").ok_or_else(|| fail("/metric", "missing metric"))?)?;
    let constants = parse_constants(obj.get("constants"), obj.get("mode"))?;
    let mut frames = BTreeMap::new();
    if let Some(v) = obj.get("frames") {
        for (name, spec) in object(v, "/frames")? {
            let ptr = format!("/frames/{}", escape(name));
            let spec = parse_frame(spec, &ptr)?;
            let frame = spec.build(&constants).map_err(|e| fail(&ptr, e))?;
            frames.insert(name.clone(), (spec, frame));
        }
    }
    let mut fields = BTreeMap::new();
    if let Some(v) = obj.get("fields") {
        for (name, spec) in object(v, "/fields")? {
            fields.insert(name.clone(), parse_field(spec, &format!("/fields/{}", escape(name)))?);
        }
    }
    let mut curves = BTreeMap::new();
    if let Some(v) = obj.get("curves") {
        for (name, spec) in object(v, "/curves")? {
            curves.insert(name.clone(), parse_curve(spec, &format!("/curves/{}", escape(name)))?);
        }
    }
    let checks = match obj.get("checks") {
        Some(v) => parse_checks(v)?,
        None => Vec::new(),
    };
    let probe_seed = match obj.get("probe_seed") {
        Some(v) => v.as_u64().ok_or_else(|| fail("/probe_seed", "expected a non-negative integer"))?,
        None => DEFAULT_PROBE_SEED,
    };
    let perturbations = match obj.get("perturb_connection") {
        Some(v) => parse_perturbations(v)?,
        None => Vec::new(),
    };
    Ok(Scenario { metric, constants, frames, fields, curves, checks, probe_seed, perturbations })
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a serde_json::Map<String, Value>, ScenarioError> {
    v.as_object().ok_or_else(|| fail(ptr, "expected an object"))
}

fn array<'a>(v: &'a Value, ptr: &str, len: usize) -> Result<&'a Vec<Value>, ScenarioError> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        _ => Err(fail(ptr, format!("expected an array of {len} entries"))),
    }
}

fn number(v: &Value, ptr: &str) -> Result<f64, ScenarioError> {
    v.as_f64().ok_or_else(|| fail(ptr, "expected a number"))
}

fn source(v: &Value, ptr: &str) -> Result<String, ScenarioError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(fail(ptr, "expected an expression string or number")),
    }
}

fn scalar(v: &Value, ptr: &str) -> Result<ScalarField, ScenarioError> {
    let src = source(v, ptr)?;
    parse_expr(&src, &COORDS).map(ScalarField::from_expr).map_err(|e| fail(ptr, e))
}

fn parse_metric(v: &Value) -> Result<MetricField, ScenarioError> {
    if let Some(name) = v.as_str() {
        return MetricField::preset(name).ok_or_else(|| {
            fail("/metric", format!("unknown preset '{name}' (known: {})", MetricField::PRESETS.join(", ")))
        });
    }
    let rows = array(v, "/metric", 4)?;
    let mut g: [[ScalarField; 4]; 4] = Default::default();
    for (a, row) in rows.iter().enumerate() {
        let ptr = format!("/metric/{a}");
        for (b, entry) in array(row, &ptr, 4)?.iter().enumerate() {
            g[a][b] = scalar(entry, &format!("{ptr}/{b}"))?;
        }
    }
    MetricField::new(g).map_err(|e| fail("/metric", e))
}

fn parse_constants(v: Option<&Value>, mode: Option<&Value>) -> Result<Constants, ScenarioError> {
    let mut c = Constants::default();
    if let Some(v) = v {
        let obj = object(v, "/constants")?;
        for (key, slot) in [("xi", &mut c.xi), ("varsigma", &mut c.varsigma), ("k", &mut c.k)] {
            if let Some(x) = obj.get(key) {
                *slot = number(x, &format!("/constants/{key}"))?;
            }
        }
    }
    if let Some(m) = mode {
        c.mode = match m.as_str() {
            Some("dimensionless") => Mode::Dimensionless,
            Some("dimensional") => Mode::Dimensional,
            _ => return Err(fail("/mode", "expected \"dimensionless\" or \"dimensional\"")),
        };
    }
    c.validate().map_err(|e| {
        let key = match e {
            Error::InvalidConstants(msg) if msg.starts_with("xi") => "xi",
            Error::InvalidConstants(msg) if msg.starts_with("k ") => "k",
            _ => "varsigma",
        };
        fail(format!("/constants/{key}"), e)
    })?;
    Ok(c)
}

fn parse_frame(v: &Value, ptr: &str) -> Result<FrameSpec, ScenarioError> {
    let obj = object(v, ptr)?;
    let name = obj.get("flavor").and_then(Value::as_str).ok_or_else(|| fail(format!("{ptr}/flavor"), "missing flavor"))?;
    let flavor = Flavor::from_name(name).ok_or_else(|| fail(format!("{ptr}/flavor"), format!("unknown flavor '{name}'")))?;
    if let Some(m) = obj.get("matrix") {
        let mptr = format!("{ptr}/matrix");
        let mut l: [[ScalarField; 5]; 5] = Default::default();
        for (r, row) in array(m, &mptr, 5)?.iter().enumerate() {
            for (col, entry) in array(row, &format!("{mptr}/{r}"), 5)?.iter().enumerate() {
                l[r][col] = scalar(entry, &format!("{mptr}/{r}/{col}"))?;
            }
        }
        return Ok(FrameSpec::Matrix(flavor, Box::new(l)));
    }
    match flavor {
        f if f.is_regular() => Ok(FrameSpec::Regular(f)),
        Flavor::Coordinate => {
            let mut offsets = [0.0; 4];
            if let Some(o) = obj.get("offsets") {
                for (a, x) in array(o, &format!("{ptr}/offsets"), 4)?.iter().enumerate() {
                    offsets[a] = number(x, &format!("{ptr}/offsets/{a}"))?;
                }
            }
            Ok(FrameSpec::Coordinate(offsets))
        }
        _ => Err(fail(format!("{ptr}/matrix"), format!("{name} frames need a matrix"))),
    }
}

fn parse_field(v: &Value, ptr: &str) -> Result<FiveVectorField, ScenarioError> {
    let obj = object(v, ptr)?;
    let u = obj.get("u").ok_or_else(|| fail(format!("{ptr}/u"), "missing u"))?;
    let mut comps: [ScalarField; 5] = Default::default();
    for (a, e) in array(u, &format!("{ptr}/u"), 4)?.iter().enumerate() {
        comps[a] = scalar(e, &format!("{ptr}/u/{a}"))?;
    }
    if let Some(e) = obj.get("u5") {
        comps[FIFTH] = scalar(e, &format!("{ptr}/u5"))?;
    }
    Ok(FiveVectorField(comps))
}

fn parse_curve(v: &Value, ptr: &str) -> Result<ParametrizedCurve, ScenarioError> {
    let (path, pptr, lambda0) = match v {
        Value::Object(obj) => {
            let lambda0 = match obj.get("lambda0") {
                Some(x) => number(x, &format!("{ptr}/lambda0"))?,
                None => 0.0,
            };
            (obj.get("path").ok_or_else(|| fail(format!("{ptr}/path"), "missing path"))?, format!("{ptr}/path"), lambda0)
        }
        _ => (v, ptr.to_string(), 0.0),
    };
    let mut exprs = Vec::with_capacity(4);
    for (a, e) in array(path, &pptr, 4)?.iter().enumerate() {
        let cptr = format!("{pptr}/{a}");
        exprs.push(parse_expr(&source(e, &cptr)?, &["t"]).map_err(|err| fail(&cptr, err))?);
    }
    Ok(ParametrizedCurve::from_exprs(exprs.try_into().expect("four entries"), lambda0))
}

fn parse_checks(v: &Value) -> Result<Vec<CheckSpec>, ScenarioError> {
    let items = v.as_array().ok_or_else(|| fail("/checks", "expected an array"))?;
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let ptr = format!("/checks/{i}");
        match item {
            Value::String(s) => out.push(CheckSpec { suite: s.clone(), tolerances: BTreeMap::new() }),
            Value::Object(obj) => {
                let suite = obj
                    .get("suite")
                    .and_then(Value::as_str)
                    .ok_or_else(|| fail(format!("{ptr}/suite"), "missing suite"))?
                    .to_string();
                let mut tolerances = BTreeMap::new();
                if let Some(t) = obj.get("tolerances") {
                    for (k, x) in object(t, &format!("{ptr}/tolerances"))? {
                        tolerances.insert(k.clone(), number(x, &format!("{ptr}/tolerances/{}", escape(k)))?);
                    }
                }
                out.push(CheckSpec { suite, tolerances });
            }
            _ => return Err(fail(ptr, "expected a suite name or object")),
        }
    }
    Ok(out)
}

fn parse_perturbations(v: &Value) -> Result<Vec<Perturbation>, ScenarioError> {
    let items = v.as_array().ok_or_else(|| fail("/perturb_connection", "expected an array"))?;
    let mut out = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let ptr = format!("/perturb_connection/{i}");
        let obj = object(item, &ptr)?;
        let idx = array(obj.get("index").unwrap_or(&Value::Null), &format!("{ptr}/index"), 3)?;
        let mut index = [0usize; 3];
        for (j, x) in idx.iter().enumerate() {
            index[j] = x
                .as_u64()
                .filter(|n| *n < 5)
                .ok_or_else(|| fail(format!("{ptr}/index/{j}"), "expected an index in 0..5"))? as usize;
        }
        let delta = number(obj.get("delta").unwrap_or(&Value::Null), &format!("{ptr}/delta"))?;
        out.push(Perturbation { index: (index[0], index[1], index[2]), delta });
    }
    Ok(out)
}

/// Same physical content with the interval unit multiplied by `k`.
pub fn rescale_interval_unit(s: &Scenario, k: f64) -> Result<Scenario, Error> {
    if s.constants.mode != Mode::Dimensional {
        return Err(Error::InvalidConstants("rescaling requires dimensional mode"));
    }
    let constants = rescale_constants(&s.constants, k)?;
    let mut frames = BTreeMap::new();
    for (name, (spec, _)) in &s.frames {
        let spec = match spec {
            FrameSpec::Regular(f) => FrameSpec::Regular(*f),
            FrameSpec::Coordinate(o) => FrameSpec::Coordinate(o.map(|x| x / k)),
            FrameSpec::Matrix(flavor, l) => FrameSpec::Matrix(
                *flavor,
                Box::new(std::array::from_fn(|r| {
                    std::array::from_fn(|col| {
                        let f = l[r][col].rescale_args(k);
                        if r == FIFTH {
                            f.scale(k)
                        } else {
                            f
                        }
                    })
                })),
            ),
        };
        let frame = spec.build(&constants)?;
        frames.insert(name.clone(), (spec, frame));
    }
    let mut fields = BTreeMap::new();
    for (name, u) in &s.fields {
        fields.insert(name.clone(), rescale_field(u, k)?);
    }
    Ok(Scenario {
        metric: s.metric.rescale_args(k),
        constants,
        frames,
        fields,
        curves: s.curves.iter().map(|(n, c)| (n.clone(), c.rescaled(k))).collect(),
        checks: s.checks.clone(),
        probe_seed: s.probe_seed,
        perturbations: s.perturbations.clone(),
    })
}
