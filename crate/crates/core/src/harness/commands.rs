use serde::Serialize;

use super::scenario::Scenario;
use super::HarnessError;
use crate::algebra::{FiveVector, Flavor, Frame};
use crate::connection::{build_connection, transport};
use crate::field::{parse_expr, probe_points, Point, ScalarField, COORDS};
use crate::flow::{phi_pull, psi_transform, FlowSettings};
use crate::metric::{g5, h};

const FLOW_PROBES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub curve: String,
    pub frame: String,
    pub t0: f64,
    pub t1: f64,
    pub initial: [f64; 5],
    #[serde(rename = "final")]
    pub end: [f64; 5],
    /// `g(v, v)` at the end minus at the start.
    pub delta_g: f64,
    /// `h(v, v)` at the end minus at the start.
    pub delta_h: f64,
    pub lambda_drift: f64,
}

/// Transports `vector`, given in the named frame or the active regular frame.
pub fn cmd_transport(
    s: &Scenario,
    curve: &str,
    vector: [f64; 5],
    t0: f64,
    t1: f64,
    frame: Option<&str>,
    settings: &FlowSettings,
) -> Result<TransportReport, HarnessError> {
    let path = s.curves.get(curve).ok_or_else(|| HarnessError::UnknownCurve(curve.to_string()))?;
    let (frame_name, frame) = match frame {
        Some(name) => {
            let (_, f) = s.frames.get(name).ok_or_else(|| HarnessError::UnknownFrame(name.to_string()))?;
            (name.to_string(), f.clone())
        }
        None => (Flavor::RegularActive.name().to_string(), Frame::regular(Flavor::RegularActive, &s.constants)?),
    };
    let c = &s.constants;
    let mut g = build_connection(&s.metric, c, &frame)?;
    for p in &s.perturbations {
        g = g.perturbed(p.index, p.delta);
    }
    let v0 = FiveVector(vector);
    let v1 = transport(&v0, path, t0, t1, &g, settings)?;
    let (x0, x1) = (path.point(t0)?, path.point(t1)?);
    let (c0, c1) = (frame.to_canonical(&x0, &v0)?, frame.to_canonical(&x1, &v1)?);
    Ok(TransportReport {
        curve: curve.to_string(),
        frame: frame_name,
        t0,
        t1,
        initial: v0.0,
        end: v1.0,
        delta_g: g5(&c1, &c1, &s.metric, &x1)? - g5(&c0, &c0, &s.metric, &x0)?,
        delta_h: h(&c1, &c1, &s.metric, c, &x1)? - h(&c0, &c0, &s.metric, c, &x0)?,
        lambda_drift: c1.lambda(c) - c0.lambda(c),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowRow {
    pub point: [f64; 4],
    pub psi: f64,
    pub phi: f64,
    /// `Ψ_t{1}`.
    pub weight: f64,
    /// `|Ψ_t{f} − Ψ_t{1}·Φ_t{f}|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTable {
    pub field: String,
    pub function: String,
    pub t: f64,
    pub rows: Vec<FlowRow>,
    pub max_residual: f64,
}

/// Tabulates the weighted and plain finite images of `function` at probe points.
pub fn cmd_flow(
    s: &Scenario,
    field: &str,
    function: &str,
    t: f64,
    settings: &FlowSettings,
) -> Result<FlowTable, HarnessError> {
    let u = s.fields.get(field).ok_or_else(|| HarnessError::UnknownField(field.to_string()))?;
    let f = parse_expr(function, &COORDS)
        .map(ScalarField::from_expr)
        .map_err(|e| HarnessError::Library(e.into()))?;
    let psi = psi_transform(&f, u, t, settings);
    let phi = phi_pull(&f, u, t, settings);
    let one = psi_transform(ScalarField::one(), u, t, settings);
    let mut rows = Vec::with_capacity(FLOW_PROBES);
    for p in probe_points(s.probe_seed, FLOW_PROBES) {
        rows.push(flow_row(&p, &psi, &phi, &one)?);
    }
    let max_residual = rows.iter().fold(0.0f64, |m, r| m.max(r.residual));
    Ok(FlowTable { field: field.to_string(), function: function.to_string(), t, rows, max_residual })
}

fn flow_row(
    p: &Point,
    psi: &crate::field::NumericField,
    phi: &crate::field::NumericField,
    one: &crate::field::NumericField,
) -> Result<FlowRow, HarnessError> {
    let (a, b, w) = (psi.eval(p)?, phi.eval(p)?, one.eval(p)?);
    Ok(FlowRow { point: p.0, psi: a, phi: b, weight: w, residual: (a - w * b).abs() })
}
