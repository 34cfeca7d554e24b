use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{CheckKind, CheckRecord, Report, Settings};
use super::scenario::{rescale_interval_unit, FrameSpec, Scenario};
use super::HarnessError;
use crate::algebra::{
    check_operator, commutator, default_axiom_probes, is_coordinate_basis, FiveVector, FiveVectorField, Flavor,
    Frame, ParametrizedCurve, FIFTH,
};
use crate::connection::{
    associated_four_basis, bivector_inner, build_connection, christoffel, covariant_derivative, nabla_h,
    nabla_lambda, transport, transport_four, unit_n, wedge, Connection, FourBasis, HContext,
};
use crate::error::{Error, Result};
use crate::field::{probe_points, Point, ScalarField, PROBE_COUNT};
use crate::flow::{
    flow_jet, lie_fivevector, lie_rank_zero, lie_scalar, lie_tensor, phi_pull, psi_transform, FiveTensorField,
    FlowField, FlowSettings, RankZeroField,
};
use crate::forms::{
    contract, covariant_derivative_form, theta_g, theta_g_field, theta_h, theta_h_field, theta_h_inverse,
    transport_form, wedge_forms, x_form, FiveForm, FiveFormField, PFormField,
};
use crate::metric::{curve_interval, g5, g_matrix, h, Constants, MetricField};

/// Registered suite names.
pub const SUITES: [&str; 6] = ["algebra", "lie-flow", "connection", "forms", "bivector", "rescale"];

const RESCALE_FACTORS: [f64; 3] = [0.5, 2.0, 3.0];

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Suites to run; the scenario's `checks` list is used when empty.
    pub suites: Vec<String>,
    /// Replaces every bound tolerance.
    pub tolerance: Option<f64>,
    /// Replaces the scenario's probe seed.
    pub seed: Option<u64>,
    pub settings: FlowSettings,
}

/// Runs the selected identity suites and collects one record per check.
pub fn run_suite(s: &Scenario, opts: &RunOptions) -> std::result::Result<Report, HarnessError> {
    let start = Instant::now();
    let requested: Vec<String> = if opts.suites.is_empty() {
        s.checks.iter().map(|c| c.suite.clone()).collect()
    } else {
        opts.suites.clone()
    };
    if requested.is_empty() {
        return Err(HarnessError::NoSuites);
    }
    let mut names: Vec<&'static str> = Vec::new();
    for n in &requested {
        let known = SUITES.iter().find(|k| **k == n).ok_or_else(|| HarnessError::UnknownSuite(n.clone()))?;
        if !names.contains(known) {
            names.push(known);
        }
    }
    let seed = opts.seed.unwrap_or(s.probe_seed);
    let mut checks = Vec::new();
    for name in &names {
        let mut tolerances = BTreeMap::new();
        for spec in s.checks.iter().filter(|c| c.suite == *name) {
            tolerances.extend(spec.tolerances.iter().map(|(k, v)| (k.clone(), *v)));
        }
        let dimensional = !matches!(*name, "algebra" | "lie-flow");
        let ctx = Ctx::new(s, seed, opts.settings, dimensional)?;
        let mut runner = Runner { suite: name, tolerances, global: opts.tolerance, records: Vec::new() };
        match *name {
            "algebra" => algebra_suite(&ctx, &mut runner),
            "lie-flow" => lie_flow_suite(&ctx, &mut runner),
            "connection" => connection_suite(&ctx, &mut runner),
            "forms" => forms_suite(&ctx, &mut runner),
            "bivector" => bivector_suite(&ctx, &mut runner),
            _ => rescale_suite(&ctx, &mut runner),
        }
        checks.extend(runner.records);
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Report {
        checks,
        settings: Settings {
            suites: names.iter().map(|n| n.to_string()).collect(),
            probe_seed: seed,
            step_count: opts.settings.step_count,
            tolerance_override: opts.tolerance,
        },
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Fields used when a scenario declares none.
pub(crate) fn default_fields() -> Vec<(String, FiveVectorField)> {
    [
        ("mixed", ["1", "0.3*x1", "0.2*sin(x0)", "0.1"], "0.5*x0 + 0.2*x2"),
        ("rotation", ["1", "-0.4*x2", "0.4*x1", "0"], "0.3"),
        ("curved", ["1 + 0.2*x1^2", "0.1*x0", "0", "0.3*x3"], "0.2*x1*x3"),
    ]
    .into_iter()
    .map(|(n, u, u5)| (n.to_string(), FiveVectorField::parse(u, u5).expect("default field")))
    .collect()
}

/// Curves used when a scenario declares none.
pub(crate) fn default_curves() -> Vec<(String, ParametrizedCurve)> {
    [
        ("line", ["t", "0.3*t", "0", "0"], 0.0),
        ("wave", ["t", "0.2*sin(t)", "0.1*t^2", "0"], 0.5),
        ("spiral", ["t", "0.3*cos(t)", "0.3*sin(t)", "0.1*t"], -0.2),
    ]
    .into_iter()
    .map(|(n, p, l)| (n.to_string(), ParametrizedCurve::parse(p, l).expect("default curve")))
    .collect()
}

struct Ctx {
    scenario: Scenario,
    c: Constants,
    seed: u64,
    probes: Vec<Point>,
    settings: FlowSettings,
}

impl Ctx {
    fn new(s: &Scenario, seed: u64, settings: FlowSettings, dimensional: bool) -> Result<Ctx> {
        let mut scenario = s.clone();
        if dimensional {
            scenario.constants = scenario.constants.dimensional();
            for (spec, frame) in scenario.frames.values_mut() {
                *frame = spec.build(&scenario.constants)?;
            }
        }
        if scenario.fields.is_empty() {
            scenario.fields.extend(default_fields());
        }
        if scenario.curves.is_empty() {
            scenario.curves.extend(default_curves());
        }
        let c = scenario.constants;
        Ok(Ctx { scenario, c, seed, probes: probe_points(seed, PROBE_COUNT), settings })
    }

    fn metric(&self) -> &MetricField {
        &self.scenario.metric
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn fields(&self) -> Vec<(&String, &FiveVectorField)> {
        self.scenario.fields.iter().collect()
    }

    fn curves(&self) -> Vec<(&String, &ParametrizedCurve)> {
        self.scenario.curves.iter().collect()
    }

    /// The connection in `frame`, with the scenario's fault injections applied.
    fn connection(&self, frame: &Frame) -> Result<Connection> {
        let mut g = build_connection(self.metric(), &self.c, frame)?;
        for p in &self.scenario.perturbations {
            g = g.perturbed(p.index, p.delta);
        }
        Ok(g)
    }

    fn regular(&self, flavor: Flavor) -> Result<(String, Frame)> {
        Ok((flavor.name().to_string(), Frame::regular(flavor, &self.c)?))
    }

    /// Regular frames plus every standard scenario frame and a generated standard frame.
    fn standard_frames(&self) -> Result<Vec<(String, Frame)>> {
        let mut out = vec![
            self.regular(Flavor::RegularPassive)?,
            self.regular(Flavor::RegularActive)?,
            self.regular(Flavor::RegularNormalized)?,
        ];
        let mut rng = self.rng(0x51);
        let offsets = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        out.push(("coordinate".into(), Frame::coordinate(offsets, &self.c)));
        let m: [[ScalarField; 5]; 5] = std::array::from_fn(|r| {
            std::array::from_fn(|col| {
                let v = match (r, col) {
                    (r, FIFTH) if r < FIFTH => 0.0,
                    (FIFTH, FIFTH) => 1.0 + rng.gen_range(0.0..0.5),
                    (r, col) if r == col => 1.0 + rng.gen_range(-0.2..0.2),
                    _ => rng.gen_range(-0.2..0.2),
                };
                ScalarField::constant(v)
            })
        });
        out.push(("generated-standard".into(), Frame::canonical().transformed(&m, Flavor::Standard, &self.c)?));
        for (name, (_, frame)) in &self.scenario.frames {
            if frame.is_standard() {
                out.push((name.clone(), frame.clone()));
            }
        }
        Ok(out)
    }

    fn random_vector(rng: &mut ChaCha8Rng) -> FiveVector {
        FiveVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }
}

/// Components of a canonical field in a regular frame built on the coordinate tetrad.
fn in_regular(u: &FiveVectorField, frame: &Frame, c: &Constants) -> FiveVectorField {
    let scale = frame.flavor().e5_scale(c).unwrap_or(1.0);
    let mut v = u.clone();
    v.0[FIFTH] = u.0[FIFTH].scale(1.0 / scale);
    v
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn rel_vec(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn pt(p: &Point) -> Value {
    json!(p.0)
}

/// Largest error seen so far and the inputs that produced it.
#[derive(Debug, Default)]
struct Worst {
    value: f64,
    witness: Option<Value>,
}

impl Worst {
    fn see(&mut self, err: f64, witness: impl FnOnce() -> Value) {
        if err.is_nan() || err > self.value || self.witness.is_none() && err > 0.0 {
            self.value = if err.is_nan() { f64::INFINITY } else { err };
            self.witness = Some(witness());
        }
    }
}

struct Runner {
    suite: &'static str,
    tolerances: BTreeMap<String, f64>,
    global: Option<f64>,
    records: Vec<CheckRecord>,
}

impl Runner {
    fn tolerance(&self, check: &str, kind: CheckKind, default: f64) -> f64 {
        if let (CheckKind::Bound, Some(t)) = (kind, self.global) {
            return t;
        }
        let full = format!("{}/{check}", self.suite);
        self.tolerances.get(check).or_else(|| self.tolerances.get(&full)).copied().unwrap_or(default)
    }

    fn run(&mut self, check: &str, kind: CheckKind, default: f64, f: impl FnOnce() -> Result<Worst>) {
        let tol = self.tolerance(check, kind, default);
        let name = format!("{}/{check}", self.suite);
        let record = match f() {
            Ok(w) => CheckRecord::new(name, kind, w.value, tol, w.witness),
            Err(e) => CheckRecord::new(name, kind, f64::NAN, tol, Some(json!({ "error": e.to_string() }))),
        };
        self.records.push(record);
    }

    fn bound(&mut self, check: &str, default: f64, f: impl FnOnce() -> Result<Worst>) {
        self.run(check, CheckKind::Bound, default, f)
    }
}

fn algebra_suite(ctx: &Ctx, r: &mut Runner) {
    let fields = ctx.fields();
    let fns = default_axiom_probes();
    let probes = &ctx.probes;
    r.bound("axioms", 0.0, || {
        let mut ops: Vec<(String, FiveVectorField)> = fields.iter().map(|(n, u)| (n.to_string(), (*u).clone())).collect();
        for (i, (a, u)) in fields.iter().enumerate() {
            for (b, v) in &fields[i + 1..] {
                ops.push((format!("[{a},{b}]"), commutator(u, v)));
            }
        }
        let mut w = Worst::default();
        let mut failures = 0;
        for (name, u) in &ops {
            if let Err(v) = check_operator(u, &fns, probes, 1e-10) {
                failures += 1;
                if w.witness.is_none() {
                    w.witness = Some(json!({
                        "field": name, "axiom": v.axiom.name(), "f": v.f.to_string(),
                        "g": v.g.map(|g| g.to_string()), "at": pt(&v.at), "residual": v.residual,
                    }));
                }
            }
        }
        w.value = failures as f64;
        Ok(w)
    });
    r.bound("commutator", 1e-10, || {
        let mut w = Worst::default();
        for (a, u) in &fields {
            for (b, v) in &fields {
                let uv = commutator(u, v);
                for f in &fns {
                    let direct = &u.apply(&v.apply(f)) - &v.apply(&u.apply(f));
                    let via = uv.apply(f);
                    for p in probes {
                        let err = rel(via.eval(p)?, direct.eval(p)?);
                        w.see(err, || json!({ "u": a, "v": b, "f": f.to_string(), "at": pt(p) }));
                    }
                }
            }
        }
        Ok(w)
    });
    r.bound("antisymmetry-jacobi", 1e-9, || {
        let mut w = Worst::default();
        for (a, u) in &fields {
            for (b, v) in &fields {
                let sum = commutator(u, v).add(&commutator(v, u));
                for p in probes {
                    w.see(sum.eval(p)?.max_abs(), || json!({ "identity": "antisymmetry", "u": a, "v": b, "at": pt(p) }));
                }
            }
        }
        for (i, (a, u)) in fields.iter().enumerate() {
            for (j, (b, v)) in fields.iter().enumerate().skip(i + 1) {
                for (c, x) in fields.iter().skip(j + 1) {
                    let cyc = commutator(u, &commutator(v, x))
                        .add(&commutator(v, &commutator(x, u)))
                        .add(&commutator(x, &commutator(u, v)));
                    for p in probes {
                        w.see(cyc.eval(p)?.max_abs(), || json!({ "identity": "jacobi", "fields": [a, b, c], "at": pt(p) }));
                    }
                }
            }
        }
        Ok(w)
    });
    r.bound("class-compatibility", 1e-10, || {
        let mut w = Worst::default();
        for (a, u) in &fields {
            for (b, v) in &fields {
                let lhs = commutator(u, v).class();
                let rhs = u.class().bracket(&v.class());
                for p in probes {
                    let err = rel_vec(&lhs.eval(p)?.0, &rhs.eval(p)?.0);
                    w.see(err, || json!({ "u": a, "v": b, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
    r.bound("subalgebra-ideal", 1e-12, || {
        let mut w = Worst::default();
        for (a, u) in &fields {
            for (b, v) in &fields {
                let zz = commutator(&u.z_part(), &v.z_part());
                let ev = commutator(&u.e_part(), v);
                for p in probes {
                    w.see(zz.eval(p)?.algebraic().abs(), || json!({ "part": "Z", "u": a, "v": b, "at": pt(p) }));
                    let d = ev.eval(p)?.differential();
                    let m = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    w.see(m, || json!({ "part": "E", "u": a, "v": b, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
    r.bound("decomposition", 1e-14, || {
        let mut w = Worst::default();
        for (a, u) in &fields {
            let (z, e) = u.decompose();
            for p in probes {
                let err = (u.eval(p)? - (z.eval(p)? + e.eval(p)?)).max_abs();
                w.see(err, || json!({ "u": a, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("frame-fidelity", 1e-10, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xA1);
        let mut frames = vec![ctx.regular(Flavor::RegularActive)?];
        frames.extend(ctx.scenario.frames.iter().map(|(n, (_, f))| (n.clone(), f.clone())));
        for (name, frame) in &frames {
            let v = Ctx::random_vector(&mut rng);
            let op = (0..5).fold(FiveVectorField::zero(), |acc, a| {
                acc.add(&frame.vector(a).scale(&ScalarField::constant(v.0[a])))
            });
            for f in &fns {
                let in_frame = op.apply(f);
                for p in probes {
                    let u = frame.to_canonical(p, &v)?;
                    let grad: f64 = (0..4).map(|a| u.0[a] * f.partial(a).eval(p).unwrap_or(f64::NAN)).sum();
                    let canonical = grad + u.0[FIFTH] * f.eval(p)?;
                    w.see(rel(in_frame.eval(p)?, canonical), || json!({ "frame": name, "f": f.to_string(), "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
    r.bound("coordinate-basis", 0.0, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xA2);
        let mut frames: Vec<(String, Frame)> = (0..5)
            .map(|i| {
                let offsets: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                (format!("offsets-{i}"), Frame::coordinate(offsets, &ctx.c))
            })
            .collect();
        for (name, (spec, frame)) in &ctx.scenario.frames {
            if matches!(spec, FrameSpec::Coordinate(_)) {
                frames.push((name.clone(), frame.clone()));
            }
        }
        let mut failures = 0;
        for (name, frame) in &frames {
            if let Some(wit) = is_coordinate_basis(frame, &ctx.c, probes, 1e-10)? {
                failures += 1;
                if w.witness.is_none() {
                    w.witness = Some(json!({
                        "frame": name, "clause": wit.clause.label(), "alpha": wit.alpha, "beta": wit.beta,
                        "at": pt(&wit.at), "residual": wit.residual,
                    }));
                }
            }
        }
        w.value = failures as f64;
        Ok(w)
    });
}

/// A sample (1,1) tensor with position-dependent components.
fn sample_mixed_tensor() -> FiveTensorField {
    let comps = (0..25)
        .map(|i| {
            let (a, b) = (i / 5, i % 5);
            let src = format!("{:.2}*x{} + {:.2}*x{}^2", 0.1 * (a + 1) as f64, b % 4, 0.05 * (b + 1) as f64, (a + 1) % 4);
            ScalarField::parse(&src).expect("tensor component")
        })
        .collect();
    FiveTensorField::new(1, 1, comps).expect("rank (1,1)")
}

fn sample_form() -> FiveFormField {
    FiveFormField::parse(["x1", "1", "x0*x2", "0.5*x3^2", "x3 + 0.2"]).expect("sample form")
}

fn lie_flow_suite(ctx: &Ctx, r: &mut Runner) {
    let fields = ctx.fields();
    let probes = &ctx.probes;
    let settings = ctx.settings;
    let (s, t) = (0.6, -0.35);
    let f = ScalarField::parse("sin(x0) + x1*x2 + 2").expect("sample function");
    let g = ScalarField::parse("exp(0.3*x1) + x3").expect("sample function");
    r.bound("group-law", 1e-6, || {
        let mut w = Worst::default();
        for (name, u) in &fields {
            let nested = psi_transform(psi_transform(&f, u, t, &settings), u, s, &settings);
            let direct = psi_transform(&f, u, s + t, &settings);
            for p in probes {
                w.see(rel(nested.eval(p)?, direct.eval(p)?), || json!({ "field": name, "s": s, "t": t, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("factorization", 1e-8, || {
        let mut w = Worst::default();
        for (name, u) in &fields {
            let psi = psi_transform(&f, u, s, &settings);
            let one = psi_transform(ScalarField::one(), u, s, &settings);
            let phi = phi_pull(&f, u, s, &settings);
            for p in probes {
                let err = rel(psi.eval(p)?, one.eval(p)? * phi.eval(p)?);
                w.see(err, || json!({ "field": name, "t": s, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("product-anomaly", 1e-8, || {
        let mut w = Worst::default();
        for (name, u) in &fields {
            let psi_fg = psi_transform(&f * &g, u, s, &settings);
            let (psi_f, psi_g) = (psi_transform(&f, u, s, &settings), psi_transform(&g, u, s, &settings));
            let (phi_f, phi_g) = (phi_pull(&f, u, s, &settings), phi_pull(&g, u, s, &settings));
            for p in probes {
                let lhs = psi_fg.eval(p)?;
                let err = rel(lhs, phi_f.eval(p)? * psi_g.eval(p)?).max(rel(lhs, psi_f.eval(p)? * phi_g.eval(p)?));
                w.see(err, || json!({ "field": name, "t": s, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("modified-leibniz", 1e-10, || {
        let mut w = Worst::default();
        for (name, u) in &fields {
            let lhs = lie_scalar(u, &(&f * &g));
            let upsilon = lie_scalar(u, &ScalarField::one());
            let rhs = &(&(&lie_scalar(u, &f) * &g) + &(&f * &lie_scalar(u, &g))) - &(&(&upsilon * &f) * &g);
            for p in probes {
                w.see(rel(lhs.eval(p)?, rhs.eval(p)?), || json!({ "field": name, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("operator-compatibility", 1e-6, || {
        let mut w = Worst::default();
        for (i, (name, u)) in fields.iter().enumerate() {
            let (vname, v) = fields[(i + 1) % fields.len()];
            let flow = FlowField::new(u);
            let vf = v.apply(&f);
            for p in probes {
                let jet = flow_jet(&flow, p, s, &settings)?;
                let pv = jet.psi_vector(v)?;
                let grad = jet.psi_gradient(&f)?;
                let lhs = (0..4).map(|a| pv.0[a] * grad[a]).sum::<f64>() + pv.0[FIFTH] * jet.psi(&f)?;
                w.see(rel(lhs, jet.psi(&vf)?), || json!({ "field": name, "v": vname, "t": s, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("lie-definition", 1e-5, || {
        let mut w = Worst::default();
        let (d1, d2) = (1e-3, 1e-4);
        let c = ctx.c;
        for (i, (name, u)) in fields.iter().enumerate() {
            let v = fields[(i + 1) % fields.len()].1;
            let tensors = [
                ("rank-zero", FiveTensorField::scalar(f.clone())),
                ("vector", FiveTensorField::from_vector(v)),
                ("form", FiveTensorField::from_form(&sample_form().0)),
                ("mixed", sample_mixed_tensor()),
            ];
            let flow = FlowField::new(u);
            for (label, tensor) in &tensors {
                let lie = lie_tensor(u, tensor, &c)?;
                for p in probes {
                    let base = tensor.eval(p)?;
                    let quotient = |d: f64| -> Result<Vec<f64>> {
                        let image = tensor.psi_at(&flow_jet(&flow, p, d, &settings)?, c.k)?;
                        Ok(image.iter().zip(&base).map(|(x, y)| -(x - y) / d).collect())
                    };
                    let (q1, q2) = (quotient(d1)?, quotient(d2)?);
                    let extrapolated: Vec<f64> = q1.iter().zip(&q2).map(|(a, b)| (d1 * b - d2 * a) / (d1 - d2)).collect();
                    let err = rel_vec(&extrapolated, &lie.eval(p)?);
                    w.see(err, || json!({ "field": name, "tensor": label, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
    r.bound("k-distinction", 1e-12, || {
        let mut w = Worst::default();
        let amount = 0.7;
        let u = FiveVectorField::algebraic_only(ScalarField::constant(amount));
        let constant = |upper: usize, lower: usize| {
            let n = 5usize.pow((upper + lower) as u32);
            let comps = (0..n).map(|i| ScalarField::constant(0.5 + (i % 7) as f64 * 0.25)).collect();
            FiveTensorField::new(upper, lower, comps).expect("constant tensor")
        };
        let p = probes[0];
        for (upper, lower) in [(0, 1), (1, 1), (0, 2), (1, 0)] {
            let tensor = constant(upper, lower);
            let values = tensor.eval(&p)?;
            for k in [-1.0, 0.0] {
                let got = lie_tensor(&u, &tensor, &ctx.c.with_k(k))?.eval(&p)?;
                let factor = if k == 0.0 { lower as f64 * amount } else { 0.0 };
                let expected: Vec<f64> = values.iter().map(|x| factor * x).collect();
                let err = got.iter().zip(&expected).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                w.see(err, || json!({ "rank": [upper, lower], "k": k }));
            }
        }
        Ok(w)
    });
    r.bound("rank-zero-leibniz", 1e-10, || {
        let mut w = Worst::default();
        for (a, u) in &fields {
            for (b, v) in &fields {
                let lhs = lie_fivevector(u, &v.scale(&f));
                let rhs = v.scale(&lie_rank_zero(u, &RankZeroField(f.clone())).0).add(&lie_fivevector(u, v).scale(&f));
                for p in probes {
                    let err = rel_vec(&lhs.eval(p)?.0, &rhs.eval(p)?.0);
                    w.see(err, || json!({ "u": a, "v": b, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
    r.bound("contraction-correlation", 1e-10, || {
        let mut w = Worst::default();
        let form = sample_form();
        let c = ctx.c.with_k(-1.0);
        for (a, u) in &fields {
            let lie_form = lie_tensor(u, &FiveTensorField::from_form(&form.0), &c)?;
            for (b, v) in &fields {
                let pairing = RankZeroField(contract(&form, v));
                let lhs = lie_rank_zero(u, &pairing).0;
                let lie_v = lie_fivevector(u, v);
                for p in probes {
                    let (lw, wv) = (lie_form.eval(p)?, form.eval(p)?);
                    let (vv, lv) = (v.eval(p)?, lie_v.eval(p)?);
                    let rhs: f64 = (0..5).map(|i| lw[i] * vv.0[i] + wv.0[i] * lv.0[i]).sum();
                    w.see(rel(lhs.eval(p)?, rhs), || json!({ "u": a, "v": b, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
}

/// Transported pairs along every curve from `t = 0` to `t = 1`, in the canonical frame.
struct TransportDraw {
    curve: String,
    u0: FiveVector,
    v0: FiveVector,
    u1: FiveVector,
    v1: FiveVector,
    start: Point,
    end: Point,
}

fn transport_draws(ctx: &Ctx, g: &Connection, per_curve: usize) -> Result<Vec<TransportDraw>> {
    let mut rng = ctx.rng(0xC1);
    let mut out = Vec::new();
    for (name, curve) in ctx.curves() {
        for _ in 0..per_curve {
            let (u0, v0) = (Ctx::random_vector(&mut rng), Ctx::random_vector(&mut rng));
            out.push(TransportDraw {
                curve: name.clone(),
                u0,
                v0,
                u1: transport(&u0, curve, 0.0, 1.0, g, &ctx.settings)?,
                v1: transport(&v0, curve, 0.0, 1.0, g, &ctx.settings)?,
                start: curve.point(0.0)?,
                end: curve.point(1.0)?,
            });
        }
    }
    Ok(out)
}

fn draw_witness(d: &TransportDraw) -> Value {
    json!({ "curve": d.curve, "u0": d.u0.0, "v0": d.v0.0, "t0": 0.0, "t1": 1.0 })
}

fn is_flat(m: &MetricField, probes: &[Point]) -> Result<bool> {
    for p in probes {
        if christoffel(m, p)?.iter().flatten().flatten().any(|x| x.abs() > 1e-14) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn connection_suite(ctx: &Ctx, r: &mut Runner) {
    let probes = &ctx.probes;
    let m = ctx.metric();
    let c = ctx.c;
    r.bound("metricity", 1e-10, || {
        let mut w = Worst::default();
        for (name, frame) in ctx.standard_frames()? {
            let g = ctx.connection(&frame)?;
            for p in probes {
                w.see(g.metricity_residual(p)?, || json!({ "frame": name, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("coefficient-rules", 1e-10, || {
        let mut w = Worst::default();
        let b = c.algebraic_coefficient();
        for (name, frame) in ctx.standard_frames()? {
            let g = ctx.connection(&frame)?;
            let scale = frame.flavor().e5_scale(&c);
            for p in probes {
                let coeffs = g.coefficients_at(p)?;
                let gm = m.at(p)?;
                for a in 0..5 {
                    for bb in 0..5 {
                        w.see(coeffs[a][bb][FIFTH].abs(), || json!({ "frame": name, "rule": "no fifth direction", "index": [a, bb, FIFTH], "at": pt(p) }));
                    }
                }
                for alpha in 0..4 {
                    for mu in 0..5 {
                        w.see(coeffs[alpha][FIFTH][mu].abs(), || json!({ "frame": name, "rule": "standard", "index": [alpha, FIFTH, mu], "at": pt(p) }));
                    }
                }
                let Some(scale) = scale else { continue };
                for mu in 0..4 {
                    w.see(coeffs[FIFTH][FIFTH][mu].abs(), || json!({ "frame": name, "rule": "regular fifth", "index": [FIFTH, FIFTH, mu], "at": pt(p) }));
                    for alpha in 0..4 {
                        let expected = -b / scale * gm[(alpha, mu)];
                        w.see((coeffs[FIFTH][alpha][mu] - expected).abs(), || {
                            json!({ "frame": name, "rule": "regular metric", "index": [FIFTH, alpha, mu], "at": pt(p) })
                        });
                    }
                }
            }
        }
        Ok(w)
    });
    let canonical = Frame::canonical();
    let draws = ctx.connection(&canonical).and_then(|g| Ok((transport_draws(ctx, &g, 4)?, g)));
    let with_draws = |f: &dyn Fn(&[TransportDraw], &Connection) -> Result<Worst>| -> Result<Worst> {
        let (d, g) = draws.as_ref().map_err(Error::clone)?;
        f(d, g)
    };
    r.bound("transport-preserves-g", 1e-7, || {
        with_draws(&|draws, _| {
            let mut w = Worst::default();
            for d in draws {
                let before = g5(&d.u0, &d.v0, m, &d.start)?;
                let after = g5(&d.u1, &d.v1, m, &d.end)?;
                w.see(rel(before, after), || draw_witness(d));
            }
            Ok(w)
        })
    });
    r.run("transport-changes-h", CheckKind::Exhibit, 1e-3, || {
        with_draws(&|draws, _| {
            let mut w = Worst::default();
            for d in draws {
                let change = (h(&d.u1, &d.v1, m, &c, &d.end)? - h(&d.u0, &d.v0, m, &c, &d.start)?).abs();
                w.see(change, || draw_witness(d));
            }
            Ok(w)
        })
    });
    r.bound("class-equivariance", 1e-8, || {
        with_draws(&|draws, _| {
            let mut w = Worst::default();
            for d in draws {
                let curve = ctx.scenario.curves[&d.curve].clone();
                let four = transport_four(&d.u0.class(), &curve, 0.0, 1.0, m, &ctx.settings)?;
                w.see(rel_vec(&four.0, &d.u1.class().0), || draw_witness(d));
            }
            Ok(w)
        })
    });
    r.bound("e-invariance", 1e-10, || {
        with_draws(&|_, g| {
            let mut w = Worst::default();
            let n = unit_n(&c)?;
            for (name, curve) in ctx.curves() {
                for e in [FiveVector::basis(FIFTH) * 1.7, n] {
                    let end = transport(&e, curve, 0.0, 1.0, g, &ctx.settings)?;
                    w.see(rel_vec(&end.0, &e.0), || json!({ "curve": name, "v0": e.0 }));
                }
            }
            Ok(w)
        })
    });
    r.bound("lambda-rate", 1e-9, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xC2);
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive] {
            let frame = Frame::regular(flavor, &c)?;
            let g = ctx.connection(&frame)?;
            for (name, v) in ctx.fields() {
                let v = in_regular(v, &frame, &c);
                for p in probes {
                    let u = Ctx::random_vector(&mut rng);
                    let (lhs, rhs) = nabla_lambda(&u, &v, &g, p)?;
                    w.see(rel(lhs, rhs), || json!({ "frame": flavor.name(), "v": name, "u": u.0, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
    if let Ok(true) = is_flat(m, probes) {
        r.bound("flat-loops", 1e-8, || {
            let g = ctx.connection(&canonical)?;
            let mut w = Worst::default();
            let mut rng = ctx.rng(0xC3);
            let loops = [
                ["0.3*cos(6.283185307179586*t)", "0.3*sin(6.283185307179586*t)", "0", "0"],
                ["0.2 + 0.2*cos(6.283185307179586*t)", "0.1", "0.4*sin(6.283185307179586*t)", "0.1*sin(12.566370614359172*t)"],
            ];
            for path in loops {
                let curve = ParametrizedCurve::parse(path, 0.0)?;
                for _ in 0..3 {
                    let u0 = Ctx::random_vector(&mut rng);
                    let u1 = transport(&u0, &curve, 0.0, 1.0, &g, &ctx.settings)?;
                    w.see((u1 - u0).max_abs(), || json!({ "loop": path, "u0": u0.0 }));
                }
            }
            Ok(w)
        });
    }
}

fn bivector_suite(ctx: &Ctx, r: &mut Runner) {
    let probes = &ctx.probes;
    let m = ctx.metric();
    let c = ctx.c;
    let canonical = Frame::canonical();
    r.bound("eq55", 1e-10, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xB1);
        let n = unit_n(&c)?;
        let e = wedge(&n, &n)?.directional;
        for p in probes {
            let hc = HContext { metric: m, constants: c, frame: &canonical, at: *p };
            for _ in 0..5 {
                let (u, v) = (Ctx::random_vector(&mut rng), Ctx::random_vector(&mut rng));
                let g_classes = g5(&u.z_part(), &v.z_part(), m, p)?;
                let projected = hc.h(&u, &v)? - hc.h(&n, &u)? * hc.h(&n, &v)? / hc.h(&n, &n)?;
                let inner = bivector_inner(&wedge(&u, &e)?, &wedge(&v, &e)?, &hc)?;
                let err = rel(g_classes, projected).max(rel(g_classes, inner));
                w.see(err, || json!({ "u": u.0, "v": v.0, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("kappa-bridge", 1e-12, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xB2);
        let (n, kappa) = (unit_n(&c)?, c.kappa()?);
        for p in probes {
            let v = Ctx::random_vector(&mut rng);
            let lhs = kappa * h(&v, &n, m, &c, p)?;
            w.see(rel(lhs, c.xi * v.lambda(&c)), || json!({ "v": v.0, "at": pt(p) }));
        }
        Ok(w)
    });
    r.bound("bivector-equivariance", 1e-8, || {
        let g = ctx.connection(&canonical)?;
        let n = unit_n(&c)?;
        let mut w = Worst::default();
        for d in transport_draws(ctx, &g, 3)? {
            let curve = &ctx.scenario.curves[&d.curve];
            let moved = wedge(&d.u1, &n)?.components();
            let four = transport_four(&wedge(&d.u0, &n)?.components(), curve, 0.0, 1.0, m, &ctx.settings)?;
            w.see(rel_vec(&moved.0, &four.0), || draw_witness(&d));
            let shifted = wedge(&(d.u0 + n * 3.0), &n)?;
            if !shifted.approx_eq(&wedge(&d.u0, &n)?, 0.0) {
                w.see(f64::INFINITY, || json!({ "identity": "u + 3n ∧ n", "u0": d.u0.0 }));
            }
        }
        Ok(w)
    });
    r.bound("four-basis", 1e-10, || {
        let mut w = Worst::default();
        for (name, frame) in ctx.standard_frames()? {
            for p in probes {
                let basis = associated_four_basis(&frame, m, &c, p)?;
                let scale = basis.metric.abs().max().max(1.0);
                let err = (basis.metric_from_h - basis.metric).abs().max() / scale;
                w.see(err, || json!({ "frame": name, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("four-connection", 1e-10, || {
        let mut w = Worst::default();
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive, Flavor::RegularNormalized] {
            let g = ctx.connection(&Frame::regular(flavor, &c)?)?;
            for p in probes {
                let derived = FourBasis::four_connection(&g, p)?;
                let gamma = christoffel(m, p)?;
                let err = derived.iter().flatten().flatten().zip(gamma.iter().flatten().flatten())
                    .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
                w.see(err, || json!({ "frame": flavor.name(), "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("eq58", 1e-9, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xB3);
        let fields = ctx.fields();
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive] {
            let frame = Frame::regular(flavor, &c)?;
            let g = ctx.connection(&frame)?;
            for (i, (a, v)) in fields.iter().enumerate() {
                let (b, x) = fields[(i + 1) % fields.len()];
                let (v, x) = (in_regular(v, &frame, &c), in_regular(x, &frame, &c));
                for p in probes {
                    let u = Ctx::random_vector(&mut rng);
                    let (lhs, rhs) = nabla_h(&u, &v, &x, &g, p)?;
                    w.see(rel(lhs, rhs), || json!({ "frame": flavor.name(), "v": a, "w": b, "u": u.0, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    });
}

fn forms_suite(ctx: &Ctx, r: &mut Runner) {
    let probes = &ctx.probes;
    let m = ctx.metric();
    let c = ctx.c;
    r.bound("contraction-conservation", 1e-8, || {
        let canonical = Frame::canonical();
        let g = ctx.connection(&canonical)?;
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xF1);
        for (name, curve) in ctx.curves() {
            for _ in 0..4 {
                let u0 = Ctx::random_vector(&mut rng);
                let w0 = FiveForm(Ctx::random_vector(&mut rng).0);
                let u1 = transport(&u0, curve, 0.0, 1.0, &g, &ctx.settings)?;
                let w1 = transport_form(&w0, curve, 0.0, 1.0, &g, &ctx.settings)?;
                w.see(rel(w0.contract(&u0), w1.contract(&u1)), || json!({ "curve": name, "u0": u0.0, "w0": w0.0 }));
            }
        }
        Ok(w)
    });
    let commutation = |h_based: bool| -> Result<Worst> {
        let mut w = Worst::default();
        let mut rng = ctx.rng(if h_based { 0xF3 } else { 0xF2 });
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive] {
            let frame = Frame::regular(flavor, &c)?;
            let g = ctx.connection(&frame)?;
            let mut inputs: Vec<(String, FiveVectorField)> =
                ctx.fields().into_iter().map(|(n, u)| (n.clone(), in_regular(u, &frame, &c))).collect();
            inputs.push(("e0".into(), FiveVectorField::constant([1.0, 0.0, 0.0, 0.0, 0.0])));
            for (name, u) in &inputs {
                let lowered = if h_based { theta_h_field(u, &frame, m, &c) } else { theta_g_field(u, &frame, m) };
                for p in probes {
                    let dir = if name == "e0" { FiveVector::basis(0) } else { Ctx::random_vector(&mut rng) };
                    let lhs = covariant_derivative_form(&dir, &lowered, &g, p)?;
                    let du = covariant_derivative(&dir, u, &g, p)?;
                    let rhs = if h_based { theta_h(&du, &frame, m, &c, p)? } else { theta_g(&du, &frame, m, p)? };
                    let err = if h_based { (lhs - rhs).max_abs() } else { rel_vec(&lhs.0, &rhs.0) };
                    w.see(err, || json!({ "frame": flavor.name(), "u": name, "direction": dir.0, "at": pt(p) }));
                }
            }
        }
        Ok(w)
    };
    r.bound("theta-g-commutation", 1e-9, || commutation(false));
    r.run("theta-h-witness", CheckKind::Exhibit, 1e-3, || commutation(true));
    r.bound("x-form-derivative", 1e-10, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xF4);
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive, Flavor::RegularNormalized] {
            let frame = Frame::regular(flavor, &c)?;
            let g = ctx.connection(&frame)?;
            let x = x_form(&frame, &c)?;
            for p in probes {
                let u = Ctx::random_vector(&mut rng);
                let lhs = covariant_derivative_form(&u, &x, &g, p)?;
                let rhs = g_matrix(&frame, m, p)? * nalgebra::Vector5::from(u.0);
                w.see(rel_vec(&lhs.0, rhs.as_slice()), || json!({ "frame": flavor.name(), "u": u.0, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("x-form-lambda", 1e-12, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xF5);
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive, Flavor::RegularNormalized] {
            let frame = Frame::regular(flavor, &c)?;
            let x = x_form(&frame, &c)?;
            for p in probes {
                let v = Ctx::random_vector(&mut rng);
                let lambda = frame.to_canonical(p, &v)?.lambda(&c);
                w.see(rel(x.eval(p)?.contract(&v), lambda), || json!({ "frame": flavor.name(), "v": v.0, "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("theta-invertibility", 1e-10, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xF6);
        for (name, frame) in ctx.standard_frames()? {
            let e = frame.from_canonical(&probes[0], &FiveVector::basis(FIFTH))?;
            for p in probes {
                let u = Ctx::random_vector(&mut rng);
                let back = theta_h_inverse(&theta_h(&u, &frame, m, &c, p)?, &frame, m, &c, p)?;
                w.see(rel_vec(&back.0, &u.0), || json!({ "frame": name, "map": "theta_h", "u": u.0, "at": pt(p) }));
                let kernel = theta_g(&e, &frame, m, p)?.max_abs();
                w.see(kernel, || json!({ "frame": name, "map": "theta_g kernel", "at": pt(p) }));
            }
        }
        Ok(w)
    });
    r.bound("pform-algebra", 0.0, || {
        let mut w = Worst::default();
        let mut rng = ctx.rng(0xF7);
        let p = probes[0];
        let random_form = |rng: &mut ChaCha8Rng| {
            let comps: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            PFormField::from_one_form(&FiveFormField::constant(comps))
        };
        let value = |f: &PFormField| -> Result<Vec<f64>> { (0..32u8).map(|mask| Ok(f.component(mask).eval(&p)?)).collect() };
        let mut failures = 0usize;
        let mut fail = |w: &mut Worst, what: &str| {
            failures += 1;
            let what = what.to_string();
            if w.witness.is_none() {
                w.witness = Some(json!({ "identity": what }));
            }
        };
        for _ in 0..3 {
            let a = wedge_forms(&random_form(&mut rng), &random_form(&mut rng))?;
            let b = wedge_forms(&random_form(&mut rng), &random_form(&mut rng))?;
            let (z, e) = a.decompose();
            if rel_vec(&value(&z.add(&e)?)?, &value(&a)?) > 1e-14 {
                fail(&mut w, "decomposition sums to the form");
            }
            if value(&z.decompose().0)? != value(&z)? {
                fail(&mut w, "decomposition is idempotent");
            }
            let (zs, es) = a.add(&b)?.decompose();
            let (zb, eb) = b.decompose();
            if rel_vec(&value(&zs)?, &value(&z.add(&zb)?)?) > 1e-14 || rel_vec(&value(&es)?, &value(&e.add(&eb)?)?) > 1e-14 {
                fail(&mut w, "decomposition is additive");
            }
        }
        let one = |i: usize| PFormField::from_one_form(&FiveFormField::constant(FiveForm::basis(i).0));
        let top = (1..5).try_fold(one(0), |acc, i| wedge_forms(&acc, &one(i)))?;
        if !top.decompose().0.is_zero() || top.is_zero() {
            fail(&mut w, "top form has only an algebraic part");
        }
        let ab = wedge_forms(&one(0), &PFormField::jtilde())?;
        let ba = wedge_forms(&PFormField::jtilde(), &one(0))?;
        if rel_vec(&value(&ab)?, &value(&ba.scale(-1.0))?) > 0.0 || !wedge_forms(&one(0), &one(0))?.is_zero() {
            fail(&mut w, "graded commutativity");
        }
        w.value = failures as f64;
        Ok(w)
    });
}

/// A scalar reported by the connection, bivector and forms suites, with the
/// power of `k` that maps its rescaled value back to the original one.
struct Reported {
    name: String,
    value: f64,
    power: i32,
}

/// Reports computed for inputs given in original units; `k` maps them into `s`.
fn invariant_reports(ctx: &Ctx, s: &Scenario, k: f64) -> Result<Vec<Reported>> {
    let c = s.constants;
    let m = &s.metric;
    let mut out = Vec::new();
    let mut push = |name: String, value: f64, power: i32| out.push(Reported { name, value, power });
    let to_rescaled = |u: &FiveVector| {
        let mut v = *u;
        v.0[FIFTH] *= k;
        v
    };
    let canonical = Frame::canonical();
    let active = Frame::regular(Flavor::RegularActive, &c)?;
    let mut g = build_connection(m, &c, &canonical)?;
    for p in &s.perturbations {
        g = g.perturbed(p.index, p.delta);
    }
    let n = unit_n(&c)?;
    let mut rng = ctx.rng(0xE1);
    let span = 1.0 / k;
    for (name, curve) in &s.curves {
        for i in 0..3 {
            let (u0, v0) = (Ctx::random_vector(&mut rng), Ctx::random_vector(&mut rng));
            let (u0, v0) = (to_rescaled(&u0), to_rescaled(&v0));
            let u1 = transport(&u0, curve, 0.0, span, &g, &ctx.settings)?;
            let v1 = transport(&v0, curve, 0.0, span, &g, &ctx.settings)?;
            let (x0, x1) = (curve.point(0.0)?, curve.point(span)?);
            let tag = format!("{name}#{i}");
            push(format!("{tag} g before"), g5(&u0, &v0, m, &x0)?, 0);
            push(format!("{tag} g after"), g5(&u1, &v1, m, &x1)?, 0);
            push(format!("{tag} h after"), h(&u1, &v1, m, &c, &x1)?, 0);
            for a in 0..4 {
                push(format!("{tag} class {a}"), u1.0[a], 0);
            }
            let lambda = active.from_canonical(&x1, &u1)?.0[FIFTH];
            push(format!("{tag} active fifth"), lambda, 1);
            let hc = HContext { metric: m, constants: c, frame: &canonical, at: x1 };
            push(format!("{tag} bivector inner"), bivector_inner(&wedge(&u1, &n)?, &wedge(&v1, &n)?, &hc)?, 0);
            let w0 = FiveForm(Ctx::random_vector(&mut rng).0);
            let mut w0s = w0;
            w0s.0[FIFTH] /= k;
            let w1 = transport_form(&w0s, curve, 0.0, span, &g, &ctx.settings)?;
            push(format!("{tag} contraction"), w1.contract(&u1), 0);
        }
        if let Ok(interval) = curve_interval(curve, 0.0, span, m) {
            push(format!("{name} interval"), interval, 1);
        }
    }
    let fields: Vec<&FiveVectorField> = s.fields.values().collect();
    for (i, p) in ctx.probes.iter().take(8).enumerate() {
        let p = p.scaled(1.0 / k);
        push(format!("probe {i} metricity"), g.metricity_residual(&p)?, 0);
        let (u, v) = (to_rescaled(&Ctx::random_vector(&mut rng)), to_rescaled(&Ctx::random_vector(&mut rng)));
        let hc = HContext { metric: m, constants: c, frame: &canonical, at: p };
        push(format!("probe {i} g"), g5(&u, &v, m, &p)?, 0);
        push(format!("probe {i} h"), hc.h(&u, &v)?, 0);
        push(format!("probe {i} h(n,n)"), hc.h(&n, &n)?, 0);
        let field = fields[i % fields.len()];
        let other = fields[(i + 1) % fields.len()];
        let (lhs, rhs) = nabla_lambda(&u, field, &g, &p)?;
        push(format!("probe {i} lambda rate"), lhs, 0);
        push(format!("probe {i} g(u,v) field"), rhs, 0);
        let (lhs, rhs) = nabla_h(&u, field, other, &g, &p)?;
        push(format!("probe {i} nabla h residual"), lhs - rhs, -1);
    }
    Ok(out)
}

fn rescale_suite(ctx: &Ctx, r: &mut Runner) {
    let reference = invariant_reports(ctx, &ctx.scenario, 1.0);
    for k in std::iter::once(1.0).chain(RESCALE_FACTORS) {
        let check = format!("invariance-k{k}");
        r.bound(&check, 1e-7, || {
            let reference = reference.as_ref().map_err(Error::clone)?;
            let scaled = rescale_interval_unit(&ctx.scenario, k)?;
            let reports = invariant_reports(ctx, &scaled, k)?;
            let mut w = Worst::default();
            for (a, b) in reference.iter().zip(&reports) {
                let mapped = b.value * k.powi(b.power);
                w.see(rel(a.value, mapped), || json!({ "report": a.name, "original": a.value, "rescaled": mapped, "k": k }));
            }
            Ok(w)
        });
    }
}
