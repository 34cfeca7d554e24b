//! The twelve acceptance criteria, each printed as one pass/fail line.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use pentacalc::algebra::{
    check_five_axioms, check_operator, commutator, default_axiom_probes, is_coordinate_basis, Axiom, Clause,
    FiveVector, FiveVectorField, Flavor, Frame, FIFTH,
};
use pentacalc::connection::{
    associated_four_basis, bivector_inner, build_connection, covariant_derivative, nabla_h, nabla_lambda, transport, transport_four,
    unit_n, wedge, HContext,
};
use pentacalc::field::{default_probes, Expr, Point, ScalarField};
use pentacalc::flow::{
    flow_jet, lie_tensor, phi_pull, psi_transform, FiveTensorField, FlowField, FlowSettings,
};
use pentacalc::forms::{
    covariant_derivative_form, theta_g, theta_g_field, theta_h, theta_h_field, transport_form, x_form, FiveForm,
    FiveFormField,
};
use pentacalc::harness::{parse_scenario, run_suite, RunOptions};
use pentacalc::metric::{g5, g_matrix, h, Constants};
use pentacalc::Result;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0f64, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

fn operator_theorem() -> Result<Outcome> {
    let fns = default_axiom_probes();
    let points = default_probes();
    let mut rng = rng(1);
    let mut rejected = 0;
    for _ in 0..50 {
        if check_operator(&random_field(&mut rng), &fns, &points, 1e-10).is_err() {
            rejected += 1;
        }
    }
    let q = Point([0.2, -0.4, 0.7, 0.1]);
    type Op = Box<dyn Fn(&ScalarField) -> ScalarField>;
    let violators: Vec<(&str, Op, Axiom)> = vec![
        ("square", Box::new(|f| f * f), Axiom::Additivity),
        ("shift by one", Box::new(|f| f + 1.0), Axiom::Additivity),
        ("cube", Box::new(|f| &(f * f) * f), Axiom::Additivity),
        ("exponential", Box::new(|f| f.exp()), Axiom::Additivity),
        ("self-weighted derivative", Box::new(|f| f * &f.partial(0)), Axiom::Additivity),
        ("second derivative", Box::new(|f| f.partial(0).partial(0)), Axiom::ModifiedLeibniz),
        ("mixed second derivative", Box::new(|f| f.partial(0).partial(1)), Axiom::ModifiedLeibniz),
        ("derivative plus curvature", Box::new(|f| &f.partial(0) + &f.partial(1).partial(1)), Axiom::ModifiedLeibniz),
        (
            "argument shift",
            Box::new(|f| ScalarField::from_expr(f.expr().substitute(&|i| Expr::var(i).add(&Expr::constant(0.3))))),
            Axiom::ModifiedLeibniz,
        ),
        ("evaluation at a point", Box::new(move |f| ScalarField::constant(f.eval(&q).expect("finite"))), Axiom::ModifiedLeibniz),
    ];
    let mut misidentified = Vec::new();
    for (name, op, expected) in &violators {
        match check_five_axioms(op.as_ref(), &fns, &points, 1e-10) {
            Err(v) if v.axiom == *expected => {}
            other => misidentified.push(format!("{name}: {:?}", other.map_err(|v| v.axiom))),
        }
    }
    outcome(
        rejected == 0 && misidentified.is_empty(),
        format!("50 operators, {rejected} rejected; 10 violators, misidentified {misidentified:?}"),
    )
}

fn commutator_equivalence() -> Result<Outcome> {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for (_, m) in presets() {
        let mut fns = default_axiom_probes();
        fns.extend([m.component(0, 0).clone(), m.component(1, 1).clone()]);
        for _ in 0..25 {
            let (u, v) = (random_field(&mut rng), random_field(&mut rng));
            let uv = commutator(&u, &v);
            for f in &fns {
                let via = uv.apply(f);
                let direct = &u.apply(&v.apply(f)) - &v.apply(&u.apply(f));
                for p in default_probes() {
                    worst = worst.max(rel(via.eval(&p)?, direct.eval(&p)?));
                }
            }
        }
    }
    outcome(worst <= 1e-10, format!("max relative disagreement {worst:.3e} (tol 1e-10)"))
}

fn coordinate_basis() -> Result<Outcome> {
    let c = Constants::default();
    let probes = default_probes();
    let mut rng = rng(3);
    let mut problems = Vec::new();
    for set in 0..5 {
        let offsets: [f64; 4] = std::array::from_fn(|_| rand::Rng::gen_range(&mut rng, -2.0..2.0));
        let frame = Frame::coordinate(offsets, &c);
        if let Some(w) = is_coordinate_basis(&frame, &c, &probes, 1e-10)? {
            problems.push(format!("set {set} rejected by {}", w.clause.label()));
        }
        for beta in 0..4 {
            let mut l = frame.entries().clone();
            l[FIFTH][beta] = &l[FIFTH][beta] + &ScalarField::coord(1);
            let perturbed = Frame::from_matrix(l, Flavor::Standard, &c)?;
            match is_coordinate_basis(&perturbed, &c, &probes, 1e-10)? {
                Some(w) if w.clause == Clause::Mixed => {}
                other => problems.push(format!("set {set}, E-part of e{beta}: {:?}", other.map(|w| w.clause))),
            }
        }
        for alpha in [0, 2, 3] {
            let mut l = frame.entries().clone();
            l[1][alpha] = ScalarField::coord(1);
            let perturbed = Frame::from_matrix(l, Flavor::Standard, &c)?;
            match is_coordinate_basis(&perturbed, &c, &probes, 1e-10)? {
                Some(w) if w.clause == Clause::Differential => {}
                other => problems.push(format!("set {set}, Z-part of e{alpha}: {:?}", other.map(|w| w.clause))),
            }
        }
    }
    outcome(problems.is_empty(), format!("5 constant sets, 35 perturbations; problems {problems:?}"))
}

fn flow_identities() -> Result<Outcome> {
    let u = FiveVectorField::parse(["1 + 0.2*x1^2", "0.3*exp(x0)*x2", "-0.2*x1", "0.1"], "0.3*exp(2*x0) - 0.2*x1")?;
    let f = ScalarField::parse("sin(x0) + x1*x2 + 2")?;
    let g = ScalarField::parse("exp(0.3*x1) + x3")?;
    let (s, t) = (0.6, -0.35);
    let probes = default_probes();
    let group_law = |settings: &FlowSettings| -> Result<f64> {
        let nested = psi_transform(psi_transform(&f, &u, t, settings), &u, s, settings);
        let direct = psi_transform(&f, &u, s + t, settings);
        let mut worst = 0.0f64;
        for p in &probes {
            worst = worst.max((nested.eval(p)? - direct.eval(p)?).abs());
        }
        Ok(worst)
    };
    let settings = FlowSettings::default();
    let law = group_law(&settings)?;
    let (psi_f, psi_g) = (psi_transform(&f, &u, s, &settings), psi_transform(&g, &u, s, &settings));
    let (phi_f, phi_g) = (phi_pull(&f, &u, s, &settings), phi_pull(&g, &u, s, &settings));
    let (one, psi_fg) = (psi_transform(ScalarField::one(), &u, s, &settings), psi_transform(&f * &g, &u, s, &settings));
    let (mut factor, mut anomaly) = (0.0f64, 0.0f64);
    for p in &probes {
        factor = factor.max(rel(psi_f.eval(p)?, one.eval(p)? * phi_f.eval(p)?));
        let lhs = psi_fg.eval(p)?;
        anomaly = anomaly.max(rel(lhs, phi_f.eval(p)? * psi_g.eval(p)?).max(rel(lhs, psi_f.eval(p)? * phi_g.eval(p)?)));
    }
    let coarse: Vec<f64> =
        [16, 32, 64].iter().map(|n| group_law(&FlowSettings::new(*n))).collect::<Result<_>>()?;
    let ratios = [coarse[0] / coarse[1], coarse[1] / coarse[2]];
    let pass = law <= 1e-6 && factor <= 1e-6 && anomaly <= 1e-6 && ratios.iter().all(|r| *r >= 8.0);
    outcome(
        pass,
        format!(
            "group law {law:.2e}, factorization {factor:.2e}, anomaly {anomaly:.2e} (tol 1e-6); \
             residual ratios on halving {:.1}, {:.1} (need >= 8)",
            ratios[0], ratios[1]
        ),
    )
}

fn sample_tensors(v: &FiveVectorField) -> Result<Vec<(&'static str, FiveTensorField)>> {
    let mixed = (0..25)
        .map(|i| ScalarField::parse(&format!("{}*x{} + 0.1*x{}^2 + 0.3", 0.1 * (i / 5 + 1) as f64, i % 4, (i / 5) % 4)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(vec![
        ("(0,0)", FiveTensorField::scalar(ScalarField::parse("sin(x0) + x1*x2")?)),
        ("(1,0)", FiveTensorField::from_vector(v)),
        ("(0,1)", FiveTensorField::from_form(&FiveFormField::parse(["x1", "1", "x0*x2", "0.5*x3^2", "x3 + 0.2"])?.0)),
        ("(1,1)", FiveTensorField::new(1, 1, mixed)?),
    ])
}

fn lie_oracle() -> Result<Outcome> {
    let c = Constants::default();
    let settings = FlowSettings::default();
    let mut rng = rng(5);
    let (d1, d2) = (1e-3, 1e-4);
    let (mut worst, mut slowest) = (0.0f64, f64::INFINITY);
    for _ in 0..3 {
        let u = random_flow_field(&mut rng);
        let v = random_field(&mut rng);
        let flow = FlowField::new(&u);
        for (_, tensor) in sample_tensors(&v)? {
            let lie = lie_tensor(&u, &tensor, &c)?;
            for p in default_probes().iter().take(10) {
                let base = tensor.eval(p)?;
                let exact = lie.eval(p)?;
                let quotient = |d: f64| -> Result<Vec<f64>> {
                    let image = tensor.psi_at(&flow_jet(&flow, p, d, &settings)?, c.k)?;
                    Ok(image.iter().zip(&base).map(|(x, y)| -(x - y) / d).collect())
                };
                let (q1, q2) = (quotient(d1)?, quotient(d2)?);
                let (e1, e2) = (rel_vec(&q1, &exact), rel_vec(&q2, &exact));
                if e1 > 1e-9 {
                    slowest = slowest.min(e1 / e2);
                }
                let extrapolated: Vec<f64> = q1.iter().zip(&q2).map(|(a, b)| (d1 * b - d2 * a) / (d1 - d2)).collect();
                worst = worst.max(rel_vec(&extrapolated, &exact));
            }
        }
    }
    outcome(
        worst < 1e-5 && slowest >= 5.0,
        format!("extrapolated disagreement {worst:.2e} (tol 1e-5); error ratio between step sizes >= {slowest:.1}"),
    )
}

fn k_distinction() -> Result<Outcome> {
    let amount = 0.7;
    let u = FiveVectorField::algebraic_only(ScalarField::constant(amount));
    let p = Point([0.1, 0.2, -0.3, 0.4]);
    let mut worst = 0.0f64;
    for (upper, lower) in [(0, 1), (1, 1), (0, 2), (1, 0), (2, 1)] {
        let n = 5usize.pow((upper + lower) as u32);
        let comps = (0..n).map(|i| ScalarField::constant(0.5 + (i % 7) as f64 * 0.25)).collect();
        let tensor = FiveTensorField::new(upper, lower, comps)?;
        let values = tensor.eval(&p)?;
        for k in [-1.0, 0.0] {
            let got = lie_tensor(&u, &tensor, &Constants::default().with_k(k))?.eval(&p)?;
            let factor = if k == 0.0 { lower as f64 * amount } else { 0.0 };
            worst = max(got.iter().zip(&values).map(|(a, b)| (a - factor * b).abs()).chain([worst]));
        }
    }
    outcome(worst == 0.0, format!("max deviation {worst:.1e} (exact)"))
}

fn connection_suite() -> Result<Outcome> {
    let c = dimensional();
    let settings = FlowSettings::default();
    let mut rng = rng(7);
    let (mut metricity, mut g_drift, mut h_change) = (0.0f64, 0.0f64, 0.0f64);
    for (_, m) in presets() {
        for (_, frame) in standard_frames(&mut rng, &c) {
            let g = build_connection(&m, &c, &frame)?;
            for p in default_probes() {
                metricity = metricity.max(g.metricity_residual(&p)?);
            }
        }
        let g = build_connection(&m, &c, &Frame::canonical())?;
        for _ in 0..10 {
            let curve = random_curve(&mut rng);
            let (u0, v0) = (random_vector(&mut rng), random_vector(&mut rng));
            let u1 = transport(&u0, &curve, 0.0, 1.0, &g, &settings)?;
            let v1 = transport(&v0, &curve, 0.0, 1.0, &g, &settings)?;
            let (x0, x1) = (curve.point(0.0)?, curve.point(1.0)?);
            g_drift = g_drift.max(rel(g5(&u0, &v0, &m, &x0)?, g5(&u1, &v1, &m, &x1)?));
            h_change = h_change.max((h(&u1, &v1, &m, &c, &x1)? - h(&u0, &v0, &m, &c, &x0)?).abs());
        }
    }
    outcome(
        metricity <= 1e-10 && g_drift <= 1e-7 && h_change > 1e-3,
        format!("metricity {metricity:.2e} (tol 1e-10); g drift {g_drift:.2e} (tol 1e-7); largest h change {h_change:.3} (need > 1e-3)"),
    )
}

fn equivariance() -> Result<Outcome> {
    let c = dimensional();
    let settings = FlowSettings::default();
    let mut rng = rng(8);
    let n = unit_n(&c)?;
    let (mut class, mut bivector, mut fixed) = (0.0f64, 0.0f64, 0.0f64);
    for (_, m) in presets() {
        let g = build_connection(&m, &c, &Frame::canonical())?;
        for _ in 0..10 {
            let curve = random_curve(&mut rng);
            let u0 = random_vector(&mut rng);
            let u1 = transport(&u0, &curve, 0.0, 1.0, &g, &settings)?;
            let four = transport_four(&u0.class(), &curve, 0.0, 1.0, &m, &settings)?;
            class = class.max(rel_vec(&u1.class().0, &four.0));
            let moved = wedge(&u1, &n)?.components();
            let image = transport_four(&wedge(&u0, &n)?.components(), &curve, 0.0, 1.0, &m, &settings)?;
            bivector = bivector.max(rel_vec(&moved.0, &image.0));
            for e in [n, FiveVector::basis(FIFTH) * -2.5] {
                fixed = fixed.max((transport(&e, &curve, 0.0, 1.0, &g, &settings)? - e).max_abs());
            }
        }
    }
    outcome(
        class <= 1e-8 && bivector <= 1e-8 && fixed <= 1e-10,
        format!("class map {class:.2e}, bivector map {bivector:.2e} (tol 1e-8); E vectors and n {fixed:.2e} (tol 1e-10)"),
    )
}

fn bivector_identities() -> Result<Outcome> {
    let c = dimensional();
    let mut rng = rng(9);
    let n = unit_n(&c)?;
    let canonical = Frame::canonical();
    let (mut eq55, mut four) = (0.0f64, 0.0f64);
    for (_, m) in presets() {
        for p in &default_probes() {
            let hc = HContext { metric: &m, constants: c, frame: &canonical, at: *p };
            for _ in 0..5 {
                let (u, v) = (random_vector(&mut rng), random_vector(&mut rng));
                let expected = g5(&u, &v, &m, p)?;
                let projected = hc.h(&u, &v)? - hc.h(&n, &u)? * hc.h(&n, &v)? / hc.h(&n, &n)?;
                let inner = bivector_inner(&wedge(&u, &n)?, &wedge(&v, &n)?, &hc)?;
                eq55 = eq55.max(rel(expected, projected)).max(rel(expected, inner));
            }
        }
        for _ in 0..5 {
            let frame = if four == 0.0 { varying_standard_frame(&mut rng, &c) } else { random_standard_frame(&mut rng, &c) };
            for p in default_probes() {
                let basis = associated_four_basis(&frame, &m, &c, &p)?;
                let scale = basis.metric.abs().max().max(1.0);
                four = four.max((basis.metric_from_h - basis.metric).abs().max() / scale);
            }
        }
    }
    outcome(
        eq55 <= 1e-10 && four <= 1e-10,
        format!("projection identity {eq55:.2e} over 100 pairs per metric; four-basis metric {four:.2e} over 5 frames per metric (tol 1e-10)"),
    )
}

fn derivative_identities() -> Result<Outcome> {
    let c = dimensional();
    let mut rng = rng(10);
    let (mut eq58, mut eq61, mut eq65) = (0.0f64, 0.0f64, 0.0f64);
    for (_, m) in presets() {
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive, Flavor::RegularNormalized] {
            let frame = Frame::regular(flavor, &c)?;
            let g = build_connection(&m, &c, &frame)?;
            let x = x_form(&frame, &c)?;
            let v = in_regular(&random_field(&mut rng), flavor, &c);
            let w = in_regular(&random_field(&mut rng), flavor, &c);
            for p in default_probes() {
                let u = random_vector(&mut rng);
                let (lhs, rhs) = nabla_h(&u, &v, &w, &g, &p)?;
                eq58 = eq58.max(rel(lhs, rhs));
                let (lhs, rhs) = nabla_lambda(&u, &v, &g, &p)?;
                eq61 = eq61.max(rel(lhs, rhs));
                let lhs = covariant_derivative_form(&u, &x, &g, &p)?;
                let rhs = g_matrix(&frame, &m, &p)? * nalgebra::Vector5::from(u.0);
                eq65 = eq65.max(rel_vec(&lhs.0, rhs.as_slice()));
            }
        }
    }
    outcome(
        eq58.max(eq61).max(eq65) <= 1e-9,
        format!("metric-derivative {eq58:.2e}, parameter-rate {eq61:.2e}, x-form {eq65:.2e} (tol 1e-9)"),
    )
}

fn forms_identities() -> Result<Outcome> {
    let c = dimensional();
    let settings = FlowSettings::default();
    let mut rng = rng(11);
    let (mut conserved, mut commute, mut margin) = (0.0f64, 0.0f64, 0.0f64);
    for (_, m) in presets() {
        let canonical = Frame::canonical();
        let g = build_connection(&m, &c, &canonical)?;
        for _ in 0..5 {
            let curve = random_curve(&mut rng);
            let u0 = random_vector(&mut rng);
            let w0 = FiveForm(random_vector(&mut rng).0);
            let u1 = transport(&u0, &curve, 0.0, 1.0, &g, &settings)?;
            let w1 = transport_form(&w0, &curve, 0.0, 1.0, &g, &settings)?;
            conserved = conserved.max(rel(w0.contract(&u0), w1.contract(&u1)));
        }
        for flavor in [Flavor::RegularPassive, Flavor::RegularActive] {
            let frame = Frame::regular(flavor, &c)?;
            let g = build_connection(&m, &c, &frame)?;
            let u = in_regular(&random_field(&mut rng), flavor, &c);
            let (tg, th) = (theta_g_field(&u, &frame, &m), theta_h_field(&u, &frame, &m, &c));
            for p in default_probes() {
                let dir = random_vector(&mut rng);
                let du = covariant_derivative(&dir, &u, &g, &p)?;
                let lhs = covariant_derivative_form(&dir, &tg, &g, &p)?;
                commute = commute.max(rel_vec(&lhs.0, &theta_g(&du, &frame, &m, &p)?.0));
                let lhs = covariant_derivative_form(&dir, &th, &g, &p)?;
                margin = margin.max((lhs - theta_h(&du, &frame, &m, &c, &p)?).max_abs());
            }
        }
    }
    outcome(
        conserved <= 1e-8 && commute <= 1e-9 && margin > 1e-3,
        format!("contraction drift {conserved:.2e} (tol 1e-8); g-lowering commutation {commute:.2e} (tol 1e-9); h-lowering witness margin {margin:.3} (need > 1e-3)"),
    )
}

fn rescale_invariance() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    for name in ["minkowski", "conformal-exp", "diag-poly"] {
        let text = format!(r#"{{"metric": "{name}", "mode": "dimensional", "checks": ["rescale"]}}"#);
        let scenario = parse_scenario(&text).expect("scenario");
        let report = run_suite(&scenario, &RunOptions::default()).expect("rescale suite");
        for record in &report.checks {
            worst = worst.max(record.max_error);
            if !record.passed() {
                failed.push(format!("{name}: {}", record.name));
            }
        }
    }
    outcome(failed.is_empty(), format!("k in {{0.5, 2, 3}}: max relative change {worst:.2e} (tol 1e-7); failed {failed:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("operator theorem", operator_theorem),
        ("commutator equivalence", commutator_equivalence),
        ("coordinate-basis theorem", coordinate_basis),
        ("flow identities", flow_identities),
        ("Lie-derivative oracle", lie_oracle),
        ("k-distinction", k_distinction),
        ("connection suite", connection_suite),
        ("equivariance", equivariance),
        ("projection and four-basis identities", bivector_identities),
        ("derivative identities", derivative_identities),
        ("forms suite", forms_identities),
        ("unit-rescale invariance", rescale_invariance),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        all &= result.pass;
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{status}] {name}: {} ({:.1}s)", i + 1, result.detail, start.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
