#![allow(dead_code)]

use pentacalc::algebra::{FiveVector, FiveVectorField, Flavor, Frame, ParametrizedCurve, FIFTH};
use pentacalc::field::ScalarField;
use pentacalc::metric::{Constants, MetricField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn presets() -> Vec<(&'static str, MetricField)> {
    MetricField::PRESETS.iter().map(|n| (*n, MetricField::preset(n).expect("preset"))).collect()
}

pub fn dimensional() -> Constants {
    Constants::default().dimensional()
}

fn coeff(rng: &mut ChaCha8Rng) -> f64 {
    (rng.gen_range(-0.5..0.5) * 1000.0f64).round() / 1000.0
}

/// A random field mixing linear, quadratic and trigonometric terms.
pub fn random_scalar(rng: &mut ChaCha8Rng) -> ScalarField {
    let (i, j, k, l) = (rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..4));
    let src = format!(
        "{}*x{i} + {}*x{j}*x{k} + {}*sin(x{l}) + {}",
        coeff(rng),
        coeff(rng),
        coeff(rng),
        coeff(rng)
    );
    ScalarField::parse(&src).expect("random scalar")
}

pub fn random_field(rng: &mut ChaCha8Rng) -> FiveVectorField {
    FiveVectorField(std::array::from_fn(|_| random_scalar(rng)))
}

/// A random field whose four-part never vanishes, so its flow is defined everywhere.
pub fn random_flow_field(rng: &mut ChaCha8Rng) -> FiveVectorField {
    let mut u = random_field(rng);
    u.0[0] = ScalarField::parse(&format!("1.5 + {}*sin(x1)", coeff(rng))).expect("field");
    u
}

pub fn random_vector(rng: &mut ChaCha8Rng) -> FiveVector {
    FiveVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

/// A smooth random curve through a point near the origin, moving forward in `x0`.
pub fn random_curve(rng: &mut ChaCha8Rng) -> ParametrizedCurve {
    let path: [String; 4] = std::array::from_fn(|a| {
        let start = coeff(rng);
        if a == 0 {
            format!("{start} + t + {}*t^2", coeff(rng) * 0.4)
        } else {
            format!("{start} + {}*t + {}*sin(2*t)", coeff(rng), coeff(rng) * 0.5)
        }
    });
    ParametrizedCurve::parse([&path[0], &path[1], &path[2], &path[3]].map(|s| s.as_str()), coeff(rng))
        .expect("random curve")
}

/// A random standard frame: a constant transform of the canonical frame with `L^α_5 = 0`.
pub fn random_standard_frame(rng: &mut ChaCha8Rng, c: &Constants) -> Frame {
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
    Frame::canonical().transformed(&m, Flavor::Standard, c).expect("standard frame")
}

/// A position-dependent standard frame: `e_α = ∂_α + a·x^β ∂_γ + f·1`, `e₅ = (1 + x0²/4)·1`.
pub fn varying_standard_frame(rng: &mut ChaCha8Rng, c: &Constants) -> Frame {
    let mut l: [[ScalarField; 5]; 5] = std::array::from_fn(|r| {
        std::array::from_fn(|col| if r == col { ScalarField::one() } else { ScalarField::zero() })
    });
    l[1][0] = ScalarField::parse(&format!("{}*x2", coeff(rng) * 0.4)).expect("entry");
    l[2][3] = ScalarField::parse(&format!("{}*x0", coeff(rng) * 0.4)).expect("entry");
    for entry in &mut l[FIFTH][..4] {
        *entry = random_scalar(rng);
    }
    l[FIFTH][FIFTH] = ScalarField::parse("1 + 0.25*x0^2").expect("entry");
    Frame::from_matrix(l, Flavor::Standard, c).expect("varying frame")
}

/// Regular frames, a coordinate frame and two random standard frames.
pub fn standard_frames(rng: &mut ChaCha8Rng, c: &Constants) -> Vec<(String, Frame)> {
    let mut out: Vec<(String, Frame)> =
        [Flavor::RegularPassive, Flavor::RegularActive, Flavor::RegularNormalized]
            .into_iter()
            .map(|f| (f.name().to_string(), Frame::regular(f, c).expect("regular frame")))
            .collect();
    out.push(("coordinate".into(), Frame::coordinate([0.3, -0.2, 0.1, 0.5], c)));
    out.push(("constant-standard".into(), random_standard_frame(rng, c)));
    out.push(("varying-standard".into(), varying_standard_frame(rng, c)));
    out
}

/// Components of a canonical field in a regular frame built on the coordinate tetrad.
pub fn in_regular(u: &FiveVectorField, flavor: Flavor, c: &Constants) -> FiveVectorField {
    let mut v = u.clone();
    v.0[FIFTH] = u.0[FIFTH].scale(1.0 / flavor.e5_scale(c).expect("regular flavor"));
    v
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn rel_vec(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
