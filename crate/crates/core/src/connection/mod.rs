//! The five-vector connection, covariant derivatives and parallel transport.
//!
//! Coefficients `G^A_BC` are evaluated at points. The third index is the
//! differentiation direction; derivatives along a frame vector use only its
//! differential part, so `∇_e = 0` for every `e` proportional to the identity.

mod bivector;
mod rescale;

use std::sync::Arc;

use nalgebra::{Matrix4, Vector5};

use crate::algebra::{FiveVector, FiveVectorField, Flavor, FourVector, Frame, Mat5, ParametrizedCurve, FIFTH};
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::flow::{rk4, FlowSettings};
use crate::metric::{Constants, MetricField};

pub use bivector::{
    associated_four_basis, bivector_inner, nabla_h, nabla_lambda, unit_n, wedge, FourBasis, HContext, SimpleBivector,
};
pub use rescale::{rescale_constants, rescale_field, rescale_point};

/// `G[a][b][c] = G^a_bc`.
pub type Coefficients = [[[f64; 5]; 5]; 5];

/// Levi-Civita symbols `Γ[a][b][m] = Γ^a_bm` of `m` at `p`.
pub fn christoffel(m: &MetricField, p: &Point) -> Result<[[[f64; 4]; 4]; 4]> {
    let inv = m.inverse_at(p)?;
    let dg: [Matrix4<f64>; 4] = [m.derivative_at(p, 0)?, m.derivative_at(p, 1)?, m.derivative_at(p, 2)?, m.derivative_at(p, 3)?];
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for mu in b..4 {
                let s: f64 = (0..4)
                    .map(|n| inv[(a, n)] * (dg[b][(n, mu)] + dg[mu][(n, b)] - dg[n][(b, mu)]))
                    .sum();
                out[a][b][mu] = 0.5 * s;
                out[a][mu][b] = 0.5 * s;
            }
        }
    }
    Ok(out)
}

/// Coefficients in the passive regular coordinate frame.
fn canonical_coefficients(m: &MetricField, c: &Constants, p: &Point) -> Result<Coefficients> {
    let gamma = christoffel(m, p)?;
    let g = m.at(p)?;
    let mut out = [[[0.0; 5]; 5]; 5];
    for a in 0..4 {
        for b in 0..4 {
            for mu in 0..4 {
                out[a][b][mu] = gamma[a][b][mu];
            }
            out[FIFTH][a][b] = -c.varsigma * g[(a, b)];
        }
    }
    Ok(out)
}

/// `G′ = L⁻¹ G L L + L⁻¹ (D_F L) L^F_C`, with `dl[f]` the derivative of `L`
/// along the old frame's vector `e_f`.
fn transform_coefficients(g: &Coefficients, l: &Mat5, dl: &[Mat5; 5], at: &Point) -> Result<Coefficients> {
    let inv = l.try_inverse().ok_or(Error::SingularTransform { at: *at })?;
    let mut inner = [[[0.0; 5]; 5]; 5];
    for d in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                let mut s = 0.0;
                for f in 0..5 {
                    let lfc = l[(f, c)];
                    if lfc == 0.0 {
                        continue;
                    }
                    let mut t = dl[f][(d, b)];
                    for e in 0..5 {
                        t += g[d][e][f] * l[(e, b)];
                    }
                    s += t * lfc;
                }
                inner[d][b][c] = s;
            }
        }
    }
    let mut out = [[[0.0; 5]; 5]; 5];
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                out[a][b][c] = (0..5).map(|d| inv[(a, d)] * inner[d][b][c]).sum();
            }
        }
    }
    Ok(out)
}

/// Derivatives of `step` along each vector of `base`, differential parts only.
fn directional_derivatives(base: &Frame, step: &Frame, p: &Point) -> Result<[Mat5; 5]> {
    let partials: [Mat5; 4] =
        [step.derivative_at(p, 0)?, step.derivative_at(p, 1)?, step.derivative_at(p, 2)?, step.derivative_at(p, 3)?];
    let lb = base.matrix_at(p)?;
    Ok(std::array::from_fn(|f| (0..4).fold(Mat5::zeros(), |acc, alpha| acc + partials[alpha] * lb[(alpha, f)])))
}

#[derive(Debug, Clone)]
enum Kind {
    Built,
    Transformed { base: Arc<Connection>, step: Frame },
    Perturbed { base: Arc<Connection>, index: (usize, usize, usize), delta: f64 },
}

/// Connection coefficients in a frame, evaluated on demand.
#[derive(Debug, Clone)]
pub struct Connection {
    metric: MetricField,
    constants: Constants,
    frame: Frame,
    kind: Kind,
}

/// Builds the connection of `m` with coefficients in `frame`.
pub fn build_connection(m: &MetricField, c: &Constants, frame: &Frame) -> Result<Connection> {
    if !frame.is_standard() {
        return Err(Error::UnsupportedFlavor(frame.flavor().name()));
    }
    Ok(Connection { metric: m.clone(), constants: *c, frame: frame.clone(), kind: Kind::Built })
}

/// Re-expresses `g` in the frame `e′_A = e_B L^B_A`.
pub fn transform_connection(g: &Connection, l: [[ScalarField; 5]; 5], flavor: Flavor) -> Result<Connection> {
    let step = Frame::from_matrix(l.clone(), Flavor::General, &g.constants)?;
    let frame = g.frame.transformed(&l, flavor, &g.constants)?;
    Ok(Connection {
        metric: g.metric.clone(),
        constants: g.constants,
        frame,
        kind: Kind::Transformed { base: Arc::new(g.clone()), step },
    })
}

impl Connection {
    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// A copy with `G^a_bc` shifted by `delta` everywhere.
    pub fn perturbed(&self, index: (usize, usize, usize), delta: f64) -> Connection {
        Connection { kind: Kind::Perturbed { base: Arc::new(self.clone()), index, delta }, ..self.clone() }
    }

    pub fn coefficients_at(&self, p: &Point) -> Result<Coefficients> {
        match &self.kind {
            Kind::Built => {
                let canonical = canonical_coefficients(&self.metric, &self.constants, p)?;
                let dl = directional_derivatives(&Frame::canonical(), &self.frame, p)?;
                transform_coefficients(&canonical, &self.frame.matrix_at(p)?, &dl, p)
            }
            Kind::Transformed { base, step } => {
                let g = base.coefficients_at(p)?;
                let dl = directional_derivatives(&base.frame, step, p)?;
                transform_coefficients(&g, &step.matrix_at(p)?, &dl, p)
            }
            Kind::Perturbed { base, index: (a, b, c), delta } => {
                let mut g = base.coefficients_at(p)?;
                g[*a][*b][*c] += delta;
                Ok(g)
            }
        }
    }

    /// Largest `|∂_C g_AB − g_DB G^D_AC − g_AD G^D_BC|` at `p`.
    pub fn metricity_residual(&self, p: &Point) -> Result<f64> {
        let l = self.frame.matrix_at(p)?;
        let g0 = crate::metric::g_canonical(&self.metric, p)?;
        let gf = l.transpose() * g0 * l;
        let dl = directional_derivatives(&self.frame, &self.frame, p)?;
        let mut dg0 = [Mat5::zeros(); 4];
        for (alpha, d) in dg0.iter_mut().enumerate() {
            d.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.metric.derivative_at(p, alpha)?);
        }
        let g = self.coefficients_at(p)?;
        let mut worst = 0.0f64;
        for c in 0..5 {
            let dg_c = (0..4).fold(Mat5::zeros(), |acc, alpha| acc + dg0[alpha] * l[(alpha, c)]);
            let d = dl[c].transpose() * g0 * l + l.transpose() * dg_c * l + l.transpose() * g0 * dl[c];
            for a in 0..5 {
                for b in 0..5 {
                    let s: f64 = (0..5).map(|e| gf[(e, b)] * g[e][a][c] + gf[(a, e)] * g[e][b][c]).sum();
                    worst = worst.max((d[(a, b)] - s).abs());
                }
            }
        }
        Ok(worst)
    }

    /// `e_c(f)` at `p` using the differential part of the frame vector with matrix `l`.
    pub(crate) fn frame_derivative(&self, l: &Mat5, f: &ScalarField, c: usize, p: &Point) -> Result<f64> {
        let mut s = 0.0;
        for alpha in 0..4 {
            let w = l[(alpha, c)];
            if w != 0.0 {
                s += w * f.partial(alpha).eval(p)?;
            }
        }
        Ok(s)
    }
}

/// `(∇_u v)^A = u^C (e_C(v^A) + G^A_BC v^B)` at `p`, with `u` and `v` in the connection's frame.
///
/// A four-vector direction is passed with a zero fifth component.
pub fn covariant_derivative(u: &FiveVector, v: &FiveVectorField, g: &Connection, p: &Point) -> Result<FiveVector> {
    let coeffs = g.coefficients_at(p)?;
    let l = g.frame.matrix_at(p)?;
    let vp = v.eval(p)?;
    let mut out = [0.0; 5];
    for (a, o) in out.iter_mut().enumerate() {
        for c in 0..5 {
            if u.0[c] == 0.0 {
                continue;
            }
            let mut t = g.frame_derivative(&l, &v.0[a], c, p)?;
            for b in 0..5 {
                t += coeffs[a][b][c] * vp.0[b];
            }
            *o += u.0[c] * t;
        }
    }
    Ok(FiveVector(out))
}

/// Frame components of the curve's differential direction at `t`.
fn frame_direction(g: &Connection, curve: &ParametrizedCurve, t: f64) -> Result<(Point, Vector5<f64>)> {
    let x = curve.point(t)?;
    let v = curve.tangent(t)?;
    let inv = g.frame.inverse_at(&x)?;
    Ok((x, inv * Vector5::new(v[0], v[1], v[2], v[3], 0.0)))
}

/// Parallel transport of `v0` (frame components) along `curve` from `t0` to `t1`.
pub fn transport(
    v0: &FiveVector,
    curve: &ParametrizedCurve,
    t0: f64,
    t1: f64,
    g: &Connection,
    s: &FlowSettings,
) -> Result<FiveVector> {
    if t0 == t1 {
        return Ok(*v0);
    }
    let out = rk4(v0.0, t0, t1, s.steps_for(t1 - t0), |t, u| {
        let (x, dir) = frame_direction(g, curve, t)?;
        let coeffs = g.coefficients_at(&x)?;
        let mut du = [0.0; 5];
        for (a, d) in du.iter_mut().enumerate() {
            for b in 0..5 {
                for c in 0..5 {
                    *d -= coeffs[a][b][c] * u[b] * dir[c];
                }
            }
        }
        Ok(du)
    })?;
    Ok(FiveVector(out))
}

/// Levi-Civita transport of coordinate components along `curve`.
pub fn transport_four(
    v0: &FourVector,
    curve: &ParametrizedCurve,
    t0: f64,
    t1: f64,
    m: &MetricField,
    s: &FlowSettings,
) -> Result<FourVector> {
    if t0 == t1 {
        return Ok(*v0);
    }
    let out = rk4(v0.0, t0, t1, s.steps_for(t1 - t0), |t, u| {
        let x = curve.point(t)?;
        let dir = curve.tangent(t)?;
        let gamma = christoffel(m, &x)?;
        Ok(std::array::from_fn(|a| {
            let mut d = 0.0;
            for b in 0..4 {
                for mu in 0..4 {
                    d -= gamma[a][b][mu] * u[b] * dir[mu];
                }
            }
            d
        }))
    })?;
    Ok(FourVector(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Mode;

    fn conformal() -> MetricField {
        MetricField::preset("conformal-exp").unwrap()
    }

    #[test]
    fn christoffel_examples() {
        let p = Point([0.3, 0.1, -0.2, 0.5]);
        let flat = christoffel(&MetricField::minkowski(), &p).unwrap();
        assert!(flat.iter().flatten().flatten().all(|v| *v == 0.0));
        let g = christoffel(&conformal(), &p).unwrap();
        assert!((g[1][0][1] - 1.0).abs() < 1e-14);
        assert!((g[1][1][0] - 1.0).abs() < 1e-14);
        assert!((g[0][1][1] - (0.6f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn canonical_flavor_table() {
        let c = Constants::default();
        let p = Point([0.1, 0.2, 0.3, 0.4]);
        let m = MetricField::minkowski();
        let passive = build_connection(&m, &c, &Frame::canonical()).unwrap().coefficients_at(&p).unwrap();
        assert_eq!(passive[FIFTH][0][0], -1.0);
        assert_eq!(passive[FIFTH][1][1], 1.0);
        let dim = Constants { varsigma: 2.0, xi: 4.0, mode: Mode::Dimensional, ..c };
        for (flavor, factor) in [(Flavor::RegularPassive, -2.0), (Flavor::RegularActive, -1.0), (Flavor::RegularNormalized, -2.0)] {
            let frame = Frame::regular(flavor, &dim).unwrap();
            let g = build_connection(&m, &dim, &frame).unwrap().coefficients_at(&p).unwrap();
            assert!((g[FIFTH][0][0] - factor).abs() < 1e-14, "{flavor:?}");
            for a in 0..5 {
                for b in 0..5 {
                    assert_eq!(g[a][b][FIFTH], 0.0);
                }
            }
            for alpha in 0..4 {
                for mu in 0..4 {
                    assert_eq!(g[alpha][FIFTH][mu], 0.0);
                    assert_eq!(g[FIFTH][FIFTH][mu], 0.0);
                }
            }
        }
    }

    #[test]
    fn transform_identity_and_composition() {
        let c = Constants::default();
        let p = Point([0.2, -0.3, 0.1, 0.4]);
        let base = build_connection(&conformal(), &c, &Frame::canonical()).unwrap();
        let id = Frame::canonical().entries().clone();
        let same = transform_connection(&base, id, Flavor::RegularPassive).unwrap();
        assert_eq!(same.coefficients_at(&p).unwrap(), base.coefficients_at(&p).unwrap());
        let mut l = Frame::canonical().entries().clone();
        l[1][1] = ScalarField::parse("1 + 0.5*x0^2").unwrap();
        l[FIFTH][2] = ScalarField::parse("x1").unwrap();
        let stepped = transform_connection(&base, l, Flavor::Standard).unwrap();
        let direct = build_connection(&conformal(), &c, stepped.frame()).unwrap();
        let (a, b) = (stepped.coefficients_at(&p).unwrap(), direct.coefficients_at(&p).unwrap());
        for ((x, y), _) in a.iter().flatten().flatten().zip(b.iter().flatten().flatten()).zip(0..) {
            assert!((x - y).abs() < 1e-13);
        }
        assert!(stepped.metricity_residual(&p).unwrap() < 1e-12);
    }

    #[test]
    fn covariant_derivative_examples() {
        let c = Constants::default();
        let p = Point([0.1, 0.0, 0.0, 0.0]);
        let m = MetricField::minkowski();
        let active = build_connection(&m, &c, &Frame::regular(Flavor::RegularActive, &c).unwrap()).unwrap();
        let e0 = FiveVectorField::constant([1.0, 0.0, 0.0, 0.0, 0.0]);
        let d = covariant_derivative(&FiveVector::basis(0), &e0, &active, &p).unwrap();
        assert_eq!(d, FiveVector([0.0, 0.0, 0.0, 0.0, -1.0]));
        let along_e5 = covariant_derivative(&FiveVector::basis(FIFTH), &e0, &active, &p).unwrap();
        assert_eq!(along_e5, FiveVector::ZERO);
    }

    #[test]
    fn transport_examples() {
        let c = Constants::default();
        let m = MetricField::minkowski();
        let active = build_connection(&m, &c, &Frame::regular(Flavor::RegularActive, &c).unwrap()).unwrap();
        let line = ParametrizedCurve::parse(["t", "0", "0", "0"], 0.0).unwrap();
        let s = FlowSettings::default();
        let out = transport(&FiveVector::basis(0), &line, 0.0, 1.5, &active, &s).unwrap();
        assert!((out - FiveVector([1.0, 0.0, 0.0, 0.0, 1.5])).max_abs() < 1e-12);
        let curved = build_connection(&conformal(), &c, &Frame::canonical()).unwrap();
        let wiggle = ParametrizedCurve::parse(["t", "sin(t)", "t^2", "0"], 0.0).unwrap();
        let e = FiveVector([0.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(transport(&e, &wiggle, 0.0, 1.0, &curved, &s).unwrap(), e);
    }
}
