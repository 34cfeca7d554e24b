use nalgebra::Matrix4;

use super::{covariant_derivative, Connection};
use crate::algebra::{FiveVector, FiveVectorField, Flavor, FourVector, Frame, FIFTH};
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::metric::{g5, h, h_matrix, Constants, MetricField};

const E_TOL: f64 = 1e-12;

/// Everything `h` needs at one point, with vectors given in `frame`.
#[derive(Debug, Clone, Copy)]
pub struct HContext<'a> {
    pub metric: &'a MetricField,
    pub constants: Constants,
    pub frame: &'a Frame,
    pub at: Point,
}

impl HContext<'_> {
    pub fn h(&self, u: &FiveVector, v: &FiveVector) -> Result<f64> {
        let (uc, vc) = (self.frame.to_canonical(&self.at, u)?, self.frame.to_canonical(&self.at, v)?);
        h(&uc, &vc, self.metric, &self.constants, &self.at)
    }

    pub fn g(&self, u: &FiveVector, v: &FiveVector) -> Result<f64> {
        let (uc, vc) = (self.frame.to_canonical(&self.at, u)?, self.frame.to_canonical(&self.at, v)?);
        g5(&uc, &vc, self.metric, &self.at)
    }

    pub fn lambda(&self, u: &FiveVector) -> Result<f64> {
        Ok(self.frame.to_canonical(&self.at, u)?.lambda(&self.constants))
    }
}

/// `u ∧ e` with `e` proportional to the identity operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleBivector {
    pub representative: FiveVector,
    pub directional: FiveVector,
}

impl SimpleBivector {
    /// Nonzero components `u^α e⁵` of the bivector.
    pub fn components(&self) -> FourVector {
        FourVector(self.representative.differential().map(|u| u * self.directional.algebraic()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.components().max_abs() <= tol
    }

    /// Equality of bivector values, insensitive to the representative's algebraic part.
    pub fn approx_eq(&self, other: &SimpleBivector, tol: f64) -> bool {
        (self.components() - other.components()).max_abs() <= tol
    }
}

/// `u ∧ e`, in components of a standard frame.
pub fn wedge(u: &FiveVector, e: &FiveVector) -> Result<SimpleBivector> {
    let scale = e.max_abs();
    if scale == 0.0 || e.differential().iter().any(|c| c.abs() > E_TOL * scale) {
        return Err(Error::NotInE);
    }
    Ok(SimpleBivector { representative: *u, directional: *e })
}

/// `h(u, v) h(e, f) − h(u, f) h(e, v)` for `a = u ∧ e`, `b = v ∧ f`.
pub fn bivector_inner(a: &SimpleBivector, b: &SimpleBivector, ctx: &HContext) -> Result<f64> {
    let (u, e) = (&a.representative, &a.directional);
    let (v, f) = (&b.representative, &b.directional);
    Ok(ctx.h(u, v)? * ctx.h(e, f)? - ctx.h(u, f)? * ctx.h(e, v)?)
}

/// Canonical components of the unit vector `n` of normalized regular frames.
pub fn unit_n(c: &Constants) -> Result<FiveVector> {
    let scale = Flavor::RegularNormalized.e5_scale(c).ok_or(Error::UnsupportedFlavor("regular-normalized"))?;
    Ok(FiveVector::basis(FIFTH) * scale)
}

/// Four-vector basis associated with a standard frame at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FourBasis {
    /// Coordinate components of `E_α`.
    pub vectors: [FourVector; 4],
    /// `ξ^½ λ_{e₅}`.
    pub scale: f64,
    /// `h₅₅ h_αβ − h_α5 h_β5`.
    pub metric_from_h: Matrix4<f64>,
    /// `g(E_α, E_β)`.
    pub metric: Matrix4<f64>,
}

/// `E_α = ξ^½ λ_{e₅} · class(e_α)` at `p`.
pub fn associated_four_basis(frame: &Frame, m: &MetricField, c: &Constants, p: &Point) -> Result<FourBasis> {
    if !frame.is_standard() {
        return Err(Error::UnsupportedFlavor(frame.flavor().name()));
    }
    let kappa = c.kappa()?;
    let l = frame.matrix_at(p)?;
    let scale = kappa * l[(FIFTH, FIFTH)] / c.algebraic_coefficient();
    let vectors: [FourVector; 4] = std::array::from_fn(|a| FourVector(std::array::from_fn(|r| scale * l[(r, a)])));
    let hm = h_matrix(frame, m, c, p)?;
    let metric_from_h =
        Matrix4::from_fn(|a, b| hm[(FIFTH, FIFTH)] * hm[(a, b)] - hm[(a, FIFTH)] * hm[(b, FIFTH)]);
    let g = m.at(p)?;
    let metric = Matrix4::from_fn(|a, b| (vectors[a].0.iter().enumerate())
        .map(|(r, x)| (0..4).map(|s| g[(r, s)] * x * vectors[b].0[s]).sum::<f64>())
        .sum());
    Ok(FourBasis { vectors, scale, metric_from_h, metric })
}

impl FourBasis {
    /// `Γ^α_βμ = G^α_βμ + δ^α_β G⁵_5μ` from the five-connection in the same frame.
    pub fn four_connection(g: &Connection, p: &Point) -> Result<[[[f64; 4]; 4]; 4]> {
        let coeffs = g.coefficients_at(p)?;
        Ok(std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                std::array::from_fn(|mu| coeffs[a][b][mu] + if a == b { coeffs[FIFTH][FIFTH][mu] } else { 0.0 })
            })
        }))
    }
}

/// Derivative of a canonical scalar field along the differential part of `u`.
fn along(u: &FiveVector, f: &ScalarField, p: &Point) -> Result<f64> {
    let mut s = 0.0;
    for alpha in 0..4 {
        if u.0[alpha] != 0.0 {
            s += u.0[alpha] * f.partial(alpha).eval(p)?;
        }
    }
    Ok(s)
}

/// `({∇_U h}(v, w), ξ g(U, v) λ_w + ξ g(U, w) λ_v)` at `p`.
///
/// `direction`, `v` and `w` are in the connection's frame.
pub fn nabla_h(
    direction: &FiveVector,
    v: &FiveVectorField,
    w: &FiveVectorField,
    g: &Connection,
    p: &Point,
) -> Result<(f64, f64)> {
    let c = g.constants();
    let frame = g.frame();
    let ctx = HContext { metric: g.metric(), constants: *c, frame, at: *p };
    let (vc, wc) = (frame.field_to_canonical(v), frame.field_to_canonical(w));
    let b = c.algebraic_coefficient();
    let hvw = &g.metric().g_field(&vc.0, &wc.0) + &(&vc.0[FIFTH] * &wc.0[FIFTH]).scale(c.xi / (b * b));
    let uc = frame.to_canonical(p, direction)?;
    let (vp, wp) = (v.eval(p)?, w.eval(p)?);
    let dv = covariant_derivative(direction, v, g, p)?;
    let dw = covariant_derivative(direction, w, g, p)?;
    let lhs = along(&uc, &hvw, p)? - ctx.h(&dv, &wp)? - ctx.h(&vp, &dw)?;
    let rhs = c.xi * (ctx.g(direction, &vp)? * ctx.lambda(&wp)? + ctx.g(direction, &wp)? * ctx.lambda(&vp)?);
    Ok((lhs, rhs))
}

/// `(∂_u λ_v − λ_{∇_u v}, g(u, v))` at `p`, with `u` and `v` in the connection's frame.
pub fn nabla_lambda(u: &FiveVector, v: &FiveVectorField, g: &Connection, p: &Point) -> Result<(f64, f64)> {
    let c = g.constants();
    let frame = g.frame();
    let ctx = HContext { metric: g.metric(), constants: *c, frame, at: *p };
    let lambda_v = frame.field_to_canonical(v).0[FIFTH].scale(1.0 / c.algebraic_coefficient());
    let uc = frame.to_canonical(p, u)?;
    let dv = covariant_derivative(u, v, g, p)?;
    let lhs = along(&uc, &lambda_v, p)? - ctx.lambda(&dv)?;
    Ok((lhs, ctx.g(u, &v.eval(p)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::build_connection;
    use crate::metric::Mode;

    fn dimensional(xi: f64, varsigma: f64) -> Constants {
        Constants { xi, varsigma, k: -1.0, mode: Mode::Dimensional }
    }

    #[test]
    fn wedge_equivalence() {
        let e = FiveVector::basis(FIFTH) * 2.0;
        let u = FiveVector([1.0, 2.0, 0.0, -1.0, 0.5]);
        let a = wedge(&u, &e).unwrap();
        let b = wedge(&(u + e * 3.0), &e).unwrap();
        assert!(a.approx_eq(&b, 0.0));
        assert!(wedge(&(e * 7.0), &e).unwrap().is_zero(0.0));
        assert!(!a.approx_eq(&wedge(&FiveVector::basis(1), &e).unwrap(), 1e-12));
        assert_eq!(wedge(&u, &FiveVector::basis(0)), Err(Error::NotInE));
        assert_eq!(wedge(&u, &FiveVector::ZERO), Err(Error::NotInE));
    }

    #[test]
    fn bivector_inner_with_n() {
        let c = dimensional(1.0, 1.0);
        let m = MetricField::minkowski();
        let frame = Frame::canonical();
        let ctx = HContext { metric: &m, constants: c, frame: &frame, at: Point::ORIGIN };
        let n = unit_n(&c).unwrap();
        let a = wedge(&FiveVector([1.0, 0.0, 0.0, 0.0, 3.0]), &n).unwrap();
        let b = wedge(&FiveVector([1.0, 0.0, 0.0, 0.0, -2.0]), &n).unwrap();
        assert!((bivector_inner(&a, &b, &ctx).unwrap() - 1.0).abs() < 1e-14);
        let zero = wedge(&n, &n).unwrap();
        assert_eq!(bivector_inner(&zero, &b, &ctx).unwrap(), 0.0);
        let e2 = n * 2.0;
        let scaled = bivector_inner(&wedge(&a.representative, &e2).unwrap(), &wedge(&b.representative, &e2).unwrap(), &ctx);
        assert!((scaled.unwrap() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn four_basis_of_normalized_frame() {
        let c = dimensional(4.0, 2.0);
        let m = MetricField::minkowski();
        let frame = Frame::regular(Flavor::RegularNormalized, &c).unwrap();
        let basis = associated_four_basis(&frame, &m, &c, &Point::ORIGIN).unwrap();
        assert!((basis.scale - 1.0).abs() < 1e-15);
        assert!((basis.metric - crate::algebra::eta()).abs().max() < 1e-14);
        assert!((basis.metric_from_h - basis.metric).abs().max() < 1e-14);
    }

    #[test]
    fn nabla_lambda_examples() {
        let c = dimensional(1.0, 1.0);
        let m = MetricField::minkowski();
        let frame = Frame::regular(Flavor::RegularActive, &c).unwrap();
        let g = build_connection(&m, &c, &frame).unwrap();
        let e0 = FiveVectorField::constant([1.0, 0.0, 0.0, 0.0, 0.0]);
        let (lhs, rhs) = nabla_lambda(&FiveVector::basis(0), &e0, &g, &Point::ORIGIN).unwrap();
        assert_eq!((lhs, rhs), (1.0, 1.0));
        let (lhs, rhs) = nabla_lambda(&FiveVector::basis(FIFTH), &e0, &g, &Point::ORIGIN).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn nabla_h_on_curved_metric() {
        let c = dimensional(4.0, 3.0);
        let m = MetricField::preset("conformal-exp").unwrap();
        let g = build_connection(&m, &c, &Frame::canonical()).unwrap();
        let v = FiveVectorField::parse(["x1", "1", "sin(x0)", "0"], "x2 + 1").unwrap();
        let w = FiveVectorField::parse(["1", "x0*x3", "0", "x1"], "cos(x0)").unwrap();
        let u = FiveVector([0.4, -0.3, 1.0, 0.2, 0.7]);
        let (lhs, rhs) = nabla_h(&u, &v, &w, &g, &Point([0.2, 0.1, -0.4, 0.3])).unwrap();
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        assert!(rhs.abs() > 1e-3);
    }
}
