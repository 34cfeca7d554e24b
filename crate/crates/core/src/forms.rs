//! Five-vector 1-forms and p-forms, index maps built from `g` and `h`, and form transport.
//!
//! Components are covariant in the dual of the passive regular coordinate frame
//! unless a function states otherwise; frame duals are reached with
//! [`FiveForm::to_frame`] and [`FiveForm::from_frame`].

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{RowVector5, Vector5};

use crate::algebra::{vector_ops, FiveVector, FiveVectorField, Frame, Mat5, ParametrizedCurve, FIFTH};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::flow::{rk4, FlowSettings};
use crate::metric::{g_matrix, h_matrix, Constants, MetricField};

/// Tolerance for deciding that a form has no `ȷ̃` part.
const RAISE_TOL: f64 = 1e-12;

/// Components `w_A` of a 1-form at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveForm(pub [f64; 5]);

vector_ops!(FiveForm, 5);

impl FiveForm {
    pub const ZERO: FiveForm = FiveForm([0.0; 5]);

    pub fn basis(a: usize) -> FiveForm {
        let mut w = [0.0; 5];
        w[a] = 1.0;
        FiveForm(w)
    }

    /// The form dual to the identity operator of the passive regular frame.
    pub fn jtilde() -> FiveForm {
        FiveForm::basis(FIFTH)
    }

    pub fn contract(&self, v: &FiveVector) -> f64 {
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    /// `(w^Z̃, w^Ẽ)`: the part annihilating identity-proportional vectors and the `ȷ̃` part.
    pub fn decompose(&self) -> (FiveForm, FiveForm) {
        let mut z = *self;
        z.0[FIFTH] = 0.0;
        (z, FiveForm::jtilde() * self.0[FIFTH])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Components in the dual of `frame`: `w′_A = w_B L^B_A`.
    pub fn to_frame(&self, frame: &Frame, p: &Point) -> Result<FiveForm> {
        Ok(FiveForm((RowVector5::from(self.0) * frame.matrix_at(p)?).into()))
    }

    /// Canonical components of a form given in the dual of `frame`.
    pub fn from_frame(&self, frame: &Frame, p: &Point) -> Result<FiveForm> {
        Ok(FiveForm((RowVector5::from(self.0) * frame.inverse_at(p)?).into()))
    }
}

/// A 1-form field with components in the dual of some frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FiveFormField(pub [ScalarField; 5]);

impl FiveFormField {
    pub fn constant(w: [f64; 5]) -> FiveFormField {
        FiveFormField(w.map(ScalarField::constant))
    }

    pub fn parse(components: [&str; 5]) -> Result<FiveFormField> {
        let mut out = Vec::with_capacity(5);
        for src in components {
            out.push(ScalarField::parse(src)?);
        }
        Ok(FiveFormField(out.try_into().expect("five components")))
    }

    pub fn jtilde() -> FiveFormField {
        FiveFormField::constant(FiveForm::jtilde().0)
    }

    pub fn eval(&self, p: &Point) -> Result<FiveForm> {
        let mut w = [0.0; 5];
        for (o, f) in w.iter_mut().zip(&self.0) {
            *o = f.eval(p)?;
        }
        Ok(FiveForm(w))
    }

    pub fn decompose(&self) -> (FiveFormField, FiveFormField) {
        let mut z = self.clone();
        z.0[FIFTH] = ScalarField::zero();
        let mut e = FiveFormField::constant([0.0; 5]);
        e.0[FIFTH] = self.0[FIFTH].clone();
        (z, e)
    }

    /// Components in the dual of `frame`, for a field given canonically.
    pub fn to_frame(&self, frame: &Frame) -> FiveFormField {
        let l = frame.entries();
        FiveFormField(std::array::from_fn(|a| {
            let column: Vec<ScalarField> = (0..5).map(|r| l[r][a].clone()).collect();
            ScalarField::dot(&self.0, &column)
        }))
    }
}

/// `⟨w, v⟩ = w_A v^A`.
pub fn contract(w: &FiveFormField, v: &FiveVectorField) -> ScalarField {
    ScalarField::dot(&w.0, &v.0)
}

pub fn decompose_form(w: &FiveForm) -> (FiveForm, FiveForm) {
    w.decompose()
}

/// Canonical components of the dual basis `õ^A` of `frame` at `p`.
pub fn dual_basis(frame: &Frame, p: &Point) -> Result<[FiveForm; 5]> {
    let inv = frame.inverse_at(p)?;
    Ok(std::array::from_fn(|a| FiveForm(std::array::from_fn(|b| inv[(a, b)]))))
}

fn lower(m: &Mat5, u: &FiveVector) -> FiveForm {
    FiveForm((m * Vector5::from(u.0)).into())
}

/// `ϑ_g(u)` with `u` and the result in `frame` and its dual.
pub fn theta_g(u: &FiveVector, frame: &Frame, m: &MetricField, p: &Point) -> Result<FiveForm> {
    Ok(lower(&g_matrix(frame, m, p)?, u))
}

/// `ϑ_h(u)` with `u` and the result in `frame` and its dual.
pub fn theta_h(u: &FiveVector, frame: &Frame, m: &MetricField, c: &Constants, p: &Point) -> Result<FiveForm> {
    Ok(lower(&h_matrix(frame, m, c, p)?, u))
}

pub fn theta_h_inverse(w: &FiveForm, frame: &Frame, m: &MetricField, c: &Constants, p: &Point) -> Result<FiveVector> {
    let inv = h_matrix(frame, m, c, p)?.try_inverse().ok_or(Error::SingularMetric { at: *p })?;
    Ok(FiveVector((inv * Vector5::from(w.0)).into()))
}

/// The differential vector `u` with `ϑ_g(u) = w`, defined only for forms without a `ȷ̃` part.
pub fn raise_with_g(w: &FiveForm, frame: &Frame, m: &MetricField, p: &Point) -> Result<FiveVector> {
    let wc = w.from_frame(frame, p)?;
    if wc.0[FIFTH].abs() > RAISE_TOL * wc.max_abs().max(1.0) {
        return Err(Error::RaiseOutsideZ(wc.0[FIFTH]));
    }
    let ginv = m.inverse_at(p)?;
    let mut u = [0.0; 5];
    for a in 0..4 {
        u[a] = (0..4).map(|b| ginv[(a, b)] * wc.0[b]).sum();
    }
    frame.from_canonical(p, &FiveVector(u))
}

/// `ϑ_g(u)` as a field, with `u` and the result in `frame` and its dual.
pub fn theta_g_field(u: &FiveVectorField, frame: &Frame, m: &MetricField) -> FiveFormField {
    let uc = frame.field_to_canonical(u);
    let mut w = FiveFormField::constant([0.0; 5]);
    for a in 0..4 {
        let row: Vec<ScalarField> = (0..4).map(|b| m.component(a, b).clone()).collect();
        w.0[a] = ScalarField::dot(&row, &uc.0[..4]);
    }
    w.to_frame(frame)
}

/// `ϑ_h(u)` as a field, with `u` and the result in `frame` and its dual.
pub fn theta_h_field(u: &FiveVectorField, frame: &Frame, m: &MetricField, c: &Constants) -> FiveFormField {
    let uc = frame.field_to_canonical(u);
    let mut w = theta_g_field(&uc, &Frame::canonical(), m);
    let b = c.algebraic_coefficient();
    w.0[FIFTH] = uc.0[FIFTH].scale(c.xi / (b * b));
    w.to_frame(frame)
}

/// `(∇_u w)_B = u^C (e_C(w_B) − G^A_BC w_A)` at `p`, in the connection's frame.
pub fn covariant_derivative_form(u: &FiveVector, w: &FiveFormField, g: &Connection, p: &Point) -> Result<FiveForm> {
    let coeffs = g.coefficients_at(p)?;
    let l = g.frame().matrix_at(p)?;
    let wp = w.eval(p)?;
    let mut out = [0.0; 5];
    for (b, o) in out.iter_mut().enumerate() {
        for c in 0..5 {
            if u.0[c] == 0.0 {
                continue;
            }
            let mut t = g.frame_derivative(&l, &w.0[b], c, p)?;
            for a in 0..5 {
                t -= coeffs[a][b][c] * wp.0[a];
            }
            *o += u.0[c] * t;
        }
    }
    Ok(FiveForm(out))
}

/// Parallel transport of form components (connection frame dual) along `curve`.
pub fn transport_form(
    w0: &FiveForm,
    curve: &ParametrizedCurve,
    t0: f64,
    t1: f64,
    g: &Connection,
    s: &FlowSettings,
) -> Result<FiveForm> {
    if t0 == t1 {
        return Ok(*w0);
    }
    let out = rk4(w0.0, t0, t1, s.steps_for(t1 - t0), |t, w| {
        let x = curve.point(t)?;
        let v = curve.tangent(t)?;
        let dir = g.frame().inverse_at(&x)? * Vector5::new(v[0], v[1], v[2], v[3], 0.0);
        let coeffs = g.coefficients_at(&x)?;
        Ok(std::array::from_fn(|a| {
            let mut d = 0.0;
            for b in 0..5 {
                for c in 0..5 {
                    d += coeffs[b][a][c] * w[b] * dir[c];
                }
            }
            d
        }))
    })?;
    Ok(FiveForm(out))
}

/// `x̃ = ς⁻¹ ȷ̃`, the fifth dual form of the active regular frame, in the dual of `frame`.
pub fn x_form(frame: &Frame, c: &Constants) -> Result<FiveFormField> {
    if !frame.is_regular() {
        return Err(Error::FrameNotRegular);
    }
    let mut x = FiveFormField::constant([0.0; 5]);
    x.0[FIFTH] = ScalarField::constant(1.0 / c.varsigma);
    Ok(x.to_frame(frame))
}

/// A p-form with one component per increasing index set, keyed by bitmask.
///
/// Bit `i` stands for index `i`, with bit 4 the algebraic index.
#[derive(Debug, Clone, PartialEq)]
pub struct PFormField {
    degree: usize,
    comps: Vec<ScalarField>,
}

impl PFormField {
    pub fn zero(degree: usize) -> Result<PFormField> {
        if degree > 5 {
            return Err(Error::DegreeOverflow { p: degree, q: 0 });
        }
        Ok(PFormField { degree, comps: vec![ScalarField::zero(); 32] })
    }

    pub fn scalar(f: ScalarField) -> PFormField {
        let mut out = PFormField::zero(0).expect("degree 0");
        out.comps[0] = f;
        out
    }

    pub fn from_one_form(w: &FiveFormField) -> PFormField {
        let mut out = PFormField::zero(1).expect("degree 1");
        for (a, f) in w.0.iter().enumerate() {
            out.comps[1 << a] = f.clone();
        }
        out
    }

    /// `õ^{a1} ∧ … ∧ õ^{ap}` for the indices in `mask`.
    pub fn basis(mask: u8) -> PFormField {
        let mut out = PFormField::zero(mask.count_ones() as usize).expect("at most five bits");
        out.comps[mask as usize & 31] = ScalarField::one();
        out
    }

    pub fn jtilde() -> PFormField {
        PFormField::basis(1 << FIFTH)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn component(&self, mask: u8) -> &ScalarField {
        &self.comps[mask as usize & 31]
    }

    pub fn set_component(&mut self, mask: u8, f: ScalarField) {
        assert_eq!(mask.count_ones() as usize, self.degree, "mask degree");
        self.comps[mask as usize] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ScalarField::is_zero)
    }

    pub fn add(&self, other: &PFormField) -> Result<PFormField> {
        if self.degree != other.degree {
            return Err(Error::DegreeOverflow { p: self.degree, q: other.degree });
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        Ok(PFormField { degree: self.degree, comps })
    }

    pub fn scale(&self, s: f64) -> PFormField {
        PFormField { degree: self.degree, comps: self.comps.iter().map(|f| f.scale(s)).collect() }
    }

    /// `(w^Z̃, w^Ẽ)`: components without and with the algebraic index.
    pub fn decompose(&self) -> (PFormField, PFormField) {
        let bit = 1usize << FIFTH;
        let mut z = self.clone();
        let mut e = self.clone();
        for mask in 0..32 {
            if mask & bit == 0 {
                e.comps[mask] = ScalarField::zero();
            } else {
                z.comps[mask] = ScalarField::zero();
            }
        }
        (z, e)
    }

    /// `(w^Z̃, a)` with `w = w^Z̃ + a ∧ ȷ̃`; `a` is absent for 0-forms.
    pub fn split_jtilde(&self) -> (PFormField, Option<PFormField>) {
        let (z, e) = self.decompose();
        if self.degree == 0 {
            return (z, None);
        }
        let bit = 1usize << FIFTH;
        let mut a = PFormField::zero(self.degree - 1).expect("lower degree");
        for mask in 0..32 {
            if mask & bit != 0 {
                a.comps[mask & !bit] = e.comps[mask].clone();
            }
        }
        (z, Some(a))
    }
}

/// Sign of merging the sorted index sets `a` and `b`, or `None` if they overlap.
fn merge_sign(a: usize, b: usize) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let inversions: u32 = (0..5).filter(|i| a & (1 << i) != 0).map(|i| (b & ((1 << i) - 1)).count_ones()).sum();
    Some(if inversions.is_multiple_of(2) { 1.0 } else { -1.0 })
}

/// Exterior product with the determinant normalization.
pub fn wedge_forms(a: &PFormField, b: &PFormField) -> Result<PFormField> {
    if a.degree + b.degree > 5 {
        return Err(Error::DegreeOverflow { p: a.degree, q: b.degree });
    }
    let mut out = PFormField::zero(a.degree + b.degree)?;
    for (i, fa) in a.comps.iter().enumerate() {
        if fa.is_zero() {
            continue;
        }
        for (j, fb) in b.comps.iter().enumerate() {
            if fb.is_zero() {
                continue;
            }
            if let Some(sign) = merge_sign(i, j) {
                out.comps[i | j] = &out.comps[i | j] + &(fa * fb).scale(sign);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;
    use crate::connection::build_connection;
    use crate::metric::Mode;

    #[test]
    fn contraction_examples() {
        assert_eq!(FiveForm::basis(0).contract(&FiveVector::basis(0)), 1.0);
        assert_eq!(FiveForm::basis(0).contract(&FiveVector::basis(1)), 0.0);
        assert_eq!(FiveForm::jtilde().contract(&FiveVector::basis(FIFTH)), 1.0);
        let w = FiveFormField::constant([1.0, 2.0, 0.0, 0.0, 3.0]);
        let v = FiveVectorField::constant([1.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(contract(&w, &v).as_const(), Some(6.0));
    }

    #[test]
    fn decomposition_examples() {
        let w = FiveForm::basis(0) + FiveForm::jtilde() * 2.0;
        assert_eq!(decompose_form(&w), (FiveForm::basis(0), FiveForm::jtilde() * 2.0));
        let c = Constants::default();
        let frame = Frame::regular(Flavor::RegularActive, &c).unwrap();
        for form in dual_basis(&frame, &Point::ORIGIN).unwrap().iter().take(4) {
            assert_eq!(form.decompose().1, FiveForm::ZERO);
        }
    }

    #[test]
    fn theta_examples() {
        let m = MetricField::minkowski();
        let frame = Frame::canonical();
        let c = Constants::default();
        let p = Point::ORIGIN;
        let u = FiveVector([1.0, 2.0, 0.0, 0.0, 9.0]);
        assert_eq!(theta_g(&u, &frame, &m, &p).unwrap(), FiveForm([1.0, -2.0, 0.0, 0.0, 0.0]));
        assert_eq!(theta_g(&FiveVector::basis(FIFTH), &frame, &m, &p).unwrap(), FiveForm::ZERO);
        let v = FiveVector([1.0, 2.0, 0.0, 0.0, 3.0]);
        let w = theta_h(&v, &frame, &m, &c, &p).unwrap();
        assert_eq!(w, FiveForm([1.0, -2.0, 0.0, 0.0, 3.0]));
        assert_eq!(theta_h_inverse(&w, &frame, &m, &c, &p).unwrap(), v);
        let raised = raise_with_g(&FiveForm::basis(0), &frame, &m, &p).unwrap();
        assert_eq!(raised, FiveVector::basis(0));
        assert!(matches!(raise_with_g(&FiveForm::jtilde(), &frame, &m, &p), Err(Error::RaiseOutsideZ(_))));
    }

    #[test]
    fn x_form_examples() {
        let c = Constants { varsigma: 2.0, mode: Mode::Dimensional, ..Constants::default() };
        let active = Frame::regular(Flavor::RegularActive, &c).unwrap();
        let x = x_form(&active, &c).unwrap();
        assert_eq!(x.eval(&Point::ORIGIN).unwrap(), FiveForm::jtilde());
        let v = FiveVector([9.0, 9.0, 9.0, 9.0, 2.0]);
        assert_eq!(x.eval(&Point::ORIGIN).unwrap().contract(&v), active.lambda(&v, &c).unwrap());
        let unit = Constants::default();
        assert_eq!(x_form(&Frame::canonical(), &unit).unwrap(), FiveFormField::jtilde());
        assert_eq!(x_form(&Frame::coordinate([0.0; 4], &unit), &unit), Err(Error::FrameNotRegular));
    }

    #[test]
    fn x_form_derivative_is_g() {
        let c = Constants { varsigma: 1.5, xi: 2.0, mode: Mode::Dimensional, k: -1.0 };
        let m = MetricField::preset("conformal-exp").unwrap();
        let frame = Frame::regular(Flavor::RegularNormalized, &c).unwrap();
        let g = build_connection(&m, &c, &frame).unwrap();
        let x = x_form(&frame, &c).unwrap();
        let p = Point([0.3, -0.1, 0.2, 0.4]);
        let u = FiveVector([0.5, 1.0, -0.2, 0.3, 0.8]);
        let lhs = covariant_derivative_form(&u, &x, &g, &p).unwrap();
        let rhs = theta_g(&u, &frame, &m, &p).unwrap();
        assert!((lhs - rhs).max_abs() < 1e-12);
    }

    #[test]
    fn form_transport_breaks_jtilde_line() {
        let c = Constants::default();
        let m = MetricField::minkowski();
        let g = build_connection(&m, &c, &Frame::regular(Flavor::RegularActive, &c).unwrap()).unwrap();
        let line = ParametrizedCurve::parse(["t", "0", "0", "0"], 0.0).unwrap();
        let w = transport_form(&FiveForm::jtilde(), &line, 0.0, 1.0, &g, &FlowSettings::default()).unwrap();
        assert!((w - FiveForm([-1.0, 0.0, 0.0, 0.0, 1.0])).max_abs() < 1e-12);
    }

    #[test]
    fn wedge_examples() {
        let o = |a: usize| PFormField::basis(1 << a);
        assert!(wedge_forms(&o(0), &o(0)).unwrap().is_zero());
        let a = wedge_forms(&o(0), &PFormField::jtilde()).unwrap();
        let b = wedge_forms(&PFormField::jtilde(), &o(0)).unwrap();
        assert_eq!(a, b.scale(-1.0));
        let mut top = o(0);
        for i in 1..5 {
            top = wedge_forms(&top, &o(i)).unwrap();
        }
        assert_eq!(top.component(31).as_const(), Some(1.0));
        assert_eq!(top.decompose().0, PFormField::zero(5).unwrap());
        assert_eq!(wedge_forms(&top, &o(0)), Err(Error::DegreeOverflow { p: 5, q: 1 }));
    }

    #[test]
    fn split_reconstructs() {
        let mut w = PFormField::zero(2).unwrap();
        w.set_component(0b00011, ScalarField::coord(0));
        w.set_component(0b10010, ScalarField::parse("x1 + 2").unwrap());
        let (z, a) = w.split_jtilde();
        let rebuilt = z.add(&wedge_forms(&a.unwrap(), &PFormField::jtilde()).unwrap()).unwrap();
        assert_eq!(rebuilt, w);
    }
}
