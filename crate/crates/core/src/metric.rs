//! Space-time metric, the degenerate five-vector products and the nondegenerate `h`.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::algebra::{Frame, FiveVector, FourVector, Mat5, ParametrizedCurve, FIFTH};
use crate::error::{Error, Result};
use crate::field::{default_probes, Point, ScalarField};

/// How a curve parameter enters the algebraic part of its five-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Algebraic coefficient 1.
    Dimensionless,
    /// Algebraic coefficient ς.
    Dimensional,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Dimensionless => "dimensionless",
            Mode::Dimensional => "dimensional",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub xi: f64,
    pub varsigma: f64,
    /// Lie-derivative contraction parameter.
    pub k: f64,
    pub mode: Mode,
}

impl Default for Constants {
    fn default() -> Constants {
        Constants { xi: 1.0, varsigma: 1.0, k: -1.0, mode: Mode::Dimensionless }
    }
}

impl Constants {
    pub fn new(xi: f64, varsigma: f64, k: f64, mode: Mode) -> Result<Constants> {
        let c = Constants { xi, varsigma, k, mode };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.varsigma.is_finite() || self.varsigma == 0.0 {
            return Err(Error::InvalidConstants("varsigma must be nonzero"));
        }
        if !self.xi.is_finite() || self.xi == 0.0 {
            return Err(Error::InvalidConstants("xi must be nonzero"));
        }
        if !self.k.is_finite() {
            return Err(Error::InvalidConstants("k must be finite"));
        }
        Ok(())
    }

    /// Coefficient `b` of the identity operator in a curve's five-vector.
    pub fn algebraic_coefficient(&self) -> f64 {
        match self.mode {
            Mode::Dimensionless => 1.0,
            Mode::Dimensional => self.varsigma,
        }
    }

    /// `κ = ξ^½`.
    pub fn kappa(&self) -> Result<f64> {
        if self.xi > 0.0 {
            Ok(self.xi.sqrt())
        } else {
            Err(Error::NonPositiveXi)
        }
    }

    pub fn dimensional(self) -> Constants {
        Constants { mode: Mode::Dimensional, ..self }
    }

    pub fn with_k(self, k: f64) -> Constants {
        Constants { k, ..self }
    }
}

/// Symmetric metric components `g_αβ` with cached first derivatives.
#[derive(Debug, Clone)]
pub struct MetricField {
    g: [[ScalarField; 4]; 4],
    dg: [[[ScalarField; 4]; 4]; 4],
}

impl MetricField {
    /// Builds and validates (symmetry, nondegeneracy, signature) at the default probes.
    pub fn new(g: [[ScalarField; 4]; 4]) -> Result<MetricField> {
        let m = MetricField::unchecked(g);
        m.validate(&default_probes())?;
        Ok(m)
    }

    fn unchecked(g: [[ScalarField; 4]; 4]) -> MetricField {
        let dg = std::array::from_fn(|l| std::array::from_fn(|a| std::array::from_fn(|b| g[a][b].partial(l))));
        MetricField { g, dg }
    }

    pub fn diagonal(d: [ScalarField; 4]) -> Result<MetricField> {
        let g = std::array::from_fn(|a| {
            std::array::from_fn(|b| if a == b { d[a].clone() } else { ScalarField::zero() })
        });
        MetricField::new(g)
    }

    pub fn minkowski() -> MetricField {
        MetricField::preset("minkowski").expect("preset")
    }

    /// Built-in metrics: `minkowski`, `conformal-exp`, `diag-poly`.
    pub fn preset(name: &str) -> Option<MetricField> {
        let src: [&str; 4] = match name {
            "minkowski" => ["1", "-1", "-1", "-1"],
            "conformal-exp" => ["1", "-exp(2*x0)", "-1", "-1"],
            "diag-poly" => ["1 + x0^2", "-1", "-1", "-1"],
            _ => return None,
        };
        let d = src.map(|s| ScalarField::parse(s).expect("preset expression"));
        MetricField::diagonal(d).ok()
    }

    pub const PRESETS: [&'static str; 3] = ["minkowski", "conformal-exp", "diag-poly"];

    pub fn validate(&self, probes: &[Point]) -> Result<()> {
        for p in probes {
            let g = self.at(p)?;
            let scale = g.abs().max().max(1.0);
            if (g - g.transpose()).abs().max() > 1e-12 * scale {
                return Err(Error::AsymmetricMetric { at: *p });
            }
            if g.determinant().abs() < 1e-12 * scale.powi(4) {
                return Err(Error::SingularMetric { at: *p });
            }
            let eig = SymmetricEigen::new(g);
            let positive = eig.eigenvalues.iter().filter(|v| **v > 0.0).count();
            let negative = eig.eigenvalues.iter().filter(|v| **v < 0.0).count();
            if positive != 1 || negative != 3 {
                return Err(Error::Signature { at: *p, positive, negative });
            }
        }
        Ok(())
    }

    pub fn component(&self, a: usize, b: usize) -> &ScalarField {
        &self.g[a][b]
    }

    pub fn components(&self) -> &[[ScalarField; 4]; 4] {
        &self.g
    }

    /// `∂_l g_ab` as a field.
    pub fn derivative(&self, l: usize, a: usize, b: usize) -> &ScalarField {
        &self.dg[l][a][b]
    }

    pub fn at(&self, p: &Point) -> Result<Matrix4<f64>> {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                m[(a, b)] = self.g[a][b].eval(p)?;
            }
        }
        Ok(m)
    }

    pub fn inverse_at(&self, p: &Point) -> Result<Matrix4<f64>> {
        self.at(p)?.try_inverse().ok_or(Error::SingularMetric { at: *p })
    }

    /// `∂_l g` at `p`.
    pub fn derivative_at(&self, p: &Point, l: usize) -> Result<Matrix4<f64>> {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                m[(a, b)] = self.dg[l][a][b].eval(p)?;
            }
        }
        Ok(m)
    }

    /// The metric whose components at `x` are those of `self` at `s·x`.
    pub fn rescale_args(&self, s: f64) -> MetricField {
        MetricField::unchecked(std::array::from_fn(|a| std::array::from_fn(|b| self.g[a][b].rescale_args(s))))
    }

    /// `g(u, v)` as a field for canonical five-vector fields.
    pub fn g_field(&self, u: &[ScalarField], v: &[ScalarField]) -> ScalarField {
        let mut out = ScalarField::zero();
        for a in 0..4 {
            for b in 0..4 {
                if self.g[a][b].is_zero() || u[a].is_zero() || v[b].is_zero() {
                    continue;
                }
                out = &out + &(&(&self.g[a][b] * &u[a]) * &v[b]);
            }
        }
        out
    }
}

pub fn g4(u: &FourVector, v: &FourVector, m: &MetricField, p: &Point) -> Result<f64> {
    let g = m.at(p)?;
    Ok(quadratic(&g, &u.0, &v.0))
}

fn quadratic(g: &Matrix4<f64>, u: &[f64; 4], v: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += g[(a, b)] * u[a] * v[b];
        }
    }
    s
}

/// Degenerate product inherited from the metric; blind to fifth components.
pub fn g5(u: &FiveVector, v: &FiveVector, m: &MetricField, p: &Point) -> Result<f64> {
    g4(&u.class(), &v.class(), m, p)
}

/// `λ_u λ_v` for canonical components.
pub fn h_second(u: &FiveVector, v: &FiveVector, c: &Constants) -> f64 {
    u.lambda(c) * v.lambda(c)
}

/// `λ_u λ_v` for components in a regular frame.
pub fn h_second_in(frame: &Frame, u: &FiveVector, v: &FiveVector, c: &Constants) -> Result<f64> {
    Ok(frame.lambda(u, c)? * frame.lambda(v, c)?)
}

/// `h(u, v) = g(u, v) + ξ λ_u λ_v` for canonical components.
pub fn h(u: &FiveVector, v: &FiveVector, m: &MetricField, c: &Constants, p: &Point) -> Result<f64> {
    Ok(g5(u, v, m, p)? + c.xi * h_second(u, v, c))
}

/// `h` for components in a regular frame.
pub fn h_in(frame: &Frame, u: &FiveVector, v: &FiveVector, m: &MetricField, c: &Constants, p: &Point) -> Result<f64> {
    if !frame.is_regular() {
        return Err(Error::FrameNotRegular);
    }
    let (uc, vc) = (frame.to_canonical(p, u)?, frame.to_canonical(p, v)?);
    h(&uc, &vc, m, c, p)
}

/// Canonical-frame matrix of `g` as a five-vector form (zero fifth row and column).
pub fn g_canonical(m: &MetricField, p: &Point) -> Result<Mat5> {
    let g = m.at(p)?;
    let mut out = Mat5::zeros();
    out.fixed_view_mut::<4, 4>(0, 0).copy_from(&g);
    Ok(out)
}

/// Canonical-frame matrix of `h`.
pub fn h_canonical(m: &MetricField, c: &Constants, p: &Point) -> Result<Mat5> {
    let mut out = g_canonical(m, p)?;
    let b = c.algebraic_coefficient();
    out[(FIFTH, FIFTH)] = c.xi / (b * b);
    Ok(out)
}

/// `h_AB = h(e_A, e_B)` for any frame.
pub fn h_matrix(frame: &Frame, m: &MetricField, c: &Constants, p: &Point) -> Result<Mat5> {
    let l = frame.matrix_at(p)?;
    Ok(l.transpose() * h_canonical(m, c, p)? * l)
}

/// `g_AB = g(e_A, e_B)` for any frame.
pub fn g_matrix(frame: &Frame, m: &MetricField, p: &Point) -> Result<Mat5> {
    let l = frame.matrix_at(p)?;
    Ok(l.transpose() * g_canonical(m, p)? * l)
}

/// Returns `(a, b)` when `h = diag(aη, b)` within `tol` (relative), `None` otherwise.
pub fn invariant_form_check(hm: &Mat5, tol: f64) -> Option<(f64, f64)> {
    let a = hm[(0, 0)];
    let b = hm[(FIFTH, FIFTH)];
    let scale = hm.abs().max().max(1e-300);
    if a.abs() <= tol * scale || b.abs() <= tol * scale {
        return None;
    }
    let eta = [1.0, -1.0, -1.0, -1.0];
    for r in 0..5 {
        for col in 0..5 {
            let expected = match (r, col) {
                (FIFTH, FIFTH) => b,
                (r, col) if r == col => a * eta[r],
                _ => 0.0,
            };
            if (hm[(r, col)] - expected).abs() > tol * scale {
                return None;
            }
        }
    }
    Some((a, b))
}

/// Steps of the composite Simpson rule used by [`curve_interval`].
pub const INTERVAL_STEPS: usize = 1024;

/// Length `∫ √(g ẋ ẋ) dt` of a timelike or null curve segment.
pub fn curve_interval(curve: &ParametrizedCurve, t0: f64, t1: f64, m: &MetricField) -> Result<f64> {
    if !t0.is_finite() || !t1.is_finite() || t1 <= t0 {
        return Err(Error::InvalidInterval { t0, t1 });
    }
    let n = INTERVAL_STEPS;
    let h = (t1 - t0) / n as f64;
    let integrand = |t: f64| -> Result<f64> {
        let x = curve.point(t)?;
        let v = curve.tangent(t)?;
        let r = quadratic(&m.at(&x)?, &v, &v);
        let scale = v.iter().fold(0.0f64, |s, c| s + c * c).max(1.0);
        if r < -1e-12 * scale {
            return Err(Error::NegativeRadicand { t, value: r });
        }
        Ok(r.max(0.0).sqrt())
    };
    let mut sum = integrand(t0)? + integrand(t1)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * integrand(t0 + h * i as f64)?;
    }
    Ok(sum * h / 3.0)
}
