use std::fmt;

use super::vector::FiveVector;
use crate::error::{Error, Result};
use crate::field::{parse_expr, Expr, Point};
use crate::metric::Constants;

const PARAM: [&str; 1] = ["t"];

/// Tolerance of [`curve_equivalence`] comparisons.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// A curve `t ↦ x(t)` whose parameter value is `λ = lambda0 + t`.
#[derive(Clone, PartialEq)]
pub struct ParametrizedCurve {
    path: [Expr; 4],
    tangent: [Expr; 4],
    pub lambda0: f64,
}

impl ParametrizedCurve {
    pub fn from_exprs(path: [Expr; 4], lambda0: f64) -> ParametrizedCurve {
        let tangent = std::array::from_fn(|a| path[a].diff(0));
        ParametrizedCurve { path, tangent, lambda0 }
    }

    /// Parses four coordinate expressions in the variable `t`.
    pub fn parse(srcs: [&str; 4], lambda0: f64) -> Result<ParametrizedCurve> {
        let mut path = Vec::with_capacity(4);
        for src in srcs {
            path.push(parse_expr(src, &PARAM)?);
        }
        Ok(ParametrizedCurve::from_exprs(path.try_into().expect("four components"), lambda0))
    }

    /// `x(t) = start + t·direction`.
    pub fn line(start: [f64; 4], direction: [f64; 4]) -> ParametrizedCurve {
        let t = Expr::var(0);
        let path = std::array::from_fn(|a| Expr::constant(start[a]).add(&Expr::constant(direction[a]).mul(&t)));
        ParametrizedCurve::from_exprs(path, 0.0)
    }

    pub fn path(&self) -> &[Expr; 4] {
        &self.path
    }

    pub fn point(&self, t: f64) -> Result<Point> {
        let mut x = [0.0; 4];
        for (xa, e) in x.iter_mut().zip(&self.path) {
            *xa = e.eval(&[t])?;
        }
        Ok(Point(x))
    }

    /// `dx/dt`.
    pub fn tangent(&self, t: f64) -> Result<[f64; 4]> {
        let mut v = [0.0; 4];
        for (va, e) in v.iter_mut().zip(&self.tangent) {
            *va = e.eval(&[t]).map_err(|_| Error::NonFiniteTangent { t })?;
        }
        Ok(v)
    }

    pub fn lambda_at(&self, t: f64) -> f64 {
        self.lambda0 + t
    }

    /// The same physical curve after dividing the interval unit by `k`:
    /// `x′(t′) = x(k t′)/k`, `λ′ = λ/k`.
    pub fn rescaled(&self, k: f64) -> ParametrizedCurve {
        let kt = Expr::constant(k).mul(&Expr::var(0));
        let path = std::array::from_fn(|a| self.path[a].substitute(&|_| kt.clone()).div(&Expr::constant(k)));
        ParametrizedCurve::from_exprs(path, self.lambda0 / k)
    }
}

impl fmt::Debug for ParametrizedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.path.iter().map(|e| e.display(&PARAM).to_string()).collect();
        write!(f, "ParametrizedCurve([{}], lambda0 = {})", parts.join(", "), self.lambda0)
    }
}

/// Canonical components `(dx/dt | b·λ)` of the curve's five-vector at `t`.
pub fn from_curve(curve: &ParametrizedCurve, t: f64, c: &Constants) -> Result<FiveVector> {
    let v = curve.tangent(t)?;
    let lambda = curve.lambda_at(t);
    let u = FiveVector::new(v, c.algebraic_coefficient() * lambda);
    if !u.is_finite() {
        return Err(Error::NonFiniteTangent { t });
    }
    Ok(u)
}

/// Which of the three curve relations to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Tangents proportional with a positive factor.
    Proportional,
    /// Tangents equal.
    Tangent,
    /// Tangents and parameter values equal.
    TangentAndParameter,
}

/// Tests relation `relation` between `a` at `ta` and `b` at `tb`, which must meet there.
pub fn curve_equivalence(
    a: &ParametrizedCurve,
    ta: f64,
    b: &ParametrizedCurve,
    tb: f64,
    relation: Relation,
) -> Result<bool> {
    let (pa, pb) = (a.point(ta)?, b.point(tb)?);
    let mismatch = (0..4).fold(0.0f64, |m, i| m.max((pa.0[i] - pb.0[i]).abs()));
    if mismatch > EQUIVALENCE_TOL {
        return Err(Error::AnchorMismatch { mismatch });
    }
    let (va, vb) = (a.tangent(ta)?, b.tangent(tb)?);
    let same = |x: &[f64; 4], y: &[f64; 4]| (0..4).all(|i| (x[i] - y[i]).abs() <= EQUIVALENCE_TOL);
    Ok(match relation {
        Relation::Proportional => proportional(&va, &vb),
        Relation::Tangent => same(&va, &vb),
        Relation::TangentAndParameter => {
            same(&va, &vb) && (a.lambda_at(ta) - b.lambda_at(tb)).abs() <= EQUIVALENCE_TOL
        }
    })
}

fn proportional(va: &[f64; 4], vb: &[f64; 4]) -> bool {
    let pivot = (0..4).max_by(|&i, &j| vb[i].abs().total_cmp(&vb[j].abs())).unwrap_or(0);
    if vb[pivot].abs() <= EQUIVALENCE_TOL {
        return va.iter().all(|v| v.abs() <= EQUIVALENCE_TOL);
    }
    let factor = va[pivot] / vb[pivot];
    factor > 0.0 && (0..4).all(|i| (va[i] - factor * vb[i]).abs() <= EQUIVALENCE_TOL)
}
