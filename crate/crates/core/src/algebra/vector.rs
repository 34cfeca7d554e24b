use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::field::{Point, ScalarField};
use crate::metric::Constants;

/// Storage slot of the fifth index.
pub const FIFTH: usize = 4;

/// Printable labels of the storage slots.
pub const LABELS: [&str; 5] = ["0", "1", "2", "3", "5"];

/// A five-vector at a point, as components in some frame (canonical unless stated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveVector(pub [f64; 5]);

/// A four-vector at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector(pub [f64; 4]);

impl FiveVector {
    pub const ZERO: FiveVector = FiveVector([0.0; 5]);

    pub fn new(differential: [f64; 4], algebraic: f64) -> FiveVector {
        let [a, b, c, d] = differential;
        FiveVector([a, b, c, d, algebraic])
    }

    /// The `i`-th frame vector.
    pub fn basis(i: usize) -> FiveVector {
        let mut c = [0.0; 5];
        c[i] = 1.0;
        FiveVector(c)
    }

    pub fn differential(&self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn algebraic(&self) -> f64 {
        self.0[FIFTH]
    }

    /// Curve-parameter value carried by the vector (canonical components).
    pub fn lambda(&self, c: &Constants) -> f64 {
        self.algebraic() / c.algebraic_coefficient()
    }

    pub fn class(&self) -> FourVector {
        FourVector(self.differential())
    }

    pub fn z_part(&self) -> FiveVector {
        FiveVector::new(self.differential(), 0.0)
    }

    pub fn e_part(&self) -> FiveVector {
        FiveVector::new([0.0; 4], self.algebraic())
    }

    /// Splits into the purely differential and purely algebraic parts.
    pub fn decompose(&self) -> (FiveVector, FiveVector) {
        (self.z_part(), self.e_part())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl fmt::Display for FiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.0;
        write!(f, "({a}, {b}, {c}, {d} | {e})")
    }
}

macro_rules! vector_ops {
    ($ty:ident, $n:expr) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                $ty(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                $ty(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
            }
        }
        impl Mul<f64> for $ty {
            type Output = $ty;
            fn mul(self, s: f64) -> $ty {
                $ty(self.0.map(|v| v * s))
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(self.0.map(|v| -v))
            }
        }
    };
}

pub(crate) use vector_ops;

vector_ops!(FiveVector, 5);
vector_ops!(FourVector, 4);

/// The operator `u^α ∂_α + u⁵·1`, stored as canonical-frame components.
#[derive(Debug, Clone, PartialEq)]
pub struct FiveVectorField(pub [ScalarField; 5]);

/// A four-vector field in coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct FourVectorField(pub [ScalarField; 4]);

impl FiveVectorField {
    pub fn new(differential: [ScalarField; 4], algebraic: ScalarField) -> FiveVectorField {
        let [a, b, c, d] = differential;
        FiveVectorField([a, b, c, d, algebraic])
    }

    pub fn constant(c: [f64; 5]) -> FiveVectorField {
        FiveVectorField(c.map(ScalarField::constant))
    }

    pub fn zero() -> FiveVectorField {
        FiveVectorField::constant([0.0; 5])
    }

    /// Coordinate derivation `∂_α`.
    pub fn partial(alpha: usize) -> FiveVectorField {
        FiveVectorField::constant(FiveVector::basis(alpha).0)
    }

    /// The identity operator scaled by `f`.
    pub fn algebraic_only(f: ScalarField) -> FiveVectorField {
        let z = ScalarField::zero();
        FiveVectorField::new([z.clone(), z.clone(), z.clone(), z], f)
    }

    pub fn parse(differential: [&str; 4], algebraic: &str) -> Result<FiveVectorField> {
        let mut c = Vec::with_capacity(5);
        for src in differential.iter().chain(std::iter::once(&algebraic)) {
            c.push(ScalarField::parse(src)?);
        }
        Ok(FiveVectorField(c.try_into().expect("five components")))
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.0[i]
    }

    pub fn algebraic(&self) -> &ScalarField {
        &self.0[FIFTH]
    }

    pub fn differential(&self) -> [ScalarField; 4] {
        std::array::from_fn(|i| self.0[i].clone())
    }

    pub fn eval(&self, p: &Point) -> Result<FiveVector> {
        let mut out = [0.0; 5];
        for (o, f) in out.iter_mut().zip(&self.0) {
            *o = f.eval(p)?;
        }
        Ok(FiveVector(out))
    }

    /// Action on a scalar field: `u^α ∂_α f + u⁵ f`.
    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        let mut out = &self.0[FIFTH] * f;
        for alpha in 0..4 {
            if !self.0[alpha].is_zero() {
                out = &out + &(&self.0[alpha] * &f.partial(alpha));
            }
        }
        out
    }

    /// Derivative of `f` along the differential part only.
    pub fn derive(&self, f: &ScalarField) -> ScalarField {
        let mut out = ScalarField::zero();
        for alpha in 0..4 {
            if !self.0[alpha].is_zero() {
                out = &out + &(&self.0[alpha] * &f.partial(alpha));
            }
        }
        out
    }

    pub fn z_part(&self) -> FiveVectorField {
        FiveVectorField::new(self.differential(), ScalarField::zero())
    }

    pub fn e_part(&self) -> FiveVectorField {
        FiveVectorField::algebraic_only(self.0[FIFTH].clone())
    }

    pub fn decompose(&self) -> (FiveVectorField, FiveVectorField) {
        (self.z_part(), self.e_part())
    }

    pub fn class(&self) -> FourVectorField {
        FourVectorField(self.differential())
    }

    pub fn is_differential_zero(&self) -> bool {
        self.0[..4].iter().all(ScalarField::is_zero)
    }

    pub fn add(&self, other: &FiveVectorField) -> FiveVectorField {
        FiveVectorField(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn sub(&self, other: &FiveVectorField) -> FiveVectorField {
        FiveVectorField(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn scale(&self, f: &ScalarField) -> FiveVectorField {
        FiveVectorField(std::array::from_fn(|i| f * &self.0[i]))
    }
}

impl FourVectorField {
    pub fn eval(&self, p: &Point) -> Result<FourVector> {
        let mut out = [0.0; 4];
        for (o, f) in out.iter_mut().zip(&self.0) {
            *o = f.eval(p)?;
        }
        Ok(FourVector(out))
    }

    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        let mut out = ScalarField::zero();
        for alpha in 0..4 {
            if !self.0[alpha].is_zero() {
                out = &out + &(&self.0[alpha] * &f.partial(alpha));
            }
        }
        out
    }

    /// Four-vector Lie bracket.
    pub fn bracket(&self, other: &FourVectorField) -> FourVectorField {
        FourVectorField(std::array::from_fn(|a| &self.apply(&other.0[a]) - &other.apply(&self.0[a])))
    }
}

/// `u^α ∂_α f + u⁵ f`.
pub fn apply(u: &FiveVectorField, f: &ScalarField) -> ScalarField {
    u.apply(f)
}

/// The four-vector class of `u`; the fifth component is forgotten.
pub fn equivalence_class(u: &FiveVector) -> FourVector {
    u.class()
}

/// Splits `u` into its purely differential and purely algebraic parts.
pub fn decompose(u: &FiveVector) -> (FiveVector, FiveVector) {
    u.decompose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let x0 = ScalarField::coord(0);
        let x1 = ScalarField::coord(1);
        let d0 = FiveVectorField::partial(0);
        assert_eq!(d0.apply(&x0).as_const(), Some(1.0));
        let f = &x0 * &x1;
        let id = FiveVectorField::algebraic_only(ScalarField::one());
        let p = Point([0.3, -0.7, 0.1, 0.9]);
        assert_eq!(id.apply(&f).eval(&p).unwrap(), f.eval(&p).unwrap());
        let z = ScalarField::zero();
        let u = FiveVectorField::new([x1.clone(), z.clone(), z.clone(), z], x0.clone());
        assert_eq!(u.apply(&f).eval(&Point([2.0, 3.0, 0.0, 0.0])).unwrap(), 21.0);
    }

    #[test]
    fn class_and_decomposition() {
        let u = FiveVector([1.0, 2.0, 3.0, 4.0, 7.0]);
        assert_eq!(equivalence_class(&u), FourVector([1.0, 2.0, 3.0, 4.0]));
        assert_eq!(FiveVector::new([0.0; 4], 3.0).class(), FourVector::ZERO);
        let (z, e) = decompose(&u);
        assert_eq!(z, FiveVector([1.0, 2.0, 3.0, 4.0, 0.0]));
        assert_eq!(e, FiveVector([0.0, 0.0, 0.0, 0.0, 7.0]));
        assert_eq!(z + e, u);
    }
}
