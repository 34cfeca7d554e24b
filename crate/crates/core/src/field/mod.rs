//! Scalar fields over the single global chart ℝ⁴.
//!
//! [`ScalarField`] is an immutable expression tree in the coordinates `x0..x3`
//! with exact symbolic partial derivatives of any order. [`NumericField`] is an
//! opaque evaluator used for images of fields under finite flows.

mod expr;
mod parse;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use expr::{EvalError, Expr, Func, Node};
pub use parse::{parse_expr, ParseError};

use crate::Error;

/// Names of the chart coordinates as they appear in field expressions.
pub const COORDS: [&str; 4] = ["x0", "x1", "x2", "x3"];

/// Seed of the default probe-point set.
pub const DEFAULT_PROBE_SEED: u64 = 20_240_601;

/// Number of points in a probe set.
pub const PROBE_COUNT: usize = 20;

/// A point of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(pub [f64; 4]);

impl Point {
    pub const ORIGIN: Point = Point([0.0; 4]);

    pub fn new(x: [f64; 4]) -> Point {
        Point(x)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point(self.0.map(|v| v * s))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

impl From<[f64; 4]> for Point {
    fn from(x: [f64; 4]) -> Point {
        Point(x)
    }
}

/// Seeded probe points, uniform in [−1, 1]⁴.
pub fn probe_points(seed: u64, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Point(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0))))
        .collect()
}

/// The default 20-point probe set.
pub fn default_probes() -> Vec<Point> {
    probe_points(DEFAULT_PROBE_SEED, PROBE_COUNT)
}

/// A differentiable scalar field: an element of the function algebra.
#[derive(Clone, PartialEq)]
pub struct ScalarField(Expr);

impl ScalarField {
    pub fn constant(c: f64) -> ScalarField {
        ScalarField(Expr::constant(c))
    }

    pub fn zero() -> ScalarField {
        ScalarField::constant(0.0)
    }

    pub fn one() -> ScalarField {
        ScalarField::constant(1.0)
    }

    /// The coordinate function `x^i`.
    pub fn coord(i: usize) -> ScalarField {
        assert!(i < 4, "coordinate index {i} out of range");
        ScalarField(Expr::var(i as u8))
    }

    pub fn parse(src: &str) -> Result<ScalarField, ParseError> {
        parse_expr(src, &COORDS).map(ScalarField)
    }

    pub fn from_expr(expr: Expr) -> ScalarField {
        ScalarField(expr)
    }

    pub fn expr(&self) -> &Expr {
        &self.0
    }

    pub fn eval(&self, p: &Point) -> Result<f64, EvalError> {
        self.0.eval(&p.0)
    }

    /// Exact derivative along coordinate line `alpha`.
    pub fn partial(&self, alpha: usize) -> ScalarField {
        assert!(alpha < 4, "coordinate index {alpha} out of range");
        ScalarField(self.0.diff(alpha as u8))
    }

    pub fn gradient(&self) -> [ScalarField; 4] {
        std::array::from_fn(|a| self.partial(a))
    }

    pub fn as_const(&self) -> Option<f64> {
        self.0.as_const()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, s: f64) -> ScalarField {
        ScalarField(Expr::constant(s).mul(&self.0))
    }

    pub fn powf(&self, exponent: f64) -> ScalarField {
        ScalarField(self.0.pow(&Expr::constant(exponent)))
    }

    pub fn apply(&self, func: Func) -> ScalarField {
        ScalarField(Expr::call(func, &self.0))
    }

    pub fn exp(&self) -> ScalarField {
        self.apply(Func::Exp)
    }

    pub fn ln(&self) -> ScalarField {
        self.apply(Func::Ln)
    }

    pub fn sin(&self) -> ScalarField {
        self.apply(Func::Sin)
    }

    pub fn cos(&self) -> ScalarField {
        self.apply(Func::Cos)
    }

    /// The field `p ↦ f(s·p)`.
    pub fn rescale_args(&self, s: f64) -> ScalarField {
        let factor = Expr::constant(s);
        ScalarField(self.0.substitute(&|i| factor.mul(&Expr::var(i))))
    }

    /// Sum of `coeffs[i] * fields[i]`, skipping zero terms.
    pub fn dot(coeffs: &[ScalarField], fields: &[ScalarField]) -> ScalarField {
        coeffs
            .iter()
            .zip(fields)
            .fold(ScalarField::zero(), |acc, (a, b)| &acc + &(a * b))
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.display(&COORDS).fmt(f)
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({self})")
    }
}

impl Default for ScalarField {
    fn default() -> ScalarField {
        ScalarField::zero()
    }
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> ScalarField {
        ScalarField::constant(c)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                ScalarField(self.0.$method(&rhs.0))
            }
        }
        impl $trait<ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                ScalarField(self.0.$method(&rhs.0))
            }
        }
        impl $trait<f64> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                ScalarField(self.0.$method(&Expr::constant(rhs)))
            }
        }
        impl $trait<f64> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                ScalarField(self.0.$method(&Expr::constant(rhs)))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField(self.0.neg())
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField(self.0.neg())
    }
}

type Evaluator = dyn Fn(&Point) -> Result<f64, Error> + Send + Sync;

/// Evaluation-only field; evaluation may run ODE solves.
#[derive(Clone)]
pub struct NumericField(Arc<Evaluator>);

impl NumericField {
    pub fn new(f: impl Fn(&Point) -> Result<f64, Error> + Send + Sync + 'static) -> NumericField {
        NumericField(Arc::new(f))
    }

    pub fn eval(&self, p: &Point) -> Result<f64, Error> {
        (self.0)(p)
    }

    pub fn product(&self, other: &NumericField) -> NumericField {
        let (a, b) = (self.clone(), other.clone());
        NumericField::new(move |p| Ok(a.eval(p)? * b.eval(p)?))
    }
}

impl From<ScalarField> for NumericField {
    fn from(f: ScalarField) -> NumericField {
        NumericField::new(move |p| Ok(f.eval(p)?))
    }
}

impl From<&ScalarField> for NumericField {
    fn from(f: &ScalarField) -> NumericField {
        f.clone().into()
    }
}

impl fmt::Debug for NumericField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NumericField(..)")
    }
}
