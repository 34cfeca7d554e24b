use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Failure while evaluating an expression at a point.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("ln of nonpositive value {0}")]
    LnNonPositive(f64),
    #[error("power of negative base {base} to non-integer exponent {exponent}")]
    PowerDomain { base: f64, exponent: f64 },
    #[error("non-finite result")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }

    fn apply(self, x: f64) -> Result<f64, EvalError> {
        match self {
            Func::Exp => Ok(x.exp()),
            Func::Ln if x <= 0.0 => Err(EvalError::LnNonPositive(x)),
            Func::Ln => Ok(x.ln()),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(u8),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, Expr),
    Call(Func, Expr),
}

/// Immutable, shareable expression tree over indexed variables.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Expr {
    pub fn raw(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: f64) -> Expr {
        Expr::raw(Node::Const(c))
    }

    pub fn var(i: u8) -> Expr {
        Expr::raw(Node::Var(i))
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(a) => a.clone(),
            _ => Expr::raw(Node::Neg(self.clone())),
        }
    }

    pub fn add(&self, rhs: &Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a + b),
            (Some(0.0), _) => rhs.clone(),
            (_, Some(0.0)) => self.clone(),
            _ => Expr::raw(Node::Add(self.clone(), rhs.clone())),
        }
    }

    pub fn sub(&self, rhs: &Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a - b),
            (Some(0.0), _) => rhs.neg(),
            (_, Some(0.0)) => self.clone(),
            _ => Expr::raw(Node::Sub(self.clone(), rhs.clone())),
        }
    }

    pub fn mul(&self, rhs: &Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a * b),
            (Some(0.0), _) => Expr::constant(0.0),
            (_, Some(0.0)) => Expr::constant(0.0),
            (Some(1.0), _) => rhs.clone(),
            (_, Some(1.0)) => self.clone(),
            (Some(-1.0), _) => rhs.neg(),
            (_, Some(-1.0)) => self.neg(),
            _ => Expr::raw(Node::Mul(self.clone(), rhs.clone())),
        }
    }

    pub fn div(&self, rhs: &Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) if b != 0.0 => Expr::constant(a / b),
            (Some(0.0), _) => Expr::constant(0.0),
            (_, Some(1.0)) => self.clone(),
            _ => Expr::raw(Node::Div(self.clone(), rhs.clone())),
        }
    }

    pub fn pow(&self, rhs: &Expr) -> Expr {
        match rhs.as_const() {
            Some(0.0) => Expr::constant(1.0),
            Some(1.0) => self.clone(),
            _ => Expr::raw(Node::Pow(self.clone(), rhs.clone())),
        }
    }

    pub fn call(func: Func, arg: &Expr) -> Expr {
        Expr::raw(Node::Call(func, arg.clone()))
    }

    /// Evaluates with `vars[i]` bound to variable `i`.
    pub fn eval(&self, vars: &[f64]) -> Result<f64, EvalError> {
        let v = self.eval_inner(vars)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn eval_inner(&self, vars: &[f64]) -> Result<f64, EvalError> {
        Ok(match self.node() {
            Node::Const(c) => *c,
            Node::Var(i) => vars[*i as usize],
            Node::Neg(a) => -a.eval_inner(vars)?,
            Node::Add(a, b) => a.eval_inner(vars)? + b.eval_inner(vars)?,
            Node::Sub(a, b) => a.eval_inner(vars)? - b.eval_inner(vars)?,
            Node::Mul(a, b) => a.eval_inner(vars)? * b.eval_inner(vars)?,
            Node::Div(a, b) => {
                let num = a.eval_inner(vars)?;
                let den = b.eval_inner(vars)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                num / den
            }
            Node::Pow(a, b) => {
                let base = a.eval_inner(vars)?;
                let exponent = b.eval_inner(vars)?;
                powr(base, exponent)?
            }
            Node::Call(func, a) => func.apply(a.eval_inner(vars)?)?,
        })
    }

    /// Exact partial derivative with respect to variable `i`.
    pub fn diff(&self, i: u8) -> Expr {
        match self.node() {
            Node::Const(_) => Expr::constant(0.0),
            Node::Var(j) => Expr::constant(if *j == i { 1.0 } else { 0.0 }),
            Node::Neg(a) => a.diff(i).neg(),
            Node::Add(a, b) => a.diff(i).add(&b.diff(i)),
            Node::Sub(a, b) => a.diff(i).sub(&b.diff(i)),
            Node::Mul(a, b) => a.diff(i).mul(b).add(&a.mul(&b.diff(i))),
            Node::Div(a, b) => {
                let da = a.diff(i);
                let db = b.diff(i);
                let first = da.div(b);
                if db.is_zero() {
                    first
                } else {
                    first.sub(&a.mul(&db).div(&b.mul(b)))
                }
            }
            Node::Pow(a, b) => {
                let da = a.diff(i);
                let db = b.diff(i);
                if db.is_zero() {
                    if da.is_zero() {
                        return Expr::constant(0.0);
                    }
                    let reduced = b.sub(&Expr::constant(1.0));
                    b.mul(&a.pow(&reduced)).mul(&da)
                } else {
                    let ln_a = Expr::call(Func::Ln, a);
                    let inner = db.mul(&ln_a).add(&b.mul(&da).div(a));
                    self.mul(&inner)
                }
            }
            Node::Call(func, a) => {
                let da = a.diff(i);
                if da.is_zero() {
                    return Expr::constant(0.0);
                }
                let outer = match func {
                    Func::Exp => self.clone(),
                    Func::Ln => return da.div(a),
                    Func::Sin => Expr::call(Func::Cos, a),
                    Func::Cos => Expr::call(Func::Sin, a).neg(),
                };
                outer.mul(&da)
            }
        }
    }

    /// Replaces every variable `i` by `subst(i)`.
    pub fn substitute(&self, subst: &dyn Fn(u8) -> Expr) -> Expr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(i) => subst(*i),
            Node::Neg(a) => a.substitute(subst).neg(),
            Node::Add(a, b) => a.substitute(subst).add(&b.substitute(subst)),
            Node::Sub(a, b) => a.substitute(subst).sub(&b.substitute(subst)),
            Node::Mul(a, b) => a.substitute(subst).mul(&b.substitute(subst)),
            Node::Div(a, b) => a.substitute(subst).div(&b.substitute(subst)),
            Node::Pow(a, b) => a.substitute(subst).pow(&b.substitute(subst)),
            Node::Call(func, a) => Expr::call(*func, &a.substitute(subst)),
        }
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Call(_, a) => 1 + a.size(),
            Node::Add(a, b)
            | Node::Sub(a, b)
            | Node::Mul(a, b)
            | Node::Div(a, b)
            | Node::Pow(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Canonical text using `names[i]` for variable `i`.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> Display<'a> {
        Display { expr: self, names }
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Const(c) if c.is_sign_negative() => 3,
            Node::Const(_) | Node::Var(_) | Node::Call(..) => 5,
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
        }
    }
}

fn powr(base: f64, exponent: f64) -> Result<f64, EvalError> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        return Ok(base.powi(exponent as i32));
    }
    if base < 0.0 {
        return Err(EvalError::PowerDomain { base, exponent });
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(EvalError::DivisionByZero);
    }
    Ok(base.powf(exponent))
}

pub struct Display<'a> {
    expr: &'a Expr,
    names: &'a [&'a str],
}

impl Display<'_> {
    fn child(&self, f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
        let inner = Display { expr: e, names: self.names };
        if e.precedence() < min {
            write!(f, "({inner})")
        } else {
            write!(f, "{inner}")
        }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr.node() {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => f.write_str(self.names[*i as usize]),
            Node::Neg(a) => {
                f.write_str("-")?;
                self.child(f, a, 3)
            }
            Node::Add(a, b) | Node::Sub(a, b) => {
                self.child(f, a, 1)?;
                let op = if matches!(self.expr.node(), Node::Add(..)) { " + " } else { " - " };
                f.write_str(op)?;
                self.child(f, b, 2)
            }
            Node::Mul(a, b) | Node::Div(a, b) => {
                self.child(f, a, 2)?;
                let op = if matches!(self.expr.node(), Node::Mul(..)) { "*" } else { "/" };
                f.write_str(op)?;
                self.child(f, b, 3)
            }
            Node::Pow(a, b) => {
                self.child(f, a, 5)?;
                f.write_str("^")?;
                self.child(f, b, 3)
            }
            Node::Call(func, a) => {
                let inner = Display { expr: a, names: self.names };
                write!(f, "{}({inner})", func.name())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XS: [&str; 4] = ["x0", "x1", "x2", "x3"];

    #[test]
    fn folding_drops_neutral_elements() {
        let x = Expr::var(0);
        assert_eq!(x.add(&Expr::constant(0.0)), x);
        assert_eq!(x.mul(&Expr::constant(1.0)), x);
        assert!(x.mul(&Expr::constant(0.0)).is_zero());
        assert_eq!(x.neg().neg(), x);
    }

    #[test]
    fn power_rules() {
        assert_eq!(powr(-2.0, 3.0), Ok(-8.0));
        assert!(matches!(powr(-2.0, 0.5), Err(EvalError::PowerDomain { .. })));
        assert_eq!(powr(0.0, -1.0), Err(EvalError::DivisionByZero));
        assert_eq!(powr(4.0, 0.5), Ok(2.0));
    }

    #[test]
    fn derivative_of_variable_power() {
        // d/dx0 of x0^x1 = x0^x1 * x1 / x0
        let e = Expr::var(0).pow(&Expr::var(1));
        let d = e.diff(0);
        let v = d.eval(&[2.0, 3.0, 0.0, 0.0]).unwrap();
        assert!((v - 12.0).abs() < 1e-12);
        let d1 = e.diff(1).eval(&[2.0, 3.0, 0.0, 0.0]).unwrap();
        assert!((d1 - 8.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        let a = Expr::var(0);
        let b = Expr::var(1);
        let e = a.sub(&b.add(&a)).mul(&b);
        assert_eq!(e.display(&XS).to_string(), "(x0 - (x1 + x0))*x1");
        let p = a.neg().pow(&Expr::constant(2.0));
        assert_eq!(p.display(&XS).to_string(), "(-x0)^2");
        assert_eq!(Expr::constant(-2.5).display(&XS).to_string(), "-2.5");
    }
}
