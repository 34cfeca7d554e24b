use super::vector::FiveVectorField;
use crate::field::{Point, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `m[f + g] = m[f] + m[g]`.
    Additivity,
    /// `m[k] = υ·k` for constants `k`, with `υ = m[1]`.
    Constancy,
    /// `m[fg] = m[f]g + f m[g] − m[1] fg`.
    ModifiedLeibniz,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Additivity => "additivity",
            Axiom::Constancy => "constancy",
            Axiom::ModifiedLeibniz => "modified-leibniz",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub f: ScalarField,
    pub g: Option<ScalarField>,
    pub at: Point,
    pub residual: f64,
}

/// A probe set containing constants, coordinates, products and transcendental fields.
pub fn default_axiom_probes() -> Vec<ScalarField> {
    ["1", "2.5", "-3", "x0", "x1*x2", "sin(x3) + x0^2", "exp(0.5*x1)*x3", "cos(x0*x2) - x1"]
        .iter()
        .map(|s| ScalarField::parse(s).expect("probe expression"))
        .collect()
}

/// Checks additivity, the constancy rule and the modified product rule, in that order.
///
/// Points where either side fails to evaluate are skipped.
pub fn check_five_axioms(
    m: &dyn Fn(&ScalarField) -> ScalarField,
    probes: &[ScalarField],
    points: &[Point],
    tol: f64,
) -> Result<(), AxiomViolation> {
    let compare = |axiom, f: &ScalarField, g: Option<&ScalarField>, lhs: &ScalarField, rhs: &ScalarField| {
        for p in points {
            let (Ok(a), Ok(b)) = (lhs.eval(p), rhs.eval(p)) else { continue };
            let residual = (a - b).abs();
            if residual > tol * a.abs().max(b.abs()).max(1.0) {
                return Err(AxiomViolation { axiom, f: f.clone(), g: g.cloned(), at: *p, residual });
            }
        }
        Ok(())
    };
    let images: Vec<ScalarField> = probes.iter().map(m).collect();
    for (i, f) in probes.iter().enumerate() {
        for (j, g) in probes.iter().enumerate().skip(i) {
            let lhs = m(&(f + g));
            let rhs = &images[i] + &images[j];
            compare(Axiom::Additivity, f, Some(g), &lhs, &rhs)?;
        }
    }
    let upsilon = m(&ScalarField::one());
    for (f, image) in probes.iter().zip(&images) {
        if let Some(k) = f.as_const() {
            compare(Axiom::Constancy, f, None, image, &upsilon.scale(k))?;
        }
    }
    for (i, f) in probes.iter().enumerate() {
        for (j, g) in probes.iter().enumerate().skip(i) {
            let lhs = m(&(f * g));
            let rhs = &(&(&images[i] * g) + &(f * &images[j])) - &(&(&upsilon * f) * g);
            compare(Axiom::ModifiedLeibniz, f, Some(g), &lhs, &rhs)?;
        }
    }
    Ok(())
}

/// Axiom check for an operator built from components.
pub fn check_operator(u: &FiveVectorField, probes: &[ScalarField], points: &[Point], tol: f64) -> Result<(), AxiomViolation> {
    check_five_axioms(&|f| u.apply(f), probes, points, tol)
}
