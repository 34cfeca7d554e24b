use super::frame::Frame;
use super::vector::{FiveVector, FiveVectorField, FIFTH};
use crate::error::{Error, Result};
use crate::field::{default_probes, Point};
use crate::metric::Constants;

/// `[u, v]^A = u^β ∂_β v^A − v^β ∂_β u^A`.
pub fn commutator(u: &FiveVectorField, v: &FiveVectorField) -> FiveVectorField {
    FiveVectorField(std::array::from_fn(|a| &u.derive(&v.0[a]) - &v.derive(&u.0[a])))
}

/// Commutation constants `[e_A, e_B] = C_AB^D e_D` of a frame.
///
/// Brackets are held symbolically in canonical components; the constants at a
/// point come from solving against the frame matrix there.
#[derive(Debug, Clone)]
pub struct CommutationTable {
    frame: Frame,
    brackets: Vec<FiveVectorField>,
}

pub type Table = [[[f64; 5]; 5]; 5];

impl CommutationTable {
    pub fn bracket(&self, a: usize, b: usize) -> &FiveVectorField {
        &self.brackets[a * 5 + b]
    }

    /// `C[a][b][d]` at `p`.
    pub fn at(&self, p: &Point) -> Result<Table> {
        let inv = self.frame.inverse_at(p)?;
        let mut out = [[[0.0; 5]; 5]; 5];
        for a in 0..5 {
            for b in 0..5 {
                let w = nalgebra::Vector5::from(self.bracket(a, b).eval(p)?.0);
                let c = inv * w;
                out[a][b] = c.into();
            }
        }
        Ok(out)
    }
}

pub fn commutation_constants(frame: &Frame) -> Result<CommutationTable> {
    for p in default_probes() {
        frame.inverse_at(&p)?;
    }
    let vectors: Vec<FiveVectorField> = (0..5).map(|a| frame.vector(a)).collect();
    let mut brackets = Vec::with_capacity(25);
    for a in 0..5 {
        for b in 0..5 {
            brackets.push(commutator(&vectors[a], &vectors[b]));
        }
    }
    Ok(CommutationTable { frame: frame.clone(), brackets })
}

/// Clause of the coordinate-basis criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `[e^Z_α, e^Z_β] = 0`.
    Differential,
    /// `[e^Z_α, e^E_β] = δ_αβ·b·1`.
    Mixed,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::Differential => "16a",
            Clause::Mixed => "16b",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateWitness {
    pub clause: Clause,
    pub alpha: usize,
    pub beta: usize,
    pub at: Point,
    pub residual: f64,
}

/// Checks whether a standard frame is tangent to coordinate lines; `None` means pass.
pub fn is_coordinate_basis(
    frame: &Frame,
    c: &Constants,
    probes: &[Point],
    tol: f64,
) -> Result<Option<CoordinateWitness>> {
    if !frame.is_standard() {
        return Err(Error::UnsupportedFlavor(frame.flavor().name()));
    }
    let z: Vec<FiveVectorField> = (0..4).map(|a| frame.vector(a).z_part()).collect();
    let e: Vec<FiveVectorField> = (0..4).map(|a| frame.vector(a).e_part()).collect();
    let b = c.algebraic_coefficient();
    let worst = |clause, alpha, beta, w: &FiveVectorField, expected: FiveVector| -> Result<Option<CoordinateWitness>> {
        for p in probes {
            let residual = (w.eval(p)? - expected).max_abs();
            if residual > tol {
                return Ok(Some(CoordinateWitness { clause, alpha, beta, at: *p, residual }));
            }
        }
        Ok(None)
    };
    for alpha in 0..4 {
        for beta in alpha + 1..4 {
            let w = commutator(&z[alpha], &z[beta]);
            if let Some(wit) = worst(Clause::Differential, alpha, beta, &w, FiveVector::ZERO)? {
                return Ok(Some(wit));
            }
        }
    }
    for alpha in 0..4 {
        for beta in 0..4 {
            let w = commutator(&z[alpha], &e[beta]);
            let delta = if alpha == beta { b } else { 0.0 };
            let expected = FiveVector::basis(FIFTH) * delta;
            if let Some(wit) = worst(Clause::Mixed, alpha, beta, &w, expected)? {
                return Ok(Some(wit));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;
    use crate::field::ScalarField;

    fn zero() -> ScalarField {
        ScalarField::zero()
    }

    #[test]
    fn commutator_examples() {
        let d0 = FiveVectorField::partial(0);
        let d1 = FiveVectorField::partial(1);
        assert_eq!(commutator(&d0, &d1), FiveVectorField::zero());
        let x1_id = FiveVectorField::algebraic_only(ScalarField::coord(1));
        assert_eq!(commutator(&d1, &x1_id), FiveVectorField::constant([0.0, 0.0, 0.0, 0.0, 1.0]));
        let u = FiveVectorField::new([ScalarField::coord(1), zero(), zero(), zero()], zero());
        assert_eq!(commutator(&u, &d1), FiveVectorField::constant([-1.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn canonical_and_coordinate_tables_vanish() {
        let c = Constants::default();
        let p = Point([0.2, -0.4, 0.6, 0.1]);
        for frame in [Frame::canonical(), Frame::coordinate([0.0; 4], &c)] {
            let t = commutation_constants(&frame).unwrap().at(&p).unwrap();
            assert!(t.iter().flatten().flatten().all(|v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn scaled_frame_has_structure() {
        let c = Constants::default();
        let mut l: [[ScalarField; 5]; 5] = Frame::canonical().entries().clone();
        l[1][1] = ScalarField::parse("1 + x0^2").unwrap();
        let frame = Frame::from_matrix(l, Flavor::Standard, &c).unwrap();
        let t = commutation_constants(&frame).unwrap().at(&Point([0.5, 0.0, 0.0, 0.0])).unwrap();
        // [∂0, (1+x0²)∂1] = 2x0 ∂1 = 2x0/(1+x0²) e1
        assert!((t[0][1][1] - 1.0 / 1.25).abs() < 1e-14);
        assert!((t[1][0][1] + 1.0 / 1.25).abs() < 1e-14);
    }

    #[test]
    fn coordinate_basis_examples() {
        let c = Constants::default();
        let probes = default_probes();
        assert_eq!(is_coordinate_basis(&Frame::coordinate([0.0; 4], &c), &c, &probes, 1e-9).unwrap(), None);
        let shifted = Frame::coordinate([0.3, -1.2, 2.0, 0.7], &c);
        assert_eq!(is_coordinate_basis(&shifted, &c, &probes, 1e-9).unwrap(), None);
        let plain = Frame::canonical();
        let wit = is_coordinate_basis(&plain, &c, &probes, 1e-9).unwrap().unwrap();
        assert_eq!(wit.clause, Clause::Mixed);
        assert_eq!((wit.alpha, wit.beta), (0, 0));
    }
}
