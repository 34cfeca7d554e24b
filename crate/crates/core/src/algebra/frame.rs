use std::sync::Arc;

use nalgebra::{Matrix4, Matrix5};

use super::vector::{FiveVector, FiveVectorField, FIFTH};
use crate::error::{Error, Result};
use crate::field::{default_probes, Point, ScalarField};
use crate::metric::Constants;

pub type Mat5 = Matrix5<f64>;

/// Tolerance for structural frame conditions checked at probe points.
const FRAME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Standard,
    RegularActive,
    RegularPassive,
    RegularNormalized,
    Coordinate,
    General,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Standard => "standard",
            Flavor::RegularActive => "regular-active",
            Flavor::RegularPassive => "regular-passive",
            Flavor::RegularNormalized => "regular-normalized",
            Flavor::Coordinate => "coordinate",
            Flavor::General => "general",
        }
    }

    pub fn from_name(name: &str) -> Option<Flavor> {
        [
            Flavor::Standard,
            Flavor::RegularActive,
            Flavor::RegularPassive,
            Flavor::RegularNormalized,
            Flavor::Coordinate,
            Flavor::General,
        ]
        .into_iter()
        .find(|f| f.name() == name)
    }

    pub fn is_standard(self) -> bool {
        self != Flavor::General
    }

    pub fn is_regular(self) -> bool {
        matches!(self, Flavor::RegularActive | Flavor::RegularPassive | Flavor::RegularNormalized)
    }

    /// Algebraic coefficient of `e₅` for a regular flavor.
    pub fn e5_scale(self, c: &Constants) -> Option<f64> {
        match self {
            Flavor::RegularActive => Some(c.varsigma),
            Flavor::RegularPassive => Some(1.0),
            Flavor::RegularNormalized => Some(c.varsigma / c.xi.abs().sqrt()),
            _ => None,
        }
    }
}

#[derive(Debug)]
struct FrameData {
    l: [[ScalarField; 5]; 5],
    dl: [[[ScalarField; 5]; 5]; 4],
    flavor: Flavor,
    e5_scale: Option<f64>,
}

/// Five frame fields given as a transform `L^B_A` from the canonical frame `{∂_α, 1}`.
///
/// Column `A` of the matrix holds the canonical components of `e_A`.
#[derive(Debug, Clone)]
pub struct Frame(Arc<FrameData>);

fn identity_fields() -> [[ScalarField; 5]; 5] {
    std::array::from_fn(|r| std::array::from_fn(|c| ScalarField::constant(if r == c { 1.0 } else { 0.0 })))
}

impl Frame {
    fn build(l: [[ScalarField; 5]; 5], flavor: Flavor, e5_scale: Option<f64>) -> Frame {
        let dl = std::array::from_fn(|a| std::array::from_fn(|r| std::array::from_fn(|c| l[r][c].partial(a))));
        Frame(Arc::new(FrameData { l, dl, flavor, e5_scale }))
    }

    /// The passive regular coordinate frame `{∂_α, 1}`.
    pub fn canonical() -> Frame {
        Frame::build(identity_fields(), Flavor::RegularPassive, Some(1.0))
    }

    /// Regular frame with `e_α = ∂_α` and the flavor's `e₅`.
    pub fn regular(flavor: Flavor, c: &Constants) -> Result<Frame> {
        let tetrad = std::array::from_fn(|r| std::array::from_fn(|col| ScalarField::constant(if r == col { 1.0 } else { 0.0 })));
        Frame::regular_with_tetrad(flavor, tetrad, c)
    }

    /// Regular frame whose `e_α` have coordinate components `tetrad[β][α]`.
    pub fn regular_with_tetrad(flavor: Flavor, tetrad: [[ScalarField; 4]; 4], c: &Constants) -> Result<Frame> {
        let scale = flavor.e5_scale(c).ok_or(Error::UnsupportedFlavor(flavor.name()))?;
        let mut l = identity_fields();
        for (r, row) in tetrad.into_iter().enumerate() {
            for (col, f) in row.into_iter().enumerate() {
                l[r][col] = f;
            }
        }
        l[FIFTH][FIFTH] = ScalarField::constant(scale);
        let frame = Frame::build(l, flavor, Some(scale));
        frame.validate(&default_probes())?;
        Ok(frame)
    }

    /// Frame `e_α = ∂_α + b(x^α + offset^α)·1`, `e₅ = 1`, with `b` the algebraic coefficient.
    pub fn coordinate(offsets: [f64; 4], c: &Constants) -> Frame {
        let b = c.algebraic_coefficient();
        let mut l = identity_fields();
        for (alpha, off) in offsets.iter().enumerate() {
            l[FIFTH][alpha] = (ScalarField::coord(alpha) + *off).scale(b);
        }
        Frame::build(l, Flavor::Coordinate, None)
    }

    /// Frame from an explicit transform, validated against the flavor at the default probes.
    pub fn from_matrix(l: [[ScalarField; 5]; 5], flavor: Flavor, c: &Constants) -> Result<Frame> {
        let frame = Frame::build(l, flavor, flavor.e5_scale(c));
        frame.validate(&default_probes())?;
        Ok(frame)
    }

    /// The frame `e′_A = e_B M^B_A`.
    pub fn transformed(&self, m: &[[ScalarField; 5]; 5], flavor: Flavor, c: &Constants) -> Result<Frame> {
        let l = std::array::from_fn(|r| {
            std::array::from_fn(|col| {
                let row: Vec<ScalarField> = self.0.l[r].to_vec();
                let column: Vec<ScalarField> = (0..5).map(|k| m[k][col].clone()).collect();
                ScalarField::dot(&row, &column)
            })
        });
        Frame::from_matrix(l, flavor, c)
    }

    fn validate(&self, probes: &[Point]) -> Result<()> {
        let flavor = self.0.flavor;
        for p in probes {
            let m = self.matrix_at(p)?;
            if m.determinant().abs() < FRAME_TOL {
                return Err(Error::SingularTransform { at: *p });
            }
            if flavor.is_standard() {
                for alpha in 0..4 {
                    if m[(alpha, FIFTH)].abs() > FRAME_TOL {
                        return Err(Error::NotStandard { alpha, value: m[(alpha, FIFTH)], at: *p });
                    }
                }
            }
            if flavor.is_regular() {
                let scale = self.0.e5_scale.unwrap_or(f64::NAN);
                let off_diag = (0..4).any(|a| m[(FIFTH, a)].abs() > FRAME_TOL);
                if off_diag || (m[(FIFTH, FIFTH)] - scale).abs() > FRAME_TOL * scale.abs().max(1.0) {
                    return Err(Error::InvalidFrame(format!("{} frame has wrong fifth row at {p}", flavor.name())));
                }
            }
        }
        Ok(())
    }

    pub fn flavor(&self) -> Flavor {
        self.0.flavor
    }

    pub fn is_standard(&self) -> bool {
        self.0.flavor.is_standard()
    }

    pub fn is_regular(&self) -> bool {
        self.0.flavor.is_regular()
    }

    /// `L^row_col`.
    pub fn entry(&self, row: usize, col: usize) -> &ScalarField {
        &self.0.l[row][col]
    }

    pub fn entries(&self) -> &[[ScalarField; 5]; 5] {
        &self.0.l
    }

    /// Canonical components of frame vector `e_a`.
    pub fn vector(&self, a: usize) -> FiveVectorField {
        FiveVectorField(std::array::from_fn(|r| self.0.l[r][a].clone()))
    }

    pub fn matrix_at(&self, p: &Point) -> Result<Mat5> {
        let mut m = Mat5::zeros();
        for r in 0..5 {
            for c in 0..5 {
                m[(r, c)] = self.0.l[r][c].eval(p)?;
            }
        }
        Ok(m)
    }

    pub fn inverse_at(&self, p: &Point) -> Result<Mat5> {
        self.matrix_at(p)?.try_inverse().ok_or(Error::SingularTransform { at: *p })
    }

    /// `∂_α L` at `p`.
    pub fn derivative_at(&self, p: &Point, alpha: usize) -> Result<Mat5> {
        let mut m = Mat5::zeros();
        for r in 0..5 {
            for c in 0..5 {
                m[(r, c)] = self.0.dl[alpha][r][c].eval(p)?;
            }
        }
        Ok(m)
    }

    /// Canonical field of a field given by components in this frame.
    pub fn field_to_canonical(&self, v: &FiveVectorField) -> FiveVectorField {
        FiveVectorField(std::array::from_fn(|r| ScalarField::dot(&self.0.l[r], &v.0)))
    }

    pub fn to_canonical(&self, p: &Point, v: &FiveVector) -> Result<FiveVector> {
        let out = self.matrix_at(p)? * nalgebra::Vector5::from(v.0);
        Ok(FiveVector(out.into()))
    }

    pub fn from_canonical(&self, p: &Point, u: &FiveVector) -> Result<FiveVector> {
        let out = self.inverse_at(p)? * nalgebra::Vector5::from(u.0);
        Ok(FiveVector(out.into()))
    }

    /// Curve parameter of a vector given by components in this (regular) frame.
    pub fn lambda(&self, v: &FiveVector, c: &Constants) -> Result<f64> {
        let scale = self.0.e5_scale.filter(|_| self.is_regular()).ok_or(Error::FrameNotRegular)?;
        Ok(v.algebraic() * scale / c.algebraic_coefficient())
    }
}

/// Components of `u` in the frame `e′ = e·L`, i.e. `L⁻¹u`.
pub fn change_basis(u: &FiveVector, l: &Mat5, require_standard: bool) -> Result<FiveVector> {
    if require_standard {
        for alpha in 0..4 {
            if l[(alpha, FIFTH)] != 0.0 {
                return Err(Error::NotStandard { alpha, value: l[(alpha, FIFTH)], at: Point::ORIGIN });
            }
        }
    }
    let inv = l.try_inverse().ok_or(Error::SingularTransform { at: Point::ORIGIN })?;
    Ok(FiveVector((inv * nalgebra::Vector5::from(u.0)).into()))
}

/// The Minkowski matrix diag(1, −1, −1, −1).
pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Block-diagonal embedding of a Lorentz matrix with a unit fifth entry.
pub fn symmetry_transform(lambda: &Matrix4<f64>) -> Result<Mat5> {
    let eta = eta();
    let deviation = (lambda.transpose() * eta * lambda - eta).abs().max();
    if deviation > 1e-10 {
        return Err(Error::NotLorentz { deviation });
    }
    let mut l = Mat5::identity();
    l.fixed_view_mut::<4, 4>(0, 0).copy_from(lambda);
    Ok(l)
}
