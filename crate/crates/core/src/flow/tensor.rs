use nalgebra::Matrix5;

use super::FlowJet;
use crate::algebra::{FiveVectorField, Frame};
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};

/// A five-tensor field of rank `(upper, lower)` with components in a frame.
///
/// Components are stored row-major over the index list `A1..Am B1..Bn`, each
/// index running over `0..5` with the algebraic index last.
#[derive(Debug, Clone)]
pub struct FiveTensorField {
    upper: usize,
    lower: usize,
    comps: Vec<ScalarField>,
    frame: Frame,
}

impl PartialEq for FiveTensorField {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper && self.lower == other.lower && self.comps == other.comps
    }
}

impl FiveTensorField {
    /// Tensor with components in the passive regular coordinate frame.
    pub fn new(upper: usize, lower: usize, comps: Vec<ScalarField>) -> Result<FiveTensorField> {
        FiveTensorField::in_frame(upper, lower, comps, &Frame::canonical())
    }

    pub fn in_frame(upper: usize, lower: usize, comps: Vec<ScalarField>, frame: &Frame) -> Result<FiveTensorField> {
        if comps.len() != 5usize.pow((upper + lower) as u32) {
            return Err(Error::RankMismatch { upper, lower, found: comps.len() });
        }
        if !frame.is_standard() {
            return Err(Error::UnsupportedFlavor(frame.flavor().name()));
        }
        Ok(FiveTensorField { upper, lower, comps, frame: frame.clone() })
    }

    /// Rank `(0,0)` tensor.
    pub fn scalar(f: ScalarField) -> FiveTensorField {
        FiveTensorField { upper: 0, lower: 0, comps: vec![f], frame: Frame::canonical() }
    }

    pub fn from_vector(v: &FiveVectorField) -> FiveTensorField {
        FiveTensorField { upper: 1, lower: 0, comps: v.0.to_vec(), frame: Frame::canonical() }
    }

    pub fn from_form(w: &[ScalarField; 5]) -> FiveTensorField {
        FiveTensorField { upper: 0, lower: 1, comps: w.to_vec(), frame: Frame::canonical() }
    }

    pub fn rank(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn component(&self, indices: &[usize]) -> &ScalarField {
        &self.comps[flat_index(indices)]
    }

    pub(crate) fn with_components(&self, comps: Vec<ScalarField>) -> FiveTensorField {
        FiveTensorField { comps, ..self.clone() }
    }

    /// Components at `p`, in storage order.
    pub fn eval(&self, p: &Point) -> Result<Vec<f64>> {
        self.comps.iter().map(|f| f.eval(p).map_err(Error::from)).collect()
    }

    /// Componentwise scaling by a scalar field.
    pub fn scale(&self, f: &ScalarField) -> FiveTensorField {
        self.with_components(self.comps.iter().map(|c| f * c).collect())
    }

    /// Components of the finite image `Ψ_t{T}` at the jet's base point, with
    /// weight `E^{n(1+k)}` for `n` lower indices.
    pub fn psi_at(&self, jet: &FlowJet, k: f64) -> Result<Vec<f64>> {
        let mut values = self.eval(&jet.point)?;
        if self.upper + self.lower == 0 {
            return Ok(values);
        }
        let order = self.upper + self.lower;
        let to_q = jet.vector_map()?;
        let from_q = jet.form_map();
        for slot in 0..self.upper {
            values = contract_slot(&values, order, slot, &to_q, false);
        }
        for slot in self.upper..order {
            values = contract_slot(&values, order, slot, &from_q, true);
        }
        let weight = (jet.log_weight * self.lower as f64 * (1.0 + k)).exp();
        Ok(values.into_iter().map(|v| weight * v).collect())
    }
}

/// Index list of a flat component position.
pub(crate) fn multi_index(mut flat: usize, order: usize) -> Vec<usize> {
    let mut out = vec![0; order];
    for slot in (0..order).rev() {
        out[slot] = flat % 5;
        flat /= 5;
    }
    out
}

pub(crate) fn flat_index(indices: &[usize]) -> usize {
    indices.iter().fold(0, |acc, i| acc * 5 + i)
}

/// Applies `m` to one slot: `m[a][a']` for upper slots, `m[b'][b]` for lower.
fn contract_slot(values: &[f64], order: usize, slot: usize, m: &Matrix5<f64>, lower: bool) -> Vec<f64> {
    let stride = 5usize.pow((order - 1 - slot) as u32);
    let mut out = vec![0.0; values.len()];
    for (flat, o) in out.iter_mut().enumerate() {
        let a = (flat / stride) % 5;
        let base = flat - a * stride;
        *o = (0..5)
            .map(|a2| {
                let coeff = if lower { m[(a2, a)] } else { m[(a, a2)] };
                coeff * values[base + a2 * stride]
            })
            .sum();
    }
    out
}
