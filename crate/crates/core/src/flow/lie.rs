use super::tensor::{flat_index, multi_index, FiveTensorField};
use crate::algebra::{commutator, FiveVectorField, Frame, FIFTH};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::metric::Constants;

/// A scalar that transforms without the algebraic weight, unlike elements of ℑ.
#[derive(Debug, Clone, PartialEq)]
pub struct RankZeroField(pub ScalarField);

/// `£_u f = u^α ∂_α f + u⁵ f`.
pub fn lie_scalar(u: &FiveVectorField, f: &ScalarField) -> ScalarField {
    u.apply(f)
}

/// `£_u v = [u, v]`.
pub fn lie_fivevector(u: &FiveVectorField, v: &FiveVectorField) -> FiveVectorField {
    commutator(u, v)
}

/// `£_u f = u^α ∂_α f` for a rank-zero tensor.
pub fn lie_rank_zero(u: &FiveVectorField, f: &RankZeroField) -> RankZeroField {
    RankZeroField(u.derive(&f.0))
}

fn is_coordinate_identity(frame: &Frame) -> bool {
    frame.entries().iter().enumerate().all(|(r, row)| {
        row.iter().enumerate().all(|(c, f)| f.as_const() == Some(if r == c { 1.0 } else { 0.0 }))
    })
}

/// Lie derivative of a general five-tensor with contraction parameter `c.k`.
///
/// `u` holds canonical components; `t` must be given in the passive regular
/// coordinate frame.
pub fn lie_tensor(u: &FiveVectorField, t: &FiveTensorField, c: &Constants) -> Result<FiveTensorField> {
    if !is_coordinate_identity(t.frame()) {
        return Err(Error::FrameNotRegular);
    }
    let (upper, lower) = t.rank();
    let order = upper + lower;
    let weight = lower as f64 * (1.0 + c.k);
    let du: [[ScalarField; 4]; 5] = std::array::from_fn(|a| std::array::from_fn(|h| u.0[a].partial(h)));
    let comps = t.components();
    let out = (0..comps.len())
        .map(|flat| {
            let idx = multi_index(flat, order);
            let mut acc = u.derive(&comps[flat]);
            if weight != 0.0 {
                acc = &acc + &(&u.0[FIFTH] * &comps[flat]).scale(weight);
            }
            let mut shifted = idx.clone();
            for slot in 0..order {
                for h in 0..5 {
                    shifted[slot] = h;
                    let other = &comps[flat_index(&shifted)];
                    let term = if slot < upper {
                        if h == FIFTH {
                            continue;
                        }
                        -(other * &du[idx[slot]][h])
                    } else {
                        if idx[slot] == FIFTH {
                            continue;
                        }
                        other * &du[h][idx[slot]]
                    };
                    acc = &acc + &term;
                }
                shifted[slot] = idx[slot];
            }
            acc
        })
        .collect();
    Ok(t.with_components(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Point;

    fn alg(c: f64) -> FiveVectorField {
        FiveVectorField::algebraic_only(ScalarField::constant(c))
    }

    #[test]
    fn scalar_examples() {
        let x0 = ScalarField::coord(0);
        assert_eq!(lie_scalar(&alg(1.0), &x0), x0);
        assert_eq!(lie_scalar(&FiveVectorField::partial(0), &x0), ScalarField::one());
        assert_eq!(lie_rank_zero(&alg(1.0), &RankZeroField(x0.clone())).0, ScalarField::zero());
        assert_eq!(lie_rank_zero(&FiveVectorField::partial(0), &RankZeroField(x0)).0, ScalarField::one());
    }

    #[test]
    fn fivevector_examples() {
        let d1 = FiveVectorField::partial(1);
        assert_eq!(lie_fivevector(&d1, &d1), FiveVectorField::zero());
        let id = lie_fivevector(&d1, &FiveVectorField::algebraic_only(ScalarField::coord(1)));
        assert_eq!(id, FiveVectorField::constant([0.0, 0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn constant_form_under_algebraic_field() {
        let w: [ScalarField; 5] = std::array::from_fn(|a| ScalarField::constant(a as f64 + 1.0));
        let t = FiveTensorField::from_form(&w);
        let zero = lie_tensor(&alg(0.7), &t, &Constants::default()).unwrap();
        assert!(zero.components().iter().all(ScalarField::is_zero));
        let scaled = lie_tensor(&alg(0.7), &t, &Constants::default().with_k(0.0)).unwrap();
        for a in 0..5 {
            assert_eq!(scaled.components()[a].as_const(), Some(0.7 * (a as f64 + 1.0)));
        }
    }

    #[test]
    fn rank_one_upper_is_commutator() {
        let u = FiveVectorField::parse(["x1", "sin(x0)", "0", "1"], "x2").unwrap();
        let v = FiveVectorField::parse(["x0*x3", "1", "x1^2", "0"], "cos(x1)").unwrap();
        let lt = lie_tensor(&u, &FiveTensorField::from_vector(&v), &Constants::default()).unwrap();
        let lv = lie_fivevector(&u, &v);
        let p = Point([0.3, -0.2, 0.5, 0.9]);
        for a in 0..5 {
            let (x, y) = (lt.components()[a].eval(&p).unwrap(), lv.0[a].eval(&p).unwrap());
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn non_coordinate_frame_is_rejected() {
        let c = Constants::default();
        let frame = Frame::coordinate([0.0; 4], &c);
        let t = FiveTensorField::in_frame(0, 1, vec![ScalarField::zero(); 5], &frame).unwrap();
        assert_eq!(lie_tensor(&FiveVectorField::partial(0), &t, &c), Err(Error::FrameNotRegular));
    }
}
