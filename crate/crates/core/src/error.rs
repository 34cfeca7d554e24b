use thiserror::Error;

use crate::field::{EvalError, ParseError, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("non-finite tangent at t = {t}")]
    NonFiniteTangent { t: f64 },
    #[error("curves do not pass through the anchor (mismatch {mismatch:e})")]
    AnchorMismatch { mismatch: f64 },
    #[error("singular transform at {at}")]
    SingularTransform { at: Point },
    #[error("transform is not standard: L^{alpha}_5 = {value} at {at}")]
    NotStandard { alpha: usize, value: f64, at: Point },
    #[error("matrix is not in O(3,1) (deviation {deviation:e})")]
    NotLorentz { deviation: f64 },
    #[error("frame not regular")]
    FrameNotRegular,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("negative radicand {value:e} at t = {t}")]
    NegativeRadicand { t: f64, value: f64 },
    #[error("invalid parameter interval [{t0}, {t1}]")]
    InvalidInterval { t0: f64, t1: f64 },
    #[error("metric is not symmetric at {at}")]
    AsymmetricMetric { at: Point },
    #[error("singular metric at {at}")]
    SingularMetric { at: Point },
    #[error("signature mismatch at {at}: expected (+,-,-,-), found {positive} positive and {negative} negative")]
    Signature { at: Point, positive: usize, negative: usize },
    #[error("{0}")]
    InvalidConstants(&'static str),
    #[error("trajectory left finite bounds at parameter {s}")]
    FlowDiverged { s: f64 },
    #[error("four-part of the field vanishes mid-curve at {at} (parameter {s})")]
    ZeroFourPart { s: f64, at: Point },
    #[error("unsupported frame flavor: {0}")]
    UnsupportedFlavor(&'static str),
    #[error("directional vector must be a nonzero element of E")]
    NotInE,
    #[error("xi must be positive here")]
    NonPositiveXi,
    #[error("g-raising undefined outside Z~ (E~ component {0:e})")]
    RaiseOutsideZ(f64),
    #[error("degree overflow: {p} + {q} > 5")]
    DegreeOverflow { p: usize, q: usize },
    #[error("rescale factor must be positive, got {0}")]
    InvalidRescale(f64),
    #[error("component count {found} does not match rank ({upper},{lower})")]
    RankMismatch { upper: usize, lower: usize, found: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
