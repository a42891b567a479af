use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("infinite product does not converge: factor valuation {valuation} quarters is not positive")]
    InfiniteProductNonConvergent { valuation: i64 },

    #[error("lower parameter vanishes at index {index}: pole in the summand")]
    PoleInLowerParameter { index: u64 },

    #[error("cannot certify that the summand valuations grow: {0}")]
    NonTruncatingSum(String),

    #[error("series with leading coefficient {0} is not invertible over the integers")]
    NonUnitFactor(String),

    #[error("z-window [{lo}, {hi}] is not supported by the operands")]
    WindowExhausted { lo: i64, hi: i64 },

    #[error("valuation bound does not close the tail after {terms} terms")]
    RangeNotCertified { terms: usize },

    #[error("odd power z^({0}/2) survived in the trig product")]
    HalfPowerSurvived(i64),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated at {location}: {msg}")]
    InvariantViolation { location: String, msg: String },

    #[error("excluded edge {0} carries a nonzero weight")]
    ExcludedEdgeNonzero(String),

    #[error("boundary class {0:?} is not in the span of the K generators")]
    OmegaOutsideK(Vec<i64>),

    #[error("slope {p}/{q} is not primitive")]
    SlopeNotPrimitive { p: i64, q: i64 },

    #[error("bracket coefficient at q^({exp}/4) is odd; cannot halve")]
    OddCoefficient { exp: i64 },

    #[error("shell {shell} changed coefficient q^({exp}/4) after it was declared final")]
    ShellMonotonicity { shell: u64, exp: i64 },

    #[error("unknown identity {0}")]
    UnknownIdentity(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),
}
