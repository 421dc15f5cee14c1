use thiserror::Error;

use crate::group::GroupCtx;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group context mismatch: {0} vs {1}")]
    ContextMismatch(GroupCtx, GroupCtx),

    #[error("invalid group context: {0}")]
    InvalidContext(String),

    #[error("invalid element for {ctx}: {reason}")]
    InvalidElement { ctx: GroupCtx, reason: String },

    #[error("window of {bits} bits exceeds the enumeration limit of {limit}")]
    EnumerationLimit { bits: usize, limit: usize },

    #[error("the identity may not appear in F")]
    IdentityInF,

    #[error("F is empty; pass the explicit flag to allow the degenerate case")]
    EmptyF,

    #[error("pattern `{pattern}` has {got} bits, window has {expected}")]
    PatternWidth {
        pattern: String,
        got: usize,
        expected: usize,
    },

    #[error("invalid pattern `{0}`: only 0 and 1 are allowed")]
    PatternSyntax(String),

    #[error("rule is not independent: shift by {sigma} overlaps (witness {witness})")]
    NotIndependent { sigma: String, witness: String },

    #[error("palette size N = {n} exceeds the cap of {cap}; try `minimize-window` on the rule")]
    PaletteCap { n: usize, cap: usize },

    #[error("auxiliary coloring is not injective on the window orbit of vertex {vertex}")]
    ColoringNotInjective { vertex: usize },

    #[error("inconsistent action: {0}")]
    InconsistentAction(String),

    #[error("gen map {generator} is not injective: {a} and {b} both map to {target}")]
    NotInjective {
        generator: usize,
        a: usize,
        b: usize,
        target: usize,
    },

    #[error("vertex index {index} out of range for {vertices} vertices")]
    VertexOutOfRange { index: usize, vertices: usize },

    #[error("graph has a loop at {0} but is not flagged as a multigraph")]
    LoopInSimpleGraph(usize),

    #[error("graph is not regular of even degree: {0}")]
    NotEvenRegular(String),

    #[error("maximum degree {max_degree} exceeds 2n = {limit}")]
    DegreeTooLarge { max_degree: usize, limit: usize },

    #[error("configuration model failed after {0} attempts")]
    RejectionBudget(usize),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("radius-{radius} balls are not of uniform size ({a} vs {b})")]
    NonUniformBalls { radius: usize, a: usize, b: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    SizeCap { vertices: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
