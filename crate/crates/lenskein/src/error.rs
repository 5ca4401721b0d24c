use thiserror::Error;

/// Errors produced by the symbolic kernel and the diagram engines.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot normalize zero")]
    NormalizeZero,

    #[error("not divisible; remainder = {remainder}")]
    NotDivisible { remainder: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("component {0} is not oriented")]
    Unoriented(String),

    #[error("unknown component id {0}")]
    UnknownComponent(u32),

    #[error("move site does not match the {0} pattern")]
    PatternMismatch(&'static str),

    #[error("move region contains gate passes")]
    GateInMoveRegion,

    #[error("unsupported surgery coefficient for diagrammatic slide (q = {0}, need q = 1)")]
    UnsupportedSlide(i64),

    #[error("slide site is not gate-adjacent")]
    NotGateAdjacent,

    #[error("crossing guard exceeded: {crossings} crossings > {guard}; use the resolving path")]
    CrossingGuard { crossings: usize, guard: usize },

    #[error("reduction failed: {0}")]
    ReductionFailed(String),

    #[error("reduction did not converge within the iteration cap ({0} nodes)")]
    ReductionCap(usize),

    #[error("abelianization has torsion; use the twisted Alexander polynomial")]
    TorsionPresent,

    #[error("non-cyclic torsion is unsupported")]
    NonCyclicTorsion,

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
