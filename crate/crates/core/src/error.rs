use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid simple type {series}{rank}: {reason}")]
    InvalidType {
        series: char,
        rank: usize,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Weyl group of order {order} exceeds the enumeration cap {cap}; raise the cap to at least {order} (PARAMOD_WEYL_CAP)")]
    WeylCapExceeded { order: u128, cap: u128 },

    #[error("degenerate lattice basis ({0})")]
    DegenerateLattice(String),

    #[error("lattice '{sub}' is not contained in '{sup}'")]
    NotSublattice { sub: String, sup: String },

    #[error("vector is not an element of lattice '{0}'")]
    NotInLattice(String),

    #[error("scale must be a positive rational, got {0}")]
    NonPositiveScale(String),

    #[error("lattice '{0}' is not positive definite")]
    NotPositiveDefinite(String),

    #[error("lattice '{0}' is not even")]
    OddLattice(String),

    #[error("Im(tau) must be positive, got {0}")]
    InvalidTau(f64),

    #[error("weight {weight} is not dominant of level <= {level}")]
    NotInAlcove { weight: String, level: i64 },

    #[error("weight {0} is not integral")]
    NonIntegralWeight(String),

    #[error("series offsets {0} and {1} do not differ by an integer")]
    IncompatibleOffsets(String, String),

    #[error("series has no invertible leading coefficient")]
    NotAUnit,

    #[error("multiplicity table would need about {needed} entries, budget is {budget}")]
    DepthBudget { needed: u64, budget: u64 },

    #[error("label count mismatch: found {found} classes, expected {expected}")]
    LabelCountMismatch { found: usize, expected: usize },

    #[error("simple-current image of {label} under node {node} is {detail}")]
    FingerprintUnresolved {
        label: String,
        node: usize,
        detail: String,
    },

    #[error("S-matrix rows disagree inside the class of {label} (deviation {deviation:e})")]
    IntraClassMismatch { label: String, deviation: f64 },

    #[error("fusion coefficient N[{a}][{b}][{c}] = {value} is not a nonnegative integer")]
    NonIntegralFusion {
        a: usize,
        b: usize,
        c: usize,
        value: f64,
    },

    #[error("vacuum row of S is not strictly positive (entry {index} = {value})")]
    VacuumRowNotPositive { index: usize, value: f64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}
