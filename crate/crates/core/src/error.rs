use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("all curve components vanish identically")]
    AllZero,
    #[error("degenerate point z = {0}: the immersion is singular there")]
    DegeneratePoint(Complex64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("surface is not quasiconformal on the domain: |h| = |phi|^2 at z = {0}")]
    NotQuasiconformal(Complex64),
    #[error("curve vanishes as a vector at z = {0}")]
    IndeterminatePoint(Complex64),
    #[error("pairing of the curve with the hyperplane vanishes identically")]
    DegenerateCurve,
    #[error("need at least {needed} items, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("stage {stage} outside 0..={max}")]
    StageOutOfRange { stage: usize, max: usize },
    #[error("Nochka weights need q > 2n - k + 1 (q = {q}, n = {n}, k = {k})")]
    TooFewPlanes { q: usize, n: usize, k: usize },
    #[error("hyperplanes are not in {n}-subgeneral position (subset {subset:?} fails to span)")]
    NotSubgeneralPosition { n: usize, subset: Vec<usize> },
    #[error("no feasible Nochka weights found: {0}")]
    Infeasible(String),
    #[error("no basis subset witnesses the product inequality for B = {0:?}")]
    NoWitness(Vec<usize>),
    #[error("defect-sum hypothesis fails: {lhs} <= {rhs}")]
    HypothesisFailed { lhs: f64, rhs: f64 },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
