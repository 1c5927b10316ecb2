use thiserror::Error;

/// Errors raised by constructors, verifiers and converters.
///
/// Member and component numbers carried by variants are 1-based, matching the
/// way systems are written down mathematically (`P_1, ..., P_n`).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tolerances must be strictly positive and finite")]
    InvalidTolerance,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty system: at least one matrix is required")]
    EmptySystem,

    #[error("member {member} is not symmetric")]
    NotSymmetric { member: usize },

    #[error("eigensolver did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("ambient dimension {0} is odd")]
    OddDimension(usize),

    #[error("anticommutation relation violated for members ({i}, {j}), residual {residual:e}")]
    AnticommutationViolated { i: usize, j: usize, residual: f64 },

    #[error("arity mismatch: {left} members vs {right} members")]
    ArityMismatch { left: usize, right: usize },

    #[error("+1 and -1 eigenspaces differ in dimension ({plus} vs {minus})")]
    UnbalancedEigenspaces { plus: usize, minus: usize },

    #[error("member {member} is not orthogonal, residual {residual:e}")]
    NotOrthogonal { member: usize, residual: f64 },

    #[error("bad member indices: {0}")]
    BadIndices(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("component {component} is not harmonic (trace {trace:e})")]
    NotHarmonic { component: usize, trace: f64 },

    #[error("components ({alpha}, {beta}) are not horizontally conformal, residual {residual:e}")]
    NotHorizontallyConformal {
        alpha: usize,
        beta: usize,
        residual: f64,
    },

    #[error("matrix criteria and sampled criteria disagree (matrix accepts: {matrix_accepts}, samples accept: {samples_accept})")]
    SampleDisagreement {
        matrix_accepts: bool,
        samples_accept: bool,
    },

    #[error("component ranks differ: {0:?}")]
    RankMismatch(Vec<usize>),

    #[error("component rank {0} is odd")]
    OddRank(usize),

    #[error("spectrum is not symmetric about zero")]
    UnpairedSpectrum,

    #[error("map is Q-singular (Q-rank {q_rank} < domain dimension {m})")]
    QSingular { q_rank: usize, m: usize },

    #[error("map is Q-nonsingular; nothing to project")]
    QNonsingular,

    #[error("kernel of the first component is not annihilated by component {component} (residual {residual:e})")]
    SharedKernelViolated { component: usize, residual: f64 },

    #[error("normal form is inconsistent: {0}")]
    InconsistentNormalForm(String),

    #[error("map is not umbilical")]
    NotUmbilical,

    #[error("already range-maximal: {components} components on R^{m}")]
    AlreadyRangeMaximal { m: usize, components: usize },

    #[error("not domain-minimal: {0}")]
    NotDomainMinimal(String),

    #[error("extension failed: {0}")]
    NotExtendable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
