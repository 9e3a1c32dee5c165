use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("clause count must be a positive even number, got {0}")]
    ClauseCount(usize),
    #[error("{0} must be at least 1")]
    ZeroSize(&'static str),
    #[error("automaton state {state} outside 1..={max}")]
    StateOutOfRange { state: u32, max: u32 },
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("input vector is empty")]
    EmptyInput,
    #[error("voting margin T must be at least 1, got {0}")]
    InvalidMargin(u32),
    #[error("specificity s must be a finite real >= 1, got {0}")]
    InvalidSpecificity(f64),
    #[error("threshold update requested but learnable T is disabled")]
    ThresholdNotLearnable,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("label {label} out of range for {classes} classes")]
    InvalidLabel { label: usize, classes: usize },
    #[error("need at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("feature index {index} out of range for {features} features")]
    FeatureIndex { index: usize, features: usize },
    #[error("thresholds for feature {0} are not finite and strictly increasing")]
    InvalidThresholds(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("margin gamma must be positive, got {0}")]
    InvalidGamma(f64),
    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("perceptron labels must be -1 or +1, got {0}")]
    InvalidPerceptronLabel(i8),
    #[error("separator norm is {0}, expected 1")]
    NonUnitSeparator(f64),
    #[error("sample {index} has margin {margin} below gamma {gamma}")]
    MarginViolated { index: usize, margin: f64, gamma: f64 },
    #[error("perceptron made {updates} updates, above the bound {bound}")]
    BoundViolated { updates: usize, bound: f64 },
    #[error("arity {0} too large for exhaustive comparison (max 20)")]
    ArityTooLarge(usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("cannot parse expression: {0}")]
    Parse(String),
}
