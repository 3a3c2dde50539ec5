use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhantomError {
    #[error("not invertible: {0} is zero or a zero divisor")]
    NotInvertible(String),
    #[error("root domain: even root of a value with a negative component ({0})")]
    RootDomain(String),
    #[error("log domain: {0} is not pseudo positive")]
    LogDomain(String),
    #[error("alpha must be strictly positive, got {0}")]
    BadAlpha(f64),
    #[error("parameter {t} lies outside the path domain [{t0}, {t1}]")]
    OutOfDomain { t: f64, t0: f64, t1: f64 },
    #[error("quadrature failed to reach tolerance on [{lo}, {hi}] within {subdivisions} subdivisions")]
    QuadratureFailure { lo: f64, hi: f64, subdivisions: usize },
    #[error("unknown outcome label `{0}`")]
    UnknownOutcome(String),
    #[error("conditioning event has a probability that is zero or a zero divisor: {0}")]
    ConditioningDegenerate(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("bad compound coefficients: {0}")]
    BadCoefficients(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid random variable: {0}")]
    InvalidVariable(String),
    #[error("order is not usable for probability queries: {0}")]
    BadOrder(String),
    #[error("no path point satisfies the order constraint")]
    EmptyRange,
    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("inequality precondition violated: {0}")]
    BadVariant(String),
}

pub type Result<T> = std::result::Result<T, PhantomError>;
