use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes or grids of the inputs do not line up.
    #[error("structural error: {0}")]
    Structural(String),
    /// A model or configuration parameter is out of its domain.
    #[error("invalid model: {0}")]
    InvalidModel(String),
    /// A factor denominator vanished; the two measures may be mutually singular.
    #[error("singular: {what} is {value:e} at t = {t} (the measures may be mutually singular)")]
    Singular { what: &'static str, t: f64, value: f64 },
    /// The parameters describe mutually singular class distributions.
    #[error("mutually singular: {0}")]
    MutuallySingular(String),
    /// The inputs violate a precondition of the likelihood-ratio formula.
    #[error("admissibility: {0}")]
    Admissibility(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A parametric fit produced an estimate outside its domain.
    #[error("fit failure: {0}")]
    FitFailure(String),
    /// The positive-`u(0)` estimator was asked for data with `u(0) = 0`.
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    /// PLS deflation ran out of signal.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// No cross-validation candidate could be evaluated.
    #[error("selection failure: {0}")]
    Selection(String),
}

macro_rules! structural {
    ($($arg:tt)*) => { $crate::error::Error::Structural(alloc::format!($($arg)*)) };
}
pub(crate) use structural;
