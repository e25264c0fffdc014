use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("unsupported derivative order {0} (supported: 1, 2, 3)")]
    UnsupportedOrder(usize),
    #[error("spectrum error: lambda = {0} lies on (-inf, 0]")]
    Spectrum(String),
    #[error("contour error: {msg}; try R_max = {suggested_r_max:.3e}")]
    Contour { msg: String, suggested_r_max: f64 },
    #[error("wraparound error: {0}")]
    Wraparound(String),
    #[error("excluded exponent: {0}")]
    ExcludedExponent(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("solvability error: {0}")]
    Solvability(String),
    #[error("refinement error: {0}")]
    Refinement(String),
    #[error("compatibility error: {0}")]
    Compatibility(String),
    #[error("truncation error: t = {t} needs more modes, increase n_modes to at least {needed}")]
    IncreaseModes { t: f64, needed: usize },
    #[error("fit residual {residual:.3e} too large: {suggestion}")]
    FitResidual { residual: f64, suggestion: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    /// Short class tag used in report rows.
    pub fn class(&self) -> &'static str {
        match self {
            LabError::Argument(_) => "argument",
            LabError::Data(_) => "data",
            LabError::UnsupportedOrder(_) => "unsupported-order",
            LabError::Spectrum(_) => "spectrum",
            LabError::Contour { .. } => "contour",
            LabError::Wraparound(_) => "wraparound",
            LabError::ExcludedExponent(_) => "excluded-exponent",
            LabError::Range(_) => "range",
            LabError::Solvability(_) => "solvability",
            LabError::Refinement(_) => "refinement",
            LabError::Compatibility(_) => "compatibility",
            LabError::IncreaseModes { .. } => "increase-modes",
            LabError::FitResidual { .. } => "fit-residual",
            LabError::Config(_) => "config",
            LabError::Io(_) => "io",
            LabError::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Argument(msg.into()))
}
