use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (||U U^dagger - I||_F = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("operator is not tensor decomposable (sigma_2/sigma_1 = {ratio:e})")]
    NotDecomposable { ratio: f64 },

    #[error("factor reconstruction residual {residual:e} exceeds bound {bound:e}")]
    ReconstructionFailed { residual: f64, bound: f64 },

    #[error("Schmidt-spectrum and I_alpha criteria disagree (spectrum gap {spectrum_gap:e}, invariant gap {invariant_gap:e})")]
    CriteriaDisagree { spectrum_gap: f64, invariant_gap: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short name of the violated invariant, used in structured reports.
    pub fn invariant_name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFinite => "NonFinite",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPsd { .. } => "NotPSD",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NotDecomposable { .. } => "NotDecomposable",
            Error::ReconstructionFailed { .. } => "ReconstructionFailed",
            Error::CriteriaDisagree { .. } => "CriteriaDisagree",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
