use thiserror::Error;

/// Every failure the library reports. Variant names are stable and appear
/// verbatim in command-line reports.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(String),
    #[error("functional equation fails at coefficient {index}")]
    FunctionalEquationFailed { index: usize },
    #[error("root of modulus^2 {modulus2} instead of q (near {witness})")]
    RootModulusFailed { witness: String, modulus2: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("ambiguous: {0}")]
    Ambiguous(String),
    #[error("Weil polynomials over different base fields")]
    MismatchedBaseField,
    #[error("Weil polynomial is not a power of a single irreducible")]
    NotSimple,
    #[error("splitting field degree exceeds the cap (reached {0})")]
    DegreeCapExceeded(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("torsion in the eigenvalue group: {0}")]
    TorsionDetected(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("form is degenerate")]
    NondegeneracyFailed,
    #[error("operator is not self-adjoint for the form")]
    NotSelfAdjoint,
    #[error("operator spectrum is not real and positive")]
    NotPositiveSpectrum,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("characteristic polynomials differ")]
    CharpolyMismatch,
}

impl Error {
    /// Stable variant name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "Malformed",
            Error::NotPrimePower(_) => "NotPrimePower",
            Error::FunctionalEquationFailed { .. } => "FunctionalEquationFailed",
            Error::RootModulusFailed { .. } => "RootModulusFailed",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::Ambiguous(_) => "Ambiguous",
            Error::MismatchedBaseField => "MismatchedBaseField",
            Error::NotSimple => "NotSimple",
            Error::DegreeCapExceeded(_) => "DegreeCapExceeded",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::TorsionDetected(_) => "TorsionDetected",
            Error::Undetermined(_) => "Undetermined",
            Error::NondegeneracyFailed => "NondegeneracyFailed",
            Error::NotSelfAdjoint => "NotSelfAdjoint",
            Error::NotPositiveSpectrum => "NotPositiveSpectrum",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::CharpolyMismatch => "CharpolyMismatch",
        }
    }
}
