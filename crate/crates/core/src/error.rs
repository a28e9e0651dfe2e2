use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the numerical routines.
///
/// The variants split into input problems ([`Error::is_validation`]) and
/// numerical-invariant failures discovered while computing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bad argument: out-of-range parameter, wrong shape, non-finite entry.
    #[error("invalid input: {0}")]
    Validation(&'static str),
    /// Matrix dimensions do not fit the operation.
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    Dimension {
        /// What the operation needed, as `rows x cols`.
        expected: (usize, usize),
        /// What it received.
        got: (usize, usize),
    },
    /// A matrix that should be Hermitian is not.
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    /// A density matrix failed its trace or positivity check.
    #[error("not a density matrix: {what} ({value:e})")]
    NotDensity {
        /// Which check failed.
        what: &'static str,
        /// Offending value.
        value: f64,
    },
    /// A two-qubit state does not have the X pattern.
    #[error("not an X-state: entry ({row}, {col}) has magnitude {magnitude:e}")]
    NotXState {
        /// Row of the largest off-pattern entry (0-based).
        row: usize,
        /// Column of the largest off-pattern entry (0-based).
        col: usize,
        /// Its magnitude.
        magnitude: f64,
    },
    /// Two lowest energy levels coincide.
    #[error("ground state is degenerate (gap {0:e})")]
    DegenerateGround(f64),
    /// Numerical and closed-form spectra disagree.
    #[error("internal consistency check failed: {what} ({value:e})")]
    Consistency {
        /// What was compared.
        what: &'static str,
        /// Size of the mismatch.
        value: f64,
    },
    /// The generator's eigenbasis is unusable; evolve with another backend.
    #[error("spectral evolution unavailable (condition estimate {0:e}); use the exponential or RK4 backend")]
    FallbackRequired(f64),
    /// A linear system is singular to working precision.
    #[error("singular matrix")]
    Singular,
    /// An iterative eigensolver ran out of iterations.
    #[error("eigensolver did not converge")]
    NoConvergence,
    /// A state produced during evolution broke a physical invariant.
    #[error("numeric invariant violated: {what} ({value:e})")]
    Invariant {
        /// Which invariant.
        what: &'static str,
        /// Offending value.
        value: f64,
    },
}

impl Error {
    /// True for errors caused by caller input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_)
                | Error::Dimension { .. }
                | Error::NotHermitian(_)
                | Error::NotDensity { .. }
                | Error::NotXState { .. }
                | Error::DegenerateGround(_)
        )
    }
}
