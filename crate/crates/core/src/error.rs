use core::fmt;

/// Which side of a Tx-Rx pair caused a geometric singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatformKind {
    Tx,
    Rx,
}

impl fmt::Display for PlatformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlatformKind::Tx => write!(f, "Tx"),
            PlatformKind::Rx => write!(f, "Rx"),
        }
    }
}

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar or vector argument is outside its domain (non-finite,
    /// non-positive where positivity is required, out of bounds, ...).
    Invalid(&'static str),
    /// Tx/Rx pair index outside the `N_t x N_r` grid.
    IndexOutOfRange {
        i: usize,
        j: usize,
        n_t: usize,
        n_r: usize,
    },
    /// Target coincides (within the minimum separation) with a platform,
    /// making range-normalized quantities ill-conditioned.
    SingularGeometry { kind: PlatformKind, index: usize },
    /// Fisher information matrix is not numerically positive definite;
    /// the geometry does not make all six parameters observable.
    SingularFim,
    /// Vector length does not match the scenario dimensions.
    DimensionMismatch { expected: usize, got: usize },
    /// No feasible point could be found (e.g. every box vertex has a
    /// singular FIM, or the start point of a local search is singular).
    Unsolvable,
    /// Repeated rejection while drawing random scenarios; the study
    /// parameters are most likely misconfigured.
    SamplingFailed,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid argument: {msg}"),
            Error::IndexOutOfRange { i, j, n_t, n_r } => {
                write!(f, "pair index ({i},{j}) outside 1..={n_t} x 1..={n_r}")
            }
            Error::SingularGeometry { kind, index } => {
                write!(f, "target coincides with {kind} #{index}")
            }
            Error::SingularFim => write!(f, "singular Fisher information"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Unsolvable => write!(f, "no feasible point with invertible Fisher information"),
            Error::SamplingFailed => write!(f, "scenario sampling failed after repeated rejections"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
