use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input to the Hermitian eigensolver is not self-adjoint within tolerance.
    NotHermitian { defect: f64 },
    /// Operand dimension does not match the model or the other operands.
    DimMismatch { expected: usize, found: usize },
    /// Matrix construction received data that is not `dim * dim` finite entries.
    BadShape { dim: usize, len: usize },
    NonFinite,
    /// Disk radius outside `(0, 1)`.
    BadRadius(f64),
    InadmissiblePoint,
    NotDiskModel,
    /// Harmonic extension evaluated at `|lambda| >= 1`.
    OutsideDisk,
    UnknownEntry(String),
    UnknownKind(String),
    /// Eigensolver hit its sweep cap.
    NoConvergence { off_diagonal: f64 },
    /// `X^* X` had an eigenvalue too negative to be rounding noise.
    NegativeSpectrum(f64),
    /// A catalog entry needs an operand role that was not supplied.
    MissingOperand(&'static str),
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (||M - M*|| = {defect:e})")
            }
            Error::DimMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::BadShape { dim, len } => {
                write!(f, "expected {dim}x{dim} entries, got {len}")
            }
            Error::NonFinite => write!(f, "matrix has non-finite entries"),
            Error::BadRadius(r) => write!(f, "disk radius {r} is not in (0, 1)"),
            Error::InadmissiblePoint => write!(f, "point is not in the model domain"),
            Error::NotDiskModel => write!(f, "operation requires a disk model"),
            Error::OutsideDisk => write!(f, "point lies outside the open unit disk"),
            Error::UnknownEntry(id) => write!(f, "unknown catalog entry {id:?}"),
            Error::UnknownKind(kind) => write!(f, "unknown ensemble kind {kind:?}"),
            Error::NoConvergence { off_diagonal } => {
                write!(f, "Jacobi sweeps did not converge (off-diagonal mass {off_diagonal:e})")
            }
            Error::NegativeSpectrum(v) => {
                write!(f, "Gram matrix has eigenvalue {v:e} below the clamping threshold")
            }
            Error::MissingOperand(role) => write!(f, "missing operand {role}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
