use thiserror::Error;

/// Errors raised by ring construction, point handling and loop operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("residue characteristic {0} is not allowed: 6 must be a unit")]
    SmallCharacteristic(u32),
    #[error("nilpotency exponent must be at least 1")]
    ZeroExponent,
    #[error("ring of order {p}^{e} does not fit in 31 bits")]
    RingTooLarge { p: u32, e: u32 },
    #[error("residue {value} is out of range for a ring of order {order}")]
    OutOfRange { value: u64, order: u64 },
    #[error("element is not a unit")]
    NonUnit,
    #[error("element is not in the maximal ideal")]
    NotInMaximalIdeal,
    #[error("triple is not primitive: every coordinate lies in the maximal ideal")]
    NotPrimitive,
    #[error("discriminant -(4A^3 + 27B^2) is not a unit")]
    SingularCurve,
    #[error("residue curve has even order {q}")]
    EvenOrder { q: u64 },
    #[error("point does not lie on the elliptic loop")]
    NotOnLoop,
    #[error("internal error: addition produced a non-primitive triple")]
    DegenerateSum,
    #[error("internal error: no multiple of the point reached the identity within {bound} steps")]
    OrderBoundExceeded { bound: u64 },
    #[error("point is not affine")]
    NotAffine,
    #[error("Hessian value is not a unit (the base point has order dividing 3)")]
    HessianNotUnit,
    #[error("operation requires nilpotency at most {max}, ring has {e}")]
    NilpotencyTooHigh { e: u32, max: u32 },
    #[error("precondition not met: {0}")]
    PreconditionUnmet(&'static str),
    #[error("operation requires the integer quotient ring Z/p^eZ")]
    UnsupportedRing,
    #[error("internal error: Hensel iteration did not converge")]
    HenselDiverged,
    #[error("internal error: {0}")]
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
