use alloc::string::String;
use core::fmt;

/// Why a profile expression could not be evaluated at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    SqrtNonPositive,
    LogNonPositive,
    DivisionByZero,
    AbsAtZero,
    PowBase,
    NonFinite,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::SqrtNonPositive => "sqrt of a non-positive argument",
            DomainKind::LogNonPositive => "ln of a non-positive argument",
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::AbsAtZero => "abs is not differentiable at zero",
            DomainKind::PowBase => "power of a non-positive base with a non-integer exponent",
            DomainKind::NonFinite => "non-finite intermediate value",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Syntax {
        offset: usize,
        message: &'static str,
    },
    UnknownIdentifier {
        name: String,
        offset: usize,
    },
    UnboundConstant {
        name: String,
    },
    Domain {
        u: f64,
        kind: DomainKind,
    },
    NonLorentzMetric {
        u: f64,
        v: f64,
    },
    DegenerateFrame,
    SingularPoint {
        u: f64,
        v: f64,
    },
    StencilOutOfDomain {
        u: f64,
        v: f64,
    },
    InvariantViolation {
        what: &'static str,
        u: f64,
        residual: f64,
    },
    NearNullSlope {
        u: f64,
    },
    NegativeRadicand {
        u: f64,
    },
    NonpositiveProfile {
        u: f64,
    },
    CaseMismatch,
    ZeroDerivativeProfile {
        u: f64,
    },
    QuadratureFailure {
        a: f64,
        b: f64,
    },
    OutOfDomain {
        u: f64,
    },
    InvalidParameter(&'static str),
}

impl Error {
    /// Short kebab-case tag, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier { .. } => "unknown-identifier",
            Error::UnboundConstant { .. } => "unbound-constant",
            Error::Domain { .. } => "domain",
            Error::NonLorentzMetric { .. } => "non-lorentz-metric",
            Error::DegenerateFrame => "degenerate-frame",
            Error::SingularPoint { .. } => "singular-point",
            Error::StencilOutOfDomain { .. } => "stencil-out-of-domain",
            Error::InvariantViolation { .. } => "invariant-violation",
            Error::NearNullSlope { .. } => "near-null-slope",
            Error::NegativeRadicand { .. } => "negative-radicand",
            Error::NonpositiveProfile { .. } => "nonpositive-profile",
            Error::CaseMismatch => "case-mismatch",
            Error::ZeroDerivativeProfile { .. } => "zero-derivative-profile",
            Error::QuadratureFailure { .. } => "quadrature-failure",
            Error::OutOfDomain { .. } => "out-of-domain",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { offset, message } => {
                write!(f, "syntax error at byte {offset}: {message}")
            }
            Error::UnknownIdentifier { name, offset } => {
                write!(f, "unknown identifier `{name}` at byte {offset}")
            }
            Error::UnboundConstant { name } => write!(f, "constant `{name}` has no value"),
            Error::Domain { u, kind } => write!(f, "{kind} at u = {u}"),
            Error::NonLorentzMetric { u, v } => {
                write!(f, "induced metric is not Lorentzian at (u, v) = ({u}, {v})")
            }
            Error::DegenerateFrame => {
                f.write_str("lightlike residual during indefinite Gram-Schmidt")
            }
            Error::SingularPoint { u, v } => write!(f, "no normal frame at (u, v) = ({u}, {v})"),
            Error::StencilOutOfDomain { u, v } => {
                write!(
                    f,
                    "finite-difference stencil at ({u}, {v}) leaves the domain"
                )
            }
            Error::InvariantViolation { what, u, residual } => {
                write!(f, "{what} violated at u = {u} (residual {residual:e})")
            }
            Error::NearNullSlope { u } => write!(f, "(r')^2 is too close to 1 at u = {u}"),
            Error::NegativeRadicand { u } => {
                write!(f, "negative radicand in the angle equation at u = {u}")
            }
            Error::NonpositiveProfile { u } => write!(f, "profile is not positive at u = {u}"),
            Error::CaseMismatch => {
                f.write_str("sign of (r')^2 - 1 does not match the requested case")
            }
            Error::ZeroDerivativeProfile { u } => write!(f, "f * f' vanishes at u = {u}"),
            Error::QuadratureFailure { a, b } => {
                write!(f, "adaptive quadrature did not converge on [{a}, {b}]")
            }
            Error::OutOfDomain { u } => write!(f, "u = {u} is outside the curve domain"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
