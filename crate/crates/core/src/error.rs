use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero module is not representable")]
    ZeroModule,
    #[error("operands live over different domains or ambient orders")]
    DomainMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid construction: {0}")]
    BadSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("prime {p} exceeds the configured bound {bound}")]
    PrimeTooLarge { p: i128, bound: i128 },
    #[error("no registered subfield pair")]
    NoSubfieldRegistered,
    #[error("contraction is the zero module")]
    ZeroContraction,
    #[error("family is empty")]
    EmptyFamily,
    #[error("operation is trivial: the closure of the domain is the whole field")]
    TrivialOperation,
    #[error("sample pool is empty")]
    EmptyPool,
    #[error("quasi-maximal ideals are not enumerated; tilde is unsupported")]
    TildeUnsupported,
    #[error("operation carries no e.a.b. certificate")]
    NotEab,
    #[error("descriptor is not a discrete valuation overring")]
    NotDvrDescriptor,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("membership mode unsupported: {0}")]
    UnsupportedMode(String),
    #[error("no valuation family available")]
    NoValuationFamily,
    #[error("invertibility routes disagree: {0}")]
    RoutesDisagree(String),
    #[error("no invertibility route available")]
    NoRouteAvailable,
    #[error("unknown theorem id '{0}'")]
    UnknownTheoremId(String),
    #[error("prime correspondence incomplete above {0}")]
    CorrespondenceIncomplete(String),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("result is not representable: {0}")]
    NotRepresentable(String),
    #[error("schema error at '{path}': {msg}")]
    Schema { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
