use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{op}: right eigenvector matrix is numerically singular (condition estimate {condition:.3e})")]
    SingularEigenvectors { op: &'static str, condition: f64 },

    #[error("half-filling ambiguity: eigenvalue {re:.3e}{im:+.3e}i sits at the Fermi level")]
    HalfFillingAmbiguity { re: f64, im: f64 },

    #[error("{op}: eigensolver failed ({reason})")]
    Eigensolver { op: &'static str, reason: String },

    #[error("degenerate quadratic: a = 0 and b = 0")]
    DegenerateQuadratic,

    #[error("quadrature did not converge: estimated error {estimate:.3e} after {subdivisions} subdivisions")]
    QuadratureNonConvergence { estimate: f64, subdivisions: usize },

    #[error("{op}: t_R t_L = {product} lies at a divergence of the impurity correlation")]
    Divergent { op: &'static str, product: f64 },

    #[error("hypergeometric argument {x} is on or beyond the branch point x = 1")]
    BranchCut { x: f64 },

    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("partition sites {first}..={last} fall outside the available range {lo}..={hi}")]
    PartitionOutOfRange { first: usize, last: usize, lo: usize, hi: usize },

    #[error("rank-deficient fit design: {0}")]
    RankDeficient(String),

    #[error("invalid fit window: {0}")]
    InvalidWindow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain { op, reason: reason.into() }
    }
}
