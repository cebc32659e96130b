use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("polynomial is not real-valued")]
    NotReal,
    #[error("degree undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("polynomial degree {0} is too low")]
    DegreeTooLow(u32),
    #[error("Hessian vanishes at base point")]
    HessianVanishes,
    #[error("distribution rank drop: |V(p)| = {norm:e} below threshold")]
    RankDrop { norm: f64 },
    #[error("p and V(p) are not C-linearly independent (|det| = {det:e})")]
    NotTransversal { det: f64 },
    #[error("involutivity fails: bracket leaves the span (residual {residual:e})")]
    NotInvolutive { residual: f64 },
    #[error("field is not homogeneous of the declared degree {0}")]
    FieldNotHomogeneous(u32),
    #[error("integration exhausted {0} steps")]
    StepLimit(usize),
    #[error("non-finite state during integration")]
    NonFinite,
    #[error("leaf projection failed")]
    LeafProjectionFailed,
    #[error("point outside chart domain")]
    OutsideChart,
    #[error("chart radius shrank below {0:e}")]
    ChartCollapsed(f64),
    #[error("radial direction tangent to leaf: transversality violated numerically (|d| = {0:e})")]
    RadialTangent(f64),
    #[error("point outside gauge domain")]
    OutsideGaugeDomain,
    #[error("degenerate implicit equation (dM/dt = {0:e})")]
    DegenerateImplicit(f64),
    #[error("root solve did not converge")]
    RootNotConverged,
    #[error("too many skipped samples in {check}: {skipped} of {total}")]
    TooManySkipped {
        check: String,
        skipped: usize,
        total: usize,
    },
    #[error("duplicate check `{0}`")]
    DuplicateCheck(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// An assumption on the polynomial or the field does not hold.
    Assumption,
    /// A numerical procedure (projection, root solve, integration) failed.
    Numeric,
    /// The caller supplied an invalid value.
    Input,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            NotReal
            | ZeroPolynomial
            | Inhomogeneous
            | DegreeTooLow(_)
            | HessianVanishes
            | RankDrop { .. }
            | NotTransversal { .. }
            | NotInvolutive { .. }
            | FieldNotHomogeneous(_)
            | RadialTangent(_)
            | Hypothesis(_) => ErrorKind::Assumption,
            StepLimit(_)
            | NonFinite
            | LeafProjectionFailed
            | OutsideChart
            | ChartCollapsed(_)
            | OutsideGaugeDomain
            | DegenerateImplicit(_)
            | RootNotConverged
            | TooManySkipped { .. } => ErrorKind::Numeric,
            DuplicateCheck(_) | InvalidConfig(_) => ErrorKind::Input,
        }
    }
}
