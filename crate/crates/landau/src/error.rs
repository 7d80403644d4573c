use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandauError {
    #[error("tangent pole: cos√κr vanishes at r = {r}")]
    TangentPole { r: f64 },

    #[error("point r = {r} lies outside the chart (0, {limit})")]
    ChartDomain { r: f64, limit: f64 },

    #[error("curvature κ = {kappa} not allowed here: {reason}")]
    Curvature { kappa: f64, reason: &'static str },

    #[error("flux quantization violated: 2β/κ = {ratio} is not an integer (β = {beta}, κ = {kappa})")]
    FluxQuantization { kappa: f64, beta: f64, ratio: f64 },

    #[error("label λ = {lambda} must be a half integer when κ ≠ 0")]
    InductionLabel { lambda: f64 },

    #[error("family does not match the sign of β = {beta}")]
    FamilySign { beta: f64 },

    #[error("state (l = {l}, m = {m}) is not admissible: {reason}")]
    Inadmissible { l: f64, m: f64, reason: String },

    #[error("hypergeometric pole: (c)_n vanishes for c = {c}")]
    HypergeometricPole { c: f64 },

    #[error("gamma ratio has an uncancelled pole")]
    GammaPole,

    #[error("degenerate factorization: β + κl = 0 at l = {l}")]
    FactorizationPole { l: f64 },

    #[error("quadrature did not converge (estimates {coarse} and {fine})")]
    Convergence { coarse: f64, fine: f64 },

    #[error("finite-difference stencil leaves the chart at r = {r}")]
    StencilBoundary { r: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, LandauError>;
