use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("divergent transmission not representable as triple")]
    DivergentTransmission,

    #[error("spectral singularity: divergent amplitudes (|m22| = {m22_abs:e})")]
    SpectralSingularity { m22_abs: f64 },

    #[error("degenerate time-reversal (D = 0)")]
    DegenerateTimeReversal,

    #[error("family singular for α ≤ −1/4 (got α = {alpha})")]
    FamilySingular { alpha: f64 },

    #[error("α = 0 is the zero potential, not a building block")]
    ZeroAlpha,

    #[error("target magnitude too large for chosen n; increase n (|R| = {magnitude}, n = {n})")]
    MagnitudeTooLarge { magnitude: f64, n: u32 },

    #[error("target amplitude must be nonzero")]
    ZeroTarget,

    #[error("free parameter 𝓡 must be nonzero")]
    ZeroFreeParameter,

    #[error("no valid β for given (α = {alpha}, m = {m}, n = {n})")]
    NoValidBeta { alpha: f64, m: u32, n: u32 },

    #[error("integration failed: potential too stiff at given tol (x = {x}, h = {h:e})")]
    IntegrationFailed { x: f64, h: f64 },

    #[error("contour passes through zero of S; integral ill-defined (t = {t})")]
    ContourZero { t: f64 },

    #[error("pole of the contour integrand lies on |z| = 1")]
    PoleOnContour,

    #[error("supports of blocks {left} and {right} overlap or are out of order")]
    OverlappingSupports { left: usize, right: usize },

    #[error("block {index} has wavenumber {found}, expected {expected}")]
    MismatchedWavenumber {
        index: usize,
        expected: f64,
        found: f64,
    },

    #[error("refractive index out of modeled regime at x = {x} (Re(1 − v/k²) ≤ 0)")]
    RefractiveBranch { x: f64 },

    #[error("{0} overrides supplied for {1} planned blocks")]
    OverrideCount(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
