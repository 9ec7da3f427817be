use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{name} must be positive and finite, got {value:e}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite and non-negative, got {value:e}")]
    Negative { name: &'static str, value: f64 },

    #[error(
        "geometric mass density*volume = {geometric:.6e} kg differs from the declared \
         oscillator mass {declared:.6e} kg by {percent:.1}% (limit 5% when the resonator \
         is asserted to be the full suspended mass)"
    )]
    MassMismatch {
        geometric: f64,
        declared: f64,
        percent: f64,
    },

    #[error(
        "lattice density nuclear_mass/a^3 = {lattice:.4e} kg/m^3 disagrees with the bulk \
         density {bulk:.4e} kg/m^3 by {percent:.2}% (limit 1%)"
    )]
    LatticeMismatch {
        lattice: f64,
        bulk: f64,
        percent: f64,
    },

    #[error("material carries no lattice data (lattice constant, nuclear mass), required here")]
    MissingLattice,

    #[error(
        "declared readout coupling {given:.9e} disagrees with the value {derived:.9e} \
         implied by the optical parameters"
    )]
    CouplingMismatch { given: f64, derived: f64 },

    #[error("outside the asymptotic regime for {shape}: {detail}; use the exact form")]
    OutOfAsymptoticRegime { shape: &'static str, detail: String },

    #[error(
        "blur length sigma = {sigma:.4e} m exceeds lattice_constant/5 = {limit:.4e} m; \
         the single-site closed form needs sigma well below the lattice spacing"
    )]
    BlurTooCoarse { sigma: f64, limit: f64 },

    #[error(
        "free-mass susceptibility requested at omega = {omega:.4e} rad/s, below \
         10*Omega = {min:.4e} rad/s where the approximation is unreliable"
    )]
    FreeMassRegime { omega: f64, min: f64 },

    #[error("relative tolerance {value:e} outside the supported range [1e-12, 1e-3]")]
    TolOutOfRange { value: f64 },

    #[error(
        "quadrature stalled short of the requested tolerance: best estimate {best:.9e} \
         with error estimate {error:.3e}, target {target:.3e}"
    )]
    QuadratureStalled { best: f64, error: f64, target: f64 },

    #[error("integrand returned a non-finite value at {x:e}")]
    BadIntegrand { x: f64 },

    #[error("state became non-finite at step {step} (t = {time:.6e} s); reduce dt")]
    NumericalInstability { step: usize, time: f64 },

    #[error("record holds {len} samples, need at least {min} for spectral inference")]
    RecordTooShort { len: usize, min: usize },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to
    /// rejected inputs. CLI exit codes key off this split.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureStalled { .. }
                | Error::NumericalInstability { .. }
                | Error::BadIntegrand { .. }
        )
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Negative { name, value })
    }
}
