//! Shared domain types: which equation, which potential, quantum numbers,
//! and the parameter triples the two dual systems exchange.
//!
//! Everything is in natural units ħ = c = 1. All types are immutable values
//! and freely shareable between threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which wave equation the system obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationKind {
    Schroedinger,
    KleinGordon,
    Dirac,
}

impl EquationKind {
    pub fn is_relativistic(self) -> bool {
        !matches!(self, EquationKind::Schroedinger)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EquationKind::Schroedinger => "schroedinger",
            EquationKind::KleinGordon => "kg",
            EquationKind::Dirac => "dirac",
        }
    }
}

/// External potential: attractive Coulomb `-kappa/r` or harmonic
/// oscillator `m omega^2 r^2 / 2`. For the relativistic equations the
/// potential enters with equal scalar and vector parts, V_S = V_V = V/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialSpec {
    Coulomb { kappa: f64 },
    Oscillator { omega: f64 },
}

impl PotentialSpec {
    pub fn coupling(self) -> f64 {
        match self {
            PotentialSpec::Coulomb { kappa } => kappa,
            PotentialSpec::Oscillator { omega } => omega,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PotentialSpec::Coulomb { .. } => "coulomb",
            PotentialSpec::Oscillator { .. } => "oscillator",
        }
    }
}

/// One bound-state problem: equation, potential, and the mass parameter
/// (reduced mass for Schroedinger, particle mass for KG/Dirac).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub equation: EquationKind,
    pub potential: PotentialSpec,
    pub mass: f64,
}

/// Coupling guard for relativistic Coulomb systems: the closed forms stay
/// finite for every kappa, so only gross misuse is rejected.
pub const COUPLING_GUARD_FACTOR: f64 = 10.0;

/// Polar labels: radial node count `k` and angular index `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub k: u32,
    pub l: i32,
}

impl QuantumNumbers {
    pub fn new(k: u32, l: i32) -> Self {
        QuantumNumbers { k, l }
    }
}

/// Cartesian oscillator labels (n1, n2). The polar relabeling of the same
/// level satisfies n1 + n2 = 2k + |l|, with matching parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartesianQN {
    pub n1: u32,
    pub n2: u32,
}

impl CartesianQN {
    pub fn new(n1: u32, n2: u32) -> Self {
        CartesianQN { n1, n2 }
    }

    /// Total quantum number N = n1 + n2.
    pub fn total(self) -> u32 {
        self.n1 + self.n2
    }
}

/// Hydrogen-side parameters. Relativistic: (M, E, kappa) with bound states
/// in -M < E < M. Non-relativistic: (mu, E, kappa) with E < 0 and Bohr
/// radius a = 1/(mu kappa).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrogenParams {
    pub mass: f64,
    pub energy: f64,
    pub kappa: f64,
}

/// Oscillator-side parameters (m, omega, epsilon).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub epsilon: f64,
}

/// How a spectrum entry was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    ClosedForm,
    Numerical,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::ClosedForm => "closed_form",
            SolveMethod::Numerical => "numerical",
        }
    }
}

/// Level label: polar (k, l) or Cartesian (n1, n2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LevelLabel {
    Polar(QuantumNumbers),
    Cartesian(CartesianQN),
}

/// One energy level. `residual` is 0 for closed forms and a discretization
/// or convergence diagnostic for numerical entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub qn: LevelLabel,
    pub energy: f64,
    pub method: SolveMethod,
    pub residual: f64,
}

impl SpectrumEntry {
    pub fn closed(qn: LevelLabel, energy: f64) -> Self {
        SpectrumEntry {
            qn,
            energy,
            method: SolveMethod::ClosedForm,
            residual: 0.0,
        }
    }

    /// Polar label if present.
    pub fn polar(&self) -> Option<QuantumNumbers> {
        match self.qn {
            LevelLabel::Polar(qn) => Some(qn),
            LevelLabel::Cartesian(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("mass must be positive")]
    NonPositiveMass,
    #[error("Coulomb coupling kappa must be positive")]
    NonPositiveKappa,
    #[error("oscillator frequency omega must be non-negative")]
    NegativeOmega,
    #[error("relativistic Coulomb coupling exceeds the kappa < 10*mass guard")]
    CouplingTooStrong,
}

/// Checks the type invariants and returns the spec unchanged. Idempotent.
pub fn validate_system(spec: SystemSpec) -> Result<SystemSpec, ModelError> {
    if !(spec.mass > 0.0) || !spec.mass.is_finite() {
        return Err(ModelError::NonPositiveMass);
    }
    match spec.potential {
        PotentialSpec::Coulomb { kappa } => {
            if !(kappa > 0.0) || !kappa.is_finite() {
                return Err(ModelError::NonPositiveKappa);
            }
            if spec.equation.is_relativistic() && kappa >= COUPLING_GUARD_FACTOR * spec.mass {
                return Err(ModelError::CouplingTooStrong);
            }
        }
        PotentialSpec::Oscillator { omega } => {
            if !(omega >= 0.0) || !omega.is_finite() {
                return Err(ModelError::NegativeOmega);
            }
        }
    }
    Ok(spec)
}
