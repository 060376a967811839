//! Numerical verification of the 2D Coulomb / harmonic-oscillator duality
//! under the Levi-Civita squaring map, for the Schroedinger equation and
//! for the Klein-Gordon and Dirac equations with equal scalar and vector
//! potentials.
//!
//! - [`model`]: shared domain types and validation.
//! - [`spectra`]: closed-form spectra, the parameter maps in both
//!   directions, the oscillator cubic, and parity-based level matching.
//! - [`levicivita`]: the coordinate map, wavefunction pullbacks, operator
//!   residuals, and angular-index measurement.
//! - [`eigensolver`]: an independent finite-volume radial eigensolver,
//!   self-consistent for the energy-dependent relativistic couplings.
//!
//! With the `parallel` feature (default) bulk scans and grid sweeps run on
//! rayon; results are bit-identical to the sequential fallback.

pub mod eigensolver;
pub mod exec;
pub mod levicivita;
pub mod model;
pub mod spectra;
