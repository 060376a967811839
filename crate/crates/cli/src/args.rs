//! Shared argument types and helpers for the subcommands.

use clap::ValueEnum;
use lc_core::model::{validate_system, EquationKind, PotentialSpec, QuantumNumbers, SystemSpec};
use lc_core::spectra::{self, EnergyBranch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationArg {
    Schroedinger,
    Kg,
    Dirac,
}

impl EquationArg {
    pub fn kind(self) -> EquationKind {
        match self {
            EquationArg::Schroedinger => EquationKind::Schroedinger,
            EquationArg::Kg => EquationKind::KleinGordon,
            EquationArg::Dirac => EquationKind::Dirac,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    Coulomb,
    Oscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    #[value(name = "even-lo")]
    EvenLo,
    #[value(name = "odd-n1n2")]
    OddN1N2,
    Both,
}

/// Builds and validates the system from the flag values.
pub fn build_system(
    equation: EquationArg,
    potential: PotentialArg,
    mass: f64,
    kappa: Option<f64>,
    omega: Option<f64>,
) -> Result<SystemSpec, String> {
    let potential = match potential {
        PotentialArg::Coulomb => PotentialSpec::Coulomb {
            kappa: kappa.ok_or("--kappa is required for the coulomb potential")?,
        },
        PotentialArg::Oscillator => PotentialSpec::Oscillator {
            omega: omega.ok_or("--omega is required for the oscillator potential")?,
        },
    };
    validate_system(SystemSpec {
        equation: equation.kind(),
        potential,
        mass,
    })
    .map_err(|e| e.to_string())
}

/// Parses `A..B` (inclusive) or a single value.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |t: &str| -> Result<i64, String> {
        t.trim()
            .parse()
            .map_err(|_| format!("invalid range bound `{t}`"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}

/// Closed-form level of the system at polar label (k, l).
pub fn closed_form_energy(spec: &SystemSpec, qn: QuantumNumbers) -> Result<f64, String> {
    let s = 2 * qn.k + 2 * qn.l.unsigned_abs() + 1;
    let n = 2 * qn.k + qn.l.unsigned_abs();
    match (spec.equation, spec.potential) {
        (EquationKind::Schroedinger, PotentialSpec::Coulomb { kappa }) => {
            Ok(-2.0 * spec.mass * kappa * kappa / f64::from(s * s))
        }
        (EquationKind::Schroedinger, PotentialSpec::Oscillator { omega }) => {
            Ok(f64::from(n + 1) * omega)
        }
        (_, PotentialSpec::Coulomb { kappa }) => {
            spectra::rel_hydrogen_energy(spec.mass, kappa, s, EnergyBranch::Plus)
                .map_err(|e| e.to_string())
        }
        (_, PotentialSpec::Oscillator { omega }) => {
            Ok(spectra::rel_oscillator_level(spec.mass, omega, n))
        }
    }
}

/// Angular sample count paired with a radial resolution: refining the
/// radial grid alone would leave the residuals floored by the angular
/// truncation error.
pub fn theta_for(n_r: usize) -> usize {
    (n_r / 8).max(16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_forms() {
        assert_eq!(parse_range("3"), Ok((3, 3)));
        assert_eq!(parse_range("0..2"), Ok((0, 2)));
        assert_eq!(parse_range("-2..2"), Ok((-2, 2)));
        assert!(parse_range("2..0").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn closed_forms_by_family() {
        let nr = build_system(
            EquationArg::Schroedinger,
            PotentialArg::Coulomb,
            1.0,
            Some(1.0),
            None,
        )
        .unwrap();
        let e = closed_form_energy(&nr, QuantumNumbers::new(0, 0)).unwrap();
        assert!((e + 2.0).abs() < 1e-14);

        let kg = build_system(EquationArg::Kg, PotentialArg::Coulomb, 1.0, Some(0.5), None)
            .unwrap();
        let e = closed_form_energy(&kg, QuantumNumbers::new(0, 0)).unwrap();
        assert!((e - 0.6).abs() < 1e-14);
    }

    #[test]
    fn validation_failures_are_usage_errors() {
        let err = build_system(
            EquationArg::Dirac,
            PotentialArg::Coulomb,
            1.0,
            Some(-1.0),
            None,
        )
        .unwrap_err();
        assert!(err.contains("kappa"));
    }
}
