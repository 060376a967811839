//! Closed-form spectra and the parameter maps connecting the 2D Coulomb and
//! harmonic-oscillator systems, plus the parity-based level matching between
//! the two spectra.
//!
//! Non-relativistic direction: a hydrogen system (mu, E < 0, kappa) is
//! equivalent to an oscillator with m = 4*mu, omega = sqrt(-E/(2*mu)),
//! epsilon = kappa. Relativistic direction (equal scalar and vector
//! potentials): kappa = (epsilon - m)/4, M + E = m + epsilon,
//! M - E = m*omega^2/8.

use crate::model::{LevelLabel, OscillatorParams, QuantumNumbers, SpectrumEntry};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Energy-agreement tolerance for matched closed-form pairs.
pub const MATCH_TOL_CLOSED: f64 = 1e-8;
/// Energy-agreement tolerance for matched numerical pairs.
pub const MATCH_TOL_NUMERIC: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("principal quantum number must be positive")]
    NonPositiveN,
    #[error("bound motion requires E < 0")]
    NonNegativeEnergy,
    #[error("oscillator level epsilon must exceed the mass m for a positive coupling")]
    EpsilonBelowMass,
    #[error("M + E <= 4*kappa leaves no positive oscillator mass")]
    MassNonPositive,
    #[error("M < E would require an imaginary oscillator frequency")]
    ImaginaryFrequency,
    #[error("level index s must be >= 1")]
    NonPositiveS,
    #[error("hydrogen level (k={k}, l={l}) has no even-l_o oscillator partner")]
    UnmatchedHydrogenLevel { k: u32, l: i32 },
}

// ─── Non-relativistic ────────────────────────────────────────────────

/// Bohr energy -mu*kappa^2/(2n^2). `n` may be a half-integer: the polar
/// levels of the 2D atom sit at n = k + |l| + 1/2.
pub fn nr_bohr_energy(mu: f64, kappa: f64, n: f64) -> Result<f64, SpectraError> {
    if !(n > 0.0) {
        return Err(SpectraError::NonPositiveN);
    }
    Ok(-mu * kappa * kappa / (2.0 * n * n))
}

/// 2D oscillator level (n1 + n2 + 1) * omega.
pub fn nr_oscillator_level(omega: f64, n1: u32, n2: u32) -> f64 {
    f64::from(n1 + n2 + 1) * omega
}

/// Maps a bound hydrogen state (mu, E < 0, kappa) to its dual oscillator:
/// m = 4*mu, omega = sqrt(-E/(2*mu)), epsilon = kappa.
pub fn nr_map_hydrogen_to_oscillator(
    mu: f64,
    energy: f64,
    kappa: f64,
) -> Result<OscillatorParams, SpectraError> {
    if energy >= 0.0 {
        return Err(SpectraError::NonNegativeEnergy);
    }
    Ok(OscillatorParams {
        mass: 4.0 * mu,
        omega: (-energy / (2.0 * mu)).sqrt(),
        epsilon: kappa,
    })
}

/// Hydrogen levels obtained by composing the oscillator spectrum with the
/// parameter map under the even-l_o selection rule: for each admissible
/// N = n1 + n2 = 2k + l_o (l_o even), kappa = (N+1)*omega gives
/// E = -2*mu*kappa^2/(N+1)^2. Entries carry hydrogen labels
/// (k, l_h = l_o/2) and are sorted by (l_h, k).
pub fn nr_hydrogen_levels_via_oscillator(
    mu: f64,
    kappa: f64,
    max_level: u32,
) -> Vec<SpectrumEntry> {
    let mut entries = Vec::new();
    for l_h in 0..=(max_level / 2) {
        let l_o = 2 * l_h;
        let mut k = 0;
        while 2 * k + l_o <= max_level {
            let n_tot = 2 * k + l_o;
            let energy = -2.0 * mu * kappa * kappa / f64::from((n_tot + 1) * (n_tot + 1));
            entries.push(SpectrumEntry::closed(
                LevelLabel::Polar(QuantumNumbers::new(k, l_h as i32)),
                energy,
            ));
            k += 1;
        }
    }
    entries
}

// ─── Relativistic parameter maps ─────────────────────────────────────

/// Hydrogen-side parameters produced by the forward map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelHydrogen {
    pub mass: f64,
    pub energy: f64,
    pub kappa: f64,
}

/// Forward map: kappa = (epsilon - m)/4, M = (m+epsilon)/2 + m*omega^2/16,
/// E = (m+epsilon)/2 - m*omega^2/16. Satisfies M+E = m+epsilon and
/// M-E = m*omega^2/8 exactly.
pub fn rel_map_oscillator_to_hydrogen(p: OscillatorParams) -> Result<RelHydrogen, SpectraError> {
    if p.epsilon <= p.mass {
        return Err(SpectraError::EpsilonBelowMass);
    }
    let half_sum = 0.5 * (p.mass + p.epsilon);
    let half_gap = p.mass * p.omega * p.omega / 16.0;
    Ok(RelHydrogen {
        mass: half_sum + half_gap,
        energy: half_sum - half_gap,
        kappa: 0.25 * (p.epsilon - p.mass),
    })
}

/// Inverse map: epsilon = (M+E+4k)/2, m = (M+E-4k)/2,
/// omega = sqrt(8(M-E)/m). Round-trips with the forward map.
pub fn rel_map_hydrogen_to_oscillator(
    mass: f64,
    energy: f64,
    kappa: f64,
) -> Result<OscillatorParams, SpectraError> {
    let sum = mass + energy;
    if sum <= 4.0 * kappa {
        return Err(SpectraError::MassNonPositive);
    }
    if mass < energy {
        return Err(SpectraError::ImaginaryFrequency);
    }
    let m = 0.5 * (sum - 4.0 * kappa);
    Ok(OscillatorParams {
        mass: m,
        omega: (8.0 * (mass - energy) / m).sqrt(),
        epsilon: 0.5 * (sum + 4.0 * kappa),
    })
}

/// The transformed-equation coefficient frame, i.e. the raw algebra of the
/// relativistic parameter map without positivity guards. For strong
/// couplings (M + E < 4*kappa) the nominal oscillator mass turns negative
/// and m*omega^2 with it, yet the operator coefficients that actually
/// appear in the transformed equation stay positive:
/// m*omega^2*(m+epsilon)/2 = 4(M^2-E^2) and epsilon^2-m^2 = 4(M+E)*kappa.
///
/// The product m*omega^2 is stored directly so the frame stays well
/// defined on that branch, where omega itself would be imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorFrame {
    pub mass: f64,
    pub m_omega_sq: f64,
    pub epsilon: f64,
}

impl OscillatorFrame {
    pub fn new(mass: f64, omega: f64, epsilon: f64) -> Self {
        OscillatorFrame {
            mass,
            m_omega_sq: mass * omega * omega,
            epsilon,
        }
    }

    /// Frame of the transformed relativistic hydrogen equation:
    /// m = (M+E-4k)/2, epsilon = (M+E+4k)/2, m*omega^2 = 8(M-E).
    pub fn from_hydrogen(mass: f64, energy: f64, kappa: f64) -> Self {
        OscillatorFrame {
            mass: 0.5 * (mass + energy - 4.0 * kappa),
            m_omega_sq: 8.0 * (mass - energy),
            epsilon: 0.5 * (mass + energy + 4.0 * kappa),
        }
    }

    /// Coefficient of u^2 in the transformed scalar equation,
    /// m*omega^2*(m+epsilon)/2.
    pub fn quadratic_coeff(&self) -> f64 {
        0.5 * self.m_omega_sq * (self.mass + self.epsilon)
    }

    /// Constant shift epsilon^2 - m^2 in the transformed scalar equation.
    pub fn constant_shift(&self) -> f64 {
        self.epsilon * self.epsilon - self.mass * self.mass
    }
}

// ─── Relativistic oscillator cubic ───────────────────────────────────

/// Root-selection policy for the oscillator cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSelection {
    /// The unique real root with epsilon > m (epsilon = m when omega = 0).
    PhysicalBranch,
    /// Every real root of the cubic.
    AllRealRoots,
}

/// One real root of the oscillator cubic. `singular` marks epsilon = -m,
/// where the (epsilon + m) factor divided out of the quartic form vanishes
/// (only possible at omega = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorRoot {
    pub epsilon: f64,
    pub singular: bool,
}

/// Solves (epsilon - m)^2 (epsilon + m) = 2 m omega^2 (n+1)^2 for real
/// epsilon. Closed-form (trigonometric / Cardano) evaluation followed by
/// Newton polish, so the roots are bit-stable.
pub fn rel_oscillator_levels(
    m: f64,
    omega: f64,
    n: u32,
    sel: RootSelection,
) -> Vec<OscillatorRoot> {
    let rhs = cubic_rhs(m, omega, n);
    let roots = cubic_real_roots(m, rhs);
    match sel {
        RootSelection::PhysicalBranch => {
            // Largest real root: the only one with epsilon > m when
            // omega > 0, and epsilon = m at omega = 0.
            let top = roots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            vec![OscillatorRoot {
                epsilon: top,
                singular: false,
            }]
        }
        RootSelection::AllRealRoots => roots
            .into_iter()
            .map(|epsilon| OscillatorRoot {
                singular: (epsilon + m).abs() <= 1e-12 * m.abs().max(1.0),
                epsilon,
            })
            .collect(),
    }
}

/// Physical-branch root as a plain value.
pub fn rel_oscillator_level(m: f64, omega: f64, n: u32) -> f64 {
    rel_oscillator_levels(m, omega, n, RootSelection::PhysicalBranch)[0].epsilon
}

/// Right-hand side 2 m omega^2 (n+1)^2 of the cubic.
pub fn cubic_rhs(m: f64, omega: f64, n: u32) -> f64 {
    let s = f64::from(n + 1);
    2.0 * m * omega * omega * s * s
}

/// Residual of the cubic at a candidate root, normalized by
/// max(1, m^3, rhs).
pub fn cubic_residual(m: f64, omega: f64, n: u32, epsilon: f64) -> f64 {
    let rhs = cubic_rhs(m, omega, n);
    let lhs = (epsilon - m) * (epsilon - m) * (epsilon + m);
    (lhs - rhs).abs() / 1.0_f64.max(m * m * m).max(rhs.abs())
}

/// Real roots of (e - m)^2 (e + m) = rhs, ascending, deduplicated.
fn cubic_real_roots(m: f64, rhs: f64) -> Vec<f64> {
    if rhs == 0.0 {
        if m == 0.0 {
            return vec![0.0];
        }
        return vec![-m, m];
    }
    // e^3 - m e^2 - m^2 e + (m^3 - rhs) = 0; depress with e = t + m/3.
    let p = -4.0 * m * m / 3.0;
    let q = 16.0 * m * m * m / 27.0 - rhs;
    let disc = 0.25 * q * q + p * p * p / 27.0;
    let shift = m / 3.0;
    let mut roots: Vec<f64> = if disc > 0.0 {
        let sq = disc.sqrt();
        let t = (-0.5 * q + sq).cbrt() + (-0.5 * q - sq).cbrt();
        vec![t + shift]
    } else {
        let amp = 2.0 * (-p / 3.0).sqrt();
        let cos_arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
        let phi = cos_arg.clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| amp * ((phi - 2.0 * std::f64::consts::PI * f64::from(k)) / 3.0).cos() + shift)
            .collect()
    };
    // Newton polish on the factored form.
    for e in roots.iter_mut() {
        for _ in 0..2 {
            let f = (*e - m) * (*e - m) * (*e + m) - rhs;
            let df = (*e - m) * (3.0 * *e + m);
            if df != 0.0 {
                *e -= f / df;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0));
    roots
}

// ─── Relativistic hydrogen ───────────────────────────────────────────

/// Sign branch of the closed-form relativistic hydrogen energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyBranch {
    Plus,
    Minus,
}

/// Closed-form relativistic hydrogen level
/// E = (+-s^2 - kappa^2)/(s^2 + kappa^2) * M. The minus branch evaluates
/// to -M identically and is exposed verbatim but not verified.
pub fn rel_hydrogen_energy(
    mass: f64,
    kappa: f64,
    s: u32,
    branch: EnergyBranch,
) -> Result<f64, SpectraError> {
    if s == 0 {
        return Err(SpectraError::NonPositiveS);
    }
    let s2 = f64::from(s) * f64::from(s);
    let k2 = kappa * kappa;
    let signed = match branch {
        EnergyBranch::Plus => s2,
        EnergyBranch::Minus => -s2,
    };
    Ok((signed - k2) / (s2 + k2) * mass)
}

/// Hydrogen levels assembled through the oscillator route: for each label
/// (k, l_h >= 0) with n = 2k + 2 l_h <= n_max, the closed-form energy at
/// s = n + 1 is checked by mapping it back through the inverse parameter
/// map and evaluating the oscillator-cubic residual, which is stored on
/// the entry. Entries sorted by (l_h, k).
pub fn rel_hydrogen_levels_via_oscillator(
    mass: f64,
    kappa: f64,
    n_max: u32,
) -> Result<Vec<SpectrumEntry>, SpectraError> {
    let mut entries = Vec::new();
    for l_h in 0..=(n_max / 2) {
        let mut k = 0;
        while 2 * k + 2 * l_h <= n_max {
            let n = 2 * k + 2 * l_h;
            let s = n + 1;
            let energy = rel_hydrogen_energy(mass, kappa, s, EnergyBranch::Plus)?;
            let osc = rel_map_hydrogen_to_oscillator(mass, energy, kappa)?;
            let residual = cubic_residual(osc.mass, osc.omega, n, osc.epsilon);
            let mut entry = SpectrumEntry::closed(
                LevelLabel::Polar(QuantumNumbers::new(k, l_h as i32)),
                energy,
            );
            entry.residual = residual;
            entries.push(entry);
            k += 1;
        }
    }
    Ok(entries)
}

// ─── Level matching ──────────────────────────────────────────────────

/// Which oscillator levels are admitted as hydrogen partners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterRule {
    /// Keep even l_o and pair with the hydrogen level (k, l_h = l_o/2).
    EvenLo,
    /// Keep odd n1 + n2 = 2k + |l_o|. No angular pairing exists here
    /// (l_o/2 is not an integer), so pairs are best-effort by energy.
    OddN1N2,
}

impl FilterRule {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterRule::EvenLo => "even-lo",
            FilterRule::OddN1N2 => "odd-n1n2",
        }
    }
}

/// One oscillator/hydrogen pair with its energy-agreement diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPair {
    pub oscillator: SpectrumEntry,
    pub hydrogen: SpectrumEntry,
    /// Oscillator entry carried into the hydrogen frame by the map.
    pub predicted_energy: f64,
    /// |predicted - hydrogen| relative to the hydrogen energy.
    pub discrepancy: f64,
    pub agrees: bool,
}

/// Outcome of pairing the two level lists under a filter rule.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub rule: FilterRule,
    pub matched: Vec<MatchedPair>,
    /// Oscillator entries removed by the parity filter.
    pub rejected: Vec<SpectrumEntry>,
    /// Oscillator entries that passed the filter but found no hydrogen
    /// partner (list depth mismatch; empty when depths agree).
    pub unpaired_oscillator: Vec<SpectrumEntry>,
    /// True when every matched pair agrees within tolerance.
    pub supported: bool,
}

/// Pairs oscillator levels (k, l_o) with hydrogen levels (k, l_h) under
/// `rule`. `to_hydrogen_frame` maps an oscillator entry to its predicted
/// hydrogen-frame energy; predicted and listed energies must agree within
/// `tol` (relative) for the pair to count as agreeing.
pub fn match_levels(
    osc: &[SpectrumEntry],
    hyd: &[SpectrumEntry],
    rule: FilterRule,
    to_hydrogen_frame: impl Fn(&SpectrumEntry) -> f64,
    tol: f64,
) -> Result<MatchReport, SpectraError> {
    let mut matched = Vec::new();
    let mut rejected = Vec::new();
    let mut unpaired = Vec::new();
    let mut claimed = vec![false; hyd.len()];

    for entry in osc {
        let qn = match entry.polar() {
            Some(qn) => qn,
            None => continue,
        };
        let keep = match rule {
            FilterRule::EvenLo => qn.l.rem_euclid(2) == 0,
            FilterRule::OddN1N2 => (2 * i64::from(qn.k) + i64::from(qn.l.unsigned_abs())) % 2 == 1,
        };
        if !keep {
            rejected.push(*entry);
            continue;
        }
        let predicted = to_hydrogen_frame(entry);
        let partner = match rule {
            FilterRule::EvenLo => {
                let want = QuantumNumbers::new(qn.k, qn.l / 2);
                hyd.iter()
                    .position(|h| h.polar() == Some(want))
            }
            FilterRule::OddN1N2 => {
                // Nearest hydrogen level by predicted energy.
                hyd.iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        (a.energy - predicted)
                            .abs()
                            .total_cmp(&(b.energy - predicted).abs())
                    })
                    .map(|(i, _)| i)
            }
        };
        match partner {
            Some(i) => {
                claimed[i] = true;
                let h = hyd[i];
                let denom = h.energy.abs().max(f64::MIN_POSITIVE);
                let discrepancy = (predicted - h.energy).abs() / denom;
                matched.push(MatchedPair {
                    oscillator: *entry,
                    hydrogen: h,
                    predicted_energy: predicted,
                    discrepancy,
                    agrees: discrepancy <= tol,
                });
            }
            None => unpaired.push(*entry),
        }
    }

    if rule == FilterRule::EvenLo {
        for (i, h) in hyd.iter().enumerate() {
            if !claimed[i] {
                if let Some(qn) = h.polar() {
                    return Err(SpectraError::UnmatchedHydrogenLevel { k: qn.k, l: qn.l });
                }
            }
        }
    }

    let supported = !matched.is_empty() && matched.iter().all(|p| p.agrees);
    Ok(MatchReport {
        rule,
        matched,
        rejected,
        unpaired_oscillator: unpaired,
        supported,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SolveMethod;
    use approx::assert_relative_eq;

    #[test]
    fn bohr_energy_examples() {
        assert_relative_eq!(nr_bohr_energy(1.0, 1.0, 1.0).unwrap(), -0.5);
        assert_relative_eq!(nr_bohr_energy(1.0, 1.0, 2.0).unwrap(), -0.125);
        assert_eq!(nr_bohr_energy(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(
            nr_bohr_energy(1.0, 1.0, 0.0),
            Err(SpectraError::NonPositiveN)
        );
        assert_eq!(
            nr_bohr_energy(1.0, 1.0, -2.0),
            Err(SpectraError::NonPositiveN)
        );
    }

    #[test]
    fn bohr_energy_increases_with_n() {
        let mut prev = nr_bohr_energy(1.0, 1.0, 0.5).unwrap();
        for i in 1..20 {
            let n = 0.5 + 0.5 * f64::from(i);
            let e = nr_bohr_energy(1.0, 1.0, n).unwrap();
            assert!(e > prev);
            assert!(e < 0.0);
            prev = e;
        }
    }

    #[test]
    fn oscillator_level_examples() {
        assert_relative_eq!(nr_oscillator_level(1.0, 0, 0), 1.0);
        assert_relative_eq!(nr_oscillator_level(2.0, 1, 2), 8.0);
        assert_eq!(nr_oscillator_level(0.0, 3, 5), 0.0);
    }

    #[test]
    fn nr_map_examples() {
        let p = nr_map_hydrogen_to_oscillator(1.0, -0.5, 1.0).unwrap();
        assert_relative_eq!(p.mass, 4.0);
        assert_relative_eq!(p.omega, 0.5);
        assert_relative_eq!(p.epsilon, 1.0);

        let p = nr_map_hydrogen_to_oscillator(1.0, -2.0, 1.0).unwrap();
        assert_relative_eq!(p.omega, 1.0);

        assert_eq!(
            nr_map_hydrogen_to_oscillator(1.0, 0.1, 1.0),
            Err(SpectraError::NonNegativeEnergy)
        );
    }

    #[test]
    fn nr_levels_via_oscillator_examples() {
        let levels = nr_hydrogen_levels_via_oscillator(1.0, 1.0, 2);
        let ground = levels
            .iter()
            .find(|e| e.polar() == Some(QuantumNumbers::new(0, 0)))
            .unwrap();
        assert_relative_eq!(ground.energy, -2.0);
        let l1 = levels
            .iter()
            .find(|e| e.polar() == Some(QuantumNumbers::new(0, 1)))
            .unwrap();
        assert_relative_eq!(l1.energy, -2.0 / 9.0);

        let half = nr_hydrogen_levels_via_oscillator(1.0, 0.5, 0);
        assert_eq!(half.len(), 1);
        assert_relative_eq!(half[0].energy, -0.5);
    }

    #[test]
    fn nr_levels_match_polar_bohr_formula() {
        // Composition of the maps gives -2 mu kappa^2 / (2k + 2 l_h + 1)^2,
        // i.e. the Bohr formula at half-integer n = k + l_h + 1/2.
        for entry in nr_hydrogen_levels_via_oscillator(0.7, 1.3, 6) {
            let qn = entry.polar().unwrap();
            let n = f64::from(qn.k) + f64::from(qn.l.unsigned_abs()) + 0.5;
            let bohr = nr_bohr_energy(0.7, 1.3, n).unwrap();
            assert_relative_eq!(entry.energy, bohr, max_relative = 1e-14);
        }
    }

    #[test]
    fn rel_forward_map_worked_chain() {
        let p = OscillatorParams {
            mass: 1.0,
            omega: 1.5_f64.sqrt(),
            epsilon: 2.0,
        };
        let h = rel_map_oscillator_to_hydrogen(p).unwrap();
        assert_relative_eq!(h.mass, 1.59375, max_relative = 1e-15);
        assert_relative_eq!(h.energy, 1.40625, max_relative = 1e-15);
        assert_relative_eq!(h.kappa, 0.25, max_relative = 1e-15);
        // All three constraints hold exactly.
        assert_relative_eq!(h.mass + h.energy, p.mass + p.epsilon, max_relative = 1e-15);
        assert_relative_eq!(
            h.mass - h.energy,
            p.mass * p.omega * p.omega / 8.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn rel_forward_map_zero_omega_forces_m_eq_e() {
        let p = OscillatorParams {
            mass: 1.0,
            omega: 0.0,
            epsilon: 2.0,
        };
        let h = rel_map_oscillator_to_hydrogen(p).unwrap();
        assert_relative_eq!(h.mass, 1.5);
        assert_relative_eq!(h.energy, 1.5);
        assert_relative_eq!(h.kappa, 0.25);

        let flat = OscillatorParams {
            mass: 1.0,
            omega: 1.0,
            epsilon: 1.0,
        };
        assert_eq!(
            rel_map_oscillator_to_hydrogen(flat),
            Err(SpectraError::EpsilonBelowMass)
        );
    }

    #[test]
    fn rel_inverse_map_examples() {
        let p = rel_map_hydrogen_to_oscillator(1.59375, 1.40625, 0.25).unwrap();
        assert_relative_eq!(p.mass, 1.0, max_relative = 1e-14);
        assert_relative_eq!(p.omega, 1.5_f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(p.epsilon, 2.0, max_relative = 1e-14);

        let flat = rel_map_hydrogen_to_oscillator(1.0, 1.0, 0.1).unwrap();
        assert_relative_eq!(flat.omega, 0.0);
        assert_relative_eq!(flat.mass, 0.8);
        assert_relative_eq!(flat.epsilon, 1.2);

        assert_eq!(
            rel_map_hydrogen_to_oscillator(1.0, 0.9, 0.5),
            Err(SpectraError::MassNonPositive)
        );
        assert_eq!(
            rel_map_hydrogen_to_oscillator(1.0, 1.1, 0.01),
            Err(SpectraError::ImaginaryFrequency)
        );
    }

    #[test]
    fn oscillator_frame_matches_direct_transform_coefficients() {
        // Strong coupling: the guarded map rejects this point, but the
        // transformed-equation coefficients stay positive and equal the
        // direct algebra 4(M^2-E^2) and 4(M+E)kappa.
        let (mass, kappa) = (1.0, 0.5);
        let energy = rel_hydrogen_energy(mass, kappa, 1, EnergyBranch::Plus).unwrap();
        assert!(rel_map_hydrogen_to_oscillator(mass, energy, kappa).is_err());
        let frame = OscillatorFrame::from_hydrogen(mass, energy, kappa);
        assert_relative_eq!(
            frame.quadratic_coeff(),
            4.0 * (mass * mass - energy * energy),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            frame.constant_shift(),
            4.0 * (mass + energy) * kappa,
            max_relative = 1e-13
        );
    }

    #[test]
    fn cubic_worked_root_is_exact() {
        // (e-1)^2 (e+1) = 3 factors as (e-2)(e^2+e+1).
        let eps = rel_oscillator_level(1.0, 1.5_f64.sqrt(), 0);
        assert_relative_eq!(eps, 2.0, max_relative = 1e-14);
        assert!(cubic_residual(1.0, 1.5_f64.sqrt(), 0, eps) <= 1e-15);
    }

    #[test]
    fn cubic_zero_omega_collapses_to_mass() {
        assert_relative_eq!(rel_oscillator_level(1.0, 0.0, 5), 1.0);
        let all = rel_oscillator_levels(1.0, 0.0, 5, RootSelection::AllRealRoots);
        assert_eq!(all.len(), 2);
        assert!(all.iter().any(|r| r.singular && r.epsilon == -1.0));
    }

    #[test]
    fn cubic_matches_bisection_oracle() {
        // Independent oracle: bisection on (e-2)^2 (e+2) = 16 over [3, 4].
        let (m, omega, n) = (2.0, 1.0, 1);
        let rhs = cubic_rhs(m, omega, n);
        let f = |e: f64| (e - m) * (e - m) * (e + m) - rhs;
        let (mut lo, mut hi) = (3.0, 4.0);
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let eps = rel_oscillator_level(m, omega, n);
        assert_relative_eq!(eps, oracle, max_relative = 1e-12);
        assert_relative_eq!(eps, 3.6786, max_relative = 1e-4);
    }

    #[test]
    fn physical_branch_exceeds_mass_and_grows_with_n() {
        let m = 1.3;
        let omega = 0.7;
        let mut prev = m;
        for n in 0..12 {
            let eps = rel_oscillator_level(m, omega, n);
            assert!(eps > prev, "epsilon must increase with n");
            assert!(cubic_residual(m, omega, n, eps) <= 1e-12);
            prev = eps;
        }
    }

    #[test]
    fn rel_hydrogen_energy_examples() {
        assert_eq!(
            rel_hydrogen_energy(1.0, 1.0, 1, EnergyBranch::Plus).unwrap(),
            0.0
        );
        assert_relative_eq!(
            rel_hydrogen_energy(1.0, 0.5, 1, EnergyBranch::Plus).unwrap(),
            0.6
        );
        assert_relative_eq!(
            rel_hydrogen_energy(1.0, 0.5, 3, EnergyBranch::Plus).unwrap(),
            8.75 / 9.25
        );
        assert_relative_eq!(
            rel_hydrogen_energy(1.0, 0.5, 1, EnergyBranch::Minus).unwrap(),
            -1.0
        );
        assert_eq!(
            rel_hydrogen_energy(1.0, 0.5, 0, EnergyBranch::Plus),
            Err(SpectraError::NonPositiveS)
        );
    }

    #[test]
    fn rel_hydrogen_energy_algebraic_identity() {
        // E - M = -2 kappa^2 M / (s^2 + kappa^2); the float-evaluated
        // difference cancels, so compare at the few-ulp-of-E level.
        for s in 1..=9 {
            for &kappa in &[0.1, 0.25, 0.4] {
                let mass = 1.7;
                let e = rel_hydrogen_energy(mass, kappa, s, EnergyBranch::Plus).unwrap();
                let s2 = f64::from(s) * f64::from(s);
                let expect = -2.0 * kappa * kappa * mass / (s2 + kappa * kappa);
                assert_relative_eq!(e - mass, expect, epsilon = 1e-15 * mass);
            }
        }
    }

    #[test]
    fn rel_hydrogen_energy_monotone_in_s() {
        let mut prev = f64::NEG_INFINITY;
        for s in 1..=15 {
            let e = rel_hydrogen_energy(2.0, 0.8, s, EnergyBranch::Plus).unwrap();
            assert!(e > prev);
            assert!(e.abs() < 2.0);
            prev = e;
        }
    }

    #[test]
    fn rel_levels_via_oscillator_worked_chain() {
        let levels = rel_hydrogen_levels_via_oscillator(1.59375, 0.25, 0).unwrap();
        assert_eq!(levels.len(), 1);
        assert_relative_eq!(levels[0].energy, 1.40625, max_relative = 1e-14);
        assert!(levels[0].residual <= 1e-14);

        let levels = rel_hydrogen_levels_via_oscillator(1.0, 0.25, 4).unwrap();
        for entry in &levels {
            let qn = entry.polar().unwrap();
            let s = 2 * qn.k + 2 * qn.l.unsigned_abs() + 1;
            let closed = rel_hydrogen_energy(1.0, 0.25, s, EnergyBranch::Plus).unwrap();
            assert_relative_eq!(entry.energy, closed, max_relative = 1e-10);
            assert!(entry.residual <= 1e-12);
        }
    }

    fn osc_entry(k: u32, l: i32, energy: f64) -> SpectrumEntry {
        SpectrumEntry::closed(LevelLabel::Polar(QuantumNumbers::new(k, l)), energy)
    }

    #[test]
    fn match_levels_spec_example() {
        // m = 1, omega = 1 oscillator; epsilon = 2k + |l| + 1.
        let osc = vec![
            osc_entry(0, 0, 1.0),
            osc_entry(0, 1, 2.0),
            osc_entry(0, 2, 3.0),
        ];
        // Dual hydrogen systems share E = -m omega^2 / 2 = -0.5 with
        // kappa = epsilon; list both reachable labels at that energy.
        let hyd = vec![osc_entry(0, 0, -0.5), osc_entry(0, 1, -0.5)];
        let mu = 0.25;
        let to_frame = |e: &SpectrumEntry| {
            let qn = e.polar().unwrap();
            let s = f64::from(2 * qn.k + qn.l.unsigned_abs() + 1);
            -2.0 * mu * e.energy * e.energy / (s * s)
        };

        let report = match_levels(&osc, &hyd, FilterRule::EvenLo, to_frame, MATCH_TOL_CLOSED)
            .expect("even-lo match");
        assert_eq!(report.matched.len(), 2);
        assert_eq!(report.rejected.len(), 1);
        assert_eq!(report.rejected[0].polar().unwrap().l, 1);
        assert!(report.supported);
        for pair in &report.matched {
            let lo = pair.oscillator.polar().unwrap().l;
            let lh = pair.hydrogen.polar().unwrap().l;
            assert_eq!(lh, lo / 2);
            assert!(pair.agrees);
        }

        let report = match_levels(&osc, &hyd, FilterRule::OddN1N2, to_frame, MATCH_TOL_CLOSED)
            .expect("odd match");
        assert_eq!(report.matched.len(), 1);
        assert_eq!(report.matched[0].oscillator.polar().unwrap().l, 1);
        assert_eq!(report.rejected.len(), 2);
    }

    #[test]
    fn odd_rule_fails_against_fixed_hydrogen_spectrum() {
        // Fixed hydrogen (mu = 1, kappa = 1): oracle levels sit at
        // -2 mu kappa^2 / (2k + 2 l_h + 1)^2. The even rule's predictions
        // reproduce them; the odd rule predicts energies at even
        // denominators, which the spectrum does not contain.
        let (mu, kappa) = (1.0, 1.0);
        let hyd = nr_hydrogen_levels_via_oscillator(mu, kappa, 4);
        let mut osc = Vec::new();
        for l_o in 0..=4i32 {
            for k in 0..=2u32 {
                if 2 * k + l_o.unsigned_abs() <= 4 {
                    osc.push(osc_entry(k, l_o, kappa));
                }
            }
        }
        let to_frame = |e: &SpectrumEntry| {
            let qn = e.polar().unwrap();
            let n1 = f64::from(2 * qn.k + qn.l.unsigned_abs() + 1);
            -2.0 * mu * kappa * kappa / (n1 * n1)
        };
        let even = match_levels(&osc, &hyd, FilterRule::EvenLo, to_frame, MATCH_TOL_CLOSED)
            .expect("even-lo match");
        assert!(even.supported);
        let odd = match_levels(&osc, &hyd, FilterRule::OddN1N2, to_frame, MATCH_TOL_CLOSED)
            .expect("odd match");
        assert!(!odd.supported);
        assert!(odd.matched.iter().all(|p| !p.agrees));
    }

    #[test]
    fn match_levels_empty_input() {
        let report = match_levels(&[], &[], FilterRule::EvenLo, |_| 0.0, 1e-8).unwrap();
        assert!(report.matched.is_empty());
        assert!(report.rejected.is_empty());
        assert!(!report.supported);
    }

    #[test]
    fn match_levels_unmatched_hydrogen_errors() {
        let osc = vec![osc_entry(0, 0, 1.0)];
        let hyd = vec![osc_entry(0, 0, -0.5), osc_entry(1, 0, -0.1)];
        let err = match_levels(&osc, &hyd, FilterRule::EvenLo, |_| -0.5, 1e-8).unwrap_err();
        assert_eq!(err, SpectraError::UnmatchedHydrogenLevel { k: 1, l: 0 });
    }

    #[test]
    fn matched_entries_keep_method() {
        let mut num = osc_entry(0, 0, 1.0);
        num.method = SolveMethod::Numerical;
        let hyd = vec![osc_entry(0, 0, -0.5)];
        let report =
            match_levels(&[num], &hyd, FilterRule::EvenLo, |_| -0.5, MATCH_TOL_NUMERIC).unwrap();
        assert_eq!(report.matched[0].oscillator.method, SolveMethod::Numerical);
    }
}
