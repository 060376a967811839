//! Independent numerical oracle: reduces each 2D system to a radial
//! eigenproblem, discretizes it with a cell-centered finite-volume scheme,
//! and solves it, including the self-consistent iteration the
//! energy-dependent KG/Dirac couplings require.
//!
//! Cells are centered at r_i = (i - 1/2) h with faces at j h. The flux
//! through the r = 0 face vanishes with the face weight, so the coordinate
//! singularity needs no boundary condition; the outer wall is Dirichlet via
//! ghost elimination. A diag(sqrt(r_i)) similarity makes the operator
//! symmetric tridiagonal with eigenvalue error O(h^2).

mod tridiag;

pub use tridiag::{solve_linear_spectrum, SymTridiag};

use crate::model::{EquationKind, PotentialSpec, QuantumNumbers, SystemSpec};
use crate::spectra::{self, EnergyBranch};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("M^2 + lambda < 0: no positive-branch bound state at this grid")]
    NegativeDiscriminant,
    #[error("fixed point did not converge within {iterations} iterations")]
    MaxIterExceeded { iterations: usize },
    #[error("inverse iteration failed to produce an eigenvector")]
    ConvergenceFailure,
    #[error("requested {count} eigenpairs from a dimension-{dim} matrix")]
    CountExceedsDimension { count: usize, dim: usize },
    #[error("M + E vanishes; the lower component is undefined")]
    DegenerateEnergy,
    #[error("grid violates the discretization invariants")]
    BadGrid,
}

/// Radial discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_cells: usize,
    pub r_max: f64,
}

impl GridSpec {
    pub fn new(n_cells: usize, r_max: f64) -> Result<Self, SolverError> {
        if n_cells < 16 || !(r_max > 0.0) {
            return Err(SolverError::BadGrid);
        }
        Ok(GridSpec { n_cells, r_max })
    }

    pub fn h(&self) -> f64 {
        self.r_max / self.n_cells as f64
    }

    /// Center of cell `i` (0-indexed): (i + 1/2) h.
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h()
    }

    /// Same radius, half the cells.
    pub fn coarsened(&self) -> Result<Self, SolverError> {
        GridSpec::new(self.n_cells / 2, self.r_max)
    }
}

/// Radial coupling W(r; E). The relativistic variants depend on the
/// energy iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingKind {
    /// W = -2 mu kappa / r
    NrCoulomb { mu: f64, kappa: f64 },
    /// W = mu^2 omega^2 r^2
    NrOscillator { mu: f64, omega: f64 },
    /// W = -(M + E) kappa / r
    RelCoulomb { mass: f64, kappa: f64 },
    /// W = (m + epsilon) m omega^2 r^2 / 2
    RelOscillator { mass: f64, omega: f64 },
}

impl CouplingKind {
    pub fn w_at(&self, r: f64, energy: f64) -> f64 {
        match *self {
            CouplingKind::NrCoulomb { mu, kappa } => -2.0 * mu * kappa / r,
            CouplingKind::NrOscillator { mu, omega } => {
                let c = mu * omega;
                c * c * r * r
            }
            CouplingKind::RelCoulomb { mass, kappa } => -(mass + energy) * kappa / r,
            CouplingKind::RelOscillator { mass, omega } => {
                0.5 * (mass + energy) * mass * omega * omega * r * r
            }
        }
    }
}

/// Meaning of the discrete eigenvalue lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetKind {
    /// lambda = 2 mu E
    TwoMuE { mu: f64 },
    /// lambda = E^2 - M^2; the solver takes the positive branch
    /// E = +sqrt(M^2 + lambda).
    ESqMinusMSq { mass: f64 },
}

impl TargetKind {
    fn energy_from_lambda(&self, lambda: f64) -> Result<f64, SolverError> {
        match *self {
            TargetKind::TwoMuE { mu } => Ok(lambda / (2.0 * mu)),
            TargetKind::ESqMinusMSq { mass } => {
                let disc = mass * mass + lambda;
                if disc < 0.0 {
                    Err(SolverError::NegativeDiscriminant)
                } else {
                    Ok(disc.sqrt())
                }
            }
        }
    }
}

/// A reduced 1D eigenproblem
/// -(1/r)(r R')' + (l^2/r^2) R + W(r; E) R = lambda R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub l: i32,
    pub coupling: CouplingKind,
    pub target: TargetKind,
    pub energy_dependent: bool,
}

/// Restricts a system to angular sector `l`. The Dirac case reuses the KG
/// radial problem exactly: eliminating the lower component leaves the
/// upper component with the same energy-dependent scalar equation.
pub fn radial_reduce(spec: &SystemSpec, l: i32) -> RadialProblem {
    let mass = spec.mass;
    let (coupling, target, energy_dependent) = match (spec.equation, spec.potential) {
        (EquationKind::Schroedinger, PotentialSpec::Coulomb { kappa }) => (
            CouplingKind::NrCoulomb { mu: mass, kappa },
            TargetKind::TwoMuE { mu: mass },
            false,
        ),
        (EquationKind::Schroedinger, PotentialSpec::Oscillator { omega }) => (
            CouplingKind::NrOscillator { mu: mass, omega },
            TargetKind::TwoMuE { mu: mass },
            false,
        ),
        (_, PotentialSpec::Coulomb { kappa }) => (
            CouplingKind::RelCoulomb { mass, kappa },
            TargetKind::ESqMinusMSq { mass },
            true,
        ),
        (_, PotentialSpec::Oscillator { omega }) => (
            CouplingKind::RelOscillator { mass, omega },
            TargetKind::ESqMinusMSq { mass },
            true,
        ),
    };
    RadialProblem {
        l,
        coupling,
        target,
        energy_dependent,
    }
}

/// Finite-volume discretization at a frozen coupling energy, similarity
/// transformed to symmetric tridiagonal form.
pub fn discretize(problem: &RadialProblem, coupling_energy: f64, grid: &GridSpec) -> SymTridiag {
    let n = grid.n_cells;
    let h = grid.h();
    let h2 = h * h;
    let l2 = f64::from(problem.l) * f64::from(problem.l);
    let mut diag = Vec::with_capacity(n);
    for i in 1..=n {
        let r = (i as f64 - 0.5) * h;
        // Interior flux balance gives exactly 2/h^2 on the diagonal; the
        // last cell picks up the Dirichlet ghost at the outer face.
        let flux = if i < n {
            2.0 / h2
        } else {
            (3.0 * n as f64 - 1.0) / ((n as f64 - 0.5) * h2)
        };
        diag.push(flux + l2 / (r * r) + problem.coupling.w_at(r, coupling_energy));
    }
    let off: Vec<f64> = (1..n)
        .map(|i| {
            let i_f = i as f64;
            -i_f / (h2 * ((i_f - 0.5) * (i_f + 0.5)).sqrt())
        })
        .collect();
    SymTridiag { diag, off }
}

/// Converged radial bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    /// Physical energy (E for Coulomb systems, epsilon for oscillators).
    pub energy: f64,
    /// Discrete eigenvalue lambda at the converged coupling.
    pub lambda: f64,
    /// Radial samples R(r_i), normalized so sum |R_i|^2 r_i h = 1.
    pub radial: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub grid: GridSpec,
}

/// Options for the self-consistent loop.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Fixed-point tolerance, relative to the mass scale.
    pub tol: f64,
    pub max_iter: usize,
    /// Under-relaxation of the energy update; halved automatically when a
    /// step fails to contract.
    pub relax: f64,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: 200,
            relax: 0.5,
            seed: 7,
        }
    }
}

/// Solves for the bound state with quantum numbers `qn`: the (k+1)-th
/// lowest eigenvalue in angular sector l.
///
/// Energy-independent couplings (Schroedinger) finish in one linear solve.
/// The relativistic cases iterate: assemble W(r; E_t), take the target
/// eigenvalue, map it back through E = +sqrt(M^2 + lambda), and relax. The
/// iterate brackets the fixed point as it goes; a step that leaves the
/// bracket or fails to contract falls back to bisection, which keeps the
/// loop convergent well beyond the plain relaxed iteration's range.
pub fn solve_selfconsistent(
    spec: &SystemSpec,
    qn: QuantumNumbers,
    grid: &GridSpec,
    opts: &SolveOptions,
) -> Result<RadialSolution, SolverError> {
    let problem = radial_reduce(spec, qn.l);
    let k = qn.k as usize;

    if !problem.energy_dependent {
        let t = discretize(&problem, 0.0, grid);
        let lambda = t.eigenvalue(k)?;
        let energy = problem.target.energy_from_lambda(lambda)?;
        let radial = physical_eigenvector(&t, lambda, grid, opts.seed, k)?;
        return Ok(RadialSolution {
            energy,
            lambda,
            radial,
            iterations: 1,
            converged: true,
            grid: *grid,
        });
    }

    let mass = spec.mass;
    let tol_abs = opts.tol * mass.abs().max(f64::MIN_POSITIVE);
    // Positive-branch feasible interval and initial iterate.
    let (mut lo, mut e) = match problem.coupling {
        CouplingKind::RelOscillator { mass: m, omega } => (
            m,
            m + f64::from(2 * qn.k + qn.l.unsigned_abs() + 1) * omega,
        ),
        _ => (0.0, mass),
    };
    let mut hi = f64::INFINITY;
    let mut relax = opts.relax;
    let mut prev_step = f64::INFINITY;
    let mut feasible_seen = false;

    for iter in 1..=opts.max_iter {
        let t = discretize(&problem, e, grid);
        let lambda = t.eigenvalue(k)?;
        let disc = mass * mass + lambda;

        if disc < 0.0 {
            // Coupling assembled at e binds too deeply for the positive
            // branch; e lies right of the feasible region.
            hi = hi.min(e);
            if hi - lo <= tol_abs {
                return Err(SolverError::NegativeDiscriminant);
            }
            e = 0.5 * (lo + hi);
            continue;
        }
        feasible_seen = true;
        let e_raw = disc.sqrt();
        let delta = e_raw - e;

        if delta.abs() <= tol_abs {
            let radial = physical_eigenvector(&t, lambda, grid, opts.seed, k)?;
            return Ok(RadialSolution {
                energy: e_raw,
                lambda,
                radial,
                iterations: iter,
                converged: true,
                grid: *grid,
            });
        }

        // G(e) = e - e_raw is increasing through the fixed point.
        if delta > 0.0 {
            lo = lo.max(e);
        } else {
            hi = hi.min(e);
        }
        if delta.abs() >= prev_step {
            relax = (0.5 * relax).max(1.0 / 64.0);
        }
        prev_step = delta.abs();

        let mut next = e + relax * delta;
        let in_bracket = next > lo && (!hi.is_finite() || next < hi);
        if !in_bracket {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                0.5 * (e + e_raw)
            };
        }
        e = next;
    }
    if !feasible_seen {
        return Err(SolverError::NegativeDiscriminant);
    }
    Err(SolverError::MaxIterExceeded {
        iterations: opts.max_iter,
    })
}

/// Maps the symmetric-form eigenvector back to R(r_i) samples with
/// sum R_i^2 r_i h = 1.
fn physical_eigenvector(
    t: &SymTridiag,
    lambda: f64,
    grid: &GridSpec,
    seed: u64,
    k: usize,
) -> Result<Vec<f64>, SolverError> {
    let v = t.eigenvector(lambda, tridiag::per_index_seed(seed, k))?;
    let h = grid.h();
    Ok(v
        .iter()
        .enumerate()
        .map(|(i, &vi)| vi / (grid.center(i) * h).sqrt())
        .collect())
}

/// Richardson combination (4 E_{h/2} - E_h)/3, eliminating the O(h^2)
/// error term of two nested-grid energies.
pub fn richardson(e_h: f64, e_h2: f64) -> f64 {
    (4.0 * e_h2 - e_h) / 3.0
}

/// A nested-grid solve pair with its extrapolated energy.
#[derive(Debug, Clone)]
pub struct ExtrapolatedSolution {
    pub coarse: RadialSolution,
    pub fine: RadialSolution,
    pub energy: f64,
}

/// Solves on `grid` and on the half-resolution grid, then extrapolates.
pub fn solve_extrapolated(
    spec: &SystemSpec,
    qn: QuantumNumbers,
    grid: &GridSpec,
    opts: &SolveOptions,
) -> Result<ExtrapolatedSolution, SolverError> {
    let coarse = solve_selfconsistent(spec, qn, &grid.coarsened()?, opts)?;
    let fine = solve_selfconsistent(spec, qn, grid, opts)?;
    let energy = richardson(coarse.energy, fine.energy);
    Ok(ExtrapolatedSolution {
        coarse,
        fine,
        energy,
    })
}

/// Domain-radius heuristic: 40 decay lengths for Coulomb tails,
/// 10 oscillator lengths for Gaussian tails, using the closed-form energy
/// estimate for the requested state.
pub fn suggest_r_max(spec: &SystemSpec, qn: QuantumNumbers) -> f64 {
    let s = 2 * qn.k + 2 * qn.l.unsigned_abs() + 1;
    match (spec.equation, spec.potential) {
        (EquationKind::Schroedinger, PotentialSpec::Coulomb { kappa }) => {
            let e_est = -2.0 * spec.mass * kappa * kappa / f64::from(s * s);
            40.0 / (2.0 * spec.mass * e_est.abs()).sqrt()
        }
        (_, PotentialSpec::Coulomb { kappa }) => {
            let e_est = spectra::rel_hydrogen_energy(spec.mass, kappa, s, EnergyBranch::Plus)
                .unwrap_or(0.0);
            40.0 / (spec.mass * spec.mass - e_est * e_est).sqrt()
        }
        (_, PotentialSpec::Oscillator { omega }) => 10.0 / (spec.mass * omega).sqrt(),
    }
}

/// Lower Dirac component from a converged upper radial function:
/// Psi_2 = (p1 + i p2) Psi_1 / (M + E); in sector l the operator acts
/// radially as -i (d/dr - l/r) and raises the angular index by one.
pub fn dirac_lower_component(
    upper: &[f64],
    l: i32,
    mass: f64,
    energy: f64,
    grid: &GridSpec,
) -> Result<Vec<Complex64>, SolverError> {
    let sum = mass + energy;
    if sum.abs() <= 1e-12 * mass.abs().max(1.0) {
        return Err(SolverError::DegenerateEnergy);
    }
    let n = upper.len();
    if n < 3 {
        return Err(SolverError::BadGrid);
    }
    let h = grid.h();
    let deriv = |i: usize| -> f64 {
        if i == 0 {
            (-3.0 * upper[0] + 4.0 * upper[1] - upper[2]) / (2.0 * h)
        } else if i == n - 1 {
            (3.0 * upper[n - 1] - 4.0 * upper[n - 2] + upper[n - 3]) / (2.0 * h)
        } else {
            (upper[i + 1] - upper[i - 1]) / (2.0 * h)
        }
    };
    Ok((0..n)
        .map(|i| {
            let r = grid.center(i);
            let radial = deriv(i) - f64::from(l) * upper[i] / r;
            Complex64::new(0.0, -radial / sum)
        })
        .collect())
}
