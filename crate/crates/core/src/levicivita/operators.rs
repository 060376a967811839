//! Discrete operators on polar fields: the transformed oscillator
//! operators (scalar and spinor), the momentum-relation residual, and the
//! angular-index measurement.
//!
//! All residuals are evaluated on interior rings only: the outermost ring
//! has no radial stencil, and rings inside `origin_cut` are excluded
//! because mapped spinor components carry 1/u factors whose finite
//! differences do not converge pointwise toward the coordinate origin.

use super::grid::{Field2D, PolarGrid, Spinor2D};
use super::{lc_forward, Chart, FieldError};
use crate::exec;
use crate::spectra::OscillatorFrame;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Default origin exclusion for residual operators, as a fraction of the
/// grid radius.
pub const DEFAULT_ORIGIN_CUT_FRACTION: f64 = 0.05;

fn included_rings(grid: &PolarGrid, origin_cut: f64) -> Vec<usize> {
    (1..grid.n_r.saturating_sub(1))
        .filter(|&i| grid.radius(i) >= origin_cut)
        .collect()
}

/// 5-point polar Laplacian at an interior ring.
#[inline]
fn laplacian(f: &Field2D, i: usize, j: usize) -> Complex64 {
    let g = &f.grid;
    let n = g.n_theta;
    let (h, dth) = (g.dr(), g.dtheta());
    let r = g.radius(i);
    let c = f.value(i, j);
    let (rp, rm) = (f.value(i + 1, j), f.value(i - 1, j));
    let (tp, tm) = (f.value(i, (j + 1) % n), f.value(i, (j + n - 1) % n));
    (rp - 2.0 * c + rm) / (h * h)
        + (rp - rm) / (2.0 * h * r)
        + (tp - 2.0 * c + tm) / (dth * dth * r * r)
}

/// First-order operators p1 -+ i p2 = -i e^{-+ i theta}(d_r -+ (i/r) d_theta)
/// via central differences on the polar grid. `sign` is +1 for p1 + i p2.
#[inline]
fn p_pm(f: &Field2D, i: usize, j: usize, sign: f64) -> Complex64 {
    let g = &f.grid;
    let n = g.n_theta;
    let r = g.radius(i);
    let dr = (f.value(i + 1, j) - f.value(i - 1, j)) / (2.0 * g.dr());
    let dth = (f.value(i, (j + 1) % n) - f.value(i, (j + n - 1) % n)) / (2.0 * g.dtheta());
    let radial = dr + Complex64::I * dth * (sign / r);
    -Complex64::I * Complex64::from_polar(1.0, sign * g.theta(j)) * radial
}

/// Relative residual of a scalar oscillator-form operator
/// -Lap g + (quad r^2 - shift) g over the included interior rings,
/// both norms r-weighted.
fn scalar_residual(
    g: &Field2D,
    quad: f64,
    shift: f64,
    origin_cut: f64,
) -> Result<f64, FieldError> {
    if g.grid.chart != Chart::UPlane {
        return Err(FieldError::WrongChart);
    }
    let rings = included_rings(&g.grid, origin_cut);
    let terms = exec::map_collect(&rings, |&i| {
        let r = g.grid.radius(i);
        let mut res = 0.0;
        let mut norm = 0.0;
        for j in 0..g.grid.n_theta {
            let v = g.value(i, j);
            let op = -laplacian(g, i, j) + (quad * r * r - shift) * v;
            res += op.norm_sqr();
            norm += v.norm_sqr();
        }
        (res * r, norm * r)
    });
    let res: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let norm: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let denom = exec::pairwise_sum(&norm);
    if denom <= 0.0 {
        return Err(FieldError::ZeroField);
    }
    Ok((exec::pairwise_sum(&res) / denom).sqrt())
}

/// Residual of the transformed Klein-Gordon oscillator operator
/// -Lap + m omega^2 u^2 (m+epsilon)/2 - (epsilon^2 - m^2) applied to `g`.
pub fn kg_operator_residual(
    g: &Field2D,
    frame: &OscillatorFrame,
    origin_cut: f64,
) -> Result<f64, FieldError> {
    scalar_residual(g, frame.quadratic_coeff(), frame.constant_shift(), origin_cut)
}

/// Residual of the transformed non-relativistic oscillator operator
/// -Lap + m^2 omega^2 u^2 - 2 m epsilon applied to `g`.
pub fn nr_operator_residual(
    g: &Field2D,
    m: f64,
    omega: f64,
    epsilon: f64,
    origin_cut: f64,
) -> Result<f64, FieldError> {
    scalar_residual(g, m * m * omega * omega, 2.0 * m * epsilon, origin_cut)
}

/// Joint relative residual of the transformed Dirac oscillator system
/// applied to a mapped spinor:
///
///   row 1: (m + m omega^2 u^2 / 2 - epsilon) Phi_1 + (p1 - i p2) Phi_2
///   row 2: (1/tau_bar)(p1 + i p2)(tau_bar Phi_1) - (m + epsilon) Phi_2
///
/// The row-2 operator is the conjugated momentum 2(p_{1x}+ip_{2x})(u1-iu2)
/// expressed in u-coordinates; it differs from the bare p1 + i p2 by
/// -2i/tau_bar, and only this form annihilates mapped eigen-spinors.
pub fn dirac_operator_residual(
    phi: &Spinor2D,
    frame: &OscillatorFrame,
    origin_cut: f64,
) -> Result<f64, FieldError> {
    let g = &phi.upper.grid;
    if g.chart != Chart::UPlane {
        return Err(FieldError::WrongChart);
    }
    // tau_bar Phi_1, materialized so row 2 is a plain stencil pass.
    let weighted_rows = exec::map_indices(g.n_r, |i| {
        let u = g.radius(i);
        (0..g.n_theta)
            .map(|j| phi.upper.value(i, j) * Complex64::from_polar(u, -g.theta(j)))
            .collect::<Vec<_>>()
    });
    let weighted_upper = Field2D {
        grid: *g,
        values: weighted_rows.into_iter().flatten().collect(),
    };

    let rings = included_rings(g, origin_cut);
    let mass_sum = frame.mass + frame.epsilon;
    let terms = exec::map_collect(&rings, |&i| {
        let u = g.radius(i);
        let pot = frame.mass + 0.5 * frame.m_omega_sq * u * u - frame.epsilon;
        let mut res = 0.0;
        let mut norm = 0.0;
        for j in 0..g.n_theta {
            let up = phi.upper.value(i, j);
            let lo = phi.lower.value(i, j);
            let row1 = pot * up + p_pm(&phi.lower, i, j, -1.0);
            let row2 = Complex64::from_polar(1.0 / u, g.theta(j)) * p_pm(&weighted_upper, i, j, 1.0)
                - mass_sum * lo;
            res += row1.norm_sqr() + row2.norm_sqr();
            norm += up.norm_sqr() + lo.norm_sqr();
        }
        (res * u, norm * u)
    });
    let res: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let norm: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let denom = exec::pairwise_sum(&norm);
    if denom <= 0.0 {
        return Err(FieldError::ZeroField);
    }
    Ok((exec::pairwise_sum(&res) / denom).sqrt())
}

/// Relative residual of the momentum relation
/// p_{1u} - i p_{2u} = 2 (u1 + i u2)(p_{1x} - i p_{2x}) on a smooth test
/// field: both sides by central differences with step `h`, RMS over the
/// sample set. Exact for polynomials of degree <= 2; O(h^2) otherwise.
pub fn momentum_identity_residual(
    f: &(impl Fn(f64, f64) -> Complex64 + Sync),
    samples: &[(f64, f64)],
    h: f64,
) -> f64 {
    let terms = exec::map_collect(samples, |&(u1, u2)| {
        let g = |a: f64, b: f64| {
            let (x1, x2) = lc_forward(a, b);
            f(x1, x2)
        };
        let d1 = (g(u1 + h, u2) - g(u1 - h, u2)) / (2.0 * h);
        let d2 = (g(u1, u2 + h) - g(u1, u2 - h)) / (2.0 * h);
        let lhs = -Complex64::I * d1 - d2;

        let (x1, x2) = lc_forward(u1, u2);
        let e1 = (f(x1 + h, x2) - f(x1 - h, x2)) / (2.0 * h);
        let e2 = (f(x1, x2 + h) - f(x1, x2 - h)) / (2.0 * h);
        let rhs = Complex64::new(2.0 * u1, 2.0 * u2) * (-Complex64::I * e1 - e2);
        ((lhs - rhs).norm_sqr(), rhs.norm_sqr())
    });
    let num: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let den: Vec<f64> = terms.iter().map(|t| t.1).collect();
    (exec::pairwise_sum(&num) / exec::pairwise_sum(&den)).sqrt()
}

/// Uniform polar sample set over an annulus, for momentum-identity checks.
pub fn annulus_samples(r_lo: f64, r_hi: f64, n_r: usize, n_theta: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n_r * n_theta);
    for i in 0..n_r {
        let r = r_lo + (r_hi - r_lo) * (i as f64 + 0.5) / n_r as f64;
        for j in 0..n_theta {
            let th = TAU * j as f64 / n_theta as f64;
            out.push((r * th.cos(), r * th.sin()));
        }
    }
    out
}

/// Dominant angular index of a field and the fraction of total angular
/// power it carries. Power is aggregated over rings with radius weight;
/// ties resolve to the smallest non-negative index.
pub fn angular_index(f: &Field2D) -> Result<(i32, f64), FieldError> {
    let n = f.grid.n_theta;
    let twiddle: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, -TAU * m as f64 / n as f64))
        .collect();
    let ring_power = exec::map_indices(f.grid.n_r, |i| {
        let r = f.grid.radius(i);
        (0..n)
            .map(|bin| {
                let mut c = Complex64::ZERO;
                for j in 0..n {
                    c += f.value(i, j) * twiddle[(bin * j) % n];
                }
                c.norm_sqr() * r
            })
            .collect::<Vec<f64>>()
    });
    let mut bin_power = vec![0.0; n];
    for (bin, slot) in bin_power.iter_mut().enumerate() {
        let col: Vec<f64> = ring_power.iter().map(|row| row[bin]).collect();
        *slot = exec::pairwise_sum(&col);
    }
    let total = exec::pairwise_sum(&bin_power);
    if !(total > 0.0) {
        return Err(FieldError::ZeroField);
    }
    let p_max = bin_power.iter().cloned().fold(0.0, f64::max);
    let mut best: Option<(i32, f64)> = None;
    for (bin, &p) in bin_power.iter().enumerate() {
        if p < p_max * (1.0 - 1e-9) {
            continue;
        }
        let l = if bin <= n / 2 {
            bin as i32
        } else {
            bin as i32 - n as i32
        };
        let better = match best {
            None => true,
            Some((cur, _)) => (l < 0, l.abs()) < (cur < 0, cur.abs()),
        };
        if better {
            best = Some((l, p / total));
        }
    }
    Ok(best.expect("nonzero field has a dominant bin"))
}
