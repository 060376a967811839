//! Wavefunction pullbacks from the x-plane to the u-plane.
//!
//! A target point (u, theta_u) has image (r = u^2, theta_x = 2 theta_u), so
//! the pullback only ever needs the source field at exact angular doubles
//! plus a radial interpolation. Radial interpolation uses a natural cubic
//! spline per angular column: a C^2 interpolant, so discrete derivative
//! operators applied to the pulled-back field converge, which piecewise
//! bilinear interpolation (C^0, with slope kinks at every source ring)
//! does not allow. Angular interpolation between columns is linear; it is
//! exact whenever source and target share `n_theta`.

use super::grid::{Chart, Field2D, PolarGrid, Spinor2D};
use super::FieldError;
use crate::exec;
use num_complex::Complex64;

/// Natural cubic spline through uniformly spaced samples.
struct ColumnSpline {
    r0: f64,
    dr: f64,
    values: Vec<Complex64>,
    /// Second-derivative moments, natural boundary conditions.
    moments: Vec<Complex64>,
}

impl ColumnSpline {
    fn build(r0: f64, dr: f64, values: Vec<Complex64>) -> Self {
        let n = values.len();
        let mut moments = vec![Complex64::ZERO; n];
        if n > 2 {
            // Thomas solve of M_{i-1} + 4 M_i + M_{i+1} = 6 d2_i / dr^2
            // for i = 1..n-2 with M_0 = M_{n-1} = 0.
            let m = n - 2;
            let mut diag = vec![4.0; m];
            let mut rhs: Vec<Complex64> = (1..n - 1)
                .map(|i| (values[i + 1] - 2.0 * values[i] + values[i - 1]) * 6.0 / (dr * dr))
                .collect();
            for i in 1..m {
                let w = 1.0 / diag[i - 1];
                diag[i] -= w;
                let prev = rhs[i - 1];
                rhs[i] -= prev * w;
            }
            moments[m] = rhs[m - 1] / diag[m - 1];
            for i in (1..m).rev() {
                moments[i] = (rhs[i - 1] - moments[i + 1]) / diag[i - 1];
            }
        }
        ColumnSpline {
            r0,
            dr,
            values,
            moments,
        }
    }

    /// Evaluates the spline; outside the sample range the end value is held.
    fn eval(&self, r: f64) -> Complex64 {
        let n = self.values.len();
        let t = (r - self.r0) / self.dr;
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let k = t.floor() as usize;
        let s = t - k as f64;
        let (ya, yb) = (self.values[k], self.values[k + 1]);
        let (ma, mb) = (self.moments[k], self.moments[k + 1]);
        let h2 = self.dr * self.dr / 6.0;
        let sc = 1.0 - s;
        ya * sc + yb * s + (ma * (sc * sc * sc - sc) + mb * (s * s * s - s)) * h2
    }
}

/// Radial splines for every angular column of a source field.
struct SourceInterp {
    grid: PolarGrid,
    columns: Vec<ColumnSpline>,
}

impl SourceInterp {
    fn build(f: &Field2D) -> Self {
        let g = f.grid;
        let columns = exec::map_indices(g.n_theta, |j| {
            let col: Vec<Complex64> = (0..g.n_r).map(|i| f.value(i, j)).collect();
            ColumnSpline::build(g.radius(0), g.dr(), col)
        });
        SourceInterp { grid: g, columns }
    }

    /// Field value at polar point (r, theta), linear in theta.
    fn eval(&self, r: f64, theta: f64) -> Complex64 {
        let n = self.grid.n_theta;
        let s = theta.rem_euclid(std::f64::consts::TAU) / self.grid.dtheta();
        let j0 = (s.floor() as usize) % n;
        let w = s - s.floor();
        let a = self.columns[j0].eval(r);
        if w == 0.0 {
            return a;
        }
        let b = self.columns[(j0 + 1) % n].eval(r);
        a * (1.0 - w) + b * w
    }
}

fn check_coverage(source: &PolarGrid, target: &PolarGrid) -> Result<(), FieldError> {
    if source.chart != Chart::XPlane || target.chart != Chart::UPlane {
        return Err(FieldError::WrongChart);
    }
    if target.r_max * target.r_max > source.r_max * (1.0 + 1e-12) {
        return Err(FieldError::DomainNotCovered);
    }
    Ok(())
}

/// Scalar pullback g(u) = f(x(u)): each target sample takes the source
/// value at (r = u^2, theta_x = 2 theta_u). A pure angular harmonic
/// e^{i l theta_x} therefore becomes e^{i 2 l theta_u}.
pub fn pullback_scalar(f: &Field2D, target: &PolarGrid) -> Result<Field2D, FieldError> {
    check_coverage(&f.grid, target)?;
    let interp = SourceInterp::build(f);
    Ok(sample_pullback(&interp, target, |v, _, _| v))
}

/// Spinor pullback Phi = (tau/(2u^2) Psi_1, Psi_2) evaluated at x(u),
/// with tau = u1 + i u2, so tau/(2u^2) = e^{i theta_u}/(2u). Upper
/// angular indices map l -> 2l + 1, lower map l' -> 2l'.
pub fn pullback_spinor(psi: &Spinor2D, target: &PolarGrid) -> Result<Spinor2D, FieldError> {
    check_coverage(&psi.upper.grid, target)?;
    if target.radius(0) <= 0.0 {
        return Err(FieldError::OriginOnGrid);
    }
    let up = SourceInterp::build(&psi.upper);
    let lo = SourceInterp::build(&psi.lower);
    let upper = sample_pullback(&up, target, |v, u, theta| {
        v * Complex64::from_polar(0.5 / u, theta)
    });
    let lower = sample_pullback(&lo, target, |v, _, _| v);
    Spinor2D::new(upper, lower)
}

fn sample_pullback(
    interp: &SourceInterp,
    target: &PolarGrid,
    post: impl Fn(Complex64, f64, f64) -> Complex64 + Sync,
) -> Field2D {
    let n_theta = target.n_theta;
    let rows = exec::map_indices(target.n_r, |i| {
        let u = target.radius(i);
        let r = u * u;
        (0..n_theta)
            .map(|j| {
                let theta_u = target.theta(j);
                post(interp.eval(r, 2.0 * theta_u), u, theta_u)
            })
            .collect::<Vec<_>>()
    });
    Field2D {
        grid: *target,
        values: rows.into_iter().flatten().collect(),
    }
}
