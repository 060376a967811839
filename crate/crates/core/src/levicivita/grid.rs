//! Polar product grids and complex fields sampled on them.
//!
//! Radial samples sit at cell centers r_i = (i + 1/2) * r_max / n_r, so no
//! sample ever lands on the coordinate singularity at the origin. Angular
//! samples are uniform on [0, 2*pi).

use super::FieldError;
use crate::exec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::io::{BufRead, Write};

/// Coordinate chart a field lives on: the hydrogen x-plane or the
/// oscillator u-plane related by the Levi-Civita squaring map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    #[serde(rename = "x")]
    XPlane,
    #[serde(rename = "u")]
    UPlane,
}

/// Polar grid: `n_r` radial rings at cell centers, `n_theta` uniform
/// angular samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub chart: Chart,
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
}

impl PolarGrid {
    pub fn new(chart: Chart, n_r: usize, n_theta: usize, r_max: f64) -> Result<Self, FieldError> {
        if n_r < 2 || n_theta < 4 || n_theta % 2 != 0 || !(r_max > 0.0) {
            return Err(FieldError::BadGrid);
        }
        Ok(PolarGrid {
            chart,
            n_r,
            n_theta,
            r_max,
        })
    }

    /// Radial cell width.
    pub fn dr(&self) -> f64 {
        self.r_max / self.n_r as f64
    }

    /// Angular step.
    pub fn dtheta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    /// Radius of ring `i`.
    pub fn radius(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    /// Angle of sample `j`.
    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_theta as f64
    }
}

/// Area-element weight relating the two charts: dx = 4 u^2 du, with
/// u^2 = u1^2 + u2^2. Non-negative, zero only at the origin.
pub fn jacobian_weight(u_sq: f64) -> f64 {
    4.0 * u_sq
}

/// Complex samples on a polar grid, radial index major, angular minor.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub grid: PolarGrid,
    pub values: Vec<Complex64>,
}

impl Field2D {
    pub fn new(grid: PolarGrid, values: Vec<Complex64>) -> Result<Self, FieldError> {
        if values.len() != grid.n_r * grid.n_theta {
            return Err(FieldError::BadGrid);
        }
        Ok(Field2D { grid, values })
    }

    /// Samples `f(r, theta)` on every grid point.
    pub fn from_polar_fn(grid: PolarGrid, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        let n_theta = grid.n_theta;
        let rows = exec::map_indices(grid.n_r, |i| {
            let r = grid.radius(i);
            (0..n_theta)
                .map(|j| f(r, grid.theta(j)))
                .collect::<Vec<_>>()
        });
        Field2D {
            grid,
            values: rows.into_iter().flatten().collect(),
        }
    }

    /// Samples `f(c1, c2)` at the Cartesian coordinates of every grid point.
    pub fn from_cartesian_fn(grid: PolarGrid, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        Self::from_polar_fn(grid, |r, th| f(r * th.cos(), r * th.sin()))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.grid.n_theta + j
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.index(i, j)]
    }

    /// Squared L2 norm in this chart's own area measure, sum of
    /// |f|^2 r dr dtheta over all samples. Fixed-tree summation.
    pub fn l2_norm_sq(&self) -> f64 {
        let ring: Vec<f64> = (0..self.grid.n_r)
            .map(|i| {
                let r = self.grid.radius(i);
                let row = &self.values[i * self.grid.n_theta..(i + 1) * self.grid.n_theta];
                let mut acc = 0.0;
                for v in row {
                    acc += v.norm_sqr();
                }
                acc * r
            })
            .collect();
        exec::pairwise_sum(&ring) * self.grid.dr() * self.grid.dtheta()
    }

    /// Squared L2 norm with the Levi-Civita Jacobian weight 4 u^2,
    /// i.e. the x-plane norm of a field sampled on the u-plane.
    pub fn l2_norm_sq_jacobian(&self) -> f64 {
        let ring: Vec<f64> = (0..self.grid.n_r)
            .map(|i| {
                let r = self.grid.radius(i);
                let row = &self.values[i * self.grid.n_theta..(i + 1) * self.grid.n_theta];
                let mut acc = 0.0;
                for v in row {
                    acc += v.norm_sqr();
                }
                acc * r * jacobian_weight(r * r)
            })
            .collect();
        exec::pairwise_sum(&ring) * self.grid.dr() * self.grid.dtheta()
    }

    /// Writes the field as a one-line JSON header followed by one
    /// `re,im` CSV row per sample, radial index major, angular minor.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<(), FieldError> {
        let header = serde_json::to_string(&self.grid).map_err(|_| FieldError::Serialize)?;
        writeln!(w, "{header}").map_err(FieldError::Io)?;
        for v in &self.values {
            writeln!(w, "{:.16e},{:.16e}", v.re, v.im).map_err(FieldError::Io)?;
        }
        Ok(())
    }

    /// Reads a field written by [`Field2D::write_csv`].
    pub fn read_csv(r: impl BufRead) -> Result<Self, FieldError> {
        let mut lines = r.lines();
        let header = lines.next().ok_or(FieldError::Parse)?.map_err(FieldError::Io)?;
        let grid: PolarGrid = serde_json::from_str(&header).map_err(|_| FieldError::Parse)?;
        let mut values = Vec::with_capacity(grid.n_r * grid.n_theta);
        for line in lines {
            let line = line.map_err(FieldError::Io)?;
            if line.is_empty() {
                continue;
            }
            let (re, im) = line.split_once(',').ok_or(FieldError::Parse)?;
            values.push(Complex64::new(
                re.trim().parse().map_err(|_| FieldError::Parse)?,
                im.trim().parse().map_err(|_| FieldError::Parse)?,
            ));
        }
        Field2D::new(grid, values)
    }
}

/// Two-component spinor field; both components share one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spinor2D {
    pub upper: Field2D,
    pub lower: Field2D,
}

impl Spinor2D {
    pub fn new(upper: Field2D, lower: Field2D) -> Result<Self, FieldError> {
        if upper.grid != lower.grid {
            return Err(FieldError::GridMismatch);
        }
        Ok(Spinor2D { upper, lower })
    }
}
