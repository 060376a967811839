//! The Levi-Civita squaring map x1 = u1^2 - u2^2, x2 = 2 u1 u2 and the
//! field machinery built on it: scalar and spinor pullbacks, transformed
//! operator residuals, and angular-index measurement.

mod grid;
mod operators;
mod pullback;

pub use grid::{jacobian_weight, Chart, Field2D, PolarGrid, Spinor2D};
pub use operators::{
    angular_index, annulus_samples, dirac_operator_residual, kg_operator_residual,
    momentum_identity_residual, nr_operator_residual, DEFAULT_ORIGIN_CUT_FRACTION,
};
pub use pullback::{pullback_scalar, pullback_spinor};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("target grid is not covered by the source field domain")]
    DomainNotCovered,
    #[error("target grid places a sample at the coordinate origin")]
    OriginOnGrid,
    #[error("field is identically zero over the evaluation region")]
    ZeroField,
    #[error("field lives on the wrong coordinate chart for this operation")]
    WrongChart,
    #[error("fields do not share a grid")]
    GridMismatch,
    #[error("grid parameters violate the sampling invariants")]
    BadGrid,
    #[error("i/o failure: {0}")]
    Io(std::io::Error),
    #[error("malformed field file")]
    Parse,
    #[error("could not serialize grid header")]
    Serialize,
}

/// Forward map (u1, u2) -> (x1, x2) = (u1^2 - u2^2, 2 u1 u2). The image
/// radius is the squared source radius: |x| = u1^2 + u2^2.
pub fn lc_forward(u1: f64, u2: f64) -> (f64, f64) {
    (u1 * u1 - u2 * u2, 2.0 * u1 * u2)
}

/// Principal-branch inverse: the complex square root tau of x1 + i x2
/// with Re tau > 0, or Re tau = 0 and Im tau >= 0. The full map is
/// 2-to-1: (u1, u2) and (-u1, -u2) share an image.
pub fn lc_inverse(x1: f64, x2: f64) -> (f64, f64) {
    let r = x1.hypot(x2);
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let t = ((r + x1.abs()) * 0.5).sqrt();
    if x1 >= 0.0 {
        (t, x2 / (2.0 * t))
    } else if x2 == 0.0 {
        // Negative real axis: boundary of the branch, Im >= 0.
        (0.0, t)
    } else {
        (x2.abs() / (2.0 * t), t.copysign(x2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn forward_examples() {
        assert_eq!(lc_forward(1.0, 0.0), (1.0, 0.0));
        assert_eq!(lc_forward(1.0, 1.0), (0.0, 2.0));
        assert_eq!(lc_forward(0.0, 1.0), (-1.0, 0.0));
    }

    #[test]
    fn forward_radius_squares() {
        let (x1, x2) = lc_forward(1.0, 1.0);
        assert_relative_eq!(x1.hypot(x2), 2.0);
    }

    #[test]
    fn inverse_examples() {
        let (u1, u2) = lc_inverse(0.0, 2.0);
        assert_relative_eq!(u1, 1.0, max_relative = 1e-15);
        assert_relative_eq!(u2, 1.0, max_relative = 1e-15);
        assert_eq!(lc_inverse(-1.0, 0.0), (0.0, 1.0));
        assert_eq!(lc_inverse(1.0, 0.0), (1.0, 0.0));
        assert_eq!(lc_inverse(0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn inverse_principal_branch_negative_real_axis() {
        // Both signed zeros of x2 land on the Im >= 0 boundary.
        let (u1, u2) = lc_inverse(-4.0, -0.0);
        assert_eq!((u1, u2), (0.0, 2.0));
    }

    #[test]
    fn forward_of_inverse_is_identity() {
        for &(x1, x2) in &[(3.0, 4.0), (-2.0, 0.5), (0.0, -1.0), (-0.3, -0.7)] {
            let (u1, u2) = lc_inverse(x1, x2);
            let (y1, y2) = lc_forward(u1, u2);
            assert_relative_eq!(y1, x1, max_relative = 1e-14, epsilon = 1e-14);
            assert_relative_eq!(y2, x2, max_relative = 1e-14, epsilon = 1e-14);
        }
    }
}
