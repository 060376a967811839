//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors. Deterministic given a
//! seed; no external linear-algebra dependency.

use super::SolverError;
use crate::exec;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n-1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self, SolverError> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(SolverError::BadGrid);
        }
        Ok(SymTridiag { diag, off })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin bounds enclosing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i < n - 1 { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn pivot_guard(&self) -> f64 {
        let max_off_sq = self
            .off
            .iter()
            .fold(1.0_f64, |acc, &e| acc.max(e * e));
        f64::MIN_POSITIVE * max_off_sq
    }

    /// Number of eigenvalues strictly below `lambda`: count of negative
    /// pivots in the LDLT factorization of T - lambda I.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let guard = self.pivot_guard();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let q_safe = if q.abs() < guard {
                if q >= 0.0 {
                    guard
                } else {
                    -guard
                }
            } else {
                q
            };
            q = (self.diag[i] - lambda) - self.off[i - 1] * self.off[i - 1] / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// k-th lowest eigenvalue (0-indexed) by bisection, to 1e-13 relative.
    pub fn eigenvalue(&self, k: usize) -> Result<f64, SolverError> {
        if k >= self.n() {
            return Err(SolverError::CountExceedsDimension {
                count: k + 1,
                dim: self.n(),
            });
        }
        let (mut lo, mut hi) = self.gershgorin();
        lo -= 1.0;
        hi += 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if (hi - lo) <= 1e-13 * mid.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            if self.sturm_count(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for a bisection-converged eigenvalue: two rounds of
    /// inverse iteration from a seeded random start, unit 2-norm, sign
    /// fixed so the largest-magnitude component is positive.
    pub fn eigenvector(&self, lambda: f64, seed: u64) -> Result<Vec<f64>, SolverError> {
        let n = self.n();
        if n == 1 {
            return Ok(vec![1.0]);
        }
        let mut shift = lambda;
        for attempt in 0..2 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            normalize(&mut v);
            let mut ok = true;
            for _ in 0..2 {
                let x = self.solve_shifted(shift, &v);
                let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
                if !norm.is_finite() || norm == 0.0 {
                    ok = false;
                    break;
                }
                v = x;
                for a in v.iter_mut() {
                    *a /= norm;
                }
            }
            if ok {
                let imax = v
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                if v[imax] < 0.0 {
                    for a in v.iter_mut() {
                        *a = -*a;
                    }
                }
                return Ok(v);
            }
            // Exact-singular shift: nudge by a few ulps and retry.
            let (glo, ghi) = self.gershgorin();
            shift += (ghi - glo).abs().max(1.0) * 1e-14 * f64::from(attempt as u8 + 1);
        }
        Err(SolverError::ConvergenceFailure)
    }

    /// Solves (T - shift I) x = rhs by LU with partial pivoting.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n();
        let guard = self.pivot_guard();
        let mut b: Vec<f64> = self.diag.iter().map(|&d| d - shift).collect();
        let mut c = vec![0.0; n]; // superdiagonal
        let mut f = vec![0.0; n]; // second superdiagonal fill-in
        let mut a = vec![0.0; n]; // subdiagonal
        for i in 0..n - 1 {
            c[i] = self.off[i];
            a[i + 1] = self.off[i];
        }
        let mut x = rhs.to_vec();
        for i in 0..n - 1 {
            if a[i + 1].abs() > b[i].abs() {
                // Swap rows i and i+1 over columns i..i+2.
                let (ob, oc, of) = (b[i], c[i], f[i]);
                b[i] = a[i + 1];
                c[i] = b[i + 1];
                f[i] = c[i + 1];
                x.swap(i, i + 1);
                let m = ob / guarded(b[i], guard);
                b[i + 1] = oc - m * c[i];
                c[i + 1] = of - m * f[i];
                x[i + 1] = x[i + 1] - m * x[i];
            } else {
                let m = a[i + 1] / guarded(b[i], guard);
                b[i + 1] -= m * c[i];
                c[i + 1] -= m * f[i];
                x[i + 1] -= m * x[i];
            }
        }
        x[n - 1] /= guarded(b[n - 1], guard);
        if n >= 2 {
            x[n - 2] = (x[n - 2] - c[n - 2] * x[n - 1]) / guarded(b[n - 2], guard);
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - c[i] * x[i + 1] - f[i] * x[i + 2]) / guarded(b[i], guard);
        }
        x
    }
}

fn guarded(p: f64, guard: f64) -> f64 {
    if p.abs() < guard {
        if p >= 0.0 {
            guard
        } else {
            -guard
        }
    } else {
        p
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in v.iter_mut() {
            *a /= norm;
        }
    }
}

/// Lowest `count` eigenpairs, ascending. Eigenvalue searches run
/// independently per index; eigenvector starts derive deterministically
/// from `seed` and the index.
pub fn solve_linear_spectrum(
    t: &SymTridiag,
    count: usize,
    seed: u64,
) -> Result<Vec<(f64, Vec<f64>)>, SolverError> {
    if count > t.n() {
        return Err(SolverError::CountExceedsDimension {
            count,
            dim: t.n(),
        });
    }
    let pairs = exec::map_indices(count, |k| {
        let lambda = t.eigenvalue(k)?;
        let v = t.eigenvector(lambda, per_index_seed(seed, k))?;
        Ok((lambda, v))
    });
    pairs.into_iter().collect()
}

pub(super) fn per_index_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_by_two_analytic() {
        let t = SymTridiag::new(vec![2.0, 2.0], vec![-1.0]).unwrap();
        let pairs = solve_linear_spectrum(&t, 2, 7).unwrap();
        assert_relative_eq!(pairs[0].0, 1.0, max_relative = 1e-13);
        assert_relative_eq!(pairs[1].0, 3.0, max_relative = 1e-13);
        // Eigenvector of lambda = 1 is (1, 1)/sqrt(2).
        let v = &pairs[0].1;
        assert_relative_eq!(v[0], std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-8);
        assert_relative_eq!(v[1], std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-8);
    }

    #[test]
    fn count_exceeding_dimension_errors() {
        let t = SymTridiag::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        assert!(matches!(
            solve_linear_spectrum(&t, 3, 0),
            Err(SolverError::CountExceedsDimension { count: 3, dim: 2 })
        ));
    }

    #[test]
    fn tight_binding_chain_matches_cosine_formula() {
        // d_i = 0, e_i = -1: eigenvalues 2 cos(k pi / (n+1)), k = 1..n.
        let n = 60;
        let t = SymTridiag::new(vec![0.0; n], vec![-1.0; n - 1]).unwrap();
        for k in 0..n {
            let lam = t.eigenvalue(k).unwrap();
            // Ascending order corresponds to descending cosine argument.
            let exact =
                2.0 * ((n - k) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_relative_eq!(lam, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn sturm_count_brackets_eigenvalues() {
        let t = SymTridiag::new(vec![1.0, 3.0], vec![-1.0]).unwrap();
        assert_eq!(t.sturm_count(0.0), 0);
        assert_eq!(t.sturm_count(1.0), 1);
        assert_eq!(t.sturm_count(4.0), 2);
    }

    #[test]
    fn eigenvector_residual_is_small() {
        let n = 200;
        let diag: Vec<f64> = (0..n).map(|i| 2.0 + 0.01 * i as f64).collect();
        let off = vec![-1.0; n - 1];
        let t = SymTridiag::new(diag, off).unwrap();
        for k in [0, 1, 5] {
            let lam = t.eigenvalue(k).unwrap();
            let v = t.eigenvector(lam, 42).unwrap();
            let mut res: f64 = 0.0;
            for i in 0..n {
                let mut acc = (t.diag[i] - lam) * v[i];
                if i > 0 {
                    acc += t.off[i - 1] * v[i - 1];
                }
                if i < n - 1 {
                    acc += t.off[i] * v[i + 1];
                }
                res = res.max(acc.abs());
            }
            assert!(res < 1e-9, "k={k}: residual {res}");
        }
    }

    #[test]
    fn eigenvector_deterministic_for_fixed_seed() {
        let n = 64;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 3.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| -0.5 - 0.001 * i as f64).collect();
        let t = SymTridiag::new(diag, off).unwrap();
        let lam = t.eigenvalue(3).unwrap();
        let a = t.eigenvector(lam, 99).unwrap();
        let b = t.eigenvector(lam, 99).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn eigenvalues_sorted_ascending() {
        let n = 80;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7919) % 13) as f64).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| ((i * 104729) % 5) as f64 - 2.0).collect();
        let t = SymTridiag::new(diag, off).unwrap();
        let pairs = solve_linear_spectrum(&t, n, 1).unwrap();
        for w in pairs.windows(2) {
            assert!(w[0].0 <= w[1].0 + 1e-12);
        }
    }
}
