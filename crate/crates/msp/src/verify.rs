//! The property suite behind `msp verify`.

use std::f64::consts::PI;
use std::fmt;

use msp_core::chebyshev::{epsilon_sequence, largest_root, pbar_eval, q_matrix_norm};
use msp_core::saddle::{verify_sharpness, BOUND_SLACK, SHARPNESS_TOL};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub failing_seeds: Vec<u64>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.name, if self.passed { "PASS" } else { "FAIL" }, self.detail)?;
        if !self.failing_seeds.is_empty() {
            write!(f, " failing seeds {:?}", self.failing_seeds)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Square block size of the random sharpness instances.
pub const SHARPNESS_DIM: usize = 4;

/// Extreme eigenvalues with `A_i = 0` for `i >= 2`, and the condition
/// bound with semidefinite `A_i`, for every `n` in `ns`.
pub fn saddle_checks(ns: &[usize], trials: usize, seed: u64) -> Result<(Vec<Check>, Vec<Check>)> {
    let mut sharp = Vec::new();
    let mut bound = Vec::new();
    for &n in ns {
        let rep = verify_sharpness(n, trials, seed, SHARPNESS_DIM)?;
        sharp.push(Check {
            name: format!("extreme eigenvalue sharpness n={n}"),
            passed: rep.sharpness_failures.is_empty(),
            detail: format!(
                "{trials} instances, max dev {:.1e} / {:.1e}, tol {SHARPNESS_TOL:e}",
                rep.max_norm_dev, rep.max_min_dev
            ),
            failing_seeds: rep.sharpness_failures,
        });
        bound.push(Check {
            name: format!("condition bound n={n}"),
            passed: rep.bound_failures.is_empty(),
            detail: format!(
                "{trials} instances, max kappa/bound {:.12}, bound {:.6}, slack {BOUND_SLACK:e}",
                rep.max_cond_ratio, rep.bound_set.cond_bound
            ),
            failing_seeds: rep.bound_failures,
        });
    }
    Ok((sharp, bound))
}

/// `|Q_j| = 1 / (2 sin(pi / (2 (2j + 1))))` for `j = 1..=jmax`.
pub fn q_norm_check(jmax: usize) -> Result<Check> {
    let mut max_dev = 0.0f64;
    for j in 1..=jmax {
        let expected = 1.0 / (2.0 * (PI / (2.0 * (2 * j + 1) as f64)).sin());
        max_dev = max_dev.max((q_matrix_norm(j)? - expected).abs());
    }
    Ok(Check {
        name: format!("Q_j norms j=1..{jmax}"),
        passed: max_dev <= 1e-12,
        detail: format!("max dev {max_dev:.1e}"),
        failing_seeds: Vec::new(),
    })
}

/// Chain identities `1 + 1/eps_1 = eps_{n-1}`, `eps_{i-1} + 1/eps_i = eps_{n-1}`,
/// `eps_i >= 1` and `Pbar_j(eps_{n-1}) >= 0` for `j <= n`.
pub fn epsilon_check(nmax: usize) -> Result<Check> {
    let mut max_dev = 0.0f64;
    let mut admissible = true;
    for n in 2..=nmax {
        let eps = epsilon_sequence(n)?;
        let top = eps[n - 2];
        max_dev = max_dev.max((top - largest_root(n)).abs());
        max_dev = max_dev.max((1.0 + 1.0 / eps[0] - top).abs());
        for i in 1..n - 1 {
            max_dev = max_dev.max((eps[i - 1] + 1.0 / eps[i] - top).abs());
        }
        admissible &= eps.iter().all(|&e| e >= 1.0 - 1e-12);
        admissible &= (1..=n).all(|j| pbar_eval(j, top) >= -1e-12);
    }
    Ok(Check {
        name: format!("epsilon chain n=2..{nmax}"),
        passed: max_dev <= 1e-12 && admissible,
        detail: format!("max dev {max_dev:.1e}, admissible {admissible}"),
        failing_seeds: Vec::new(),
    })
}

pub fn run_verify(ns: &[usize], trials: usize, seed: u64) -> Result<VerifyReport> {
    let (sharp, bound) = saddle_checks(ns, trials, seed)?;
    let mut checks = sharp;
    checks.extend(bound);
    checks.push(q_norm_check(10)?);
    checks.push(epsilon_check(8)?);
    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let rep = run_verify(&[2, 3], 3, 11).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.checks.len(), 6);
        assert!(rep.checks[0].to_string().starts_with("extreme eigenvalue sharpness n=2: PASS"));
    }
}
