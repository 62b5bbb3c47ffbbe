//! Seeded random coefficient suites and the analytic-vs-dense gap check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::model::{make_coefficients, make_instance, CoefficientSet};
use crate::spectral;

/// Range of every randomly drawn coefficient.
pub const COEFF_RANGE: (f64, f64) = (-5.0, 5.0);

/// Draws `a1..b3` uniformly from [`COEFF_RANGE`], redrawing until
/// `a3 > a2` and `b2 > b3`.
pub fn random_coefficients<R: Rng>(rng: &mut R, n: usize, marked_index: usize) -> Result<CoefficientSet> {
    let instance = make_instance(n, marked_index)?;
    loop {
        let mut c = [0.0; 6];
        for v in c.iter_mut() {
            *v = rng.gen_range(COEFF_RANGE.0..COEFF_RANGE.1);
        }
        if c[2] > c[1] && c[4] > c[5] {
            return make_coefficients(c[0], c[1], c[2], c[3], c[4], c[5], &instance);
        }
    }
}

/// `count` coefficient sets per `n`, deterministic in `seed`. Marked
/// indices are drawn too. Ordered by set, then by `n`.
pub fn random_suite(seed: u64, count: usize, n_values: &[usize]) -> Result<Vec<CoefficientSet>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count * n_values.len());
    for _ in 0..count {
        for &n in n_values {
            let marked = rng.gen_range(0..n);
            out.push(random_coefficients(&mut rng, n, marked)?);
        }
    }
    Ok(out)
}

/// Sizes `4, 16, 64, ...` up to `n_max`.
pub fn suite_sizes(n_max: usize) -> Vec<usize> {
    std::iter::successors(Some(4usize), |n| n.checked_mul(4))
        .take_while(|&n| n <= n_max)
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: usize,
    pub coeffs: CoefficientSet,
    pub max_abs_dev: f64,
    pub worst_s: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub outcomes: Vec<TrialOutcome>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&TrialOutcome> {
        self.outcomes.iter().find(|o| !(o.max_abs_dev <= self.tolerance))
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    /// `trial,n,marked_index,max_abs_dev,worst_s`, one row per trial.
    pub fn table(&self) -> String {
        let mut out = String::from("trial,n,marked_index,max_abs_dev,worst_s\n");
        for o in &self.outcomes {
            let inst = o.coeffs.instance();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                o.trial,
                inst.n(),
                inst.marked_index(),
                g17(o.max_abs_dev),
                g17(o.worst_s)
            ));
        }
        out
    }
}

/// Grid points per trial in [`verify_gap_oracle`].
pub const VERIFY_GRID_POINTS: usize = 21;

/// Runs `trials` random sets, cycling through [`suite_sizes`]`(n_max)`, and
/// records the worst dense-vs-analytic deviation of `g^2` for each.
pub fn verify_gap_oracle(n_max: usize, trials: usize, seed: u64, tolerance: f64) -> Result<VerifyReport> {
    use rayon::prelude::*;

    if trials == 0 {
        return Err(Error::InvalidArgument("nothing to verify: trials = 0".into()));
    }
    if n_max > spectral::DENSE_MAX_N {
        return Err(Error::DenseGuard {
            n: n_max,
            max: spectral::DENSE_MAX_N,
        });
    }
    let sizes = suite_sizes(n_max);
    if sizes.is_empty() {
        return Err(Error::InvalidArgument(format!("n-max must be >= 4 (got {n_max})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(trials);
    for trial in 0..trials {
        let n = sizes[trial % sizes.len()];
        let marked = rng.gen_range(0..n);
        sets.push(random_coefficients(&mut rng, n, marked)?);
    }
    let outcomes = sets
        .into_par_iter()
        .enumerate()
        .map(|(trial, coeffs)| {
            let dev = spectral::oracle_deviation(&coeffs, coeffs.instance(), VERIFY_GRID_POINTS)?;
            Ok(TrialOutcome {
                trial,
                coeffs,
                max_abs_dev: dev.max_abs,
                worst_s: dev.worst_s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { tolerance, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_seeded_and_valid() {
        let a = random_suite(42, 5, &[4, 16]).unwrap();
        let b = random_suite(42, 5, &[4, 16]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        assert_ne!(a, random_suite(43, 5, &[4, 16]).unwrap());
        for c in &a {
            assert!(c.a3() > c.a2() && c.b2() > c.b3());
            for v in [c.a1(), c.a2(), c.a3(), c.b1(), c.b2(), c.b3()] {
                assert!((-5.0..5.0).contains(&v));
            }
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(suite_sizes(256), vec![4, 16, 64, 256]);
        assert_eq!(suite_sizes(100), vec![4, 16, 64]);
        assert!(suite_sizes(3).is_empty());
    }

    #[test]
    fn small_verify_passes() {
        let report = verify_gap_oracle(16, 6, 1, 1e-9).unwrap();
        assert!(report.passed());
        assert_eq!(report.table().lines().count(), 7);
        assert!(verify_gap_oracle(16, 0, 1, 1e-9).is_err());
        let strict = VerifyReport {
            tolerance: -1.0,
            ..report
        };
        assert_eq!(strict.first_failure().unwrap().trial, 0);
    }
}
