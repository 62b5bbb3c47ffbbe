//! Schrödinger evolution (`hbar = 1`) of the search state.
//!
//! The initial state `|psi>` lies in `span{|alpha>, |beta>}` and `H(s)` maps
//! that span into itself, so the evolution is exactly two-dimensional. Each
//! step applies `exp(-i H(s(t_mid)) dt)` in closed form, which is unitary to
//! rounding. [`evolve_dense`] repeats the same steps in the full
//! `n`-dimensional space as an oracle for the reduction.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::model::{CoefficientSet, ProblemInstance};
use crate::schedule::{self, MatrixElementMode, Schedule, ScheduleKind};
use crate::spectral;
use crate::two_level::{norm_sqr, Amplitudes};

pub const MIN_STEPS: usize = 100;

/// Largest `n` accepted by [`evolve_dense`].
pub const DENSE_EVOLUTION_MAX_N: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct EvolutionResult {
    /// Amplitudes on `{|alpha>, |beta>}`.
    pub final_amplitudes: Amplitudes,
    /// `|<alpha|phi(T)>|^2`.
    pub success_probability: f64,
    pub total_time: f64,
    pub steps: usize,
    /// `max_k | ||phi_k||^2 - 1 |` over all steps.
    pub max_norm_drift: f64,
}

/// `|psi> = x|alpha> + sqrt(1 - x^2)|beta>`.
pub fn initial_state(instance: &ProblemInstance) -> Amplitudes {
    [
        Complex64::new(instance.overlap_x(), 0.0),
        Complex64::new(instance.complement(), 0.0),
    ]
}

fn check_run(total_time: f64, steps: usize) -> Result<()> {
    if steps < MIN_STEPS {
        return Err(Error::InvalidArgument(format!(
            "evolution needs at least {MIN_STEPS} steps (got {steps})"
        )));
    }
    if !(total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "total time must be positive and finite (got {total_time})"
        )));
    }
    Ok(())
}

/// Evolves `|psi>` along `schedule` with `steps` midpoint propagators.
pub fn evolve(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    schedule: &Schedule,
    steps: usize,
) -> Result<EvolutionResult> {
    schedule.instance().ensure_same(instance, "schedule")?;
    evolve_path(coeffs, instance, schedule.total_time(), steps, |t| schedule.s_at(t))
}

/// Evolution along an arbitrary path `t -> s(t)` on `[0, total_time]`.
pub fn evolve_path<P: Fn(f64) -> f64>(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    total_time: f64,
    steps: usize,
    path: P,
) -> Result<EvolutionResult> {
    check_run(total_time, steps)?;
    let (hi, hf) = spectral::endpoint_blocks(coeffs, instance)?;
    let dt = total_time / steps as f64;
    let mut state = initial_state(instance);
    let mut drift: f64 = 0.0;
    for k in 0..steps {
        let s = path((k as f64 + 0.5) * dt);
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ParameterOutOfRange(s));
        }
        state = spectral::interpolate(&hi, &hf, s).propagator(dt).apply(&state);
        drift = drift.max((norm_sqr(&state) - 1.0).abs());
    }
    Ok(EvolutionResult {
        final_amplitudes: state,
        success_probability: state[0].norm_sqr().clamp(0.0, 1.0),
        total_time,
        steps,
        max_norm_drift: drift,
    })
}

/// Full-space counterpart of [`evolve`] for oracle comparisons.
#[derive(Debug, Clone, Copy)]
pub struct DenseEvolution {
    pub success_probability: f64,
    pub max_norm_drift: f64,
    /// Largest squared amplitude outside `span{|alpha>, |psi>}` at the end.
    pub leakage: f64,
}

/// Same midpoint stepping as [`evolve`], applied to the `n`-dimensional
/// state with propagators from a dense eigendecomposition of `H(s)`.
pub fn evolve_dense(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    schedule: &Schedule,
    steps: usize,
) -> Result<DenseEvolution> {
    schedule.instance().ensure_same(instance, "schedule")?;
    coeffs.ensure_instance(instance)?;
    let n = instance.n();
    if n > DENSE_EVOLUTION_MAX_N {
        return Err(Error::DenseGuard {
            n,
            max: DENSE_EVOLUTION_MAX_N,
        });
    }
    let total_time = schedule.total_time();
    check_run(total_time, steps)?;
    let dt = total_time / steps as f64;

    let x = instance.overlap_x();
    let mut re = DVector::from_element(n, x);
    let mut im = DVector::zeros(n);
    let mut drift: f64 = 0.0;
    for k in 0..steps {
        let s = schedule.s_at((k as f64 + 0.5) * dt);
        let eig = SymmetricEigen::new(spectral::dense_hamiltonian(coeffs, instance, s)?);
        let v = &eig.eigenvectors;
        let c_re = v.tr_mul(&re);
        let c_im = v.tr_mul(&im);
        let mut d_re = DVector::zeros(n);
        let mut d_im = DVector::zeros(n);
        for j in 0..n {
            let phase = Complex64::from_polar(1.0, -eig.eigenvalues[j] * dt);
            let c = Complex64::new(c_re[j], c_im[j]) * phase;
            d_re[j] = c.re;
            d_im[j] = c.im;
        }
        re = v * d_re;
        im = v * d_im;
        drift = drift.max((re.norm_squared() + im.norm_squared() - 1.0).abs());
    }

    let m = instance.marked_index();
    let success = re[m] * re[m] + im[m] * im[m];
    // Component along |beta> is fixed by the mean over unmarked entries.
    let (mut mean_re, mut mean_im) = (0.0, 0.0);
    for j in (0..n).filter(|&j| j != m) {
        mean_re += re[j];
        mean_im += im[j];
    }
    mean_re /= (n - 1) as f64;
    mean_im /= (n - 1) as f64;
    let leakage = (0..n)
        .filter(|&j| j != m)
        .map(|j| (re[j] - mean_re).powi(2) + (im[j] - mean_im).powi(2))
        .sum();
    Ok(DenseEvolution {
        success_probability: success,
        max_norm_drift: drift,
        leakage,
    })
}

/// One row of a time-factor scan.
#[derive(Debug, Clone, Copy)]
pub struct SuccessPoint {
    pub factor: f64,
    pub total_time: f64,
    pub steps: usize,
    pub success_probability: f64,
    pub norm_drift: f64,
}

/// Builds the `kind` schedule at its own bound, then evolves it stretched to
/// `factor * T` for each factor. Rows follow the order of `time_factors`.
#[allow(clippy::too_many_arguments)]
pub fn success_vs_time(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    kind: ScheduleKind,
    epsilon: f64,
    mode: MatrixElementMode,
    time_factors: &[f64],
    steps: usize,
) -> Result<Vec<SuccessPoint>> {
    let base = schedule::build(coeffs, instance, kind, epsilon, mode)?;
    time_factors
        .par_iter()
        .map(|&factor| {
            let sched = base.time_scaled(factor)?;
            let run = evolve(coeffs, instance, &sched, steps)?;
            Ok(SuccessPoint {
                factor,
                total_time: run.total_time,
                steps,
                success_probability: run.success_probability,
                norm_drift: run.max_norm_drift,
            })
        })
        .collect()
}

pub const SUCCESS_CSV_HEADER: &str = "factor,total_time,steps,success_probability,norm_drift";

pub fn success_csv(points: &[SuccessPoint]) -> String {
    let mut out = String::from(SUCCESS_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            g17(p.factor),
            g17(p.total_time),
            p.steps,
            g17(p.success_probability),
            g17(p.norm_drift)
        ));
    }
    out
}
