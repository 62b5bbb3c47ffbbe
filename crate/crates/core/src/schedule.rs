//! Interpolation schedules `s(t)` and the running-time bounds that size them.
//!
//! The adiabatic condition reads `|<dH/dt>| / g^2 <= epsilon`. For a global
//! (linear) schedule this fixes `T >= M / (epsilon g_min^2)`; a local schedule
//! moves at `ds/dt = epsilon g^2(s) / M(s)` and takes
//! `T = (1/epsilon) ∫_0^1 M(s) / g^2(s) ds`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::model::{CoefficientSet, ProblemInstance};
use crate::quadrature;
use crate::spectral::{self, GapPolynomial};

/// Number of `s` nodes in a tabulated local schedule.
pub const LOCAL_GRID_POINTS: usize = 4097;

const QUAD_REL_TOL: f64 = 1e-13;
const QUAD_MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScheduleKind {
    Global,
    Local,
}

impl ScheduleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScheduleKind::Global => "global",
            ScheduleKind::Local => "local",
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "global" => Ok(ScheduleKind::Global),
            "local" => Ok(ScheduleKind::Local),
            other => Err(Error::InvalidArgument(format!(
                "unknown schedule kind {other:?} (expected global or local)"
            ))),
        }
    }
}

/// How `|<dH/ds>|` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum MatrixElementMode {
    /// `|<E1(s)| (H_f - H_i) |E0(s)>|` in the block.
    Transition,
    /// Largest absolute eigenvalue of the block of `H_f - H_i`; constant in `s`.
    #[default]
    OperatorNormBound,
}

impl MatrixElementMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixElementMode::Transition => "transition",
            MatrixElementMode::OperatorNormBound => "norm",
        }
    }
}

impl fmt::Display for MatrixElementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixElementMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "transition" => Ok(MatrixElementMode::Transition),
            "norm" | "operator_norm_bound" => Ok(MatrixElementMode::OperatorNormBound),
            other => Err(Error::InvalidArgument(format!(
                "unknown matrix-element mode {other:?} (expected transition or norm)"
            ))),
        }
    }
}

pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Epsilon(epsilon));
    }
    Ok(())
}

/// `|<dH/ds>|` at `s`, in energy units.
pub fn dh_ds_element(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    s: f64,
    mode: MatrixElementMode,
) -> Result<f64> {
    let derivative = spectral::derivative_block(coeffs, instance)?;
    match mode {
        MatrixElementMode::OperatorNormBound => {
            let [lo, hi] = derivative.eigenvalues();
            Ok(lo.abs().max(hi.abs()))
        }
        MatrixElementMode::Transition => {
            let eig = spectral::effective_block(coeffs, instance, s)?.eigen();
            Ok(derivative.matrix_element(&eig.vectors[1], &eig.vectors[0]).norm())
        }
    }
}

/// `sqrt(1 - x^2) / (epsilon a x^2)`; `min(a, b)` stands in for `a` when
/// the coefficients are unbalanced.
pub fn global_time_bound(coeffs: &CoefficientSet, instance: &ProblemInstance, epsilon: f64) -> Result<f64> {
    coeffs.ensure_instance(instance)?;
    check_epsilon(epsilon)?;
    let gp = coeffs.gap_parameters();
    let a = gp.a.min(gp.b);
    Ok(instance.complement() / (epsilon * a * instance.overlap_x_squared()))
}

/// `(1/epsilon) ∫_0^1 M(s) / g^2(s) ds`.
///
/// In norm mode `M` is constant and the integral of `1/g^2` is taken in
/// closed form; in transition mode the integrand is integrated adaptively.
pub fn local_time_bound(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    epsilon: f64,
    mode: MatrixElementMode,
) -> Result<f64> {
    check_epsilon(epsilon)?;
    let poly = spectral::gap_polynomial(coeffs, instance)?;
    match mode {
        MatrixElementMode::OperatorNormBound => {
            let m = dh_ds_element(coeffs, instance, 0.0, mode)?;
            Ok(m * poly.inverse_integral_unit() / epsilon)
        }
        MatrixElementMode::Transition => {
            let integrand = transition_integrand(coeffs, instance, &poly)?;
            let q = quadrature::integrate(integrand, 0.0, 1.0, 0.0, QUAD_REL_TOL, QUAD_MAX_INTERVALS);
            Ok(q.value / epsilon)
        }
    }
}

/// `∫_0^1 ds / g^2(s)` by adaptive quadrature of the polynomial; the
/// independent route against [`GapPolynomial::inverse_integral_unit`].
pub fn inverse_gap_integral_quadrature(poly: &GapPolynomial) -> quadrature::Quadrature {
    quadrature::integrate(|s| 1.0 / poly.eval(s), 0.0, 1.0, 0.0, 1e-13, QUAD_MAX_INTERVALS)
}

fn transition_integrand<'a>(
    coeffs: &'a CoefficientSet,
    instance: &'a ProblemInstance,
    poly: &'a GapPolynomial,
) -> Result<impl Fn(f64) -> f64 + 'a> {
    let derivative = spectral::derivative_block(coeffs, instance)?;
    let (hi, hf) = spectral::endpoint_blocks(coeffs, instance)?;
    Ok(move |s: f64| {
        let eig = spectral::interpolate(&hi, &hf, s).eigen();
        derivative.matrix_element(&eig.vectors[1], &eig.vectors[0]).norm() / poly.eval(s)
    })
}

/// Time a local schedule needs to reach `s`: `(1/epsilon) ∫_0^s M/g^2`.
pub fn local_elapsed(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    epsilon: f64,
    mode: MatrixElementMode,
    s: f64,
) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::ParameterOutOfRange(s));
    }
    let poly = spectral::gap_polynomial(coeffs, instance)?;
    match mode {
        MatrixElementMode::OperatorNormBound => {
            let m = dh_ds_element(coeffs, instance, 0.0, mode)?;
            Ok(m * poly.inverse_integral(0.0, s) / epsilon)
        }
        MatrixElementMode::Transition => {
            let integrand = transition_integrand(coeffs, instance, &poly)?;
            let q = quadrature::integrate(integrand, 0.0, s, 0.0, QUAD_REL_TOL, QUAD_MAX_INTERVALS);
            Ok(q.value / epsilon)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundWarning {
    /// `a != b`: the closed-form global bound used `min(a, b)`.
    Unbalanced { a: f64, b: f64 },
}

impl fmt::Display for BoundWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundWarning::Unbalanced { a, b } => write!(
                f,
                "a = {} differs from b = {}; global bound uses min(a, b)",
                g17(*a),
                g17(*b)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeBounds {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
    pub mode: MatrixElementMode,
    pub t_global: f64,
    pub t_local: f64,
    pub warnings: Vec<BoundWarning>,
}

impl TimeBounds {
    /// Flat `key=value` record: n, a, b, epsilon, mode, t_global, t_local.
    pub fn to_record(&self) -> String {
        format!(
            "n={}\na={}\nb={}\nepsilon={}\nmode={}\nt_global={}\nt_local={}\n",
            self.n,
            g17(self.a),
            g17(self.b),
            g17(self.epsilon),
            self.mode,
            g17(self.t_global),
            g17(self.t_local)
        )
    }
}

pub fn time_bounds(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    epsilon: f64,
    mode: MatrixElementMode,
) -> Result<TimeBounds> {
    let gp = coeffs.gap_parameters();
    let warnings = if gp.is_balanced() {
        Vec::new()
    } else {
        vec![BoundWarning::Unbalanced { a: gp.a, b: gp.b }]
    };
    Ok(TimeBounds {
        n: instance.n(),
        a: gp.a,
        b: gp.b,
        epsilon,
        mode,
        t_global: global_time_bound(coeffs, instance, epsilon)?,
        t_local: local_time_bound(coeffs, instance, epsilon, mode)?,
        warnings,
    })
}

/// Monotone cubic Hermite table over normalized time `u = t/T`.
#[derive(Debug, Clone, PartialEq)]
struct HermiteTable {
    u: Vec<f64>,
    s: Vec<f64>,
    /// `ds/du` at each node, Fritsch–Carlson limited.
    slope: Vec<f64>,
}

impl HermiteTable {
    fn new(u: Vec<f64>, s: Vec<f64>, mut slope: Vec<f64>) -> Self {
        for k in 0..u.len() - 1 {
            let secant = (s[k + 1] - s[k]) / (u[k + 1] - u[k]);
            if secant <= 0.0 {
                slope[k] = 0.0;
                slope[k + 1] = 0.0;
                continue;
            }
            let alpha = slope[k] / secant;
            let beta = slope[k + 1] / secant;
            let r2 = alpha * alpha + beta * beta;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                slope[k] = tau * alpha * secant;
                slope[k + 1] = tau * beta * secant;
            }
        }
        Self { u, s, slope }
    }

    fn eval(&self, u: f64) -> f64 {
        let k = match self.u.partition_point(|&node| node <= u) {
            0 => 0,
            p => (p - 1).min(self.u.len() - 2),
        };
        let h = self.u[k + 1] - self.u[k];
        let t = (u - self.u[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.s[k] + h10 * h * self.slope[k] + h01 * self.s[k + 1] + h11 * h * self.slope[k + 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Mapping {
    Linear,
    Tabulated(HermiteTable),
}

/// A monotone map `t in [0, T] -> s in [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    kind: ScheduleKind,
    total_time: f64,
    epsilon: f64,
    mode: MatrixElementMode,
    instance: ProblemInstance,
    mapping: Mapping,
}

impl Schedule {
    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }
    pub fn total_time(&self) -> f64 {
        self.total_time
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn mode(&self) -> MatrixElementMode {
        self.mode
    }
    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    /// `s(t)`; `t` is clamped to `[0, T]`.
    pub fn s_at(&self, t: f64) -> f64 {
        let u = (t / self.total_time).clamp(0.0, 1.0);
        match &self.mapping {
            Mapping::Linear => u,
            Mapping::Tabulated(table) => table.eval(u).clamp(0.0, 1.0),
        }
    }

    /// Same path traversed in `factor` times the time.
    pub fn time_scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "time factor must be > 0 (got {factor})"
            )));
        }
        Ok(Self {
            total_time: self.total_time * factor,
            ..self.clone()
        })
    }

    /// `points` samples `(t, s)` on a uniform time grid including both ends.
    pub fn sample(&self, points: usize) -> Result<Vec<(f64, f64)>> {
        if points < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples (got {points})"
            )));
        }
        let last = (points - 1) as f64;
        Ok((0..points)
            .map(|k| {
                let t = if k + 1 == points {
                    self.total_time
                } else {
                    self.total_time * k as f64 / last
                };
                (t, self.s_at(t))
            })
            .collect())
    }

    pub fn to_csv(&self, points: usize) -> Result<String> {
        let mut out = String::from("t,s\n");
        for (t, s) in self.sample(points)? {
            out.push_str(&format!("{},{}\n", g17(t), g17(s)));
        }
        Ok(out)
    }
}

/// `s(t) = t/T` with `T` from [`global_time_bound`].
pub fn build_global(coeffs: &CoefficientSet, instance: &ProblemInstance, epsilon: f64) -> Result<Schedule> {
    Ok(Schedule {
        kind: ScheduleKind::Global,
        total_time: global_time_bound(coeffs, instance, epsilon)?,
        epsilon,
        mode: MatrixElementMode::OperatorNormBound,
        instance: *instance,
        mapping: Mapping::Linear,
    })
}

/// Local schedule `ds/dt = epsilon g^2(s) / M(s)`.
///
/// `t(s)` is tabulated on [`LOCAL_GRID_POINTS`] uniform `s` nodes and
/// inverted with a monotone cubic Hermite interpolant whose node slopes are
/// the exact rates.
pub fn build_local(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    epsilon: f64,
    mode: MatrixElementMode,
) -> Result<Schedule> {
    let total_time = local_time_bound(coeffs, instance, epsilon, mode)?;
    let poly = spectral::gap_polynomial(coeffs, instance)?;
    let s_nodes = spectral::unit_grid(LOCAL_GRID_POINTS);

    let mut elapsed = Vec::with_capacity(LOCAL_GRID_POINTS);
    let mut rates = Vec::with_capacity(LOCAL_GRID_POINTS);
    match mode {
        MatrixElementMode::OperatorNormBound => {
            let m = dh_ds_element(coeffs, instance, 0.0, mode)?;
            for &s in &s_nodes {
                elapsed.push(m * poly.inverse_integral(0.0, s) / epsilon);
                rates.push(epsilon * poly.eval(s) / m);
            }
        }
        MatrixElementMode::Transition => {
            let integrand = transition_integrand(coeffs, instance, &poly)?;
            let mut acc = 0.0;
            elapsed.push(0.0);
            for pair in s_nodes.windows(2) {
                acc += quadrature::gk15(&integrand, pair[0], pair[1]).0;
                elapsed.push(acc / epsilon);
            }
            for &s in &s_nodes {
                rates.push(epsilon / integrand(s));
            }
        }
    }

    let t_end = *elapsed.last().expect("non-empty grid");
    let u: Vec<f64> = elapsed.iter().map(|t| t / t_end).collect();
    let slope: Vec<f64> = rates.iter().map(|r| r * t_end).collect();
    Ok(Schedule {
        kind: ScheduleKind::Local,
        total_time,
        epsilon,
        mode,
        instance: *instance,
        mapping: Mapping::Tabulated(HermiteTable::new(u, s_nodes, slope)),
    })
}

pub fn build(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    kind: ScheduleKind,
    epsilon: f64,
    mode: MatrixElementMode,
) -> Result<Schedule> {
    match kind {
        ScheduleKind::Global => build_global(coeffs, instance, epsilon),
        ScheduleKind::Local => build_local(coeffs, instance, epsilon, mode),
    }
}

/// Grid minimizer of `p -> ∫_0^1 a (x - p)^2 + c dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaCheck {
    pub argmin_p: f64,
    pub min_integral: f64,
}

pub fn minimum_area_check(a_coeff: f64, c: f64, p_grid: usize) -> Result<AreaCheck> {
    if !(a_coeff > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "curvature a must be > 0 (got {a_coeff})"
        )));
    }
    if p_grid < 3 || p_grid.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "p grid must be odd and >= 3 so that p = 0.5 is a node (got {p_grid})"
        )));
    }
    let mut best = AreaCheck {
        argmin_p: f64::NAN,
        min_integral: f64::INFINITY,
    };
    for p in spectral::unit_grid(p_grid) {
        let (area, _) = quadrature::gk15(&|x: f64| a_coeff * (x - p) * (x - p) + c, 0.0, 1.0);
        if area < best.min_integral {
            best = AreaCheck {
                argmin_p: p,
                min_integral: area,
            };
        }
    }
    Ok(best)
}

/// `∫_0^1 ds / (curvature (s - center)^2 + g2_min)` for each center, by
/// quadrature.
///
/// At fixed curvature and minimum the integral is symmetric about 0.5 and
/// largest there: an off-center vertex pushes part of the `1/g^2` peak
/// outside `[0, 1]`.
pub fn centering_integrals(curvature: f64, g2_min: f64, centers: &[f64]) -> Vec<(f64, f64)> {
    centers
        .iter()
        .map(|&center| {
            let q = quadrature::integrate(
                |s| 1.0 / (curvature * (s - center).powi(2) + g2_min),
                0.0,
                1.0,
                0.0,
                1e-13,
                QUAD_MAX_INTERVALS,
            );
            (center, q.value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{farhi_preset, make_coefficients, make_instance, scaled_preset};

    #[test]
    fn global_bound_examples() {
        let inst = make_instance(4, 0).unwrap();
        let c = farhi_preset(&inst);
        let t = global_time_bound(&c, &inst, 0.1).unwrap();
        assert!((t - 0.75f64.sqrt() / 0.025).abs() < 1e-12);
        assert!((t - 34.641016).abs() < 1e-6);

        let inst = make_instance(64, 0).unwrap();
        let c = scaled_preset(0.5, &inst).unwrap();
        let t = global_time_bound(&c, &inst, 0.1).unwrap();
        let want = (63.0f64 / 64.0).sqrt() / (0.1 * 8.0 / 64.0);
        assert!((t - want).abs() < 1e-10);
        assert!((t - 79.3725).abs() < 1e-4);
    }

    #[test]
    fn epsilon_range() {
        let inst = make_instance(4, 0).unwrap();
        let c = farhi_preset(&inst);
        for eps in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(global_time_bound(&c, &inst, eps), Err(Error::Epsilon(_))));
            assert!(matches!(
                local_time_bound(&c, &inst, eps, MatrixElementMode::default()),
                Err(Error::Epsilon(_))
            ));
        }
    }

    #[test]
    fn farhi_inverse_integral_n4() {
        let inst = make_instance(4, 0).unwrap();
        let poly = spectral::gap_polynomial(&farhi_preset(&inst), &inst).unwrap();
        let closed = poly.inverse_integral_unit();
        // (2/sqrt 3)(pi/3 + pi/3)
        let exact = 4.0 * std::f64::consts::PI / (3.0 * 3f64.sqrt());
        assert!((closed - exact).abs() < 1e-14);
        assert!((closed - 2.4184).abs() < 1e-4);
        let q = inverse_gap_integral_quadrature(&poly);
        assert!((q.value - closed).abs() <= 1e-12 * closed);
    }

    #[test]
    fn norm_mode_element() {
        let inst = make_instance(1 << 16, 0).unwrap();
        let c = farhi_preset(&inst);
        let m = dh_ds_element(&c, &inst, 0.3, MatrixElementMode::OperatorNormBound).unwrap();
        assert!(m <= 2.0);
        assert!((m - inst.complement()).abs() < 1e-12);
        assert_eq!(
            m,
            dh_ds_element(&c, &inst, 0.9, MatrixElementMode::OperatorNormBound).unwrap()
        );
    }

    #[test]
    fn transition_element_positive_and_bounded() {
        let inst = make_instance(16, 2).unwrap();
        let c = make_coefficients(0.0, -1.0, 2.5, 1.0, 1.0, -0.5, &inst).unwrap();
        let s_star = spectral::gap_polynomial(&c, &inst).unwrap().s_star;
        let tr = dh_ds_element(&c, &inst, s_star, MatrixElementMode::Transition).unwrap();
        let norm = dh_ds_element(&c, &inst, s_star, MatrixElementMode::OperatorNormBound).unwrap();
        assert!(tr > 0.0 && tr <= norm + 1e-12);
    }

    #[test]
    fn transition_element_proportional_to_scale() {
        let inst = make_instance(16, 0).unwrap();
        let unit = scaled_preset(0.0, &inst).unwrap();
        let scaled = scaled_preset(0.5, &inst).unwrap();
        for s in spectral::unit_grid(11) {
            let m1 = dh_ds_element(&unit, &inst, s, MatrixElementMode::Transition).unwrap();
            let m4 = dh_ds_element(&scaled, &inst, s, MatrixElementMode::Transition).unwrap();
            assert!((m4 / m1 - 4.0).abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn local_bound_transition_below_norm() {
        let inst = make_instance(64, 0).unwrap();
        let c = scaled_preset(0.25, &inst).unwrap();
        let tr = local_time_bound(&c, &inst, 0.1, MatrixElementMode::Transition).unwrap();
        let nb = local_time_bound(&c, &inst, 0.1, MatrixElementMode::OperatorNormBound).unwrap();
        assert!(tr > 0.0 && tr <= nb);
    }

    #[test]
    fn unbalanced_bounds_warn() {
        let inst = make_instance(16, 0).unwrap();
        let c = make_coefficients(0.0, 0.0, 2.0, 0.0, 3.0, 0.0, &inst).unwrap();
        let tb = time_bounds(&c, &inst, 0.1, MatrixElementMode::default()).unwrap();
        assert_eq!(tb.warnings, vec![BoundWarning::Unbalanced { a: 2.0, b: 3.0 }]);
        let with_a2 = inst.complement() / (0.1 * 2.0 / 16.0);
        assert!((tb.t_global - with_a2).abs() < 1e-12);
        assert!(tb
            .to_record()
            .starts_with("n=16\na=2\nb=3\nepsilon=0.10000000000000001\nmode=norm\n"));
    }

    #[test]
    fn global_schedule_is_linear() {
        let inst = make_instance(4, 0).unwrap();
        let sched = build_global(&farhi_preset(&inst), &inst, 0.1).unwrap();
        let t = sched.total_time();
        assert!((t - 34.641016).abs() < 1e-6);
        assert_eq!(sched.s_at(0.5 * t), 0.5);
        assert_eq!(sched.s_at(0.0), 0.0);
        assert_eq!(sched.s_at(t), 1.0);
        let samples = sched.sample(1000).unwrap();
        assert!(samples.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn local_schedule_boundaries_and_symmetry() {
        let inst = make_instance(16, 0).unwrap();
        let c = farhi_preset(&inst);
        let sched = build_local(&c, &inst, 0.1, MatrixElementMode::default()).unwrap();
        let t = sched.total_time();
        assert!(sched.s_at(0.0).abs() < 1e-9);
        assert!((sched.s_at(t) - 1.0).abs() < 1e-9);
        let half = local_elapsed(&c, &inst, 0.1, MatrixElementMode::default(), 0.5).unwrap();
        assert!((half - 0.5 * t).abs() < 1e-9 * t);
        assert!((sched.s_at(0.5 * t) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn local_schedule_round_trip() {
        let inst = make_instance(64, 9).unwrap();
        for mode in [MatrixElementMode::OperatorNormBound, MatrixElementMode::Transition] {
            for c in [farhi_preset(&inst), scaled_preset(0.25, &inst).unwrap()] {
                let sched = build_local(&c, &inst, 0.1, mode).unwrap();
                for k in 0..=50 {
                    let s = k as f64 / 50.0;
                    let t = local_elapsed(&c, &inst, 0.1, mode, s).unwrap();
                    assert!((sched.s_at(t) - s).abs() <= 1e-6, "{mode} s = {s}");
                }
            }
        }
    }

    #[test]
    fn local_rate_slowest_at_center() {
        let inst = make_instance(16, 0).unwrap();
        let c = farhi_preset(&inst);
        let poly = spectral::gap_polynomial(&c, &inst).unwrap();
        let grid = spectral::unit_grid(101);
        let rates: Vec<f64> = grid.iter().map(|&s| poly.eval(s)).collect();
        let argmin = rates
            .iter()
            .enumerate()
            .min_by(|p, q| p.1.total_cmp(q.1))
            .map(|(k, _)| grid[k])
            .unwrap();
        assert_eq!(argmin, 0.5);
        // The realized schedule moves slowest around the middle too.
        let sched = build_local(&c, &inst, 0.1, MatrixElementMode::default()).unwrap();
        let samples = sched.sample(1001).unwrap();
        let steps: Vec<f64> = samples.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let (k_min, _) = steps.iter().enumerate().min_by(|p, q| p.1.total_cmp(q.1)).unwrap();
        assert!((samples[k_min].1 - 0.5).abs() < 0.01);
    }

    #[test]
    fn schedules_are_smooth() {
        let inst = make_instance(16, 0).unwrap();
        let c = farhi_preset(&inst);
        for kind in [ScheduleKind::Global, ScheduleKind::Local] {
            let sched = build(&c, &inst, kind, 0.1, MatrixElementMode::default()).unwrap();
            let samples = sched.sample(10_000).unwrap();
            let steps: Vec<f64> = samples.windows(2).map(|w| w[1].1 - w[0].1).collect();
            assert!(steps.iter().all(|d| *d >= 0.0));
            let mean = steps.iter().sum::<f64>() / steps.len() as f64;
            assert!(steps.iter().all(|d| *d <= 10.0 * mean), "{kind}");
        }
    }

    #[test]
    fn time_scaling_keeps_path() {
        let inst = make_instance(16, 0).unwrap();
        let sched = build_local(&farhi_preset(&inst), &inst, 0.1, MatrixElementMode::default()).unwrap();
        let slow = sched.time_scaled(3.0).unwrap();
        assert!((slow.total_time() - 3.0 * sched.total_time()).abs() < 1e-12);
        let (t_slow, t_fast) = (3.0 * 0.2 * sched.total_time(), 0.2 * sched.total_time());
        assert!((slow.s_at(t_slow) - sched.s_at(t_fast)).abs() < 1e-14);
        assert!(sched.time_scaled(0.0).is_err());
    }

    #[test]
    fn area_examples() {
        let r = minimum_area_check(3.0, 0.0, 101).unwrap();
        assert_eq!(r.argmin_p, 0.5);
        assert!((r.min_integral - 0.25).abs() < 1e-12);
        let r = minimum_area_check(12.0, 1.0, 11).unwrap();
        assert_eq!(r.argmin_p, 0.5);
        assert!((r.min_integral - 2.0).abs() < 1e-12);
        let (at_zero, _) = quadrature::gk15(&|x: f64| 3.0 * x * x, 0.0, 1.0);
        assert!((at_zero - 1.0).abs() < 1e-14);
        assert!(minimum_area_check(3.0, 0.0, 100).is_err());
        assert!(minimum_area_check(0.0, 0.0, 101).is_err());
    }

    #[test]
    fn centered_vertex_maximizes_inverse_area() {
        let centers: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let vals = centering_integrals(4.0, 0.01, &centers);
        let (peak, _) = vals.iter().copied().max_by(|p, q| p.1.total_cmp(&q.1)).unwrap();
        assert_eq!(peak, 0.5);
        for k in 0..4 {
            assert!((vals[k].1 - vals[8 - k].1).abs() < 1e-10 * vals[k].1);
            assert!(vals[k].1 < vals[k + 1].1);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("local".parse::<ScheduleKind>().unwrap(), ScheduleKind::Local);
        assert_eq!(
            "norm".parse::<MatrixElementMode>().unwrap(),
            MatrixElementMode::OperatorNormBound
        );
        assert_eq!(
            "transition".parse::<MatrixElementMode>().unwrap(),
            MatrixElementMode::Transition
        );
        assert!("fast".parse::<ScheduleKind>().is_err());
    }
}
