//! Spectrum of `H(s) = (1 - s) H_i + s H_f`.
//!
//! `H(s)` is the identity plus rank-2 terms living in `span{|alpha>, |psi>}`,
//! so the spectrum splits into a 2x2 block and an `(n - 2)`-fold bulk level
//! `(1 - s) a1 + s b1` on the orthogonal complement. The block is written in
//! the orthonormal basis `{|alpha>, |beta>}` with
//! `|beta> = (|psi> - x|alpha>) / sqrt(1 - x^2)`.
//!
//! The analytic gap is cross-checked against a dense eigensolver that never
//! uses the block reduction ([`dense_spectrum`]).

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::model::{CoefficientSet, ProblemInstance};
use crate::two_level::{Amplitudes, Hermitian2};

/// Largest `n` for which a dense `n x n` Hamiltonian is built.
pub const DENSE_MAX_N: usize = 4096;

/// `g^2(s) = A s^2 + B s + C` together with its vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPolynomial {
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub coeff_c: f64,
    pub s_star: f64,
    pub g2_min: f64,
}

impl GapPolynomial {
    pub fn eval(&self, s: f64) -> f64 {
        (self.coeff_a * s + self.coeff_b) * s + self.coeff_c
    }

    /// `∫_lo^hi ds / g^2(s)` from the arctangent antiderivative.
    pub fn inverse_integral(&self, lo: f64, hi: f64) -> f64 {
        self.inverse_antiderivative(hi) - self.inverse_antiderivative(lo)
    }

    /// `∫_0^1 ds / g^2(s)`; the discriminant is negative because `g2_min > 0`.
    pub fn inverse_integral_unit(&self) -> f64 {
        let root = (self.coeff_a / self.g2_min).sqrt();
        ((root * (1.0 - self.s_star)).atan() + (root * self.s_star).atan()) / (self.coeff_a * self.g2_min).sqrt()
    }

    fn inverse_antiderivative(&self, s: f64) -> f64 {
        let root = (self.coeff_a / self.g2_min).sqrt();
        (root * (s - self.s_star)).atan() / (self.coeff_a * self.g2_min).sqrt()
    }
}

/// `(A, B, C)` as functions of the coefficients and `x^2`, plus the vertex.
///
/// Fails if `A > 0`, `B < 0` or `0 < s* < 1` does not hold. All three follow
/// from `a, b > 0` and `n >= 2`, so a failure means the inputs left the
/// validated family.
pub fn gap_polynomial(coeffs: &CoefficientSet, instance: &ProblemInstance) -> Result<GapPolynomial> {
    coeffs.ensure_instance(instance)?;
    let x2 = instance.overlap_x_squared();
    let d_a = coeffs.a2() - coeffs.a3();
    let d_b = coeffs.b2() - coeffs.b3();
    let k = -1.0 + 2.0 * x2;

    let coeff_a = d_a * d_a + 2.0 * k * d_a * d_b + d_b * d_b;
    let coeff_b = -2.0 * d_a * (d_a + k * d_b);
    let coeff_c = d_a * d_a;

    if !(coeff_a > 0.0) {
        return Err(Error::Structural(format!("A = {} is not positive", g17(coeff_a))));
    }
    if !(coeff_b < 0.0) {
        return Err(Error::Structural(format!("B = {} is not negative", g17(coeff_b))));
    }
    // -B/2A rewritten as 1/2 + (a^2 - b^2)/2A, exact at a = b.
    let s_star = 0.5 + (d_a - d_b) * (d_a + d_b) / (2.0 * coeff_a);
    if !(s_star > 0.0 && s_star < 1.0) {
        return Err(Error::Structural(format!("-B/2A = {} is not in (0, 1)", g17(s_star))));
    }
    // C - B^2/4A = d_a^2 d_b^2 (1 - k^2) / A, free of cancellation.
    let g2_min = d_a * d_a * d_b * d_b * (4.0 * x2 * (1.0 - x2)) / coeff_a;
    if !(g2_min > 0.0) {
        return Err(Error::Structural(format!("g2_min = {} is not positive", g17(g2_min))));
    }
    Ok(GapPolynomial {
        coeff_a,
        coeff_b,
        coeff_c,
        s_star,
        g2_min,
    })
}

/// Minimum gap from
/// `g_min^2 = 4x^2(1-x^2) / ((1/a)^2 + 2(1-2x^2)/(ab) + (1/b)^2)`.
pub fn min_gap(coeffs: &CoefficientSet, instance: &ProblemInstance) -> Result<f64> {
    coeffs.ensure_instance(instance)?;
    let gp = coeffs.gap_parameters();
    let x2 = instance.overlap_x_squared();
    let (inv_a, inv_b) = (1.0 / gp.a, 1.0 / gp.b);
    let denom = inv_a * inv_a + 2.0 * (1.0 - 2.0 * x2) * inv_a * inv_b + inv_b * inv_b;
    Ok((4.0 * x2 * (1.0 - x2) / denom).sqrt())
}

struct BlockTerms {
    psi: Hermitian2,
    alpha: Hermitian2,
    cross: Hermitian2,
}

fn block_terms(instance: &ProblemInstance) -> BlockTerms {
    let n = instance.n() as f64;
    let x = instance.overlap_x();
    let y = instance.complement();
    let x2 = 1.0 / n;
    let xy = ((n - 1.0).sqrt()) / n;
    let y2 = (n - 1.0) / n;
    BlockTerms {
        // |psi><psi| with |psi> = x|alpha> + y|beta>
        psi: Hermitian2::real(x2, y2, xy),
        alpha: Hermitian2::real(1.0, 0.0, 0.0),
        // |alpha><psi| + |psi><alpha|
        cross: Hermitian2::real(2.0 * x, 0.0, y),
    }
}

fn block_of(terms: &BlockTerms, c1: f64, c2: f64, c3: f64, c4: f64) -> Hermitian2 {
    Hermitian2::real(c1, c1, 0.0)
        .add(&terms.psi.scale(c2))
        .add(&terms.alpha.scale(c3))
        .add(&terms.cross.scale(c4))
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::ParameterOutOfRange(s));
    }
    Ok(())
}

/// Blocks of `H_i` and `H_f` in the `{|alpha>, |beta>}` basis.
pub fn endpoint_blocks(coeffs: &CoefficientSet, instance: &ProblemInstance) -> Result<(Hermitian2, Hermitian2)> {
    coeffs.ensure_instance(instance)?;
    let t = block_terms(instance);
    Ok((
        block_of(&t, coeffs.a1(), coeffs.a2(), coeffs.a3(), coeffs.a4()),
        block_of(&t, coeffs.b1(), coeffs.b2(), coeffs.b3(), coeffs.b4()),
    ))
}

/// Block of `H_f - H_i` without the identity terms `a1`, `b1`, which only
/// contribute a phase.
pub fn derivative_block(coeffs: &CoefficientSet, instance: &ProblemInstance) -> Result<Hermitian2> {
    coeffs.ensure_instance(instance)?;
    let t = block_terms(instance);
    Ok(block_of(
        &t,
        0.0,
        coeffs.b2() - coeffs.a2(),
        coeffs.b3() - coeffs.a3(),
        coeffs.b4() - coeffs.a4(),
    ))
}

/// `H(s)` restricted to `span{|alpha>, |psi>}`.
pub fn effective_block(coeffs: &CoefficientSet, instance: &ProblemInstance, s: f64) -> Result<Hermitian2> {
    check_s(s)?;
    let (hi, hf) = endpoint_blocks(coeffs, instance)?;
    Ok(interpolate(&hi, &hf, s))
}

pub(crate) fn interpolate(hi: &Hermitian2, hf: &Hermitian2, s: f64) -> Hermitian2 {
    hi.scale(1.0 - s).add(&hf.scale(s))
}

pub fn bulk_level(coeffs: &CoefficientSet, s: f64) -> f64 {
    (1.0 - s) * coeffs.a1() + s * coeffs.b1()
}

/// Dense `n x n` matrix `c1 I + c2 |psi><psi| + c3 |alpha><alpha| + c4 (|alpha><psi| + |psi><alpha|)`.
fn dense_operator(instance: &ProblemInstance, c: [f64; 4]) -> DMatrix<f64> {
    let n = instance.n();
    let m = instance.marked_index();
    let x = instance.overlap_x();
    let mut h = DMatrix::from_element(n, n, c[1] * x * x);
    for i in 0..n {
        h[(i, i)] += c[0];
        h[(m, i)] += c[3] * x;
        h[(i, m)] += c[3] * x;
    }
    h[(m, m)] += c[2];
    h
}

/// Dense `H(s)` in the computational basis.
pub fn dense_hamiltonian(coeffs: &CoefficientSet, instance: &ProblemInstance, s: f64) -> Result<DMatrix<f64>> {
    coeffs.ensure_instance(instance)?;
    check_s(s)?;
    if instance.n() > DENSE_MAX_N {
        return Err(Error::DenseGuard {
            n: instance.n(),
            max: DENSE_MAX_N,
        });
    }
    let hi = dense_operator(instance, [coeffs.a1(), coeffs.a2(), coeffs.a3(), coeffs.a4()]);
    let hf = dense_operator(instance, [coeffs.b1(), coeffs.b2(), coeffs.b3(), coeffs.b4()]);
    Ok(hi * (1.0 - s) + hf * s)
}

/// All eigenvalues of the dense `H(s)`, ascending.
pub fn dense_spectrum(coeffs: &CoefficientSet, instance: &ProblemInstance, s: f64) -> Result<Vec<f64>> {
    let h = dense_hamiltonian(coeffs, instance, s)?;
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// The two eigenvalues of a dense spectrum farthest from the bulk level,
/// ascending. Exactly `n - 2` eigenvalues sit on the bulk level, so these
/// are the block levels.
pub fn non_bulk_pair(spectrum: &[f64], bulk: f64) -> [f64; 2] {
    let mut by_distance: Vec<f64> = spectrum.to_vec();
    by_distance.sort_by(|p, q| (q - bulk).abs().total_cmp(&(p - bulk).abs()));
    let (lo, hi) = (by_distance[0].min(by_distance[1]), by_distance[0].max(by_distance[1]));
    [lo, hi]
}

/// One point of a spectrum scan.
#[derive(Debug, Clone, Copy)]
pub struct SpectralSlice {
    pub s: f64,
    pub e_ground: f64,
    pub e_excited: f64,
    pub e_bulk: f64,
    pub ground_vector: Amplitudes,
    /// `g^2(s)` from the polynomial.
    pub g2_analytic: f64,
    /// `(e_excited - e_ground)^2` from the block eigenvalues.
    pub g2_numeric: f64,
}

/// Position of the bulk level relative to the block levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BulkFlag {
    Clear,
    /// `e_bulk < e_excited`: the bulk level is the first excited level.
    Intrusion,
    /// `e_bulk < e_ground`: the block ground state is not the global ground state.
    GroundLoss,
}

impl BulkFlag {
    pub fn code(&self) -> u8 {
        match self {
            BulkFlag::Clear => 0,
            BulkFlag::Intrusion => 1,
            BulkFlag::GroundLoss => 2,
        }
    }
}

/// Relative slack for level comparisons; coincident levels (e.g. bulk and
/// excited level of `H_i` in the farhi preset) are not flagged.
const LEVEL_TOL: f64 = 1e-12;

fn below(lower: f64, upper: f64) -> bool {
    lower < upper - LEVEL_TOL * (1.0 + upper.abs().max(lower.abs()))
}

impl SpectralSlice {
    pub fn bulk_flag(&self) -> BulkFlag {
        if below(self.e_bulk, self.e_ground) {
            BulkFlag::GroundLoss
        } else if below(self.e_bulk, self.e_excited) {
            BulkFlag::Intrusion
        } else {
            BulkFlag::Clear
        }
    }
}

pub fn spectral_slice(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    poly: &GapPolynomial,
    s: f64,
) -> Result<SpectralSlice> {
    let block = effective_block(coeffs, instance, s)?;
    let eig = block.eigen();
    let [e_ground, e_excited] = eig.values;
    if e_ground == e_excited {
        return Err(Error::LevelTie { s });
    }
    let gap = e_excited - e_ground;
    Ok(SpectralSlice {
        s,
        e_ground,
        e_excited,
        e_bulk: bulk_level(coeffs, s),
        ground_vector: eig.vectors[0],
        g2_analytic: poly.eval(s),
        g2_numeric: gap * gap,
    })
}

/// `k / (points - 1)` for `k = 0..points`; endpoints are exactly 0 and 1.
pub fn unit_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|k| k as f64 / last).collect()
}

/// Slices on a uniform grid over `[0, 1]`, ordered by `s`.
pub fn spectrum_scan(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    num_points: usize,
) -> Result<Vec<SpectralSlice>> {
    if num_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "spectrum scan needs at least 2 points (got {num_points})"
        )));
    }
    let poly = gap_polynomial(coeffs, instance)?;
    unit_grid(num_points)
        .into_par_iter()
        .map(|s| spectral_slice(coeffs, instance, &poly, s))
        .collect()
}

pub const SCAN_CSV_HEADER: &str = "s,e_ground,e_excited,e_bulk,g2_analytic,g2_numeric,bulk_flag";

/// Scan as CSV; `bulk_flag` is 0 (clear), 1 (bulk below the excited level)
/// or 2 (bulk below the ground level).
pub fn scan_to_csv(slices: &[SpectralSlice]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for sl in slices {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            g17(sl.s),
            g17(sl.e_ground),
            g17(sl.e_excited),
            g17(sl.e_bulk),
            g17(sl.g2_analytic),
            g17(sl.g2_numeric),
            sl.bulk_flag().code()
        ));
    }
    out
}

/// Worst disagreement between the dense-oracle gap and the polynomial.
#[derive(Debug, Clone, Copy)]
pub struct OracleDeviation {
    pub max_abs: f64,
    pub worst_s: f64,
}

/// `max_s |(e1 - e0)^2 - g^2(s)|` over a uniform grid, with `e0, e1` taken
/// from the dense spectrum.
pub fn oracle_deviation(
    coeffs: &CoefficientSet,
    instance: &ProblemInstance,
    grid_points: usize,
) -> Result<OracleDeviation> {
    let poly = gap_polynomial(coeffs, instance)?;
    let mut worst = OracleDeviation {
        max_abs: 0.0,
        worst_s: 0.0,
    };
    for s in unit_grid(grid_points) {
        let spectrum = dense_spectrum(coeffs, instance, s)?;
        let [e0, e1] = non_bulk_pair(&spectrum, bulk_level(coeffs, s));
        let dev = ((e1 - e0).powi(2) - poly.eval(s)).abs();
        if dev > worst.max_abs {
            worst = OracleDeviation {
                max_abs: dev,
                worst_s: s,
            };
        }
    }
    Ok(worst)
}
