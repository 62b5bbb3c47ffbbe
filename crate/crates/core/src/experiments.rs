//! Parameter sweeps over `n` for the scaled presets `a = b = n^gamma`, with
//! log-log fits of the resulting time bounds.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::format::g17;
use crate::model::{make_instance, scaled_preset};
use crate::schedule::{self, MatrixElementMode, ScheduleKind};

/// Exponents named by the speedup claims.
pub const DEFAULT_GAMMAS: [f64; 4] = [0.0, 0.25, 0.5, 1.0];

/// Largest `n` accepted by [`run_dynamic_sweep`].
pub const DYNAMIC_MAX_N: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n_values: Vec<usize>,
    pub gamma: f64,
    pub epsilon: f64,
    pub kind: ScheduleKind,
    pub mode: MatrixElementMode,
    pub steps: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one n".into()));
        }
        for &n in &self.n_values {
            if n < 4 || !n.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "sweep sizes must be powers of two >= 4 (got {n})"
                )));
            }
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("sweep sizes must be strictly increasing".into()));
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::NegativeGamma(self.gamma));
        }
        schedule::check_epsilon(self.epsilon)
    }
}

/// Least-squares line through `(ln n, ln t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(usize, f64)>,
}

/// A fit together with the sweep cell that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFit {
    pub gamma: f64,
    pub kind: ScheduleKind,
    pub mode: MatrixElementMode,
    pub epsilon: f64,
    pub fit: ScalingFit,
}

/// Ordinary least squares on `(ln n, ln t)`.
///
/// `r_squared` is `1 - SS_res / SS_tot`, clamped to `[0, 1]`; when the
/// times are all equal (`SS_tot = 0`) the line is exact and `r_squared = 1`.
pub fn fit_exponent(points: &[(usize, f64)]) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "exponent fit needs at least 4 points (got {})",
            points.len()
        )));
    }
    if let Some(&(n, t)) = points.iter().find(|&&(n, t)| n == 0 || !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "exponent fit needs positive values (got n = {n}, t = {t})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t.ln()).collect();
    let len = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / len;
    let mean_y = ys.iter().sum::<f64>() / len;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "exponent fit needs at least two distinct n".into(),
        ));
    }
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + exponent * x)).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        exponent,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}

/// Time bound of the scaled preset at every `n` of the sweep, then a fit.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepFit> {
    spec.validate()?;
    let points = spec
        .n_values
        .par_iter()
        .map(|&n| {
            let instance = make_instance(n, 0)?;
            let coeffs = scaled_preset(spec.gamma, &instance)?;
            let t = match spec.kind {
                ScheduleKind::Global => schedule::global_time_bound(&coeffs, &instance, spec.epsilon)?,
                ScheduleKind::Local => schedule::local_time_bound(&coeffs, &instance, spec.epsilon, spec.mode)?,
            };
            Ok((n, t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepFit {
        gamma: spec.gamma,
        kind: spec.kind,
        mode: spec.mode,
        epsilon: spec.epsilon,
        fit: fit_exponent(&points)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicRow {
    pub n: usize,
    pub overlap_x: f64,
    pub t_bound: f64,
    pub success_probability: f64,
    pub norm_drift: f64,
}

/// Evolves every sweep cell along its own schedule at its own bound time.
pub fn run_dynamic_sweep(spec: &SweepSpec) -> Result<Vec<DynamicRow>> {
    spec.validate()?;
    if let Some(&n) = spec.n_values.iter().find(|&&n| n > DYNAMIC_MAX_N) {
        return Err(Error::InvalidArgument(format!(
            "dynamic sweep limited to n <= {DYNAMIC_MAX_N} (got {n})"
        )));
    }
    spec.n_values
        .par_iter()
        .map(|&n| {
            let instance = make_instance(n, 0)?;
            let coeffs = scaled_preset(spec.gamma, &instance)?;
            let sched = schedule::build(&coeffs, &instance, spec.kind, spec.epsilon, spec.mode)?;
            let run = dynamics::evolve(&coeffs, &instance, &sched, spec.steps)?;
            Ok(DynamicRow {
                n,
                overlap_x: instance.overlap_x(),
                t_bound: sched.total_time(),
                success_probability: run.success_probability,
                norm_drift: run.max_norm_drift,
            })
        })
        .collect()
}

pub const POINTS_CSV_HEADER: &str = "n,gamma,kind,mode,epsilon,t_bound";
pub const FITS_CSV_HEADER: &str = "gamma,kind,exponent,intercept,r_squared,num_points";
pub const DYNAMIC_CSV_HEADER: &str = "n,overlap_x,t_bound,success_probability,norm_drift";

fn sorted(fits: &[SweepFit]) -> Vec<&SweepFit> {
    let mut order: Vec<&SweepFit> = fits.iter().collect();
    order.sort_by(|p, q| p.gamma.total_cmp(&q.gamma).then(p.kind.cmp(&q.kind)));
    order
}

/// One row per `(n, cell)`, cells in `(gamma, kind)` order.
pub fn points_csv(fits: &[SweepFit]) -> String {
    let mut out = format!("{POINTS_CSV_HEADER}\n");
    for f in sorted(fits) {
        for &(n, t) in &f.fit.points {
            out.push_str(&format!(
                "{n},{},{},{},{},{}\n",
                g17(f.gamma),
                f.kind,
                f.mode,
                g17(f.epsilon),
                g17(t)
            ));
        }
    }
    out
}

pub fn fits_csv(fits: &[SweepFit]) -> String {
    let mut out = format!("{FITS_CSV_HEADER}\n");
    for f in sorted(fits) {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            g17(f.gamma),
            f.kind,
            g17(f.fit.exponent),
            g17(f.fit.intercept),
            g17(f.fit.r_squared),
            f.fit.points.len()
        ));
    }
    out
}

pub fn dynamic_csv(rows: &[DynamicRow]) -> String {
    let mut out = format!("{DYNAMIC_CSV_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            g17(r.overlap_x),
            g17(r.t_bound),
            g17(r.success_probability),
            g17(r.norm_drift)
        ));
    }
    out
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Self-contained 800x600 log-log chart of one fit: data points and the
/// fitted line.
pub fn fit_svg(fit: &SweepFit) -> String {
    let pts = &fit.fit.points;
    let lx: Vec<f64> = pts.iter().map(|&(n, _)| (n as f64).log10()).collect();
    let ly: Vec<f64> = pts.iter().map(|&(_, t)| t.log10()).collect();
    let (x_lo, x_hi) = padded_range(&lx, 0.1);
    let (y_lo, y_hi) = padded_range(&ly, 0.25);

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |v: f64| MARGIN_TOP + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = SVG_WIDTH,
        h = SVG_HEIGHT
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"30\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">{} schedule, gamma = {}, mode = {}: T ~ N^{:.4}</text>\n",
        px(SVG_WIDTH / 2.0),
        fit.kind,
        g17(fit.gamma),
        fit.mode,
        fit.fit.exponent
    ));

    let (x0, y0) = (MARGIN_LEFT, MARGIN_TOP + plot_h);
    svg.push_str(&format!(
        "<path d=\"M{} {} H{} M{} {} V{}\" stroke=\"black\" fill=\"none\"/>\n",
        px(x0),
        px(y0),
        px(x0 + plot_w),
        px(x0),
        px(y0),
        px(MARGIN_TOP)
    ));

    for &(n, _) in pts {
        let x = sx((n as f64).log10());
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"black\"/>\n<text x=\"{x}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{n}</text>\n",
            x = px(x),
            y = px(y0),
            y2 = px(y0 + 5.0),
            ty = px(y0 + 20.0)
        ));
    }
    for (value, label) in y_ticks(y_lo, y_hi) {
        let y = sy(value);
        svg.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x0}\" y2=\"{y}\" stroke=\"black\"/>\n<text x=\"{tx}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{label}</text>\n",
            x1 = px(x0 - 5.0),
            x0 = px(x0),
            y = px(y),
            tx = px(x0 - 8.0),
            ty = px(y + 4.0)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">search-space size N (log scale)</text>\n",
        px(MARGIN_LEFT + plot_w / 2.0),
        px(SVG_HEIGHT - 20.0)
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 {y})\">time bound T (1/energy, log scale)</text>\n",
        y = px(MARGIN_TOP + plot_h / 2.0)
    ));

    // Fitted line, in log10 coordinates: log10 t = (c + k ln n) / ln 10.
    let line_at =
        |lx: f64| (fit.fit.intercept + fit.fit.exponent * lx * std::f64::consts::LN_10) / std::f64::consts::LN_10;
    let (fx0, fx1) = (lx[0], lx[lx.len() - 1]);
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        px(sx(fx0)),
        px(sy(line_at(fx0))),
        px(sx(fx1)),
        px(sy(line_at(fx1)))
    ));
    for (x, y) in lx.iter().zip(&ly) {
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"firebrick\"/>\n",
            px(sx(*x)),
            px(sy(*y))
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64], min_pad: f64) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = (0.05 * (hi - lo)).max(min_pad);
    (lo - pad, hi + pad)
}

/// Ticks at integer and half decades inside `[lo, hi]`, labelled in
/// plain or scientific notation.
fn y_ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    let step = if hi - lo > 3.0 { 1.0 } else { 0.5 };
    let mut ticks = Vec::new();
    let mut k = (lo / step).ceil() as i64;
    while (k as f64) * step <= hi {
        let v = k as f64 * step;
        ticks.push((v, format_tick(10f64.powf(v))));
        k += 1;
    }
    ticks
}

fn format_tick(v: f64) -> String {
    if (0.01..100_000.0).contains(&v) {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn svg_name(fit: &SweepFit) -> String {
    format!("fit_{}_gamma_{}.svg", fit.kind, g17(fit.gamma))
}

/// Writes `fits.csv`, `points.csv` and one SVG per fit into `dir`, which is
/// created if needed. Returns the written paths in order.
pub fn emit_report(fits: &[SweepFit], dir: &Path) -> Result<Vec<PathBuf>> {
    if fits.is_empty() {
        return Err(Error::InvalidArgument("report needs at least one fit".into()));
    }
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let fits_path = dir.join("fits.csv");
    write_file(&fits_path, &fits_csv(fits))?;
    written.push(fits_path);
    let points_path = dir.join("points.csv");
    write_file(&points_path, &points_csv(fits))?;
    written.push(points_path);
    for fit in sorted(fits) {
        let path = dir.join(svg_name(fit));
        write_file(&path, &fit_svg(fit))?;
        written.push(path);
    }
    Ok(written)
}
