//! Adaptive Gauss–Kronrod (7/15) quadrature with global error control.

// Published GK15 constants, kept at full printed precision.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae on [-1, 1] (non-negative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the 7-point rule, sharing the odd Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

/// Single G7K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[lo, hi]`, bisecting the worst panel until the
/// summed error estimate is below `max(abs_tol, rel_tol * |value|)` or
/// `max_intervals` panels exist.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Quadrature {
    let (value, error) = gk15(&f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { lo, hi, value, error });
    let (mut total, mut total_err) = (value, error);

    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < max_intervals {
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let (lv, le) = gk15(&f, worst.lo, mid);
        let (rv, re) = gk15(&f, mid, worst.hi);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
        });
    }

    // Re-sum in interval order so the result does not depend on the
    // running-update rounding.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let value = panels.iter().map(|p| p.value).sum::<f64>();
    let error = panels.iter().map(|p| p.error).sum::<f64>();
    Quadrature {
        value,
        error,
        intervals: panels.len(),
        converged: error <= abs_tol.max(rel_tol * value.abs()),
    }
}
