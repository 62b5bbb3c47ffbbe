//! Problem instances and the real coefficient family of the extended
//! initial/final Hamiltonians.
//!
//! ```text
//! H_i = a1 + a2 |psi><psi| + a3 |alpha><alpha| + a4 (|alpha><psi| + |psi><alpha|)
//! H_f = b1 + b2 |psi><psi| + b3 |alpha><alpha| + b4 (|alpha><psi| + |psi><alpha|)
//! ```
//!
//! `|psi>` is the uniform superposition over `n` basis states and `|alpha>`
//! the marked basis state, so `x = <alpha|psi> = 1/sqrt(n)`. The cross
//! coefficients are never free: `a4 = -a3 x` makes `|psi>` an eigenvector of
//! `H_i` and `b4 = -b2 x` makes `|alpha>` an eigenvector of `H_f`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::g17;

/// Search-space size, marked index and the overlap `x = <alpha|psi>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemInstance {
    n: usize,
    marked_index: usize,
    overlap_x: f64,
}

impl ProblemInstance {
    pub fn new(n: usize, marked_index: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InstanceTooSmall { n });
        }
        if marked_index >= n {
            return Err(Error::MarkedIndexOutOfRange { index: marked_index, n });
        }
        Ok(Self {
            n,
            marked_index,
            overlap_x: (1.0 / n as f64).sqrt(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marked_index(&self) -> usize {
        self.marked_index
    }

    /// `x = <alpha|psi> = 1/sqrt(n)`.
    pub fn overlap_x(&self) -> f64 {
        self.overlap_x
    }

    /// `x^2 = 1/n`, computed without squaring the rounded overlap.
    pub fn overlap_x_squared(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// `sqrt(1 - x^2)`, the weight of `|psi>` orthogonal to `|alpha>`.
    pub fn complement(&self) -> f64 {
        ((self.n - 1) as f64 / self.n as f64).sqrt()
    }

    pub(crate) fn ensure_same(&self, other: &ProblemInstance, what: &'static str) -> Result<()> {
        if self.n != other.n || self.marked_index != other.marked_index {
            return Err(Error::InstanceMismatch {
                what,
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

pub fn make_instance(n: usize, marked_index: usize) -> Result<ProblemInstance> {
    ProblemInstance::new(n, marked_index)
}

/// The six free coefficients, before validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl Coefficients {
    fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("b1", self.b1),
            ("b2", self.b2),
            ("b3", self.b3),
        ]
    }
}

/// Non-fatal findings attached to a validated [`CoefficientSet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelWarning {
    /// `a1 + a2 - a3 x^2 < 0`.
    NegativeInitialGroundEnergy(f64),
    /// `b1 + b3 - b2 x^2 < 0`.
    NegativeFinalGroundEnergy(f64),
}

impl fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelWarning::NegativeInitialGroundEnergy(e) => {
                write!(f, "ground energy of H_i is negative: a1 + a2 - a3 x^2 = {}", g17(*e))
            }
            ModelWarning::NegativeFinalGroundEnergy(e) => {
                write!(f, "ground energy of H_f is negative: b1 + b3 - b2 x^2 = {}", g17(*e))
            }
        }
    }
}

/// A validated coefficient family bound to one [`ProblemInstance`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    raw: Coefficients,
    a4: f64,
    b4: f64,
    instance: ProblemInstance,
    warnings: Vec<ModelWarning>,
}

/// `a = a3 - a2` and `b = b2 - b3`; the gap depends on nothing else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapParameters {
    pub a: f64,
    pub b: f64,
}

impl GapParameters {
    pub fn is_balanced(&self) -> bool {
        self.a == self.b
    }
}

impl CoefficientSet {
    pub fn new(raw: Coefficients, instance: &ProblemInstance) -> Result<Self> {
        for (name, value) in raw.named() {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if !(raw.a3 > raw.a2) {
            return Err(Error::InitialOrdering { a2: raw.a2, a3: raw.a3 });
        }
        if !(raw.b2 > raw.b3) {
            return Err(Error::FinalOrdering { b2: raw.b2, b3: raw.b3 });
        }
        let x = instance.overlap_x();
        let mut set = Self {
            raw,
            // `+ 0.0` folds -0 into 0 for printing.
            a4: -raw.a3 * x + 0.0,
            b4: -raw.b2 * x + 0.0,
            instance: *instance,
            warnings: Vec::new(),
        };
        let (e_i, e_f) = set.ground_energies();
        if e_i < 0.0 {
            set.warnings.push(ModelWarning::NegativeInitialGroundEnergy(e_i));
        }
        if e_f < 0.0 {
            set.warnings.push(ModelWarning::NegativeFinalGroundEnergy(e_f));
        }
        Ok(set)
    }

    pub fn raw(&self) -> Coefficients {
        self.raw
    }
    pub fn a1(&self) -> f64 {
        self.raw.a1
    }
    pub fn a2(&self) -> f64 {
        self.raw.a2
    }
    pub fn a3(&self) -> f64 {
        self.raw.a3
    }
    pub fn a4(&self) -> f64 {
        self.a4
    }
    pub fn b1(&self) -> f64 {
        self.raw.b1
    }
    pub fn b2(&self) -> f64 {
        self.raw.b2
    }
    pub fn b3(&self) -> f64 {
        self.raw.b3
    }
    pub fn b4(&self) -> f64 {
        self.b4
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn warnings(&self) -> &[ModelWarning] {
        &self.warnings
    }

    pub fn gap_parameters(&self) -> GapParameters {
        GapParameters {
            a: self.raw.a3 - self.raw.a2,
            b: self.raw.b2 - self.raw.b3,
        }
    }

    /// Lowest energies of `H_i` (on `|psi>`) and `H_f` (on `|alpha>`).
    pub fn ground_energies(&self) -> (f64, f64) {
        let x2 = self.instance.overlap_x_squared();
        (
            self.raw.a1 + self.raw.a2 - self.raw.a3 * x2,
            self.raw.b1 + self.raw.b3 - self.raw.b2 * x2,
        )
    }

    /// Same coefficients with `a1`, `b1` shifted; used to probe that the
    /// identity terms only contribute a global phase.
    pub fn with_identity_shift(&self, da1: f64, db1: f64) -> Result<Self> {
        let raw = Coefficients {
            a1: self.raw.a1 + da1,
            b1: self.raw.b1 + db1,
            ..self.raw
        };
        Self::new(raw, &self.instance)
    }

    pub(crate) fn ensure_instance(&self, instance: &ProblemInstance) -> Result<()> {
        self.instance.ensure_same(instance, "coefficient set")
    }
}

#[allow(clippy::too_many_arguments)]
pub fn make_coefficients(
    a1: f64,
    a2: f64,
    a3: f64,
    b1: f64,
    b2: f64,
    b3: f64,
    instance: &ProblemInstance,
) -> Result<CoefficientSet> {
    CoefficientSet::new(Coefficients { a1, a2, a3, b1, b2, b3 }, instance)
}

/// `H_i = 1 - |psi><psi|`, `H_f = 1 - |alpha><alpha|`.
pub fn farhi_preset(instance: &ProblemInstance) -> CoefficientSet {
    make_coefficients(1.0, -1.0, 0.0, 1.0, 0.0, -1.0, instance).expect("farhi preset is valid")
}

/// `a = b = n^gamma`, realized as `a1 = b1 = 1`, `a2 = b3 = 0`,
/// `a3 = b2 = n^gamma`. Both ground energies equal `1 - n^(gamma - 1)`.
pub fn scaled_preset(gamma: f64, instance: &ProblemInstance) -> Result<CoefficientSet> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::NegativeGamma(gamma));
    }
    let scale = (instance.n() as f64).powf(gamma);
    make_coefficients(1.0, 0.0, scale, 1.0, scale, 0.0, instance)
}

pub fn ground_energies(coeffs: &CoefficientSet, instance: &ProblemInstance) -> Result<(f64, f64)> {
    coeffs.ensure_instance(instance)?;
    Ok(coeffs.ground_energies())
}

/// Named coefficient presets: `farhi` and `scaled:<gamma>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Farhi,
    Scaled(f64),
}

impl Preset {
    pub fn build(&self, instance: &ProblemInstance) -> Result<CoefficientSet> {
        match *self {
            Preset::Farhi => Ok(farhi_preset(instance)),
            Preset::Scaled(gamma) => scaled_preset(gamma, instance),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "farhi" {
            return Ok(Preset::Farhi);
        }
        if let Some(gamma) = s.strip_prefix("scaled:") {
            let gamma: f64 = gamma
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad gamma in preset {s:?}")))?;
            if !(gamma >= 0.0) {
                return Err(Error::NegativeGamma(gamma));
            }
            return Ok(Preset::Scaled(gamma));
        }
        Err(Error::InvalidArgument(format!(
            "unknown preset {s:?} (expected \"farhi\" or \"scaled:<gamma>\")"
        )))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Farhi => f.write_str("farhi"),
            Preset::Scaled(gamma) => write!(f, "scaled:{}", g17(*gamma)),
        }
    }
}

/// Flat `key=value` form of an instance plus its coefficients.
///
/// Keys: `n`, `marked_index`, `a1`, `a2`, `a3`, `b1`, `b2`, `b3`. A `preset`
/// key may replace the six coefficients. `a4`/`b4` are always re-derived and
/// rejected if present. Blank lines and `#` comments are ignored.
pub fn to_config(coeffs: &CoefficientSet) -> String {
    let inst = coeffs.instance();
    let mut out = format!("n={}\nmarked_index={}\n", inst.n(), inst.marked_index());
    for (name, value) in coeffs.raw.named() {
        out.push_str(&format!("{name}={}\n", g17(value)));
    }
    out
}

pub fn from_config(text: &str) -> Result<CoefficientSet> {
    let mut n = None;
    let mut marked = 0usize;
    let mut preset = None;
    let mut values: [Option<f64>; 6] = [None; 6];
    const KEYS: [&str; 6] = ["a1", "a2", "a3", "b1", "b2", "b3"];

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            message: format!("expected key=value, got {line:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| Error::Config {
            line: line_no,
            message: format!("invalid {what} for {key}: {value:?}"),
        };
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad("integer"))?),
            "marked_index" => marked = value.parse::<usize>().map_err(|_| bad("integer"))?,
            "preset" => preset = Some(value.parse::<Preset>()?),
            "a4" | "b4" => {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("{key} is derived and must not be given"),
                })
            }
            _ => {
                let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| Error::Config {
                    line: line_no,
                    message: format!("unknown key {key:?}"),
                })?;
                values[slot] = Some(value.parse::<f64>().map_err(|_| bad("number"))?);
            }
        }
    }

    let n = n.ok_or(Error::Config {
        line: 0,
        message: "missing key n".into(),
    })?;
    let instance = ProblemInstance::new(n, marked)?;
    match preset {
        Some(preset) => {
            if values.iter().any(Option::is_some) {
                return Err(Error::Config {
                    line: 0,
                    message: "preset cannot be combined with explicit coefficients".into(),
                });
            }
            preset.build(&instance)
        }
        None => {
            let mut got = [0.0; 6];
            for (slot, value) in values.iter().enumerate() {
                got[slot] = value.ok_or_else(|| Error::Config {
                    line: 0,
                    message: format!("missing key {}", KEYS[slot]),
                })?;
            }
            make_coefficients(got[0], got[1], got[2], got[3], got[4], got[5], &instance)
        }
    }
}
