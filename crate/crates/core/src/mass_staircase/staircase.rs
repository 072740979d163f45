use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cantor_set::{hausdorff_dimension, CantorParams, ConstructionMode, COORD_TOLERANCE};
use crate::error::{Error, Result};
use crate::report::fmt_real;

use super::gamma_one_plus;

/// Default absolute tolerance, relative to `S(1)`, of the staircase recursion.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

// Guard against runaway descent; the mass weight underflows long before this.
const MAX_LEVELS: u32 = 1100;

/// Total mass convention `S(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `S(1) = 1/Γ(1 + ζ)`: the value the mass function assigns to `[0, 1]`.
    #[default]
    InverseGamma,
    /// `S(1) = Γ(1 + ζ)`.
    GammaScaled,
    /// `S(1) = 1`.
    Unit,
}

impl Normalization {
    pub fn total_mass(self, zeta: f64) -> f64 {
        match self {
            Normalization::InverseGamma => 1.0 / gamma_one_plus(zeta),
            Normalization::GammaScaled => gamma_one_plus(zeta),
            Normalization::Unit => 1.0,
        }
    }
}

/// Evaluates the integral staircase `S(x)` of a middle-ξ set with reference
/// point 0.
///
/// Each surviving piece carries half of its parent's mass, so `S` is found by
/// descending the construction: a point in the left piece keeps the
/// accumulated mass, a point in the right piece adds half the parent mass, and
/// a point in the removed middle sits on a plateau. The descent stops once the
/// remaining mass weight drops below `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseEvaluator {
    params: CantorParams,
    zeta: f64,
    normalization: Normalization,
    tolerance: f64,
    total: f64,
}

impl StaircaseEvaluator {
    /// Evaluator with ζ = dim_H, the default normalization and tolerance.
    pub fn new(params: CantorParams) -> Result<Self> {
        Self::with_options(params, None, Normalization::default(), DEFAULT_TOLERANCE)
    }

    pub fn with_options(
        params: CantorParams,
        zeta: Option<f64>,
        normalization: Normalization,
        tolerance: f64,
    ) -> Result<Self> {
        let zeta = match zeta {
            Some(z) => z,
            None => hausdorff_dimension(params.xi())?,
        };
        if !(zeta > 0.0 && zeta <= 1.0) {
            return Err(Error::InvalidOrder { name: "zeta", value: zeta });
        }
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::Domain(format!(
                "staircase tolerance must lie in (0, 1), got {tolerance}"
            )));
        }
        if params.mode() == ConstructionMode::AbsoluteRemoval {
            // the descent must be able to reach the mass resolution
            let levels = (1.0 / tolerance).log2().ceil() as u32 + 1;
            crate::cantor_set::level_lengths(params.xi(), params.mode(), levels)?;
        }
        Ok(Self {
            params,
            zeta,
            normalization,
            tolerance,
            total: normalization.total_mass(zeta),
        })
    }

    pub fn params(&self) -> &CantorParams {
        &self.params
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `S(1)`.
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// `S(x)` for `x` in `[0, 1]`; arguments outside are clamped.
    pub fn eval(&self, x: f64) -> f64 {
        self.total * self.unit_eval(x)
    }

    /// `S` extended to the real line by `S(x + n) = S(x) + n S(1)`, which is
    /// also odd because the construction is symmetric.
    pub fn eval_extended(&self, x: f64) -> f64 {
        let n = x.floor();
        let frac = x - n;
        self.total * (n + self.unit_eval(frac))
    }

    /// Smallest `x` in `[0, 1]` with `S(x) >= u`.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !(0.0..=self.total).contains(&u) {
            return Err(Error::Domain(format!(
                "staircase inverse needs u in [0, {}], got {u}",
                self.total
            )));
        }
        Ok(self.unit_inverse(u / self.total))
    }

    /// Generalised inverse of [`eval_extended`](Self::eval_extended) on the real line.
    pub fn inverse_extended(&self, u: f64) -> f64 {
        let v = u / self.total;
        let n = v.floor();
        n + self.unit_inverse(v - n)
    }

    // Descends in absolute coordinates with the same lengths and offsets as
    // the interval builder. While pieces are longer than COORD_TOLERANCE,
    // points that close to a gap take its plateau value, so float endpoints
    // of the construction cannot slip into a deeper gap.
    fn unit_eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        // mirror the right half as the interval builder does; 1 - x is exact here
        if x > 0.5 {
            return 1.0 - self.descend(1.0 - x);
        }
        self.descend(x)
    }

    fn descend(&self, x: f64) -> f64 {
        let (mut left, mut len) = (0.0, 1.0);
        let mut acc = 0.0;
        let mut weight = 1.0;
        let mut levels = Levels::new(&self.params);
        for _ in 0..MAX_LEVELS {
            let (child, offset) = levels.next_child();
            let snap = if child > 2.0 * COORD_TOLERANCE { COORD_TOLERANCE } else { 0.0 };
            if x < left + child - snap || (snap == 0.0 && x == left + child) {
            } else if x > left + offset + snap || (snap == 0.0 && x == left + offset) {
                acc += 0.5 * weight;
                left += offset;
            } else {
                return acc + 0.5 * weight;
            }
            len = child;
            weight *= 0.5;
            if weight < self.tolerance || len == 0.0 {
                break;
            }
        }
        let frac = if len > 0.0 { ((x - left) / len).clamp(0.0, 1.0) } else { 0.0 };
        acc + weight * frac
    }

    fn unit_inverse(&self, v: f64) -> f64 {
        let mut v = v.clamp(0.0, 1.0);
        let mut x = 0.0;
        let mut len = 1.0;
        let mut weight = 1.0;
        let mut levels = Levels::new(&self.params);
        for _ in 0..MAX_LEVELS {
            let (child, offset) = levels.next_child();
            if v <= 0.5 {
                v *= 2.0;
            } else {
                x += offset;
                v = 2.0 * v - 1.0;
            }
            len = child;
            weight *= 0.5;
            if weight < self.tolerance && len < 1e-3 * f64::EPSILON {
                break;
            }
        }
        x + len * v
    }

    /// Write an `(x, S(x))` table on `points` evenly spaced abscissae of `[0, 1]`.
    pub fn write_table_csv<W: Write>(&self, mut out: W, points: usize) -> Result<()> {
        if points < 2 {
            return Err(Error::Domain("a staircase table needs at least 2 points".into()));
        }
        writeln!(out, "x,S")?;
        for i in 0..points {
            let x = i as f64 / (points - 1) as f64;
            writeln!(out, "{},{}", fmt_real(x), fmt_real(self.eval(x)))?;
        }
        Ok(())
    }
}

/// Walks the construction one step at a time, yielding the child length and
/// the right child's offset within its parent, as the interval builder does.
struct Levels {
    xi: f64,
    mode: ConstructionMode,
    len: f64,
    removal: f64,
}

impl Levels {
    fn new(params: &CantorParams) -> Self {
        Self {
            xi: params.xi(),
            mode: params.mode(),
            len: 1.0,
            removal: 1.0,
        }
    }

    fn next_child(&mut self) -> (f64, f64) {
        let parent = self.len;
        let child = match self.mode {
            ConstructionMode::Proportional => parent * 0.5 * (1.0 - self.xi),
            ConstructionMode::AbsoluteRemoval => {
                self.removal *= self.xi;
                0.5 * (parent - self.removal).max(0.0)
            }
        };
        self.len = child;
        (child, parent - child)
    }
}
