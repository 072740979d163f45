//! Finite-depth middle-ξ Cantor sets.
//!
//! Starting from `[0, 1]`, every surviving closed interval loses an open middle
//! piece at each step. Two removal rules are supported:
//!
//! * [`ConstructionMode::Proportional`] removes the middle fraction ξ of each
//!   interval, so every depth-k interval has length `((1 - ξ)/2)^k` and the total
//!   length is `(1 - ξ)^k`.
//! * [`ConstructionMode::AbsoluteRemoval`] removes an open piece of absolute
//!   length `ξ^k` at step k. For ξ = 1/3 both rules give the same set.
//!
//! Within a level all intervals have the same length in either mode, so an
//! interval is addressed by its binary index: bit m (most significant first)
//! selects the right child at step m.

pub mod exact;

use std::io::Write;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::fmt_real;

/// Deepest construction accepted in double precision.
pub const MAX_DEPTH: u32 = 52;

/// Absolute slack used when comparing coordinates in `[0, 1]` against
/// interval endpoints, so that a point entered as `1.0/3.0` matches the
/// computed endpoint `(1 - ξ)/2`.
pub const COORD_TOLERANCE: f64 = 4.0 * f64::EPSILON;

/// Deepest construction that [`build_prefractal`] will materialise (2^24 intervals).
pub const MAX_MATERIALIZED_DEPTH: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionMode {
    /// Remove the middle fraction ξ of every surviving interval.
    #[default]
    Proportional,
    /// Remove an open piece of length ξ^k from every interval at step k.
    AbsoluteRemoval,
}

/// Closed interval `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedInterval {
    pub left: f64,
    pub right: f64,
}

impl ClosedInterval {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !(left.is_finite() && right.is_finite()) || left > right {
            return Err(Error::InvalidInterval { left, right });
        }
        Ok(Self { left, right })
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }

    pub fn is_degenerate(&self) -> bool {
        self.left == self.right
    }

    pub fn contains(&self, x: f64) -> bool {
        self.left <= x && x <= self.right
    }

    pub fn contains_interval(&self, other: &ClosedInterval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

/// Parameters of a middle-ξ construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorParams {
    xi: f64,
    mode: ConstructionMode,
    depth: u32,
}

impl CantorParams {
    pub fn new(xi: f64, mode: ConstructionMode, depth: u32) -> Result<Self> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(Error::InvalidXi(xi));
        }
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge { depth, max: MAX_DEPTH });
        }
        let params = Self { xi, mode, depth };
        // Surface degenerate absolute-removal constructions at creation time.
        params.level_lengths()?;
        Ok(params)
    }

    pub fn proportional(xi: f64, depth: u32) -> Result<Self> {
        Self::new(xi, ConstructionMode::Proportional, depth)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn mode(&self) -> ConstructionMode {
        self.mode
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn with_depth(&self, depth: u32) -> Result<Self> {
        Self::new(self.xi, self.mode, depth)
    }

    /// Length ratio `(1 - ξ)/2` of a child interval to its parent (proportional mode).
    pub fn ratio(&self) -> f64 {
        0.5 * (1.0 - self.xi)
    }

    /// Common interval length at each level `0..=depth`.
    pub fn level_lengths(&self) -> Result<Vec<f64>> {
        level_lengths(self.xi, self.mode, self.depth)
    }

    /// Width of the intervals at the deepest level.
    pub fn resolution(&self) -> f64 {
        *self
            .level_lengths()
            .expect("validated on construction")
            .last()
            .expect("level 0 always present")
    }

    pub fn interval_count(&self) -> u64 {
        1u64 << self.depth
    }

    /// Lazily enumerate the depth-k intervals from left to right.
    pub fn intervals(&self) -> IntervalIter {
        let lengths = self.level_lengths().expect("validated on construction");
        IntervalIter::new(&lengths)
    }
}

pub(crate) fn level_lengths(xi: f64, mode: ConstructionMode, depth: u32) -> Result<Vec<f64>> {
    let mut lengths = Vec::with_capacity(depth as usize + 1);
    lengths.push(1.0);
    let mut removal = 1.0;
    for step in 1..=depth {
        let parent = lengths[step as usize - 1];
        let child = match mode {
            ConstructionMode::Proportional => parent * 0.5 * (1.0 - xi),
            ConstructionMode::AbsoluteRemoval => {
                removal *= xi;
                if removal >= parent {
                    return Err(Error::DegenerateConstruction {
                        step,
                        removal,
                        length: parent,
                    });
                }
                0.5 * (parent - removal)
            }
        };
        lengths.push(child);
    }
    Ok(lengths)
}

/// Iterator over the depth-k intervals of a construction, without storing them.
#[derive(Debug, Clone)]
pub struct IntervalIter {
    // offset of the right child relative to its parent, per step
    offsets: Vec<f64>,
    width: f64,
    next: u64,
    end: u64,
}

impl IntervalIter {
    fn new(lengths: &[f64]) -> Self {
        let offsets = lengths.windows(2).map(|w| w[0] - w[1]).collect::<Vec<_>>();
        let depth = offsets.len() as u32;
        Self {
            offsets,
            width: *lengths.last().unwrap(),
            next: 0,
            end: 1u64 << depth,
        }
    }

    fn interval_at(&self, index: u64) -> ClosedInterval {
        // right half by reflection, so the set is exactly symmetric and ends at 1
        if index >= self.end / 2 && self.end > 1 {
            let m = self.interval_at(self.end - 1 - index);
            return ClosedInterval {
                left: 1.0 - m.right,
                right: 1.0 - m.left,
            };
        }
        let depth = self.offsets.len();
        let mut left = 0.0;
        for (m, off) in self.offsets.iter().enumerate() {
            if (index >> (depth - 1 - m)) & 1 == 1 {
                left += off;
            }
        }
        ClosedInterval {
            left,
            right: left + self.width,
        }
    }
}

impl Iterator for IntervalIter {
    type Item = ClosedInterval;

    fn next(&mut self) -> Option<ClosedInterval> {
        if self.next >= self.end {
            return None;
        }
        let iv = self.interval_at(self.next);
        self.next += 1;
        Some(iv)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for IntervalIter {}

/// The depth-k approximation `C_k` of a middle-ξ Cantor set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreFractal {
    params: CantorParams,
    intervals: Vec<ClosedInterval>,
}

/// Build the sorted list of `2^k` closed intervals for `params`.
pub fn build_prefractal(params: CantorParams) -> Result<PreFractal> {
    if params.depth > MAX_MATERIALIZED_DEPTH {
        return Err(Error::DepthTooLarge {
            depth: params.depth,
            max: MAX_MATERIALIZED_DEPTH,
        });
    }
    let intervals = params.intervals().collect();
    Ok(PreFractal { params, intervals })
}

impl PreFractal {
    pub fn params(&self) -> &CantorParams {
        &self.params
    }

    pub fn depth(&self) -> u32 {
        self.params.depth
    }

    pub fn intervals(&self) -> &[ClosedInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// All interval endpoints in increasing order (`2^(k+1)` values).
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|iv| [iv.left, iv.right])
            .collect()
    }

    /// Index of the interval containing `x` (up to [`COORD_TOLERANCE`]), if any.
    pub fn locate(&self, x: f64) -> Option<usize> {
        let idx = self.intervals.partition_point(|iv| iv.right + COORD_TOLERANCE < x);
        (idx < self.intervals.len() && self.intervals[idx].left - COORD_TOLERANCE <= x)
            .then_some(idx)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.locate(x).is_some()
    }

    /// Indices of the intervals that meet the open interval `(a, b)` by more
    /// than [`COORD_TOLERANCE`].
    pub fn meeting_open(&self, a: f64, b: f64) -> Range<usize> {
        let start = self
            .intervals
            .partition_point(|iv| iv.right <= a + COORD_TOLERANCE);
        let end = self
            .intervals
            .partition_point(|iv| iv.left < b - COORD_TOLERANCE);
        start..end.max(start)
    }

    /// Indices of the intervals that a cell `J` is flagged against: the open
    /// interior for a proper interval, the point itself for a degenerate one.
    pub fn meeting(&self, j: &ClosedInterval) -> Range<usize> {
        if j.len() <= 2.0 * COORD_TOLERANCE {
            match self.locate(j.left) {
                Some(i) => i..i + 1,
                None => 0..0,
            }
        } else {
            self.meeting_open(j.left, j.right)
        }
    }

    /// Flag function: 1 if `J` meets the pre-fractal, 0 otherwise.
    ///
    /// A cell that only touches the set at one of its own endpoints is not
    /// flagged, so subdivisions aligned on construction endpoints give zero
    /// weight to gap cells.
    pub fn flag(&self, j: &ClosedInterval) -> u8 {
        u8::from(!self.meeting(j).is_empty())
    }

    pub fn lebesgue_measure(&self) -> f64 {
        self.intervals.iter().map(ClosedInterval::len).sum()
    }

    /// The `index`-th interval of the coarser level `depth <= self.depth()`.
    pub fn coarse_interval(&self, depth: u32, index: usize) -> ClosedInterval {
        let shift = self.depth() - depth;
        let first = index << shift;
        let last = ((index + 1) << shift) - 1;
        ClosedInterval {
            left: self.intervals[first].left,
            right: self.intervals[last].right,
        }
    }

    /// Write the interval lists of every level `0..=k` as CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "depth,index,left,right")?;
        for depth in 0..=self.depth() {
            for index in 0..(1usize << depth) {
                let iv = self.coarse_interval(depth, index);
                writeln!(
                    out,
                    "{depth},{index},{},{}",
                    fmt_real(iv.left),
                    fmt_real(iv.right)
                )?;
            }
        }
        Ok(())
    }
}

/// Hausdorff dimension `log 2 / (log 2 - log(1 - ξ))` of the middle-ξ set.
pub fn hausdorff_dimension(xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::InvalidXi(xi));
    }
    let ln2 = std::f64::consts::LN_2;
    Ok(ln2 / (ln2 - (-xi).ln_1p()))
}

/// Inverse of [`hausdorff_dimension`]: the ξ whose set has dimension `dim`.
pub fn xi_for_dimension(dim: f64) -> Result<f64> {
    if !(dim > 0.0 && dim < 1.0) {
        return Err(Error::Domain(format!(
            "dimension must lie in (0, 1) to name a middle-xi set, got {dim}"
        )));
    }
    // 1 - ξ = 2^(1 - 1/dim)
    let xi = -((1.0 - 1.0 / dim) * std::f64::consts::LN_2).exp_m1();
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!(
            "dimension {dim} is not representable by a middle-xi set in double precision"
        )));
    }
    Ok(xi)
}
