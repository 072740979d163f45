use serde::{Deserialize, Serialize};

use crate::cantor_set::{build_prefractal, CantorParams, ClosedInterval, PreFractal};
use crate::error::{Error, Result};

use super::gamma_one_plus;

/// Ordered points `v = y_0 < y_1 < ... < y_n = w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subdivision {
    points: Vec<f64>,
}

impl Subdivision {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSubdivision("needs at least two points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidSubdivision("points must be finite".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubdivision("points must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    /// `n` equal cells on `[v, w]`.
    pub fn uniform(v: f64, w: f64, n: usize) -> Result<Self> {
        if n == 0 || v.is_nan() || w.is_nan() || v >= w {
            return Err(Error::InvalidSubdivision(format!("cannot split [{v}, {w}] into {n} cells")));
        }
        let step = (w - v) / n as f64;
        let mut points: Vec<f64> = (0..n).map(|i| v + step * i as f64).collect();
        points.push(w);
        Self::new(points)
    }

    /// `{v, w}` plus every pre-fractal endpoint strictly between them.
    pub fn aligned(set: &PreFractal, v: f64, w: f64) -> Result<Self> {
        let mut points = vec![v];
        points.extend(set.endpoints().into_iter().filter(|&p| p > v && p < w));
        points.push(w);
        points.dedup();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Largest cell width `|Q|`.
    pub fn mesh(&self) -> f64 {
        self.cells().map(|c| c.len()).fold(0.0, f64::max)
    }

    pub fn cells(&self) -> impl Iterator<Item = ClosedInterval> + '_ {
        self.points.windows(2).map(|w| ClosedInterval {
            left: w[0],
            right: w[1],
        })
    }

    /// Insert extra points (ignoring ones already present or outside the span).
    pub fn refine(&self, extra: &[f64]) -> Self {
        let (a, b) = (self.start(), self.end());
        let mut points = self.points.clone();
        points.extend(extra.iter().copied().filter(|p| p.is_finite() && *p > a && *p < b));
        points.sort_by(f64::total_cmp);
        points.dedup();
        Self { points }
    }
}

pub(crate) fn check_order(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder { name: "zeta", value: zeta })
    }
}

/// `Σ (y_i - y_{i-1})^ζ / Γ(ζ + 1) · flag([y_{i-1}, y_i])`.
pub fn rho_sum(set: &PreFractal, q: &Subdivision, zeta: f64) -> Result<f64> {
    check_order(zeta)?;
    let norm = gamma_one_plus(zeta);
    Ok(q
        .cells()
        .filter(|c| set.flag(c) == 1)
        .map(|c| c.len().powf(zeta))
        .sum::<f64>()
        / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassTrend {
    Converged,
    GrowingUnbounded,
    VanishingToZero,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEstimate {
    pub zeta: f64,
    /// Mesh bound of the last subdivision family used.
    pub delta: f64,
    /// Estimated mass; for a trend this is the extrapolated limit
    /// (0 when vanishing, +∞ when growing).
    pub value: f64,
    /// Last finite coarse-grained value.
    pub last_estimate: f64,
    pub depth_used: u32,
    pub trend: Option<MassTrend>,
    /// Geometric-mean ratio of successive coarse sums, when a schedule was run.
    pub ratio: Option<f64>,
}

/// Sum over the aligned family at `depth`: one cell per depth-`depth`
/// interval meeting `(v, w)`, clipped to `[v, w]`. Gap cells (refined to any
/// mesh) have interiors outside the set and contribute nothing.
fn aligned_sum(set: &PreFractal, depth: u32, v: f64, w: f64, zeta: f64) -> f64 {
    let count = 1usize << depth;
    let coarse = |i: usize| set.coarse_interval(depth, i);
    let start = partition(count, |i| coarse(i).right <= v);
    let end = partition(count, |i| coarse(i).left < w).max(start);
    let mut sum = 0.0;
    for i in start..end {
        let iv = coarse(i);
        let len = iv.right.min(w) - iv.left.max(v);
        if len > 0.0 {
            sum += len.powf(zeta);
        }
    }
    sum / gamma_one_plus(zeta)
}

fn partition(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

fn check_span(v: f64, w: f64) -> Result<()> {
    if v.is_finite() && w.is_finite() && v < w {
        Ok(())
    } else {
        Err(Error::InvalidInterval { left: v, right: w })
    }
}

/// Coarse-grained mass `γ_δ^ζ(C, v, w)`.
///
/// Minimises the ρ-sum over the aligned subdivisions of every level whose
/// interval width is at most `delta`, down to the depth of `set`. The result
/// is an upper bound on the infimum over all subdivisions of mesh `≤ delta`.
pub fn coarse_mass(set: &PreFractal, v: f64, w: f64, zeta: f64, delta: f64) -> Result<MassEstimate> {
    check_order(zeta)?;
    check_span(v, w)?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Domain(format!("mesh bound must be positive, got {delta}")));
    }
    let lengths = set.params().level_lengths()?;
    let resolution = *lengths.last().unwrap();
    if delta < resolution {
        return Err(Error::ResolutionTooCoarse { delta, resolution });
    }
    let first = lengths.iter().position(|&l| l <= delta).unwrap() as u32;
    let (depth_used, value) = (first..=set.depth())
        .map(|d| (d, aligned_sum(set, d, v, w, zeta)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    Ok(MassEstimate {
        zeta,
        delta,
        value,
        last_estimate: value,
        depth_used,
        trend: None,
        ratio: None,
    })
}

/// Depth/δ schedule for [`mass`]: `count` consecutive depths starting at `first_depth`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSchedule {
    pub first_depth: u32,
    pub count: u32,
    /// Half-width of the band around ratio 1 classified as converged.
    pub ratio_tolerance: f64,
}

impl Default for MassSchedule {
    fn default() -> Self {
        Self {
            first_depth: 8,
            count: 5,
            ratio_tolerance: 1e-3,
        }
    }
}

/// Mass function `γ^ζ(C, v, w) = lim_{δ→0} γ_δ^ζ`, with trend classification.
pub fn mass(params: CantorParams, v: f64, w: f64, zeta: f64) -> Result<MassEstimate> {
    mass_with_schedule(params, v, w, zeta, MassSchedule::default())
}

pub fn mass_with_schedule(
    params: CantorParams,
    v: f64,
    w: f64,
    zeta: f64,
    schedule: MassSchedule,
) -> Result<MassEstimate> {
    check_order(zeta)?;
    check_span(v, w)?;
    if schedule.count < 2 {
        return Err(Error::InvalidConfig("mass schedule needs at least two depths".into()));
    }
    let deepest = schedule.first_depth + schedule.count - 1;
    let set = build_prefractal(params.with_depth(deepest)?)?;
    let lengths = set.params().level_lengths()?;
    let sums: Vec<f64> = (schedule.first_depth..=deepest)
        .map(|d| aligned_sum(&set, d, v, w, zeta))
        .collect();
    let last = *sums.last().unwrap();
    let base = MassEstimate {
        zeta,
        delta: lengths[deepest as usize],
        value: last,
        last_estimate: last,
        depth_used: deepest,
        trend: None,
        ratio: None,
    };

    if sums.iter().all(|&s| s == 0.0) || last == 0.0 {
        return Ok(MassEstimate {
            value: 0.0,
            trend: Some(MassTrend::VanishingToZero),
            ..base
        });
    }
    let ratios: Vec<f64> = sums.windows(2).map(|p| p[1] / p[0]).collect();
    let tol = schedule.ratio_tolerance;
    let geometric = (last / sums[0]).powf(1.0 / ratios.len() as f64);
    let oscillating = ratios.iter().any(|&r| r > 1.0 + tol) && ratios.iter().any(|&r| r < 1.0 - tol);
    let trend = if oscillating {
        MassTrend::Inconclusive
    } else if geometric > 1.0 + tol {
        MassTrend::GrowingUnbounded
    } else if geometric < 1.0 - tol {
        MassTrend::VanishingToZero
    } else {
        MassTrend::Converged
    };
    let value = match trend {
        MassTrend::GrowingUnbounded => f64::INFINITY,
        MassTrend::VanishingToZero => 0.0,
        _ => last,
    };
    Ok(MassEstimate {
        value,
        trend: Some(trend),
        ratio: Some(geometric),
        ..base
    })
}

/// ς-dimension of `C ∩ [v, w]`: the order at which the mass function drops
/// from infinite to zero, located by bisection on ζ to `1e-3`.
pub fn varsigma_dimension(params: CantorParams, v: f64, w: f64) -> Result<f64> {
    varsigma_dimension_with(params, v, w, MassSchedule::default(), 1e-3)
}

pub fn varsigma_dimension_with(
    params: CantorParams,
    v: f64,
    w: f64,
    schedule: MassSchedule,
    tolerance: f64,
) -> Result<f64> {
    let trend_at = |zeta: f64| -> Result<(MassTrend, f64)> {
        let est = mass_with_schedule(params, v, w, zeta, schedule)?;
        let trend = est.trend.unwrap_or(MassTrend::Inconclusive);
        Ok((trend, est.ratio.unwrap_or(0.0)))
    };
    let (mut lo, mut hi) = (1e-3, 1.0);
    match trend_at(lo)?.0 {
        MassTrend::GrowingUnbounded => {}
        MassTrend::VanishingToZero => {
            return Err(Error::Domain(format!(
                "[{v}, {w}] does not meet the set; its mass vanishes at every order"
            )))
        }
        _ => return Err(Error::InconclusiveTrend { zeta: lo }),
    }
    match trend_at(hi)?.0 {
        MassTrend::VanishingToZero => {}
        MassTrend::Converged => return Ok(hi),
        _ => return Err(Error::InconclusiveTrend { zeta: hi }),
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        match trend_at(mid)? {
            (MassTrend::GrowingUnbounded, _) => lo = mid,
            (MassTrend::VanishingToZero, _) => hi = mid,
            (MassTrend::Converged, _) => return Ok(mid),
            // oscillating ratios: decide on the end-to-end growth
            (MassTrend::Inconclusive, ratio) if ratio > 1.0 => lo = mid,
            (MassTrend::Inconclusive, _) => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}
