//! Diffusion on middle-ξ Cantor sets: Gaussian propagators in the staircase
//! coordinate `u = S(x)`, mean-squared-displacement laws, the regime
//! classifier and a Monte Carlo walk that checks the scaling exponents.
//!
//! The three regimes share one kernel
//!
//! ```text
//! W(x, t) = (4π c τ(t))^(-1/2) exp(-S_ζ(x)² / (4 c τ(t)))
//! ```
//!
//! and differ only in the clock: `τ = t` (super), `τ = S_ζ(t)` (normal) or
//! `τ = S_β(t)` (sub). A staircase of order `s` lives on the middle-ξ set of
//! dimension `s`; order 1 is the identity map.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::cantor_set::{xi_for_dimension, CantorParams};
use crate::error::{Error, Result};
use crate::mass_staircase::{Normalization, StaircaseEvaluator, DEFAULT_TOLERANCE};
use crate::quad;
use crate::report::Discrepancy;

/// Orders closer than this are treated as equal by [`classify`].
pub const ORDER_TOLERANCE: f64 = 1e-12;

/// Half-width of the quadrature window in units of the kernel's standard
/// deviation in `u`.
const WINDOW_SIGMAS: f64 = 12.0;

/// Quadrature panels across the window.
const PANELS: usize = 24;

/// Cells of the midpoint rule used for `<x²>`.
const MIDPOINT_CELLS: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffusionRegime {
    Super,
    Normal,
    Sub,
}

impl DiffusionRegime {
    pub fn name(self) -> &'static str {
        match self {
            Self::Super => "super",
            Self::Normal => "normal",
            Self::Sub => "sub",
        }
    }
}

fn check_order(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder { name, value })
    }
}

/// Regime implied by the space order `zeta` and time order `beta`.
pub fn classify(zeta: f64, beta: f64) -> Result<DiffusionRegime> {
    check_order("zeta", zeta)?;
    check_order("beta", beta)?;
    Ok(if (zeta - beta).abs() <= ORDER_TOLERANCE {
        DiffusionRegime::Normal
    } else if zeta < beta {
        DiffusionRegime::Super
    } else {
        DiffusionRegime::Sub
    })
}

/// `S_s` on the middle-ξ set of dimension `s`, or the identity when `s = 1`.
#[derive(Debug, Clone)]
pub enum FractalMap {
    Identity,
    Cantor(StaircaseEvaluator),
}

impl FractalMap {
    pub fn of_order(order: f64) -> Result<Self> {
        check_order("order", order)?;
        if order == 1.0 {
            return Ok(Self::Identity);
        }
        let params = CantorParams::proportional(xi_for_dimension(order)?, 0)?;
        Ok(Self::Cantor(StaircaseEvaluator::with_options(
            params,
            Some(order),
            Normalization::InverseGamma,
            DEFAULT_TOLERANCE,
        )?))
    }

    /// Map on the whole line.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Identity => x,
            Self::Cantor(ev) => ev.eval_extended(x),
        }
    }

    /// Generalised inverse on the whole line.
    pub fn inverse(&self, u: f64) -> f64 {
        match self {
            Self::Identity => u,
            Self::Cantor(ev) => ev.inverse_extended(u),
        }
    }

    /// Value at 1.
    pub fn total(&self) -> f64 {
        match self {
            Self::Identity => 1.0,
            Self::Cantor(ev) => ev.total_mass(),
        }
    }

    /// Contraction ratio `a` with `S(a x) = S(x) / 2`; 1/2 for the identity.
    pub fn ratio(&self) -> f64 {
        match self {
            Self::Identity => 0.5,
            Self::Cantor(ev) => ev.params().ratio(),
        }
    }
}

/// Regime, orders and coefficient (`K`, `G` or `L`) of a diffusion problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionParams {
    regime: DiffusionRegime,
    zeta: f64,
    beta: f64,
    coefficient: f64,
}

impl DiffusionParams {
    /// `beta` is used only by the sub regime: super runs on physical time
    /// and normal forces `beta = zeta`.
    pub fn new(regime: DiffusionRegime, zeta: f64, beta: f64, coefficient: f64) -> Result<Self> {
        check_order("zeta", zeta)?;
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(Error::Domain(format!(
                "diffusion coefficient must be positive, got {coefficient}"
            )));
        }
        let beta = match regime {
            DiffusionRegime::Super => 1.0,
            DiffusionRegime::Normal => zeta,
            DiffusionRegime::Sub => {
                check_order("beta", beta)?;
                beta
            }
        };
        Ok(Self {
            regime,
            zeta,
            beta,
            coefficient,
        })
    }

    pub fn super_diffusion(zeta: f64, k: f64) -> Result<Self> {
        Self::new(DiffusionRegime::Super, zeta, 1.0, k)
    }

    pub fn normal(zeta: f64, g: f64) -> Result<Self> {
        Self::new(DiffusionRegime::Normal, zeta, zeta, g)
    }

    pub fn sub(zeta: f64, beta: f64, l: f64) -> Result<Self> {
        Self::new(DiffusionRegime::Sub, zeta, beta, l)
    }

    pub fn regime(&self) -> DiffusionRegime {
        self.regime
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Order of the clock: 1 for super, `zeta` for normal, `beta` for sub.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// Exponent of the bound law `<x²> ∝ t^(β/ζ)`.
    pub fn bound_exponent(&self) -> f64 {
        self.beta / self.zeta
    }

    /// Regime implied by the orders, which may differ from the equation form
    /// chosen (a sub-form problem with `beta > zeta` spreads super-diffusively).
    pub fn classify(&self) -> DiffusionRegime {
        classify(self.zeta, self.beta).expect("orders validated at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorSample {
    pub x: f64,
    pub t: f64,
    pub w: f64,
}

/// Propagator with its spatial and temporal staircases built once.
#[derive(Debug, Clone)]
pub struct DiffusionModel {
    params: DiffusionParams,
    space: FractalMap,
    clock: FractalMap,
}

impl DiffusionModel {
    pub fn new(params: DiffusionParams) -> Result<Self> {
        Ok(Self {
            params,
            space: FractalMap::of_order(params.zeta)?,
            clock: FractalMap::of_order(params.beta)?,
        })
    }

    pub fn params(&self) -> &DiffusionParams {
        &self.params
    }

    pub fn space(&self) -> &FractalMap {
        &self.space
    }

    pub fn clock_map(&self) -> &FractalMap {
        &self.clock
    }

    /// `τ(t)`.
    pub fn clock(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.clock.eval(t))
    }

    /// Variance of the kernel in `u`: `2 c τ(t)`.
    pub fn variance(&self, t: f64) -> Result<f64> {
        Ok(2.0 * self.params.coefficient * self.clock(t)?)
    }

    /// Kernel as a function of `u = S(x)`.
    pub fn kernel(&self, u: f64, t: f64) -> Result<f64> {
        Ok(gauss(u, self.variance(t)?))
    }

    /// `W(x, t)`.
    pub fn propagator(&self, x: f64, t: f64) -> Result<f64> {
        self.kernel(self.space.eval(x), t)
    }

    pub fn sample(&self, x: f64, t: f64) -> Result<PropagatorSample> {
        Ok(PropagatorSample {
            x,
            t,
            w: self.propagator(x, t)?,
        })
    }

    /// The power-law surrogate with `S(x) → |x|^ζ` and `τ(t) → t^β`.
    pub fn propagator_bound(&self, x: f64, t: f64) -> Result<f64> {
        check_time(t)?;
        let s = 4.0 * self.params.coefficient * t.powf(self.params.beta);
        Ok((-x.abs().powf(2.0 * self.params.zeta) / s).exp() / (PI * s).sqrt())
    }

    fn window(&self, t: f64) -> Result<f64> {
        Ok(WINDOW_SIGMAS * self.variance(t)?.sqrt())
    }

    /// `∫ W dS` over the line, integrated in `u` through `x = S⁻¹(u)`.
    pub fn normalization(&self, t: f64) -> Result<f64> {
        let var = self.variance(t)?;
        let h = self.window(t)?;
        let f = |u: f64| gauss(self.space.eval(self.space.inverse(u)), var);
        quad::integrate_panels(f, -h, h, PANELS, 1e-10)
    }

    /// Second moments `<S(x)²>` and `<x²>` of the propagator at time `t`,
    /// beside the stated closed form `4 c τ(t)` and bound `4 c t^(β/ζ)`.
    ///
    /// `<x²>` is taken as `∫ 2x P(|X| > x) dx` because `x = S⁻¹(u)` jumps
    /// across every gap while the tail probability is continuous in `x`.
    pub fn msd(&self, t: f64) -> Result<MsdReport> {
        let tau = self.clock(t)?;
        let var = self.variance(t)?;
        let h = self.window(t)?;
        let c = self.params.coefficient;
        let msd_s = quad::integrate_panels(
            |u| {
                let s = self.space.eval(self.space.inverse(u));
                s * s * gauss(u, var)
            },
            -h,
            h,
            PANELS,
            1e-10 * var,
        )?;
        let sigma = var.sqrt();
        let x_max = self.space.inverse(h);
        let msd_x = quad::midpoint(
            |x| 2.0 * x * erfc(self.space.eval(x) / (sigma * std::f64::consts::SQRT_2)),
            0.0,
            x_max,
            MIDPOINT_CELLS,
        );
        let stated = 4.0 * c * tau;
        let mut discrepancies = Vec::new();
        if (msd_s - stated).abs() > 1e-6 * stated {
            discrepancies.push(Discrepancy::new(
                "msd_prefactor_mismatch",
                "the stated law <S(x)^2> = 4 c tau differs from the second moment of the Gaussian kernel, which is 2 c tau",
                stated,
                msd_s,
            ));
        }
        Ok(MsdReport {
            t,
            clock: tau,
            msd_s,
            msd_x,
            stated_msd_s: stated,
            msd_x_bound: 4.0 * c * t.powf(self.params.bound_exponent()),
            discrepancies,
        })
    }

    /// `|∫ W(u - v, t₁) W(v, t₂) dv - W(u, t₁ + t₂)|` in the `u` coordinate.
    pub fn semigroup_defect(&self, u: f64, t1: f64, t2: f64) -> Result<f64> {
        let (v1, v2) = (self.variance(t1)?, self.variance(t2)?);
        let h = self.window(t1)? + self.window(t2)? + u.abs();
        let conv = quad::integrate_panels(|v| gauss(u - v, v1) * gauss(v, v2), -h, h, PANELS, 1e-12)?;
        Ok((conv - self.kernel(u, t1 + t2)?).abs())
    }
}

/// Centred normal density with variance `var`.
fn gauss(u: f64, var: f64) -> f64 {
    (-u * u / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be positive, got {t}")))
    }
}

/// Convenience wrapper building a [`DiffusionModel`] for one evaluation.
pub fn propagator(params: DiffusionParams, x: f64, t: f64) -> Result<f64> {
    DiffusionModel::new(params)?.propagator(x, t)
}

pub fn msd(params: DiffusionParams, t: f64) -> Result<MsdReport> {
    DiffusionModel::new(params)?.msd(t)
}

pub fn normalization_check(params: DiffusionParams, t: f64) -> Result<f64> {
    DiffusionModel::new(params)?.normalization(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsdReport {
    pub t: f64,
    pub clock: f64,
    /// `<S(x)²>` by quadrature.
    pub msd_s: f64,
    /// `<x²>` by quadrature.
    pub msd_x: f64,
    /// `4 c τ(t)`.
    pub stated_msd_s: f64,
    /// `4 c t^(β/ζ)`.
    pub msd_x_bound: f64,
    pub discrepancies: Vec<Discrepancy>,
}

/// Monte Carlo settings. Sample times default to a log-uniform grid that
/// covers `periods` whole log-periods of the walk's discrete scale
/// invariance, ending where the spread in `u` reaches `spread` times `S(1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub walkers: usize,
    pub seed: u64,
    /// Time grid step; defaults to 1/16 of the first sample time.
    pub dt: Option<f64>,
    /// Explicit sample times; overrides the automatic schedule.
    pub times: Option<Vec<f64>>,
    pub periods: u32,
    pub samples_per_period: u32,
    pub spread: f64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            walkers: 10_000,
            seed: 0,
            dt: None,
            times: None,
            periods: 4,
            samples_per_period: 8,
            spread: 0.05,
        }
    }
}

const WALK_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsdSeries {
    pub times: Vec<f64>,
    pub clock: Vec<f64>,
    /// `<S(x)²>` across walkers.
    pub msd_s: Vec<f64>,
    /// `<x²>` across walkers.
    pub msd_x: Vec<f64>,
    /// Least-squares slope of `log <x²>` against `log t`; `None` when fewer
    /// than three positive samples are available.
    pub fitted_exponent: Option<f64>,
    /// 95% half-width of the slope.
    pub half_width: Option<f64>,
    pub expected_exponent: f64,
    pub walkers: usize,
    pub dt: f64,
    pub steps: u64,
}

impl DiffusionModel {
    /// Ratio `r` such that scaling time by `r` scales the spread in `u` by 2.
    pub fn log_period(&self) -> f64 {
        match self.clock {
            FractalMap::Identity => 4.0,
            FractalMap::Cantor(_) => self.clock.ratio().powi(-2),
        }
    }

    /// Default log-uniform sample times.
    pub fn walk_times(&self, config: &WalkConfig) -> Result<Vec<f64>> {
        if config.periods == 0 || config.samples_per_period == 0 {
            return Err(Error::InvalidConfig("periods and samples_per_period must be positive".into()));
        }
        if !(config.spread > 0.0 && config.spread < 1.0) {
            return Err(Error::InvalidConfig(format!("spread must lie in (0, 1), got {}", config.spread)));
        }
        let sigma = config.spread * self.space.total();
        let tau_max = sigma * sigma / (2.0 * self.params.coefficient);
        let t_max = match &self.clock {
            FractalMap::Identity => tau_max,
            FractalMap::Cantor(ev) if tau_max < ev.total_mass() => ev.inverse(tau_max)?,
            FractalMap::Cantor(_) => 1.0,
        };
        let n = config.periods * config.samples_per_period;
        let step = self.log_period().ln() / config.samples_per_period as f64;
        Ok((0..n)
            .map(|j| t_max * (-(step * (n - j) as f64)).exp())
            .collect())
    }

    /// Simulate independent walkers in `u` and map them back to `x`.
    pub fn simulate_walk(&self, config: &WalkConfig) -> Result<MsdSeries> {
        if config.walkers == 0 {
            return Err(Error::InvalidConfig("at least one walker is required".into()));
        }
        let raw = match &config.times {
            Some(t) => t.clone(),
            None => self.walk_times(config)?,
        };
        if raw.is_empty() || raw.windows(2).any(|w| w[0] >= w[1]) || raw[0] <= 0.0 {
            return Err(Error::InvalidConfig(
                "sample times must be positive and strictly increasing".into(),
            ));
        }
        let dt = config.dt.unwrap_or(raw[0] / 16.0);
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
        }
        if raw[0] < dt {
            return Err(Error::InvalidConfig(format!(
                "first sample time {} is below the time step {dt}",
                raw[0]
            )));
        }
        let mut ticks: Vec<u64> = raw.iter().map(|t| (t / dt).round() as u64).collect();
        ticks.dedup();
        let times: Vec<f64> = ticks.iter().map(|&n| n as f64 * dt).collect();
        let clock: Vec<f64> = times
            .iter()
            .map(|&t| self.clock(t))
            .collect::<Result<_>>()?;
        let scales: Vec<f64> = std::iter::once(clock[0])
            .chain(clock.windows(2).map(|w| w[1] - w[0]))
            .map(|d| (2.0 * self.params.coefficient * d.max(0.0)).sqrt())
            .collect();

        let chunks: Vec<(Vec<f64>, Vec<f64>)> = (0..config.walkers.div_ceil(WALK_CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut su = vec![0.0; times.len()];
                let mut sx = vec![0.0; times.len()];
                let end = ((c + 1) * WALK_CHUNK).min(config.walkers);
                for walker in c * WALK_CHUNK..end {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream(walker as u64);
                    let mut u = 0.0;
                    for (j, s) in scales.iter().enumerate() {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        u += s * z;
                        let x = self.space.inverse(u);
                        let su_j = self.space.eval(x);
                        su[j] += su_j * su_j;
                        sx[j] += x * x;
                    }
                }
                (su, sx)
            })
            .collect();
        let mut msd_s = vec![0.0; times.len()];
        let mut msd_x = vec![0.0; times.len()];
        for (su, sx) in &chunks {
            for j in 0..times.len() {
                msd_s[j] += su[j];
                msd_x[j] += sx[j];
            }
        }
        let n = config.walkers as f64;
        msd_s.iter_mut().for_each(|v| *v /= n);
        msd_x.iter_mut().for_each(|v| *v /= n);

        let (fitted_exponent, half_width) = match fit_power_law(&times, &msd_x) {
            Some((slope, hw)) => (Some(slope), Some(hw)),
            None => (None, None),
        };
        Ok(MsdSeries {
            steps: *ticks.last().unwrap(),
            times,
            clock,
            msd_s,
            msd_x,
            fitted_exponent,
            half_width,
            expected_exponent: self.params.bound_exponent(),
            walkers: config.walkers,
            dt,
        })
    }
}

pub fn simulate_walk(config: &WalkConfig, params: DiffusionParams) -> Result<MsdSeries> {
    DiffusionModel::new(params)?.simulate_walk(config)
}

/// Least-squares slope of `log y` on `log x` with a 95% half-width.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    let se = (rss / (nf - 2.0) / sxx).sqrt();
    Some((slope, 1.96 * se))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA3: f64 = 0.630_929_753_571_457_4;

    #[test]
    fn classifier_examples() {
        assert_eq!(classify(0.86, 0.9).unwrap(), DiffusionRegime::Super);
        assert_eq!(classify(0.86, 0.86).unwrap(), DiffusionRegime::Normal);
        assert_eq!(classify(0.86, 0.6).unwrap(), DiffusionRegime::Sub);
        assert!(classify(0.0, 0.5).is_err());
        assert!(classify(0.5, 1.5).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(DiffusionParams::super_diffusion(ZETA3, 0.0).is_err());
        assert!(DiffusionParams::sub(0.86, 0.0, 1.0).is_err());
        let p = DiffusionParams::normal(0.86, 2.0).unwrap();
        assert_eq!(p.beta(), 0.86);
        assert_eq!(p.bound_exponent(), 1.0);
        assert_eq!(DiffusionParams::super_diffusion(0.5, 1.0).unwrap().bound_exponent(), 2.0);
    }

    #[test]
    fn super_propagator_values() {
        let m = DiffusionModel::new(DiffusionParams::super_diffusion(ZETA3, 1.0).unwrap()).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let w = m.propagator(0.0, t).unwrap();
            assert!((w - t.powf(-0.5) / (4.0 * PI).sqrt()).abs() < 1e-14);
        }
        // x with S(x) = 1
        let x = m.space().inverse(1.0);
        let w = m.propagator(x, 1.0).unwrap();
        assert!((w - 0.219_695_644_733_861_2).abs() < 1e-9);
        assert!(m.propagator(0.3, 0.0).is_err());
    }

    #[test]
    fn propagator_symmetric_and_positive() {
        let m = DiffusionModel::new(DiffusionParams::sub(0.86, 0.6, 1.5).unwrap()).unwrap();
        for x in [0.01, 0.2, 0.77, 1.3, 2.9] {
            let a = m.propagator(x, 0.4).unwrap();
            let b = m.propagator(-x, 0.4).unwrap();
            assert!(a > 0.0);
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn sub_with_equal_orders_is_normal() {
        let a = DiffusionModel::new(DiffusionParams::sub(0.86, 0.86, 2.0).unwrap()).unwrap();
        let b = DiffusionModel::new(DiffusionParams::normal(0.86, 2.0).unwrap()).unwrap();
        for (x, t) in [(0.1, 0.2), (0.5, 1.0), (-1.7, 3.5)] {
            assert_eq!(a.propagator(x, t).unwrap(), b.propagator(x, t).unwrap());
        }
    }

    #[test]
    fn identity_maps_give_heat_kernel() {
        let m = DiffusionModel::new(DiffusionParams::normal(1.0, 0.7).unwrap()).unwrap();
        for (x, t) in [(0.0f64, 1.0f64), (0.3, 0.2), (-2.0, 4.0)] {
            let heat = (-x * x / (4.0 * 0.7 * t)).exp() / (4.0 * PI * 0.7 * t).sqrt();
            assert!((m.propagator(x, t).unwrap() - heat).abs() < 1e-9);
        }
    }

    #[test]
    fn normalization_and_msd() {
        let m = DiffusionModel::new(DiffusionParams::super_diffusion(ZETA3, 1.0).unwrap()).unwrap();
        assert!((m.normalization(1.0).unwrap() - 1.0).abs() < 1e-6);
        let r = m.msd(1.0).unwrap();
        assert!((r.msd_s - 2.0).abs() < 1e-6);
        assert_eq!(r.stated_msd_s, 4.0);
        assert_eq!(r.discrepancies[0].code, "msd_prefactor_mismatch");
        // identity space map: <x²> = <u²>
        let id = DiffusionModel::new(DiffusionParams::normal(1.0, 1.0).unwrap()).unwrap();
        assert!((id.msd(0.7).unwrap().msd_x - 1.4).abs() < 1e-6);
    }

    #[test]
    fn bound_laws() {
        let n = DiffusionModel::new(DiffusionParams::normal(0.86, 1.0).unwrap()).unwrap();
        let base = n.msd(1.0).unwrap().msd_x_bound;
        for t in [2.0, 4.0, 8.0] {
            assert!((n.msd(t).unwrap().msd_x_bound / t - base).abs() < 1e-12);
        }
        let s = DiffusionModel::new(DiffusionParams::sub(0.8, 0.4, 1.0).unwrap()).unwrap();
        let ratio = s.msd(0.8).unwrap().msd_x_bound / s.msd(0.2).unwrap().msd_x_bound;
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn semigroup() {
        let m = DiffusionModel::new(DiffusionParams::super_diffusion(ZETA3, 1.0).unwrap()).unwrap();
        for u in [0.0, 0.4, -1.1] {
            assert!(m.semigroup_defect(u, 0.3, 0.5).unwrap() < 1e-4);
        }
    }

    #[test]
    fn fit_recovers_power() {
        let x: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(1.7)).collect();
        let (s, hw) = fit_power_law(&x, &y).unwrap();
        assert!((s - 1.7).abs() < 1e-12);
        assert!(hw < 1e-9);
        assert!(fit_power_law(&x[..2], &y[..2]).is_none());
    }

    #[test]
    fn walk_times_span_whole_periods() {
        let m = DiffusionModel::new(DiffusionParams::super_diffusion(ZETA3, 1.0).unwrap()).unwrap();
        let cfg = WalkConfig::default();
        let t = m.walk_times(&cfg).unwrap();
        assert_eq!(t.len(), 32);
        let span = t.last().unwrap() / t[0];
        assert!((span - 4f64.powf(4.0 - 1.0 / 8.0)).abs() < 1e-9 * span);
    }

    #[test]
    fn walk_rejects_unresolved_times() {
        let m = DiffusionModel::new(DiffusionParams::super_diffusion(ZETA3, 1.0).unwrap()).unwrap();
        let cfg = WalkConfig {
            walkers: 10,
            dt: Some(0.1),
            times: Some(vec![0.05, 0.2]),
            ..WalkConfig::default()
        };
        assert!(matches!(m.simulate_walk(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn single_walker_is_finite_and_deterministic() {
        let p = DiffusionParams::super_diffusion(ZETA3, 1.0).unwrap();
        let cfg = WalkConfig {
            walkers: 1,
            seed: 7,
            ..WalkConfig::default()
        };
        let a = simulate_walk(&cfg, p).unwrap();
        let b = simulate_walk(&cfg, p).unwrap();
        assert!(a.msd_x.iter().all(|v| v.is_finite()));
        assert_eq!(a, b);
    }
}
