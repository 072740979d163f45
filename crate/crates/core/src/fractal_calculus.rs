//! C^ζ-differentiation and C^ζ-integration of functions supported on a
//! middle-ξ Cantor set.
//!
//! Two routes are provided and checked against each other:
//!
//! * the conjugacy route, where `f(x) = g(S(x))` on the set and the fractal
//!   derivative and integral reduce to ordinary calculus of `g` in the
//!   variable `u = S(x)`;
//! * the grid route, where `f` is sampled on the endpoints of a depth-k
//!   pre-fractal and integrated by upper/lower sums weighted by staircase
//!   increments `S(y_j) - S(y_{j-1})`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cantor_set::{ClosedInterval, PreFractal};
use crate::error::{Error, Result};
use crate::mass_staircase::{StaircaseEvaluator, Subdivision};
use crate::quad;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function on the set written as `f(x) = g(S(x))`.
#[derive(Clone)]
pub struct ConjugateFunction {
    outer: RealFn,
    derivative: Option<RealFn>,
    antiderivative: Option<RealFn>,
}

impl fmt::Debug for ConjugateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConjugateFunction")
            .field("analytic_derivative", &self.derivative.is_some())
            .field("analytic_antiderivative", &self.antiderivative.is_some())
            .finish()
    }
}

impl ConjugateFunction {
    pub fn new(g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            outer: Arc::new(g),
            derivative: None,
            antiderivative: None,
        }
    }

    pub fn with_derivative(mut self, dg: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(dg));
        self
    }

    pub fn with_antiderivative(mut self, big_g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.antiderivative = Some(Arc::new(big_g));
        self
    }

    /// `g(u) = u`, i.e. `f = S`.
    pub fn identity() -> Self {
        Self::new(|u| u)
            .with_derivative(|_| 1.0)
            .with_antiderivative(|u| 0.5 * u * u)
    }

    /// `a·f + b·h`, keeping analytic parts only when both operands have them.
    pub fn linear_combination(a: f64, f: &Self, b: f64, h: &Self) -> Self {
        fn combine(a: f64, p: &RealFn, b: f64, q: &RealFn) -> RealFn {
            let (p, q) = (p.clone(), q.clone());
            Arc::new(move |u| a * p(u) + b * q(u))
        }
        Self {
            outer: combine(a, &f.outer, b, &h.outer),
            derivative: match (&f.derivative, &h.derivative) {
                (Some(p), Some(q)) => Some(combine(a, p, b, q)),
                _ => None,
            },
            antiderivative: match (&f.antiderivative, &h.antiderivative) {
                (Some(p), Some(q)) => Some(combine(a, p, b, q)),
                _ => None,
            },
        }
    }

    pub fn outer(&self, u: f64) -> f64 {
        (self.outer)(u)
    }

    /// `g'(u)`, analytic when supplied, otherwise a central difference.
    pub fn outer_derivative(&self, u: f64) -> f64 {
        match &self.derivative {
            Some(dg) => dg(u),
            None => central_difference(&*self.outer, u),
        }
    }

    /// `∫_a^b g(u) du`, from the antiderivative when supplied.
    pub fn outer_integral(&self, a: f64, b: f64) -> Result<f64> {
        match &self.antiderivative {
            Some(big_g) => Ok(big_g(b) - big_g(a)),
            None => quad::integrate(|u| (self.outer)(u), a, b, 1e-12),
        }
    }

    /// Check a supplied analytic derivative against finite differences of `g`
    /// on `probes` evenly spaced points of `[lo, hi]`.
    pub fn check_derivative(&self, lo: f64, hi: f64, probes: usize) -> Result<()> {
        let Some(dg) = &self.derivative else {
            return Ok(());
        };
        for i in 0..probes.max(2) {
            let u = lo + (hi - lo) * i as f64 / (probes.max(2) - 1) as f64;
            let fd = central_difference(&*self.outer, u);
            let an = dg(u);
            if (fd - an).abs() > 1e-6 * an.abs().max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "analytic derivative {an} disagrees with finite difference {fd} at u = {u}"
                )));
            }
        }
        Ok(())
    }
}

fn central_difference(g: &(dyn Fn(f64) -> f64 + Send + Sync), u: f64) -> f64 {
    let h = 1e-5 * u.abs().max(1.0);
    (g(u + h) - g(u - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnvelopeKind {
    Sup,
    Inf,
}

/// Per-cell supremum or infimum of a grid function over the set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    pub values: Vec<f64>,
}

/// Lower and upper sums at the finest subdivision the sampling supports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarbouxSums {
    pub lower: f64,
    pub upper: f64,
    pub depth: u32,
}

impl DarbouxSums {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Depth ladder for sampled integration: the depth doubles from
/// `start_depth` (capped at `max_depth`) until the sums close to `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationLadder {
    pub start_depth: u32,
    pub max_depth: u32,
    pub tolerance: f64,
}

impl Default for IntegrationLadder {
    fn default() -> Self {
        Self {
            start_depth: 4,
            max_depth: 24,
            tolerance: 1e-3,
        }
    }
}

/// A function sampled on the `2^(k+1)` endpoints of a depth-k pre-fractal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    support: PreFractal,
    points: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(support: PreFractal, f: impl Fn(f64) -> f64) -> Result<Self> {
        let points = support.endpoints();
        let values = points.iter().map(|&x| f(x)).collect();
        Self::from_values(support, values)
    }

    pub fn from_values(support: PreFractal, values: Vec<f64>) -> Result<Self> {
        let points = support.endpoints();
        if values.len() != points.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} samples, got {}",
                points.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("grid values must be finite".into()));
        }
        Ok(Self {
            support,
            points,
            values,
        })
    }

    pub fn support(&self) -> &PreFractal {
        &self.support
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Difference quotient `(f(r) - f(l)) / (S(r) - S(l))` over the interval
    /// containing `x`; zero off the set.
    pub fn derivative(&self, ev: &StaircaseEvaluator, x: f64) -> Result<f64> {
        let Some(i) = self.support.locate(x) else {
            return Ok(0.0);
        };
        let iv = self.support.intervals()[i];
        let increment = ev.eval(iv.right) - ev.eval(iv.left);
        if increment < ev.tolerance() * ev.total_mass() {
            return Err(Error::UndefinedQuotient { x, increment });
        }
        Ok((self.values[2 * i + 1] - self.values[2 * i]) / increment)
    }

    /// Envelope of `f` on each cell of `q`: the extreme value at the endpoints
    /// of every depth-k interval the cell meets, 0 when it meets none.
    pub fn envelope(&self, q: &Subdivision, kind: EnvelopeKind) -> Envelope {
        let values = q
            .cells()
            .map(|cell| self.cell_extreme(&cell, kind))
            .collect();
        Envelope { kind, values }
    }

    fn cell_extreme(&self, cell: &ClosedInterval, kind: EnvelopeKind) -> f64 {
        let range = self.support.meeting(cell);
        if range.is_empty() {
            return 0.0;
        }
        let vals = self.values[2 * range.start..2 * range.end].iter().copied();
        match kind {
            EnvelopeKind::Sup => vals.fold(f64::NEG_INFINITY, f64::max),
            EnvelopeKind::Inf => vals.fold(f64::INFINITY, f64::min),
        }
    }

    fn weighted_sum(&self, q: &Subdivision, ev: &StaircaseEvaluator, kind: EnvelopeKind) -> f64 {
        let s: Vec<f64> = q.points().iter().map(|&y| ev.eval(y)).collect();
        self.envelope(q, kind)
            .values
            .iter()
            .zip(s.windows(2))
            .map(|(m, w)| m * (w[1] - w[0]))
            .sum()
    }

    pub fn upper_sum(&self, q: &Subdivision, ev: &StaircaseEvaluator) -> f64 {
        self.weighted_sum(q, ev, EnvelopeKind::Sup)
    }

    pub fn lower_sum(&self, q: &Subdivision, ev: &StaircaseEvaluator) -> f64 {
        self.weighted_sum(q, ev, EnvelopeKind::Inf)
    }

    /// Sums over `{v, w}` plus all endpoints in between. Further refinement
    /// cannot move either sum, so these are the lower and upper integrals.
    pub fn darboux(&self, v: f64, w: f64, ev: &StaircaseEvaluator) -> Result<DarbouxSums> {
        check_span(v, w)?;
        let q = Subdivision::aligned(&self.support, v, w)?;
        Ok(DarbouxSums {
            lower: self.lower_sum(&q, ev),
            upper: self.upper_sum(&q, ev),
            depth: self.support.depth(),
        })
    }

    /// Midpoint of the lower and upper integrals, or `NonIntegrable` when they
    /// differ by more than `tolerance`.
    pub fn integral(&self, v: f64, w: f64, ev: &StaircaseEvaluator, tolerance: f64) -> Result<f64> {
        let sums = self.darboux(v, w, ev)?;
        if sums.gap() > tolerance {
            return Err(Error::NonIntegrable {
                gap: sums.gap(),
                depth: sums.depth,
            });
        }
        Ok(sums.value())
    }
}

/// Upper C^ζ-sum of `f` over `q`.
pub fn upper_sum(f: &GridFunction, q: &Subdivision, ev: &StaircaseEvaluator) -> f64 {
    f.upper_sum(q, ev)
}

/// Lower C^ζ-sum of `f` over `q`.
pub fn lower_sum(f: &GridFunction, q: &Subdivision, ev: &StaircaseEvaluator) -> f64 {
    f.lower_sum(q, ev)
}

fn check_span(v: f64, w: f64) -> Result<()> {
    if v.is_finite() && w.is_finite() && v < w {
        Ok(())
    } else {
        Err(Error::InvalidInterval { left: v, right: w })
    }
}

/// A pre-fractal support together with the staircase that measures it.
#[derive(Debug, Clone)]
pub struct CantorCalculus {
    support: PreFractal,
    staircase: StaircaseEvaluator,
}

impl CantorCalculus {
    pub fn new(support: PreFractal, staircase: StaircaseEvaluator) -> Result<Self> {
        let (a, b) = (support.params(), staircase.params());
        if a.xi() != b.xi() || a.mode() != b.mode() {
            return Err(Error::InvalidConfig(
                "support and staircase describe different sets".into(),
            ));
        }
        Ok(Self { support, staircase })
    }

    pub fn support(&self) -> &PreFractal {
        &self.support
    }

    pub fn staircase(&self) -> &StaircaseEvaluator {
        &self.staircase
    }

    /// Characteristic function of the depth-k approximation.
    pub fn characteristic(&self, x: f64) -> f64 {
        if self.support.contains(x) {
            1.0
        } else {
            0.0
        }
    }

    /// `f(x) = g(S(x))`.
    pub fn value(&self, f: &ConjugateFunction, x: f64) -> f64 {
        f.outer(self.staircase.eval(x))
    }

    /// `D^ζ f(x) = g'(S(x)) χ(x)`.
    pub fn derivative(&self, f: &ConjugateFunction, x: f64) -> f64 {
        if self.support.contains(x) {
            f.outer_derivative(self.staircase.eval(x))
        } else {
            0.0
        }
    }

    /// `∫_v^w f d^ζx = ∫_{S(v)}^{S(w)} g(u) du`.
    pub fn integral(&self, f: &ConjugateFunction, v: f64, w: f64) -> Result<f64> {
        if !(v.is_finite() && w.is_finite() && v <= w) {
            return Err(Error::InvalidInterval { left: v, right: w });
        }
        f.outer_integral(self.staircase.eval(v), self.staircase.eval(w))
    }

    /// `|∫_v^w D^ζ f d^ζx - (f(w) - f(v))|`, with the integral of the
    /// derivative taken by quadrature in `u = S(x)` through `x = S⁻¹(u)`.
    pub fn ftc_residual(&self, f: &ConjugateFunction, v: f64, w: f64) -> Result<f64> {
        check_span(v, w)?;
        let ev = &self.staircase;
        let (a, b) = (ev.eval(v), ev.eval(w));
        let lhs = quad::integrate(|u| self.derivative(f, ev.inverse_extended(u)), a, b, 1e-11)?;
        Ok((lhs - (self.value(f, w) - self.value(f, v))).abs())
    }

    /// As [`ftc_residual`](Self::ftc_residual) but integrating the derivative
    /// by sampled upper/lower sums.
    pub fn ftc_residual_grid(
        &self,
        f: &ConjugateFunction,
        v: f64,
        w: f64,
        ladder: IntegrationLadder,
    ) -> Result<f64> {
        let sums = self.integrate_sampled(|x| self.derivative(f, x), v, w, ladder)?;
        Ok((sums.value() - (self.value(f, w) - self.value(f, v))).abs())
    }

    /// Sample `f` on the support's endpoints.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::from_fn(self.support.clone(), f)
    }

    /// Integrate a pointwise function by sampled upper/lower sums, doubling
    /// the sampling depth until the sums close.
    ///
    /// Intervals are generated on the fly, so the ladder can reach depths
    /// whose endpoint lists would not fit in memory. At every depth the sums
    /// equal those of [`GridFunction::darboux`] at that depth.
    pub fn integrate_sampled(
        &self,
        f: impl Fn(f64) -> f64,
        v: f64,
        w: f64,
        ladder: IntegrationLadder,
    ) -> Result<DarbouxSums> {
        check_span(v, w)?;
        if ladder.start_depth == 0 || ladder.start_depth > ladder.max_depth {
            return Err(Error::InvalidConfig(format!("bad integration ladder {ladder:?}")));
        }
        let ev = &self.staircase;
        let mut depth = ladder.start_depth;
        loop {
            let params = self.support.params().with_depth(depth)?;
            let (mut lower, mut upper) = (0.0, 0.0);
            for iv in params.intervals() {
                if iv.right <= v || iv.left >= w {
                    continue;
                }
                let weight = ev.eval(iv.right.min(w)) - ev.eval(iv.left.max(v));
                let (fl, fr) = (f(iv.left), f(iv.right));
                lower += fl.min(fr) * weight;
                upper += fl.max(fr) * weight;
            }
            let sums = DarbouxSums { lower, upper, depth };
            if sums.gap() < ladder.tolerance {
                return Ok(sums);
            }
            if depth >= ladder.max_depth {
                return Err(Error::NonIntegrable {
                    gap: sums.gap(),
                    depth,
                });
            }
            depth = (depth * 2).min(ladder.max_depth);
        }
    }
}

/// The two worked examples: a sine on the triadic set and a square on the
/// 5-adic-type set, written in conjugate form.
pub mod worked {
    use std::f64::consts::PI;

    use super::{CantorCalculus, ConjugateFunction};
    use crate::cantor_set::{build_prefractal, CantorParams};
    use crate::error::Result;
    use crate::mass_staircase::{gamma_one_plus, Normalization, StaircaseEvaluator, DEFAULT_TOLERANCE};

    /// Order used with the triadic set (its dimension to two digits).
    pub const SINE_ORDER: f64 = 0.63;
    /// Order used with the 5-adic-type set.
    pub const SQUARE_ORDER: f64 = 0.86;

    fn calculus(xi: f64, order: f64, normalization: Normalization, depth: u32) -> Result<CantorCalculus> {
        let params = CantorParams::proportional(xi, depth)?;
        let staircase =
            StaircaseEvaluator::with_options(params, Some(order), normalization, DEFAULT_TOLERANCE)?;
        CantorCalculus::new(build_prefractal(params)?, staircase)
    }

    /// `g(u) = sin(2π Γ(1 + ζ) u)`, a full period when `Γ(1 + ζ) S(1) = 1`.
    pub fn sine_function(zeta: f64) -> ConjugateFunction {
        let k = 2.0 * PI * gamma_one_plus(zeta);
        ConjugateFunction::new(move |u| (k * u).sin())
            .with_derivative(move |u| k * (k * u).cos())
            .with_antiderivative(move |u| -(k * u).cos() / k)
    }

    pub fn square_function() -> ConjugateFunction {
        ConjugateFunction::new(|u| u * u)
            .with_derivative(|u| 2.0 * u)
            .with_antiderivative(|u| u * u * u / 3.0)
    }

    /// Sine on the middle-third set with order 0.63.
    pub fn sine_example(normalization: Normalization, depth: u32) -> Result<(CantorCalculus, ConjugateFunction)> {
        Ok((
            calculus(1.0 / 3.0, SINE_ORDER, normalization, depth)?,
            sine_function(SINE_ORDER),
        ))
    }

    /// Square on the middle-fifth set with order 0.86.
    pub fn square_example(normalization: Normalization, depth: u32) -> Result<(CantorCalculus, ConjugateFunction)> {
        Ok((
            calculus(0.2, SQUARE_ORDER, normalization, depth)?,
            square_function(),
        ))
    }
}
