//! Double-exponential quadrature on (0, 1) and (0, ∞).
//!
//! The unit interval uses the tanh-sinh map written in logistic form,
//! `t = 1 / (1 + exp(−π sinh s))`, so both `t` and `1 − t` are available
//! without cancellation next to either endpoint. The half line uses the
//! exp-sinh map `x = exp(π/2 · sinh s)`.
//!
//! Levels follow the usual halving scheme: level 4 samples `s` on the
//! integers, and every further level adds the odd multiples of the halved
//! step, so the sum at level `L` reuses every evaluation made before it.
//! Node tables for all levels are built once and shared read-only.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::value::Approx;

/// Coarsest level: step 1 in the transformed variable.
pub const BASE_LEVEL: u32 = 4;
/// Finest level supported by the node tables.
pub const MAX_LEVEL: u32 = 16;
/// Levels below this never declare convergence.
const MIN_CONVERGED_LEVEL: u32 = 6;

/// Tolerance and budget contract for the integration engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Refinement cap; level `L` uses roughly `2^L` nodes.
    pub max_level: u32,
    /// Declared endpoint behaviour `t^α (1−t)^β`. Used to validate
    /// integrability and to skip nodes whose contribution is provably
    /// below double precision.
    pub singular_exponents: Option<(f64, f64)>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_level: 12,
            singular_exponents: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_singular_exponents(mut self, alpha: f64, beta: f64) -> Self {
        self.singular_exponents = Some((alpha, beta));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::domain(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if !(BASE_LEVEL..=MAX_LEVEL).contains(&self.max_level) {
            return Err(Error::domain(format!(
                "max_level must lie in [{BASE_LEVEL}, {MAX_LEVEL}], got {}",
                self.max_level
            )));
        }
        if let Some((a, b)) = self.singular_exponents {
            if !(a > -1.0 && b > -1.0) {
                return Err(Error::domain(format!(
                    "endpoint exponents ({a}, {b}) are not integrable"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn converged(&self, value: f64, diff: f64) -> bool {
        diff <= self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn endpoint_cutoffs(&self) -> (f64, f64) {
        match self.singular_exponents {
            Some((a, b)) => (cutoff(a), cutoff(b)),
            None => (0.0, 0.0),
        }
    }
}

/// Distance from an endpoint below which ∫ t^α contributes less than 1e-20.
fn cutoff(alpha: f64) -> f64 {
    let e = alpha + 1.0;
    (1e-20 * e).powf(1.0 / e).max(0.0)
}

/// Step of the transformed variable at a level.
pub(crate) fn step(level: u32) -> f64 {
    2f64.powi(BASE_LEVEL as i32 - level as i32)
}

/// A node of the unit rule: `t`, `1 − t`, and the Jacobian dt/ds.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UnitNode {
    pub t: f64,
    pub tc: f64,
    pub jac: f64,
}

/// A node of the half-line rule: `x` and dx/ds.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HalfLineNode {
    pub x: f64,
    pub jac: f64,
}

const UNIT_WINDOW: f64 = 6.1;
const HALF_LINE_WINDOW: f64 = 6.8;

fn level_abscissae(level: u32, window: f64) -> Vec<f64> {
    let h = step(level);
    let kmax = (window / h).floor() as i64;
    (-kmax..=kmax)
        .filter(|k| level == BASE_LEVEL || k.rem_euclid(2) == 1)
        .map(|k| k as f64 * h)
        .collect()
}

fn unit_tables() -> &'static [Vec<UnitNode>] {
    static TABLES: OnceLock<Vec<Vec<UnitNode>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        (0..=MAX_LEVEL)
            .map(|level| {
                if level < BASE_LEVEL {
                    return Vec::new();
                }
                level_abscissae(level, UNIT_WINDOW)
                    .into_iter()
                    .filter_map(|s| {
                        let u = PI * s.sinh();
                        let t = 1.0 / (1.0 + (-u).exp());
                        let tc = 1.0 / (1.0 + u.exp());
                        let jac = PI * s.cosh() * t * tc;
                        (t > 0.0 && tc > 0.0 && jac > 0.0 && jac.is_finite()).then_some(UnitNode {
                            t,
                            tc,
                            jac,
                        })
                    })
                    .collect()
            })
            .collect()
    })
}

fn half_line_tables() -> &'static [Vec<HalfLineNode>] {
    static TABLES: OnceLock<Vec<Vec<HalfLineNode>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        (0..=MAX_LEVEL)
            .map(|level| {
                if level < BASE_LEVEL {
                    return Vec::new();
                }
                level_abscissae(level, HALF_LINE_WINDOW)
                    .into_iter()
                    .filter_map(|s| {
                        let x = (FRAC_PI_2 * s.sinh()).exp();
                        let jac = FRAC_PI_2 * s.cosh() * x;
                        (x > 0.0 && x.is_finite() && jac > 0.0 && jac.is_finite())
                            .then_some(HalfLineNode { x, jac })
                    })
                    .collect()
            })
            .collect()
    })
}

/// Nodes first introduced at `level` for the unit rule.
pub(crate) fn unit_level_nodes(level: u32) -> &'static [UnitNode] {
    &unit_tables()[level as usize]
}

/// Treats non-finite samples as zero next to an endpoint, errors elsewhere.
fn sanitize(v: f64, near_endpoint: bool, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else if near_endpoint {
        Ok(0.0)
    } else {
        Err(Error::NonFinite(format!("integrand returned {v} at {at}")))
    }
}

fn unit_level_sum<F>(f: &F, level: u32, cut: (f64, f64), evals: &mut u64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut sum = 0.0;
    for n in unit_level_nodes(level) {
        if n.t < cut.0 || n.tc < cut.1 {
            continue;
        }
        *evals += 1;
        let v = sanitize(f(n.t, n.tc)?, n.t < 1e-6 || n.tc < 1e-6, n.t)?;
        sum += v * n.jac;
    }
    Ok(sum)
}

fn half_line_level_sum<F>(f: &F, level: u32, cut: f64, evals: &mut u64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut sum = 0.0;
    for n in &half_line_tables()[level as usize] {
        if n.x < cut {
            continue;
        }
        *evals += 1;
        let v = sanitize(f(n.x)?, n.x < 1e-6 || n.x > 1e6, n.x)?;
        sum += v * n.jac;
    }
    Ok(sum)
}

/// Parallel variant: samples are computed concurrently but summed in node
/// order, so the result is bit-identical to the sequential sum.
fn half_line_level_sum_par<F>(f: &F, level: u32, cut: f64, evals: &mut u64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let values = half_line_tables()[level as usize]
        .par_iter()
        .filter(|n| n.x >= cut)
        .map(|n| Ok(sanitize(f(n.x)?, n.x < 1e-6 || n.x > 1e6, n.x)? * n.jac))
        .collect::<Result<Vec<f64>>>()?;
    *evals += values.len() as u64;
    let mut sum = 0.0;
    for v in values {
        sum += v;
    }
    Ok(sum)
}

/// Drives level refinement until two consecutive levels agree.
fn refine<S>(spec: &QuadratureSpec, mut level_sum: S, what: &str) -> Result<Approx>
where
    S: FnMut(u32, &mut u64) -> Result<f64>,
{
    spec.validate()?;
    let mut evals = 0u64;
    let mut acc = 0.0;
    let mut prev = f64::NAN;
    for level in BASE_LEVEL..=spec.max_level {
        acc += level_sum(level, &mut evals)?;
        let estimate = acc * step(level);
        let diff = (estimate - prev).abs();
        if level >= MIN_CONVERGED_LEVEL.min(spec.max_level)
            && level > BASE_LEVEL
            && spec.converged(estimate, diff)
        {
            return Approx::new(estimate, diff, evals);
        }
        prev = estimate;
        if level == spec.max_level {
            return Err(Error::non_convergent(format!(
                "{what}: no agreement by level {level} (estimate {estimate:e}, last change {diff:e})"
            )));
        }
    }
    unreachable!("loop always returns at max_level")
}

/// ∫₀¹ f. The integrand receives `(t, 1 − t)`, both accurate near the endpoints.
pub fn try_integrate_unit<F>(f: F, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let cut = spec.endpoint_cutoffs();
    refine(
        spec,
        |level, evals| unit_level_sum(&f, level, cut, evals),
        "unit-interval quadrature",
    )
}

/// ∫₀¹ f for an infallible integrand.
pub fn integrate_unit<F>(f: F, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64, f64) -> f64,
{
    try_integrate_unit(|t, tc| Ok(f(t, tc)), spec)
}

/// ∫₀^∞ f.
pub fn try_integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> Result<f64>,
{
    let cut = spec.endpoint_cutoffs().0;
    refine(
        spec,
        |level, evals| half_line_level_sum(&f, level, cut, evals),
        "half-line quadrature",
    )
}

/// ∫₀^∞ f with the samples of each level evaluated on the rayon pool.
/// Meant for integrands that are themselves expensive (nested quadrature,
/// series with quadrature-built coefficients).
pub fn try_integrate_semi_infinite_par<F>(f: F, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let cut = spec.endpoint_cutoffs().0;
    refine(
        spec,
        |level, evals| half_line_level_sum_par(&f, level, cut, evals),
        "half-line quadrature",
    )
}

/// ∫₀^∞ f for an infallible integrand.
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), spec)
}

/// ∫ₐᵇ f on a finite interval through the unit rule.
pub fn try_integrate_interval<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
    }
    let len = b - a;
    let r = try_integrate_unit(
        |t, tc| {
            let x = if t <= 0.5 { a + len * t } else { b - len * tc };
            Ok(f(x)? * len)
        },
        spec,
    )?;
    Ok(r)
}

/// Unit-interval estimates at every level from the base up to `spec.max_level`,
/// without early termination.
pub fn unit_level_estimates<F>(f: F, spec: &QuadratureSpec) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> f64,
{
    spec.validate()?;
    let cut = spec.endpoint_cutoffs();
    let g = |t: f64, tc: f64| Ok(f(t, tc));
    let mut evals = 0;
    let mut acc = 0.0;
    let mut out = Vec::new();
    for level in BASE_LEVEL..=spec.max_level {
        acc += unit_level_sum(&g, level, cut, &mut evals)?;
        out.push(acc * step(level));
    }
    Ok(out)
}
