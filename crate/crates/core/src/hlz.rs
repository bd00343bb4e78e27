//! Extended Hurwitz-Lerch zeta function
//!
//! Φ_{γ,ϑ;υ}(z, σ, a; p, λ) = Σ (γ)_n · B(ϑ+n, υ−ϑ; p, λ)/B(ϑ, υ−ϑ) · zⁿ / (n! (n+a)^σ)
//!
//! with its classical ancestors, the named special cases, three integral
//! representations and the n-th derivative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended_beta::{ebeta_chaudhry, BetaRatioTable};
use crate::extended_hypergeometric::{
    check_unit_disc, ehyp2f1_table, terminating_index, PowerSeries,
};
use crate::mittag_leffler::ml_eval;
use crate::quadrature::{
    try_integrate_interval, try_integrate_semi_infinite, try_integrate_semi_infinite_par,
    QuadratureSpec,
};
use crate::series::{SeriesOptions, Summation};
use crate::special_core::{beta_classical, ln_gamma_pos, log_beta, log_gamma, pochhammer, rgamma};
use crate::value::Approx;

/// Smallest accepted Hurwitz shift `a`.
pub const MIN_A: f64 = 1e-8;
/// Term cap for sums on the unit circle (z = 1).
pub const BOUNDARY_MAX_TERMS: usize = 10_000_000;
/// σ + υ − γ − ϑ must exceed this for a usable tail bound at z = 1.
pub const BOUNDARY_MIN_EXCESS: f64 = 1.1;
/// Largest |z| accepted by the entire limit series before its terms overflow.
const LIMIT_STAR_MAX_ABS_Z: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlzParams {
    pub gamma: f64,
    pub theta: f64,
    pub upsilon: f64,
    pub a: f64,
    pub sigma: f64,
    pub p: f64,
    pub lambda: f64,
}

impl HlzParams {
    pub fn new(
        gamma: f64,
        theta: f64,
        upsilon: f64,
        a: f64,
        sigma: f64,
        p: f64,
        lambda: f64,
    ) -> Result<Self> {
        let params = Self {
            gamma,
            theta,
            upsilon,
            a,
            sigma,
            p,
            lambda,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.echo() {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.theta > 0.0) {
            return Err(Error::domain(format!(
                "theta must be > 0, got {}",
                self.theta
            )));
        }
        if !(self.upsilon > self.theta) {
            return Err(Error::domain(format!(
                "upsilon must exceed theta, got upsilon={}, theta={}",
                self.upsilon, self.theta
            )));
        }
        if !(self.a >= MIN_A) {
            return Err(Error::domain(format!(
                "a must be >= {MIN_A:e}, got {}",
                self.a
            )));
        }
        if !(self.p >= 0.0) {
            return Err(Error::domain(format!("p must be >= 0, got {}", self.p)));
        }
        if !(self.lambda > 0.0 && self.lambda < 2.0) {
            return Err(Error::UnsupportedParameter(format!(
                "lambda must lie in (0, 2), got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Parameter names and values in a fixed order.
    pub fn echo(&self) -> [(&'static str, f64); 7] {
        [
            ("gamma", self.gamma),
            ("theta", self.theta),
            ("upsilon", self.upsilon),
            ("a", self.a),
            ("sigma", self.sigma),
            ("p", self.p),
            ("lambda", self.lambda),
        ]
    }

    /// σ + υ − γ − ϑ, which must exceed 1 for convergence at |z| = 1.
    pub fn boundary_excess(&self) -> f64 {
        self.sigma + self.upsilon - self.gamma - self.theta
    }

    fn ratio_table(&self, spec: &QuadratureSpec) -> Result<BetaRatioTable> {
        BetaRatioTable::new(
            self.theta,
            self.upsilon - self.theta,
            self.p,
            self.lambda,
            spec,
        )
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a >= MIN_A && a.is_finite()) {
        return Err(Error::domain(format!("a must be >= {MIN_A:e}, got {a}")));
    }
    Ok(())
}

/// Φ summed against an existing beta-ratio table, so that families of
/// evaluations sharing (ϑ, υ, p, λ) pay for the kernel quadrature once.
pub(crate) fn sum_with_table(
    table: &mut BetaRatioTable,
    gamma: f64,
    sigma: f64,
    a: f64,
    z: f64,
    opts: &SeriesOptions,
) -> Result<Approx> {
    opts.validate()?;
    let last = terminating_index(gamma);
    let mut sum = Summation::new(*opts);
    let mut beta_err = 0.0;
    let mut q = 1.0f64; // (γ)_n zⁿ / n!
    let mut n = 0usize;
    loop {
        if last.is_some_and(|m| n > m) {
            break;
        }
        if sum.exhausted() {
            return Err(Error::non_convergent(format!(
                "Hurwitz-Lerch series at z={z} not settled after {} terms",
                sum.terms()
            )));
        }
        let r = table.ratio(n)?;
        let c = q * (n as f64 + a).powf(-sigma);
        beta_err += c.abs() * r.err_est;
        if sum.add(c * r.value) {
            break;
        }
        q *= (gamma + n as f64) * z / (n as f64 + 1.0);
        n += 1;
    }
    let err = sum.tail_estimate(0.99) + beta_err + sum.rounding();
    Approx::new(sum.value(), err, sum.terms() as u64 + table.work())
}

/// Φ_{γ,ϑ;υ}(z, σ, a; p, λ) for |z| < 1.
pub fn hlz_series(
    params: &HlzParams,
    z: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    params.validate()?;
    check_unit_disc(z)?;
    let mut table = params.ratio_table(spec)?;
    sum_with_table(&mut table, params.gamma, params.sigma, params.a, z, opts)
}

/// Φ at z = 1: partial sum plus an integral-comparison tail bound in `err_est`.
pub fn hlz_boundary(
    params: &HlzParams,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    hlz_check(params, 1.0)?;
    opts.validate()?;
    let s = params.boundary_excess();
    if params.p > 0.0 {
        let mut table = params.ratio_table(spec)?;
        return sum_with_table(&mut table, params.gamma, params.sigma, params.a, 1.0, opts);
    }
    let HlzParams {
        gamma,
        theta,
        upsilon,
        a,
        sigma,
        ..
    } = *params;
    // tₙ = (γ)ₙ(ϑ)ₙ / ((υ)ₙ n!) · (n+a)^{−σ} ~ C n^{−s}
    let unbounded = opts.rel_tol.min(1e-300);
    let mut sum = Summation::new(SeriesOptions {
        rel_tol: unbounded,
        consecutive_small: u32::MAX,
        max_terms: usize::MAX,
    });
    let asymptotic_from = (4.0 * (gamma.abs() + theta + upsilon + sigma.abs() + a) + 10.0) as usize;
    let mut t = a.powf(-sigma);
    for n in 0..BOUNDARY_MAX_TERMS {
        sum.add(t);
        let k = n as f64;
        let next = t * (gamma + k) * (theta + k) / ((upsilon + k) * (k + 1.0))
            * (-sigma * (1.0 / (k + a)).ln_1p()).exp();
        if next == 0.0 {
            return Approx::new(sum.value(), sum.rounding(), n as u64 + 1);
        }
        if n >= asymptotic_from {
            let bound = next.abs() * (k + 1.0 + a) / (s - 1.0);
            if bound <= opts.rel_tol * sum.value().abs() {
                sum.add(next);
                return Approx::new(sum.value(), bound + sum.rounding(), n as u64 + 2);
            }
        }
        t = next;
    }
    Err(Error::non_convergent(format!(
        "series at z = 1 needs more than {BOUNDARY_MAX_TERMS} terms for rel_tol {}",
        opts.rel_tol
    )))
}

/// Validates parameters and argument without evaluating: |z| < 1, or z = 1
/// with enough excess σ + υ − γ − ϑ for the boundary evaluator.
pub fn hlz_check(params: &HlzParams, z: f64) -> Result<()> {
    params.validate()?;
    if z != 1.0 {
        return check_unit_disc(z);
    }
    let s = params.boundary_excess();
    if s <= 1.0 {
        return Err(Error::divergent(format!(
            "at z = 1 need σ + υ − γ − ϑ > 1, got {s}"
        )));
    }
    if s <= BOUNDARY_MIN_EXCESS {
        return Err(Error::domain(format!(
            "at z = 1 σ + υ − γ − ϑ = {s} is too close to 1 for a usable tail bound (need > {BOUNDARY_MIN_EXCESS})"
        )));
    }
    Ok(())
}

/// Φ at any admissible z: the boundary evaluator at z = 1, the series otherwise.
pub fn hlz_eval(
    params: &HlzParams,
    z: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    if z == 1.0 {
        hlz_boundary(params, opts, spec)
    } else {
        hlz_series(params, z, opts, spec)
    }
}

/// Σ qₙ zⁿ (n+a)^{−σ} with q₀ = 1 and q_{n+1} = qₙ·ratio(n).
fn classical_series<R>(
    z: f64,
    sigma: f64,
    a: f64,
    last: Option<usize>,
    opts: &SeriesOptions,
    ratio: R,
) -> Result<Approx>
where
    R: Fn(f64) -> f64,
{
    check_a(a)?;
    check_unit_disc(z)?;
    opts.validate()?;
    let mut sum = Summation::new(*opts);
    let mut q = 1.0;
    let mut n = 0usize;
    loop {
        if last.is_some_and(|m| n > m) {
            break;
        }
        if sum.exhausted() {
            return Err(Error::non_convergent(format!(
                "series at z={z} not settled after {} terms",
                sum.terms()
            )));
        }
        if sum.add(q * (n as f64 + a).powf(-sigma)) {
            break;
        }
        q *= ratio(n as f64) * z;
        n += 1;
    }
    Approx::new(
        sum.value(),
        sum.tail_estimate(0.99) + sum.rounding(),
        sum.terms() as u64,
    )
}

/// Bernoulli numbers B₂, B₄, …, B₂₄.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Hurwitz zeta ζ(s, a) for s > 1 by Euler–Maclaurin summation.
fn hurwitz_zeta(s: f64, a: f64) -> Result<Approx> {
    let n_direct = 12 + s.abs().ceil() as usize;
    let mut sum = Summation::new(SeriesOptions {
        rel_tol: 1e-300,
        consecutive_small: u32::MAX,
        max_terms: usize::MAX,
    });
    for k in 0..n_direct {
        sum.add((k as f64 + a).powf(-s));
    }
    let x = n_direct as f64 + a;
    let xs = x.powf(-s);
    sum.add(xs * x / (s - 1.0));
    sum.add(0.5 * xs);
    // B_{2j}/(2j)! · s(s+1)…(s+2j−2) · x^{−s−2j+1}
    let mut rise = s; // s(s+1)…(s+2j−2)
    let mut fact = 2.0; // (2j)!
    let mut pow = xs / x;
    let mut last = 0.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rise * pow;
        last = term.abs();
        sum.add(term);
        if last <= 1e-17 * sum.value().abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        rise *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        pow /= x * x;
    }
    Approx::new(sum.value(), last + sum.rounding(), n_direct as u64 + 14)
}

/// Classical Hurwitz-Lerch zeta Φ(z, σ, a) = Σ zⁿ/(n+a)^σ, including z = 1 for σ > 1.
pub fn hlz_classical(z: f64, sigma: f64, a: f64, opts: &SeriesOptions) -> Result<Approx> {
    check_a(a)?;
    if z == 1.0 {
        if !(sigma > 1.0) {
            return Err(Error::divergent(format!(
                "at z = 1 need σ > 1, got {sigma}"
            )));
        }
        return hurwitz_zeta(sigma, a);
    }
    classical_series(z, sigma, a, None, opts, |_| 1.0)
}

/// Goyal–Laddha Φ*_υ(z, σ, a) = Σ (υ)ₙ/n! · zⁿ/(n+a)^σ.
pub fn hlz_goyal_laddha_classical(
    upsilon: f64,
    z: f64,
    sigma: f64,
    a: f64,
    opts: &SeriesOptions,
) -> Result<Approx> {
    classical_series(z, sigma, a, terminating_index(upsilon), opts, |k| {
        (upsilon + k) / (k + 1.0)
    })
}

/// Garg-type Φ_{γ,ϑ;υ}(z, σ, a) = Σ (γ)ₙ(ϑ)ₙ/((υ)ₙ n!) · zⁿ/(n+a)^σ, the p = 0 function
/// summed directly from Pochhammer ratios.
pub fn hlz_garg_classical(
    gamma: f64,
    theta: f64,
    upsilon: f64,
    z: f64,
    sigma: f64,
    a: f64,
    opts: &SeriesOptions,
) -> Result<Approx> {
    if !(upsilon > 0.0) {
        return Err(Error::domain(format!("upsilon must be > 0, got {upsilon}")));
    }
    let last = match (terminating_index(gamma), terminating_index(theta)) {
        (Some(g), Some(t)) => Some(g.min(t)),
        (g, t) => g.or(t),
    };
    classical_series(z, sigma, a, last, opts, |k| {
        (gamma + k) * (theta + k) / ((upsilon + k) * (k + 1.0))
    })
}

/// Parmar's exponential-kernel function, each beta value from its own
/// Chaudhry quadrature. Independent of the shared moment table; λ is ignored.
pub fn hlz_parmar(
    params: &HlzParams,
    z: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    params.validate()?;
    check_unit_disc(z)?;
    opts.validate()?;
    let HlzParams {
        gamma,
        theta,
        upsilon,
        a,
        sigma,
        p,
        ..
    } = *params;
    let b0 = beta_classical(theta, upsilon - theta)?;
    let last = terminating_index(gamma);
    let mut sum = Summation::new(*opts);
    let mut beta_err = 0.0;
    let mut work = 0;
    let mut q = 1.0f64;
    let mut n = 0usize;
    loop {
        if last.is_some_and(|m| n > m) {
            break;
        }
        if sum.exhausted() {
            return Err(Error::non_convergent("Parmar series not settled"));
        }
        let b = ebeta_chaudhry(theta + n as f64, upsilon - theta, p, spec)?;
        work += b.work;
        let c = q * (n as f64 + a).powf(-sigma) / b0;
        beta_err += c.abs() * b.err_est;
        if sum.add(c * b.value) {
            break;
        }
        q *= (gamma + n as f64) * z / (n as f64 + 1.0);
        n += 1;
    }
    Approx::new(
        sum.value(),
        sum.tail_estimate(0.99) + beta_err + sum.rounding(),
        work,
    )
}

/// The γ = 1 case: Σ B(ϑ+n, υ−ϑ; p, λ)/B(ϑ, υ−ϑ) · zⁿ/(n+a)^σ.
pub fn hlz_case_lin_srivastava(
    params: &HlzParams,
    z: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    if params.gamma != 1.0 {
        return Err(Error::domain(format!(
            "this case fixes gamma = 1, got {}",
            params.gamma
        )));
    }
    hlz_series(params, z, opts, spec)
}

/// The γ = υ = 1 case: Σ B(ϑ+n, 1−ϑ; p, λ)/B(ϑ, 1−ϑ) · zⁿ/(n+a)^σ, 0 < ϑ < 1.
#[allow(clippy::too_many_arguments)]
pub fn hlz_case_goyal_laddha_ext(
    theta: f64,
    a: f64,
    sigma: f64,
    p: f64,
    lambda: f64,
    z: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::domain(format!(
            "theta must lie in (0, 1), got {theta}"
        )));
    }
    hlz_series(
        &HlzParams::new(1.0, theta, 1.0, a, sigma, p, lambda)?,
        z,
        opts,
        spec,
    )
}

/// Validated parameters for the γ-free limit function (γ is irrelevant and set to 1).
fn limit_params(
    theta: f64,
    upsilon: f64,
    a: f64,
    sigma: f64,
    p: f64,
    lambda: f64,
) -> Result<HlzParams> {
    HlzParams::new(1.0, theta, upsilon, a, sigma, p, lambda)
}

/// The entire limit function Φ*_{ϑ;υ}(z, σ, a; p, λ) = Σ B(ϑ+n, υ−ϑ; p, λ)/B(ϑ, υ−ϑ) · zⁿ/(n! (n+a)^σ).
#[allow(clippy::too_many_arguments)]
pub fn hlz_limit_star(
    theta: f64,
    upsilon: f64,
    a: f64,
    sigma: f64,
    p: f64,
    lambda: f64,
    z: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    let params = limit_params(theta, upsilon, a, sigma, p, lambda)?;
    opts.validate()?;
    if z.is_nan() {
        return Err(Error::domain("z is NaN"));
    }
    if z.abs() > LIMIT_STAR_MAX_ABS_Z {
        return Err(Error::Overflow(format!(
            "|z| = {} exceeds {LIMIT_STAR_MAX_ABS_Z}",
            z.abs()
        )));
    }
    let mut table = params.ratio_table(spec)?;
    let mut sum = Summation::new(*opts);
    let mut beta_err = 0.0;
    let mut q = 1.0f64; // zⁿ/n!
    let mut n = 0usize;
    loop {
        if sum.exhausted() {
            return Err(Error::non_convergent(format!(
                "limit series at z={z} not settled after {} terms",
                sum.terms()
            )));
        }
        let r = table.ratio(n)?;
        let c = q * (n as f64 + a).powf(-sigma);
        beta_err += c.abs() * r.err_est;
        // the stop rule only counts once the terms have started to shrink
        if sum.add(c * r.value) && n as f64 > z.abs() {
            break;
        }
        q *= z / (n as f64 + 1.0);
        n += 1;
    }
    Approx::new(
        sum.value(),
        sum.tail_estimate(0.5) + beta_err + sum.rounding(),
        sum.terms() as u64 + table.work(),
    )
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) {
        return Err(Error::domain(format!(
            "{name} must be > 0 for this representation, got {v}"
        )));
    }
    Ok(())
}

/// (1/Γ(σ)) ∫₀^∞ t^{σ−1} e^{−at} F_p^λ(γ, ϑ; υ; z e^{−t}) dt.
pub fn hlz_integral_rep(
    params: &HlzParams,
    z: f64,
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
) -> Result<Approx> {
    params.validate()?;
    require_positive("sigma", params.sigma)?;
    check_unit_disc(z)?;
    let HlzParams {
        gamma, a, sigma, ..
    } = *params;
    let mut table = params.ratio_table(spec)?;
    let f = ehyp2f1_table(gamma, &mut table, z.abs(), opts)?;
    let integral = try_integrate_semi_infinite(
        |t| Ok(((sigma - 1.0) * t.ln() - a * t).exp() * f.eval(z * (-t).exp()).0),
        spec,
    )?;
    let g = rgamma(sigma);
    // ∫ t^{σ−1}e^{−at} · (series error) ≤ Γ(σ) a^{−σ} · err(|z|)
    let series_err = f.eval(z.abs()).1 * a.powf(-sigma);
    Approx::new(
        g * integral.value,
        g * integral.err_est + series_err + 4.0 * f64::EPSILON * (g * integral.value).abs(),
        integral.work + f.work,
    )
}

/// Which inner function the double-integral representation integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleIntegralForm {
    /// Inner Goyal–Laddha series Φ*_γ(zx/(1+x), σ, a), one outer quadrature.
    InnerSeries,
    /// Inner t-integral (1/Γ(σ)) ∫ t^{σ−1} e^{−at} (1 − zx e^{−t}/(1+x))^{−γ} dt, nested quadrature.
    Nested,
}

/// (1/B(ϑ, υ−ϑ)) ∫₀^∞ x^{ϑ−1}(1+x)^{−υ} E_λ(−p(2 + x + 1/x)) · inner(zx/(1+x)) dx.
pub fn hlz_double_integral_rep(
    params: &HlzParams,
    z: f64,
    form: DoubleIntegralForm,
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
) -> Result<Approx> {
    params.validate()?;
    require_positive("sigma", params.sigma)?;
    check_unit_disc(z)?;
    let HlzParams {
        gamma,
        theta,
        upsilon,
        a,
        sigma,
        p,
        lambda,
    } = *params;
    let weight = move |x: f64| -> Result<f64> {
        let k = if p == 0.0 {
            1.0
        } else {
            ml_eval(lambda, -p * (2.0 + x + 1.0 / x))?.value
        };
        if k == 0.0 {
            return Ok(0.0);
        }
        Ok(k * ((theta - 1.0) * x.ln() - upsilon * x.ln_1p()).exp())
    };
    let inv_b = (-log_beta(theta, upsilon - theta)?).exp();
    let (integral, extra_err, extra_work) = match form {
        DoubleIntegralForm::InnerSeries => {
            let last = terminating_index(gamma);
            let mut q = 1.0f64; // (γ)ₙ/n!
            let inner = PowerSeries::build(z.abs(), opts, |n| {
                if last.is_some_and(|m| n > m) {
                    return Ok(None);
                }
                if n > 0 {
                    q *= (gamma + n as f64 - 1.0) / n as f64;
                }
                let c = q * (n as f64 + a).powf(-sigma);
                Ok(Some(Approx {
                    value: c,
                    err_est: 0.0,
                    work: 0,
                }))
            })?;
            let integral = try_integrate_semi_infinite(
                |x| {
                    let w = weight(x)?;
                    if w == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(w * inner.eval(z * (x / (1.0 + x))).0)
                },
                spec,
            )?;
            // the weight integrates to B(ϑ, υ−ϑ; p, λ) ≤ B(ϑ, υ−ϑ) for λ ≤ 1
            let err = inner.eval(z.abs()).1;
            (integral, err, inner.work)
        }
        DoubleIntegralForm::Nested => {
            let inner_spec = QuadratureSpec {
                rel_tol: spec.rel_tol.min(1e-12),
                abs_tol: 1e-300,
                ..*spec
            };
            let g = rgamma(sigma);
            let integral = try_integrate_semi_infinite_par(
                |x| {
                    let w = weight(x)?;
                    if w == 0.0 {
                        return Ok(0.0);
                    }
                    let zx = z * (x / (1.0 + x));
                    let inner = try_integrate_semi_infinite(
                        |t| {
                            Ok(((sigma - 1.0) * t.ln()
                                - a * t
                                - gamma * (-zx * (-t).exp()).ln_1p())
                            .exp())
                        },
                        &inner_spec,
                    )?;
                    Ok(w * g * inner.value)
                },
                spec,
            )?;
            (integral, 0.0, 0)
        }
    };
    let value = inv_b * integral.value;
    Approx::new(
        value,
        inv_b * integral.err_est + extra_err + 4.0 * f64::EPSILON * value.abs(),
        integral.work + extra_work,
    )
}

/// Entire series Σ cₙ wⁿ for the limit function, stored as (ln|cₙ|, sign cₙ)
/// because cₙ ∝ 1/n! leaves the double range long before the sum converges.
struct LimitStarSeries {
    log_coeffs: Vec<(f64, f64)>,
}

impl LimitStarSeries {
    fn build(table: &mut BetaRatioTable, sigma: f64, a: f64, radius: f64) -> Result<Self> {
        let ln_r = radius.ln();
        let mut log_coeffs = Vec::new();
        let mut peak = f64::NEG_INFINITY;
        let mut small = 0;
        for n in 0usize.. {
            let r = table.ratio(n)?;
            let (lc, sign) = if r.value == 0.0 {
                (f64::NEG_INFINITY, 0.0)
            } else {
                (
                    r.value.abs().ln() - ln_gamma_pos(n as f64 + 1.0) - sigma * (n as f64 + a).ln(),
                    r.value.signum(),
                )
            };
            log_coeffs.push((lc, sign));
            let mag = lc + n as f64 * ln_r;
            peak = peak.max(mag);
            if n as f64 > radius && mag < peak - 40.0 {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Ok(Self { log_coeffs })
    }

    fn eval(&self, w: f64) -> f64 {
        if w == 0.0 {
            let (lc, s) = self.log_coeffs[0];
            return s * lc.exp();
        }
        let ln_w = w.abs().ln();
        let neg = w < 0.0;
        let mut sum = 0.0;
        for (n, &(lc, s)) in self.log_coeffs.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            let term = s * (lc + n as f64 * ln_w).exp();
            sum += if neg && n % 2 == 1 { -term } else { term };
        }
        sum
    }
}

/// (1/Γ(γ)) ∫₀^∞ t^{γ−1} e^{−t} Φ*_{ϑ;υ}(zt, σ, a; p, λ) dt.
///
/// The integrand is bounded by t^{γ−1} e^{−(1−|z|)t} times a constant, so
/// the range is cut where that envelope is 40 nats below its integral.
pub fn hlz_pochhammer_integral_rep(
    params: &HlzParams,
    z: f64,
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
) -> Result<Approx> {
    params.validate()?;
    opts.validate()?;
    require_positive("gamma", params.gamma)?;
    check_unit_disc(z)?;
    let HlzParams {
        gamma, a, sigma, ..
    } = *params;
    let decay = 1.0 - z.abs();
    let envelope = |t: f64| (gamma - 1.0) * t.ln() - decay * t;
    let total = log_gamma(gamma)? - gamma * decay.ln();
    let peak = ((gamma - 1.0) / decay).max(1.0);
    let mut cut = 2.0 * peak;
    while envelope(cut) - decay.ln() > total - 40.0 {
        cut *= 1.25;
    }
    let radius = z.abs() * cut;
    if radius > LIMIT_STAR_MAX_ABS_Z {
        return Err(Error::non_convergent(format!(
            "integration range would need the limit series at |w| = {radius:.1}"
        )));
    }
    let mut table = params.ratio_table(spec)?;
    let inner = LimitStarSeries::build(&mut table, sigma, a, radius.max(1.0))?;
    let integral = try_integrate_interval(
        |t| {
            if t == 0.0 {
                return Ok(0.0);
            }
            Ok(((gamma - 1.0) * t.ln() - t).exp() * inner.eval(z * t))
        },
        0.0,
        cut,
        spec,
    )?;
    let g = rgamma(gamma);
    let value = g * integral.value;
    let tail = (envelope(cut) - decay.ln()).exp() * g * (1.0 / a.min(1.0)).powf(sigma.max(0.0));
    Approx::new(
        value,
        g * integral.err_est + tail + 16.0 * f64::EPSILON * value.abs(),
        integral.work + table.work(),
    )
}

/// dⁿ/dzⁿ Φ = (γ)ₙ(ϑ)ₙ/(υ)ₙ · Φ_{γ+n, ϑ+n; υ+n}(z, σ, a+n; p, λ).
pub fn hlz_derivative(
    params: &HlzParams,
    z: f64,
    n: u32,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    params.validate()?;
    if n == 0 {
        return hlz_series(params, z, opts, spec);
    }
    let k = n as f64;
    let shifted = HlzParams {
        gamma: params.gamma + k,
        theta: params.theta + k,
        upsilon: params.upsilon + k,
        a: params.a + k,
        ..*params
    };
    let factor = pochhammer(params.gamma, n as u64)? * pochhammer(params.theta, n as u64)?
        / pochhammer(params.upsilon, n as u64)?;
    hlz_series(&shifted, z, opts, spec)?.scale(factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn opts() -> SeriesOptions {
        SeriesOptions::default()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-12, 1e-300)
    }

    fn p(
        gamma: f64,
        theta: f64,
        upsilon: f64,
        a: f64,
        sigma: f64,
        p: f64,
        lambda: f64,
    ) -> HlzParams {
        HlzParams::new(gamma, theta, upsilon, a, sigma, p, lambda).unwrap()
    }

    // Li₃(½)/½
    const LI3_HALF_OVER_HALF: f64 = 1.0744263872160804019;

    #[test]
    fn polylog_reduction() {
        let v = hlz_series(&p(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0), 0.5, &opts(), &spec()).unwrap();
        assert!((v.value - LI3_HALF_OVER_HALF).abs() < 1e-12);
        assert!(v.err_est < 1e-10);
    }

    #[test]
    fn zero_argument_keeps_single_term() {
        let v = hlz_series(&p(1.7, 1.0, 2.0, 2.0, 3.0, 0.0, 0.6), 0.0, &opts(), &spec()).unwrap();
        assert_eq!(v.value, 0.125);
        let q = p(1.7, 1.5, 2.5, 2.0, 3.0, 0.4, 1.0);
        let w = hlz_series(&q, 0.0, &opts(), &spec()).unwrap();
        let b = ebeta_chaudhry(1.5, 1.0, 0.4, &spec()).unwrap().value
            / beta_classical(1.5, 1.0).unwrap();
        assert!((w.value - b * 0.125).abs() < 1e-12);
    }

    #[test]
    fn unit_order_matches_parmar_reference() {
        let q = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.5, 1.0);
        let a = hlz_series(&q, 0.5, &opts(), &spec()).unwrap();
        let b = hlz_parmar(&q, 0.5, &opts(), &spec()).unwrap();
        assert!(
            (a.value - b.value).abs() < 1e-11,
            "{} vs {}",
            a.value,
            b.value
        );
        let q = p(2.5, 0.7, 2.2, 1.2, 1.3, 2.0, 1.0);
        let a = hlz_series(&q, -0.6, &opts(), &spec()).unwrap();
        let b = hlz_parmar(&q, -0.6, &opts(), &spec()).unwrap();
        assert!(
            (a.value - b.value).abs() < 1e-11 * b.value.abs(),
            "{} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn zero_p_matches_garg_series() {
        for &(g, t, u, a, s, lambda, z) in &[
            (1.5, 0.7, 2.2, 1.2, 1.3, 0.5, 0.5),
            (-3.0, 1.0, 2.5, 0.5, 2.0, 1.0, 0.9),
            (2.0, 2.0, 3.5, 3.0, -1.0, 1.5, -0.7),
        ] {
            let a1 = hlz_series(&p(g, t, u, a, s, 0.0, lambda), z, &opts(), &spec())
                .unwrap()
                .value;
            let a2 = hlz_garg_classical(g, t, u, z, s, a, &opts()).unwrap().value;
            assert!((a1 - a2).abs() < 1e-12 * a2.abs().max(1.0), "{a1} vs {a2}");
        }
    }

    #[test]
    fn classical_anchors() {
        let z2 = hlz_classical(1.0, 2.0, 1.0, &opts()).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-14);
        let li2 = hlz_classical(0.5, 2.0, 1.0, &opts()).unwrap();
        assert!((li2.value - 1.1644810529300250118).abs() < 1e-12);
        let zero = hlz_classical(0.0, 2.0, 4.0, &opts()).unwrap();
        assert_eq!(zero.value, 0.0625);
        // ζ(3/2, 0.3), mpmath
        let h = hlz_classical(1.0, 1.5, 0.3, &opts()).unwrap();
        assert!(
            (h.value - 8.2377616714597234206).abs() < 1e-13 * 8.3,
            "{}",
            h.value
        );
        assert!(matches!(
            hlz_classical(1.0, 1.0, 1.0, &opts()),
            Err(Error::DivergentSeries(_))
        ));
        assert!(matches!(
            hlz_classical(1.2, 2.0, 1.0, &opts()),
            Err(Error::DivergentSeries(_))
        ));
    }

    #[test]
    fn goyal_laddha_examples() {
        for z in [-0.5, 0.0, 0.3, 0.8] {
            let a = hlz_goyal_laddha_classical(1.0, z, 1.7, 0.4, &opts())
                .unwrap()
                .value;
            let b = hlz_classical(z, 1.7, 0.4, &opts()).unwrap().value;
            assert!((a - b).abs() < 1e-14 * b.abs());
        }
        let v = hlz_goyal_laddha_classical(2.0, 0.5, 0.0, 1.0, &opts()).unwrap();
        assert!((v.value - 4.0).abs() < 1e-11);
        let zero = hlz_goyal_laddha_classical(3.3, 0.0, 1.5, 2.0, &opts()).unwrap();
        assert!((zero.value - 2f64.powf(-1.5)).abs() < 1e-16);
    }

    #[test]
    fn boundary_zeta_values() {
        let z3 = hlz_boundary(&p(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0), &opts(), &spec()).unwrap();
        assert!(
            (z3.value - 1.2020569031595942854).abs() < 1e-8,
            "{}",
            z3.value
        );
        assert!(z3.err_est < 1e-8);
        let z4 = hlz_boundary(&p(1.0, 1.0, 2.0, 1.0, 3.0, 0.0, 1.0), &opts(), &spec()).unwrap();
        assert!((z4.value - 1.0823232337111381915).abs() < 1e-8);
        let edge = p(1.0, 1.0, 2.0, 1.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            hlz_boundary(&edge, &opts(), &spec()),
            Err(Error::DivergentSeries(_))
        ));
        let close = p(1.0, 1.0, 2.0, 1.0, 1.05, 0.0, 1.0);
        assert!(matches!(
            hlz_boundary(&close, &opts(), &spec()),
            Err(Error::Domain(_))
        ));
        let smooth = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.5, 1.0);
        let b = hlz_boundary(&smooth, &opts(), &spec()).unwrap();
        let parmar_like = hlz_series(&smooth, 1.0 - 1e-6 - 1e-12, &opts(), &spec()).unwrap();
        assert!((b.value - parmar_like.value).abs() < 1e-5);
    }

    #[test]
    fn named_cases() {
        let q = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0);
        let v = hlz_case_lin_srivastava(&q, 0.5, &opts(), &spec()).unwrap();
        assert!((v.value - LI3_HALF_OVER_HALF).abs() < 1e-12);
        assert!(hlz_case_lin_srivastava(
            &p(2.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0),
            0.5,
            &opts(),
            &spec()
        )
        .is_err());

        // Σ (½)ₙ/n! · 0.5ⁿ/(n+1)² from mpmath
        let c2 = hlz_case_goyal_laddha_ext(0.5, 1.0, 2.0, 0.0, 1.0, 0.5, &opts(), &spec()).unwrap();
        assert!(
            (c2.value - 1.0763682799446202936).abs() < 1e-12,
            "{}",
            c2.value
        );
        let c0 = hlz_case_goyal_laddha_ext(0.5, 2.0, 1.5, 0.0, 0.8, 0.0, &opts(), &spec()).unwrap();
        assert!((c0.value - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!(matches!(
            hlz_case_goyal_laddha_ext(1.5, 1.0, 2.0, 0.0, 1.0, 0.5, &opts(), &spec()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn limit_star_values() {
        let e1 = hlz_limit_star(1.0, 2.0, 1.0, 0.0, 0.0, 1.0, 1.0, &opts(), &spec()).unwrap();
        assert!((e1.value - (E - 1.0)).abs() < 1e-10);
        let z0 = hlz_limit_star(1.0, 2.0, 2.0, 3.0, 0.0, 1.0, 0.0, &opts(), &spec()).unwrap();
        assert_eq!(z0.value, 0.125);
        // large negative argument: Σ (−20)ⁿ/(n+1)! = (1 − e^{−20})/20
        let big = hlz_limit_star(1.0, 2.0, 1.0, 0.0, 0.0, 1.0, -20.0, &opts(), &spec()).unwrap();
        assert!((big.value - (1.0 - (-20f64).exp()) / 20.0).abs() < 1e-10);
    }

    #[test]
    fn limit_of_large_gamma() {
        let g = 1e6;
        let z = 0.5;
        let lhs = hlz_series(&p(g, 1.0, 2.5, 1.5, 1.2, 0.3, 1.0), z / g, &opts(), &spec()).unwrap();
        let rhs = hlz_limit_star(1.0, 2.5, 1.5, 1.2, 0.3, 1.0, z, &opts(), &spec()).unwrap();
        assert!((lhs.value - rhs.value).abs() < 1e-5);
    }

    const GRID: [crate::identity_lab::GridPoint; 3] = [
        (1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0, 0.5),
        (2.0, 1.5, 3.0, 2.0, 1.5, 0.3, 0.5, 0.4),
        (2.5, 1.0, 2.5, 1.5, 2.0, 0.2, 1.0, 0.3),
    ];

    #[test]
    fn representations_agree() {
        for &(g, t, u, a, s, pp, l, z) in GRID.iter() {
            let q = p(g, t, u, a, s, pp, l);
            let series = hlz_series(&q, z, &opts(), &spec()).unwrap();
            let reps = [
                hlz_integral_rep(&q, z, &spec(), &opts()).unwrap(),
                hlz_double_integral_rep(&q, z, DoubleIntegralForm::InnerSeries, &spec(), &opts())
                    .unwrap(),
                hlz_pochhammer_integral_rep(&q, z, &spec(), &opts()).unwrap(),
            ];
            for (i, r) in reps.iter().enumerate() {
                assert!(
                    (r.value - series.value).abs() < 1e-9,
                    "rep {i} at {q:?}: {} vs {}",
                    r.value,
                    series.value
                );
            }
        }
        let q = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0);
        let v = hlz_integral_rep(&q, 0.5, &spec(), &opts()).unwrap();
        assert!((v.value - LI3_HALF_OVER_HALF).abs() < 1e-10);
    }

    #[test]
    fn nested_double_integral() {
        let q = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.5, 1.0);
        let series = hlz_series(&q, 0.5, &opts(), &spec()).unwrap();
        let spec = QuadratureSpec::with_tolerances(1e-10, 1e-300);
        let nested =
            hlz_double_integral_rep(&q, 0.5, DoubleIntegralForm::Nested, &spec, &opts()).unwrap();
        assert!(
            (nested.value - series.value).abs() < 1e-8,
            "{} vs {}",
            nested.value,
            series.value
        );
    }

    #[test]
    fn representation_preconditions() {
        let q = p(1.0, 1.0, 2.0, 1.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            hlz_integral_rep(&q, 0.5, &spec(), &opts()),
            Err(Error::Domain(_))
        ));
        let neg = p(-0.5, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0);
        assert!(matches!(
            hlz_pochhammer_integral_rep(&neg, 0.5, &spec(), &opts()),
            Err(Error::Domain(_))
        ));
        // z = 0 leaves the beta ratio times a^{−σ}
        let q = p(1.0, 1.0, 2.0, 2.0, 2.0, 0.4, 1.0);
        let ratio = ebeta_chaudhry(1.0, 1.0, 0.4, &spec()).unwrap().value;
        for v in [
            hlz_double_integral_rep(&q, 0.0, DoubleIntegralForm::InnerSeries, &spec(), &opts())
                .unwrap(),
            hlz_pochhammer_integral_rep(&q, 0.0, &spec(), &opts()).unwrap(),
        ] {
            assert!((v.value - ratio * 0.25).abs() < 1e-10, "{}", v.value);
        }
    }

    #[test]
    fn derivative_against_finite_differences() {
        let q = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0);
        let f = |z: f64| {
            hlz_series(&q, z, &opts().with_rel_tol(1e-16), &spec())
                .unwrap()
                .value
        };
        let d0 = hlz_derivative(&q, 0.5, 0, &opts(), &spec()).unwrap();
        assert_eq!(
            d0.value,
            hlz_series(&q, 0.5, &opts(), &spec()).unwrap().value
        );
        let h = 1e-5;
        let fd1 = (f(0.5 + h) - f(0.5 - h)) / (2.0 * h);
        let d1 = hlz_derivative(&q, 0.5, 1, &opts(), &spec()).unwrap();
        assert!(((d1.value - fd1) / fd1).abs() < 1e-6);
        let h = 1e-4;
        let fd2 = (f(0.5 + h) - 2.0 * f(0.5) + f(0.5 - h)) / (h * h);
        let d2 = hlz_derivative(&q, 0.5, 2, &opts(), &spec()).unwrap();
        assert!(((d2.value - fd2) / fd2).abs() < 1e-4);
    }

    #[test]
    fn terminating_gamma_gives_polynomial() {
        // (−2)ₙ vanishes beyond n = 2, so Φ is a quadratic in z
        let q = p(-2.0, 1.0, 2.0, 1.0, 1.0, 0.0, 1.0);
        let v = hlz_series(&q, 0.9, &opts(), &spec()).unwrap();
        // 1 + (−2)(1/2)(0.9)/2 + (−2)(−1)(1/3)(0.81)/(2·3)
        let want = 1.0 - 0.45 + 2.0 / 3.0 * 0.81 / 6.0;
        assert!((v.value - want).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            HlzParams::new(1.0, 0.0, 2.0, 1.0, 2.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            HlzParams::new(1.0, 2.0, 2.0, 1.0, 2.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            HlzParams::new(1.0, 1.0, 2.0, 0.0, 2.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            HlzParams::new(1.0, 1.0, 2.0, 1.0, 2.0, -0.1, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            HlzParams::new(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 2.0),
            Err(Error::UnsupportedParameter(_))
        ));
        let q = p(1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0);
        assert!(matches!(
            hlz_series(&q, 1.0, &opts(), &spec()),
            Err(Error::DivergentSeries(_))
        ));
        assert!(matches!(
            hlz_series(&q, -1.5, &opts(), &spec()),
            Err(Error::DivergentSeries(_))
        ));
    }
}
