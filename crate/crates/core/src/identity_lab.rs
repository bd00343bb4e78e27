//! Numerical adjudication of the identities satisfied by Φ: the Mellin
//! transform in p, the two generating relations, the integral
//! representations, the derivative formula and the classical reductions.
//!
//! Every check evaluates both sides along independent computational paths
//! and records the outcome in an [`IdentityReport`].

use std::f64::consts::{E, PI};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extended_beta::BetaRatioTable;
use crate::extended_hypergeometric::check_unit_disc;
use crate::hlz::{
    hlz_boundary, hlz_classical, hlz_derivative, hlz_double_integral_rep, hlz_garg_classical,
    hlz_goyal_laddha_classical, hlz_integral_rep, hlz_limit_star, hlz_parmar,
    hlz_pochhammer_integral_rep, hlz_series, sum_with_table, DoubleIntegralForm, HlzParams,
};
use crate::json::{number, ParamEcho, Record};
use crate::quadrature::{try_integrate_semi_infinite_par, QuadratureSpec};
use crate::series::SeriesOptions;
use crate::special_core::{log_beta, pochhammer, reflection_factor, rgamma};
use crate::value::Approx;

/// Smallest Mellin exponent accepted; the prefactor blows up like 1/r.
pub const MELLIN_MIN_R: f64 = 0.05;
pub const GENFUN_GAMMA_MAX_N: usize = 30;
pub const GENFUN_SIGMA_MAX_N: usize = 40;

/// Φ's parameters without p, which the Mellin transform integrates out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinBase {
    pub gamma: f64,
    pub theta: f64,
    pub upsilon: f64,
    pub a: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl MellinBase {
    pub fn with_p(&self, p: f64) -> HlzParams {
        HlzParams {
            gamma: self.gamma,
            theta: self.theta,
            upsilon: self.upsilon,
            a: self.a,
            sigma: self.sigma,
            p,
            lambda: self.lambda,
        }
    }

    fn echo(&self) -> ParamEcho {
        ParamEcho::new([
            ("gamma", self.gamma),
            ("theta", self.theta),
            ("upsilon", self.upsilon),
            ("a", self.a),
            ("sigma", self.sigma),
            ("lambda", self.lambda),
        ])
    }
}

/// Outcome of one identity check.
///
/// A check that could not be evaluated has no sides and carries `error`;
/// it never passes.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity_name: String,
    pub lhs: Option<Approx>,
    pub rhs: Option<Approx>,
    pub abs_discrepancy: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub params_echo: ParamEcho,
    pub error: Option<String>,
}

impl IdentityReport {
    pub fn from_sides(
        name: &str,
        lhs: Approx,
        rhs: Approx,
        tolerance: f64,
        params_echo: ParamEcho,
    ) -> Self {
        let d = (lhs.value - rhs.value).abs();
        Self {
            identity_name: name.to_string(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            abs_discrepancy: Some(d),
            tolerance,
            passed: d <= tolerance + lhs.err_est + rhs.err_est,
            params_echo,
            error: None,
        }
    }

    pub fn from_error(name: &str, tolerance: f64, params_echo: ParamEcho, err: &Error) -> Self {
        Self {
            identity_name: name.to_string(),
            lhs: None,
            rhs: None,
            abs_discrepancy: None,
            tolerance,
            passed: false,
            params_echo,
            error: Some(err.to_string()),
        }
    }
}

impl Serialize for IdentityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        fn side<'a>(a: &'a Option<Approx>, params: &'a ParamEcho) -> Option<Record<'a>> {
            a.as_ref().map(|approx| Record { approx, params })
        }
        let mut st = s.serialize_struct("IdentityReport", 8)?;
        st.serialize_field("identity_name", &self.identity_name)?;
        st.serialize_field("lhs", &side(&self.lhs, &self.params_echo))?;
        st.serialize_field("rhs", &side(&self.rhs, &self.params_echo))?;
        st.serialize_field("abs_discrepancy", &self.abs_discrepancy.map(number))?;
        st.serialize_field("tolerance", &number(self.tolerance))?;
        st.serialize_field("passed", &self.passed)?;
        st.serialize_field("params_echo", &self.params_echo)?;
        st.serialize_field("error", &self.error)?;
        st.end()
    }
}

fn check_mellin_exponent(r: f64, lambda: f64) -> Result<()> {
    if !(MELLIN_MIN_R..1.0).contains(&r) {
        return Err(Error::domain(format!(
            "Mellin exponent r must lie in [{MELLIN_MIN_R}, 1), got {r}"
        )));
    }
    if r * lambda >= 1.0 {
        return Err(Error::domain(format!("need r·λ < 1, got {}", r * lambda)));
    }
    Ok(())
}

/// ∫₀^∞ p^{r−1} Φ(z, σ, a; p, λ) dp by quadrature over p, each sample a full
/// series evaluation with its own kernel quadrature.
pub fn mellin_lhs(
    base: &MellinBase,
    z: f64,
    r: f64,
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
) -> Result<Approx> {
    base.with_p(0.0).validate()?;
    check_mellin_exponent(r, base.lambda)?;
    check_unit_disc(z)?;
    let worst_rel = AtomicU64::new(0f64.to_bits());
    let integral = try_integrate_semi_infinite_par(
        |p| {
            let phi = hlz_series(&base.with_p(p), z, opts, spec)?;
            // positive doubles order like their bit patterns
            worst_rel.fetch_max(phi.rel_err().min(1.0).to_bits(), Ordering::Relaxed);
            Ok(p.powf(r - 1.0) * phi.value)
        },
        spec,
    )?;
    let inner = f64::from_bits(worst_rel.load(Ordering::Relaxed));
    Approx::new(
        integral.value,
        integral.err_est + inner * integral.value.abs(),
        integral.work,
    )
}

/// π/sin(πr) · B(ϑ+r, υ−ϑ+r) / (Γ(1−rλ) B(ϑ, υ−ϑ)) · Φ_{γ,ϑ+r;υ+2r}(z, σ, a) with the
/// right-hand Φ at p = 0.
pub fn mellin_rhs(base: &MellinBase, z: f64, r: f64, opts: &SeriesOptions) -> Result<Approx> {
    base.with_p(0.0).validate()?;
    check_mellin_exponent(r, base.lambda)?;
    let pref = mellin_prefactor(base, r)?;
    let shifted = HlzParams {
        theta: base.theta + r,
        upsilon: base.upsilon + 2.0 * r,
        ..base.with_p(0.0)
    };
    hlz_series(&shifted, z, opts, &QuadratureSpec::default())?.scale(pref)
}

/// The closed-form factor multiplying Φ on the right-hand side.
pub fn mellin_prefactor(base: &MellinBase, r: f64) -> Result<f64> {
    check_mellin_exponent(r, base.lambda)?;
    let ratio = (log_beta(base.theta + r, base.upsilon - base.theta + r)?
        - log_beta(base.theta, base.upsilon - base.theta)?)
    .exp();
    Ok(reflection_factor(r)? * rgamma(1.0 - r * base.lambda) * ratio)
}

pub fn mellin_check(
    base: &MellinBase,
    z: f64,
    r: f64,
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
    tol: f64,
) -> Result<IdentityReport> {
    let lhs = mellin_lhs(base, z, r, spec, opts)?;
    let rhs = mellin_rhs(base, z, r, opts)?;
    Ok(IdentityReport::from_sides(
        "mellin",
        lhs,
        rhs,
        tol,
        base.echo().with("z", z).with("r", r),
    ))
}

/// Mellin checks at λ = 1 for r approaching 1, where the right-hand side
/// tends to Γ(r)·B(ϑ+r, υ−ϑ+r)/B(ϑ, υ−ϑ)·Φ. Each report is named
/// `mellin-r-limit`; the discrepancy trend is logged.
pub fn mellin_limit_study(
    base: &MellinBase,
    z: f64,
    rs: &[f64],
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
    tol: f64,
) -> Vec<IdentityReport> {
    let base = MellinBase {
        lambda: 1.0,
        ..*base
    };
    let reports: Vec<IdentityReport> = rs
        .iter()
        .map(|&r| {
            let echo = base.echo().with("z", z).with("r", r);
            match mellin_check(&base, z, r, spec, opts, tol) {
                Ok(rep) => IdentityReport {
                    identity_name: "mellin-r-limit".into(),
                    ..rep
                },
                Err(e) => IdentityReport::from_error("mellin-r-limit", tol, echo, &e),
            }
        })
        .collect();
    for rep in &reports {
        if let (Some(l), Some(d)) = (rep.lhs, rep.abs_discrepancy) {
            log::info!(
                "mellin r-limit {:?}: lhs {:.12e} discrepancy {:.3e}",
                rep.params_echo.0.last(),
                l.value,
                d
            );
        }
    }
    reports
}

/// Sum of a finite list of terms. The tail is modelled as geometric with
/// the larger of the last observed ratio and `limit_ratio`, the ratio the
/// terms approach as n → ∞; the observed ratios creep up towards it, so the
/// last one alone underestimates.
fn truncated_sum(terms: &[f64], errs: f64, limit_ratio: f64) -> Result<Approx> {
    let value: f64 = terms.iter().sum();
    let n = terms.len();
    let last = terms.last().copied().unwrap_or(0.0).abs();
    let tail = if n < 2 || last == 0.0 {
        last
    } else {
        let q = (last / terms[n - 2].abs()).max(limit_ratio);
        if q < 1.0 {
            last * q / (1.0 - q)
        } else {
            last * n as f64
        }
    };
    let abs: f64 = terms.iter().map(|t| t.abs()).sum();
    Approx::new(value, tail + errs + 4.0 * f64::EPSILON * abs, n as u64)
}

/// Σ_{n≤N} (γ)ₙ tⁿ/n! · Φ_{γ+n,ϑ;υ}(z) against (1−t)^{−γ} Φ_{γ,ϑ;υ}(z/(1−t)).
pub fn genfun_gamma_check(
    params: &HlzParams,
    z: f64,
    t: f64,
    n_terms: usize,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<IdentityReport> {
    params.validate()?;
    if !(t.abs() < 1.0) {
        return Err(Error::domain(format!("need |t| < 1, got {t}")));
    }
    if n_terms > GENFUN_GAMMA_MAX_N {
        return Err(Error::domain(format!(
            "at most {GENFUN_GAMMA_MAX_N} terms, got {n_terms}"
        )));
    }
    check_unit_disc(z)?;
    let w = z / (1.0 - t);
    check_unit_disc(w)?;
    let mut table = BetaRatioTable::new(
        params.theta,
        params.upsilon - params.theta,
        params.p,
        params.lambda,
        spec,
    )?;
    let mut terms = Vec::with_capacity(n_terms + 1);
    let mut errs = 0.0;
    for n in 0..=n_terms {
        let c = pochhammer(params.gamma, n as u64)? * t.powi(n as i32) / pochhammer(1.0, n as u64)?;
        if c == 0.0 {
            terms.push(0.0);
            continue;
        }
        let phi = sum_with_table(
            &mut table,
            params.gamma + n as f64,
            params.sigma,
            params.a,
            z,
            opts,
        )?;
        terms.push(c * phi.value);
        errs += c.abs() * phi.err_est;
    }
    // Φ_{γ+n}(z) grows like (1−|z|)^{−n}
    let lhs = truncated_sum(&terms, errs, t.abs() / (1.0 - z.abs()))?;
    let rhs = sum_with_table(&mut table, params.gamma, params.sigma, params.a, w, opts)?
        .scale((1.0 - t).powf(-params.gamma))?;
    let echo = ParamEcho::new(params.echo())
        .with("z", z)
        .with("t", t)
        .with("N", n_terms as f64);
    Ok(IdentityReport::from_sides(
        "genfun-gamma",
        lhs,
        rhs,
        tol,
        echo,
    ))
}

/// Σ_{n≤N} (σ)ₙ/n! tⁿ Φ(z, σ+n, a) against Φ(z, σ, a−t).
pub fn genfun_sigma_check(
    params: &HlzParams,
    z: f64,
    t: f64,
    n_terms: usize,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<IdentityReport> {
    params.validate()?;
    if !(t.abs() < params.a) {
        return Err(Error::domain(format!(
            "need |t| < a = {}, got {t}",
            params.a
        )));
    }
    if n_terms > GENFUN_SIGMA_MAX_N {
        return Err(Error::domain(format!(
            "at most {GENFUN_SIGMA_MAX_N} terms, got {n_terms}"
        )));
    }
    check_unit_disc(z)?;
    let mut table = BetaRatioTable::new(
        params.theta,
        params.upsilon - params.theta,
        params.p,
        params.lambda,
        spec,
    )?;
    let mut terms = Vec::with_capacity(n_terms + 1);
    let mut errs = 0.0;
    for n in 0..=n_terms {
        let c = pochhammer(params.sigma, n as u64)? * t.powi(n as i32) / pochhammer(1.0, n as u64)?;
        if c == 0.0 {
            terms.push(0.0);
            continue;
        }
        let phi = sum_with_table(
            &mut table,
            params.gamma,
            params.sigma + n as f64,
            params.a,
            z,
            opts,
        )?;
        terms.push(c * phi.value);
        errs += c.abs() * phi.err_est;
    }
    // Φ(z, σ+n, a) decays like a^{−n}
    let lhs = truncated_sum(&terms, errs, t.abs() / params.a)?;
    let rhs = sum_with_table(
        &mut table,
        params.gamma,
        params.sigma,
        params.a - t,
        z,
        opts,
    )?;
    let echo = ParamEcho::new(params.echo())
        .with("z", z)
        .with("t", t)
        .with("N", n_terms as f64);
    Ok(IdentityReport::from_sides(
        "genfun-sigma",
        lhs,
        rhs,
        tol,
        echo,
    ))
}

/// Groups of checks the suite can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityGroup {
    IntRep1,
    IntRep2,
    IntRep3,
    Derivative,
    Mellin,
    GenfunGamma,
    GenfunSigma,
    Reductions,
}

impl IdentityGroup {
    pub const ALL: [IdentityGroup; 8] = [
        IdentityGroup::IntRep1,
        IdentityGroup::IntRep2,
        IdentityGroup::IntRep3,
        IdentityGroup::Derivative,
        IdentityGroup::Mellin,
        IdentityGroup::GenfunGamma,
        IdentityGroup::GenfunSigma,
        IdentityGroup::Reductions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityGroup::IntRep1 => "int-rep-1",
            IdentityGroup::IntRep2 => "int-rep-2",
            IdentityGroup::IntRep3 => "int-rep-3",
            IdentityGroup::Derivative => "derivative",
            IdentityGroup::Mellin => "mellin",
            IdentityGroup::GenfunGamma => "genfun-gamma",
            IdentityGroup::GenfunSigma => "genfun-sigma",
            IdentityGroup::Reductions => "reductions",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }
}

/// (γ, ϑ, υ, a, σ, p, λ, z)
pub type GridPoint = (f64, f64, f64, f64, f64, f64, f64, f64);
/// (γ, ϑ, υ, a, σ, p, λ, z, t, N)
pub type GenfunPoint = (f64, f64, f64, f64, f64, f64, f64, f64, f64, usize);

/// Points on which the representations are compared.
pub const REPRESENTATION_GRID: [GridPoint; 6] = [
    (1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0, 0.5),
    (2.0, 1.5, 3.0, 2.0, 1.5, 0.5, 0.5, 0.3),
    (1.0, 1.0, 2.0, 1.0, 2.0, 0.5, 1.0, 0.5),
    (2.5, 1.0, 2.5, 1.5, 2.0, 0.5, 1.0, 0.3),
    (1.5, 0.7, 2.2, 1.2, 1.3, 0.5, 0.5, 0.5),
    (0.8, 1.2, 3.1, 0.9, 2.5, 0.0, 0.5, 0.3),
];

/// Points for the derivative formula.
pub const DERIVATIVE_GRID: [GridPoint; 3] = [
    (1.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0, 0.5),
    (2.0, 1.5, 3.0, 2.0, 1.5, 0.3, 0.5, 0.4),
    (1.5, 0.7, 2.2, 1.2, 1.3, 0.5, 1.0, -0.3),
];

/// Points for the γ generating relation.
pub const GENFUN_GAMMA_GRID: [GenfunPoint; 3] = [
    (1.5, 1.0, 2.0, 1.0, 2.0, 0.3, 1.0, 0.3, 0.0, 0),
    (1.5, 1.0, 2.0, 1.0, 2.0, 0.3, 1.0, 0.3, 0.2, 25),
    (2.0, 1.0, 2.0, 1.0, 2.0, 0.0, 1.0, 0.25, 0.5, 30),
];

/// Points for the σ generating relation.
pub const GENFUN_SIGMA_GRID: [GenfunPoint; 3] = [
    (1.0, 1.0, 2.0, 2.0, 1.5, 0.4, 0.5, 0.4, 0.0, 0),
    (1.0, 1.0, 2.0, 2.0, 1.5, 0.4, 0.5, 0.4, 0.5, 30),
    (2.0, 1.5, 3.0, 1.5, 2.0, 0.0, 1.0, 0.3, -0.3, 30),
];

/// Base point and (r, λ) grid for the Mellin transform.
pub const MELLIN_BASE: MellinBase = MellinBase {
    gamma: 1.0,
    theta: 1.0,
    upsilon: 2.0,
    a: 1.0,
    sigma: 2.0,
    lambda: 1.0,
};
pub const MELLIN_Z: f64 = 0.5;
pub const MELLIN_GRID: [(f64, f64); 4] = [(0.3, 0.5), (0.3, 1.0), (0.5, 0.5), (0.5, 1.0)];
pub const MELLIN_LIMIT_RS: [f64; 2] = [0.9, 0.99];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub groups: Vec<IdentityGroup>,
    pub representation_tol: f64,
    pub mellin_tol: f64,
    pub genfun_tol: f64,
    /// Relative tolerance of the derivative formula against finite differences.
    pub derivative_rel_tol: f64,
    pub spec: QuadratureSpec,
    pub opts: SeriesOptions,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            groups: IdentityGroup::ALL.to_vec(),
            representation_tol: 1e-8,
            mellin_tol: 1e-6,
            genfun_tol: 1e-8,
            derivative_rel_tol: 1e-5,
            spec: QuadratureSpec::with_tolerances(1e-11, 1e-300),
            opts: SeriesOptions::default(),
        }
    }
}

impl SuiteConfig {
    pub fn only(groups: &[IdentityGroup]) -> Self {
        Self {
            groups: groups.to_vec(),
            ..Self::default()
        }
    }
}

type Job = Box<dyn Fn() -> IdentityReport + Send + Sync>;

fn params_of(g: &GridPoint) -> (HlzParams, f64) {
    (
        HlzParams {
            gamma: g.0,
            theta: g.1,
            upsilon: g.2,
            a: g.3,
            sigma: g.4,
            p: g.5,
            lambda: g.6,
        },
        g.7,
    )
}

fn echo_of(params: &HlzParams, z: f64) -> ParamEcho {
    ParamEcho::new(params.echo()).with("z", z)
}

/// Wraps a two-sided evaluation into a job whose failure becomes an error report.
fn job<F>(name: &'static str, tol: f64, echo: ParamEcho, sides: F) -> Job
where
    F: Fn() -> Result<(Approx, Approx)> + Send + Sync + 'static,
{
    Box::new(move || match sides() {
        Ok((l, r)) => IdentityReport::from_sides(name, l, r, tol, echo.clone()),
        Err(e) => IdentityReport::from_error(name, tol, echo.clone(), &e),
    })
}

fn representation_jobs(group: IdentityGroup, cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let (spec, opts, tol) = (cfg.spec, cfg.opts, cfg.representation_tol);
    for g in REPRESENTATION_GRID.iter() {
        let (params, z) = params_of(g);
        let name = group.name();
        jobs.push(job(name, tol, echo_of(&params, z), move || {
            let series = hlz_series(&params, z, &opts, &spec)?;
            let rep = match group {
                IdentityGroup::IntRep1 => hlz_integral_rep(&params, z, &spec, &opts)?,
                IdentityGroup::IntRep2 => hlz_double_integral_rep(
                    &params,
                    z,
                    DoubleIntegralForm::InnerSeries,
                    &spec,
                    &opts,
                )?,
                _ => hlz_pochhammer_integral_rep(&params, z, &spec, &opts)?,
            };
            Ok((series, rep))
        }));
    }
    if group == IdentityGroup::IntRep2 {
        let (params, z) = params_of(&REPRESENTATION_GRID[2]);
        let nested_spec = QuadratureSpec {
            rel_tol: 1e-10,
            ..spec
        };
        jobs.push(job(
            "int-rep-2-nested",
            tol,
            echo_of(&params, z),
            move || {
                let series = hlz_series(&params, z, &opts, &spec)?;
                let rep = hlz_double_integral_rep(
                    &params,
                    z,
                    DoubleIntegralForm::Nested,
                    &nested_spec,
                    &opts,
                )?;
                Ok((series, rep))
            },
        ));
    }
    jobs
}

/// Central difference of order n ∈ {1, 2} with a shared beta table, so the
/// coefficients are identical at every stencil point.
fn finite_difference(params: &HlzParams, z: f64, n: u32, spec: &QuadratureSpec) -> Result<Approx> {
    let opts = SeriesOptions::default().with_rel_tol(1e-16);
    let mut table = BetaRatioTable::new(
        params.theta,
        params.upsilon - params.theta,
        params.p,
        params.lambda,
        spec,
    )?;
    let mut f = |x: f64| {
        sum_with_table(&mut table, params.gamma, params.sigma, params.a, x, &opts).map(|v| v.value)
    };
    let (value, scale, h) = match n {
        1 => {
            let h = 1e-4;
            let (fp, fm) = (f(z + h)?, f(z - h)?);
            ((fp - fm) / (2.0 * h), fp.abs().max(fm.abs()), h)
        }
        2 => {
            let h = 1e-3;
            let (fp, f0, fm) = (f(z + h)?, f(z)?, f(z - h)?);
            (
                (fp - 2.0 * f0 + fm) / (h * h),
                fp.abs().max(f0.abs()).max(fm.abs()),
                h,
            )
        }
        _ => {
            return Err(Error::UnsupportedParameter(format!(
                "finite differences of order {n}"
            )))
        }
    };
    Approx::new(value, 8.0 * f64::EPSILON * scale / h.powi(n as i32), 0)
}

fn derivative_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let (spec, opts, rel) = (cfg.spec, cfg.opts, cfg.derivative_rel_tol);
    for g in DERIVATIVE_GRID.iter() {
        let (params, z) = params_of(g);
        for n in [1u32, 2] {
            let echo = echo_of(&params, z).with("n", n as f64);
            jobs.push(Box::new(move || {
                let sides = hlz_derivative(&params, z, n, &opts, &spec)
                    .and_then(|d| Ok((d, finite_difference(&params, z, n, &spec)?)));
                match sides {
                    // tolerance relative to the finite-difference value
                    Ok((l, r)) => IdentityReport::from_sides(
                        "derivative",
                        l,
                        r,
                        rel * r.value.abs(),
                        echo.clone(),
                    ),
                    Err(e) => IdentityReport::from_error("derivative", rel, echo.clone(), &e),
                }
            }) as Job);
        }
    }
    jobs
}

fn mellin_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let (spec, opts, tol) = (cfg.spec, cfg.opts, cfg.mellin_tol);
    let mellin_spec = QuadratureSpec {
        rel_tol: spec.rel_tol.max(1e-9),
        ..spec
    };
    let mut jobs: Vec<Job> = MELLIN_GRID
        .iter()
        .map(|&(r, lambda)| {
            let base = MellinBase {
                lambda,
                ..MELLIN_BASE
            };
            let echo = base.echo().with("z", MELLIN_Z).with("r", r);
            Box::new(
                move || match mellin_check(&base, MELLIN_Z, r, &mellin_spec, &opts, tol) {
                    Ok(rep) => rep,
                    Err(e) => IdentityReport::from_error("mellin", tol, echo.clone(), &e),
                },
            ) as Job
        })
        .collect();
    for &r in MELLIN_LIMIT_RS.iter() {
        jobs.push(Box::new(move || {
            mellin_limit_study(&MELLIN_BASE, MELLIN_Z, &[r], &mellin_spec, &opts, tol).remove(0)
        }));
    }
    jobs
}

type GenfunCheck =
    fn(&HlzParams, f64, f64, usize, &SeriesOptions, &QuadratureSpec, f64) -> Result<IdentityReport>;

fn genfun_jobs(
    name: &'static str,
    grid: &[GenfunPoint],
    check: GenfunCheck,
    cfg: &SuiteConfig,
) -> Vec<Job> {
    let (spec, opts, tol) = (cfg.spec, cfg.opts, cfg.genfun_tol);
    grid.iter()
        .map(|g| {
            let params = HlzParams {
                gamma: g.0,
                theta: g.1,
                upsilon: g.2,
                a: g.3,
                sigma: g.4,
                p: g.5,
                lambda: g.6,
            };
            let (z, t, n) = (g.7, g.8, g.9);
            let echo = echo_of(&params, z).with("t", t).with("N", n as f64);
            Box::new(move || match check(&params, z, t, n, &opts, &spec, tol) {
                Ok(rep) => rep,
                Err(e) => IdentityReport::from_error(name, tol, echo.clone(), &e),
            }) as Job
        })
        .collect()
}

fn reduction_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let (spec, opts) = (cfg.spec, cfg.opts);
    let mut jobs = Vec::new();

    let q = HlzParams {
        gamma: 1.5,
        theta: 1.0,
        upsilon: 2.5,
        a: 1.0,
        sigma: 2.0,
        p: 0.5,
        lambda: 1.0,
    };
    jobs.push(job(
        "reduction-parmar",
        1e-10,
        echo_of(&q, 0.4),
        move || {
            Ok((
                hlz_series(&q, 0.4, &opts, &spec)?,
                hlz_parmar(&q, 0.4, &opts, &spec)?,
            ))
        },
    ));

    let q = HlzParams {
        gamma: 1.5,
        theta: 0.7,
        upsilon: 2.2,
        a: 1.2,
        sigma: 1.3,
        p: 0.0,
        lambda: 1.0,
    };
    jobs.push(job("reduction-garg", 1e-12, echo_of(&q, 0.5), move || {
        Ok((
            hlz_series(&q, 0.5, &opts, &spec)?,
            hlz_garg_classical(1.5, 0.7, 2.2, 0.5, 1.3, 1.2, &opts)?,
        ))
    }));

    let q = HlzParams {
        gamma: 1.0,
        theta: 0.5,
        upsilon: 1.0,
        a: 1.0,
        sigma: 2.0,
        p: 0.0,
        lambda: 1.0,
    };
    jobs.push(job(
        "reduction-goyal-laddha",
        1e-12,
        echo_of(&q, 0.5),
        move || {
            Ok((
                hlz_series(&q, 0.5, &opts, &spec)?,
                hlz_goyal_laddha_classical(0.5, 0.5, 2.0, 1.0, &opts)?,
            ))
        },
    ));

    // ϑ = υ = 1 makes B(ϑ, υ−ϑ) singular; approached from ϑ < 1
    let q = HlzParams {
        gamma: 1.0,
        theta: 1.0 - 1e-6,
        upsilon: 1.0,
        a: 1.0,
        sigma: 2.0,
        p: 0.0,
        lambda: 1.0,
    };
    jobs.push(job(
        "reduction-hurwitz-lerch-limit",
        1e-4,
        echo_of(&q, 0.5),
        move || {
            Ok((
                hlz_series(&q, 0.5, &opts, &spec)?,
                hlz_classical(0.5, 2.0, 1.0, &opts)?,
            ))
        },
    ));

    let big = 1e6;
    let q = HlzParams {
        gamma: big,
        theta: 1.0,
        upsilon: 2.5,
        a: 1.5,
        sigma: 1.2,
        p: 0.3,
        lambda: 1.0,
    };
    jobs.push(job("limit-star", 1e-5, echo_of(&q, 0.5), move || {
        Ok((
            hlz_series(&q, 0.5 / big, &opts, &spec)?,
            hlz_limit_star(1.0, 2.5, 1.5, 1.2, 0.3, 1.0, 0.5, &opts, &spec)?,
        ))
    }));

    jobs.push(job(
        "anchor-zeta2",
        1e-9,
        ParamEcho::new([("z", 1.0), ("sigma", 2.0), ("a", 1.0)]),
        move || {
            Ok((
                hlz_classical(1.0, 2.0, 1.0, &opts)?,
                Approx::exact(PI * PI / 6.0),
            ))
        },
    ));

    let q = HlzParams {
        gamma: 1.0,
        theta: 1.0,
        upsilon: 2.0,
        a: 1.0,
        sigma: 2.0,
        p: 0.0,
        lambda: 1.0,
    };
    jobs.push(job("anchor-zeta3", 1e-8, echo_of(&q, 1.0), move || {
        Ok((
            hlz_boundary(&q, &opts, &spec)?,
            Approx::exact(1.2020569031595942854),
        ))
    }));

    let q = HlzParams {
        gamma: 1.0,
        theta: 1.0,
        upsilon: 2.0,
        a: 1.0,
        sigma: 0.0,
        p: 0.0,
        lambda: 1.0,
    };
    jobs.push(job(
        "anchor-e-minus-1",
        1e-10,
        echo_of(&q, 1.0),
        move || {
            Ok((
                hlz_limit_star(1.0, 2.0, 1.0, 0.0, 0.0, 1.0, 1.0, &opts, &spec)?,
                Approx::exact(E - 1.0),
            ))
        },
    ));
    jobs
}

/// Runs the selected groups; every check yields exactly one report, in a
/// fixed order independent of scheduling.
pub fn run_identity_suite(config: &SuiteConfig) -> Vec<IdentityReport> {
    let mut jobs: Vec<Job> = Vec::new();
    for &group in IdentityGroup::ALL
        .iter()
        .filter(|g| config.groups.contains(g))
    {
        match group {
            IdentityGroup::IntRep1 | IdentityGroup::IntRep2 | IdentityGroup::IntRep3 => {
                jobs.extend(representation_jobs(group, config))
            }
            IdentityGroup::Derivative => jobs.extend(derivative_jobs(config)),
            IdentityGroup::Mellin => jobs.extend(mellin_jobs(config)),
            IdentityGroup::GenfunGamma => jobs.extend(genfun_jobs(
                "genfun-gamma",
                &GENFUN_GAMMA_GRID,
                genfun_gamma_check,
                config,
            )),
            IdentityGroup::GenfunSigma => jobs.extend(genfun_jobs(
                "genfun-sigma",
                &GENFUN_SIGMA_GRID,
                genfun_sigma_check,
                config,
            )),
            IdentityGroup::Reductions => jobs.extend(reduction_jobs(config)),
        }
    }
    jobs.par_iter().map(|j| j()).collect()
}
