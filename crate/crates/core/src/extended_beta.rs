//! Extended beta function with a Mittag-Leffler kernel,
//!
//! B(x, y; p, λ) = ∫₀¹ t^{x−1} (1−t)^{y−1} E_λ(−p / (t(1−t))) dt,
//!
//! its half-line form, the exponential-kernel (λ = 1) reference, and a
//! moment table that produces B(θ+n, y; p, λ) for a whole range of n from a
//! single set of kernel evaluations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mittag_leffler::ml_eval;
use crate::quadrature::{
    step, try_integrate_semi_infinite, try_integrate_unit, unit_level_nodes, QuadratureSpec,
    BASE_LEVEL,
};
use crate::special_core::{beta_classical, log_beta};
use crate::value::Approx;

/// Largest index a moment table will produce.
pub const BATCH_MAX_N: usize = 10_000;
const TABLE_START: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EBetaArgs {
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub lambda: f64,
}

impl EBetaArgs {
    pub fn new(x: f64, y: f64, p: f64, lambda: f64) -> Result<Self> {
        let args = Self { x, y, p, lambda };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x > 0.0 && self.x.is_finite() && self.y > 0.0 && self.y.is_finite()) {
            return Err(Error::domain(format!(
                "extended beta needs x, y > 0, got x={}, y={}",
                self.x, self.y
            )));
        }
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(Error::domain(format!(
                "extended beta needs p >= 0, got {}",
                self.p
            )));
        }
        if !(self.lambda > 0.0 && self.lambda < 2.0) {
            return Err(Error::UnsupportedParameter(format!(
                "Mittag-Leffler order must lie in (0, 2), got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// E_λ(−arg) for arg ≥ 0.
fn kernel(lambda: f64, arg: f64) -> Result<f64> {
    if arg == 0.0 {
        return Ok(1.0);
    }
    Ok(ml_eval(lambda, -arg)?.value)
}

fn classical(x: f64, y: f64) -> Result<Approx> {
    let b = beta_classical(x, y)?;
    Approx::new(b, 4.0 * f64::EPSILON * b, 1)
}

/// B(x, y; p, λ) by double-exponential quadrature on (0, 1).
pub fn ebeta(args: EBetaArgs, spec: &QuadratureSpec) -> Result<Approx> {
    args.validate()?;
    let EBetaArgs { x, y, p, lambda } = args;
    if p == 0.0 {
        return classical(x, y);
    }
    try_integrate_unit(
        |t, tc| {
            let k = kernel(lambda, p / (t * tc))?;
            if k == 0.0 {
                return Ok(0.0);
            }
            Ok(k * ((x - 1.0) * t.ln() + (y - 1.0) * tc.ln()).exp())
        },
        spec,
    )
}

/// The same function through ∫₀^∞ u^{x−1} (1+u)^{−x−y} E_λ(−p(2 + u + 1/u)) du.
///
/// At p = 0 the half-line integral is only attempted when x + y > 1.
pub fn ebeta_infinite_form(args: EBetaArgs, spec: &QuadratureSpec) -> Result<Approx> {
    args.validate()?;
    let EBetaArgs { x, y, p, lambda } = args;
    if p == 0.0 && x + y <= 1.0 {
        return Err(Error::domain(format!(
            "half-line form at p = 0 needs x + y > 1, got {}",
            x + y
        )));
    }
    try_integrate_semi_infinite(
        |u| {
            let k = kernel(lambda, p * (2.0 + u + 1.0 / u))?;
            if k == 0.0 {
                return Ok(0.0);
            }
            Ok(k * ((x - 1.0) * u.ln() - (x + y) * u.ln_1p()).exp())
        },
        spec,
    )
}

/// Chaudhry's B_p(x, y) with the kernel exp(−p/(t(1−t))) written out directly.
pub fn ebeta_chaudhry(x: f64, y: f64, p: f64, spec: &QuadratureSpec) -> Result<Approx> {
    EBetaArgs::new(x, y, p, 1.0)?;
    if p == 0.0 {
        return classical(x, y);
    }
    try_integrate_unit(
        |t, tc| Ok(((x - 1.0) * t.ln() + (y - 1.0) * tc.ln() - p / (t * tc)).exp()),
        spec,
    )
}

/// [B(θ, y; p, λ), B(θ+1, y; p, λ), …, B(θ+n_max, y; p, λ)] from shared nodes.
pub fn ebeta_batch(
    theta: f64,
    y: f64,
    p: f64,
    lambda: f64,
    n_max: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<Approx>> {
    EBetaArgs::new(theta, y, p, lambda)?;
    if n_max > BATCH_MAX_N {
        return Err(Error::UnsupportedParameter(format!(
            "batch size {n_max} exceeds the cap of {BATCH_MAX_N}"
        )));
    }
    if p == 0.0 {
        let mut b = beta_classical(theta, y)?;
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            out.push(Approx::new(b, 4.0 * f64::EPSILON * (n + 1) as f64 * b, 1)?);
            let k = n as f64;
            b *= (theta + k) / (theta + y + k);
        }
        return Ok(out);
    }
    BetaMoments::new(theta, y, p, lambda, *spec)?.moments(n_max)
}

/// Kernel samples `(t, w·t^{θ−1}(1−t)^{y−1}·E_λ(−p/(t(1−t))))` per quadrature level.
#[derive(Debug, Clone)]
struct BetaMoments {
    theta: f64,
    y: f64,
    p: f64,
    lambda: f64,
    spec: QuadratureSpec,
    levels: Vec<Vec<(f64, f64)>>,
    evals: u64,
}

impl BetaMoments {
    fn new(theta: f64, y: f64, p: f64, lambda: f64, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            theta,
            y,
            p,
            lambda,
            spec,
            levels: Vec::new(),
            evals: 0,
        })
    }

    fn level(&mut self, level: u32) -> Result<&[(f64, f64)]> {
        let idx = (level - BASE_LEVEL) as usize;
        while self.levels.len() <= idx {
            let l = BASE_LEVEL + self.levels.len() as u32;
            let mut samples = Vec::new();
            for node in unit_level_nodes(l) {
                self.evals += 1;
                let k = kernel(self.lambda, self.p / (node.t * node.tc))?;
                if k == 0.0 {
                    continue;
                }
                let base = node.jac
                    * k
                    * ((self.theta - 1.0) * node.t.ln() + (self.y - 1.0) * node.tc.ln()).exp();
                if base.is_finite() && base != 0.0 {
                    samples.push((node.t, base));
                }
            }
            self.levels.push(samples);
        }
        Ok(&self.levels[idx])
    }

    /// Moments n = 0..=n_max, each refined until its own level difference
    /// meets the tolerance; all or nothing.
    fn moments(&mut self, n_max: usize) -> Result<Vec<Approx>> {
        let len = n_max + 1;
        let mut acc = vec![0.0; len];
        let mut prev = vec![f64::NAN; len];
        for level in BASE_LEVEL..=self.spec.max_level {
            for &(t, base) in self.level(level)? {
                let floor = 1e-300 * base.abs();
                let mut v = base;
                for slot in acc.iter_mut() {
                    *slot += v;
                    v *= t;
                    if v.abs() < floor {
                        break;
                    }
                }
            }
            let h = step(level);
            let est: Vec<f64> = acc.iter().map(|s| s * h).collect();
            let scale = est.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let floor = (self.spec.abs_tol * scale).max(1e-300);
            let diffs: Vec<f64> = est.iter().zip(&prev).map(|(e, p)| (e - p).abs()).collect();
            let done = level > BASE_LEVEL
                && level >= 6.min(self.spec.max_level)
                && est
                    .iter()
                    .zip(&diffs)
                    .all(|(e, d)| *d <= floor.max(self.spec.rel_tol * e.abs()));
            if done {
                let node_rel = if est[0] != 0.0 {
                    diffs[0] / est[0].abs()
                } else {
                    0.0
                };
                return est
                    .iter()
                    .zip(&diffs)
                    .map(|(e, d)| {
                        let err = d.max(node_rel * e.abs()) + 4.0 * f64::EPSILON * e.abs();
                        Approx::new(*e, err, self.evals)
                    })
                    .collect();
            }
            prev = est;
        }
        Err(Error::non_convergent(format!(
            "extended beta moments (θ={}, y={}, p={}, λ={}) up to n={n_max} did not settle by level {}",
            self.theta, self.y, self.p, self.lambda, self.spec.max_level
        )))
    }
}

/// Ratios R_n = B(θ+n, y; p, λ) / B(θ, y) with on-demand growth.
///
/// For p > 0 the table is rebuilt from cached kernel samples at doubling
/// capacities; at p = 0 the classical recurrence is used.
#[derive(Debug, Clone)]
pub struct BetaRatioTable {
    theta: f64,
    y: f64,
    p: f64,
    moments: Option<BetaMoments>,
    inv_b0: f64,
    ratios: Vec<Approx>,
}

impl BetaRatioTable {
    pub fn new(theta: f64, y: f64, p: f64, lambda: f64, spec: &QuadratureSpec) -> Result<Self> {
        EBetaArgs::new(theta, y, p, lambda)?;
        let moments = if p > 0.0 {
            Some(BetaMoments::new(theta, y, p, lambda, *spec)?)
        } else {
            None
        };
        Ok(Self {
            theta,
            y,
            p,
            moments,
            inv_b0: (-log_beta(theta, y)?).exp(),
            ratios: Vec::new(),
        })
    }

    pub fn ratio(&mut self, n: usize) -> Result<Approx> {
        if n >= self.ratios.len() {
            self.grow(n)?;
        }
        Ok(self.ratios[n])
    }

    /// Makes indices 0..=n available.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n >= self.ratios.len() {
            self.grow(n)?;
        }
        Ok(())
    }

    /// Integrand evaluations spent so far.
    pub fn work(&self) -> u64 {
        self.moments
            .as_ref()
            .map_or(self.ratios.len() as u64, |m| m.evals)
    }

    pub fn is_classical(&self) -> bool {
        self.p == 0.0
    }

    fn grow(&mut self, n: usize) -> Result<()> {
        let Some(moments) = self.moments.as_mut() else {
            if self.ratios.is_empty() {
                self.ratios.push(Approx::exact(1.0));
            }
            while self.ratios.len() <= n {
                let k = (self.ratios.len() - 1) as f64;
                let last = self.ratios.last().expect("non-empty").value;
                let r = last * (self.theta + k) / (self.theta + self.y + k);
                self.ratios.push(Approx {
                    value: r,
                    err_est: 2.0 * f64::EPSILON * k * r,
                    work: 0,
                });
            }
            return Ok(());
        };
        if n > BATCH_MAX_N {
            return Err(Error::non_convergent(format!(
                "series needs beta index {n}, beyond the table cap {BATCH_MAX_N}"
            )));
        }
        let cap = (n + 1)
            .next_power_of_two()
            .clamp(TABLE_START, BATCH_MAX_N + 1);
        let raw = moments.moments(cap - 1)?;
        self.ratios = raw
            .into_iter()
            .map(|b| Approx {
                value: b.value * self.inv_b0,
                err_est: b.err_est * self.inv_b0,
                work: b.work,
            })
            .collect();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-12, 1e-300)
    }

    // (x, y, p, λ, B) from 40-digit mpmath quadrature of the defining integral.
    #[rustfmt::skip]
    const REFERENCE: [(f64, f64, f64, f64, f64); 7] = [
        (1.5, 2.5, 0.5, 1.0, 0.015602538165786686626),
        (1.5, 2.5, 0.5, 0.5, 0.038550379378176935561),
        (1.0, 1.0, 1.0, 1.0, 0.0070298584066096562392),
        (0.7, 3.0, 0.1, 1.0, 0.22614215422715330723),
        (3.0, 0.7, 5.0, 1.0, 1.2626440600116564792e-10),
        (2.0, 3.0, 1.0, 0.5, 0.0091948535304435853026),
        (0.7, 1.5, 0.1, 0.5, 0.50117847195295805984),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, y, p, lambda, want) in REFERENCE.iter() {
            let args = EBetaArgs::new(x, y, p, lambda).unwrap();
            let got = ebeta(args, &spec()).unwrap();
            assert!(
                ((got.value - want) / want).abs() < 1e-10,
                "B({x},{y};{p},{lambda}) = {} want {want}",
                got.value
            );
            let inf = ebeta_infinite_form(args, &spec()).unwrap();
            assert!(
                ((inf.value - want) / want).abs() < 1e-10,
                "half-line form {} want {want}",
                inf.value
            );
        }
    }

    #[test]
    fn zero_p_is_classical() {
        let b = ebeta(EBetaArgs::new(2.0, 3.0, 0.0, 0.7).unwrap(), &spec()).unwrap();
        assert!((b.value - 1.0 / 12.0).abs() < 1e-15);
        for lambda in [0.3, 1.0, 1.7] {
            let v = ebeta(EBetaArgs::new(0.7, 3.0, 0.0, lambda).unwrap(), &spec())
                .unwrap()
                .value;
            assert!((v - beta_classical(0.7, 3.0).unwrap()).abs() <= 1e-12 * v);
        }
        let c = ebeta_chaudhry(2.0, 3.0, 0.0, &spec()).unwrap();
        assert!((c.value - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn half_line_form_small_p_limit() {
        let args = EBetaArgs::new(2.0, 2.0, 1e-8, 1.0).unwrap();
        let v = ebeta_infinite_form(args, &QuadratureSpec::default())
            .unwrap()
            .value;
        assert!((v - 1.0 / 6.0).abs() < 1e-4);
        let zero = EBetaArgs::new(0.3, 0.4, 0.0, 1.0).unwrap();
        assert!(matches!(
            ebeta_infinite_form(zero, &spec()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn chaudhry_agrees_with_unit_order() {
        for &(x, y, p) in &[(1.5, 2.5, 0.5), (1.0, 1.0, 1.0), (0.7, 3.0, 5.0)] {
            let a = ebeta(EBetaArgs::new(x, y, p, 1.0).unwrap(), &spec())
                .unwrap()
                .value;
            let b = ebeta_chaudhry(x, y, p, &spec()).unwrap().value;
            assert!(((a - b) / b).abs() < 1e-10);
        }
    }

    #[test]
    fn batch_examples() {
        let b = ebeta_batch(1.0, 1.0, 0.0, 1.0, 3, &spec()).unwrap();
        for (n, v) in b.iter().enumerate() {
            assert!((v.value - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
        }
        let one = ebeta_batch(2.0, 3.0, 0.0, 0.5, 0, &spec()).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one[0].value - 1.0 / 12.0).abs() < 1e-15);

        let batch = ebeta_batch(1.5, 2.5, 0.5, 1.0, 5, &spec()).unwrap();
        for (n, v) in batch.iter().enumerate() {
            let single = ebeta(
                EBetaArgs::new(1.5 + n as f64, 2.5, 0.5, 1.0).unwrap(),
                &spec(),
            )
            .unwrap();
            assert!(
                ((v.value - single.value) / single.value).abs() < 1e-11,
                "n={n}"
            );
        }
        assert!(ebeta_batch(1.0, 1.0, 0.5, 1.0, BATCH_MAX_N + 1, &spec()).is_err());
    }

    #[test]
    fn batch_with_fractional_order_matches_single_calls() {
        let batch = ebeta_batch(0.8, 1.7, 0.3, 0.6, 40, &spec()).unwrap();
        for n in [0usize, 1, 7, 40] {
            let single = ebeta(
                EBetaArgs::new(0.8 + n as f64, 1.7, 0.3, 0.6).unwrap(),
                &spec(),
            )
            .unwrap();
            assert!(
                ((batch[n].value - single.value) / single.value).abs() < 1e-11,
                "n={n}"
            );
        }
    }

    #[test]
    fn ratio_table_grows_consistently() {
        let mut small = BetaRatioTable::new(1.5, 2.5, 0.5, 1.0, &spec()).unwrap();
        let r3 = small.ratio(3).unwrap();
        let r200 = small.ratio(200).unwrap();
        let mut big = BetaRatioTable::new(1.5, 2.5, 0.5, 1.0, &spec()).unwrap();
        big.ensure(300).unwrap();
        assert!(((big.ratio(3).unwrap().value - r3.value) / r3.value).abs() < 1e-12);
        assert!(((big.ratio(200).unwrap().value - r200.value) / r200.value).abs() < 1e-10);

        let mut classical = BetaRatioTable::new(0.5, 0.5, 0.0, 0.3, &spec()).unwrap();
        // B(½+n, ½)/B(½, ½) = (½)_n / n!
        let mut want = 1.0;
        for n in 0..50 {
            assert!((classical.ratio(n).unwrap().value - want).abs() < 1e-14);
            want *= (0.5 + n as f64) / (n as f64 + 1.0);
        }
    }

    #[test]
    fn shift_ratio_at_zero_p() {
        let b = ebeta_batch(0.7, 2.2, 0.0, 0.5, 30, &spec()).unwrap();
        for n in 0..30 {
            let k = n as f64;
            let want = (0.7 + k) / (0.7 + k + 2.2);
            assert!((b[n + 1].value / b[n].value - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(EBetaArgs::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(EBetaArgs::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(matches!(
            EBetaArgs::new(1.0, 1.0, 1.0, 2.0),
            Err(Error::UnsupportedParameter(_))
        ));
    }
}
