//! Extended Gauss hypergeometric function
//!
//! F_p^λ(s1, s2; s3; z) = Σ (s1)_n · B(s2+n, s3−s2; p, λ) / B(s2, s3−s2) · zⁿ / n!.

use crate::error::{Error, Result};
use crate::extended_beta::{BetaRatioTable, EBetaArgs};
use crate::quadrature::QuadratureSpec;
use crate::series::Summation;
use crate::value::Approx;

pub use crate::series::SeriesOptions;

/// Arguments closer than this to the unit circle are refused.
pub(crate) const UNIT_CIRCLE_MARGIN: f64 = 1e-6;

/// Index past which a Pochhammer factor (s)_n vanishes, if s is a non-positive integer.
pub(crate) fn terminating_index(s: f64) -> Option<usize> {
    (s <= 0.0 && s.fract() == 0.0 && s > -1e9).then(|| (-s) as usize)
}

pub(crate) fn check_unit_disc(z: f64) -> Result<()> {
    if z.is_nan() {
        return Err(Error::domain("argument is NaN"));
    }
    if z.abs() > 1.0 - UNIT_CIRCLE_MARGIN {
        return Err(Error::divergent(format!("series needs |z| < 1, got {z}")));
    }
    Ok(())
}

/// Validates all arguments of [`ehyp2f1`] without evaluating.
pub fn ehyp2f1_check(s1: f64, s2: f64, s3: f64, z: f64, p: f64, lambda: f64) -> Result<()> {
    validate(s1, s2, s3)?;
    check_unit_disc(z)?;
    EBetaArgs::new(s2, s3 - s2, p, lambda).map(|_| ())
}

fn validate(s1: f64, s2: f64, s3: f64) -> Result<()> {
    if !s1.is_finite() {
        return Err(Error::domain(format!("s1 must be finite, got {s1}")));
    }
    if !(s2 > 0.0 && s3 > s2 && s3.is_finite()) {
        return Err(Error::domain(format!(
            "need s3 > s2 > 0, got s2={s2}, s3={s3}"
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn ehyp2f1(
    s1: f64,
    s2: f64,
    s3: f64,
    z: f64,
    p: f64,
    lambda: f64,
    opts: &SeriesOptions,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    ehyp2f1_check(s1, s2, s3, z, p, lambda)?;
    opts.validate()?;
    let mut table = BetaRatioTable::new(s2, s3 - s2, p, lambda, spec)?;
    let last = terminating_index(s1);
    let mut sum = Summation::new(*opts);
    let mut beta_err = 0.0;
    let mut q = 1.0f64; // (s1)_n zⁿ / n!
    let mut n = 0usize;
    loop {
        if last.is_some_and(|m| n > m) {
            break;
        }
        if sum.exhausted() {
            return Err(Error::non_convergent(format!(
                "extended 2F1 at z={z} not settled after {} terms",
                sum.terms()
            )));
        }
        let r = table.ratio(n)?;
        beta_err += q.abs() * r.err_est;
        if sum.add(q * r.value) {
            break;
        }
        q *= (s1 + n as f64) * z / (n as f64 + 1.0);
        n += 1;
    }
    let err = sum.tail_estimate(0.99) + beta_err + sum.rounding();
    Approx::new(sum.value(), err, sum.terms() as u64 + table.work())
}

/// Truncated power series Σ cₙ wⁿ fixed for all |w| ≤ radius, so that an
/// integrand sampling many arguments sees one smooth polynomial.
#[derive(Debug, Clone)]
pub(crate) struct PowerSeries {
    coeffs: Vec<f64>,
    errs: Vec<f64>,
    tail: f64,
    radius: f64,
    pub work: u64,
}

impl PowerSeries {
    /// Collects coefficients until `|cₙ|·radiusⁿ` passes the stop rule
    /// against the running sum of magnitudes.
    pub fn build<C>(radius: f64, opts: &SeriesOptions, mut coeff: C) -> Result<Self>
    where
        C: FnMut(usize) -> Result<Option<Approx>>,
    {
        let mut sum = Summation::new(*opts);
        let mut coeffs = Vec::new();
        let mut errs = Vec::new();
        let mut rn = 1.0;
        let mut work = 0;
        loop {
            if sum.exhausted() {
                return Err(Error::non_convergent(format!(
                    "power series on radius {radius} not settled after {} terms",
                    sum.terms()
                )));
            }
            let Some(c) = coeff(coeffs.len())? else { break };
            work = c.work;
            coeffs.push(c.value);
            errs.push(c.err_est);
            let stop = sum.add(c.value.abs() * rn);
            rn *= radius;
            if stop {
                break;
            }
        }
        let tail = sum.tail_estimate(0.99);
        let work = work + coeffs.len() as u64;
        Ok(Self {
            coeffs,
            errs,
            tail,
            radius,
            work,
        })
    }

    /// (value, error bound) at w with |w| ≤ radius.
    pub fn eval(&self, w: f64) -> (f64, f64) {
        debug_assert!(w.abs() <= self.radius * (1.0 + 1e-12));
        let mut v = 0.0;
        let mut mag = 0.0;
        let mut err = 0.0;
        let aw = w.abs();
        for (c, e) in self.coeffs.iter().zip(&self.errs).rev() {
            v = v * w + c;
            mag = mag * aw + c.abs();
            err = err * aw + e;
        }
        (v, err + self.tail + 4.0 * f64::EPSILON * mag)
    }
}

/// F_p^λ(s1, s2; s3; ·) tabulated for |w| ≤ radius.
pub(crate) fn ehyp2f1_table(
    s1: f64,
    table: &mut BetaRatioTable,
    radius: f64,
    opts: &SeriesOptions,
) -> Result<PowerSeries> {
    let last = terminating_index(s1);
    let mut q = 1.0f64;
    PowerSeries::build(radius, opts, |n| {
        if last.is_some_and(|m| n > m) {
            return Ok(None);
        }
        if n > 0 {
            q *= (s1 + n as f64 - 1.0) / n as f64;
        }
        let r = table.ratio(n)?;
        Ok(Some(Approx {
            value: q * r.value,
            err_est: q.abs() * r.err_est,
            work: table.work(),
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended_beta::ebeta_chaudhry;
    use crate::special_core::beta_classical;

    fn opts() -> SeriesOptions {
        SeriesOptions::default()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-12, 1e-300)
    }

    fn classical_2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
        let (mut s, mut t) = (0.0, 1.0);
        for n in 0..400 {
            s += t;
            let k = n as f64;
            t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        }
        s
    }

    #[test]
    fn trivial_and_closed_form() {
        let one = ehyp2f1(1.0, 1.0, 2.0, 0.0, 0.0, 0.5, &opts(), &spec()).unwrap();
        assert_eq!(one.value, 1.0);
        let v = ehyp2f1(1.0, 1.0, 2.0, 0.25, 0.0, 1.0, &opts(), &spec()).unwrap();
        assert!((v.value - (-(0.75f64).ln() / 0.25)).abs() < 1e-12);
        assert!((v.value - 1.1507282898071237).abs() < 1e-12);
    }

    #[test]
    fn zero_p_matches_classical_grid() {
        for &(a, b, c) in &[
            (1.0, 1.0, 2.0),
            (0.5, 1.5, 2.5),
            (-2.0, 0.7, 1.9),
            (2.5, 0.3, 3.3),
        ] {
            for z in [-0.5, -0.1, 0.2, 0.5] {
                for lambda in [0.4, 1.0, 1.6] {
                    let got = ehyp2f1(a, b, c, z, 0.0, lambda, &opts(), &spec())
                        .unwrap()
                        .value;
                    let want = classical_2f1(a, b, c, z);
                    assert!(
                        (got - want).abs() < 1e-11 * want.abs().max(1.0),
                        "({a},{b},{c},{z}) {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn matches_termwise_chaudhry_reference() {
        let (s1, s2, s3, z, p) = (2.0, 1.5, 3.0, 0.5, 0.3);
        let b0 = beta_classical(s2, s3 - s2).unwrap();
        let (mut want, mut q) = (0.0, 1.0);
        for n in 0..80 {
            let b = ebeta_chaudhry(s2 + n as f64, s3 - s2, p, &spec())
                .unwrap()
                .value;
            want += q * b / b0;
            q *= (s1 + n as f64) * z / (n as f64 + 1.0);
        }
        let got = ehyp2f1(s1, s2, s3, z, p, 1.0, &opts(), &spec()).unwrap();
        assert!(
            (got.value - want).abs() < 1e-10 * want,
            "{} vs {want}",
            got.value
        );
    }

    #[test]
    fn table_agrees_with_direct_sum() {
        let mut table = BetaRatioTable::new(1.5, 1.5, 0.3, 0.5, &spec()).unwrap();
        let ps = ehyp2f1_table(2.0, &mut table, 0.6, &opts()).unwrap();
        for w in [-0.6, -0.2, 0.0, 0.35, 0.6] {
            let direct = ehyp2f1(2.0, 1.5, 3.0, w, 0.3, 0.5, &opts(), &spec()).unwrap();
            let (v, e) = ps.eval(w);
            assert!((v - direct.value).abs() < 1e-11, "w={w}");
            assert!(e < 1e-9);
        }
    }

    #[test]
    fn rejects_boundary_and_bad_parameters() {
        assert!(matches!(
            ehyp2f1(1.0, 1.0, 2.0, 1.0, 0.0, 1.0, &opts(), &spec()),
            Err(Error::DivergentSeries(_))
        ));
        assert!(matches!(
            ehyp2f1(1.0, 1.0, 2.0, -0.9999999, 0.0, 1.0, &opts(), &spec()),
            Err(Error::DivergentSeries(_))
        ));
        assert!(ehyp2f1(1.0, 2.0, 2.0, 0.1, 0.0, 1.0, &opts(), &spec()).is_err());
        let capped = SeriesOptions {
            max_terms: 5,
            ..opts()
        };
        assert!(matches!(
            ehyp2f1(1.0, 1.0, 2.0, 0.9, 0.0, 1.0, &capped, &spec()),
            Err(Error::NonConvergent(_))
        ));
    }

    #[test]
    fn terminating_parameter_gives_polynomial() {
        // (−2)_n vanishes for n ≥ 3
        let got = ehyp2f1(-2.0, 1.0, 2.0, 0.7, 0.0, 1.0, &opts(), &spec()).unwrap();
        assert!((got.value - classical_2f1(-2.0, 1.0, 2.0, 0.7)).abs() < 1e-15);
    }
}
