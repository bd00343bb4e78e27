//! One-parameter Mittag-Leffler function E_λ(z) = Σ zⁿ / Γ(λn + 1) for
//! λ ∈ (0, 2) and real z ≤ 1.
//!
//! Three regimes cover the negative half line:
//!
//! * Taylor series near the origin, accepted only while the sum of term
//!   magnitudes stays within two digits of the result.
//! * A real Laplace-type integral for moderate arguments. With θ = πλ and
//!   x = −z > 0,
//!
//!   E_λ(−x) = sin θ / (πλ) ∫₀^∞ exp(−(xu)^{1/λ}) / (u² + 2u cos θ + 1) du
//!   + [λ > 1] (2/λ) exp(x^{1/λ} cos(π/λ)) cos(x^{1/λ} sin(π/λ)).
//!
//!   The integrand is bounded and smooth; the quadrature is split at u = 1
//!   where the denominator peaks as λ → 1.
//! * The algebraic asymptotic series −Σ (−x)^{−k} / Γ(1 − λk) with optimal
//!   truncation (plus the same oscillating pole term for λ > 1) once
//!   x^{1/λ} is large enough that exponentially small corrections vanish.
//!
//! λ = 1 is evaluated as `exp(z)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{try_integrate_semi_infinite, try_integrate_unit, QuadratureSpec};
use crate::special_core::{ln_gamma_pos, reflection_factor, rgamma, sin_pi};
use crate::value::Approx;

const TAYLOR_MAX_ABS_Z: f64 = 10.0;
/// Largest x^{1/λ} for which the Taylor series is tried on the negative axis.
const TAYLOR_MAX_SCALE: f64 = 6.0;
/// Smallest x^{1/λ} for which the asymptotic series is tried.
const ASYMPTOTIC_MIN_SCALE: f64 = 40.0;
const TAYLOR_MAX_TERMS: usize = 2000;

/// Validated (λ, z) pair on the supported evaluation domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlDomain {
    lambda: f64,
    z: f64,
}

impl MlDomain {
    pub fn new(lambda: f64, z: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 2.0) {
            return Err(Error::UnsupportedParameter(format!(
                "Mittag-Leffler order must lie in (0, 2), got {lambda}"
            )));
        }
        if z.is_nan() || z > 1.0 {
            return Err(Error::domain(format!(
                "Mittag-Leffler argument must be <= 1, got {z}"
            )));
        }
        Ok(Self { lambda, z })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn eval(&self) -> Result<Approx> {
        let (lambda, z) = (self.lambda, self.z);
        if z == 0.0 {
            return Ok(Approx {
                value: 1.0,
                err_est: 0.0,
                work: 1,
            });
        }
        if lambda == 1.0 {
            let v = z.exp();
            return Approx::new(v, f64::EPSILON * v, 1);
        }
        if z > 0.0 {
            return taylor(lambda, z).ok_or_else(|| {
                Error::non_convergent(format!("Taylor series for E_{lambda}({z}) did not settle"))
            });
        }
        let x = -z;
        if x == f64::INFINITY {
            return Ok(Approx {
                value: 0.0,
                err_est: 0.0,
                work: 1,
            });
        }
        let scale = x.powf(1.0 / lambda);
        if x <= TAYLOR_MAX_ABS_Z && scale <= TAYLOR_MAX_SCALE {
            if let Some(r) = taylor(lambda, z) {
                return Ok(r);
            }
        }
        if scale >= ASYMPTOTIC_MIN_SCALE {
            if let Some(r) = asymptotic(lambda, x) {
                return Ok(r);
            }
        }
        spectral_integral(lambda, x)
    }
}

/// E_λ(z) with an absolute error estimate; `work` counts terms or nodes.
pub fn ml_eval(lambda: f64, z: f64) -> Result<Approx> {
    MlDomain::new(lambda, z)?.eval()
}

/// Closed form of ∫₀^∞ v^{r−1} E_λ(−v) dv = Γ(r) Γ(1−r) / Γ(1−rλ).
pub fn ml_mellin_oracle(r: f64, lambda: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!(
            "Mellin exponent r must lie in (0, 1), got {r}"
        )));
    }
    if !(lambda > 0.0 && lambda < 2.0) {
        return Err(Error::UnsupportedParameter(format!(
            "Mittag-Leffler order must lie in (0, 2), got {lambda}"
        )));
    }
    if r * lambda >= 1.0 {
        return Err(Error::domain(format!(
            "r·λ must be < 1, got {}",
            r * lambda
        )));
    }
    Ok(reflection_factor(r)? * rgamma(1.0 - r * lambda))
}

fn taylor(lambda: f64, z: f64) -> Option<Approx> {
    let ln_abs_z = z.abs().ln();
    let negative = z < 0.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut small = 0;
    let mut n = 1;
    loop {
        if n >= TAYLOR_MAX_TERMS {
            return None;
        }
        let mag = (n as f64 * ln_abs_z - ln_gamma_pos(lambda * n as f64 + 1.0)).exp();
        let term = if negative && n % 2 == 1 { -mag } else { mag };
        sum += term;
        abs_sum += mag;
        if mag < 1e-16 * sum.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        n += 1;
    }
    if abs_sum > 100.0 * sum.abs().max(1.0) {
        return None;
    }
    let next = ((n + 1) as f64 * ln_abs_z - ln_gamma_pos(lambda * (n + 1) as f64 + 1.0)).exp();
    Approx::new(sum, next + 4.0 * f64::EPSILON * abs_sum, n as u64 + 1).ok()
}

/// (2/λ) exp(t cos(π/λ)) cos(t sin(π/λ)), the oscillating part present for λ > 1.
fn pole_term(lambda: f64, scale: f64) -> f64 {
    let phase = PI / lambda;
    let growth = scale * phase.cos();
    if growth < -745.0 {
        return 0.0;
    }
    2.0 / lambda * growth.exp() * (scale * phase.sin()).cos()
}

fn asymptotic(lambda: f64, x: f64) -> Option<Approx> {
    let ln_x = x.ln();
    let mut sum = 0.0;
    let mut prev_env = f64::INFINITY;
    let mut omitted = f64::NAN;
    let mut k = 1u32;
    while k < 500 {
        let w = lambda * k as f64;
        // 1/Γ(1−w) = Γ(w) sin(πw) / π
        let env = (ln_gamma_pos(w) - k as f64 * ln_x).exp() / PI;
        if env > prev_env || env == 0.0 {
            omitted = env;
            break;
        }
        let s = sin_pi(w);
        if s != 0.0 {
            let term = env * s;
            // −(−x)^{−k} = (−1)^{k+1} x^{−k}
            sum += if k % 2 == 1 { term } else { -term };
        }
        prev_env = env;
        if env < 1e-18 * sum.abs() {
            omitted = env;
            break;
        }
        k += 1;
    }
    if !omitted.is_finite() {
        return None;
    }
    let mut value = sum;
    if lambda > 1.0 {
        value += pole_term(lambda, x.powf(1.0 / lambda));
    }
    if omitted > 1e-15 * value.abs() {
        return None;
    }
    Approx::new(value, omitted + f64::EPSILON * value.abs(), k as u64).ok()
}

fn spectral_integral(lambda: f64, x: f64) -> Result<Approx> {
    let theta = PI * lambda;
    let half = 0.5 * theta;
    let c1 = 2.0 * half.cos() * half.cos(); // 1 + cos θ
    let s = theta.sin();
    let s2 = s * s;
    let inv = 1.0 / lambda;
    let scale = x.powf(inv);
    // d = u − 1, carried separately so the denominator keeps full accuracy near u = 1
    let g = |u: f64, d: f64| -> f64 {
        let e = (-(scale * u.powf(inv))).exp();
        let q = d + c1;
        e / (q * q + s2)
    };
    let spec = QuadratureSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-300,
        max_level: 13,
        singular_exponents: None,
    };
    let lower = try_integrate_unit(|t, tc| Ok(g(t, -tc)), &spec)?;
    let upper = try_integrate_semi_infinite(|v| Ok(g(1.0 + v, v)), &spec)?;
    let pref = s / (PI * lambda);
    let mut value = pref * (lower.value + upper.value);
    let mut err = pref.abs() * (lower.err_est + upper.err_est);
    if lambda > 1.0 {
        let p = pole_term(lambda, scale);
        value += p;
        err += f64::EPSILON * p.abs();
    }
    Approx::new(
        value,
        err + 4.0 * f64::EPSILON * value.abs(),
        lower.work + upper.work,
    )
}
