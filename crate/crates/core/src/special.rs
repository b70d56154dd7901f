//! Special-function kernel: Gamma, the one-parameter Mittag-Leffler function,
//! and the Caputo / Riemann-Liouville power rules on monomials.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::sum::ComplexSum;

/// Largest argument for which `Γ(x)` is finite in double precision.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;

/// Default cap on the number of Mittag-Leffler partial-sum terms.
pub const ML_MAX_TERMS: usize = 20_000;

/// A single `coefficient · t^exponent` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub exponent: f64,
    pub coefficient: Complex64,
}

impl PowerTerm {
    pub fn new(exponent: f64, coefficient: impl Into<Complex64>) -> Self {
        Self {
            exponent,
            coefficient: coefficient.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient == Complex64::new(0.0, 0.0)
    }

    /// Scales the coefficient, keeping the exponent.
    pub fn scaled(self, factor: Complex64) -> Self {
        Self {
            exponent: self.exponent,
            coefficient: self.coefficient * factor,
        }
    }
}

/// Taylor coefficients of `1/Γ(1+z)` about `z = 0`.
#[allow(clippy::excessive_precision)]
const RECIP_GAMMA_TAYLOR: [f64; 23] = [
    1.0,
    0.577_215_664_901_532_860_606_5,
    -0.655_878_071_520_253_881_077,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_501_7,
    -0.042_197_734_555_544_336_748_21,
    -0.009_621_971_527_876_973_562_115,
    0.007_218_943_246_663_099_542_395,
    -0.001_165_167_591_859_065_112_114,
    -0.000_215_241_674_114_950_972_815_7,
    0.000_128_050_282_388_116_186_153_2,
    -0.000_020_134_854_780_788_238_655_69,
    -0.000_001_250_493_482_142_670_657_345,
    0.000_001_133_027_231_981_695_882_374,
    -2.056_338_416_977_607_103_45e-7,
    6.116_095_104_481_415_817_862e-9,
    5.002_007_644_469_222_930_056e-9,
    -1.181_274_570_487_020_144_588e-9,
    1.043_426_711_691_100_510_492e-10,
    7.782_263_439_905_071_254_05e-12,
    -3.696_805_618_642_205_708_188e-12,
    5.100_370_287_454_475_979_015e-13,
    -2.058_326_053_566_506_783_222e-14,
];

/// Gamma function for real positive arguments.
///
/// The argument is shifted into `[0.5, 1.5)`, where `1/Γ` comes from its
/// Taylor series; the shift is undone with the functional equation. Integer
/// arguments up to 23 are exact.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("gamma", format!("argument must be positive and finite, got {x}")));
    }
    if x >= GAMMA_OVERFLOW {
        return Ok(f64::INFINITY);
    }
    if x < 0.5 {
        return Ok(gamma_near_one(x + 1.0) / x);
    }
    let shifts = (x - 0.5).floor();
    let mut value = gamma_near_one(x - shifts);
    for i in 1..=shifts as u32 {
        value *= x - f64::from(i);
    }
    Ok(value)
}

/// `Γ(x)` for `x` in `[0.5, 1.5)`.
fn gamma_near_one(x: f64) -> f64 {
    let z = x - 1.0;
    let recip = RECIP_GAMMA_TAYLOR
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * z + c);
    1.0 / recip
}

/// `ln Γ(x)` for real positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("ln_gamma", format!("argument must be positive and finite, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `Γ(num) / Γ(den)`, computed through log-gamma when either factor overflows.
pub fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    if num < GAMMA_OVERFLOW && den < GAMMA_OVERFLOW {
        Ok(gamma(num)? / gamma(den)?)
    } else {
        Ok((ln_gamma(num)? - ln_gamma(den)?).exp())
    }
}

/// One-parameter Mittag-Leffler function `E_α(z) = Σ z^k / Γ(1 + kα)`.
///
/// Partial summation stops once three consecutive term magnitudes fall below
/// `tol · |sum|`. Fails with [`Error::Convergence`] if that does not happen
/// within [`ML_MAX_TERMS`] terms.
pub fn mittag_leffler(alpha: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    mittag_leffler_with_limit(alpha, z, tol, ML_MAX_TERMS)
}

pub fn mittag_leffler_with_limit(
    alpha: f64,
    z: Complex64,
    tol: f64,
    max_terms: usize,
) -> Result<Complex64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(domain("mittag_leffler", format!("alpha must be positive, got {alpha}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain("mittag_leffler", format!("tol must be positive, got {tol}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(domain("mittag_leffler", "argument must be finite"));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let ln_abs = z.norm().ln();
    let arg = z.arg();
    let mut sum = ComplexSum::new();
    let mut power = Complex64::new(1.0, 0.0);
    let mut small_run = 0usize;
    let mut last = f64::INFINITY;

    for k in 0..max_terms {
        let kf = k as f64;
        let g_arg = 1.0 + kf * alpha;
        let term = if power.re.is_finite() && power.im.is_finite() && g_arg < GAMMA_OVERFLOW {
            power / gamma(g_arg)?
        } else {
            // Log space once z^k or Γ(1+kα) leaves the double range.
            let magnitude = (kf * ln_abs - ln_gamma(g_arg)?).exp();
            Complex64::from_polar(magnitude, kf * arg)
        };
        sum.add(term);
        power *= z;

        last = term.norm();
        let current = sum.value().norm();
        if last < tol * current || last == 0.0 {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum.value());
            }
        } else {
            small_run = 0;
        }
        if !current.is_finite() {
            break;
        }
    }
    Err(Error::Convergence {
        terms: max_terms,
        residual: last,
    })
}

/// Caputo derivative of order `alpha` applied to `t^gamma_exp`.
///
/// Integer exponents below `⌈α⌉` are annihilated. Non-integer exponents below
/// `alpha` are rejected.
pub fn caputo_power(gamma_exp: f64, alpha: f64) -> Result<PowerTerm> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(domain("caputo_power", format!("alpha must be positive, got {alpha}")));
    }
    if !gamma_exp.is_finite() || gamma_exp < 0.0 {
        return Err(domain(
            "caputo_power",
            format!("exponent must be non-negative, got {gamma_exp}"),
        ));
    }
    let is_integer = gamma_exp.fract() == 0.0;
    if is_integer && gamma_exp < alpha.ceil() {
        return Ok(PowerTerm::zero());
    }
    if gamma_exp < alpha {
        return Err(domain(
            "caputo_power",
            format!("non-integer exponent {gamma_exp} below order {alpha} is not supported"),
        ));
    }
    let coefficient = gamma_ratio(1.0 + gamma_exp, 1.0 + gamma_exp - alpha)?;
    Ok(PowerTerm::new(gamma_exp - alpha, coefficient))
}

/// Riemann-Liouville integral of order `alpha` applied to `t^gamma_exp`.
pub fn rl_integral_power(gamma_exp: f64, alpha: f64) -> Result<PowerTerm> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(domain(
            "rl_integral_power",
            format!("alpha must be non-negative, got {alpha}"),
        ));
    }
    if !gamma_exp.is_finite() || gamma_exp <= -1.0 {
        return Err(domain(
            "rl_integral_power",
            format!("exponent must exceed -1, got {gamma_exp}"),
        ));
    }
    if alpha == 0.0 {
        return Ok(PowerTerm::new(gamma_exp, 1.0));
    }
    let coefficient = gamma_ratio(1.0 + gamma_exp, 1.0 + gamma_exp + alpha)?;
    Ok(PowerTerm::new(gamma_exp + alpha, coefficient))
}

/// Discrete delta: 1 at exactly zero, 0 elsewhere.
pub fn delta(k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        0.0
    }
}
