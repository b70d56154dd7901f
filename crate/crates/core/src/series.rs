//! Truncated fractional power series `u(x, t) = Σ_{k≤K} U_k(x) t^{kα}`:
//! evaluation, sampling on space-time grids, closed-form reference solutions
//! and transform-domain residuals of computed spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::expfield::ExpField;
use crate::par::{try_map_range, Execution};
use crate::problem::{Family, ProblemSpec, Solution};
use crate::special::mittag_leffler;
use crate::spectrum::{conv3, deriv_shift, Spectrum};
use crate::sum::ComplexSum;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance handed to the Mittag-Leffler partial sums of the oracles.
const ORACLE_ML_TOL: f64 = 1e-17;

/// A spectrum read as a power series in `t^α` about `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSeries {
    spectrum: Spectrum,
}

impl FractionalSeries {
    pub fn new(spectrum: Spectrum) -> Self {
        Self { spectrum }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Expansion point; all supported problems start at `t = 0`.
    pub fn t0(&self) -> f64 {
        0.0
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<Complex64> {
        let values = self.spatial_values(x)?;
        combine(&values, self.spectrum.alpha(), t)
    }

    /// `U_k(x)` for every `k`.
    pub fn spatial_values(&self, x: f64) -> Result<Vec<Complex64>> {
        self.spectrum.coeffs().iter().map(|c| c.eval(x)).collect()
    }
}

/// Evaluates the truncated series at `(x, t)`.
pub fn evaluate(series: &FractionalSeries, x: f64, t: f64) -> Result<Complex64> {
    series.evaluate(x, t)
}

/// `Σ values[k] · t^{kα}` with compensated summation in ascending `k`.
fn combine(values: &[Complex64], alpha: f64, t: f64) -> Result<Complex64> {
    if !t.is_finite() || t < 0.0 {
        return Err(domain("evaluate", format!("t must be finite and non-negative, got {t}")));
    }
    let mut acc = ComplexSum::new();
    let ln_t = t.ln();
    for (k, v) in values.iter().enumerate() {
        let basis = if k == 0 {
            1.0
        } else if t == 0.0 {
            0.0
        } else {
            (k as f64 * alpha * ln_t).exp()
        };
        acc.add(*v * basis);
    }
    Ok(acc.value())
}

/// Reference value of `u` (and `v` for the coupled system).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub u: Complex64,
    pub v: Option<Complex64>,
}

/// Closed-form solution at `(x, t)`.
///
/// The linear problems have closed forms for every `α` through the
/// Mittag-Leffler function; the nonlinear ones only at `α = 1`.
pub fn oracle(spec: &ProblemSpec, x: f64, t: f64) -> Result<OracleValue> {
    use crate::problem::Problem;

    if !t.is_finite() || t < 0.0 {
        return Err(domain("oracle", format!("t must be finite and non-negative, got {t}")));
    }
    let alpha = spec.alpha;
    let t_alpha = if t == 0.0 { 0.0 } else { t.powf(alpha) };
    let require_unit_order = || {
        if alpha == 1.0 {
            Ok(())
        } else {
            Err(Error::NoOracle(format!(
                "{} has a closed form only at alpha = 1 (got {alpha})",
                spec.problem
            )))
        }
    };
    let phase = |theta: f64| Complex64::from_polar(1.0, theta);

    let u_only = |u| Ok(OracleValue { u, v: None });
    match spec.problem {
        Problem::LseCosh => {
            let a2 = spec.a * spec.a;
            let ml = mittag_leffler(alpha, I * a2 * t_alpha, ORACLE_ML_TOL)?;
            u_only(1.0 + (spec.a * x).cosh() * ml)
        }
        Problem::LseExp => {
            let n2 = spec.n * spec.n;
            let ml = mittag_leffler(alpha, -I * n2 * t_alpha, ORACLE_ML_TOL)?;
            u_only(phase(spec.n * x) * ml)
        }
        Problem::NlsePlane => {
            require_unit_order()?;
            let omega = spec.sigma - spec.n * spec.n;
            u_only(phase(spec.n * x + omega * t))
        }
        Problem::NlseTrap => {
            require_unit_order()?;
            // e^{-3it/2} sin x: substituting e^{iωt} sin x forces ω = -3/2.
            u_only(phase(-1.5 * t) * x.sin())
        }
        Problem::Coupled => {
            require_unit_order()?;
            let density = spec.sigma * (spec.a * spec.a + spec.b * spec.b);
            let u = spec.a * phase(spec.n * x + (density - spec.n * spec.n) * t);
            let v = spec.b * phase(spec.m * x + (density - spec.m * spec.m) * t);
            Ok(OracleValue { u, v: Some(v) })
        }
    }
}

/// Transform-domain residual of the governing equation, `k = 0..K-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub u: Vec<ExpField>,
    pub v: Option<Vec<ExpField>>,
    /// Largest coefficient magnitude among the summands of each `u` residual.
    pub u_scale: Vec<f64>,
    pub v_scale: Option<Vec<f64>>,
}

impl Residual {
    /// Largest residual coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.fields().map(ExpField::max_coeff_magnitude).fold(0.0, f64::max)
    }

    /// Largest residual magnitude relative to `max(1, summand scale)`.
    pub fn max_scaled(&self) -> f64 {
        let scales = self
            .u_scale
            .iter()
            .chain(self.v_scale.iter().flatten());
        self.fields()
            .zip(scales)
            .map(|(f, s)| f.max_coeff_magnitude() / s.max(1.0))
            .fold(0.0, f64::max)
    }

    pub fn fields(&self) -> impl Iterator<Item = &ExpField> {
        self.u.iter().chain(self.v.iter().flatten())
    }

    pub fn is_zero(&self) -> bool {
        self.fields().all(ExpField::is_empty)
    }
}

/// Sum of weighted summands together with their largest coefficient.
fn assemble(parts: &[ExpField]) -> (ExpField, f64) {
    let scale = parts
        .iter()
        .map(ExpField::max_coeff_magnitude)
        .fold(0.0, f64::max);
    (crate::spectrum::sum_fields(parts), scale)
}

/// Plugs a computed spectrum back into the transformed equation.
///
/// For a spectrum produced by the matching solver every returned field
/// vanishes up to rounding.
pub fn residual_spectrum(spec: &ProblemSpec, solution: &Solution) -> Result<Residual> {
    let u = &solution.u;
    if u.len() < 2 {
        return Err(Error::Usage("residual needs at least two coefficients".into()));
    }
    if u.alpha() != spec.alpha {
        return Err(Error::Usage(format!(
            "spectrum order alpha = {} does not match problem alpha = {}",
            u.alpha(),
            spec.alpha
        )));
    }
    let family = spec.family();
    match (&solution.v, family) {
        (Some(_), f) if f != Family::Coupled => {
            return Err(Error::Usage(format!("{} takes a single spectrum", spec.problem)))
        }
        (None, Family::Coupled) => {
            return Err(Error::Usage("coupled residual needs both u and v spectra".into()))
        }
        _ => {}
    }

    let order = u.order();
    let ubar = u.conjugate();
    let time_term = |s: &Spectrum, k| deriv_shift(s, 1, k).map(|f| f.scale(I));

    let mut u_res = Vec::with_capacity(order);
    let mut u_scale = Vec::with_capacity(order);
    let mut v_res = Vec::new();
    let mut v_scale = Vec::new();
    for k in 0..order {
        let uk = &u.coeffs()[k];
        let parts = match family {
            Family::Lse => vec![time_term(u, k)?, uk.d2dx2()],
            Family::Nlse => vec![
                time_term(u, k)?,
                uk.d2dx2(),
                conv3(&ubar, u, u, k)?.scale(spec.sigma),
            ],
            Family::NlseTrap => vec![
                time_term(u, k)?,
                uk.d2dx2().scale(0.5),
                -&uk.multiply(&ExpField::cos_squared())?,
                -&conv3(&ubar, u, u, k)?,
            ],
            Family::Coupled => {
                let v = solution.v.as_ref().expect("checked above");
                let vbar = v.conjugate();
                let vk = &v.coeffs()[k];
                let (rv, sv) = assemble(&[
                    time_term(v, k)?,
                    vk.d2dx2(),
                    conv3(&ubar, u, v, k)?.scale(spec.sigma),
                    conv3(&vbar, v, v, k)?.scale(spec.sigma),
                ]);
                v_res.push(rv);
                v_scale.push(sv);
                vec![
                    time_term(u, k)?,
                    uk.d2dx2(),
                    conv3(&ubar, u, u, k)?.scale(spec.sigma),
                    conv3(&vbar, v, u, k)?.scale(spec.sigma),
                ]
            }
        };
        let (r, s) = assemble(&parts);
        u_res.push(r);
        u_scale.push(s);
    }
    let coupled = family == Family::Coupled;
    Ok(Residual {
        u: u_res,
        v: coupled.then_some(v_res),
        u_scale,
        v_scale: coupled.then_some(v_scale),
    })
}

/// Inclusive uniform grid `min, …, max` with `count ≥ 2` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Self { min, max, count };
        g.validate("grid")?;
        Ok(g)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Usage(format!(
                "{name}: count must be at least 2, got {}",
                self.count
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(Error::Usage(format!(
                "{name}: need finite min <= max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

/// Real part, imaginary part and modulus of a sampled value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

impl From<Complex64> for Sample {
    fn from(z: Complex64) -> Self {
        Self {
            re: z.re,
            im: z.im,
            abs: z.re.hypot(z.im),
        }
    }
}

impl Sample {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub t: f64,
    pub u: Sample,
    pub v: Option<Sample>,
}

/// Sampled solution in row-major order (`x` outer, `t` inner).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    pub coupled: bool,
    pub rows: Vec<Row>,
}

impl SolutionTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Samples the truncated series of `solution` over `x_grid × t_grid`.
pub fn sample(
    solution: &Solution,
    x_grid: Grid,
    t_grid: Grid,
    exec: Execution,
) -> Result<SolutionTable> {
    x_grid.validate("x grid")?;
    t_grid.validate("t grid")?;
    if t_grid.min < 0.0 {
        return Err(domain("sample", format!("t grid must start at t >= 0, got {}", t_grid.min)));
    }
    let u = FractionalSeries::new(solution.u.clone());
    let v = solution.v.clone().map(FractionalSeries::new);
    let alpha = u.spectrum().alpha();

    let blocks = try_map_range(exec, x_grid.count, |i| {
        let x = x_grid.point(i);
        let u_vals = u.spatial_values(x)?;
        let v_vals = v.as_ref().map(|s| s.spatial_values(x)).transpose()?;
        t_grid
            .points()
            .map(|t| {
                Ok(Row {
                    x,
                    t,
                    u: combine(&u_vals, alpha, t)?.into(),
                    v: v_vals
                        .as_ref()
                        .map(|vals| combine(vals, alpha, t).map(Sample::from))
                        .transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SolutionTable {
        coupled: solution.v.is_some(),
        rows: blocks.into_iter().flatten().collect(),
    })
}

/// Largest deviation of a sampled table from the closed form, over `u` and `v`.
pub fn max_oracle_error(spec: &ProblemSpec, table: &SolutionTable) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for row in &table.rows {
        let exact = oracle(spec, row.x, row.t)?;
        worst = worst.max((row.u.value() - exact.u).norm());
        if let (Some(v), Some(ev)) = (row.v, exact.v) {
            worst = worst.max((v.value() - ev).norm());
        }
    }
    Ok(worst)
}
