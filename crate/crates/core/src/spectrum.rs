//! Transform-domain arithmetic on spectra `U_0, …, U_K`, where a function is
//! represented as `u(x, t) = Σ U_k(x) t^{kα}`.

use crate::error::{domain, Error, Result};
use crate::expfield::ExpField;
use crate::par::{try_map_range, Execution};
use crate::special::{delta, gamma_ratio};

/// Coefficients `U_0, …, U_K` of a fractional power series in `t^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    alpha: f64,
    coeffs: Vec<ExpField>,
}

impl Spectrum {
    pub fn new(alpha: f64, coeffs: Vec<ExpField>) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain("Spectrum::new", format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if coeffs.is_empty() {
            return Err(domain("Spectrum::new", "a spectrum needs at least one coefficient"));
        }
        Ok(Self { alpha, coeffs })
    }

    /// Spectrum of the constant function 1: `U_0 = 1`, `U_k = 0` otherwise.
    pub fn unit(alpha: f64, order: usize) -> Result<Self> {
        let mut coeffs = vec![ExpField::zero(); order + 1];
        coeffs[0] = ExpField::constant(1.0);
        Self::new(alpha, coeffs)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[ExpField] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ExpField> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false: a spectrum holds at least `U_0`.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncation order `K` (index of the last coefficient).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Result<&ExpField> {
        self.coeffs.get(k).ok_or(Error::InsufficientOrder {
            index: k,
            len: self.coeffs.len(),
        })
    }

    /// Spectrum of `ū`. Valid because the basis `t^{kα}` is real for `t ≥ 0`.
    pub fn conjugate(&self) -> Self {
        Self {
            alpha: self.alpha,
            coeffs: self.coeffs.iter().map(ExpField::conjugate).collect(),
        }
    }

    /// Spectrum of the product `u · v`, up to and including `order`.
    pub fn product(&self, other: &Self, order: usize) -> Result<Self> {
        let coeffs = (0..=order)
            .map(|k| conv2(self, other, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.alpha, coeffs)
    }

    /// Copy with coefficient `k` replaced.
    pub fn with_coeff(&self, k: usize, field: ExpField) -> Result<Self> {
        let mut out = self.clone();
        let len = out.coeffs.len();
        *out.coeffs.get_mut(k).ok_or(Error::InsufficientOrder { index: k, len })? = field;
        Ok(out)
    }
}

fn check_pair(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.alpha != b.alpha {
        return Err(Error::Usage(format!(
            "spectra have different fractional orders ({} vs {})",
            a.alpha, b.alpha
        )));
    }
    Ok(())
}

fn check_index(k: usize, spectra: &[&Spectrum]) -> Result<()> {
    let len = spectra.iter().map(|s| s.len()).min().unwrap_or(0);
    if k >= len {
        return Err(Error::InsufficientOrder { index: k, len });
    }
    Ok(())
}

/// Product rule: `W_k = Σ_{r=0}^{k} U_r V_{k-r}`.
pub fn conv2(u: &Spectrum, v: &Spectrum, k: usize) -> Result<ExpField> {
    check_pair(u, v)?;
    check_index(k, &[u, v])?;
    conv2_slices(&u.coeffs, &v.coeffs, k)
}

/// Triple product rule: `Ψ_k = Σ_{r=0}^{k} Σ_{i=0}^{r} U_i V_{r-i} W_{k-r}`.
pub fn conv3(u: &Spectrum, v: &Spectrum, w: &Spectrum, k: usize) -> Result<ExpField> {
    check_pair(u, v)?;
    check_pair(u, w)?;
    check_index(k, &[u, v, w])?;
    conv3_slices(&u.coeffs, &v.coeffs, &w.coeffs, k)
}

/// Transform of `D_t^{Nα} u`: `Γ(1+(k+N)α)/Γ(1+kα) · U_{k+N}`.
pub fn deriv_shift(u: &Spectrum, shift: usize, k: usize) -> Result<ExpField> {
    let target = u.coeff(k + shift)?;
    let kf = k as f64;
    let ratio = gamma_ratio(1.0 + (kf + shift as f64) * u.alpha, 1.0 + kf * u.alpha)?;
    Ok(target.scale(ratio))
}

/// Transform of `x^m t^n`. Only `m = 0` is representable as an exponential
/// sum; the delta fires when `kα` equals `n` exactly.
pub fn monomial_spectrum(m_pow: u32, n_pow: u32, alpha: f64, order: usize) -> Result<Spectrum> {
    if m_pow != 0 {
        return Err(Error::Unsupported(format!(
            "x^{m_pow} is not an exponential sum; only m = 0 is supported"
        )));
    }
    let coeffs = (0..=order)
        .map(|k| ExpField::constant(delta(k as f64 * alpha - n_pow as f64)))
        .collect();
    Spectrum::new(alpha, coeffs)
}

pub(crate) fn conv2_slices(u: &[ExpField], v: &[ExpField], k: usize) -> Result<ExpField> {
    let products = try_map_range(Execution::default(), k + 1, |r| u[r].multiply(&v[k - r]))?;
    Ok(sum_fields(products.iter()))
}

pub(crate) fn conv3_slices(
    u: &[ExpField],
    v: &[ExpField],
    w: &[ExpField],
    k: usize,
) -> Result<ExpField> {
    let partials = try_map_range(Execution::default(), k + 1, |r| {
        let mut products = Vec::with_capacity(r + 1);
        for i in 0..=r {
            if u[i].is_empty() || v[r - i].is_empty() || w[k - r].is_empty() {
                continue;
            }
            products.push(u[i].multiply(&v[r - i])?.multiply(&w[k - r])?);
        }
        Ok::<_, Error>(products)
    })?;
    Ok(sum_fields(partials.iter().flatten()))
}

/// Sums fields with a single canonicalization pass.
pub fn sum_fields<'a>(fields: impl IntoIterator<Item = &'a ExpField>) -> ExpField {
    ExpField::from_terms(
        fields
            .into_iter()
            .flat_map(|f| f.terms().iter().copied()),
    )
}
