//! Exact algebra of spatial functions written as finite sums `Σ c_j · e^{λ_j x}`
//! with complex amplitudes and complex rates.
//!
//! Every initial condition and every spectrum coefficient handled by the
//! solver lives in this class: it is closed under addition, scaling,
//! multiplication, conjugation and differentiation in `x`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::sum::ComplexSum;

/// Rates closer than this on both real and imaginary parts are merged.
pub const MERGE_EPS: f64 = 1e-12;

/// Merged coefficients smaller than this fraction of the largest contributing
/// coefficient are treated as cancellation residue and dropped.
pub const PRUNE_EPS: f64 = 1e-14;

/// Default cap on the number of terms a product may produce.
pub const DEFAULT_TERM_CAP: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One `coeff · e^{rate · x}` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: Complex64,
    pub rate: Complex64,
}

impl ExpTerm {
    pub fn new(coeff: impl Into<Complex64>, rate: impl Into<Complex64>) -> Self {
        Self {
            coeff: coeff.into(),
            rate: rate.into(),
        }
    }
}

fn rate_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn rates_match(a: Complex64, b: Complex64) -> bool {
    (a.re - b.re).abs() <= MERGE_EPS && (a.im - b.im).abs() <= MERGE_EPS
}

/// Initial conditions of the supported problem families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// `e^{inx}`
    ExpInx { n: f64 },
    /// `1 + cosh(ax)`
    OnePlusCoshAx { a: f64 },
    /// `sin x`
    SinX,
    /// `a · e^{inx}`
    AExpInx { a: f64, n: f64 },
}

/// A finite exponential sum in canonical form: rates are distinct (up to
/// [`MERGE_EPS`]), sorted lexicographically by `(Re λ, Im λ)`, and no
/// coefficient is zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<TermRecord>", from = "Vec<TermRecord>")]
pub struct ExpField {
    terms: Vec<ExpTerm>,
}

/// Flat serialization record used for golden files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub re_coeff: f64,
    pub im_coeff: f64,
    pub re_rate: f64,
    pub im_rate: f64,
}

impl From<ExpField> for Vec<TermRecord> {
    fn from(f: ExpField) -> Self {
        f.terms
            .iter()
            .map(|t| TermRecord {
                re_coeff: t.coeff.re,
                im_coeff: t.coeff.im,
                re_rate: t.rate.re,
                im_rate: t.rate.im,
            })
            .collect()
    }
}

impl From<Vec<TermRecord>> for ExpField {
    fn from(records: Vec<TermRecord>) -> Self {
        ExpField::from_terms(records.into_iter().map(|r| {
            ExpTerm::new(
                Complex64::new(r.re_coeff, r.im_coeff),
                Complex64::new(r.re_rate, r.im_rate),
            )
        }))
    }
}

impl ExpField {
    /// The zero field.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::from_terms([ExpTerm::new(c, ZERO)])
    }

    /// `coeff · e^{rate · x}`
    pub fn exponential(coeff: impl Into<Complex64>, rate: impl Into<Complex64>) -> Self {
        Self::from_terms([ExpTerm::new(coeff, rate)])
    }

    pub fn sin_x() -> Self {
        let half_over_i = Complex64::new(0.0, -0.5);
        Self::from_terms([
            ExpTerm::new(half_over_i, Complex64::i()),
            ExpTerm::new(-half_over_i, -Complex64::i()),
        ])
    }

    pub fn cos_x() -> Self {
        Self::from_terms([
            ExpTerm::new(0.5, Complex64::i()),
            ExpTerm::new(0.5, -Complex64::i()),
        ])
    }

    /// `cosh(ax)` for real `a`.
    pub fn cosh_ax(a: f64) -> Self {
        Self::from_terms([ExpTerm::new(0.5, a), ExpTerm::new(0.5, -a)])
    }

    /// `cos²x = ½ + ¼e^{2ix} + ¼e^{-2ix}`.
    pub fn cos_squared() -> Self {
        Self::from_terms([
            ExpTerm::new(0.5, ZERO),
            ExpTerm::new(0.25, Complex64::new(0.0, 2.0)),
            ExpTerm::new(0.25, Complex64::new(0.0, -2.0)),
        ])
    }

    pub fn make_initial(kind: InitialCondition) -> Result<Self> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(domain("make_initial", format!("parameter {name} must be finite")))
            }
        };
        Ok(match kind {
            InitialCondition::ExpInx { n } => {
                Self::exponential(1.0, Complex64::new(0.0, finite(n, "n")?))
            }
            InitialCondition::OnePlusCoshAx { a } => {
                &Self::constant(1.0) + &Self::cosh_ax(finite(a, "a")?)
            }
            InitialCondition::SinX => Self::sin_x(),
            InitialCondition::AExpInx { a, n } => {
                Self::exponential(finite(a, "a")?, Complex64::new(0.0, finite(n, "n")?))
            }
        })
    }

    /// Builds a canonical field from arbitrary terms.
    pub fn from_terms(terms: impl IntoIterator<Item = ExpTerm>) -> Self {
        Self {
            terms: canonicalize(terms.into_iter().collect()),
        }
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude, 0 for the empty field.
    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    /// Coefficient attached to `rate`, or zero when the rate is absent.
    pub fn coeff_at(&self, rate: Complex64) -> Complex64 {
        self.terms
            .iter()
            .find(|t| rates_match(t.rate, rate))
            .map_or(ZERO, |t| t.coeff)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        if c == ZERO {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm::new(t.coeff * c, t.rate))
                .filter(|t| t.coeff != ZERO)
                .collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_capped(other, DEFAULT_TERM_CAP)
    }

    /// Product with an explicit cap on the canonical term count.
    pub fn multiply_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(ExpTerm::new(a.coeff * b.coeff, a.rate + b.rate));
            }
        }
        let terms = canonicalize(raw);
        if terms.len() > cap {
            return Err(Error::BlowUp {
                op: "multiply",
                terms: terms.len(),
                cap,
            });
        }
        Ok(Self { terms })
    }

    /// Pointwise complex conjugate for real `x`.
    pub fn conjugate(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| ExpTerm::new(t.coeff.conj(), t.rate.conj())),
        )
    }

    /// Exact second derivative in `x`.
    pub fn d2dx2(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| ExpTerm::new(t.coeff * t.rate * t.rate, t.rate)),
        )
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(domain("eval", format!("x must be finite, got {x}")));
        }
        let mut acc = ComplexSum::new();
        for t in &self.terms {
            let v = t.coeff * Complex64::new(t.rate.re * x, t.rate.im * x).exp();
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Overflow { x });
            }
            acc.add(v);
        }
        let value = acc.value();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Overflow { x });
        }
        Ok(value)
    }

    /// True when both fields have the same rates and coefficients within `tol`
    /// (absolute, per coefficient).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).max_coeff_magnitude() <= tol
    }
}

/// Sorts, merges near-equal rates and drops cancelled terms.
fn canonicalize(mut raw: Vec<ExpTerm>) -> Vec<ExpTerm> {
    raw.retain(|t| t.coeff != ZERO);
    raw.sort_by(|a, b| rate_order(&a.rate, &b.rate));

    // (term, largest contributing magnitude)
    let mut merged: Vec<(ExpTerm, f64)> = Vec::with_capacity(raw.len());
    for term in raw {
        let mut target = None;
        for (j, (m, _)) in merged.iter().enumerate().rev() {
            if m.rate.re < term.rate.re - MERGE_EPS {
                break;
            }
            if rates_match(m.rate, term.rate) {
                target = Some(j);
                break;
            }
        }
        match target {
            Some(j) => {
                let (m, scale) = &mut merged[j];
                m.coeff += term.coeff;
                *scale = scale.max(term.coeff.norm());
            }
            None => merged.push((term, term.coeff.norm())),
        }
    }
    merged
        .into_iter()
        .filter(|(t, scale)| {
            let mag = t.coeff.norm();
            mag > 0.0 && mag > PRUNE_EPS * scale
        })
        .map(|(t, _)| t)
        .collect()
}

impl Add for &ExpField {
    type Output = ExpField;

    fn add(self, rhs: &ExpField) -> ExpField {
        ExpField::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Sub for &ExpField {
    type Output = ExpField;

    fn sub(self, rhs: &ExpField) -> ExpField {
        self + &(-rhs)
    }
}

impl Neg for &ExpField {
    type Output = ExpField;

    fn neg(self) -> ExpField {
        ExpField {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm::new(-t.coeff, t.rate))
                .collect(),
        }
    }
}

impl fmt::Display for ExpField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·e^{{({})x}}", t.coeff, t.rate)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn constants() {
        assert_eq!(ExpField::constant(1.0).terms(), &[ExpTerm::new(1.0, ZERO)]);
        assert!(ExpField::constant(0.0).is_empty());
        assert_eq!(
            ExpField::constant(Complex64::i()).terms(),
            &[ExpTerm::new(Complex64::i(), ZERO)]
        );
    }

    #[test]
    fn initial_conditions() {
        let f = ExpField::make_initial(InitialCondition::OnePlusCoshAx { a: 2.0 }).unwrap();
        assert_eq!(f.len(), 3);
        assert!(close(f.eval(0.0).unwrap(), c(2.0, 0.0)));

        let f = ExpField::make_initial(InitialCondition::SinX).unwrap();
        assert!(close(f.eval(PI / 2.0).unwrap(), c(1.0, 0.0)));
        assert!(close(f.eval(PI / 6.0).unwrap(), c(0.5, 0.0)));

        let f = ExpField::make_initial(InitialCondition::ExpInx { n: 3.0 }).unwrap();
        assert!(close(f.eval(PI).unwrap(), c(-1.0, 0.0)));
        assert!(close(f.eval(PI / 3.0).unwrap(), c(-1.0, 0.0)));

        let f = ExpField::make_initial(InitialCondition::AExpInx { a: 0.5, n: 1.5 }).unwrap();
        assert_eq!(f.terms(), &[ExpTerm::new(0.5, c(0.0, 1.5))]);

        assert!(ExpField::make_initial(InitialCondition::ExpInx { n: f64::NAN }).is_err());
    }

    #[test]
    fn add_and_scale() {
        let f = ExpField::sin_x();
        assert_eq!(&f + &ExpField::zero(), f);

        let e = ExpField::exponential(1.0, Complex64::i());
        assert!((&e + &(-&e)).is_empty());

        let g = f.scale(c(0.0, 2.0));
        assert!(close(g.eval(PI / 2.0).unwrap(), c(0.0, 2.0)));
        assert!(f.scale(0.0).is_empty());
    }

    #[test]
    fn multiply_examples() {
        let e = ExpField::exponential(1.0, Complex64::i());
        let e_conj = ExpField::exponential(1.0, -Complex64::i());
        assert_eq!(e.multiply(&e_conj).unwrap(), ExpField::constant(1.0));

        let s = ExpField::sin_x();
        let s2 = s.multiply(&s).unwrap();
        assert!((s2.eval(PI / 4.0).unwrap() - c(0.5, 0.0)).norm() < 1e-15);

        let cos2 = ExpField::cos_x().multiply(&ExpField::cos_x()).unwrap();
        assert!(cos2.approx_eq(&ExpField::cos_squared(), 1e-16));
        assert_eq!(cos2.len(), 3);
    }

    #[test]
    fn multiply_respects_cap() {
        let f = ExpField::from_terms((0..10).map(|k| ExpTerm::new(1.0, c(0.0, k as f64))));
        let g = ExpField::from_terms((0..10).map(|k| ExpTerm::new(1.0, c(0.0, 100.0 * k as f64))));
        let err = f.multiply_capped(&g, 50).unwrap_err();
        assert_eq!(
            err,
            Error::BlowUp {
                op: "multiply",
                terms: 100,
                cap: 50
            }
        );
        assert_eq!(f.multiply(&g).unwrap().len(), 100);
    }

    #[test]
    fn conjugate_examples() {
        let n = 2.0;
        let e = ExpField::exponential(1.0, c(0.0, n));
        assert_eq!(e.conjugate(), ExpField::exponential(1.0, c(0.0, -n)));

        let ch = ExpField::cosh_ax(1.3);
        assert_eq!(ch.conjugate(), ch);

        let is = ExpField::sin_x().scale(Complex64::i());
        assert!(close(is.conjugate().eval(PI / 2.0).unwrap(), c(0.0, -1.0)));
    }

    #[test]
    fn second_derivative() {
        let a = 2.0;
        let ch = ExpField::cosh_ax(a);
        assert!(ch.d2dx2().approx_eq(&ch.scale(a * a), 1e-15));

        let n = 3.0;
        let e = ExpField::exponential(1.0, c(0.0, n));
        assert!(e.d2dx2().approx_eq(&e.scale(-n * n), 1e-15));

        assert!(ExpField::constant(5.0).d2dx2().is_empty());
    }

    #[test]
    fn eval_overflow() {
        let f = ExpField::exponential(1.0, 1000.0);
        assert_eq!(f.eval(1.0), Err(Error::Overflow { x: 1.0 }));
        assert!(f.eval(f64::INFINITY).is_err());
    }

    #[test]
    fn merges_near_equal_rates() {
        let f = ExpField::from_terms([
            ExpTerm::new(1.0, c(0.0, 1.0)),
            ExpTerm::new(1.0, c(1e-13, 2.0)),
            ExpTerm::new(2.0, c(0.0, 1.0 + 1e-13)),
            ExpTerm::new(3.0, c(-1e-13, 2.0)),
        ]);
        assert_eq!(f.len(), 2);
        assert!(close(f.coeff_at(c(0.0, 1.0)), c(3.0, 0.0)));
        assert!(close(f.coeff_at(c(0.0, 2.0)), c(4.0, 0.0)));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let f = ExpField::from_terms([
            ExpTerm::new(1.0, c(1.0, 0.0)),
            ExpTerm::new(1.0, c(0.0, 2.0)),
            ExpTerm::new(1.0, c(0.0, -1.0)),
            ExpTerm::new(1.0, c(-1.0, 5.0)),
        ]);
        let rates: Vec<_> = f.terms().iter().map(|t| t.rate).collect();
        assert_eq!(rates, vec![c(-1.0, 5.0), c(0.0, -1.0), c(0.0, 2.0), c(1.0, 0.0)]);
    }

    #[test]
    fn json_debug_serialization() {
        let f = ExpField::exponential(c(0.5, -1.0), c(0.0, 3.0));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"[{"re_coeff":0.5,"im_coeff":-1.0,"re_rate":0.0,"im_rate":3.0}]"#
        );
        let back: ExpField = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
