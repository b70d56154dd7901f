//! Problem definitions and the recurrence drivers that generate spectra for
//! the supported equation families:
//!
//! * `Lse`      `i D_t^α u + u_xx = 0`
//! * `Nlse`     `i D_t^α u + u_xx + σ|u|²u = 0`
//! * `NlseTrap` `i D_t^α u = -½u_xx + u cos²x + |u|²u`
//! * `Coupled`  `i D_t^α u + u_xx + σ(|u|² + |v|²)u = 0` and the same for `v`

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expfield::{ExpField, InitialCondition};
use crate::special::gamma_ratio;
use crate::spectrum::{conv3_slices, sum_fields, Spectrum};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Equation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Lse,
    Nlse,
    NlseTrap,
    Coupled,
}

/// The five benchmark problems: a family together with its initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// Linear, `u(x, 0) = 1 + cosh(ax)`.
    LseCosh,
    /// Linear, `u(x, 0) = e^{inx}`.
    LseExp,
    /// Cubic, `u(x, 0) = e^{inx}`.
    NlsePlane,
    /// Cubic with a `cos²x` trap, `u(x, 0) = sin x`.
    NlseTrap,
    /// Coupled cubic system, `u(x, 0) = a e^{inx}`, `v(x, 0) = b e^{imx}`.
    Coupled,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::LseCosh,
        Problem::LseExp,
        Problem::NlsePlane,
        Problem::NlseTrap,
        Problem::Coupled,
    ];

    pub fn family(self) -> Family {
        match self {
            Problem::LseCosh | Problem::LseExp => Family::Lse,
            Problem::NlsePlane => Family::Nlse,
            Problem::NlseTrap => Family::NlseTrap,
            Problem::Coupled => Family::Coupled,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::LseCosh => "lse-cosh",
            Problem::LseExp => "lse-exp",
            Problem::NlsePlane => "nlse-plane",
            Problem::NlseTrap => "nlse-trap",
            Problem::Coupled => "coupled",
        }
    }

    pub fn is_coupled(self) -> bool {
        self == Problem::Coupled
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown problem '{s}' (expected one of lse-cosh, lse-exp, nlse-plane, nlse-trap, coupled)"
                ))
            })
    }
}

/// Problem parameters. Fields unused by a family are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub alpha: f64,
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
    pub n: f64,
    pub m: f64,
    /// Truncation order `K`.
    pub terms: usize,
}

impl ProblemSpec {
    /// Parameters used for the problem in the reference figures.
    pub fn with_defaults(problem: Problem) -> Self {
        let base = ProblemSpec {
            problem,
            alpha: 0.9,
            sigma: 0.0,
            a: 2.0,
            b: 0.0,
            n: 1.0,
            m: 0.0,
            terms: 25,
        };
        match problem {
            Problem::LseCosh => base,
            Problem::LseExp => ProblemSpec {
                alpha: 0.5,
                n: 3.0,
                ..base
            },
            Problem::NlsePlane => ProblemSpec {
                sigma: 2.0,
                n: 1.0,
                ..base
            },
            Problem::NlseTrap => ProblemSpec {
                alpha: 0.5,
                terms: 16,
                ..base
            },
            Problem::Coupled => ProblemSpec {
                sigma: 2.0,
                a: 0.5,
                b: 0.5,
                n: 1.0,
                m: 1.5,
                terms: 12,
                ..base
            },
        }
    }

    pub fn family(&self) -> Family {
        self.problem.family()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Usage(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if self.terms < 1 {
            return Err(Error::Usage("terms must be at least 1".into()));
        }
        for (name, v) in [
            ("sigma", self.sigma),
            ("a", self.a),
            ("b", self.b),
            ("n", self.n),
            ("m", self.m),
        ] {
            if !v.is_finite() {
                return Err(Error::Usage(format!("{name} must be finite, got {v}")));
            }
        }
        if self.problem.is_coupled() && self.sigma != 2.0 {
            return Err(Error::Usage(format!(
                "the coupled problem is defined for sigma = 2, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// Initial data `(u(x,0), v(x,0))`; `v` is present only for the coupled system.
    pub fn initial(&self) -> Result<(ExpField, Option<ExpField>)> {
        let u0 = match self.problem {
            Problem::LseCosh => InitialCondition::OnePlusCoshAx { a: self.a },
            Problem::LseExp | Problem::NlsePlane => InitialCondition::ExpInx { n: self.n },
            Problem::NlseTrap => InitialCondition::SinX,
            Problem::Coupled => InitialCondition::AExpInx {
                a: self.a,
                n: self.n,
            },
        };
        let u0 = ExpField::make_initial(u0)?;
        let v0 = if self.problem.is_coupled() {
            Some(ExpField::make_initial(InitialCondition::AExpInx {
                a: self.b,
                n: self.m,
            })?)
        } else {
            None
        };
        Ok((u0, v0))
    }
}

/// Computed spectra of a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub u: Spectrum,
    pub v: Option<Spectrum>,
}

/// Solves the problem from its own initial data.
pub fn solve(spec: &ProblemSpec) -> Result<Solution> {
    spec.validate()?;
    let (u0, v0) = spec.initial()?;
    match spec.family() {
        Family::Lse => Ok(Solution {
            u: solve_lse(spec, u0)?,
            v: None,
        }),
        Family::Nlse => Ok(Solution {
            u: solve_nlse(spec, u0)?,
            v: None,
        }),
        Family::NlseTrap => Ok(Solution {
            u: solve_nlse_trap(spec, u0)?,
            v: None,
        }),
        Family::Coupled => {
            let v0 = v0.ok_or_else(|| Error::Usage("coupled problem needs v(x, 0)".into()))?;
            let (u, v) = solve_coupled(spec, u0, v0)?;
            Ok(Solution { u, v: Some(v) })
        }
    }
}

/// `Γ(1+kα) / Γ(1+(k+1)α)`, the factor that isolates `U_{k+1}`.
fn step_factor(alpha: f64, k: usize) -> Result<f64> {
    let kf = k as f64;
    gamma_ratio(1.0 + kf * alpha, 1.0 + (kf + 1.0) * alpha)
}

fn expect_family(spec: &ProblemSpec, family: Family) -> Result<()> {
    spec.validate()?;
    if spec.family() != family {
        return Err(Error::Usage(format!(
            "problem {} belongs to {:?}, not {:?}",
            spec.problem,
            spec.family(),
            family
        )));
    }
    Ok(())
}

/// Runs `U_{k+1} = step_factor(k) · i · rhs(U_0..=U_k)` for `k < K`.
fn drive<F>(spec: &ProblemSpec, u0: ExpField, mut rhs: F) -> Result<Spectrum>
where
    F: FnMut(&[ExpField], &[ExpField], usize) -> Result<ExpField>,
{
    let mut coeffs = vec![u0];
    let mut conj = vec![coeffs[0].conjugate()];
    for k in 0..spec.terms {
        let next = rhs(&coeffs, &conj, k)?.scale(I * step_factor(spec.alpha, k)?);
        conj.push(next.conjugate());
        coeffs.push(next);
    }
    Spectrum::new(spec.alpha, coeffs)
}

/// Linear equation: `U_{k+1} = Γ(1+kα)/Γ(1+(k+1)α) · i U_k''`.
pub fn solve_lse(spec: &ProblemSpec, u0: ExpField) -> Result<Spectrum> {
    expect_family(spec, Family::Lse)?;
    drive(spec, u0, |u, _, k| Ok(u[k].d2dx2()))
}

/// Cubic equation: `U_{k+1} = ratio · i (U_k'' + σ Σ Ū U U)`.
pub fn solve_nlse(spec: &ProblemSpec, u0: ExpField) -> Result<Spectrum> {
    expect_family(spec, Family::Nlse)?;
    let sigma = spec.sigma;
    drive(spec, u0, |u, ubar, k| {
        let mut rhs = u[k].d2dx2();
        if sigma != 0.0 {
            rhs = &rhs + &conv3_slices(ubar, u, u, k)?.scale(sigma);
        }
        Ok(rhs)
    })
}

/// Trapped cubic equation:
/// `U_{k+1} = ratio · i (½U_k'' − U_k cos²x − Σ Ū U U)`.
pub fn solve_nlse_trap(spec: &ProblemSpec, u0: ExpField) -> Result<Spectrum> {
    expect_family(spec, Family::NlseTrap)?;
    let trap = ExpField::cos_squared();
    drive(spec, u0, |u, ubar, k| {
        let potential = u[k].multiply(&trap)?;
        let cubic = conv3_slices(ubar, u, u, k)?;
        Ok(sum_fields(&[
            u[k].d2dx2().scale(0.5),
            -&potential,
            -&cubic,
        ]))
    })
}

/// Coupled system, advanced in lockstep:
/// `U_{k+1} = ratio · i (U_k'' + σ[Σ Ū U U + Σ V̄ V U])`, symmetrically for `V`.
pub fn solve_coupled(
    spec: &ProblemSpec,
    u0: ExpField,
    v0: ExpField,
) -> Result<(Spectrum, Spectrum)> {
    expect_family(spec, Family::Coupled)?;
    let sigma = spec.sigma;
    let mut u = vec![u0];
    let mut v = vec![v0];
    let mut ubar = vec![u[0].conjugate()];
    let mut vbar = vec![v[0].conjugate()];
    for k in 0..spec.terms {
        let factor = I * step_factor(spec.alpha, k)?;
        let next_u = sum_fields(&[
            u[k].d2dx2(),
            conv3_slices(&ubar, &u, &u, k)?.scale(sigma),
            conv3_slices(&vbar, &v, &u, k)?.scale(sigma),
        ])
        .scale(factor);
        let next_v = sum_fields(&[
            v[k].d2dx2(),
            conv3_slices(&ubar, &u, &v, k)?.scale(sigma),
            conv3_slices(&vbar, &v, &v, k)?.scale(sigma),
        ])
        .scale(factor);
        ubar.push(next_u.conjugate());
        vbar.push(next_v.conjugate());
        u.push(next_u);
        v.push(next_v);
    }
    Ok((Spectrum::new(spec.alpha, u)?, Spectrum::new(spec.alpha, v)?))
}
