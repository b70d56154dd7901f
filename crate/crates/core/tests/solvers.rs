use frdt_core::{
    gamma, max_oracle_error, residual_spectrum, sample, solve, Complex64, Execution, ExpField,
    FractionalSeries, Grid, Problem, ProblemSpec,
};
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn g(x: f64) -> f64 {
    gamma(x).unwrap()
}

fn spec(problem: Problem, alpha: f64, terms: usize) -> ProblemSpec {
    ProblemSpec {
        alpha,
        terms,
        ..ProblemSpec::with_defaults(problem)
    }
}

#[test]
fn lse_cosh_follows_mittag_leffler_pattern() {
    for alpha in [0.3, 0.5, 0.9, 1.0] {
        let s = spec(Problem::LseCosh, alpha, 8);
        let u = solve(&s).unwrap().u;
        let a2 = s.a * s.a;
        for k in 1..=8 {
            let c = (I * a2).powi(k as i32) / g(1.0 + k as f64 * alpha);
            let want = ExpField::cosh_ax(s.a).scale(c);
            let got = &u.coeffs()[k];
            assert!(
                got.approx_eq(&want, 1e-13 * want.max_coeff_magnitude()),
                "alpha={alpha} k={k}: {got}"
            );
        }
    }
}

/// Bracketed closed forms for U_3 and U_4 of the trapped problem.
fn trap_u3_u4(alpha: f64, x: f64) -> (Complex64, Complex64) {
    let (g1, g2, g3, g4) = (
        g(1.0 + alpha),
        g(1.0 + 2.0 * alpha),
        g(1.0 + 3.0 * alpha),
        g(1.0 + 4.0 * alpha),
    );
    let s = x.sin();
    let c2 = (2.0 * x).cos();
    let u3 = 9.0 * I.powi(3) * s / (8.0 * g3) * ((-5.0 + 2.0 * c2) + 2.0 * g2 * s * s / (g1 * g1));
    let u4 = -9.0 * I.powi(4) * s / (16.0 * g4)
        * (-7.0 + 22.0 * c2 - (1.0 + 11.0 * c2) * g2 / (g1 * g1)
            - 12.0 * g3 * s * s / (g1 * g2)
            + 6.0 * g3 * s * s / g1.powi(3));
    (u3, u4)
}

#[test]
fn trap_third_and_fourth_coefficients() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
    for alpha in [0.5, 0.75, 1.0] {
        let u = solve(&spec(Problem::NlseTrap, alpha, 5)).unwrap().u;
        for _ in 0..10 {
            let x = rng.random_range(-PI..PI);
            let (u3, u4) = trap_u3_u4(alpha, x);
            assert!((u.coeffs()[3].eval(x).unwrap() - u3).norm() < 1e-10);
            assert!((u.coeffs()[4].eval(x).unwrap() - u4).norm() < 1e-10);
        }
    }
}

#[test]
fn trap_unit_order_is_exponential_series() {
    let u = solve(&spec(Problem::NlseTrap, 1.0, 12)).unwrap().u;
    let mut factorial = 1.0;
    for k in 0..=12 {
        if k > 0 {
            factorial *= k as f64;
        }
        let want = ExpField::sin_x().scale((-1.5 * I).powi(k as i32) / factorial);
        assert!(u.coeffs()[k].approx_eq(&want, 1e-12), "k={k}");
    }
}

#[test]
fn coupled_first_coefficients() {
    for alpha in [0.9, 1.0] {
        let s = spec(Problem::Coupled, alpha, 3);
        let sol = solve(&s).unwrap();
        let (a, b, n, m) = (s.a, s.b, s.n, s.m);
        let wu = 2.0 * a * a + 2.0 * b * b - n * n;
        let wv = 2.0 * a * a + 2.0 * b * b - m * m;
        let eu = |c: Complex64| ExpField::exponential(c, Complex64::new(0.0, n));
        let ev = |c: Complex64| ExpField::exponential(c, Complex64::new(0.0, m));
        let v = sol.v.unwrap();
        let g1 = g(1.0 + alpha);
        let g2 = g(1.0 + 2.0 * alpha);
        assert!(sol.u.coeffs()[1].approx_eq(&eu(I * a * wu / g1), 1e-12));
        assert!(v.coeffs()[1].approx_eq(&ev(I * b * wv / g1), 1e-12));
        assert!(sol.u.coeffs()[2].approx_eq(&eu((-a * wu * wu / g2).into()), 1e-12));
        assert!(v.coeffs()[2].approx_eq(&ev((-b * wv * wv / g2).into()), 1e-12));
    }
}

#[test]
fn linear_problems_match_mittag_leffler_closed_forms() {
    let x = Grid::new(-PI, PI, 33).unwrap();
    let t = Grid::new(0.0, 0.01, 11).unwrap();
    for problem in [Problem::LseCosh, Problem::LseExp] {
        for alpha in [0.5, 0.9, 1.0] {
            let s = spec(problem, alpha, 25);
            let table = sample(&solve(&s).unwrap(), x, t, Execution::default()).unwrap();
            let err = max_oracle_error(&s, &table).unwrap();
            assert!(err <= 1e-10, "{problem} alpha={alpha}: {err:e}");
        }
    }
}

#[test]
fn nonlinear_problems_match_closed_forms_at_unit_order() {
    let t = Grid::new(0.0, 0.5, 21).unwrap();
    for problem in [Problem::NlsePlane, Problem::NlseTrap, Problem::Coupled] {
        let s = spec(problem, 1.0, 20);
        let x = if problem == Problem::Coupled {
            Grid::new(-10.0, 10.0, 41).unwrap()
        } else {
            Grid::new(-PI, PI, 33).unwrap()
        };
        let table = sample(&solve(&s).unwrap(), x, t, Execution::default()).unwrap();
        let err = max_oracle_error(&s, &table).unwrap();
        assert!(err <= 1e-8, "{problem}: {err:e}");
    }
}

#[test]
fn residuals_vanish_for_every_problem() {
    for problem in Problem::ALL {
        for alpha in [0.5, 0.75, 1.0] {
            let s = spec(problem, alpha, 12);
            let r = residual_spectrum(&s, &solve(&s).unwrap()).unwrap();
            assert_eq!(r.u.len(), 12);
            assert!(r.max_abs() <= 1e-9, "{problem} alpha={alpha}: {:e}", r.max_abs());
        }
    }
}

#[test]
fn truncation_error_is_non_increasing() {
    let t = 0.01;
    for problem in [Problem::LseCosh, Problem::LseExp] {
        for alpha in [0.5, 0.9, 1.0] {
            let mut previous = f64::INFINITY;
            for terms in 5..=25 {
                let s = spec(problem, alpha, terms);
                let series = FractionalSeries::new(solve(&s).unwrap().u);
                let mut err: f64 = 0.0;
                for x in [-PI, -1.0, 0.0, 0.5, PI] {
                    let exact = frdt_core::oracle(&s, x, t).unwrap().u;
                    err = err.max((series.evaluate(x, t).unwrap() - exact).norm());
                }
                assert!(err <= previous + 1e-12, "{problem} alpha={alpha} K={terms}");
                previous = err;
            }
        }
    }
}

#[test]
fn golden_spectrum_json() {
    // U_1 of e^{ix} under the linear equation at alpha = 1 is -i e^{ix}.
    let s = ProblemSpec {
        n: 1.0,
        ..spec(Problem::LseExp, 1.0, 1)
    };
    let u = solve(&s).unwrap().u;
    let json = serde_json::to_string(&u.coeffs()[1]).unwrap();
    assert_eq!(
        json,
        r#"[{"re_coeff":-0.0,"im_coeff":-1.0,"re_rate":0.0,"im_rate":1.0}]"#
    );
}
