//! One report over the invariant suites of every module, each check
//! carrying its measured deviation and the tolerance it is held to.

use crate::laplace::{density_table, InversionSpec};
use crate::local::{phi, s3_closed, s_expansion_with, PARITY_TOL};
use crate::profile::{
    mean_perimeter_constant, mu_mass, psi_slope_at_zero, rho, rho_lambda, rho_mass, small_s_ratio_slope,
    QuadratureSpec,
};
use crate::scaling::residual::{h_ode, identity_points, p_identity, pde_lambda0, primitive_derivative, riccati};
use crate::scaling::{
    f_lambda0_closed, h_tilde_with, standard, PolynomialFamily, ScalingPoint, Q_CHECKSUMS,
};
use crate::series::{expected_zl, Rational, XstTable};
use crate::special::{exp_e1_scaled, hyp2f1_unit, hyp2f1_unit_laplace};
use num_complex::Complex64;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// NaN when the check could not be evaluated.
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, measured: crate::Result<f64>, tolerance: f64) -> Self {
        let name = name.into();
        match measured {
            Ok(m) => Check {
                suite,
                name,
                measured: m,
                tolerance,
                passed: m <= tolerance,
                error: None,
            },
            Err(e) => Check {
                suite,
                name,
                measured: f64::NAN,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }

    fn exact(suite: &'static str, name: impl Into<String>, holds: crate::Result<bool>) -> Self {
        Check::new(suite, name, holds.map(|h| if h { 0.0 } else { 1.0 }), 0.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    /// Flip the sign of one coefficient of the Q table (fault injection).
    pub corrupt_q: bool,
}

/// The Q table with one coefficient sign-flipped.
pub fn corrupted_tables() -> PolynomialFamily {
    let mut t = standard().clone();
    t.q.rows_mut()[6][3] *= -1;
    t
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn series_suite() -> Vec<Check> {
    const SUITE: &str = "series";
    let table = XstTable::new(10);
    let one = Rational::one();
    let mut out = Vec::new();
    for s in 1..=5 {
        let holds = table
            .f(s)
            .and_then(|f| Ok(f.at_z(&one) == table.f_closed_z1(s)?));
        out.push(Check::exact(SUITE, format!("F_{s} at z = 1 through g^10"), holds));
    }
    let holds = (1..=4).try_fold(true, |acc, s| {
        (1..=4).try_fold(acc, |acc, t| Ok(acc && table.x_st(s, t)?.at_z(&one) == table.x_st_closed_z1(s, t)?))
    });
    out.push(Check::exact(SUITE, "X_{s,t} at z = 1 for s, t <= 4", holds));
    let holds = expected_zl(8, 2).map(|p| p.eval(&one) == one && p.is_nonnegative());
    out.push(Check::exact(SUITE, "expected_zl(8, 2) is a distribution", holds));
    out
}

fn special_suite() -> Vec<Check> {
    const SUITE: &str = "special";
    // e E1(1) from a 30-digit evaluation
    let e1 = exp_e1_scaled(Complex64::new(1.0, 0.0)).map(|v| rel(v.re, 0.596_347_362_323_194_1));
    let b = Complex64::new(2.5, 0.7);
    let sigma = Complex64::new(0.93, 0.05);
    let two = hyp2f1_unit(b, sigma)
        .and_then(|d| Ok((d - hyp2f1_unit_laplace(b, -sigma.ln())?).norm() / d.norm()));
    vec![
        Check::new(SUITE, "e^1 E1(1)", e1, 1e-13),
        Check::new(SUITE, "2F1 series against Laplace form at |sigma| = 0.93", two, 1e-12),
    ]
}

fn scaling_suite(tables: &PolynomialFamily) -> Vec<Check> {
    const SUITE: &str = "scaling";
    let mut out = vec![
        Check::exact(SUITE, "Q table checksums", Ok(tables.q_checksums() == Q_CHECKSUMS)),
        Check::exact(SUITE, "P = (W(1 - sigma))^2 d/dsigma(sigma U/((1 - sigma) W))", Ok(p_identity(tables, &identity_points()))),
    ];
    let a_grid = [
        Complex64::new(0.7, 0.0),
        Complex64::new(1.0, -1.0) * 3f64.sqrt(),
        Complex64::new(1.0, 1.0) * 6f64.sqrt(),
    ];
    let mut worst = [0.0f64; 4];
    let mut err = None;
    for s in [0.3, 1.0, 3.0] {
        for a in a_grid {
            for l in [0.0, 0.5, 2.0] {
                let r = (|| -> crate::Result<[f64; 4]> {
                    let p = ScalingPoint::new(s, a, l)?;
                    Ok([
                        pde_lambda0(s, 1.3 * s, a)?.relative(),
                        riccati(&p)?.relative(),
                        h_ode(&p)?.relative(),
                        primitive_derivative(tables, &p)?.relative(),
                    ])
                })();
                match r {
                    Ok(v) => {
                        for (w, x) in worst.iter_mut().zip(v) {
                            *w = w.max(x);
                        }
                    }
                    Err(e) => err = Some(e),
                }
            }
        }
    }
    let names = [
        ("zero-lambda PDE residual", 1e-9),
        ("Riccati residual", 1e-8),
        ("H-equation residual", 1e-7),
        ("dC/dsigma = M", 1e-7),
    ];
    for ((name, tol), w) in names.iter().zip(worst) {
        let m = match &err {
            Some(e) => Err(e.clone()),
            None => Ok(w),
        };
        out.push(Check::new(SUITE, *name, m, *tol));
    }
    let reduction = (|| -> crate::Result<f64> {
        let mut worst: f64 = 0.0;
        for s in [0.1, 0.5, 1.0, 2.0, 4.0] {
            for a in [0.5, 1.0, 2.0] {
                let a = Complex64::new(a, 0.0);
                let sigma = (-a * s).exp();
                let got = a.powu(3) * h_tilde_with(tables, sigma, Complex64::new(1.0, 0.0))? / 3.0;
                let want = f_lambda0_closed(s, a);
                worst = worst.max((got - want).norm() / want.norm());
            }
        }
        Ok(worst)
    })();
    out.push(Check::new(SUITE, "zero-lambda reduction of H~", reduction, 1e-10));
    out
}

fn local_suite(tables: &PolynomialFamily) -> Vec<Check> {
    const SUITE: &str = "local";
    let grid: Vec<f64> = (0..10).map(|k| 0.01 * 1e4f64.powf(k as f64 / 9.0)).collect();
    let dual = grid.iter().try_fold(0.0f64, |acc, &w| {
        let e = s_expansion_with(tables, w)?;
        e.check_parity(PARITY_TOL)?;
        Ok(acc.max(rel(e.coefficient(3), s3_closed(w)?)))
    });
    vec![
        Check::exact(SUITE, "Phi(0) = 1", phi(0.0).map(|v| v == 1.0)),
        Check::new(SUITE, "closed form against series route on [0.01, 100]", dual, 1e-8),
    ]
}

fn profile_suite() -> Vec<Check> {
    const SUITE: &str = "profile";
    let spec = QuadratureSpec::default();
    let two_route = [0.1, 0.5, 1.0, 2.0, 3.0]
        .iter()
        .try_fold(0.0f64, |acc, &s| Ok(acc.max((rho(s, &spec)? - rho_lambda(s, 0.0, &spec)?).abs())));
    vec![
        Check::new(SUITE, "int rho dS = 1", rho_mass(&spec).map(|m| (m - 1.0).abs()), 1e-6),
        Check::new(
            SUITE,
            "int mu dS = 12 sqrt(pi)/35",
            mu_mass(&spec).map(|m| (m - mean_perimeter_constant()).abs()),
            1e-6,
        ),
        Check::new(SUITE, "rho against rho(S, 0) on [0.1, 3]", two_route, 1e-8),
        Check::new(
            SUITE,
            "psi'(0) against the small-S slope",
            psi_slope_at_zero(&spec).map(|v| rel(v, small_s_ratio_slope())),
            1e-5,
        ),
    ]
}

fn laplace_suite() -> Vec<Check> {
    const SUITE: &str = "laplace";
    let grid: Vec<f64> = (0..25).map(|k| 0.01 * 5e3f64.powf(k as f64 / 24.0)).collect();
    let table = density_table(&grid, &InversionSpec::default());
    let large = density_table(&[100.0], &InversionSpec::default()).map(|t| (t.rows[0].large_tail_ratio - 1.0).abs());
    vec![
        Check::new(SUITE, "talbot against gaver on [0.01, 50]", table.as_ref().map(|t| t.cross_residual).map_err(Clone::clone), 1e-4),
        Check::new(SUITE, "large-l tail at l = 100", large, 2e-2),
    ]
}

pub fn run(options: VerifyOptions) -> Report {
    let corrupted;
    let tables = if options.corrupt_q {
        corrupted = corrupted_tables();
        &corrupted
    } else {
        standard()
    };
    let suites: Vec<Box<dyn Fn() -> Vec<Check> + Sync + '_>> = vec![
        Box::new(series_suite),
        Box::new(special_suite),
        Box::new(move || scaling_suite(tables)),
        Box::new(move || local_suite(tables)),
        Box::new(profile_suite),
        Box::new(laplace_suite),
    ];
    let checks = suites.par_iter().map(|f| f()).collect::<Vec<_>>().concat();
    Report { checks }
}
