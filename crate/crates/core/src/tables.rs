//! Row builders behind the command-line tables. Rows are computed in
//! parallel and returned in grid order.

use crate::error::{Error, Result};
use crate::laplace::DensityRow;
use crate::local::{phi, phi_large_omega, phi_small_omega};
use crate::profile::{
    expected_perimeter_ratio, mu, psi, ratio_large_s, ratio_small_s, rho, rho_lambda, QuadratureSpec,
};
use rayon::prelude::*;

/// A table row as named floating-point columns.
pub trait Row {
    fn header() -> &'static [&'static str];
    fn values(&self) -> Vec<f64>;
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header line plus one line per row, LF-terminated.
pub fn to_csv<R: Row>(rows: &[R]) -> String {
    let mut out = R::header().join(",");
    out.push('\n');
    for r in rows {
        let line: Vec<String> = r.values().into_iter().map(format_value).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileRow {
    pub s: f64,
    pub rho: f64,
    pub mu: f64,
    pub ratio: f64,
    pub small_s_asymptote: f64,
    pub large_s_asymptote: f64,
}

impl Row for ProfileRow {
    fn header() -> &'static [&'static str] {
        &["S", "rho", "mu", "ratio", "small_S_asymptote", "large_S_asymptote"]
    }
    fn values(&self) -> Vec<f64> {
        vec![self.s, self.rho, self.mu, self.ratio, self.small_s_asymptote, self.large_s_asymptote]
    }
}

/// Largest `S` accepted by the profile table; beyond it `rho` sinks into the
/// rounding noise of its integrand.
pub const PROFILE_S_MAX: f64 = 6.0;

pub fn profile_rows(grid: &[f64], spec: &QuadratureSpec) -> Result<Vec<ProfileRow>> {
    if grid.iter().any(|&s| !(s > 0.0 && s <= PROFILE_S_MAX)) {
        return Err(Error::Grid(format!("S grid must lie in (0, {PROFILE_S_MAX}]")));
    }
    grid.par_iter()
        .map(|&s| {
            Ok(ProfileRow {
                s,
                rho: rho(s, spec)?,
                mu: mu(s, spec)?,
                ratio: expected_perimeter_ratio(s, spec)?,
                small_s_asymptote: ratio_small_s(s),
                large_s_asymptote: ratio_large_s(s),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingLawRow {
    pub s: f64,
    pub lambda: f64,
    /// `E[e^{-lambda L / N^{1/2}}]` at distance `S N^{1/4}`.
    pub e: f64,
    /// `(1 - E) / S`, which tends to `psi(lambda)` as `S -> 0`.
    pub slope: f64,
    pub psi: f64,
}

impl Row for ScalingLawRow {
    fn header() -> &'static [&'static str] {
        &["S", "lambda", "E", "one_minus_E_over_S", "psi"]
    }
    fn values(&self) -> Vec<f64> {
        vec![self.s, self.lambda, self.e, self.slope, self.psi]
    }
}

/// All `(S, lambda)` pairs, `lambda` varying fastest.
pub fn scaling_law_rows(s_grid: &[f64], lambda_grid: &[f64], spec: &QuadratureSpec) -> Result<Vec<ScalingLawRow>> {
    if s_grid.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::Grid("S grid must be positive".into()));
    }
    if lambda_grid.iter().any(|&l| !(l >= 0.0 && l.is_finite())) {
        return Err(Error::Grid("lambda grid must be non-negative".into()));
    }
    let psis: Vec<f64> = lambda_grid
        .par_iter()
        .map(|&l| if l == 0.0 { Ok(0.0) } else { psi(l, spec) })
        .collect::<Result<_>>()?;
    let rhos: Vec<f64> = s_grid.par_iter().map(|&s| rho(s, spec)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..s_grid.len())
        .flat_map(|i| (0..lambda_grid.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let (s, l) = (s_grid[i], lambda_grid[j]);
            // rho(S, 0) is rho(S) by definition
            let e = if l == 0.0 { 1.0 } else { rho_lambda(s, l, spec)? / rhos[i] };
            Ok(ScalingLawRow {
                s,
                lambda: l,
                e,
                slope: (1.0 - e) / s,
                psi: psis[j],
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalLawRow {
    pub omega: f64,
    pub phi: f64,
    pub large_omega_asymptote: f64,
    pub small_omega_asymptote: f64,
}

impl Row for LocalLawRow {
    fn header() -> &'static [&'static str] {
        &["omega", "Phi", "large_omega_asymptote", "small_omega_asymptote"]
    }
    fn values(&self) -> Vec<f64> {
        vec![self.omega, self.phi, self.large_omega_asymptote, self.small_omega_asymptote]
    }
}

pub fn local_law_rows(grid: &[f64]) -> Result<Vec<LocalLawRow>> {
    grid.par_iter()
        .map(|&omega| {
            Ok(LocalLawRow {
                omega,
                phi: phi(omega)?,
                large_omega_asymptote: phi_large_omega(omega),
                small_omega_asymptote: phi_small_omega(omega),
            })
        })
        .collect()
}

impl Row for DensityRow {
    fn header() -> &'static [&'static str] {
        &["l", "P", "P_cross", "small_l_ratio", "large_l_ratio"]
    }
    fn values(&self) -> Vec<f64> {
        vec![self.ell, self.p, self.cross, self.small_tail_ratio, self.large_tail_ratio]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_the_grid() {
        let spec = QuadratureSpec::default();
        let rows = profile_rows(&[0.5, 1.0, 2.0], &spec).unwrap();
        assert_eq!(rows.iter().map(|r| r.s).collect::<Vec<_>>(), vec![0.5, 1.0, 2.0]);
        assert_eq!(rows[1].values().len(), ProfileRow::header().len());
        assert!(profile_rows(&[0.5, 7.0], &spec).is_err());
        let law = scaling_law_rows(&[0.5, 1.0], &[0.0, 1.0, 2.0], &spec).unwrap();
        assert_eq!(law.len(), 6);
        assert_eq!((law[4].s, law[4].lambda), (1.0, 1.0));
        assert!(law.iter().filter(|r| r.lambda == 0.0).all(|r| r.e == 1.0));
        assert!(law.iter().all(|r| (0.0..=1.0).contains(&r.e)));
        let local = local_law_rows(&[0.0, 1.0]).unwrap();
        assert_eq!(local[0].phi, 1.0);
    }
}
