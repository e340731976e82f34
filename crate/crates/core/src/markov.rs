//! Best constants `M_{n,k}`, extremal polynomials, closed forms, bounds and
//! asymptotic estimates.
//!
//! `M_{n,k}^2 = lambda_max(B) = 1 / lambda_min(C)` where `B = A^T A` and `C`
//! is the inverse Gram matrix of `A = A_{n,k}`. The structured paths
//! (Laguerre tridiagonal and five-diagonal forms, the Gegenbauer odd/even
//! split) only change how `C` and its smallest eigenpair are obtained.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diffops::{self, DiffCoeffSet, GegenbauerCase, SplitPair};
use crate::linalg::{self, Extreme, GramSide, UpperTriangular};
use crate::orthopoly::Weight;
use crate::special_fn::bessel_first_zero;
use crate::sum::norm2;
use crate::{Error, Result};

/// How the constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    #[serde(rename = "B_route")]
    BRoute,
    #[serde(rename = "C_route")]
    CRoute,
    Tridiagonal,
    /// Five-diagonal Laguerre `k = 2, s = 0` matrix.
    Banded,
    Split,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::BRoute => "B_route",
            Method::CRoute => "C_route",
            Method::Tridiagonal => "tridiagonal",
            Method::Banded => "banded",
            Method::Split => "split",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Requested solution path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Closed form, then structured path, then the `C` route.
    #[default]
    Auto,
    B,
    C,
}

/// A best constant with its extremal polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovResult {
    pub weight: Weight,
    pub n: usize,
    pub k: usize,
    /// `M_{n,k}`.
    pub constant: f64,
    /// `lambda_max(B)` for the `B` route and closed forms, `lambda_min(C)`
    /// otherwise.
    pub eigenvalue: f64,
    pub method: Method,
    /// `c_k, ..., c_n` in the orthonormal basis: unit norm, coefficient of
    /// `q_n` (or the last nonzero one) positive.
    pub extremal_coeffs: Vec<f64>,
}

impl MarkovResult {
    /// Coefficients `c_0, ..., c_n` with zeros below degree `k`.
    pub fn full_coeffs(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.k];
        out.extend_from_slice(&self.extremal_coeffs);
        out
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

/// Unit norm, last significant coefficient positive.
fn normalize(mut c: Vec<f64>) -> Result<Vec<f64>> {
    let nrm = norm2(&c);
    if !(nrm > 0.0 && nrm.is_finite()) {
        return Err(Error::Convergence("degenerate extremal vector".into()));
    }
    c.iter_mut().for_each(|x| *x /= nrm);
    let big = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(last) = c.iter().rev().find(|x| x.abs() > 1e-12 * big) {
        if *last < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(c)
}

/// `M_{n,k}` for any classical weight.
pub fn markov_constant(weight: Weight, n: usize, k: usize, route: Route) -> Result<MarkovResult> {
    weight.validate()?;
    check_nk(n, k)?;
    match route {
        Route::B => b_route(&diffops::diff_coeffs(weight, n, k)?),
        Route::C => c_route(&diffops::diff_coeffs(weight, n, k)?),
        Route::Auto => match weight {
            Weight::Hermite => hermite_closed_form(n, k),
            Weight::Laguerre { s } if k == 1 => laguerre_tridiagonal(n, s),
            Weight::Laguerre { s } if k == 2 && s == 0.0 => laguerre_banded(n),
            Weight::Jacobi { alpha, beta } if k == 1 && alpha == beta => {
                match gegenbauer_split_solve(n, alpha) {
                    Err(Error::Structure(_)) => c_route(&diffops::diff_coeffs(weight, n, k)?),
                    other => other,
                }
            }
            _ => c_route(&diffops::diff_coeffs(weight, n, k)?),
        },
    }
}

/// Largest eigenpair of `B = A^T A`; the constant is `||A v||`.
fn b_route(set: &DiffCoeffSet) -> Result<MarkovResult> {
    let b = diffops::b_matrix(set);
    let pair = linalg::dense_sym_eigen_extreme(&b, Extreme::Max)?;
    let c = normalize(pair.vector)?;
    let m = norm2(&set.matrix.mul_vec(&c));
    Ok(MarkovResult {
        weight: set.weight,
        n: set.n,
        k: set.k,
        constant: m,
        eigenvalue: m * m,
        method: Method::BRoute,
        extremal_coeffs: c,
    })
}

/// Smallest eigenpair of `C`, mapped back to `c` through `A`.
fn c_route(set: &DiffCoeffSet) -> Result<MarkovResult> {
    let side = diffops::c_side(set.weight);
    let inv = linalg::upper_tri_inverse(&set.matrix)?;
    let cm = linalg::gram(side, &inv);
    let pair = linalg::dense_sym_eigen_extreme(&cm, Extreme::Min)?;
    let c = match side {
        // y = A c
        GramSide::Left => set.matrix.solve(&pair.vector)?,
        GramSide::Right => pair.vector,
    };
    let c = normalize(c)?;
    let m = norm2(&set.matrix.mul_vec(&c));
    Ok(MarkovResult {
        weight: set.weight,
        n: set.n,
        k: set.k,
        constant: m,
        eigenvalue: 1.0 / (m * m),
        method: Method::CRoute,
        extremal_coeffs: c,
    })
}

/// `C = F^T F` with `F` the given factor; `y` its eigenvector gives
/// `c = F y` and `M = ||y|| / ||F y||`.
fn from_factor(weight: Weight, n: usize, k: usize, method: Method, factor: &UpperTriangular, y: &[f64]) -> Result<MarkovResult> {
    let c = factor.mul_vec(y);
    let m = norm2(y) / norm2(&c);
    Ok(MarkovResult {
        weight,
        n,
        k,
        constant: m,
        eigenvalue: 1.0 / (m * m),
        method,
        extremal_coeffs: normalize(c)?,
    })
}

fn laguerre_tridiagonal(n: usize, s: f64) -> Result<MarkovResult> {
    let t = diffops::laguerre_c_tridiag(n, s)?;
    let pair = linalg::tridiag_eigen_extreme(&t, Extreme::Min)?;
    let f = diffops::laguerre_c1_factor(n, s)?;
    from_factor(Weight::Laguerre { s }, n, 1, Method::Tridiagonal, &f, &pair.vector)
}

fn laguerre_banded(n: usize) -> Result<MarkovResult> {
    let c = diffops::laguerre_c_pentadiag(n)?;
    let pair = linalg::dense_sym_eigen_extreme(&c, Extreme::Min)?;
    let f = diffops::laguerre_c2_factor(n)?;
    from_factor(Weight::Laguerre { s: 0.0 }, n, 2, Method::Banded, &f, &pair.vector)
}

/// Splits `C_n` for the Gegenbauer weight, closed forms for the named
/// cases and the assembled matrix otherwise.
pub fn gegenbauer_split_pair(n: usize, alpha: f64) -> Result<SplitPair> {
    match GegenbauerCase::from_alpha(alpha) {
        Some(case) => diffops::gegenbauer_split(n, case),
        None => diffops::split_generic(&diffops::c_matrix(&diffops::jacobi_diff(n, 1, alpha, alpha)?)?),
    }
}

fn gegenbauer_split_solve(n: usize, alpha: f64) -> Result<MarkovResult> {
    let pair = gegenbauer_split_pair(n, alpha)?;
    let mut best = (linalg::tridiag_eigen_extreme(&pair.odd, Extreme::Min)?, false);
    if let Some(even) = &pair.even {
        let e = linalg::tridiag_eigen_extreme(even, Extreme::Min)?;
        if e.value < best.0.value {
            best = (e, true);
        }
    }
    let (eig, even) = best;
    let mut c = vec![0.0; n];
    for (p, v) in pair.positions(even).into_iter().zip(&eig.vector) {
        c[p] = *v;
    }
    Ok(MarkovResult {
        weight: Weight::Jacobi { alpha, beta: alpha },
        n,
        k: 1,
        constant: 1.0 / eig.value.sqrt(),
        eigenvalue: eig.value,
        method: Method::Split,
        extremal_coeffs: normalize(c)?,
    })
}

/// Hermite: `M_{n,k} = 2^{k/2} sqrt(n!/(n-k)!)`, attained at `q_n`.
pub fn hermite_closed_form(n: usize, k: usize) -> Result<MarkovResult> {
    check_nk(n, k)?;
    let m: f64 = ((n - k + 1)..=n).map(|j| (2.0 * j as f64).sqrt()).product();
    let mut c = vec![0.0; n - k + 1];
    c[n - k] = 1.0;
    Ok(MarkovResult {
        weight: Weight::Hermite,
        n,
        k,
        constant: m,
        eigenvalue: m * m,
        method: Method::ClosedForm,
        extremal_coeffs: c,
    })
}

/// Laguerre `s = 0`, `k = 1`: `M_n = 1/(2 sin(pi/(4n+2)))`.
///
/// In the orthonormal basis the extremal coefficients are
/// `(-1)^nu sin(nu pi/(2n+1))`, `nu = 1..n`.
pub fn turan_constant(n: usize) -> Result<MarkovResult> {
    check_nk(n, 1)?;
    let m = 1.0 / (2.0 * (PI / (4 * n + 2) as f64).sin());
    let c = (1..=n)
        .map(|nu| {
            let sgn = if nu % 2 == 0 { 1.0 } else { -1.0 };
            sgn * (nu as f64 * PI / (2 * n + 1) as f64).sin()
        })
        .collect();
    Ok(MarkovResult {
        weight: Weight::Laguerre { s: 0.0 },
        n,
        k: 1,
        constant: m,
        eigenvalue: 1.0 / (m * m),
        method: Method::ClosedForm,
        extremal_coeffs: normalize(c)?,
    })
}

/// Laguerre constants with explicit formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallCase {
    /// `M_{1,1}(s)`
    M1,
    /// `M_{2,1}(s)`
    M2,
    /// `M_{2,2}(s)`
    M22,
    /// `M_{3,2}(s)`
    M32,
}

impl SmallCase {
    /// `(n, k)`.
    pub fn degree_order(self) -> (usize, usize) {
        match self {
            SmallCase::M1 => (1, 1),
            SmallCase::M2 => (2, 1),
            SmallCase::M22 => (2, 2),
            SmallCase::M32 => (3, 2),
        }
    }
}

pub fn laguerre_small_closed_forms(which: SmallCase, s: f64) -> Result<f64> {
    Weight::laguerre(s)?;
    let (s1, s2, s3) = (s + 1.0, s + 2.0, s + 3.0);
    Ok(match which {
        SmallCase::M1 => 1.0 / s1.sqrt(),
        SmallCase::M2 => ((3.0 * s2 + (s2 * (s + 10.0)).sqrt()) / (2.0 * s1 * s2)).sqrt(),
        SmallCase::M22 => (2.0 / (s1 * s2)).sqrt(),
        SmallCase::M32 => {
            (2.0 * (2.0 * s + 9.0 + (s * s + 24.0 * s + 72.0).sqrt()) / (s1 * s2 * s3)).sqrt()
        }
    })
}

/// Where a bound or estimate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Dorfler,
    NikolovShadrinLaguerre,
    NikolovShadrinGegenbauer,
    BesselLimit,
    BesselGegenbauer,
    BesselJacobi,
}

impl BoundSource {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundSource::Dorfler => "dorfler",
            BoundSource::NikolovShadrinLaguerre => "nikolov_shadrin_laguerre",
            BoundSource::NikolovShadrinGegenbauer => "nikolov_shadrin_gegenbauer",
            BoundSource::BesselLimit => "bessel_limit",
            BoundSource::BesselGegenbauer => "bessel_gegenbauer",
            BoundSource::BesselJacobi => "bessel_jacobi",
        }
    }
}

/// Bounds on `M_{n,k}` (not squared). Bessel-based values are estimates
/// only and never fill `lower` or `upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub weight: Weight,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub asymptotic: Option<f64>,
    pub exact: Option<f64>,
    pub source: BoundSource,
    /// Set when the parameters lie outside the range where the estimate
    /// was proved.
    pub outside_restriction: bool,
}

impl BoundsReport {
    fn new(weight: Weight, n: usize, source: BoundSource) -> Self {
        BoundsReport {
            n,
            k: 1,
            weight,
            lower: None,
            upper: None,
            asymptotic: None,
            exact: None,
            source,
            outside_restriction: false,
        }
    }

    /// Attaches the exact constant from the solver.
    pub fn with_exact(mut self) -> Result<Self> {
        self.exact = Some(markov_constant(self.weight, self.n, self.k, Route::Auto)?.constant);
        Ok(self)
    }

    /// `lower <= x <= upper` for whichever sides are present, with a
    /// relative slack of `rel`.
    pub fn brackets(&self, x: f64, rel: f64) -> bool {
        self.lower.is_none_or(|l| l <= x * (1.0 + rel)) && self.upper.is_none_or(|u| x <= u * (1.0 + rel))
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Range(format!("need n >= {min}, got {n}")));
    }
    Ok(())
}

/// `M(s) = lim M_n(s)/n = 1/j_{(s-1)/2,1}`.
pub fn laguerre_limit_slope(s: f64) -> Result<f64> {
    Weight::laguerre(s)?;
    Ok(1.0 / bessel_first_zero((s - 1.0) / 2.0)?)
}

/// Two-sided bound on the Laguerre `M_n(s)`, with `n M(s)` as estimate.
pub fn dorfler_bounds(n: usize, s: f64) -> Result<BoundsReport> {
    let weight = Weight::laguerre(s)?;
    check_n(n, 1)?;
    let nf = n as f64;
    let (s1, s2) = (s + 1.0, s + 2.0);
    let lo2 = (nf * nf / s1 + (2.0 * s * s + 5.0 * s + 6.0) * nf / (3.0 * s1 * s2) + (s + 6.0) / (3.0 * s2)) / (s + 3.0);
    let hi2 = nf * (nf + 1.0) / (2.0 * s1);
    let mut r = BoundsReport::new(weight, n, BoundSource::Dorfler);
    r.lower = Some(lo2.sqrt());
    r.upper = Some(hi2.sqrt());
    r.asymptotic = Some(nf * laguerre_limit_slope(s)?);
    Ok(r)
}

/// Laguerre bounds for `n >= 3`; the lower side needs `n >= (s+1)/6` and
/// is left empty otherwise.
pub fn nikolov_shadrin_laguerre(n: usize, s: f64) -> Result<BoundsReport> {
    let weight = Weight::laguerre(s)?;
    check_n(n, 3)?;
    let nf = n as f64;
    let s1 = s + 1.0;
    let mut r = BoundsReport::new(weight, n, BoundSource::NikolovShadrinLaguerre);
    if nf >= s1 / 6.0 {
        let lo2 = 2.0 * (nf + 2.0 * s / 3.0) * (nf - s1 / 6.0) / (s1 * (s + 5.0));
        r.lower = Some(lo2.max(0.0).sqrt());
    }
    let hi2 = (nf + 1.0) * (nf + 2.0 * s1 / 5.0) / (s1 * ((s + 3.0) * (s + 5.0)).cbrt());
    r.upper = Some(hi2.sqrt());
    r.asymptotic = Some(nf * laguerre_limit_slope(s)?);
    Ok(r)
}

/// Which Gegenbauer display to evaluate; `lambda = alpha + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GegenbauerDisplay {
    /// `lambda >= 2`.
    LargeLambda,
    /// `lambda > -1/2`.
    General,
}

/// Bounds on the Gegenbauer `M_n` for `n >= 3`.
pub fn nikolov_shadrin_gegenbauer(n: usize, alpha: f64, display: GegenbauerDisplay) -> Result<BoundsReport> {
    let weight = Weight::gegenbauer(alpha)?;
    check_n(n, 3)?;
    let nf = n as f64;
    let lambda = alpha + 0.5;
    let (lo2, hi2) = match display {
        GegenbauerDisplay::LargeLambda => {
            if lambda < 2.0 {
                return Err(Error::Range(format!("display needs lambda >= 2, got {lambda}")));
            }
            (
                nf * nf * (nf + lambda).powi(2) / (4.0 * (lambda + 1.0) * (lambda + 2.0)),
                nf * (nf + 2.0 * lambda + 2.0).powi(3) / ((lambda + 2.0) * (lambda + 3.0)),
            )
        }
        GegenbauerDisplay::General => {
            let lambda_min0 = lambda.min(0.0);
            let lambda_max0 = lambda.max(0.0);
            let d = 2.0 * lambda + 1.0;
            (
                (nf + lambda).powi(2) * (nf + 2.0 * lambda_min0).powi(2) / (d * (2.0 * lambda + 5.0)),
                (nf + lambda + lambda_max0 + 2.0).powi(4) / (2.0 * d * (2.0 * lambda + 5.0).sqrt()),
            )
        }
    };
    let mut r = BoundsReport::new(weight, n, BoundSource::NikolovShadrinGegenbauer);
    r.lower = Some(lo2.sqrt());
    r.upper = Some(hi2.sqrt());
    r.asymptotic = Some(asymptotic_estimate(AsymptoticFamily::Gegenbauer { alpha }, n)?);
    Ok(r)
}

/// `(sqrt(2/((s+1)(s+5))), 2/(s + 2 pi - 2))` for `s > 1`.
///
/// The lower end stays below `M(s)` on the whole range. The upper end
/// equals `M(2) = 1/pi` and lies below `M(s)` for `1 < s < 2`, so the pair
/// is a bracket only for `s >= 2`.
pub fn nikolov_shadrin_limit_bracket(s: f64) -> Result<(f64, f64)> {
    if !(s > 1.0) {
        return Err(Error::Range(format!("bracket holds for s > 1, got {s}")));
    }
    Ok(((2.0 / ((s + 1.0) * (s + 5.0))).sqrt(), 2.0 / (s + 2.0 * PI - 2.0)))
}

/// Families with a Bessel-zero asymptotic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AsymptoticFamily {
    /// `n / j_{(s-1)/2,1}`
    LaguerreSlope { s: f64 },
    /// `n^2 / (2 j_{(alpha-1)/2,1})`
    Gegenbauer { alpha: f64 },
    /// `n^2 / (2 j_{nu,1})`, `nu = min((alpha-1)/2, (beta-1)/2)`
    Jacobi { alpha: f64, beta: f64 },
}

pub fn asymptotic_estimate(family: AsymptoticFamily, n: usize) -> Result<f64> {
    let nf = n as f64;
    Ok(match family {
        AsymptoticFamily::LaguerreSlope { s } => nf * laguerre_limit_slope(s)?,
        AsymptoticFamily::Gegenbauer { alpha } => {
            Weight::gegenbauer(alpha)?;
            nf * nf / (2.0 * bessel_first_zero((alpha - 1.0) / 2.0)?)
        }
        AsymptoticFamily::Jacobi { alpha, beta } => {
            Weight::jacobi(alpha, beta)?;
            let nu = ((alpha - 1.0) / 2.0).min((beta - 1.0) / 2.0);
            nf * nf / (2.0 * bessel_first_zero(nu)?)
        }
    })
}

/// Bessel-zero estimate of `M_{n,1}` for any non-Hermite weight.
pub fn asymptotic_report(weight: Weight, n: usize) -> Result<BoundsReport> {
    weight.validate()?;
    check_n(n, 1)?;
    let (family, source, outside) = match weight {
        Weight::Hermite => {
            return Err(Error::Domain("no Bessel asymptotic for the Hermite weight".into()));
        }
        Weight::Laguerre { s } => (AsymptoticFamily::LaguerreSlope { s }, BoundSource::BesselLimit, false),
        Weight::Jacobi { alpha, beta } if alpha == beta => {
            (AsymptoticFamily::Gegenbauer { alpha }, BoundSource::BesselGegenbauer, false)
        }
        Weight::Jacobi { alpha, beta } => (
            AsymptoticFamily::Jacobi { alpha, beta },
            BoundSource::BesselJacobi,
            (alpha - beta).abs() >= 4.0,
        ),
    };
    let mut r = BoundsReport::new(weight, n, source);
    r.asymptotic = Some(asymptotic_estimate(family, n)?);
    r.outside_restriction = outside;
    Ok(r)
}

/// Every bound and estimate that applies to `M_{n,1}` of `weight`.
pub fn all_bounds(weight: Weight, n: usize) -> Result<Vec<BoundsReport>> {
    weight.validate()?;
    let mut out = Vec::new();
    match weight {
        Weight::Hermite => {}
        Weight::Laguerre { s } => {
            out.push(dorfler_bounds(n, s)?);
            if n >= 3 {
                out.push(nikolov_shadrin_laguerre(n, s)?);
            }
        }
        Weight::Jacobi { alpha, beta } if alpha == beta && n >= 3 => {
            if alpha + 0.5 >= 2.0 {
                out.push(nikolov_shadrin_gegenbauer(n, alpha, GegenbauerDisplay::LargeLambda)?);
            }
            out.push(nikolov_shadrin_gegenbauer(n, alpha, GegenbauerDisplay::General)?);
        }
        Weight::Jacobi { .. } => {}
    }
    if weight != Weight::Hermite {
        out.push(asymptotic_report(weight, n)?);
    }
    out.into_iter().map(BoundsReport::with_exact).collect()
}

/// `T_n^(k)(1) = n^2 (n^2 - 1) ... (n^2 - (k-1)^2) / (2k-1)!!`, the
/// uniform-norm Markov constant on `[-1, 1]`.
pub fn uniform_markov_constant(n: usize, k: usize) -> Result<f64> {
    check_nk(n, k)?;
    let n2 = (n * n) as f64;
    Ok((0..k).map(|i| (n2 - (i * i) as f64) / (2 * i + 1) as f64).product())
}

/// `s_n`, where the two branches of the restricted Laguerre constant meet.
pub fn restricted_threshold(n: usize) -> Result<f64> {
    check_n(n, 1)?;
    let nf = n as f64;
    Ok(((17.0 * nf * nf + 2.0 * nf + 1.0).sqrt() - 3.0 * nf + 1.0) / (2.0 * (nf + 1.0)))
}

/// Branch of the restricted constant in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestrictedBranch {
    /// `1/((2+s)(1+s))`, `s <= s_n`.
    Low,
    /// `n^2/((2n+s)(2n+s-1))`, `s > s_n`.
    High,
}

pub fn restricted_branch(n: usize, s: f64) -> Result<RestrictedBranch> {
    Weight::laguerre(s)?;
    Ok(if s <= restricted_threshold(n)? { RestrictedBranch::Low } else { RestrictedBranch::High })
}

/// Evaluates one branch regardless of the threshold.
pub fn restricted_branch_value(branch: RestrictedBranch, n: usize, s: f64) -> f64 {
    let nf = n as f64;
    match branch {
        RestrictedBranch::Low => 1.0 / ((2.0 + s) * (1.0 + s)),
        RestrictedBranch::High => nf * nf / ((2.0 * nf + s) * (2.0 * nf + s - 1.0)),
    }
}

/// Restricted-class Laguerre constant `C_n(s)`.
pub fn restricted_varma_constant(n: usize, s: f64) -> Result<f64> {
    Ok(restricted_branch_value(restricted_branch(n, s)?, n, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lag(s: f64) -> Weight {
        Weight::Laguerre { s }
    }
    fn jac(a: f64, b: f64) -> Weight {
        Weight::Jacobi { alpha: a, beta: b }
    }

    #[test]
    fn worked_examples() {
        let r = markov_constant(lag(1.0), 6, 2, Route::Auto).unwrap();
        assert_eq!(r.method, Method::CRoute);
        assert_relative_eq!(r.constant, 5.235160139118, max_relative = 1e-12);
        assert_relative_eq!(r.eigenvalue, 0.036487159752501, max_relative = 1e-12);
        let r = markov_constant(jac(-0.5, 0.5), 6, 1, Route::Auto).unwrap();
        assert_relative_eq!(r.constant, 23.61080508655, max_relative = 1e-11);
        assert_relative_eq!(r.eigenvalue, 1.793818125493e-3, max_relative = 1e-11);
    }

    #[test]
    fn routes_agree() {
        let weights = [
            Weight::Hermite,
            lag(-0.5),
            lag(0.0),
            lag(1.0),
            lag(2.0),
            jac(-0.5, -0.5),
            jac(0.0, 0.0),
            jac(0.5, 0.5),
            jac(1.0, 2.0),
            jac(-0.5, 1.0),
            jac(2.0, 2.0),
        ];
        for w in weights {
            for n in [1usize, 2, 5, 12, 25] {
                for k in 1..=3.min(n) {
                    let a = markov_constant(w, n, k, Route::Auto).unwrap();
                    let b = markov_constant(w, n, k, Route::B).unwrap();
                    let c = markov_constant(w, n, k, Route::C).unwrap();
                    assert_relative_eq!(a.constant, b.constant, max_relative = 1e-9);
                    assert_relative_eq!(a.constant, c.constant, max_relative = 1e-9);
                    assert_relative_eq!(norm2(&a.extremal_coeffs), 1.0, max_relative = 1e-14);
                    assert_eq!(a.extremal_coeffs.len(), n - k + 1);
                }
            }
        }
    }

    #[test]
    fn extremal_vectors_agree_across_routes() {
        for w in [lag(0.5), jac(0.0, 0.0), jac(1.0, -0.5)] {
            let a = markov_constant(w, 10, 1, Route::Auto).unwrap();
            let b = markov_constant(w, 10, 1, Route::B).unwrap();
            for (x, y) in a.extremal_coeffs.iter().zip(&b.extremal_coeffs) {
                assert!((x - y).abs() < 1e-9, "{w}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn rayleigh_optimality_on_b() {
        let w = jac(0.5, 1.0);
        let r = markov_constant(w, 9, 2, Route::C).unwrap();
        let set = diffops::diff_coeffs(w, 9, 2).unwrap();
        let b = diffops::b_matrix(&set);
        let c = &r.extremal_coeffs;
        let q: f64 = c.iter().zip(b.mul_vec(c)).map(|(x, y)| x * y).sum();
        assert_relative_eq!(q, r.constant * r.constant, max_relative = 1e-9);
    }

    #[test]
    fn monotone_in_n() {
        for w in [lag(-0.5), jac(0.5, -0.5), jac(0.0, 0.0)] {
            for k in 1..=2 {
                let mut prev = 0.0;
                for n in k..20 {
                    let m = markov_constant(w, n, k, Route::Auto).unwrap().constant;
                    assert!(m >= prev, "{w} k={k} n={n}");
                    prev = m;
                }
            }
        }
    }

    #[test]
    fn hermite_general_route_concentrates_on_top_degree() {
        for n in [3usize, 10, 30] {
            let r = markov_constant(Weight::Hermite, n, 1, Route::C).unwrap();
            let (last, rest) = r.extremal_coeffs.split_last().unwrap();
            assert_relative_eq!(*last, 1.0, max_relative = 1e-12);
            assert!(rest.iter().all(|x| x.abs() <= 1e-8));
            assert_relative_eq!(r.constant, (2.0 * n as f64).sqrt(), max_relative = 1e-12);
        }
        assert_relative_eq!(hermite_closed_form(4, 2).unwrap().constant, 4.0 * 3f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn n_equals_k_is_single_entry() {
        for w in [Weight::Hermite, lag(0.3), jac(0.2, -0.4)] {
            for n in 1..5 {
                let set = diffops::diff_coeffs(w, n, n).unwrap();
                let r = markov_constant(w, n, n, Route::C).unwrap();
                assert_relative_eq!(r.constant, set.coeff(0, n).abs(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn turan_matches_tridiagonal_path() {
        assert_relative_eq!(turan_constant(1).unwrap().constant, 1.0, max_relative = 1e-15);
        for n in [1usize, 6, 40, 200] {
            let t = turan_constant(n).unwrap();
            let r = markov_constant(lag(0.0), n, 1, Route::Auto).unwrap();
            assert_eq!(r.method, Method::Tridiagonal);
            assert_relative_eq!(t.constant, r.constant, max_relative = 1e-12);
            for (x, y) in t.extremal_coeffs.iter().zip(&r.extremal_coeffs) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn small_closed_forms() {
        assert_relative_eq!(laguerre_small_closed_forms(SmallCase::M22, 0.0).unwrap(), 1.0);
        assert_relative_eq!(laguerre_small_closed_forms(SmallCase::M32, 0.0).unwrap(), 1.0 + 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(laguerre_small_closed_forms(SmallCase::M1, 3.0).unwrap(), 0.5);
        for s in [-0.7, 0.0, 0.4, 3.0] {
            for case in [SmallCase::M1, SmallCase::M2, SmallCase::M22, SmallCase::M32] {
                let (n, k) = case.degree_order();
                let want = markov_constant(lag(s), n, k, Route::C).unwrap().constant;
                assert_relative_eq!(laguerre_small_closed_forms(case, s).unwrap(), want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn banded_matches_table_value() {
        let r = markov_constant(lag(0.0), 4, 2, Route::Auto).unwrap();
        assert_eq!(r.method, Method::Banded);
        assert_relative_eq!(r.constant, 4.402678830, max_relative = 1e-9);
    }

    #[test]
    fn split_parity_and_degenerate_n1() {
        let r = markov_constant(jac(0.0, 0.0), 1, 1, Route::Auto).unwrap();
        assert_eq!(r.method, Method::Split);
        assert_relative_eq!(r.constant, 3f64.sqrt(), max_relative = 1e-14);
        for n in 2..12 {
            let r = markov_constant(jac(0.0, 0.0), n, 1, Route::Auto).unwrap();
            // q_n present, q_{n-1} absent
            assert!(r.extremal_coeffs[n - 1] > 0.0);
            assert_eq!(r.extremal_coeffs[n - 2], 0.0);
        }
    }

    #[test]
    fn dorfler_examples() {
        let r = dorfler_bounds(1, 0.0).unwrap();
        assert_relative_eq!(r.upper.unwrap(), 1.0);
        assert_relative_eq!(r.asymptotic.unwrap(), 2.0 / PI, max_relative = 1e-14);
        for n in [3, 5, 10, 50] {
            for s in [-0.5, 0.0, 1.0, 2.0] {
                let r = dorfler_bounds(n, s).unwrap().with_exact().unwrap();
                assert!(r.brackets(r.exact.unwrap(), 0.0), "{r:?}");
            }
        }
    }

    #[test]
    fn nikolov_shadrin_examples() {
        let r = nikolov_shadrin_laguerre(10, 0.0).unwrap();
        assert_relative_eq!(r.lower.unwrap().powi(2), 2.0 * 10.0 * (10.0 - 1.0 / 6.0) / 5.0, max_relative = 1e-14);
        assert_relative_eq!(r.upper.unwrap().powi(2), 11.0 * 10.4 / 15f64.cbrt(), max_relative = 1e-14);
        assert!(matches!(nikolov_shadrin_laguerre(2, 0.0), Err(Error::Range(_))));
        assert!(nikolov_shadrin_laguerre(3, 30.0).unwrap().lower.is_none());
        assert!(matches!(
            nikolov_shadrin_gegenbauer(5, 0.0, GegenbauerDisplay::LargeLambda),
            Err(Error::Range(_))
        ));
        for n in [5, 20, 100] {
            let r = nikolov_shadrin_gegenbauer(n, 0.0, GegenbauerDisplay::General).unwrap().with_exact().unwrap();
            assert!(r.brackets(r.exact.unwrap(), 0.0), "{r:?}");
        }
    }

    #[test]
    fn limit_bracket() {
        let (lo, hi) = nikolov_shadrin_limit_bracket(2.0).unwrap();
        let m = laguerre_limit_slope(2.0).unwrap();
        assert_relative_eq!(m, 1.0 / PI, max_relative = 1e-14);
        assert!(lo < m);
        assert_relative_eq!(hi, m, max_relative = 1e-14);
        for s in [2.01, 3.0, 10.0, 50.0] {
            let (lo, hi) = nikolov_shadrin_limit_bracket(s).unwrap();
            let m = laguerre_limit_slope(s).unwrap();
            assert!(lo < m && m < hi, "s={s}");
        }
        for s in [1.01, 1.5, 1.99] {
            let (lo, hi) = nikolov_shadrin_limit_bracket(s).unwrap();
            let m = laguerre_limit_slope(s).unwrap();
            assert!(lo < m && hi < m, "s={s}");
        }
        assert!(nikolov_shadrin_limit_bracket(0.5).is_err());
    }

    #[test]
    fn asymptotics() {
        let leg = asymptotic_estimate(AsymptoticFamily::Gegenbauer { alpha: 0.0 }, 10).unwrap();
        assert_relative_eq!(leg, 100.0 / PI, max_relative = 1e-14);
        let j = asymptotic_estimate(AsymptoticFamily::Jacobi { alpha: 0.0, beta: 2.0 }, 10).unwrap();
        assert_relative_eq!(j, leg, max_relative = 1e-14);
        let est = asymptotic_estimate(AsymptoticFamily::LaguerreSlope { s: 0.0 }, 200).unwrap();
        let exact = turan_constant(200).unwrap().constant;
        assert!((est / exact - 1.0).abs() < 3e-3);
        assert!(asymptotic_report(jac(-0.5, 4.0), 5).unwrap().outside_restriction);
        assert!(!asymptotic_report(jac(-0.5, 3.0), 5).unwrap().outside_restriction);
    }

    #[test]
    fn uniform_constant() {
        assert_eq!(uniform_markov_constant(7, 1).unwrap(), 49.0);
        assert_eq!(uniform_markov_constant(2, 1).unwrap(), 4.0);
        assert_relative_eq!(uniform_markov_constant(3, 2).unwrap(), 24.0);
    }

    #[test]
    fn restricted_class() {
        let want = [0.61803399, 0.59066729, 0.58113883, 0.57630546, 0.57338442, 4.0 / 7.0];
        for (i, w) in want.iter().enumerate() {
            assert!((restricted_threshold(i + 1).unwrap() - w).abs() < 5e-9);
        }
        let mut prev = f64::INFINITY;
        for n in 1..=10_000 {
            let t = restricted_threshold(n).unwrap();
            assert!(t < prev);
            prev = t;
        }
        assert!(prev > (17f64.sqrt() - 3.0) / 2.0);
        for n in 1..=50 {
            let t = restricted_threshold(n).unwrap();
            let lo = restricted_branch_value(RestrictedBranch::Low, n, t);
            let hi = restricted_branch_value(RestrictedBranch::High, n, t);
            assert_relative_eq!(lo, hi, max_relative = 1e-12);
        }
        assert_relative_eq!(restricted_varma_constant(100_000, 1.0).unwrap(), 0.25, max_relative = 1e-4);
    }
}
