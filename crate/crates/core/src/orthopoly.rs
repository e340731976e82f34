//! Classical weights, their three-term recurrences, orthonormal
//! polynomials, Gauss rules and zeros.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, SymTridiagonal};
use crate::special_fn::ln_gamma;
use crate::{Error, Result};

/// A classical weight on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Weight {
    /// `exp(-t^2)` on the whole line.
    Hermite,
    /// `t^s exp(-t)` on `(0, inf)`, `s > -1`.
    Laguerre { s: f64 },
    /// `(1-t)^alpha (1+t)^beta` on `(-1, 1)`, `alpha, beta > -1`.
    Jacobi { alpha: f64, beta: f64 },
}

impl Weight {
    pub fn laguerre(s: f64) -> Result<Self> {
        let w = Weight::Laguerre { s };
        w.validate()?;
        Ok(w)
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let w = Weight::Jacobi { alpha, beta };
        w.validate()?;
        Ok(w)
    }

    /// Gegenbauer weight `(1-t^2)^alpha`.
    pub fn gegenbauer(alpha: f64) -> Result<Self> {
        Self::jacobi(alpha, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |p: f64| p > -1.0 && p.is_finite();
        match *self {
            Weight::Hermite => Ok(()),
            Weight::Laguerre { s } if ok(s) => Ok(()),
            Weight::Laguerre { s } => Err(Error::Domain(format!("Laguerre needs s > -1, got {s}"))),
            Weight::Jacobi { alpha, beta } if ok(alpha) && ok(beta) => Ok(()),
            Weight::Jacobi { alpha, beta } => Err(Error::Domain(format!(
                "Jacobi needs alpha, beta > -1, got ({alpha}, {beta})"
            ))),
        }
    }

    /// `Some(alpha)` when the weight is symmetric Jacobi.
    pub fn gegenbauer_alpha(&self) -> Option<f64> {
        match *self {
            Weight::Jacobi { alpha, beta } if alpha == beta => Some(alpha),
            _ => None,
        }
    }

    /// Total mass `mu_0 = int w`.
    pub fn mass(&self) -> Result<f64> {
        Ok(self.ln_mass()?.exp())
    }

    fn ln_mass(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            Weight::Hermite => 0.5 * std::f64::consts::PI.ln(),
            Weight::Laguerre { s } => ln_gamma(s + 1.0)?,
            Weight::Jacobi { alpha, beta } => {
                (alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)?
                    + ln_gamma(beta + 1.0)?
                    - ln_gamma(alpha + beta + 2.0)?
            }
        })
    }

    /// Short family name used in reports.
    pub fn family(&self) -> &'static str {
        match self {
            Weight::Hermite => "hermite",
            Weight::Laguerre { .. } => "laguerre",
            Weight::Jacobi { .. } => "jacobi",
        }
    }

    /// Family parameters in reporting order.
    pub fn params(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Weight::Hermite => (None, None),
            Weight::Laguerre { s } => (Some(s), None),
            Weight::Jacobi { alpha, beta } => (Some(alpha), Some(beta)),
        }
    }

    /// Coefficients of the differential equation
    /// `A(t) y'' + B(t) y' + lambda_n y = 0` satisfied by the degree-`n`
    /// classical polynomial: `(A as quadratic [a0, a1, a2], B as [b0, b1], lambda_n)`.
    pub fn sturm_liouville(&self, n: usize) -> ([f64; 3], [f64; 2], f64) {
        let nf = n as f64;
        match *self {
            Weight::Hermite => ([1.0, 0.0, 0.0], [0.0, -2.0], 2.0 * nf),
            Weight::Laguerre { s } => ([0.0, 1.0, 0.0], [s + 1.0, -1.0], nf),
            Weight::Jacobi { alpha, beta } => (
                [1.0, 0.0, -1.0],
                [beta - alpha, -(alpha + beta + 2.0)],
                nf * (nf + alpha + beta + 1.0),
            ),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Weight::Hermite => write!(f, "hermite"),
            Weight::Laguerre { s } => write!(f, "laguerre(s={s})"),
            Weight::Jacobi { alpha, beta } => write!(f, "jacobi(alpha={alpha}, beta={beta})"),
        }
    }
}

/// Monic recurrence `pi_{n+1} = (t - alpha_n) pi_n - beta_n pi_{n-1}` with
/// `beta_0 = mu_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub weight: Weight,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// Monic recurrence coefficient `beta_n` for `n >= 1` in closed form.
pub(crate) fn jacobi_beta(alpha: f64, beta: f64, n: usize) -> f64 {
    let nf = n as f64;
    let ab = alpha + beta;
    if n == 1 {
        let t = 2.0 + ab;
        return 4.0 * (1.0 + alpha) * (1.0 + beta) / (t * t * (3.0 + ab));
    }
    let t = 2.0 * nf + ab;
    4.0 * nf * (nf + alpha) * (nf + beta) * (nf + ab) / (t * t * (t + 1.0) * (t - 1.0))
}

fn jacobi_alpha(alpha: f64, beta: f64, n: usize) -> f64 {
    let ab = alpha + beta;
    if n == 0 {
        return (beta - alpha) / (ab + 2.0);
    }
    let t = 2.0 * n as f64 + ab;
    (beta * beta - alpha * alpha) / (t * (t + 2.0))
}

/// First `m` recurrence coefficient pairs `(alpha_i, beta_i)`, `i < m`.
pub fn recurrence_coeffs(weight: Weight, m: usize) -> Result<RecurrenceTable> {
    let mu0 = weight.mass()?;
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);
    for i in 0..m {
        let fi = i as f64;
        let (a, b) = match weight {
            Weight::Hermite => (0.0, 0.5 * fi),
            Weight::Laguerre { s } => (2.0 * fi + s + 1.0, fi * (fi + s)),
            Weight::Jacobi { alpha, beta } => (
                jacobi_alpha(alpha, beta, i),
                if i == 0 { 0.0 } else { jacobi_beta(alpha, beta, i) },
            ),
        };
        alpha.push(a);
        beta.push(if i == 0 { mu0 } else { b });
    }
    Ok(RecurrenceTable {
        weight,
        alpha,
        beta,
    })
}

/// Natural logarithms of the leading coefficients `gamma_0..gamma_n` of the
/// orthonormal polynomials, from `gamma_n = gamma_{n-1} / sqrt(beta_n)`.
pub fn ln_leading_coeffs(weight: Weight, n: usize) -> Result<Vec<f64>> {
    let rt = recurrence_coeffs(weight, n + 1)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = crate::NeumaierSum::new();
    acc.add(-0.5 * weight.ln_mass()?);
    out.push(acc.value());
    for b in &rt.beta[1..] {
        acc.add(-0.5 * b.ln());
        out.push(acc.value());
    }
    Ok(out)
}

/// Leading coefficient of the orthonormal polynomial `q_n`.
pub fn leading_coeff_orthonormal(weight: Weight, n: usize) -> Result<f64> {
    Ok(ln_leading_coeffs(weight, n)?[n].exp())
}

/// Values `q_0(t), ..., q_n(t)` of the orthonormal polynomials.
pub fn eval_orthonormal_all(rt: &RecurrenceTable, n: usize, t: f64) -> Result<Vec<f64>> {
    if rt.len() < n + 1 {
        return Err(Error::Domain(format!(
            "recurrence table has {} entries, need {}",
            rt.len(),
            n + 1
        )));
    }
    let mut q = Vec::with_capacity(n + 1);
    q.push(1.0 / rt.beta[0].sqrt());
    if n >= 1 {
        q.push((t - rt.alpha[0]) * q[0] / rt.beta[1].sqrt());
    }
    for i in 1..n {
        let next = ((t - rt.alpha[i]) * q[i] - rt.beta[i].sqrt() * q[i - 1]) / rt.beta[i + 1].sqrt();
        q.push(next);
    }
    Ok(q)
}

/// Value of the orthonormal polynomial `q_n` at `t`.
pub fn eval_orthonormal(rt: &RecurrenceTable, n: usize, t: f64) -> Result<f64> {
    Ok(eval_orthonormal_all(rt, n, t)?[n])
}

/// Symmetric tridiagonal Jacobi matrix of order `m` (`m <= rt.len()`).
pub fn jacobi_matrix(rt: &RecurrenceTable, m: usize) -> Result<SymTridiagonal> {
    if m == 0 || m > rt.len() {
        return Err(Error::Domain(format!(
            "Jacobi matrix order {m} not available from {} coefficients",
            rt.len()
        )));
    }
    SymTridiagonal::new(
        rt.alpha[..m].to_vec(),
        rt.beta[1..m].iter().map(|b| b.sqrt()).collect(),
    )
}

/// Gauss quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `m`-point Gauss rule by the Golub-Welsch method.
///
/// Weights far below the `f64` range underflow to zero.
pub fn gauss_rule(weight: Weight, m: usize) -> Result<GaussRule> {
    let rt = recurrence_coeffs(weight, m)?;
    let jm = jacobi_matrix(&rt, m)?;
    let nodes = linalg::tridiag_eigenvalues(&jm);
    let mut weights = Vec::with_capacity(m);
    for &x in &nodes {
        let v = linalg::tridiag_eigenvector(&jm, x)?;
        weights.push(rt.beta[0] * v[0] * v[0]);
    }
    Ok(GaussRule { nodes, weights })
}

/// Zeros of `q_n` in increasing order.
pub fn poly_zeros(rt: &RecurrenceTable, n: usize) -> Result<Vec<f64>> {
    let z = linalg::tridiag_eigenvalues(&jacobi_matrix(rt, n)?);
    if z.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Convergence("zeros are not strictly increasing".into()));
    }
    Ok(z)
}
