//! Checks that share no code with the coefficient matrices: quadrature
//! Rayleigh quotients, the second-order inequality for classical weights,
//! and power iteration.
//!
//! Derivatives come from differentiating the three-term recurrence
//! directly, `q_{j+1}^(d) = ((t - a_j) q_j^(d) + d q_j^(d-1) - sqrt(b_j) q_{j-1}^(d)) / sqrt(b_{j+1})`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{DenseSymmetric, EigenPair};
use crate::markov::MarkovResult;
use crate::orthopoly::{gauss_rule, recurrence_coeffs, RecurrenceTable, Weight};
use crate::sum::{dot, norm2};
use crate::{Error, NeumaierSum, Result};

/// Seed for the random polynomial samples.
pub const DEFAULT_SEED: u64 = 0x4d41_524b_4f56;

/// A polynomial `sum c_j q_j` in the orthonormal basis of `weight`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolySample {
    pub weight: Weight,
    pub coeffs: Vec<f64>,
}

impl PolySample {
    pub fn new(weight: Weight, coeffs: Vec<f64>) -> Result<Self> {
        weight.validate()?;
        if coeffs.is_empty() {
            return Err(Error::Domain("polynomial needs at least one coefficient".into()));
        }
        Ok(PolySample { weight, coeffs })
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Derivatives `q_j^(d)(t)` for `j <= n`, `d <= order`; indexed `[d][j]`,
/// all scaled by `1 / ||(q_0(t), ..., q_n(t))||`.
///
/// At a Gauss node of the `(n+1)`-point rule that factor is the square
/// root of the Christoffel weight, so sums over nodes of products of two
/// scaled entries are exact quadratures. Intermediate rescaling keeps the
/// recurrence in range where `q_j(t)` itself would overflow.
fn scaled_table(rt: &RecurrenceTable, n: usize, order: usize, t: f64) -> Vec<Vec<f64>> {
    const BIG: f64 = 1e200;
    let mut out = vec![vec![0.0; n + 1]; order + 1];
    out[0][0] = 1.0 / rt.beta[0].sqrt();
    for j in 0..n {
        let sb_next = rt.beta[j + 1].sqrt();
        let sb = if j == 0 { 0.0 } else { rt.beta[j].sqrt() };
        let mut peak = 0.0f64;
        for d in 0..=order {
            let mut v = (t - rt.alpha[j]) * out[d][j];
            if d > 0 {
                v += d as f64 * out[d - 1][j];
            }
            if j > 0 {
                v -= sb * out[d][j - 1];
            }
            out[d][j + 1] = v / sb_next;
            peak = peak.max(out[d][j + 1].abs());
        }
        if peak > BIG {
            out.iter_mut().for_each(|row| row[..=j + 1].iter_mut().for_each(|x| *x /= BIG));
        }
    }
    let nrm = norm2(&out[0]);
    out.iter_mut().for_each(|row| row.iter_mut().for_each(|x| *x /= nrm));
    out
}

/// Nodes of the `m`-point Gauss rule with the recurrence for degree `m - 1`.
fn quadrature(weight: Weight, m: usize) -> Result<(Vec<f64>, RecurrenceTable)> {
    let rule = gauss_rule(weight, m)?;
    Ok((rule.nodes, recurrence_coeffs(weight, m + 1)?))
}

/// Precomputed values and `k`-th derivatives of `q_0..q_n` at the nodes of
/// the `(n+1)`-point Gauss rule, for evaluating many quotients at once.
#[derive(Debug, Clone)]
pub struct RayleighOracle {
    pub weight: Weight,
    pub n: usize,
    pub k: usize,
    values: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

impl RayleighOracle {
    pub fn new(weight: Weight, n: usize, k: usize) -> Result<Self> {
        weight.validate()?;
        let (nodes, rt) = quadrature(weight, n + 1)?;
        let mut values = Vec::with_capacity(nodes.len());
        let mut derivs = Vec::with_capacity(nodes.len());
        for &t in &nodes {
            let mut tab = scaled_table(&rt, n, k, t);
            derivs.push(tab.pop().unwrap());
            values.push(tab.swap_remove(0));
        }
        if k == 0 {
            derivs = values.clone();
        }
        Ok(RayleighOracle { weight, n, k, values, derivs })
    }

    fn weighted_norm(&self, rows: &[Vec<f64>], c: &[f64]) -> f64 {
        let v: Vec<f64> = rows.iter().map(|r| dot(&r[..c.len()], c)).collect();
        norm2(&v)
    }

    /// `||p^(k)|| / ||p||` for coefficients `c_0..c_m`, `m <= n`.
    pub fn ratio(&self, c: &[f64]) -> Result<f64> {
        if c.len() > self.n + 1 || c.is_empty() {
            return Err(Error::Domain(format!("need 1..={} coefficients, got {}", self.n + 1, c.len())));
        }
        let den = self.weighted_norm(&self.values, c);
        if den == 0.0 {
            return Err(Error::Domain("zero polynomial".into()));
        }
        Ok(self.weighted_norm(&self.derivs, c) / den)
    }
}

/// `||p^(k)|| / ||p||` by Gauss quadrature.
pub fn rayleigh_quotient(p: &PolySample, k: usize) -> Result<f64> {
    if k > p.degree_bound() {
        return Err(Error::Domain(format!("k = {k} exceeds degree bound {}", p.degree_bound())));
    }
    RayleighOracle::new(p.weight, p.degree_bound(), k)?.ratio(&p.coeffs)
}

/// Quotient of the solver's extremal polynomial divided by its constant.
pub fn closure_ratio(r: &MarkovResult) -> Result<f64> {
    let q = rayleigh_quotient(&PolySample::new(r.weight, r.full_coeffs())?, r.k)?;
    Ok(q / r.constant)
}

/// `count` polynomials of degree at most `n` with i.i.d. uniform
/// coefficients on `[-1, 1]`.
pub fn random_polys(weight: Weight, n: usize, count: usize, seed: u64) -> Vec<PolySample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| PolySample {
            weight,
            coeffs: (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        })
        .collect()
}

/// Largest quotient over `count` random polynomials.
pub fn random_ratio_max(weight: Weight, n: usize, k: usize, count: usize, seed: u64) -> Result<f64> {
    let oracle = RayleighOracle::new(weight, n, k)?;
    let samples = random_polys(weight, n, count, seed);
    samples
        .par_iter()
        .map(|p| oracle.ratio(&p.coeffs))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Both sides of
/// `(2 lambda_n + B'(0)) ||sqrt(A) P'||^2 <= ||A P''||^2 + lambda_n^2 ||P||^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
}

impl AmReport {
    /// `slack >= -tol * rhs`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol * self.rhs
    }
}

/// Evaluates the second-order inequality for `P` of degree at most
/// `n_for_lambda`, with equality exactly at the classical `Q_n`.
pub fn check_am_inequality(p: &PolySample, n_for_lambda: usize) -> Result<AmReport> {
    let n = n_for_lambda;
    if p.degree_bound() > n {
        return Err(Error::Domain(format!(
            "polynomial of degree bound {} exceeds n = {n}",
            p.degree_bound()
        )));
    }
    let (a, b, lambda) = p.weight.sturm_liouville(n);
    let (nodes, rt) = quadrature(p.weight, n + 1)?;
    let m = p.coeffs.len();
    let (mut s1, mut s2, mut s0) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
    for &t in &nodes {
        let tab = scaled_table(&rt, n, 2, t);
        let at = a[0] + t * (a[1] + t * a[2]);
        let (v, d1, d2) = (
            dot(&tab[0][..m], &p.coeffs),
            dot(&tab[1][..m], &p.coeffs),
            dot(&tab[2][..m], &p.coeffs),
        );
        s1.add(at * d1 * d1);
        s2.add((at * d2).powi(2));
        s0.add(v * v);
    }
    let lhs = (2.0 * lambda + b[1]) * s1.value();
    let rhs = s2.value() + lambda * lambda * s0.value();
    Ok(AmReport { lhs, rhs, slack: rhs - lhs })
}

/// Dominant eigenpair by power iteration from a fixed pseudo-random start.
/// Stops when the Rayleigh quotient changes by at most `tol` relative.
pub fn power_iteration_max(s: &DenseSymmetric, tol: f64, max_iter: usize) -> Result<EigenPair> {
    let n = s.order();
    if n == 0 {
        return Err(Error::Domain("empty matrix".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut lambda = dot(&x, &s.mul_vec(&x));
    for _ in 0..max_iter {
        let y = s.mul_vec(&x);
        let ny = norm2(&y);
        if ny == 0.0 {
            return Err(Error::Singular("iterate mapped to zero".into()));
        }
        x = y.into_iter().map(|v| v / ny).collect();
        let next = dot(&x, &s.mul_vec(&x));
        if (next - lambda).abs() <= tol * next.abs() {
            return Ok(EigenPair { value: next, vector: x });
        }
        lambda = next;
    }
    Err(Error::Convergence(format!("power iteration did not settle in {max_iter} steps")))
}
