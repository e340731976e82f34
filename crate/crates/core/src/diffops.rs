//! Coefficients of derivatives of orthonormal polynomials in the same basis,
//! and the Gram matrices built from them.
//!
//! For a weight with orthonormal polynomials `q_0, q_1, ...` the matrix
//! `A_{n,k}` holds `a(nu, j) = (D^k q_j, q_nu)` for rows `nu = 0..=n-k` and
//! columns `j = k..=n` (stored at column `j - k`). It is upper triangular with
//! a positive diagonal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::linalg::{self, DenseSymmetric, GramSide, SymTridiagonal, UpperTriangular};
use crate::orthopoly::{ln_leading_coeffs, Weight};
use crate::special_fn::{fraction_to_f64, hyp_3f2_fraction, rational};
use crate::{Error, Result};

/// `A_{n,k}` for one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffCoeffSet {
    pub weight: Weight,
    pub n: usize,
    pub k: usize,
    pub matrix: UpperTriangular,
}

impl DiffCoeffSet {
    /// `(D^k q_j, q_nu)`; zero outside the stored triangle.
    pub fn coeff(&self, nu: usize, j: usize) -> f64 {
        if j < self.k || j > self.n || nu + self.k > j {
            return 0.0;
        }
        self.matrix.get(nu, j - self.k)
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

/// Hermite: `D^k q_j = sqrt(2^k j!/(j-k)!) q_{j-k}`, so the matrix is diagonal.
pub fn hermite_diff(n: usize, k: usize) -> Result<DiffCoeffSet> {
    check_nk(n, k)?;
    let m = n - k + 1;
    let matrix = UpperTriangular::from_fn(m, |i, c| {
        if i != c {
            return 0.0;
        }
        let j = c + k;
        ((j - k + 1)..=j).map(|t| (2.0 * t as f64).sqrt()).product()
    });
    Ok(DiffCoeffSet {
        weight: Weight::Hermite,
        n,
        k,
        matrix,
    })
}

fn binomial_f64(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Generalized Laguerre with parameter `s`.
pub fn laguerre_diff(n: usize, k: usize, s: f64) -> Result<DiffCoeffSet> {
    check_nk(n, k)?;
    let weight = Weight::laguerre(s)?;
    let m = n - k + 1;
    let matrix = UpperTriangular::from_fn(m, |nu, c| {
        let j = c + k;
        let gap = j - nu;
        let ratio: f64 = (0..gap)
            .map(|i| (nu + 1 + i) as f64 / (nu as f64 + s + 1.0 + i as f64))
            .product();
        let sign = if (j - k - nu).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * ratio.sqrt() * binomial_f64(gap - 1, k - 1)
    });
    Ok(DiffCoeffSet {
        weight,
        n,
        k,
        matrix,
    })
}

fn binomial_big(n: usize, r: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..r {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// Exact monic recurrence coefficient `beta_i` (`i >= 1`) of the Jacobi weight.
fn jacobi_beta_exact(a: &BigRational, b: &BigRational, i: usize) -> BigRational {
    let one = BigRational::one();
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    let ab = a + b;
    if i == 1 {
        let t = &int(2) + &ab;
        return int(4) * (&one + a) * (&one + b) / (&t * &t * (&int(3) + &ab));
    }
    let ir = int(i);
    let t = int(2 * i) + &ab;
    int(4) * &ir * (&ir + a) * (&ir + b) * (&ir + &ab)
        / (&t * &t * (&t + &one) * (&t - &one))
}

/// `gamma_j / gamma_nu` ratios from exact products of recurrence coefficients.
struct LeadRatios {
    /// `prod_{i<=j} 1/beta_i` when representable
    direct: Option<Vec<f64>>,
    ln_lead: Vec<f64>,
}

impl LeadRatios {
    fn new(weight: Weight, a: &BigRational, b: &BigRational, n: usize) -> Result<Self> {
        let mut prod = BigRational::one();
        let mut direct = vec![1.0];
        for i in 1..=n {
            prod /= jacobi_beta_exact(a, b, i);
            direct.push(prod.to_f64().unwrap_or(f64::INFINITY));
        }
        let ok = direct.iter().all(|v| v.is_finite() && *v > 0.0);
        Ok(Self {
            direct: ok.then_some(direct),
            ln_lead: ln_leading_coeffs(weight, n)?,
        })
    }

    fn ratio(&self, j: usize, nu: usize) -> f64 {
        match &self.direct {
            Some(d) => (d[j] / d[nu]).sqrt(),
            None => (self.ln_lead[j] - self.ln_lead[nu]).exp(),
        }
    }
}

/// Jacobi weight `(1-t)^alpha (1+t)^beta`.
///
/// Each coefficient is `k! C(j,k) (gamma_j/gamma_nu) c_{nu,j-k}` where
/// `c_{nu,m}` expands the monic Jacobi polynomial of degree `m` with
/// parameters `(alpha+k, beta+k)` in monic `(alpha, beta)` polynomials.
/// The connection coefficient is a terminating 3F2 at unit argument that
/// cancels badly in floating point, so it and its rational prefactor are
/// formed exactly and rounded once.
pub fn jacobi_diff(n: usize, k: usize, alpha: f64, beta: f64) -> Result<DiffCoeffSet> {
    check_nk(n, k)?;
    let weight = Weight::jacobi(alpha, beta)?;
    let a = rational(alpha)?;
    let b = rational(beta)?;
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    let lead = LeadRatios::new(weight, &a, &b, n)?;
    let ab = &a + &b;
    let kf = int(k);
    let m_rows = n - k + 1;
    let mut matrix = UpperTriangular::zeros(m_rows);
    let k_fact: BigInt = (1..=k).map(BigInt::from).product();
    for nu in 0..m_rows {
        let nur = int(nu);
        for c in nu..m_rows {
            let j = c + k;
            let m = c;
            let p = m - nu;
            let mr = int(m);
            // 3F2(-(m-nu), m+nu+alpha+beta+2k+1, nu+alpha+1; nu+alpha+k+1, 2nu+alpha+beta+2; 1)
            let a2 = &mr + &nur + &ab + int(2 * k + 1);
            let a3 = &nur + &a + int(1);
            let b1 = &nur + &a + &kf + int(1);
            let b2 = int(2 * nu + 2) + &ab;
            let (hn, hd) = hyp_3f2_fraction(p as u32, &a2, &a3, &b1, &b2)?;
            // 2^p C(m,nu) (alpha+k+nu+1)_p / (alpha+beta+2k+m+nu+1)_p
            let mut num = &k_fact * binomial_big(j, k) * binomial_big(m, nu) * (BigInt::one() << p);
            let mut den = BigInt::one();
            for i in 0..p {
                let up = &a + int(k + nu + 1 + i);
                let down = &ab + int(2 * k + m + nu + 1 + i);
                let q = up / down;
                let (qn, qd) = q.into_raw();
                num *= qn;
                den *= qd;
            }
            let conn = fraction_to_f64(num * hn, den * hd)?;
            matrix.set(nu, c, conn * lead.ratio(j, nu));
        }
    }
    Ok(DiffCoeffSet {
        weight,
        n,
        k,
        matrix,
    })
}

/// `A_{n,k}` for any classical weight.
pub fn diff_coeffs(weight: Weight, n: usize, k: usize) -> Result<DiffCoeffSet> {
    match weight {
        Weight::Hermite => hermite_diff(n, k),
        Weight::Laguerre { s } => laguerre_diff(n, k, s),
        Weight::Jacobi { alpha, beta } => jacobi_diff(n, k, alpha, beta),
    }
}

/// `B = A^T A`; its largest eigenvalue is `M_{n,k}^2`.
pub fn b_matrix(set: &DiffCoeffSet) -> DenseSymmetric {
    linalg::gram(GramSide::Left, &set.matrix)
}

/// Orientation of the inverse Gram product used for each family.
///
/// Hermite and Laguerre use `A^{-T} A^{-1}`; Jacobi uses `A^{-1} A^{-T}`,
/// which is `B^{-1}` itself so its eigenvectors are coefficient vectors.
/// Both have the spectrum of `B^{-1}`.
pub fn c_side(weight: Weight) -> GramSide {
    match weight {
        Weight::Jacobi { .. } => GramSide::Right,
        _ => GramSide::Left,
    }
}

/// `C_{n,k}`; its smallest eigenvalue is `M_{n,k}^{-2}`.
pub fn c_matrix(set: &DiffCoeffSet) -> Result<DenseSymmetric> {
    linalg::inverse_gram(c_side(set.weight), &set.matrix)
}

/// Bidiagonal `A_{n,1}(s)^{-1}`: diagonal `sqrt(1 + s/i)`, superdiagonal 1.
pub fn laguerre_c1_factor(n: usize, s: f64) -> Result<UpperTriangular> {
    Weight::laguerre(s)?;
    check_nk(n, 1)?;
    Ok(UpperTriangular::from_fn(n, |i, j| {
        if i == j {
            (1.0 + s / (i + 1) as f64).sqrt()
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    }))
}

/// Tridiagonal `C_{n,1}(s)` of the Laguerre weight in closed form.
pub fn laguerre_c_tridiag(n: usize, s: f64) -> Result<SymTridiagonal> {
    Weight::laguerre(s)?;
    check_nk(n, 1)?;
    let diag = (0..n)
        .map(|i| {
            if i == 0 {
                1.0 + s
            } else {
                2.0 + s / (i + 1) as f64
            }
        })
        .collect();
    let off = (0..n - 1).map(|i| (1.0 + s / (i + 1) as f64).sqrt()).collect();
    SymTridiagonal::new(diag, off)
}

/// Banded `A_{n,2}(0)^{-1}` with rows `(1, 2, 1)`.
pub fn laguerre_c2_factor(n: usize) -> Result<UpperTriangular> {
    check_nk(n, 2)?;
    Ok(UpperTriangular::from_fn(n - 1, |i, j| match j - i {
        0 => 1.0,
        1 => 2.0,
        2 => 1.0,
        _ => 0.0,
    }))
}

/// Five-diagonal `C_{n,2}(0)` of order `n-1` from its stencil: rows
/// `(1,2,1)`, `(2,5,4,1)` at the top and `(1,4,6,4,1)` elsewhere.
pub fn laguerre_c_pentadiag(n: usize) -> Result<DenseSymmetric> {
    check_nk(n, 2)?;
    Ok(DenseSymmetric::from_fn(n - 1, |i, j| match (i - j, j) {
        (0, 0) => 1.0,
        (0, 1) => 5.0,
        (0, _) => 6.0,
        (1, 0) => 2.0,
        (1, _) => 4.0,
        (2, _) => 1.0,
        _ => 0.0,
    }))
}

/// Chebyshev weights of the third and fourth kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebyshevKind {
    /// `alpha = -1/2, beta = 1/2`
    Third,
    /// `alpha = 1/2, beta = -1/2`
    Fourth,
}

/// Closed-form five-diagonal `C_{n,1}` for the third- and fourth-kind
/// Chebyshev weights (`n >= 3`).
pub fn chebyshev34_c_closed_form(n: usize, kind: ChebyshevKind) -> Result<DenseSymmetric> {
    if n < 3 {
        return Err(Error::Domain(format!("closed form needs n >= 3, got {n}")));
    }
    let sign = match kind {
        ChebyshevKind::Third => 1.0,
        ChebyshevKind::Fourth => -1.0,
    };
    Ok(DenseSymmetric::from_fn(n, |r, c| {
        let i = c + 1;
        let f = i as f64;
        match r - c {
            0 if i <= n - 2 => (f * f + f + 1.0) / (2.0 * f * f * (f + 1.0).powi(2)),
            0 if i == n - 1 => (f * f + 2.0 * f + 2.0) / (4.0 * f * f * (f + 1.0).powi(2)),
            0 => 1.0 / (4.0 * f * f),
            1 if i <= n - 2 => -sign / (2.0 * f * (f + 1.0).powi(2) * (f + 2.0)),
            1 => -sign / (4.0 * f * (f + 1.0).powi(2)),
            2 => -1.0 / (4.0 * (f + 1.0) * (f + 2.0)),
            _ => 0.0,
        }
    }))
}

/// Gegenbauer parameters with closed-form split matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GegenbauerCase {
    /// `alpha = 0`
    Legendre,
    /// `alpha = -1/2`
    Chebyshev1,
    /// `alpha = 1/2`
    Chebyshev2,
}

impl GegenbauerCase {
    pub fn from_alpha(alpha: f64) -> Option<Self> {
        match alpha {
            a if a == 0.0 => Some(Self::Legendre),
            a if a == -0.5 => Some(Self::Chebyshev1),
            a if a == 0.5 => Some(Self::Chebyshev2),
            _ => None,
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            Self::Legendre => 0.0,
            Self::Chebyshev1 => -0.5,
            Self::Chebyshev2 => 0.5,
        }
    }
}

/// The two tridiagonal blocks of a Gegenbauer `C_n` whose first
/// off-diagonal vanishes: `odd` acts on coefficients of `q_1, q_3, ...`,
/// `even` on `q_2, q_4, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub n: usize,
    pub odd: SymTridiagonal,
    pub even: Option<SymTridiagonal>,
}

impl SplitPair {
    /// Positions in the coefficient vector (0 = coefficient of `q_1`)
    /// covered by the odd and even blocks.
    pub fn positions(&self, even: bool) -> Vec<usize> {
        let start = usize::from(even);
        (start..self.n).step_by(2).collect()
    }
}

/// Recurrence-style description `(alpha_nu, beta_nu)` of a block; the block
/// is `-J` with `J` the Jacobi matrix of those coefficients.
fn block_from_recurrence(m: usize, alpha: impl Fn(usize) -> f64, beta: impl Fn(usize) -> f64) -> Result<SymTridiagonal> {
    SymTridiagonal::new(
        (0..m).map(|v| -alpha(v)).collect(),
        (1..m).map(|v| -beta(v).sqrt()).collect(),
    )
}

/// Closed-form split of `C_n` for the Legendre and Chebyshev weights.
///
/// For `n < 3` the closed forms do not apply to every case and the split
/// is taken from the assembled matrix instead.
pub fn gegenbauer_split(n: usize, case: GegenbauerCase) -> Result<SplitPair> {
    check_nk(n, 1)?;
    if n < 3 {
        let a = case.alpha();
        return split_generic(&c_matrix(&jacobi_diff(n, 1, a, a)?)?);
    }
    let mo = n.div_ceil(2);
    let me = n / 2;
    let f = |v: usize| v as f64;
    let (odd, even) = match case {
        GegenbauerCase::Legendre => (
            block_from_recurrence(
                mo,
                |v| {
                    let x = 4.0 * f(v);
                    if v + 1 < mo {
                        -2.0 / ((x + 1.0) * (x + 5.0))
                    } else {
                        -1.0 / ((x + 1.0) * (x + 3.0))
                    }
                },
                |v| {
                    let x = 4.0 * f(v);
                    1.0 / ((x - 1.0) * (x + 1.0) * (x + 1.0) * (x + 3.0))
                },
            )?,
            block_from_recurrence(
                me,
                |v| {
                    let x = 4.0 * f(v);
                    if v + 1 < me {
                        -2.0 / ((x + 3.0) * (x + 7.0))
                    } else {
                        -1.0 / ((x + 3.0) * (x + 5.0))
                    }
                },
                |v| {
                    let x = 4.0 * f(v);
                    1.0 / ((x + 1.0) * (x + 3.0) * (x + 3.0) * (x + 5.0))
                },
            )?,
        ),
        GegenbauerCase::Chebyshev1 => (
            block_from_recurrence(
                mo,
                |v| {
                    let t = 2.0 * f(v) + 1.0;
                    if v == 0 && mo > 1 {
                        -0.75
                    } else if v + 1 < mo {
                        -1.0 / (2.0 * t * t)
                    } else {
                        -1.0 / (4.0 * t * t)
                    }
                },
                |v| {
                    let t = 4.0 * f(v) * f(v) - 1.0;
                    1.0 / (16.0 * t * t)
                },
            )?,
            block_from_recurrence(
                me,
                |v| {
                    let t = f(v) + 1.0;
                    if v + 1 < me {
                        -1.0 / (8.0 * t * t)
                    } else {
                        -1.0 / (16.0 * t * t)
                    }
                },
                |v| 1.0 / (256.0 * f(v).powi(2) * (f(v) + 1.0).powi(2)),
            )?,
        ),
        GegenbauerCase::Chebyshev2 => (
            block_from_recurrence(
                mo,
                |v| {
                    let v = f(v);
                    let (t, u) = (2.0 * v + 1.0, 2.0 * v + 3.0);
                    -(4.0 * v * v + 8.0 * v + 5.0) / (2.0 * t * t * u * u)
                },
                |v| 1.0 / (16.0 * (2.0 * f(v) + 1.0).powi(4)),
            )
            .map(|mut b| {
                let t = 2.0 * (mo - 1) as f64 + 1.0;
                b.set_last_diag(1.0 / (4.0 * t * t));
                b
            })?,
            block_from_recurrence(
                me,
                |v| {
                    let v = f(v);
                    -(2.0 * v * v + 6.0 * v + 5.0) / (16.0 * (v + 1.0).powi(2) * (v + 2.0).powi(2))
                },
                |v| 1.0 / (256.0 * (f(v) + 1.0).powi(4)),
            )
            .map(|mut b| {
                let t = me as f64;
                b.set_last_diag(1.0 / (16.0 * t * t));
                b
            })?,
        ),
    };
    Ok(SplitPair {
        n,
        odd,
        even: Some(even),
    })
}

/// Splits any symmetric `C_n` with a vanishing first off-diagonal and
/// bandwidth at most two into its odd and even tridiagonal blocks.
pub fn split_generic(c: &DenseSymmetric) -> Result<SplitPair> {
    let n = c.order();
    if n == 0 {
        return Err(Error::Structure("empty matrix".into()));
    }
    let scale = (0..n).fold(0.0f64, |m, i| m.max(c.get(i, i).abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale.max(1.0);
    for i in 0..n {
        for j in 0..i {
            let d = i - j;
            if (d % 2 == 1 || d > 2) && c.get(i, j).abs() > tol {
                return Err(Error::Structure(format!(
                    "entry ({i},{j}) = {:e} breaks the checkerboard band structure",
                    c.get(i, j)
                )));
            }
        }
    }
    let block = |start: usize| -> Result<Option<SymTridiagonal>> {
        let idx: Vec<usize> = (start..n).step_by(2).collect();
        if idx.is_empty() {
            return Ok(None);
        }
        let diag = idx.iter().map(|&i| c.get(i, i)).collect();
        let off = idx.windows(2).map(|w| c.get(w[0], w[1])).collect();
        Ok(Some(SymTridiagonal::new(diag, off)?))
    };
    Ok(SplitPair {
        n,
        odd: block(0)?.expect("n >= 1"),
        even: block(1)?,
    })
}
