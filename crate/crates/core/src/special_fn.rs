//! Gamma function, Pochhammer symbols, terminating 3F2 sums and Bessel
//! functions of the first kind.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::sum::Dd;
use crate::{Error, NeumaierSum, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k - 1))` for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Stirling's series is used for `x >= 10`; smaller arguments are shifted
/// upward with the recurrence `Gamma(x+1) = x Gamma(x)`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    let mut shift = 1.0;
    let mut y = x;
    let mut log_shift = 0.0;
    while y < 10.0 {
        shift *= y;
        y += 1.0;
        if shift > 1e280 {
            log_shift += shift.ln();
            shift = 1.0;
        }
    }
    log_shift += shift.ln();
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    Ok((y - 0.5) * y.ln() - y + LN_SQRT_2PI + series - log_shift)
}

/// Gamma function for `x > 0`, evaluated as `exp(ln_gamma(x))`.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |p, i| p * (a + i as f64))
}

/// Exact rational value of a finite `f64`.
pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite value {x}")))
}

/// Numerator and denominator of a terminating `3F2(-m, a2, a3; b1, b2; 1)`.
///
/// The pair is not reduced. The sum is nested from the last term so that
/// only integer multiply-adds are needed.
pub(crate) fn hyp_3f2_fraction(
    m: u32,
    a2: &BigRational,
    a3: &BigRational,
    b1: &BigRational,
    b2: &BigRational,
) -> Result<(BigInt, BigInt)> {
    let one = BigRational::one();
    for (i, b) in [b1, b2].iter().enumerate() {
        for j in 0..m {
            if (*b + BigRational::from_integer(j.into())).is_zero() {
                return Err(Error::Pole(format!(
                    "lower parameter b{} makes (b)_{} vanish",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in (0..m).rev() {
        let jr = BigRational::from_integer(j.into());
        let a1 = BigRational::from_integer(BigInt::from(j) - BigInt::from(m));
        let ratio = (a1 * (a2 + &jr) * (a3 + &jr))
            / ((b1 + &jr) * (b2 + &jr) * (&jr + &one));
        let (rn, rd) = ratio.into_raw();
        num = &rd * &den + rn * num;
        den *= rd;
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Ok((num, den))
}

/// Exact terminating `3F2(-m, a2, a3; b1, b2; 1)` over the rationals.
pub fn hyp_3f2_terminating_exact(
    m: u32,
    a2: &BigRational,
    a3: &BigRational,
    b1: &BigRational,
    b2: &BigRational,
) -> Result<BigRational> {
    let (num, den) = hyp_3f2_fraction(m, a2, a3, b1, b2)?;
    Ok(BigRational::new(num, den))
}

/// Terminating `3F2(a1, a2, a3; b1, b2; 1)` with `a1` a non-positive integer.
///
/// The `f64` arguments are converted exactly to rationals and the sum is
/// formed without rounding, so the result carries a single rounding error
/// regardless of cancellation between terms.
pub fn hyp_3f2_terminating(a1: i64, a2: f64, a3: f64, b1: f64, b2: f64) -> Result<f64> {
    if a1 > 0 {
        return Err(Error::Domain(format!(
            "first upper parameter must be a non-positive integer, got {a1}"
        )));
    }
    let m = u32::try_from(-a1).map_err(|_| Error::Domain("degree too large".into()))?;
    let (num, den) = hyp_3f2_fraction(
        m,
        &rational(a2)?,
        &rational(a3)?,
        &rational(b1)?,
        &rational(b2)?,
    )?;
    fraction_to_f64(num, den)
}

pub(crate) fn fraction_to_f64(num: BigInt, den: BigInt) -> Result<f64> {
    BigRational::new_raw(num, den)
        .to_f64()
        .ok_or_else(|| Error::Domain("rational value not representable".into()))
}

/// Largest argument evaluated by the ascending series.
const SERIES_LIMIT: f64 = 25.0;

/// Bessel function of the first kind `J_nu(x)` for `nu > -1`, `x >= 0`.
///
/// Arguments up to 25 use the ascending series in double-double arithmetic;
/// larger ones use Miller's backward recurrence normalized by Neumann's
/// addition series.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_j needs nu > -1, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return match nu {
            v if v == 0.0 => Ok(1.0),
            v if v > 0.0 => Ok(0.0),
            _ => Err(Error::Domain("J_nu(0) is unbounded for nu < 0".into())),
        };
    }
    if x <= SERIES_LIMIT {
        bessel_j_series(nu, x)
    } else {
        bessel_j_miller(nu, x)
    }
}

fn bessel_j_series(nu: f64, x: f64) -> Result<f64> {
    let half = Dd::two_sum(x * 0.5, 0.0);
    let q = half.mul(half).neg();
    let nu1 = Dd::two_sum(nu, 1.0);
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    let mut k = 0u32;
    loop {
        let kk = Dd::new(k as f64 + 1.0);
        let denom = kk.mul(nu1.add(Dd::new(k as f64)));
        term = term.mul(q).div(denom);
        sum = sum.add(term);
        k += 1;
        let small = term.hi.abs() <= 1e-33 * sum.hi.abs().max(1e-300);
        if (small && k as f64 > -q.hi) || k > 2000 {
            break;
        }
    }
    let log_pref = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0)?;
    Ok(sum.to_f64() * log_pref.exp())
}

fn bessel_j_miller(nu: f64, x: f64) -> Result<f64> {
    let (mu, order) = if nu >= 0.0 {
        (nu.fract(), nu.floor() as usize)
    } else {
        (nu + 1.0, 0)
    };
    let big = x.max(order as f64);
    let mut top = (big + 40.0 + 10.0 * big.sqrt()).ceil() as usize;
    top += top % 2;
    let mut f = vec![0.0; top + 2];
    f[top] = 1e-30;
    for j in (1..=top).rev() {
        f[j - 1] = 2.0 * (mu + j as f64) / x * f[j] - f[j + 1];
        if f[j - 1].abs() > 1e250 {
            for v in &mut f[j - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let mut g = gamma(mu + 1.0)?;
    let mut norm = NeumaierSum::new();
    norm.add(g * f[0]);
    let mut k = 1usize;
    while 2 * k <= top {
        norm.add((mu + 2.0 * k as f64) * g * f[2 * k]);
        g *= (mu + k as f64) / (k as f64 + 1.0);
        k += 1;
    }
    let scale = (0.5 * x).powf(mu) / norm.value();
    if nu >= 0.0 {
        Ok(f[order] * scale)
    } else {
        Ok((2.0 * mu / x * f[0] - f[1]) * scale)
    }
}

/// First positive zero `j_{nu,1}` of `J_nu` for `nu > -1`.
///
/// The root is bracketed by a forward scan from a lower bound (`nu` for
/// positive orders) and refined with bisection followed by safeguarded
/// Newton steps started from McMahon's estimate when it lies in the bracket.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_first_zero needs nu > -1, got {nu}"
        )));
    }
    let mut lo = nu.max(0.0);
    let step = 0.1;
    let mut hi = lo + step;
    let mut scans = 0;
    while bessel_j(nu, hi)? > 0.0 {
        lo = hi;
        hi += step;
        scans += 1;
        if scans > 100_000 {
            return Err(Error::Convergence("no sign change found".into()));
        }
    }
    // lo has J > 0 (or is the origin), hi has J <= 0
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(nu, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = (0.5 * nu + 0.75) * std::f64::consts::PI;
    let mcmahon = b - (4.0 * nu * nu - 1.0) / (8.0 * b);
    let mut x = if mcmahon > lo && mcmahon < hi {
        mcmahon
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..50 {
        let j = bessel_j(nu, x)?;
        if j > 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let dj = nu / x * j - bessel_j(nu + 1.0, x)?;
        let mut next = x - j / dj;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
