//! Symmetric eigenproblems and triangular matrix utilities.
//!
//! Tridiagonal spectra come from Sturm-sequence bisection, eigenvectors from
//! inverse iteration. Dense symmetric matrices are first reduced to
//! tridiagonal form by Householder reflections.

use crate::sum::{dot, norm2, two_prod, Dd};
use crate::{Error, NeumaierSum, Result};

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::Structure(format!(
                "tridiagonal needs n >= 1 diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub(crate) fn set_last_diag(&mut self, v: f64) {
        if let Some(d) = self.diag.last_mut() {
            *d = v;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut s = NeumaierSum::new();
                s.add(self.diag[i] * x[i]);
                if i > 0 {
                    s.add(self.offdiag[i - 1] * x[i - 1]);
                }
                if i + 1 < n {
                    s.add(self.offdiag[i] * x[i + 1]);
                }
                s.value()
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        DenseSymmetric::from_fn(self.order(), |i, j| {
            if i == j {
                self.diag[i]
            } else if i == j + 1 {
                self.offdiag[j]
            } else {
                0.0
            }
        })
    }

    /// Gershgorin interval containing the spectrum.
    fn gershgorin(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }
}

/// Dense symmetric matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetric {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    /// Builds the matrix from `f(i, j)` evaluated for `j <= i`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.data[i * (i + 1) / 2 + j] = f(i, j);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn idx(i: usize, j: usize) -> usize {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[Self::idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[Self::idx(i, j)] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).collect::<NeumaierSum>().value())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = NeumaierSum::new();
        for i in 0..self.n {
            for j in 0..self.n {
                s.add(self.get(i, j).powi(2));
            }
        }
        s.value().sqrt()
    }

    /// Largest `|i - j|` with a nonzero entry.
    pub fn bandwidth(&self, tol: f64) -> usize {
        let mut bw = 0;
        for i in 0..self.n {
            for j in 0..i {
                if self.get(i, j).abs() > tol {
                    bw = bw.max(i - j);
                }
            }
        }
        bw
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> DenseSymmetric {
        DenseSymmetric::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }
}

/// Upper-triangular matrix stored row by row, entries `j >= i` only.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangular {
    n: usize,
    data: Vec<f64>,
}

impl UpperTriangular {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    /// Builds the matrix from `f(i, j)` evaluated for `j >= i`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let k = m.idx(i, j);
                m.data[k] = f(i, j);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n - i * (i + 1) / 2 + j
    }

    /// Entry `(i, j)`; zero below the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j < i {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(j >= i, "write below the diagonal of an upper-triangular matrix");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `U x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (i..self.n).map(|j| self.get(i, j) * x[j]).collect::<NeumaierSum>().value())
            .collect()
    }

    /// `U^T x`
    pub fn mul_transpose_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..=j).map(|i| self.get(i, j) * x[i]).collect::<NeumaierSum>().value())
            .collect()
    }

    /// Solves `U x = b` by back substitution.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let d = self.get(i, i);
            if d == 0.0 {
                return Err(Error::Singular(format!("zero pivot at row {i}")));
            }
            let mut s = NeumaierSum::new();
            s.add(b[i]);
            for j in i + 1..n {
                s.add(-self.get(i, j) * x[j]);
            }
            x[i] = s.value() / d;
        }
        Ok(x)
    }
}

/// Eigenvalue with a unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Which end of the spectrum to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

/// Side on which the transpose sits in a Gram product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSide {
    /// `U^T U`
    Left,
    /// `U U^T`
    Right,
}

/// Number of eigenvalues of `t` strictly below `x`.
pub fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt() * t.scale();
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..t.order() {
        let b2 = if i > 0 { t.offdiag[i - 1].powi(2) } else { 0.0 };
        d = t.diag[i] - x - if i > 0 { b2 / d } else { 0.0 };
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (0-based) by bisection.
pub fn tridiag_kth_eigenvalue(t: &SymTridiagonal, k: usize) -> f64 {
    let (mut lo, mut hi) = t.gershgorin();
    let pad = 4.0 * f64::EPSILON * t.scale();
    lo -= pad;
    hi += pad;
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(t, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues in increasing order.
pub fn tridiag_eigenvalues(t: &SymTridiagonal) -> Vec<f64> {
    (0..t.order()).map(|k| tridiag_kth_eigenvalue(t, k)).collect()
}

/// Solves `(t - shift I) x = b` by Gaussian elimination with partial
/// pivoting; zero pivots are replaced by a tiny multiple of the matrix scale.
fn shifted_solve(t: &SymTridiagonal, shift: f64, b: &[f64]) -> Vec<f64> {
    let n = t.order();
    let tiny = f64::EPSILON * t.scale();
    // rows hold (main, first super, second super)
    let mut d: Vec<f64> = t.diag.iter().map(|a| a - shift).collect();
    let mut u1: Vec<f64> = t.offdiag.clone();
    u1.push(0.0);
    let mut u2 = vec![0.0; n];
    let mut l = t.offdiag.clone();
    let mut rhs = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if l[i].abs() > d[i].abs() {
            // swap rows i and i+1
            let (di, u1i, u2i) = (d[i], u1[i], u2[i]);
            d[i] = l[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            let f = di / d[i];
            d[i + 1] = u1i - f * u1[i];
            u1[i + 1] = u2i - f * u2[i];
            rhs.swap(i, i + 1);
            rhs[i + 1] -= f * rhs[i];
        } else {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = l[i] / d[i];
            d[i + 1] -= f * u1[i];
            u1[i + 1] -= f * u2[i];
            rhs[i + 1] -= f * rhs[i];
        }
        l[i] = 0.0;
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    x
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = norm2(v);
    if nrm > 0.0 && nrm.is_finite() {
        for x in v.iter_mut() {
            *x /= nrm;
        }
    }
    nrm
}

/// Unit eigenvector for an eigenvalue approximation `lambda` by inverse
/// iteration.
pub fn tridiag_eigenvector(t: &SymTridiagonal, lambda: f64) -> Result<Vec<f64>> {
    let n = t.order();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * ((i as f64) * 0.7).sin()).collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut w = shifted_solve(t, lambda, &v);
        let nrm = normalize(&mut w);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::Convergence("inverse iteration broke down".into()));
        }
        v = w;
    }
    Ok(v)
}

/// Rayleigh quotient `v^T t v / v^T v` accumulated in double-double, so the
/// only error left comes from the vector itself and the stored entries.
pub fn tridiag_rayleigh(t: &SymTridiagonal, v: &[f64]) -> f64 {
    let n = t.order();
    let mut num = Dd::new(0.0);
    let mut den = Dd::new(0.0);
    for i in 0..n {
        let vv = two_prod(v[i], v[i]);
        den = den.add(vv);
        num = num.add(vv.mul(Dd::new(t.diag[i])));
        if i + 1 < n {
            let cross = two_prod(v[i], v[i + 1]).mul(Dd::new(2.0 * t.offdiag[i]));
            num = num.add(cross);
        }
    }
    num.div(den).to_f64()
}

/// Smallest or largest eigenpair of a symmetric tridiagonal matrix.
///
/// The eigenvalue is the Rayleigh quotient of the inverse-iteration vector.
pub fn tridiag_eigen_extreme(t: &SymTridiagonal, which: Extreme) -> Result<EigenPair> {
    let k = match which {
        Extreme::Min => 0,
        Extreme::Max => t.order() - 1,
    };
    let lambda = tridiag_kth_eigenvalue(t, k);
    let vector = tridiag_eigenvector(t, lambda)?;
    let value = tridiag_rayleigh(t, &vector);
    Ok(EigenPair { value, vector })
}

/// Householder reflector `I - tau v v^T` acting on rows `offset..`.
#[derive(Debug, Clone)]
pub struct Reflector {
    offset: usize,
    v: Vec<f64>,
    tau: f64,
}

impl Reflector {
    fn apply(&self, x: &mut [f64]) {
        let tail = &mut x[self.offset..];
        let s = dot(&self.v, tail) * self.tau;
        for (xi, vi) in tail.iter_mut().zip(&self.v) {
            *xi -= s * vi;
        }
    }
}

/// Reduces `s` to tridiagonal form `Q^T s Q`, returning the reflectors
/// whose product is `Q`.
pub fn householder_tridiagonalize(s: &DenseSymmetric) -> Result<(SymTridiagonal, Vec<Reflector>)> {
    let n = s.order();
    if n == 0 {
        return Err(Error::Structure("empty matrix".into()));
    }
    let mut a = s.to_rows();
    let mut refl = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        let alpha = norm2(&x);
        if alpha == 0.0 {
            continue;
        }
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x.clone();
        v[0] += sign * alpha;
        let vtv = dot(&v, &v);
        let tau = 2.0 / vtv;
        let m = n - k - 1;
        // p = tau A22 v
        let p: Vec<f64> = (0..m)
            .map(|i| tau * (0..m).map(|j| a[k + 1 + i][k + 1 + j] * v[j]).collect::<NeumaierSum>().value())
            .collect();
        let kk = 0.5 * tau * dot(&p, &v);
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[k + 1 + i][k + 1 + j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        a[k + 1][k] = -sign * alpha;
        a[k][k + 1] = -sign * alpha;
        for i in k + 2..n {
            a[i][k] = 0.0;
            a[k][i] = 0.0;
        }
        refl.push(Reflector { offset: k + 1, v, tau });
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    let off = (0..n - 1).map(|i| a[i + 1][i]).collect();
    Ok((SymTridiagonal::new(diag, off)?, refl))
}

fn back_transform(refl: &[Reflector], y: &mut [f64]) {
    for r in refl.iter().rev() {
        r.apply(y);
    }
}

/// Smallest or largest eigenpair of a dense symmetric matrix.
pub fn dense_sym_eigen_extreme(s: &DenseSymmetric, which: Extreme) -> Result<EigenPair> {
    let (t, refl) = householder_tridiagonalize(s)?;
    let mut pair = tridiag_eigen_extreme(&t, which)?;
    back_transform(&refl, &mut pair.vector);
    normalize(&mut pair.vector);
    pair.value = dot(&pair.vector, &s.mul_vec(&pair.vector));
    Ok(pair)
}

/// All eigenvalues of a dense symmetric matrix in increasing order.
pub fn dense_sym_eigenvalues(s: &DenseSymmetric) -> Result<Vec<f64>> {
    let (t, _) = householder_tridiagonalize(s)?;
    Ok(tridiag_eigenvalues(&t))
}

/// Inverse of a nonsingular upper-triangular matrix.
pub fn upper_tri_inverse(u: &UpperTriangular) -> Result<UpperTriangular> {
    let n = u.order();
    for i in 0..n {
        if u.get(i, i) == 0.0 {
            return Err(Error::Singular(format!("zero diagonal entry at {i}")));
        }
    }
    let mut inv = UpperTriangular::zeros(n);
    for j in 0..n {
        inv.set(j, j, 1.0 / u.get(j, j));
        for i in (0..j).rev() {
            let s: NeumaierSum = (i + 1..=j).map(|l| u.get(i, l) * inv.get(l, j)).collect();
            inv.set(i, j, -s.value() / u.get(i, i));
        }
    }
    Ok(inv)
}

/// Gram matrix `U^T U` (left) or `U U^T` (right).
pub fn gram(side: GramSide, u: &UpperTriangular) -> DenseSymmetric {
    let n = u.order();
    DenseSymmetric::from_fn(n, |i, j| {
        let s: NeumaierSum = match side {
            GramSide::Left => (0..=j.min(i)).map(|l| u.get(l, i) * u.get(l, j)).collect(),
            GramSide::Right => (i.max(j)..n).map(|l| u.get(i, l) * u.get(j, l)).collect(),
        };
        s.value()
    })
}

/// Gram matrix of the inverse: `U^{-T} U^{-1}` (left) or `U^{-1} U^{-T}` (right).
pub fn inverse_gram(side: GramSide, u: &UpperTriangular) -> Result<DenseSymmetric> {
    Ok(gram(side, &upper_tri_inverse(u)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn to_nalgebra(s: &DenseSymmetric) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(s.order(), s.order(), |i, j| s.get(i, j))
    }

    fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> DenseSymmetric {
        DenseSymmetric::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    fn toeplitz(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn toeplitz_spectrum() {
        let n = 37;
        let ev = tridiag_eigenvalues(&toeplitz(n));
        for (k, v) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-14);
        }
    }

    #[test]
    fn sturm_counts_are_monotone() {
        let t = toeplitz(10);
        let mut prev = 0;
        for i in 0..=50 {
            let c = sturm_count(&t, -0.1 + i as f64 * 0.09);
            assert!(c >= prev);
            prev = c;
        }
        assert_eq!(prev, 10);
        assert_eq!(sturm_count(&t, -1.0), 0);
    }

    #[test]
    fn tridiagonal_structure_checked() {
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
    }

    #[test]
    fn extreme_pairs_satisfy_residual_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 5, 20, 60] {
            let t = SymTridiagonal::new(
                (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )
            .unwrap();
            let fro = t.to_dense().frobenius_norm();
            for which in [Extreme::Min, Extreme::Max] {
                let p = tridiag_eigen_extreme(&t, which).unwrap();
                let r = t.mul_vec(&p.vector);
                let res: Vec<f64> = r.iter().zip(&p.vector).map(|(a, b)| a - p.value * b).collect();
                assert!(norm2(&res) <= 1e-10 * fro, "n={n}");
                assert_relative_eq!(norm2(&p.vector), 1.0, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn dense_matches_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 3, 8, 25, 50] {
            let s = random_sym(&mut rng, n);
            let mut want: Vec<f64> = to_nalgebra(&s).symmetric_eigenvalues().iter().copied().collect();
            want.sort_by(f64::total_cmp);
            let got = dense_sym_eigenvalues(&s).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12, "n={n}");
            }
            let fro = s.frobenius_norm();
            for which in [Extreme::Min, Extreme::Max] {
                let p = dense_sym_eigen_extreme(&s, which).unwrap();
                let r = s.mul_vec(&p.vector);
                let res: Vec<f64> = r.iter().zip(&p.vector).map(|(a, b)| a - p.value * b).collect();
                assert!(norm2(&res) <= 1e-10 * fro);
                let target = if which == Extreme::Min { want[0] } else { want[n - 1] };
                assert!((p.value - target).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn householder_preserves_spectrum_of_tridiagonal_input() {
        let t = toeplitz(9);
        let (t2, _) = householder_tridiagonalize(&t.to_dense()).unwrap();
        let a = tridiag_eigenvalues(&t);
        let b = tridiag_eigenvalues(&t2);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    fn random_upper(rng: &mut ChaCha8Rng, n: usize) -> UpperTriangular {
        UpperTriangular::from_fn(n, |i, j| {
            if i == j {
                rng.gen_range(1.0..2.0)
            } else {
                rng.gen_range(-1.0..1.0)
            }
        })
    }

    #[test]
    fn triangular_storage_roundtrip() {
        let n = 6;
        let u = UpperTriangular::from_fn(n, |i, j| (10 * i + j) as f64);
        for i in 0..n {
            for j in 0..n {
                let want = if j >= i { (10 * i + j) as f64 } else { 0.0 };
                assert_eq!(u.get(i, j), want);
            }
        }
    }

    #[test]
    fn inverse_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 15;
        let u = random_upper(&mut rng, n);
        let inv = upper_tri_inverse(&u).unwrap();
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|l| u.get(i, l) * inv.get(l, j)).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-10);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| i as f64 - 3.0).collect();
        let x = u.solve(&b).unwrap();
        let back = u.mul_vec(&x);
        for (p, q) in back.iter().zip(&b) {
            assert!((p - q).abs() < 1e-11);
        }
        let mut sing = u.clone();
        sing.set(4, 4, 0.0);
        assert!(matches!(upper_tri_inverse(&sing), Err(Error::Singular(_))));
        assert!(matches!(sing.solve(&b), Err(Error::Singular(_))));
    }

    #[test]
    fn gram_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 7;
        let u = random_upper(&mut rng, n);
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| u.get(i, j));
        let left = m.transpose() * &m;
        let right = &m * m.transpose();
        let gl = gram(GramSide::Left, &u);
        let gr = gram(GramSide::Right, &u);
        for i in 0..n {
            for j in 0..n {
                assert!((gl.get(i, j) - left[(i, j)]).abs() < 1e-13);
                assert!((gr.get(i, j) - right[(i, j)]).abs() < 1e-13);
            }
        }
        // Same spectrum either way.
        let a = dense_sym_eigenvalues(&gl).unwrap();
        let b = dense_sym_eigenvalues(&gr).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 * a[n - 1]);
        }
        let il = inverse_gram(GramSide::Left, &u).unwrap();
        let c = dense_sym_eigenvalues(&il).unwrap();
        // eigenvalues of (U U^T)^{-1} are reciprocals
        for (x, y) in c.iter().zip(b.iter().rev()) {
            assert_relative_eq!(x * y, 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn precise_rayleigh_resolves_tiny_eigenvalues() {
        // diag(1, eps^2) rotated: eigenvalue eps^2 sits far below rounding of entries ~1
        let n = 30;
        let t = SymTridiagonal::new(
            (0..n).map(|i| if i == 0 { 1.0 } else { 2.0 }).collect(),
            vec![-1.0; n - 1],
        )
        .unwrap();
        // Eigenvalues 4 sin^2((2k-1) pi / (2(2n+1))) as for the monic recurrence 1,2,2,...
        let p = tridiag_eigen_extreme(&t, Extreme::Min).unwrap();
        let want = 4.0 * (PI / (2.0 * (2 * n + 1) as f64)).sin().powi(2);
        assert_relative_eq!(p.value, want, max_relative = 1e-13);
    }

    #[test]
    fn bandwidth_and_submatrix() {
        let t = toeplitz(5).to_dense();
        assert_eq!(t.bandwidth(0.0), 1);
        let sub = t.submatrix(&[0, 2, 4]);
        assert_eq!(sub.bandwidth(0.0), 0);
        assert_eq!(sub.get(1, 1), 2.0);
    }
}
