//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is the carrier for every operator and superoperator in
//! the crate. Storage is delegated to `faer`; products, LU solves and the
//! singular value decomposition run single-threaded so results are
//! reproducible bit-for-bit on any machine.
//!
//! The vectorization convention is column stacking, which fixes
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::Solve;
use faer::{Accum, Mat, Par};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default backward-error tolerance for [`expm`].
pub const EXPM_DEFAULT_TOL: f64 = 1e-13;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// A dense complex double-precision matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: Mat<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
        Self { inner: Mat::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix dimensions must be at least 1x1");
        Self { inner: Mat::identity(n, n) }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
        Self { inner: Mat::from_fn(rows, cols, f) }
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", entries.len()),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("from_row_major"));
        }
        Ok(Self::from_fn(rows, cols, |i, j| entries[i * cols + j]))
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    /// Column `j` as a contiguous slice.
    pub fn col(&self, j: usize) -> &[C64] {
        self.inner.col_as_slice(j)
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        self.inner.col_as_slice_mut(j)
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "matmul shape mismatch: {:?} x {:?}",
            self.shape(),
            rhs.shape()
        );
        let mut out = Mat::<C64>::zeros(self.rows(), rhs.cols());
        matmul(out.as_mut(), Accum::Replace, self.inner.as_ref(), rhs.inner.as_ref(), C64::new(1.0, 0.0), Par::Seq);
        Self { inner: out }
    }

    /// `self += alpha * lhs * rhs`
    pub fn add_matmul(&mut self, alpha: C64, lhs: &ComplexMatrix, rhs: &ComplexMatrix) {
        matmul(self.inner.as_mut(), Accum::Add, lhs.inner.as_ref(), rhs.inner.as_ref(), alpha, Par::Seq);
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols(), self.rows(), |i, j| self.inner[(j, i)].conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols(), self.rows(), |i, j| self.inner[(j, i)])
    }

    pub fn conj(&self) -> ComplexMatrix {
        self.map(|z| z.conj())
    }

    pub fn map(&self, mut f: impl FnMut(C64) -> C64) -> ComplexMatrix {
        Self::from_fn(self.rows(), self.cols(), |i, j| f(self.inner[(i, j)]))
    }

    pub fn scale(&self, alpha: C64) -> ComplexMatrix {
        self.map(|z| z * alpha)
    }

    pub fn scale_real(&self, alpha: f64) -> ComplexMatrix {
        self.map(|z| z * alpha)
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: C64, other: &ComplexMatrix) {
        assert_eq!(self.shape(), other.shape());
        for j in 0..self.cols() {
            let src = other.inner.col_as_slice(j);
            let dst = self.inner.col_as_slice_mut(j);
            for (d, s) in dst.iter_mut().zip(src) {
                *d += alpha * s;
            }
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows().min(self.cols())).map(|i| self.inner[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm_l2()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols())
            .map(|j| self.inner.col_as_slice(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.cols())
            .flat_map(|j| self.inner.col_as_slice(j).iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        (0..self.cols()).all(|j| self.inner.col_as_slice(j).iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Copy of the block starting at `(r0, c0)` with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(r0 + rows <= self.rows() && c0 + cols <= self.cols());
        Self::from_fn(rows, cols, |i, j| self.inner[(r0 + i, c0 + j)])
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        let mut acc = 0.0;
        for j in 0..self.cols() {
            for (a, b) in self.inner.col_as_slice(j).iter().zip(other.inner.col_as_slice(j)) {
                acc += (a - b).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Embeds `self` in the top-left corner of a larger zero matrix.
    pub fn padded(&self, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(rows >= self.rows() && cols >= self.cols());
        Self::from_fn(rows, cols, |i, j| {
            if i < self.rows() && j < self.cols() {
                self.inner[(i, j)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        let lu = self.inner.partial_piv_lu();
        let out = Self { inner: lu.solve(rhs.inner.as_ref()) };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite("linear solve"))
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.inner[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.inner[idx]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.axpy(C64::new(1.0, 0.0), rhs);
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.axpy(C64::new(-1.0, 0.0), rhs);
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Stacks the columns of `a` into a single column.
pub fn vec(a: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows();
    ComplexMatrix::from_fn(rows * a.cols(), 1, |k, _| a[(k % rows, k / rows)])
}

/// Inverse of [`vec`].
pub fn unvec(v: &ComplexMatrix, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.cols() != 1 || v.rows() != rows * cols || rows == 0 || cols == 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x1 column", rows * cols),
            got: format!("{}x{}", v.rows(), v.cols()),
        });
    }
    let data = v.col(0);
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| data[j * rows + i]))
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm thresholds below which the degree-m approximant reaches unit-roundoff
// backward error (Higham 2005).
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152e0;

/// Matrix exponential by scaling and squaring with a diagonal Padé approximant.
///
/// The approximant degree and scaling are chosen from the 1-norm so the
/// backward error stays at unit roundoff, which satisfies any `tol` at or
/// above it.
pub fn expm(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !(tol >= UNIT_ROUNDOFF) {
        return Err(Error::InvalidTolerance(tol));
    }
    let n = a.rows();
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    let ident = ComplexMatrix::identity(n);
    if norm == 0.0 {
        return Ok(ident);
    }

    for &(m, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = pade_low(a, coeffs);
            return pade_finish(&u, &v, 0);
        }
    }

    let squarings = ((norm / THETA13).log2().ceil()).max(0.0) as u32;
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));
    let (u, v) = pade13(&scaled, &ident);
    pade_finish(&u, &v, squarings)
}

fn pade_low(a: &ComplexMatrix, b: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let ident = ComplexMatrix::identity(n);
    let a2 = a.matmul(a);
    // even powers A^0, A^2, A^4, ...
    let mut powers = vec![ident, a2.clone()];
    while 2 * (powers.len() - 1) < b.len() - 1 {
        let next = powers.last().unwrap().matmul(&a2);
        powers.push(next);
    }
    let mut odd = ComplexMatrix::zeros(n, n);
    let mut even = ComplexMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < b.len() {
            even.axpy(C64::new(b[2 * k], 0.0), p);
        }
        if 2 * k + 1 < b.len() {
            odd.axpy(C64::new(b[2 * k + 1], 0.0), p);
        }
    }
    (a.matmul(&odd), even)
}

fn pade13(a: &ComplexMatrix, ident: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let b = &PADE13;
    let c = |x: f64| C64::new(x, 0.0);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut inner_u = a6.scale_real(b[13]);
    inner_u.axpy(c(b[11]), &a4);
    inner_u.axpy(c(b[9]), &a2);
    let mut u = a6.matmul(&inner_u);
    u.axpy(c(b[7]), &a6);
    u.axpy(c(b[5]), &a4);
    u.axpy(c(b[3]), &a2);
    u.axpy(c(b[1]), ident);
    let u = a.matmul(&u);

    let mut inner_v = a6.scale_real(b[12]);
    inner_v.axpy(c(b[10]), &a4);
    inner_v.axpy(c(b[8]), &a2);
    let mut v = a6.matmul(&inner_v);
    v.axpy(c(b[6]), &a6);
    v.axpy(c(b[4]), &a4);
    v.axpy(c(b[2]), &a2);
    v.axpy(c(b[0]), ident);
    (u, v)
}

fn pade_finish(u: &ComplexMatrix, v: &ComplexMatrix, squarings: u32) -> Result<ComplexMatrix> {
    let numer = v + u;
    let denom = v - u;
    let mut r = denom.solve(&numer)?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite("expm"))
    }
}

/// Least-squares solution of `m c ≈ y` through a thin SVD.
///
/// The numerical rank uses the threshold `max(rows, cols) · ε · σ_max`;
/// anything short of full column rank is an error carrying the rank found.
pub fn lstsq(m: &ComplexMatrix, y: &[C64]) -> Result<Vec<C64>> {
    let (rows, cols) = m.shape();
    if rows < cols {
        return Err(Error::ShapeMismatch {
            expected: "rows >= cols".into(),
            got: format!("{rows}x{cols}"),
        });
    }
    if y.len() != rows {
        return Err(Error::ShapeMismatch {
            expected: format!("right-hand side of length {rows}"),
            got: format!("length {}", y.len()),
        });
    }
    let svd = m.inner.thin_svd().map_err(|_| Error::NonFinite("svd"))?;
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..cols).map(|k| s[k].re).collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let cutoff = rows.max(cols) as f64 * f64::EPSILON * smax;
    let rank = sigma.iter().filter(|&&x| x > cutoff).count();
    if rank < cols {
        return Err(Error::RankDeficient { rank, cols });
    }
    let u = svd.U();
    let v = svd.V();
    // c = V diag(1/σ) Uᴴ y
    let mut coeffs = vec![C64::new(0.0, 0.0); cols];
    for k in 0..cols {
        let mut proj = C64::new(0.0, 0.0);
        for i in 0..rows {
            proj += u[(i, k)].conj() * y[i];
        }
        let w = proj / sigma[k];
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c += v[(j, k)] * w;
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random(rng: &mut ChaCha8Rng, r: usize, k: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, k, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    // Scaled high-order Taylor series, kept independent of the Padé path.
    fn taylor_expm(a: &ComplexMatrix) -> ComplexMatrix {
        let s = (a.norm_one().max(1.0)).log2().ceil() as i32 + 4;
        let scaled = a.scale_real(0.5f64.powi(s));
        let n = a.rows();
        let mut term = ComplexMatrix::identity(n);
        let mut sum = ComplexMatrix::identity(n);
        for k in 1..40 {
            term = term.matmul(&scaled).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..s {
            sum = sum.matmul(&sum);
        }
        sum
    }

    #[test]
    fn kron_identity_and_shapes() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 5);
        assert_eq!(kron(&a, &b).shape(), (8, 15));
    }

    #[test]
    fn kron_matrix_unit() {
        let a = ComplexMatrix::from_row_major(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let b = ComplexMatrix::from_row_major(1, 1, &[c(2., 0.)]).unwrap();
        let expect = ComplexMatrix::from_row_major(2, 2, &[c(0., 0.), c(2., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert_eq!(kron(&a, &b), expect);
    }

    #[test]
    fn kron_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random(&mut rng, 2, 3);
        let b = random(&mut rng, 3, 2);
        let d = random(&mut rng, 2, 2);
        let left = kron(&kron(&a, &b), &d);
        let right = kron(&a, &kron(&b, &d));
        assert!(left.distance(&right) < 1e-14);
    }

    #[test]
    fn expm_zero_and_diagonal() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(expm(&z, EXPM_DEFAULT_TOL).unwrap(), ComplexMatrix::identity(3));
        let d = ComplexMatrix::from_diag(&[c(0.3, 1.0), c(-2.0, 0.5)]);
        let e = expm(&d, EXPM_DEFAULT_TOL).unwrap();
        assert!((e[(0, 0)] - c(0.3, 1.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - c(-2.0, 0.5).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_matches_taylor_oracle_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for scale in [0.01, 0.2, 1.0, 3.0, 12.0] {
            let a = random(&mut rng, 6, 6).scale_real(scale);
            let e = expm(&a, EXPM_DEFAULT_TOL).unwrap();
            let oracle = taylor_expm(&a);
            assert!(e.distance(&oracle) / oracle.frobenius_norm() < 1e-12, "scale {scale}");
            let einv = expm(&a.scale_real(-1.0), EXPM_DEFAULT_TOL).unwrap();
            let prod = e.matmul(&einv);
            // roundoff in the product scales with the condition of exp(A)
            let cond = e.frobenius_norm() * einv.frobenius_norm();
            let tol = if scale <= 1.0 { 1e-12 } else { 1e-14 * cond };
            let err = prod.distance(&ComplexMatrix::identity(6));
            assert!(err < tol, "scale {scale}: {err:e} vs {tol:e}");
        }
    }

    #[test]
    fn expm_adjoint_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(&mut rng, 5, 5);
        let lhs = expm(&a, EXPM_DEFAULT_TOL).unwrap().adjoint();
        let rhs = expm(&a.adjoint(), EXPM_DEFAULT_TOL).unwrap();
        assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn expm_rejects_bad_input() {
        assert!(matches!(expm(&ComplexMatrix::zeros(2, 3), 1e-13), Err(Error::NotSquare { .. })));
        assert!(matches!(expm(&ComplexMatrix::zeros(2, 2), 1e-20), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn vec_definition() {
        let a = ComplexMatrix::from_row_major(2, 2, &[c(1., 0.), c(2., 0.), c(3., 0.), c(4., 0.)]).unwrap();
        let v = vec(&a);
        assert_eq!(v.col(0), &[c(1., 0.), c(3., 0.), c(2., 0.), c(4., 0.)]);
        assert_eq!(unvec(&v, 2, 2).unwrap(), a);
        assert!(unvec(&v, 3, 2).is_err());
    }

    #[test]
    fn vec_sandwich_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 4] {
            let a = random(&mut rng, n, n);
            let x = random(&mut rng, n, n);
            let b = random(&mut rng, n, n);
            let lhs = vec(&a.matmul(&x).matmul(&b));
            let rhs = kron(&b.transpose(), &a).matmul(&vec(&x));
            assert!(lhs.distance(&rhs) < 1e-13);
        }
    }

    #[test]
    fn lstsq_cases() {
        let y = vec![c(1., 2.), c(-3., 0.5), c(0.25, -1.)];
        let sol = lstsq(&ComplexMatrix::identity(3), &y).unwrap();
        for (s, t) in sol.iter().zip(&y) {
            assert!((s - t).norm() < 1e-15);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random(&mut rng, 12, 4);
        let truth = [c(1., -1.), c(0.5, 0.), c(0., 2.), c(-0.75, 0.25)];
        let col = ComplexMatrix::from_fn(4, 1, |i, _| truth[i]);
        let rhs = m.matmul(&col);
        let sol = lstsq(&m, rhs.col(0)).unwrap();
        let resid = m.matmul(&ComplexMatrix::from_fn(4, 1, |i, _| sol[i])).distance(&rhs);
        assert!(resid < 1e-12);
        for (s, t) in sol.iter().zip(&truth) {
            assert!((s - t).norm() < 1e-12);
        }

        let mut degenerate = random(&mut rng, 6, 3);
        for i in 0..6 {
            degenerate[(i, 2)] = degenerate[(i, 0)] * 2.0;
        }
        let y = vec![c(1., 0.); 6];
        assert_eq!(lstsq(&degenerate, &y), Err(Error::RankDeficient { rank: 2, cols: 3 }));
    }

    #[test]
    fn from_row_major_rejects_nan() {
        assert!(ComplexMatrix::from_row_major(1, 1, &[c(f64::NAN, 0.)]).is_err());
        assert!(ComplexMatrix::from_row_major(0, 1, &[]).is_err());
    }
}
