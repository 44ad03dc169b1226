//! Truncated Fock-space realization of the canonical pair `(q̂, p̂)`.
//!
//! The basis is the number basis of a reference oscillator with the given
//! `(m, ω)`. With `N` levels `[q̂, p̂] = iħ(I − N·E_top)`, so every
//! commutation identity holds exactly on operands supported away from the
//! top level. The helpers [`interior_block`] and [`project_interior`] expose
//! that split.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::classical::{GridSymbol, PhaseGrid};
use crate::densecore::{expm, ComplexMatrix, EXPM_DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::{C64, I, ONE, ZERO};

/// Largest total degree accepted by the permutation-averaging routines.
pub const SYMMETRIZE_MAX_DEGREE: u32 = 8;

#[derive(Debug)]
pub struct FockSpace {
    dim: usize,
    hbar: f64,
    mass: f64,
    omega: f64,
    qop: ComplexMatrix,
    pop: ComplexMatrix,
}

impl FockSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn q(&self) -> &ComplexMatrix {
        &self.qop
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.pop
    }

    /// `x̂ᵏ` with `k = 1` for `q̂` and `k = 2` for `p̂`.
    pub fn x(&self, k: usize) -> Result<&ComplexMatrix> {
        match k {
            1 => Ok(&self.qop),
            2 => Ok(&self.pop),
            _ => Err(Error::BadIndex(k)),
        }
    }

    /// Default interior size `N − 2`.
    pub fn interior(&self) -> usize {
        self.dim - 2
    }

    pub fn same_as(&self, other: &FockSpace) -> bool {
        std::ptr::eq(self, other)
            || (self.dim == other.dim
                && self.hbar == other.hbar
                && self.mass == other.mass
                && self.omega == other.omega)
    }
}

/// Builds the truncated space with `q̂ = √(ħ/2mω)(a + a†)` and `p̂ = i√(ħmω/2)(a† − a)`.
pub fn build_space(n: usize, hbar: f64, mass: f64, omega: f64) -> Result<Arc<FockSpace>> {
    if n < 2 {
        return Err(Error::param("N", format!("truncation must be at least 2, got {n}")));
    }
    for (name, v) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, format!("must be positive and finite, got {v}")));
        }
    }
    let lower = lowering(n);
    let raise = lower.transpose();
    let sq = (hbar / (2.0 * mass * omega)).sqrt();
    let sp = (hbar * mass * omega / 2.0).sqrt();
    let qop = (&lower + &raise).scale_real(sq);
    let pop = (&raise - &lower).scale(I * sp);
    Ok(Arc::new(FockSpace { dim: n, hbar, mass, omega, qop, pop }))
}

fn lowering(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

/// An `N x N` matrix tied to a Fock space.
#[derive(Clone, Debug)]
pub struct Operator {
    space: Arc<FockSpace>,
    mat: ComplexMatrix,
}

impl Operator {
    pub fn new(space: &Arc<FockSpace>, mat: ComplexMatrix) -> Result<Self> {
        let n = space.dim();
        if mat.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        Ok(Self { space: Arc::clone(space), mat })
    }

    pub(crate) fn wrap(space: &Arc<FockSpace>, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.shape(), (space.dim(), space.dim()));
        Self { space: Arc::clone(space), mat }
    }

    pub fn identity(space: &Arc<FockSpace>) -> Self {
        Self::wrap(space, ComplexMatrix::identity(space.dim()))
    }

    pub fn zero(space: &Arc<FockSpace>) -> Self {
        Self::wrap(space, ComplexMatrix::zeros(space.dim(), space.dim()))
    }

    pub fn q(space: &Arc<FockSpace>) -> Self {
        Self::wrap(space, space.q().clone())
    }

    pub fn p(space: &Arc<FockSpace>) -> Self {
        Self::wrap(space, space.p().clone())
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    fn check(&self, other: &Operator) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check(other)?;
        Ok(Self::wrap(&self.space, self.mat.matmul(&other.mat)))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check(other)?;
        Ok(Self::wrap(&self.space, &self.mat + &other.mat))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check(other)?;
        Ok(Self::wrap(&self.space, &self.mat - &other.mat))
    }

    pub fn scale(&self, alpha: C64) -> Operator {
        Self::wrap(&self.space, self.mat.scale(alpha))
    }

    pub fn adjoint(&self) -> Operator {
        Self::wrap(&self.space, self.mat.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `Tr[self · obs]`, the expectation of `obs` when `self` is a state.
    pub fn expect(&self, obs: &Operator) -> Result<C64> {
        self.check(obs)?;
        Ok(trace_product(&self.mat, &obs.mat))
    }

    /// `‖A − A†‖_F`
    pub fn hermiticity_defect(&self) -> f64 {
        self.mat.distance(&self.mat.adjoint())
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.mat, &self.mat).re
    }
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = ZERO;
    for j in 0..n {
        let bj = b.col(j);
        for (k, bkj) in bj.iter().enumerate() {
            acc += a[(j, k)] * bkj;
        }
    }
    acc
}

/// Top-left `m x m` block.
pub fn interior_block(mat: &ComplexMatrix, m: usize) -> ComplexMatrix {
    mat.block(0, 0, m, m)
}

/// Zeroes everything outside the top-left `m x m` block (`Π_m · A · Π_m`).
pub fn project_interior(mat: &ComplexMatrix, m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(mat.rows(), mat.cols(), |i, j| if i < m && j < m { mat[(i, j)] } else { ZERO })
}

/// A polynomial `Σ c · qᵃ pᵇ` with merged exponents and no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolynomialSymbol {
    terms: Vec<(C64, u32, u32)>,
}

impl PolynomialSymbol {
    pub fn new(terms: impl IntoIterator<Item = (C64, u32, u32)>) -> Self {
        let mut merged: BTreeMap<(u32, u32), C64> = BTreeMap::new();
        for (c, a, b) in terms {
            *merged.entry((a, b)).or_insert(ZERO) += c;
        }
        Self {
            terms: merged.into_iter().filter(|(_, c)| *c != ZERO).map(|((a, b), c)| (c, a, b)).collect(),
        }
    }

    pub fn from_real(terms: &[(f64, u32, u32)]) -> Self {
        Self::new(terms.iter().map(|&(c, a, b)| (C64::new(c, 0.0), a, b)))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_real(&[(c, 0, 0)])
    }

    pub fn monomial(c: C64, qexp: u32, pexp: u32) -> Self {
        Self::new([(c, qexp, pexp)])
    }

    /// `p²/2m + mω²q²/2`
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        Self::from_real(&[(0.5 / mass, 0, 2), (0.5 * mass * omega * omega, 2, 0)])
    }

    pub fn terms(&self) -> &[(C64, u32, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(c, _, _)| c.im == 0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|&(_, a, b)| a + b).max().unwrap_or(0)
    }

    pub fn eval(&self, q: f64, p: f64) -> C64 {
        self.terms.iter().map(|&(c, a, b)| c * q.powi(a as i32) * p.powi(b as i32)).sum()
    }

    pub fn coeff(&self, qexp: u32, pexp: u32) -> C64 {
        self.terms.iter().find(|t| t.1 == qexp && t.2 == pexp).map_or(ZERO, |t| t.0)
    }

    pub fn add(&self, other: &PolynomialSymbol) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::new(self.terms.iter().map(|&(c, a, b)| (c * alpha, a, b)))
    }

    pub fn d_q(&self) -> Self {
        Self::new(self.terms.iter().filter(|t| t.1 > 0).map(|&(c, a, b)| (c * a as f64, a - 1, b)))
    }

    pub fn d_p(&self) -> Self {
        Self::new(self.terms.iter().filter(|t| t.2 > 0).map(|&(c, a, b)| (c * b as f64, a, b - 1)))
    }
}

/// `exp(i(a₁q̂ + a₂p̂))`
pub fn weyl_operator(space: &Arc<FockSpace>, a: [f64; 2]) -> Result<Operator> {
    let gen = (&space.q().scale_real(a[0]) + &space.p().scale_real(a[1])).scale(I);
    Ok(Operator::wrap(space, expm(&gen, EXPM_DEFAULT_TOL)?))
}

/// Weyl-ordered products of `a` copies of `x` and `b` copies of `y`, memoized.
///
/// Among the distinct words with `a` x-letters and `b` y-letters, a fraction
/// `a/(a+b)` start with `x`, which gives the recursion
/// `Avg(a, b) = (a/n)·x·Avg(a−1, b) + (b/n)·y·Avg(a, b−1)`.
pub(crate) struct SymmetricProducts<'a> {
    x: &'a ComplexMatrix,
    y: &'a ComplexMatrix,
    memo: HashMap<(u32, u32), ComplexMatrix>,
}

impl<'a> SymmetricProducts<'a> {
    pub(crate) fn new(x: &'a ComplexMatrix, y: &'a ComplexMatrix) -> Self {
        Self { x, y, memo: HashMap::new() }
    }

    pub(crate) fn get(&mut self, a: u32, b: u32) -> ComplexMatrix {
        if let Some(m) = self.memo.get(&(a, b)) {
            return m.clone();
        }
        let n = a + b;
        let out = if n == 0 {
            ComplexMatrix::identity(self.x.rows())
        } else {
            let mut acc = ComplexMatrix::zeros(self.x.rows(), self.x.cols());
            if a > 0 {
                let rest = self.get(a - 1, b);
                acc.add_matmul(C64::new(a as f64 / n as f64, 0.0), self.x, &rest);
            }
            if b > 0 {
                let rest = self.get(a, b - 1);
                acc.add_matmul(C64::new(b as f64 / n as f64, 0.0), self.y, &rest);
            }
            acc
        };
        self.memo.insert((a, b), out.clone());
        out
    }
}

/// Weyl quantization of a polynomial symbol: each `qᵃpᵇ` becomes the fully
/// symmetrized product of `a` factors `q̂` and `b` factors `p̂`.
pub fn weyl_quantize_poly(space: &Arc<FockSpace>, sym: &PolynomialSymbol) -> Operator {
    let n = space.dim();
    let mut products = SymmetricProducts::new(space.q(), space.p());
    let mut out = ComplexMatrix::zeros(n, n);
    for &(c, a, b) in sym.terms() {
        out.axpy(c, &products.get(a, b));
    }
    Operator::wrap(space, out)
}

/// Average of the products over every distinct ordering of the multiset
/// `{q̂ × qexp, p̂ × pexp}`, enumerated explicitly.
pub fn symmetrize_bruteforce(space: &Arc<FockSpace>, qexp: u32, pexp: u32) -> Result<Operator> {
    let degree = qexp + pexp;
    if degree > SYMMETRIZE_MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree, limit: SYMMETRIZE_MAX_DEGREE });
    }
    let factors = [space.q(), space.p()];
    let words = multiset_permutations(&[qexp as usize, pexp as usize]);
    let n = space.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for word in &words {
        let mut prod = ComplexMatrix::identity(n);
        for &letter in word {
            prod = prod.matmul(factors[letter]);
        }
        acc = &acc + &prod;
    }
    Ok(Operator::wrap(space, acc.scale_real(1.0 / words.len() as f64)))
}

/// All distinct words containing `counts[k]` copies of letter `k`, in
/// lexicographic order.
pub(crate) fn multiset_permutations(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut word: Vec<usize> = counts.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat(k).take(c)).collect();
    let mut out = vec![word.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (1..word.len()).rev().find(|&i| word[i - 1] < word[i]) else {
            break;
        };
        let j = (i..word.len()).rev().find(|&j| word[j] > word[i - 1]).unwrap();
        word.swap(i - 1, j);
        word[i..].reverse();
        out.push(word.clone());
    }
    out
}

/// Jordan product `½(AB + BA)`.
pub fn jordan(a: &Operator, b: &Operator) -> Result<Operator> {
    a.check(b)?;
    let ab = a.mat.matmul(&b.mat);
    let ba = b.mat.matmul(&a.mat);
    Ok(Operator::wrap(&a.space, (&ab + &ba).scale_real(0.5)))
}

/// Lie product `(1/iħ)(AB − BA)`.
pub fn lie(a: &Operator, b: &Operator) -> Result<Operator> {
    a.check(b)?;
    let ab = a.mat.matmul(&b.mat);
    let ba = b.mat.matmul(&a.mat);
    Ok(Operator::wrap(&a.space, (&ab - &ba).scale(C64::new(0.0, -1.0 / a.space.hbar()))))
}

/// Number state `|k⟩⟨k|`.
pub fn fock_state(space: &Arc<FockSpace>, k: usize) -> Result<Operator> {
    if k >= space.dim() {
        return Err(Error::param("fock", format!("level {k} outside truncation {}", space.dim())));
    }
    let mut m = ComplexMatrix::zeros(space.dim(), space.dim());
    m[(k, k)] = ONE;
    Ok(Operator::wrap(space, m))
}

/// `|α⟩⟨α|` from the truncated, renormalized coherent expansion.
pub fn coherent_state(space: &Arc<FockSpace>, alpha: C64) -> Result<Operator> {
    let n = space.dim();
    let bound = n as f64 / 4.0;
    if !(alpha.norm_sqr() <= bound) {
        return Err(Error::AlphaTooLarge { norm_sqr: alpha.norm_sqr(), bound });
    }
    let mut amp = vec![ZERO; n];
    amp[0] = ONE;
    for k in 1..n {
        amp[k] = amp[k - 1] * alpha / (k as f64).sqrt();
    }
    let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amp {
        *z /= norm;
    }
    Ok(Operator::wrap(space, ComplexMatrix::from_fn(n, n, |i, j| amp[i] * amp[j].conj())))
}

/// Weyl symbol of `op` sampled on `grid`, normalized so the identity maps to 1.
///
/// Evaluated through the displaced-parity form `A(x) = 2·Tr[Ã D(x) Π D(x)†]`.
/// The operator is embedded in a space of twice the dimension and damped by a
/// smooth taper over the upper Fock levels, so the displacements do not see
/// the truncation edge for points well inside the phase-space region the
/// truncated basis covers. The Wigner function of a state is `A / (2πħ)`.
pub fn weyl_symbol(op: &Operator, grid: &PhaseGrid) -> Result<GridSymbol> {
    let space = op.space();
    let n = space.dim();
    let padded_dim = 2 * n;
    let padded = build_space(padded_dim, space.hbar(), space.mass(), space.omega())?;
    let hbar = space.hbar();

    let center = 0.625 * n as f64;
    let width = n as f64 / 12.0;
    let root_taper: Vec<f64> = (0..n).map(|k| (0.5 * libm::erfc((k as f64 - center) / width)).sqrt()).collect();
    let tapered = ComplexMatrix::from_fn(n, n, |i, j| op.mat()[(i, j)] * root_taper[i] * root_taper[j]);
    let tapered = tapered.padded(padded_dim, padded_dim);
    let parity = ComplexMatrix::from_diag(
        &(0..padded_dim).map(|k| if k % 2 == 0 { ONE } else { -ONE }).collect::<Vec<_>>(),
    );

    // D(q₀, p₀) = exp((i/ħ)(p₀q̂ − q₀p̂)), split as D(q₀,0)·D(0,p₀) up to a
    // phase that cancels in D Π D†.
    let shifted_ops: Vec<ComplexMatrix> = (0..grid.nq)
        .map(|i| {
            let d = expm(&padded.p().scale(C64::new(0.0, -grid.q(i) / hbar)), EXPM_DEFAULT_TOL)?;
            Ok(d.adjoint().matmul(&tapered).matmul(&d))
        })
        .collect::<Result<_>>()?;
    let kicked_parity: Vec<ComplexMatrix> = (0..grid.np)
        .map(|j| {
            let d = expm(&padded.q().scale(C64::new(0.0, grid.p(j) / hbar)), EXPM_DEFAULT_TOL)?;
            Ok(d.matmul(&parity).matmul(&d.adjoint()))
        })
        .collect::<Result<_>>()?;

    let mut values = vec![ZERO; grid.nq * grid.np];
    for (i, b) in shifted_ops.iter().enumerate() {
        for (j, c) in kicked_parity.iter().enumerate() {
            values[i * grid.np + j] = trace_product(b, c) * 2.0;
        }
    }
    GridSymbol::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Arc<FockSpace> {
        build_space(12, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn ladder_entries() {
        let s = build_space(3, 1.0, 1.0, 1.0).unwrap();
        assert!((s.q()[(0, 1)] - C64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(s.q(), &s.q().adjoint());
        assert_eq!(s.p(), &s.p().adjoint());
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(build_space(1, 1.0, 1.0, 1.0).is_err());
        assert!(build_space(4, 0.0, 1.0, 1.0).is_err());
        assert!(build_space(4, 1.0, -1.0, 1.0).is_err());
        assert!(build_space(4, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn commutator_defect_sits_on_top_level() {
        let s = build_space(10, 0.7, 1.3, 0.9).unwrap();
        let comm = &s.q().matmul(s.p()) - &s.p().matmul(s.q());
        let mut expect = ComplexMatrix::identity(10).scale(C64::new(0.0, 0.7));
        expect[(9, 9)] = C64::new(0.0, 0.7 * (1.0 - 10.0));
        assert!(comm.distance(&expect) < 1e-13);
    }

    #[test]
    fn permutations_count() {
        assert_eq!(multiset_permutations(&[2, 2]).len(), 6);
        assert_eq!(multiset_permutations(&[3, 0]).len(), 1);
        assert_eq!(multiset_permutations(&[0, 0]), vec![Vec::<usize>::new()]);
        assert_eq!(multiset_permutations(&[1, 1, 1]).len(), 6);
    }

    #[test]
    fn symmetrized_small_cases() {
        let s = unit();
        let q = s.q();
        let p = s.p();
        let qp = weyl_quantize_poly(&s, &PolynomialSymbol::from_real(&[(1.0, 1, 1)]));
        let expect = (&q.matmul(p) + &p.matmul(q)).scale_real(0.5);
        assert!(qp.mat().distance(&expect) < 1e-13);

        let q2p = weyl_quantize_poly(&s, &PolynomialSymbol::from_real(&[(1.0, 2, 1)]));
        let expect = (&(&q.matmul(q).matmul(p) + &q.matmul(p).matmul(q)) + &p.matmul(q).matmul(q)).scale_real(1.0 / 3.0);
        assert!(q2p.mat().distance(&expect) < 1e-13);

        assert_eq!(weyl_quantize_poly(&s, &PolynomialSymbol::constant(1.0)).mat(), &ComplexMatrix::identity(12));
        assert!(symmetrize_bruteforce(&s, 5, 4).is_err());
    }

    #[test]
    fn polynomial_normalization() {
        let p = PolynomialSymbol::from_real(&[(1.0, 1, 0), (2.0, 0, 1), (-1.0, 1, 0)]);
        assert_eq!(p.terms(), &[(C64::new(2.0, 0.0), 0, 1)]);
        let h = PolynomialSymbol::harmonic(2.0, 3.0);
        assert_eq!(h.d_p().terms(), &[(C64::new(0.5, 0.0), 0, 1)]);
        assert_eq!(h.d_q().terms(), &[(C64::new(18.0, 0.0), 1, 0)]);
    }

    #[test]
    fn coherent_state_fixture() {
        let s = build_space(40, 1.0, 1.0, 1.0).unwrap();
        let vac = coherent_state(&s, ZERO).unwrap();
        assert_eq!(vac.mat(), fock_state(&s, 0).unwrap().mat());
        let rho = coherent_state(&s, ONE).unwrap();
        assert!((rho.trace() - ONE).norm() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        let mean_q = rho.expect(&Operator::q(&s)).unwrap();
        assert!((mean_q.re - 2f64.sqrt()).abs() < 1e-8);
        assert!(matches!(coherent_state(&s, C64::new(4.0, 0.0)), Err(Error::AlphaTooLarge { .. })));
    }

    #[test]
    fn jordan_and_lie_basics() {
        let s = unit();
        let q = Operator::q(&s);
        let p = Operator::p(&s);
        let j = jordan(&q, &q).unwrap();
        assert!(j.mat().distance(&q.mat().matmul(q.mat())) < 1e-14);
        let l = lie(&q, &p).unwrap();
        assert!(interior_block(l.mat(), 11).distance(&ComplexMatrix::identity(11)) < 1e-12);
        let other = build_space(12, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(jordan(&q, &Operator::q(&other)).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn weyl_symbol_of_linear_and_quadratic() {
        let s = build_space(48, 1.0, 1.0, 1.0).unwrap();
        let grid = PhaseGrid::new(-2.0, 2.0, -2.0, 2.0, 9, 9).unwrap();
        let id = weyl_symbol(&Operator::identity(&s), &grid).unwrap();
        let q = weyl_symbol(&Operator::q(&s), &grid).unwrap();
        let h = weyl_symbol(&weyl_quantize_poly(&s, &PolynomialSymbol::from_real(&[(1.0, 2, 0), (1.0, 0, 2)])), &grid).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (x, y) = (grid.q(i), grid.p(j));
                assert!((id.get(i, j) - ONE).norm() < 1e-6);
                assert!((q.get(i, j) - C64::new(x, 0.0)).norm() < 1e-6);
                assert!((h.get(i, j) - C64::new(x * x + y * y, 0.0)).norm() < 1e-5);
            }
        }
    }
}
