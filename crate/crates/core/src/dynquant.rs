//! Classical dynamical operators and their quantization.
//!
//! A [`DynOperator`] is a finite sum `Σ c · qᵃ pᵇ ∂_qᶜ ∂_pᵈ`. In QP form each
//! term reads with the multiplications to the left of the derivatives. The
//! quantization sends `q, p` to `Q̂¹, Q̂²` and `∂_q, ∂_p` to `iP̂¹, iP̂²`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::densecore::{lstsq, ComplexMatrix};
use crate::error::{Error, Result};
use crate::fockspace::{weyl_quantize_poly, FockSpace, PolynomialSymbol, SYMMETRIZE_MAX_DEGREE};
use crate::superspace::{LeftRightSum, SuperOperator};
use crate::{C64, I, ZERO};

/// Largest monomial degree used by [`dequantize`].
pub const DEQUANTIZE_MAX_DEGREE: u32 = 4;

/// Largest truncation [`dequantize`] accepts; its basis matrix has `N⁴` rows.
pub const DEQUANTIZE_MAX_DIM: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub q: u32,
    pub p: u32,
    pub dq: u32,
    pub dp: u32,
}

impl MultiIndex {
    pub const fn new(q: u32, p: u32, dq: u32, dp: u32) -> Self {
        Self { q, p, dq, dp }
    }

    pub fn degree(&self) -> u32 {
        self.q + self.p + self.dq + self.dp
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynTerm {
    pub coeff: C64,
    pub index: MultiIndex,
}

impl DynTerm {
    pub fn new(coeff: C64, q: u32, p: u32, dq: u32, dp: u32) -> Self {
        Self { coeff, index: MultiIndex::new(q, p, dq, dp) }
    }

    pub fn real(coeff: f64, q: u32, p: u32, dq: u32, dp: u32) -> Self {
        Self::new(C64::new(coeff, 0.0), q, p, dq, dp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    /// Multiplications to the left of derivatives.
    Qp,
    /// Every term read as the average over all orderings of its factors.
    Symmetric,
}

impl Form {
    fn name(self) -> &'static str {
        match self {
            Form::Qp => "QP",
            Form::Symmetric => "symmetric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynOperator {
    terms: Vec<DynTerm>,
    form: Form,
}

impl DynOperator {
    pub fn new(terms: impl IntoIterator<Item = DynTerm>, form: Form) -> Self {
        let mut merged: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for t in terms {
            *merged.entry(t.index).or_insert(ZERO) += t.coeff;
        }
        let terms = merged.into_iter().filter(|(_, c)| *c != ZERO).map(|(index, coeff)| DynTerm { coeff, index }).collect();
        Self { terms, form }
    }

    pub fn zero(form: Form) -> Self {
        Self { terms: Vec::new(), form }
    }

    pub fn constant(c: f64, form: Form) -> Self {
        Self::new([DynTerm::real(c, 0, 0, 0, 0)], form)
    }

    /// Multiplication by a polynomial symbol.
    pub fn multiplication(sym: &PolynomialSymbol, form: Form) -> Self {
        Self::new(sym.terms().iter().map(|&(c, a, b)| DynTerm::new(c, a, b, 0, 0)), form)
    }

    pub fn terms(&self) -> &[DynTerm] {
        &self.terms
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn coeff(&self, q: u32, p: u32, dq: u32, dp: u32) -> C64 {
        let key = MultiIndex::new(q, p, dq, dp);
        self.terms.iter().find(|t| t.index == key).map_or(ZERO, |t| t.coeff)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.index.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &DynOperator) -> Result<DynOperator> {
        if self.form != other.form {
            return Err(Error::WrongForm { expected: self.form.name() });
        }
        Ok(Self::new(self.terms.iter().chain(&other.terms).copied(), self.form))
    }

    pub fn scale(&self, alpha: C64) -> DynOperator {
        Self::new(self.terms.iter().map(|t| DynTerm { coeff: t.coeff * alpha, index: t.index }), self.form)
    }

    /// Drops terms whose coefficient modulus is at most `tol`.
    pub fn pruned(&self, tol: f64) -> DynOperator {
        Self { terms: self.terms.iter().filter(|t| t.coeff.norm() > tol).copied().collect(), form: self.form }
    }

    /// Largest coefficient difference over the union of both term sets.
    pub fn coeff_distance(&self, other: &DynOperator) -> f64 {
        let mut keys: Vec<MultiIndex> = self.terms.iter().chain(&other.terms).map(|t| t.index).collect();
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| (self.coeff(k.q, k.p, k.dq, k.dp) - other.coeff(k.q, k.p, k.dq, k.dp)).norm())
            .fold(0.0, f64::max)
    }

    /// Rewrites a symmetric-form operator with multiplications on the left.
    ///
    /// The `q` and `p` families commute with each other, and within a family
    /// `Sym(xᵃ ∂ᶜ) = Σ_k k!·C(a,k)·C(c,k)/2ᵏ · xᵃ⁻ᵏ ∂ᶜ⁻ᵏ`.
    pub fn to_qp_form(&self) -> DynOperator {
        if self.form == Form::Qp {
            return self.clone();
        }
        let mut out = Vec::new();
        for t in &self.terms {
            let MultiIndex { q, p, dq, dp } = t.index;
            for (wq, kq) in symmetric_reorder(q, dq) {
                for (wp, kp) in symmetric_reorder(p, dp) {
                    out.push(DynTerm::new(t.coeff * wq * wp, q - kq, p - kp, dq - kq, dp - kp));
                }
            }
        }
        DynOperator::new(out, Form::Qp)
    }
}

fn symmetric_reorder(a: u32, c: u32) -> Vec<(f64, u32)> {
    (0..=a.min(c))
        .map(|k| (factorial(k) * binomial(a, k) * binomial(c, k) / 2f64.powi(k as i32), k))
        .collect()
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).map(|i| f64::from(n - i) / f64::from(i + 1)).product()
}

/// The superoperator factors `Q̂¹, Q̂², iP̂¹, iP̂²` with cached powers.
struct Factors {
    base: [LeftRightSum; 4],
    q_part: HashMap<(u32, u32), LeftRightSum>,
    p_part: HashMap<(u32, u32), LeftRightSum>,
    n: usize,
}

impl Factors {
    fn new(space: &Arc<FockSpace>) -> Result<Self> {
        Ok(Self {
            base: [
                LeftRightSum::q_basis(space, 1)?,
                LeftRightSum::q_basis(space, 2)?,
                LeftRightSum::p_basis(space, 1)?.scale(I),
                LeftRightSum::p_basis(space, 2)?.scale(I),
            ],
            q_part: HashMap::new(),
            p_part: HashMap::new(),
            n: space.dim(),
        })
    }

    fn power_product(&self, first: usize, a: u32, b: u32) -> LeftRightSum {
        let mut acc = LeftRightSum::identity(self.n);
        for _ in 0..a {
            acc = acc.then(&self.base[first]);
        }
        for _ in 0..b {
            acc = acc.then(&self.base[first + 1]);
        }
        acc
    }

    /// `(Q̂¹)ᵃ (Q̂²)ᵇ (iP̂¹)ᶜ (iP̂²)ᵈ`
    fn qp_monomial(&mut self, idx: MultiIndex) -> LeftRightSum {
        if !self.q_part.contains_key(&(idx.q, idx.p)) {
            let v = self.power_product(0, idx.q, idx.p);
            self.q_part.insert((idx.q, idx.p), v);
        }
        if !self.p_part.contains_key(&(idx.dq, idx.dp)) {
            let v = self.power_product(2, idx.dq, idx.dp);
            self.p_part.insert((idx.dq, idx.dp), v);
        }
        self.q_part[&(idx.q, idx.p)].then(&self.p_part[&(idx.dq, idx.dp)])
    }
}

/// QP-form quantization as a left/right decomposition.
pub fn quantize_qp_split(space: &Arc<FockSpace>, l: &DynOperator) -> Result<LeftRightSum> {
    if l.form() != Form::Qp {
        return Err(Error::WrongForm { expected: "QP" });
    }
    let mut factors = Factors::new(space)?;
    let mut out = LeftRightSum::new();
    for t in l.terms() {
        out = out.plus(&factors.qp_monomial(t.index).scale(t.coeff));
    }
    Ok(out)
}

/// Maps `c·qᵃpᵇ∂_qᶜ∂_pᵈ` to `c·(Q̂¹)ᵃ(Q̂²)ᵇ(iP̂¹)ᶜ(iP̂²)ᵈ`.
pub fn quantize_qp(space: &Arc<FockSpace>, l: &DynOperator) -> Result<SuperOperator> {
    Ok(quantize_qp_split(space, l)?.to_super(space))
}

/// Symmetric-form quantization as a left/right decomposition.
pub fn quantize_symmetric_split(space: &Arc<FockSpace>, l: &DynOperator) -> Result<LeftRightSum> {
    if l.form() != Form::Symmetric {
        return Err(Error::WrongForm { expected: "symmetric" });
    }
    for t in l.terms() {
        let degree = t.index.degree();
        if degree > SYMMETRIZE_MAX_DEGREE {
            return Err(Error::DegreeTooLarge { degree, limit: SYMMETRIZE_MAX_DEGREE });
        }
    }
    let factors = Factors::new(space)?;
    let mut memo: HashMap<[u32; 4], LeftRightSum> = HashMap::new();
    let mut out = LeftRightSum::new();
    for t in l.terms() {
        let MultiIndex { q, p, dq, dp } = t.index;
        let avg = symmetric_average(&factors, [q, p, dq, dp], &mut memo);
        out = out.plus(&avg.scale(t.coeff));
    }
    Ok(out)
}

/// Every term maps to the average over all orderings of its factors.
pub fn quantize_symmetric(space: &Arc<FockSpace>, l: &DynOperator) -> Result<SuperOperator> {
    Ok(quantize_symmetric_split(space, l)?.to_super(space))
}

// Average over the distinct words with counts[k] copies of factor k:
// Avg(c) = Σ_k (c_k/n) · X_k · Avg(c − e_k).
fn symmetric_average(factors: &Factors, counts: [u32; 4], memo: &mut HashMap<[u32; 4], LeftRightSum>) -> LeftRightSum {
    if let Some(v) = memo.get(&counts) {
        return v.clone();
    }
    let n: u32 = counts.iter().sum();
    let out = if n == 0 {
        LeftRightSum::identity(factors.n)
    } else {
        let mut acc = LeftRightSum::new();
        for k in 0..4 {
            if counts[k] == 0 {
                continue;
            }
            let mut rest = counts;
            rest[k] -= 1;
            let tail = symmetric_average(factors, rest, memo);
            let w = C64::new(counts[k] as f64 / n as f64, 0.0);
            acc = acc.plus(&factors.base[k].then(&tail).scale(w));
        }
        acc
    };
    memo.insert(counts, out.clone());
    out
}

/// `(i/ħ)(Ĥˡ − Ĥʳ)` with `Ĥ` the Weyl quantization of `h`.
pub fn hamiltonian_generator(space: &Arc<FockSpace>, h: &PolynomialSymbol) -> Result<SuperOperator> {
    Ok(hamiltonian_split(space, h)?.to_super(space))
}

pub fn hamiltonian_split(space: &Arc<FockSpace>, h: &PolynomialSymbol) -> Result<LeftRightSum> {
    if let Some(&(_, qexp, pexp)) = h.terms().iter().find(|(c, _, _)| c.im != 0.0) {
        return Err(Error::ComplexHamiltonian { qexp, pexp });
    }
    let hop = weyl_quantize_poly(space, h);
    let c = C64::new(0.0, 1.0 / space.hbar());
    Ok(LeftRightSum::left(c, hop.mat()).plus(&LeftRightSum::right(-c, hop.mat())))
}

/// `(∂H/∂p)·∂_q − (∂H/∂q)·∂_p` in QP form.
pub fn poisson_generator(h: &PolynomialSymbol) -> DynOperator {
    let dq = h.d_p().terms().iter().map(|&(c, a, b)| DynTerm::new(c, a, b, 1, 0)).collect::<Vec<_>>();
    let dp = h.d_q().terms().iter().map(|&(c, a, b)| DynTerm::new(-c, a, b, 0, 1)).collect::<Vec<_>>();
    DynOperator::new(dq.into_iter().chain(dp), Form::Qp)
}

/// Every QP monomial of total degree at most `degree`, in a fixed order.
pub fn qp_monomials(degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for total in 0..=degree {
        for q in (0..=total).rev() {
            for p in (0..=total - q).rev() {
                for dq in (0..=total - q - p).rev() {
                    out.push(MultiIndex::new(q, p, dq, total - q - p - dq));
                }
            }
        }
    }
    out
}

/// Least-squares fit of a superoperator by quantized QP monomials.
///
/// Builds one column `vec(quantize_qp(m))` per monomial of degree at most
/// `max_degree` and solves for the coefficients in the Hilbert–Schmidt norm.
pub fn dequantize(space: &Arc<FockSpace>, s: &SuperOperator, max_degree: u32) -> Result<DynOperator> {
    Dequantizer::new(space, max_degree)?.fit(s)
}

/// Reusable basis for [`dequantize`].
pub struct Dequantizer {
    space: Arc<FockSpace>,
    monomials: Vec<MultiIndex>,
    basis: ComplexMatrix,
}

impl Dequantizer {
    pub fn new(space: &Arc<FockSpace>, max_degree: u32) -> Result<Self> {
        if max_degree > DEQUANTIZE_MAX_DEGREE {
            return Err(Error::DegreeTooLarge { degree: max_degree, limit: DEQUANTIZE_MAX_DEGREE });
        }
        if space.dim() > DEQUANTIZE_MAX_DIM {
            return Err(Error::param(
                "N",
                format!("dequantize supports N <= {DEQUANTIZE_MAX_DIM}, got {}", space.dim()),
            ));
        }
        let monomials = qp_monomials(max_degree);
        let side = space.dim() * space.dim();
        let mut basis = ComplexMatrix::zeros(side * side, monomials.len());
        let mut factors = Factors::new(space)?;
        for (k, idx) in monomials.iter().enumerate() {
            let mat = factors.qp_monomial(*idx).to_matrix(space.dim());
            let col = basis.col_mut(k);
            for j in 0..side {
                col[j * side..(j + 1) * side].copy_from_slice(mat.col(j));
            }
        }
        Ok(Self { space: Arc::clone(space), monomials, basis })
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn fit(&self, s: &SuperOperator) -> Result<DynOperator> {
        if !self.space.same_as(s.space()) {
            return Err(Error::SpaceMismatch);
        }
        let side = self.space.dim() * self.space.dim();
        let mut target = Vec::with_capacity(side * side);
        for j in 0..side {
            target.extend_from_slice(s.mat().col(j));
        }
        let coeffs = lstsq(&self.basis, &target)?;
        Ok(DynOperator::new(
            self.monomials.iter().zip(coeffs).map(|(&index, coeff)| DynTerm { coeff, index }),
            Form::Qp,
        ))
    }
}

/// `(1/m)p∂_q − (mω²q + (γ/m)p)∂_p`
pub fn damped_oscillator_dynop(mass: f64, omega: f64, gamma: f64) -> Result<DynOperator> {
    for (name, v) in [("mass", mass), ("omega", omega)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, format!("must be positive and finite, got {v}")));
        }
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", format!("must be non-negative and finite, got {gamma}")));
    }
    Ok(DynOperator::new(
        [
            DynTerm::real(1.0 / mass, 0, 1, 1, 0),
            DynTerm::real(-mass * omega * omega, 1, 0, 0, 1),
            DynTerm::real(-gamma / mass, 0, 1, 0, 1),
        ],
        Form::Qp,
    ))
}

/// Drift and diffusion coefficients of a second-order phase-space operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpCoefficients {
    pub c_qq: f64,
    pub c_qp: f64,
    pub c_pq: f64,
    pub c_pp: f64,
    pub d_qq: f64,
    pub d_qp: f64,
    pub d_pp: f64,
}

impl FpCoefficients {
    /// Constant term that makes the classical operator conserve mass.
    pub fn mass_conserving_h(&self) -> f64 {
        self.c_qq + self.c_pp
    }
}

/// `d_qq∂_q² + 2d_qp∂_q∂_p + d_pp∂_p² + c_qq q∂_q + c_qp q∂_p + c_pq p∂_q + c_pp p∂_p + h`
pub fn fokker_planck_dynop(c: &FpCoefficients, h: f64) -> DynOperator {
    DynOperator::new(
        [
            DynTerm::real(c.d_qq, 0, 0, 2, 0),
            DynTerm::real(2.0 * c.d_qp, 0, 0, 1, 1),
            DynTerm::real(c.d_pp, 0, 0, 0, 2),
            DynTerm::real(c.c_qq, 1, 0, 1, 0),
            DynTerm::real(c.c_qp, 1, 0, 0, 1),
            DynTerm::real(c.c_pq, 0, 1, 1, 0),
            DynTerm::real(c.c_pp, 0, 1, 0, 1),
            DynTerm::real(h, 0, 0, 0, 0),
        ],
        Form::Qp,
    )
}
