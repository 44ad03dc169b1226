//! Operator space as a Liouville space.
//!
//! A [`SuperOperator`] is an `N² x N²` matrix acting on column-stacked
//! operators, so `Aˡ = I ⊗ A` and `Aʳ = Aᵀ ⊗ I`. Right multiplications
//! compose in reverse, `(AB)ʳ = Bʳ Aʳ`.
//!
//! [`LeftRightSum`] keeps a superoperator as `Σ c · Lˡ Rʳ`. Products of
//! `Q̂ᵏ` and `P̂ᵏ` expand into a handful of such terms, which is far cheaper
//! than multiplying `N² x N²` matrices.

use std::sync::Arc;

use crate::densecore::{expm, kron, ComplexMatrix, EXPM_DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fockspace::{FockSpace, Operator};
use crate::{C64, I, ONE, ZERO};

/// `Ψ` and its inverse `ω`, with `ω·Ψ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticConstants {
    pub psi: [[i32; 2]; 2],
    pub omega_form: [[i32; 2]; 2],
}

pub const SYMPLECTIC: SymplecticConstants = SymplecticConstants {
    psi: [[0, 1], [-1, 0]],
    omega_form: [[0, -1], [1, 0]],
};

#[derive(Clone, Debug)]
pub struct SuperOperator {
    space: Arc<FockSpace>,
    mat: ComplexMatrix,
}

impl SuperOperator {
    pub fn new(space: &Arc<FockSpace>, mat: ComplexMatrix) -> Result<Self> {
        let side = space.dim() * space.dim();
        if mat.shape() != (side, side) {
            return Err(Error::ShapeMismatch {
                expected: format!("{side}x{side}"),
                got: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        Ok(Self { space: Arc::clone(space), mat })
    }

    pub(crate) fn wrap(space: &Arc<FockSpace>, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.rows(), space.dim() * space.dim());
        Self { space: Arc::clone(space), mat }
    }

    pub fn identity(space: &Arc<FockSpace>) -> Self {
        Self::wrap(space, ComplexMatrix::identity(space.dim() * space.dim()))
    }

    pub fn zero(space: &Arc<FockSpace>) -> Self {
        let side = space.dim() * space.dim();
        Self::wrap(space, ComplexMatrix::zeros(side, side))
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

    fn check(&self, other: &SuperOperator) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check(other)?;
        Ok(Self::wrap(&self.space, self.mat.matmul(&other.mat)))
    }

    pub fn add(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check(other)?;
        Ok(Self::wrap(&self.space, &self.mat + &other.mat))
    }

    pub fn sub(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check(other)?;
        Ok(Self::wrap(&self.space, &self.mat - &other.mat))
    }

    pub fn scale(&self, alpha: C64) -> SuperOperator {
        Self::wrap(&self.space, self.mat.scale(alpha))
    }

    pub fn commutator(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check(other)?;
        let ab = self.mat.matmul(&other.mat);
        let ba = other.mat.matmul(&self.mat);
        Ok(Self::wrap(&self.space, &ab - &ba))
    }

    pub fn distance(&self, other: &SuperOperator) -> f64 {
        self.mat.distance(&other.mat)
    }

    /// Frobenius norm of the action on operands supported in the top-left
    /// `m x m` block, i.e. of the columns of `mat` belonging to that block.
    pub fn interior_norm(&self, m: usize) -> f64 {
        let n = self.space.dim();
        let mut acc = 0.0;
        for j in 0..m {
            for i in 0..m {
                acc += self.mat.col(j * n + i).iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        acc.sqrt()
    }
}

pub fn left_mult(a: &Operator) -> SuperOperator {
    let n = a.space().dim();
    SuperOperator::wrap(a.space(), kron(&ComplexMatrix::identity(n), a.mat()))
}

pub fn right_mult(a: &Operator) -> SuperOperator {
    let n = a.space().dim();
    SuperOperator::wrap(a.space(), kron(&a.mat().transpose(), &ComplexMatrix::identity(n)))
}

/// `X ↦ A X B`
pub fn sandwich(a: &Operator, b: &Operator) -> Result<SuperOperator> {
    if !a.space().same_as(b.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(SuperOperator::wrap(a.space(), kron(&b.mat().transpose(), a.mat())))
}

/// `Q̂ᵏ = ½((x̂ᵏ)ˡ + (x̂ᵏ)ʳ)`
pub fn q_super(space: &Arc<FockSpace>, k: usize) -> Result<SuperOperator> {
    Ok(LeftRightSum::q_basis(space, k)?.to_super(space))
}

/// `P̂ᵏ = −(1/ħ) ω_km ((x̂ᵐ)ˡ − (x̂ᵐ)ʳ)`
pub fn p_super(space: &Arc<FockSpace>, k: usize) -> Result<SuperOperator> {
    Ok(LeftRightSum::p_basis(space, k)?.to_super(space))
}

/// Exponentiated left and right factors of `V̂(a, b)`.
///
/// Left and right multiplications commute, so
/// `exp(i(a·Q̂ + b·P̂)) = (e^{iX_L})ˡ (e^{iX_R})ʳ` holds exactly with
/// `X_L = Σ (a_k/2) x̂ᵏ − (1/ħ) Σ b_k ω_km x̂ᵐ` and
/// `X_R = Σ (a_k/2) x̂ᵏ + (1/ħ) Σ b_k ω_km x̂ᵐ`.
#[derive(Clone, Debug)]
pub struct WeylSuperFactors {
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

impl WeylSuperFactors {
    pub fn new(space: &Arc<FockSpace>, a: [f64; 2], b: [f64; 2]) -> Result<Self> {
        let hbar = space.hbar();
        let xs = [space.q(), space.p()];
        let n = space.dim();
        let mut sym = ComplexMatrix::zeros(n, n);
        let mut skew = ComplexMatrix::zeros(n, n);
        for k in 0..2 {
            sym.axpy(C64::new(a[k] / 2.0, 0.0), xs[k]);
            for m in 0..2 {
                let w = SYMPLECTIC.omega_form[k][m] as f64;
                if w != 0.0 {
                    skew.axpy(C64::new(b[k] * w / hbar, 0.0), xs[m]);
                }
            }
        }
        let left = expm(&(&sym - &skew).scale(I), EXPM_DEFAULT_TOL)?;
        let right = expm(&(&sym + &skew).scale(I), EXPM_DEFAULT_TOL)?;
        Ok(Self { left, right })
    }

    /// `X ↦ e^{iX_L} · X · e^{iX_R}`
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.left.matmul(x).matmul(&self.right)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        kron(&self.right.transpose(), &self.left)
    }

    /// The superoperator restricted to operands and outputs in the top-left
    /// `m x m` block, as an `m² x m²` matrix.
    pub fn interior_matrix(&self, m: usize) -> ComplexMatrix {
        kron(&self.right.block(0, 0, m, m).transpose(), &self.left.block(0, 0, m, m))
    }

    /// Factors of `self ∘ other`.
    pub fn then(&self, other: &WeylSuperFactors) -> WeylSuperFactors {
        WeylSuperFactors { left: self.left.matmul(&other.left), right: other.right.matmul(&self.right) }
    }
}

/// `V̂(a, b) = exp(i(a·Q̂ + b·P̂))`, materialized from its exact left/right
/// factorization.
pub fn v_super(space: &Arc<FockSpace>, a: [f64; 2], b: [f64; 2]) -> Result<SuperOperator> {
    Ok(SuperOperator::wrap(space, WeylSuperFactors::new(space, a, b)?.to_matrix()))
}

/// Hilbert–Schmidt product `Sp[A† B]`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<C64> {
    if !a.space().same_as(b.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(hs_inner_mat(a.mat(), b.mat()))
}

pub(crate) fn hs_inner_mat(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let mut acc = ZERO;
    for j in 0..a.cols() {
        for (x, y) in a.col(j).iter().zip(b.col(j)) {
            acc += x.conj() * y;
        }
    }
    acc
}

/// Hilbert–Schmidt adjoint; in the column-stacking convention it is the
/// conjugate transpose of the matrix.
pub fn superop_adjoint(s: &SuperOperator) -> SuperOperator {
    SuperOperator::wrap(&s.space, s.mat.adjoint())
}

pub fn apply(s: &SuperOperator, a: &Operator) -> Result<Operator> {
    if !s.space.same_as(a.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(Operator::wrap(a.space(), apply_mat(s.mat(), a.mat())))
}

pub(crate) fn apply_mat(s: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut v = ComplexMatrix::zeros(n * n, 1);
    for j in 0..n {
        v.col_mut(0)[j * n..(j + 1) * n].copy_from_slice(a.col(j));
    }
    let w = s.matmul(&v);
    ComplexMatrix::from_fn(n, n, |i, j| w[(j * n + i, 0)])
}

/// A superoperator written as `Σ c · Lˡ Rʳ`, i.e. `X ↦ Σ c · L X R`.
#[derive(Clone, Debug, Default)]
pub struct LeftRightSum {
    terms: Vec<(C64, ComplexMatrix, ComplexMatrix)>,
}

impl LeftRightSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(n: usize) -> Self {
        Self { terms: vec![(ONE, ComplexMatrix::identity(n), ComplexMatrix::identity(n))] }
    }

    /// `c · Aˡ`
    pub fn left(c: C64, a: &ComplexMatrix) -> Self {
        let n = a.rows();
        Self { terms: vec![(c, a.clone(), ComplexMatrix::identity(n))] }
    }

    /// `c · Aʳ`
    pub fn right(c: C64, a: &ComplexMatrix) -> Self {
        let n = a.rows();
        Self { terms: vec![(c, ComplexMatrix::identity(n), a.clone())] }
    }

    pub fn q_basis(space: &Arc<FockSpace>, k: usize) -> Result<Self> {
        let x = space.x(k)?;
        let half = C64::new(0.5, 0.0);
        Ok(Self::left(half, x).plus(&Self::right(half, x)))
    }

    pub fn p_basis(space: &Arc<FockSpace>, k: usize) -> Result<Self> {
        if !(1..=2).contains(&k) {
            return Err(Error::BadIndex(k));
        }
        let mut out = Self::new();
        for m in 1..=2 {
            let w = SYMPLECTIC.omega_form[k - 1][m - 1] as f64;
            if w != 0.0 {
                let c = C64::new(-w / space.hbar(), 0.0);
                let x = space.x(m)?;
                out = out.plus(&Self::left(c, x)).plus(&Self::right(-c, x));
            }
        }
        Ok(out)
    }

    pub fn terms(&self) -> &[(C64, ComplexMatrix, ComplexMatrix)] {
        &self.terms
    }

    pub fn plus(&self, other: &LeftRightSum) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self { terms: self.terms.iter().map(|(c, l, r)| (c * alpha, l.clone(), r.clone())).collect() }
    }

    /// `self ∘ other`, using `(L₁ˡR₁ʳ)(L₂ˡR₂ʳ) = (L₁L₂)ˡ (R₂R₁)ʳ`.
    pub fn then(&self, other: &LeftRightSum) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, l1, r1) in &self.terms {
            for (c2, l2, r2) in &other.terms {
                terms.push((c1 * c2, l1.matmul(l2), r2.matmul(r1)));
            }
        }
        Self { terms }.merged()
    }

    /// Combines terms that share a right factor.
    fn merged(self) -> Self {
        let mut out: Vec<(C64, ComplexMatrix, ComplexMatrix)> = Vec::new();
        for (c, l, r) in self.terms {
            if c == ZERO {
                continue;
            }
            if let Some(slot) = out.iter_mut().find(|t| t.2 == r) {
                let mut acc = slot.1.scale(slot.0);
                acc.axpy(c, &l);
                slot.0 = ONE;
                slot.1 = acc;
            } else {
                out.push((c, l, r));
            }
        }
        Self { terms: out }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(x.rows(), x.cols());
        for (c, l, r) in &self.terms {
            let lx = l.matmul(x);
            out.add_matmul(*c, &lx, r);
        }
        out
    }

    pub fn to_matrix(&self, n: usize) -> ComplexMatrix {
        let merged = self.clone().merged();
        let mut out = ComplexMatrix::zeros(n * n, n * n);
        for (c, l, r) in &merged.terms {
            add_kron_rt_l(&mut out, *c, r, l);
        }
        out
    }

    pub fn to_super(&self, space: &Arc<FockSpace>) -> SuperOperator {
        SuperOperator::wrap(space, self.to_matrix(space.dim()))
    }
}

/// `out += c · (Rᵀ ⊗ L)`
fn add_kron_rt_l(out: &mut ComplexMatrix, c: C64, r: &ComplexMatrix, l: &ComplexMatrix) {
    let n = l.rows();
    for bj in 0..n {
        for j in 0..n {
            let col = out.col_mut(bj * n + j);
            let lj = l.col(j);
            for bi in 0..n {
                // (Rᵀ)[bi, bj] = R[bj, bi]
                let w = c * r[(bj, bi)];
                if w == ZERO {
                    continue;
                }
                for (dst, src) in col[bi * n..(bi + 1) * n].iter_mut().zip(lj) {
                    *dst += w * src;
                }
            }
        }
    }
}
