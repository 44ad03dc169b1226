//! Quantum master equation of Fokker–Planck type.
//!
//! The coefficients of the classical operator
//! `d_qq∂_q² + 2d_qp∂_q∂_p + d_pp∂_p² + c_qq q∂_q + c_qp q∂_p + c_pq p∂_q + c_pp p∂_p + h`
//! map to a mass, frequency and friction constants through
//! `m = −1/c_pq`, `ω² = −c_qp·c_pq`, `λ = ½(c_pp + c_qq)`, `μ = ½(c_pp − c_qq)`.

use std::sync::Arc;

use crate::dynquant::{fokker_planck_dynop, quantize_qp_split, FpCoefficients};
use crate::error::{Error, Result};
use crate::fockspace::{weyl_quantize_poly, FockSpace, Operator, PolynomialSymbol};
use crate::superspace::{LeftRightSum, SuperOperator};
use crate::{C64, ONE};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FpParameters {
    pub mass: f64,
    pub omega_sq: f64,
    pub lambda: f64,
    pub mu: f64,
}

pub fn fp_parameters(c: &FpCoefficients) -> Result<FpParameters> {
    if c.c_pq == 0.0 {
        return Err(Error::ZeroCpq);
    }
    Ok(FpParameters {
        mass: -1.0 / c.c_pq,
        omega_sq: -c.c_qp * c.c_pq,
        lambda: 0.5 * (c.c_pp + c.c_qq),
        mu: 0.5 * (c.c_pp - c.c_qq),
    })
}

/// Hamilton symbol `p²/2m + mω²q²/2`.
pub fn fp_hamiltonian_symbol(c: &FpCoefficients) -> Result<PolynomialSymbol> {
    let par = fp_parameters(c)?;
    Ok(PolynomialSymbol::from_real(&[(0.5 / par.mass, 0, 2), (0.5 * par.mass * par.omega_sq, 2, 0)]))
}

pub fn fp_hamiltonian(space: &Arc<FockSpace>, c: &FpCoefficients) -> Result<Operator> {
    Ok(weyl_quantize_poly(space, &fp_hamiltonian_symbol(c)?))
}

/// The master-equation generator assembled from commutators:
///
/// `−(i/ħ)[Ĥ,·] + (i(λ−μ)/ħ)[p̂, q̂∘·] − (i(λ+μ)/ħ)[q̂, p̂∘·]
///  − (d_pp/ħ²)[q̂,[q̂,·]] − (d_qq/ħ²)[p̂,[p̂,·]] + (2d_qp/ħ²)[p̂,[q̂,·]]`
pub fn build_fp_master_direct(space: &Arc<FockSpace>, c: &FpCoefficients) -> Result<SuperOperator> {
    Ok(fp_master_split(space, c)?.to_super(space))
}

pub fn fp_master_split(space: &Arc<FockSpace>, c: &FpCoefficients) -> Result<LeftRightSum> {
    let par = fp_parameters(c)?;
    let hbar = space.hbar();
    let h = fp_hamiltonian(space, c)?;
    let q = space.q();
    let p = space.p();
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);

    let comm = |x| LeftRightSum::left(ONE, x).plus(&LeftRightSum::right(-ONE, x));
    let jordan = |x| LeftRightSum::left(re(0.5), x).plus(&LeftRightSum::right(re(0.5), x));

    let mut out = comm(h.mat()).scale(im(-1.0 / hbar));
    out = out.plus(&comm(p).then(&jordan(q)).scale(im((par.lambda - par.mu) / hbar)));
    out = out.plus(&comm(q).then(&jordan(p)).scale(im(-(par.lambda + par.mu) / hbar)));
    let h2 = hbar * hbar;
    out = out.plus(&comm(q).then(&comm(q)).scale(re(-c.d_pp / h2)));
    out = out.plus(&comm(p).then(&comm(p)).scale(re(-c.d_qq / h2)));
    out = out.plus(&comm(p).then(&comm(q)).scale(re(2.0 * c.d_qp / h2)));
    Ok(out)
}

/// Difference between the commutator form and the quantized operator with
/// `h = 0`: Jordan multiplication by `(c_qq + c_pp)·(i/ħ)[p̂, q̂]`.
///
/// `(i/ħ)[p̂, q̂]` is the identity except on the top Fock level, so on
/// interior operands this is the scalar `c_qq + c_pp`.
pub fn fp_scalar_part(space: &Arc<FockSpace>, c: &FpCoefficients) -> Result<SuperOperator> {
    let comm = &space.p().matmul(space.q()) - &space.q().matmul(space.p());
    let cmat = comm.scale(C64::new(0.0, 1.0 / space.hbar()));
    let k = re(0.5 * (c.c_qq + c.c_pp));
    Ok(LeftRightSum::left(k, &cmat).plus(&LeftRightSum::right(k, &cmat)).to_super(space))
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceScan {
    pub h_star: f64,
    /// `‖Π(S‡Î)Π + h_star·Π‖_F` on the interior block
    pub residual: f64,
    /// The constant term written alongside the master equation, `−2(c_pp + c_qq)`.
    pub formula_h: f64,
    pub classical_h: f64,
    pub interior: usize,
}

impl TraceScan {
    pub fn discrepancy(&self) -> bool {
        (self.h_star - self.formula_h).abs() > 1e-8 * (1.0 + self.h_star.abs())
    }
}

/// Finds the constant `h` for which `quantize_qp(L(h))‡` annihilates `Î` on
/// the interior block, so that `Tr ρ` is conserved for interior states.
pub fn trace_preservation_scan(space: &Arc<FockSpace>, c: &FpCoefficients) -> Result<TraceScan> {
    let split = quantize_qp_split(space, &fokker_planck_dynop(c, 0.0))?;
    // (Σ c Lˡ Rʳ)‡ Î = Σ c̄ L† R†
    let n = space.dim();
    let mut v = crate::densecore::ComplexMatrix::zeros(n, n);
    for (coef, l, r) in split.terms() {
        v.add_matmul(coef.conj(), &l.adjoint(), &r.adjoint());
    }
    let m = space.interior();
    let block = v.block(0, 0, m, m);
    let h_star = -block.trace().re / m as f64;
    let mut shifted = block.clone();
    for i in 0..m {
        shifted[(i, i)] += h_star;
    }
    Ok(TraceScan {
        h_star,
        residual: shifted.frobenius_norm(),
        formula_h: -2.0 * (c.c_pp + c.c_qq),
        classical_h: c.mass_conserving_h(),
        interior: m,
    })
}
