//! Numerical verification of the algebraic identities behind the
//! quantization, reported one identity per line.
//!
//! Identities split into two groups. Exact ones hold for any matrices and
//! are checked on the full truncated space. Truncation-sensitive ones rely
//! on `[q̂, p̂] = iħ`; the default profile checks them on interior operands,
//! the strict profile on the full space, where they are expected to fail.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::densecore::ComplexMatrix;
use crate::dynquant::{
    damped_oscillator_dynop, fokker_planck_dynop, hamiltonian_generator, poisson_generator, quantize_qp,
    quantize_symmetric, DynOperator, DynTerm, FpCoefficients, Form,
};
use crate::error::{Error, Result};
use crate::fockspace::{
    build_space, interior_block, jordan, lie, symmetrize_bruteforce, weyl_operator, weyl_quantize_poly, FockSpace,
    Operator, PolynomialSymbol,
};
use crate::sim::fokker_planck::{build_fp_master_direct, fp_scalar_part};
use crate::superspace::{
    apply, left_mult, p_super, q_super, right_mult, superop_adjoint, LeftRightSum, SuperOperator, WeylSuperFactors,
};
use crate::{C64, I, ONE};

/// Largest truncation at which `N² x N²` superoperators are formed densely.
pub const DENSE_LIMIT: usize = 32;

/// Interior block used for the Weyl composition laws.
pub const COMPOSITION_BLOCK: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Default,
    Strict,
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Profile::Default),
            "strict" => Ok(Profile::Strict),
            other => Err(Error::param("profile", format!("expected `default` or `strict`, got `{other}`"))),
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Profile::Default => "default",
            Profile::Strict => "strict",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub exact: bool,
    pub seed: u64,
    pub note: Option<String>,
}

impl CheckLine {
    pub fn pass(&self) -> bool {
        self.residual < self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraReport {
    pub n: usize,
    pub profile: Profile,
    pub seed: u64,
    pub lines: Vec<CheckLine>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(CheckLine::pass)
    }

    pub fn line(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# algebra check N={} profile={} seed={}", self.n, self.profile, self.seed);
        let _ = writeln!(out, "# name residual tolerance status");
        for l in &self.lines {
            let status = if l.pass() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{} {:.6e} {:.1e} {}", l.name, l.residual, l.tolerance, status);
            let kind = if l.exact { "exact" } else { "truncation-sensitive" };
            let _ = write!(out, "  # {kind}, seed {}", l.seed);
            if let Some(note) = &l.note {
                let _ = write!(out, ", {note}");
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub(crate) fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let x = random_matrix(rng, n);
    (&x + &x.adjoint()).scale_real(0.5)
}

struct Ctx {
    n: usize,
    profile: Profile,
    seed: u64,
    space: Arc<FockSpace>,
    dense: Arc<FockSpace>,
    lines: Vec<CheckLine>,
}

impl Ctx {
    fn rng(&self) -> (ChaCha8Rng, u64) {
        let s = self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(self.lines.len() as u64);
        (ChaCha8Rng::seed_from_u64(s), s)
    }

    fn dense_note(&self) -> Option<String> {
        (self.dense.dim() != self.n).then(|| format!("superoperators formed at N={}", self.dense.dim()))
    }

    fn push(&mut self, name: &'static str, exact: bool, tolerance: f64, seed: u64, residual: f64, note: Option<String>) {
        self.lines.push(CheckLine { name, residual, tolerance, exact, seed, note });
    }

    /// Interior size for truncation-sensitive checks; the full space under the strict profile.
    fn interior(&self, space: &FockSpace) -> usize {
        match self.profile {
            Profile::Default => space.interior(),
            Profile::Strict => space.dim(),
        }
    }

    fn sensitive_tol(&self) -> f64 {
        match self.profile {
            Profile::Default => 1e-10,
            Profile::Strict => 1e-13,
        }
    }
}

fn sup_comm(a: &SuperOperator, b: &SuperOperator) -> SuperOperator {
    a.commutator(b).expect("same space")
}

/// Largest entry of the action on operands supported in the top-left block.
fn interior_max_entry(s: &SuperOperator, m: usize) -> f64 {
    let n = s.space().dim();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        for i in 0..m {
            worst = s.mat().col(j * n + i).iter().fold(worst, |w, z| w.max(z.norm()));
        }
    }
    worst
}

/// `[A, B]` formed from left/right factors, so that exact cancellations
/// happen at the level of `N x N` products.
fn lrs_comm(space: &Arc<FockSpace>, a: &LeftRightSum, b: &LeftRightSum) -> SuperOperator {
    a.then(b).plus(&b.then(a).scale(-ONE)).to_super(space)
}

/// Norm of `S − c·Id` restricted to operands in the top-left `m x m` block.
fn shifted_interior_norm(s: &SuperOperator, c: C64, m: usize) -> f64 {
    let shifted = s.sub(&SuperOperator::identity(s.space()).scale(c)).expect("same space");
    shifted.interior_norm(m)
}

/// Runs the identity suite at truncation `n`.
pub fn check_algebra(n: usize, profile: Profile, seed: u64) -> Result<AlgebraReport> {
    if n < 8 {
        return Err(Error::param("N", format!("algebra check needs N >= 8, got {n}")));
    }
    let space = build_space(n, 1.0, 1.0, 1.0)?;
    let dense = if n > DENSE_LIMIT { build_space(DENSE_LIMIT, 1.0, 1.0, 1.0)? } else { Arc::clone(&space) };
    let mut ctx = Ctx { n, profile, seed, space, dense, lines: Vec::new() };

    exact_operator_checks(&mut ctx)?;
    exact_superoperator_checks(&mut ctx)?;
    generator_checks(&mut ctx)?;
    sensitive_checks(&mut ctx)?;
    composition_checks(&mut ctx)?;

    Ok(AlgebraReport { n, profile, seed, lines: ctx.lines })
}

fn exact_operator_checks(ctx: &mut Ctx) -> Result<()> {
    // Jordan associator on 8x8 Hermitian triples
    let (mut rng, s) = ctx.rng();
    let small = build_space(8, 1.0, 1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let mut jacobi: f64 = 0.0;
    for _ in 0..100 {
        let [a, b, c] = [0, 1, 2].map(|_| Operator::new(&small, random_hermitian(&mut rng, 8)).unwrap());
        let lhs = jordan(&jordan(&a, &b)?, &c)?.sub(&jordan(&a, &jordan(&b, &c)?)?)?;
        // with lie = (1/iħ)[·,·] the associator is ¼[B,[A,C]] = −(ħ²/4)·lie(B, lie(A,C))
        let hb2 = small.hbar() * small.hbar() / 4.0;
        let rhs = lie(&b, &lie(&a, &c)?)?.scale(C64::new(-hb2, 0.0));
        worst = worst.max(lhs.mat().distance(rhs.mat()));
        anti = anti.max(lie(&a, &b)?.add(&lie(&b, &a)?)?.mat().frobenius_norm());
        let j = lie(&a, &lie(&b, &c)?)?.add(&lie(&b, &lie(&c, &a)?)?)?.add(&lie(&c, &lie(&a, &b)?)?)?;
        jacobi = jacobi.max(j.mat().frobenius_norm());
    }
    ctx.push("jordan_associator", true, 1e-12, s, worst, Some("100 Hermitian 8x8 triples".into()));
    ctx.push("lie_antisymmetry", true, 1e-13, s, anti, None);
    ctx.push("lie_jacobi", true, 1e-12, s, jacobi, None);

    // Weyl operators are unitary
    let (mut rng, s) = ctx.rng();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let a = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
        let w = weyl_operator(&ctx.space, a)?;
        worst = worst.max(w.mat().adjoint().matmul(w.mat()).distance(&ComplexMatrix::identity(ctx.n)));
    }
    ctx.push("weyl_unitarity", true, 1e-12, s, worst, None);

    // Weyl ordering by recursion vs explicit permutation averaging
    let (_, s) = ctx.rng();
    let mut worst: f64 = 0.0;
    for total in 0..=6u32 {
        for a in 0..=total {
            let fast = weyl_quantize_poly(&ctx.space, &PolynomialSymbol::from_real(&[(1.0, a, total - a)]));
            let slow = symmetrize_bruteforce(&ctx.space, a, total - a)?;
            let scale = 1.0 + slow.mat().frobenius_norm();
            worst = worst.max(fast.mat().distance(slow.mat()) / scale);
        }
    }
    ctx.push("weyl_ordering_vs_bruteforce", true, 1e-12, s, worst, Some("relative, degree <= 6".into()));

    // real symbols quantize to Hermitian matrices
    let (mut rng, s) = ctx.rng();
    let sym = PolynomialSymbol::new(
        (0..=4u32).flat_map(|t| (0..=t).map(move |a| (a, t - a))).map(|(a, b)| (C64::new(rng.gen_range(-1.0..1.0), 0.0), a, b)),
    );
    let op = weyl_quantize_poly(&ctx.space, &sym);
    let rel = op.hermiticity_defect() / (1.0 + op.mat().frobenius_norm());
    ctx.push("real_symbol_hermitian", true, 1e-13, s, rel, Some("relative".into()));
    Ok(())
}

fn exact_superoperator_checks(ctx: &mut Ctx) -> Result<()> {
    let sp = Arc::clone(&ctx.dense);
    let nd = sp.dim();
    let note = ctx.dense_note();
    let id = Operator::identity(&sp);

    let (mut rng, s) = ctx.rng();
    let a = Operator::new(&sp, random_matrix(&mut rng, nd))?;
    let b = Operator::new(&sp, random_matrix(&mut rng, nd))?;
    let lr = sup_comm(&left_mult(&a), &right_mult(&b)).mat().max_abs();
    ctx.push("left_right_commute", true, 1e-13, s, lr, note.clone());

    let rev = right_mult(&a).compose(&right_mult(&b))?.distance(&right_mult(&b.compose(&a)?));
    let scale = 1.0 + right_mult(&b.compose(&a)?).mat().frobenius_norm();
    ctx.push("right_mult_reversal", true, 1e-13, s, rev / scale, note.clone().or(Some("relative".into())));

    let mut p_id: f64 = 0.0;
    let mut q_id: f64 = 0.0;
    let mut q_conj: f64 = 0.0;
    let mut p_conj: f64 = 0.0;
    let mut q_adj: f64 = 0.0;
    let mut p_adj: f64 = 0.0;
    for k in 1..=2 {
        let qk = q_super(&sp, k)?;
        let pk = p_super(&sp, k)?;
        p_id = p_id.max(apply(&pk, &id)?.mat().max_abs());
        q_id = q_id.max(apply(&qk, &id)?.mat().distance(sp.x(k)?));
        q_conj = q_conj.max(apply(&qk, &a)?.adjoint().mat().distance(apply(&qk, &a.adjoint())?.mat()));
        p_conj = p_conj.max(apply(&pk, &a)?.adjoint().mat().distance(&apply(&pk, &a.adjoint())?.mat().scale(-ONE)));
        q_adj = q_adj.max(superop_adjoint(&qk).distance(&qk));
        p_adj = p_adj.max(superop_adjoint(&pk).distance(&pk));
    }
    ctx.push("p_annihilates_identity", true, 1e-13, s, p_id, note.clone());
    ctx.push("q_on_identity", true, 1e-13, s, q_id, note.clone());
    ctx.push("q_conjugation", true, 1e-13, s, q_conj, note.clone());
    ctx.push("p_conjugation", true, 1e-13, s, p_conj, note.clone());
    ctx.push("q_hs_self_adjoint", true, 1e-13, s, q_adj, note.clone());
    ctx.push("p_hs_self_adjoint", true, 1e-13, s, p_adj, note.clone());

    // V(a,b) is HS-unitary
    let (mut rng, s) = ctx.rng();
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let a = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let b = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let v = WeylSuperFactors::new(&sp, a, b)?;
        let vd = WeylSuperFactors { left: v.left.adjoint(), right: v.right.adjoint() };
        let prod = vd.then(&v).to_matrix();
        worst = worst.max(prod.distance(&ComplexMatrix::identity(nd * nd)));
    }
    ctx.push("v_unitarity", true, 1e-10, s, worst, note);
    Ok(())
}

fn generator_checks(ctx: &mut Ctx) -> Result<()> {
    let sp = Arc::clone(&ctx.dense);
    let nd = sp.dim();
    let note = ctx.dense_note();

    // operators whose every term carries a derivative annihilate the identity
    let (mut rng, s) = ctx.rng();
    let mut terms = Vec::new();
    for _ in 0..6 {
        let dq = rng.gen_range(0..=2u32);
        let dp = if dq == 0 { rng.gen_range(1..=2u32) } else { rng.gen_range(0..=1u32) };
        terms.push(DynTerm::new(
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
            dq,
            dp,
        ));
    }
    let l = DynOperator::new(terms, Form::Qp);
    let gen = quantize_qp(&sp, &l)?;
    let out = apply(&gen, &Operator::identity(&sp))?;
    let rel = out.mat().frobenius_norm() / (gen.mat().frobenius_norm() * (nd as f64).sqrt());
    let unit_note = Some(note.clone().map_or("relative to |S||I|".to_string(), |d| format!("relative to |S||I|, {d}")));
    ctx.push("unitality", true, 1e-13, s, rel, unit_note);

    // damped oscillator: quantized operator vs Hamiltonian commutator plus friction
    let (m, w, g) = (1.0, 1.0, 0.1);
    let quant = quantize_qp(&sp, &damped_oscillator_dynop(m, w, g)?)?;
    let direct = damped_direct(&sp, m, w, g)?;
    ctx.push("damped_generator_equality", true, 1e-12, 0, quant.distance(&direct), note.clone());

    // Hamiltonian route vs Poisson route
    let h = PolynomialSymbol::from_real(&[(0.7, 0, 2), (0.3, 2, 0), (0.2, 1, 1)]);
    let via_poisson = quantize_qp(&sp, &poisson_generator(&h))?;
    let via_comm = hamiltonian_generator(&sp, &h)?;
    ctx.push("hamiltonian_vs_poisson", true, 1e-12, 0, via_poisson.distance(&via_comm), note.clone());

    // Fokker–Planck: quantized (h = 0) vs commutator form minus its scalar part
    let c = FpCoefficients { c_qq: -0.05, c_qp: 1.0, c_pq: -1.0, c_pp: -0.05, d_qq: 0.025, d_qp: 0.0, d_pp: 0.025 };
    let quant = quantize_qp(&sp, &fokker_planck_dynop(&c, 0.0))?;
    let direct = build_fp_master_direct(&sp, &c)?.sub(&fp_scalar_part(&sp, &c)?)?;
    ctx.push("fp_generator_equality", true, 1e-12, 0, quant.distance(&direct), note);
    Ok(())
}

/// `(i/ħ)[Ĥ,·] + (iγ/2mħ)(p̂q̂A − p̂Aq̂ + q̂Ap̂ − Aq̂p̂)`
pub fn damped_direct(space: &Arc<FockSpace>, m: f64, w: f64, g: f64) -> Result<SuperOperator> {
    let h = hamiltonian_generator(space, &PolynomialSymbol::harmonic(m, w))?;
    let q = Operator::q(space);
    let p = Operator::p(space);
    let pq = p.compose(&q)?;
    let qp = q.compose(&p)?;
    let fric = left_mult(&pq)
        .sub(&crate::superspace::sandwich(&p, &q)?)?
        .add(&crate::superspace::sandwich(&q, &p)?)?
        .sub(&right_mult(&qp))?
        .scale(C64::new(0.0, g / (2.0 * m * space.hbar())));
    h.add(&fric)
}

fn sensitive_checks(ctx: &mut Ctx) -> Result<()> {
    let tol = ctx.sensitive_tol();
    let hbar = ctx.space.hbar();

    // [q, p] = iħ
    let m = ctx.interior(&ctx.space);
    let comm = &ctx.space.q().matmul(ctx.space.p()) - &ctx.space.p().matmul(ctx.space.q());
    let target = ComplexMatrix::identity(m).scale(C64::new(0.0, hbar));
    let r = interior_block(&comm, m).distance(&target);
    ctx.push("ccr", false, tol, 0, r, Some(format!("block {m}")));

    let sp = Arc::clone(&ctx.dense);
    let m = ctx.interior(&sp);
    let mut note = format!("operands in block {m}");
    if let Some(d) = ctx.dense_note() {
        note = format!("{note}, {d}");
    }
    let (q, p) = (sp.q(), sp.p());
    let ihbar = C64::new(0.0, hbar);
    let ll = shifted_interior_norm(&lrs_comm(&sp, &LeftRightSum::left(ONE, q), &LeftRightSum::left(ONE, p)), ihbar, m);
    let rr = shifted_interior_norm(&lrs_comm(&sp, &LeftRightSum::right(ONE, q), &LeftRightSum::right(ONE, p)), -ihbar, m);
    ctx.push("left_left_ccr", false, tol, 0, ll, Some(note.clone()));
    ctx.push("right_right_ccr", false, tol, 0, rr, Some(note.clone()));

    let qs = [LeftRightSum::q_basis(&sp, 1)?, LeftRightSum::q_basis(&sp, 2)?];
    let ps = [LeftRightSum::p_basis(&sp, 1)?, LeftRightSum::p_basis(&sp, 2)?];
    let mut qp: f64 = 0.0;
    for k in 0..2 {
        for j in 0..2 {
            let c = if k == j { I } else { C64::new(0.0, 0.0) };
            qp = qp.max(shifted_interior_norm(&lrs_comm(&sp, &qs[k], &ps[j]), c, m));
        }
    }
    // these two vanish up to rounding on the interior, so they are held to
    // machine precision entrywise
    let qq = interior_max_entry(&lrs_comm(&sp, &qs[0], &qs[1]), m);
    let pp = interior_max_entry(&lrs_comm(&sp, &ps[0], &ps[1]), m);
    ctx.push("qp_commutator", false, tol, 0, qp, Some(note.clone()));
    ctx.push("qq_commutator", false, 1e-13, 0, qq, Some(format!("{note}, max entry")));
    ctx.push("pp_commutator", false, 1e-13, 0, pp, Some(format!("{note}, max entry")));

    // canonical quantization as the image of the identity
    let (mut rng, s) = ctx.rng();
    let sym = PolynomialSymbol::new(
        (0..=4u32).flat_map(|t| (0..=t).map(move |a| (a, t - a))).map(|(a, b)| (C64::new(rng.gen_range(-1.0..1.0), 0.0), a, b)),
    );
    let l = DynOperator::new(sym.terms().iter().map(|&(c, a, b)| DynTerm::new(c, a, b, 0, 0)), Form::Symmetric);
    let img = apply(&quantize_symmetric(&sp, &l)?, &Operator::identity(&sp))?;
    let weyl = weyl_quantize_poly(&sp, &sym);
    let r = interior_block(img.mat(), m).distance(&interior_block(weyl.mat(), m));
    ctx.push("symmetric_embedding", false, 1e-12, s, r, Some(format!("degree <= 4, block {m}")));
    Ok(())
}

fn composition_checks(ctx: &mut Ctx) -> Result<()> {
    let (tol, block) = match ctx.profile {
        Profile::Default => (1e-6, COMPOSITION_BLOCK.min(ctx.n - 2)),
        Profile::Strict => (1e-12, ctx.n),
    };
    let a = [0.3, 0.0];
    let b = [0.0, 0.3];
    let hbar = ctx.space.hbar();

    // Ŵ(a)Ŵ(b) = Ŵ(a+b)·exp(−(iħ/2) aΨb)
    let wa = weyl_operator(&ctx.space, a)?;
    let wb = weyl_operator(&ctx.space, b)?;
    let wab = weyl_operator(&ctx.space, [a[0] + b[0], a[1] + b[1]])?;
    let psi = a[0] * b[1] - a[1] * b[0];
    let phase = C64::new(0.0, -0.5 * hbar * psi).exp();
    let lhs = wa.mat().matmul(wb.mat());
    let rhs = wab.mat().scale(phase);
    let r = interior_block(&lhs, block).distance(&interior_block(&rhs, block));
    ctx.push("weyl_composition", false, tol, 0, r, Some(format!("block {block}")));

    // V̂(a₁,b₁)V̂(a₂,b₂) = V̂(a₁+a₂, b₁+b₂)·exp(−(i/2)(a₁·b₂ − a₂·b₁))
    let (a1, b1) = ([0.3, 0.0], [0.0, 0.3]);
    let (a2, b2) = ([0.0, 0.3], [0.3, 0.0]);
    let v1 = WeylSuperFactors::new(&ctx.space, a1, b1)?;
    let v2 = WeylSuperFactors::new(&ctx.space, a2, b2)?;
    let v12 = WeylSuperFactors::new(&ctx.space, [a1[0] + a2[0], a1[1] + a2[1]], [b1[0] + b2[0], b1[1] + b2[1]])?;
    let dot = |x: [f64; 2], y: [f64; 2]| x[0] * y[0] + x[1] * y[1];
    let phase = C64::new(0.0, -0.5 * (dot(a1, b2) - dot(a2, b1))).exp();
    let lhs = v1.then(&v2).interior_matrix(block);
    let rhs = v12.interior_matrix(block).scale(phase);
    ctx.push("v_composition", false, tol, 0, lhs.distance(&rhs), Some(format!("block {block}")));
    Ok(())
}
