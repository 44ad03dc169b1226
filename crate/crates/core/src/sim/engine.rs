//! Time stepping for superoperator generators.
//!
//! Both methods build a one-step propagator once and reuse it. RK4 is the
//! classical four-stage polynomial `I + hS + (hS)²/2 + (hS)³/6 + (hS)⁴/24`
//! applied `substeps` times per output step.

use serde::{Deserialize, Serialize};

use crate::densecore::{expm, ComplexMatrix, EXPM_DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fockspace::{trace_product, Operator};
use crate::superspace::SuperOperator;
use crate::{C64, ONE};

/// Largest `‖S‖₁ · h` allowed for one RK4 stage.
pub const RK4_GUARD: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "EXPM")]
    Expm,
    #[serde(rename = "RK4")]
    Rk4,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Expm => "EXPM",
            Method::Rk4 => "RK4",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Propagator {
    pub mat: ComplexMatrix,
    pub method: Method,
    pub substeps: usize,
}

/// Propagator over one step `dt`. `substeps` only applies to RK4; `None`
/// picks the smallest count meeting [`RK4_GUARD`].
pub fn propagator(s: &SuperOperator, dt: f64, method: Method, substeps: Option<usize>) -> Result<Propagator> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    let gen = s.mat().scale_real(dt);
    match method {
        Method::Expm => Ok(Propagator { mat: expm(&gen, EXPM_DEFAULT_TOL)?, method, substeps: 1 }),
        Method::Rk4 => {
            let norm = gen.norm_one();
            let needed = ((norm / RK4_GUARD).ceil() as usize).max(1);
            let substeps = match substeps {
                Some(0) => return Err(Error::param("substeps", "must be at least 1")),
                Some(k) if norm / k as f64 > RK4_GUARD => {
                    return Err(Error::StepGuard(format!(
                        "||S||_1 * h = {:.4} exceeds {RK4_GUARD} with {k} substeps (need {needed})",
                        norm / k as f64
                    )))
                }
                Some(k) => k,
                None => needed,
            };
            let h = gen.scale_real(1.0 / substeps as f64);
            let n = h.rows();
            let ident = ComplexMatrix::identity(n);
            // Horner form of the degree-4 Taylor polynomial
            let mut acc = &ident + &h.scale_real(0.25);
            for k in [3.0, 2.0, 1.0] {
                let mut next = ident.clone();
                next.add_matmul(C64::new(1.0 / k, 0.0), &h, &acc);
                acc = next;
            }
            Ok(Propagator { mat: matrix_power(&acc, substeps), method, substeps })
        }
    }
}

fn matrix_power(a: &ComplexMatrix, mut k: usize) -> ComplexMatrix {
    let mut base = a.clone();
    let mut out: Option<ComplexMatrix> = None;
    while k > 0 {
        if k & 1 == 1 {
            out = Some(match out {
                None => base.clone(),
                Some(o) => o.matmul(&base),
            });
        }
        k >>= 1;
        if k > 0 {
            base = base.matmul(&base);
        }
    }
    out.unwrap_or_else(|| ComplexMatrix::identity(a.rows()))
}

/// The fixed observable set recorded by the engines.
#[derive(Clone, Debug)]
pub struct Observables {
    pub q: ComplexMatrix,
    pub p: ComplexMatrix,
    pub qq: ComplexMatrix,
    pub pp: ComplexMatrix,
    pub qp_sym: ComplexMatrix,
    pub energy: ComplexMatrix,
}

impl Observables {
    pub fn new(hamiltonian: &Operator) -> Self {
        let space = hamiltonian.space();
        let q = space.q().clone();
        let p = space.p().clone();
        let qp = q.matmul(&p);
        let pq = p.matmul(&q);
        Self {
            qq: q.matmul(&q),
            pp: p.matmul(&p),
            qp_sym: (&qp + &pq).scale_real(0.5),
            q,
            p,
            energy: hamiltonian.mat().clone(),
        }
    }

    fn list(&self) -> [&ComplexMatrix; 6] {
        [&self.q, &self.p, &self.qq, &self.pp, &self.qp_sym, &self.energy]
    }
}

#[derive(Clone, Debug, Default)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub trace_re: Vec<f64>,
    pub herm_defect: Vec<f64>,
    pub mean_q: Vec<f64>,
    pub mean_p: Vec<f64>,
    /// `⟨q̂²⟩`, `⟨p̂²⟩` and `½⟨q̂p̂ + p̂q̂⟩`
    pub second_qq: Vec<f64>,
    pub second_pp: Vec<f64>,
    pub second_qp: Vec<f64>,
    pub energy: Vec<f64>,
    pub purity: Vec<f64>,
    pub snapshots: Vec<(f64, Operator)>,
}

impl EvolutionResult {
    fn record(&mut self, t: f64, trace: C64, herm: f64, expect: [C64; 6], purity: f64) {
        self.times.push(t);
        self.trace_re.push(trace.re);
        self.herm_defect.push(herm);
        self.mean_q.push(expect[0].re);
        self.mean_p.push(expect[1].re);
        self.second_qq.push(expect[2].re);
        self.second_pp.push(expect[3].re);
        self.second_qp.push(expect[4].re);
        self.energy.push(expect[5].re);
        self.purity.push(purity);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn var_qq(&self, k: usize) -> f64 {
        self.second_qq[k] - self.mean_q[k] * self.mean_q[k]
    }

    pub fn var_pp(&self, k: usize) -> f64 {
        self.second_pp[k] - self.mean_p[k] * self.mean_p[k]
    }

    pub fn cov_qp(&self, k: usize) -> f64 {
        self.second_qp[k] - self.mean_q[k] * self.mean_p[k]
    }

    pub const CSV_HEADER: &'static str = "t,trace_re,herm_defect,mean_q,mean_p,var_qq,var_pp,cov_qp,energy,purity";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for k in 0..self.len() {
            let row = [
                self.times[k],
                self.trace_re[k],
                self.herm_defect[k],
                self.mean_q[k],
                self.mean_p[k],
                self.var_qq(k),
                self.var_pp(k),
                self.cov_qp(k),
                self.energy[k],
                self.purity[k],
            ];
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub method: Method,
    pub substeps: Option<usize>,
    /// Keep the state every `snapshot_stride` steps (0 keeps none).
    pub snapshot_stride: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { method: Method::Expm, substeps: None, snapshot_stride: 0 }
    }
}

fn to_vec(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut v = ComplexMatrix::zeros(n * n, 1);
    for j in 0..n {
        v.col_mut(0)[j * n..(j + 1) * n].copy_from_slice(a.col(j));
    }
    v
}

fn from_col(v: &[C64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| v[j * n + i])
}

fn check_inputs(s: &SuperOperator, x0: &Operator, steps: usize) -> Result<()> {
    if !s.space().same_as(x0.space()) {
        return Err(Error::SpaceMismatch);
    }
    if steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    Ok(())
}

/// Schrödinger-picture evolution `dρ/dt = S ρ`, recording diagnostics of
/// `ρ` at every step.
pub fn evolve_quantum(
    s: &SuperOperator,
    rho0: &Operator,
    hamiltonian: &Operator,
    dt: f64,
    steps: usize,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    check_inputs(s, rho0, steps)?;
    let prop = propagator(s, dt, opts.method, opts.substeps)?;
    let obs = Observables::new(hamiltonian);
    let n = rho0.space().dim();
    let mut state = to_vec(rho0.mat());
    let mut out = EvolutionResult::default();
    for k in 0..=steps {
        if k > 0 {
            state = prop.mat.matmul(&state);
        }
        let rho = from_col(state.col(0), n);
        let expect = obs.list().map(|o| trace_product(&rho, o));
        let herm = rho.distance(&rho.adjoint());
        out.record(k as f64 * dt, rho.trace(), herm, expect, trace_product(&rho, &rho).re);
        if !rho.is_finite() {
            return Err(Error::NonFinite("quantum evolution"));
        }
        if opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0 {
            out.snapshots.push((k as f64 * dt, Operator::wrap(rho0.space(), rho)));
        }
    }
    Ok(out)
}

/// Heisenberg-picture evolution `dA/dt = S A` of the recorded observables,
/// with expectations taken against the fixed initial state.
///
/// The state diagnostics (trace, Hermiticity, purity, snapshots) come from
/// the dual propagation `ρ ↦ E†ρ`, which reproduces the same expectations.
pub fn evolve_heisenberg(
    s: &SuperOperator,
    rho0: &Operator,
    hamiltonian: &Operator,
    dt: f64,
    steps: usize,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    check_inputs(s, rho0, steps)?;
    let prop = propagator(s, dt, opts.method, opts.substeps)?;
    let dual = prop.mat.adjoint();
    let obs = Observables::new(hamiltonian);
    let n = rho0.space().dim();
    let side = n * n;

    // columns: I, q, p, q², p², sym(qp), H
    let mut block = ComplexMatrix::zeros(side, 7);
    let ident = ComplexMatrix::identity(n);
    let mut cols: Vec<&ComplexMatrix> = vec![&ident];
    cols.extend(obs.list());
    for (c, m) in cols.iter().enumerate() {
        block.col_mut(c).copy_from_slice(to_vec(m).col(0));
    }
    // Tr(ρ₀ A) = Σ vec(ρ₀ᵀ)ₖ vec(A)ₖ
    let weights = to_vec(&rho0.mat().transpose());
    let mut state = to_vec(rho0.mat());
    let mut out = EvolutionResult::default();
    for k in 0..=steps {
        if k > 0 {
            block = prop.mat.matmul(&block);
            state = dual.matmul(&state);
        }
        let mut expect = [ONE; 7];
        for (c, e) in expect.iter_mut().enumerate() {
            *e = block.col(c).iter().zip(weights.col(0)).map(|(a, w)| a * w).sum();
        }
        let rho = from_col(state.col(0), n);
        let herm = rho.distance(&rho.adjoint());
        let tail = [expect[1], expect[2], expect[3], expect[4], expect[5], expect[6]];
        out.record(k as f64 * dt, expect[0], herm, tail, trace_product(&rho, &rho).re);
        if opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0 {
            out.snapshots.push((k as f64 * dt, Operator::wrap(rho0.space(), rho)));
        }
        if !block.is_finite() {
            return Err(Error::NonFinite("Heisenberg evolution"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynquant::hamiltonian_generator;
    use crate::fockspace::{build_space, coherent_state, weyl_quantize_poly, PolynomialSymbol};

    #[test]
    fn zero_generator_is_constant() {
        let s = build_space(8, 1.0, 1.0, 1.0).unwrap();
        let rho = coherent_state(&s, C64::new(0.5, 0.0)).unwrap();
        let h = weyl_quantize_poly(&s, &PolynomialSymbol::harmonic(1.0, 1.0));
        let zero = SuperOperator::zero(&s);
        for method in [Method::Expm, Method::Rk4] {
            let opts = EvolveOptions { method, ..Default::default() };
            let r = evolve_quantum(&zero, &rho, &h, 0.1, 5, &opts).unwrap();
            assert!(r.mean_q.iter().all(|&v| v == r.mean_q[0]));
        }
    }

    #[test]
    fn rk4_guard_and_substeps() {
        let s = build_space(10, 1.0, 1.0, 1.0).unwrap();
        let gen = hamiltonian_generator(&s, &PolynomialSymbol::harmonic(1.0, 1.0)).unwrap();
        let norm = gen.mat().norm_one();
        let auto = propagator(&gen, 0.05, Method::Rk4, None).unwrap();
        assert!(norm * 0.05 / auto.substeps as f64 <= RK4_GUARD);
        assert!(matches!(propagator(&gen, 0.05, Method::Rk4, Some(1)), Err(Error::StepGuard(_))));
        let exact = propagator(&gen, 0.05, Method::Expm, None).unwrap();
        let d = auto.mat.distance(&exact.mat);
        assert!(d < 1e-6, "{d}");
        // fourth order: doubling the substeps cuts the error about 16x
        let fine = propagator(&gen, 0.05, Method::Rk4, Some(2 * auto.substeps)).unwrap();
        let ratio = d / fine.mat.distance(&exact.mat);
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn matrix_power_matches_repeated_products() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64 * 0.1, 0.05));
        let mut slow = ComplexMatrix::identity(3);
        for _ in 0..5 {
            slow = slow.matmul(&a);
        }
        assert!(matrix_power(&a, 5).distance(&slow) < 1e-13);
    }

    #[test]
    fn pictures_agree() {
        let s = build_space(12, 1.0, 1.0, 1.0).unwrap();
        let hs = PolynomialSymbol::harmonic(1.0, 1.0);
        let h = weyl_quantize_poly(&s, &hs);
        let gen = hamiltonian_generator(&s, &hs).unwrap();
        let rho = coherent_state(&s, C64::new(0.7, 0.2)).unwrap();
        let opts = EvolveOptions::default();
        // Schrödinger generator of the same flow is −(i/ħ)[H, ·]
        let schr = evolve_quantum(&gen.scale(-ONE), &rho, &h, 0.1, 10, &opts).unwrap();
        let heis = evolve_heisenberg(&gen, &rho, &h, 0.1, 10, &opts).unwrap();
        for k in 0..schr.len() {
            assert!((schr.mean_q[k] - heis.mean_q[k]).abs() < 1e-12);
            assert!((schr.energy[k] - heis.energy[k]).abs() < 1e-12);
            assert!((schr.purity[k] - heis.purity[k]).abs() < 1e-12);
        }
    }
}
