//! End-to-end scenario runs: build the space, quantize the generator,
//! evolve, optionally run the classical counterpart, and write files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::classical::{evolve_classical, gaussian, max_stable_dt, GridSymbol, Moments};
use crate::dynquant::{
    damped_oscillator_dynop, fokker_planck_dynop, quantize_qp, quantize_symmetric, DynOperator, DynTerm, Form,
};
use crate::error::{Error, Result};
use crate::fockspace::{build_space, coherent_state, fock_state, weyl_quantize_poly, weyl_symbol, FockSpace, Operator, PolynomialSymbol};
use crate::sim::algebra::{check_algebra, AlgebraReport};
use crate::sim::config::{FormName, HChoice, HName, InitialState, Picture, ScenarioConfig, ScenarioKind};
use crate::sim::dump::GeneratorDump;
use crate::sim::engine::{evolve_heisenberg, evolve_quantum, EvolutionResult, EvolveOptions};
use crate::sim::fokker_planck::{
    build_fp_master_direct, fp_hamiltonian, fp_parameters, fp_scalar_part, trace_preservation_scan, FpParameters,
    TraceScan,
};
use crate::sim::oracle::LinearMoments;
use crate::superspace::SuperOperator;
use crate::C64;

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const CLASSICAL_FILE: &str = "classical.csv";
pub const FP_REPORT_FILE: &str = "fp_report.txt";
pub const ALGEBRA_REPORT_FILE: &str = "algebra_report.txt";
pub const GENERATOR_FILE: &str = "generator.json";

#[derive(Clone, Debug)]
pub struct FpSummary {
    pub scan: TraceScan,
    pub h_used: f64,
    pub parameters: FpParameters,
    /// `‖direct − Jordan term − quantize_qp(L, h = 0)‖_F`
    pub equality_distance: f64,
}

/// Everything a scenario computes, before any file is written.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub config: ScenarioConfig,
    pub picture: Option<Picture>,
    pub evolution: Option<EvolutionResult>,
    /// Classical moments at the quantum output times.
    pub classical: Option<Vec<(f64, Moments)>>,
    pub fp: Option<FpSummary>,
    pub algebra: Option<AlgebraReport>,
    pub generator: Option<SuperOperator>,
    pub wigner: Vec<(f64, GridSymbol)>,
}

pub fn initial_state(space: &Arc<FockSpace>, init: &InitialState) -> Result<Operator> {
    match init {
        InitialState::Coherent { alpha } => coherent_state(space, C64::new(alpha[0], alpha[1])),
        InitialState::Fock { k } => fock_state(space, *k),
    }
}

/// Quantum means and covariance of `rho`, with the symmetrized `qp` moment.
pub fn state_moments(rho: &Operator) -> ([f64; 2], [[f64; 2]; 2]) {
    let sp = rho.space();
    let tr = |m: &crate::ComplexMatrix| crate::fockspace::trace_product(rho.mat(), m).re;
    let (q, p) = (sp.q(), sp.p());
    let mq = tr(q);
    let mp = tr(p);
    let qq = tr(&q.matmul(q)) - mq * mq;
    let pp = tr(&p.matmul(p)) - mp * mp;
    let qp = 0.5 * (tr(&q.matmul(p)) + tr(&p.matmul(q))) - mq * mp;
    ([mq, mp], [[qq, qp], [qp, pp]])
}

fn options(cfg: &ScenarioConfig) -> EvolveOptions {
    EvolveOptions { method: cfg.method, substeps: None, snapshot_stride: cfg.snapshot_stride }
}

fn custom_dynop(cfg: &ScenarioConfig) -> DynOperator {
    let form = match cfg.custom.form {
        FormName::Qp => Form::Qp,
        FormName::Symmetric => Form::Symmetric,
    };
    DynOperator::new(
        cfg.custom.terms.iter().map(|t| DynTerm::new(C64::new(t.coeff[0], t.coeff[1]), t.q, t.p, t.dq, t.dp)),
        form,
    )
}

/// Runs the configured scenario without touching the file system.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Simulation> {
    cfg.validate()?;
    let mut sim = Simulation {
        config: cfg.clone(),
        picture: None,
        evolution: None,
        classical: None,
        fp: None,
        algebra: None,
        generator: None,
        wigner: Vec::new(),
    };
    if cfg.scenario == ScenarioKind::AlgebraCheck {
        sim.algebra = Some(check_algebra(cfg.n, cfg.algebra.profile, cfg.seed)?);
        return Ok(sim);
    }

    let space = build_space(cfg.n, cfg.hbar, cfg.mass, cfg.omega)?;
    let rho0 = initial_state(&space, &cfg.initial_state)?;
    let opts = options(cfg);

    let (generator, hamiltonian, picture) = match cfg.scenario {
        ScenarioKind::DampedOscillator => {
            let l = damped_oscillator_dynop(cfg.mass, cfg.omega, cfg.gamma)?;
            let h = weyl_quantize_poly(&space, &PolynomialSymbol::harmonic(cfg.mass, cfg.omega));
            (quantize_qp(&space, &l)?, h, Picture::Heisenberg)
        }
        ScenarioKind::FokkerPlanck => {
            let c = cfg.fp.coefficients();
            let scan = trace_preservation_scan(&space, &c)?;
            let h_used = match cfg.fp.h {
                HChoice::Named(HName::HStar) => scan.h_star,
                HChoice::Named(HName::Formula) => scan.formula_h,
                HChoice::Value(v) => v,
            };
            let quantized_zero = quantize_qp(&space, &fokker_planck_dynop(&c, 0.0))?;
            let direct = build_fp_master_direct(&space, &c)?.sub(&fp_scalar_part(&space, &c)?)?;
            let equality_distance = direct.distance(&quantized_zero);
            drop(direct);
            let gen = quantized_zero.add(&SuperOperator::identity(&space).scale(C64::new(h_used, 0.0)))?;
            sim.fp = Some(FpSummary { scan, h_used, parameters: fp_parameters(&c)?, equality_distance });
            (gen, fp_hamiltonian(&space, &c)?, Picture::Schrodinger)
        }
        ScenarioKind::Custom => {
            let l = custom_dynop(cfg);
            let gen = match l.form() {
                Form::Qp => quantize_qp(&space, &l)?,
                Form::Symmetric => quantize_symmetric(&space, &l)?,
            };
            let h = weyl_quantize_poly(&space, &PolynomialSymbol::harmonic(cfg.mass, cfg.omega));
            (gen, h, cfg.custom.picture)
        }
        ScenarioKind::AlgebraCheck => unreachable!("handled above"),
    };

    let evolution = match picture {
        Picture::Heisenberg => evolve_heisenberg(&generator, &rho0, &hamiltonian, cfg.dt, cfg.steps, &opts)?,
        Picture::Schrodinger => evolve_quantum(&generator, &rho0, &hamiltonian, cfg.dt, cfg.steps, &opts)?,
    };

    if cfg.output.classical_twin {
        sim.classical = Some(match cfg.scenario {
            ScenarioKind::FokkerPlanck => {
                let h = sim.fp.as_ref().map(|f| f.h_used).unwrap_or_default();
                grid_twin(cfg, &rho0, &fokker_planck_dynop(&cfg.fp.coefficients(), h))?
            }
            ScenarioKind::DampedOscillator => {
                ode_twin(cfg, &rho0, &LinearMoments::damped_oscillator(cfg.mass, cfg.omega, cfg.gamma))?
            }
            _ => grid_twin(cfg, &rho0, &custom_dynop(cfg))?,
        });
    }

    if cfg.output.wigner {
        let norm = 1.0 / (2.0 * std::f64::consts::PI * cfg.hbar);
        for (t, snap) in &evolution.snapshots {
            sim.wigner.push((*t, weyl_symbol(snap, &cfg.grid)?.scale(C64::new(norm, 0.0))));
        }
    }
    if cfg.output.dump_generator {
        sim.generator = Some(generator);
    }
    sim.picture = Some(picture);
    sim.evolution = Some(evolution);
    Ok(sim)
}

/// Exact moment trajectories of the linear ODE started from the quantum moments.
fn ode_twin(cfg: &ScenarioConfig, rho0: &Operator, ode: &LinearMoments) -> Result<Vec<(f64, Moments)>> {
    let (m0, c0) = state_moments(rho0);
    let mass = rho0.trace().re;
    (0..=cfg.steps)
        .map(|k| {
            let t = k as f64 * cfg.dt;
            let m = ode.means(m0, t)?;
            let c = ode.covariance(c0, t)?;
            let mom = Moments { mass, mean_q: m[0], mean_p: m[1], cov_qq: c[0][0], cov_qp: c[0][1], cov_pp: c[1][1] };
            Ok((t, mom))
        })
        .collect()
}

/// Grid evolution of the initial Wigner function, sub-stepped to satisfy the
/// stability guard and sampled at the quantum output times.
fn grid_twin(cfg: &ScenarioConfig, rho0: &Operator, l: &DynOperator) -> Result<Vec<(f64, Moments)>> {
    let f0 = match cfg.initial_state {
        InitialState::Coherent { .. } => {
            let (m0, c0) = state_moments(rho0);
            gaussian(&cfg.grid, m0, c0)?
        }
        InitialState::Fock { .. } => {
            let norm = 1.0 / (2.0 * std::f64::consts::PI * cfg.hbar);
            let w = weyl_symbol(rho0, &cfg.grid)?.scale(C64::new(norm, 0.0));
            GridSymbol::new(cfg.grid, w.values().iter().map(|z| C64::new(z.re, 0.0)).collect())?
        }
    };
    let limit = max_stable_dt(l, &cfg.grid);
    let sub = ((cfg.dt / limit).ceil() as usize).max(1);
    let run = evolve_classical(l, &f0, cfg.dt / sub as f64, cfg.steps * sub, 0)?;
    Ok((0..=cfg.steps).map(|k| (k as f64 * cfg.dt, run.moments[k * sub].clone())).collect())
}

fn moments_csv(rows: &[(f64, Moments)]) -> String {
    let mut out = String::from("t,mass,mean_q,mean_p,var_qq,var_pp,cov_qp\n");
    for (t, m) in rows {
        let cells = [*t, m.mass, m.mean_q, m.mean_p, m.cov_qq, m.cov_pp, m.cov_qp];
        let line: Vec<String> = cells.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn wigner_csv(w: &GridSymbol) -> String {
    let g = w.grid();
    let mut out = String::from("q,p,value\n");
    for i in 0..g.nq {
        for j in 0..g.np {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", g.q(i), g.p(j), w.get(i, j).re);
        }
    }
    out
}

fn fp_report(fp: &FpSummary) -> String {
    let s = &fp.scan;
    let p = &fp.parameters;
    let mut out = String::new();
    let _ = writeln!(out, "h_star {:.16e}", s.h_star);
    let _ = writeln!(out, "h_star_residual {:.6e}", s.residual);
    let _ = writeln!(out, "interior_block {}", s.interior);
    let _ = writeln!(out, "formula_h {:.16e}", s.formula_h);
    let _ = writeln!(out, "formula_h_discrepancy {}", if s.discrepancy() { "yes" } else { "no" });
    let _ = writeln!(out, "classical_mass_conserving_h {:.16e}", s.classical_h);
    let _ = writeln!(out, "h_used {:.16e}", fp.h_used);
    let _ = writeln!(out, "generator_equality_distance {:.6e}", fp.equality_distance);
    let _ = writeln!(out, "mass {:.16e}", p.mass);
    let _ = writeln!(out, "omega_sq {:.16e}", p.omega_sq);
    let _ = writeln!(out, "lambda {:.16e}", p.lambda);
    let _ = writeln!(out, "mu {:.16e}", p.mu);
    let _ = writeln!(out, "# complete positivity of the generator is not verified");
    out
}

fn manifest(sim: &Simulation, files: &[String]) -> String {
    let cfg = &sim.config;
    let mut out = String::new();
    let _ = writeln!(out, "dynaquant {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "scenario: {}", cfg.scenario.name());
    let _ = writeln!(out, "seed: {}", cfg.seed);
    if let Some(p) = sim.picture {
        let name = match p {
            Picture::Heisenberg => "heisenberg",
            Picture::Schrodinger => "schrodinger",
        };
        let _ = writeln!(out, "picture: {name}");
        let _ = writeln!(out, "method: {}", cfg.method);
    }
    let _ = writeln!(out, "phase-space ordering: (q, p); operators vectorized by column stacking");
    let _ = writeln!(out, "files: {}", files.join(", "));
    let _ = writeln!(out, "\n# config\n{}", cfg.to_toml());
    out
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<String>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    files.push(name.to_string());
    Ok(())
}

/// Writes the outputs of `sim` into `dir` and returns the file names.
pub fn write_outputs(sim: &Simulation, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    if let Some(ev) = &sim.evolution {
        write(dir, TIMESERIES_FILE, &ev.to_csv(), &mut files)?;
    }
    if let Some(rows) = &sim.classical {
        write(dir, CLASSICAL_FILE, &moments_csv(rows), &mut files)?;
    }
    if let Some(fp) = &sim.fp {
        write(dir, FP_REPORT_FILE, &fp_report(fp), &mut files)?;
    }
    if let Some(rep) = &sim.algebra {
        write(dir, ALGEBRA_REPORT_FILE, &rep.to_text(), &mut files)?;
    }
    for (k, (_, w)) in sim.wigner.iter().enumerate() {
        write(dir, &format!("wigner_{k}.csv"), &wigner_csv(w), &mut files)?;
    }
    if let Some(g) = &sim.generator {
        let path = dir.join(GENERATOR_FILE);
        GeneratorDump::from_super(g).write(&path)?;
        files.push(GENERATOR_FILE.to_string());
    }
    let text = manifest(sim, &files);
    write(dir, MANIFEST_FILE, &text, &mut files)?;
    Ok(files.into_iter().map(|f| dir.join(f)).collect())
}

/// Simulates and writes into `config.output.dir`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<(Simulation, Vec<PathBuf>)> {
    let sim = simulate(cfg)?;
    let files = write_outputs(&sim, &cfg.output.dir)?;
    Ok((sim, files))
}
