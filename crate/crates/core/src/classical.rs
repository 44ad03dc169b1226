//! Phase-space grid side: finite-difference action of dynamical operators,
//! Poisson brackets and classical time evolution.
//!
//! Derivatives use fourth-order stencils, central in the interior and
//! one-sided of the same order in the two outermost points of each line.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dynquant::{DynOperator, Form};
use crate::error::{Error, Result};
use crate::{C64, ZERO};

const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

impl PhaseGrid {
    pub fn new(q_min: f64, q_max: f64, p_min: f64, p_max: f64, nq: usize, np: usize) -> Result<Self> {
        let g = Self { q_min, q_max, p_min, p_max, nq, np };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nq < MIN_POINTS || self.np < MIN_POINTS {
            return Err(Error::GridTooSmall(format!("{}x{} points, need at least {MIN_POINTS} per axis", self.nq, self.np)));
        }
        let finite = [self.q_min, self.q_max, self.p_min, self.p_max].iter().all(|v| v.is_finite());
        if !finite || self.q_max <= self.q_min || self.p_max <= self.p_min {
            return Err(Error::param("grid", "bounds must be finite with max > min"));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn len(&self) -> usize {
        self.nq * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Samples of a phase-space function, stored with `q` as the slow index.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSymbol {
    grid: PhaseGrid,
    values: Vec<C64>,
}

impl GridSymbol {
    pub fn new(grid: PhaseGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} grid values", grid.len()),
                got: format!("{}", values.len()),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &PhaseGrid, mut f: impl FnMut(f64, f64) -> C64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nq {
            for j in 0..grid.np {
                values.push(f(grid.q(i), grid.p(j)));
            }
        }
        Self { grid: *grid, values }
    }

    pub fn zeros(grid: &PhaseGrid) -> Self {
        Self { grid: *grid, values: vec![ZERO; grid.len()] }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.grid.np + j]
    }

    pub fn scale(&self, alpha: C64) -> GridSymbol {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * alpha).collect() }
    }

    pub fn add(&self, other: &GridSymbol) -> Result<GridSymbol> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    /// Largest `|self − other|` over points at least `margin` points from every edge.
    pub fn interior_max_diff(&self, other: &GridSymbol, margin: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for i in margin..self.grid.nq.saturating_sub(margin) {
            for j in margin..self.grid.np.saturating_sub(margin) {
                worst = worst.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        worst
    }

    fn derivative(&self, axis: Axis, order: u32) -> Result<Vec<C64>> {
        let g = &self.grid;
        let (len, stride, lines, line_stride, h) = match axis {
            Axis::Q => (g.nq, g.np, g.np, 1, g.dq()),
            Axis::P => (g.np, 1, g.nq, g.np, g.dp()),
        };
        let mut out = vec![ZERO; self.values.len()];
        if order == 0 {
            out.copy_from_slice(&self.values);
            return Ok(out);
        }
        if order > 2 {
            return Err(Error::DerivativeOrder { axis: axis.name(), order });
        }
        let mut line = vec![ZERO; len];
        let mut d = vec![ZERO; len];
        for l in 0..lines {
            let base = l * line_stride;
            for k in 0..len {
                line[k] = self.values[base + k * stride];
            }
            if order == 1 {
                first_derivative(&line, h, &mut d);
            } else {
                second_derivative(&line, h, &mut d);
            }
            for k in 0..len {
                out[base + k * stride] = d[k];
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Axis {
    Q,
    P,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::Q => "q",
            Axis::P => "p",
        }
    }
}

fn first_derivative(f: &[C64], h: f64, out: &mut [C64]) {
    let n = f.len();
    let s = 1.0 / (12.0 * h);
    let edge = |g: &dyn Fn(usize) -> C64| {
        (
            (g(0) * -25.0 + g(1) * 48.0 - g(2) * 36.0 + g(3) * 16.0 - g(4) * 3.0) * s,
            (g(0) * -3.0 - g(1) * 10.0 + g(2) * 18.0 - g(3) * 6.0 + g(4)) * s,
        )
    };
    let (d0, d1) = edge(&|k| f[k]);
    let (e0, e1) = edge(&|k| f[n - 1 - k]);
    out[0] = d0;
    out[1] = d1;
    out[n - 1] = -e0;
    out[n - 2] = -e1;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * s;
    }
}

fn second_derivative(f: &[C64], h: f64, out: &mut [C64]) {
    let n = f.len();
    let s = 1.0 / (12.0 * h * h);
    let edge = |g: &dyn Fn(usize) -> C64| {
        (
            (g(0) * 45.0 - g(1) * 154.0 + g(2) * 214.0 - g(3) * 156.0 + g(4) * 61.0 - g(5) * 10.0) * s,
            (g(0) * 10.0 - g(1) * 15.0 - g(2) * 4.0 + g(3) * 14.0 - g(4) * 6.0 + g(5)) * s,
        )
    };
    let (d0, d1) = edge(&|k| f[k]);
    let (e0, e1) = edge(&|k| f[n - 1 - k]);
    out[0] = d0;
    out[1] = d1;
    out[n - 1] = e0;
    out[n - 2] = e1;
    for i in 2..n - 2 {
        out[i] = (-f[i + 2] + f[i + 1] * 16.0 - f[i] * 30.0 + f[i - 1] * 16.0 - f[i - 2]) * s;
    }
}

/// `∂_qᶜ ∂_pᵈ f`
pub fn grid_derivative(f: &GridSymbol, dq: u32, dp: u32) -> Result<GridSymbol> {
    let along_q = GridSymbol { grid: f.grid, values: f.derivative(Axis::Q, dq)? };
    Ok(GridSymbol { grid: f.grid, values: along_q.derivative(Axis::P, dp)? })
}

/// Action of a dynamical operator on grid samples.
pub fn apply_dynop_grid(l: &DynOperator, f: &GridSymbol) -> Result<GridSymbol> {
    let l = if l.form() == Form::Symmetric { l.to_qp_form() } else { l.clone() };
    let grid = f.grid;
    let mut derivs: HashMap<(u32, u32), GridSymbol> = HashMap::new();
    let mut out = vec![ZERO; grid.len()];
    for t in l.terms() {
        let key = (t.index.dq, t.index.dp);
        if !derivs.contains_key(&key) {
            derivs.insert(key, grid_derivative(f, key.0, key.1)?);
        }
        let d = &derivs[&key];
        let (a, b) = (t.index.q as i32, t.index.p as i32);
        for i in 0..grid.nq {
            let qa = grid.q(i).powi(a);
            for j in 0..grid.np {
                let k = i * grid.np + j;
                out[k] += t.coeff * qa * grid.p(j).powi(b) * d.values[k];
            }
        }
    }
    Ok(GridSymbol { grid, values: out })
}

/// `{A, B} = ∂_q A ∂_p B − ∂_p A ∂_q B`
pub fn poisson_bracket_grid(a: &GridSymbol, b: &GridSymbol) -> Result<GridSymbol> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let aq = a.derivative(Axis::Q, 1)?;
    let ap = a.derivative(Axis::P, 1)?;
    let bq = b.derivative(Axis::Q, 1)?;
    let bp = b.derivative(Axis::P, 1)?;
    let values = (0..a.values.len()).map(|k| aq[k] * bp[k] - ap[k] * bq[k]).collect();
    Ok(GridSymbol { grid: a.grid, values })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mass: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub cov_qq: f64,
    pub cov_qp: f64,
    pub cov_pp: f64,
}

/// Mass, means and covariances of the real part of `f` by trapezoidal quadrature.
pub fn grid_moments(f: &GridSymbol) -> Moments {
    let g = &f.grid;
    let weight = |k: usize, n: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
    let mut raw = [0.0f64; 6]; // 1, q, p, q², qp, p²
    for i in 0..g.nq {
        let q = g.q(i);
        let wq = weight(i, g.nq);
        for j in 0..g.np {
            let p = g.p(j);
            let w = wq * weight(j, g.np) * f.get(i, j).re;
            raw[0] += w;
            raw[1] += w * q;
            raw[2] += w * p;
            raw[3] += w * q * q;
            raw[4] += w * q * p;
            raw[5] += w * p * p;
        }
    }
    let cell = g.dq() * g.dp();
    let mass = raw[0] * cell;
    if mass == 0.0 {
        return Moments::default();
    }
    let m = |k: usize| raw[k] / raw[0];
    let (mq, mp) = (m(1), m(2));
    Moments {
        mass,
        mean_q: mq,
        mean_p: mp,
        cov_qq: m(3) - mq * mq,
        cov_qp: m(4) - mq * mp,
        cov_pp: m(5) - mp * mp,
    }
}

/// Normalized Gaussian density with the given mean and covariance `[[qq, qp], [qp, pp]]`.
pub fn gaussian(grid: &PhaseGrid, mean: [f64; 2], cov: [[f64; 2]; 2]) -> Result<GridSymbol> {
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    if !(det > 0.0 && cov[0][0] > 0.0) {
        return Err(Error::param("cov", "covariance must be positive definite"));
    }
    let inv = [[cov[1][1] / det, -cov[0][1] / det], [-cov[1][0] / det, cov[0][0] / det]];
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    Ok(GridSymbol::from_fn(grid, |q, p| {
        let (x, y) = (q - mean[0], p - mean[1]);
        let e = inv[0][0] * x * x + 2.0 * inv[0][1] * x * y + inv[1][1] * y * y;
        C64::new(norm * (-0.5 * e).exp(), 0.0)
    }))
}

#[derive(Clone, Debug)]
pub struct ClassicalEvolution {
    pub times: Vec<f64>,
    pub moments: Vec<Moments>,
    pub snapshots: Vec<(f64, GridSymbol)>,
}

/// Largest step allowed by the diffusion and drift guards.
pub fn max_stable_dt(l: &DynOperator, grid: &PhaseGrid) -> f64 {
    let l = l.to_qp_form();
    let mut limit = f64::INFINITY;
    let h_min = grid.dq().min(grid.dp());
    let qmax = grid.q_min.abs().max(grid.q_max.abs());
    let pmax = grid.p_min.abs().max(grid.p_max.abs());
    let mut speed = [0.0f64; 2];
    let mut diffusion = 0.0f64;
    for t in l.terms() {
        let size = t.coeff.norm() * qmax.powi(t.index.q as i32) * pmax.powi(t.index.p as i32);
        match t.index.dq + t.index.dp {
            1 if t.index.dq == 1 => speed[0] += size,
            1 => speed[1] += size,
            2 => diffusion = diffusion.max(size),
            _ => {}
        }
    }
    if diffusion > 0.0 {
        limit = limit.min(0.25 * h_min * h_min / diffusion);
    }
    if speed[0] > 0.0 {
        limit = limit.min(0.5 * grid.dq() / speed[0]);
    }
    if speed[1] > 0.0 {
        limit = limit.min(0.5 * grid.dp() / speed[1]);
    }
    limit
}

/// Fixed-step RK4 for `∂f/∂t = L f`.
///
/// Moments are recorded at every step; snapshots every `stride` steps
/// (`stride = 0` keeps only the initial state).
pub fn evolve_classical(l: &DynOperator, f0: &GridSymbol, dt: f64, steps: usize, stride: usize) -> Result<ClassicalEvolution> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    let limit = max_stable_dt(l, &f0.grid);
    if dt > limit {
        return Err(Error::StepGuard(format!("dt = {dt} exceeds the grid stability limit {limit:.6e}")));
    }
    let mut f = f0.clone();
    let mut out = ClassicalEvolution {
        times: vec![0.0],
        moments: vec![grid_moments(&f)],
        snapshots: vec![(0.0, f.clone())],
    };
    let axpy = |base: &GridSymbol, k: &GridSymbol, h: f64| GridSymbol {
        grid: base.grid,
        values: base.values.iter().zip(&k.values).map(|(a, b)| a + b * h).collect(),
    };
    for step in 1..=steps {
        let k1 = apply_dynop_grid(l, &f)?;
        let k2 = apply_dynop_grid(l, &axpy(&f, &k1, dt / 2.0))?;
        let k3 = apply_dynop_grid(l, &axpy(&f, &k2, dt / 2.0))?;
        let k4 = apply_dynop_grid(l, &axpy(&f, &k3, dt))?;
        for (idx, v) in f.values.iter_mut().enumerate() {
            *v += (k1.values[idx] + (k2.values[idx] + k3.values[idx]) * 2.0 + k4.values[idx]) * (dt / 6.0);
        }
        if f.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("classical evolution"));
        }
        let t = step as f64 * dt;
        out.times.push(t);
        out.moments.push(grid_moments(&f));
        if stride > 0 && step % stride == 0 {
            out.snapshots.push((t, f.clone()));
        }
    }
    Ok(out)
}
