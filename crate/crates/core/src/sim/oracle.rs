//! Closed linear ODEs for first and second moments under quadratic drift
//! and constant diffusion: `ṁ = B m`, `Ċ = BC + CBᵀ + 2D`.

use crate::densecore::{expm, ComplexMatrix, EXPM_DEFAULT_TOL};
use crate::dynquant::FpCoefficients;
use crate::error::Result;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearMoments {
    pub drift: [[f64; 2]; 2],
    pub diffusion: [[f64; 2]; 2],
}

impl LinearMoments {
    /// `q̇ = p/m`, `ṗ = −mω²q − (γ/m)p`
    pub fn damped_oscillator(mass: f64, omega: f64, gamma: f64) -> Self {
        Self {
            drift: [[0.0, 1.0 / mass], [-mass * omega * omega, -gamma / mass]],
            diffusion: [[0.0; 2]; 2],
        }
    }

    /// Moments of a density evolved by the second-order operator with the
    /// mass-conserving constant term.
    pub fn fokker_planck(c: &FpCoefficients) -> Self {
        Self {
            drift: [[-c.c_qq, -c.c_pq], [-c.c_qp, -c.c_pp]],
            diffusion: [[c.d_qq, c.d_qp], [c.d_qp, c.d_pp]],
        }
    }

    pub fn means(&self, m0: [f64; 2], t: f64) -> Result<[f64; 2]> {
        let b = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(self.drift[i][j] * t, 0.0));
        let e = expm(&b, EXPM_DEFAULT_TOL)?;
        Ok([
            e[(0, 0)].re * m0[0] + e[(0, 1)].re * m0[1],
            e[(1, 0)].re * m0[0] + e[(1, 1)].re * m0[1],
        ])
    }

    /// Covariance `[[qq, qp], [qp, pp]]` at time `t`.
    pub fn covariance(&self, c0: [[f64; 2]; 2], t: f64) -> Result<[[f64; 2]; 2]> {
        // state (C_qq, C_qp, C_pp, 1) with the diffusion as a constant source
        let b = &self.drift;
        let d = &self.diffusion;
        let rows = [
            [2.0 * b[0][0], 2.0 * b[0][1], 0.0, 2.0 * d[0][0]],
            [b[1][0], b[0][0] + b[1][1], b[0][1], 2.0 * d[0][1]],
            [0.0, 2.0 * b[1][0], 2.0 * b[1][1], 2.0 * d[1][1]],
            [0.0, 0.0, 0.0, 0.0],
        ];
        let a = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(rows[i][j] * t, 0.0));
        let e = expm(&a, EXPM_DEFAULT_TOL)?;
        let x0 = [c0[0][0], c0[0][1], c0[1][1], 1.0];
        let x: Vec<f64> = (0..3).map(|i| (0..4).map(|j| e[(i, j)].re * x0[j]).sum()).collect();
        Ok([[x[0], x[1]], [x[1], x[2]]])
    }
}
