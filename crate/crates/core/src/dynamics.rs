//! Overdamped particle motion under the radiation force `F = −∇ψ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::psi_direct_unchecked;
use crate::spectral::q0_decomposition;
use crate::wavefield::{cis, Coefficients, TransducerVector, WaveConfig};

/// Analytic `∇ψ` at `x`.
pub fn grad_psi(
    x: &DVector<f64>,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> Result<DVector<f64>> {
    cfg.check_point(x)?;
    cfg.check_amplitudes(u)?;
    Ok(grad_psi_unchecked(x, u, coef, cfg))
}

fn grad_psi_unchecked(
    x: &DVector<f64>,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> DVector<f64> {
    let d = cfg.dim();
    let k = cfg.k_matrix();
    let theta = cfg.phases(x);
    let i = Complex64::i();
    // c_j = α e^{iθ} + β e^{−iθ},  e_j = i(α e^{iθ} − β e^{−iθ})
    let mut c = DVector::<Complex64>::zeros(d);
    let mut e = DVector::<Complex64>::zeros(d);
    for j in 0..d {
        let fwd = u.alpha(j) * cis(theta[j]);
        let bwd = u.beta(j) * cis(-theta[j]);
        c[j] = fwd + bwd;
        e[j] = i * (fwd - bwd);
    }
    let p: Complex64 = c.iter().sum();
    let kc = k.map(|v| Complex64::new(v, 0.0));
    let grad_p = &kc * &e;
    // Hessian of p: −K diag(c) Kᵀ
    let hess = -(&kc * DMatrix::from_diagonal(&c) * kc.transpose());
    let curv = hess * grad_p.map(|z| z.conj());
    DVector::from_fn(d, |m, _| {
        2.0 * coef.a * (p.conj() * grad_p[m]).re - 2.0 * coef.b * curv[m].re
    })
}

/// Largest stable explicit step `2/L`, with `L = (λ_max − λ_min) k² |u|²`.
pub fn stability_bound(coef: &Coefficients, cfg: &WaveConfig, u: &TransducerVector) -> Result<f64> {
    let dec = q0_decomposition(coef, cfg)?;
    let l = (dec.lambda_max() - dec.lambda_min()) * cfg.wavenumber().powi(2) * u.norm().powi(2);
    Ok(if l > 0.0 { 2.0 / l } else { f64::INFINITY })
}

/// Particles and descent settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble {
    /// Cartesian positions.
    pub positions: Vec<DVector<f64>>,
    pub step_size: f64,
    pub max_iterations: usize,
    pub grad_tol: f64,
    pub record_trajectory: bool,
}

impl ParticleEnsemble {
    pub fn new(positions: Vec<DVector<f64>>) -> Self {
        Self {
            positions,
            step_size: 0.05,
            max_iterations: 20_000,
            grad_tol: 1e-6,
            record_trajectory: false,
        }
    }

    /// `n` positions uniform in the primitive cell.
    pub fn random<R: rand::Rng + ?Sized>(cfg: &WaveConfig, n: usize, rng: &mut R) -> Self {
        let d = cfg.dim();
        let positions = (0..n)
            .map(|_| cfg.to_cartesian(&DVector::from_fn(d, |_, _| rng.gen::<f64>())))
            .collect();
        Self::new(positions)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticleOutcome {
    pub id: usize,
    pub atomic: Vec<f64>,
    pub position: Vec<f64>,
    pub psi: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub iteration: usize,
    pub particle: usize,
    pub atomic: Vec<f64>,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxResult {
    pub particles: Vec<ParticleOutcome>,
    pub trajectory: Vec<TrajectoryRow>,
}

impl RelaxResult {
    pub fn converged(&self) -> usize {
        self.particles.iter().filter(|p| p.converged).count()
    }
}

fn wrap(cfg: &WaveConfig, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let alpha = cfg.to_atomic(x).map(|a| a.rem_euclid(1.0));
    (cfg.to_cartesian(&alpha), alpha)
}

const MAX_HALVINGS: usize = 60;

/// Gradient descent `x ← x − η∇ψ`, rejecting steps that raise `ψ`.
pub fn relax(
    ensemble: &ParticleEnsemble,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> Result<RelaxResult> {
    cfg.check_amplitudes(u)?;
    for x in &ensemble.positions {
        cfg.check_point(x)?;
    }
    let eta = ensemble.step_size;
    let bound = stability_bound(coef, cfg, u)?;
    if !(eta > 0.0 && eta < bound) {
        return Err(Error::OutOfRange {
            name: "step_size".into(),
            value: eta,
            range: "(0, 2/L)",
        });
    }

    let runs: Vec<Result<(ParticleOutcome, Vec<TrajectoryRow>)>> = ensemble
        .positions
        .par_iter()
        .enumerate()
        .map(|(id, x0)| relax_one(id, x0, ensemble, u, coef, cfg))
        .collect();

    let mut particles = Vec::with_capacity(runs.len());
    let mut trajectory = Vec::new();
    for run in runs {
        let (p, rows) = run?;
        particles.push(p);
        trajectory.extend(rows);
    }
    Ok(RelaxResult {
        particles,
        trajectory,
    })
}

fn relax_one(
    id: usize,
    x0: &DVector<f64>,
    ens: &ParticleEnsemble,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> Result<(ParticleOutcome, Vec<TrajectoryRow>)> {
    let (mut x, mut alpha) = wrap(cfg, x0);
    let mut value = psi_direct_unchecked(&x, u, coef, cfg);
    let mut rows = Vec::new();
    let record = |rows: &mut Vec<TrajectoryRow>, it: usize, alpha: &DVector<f64>, v: f64| {
        if ens.record_trajectory {
            rows.push(TrajectoryRow {
                iteration: it,
                particle: id,
                atomic: alpha.iter().copied().collect(),
                psi: v,
            });
        }
    };
    record(&mut rows, 0, &alpha, value);

    let mut iterations = 0;
    let mut g = grad_psi_unchecked(&x, u, coef, cfg);
    let mut converged = g.norm() < ens.grad_tol;
    while !converged && iterations < ens.max_iterations {
        iterations += 1;
        let mut eta = ens.step_size;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial = &x - &g * eta;
            if trial.iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence {
                    particle: id,
                    iteration: iterations,
                });
            }
            let tv = psi_direct_unchecked(&trial, u, coef, cfg);
            if tv <= value {
                (x, alpha) = wrap(cfg, &trial);
                value = tv;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
        record(&mut rows, iterations, &alpha, value);
        g = grad_psi_unchecked(&x, u, coef, cfg);
        converged = g.norm() < ens.grad_tol;
    }

    Ok((
        ParticleOutcome {
            id,
            atomic: alpha.iter().copied().collect(),
            position: x.iter().copied().collect(),
            psi: value,
            grad_norm: g.norm(),
            iterations,
            converged,
        },
        rows,
    ))
}
