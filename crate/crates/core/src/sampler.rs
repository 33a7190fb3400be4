//! Grid sampling of `ψ` over the primitive cell and numeric checks of
//! predicted minima.

use std::collections::VecDeque;
use std::io::Write;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levelsets::MinimaPrediction;
use crate::potential::psi_direct_unchecked;
use crate::spectral::q0_decomposition;
use crate::wavefield::{Coefficients, TransducerVector, WaveConfig};

pub const MIN_RESOLUTION: usize = 8;
pub const DEFAULT_RESOLUTION_2D: usize = 256;
pub const DEFAULT_RESOLUTION_3D: usize = 64;
/// Points sampled on each member of a predicted set.
pub const SAMPLES_PER_SET: usize = 200;
/// Slack on the eigenvalue bound.
pub const BOUND_TOL: f64 = 1e-9;

pub fn default_resolution(d: usize) -> usize {
    if d == 2 {
        DEFAULT_RESOLUTION_2D
    } else {
        DEFAULT_RESOLUTION_3D
    }
}

/// Absolute tolerance on `|ψ − λ|`, scaled with the size of `ψ`.
pub fn level_tolerance(coef: &Coefficients, u: &TransducerVector) -> f64 {
    let scale = (coef.a.abs() + coef.b.abs() * coef.wavenumber.powi(2)) * u.norm().powi(2);
    1e-9 * scale.max(1.0)
}

/// `ψ` on the grid `α = i / resolution`, `i ∈ {0..resolution−1}^d`, first axis fastest.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    resolution: usize,
    values: Vec<f64>,
    cfg: WaveConfig,
    coef: Coefficients,
    u: TransducerVector,
}

/// Evaluate `ψ` at every grid point.
pub fn sample(
    cfg: &WaveConfig,
    coef: &Coefficients,
    u: &TransducerVector,
    resolution: usize,
) -> Result<FieldGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidResolution(resolution));
    }
    if u.len() != 2 * cfg.dim() {
        return Err(Error::DimensionMismatch {
            expected: 2 * cfg.dim(),
            got: u.len(),
        });
    }
    let d = cfg.dim();
    let n = resolution.pow(d as u32);
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let alpha = atomic_of(i, d, resolution);
            psi_direct_unchecked(&cfg.to_cartesian(&alpha), u, coef, cfg)
        })
        .collect();
    Ok(FieldGrid {
        resolution,
        values,
        cfg: cfg.clone(),
        coef: *coef,
        u: u.clone(),
    })
}

fn index_vec(i: usize, d: usize, r: usize) -> Vec<usize> {
    let mut m = i;
    (0..d)
        .map(|_| {
            let c = m % r;
            m /= r;
            c
        })
        .collect()
}

fn atomic_of(i: usize, d: usize, r: usize) -> DVector<f64> {
    DVector::from_iterator(d, index_vec(i, d, r).into_iter().map(|c| c as f64 / r as f64))
}

impl FieldGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn dim(&self) -> usize {
        self.cfg.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn config(&self) -> &WaveConfig {
        &self.cfg
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coef
    }

    pub fn amplitudes(&self) -> &TransducerVector {
        &self.u
    }

    /// Grid multi-index of flat index `i`.
    pub fn index(&self, i: usize) -> Vec<usize> {
        index_vec(i, self.dim(), self.resolution)
    }

    /// Flat index of a multi-index, wrapped periodically.
    pub fn flat(&self, idx: &[i64]) -> usize {
        let r = self.resolution as i64;
        idx.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.resolution + c.rem_euclid(r) as usize)
    }

    pub fn atomic(&self, i: usize) -> DVector<f64> {
        atomic_of(i, self.dim(), self.resolution)
    }

    pub fn value_at(&self, idx: &[i64]) -> f64 {
        self.values[self.flat(idx)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV rows `alpha_1..alpha_d, x_1..x_d, psi`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let d = self.dim();
        let mut header: Vec<String> = (1..=d).map(|j| format!("alpha_{j}")).collect();
        header.extend((1..=d).map(|j| format!("x_{j}")));
        header.push("psi".into());
        writeln!(w, "{}", header.join(","))?;
        for (i, v) in self.values.iter().enumerate() {
            let alpha = self.atomic(i);
            let x = self.cfg.to_cartesian(&alpha);
            let fields: Vec<String> = alpha
                .iter()
                .chain(x.iter())
                .chain(std::iter::once(v))
                .map(|z| format!("{z:.16e}"))
                .collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// A connected set of grid minima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericMinimum {
    /// Centroid in atomic coordinates, in `[0,1)^d`.
    pub atomic: Vec<f64>,
    pub value: f64,
    pub cells: usize,
    /// Component too large to be an isolated point.
    pub extended: bool,
}

fn neighbor_offsets(d: usize) -> Vec<Vec<i64>> {
    (0..3usize.pow(d as u32))
        .map(|m| index_vec(m, d, 3).into_iter().map(|c| c as i64 - 1).collect::<Vec<i64>>())
        .filter(|o: &Vec<i64>| o.iter().any(|&c| c != 0))
        .collect()
}

/// Extended-component threshold `3·r^{(d−1)/d}`.
pub fn extended_threshold(d: usize, resolution: usize) -> f64 {
    3.0 * (resolution as f64).powf((d as f64 - 1.0) / d as f64)
}

/// Discrete local minima with periodic wrap; plateaus merge into one component.
pub fn numeric_minima(grid: &FieldGrid) -> Vec<NumericMinimum> {
    let d = grid.dim();
    let r = grid.resolution;
    let scale = grid.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale;
    let offsets = neighbor_offsets(d);
    let shifted = |i: usize, o: &[i64]| -> usize {
        let idx: Vec<i64> = grid.index(i).iter().zip(o).map(|(&c, &s)| c as i64 + s).collect();
        grid.flat(&idx)
    };

    let is_min: Vec<bool> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let v = grid.values[i];
            offsets.iter().all(|o| v <= grid.values[shifted(i, o)] + tol)
        })
        .collect();

    let mut seen = vec![false; grid.len()];
    let mut out = Vec::new();
    let threshold = extended_threshold(d, r);
    for start in 0..grid.len() {
        if !is_min[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let base: Vec<i64> = grid.index(start).iter().map(|&c| c as i64).collect();
        let mut queue = VecDeque::from([(start, base.clone())]);
        let mut sum = vec![0.0; d];
        let mut cells = 0usize;
        let mut value = f64::INFINITY;
        while let Some((i, unwrapped)) = queue.pop_front() {
            cells += 1;
            value = value.min(grid.values[i]);
            for (s, &c) in sum.iter_mut().zip(&unwrapped) {
                *s += c as f64;
            }
            for o in &offsets {
                let j = shifted(i, o);
                if is_min[j] && !seen[j] && (grid.values[j] - grid.values[i]).abs() <= tol {
                    seen[j] = true;
                    let next: Vec<i64> = unwrapped.iter().zip(o).map(|(a, b)| a + b).collect();
                    queue.push_back((j, next));
                }
            }
        }
        let atomic = sum
            .iter()
            .map(|s| (s / cells as f64 / r as f64).rem_euclid(1.0))
            .collect();
        out.push(NumericMinimum {
            atomic,
            value,
            cells,
            extended: cells as f64 > threshold,
        });
    }
    out
}

/// Distance between atomic points on the unit torus.
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = (x - y).rem_euclid(1.0);
            t.min(1.0 - t).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionStatus {
    Confirmed,
    ValueMismatch,
    ExtraMinimaFound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionCheck {
    pub kind: &'static str,
    pub level: f64,
    pub status: PredictionStatus,
    pub samples: usize,
    pub worst_level_error: f64,
    /// Numeric minima near the level that no predicted point explains.
    pub extra_minima: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub confirmed: bool,
    pub resolution: usize,
    pub level_tolerance: f64,
    pub worst_level_error: f64,
    pub predictions: Vec<PredictionCheck>,
    pub numeric_minima: Vec<NumericMinimum>,
    /// Numeric minima that no prediction accounts for.
    pub unexplained_minima: Vec<NumericMinimum>,
    pub bound: BoundCheck,
}

impl VerificationReport {
    pub fn extended_minima(&self) -> usize {
        self.numeric_minima.iter().filter(|m| m.extended).count()
    }
}

/// Check `bound` on the grid: `λ_min|u|² − ε ≤ ψ ≤ λ_max|u|² + ε`.
pub fn bound_check(grid: &FieldGrid) -> Result<BoundCheck> {
    let dec = q0_decomposition(&grid.coef, &grid.cfg)?;
    let n2 = grid.u.norm().powi(2);
    let (lo, hi) = (dec.lambda_min() * n2, dec.lambda_max() * n2);
    let (gmin, gmax) = (grid.min(), grid.max());
    let slack = BOUND_TOL * n2.max(1.0);
    Ok(BoundCheck {
        lambda_min: dec.lambda_min(),
        lambda_max: dec.lambda_max(),
        grid_min: gmin,
        grid_max: gmax,
        passed: gmin >= lo - slack && gmax <= hi + slack,
    })
}

/// Check each prediction on sampled points and against the grid minima.
pub fn verify(
    predictions: &[MinimaPrediction],
    cfg: &WaveConfig,
    coef: &Coefficients,
    u: &TransducerVector,
    grid: &FieldGrid,
) -> Result<VerificationReport> {
    let tol = level_tolerance(coef, u);
    let minima = numeric_minima(grid);
    let bound = bound_check(grid)?;
    let r = grid.resolution as f64;
    let window = tol.max(0.01 * (grid.max() - grid.min()));
    let mut explained = vec![false; minima.len()];

    let mut checks = Vec::new();
    for pred in predictions {
        let level = pred.level();
        let points = pred.sample_points(cfg, SAMPLES_PER_SET);
        let worst = points
            .par_iter()
            .map(|x| (psi_direct_unchecked(x, u, coef, cfg) - level).abs())
            .reduce(|| 0.0, f64::max);
        let near_level: Vec<usize> = (0..minima.len())
            .filter(|&i| (minima[i].value - level).abs() <= window)
            .collect();

        let mut extra = Vec::new();
        match pred {
            MinimaPrediction::PointLatticeSet { offsets, .. } => {
                for &i in &near_level {
                    let m = &minima[i];
                    let hit = !m.extended
                        && offsets
                            .iter()
                            .any(|o| torus_distance(&m.atomic, o) * r <= 1.5);
                    if hit {
                        explained[i] = true;
                    } else {
                        extra.push(m.atomic.clone());
                    }
                }
            }
            _ => {
                for &i in &near_level {
                    explained[i] = true;
                }
            }
        }
        let status = if worst >= tol {
            PredictionStatus::ValueMismatch
        } else if !extra.is_empty() {
            PredictionStatus::ExtraMinimaFound
        } else {
            PredictionStatus::Confirmed
        };
        checks.push(PredictionCheck {
            kind: pred.kind(),
            level,
            status,
            samples: points.len(),
            worst_level_error: worst,
            extra_minima: extra,
        });
    }

    let worst_level_error = checks.iter().map(|c| c.worst_level_error).fold(0.0, f64::max);
    let confirmed = !checks.is_empty()
        && bound.passed
        && checks.iter().all(|c| c.status == PredictionStatus::Confirmed);
    Ok(VerificationReport {
        confirmed,
        resolution: grid.resolution,
        level_tolerance: tol,
        worst_level_error,
        predictions: checks,
        unexplained_minima: minima
            .iter()
            .zip(&explained)
            .filter(|(_, &e)| !e)
            .map(|(m, _)| m.clone())
            .collect(),
        numeric_minima: minima,
        bound,
    })
}
