//! The radiation potential as a quadratic form in the amplitudes.
//!
//! `ψ(x; u) = u* Q(x) u` with `Q(x) = M(x)* diag(a, −b I_d) M(x)`, where
//! `M(x) u = [p(x; u); ∇p(x; u)]`. A spatial shift is a diagonal unitary
//! similarity of `Q`, so the spectrum of `Q(x)` equals that of the real
//! symmetric `Q(0) = a 𝟙𝟙ᵀ − b [Kᵀ; −Kᵀ][Kᵀ; −Kᵀ]ᵀ`, whose wave block is the
//! Gram matrix `KᵀK` of the wavevectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Result;
use crate::wavefield::{cis, field_unchecked, Coefficients, TransducerVector, WaveConfig};

/// `M(x) = [M₊(x) M₋(x)]`, a `(d+1) × 2d` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveMatrix(DMatrix<Complex64>);

impl WaveMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn plus_block(&self) -> DMatrix<Complex64> {
        let d = self.0.ncols() / 2;
        self.0.columns(0, d).into_owned()
    }

    pub fn minus_block(&self) -> DMatrix<Complex64> {
        let d = self.0.ncols() / 2;
        self.0.columns(d, d).into_owned()
    }

    /// `[p; ∇p]` for amplitudes `u`.
    pub fn apply(&self, u: &TransducerVector) -> DVector<Complex64> {
        &self.0 * u.as_vector()
    }
}

/// Hermitian `2d × 2d` matrix of the quadratic form at one position.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialMatrix {
    pub q: DMatrix<Complex64>,
    pub at_origin: bool,
}

impl PotentialMatrix {
    /// `u* Q u`, both real and imaginary parts.
    pub fn quadratic_form(&self, u: &TransducerVector) -> Complex64 {
        let v = u.as_vector();
        v.dotc(&(&self.q * v))
    }

    /// Largest entrywise deviation from `Q = Q*`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.q.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.q[(i, j)] - self.q[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

pub fn build_m(x: &DVector<f64>, cfg: &WaveConfig) -> Result<WaveMatrix> {
    cfg.check_point(x)?;
    let d = cfg.dim();
    let theta = cfg.phases(x);
    let k = cfg.k_matrix();
    let mut m = DMatrix::<Complex64>::zeros(d + 1, 2 * d);
    for j in 0..d {
        let e = cis(theta[j]);
        m[(0, j)] = e;
        m[(0, d + j)] = e.conj();
        for r in 0..d {
            m[(r + 1, j)] = Complex64::i() * e * k[(r, j)];
            m[(r + 1, d + j)] = -Complex64::i() * e.conj() * k[(r, j)];
        }
    }
    Ok(WaveMatrix(m))
}

/// Closed form of `Q(0)` (real symmetric): `a 𝟙𝟙ᵀ − b [Kᵀ; −Kᵀ][Kᵀ; −Kᵀ]ᵀ`.
pub fn q0(coef: &Coefficients, cfg: &WaveConfig) -> DMatrix<f64> {
    let d = cfg.dim();
    let k = cfg.k_matrix();
    let mut stacked = DMatrix::<f64>::zeros(2 * d, d);
    stacked.view_mut((0, 0), (d, d)).copy_from(&k.transpose());
    stacked.view_mut((d, 0), (d, d)).copy_from(&(-k.transpose()));
    // stacked = [Kᵀ; −Kᵀ]: row i is ±k_i, so the lower-right block is the
    // Gram matrix KᵀK of the wavevectors
    DMatrix::from_element(2 * d, 2 * d, coef.a) - (&stacked * stacked.transpose()) * coef.b
}

/// `M* diag(a, −b I) M`.
pub fn q_from_wave_matrix(m: &WaveMatrix, coef: &Coefficients) -> DMatrix<Complex64> {
    let mm = m.matrix();
    let mut weighted = mm.clone();
    for (r, mut row) in weighted.row_iter_mut().enumerate() {
        let w = if r == 0 { coef.a } else { -coef.b };
        row *= Complex64::new(w, 0.0);
    }
    mm.adjoint() * weighted
}

pub fn build_q(x: &DVector<f64>, coef: &Coefficients, cfg: &WaveConfig) -> Result<PotentialMatrix> {
    cfg.check_point(x)?;
    if x.iter().all(|&v| v == 0.0) {
        return Ok(PotentialMatrix {
            q: q0(coef, cfg).map(|v| Complex64::new(v, 0.0)),
            at_origin: true,
        });
    }
    let m = build_m(x, cfg)?;
    Ok(PotentialMatrix {
        q: q_from_wave_matrix(&m, coef),
        at_origin: false,
    })
}

/// `ψ(x; u) = u* Q(x) u`.
pub fn psi(
    x: &DVector<f64>,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> Result<f64> {
    cfg.check_amplitudes(u)?;
    let q = build_q(x, coef, cfg)?;
    let val = q.quadratic_form(u);
    debug_assert!(
        val.im.abs() <= 1e-10 * (1.0 + q.q.norm() * u.norm().powi(2)),
        "imaginary part {} in u*Qu",
        val.im
    );
    Ok(val.re)
}

/// `ψ = a|p|² − b|∇p|²` evaluated from the field directly.
pub fn psi_direct(
    x: &DVector<f64>,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> Result<f64> {
    cfg.check_point(x)?;
    cfg.check_amplitudes(u)?;
    Ok(psi_direct_unchecked(x, u, coef, cfg))
}

pub(crate) fn psi_direct_unchecked(
    x: &DVector<f64>,
    u: &TransducerVector,
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> f64 {
    let (p, g) = field_unchecked(x, u, cfg);
    coef.a * p.norm_sqr() - coef.b * g.norm_squared()
}

/// `exp(i [K, −K]ᵀ ε)`, the per-amplitude phase factors of a shift `ε`.
pub fn shift_phases(eps: &DVector<f64>, cfg: &WaveConfig) -> Result<DVector<Complex64>> {
    cfg.check_point(eps)?;
    let d = cfg.dim();
    let theta = cfg.phases(eps);
    Ok(DVector::from_fn(2 * d, |i, _| {
        if i < d {
            cis(theta[i])
        } else {
            cis(-theta[i - d])
        }
    }))
}

/// `exp(i [K, −K]ᵀ ε) ⊙ u`, so that `ψ(x₀ + ε; u) = ψ(x₀; phase_shift(u, ε))`.
pub fn phase_shift(
    u: &TransducerVector,
    eps: &DVector<f64>,
    cfg: &WaveConfig,
) -> Result<TransducerVector> {
    cfg.check_amplitudes(u)?;
    let phases = shift_phases(eps, cfg)?;
    Ok(TransducerVector::new(u.as_vector().component_mul(&phases)))
}

/// Move the value `ψ(0; u)` to position `x₀`: `ψ(x₀; retarget(u, x₀)) = ψ(0; u)`.
pub fn retarget(
    u: &TransducerVector,
    x0: &DVector<f64>,
    cfg: &WaveConfig,
) -> Result<TransducerVector> {
    phase_shift(u, &(-x0), cfg)
}
