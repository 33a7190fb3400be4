//! Physical coefficients, wavevector/lattice geometry and the complex
//! pressure field of a superposition of `d` standing plane waves.
//!
//! The field is
//!
//! ```text
//! p(x; u) = Σ_j α_j exp(i k_j·x) + β_j exp(−i k_j·x),   u = [α; β]
//! ```
//!
//! with wavevectors `k_j` the columns of `K`. The lattice matrix
//! `A = 2π K^{-T}` makes `p` periodic: `p(x + A n) = p(x)` for integer `n`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `|k_1| = … = |k_d|`.
pub const WAVENUMBER_TOL: f64 = 1e-9;

/// Fluid properties (SI).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// κ₀ in Pa⁻¹
    pub compressibility: f64,
    /// ρ₀ in kg·m⁻³
    pub density: f64,
    /// Overrides the derived sound speed `1/√(κ₀ρ₀)` when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sound_speed: Option<f64>,
}

impl MediumParams {
    pub fn new(compressibility: f64, density: f64) -> Self {
        Self {
            compressibility,
            density,
            sound_speed: None,
        }
    }

    /// Speed of sound in m/s.
    pub fn sound_speed(&self) -> f64 {
        self.sound_speed
            .unwrap_or_else(|| 1.0 / (self.compressibility * self.density).sqrt())
    }

    fn validate(&self) -> Result<()> {
        if self.compressibility.is_nan() || self.compressibility <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "medium compressibility must be positive, got {}",
                self.compressibility
            )));
        }
        if self.density.is_nan() || self.density <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "medium density must be positive, got {}",
                self.density
            )));
        }
        if let Some(c) = self.sound_speed {
            if c.is_nan() || c <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "sound speed must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// Particle properties (SI).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleParams {
    /// κ_p in Pa⁻¹
    pub compressibility: f64,
    /// ρ_p in kg·m⁻³
    pub density: f64,
}

impl ParticleParams {
    fn validate(&self) -> Result<()> {
        if self.compressibility.is_nan() || self.compressibility < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "particle compressibility must be non-negative, got {}",
                self.compressibility
            )));
        }
        if self.density.is_nan() || self.density <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "particle density must be positive, got {}",
                self.density
            )));
        }
        Ok(())
    }
}

/// Intermediate quantities of the physical derivation path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCoefficients {
    pub f1: f64,
    pub f2: f64,
    /// Angular frequency ω = 2πf.
    pub omega: f64,
    pub frequency: f64,
    pub sound_speed: f64,
}

/// Coefficients of the radiation potential `ψ = a|p|² − b|∇p|²`.
///
/// No sign constraint is placed on `a` or `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub wavenumber: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalCoefficients>,
}

impl Coefficients {
    /// Unitless coefficients supplied directly.
    pub fn direct(a: f64, b: f64, wavenumber: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coefficients must be finite, got a={a}, b={b}"
            )));
        }
        if !wavenumber.is_finite() || wavenumber <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "wavenumber must be positive, got {wavenumber}"
            )));
        }
        Ok(Self {
            a,
            b,
            wavenumber,
            physical: None,
        })
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wavenumber
    }
}

/// Derive `f1, f2, a, b, ω, k, ℓ` from fluid, particle and driving frequency.
pub fn derive_coefficients(
    medium: &MediumParams,
    particle: &ParticleParams,
    frequency: f64,
) -> Result<Coefficients> {
    medium.validate()?;
    particle.validate()?;
    if !frequency.is_finite() || frequency <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "frequency must be positive, got {frequency}"
        )));
    }

    let f1 = 1.0 - particle.compressibility / medium.compressibility;
    let f2 = 2.0 * (particle.density - medium.density) / (2.0 * particle.density + medium.density);
    let omega = 2.0 * PI * frequency;
    let c = medium.sound_speed();

    Ok(Coefficients {
        a: f1 * medium.compressibility / 4.0,
        b: f2 * 3.0 / (8.0 * medium.density * omega * omega),
        wavenumber: omega / c,
        physical: Some(PhysicalCoefficients {
            f1,
            f2,
            omega,
            frequency,
            sound_speed: c,
        }),
    })
}

/// Wavevector matrix `K` (columns `k_j`) and its dual lattice `A = 2πK^{-T}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveConfig {
    k: DMatrix<f64>,
    a: DMatrix<f64>,
}

impl WaveConfig {
    /// Build from a square `K` whose columns are the wavevectors.
    pub fn from_k(k: DMatrix<f64>) -> Result<Self> {
        let d = k.nrows();
        if k.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: k.ncols(),
            });
        }
        if !(d == 2 || d == 3) {
            return Err(Error::UnsupportedDimension(d));
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("K has non-finite entries".into()));
        }

        let norms: Vec<f64> = k.column_iter().map(|c| c.norm()).collect();
        let scale: f64 = norms.iter().product();
        let det = k.determinant();
        if scale == 0.0 || det.abs() <= 1e-12 * scale {
            return Err(Error::DegenerateBasis { det });
        }
        let kmax = norms.iter().cloned().fold(0.0, f64::max);
        let kmin = norms.iter().cloned().fold(f64::INFINITY, f64::min);
        if kmax - kmin > WAVENUMBER_TOL * kmax {
            return Err(Error::UnequalWavenumber { norms });
        }

        // Kᵀ A = 2π I
        let rhs = DMatrix::<f64>::identity(d, d) * (2.0 * PI);
        let a = k
            .transpose()
            .lu()
            .solve(&rhs)
            .ok_or(Error::DegenerateBasis { det })?;
        Ok(Self { k, a })
    }

    /// Build from row-major rows of `K`.
    pub fn from_k_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: bad.len(),
            });
        }
        Self::from_k(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    /// `K`, columns are the wavevectors.
    pub fn k_matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    /// `A`, columns are the lattice vectors.
    pub fn lattice(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn wavevector(&self, j: usize) -> DVector<f64> {
        self.k.column(j).into_owned()
    }

    pub fn lattice_vector(&self, j: usize) -> DVector<f64> {
        self.a.column(j).into_owned()
    }

    /// Common length of the wavevectors.
    pub fn wavenumber(&self) -> f64 {
        self.k.column_iter().map(|c| c.norm()).sum::<f64>() / self.dim() as f64
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wavenumber()
    }

    /// Phases `Kᵀx`, one per wave direction.
    pub fn phases(&self, x: &DVector<f64>) -> DVector<f64> {
        self.k.tr_mul(x)
    }

    /// Cartesian position of atomic coordinates: `x = Aα`.
    pub fn to_cartesian(&self, alpha: &DVector<f64>) -> DVector<f64> {
        &self.a * alpha
    }

    /// Atomic coordinates of `x`: `α = A⁻¹x = Kᵀx / 2π`.
    pub fn to_atomic(&self, x: &DVector<f64>) -> DVector<f64> {
        self.phases(x) / (2.0 * PI)
    }

    /// `K^{-T}`, maps phase vectors `θ` to positions with `Kᵀx = θ`.
    pub fn k_inv_t(&self) -> DMatrix<f64> {
        &self.a / (2.0 * PI)
    }

    pub(crate) fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_amplitudes(&self, u: &TransducerVector) -> Result<()> {
        if u.len() != 2 * self.dim() {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.dim(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

/// Complex amplitudes `u = [α_1 … α_d, β_1 … β_d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransducerVector(DVector<Complex64>);

impl TransducerVector {
    pub fn new(values: DVector<Complex64>) -> Self {
        Self(values)
    }

    pub fn from_complex(values: &[Complex64]) -> Self {
        Self(DVector::from_column_slice(values))
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| Complex64::new(v, 0.0)),
        ))
    }

    pub fn zeros(d: usize) -> Self {
        Self(DVector::zeros(2 * d))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of wave directions `d`.
    pub fn dim(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<Complex64> {
        self.0
    }

    pub fn alpha(&self, j: usize) -> Complex64 {
        self.0[j]
    }

    pub fn beta(&self, j: usize) -> Complex64 {
        self.0[self.dim() + j]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self(&self.0 / Complex64::new(n, 0.0)))
    }
}

/// `e^{iθ}`
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Pressure and its gradient at `x`, sharing the exponentials.
pub fn pressure_and_gradient(
    x: &DVector<f64>,
    u: &TransducerVector,
    cfg: &WaveConfig,
) -> Result<(Complex64, DVector<Complex64>)> {
    cfg.check_point(x)?;
    cfg.check_amplitudes(u)?;
    Ok(field_unchecked(x, u, cfg))
}

pub(crate) fn field_unchecked(
    x: &DVector<f64>,
    u: &TransducerVector,
    cfg: &WaveConfig,
) -> (Complex64, DVector<Complex64>) {
    let d = cfg.dim();
    let theta = cfg.phases(x);
    let mut p = Complex64::new(0.0, 0.0);
    let mut grad = DVector::<Complex64>::zeros(d);
    for j in 0..d {
        let e = cis(theta[j]);
        let fwd = u.alpha(j) * e;
        let bwd = u.beta(j) * e.conj();
        p += fwd + bwd;
        // i k_j (α e^{iθ} − β e^{−iθ})
        let coef = Complex64::i() * (fwd - bwd);
        for m in 0..d {
            grad[m] += coef * cfg.k[(m, j)];
        }
    }
    (p, grad)
}

/// `p(x; u)`.
pub fn pressure(x: &DVector<f64>, u: &TransducerVector, cfg: &WaveConfig) -> Result<Complex64> {
    pressure_and_gradient(x, u, cfg).map(|(p, _)| p)
}

/// `∇p(x; u)`, by term-by-term differentiation.
pub fn pressure_gradient(
    x: &DVector<f64>,
    u: &TransducerVector,
    cfg: &WaveConfig,
) -> Result<DVector<Complex64>> {
    pressure_and_gradient(x, u, cfg).map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_k(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
        loop {
            let mut k = DMatrix::<f64>::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
            for mut c in k.column_iter_mut() {
                let n = c.norm();
                c /= n;
            }
            if k.determinant().abs() > 0.2 {
                return k;
            }
        }
    }

    fn random_u(rng: &mut ChaCha8Rng, d: usize) -> TransducerVector {
        let v: Vec<Complex64> = (0..2 * d)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        TransducerVector::from_complex(&v)
    }

    #[test]
    fn matched_particle_gives_zero_coefficients() {
        let medium = MediumParams::new(4.5e-10, 1000.0);
        let particle = ParticleParams {
            compressibility: 4.5e-10,
            density: 1000.0,
        };
        let c = derive_coefficients(&medium, &particle, 1e6).unwrap();
        let phys = c.physical.unwrap();
        assert_eq!(phys.f1, 0.0);
        assert_eq!(phys.f2, 0.0);
        assert_eq!(c.a, 0.0);
        assert_eq!(c.b, 0.0);
    }

    #[test]
    fn incompressible_particle() {
        let medium = MediumParams::new(4.5e-10, 1000.0);
        let particle = ParticleParams {
            compressibility: 0.0,
            density: 1050.0,
        };
        let c = derive_coefficients(&medium, &particle, 1e6).unwrap();
        assert_eq!(c.physical.unwrap().f1, 1.0);
        assert!((c.a - 4.5e-10 / 4.0).abs() < 1e-25);
    }

    #[test]
    fn heavy_particle_density_factor_tends_to_one() {
        let medium = MediumParams::new(4.5e-10, 1000.0);
        let mut prev = -2.0;
        for scale in [1.0, 10.0, 1e3, 1e6] {
            let particle = ParticleParams {
                compressibility: 1e-10,
                density: 1000.0 * scale,
            };
            let f2 = derive_coefficients(&medium, &particle, 1e6)
                .unwrap()
                .physical
                .unwrap()
                .f2;
            assert!(f2 > prev);
            prev = f2;
        }
        assert!(prev > 0.9999 && prev < 1.0);
    }

    #[test]
    fn wavenumber_and_wavelength_from_frequency() {
        let medium = MediumParams {
            compressibility: 4.5e-10,
            density: 1000.0,
            sound_speed: Some(1500.0),
        };
        let particle = ParticleParams {
            compressibility: 1e-10,
            density: 1050.0,
        };
        let c = derive_coefficients(&medium, &particle, 1.5e6).unwrap();
        assert!((c.wavelength() - 1e-3).abs() < 1e-15);
        assert!((c.wavenumber - 2.0 * PI * 1.5e6 / 1500.0).abs() < 1e-6);
        let phys = c.physical.unwrap();
        assert!((c.b - phys.f2 * 3.0 / (8.0 * 1000.0 * phys.omega.powi(2))).abs() < 1e-30);
    }

    #[test]
    fn bad_physical_parameters_rejected() {
        let medium = MediumParams::new(4.5e-10, 1000.0);
        let particle = ParticleParams {
            compressibility: 1e-10,
            density: 1050.0,
        };
        assert!(derive_coefficients(&medium, &particle, 0.0).is_err());
        assert!(derive_coefficients(&medium, &particle, -1.0).is_err());
        assert!(derive_coefficients(&MediumParams::new(4.5e-10, 0.0), &particle, 1e6).is_err());
        let bad = ParticleParams {
            compressibility: 1e-10,
            density: -1.0,
        };
        assert!(derive_coefficients(&medium, &bad, 1e6).is_err());
    }

    #[test]
    fn identity_k_gives_2pi_lattice() {
        let cfg = WaveConfig::from_k(DMatrix::identity(2, 2)).unwrap();
        assert!((cfg.lattice() - DMatrix::identity(2, 2) * (2.0 * PI)).amax() < 1e-15);
        assert!((cfg.wavelength() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn rotated_k_gives_rotated_lattice() {
        for t in [0.1f64, 0.7, 2.3] {
            let r = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
            let cfg = WaveConfig::from_k(r.clone()).unwrap();
            assert!((cfg.lattice() - r * (2.0 * PI)).amax() < 1e-12);
        }
    }

    #[test]
    fn duality_holds_for_random_3d() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let cfg = WaveConfig::from_k(random_k(&mut rng, 3)).unwrap();
            let prod = cfg.k_matrix().transpose() * cfg.lattice();
            assert!((prod - DMatrix::identity(3, 3) * (2.0 * PI)).amax() < 1e-12);
        }
    }

    #[test]
    fn invalid_k_rejected() {
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            WaveConfig::from_k(singular),
            Err(Error::DegenerateBasis { .. })
        ));
        let unequal = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert!(matches!(
            WaveConfig::from_k(unequal),
            Err(Error::UnequalWavenumber { .. })
        ));
        assert!(matches!(
            WaveConfig::from_k(DMatrix::identity(4, 4)),
            Err(Error::UnsupportedDimension(4))
        ));
        assert!(WaveConfig::from_k(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn pressure_at_origin_sums_amplitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = WaveConfig::from_k(random_k(&mut rng, 3)).unwrap();
        let u = random_u(&mut rng, 3);
        let p = pressure(&DVector::zeros(3), &u, &cfg).unwrap();
        let expected: Complex64 = u.as_vector().iter().sum();
        assert!((p - expected).norm() < 1e-15);
    }

    #[test]
    fn single_plane_wave() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cfg = WaveConfig::from_k(random_k(&mut rng, 2) * 3.0).unwrap();
        let u = TransducerVector::from_real(&[1.0, 0.0, 0.0, 0.0]);
        for _ in 0..20 {
            let x = DVector::from_fn(2, |_, _| rng.gen_range(-5.0..5.0));
            let (p, g) = pressure_and_gradient(&x, &u, &cfg).unwrap();
            let e = cis(cfg.wavevector(0).dot(&x));
            assert!((p - e).norm() < 1e-14);
            assert!((p.norm() - 1.0).abs() < 1e-14);
            assert!((g.norm() - cfg.wavenumber()).abs() < 1e-12);
            for m in 0..2 {
                let want = Complex64::i() * cfg.k_matrix()[(m, 0)] * e;
                assert!((g[m] - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn cosine_standing_wave_is_stationary_at_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = WaveConfig::from_k(random_k(&mut rng, 3)).unwrap();
        let half: Vec<Complex64> = (0..3)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let full: Vec<Complex64> = half.iter().chain(half.iter()).cloned().collect();
        let g = pressure_gradient(&DVector::zeros(3), &TransducerVector::from_complex(&full), &cfg)
            .unwrap();
        assert!(g.norm() < 1e-15);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in [2, 3] {
            for _ in 0..50 {
                let cfg = WaveConfig::from_k(random_k(&mut rng, d) * rng.gen_range(0.5..4.0)).unwrap();
                let u = random_u(&mut rng, d);
                let x = DVector::from_fn(d, |_, _| rng.gen_range(-10.0..10.0));
                let h = 1e-6 * cfg.wavelength();
                let g = pressure_gradient(&x, &u, &cfg).unwrap();
                let mut fd = DVector::<Complex64>::zeros(d);
                for m in 0..d {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[m] += h;
                    xm[m] -= h;
                    fd[m] = (pressure(&xp, &u, &cfg).unwrap() - pressure(&xm, &u, &cfg).unwrap())
                        / (2.0 * h);
                }
                let err = (&g - &fd).norm() / g.norm().max(1e-300);
                assert!(err < 1e-6, "relative FD error {err}");
            }
        }
    }

    #[test]
    fn periodic_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [2, 3] {
            let cfg = WaveConfig::from_k(random_k(&mut rng, d)).unwrap();
            for _ in 0..50 {
                let u = random_u(&mut rng, d);
                let x = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
                let n = DVector::from_fn(d, |_, _| rng.gen_range(-2..=2) as f64);
                let shifted = &x + cfg.lattice() * n;
                let (p0, g0) = pressure_and_gradient(&x, &u, &cfg).unwrap();
                let (p1, g1) = pressure_and_gradient(&shifted, &u, &cfg).unwrap();
                assert!((p0 - p1).norm() < 1e-12);
                assert!((g0 - g1).norm() < 1e-12);

                let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let pc = pressure(&x, &u.scale(c), &cfg).unwrap();
                assert!((pc - c * p0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dimension_mismatch_reported() {
        let cfg = WaveConfig::from_k(DMatrix::identity(2, 2)).unwrap();
        let u = TransducerVector::zeros(3);
        assert!(matches!(
            pressure(&DVector::zeros(2), &u, &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        let u = TransducerVector::zeros(2);
        assert!(pressure(&DVector::zeros(3), &u, &cfg).is_err());
    }
}
