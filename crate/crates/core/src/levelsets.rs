//! Level sets of the radiation potential at eigenvalue levels of `Q(0)`.
//!
//! For a real unit eigenpair `(λ, u)` of `Q(0)` with `u = [v; ±v]`, the set
//! `L = {x : ψ(x; u) = λ}` is decided by which sign flips of `v` keep the
//! flipped vector inside the λ-eigenspace:
//!
//! - some `v_j = 0`: `L` contains `span{a_j : v_j = 0}`
//! - no zeros and the eigenspace inside `H₊` or `H₋`: `L` is the union of
//!   lattices `A(n + s/2)` over the flips `s ∈ T`, and nothing else
//! - eigenspace straddling `H₊` and `H₋`: `L` contains the lines
//!   `K^{-T}(θ(−1)^s + 2πn)` for `s ∈ T±` and the sets
//!   `K^{-T}(θ(−1)^s + φ(−1)^r + 2πn)` for `(s, r) ∈ R±`
//!
//! Only the point-lattice case is exhaustive; the others are lower bounds on
//! the level set.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{eigenspace_contains, HLabel, SpectralDecomposition};
use crate::wavefield::{TransducerVector, WaveConfig};

/// Default tolerance for canonical form, zero entries and membership.
pub const LEVELSET_TOL: f64 = 1e-9;

/// `s ∈ {0,1}^d`; `(−1)^s` is its sign pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignVector(Vec<u8>);

impl SignVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter(format!(
                "sign vector entries must be 0 or 1, got {bits:?}"
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn ones(d: usize) -> Self {
        Self(vec![1; d])
    }

    /// All `2^d` vectors, first entry varying fastest.
    pub fn all(d: usize) -> Vec<Self> {
        (0..1u32 << d)
            .map(|m| Self((0..d).map(|j| ((m >> j) & 1) as u8).collect()))
            .collect()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(−1)^s`.
    pub fn signs(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.0.len(),
            self.0.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }),
        )
    }

    /// `s + r mod 2`, so that `(−1)^{s+r} = (−1)^{s ⊕ r}`.
    pub fn xor(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    /// `(−1)^s ∈ {𝟙, −𝟙}`.
    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// `s / 2` as atomic coordinates.
    pub fn half_offset(&self) -> Vec<f64> {
        self.0.iter().map(|&b| b as f64 * 0.5).collect()
    }
}

/// Which half of `u = [v; ±v]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn label(self) -> HLabel {
        match self {
            Sign::Plus => HLabel::Plus,
            Sign::Minus => HLabel::Minus,
        }
    }
}

/// Real `u = [v; sign·v]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalVector {
    pub v: Vec<f64>,
    pub sign: Sign,
}

impl CanonicalVector {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Indices `j` with `v_j = 0` (to `tol`).
    pub fn zero_indices(&self, tol: f64) -> Vec<usize> {
        (0..self.v.len()).filter(|&j| self.v[j].abs() <= tol).collect()
    }

    /// `[(−1)^s ⊙ v; sign·(−1)^s ⊙ v]`.
    pub fn flipped(&self, s: &SignVector, sign: Sign) -> DVector<Complex64> {
        let d = self.v.len();
        let f = s.signs();
        DVector::from_fn(2 * d, |i, _| {
            let j = i % d;
            let top = f[j] * self.v[j];
            let val = if i < d { top } else { sign.value() * top };
            Complex64::new(val, 0.0)
        })
    }
}

/// Write a real `u` as `[v; ±v]`, or `None` when it is complex or not of that form.
pub fn canonical_form(u: &TransducerVector, tol: f64) -> Result<Option<CanonicalVector>> {
    let n = u.norm();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    if u.as_vector().iter().any(|z| z.im.abs() > tol * n) {
        return Ok(None);
    }
    let d = u.dim();
    let alpha: Vec<f64> = (0..d).map(|j| u.alpha(j).re).collect();
    let beta: Vec<f64> = (0..d).map(|j| u.beta(j).re).collect();
    let diff = alpha.iter().zip(&beta).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let sum = alpha.iter().zip(&beta).map(|(a, b)| (a + b).powi(2)).sum::<f64>().sqrt();
    if diff <= tol * n {
        Ok(Some(CanonicalVector {
            v: alpha.iter().zip(&beta).map(|(a, b)| 0.5 * (a + b)).collect(),
            sign: Sign::Plus,
        }))
    } else if sum <= tol * n {
        Ok(Some(CanonicalVector {
            v: alpha.iter().zip(&beta).map(|(a, b)| 0.5 * (a - b)).collect(),
            sign: Sign::Minus,
        }))
    } else {
        Ok(None)
    }
}

fn contains(dec: &SpectralDecomposition, g: usize, w: &DVector<Complex64>, tol: f64) -> bool {
    // flipped vectors of a nonzero v are never zero
    eigenspace_contains(dec, g, w, tol).unwrap_or(false)
}

fn check_dims(dec: &SpectralDecomposition, g: usize, cv: &CanonicalVector) -> Result<()> {
    if dec.len() != 2 * cv.dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.len(),
            got: 2 * cv.dim(),
        });
    }
    if g >= dec.groups().len() {
        return Err(Error::InvalidParameter(format!("no eigenspace with index {g}")));
    }
    if cv.v.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `T = {s : [(−1)^s ⊙ v; ±(−1)^s ⊙ v] ∈ λ-eigenspace}`.
///
/// Requires every `v_j ≠ 0` and the eigenspace to lie on the same side
/// (`H₊` or `H₋`) as `u`.
pub fn t_set(
    dec: &SpectralDecomposition,
    g: usize,
    cv: &CanonicalVector,
    tol: f64,
) -> Result<Vec<SignVector>> {
    check_dims(dec, g, cv)?;
    if !cv.zero_indices(tol).is_empty() {
        return Err(Error::Precondition("v has zero entries".into()));
    }
    if dec.group_side(g) != Some(cv.sign.label()) {
        return Err(Error::Precondition(format!(
            "eigenspace is not contained in H{}",
            if cv.sign == Sign::Plus { "+" } else { "-" }
        )));
    }
    Ok(SignVector::all(cv.dim())
        .into_iter()
        .filter(|s| contains(dec, g, &cv.flipped(s, cv.sign), tol))
        .collect())
}

/// `T± = {s : [(−1)^s ⊙ v; ∓(−1)^s ⊙ v] ∈ λ-eigenspace}`.
pub fn t_pm_set(
    dec: &SpectralDecomposition,
    g: usize,
    cv: &CanonicalVector,
    tol: f64,
) -> Result<Vec<SignVector>> {
    check_dims(dec, g, cv)?;
    let other = cv.sign.flip();
    Ok(SignVector::all(cv.dim())
        .into_iter()
        .filter(|s| contains(dec, g, &cv.flipped(s, other), tol))
        .collect())
}

/// One member of `R±`, with the plane/line annotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignPair {
    pub s: SignVector,
    pub r: SignVector,
    /// `(−1)^s` and `(−1)^r` independent, i.e. `(−1)^{s+r} ∉ {𝟙, −𝟙}`.
    pub plane: bool,
}

/// `R± = {(s, r)}` such that the three vectors
/// `[(−1)^s v; ∓(−1)^s v]`, `[(−1)^r v; ∓(−1)^r v]`, `[(−1)^{s+r} v; ±(−1)^{s+r} v]`
/// all lie in the λ-eigenspace.
pub fn r_set(
    dec: &SpectralDecomposition,
    g: usize,
    cv: &CanonicalVector,
    tol: f64,
) -> Result<Vec<SignPair>> {
    check_dims(dec, g, cv)?;
    let other = cv.sign.flip();
    let all = SignVector::all(cv.dim());
    let single: Vec<bool> = all
        .iter()
        .map(|s| contains(dec, g, &cv.flipped(s, other), tol))
        .collect();
    let mut pairs = Vec::new();
    for (i, s) in all.iter().enumerate() {
        if !single[i] {
            continue;
        }
        for (j, r) in all.iter().enumerate() {
            if !single[j] {
                continue;
            }
            let sr = s.xor(r);
            if contains(dec, g, &cv.flipped(&sr, cv.sign), tol) {
                pairs.push(SignPair {
                    s: s.clone(),
                    r: r.clone(),
                    plane: !sr.is_uniform(),
                });
            }
        }
    }
    Ok(pairs)
}

/// Predicted parts of a level set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimaPrediction {
    /// `∪_{s ∈ T} {A(n + s/2)}`, exhaustive.
    PointLatticeSet {
        level: f64,
        /// Lattice vectors `a_j`.
        lattice: Vec<Vec<f64>>,
        signs: Vec<SignVector>,
        /// `s/2` in atomic coordinates.
        offsets: Vec<Vec<f64>>,
    },
    /// Lines `K^{-T}(θ(−1)^s + 2πn)`, `s ∈ T±`.
    LineFamilySet {
        level: f64,
        /// Wavevectors `k_j`.
        wavevectors: Vec<Vec<f64>>,
        signs: Vec<SignVector>,
        /// `(−1)^s`.
        directions: Vec<Vec<f64>>,
    },
    /// Sets `K^{-T}(θ(−1)^s + φ(−1)^r + 2πn)`, `(s, r) ∈ R±`.
    PlaneFamilySet {
        level: f64,
        wavevectors: Vec<Vec<f64>>,
        pairs: Vec<SignPair>,
    },
    /// `span{a_j : v_j = 0}`.
    SubspaceSet {
        level: f64,
        zero_indices: Vec<usize>,
        generators: Vec<Vec<f64>>,
    },
}

impl MinimaPrediction {
    pub fn level(&self) -> f64 {
        match self {
            MinimaPrediction::PointLatticeSet { level, .. }
            | MinimaPrediction::LineFamilySet { level, .. }
            | MinimaPrediction::PlaneFamilySet { level, .. }
            | MinimaPrediction::SubspaceSet { level, .. } => *level,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MinimaPrediction::PointLatticeSet { .. } => "point_lattice_set",
            MinimaPrediction::LineFamilySet { .. } => "line_family_set",
            MinimaPrediction::PlaneFamilySet { .. } => "plane_family_set",
            MinimaPrediction::SubspaceSet { .. } => "subspace_set",
        }
    }

    /// Number of generating members (offsets, line directions, sign pairs, spans).
    pub fn members(&self) -> usize {
        match self {
            MinimaPrediction::PointLatticeSet { signs, .. } => signs.len(),
            MinimaPrediction::LineFamilySet { signs, .. } => signs.len(),
            MinimaPrediction::PlaneFamilySet { pairs, .. } => pairs.len(),
            MinimaPrediction::SubspaceSet { .. } => 1,
        }
    }

    /// Deterministic sample of `per_member` points from each member set.
    pub fn sample_points(&self, cfg: &WaveConfig, per_member: usize) -> Vec<DVector<f64>> {
        let d = cfg.dim();
        let mut out = Vec::new();
        match self {
            MinimaPrediction::PointLatticeSet { offsets, .. } => {
                for o in offsets {
                    let o = DVector::from_column_slice(o);
                    for i in 0..per_member {
                        out.push(cfg.to_cartesian(&(&o + cycle_shift(i, d))));
                    }
                }
            }
            MinimaPrediction::LineFamilySet { signs, .. } => {
                for s in signs {
                    for i in 0..per_member {
                        let theta = sweep(i, per_member);
                        out.push(line_point(cfg, s, theta, &cycle_shift(i, d)));
                    }
                }
            }
            MinimaPrediction::PlaneFamilySet { pairs, .. } => {
                for p in pairs {
                    for i in 0..per_member {
                        let (t1, t2) = r2(i);
                        out.push(plane_point(
                            cfg,
                            &p.s,
                            &p.r,
                            2.0 * PI * t1,
                            2.0 * PI * t2,
                            &cycle_shift(i, d),
                        ));
                    }
                }
            }
            MinimaPrediction::SubspaceSet { zero_indices, .. } => {
                for i in 0..per_member {
                    let coords = low_discrepancy(i, zero_indices.len());
                    let mut x = DVector::zeros(d);
                    for (c, &j) in coords.iter().zip(zero_indices) {
                        x += cfg.lattice_vector(j) * (4.0 * c - 2.0);
                    }
                    out.push(x);
                }
            }
        }
        out
    }
}

/// `A(n + s/2)`.
pub fn lattice_point(cfg: &WaveConfig, s: &SignVector, n: &DVector<f64>) -> DVector<f64> {
    let offset = DVector::from_vec(s.half_offset());
    cfg.to_cartesian(&(n + offset))
}

/// `K^{-T}(θ(−1)^s + 2πn)`.
pub fn line_point(cfg: &WaveConfig, s: &SignVector, theta: f64, n: &DVector<f64>) -> DVector<f64> {
    cfg.k_inv_t() * (s.signs() * theta + n * (2.0 * PI))
}

/// `K^{-T}(θ(−1)^s + φ(−1)^r + 2πn)`.
pub fn plane_point(
    cfg: &WaveConfig,
    s: &SignVector,
    r: &SignVector,
    theta: f64,
    phi: f64,
    n: &DVector<f64>,
) -> DVector<f64> {
    cfg.k_inv_t() * (s.signs() * theta + r.signs() * phi + n * (2.0 * PI))
}

/// `θ_i` spread over `[−2π, 2π)`, avoiding the lattice-aligned values.
fn sweep(i: usize, count: usize) -> f64 {
    -2.0 * PI + 4.0 * PI * (i as f64 + 0.5) / count.max(1) as f64
}

/// Integer shift in `{−1, 0, 1}^d` cycling with `i`.
fn cycle_shift(i: usize, d: usize) -> DVector<f64> {
    let mut m = i;
    DVector::from_fn(d, |_, _| {
        let v = (m % 3) as f64 - 1.0;
        m /= 3;
        v
    })
}

/// Additive recurrence in `[0,1)^2` based on the plastic number.
fn r2(i: usize) -> (f64, f64) {
    const G: f64 = 1.324_717_957_244_746;
    let n = i as f64 + 1.0;
    ((0.5 + n / G).fract(), (0.5 + n / (G * G)).fract())
}

fn low_discrepancy(i: usize, dims: usize) -> Vec<f64> {
    match dims {
        0 => vec![],
        1 => vec![(0.5 + (i as f64 + 1.0) * 0.618_033_988_749_894_9).fract()],
        _ => {
            let (a, b) = r2(i);
            let mut v = vec![a, b];
            v.resize(dims, (0.5 + (i as f64 + 1.0) * 0.754_877_666_246_692_7).fract());
            v
        }
    }
}

/// `span{a_j : v_j = 0}` at level `level`, if `v` has zero entries.
pub fn zero_entry_subspace(
    cv: &CanonicalVector,
    cfg: &WaveConfig,
    level: f64,
    tol: f64,
) -> Option<MinimaPrediction> {
    let zeros = cv.zero_indices(tol);
    if zeros.is_empty() {
        return None;
    }
    Some(MinimaPrediction::SubspaceSet {
        level,
        generators: zeros
            .iter()
            .map(|&j| cfg.lattice_vector(j).iter().copied().collect())
            .collect(),
        zero_indices: zeros,
    })
}

/// Which case of the classification applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `u` is complex or not of the form `[v; ±v]`.
    NotCanonical,
    /// `v` has zeros, eigenspace inside `H₊` or `H₋`.
    ZeroEntries,
    /// No zeros, eigenspace inside `H₊` or `H₋`.
    IsolatedPoints,
    /// No zeros, eigenspace straddles `H₊` and `H₋`.
    Straddling,
    /// `v` has zeros and the eigenspace straddles.
    ZeroEntriesStraddling,
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub level: f64,
    pub branch: Branch,
    pub canonical: Option<CanonicalVector>,
    pub predictions: Vec<MinimaPrediction>,
    /// Whether the predictions describe the whole level set.
    pub exhaustive: bool,
    pub notes: Vec<String>,
}

/// Classify `L_{λ,u}` for a unit eigenvector `u` of eigenspace `g`.
pub fn classify(
    dec: &SpectralDecomposition,
    g: usize,
    u: &TransducerVector,
    cfg: &WaveConfig,
    tol: f64,
) -> Result<Classification> {
    if u.len() != dec.len() || u.dim() != cfg.dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.len(),
            got: u.len(),
        });
    }
    if g >= dec.groups().len() {
        return Err(Error::InvalidParameter(format!("no eigenspace with index {g}")));
    }
    if (u.norm() - 1.0).abs() > tol {
        return Err(Error::Precondition(format!(
            "amplitudes must have unit norm, got {}",
            u.norm()
        )));
    }
    if !eigenspace_contains(dec, g, u.as_vector(), tol)? {
        return Err(Error::Precondition(format!(
            "amplitudes are not in the eigenspace of {}",
            dec.group(g).value
        )));
    }

    let level = dec.group(g).value;
    let Some(cv) = canonical_form(u, tol)? else {
        return Ok(Classification {
            level,
            branch: Branch::NotCanonical,
            canonical: None,
            predictions: vec![],
            exhaustive: false,
            notes: vec!["NotCanonical: classification unsupported for complex or mixed amplitudes".into()],
        });
    };

    let has_zero = !cv.zero_indices(tol).is_empty();
    let side = dec.group_side(g);
    let wavevectors = columns(cfg.k_matrix());
    let mut predictions = Vec::new();
    let mut notes = Vec::new();

    let branch = match (has_zero, side) {
        (true, Some(_)) => {
            predictions.extend(zero_entry_subspace(&cv, cfg, level, tol));
            Branch::ZeroEntries
        }
        (false, Some(_)) => {
            let signs = t_set(dec, g, &cv, tol)?;
            predictions.push(MinimaPrediction::PointLatticeSet {
                level,
                lattice: columns(cfg.lattice()),
                offsets: signs.iter().map(|s| s.half_offset()).collect(),
                signs,
            });
            Branch::IsolatedPoints
        }
        (zero, None) => {
            if zero {
                predictions.extend(zero_entry_subspace(&cv, cfg, level, tol));
            }
            let signs = t_pm_set(dec, g, &cv, tol)?;
            if !signs.is_empty() {
                predictions.push(MinimaPrediction::LineFamilySet {
                    level,
                    wavevectors: wavevectors.clone(),
                    directions: signs.iter().map(|s| s.signs().iter().copied().collect()).collect(),
                    signs,
                });
            }
            let pairs = r_set(dec, g, &cv, tol)?;
            if !pairs.is_empty() {
                predictions.push(MinimaPrediction::PlaneFamilySet {
                    level,
                    wavevectors,
                    pairs,
                });
            }
            if predictions.len() > 1 {
                notes.push(format!(
                    "{} prediction families emitted for one eigenpair",
                    predictions.len()
                ));
            }
            if zero {
                Branch::ZeroEntriesStraddling
            } else {
                Branch::Straddling
            }
        }
    };
    let exhaustive = branch == Branch::IsolatedPoints;
    if !exhaustive {
        notes.push("predicted sets are contained in the level set; other points may exist".into());
    }

    Ok(Classification {
        level,
        branch,
        canonical: Some(cv),
        predictions,
        exhaustive,
        notes,
    })
}

fn columns(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.column_iter().map(|c| c.iter().copied().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::psi_direct;
    use crate::spectral::{min_eigenvector, q0_decomposition};
    use crate::wavefield::Coefficients;
    use std::collections::BTreeSet;

    fn setup(d: usize, a: f64, b: f64) -> (Coefficients, WaveConfig, SpectralDecomposition) {
        let coef = Coefficients::direct(a, b, 1.0).unwrap();
        let cfg = WaveConfig::from_k(DMatrix::identity(d, d)).unwrap();
        let dec = q0_decomposition(&coef, &cfg).unwrap();
        (coef, cfg, dec)
    }

    fn sv(bits: &[u8]) -> SignVector {
        SignVector::new(bits.to_vec()).unwrap()
    }

    fn set_of(v: Vec<SignVector>) -> BTreeSet<SignVector> {
        v.into_iter().collect()
    }

    fn level_error(
        pred: &MinimaPrediction,
        u: &TransducerVector,
        coef: &Coefficients,
        cfg: &WaveConfig,
        per: usize,
    ) -> f64 {
        pred.sample_points(cfg, per)
            .iter()
            .map(|x| (psi_direct(x, u, coef, cfg).unwrap() - pred.level()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn canonical_forms() {
        let u = TransducerVector::from_real(&[0.5, 0.5, -0.5, -0.5]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        assert_eq!(cv.v, vec![0.5, 0.5]);
        assert_eq!(cv.sign, Sign::Minus);

        let u = TransducerVector::from_real(&[-0.5, 0.5, -0.5, 0.5]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        assert_eq!(cv.v, vec![-0.5, 0.5]);
        assert_eq!(cv.sign, Sign::Plus);

        let h = Complex64::new(0.5, 0.0);
        let ih = Complex64::new(0.0, 0.5);
        let u = TransducerVector::from_complex(&[h, ih, h, ih]);
        assert!(canonical_form(&u, LEVELSET_TOL).unwrap().is_none());

        let u = TransducerVector::from_real(&[0.5, 0.5, 0.5, -0.5]);
        assert!(canonical_form(&u, LEVELSET_TOL).unwrap().is_none());

        assert!(matches!(
            canonical_form(&TransducerVector::zeros(2), LEVELSET_TOL),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn sign_vector_enumeration() {
        let all = SignVector::all(2);
        assert_eq!(all, vec![sv(&[0, 0]), sv(&[1, 0]), sv(&[0, 1]), sv(&[1, 1])]);
        assert_eq!(SignVector::all(3).len(), 8);
        assert!(sv(&[1, 1, 1]).is_uniform());
        assert!(!sv(&[1, 0, 1]).is_uniform());
        assert_eq!(sv(&[1, 0]).xor(&sv(&[1, 1])), sv(&[0, 1]));
        assert!(SignVector::new(vec![2]).is_err());
    }

    #[test]
    fn em2_t_set_is_full() {
        let (_, _, dec) = setup(2, 1.0, 1.0);
        let u = TransducerVector::from_real(&[0.5, 0.5, -0.5, -0.5]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let t = t_set(&dec, dec.min_group(), &cv, LEVELSET_TOL).unwrap();
        assert_eq!(set_of(t), set_of(SignVector::all(2)));
    }

    #[test]
    fn simple_eigenvalue_has_two_points() {
        // equal-length, non-orthogonal wavevectors give distinct σ_1 > σ_2
        let t = 1.1f64;
        let k = DMatrix::from_row_slice(2, 2, &[1.0, t.cos(), 0.0, t.sin()]);
        let cfg = WaveConfig::from_k(k).unwrap();
        let coef = Coefficients::direct(1.0, 1.0, 1.0).unwrap();
        let dec = q0_decomposition(&coef, &cfg).unwrap();
        let g = dec.min_group();
        assert_eq!(dec.group(g).multiplicity(), 1);
        let u = min_eigenvector(&dec);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let t = t_set(&dec, g, &cv, LEVELSET_TOL).unwrap();
        assert_eq!(set_of(t), set_of(vec![SignVector::zeros(2), SignVector::ones(2)]));
    }

    #[test]
    fn multiplicity_three_in_h_minus_gives_eight_points() {
        let (coef, cfg, dec) = setup(3, 1.0, 1.0);
        let g = dec.min_group();
        assert_eq!(dec.group(g).multiplicity(), 3);
        let s = 1.0 / 6f64.sqrt();
        let u = TransducerVector::from_real(&[s, s, s, -s, -s, -s]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let t = t_set(&dec, g, &cv, LEVELSET_TOL).unwrap();
        assert_eq!(t.len(), 8);

        // oracle: evaluate ψ at all 2^3 half-lattice points and at quarter points
        for s in SignVector::all(3) {
            let x = lattice_point(&cfg, &s, &DVector::zeros(3));
            assert!((psi_direct(&x, &u, &coef, &cfg).unwrap() + 2.0).abs() < 1e-12);
        }
        let quarter = cfg.to_cartesian(&DVector::from_vec(vec![0.25, 0.0, 0.0]));
        assert!(psi_direct(&quarter, &u, &coef, &cfg).unwrap() > -2.0 + 1e-3);
    }

    #[test]
    fn t_set_preconditions() {
        let (_, _, dec) = setup(2, 1.0, 0.0);
        let u = TransducerVector::from_real(&[-0.5, 0.5, -0.5, 0.5]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        assert!(matches!(
            t_set(&dec, dec.min_group(), &cv, LEVELSET_TOL),
            Err(Error::Precondition(_))
        ));
        let (_, _, dec) = setup(2, 1.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = TransducerVector::from_real(&[s, 0.0, -s, 0.0]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        assert!(t_set(&dec, dec.min_group(), &cv, LEVELSET_TOL).is_err());
    }

    #[test]
    fn lom_t_pm_is_full() {
        let (_, _, dec) = setup(2, 1.0, 0.0);
        let u = TransducerVector::from_real(&[-0.5, 0.5, -0.5, 0.5]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let g = dec.group_of_value(0.0).unwrap();
        let t = t_pm_set(&dec, g, &cv, LEVELSET_TOL).unwrap();
        assert_eq!(set_of(t), set_of(SignVector::all(2)));
    }

    #[test]
    fn t_pm_empty_inside_h_plus() {
        // a < 0, b = 0: the simple top-of-H₊ eigenvalue 2ad is the minimum
        let (_, _, dec) = setup(2, -1.0, 0.0);
        let u = TransducerVector::from_real(&[0.5; 4]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let g = dec.min_group();
        assert_eq!(dec.group_side(g), Some(HLabel::Plus));
        assert!(t_pm_set(&dec, g, &cv, LEVELSET_TOL).unwrap().is_empty());
        assert!(r_set(&dec, g, &cv, LEVELSET_TOL).unwrap().is_empty());
    }

    #[test]
    fn planes_example_r_set() {
        let (_, _, dec) = setup(3, 1.0, 0.0);
        let g = dec.group_of_value(0.0).unwrap();
        let u = TransducerVector::from_real(&[0.5, -0.5, 0.0, 0.5, -0.5, 0.0]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        assert!(!t_pm_set(&dec, g, &cv, LEVELSET_TOL).unwrap().is_empty());

        let r = r_set(&dec, g, &cv, LEVELSET_TOL).unwrap();
        let got: BTreeSet<(SignVector, SignVector)> =
            r.iter().map(|p| (p.s.clone(), p.r.clone())).collect();
        let mut want = BTreeSet::new();
        for s in SignVector::all(3) {
            for r in SignVector::all(3) {
                let t = s.xor(&r);
                if t.bits()[0] == t.bits()[1] {
                    want.insert((s.clone(), r.clone()));
                }
            }
        }
        assert_eq!(got, want);
        assert!(r.iter().any(|p| p.plane));
        assert!(r.iter().any(|p| !p.plane));
    }

    #[test]
    fn lines_3d_example_r_set() {
        let (_, _, dec) = setup(3, 1.0, 0.0);
        let g = dec.group_of_value(0.0).unwrap();
        let c = 1.0 / (2.0 * 3f64.sqrt());
        let u = TransducerVector::from_real(&[c, c, -2.0 * c, c, c, -2.0 * c]);
        assert!((u.norm() - 1.0).abs() < 1e-15);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let r = r_set(&dec, g, &cv, LEVELSET_TOL).unwrap();
        let got: BTreeSet<(SignVector, SignVector)> =
            r.iter().map(|p| (p.s.clone(), p.r.clone())).collect();
        let mut want = BTreeSet::new();
        for s in SignVector::all(3) {
            for r in SignVector::all(3) {
                if s.xor(&r).is_uniform() {
                    want.insert((s.clone(), r.clone()));
                }
            }
        }
        assert_eq!(got, want);
        assert!(r.iter().all(|p| !p.plane));
    }

    #[test]
    fn zero_entry_subspaces() {
        let (coef, cfg, dec) = setup(2, 1.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = TransducerVector::from_real(&[s, 0.0, -s, 0.0]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let pred = zero_entry_subspace(&cv, &cfg, -2.0, LEVELSET_TOL).unwrap();
        match &pred {
            MinimaPrediction::SubspaceSet { zero_indices, generators, .. } => {
                assert_eq!(zero_indices, &vec![1]);
                assert!((generators[0][0]).abs() < 1e-15);
                assert!((generators[0][1] - 2.0 * PI).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(level_error(&pred, &u, &coef, &cfg, 100) < 1e-9);
        let c = classify(&dec, dec.min_group(), &u, &cfg, LEVELSET_TOL).unwrap();
        assert_eq!(c.branch, Branch::ZeroEntries);

        let full = TransducerVector::from_real(&[0.5, 0.5, -0.5, -0.5]);
        let cv = canonical_form(&full, LEVELSET_TOL).unwrap().unwrap();
        assert!(zero_entry_subspace(&cv, &cfg, -2.0, LEVELSET_TOL).is_none());

        let (coef, cfg, _) = setup(3, 1.0, 1.0);
        let u = TransducerVector::from_real(&[s, 0.0, 0.0, -s, 0.0, 0.0]);
        let cv = canonical_form(&u, LEVELSET_TOL).unwrap().unwrap();
        let pred = zero_entry_subspace(&cv, &cfg, -2.0, LEVELSET_TOL).unwrap();
        match &pred {
            MinimaPrediction::SubspaceSet { zero_indices, .. } => assert_eq!(zero_indices, &vec![1, 2]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(level_error(&pred, &u, &coef, &cfg, 200) < 1e-9);
    }

    #[test]
    fn classify_em2() {
        let (coef, cfg, dec) = setup(2, 1.0, 1.0);
        let u = TransducerVector::from_real(&[0.5, 0.5, -0.5, -0.5]);
        let c = classify(&dec, dec.min_group(), &u, &cfg, LEVELSET_TOL).unwrap();
        assert_eq!(c.branch, Branch::IsolatedPoints);
        assert!(c.exhaustive);
        assert_eq!(c.predictions.len(), 1);
        match &c.predictions[0] {
            MinimaPrediction::PointLatticeSet { offsets, level, .. } => {
                assert_eq!(*level, -2.0);
                assert_eq!(
                    offsets,
                    &vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5], vec![0.5, 0.5]]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(level_error(&c.predictions[0], &u, &coef, &cfg, 200) < 1e-9);
    }

    #[test]
    fn classify_lines_of_minima() {
        let (coef, cfg, dec) = setup(2, 1.0, 0.0);
        let u = TransducerVector::from_real(&[-0.5, 0.5, -0.5, 0.5]);
        let g = dec.group_of_value(0.0).unwrap();
        let c = classify(&dec, g, &u, &cfg, LEVELSET_TOL).unwrap();
        assert_eq!(c.branch, Branch::Straddling);
        assert!(!c.exhaustive);
        let lines = c
            .predictions
            .iter()
            .find(|p| p.kind() == "line_family_set")
            .unwrap();
        match lines {
            MinimaPrediction::LineFamilySet { directions, .. } => {
                let got: BTreeSet<Vec<i32>> = directions
                    .iter()
                    .map(|d| d.iter().map(|x| *x as i32).collect())
                    .collect();
                let want: BTreeSet<Vec<i32>> =
                    [[1, 1], [-1, 1], [1, -1], [-1, -1]].iter().map(|v| v.to_vec()).collect();
                assert_eq!(got, want);
            }
            _ => unreachable!(),
        }
        for p in &c.predictions {
            assert!(level_error(p, &u, &coef, &cfg, 100) < 1e-9);
        }
    }

    #[test]
    fn classify_planes() {
        let (coef, cfg, dec) = setup(3, 1.0, 0.0);
        let g = dec.group_of_value(0.0).unwrap();
        let u = TransducerVector::from_real(&[0.5, -0.5, 0.0, 0.5, -0.5, 0.0]);
        let c = classify(&dec, g, &u, &cfg, LEVELSET_TOL).unwrap();
        assert_eq!(c.branch, Branch::ZeroEntriesStraddling);
        let kinds: Vec<&str> = c.predictions.iter().map(|p| p.kind()).collect();
        assert_eq!(kinds, vec!["subspace_set", "line_family_set", "plane_family_set"]);
        for p in &c.predictions {
            assert!(level_error(p, &u, &coef, &cfg, 200) < 1e-9, "{}", p.kind());
        }
    }

    #[test]
    fn classify_rejects_bad_input() {
        let (_, cfg, dec) = setup(2, 1.0, 1.0);
        let u = TransducerVector::from_real(&[1.0, 1.0, -1.0, -1.0]);
        assert!(classify(&dec, dec.min_group(), &u, &cfg, LEVELSET_TOL).is_err());
        let u = TransducerVector::from_real(&[0.5, 0.5, -0.5, -0.5]);
        assert!(classify(&dec, 0, &u, &cfg, LEVELSET_TOL).is_err());

        // complex member of the (−2)-eigenspace
        let h = Complex64::new(0.5, 0.0);
        let ih = Complex64::new(0.0, 0.5);
        let u = TransducerVector::from_complex(&[h, ih, -h, -ih]);
        let c = classify(&dec, dec.min_group(), &u, &cfg, LEVELSET_TOL).unwrap();
        assert_eq!(c.branch, Branch::NotCanonical);
        assert!(c.predictions.is_empty());
    }

    #[test]
    fn t_sets_contain_zero_iff_ones() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for d in [2, 3] {
            for _ in 0..40 {
                let coef = Coefficients::direct(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 1.0)
                    .unwrap();
                let cfg = WaveConfig::from_k(DMatrix::identity(d, d)).unwrap();
                let dec = q0_decomposition(&coef, &cfg).unwrap();
                for g in 0..dec.groups().len() {
                    let idx = &dec.group(g).indices;
                    let mut w = DVector::<f64>::zeros(2 * d);
                    for &i in idx {
                        w += dec.vector(i) * rng.gen_range(-1.0..1.0);
                    }
                    let u = TransducerVector::from_real(w.normalize().as_slice());
                    let c = classify(&dec, g, &u, &cfg, LEVELSET_TOL).unwrap();
                    for p in &c.predictions {
                        if let MinimaPrediction::PointLatticeSet { signs, .. } = p {
                            assert!(signs.contains(&SignVector::zeros(d)));
                            assert!(signs.contains(&SignVector::ones(d)));
                            assert!(signs.len() >= 2 && signs.len() <= 1 << d);
                        }
                    }
                    // exclusivity: points only when the eigenspace is one-sided
                    let has_points = c.predictions.iter().any(|p| p.kind() == "point_lattice_set");
                    let one_sided = dec.group_side(g).is_some();
                    assert!(!has_points || one_sided);
                    if one_sided {
                        assert!(!c.predictions.iter().any(|p| {
                            matches!(p.kind(), "line_family_set" | "plane_family_set")
                        }));
                    }
                }
            }
        }
    }
}
