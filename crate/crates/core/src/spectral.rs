//! Eigendecomposition of `Q(0)`.
//!
//! Two independent routes are provided: a cyclic Jacobi solver for small
//! dense symmetric matrices, and the structured construction that builds the
//! eigenpairs of `Q(0)` from those of the wavevector Gram matrix `KᵀK`:
//!
//! ```text
//! Λ = diag(2ad, 0, …, 0, −2bσ_1, …, −2bσ_d)
//! U = 1/√2 [ 𝟙/√d  z_1 … z_{d−1}   u_1 …  u_d ]
//!          [ 𝟙/√d  z_1 … z_{d−1}  −u_1 … −u_d ]
//! ```
//!
//! Every structured eigenvector lies in `H₊ = {[w; w]}` or `H₋ = {[w; −w]}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::q0;
use crate::wavefield::{Coefficients, TransducerVector, WaveConfig};

const MAX_SWEEPS: usize = 100;

/// Relative tolerance for merging eigenvalues into one eigenspace.
pub const GROUPING_TOL: f64 = 1e-9;

/// Default relative residual for eigenspace membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
///
/// Returns eigenvalues sorted in descending order and the matching
/// orthonormal eigenvectors as columns. Each eigenvector is normalised so that
/// its entry of largest magnitude is positive.
pub fn symmetric_eig(s: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s.ncols(),
        });
    }
    let scale = s.amax().max(1.0);
    let asym = (s - s.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }

    let mut a = (s + s.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = a.norm();
    let off_norm = |a: &DMatrix<f64>| {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += a[(i, j)] * a[(i, j)];
                }
            }
        }
        sum.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= 1e-14 * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off > 1e-14 * norm {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).into_owned();
        canonical_sign(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok((values, vectors))
}

/// Flip `v` so its entry of largest magnitude (first one on ties) is positive.
fn canonical_sign(v: &mut DVector<f64>) {
    let max = v.amax();
    if max == 0.0 {
        return;
    }
    if let Some(lead) = v.iter().find(|x| x.abs() >= max * (1.0 - 1e-12)) {
        if *lead < 0.0 {
            v.neg_mut();
        }
    }
}

/// Which of `H₊`, `H₋` a vector lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HLabel {
    Plus,
    Minus,
    Mixed,
}

/// Components of a vector in `H₊` and `H₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct HSplit {
    pub plus_part: DVector<Complex64>,
    pub minus_part: DVector<Complex64>,
}

/// `(P₊w, P₋w)` with `P± = V±V±ᵀ`, `V± = [I; ±I]/√2`.
pub fn h_split(w: &DVector<Complex64>) -> Result<HSplit> {
    let n = w.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: n + n % 2,
            got: n,
        });
    }
    let d = n / 2;
    let half = Complex64::new(0.5, 0.0);
    let mut plus_part = DVector::zeros(n);
    let mut minus_part = DVector::zeros(n);
    for j in 0..d {
        let s = (w[j] + w[d + j]) * half;
        let t = (w[j] - w[d + j]) * half;
        plus_part[j] = s;
        plus_part[d + j] = s;
        minus_part[j] = t;
        minus_part[d + j] = -t;
    }
    Ok(HSplit {
        plus_part,
        minus_part,
    })
}

/// H-label of a real vector, exact up to `1e-12` relative.
pub fn h_label(w: &DVector<f64>) -> HLabel {
    let wc = w.map(|v| Complex64::new(v, 0.0));
    let Ok(split) = h_split(&wc) else {
        return HLabel::Mixed;
    };
    let n = w.norm();
    if split.minus_part.norm() <= 1e-12 * n {
        HLabel::Plus
    } else if split.plus_part.norm() <= 1e-12 * n {
        HLabel::Minus
    } else {
        HLabel::Mixed
    }
}

/// Basis vectors sharing one eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenspace {
    pub value: f64,
    pub indices: Vec<usize>,
}

impl Eigenspace {
    pub fn multiplicity(&self) -> usize {
        self.indices.len()
    }
}

/// Eigenpairs of `Q(0)`, sorted by descending eigenvalue and grouped.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    labels: Vec<HLabel>,
    groups: Vec<Eigenspace>,
}

impl SpectralDecomposition {
    fn assemble(mut pairs: Vec<(f64, DVector<f64>)>) -> Self {
        let n = pairs.len();
        for (_, v) in pairs.iter_mut() {
            canonical_sign(v);
        }
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (i, (_, v)) in pairs.iter().enumerate() {
            vectors.set_column(i, v);
        }
        let labels = pairs.iter().map(|(_, v)| h_label(v)).collect();
        let groups = group_values(&values);
        Self {
            values,
            vectors,
            labels,
            groups,
        }
    }

    /// General-solver decomposition of an arbitrary real symmetric matrix.
    pub fn from_symmetric(s: &DMatrix<f64>) -> Result<Self> {
        let (values, vectors) = symmetric_eig(s)?;
        Ok(Self::assemble(
            values
                .into_iter()
                .zip(vectors.column_iter().map(|c| c.into_owned()))
                .collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Descending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors as columns.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    pub fn labels(&self) -> &[HLabel] {
        &self.labels
    }

    /// Eigenspaces, in descending eigenvalue order.
    pub fn groups(&self) -> &[Eigenspace] {
        &self.groups
    }

    pub fn group(&self, g: usize) -> &Eigenspace {
        &self.groups[g]
    }

    /// Index of the eigenspace of the smallest eigenvalue.
    pub fn min_group(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn lambda_min(&self) -> f64 {
        *self.values.last().expect("empty decomposition")
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    /// Eigenspace whose value is within the grouping tolerance of `lambda`.
    pub fn group_of_value(&self, lambda: f64) -> Option<usize> {
        let tol = GROUPING_TOL * (1.0 + self.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        self.groups
            .iter()
            .position(|g| (g.value - lambda).abs() <= tol)
    }

    /// `Some(Plus)` / `Some(Minus)` when the whole eigenspace lies in `H₊` / `H₋`.
    pub fn group_side(&self, g: usize) -> Option<HLabel> {
        let mut labels = self.groups[g].indices.iter().map(|&i| self.labels[i]);
        let first = labels.next()?;
        if first == HLabel::Mixed {
            return None;
        }
        labels.all(|l| l == first).then_some(first)
    }

    /// `U Λ Uᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let lam = DMatrix::from_diagonal(&DVector::from_column_slice(&self.values));
        &self.vectors * lam * self.vectors.transpose()
    }

    /// `‖w − Π_λ w‖` for the orthogonal projector onto eigenspace `g`.
    pub fn residual(&self, g: usize, w: &DVector<Complex64>) -> f64 {
        let mut r = w.clone();
        for &i in &self.groups[g].indices {
            let b = self.vectors.column(i).map(|v| Complex64::new(v, 0.0));
            let coeff = b.dotc(w);
            r -= b * coeff;
        }
        r.norm()
    }
}

fn group_values(values: &[f64]) -> Vec<Eigenspace> {
    let tol = GROUPING_TOL * (1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let mut groups: Vec<Eigenspace> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (values[*g.indices.last().unwrap()] - v).abs() <= tol => g.indices.push(i),
            _ => groups.push(Eigenspace {
                value: v,
                indices: vec![i],
            }),
        }
    }
    for g in groups.iter_mut() {
        g.value = g.indices.iter().map(|&i| values[i]).sum::<f64>() / g.indices.len() as f64;
    }
    groups
}

/// Orthonormal basis of `𝟙^⊥` from Gram–Schmidt on `e_1 − e_2, e_2 − e_3, …`.
pub fn ones_complement_basis(d: usize) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d.saturating_sub(1));
    for i in 0..d.saturating_sub(1) {
        let mut v = DVector::<f64>::zeros(d);
        v[i] = 1.0;
        v[i + 1] = -1.0;
        for b in &basis {
            let c = b.dot(&v);
            v -= b * c;
        }
        let n = v.norm();
        basis.push(v / n);
    }
    basis
}

fn stack(top: &DVector<f64>, sign: f64) -> DVector<f64> {
    let d = top.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_fn(2 * d, |i, _| if i < d { s * top[i] } else { sign * s * top[i - d] })
}

/// Structured eigendecomposition of `Q(0)`.
pub fn q0_decomposition(coef: &Coefficients, cfg: &WaveConfig) -> Result<SpectralDecomposition> {
    let d = cfg.dim();
    let k = cfg.k_matrix();
    let gram = k.transpose() * k;
    let (sigma, gram_vecs) = symmetric_eig(&gram)?;
    if sigma.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::DegenerateBasis {
            det: k.determinant(),
        });
    }

    let mut pairs = Vec::with_capacity(2 * d);
    let ones = DVector::from_element(d, 1.0 / (d as f64).sqrt());
    pairs.push((2.0 * coef.a * d as f64, stack(&ones, 1.0)));
    for z in ones_complement_basis(d) {
        pairs.push((0.0, stack(&z, 1.0)));
    }
    for (j, s) in sigma.iter().enumerate() {
        let uj = gram_vecs.column(j).into_owned();
        pairs.push((-2.0 * coef.b * s, stack(&uj, -1.0)));
    }
    Ok(SpectralDecomposition::assemble(pairs))
}

/// General-solver decomposition of the closed-form `Q(0)`.
pub fn q0_general_decomposition(
    coef: &Coefficients,
    cfg: &WaveConfig,
) -> Result<SpectralDecomposition> {
    SpectralDecomposition::from_symmetric(&q0(coef, cfg))
}

/// Whether `w` lies in eigenspace `g`: `‖w − Π w‖ ≤ tol ‖w‖`.
pub fn eigenspace_contains(
    dec: &SpectralDecomposition,
    g: usize,
    w: &DVector<Complex64>,
    tol: f64,
) -> Result<bool> {
    if w.len() != dec.len() {
        return Err(Error::DimensionMismatch {
            expected: dec.len(),
            got: w.len(),
        });
    }
    let n = w.norm();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(dec.residual(g, w) <= tol * n)
}

/// Unit eigenvector of the smallest eigenvalue.
///
/// Preference: the first stored basis vector of the eigenspace with no zero
/// entry, then the first normalised pairwise sum with no zero entry, else the
/// first stored basis vector.
pub fn min_eigenvector(dec: &SpectralDecomposition) -> TransducerVector {
    let group = dec.group(dec.min_group());
    let basis: Vec<DVector<f64>> = group.indices.iter().map(|&i| dec.vector(i)).collect();
    let full = |v: &DVector<f64>| v.iter().all(|x| x.abs() > 1e-12);

    let mut candidates = basis.clone();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = &basis[i] + &basis[j];
            candidates.push(s.normalize());
        }
    }
    let chosen = candidates
        .iter()
        .find(|v| full(v))
        .unwrap_or(&basis[0]);
    TransducerVector::from_real(chosen.as_slice())
}
