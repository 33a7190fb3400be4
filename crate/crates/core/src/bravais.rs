//! Bravais lattice classes reachable with equal-length wavevectors.
//!
//! Each class carries a generator for reciprocal vectors `g_1..g_d` with
//! `|g_1| = … = |g_d|`. Rescaling them to length `k` gives the wavevectors
//! whose real-space lattice `A = 2πK^{-T}` lies in the class. A class is
//! *achievable* when some equal-norm member belongs to no other class;
//! otherwise the class it collapses to is recorded.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wavefield::{WaveConfig, WAVENUMBER_TOL};

/// A scalar parameter and its open validity interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
}

impl ParamSpec {
    const fn new(name: &'static str, lower: f64, upper: f64) -> Self {
        Self { name, lower, upper }
    }

    pub fn contains(&self, v: f64) -> bool {
        v.is_finite() && v > self.lower && v < self.upper
    }

    fn range(&self) -> &'static str {
        match (self.lower, self.upper) {
            (l, u) if l == 0.0 && u == PI => "(0, pi)",
            (1.0, _) => "(1, inf)",
            _ => "(0, inf)",
        }
    }
}

const LENGTH: f64 = f64::INFINITY;
const A: ParamSpec = ParamSpec::new("a", 0.0, LENGTH);
const A_GT1: ParamSpec = ParamSpec::new("a", 1.0, LENGTH);
const B: ParamSpec = ParamSpec::new("b", 0.0, LENGTH);
const C: ParamSpec = ParamSpec::new("c", 0.0, LENGTH);
const GAMMA: ParamSpec = ParamSpec::new("gamma", 0.0, PI);

/// Parameters for a generator. Unused fields must be left empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BravaisParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Explicit reciprocal vectors, for classes without a closed form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<f64>>>,
}

impl BravaisParams {
    fn get(&self, name: &str) -> Option<f64> {
        match name {
            "a" => self.a,
            "b" => self.b,
            "c" => self.c,
            "gamma" => self.gamma,
            _ => None,
        }
    }

    fn set(&mut self, name: &str, v: f64) {
        match name {
            "a" => self.a = Some(v),
            "b" => self.b = Some(v),
            "c" => self.c = Some(v),
            "gamma" => self.gamma = Some(v),
            _ => {}
        }
    }
}

type Generator = fn(&BravaisParams) -> Vec<DVector<f64>>;

/// One row of the catalog.
#[derive(Debug, Clone, Serialize)]
pub struct BravaisEntry {
    pub name: &'static str,
    /// Lowercase hyphenated name used on the command line.
    pub cli_name: &'static str,
    pub dimension: usize,
    pub params: &'static [ParamSpec],
    /// Takes user-supplied vectors instead of scalar parameters.
    pub explicit_vectors: bool,
    pub achievable: bool,
    /// Class forced by the equal-norm constraint, when not achievable.
    pub implied_class: Option<&'static str>,
    pub notes: Option<&'static str>,
    #[serde(skip)]
    generator: Generator,
}

fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

fn p(params: &BravaisParams, name: &str) -> f64 {
    params.get(name).unwrap_or(f64::NAN)
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

fn csc(x: f64) -> f64 {
    1.0 / x.sin()
}

fn gen_2d_monoclinic(q: &BravaisParams) -> Vec<DVector<f64>> {
    let g = p(q, "gamma");
    vec![v(&[1.0, -cot(g)]), v(&[0.0, csc(g)])]
}

fn gen_2d_identity(_: &BravaisParams) -> Vec<DVector<f64>> {
    vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]
}

fn gen_2d_orthorhombic_centred(q: &BravaisParams) -> Vec<DVector<f64>> {
    let g = p(q, "gamma");
    let x = csc(g) * (g / 2.0).sin();
    let y = csc(g / 2.0) / 2.0;
    vec![v(&[x, y]), v(&[x, -y])]
}

fn gen_2d_hexagonal(_: &BravaisParams) -> Vec<DVector<f64>> {
    let r = 1.0 / 3f64.sqrt();
    vec![v(&[1.0, r]), v(&[0.0, 2.0 * r])]
}

fn gen_explicit(q: &BravaisParams) -> Vec<DVector<f64>> {
    q.vectors
        .as_ref()
        .map(|vs| vs.iter().map(|x| v(x)).collect())
        .unwrap_or_default()
}

fn gen_monoclinic_primitive(q: &BravaisParams) -> Vec<DVector<f64>> {
    let g = p(q, "gamma");
    vec![
        v(&[-g.cos(), -g.sin(), 0.0]),
        v(&[1.0, 0.0, 0.0]),
        v(&[0.0, 0.0, 1.0]),
    ]
}

/// `c` is fixed by equal norms: `c = sin γ / sqrt(1 − 1/a²)`.
pub fn monoclinic_base_centred_c(a: f64, gamma: f64) -> f64 {
    gamma.sin() / (1.0 - 1.0 / (a * a)).sqrt()
}

fn gen_monoclinic_base_centred(q: &BravaisParams) -> Vec<DVector<f64>> {
    let (a, g) = (p(q, "a"), p(q, "gamma"));
    let c = monoclinic_base_centred_c(a, g);
    let s = 1.0 / (a * c);
    vec![
        v(&[-cot(g), -1.0, 0.0]),
        v(&[c * csc(g) * s, 0.0, -a * s]),
        v(&[c * csc(g) * s, 0.0, a * s]),
    ]
}

fn gen_orthorhombic_primitive(_: &BravaisParams) -> Vec<DVector<f64>> {
    vec![
        v(&[0.0, -1.0, 0.0]),
        v(&[1.0, 0.0, 0.0]),
        v(&[0.0, 0.0, 1.0]),
    ]
}

fn gen_orthorhombic_base_centred(q: &BravaisParams) -> Vec<DVector<f64>> {
    let (a, b) = (p(q, "a"), p(q, "b"));
    vec![
        v(&[b, -a, 0.0]),
        v(&[b, a, 0.0]),
        v(&[0.0, 0.0, a.hypot(b)]),
    ]
}

fn gen_orthorhombic_body_centred(_: &BravaisParams) -> Vec<DVector<f64>> {
    vec![
        v(&[1.0, 0.0, 1.0]),
        v(&[0.0, -1.0, 1.0]),
        v(&[1.0, -1.0, 0.0]),
    ]
}

fn gen_orthorhombic_face_centred(q: &BravaisParams) -> Vec<DVector<f64>> {
    let (a, b, c) = (p(q, "a"), p(q, "b"), p(q, "c"));
    vec![
        v(&[1.0 / a, 1.0 / b, 1.0 / c]),
        v(&[-1.0 / a, -1.0 / b, 1.0 / c]),
        v(&[1.0 / a, -1.0 / b, -1.0 / c]),
    ]
}

fn gen_3d_identity(_: &BravaisParams) -> Vec<DVector<f64>> {
    vec![
        v(&[1.0, 0.0, 0.0]),
        v(&[0.0, 1.0, 0.0]),
        v(&[0.0, 0.0, 1.0]),
    ]
}

fn gen_body_centred(_: &BravaisParams) -> Vec<DVector<f64>> {
    vec![
        v(&[0.0, 1.0, 1.0]),
        v(&[1.0, 0.0, 1.0]),
        v(&[1.0, 1.0, 0.0]),
    ]
}

fn gen_trigonal(q: &BravaisParams) -> Vec<DVector<f64>> {
    let (a, c) = (p(q, "a"), p(q, "c"));
    let s3 = 3f64.sqrt();
    vec![
        v(&[0.0, -2.0 / (3.0 * a), 1.0 / (3.0 * c)]),
        v(&[1.0 / (s3 * a), 1.0 / (3.0 * a), 1.0 / (3.0 * c)]),
        v(&[-1.0 / (s3 * a), 1.0 / (3.0 * a), 1.0 / (3.0 * c)]),
    ]
}

fn gen_hexagonal_primitive(_: &BravaisParams) -> Vec<DVector<f64>> {
    let s3 = 3f64.sqrt();
    vec![
        v(&[1.0 / s3, -1.0, 0.0]),
        v(&[2.0 / s3, 0.0, 0.0]),
        v(&[0.0, 0.0, 2.0 / s3]),
    ]
}

fn gen_face_centred(_: &BravaisParams) -> Vec<DVector<f64>> {
    vec![
        v(&[-1.0, 1.0, 1.0]),
        v(&[1.0, -1.0, 1.0]),
        v(&[1.0, 1.0, -1.0]),
    ]
}

#[allow(clippy::too_many_arguments)]
const fn entry(
    name: &'static str,
    cli_name: &'static str,
    dimension: usize,
    params: &'static [ParamSpec],
    explicit_vectors: bool,
    implied_class: Option<&'static str>,
    notes: Option<&'static str>,
    generator: Generator,
) -> BravaisEntry {
    BravaisEntry {
        name,
        cli_name,
        dimension,
        params,
        explicit_vectors,
        achievable: implied_class.is_none(),
        implied_class,
        notes,
        generator,
    }
}

const CATALOG_2D: [BravaisEntry; 5] = [
    entry("Monoclinic", "monoclinic", 2, &[GAMMA], false, Some("Orthorhombic centred"), None, gen_2d_monoclinic),
    entry("Orthorhombic", "orthorhombic", 2, &[], false, Some("Tetragonal"), None, gen_2d_identity),
    entry("Orthorhombic centred", "orthorhombic-centred", 2, &[GAMMA], false, None, None, gen_2d_orthorhombic_centred),
    entry("Hexagonal", "hexagonal", 2, &[], false, None, None, gen_2d_hexagonal),
    entry("Tetragonal", "tetragonal", 2, &[], false, None, None, gen_2d_identity),
];

const CATALOG_3D: [BravaisEntry; 14] = [
    entry(
        "Triclinic primitive",
        "triclinic-primitive",
        3,
        &[],
        true,
        None,
        Some("no closed form; supply three vectors of equal length"),
        gen_explicit,
    ),
    entry(
        "Monoclinic primitive",
        "monoclinic-primitive",
        3,
        &[GAMMA],
        false,
        Some("Cubic primitive (if cos gamma = 0), Tetragonal body-centred (if cos gamma != 0)"),
        None,
        gen_monoclinic_primitive,
    ),
    entry(
        "Monoclinic base-centred",
        "monoclinic-base-centred",
        3,
        &[A_GT1, GAMMA],
        false,
        Some("Tetragonal body-centred"),
        Some("c is determined by a and gamma: c = sin(gamma) / sqrt(1 - 1/a^2)"),
        gen_monoclinic_base_centred,
    ),
    entry(
        "Orthorhombic primitive",
        "orthorhombic-primitive",
        3,
        &[],
        false,
        Some("Cubic primitive"),
        None,
        gen_orthorhombic_primitive,
    ),
    entry(
        "Orthorhombic base-centred",
        "orthorhombic-base-centred",
        3,
        &[A, B],
        false,
        Some("Tetragonal body-centred (if a != b), Cubic primitive (if a = b)"),
        None,
        gen_orthorhombic_base_centred,
    ),
    entry(
        "Orthorhombic body-centred",
        "orthorhombic-body-centred",
        3,
        &[],
        false,
        Some("Cubic body-centred"),
        None,
        gen_orthorhombic_body_centred,
    ),
    entry(
        "Orthorhombic face-centred",
        "orthorhombic-face-centred",
        3,
        &[A, B, C],
        false,
        None,
        None,
        gen_orthorhombic_face_centred,
    ),
    entry(
        "Tetragonal primitive",
        "tetragonal-primitive",
        3,
        &[],
        false,
        Some("Cubic primitive"),
        None,
        gen_3d_identity,
    ),
    entry(
        "Tetragonal body-centred",
        "tetragonal-body-centred",
        3,
        &[],
        false,
        Some("Cubic body-centred"),
        None,
        gen_body_centred,
    ),
    entry("Trigonal primitive", "trigonal-primitive", 3, &[A, C], false, None, None, gen_trigonal),
    entry(
        "Hexagonal primitive",
        "hexagonal-primitive",
        3,
        &[],
        false,
        Some("Tetragonal body-centred"),
        Some("implied class spelled \"Tegragonal body-centred\" in the source table"),
        gen_hexagonal_primitive,
    ),
    entry("Cubic primitive", "cubic-primitive", 3, &[], false, None, None, gen_3d_identity),
    entry("Cubic face-centred", "cubic-face-centred", 3, &[], false, None, None, gen_face_centred),
    entry("Cubic body-centred", "cubic-body-centred", 3, &[], false, None, None, gen_body_centred),
];

/// All classes in dimension 2 or 3.
pub fn catalog(dimension: usize) -> Result<&'static [BravaisEntry]> {
    match dimension {
        2 => Ok(&CATALOG_2D),
        3 => Ok(&CATALOG_3D),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Look a class up by its command-line name or table name.
pub fn lookup(name: &str) -> Result<&'static BravaisEntry> {
    let key = name.trim().to_lowercase().replace(' ', "-");
    CATALOG_2D
        .iter()
        .chain(CATALOG_3D.iter())
        .find(|e| e.cli_name == key)
        .ok_or_else(|| Error::UnknownClass {
            name: name.to_string(),
            valid: class_names().join(", "),
        })
}

/// Command-line names of every class.
pub fn class_names() -> Vec<&'static str> {
    CATALOG_2D.iter().chain(CATALOG_3D.iter()).map(|e| e.cli_name).collect()
}

/// Largest `(max − min) / max` over the norms of `vs`.
pub fn norm_spread(vs: &[DVector<f64>]) -> f64 {
    let norms: Vec<f64> = vs.iter().map(|g| g.norm()).collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let min = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        return f64::INFINITY;
    }
    (max - min) / max
}

impl BravaisEntry {
    fn validate(&self, params: &BravaisParams) -> Result<()> {
        for name in ["a", "b", "c", "gamma"] {
            let Some(val) = params.get(name) else { continue };
            match self.params.iter().find(|s| s.name == name) {
                Some(spec) if !spec.contains(val) => {
                    return Err(Error::OutOfRange {
                        name: name.to_string(),
                        value: val,
                        range: spec.range(),
                    })
                }
                Some(_) => {}
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "parameter {name} is not used by {}",
                        self.cli_name
                    )))
                }
            }
        }
        if let Some(spec) = self.params.iter().find(|s| params.get(s.name).is_none()) {
            return Err(Error::InvalidParameter(format!(
                "{} requires parameter {}",
                self.cli_name, spec.name
            )));
        }
        match (&params.vectors, self.explicit_vectors) {
            (Some(_), false) => Err(Error::InvalidParameter(format!(
                "{} does not take explicit vectors",
                self.cli_name
            ))),
            (None, true) => Err(Error::InvalidParameter(format!(
                "{} requires {} explicit vectors",
                self.cli_name, self.dimension
            ))),
            (Some(vs), true) => {
                if vs.len() != self.dimension {
                    return Err(Error::DimensionMismatch {
                        expected: self.dimension,
                        got: vs.len(),
                    });
                }
                if let Some(bad) = vs.iter().find(|x| x.len() != self.dimension) {
                    return Err(Error::DimensionMismatch {
                        expected: self.dimension,
                        got: bad.len(),
                    });
                }
                Ok(())
            }
            (None, false) => Ok(()),
        }
    }

    /// Reciprocal vectors `g_1..g_d`, checked for equal norms.
    pub fn reciprocal_vectors(&self, params: &BravaisParams) -> Result<Vec<DVector<f64>>> {
        self.validate(params)?;
        let gs = (self.generator)(params);
        if gs.iter().flat_map(|g| g.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{} generator produced non-finite vectors",
                self.cli_name
            )));
        }
        if norm_spread(&gs) > WAVENUMBER_TOL {
            return Err(Error::UnequalWavenumber {
                norms: gs.iter().map(|g| g.norm()).collect(),
            });
        }
        Ok(gs)
    }

    /// Class implied by the equal-norm constraint for these parameters.
    pub fn resolve_implied(&self, params: &BravaisParams) -> Option<&'static str> {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        match self.cli_name {
            "monoclinic-primitive" => Some(if close(p(params, "gamma").cos(), 0.0) {
                "Cubic primitive"
            } else {
                "Tetragonal body-centred"
            }),
            "orthorhombic-base-centred" => Some(if close(p(params, "a"), p(params, "b")) {
                "Cubic primitive"
            } else {
                "Tetragonal body-centred"
            }),
            _ => self.implied_class,
        }
    }

    /// A random valid parameter set.
    pub fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R) -> BravaisParams {
        let mut q = BravaisParams::default();
        for spec in self.params {
            let val = if spec.upper == PI {
                rng.gen_range(0.05..PI - 0.05)
            } else {
                spec.lower + rng.gen_range(0.05..5.0)
            };
            q.set(spec.name, val);
        }
        if self.explicit_vectors {
            let d = self.dimension;
            loop {
                let m = DMatrix::<f64>::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
                let cols: Vec<DVector<f64>> = m.column_iter().map(|c| c.normalize()).collect();
                let basis = DMatrix::from_columns(&cols);
                if basis.determinant().abs() > 0.05 {
                    q.vectors = Some(cols.iter().map(|c| c.iter().copied().collect()).collect());
                    break;
                }
            }
        }
        q
    }
}

/// Class, parameters and target wavenumber for [`design`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRequest {
    pub class: String,
    #[serde(default)]
    pub params: BravaisParams,
    pub wavenumber: f64,
}

/// Wavevectors `k·g_j/|g_j|` for the requested class.
pub fn design(req: &DesignRequest) -> Result<WaveConfig> {
    if !(req.wavenumber.is_finite() && req.wavenumber > 0.0) {
        return Err(Error::OutOfRange {
            name: "wavenumber".into(),
            value: req.wavenumber,
            range: "(0, inf)",
        });
    }
    let entry = lookup(&req.class)?;
    let gs = entry.reciprocal_vectors(&req.params)?;
    let cols: Vec<DVector<f64>> = gs.iter().map(|g| g * (req.wavenumber / g.norm())).collect();
    WaveConfig::from_k(DMatrix::from_columns(&cols))
}
