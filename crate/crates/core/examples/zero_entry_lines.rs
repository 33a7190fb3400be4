// An eigenvector with a zero entry pins the potential along a lattice direction.

use acoustic_lattice::levelsets::{classify, MinimaPrediction, LEVELSET_TOL};
use acoustic_lattice::potential::psi_direct;
use acoustic_lattice::spectral::q0_decomposition;
use acoustic_lattice::{Coefficients, TransducerVector, WaveConfig};
use nalgebra::{DMatrix, DVector};

pub fn run_example() -> acoustic_lattice::Result<()> {
    let cfg = WaveConfig::from_k(DMatrix::identity(2, 2))?;
    let coef = Coefficients::direct(1.0, 1.0, 1.0)?;
    let dec = q0_decomposition(&coef, &cfg)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = TransducerVector::from_real(&[s, 0.0, -s, 0.0]);
    let c = classify(&dec, dec.min_group(), &u, &cfg, LEVELSET_TOL)?;

    if let Some(MinimaPrediction::SubspaceSet { generators, .. }) = c.predictions.first() {
        println!("psi = {} along span {generators:?}", c.level);
        let a2 = cfg.lattice_vector(1);
        for t in [-0.7, 0.1, 0.33, 1.9] {
            let x: DVector<f64> = &a2 * t;
            println!("  t = {t:5}: psi = {:.12}", psi_direct(&x, &u, &coef, &cfg)?);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
