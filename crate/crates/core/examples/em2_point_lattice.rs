// Two orthogonal wave pairs, a = b = 1: four isolated minima per cell.

use acoustic_lattice::levelsets::{classify, MinimaPrediction, LEVELSET_TOL};
use acoustic_lattice::sampler::{sample, verify};
use acoustic_lattice::spectral::q0_decomposition;
use acoustic_lattice::{Coefficients, TransducerVector, WaveConfig};
use nalgebra::DMatrix;

pub fn run_example() -> acoustic_lattice::Result<()> {
    let cfg = WaveConfig::from_k(DMatrix::identity(2, 2))?;
    let coef = Coefficients::direct(1.0, 1.0, 1.0)?;
    let dec = q0_decomposition(&coef, &cfg)?;
    println!("eigenvalues of Q(0): {:?}", dec.eigenvalues());

    let u = TransducerVector::from_real(&[0.5, 0.5, -0.5, -0.5]);
    let c = classify(&dec, dec.min_group(), &u, &cfg, LEVELSET_TOL)?;
    if let MinimaPrediction::PointLatticeSet { offsets, level, .. } = &c.predictions[0] {
        println!("level {level}, minima at atomic offsets {offsets:?}");
    }

    let grid = sample(&cfg, &coef, &u, 128)?;
    let report = verify(&c.predictions, &cfg, &coef, &u, &grid)?;
    println!(
        "confirmed = {}, worst level error = {:.2e}, numeric minima = {}",
        report.confirmed,
        report.worst_level_error,
        report.numeric_minima.len()
    );
    assert!(report.confirmed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
