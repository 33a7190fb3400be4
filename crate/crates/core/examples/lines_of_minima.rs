// With b = 0 the zero eigenspace straddles both halves and minima form lines.

use acoustic_lattice::levelsets::{classify, MinimaPrediction, LEVELSET_TOL};
use acoustic_lattice::potential::psi_direct;
use acoustic_lattice::sampler::{numeric_minima, sample};
use acoustic_lattice::spectral::q0_decomposition;
use acoustic_lattice::{Coefficients, TransducerVector, WaveConfig};
use nalgebra::DMatrix;

pub fn run_example() -> acoustic_lattice::Result<()> {
    let cfg = WaveConfig::from_k(DMatrix::identity(2, 2))?;
    let coef = Coefficients::direct(1.0, 0.0, 1.0)?;
    let dec = q0_decomposition(&coef, &cfg)?;
    let u = TransducerVector::from_real(&[-0.5, 0.5, -0.5, 0.5]);
    let g = dec.group_of_value(0.0).expect("zero eigenvalue");
    let c = classify(&dec, g, &u, &cfg, LEVELSET_TOL)?;
    println!("branch {:?}", c.branch);

    for p in &c.predictions {
        if let MinimaPrediction::LineFamilySet { directions, .. } = p {
            println!("line directions (in phase space): {directions:?}");
        }
        let worst = p
            .sample_points(&cfg, 100)
            .iter()
            .map(|x| psi_direct(x, &u, &coef, &cfg).map(f64::abs))
            .collect::<acoustic_lattice::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("{}: max |psi| on samples = {worst:.2e}", p.kind());
    }

    let grid = sample(&cfg, &coef, &u, 64)?;
    let extended = numeric_minima(&grid).iter().filter(|m| m.extended).count();
    println!("extended minimum components on a 64^2 grid: {extended}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
