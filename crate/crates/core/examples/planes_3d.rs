// Three orthogonal wave pairs with b = 0: planes and lines of minima.

use acoustic_lattice::levelsets::{classify, MinimaPrediction, LEVELSET_TOL};
use acoustic_lattice::sampler::{sample, verify};
use acoustic_lattice::spectral::q0_decomposition;
use acoustic_lattice::{Coefficients, TransducerVector, WaveConfig};
use nalgebra::DMatrix;

pub fn run_example() -> acoustic_lattice::Result<()> {
    let cfg = WaveConfig::from_k(DMatrix::identity(3, 3))?;
    let coef = Coefficients::direct(1.0, 0.0, 1.0)?;
    let dec = q0_decomposition(&coef, &cfg)?;
    let g = dec.group_of_value(0.0).expect("zero eigenvalue");

    let c3 = 1.0 / (2.0 * 3f64.sqrt());
    let cases = [
        ("planes", vec![0.5, -0.5, 0.0, 0.5, -0.5, 0.0]),
        ("lines", vec![c3, c3, -2.0 * c3, c3, c3, -2.0 * c3]),
    ];
    for (name, v) in cases {
        let u = TransducerVector::from_real(&v);
        let c = classify(&dec, g, &u, &cfg, LEVELSET_TOL)?;
        for p in &c.predictions {
            if let MinimaPrediction::PlaneFamilySet { pairs, .. } = p {
                let planes = pairs.iter().filter(|q| q.plane).count();
                println!("{name}: {} sign pairs, {planes} span planes", pairs.len());
            }
        }
        let grid = sample(&cfg, &coef, &u, 16)?;
        let report = verify(&c.predictions, &cfg, &coef, &u, &grid)?;
        println!("{name}: confirmed = {}", report.confirmed);
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
