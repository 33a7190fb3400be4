// Move the minimum to a chosen point by phase-shifting the amplitudes.

use acoustic_lattice::potential::{psi_direct, retarget};
use acoustic_lattice::spectral::{min_eigenvector, q0_decomposition};
use acoustic_lattice::{Coefficients, WaveConfig};
use nalgebra::DVector;

pub fn run_example() -> acoustic_lattice::Result<()> {
    let cfg = WaveConfig::from_k_rows(&[vec![1.0, 0.5], vec![0.0, 0.75f64.sqrt()]])?;
    let coef = Coefficients::direct(1.0, 0.8, 1.0)?;
    let dec = q0_decomposition(&coef, &cfg)?;
    let u = min_eigenvector(&dec);

    let target = DVector::from_vec(vec![1.3, -0.4]);
    let moved = retarget(&u, &target, &cfg)?;
    println!("lambda_min = {:.12}", dec.lambda_min());
    println!("psi(target) = {:.12}", psi_direct(&target, &moved, &coef, &cfg)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
