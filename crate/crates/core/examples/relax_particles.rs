// Drop particles at random and let them slide down the potential.

use acoustic_lattice::dynamics::{relax, ParticleEnsemble};
use acoustic_lattice::spectral::{min_eigenvector, q0_decomposition};
use acoustic_lattice::{Coefficients, WaveConfig};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> acoustic_lattice::Result<()> {
    let cfg = WaveConfig::from_k(DMatrix::identity(2, 2))?;
    let coef = Coefficients::direct(1.0, 1.0, 1.0)?;
    let dec = q0_decomposition(&coef, &cfg)?;
    let u = min_eigenvector(&dec);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ens = ParticleEnsemble::random(&cfg, 50, &mut rng);
    let res = relax(&ens, &u, &coef, &cfg)?;
    println!("{} of {} particles converged", res.converged(), res.particles.len());

    let mut sites: Vec<(i64, i64)> = res
        .particles
        .iter()
        .filter(|p| p.converged)
        .map(|p| ((p.atomic[0] * 2.0).round() as i64 % 2, (p.atomic[1] * 2.0).round() as i64 % 2))
        .collect();
    sites.sort();
    sites.dedup();
    println!("occupied half-lattice sites: {sites:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
