// Potential coefficients for a polystyrene-like bead in water at 1 MHz.

use acoustic_lattice::wavefield::{derive_coefficients, MediumParams, ParticleParams};

pub fn run_example() -> acoustic_lattice::Result<()> {
    let water = MediumParams::new(4.5e-10, 1000.0);
    let bead = ParticleParams {
        compressibility: 2.4e-10,
        density: 1050.0,
    };
    let coef = derive_coefficients(&water, &bead, 1.0e6)?;
    let ph = coef.physical.expect("physical path");

    println!("f1 = {:.6}, f2 = {:.6}", ph.f1, ph.f2);
    println!("a = {:.6e}, b = {:.6e}", coef.a, coef.b);
    println!("k = {:.3} 1/m, wavelength = {:.3e} m", coef.wavenumber, coef.wavelength());
    assert!(ph.f2 > -2.0 && ph.f2 < 1.0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
