// List the Bravais catalog and design a face-centred cubic arrangement.

use acoustic_lattice::bravais::{catalog, design, BravaisParams, DesignRequest};

pub fn run_example() -> acoustic_lattice::Result<()> {
    for d in [2, 3] {
        let entries = catalog(d)?;
        let achievable = entries.iter().filter(|e| e.achievable).count();
        println!("{d}D: {} classes, {achievable} achievable", entries.len());
        for e in entries {
            match e.implied_class {
                None => println!("  {:28} achievable", e.cli_name),
                Some(implied) => println!("  {:28} -> {implied}", e.cli_name),
            }
        }
    }

    let cfg = design(&DesignRequest {
        class: "cubic-face-centred".into(),
        params: BravaisParams::default(),
        wavenumber: 3f64.sqrt(),
    })?;
    let gram = cfg.lattice().transpose() * cfg.lattice() / std::f64::consts::PI.powi(2);
    println!("fcc lattice Gram matrix / pi^2: {gram:.6}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
