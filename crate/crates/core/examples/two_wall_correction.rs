//! Finite-hbar integral of the first scattered term across the (1,1) ray.

use scatter_core::asymptotics::{two_wall_first_correction, TwoWallConfig};

pub fn run_example() -> scatter_core::Result<String> {
    let cfg = TwoWallConfig { resolution: 200, ..TwoWallConfig::default() };
    let mut out = String::from("hbar    integral    1 - integral\n");
    for hbar in [0.2, 0.1, 0.05, 0.025] {
        let v = two_wall_first_correction(hbar, &cfg)?;
        out.push_str(&format!("{hbar:<7} {v:<11.6} {:.3e}\n", 1.0 - v));
    }
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(s) => print!("{s}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
