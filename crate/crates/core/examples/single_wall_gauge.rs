//! Gauge fields of a single wall at finite hbar and their step-function limit.

use num_bigint::BigInt;
use num_rational::BigRational;
use scatter_core::asymptotics::{convergence_rate, single_wall_gauge, single_wall_sweep, Grid};
use scatter_core::lattice::LatticeVector;
use scatter_core::tropical::LieElement;

pub fn run_example() -> scatter_core::Result<String> {
    let one = BigRational::from_integer(BigInt::from(1));
    let log_theta = LieElement::log_binomial(2, LatticeVector::new(1, 0), 1, one)?;
    let grid = Grid::new(257, 1.0)?;
    let hbars = [0.2, 0.1, 0.05];
    let rows = single_wall_sweep(&log_theta, 2, &hbars, &grid)?;
    let mut out = String::from("hbar    sup|phi - LogTheta| on K+    sup|phi| on K-\n");
    for r in &rows {
        out.push_str(&format!("{:<7} {:<28.3e} {:.3e}\n", r.hbar, r.sup_error_plus, r.sup_error_minus));
    }
    let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.hbar, r.sup_error_plus)).collect();
    out.push_str(&format!("fitted exponent: {:.3}\n", convergence_rate(&samples)?));
    let run = single_wall_gauge(&log_theta, 0.05, 2, &grid)?;
    out.push_str(&format!("plateaus at hbar = 0.05: phi_1 = {:.6}, phi_2 = {:.6}\n", run.plateau(1, 1), run.plateau(2, 2)));
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
