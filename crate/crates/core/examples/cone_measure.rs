//! Standard-Gaussian measures of polyhedral cones by closed forms, quadrature and Monte Carlo.

use nalgebra::DVector;
use scatter_core::mc::{gaussian_cone_measure, Cone, Method};

pub fn run_example() -> scatter_core::Result<String> {
    let mut out = String::new();
    let quad = Method::quadrature();
    let mc = Method::monte_carlo(200_000, 7);
    for k in 2..=4 {
        let c = Cone::orthant(k);
        let a = gaussian_cone_measure(&c, &quad)?;
        let b = gaussian_cone_measure(&c, &mc)?;
        out.push_str(&format!("orthant {k}: quadrature {:.8} monte carlo {:.8}\n", a.value, b.value));
    }
    let skew = Cone::new(vec![
        DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0]),
        DVector::from_column_slice(&[1.0, 1.0, 0.0, 0.0]),
        DVector::from_column_slice(&[0.0, 1.0, 1.0, 0.0]),
        DVector::from_column_slice(&[0.3, 0.0, 1.0, 1.0]),
    ])?;
    let a = gaussian_cone_measure(&skew, &quad)?;
    let b = gaussian_cone_measure(&skew, &mc)?;
    out.push_str(&format!("skew 4-cone: quadrature {:.6} +- {:.1e}, monte carlo {:.6} +- {:.1e}\n", a.value, a.error, b.value, b.error));
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
