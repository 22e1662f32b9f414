//! Exact truncated series in lattice monomials: products, logarithms and exponentials.

use num_bigint::BigInt;
use num_rational::BigRational;
use scatter_core::lattice::LatticeVector;
use scatter_core::series::TruncatedSeries;

pub fn run_example() -> scatter_core::Result<String> {
    let one = BigRational::from_integer(BigInt::from(1));
    let x = LatticeVector::new(1, 0);
    let y = LatticeVector::new(0, 1);
    let f = TruncatedSeries::from_terms(4, [(LatticeVector::ZERO, 0, one.clone()), (x, 1, one.clone())]);
    let g = TruncatedSeries::from_terms(4, [(LatticeVector::ZERO, 0, one.clone()), (y, 1, one)]);
    let fg = f.try_mul(&g)?;
    let log = fg.log()?;
    let back = log.exp()?;
    let mut out = String::new();
    out.push_str(&format!("(1 + t x)(1 + t y) = {fg}\n"));
    out.push_str(&format!("log of the product  = {log}\n"));
    out.push_str(&format!("exp(log) recovers the product: {}\n", back == fg));
    out.push_str(&format!("1 / (1 + t x)       = {}\n", f.inv()?));
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
