//! Brackets, Baker-Campbell-Hausdorff products and the action of the tropical vertex group.

use num_bigint::BigInt;
use num_rational::BigRational;
use scatter_core::lattice::{DualVector, LatticeVector};
use scatter_core::series::TruncatedSeries;
use scatter_core::tropical::{group_equal, GroupElement, LieElement};

pub fn run_example() -> scatter_core::Result<String> {
    let one = BigRational::from_integer(BigInt::from(1));
    let mut x = LieElement::zero(3);
    x.add_term(one.clone(), LatticeVector::new(1, 0), DualVector::new(0, 1), 1)?;
    let mut y = LieElement::zero(3);
    y.add_term(one.clone(), LatticeVector::new(0, 1), DualVector::new(-1, 0), 1)?;

    let mut out = String::new();
    out.push_str(&format!("[x, y]        = {}\n", x.try_bracket(&y)?));
    out.push_str(&format!("bch(x, y)     = {}\n", x.try_bch(&y)?));

    let gx = GroupElement::exp(x);
    let gy = GroupElement::exp(y);
    let f = TruncatedSeries::monomial(3, LatticeVector::new(0, 1), 0, one);
    out.push_str(&format!("exp(x) z^(0,1) = {}\n", gx.apply(&f)?));
    let xy = gx.compose(&gy)?;
    let yx = gy.compose(&gx)?;
    out.push_str(&format!("exp(x)exp(y) == exp(y)exp(x): {}\n", group_equal(&xy, &yx)?));
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
