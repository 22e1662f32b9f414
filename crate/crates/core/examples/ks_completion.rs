//! Order-by-order completion of two line walls and the consistency check.

use scatter_core::scattering::{diagrams_equivalent, ks_complete, ks_complete_with, standard_pair, InsertionOrder};
use scatter_core::svg::diagram_svg;

pub fn run_example() -> scatter_core::Result<String> {
    let mut out = String::new();
    let (w1, w2) = standard_pair(6, 1)?;
    let simple = ks_complete(&w1, &w2, 6)?;
    out.push_str("log(1 + t x), log(1 + t y) at order 6:\n");
    for w in simple.walls() {
        out.push_str(&format!("  {w}\n"));
    }
    out.push_str(&format!("  consistent: {}\n", simple.is_consistent()?));

    let (d1, d2) = standard_pair(4, 2)?;
    let asc = ks_complete_with(&d1, &d2, 4, InsertionOrder::Ascending)?;
    let desc = ks_complete_with(&d1, &d2, 4, InsertionOrder::Descending)?;
    out.push_str("2 log(1 + t x), 2 log(1 + t y) at order 4:\n");
    for w in asc.walls() {
        out.push_str(&format!("  {w}\n"));
    }
    out.push_str(&format!("  insertion orders agree: {}\n", diagrams_equivalent(&asc, &desc)?));
    out.push_str(&format!("  svg bytes: {}\n", diagram_svg(&asc).len()));
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
