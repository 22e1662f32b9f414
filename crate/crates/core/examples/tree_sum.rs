//! The sum over labeled trees and its agreement with the completion.

use scatter_core::mc::{enumerate_trees, propagate, verify_against_ks, EvalOptions, InputPair, TreeWall};
use scatter_core::scattering::standard_pair;

pub fn run_example() -> scatter_core::Result<String> {
    let mut out = String::new();
    let (w1, w2) = standard_pair(3, 1)?;
    let inputs = InputPair::from_walls(&w1, &w2)?;
    for t in enumerate_trees(&inputs, 3)? {
        let p = propagate(&t.tree, &inputs)?;
        if let TreeWall::Ray(m) = p.wall {
            out.push_str(&format!(
                "{:<32} m_T={} n_T={} chi={:+} ray {m} |Aut|={}\n",
                t.tree.to_string(),
                p.m_t,
                p.n_t,
                p.chi_sign(),
                t.automorphisms
            ));
        }
    }
    for (n, mult) in [(3, 1), (4, 2)] {
        let (a, b) = standard_pair(n, mult)?;
        let report = verify_against_ks(&a, &b, n, 1e-3, &EvalOptions::default())?;
        out.push_str(&format!(
            "order {n}, multiplicity {mult}: match={} exact={} max_dev={:.2e}\n",
            report.ks_match, report.exact_match, report.max_dev
        ));
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
