//! Assembly of the wall factors from tree contributions and the comparison
//! with the order-by-order completion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::RationalJson;
use crate::lattice::{primitive_part, LatticeVector};
use crate::mc::cone::{cone_of_tree, gaussian_cone_measure_on_stream, Measure, Method};
use crate::mc::trees::{enumerate_trees, propagate, InputPair, LabeledTree, TreeWall};
use crate::scattering::{ks_complete, Diagram, Support, Wall};
use crate::series::Monomial;
use crate::tropical::LieElement;

/// Evaluation settings for the tree sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    pub method: Method,
    /// Negative control: flips the orientation sign of every tree.
    pub flip_chi: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { method: Method::quadrature(), flip_chi: false }
    }
}

/// Everything computed for one ordered tree.
#[derive(Clone, Debug)]
pub struct TreeRecord {
    pub tree: String,
    pub canonical: String,
    pub leaves: usize,
    pub automorphisms: u64,
    pub m_t: LatticeVector,
    pub j_t: u32,
    pub n_t: [i64; 2],
    pub chi_sign: i32,
    pub wall: TreeWall,
    pub measure: Measure,
    /// Ribbon weight `1 / 2^(k-1)`.
    pub weight: f64,
    /// Contribution to the coefficient against the ray's primitive normal.
    pub contribution: f64,
    pub error: f64,
}

/// A numerically obtained coefficient and its rational reading, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub value: f64,
    pub error: f64,
    pub snapped: Option<BigRational>,
}

/// Assembled rays keyed by primitive direction, each a map from `(j, m)` to a coefficient.
#[derive(Clone, Debug)]
pub struct WallFactors {
    pub order: u32,
    pub walls: BTreeMap<LatticeVector, BTreeMap<Monomial, Coefficient>>,
    pub trees: Vec<TreeRecord>,
    /// Coefficients that did not snap to a small-denominator rational.
    pub flagged: Vec<String>,
}

const MAX_DENOMINATOR: i64 = 64;
const SNAP_FLOOR: f64 = 1e-9;

/// Smallest-denominator rational within `max(10 * error, floor)` of `value`.
pub fn snap(value: f64, error: f64) -> Option<BigRational> {
    let tol = (10.0 * error).max(SNAP_FLOOR);
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (value * q as f64).round();
        ((value - p / q as f64).abs() <= tol).then(|| BigRational::new(BigInt::from(p as i64), BigInt::from(q)))
    })
}

fn evaluate(index: usize, lt: &LabeledTree, inputs: &InputPair, opts: &EvalOptions) -> Result<TreeRecord> {
    let labels = propagate(&lt.tree, inputs)?;
    let k = lt.tree.num_leaves();
    let weight = 1.0 / (1u64 << (k - 1)) as f64;
    let chi_sign = if opts.flip_chi { -labels.chi_sign() } else { labels.chi_sign() };
    let mut rec = TreeRecord {
        tree: lt.tree.to_string(),
        canonical: lt.canonical.clone(),
        leaves: k,
        automorphisms: lt.automorphisms,
        m_t: labels.m_t,
        j_t: labels.j_t,
        n_t: [labels.n_t.x, labels.n_t.y],
        chi_sign,
        wall: labels.wall,
        measure: Measure { value: 0.0, error: 0.0, converged: true },
        weight,
        contribution: 0.0,
        error: 0.0,
    };
    match labels.wall {
        TreeWall::Line(_) => rec.measure = Measure { value: 1.0, error: 0.0, converged: true },
        TreeWall::Empty => {}
        TreeWall::Ray(m0) => {
            let cone = cone_of_tree(&lt.tree, inputs, 1)?;
            let measure = gaussian_cone_measure_on_stream(&cone, &opts.method, index as u64)?;
            let na = m0.rot90();
            let along = (labels.n_t.x * na.x + labels.n_t.y * na.y) as f64 / na.norm_sq() as f64;
            let leaf = labels.leaf_product.to_f64().unwrap_or(f64::NAN);
            let factor = chi_sign as f64 * leaf * weight * along;
            rec.measure = measure;
            rec.contribution = factor * measure.value;
            rec.error = factor.abs() * measure.error;
        }
    }
    Ok(rec)
}

/// Sums the leading-order tree contributions into ray coefficients.
pub fn assemble_wall_factors(inputs: &InputPair, n: u32, opts: &EvalOptions) -> Result<WallFactors> {
    let inputs = InputPair {
        order: n,
        m1: inputs.m1,
        m2: inputs.m2,
        log1: fit(&inputs.log1, n),
        log2: fit(&inputs.log2, n),
    };
    let trees = enumerate_trees(&inputs, n)?;
    let records: Vec<TreeRecord> =
        trees.par_iter().enumerate().map(|(i, t)| evaluate(i, t, &inputs, opts)).collect::<Result<Vec<_>>>()?;

    let mut sums: BTreeMap<(LatticeVector, Monomial), (f64, f64)> = BTreeMap::new();
    let mut by_class: BTreeMap<(LatticeVector, Monomial), f64> = BTreeMap::new();
    let mut class_value: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for r in &records {
        let TreeWall::Ray(m0) = r.wall else { continue };
        let key = (m0, Monomial::new(r.m_t, r.j_t));
        let e = sums.entry(key).or_insert((0.0, 0.0));
        e.0 += r.contribution;
        e.1 += r.error;
        let unweighted = r.contribution / r.weight;
        let spread = r.error / r.weight;
        match class_value.get(r.canonical.as_str()) {
            Some(&(v, err)) => {
                if (v - unweighted).abs() > 1e-9 * (1.0 + v.abs()) + 10.0 * (err + spread) {
                    return Err(Error::InvalidData(format!(
                        "tree {} depends on its ribbon structure: {v} vs {unweighted}",
                        r.canonical
                    )));
                }
            }
            None => {
                class_value.insert(r.canonical.as_str(), (unweighted, spread));
                *by_class.entry(key).or_insert(0.0) += unweighted / r.automorphisms as f64;
            }
        }
    }

    let mut walls: BTreeMap<LatticeVector, BTreeMap<Monomial, Coefficient>> = BTreeMap::new();
    let mut flagged = Vec::new();
    for ((m0, mono), (value, error)) in sums {
        let aut = by_class.get(&(m0, mono)).copied().unwrap_or(0.0);
        if (aut - value).abs() > 1e-9 * (1.0 + value.abs()) + 10.0 * error {
            return Err(Error::InvalidData(format!(
                "ribbon and automorphism weightings disagree at t^{} z^{}: {value} vs {aut}",
                mono.j, mono.m
            )));
        }
        let snapped = snap(value, error);
        if snapped.as_ref().is_some_and(|q| q.is_zero()) {
            continue;
        }
        if snapped.is_none() {
            flagged.push(format!("t^{} z^{}: {value} +- {error}", mono.j, mono.m));
        }
        walls.entry(m0).or_default().insert(mono, Coefficient { value, error, snapped });
    }
    Ok(WallFactors { order: n, walls, trees: records, flagged })
}

fn fit(x: &LieElement, n: u32) -> LieElement {
    if x.order() >= n {
        x.truncate(n)
    } else {
        x.extend_order(n)
    }
}

impl WallFactors {
    /// The exact diagram read off the snapped coefficients, with the input lines.
    pub fn to_diagram(&self, inputs: &InputPair) -> Result<Diagram> {
        if !self.flagged.is_empty() {
            return Err(Error::InvalidData(format!("unsnapped coefficients: {}", self.flagged.join("; "))));
        }
        let n = self.order;
        let mut walls = vec![
            Wall::new(inputs.m1, Support::Line, fit(&inputs.log1, n))?,
            Wall::new(inputs.m2, Support::Line, fit(&inputs.log2, n))?,
        ];
        for (m0, terms) in &self.walls {
            let mut log = LieElement::zero(n);
            for (mono, c) in terms {
                let q = c.snapped.clone().expect("flagged list is empty");
                log.add_term(q, mono.m, m0.rot90(), mono.j)?;
            }
            walls.push(Wall::new(*m0, Support::Ray, log)?);
        }
        Ok(Diagram::new(n, walls)?.minimize())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub m: [i64; 2],
    pub j: u32,
    pub value: f64,
    pub error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapped: Option<RationalJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxWallJson {
    pub direction: [i64; 2],
    pub support: String,
    pub normal: [i64; 2],
    pub terms: Vec<CoefficientJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerTreeJson {
    pub tree: String,
    #[serde(rename = "m_T")]
    pub m_t: [i64; 2],
    #[serde(rename = "j_T")]
    pub j_t: u32,
    #[serde(rename = "n_T")]
    pub n_t: [i64; 2],
    pub chi: i32,
    pub wall: String,
    pub measure: f64,
    pub error: f64,
    pub contribution: f64,
}

/// Outcome of the wall-by-wall comparison with the completion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub order: u32,
    pub walls: Vec<ApproxWallJson>,
    pub per_tree: Vec<PerTreeJson>,
    pub ks_match: bool,
    pub max_dev: f64,
    /// Whether the snapped diagram equals the completion exactly.
    pub exact_match: bool,
    pub diagnostics: Vec<String>,
}

/// Builds the tree-sum diagram and compares it with the completion.
pub fn verify_against_ks(w1: &Wall, w2: &Wall, n: u32, tol: f64, opts: &EvalOptions) -> Result<VerifyReport> {
    let inputs = InputPair::from_walls(w1, w2)?;
    let ks = ks_complete(w1, w2, n)?;
    let factors = assemble_wall_factors(&inputs, n, opts)?;
    let mut diagnostics = Vec::new();
    let mut max_dev: f64 = 0.0;

    let mut ks_rays: BTreeMap<LatticeVector, &Wall> = BTreeMap::new();
    for w in ks.rays() {
        ks_rays.insert(w.direction(), w);
    }
    for (m0, w) in &ks_rays {
        let mc = factors.walls.get(m0);
        if mc.is_none() {
            diagnostics.push(format!("missing ray {m0}"));
        }
        for (mono, _) in w.log_theta().basis_terms() {
            let exact = w.log_theta().coeff_along(mono.m, mono.j, m0.rot90());
            let approx = mc.and_then(|t| t.get(mono)).map_or(0.0, |c| c.value);
            max_dev = max_dev.max((exact.to_f64().unwrap_or(f64::NAN) - approx).abs());
        }
    }
    for (m0, terms) in &factors.walls {
        let ks_log = ks_rays.get(m0).map(|w| w.log_theta());
        if ks_log.is_none() && terms.values().any(|c| c.value.abs() > tol) {
            diagnostics.push(format!("extra ray {m0}"));
        }
        for (mono, c) in terms {
            if ks_log.is_some_and(|l| !l.basis_coeff(mono.m, mono.j).is_zero()) {
                continue;
            }
            max_dev = max_dev.max(c.value.abs());
        }
    }
    diagnostics.extend(factors.flagged.iter().map(|f| format!("unsnapped {f}")));
    let exact_match = match factors.to_diagram(&inputs) {
        Ok(d) => {
            let mine: Vec<&Wall> = d.rays().collect();
            let theirs: Vec<&Wall> = ks_rays.values().copied().collect();
            mine.len() == theirs.len()
                && theirs.iter().all(|w| mine.iter().any(|x| x.direction() == w.direction() && x == w))
        }
        Err(_) => false,
    };
    let ks_match = max_dev <= tol && diagnostics.is_empty();
    Ok(VerifyReport {
        order: n,
        walls: factors
            .walls
            .iter()
            .map(|(m0, terms)| ApproxWallJson {
                direction: [m0.x, m0.y],
                support: "ray".into(),
                normal: [m0.rot90().x, m0.rot90().y],
                terms: terms
                    .iter()
                    .map(|(mono, c)| CoefficientJson {
                        m: [mono.m.x, mono.m.y],
                        j: mono.j,
                        value: c.value,
                        error: c.error,
                        snapped: c.snapped.as_ref().map(RationalJson::from),
                    })
                    .collect(),
            })
            .collect(),
        per_tree: factors
            .trees
            .iter()
            .map(|r| PerTreeJson {
                tree: r.tree.clone(),
                m_t: [r.m_t.x, r.m_t.y],
                j_t: r.j_t,
                n_t: r.n_t,
                chi: r.chi_sign,
                wall: match r.wall {
                    TreeWall::Line(i) => format!("line{i}"),
                    TreeWall::Ray(m) => format!("ray{m}"),
                    TreeWall::Empty => "empty".into(),
                },
                measure: r.measure.value,
                error: r.measure.error,
                contribution: r.contribution,
            })
            .collect(),
        ks_match,
        max_dev,
        exact_match,
        diagnostics,
    })
}

/// Primitive direction of a mode, for callers holding raw modes.
pub fn ray_of(m: LatticeVector) -> Result<LatticeVector> {
    Ok(primitive_part(m)?.0)
}
