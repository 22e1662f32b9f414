//! Labeled binary trees, their enumeration and bottom-up label propagation.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{det, pairing, primitive_part, DualVector, LatticeVector};
use crate::scattering::{Support, Wall};
use crate::tropical::LieElement;

/// Leaf label: which input wall, which Fourier multiple and which `t`-order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leaf {
    pub input: u8,
    pub k: u32,
    pub j: u32,
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.input, self.k, self.j)
    }
}

/// A binary tree with ordered children, i.e. carrying a ribbon structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Leaf(Leaf),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(a: Tree, b: Tree) -> Tree {
        Tree::Node(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Leaf>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(a, b) => a.num_leaves() + b.num_leaves(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Tree::Leaf(l) => l.j,
            Tree::Node(a, b) => a.degree() + b.degree(),
        }
    }

    /// Name of the unordered tree: children sorted at every vertex.
    pub fn canonical(&self) -> String {
        match self {
            Tree::Leaf(l) => l.to_string(),
            Tree::Node(a, b) => {
                let (x, y) = (a.canonical(), b.canonical());
                if x <= y {
                    format!("[{x},{y}]")
                } else {
                    format!("[{y},{x}]")
                }
            }
        }
    }

    /// Order of the automorphism group of the underlying unordered tree.
    pub fn automorphisms(&self) -> u64 {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(a, b) => {
                let swap = if a.canonical() == b.canonical() { 2 } else { 1 };
                swap * a.automorphisms() * b.automorphisms()
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(l) => write!(f, "{l}"),
            Tree::Node(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// The two initial walls in a positively oriented frame.
#[derive(Clone, Debug)]
pub struct InputPair {
    pub order: u32,
    pub m1: LatticeVector,
    pub m2: LatticeVector,
    pub log1: LieElement,
    pub log2: LieElement,
}

impl InputPair {
    pub fn from_walls(w1: &Wall, w2: &Wall) -> Result<Self> {
        if w1.support() != Support::Line || w2.support() != Support::Line {
            return Err(Error::InvalidWall("initial walls must be full lines".into()));
        }
        if w1.order() != w2.order() {
            return Err(Error::OrderMismatch(w1.order(), w2.order()));
        }
        let (m1, m2) = (w1.direction(), w2.direction());
        if det(m1, m2) <= 0 {
            return Err(Error::InvalidWall(format!("frame ({m1}, {m2}) is not positively oriented")));
        }
        Ok(InputPair { order: w1.order(), m1, m2, log1: w1.log_theta().clone(), log2: w2.log_theta().clone() })
    }

    pub fn direction(&self, input: u8) -> LatticeVector {
        if input == 1 {
            self.m1
        } else {
            self.m2
        }
    }

    fn log(&self, input: u8) -> &LieElement {
        if input == 1 {
            &self.log1
        } else {
            &self.log2
        }
    }

    /// Coefficient of the leaf term against the input's primitive normal.
    pub fn leaf_coefficient(&self, leaf: Leaf) -> BigRational {
        let m = self.direction(leaf.input).scale(leaf.k as i64);
        self.log(leaf.input).basis_coeff(m, leaf.j) * BigRational::from_integer((leaf.k as i64).into())
    }

    /// All leaf labels with a nonzero coefficient, in canonical order.
    pub fn leaf_labels(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        for input in [1u8, 2] {
            let m0 = self.direction(input);
            for (key, c) in self.log(input).basis_terms() {
                if c.is_zero() {
                    continue;
                }
                let k = if m0.x != 0 { key.m.x / m0.x } else { key.m.y / m0.y };
                out.push(Leaf { input, k: k as u32, j: key.j });
            }
        }
        out.sort();
        out
    }

    /// Signed distance to the wall of the given input, in units of length.
    pub fn eta(&self, input: u8, x: [f64; 2]) -> f64 {
        let m = self.direction(input).to_f64();
        (m[0] * x[1] - m[1] * x[0]) / (m[0] * m[0] + m[1] * m[1]).sqrt()
    }
}

/// An ordered tree together with the counts of its unordered class.
#[derive(Clone, Debug)]
pub struct LabeledTree {
    pub tree: Tree,
    pub canonical: String,
    pub ribbon_count: usize,
    pub automorphisms: u64,
}

/// Every ordered tree with leaves from the inputs and total `t`-order at most `n`.
///
/// Trees are listed by degree, then by canonical name, then by ribbon string.
pub fn enumerate_trees(inputs: &InputPair, n: u32) -> Result<Vec<LabeledTree>> {
    if n == 0 {
        return Err(Error::InvalidData("order must be at least 1".into()));
    }
    let labels = inputs.leaf_labels();
    let mut by_degree: Vec<Vec<Tree>> = vec![Vec::new(); n as usize + 1];
    for d in 1..=n as usize {
        let mut level: Vec<Tree> =
            labels.iter().filter(|l| l.j as usize == d).map(|l| Tree::Leaf(*l)).collect();
        for d1 in 1..d {
            let d2 = d - d1;
            for a in &by_degree[d1] {
                for b in &by_degree[d2] {
                    level.push(Tree::node(a.clone(), b.clone()));
                }
            }
        }
        by_degree[d] = level;
    }
    let mut out: Vec<LabeledTree> = Vec::new();
    for level in by_degree.into_iter().skip(1) {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let mut named: Vec<(String, String, Tree)> = level
            .into_iter()
            .map(|t| {
                let c = t.canonical();
                *counts.entry(c.clone()).or_default() += 1;
                (c, t.to_string(), t)
            })
            .collect();
        named.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for (canonical, _, tree) in named {
            let ribbon_count = counts[&canonical];
            let automorphisms = tree.automorphisms();
            let k = tree.num_leaves() as u32;
            if ribbon_count as u64 * automorphisms != 1u64 << (k - 1) {
                return Err(Error::InvalidData(format!(
                    "tree {canonical}: {ribbon_count} ribbon structures but |Aut| = {automorphisms}"
                )));
            }
            out.push(LabeledTree { tree, canonical, ribbon_count, automorphisms });
        }
    }
    Ok(out)
}

/// Support carried by a tree's output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeWall {
    /// A single leaf: the input line itself.
    Line(u8),
    /// The ray `-R_{>=0} m` with primitive `m`.
    Ray(LatticeVector),
    /// Some vertex joined parallel walls.
    Empty,
}

/// Labels propagated from the leaves to the root.
#[derive(Clone, Debug)]
pub struct TreeLabels {
    pub m_t: LatticeVector,
    pub j_t: u32,
    pub n_t: DualVector,
    /// Number of vertices whose children are ordered against the input frame.
    pub chi: u32,
    pub wall: TreeWall,
    /// Product of the leaf coefficients.
    pub leaf_product: BigRational,
}

impl TreeLabels {
    pub fn chi_sign(&self) -> i32 {
        if self.chi.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

struct Partial {
    m: LatticeVector,
    j: u32,
    n: DualVector,
    chi: u32,
    wall: TreeWall,
}

fn propagate_rec(t: &Tree, inputs: &InputPair, frame: i64) -> Partial {
    match t {
        Tree::Leaf(l) => {
            let m0 = inputs.direction(l.input);
            Partial { m: m0.scale(l.k as i64), j: l.j, n: m0.rot90(), chi: 0, wall: TreeWall::Line(l.input) }
        }
        Tree::Node(a, b) => {
            let e1 = propagate_rec(a, inputs, frame);
            let e2 = propagate_rec(b, inputs, frame);
            let m = e1.m + e2.m;
            let n = e2.n.scale(pairing(e2.m, e1.n)) - e1.n.scale(pairing(e1.m, e2.n));
            let orient = det(-e1.m, -e2.m);
            let flip = u32::from(orient != 0 && orient.signum() != frame.signum());
            let wall = if e1.wall == TreeWall::Empty || e2.wall == TreeWall::Empty || orient == 0 {
                TreeWall::Empty
            } else {
                TreeWall::Ray(primitive_part(m).expect("nonzero sum of cone modes").0)
            };
            Partial { m, j: e1.j + e2.j, n, chi: e1.chi + e2.chi + flip, wall }
        }
    }
}

/// Propagates modes, normals, signs and wall support from the leaves to the root.
pub fn propagate(tree: &Tree, inputs: &InputPair) -> Result<TreeLabels> {
    let mut leaf_product = BigRational::from_integer(1.into());
    for l in tree.leaves() {
        let c = inputs.leaf_coefficient(l);
        if c.is_zero() {
            return Err(Error::InvalidData(format!("leaf {l} has no coefficient in the inputs")));
        }
        leaf_product *= c;
    }
    let frame = det(-inputs.m1, -inputs.m2);
    let p = propagate_rec(tree, inputs, frame);
    if pairing(p.m, p.n) != 0 {
        return Err(Error::NotInAlgebra {
            term: format!("z^{} d_{}", p.m, p.n),
            reason: "propagated normal does not annihilate the mode".into(),
        });
    }
    Ok(TreeLabels { m_t: p.m, j_t: p.j, n_t: p.n, chi: p.chi, wall: p.wall, leaf_product })
}
