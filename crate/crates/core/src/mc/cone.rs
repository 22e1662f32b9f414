//! Polyhedral cones and their standard-Gaussian measure.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::mc::trees::{InputPair, Tree};

/// A cone in `R^dim` generated by one-sided rays and two-sided lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    pub dim: usize,
    pub generators: Vec<DVector<f64>>,
    pub two_sided: Vec<bool>,
}

impl Cone {
    /// Cone spanned by nonnegative combinations of the given vectors.
    pub fn new(generators: Vec<DVector<f64>>) -> Result<Self> {
        let dim = generators.first().map_or(0, |g| g.len());
        let n = generators.len();
        Self::with_lines(dim, generators, vec![false; n])
    }

    pub fn with_lines(dim: usize, generators: Vec<DVector<f64>>, two_sided: Vec<bool>) -> Result<Self> {
        if generators.len() != two_sided.len() {
            return Err(Error::DegenerateCone("one flag per generator is required".into()));
        }
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DegenerateCone(format!("generator of length {} in dimension {dim}", g.len())));
            }
            if !g.iter().all(|x| x.is_finite()) || g.norm() == 0.0 {
                return Err(Error::DegenerateCone("generators must be finite and nonzero".into()));
            }
        }
        Ok(Cone { dim, generators, two_sided })
    }

    /// The nonnegative orthant of `R^k`.
    pub fn orthant(k: usize) -> Self {
        let generators = (0..k).map(|i| DVector::from_fn(k, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
        Cone { dim: k, generators, two_sided: vec![false; k] }
    }

    /// Image under a linear map.
    pub fn transform(&self, a: &DMatrix<f64>) -> Self {
        Cone {
            dim: a.nrows(),
            generators: self.generators.iter().map(|g| a * g).collect(),
            two_sided: self.two_sided.clone(),
        }
    }
}

/// Integration scheme for the Gaussian measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Closed forms up to dimension three, tensor Gauss-Legendre beyond.
    Quadrature { nodes: usize, target: f64 },
    /// Randomised sequential-conditioning estimator with a seeded generator.
    MonteCarlo { samples: usize, seed: u64, target: f64 },
}

impl Method {
    pub fn quadrature() -> Self {
        Method::Quadrature { nodes: 24, target: 1e-6 }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Method::MonteCarlo { samples, seed, target: 1e-3 }
    }

    /// The same method with twice the budget.
    pub fn doubled(&self) -> Self {
        match *self {
            Method::Quadrature { nodes, target } => Method::Quadrature { nodes: 2 * nodes, target },
            Method::MonteCarlo { samples, seed, target } => Method::MonteCarlo { samples: 2 * samples, seed, target },
        }
    }
}

/// Estimated measure with an error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measure {
    pub value: f64,
    pub error: f64,
    /// Whether the error bound met the method's target.
    pub converged: bool,
}

const RANK_TOL: f64 = 1e-10;

fn exact(value: f64) -> Measure {
    Measure { value, error: 1e-15, converged: true }
}

fn rank(vs: &[DVector<f64>], dim: usize) -> usize {
    if vs.is_empty() || dim == 0 {
        return 0;
    }
    let m = DMatrix::from_columns(vs);
    let sv = m.singular_values();
    let top = sv.max();
    sv.iter().filter(|s| **s > RANK_TOL * top.max(1.0)).count()
}

/// Orthonormal basis of the orthogonal complement of `span(lines)` in `R^dim`.
fn complement_basis(lines: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    if lines.is_empty() {
        return DMatrix::identity(dim, dim);
    }
    let a = DMatrix::from_columns(lines);
    let pinv = a.clone().pseudo_inverse(RANK_TOL).expect("pseudo-inverse of a finite matrix");
    let proj = DMatrix::identity(dim, dim) - &a * pinv;
    let eig = SymmetricEigen::new(proj);
    let cols: Vec<DVector<f64>> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .filter(|(l, _)| **l > 0.5)
        .map(|(_, v)| v.into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Standard-Gaussian measure of a cone: the normalised solid angle.
pub fn gaussian_cone_measure(cone: &Cone, method: &Method) -> Result<Measure> {
    gaussian_cone_measure_on_stream(cone, method, 0)
}

/// As [`gaussian_cone_measure`], drawing Monte Carlo samples from the given generator stream.
pub fn gaussian_cone_measure_on_stream(cone: &Cone, method: &Method, stream: u64) -> Result<Measure> {
    let dim = cone.dim;
    if rank(&cone.generators, dim) < dim {
        return Ok(exact(0.0));
    }
    let mut lines: Vec<DVector<f64>> =
        cone.generators.iter().zip(&cone.two_sided).filter(|(_, t)| **t).map(|(g, _)| g.clone()).collect();
    let mut rays: Vec<DVector<f64>> =
        cone.generators.iter().zip(&cone.two_sided).filter(|(_, t)| !**t).map(|(g, _)| g.clone()).collect();
    let mut basis;
    loop {
        basis = complement_basis(&lines, dim);
        let projected: Vec<DVector<f64>> = rays.iter().map(|g| basis.transpose() * g).collect();
        let mut keep = vec![true; rays.len()];
        let mut merged = false;
        for i in 0..rays.len() {
            if projected[i].norm() <= RANK_TOL * rays[i].norm().max(1.0) {
                keep[i] = false;
                continue;
            }
            for j in (i + 1)..rays.len() {
                if !keep[i] || !keep[j] {
                    continue;
                }
                let (a, b) = (&projected[i], &projected[j]);
                let c = a.dot(b) / (a.norm() * b.norm());
                if c < -1.0 + 1e-12 {
                    lines.push(rays[i].clone());
                    keep[i] = false;
                    keep[j] = false;
                    merged = true;
                }
            }
        }
        rays = rays.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
        if !merged {
            break;
        }
    }
    let r = basis.ncols();
    let g: Vec<DVector<f64>> = rays.iter().map(|v| basis.transpose() * v).collect();
    if g.len() > r {
        return Err(Error::DegenerateCone(format!("{} rays in a {r}-dimensional quotient is not simplicial", g.len())));
    }
    if g.len() < r || rank(&g, r) < r {
        return Ok(exact(0.0));
    }
    match (r, method) {
        (0, _) => Ok(exact(1.0)),
        (1, _) => Ok(exact(0.5)),
        (2, Method::Quadrature { .. }) => {
            let c = g[0].dot(&g[1]) / (g[0].norm() * g[1].norm());
            Ok(exact(c.clamp(-1.0, 1.0).acos() / (2.0 * PI)))
        }
        (3, Method::Quadrature { .. }) => Ok(exact(solid_angle(&g[0], &g[1], &g[2]) / (4.0 * PI))),
        (_, Method::Quadrature { nodes, target }) => {
            let chol = conditioning_factor(&g)?;
            let fine = tensor_legendre(&chol, *nodes);
            let coarse = tensor_legendre(&chol, (*nodes / 2).max(2));
            let error = (fine - coarse).abs().max(1e-15);
            Ok(Measure { value: fine, error, converged: error <= *target })
        }
        (_, Method::MonteCarlo { samples, seed, target }) => {
            let chol = conditioning_factor(&g)?;
            let (value, se) = genz_monte_carlo(&chol, *samples, *seed, stream);
            let error = (3.0 * se).max(1e-15);
            Ok(Measure { value, error, converged: error <= *target })
        }
    }
}

/// Solid angle of the simplicial cone on three vectors.
fn solid_angle(a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
    let m = DMatrix::from_columns(&[a.clone(), b.clone(), c.clone()]);
    let triple = m.determinant().abs();
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    2.0 * triple.atan2(den)
}

/// Cholesky factor of the covariance of the cone coordinates `G^{-1} X`.
fn conditioning_factor(g: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let gm = DMatrix::from_columns(g);
    let gram = gm.transpose() * &gm;
    let cov = gram.try_inverse().ok_or_else(|| Error::DegenerateCone("singular generator matrix".into()))?;
    let chol = cov.cholesky().ok_or_else(|| Error::DegenerateCone("covariance is not positive definite".into()))?;
    Ok(chol.l())
}

/// Probability that the correlated coordinates are all nonnegative, given the
/// uniforms driving the first `r - 1` conditional draws.
fn genz_integrand(l: &DMatrix<f64>, w: &[f64], y: &mut [f64], normal: &Normal) -> f64 {
    let r = l.nrows();
    let mut prod = 1.0;
    for i in 0..r {
        let s: f64 = (0..i).map(|j| l[(i, j)] * y[j]).sum();
        let lower = normal.cdf(-s / l[(i, i)]);
        let f = 1.0 - lower;
        prod *= f;
        if prod == 0.0 {
            return 0.0;
        }
        if i + 1 < r {
            let u = (lower + w[i] * f).clamp(1e-300, 1.0 - 1e-16);
            y[i] = normal.inverse_cdf(u);
        }
    }
    prod
}

/// Gauss-Legendre nodes and weights on `[0, 1]` from the Jacobi matrix eigenproblem.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(x, v)| ((1.0 + x) / 2.0, v[0] * v[0]))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn tensor_legendre(l: &DMatrix<f64>, n: usize) -> f64 {
    let r = l.nrows();
    let d = r - 1;
    let (x, wts) = gauss_legendre(n);
    let normal = Normal::standard();
    let mut idx = vec![0usize; d];
    let mut w = vec![0.0; d];
    let mut y = vec![0.0; r];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            w[k] = x[i];
            weight *= wts[i];
        }
        total += weight * genz_integrand(l, &w, &mut y, &normal);
        let mut k = 0;
        loop {
            if k == d {
                return total;
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn genz_monte_carlo(l: &DMatrix<f64>, samples: usize, seed: u64, stream: u64) -> (f64, f64) {
    let r = l.nrows();
    let normal = Normal::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut w = vec![0.0; r - 1];
    let mut y = vec![0.0; r];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        for x in w.iter_mut() {
            *x = rng.gen::<f64>();
        }
        let f = genz_integrand(l, &w, &mut y, &normal);
        sum += f;
        sum_sq += f * f;
    }
    let n = samples.max(1) as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// Cone swept by the flow coordinates of a tree, written in the leaves' wall coordinates.
///
/// Coordinates: the root is reached from the path point by a two-sided flow
/// along its mode, the path parameter is two-sided, and every internal edge
/// below the root contributes a one-sided flow time. `path_sign = -1`
/// traverses the path backwards.
pub fn cone_of_tree(tree: &Tree, inputs: &InputPair, path_sign: i8) -> Result<Cone> {
    let leaves = tree.leaves();
    let k = leaves.len();
    let mut mode = [0i64; 2];
    for l in &leaves {
        let m = inputs.direction(l.input).scale(l.k as i64);
        mode[0] += m.x;
        mode[1] += m.y;
    }
    let m_t = [mode[0] as f64, mode[1] as f64];
    let tangent = [m_t[1] * path_sign as f64, -m_t[0] * path_sign as f64];
    let column = |v: [f64; 2], range: std::ops::Range<usize>| {
        DVector::from_fn(k, |i, _| if range.contains(&i) { inputs.eta(leaves[i].input, v) } else { 0.0 })
    };
    let mut generators = vec![column(m_t, 0..k), column(tangent, 0..k)];
    let mut two_sided = vec![true, true];
    fn internal(t: &Tree, start: usize, inputs: &InputPair, out: &mut Vec<(usize, usize, [f64; 2])>) -> usize {
        match t {
            Tree::Leaf(_) => 1,
            Tree::Node(a, b) => {
                let na = internal(a, start, inputs, out);
                let nb = internal(b, start + na, inputs, out);
                let mut m = [0.0; 2];
                for l in t.leaves() {
                    let v = inputs.direction(l.input).scale(l.k as i64).to_f64();
                    m[0] += v[0];
                    m[1] += v[1];
                }
                out.push((start, start + na + nb, m));
                na + nb
            }
        }
    }
    let mut edges = Vec::new();
    if let Tree::Node(a, b) = tree {
        let na = internal(a, 0, inputs, &mut edges);
        internal(b, na, inputs, &mut edges);
    } else {
        return Cone::with_lines(1, vec![generators.swap_remove(1)], vec![true]);
    }
    for (s, e, m) in edges {
        generators.push(column(m, s..e));
        two_sided.push(false);
    }
    if rank(&generators, k) < k {
        return Err(Error::DegenerateCone(format!("flow map of tree {tree} is not an isomorphism")));
    }
    Cone::with_lines(k, generators, two_sided)
}
