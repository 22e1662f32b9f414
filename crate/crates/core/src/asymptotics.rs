//! Finite-`hbar` numerics for a single wall and for the first scattered
//! correction of two perpendicular walls.
//!
//! Fields live on a square grid in wall-adapted orthonormal coordinates
//! `(u1, u2)`: `u1` runs along `-m` and `u2` is the signed distance to the wall
//! measured along its primitive normal, so that `H+ = {u2 > 0}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{primitive_part, LatticeVector};
use crate::tropical::LieElement;

/// Prefactor of the `hbar`-scaled derivation `d_n = KAPPA * hbar * <n, grad>`.
pub const KAPPA: f64 = 1.0 / (4.0 * PI);

/// Square grid `[-half_width, half_width]^2` with `n` nodes per side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub half_width: f64,
}

impl Grid {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 5 || !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidData(format!("grid needs at least 5 nodes and positive width, got {n}, {half_width}")));
        }
        Ok(Grid { n, half_width })
    }

    /// The 512 x 512 grid on `[-1, 1]^2`.
    pub fn standard() -> Self {
        Grid { n: 512, half_width: 1.0 }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Flat index of node `(i1, i2)`; rows are constant `u2`.
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i2 * self.n + i1
    }

    pub fn nearest(&self, u: f64) -> usize {
        (((u + self.half_width) / self.spacing()).round().max(0.0) as usize).min(self.n - 1)
    }

    /// Rejects grids that do not resolve the Gaussian width.
    pub fn check_resolution(&self, hbar: f64) -> Result<()> {
        let h = self.spacing();
        let limit = hbar / 4.0;
        if h > limit {
            return Err(Error::GridTooCoarse { spacing: h, limit });
        }
        Ok(())
    }
}

/// Node values of a function or of the two components of a 1-form.
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Scalar(Vec<f64>),
    OneForm { du1: Vec<f64>, du2: Vec<f64> },
}

/// Sampled field on a grid at a given `hbar`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub grid: Grid,
    pub hbar: f64,
    pub values: Values,
}

impl GridField {
    pub fn zero_scalar(grid: Grid, hbar: f64) -> Self {
        GridField { grid, hbar, values: Values::Scalar(vec![0.0; grid.len()]) }
    }

    pub fn zero_form(grid: Grid, hbar: f64) -> Self {
        GridField { grid, hbar, values: Values::OneForm { du1: vec![0.0; grid.len()], du2: vec![0.0; grid.len()] } }
    }

    /// Samples `f(u1, u2)` at every node.
    pub fn from_fn(grid: Grid, hbar: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        GridField { grid, hbar, values: Values::Scalar(sample(&grid, f)) }
    }

    /// Samples the 1-form `a1 du1 + a2 du2`.
    pub fn form_from_fn(
        grid: Grid,
        hbar: f64,
        a1: impl Fn(f64, f64) -> f64,
        a2: impl Fn(f64, f64) -> f64,
    ) -> Self {
        GridField { grid, hbar, values: Values::OneForm { du1: sample(&grid, a1), du2: sample(&grid, a2) } }
    }

    pub fn scalar(&self) -> Option<&[f64]> {
        match &self.values {
            Values::Scalar(v) => Some(v),
            Values::OneForm { .. } => None,
        }
    }

    pub fn form(&self) -> Option<(&[f64], &[f64])> {
        match &self.values {
            Values::OneForm { du1, du2 } => Some((du1, du2)),
            Values::Scalar(_) => None,
        }
    }

    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        match &self.values {
            Values::Scalar(v) => v[self.grid.index(i1, i2)],
            Values::OneForm { du2, .. } => du2[self.grid.index(i1, i2)],
        }
    }

    pub fn max_abs(&self) -> f64 {
        let it: Box<dyn Iterator<Item = &f64>> = match &self.values {
            Values::Scalar(v) => Box::new(v.iter()),
            Values::OneForm { du1, du2 } => Box::new(du1.iter().chain(du2.iter())),
        };
        it.fold(0.0, |a, x| a.max(x.abs()))
    }

    /// Largest `|value - target|` over nodes with `u2` in `[lo, hi]`.
    pub fn sup_deviation(&self, lo: f64, hi: f64, target: f64) -> f64 {
        let g = self.grid;
        let mut sup: f64 = 0.0;
        for i2 in 0..g.n {
            let u2 = g.coord(i2);
            if u2 < lo || u2 > hi {
                continue;
            }
            for i1 in 0..g.n {
                sup = sup.max((self.at(i1, i2) - target).abs());
            }
        }
        sup
    }

    /// Discrete exterior derivative of a 1-form, `d a2/du1 - d a1/du2`.
    pub fn curl(&self) -> Option<Vec<f64>> {
        let (a1, a2) = self.form()?;
        let d1 = derivative(&self.grid, a2, Axis::U1);
        let d2 = derivative(&self.grid, a1, Axis::U2);
        Some(d1.iter().zip(&d2).map(|(x, y)| x - y).collect())
    }
}

fn sample(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut v = vec![0.0; grid.len()];
    for i2 in 0..grid.n {
        let u2 = grid.coord(i2);
        for i1 in 0..grid.n {
            v[grid.index(i1, i2)] = f(grid.coord(i1), u2);
        }
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Axis {
    U1,
    U2,
}

/// Fourth-order central differences inside, second order next to the boundary.
fn derivative(grid: &Grid, v: &[f64], axis: Axis) -> Vec<f64> {
    let n = grid.n;
    let h = grid.spacing();
    let mut out = vec![0.0; v.len()];
    let at = |i: usize, j: usize| match axis {
        Axis::U1 => v[grid.index(j, i)],
        Axis::U2 => v[grid.index(i, j)],
    };
    for i in 0..n {
        for j in 0..n {
            let d = if j >= 2 && j + 2 < n {
                (at(i, j - 2) - 8.0 * at(i, j - 1) + 8.0 * at(i, j + 1) - at(i, j + 2)) / (12.0 * h)
            } else if j >= 1 && j + 1 < n {
                (at(i, j + 1) - at(i, j - 1)) / (2.0 * h)
            } else if j == 0 {
                (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * h)
            } else {
                (3.0 * at(i, j) - 4.0 * at(i, j - 1) + at(i, j - 2)) / (2.0 * h)
            };
            let k = match axis {
                Axis::U1 => grid.index(j, i),
                Axis::U2 => grid.index(i, j),
            };
            out[k] = d;
        }
    }
    out
}

/// Gaussian density `(pi hbar)^(-1/2) exp(-u^2 / hbar)`.
pub fn gaussian(u: f64, hbar: f64) -> f64 {
    (-u * u / hbar).exp() / (PI * hbar).sqrt()
}

/// The delta form `(pi hbar)^(-1/2) exp(-u2^2 / hbar) du2` of the wall with direction `m`.
pub fn delta_form(m: LatticeVector, hbar: f64, grid: &Grid) -> Result<GridField> {
    let (_, k) = primitive_part(m)?;
    if k != 1 {
        return Err(Error::InvalidWall(format!("direction {m} is not primitive")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidData(format!("hbar must be positive, got {hbar}")));
    }
    grid.check_resolution(hbar)?;
    Ok(GridField::form_from_fn(*grid, hbar, |_, _| 0.0, |_, u2| gaussian(u2, hbar)))
}

/// Default base point of the homotopy paths, deep in `H-`.
pub const BASE_POINT: [f64; 2] = [0.0, -0.95];

/// Integral of a 1-form along the path from the base point that first moves
/// along `u1` and then along `u2`, evaluated at every node by cumulative
/// trapezoid sums.
pub fn homotopy_apply(field: &GridField) -> Result<GridField> {
    homotopy_apply_from(field, BASE_POINT)
}

pub fn homotopy_apply_from(field: &GridField, base: [f64; 2]) -> Result<GridField> {
    let (a1, a2) = field.form().ok_or_else(|| Error::InvalidData("homotopy needs a 1-form".into()))?;
    let g = field.grid;
    Ok(GridField { grid: g, hbar: field.hbar, values: Values::Scalar(path_integral(&g, a1, a2, base)) })
}

fn path_integral(g: &Grid, a1: &[f64], a2: &[f64], base: [f64; 2]) -> Vec<f64> {
    let n = g.n;
    let h = g.spacing();
    let (q1, q2) = (g.nearest(base[0]), g.nearest(base[1]));
    let mut row = vec![0.0; n];
    for i1 in (q1 + 1)..n {
        row[i1] = row[i1 - 1] + 0.5 * h * (a1[g.index(i1 - 1, q2)] + a1[g.index(i1, q2)]);
    }
    for i1 in (0..q1).rev() {
        row[i1] = row[i1 + 1] - 0.5 * h * (a1[g.index(i1, q2)] + a1[g.index(i1 + 1, q2)]);
    }
    let mut out = vec![0.0; g.len()];
    for i1 in 0..n {
        out[g.index(i1, q2)] = row[i1];
        for i2 in (q2 + 1)..n {
            out[g.index(i1, i2)] =
                out[g.index(i1, i2 - 1)] + 0.5 * h * (a2[g.index(i1, i2 - 1)] + a2[g.index(i1, i2)]);
        }
        for i2 in (0..q2).rev() {
            out[g.index(i1, i2)] =
                out[g.index(i1, i2 + 1)] - 0.5 * h * (a2[g.index(i1, i2)] + a2[g.index(i1, i2 + 1)]);
        }
    }
    out
}

/// Trapezoid integral of a sampled 1-form along a straight segment, with
/// bilinear interpolation between nodes.
pub fn segment_integral(field: &GridField, a: [f64; 2], b: [f64; 2], steps: usize) -> Result<f64> {
    let (f1, f2) = field.form().ok_or_else(|| Error::InvalidData("segment integral needs a 1-form".into()))?;
    let g = field.grid;
    let w = g.half_width + 1e-12;
    if [a[0], a[1], b[0], b[1]].iter().any(|c| c.abs() > w) {
        return Err(Error::InvalidData("segment leaves the grid".into()));
    }
    let steps = steps.max(1);
    let (d1, d2) = (b[0] - a[0], b[1] - a[1]);
    let mut total = 0.0;
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let (u1, u2) = (a[0] + t * d1, a[1] + t * d2);
        let v = interpolate(&g, f1, u1, u2) * d1 + interpolate(&g, f2, u1, u2) * d2;
        let wgt = if s == 0 || s == steps { 0.5 } else { 1.0 };
        total += wgt * v;
    }
    Ok(total / steps as f64)
}

fn interpolate(g: &Grid, v: &[f64], u1: f64, u2: f64) -> f64 {
    let h = g.spacing();
    let x = ((u1 + g.half_width) / h).clamp(0.0, (g.n - 1) as f64);
    let y = ((u2 + g.half_width) / h).clamp(0.0, (g.n - 1) as f64);
    let (i, j) = ((x.floor() as usize).min(g.n - 2), (y.floor() as usize).min(g.n - 2));
    let (fx, fy) = (x - i as f64, y - j as f64);
    let c = |a: usize, b: usize| v[g.index(a, b)];
    (1.0 - fx) * (1.0 - fy) * c(i, j) + fx * (1.0 - fy) * c(i + 1, j) + (1.0 - fx) * fy * c(i, j + 1) + fx * fy * c(i + 1, j + 1)
}

type Form = (Vec<f64>, Vec<f64>);

/// Gauge fields `phi_(j,k)`, one scalar per `t`-order `j` and Fourier multiple `k`.
#[derive(Clone, Debug)]
pub struct GaugeRun {
    pub grid: Grid,
    pub hbar: f64,
    pub order: u32,
    pub direction: LatticeVector,
    /// Wall coefficients against the primitive normal, keyed like the fields.
    pub coefficients: BTreeMap<(u32, i64), f64>,
    pub fields: BTreeMap<(u32, i64), GridField>,
}

/// Lower edge of the compact set in `H+` on which plateaus are measured.
pub const K_PLUS: f64 = 0.8;
/// Upper edge of the compact set in `H-` used for decay checks.
pub const K_MINUS: f64 = -0.6;

/// Iterates the gauge recursion
/// `phi_(s+1) = -H(Pi + sum_k ad_(phi^s)^k / (k+1)! d phi^s)_(s+1)`
/// with `Pi = -delta * Log Theta`, up to `t`-order `n`.
pub fn single_wall_gauge(log_theta: &LieElement, hbar: f64, n: u32, grid: &Grid) -> Result<GaugeRun> {
    if n > log_theta.order() {
        return Err(Error::IterationOrder { requested: n, order: log_theta.order() });
    }
    let mut direction = None;
    let mut coefficients = BTreeMap::new();
    for (key, _) in log_theta.basis_terms() {
        let (m0, k) = primitive_part(key.m)?;
        match direction {
            None => direction = Some(m0),
            Some(d) if d != m0 => {
                return Err(Error::InvalidWall(format!("modes along {d} and {m0} in a single-wall input")));
            }
            _ => {}
        }
        let a = log_theta.coeff_along(key.m, key.j, m0.rot90()).to_f64().unwrap_or(f64::NAN);
        coefficients.insert((key.j, k), a);
    }
    let direction = direction.unwrap_or(LatticeVector::new(1, 0));
    let delta = delta_form(direction, hbar, grid)?;
    let (_, gauss) = delta.form().expect("delta is a 1-form");
    let g = *grid;
    let scale = KAPPA * hbar * (direction.norm_sq() as f64).sqrt();

    let mut phi: BTreeMap<(u32, i64), Vec<f64>> = BTreeMap::new();
    for s in 0..n {
        let target = s + 1;
        let mut rhs: BTreeMap<(u32, i64), Form> = BTreeMap::new();
        for (&(j, k), &a) in &coefficients {
            if j == target {
                rhs.insert((j, k), (vec![0.0; g.len()], gauss.iter().map(|x| -a * x).collect()));
            }
        }
        let dphi: BTreeMap<(u32, i64), Form> = phi
            .iter()
            .map(|(key, f)| (*key, (derivative(&g, f, Axis::U1), derivative(&g, f, Axis::U2))))
            .collect();
        let grads: BTreeMap<(u32, i64), Vec<f64>> =
            phi.iter().map(|(key, f)| (*key, derivative(&g, f, Axis::U2))).collect();
        let mut cur = dphi;
        let mut factorial = 1.0;
        for kk in 1..=s {
            cur = ad(&g, &phi, &grads, &cur, scale, target);
            factorial *= (kk + 1) as f64;
            for (key, (c1, c2)) in &cur {
                if key.0 == target {
                    let e = rhs.entry(*key).or_insert_with(|| (vec![0.0; g.len()], vec![0.0; g.len()]));
                    for i in 0..g.len() {
                        e.0[i] += c1[i] / factorial;
                        e.1[i] += c2[i] / factorial;
                    }
                }
            }
        }
        for (key, (r1, r2)) in rhs {
            let mut f = path_integral(&g, &r1, &r2, BASE_POINT);
            f.iter_mut().for_each(|x| *x = -*x);
            phi.insert(key, f);
        }
    }
    let fields = phi
        .into_iter()
        .map(|(key, v)| (key, GridField { grid: g, hbar, values: Values::Scalar(v) }))
        .collect();
    Ok(GaugeRun { grid: g, hbar, order: n, direction, coefficients, fields })
}

/// `[phi, beta]` for a 0-form `phi` and 1-form `beta` along a single wall:
/// only the derivation pieces `phi d_n beta - beta d_n phi` survive.
fn ad(
    g: &Grid,
    phi: &BTreeMap<(u32, i64), Vec<f64>>,
    grads: &BTreeMap<(u32, i64), Vec<f64>>,
    beta: &BTreeMap<(u32, i64), Form>,
    scale: f64,
    max_order: u32,
) -> BTreeMap<(u32, i64), Form> {
    let mut out: BTreeMap<(u32, i64), Form> = BTreeMap::new();
    for (&(j1, k1), f) in phi {
        let df = &grads[&(j1, k1)];
        for (&(j2, k2), (b1, b2)) in beta {
            if j1 + j2 > max_order {
                continue;
            }
            let db1 = derivative(g, b1, Axis::U2);
            let db2 = derivative(g, b2, Axis::U2);
            let e = out.entry((j1 + j2, k1 + k2)).or_insert_with(|| (vec![0.0; g.len()], vec![0.0; g.len()]));
            for i in 0..g.len() {
                e.0[i] += scale * (f[i] * db1[i] - b1[i] * df[i]);
                e.1[i] += scale * (f[i] * db2[i] - b2[i] * df[i]);
            }
        }
    }
    out
}

/// Sup errors of the gauge against its step-function limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeErrors {
    /// `sup |phi - Log Theta|` over `u2 >= K_PLUS`, maximised over components.
    pub plus: f64,
    /// `sup |phi|` over `u2 <= K_MINUS`.
    pub minus: f64,
}

impl GaugeRun {
    pub fn field(&self, j: u32, k: i64) -> Option<&GridField> {
        self.fields.get(&(j, k))
    }

    /// Value of a component at the centre of the `H+` compact set.
    pub fn plateau(&self, j: u32, k: i64) -> f64 {
        let g = self.grid;
        self.field(j, k).map_or(0.0, |f| f.at(g.nearest(0.0), g.nearest(0.9)))
    }

    pub fn errors(&self) -> GaugeErrors {
        let mut e = GaugeErrors { plus: 0.0, minus: 0.0 };
        for (key, f) in &self.fields {
            let a = self.coefficients.get(key).copied().unwrap_or(0.0);
            e.plus = e.plus.max(f.sup_deviation(K_PLUS, f64::INFINITY, a));
            e.minus = e.minus.max(f.sup_deviation(f64::NEG_INFINITY, K_MINUS, 0.0));
        }
        e
    }
}

/// One row of an `hbar` sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub hbar: f64,
    pub sup_error_plus: f64,
    pub sup_error_minus: f64,
}

/// Runs the gauge recursion for every `hbar`, in parallel, keeping the input order.
pub fn single_wall_sweep(log_theta: &LieElement, n: u32, hbars: &[f64], grid: &Grid) -> Result<Vec<SweepRow>> {
    hbars
        .par_iter()
        .map(|&hbar| {
            let e = single_wall_gauge(log_theta, hbar, n, grid)?.errors();
            Ok(SweepRow { hbar, sup_error_plus: e.plus, sup_error_minus: e.minus })
        })
        .collect()
}

/// Least-squares slope of `log(error)` against `log(hbar)`.
pub fn convergence_rate(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InvalidData("at least three samples are needed".into()));
    }
    if samples.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::InvalidData("hbar values must be strictly decreasing".into()));
    }
    if samples.iter().any(|(h, e)| !(h.is_finite() && *h > 0.0 && e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidData("hbar and errors must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Setup of the first correction for the two standard perpendicular walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoWallConfig {
    /// Leading coefficients of the two input walls.
    pub a1: f64,
    pub a2: f64,
    /// Distance from the joint at which the path crosses the ray.
    pub crossing: f64,
    /// Polar angle of the centre of the unit disc `U`, which sits at distance 1/2 from the joint.
    pub base_angle: f64,
    /// Quadrature steps per unit length.
    pub resolution: usize,
}

impl Default for TwoWallConfig {
    fn default() -> Self {
        TwoWallConfig { a1: 1.0, a2: 1.0, crossing: 0.4, base_angle: PI / 4.0 + 0.1, resolution: 400 }
    }
}

/// Integral across the `(1,1)` ray of the leading 2-tree contribution
/// `alpha_T = H[delta_1 a1, delta_2 a2]` for walls along `(1,0)` and `(0,1)`.
///
/// The path `rho(t) = p0 + t d` crosses the ray at `p0 = -c m_hat`; the flow of
/// `-m_T` sweeps the points `rho(t) + s m_hat` with `s >= 0`, and everything is
/// restricted to the unit disc `U`. The derivation pieces are evaluated by
/// central differences and projected onto the normal `n_T`.
pub fn two_wall_first_correction(hbar: f64, cfg: &TwoWallConfig) -> Result<f64> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidData(format!("hbar must be positive, got {hbar}")));
    }
    if cfg.a1 == 0.0 || cfg.a2 == 0.0 {
        return Ok(0.0);
    }
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let m_hat = [s2, s2];
    let d = [s2, -s2];
    let p0 = [-cfg.crossing * m_hat[0], -cfg.crossing * m_hat[1]];
    let x0 = [-0.5 * cfg.base_angle.cos(), -0.5 * cfg.base_angle.sin()];
    // walls: (1,0) with eta1 = -y and normal n1 = (0,1); (0,1) with eta2 = x and n2 = (-1,0)
    let n1 = [0.0, 1.0];
    let n2 = [-1.0, 0.0];
    let n_t = [-1.0, 1.0];
    let kh = KAPPA * hbar;
    let step = 1.0 / cfg.resolution as f64;
    let eps = 1e-4 * hbar.sqrt();
    let g1 = |x: [f64; 2]| gaussian(-x[1], hbar);
    let g2 = |x: [f64; 2]| gaussian(x[0], hbar);
    let dir = |f: &dyn Fn([f64; 2]) -> f64, x: [f64; 2], v: [f64; 2]| {
        (f([x[0] + eps * v[0], x[1] + eps * v[1]]) - f([x[0] - eps * v[0], x[1] - eps * v[1]])) / (2.0 * eps)
    };
    let n_s = (2.0 / step).ceil() as i64;
    let n_t_steps = (1.5 / step).ceil() as i64;
    let mut total = 0.0;
    for is in 0..=n_s {
        let s = is as f64 * step;
        let ws = if is == 0 || is == n_s { 0.5 } else { 1.0 };
        for it in -n_t_steps..=n_t_steps {
            let t = it as f64 * step;
            let x = [p0[0] + t * d[0] + s * m_hat[0], p0[1] + t * d[1] + s * m_hat[1]];
            let r = [x[0] - x0[0], x[1] - x0[1]];
            if r[0] * r[0] + r[1] * r[1] > 1.0 {
                continue;
            }
            let wt = if it == -n_t_steps || it == n_t_steps { 0.5 } else { 1.0 };
            // dη1 ∧ dη2 pulled back to (s, t) has unit Jacobian in this orthonormal setup
            let main = g1(x) * g2(x);
            let sharp = g1(x) * kh * dir(&g2, x, n1);
            let flat = g2(x) * kh * dir(&g1, x, n2);
            let vector = [main * n_t[0] + sharp * n2[0] - flat * n1[0], main * n_t[1] + sharp * n2[1] - flat * n1[1]];
            let along = (vector[0] * n_t[0] + vector[1] * n_t[1]) / 2.0;
            total += ws * wt * along;
        }
    }
    Ok(cfg.a1 * cfg.a2 * total * step * step)
}

/// CSV table of a sweep with one row per `(hbar, region)`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("hbar,sup_error,region\n");
    for r in rows {
        s.push_str(&format!("{},{:e},plus\n", r.hbar, r.sup_error_plus));
        s.push_str(&format!("{},{:e},minus\n", r.hbar, r.sup_error_minus));
    }
    s
}
