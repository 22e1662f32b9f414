//! Walls and diagrams around a joint at the origin of the plane, path-ordered
//! products along loops, consistency and Kontsevich-Soibelman completion.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::json::{DiagramJson, SupportJson, WallJson};
use crate::lattice::{det, primitive_part, DualVector, LatticeVector};
use crate::tropical::{group_equal, GroupElement, LieElement};

/// Shape of a wall support through the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Support {
    /// The full line spanned by the direction.
    Line,
    /// The half-line `-R_{>=0} * direction`.
    Ray,
}

/// A wall: primitive Fourier direction, support and wall-crossing logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    direction: LatticeVector,
    support: Support,
    log_theta: LieElement,
}

impl Wall {
    pub fn new(direction: LatticeVector, support: Support, log_theta: LieElement) -> Result<Self> {
        let (m0, k) = primitive_part(direction).map_err(|_| Error::InvalidWall("zero direction".into()))?;
        if k != 1 {
            return Err(Error::InvalidWall(format!("direction {direction} is not primitive")));
        }
        for (key, _) in log_theta.basis_terms() {
            let m = key.m;
            if det(m, m0) != 0 || m.x * m0.x + m.y * m0.y <= 0 {
                return Err(Error::InvalidWall(format!(
                    "term with mode {m} is not a positive multiple of the direction {m0}"
                )));
            }
        }
        Ok(Wall { direction, support, log_theta })
    }

    /// Line wall with `log(1 + c t^j z^m)` along the primitive direction of `m`.
    pub fn binomial_line(order: u32, m: LatticeVector, j: u32, c: BigRational) -> Result<Self> {
        let (m0, _) = primitive_part(m)?;
        Wall::new(m0, Support::Line, LieElement::log_binomial(order, m, j, c)?)
    }

    /// Ray wall with `log(1 + c t^j z^m)`.
    pub fn binomial_ray(order: u32, m: LatticeVector, j: u32, c: BigRational) -> Result<Self> {
        let (m0, _) = primitive_part(m)?;
        Wall::new(m0, Support::Ray, LieElement::log_binomial(order, m, j, c)?)
    }

    pub fn direction(&self) -> LatticeVector {
        self.direction
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn log_theta(&self) -> &LieElement {
        &self.log_theta
    }

    pub fn order(&self) -> u32 {
        self.log_theta.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.log_theta.is_zero()
    }

    /// Primitive normal `rot90(direction)`.
    ///
    /// For the initial lines of a positively oriented pair `(m1, m2)` the
    /// oriented normals are `-m2` and `m1`, and the primitive normal pairs
    /// negatively with them. Rays inherit the same rule from the frame.
    pub fn primitive_normal(&self) -> DualVector {
        self.direction.rot90()
    }

    /// Points where the support meets the unit circle, as lattice directions.
    fn hit_directions(&self) -> Vec<LatticeVector> {
        match self.support {
            Support::Line => vec![self.direction, -self.direction],
            Support::Ray => vec![-self.direction],
        }
    }

    fn with_log(&self, log_theta: LieElement) -> Self {
        Wall { direction: self.direction, support: self.support, log_theta }
    }

    pub fn to_json(&self) -> WallJson {
        WallJson {
            direction: [self.direction.x, self.direction.y],
            support: match self.support {
                Support::Line => SupportJson::Line,
                Support::Ray => SupportJson::Ray,
            },
            log_theta: self.log_theta.to_json(),
            normal: Some({
                let n = self.primitive_normal();
                [n.x, n.y]
            }),
        }
    }

    pub fn from_json(js: &WallJson) -> Result<Self> {
        let support = match js.support {
            SupportJson::Line => Support::Line,
            SupportJson::Ray => Support::Ray,
        };
        let wall = Wall::new(LatticeVector::from(js.direction), support, LieElement::from_json(&js.log_theta)?)?;
        if let Some(n) = js.normal {
            let n0 = wall.primitive_normal();
            if !(n == [n0.x, n0.y] || n == [-n0.x, -n0.y]) {
                return Err(Error::InvalidWall(format!(
                    "normal ({},{}) is not a primitive normal of direction {}",
                    n[0], n[1], wall.direction
                )));
            }
        }
        Ok(wall)
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.support {
            Support::Line => "line",
            Support::Ray => "ray",
        };
        write!(f, "{kind} {}: {}", self.direction, self.log_theta)
    }
}

/// A finite set of walls truncated at a common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    order: u32,
    walls: Vec<Wall>,
}

/// One transversal crossing of a loop with a wall.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub wall: usize,
    pub sigma: i8,
    /// Angle of the crossing point, measured anticlockwise from the base angle.
    pub angle: f64,
}

pub type CrossingSequence = Vec<Crossing>;

const ANGLE_EPS: f64 = 1e-12;

/// Default base angle: the direction of `-m1 - m2`, nudged by an irrational offset.
pub fn default_base_angle(m1: LatticeVector, m2: LatticeVector) -> f64 {
    let s = -(m1 + m2);
    let base = if s.is_zero() { 1.25 * PI } else { s.angle() };
    (base + 1e-6 * (5f64.sqrt() - 1.0) / 2.0).rem_euclid(2.0 * PI)
}

impl Diagram {
    pub fn new(order: u32, walls: Vec<Wall>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidData("order must be at least 1".into()));
        }
        for w in &walls {
            if w.order() != order {
                return Err(Error::OrderMismatch(order, w.order()));
            }
        }
        Ok(Diagram { order, walls })
    }

    pub fn empty(order: u32) -> Self {
        Diagram { order, walls: Vec::new() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn push(&mut self, w: Wall) -> Result<()> {
        if w.order() != self.order {
            return Err(Error::OrderMismatch(self.order, w.order()));
        }
        self.walls.push(w);
        Ok(())
    }

    pub fn truncate(&self, n: u32) -> Self {
        Diagram { order: n, walls: self.walls.iter().map(|w| w.with_log(w.log_theta.truncate(n))).collect() }
    }

    pub fn rays(&self) -> impl Iterator<Item = &Wall> {
        self.walls.iter().filter(|w| w.support == Support::Ray)
    }

    /// Crossings of the anticlockwise unit circle starting at `base_angle`.
    pub fn crossings_of_loop(&self, base_angle: f64) -> Result<CrossingSequence> {
        let mut out = Vec::new();
        for (i, w) in self.walls.iter().enumerate() {
            for d in w.hit_directions() {
                let rel = (d.angle() - base_angle).rem_euclid(2.0 * PI);
                if !(ANGLE_EPS..=2.0 * PI - ANGLE_EPS).contains(&rel) {
                    return Err(Error::AngleOnWall(base_angle));
                }
                out.push(Crossing { wall: i, sigma: crossing_sign(d, w.primitive_normal()), angle: rel });
            }
        }
        out.sort_by(|a, b| a.angle.total_cmp(&b.angle).then(a.wall.cmp(&b.wall)));
        Ok(out)
    }

    /// Ordered composition of the crossed factors; later crossings act last.
    pub fn path_ordered_product(&self, crossings: &[Crossing]) -> Result<GroupElement> {
        let mut acc = LieElement::zero(self.order);
        for c in crossings {
            let w = self.walls.get(c.wall).ok_or_else(|| Error::InvalidData(format!("no wall {}", c.wall)))?;
            let x = if c.sigma > 0 { w.log_theta.clone() } else { w.log_theta.neg() };
            acc = x.try_bch(&acc)?;
        }
        Ok(GroupElement::exp(acc))
    }

    /// Product along the full standard loop at the given base angle.
    pub fn loop_product(&self, base_angle: f64) -> Result<GroupElement> {
        self.path_ordered_product(&self.crossings_of_loop(base_angle)?)
    }

    /// Base angle of the standard loop, taken from the first two line walls when present.
    pub fn standard_base_angle(&self) -> f64 {
        let lines: Vec<LatticeVector> =
            self.walls.iter().filter(|w| w.support == Support::Line).map(|w| w.direction).collect();
        let (m1, m2) = match lines.as_slice() {
            [a, b, ..] if det(*a, *b) > 0 => (*a, *b),
            [a, b, ..] if det(*a, *b) < 0 => (*b, *a),
            _ => (LatticeVector::new(1, 0), LatticeVector::new(0, 1)),
        };
        let mut base = default_base_angle(m1, m2);
        // nudge away from any wall that happens to sit on the default angle
        let mut step = 0;
        while self.crossings_of_loop(base).is_err() && step < 64 {
            base = (base + 1e-3 * (2f64.sqrt() - 1.0)).rem_euclid(2.0 * PI);
            step += 1;
        }
        base
    }

    pub fn is_consistent(&self) -> Result<bool> {
        self.loop_product(self.standard_base_angle())?.is_identity()
    }

    /// Drops trivial walls and merges walls with the same direction and support.
    pub fn minimize(&self) -> Self {
        let mut keys: Vec<(LatticeVector, Support)> = Vec::new();
        let mut merged: BTreeMap<(i64, i64, Support), LieElement> = BTreeMap::new();
        for w in &self.walls {
            let key = (w.direction.x, w.direction.y, w.support);
            match merged.get_mut(&key) {
                Some(acc) => *acc = acc.add_unchecked(&w.log_theta),
                None => {
                    keys.push((w.direction, w.support));
                    merged.insert(key, w.log_theta.clone());
                }
            }
        }
        let walls = keys
            .into_iter()
            .filter_map(|(d, s)| {
                let log = merged.remove(&(d.x, d.y, s)).expect("key recorded");
                (!log.is_zero()).then_some(Wall { direction: d, support: s, log_theta: log })
            })
            .collect();
        Diagram { order: self.order, walls }
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson { order: self.order, walls: self.walls.iter().map(Wall::to_json).collect() }
    }

    pub fn from_json(js: &DiagramJson) -> Result<Self> {
        let walls = js.walls.iter().map(Wall::from_json).collect::<Result<Vec<_>>>()?;
        let walls = walls
            .into_iter()
            .map(|w| {
                if w.order() > js.order {
                    return Err(Error::OrderMismatch(js.order, w.order()));
                }
                let log = w.log_theta.extend_order(js.order);
                Ok(w.with_log(log))
            })
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(js.order, walls)
    }
}

/// `+1` when the anticlockwise tangent at the hit point pairs negatively with the normal.
fn crossing_sign(hit: LatticeVector, n: DualVector) -> i8 {
    let tangent = hit.rot90();
    let p = tangent.x * n.x + tangent.y * n.y;
    debug_assert!(p != 0);
    if p < 0 {
        1
    } else {
        -1
    }
}

/// The same loop traversed backwards: reversed order and flipped signs.
pub fn reverse_crossings(c: &[Crossing]) -> CrossingSequence {
    c.iter().rev().map(|x| Crossing { wall: x.wall, sigma: -x.sigma, angle: 2.0 * PI - x.angle }).collect()
}

/// Order in which same-degree defect groups are inserted during completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InsertionOrder {
    #[default]
    Ascending,
    Descending,
}

/// Kontsevich-Soibelman completion of two non-parallel line walls at order `n`.
pub fn ks_complete(w1: &Wall, w2: &Wall, n: u32) -> Result<Diagram> {
    ks_complete_with(w1, w2, n, InsertionOrder::Ascending)
}

pub fn ks_complete_with(w1: &Wall, w2: &Wall, n: u32, insertion: InsertionOrder) -> Result<Diagram> {
    if w1.support != Support::Line || w2.support != Support::Line {
        return Err(Error::Completion("both initial walls must be full lines".into()));
    }
    let (m1, m2) = (w1.direction, w2.direction);
    let frame = det(m1, m2);
    if frame == 0 {
        return Err(Error::Completion(format!("initial directions {m1} and {m2} are parallel")));
    }
    let fit = |w: &Wall| {
        let log = if w.order() >= n { w.log_theta.truncate(n) } else { w.log_theta.extend_order(n) };
        w.with_log(log)
    };
    let mut diagram = Diagram { order: n, walls: vec![fit(w1), fit(w2)] };
    let base = if frame > 0 { default_base_angle(m1, m2) } else { default_base_angle(m2, m1) };

    for k in 1..=n {
        loop {
            let defect = diagram.truncate(k).loop_product(base)?.log;
            if let Some((key, c)) = defect.basis_terms().find(|(key, _)| key.j < k) {
                return Err(Error::Completion(format!(
                    "defect term {c} t^{} z^{} survives below order {k}",
                    key.j, key.m
                )));
            }
            if defect.is_zero() {
                break;
            }
            let mut groups: BTreeMap<(i64, i64), LieElement> = BTreeMap::new();
            for (key, c) in defect.basis_terms() {
                let m = key.m;
                let a = det(m, m2) * frame.signum();
                let b = det(m1, m) * frame.signum();
                if a <= 0 || b <= 0 {
                    return Err(Error::Completion(format!(
                        "defect mode {m} at order {k} lies outside the open cone of {m1} and {m2}"
                    )));
                }
                let (m0, _) = primitive_part(m)?;
                let g = groups.entry((m0.x, m0.y)).or_insert_with(|| LieElement::zero(k));
                g.add_basis_term(m, key.j, c.clone())?;
            }
            let pick = match insertion {
                InsertionOrder::Ascending => groups.into_iter().next(),
                InsertionOrder::Descending => groups.into_iter().next_back(),
            };
            let ((x, y), part) = pick.expect("nonzero defect has a group");
            let m0 = LatticeVector::new(x, y);
            let sigma = crossing_sign(-m0, m0.rot90());
            let add = if sigma > 0 { part.neg() } else { part };
            let add = add.extend_order(n);
            match diagram.walls.iter_mut().find(|w| w.support == Support::Ray && w.direction == m0) {
                Some(w) => w.log_theta = w.log_theta.add_unchecked(&add),
                None => diagram.walls.push(Wall { direction: m0, support: Support::Ray, log_theta: add }),
            }
        }
    }
    let diagram = diagram.minimize();
    if !diagram.loop_product(base)?.is_identity()? {
        return Err(Error::Completion("completed diagram is not consistent".into()));
    }
    Ok(diagram)
}

/// Equivalence by comparing partial products between all pairs of adjacent supports.
pub fn diagrams_equivalent(d1: &Diagram, d2: &Diagram) -> Result<bool> {
    if d1.order != d2.order {
        return Err(Error::OrderMismatch(d1.order, d2.order));
    }
    let mut hits: Vec<f64> =
        d1.walls.iter().chain(d2.walls.iter()).flat_map(|w| w.hit_directions()).map(|d| d.angle()).collect();
    hits.sort_by(f64::total_cmp);
    hits.dedup_by(|a, b| (*a - *b).abs() < ANGLE_EPS);
    if hits.is_empty() {
        return Ok(true);
    }
    let mut gaps = Vec::with_capacity(hits.len());
    for i in 0..hits.len() {
        let a = hits[i];
        let b = if i + 1 < hits.len() { hits[i + 1] } else { hits[0] + 2.0 * PI };
        gaps.push(((a + b) / 2.0).rem_euclid(2.0 * PI));
    }
    let base = gaps[0];
    let c1 = d1.crossings_of_loop(base)?;
    let c2 = d2.crossings_of_loop(base)?;
    for &g in &gaps {
        let stop = (g - base).rem_euclid(2.0 * PI);
        let stop = if stop < ANGLE_EPS { 2.0 * PI } else { stop };
        let p1: Vec<Crossing> = c1.iter().copied().filter(|c| c.angle < stop).collect();
        let p2: Vec<Crossing> = c2.iter().copied().filter(|c| c.angle < stop).collect();
        if !group_equal(&d1.path_ordered_product(&p1)?, &d2.path_ordered_product(&p2)?)? {
            return Ok(false);
        }
    }
    let full1 = d1.path_ordered_product(&c1)?;
    let full2 = d2.path_ordered_product(&c2)?;
    group_equal(&full1, &full2)
}

/// The two standard lines `log(1 + c t z^(1,0))` and `log(1 + c t z^(0,1))` scaled by `mult`.
pub fn standard_pair(order: u32, mult: i64) -> Result<(Wall, Wall)> {
    let one = BigRational::one();
    let scale = BigRational::from_integer(mult.into());
    let l1 = LieElement::log_binomial(order, LatticeVector::new(1, 0), 1, one.clone())?.scale(&scale);
    let l2 = LieElement::log_binomial(order, LatticeVector::new(0, 1), 1, one)?.scale(&scale);
    Ok((
        Wall::new(LatticeVector::new(1, 0), Support::Line, l1)?,
        Wall::new(LatticeVector::new(0, 1), Support::Line, l2)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn lv(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn normals_follow_the_frame() {
        let (w1, w2) = standard_pair(2, 1).unwrap();
        assert_eq!(w1.primitive_normal(), DualVector::new(0, 1));
        assert_eq!(w2.primitive_normal(), DualVector::new(-1, 0));
        let r = Wall::binomial_ray(2, lv(1, 1), 2, rat(1, 1)).unwrap();
        assert_eq!(r.primitive_normal(), DualVector::new(-1, 1));
    }

    #[test]
    fn crossing_examples() {
        assert!(Diagram::empty(2).crossings_of_loop(1.0).unwrap().is_empty());
        let (w1, w2) = standard_pair(2, 1).unwrap();
        let d = Diagram::new(2, vec![w1.clone(), w2]).unwrap();
        let c = d.crossings_of_loop(default_base_angle(lv(1, 0), lv(0, 1))).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.windows(2).all(|p| p[0].angle < p[1].angle));
        for i in 0..2 {
            let s: i32 = c.iter().filter(|x| x.wall == i).map(|x| x.sigma as i32).sum();
            assert_eq!(s, 0);
        }
        let r = Diagram::new(2, vec![Wall::binomial_ray(2, lv(1, 1), 1, rat(1, 1)).unwrap()]).unwrap();
        assert_eq!(r.crossings_of_loop(0.0).unwrap().len(), 1);
        assert!(matches!(d.crossings_of_loop(0.0), Err(Error::AngleOnWall(_))));
    }

    #[test]
    fn single_line_is_consistent() {
        let w = Wall::binomial_line(3, lv(2, 1), 1, rat(1, 1)).unwrap();
        assert!(Diagram::new(3, vec![w]).unwrap().is_consistent().unwrap());
        assert!(Diagram::empty(3).is_consistent().unwrap());
    }

    #[test]
    fn bare_pair_has_a_single_defect_term() {
        let (w1, w2) = standard_pair(2, 1).unwrap();
        let d = Diagram::new(2, vec![w1, w2]).unwrap();
        let g = d.loop_product(d.standard_base_angle()).unwrap();
        let terms: Vec<_> = g.log.basis_terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0.m, lv(1, 1));
        assert_eq!(terms[0].0.j, 2);
        assert!(!d.is_consistent().unwrap());
    }

    #[test]
    fn minimize_examples() {
        let trivial = Wall::new(lv(1, 0), Support::Line, LieElement::zero(2)).unwrap();
        assert!(Diagram::new(2, vec![trivial]).unwrap().minimize().walls().is_empty());
        let w = Wall::binomial_ray(2, lv(1, 1), 1, rat(1, 1)).unwrap();
        let neg = w.with_log(w.log_theta().neg());
        assert!(Diagram::new(2, vec![w, neg]).unwrap().minimize().walls().is_empty());
    }

    #[test]
    fn trivial_input_scatters_nothing() {
        let (w1, _) = standard_pair(3, 1).unwrap();
        let w2 = Wall::new(lv(0, 1), Support::Line, LieElement::zero(3)).unwrap();
        let d = ks_complete(&w1, &w2, 3).unwrap();
        assert_eq!(d.rays().count(), 0);
    }

    #[test]
    fn parallel_inputs_are_rejected() {
        let w1 = Wall::binomial_line(2, lv(1, 0), 1, rat(1, 1)).unwrap();
        let w2 = Wall::binomial_line(2, lv(-1, 0), 1, rat(1, 1)).unwrap();
        assert!(ks_complete(&w1, &w2, 2).is_err());
    }

    #[test]
    fn wall_rejects_foreign_modes() {
        let log = LieElement::log_binomial(2, lv(0, 1), 1, rat(1, 1)).unwrap();
        assert!(Wall::new(lv(1, 0), Support::Line, log.clone()).is_err());
        assert!(Wall::new(lv(0, -1), Support::Line, log.clone()).is_err());
        assert!(Wall::new(lv(0, 2), Support::Line, log).is_err());
    }
}
