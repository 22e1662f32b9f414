//! The tropical vertex Lie algebra and its exponential group.
//!
//! In rank two the space of dual vectors orthogonal to a nonzero mode `m` is
//! the line spanned by `rot90(m)`, so every element of the algebra is a sum of
//! multiples of the basis vectors `e_m = z^m d_{rot90(m)}`. In this basis the
//! bracket reads `[e_m, e_m'] = det(m, m') e_{m+m'}` and the derivation acts by
//! `e_m(z^p) = det(m, p) z^{m+p}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::json::{LieJson, LieTermJson, RationalJson};
use crate::lattice::{det, pairing, primitive_part, DualVector, LatticeVector};
use crate::series::{Monomial, TruncatedSeries};

/// A single term `coeff * z^m d_n t^j`, the external view of an algebra element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieTerm {
    pub coeff: BigRational,
    pub m: LatticeVector,
    pub n: DualVector,
    pub j: u32,
}

/// Element of the tropical vertex algebra tensored with the maximal ideal, mod `t^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    order: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

fn add_into(map: &mut BTreeMap<Monomial, BigRational>, key: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn bigq(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LieElement {
    pub fn zero(order: u32) -> Self {
        LieElement { order, terms: BTreeMap::new() }
    }

    /// `c * e_m * t^j` in the internal basis.
    pub fn basis(order: u32, m: LatticeVector, j: u32, c: BigRational) -> Result<Self> {
        let mut x = Self::zero(order);
        x.add_basis_term(m, j, c)?;
        Ok(x)
    }

    /// Adds `c * e_m * t^j`; terms above the order are dropped.
    pub fn add_basis_term(&mut self, m: LatticeVector, j: u32, c: BigRational) -> Result<()> {
        if m.is_zero() {
            return Err(Error::NotInAlgebra { term: format!("{c} t^{j} z^{m}"), reason: "zero mode".into() });
        }
        if j == 0 {
            return Err(Error::NotInAlgebra {
                term: format!("{c} t^{j} z^{m}"),
                reason: "t-order must be at least 1".into(),
            });
        }
        if j <= self.order {
            add_into(&mut self.terms, Monomial::new(m, j), c);
        }
        Ok(())
    }

    /// Adds `coeff * z^m d_n t^j`, checking `pairing(m, n) = 0`.
    pub fn add_term(&mut self, coeff: BigRational, m: LatticeVector, n: DualVector, j: u32) -> Result<()> {
        if pairing(m, n) != 0 {
            return Err(Error::NotInAlgebra {
                term: format!("{coeff} t^{j} z^{m} d_{n}"),
                reason: "pairing(m, n) must vanish".into(),
            });
        }
        if m.is_zero() {
            return Err(Error::NotInAlgebra { term: format!("{coeff} t^{j} z^{m} d_{n}"), reason: "zero mode".into() });
        }
        // n = lambda * rot90(m) with lambda = <n, rot90 m> / |m|^2
        let r = m.rot90();
        let lambda = BigRational::new(BigInt::from(n.x * r.x + n.y * r.y), BigInt::from(m.norm_sq()));
        self.add_basis_term(m, j, coeff * lambda)
    }

    /// `f * d_n` for a series `f` all of whose modes pair to zero with `n`.
    pub fn from_series(f: &TruncatedSeries, n: DualVector) -> Result<Self> {
        let mut x = Self::zero(f.order());
        for (k, c) in f.terms() {
            x.add_term(c.clone(), k.m, n, k.j)?;
        }
        Ok(x)
    }

    /// `log(1 + c t^j z^m) d_{n}` where `n` is the primitive normal `rot90(m0)`.
    pub fn log_binomial(order: u32, m: LatticeVector, j: u32, c: BigRational) -> Result<Self> {
        let (m0, _) = primitive_part(m)?;
        let f = TruncatedSeries::from_terms(order, [(LatticeVector::ZERO, 0, BigRational::one()), (m, j, c)]);
        Self::from_series(&f.log()?, m0.rot90())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Internal-basis coefficients, keyed by `(j, m)` in canonical order.
    pub fn basis_terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn basis_coeff(&self, m: LatticeVector, j: u32) -> BigRational {
        self.terms.get(&Monomial::new(m, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `z^m d_n t^j` for a chosen normal `n` with `pairing(m, n) = 0`.
    pub fn coeff_along(&self, m: LatticeVector, j: u32, n: DualVector) -> BigRational {
        let c = self.basis_coeff(m, j);
        if c.is_zero() {
            return c;
        }
        let r = m.rot90();
        // e_m = (|m|^2 / <n, rot90 m>) z^m d_n
        c * BigRational::new(BigInt::from(m.norm_sq()), BigInt::from(n.x * r.x + n.y * r.y))
    }

    /// Terms written against the primitive normal `rot90(m0)` of each mode.
    pub fn terms(&self) -> Vec<LieTerm> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let (m0, kk) = primitive_part(k.m).expect("nonzero mode");
                LieTerm { coeff: c * bigq(kk), m: k.m, n: m0.rot90(), j: k.j }
            })
            .collect()
    }

    /// Smallest `t`-degree present, if any.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|k| k.j)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_into(&mut out.terms, *k, c.clone());
        }
        out
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LieElement { order: self.order, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        LieElement { order: self.order, terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn truncate(&self, n: u32) -> Self {
        LieElement {
            order: n,
            terms: self.terms.iter().filter(|(k, _)| k.j <= n).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn extend_order(&self, n: u32) -> Self {
        assert!(n >= self.order);
        LieElement { order: n, terms: self.terms.clone() }
    }

    /// Only the terms of `t`-degree exactly `j`.
    pub fn degree_part(&self, j: u32) -> Self {
        LieElement {
            order: self.order,
            terms: self.terms.iter().filter(|(k, _)| k.j == j).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// Keeps the terms for which `keep(m, j)` holds.
    pub fn filter(&self, keep: impl Fn(LatticeVector, u32) -> bool) -> Self {
        LieElement {
            order: self.order,
            terms: self.terms.iter().filter(|(k, _)| keep(k.m, k.j)).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn try_bracket(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.bracket_unchecked(other))
    }

    pub(crate) fn bracket_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let j = a.j + b.j;
                if j > self.order {
                    break;
                }
                let d = det(a.m, b.m);
                if d == 0 {
                    continue;
                }
                add_into(&mut out.terms, Monomial::new(a.m + b.m, j), ca * cb * bigq(d));
            }
        }
        out
    }

    /// The derivation `D_x` applied once to a series.
    pub fn derive(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let n = f.order();
        let mut out = TruncatedSeries::zero(n);
        for (a, ca) in &self.terms {
            for (p, cp) in f.terms() {
                let j = a.j + p.j;
                if j > n {
                    continue;
                }
                let d = det(a.m, p.m);
                if d != 0 {
                    out.add_term(a.m + p.m, j, ca * cp * bigq(d));
                }
            }
        }
        out
    }

    /// Baker-Campbell-Hausdorff product `log(exp(self) exp(other))`.
    pub fn try_bch(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(bch_unchecked(self, other))
    }

    pub fn to_json(&self) -> LieJson {
        LieJson {
            order: self.order,
            terms: self
                .terms()
                .into_iter()
                .map(|t| LieTermJson {
                    coeff: RationalJson::from(&t.coeff),
                    m: [t.m.x, t.m.y],
                    n: [RationalJson::from(&bigq(t.n.x)), RationalJson::from(&bigq(t.n.y))],
                    j: t.j,
                })
                .collect(),
        }
    }

    pub fn from_json(js: &LieJson) -> Result<Self> {
        let mut x = Self::zero(js.order);
        for t in &js.terms {
            if t.j > js.order {
                return Err(Error::InvalidData(format!("term degree {} above order {}", t.j, js.order)));
            }
            let coeff = t.coeff.to_rational()?;
            let n0 = t.n[0].to_rational()?;
            let n1 = t.n[1].to_rational()?;
            let m = LatticeVector::from(t.m);
            // payload v = coeff * n must be orthogonal to m
            let v0 = &coeff * &n0;
            let v1 = &coeff * &n1;
            let pair = &v0 * bigq(m.x) + &v1 * bigq(m.y);
            if !pair.is_zero() {
                return Err(Error::NotInAlgebra {
                    term: format!("{coeff} t^{} z^{m} d_({n0},{n1})", t.j),
                    reason: "pairing(m, n) must vanish".into(),
                });
            }
            if m.is_zero() {
                return Err(Error::NotInAlgebra { term: format!("t^{} z^{m}", t.j), reason: "zero mode".into() });
            }
            let r = m.rot90();
            let c = (v0 * bigq(r.x) + v1 * bigq(r.y)) / bigq(m.norm_sq());
            x.add_basis_term(m, t.j, c)?;
        }
        Ok(x)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms().iter().map(|t| format!("{} t^{} z^{} d_{}", t.coeff, t.j, t.m, t.n)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type DynkinTable = std::sync::Arc<Vec<(Vec<bool>, BigRational)>>;

/// Dynkin coefficients of the BCH series, grouped by word, for words of length at most `n`.
///
/// A word is a sequence of letters `false = X`, `true = Y`, read as the
/// right-nested bracket `[w1, [w2, ... [w_{L-1}, w_L]]]`.
fn dynkin_table(n: u32) -> DynkinTable {
    static CACHE: OnceLock<Mutex<HashMap<u32, DynkinTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let mut acc: BTreeMap<Vec<bool>, BigRational> = BTreeMap::new();
    let fact: Vec<BigInt> = (0..=n as u64)
        .scan(BigInt::one(), |f, k| {
            if k > 0 {
                *f *= BigInt::from(k);
            }
            Some(f.clone())
        })
        .collect();

    // depth-first over sequences of (r_i, s_i) != (0, 0)
    fn walk(
        n: usize,
        word: &mut Vec<bool>,
        pairs: usize,
        denom: &BigInt,
        fact: &[BigInt],
        acc: &mut BTreeMap<Vec<bool>, BigRational>,
    ) {
        if pairs > 0 {
            let sign = if pairs % 2 == 1 { 1 } else { -1 };
            let d = denom * BigInt::from(pairs as u64) * BigInt::from(word.len() as u64);
            let c = BigRational::new(BigInt::from(sign), d);
            *acc.entry(word.clone()).or_insert_with(BigRational::zero) += c;
        }
        let room = n - word.len();
        for r in 0..=room {
            for s in 0..=(room - r) {
                if r + s == 0 {
                    continue;
                }
                let base = word.len();
                word.extend(std::iter::repeat_n(false, r));
                word.extend(std::iter::repeat_n(true, s));
                let d = denom * &fact[r] * &fact[s];
                walk(n, word, pairs + 1, &d, fact, acc);
                word.truncate(base);
            }
        }
    }
    walk(n as usize, &mut Vec::new(), 0, &BigInt::one(), &fact, &mut acc);
    let table: Vec<(Vec<bool>, BigRational)> = acc
        .into_iter()
        .filter(|(w, c)| {
            !c.is_zero() && (w.len() == 1 || w[w.len() - 1] != w[w.len() - 2])
        })
        .collect();
    let table = std::sync::Arc::new(table);
    cache.lock().unwrap().insert(n, table.clone());
    table
}

fn bch_unchecked(x: &LieElement, y: &LieElement) -> LieElement {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    let n = x.order;
    let dx = x.min_degree().unwrap_or(n + 1);
    let dy = y.min_degree().unwrap_or(n + 1);
    let table = dynkin_table(n);
    let mut nested: HashMap<Vec<bool>, LieElement> = HashMap::new();
    let mut out = LieElement::zero(n);
    for (word, c) in table.iter() {
        let deg: u32 = word.iter().map(|&l| if l { dy } else { dx }).sum();
        if deg > n {
            continue;
        }
        let v = nested_bracket(word, x, y, &mut nested);
        if !v.is_zero() {
            out = out.add_unchecked(&v.scale(c));
        }
    }
    out
}

fn nested_bracket(
    word: &[bool],
    x: &LieElement,
    y: &LieElement,
    memo: &mut HashMap<Vec<bool>, LieElement>,
) -> LieElement {
    if word.len() == 1 {
        return if word[0] { y.clone() } else { x.clone() };
    }
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let inner = nested_bracket(&word[1..], x, y, memo);
    let head = if word[0] { y } else { x };
    let v = if inner.is_zero() { inner } else { head.bracket_unchecked(&inner) };
    memo.insert(word.to_vec(), v.clone());
    v
}

/// An element of the tropical vertex group, stored through its logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub log: LieElement,
}

impl GroupElement {
    pub fn identity(order: u32) -> Self {
        GroupElement { log: LieElement::zero(order) }
    }

    pub fn exp(log: LieElement) -> Self {
        GroupElement { log }
    }

    pub fn order(&self) -> u32 {
        self.log.order()
    }

    pub fn inverse(&self) -> Self {
        GroupElement { log: self.log.neg() }
    }

    /// `self o other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(GroupElement { log: self.log.try_bch(&other.log)? })
    }

    /// `exp(D) f = sum_k D^k f / k!`, a finite sum modulo `t^{N+1}`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.order() != self.order() {
            return Err(Error::OrderMismatch(self.order(), f.order()));
        }
        let mut out = f.clone();
        let mut cur = f.clone();
        for k in 1..=self.order() {
            cur = self.log.derive(&cur).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            if cur.is_zero() {
                break;
            }
            out = out.try_add(&cur)?;
        }
        Ok(out)
    }

    /// Images of the generators `z^(1,0)` and `z^(0,1)`.
    pub fn generator_images(&self) -> Result<[TruncatedSeries; 2]> {
        let n = self.order();
        let x = TruncatedSeries::monomial(n, LatticeVector::new(1, 0), 0, BigRational::one());
        let y = TruncatedSeries::monomial(n, LatticeVector::new(0, 1), 0, BigRational::one());
        Ok([self.apply(&x)?, self.apply(&y)?])
    }

    pub fn is_identity(&self) -> Result<bool> {
        group_equal(self, &Self::identity(self.order()))
    }
}

/// Equality by the action on the generator monomials.
pub fn group_equal(g1: &GroupElement, g2: &GroupElement) -> Result<bool> {
    if g1.order() != g2.order() {
        return Err(Error::OrderMismatch(g1.order(), g2.order()));
    }
    Ok(g1.generator_images()? == g2.generator_images()?)
}

/// Largest absolute coefficient of an element, for diagnostics.
pub fn max_abs(x: &LieElement) -> BigRational {
    x.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn lv(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn term(order: u32, c: BigRational, m: (i64, i64), n: (i64, i64), j: u32) -> LieElement {
        let mut x = LieElement::zero(order);
        x.add_term(c, lv(m.0, m.1), DualVector::new(n.0, n.1), j).unwrap();
        x
    }

    #[test]
    fn basic_bracket() {
        let x = term(2, rat(1, 1), (1, 0), (0, 1), 1);
        let y = term(2, rat(1, 1), (0, 1), (1, 0), 1);
        let expected = term(2, rat(1, 1), (1, 1), (1, -1), 2);
        assert_eq!(x.try_bracket(&y).unwrap(), expected);
        assert!(x.try_bracket(&x).unwrap().is_zero());
        let z = term(2, rat(1, 1), (2, 0), (0, 1), 1);
        assert!(x.try_bracket(&z).unwrap().is_zero());
    }

    #[test]
    fn off_normal_is_rejected() {
        let mut x = LieElement::zero(2);
        assert!(x.add_term(rat(1, 1), lv(1, 0), DualVector::new(1, 0), 1).is_err());
        assert!(x.add_term(rat(1, 1), lv(1, 0), DualVector::new(0, 1), 0).is_err());
    }

    #[test]
    fn automorphism_on_generator() {
        // exp(t z^(1,0) d_(0,1)) applied to z^(0,1) mod t^3
        let g = GroupElement::exp(term(2, rat(1, 1), (1, 0), (0, 1), 1));
        let f = TruncatedSeries::monomial(2, lv(0, 1), 0, rat(1, 1));
        let expected = TruncatedSeries::from_terms(
            2,
            [(lv(0, 1), 0, rat(1, 1)), (lv(1, 1), 1, rat(1, 1)), (lv(2, 1), 2, rat(1, 2))],
        );
        assert_eq!(g.apply(&f).unwrap(), expected);
        let one = TruncatedSeries::one(2);
        assert_eq!(g.apply(&one).unwrap(), one);
        let fixed = TruncatedSeries::monomial(2, lv(3, 0), 0, rat(1, 1));
        assert_eq!(g.apply(&fixed).unwrap(), fixed);
    }

    #[test]
    fn bch_second_order() {
        let x = term(2, rat(1, 1), (1, 0), (0, 1), 1);
        let y = term(2, rat(1, 1), (0, 1), (1, 0), 1);
        let expected = x.try_add(&y).unwrap().try_add(&term(2, rat(1, 2), (1, 1), (1, -1), 2)).unwrap();
        assert_eq!(x.try_bch(&y).unwrap(), expected);
        assert_eq!(x.try_bch(&LieElement::zero(2)).unwrap(), x);
        assert!(x.try_bch(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn non_commuting_compositions_differ() {
        let gx = GroupElement::exp(term(2, rat(1, 1), (1, 0), (0, 1), 1));
        let gy = GroupElement::exp(term(2, rat(1, 1), (0, 1), (1, 0), 1));
        let xy = gx.compose(&gy).unwrap();
        let yx = gy.compose(&gx).unwrap();
        assert!(!group_equal(&xy, &yx).unwrap());
        assert!(group_equal(&xy, &xy).unwrap());
        let same = GroupElement::exp(gx.log.try_bch(&LieElement::zero(2)).unwrap());
        assert!(group_equal(&gx, &same).unwrap());
    }

    #[test]
    fn json_round_trip_keeps_terms() {
        let x = LieElement::log_binomial(4, lv(1, 1), 2, rat(1, 1)).unwrap();
        let back = LieElement::from_json(&serde_json::from_str(&serde_json::to_string(&x.to_json()).unwrap()).unwrap())
            .unwrap();
        assert_eq!(back, x);
        // log(1 + t^2 z^(1,1)) d_(-1,1): leading coefficient 1 against the primitive normal
        assert_eq!(x.coeff_along(lv(1, 1), 2, DualVector::new(-1, 1)), rat(1, 1));
        assert_eq!(x.coeff_along(lv(2, 2), 4, DualVector::new(-1, 1)), rat(-1, 2));
    }
}
