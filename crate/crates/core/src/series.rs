//! Sparse truncated series in lattice monomials `z^m` and the formal variable `t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::json::{SeriesJson, SeriesTermJson};
use crate::lattice::LatticeVector;

/// The monomial `z^m t^j`. Ordering is lexicographic on `(j, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub j: u32,
    pub m: LatticeVector,
}

impl Monomial {
    pub fn new(m: LatticeVector, j: u32) -> Self {
        Monomial { j, m }
    }

    pub fn one() -> Self {
        Monomial { j: 0, m: LatticeVector::ZERO }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} z^{}", self.j, self.m)
    }
}

/// A series modulo `t^{N+1}` with exact rational coefficients.
///
/// Terms are kept in canonical sparse form: no zero coefficients and no term
/// of `t`-degree above the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn add_into(map: &mut BTreeMap<Monomial, BigRational>, key: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl TruncatedSeries {
    pub fn zero(order: u32) -> Self {
        TruncatedSeries { order, terms: BTreeMap::new() }
    }

    pub fn one(order: u32) -> Self {
        Self::monomial(order, LatticeVector::ZERO, 0, BigRational::one())
    }

    /// `c z^m t^j`, already truncated.
    pub fn monomial(order: u32, m: LatticeVector, j: u32, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        s.add_term(m, j, c);
        s
    }

    pub fn from_terms<I>(order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticeVector, u32, BigRational)>,
    {
        let mut s = Self::zero(order);
        for (m, j, c) in terms {
            s.add_term(m, j, c);
        }
        s
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: LatticeVector, j: u32) -> BigRational {
        self.terms.get(&Monomial::new(m, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Adds `c z^m t^j` in place; silently dropped when `j` exceeds the order.
    pub fn add_term(&mut self, m: LatticeVector, j: u32, c: BigRational) {
        if j <= self.order {
            add_into(&mut self.terms, Monomial::new(m, j), c);
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_into(&mut out.terms, *k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let j = a.j + b.j;
                if j > self.order {
                    // terms are sorted by j, so the rest of this row is truncated too
                    break;
                }
                add_into(&mut out.terms, Monomial::new(a.m + b.m, j), ca * cb);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TruncatedSeries {
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Re-truncates at a smaller order `n <= order`.
    pub fn truncate(&self, n: u32) -> Self {
        TruncatedSeries {
            order: n,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.j <= n)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Same terms, viewed at a larger order.
    pub fn extend_order(&self, n: u32) -> Self {
        assert!(n >= self.order);
        TruncatedSeries { order: n, terms: self.terms.clone() }
    }

    fn split_constant(&self, op: &str) -> Result<Self> {
        let one = Monomial::one();
        let c0 = self.terms.get(&one).cloned().unwrap_or_else(BigRational::zero);
        if !c0.is_one() {
            return Err(Error::SeriesPrecondition {
                term: format!("{c0} * {one}"),
                reason: format!("{op} needs constant term 1"),
            });
        }
        let mut rest = self.clone();
        rest.terms.remove(&one);
        rest.require_positive_degree(op)?;
        Ok(rest)
    }

    fn require_positive_degree(&self, op: &str) -> Result<()> {
        if let Some((k, c)) = self.terms.iter().find(|(k, _)| k.j == 0) {
            return Err(Error::SeriesPrecondition {
                term: format!("{c} * {k}"),
                reason: format!("{op} needs every non-constant term to carry t"),
            });
        }
        Ok(())
    }

    /// Power sum `sum_k coeffs[k] a^k` for `a` with positive `t`-degree; terminates since `a^{N+1} = 0`.
    fn power_sum(a: &Self, coeffs: impl Fn(u32) -> BigRational) -> Self {
        let n = a.order;
        let mut out = Self::zero(n);
        let mut power = Self::one(n);
        for k in 0..=n {
            let c = coeffs(k);
            if !c.is_zero() {
                for (key, v) in &power.terms {
                    add_into(&mut out.terms, *key, v * &c);
                }
            }
            if k < n {
                power = power.mul_unchecked(a);
                if power.is_zero() {
                    break;
                }
            }
        }
        out
    }

    /// `exp(a)` for `a` with every term of positive `t`-degree.
    pub fn exp(&self) -> Result<Self> {
        self.require_positive_degree("exp")?;
        let mut fact = BigInt::one();
        let mut facts = vec![BigInt::one()];
        for k in 1..=self.order {
            fact *= BigInt::from(k);
            facts.push(fact.clone());
        }
        Ok(Self::power_sum(self, |k| BigRational::new(BigInt::one(), facts[k as usize].clone())))
    }

    /// `log(f)` for `f = 1 + a` with `a` of positive `t`-degree.
    pub fn log(&self) -> Result<Self> {
        let a = self.split_constant("log")?;
        Ok(Self::power_sum(&a, |k| {
            if k == 0 {
                BigRational::zero()
            } else {
                let s = if k % 2 == 1 { 1 } else { -1 };
                rat(s, k as i64)
            }
        }))
    }

    /// Multiplicative inverse of `f = 1 + a`.
    pub fn inv(&self) -> Result<Self> {
        let a = self.split_constant("inv")?;
        Ok(Self::power_sum(&a, |k| rat(if k % 2 == 0 { 1 } else { -1 }, 1)))
    }

    /// Largest absolute coefficient, useful for diagnostics.
    pub fn max_abs(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| SeriesTermJson {
                    m: [k.m.x, k.m.y],
                    j: k.j,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(js: &SeriesJson) -> Result<Self> {
        let mut s = Self::zero(js.order);
        for t in &js.terms {
            if t.j > js.order {
                return Err(Error::InvalidData(format!("term degree {} above order {}", t.j, js.order)));
            }
            let c = crate::json::RationalJson { num: t.num.clone(), den: t.den.clone() }.to_rational()?;
            s.add_term(LatticeVector::from(t.m), t.j, c);
        }
        Ok(s)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (mod t^{})", self.order + 1);
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c} {k}")).collect();
        write!(f, "{} (mod t^{})", parts.join(" + "), self.order + 1)
    }
}
