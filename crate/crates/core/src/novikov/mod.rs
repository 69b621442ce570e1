//! Truncated Novikov field: finite q-series with rational exponents and cyclotomic coefficients.

pub mod cyclotomic;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use cyclotomic::CyclotomicNumber;

use crate::error::{Error, Result};
use crate::rational::{format_rational, lcm_u32, parse_rational, pretty_rational, Rational};

/// Default energy cutoff for division-bearing computations.
pub const DEFAULT_CUTOFF: i64 = 3;

/// An exponent or +∞. Used both for `val_q` and for cutoffs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(r) => Some(r),
            Valuation::Infinite => None,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Valuation::Finite(Rational::from_integer(n.into()))
    }

    fn admits(&self, exp: &Rational) -> bool {
        match self {
            Valuation::Finite(c) => exp < c,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{}", format_rational(r)),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A finite sum Σ c_i q^{e_i}, exponents strictly increasing, no zero coefficients.
///
/// Terms at or above `cutoff` are discarded on construction; `truncated` records
/// whether anything nonzero was ever dropped along the way. Equality compares values only.
#[derive(Clone, Debug)]
pub struct NovikovElement {
    order: u32,
    terms: Vec<(Rational, CyclotomicNumber)>,
    cutoff: Valuation,
    truncated: bool,
}

impl NovikovElement {
    pub fn zero(order: u32) -> Self {
        NovikovElement { order, terms: Vec::new(), cutoff: Valuation::Infinite, truncated: false }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(CyclotomicNumber::one(order))
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(CyclotomicNumber::from_rational(1, r))
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn constant(c: CyclotomicNumber) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// q^exp with coefficient 1.
    pub fn q_pow(exp: Rational) -> Self {
        Self::monomial(CyclotomicNumber::one(1), exp)
    }

    pub fn monomial(coeff: CyclotomicNumber, exp: Rational) -> Self {
        let order = coeff.order();
        let terms = if coeff.is_zero() { Vec::new() } else { vec![(exp, coeff)] };
        NovikovElement { order, terms, cutoff: Valuation::Infinite, truncated: false }
    }

    /// Normalizes arbitrary (exponent, coefficient) pairs.
    pub fn from_terms<I>(order: u32, terms: I, cutoff: Valuation) -> Self
    where
        I: IntoIterator<Item = (Rational, CyclotomicNumber)>,
    {
        let mut order = order;
        let raw: Vec<(Rational, CyclotomicNumber)> = terms.into_iter().collect();
        for (_, c) in &raw {
            order = lcm_u32(order, c.order());
        }
        let mut acc: BTreeMap<Rational, CyclotomicNumber> = BTreeMap::new();
        for (e, c) in raw {
            let c = c.embed(order);
            match acc.get_mut(&e) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let mut truncated = false;
        let mut out = Vec::with_capacity(acc.len());
        for (e, c) in acc {
            if c.is_zero() {
                continue;
            }
            if cutoff.admits(&e) {
                out.push((e, c));
            } else {
                truncated = true;
            }
        }
        NovikovElement { order, terms: out, cutoff, truncated }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &[(Rational, CyclotomicNumber)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Valuation {
        &self.cutoff
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// A single nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Minimal exponent; +∞ for zero.
    pub fn val_q(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    pub fn leading(&self) -> Option<&(Rational, CyclotomicNumber)> {
        self.terms.first()
    }

    /// Applies a (possibly smaller) cutoff.
    pub fn with_cutoff(&self, cutoff: Valuation) -> Self {
        let c = std::cmp::min(cutoff, self.cutoff.clone());
        let mut out = Self::from_terms(self.order, self.terms.iter().cloned(), c);
        out.truncated |= self.truncated;
        out
    }

    /// Same value with the cutoff lifted (the truncation flag is kept).
    pub fn without_cutoff(&self) -> Self {
        let mut out = self.clone();
        out.cutoff = Valuation::Infinite;
        out
    }

    /// Lifts coefficients into Q(ζ_L) for a multiple L of the current order.
    pub fn embed(&self, order: u32) -> Self {
        let mut out = self.clone();
        out.order = order;
        for (_, c) in out.terms.iter_mut() {
            *c = c.embed(order);
        }
        out
    }

    /// Terms with exponent < e and terms with exponent ≥ e.
    pub fn split_at(&self, e: &Rational) -> (Self, Self) {
        let (lo, hi): (Vec<_>, Vec<_>) = self.terms.iter().cloned().partition(|(x, _)| x < e);
        let mk = |terms| NovikovElement { order: self.order, terms, cutoff: self.cutoff.clone(), truncated: self.truncated };
        (mk(lo), mk(hi))
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        Self::from_terms(
            lcm_u32(self.order, c.order()),
            self.terms.iter().map(|(e, x)| (e.clone(), x * c)),
            self.cutoff.clone(),
        )
        .flag(self.truncated)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return NovikovElement { order: self.order, terms: Vec::new(), cutoff: self.cutoff.clone(), truncated: self.truncated };
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x.scale(r))).collect();
        NovikovElement { order: self.order, terms, cutoff: self.cutoff.clone(), truncated: self.truncated }
    }

    /// Multiplication by q^s.
    pub fn shift(&self, s: &Rational) -> Self {
        let terms = self.terms.iter().map(|(e, x)| (e + s, x.clone()));
        Self::from_terms(self.order, terms, self.cutoff.clone()).flag(self.truncated)
    }

    fn flag(mut self, t: bool) -> Self {
        self.truncated |= t;
        self
    }

    /// Truncated inverse: exact for monomials, geometric series otherwise.
    pub fn invert(&self, cutoff: &Rational) -> Result<Self> {
        let (v, lead) = self.terms.first().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let cut = std::cmp::min(Valuation::Finite(cutoff.clone()), self.cutoff.clone());
        let base = NovikovElement::monomial(lead_inv, -v);
        if self.terms.len() == 1 {
            return Ok(base.with_cutoff(cut).flag(self.truncated));
        }
        // self = lead q^v (1 + r), val(r) > 0
        let r = (&base * self).without_cutoff() - NovikovElement::one(self.order);
        let rv = r.val_q().finite().cloned().expect("nonzero tail");
        let bound = match &cut {
            Valuation::Finite(c) => c + v,
            Valuation::Infinite => unreachable!("finite cutoff"),
        };
        let bound_v = Valuation::Finite(bound.clone());
        let neg_r = -&r;
        let mut sum = NovikovElement::one(self.order);
        let mut power = NovikovElement::one(self.order);
        let mut k = Rational::zero();
        loop {
            k += &rv;
            if k >= bound {
                break;
            }
            power = (&power * &neg_r).with_cutoff(bound_v.clone());
            sum = &sum + &power;
        }
        let mut out = (&base * &sum).with_cutoff(cut);
        out.truncated = true;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = NovikovElement::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value at q = 1 (every stored element is a finite sum).
    pub fn at_q_one(&self) -> CyclotomicNumber {
        self.terms.iter().fold(CyclotomicNumber::zero(self.order), |acc, (_, c)| &acc + c)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        let cutoff = std::cmp::min(self.cutoff.clone(), rhs.cutoff.clone());
        let truncated = self.truncated || rhs.truncated;
        let order = lcm_u32(self.order, rhs.order);
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (e1, c1) = &self.terms[0];
            let (e2, c2) = &rhs.terms[0];
            let e = e1 + e2;
            let c = c1 * c2;
            if !cutoff.admits(&e) {
                return NovikovElement { order, terms: Vec::new(), cutoff, truncated: true };
            }
            let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
            return NovikovElement { order, terms, cutoff, truncated };
        }
        let pairs = self
            .terms
            .iter()
            .flat_map(|(e1, c1)| rhs.terms.iter().map(move |(e2, c2)| (e1 + e2, c1 * c2)));
        Self::from_terms(order, pairs, cutoff).flag(truncated)
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        let cutoff = std::cmp::min(self.cutoff.clone(), rhs.cutoff.clone());
        let truncated = self.truncated || rhs.truncated;
        let order = lcm_u32(self.order, rhs.order);
        if rhs.terms.is_empty() && self.cutoff <= rhs.cutoff && order == self.order {
            return self.clone().flag(truncated);
        }
        if self.terms.is_empty() && rhs.cutoff <= self.cutoff && order == rhs.order {
            return rhs.clone().flag(truncated);
        }
        Self::from_terms(order, self.terms.iter().chain(rhs.terms.iter()).cloned(), cutoff).flag(truncated)
    }
}

impl PartialEq for NovikovElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(other.terms.iter()).all(|((e1, c1), (e2, c2))| e1 == e2 && c1 == c2)
    }
}

impl Eq for NovikovElement {}

impl<'a> Add<&'a NovikovElement> for &'a NovikovElement {
    type Output = NovikovElement;
    fn add(self, rhs: &NovikovElement) -> NovikovElement {
        self.add_impl(rhs)
    }
}

impl Add for NovikovElement {
    type Output = NovikovElement;
    fn add(self, rhs: NovikovElement) -> NovikovElement {
        self.add_impl(&rhs)
    }
}

impl<'a> Sub<&'a NovikovElement> for &'a NovikovElement {
    type Output = NovikovElement;
    fn sub(self, rhs: &NovikovElement) -> NovikovElement {
        self.add_impl(&-rhs)
    }
}

impl Sub for NovikovElement {
    type Output = NovikovElement;
    fn sub(self, rhs: NovikovElement) -> NovikovElement {
        self.add_impl(&-&rhs)
    }
}

impl<'a> Mul<&'a NovikovElement> for &'a NovikovElement {
    type Output = NovikovElement;
    fn mul(self, rhs: &NovikovElement) -> NovikovElement {
        self.mul_impl(rhs)
    }
}

impl Mul for NovikovElement {
    type Output = NovikovElement;
    fn mul(self, rhs: NovikovElement) -> NovikovElement {
        self.mul_impl(&rhs)
    }
}

impl Neg for &NovikovElement {
    type Output = NovikovElement;
    fn neg(self) -> NovikovElement {
        NovikovElement {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            cutoff: self.cutoff.clone(),
            truncated: self.truncated,
        }
    }
}

impl Neg for NovikovElement {
    type Output = NovikovElement;
    fn neg(self) -> NovikovElement {
        -&self
    }
}

impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.is_zero() {
                    format!("{c}")
                } else if c.is_one() {
                    format!("q^{}", pretty_rational(e))
                } else {
                    format!("{c}*q^{}", pretty_rational(e))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))?;
        if self.truncated {
            write!(f, " + O(q^{})", self.cutoff)?;
        }
        Ok(())
    }
}

/// Wire form of a Novikov element.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct NovikovJson {
    pub order: u32,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub truncated: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TermJson {
    pub exp: String,
    pub coeff: Vec<String>,
}

impl NovikovElement {
    pub fn to_json(&self) -> NovikovJson {
        NovikovJson {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: format_rational(e), coeff: c.coeffs().iter().map(format_rational).collect() })
                .collect(),
            cutoff: self.cutoff.finite().map(format_rational),
            truncated: self.truncated,
        }
    }

    pub fn from_json(j: &NovikovJson) -> Result<Self> {
        if j.order == 0 {
            return Err(Error::InvalidInput("cyclotomic order must be positive".into()));
        }
        let cutoff = match &j.cutoff {
            Some(s) => Valuation::Finite(parse_rational(s)?),
            None => Valuation::Infinite,
        };
        let mut terms = Vec::with_capacity(j.terms.len());
        let mut last: Option<Rational> = None;
        for t in &j.terms {
            let e = parse_rational(&t.exp)?;
            if let Some(prev) = &last {
                if prev.cmp(&e) != Ordering::Less {
                    return Err(Error::InvalidInput("exponents must be strictly increasing".into()));
                }
            }
            last = Some(e.clone());
            let coeffs = t.coeff.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            terms.push((e, CyclotomicNumber::from_coeffs(j.order, coeffs)?));
        }
        Ok(Self::from_terms(j.order, terms, cutoff).flag(j.truncated))
    }
}

impl Serialize for NovikovElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NovikovElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = NovikovJson::deserialize(d)?;
        NovikovElement::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// True iff the element is c·q^e with c a root of unity.
pub fn is_unit_monomial(x: &NovikovElement) -> bool {
    x.is_monomial() && x.terms()[0].1.root_exponent().is_some()
}
