//! Cyclotomic number fields Q(ζ_M) in the power basis modulo Φ_M.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_u32, pretty_rational, Rational};

fn poly_cache() -> &'static Mutex<BTreeMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Integer coefficients of Φ_M, lowest degree first.
pub fn cyclotomic_polynomial(order: u32) -> Arc<Vec<i64>> {
    assert!(order >= 1, "cyclotomic order must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&order) {
        return p.clone();
    }
    // x^M - 1 divided by every Φ_d with d | M, d < M
    let mut num = vec![0i64; order as usize + 1];
    num[0] = -1;
    num[order as usize] = 1;
    for d in 1..order {
        if order % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = exact_div(&num, &den);
        }
    }
    let out = Arc::new(num);
    poly_cache().lock().unwrap().insert(order, out.clone());
    out
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd] / lead;
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient, the degree of Φ_M.
pub fn totient(order: u32) -> usize {
    cyclotomic_polynomial(order).len() - 1
}

/// An element of Q(ζ_M).
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u32) -> Self {
        CyclotomicNumber { order, coeffs: vec![Rational::zero(); totient(order)] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// ζ_M^k for any integer k.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::from_poly(order, poly)
    }

    /// Reduces an arbitrary polynomial in ζ modulo Φ_M.
    pub fn from_poly(order: u32, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for i in (deg..poly.len()).rev() {
                if poly[i].is_zero() {
                    continue;
                }
                let c = poly[i].clone();
                for (j, &pj) in phi.iter().enumerate() {
                    if pj != 0 {
                        poly[i - deg + j] -= &c * Rational::from_integer(pj.into());
                    }
                }
            }
        }
        poly.resize(deg, Rational::zero());
        CyclotomicNumber { order, coeffs: poly }
    }

    /// Builds directly from reduced power-basis coordinates.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != totient(order) {
            return Err(Error::InvalidInput(format!(
                "cyclotomic order {order} needs {} coefficients, got {}",
                totient(order),
                coeffs.len()
            )));
        }
        Ok(CyclotomicNumber { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under Q(ζ_M) → Q(ζ_L), ζ_M ↦ ζ_L^{L/M}.
    pub fn embed(&self, new_order: u32) -> Self {
        assert!(new_order % self.order == 0, "cannot embed order {} into {}", self.order, new_order);
        if new_order == self.order {
            return self.clone();
        }
        let step = (new_order / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::from_poly(new_order, poly)
    }

    /// Both operands lifted to the field of order lcm.
    pub fn coerce(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = lcm_u32(a.order, b.order);
        (a.embed(l), b.embed(l))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut poly = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        Self::from_poly(self.order, poly)
    }

    /// Multiplicative inverse by solving the multiplication-matrix system.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        let n = self.coeffs.len();
        // column j holds self·ζ^j
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut cur = self.clone();
        let zeta = Self::root_of_unity(self.order, 1);
        for _ in 0..n {
            cols.push(cur.coeffs.clone());
            cur = cur.mul_same(&zeta);
        }
        // augmented rows [A | e_0]
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r: Vec<Rational> = (0..n).map(|j| cols[j][i].clone()).collect();
                r.push(if i == 0 { Rational::one() } else { Rational::zero() });
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !rows[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            rows.swap(c, p);
            let piv = rows[c][c].clone();
            for x in rows[c].iter_mut() {
                *x /= &piv;
            }
            for r in 0..n {
                if r != c && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    let pivot_row = rows[c].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Ok(CyclotomicNumber { order: self.order, coeffs: rows.into_iter().map(|mut r| r.pop().unwrap()).collect() })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.order);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_same(&b);
            }
            b = b.mul_same(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut poly = vec![Rational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(m - i) % m] += c;
        }
        Self::from_poly(self.order, poly)
    }

    /// True iff this is ζ_M^k for some k; returns that k.
    pub fn root_exponent(&self) -> Option<i64> {
        (0..self.order as i64).find(|&k| *self == Self::root_of_unity(self.order, k))
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::coerce(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = CyclotomicNumber::coerce(self, rhs);
        let coeffs = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x + y).collect();
        CyclotomicNumber { order: a.order, coeffs }
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order == rhs.order {
            return self.mul_same(rhs);
        }
        let (a, b) = CyclotomicNumber::coerce(self, rhs);
        a.mul_same(&b)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => pretty_rational(c),
                1 => format!("{}*z{}", pretty_rational(c), self.order),
                _ => format!("{}*z{}^{}", pretty_rational(c), self.order, i),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(105), 48);
    }

    #[test]
    fn roots_have_exact_order() {
        for m in 1..=24u32 {
            let z = CyclotomicNumber::root_of_unity(m, 1);
            assert!(z.pow(m as i64).unwrap().is_one());
            for k in 1..m as i64 {
                assert!(!z.pow(k).unwrap().is_one(), "order {m}, k {k}");
            }
        }
    }

    #[test]
    fn zeta3_products() {
        let a = CyclotomicNumber::root_of_unity(3, 1);
        let b = CyclotomicNumber::root_of_unity(3, 2);
        assert!((&a * &b).is_one());
        // 1 + ζ + ζ² = 0
        let s = &(&CyclotomicNumber::one(3) + &a) + &b;
        assert!(s.is_zero());
    }

    #[test]
    fn embedding_is_compatible() {
        let z6 = CyclotomicNumber::root_of_unity(6, 2);
        let z3 = CyclotomicNumber::root_of_unity(3, 1);
        assert_eq!(z6, z3);
        let z4 = CyclotomicNumber::root_of_unity(4, 1);
        let prod = &z4 * &z3;
        assert_eq!(prod, CyclotomicNumber::root_of_unity(12, 3 + 4));
    }

    #[test]
    fn inverse_and_conjugate() {
        let x = CyclotomicNumber::from_poly(7, vec![rat(1, 2), rat(-3, 1), rat(0, 1), rat(5, 7)]);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let z = CyclotomicNumber::root_of_unity(7, 3);
        assert_eq!(z.conj(), CyclotomicNumber::root_of_unity(7, 4));
        assert!(CyclotomicNumber::zero(5).inv().is_err());
    }

    #[test]
    fn reduction_is_idempotent() {
        let raw: Vec<Rational> = (0..20).map(|i| rat(i * i - 7, i + 1)).collect();
        let once = CyclotomicNumber::from_poly(9, raw);
        let twice = CyclotomicNumber::from_poly(9, once.coeffs().to_vec());
        assert_eq!(once.coeffs(), twice.coeffs());
    }
}
