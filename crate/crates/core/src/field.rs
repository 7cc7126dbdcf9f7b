//! Exact elements of ℚ and of quadratic fields ℚ(√d), in the basis {1, √d}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = Ratio<i128>;

/// Which field K is: ℚ, or ℚ(√d) with d squarefree, d ∉ {0, 1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    Rational,
    Quadratic(i64),
}

impl FieldTag {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::BadSpec(format!("d = {d} is not a squarefree integer other than 0, 1")));
        }
        Ok(FieldTag::Quadratic(d))
    }

    /// Number of coordinates of an element (1 for ℚ, 2 otherwise).
    pub fn dim(self) -> usize {
        match self {
            FieldTag::Rational => 1,
            FieldTag::Quadratic(_) => 2,
        }
    }

    pub fn d(self) -> Option<i64> {
        match self {
            FieldTag::Rational => None,
            FieldTag::Quadratic(d) => Some(d),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

pub fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

/// a + b√d. When the tag is `Rational`, b is always zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub tag: FieldTag,
    pub a: Q,
    pub b: Q,
}

impl FieldElem {
    pub fn new(tag: FieldTag, a: Q, b: Q) -> Result<Self> {
        if tag == FieldTag::Rational && !b.is_zero() {
            return Err(Error::BadSpec("irrational coordinate in Q".into()));
        }
        Ok(FieldElem { tag, a, b })
    }

    pub fn rational(tag: FieldTag, a: Q) -> Self {
        FieldElem { tag, a, b: Q::zero() }
    }

    pub fn int(tag: FieldTag, a: i128) -> Self {
        Self::rational(tag, Q::from_integer(a))
    }

    pub fn ints(tag: FieldTag, a: i128, b: i128) -> Self {
        let b = if tag == FieldTag::Rational { 0 } else { b };
        FieldElem { tag, a: Q::from_integer(a), b: Q::from_integer(b) }
    }

    pub fn zero(tag: FieldTag) -> Self {
        Self::int(tag, 0)
    }

    pub fn one(tag: FieldTag) -> Self {
        Self::int(tag, 1)
    }

    /// √d itself.
    pub fn sqrt_d(tag: FieldTag) -> Self {
        Self::ints(tag, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn dval(&self) -> i128 {
        self.tag.d().unwrap_or(0) as i128
    }

    pub fn norm(&self) -> Q {
        self.a * self.a - self.b * self.b * Q::from_integer(self.dval())
    }

    pub fn trace(&self) -> Q {
        self.a + self.a
    }

    pub fn conj(&self) -> Self {
        FieldElem { tag: self.tag, a: self.a, b: -self.b }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(FieldElem { tag: self.tag, a: c.a / n, b: c.b / n })
    }

    pub fn scale(&self, q: Q) -> Self {
        FieldElem { tag: self.tag, a: self.a * q, b: self.b * q }
    }

    pub fn coords(&self) -> [Q; 2] {
        [self.a, self.b]
    }

    /// Least positive integer n with n·self having integer coordinates.
    pub fn denom(&self) -> i128 {
        self.a.denom().lcm(self.b.denom())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        FieldElem { tag: self.tag, a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        FieldElem { tag: self.tag, a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { tag: self.tag, a: -self.a, b: -self.b }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        let d = Q::from_integer(self.dval());
        FieldElem {
            tag: self.tag,
            a: self.a * o.a + self.b * o.b * d,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            FieldTag::Rational => write!(f, "{}", fmt_q(&self.a)),
            FieldTag::Quadratic(_) => write!(f, "[{},{}]", fmt_q(&self.a), fmt_q(&self.b)),
        }
    }
}

/// Parses "3", "-2/5", or "[a,b]" (coordinates on {1, √d}).
pub fn parse_elem(tag: FieldTag, s: &str) -> Result<FieldElem> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(',').collect();
        return match parts.as_slice() {
            [a] => FieldElem::new(tag, parse_q(a)?, Q::zero()),
            [a, b] => FieldElem::new(tag, parse_q(a)?, parse_q(b)?),
            _ => Err(Error::Parse(format!("bad element '{s}'"))),
        };
    }
    FieldElem::new(tag, parse_q(s)?, Q::zero())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// p-adic valuation of a nonzero rational.
pub fn vp_q(q: &Q, p: i128) -> i64 {
    vp(*q.numer(), p) - vp(*q.denom(), p)
}

/// p-adic valuation of a nonzero integer.
pub fn vp(mut n: i128, p: i128) -> i64 {
    assert!(n != 0, "valuation of zero");
    n = n.abs();
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Prime factors of |n| by trial division, ascending, without multiplicity.
pub fn prime_factors(n: i128) -> Vec<i128> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2i128;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: i128) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_gaussian_field() {
        let k = FieldTag::quadratic(-1).unwrap();
        let x = FieldElem::ints(k, 2, 1);
        let y = FieldElem::ints(k, 2, -1);
        assert_eq!(x * y, FieldElem::int(k, 5));
        assert_eq!(x * x.inv().unwrap(), FieldElem::one(k));
        assert_eq!(x.norm(), Q::from_integer(5));
    }

    #[test]
    fn squarefree_check() {
        assert!(FieldTag::quadratic(-1).is_ok());
        assert!(FieldTag::quadratic(5).is_ok());
        assert!(FieldTag::quadratic(12).is_err());
        assert!(FieldTag::quadratic(1).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        let k = FieldTag::quadratic(-1).unwrap();
        let e = parse_elem(k, "[1/2,-3]").unwrap();
        assert_eq!(e.to_string(), "[1/2,-3]");
        assert_eq!(parse_elem(FieldTag::Rational, "-4/6").unwrap().to_string(), "-2/3");
        assert!(parse_elem(FieldTag::Rational, "[1,1]").is_err());
    }

    #[test]
    fn factor_and_valuations() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(vp(360, 2), 3);
        assert_eq!(vp_q(&Q::new(9, 8), 2), -3);
        assert!(is_prime(97) && !is_prime(91));
    }
}
