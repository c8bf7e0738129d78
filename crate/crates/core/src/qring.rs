//! Sparse Laurent polynomials in a fractional power of q with exact rational
//! coefficients, plus the q-combinatorics built on them.
//!
//! A value stores a scale `D` and a map from integer exponents of `v = q^{1/D}`
//! to nonzero coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

#[derive(Clone, Debug, Default)]
pub struct QLaurent {
    d: u64,
    terms: BTreeMap<i64, Coeff>,
}

impl QLaurent {
    pub fn from_terms(d: u64, terms: impl IntoIterator<Item = (i64, Coeff)>) -> Self {
        assert!(d > 0, "scale must be positive");
        let mut out = QLaurent { d, terms: BTreeMap::new() };
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn zero() -> Self {
        QLaurent { d: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_terms(1, [(0, c)])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// `c * q^e`.
    pub fn monomial(c: Coeff, e: Rational64) -> Self {
        Self::from_terms(*e.denom() as u64, [(*e.numer(), c)])
    }

    pub fn q_pow(e: Rational64) -> Self {
        Self::monomial(Coeff::one(), e)
    }

    pub fn q_int_pow(e: i64) -> Self {
        Self::from_terms(1, [(e, Coeff::one())])
    }

    pub fn scale(&self) -> u64 {
        self.d
    }

    pub fn raw_terms(&self) -> &BTreeMap<i64, Coeff> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms as (exponent of q, coefficient), ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &Coeff)> + '_ {
        let d = self.d as i64;
        self.terms.iter().map(move |(e, c)| (Rational64::new(*e, d), c))
    }

    pub fn coeff(&self, e: Rational64) -> Coeff {
        let num = e.numer() * self.d as i64;
        if num % e.denom() != 0 {
            return Coeff::zero();
        }
        self.terms.get(&(num / e.denom())).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn min_exponent(&self) -> Option<Rational64> {
        self.terms.keys().next().map(|e| Rational64::new(*e, self.d as i64))
    }

    pub fn max_exponent(&self) -> Option<Rational64> {
        self.terms.keys().next_back().map(|e| Rational64::new(*e, self.d as i64))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Single-term check; returns (coefficient, exponent of q).
    pub fn as_monomial(&self) -> Option<(Coeff, Rational64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some((c.clone(), Rational64::new(*e, self.d as i64)))
    }

    fn add_term(&mut self, e: i64, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
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

    /// Re-express over `v' = q^{1/d2}`; `d2` must be a multiple of the scale.
    pub fn rescaled(&self, d2: u64) -> QLaurent {
        assert!(d2 % self.d == 0, "scale {d2} is not a multiple of {}", self.d);
        let f = (d2 / self.d) as i64;
        QLaurent { d: d2, terms: self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect() }
    }

    /// Smallest scale that represents the same value.
    pub fn reduced(&self) -> QLaurent {
        let mut g = self.d as i64;
        for e in self.terms.keys() {
            g = g.gcd(e);
        }
        let g = g.max(1);
        QLaurent {
            d: self.d / g as u64,
            terms: self.terms.iter().map(|(e, c)| (e / g, c.clone())).collect(),
        }
    }

    fn common(a: &QLaurent, b: &QLaurent) -> (QLaurent, QLaurent) {
        let d = lcm(a.d, b.d);
        (a.rescaled(d), b.rescaled(d))
    }

    pub fn scale_by(&self, c: &Coeff) -> QLaurent {
        if c.is_zero() {
            return QLaurent::zero();
        }
        QLaurent { d: self.d, terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn mul_q_pow(&self, e: Rational64) -> QLaurent {
        let d = lcm(self.d, *e.denom() as u64);
        let a = self.rescaled(d);
        let shift = e.numer() * (d as i64 / e.denom());
        QLaurent { d, terms: a.terms.into_iter().map(|(x, c)| (x + shift, c)).collect() }
    }

    pub fn pow(&self, n: u32) -> QLaurent {
        let mut out = QLaurent::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Replace q by q^s.
    pub fn substitute_power(&self, s: Rational64) -> QLaurent {
        assert!(!s.is_zero(), "substitution exponent must be nonzero");
        let d = self.d * *s.denom() as u64;
        QLaurent::from_terms(d, self.terms.iter().map(|(e, c)| (e * s.numer(), c.clone()))).reduced()
    }

    /// Exact quotient `self / g`, or `NonDivisible`.
    pub fn div_exact(&self, g: &QLaurent) -> Result<QLaurent> {
        if g.is_zero() {
            return Err(Error::NonDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(QLaurent::zero());
        }
        let (f, g) = Self::common(self, g);
        let d = f.d;
        let f0 = *f.terms.keys().next().unwrap();
        let g0 = *g.terms.keys().next().unwrap();
        // Compress by the gcd of all exponent offsets.
        let mut step = 0i64;
        for e in f.terms.keys() {
            step = step.gcd(&(e - f0));
        }
        for e in g.terms.keys() {
            step = step.gcd(&(e - g0));
        }
        let step = step.max(1);
        let fdeg = ((f.terms.keys().next_back().unwrap() - f0) / step) as usize;
        let gdeg = ((g.terms.keys().next_back().unwrap() - g0) / step) as usize;
        if gdeg > fdeg {
            return Err(Error::NonDivisible(format!("degree span {gdeg} exceeds {fdeg}")));
        }
        let shift = f0 - g0;
        let lead = g.terms.values().next_back().unwrap();
        if lead.is_integer() && lead.numer().magnitude().is_one() && f.is_integral() && g.is_integral() {
            let mut num = vec![BigInt::zero(); fdeg + 1];
            for (e, c) in &f.terms {
                num[((e - f0) / step) as usize] = c.numer().clone();
            }
            let neg = lead.is_negative();
            let den: Vec<(usize, BigInt)> =
                g.terms.iter().map(|(e, c)| (((e - g0) / step) as usize, c.numer().clone())).collect();
            let mut quot = vec![BigInt::zero(); fdeg - gdeg + 1];
            for i in (0..=fdeg - gdeg).rev() {
                let c = std::mem::take(&mut num[i + gdeg]);
                if c.is_zero() {
                    continue;
                }
                let c = if neg { -c } else { c };
                for (j, dj) in &den[..den.len() - 1] {
                    num[i + j] -= &c * dj;
                }
                quot[i] = c;
            }
            if num.iter().any(|c| !c.is_zero()) {
                return Err(Error::NonDivisible("nonzero remainder".into()));
            }
            return Ok(QLaurent::from_terms(
                d,
                quot.into_iter().enumerate().map(|(i, c)| (shift + i as i64 * step, Coeff::from_integer(c))),
            ));
        }
        let mut num = vec![Coeff::zero(); fdeg + 1];
        for (e, c) in &f.terms {
            num[((e - f0) / step) as usize] = c.clone();
        }
        let den: Vec<(usize, Coeff)> =
            g.terms.iter().map(|(e, c)| (((e - g0) / step) as usize, c.clone())).collect();
        let lead = den.last().unwrap().1.clone();
        let mut quot = vec![Coeff::zero(); fdeg - gdeg + 1];
        for i in (0..=fdeg - gdeg).rev() {
            let c = &num[i + gdeg] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in &den {
                num[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonDivisible("nonzero remainder".into()));
        }
        Ok(QLaurent::from_terms(
            d,
            quot.into_iter().enumerate().map(|(i, c)| (shift + i as i64 * step, c)),
        ))
    }

    /// `D; e1:c1, e2:c2, ...` with exponents of `v = q^{1/D}` ascending and `D` minimal.
    pub fn to_text(&self) -> String {
        let r = self.reduced();
        let body: Vec<String> = r.terms.iter().map(|(e, c)| format!("{e}:{c}")).collect();
        format!("{}; {}", r.d, body.join(", "))
    }

    pub fn from_text(s: &str) -> Result<QLaurent> {
        let (d, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse { pos: 0, msg: "missing ';' after scale".into() })?;
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos: 0, msg: format!("bad scale {d:?}") })?;
        if d == 0 {
            return Err(Error::Parse { pos: 0, msg: "scale must be positive".into() });
        }
        let mut out = QLaurent { d, terms: BTreeMap::new() };
        let base = s.len() - rest.len();
        for item in rest.split(',') {
            let item_t = item.trim();
            if item_t.is_empty() {
                continue;
            }
            let pos = base + (item.as_ptr() as usize - rest.as_ptr() as usize);
            let (e, c) = item_t
                .split_once(':')
                .ok_or_else(|| Error::Parse { pos, msg: format!("expected e:c, got {item_t:?}") })?;
            let e: i64 = e.trim().parse().map_err(|_| Error::Parse { pos, msg: format!("bad exponent {e:?}") })?;
            let c = parse_rational(c.trim()).ok_or_else(|| Error::Parse { pos, msg: format!("bad coefficient {c:?}") })?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.trim().parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[derive(Serialize, Deserialize)]
struct QLaurentJson {
    #[serde(rename = "D")]
    d: u64,
    terms: Vec<(i64, String)>,
}

impl Serialize for QLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.reduced();
        QLaurentJson { d: r.d, terms: r.terms.iter().map(|(e, c)| (*e, c.to_string())).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QLaurentJson::deserialize(d)?;
        if j.d == 0 {
            return Err(serde::de::Error::custom("scale must be positive"));
        }
        let mut out = QLaurent { d: j.d, terms: BTreeMap::new() };
        for (e, c) in j.terms {
            let c = parse_rational(&c).ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {c}")))?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl PartialEq for QLaurent {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.terms == b.terms
    }
}

impl Eq for QLaurent {}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let r = self.reduced();
        let mut first = true;
        for (e, c) in r.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = a.is_one();
            if e.is_zero() {
                write!(f, "{a}")?;
                continue;
            }
            if !unit {
                write!(f, "{a}*")?;
            }
            if e.is_one() {
                write!(f, "q")?;
            } else if e.is_integer() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(mut self, rhs: QLaurent) -> QLaurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        if rhs.is_zero() {
            return;
        }
        if rhs.d % self.d != 0 || self.d != rhs.d {
            let d = lcm(self.d, rhs.d);
            if d != self.d {
                *self = self.rescaled(d);
            }
            let f = (d / rhs.d) as i64;
            for (e, c) in &rhs.terms {
                self.add_term(e * f, c.clone());
            }
        } else {
            for (e, c) in &rhs.terms {
                self.add_term(*e, c.clone());
            }
        }
    }
}

impl AddAssign for QLaurent {
    fn add_assign(&mut self, rhs: QLaurent) {
        *self += &rhs;
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        *self += &(-rhs);
    }
}

impl<'a> Sub<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QLaurent {
    type Output = QLaurent;
    fn sub(mut self, rhs: QLaurent) -> QLaurent {
        self -= &rhs;
        self
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent { d: self.d, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

impl<'a> Mul<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        if self.is_zero() || rhs.is_zero() {
            return QLaurent::zero();
        }
        let d = lcm(self.d, rhs.d);
        let fa = (d / self.d) as i64;
        let fb = (d / rhs.d) as i64;
        if self.is_integral() && rhs.is_integral() {
            let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &rhs.terms {
                    *acc.entry(ea * fa + eb * fb).or_default() += ca.numer() * cb.numer();
                }
            }
            let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, Coeff::from_integer(c)));
            return QLaurent { d, terms: terms.collect() };
        }
        let mut out = QLaurent { d, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea * fa + eb * fb, ca * cb);
            }
        }
        out
    }
}

impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: QLaurent) -> QLaurent {
        &self * &rhs
    }
}

impl std::iter::Sum for QLaurent {
    fn sum<I: Iterator<Item = QLaurent>>(iter: I) -> QLaurent {
        let mut out = QLaurent::zero();
        for x in iter {
            out += &x;
        }
        out
    }
}

impl std::iter::Product for QLaurent {
    fn product<I: Iterator<Item = QLaurent>>(iter: I) -> QLaurent {
        let mut out = QLaurent::one();
        for x in iter {
            out = &out * &x;
        }
        out
    }
}

/// `{x} = q^{x/2} - q^{-x/2}` for rational x.
pub fn qint_frac(x: Rational64) -> QLaurent {
    let h = x / 2;
    QLaurent::q_pow(h) - QLaurent::q_pow(-h)
}

/// `{n} = q^{n/2} - q^{-n/2}`.
pub fn qint(n: i64) -> QLaurent {
    if n == 0 {
        return QLaurent::from_terms(2, []);
    }
    QLaurent::from_terms(2, [(n, Coeff::one()), (-n, -Coeff::one())])
}

/// `[n] = {n}/{1}`.
pub fn qnum(n: i64) -> QLaurent {
    let m = n.abs();
    let s = QLaurent::from_terms(2, (0..m).map(|l| (m - 1 - 2 * l, Coeff::one())));
    if n < 0 {
        -s
    } else {
        s
    }
}

/// `{n}! = {1}{2}...{n}`.
pub fn qfact(n: u64) -> QLaurent {
    (1..=n as i64).map(qint).product()
}

/// Gaussian binomial as an honest polynomial in q.
pub fn gauss_binom(n: u64, k: u64) -> QLaurent {
    if k > n {
        return QLaurent::zero();
    }
    let k = k.min(n - k) as usize;
    // row[j] holds the coefficient vector of G(m, j)
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n as usize {
        let mut next: Vec<Vec<BigInt>> = Vec::with_capacity(row.len() + 1);
        for j in 0..=m.min(k) {
            let mut v: Vec<BigInt> = Vec::new();
            if j < row.len() && j < m {
                // q^j * G(m-1, j)
                let src = &row[j];
                v.resize(src.len() + j, BigInt::zero());
                for (i, c) in src.iter().enumerate() {
                    v[i + j] += c;
                }
            }
            if j >= 1 {
                let src = &row[j - 1];
                if v.len() < src.len() {
                    v.resize(src.len(), BigInt::zero());
                }
                for (i, c) in src.iter().enumerate() {
                    v[i] += c;
                }
            }
            next.push(v);
        }
        row = next;
    }
    let v = &row[k];
    QLaurent::from_terms(1, v.iter().enumerate().map(|(i, c)| (i as i64, BigRational::from_integer(c.clone()))))
}

/// Balanced q-binomial `{n}!/({k}!{n-k}!)`, a Laurent polynomial in q^{1/2}.
pub fn qbinom(n: i64, k: u64) -> Result<QLaurent> {
    if k == 0 {
        return Ok(QLaurent::one());
    }
    if n >= 0 {
        let n = n as u64;
        if k > n {
            return Ok(QLaurent::zero());
        }
        let shift = Rational64::new(-((k * (n - k)) as i64), 2);
        return Ok(gauss_binom(n, k).mul_q_pow(shift));
    }
    let num: QLaurent = (0..k as i64).map(|i| qint(n - i)).product();
    num.div_exact(&qfact(k))
        .map_err(|e| Error::NonDivisible(format!("q-binomial ({n},{k}): {e}")))
}

/// `prod_{i<m} (1 - first * q^{i*step})` for a monomial `first`.
pub fn pochhammer(first: &QLaurent, step: Rational64, m: u64) -> Result<QLaurent> {
    let (c, e) = first
        .as_monomial()
        .ok_or_else(|| Error::Invalid("pochhammer needs a single-term first argument".into()))?;
    let mut out = QLaurent::one();
    for i in 0..m as i64 {
        let f = QLaurent::one() - QLaurent::monomial(c.clone(), e + step * i);
        out = &out * &f;
    }
    Ok(out)
}

/// `(q^x; q)_m`.
pub fn qpoch(x: Rational64, m: u64) -> QLaurent {
    pochhammer(&QLaurent::q_pow(x), Rational64::one(), m).expect("monomial input")
}

/// `(q^x; q^s)_m` with integer exponents.
pub fn qpoch_step(x: i64, s: i64, m: u64) -> QLaurent {
    pochhammer(&QLaurent::q_int_pow(x), Rational64::from_integer(s), m).expect("monomial input")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn qint_examples() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(1), QLaurent::q_pow(r(1, 2)) - QLaurent::q_pow(r(-1, 2)));
        assert_eq!(qint(-2), -qint(2));
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(2, 1).unwrap(), QLaurent::q_pow(r(1, 2)) + QLaurent::q_pow(r(-1, 2)));
        let expect = QLaurent::from_terms(1, [(2, int(1)), (1, int(1)), (0, int(2)), (-1, int(1)), (-2, int(1))]);
        assert_eq!(qbinom(4, 2).unwrap(), expect);
        assert!(qbinom(7, 0).unwrap().is_one());
    }

    #[test]
    fn qbinom_matches_factorial_quotient() {
        for n in 0..9i64 {
            for k in 0..=n as u64 {
                let direct = qfact(n as u64)
                    .div_exact(&(&qfact(k) * &qfact(n as u64 - k)))
                    .unwrap();
                assert_eq!(qbinom(n, k).unwrap(), direct, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn negative_top_binomial() {
        let b = qbinom(-2, 2).unwrap();
        let lhs = &b * &qfact(2);
        assert_eq!(lhs, &qint(-2) * &qint(-3));
    }

    #[test]
    fn pochhammer_examples() {
        let q = QLaurent::q_int_pow(1);
        let p = pochhammer(&q, r(1, 1), 2).unwrap();
        let expect = (QLaurent::one() - QLaurent::q_int_pow(1)) * (QLaurent::one() - QLaurent::q_int_pow(2));
        assert_eq!(p, expect);
        assert!(pochhammer(&q, r(1, 1), 0).unwrap().is_one());
        assert!(pochhammer(&QLaurent::q_int_pow(-1), r(1, 1), 2).unwrap().is_zero());
    }

    #[test]
    fn substitute_examples() {
        let f = QLaurent::q_int_pow(1) + QLaurent::q_int_pow(-1);
        assert_eq!(f.substitute_power(r(-1, 1)), f);
        assert_eq!(QLaurent::q_pow(r(1, 2)).substitute_power(r(2, 1)), QLaurent::q_int_pow(1));
        assert_eq!(qint(3).substitute_power(r(-1, 1)), -qint(3));
    }

    #[test]
    fn div_exact_examples() {
        let expect = QLaurent::q_int_pow(1) + QLaurent::q_int_pow(-1);
        assert_eq!(qint(4).div_exact(&qint(2)).unwrap(), expect);
        let f = qint(5) * qint(3);
        assert_eq!(f.div_exact(&QLaurent::one()).unwrap(), f);
        let a = QLaurent::one() - QLaurent::q_int_pow(1);
        let b = QLaurent::one() - QLaurent::q_int_pow(2);
        assert!(matches!(a.div_exact(&b), Err(Error::NonDivisible(_))));
    }

    #[test]
    fn different_scales_compare_equal() {
        let a = QLaurent::from_terms(2, [(2, int(3))]);
        let b = QLaurent::from_terms(1, [(1, int(3))]);
        assert_eq!(a, b);
        assert_eq!(a.to_text(), "1; 1:3");
    }

    #[test]
    fn text_round_trip() {
        let f = qint(3) * QLaurent::monomial(rat(-7, 5), r(1, 3));
        let s = f.to_text();
        let g = QLaurent::from_text(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_text(), s);
        let j = serde_json::to_string(&f).unwrap();
        let h: QLaurent = serde_json::from_str(&j).unwrap();
        assert_eq!(h, f);
        assert_eq!(serde_json::to_string(&h).unwrap(), j);
    }
}
