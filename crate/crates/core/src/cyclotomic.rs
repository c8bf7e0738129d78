//! Exact arithmetic in Q(ξ) for a primitive r-th root of unity ξ, stored in the
//! power basis modulo Φ_r, together with evaluation of q-expressions at ξ and
//! Gauss sums.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::mod_inverse;
use crate::qring::{parse_rational, QLaurent};

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_poly(d);
            num = div_monic_int(&num, &den);
        }
    }
    let p = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn div_monic_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Element of Q(ξ_r) in the power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycElem {
    r: u64,
    c: Vec<BigRational>,
}

fn reduce_vec(r: u64, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(r);
    let deg = phi.len() - 1;
    // fold x^r = 1 first
    if v.len() > r as usize {
        let mut w = vec![BigRational::zero(); r as usize];
        for (i, c) in v.into_iter().enumerate() {
            if !c.is_zero() {
                w[i % r as usize] += c;
            }
        }
        v = w;
    }
    for i in (deg..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for j in 0..deg {
            if !phi[j].is_zero() {
                v[i - deg + j] -= &c * BigRational::from_integer(phi[j].clone());
            }
        }
    }
    v.resize(deg, BigRational::zero());
    v
}

impl CycElem {
    pub fn new(r: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(r >= 1, "order must be positive");
        CycElem { r, c: reduce_vec(r, coeffs) }
    }

    pub fn zero(r: u64) -> Self {
        CycElem { r, c: vec![BigRational::zero(); euler_phi(r) as usize] }
    }

    pub fn from_rational(r: u64, x: BigRational) -> Self {
        let mut out = Self::zero(r);
        if out.c.is_empty() {
            return out;
        }
        out.c[0] = x;
        out
    }

    pub fn one(r: u64) -> Self {
        Self::from_rational(r, BigRational::one())
    }

    pub fn from_int(r: u64, n: i64) -> Self {
        Self::from_rational(r, BigRational::from_integer(n.into()))
    }

    /// ξ^e.
    pub fn xi_pow(r: u64, e: i64) -> Self {
        let mut v = vec![BigRational::zero(); r as usize];
        v[e.rem_euclid(r as i64) as usize] = BigRational::one();
        Self::new(r, v)
    }

    pub fn order(&self) -> u64 {
        self.r
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.r)
    }

    /// Membership in Z[ξ].
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    /// Image under ξ ↦ ξ^k, k coprime to r.
    pub fn galois(&self, k: u64) -> CycElem {
        assert_eq!(k.gcd(&self.r), 1, "Galois exponent must be coprime to the order");
        let r = self.r as usize;
        let mut v = vec![BigRational::zero(); r];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                v[(i * k as usize) % r] += c;
            }
        }
        CycElem::new(self.r, v)
    }

    /// Complex conjugation ξ ↦ ξ^{-1}.
    pub fn conj(&self) -> CycElem {
        if self.r <= 2 {
            return self.clone();
        }
        self.galois(self.r - 1)
    }

    pub fn norm(&self) -> BigRational {
        let mut p = CycElem::one(self.r);
        for k in 1..=self.r {
            if k.gcd(&self.r) == 1 {
                p = &p * &self.galois(k);
            }
        }
        p.c.first().cloned().unwrap_or_else(BigRational::one)
    }

    pub fn inverse(&self) -> Result<CycElem> {
        if self.is_zero() {
            return Err(Error::PoleHit(format!("inverse of zero in Q(ξ_{})", self.r)));
        }
        let mut p = CycElem::one(self.r);
        for k in 2..=self.r {
            if k.gcd(&self.r) == 1 {
                p = &p * &self.galois(k);
            }
        }
        let n = (&p * self).c[0].clone();
        Ok(p.scale(&n.recip()))
    }

    pub fn div(&self, y: &CycElem) -> Result<CycElem> {
        Ok(self * &y.inverse()?)
    }

    pub fn scale(&self, x: &BigRational) -> CycElem {
        CycElem { r: self.r, c: self.c.iter().map(|c| c * x).collect() }
    }

    pub fn pow(&self, n: i64) -> Result<CycElem> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut out = CycElem::one(self.r);
        let mut b = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        format!("{}; {}", self.r, body.join(", "))
    }

    pub fn from_text(s: &str) -> Result<CycElem> {
        let (r, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse { pos: 0, msg: "missing ';' after order".into() })?;
        let r: u64 = r.trim().parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad order {r:?}") })?;
        if r == 0 {
            return Err(Error::BadOrder(r));
        }
        let mut c = Vec::new();
        let base = s.len() - rest.len();
        for item in rest.split(',') {
            let t = item.trim();
            if t.is_empty() {
                continue;
            }
            let pos = base + (item.as_ptr() as usize - rest.as_ptr() as usize);
            c.push(parse_rational(t).ok_or_else(|| Error::Parse { pos, msg: format!("bad coefficient {t:?}") })?);
        }
        if c.len() != euler_phi(r) as usize {
            return Err(Error::Parse { pos: base, msg: format!("expected {} coefficients", euler_phi(r)) });
        }
        Ok(CycElem { r, c })
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    r: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson { r: self.r, coeffs: self.c.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycJson::deserialize(d)?;
        let text = format!("{}; {}", j.r, j.coeffs.join(", "));
        CycElem::from_text(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
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
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycElem> for &'a CycElem {
    type Output = CycElem;
    fn add(self, rhs: &CycElem) -> CycElem {
        assert_eq!(self.r, rhs.r, "orders differ");
        CycElem { r: self.r, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CycElem> for &'a CycElem {
    type Output = CycElem;
    fn sub(self, rhs: &CycElem) -> CycElem {
        assert_eq!(self.r, rhs.r, "orders differ");
        CycElem { r: self.r, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl AddAssign<&CycElem> for CycElem {
    fn add_assign(&mut self, rhs: &CycElem) {
        assert_eq!(self.r, rhs.r, "orders differ");
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

impl SubAssign<&CycElem> for CycElem {
    fn sub_assign(&mut self, rhs: &CycElem) {
        assert_eq!(self.r, rhs.r, "orders differ");
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a -= b;
        }
    }
}

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem { r: self.r, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl<'a> Mul<&'a CycElem> for &'a CycElem {
    type Output = CycElem;
    fn mul(self, rhs: &CycElem) -> CycElem {
        assert_eq!(self.r, rhs.r, "orders differ");
        let n = self.c.len();
        if n == 0 {
            return self.clone();
        }
        if let Some(c) = mul_small(self.r, &self.c, &rhs.c) {
            return CycElem { r: self.r, c };
        }
        let mut v = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        CycElem::new(self.r, v)
    }
}

fn small_ints(c: &[BigRational]) -> Option<Vec<i64>> {
    c.iter().map(|x| if x.is_integer() { x.numer().to_i64() } else { None }).collect()
}

/// Product in machine integers when both sides are integral and nothing overflows.
fn mul_small(r: u64, a: &[BigRational], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let (a, b) = (small_ints(a)?, small_ints(b)?);
    let n = a.len();
    let mut v = vec![0i128; 2 * n - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = v[i + j].checked_add(x as i128 * y as i128)?;
        }
    }
    let phi: Vec<i128> = cyclotomic_poly(r).iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
    let deg = phi.len() - 1;
    for i in (deg..v.len()).rev() {
        let c = std::mem::take(&mut v[i]);
        if c == 0 {
            continue;
        }
        for j in 0..deg {
            if phi[j] != 0 {
                v[i - deg + j] = v[i - deg + j].checked_sub(c.checked_mul(phi[j])?)?;
            }
        }
    }
    v.truncate(deg);
    Some(v.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
}

impl Add for CycElem {
    type Output = CycElem;
    fn add(self, rhs: CycElem) -> CycElem {
        &self + &rhs
    }
}

impl Sub for CycElem {
    type Output = CycElem;
    fn sub(self, rhs: CycElem) -> CycElem {
        &self - &rhs
    }
}

impl Mul for CycElem {
    type Output = CycElem;
    fn mul(self, rhs: CycElem) -> CycElem {
        &self * &rhs
    }
}

impl Neg for CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        -&self
    }
}

/// Accumulates a sum of monomials modulo x^r - 1 before the final reduction.
#[derive(Clone, Debug)]
pub struct CycAcc {
    r: u64,
    v: Vec<BigRational>,
}

impl CycAcc {
    pub fn new(r: u64) -> Self {
        CycAcc { r, v: vec![BigRational::zero(); r as usize] }
    }

    pub fn add_monomial(&mut self, e: i64, c: &BigRational) {
        self.v[e.rem_euclid(self.r as i64) as usize] += c;
    }

    pub fn add_elem(&mut self, x: &CycElem) {
        for (i, c) in x.c.iter().enumerate() {
            if !c.is_zero() {
                self.v[i] += c;
            }
        }
    }

    pub fn finish(self) -> CycElem {
        CycElem::new(self.r, self.v)
    }
}

/// Exponent of ξ standing for q^{e/d}, or an error when d is not invertible mod r.
pub fn xi_exponent(e: i64, d: u64, r: u64) -> Result<i64> {
    let g = e.unsigned_abs().gcd(&d);
    let (e, d) = (e / g.max(1) as i64, d / g.max(1));
    let inv = mod_inverse(d as i64, r).ok_or(Error::NonCoprimeDenominator { h: d, r })?;
    Ok(((e as i128 * inv as i128).rem_euclid(r as i128)) as i64)
}

fn check_order(r: u64) -> Result<()> {
    if r == 0 || r % 2 == 0 {
        return Err(Error::BadOrder(r));
    }
    Ok(())
}

/// The evaluation map q^{1/h} ↦ ξ^{h^{-1} mod r}.
pub fn ev(f: &QLaurent, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let f = f.reduced();
    let d = f.scale();
    let inv = mod_inverse(d as i64, r).ok_or(Error::NonCoprimeDenominator { h: d, r })?;
    let mut acc = CycAcc::new(r);
    for (e, c) in f.raw_terms() {
        let x = (*e as i128 * inv as i128).rem_euclid(r as i128) as i64;
        acc.add_monomial(x, c);
    }
    Ok(acc.finish())
}

/// The odd residues 0 < n < 2r summed over by Σ^ξ.
pub fn odd_colors(r: u64) -> impl Iterator<Item = i64> {
    (0..r as i64).map(|i| 2 * i + 1)
}

/// γ_d(ξ) = Σ^ξ q^{d(n²-1)/4}.
pub fn gauss_sum(d: i64, r: u64) -> CycElem {
    let mut acc = CycAcc::new(r);
    let one = BigRational::one();
    for n in odd_colors(r) {
        let e = (d as i128 * ((n as i128 * n as i128 - 1) / 4)).rem_euclid(r as i128) as i64;
        acc.add_monomial(e, &one);
    }
    acc.finish()
}

/// `coeff · q^{α n² + β n + γ}` for a symbolic color n.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadTerm {
    pub coeff: QLaurent,
    pub alpha: Rational64,
    pub beta: Rational64,
    pub gamma: Rational64,
}

impl QuadTerm {
    pub fn new(coeff: QLaurent, alpha: Rational64, beta: Rational64, gamma: Rational64) -> Self {
        QuadTerm { coeff, alpha, beta, gamma }
    }

    /// `q^{β n}` with unit coefficient.
    pub fn linear(beta: Rational64) -> Self {
        QuadTerm::new(QLaurent::one(), Rational64::zero(), beta, Rational64::zero())
    }

    pub fn at(&self, n: i64) -> QLaurent {
        let n = Rational64::from_integer(n);
        self.coeff.mul_q_pow(self.alpha * n * n + self.beta * n + self.gamma)
    }
}

/// A finite sum of quadratic-exponent monomials in the color n.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuadSum {
    pub terms: Vec<QuadTerm>,
}

impl QuadSum {
    pub fn new(terms: Vec<QuadTerm>) -> Self {
        QuadSum { terms }
    }

    pub fn at(&self, n: i64) -> QLaurent {
        self.terms.iter().map(|t| t.at(n)).sum()
    }
}

/// Σ^ξ f(n) over odd 0 < n < 2r.
pub fn xi_sum(f: &QuadSum, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let mut out = CycElem::zero(r);
    for n in odd_colors(r) {
        out += &ev(&f.at(n), r)?;
    }
    Ok(out)
}

/// Quotient x/y when it lies in Z[ξ].
pub fn divides(x: &CycElem, y: &CycElem) -> Result<Option<CycElem>> {
    if !x.is_integral() || !y.is_integral() {
        return Err(Error::Invalid("divisibility test needs elements of Z[ξ]".into()));
    }
    if y.is_zero() {
        return Err(Error::Invalid("divisibility by zero".into()));
    }
    let q = x.div(y)?;
    Ok(if q.is_integral() { Some(q) } else { None })
}

/// ∏ (1 - ξ^j) over l <= j < l+m with c ∤ j.
pub fn tilde_pochhammer(l: i64, m: u64, c: u64, r: u64) -> CycElem {
    let mut out = CycElem::one(r);
    for j in l..l + m as i64 {
        if j.rem_euclid(c as i64) != 0 {
            out = &out * &(&CycElem::one(r) - &CycElem::xi_pow(r, j));
        }
    }
    out
}
