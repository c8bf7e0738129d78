//! Jacobi symbols, Dedekind sums, modular inverses and negative continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Surgery coefficients, orbit invariants and Euler numbers.
pub type Fraction = Rational64;

pub fn sn(x: i64) -> i64 {
    x.signum()
}

pub fn sn_frac(x: Fraction) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Jacobi symbol (d/r) for odd r >= 1.
pub fn jacobi(d: i64, r: u64) -> Result<i8> {
    if r % 2 == 0 || r == 0 {
        return Err(Error::BadOrder(r));
    }
    let mut n = r as i128;
    let mut a = (d as i128).rem_euclid(n);
    let mut res = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    Ok(if n == 1 { res } else { 0 })
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m = m as i128;
    let g = (a as i128).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m) as u64)
}

fn sawtooth(x: &BigRational) -> BigRational {
    if x.is_integer() {
        return BigRational::zero();
    }
    x - x.floor() - BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Dedekind sum s(b,a) by the sawtooth definition.
///
/// For negative `a` the value is `-s(b,|a|)`; with this convention
/// `3 s(1,a) = 1/(2a) + (a - 3 sn(a))/4` holds for every nonzero `a`.
pub fn dedekind_sum(b: i64, a: i64) -> Result<BigRational> {
    if a == 0 {
        return Err(Error::Invalid("Dedekind sum needs a nonzero modulus".into()));
    }
    if b.gcd(&a) != 1 {
        return Err(Error::NonCoprime(format!("s({b},{a})")));
    }
    let m = a.abs();
    let mut s = BigRational::zero();
    for i in 1..m {
        let x = BigRational::new(BigInt::from(i), BigInt::from(m));
        let y = BigRational::new(BigInt::from(i as i128 * b as i128), BigInt::from(m));
        s += sawtooth(&x) * sawtooth(&y);
    }
    Ok(if a < 0 { -s } else { s })
}

/// Rounding rule for the continued-fraction step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Ceil,
    Floor,
}

/// Expansion `[m_1, ..., m_n]` with `x = -1/(m_n - 1/(m_{n-1} - ... - 1/m_1))`.
pub fn neg_continued_fraction(x: Fraction) -> Vec<i64> {
    neg_continued_fraction_with(x, Rounding::Ceil)
}

pub fn neg_continued_fraction_with(x: Fraction, rounding: Rounding) -> Vec<i64> {
    assert!(!x.is_zero(), "continued fraction of zero");
    let mut y = -x.recip();
    let mut out = Vec::new();
    loop {
        let m = match rounding {
            Rounding::Ceil => y.ceil(),
            Rounding::Floor => y.floor(),
        };
        out.push(m.to_integer());
        if y == m {
            break;
        }
        y = (m - y).recip();
    }
    out.reverse();
    out
}

/// Back-substitution of an expansion; `None` if an intermediate value is zero.
pub fn cf_value(ms: &[i64]) -> Option<Fraction> {
    let mut x: Option<Fraction> = None;
    for &m in ms {
        let m = Fraction::from_integer(m);
        x = Some(match x {
            None => m,
            Some(v) => {
                if v.is_zero() {
                    return None;
                }
                m - v.recip()
            }
        });
    }
    let v = x?;
    if v.is_zero() {
        return None;
    }
    Some(-v.recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d)
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 9).unwrap(), 1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert!(jacobi(2, 8).is_err());
        assert_eq!(jacobi(-1, 3).unwrap(), -1);
        assert_eq!(jacobi(5, 1).unwrap(), 1);
    }

    #[test]
    fn dedekind_examples() {
        assert!(dedekind_sum(7, 1).unwrap().is_zero());
        assert!(dedekind_sum(7, -1).unwrap().is_zero());
        assert_eq!(dedekind_sum(1, 3).unwrap(), BigRational::new(1.into(), 18.into()));
        assert!(dedekind_sum(1, 2).unwrap().is_zero());
        assert!(dedekind_sum(2, 4).is_err());
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(neg_continued_fraction(fr(-1, 3)), vec![3]);
        assert_eq!(neg_continued_fraction(fr(1, 2)), vec![-2]);
        assert_eq!(neg_continued_fraction(fr(2, 3)), vec![2, -1]);
        assert_eq!(cf_value(&[2, -1]), Some(fr(2, 3)));
    }

    #[test]
    fn floor_rounding_gives_other_expansion() {
        let a = neg_continued_fraction_with(fr(3, 2), Rounding::Ceil);
        let b = neg_continued_fraction_with(fr(3, 2), Rounding::Floor);
        assert_ne!(a, b);
        assert_eq!(cf_value(&a), Some(fr(3, 2)));
        assert_eq!(cf_value(&b), Some(fr(3, 2)));
    }

    #[test]
    fn mod_inverse_basic() {
        assert_eq!(mod_inverse(2, 3), Some(2));
        assert_eq!(mod_inverse(-1, 5), Some(4));
        assert_eq!(mod_inverse(3, 9), None);
    }
}
