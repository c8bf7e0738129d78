//! The Laplace transform in formal and root-of-unity form, and the kernels
//! Y_c(k,b), Y(k,a) and S_N.

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use crate::cyclotomic::{ev, gauss_sum, odd_colors, xi_exponent, CycElem};
use crate::error::{Error, Result};
use crate::numtheory::mod_inverse;
use crate::qring::{int, qbinom, qfact, qint, qpoch, QLaurent};

pub use crate::cyclotomic::{QuadSum as QuadMonomialSum, QuadTerm};

fn linear_only(f: &QuadMonomialSum) -> Result<()> {
    if f.terms.iter().any(|t| !t.alpha.is_zero()) {
        return Err(Error::Invalid("Laplace transform of a term quadratic in n".into()));
    }
    Ok(())
}

/// L_{d;n}: q^{n a} ↦ q^{-a²/d}.
pub fn laplace_formal(f: &QuadMonomialSum, d: Rational64) -> Result<QLaurent> {
    linear_only(f)?;
    if d.is_zero() {
        return Err(Error::Invalid("Laplace transform with d = 0".into()));
    }
    let mut out = QLaurent::zero();
    for t in &f.terms {
        out += &t.coeff.mul_q_pow(t.gamma - t.beta * t.beta / d);
    }
    Ok(out)
}

/// Σ^ξ q^{d(n²-1)/4} f(n) divided by γ_d(ξ), computed termwise by the reduction rule.
pub fn laplace_at_root(f: &QuadMonomialSum, d: i64, r: u64) -> Result<CycElem> {
    linear_only(f)?;
    if d == 0 {
        return Err(Error::Invalid("Laplace transform with d = 0".into()));
    }
    let c = d.unsigned_abs().gcd(&r);
    let r1 = r / c;
    let d1 = d / c as i64;
    let d1_inv = mod_inverse(d1, r1).expect("d/c is coprime to r/c") as i64;
    let mut out = CycElem::zero(r);
    for t in &f.terms {
        let a = xi_exponent(*t.beta.numer(), *t.beta.denom() as u64, r)?;
        if a % c as i64 != 0 {
            continue;
        }
        let a1 = a / c as i64;
        let e = (-(a1 as i128) * a1 as i128 * d1_inv as i128).rem_euclid(r1 as i128) as i64;
        let zeta = CycElem::xi_pow(r, e * c as i64);
        out += &(&ev(&t.coeff.mul_q_pow(t.gamma), r)? * &zeta);
    }
    Ok(out)
}

/// Y_c(k,b) = (-1)^k Σ_{n=-⌊k/c⌋}^{⌊(k+1)/c⌋} (-1)^n qbinom(2k+1, k+nc) q^{cbn²}.
pub fn y_c(k: u64, b: i64, c: u64) -> QLaurent {
    assert!(c > 0);
    let (k, c) = (k as i64, c as i64);
    let mut out = QLaurent::zero();
    for n in -(k / c)..=((k + 1) / c) {
        let bin = qbinom(2 * k + 1, (k + n * c) as u64).expect("nonnegative top");
        let sign = if (n + k) % 2 == 0 { int(1) } else { int(-1) };
        out += &bin.mul_q_pow(Rational64::from_integer(c * b * n * n)).scale_by(&sign);
    }
    out
}

/// Y(k,a) = Σ_{j=0}^{2k+1} (-1)^j qbinom(2k+1, j) q^{(j-k)²/a}.
pub fn y_habiro(k: u64, a: u64) -> QLaurent {
    assert!(a > 0);
    let mut out = QLaurent::zero();
    for j in 0..=2 * k + 1 {
        let bin = qbinom((2 * k + 1) as i64, j).expect("nonnegative top");
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        let e = j as i64 - k as i64;
        out += &bin.mul_q_pow(Rational64::new(e * e, a as i64)).scale_by(&sign);
    }
    out
}

/// A quotient of two Laurent polynomials.
#[derive(Clone, Debug)]
pub struct QFrac {
    pub num: QLaurent,
    pub den: QLaurent,
}

impl QFrac {
    pub fn at_root(&self, r: u64) -> Result<CycElem> {
        let d = ev(&self.den, r)?;
        if d.is_zero() {
            return Err(Error::PoleHit(format!("denominator vanishes at order {r}")));
        }
        ev(&self.num, r)?.div(&d)
    }

    /// The quotient as a Laurent polynomial, when it is one.
    pub fn to_laurent(&self) -> Result<QLaurent> {
        self.num.div_exact(&self.den)
    }
}

/// S_N = 1 + Σ_{n≥1} q^{Ncn} (q^{-N})_{cn} (1+q^{cn}) q^{cbn²} / (q^{N+1})_{cn}, over the
/// common denominator (q^{N+1})_{cM}, M = ⌊N/c⌋.
pub fn s_n(big_n: u64, c: u64, b: i64) -> QFrac {
    assert!(big_n > 0 && c > 0);
    let m = big_n / c;
    let nn = big_n as i64;
    let cc = c as i64;
    let den = qpoch(Rational64::from_integer(nn + 1), c * m);
    let mut num = den.clone();
    for n in 1..=m as i64 {
        let mut t = qpoch(Rational64::from_integer(-nn), (cc * n) as u64);
        t = &t * &(QLaurent::one() + QLaurent::q_int_pow(cc * n));
        t = t.mul_q_pow(Rational64::from_integer(nn * cc * n + cc * b * n * n));
        // fill the denominator up to (q^{N+1})_{cM}
        t = &t * &qpoch(Rational64::from_integer(nn + 1 + cc * n), c * m - (cc * n) as u64);
        num += &t;
    }
    QFrac { num, den }
}

/// S_N either as a Laurent polynomial or evaluated at ξ of order r.
pub enum SnValue {
    Formal(QFrac),
    AtRoot(CycElem),
}

pub fn s_n_value(big_n: u64, c: u64, b: i64, r: Option<u64>) -> Result<SnValue> {
    let f = s_n(big_n, c, b);
    match r {
        None => Ok(SnValue::Formal(f)),
        Some(r) => Ok(SnValue::AtRoot(f.at_root(r)?)),
    }
}

/// Σ^ξ q^{d(n²-1)/4} qbinom(n+k,2k+1) {k}! {n} by direct summation.
pub fn binomial_xi_sum(d: i64, k: u64, r: u64) -> Result<CycElem> {
    let fk = qfact(k);
    let mut out = CycElem::zero(r);
    for n in odd_colors(r) {
        let mut f = qbinom(n + k as i64, 2 * k + 1)?;
        f = &(&f * &fk) * &qint(n);
        f = f.mul_q_pow(Rational64::new(d * (n * n - 1), 4));
        out += &ev(&f, r)?;
    }
    Ok(out)
}

/// Right side of the Laplace evaluation of [`binomial_xi_sum`]:
/// -2 γ_d(ξ) ev(Y_c(k,-d_1*) {k}!/{2k+1}!), with c = gcd(d,r).
pub fn binomial_xi_sum_closed(d: i64, k: u64, r: u64) -> Result<CycElem> {
    if 2 * k + 1 >= r {
        return Err(Error::PoleHit(format!("{{2k+1}}! vanishes at order {r} for k={k}")));
    }
    let c = d.unsigned_abs().gcd(&r);
    let r1 = r / c;
    let d1 = d / c as i64;
    let d1_inv = mod_inverse(d1, r1).expect("d/c is coprime to r/c") as i64;
    let y = ev(&y_c(k, -d1_inv, c), r)?;
    let ratio = ev(&qfact(k), r)?.div(&ev(&qfact(2 * k + 1), r)?)?;
    let g = gauss_sum(d, r);
    Ok((&(&g * &y) * &ratio).scale(&BigRational::from_integer((-2).into())))
}

/// Quotient certifying that (γ_d/γ_1) ev(Y_c(k,b)) is divisible by ev({2k+1}!/{k}!),
/// with c = gcd(d,r). Both sides are multiplied by conj(γ_1) to stay inside Z[ξ].
pub fn gauss_y_divisibility(d: i64, k: u64, b: i64, r: u64) -> Result<Option<CycElem>> {
    let c = d.unsigned_abs().gcd(&r);
    let g1 = gauss_sum(1, r);
    let g1c = g1.conj();
    let x = &(&gauss_sum(d, r) * &g1c) * &ev(&y_c(k, b, c), r)?;
    let ratio = qfact(2 * k + 1).div_exact(&qfact(k))?;
    let y = &(&g1 * &g1c) * &ev(&ratio, r)?;
    crate::cyclotomic::divides(&x, &y)
}

/// Convenience: the one-term family q^{β n}.
pub fn monomial_family(beta: Rational64) -> QuadMonomialSum {
    QuadMonomialSum::new(vec![QuadTerm::linear(beta)])
}
