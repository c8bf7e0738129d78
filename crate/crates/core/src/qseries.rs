//! Exact checks of the Andrews multi-sum identity for the special Bailey pair
//! and of the generalized Watson identity under the specialization that
//! produces F_k(q,a,b).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::CycElem;
use crate::error::{Error, Result};
use crate::qring::{int, QLaurent};
use crate::unified::WLaurent;

/// Fixed seed of the randomized Andrews grid.
pub const ANDREWS_SEED: u64 = 0x5eed_a17d;

// ---------------------------------------------------------------------------
// Andrews identity

/// The special Bailey pair relative to 1: (α_n, β_n).
pub fn bailey_special(n: u64) -> (QLaurent, QLaurent) {
    if n == 0 {
        return (QLaurent::one(), QLaurent::one());
    }
    let n = n as i64;
    let sign = if n % 2 == 0 { int(1) } else { int(-1) };
    let alpha = QLaurent::monomial(sign, Rational64::from_integer(n * (n - 1) / 2))
        * (QLaurent::one() + QLaurent::q_int_pow(n));
    (alpha, QLaurent::zero())
}

fn pow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// (x; q)_n at rational values.
fn poch_at(x: &BigRational, q: &BigRational, n: u64) -> BigRational {
    let mut out = BigRational::one();
    let mut y = x.clone();
    for _ in 0..n {
        out *= BigRational::one() - &y;
        y *= q;
    }
    out
}

fn eval_at(f: &QLaurent, q: &BigRational) -> Result<BigRational> {
    let mut out = BigRational::zero();
    for (e, c) in f.terms() {
        if !e.is_integer() {
            return Err(Error::Invalid(format!("fractional exponent {e} at a rational point")));
        }
        out += c * pow(q, e.to_integer());
    }
    Ok(out)
}

fn nonzero(x: BigRational, what: &str) -> Result<BigRational> {
    if x.is_zero() {
        return Err(Error::PoleHit(what.to_string()));
    }
    Ok(x)
}

/// Both sides of the Andrews identity at a rational point.
#[derive(Clone, Debug, Serialize)]
pub struct AndrewsReport {
    pub k: usize,
    pub n: u64,
    pub q: String,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
    pub equal: bool,
}

/// Evaluates both sides at q and the given b_i, c_i, using the special Bailey pair.
/// `beta1` replaces β_1 (a negative control).
pub fn andrews_eval(
    n: u64,
    q: &BigRational,
    b: &[BigRational],
    c: &[BigRational],
    beta1: Option<&BigRational>,
) -> Result<AndrewsReport> {
    let k = b.len();
    if k == 0 || c.len() != k {
        return Err(Error::Invalid("need k >= 1 pairs (b_i, c_i)".into()));
    }
    let qn = pow(q, -(n as i64));
    let mut lhs = BigRational::zero();
    for m in 0..=n {
        let (alpha, _) = bailey_special(m);
        let mi = m as i64;
        let mut term = eval_at(&alpha, q)? * pow(q, -mi * (mi - 1) / 2 + (k as i64) * mi + (n as i64) * mi);
        if m % 2 == 1 {
            term = -term;
        }
        term *= poch_at(&qn, q, m) / nonzero(poch_at(&pow(q, n as i64 + 1), q, m), "(q^{N+1})_n")?;
        for (bi, ci) in b.iter().zip(c) {
            let den = pow(bi, mi) * pow(ci, mi) * poch_at(&(q / bi), q, m) * poch_at(&(q / ci), q, m);
            term *= poch_at(bi, q, m) * poch_at(ci, q, m) / nonzero(den, "(q/b_i)_n (q/c_i)_n")?;
        }
        lhs += term;
    }
    let beta = |m: u64| -> BigRational {
        match (m, beta1) {
            (1, Some(x)) => x.clone(),
            _ => eval_at(&bailey_special(m).1, q).expect("integral exponents"),
        }
    };
    let (bk, ck) = (&b[k - 1], &c[k - 1]);
    let pre = poch_at(q, q, n) * poch_at(&(q / (bk * ck)), q, n)
        / nonzero(poch_at(&(q / bk), q, n) * poch_at(&(q / ck), q, n), "(q/b_k)_N (q/c_k)_N")?;
    let mut rhs = BigRational::zero();
    // n_1 <= n_2 <= ... <= n_k <= N
    let mut idx = vec![0u64; k];
    loop {
        let b1 = beta(idx[0]);
        if !b1.is_zero() {
            let nk = idx[k - 1];
            let mut term = b1 * pow(q, nk as i64) * poch_at(&qn, q, nk) * poch_at(bk, q, nk) * poch_at(ck, q, nk)
                / nonzero(poch_at(&(&qn * bk * ck), q, nk), "(q^{-N} b_k c_k)_n")?;
            for i in 0..k - 1 {
                let (ni, nj) = (idx[i], idx[i + 1]);
                let (bi, ci) = (&b[i], &c[i]);
                let num = pow(q, ni as i64) * poch_at(bi, q, ni) * poch_at(ci, q, ni) * poch_at(&(q / (bi * ci)), q, nj - ni);
                let den = pow(bi, ni as i64)
                    * pow(ci, ni as i64)
                    * poch_at(q, q, nj - ni)
                    * poch_at(&(q / bi), q, nj)
                    * poch_at(&(q / ci), q, nj);
                term *= num / nonzero(den, "inner denominator")?;
            }
            rhs += term;
        }
        // next nondecreasing tuple
        let mut i = k;
        loop {
            if i == 0 {
                let residual = &lhs - &pre * &rhs;
                let rhs = &pre * &rhs;
                return Ok(AndrewsReport {
                    k,
                    n,
                    q: q.to_string(),
                    equal: residual.is_zero(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    residual: residual.to_string(),
                });
            }
            i -= 1;
            if idx[i] < n {
                idx[i] += 1;
                let v = idx[i];
                for x in idx.iter_mut().skip(i + 1) {
                    *x = v;
                }
                break;
            }
        }
    }
}

/// The identity with b_i = q^{be_i}, c_i = q^{ce_i} at the rational point q.
pub fn andrews_check_monomial(n: u64, q: &BigRational, b_exps: &[i64], c_exps: &[i64]) -> Result<AndrewsReport> {
    let b: Vec<BigRational> = b_exps.iter().map(|&e| pow(q, e)).collect();
    let c: Vec<BigRational> = c_exps.iter().map(|&e| pow(q, e)).collect();
    andrews_eval(n, q, &b, &c, None)
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(lo..=hi)), BigInt::from(rng.gen_range(lo..=hi)))
}

/// The identity at `points` random rational specializations of q, b_i, c_i.
/// Points hitting a pole are redrawn.
pub fn andrews_random(k: usize, n: u64, points: usize, seed: u64) -> Result<Vec<AndrewsReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 32) ^ n);
    let mut out = Vec::with_capacity(points);
    let mut tries = 0;
    while out.len() < points {
        tries += 1;
        if tries > 100 * points {
            return Err(Error::PoleHit("no pole-free specialization found".into()));
        }
        let q = BigRational::new(BigInt::from(rng.gen_range(2..=9)), BigInt::from(rng.gen_range(9..=16)));
        let b: Vec<BigRational> = (0..k).map(|_| random_rational(&mut rng, 1, 20)).collect();
        let c: Vec<BigRational> = (0..k).map(|_| random_rational(&mut rng, 1, 20)).collect();
        match andrews_eval(n, &q, &b, &c, None) {
            Ok(r) => out.push(r),
            Err(Error::PoleHit(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rational functions in t over Q(w) with binomial denominators

/// `c t^e` with c in Q(w).
#[derive(Clone, Debug, PartialEq)]
pub struct Mono {
    pub c: CycElem,
    pub e: i64,
}

impl Mono {
    pub fn new(c: CycElem, e: i64) -> Self {
        Mono { c, e }
    }

    /// `± w^i t^e`.
    pub fn wt(a: u64, sign: i64, i: i64, e: i64) -> Self {
        let c = CycElem::xi_pow(a, i).scale(&int(sign));
        Mono { c, e }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono { c: &self.c * &o.c, e: self.e + o.e }
    }

    pub fn inv(&self) -> Result<Mono> {
        Ok(Mono { c: self.c.inverse()?, e: -self.e })
    }

    pub fn div(&self, o: &Mono) -> Result<Mono> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Mono> {
        Ok(Mono { c: self.c.pow(n)?, e: self.e * n })
    }

    pub fn to_w(&self) -> WLaurent {
        WLaurent::monomial(self.c.clone(), self.e)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*t^{}", self.c, self.e)
    }
}

/// num / ∏ (1 - c t^e)^m with e > 0.
#[derive(Clone, Debug)]
pub struct TFrac {
    num: WLaurent,
    den: BTreeMap<(i64, String), (Mono, u32)>,
}

impl TFrac {
    pub fn from_w(num: WLaurent) -> Self {
        TFrac { num, den: BTreeMap::new() }
    }

    pub fn one(a: u64) -> Self {
        Self::from_w(WLaurent::one(a))
    }

    pub fn zero(a: u64) -> Self {
        Self::from_w(WLaurent::zero(a))
    }

    pub fn numerator(&self) -> &WLaurent {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_poly(&self) -> WLaurent {
        let a = self.num.modulus();
        let mut out = WLaurent::one(a);
        for (x, m) in self.den.values() {
            let f = &WLaurent::one(a) - &x.to_w();
            for _ in 0..*m {
                out = &out * &f;
            }
        }
        out
    }

    pub fn mul_w(&self, f: &WLaurent) -> TFrac {
        TFrac { num: &self.num * f, den: self.den.clone() }
    }

    pub fn mul_mono(&self, x: &Mono) -> TFrac {
        self.mul_w(&x.to_w())
    }

    /// Divides by 1 - x.
    pub fn div_binom(&self, x: &Mono) -> Result<TFrac> {
        let a = self.num.modulus();
        if x.e == 0 {
            let d = &CycElem::one(a) - &x.c;
            if d.is_zero() {
                return Err(Error::PoleHit("factor 1 - 1 in a denominator".into()));
            }
            return Ok(TFrac { num: self.num.scale(&d.inverse()?), den: self.den.clone() });
        }
        let (x, num) = if x.e > 0 {
            (x.clone(), self.num.clone())
        } else {
            // 1 - c t^e = -c t^e (1 - c^{-1} t^{-e})
            let y = x.inv()?;
            let u = Mono { c: -&y.c, e: y.e };
            (y, &self.num * &u.to_w())
        };
        let mut den = self.den.clone();
        den.entry((x.e, x.c.to_text())).or_insert((x, 0)).1 += 1;
        Ok(TFrac { num, den })
    }

    /// Multiplies by (x; t)_n.
    pub fn mul_poch(&self, x: &Mono, n: u64) -> TFrac {
        self.mul_w(&WLaurent::poch(&x.c, x.e, n))
    }

    /// Divides by (x; t)_n.
    pub fn div_poch(&self, x: &Mono, n: u64) -> Result<TFrac> {
        let mut out = self.clone();
        for i in 0..n as i64 {
            out = out.div_binom(&Mono { c: x.c.clone(), e: x.e + i })?;
        }
        Ok(out)
    }

    pub fn mul(&self, o: &TFrac) -> TFrac {
        let mut den = self.den.clone();
        for (k, (x, m)) in &o.den {
            den.entry(k.clone()).or_insert((x.clone(), 0)).1 += m;
        }
        TFrac { num: &self.num * &o.num, den }
    }

    /// Sum over the least common multiset of binomials.
    pub fn add(&self, o: &TFrac) -> TFrac {
        let a = self.num.modulus();
        let mut den = self.den.clone();
        for (k, (x, m)) in &o.den {
            let e = den.entry(k.clone()).or_insert((x.clone(), 0));
            e.1 = e.1.max(*m);
        }
        let lift = |f: &TFrac| -> WLaurent {
            let mut out = f.num.clone();
            for (k, (x, m)) in &den {
                let have = f.den.get(k).map_or(0, |v| v.1);
                let g = &WLaurent::one(a) - &x.to_w();
                for _ in have..*m {
                    out = &out * &g;
                }
            }
            out
        };
        TFrac { num: &lift(self) + &lift(o), den }
    }

    /// The value as a Laurent polynomial, when the denominator divides.
    pub fn to_wlaurent(&self) -> Result<WLaurent> {
        self.num.div_exact(&self.den_poly())
    }

    pub fn equals(&self, o: &TFrac) -> bool {
        &self.num * &o.den_poly() == &o.num * &self.den_poly()
    }
}

impl std::ops::Sub for &TFrac {
    type Output = TFrac;
    fn sub(self, o: &TFrac) -> TFrac {
        self.add(&o.mul_w(&-&WLaurent::one(o.num.modulus())))
    }
}

// ---------------------------------------------------------------------------
// Watson identity

/// A numerator parameter of the very-well-poised series: a monomial or a limit to infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Finite(Mono),
    Infinity,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(m) => write!(f, "{m}"),
            Param::Infinity => write!(f, "INFINITY"),
        }
    }
}

/// The 2p+4 φ 2p+3 series with parameters α, ±t√α, (b_i, c_i)_{i≤p}, t^{-N},
/// in the limits α → t^{-2k-1} and N → ∞.
#[derive(Clone, Debug)]
pub struct HypergeometricSpec {
    pub a: u64,
    pub b: u64,
    pub k: u64,
    pub alpha: Mono,
    pub pairs: Vec<(Param, Param)>,
}

impl HypergeometricSpec {
    pub fn p(&self) -> usize {
        self.pairs.len()
    }
}

/// The specialization for F_k(q,a,b), w a primitive a-th root of unity and t^a = q.
pub fn watson_spec(k: u64, a: u64, b: u64) -> Result<HypergeometricSpec> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("a and b must be positive".into()));
    }
    let (ai, bi, ki) = (a as i64, b as i64, k as i64);
    let al = Mono::wt(a, 1, 0, -2 * ki - 1);
    let tk = Param::Finite(Mono::wt(a, 1, 0, -ki));
    let wal = |s: i64, i: i64| Param::Finite(Mono::wt(a, s, i, -2 * ki - 1));
    let p = if a == 2 { bi + 1 } else { bi.max(ai + bi - 2) } as usize;
    let mut pairs = vec![(Param::Infinity, Param::Infinity); p];
    if a % 2 == 1 {
        let c = (ai - 1) / 2;
        for i in 1..=c {
            pairs[i as usize - 1] = (wal(1, i), wal(1, -i));
        }
        for i in c + 1..=ai - 2 {
            pairs[i as usize - 1] = (tk.clone(), tk.clone());
        }
    } else if a == 2 {
        pairs[0] = (wal(-1, 0), Param::Finite(Mono::wt(a, -1, 0, -ki)));
    } else {
        let c = ai / 2 - 1;
        for i in 1..c {
            pairs[i as usize - 1] = (wal(1, i), wal(1, -i));
        }
        pairs[c as usize - 1] = (wal(1, c), Param::Finite(Mono::wt(a, -1, 0, -ki)));
        pairs[c as usize] = (wal(-1, 0), wal(1, -c));
        for i in c + 2..=ai - 2 {
            pairs[i as usize - 1] = (tk.clone(), tk.clone());
        }
    }
    pairs[p - 1] = (tk, Param::Infinity);
    Ok(HypergeometricSpec { a, b, k, alpha: al, pairs })
}

fn sign_t(a: u64, n: u64) -> WLaurent {
    let s = if n % 2 == 0 { 1 } else { -1 };
    WLaurent::monomial(CycElem::from_int(a, s), (n * n.saturating_sub(1) / 2) as i64)
}

/// The Watson left-hand side, summed until (αt)_{n-1} vanishes.
pub fn watson_lhs(spec: &HypergeometricSpec) -> Result<TFrac> {
    let a = spec.a;
    let al = &spec.alpha;
    let t = Mono::wt(a, 1, 0, 1);
    let alt = al.mul(&t);
    if al.c != CycElem::one(a) || al.e >= 0 {
        return Err(Error::Invalid("α must be a negative power of t".into()));
    }
    let n_max = (-al.e) as u64;
    let p = spec.p() as i64;
    let mut total = TFrac::zero(a);
    for n in 0..=n_max {
        // (α)_n (1 - α t^{2n}) / ((1 - α) (t)_n)
        let mut term = TFrac::one(a);
        if n > 0 {
            term = term.mul_poch(&alt, n - 1);
            term = term.mul_w(&(&WLaurent::one(a) - &al.mul(&Mono::wt(a, 1, 0, 2 * n as i64)).to_w()));
            term = term.div_poch(&t, n)?;
        }
        for (x, y) in &spec.pairs {
            for par in [x, y] {
                match par {
                    Param::Infinity => term = term.mul_w(&sign_t(a, n)),
                    Param::Finite(x) => {
                        let lower = alt.div(x)?;
                        if lower != *x {
                            term = term.mul_poch(x, n).div_poch(&lower, n)?;
                        }
                        term = term.mul_mono(&x.pow(-(n as i64))?);
                    }
                }
            }
        }
        // t^{-N} with N → ∞, and (α t)^{pn}
        term = term.mul_w(&sign_t(a, n)).mul_mono(&alt.pow(p * n as i64)?);
        total = total.add(&term);
    }
    Ok(total)
}

/// The multi-sum on the right-hand side of the Watson identity, without its prefactor.
pub fn watson_multisum(spec: &HypergeometricSpec) -> Result<TFrac> {
    let a = spec.a;
    let k = spec.k;
    let p = spec.p();
    let al = &spec.alpha;
    let t = Mono::wt(a, 1, 0, 1);
    let alt = al.mul(&t);
    let bp = match &spec.pairs[p - 1] {
        (Param::Finite(x), Param::Infinity) => x.clone(),
        _ => return Err(Error::UnresolvedLimit("last pair must be (finite, INFINITY)".into())),
    };
    let mut total = TFrac::zero(a);
    let mut ms = vec![0u64; p - 1];
    loop {
        let m_sum: u64 = ms.iter().sum();
        if m_sum <= k {
            let mut term = TFrac::one(a)
                .mul_poch(&bp, m_sum)
                .mul_w(&sign_t(a, m_sum))
                .mul_mono(&al.div(&bp)?.pow(m_sum as i64)?);
            let mut s_prev = 0u64;
            for (i, &m) in ms.iter().enumerate() {
                let s_i = s_prev + m;
                let rest = (p - i - 2) as i64;
                term = term.mul_mono(&Mono::wt(a, 1, 0, m as i64)).mul_mono(&alt.pow(rest * m as i64)?).div_poch(&t, m)?;
                match &spec.pairs[i] {
                    (Param::Infinity, Param::Infinity) => {
                        term = term.mul_w(&WLaurent::t_pow(a, (s_prev * s_prev.saturating_sub(1)) as i64));
                    }
                    (Param::Finite(x), Param::Finite(y)) => {
                        let xy = x.mul(y);
                        term = term
                            .mul_poch(&alt.div(&xy)?, m)
                            .mul_poch(x, s_prev)
                            .mul_poch(y, s_prev)
                            .div_poch(&alt.div(x)?, s_i)?
                            .div_poch(&alt.div(y)?, s_i)?
                            .mul_mono(&xy.pow(-(s_prev as i64))?);
                    }
                    _ => return Err(Error::UnresolvedLimit(format!("pair {} has exactly one infinite entry", i + 1))),
                }
                s_prev = s_i;
            }
            total = total.add(&term);
        }
        // next tuple in [0, k]^{p-1}
        let mut i = 0;
        loop {
            if i == ms.len() {
                return Ok(total);
            }
            if ms[i] < k {
                ms[i] += 1;
                break;
            }
            ms[i] = 0;
            i += 1;
        }
    }
}

/// 2 (α t)_k times the multi-sum: the right-hand side in the limit.
pub fn watson_rhs(spec: &HypergeometricSpec) -> Result<TFrac> {
    let a = spec.a;
    let alt = spec.alpha.mul(&Mono::wt(a, 1, 0, 1));
    let pre = WLaurent::poch(&alt.c, alt.e, spec.k).scale(&CycElem::from_int(a, 2));
    Ok(watson_multisum(spec)?.mul_w(&pre))
}

/// Σ_{j≤2k+1} ∏_{i<a} (w^i t^{-2k-1})_j/(w^i t)_j · t^{bj²+(a-2b)kj+(a-b-1)j} (1 - t^{2j-2k-1}).
pub fn lhs_display(k: u64, a: u64, b: u64) -> Result<TFrac> {
    let (ai, bi, ki) = (a as i64, b as i64, k as i64);
    let mut total = TFrac::zero(a);
    for j in 0..=2 * k + 1 {
        let ji = j as i64;
        let mut term = TFrac::one(a);
        for i in 0..ai {
            term = term.mul_poch(&Mono::wt(a, 1, i, -2 * ki - 1), j).div_poch(&Mono::wt(a, 1, i, 1), j)?;
        }
        let e = bi * ji * ji + (ai - 2 * bi) * ki * ji + (ai - bi - 1) * ji;
        let f = &WLaurent::t_pow(a, e) - &WLaurent::t_pow(a, e + 2 * ji - 2 * ki - 1);
        total = total.add(&term.mul_w(&f));
    }
    Ok(total)
}

/// Outcome of the Watson check for one (k, a, b).
#[derive(Clone, Debug, Serialize)]
pub struct WatsonReport {
    pub k: u64,
    pub a: u64,
    pub b: u64,
    pub p: usize,
    /// LHS = RHS under the specialization.
    pub identity: bool,
    /// The display equals (1 - α) times the LHS.
    pub display: bool,
    pub residual: String,
}

impl WatsonReport {
    pub fn passed(&self) -> bool {
        self.identity && self.display
    }
}

pub fn watson_check(k: u64, a: u64, b: u64) -> Result<WatsonReport> {
    let spec = watson_spec(k, a, b)?;
    let lhs = watson_lhs(&spec)?;
    let rhs = watson_rhs(&spec)?;
    let identity = lhs.equals(&rhs);
    let residual = if identity {
        "0".to_string()
    } else {
        (&lhs - &rhs).numerator().to_string()
    };
    let one_minus_alpha = &WLaurent::one(a) - &spec.alpha.to_w();
    let display = lhs_display(k, a, b)?.equals(&lhs.mul_w(&one_minus_alpha));
    Ok(WatsonReport { k, a, b, p: spec.p(), identity, display, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::rat;

    #[test]
    fn bailey_pair_values() {
        assert_eq!(bailey_special(0), (QLaurent::one(), QLaurent::one()));
        let (a1, b1) = bailey_special(1);
        assert_eq!(a1, -(QLaurent::one() + QLaurent::q_int_pow(1)));
        assert!(b1.is_zero());
        let (a2, _) = bailey_special(2);
        assert_eq!(a2, QLaurent::q_int_pow(1) + QLaurent::q_int_pow(3));
    }

    #[test]
    fn andrews_examples() {
        let q = rat(3, 11);
        assert!(andrews_check_monomial(1, &q, &[3], &[5]).unwrap().equal);
        assert!(andrews_check_monomial(2, &q, &[4, 6], &[5, 7]).unwrap().equal);
        let bad = andrews_eval(1, &q, &[pow(&q, 3)], &[pow(&q, 5)], Some(&int(1))).unwrap();
        assert!(!bad.equal);
    }

    #[test]
    fn watson_examples() {
        for (k, a, b) in [(0, 1, 1), (1, 3, 1), (1, 2, 2)] {
            let r = watson_check(k, a, b).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn andrews_random_grid() {
        for k in 1..=3 {
            for n in 1..=4 {
                for r in andrews_random(k, n, 20, ANDREWS_SEED).unwrap() {
                    assert!(r.equal, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn watson_grid() {
        for a in 1..=5 {
            for b in 1..=3 {
                for k in 0..=2 {
                    let r = watson_check(k, a, b).unwrap();
                    assert!(r.passed(), "{r:?}");
                }
            }
        }
    }
}
