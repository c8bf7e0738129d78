//! Colored Jones data for the families with closed formulas, in the colored
//! basis and in Habiro's P' basis.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qring::{gauss_binom, int, qbinom, qfact, qint, QLaurent};

/// J_L(P'_{k_1}, ..., P'_{k_m}) for a zero-framed algebraically split link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HabiroCoefficients {
    components: usize,
    entries: BTreeMap<Vec<u64>, QLaurent>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    k: Vec<u64>,
    coeff: QLaurent,
}

impl Serialize for HabiroCoefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> =
            self.entries.iter().map(|(k, c)| Entry { k: k.clone(), coeff: c.clone() }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HabiroCoefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        let m = v.first().map(|e| e.k.len()).unwrap_or(1);
        let mut out = HabiroCoefficients::new(m);
        for e in v {
            if e.k.len() != m {
                return Err(serde::de::Error::custom("multi-indices of different lengths"));
            }
            out.insert(e.k, e.coeff);
        }
        Ok(out)
    }
}

impl HabiroCoefficients {
    pub fn new(components: usize) -> Self {
        assert!(components > 0);
        HabiroCoefficients { components, entries: BTreeMap::new() }
    }

    pub fn unknot() -> Self {
        let mut h = Self::new(1);
        h.insert(vec![0], QLaurent::one());
        h
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn insert(&mut self, k: Vec<u64>, c: QLaurent) {
        assert_eq!(k.len(), self.components, "multi-index length");
        if c.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, c);
        }
    }

    pub fn get(&self, k: &[u64]) -> QLaurent {
        self.entries.get(k).cloned().unwrap_or_else(QLaurent::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, &QLaurent)> {
        self.entries.iter()
    }

    /// Largest index present in any multi-index.
    pub fn max_index(&self) -> u64 {
        self.entries.keys().flat_map(|k| k.iter().copied()).max().unwrap_or(0)
    }

    /// Checks that each coefficient is divisible by {2k+1}!/({k}!{1}), k = max k_i.
    pub fn validate_divisibility(&self) -> Result<()> {
        for (k, c) in &self.entries {
            let m = k.iter().copied().max().unwrap_or(0);
            c.div_exact(&p_prime_normalizer(m)).map_err(|_| {
                Error::NonDivisible(format!("coefficient at {k:?} is not divisible by {{2k+1}}!/({{k}}!{{1}})"))
            })?;
        }
        Ok(())
    }
}

/// {2k+1}!/({k}!{1}) = [k+1][k+2]...[2k+1] {1}^k.
pub fn p_prime_normalizer(k: u64) -> QLaurent {
    let mut out = QLaurent::one();
    for i in k + 1..=2 * k + 1 {
        out = &out * &qint(i as i64);
    }
    out.div_exact(&qint(1)).expect("{k+1} is divisible by {1}")
}

/// qbinom(n+k, 2k+1) {k}!, the value of P'_k on the n-dimensional color.
pub fn p_prime_at_color(n: u64, k: u64) -> QLaurent {
    if k >= n {
        return QLaurent::zero();
    }
    let b = qbinom((n + k) as i64, 2 * k + 1).expect("q-binomial with nonnegative top");
    &b * &qfact(k)
}

/// J_L(n_1, ..., n_m) from the P' coefficients.
pub fn habiro_expand(coeffs: &HabiroCoefficients, colors: &[u64]) -> QLaurent {
    assert_eq!(colors.len(), coeffs.components(), "one color per component");
    let mut out = QLaurent::zero();
    for (k, c) in coeffs.iter() {
        if k.iter().zip(colors).any(|(ki, ni)| ki >= ni) {
            continue;
        }
        let mut t = c.clone();
        for (ki, ni) in k.iter().zip(colors) {
            t = &t * &p_prime_at_color(*ni, *ki);
        }
        out += &t;
    }
    out
}

/// Inverts the triangular system J(n) = Σ_{k<n} c_k qbinom(n+k,2k+1){k}! for a knot,
/// given `values[n-1] = J(n)`.
pub fn habiro_coeffs_from_colored(values: &[QLaurent]) -> Result<HabiroCoefficients> {
    let mut out = HabiroCoefficients::new(1);
    let mut found: Vec<QLaurent> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let n = i as u64 + 1;
        let mut rest = v.clone();
        for (k, c) in found.iter().enumerate() {
            rest -= &(c * &p_prime_at_color(n, k as u64));
        }
        let c = rest
            .div_exact(&qfact(n - 1))
            .map_err(|_| Error::Inconsistent(format!("color {n} does not fit a knot expansion")))?;
        found.push(c);
    }
    for (k, c) in found.into_iter().enumerate() {
        out.insert(vec![k as u64], c);
    }
    Ok(out)
}

fn compositions(n: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if parts == 1 {
        prefix.push(n);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for i in 0..=n {
        prefix.push(i);
        compositions(n - i, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// c'_n for the twist knot K_p, the coefficient of ∏_{i=1}^n {m+i}{m-i} in J(m)/[m].
///
/// For p > 0 this is (-1)^n q^{n(n+3)/2} Σ q^{Σ_{k<p}(s_k²+s_k)} (q)_n/∏(q)_{i_j},
/// summed over compositions i_1+...+i_p = n with partial sums s_k. For p < 0 the
/// sum for |p| is taken at q^{-1}, without the prefactor.
pub fn twist_cprime(p: i64, n: u64) -> QLaurent {
    assert!(p != 0, "twist parameter must be nonzero");
    let parts = p.unsigned_abs() as usize;
    let mut comps = Vec::new();
    compositions(n, parts, &mut Vec::new(), &mut comps);
    let mut sum = QLaurent::zero();
    for c in comps {
        let mut s = 0u64;
        let mut expo = 0i64;
        let mut term = QLaurent::one();
        for (j, &i) in c.iter().enumerate() {
            s += i;
            if j + 1 < parts {
                expo += (s * s + s) as i64;
            }
            term = &term * &gauss_binom(s, i);
        }
        sum += &term.mul_q_pow(Rational64::from_integer(expo));
    }
    if p > 0 {
        let sign = if n % 2 == 0 { int(1) } else { int(-1) };
        sum.mul_q_pow(Rational64::new((n * (n + 3)) as i64, 2)).scale_by(&sign)
    } else {
        sum.substitute_power(Rational64::from_integer(-1))
    }
}

/// J_{K_p}(P'_k) = c'_k {2k+1}!/({k}!{1}).
pub fn twist_knot_coeff(p: i64, k: u64) -> QLaurent {
    &twist_cprime(p, k) * &p_prime_normalizer(k)
}

pub fn twist_knot_coeffs(p: i64, kmax: u64) -> HabiroCoefficients {
    let mut h = HabiroCoefficients::new(1);
    for k in 0..=kmax {
        h.insert(vec![k], twist_knot_coeff(p, k));
    }
    h
}

/// Colored Jones polynomial J_{K_p}(n) of the zero-framed twist knot.
pub fn twist_colored_jones(p: i64, n: u64) -> QLaurent {
    if n == 0 {
        return QLaurent::zero();
    }
    habiro_expand(&twist_knot_coeffs(p, n - 1), &[n])
}

/// J_U(n) = [n].
pub fn unknot_colored_jones(n: u64) -> QLaurent {
    crate::qring::qnum(n as i64)
}
