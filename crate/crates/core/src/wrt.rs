//! τ_M(ξ) from surgery presentations: finite state sums over odd colorings of
//! plumbing trees, rational framings through Hopf chains, and signatures of
//! linking matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::{ev, gauss_sum, odd_colors, xi_exponent, CycAcc, CycElem};
use crate::error::{Error, Result};
use crate::jones::{p_prime_at_color, twist_cprime, HabiroCoefficients};
use crate::numtheory::{cf_value, dedekind_sum, jacobi, neg_continued_fraction_with, Fraction, Rounding};
use crate::qring::{qint, qint_frac, qpoch, QLaurent};

/// A closed oriented 3-manifold given by surgery.
#[derive(Clone, Debug, PartialEq)]
pub enum SurgeryPresentation {
    /// a/b surgery on the unknot.
    Lens { a: i64, b: i64 },
    /// Central unknot with framing -b and legs with coefficients a_i/b_i.
    Seifert { b: i64, pairs: Vec<(i64, i64)> },
    /// Rational surgery on the twist knot K_p.
    TwistSurgery { p: i64, framing: Fraction },
    ConnectedSum(Vec<SurgeryPresentation>),
    /// Surgery on an algebraically split link given by its P' coefficients.
    AlgSplit { framings: Vec<Fraction>, table: HabiroCoefficients },
}

impl SurgeryPresentation {
    pub fn lens(a: i64, b: i64) -> Self {
        SurgeryPresentation::Lens { a, b }
    }

    pub fn seifert(b: i64, pairs: &[(i64, i64)]) -> Self {
        SurgeryPresentation::Seifert { b, pairs: pairs.to_vec() }
    }

    pub fn twist(p: i64, a: i64, b: i64) -> Self {
        SurgeryPresentation::TwistSurgery { p, framing: Fraction::new(a, b) }
    }

    /// Poincaré sphere Σ(2,3,5).
    pub fn poincare() -> Self {
        Self::seifert(-1, &[(2, 1), (3, 1), (5, 1)])
    }

    /// Brieskorn sphere Σ(2,3,7).
    pub fn brieskorn_237() -> Self {
        Self::seifert(-1, &[(2, 1), (3, 1), (7, 1)])
    }

    /// Checks the structural invariants of the presentation.
    pub fn validate(&self) -> Result<()> {
        match self {
            SurgeryPresentation::Lens { a, b } => {
                if *a == 0 || *b == 0 {
                    return Err(Error::Invalid(format!("lens {a} {b}: a and b must be nonzero")));
                }
                if a.gcd(b) != 1 {
                    return Err(Error::Invalid(format!("lens {a} {b}: gcd(a,b) must be 1")));
                }
            }
            SurgeryPresentation::Seifert { pairs, .. } => {
                if pairs.is_empty() {
                    return Err(Error::Invalid("Seifert space needs at least one fiber".into()));
                }
                for &(a, b) in pairs {
                    if a <= 0 || b < 0 || b > a || a.gcd(&b) != 1 {
                        return Err(Error::Invalid(format!(
                            "Seifert pair ({a},{b}) must satisfy a > 0, 0 <= b <= a, gcd(a,b) = 1"
                        )));
                    }
                }
                if self.euler_number().unwrap().is_zero() {
                    return Err(Error::NotQhs("Seifert space with Euler number e = 0".into()));
                }
            }
            SurgeryPresentation::TwistSurgery { p, framing } => {
                if *p == 0 {
                    return Err(Error::Invalid("twist parameter must be nonzero".into()));
                }
                if framing.is_zero() {
                    return Err(Error::NotQhs("zero framing on a knot".into()));
                }
            }
            SurgeryPresentation::ConnectedSum(parts) => {
                if parts.is_empty() {
                    return Err(Error::Invalid("empty connected sum".into()));
                }
                for p in parts {
                    p.validate()?;
                }
            }
            SurgeryPresentation::AlgSplit { framings, table } => {
                if framings.len() != table.components() {
                    return Err(Error::Invalid(format!(
                        "{} framings for a {}-component table",
                        framings.len(),
                        table.components()
                    )));
                }
                if framings.iter().any(|f| f.is_zero()) {
                    return Err(Error::NotQhs("zero framing on a split component".into()));
                }
            }
        }
        Ok(())
    }

    /// Euler number e = b + Σ b_i/a_i of a Seifert presentation.
    pub fn euler_number(&self) -> Option<Fraction> {
        match self {
            SurgeryPresentation::Seifert { b, pairs } => {
                Some(pairs.iter().fold(Fraction::from_integer(*b), |e, &(a, bi)| e + Fraction::new(bi, a)))
            }
            _ => None,
        }
    }

    /// |H_1(M, Z)|.
    pub fn h1_order(&self) -> u64 {
        match self {
            SurgeryPresentation::Lens { a, .. } => a.unsigned_abs(),
            SurgeryPresentation::Seifert { pairs, .. } => {
                let e = self.euler_number().unwrap();
                let prod: i64 = pairs.iter().map(|p| p.0).product();
                (e * prod).abs().to_integer() as u64
            }
            SurgeryPresentation::TwistSurgery { framing, .. } => framing.numer().unsigned_abs(),
            SurgeryPresentation::ConnectedSum(parts) => parts.iter().map(|p| p.h1_order()).product(),
            SurgeryPresentation::AlgSplit { framings, .. } => {
                framings.iter().map(|f| f.numer().unsigned_abs()).product()
            }
        }
    }
}

/// How rational framings are turned into Hopf chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// Integer framings directly, other fractions by the ceiling rule.
    Standard,
    /// Always a chain, with the given rounding rule.
    Rounded(Rounding),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotKind {
    Unknot,
    Twist(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Roots {
    Knot { vertex: usize, knot: KnotKind },
    Split { vertices: Vec<usize>, table: HabiroCoefficients },
}

/// Integrally framed link: a root knot or split link with trees of unknots hanging
/// off its components, adjacent vertices forming Hopf clasps.
#[derive(Clone, Debug, PartialEq)]
pub struct Plumbing {
    pub framings: Vec<i64>,
    pub parent: Vec<Option<usize>>,
    pub roots: Roots,
}

impl Plumbing {
    pub fn knot(knot: KnotKind, framing: Fraction, rule: &Expansion) -> Self {
        let mut p = Plumbing { framings: vec![0], parent: vec![None], roots: Roots::Knot { vertex: 0, knot } };
        p.set_rational(0, framing, rule);
        p
    }

    pub fn split(table: HabiroCoefficients, framings: &[Fraction], rule: &Expansion) -> Self {
        let m = framings.len();
        let mut p = Plumbing {
            framings: vec![0; m],
            parent: vec![None; m],
            roots: Roots::Split { vertices: (0..m).collect(), table },
        };
        for (i, f) in framings.iter().enumerate() {
            p.set_rational(i, *f, rule);
        }
        p
    }

    /// Star-shaped plumbing: central framing -b, legs a_i/b_i.
    pub fn seifert(b: i64, pairs: &[(i64, i64)], rule: &Expansion) -> Self {
        let mut p =
            Plumbing { framings: vec![-b], parent: vec![None], roots: Roots::Knot { vertex: 0, knot: KnotKind::Unknot } };
        for &(a, bi) in pairs {
            let v = p.add_vertex(0, Some(0));
            p.set_rational(v, Fraction::new(a, bi), rule);
        }
        p
    }

    fn add_vertex(&mut self, framing: i64, parent: Option<usize>) -> usize {
        self.framings.push(framing);
        self.parent.push(parent);
        self.framings.len() - 1
    }

    /// Gives vertex `v` the rational coefficient `x`, hanging a chain when needed.
    pub fn set_rational(&mut self, v: usize, x: Fraction, rule: &Expansion) {
        let ms = match rule {
            Expansion::Standard if x.is_integer() => {
                self.framings[v] = x.to_integer();
                return;
            }
            Expansion::Standard => neg_continued_fraction_with(x, Rounding::Ceil),
            Expansion::Rounded(rd) => neg_continued_fraction_with(x, *rd),
        };
        self.hang_chain(v, &ms);
    }

    /// Framing 0 on `v`, then the chain m_n (clasping v), ..., m_1.
    pub fn hang_chain(&mut self, v: usize, ms: &[i64]) {
        debug_assert!(cf_value(ms).is_some());
        self.framings[v] = 0;
        let mut at = v;
        for &m in ms.iter().rev() {
            at = self.add_vertex(m, Some(at));
        }
    }

    pub fn len(&self) -> usize {
        self.framings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.framings.is_empty()
    }

    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut m = vec![vec![0i64; n]; n];
        for v in 0..n {
            m[v][v] = self.framings[v];
            if let Some(p) = self.parent[v] {
                m[v][p] = 1;
                m[p][v] = 1;
            }
        }
        m
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(v);
            }
        }
        ch
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

/// Inertia of a symmetric integer matrix by exact LDLᵀ with symmetric pivoting.
pub fn signature_counts(m: &[Vec<i64>]) -> Signature {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    for row in &a {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    let mut alive: Vec<usize> = (0..n).collect();
    let mut sig = Signature { pos: 0, neg: 0, zero: 0 };
    while !alive.is_empty() {
        let mut piv = alive.iter().copied().find(|&i| !a[i][i].is_zero());
        if piv.is_none() {
            // all diagonal entries vanish: add row/column j to i to create a pivot
            let pair = alive
                .iter()
                .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != j && !a[i][j].is_zero());
            match pair {
                None => {
                    sig.zero += alive.len();
                    break;
                }
                Some((i, j)) => {
                    for k in 0..n {
                        let x = a[j][k].clone();
                        a[i][k] += x;
                    }
                    for k in 0..n {
                        let x = a[k][j].clone();
                        a[k][i] += x;
                    }
                    piv = Some(i);
                }
            }
        }
        let p = piv.unwrap();
        let d = a[p][p].clone();
        if d.is_positive() {
            sig.pos += 1;
        } else {
            sig.neg += 1;
        }
        alive.retain(|&x| x != p);
        for &i in &alive {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &d;
            for &j in &alive {
                let x = &f * &a[p][j];
                a[i][j] -= x;
            }
        }
    }
    sig
}

fn check_order(r: u64) -> Result<()> {
    if r < 3 || r % 2 == 0 {
        return Err(Error::BadOrder(r));
    }
    Ok(())
}

/// F_{U±}(ξ) = ∓2 γ_{±1}(ξ) ev(q^{∓1/2}/{1}).
pub fn f_unknot(sign: i64, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let s = sign.signum();
    let g = gauss_sum(s, r);
    let x = ev(&QLaurent::q_pow(Rational64::new(-s, 2)), r)?.div(&ev(&qint(1), r)?)?;
    Ok((&g * &x).scale(&BigRational::from_integer(BigInt::from(-2 * s))))
}

/// Per-order tables of evaluated color data.
struct Tables {
    r: u64,
    inv2: i64,
    inv4: i64,
}

impl Tables {
    fn new(r: u64) -> Self {
        Tables { r, inv2: r.div_ceil(2) as i64, inv4: crate::numtheory::mod_inverse(4, r).unwrap() as i64 }
    }

    /// q^{e/2} as an exponent of ξ.
    fn half(&self, e: i64) -> i64 {
        (e as i128 * self.inv2 as i128).rem_euclid(self.r as i128) as i64
    }

    /// [j] = Σ_{l<j} q^{(j-1-2l)/2}.
    fn qnum(&self, j: i64) -> CycElem {
        let mut acc = CycAcc::new(self.r);
        let one = BigRational::one();
        for l in 0..j {
            acc.add_monomial(self.half(j - 1 - 2 * l), &one);
        }
        acc.finish()
    }

    /// q^{f(j²-1)/4}.
    fn framing(&self, f: i64, j: i64) -> CycElem {
        let e = (f as i128 * (j as i128 * j as i128 - 1) % self.r as i128 * self.inv4 as i128).rem_euclid(self.r as i128);
        CycElem::xi_pow(self.r, e as i64)
    }

    /// {j_p j_c}/{j_p} = Σ_{l<j_c} q^{j_p(j_c-1-2l)/2}.
    fn edge(&self, jp: i64, jc: i64) -> CycElem {
        let mut acc = CycAcc::new(self.r);
        let one = BigRational::one();
        for l in 0..jc {
            acc.add_monomial(self.half(jp * (jc - 1 - 2 * l)), &one);
        }
        acc.finish()
    }
}

/// J_{K_p}(j) at ξ, using that the terms with k >= r vanish.
fn twist_jones_at(r: u64, t: &Tables, cprime: &[CycElem], j: i64) -> Result<CycElem> {
    let mut sum = CycElem::zero(r);
    let mut prod = CycElem::one(r);
    let kmax = (j as u64).min(r);
    for k in 0..kmax {
        if k > 0 {
            let k = k as i64;
            prod = &prod * &(&ev(&qint(j + k), r)? * &ev(&qint(j - k), r)?);
        }
        sum += &(&cprime[k as usize] * &prod);
    }
    Ok(&t.qnum(j) * &sum)
}

/// F_L(ξ) = Σ^ξ J_L(n_1, ..., n_m) ∏ [n_i] q^{f_i(n_i²-1)/4}.
pub fn f_link(pl: &Plumbing, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let t = Tables::new(r);
    let colors: Vec<i64> = odd_colors(r).collect();
    let nc = colors.len();
    let children = pl.children();
    // post-order
    let mut order = Vec::new();
    let roots: Vec<usize> = (0..pl.len()).filter(|&v| pl.parent[v].is_none()).collect();
    let mut stack: Vec<(usize, bool)> = roots.iter().map(|&v| (v, false)).collect();
    while let Some((v, done)) = stack.pop() {
        if done {
            order.push(v);
            continue;
        }
        stack.push((v, true));
        for &c in &children[v] {
            stack.push((c, false));
        }
    }
    let needs_edges = pl.parent.iter().any(|p| p.is_some());
    let edges: Vec<Vec<CycElem>> = if needs_edges {
        colors.iter().map(|&jp| colors.iter().map(|&jc| t.edge(jp, jc)).collect()).collect()
    } else {
        Vec::new()
    };
    let qnums: Vec<CycElem> = colors.iter().map(|&j| t.qnum(j)).collect();
    let mut g: Vec<Option<Vec<CycElem>>> = vec![None; pl.len()];
    for &v in &order {
        let mut gv: Vec<CycElem> =
            (0..nc).map(|i| &t.framing(pl.framings[v], colors[i]) * &qnums[i]).collect();
        for &c in &children[v] {
            let gc = g[c].take().unwrap();
            for (i, slot) in gv.iter_mut().enumerate() {
                let mut h = CycElem::zero(r);
                for (ic, x) in gc.iter().enumerate() {
                    h += &(&edges[i][ic] * x);
                }
                *slot = &*slot * &h;
            }
        }
        g[v] = Some(gv);
    }
    match &pl.roots {
        Roots::Knot { vertex, knot } => {
            let gr = g[*vertex].take().unwrap();
            let mut out = CycElem::zero(r);
            match knot {
                KnotKind::Unknot => {
                    for i in 0..nc {
                        out += &(&qnums[i] * &gr[i]);
                    }
                }
                KnotKind::Twist(p) => {
                    let cp: Vec<CycElem> =
                        (0..r).map(|k| ev(&twist_cprime(*p, k), r)).collect::<Result<_>>()?;
                    for i in 0..nc {
                        out += &(&twist_jones_at(r, &t, &cp, colors[i])? * &gr[i]);
                    }
                }
            }
            Ok(out)
        }
        Roots::Split { vertices, table } => {
            let grs: Vec<Vec<CycElem>> = vertices.iter().map(|v| g[*v].take().unwrap()).collect();
            split_sum(table, &grs, &colors, r)
        }
    }
}

fn split_sum(table: &HabiroCoefficients, grs: &[Vec<CycElem>], colors: &[i64], r: u64) -> Result<CycElem> {
    let m = grs.len();
    let nc = colors.len();
    // terms with max k >= r vanish at ξ by Habiro divisibility
    let entries: Vec<(Vec<u64>, CycElem)> = table
        .iter()
        .filter(|(k, _)| k.iter().all(|&x| x < r))
        .map(|(k, c)| Ok((k.clone(), ev(c, r)?)))
        .collect::<Result<_>>()?;
    let kmax = entries.iter().flat_map(|(k, _)| k.iter().copied()).max().unwrap_or(0);
    // P'_k at each color, evaluated
    let mut pk: Vec<Vec<CycElem>> = Vec::new();
    for k in 0..=kmax {
        pk.push(colors.iter().map(|&j| ev(&p_prime_at_color(j as u64, k), r)).collect::<Result<_>>()?);
    }
    // component sums Σ_j P'_{k}(j) G_i(j) factor per component, so J_L(n) ∏ G_i(n_i) sums termwise
    let mut out = CycElem::zero(r);
    let mut per: Vec<Vec<CycElem>> = Vec::with_capacity(m);
    for gi in grs {
        let mut row = Vec::with_capacity(kmax as usize + 1);
        for pkk in pk.iter() {
            let mut s = CycElem::zero(r);
            for i in 0..nc {
                s += &(&pkk[i] * &gi[i]);
            }
            row.push(s);
        }
        per.push(row);
    }
    for (k, c) in &entries {
        let mut term = c.clone();
        for (i, ki) in k.iter().enumerate() {
            term = &term * &per[i][*ki as usize];
        }
        out += &term;
    }
    Ok(out)
}

fn plumbing_of(m: &SurgeryPresentation, rule: &Expansion) -> Option<Plumbing> {
    Some(match m {
        SurgeryPresentation::Lens { a, b } => Plumbing::knot(KnotKind::Unknot, Fraction::new(*a, *b), rule),
        SurgeryPresentation::Seifert { b, pairs } => Plumbing::seifert(*b, pairs, rule),
        SurgeryPresentation::TwistSurgery { p, framing } => Plumbing::knot(KnotKind::Twist(*p), *framing, rule),
        SurgeryPresentation::AlgSplit { framings, table } => Plumbing::split(table.clone(), framings, rule),
        SurgeryPresentation::ConnectedSum(_) => return None,
    })
}

/// τ of an integrally framed plumbing: F_L / (F_{U+}^{σ+} F_{U-}^{σ-}).
pub fn tau_plumbing(pl: &Plumbing, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let sig = signature_counts(&pl.linking_matrix());
    if sig.zero > 0 {
        return Err(Error::NotQhs("linking matrix is singular".into()));
    }
    let fl = f_link(pl, r)?;
    let den = &f_unknot(1, r)?.pow(sig.pos as i64)? * &f_unknot(-1, r)?.pow(sig.neg as i64)?;
    fl.div(&den)
}

/// τ_M(ξ) for ξ of odd order r.
pub fn tau(m: &SurgeryPresentation, r: u64) -> Result<CycElem> {
    tau_with(m, r, &Expansion::Standard)
}

pub fn tau_with(m: &SurgeryPresentation, r: u64, rule: &Expansion) -> Result<CycElem> {
    check_order(r)?;
    m.validate()?;
    match m {
        SurgeryPresentation::ConnectedSum(parts) => {
            let mut out = CycElem::one(r);
            for p in parts {
                out = &out * &tau_with(p, r, rule)?;
            }
            Ok(out)
        }
        _ => tau_plumbing(&plumbing_of(m, rule).unwrap(), r),
    }
}

/// τ of the unknot with coefficient x realized by an explicit chain [m_1, ..., m_n].
pub fn tau_lens_chain(ms: &[i64], r: u64) -> Result<CycElem> {
    if cf_value(ms).is_none() {
        return Err(Error::Invalid(format!("{ms:?} is not a valid expansion")));
    }
    let mut pl = Plumbing { framings: vec![0], parent: vec![None], roots: Roots::Knot { vertex: 0, knot: KnotKind::Unknot } };
    pl.hang_chain(0, ms);
    tau_plumbing(&pl, r)
}

fn dedekind_exponent(b: i64, a: i64, scale: i64) -> Result<Rational64> {
    let s = dedekind_sum(b, a)? * BigRational::from_integer(BigInt::from(scale));
    Ok(Rational64::new(s.numer().to_i64().unwrap(), s.denom().to_i64().unwrap()))
}

/// (a/r) ev(q^{-3s(b,a)} {1/a}/{1}) for a > 0; a negative `a` is read as L(|a|, -b).
pub fn tau_lens_closed(a: i64, b: i64, r: u64) -> Result<CycElem> {
    check_order(r)?;
    if a == 0 || a.gcd(&b) != 1 {
        return Err(Error::NonCoprime(format!("lens ({a},{b}) needs gcd(a,b) = 1")));
    }
    if a.unsigned_abs().gcd(&r) != 1 {
        return Err(Error::NonCoprime(format!("lens closed form needs gcd(a,r) = 1, got a={a}, r={r}")));
    }
    let (a, b) = (a.abs(), a.signum() * b);
    let f = qint_frac(Rational64::new(1, a)).mul_q_pow(-dedekind_exponent(b, a, 3)?);
    let x = ev(&f, r)?.div(&ev(&qint(1), r)?)?;
    Ok(x.scale(&BigRational::from_integer(jacobi(a, r)?.into())))
}

/// Chain sum hanging from a j-colored strand, divided by the chain's own
/// F_{U+}^{σ+} F_{U-}^{σ-}.
pub fn hopf_chain_sum(ms: &[i64], j: i64, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let t = Tables::new(r);
    let colors: Vec<i64> = odd_colors(r).collect();
    // process from the free end m_1 towards the strand
    let mut g: Option<Vec<CycElem>> = None;
    for &m in ms {
        let gv: Vec<CycElem> = colors
            .iter()
            .map(|&jv| {
                let mut w = &t.framing(m, jv) * &t.qnum(jv);
                if let Some(prev) = &g {
                    let mut h = CycElem::zero(r);
                    for (ic, x) in prev.iter().enumerate() {
                        h += &(&t.edge(jv, colors[ic]) * x);
                    }
                    w = &w * &h;
                }
                w
            })
            .collect();
        g = Some(gv);
    }
    let g = g.ok_or_else(|| Error::Invalid("empty chain".into()))?;
    let mut h = CycElem::zero(r);
    for (ic, x) in g.iter().enumerate() {
        h += &(&t.edge(j, colors[ic]) * x);
    }
    // chain linking matrix
    let n = ms.len();
    let mut lm = vec![vec![0i64; n]; n];
    for i in 0..n {
        lm[i][i] = ms[i];
        if i + 1 < n {
            lm[i][i + 1] = 1;
            lm[i + 1][i] = 1;
        }
    }
    let sig = signature_counts(&lm);
    if sig.zero > 0 {
        return Err(Error::NotQhs("chain linking matrix is singular".into()));
    }
    let den = &f_unknot(1, r)?.pow(sig.pos as i64)? * &f_unknot(-1, r)?.pow(sig.neg as i64)?;
    h.div(&den)
}

/// Closed form of [`hopf_chain_sum`] for x = a/b with gcd(b,r) = 1:
/// (b/r) q^{3s(a,b)} {j/b}/{j} q^{a(j²-1)/(4b)}.
pub fn hopf_chain_closed(x: Fraction, j: i64, r: u64) -> Result<CycElem> {
    check_order(r)?;
    let (a, b) = (*x.numer(), *x.denom());
    if b.unsigned_abs().gcd(&r) != 1 {
        return Err(Error::UndefinedAtOrder { r, why: format!("chain lemma needs gcd(b,r) = 1, b = {b}") });
    }
    if j % r as i64 == 0 {
        return Err(Error::UndefinedAtOrder { r, why: format!("{{j}} vanishes for j = {j}") });
    }
    let e = dedekind_exponent(a, b, 3)? + Rational64::new(a * (j * j - 1), 4 * b);
    let num = qint_frac(Rational64::new(j, b)).mul_q_pow(e);
    let v = ev(&num, r)?.div(&ev(&qint(j), r)?)?;
    Ok(v.scale(&BigRational::from_integer(jacobi(b, r)?.into())))
}

/// 2 ev(q^{(k+1)(k+2)/4} (q^{k+2})_{r-k-2}), the zero-framing color sum
/// Σ^ξ qbinom(n+k,2k+1){k}!{n}, for 2k+3 <= r.
pub fn zero_framing_closed(k: u64, r: u64) -> Result<CycElem> {
    check_order(r)?;
    if 2 * k + 3 > r {
        return Err(Error::Invalid(format!("zero-framing closed form needs 2k+3 <= r, k={k}, r={r}")));
    }
    let f = qpoch(Rational64::from_integer(k as i64 + 2), r - k - 2)
        .mul_q_pow(Rational64::new(((k + 1) * (k + 2)) as i64, 4));
    Ok(ev(&f, r)?.scale(&BigRational::from_integer(2.into())))
}

/// Exponent helper shared with the unified module: q^{e} at ξ as ξ^{...}.
pub fn xi_pow_of(e: Rational64, r: u64) -> Result<CycElem> {
    Ok(CycElem::xi_pow(r, xi_exponent(*e.numer(), *e.denom() as u64, r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::qnum;

    #[test]
    fn signature_examples() {
        assert_eq!(signature_counts(&[vec![1]]), Signature { pos: 1, neg: 0, zero: 0 });
        assert_eq!(signature_counts(&[vec![0, 1], vec![1, 0]]), Signature { pos: 1, neg: 1, zero: 0 });
        // chain [2, -1]: det = -3, trace 1
        assert_eq!(signature_counts(&[vec![2, 1], vec![1, -1]]), Signature { pos: 1, neg: 1, zero: 0 });
        assert_eq!(signature_counts(&[vec![1, 1], vec![1, 1]]), Signature { pos: 1, neg: 0, zero: 1 });
    }

    #[test]
    fn f_unknot_matches_direct_sum() {
        for r in [3u64, 5, 7, 9, 15] {
            for s in [1i64, -1] {
                let mut direct = CycElem::zero(r);
                for n in odd_colors(r) {
                    let f = (&qnum(n) * &qnum(n)).mul_q_pow(Rational64::new(s * (n * n - 1), 4));
                    direct += &ev(&f, r).unwrap();
                }
                assert_eq!(f_unknot(s, r).unwrap(), direct, "r={r} s={s}");
            }
        }
    }

    #[test]
    fn sphere_is_one() {
        for r in [3u64, 5, 7] {
            assert!(tau(&SurgeryPresentation::lens(1, 1), r).unwrap().is_one());
            assert!(tau(&SurgeryPresentation::lens(-1, 1), r).unwrap().is_one());
        }
    }

    #[test]
    fn lens_examples() {
        assert!(tau(&SurgeryPresentation::lens(2, 1), 3).unwrap().is_one());
        assert!(tau_lens_closed(1, 1, 7).unwrap().is_one());
        assert!(tau_lens_closed(2, 1, 3).unwrap().is_one());
        assert_eq!(tau_lens_closed(5, 1, 3).unwrap(), tau(&SurgeryPresentation::lens(5, 1), 3).unwrap());
    }

    #[test]
    fn connected_sum_multiplies() {
        let l = SurgeryPresentation::lens(3, 1);
        let s = SurgeryPresentation::ConnectedSum(vec![l.clone(), l.clone()]);
        let t = tau(&l, 5).unwrap();
        assert_eq!(tau(&s, 5).unwrap(), &t * &t);
    }

    #[test]
    fn zero_framing_closed_form() {
        for r in [3u64, 5, 7, 9] {
            for k in 0..=(r - 3) / 2 {
                let brute = crate::laplace::binomial_xi_sum(0, k, r).unwrap();
                assert_eq!(zero_framing_closed(k, r).unwrap(), brute, "r={r} k={k}");
            }
            for k in (r - 1) / 2..=(r - 2) {
                assert!(zero_framing_closed(k, r).is_err());
            }
        }
        // F_{U0} = Σ^ξ [n]^2 = (k=0 sum)/{1}
        let r = 3;
        let pl = Plumbing::knot(KnotKind::Unknot, Fraction::from_integer(0), &Expansion::Standard);
        let f0 = f_link(&pl, r).unwrap();
        let closed = zero_framing_closed(0, r).unwrap().div(&ev(&qint(1), r).unwrap()).unwrap();
        assert_eq!(f0, closed);
    }

    #[test]
    fn chain_lemma_matches_state_sum() {
        for r in [5u64, 7, 11] {
            for (a, b) in [(3i64, 2i64), (2, 3), (5, 3), (-3, 2), (1, 2), (7, 4)] {
                if b.unsigned_abs().gcd(&r) != 1 {
                    continue;
                }
                let ms = neg_continued_fraction_with(Fraction::new(a, b), Rounding::Ceil);
                for j in [1i64, 3, 5] {
                    if j % r as i64 == 0 {
                        assert!(hopf_chain_closed(Fraction::new(a, b), j, r).is_err());
                        continue;
                    }
                    let lhs = hopf_chain_sum(&ms, j, r).unwrap();
                    let rhs = hopf_chain_closed(Fraction::new(a, b), j, r).unwrap();
                    assert_eq!(lhs, rhs, "a/b={a}/{b} j={j} r={r}");
                }
            }
        }
    }

    #[test]
    fn lens_state_sum_matches_closed_form() {
        for r in [3u64, 5, 7, 9, 11] {
            for a in [-5i64, -3, -2, 1, 2, 3, 4, 5, 7] {
                for b in 1..a.abs().max(2) {
                    if a.gcd(&b) != 1 || a.unsigned_abs().gcd(&r) != 1 || b.unsigned_abs().gcd(&r) != 1 {
                        continue;
                    }
                    let t = tau(&SurgeryPresentation::lens(a, b), r).unwrap();
                    assert_eq!(t, tau_lens_closed(a, b, r).unwrap(), "lens {a} {b} r={r}");
                }
            }
        }
    }

    #[test]
    fn chain_expansions_agree() {
        for (a, b) in [(3i64, 2i64), (5, 3), (7, 5), (-4, 3)] {
            let ceil = neg_continued_fraction_with(Fraction::new(a, b), Rounding::Ceil);
            let floor = neg_continued_fraction_with(Fraction::new(a, b), Rounding::Floor);
            assert_ne!(ceil, floor);
            for r in [5u64, 7] {
                assert_eq!(tau_lens_chain(&ceil, r).unwrap(), tau_lens_chain(&floor, r).unwrap(), "{a}/{b} r={r}");
            }
        }
    }

    #[test]
    fn integral_at_orders_sharing_factors() {
        assert!(tau(&SurgeryPresentation::lens(3, 1), 9).unwrap().is_integral());
        assert!(tau(&SurgeryPresentation::twist(1, 5, 1), 15).unwrap().is_integral());
        assert!(tau(&SurgeryPresentation::lens(6, 5), 9).unwrap().is_integral());
    }

    #[test]
    fn seifert_spheres_match_twist_surgery() {
        for r in [3u64, 5, 7, 9] {
            let p = tau(&SurgeryPresentation::poincare(), r).unwrap();
            assert_eq!(p, tau(&SurgeryPresentation::twist(1, -1, 1), r).unwrap(), "r={r}");
            let b = tau(&SurgeryPresentation::brieskorn_237(), r).unwrap();
            assert_eq!(b, tau(&SurgeryPresentation::twist(1, 1, 1), r).unwrap(), "r={r}");
        }
    }

    #[test]
    fn framing_shift_multiplies_color_terms() {
        let r = 7;
        let t = Tables::new(r);
        for n in odd_colors(r) {
            let e = xi_pow_of(Rational64::new(n * n - 1, 4), r).unwrap();
            assert_eq!(t.framing(3, n), &t.framing(2, n) * &e);
        }
    }
}
