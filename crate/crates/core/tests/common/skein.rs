//! Jones polynomial from a planar diagram by the Kauffman bracket state sum.
//! Independent of the library: integer Laurent polynomials in A as maps.

use std::collections::BTreeMap;

/// Crossing `[i, j, k, l]`: edge labels counterclockwise from the incoming under-strand.
pub type Crossing = [usize; 4];

pub type Poly = BTreeMap<i64, i64>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    p[x] = r;
    r
}

fn loops(edges: usize, pairs: &[(usize, usize)]) -> usize {
    let mut p: Vec<usize> = (0..=edges).collect();
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut p, a), find(&mut p, b));
        p[ra] = rb;
    }
    (1..=edges).filter(|&e| find(&mut p, e) == e).count()
}

/// Writhe: a crossing is positive when the over-strand runs l -> j.
fn writhe(pd: &[Crossing], edges: usize) -> i64 {
    pd.iter()
        .map(|&[_, j, _, l]| {
            let forward = |from: usize, to: usize| to == from % edges + 1;
            if forward(l, j) {
                1
            } else if forward(j, l) {
                -1
            } else {
                panic!("over-strand edges {j}, {l} are not consecutive")
            }
        })
        .sum()
}

/// Kauffman bracket: A-smoothing joins (i,j)(k,l), the other joins (i,l)(j,k).
pub fn bracket(pd: &[Crossing]) -> Poly {
    let edges = pd.len() * 2;
    let delta: Poly = [(2, -1), (-2, -1)].into_iter().collect();
    let mut out = Poly::new();
    for state in 0u32..(1 << pd.len()) {
        let mut pairs = Vec::new();
        let mut expo = 0i64;
        for (c, &[i, j, k, l]) in pd.iter().enumerate() {
            if state >> c & 1 == 0 {
                pairs.push((i, j));
                pairs.push((k, l));
                expo += 1;
            } else {
                pairs.push((i, l));
                pairs.push((j, k));
                expo -= 1;
            }
        }
        let mut term: Poly = [(expo, 1)].into_iter().collect();
        for _ in 1..loops(edges, &pairs) {
            term = mul(&term, &delta);
        }
        for (e, c) in term {
            *out.entry(e).or_default() += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Jones polynomial as a map from exponents of t, via (-A^3)^{-w} <D> at A = t^{-1/4}.
pub fn jones(pd: &[Crossing]) -> Poly {
    let w = writhe(pd, pd.len() * 2);
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let mut out = Poly::new();
    for (e, c) in bracket(pd) {
        let a = e - 3 * w;
        assert!(a % 4 == 0, "A-exponent {a} is not a multiple of 4");
        out.insert(-a / 4, sign * c);
    }
    out
}

/// The mirror image: t -> 1/t.
pub fn mirror(v: &Poly) -> Poly {
    v.iter().map(|(e, c)| (-e, *c)).collect()
}

/// Trefoil diagram with three negative crossings.
pub const LEFT_TREFOIL: [Crossing; 3] = [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]];

/// Figure-eight diagram.
pub const FIGURE_EIGHT: [Crossing; 4] = [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];
