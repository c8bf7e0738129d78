#![allow(dead_code)]

pub mod skein;

use num_rational::{BigRational, Rational64};
use so3inv::qring::QLaurent;

/// An integer Laurent polynomial in t, read with t = q.
pub fn to_q(v: &skein::Poly) -> QLaurent {
    let mut out = QLaurent::zero();
    for (e, c) in v {
        out += &QLaurent::monomial(BigRational::from_integer((*c).into()), Rational64::from_integer(*e));
    }
    out
}
