mod common;

use common::skein::{jones, mirror, FIGURE_EIGHT, LEFT_TREFOIL};
use common::to_q;
use so3inv::jones::{habiro_coeffs_from_colored, habiro_expand, twist_colored_jones, twist_knot_coeffs};
use so3inv::qring::qnum;

#[test]
fn skein_reproduces_tabulated_values() {
    let v: Vec<(i64, i64)> = jones(&LEFT_TREFOIL).into_iter().collect();
    assert_eq!(v, vec![(-4, -1), (-3, 1), (-1, 1)]);
    let v: Vec<(i64, i64)> = jones(&FIGURE_EIGHT).into_iter().collect();
    assert_eq!(v, vec![(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
}

#[test]
fn twist_one_is_the_right_trefoil() {
    let j2 = habiro_expand(&twist_knot_coeffs(1, 2), &[2]);
    assert_eq!(j2, &qnum(2) * &to_q(&mirror(&jones(&LEFT_TREFOIL))));
}

#[test]
fn twist_minus_one_is_the_figure_eight() {
    let j2 = habiro_expand(&twist_knot_coeffs(-1, 2), &[2]);
    assert_eq!(j2, &qnum(2) * &to_q(&jones(&FIGURE_EIGHT)));
}

#[test]
fn colored_values_recover_coefficients() {
    for p in [-2, -1, 1, 2] {
        let values: Vec<_> = (1..=5).map(|n| twist_colored_jones(p, n)).collect();
        let h = habiro_coeffs_from_colored(&values).unwrap();
        for k in 0..5u64 {
            assert_eq!(h.get(&[k]), twist_knot_coeffs(p, 4).get(&[k]), "p={p} k={k}");
        }
    }
}
