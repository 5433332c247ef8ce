//! Antinef closure by unloading, and the colength of complete ideals.
//!
//! On a negative definite lattice every divisor `D` has a unique smallest
//! antinef divisor above it. Unloading finds it by repeatedly raising a
//! component with `D·E_j > 0`.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{DualGraph, ZDivisor};
use crate::rational::{ceil_div, Z};

/// `D·E_j <= 0` for every `j`.
pub fn is_antinef(g: &DualGraph, d: &ZDivisor) -> bool {
    assert_eq!(d.len(), g.n(), "divisor length");
    (0..g.n()).all(|j| !g.dot_e(d, j).is_positive())
}

/// Smallest antinef divisor `>= D`. Negative coefficients are clamped to zero
/// first; antinef divisors are effective, so this does not change the result.
///
/// At the lowest violated index `j`, adding `⌈(D·E_j)/(-E_j²)⌉ E_j` is the
/// least increase of `D_j` that restores `D·E_j <= 0` with the neighbours
/// held fixed, so no antinef divisor above `D` is overshot.
pub fn antinef_closure(g: &DualGraph, d: &ZDivisor) -> ZDivisor {
    unload(g, d, (0..g.n()).collect::<Vec<_>>().as_slice(), true)
}

/// Unit-step unloading; kept as an independent oracle for [`antinef_closure`].
pub fn antinef_closure_unit(g: &DualGraph, d: &ZDivisor) -> ZDivisor {
    unload(g, d, (0..g.n()).collect::<Vec<_>>().as_slice(), false)
}

/// Ceiling-step unloading scanning components in the given priority order.
pub fn antinef_closure_in_order(g: &DualGraph, d: &ZDivisor, order: &[usize]) -> ZDivisor {
    assert_eq!(order.len(), g.n(), "order length");
    unload(g, d, order, true)
}

fn unload(g: &DualGraph, d: &ZDivisor, order: &[usize], ceiling: bool) -> ZDivisor {
    assert_eq!(d.len(), g.n(), "divisor length");
    let mut cur = d.clamp_nonneg();
    // Products are updated incrementally: raising D_j by s changes D·E_j by
    // s·E_j² and each neighbour product by s.
    let mut prod: Vec<Z> = (0..g.n()).map(|j| g.dot_e(&cur, j)).collect();
    loop {
        let Some(&j) = order.iter().find(|&&j| prod[j].is_positive()) else {
            return cur;
        };
        let step = if ceiling {
            ceil_div(&prod[j], &Z::from(-g.self_intersection(j)))
        } else {
            Z::from(1)
        };
        cur.0[j] += &step;
        prod[j] += &step * g.self_intersection(j);
        for &i in g.neighbors(j) {
            prod[i] += &step;
        }
    }
}

/// Colength `-D·(D + K)/2` of the complete ideal of an antinef divisor.
pub fn colength(g: &DualGraph, d: &ZDivisor) -> Result<Z> {
    if !is_antinef(g, d) {
        return Err(Error::DivisorNotAntinef(d.to_string()));
    }
    let dq = d.to_q();
    let mut dk = dq.clone();
    for (x, k) in dk.0.iter_mut().zip(&g.canonical().0) {
        *x += k;
    }
    let v = -g.intersect_q(&dq, &dk);
    let two = Z::from(2);
    if !v.is_integer() {
        return Err(Error::NonIntegralResult {
            what: "colength".into(),
            value: crate::rational::fmt_q(&v),
        });
    }
    let v = v.to_integer();
    // -D·(D+K) is even for integral D by adjunction; halving is exact.
    let (h, r) = v.div_rem(&two);
    if !r.is_zero() || h.is_negative() {
        return Err(Error::NonIntegralResult { what: "colength".into(), value: v.to_string() });
    }
    Ok(h)
}
