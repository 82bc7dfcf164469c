//! Dyadic interpolation helpers: choosing dyadic points inside intervals
//! and power-of-two slope maps between dyadic intervals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ordcore::{dyadic_depth, is_dyadic, log2_exact, pow2, ExtPoint, Q};

/// Two dyadic rationals `a < b` strictly inside `(lo,hi)`.
pub fn dyadic_inside(lo: &ExtPoint, hi: &ExtPoint) -> (Q, Q) {
    use ExtPoint::*;
    match (lo, hi) {
        (Fin(x), Fin(y)) => {
            let w = y - x;
            let mut n = 0i64;
            while pow2(-n) * Q::from_integer(4.into()) >= w {
                n += 1;
            }
            let e = pow2(-n);
            let a = (x / &e).floor() * &e + &e;
            let b = (y / &e).ceil() * &e - &e;
            (a, b)
        }
        (NegInf, Fin(y)) => {
            let b = y.floor() - Q::one();
            (&b - Q::one(), b)
        }
        (Fin(x), PosInf) => {
            let a = x.floor() + Q::one();
            let b = &a + Q::one();
            (a, b)
        }
        _ => (Q::from_integer(0.into()), Q::one()),
    }
}

/// A dyadic point strictly inside `(lo,hi)`.
pub fn dyadic_point(lo: &ExtPoint, hi: &ExtPoint) -> Q {
    dyadic_inside(lo, hi).0
}

/// Greedy decomposition of a dyadic interval `[a,b]` into maximal
/// standard dyadic intervals `[k 2^-n, (k+1) 2^-n]`.
fn standard_pieces(a: &Q, b: &Q) -> Vec<(Q, Q)> {
    let mut out = Vec::new();
    let mut x = a.clone();
    while &x < b {
        let mut k = if x.is_zero() {
            64
        } else if x.is_integer() {
            x.numer().trailing_zeros().unwrap_or(0) as i64
        } else {
            -(dyadic_depth(&x) as i64)
        };
        while &x + pow2(k) > *b {
            k -= 1;
        }
        let y = &x + pow2(k);
        out.push((x, y.clone()));
        x = y;
    }
    out
}

/// Increasing PL homeomorphism `[a0,a1] -> [b0,b1]` with dyadic breakpoints
/// and power-of-two slopes, as a list of node pairs (including both ends).
pub fn dyadic_map_between(a0: &Q, a1: &Q, b0: &Q, b1: &Q) -> Vec<(Q, Q)> {
    assert!(a0 < a1 && b0 < b1, "degenerate dyadic interval");
    assert!(
        [a0, a1, b0, b1].iter().all(|x| is_dyadic(x)),
        "non-dyadic endpoint"
    );
    if a1 - a0 == b1 - b0 {
        return vec![(a0.clone(), b0.clone()), (a1.clone(), b1.clone())];
    }
    let mut src = standard_pieces(a0, a1);
    let mut dst = standard_pieces(b0, b1);
    while src.len() != dst.len() {
        let v = if src.len() < dst.len() { &mut src } else { &mut dst };
        let i = (0..v.len()).max_by(|&i, &j| (&v[i].1 - &v[i].0).cmp(&(&v[j].1 - &v[j].0)).then(j.cmp(&i))).unwrap();
        let (x, y) = v[i].clone();
        let m = (&x + &y) / Q::from_integer(BigInt::from(2));
        v[i] = (x, m.clone());
        v.insert(i + 1, (m, y));
    }
    let mut out = vec![(a0.clone(), b0.clone())];
    for (s, d) in src.iter().zip(dst.iter()) {
        out.push((s.1.clone(), d.1.clone()));
    }
    out
}

/// Depth of a rational's denominator, or `None` if not dyadic.
pub fn dyadic_level(x: &Q) -> Option<u64> {
    if is_dyadic(x) {
        Some(dyadic_depth(x))
    } else {
        None
    }
}

/// Round `x` down to a multiple of `2^-n`.
pub fn floor_dyadic(x: &Q, n: i64) -> Q {
    let e = pow2(-n);
    (x / &e).floor() * e
}

pub fn is_power_of_two(x: &Q) -> bool {
    log2_exact(x).is_some()
}
