//! Exact points and intervals on the rational line and circle, plus the
//! primitive betweenness, direction, orientation and separation relations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used everywhere.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or an integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Fractional part in `[0,1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_dyadic(x: &Q) -> bool {
    let d = x.denom();
    // power of two iff d & (d-1) == 0
    let dm1: BigInt = d - BigInt::one();
    (d & &dm1).is_zero()
}

/// Exponent `k` with `x = 2^k`, if `x` is a power of two.
pub fn log2_exact(x: &Q) -> Option<i64> {
    if !x.is_positive() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let pow = |v: &BigInt| -> Option<i64> {
        let vm1: BigInt = v - BigInt::one();
        if (v & &vm1).is_zero() {
            Some(v.bits() as i64 - 1)
        } else {
            None
        }
    };
    Some(pow(n)? - pow(d)?)
}

pub fn pow2(k: i64) -> Q {
    if k >= 0 {
        Q::from_integer(BigInt::one() << (k as usize))
    } else {
        Q::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// Smallest `n >= 0` with `x * 2^n` an integer (dyadic `x` only).
pub fn dyadic_depth(x: &Q) -> u64 {
    x.denom().bits().saturating_sub(1)
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// A point of the completed line: a rational or one of the two ends.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtPoint {
    NegInf,
    Fin(Q),
    PosInf,
}

impl ExtPoint {
    pub fn fin(&self) -> Option<&Q> {
        match self {
            ExtPoint::Fin(x) => Some(x),
            _ => None,
        }
    }
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtPoint::Fin(_))
    }
    pub fn neg(&self) -> ExtPoint {
        match self {
            ExtPoint::NegInf => ExtPoint::PosInf,
            ExtPoint::PosInf => ExtPoint::NegInf,
            ExtPoint::Fin(x) => ExtPoint::Fin(-x),
        }
    }
    pub fn parse(s: &str) -> Result<ExtPoint> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtPoint::PosInf),
            "-inf" => Ok(ExtPoint::NegInf),
            t => parse_q(t).map(ExtPoint::Fin),
        }
    }
}

impl From<Q> for ExtPoint {
    fn from(x: Q) -> Self {
        ExtPoint::Fin(x)
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::NegInf => write!(f, "-inf"),
            ExtPoint::PosInf => write!(f, "inf"),
            ExtPoint::Fin(x) => write!(f, "{}", fmt_q(x)),
        }
    }
}

/// Point of the rational circle, normalized into `[0,1)`; counterclockwise
/// is increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(Q);

impl CirclePoint {
    pub fn new(x: Q) -> Self {
        CirclePoint(frac(&x))
    }
    pub fn value(&self) -> &Q {
        &self.0
    }
    pub fn parse(s: &str) -> Result<CirclePoint> {
        parse_q(s).map(CirclePoint::new)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.0))
    }
}

/// Nonempty open interval `(lo,hi)` of the completed line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinInterval {
    pub lo: ExtPoint,
    pub hi: ExtPoint,
}

impl LinInterval {
    pub fn new(lo: ExtPoint, hi: ExtPoint) -> Result<Self> {
        if lo < hi {
            Ok(LinInterval { lo, hi })
        } else {
            Err(Error::Invalid(format!("empty interval ({lo},{hi})")))
        }
    }
    pub fn fin(lo: Q, hi: Q) -> Result<Self> {
        Self::new(ExtPoint::Fin(lo), ExtPoint::Fin(hi))
    }
    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
    pub fn contains(&self, p: &ExtPoint) -> bool {
        &self.lo < p && p < &self.hi
    }
}

/// Counterclockwise arc from `start` to `end`, or the whole circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircInterval {
    pub start: CirclePoint,
    pub end: CirclePoint,
    pub whole: bool,
}

impl CircInterval {
    pub fn arc(start: Q, end: Q) -> Self {
        CircInterval { start: CirclePoint::new(start), end: CirclePoint::new(end), whole: false }
    }
    pub fn whole() -> Self {
        CircInterval { start: CirclePoint::new(Q::zero()), end: CirclePoint::new(Q::zero()), whole: true }
    }
    /// Counterclockwise length in `(0,1]`.
    pub fn length(&self) -> Q {
        if self.whole {
            return Q::one();
        }
        let d = frac(&(self.end.value() - self.start.value()));
        if d.is_zero() {
            Q::one()
        } else {
            d
        }
    }
    pub fn contains(&self, p: &CirclePoint) -> bool {
        if self.whole {
            return true;
        }
        p != &self.start && frac(&(p.value() - self.start.value())) < self.length()
    }
}

pub fn bet(x: &ExtPoint, y: &ExtPoint, z: &ExtPoint) -> bool {
    (x < y && y < z) || (x > y && y > z)
}

pub fn ed(x1: &ExtPoint, x2: &ExtPoint, y1: &ExtPoint, y2: &ExtPoint) -> bool {
    (x1 < x2 && y1 < y2) || (x1 > x2 && y1 > y2)
}

/// Betweenness recovered from the direction relation alone.
pub fn bet_from_ed(x: &ExtPoint, y: &ExtPoint, z: &ExtPoint) -> bool {
    ed(x, y, y, z)
}

/// Cyclic orientation test on anything totally ordered.
fn cr_ord<T: Ord>(x: &T, y: &T, z: &T) -> bool {
    (x < y && y < z) || (y < z && z < x) || (z < x && x < y)
}

pub fn cr(x: &CirclePoint, y: &CirclePoint, z: &CirclePoint) -> bool {
    cr_ord(x, y, z)
}

fn cr_n_ord<T: Ord>(p: &[T]) -> bool {
    match p.len() {
        0 | 1 => true,
        2 => p[0] != p[1],
        n => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        if !cr_ord(&p[i], &p[j], &p[k]) {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

pub fn cr_n(points: &[CirclePoint]) -> bool {
    cr_n_ord(points)
}

fn sep_ord<T: Ord + Clone>(a: &T, b: &T, c: &T, d: &T) -> bool {
    cr_n_ord(&[a.clone(), b.clone(), c.clone(), d.clone()])
        || cr_n_ord(&[d.clone(), c.clone(), b.clone(), a.clone()])
}

pub fn sep(x1: &CirclePoint, x2: &CirclePoint, x3: &CirclePoint, x4: &CirclePoint) -> bool {
    sep_ord(x1, x2, x3, x4)
}

fn eo_ord<T: Ord>(a: &[T; 3], b: &[T; 3]) -> bool {
    (cr_ord(&a[0], &a[1], &a[2]) && cr_ord(&b[0], &b[1], &b[2]))
        || (cr_ord(&a[2], &a[1], &a[0]) && cr_ord(&b[2], &b[1], &b[0]))
}

/// Equal orientation, evaluated from its definition.
pub fn eo(a: &[CirclePoint; 3], b: &[CirclePoint; 3]) -> bool {
    eo_ord(a, b)
}

fn phi1<T: Ord + Clone>(x: &[T; 3], z: &[T; 3]) -> bool {
    z.iter().all(|zi| sep_ord(&x[0], &x[1], &x[2], zi))
        && sep_ord(&x[1], &z[0], &z[1], &z[2])
        && sep_ord(&x[0], &x[2], &z[0], &z[2])
}

fn phi2<T: Ord + Clone>(x: &[T; 3], z: &[T; 3]) -> bool {
    let r1 = [x[1].clone(), x[2].clone(), x[0].clone()];
    let r2 = [x[2].clone(), x[0].clone(), x[1].clone()];
    phi1(x, z) || phi1(&r1, z) || phi1(&r2, z)
}

/// Equal orientation recovered from `Sep` alone: the existential witness
/// triple is searched over three interior points of every arc cut out by
/// the six inputs. Truth depends only on the cyclic order type, so the
/// search runs on integer ranks.
pub fn eo_from_sep(a: &[CirclePoint; 3], b: &[CirclePoint; 3]) -> bool {
    let mut pts: Vec<Q> = a.iter().chain(b.iter()).map(|p| p.value().clone()).collect();
    pts.sort();
    pts.dedup();
    let mut all = pts.clone();
    let n = pts.len();
    for i in 0..n {
        let lo = &pts[i];
        let hi = if i + 1 < n { pts[i + 1].clone() } else { &pts[0] + Q::one() };
        let w = &hi - lo;
        for k in 1..4 {
            all.push(frac(&(lo + &w * q(k, 4))));
        }
    }
    all.sort();
    all.dedup();
    let rank = |p: &CirclePoint| all.binary_search(p.value()).expect("input present") as u32;
    let ra = [rank(&a[0]), rank(&a[1]), rank(&a[2])];
    let rb = [rank(&b[0]), rank(&b[1]), rank(&b[2])];
    let m = all.len() as u32;
    let inputs: Vec<u32> = ra.iter().chain(rb.iter()).copied().collect();
    let cands: Vec<u32> = (0..m).filter(|r| !inputs.contains(r)).collect();
    // Candidates compatible with the first conjunct of some rotation of `a`.
    let rots = |x: &[u32; 3]| [*x, [x[1], x[2], x[0]], [x[2], x[0], x[1]]];
    let useful: Vec<u32> = cands
        .iter()
        .copied()
        .filter(|z| rots(&ra).iter().any(|r| sep_ord(&r[0], &r[1], &r[2], z)))
        .collect();
    for &z1 in &useful {
        for &z2 in &useful {
            for &z3 in &useful {
                let z = [z1, z2, z3];
                if phi2(&ra, &z) && phi2(&rb, &z) {
                    return true;
                }
            }
        }
    }
    false
}

/// Total order helper used by sorting code on the circle.
pub fn cmp_ccw_from(base: &Q, x: &Q, y: &Q) -> Ordering {
    frac(&(x - base)).cmp(&frac(&(y - base)))
}
