//! Regular open subsets of the completed line and circle, kept in a
//! canonical form: finitely many disjoint open intervals separated by
//! strict gaps. On that form `int(cl(U)) = U` holds syntactically.

use std::fmt;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::ordcore::{fmt_q, frac, CircInterval, CirclePoint, ExtPoint, LinInterval, Q};

/// Operations shared by the line and circle algebras; used by the generic
/// witness constructions.
pub trait RoSet: Clone + Eq + Debug {
    type Pt: Clone + Eq + Debug;

    fn zero() -> Self;
    fn one() -> Self;
    fn sum(&self, other: &Self) -> Self;
    fn meet(&self, other: &Self) -> Self;
    fn complement(&self) -> Self;
    fn contains(&self, p: &Self::Pt) -> bool;
    /// Connected components, each as a set.
    fn pieces(&self) -> Vec<Self>;
    /// Finitely many points inside a nonempty set, dense-ish at level `k`.
    fn probe_points(&self, k: u32) -> Vec<Self::Pt>;
    /// Open interval of radius `2^-n` around `p`.
    fn nbhd(p: &Self::Pt, n: u32) -> Self;
    /// A bounded interval with dyadic endpoints whose closure lies inside
    /// the (nonempty) set.
    fn bounded_piece(&self) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.meet(&other.complement())
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn leq(&self, other: &Self) -> bool {
        self.minus(other).is_zero()
    }
    fn disjoint(&self, other: &Self) -> bool {
        self.meet(other).is_zero()
    }
}

/// Sort, drop empties, merge overlapping or touching intervals.
pub(crate) fn canon<E: Ord + Clone>(mut raw: Vec<(E, E)>) -> Vec<(E, E)> {
    raw.retain(|(a, b)| a < b);
    raw.sort();
    let mut out: Vec<(E, E)> = Vec::with_capacity(raw.len());
    for (a, b) in raw {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

pub(crate) fn meet_lists<E: Ord + Clone>(x: &[(E, E)], y: &[(E, E)]) -> Vec<(E, E)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() && j < y.len() {
        let lo = std::cmp::max(&x[i].0, &y[j].0);
        let hi = std::cmp::min(&x[i].1, &y[j].1);
        if lo < hi {
            out.push((lo.clone(), hi.clone()));
        }
        if x[i].1 < y[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    canon(out)
}

pub(crate) fn complement_list<E: Ord + Clone>(x: &[(E, E)], lo: E, hi: E) -> Vec<(E, E)> {
    let mut out = Vec::new();
    let mut cur = lo;
    for (a, b) in x {
        if &cur < a {
            out.push((cur.clone(), a.clone()));
        }
        cur = b.clone();
    }
    if cur < hi {
        out.push((cur, hi));
    }
    out
}

fn contains_list<E: Ord>(x: &[(E, E)], p: &E) -> bool {
    // components are sorted; binary search on left endpoints
    let idx = x.partition_point(|(a, _)| a < p);
    idx > 0 && p < &x[idx - 1].1
}

fn dyadic_between(lo: &Q, hi: &Q) -> (Q, Q) {
    crate::dyadic::dyadic_inside(&ExtPoint::Fin(lo.clone()), &ExtPoint::Fin(hi.clone()))
}

// ---------------------------------------------------------------- line

/// Regular open subset of the completed line.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoLin {
    comps: Vec<(ExtPoint, ExtPoint)>,
}

impl RoLin {
    pub fn empty() -> Self {
        RoLin { comps: vec![] }
    }
    pub fn whole() -> Self {
        RoLin { comps: vec![(ExtPoint::NegInf, ExtPoint::PosInf)] }
    }
    /// `int(cl(·))` of a finite union of open intervals.
    pub fn from_raw(raw: Vec<(ExtPoint, ExtPoint)>) -> Self {
        RoLin { comps: canon(raw) }
    }
    pub fn interval(lo: ExtPoint, hi: ExtPoint) -> Self {
        Self::from_raw(vec![(lo, hi)])
    }
    pub fn fin(lo: Q, hi: Q) -> Self {
        Self::interval(ExtPoint::Fin(lo), ExtPoint::Fin(hi))
    }
    pub fn from_interval(i: &LinInterval) -> Self {
        Self::interval(i.lo.clone(), i.hi.clone())
    }
    pub fn components(&self) -> &[(ExtPoint, ExtPoint)] {
        &self.comps
    }
    pub fn intervals(&self) -> Vec<LinInterval> {
        self.comps.iter().map(|(a, b)| LinInterval { lo: a.clone(), hi: b.clone() }).collect()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn inf(&self) -> Option<&ExtPoint> {
        self.comps.first().map(|c| &c.0)
    }
    pub fn sup(&self) -> Option<&ExtPoint> {
        self.comps.last().map(|c| &c.1)
    }
    pub fn convex_hull(&self) -> Option<LinInterval> {
        Some(LinInterval { lo: self.inf()?.clone(), hi: self.sup()?.clone() })
    }
    pub fn contains_pt(&self, p: &ExtPoint) -> bool {
        contains_list(&self.comps, p)
    }
    pub fn is_bounded(&self) -> bool {
        self.comps.iter().all(|(a, b)| a.is_finite() && b.is_finite())
    }
    /// Exactly one component with finite endpoints.
    pub fn is_bounded_interval(&self) -> bool {
        self.comps.len() == 1 && self.is_bounded()
    }
    pub fn is_ray(&self) -> bool {
        self.comps.len() == 1 && (self.comps[0].0.is_finite() != self.comps[0].1.is_finite())
    }
    /// Image under a monotone map given on endpoints.
    pub fn map_endpoints(&self, f: impl Fn(&ExtPoint) -> ExtPoint) -> Self {
        Self::from_raw(
            self.comps
                .iter()
                .map(|(a, b)| {
                    let (x, y) = (f(a), f(b));
                    if x < y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect(),
        )
    }
    /// Hull strictly below the other hull (`sup U <= inf V`).
    pub fn below(&self, other: &RoLin) -> bool {
        match (self.sup(), other.inf()) {
            (Some(s), Some(i)) => s <= i,
            _ => false,
        }
    }
}

impl RoSet for RoLin {
    type Pt = ExtPoint;

    fn zero() -> Self {
        Self::empty()
    }
    fn one() -> Self {
        Self::whole()
    }
    fn sum(&self, other: &Self) -> Self {
        Self::from_raw(self.comps.iter().chain(other.comps.iter()).cloned().collect())
    }
    fn meet(&self, other: &Self) -> Self {
        RoLin { comps: meet_lists(&self.comps, &other.comps) }
    }
    fn complement(&self) -> Self {
        RoLin { comps: complement_list(&self.comps, ExtPoint::NegInf, ExtPoint::PosInf) }
    }
    fn contains(&self, p: &ExtPoint) -> bool {
        self.contains_pt(p)
    }
    fn pieces(&self) -> Vec<Self> {
        self.comps.iter().map(|c| RoLin { comps: vec![c.clone()] }).collect()
    }
    fn probe_points(&self, k: u32) -> Vec<ExtPoint> {
        let mut out = Vec::new();
        let m = 1i64 << k;
        for (a, b) in &self.comps {
            let (lo, hi) = match (a, b) {
                (ExtPoint::Fin(x), ExtPoint::Fin(y)) => (x.clone(), y.clone()),
                (ExtPoint::NegInf, ExtPoint::Fin(y)) => (y - Q::from_integer((m).into()), y.clone()),
                (ExtPoint::Fin(x), ExtPoint::PosInf) => (x.clone(), x + Q::from_integer((m).into())),
                _ => (Q::from_integer((-m).into()), Q::from_integer(m.into())),
            };
            let w = &hi - &lo;
            for i in 1..m {
                out.push(ExtPoint::Fin(&lo + &w * Q::new(i.into(), m.into())));
            }
        }
        out
    }
    fn nbhd(p: &ExtPoint, n: u32) -> Self {
        match p {
            ExtPoint::Fin(x) => {
                let e = crate::ordcore::pow2(-(n as i64));
                Self::fin(x - &e, x + &e)
            }
            _ => Self::empty(),
        }
    }
    fn bounded_piece(&self) -> Self {
        let (a, b) = &self.comps[0];
        let (x, y) = crate::dyadic::dyadic_inside(a, b);
        Self::fin(x, y)
    }
}

impl fmt::Debug for RoLin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RoLin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.comps.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{}", parts.join("∪"))
    }
}

pub fn seg_lin(u: &RoLin, v: &RoLin) -> bool {
    u.is_empty() || v.is_empty() || u.below(v) || v.below(u)
}

/// Every selection `x_i ∈ U_i` is strictly between in one common direction.
pub fn bets(u1: &RoLin, u2: &RoLin, u3: &RoLin) -> bool {
    if u1.is_empty() || u2.is_empty() || u3.is_empty() {
        return false;
    }
    (u1.below(u2) && u2.below(u3)) || (u3.below(u2) && u2.below(u1))
}

// ---------------------------------------------------------------- circle

/// Regular open subset of the circle. Stored as a canonical regular open
/// subset of `(0,1)`; the point `0` belongs to the set exactly when both a
/// component starting at 0 and one ending at 1 are present.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoCirc {
    segs: Vec<(Q, Q)>,
}

impl RoCirc {
    pub fn empty() -> Self {
        RoCirc { segs: vec![] }
    }
    pub fn whole() -> Self {
        RoCirc { segs: vec![(Q::zero(), Q::one())] }
    }
    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }
    pub fn is_whole(&self) -> bool {
        self.segs.len() == 1 && self.segs[0].0.is_zero() && self.segs[0].1.is_one()
    }
    /// Counterclockwise open arc from `s` to `e`; `s == e` is the punctured
    /// circle, whose regularization is the whole circle.
    pub fn arc(s: &Q, e: &Q) -> Self {
        let (s, e) = (frac(s), frac(e));
        let raw = if s < e {
            vec![(s, e)]
        } else if e.is_zero() {
            vec![(s, Q::one())]
        } else if s == e {
            vec![(Q::zero(), Q::one())]
        } else {
            vec![(s, Q::one()), (Q::zero(), e)]
        };
        RoCirc { segs: canon(raw) }
    }
    pub fn from_interval(i: &CircInterval) -> Self {
        if i.whole {
            Self::whole()
        } else {
            Self::arc(i.start.value(), i.end.value())
        }
    }
    pub fn from_arcs(arcs: &[(Q, Q)]) -> Self {
        arcs.iter().fold(Self::empty(), |acc, (s, e)| acc.sum(&Self::arc(s, e)))
    }
    pub fn segments(&self) -> &[(Q, Q)] {
        &self.segs
    }
    /// Components as counterclockwise arcs `(start,end)`; an arc through 0
    /// has `start > end`. Empty for the whole circle.
    pub fn arcs(&self) -> Vec<(Q, Q)> {
        if self.is_whole() {
            return vec![];
        }
        let n = self.segs.len();
        if n >= 2 && self.segs[0].0.is_zero() && self.segs[n - 1].1.is_one() {
            let mut out = vec![(self.segs[n - 1].0.clone(), self.segs[0].1.clone())];
            out.extend(self.segs[1..n - 1].iter().cloned());
            out
        } else {
            self.segs.iter().map(|(a, b)| (a.clone(), if b.is_one() { Q::zero() } else { b.clone() })).collect()
        }
    }
    pub fn intervals(&self) -> Vec<CircInterval> {
        if self.is_whole() {
            return vec![CircInterval::whole()];
        }
        self.arcs().into_iter().map(|(s, e)| CircInterval::arc(s, e)).collect()
    }
    pub fn contains_pt(&self, p: &CirclePoint) -> bool {
        let v = p.value();
        if v.is_zero() {
            self.segs.first().is_some_and(|s| s.0.is_zero()) && self.segs.last().is_some_and(|s| s.1.is_one())
        } else {
            contains_list(&self.segs, v)
        }
    }
    /// One component, not the whole circle.
    pub fn is_bounded_interval(&self) -> bool {
        !self.is_whole() && self.arcs().len() == 1
    }
    /// Image under a circle homeomorphism given by its action on points.
    pub fn map_endpoints(&self, f: impl Fn(&Q) -> Q, preserving: bool) -> Self {
        if self.is_whole() {
            return Self::whole();
        }
        self.arcs().iter().fold(Self::empty(), |acc, (s, e)| {
            let (x, y) = (f(s), f(e));
            let img = if preserving { Self::arc(&x, &y) } else { Self::arc(&y, &x) };
            acc.sum(&img)
        })
    }
}

impl RoSet for RoCirc {
    type Pt = CirclePoint;

    fn zero() -> Self {
        Self::empty()
    }
    fn one() -> Self {
        Self::whole()
    }
    fn sum(&self, other: &Self) -> Self {
        RoCirc { segs: canon(self.segs.iter().chain(other.segs.iter()).cloned().collect()) }
    }
    fn meet(&self, other: &Self) -> Self {
        RoCirc { segs: meet_lists(&self.segs, &other.segs) }
    }
    fn complement(&self) -> Self {
        RoCirc { segs: complement_list(&self.segs, Q::zero(), Q::one()) }
    }
    fn contains(&self, p: &CirclePoint) -> bool {
        self.contains_pt(p)
    }
    fn pieces(&self) -> Vec<Self> {
        if self.is_whole() {
            return vec![self.clone()];
        }
        self.arcs().iter().map(|(s, e)| Self::arc(s, e)).collect()
    }
    fn probe_points(&self, k: u32) -> Vec<CirclePoint> {
        let m = 1i64 << k;
        let arcs = if self.is_whole() { vec![(Q::zero(), Q::zero())] } else { self.arcs() };
        let mut out = Vec::new();
        for (s, e) in arcs {
            let len = {
                let d = frac(&(&e - &s));
                if d.is_zero() {
                    Q::one()
                } else {
                    d
                }
            };
            for i in 1..m {
                out.push(CirclePoint::new(&s + &len * Q::new(i.into(), m.into())));
            }
        }
        out
    }
    fn nbhd(p: &CirclePoint, n: u32) -> Self {
        let e = crate::ordcore::pow2(-(n as i64));
        Self::arc(&(p.value() - &e), &(p.value() + &e))
    }
    fn bounded_piece(&self) -> Self {
        if self.is_whole() {
            return Self::arc(&Q::new(1.into(), 4.into()), &Q::new(3.into(), 4.into()));
        }
        let (s, e) = &self.arcs()[0];
        let e_lift = if e <= s { e + Q::one() } else { e.clone() };
        let (x, y) = dyadic_between(s, &e_lift);
        Self::arc(&x, &y)
    }
}

impl fmt::Debug for RoCirc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RoCirc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        if self.is_whole() {
            return write!(f, "C");
        }
        let parts: Vec<String> = self.arcs().iter().map(|(s, e)| format!("({},{})", fmt_q(s), fmt_q(e))).collect();
        write!(f, "{}", parts.join("∪"))
    }
}

/// Labels of the arcs of several disjoint non-whole sets, read
/// counterclockwise, with consecutive repeats (cyclically) collapsed.
fn cyclic_label_word(sets: &[&RoCirc]) -> Vec<usize> {
    let mut arcs: Vec<(Q, usize)> = Vec::new();
    for (i, u) in sets.iter().enumerate() {
        for (s, _) in u.arcs() {
            arcs.push((s, i));
        }
    }
    arcs.sort();
    let mut word: Vec<usize> = Vec::new();
    for (_, l) in arcs {
        if word.last() != Some(&l) {
            word.push(l);
        }
    }
    while word.len() > 1 && word.first() == word.last() {
        word.pop();
    }
    word
}

fn pairwise_disjoint(sets: &[&RoCirc]) -> bool {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].disjoint(sets[j]) {
                return false;
            }
        }
    }
    true
}

/// `U` and `V` lie in disjoint arcs (trivially true if either is empty).
pub fn seg_circ(u: &RoCirc, v: &RoCirc) -> bool {
    if u.is_empty() || v.is_empty() {
        return true;
    }
    if u.is_whole() || v.is_whole() || !u.disjoint(v) {
        return false;
    }
    cyclic_label_word(&[u, v]).len() <= 2
}

/// `Cr(x_1,…,x_k)` for every selection `x_i ∈ U_i`.
pub fn crs(sets: &[&RoCirc]) -> bool {
    if sets.iter().any(|u| u.is_empty()) {
        return false;
    }
    match sets.len() {
        0 | 1 => true,
        2 => sets[0].disjoint(sets[1]),
        k => {
            if sets.iter().any(|u| u.is_whole()) || !pairwise_disjoint(sets) {
                return false;
            }
            let w = cyclic_label_word(sets);
            w.len() == k && (0..k).all(|i| w[(i + 1) % k] == (w[i] + 1) % k)
        }
    }
}

pub fn crs_pm(u1: &RoCirc, u2: &RoCirc, u3: &RoCirc) -> bool {
    crs(&[u1, u2, u3]) || crs(&[u3, u2, u1])
}

pub fn seps(u1: &RoCirc, u2: &RoCirc, u3: &RoCirc, u4: &RoCirc) -> bool {
    crs(&[u1, u2, u3, u4]) || crs(&[u4, u3, u2, u1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordcore::{q, qi};

    fn l(a: i64, b: i64) -> RoLin {
        RoLin::fin(qi(a), qi(b))
    }
    fn c(a: (i64, i64), b: (i64, i64)) -> RoCirc {
        RoCirc::arc(&q(a.0, a.1), &q(b.0, b.1))
    }

    #[test]
    fn line_examples() {
        assert_eq!(l(0, 1).sum(&l(1, 2)), l(0, 2));
        assert_eq!(RoLin::empty().sum(&l(0, 1)), l(0, 1));
        assert_eq!(l(0, 1).sum(&l(2, 3)).components().len(), 2);
        let neg = l(0, 1).complement();
        assert_eq!(
            neg,
            RoLin::from_raw(vec![(ExtPoint::NegInf, ExtPoint::Fin(qi(0))), (ExtPoint::Fin(qi(1)), ExtPoint::PosInf)])
        );
        assert_eq!(RoLin::empty().complement(), RoLin::whole());
        assert_eq!(l(0, 2).meet(&l(1, 3)), l(1, 2));
        assert!(l(0, 1).leq(&l(0, 2)));
        assert!(l(0, 1).disjoint(&l(1, 2)));
        let rhs = l(0, 1).sum(&RoLin::fin(q(3, 2), qi(3)));
        assert!(!l(0, 2).leq(&rhs));
        assert!(l(0, 2).contains(&ExtPoint::Fin(q(5, 4))) && !rhs.contains(&ExtPoint::Fin(q(5, 4))));
    }

    #[test]
    fn hull_and_shape() {
        assert_eq!(l(0, 1).sum(&l(2, 3)).convex_hull(), Some(LinInterval::fin(qi(0), qi(3)).unwrap()));
        assert_eq!(RoLin::empty().convex_hull(), None);
        let r = RoLin::interval(ExtPoint::NegInf, ExtPoint::Fin(qi(0))).sum(&l(1, 2));
        assert_eq!(r.convex_hull().unwrap().lo, ExtPoint::NegInf);
        assert!(l(0, 1).is_bounded_interval());
        assert!(RoLin::interval(ExtPoint::NegInf, ExtPoint::Fin(qi(0))).is_ray());
        let two = l(0, 1).sum(&l(2, 3));
        assert!(!two.is_bounded_interval() && !two.is_ray());
    }

    #[test]
    fn segregation_line() {
        assert!(seg_lin(&l(0, 1), &l(2, 3)));
        assert!(!seg_lin(&l(0, 2), &l(1, 3)));
        let u = l(0, 1).sum(&l(4, 5));
        assert!(!seg_lin(&u, &l(2, 3)));
        assert!(u.disjoint(&l(2, 3)));
        assert!(bets(&l(0, 1), &l(2, 3), &l(4, 5)));
        assert!(bets(&l(4, 5), &l(2, 3), &l(0, 1)));
        assert!(!bets(&l(0, 1), &l(4, 5), &l(2, 3)));
    }

    #[test]
    fn circle_examples() {
        let a = c((0, 1), (1, 4));
        assert!(seg_circ(&a, &c((1, 2), (3, 4))));
        let u = a.sum(&c((1, 2), (5, 8)));
        let v = c((3, 8), (7, 16)).sum(&c((3, 4), (7, 8)));
        assert!(!seg_circ(&u, &v));
        assert!(seg_circ(&RoCirc::empty(), &v));
        assert!(crs_pm(&c((0, 1), (1, 8)), &c((1, 4), (3, 8)), &c((1, 2), (5, 8))));
        assert!(seps(&c((0, 1), (1, 8)), &c((1, 4), (3, 8)), &c((1, 2), (5, 8)), &c((3, 4), (7, 8))));
        assert!(!crs(&[&c((0, 1), (1, 8)), &c((1, 2), (5, 8)), &c((1, 4), (3, 8)), &c((3, 4), (7, 8))]));
    }

    #[test]
    fn punctured_circle_is_whole() {
        assert!(RoCirc::arc(&q(1, 3), &q(1, 3)).is_whole());
        assert!(c((1, 3), (2, 3)).sum(&c((2, 3), (1, 3))).is_whole());
        assert!(c((0, 1), (1, 2)).sum(&c((1, 2), (0, 1))).is_whole());
    }

    #[test]
    fn wrapping_arcs() {
        let w = c((3, 4), (1, 4));
        assert!(w.contains(&CirclePoint::new(qi(0))));
        assert!(!w.contains(&CirclePoint::new(q(1, 2))));
        assert_eq!(w.arcs(), vec![(q(3, 4), q(1, 4))]);
        assert_eq!(w.complement(), c((1, 4), (3, 4)));
        let touching = c((3, 4), (0, 1));
        assert!(!touching.contains(&CirclePoint::new(qi(0))));
        assert_eq!(touching.arcs(), vec![(q(3, 4), qi(0))]);
    }
}
