//! Exact piecewise-linear homeomorphisms of the line and of the circle.

use std::fmt;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dyadic::dyadic_map_between;
use crate::error::{Error, Result};
use crate::ordcore::{fmt_q, frac, CirclePoint, ExtPoint, LinInterval, Q};
use crate::roalg::{RoCirc, RoLin, RoSet};

/// A group element acting on a space whose regular open algebra is `Set`.
pub trait Homeo: Clone + Eq + Debug {
    type Set: RoSet;

    fn identity() -> Self;
    /// `self ∘ other`.
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn apply(&self, p: &<Self::Set as RoSet>::Pt) -> <Self::Set as RoSet>::Pt;
    fn image(&self, u: &Self::Set) -> Self::Set;
    fn var(&self) -> Self::Set;
    fn preserving(&self) -> bool;
    /// Nonidentity element with `var ⊆ u`, moving points upward; `u` must
    /// be a single interval.
    fn bump(u: &Self::Set) -> Self;

    fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
    /// `h ∘ self ∘ h⁻¹`.
    fn conj(&self, h: &Self) -> Self {
        h.compose(self).compose(&h.inverse())
    }
    fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.compose(&base))
    }
}

/// `[f,g] = f g f⁻¹ g⁻¹`.
pub fn commutator<H: Homeo>(f: &H, g: &H) -> H {
    f.compose(g).compose(&f.inverse()).compose(&g.inverse())
}

fn two() -> Q {
    Q::from_integer(BigInt::from(2))
}

// ---------------------------------------------------------------- line

/// PL homeomorphism of the line with affine tails.
///
/// `lslope`/`rslope` are slope magnitudes of the tails; the map is
/// decreasing when `reversing`. The identity has no breakpoints; any other
/// affine map carries a single anchor node at 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    breaks: Vec<Q>,
    vals: Vec<Q>,
    lslope: Q,
    rslope: Q,
    reversing: bool,
}

impl PLMap {
    pub fn id() -> Self {
        PLMap { breaks: vec![], vals: vec![], lslope: Q::one(), rslope: Q::one(), reversing: false }
    }

    /// Build from node pairs and tail slope magnitudes, checking that the
    /// data is a homeomorphism, then canonicalize.
    pub fn from_parts(breaks: Vec<Q>, vals: Vec<Q>, lslope: Q, rslope: Q, reversing: bool) -> Result<Self> {
        if breaks.len() != vals.len() {
            return Err(Error::Invalid("breaks and vals differ in length".into()));
        }
        if !lslope.is_positive() || !rslope.is_positive() {
            return Err(Error::Invalid("tail slopes must be positive magnitudes".into()));
        }
        if breaks.is_empty() {
            if reversing || !lslope.is_one() || !rslope.is_one() {
                return Err(Error::Invalid("a non-identity map needs an anchor node".into()));
            }
            return Ok(Self::id());
        }
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Invalid(format!("breaks not increasing at {}", fmt_q(&w[1]))));
            }
        }
        for w in vals.windows(2) {
            if (w[0] >= w[1]) != reversing || w[0] == w[1] {
                return Err(Error::Invalid(format!("vals not strictly monotone at {}", fmt_q(&w[1]))));
            }
        }
        Ok(Self::canonical(breaks, vals, lslope, rslope, reversing))
    }

    fn canonical(breaks: Vec<Q>, vals: Vec<Q>, lslope: Q, rslope: Q, reversing: bool) -> Self {
        let sgn = |s: &Q| if reversing { -s.clone() } else { s.clone() };
        let n = breaks.len();
        let mut slopes = Vec::with_capacity(n + 1);
        slopes.push(sgn(&lslope));
        for i in 0..n - 1 {
            slopes.push((&vals[i + 1] - &vals[i]) / (&breaks[i + 1] - &breaks[i]));
        }
        slopes.push(sgn(&rslope));
        let keep: Vec<usize> = (0..n).filter(|&i| slopes[i] != slopes[i + 1]).collect();
        if keep.is_empty() {
            let s = &slopes[0];
            let c = &vals[0] - s * &breaks[0];
            if s.is_one() && c.is_zero() {
                return Self::id();
            }
            return PLMap { breaks: vec![Q::zero()], vals: vec![c], lslope, rslope, reversing };
        }
        PLMap {
            breaks: keep.iter().map(|&i| breaks[i].clone()).collect(),
            vals: keep.iter().map(|&i| vals[i].clone()).collect(),
            lslope,
            rslope,
            reversing,
        }
    }

    /// Sample a PL function at `xs`, which must contain all of its
    /// breakpoints; tails are read off one unit beyond the extreme nodes.
    pub fn from_fn(mut xs: Vec<Q>, f: impl Fn(&Q) -> Q, reversing: bool) -> Self {
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            xs.push(Q::zero());
        }
        let vals: Vec<Q> = xs.iter().map(&f).collect();
        let x0 = &xs[0];
        let xk = &xs[xs.len() - 1];
        let ls = (&vals[0] - f(&(x0 - Q::one()))).abs();
        let rs = (f(&(xk + Q::one())) - &vals[vals.len() - 1]).abs();
        Self::canonical(xs, vals, ls, rs, reversing)
    }

    pub fn affine(slope: Q, intercept: Q) -> Result<Self> {
        if slope.is_zero() {
            return Err(Error::Invalid("zero slope".into()));
        }
        let rev = slope.is_negative();
        let m = slope.abs();
        Ok(Self::canonical(vec![Q::zero()], vec![intercept], m.clone(), m, rev))
    }

    pub fn translation(c: Q) -> Self {
        Self::affine(Q::one(), c).expect("unit slope")
    }

    /// `x ↦ -x`.
    pub fn negation() -> Self {
        Self::affine(-Q::one(), Q::zero()).expect("unit slope")
    }

    /// Increasing interpolation through node pairs, slope one outside.
    pub fn through(nodes: &[(Q, Q)]) -> Result<Self> {
        let (xs, ys): (Vec<Q>, Vec<Q>) = nodes.iter().cloned().unzip();
        Self::from_parts(xs, ys, Q::one(), Q::one(), false)
    }

    /// Increasing dyadic interpolation through dyadic node pairs: power of
    /// two slopes everywhere, slope one tails.
    pub fn dyadic_through(nodes: &[(Q, Q)]) -> Result<Self> {
        let mut all: Vec<(Q, Q)> = Vec::new();
        for w in nodes.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::Invalid("dyadic nodes not increasing".into()));
            }
            let seg = dyadic_map_between(&w[0].0, &w[1].0, &w[0].1, &w[1].1);
            all.extend(seg);
        }
        if nodes.len() == 1 {
            all.push(nodes[0].clone());
        }
        all.dedup();
        Self::through(&all)
    }

    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }
    pub fn vals(&self) -> &[Q] {
        &self.vals
    }
    pub fn lslope(&self) -> &Q {
        &self.lslope
    }
    pub fn rslope(&self) -> &Q {
        &self.rslope
    }
    pub fn is_reversing(&self) -> bool {
        self.reversing
    }

    fn sgn(&self, s: &Q) -> Q {
        if self.reversing {
            -s.clone()
        } else {
            s.clone()
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let n = self.breaks.len();
        if n == 0 {
            return x.clone();
        }
        if x <= &self.breaks[0] {
            return &self.vals[0] + self.sgn(&self.lslope) * (x - &self.breaks[0]);
        }
        if x >= &self.breaks[n - 1] {
            return &self.vals[n - 1] + self.sgn(&self.rslope) * (x - &self.breaks[n - 1]);
        }
        let i = self.breaks.partition_point(|b| b <= x) - 1;
        let (x0, x1, y0, y1) = (&self.breaks[i], &self.breaks[i + 1], &self.vals[i], &self.vals[i + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn eval_ext(&self, p: &ExtPoint) -> ExtPoint {
        match p {
            ExtPoint::Fin(x) => ExtPoint::Fin(self.eval(x)),
            e if self.reversing => e.neg(),
            e => e.clone(),
        }
    }

    /// Slopes of all pieces, left tail first.
    pub fn slopes(&self) -> Vec<Q> {
        let n = self.breaks.len();
        let mut out = vec![self.sgn(&self.lslope)];
        for i in 0..n.saturating_sub(1) {
            out.push((&self.vals[i + 1] - &self.vals[i]) / (&self.breaks[i + 1] - &self.breaks[i]));
        }
        if n > 0 {
            out.push(self.sgn(&self.rslope));
        }
        out
    }

    pub fn inverse_map(&self) -> Self {
        if self.breaks.is_empty() {
            return Self::id();
        }
        let mut breaks = self.vals.clone();
        let mut vals = self.breaks.clone();
        let (mut ls, mut rs) = (self.lslope.recip(), self.rslope.recip());
        if self.reversing {
            breaks.reverse();
            vals.reverse();
            std::mem::swap(&mut ls, &mut rs);
        }
        Self::canonical(breaks, vals, ls, rs, self.reversing)
    }

    /// `self ∘ g`.
    pub fn then_after(&self, g: &PLMap) -> Self {
        let ginv = g.inverse_map();
        let mut xs: Vec<Q> = g.breaks.clone();
        xs.extend(self.breaks.iter().map(|b| ginv.eval(b)));
        Self::from_fn(xs, |x| self.eval(&g.eval(x)), self.reversing != g.reversing)
    }

    /// Left tail is the identity (element of `Rt`: support bounded below).
    pub fn left_tail_identity(&self) -> bool {
        self.breaks.is_empty()
            || (!self.reversing && self.lslope.is_one() && self.vals[0] == self.breaks[0])
    }
    pub fn right_tail_identity(&self) -> bool {
        let n = self.breaks.len();
        n == 0 || (!self.reversing && self.rslope.is_one() && self.vals[n - 1] == self.breaks[n - 1])
    }
    /// Support is bounded.
    pub fn is_bounded(&self) -> bool {
        self.left_tail_identity() && self.right_tail_identity()
    }

    /// Points where the affine structure of `self - id` may change sign:
    /// breakpoints plus the fixed point of every affine piece.
    fn critical_points(&self) -> Vec<Q> {
        let mut cs = self.breaks.clone();
        let n = self.breaks.len();
        if n == 0 {
            return cs;
        }
        let slopes = self.slopes();
        // piece i: slope slopes[i], passes through a node
        for (i, s) in slopes.iter().enumerate() {
            if s.is_one() {
                continue;
            }
            let (x0, y0) = if i == 0 { (&self.breaks[0], &self.vals[0]) } else { (&self.breaks[i - 1], &self.vals[i - 1]) };
            // y0 + s (x - x0) = x
            let r = (y0 - s * x0) / (Q::one() - s);
            let lo_ok = i == 0 || r > self.breaks[i - 1];
            let hi_ok = i == n || r < self.breaks[i];
            if lo_ok && hi_ok {
                cs.push(r);
            }
        }
        cs.sort();
        cs.dedup();
        cs
    }

    /// Maximal open intervals on which the map moves every point.
    pub fn supp_intervals(&self) -> Vec<LinInterval> {
        let cs = self.critical_points();
        let moved = |x: &Q| self.eval(x) != *x;
        let mut segs: Vec<(ExtPoint, ExtPoint)> = Vec::new();
        if cs.is_empty() {
            return vec![];
        }
        let probe_left = &cs[0] - Q::one();
        if moved(&probe_left) {
            segs.push((ExtPoint::NegInf, ExtPoint::Fin(cs[0].clone())));
        }
        for w in cs.windows(2) {
            let m = (&w[0] + &w[1]) / two();
            if moved(&m) {
                segs.push((ExtPoint::Fin(w[0].clone()), ExtPoint::Fin(w[1].clone())));
            }
        }
        let last = &cs[cs.len() - 1];
        if moved(&(last + Q::one())) {
            segs.push((ExtPoint::Fin(last.clone()), ExtPoint::PosInf));
        }
        // merge across moved critical points only
        let mut out: Vec<LinInterval> = Vec::new();
        for (a, b) in segs {
            if let Some(l) = out.last_mut() {
                if l.hi == a && a.fin().is_some_and(|x| moved(x)) {
                    l.hi = b;
                    continue;
                }
            }
            out.push(LinInterval { lo: a, hi: b });
        }
        out
    }

    /// Closed fixed set as a list of closed intervals (possibly points).
    pub fn fix_set(&self) -> Vec<(ExtPoint, ExtPoint)> {
        let supp = self.supp_intervals();
        let mut out = Vec::new();
        let mut cur = ExtPoint::NegInf;
        for i in &supp {
            if cur < i.lo || (cur == i.lo && cur.is_finite()) {
                out.push((cur.clone(), i.lo.clone()));
            }
            cur = i.hi.clone();
        }
        if cur < ExtPoint::PosInf || supp.is_empty() {
            out.push((cur, ExtPoint::PosInf));
        }
        out.retain(|(a, b)| !(a == b && !a.is_finite()));
        out
    }

    pub fn var_set(&self) -> RoLin {
        RoLin::from_raw(self.supp_intervals().into_iter().map(|i| (i.lo, i.hi)).collect())
    }

    pub fn image_set(&self, u: &RoLin) -> RoLin {
        u.map_endpoints(|p| self.eval_ext(p))
    }

    /// Bump moving points up inside `(lo,hi)` (bounded or a ray).
    pub fn bump_on(lo: &ExtPoint, hi: &ExtPoint, up: bool) -> Result<Self> {
        use ExtPoint::*;
        let g = match (lo, hi) {
            (Fin(a), Fin(b)) if a < b => {
                let w = b - a;
                let q4 = &w / Q::from_integer(4.into());
                let nodes = vec![
                    (a.clone(), a.clone()),
                    (a + &q4, a + &w / two()),
                    (a + &w / two(), a + &q4 * Q::from_integer(3.into())),
                    (b.clone(), b.clone()),
                ];
                Self::through(&nodes)?
            }
            (NegInf, Fin(c)) => Self::through(&[(c - two(), c - Q::one()), (c.clone(), c.clone())])?,
            (Fin(c), PosInf) => Self::through(&[(c.clone(), c.clone()), (c + Q::one(), c + two())])?,
            (NegInf, PosInf) => Self::translation(Q::one()),
            _ => return Err(Error::Invalid(format!("empty interval ({lo},{hi})"))),
        };
        Ok(if up { g } else { g.inverse_map() })
    }

    /// Pointwise maximum of two increasing maps.
    pub fn lattice_sup(&self, other: &PLMap) -> Result<Self> {
        self.envelope(other, true)
    }
    /// Pointwise minimum of two increasing maps.
    pub fn lattice_inf(&self, other: &PLMap) -> Result<Self> {
        self.envelope(other, false)
    }

    fn envelope(&self, other: &PLMap, max: bool) -> Result<Self> {
        if self.reversing || other.reversing {
            return Err(Error::Invalid("lattice operations need increasing maps".into()));
        }
        let mut ps: Vec<Q> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        ps.sort();
        ps.dedup();
        let d = |x: &Q| self.eval(x) - other.eval(x);
        let mut xs = ps.clone();
        if !ps.is_empty() {
            // crossing inside each piece, tails included
            let mut windows: Vec<(Q, Q)> = vec![(&ps[0] - Q::one(), ps[0].clone())];
            for w in ps.windows(2) {
                windows.push((w[0].clone(), w[1].clone()));
            }
            windows.push((ps[ps.len() - 1].clone(), &ps[ps.len() - 1] + Q::one()));
            let last = windows.len() - 1;
            for (k, (a, b)) in windows.iter().enumerate() {
                let (da, db) = (d(a), d(b));
                if da == db {
                    continue;
                }
                let r = a + &da * (b - a) / (&da - &db);
                let ok_lo = k == 0 || &r > a;
                let ok_hi = k == last || &r < b;
                if ok_lo && ok_hi {
                    xs.push(r);
                }
            }
        }
        let pick = |x: &Q| {
            let (u, v) = (self.eval(x), other.eval(x));
            if (u >= v) == max {
                u
            } else {
                v
            }
        };
        Ok(Self::from_fn(xs, pick, false))
    }

    /// Glue maps, each fixing the endpoints of its own interval, into one
    /// map that is the identity off the intervals.
    pub fn splice(pieces: &[(LinInterval, PLMap)]) -> Result<Self> {
        let mut sorted: Vec<&(LinInterval, PLMap)> = pieces.iter().collect();
        sorted.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
        for w in sorted.windows(2) {
            if w[0].0.hi > w[1].0.lo {
                return Err(Error::Invalid(format!("overlapping splice intervals at {}", w[1].0.lo)));
            }
        }
        let mut xs = Vec::new();
        for (i, g) in &sorted {
            if g.is_reversing() {
                return Err(Error::Invalid("splice pieces must be increasing".into()));
            }
            for e in [&i.lo, &i.hi] {
                if let ExtPoint::Fin(x) = e {
                    if g.eval(x) != *x {
                        return Err(Error::Invalid(format!("piece moves boundary point {}", fmt_q(x))));
                    }
                    xs.push(x.clone());
                }
            }
            xs.extend(g.breaks.iter().filter(|b| i.contains(&ExtPoint::Fin((*b).clone()))).cloned());
        }
        let f = |x: &Q| {
            let p = ExtPoint::Fin(x.clone());
            for (i, g) in &sorted {
                if i.contains(&p) {
                    return g.eval(x);
                }
            }
            x.clone()
        };
        Ok(Self::from_fn(xs, f, false))
    }
}

impl Homeo for PLMap {
    type Set = RoLin;

    fn identity() -> Self {
        Self::id()
    }
    fn compose(&self, other: &Self) -> Self {
        self.then_after(other)
    }
    fn inverse(&self) -> Self {
        self.inverse_map()
    }
    fn apply(&self, p: &ExtPoint) -> ExtPoint {
        self.eval_ext(p)
    }
    fn image(&self, u: &RoLin) -> RoLin {
        self.image_set(u)
    }
    fn var(&self) -> RoLin {
        self.var_set()
    }
    fn preserving(&self) -> bool {
        !self.reversing
    }
    fn bump(u: &RoLin) -> Self {
        let c = &u.components()[0];
        Self::bump_on(&c.0, &c.1, true).expect("nonempty interval")
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.breaks.is_empty() {
            return write!(f, "id");
        }
        let nodes: Vec<String> =
            self.breaks.iter().zip(&self.vals).map(|(x, y)| format!("{}->{}", fmt_q(x), fmt_q(y))).collect();
        write!(
            f,
            "[{}; tails {},{}{}]",
            nodes.join(" "),
            fmt_q(&self.lslope),
            fmt_q(&self.rslope),
            if self.reversing { "; rev" } else { "" }
        )
    }
}

// ---------------------------------------------------------------- circle

/// PL homeomorphism of the circle given by a lift `F` with
/// `F(x+1) = F(x) + deg`. Breaks lie in `[0,1)` and are never empty; the
/// lift is normalized so that its first value lies in `[0,1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLCircle {
    breaks: Vec<Q>,
    vals: Vec<Q>,
    deg: i8,
}

impl PLCircle {
    pub fn id() -> Self {
        PLCircle { breaks: vec![Q::zero()], vals: vec![Q::zero()], deg: 1 }
    }

    pub fn from_parts(breaks: Vec<Q>, vals: Vec<Q>, deg: i8) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != vals.len() || !(deg == 1 || deg == -1) {
            return Err(Error::Invalid("circle map needs matching nonempty nodes and degree ±1".into()));
        }
        if breaks[0].is_negative() || breaks[breaks.len() - 1] >= Q::one() {
            return Err(Error::Invalid("circle breaks must lie in [0,1)".into()));
        }
        let d = Q::from_integer(deg.into());
        let mut ext = vals.clone();
        ext.push(&vals[0] + &d);
        for (i, w) in ext.windows(2).enumerate() {
            let ok = if deg == 1 { w[0] < w[1] } else { w[0] > w[1] };
            if !ok || (i + 1 < breaks.len() && breaks[i] >= breaks[i + 1]) {
                return Err(Error::Invalid("circle lift not strictly monotone".into()));
            }
        }
        let f = PLCircle { breaks, vals, deg };
        Ok(Self::from_lift(f.breaks.clone(), |x| f.lift(x), deg))
    }

    /// Sample a lift at points (taken mod 1) containing all breakpoints.
    pub fn from_lift(xs: Vec<Q>, lift: impl Fn(&Q) -> Q, deg: i8) -> Self {
        let mut xs: Vec<Q> = xs.iter().map(frac).collect();
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            xs.push(Q::zero());
        }
        let vals: Vec<Q> = xs.iter().map(&lift).collect();
        let n = xs.len();
        let d = Q::from_integer(deg.into());
        let slope = |i: usize| {
            let j = (i + 1) % n;
            let (x1, y1) = if j == 0 { (&xs[0] + Q::one(), &vals[0] + &d) } else { (xs[j].clone(), vals[j].clone()) };
            (y1 - &vals[i]) / (x1 - &xs[i])
        };
        let slopes: Vec<Q> = (0..n).map(slope).collect();
        let keep: Vec<usize> = (0..n).filter(|&i| slopes[(i + n - 1) % n] != slopes[i]).collect();
        let (b, mut v): (Vec<Q>, Vec<Q>) = if keep.is_empty() {
            (vec![Q::zero()], vec![lift(&Q::zero())])
        } else {
            (keep.iter().map(|&i| xs[i].clone()).collect(), keep.iter().map(|&i| vals[i].clone()).collect())
        };
        let shift = v[0].floor();
        for y in v.iter_mut() {
            *y -= &shift;
        }
        PLCircle { breaks: b, vals: v, deg }
    }

    pub fn rotation(c: &Q) -> Self {
        Self::from_lift(vec![Q::zero()], |x| x + c, 1)
    }

    /// `x ↦ -x`.
    pub fn reflection() -> Self {
        Self::from_lift(vec![Q::zero()], |x| -x.clone(), -1)
    }

    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }
    pub fn vals(&self) -> &[Q] {
        &self.vals
    }
    pub fn deg(&self) -> i8 {
        self.deg
    }

    fn degq(&self) -> Q {
        Q::from_integer(self.deg.into())
    }

    fn node(&self, i: usize) -> (Q, Q) {
        let n = self.breaks.len();
        if i < n {
            (self.breaks[i].clone(), self.vals[i].clone())
        } else {
            (&self.breaks[i - n] + Q::one(), &self.vals[i - n] + self.degq())
        }
    }

    pub fn lift(&self, x: &Q) -> Q {
        let fl = x.floor();
        let mut r = x - &fl;
        let mut k = fl;
        if r < self.breaks[0] {
            r += Q::one();
            k -= Q::one();
        }
        let i = self.breaks.partition_point(|b| b <= &r) - 1;
        let (x0, y0) = self.node(i);
        let (x1, y1) = self.node(i + 1);
        &y0 + (&y1 - &y0) * (&r - &x0) / (&x1 - &x0) + k * self.degq()
    }

    pub fn eval(&self, p: &CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift(p.value()))
    }

    pub fn inverse_lift(&self, y: &Q) -> Q {
        let d = self.degq();
        // bring y into the range of F on [b0, b0+1)
        let v0 = &self.vals[0];
        let n = if self.deg == 1 { (y - v0).floor() } else { (v0 - y).floor() };
        let t = y - &n * &d;
        let m = self.breaks.len();
        for i in 0..m {
            let (x0, y0) = self.node(i);
            let (x1, y1) = self.node(i + 1);
            let inside = if self.deg == 1 { y0 <= t && t < y1 } else { y1 < t && t <= y0 };
            if inside {
                return &x0 + (&x1 - &x0) * (&t - &y0) / (&y1 - &y0) + n;
            }
        }
        unreachable!("lift range covers a period")
    }

    pub fn inverse_map(&self) -> Self {
        let xs: Vec<Q> = self.vals.clone();
        Self::from_lift(xs, |y| self.inverse_lift(y), self.deg)
    }

    /// `self ∘ g`.
    pub fn then_after(&self, g: &PLCircle) -> Self {
        let mut xs = g.breaks.clone();
        xs.extend(self.breaks.iter().map(|b| g.inverse_lift(b)));
        Self::from_lift(xs, |x| self.lift(&g.lift(x)), self.deg * g.deg)
    }

    pub fn supp_arcs(&self) -> RoCirc {
        let moved = |x: &Q| !(self.lift(x) - x).is_integer();
        let mut cs: Vec<Q> = self.breaks.clone();
        let m = self.breaks.len();
        for i in 0..m {
            let (x0, y0) = self.node(i);
            let (x1, y1) = self.node(i + 1);
            let (d0, d1) = (&y0 - &x0, &y1 - &x1);
            if d0 == d1 {
                continue;
            }
            let (lo, hi) = if d0 < d1 { (d0.clone(), d1.clone()) } else { (d1.clone(), d0.clone()) };
            let mut k = lo.ceil();
            while k <= hi {
                // x0 + t (x1-x0), displacement linear in t
                let t = (&k - &d0) / (&d1 - &d0);
                cs.push(frac(&(&x0 + t * (&x1 - &x0))));
                k += Q::one();
            }
        }
        cs.sort();
        cs.dedup();
        let n = cs.len();
        let mut arcs = Vec::new();
        for i in 0..n {
            let a = cs[i].clone();
            let b = if i + 1 < n { cs[i + 1].clone() } else { &cs[0] + Q::one() };
            let mid = (&a + &b) / two();
            if moved(&mid) {
                arcs.push((a, b));
            }
        }
        if arcs.len() == n && cs.iter().all(|c| moved(c)) {
            return RoCirc::whole();
        }
        RoCirc::from_arcs(&arcs)
    }

    pub fn image_set(&self, u: &RoCirc) -> RoCirc {
        u.map_endpoints(|x| self.lift(x), self.deg == 1)
    }

    /// Bump moving points counterclockwise inside the arc `(s,e)`.
    pub fn bump_arc(s: &Q, e: &Q, up: bool) -> Self {
        let s = frac(s);
        let mut w = frac(&(e - &s));
        if w.is_zero() {
            w = Q::one();
        }
        let q4 = &w / Q::from_integer(4.into());
        let pts = [
            (s.clone(), Q::zero()),
            (&s + &q4, q4.clone()),
            (&s + &w / two(), q4.clone()),
            (&s + &w, Q::zero()),
        ];
        let xs: Vec<Q> = pts.iter().map(|(x, _)| x.clone()).collect();
        let disp = |x: &Q| -> Q {
            let t = frac(&(x - &s));
            if t >= w {
                return Q::zero();
            }
            for k in 0..3 {
                let a = frac(&(&pts[k].0 - &s));
                let b = if k == 2 { w.clone() } else { frac(&(&pts[k + 1].0 - &s)) };
                if t >= a && t <= b {
                    return &pts[k].1 + (&pts[k + 1].1 - &pts[k].1) * (&t - &a) / (&b - &a);
                }
            }
            Q::zero()
        };
        let g = Self::from_lift(xs, |x| x + disp(x), 1);
        if up {
            g
        } else {
            g.inverse_map()
        }
    }

    /// Counterclockwise dyadic interpolation through cyclically ordered
    /// node pairs (both sides dyadic), slopes powers of two.
    pub fn dyadic_through(nodes: &[(Q, Q)]) -> Result<Self> {
        if nodes.is_empty() {
            return Ok(Self::id());
        }
        if nodes.len() == 1 {
            return Ok(Self::rotation(&(&nodes[0].1 - &nodes[0].0)));
        }
        let mut sorted: Vec<(Q, Q)> = nodes.iter().map(|(x, y)| (frac(x), frac(y))).collect();
        sorted.sort();
        let n = sorted.len();
        // lift target values to be increasing along the cycle
        let mut lifted = vec![sorted[0].1.clone()];
        for i in 1..=n {
            let y = if i < n { sorted[i].1.clone() } else { sorted[0].1.clone() };
            let prev = &lifted[i - 1];
            let mut yl = prev.floor() + &y;
            while &yl <= prev {
                yl += Q::one();
            }
            lifted.push(yl);
        }
        if lifted[n] != &lifted[0] + Q::one() {
            return Err(Error::Invalid("circle nodes not cyclically ordered".into()));
        }
        let mut all: Vec<(Q, Q)> = Vec::new();
        for i in 0..n {
            let x0 = sorted[i].0.clone();
            let x1 = if i + 1 < n { sorted[i + 1].0.clone() } else { &sorted[0].0 + Q::one() };
            let seg = dyadic_map_between(&x0, &x1, &lifted[i], &lifted[i + 1]);
            all.extend(seg.into_iter().take_while(|(x, _)| x < &x1));
        }
        let xs: Vec<Q> = all.iter().map(|(x, _)| x.clone()).collect();
        let lookup = |x: &Q| -> Q {
            let fl = x.floor();
            let r = x - &fl;
            // nodes sorted by x over [x_first, x_first+1)
            let base = &all[0].0;
            let (r, k) = if &r < base { (r + Q::one(), &fl - Q::one()) } else { (r, fl) };
            let m = all.len();
            for i in 0..m {
                let (x0, y0) = all[i].clone();
                let (x1, y1) = if i + 1 < m { all[i + 1].clone() } else { (&all[0].0 + Q::one(), &all[0].1 + Q::one()) };
                if r >= x0 && r < x1 {
                    return &y0 + (&y1 - &y0) * (&r - &x0) / (&x1 - &x0) + k;
                }
            }
            unreachable!()
        };
        Ok(Self::from_lift(xs, lookup, 1))
    }

    pub fn slopes(&self) -> Vec<Q> {
        (0..self.breaks.len())
            .map(|i| {
                let (x0, y0) = self.node(i);
                let (x1, y1) = self.node(i + 1);
                (y1 - y0) / (x1 - x0)
            })
            .collect()
    }
}

impl Homeo for PLCircle {
    type Set = RoCirc;

    fn identity() -> Self {
        Self::id()
    }
    fn compose(&self, other: &Self) -> Self {
        self.then_after(other)
    }
    fn inverse(&self) -> Self {
        self.inverse_map()
    }
    fn apply(&self, p: &CirclePoint) -> CirclePoint {
        self.eval(p)
    }
    fn image(&self, u: &RoCirc) -> RoCirc {
        self.image_set(u)
    }
    fn var(&self) -> RoCirc {
        self.supp_arcs()
    }
    fn preserving(&self) -> bool {
        self.deg == 1
    }
    fn bump(u: &RoCirc) -> Self {
        if u.is_whole() {
            return Self::rotation(&Q::new(1.into(), 2.into()));
        }
        let (s, e) = &u.arcs()[0];
        Self::bump_arc(s, e, true)
    }
}

impl fmt::Debug for PLCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PLCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> =
            self.breaks.iter().zip(&self.vals).map(|(x, y)| format!("{}->{}", fmt_q(x), fmt_q(y))).collect();
        write!(f, "circ[{}; deg {}]", nodes.join(" "), self.deg)
    }
}

// ---------------------------------------------------------------- families

/// Either kind of element, as carried by scenarios.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Line(PLMap),
    Circle(PLCircle),
}

/// `G(I; A, P)`: PL maps supported in `I` with breakpoints in
/// `A = Z[1/n]` (`n` the product of `break_primes`) and slopes in the
/// multiplicative group generated by `slope_primes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub interval: Option<LinInterval>,
    pub break_primes: Vec<u64>,
    pub slope_primes: Vec<u64>,
    pub allow_reversing: bool,
    /// Arbitrary rational breakpoints and positive rational slopes; the
    /// prime lists are ignored. Closed under pointwise sup and inf.
    pub rational: bool,
    pub generators: Vec<Elem>,
}

fn strip_primes(mut v: BigInt, primes: &[u64]) -> BigInt {
    for p in primes {
        let p = BigInt::from(*p);
        while !v.is_zero() && v.is_multiple_of(&p) {
            v /= &p;
        }
    }
    v
}

fn in_module(x: &Q, primes: &[u64]) -> bool {
    strip_primes(x.denom().clone(), primes).is_one()
}

fn in_slopes(x: &Q, primes: &[u64]) -> bool {
    let x = x.abs();
    strip_primes(x.numer().clone(), primes).is_one() && strip_primes(x.denom().clone(), primes).is_one()
}

impl GroupSpec {
    pub fn dyadic(name: &str, interval: Option<LinInterval>) -> Self {
        GroupSpec {
            name: name.to_string(),
            interval,
            break_primes: vec![2],
            slope_primes: vec![2],
            allow_reversing: false,
            rational: false,
            generators: vec![],
        }
    }

    /// All PL maps with rational breakpoints: the lattice-closed model.
    pub fn rational_pl(name: &str) -> Self {
        GroupSpec { rational: true, break_primes: vec![], slope_primes: vec![], ..Self::dyadic(name, None) }
    }

    /// Full-line dyadic model, where the interpolation witnesses apply.
    pub fn is_dyadic_line(&self) -> bool {
        !self.rational && self.interval.is_none() && self.break_primes.contains(&2) && self.slope_primes.contains(&2)
    }

    /// Has order-reversing elements.
    pub fn has_reversing(&self) -> bool {
        self.allow_reversing
    }

    /// Membership of a line map in `G(I;A,P)`.
    pub fn contains_line(&self, g: &PLMap) -> bool {
        if g.is_reversing() && !self.allow_reversing {
            return false;
        }
        if let Some(i) = &self.interval {
            if !g.var_set().leq(&RoLin::from_interval(i)) {
                return false;
            }
        }
        if self.rational {
            return true;
        }
        if !self.slope_primes.iter().all(|p| self.break_primes.contains(p)) {
            return false;
        }
        g.slopes().iter().all(|s| in_slopes(s, &self.slope_primes))
            && g.breaks().iter().all(|b| in_module(b, &self.break_primes))
            && g.vals().iter().all(|v| in_module(v, &self.break_primes))
    }

    /// Membership of a circle map in the circular analogue.
    pub fn contains_circle(&self, g: &PLCircle) -> bool {
        if g.deg() == -1 && !self.allow_reversing {
            return false;
        }
        if self.rational {
            return true;
        }
        g.slopes().iter().all(|s| in_slopes(s, &self.slope_primes))
            && g.breaks().iter().all(|b| in_module(b, &self.break_primes))
            && g.vals().iter().all(|v| in_module(v, &self.break_primes))
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match e {
            Elem::Line(g) => self.contains_line(g),
            Elem::Circle(g) => self.contains_circle(g),
        }
    }
}
