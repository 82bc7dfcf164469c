//! Points of the circle recovered from triples of regular open sets.
//!
//! The family used for the quantified conditions is the set of all arcs
//! of a uniform grid of `n` cells, stored as bitmasks. Quantifiers over the
//! family are cut down using monotonicity of `Seps` (shrinking any argument
//! preserves it), so only maximal members on the existential side and
//! single cells on the universal side need to be visited.

use std::collections::HashMap;

use crate::error::{pre, Error, Result};
use crate::ordcore::{CircInterval, CirclePoint, Q};
use crate::plgroup::{GroupSpec, Homeo, PLCircle};
use crate::roalg::{crs, crs_pm, seg_circ, RoCirc, RoSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircRep {
    pub u1: RoCirc,
    pub u2: RoCirc,
    pub u3: RoCirc,
}

impl CircRep {
    pub fn new(u1: RoCirc, u2: RoCirc, u3: RoCirc) -> Result<Self> {
        if !crs_pm(&u1, &u2, &u3) {
            return Err(Error::Invalid(format!("({u1},{u2},{u3}) is not a representative")));
        }
        Ok(CircRep { u1, u2, u3 })
    }

    /// Counterclockwise orientation, as opposed to the reversed one.
    pub fn is_positive(&self) -> bool {
        crs(&[&self.u1, &self.u2, &self.u3])
    }

    pub fn image(&self, g: &PLCircle) -> CircRep {
        CircRep { u1: g.image(&self.u1), u2: g.image(&self.u2), u3: g.image(&self.u3) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwCcw {
    pub cw: CirclePoint,
    pub ccw: CirclePoint,
}

/// The gap of `blocked` (a complementary arc) containing `inner`.
fn gap_around(blocked: &RoCirc, inner: &RoCirc) -> Result<CircInterval> {
    if blocked.is_empty() || blocked.is_whole() || inner.is_empty() {
        return pre("degenerate gap query");
    }
    let mut arcs = blocked.arcs();
    arcs.sort();
    let p = &inner.probe_points(1)[0];
    let n = arcs.len();
    for i in 0..n {
        let gap = CircInterval::arc(arcs[i].1.clone(), arcs[(i + 1) % n].0.clone());
        if gap.contains(p) {
            if !inner.leq(&RoCirc::from_interval(&gap)) {
                return pre("set not inside a single gap");
            }
            return Ok(gap);
        }
    }
    pre("probe point not in any gap")
}

/// Ends of the smallest arc containing `u1` and missing `u2`.
pub fn cw_ccw(u1: &RoCirc, u2: &RoCirc) -> Result<CwCcw> {
    if u1.is_empty() || u2.is_empty() || !seg_circ(u1, u2) {
        return pre("sets not segregated");
    }
    let gap = gap_around(u1, u2)?;
    Ok(CwCcw { cw: gap.end, ccw: gap.start })
}

pub fn x_point(rep: &CircRep) -> Result<CirclePoint> {
    let e = cw_ccw(&rep.u1, &rep.u2)?;
    Ok(if rep.is_positive() { e.ccw } else { e.cw })
}

/// Largest arc containing `u2` and missing `u1 ∪ u3`.
pub fn i_interval(rep: &CircRep) -> Result<CircInterval> {
    gap_around(&rep.u1.sum(&rep.u3), &rep.u2)
}

/// The point read off as the end of the interval shared with the gap of
/// `u1`, with the far end checked against `u3`.
pub fn x_via_interval(rep: &CircRep) -> Result<CirclePoint> {
    let i = i_interval(rep)?;
    let far = cw_ccw(&rep.u3, &rep.u2)?;
    let (x, y, y_expected) = if rep.is_positive() { (i.start, i.end, far.cw) } else { (i.end, i.start, far.ccw) };
    if y != y_expected {
        return Err(Error::Invalid("interval end disagrees with the third set".into()));
    }
    Ok(x)
}

// ------------------------------------------------------------- grid masks

/// Representative triple as cell masks.
pub type MRep = [u32; 3];

fn bit(m: u32, i: u32) -> bool {
    m >> i & 1 == 1
}

/// Family of all proper arcs on `n` equal cells plus the bookkeeping for
/// the quantified conditions. Results are cached per argument.
pub struct CircInterp {
    pub n: u32,
    pub elems: Vec<u32>,
    ext_cache: HashMap<MRep, Vec<bool>>,
    sm1_cache: HashMap<MRep, Vec<Vec<u32>>>,
    eqp_cache: HashMap<(Vec<Vec<u32>>, Vec<Vec<u32>>), bool>,
}

impl CircInterp {
    pub fn grid(n: u32) -> Result<Self> {
        if !(3..=31).contains(&n) {
            return Err(Error::Unsupported("grid size must be in 3..=31".into()));
        }
        let mut elems = Vec::new();
        for s in 0..n {
            for len in 1..n {
                elems.push((0..len).fold(0u32, |m, k| m | 1 << ((s + k) % n)));
            }
        }
        Ok(CircInterp { n, elems, ext_cache: HashMap::new(), sm1_cache: HashMap::new(), eqp_cache: HashMap::new() })
    }

    fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn cell(&self, i: u32) -> u32 {
        1 << (i % self.n)
    }

    pub fn to_set(&self, m: u32) -> RoCirc {
        let d = Q::from_integer(self.n.into());
        let arcs: Vec<(Q, Q)> = (0..self.n)
            .filter(|&i| bit(m, i))
            .map(|i| (Q::from_integer(i.into()) / &d, Q::from_integer((i + 1).into()) / &d))
            .collect();
        RoCirc::from_arcs(&arcs)
    }

    pub fn to_mask(&self, u: &RoCirc) -> Result<u32> {
        let d = Q::from_integer((2 * self.n).into());
        let m = (0..self.n)
            .filter(|&i| u.contains_pt(&CirclePoint::new(Q::from_integer((2 * i + 1).into()) / &d)))
            .fold(0, |m, i| m | 1 << i);
        if self.to_set(m) != *u {
            return Err(Error::Invalid(format!("{u} is not a union of grid cells")));
        }
        Ok(m)
    }

    pub fn to_mrep(&self, r: &CircRep) -> Result<MRep> {
        Ok([self.to_mask(&r.u1)?, self.to_mask(&r.u2)?, self.to_mask(&r.u3)?])
    }

    pub fn point(&self, k: u32) -> CirclePoint {
        CirclePoint::new(Q::new((k % self.n).into(), self.n.into()))
    }

    /// Labels of the cells covered by pairwise disjoint sets, read
    /// counterclockwise with cyclic repeats collapsed.
    fn word(&self, sets: &[u32]) -> Vec<usize> {
        let mut w: Vec<usize> = Vec::new();
        for i in 0..self.n {
            if let Some(l) = sets.iter().position(|&m| bit(m, i)) {
                if w.last() != Some(&l) {
                    w.push(l);
                }
            }
        }
        while w.len() > 1 && w.first() == w.last() {
            w.pop();
        }
        w
    }

    pub fn crs(&self, sets: &[u32]) -> bool {
        if sets.iter().any(|&m| m == 0) {
            return false;
        }
        let k = sets.len();
        let disjoint = (0..k).all(|i| (i + 1..k).all(|j| sets[i] & sets[j] == 0));
        match k {
            0 | 1 => true,
            2 => disjoint,
            _ => {
                if !disjoint || sets.iter().any(|&m| m == self.full()) {
                    return false;
                }
                let w = self.word(sets);
                w.len() == k && (0..k).all(|i| w[(i + 1) % k] == (w[i] + 1) % k)
            }
        }
    }

    pub fn crs_pm(&self, a: u32, b: u32, c: u32) -> bool {
        self.crs(&[a, b, c]) || self.crs(&[c, b, a])
    }

    pub fn seps(&self, a: u32, b: u32, c: u32, d: u32) -> bool {
        self.crs(&[a, b, c, d]) || self.crs(&[d, c, b, a])
    }

    pub fn is_rep(&self, r: &MRep) -> bool {
        self.crs_pm(r[0], r[1], r[2])
    }

    /// `V` with `(u1,V,u3)` a representative not separating `u1,u3` from
    /// `u2`; as a membership vector over the family.
    pub fn ext_class(&mut self, r: &MRep) -> Vec<bool> {
        if let Some(v) = self.ext_cache.get(r) {
            return v.clone();
        }
        let v: Vec<bool> = self
            .elems
            .iter()
            .map(|&v| self.crs_pm(r[0], v, r[2]) && !self.seps(r[0], v, r[2], r[1]))
            .collect();
        self.ext_cache.insert(*r, v.clone());
        v
    }

    /// Members below `m`, the restriction of the family to `m`.
    pub fn restrict(&self, m: u32) -> Vec<bool> {
        self.elems.iter().map(|&v| v & !m == 0).collect()
    }

    /// Mask of the largest arc containing `u2` and missing `u1 ∪ u3`.
    pub fn i_mask(&self, r: &MRep) -> u32 {
        let blocked = r[0] | r[2];
        let start = (0..self.n).find(|&i| bit(r[1], i)).expect("nonempty");
        let mut m = self.cell(start);
        for dir in [1, self.n - 1] {
            let mut i = (start + dir) % self.n;
            while !bit(blocked, i) && !bit(m, i) {
                m |= self.cell(i);
                i = (i + dir) % self.n;
            }
        }
        m
    }

    /// Start and end grid points of a proper arc mask.
    pub fn arc_ends(&self, m: u32) -> (u32, u32) {
        let s = (0..self.n).find(|&i| bit(m, i) && !bit(m, (i + self.n - 1) % self.n)).expect("proper arc");
        let mut e = s;
        while bit(m, e % self.n) {
            e += 1;
        }
        (s, e % self.n)
    }

    /// Grid index of the point of a representative, read from its interval.
    pub fn x_index(&self, r: &MRep) -> u32 {
        let (s, e) = self.arc_ends(self.i_mask(r));
        if self.crs(r) {
            s
        } else {
            e
        }
    }

    fn subset(a: &[bool], b: &[bool]) -> bool {
        a.iter().zip(b).all(|(x, y)| !x || *y)
    }

    /// Same first set and nested extension classes.
    pub fn sm1pt(&mut self, r1: &MRep, r2: &MRep) -> Result<bool> {
        if r1[0] != r2[0] {
            return pre("representatives have different first sets");
        }
        let (a, b) = (self.ext_class(r1), self.ext_class(r2));
        Ok(Self::subset(&a, &b) || Self::subset(&b, &a))
    }

    /// Maximal members of the extension class.
    fn ext_maxima(&mut self, r: &MRep) -> Vec<u32> {
        let cls = self.ext_class(r);
        let members: Vec<u32> = (0..self.elems.len()).filter(|&i| cls[i]).map(|i| self.elems[i]).collect();
        let mut out: Vec<u32> = members
            .iter()
            .copied()
            .filter(|&x| !members.iter().any(|&y| y != x && x & !y == 0))
            .collect();
        out.sort();
        out
    }

    /// Maxima of the extension classes over the representatives sharing
    /// the point of `r`, continued by single cells. Single cells next to
    /// the point give the smallest intervals the grid allows, which is all
    /// the conditions below need.
    fn sm1_maxima(&mut self, r: &MRep) -> Vec<Vec<u32>> {
        if let Some(v) = self.sm1_cache.get(r) {
            return v.clone();
        }
        let mut out = vec![self.ext_maxima(r)];
        for i in 0..self.n {
            for j in 0..self.n {
                let cand = [r[0], self.cell(i), self.cell(j)];
                if i != j && self.is_rep(&cand) && self.sm1pt(r, &cand).unwrap_or(false) {
                    let m = self.ext_maxima(&cand);
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out.sort();
        self.sm1_cache.insert(*r, out.clone());
        out
    }

    /// Equality of points, by the separation condition on all
    /// continuations of both representatives.
    pub fn eqp(&mut self, r1: &MRep, r2: &MRep) -> bool {
        let (a, b) = (self.sm1_maxima(r1), self.sm1_maxima(r2));
        let key = (a.clone(), b.clone());
        if let Some(&v) = self.eqp_cache.get(&key) {
            return v;
        }
        let cells: Vec<u32> = (0..self.n).map(|i| self.cell(i)).collect();
        let v = a.iter().all(|xs| {
            b.iter().all(|ys| {
                cells.iter().all(|&w1| {
                    cells.iter().all(|&w2| xs.iter().any(|&x| ys.iter().any(|&y| !self.seps(x, w1, y, w2))))
                })
            })
        });
        self.eqp_cache.insert(key, v);
        v
    }

    /// Separation of the four points: some continuations whose interval
    /// members always separate.
    /// Coincident points never separate; representatives of one point from
    /// opposite sides would otherwise pass the interval test.
    pub fn sep_ep(&mut self, rs: &[MRep; 4]) -> bool {
        for i in 0..4 {
            for j in i + 1..4 {
                if self.eqp(&rs[i], &rs[j]) {
                    return false;
                }
            }
        }
        let cls: Vec<Vec<Vec<u32>>> = rs.iter().map(|r| self.sm1_maxima(r)).collect();
        for a in &cls[0] {
            for b in &cls[1] {
                for c in &cls[2] {
                    for d in &cls[3] {
                        let all = a.iter().all(|&w1| {
                            b.iter().all(|&w2| c.iter().all(|&w3| d.iter().all(|&w4| self.seps(w1, w2, w3, w4))))
                        });
                        if all {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Eight stock arcs on the quarter grid: the four quarters and the four
/// halves. Distinct points of these are four cells apart on the 16-cell
/// grid, which leaves room for separating cells.
pub fn stock_arcs() -> Vec<RoCirc> {
    let q = |n: i64| Q::new(n.into(), 4.into());
    let mut out: Vec<RoCirc> = (0..4).map(|i| RoCirc::arc(&q(i), &q(i + 1))).collect();
    out.extend((0..4).map(|i| RoCirc::arc(&q(i), &q(i + 2))));
    out
}

/// All representatives formed from ordered triples of `sets`.
pub fn reps_from(sets: &[RoCirc]) -> Vec<CircRep> {
    let mut out = Vec::new();
    for a in sets {
        for b in sets {
            for c in sets {
                if let Ok(r) = CircRep::new(a.clone(), b.clone(), c.clone()) {
                    out.push(r);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrsVerdict {
    Holds,
    Refuted(PLCircle),
}

/// `g(a)·a`, `g(b)·c` and `g(c)·b` all nonzero.
pub fn swaps(g: &PLCircle, a: &RoCirc, b: &RoCirc, c: &RoCirc) -> bool {
    !g.image(a).disjoint(a) && !g.image(b).disjoint(c) && !g.image(c).disjoint(b)
}

fn arc_points(u: &RoCirc) -> Vec<Q> {
    u.pieces().iter().map(|p| p.probe_points(1)[0].value().clone()).collect()
}

/// Find `g` fixing a point of `a` and exchanging points of `b` and `c`.
fn swap_witness(a: &RoCirc, b: &RoCirc, c: &RoCirc) -> Option<PLCircle> {
    if !b.disjoint(c) {
        return Some(PLCircle::id());
    }
    let (pa, pb, pc) = (arc_points(a), arc_points(b), arc_points(c));
    let cr = |x: &Q, y: &Q, z: &Q| crate::ordcore::cr(&CirclePoint::new(x.clone()), &CirclePoint::new(y.clone()), &CirclePoint::new(z.clone()));
    for x in &pa {
        for y in &pb {
            for z in &pc {
                for y2 in &pc {
                    for z2 in &pb {
                        let distinct = x != y && x != z && y != z && x != y2 && x != z2 && y2 != z2;
                        if !distinct || cr(x, y, z) != cr(x, y2, z2) {
                            continue;
                        }
                        let nodes = [(x.clone(), x.clone()), (y.clone(), y2.clone()), (z.clone(), z2.clone())];
                        if let Ok(g) = PLCircle::dyadic_through(&nodes) {
                            if swaps(&g, a, b, c) {
                                return Some(g);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Cyclic-order formula for three sets, evaluated over orientation
/// preserving elements; when it fails the exchanging element is returned.
pub fn crs_pm_formula(u1: &RoCirc, u2: &RoCirc, u3: &RoCirc, group: &GroupSpec) -> Result<CrsVerdict> {
    if crs_pm(u1, u2, u3) {
        return Ok(CrsVerdict::Holds);
    }
    if u1.is_empty() || u2.is_empty() || u3.is_empty() {
        return Ok(CrsVerdict::Refuted(PLCircle::id()));
    }
    for (a, b, c) in [(u1, u2, u3), (u2, u3, u1), (u3, u1, u2)] {
        if let Some(g) = swap_witness(a, b, c) {
            if !group.contains_circle(&g) {
                return Err(Error::Inconclusive(format!("exchanging map not in {}", group.name)));
            }
            return Ok(CrsVerdict::Refuted(g));
        }
    }
    Err(Error::Inconclusive("no exchanging map found".into()))
}
