//! Transitivity: witness constructors on the dyadic line and circle, the
//! inductive promotion step from `n-1` to `n` intervals, support
//! adjustment, bounded elements from one-sided ones, exact transitivity in
//! the lattice model, grid checkers and the four-type discriminator.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::codec;
use crate::dyadic::dyadic_inside;
use crate::error::{pre, Error, Result};
use crate::gallery;
use crate::ordcore::{cr, cr_n, frac, CircInterval, CirclePoint, ExtPoint, LinInterval, Q};
use crate::plgroup::{Elem, GroupSpec, Homeo, PLCircle, PLMap};
use crate::roalg::{crs, RoCirc, RoLin, RoSet};
use crate::scenario::{Scenario, ScenarioGroup, Space};

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

fn fin(x: &Q) -> ExtPoint {
    ExtPoint::Fin(x.clone())
}

/// Two dyadic points `a < b` strictly inside `(lo,hi)`.
fn inside(lo: &ExtPoint, hi: &ExtPoint) -> (Q, Q) {
    dyadic_inside(lo, hi)
}

fn inside_q(lo: &Q, hi: &Q) -> (Q, Q) {
    dyadic_inside(&fin(lo), &fin(hi))
}

/// Two dyadic points inside the counterclockwise arc `(s,e)`, in that
/// order, reduced mod 1.
pub fn arc_inside(s: &Q, e: &Q) -> (Q, Q) {
    let mut len = frac(&(e - s));
    if len.is_zero() {
        len = Q::one();
    }
    let (a, b) = inside_q(s, &(s + len));
    (frac(&a), frac(&b))
}

fn arc_len(s: &Q, e: &Q) -> Q {
    let l = frac(&(e - s));
    if l.is_zero() {
        Q::one()
    } else {
        l
    }
}

fn line_capable(group: &GroupSpec) -> Result<()> {
    if group.is_dyadic_line() || (group.rational && group.interval.is_none()) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{}: no interpolation witnesses for this group", group.name)))
    }
}

fn circle_capable(group: &GroupSpec) -> Result<()> {
    if !group.rational && group.break_primes.contains(&2) && group.slope_primes.contains(&2) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{}: no dyadic circle witnesses for this group", group.name)))
    }
}

/// Increasing interpolation through nodes, dyadic or rational per group.
fn interp(nodes: &[(Q, Q)], group: &GroupSpec) -> Result<PLMap> {
    let mut nodes = nodes.to_vec();
    nodes.sort();
    nodes.dedup();
    if group.rational {
        PLMap::through(&nodes)
    } else {
        PLMap::dyadic_through(&nodes)
    }
}

fn member_line(g: PLMap, group: &GroupSpec) -> Result<PLMap> {
    if group.contains_line(&g) {
        Ok(g)
    } else {
        Err(Error::Inconclusive(format!("constructed element left {}", group.name)))
    }
}

fn member_circle(g: PLCircle, group: &GroupSpec) -> Result<PLCircle> {
    if group.contains_circle(&g) {
        Ok(g)
    } else {
        Err(Error::Inconclusive(format!("constructed element left {}", group.name)))
    }
}

pub fn lin_set(i: &LinInterval) -> RoLin {
    RoLin::from_interval(i)
}

pub fn circ_set(i: &CircInterval) -> RoCirc {
    RoCirc::from_interval(i)
}

/// `g(I) ∩ J ≠ ∅`.
pub fn meets_line(g: &PLMap, i: &LinInterval, j: &LinInterval) -> bool {
    !g.image(&lin_set(i)).disjoint(&lin_set(j))
}

pub fn meets_circle(g: &PLCircle, i: &CircInterval, j: &CircInterval) -> bool {
    !g.image(&circ_set(i)).disjoint(&circ_set(j))
}

fn ordered_line(ivs: &[LinInterval]) -> bool {
    ivs.windows(2).all(|w| w[0].hi <= w[1].lo)
}

fn crs_ordered(ivs: &[CircInterval]) -> bool {
    let sets: Vec<RoCirc> = ivs.iter().map(circ_set).collect();
    let refs: Vec<&RoCirc> = sets.iter().collect();
    ivs.len() <= 1 || crs(&refs)
}

fn image_interval(g: &PLMap, i: &LinInterval) -> LinInterval {
    let (a, b) = (g.eval_ext(&i.lo), g.eval_ext(&i.hi));
    if a < b {
        LinInterval { lo: a, hi: b }
    } else {
        LinInterval { lo: b, hi: a }
    }
}

// ---------------------------------------------------------------- witnesses

/// `g` with `g(I_i) ∩ J_i ≠ ∅` for ordered `I_1 < … < I_n`, `J_1 < … < J_n`.
pub fn interval_transitive_witness(is: &[LinInterval], js: &[LinInterval], group: &GroupSpec) -> Result<PLMap> {
    line_capable(group)?;
    if is.len() != js.len() || !ordered_line(is) || !ordered_line(js) {
        return pre("need two ordered interval lists of equal length");
    }
    if is == js {
        return Ok(PLMap::id());
    }
    let nodes: Vec<(Q, Q)> = is.iter().zip(js).map(|(i, j)| (inside(&i.lo, &i.hi).0, inside(&j.lo, &j.hi).0)).collect();
    let g = member_line(interp(&nodes, group)?, group)?;
    debug_assert!(is.iter().zip(js).all(|(i, j)| meets_line(&g, i, j)));
    Ok(g)
}

/// Circular version: `Crs(I_1,…,I_n)` and `Crs(J_1,…,J_n)`.
pub fn circle_interval_witness(is: &[CircInterval], js: &[CircInterval], group: &GroupSpec) -> Result<PLCircle> {
    circle_capable(group)?;
    if is.len() != js.len() || !crs_ordered(is) || !crs_ordered(js) {
        return pre("need two Crs-ordered arc lists of equal length");
    }
    if is == js {
        return Ok(PLCircle::id());
    }
    let pick = |i: &CircInterval| arc_inside(i.start.value(), i.end.value()).0;
    let nodes: Vec<(Q, Q)> = is.iter().zip(js).map(|(i, j)| (pick(i), pick(j))).collect();
    member_circle(PLCircle::dyadic_through(&nodes)?, group)
}

/// `g(a_i) ∈ J_i` for points `a_1 < … < a_n` of the completion: the
/// sandwich `I_i' < a_i < I_i''` with `g` hitting `J_i' < J_i''` inside
/// `J_i`. Works for non-dyadic `a_i` too.
pub fn approx_transitive_witness(points: &[Q], js: &[LinInterval], group: &GroupSpec) -> Result<PLMap> {
    line_capable(group)?;
    if points.len() != js.len() || points.windows(2).any(|w| w[0] >= w[1]) || !ordered_line(js) {
        return pre("need increasing points and ordered intervals of equal length");
    }
    let gap = points.windows(2).map(|w| &w[1] - &w[0]).min().unwrap_or_else(Q::one) / Q::from_integer(4.into());
    let mut nodes = Vec::new();
    for (a, j) in points.iter().zip(js) {
        let l = inside_q(&(a - &gap), a).1;
        let r = inside_q(a, &(a + &gap)).0;
        let (b, c) = inside(&j.lo, &j.hi);
        nodes.push((l, b));
        nodes.push((r, c));
    }
    member_line(interp(&nodes, group)?, group)
}

pub fn circle_approx_witness(points: &[Q], js: &[CircInterval], group: &GroupSpec) -> Result<PLCircle> {
    circle_capable(group)?;
    let cps: Vec<CirclePoint> = points.iter().map(|x| CirclePoint::new(x.clone())).collect();
    if points.len() != js.len() || !crs_ordered(js) || (cps.len() >= 3 && !cr_n(&cps)) {
        return pre("need Cr-ordered points and Crs-ordered arcs of equal length");
    }
    let n = cps.len();
    let mut gap = Q::one();
    for i in 0..n {
        let d = arc_len(cps[i].value(), cps[(i + 1) % n].value());
        if n > 1 && d < gap {
            gap = d;
        }
    }
    gap /= Q::from_integer(4.into());
    let mut nodes = Vec::new();
    for (a, j) in cps.iter().zip(js) {
        let a = a.value();
        let l = inside_q(&(a - &gap), a).1;
        let r = inside_q(a, &(a + &gap)).0;
        let (b, c) = arc_inside(j.start.value(), j.end.value());
        nodes.push((frac(&l), b));
        nodes.push((frac(&r), c));
    }
    member_circle(PLCircle::dyadic_through(&nodes)?, group)
}

/// `g(x_i) = y_i` exactly, for increasing dyadic (or, in the rational
/// model, rational) points.
pub fn exact_transitive_witness(xs: &[Q], ys: &[Q], group: &GroupSpec) -> Result<PLMap> {
    line_capable(group)?;
    if xs.len() != ys.len() || xs.windows(2).any(|w| w[0] >= w[1]) || ys.windows(2).any(|w| w[0] >= w[1]) {
        return pre("need increasing point lists of equal length");
    }
    let nodes: Vec<(Q, Q)> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
    member_line(interp(&nodes, group)?, group)
}

/// As `exact_transitive_witness`, with bounded support: anchored fixed
/// nodes one unit beyond all data.
pub fn bounded_exact_witness(xs: &[Q], ys: &[Q], group: &GroupSpec) -> Result<PLMap> {
    if xs.is_empty() {
        return Ok(PLMap::id());
    }
    let lo = xs.iter().chain(ys).min().cloned().unwrap_or_else(Q::zero).floor() - Q::one();
    let hi = xs.iter().chain(ys).max().cloned().unwrap_or_else(Q::zero).ceil() + Q::one();
    let mut x2 = vec![lo.clone()];
    x2.extend(xs.iter().cloned());
    x2.push(hi.clone());
    let mut y2 = vec![lo];
    y2.extend(ys.iter().cloned());
    y2.push(hi);
    let g = exact_transitive_witness(&x2, &y2, group)?;
    debug_assert!(g.is_bounded());
    Ok(g)
}

pub fn circle_exact_witness(xs: &[Q], ys: &[Q], group: &GroupSpec) -> Result<PLCircle> {
    circle_capable(group)?;
    let cx: Vec<CirclePoint> = xs.iter().map(|x| CirclePoint::new(x.clone())).collect();
    let cy: Vec<CirclePoint> = ys.iter().map(|x| CirclePoint::new(x.clone())).collect();
    if xs.len() != ys.len() || (xs.len() >= 3 && !(cr_n(&cx) && cr_n(&cy))) {
        return pre("need Cr-ordered point lists of equal length");
    }
    let nodes: Vec<(Q, Q)> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
    member_circle(PLCircle::dyadic_through(&nodes)?, group)
}

// ---------------------------------------------------------------- promotion

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PromoteCase {
    AlreadyMet,
    /// `h(I_n)` lies above `J_n`.
    Above,
    /// `h(I_n)` lies below `J_n`; reduced to `Above`.
    Below,
    /// Circle: `Crs(J_n, h(I_n), J_1)`.
    AfterTarget,
    /// Circle: `Crs(J_{n-1}, h(I_n), J_n)`.
    BeforeTarget,
}

/// Output of one promotion step, with the conjugators used.
#[derive(Clone, Debug)]
pub struct Promotion<H> {
    pub g: H,
    pub case: PromoteCase,
    pub conjugators: Vec<H>,
}

/// Make a bounded nonidentity `p` move some dyadic `d` down; returns the
/// possibly inverted `p` and `d`.
fn moving_down(p: &PLMap) -> Result<(PLMap, Q)> {
    if p.is_identity() || !p.is_bounded() || p.is_reversing() {
        return pre("p must be bounded, increasing and nonidentity");
    }
    let c = &p.supp_intervals()[0];
    let d = inside(&c.lo, &c.hi).0;
    if p.eval(&d) < d {
        Ok((p.clone(), d))
    } else {
        Ok((p.inverse(), d))
    }
}

fn inf_supp(p: &PLMap) -> Q {
    p.supp_intervals()[0].lo.fin().cloned().expect("bounded support")
}

/// One induction step: `h` meets the first `n-1` targets, the result meets
/// all `n`. `p` is any bounded nonidentity element of the group.
pub fn promote_transitivity(
    h: &PLMap,
    p: &PLMap,
    is: &[LinInterval],
    js: &[LinInterval],
    group: &GroupSpec,
) -> Result<Promotion<PLMap>> {
    line_capable(group)?;
    let n = is.len();
    if n == 0 || n != js.len() || !ordered_line(is) || !ordered_line(js) {
        return pre("need ordered interval lists of equal nonzero length");
    }
    if is.iter().chain(js).any(|i| !i.is_bounded()) {
        return pre("intervals must be bounded");
    }
    if h.is_reversing() || !(0..n - 1).all(|i| meets_line(h, &is[i], &js[i])) {
        return pre("h must be increasing and meet the first n-1 targets");
    }
    if !group.contains_line(h) || !group.contains_line(p) {
        return pre("h and p must lie in the group");
    }
    if meets_line(h, &is[n - 1], &js[n - 1]) {
        return Ok(Promotion { g: h.clone(), case: PromoteCase::AlreadyMet, conjugators: vec![] });
    }
    let (p, d) = moving_down(p)?;
    let jn = &js[n - 1];
    let hin = image_interval(h, &is[n - 1]);
    let out = if hin.lo >= jn.hi {
        let (g, f) = promote_above(h, &p, &d, &hin, jn, group)?;
        Promotion { g, case: PromoteCase::Above, conjugators: vec![f] }
    } else {
        promote_below(h, &p, &d, is, jn, group)?
    };
    let ok = is.iter().zip(js).all(|(i, j)| meets_line(&out.g, i, j));
    if !ok || !group.contains_line(&out.g) {
        return Err(Error::Inconclusive("promotion did not verify".into()));
    }
    Ok(out)
}

/// Case `h(I_n) > J_n`: `g = p^{f⁻¹} h` with `f` sending points of
/// `K_1 < K_2 ⊂ J_n` left of `supp p` and into `(p(d), d)`, and a point of
/// `h(I_n)` just below `d`.
fn promote_above(h: &PLMap, p: &PLMap, d: &Q, hin: &LinInterval, jn: &LinInterval, group: &GroupSpec) -> Result<(PLMap, PLMap)> {
    let (k1, k2) = inside(&jn.lo, &jn.hi);
    let x3 = inside(&hin.lo, &hin.hi).0;
    let k1p = inf_supp(p).floor() - Q::one();
    let (k2p, k3p) = inside_q(&p.eval(d), d);
    let f = member_line(interp(&[(k1, k1p), (k2, k2p), (x3, k3p)], group)?, group)?;
    let g = p.conj(&f.inverse()).compose(h);
    Ok((g, f))
}

/// Case `h(I_n) < J_n`: push `h(I_n)` past `J_n` with `(p⁻¹)^{f⁻¹}`, shrink
/// `I_n`, then finish as in the other case.
fn promote_below(h: &PLMap, p: &PLMap, d: &Q, is: &[LinInterval], jn: &LinInterval, group: &GroupSpec) -> Result<Promotion<PLMap>> {
    let n = is.len();
    let mut i_n = is[n - 1].clone();
    let prev_hi = if n >= 2 { image_interval(h, &is[n - 2]).hi } else { ExtPoint::NegInf };
    if image_interval(h, &i_n).lo <= prev_hi {
        i_n.lo = fin(&inside(&i_n.lo, &i_n.hi).0);
    }
    let hin = image_interval(h, &i_n);
    let k1 = match &prev_hi {
        ExtPoint::Fin(_) => inside(&prev_hi, &hin.lo).0,
        _ => hin.lo.fin().expect("bounded").floor() - Q::one(),
    };
    let x2 = inside(&hin.lo, &hin.hi).0;
    let k3 = jn.hi.fin().expect("bounded").ceil() + Q::one();
    let k1p = inf_supp(p).floor() - Q::one();
    let (k2p, k3p) = inside_q(&p.eval(d), d);
    let f = member_line(interp(&[(k1, k1p), (x2, k2p), (k3, k3p)], group)?, group)?;
    let h1 = p.inverse().conj(&f.inverse()).compose(h);
    // shrink I_n to the part h1 sends above J_n
    let cut = h1.inverse().eval_ext(&jn.hi);
    if cut > i_n.lo {
        i_n.lo = cut;
    }
    if i_n.lo >= i_n.hi {
        return Err(Error::Inconclusive("shrunken I_n is empty".into()));
    }
    let hin1 = image_interval(&h1, &i_n);
    if hin1.lo < jn.hi {
        return Err(Error::Inconclusive("reduction did not clear J_n".into()));
    }
    let (g, f2) = promote_above(&h1, p, d, &hin1, jn, group)?;
    Ok(Promotion { g, case: PromoteCase::Below, conjugators: vec![f, f2] })
}

/// Smallest arc containing `u`: the complement of its largest gap.
fn hull_arc(u: &RoCirc) -> (Q, Q) {
    let arcs = u.arcs();
    let n = arcs.len();
    let mut best: Option<(Q, usize)> = None;
    for i in 0..n {
        let gap = arc_len(&arcs[i].1, &arcs[(i + 1) % n].0);
        if best.as_ref().map_or(true, |(g, _)| &gap > g) {
            best = Some((gap, i));
        }
    }
    let i = best.map(|(_, i)| i).unwrap_or(0);
    (arcs[(i + 1) % n].0.clone(), arcs[i].1.clone())
}

fn cpt(x: &Q) -> CirclePoint {
    CirclePoint::new(x.clone())
}

/// A dyadic point of `h(I) ∩ J`.
fn meet_point(h: &PLCircle, i: &CircInterval, j: &CircInterval) -> Option<Q> {
    let m = h.image(&circ_set(i)).meet(&circ_set(j));
    if m.is_whole() {
        return Some(Q::zero());
    }
    m.arcs().first().map(|(s, e)| arc_inside(s, e).0)
}

/// Circular induction step: `g = p^{f⁻¹} h`, `p` supported in an arc
/// `B ≠ C`.
pub fn circle_promote(
    h: &PLCircle,
    p: &PLCircle,
    is: &[CircInterval],
    js: &[CircInterval],
    group: &GroupSpec,
) -> Result<Promotion<PLCircle>> {
    circle_capable(group)?;
    let n = is.len();
    if n < 2 || n != js.len() || !crs_ordered(is) || !crs_ordered(js) {
        return pre("need Crs-ordered arc lists of equal length, at least two");
    }
    if h.deg() != 1 || !(0..n - 1).all(|i| meets_circle(h, &is[i], &js[i])) {
        return pre("h must be preserving and meet the first n-1 targets");
    }
    let supp = p.var();
    if p.is_identity() || supp.is_whole() || p.deg() != 1 {
        return pre("p must be preserving, nonidentity and supported in a proper arc");
    }
    if meets_circle(h, &is[n - 1], &js[n - 1]) {
        return Ok(Promotion { g: h.clone(), case: PromoteCase::AlreadyMet, conjugators: vec![] });
    }
    let (sb, eb) = hull_arc(&supp);
    let (c0, c1) = supp.arcs()[0].clone();
    let d = arc_inside(&c0, &c1).0;
    let pd = p.apply(&cpt(&d));
    let p_cw = if cr(&p.apply(&pd), &pd, &cpt(&d)) { p.clone() } else { p.inverse() };
    let p_ccw = p_cw.inverse();
    // points y_i ∈ h(I_i) ∩ J_i and x_n ∈ h(I_n)
    let ys: Vec<Q> = (0..n - 1).map(|i| meet_point(h, &is[i], &js[i]).expect("meets")).collect();
    let hin = h.image(&circ_set(&is[n - 1]));
    let (hs, he) = hin.arcs().first().cloned().ok_or_else(|| Error::Inconclusive("h(I_n) not an arc".into()))?;
    let xn = arc_inside(&hs, &he).0;
    let y_last = &ys[n - 2];
    let y_first = &ys[0];
    let jn = &js[n - 1];
    let jmid = arc_inside(jn.start.value(), jn.end.value()).0;
    let after_target = cr(&cpt(y_last), &cpt(&jmid), &cpt(&xn));
    let (gap_s, gap_e) = arc_inside(&eb, &sb);
    let (nodes, pp, case) = if after_target {
        // J_n then h(I_n) between y_{n-1} and y_1
        let (k1, k2) = arc_inside(jn.start.value(), jn.end.value());
        let k4 = arc_inside(&xn, y_first).0;
        let pdv = p_cw.apply(&cpt(&d));
        let (k2p, k3p) = arc_inside(pdv.value(), &d);
        (vec![(k1, gap_e), (k2, k2p), (xn.clone(), k3p), (k4, gap_s)], p_cw, PromoteCase::AfterTarget)
    } else {
        let (k2, k1) = arc_inside(jn.start.value(), jn.end.value());
        let k4 = arc_inside(y_last, &xn).0;
        let pdv = p_ccw.apply(&cpt(&d));
        let (k3p, k2p) = arc_inside(&d, pdv.value());
        (vec![(k4, gap_e), (xn.clone(), k3p), (k2, k2p), (k1, gap_s)], p_ccw, PromoteCase::BeforeTarget)
    };
    let f = member_circle(PLCircle::dyadic_through(&nodes)?, group)?;
    let g = pp.conj(&f.inverse()).compose(h);
    let ok = is.iter().zip(js).all(|(i, j)| meets_circle(&g, i, j));
    if !ok || !group.contains_circle(&g) {
        return Err(Error::Inconclusive("circular promotion did not verify".into()));
    }
    Ok(Promotion { g, case, conjugators: vec![f] })
}

/// Build an `n`-interval witness by the induction: direct witness for the
/// first `base` intervals, then one promotion step per further interval.
pub fn witness_by_promotion(is: &[LinInterval], js: &[LinInterval], base: usize, group: &GroupSpec) -> Result<PLMap> {
    let base = base.min(is.len()).max(1);
    let mut h = interval_transitive_witness(&is[..base], &js[..base], group)?;
    let p = PLMap::bump_on(&fin(&Q::zero()), &fin(&Q::one()), true)?;
    for k in base + 1..=is.len() {
        h = promote_transitivity(&h, &p, &is[..k], &js[..k], group)?.g;
    }
    Ok(h)
}

pub fn circle_witness_by_promotion(is: &[CircInterval], js: &[CircInterval], base: usize, group: &GroupSpec) -> Result<PLCircle> {
    let base = base.min(is.len()).max(1);
    let mut h = circle_interval_witness(&is[..base], &js[..base], group)?;
    let p = PLCircle::bump_arc(&Q::zero(), &half(), true);
    for k in base + 1..=is.len() {
        h = circle_promote(&h, &p, &is[..k], &js[..k], group)?.g;
    }
    Ok(h)
}

// ---------------------------------------------------------------- adjust

/// `g = k h k⁻¹` agreeing with `h` on `(a,b)` and supported in `(c,d)`,
/// given `(a,b) ∪ h(a,b)` strictly inside `(c,d)`.
pub fn adjust_support(h: &PLMap, ab: &LinInterval, cd: &LinInterval, group: &GroupSpec) -> Result<PLMap> {
    line_capable(group)?;
    if !h.is_bounded() || h.is_reversing() {
        return pre("h must be bounded and increasing");
    }
    let (a, b, c, d) = match (ab.lo.fin(), ab.hi.fin(), cd.lo.fin(), cd.hi.fin()) {
        (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
        _ => return pre("intervals must be bounded"),
    };
    let a1 = a.min(&h.eval(a)).clone();
    let b1 = b.max(&h.eval(b)).clone();
    if !(c < &a1 && &b1 < d) {
        return pre("(a,b) ∪ h(a,b) is not strictly inside (c,d)");
    }
    if h.is_identity() {
        return Ok(h.clone());
    }
    let supp = h.supp_intervals();
    let s = supp[0].lo.fin().cloned().expect("bounded");
    let t = supp[supp.len() - 1].hi.fin().cloned().expect("bounded");
    let left = &s < c;
    let right = &t > d;
    if !left && !right {
        return Ok(h.clone());
    }
    // p moves up on (0,1), p2 moves down on (3,4)
    let p = PLMap::bump_on(&fin(&Q::zero()), &fin(&Q::one()), true)?;
    let p2 = PLMap::bump_on(&fin(&Q::from_integer(3.into())), &fin(&Q::from_integer(4.into())), false)?;
    let mut nodes = Vec::new();
    let (c1, a2) = inside_q(c, &a1);
    let (b2, d1) = inside_q(&b1, d);
    let q = |n: i64, m: i64| Q::new(n.into(), m.into());
    if left {
        nodes.push((s.clone(), q(1, 16)));
        nodes.push((c1, q(3, 32)));
    }
    nodes.push((a2, Q::from_integer(2.into())));
    nodes.push((b2, q(5, 2)));
    if right {
        nodes.push((d1, q(125, 32)));
        nodes.push((t.clone(), q(63, 16)));
    }
    let f = member_line(interp(&nodes, group)?, group)?;
    let mut k = PLMap::id();
    if left {
        k = k.compose(&p.conj(&f.inverse()));
    }
    if right {
        k = k.compose(&p2.conj(&f.inverse()));
    }
    let g = h.conj(&k);
    if !g.var().leq(&lin_set(cd)) || !group.contains_line(&g) {
        return Err(Error::Inconclusive("adjusted support escaped (c,d)".into()));
    }
    Ok(g)
}

/// Nonidentity bounded `q_2 q_3⁻¹` from `p` with support bounded above and
/// `q` with support bounded below.
pub fn bounded_from_one_sided(p: &PLMap, q: &PLMap, group: &GroupSpec) -> Result<PLMap> {
    line_capable(group)?;
    if p.is_identity() || q.is_identity() || p.is_reversing() || q.is_reversing() {
        return pre("p and q must be increasing and nonidentity");
    }
    if !p.right_tail_identity() || !q.left_tail_identity() {
        return pre("need supp p bounded above and supp q bounded below");
    }
    let comps = p.supp_intervals();
    let c = &comps[comps.len() - 1];
    let x0 = inside(&c.lo, &c.hi).0;
    let pp = if p.eval(&x0) > x0 { p.clone() } else { p.inverse() };
    let px0 = pp.eval(&x0);
    let x1 = inside_q(&x0, &px0).0;
    let px1 = pp.eval(&x1);
    let qc = &q.supp_intervals()[0];
    let a1 = qc.lo.fin().cloned().expect("bounded below");
    let (a2, a3) = inside(&qc.lo, &qc.hi);
    let y1 = inside_q(&x0, &x1).0;
    let y2 = inside_q(&x1, &px0).0;
    let y3 = &px1 + Q::one();
    let f = member_line(interp(&[(a1, y1), (a2, y2), (a3, y3)], group)?, group)?;
    let q2 = q.conj(&f);
    let q3 = q2.conj(&pp);
    let r = q2.compose(&q3.inverse());
    if r.is_identity() || !r.is_bounded() {
        return Err(Error::Inconclusive("commutator not bounded nonidentity".into()));
    }
    member_line(r, group)
}

// ---------------------------------------------------------------- lattice

/// `f = (g ∨ Id) ∧ (h⁻¹ ∨ Id)` fixing `x_1 … x_{n-1}` and sending `x_n` to
/// `y_n`, in a lattice-closed group.
pub fn lattice_exact_witness(xs: &[Q], yn: &Q, g: &PLMap, h: &PLMap, group: &GroupSpec) -> Result<PLMap> {
    if !group.rational || group.allow_reversing {
        return Err(Error::Unsupported(format!("{} is not lattice-closed", group.name)));
    }
    let n = xs.len();
    if n == 0 || xs.windows(2).any(|w| w[0] >= w[1]) || yn <= &xs[n - 1] {
        return pre("need x_1 < … < x_n < y_n");
    }
    if g.is_reversing() || h.is_reversing() || g.eval(&xs[n - 1]) != *yn {
        return pre("g must be increasing with g(x_n) = y_n");
    }
    if n == 1 {
        return Ok(g.clone());
    }
    let hi = h.inverse();
    if !(xs[..n - 1].iter().all(|x| &hi.eval(x) < x) && &hi.eval(&xs[n - 1]) > yn) {
        return pre("h must send an interval around the data into (x_{n-1}, x_n)");
    }
    let id = PLMap::id();
    let f = g.lattice_sup(&id)?.lattice_inf(&hi.lattice_sup(&id)?)?;
    let ok = xs[..n - 1].iter().all(|x| &f.eval(x) == x) && &f.eval(&xs[n - 1]) == yn;
    if !ok {
        return Err(Error::Inconclusive("lattice witness did not verify".into()));
    }
    member_line(f, group)
}

/// The `g` and `h` used above: a translation and an affine contraction of
/// `I = (⌊x_1⌋-1, ⌈y_n⌉+1)` into the middle third of `(x_{n-1}, x_n)`.
pub fn lattice_exact_data(xs: &[Q], yn: &Q) -> Result<(PLMap, PLMap)> {
    let n = xs.len();
    if n == 0 {
        return pre("no points");
    }
    let g = PLMap::translation(yn - &xs[n - 1]);
    if n == 1 {
        return Ok((g, PLMap::id()));
    }
    let three = Q::from_integer(3.into());
    let w = &xs[n - 1] - &xs[n - 2];
    let j0 = &xs[n - 2] + &w / &three;
    let j1 = &xs[n - 2] + &w * Q::from_integer(2.into()) / &three;
    let i0 = xs[0].floor() - Q::one();
    let i1 = yn.ceil() + Q::one();
    let h = PLMap::through(&[(i0, j0), (i1, j1)])?;
    Ok((g, h))
}

// ---------------------------------------------------------------- checkers

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Exact,
    Approx,
    Interval,
    Inclusion,
    Nest,
    Span,
    WeakSpan,
    LocallySweeping,
}

impl Property {
    pub fn parse(s: &str) -> Result<Property> {
        Ok(match s {
            "exact" | "exact_n" => Property::Exact,
            "approx" | "approx_n" => Property::Approx,
            "interval" | "interval_n" => Property::Interval,
            "inclusion" => Property::Inclusion,
            "nest" => Property::Nest,
            "span" => Property::Span,
            "weak_span" => Property::WeakSpan,
            "locally_sweeping" => Property::LocallySweeping,
            _ => return Err(Error::Parse(format!("unknown property {s:?}"))),
        })
    }
    pub fn needs_n(&self) -> bool {
        matches!(self, Property::Exact | Property::Approx | Property::Interval)
    }
    pub fn name(&self) -> &'static str {
        match self {
            Property::Exact => "exact_n",
            Property::Approx => "approx_n",
            Property::Interval => "interval_n",
            Property::Inclusion => "inclusion",
            Property::Nest => "nest",
            Property::Span => "span",
            Property::WeakSpan => "weak_span",
            Property::LocallySweeping => "locally_sweeping",
        }
    }
}

/// Bounded interval `(lo,hi)`; on the circle the counterclockwise arc.
pub type Iv = (Q, Q);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Intervals { from: Vec<Iv>, to: Vec<Iv> },
    PointsToIntervals { points: Vec<Q>, to: Vec<Iv> },
    Points { from: Vec<Q>, to: Vec<Q> },
    Inclusion { i: Iv, j: Iv },
    Nest { inner: Iv, outer: Iv, k: Iv },
    Span { a: Q, b: Q, i: Iv, j: Iv },
    Sweep { a: Q, b: Q, c: Q },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub instance: Instance,
    pub element: Elem,
}

/// A certified failure: a concrete instance, the structural argument, and
/// how much of the group was enumerated as a cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub instance: Value,
    pub argument: String,
    pub fragment_radius: u32,
    pub fragment_checked: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Holds(Vec<Witness>),
    FailsWith(Counterexample),
    FragmentSound(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitivityReport {
    pub property: Property,
    pub n: Option<usize>,
    pub scenario: String,
    pub space: Space,
    pub instances: usize,
    pub verdict: Verdict,
}

impl TransitivityReport {
    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::Holds(_) => "Holds",
            Verdict::FailsWith(_) => "FailsWith",
            Verdict::FragmentSound(_) => "FragmentSound",
        }
    }
}

fn lin_iv(iv: &Iv) -> LinInterval {
    LinInterval { lo: fin(&iv.0), hi: fin(&iv.1) }
}

fn circ_iv(iv: &Iv) -> CircInterval {
    CircInterval::arc(iv.0.clone(), iv.1.clone())
}

fn lin_set_iv(iv: &Iv) -> RoLin {
    RoLin::fin(iv.0.clone(), iv.1.clone())
}

fn circ_set_iv(iv: &Iv) -> RoCirc {
    RoCirc::arc(&iv.0, &iv.1)
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All intervals between grid points (arcs between distinct points on the
/// circle).
fn grid_intervals(pts: &[Q], space: Space) -> Vec<Iv> {
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i < j || (space == Space::Circle && i != j) {
                out.push((pts[i].clone(), pts[j].clone()));
            }
        }
    }
    out
}

fn rotations(v: &[Iv]) -> Vec<Vec<Iv>> {
    (0..v.len()).map(|r| v[r..].iter().chain(&v[..r]).cloned().collect()).collect()
}

/// Grid instances of a property.
pub fn instances(property: Property, n: usize, pts: &[Q], space: Space) -> Vec<Instance> {
    let cells: Vec<Iv> = match space {
        Space::Line => pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect(),
        Space::Circle => (0..pts.len()).map(|i| (pts[i].clone(), pts[(i + 1) % pts.len()].clone())).collect(),
    };
    let ivs = grid_intervals(pts, space);
    let mut out = Vec::new();
    match property {
        Property::Interval => {
            let tuples: Vec<Vec<Iv>> = combos(cells.len(), n).iter().map(|c| c.iter().map(|&i| cells[i].clone()).collect()).collect();
            for from in &tuples {
                for to0 in &tuples {
                    let tos = if space == Space::Circle { rotations(to0) } else { vec![to0.clone()] };
                    for to in tos {
                        out.push(Instance::Intervals { from: from.clone(), to });
                    }
                }
            }
        }
        Property::Approx => {
            let mut ps: Vec<Q> = pts.to_vec();
            for (a, b) in &cells {
                let w = if space == Space::Circle { arc_len(a, b) } else { b - a };
                ps.push(frac_if(space, &(a + w / Q::from_integer(3.into()))));
            }
            ps.sort();
            let targets: Vec<Vec<Iv>> = combos(cells.len(), n).iter().map(|c| c.iter().map(|&i| cells[i].clone()).collect()).collect();
            for c in combos(ps.len(), n) {
                let points: Vec<Q> = c.iter().map(|&i| ps[i].clone()).collect();
                for to0 in &targets {
                    let tos = if space == Space::Circle { rotations(to0) } else { vec![to0.clone()] };
                    for to in tos {
                        out.push(Instance::PointsToIntervals { points: points.clone(), to });
                    }
                }
            }
        }
        Property::Exact => {
            let tuples: Vec<Vec<Q>> = combos(pts.len(), n).iter().map(|c| c.iter().map(|&i| pts[i].clone()).collect()).collect();
            for from in &tuples {
                for to in &tuples {
                    if space == Space::Circle {
                        for r in 0..n {
                            let rot: Vec<Q> = to[r..].iter().chain(&to[..r]).cloned().collect();
                            out.push(Instance::Points { from: from.clone(), to: rot });
                        }
                    } else {
                        out.push(Instance::Points { from: from.clone(), to: to.clone() });
                    }
                }
            }
        }
        Property::Inclusion => {
            for i in &ivs {
                for j in &ivs {
                    out.push(Instance::Inclusion { i: i.clone(), j: j.clone() });
                }
            }
        }
        Property::Nest => {
            for inner in &ivs {
                for outer in &ivs {
                    if strictly_inside(inner, outer, space) {
                        for k in &ivs {
                            out.push(Instance::Nest { inner: inner.clone(), outer: outer.clone(), k: k.clone() });
                        }
                    }
                }
            }
        }
        Property::Span | Property::WeakSpan => {
            for a in pts {
                for b in pts {
                    if a == b {
                        continue;
                    }
                    for i in &ivs {
                        for j in &ivs {
                            let ok = if property == Property::WeakSpan { i == j } else { j.0 <= i.0 && i.1 <= j.1 };
                            if ok {
                                out.push(Instance::Span { a: a.clone(), b: b.clone(), i: i.clone(), j: j.clone() });
                            }
                        }
                    }
                }
            }
        }
        Property::LocallySweeping => {
            for c in combos(pts.len(), 3) {
                out.push(Instance::Sweep { a: pts[c[0]].clone(), b: pts[c[1]].clone(), c: pts[c[2]].clone() });
            }
        }
    }
    out
}

fn frac_if(space: Space, x: &Q) -> Q {
    if space == Space::Circle {
        frac(x)
    } else {
        x.clone()
    }
}

/// `inner ⊂ˢ outer`: contained with both ends distinct.
fn strictly_inside(inner: &Iv, outer: &Iv, space: Space) -> bool {
    match space {
        Space::Line => outer.0 < inner.0 && inner.1 < outer.1,
        Space::Circle => {
            let off = |x: &Q| frac(&(x - &outer.0));
            let l = arc_len(&outer.0, &outer.1);
            let (a, b) = (off(&inner.0), off(&inner.0) + arc_len(&inner.0, &inner.1));
            a.is_positive() && b < l
        }
    }
}

/// Build the witness for one instance.
pub fn construct(property: Property, inst: &Instance, space: Space, group: &GroupSpec) -> Result<Elem> {
    match space {
        Space::Line => construct_line(property, inst, group).map(Elem::Line),
        Space::Circle => construct_circle(property, inst, group).map(Elem::Circle),
    }
}

fn construct_line(property: Property, inst: &Instance, group: &GroupSpec) -> Result<PLMap> {
    match inst {
        Instance::Intervals { from, to } => {
            let is: Vec<LinInterval> = from.iter().map(lin_iv).collect();
            let js: Vec<LinInterval> = to.iter().map(lin_iv).collect();
            interval_transitive_witness(&is, &js, group)
        }
        Instance::PointsToIntervals { points, to } => {
            approx_transitive_witness(points, &to.iter().map(lin_iv).collect::<Vec<_>>(), group)
        }
        Instance::Points { from, to } => bounded_exact_witness(from, to, group),
        Instance::Inclusion { i, j } => {
            let (j0, j1) = inside_q(&j.0, &j.1);
            exact_transitive_witness(&[i.0.clone(), i.1.clone()], &[j0, j1], group)
        }
        Instance::Nest { inner, outer, k } => {
            let lo = inside_q(&outer.0, &inner.0).0;
            let hi = inside_q(&inner.1, &outer.1).0;
            exact_transitive_witness(&[k.0.clone(), k.1.clone()], &[lo, hi], group)
        }
        Instance::Span { a, b, i, j } => {
            let _ = property;
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let target = inside_q(&i.0, &i.1).0;
            let far = j.1.ceil() + Q::one();
            let far = if far <= target { target.clone() + Q::one() } else { far };
            exact_transitive_witness(&[lo.clone(), hi.clone()], &[target, far], group)
        }
        Instance::Sweep { a, c, .. } => member_line(PLMap::bump_on(&fin(a), &fin(c), true)?, group),
    }
}

fn construct_circle(property: Property, inst: &Instance, group: &GroupSpec) -> Result<PLCircle> {
    match inst {
        Instance::Intervals { from, to } => {
            let is: Vec<CircInterval> = from.iter().map(circ_iv).collect();
            let js: Vec<CircInterval> = to.iter().map(circ_iv).collect();
            circle_interval_witness(&is, &js, group)
        }
        Instance::PointsToIntervals { points, to } => {
            circle_approx_witness(points, &to.iter().map(circ_iv).collect::<Vec<_>>(), group)
        }
        Instance::Points { from, to } => circle_exact_witness(from, to, group),
        Instance::Inclusion { i, j } => {
            let (j0, j1) = arc_inside(&j.0, &j.1);
            circle_exact_witness(&[i.0.clone(), i.1.clone()], &[j0, j1], group)
        }
        Instance::Nest { inner, outer, k } => {
            let lo = arc_inside(&outer.0, &inner.0).0;
            let hi = arc_inside(&inner.1, &outer.1).0;
            circle_exact_witness(&[k.0.clone(), k.1.clone()], &[lo, hi], group)
        }
        Instance::Sweep { a, c, .. } => member_circle(PLCircle::bump_arc(a, c, true), group),
        Instance::Span { .. } => Err(Error::Unsupported(format!("{} is defined for the line only", property.name()))),
    }
}

/// Re-check the defining condition of a property on a witness.
pub fn replay(inst: &Instance, elem: &Elem) -> bool {
    match elem {
        Elem::Line(g) => replay_line(inst, g),
        Elem::Circle(g) => replay_circle(inst, g),
    }
}

fn replay_line(inst: &Instance, g: &PLMap) -> bool {
    let img = |iv: &Iv| g.image(&lin_set_iv(iv));
    let in_iv = |x: &Q, iv: &Iv| &iv.0 < x && x < &iv.1;
    match inst {
        Instance::Intervals { from, to } => from.iter().zip(to).all(|(i, j)| !img(i).disjoint(&lin_set_iv(j))),
        Instance::PointsToIntervals { points, to } => points.iter().zip(to).all(|(a, j)| in_iv(&g.eval(a), j)),
        Instance::Points { from, to } => from.iter().zip(to).all(|(a, b)| &g.eval(a) == b),
        Instance::Inclusion { i, j } => img(i).leq(&lin_set_iv(j)),
        Instance::Nest { inner, outer, k } => lin_set_iv(inner).leq(&img(k)) && img(k).leq(&lin_set_iv(outer)),
        Instance::Span { a, b, i, j } => {
            let (ga, gb) = (g.eval(a), g.eval(b));
            let out_j = |x: &Q| !(j.0 <= *x && *x <= j.1);
            (in_iv(&ga, i) && out_j(&gb)) || (in_iv(&gb, i) && out_j(&ga))
        }
        Instance::Sweep { a, b, c } => g.var().leq(&RoLin::fin(a.clone(), c.clone())) && &g.eval(b) != b,
    }
}

fn replay_circle(inst: &Instance, g: &PLCircle) -> bool {
    let img = |iv: &Iv| g.image(&circ_set_iv(iv));
    let in_arc = |x: &CirclePoint, iv: &Iv| circ_iv(iv).contains(x);
    match inst {
        Instance::Intervals { from, to } => from.iter().zip(to).all(|(i, j)| !img(i).disjoint(&circ_set_iv(j))),
        Instance::PointsToIntervals { points, to } => points.iter().zip(to).all(|(a, j)| in_arc(&g.apply(&cpt(a)), j)),
        Instance::Points { from, to } => from.iter().zip(to).all(|(a, b)| g.apply(&cpt(a)) == cpt(b)),
        Instance::Inclusion { i, j } => img(i).leq(&circ_set_iv(j)),
        Instance::Nest { inner, outer, k } => circ_set_iv(inner).leq(&img(k)) && img(k).leq(&circ_set_iv(outer)),
        Instance::Span { .. } => false,
        Instance::Sweep { a, b, c } => g.var().leq(&RoCirc::arc(a, c)) && g.apply(&cpt(b)) != cpt(b),
    }
}

/// Evaluate a property over the scenario's grid.
pub fn check_property(property: Property, n: Option<usize>, scenario: &Scenario) -> TransitivityReport {
    let n_eff = if property.needs_n() { n.unwrap_or(2).max(1) } else { 0 };
    let mk = |instances, verdict| TransitivityReport {
        property,
        n: if property.needs_n() { Some(n_eff) } else { None },
        scenario: scenario.name.clone(),
        space: scenario.space,
        instances,
        verdict,
    };
    let group = match &scenario.group {
        ScenarioGroup::Pl(g) => g,
        ScenarioGroup::Gallery(tag) => {
            let (count, verdict) = gallery::check_property(*tag, property, n_eff, &scenario.grid, scenario.fragment_radius);
            return mk(count, verdict);
        }
    };
    if scenario.space == Space::Circle && matches!(property, Property::Span | Property::WeakSpan) {
        return mk(0, Verdict::FragmentSound(format!("{} is defined for linear and monotonic groups only", property.name())));
    }
    let insts = instances(property, n_eff, &scenario.grid.points, scenario.space);
    let mut witnesses = Vec::with_capacity(insts.len());
    for inst in &insts {
        match construct(property, inst, scenario.space, group) {
            Ok(e) if replay(inst, &e) => witnesses.push(Witness { instance: inst.clone(), element: e }),
            Ok(_) => return mk(insts.len(), Verdict::FragmentSound(format!("witness failed to replay on {}", instance_json(inst)))),
            Err(e) => return mk(insts.len(), Verdict::FragmentSound(format!("no witness for {}: {e}", instance_json(inst)))),
        }
    }
    mk(insts.len(), Verdict::Holds(witnesses))
}

// ---------------------------------------------------------------- reports

fn iv_json(iv: &Iv) -> Value {
    json!([codec::q_json(&iv.0), codec::q_json(&iv.1)])
}

fn iv_from(v: &Value, path: &str) -> Result<Iv> {
    let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse(format!("{path}: expected [lo, hi]")))?;
    Ok((codec::q_from(&a[0], path)?, codec::q_from(&a[1], path)?))
}

fn ivs_from(v: &Value, path: &str) -> Result<Vec<Iv>> {
    let a = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: expected a list")))?;
    a.iter().enumerate().map(|(i, x)| iv_from(x, &format!("{path}/{i}"))).collect()
}

pub fn instance_json(inst: &Instance) -> Value {
    let ivs = |v: &[Iv]| Value::Array(v.iter().map(iv_json).collect());
    match inst {
        Instance::Intervals { from, to } => json!({"type": "intervals", "from": ivs(from), "to": ivs(to)}),
        Instance::PointsToIntervals { points, to } => json!({"type": "points_to_intervals", "points": codec::qs_json(points), "to": ivs(to)}),
        Instance::Points { from, to } => json!({"type": "points", "from": codec::qs_json(from), "to": codec::qs_json(to)}),
        Instance::Inclusion { i, j } => json!({"type": "inclusion", "i": iv_json(i), "j": iv_json(j)}),
        Instance::Nest { inner, outer, k } => json!({"type": "nest", "inner": iv_json(inner), "outer": iv_json(outer), "k": iv_json(k)}),
        Instance::Span { a, b, i, j } => json!({"type": "span", "a": codec::q_json(a), "b": codec::q_json(b), "i": iv_json(i), "j": iv_json(j)}),
        Instance::Sweep { a, b, c } => json!({"type": "sweep", "a": codec::q_json(a), "b": codec::q_json(b), "c": codec::q_json(c)}),
    }
}

pub fn instance_from(v: &Value, path: &str) -> Result<Instance> {
    let f = |k: &str| codec::field(v, k, path);
    let p = |k: &str| format!("{path}/{k}");
    Ok(match f("type")?.as_str().unwrap_or("") {
        "intervals" => Instance::Intervals { from: ivs_from(f("from")?, &p("from"))?, to: ivs_from(f("to")?, &p("to"))? },
        "points_to_intervals" => {
            Instance::PointsToIntervals { points: codec::qs_from(f("points")?, &p("points"))?, to: ivs_from(f("to")?, &p("to"))? }
        }
        "points" => Instance::Points { from: codec::qs_from(f("from")?, &p("from"))?, to: codec::qs_from(f("to")?, &p("to"))? },
        "inclusion" => Instance::Inclusion { i: iv_from(f("i")?, &p("i"))?, j: iv_from(f("j")?, &p("j"))? },
        "nest" => Instance::Nest {
            inner: iv_from(f("inner")?, &p("inner"))?,
            outer: iv_from(f("outer")?, &p("outer"))?,
            k: iv_from(f("k")?, &p("k"))?,
        },
        "span" => Instance::Span {
            a: codec::q_from(f("a")?, &p("a"))?,
            b: codec::q_from(f("b")?, &p("b"))?,
            i: iv_from(f("i")?, &p("i"))?,
            j: iv_from(f("j")?, &p("j"))?,
        },
        "sweep" => Instance::Sweep {
            a: codec::q_from(f("a")?, &p("a"))?,
            b: codec::q_from(f("b")?, &p("b"))?,
            c: codec::q_from(f("c")?, &p("c"))?,
        },
        t => return Err(Error::Parse(format!("{path}/type: unknown instance type {t:?}"))),
    })
}

impl TransitivityReport {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Verdict::Holds(ws) => json!({
                "kind": "Holds",
                "witnesses": ws.iter().map(|w| json!({"instance": instance_json(&w.instance), "element": codec::elem_json(&w.element)})).collect::<Vec<_>>(),
            }),
            Verdict::FailsWith(c) => json!({
                "kind": "FailsWith",
                "instance": c.instance,
                "argument": c.argument,
                "fragment_radius": c.fragment_radius,
                "fragment_checked": c.fragment_checked,
            }),
            Verdict::FragmentSound(why) => json!({"kind": "FragmentSound", "note": why}),
        };
        json!({
            "report": "transitivity",
            "property": self.property.name(),
            "n": self.n,
            "scenario": self.scenario,
            "space": match self.space { Space::Line => "line", Space::Circle => "circle" },
            "instances": self.instances,
            "verdict": verdict,
        })
    }
}

/// Replay every witness of a serialized `Holds` report.
pub fn replay_report(v: &Value) -> Result<usize> {
    let ws = v["verdict"]["witnesses"].as_array().ok_or_else(|| Error::Parse("/verdict/witnesses: missing".into()))?;
    for (k, w) in ws.iter().enumerate() {
        let path = format!("/verdict/witnesses/{k}");
        let inst = instance_from(&w["instance"], &format!("{path}/instance"))?;
        let e = codec::elem_from(&w["element"], &format!("{path}/element"))?;
        if !replay(&inst, &e) {
            return Err(Error::Invalid(format!("{path}: witness does not replay")));
        }
    }
    Ok(ws.len())
}

// ---------------------------------------------------------------- types

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderType {
    Ln,
    MnOrp,
    Cr,
    McOrp,
    Inconclusive,
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderType::Ln => "LN",
            OrderType::MnOrp => "MN_orp",
            OrderType::Cr => "CR",
            OrderType::McOrp => "MC_orp",
            OrderType::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SentenceOutcome {
    /// Witnessed on every sampled instance.
    Holds { instances: usize },
    /// A counter-instance with the orientation argument that rules out
    /// every group element.
    Refuted { instance: String, argument: String },
    Open(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyReport {
    pub scenario: String,
    pub result: OrderType,
    pub sentences: Vec<(String, SentenceOutcome)>,
}

impl ClassifyReport {
    pub fn to_json(&self) -> Value {
        let s: Vec<Value> = self
            .sentences
            .iter()
            .map(|(name, o)| match o {
                SentenceOutcome::Holds { instances } => json!({"sentence": name, "outcome": "holds", "instances": instances}),
                SentenceOutcome::Refuted { instance, argument } => {
                    json!({"sentence": name, "outcome": "refuted", "instance": instance, "argument": argument})
                }
                SentenceOutcome::Open(why) => json!({"sentence": name, "outcome": "open", "note": why}),
            })
            .collect();
        json!({"report": "classify", "scenario": self.scenario, "type": self.result.to_string(), "sentences": s})
    }
}

/// Sample family of nonzero regular open sets from the grid: cells,
/// adjacent pairs of cells and (on the line) the two end rays.
fn line_family(pts: &[Q]) -> Vec<RoLin> {
    let mut out: Vec<RoLin> = pts.windows(2).map(|w| RoLin::fin(w[0].clone(), w[1].clone())).collect();
    for w in pts.windows(3) {
        out.push(RoLin::fin(w[0].clone(), w[1].clone()).sum(&RoLin::fin(w[1].clone(), w[2].clone())));
    }
    out.push(RoLin::interval(ExtPoint::NegInf, fin(&pts[0])));
    out.push(RoLin::interval(fin(&pts[pts.len() - 1]), ExtPoint::PosInf));
    out
}

fn circle_family(pts: &[Q]) -> Vec<RoCirc> {
    let n = pts.len();
    let cell = |i: usize| RoCirc::arc(&pts[i % n], &pts[(i + 1) % n]);
    let mut out: Vec<RoCirc> = (0..n).map(cell).collect();
    for i in 0..n {
        out.push(cell(i).sum(&cell(i + 1)));
    }
    out
}

/// Up to three dyadic probe points of a set.
fn line_probes(u: &RoLin) -> Vec<Q> {
    let mut out = Vec::new();
    for (a, b) in u.components() {
        let (x, y) = inside(a, b);
        let m = (&x + &y) * half();
        out.extend([x, m, y]);
    }
    out.truncate(3);
    out
}

fn circle_probes(u: &RoCirc) -> Vec<Q> {
    if u.is_whole() {
        return vec![Q::zero(), half()];
    }
    let mut out = Vec::new();
    for (s, e) in u.arcs() {
        let (x, y) = arc_inside(&s, &e);
        let m = frac(&(&x + arc_len(&x, &y) * half()));
        out.extend([x, m, y]);
    }
    out.truncate(3);
    out
}

/// A group element sending sources to targets, preserving or reversing as
/// the data dictates.
fn line_point_map(src: &[Q], dst: &[Q], group: &GroupSpec) -> Option<PLMap> {
    let mut pairs: Vec<(Q, Q)> = src.iter().cloned().zip(dst.iter().cloned()).collect();
    pairs.sort();
    let inc = pairs.windows(2).all(|w| w[0].1 < w[1].1);
    let dec = pairs.windows(2).all(|w| w[0].1 > w[1].1);
    if inc {
        return interp(&pairs, group).ok().filter(|g| group.contains_line(g));
    }
    if dec && group.allow_reversing {
        let mut neg: Vec<(Q, Q)> = pairs.iter().map(|(x, y)| (-x.clone(), y.clone())).collect();
        neg.sort();
        let m = interp(&neg, group).ok()?;
        return Some(m.compose(&PLMap::negation())).filter(|g| group.contains_line(g));
    }
    None
}

fn circle_point_map(src: &[Q], dst: &[Q], group: &GroupSpec) -> Option<PLCircle> {
    let cs: Vec<CirclePoint> = src.iter().map(cpt).collect();
    let cd: Vec<CirclePoint> = dst.iter().map(cpt).collect();
    let same = src.len() < 3 || cr_n(&cs) == cr_n(&cd);
    let nodes: Vec<(Q, Q)> = src.iter().cloned().zip(dst.iter().cloned()).collect();
    if same {
        return PLCircle::dyadic_through(&nodes).ok().filter(|g| group.contains_circle(g));
    }
    if group.allow_reversing {
        let neg: Vec<(Q, Q)> = nodes.iter().map(|(x, y)| (frac(&-x.clone()), y.clone())).collect();
        let m = PLCircle::dyadic_through(&neg).ok()?;
        return Some(m.compose(&PLCircle::reflection())).filter(|g| group.contains_circle(g));
    }
    None
}

fn distinct(v: &[&Q]) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
}

/// Search a witness for `∃g: g(u_k)·t_k ≠ 0` for all `k`, by mapping probe
/// points of `u_k` to probe points of `t_k`.
fn search<S: RoSet, H: Homeo<Set = S>>(
    us: &[&S],
    ts: &[&S],
    probes: &dyn Fn(&S) -> Vec<Q>,
    map: &dyn Fn(&[Q], &[Q]) -> Option<H>,
) -> Option<H> {
    let ok = |g: &H| us.iter().zip(ts).all(|(u, t)| !g.image(u).disjoint(t));
    if ok(&H::identity()) {
        return Some(H::identity());
    }
    let k = us.len();
    let ps: Vec<Vec<Q>> = us.iter().map(|u| probes(u)).collect();
    let qs: Vec<Vec<Q>> = ts.iter().map(|t| probes(t)).collect();
    let mut idx = vec![0usize; 2 * k];
    let lens: Vec<usize> = ps.iter().chain(qs.iter()).map(|v| v.len()).collect();
    loop {
        let src: Vec<Q> = (0..k).map(|i| ps[i][idx[i]].clone()).collect();
        let dst: Vec<Q> = (0..k).map(|i| qs[i][idx[k + i]].clone()).collect();
        if distinct(&src.iter().collect::<Vec<_>>()) && distinct(&dst.iter().collect::<Vec<_>>()) {
            if let Some(g) = map(&src, &dst) {
                if ok(&g) {
                    return Some(g);
                }
            }
        }
        let mut c = 0;
        loop {
            if c == 2 * k {
                return None;
            }
            idx[c] += 1;
            if idx[c] < lens[c] {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

fn holds_or_open<T>(total: usize, failed: Option<T>, show: impl Fn(T) -> String) -> SentenceOutcome {
    match failed {
        None => SentenceOutcome::Holds { instances: total },
        Some(x) => SentenceOutcome::Open(format!("no witness found for {}", show(x))),
    }
}

/// Decide which of the four types the scenario's group has.
pub fn classify_type(scenario: &Scenario) -> ClassifyReport {
    let mut sentences: Vec<(String, SentenceOutcome)> = Vec::new();
    let group = match &scenario.group {
        ScenarioGroup::Pl(g) => g,
        ScenarioGroup::Gallery(_) => {
            sentences.push(("MC3".into(), SentenceOutcome::Open("gallery groups are not evaluated here".into())));
            return ClassifyReport { scenario: scenario.name.clone(), result: OrderType::Inconclusive, sentences };
        }
    };
    let pts = &scenario.grid.points;
    let rev = group.has_reversing();
    let (mc3, cr2, mn2) = match scenario.space {
        Space::Line => {
            let cells: Vec<RoLin> = pts.windows(2).map(|w| RoLin::fin(w[0].clone(), w[1].clone())).collect();
            let mc3 = if cells.len() >= 3 {
                SentenceOutcome::Refuted {
                    instance: format!("u1={} < u2={} < u3={}", cells[0], cells[1], cells[2]),
                    argument: "an increasing g sending x∈u2 into u3 and y∈u3 into u2 reverses x<y; a decreasing g with \
                               g(z)∈u1 for z∈u1 sends every x∈u2 below g(z), so g(u2) misses u3"
                        .into(),
                }
            } else {
                SentenceOutcome::Open("grid too small for a refuting triple".into())
            };
            let cr2 = SentenceOutcome::Refuted {
                instance: format!("u=v={}", cells[0]),
                argument: "-u contains both rays and every homeomorphism of the line maps a ray onto a ray, which is not \
                           below the bounded v"
                    .into(),
            };
            let mn2 = if rev {
                let fam = line_family(pts);
                let probes = |u: &RoLin| line_probes(u);
                let map = |s: &[Q], d: &[Q]| line_point_map(s, d, group);
                let mut failed = None;
                'outer: for u1 in &fam {
                    for u2 in &fam {
                        if search::<RoLin, PLMap>(&[u1, u2], &[u2, u1], &probes, &map).is_none() {
                            failed = Some((u1.clone(), u2.clone()));
                            break 'outer;
                        }
                    }
                }
                holds_or_open(fam.len() * fam.len(), failed, |(a, b)| format!("({a}, {b})"))
            } else {
                SentenceOutcome::Refuted {
                    instance: format!("u1={} < u2={}", cells[0], cells[1]),
                    argument: "every element is increasing, and x∈u1 < y∈u2 with g(x)∈u2, g(y)∈u1 would reverse x<y".into(),
                }
            };
            (mc3, cr2, Some(mn2))
        }
        Space::Circle => {
            let fam = circle_family(pts);
            let probes = |u: &RoCirc| circle_probes(u);
            let map = |s: &[Q], d: &[Q]| circle_point_map(s, d, group);
            let n = pts.len();
            let mc3 = if rev {
                let mut failed = None;
                'o3: for u1 in &fam {
                    for u2 in &fam {
                        for u3 in &fam {
                            if search::<RoCirc, PLCircle>(&[u1, u2, u3], &[u1, u3, u2], &probes, &map).is_none() {
                                failed = Some(format!("({u1}, {u2}, {u3})"));
                                break 'o3;
                            }
                        }
                    }
                }
                holds_or_open(fam.len().pow(3), failed, |s| s)
            } else if n >= 3 {
                let c = |i: usize| RoCirc::arc(&pts[i], &pts[(i + 1) % n]);
                SentenceOutcome::Refuted {
                    instance: format!("Crs({}, {}, {})", c(0), c(1), c(2)),
                    argument: "every element preserves orientation, so Cr(a,b,c) for a∈u1, b∈u2, c∈u3 forces Cr(g a, g b, g c); \
                               images in u1, u3, u2 would give the reversed order"
                        .into(),
                }
            } else {
                SentenceOutcome::Open("grid too small for a refuting triple".into())
            };
            let mut failed = None;
            for u in &fam {
                for v in &fam {
                    if cr2_witness(u, v, group).is_none() {
                        failed = Some(format!("({u}, {v})"));
                    }
                }
            }
            let cr2 = holds_or_open(fam.len() * fam.len(), failed, |s| s);
            (mc3, cr2, None)
        }
    };
    let is_holds = |o: &SentenceOutcome| matches!(o, SentenceOutcome::Holds { .. });
    let is_ref = |o: &SentenceOutcome| matches!(o, SentenceOutcome::Refuted { .. });
    let result = if is_holds(&mc3) {
        OrderType::McOrp
    } else if !is_ref(&mc3) {
        OrderType::Inconclusive
    } else if is_holds(&cr2) {
        OrderType::Cr
    } else if !is_ref(&cr2) {
        OrderType::Inconclusive
    } else {
        match &mn2 {
            Some(o) if is_holds(o) => OrderType::MnOrp,
            Some(o) if is_ref(o) => OrderType::Ln,
            _ => OrderType::Inconclusive,
        }
    };
    sentences.push(("MC3".into(), mc3));
    sentences.push(("CR2".into(), cr2));
    if let Some(m) = mn2 {
        sentences.push(("MN2".into(), m));
    }
    ClassifyReport { scenario: scenario.name.clone(), result, sentences }
}

/// `g` with `g(-u) ≤ v`: squeeze the complement of a sub-arc of `u` into
/// `v`.
pub fn cr2_witness(u: &RoCirc, v: &RoCirc, group: &GroupSpec) -> Option<PLCircle> {
    if u.is_whole() {
        return Some(PLCircle::id());
    }
    let (us, ue) = u.arcs().first().cloned()?;
    let (p, q) = arc_inside(&us, &ue);
    let (v0, v1) = if v.is_whole() { (Q::zero(), half()) } else {
        let (vs, ve) = v.arcs().first().cloned()?;
        arc_inside(&vs, &ve)
    };
    let g = PLCircle::dyadic_through(&[(q, v0), (p, v1)]).ok()?;
    Some(g).filter(|g| group.contains_circle(g) && g.image(&u.complement()).leq(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordcore::{q, qi};

    fn f() -> GroupSpec {
        GroupSpec::dyadic("thompson-f", None)
    }
    fn li(a: Q, b: Q) -> LinInterval {
        LinInterval::fin(a, b).unwrap()
    }

    #[test]
    fn single_interval_translation_like() {
        let g = interval_transitive_witness(&[li(qi(0), qi(1))], &[li(qi(4), qi(5))], &f()).unwrap();
        assert!(meets_line(&g, &li(qi(0), qi(1)), &li(qi(4), qi(5))));
        let same = [li(qi(0), qi(1)), li(qi(2), qi(3))];
        assert!(interval_transitive_witness(&same, &same, &f()).unwrap().is_identity());
    }

    #[test]
    fn three_intervals() {
        let is = [li(qi(0), qi(1)), li(qi(1), qi(2)), li(qi(5), qi(6))];
        let js = [li(qi(-9), q(-17, 2)), li(q(1, 8), q(1, 4)), li(qi(100), qi(101))];
        let g = interval_transitive_witness(&is, &js, &f()).unwrap();
        assert!(is.iter().zip(&js).all(|(i, j)| meets_line(&g, i, j)));
    }

    #[test]
    fn unsupported_group() {
        let g = GroupSpec { break_primes: vec![3], slope_primes: vec![3], ..f() };
        assert!(matches!(interval_transitive_witness(&[li(qi(0), qi(1))], &[li(qi(2), qi(3))], &g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn approx_sandwich_non_dyadic() {
        let pts = [q(1, 3), q(2, 3), qi(5)];
        let js = [li(qi(0), q(1, 16)), li(q(1, 16), q(1, 8)), li(qi(7), qi(8))];
        let g = approx_transitive_witness(&pts, &js, &f()).unwrap();
        for (a, j) in pts.iter().zip(&js) {
            assert!(j.contains(&fin(&g.eval(a))));
        }
    }

    #[test]
    fn bounded_exact() {
        let g = bounded_exact_witness(&[q(1, 2), qi(1)], &[q(3, 4), qi(3)], &f()).unwrap();
        assert!(g.is_bounded());
        assert_eq!(g.eval(&q(1, 2)), q(3, 4));
        assert_eq!(g.eval(&qi(1)), qi(3));
    }

    #[test]
    fn promote_case_above_and_below() {
        let p = PLMap::bump_on(&fin(&qi(0)), &fin(&qi(1)), true).unwrap();
        let is = [li(qi(0), qi(1)), li(qi(2), qi(3))];
        let js = [li(qi(0), qi(1)), li(qi(5), qi(6))];
        // h meets the first, leaves I_2 below J_2
        let h = PLMap::id();
        let r = promote_transitivity(&h, &p, &is, &js, &f()).unwrap();
        assert_eq!(r.case, PromoteCase::Below);
        assert!(is.iter().zip(&js).all(|(i, j)| meets_line(&r.g, i, j)));
        // above
        let js2 = [li(qi(0), qi(1)), li(q(3, 2), q(7, 4))];
        let r = promote_transitivity(&h, &p, &is, &js2, &f()).unwrap();
        assert_eq!(r.case, PromoteCase::Above);
        assert!(is.iter().zip(&js2).all(|(i, j)| meets_line(&r.g, i, j)));
        // already met
        let r = promote_transitivity(&h, &p, &is, &is, &f()).unwrap();
        assert_eq!(r.case, PromoteCase::AlreadyMet);
    }

    #[test]
    fn promotion_builds_five_interval_witness() {
        let is: Vec<LinInterval> = (0..5).map(|k| li(qi(2 * k), qi(2 * k + 1))).collect();
        let js: Vec<LinInterval> = (0..5).map(|k| li(qi(20 - k * k), q(41 - 2 * k * k, 2))).rev().collect();
        let js: Vec<LinInterval> = {
            let mut v = js;
            v.sort_by(|a, b| a.lo.cmp(&b.lo));
            v
        };
        let g = witness_by_promotion(&is, &js, 3, &f()).unwrap();
        assert!(is.iter().zip(&js).all(|(i, j)| meets_line(&g, i, j)));
    }

    fn arc(a: Q, b: Q) -> CircInterval {
        CircInterval::arc(a, b)
    }

    #[test]
    fn circle_promote_both_cases() {
        let t = GroupSpec::dyadic("thompson-t", None);
        let p = PLCircle::bump_arc(&qi(0), &q(1, 4), true);
        let is: Vec<CircInterval> = (0..5).map(|k| arc(q(k, 5) * q(1, 1), q(2 * k + 1, 10))).collect();
        let is: Vec<CircInterval> = is.into_iter().map(|i| arc(i.start.value().clone(), i.end.value().clone())).collect();
        let dy: Vec<CircInterval> = (0..5).map(|k| arc(q(k, 8), q(2 * k + 1, 16))).collect();
        // h = identity on dyadic arcs; targets shifted so the last one is missed
        let mut js = dy.clone();
        js[4] = arc(q(11, 16), q(3, 4));
        let r = circle_promote(&PLCircle::id(), &p, &dy, &js, &t).unwrap();
        assert!(dy.iter().zip(&js).all(|(i, j)| meets_circle(&r.g, i, j)));
        assert_eq!(r.case, PromoteCase::BeforeTarget);
        js[4] = arc(q(29, 64), q(15, 32));
        let r = circle_promote(&PLCircle::id(), &p, &dy, &js, &t).unwrap();
        assert_eq!(r.case, PromoteCase::AfterTarget);
        assert!(dy.iter().zip(&js).all(|(i, j)| meets_circle(&r.g, i, j)));
        assert_eq!(circle_promote(&PLCircle::id(), &p, &dy, &dy, &t).unwrap().case, PromoteCase::AlreadyMet);
        let _ = is;
    }

    #[test]
    fn adjust_wide_bump() {
        let h = PLMap::bump_on(&fin(&qi(0)), &fin(&qi(9)), true).unwrap();
        let ab = li(qi(3), qi(4));
        let cd = li(qi(2), qi(7));
        let g = adjust_support(&h, &ab, &cd, &f()).unwrap();
        assert!(g.var().leq(&lin_set(&cd)));
        for k in 0..20 {
            let x = qi(3) + q(k, 20);
            assert_eq!(g.eval(&x), h.eval(&x));
        }
        // violated containment
        assert!(adjust_support(&h, &li(qi(3), qi(6)), &cd, &f()).is_err());
        // already inside
        let small = PLMap::bump_on(&fin(&qi(3)), &fin(&qi(5)), true).unwrap();
        assert_eq!(adjust_support(&small, &ab, &cd, &f()).unwrap(), small);
    }

    #[test]
    fn one_sided_to_bounded() {
        let p = PLMap::bump_on(&ExtPoint::NegInf, &fin(&qi(0)), true).unwrap();
        let q_ = PLMap::bump_on(&fin(&qi(5)), &ExtPoint::PosInf, true).unwrap();
        let r = bounded_from_one_sided(&p, &q_, &f()).unwrap();
        assert!(r.is_bounded() && !r.is_identity());
        assert!(bounded_from_one_sided(&PLMap::id(), &q_, &f()).is_err());
    }

    #[test]
    fn lattice_exact() {
        let g = GroupSpec::rational_pl("q");
        let xs = [qi(0), qi(1), qi(3)];
        let yn = qi(5);
        let (gg, h) = lattice_exact_data(&xs, &yn).unwrap();
        let fw = lattice_exact_witness(&xs, &yn, &gg, &h, &g).unwrap();
        assert_eq!(fw.eval(&qi(0)), qi(0));
        assert_eq!(fw.eval(&qi(1)), qi(1));
        assert_eq!(fw.eval(&qi(3)), qi(5));
        let (g1, h1) = lattice_exact_data(&[qi(2)], &qi(3)).unwrap();
        assert_eq!(lattice_exact_witness(&[qi(2)], &qi(3), &g1, &h1, &g).unwrap(), g1);
        assert!(lattice_exact_witness(&[qi(2)], &qi(1), &g1, &h1, &g).is_err());
        assert!(matches!(lattice_exact_witness(&xs, &yn, &gg, &h, &f()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn checkers_on_small_grid() {
        let s = Scenario::builtin("thompson-f").unwrap();
        for (p, n) in [
            (Property::Interval, Some(2)),
            (Property::Approx, Some(2)),
            (Property::Exact, Some(2)),
            (Property::Inclusion, None),
            (Property::Nest, None),
            (Property::Span, None),
            (Property::WeakSpan, None),
            (Property::LocallySweeping, None),
        ] {
            let r = check_property(p, n, &s);
            assert_eq!(r.verdict_name(), "Holds", "{p:?}: {:?}", r.verdict);
            assert!(r.instances > 0);
            assert_eq!(replay_report(&r.to_json()).unwrap(), r.instances);
        }
    }

    #[test]
    fn circle_checkers() {
        let s = Scenario::builtin("thompson-t").unwrap();
        for (p, n) in [(Property::Interval, Some(3)), (Property::Approx, Some(2)), (Property::Exact, Some(3)), (Property::Nest, None)] {
            let r = check_property(p, n, &s);
            assert_eq!(r.verdict_name(), "Holds", "{p:?}: {:?}", r.verdict);
        }
        assert_eq!(check_property(Property::Span, None, &s).verdict_name(), "FragmentSound");
    }

    #[test]
    fn four_types() {
        for (name, t) in [
            ("thompson-f", OrderType::Ln),
            ("neg-extended", OrderType::MnOrp),
            ("thompson-t", OrderType::Cr),
            ("reversing-circle", OrderType::McOrp),
        ] {
            let r = classify_type(&Scenario::builtin(name).unwrap());
            assert_eq!(r.result, t, "{name}: {:?}", r.sentences);
        }
    }
}
