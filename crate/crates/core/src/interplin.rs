//! Points of the line recovered from pairs of segregated regular open
//! sets, and the decisions for equality and betweenness carried out on
//! side classes over a finite family.

use num_traits::One;

use crate::dyadic::dyadic_point;
use crate::error::{pre, Error, Result};
use crate::ordcore::{ExtPoint, Q};
use crate::plgroup::{GroupSpec, Homeo, PLMap};
use crate::roalg::{seg_lin, RoLin, RoSet};

/// A segregated pair of nonempty sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinRep {
    pub u1: RoLin,
    pub u2: RoLin,
}

impl LinRep {
    pub fn new(u1: RoLin, u2: RoLin) -> Result<Self> {
        if u1.is_empty() || u2.is_empty() || !seg_lin(&u1, &u2) {
            return Err(Error::Invalid(format!("({u1},{u2}) is not a representative")));
        }
        Ok(LinRep { u1, u2 })
    }

    pub fn image(&self, h: &PLMap) -> LinRep {
        LinRep { u1: h.image(&self.u1), u2: h.image(&self.u2) }
    }
}

pub fn pt(rep: &LinRep) -> ExtPoint {
    if rep.u1.below(&rep.u2) {
        rep.u1.sup().cloned().expect("nonempty")
    } else {
        rep.u1.inf().cloned().expect("nonempty")
    }
}

/// `U2` and `U2p` lie on the same side of `U1`; an empty `U2p` is on
/// both sides.
pub fn same_side(u1: &RoLin, u2: &RoLin, u2p: &RoLin) -> bool {
    if u2p.is_empty() {
        return true;
    }
    (u2.below(u1) && u2p.below(u1)) || (u1.below(u2) && u1.below(u2p))
}

/// A finite family of at most 64 sets with its disjointness table; subsets
/// of the family are bitmasks.
pub struct LinFamily {
    pub elems: Vec<RoLin>,
    disjoint_with: Vec<u64>,
}

impl LinFamily {
    pub fn new(elems: Vec<RoLin>) -> Result<Self> {
        if elems.len() > 64 {
            return Err(Error::Unsupported("family larger than 64".into()));
        }
        let disjoint_with = elems
            .iter()
            .map(|w| elems.iter().enumerate().filter(|(_, v)| w.disjoint(v)).fold(0u64, |m, (j, _)| m | 1 << j))
            .collect();
        Ok(LinFamily { elems, disjoint_with })
    }

    /// The Boolean algebra generated by the cells cut out by `grid`.
    pub fn cells(grid: &[Q]) -> Result<Self> {
        let cells = grid_cells(grid);
        if cells.len() > 6 {
            return Err(Error::Unsupported("at most 5 grid points".into()));
        }
        let elems = (0..1u32 << cells.len())
            .map(|m| {
                cells
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .fold(RoLin::empty(), |acc, (_, c)| acc.sum(c))
            })
            .collect();
        Self::new(elems)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn members(&self, mask: u64) -> Vec<RoLin> {
        (0..self.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.elems[i].clone()).collect()
    }

    pub fn side_mask(&self, rep: &LinRep) -> u64 {
        (0..self.len())
            .filter(|&i| same_side(&rep.u1, &rep.u2, &self.elems[i]))
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn side_class(&self, rep: &LinRep) -> Vec<RoLin> {
        self.members(self.side_mask(rep))
    }

    /// Members disjoint from every member of `s`.
    pub fn bcmp(&self, s: u64) -> u64 {
        (0..self.len()).filter(|&w| s & !self.disjoint_with[w] == 0).fold(0, |m, w| m | 1 << w)
    }

    pub fn eqp(&self, r1: &LinRep, r2: &LinRep) -> bool {
        let (s1, s2) = (self.side_mask(r1), self.side_mask(r2));
        s1 == s2 || s1 == self.bcmp(s2)
    }

    pub fn bet_ep(&self, r1: &LinRep, r2: &LinRep, r3: &LinRep) -> bool {
        let classes = |r: &LinRep| {
            let s = self.side_mask(r);
            [s, self.bcmp(s)]
        };
        let (a, b, c) = (classes(r1), classes(r2), classes(r3));
        let strict = |x: u64, y: u64| x != y && x & !y == 0;
        a.iter().any(|&x| b.iter().any(|&y| strict(x, y) && c.iter().any(|&z| strict(y, z))))
    }
}

fn grid_cells(grid: &[Q]) -> Vec<RoLin> {
    let mut g = grid.to_vec();
    g.sort();
    g.dedup();
    let mut pts = vec![ExtPoint::NegInf];
    pts.extend(g.into_iter().map(ExtPoint::Fin));
    pts.push(ExtPoint::PosInf);
    pts.windows(2).map(|w| RoLin::interval(w[0].clone(), w[1].clone())).collect()
}

/// A product of disjoint bumps whose var is `u`.
pub fn realize(u: &RoLin) -> PLMap {
    u.components().iter().fold(PLMap::id(), |acc, (lo, hi)| {
        acc.compose(&PLMap::bump_on(lo, hi, true).expect("nonempty component"))
    })
}

/// The ten stock sets over the grid `{-1,0,1,2}`.
pub fn stock_vars() -> Vec<RoLin> {
    use ExtPoint::*;
    let f = |x: i64| Fin(Q::from_integer(x.into()));
    let iv = |a: ExtPoint, b: ExtPoint| RoLin::interval(a, b);
    vec![
        iv(NegInf, f(-1)),
        iv(f(-1), f(0)),
        iv(f(0), f(1)),
        iv(f(1), f(2)),
        iv(f(2), PosInf),
        iv(f(-1), f(1)),
        iv(f(0), f(2)),
        iv(f(-1), f(0)).sum(&iv(f(1), f(2))),
        iv(NegInf, f(-1)).sum(&iv(f(0), f(1))),
        iv(f(0), f(1)).sum(&iv(f(2), PosInf)),
    ]
}

pub fn stock_grid() -> Vec<Q> {
    (-1..=2).map(|x| Q::from_integer(x.into())).collect()
}

/// All representatives formed from ordered pairs of `vars`.
pub fn reps_from(vars: &[RoLin]) -> Vec<LinRep> {
    let mut out = Vec::new();
    for u in vars {
        for v in vars {
            if let Ok(r) = LinRep::new(u.clone(), v.clone()) {
                out.push(r);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegVerdict {
    Segregated,
    Crossed(PLMap),
}

/// Components `I < J < K` with `I, K` in one set and `J` in the other.
fn interleaving(u1: &RoLin, u2: &RoLin) -> Option<[(ExtPoint, ExtPoint); 3]> {
    let mut comps: Vec<((ExtPoint, ExtPoint), usize)> = u1
        .components()
        .iter()
        .map(|c| (c.clone(), 0))
        .chain(u2.components().iter().map(|c| (c.clone(), 1)))
        .collect();
    comps.sort();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if comps[j].1 == comps[i].1 {
                continue;
            }
            if let Some(k) = (j + 1..comps.len()).find(|&k| comps[k].1 == comps[i].1) {
                return Some([comps[i].0.clone(), comps[j].0.clone(), comps[k].0.clone()]);
            }
        }
    }
    None
}

/// Bounded increasing dyadic map sending a point of `I` into `J` and a
/// point of `J` into `K`.
fn crossing_map(ijk: &[(ExtPoint, ExtPoint); 3]) -> Result<PLMap> {
    let [a, b, c] = ijk.clone().map(|(lo, hi)| dyadic_point(&lo, &hi));
    let l = a.floor() - Q::one();
    let r = c.ceil() + Q::one();
    PLMap::dyadic_through(&[(l.clone(), l), (a, b.clone()), (b, c), (r.clone(), r)])
}

fn crosses(g: &PLMap, u1: &RoLin, u2: &RoLin) -> bool {
    !g.image(u1).disjoint(u2) && !g.image(u2).disjoint(u1)
}

fn seg_formula(u1: &RoLin, u2: &RoLin, group: &GroupSpec) -> Result<SegVerdict> {
    if seg_lin(u1, u2) {
        return Ok(SegVerdict::Segregated);
    }
    if !u1.disjoint(u2) {
        return Ok(SegVerdict::Crossed(PLMap::id()));
    }
    let ijk = interleaving(u1, u2).ok_or_else(|| Error::Inconclusive("no interleaving components".into()))?;
    let g = crossing_map(&ijk)?;
    debug_assert!(crosses(&g, u1, u2) && g.is_bounded());
    if !group.contains_line(&g) {
        return Err(Error::Inconclusive(format!("crossing map not in {}", group.name)));
    }
    Ok(SegVerdict::Crossed(g))
}

/// Truth of the segregation formula in an orientation-preserving group,
/// with the crossing element when it fails.
pub fn seg_formula_lin(u1: &RoLin, u2: &RoLin, group: &GroupSpec) -> Result<SegVerdict> {
    if group.allow_reversing {
        return pre("group has order-reversing elements; use seg_formula_mn");
    }
    seg_formula(u1, u2, group)
}

/// Same, with the crossing element restricted to non-units. Order
/// reversing maps of the line move all but one point, so non-units are
/// orientation preserving and the bounded crossing map qualifies.
pub fn seg_formula_mn(u1: &RoLin, u2: &RoLin, group: &GroupSpec) -> Result<SegVerdict> {
    let v = seg_formula(u1, u2, group)?;
    if let SegVerdict::Crossed(g) = &v {
        if g.var() == RoLin::whole() {
            return Err(Error::Inconclusive("crossing map is a unit".into()));
        }
    }
    Ok(v)
}
