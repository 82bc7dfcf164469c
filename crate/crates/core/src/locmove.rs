//! Witness constructions for locally moving groups, generic over the line
//! and circle, plus evaluation of the poset formulas for disjointness,
//! sums and complements over a finite family.

use crate::error::{pre, Error, Result};
use crate::plgroup::{commutator, Homeo};
use crate::roalg::RoSet;

type SetOf<H> = <H as Homeo>::Set;

/// A nonzero `c ≤ b` with `g(c) ≠ c`. Needs `b · var(g) ≠ 0`.
pub fn moving_sub<H: Homeo>(g: &H, b: &SetOf<H>) -> Result<SetOf<H>> {
    if &g.image(b) != b {
        return Ok(b.clone());
    }
    let c = b.meet(&g.var());
    if c.is_zero() {
        return pre("set is fixed pointwise by the element");
    }
    for k in 1..16u32 {
        for p in c.probe_points(k) {
            if g.apply(&p) == p {
                continue;
            }
            for n in 1..64u32 {
                let nb = SetOf::<H>::nbhd(&p, n);
                if !nb.is_zero() && nb.leq(&c) && g.image(&nb).disjoint(&nb) {
                    return Ok(nb);
                }
            }
        }
    }
    Err(Error::Inconclusive("no moved point found".into()))
}

/// `0 ≠ b ≤ a` with `g(b) · b = 0`, given `g(a) ≠ a`.
pub fn dot_witness<H: Homeo>(g: &H, a: &SetOf<H>) -> Result<SetOf<H>> {
    let ga = g.image(a);
    if &ga == a {
        return pre("g fixes a setwise");
    }
    let d = a.minus(&ga);
    let b = if !d.is_zero() { d } else { g.inverse().image(&ga.minus(a)) };
    debug_assert!(!b.is_zero() && b.leq(a) && g.image(&b).disjoint(&b));
    Ok(b)
}

/// `0 ≠ b ≤ a` disjoint from each `g_i(b)`; needs `0 ≠ a ≤ ∏ var(g_i)`.
pub fn alloff_witness<H: Homeo>(gs: &[H], a: &SetOf<H>) -> Result<SetOf<H>> {
    if a.is_zero() {
        return pre("a is zero");
    }
    if gs.iter().any(|g| !a.leq(&g.var())) {
        return pre("a is not below every var(g_i)");
    }
    let mut b = a.clone();
    for g in gs {
        b = dot_witness(g, &moving_sub(g, &b)?)?;
    }
    Ok(b)
}

/// A nonidentity element supported inside `a`.
pub fn bump_inside<H: Homeo>(a: &SetOf<H>) -> H {
    H::bump(&a.bounded_piece())
}

/// `g` with `var(g) ≤ a` and `[g,f] ≠ Id`.
pub fn commutator_witness_1<H: Homeo>(f: &H, a: &SetOf<H>) -> Result<H> {
    if a.is_zero() || !a.leq(&f.var()) {
        return pre("need 0 ≠ a ≤ var(f)");
    }
    let b = dot_witness(f, &moving_sub(f, a)?)?;
    let g = bump_inside::<H>(&b);
    if commutator(&g, f).is_identity() {
        return Err(Error::Inconclusive("commutator vanished".into()));
    }
    Ok(g)
}

/// `b, h(b), …, h^n(b)` pairwise disjoint and nonzero.
pub fn translates_disjoint<H: Homeo>(h: &H, b: &SetOf<H>, n: usize) -> bool {
    let mut ts = vec![b.clone()];
    for _ in 0..n {
        let next = h.image(ts.last().unwrap());
        ts.push(next);
    }
    if b.is_zero() {
        return false;
    }
    (0..ts.len()).all(|i| (i + 1..ts.len()).all(|j| ts[i].disjoint(&ts[j])))
}

/// `h` with `var(h) ≤ a` and `0 ≠ b ≤ a` such that `b, h(b), …, h^n(b)`
/// are pairwise disjoint; in particular `h^n ≠ Id`.
pub fn commutator_witness_2<H: Homeo>(a: &SetOf<H>, n: usize) -> Result<(H, SetOf<H>)> {
    if a.is_zero() || n == 0 {
        return pre("need a ≠ 0 and n ≥ 1");
    }
    let h = bump_inside::<H>(a);
    let b = dot_witness(&h, &moving_sub(&h, &h.var())?)?;
    commutator_witness_2_from(h, b, 1, n)
}

/// Continue the induction from a state where `b, …, h^m(b)` are pairwise
/// disjoint.
pub fn commutator_witness_2_from<H: Homeo>(
    mut h: H,
    mut b: SetOf<H>,
    m: usize,
    n: usize,
) -> Result<(H, SetOf<H>)> {
    if !translates_disjoint(&h, &b, m) {
        return pre("starting translates not disjoint");
    }
    for k in m..n {
        let hk = h.pow(k as i64 + 1);
        if !b.meet(&hk.var()).is_zero() {
            b = dot_witness(&hk, &moving_sub(&hk, &b)?)?;
        } else {
            let kb = bump_inside::<H>(&b);
            let c = dot_witness(&kb, &moving_sub(&kb, &kb.var())?)?;
            h = kb.compose(&h);
            b = c;
        }
        if !translates_disjoint(&h, &b, k + 1) {
            return Err(Error::Inconclusive(format!("translates overlap at step {}", k + 1)));
        }
    }
    Ok((h, b))
}

/// `h` with `var(h) ≤ a` and `[f^h, g] ≠ Id`; needs
/// `0 ≠ a ≤ var(f) · var(g)`.
pub fn commutator_witness_3<H: Homeo>(f: &H, g: &H, a: &SetOf<H>) -> Result<H> {
    if a.is_zero() || !a.leq(&f.var().meet(&g.var())) {
        return pre("need 0 ≠ a ≤ var(f)·var(g)");
    }
    if !commutator(f, g).is_identity() {
        return Ok(H::identity());
    }
    let b = alloff_witness(&[f.clone(), g.clone()], a)?;
    let fg = f.compose(g);
    let h = if b.meet(&fg.var()).is_zero() {
        commutator_witness_2::<H>(&b, 2)?.0
    } else {
        let b1 = dot_witness(&fg, &moving_sub(&fg, &b.meet(&fg.var()))?)?;
        bump_inside::<H>(&b1)
    };
    if commutator(&f.conj(&h), g).is_identity() {
        return Err(Error::Inconclusive("conjugate still commutes".into()));
    }
    Ok(h)
}

/// `h1, h2` commuting with `f_hat` with `[[g,h1],h2] ≠ Id` commuting with
/// `f_hat`; needs `var(f)·var(f_hat) = 0` and `[g,f] ≠ Id`.
pub fn almost_forward_witness<H: Homeo>(f: &H, f_hat: &H, g: &H) -> Result<(H, H)> {
    if !f.var().disjoint(&f_hat.var()) {
        return pre("var(f) and var(f_hat) meet");
    }
    if commutator(g, f).is_identity() {
        return pre("g commutes with f");
    }
    let a = dot_witness(g, &moving_sub(g, &f.var())?)?;
    let h1 = bump_inside::<H>(&a);
    let b = dot_witness(&h1, &moving_sub(&h1, &h1.var())?)?;
    let h2 = bump_inside::<H>(&b);
    let c = commutator(&commutator(g, &h1), &h2);
    let ok = commutator(&h1, f_hat).is_identity()
        && commutator(&h2, f_hat).is_identity()
        && !c.is_identity()
        && commutator(&c, f_hat).is_identity();
    if !ok {
        return Err(Error::Inconclusive("postcondition failed".into()));
    }
    Ok((h1, h2))
}

/// `g = g1 g2` with `var(g) ≤ a1 + a2` meeting both.
pub fn doubly_dense_witness<H: Homeo>(a1: &SetOf<H>, a2: &SetOf<H>) -> Result<H> {
    if a1.is_zero() || a2.is_zero() {
        return pre("both sets must be nonzero");
    }
    let p2 = a2.bounded_piece();
    let rest = a1.minus(&p2);
    let (p1, p2) = if !rest.is_zero() {
        (rest.bounded_piece(), p2)
    } else {
        let p1 = a1.bounded_piece();
        (p1.clone(), a2.minus(&p1).bounded_piece())
    };
    let g = H::bump(&p1).compose(&H::bump(&p2));
    let v = g.var();
    if !(v.leq(&a1.sum(a2)) && !v.meet(a1).is_zero() && !v.meet(a2).is_zero()) {
        return Err(Error::Inconclusive("double density witness failed".into()));
    }
    Ok(g)
}

/// One direction of the `vle` characterization: every `g` with
/// `var(g) ≤ var(f)` commutes with `f_hat^12` for each `f_hat` whose
/// twelfth power has var disjoint from `var(f)`.
pub fn vle_forward_holds<H: Homeo>(f: &H, g: &H, f_hats: &[H]) -> bool {
    let vf = f.var();
    f_hats
        .iter()
        .map(|fh| fh.pow(12))
        .filter(|p| p.var().disjoint(&vf))
        .all(|p| commutator(g, &p).is_identity())
}

/// For `var(g) ≰ var(f)`: `f_hat` with `var(f_hat)·var(f) = 0`, and `h`,
/// such that `[(f_hat^12)^h, g] ≠ Id`.
pub fn vle_converse_witness<H: Homeo>(f: &H, g: &H) -> Result<(H, H)> {
    let a = g.var().minus(&f.var());
    if a.is_zero() {
        return pre("var(g) ≤ var(f)");
    }
    let (f_hat, _) = commutator_witness_2::<H>(&a, 12)?;
    let p = f_hat.pow(12);
    let a1 = p.var();
    let h = commutator_witness_3(&p, g, &a1)?;
    if commutator(&p.conj(&h), g).is_identity() || !f.var().disjoint(&f_hat.conj(&h).var()) {
        return Err(Error::Inconclusive("converse witness failed".into()));
    }
    Ok((f_hat, h))
}

/// The four poset formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PstFormula {
    Dsjnt,
    Lesum,
    Sumle,
    Cmp,
}

/// A finite family with its order relation precomputed; formulas are
/// evaluated with every bound variable ranging over the family.
pub struct PstModel<S: RoSet> {
    pub elems: Vec<S>,
    leq: Vec<Vec<bool>>,
}

impl<S: RoSet> PstModel<S> {
    pub fn new(elems: Vec<S>) -> Self {
        let leq = elems.iter().map(|u| elems.iter().map(|v| u.leq(v)).collect()).collect();
        PstModel { elems, leq }
    }

    pub fn index(&self, u: &S) -> Result<usize> {
        self.elems.iter().position(|v| v == u).ok_or_else(|| Error::Invalid(format!("{u:?} is not in the family")))
    }

    fn le(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn dsjnt(&self, u: usize, v: usize) -> bool {
        let below: Vec<usize> = (0..self.elems.len()).filter(|&w| self.le(w, u) && self.le(w, v)).collect();
        below.len() <= 1
    }

    pub fn lesum(&self, u: usize, v: usize, w: usize) -> bool {
        (0..self.elems.len()).all(|x| !(self.dsjnt(x, v) && self.dsjnt(x, w)) || self.dsjnt(x, u))
    }

    pub fn sumle(&self, u: usize, v: usize, w: usize) -> bool {
        self.le(u, w) && self.le(v, w)
    }

    pub fn cmp(&self, u: usize, v: usize) -> bool {
        self.dsjnt(u, v) && (0..self.elems.len()).filter(|&w| self.sumle(u, v, w)).count() <= 1
    }

    pub fn eval(&self, f: PstFormula, args: &[S]) -> Result<bool> {
        let ix: Vec<usize> = args.iter().map(|a| self.index(a)).collect::<Result<_>>()?;
        let need = match f {
            PstFormula::Dsjnt | PstFormula::Cmp => 2,
            _ => 3,
        };
        if ix.len() != need {
            return Err(Error::Invalid(format!("{f:?} takes {need} arguments")));
        }
        Ok(match f {
            PstFormula::Dsjnt => self.dsjnt(ix[0], ix[1]),
            PstFormula::Lesum => self.lesum(ix[0], ix[1], ix[2]),
            PstFormula::Sumle => self.sumle(ix[0], ix[1], ix[2]),
            PstFormula::Cmp => self.cmp(ix[0], ix[1]),
        })
    }
}

/// The Boolean-algebra fact each formula stands for.
pub fn pst_semantic<S: RoSet>(f: PstFormula, args: &[S]) -> bool {
    match f {
        PstFormula::Dsjnt => args[0].disjoint(&args[1]),
        PstFormula::Lesum => args[0].leq(&args[1].sum(&args[2])),
        PstFormula::Sumle => args[0].sum(&args[1]).leq(&args[2]),
        PstFormula::Cmp => args[1] == args[0].complement(),
    }
}

/// Evaluate a formula over the family `t`.
pub fn pst_eval<S: RoSet>(f: PstFormula, args: &[S], t: &[S]) -> Result<bool> {
    PstModel::new(t.to_vec()).eval(f, args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordcore::{q, qi, ExtPoint};
    use crate::plgroup::{PLCircle, PLMap};
    use crate::roalg::{RoCirc, RoLin};

    fn l(a: i64, b: i64) -> RoLin {
        RoLin::fin(qi(a), qi(b))
    }

    #[test]
    fn dot_examples() {
        let t = PLMap::translation(qi(1));
        assert_eq!(dot_witness(&t, &l(0, 2)).unwrap(), l(0, 1));
        let grow = PLMap::through(&[(qi(0), qi(0)), (qi(2), qi(4))]).unwrap();
        let a = l(1, 2);
        let b = dot_witness(&grow, &a).unwrap();
        assert!(b.leq(&a) && grow.image(&b).disjoint(&b));
        let bump = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(1)), true).unwrap();
        assert!(dot_witness(&bump, &l(0, 1)).is_err());
    }

    #[test]
    fn alloff_two_bumps() {
        let g1 = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(4)), true).unwrap();
        let g2 = PLMap::bump_on(&ExtPoint::Fin(qi(1)), &ExtPoint::Fin(qi(3)), true).unwrap();
        let a = l(1, 3);
        let b = alloff_witness(&[g1.clone(), g2.clone()], &a).unwrap();
        assert!(!b.is_zero() && b.leq(&a));
        assert!(g1.image(&b).disjoint(&b) && g2.image(&b).disjoint(&b));
        assert!(alloff_witness(&[g2], &l(0, 4)).is_err());
    }

    #[test]
    fn commutator_lemmas_line() {
        let f = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(1)), true).unwrap();
        let g = commutator_witness_1(&f, &l(0, 1)).unwrap();
        assert!(g.var().leq(&l(0, 1)));
        assert!(commutator_witness_1(&f, &l(0, 2)).is_err());
        for n in 1..=6 {
            let (h, b) = commutator_witness_2::<PLMap>(&l(0, 1), n).unwrap();
            assert!(h.var().leq(&l(0, 1)) && translates_disjoint(&h, &b, n));
        }
        let h = commutator_witness_3(&f, &f, &l(0, 1)).unwrap();
        assert!(!commutator(&f.conj(&h), &f).is_identity());
        let f2 = PLMap::bump_on(&ExtPoint::Fin(qi(2)), &ExtPoint::Fin(qi(3)), true).unwrap();
        assert!(commutator_witness_3(&f, &f2, &l(0, 1)).is_err());
    }

    #[test]
    fn commutator_repair_branch_on_circle() {
        let rot = PLCircle::rotation(&q(1, 3));
        let b = RoCirc::arc(&qi(0), &q(1, 4));
        let (g, c) = commutator_witness_2_from(rot.clone(), b.clone(), 1, 3).unwrap();
        assert!(translates_disjoint(&g, &c, 3));
        assert_ne!(g, rot);
    }

    #[test]
    fn almost_and_ddns() {
        let f = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(1)), true).unwrap();
        let fh = PLMap::bump_on(&ExtPoint::Fin(qi(2)), &ExtPoint::Fin(qi(3)), true).unwrap();
        let g = PLMap::bump_on(&ExtPoint::Fin(q(1, 2)), &ExtPoint::Fin(qi(2)), true).unwrap();
        assert!(almost_forward_witness(&f, &fh, &g).is_ok());
        assert!(almost_forward_witness(&f, &PLMap::id(), &g).is_ok());
        assert!(almost_forward_witness(&f, &fh, &f).is_err());
        let g = doubly_dense_witness::<PLMap>(&l(0, 1), &l(2, 3)).unwrap();
        assert_eq!(g.var().pieces().len(), 2);
        assert!(doubly_dense_witness::<PLMap>(&l(0, 1), &l(0, 1)).is_ok());
    }

    #[test]
    fn pst_on_small_algebra() {
        let cells = [
            RoLin::interval(ExtPoint::NegInf, ExtPoint::Fin(qi(0))),
            l(0, 1),
            RoLin::interval(ExtPoint::Fin(qi(1)), ExtPoint::PosInf),
        ];
        let mut t = Vec::new();
        for m in 0..8usize {
            let s = (0..3).filter(|i| m >> i & 1 == 1).fold(RoLin::empty(), |acc, i| acc.sum(&cells[i]));
            t.push(s);
        }
        assert!(pst_eval(PstFormula::Dsjnt, &[cells[0].clone(), cells[2].clone()], &t).unwrap());
        let u = cells[1].clone();
        assert!(pst_eval(PstFormula::Cmp, &[u.clone(), u.complement()], &t).unwrap());
        assert!(!pst_eval(PstFormula::Lesum, &[u.clone(), cells[0].clone(), cells[2].clone()], &t).unwrap());
        assert!(pst_eval(PstFormula::Dsjnt, &[l(5, 6), u], &t).is_err());
    }
}
