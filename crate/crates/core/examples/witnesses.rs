//! Witness constructions for locally moving groups, each followed by a
//! check of its postcondition.

use ordrecon::locmove::{
    almost_forward_witness, alloff_witness, commutator_witness_1, commutator_witness_2, commutator_witness_3, dot_witness,
    doubly_dense_witness, moving_sub, pst_eval, PstFormula,
};
use ordrecon::plgroup::commutator;
use ordrecon::{q, qi, ExtPoint, Homeo, PLMap, RoLin, RoSet};

fn main() -> ordrecon::Result<()> {
    let f = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(4)), true)?;
    let g = PLMap::bump_on(&ExtPoint::Fin(qi(2)), &ExtPoint::Fin(qi(6)), false)?;
    let a = RoLin::fin(qi(1), qi(3));

    let b = dot_witness(&f, &moving_sub(&f, &a)?)?;
    println!("dot:        b = {b:?}, f(b)·b = 0: {}", f.image(&b).disjoint(&b));

    let b = alloff_witness(&[f.clone(), g.clone()], &RoLin::fin(qi(2), qi(4)))?;
    println!("alloff:     b = {b:?}");

    let k = commutator_witness_1(&f, &a)?;
    println!("comm(1):    [k,f] ≠ id: {}", !commutator(&k, &f).is_identity());

    let (h, b) = commutator_witness_2::<PLMap>(&a, 5)?;
    println!("comm(2):    b = {b:?}, h^5 ≠ id: {}", !h.pow(5).is_identity());

    let f2 = f.pow(2);
    let h = commutator_witness_3(&f, &f2, &a)?;
    println!("comm(3):    [f^h, f²] ≠ id: {}", !commutator(&f.conj(&h), &f2).is_identity());

    let f_hat = PLMap::bump_on(&ExtPoint::Fin(qi(10)), &ExtPoint::Fin(qi(11)), true)?;
    let (h1, h2) = almost_forward_witness(&f, &f_hat, &g)?;
    println!("almost:     [[g,h1],h2] = {}", commutator(&commutator(&g, &h1), &h2));

    let d = doubly_dense_witness::<PLMap>(&RoLin::fin(qi(0), qi(1)), &RoLin::fin(q(1, 2), qi(3)))?;
    println!("doubly:     var = {:?}", d.var());

    let t = vec![RoLin::empty(), RoLin::fin(qi(0), qi(1)), RoLin::fin(qi(0), qi(1)).complement(), RoLin::whole()];
    println!("pst:        Cmp((0,1), -(0,1)) = {}", pst_eval(PstFormula::Cmp, &[t[1].clone(), t[2].clone()], &t)?);
    Ok(())
}
