//! Supports of PL homeomorphisms: var, conjugation, products and bounded
//! commutators.

use ordrecon::plgroup::commutator;
use ordrecon::{q, qi, ExtPoint, Homeo, PLCircle, PLMap, RoSet};

fn main() -> ordrecon::Result<()> {
    let f = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(2)), true)?;
    let h = PLMap::translation(qi(5));
    println!("f        = {f}");
    println!("var f    = {:?}", f.var());
    println!("var f^h  = {:?}   h(var f) = {:?}", f.conj(&h).var(), h.image(&f.var()));

    let g = PLMap::bump_on(&ExtPoint::Fin(qi(1)), &ExtPoint::Fin(qi(3)), false)?;
    println!("var fg   = {:?}  ≤ var f + var g = {:?}", f.compose(&g).var(), f.var().sum(&g.var()));

    // h moves (0,2) off itself, so [h p h⁻¹, p] is a bounded non-identity
    let k = commutator(&h, &f);
    println!("[h,f]    = {k}");
    println!("bounded  : {}, identity: {}", k.is_bounded(), k.is_identity());

    let r = PLCircle::bump_arc(&q(1, 8), &q(5, 8), true);
    println!("circle bump var = {:?}", r.var());
    println!("rotated         = {:?}", r.conj(&PLCircle::rotation(&q(1, 4))).var());
    Ok(())
}
