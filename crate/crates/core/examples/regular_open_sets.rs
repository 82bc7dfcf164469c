//! Regular open sets on the line and circle: Boolean operations,
//! canonical form, and the segregation and betweenness relations.

use ordrecon::roalg::{bets, crs, seg_circ, seg_lin};
use ordrecon::{q, qi, ExtPoint, RoCirc, RoLin, RoSet};

fn main() {
    // (0,1) ∪ (1,2) closes its puncture
    let u = RoLin::from_raw(vec![(ExtPoint::Fin(qi(0)), ExtPoint::Fin(qi(1))), (ExtPoint::Fin(qi(1)), ExtPoint::Fin(qi(2)))]);
    println!("(0,1)+(1,2) = {u:?}");
    let v = RoLin::fin(q(3, 2), qi(4));
    println!("u + v       = {:?}", u.sum(&v));
    println!("u · v       = {:?}", u.meet(&v));
    println!("-u          = {:?}", u.complement());
    println!("de morgan   : {}", u.sum(&v).complement() == u.complement().meet(&v.complement()));

    let a = RoLin::fin(qi(0), qi(1)).sum(&RoLin::fin(qi(4), qi(5)));
    let b = RoLin::fin(qi(2), qi(3));
    println!("seg_lin(a, b) = {}", seg_lin(&a, &b));
    let c = RoLin::fin(qi(6), qi(7));
    println!("bets((0,1), (2,3), (6,7)) = {}", bets(&RoLin::fin(qi(0), qi(1)), &b, &c));

    let x = RoCirc::arc(&qi(0), &q(1, 4));
    let y = RoCirc::arc(&q(1, 2), &q(3, 4));
    let z = RoCirc::arc(&q(7, 8), &q(1, 8));
    println!("circle: x + y = {:?}", x.sum(&y));
    println!("circle: -x    = {:?}", x.complement());
    println!("crs(x, y)     = {}", crs(&[&x, &y]));
    println!("seg_circ(x+y, z) = {}", seg_circ(&x.sum(&y), &z));
}
