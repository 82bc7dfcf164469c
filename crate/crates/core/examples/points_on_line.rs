//! Points of the line named by pairs of supports: the stock family, pt,
//! equality and betweenness read off the finite algebra, and the
//! segregation formula with its crossing witness.

use ordrecon::interplin::{self, LinFamily, SegVerdict};
use ordrecon::plgroup::GroupSpec;
use ordrecon::{qi, RoLin, RoSet};

fn main() -> ordrecon::Result<()> {
    let t = LinFamily::cells(&interplin::stock_grid())?;
    let reps = interplin::reps_from(&interplin::stock_vars());
    println!("{} representatives over a {}-element algebra", reps.len(), t.len());
    for r in reps.iter().take(6) {
        println!("  {:?} names {}", r, interplin::pt(r));
    }
    let (a, b, c) = (&reps[0], &reps[1], &reps[2]);
    println!("eqp(r0, r1) = {}, bet_ep(r0, r1, r2) = {}", t.eqp(a, b), t.bet_ep(a, b, c));

    let f = GroupSpec::dyadic("thompson-f", None);
    let u = RoLin::fin(qi(0), qi(1)).sum(&RoLin::fin(qi(2), qi(3)));
    let v = RoLin::fin(qi(1), qi(2));
    match interplin::seg_formula_lin(&u, &v, &f)? {
        SegVerdict::Segregated => println!("segregated"),
        SegVerdict::Crossed(g) => println!("crossed by {g}"),
    }
    Ok(())
}
