//! Transitivity checks over a grid, one promotion step by hand, and
//! support adjustment.

use ordrecon::plgroup::GroupSpec;
use ordrecon::scenario::Scenario;
use ordrecon::transit::{self, Property};
use ordrecon::{q, qi, ExtPoint, LinInterval, PLMap};

fn main() -> ordrecon::Result<()> {
    for (name, prop, n) in [("thompson-f", "interval", 3), ("thompson-t", "interval", 3), ("wr1", "interval", 3), ("rational-pl", "exact", 2)] {
        let s = Scenario::builtin(name)?;
        let r = transit::check_property(Property::parse(prop)?, Some(n), &s);
        println!("{name:12} {prop}_{n}: {} over {} instances", r.verdict_name(), r.instances);
    }

    let f = GroupSpec::dyadic("thompson-f", None);
    let iv = |a, b| LinInterval::fin(a, b);
    let is = [iv(qi(0), qi(1))?, iv(qi(2), qi(3))?];
    let js = [iv(qi(0), qi(1))?, iv(q(3, 2), q(7, 4))?];
    let p = PLMap::bump_on(&ExtPoint::Fin(qi(0)), &ExtPoint::Fin(qi(1)), true)?;
    let step = transit::promote_transitivity(&PLMap::id(), &p, &is, &js, &f)?;
    println!("promotion case {:?}: g = {}", step.case, step.g);

    let h = PLMap::bump_on(&ExtPoint::Fin(qi(-4)), &ExtPoint::Fin(qi(4)), true)?;
    let g = transit::adjust_support(&h, &iv(qi(0), qi(1))?, &iv(qi(-1), qi(3))?, &f)?;
    println!("adjusted: {g}");
    Ok(())
}
