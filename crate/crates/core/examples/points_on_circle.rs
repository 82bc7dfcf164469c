//! Points of the circle named by triples of arcs: the x point, the
//! interval I_U, and the grid decisions for equality and separation.

use ordrecon::interpcirc::{self, CircInterp};

fn main() -> ordrecon::Result<()> {
    let reps = interpcirc::reps_from(&interpcirc::stock_arcs());
    let mut t = CircInterp::grid(16)?;
    println!("{} positive representatives", reps.len());
    for r in reps.iter().take(4) {
        let i = interpcirc::i_interval(r)?;
        println!("  x = {}, I_U = ({}, {})", interpcirc::x_point(r)?, i.start, i.end);
    }
    let ms: Vec<_> = reps.iter().map(|r| t.to_mrep(r)).collect::<ordrecon::Result<_>>()?;
    println!("eqp(r0, r1) = {}", t.eqp(&ms[0], &ms[1]));
    let quad = [ms[0], ms[5], ms[10], ms[15]];
    println!("sep_ep(r0, r5, r10, r15) = {}", t.sep_ep(&quad));
    Ok(())
}
