//! Recover the point map inducing a conjugation isomorphism, then show a
//! mutated generator image being rejected.

use ordrecon::plgroup::Elem;
use ordrecon::reconstruct::{self, IsoSpec, Word};
use ordrecon::scenario::{Scenario, Space};
use ordrecon::{q, Homeo, PLMap};

fn main() -> ordrecon::Result<()> {
    let s = Scenario::builtin("thompson-f")?;
    let g = s.pl().expect("PL scenario");
    let t0 = PLMap::negation().compose(&PLMap::translation(q(1, 2)));
    let iso = IsoSpec::conjugation("flip", g, Elem::Line(t0))?;
    let report = reconstruct::reconstruct(&iso, Space::Line, 12)?;
    println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());

    let bad = iso.mutate(1, &Word::parse("g1*g0")?);
    let r = reconstruct::reconstruct(&bad, Space::Line, 12)?;
    println!("mutated iso passes: {}", r.passed());
    Ok(())
}
