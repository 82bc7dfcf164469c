//! Certificates that the automorphism of each gallery example is not
//! induced by any monotone or cyclic point map.

use ordrecon::gallery::certify;
use ordrecon::scenario::GalleryTag;

fn main() -> ordrecon::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    for tag in [GalleryTag::Wrsn, GalleryTag::Wrs2, GalleryTag::Autrz, GalleryTag::Circle1] {
        let c = certify(tag, 100, seed)?;
        println!("{}: passed {}, {} homomorphism pairs", tag.name(), c.passed, c.homomorphism_pairs);
        for e in &c.evidence {
            println!("    {} at {}", e.relation, e.point);
        }
    }
    Ok(())
}
