//! Write every built-in scenario, and the shipped conjugation
//! isomorphisms, as JSON files under a directory (default `scenarios`).

use std::fs;
use std::path::Path;

use ordrecon::reconstruct::shipped_isos;
use ordrecon::scenario::Scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "scenarios".into());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir.join("iso"))?;
    for name in Scenario::BUILTINS {
        let s = Scenario::builtin(name)?;
        fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(&s.to_json())? + "\n")?;
        if let Some(g) = s.pl() {
            if name == "thompson-f" || name == "thompson-t" {
                for iso in shipped_isos(g, s.space)? {
                    let file = dir.join("iso").join(format!("{name}-{}.json", iso.name));
                    fs::write(&file, serde_json::to_string_pretty(&iso.to_json())? + "\n")?;
                }
            }
        }
    }
    println!("wrote scenarios to {}", dir.display());
    Ok(())
}
