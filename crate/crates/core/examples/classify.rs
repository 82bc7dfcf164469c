//! Decide which of the four order types each PL scenario realizes.

use ordrecon::scenario::Scenario;
use ordrecon::transit::classify_type;

fn main() -> ordrecon::Result<()> {
    for name in ["thompson-f", "neg-extended", "thompson-t", "reversing-circle"] {
        let r = classify_type(&Scenario::builtin(name)?);
        println!("{name:18} {}", r.result);
        for (sentence, outcome) in &r.sentences {
            println!("    {sentence}: {outcome:?}");
        }
    }
    Ok(())
}
