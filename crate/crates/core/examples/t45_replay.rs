// Checking that a self-concordance of T(4,5) induces an isomorphism on
// Khovanov homology, stage by stage.

use khconcord::cobordism::Movie;
use khconcord::cli::resolve;
use khconcord::concordance::{t45_replay, Verdict};
use khconcord::ssengine::CollapseConstraints;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let constraints = CollapseConstraints::from_json(include_str!("../data/t45_constraints.json"))?;
    let m = Movie::parse_with(include_str!("../tests/fixtures/t45_tube.mov"), resolve)?;
    let r = t45_replay(&m, &constraints)?;
    for line in &r.narrative {
        println!("{line}");
    }
    assert_eq!(r.verdict, Verdict::IsomorphismCertified);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
