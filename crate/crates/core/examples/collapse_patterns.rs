// Enumerating the ways a spectral sequence starting at Khovanov homology
// could collapse, given constraints on its differentials.

use khconcord::concordance::t45_khovanov;
use khconcord::ssengine::{enumerate_collapses, CollapseConstraints};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e2 = t45_khovanov();

    // one rank-1 differential, restricted to two candidate arrows
    let constraints = CollapseConstraints::from_json(include_str!("../data/t45_constraints.json"))?;
    let patterns = enumerate_collapses(&e2, &constraints);
    for p in &patterns {
        let a = &p.differentials[0];
        println!("{:?} -> {:?}, leaving dimension {}", a.from, a.to, p.einf.total());
    }
    assert_eq!(patterns.len(), 2);

    // without the candidate list, any arrow raising i will do
    let mut open = CollapseConstraints::new(1, 1);
    open.einf_total = Some(7);
    let all = enumerate_collapses(&e2, &open);
    println!("{} patterns without candidates", all.len());
    assert_eq!(all.len(), 36);

    // a bidegree filter keeps only arrows of the given shape
    open.bidegrees = Some(vec![[1, 2]]);
    let shaped = enumerate_collapses(&e2, &open);
    assert_eq!(shaped.len(), 2);
    println!("{}", open.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
