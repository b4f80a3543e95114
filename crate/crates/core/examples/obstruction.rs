// Necessary conditions for a ribbon concordance between two knots.

use khconcord::cli::resolve;
use khconcord::concordance::{dominance_check, Verdict};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [("unknot", "trefoil"), ("trefoil", "T(2,5)"), ("figure-eight", "figure-eight")] {
        let r = dominance_check(&resolve(a)?, &resolve(b)?)?;
        println!("{a} <= {b}: {:?}", r.verdict);
        for line in &r.narrative {
            println!("  {line}");
        }
    }
    let r = dominance_check(&resolve("trefoil")?, &resolve("left-trefoil")?)?;
    assert_eq!(r.verdict, Verdict::Obstructed);
    println!("{}", r.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
