// Maps induced on homology by movies.
//
// A movie is a starting diagram followed by one elementary move per line.
// Arcs and crossings are named the way `PlanarDiagram::to_pd_string` prints
// them.

use khconcord::cli::resolve;
use khconcord::cobordism::{Evaluator, Movie};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut ev = Evaluator::khovanov();

    // a small circle appears next to the trefoil and is capped off at once:
    // this is a sphere, and the map is zero
    let cap = Movie::parse_with("START trefoil\nBIRTH 100\nDEATH 100", resolve)?;
    let f = ev.kh_map(&cap)?;
    println!("birth then death: total rank {}", f.total_rank());
    assert_eq!(f.total_rank(), 0);

    // the same circle, but tubed to the knot on the way
    let tube = Movie::parse_with("START trefoil\nBIRTH 100\nSADDLE 1 100\nSADDLE 1 100\nDEATH 100", resolve)?;
    let f = ev.kh_map(&tube)?;
    println!("tube: bidegree {:?}, ranks {:?}", f.bidegree(), f.ranks());
    assert!(f.is_isomorphism());

    // a kink added and removed again
    let kink = Movie::parse_with("START trefoil\nR1 1 + L", resolve)?;
    let both = kink.compose(&kink.reverse())?;
    let f = ev.kh_map(&both)?;
    println!("{}", f.report().to_json());
    assert!(f.is_isomorphism());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
