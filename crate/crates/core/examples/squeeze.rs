// The squeeze: a self-map known to be an isomorphism away from a few
// bigradings is forced to be one everywhere when each of those bigradings
// is joined by a Lee differential to a bigrading where it is.

use std::collections::BTreeSet;

use khconcord::concordance::{lee_pairings, t45_khovanov};
use khconcord::diagram::{braid_closure, torus_braid};
use khconcord::lee::lee_pages;
use khconcord::ssengine::{squeeze_check, SqueezeInstance, SqueezeVerdict};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let table = t45_khovanov();
    let pages = lee_pages(&braid_closure(&torus_braid(4, 5)?))?;
    let pairings = lee_pairings(&pages);

    let exceptional = BTreeSet::from([(2, 16), (4, 18), (9, 26)]);
    let instance = SqueezeInstance {
        source: table.clone(),
        target: table.clone(),
        ranks: Default::default(),
        iso_locus: table.support().filter(|b| !exceptional.contains(b)).collect(),
        pairings,
    };
    let outcome = squeeze_check(&instance)?;
    for n in &outcome.notes {
        println!("{:?}: {}", n.at, n.reason);
    }
    assert_eq!(outcome.verdict, SqueezeVerdict::Isomorphism);

    // without the differential leaving (2,16) nothing pins that bigrading down
    let mut weaker = instance.clone();
    weaker.pairings.retain(|a| a.source() != (2, 16));
    let outcome = squeeze_check(&weaker)?;
    println!("{}", serde_json::to_string(&outcome)?);
    assert_eq!(outcome.verdict, SqueezeVerdict::Undetermined { stuck: vec![[2, 16]] });
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
