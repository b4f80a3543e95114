// Pages of the Lee spectral sequence and the s-invariant.

use khconcord::diagram::{braid_closure, parse_braid, torus_braid};
use khconcord::lee::{lee_pages, s_from_pages};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t35 = braid_closure(&torus_braid(3, 5)?);
    let pages = lee_pages(&t35)?;
    for p in &pages {
        println!("page {}: total dimension {}", p.r, p.dims.total());
        for d in &p.differentials {
            println!("  ({},{}) -> ({},{})", d.from[0], d.from[1], d.to[0], d.to[1]);
        }
    }
    let s = s_from_pages(&pages)?;
    println!("s(T(3,5)) = {s}");
    // positive torus knots have s = (p-1)(q-1)
    assert_eq!(s, 8);

    let fig8 = braid_closure(&parse_braid("[1,-2,1,-2]")?);
    assert_eq!(s_from_pages(&lee_pages(&fig8)?)?, 0);
    let last = pages.last().ok_or("no pages")?;
    assert_eq!(last.dims.iter().collect::<Vec<_>>(), vec![((0, 8), 1)]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
