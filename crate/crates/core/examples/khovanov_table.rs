// Reduced Khovanov homology of a few torus knots, drawn as grids, with the
// graded Euler characteristic checked against the Jones polynomial.

use khconcord::cli::{lookup, Grid};
use khconcord::khovanov::{jones_polynomial, kh_dims, kh_dims_naive};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["trefoil", "figure-eight", "T(3,4)"] {
        let d = lookup(name).ok_or("missing catalog entry")?.diagram();
        let kh = kh_dims(&d)?;
        println!("{name}: {} crossings, total dimension {}", d.crossing_count(), kh.total());
        print!("{}", Grid::new(&kh).to_text());

        // the full cube of resolutions gives the same answer, just slower
        assert_eq!(kh_dims_naive(&d)?, kh);
        assert_eq!(kh.euler_characteristic(), jones_polynomial(&d));
        assert_eq!(kh_dims(&d.mirror())?, kh.mirrored());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
