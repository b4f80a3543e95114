use std::collections::BTreeMap;

use crate::diagram::PlanarDiagram;

/// Laurent polynomial with integer coefficients, exponent -> coefficient.
pub type Laurent = BTreeMap<i64, i64>;

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn loops(d: &PlanarDiagram, state: u32) -> usize {
    // Walk the smoothed diagram slot by slot.
    let n = d.crossing_count();
    let mut seen = vec![[false; 4]; n];
    let mut count = 0;
    for k in 0..n {
        for p in 0..4 {
            if seen[k][p] {
                continue;
            }
            count += 1;
            let mut s = (k, p);
            while !seen[s.0][s.1] {
                seen[s.0][s.1] = true;
                let a = d.arc_at(s);
                let e = d.arc_ends(a).unwrap();
                let o = if e.tail == s { e.head } else { e.tail };
                seen[o.0][o.1] = true;
                let q = if state >> o.0 & 1 == 0 {
                    [1, 0, 3, 2][o.1]
                } else {
                    [3, 2, 1, 0][o.1]
                };
                s = (o.0, q);
            }
        }
    }
    count + d.free_circles().len()
}

/// Kauffman bracket `<D>` as a Laurent polynomial in `A`.
pub fn kauffman_bracket(d: &PlanarDiagram) -> Laurent {
    let n = d.crossing_count();
    let delta: Laurent = [(2, -1), (-2, -1)].into_iter().collect();
    let mut powers = vec![Laurent::from([(0, 1)])];
    let mut out = Laurent::new();
    for state in 0..(1u32 << n) {
        let b = state.count_ones() as i64;
        let a = n as i64 - b;
        let l = loops(d, state);
        while powers.len() < l {
            let next = mul(powers.last().unwrap(), &delta);
            powers.push(next);
        }
        for (e, c) in &powers[l - 1] {
            *out.entry(e + a - b).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Jones polynomial in `q`, normalized to 1 on the unknot, with `t = q^2`.
///
/// With this variable it equals the graded Euler characteristic
/// `Σ (-1)^i q^j dim` of reduced Khovanov homology.
pub fn jones_polynomial(d: &PlanarDiagram) -> Laurent {
    let w = d.writhe();
    let bracket = kauffman_bracket(d);
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    // f(A) = (-A^3)^{-w} <D>, then A^m = q^{-m/2}
    let mut out = Laurent::new();
    for (e, c) in bracket {
        let m = e - 3 * w;
        debug_assert!(m % 2 == 0);
        *out.entry(-m / 2).or_insert(0) += sign * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_pd, torus_braid, BraidWord};

    #[test]
    fn unknot_is_one() {
        assert_eq!(jones_polynomial(&parse_pd("U").unwrap()), Laurent::from([(0, 1)]));
    }

    #[test]
    fn right_trefoil() {
        let t = braid_closure(&torus_braid(2, 3).unwrap());
        assert_eq!(jones_polynomial(&t), Laurent::from([(2, 1), (6, 1), (8, -1)]));
        assert_eq!(jones_polynomial(&t.mirror()), Laurent::from([(-2, 1), (-6, 1), (-8, -1)]));
    }

    #[test]
    fn figure_eight_is_symmetric() {
        let d = braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2]).unwrap());
        // t^2 - t + 1 - t^-1 + t^-2
        assert_eq!(
            jones_polynomial(&d),
            Laurent::from([(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)])
        );
    }

    #[test]
    fn kinked_unknot() {
        let d = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(jones_polynomial(&d), Laurent::from([(0, 1)]));
    }
}
