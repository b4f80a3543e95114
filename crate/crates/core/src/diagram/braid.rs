use std::fmt;

use super::{Crossing, DiagramError, PlanarDiagram};

/// A braid word: `k` stands for the generator crossing strands `k` and
/// `k + 1` positively, `-k` for its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::Braid("a braid needs at least one strand".into()));
        }
        for l in &letters {
            if *l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(DiagramError::Braid(format!(
                    "letter {l} is out of range for {strands} strands"
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    /// Where each starting position ends up after the whole word.
    pub fn permutation(&self) -> Vec<usize> {
        // pos[s] = current position of the strand that started at s
        let mut at: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            for p in at.iter_mut() {
                if *p == i {
                    *p = i + 1;
                } else if *p == i + 1 {
                    *p = i;
                }
            }
        }
        at
    }

    /// Number of components of the closure.
    pub fn cycle_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.letters.iter().map(|x| x.to_string()).collect();
        write!(f, "B[{}; {}]", self.strands, l.join(","))
    }
}

/// `(σ_1 σ_2 … σ_{p-1})^q` on `p` strands.
pub fn torus_braid(p: usize, q: usize) -> Result<BraidWord, DiagramError> {
    if p < 2 || q < 2 {
        return Err(DiagramError::Braid(format!("torus braid needs p, q >= 2, got ({p},{q})")));
    }
    let letters = (0..q).flat_map(|_| 1..p as i64).collect();
    BraidWord::new(p, letters)
}

/// Parses `[l1,l2,...]` (strand count inferred) or `B[s; l1,...]`.
pub fn parse_braid(text: &str) -> Result<BraidWord, DiagramError> {
    let t = text.trim();
    let syntax = |msg: &str| DiagramError::Syntax { pos: 0, msg: msg.into() };
    let (strands, body) = if let Some(rest) = t.strip_prefix("B[") {
        let (s, body) = rest.split_once(';').ok_or_else(|| syntax("expected ';'"))?;
        let s: usize = s.trim().parse().map_err(|_| syntax("bad strand count"))?;
        (Some(s), body.trim().strip_suffix(']').ok_or_else(|| syntax("expected ']'"))?)
    } else {
        let body = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| syntax("braid words look like [1,-2,1]"))?;
        (None, body)
    };
    let letters: Vec<i64> = body
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| syntax(&format!("bad letter '{s}'"))))
        .collect::<Result<_, _>>()?;
    let strands = strands.unwrap_or_else(|| {
        letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(1)
    });
    BraidWord::new(strands, letters)
}

/// Closure of a braid drawn bottom to top with strands oriented upwards.
///
/// Arcs are renumbered `1..=2n` along the orientation, starting at the
/// bottom of strand 1, which carries the basepoint. Strands that never cross
/// become free circles.
pub fn braid_closure(w: &BraidWord) -> PlanarDiagram {
    let s = w.strands;
    let bottom: Vec<u32> = (1..=s as u32).collect();
    let mut current = bottom.clone();
    let mut next = s as u32 + 1;
    let mut crossings = Vec::with_capacity(w.letters.len());
    for l in &w.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (u1, u2) = (current[i], current[i + 1]);
        let (o1, o2) = (next, next + 1);
        next += 2;
        let c = if *l > 0 {
            Crossing { arcs: [u2, o2, o1, u1], sign: 1 }
        } else {
            Crossing { arcs: [u1, u2, o2, o1], sign: -1 }
        };
        crossings.push(c);
        current[i] = o1;
        current[i + 1] = o2;
    }
    // The top of each position is glued to its bottom.
    let rename = |a: u32| -> u32 {
        match current.iter().position(|x| *x == a) {
            Some(p) if a > s as u32 => bottom[p],
            _ => a,
        }
    };
    for c in crossings.iter_mut() {
        c.arcs = c.arcs.map(rename);
    }
    let free: Vec<u32> = (0..s).filter(|p| current[*p] == bottom[*p]).map(|p| bottom[p]).collect();
    PlanarDiagram::from_crossings(crossings, free, Some(1))
        .expect("braid closures are valid diagrams")
        .relabeled()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Basepoint;
    use proptest::prelude::*;

    #[test]
    fn torus_words() {
        assert_eq!(torus_braid(2, 3).unwrap().letters(), &[1, 1, 1]);
        let t = torus_braid(4, 5).unwrap();
        assert_eq!(t.letters().len(), 15);
        assert_eq!(t.cycle_count(), 1);
        assert!(torus_braid(1, 3).is_err());
        assert!(torus_braid(3, 1).is_err());
    }

    #[test]
    fn closures() {
        let t = braid_closure(&torus_braid(2, 3).unwrap());
        assert_eq!((t.crossing_count(), t.component_count(), t.writhe()), (3, 1, 3));
        assert_eq!(t.basepoint(), Basepoint::Arc(1));

        let u = braid_closure(&BraidWord::new(3, vec![]).unwrap());
        assert_eq!((u.crossing_count(), u.component_count()), (0, 3));

        let t45 = braid_closure(&torus_braid(4, 5).unwrap());
        assert_eq!((t45.crossing_count(), t45.component_count(), t45.writhe()), (15, 1, 15));
        assert_eq!(t45.mirror().writhe(), -15);
    }

    #[test]
    fn figure_eight_closure() {
        let d = braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2]).unwrap());
        assert_eq!((d.crossing_count(), d.component_count(), d.writhe()), (4, 1, 0));
    }

    #[test]
    fn parse_words() {
        assert_eq!(parse_braid("[1,1,1]").unwrap(), torus_braid(2, 3).unwrap());
        assert_eq!(parse_braid("B[3; 1,-2]").unwrap().strands(), 3);
        assert!(parse_braid("[1,0]").is_err());
    }

    proptest! {
        #[test]
        fn components_match_permutation_cycles(
            strands in 1usize..6,
            raw in proptest::collection::vec((1i64..6, any::<bool>()), 0..12),
        ) {
            let letters: Vec<i64> = raw
                .iter()
                .filter(|(l, _)| (*l as usize) < strands)
                .map(|(l, s)| if *s { *l } else { -*l })
                .collect();
            let w = BraidWord::new(strands, letters).unwrap();
            let d = braid_closure(&w);
            prop_assert_eq!(d.component_count(), w.cycle_count());
            prop_assert_eq!(d.crossing_count(), w.letters().len());
            prop_assert_eq!(d.mirror().mirror(), d.clone());
            for a in d.arcs() {
                let n = d.crossings().iter().flat_map(|c| c.arcs).filter(|x| *x == a).count();
                prop_assert_eq!(n, 2);
            }
        }
    }
}
