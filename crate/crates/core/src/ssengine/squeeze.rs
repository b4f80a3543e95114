use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Arrow, SsError};
use crate::exactalg::{BigradedDims, Bigrading};

/// A self-map of a bigraded space known to be an isomorphism on part of its
/// support, plus rank-1 differentials of a spectral sequence the map
/// commutes with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqueezeInstance {
    pub source: BigradedDims,
    pub target: BigradedDims,
    /// Ranks of the map, where known. Only reported.
    #[serde(skip)]
    pub ranks: BTreeMap<Bigrading, usize>,
    /// Where the map is already known to be an isomorphism.
    pub iso_locus: BTreeSet<Bigrading>,
    pub pairings: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum SqueezeVerdict {
    Isomorphism,
    Undetermined { stuck: Vec<[i64; 2]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqueezeNote {
    pub at: [i64; 2],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqueezeOutcome {
    #[serde(flatten)]
    pub verdict: SqueezeVerdict,
    pub notes: Vec<SqueezeNote>,
}

impl SqueezeOutcome {
    pub fn is_isomorphism(&self) -> bool {
        self.verdict == SqueezeVerdict::Isomorphism
    }
}

/// Decides whether the map is an isomorphism everywhere.
///
/// A bigrading outside the iso locus is settled when it is one-dimensional
/// and a rank-1 differential joins it to a one-dimensional bigrading inside
/// the locus: the differential is an isomorphism between the two lines and
/// the map commutes with it, so the map is non-zero on one line exactly when
/// it is non-zero on the other.
pub fn squeeze_check(s: &SqueezeInstance) -> Result<SqueezeOutcome, SsError> {
    if s.source != s.target {
        return Err(SsError::Malformed("source and target dimensions differ".into()));
    }
    let dims = &s.source;
    for b in &s.iso_locus {
        if dims.get(*b) == 0 {
            return Err(SsError::Malformed(format!("iso locus point {b:?} is outside the support")));
        }
    }
    for a in &s.pairings {
        if a.to[0] != a.from[0] + 1 {
            return Err(SsError::Malformed(format!("pairing {a:?} is not of homological degree 1")));
        }
        if a.rank != 1 {
            return Err(SsError::Malformed(format!("pairing {a:?} does not have rank 1")));
        }
        if dims.get(a.source()) == 0 || dims.get(a.target()) == 0 {
            return Err(SsError::Malformed(format!("pairing {a:?} leaves the support")));
        }
    }
    let mut notes = Vec::new();
    let mut stuck = Vec::new();
    let rank_note = |b: Bigrading| s.ranks.get(&b).map(|r| format!(" (rank {r})")).unwrap_or_default();
    for (b, n) in dims.iter() {
        let at = [b.0, b.1];
        if s.iso_locus.contains(&b) {
            notes.push(SqueezeNote { at, reason: format!("isomorphism by assumption{}", rank_note(b)) });
            continue;
        }
        let partner = s.pairings.iter().find_map(|a| {
            let other = if a.source() == b {
                a.target()
            } else if a.target() == b {
                a.source()
            } else {
                return None;
            };
            (s.iso_locus.contains(&other) && dims.get(other) == 1).then_some(other)
        });
        match partner {
            Some(o) if n == 1 => notes.push(SqueezeNote {
                at,
                reason: format!("paired with ({},{}) where the map is an isomorphism", o.0, o.1),
            }),
            Some(_) => {
                stuck.push(at);
                notes.push(SqueezeNote { at, reason: format!("dimension {n} is more than 1") });
            }
            None => {
                stuck.push(at);
                notes.push(SqueezeNote {
                    at,
                    reason: "no differential joins it to a line where the map is known".into(),
                });
            }
        }
    }
    let verdict = if stuck.is_empty() { SqueezeVerdict::Isomorphism } else { SqueezeVerdict::Undetermined { stuck } };
    Ok(SqueezeOutcome { verdict, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t45() -> BigradedDims {
        BigradedDims::ones([(0, 12), (2, 16), (3, 18), (4, 18), (5, 22), (6, 20), (7, 24), (8, 24), (9, 26)])
    }

    fn arrows() -> Vec<Arrow> {
        [((2, 16), (3, 18)), ((4, 18), (5, 22)), ((6, 20), (7, 24)), ((8, 24), (9, 26))]
            .into_iter()
            .map(|(s, t)| Arrow { from: [s.0, s.1], to: [t.0, t.1], rank: 1 })
            .collect()
    }

    fn instance(excluded: &[Bigrading], pairings: Vec<Arrow>) -> SqueezeInstance {
        SqueezeInstance {
            source: t45(),
            target: t45(),
            ranks: BTreeMap::new(),
            iso_locus: t45().support().filter(|b| !excluded.contains(b)).collect(),
            pairings,
        }
    }

    #[test]
    fn full_locus() {
        let o = squeeze_check(&instance(&[], vec![])).unwrap();
        assert!(o.is_isomorphism());
        assert_eq!(o.notes.len(), 9);
    }

    #[test]
    fn three_exceptions_are_squeezed() {
        let ex = [(2, 16), (4, 18), (9, 26)];
        assert!(squeeze_check(&instance(&ex, arrows())).unwrap().is_isomorphism());
        // each arrow touching an exception is needed
        for drop in [0, 1, 3] {
            let mut a = arrows();
            let gone = a.remove(drop);
            let o = squeeze_check(&instance(&ex, a)).unwrap();
            let stuck = match o.verdict {
                SqueezeVerdict::Undetermined { stuck } => stuck,
                v => panic!("{v:?}"),
            };
            let lost = if ex.contains(&gone.source()) { gone.from } else { gone.to };
            assert_eq!(stuck, vec![lost]);
        }
        let mut a = arrows();
        a.remove(2);
        assert!(squeeze_check(&instance(&ex, a)).unwrap().is_isomorphism());
    }

    #[test]
    fn unpaired_exception() {
        let o = squeeze_check(&instance(&[(0, 12)], arrows())).unwrap();
        assert_eq!(o.verdict, SqueezeVerdict::Undetermined { stuck: vec![[0, 12]] });
    }

    #[test]
    fn two_dimensional_spaces_are_never_squeezed() {
        let d = BigradedDims::from_entries([((0, 0), 2), ((1, 2), 2)]);
        let s = SqueezeInstance {
            source: d.clone(),
            target: d,
            ranks: BTreeMap::new(),
            iso_locus: [(1, 2)].into(),
            pairings: vec![Arrow { from: [0, 0], to: [1, 2], rank: 1 }],
        };
        assert!(!squeeze_check(&s).unwrap().is_isomorphism());
    }

    #[test]
    fn malformed() {
        let bad = vec![Arrow { from: [2, 16], to: [4, 18], rank: 1 }];
        assert!(squeeze_check(&instance(&[], bad)).is_err());
        let mut s = instance(&[], vec![]);
        s.target = BigradedDims::new();
        assert!(squeeze_check(&s).is_err());
    }

    proptest! {
        #[test]
        fn enlarging_the_locus_keeps_isomorphism(
            ex in prop::sample::subsequence(vec![(2, 16), (4, 18), (9, 26), (5, 22), (0, 12)], 0..5),
            extra in prop::sample::subsequence(vec![(2, 16), (4, 18), (9, 26), (5, 22), (0, 12)], 0..5),
        ) {
            let small = instance(&ex, arrows());
            let mut big = small.clone();
            big.iso_locus.extend(extra);
            if squeeze_check(&small).unwrap().is_isomorphism() {
                prop_assert!(squeeze_check(&big).unwrap().is_isomorphism());
            }
        }
    }
}
