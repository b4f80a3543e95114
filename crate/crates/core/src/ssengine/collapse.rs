use serde::{Deserialize, Serialize};

use crate::exactalg::{BigradedDims, Bigrading};

/// One differential of a hypothetical collapse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub rank: usize,
}

impl Arrow {
    pub fn source(&self) -> Bigrading {
        (self.from[0], self.from[1])
    }

    pub fn target(&self) -> Bigrading {
        (self.to[0], self.to[1])
    }
}

/// A set of differentials on a page together with what survives them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapsePattern {
    pub differentials: Vec<Arrow>,
    pub einf: BigradedDims,
}

/// Constraints on a collapse. Also the format of the constraint file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseConstraints {
    #[serde(default = "one")]
    pub version: u32,
    /// Number of non-zero differentials.
    pub count: usize,
    /// Rank of each of them.
    pub rank: usize,
    /// Allowed (source, target) pairs. `None` allows any pair along which
    /// the homological degree goes up.
    #[serde(default)]
    pub candidates: Option<Vec<[[i64; 2]; 2]>>,
    /// Allowed `(Δi, Δj)`, applied on top of the candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegrees: Option<Vec<[i64; 2]>>,
    /// Required total dimension of what survives.
    #[serde(default)]
    pub einf_total: Option<usize>,
}

fn one() -> u32 {
    1
}

impl CollapseConstraints {
    pub fn new(count: usize, rank: usize) -> Self {
        CollapseConstraints { version: 1, count, rank, candidates: None, bidegrees: None, einf_total: None }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("constraints serialize")
    }

    fn allows(&self, s: Bigrading, t: Bigrading) -> bool {
        let listed = match &self.candidates {
            Some(c) => c.iter().any(|[a, b]| (a[0], a[1]) == s && (b[0], b[1]) == t),
            None => t.0 > s.0,
        };
        listed
            && self
                .bidegrees
                .as_ref()
                .is_none_or(|bs| bs.iter().any(|d| [t.0 - s.0, t.1 - s.1] == *d))
    }
}

/// Every way to place `count` distinct differentials of the given rank on
/// `e2` that the constraints allow, without using any bigrading more often
/// than its dimension. Sorted by source, then target.
pub fn enumerate_collapses(e2: &BigradedDims, c: &CollapseConstraints) -> Vec<CollapsePattern> {
    let support: Vec<Bigrading> = e2.support().collect();
    let mut pairs = Vec::new();
    if c.rank > 0 {
        for &s in &support {
            for &t in &support {
                if s != t && c.allows(s, t) && e2.get(s) >= c.rank && e2.get(t) >= c.rank {
                    pairs.push((s, t));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut left = e2.clone();
    pick(&pairs, 0, c, &mut chosen, &mut left, &mut out);
    out
}

fn pick(
    pairs: &[(Bigrading, Bigrading)],
    from: usize,
    c: &CollapseConstraints,
    chosen: &mut Vec<usize>,
    left: &mut BigradedDims,
    out: &mut Vec<CollapsePattern>,
) {
    if chosen.len() == c.count {
        if c.einf_total.is_none_or(|n| n == left.total()) {
            let differentials = chosen
                .iter()
                .map(|&k| {
                    let (s, t) = pairs[k];
                    Arrow { from: [s.0, s.1], to: [t.0, t.1], rank: c.rank }
                })
                .collect();
            out.push(CollapsePattern { differentials, einf: left.clone() });
        }
        return;
    }
    for k in from..pairs.len() {
        let (s, t) = pairs[k];
        if left.get(s) < c.rank || left.get(t) < c.rank {
            continue;
        }
        left.sub(s, c.rank);
        left.sub(t, c.rank);
        chosen.push(k);
        pick(pairs, k + 1, c, chosen, left, out);
        chosen.pop();
        left.add(s, c.rank);
        left.add(t, c.rank);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t45() -> BigradedDims {
        BigradedDims::ones([(0, 12), (2, 16), (3, 18), (4, 18), (5, 22), (6, 20), (7, 24), (8, 24), (9, 26)])
    }

    #[test]
    fn nothing_to_do() {
        let mut c = CollapseConstraints::new(0, 1);
        c.einf_total = Some(1);
        let p = enumerate_collapses(&BigradedDims::ones([(0, 0)]), &c);
        assert_eq!(p.len(), 1);
        assert!(p[0].differentials.is_empty());
    }

    #[test]
    fn single_arrow_on_the_nine_classes() {
        let mut c = CollapseConstraints::new(1, 1);
        c.einf_total = Some(7);
        let all = enumerate_collapses(&t45(), &c);
        // any two of nine classes in distinct homological degrees
        let brute = t45()
            .support()
            .flat_map(|s| t45().support().filter(move |t| t.0 > s.0).collect::<Vec<_>>())
            .count();
        assert_eq!(brute, 36);
        assert_eq!(all.len(), 36);
        let sources: Vec<_> = all.iter().map(|p| (p.differentials[0].source(), p.differentials[0].target())).collect();
        let mut sorted = sources.clone();
        sorted.sort();
        assert_eq!(sources, sorted);

        c.candidates = Some(vec![[[2, 16], [9, 26]], [[4, 18], [9, 26]]]);
        let two = enumerate_collapses(&t45(), &c);
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].differentials[0].source(), (2, 16));
        assert_eq!(two[1].differentials[0].source(), (4, 18));
        assert_eq!(two[0].einf.get((9, 26)), 0);
        assert_eq!(two[0].einf.get((4, 18)), 1);
    }

    #[test]
    fn bidegree_filter() {
        let mut c = CollapseConstraints::new(1, 1);
        c.bidegrees = Some(vec![[1, 2]]);
        let p = enumerate_collapses(&t45(), &c);
        let got: Vec<_> = p.iter().map(|p| p.differentials[0].source()).collect();
        assert_eq!(got, vec![(2, 16), (8, 24)]);
    }

    #[test]
    fn constraint_file() {
        let c = CollapseConstraints::from_json(
            r#"{"count":1,"rank":1,"candidates":[[[2,16],[9,26]]],"einf_total":7}"#,
        )
        .unwrap();
        assert_eq!(c.version, 1);
        assert_eq!(CollapseConstraints::from_json(&c.to_json()).unwrap(), c);
        let c = CollapseConstraints::from_json(r#"{"count":0,"rank":1,"candidates":null,"einf_total":9}"#).unwrap();
        assert_eq!(enumerate_collapses(&t45(), &c).len(), 1);
    }

    #[test]
    fn over_consumption_is_excluded() {
        // one class at (1,0) cannot absorb two arrows
        let e2 = BigradedDims::ones([(0, 0), (0, 2), (1, 0)]);
        let c = CollapseConstraints::new(2, 1);
        assert!(enumerate_collapses(&e2, &c).is_empty());
        let e2 = BigradedDims::from_entries([((0, 0), 1), ((0, 2), 1), ((1, 0), 2)]);
        assert_eq!(enumerate_collapses(&e2, &c).len(), 1);
    }

    fn dims() -> impl Strategy<Value = BigradedDims> {
        prop::collection::vec(((0i64..4, -2i64..3), 1usize..3), 0..6)
            .prop_map(|v| BigradedDims::from_entries(v.into_iter().map(|((i, j), n)| ((i, 2 * j), n))))
    }

    proptest! {
        #[test]
        fn survivors_add_up(e2 in dims(), count in 0usize..3, rank in 1usize..3) {
            let c = CollapseConstraints::new(count, rank);
            for p in enumerate_collapses(&e2, &c) {
                let used: usize = p.differentials.iter().map(|a| a.rank).sum();
                prop_assert_eq!(p.einf.total() + 2 * used, e2.total());
                let mut left = e2.clone();
                for a in &p.differentials {
                    prop_assert!(a.rank <= left.get(a.source()).min(left.get(a.target())));
                    left.sub(a.source(), a.rank);
                    left.sub(a.target(), a.rank);
                }
                prop_assert_eq!(&left, &p.einf);
            }
        }
    }
}
