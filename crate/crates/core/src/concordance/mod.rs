//! Obstructions to ribbon concordance from Khovanov homology, and a
//! step-by-step check that self-concordances of T(4,5) induce isomorphisms.

mod replay;
mod report;

pub use replay::{exceptional_bigradings, lee_pairings, t45_khovanov, t45_replay, t45_replay_with, ReplayContext};
pub use report::{rank_report, ObstructionReport, Verdict, Witness, WitnessData};

use thiserror::Error;

use crate::cobordism::{CobordismError, Evaluator, Movie};
use crate::diagram::PlanarDiagram;
use crate::exactalg::BigradedDims;
use crate::khovanov::{kh_dims_with_budget, KhError, DEFAULT_BUDGET};
use crate::lee::{s_from_pages, LeeError, LeeReduction};
use crate::ssengine::SsError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConcordanceError {
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
    #[error(transparent)]
    Kh(#[from] KhError),
    #[error(transparent)]
    Lee(#[from] LeeError),
    #[error(transparent)]
    Ss(#[from] SsError),
    #[error("the movie ends on a different diagram than it starts with")]
    EndpointMismatch,
    #[error("the {end} of the movie has homology {found}, not that of T(4,5)")]
    EndpointTable { end: &'static str, found: BigradedDims },
}

fn count(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

/// Khovanov dimensions and s-invariant of a knot.
fn invariants(d: &PlanarDiagram, budget: usize) -> Result<(BigradedDims, i64), ConcordanceError> {
    let kh = kh_dims_with_budget(d, budget)?;
    let s = s_from_pages(&LeeReduction::new(d, budget)?.pages()?)?;
    Ok((kh, s))
}

/// Necessary conditions for a ribbon concordance from `k0` to `k1`: the
/// homology of `k0` fits inside that of `k1` in every bigrading, and the
/// two s-invariants agree.
pub fn dominance_check(k0: &PlanarDiagram, k1: &PlanarDiagram) -> Result<ObstructionReport, ConcordanceError> {
    dominance_check_with_budget(k0, k1, DEFAULT_BUDGET)
}

pub fn dominance_check_with_budget(
    k0: &PlanarDiagram,
    k1: &PlanarDiagram,
    budget: usize,
) -> Result<ObstructionReport, ConcordanceError> {
    let (h0, s0) = invariants(k0, budget)?;
    let (h1, s1) = invariants(k1, budget)?;
    let mut witnesses = Vec::new();
    for (b, n) in h0.iter() {
        let m = h1.get(b);
        if n > m {
            witnesses.push(Witness { i: b.0, j: b.1, data: WitnessData::Dimension { source: n, target: m } });
        }
    }
    let mut narrative = vec![format!(
        "compared homology in {} bigradings: total dimension {} against {}",
        h0.support().count(),
        h0.total(),
        h1.total()
    )];
    if witnesses.is_empty() {
        narrative.push("the first homology fits inside the second in every bigrading".into());
    } else {
        narrative.push(format!("{} bigradings have more homology in the first knot", witnesses.len()));
    }
    if s0 != s1 {
        witnesses.push(Witness { i: 0, j: s0, data: WitnessData::SInvariant { source: s0, target: s1 } });
        narrative.push(format!("s-invariants differ ({s0} and {s1}), so the knots are not concordant"));
    } else {
        narrative.push(format!("s-invariants agree ({s0})"));
    }
    let verdict = if witnesses.is_empty() {
        narrative.push("passing is necessary for a ribbon concordance, not sufficient".into());
        Verdict::NotObstructed
    } else {
        Verdict::Obstructed
    };
    Ok(ObstructionReport::new(verdict, witnesses, narrative))
}

/// Computes the map a movie from a knot to itself induces on homology and
/// certifies it when it is an isomorphism.
pub fn self_concordance_iso(m: &Movie) -> Result<ObstructionReport, ConcordanceError> {
    self_concordance_iso_with(m, &mut Evaluator::khovanov())
}

pub fn self_concordance_iso_with(m: &Movie, ev: &mut Evaluator) -> Result<ObstructionReport, ConcordanceError> {
    if m.start().to_pd_string() != m.end().to_pd_string() {
        return Err(ConcordanceError::EndpointMismatch);
    }
    let f = ev.kh_map(m)?;
    let narrative = vec![format!(
        "evaluated {} at chain level; the map has bidegree ({},{})",
        count(m.len(), "move"),
        f.bidegree().0,
        f.bidegree().1
    )];
    Ok(rank_report(&f.source_dims(), &f.ranks(), narrative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::Move;
    use crate::diagram::{braid_closure, parse_pd, torus_braid};
    use std::collections::BTreeMap;

    fn trefoil() -> PlanarDiagram {
        braid_closure(&torus_braid(2, 3).unwrap())
    }

    fn movie(d: &PlanarDiagram, text: &str) -> Movie {
        let mv: Vec<Move> = text.lines().map(|l| l.parse().unwrap()).collect();
        Movie::new(d.clone(), &mv).unwrap()
    }

    #[test]
    fn self_dominance() {
        let r = dominance_check(&trefoil(), &trefoil()).unwrap();
        assert_eq!(r.verdict, Verdict::NotObstructed);
        assert!(r.witnesses.is_empty());
        assert!(r.narrative.iter().any(|l| l.contains("not sufficient")));
    }

    #[test]
    fn unknot_into_trefoil() {
        let r = dominance_check(&parse_pd("U").unwrap(), &trefoil()).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.witnesses[0], Witness { i: 0, j: 0, data: WitnessData::Dimension { source: 1, target: 0 } });
        assert!(r.witnesses.iter().any(|w| w.data == WitnessData::SInvariant { source: 0, target: 2 }));
    }

    #[test]
    fn dominance_composes() {
        let knots = [
            parse_pd("U").unwrap(),
            trefoil(),
            braid_closure(&torus_braid(2, 5).unwrap()),
            trefoil().mirror(),
        ];
        let ok: Vec<Vec<bool>> = knots
            .iter()
            .map(|a| knots.iter().map(|b| dominance_check(a, b).unwrap().verdict == Verdict::NotObstructed).collect())
            .collect();
        for a in 0..knots.len() {
            assert!(ok[a][a]);
            for b in 0..knots.len() {
                for c in 0..knots.len() {
                    if ok[a][b] && ok[b][c] {
                        assert!(ok[a][c], "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn empty_movie_is_certified() {
        let r = self_concordance_iso(&Movie::empty(trefoil())).unwrap();
        assert_eq!(r.verdict, Verdict::IsomorphismCertified);
        assert_eq!(r.witnesses.len(), 3);
    }

    #[test]
    fn tube_on_the_unknot() {
        let u = parse_pd("U").unwrap();
        let r = self_concordance_iso(&movie(&u, "BIRTH 2\nSADDLE 1 2\nSADDLE 1 2\nDEATH 2")).unwrap();
        assert_eq!(r.verdict, Verdict::IsomorphismCertified);
        assert_eq!(r.witnesses, vec![Witness { i: 0, j: 0, data: WitnessData::Rank { rank: 1, dim: 1 } }]);
    }

    #[test]
    fn rank_deficit_is_reported() {
        let dims = BigradedDims::ones([(0, 2), (2, 6), (3, 8)]);
        let ranks = BTreeMap::from([((0, 2), 1), ((3, 8), 1)]);
        let r = rank_report(&dims, &ranks, vec!["synthetic".into()]);
        assert_eq!(r.verdict, Verdict::NotCertified);
        assert_eq!(r.witnesses, vec![Witness { i: 2, j: 6, data: WitnessData::Rank { rank: 0, dim: 1 } }]);
        assert_eq!(r.verdict.exit_code(), 3);
    }

    #[test]
    fn endpoints_must_agree() {
        let m = movie(&trefoil(), "BIRTH 9");
        assert_eq!(self_concordance_iso(&m).unwrap_err(), ConcordanceError::EndpointMismatch);
    }

    #[test]
    fn report_json_is_stable() {
        let r = self_concordance_iso(&Movie::empty(trefoil())).unwrap();
        let s = r.to_json();
        assert_eq!(ObstructionReport::from_json(&s).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["narrative", "verdict", "witnesses"]);
        assert_eq!(v["verdict"], "isomorphism-certified");
        assert_eq!(v["witnesses"][0]["kind"], "rank");
    }
}
