use std::collections::BTreeSet;

use log::info;

use super::{count, rank_report, ConcordanceError, ObstructionReport, Verdict, Witness, WitnessData};
use crate::cobordism::{Evaluator, KhMap, Movie};
use crate::exactalg::{BigradedDims, Bigrading};
use crate::lee::{LeeReduction, Page};
use crate::ssengine::{enumerate_collapses, squeeze_check, Arrow, CollapseConstraints, SqueezeInstance, SqueezeVerdict};

/// Reduced Khovanov homology of T(4,5): one dimension in each listed
/// bigrading.
pub fn t45_khovanov() -> BigradedDims {
    BigradedDims::ones([(0, 12), (2, 16), (3, 18), (4, 18), (5, 22), (6, 20), (7, 24), (8, 24), (9, 26)])
}

const STAGES: [&str; 5] = ["births", "moves before the saddles", "saddles", "moves after the saddles", "deaths"];

fn show(b: Bigrading) -> String {
    format!("({},{})", b.0, b.1)
}

/// `(i, j)` followed by the same point as `(i, j - i)`.
fn both(b: Bigrading) -> String {
    format!("{} = {} in (i, j-i)", show(b), show((b.0, b.1 - b.0)))
}

/// Every differential of the Lee spectral sequence, page by page.
pub fn lee_pairings(pages: &[Page]) -> Vec<Arrow> {
    pages
        .iter()
        .flat_map(|p| p.differentials.iter().map(|d| Arrow { from: d.from, to: d.to, rank: d.rank }))
        .collect()
}

/// Bigradings touched by some differential that the constraints allow;
/// everywhere else the page-2 term survives to the end.
pub fn exceptional_bigradings(e2: &BigradedDims, constraints: &CollapseConstraints) -> Option<BTreeSet<Bigrading>> {
    let patterns = enumerate_collapses(e2, constraints);
    if patterns.is_empty() {
        return None;
    }
    Some(
        patterns
            .iter()
            .flat_map(|p| p.differentials.iter().flat_map(|a| [a.source(), a.target()]))
            .collect(),
    )
}

/// Caches shared by several replays of movies on the same knot.
pub struct ReplayContext {
    pub evaluator: Evaluator,
    lee: Option<(String, Vec<Page>)>,
}

impl Default for ReplayContext {
    fn default() -> Self {
        ReplayContext { evaluator: Evaluator::khovanov(), lee: None }
    }
}

impl ReplayContext {
    pub fn new() -> Self {
        Self::default()
    }

    fn lee_pages(&mut self, m: &Movie) -> Result<&[Page], ConcordanceError> {
        let key = m.start().to_pd_string();
        if self.lee.as_ref().is_none_or(|(k, _)| *k != key) {
            let pages = LeeReduction::new(m.start(), self.evaluator.budget())?.pages()?;
            self.lee = Some((key, pages));
        }
        Ok(&self.lee.as_ref().expect("just filled").1)
    }
}

/// Checks that a self-concordance of T(4,5) induces an isomorphism, the way
/// the argument goes: split the movie into its five stages, take the
/// isomorphism outside the exceptional bigradings from the constraint data,
/// and squeeze the exceptional ones with the Lee differentials. The map of
/// the whole movie is computed as well and must agree.
pub fn t45_replay(m: &Movie, constraints: &CollapseConstraints) -> Result<ObstructionReport, ConcordanceError> {
    t45_replay_with(m, constraints, &mut ReplayContext::new())
}

pub fn t45_replay_with(
    m: &Movie,
    constraints: &CollapseConstraints,
    ctx: &mut ReplayContext,
) -> Result<ObstructionReport, ConcordanceError> {
    let nf = m.normal_form()?;
    if m.start().to_pd_string() != m.end().to_pd_string() {
        return Err(ConcordanceError::EndpointMismatch);
    }
    let table = t45_khovanov();
    for (end, d) in [("start", m.start()), ("end", m.end())] {
        let found = ctx.evaluator.homology(d)?.dims();
        if found != table {
            return Err(ConcordanceError::EndpointTable { end, found });
        }
    }
    let mut narrative = vec![format!(
        "normal form with {}, {} and {}; both ends have the homology of T(4,5)",
        count(nf.k, "birth"),
        count(nf.stages[2].len(), "saddle"),
        count(nf.l, "death")
    )];

    // (1) the five stages
    let stages = ctx.evaluator.kh_maps(m, &nf.stages)?;
    for (k, (f, r)) in stages.iter().zip(&nf.stages).enumerate() {
        narrative.push(format!(
            "stage {} ({}): {}, total rank {}",
            k + 1,
            STAGES[k],
            count(r.len(), "move"),
            f.total_rank()
        ));
    }
    for k in [1, 3] {
        if !stages[k].is_isomorphism() {
            narrative.push(format!("stage {} is not an isomorphism", k + 1));
            return Ok(deficit(&stages[k], narrative));
        }
    }
    narrative.push("stages 2 and 4 are isomorphisms".into());
    let mut product = stages[0].clone();
    for f in &stages[1..] {
        product = product.then(f)?;
    }
    info!("replay: stage product has rank {}", product.total_rank());

    // (2) the constraint data
    let Some(exceptional) = exceptional_bigradings(&table, constraints) else {
        narrative.push("the constraint data admits no collapse pattern".into());
        return Ok(ObstructionReport::new(Verdict::NotCertified, vec![], narrative));
    };
    let iso_locus: BTreeSet<Bigrading> = table.support().filter(|b| !exceptional.contains(b)).collect();
    let ex: Vec<String> = exceptional.iter().map(|b| both(*b)).collect();
    narrative.push(format!(
        "constraint data (version {}): the map is an isomorphism outside {}",
        constraints.version,
        ex.join(", ")
    ));
    let ranks = product.ranks();
    let bad: Vec<Witness> = iso_locus
        .iter()
        .filter(|b| ranks.get(b).copied().unwrap_or(0) != table.get(**b))
        .map(|b| Witness {
            i: b.0,
            j: b.1,
            data: WitnessData::Rank { rank: ranks.get(b).copied().unwrap_or(0), dim: table.get(*b) },
        })
        .collect();
    if !bad.is_empty() {
        narrative.push("the computed map contradicts the constraint data".into());
        return Ok(ObstructionReport::new(Verdict::NotCertified, bad, narrative));
    }

    // (3) the squeeze
    let pairings = lee_pairings(ctx.lee_pages(m)?);
    for a in &pairings {
        narrative.push(format!("Lee differential {} -> {}", show(a.source()), show(a.target())));
    }
    let outcome = squeeze_check(&SqueezeInstance {
        source: table.clone(),
        target: table.clone(),
        ranks: ranks.clone(),
        iso_locus,
        pairings,
    })?;
    for n in outcome.notes.iter().filter(|n| exceptional.contains(&(n.at[0], n.at[1]))) {
        narrative.push(format!("{}: {}", show((n.at[0], n.at[1])), n.reason));
    }

    // cross-check against the map of the whole movie
    let direct = ctx.evaluator.kh_map(m)?;
    if !direct.equals_up_to_sign(&product) {
        narrative.push("the product of the stage maps differs from the map of the whole movie".into());
        return Ok(deficit(&direct, narrative));
    }
    narrative.push("the product of the stage maps equals the map of the whole movie".into());
    match outcome.verdict {
        SqueezeVerdict::Isomorphism if direct.is_isomorphism() => {
            Ok(rank_report(&table, &ranks, narrative))
        }
        SqueezeVerdict::Isomorphism => {
            narrative.push("the squeeze contradicts the computed map".into());
            Ok(deficit(&direct, narrative))
        }
        SqueezeVerdict::Undetermined { stuck } => {
            narrative.push(format!(
                "the squeeze leaves {} open",
                stuck.iter().map(|b| show((b[0], b[1]))).collect::<Vec<_>>().join(", ")
            ));
            let witnesses = stuck
                .iter()
                .map(|b| {
                    let b = (b[0], b[1]);
                    Witness { i: b.0, j: b.1, data: WitnessData::Rank { rank: product.rank_at(b), dim: table.get(b) } }
                })
                .collect();
            Ok(ObstructionReport::new(Verdict::NotCertified, witnesses, narrative))
        }
    }
}

fn deficit(f: &KhMap, narrative: Vec<String>) -> ObstructionReport {
    let r = rank_report(&f.source_dims(), &f.ranks(), narrative);
    ObstructionReport { verdict: Verdict::NotCertified, ..r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::Move;
    use crate::diagram::{braid_closure, torus_braid};

    fn constraints() -> CollapseConstraints {
        CollapseConstraints::from_json(include_str!("../../data/t45_constraints.json")).unwrap()
    }

    #[test]
    fn exceptional_set_from_the_data() {
        let ex = exceptional_bigradings(&t45_khovanov(), &constraints()).unwrap();
        assert_eq!(ex, BTreeSet::from([(2, 16), (4, 18), (9, 26)]));
        assert_eq!(both((9, 26)), "(9,26) = (9,17) in (i, j-i)");
    }

    #[test]
    fn bad_saddle_count_fails_first() {
        let d = braid_closure(&torus_braid(4, 5).unwrap());
        let m = Movie::new(d, &["BIRTH 1000".parse::<Move>().unwrap()]).unwrap();
        assert!(matches!(
            t45_replay(&m, &constraints()),
            Err(ConcordanceError::Cobordism(crate::cobordism::CobordismError::NotConcordance { .. }))
        ));
    }

    #[test]
    fn wrong_knot() {
        let m = Movie::empty(braid_closure(&torus_braid(2, 3).unwrap()));
        assert!(matches!(t45_replay(&m, &constraints()), Err(ConcordanceError::EndpointTable { end: "start", .. })));
    }
}
