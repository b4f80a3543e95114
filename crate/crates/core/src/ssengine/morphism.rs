use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SsError;
use crate::cobordism::RankEntry;
use crate::exactalg::dense::{self, DVec};
use crate::exactalg::{Bigrading, ChainComplex, Rational, SparseVec};
use crate::lee::{LeeReduction, Page};

/// A homogeneous map between two pages, one block per source bigrading in
/// the pages' own bases (rows index the target basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedMap {
    bidegree: (i64, i64),
    blocks: BTreeMap<Bigrading, Vec<DVec>>,
}

/// Ranks of the map induced on one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRanks {
    pub r: usize,
    pub ranks: Vec<RankEntry>,
    pub total_rank: usize,
}

fn shifted(b: Bigrading, d: (i64, i64)) -> Bigrading {
    (b.0 + d.0, b.1 + d.1)
}

fn identity(n: usize) -> Vec<DVec> {
    (0..n)
        .map(|r| (0..n).map(|c| if r == c { Rational::ONE } else { Rational::ZERO }).collect())
        .collect()
}

fn mat_vec(m: &[DVec], x: &DVec) -> DVec {
    m.iter()
        .map(|row| {
            let mut acc = Rational::ZERO;
            for (a, b) in row.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

fn column(m: &[DVec], c: usize) -> DVec {
    m.iter().map(|row| row[c].clone()).collect()
}

fn from_columns(cols: &[DVec], nrows: usize) -> Vec<DVec> {
    (0..nrows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

impl BigradedMap {
    pub fn new(bidegree: (i64, i64), blocks: BTreeMap<Bigrading, Vec<DVec>>) -> Self {
        BigradedMap { bidegree, blocks }
    }

    pub fn identity(page: &Page) -> Self {
        let blocks = page.dims.iter().map(|(b, n)| (b, identity(n))).collect();
        BigradedMap { bidegree: (0, 0), blocks }
    }

    pub fn zero(bidegree: (i64, i64)) -> Self {
        BigradedMap { bidegree, blocks: BTreeMap::new() }
    }

    pub fn bidegree(&self) -> (i64, i64) {
        self.bidegree
    }

    pub fn rank_at(&self, b: Bigrading, ncols: usize) -> usize {
        self.blocks.get(&b).map_or(0, |m| dense::rank(m, ncols))
    }

    fn apply(&self, b: Bigrading, x: &DVec, nrows: usize) -> DVec {
        match self.blocks.get(&b) {
            Some(m) if !m.is_empty() => mat_vec(m, x),
            _ => vec![Rational::ZERO; nrows],
        }
    }
}

/// One side of a page sequence, continued past its last page unchanged.
struct Side<'a> {
    pages: &'a [Page],
}

impl Side<'_> {
    fn page(&self, w: usize) -> &Page {
        &self.pages[w.min(self.pages.len() - 1)]
    }

    fn dim(&self, w: usize, b: Bigrading) -> usize {
        self.page(w).dims.get(b)
    }

    fn shift(&self, w: usize) -> i64 {
        2 * (w as i64 + 1)
    }

    /// Page-`w` differential applied to a page-`w` vector at `b`.
    fn d(&self, w: usize, b: Bigrading, x: &DVec) -> DVec {
        let t = (b.0 + 1, b.1 + self.shift(w));
        let n = self.dim(w, t);
        if w >= self.pages.len() {
            return vec![Rational::ZERO; n];
        }
        match self.page(w).data.diff.get(&b) {
            Some(m) if n > 0 => mat_vec(m, x),
            _ => vec![Rational::ZERO; n],
        }
    }

    /// Basis of page `w + 1` at `b` in page-`w` coordinates.
    fn lift(&self, w: usize, b: Bigrading) -> Vec<DVec> {
        if w + 1 >= self.pages.len() {
            return identity(self.dim(w, b));
        }
        self.page(w).data.lift.get(&b).cloned().unwrap_or_default()
    }

    /// Coordinates on page `w + 1` of a page-`w` cycle at `b`.
    fn descend(&self, w: usize, b: Bigrading, y: &DVec) -> Option<DVec> {
        if w + 1 >= self.pages.len() {
            return Some(y.clone());
        }
        let n = self.dim(w, b);
        let basis = self.lift(w, b);
        let from = (b.0 - 1, b.1 - self.shift(w));
        let mut all = basis.clone();
        if let Some(m) = self.page(w).data.diff.get(&from) {
            let cols: Vec<DVec> = (0..self.dim(w, from)).map(|c| column(m, c)).collect();
            all.extend(dense::rref(&cols, n).0);
        }
        dense::solve(&all, y).map(|c| c[..basis.len()].to_vec())
    }
}

/// Pushes a map of page-2 terms through both spectral sequences, checking
/// on each page that it commutes with the differentials, and reports its
/// rank on every page. The shorter sequence is continued by its last page.
pub fn ss_morphism_ranks(f: &BigradedMap, src: &[Page], dst: &[Page]) -> Result<Vec<PageRanks>, SsError> {
    if src.is_empty() || dst.is_empty() {
        return Err(SsError::Malformed("empty page sequence".into()));
    }
    let (s, t) = (Side { pages: src }, Side { pages: dst });
    let deg = f.bidegree;
    let n = src.len().max(dst.len());
    let mut cur = f.clone();
    let mut out = Vec::new();
    for w in 0..n {
        let support: Vec<Bigrading> = s.page(w).dims.support().collect();
        for &b in &support {
            let b2 = shifted(b, deg);
            let up = (b.0 + 1, b.1 + s.shift(w));
            for c in 0..s.dim(w, b) {
                let e: DVec = (0..s.dim(w, b)).map(|k| if k == c { Rational::ONE } else { Rational::ZERO }).collect();
                let lhs = t.d(w, b2, &cur.apply(b, &e, t.dim(w, b2)));
                let rhs = cur.apply(up, &s.d(w, b, &e), t.dim(w, shifted(up, deg)));
                if lhs != rhs {
                    return Err(SsError::NotCommuting(format!("page {} at ({},{})", w + 2, b.0, b.1)));
                }
            }
        }
        let ranks: Vec<RankEntry> = support
            .iter()
            .map(|&b| RankEntry { i: b.0, j: b.1, rank: cur.rank_at(b, s.dim(w, b)) })
            .filter(|e| e.rank > 0)
            .collect();
        let total_rank = ranks.iter().map(|e| e.rank).sum();
        out.push(PageRanks { r: w + 2, ranks, total_rank });
        if w + 1 == n {
            break;
        }
        let mut blocks = BTreeMap::new();
        for &b in &support {
            let b2 = shifted(b, deg);
            let mut cols = Vec::new();
            for x in s.lift(w, b) {
                let y = cur.apply(b, &x, t.dim(w, b2));
                let c = t.descend(w, b2, &y).ok_or_else(|| {
                    SsError::NotCommuting(format!("image of a page {} class at ({},{})", w + 3, b.0, b.1))
                })?;
                cols.push(c);
            }
            let nrows = t.dim(w + 1, b2);
            if !cols.is_empty() && nrows > 0 {
                blocks.insert(b, from_columns(&cols, nrows));
            }
        }
        cur = BigradedMap { bidegree: deg, blocks };
    }
    Ok(out)
}

/// Generators of each homological degree in index order, and the position
/// of each generator within its degree.
fn by_degree(c: &ChainComplex) -> (BTreeMap<i64, Vec<u32>>, Vec<usize>) {
    let mut by_i: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    let mut pos = vec![0; c.len()];
    for g in 0..c.len() as u32 {
        let v = by_i.entry(c.grading(g).0).or_default();
        pos[g as usize] = v.len();
        v.push(g);
    }
    (by_i, pos)
}

/// The map on page 2 induced by a filtered chain map between two Lee cubes.
/// `pages` must come from the reductions' own small complexes.
pub fn lee_e2_map<F>(
    src: (&LeeReduction, &Page),
    dst: (&LeeReduction, &Page),
    bidegree: (i64, i64),
    f: F,
) -> Result<BigradedMap, SsError>
where
    F: Fn(&SparseVec) -> SparseVec,
{
    let (sr, sp) = src;
    let (dr, dp) = dst;
    let (s_by_i, _) = by_degree(sr.small().complex());
    let (d_by_i, d_pos) = by_degree(dr.small().complex());
    let mut blocks = BTreeMap::new();
    for (b, reps) in &sp.data.reps {
        let b2 = shifted(*b, bidegree);
        let Some(trep) = dp.data.reps.get(&b2) else { continue };
        let tden = dp.data.den.get(&b2).cloned().unwrap_or_default();
        let gens = &s_by_i[&b.0];
        let width = d_by_i.get(&b2.0).map_or(0, |v| v.len());
        let mut cols = Vec::new();
        for z in reps {
            let v = SparseVec::from_entries(
                z.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (gens[k], c.clone())),
            );
            let w = dr.reduction().project(&f(&sr.reduction().include(&v)));
            let mut y = vec![Rational::ZERO; width];
            for (g, c) in w.iter() {
                if dr.small().complex().grading(g).0 != b2.0 {
                    return Err(SsError::NotCommuting("map is not of the given bidegree".into()));
                }
                y[d_pos[g as usize]] = c.clone();
            }
            let mut basis = trep.clone();
            basis.extend(tden.iter().cloned());
            let c = dense::solve(&basis, &y)
                .ok_or_else(|| SsError::NotCommuting(format!("image of a class at ({},{}) is not a cycle", b.0, b.1)))?;
            cols.push(c[..trep.len()].to_vec());
        }
        blocks.insert(*b, from_columns(&cols, trep.len()));
    }
    Ok(BigradedMap { bidegree, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::{induced_chain_map, Movie};
    use crate::diagram::{braid_closure, torus_braid, BraidWord};
    use crate::exactalg::BigradedDims;
    use crate::khovanov::{FrobeniusSpec, DEFAULT_BUDGET};
    use crate::lee::{lee_pages, s_from_pages};

    fn trefoil_pages() -> Vec<Page> {
        lee_pages(&braid_closure(&torus_braid(2, 3).unwrap())).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let p = trefoil_pages();
        let r = ss_morphism_ranks(&BigradedMap::identity(&p[0]), &p, &p).unwrap();
        assert_eq!(r.len(), p.len());
        for (page, ranks) in p.iter().zip(&r) {
            assert_eq!(ranks.r, page.r);
            assert_eq!(ranks.total_rank, page.dims.total());
        }
        assert_eq!(r.last().unwrap().total_rank, 1);
    }

    #[test]
    fn zero_has_zero_rank() {
        let p = trefoil_pages();
        let r = ss_morphism_ranks(&BigradedMap::zero((0, 0)), &p, &p).unwrap();
        assert!(r.iter().all(|x| x.total_rank == 0));
    }

    #[test]
    fn non_commuting_map_is_rejected() {
        // keep only the class killed at page 2 on one end
        let p = trefoil_pages();
        let mut blocks = BTreeMap::new();
        blocks.insert((2, 6), identity(1));
        let f = BigradedMap::new((0, 0), blocks);
        assert!(matches!(ss_morphism_ranks(&f, &p, &p), Err(SsError::NotCommuting(_))));
    }

    #[test]
    fn empty_movie_on_the_trefoil() {
        let d = braid_closure(&torus_braid(2, 3).unwrap());
        let lr = LeeReduction::new(&d, DEFAULT_BUDGET).unwrap();
        let pages = lr.pages().unwrap();
        let m = Movie::empty(d.clone());
        let chain = induced_chain_map(&m, FrobeniusSpec::lee()).unwrap();
        let e2 = lee_e2_map((&lr, &pages[0]), (&lr, &pages[0]), chain.bidegree(), |v| chain.apply(v)).unwrap();
        let r = ss_morphism_ranks(&e2, &pages, &pages).unwrap();
        assert_eq!(r[0].total_rank, 3);
        let last = r.last().unwrap();
        assert_eq!(last.total_rank, 1);
        assert_eq!(last.ranks, vec![RankEntry { i: 0, j: s_from_pages(&pages).unwrap(), rank: 1 }]);
    }

    #[test]
    fn sequences_of_different_length() {
        // the unknot has one page, the figure-eight several
        let u = lee_pages(&crate::diagram::PlanarDiagram::unknot()).unwrap();
        let fig8 = lee_pages(&braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2]).unwrap())).unwrap();
        assert!(fig8.len() > u.len());
        let mut blocks = BTreeMap::new();
        blocks.insert((0, 0), identity(1));
        let f = BigradedMap::new((0, 0), blocks);
        let r = ss_morphism_ranks(&f, &u, &fig8).unwrap();
        assert_eq!(r.len(), fig8.len());
        assert_eq!(fig8[0].dims.get((0, 0)), 1);
        assert!(r.iter().all(|x| x.total_rank == 1));
        assert_eq!(fig8.last().unwrap().dims, BigradedDims::ones([(0, 0)]));
    }
}
