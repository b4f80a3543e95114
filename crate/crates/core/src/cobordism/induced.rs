use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;

use log::debug;
use serde::{Deserialize, Serialize};

use super::maps::{LocalMap, RetractMap, StepMap};
use super::{CobordismError, Move, Movie};
use crate::diagram::PlanarDiagram;
use crate::exactalg::dense::{self, DVec};
use crate::exactalg::{BigradedDims, Bigrading, Rational, SparseVec};
use crate::khovanov::{split_free, CubeComplex, CubeLayout, FrobeniusSpec, KhCache, KhHomology, DEFAULT_BUDGET};

/// Builds and caches the cubes, homologies and step maps of movies.
pub struct Evaluator {
    spec: FrobeniusSpec,
    budget: usize,
    layouts: HashMap<String, Arc<CubeLayout>>,
    cubes: HashMap<String, Arc<CubeComplex>>,
    kh: KhCache,
    steps: HashMap<String, Arc<StepMap>>,
}

impl Evaluator {
    pub fn new(spec: FrobeniusSpec, budget: usize) -> Self {
        Evaluator { spec, budget, layouts: HashMap::new(), cubes: HashMap::new(), kh: KhCache::new(), steps: HashMap::new() }
    }

    pub fn khovanov() -> Self {
        Self::new(FrobeniusSpec::khovanov(), DEFAULT_BUDGET)
    }

    pub fn spec(&self) -> FrobeniusSpec {
        self.spec
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn layout(&mut self, d: &PlanarDiagram) -> Result<Arc<CubeLayout>, CobordismError> {
        let key = d.to_pd_string();
        if let Some(l) = self.layouts.get(&key) {
            return Ok(l.clone());
        }
        let l = Arc::new(CubeLayout::new(d, true, self.budget)?);
        self.layouts.insert(key, l.clone());
        Ok(l)
    }

    fn cube(&mut self, d: &PlanarDiagram) -> Result<Arc<CubeComplex>, CobordismError> {
        let key = d.to_pd_string();
        if let Some(c) = self.cubes.get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(CubeComplex::new(d, self.spec, true, self.budget)?);
        self.cubes.insert(key, c.clone());
        Ok(c)
    }

    /// Reduced Khovanov homology of a slice.
    pub fn homology(&mut self, d: &PlanarDiagram) -> Result<KhHomology, CobordismError> {
        Ok(self.kh.homology(d, self.budget)?)
    }

    fn step_map(&mut self, m: &Movie, k: usize) -> Result<Arc<StepMap>, CobordismError> {
        let (s, t, step) = (&m.slices()[k], &m.slices()[k + 1], &m.steps()[k]);
        let key = format!(
            "{}|{}|{}|{:?}|{:?}",
            s.to_pd_string(),
            t.to_pd_string(),
            step.mv,
            step.old_local,
            step.new_local
        );
        if let Some(f) = self.steps.get(&key) {
            return Ok(f.clone());
        }
        let f = Arc::new(self.build_step(m, k)?);
        self.steps.insert(key, f.clone());
        Ok(f)
    }

    fn build_step(&mut self, m: &Movie, k: usize) -> Result<StepMap, CobordismError> {
        let (s, t) = (&m.slices()[k], &m.slices()[k + 1]);
        let step = &m.steps()[k];
        let fail = |e: String| CobordismError::Map(format!("move {k} ({}): {e}", step.mv));
        debug!("chain map of move {k}: {}", step.mv);
        if step.mv.kind().is_reidemeister() {
            // free circles away from the move only contribute a tensor factor
            let ((cs, fs), (ct, ft)) = (split_free(s), split_free(t));
            if !fs.is_empty() && fs == ft {
                let (a, b) = (self.cube(&cs)?, self.cube(&ct)?);
                let map = RetractMap::new(a, b, &step.old_local, &step.new_local).map_err(fail)?;
                return Ok(StepMap::Free { map: Box::new(StepMap::Retract(map)), bits: fs.len() });
            }
            let (a, b) = (self.cube(s)?, self.cube(t)?);
            return RetractMap::new(a, b, &step.old_local, &step.new_local)
                .map(StepMap::Retract)
                .map_err(fail);
        }
        let labels: Vec<u32> = match step.mv {
            Move::Birth { circle } => vec![circle.expect("resolved")],
            Move::Death { circle } => vec![circle],
            Move::Saddle { a, b, .. } => vec![a, b],
            _ => unreachable!(),
        };
        let (a, b) = (self.layout(s)?, self.layout(t)?);
        LocalMap::new(a, b, self.spec, &labels).map(StepMap::Local).map_err(fail)
    }

    /// The chain map of a movie, as a composite of per-move maps.
    pub fn chain_map(&mut self, m: &Movie) -> Result<ChainMap, CobordismError> {
        let steps = (0..m.len()).map(|k| self.step_map(m, k)).collect::<Result<_, _>>()?;
        Ok(ChainMap { steps, bidegree: m.bidegree() })
    }

    /// The map on homology, computed by pushing cycles through the chain
    /// map of the whole movie.
    pub fn kh_map(&mut self, m: &Movie) -> Result<KhMap, CobordismError> {
        self.require_khovanov()?;
        let f = self.chain_map(m)?;
        let src = self.homology(m.start())?;
        let dst = self.homology(m.end())?;
        KhMap::from_chain_map(&src, &dst, &f)
    }

    /// Maps on homology for consecutive pieces of a movie.
    pub fn kh_maps(&mut self, m: &Movie, pieces: &[Range<usize>]) -> Result<Vec<KhMap>, CobordismError> {
        pieces.iter().map(|r| self.kh_map(&m.sub_movie(r.clone()))).collect()
    }

    fn require_khovanov(&self) -> Result<(), CobordismError> {
        if self.spec != FrobeniusSpec::khovanov() {
            return Err(CobordismError::Map("homology maps need the Khovanov algebra".into()));
        }
        Ok(())
    }
}

/// Chain map between the full cube complexes of the first and last slice
/// of a movie.
pub struct ChainMap {
    steps: Vec<Arc<StepMap>>,
    bidegree: (i64, i64),
}

impl ChainMap {
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut w = v.clone();
        for s in &self.steps {
            if w.is_zero() {
                break;
            }
            w = s.apply(&w);
        }
        w
    }

    pub fn bidegree(&self) -> (i64, i64) {
        self.bidegree
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The chain map of a movie over the given algebra.
pub fn induced_chain_map(m: &Movie, spec: FrobeniusSpec) -> Result<ChainMap, CobordismError> {
    Evaluator::new(spec, DEFAULT_BUDGET).chain_map(m)
}

/// The map a movie induces on reduced Khovanov homology.
pub fn induced_kh_map(m: &Movie) -> Result<KhMap, CobordismError> {
    Evaluator::khovanov().kh_map(m)
}

/// Homology maps of consecutive pieces of a movie, one evaluator shared.
pub fn stage_maps(m: &Movie, pieces: &[Range<usize>]) -> Result<Vec<KhMap>, CobordismError> {
    Evaluator::khovanov().kh_maps(m, pieces)
}

/// A homogeneous linear map between bigraded spaces with given bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhMap {
    source: Vec<Bigrading>,
    target: Vec<Bigrading>,
    /// Image of each source basis vector.
    columns: Vec<SparseVec>,
    bidegree: (i64, i64),
}

/// Rank of a map on one source bigrading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub i: i64,
    pub j: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub bidegree: [i64; 2],
    pub ranks: Vec<RankEntry>,
    pub total_rank: usize,
}

impl MapReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

impl KhMap {
    pub fn new(
        source: Vec<Bigrading>,
        target: Vec<Bigrading>,
        columns: Vec<SparseVec>,
        bidegree: (i64, i64),
    ) -> Result<KhMap, CobordismError> {
        if columns.len() != source.len() {
            return Err(CobordismError::Map("one column per source class is needed".into()));
        }
        for (k, col) in columns.iter().enumerate() {
            for (t, _) in col.iter() {
                let (a, b) = (source[k], *target.get(t as usize).ok_or_else(|| {
                    CobordismError::Map(format!("column {k} leaves the target"))
                })?);
                if (b.0 - a.0, b.1 - a.1) != bidegree {
                    return Err(CobordismError::Map(format!(
                        "class at {a:?} maps to {b:?}, not of bidegree {bidegree:?}"
                    )));
                }
            }
        }
        Ok(KhMap { source, target, columns, bidegree })
    }

    pub fn identity(h: &KhHomology) -> KhMap {
        let g: Vec<Bigrading> = (0..h.len() as u32).map(|k| h.grading(k)).collect();
        let columns = (0..g.len() as u32).map(SparseVec::basis).collect();
        KhMap { source: g.clone(), target: g, columns, bidegree: (0, 0) }
    }

    fn from_chain_map(src: &KhHomology, dst: &KhHomology, f: &ChainMap) -> Result<KhMap, CobordismError> {
        let columns: Vec<SparseVec> = (0..src.len() as u32)
            .map(|k| dst.project(&f.apply(&src.include(&SparseVec::basis(k)))))
            .collect();
        KhMap::new(
            (0..src.len() as u32).map(|k| src.grading(k)).collect(),
            (0..dst.len() as u32).map(|k| dst.grading(k)).collect(),
            columns,
            f.bidegree(),
        )
    }

    pub fn bidegree(&self) -> (i64, i64) {
        self.bidegree
    }

    pub fn source_dims(&self) -> BigradedDims {
        BigradedDims::ones(self.source.iter().copied())
    }

    pub fn target_dims(&self) -> BigradedDims {
        BigradedDims::ones(self.target.iter().copied())
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    /// Dense block from source bigrading `b`: one row per target class in
    /// bigrading `b + bidegree`, one column per source class in `b`.
    pub fn block(&self, b: Bigrading) -> Vec<DVec> {
        let t = (b.0 + self.bidegree.0, b.1 + self.bidegree.1);
        let rows: Vec<u32> = (0..self.target.len() as u32).filter(|k| self.target[*k as usize] == t).collect();
        let cols: Vec<usize> = (0..self.source.len()).filter(|k| self.source[*k] == b).collect();
        rows.iter()
            .map(|r| cols.iter().map(|c| self.columns[*c].get(*r)).collect())
            .collect()
    }

    /// Rank on each source bigrading.
    pub fn ranks(&self) -> BTreeMap<Bigrading, usize> {
        self.source_dims()
            .support()
            .map(|b| {
                let m = self.block(b);
                (b, dense::rank(&m, self.source_dims().get(b)))
            })
            .collect()
    }

    pub fn rank_at(&self, b: Bigrading) -> usize {
        self.ranks().get(&b).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks().values().sum()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.len() == self.target.len() && self.total_rank() == self.source.len()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &KhMap) -> Result<KhMap, CobordismError> {
        if self.target != next.source {
            return Err(CobordismError::Map("maps do not compose".into()));
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut out = SparseVec::new();
                for (t, x) in c.iter() {
                    out.add_vec(x, &next.columns[t as usize]);
                }
                out
            })
            .collect();
        let bidegree = (self.bidegree.0 + next.bidegree.0, self.bidegree.1 + next.bidegree.1);
        KhMap::new(self.source.clone(), next.target.clone(), columns, bidegree)
    }

    /// Equal to `other` or to `-other`.
    pub fn equals_up_to_sign(&self, other: &KhMap) -> bool {
        if (&self.source, &self.target, self.bidegree) != (&other.source, &other.target, other.bidegree) {
            return false;
        }
        let neg: Vec<SparseVec> = other
            .columns
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.scale(&Rational::from_integer(-1));
                c
            })
            .collect();
        self.columns == other.columns || self.columns == neg
    }

    pub fn report(&self) -> MapReport {
        MapReport {
            bidegree: [self.bidegree.0, self.bidegree.1],
            ranks: self.ranks().into_iter().map(|((i, j), rank)| RankEntry { i, j, rank }).collect(),
            total_rank: self.total_rank(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::MoveKind;
    use crate::diagram::{braid_closure, parse_pd, torus_braid, BraidWord};
    use crate::exactalg::ChainComplex;

    fn trefoil() -> PlanarDiagram {
        braid_closure(&torus_braid(2, 3).unwrap())
    }

    fn movie(d: &PlanarDiagram, text: &str) -> Movie {
        let mv: Vec<Move> = text.lines().filter(|l| !l.trim().is_empty()).map(|l| l.parse().unwrap()).collect();
        Movie::new(d.clone(), &mv).unwrap()
    }

    /// `d' f = f d` on every generator.
    fn check_chain_map(m: &Movie, spec: FrobeniusSpec) {
        let f = induced_chain_map(m, spec).unwrap();
        let a = CubeComplex::new(m.start(), spec, true, DEFAULT_BUDGET).unwrap();
        let b = CubeComplex::new(m.end(), spec, true, DEFAULT_BUDGET).unwrap();
        let (ca, cb): (&ChainComplex, &ChainComplex) = (a.complex(), b.complex());
        for g in 0..ca.len() as u32 {
            let e = SparseVec::basis(g);
            let lhs = cb.apply(&f.apply(&e));
            let rhs = f.apply(&ca.apply(&e));
            assert_eq!(lhs, rhs, "generator {g} of {}", m.start());
            if spec == FrobeniusSpec::khovanov() {
                let (di, dj) = m.bidegree();
                for (t, _) in f.apply(&e).iter() {
                    let (x, y) = (ca.grading(g), cb.grading(t));
                    assert_eq!((y.0 - x.0, y.1 - x.1), (di, dj));
                }
            }
        }
    }

    #[test]
    fn empty_movie_is_identity() {
        let m = Movie::empty(trefoil());
        let f = induced_kh_map(&m).unwrap();
        assert_eq!(f, KhMap::identity(&KhHomology::new(&trefoil(), DEFAULT_BUDGET).unwrap()));
        assert_eq!(f.ranks().values().copied().collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(f.total_rank(), 3);
    }

    #[test]
    fn birth_includes_with_v_plus() {
        let t = trefoil();
        let m = movie(&t, "BIRTH 9");
        let f = induced_chain_map(&m, FrobeniusSpec::khovanov()).unwrap();
        // the new circle takes the lowest label bit, v+ is 0
        let a = CubeLayout::new(&t, true, DEFAULT_BUDGET).unwrap();
        let b = CubeLayout::new(m.end(), true, DEFAULT_BUDGET).unwrap();
        for g in 0..a.len() as u32 {
            let (v, bits) = a.decode(g);
            assert_eq!(f.apply(&SparseVec::basis(g)), SparseVec::basis(b.encode(v, bits << 1)));
        }
        check_chain_map(&m, FrobeniusSpec::khovanov());
        check_chain_map(&m, FrobeniusSpec::lee());
    }

    #[test]
    fn birth_then_death_is_zero() {
        let m = movie(&trefoil(), "BIRTH 9\nDEATH 9");
        let f = induced_chain_map(&m, FrobeniusSpec::khovanov()).unwrap();
        for g in 0..20 {
            assert!(f.apply(&SparseVec::basis(g)).is_zero());
        }
        assert_eq!(induced_kh_map(&m).unwrap().total_rank(), 0);
    }

    #[test]
    fn saddles_are_chain_maps() {
        let t = trefoil();
        let b = t.basepoint().label();
        for text in [
            "BIRTH 9\nSADDLE 9 3",
            "BIRTH 9\nSADDLE 3 9",
            "SADDLE 2 9",
            &format!("SADDLE {b} 9 base=9"),
            "BIRTH 9\nBIRTH 10\nSADDLE 9 10",
            "BIRTH 9\nSADDLE 9 11",
        ] {
            let m = movie(&t, text);
            for spec in [FrobeniusSpec::khovanov(), FrobeniusSpec::lee()] {
                check_chain_map(&m, spec);
            }
        }
        let mut arc_pairs = 0;
        for a in t.arcs() {
            for b in t.arcs().filter(|b| *b > a) {
                if !crate::diagram::reidemeister::saddle_compatible(&t, a, b) {
                    continue;
                }
                let m = movie(&t, &format!("SADDLE {a} {b}"));
                for spec in [FrobeniusSpec::khovanov(), FrobeniusSpec::lee()] {
                    check_chain_map(&m, spec);
                }
                arc_pairs += 1;
            }
        }
        assert!(arc_pairs > 0);
    }

    #[test]
    fn merge_and_split_of_a_small_circle() {
        let t = trefoil();
        // birth then merge is the identity on homology
        let f = induced_kh_map(&movie(&t, "BIRTH 9\nSADDLE 2 9")).unwrap();
        assert!(f.equals_up_to_sign(&KhMap::identity(&KhHomology::new(&t, DEFAULT_BUDGET).unwrap())));
        // split then death as well
        let g = induced_kh_map(&movie(&t, "SADDLE 2 9\nDEATH 9")).unwrap();
        assert!(g.is_isomorphism());
        assert_eq!(g.bidegree(), (0, 0));
    }

    #[test]
    fn unknot_self_concordance() {
        // a tube between the unknot and a small circle, and back
        let u = parse_pd("U").unwrap();
        let m = movie(&u, "BIRTH\nSADDLE 1 2\nSADDLE 1 2\nDEATH 2");
        assert_eq!(m.normal_form().unwrap().k, 1);
        let f = induced_kh_map(&m).unwrap();
        assert_eq!(f.report(), MapReport { bidegree: [0, 0], ranks: vec![RankEntry { i: 0, j: 0, rank: 1 }], total_rank: 1 });
        // oracle: the product of stage maps
        let pieces: Vec<Range<usize>> = (0..m.len()).map(|k| k..k + 1).collect();
        let stages = stage_maps(&m, &pieces).unwrap();
        let mut acc = stages[0].clone();
        for s in &stages[1..] {
            acc = acc.then(s).unwrap();
        }
        assert!(acc.equals_up_to_sign(&f));
    }

    #[test]
    fn kink_removal_is_an_isomorphism() {
        for spec_text in ["R1 1 + L", "R1 1 - L", "R1 1 + R", "R1 1 - R"] {
            let kinked = movie(&parse_pd("U").unwrap(), spec_text);
            let m = movie(kinked.end(), "R1INV 0");
            check_chain_map(&m, FrobeniusSpec::khovanov());
            check_chain_map(&kinked, FrobeniusSpec::khovanov());
            let f = induced_kh_map(&m).unwrap();
            assert!(f.is_isomorphism());
            assert_eq!(f.total_rank(), 1);
        }
    }

    #[test]
    fn first_moves_on_a_trefoil() {
        let t = trefoil();
        for a in t.arcs() {
            for text in ["+ L", "+ R", "- L", "- R"] {
                let m = movie(&t, &format!("R1 {a} {text}"));
                check_chain_map(&m, FrobeniusSpec::khovanov());
                let f = induced_kh_map(&m).unwrap();
                assert!(f.is_isomorphism(), "R1 {a} {text}");
                let back = induced_kh_map(&m.reverse()).unwrap();
                assert!(back.is_isomorphism());
            }
        }
    }

    #[test]
    fn second_moves_are_isomorphisms() {
        let t = trefoil();
        let mut tried = 0;
        for a in t.arcs() {
            for b in t.arcs() {
                for face in 0..2 {
                    let mv = Move::R2 { over: a, under: b, face, at: None, labels: None };
                    let Ok(m) = Movie::new(t.clone(), &[mv]) else { continue };
                    tried += 1;
                    check_chain_map(&m, FrobeniusSpec::khovanov());
                    assert!(induced_kh_map(&m).unwrap().is_isomorphism(), "{}", m.to_text());
                    assert!(induced_kh_map(&m.reverse()).unwrap().is_isomorphism());
                }
            }
        }
        assert!(tried >= 6);
    }

    #[test]
    fn third_move_is_an_isomorphism() {
        let mut done = 0;
        for w in [vec![1, 2, 1, 2, 1, 2], vec![1, 2, 1, -2, 1, 2], vec![1, 2, 1, 2, 1, 2, 1, 2]] {
            let d = braid_closure(&BraidWord::new(3, w).unwrap());
            for [x, y, z] in crate::diagram::reidemeister::r3_triangles(&d) {
                let m = movie(&d, &format!("R3 {x} {y} {z}"));
                if m.start().basepoint_component().is_empty() {
                    continue;
                }
                let Ok(f) = induced_kh_map(&m) else { continue };
                check_chain_map(&m, FrobeniusSpec::khovanov());
                assert!(f.is_isomorphism());
                let naive = CubeComplex::new(&d, FrobeniusSpec::khovanov(), true, DEFAULT_BUDGET).unwrap();
                assert_eq!(f.source_dims(), naive.complex().homology_dims().unwrap());
                assert!(induced_kh_map(&m.reverse()).unwrap().is_isomorphism());
                done += 1;
            }
        }
        assert!(done >= 8, "{done}");
    }

    #[test]
    fn third_move_limits_are_reported() {
        // the basepoint sits on a side of this triangle
        let d = braid_closure(&BraidWord::new(3, vec![1, 2, 1, 2, 1, 2]).unwrap());
        let m = movie(&d, "R3 0 4 5");
        let e = induced_kh_map(&m).unwrap_err();
        assert!(e.to_string().contains("basepoint"), "{e}");
    }

    #[test]
    fn composition_matches_product() {
        let t = trefoil();
        let m = movie(&t, "BIRTH 9\nSADDLE 9 2\nR1 1 + L\nR2 1 3");
        let [x, y] = m.steps()[3].new_local[..] else { panic!() };
        let k = m.steps()[2].new_local[0];
        let m = m.compose(&movie(m.end(), &format!("R2INV {x} {y}\nR1INV {k}"))).unwrap();
        assert_eq!(m.count(MoveKind::Saddle), 1);
        let f = induced_kh_map(&m).unwrap();
        let pieces = [0..2, 2..4, 4..6];
        let parts = stage_maps(&m, &pieces).unwrap();
        let prod = parts[0].then(&parts[1]).unwrap().then(&parts[2]).unwrap();
        assert!(prod.equals_up_to_sign(&f));
        assert_eq!(prod.ranks(), f.ranks());
        assert!(f.is_isomorphism());
    }
}
