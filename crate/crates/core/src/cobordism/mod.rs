//! Movies of elementary cobordism moves and the maps they induce on
//! Khovanov homology.
//!
//! A movie is a start diagram and a list of moves; every intermediate
//! diagram (slice) keeps a basepoint. The text format has a `START` line
//! followed by one move per line, `#` starting a comment:
//!
//! ```text
//! START @t45
//! BIRTH
//! SADDLE 3 41
//! SADDLE 7 41
//! DEATH 41
//! ```

mod induced;
mod maps;
mod moves;

pub use induced::{induced_chain_map, induced_kh_map, stage_maps, ChainMap, Evaluator, KhMap, MapReport, RankEntry};
pub use moves::{Move, MoveKind};

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::diagram::{parse_pd, PlanarDiagram};
use crate::khovanov::KhError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("move {index} ({mv}): {msg}")]
    InvalidMove { index: usize, mv: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("movie does not splice: first ends with {end}, second starts with {start}")]
    Splice { end: String, start: String },
    #[error("move {index} ({kind:?}) is out of order for the five-stage normal form")]
    OutOfOrder { index: usize, kind: MoveKind },
    #[error("not a concordance: {births} births, {saddles} saddles, {deaths} deaths give Euler characteristic {}", *births as i64 + *deaths as i64 - *saddles as i64)]
    NotConcordance { births: usize, saddles: usize, deaths: usize },
    #[error("slice {slice} has {components} components, a knot is required")]
    NotAKnot { slice: usize, components: usize },
    #[error(transparent)]
    Kh(#[from] KhError),
    #[error("chain map: {0}")]
    Map(String),
}

/// One move of a movie as carried out, with the move that undoes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub mv: Move,
    pub inverse: Move,
    /// Crossings of the slice before the move that take part in it.
    pub old_local: Vec<usize>,
    /// Crossings of the slice after the move that take part in it.
    pub new_local: Vec<usize>,
}

/// A validated movie: all slices and the resolved moves between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Movie {
    slices: Vec<PlanarDiagram>,
    steps: Vec<Step>,
}

/// Applies moves to a diagram, failing at the first invalid one.
pub fn apply_moves(start: &PlanarDiagram, moves: &[Move]) -> Result<PlanarDiagram, CobordismError> {
    Ok(Movie::new(start.clone(), moves)?.end().clone())
}

impl Movie {
    pub fn empty(start: PlanarDiagram) -> Movie {
        Movie { slices: vec![start], steps: Vec::new() }
    }

    pub fn new(start: PlanarDiagram, moves: &[Move]) -> Result<Movie, CobordismError> {
        let mut m = Movie::empty(start);
        for mv in moves {
            m.push(mv)?;
        }
        Ok(m)
    }

    /// Appends a move to the end of the movie.
    pub fn push(&mut self, mv: &Move) -> Result<(), CobordismError> {
        let index = self.steps.len();
        let a = mv.apply(self.end()).map_err(|e| CobordismError::InvalidMove {
            index,
            mv: mv.to_string(),
            msg: e.to_string(),
        })?;
        self.slices.push(a.diagram);
        self.steps.push(Step { mv: a.resolved, inverse: a.inverse, old_local: a.old_local, new_local: a.new_local });
        Ok(())
    }

    pub fn start(&self) -> &PlanarDiagram {
        &self.slices[0]
    }

    pub fn end(&self) -> &PlanarDiagram {
        self.slices.last().unwrap()
    }

    /// Slice `k` is the diagram before move `k`; there is one more slice
    /// than moves.
    pub fn slices(&self) -> &[PlanarDiagram] {
        &self.slices
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> + '_ {
        self.steps.iter().map(|s| &s.mv)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, kind: MoveKind) -> usize {
        self.moves().filter(|m| m.kind() == kind).count()
    }

    /// Euler characteristic of the surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.moves().map(|m| m.euler()).sum()
    }

    /// Expected bidegree of the induced map.
    pub fn bidegree(&self) -> (i64, i64) {
        (0, self.euler_characteristic())
    }

    /// The moves from `range`, as a movie of their own.
    pub fn sub_movie(&self, range: Range<usize>) -> Movie {
        Movie {
            slices: self.slices[range.start..=range.end].to_vec(),
            steps: self.steps[range].to_vec(),
        }
    }

    /// The same surface read backwards.
    pub fn reverse(&self) -> Movie {
        let slices = self.slices.iter().rev().cloned().collect();
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Step {
                mv: s.inverse.clone(),
                inverse: s.mv.clone(),
                old_local: s.new_local.clone(),
                new_local: s.old_local.clone(),
            })
            .collect();
        Movie { slices, steps }
    }

    /// This movie followed by `next`.
    pub fn compose(&self, next: &Movie) -> Result<Movie, CobordismError> {
        if self.end() != next.start() {
            return Err(CobordismError::Splice {
                end: self.end().to_pd_string(),
                start: next.start().to_pd_string(),
            });
        }
        let mut slices = self.slices.clone();
        slices.extend(next.slices[1..].iter().cloned());
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(Movie { slices, steps })
    }

    /// Parses the text format. `resolve` turns the argument of the `START`
    /// line into a diagram.
    pub fn parse_with(
        text: &str,
        mut resolve: impl FnMut(&str) -> Result<PlanarDiagram, String>,
    ) -> Result<Movie, CobordismError> {
        let mut movie: Option<Movie> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let perr = |msg: String| CobordismError::Parse { line, msg };
            match movie.as_mut() {
                None => {
                    let arg = body
                        .strip_prefix("START")
                        .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
                        .ok_or_else(|| perr("a movie begins with a START line".into()))?;
                    let d = resolve(arg.trim()).map_err(perr)?;
                    movie = Some(Movie::empty(d));
                }
                Some(m) => {
                    let mv: Move = body.parse().map_err(perr)?;
                    m.push(&mv).map_err(|e| perr(e.to_string()))?;
                }
            }
        }
        movie.ok_or(CobordismError::Parse { line: 0, msg: "missing START line".into() })
    }

    /// Parses a movie whose `START` line holds an inline PD code or braid.
    pub fn parse(text: &str) -> Result<Movie, CobordismError> {
        Movie::parse_with(text, |s| parse_pd(s).map_err(|e| e.to_string()))
    }

    /// Text form with the start diagram inline and every move resolved.
    pub fn to_text(&self) -> String {
        let mut s = format!("START {}\n", self.start().to_pd_string());
        for m in self.moves() {
            s.push_str(&format!("{m}\n"));
        }
        s
    }

    /// Splits the movie into its five stages and checks that it describes a
    /// concordance between knots.
    pub fn normal_form(&self) -> Result<NormalForm, CobordismError> {
        // stage of each move: births, R-moves, saddles, R-moves, deaths
        let mut stage = 0usize;
        let mut ends = [0usize; 5];
        for (index, m) in self.moves().enumerate() {
            let kind = m.kind();
            let want = match kind {
                MoveKind::Birth => 0,
                MoveKind::Saddle => 2,
                MoveKind::Death => 4,
                _ if stage <= 2 && self.steps[..index].iter().all(|s| s.mv.kind() != MoveKind::Saddle) => 1,
                _ => 3,
            };
            if want < stage {
                return Err(CobordismError::OutOfOrder { index, kind });
            }
            stage = want;
            for e in ends.iter_mut().skip(stage) {
                *e = index + 1;
            }
        }
        let (births, saddles, deaths) =
            (self.count(MoveKind::Birth), self.count(MoveKind::Saddle), self.count(MoveKind::Death));
        if saddles != births + deaths {
            return Err(CobordismError::NotConcordance { births, saddles, deaths });
        }
        for slice in [0, self.slices.len() - 1] {
            let components = self.slices[slice].component_count();
            if components != 1 {
                return Err(CobordismError::NotAKnot { slice, components });
            }
        }
        let mut stages: [Range<usize>; 5] = Default::default();
        let mut lo = 0;
        for (k, hi) in ends.iter().enumerate() {
            let hi = (*hi).max(lo);
            stages[k] = lo..hi;
            lo = hi;
        }
        Ok(NormalForm { k: births, l: deaths, stages })
    }
}

impl fmt::Display for Movie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A concordance movie split into births, R-moves, saddles, R-moves and
/// deaths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Number of births.
    pub k: usize,
    /// Number of deaths.
    pub l: usize,
    /// Move ranges of the five stages.
    pub stages: [Range<usize>; 5],
}

impl NormalForm {
    /// Slice indices of the six diagrams bounding the stages.
    pub fn boundaries(&self) -> [usize; 6] {
        let s = &self.stages;
        [s[0].start, s[0].end, s[1].end, s[2].end, s[3].end, s[4].end]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, torus_braid};

    fn trefoil() -> PlanarDiagram {
        braid_closure(&torus_braid(2, 3).unwrap())
    }

    fn moves(text: &str) -> Vec<Move> {
        text.lines().filter(|l| !l.trim().is_empty()).map(|l| l.parse().unwrap()).collect()
    }

    #[test]
    fn empty_movie() {
        let m = Movie::empty(trefoil());
        assert_eq!(m.end(), &trefoil());
        assert_eq!(apply_moves(&trefoil(), &[]).unwrap(), trefoil());
        let nf = m.normal_form().unwrap();
        assert_eq!((nf.k, nf.l), (0, 0));
        assert_eq!(m.reverse(), m);
        assert_eq!(m.compose(&m).unwrap(), m);
    }

    #[test]
    fn birth_gives_unlink() {
        let u = PlanarDiagram::unknot();
        let d = apply_moves(&u, &[Move::Birth { circle: None }]).unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.free_circles(), &[1, 2]);
    }

    #[test]
    fn death_of_basepoint_circle_fails() {
        let u = PlanarDiagram::unknot();
        let e = Movie::new(u, &moves("BIRTH\nDEATH 1")).unwrap_err();
        assert!(matches!(e, CobordismError::InvalidMove { index: 1, .. }), "{e}");
    }

    #[test]
    fn normal_form_counts() {
        let t = trefoil();
        let a = t.basepoint().label();
        let m = Movie::new(t.clone(), &moves(&format!("BIRTH 50\nSADDLE {a} 50\nSADDLE {a} 50\nDEATH 50"))).unwrap();
        let nf = m.normal_form().unwrap();
        assert_eq!((nf.k, nf.l), (1, 1));
        assert_eq!(nf.boundaries(), [0, 1, 1, 3, 3, 4]);
        // one birth and one merge is a valid concordance
        let m = Movie::new(t.clone(), &moves(&format!("BIRTH 50\nSADDLE {a} 50"))).unwrap();
        assert_eq!(m.normal_form().unwrap().k, 1);
        // one birth with no saddle is not
        let m = Movie::new(t.clone(), &moves("BIRTH 50")).unwrap();
        assert!(matches!(m.normal_form(), Err(CobordismError::NotConcordance { .. })));
        // a birth after a saddle is out of order
        let m = Movie::new(t, &moves(&format!("BIRTH 50\nSADDLE {a} 50\nBIRTH 51\nSADDLE {a} 51"))).unwrap();
        assert!(matches!(m.normal_form(), Err(CobordismError::OutOfOrder { index: 2, .. })));
    }

    #[test]
    fn r_moves_go_to_the_right_stage() {
        let t = trefoil();
        let m = Movie::new(t.clone(), &moves("R1 1 + L\nR1INV 3")).unwrap();
        let nf = m.normal_form().unwrap();
        assert_eq!(nf.stages[1], 0..2);
        assert_eq!(m.end(), &t);
    }

    #[test]
    fn arc_saddles_split_and_rejoin() {
        let t = trefoil();
        // arcs 1 and 3 bound a common face the same way round
        let pairs: Vec<(u32, u32)> = t
            .arcs()
            .flat_map(|a| t.arcs().map(move |b| (a, b)))
            .filter(|(a, b)| a < b && crate::diagram::reidemeister::saddle_compatible(&t, *a, *b))
            .collect();
        assert!(!pairs.is_empty());
        for (a, b) in pairs {
            let m = Movie::new(t.clone(), &[Move::Saddle { a, b, base: None }]).unwrap();
            assert_eq!(m.end().component_count(), 2);
            let back = m.compose(&m.reverse()).unwrap();
            assert_eq!(back.end(), &t);
        }
    }

    #[test]
    fn reverse_is_an_involution() {
        let t = trefoil();
        let text = "BIRTH\nSADDLE 1 7\nR1 2 - R\nR2 1 3\nR2INV 4 5\nR1INV 3\nSADDLE 1 7\nDEATH 7";
        let m = Movie::new(t.clone(), &moves(text)).unwrap();
        let r = m.reverse();
        assert_eq!(r.start(), m.end());
        assert_eq!(r.end(), m.start());
        // the reverse replays as a movie of its own
        let replay = Movie::new(r.start().clone(), &r.moves().cloned().collect::<Vec<_>>()).unwrap();
        assert_eq!(replay, r);
        assert_eq!(r.reverse(), m);
        let loop_ = m.compose(&r).unwrap();
        assert_eq!(loop_.start(), loop_.end());
    }

    #[test]
    fn text_round_trip() {
        let t = trefoil();
        let m = Movie::new(t, &moves("BIRTH\nSADDLE 7 1\nR1 2 - R\nR2 1 3")).unwrap();
        assert!(m.to_text().contains("face="));
        let text = m.to_text();
        assert_eq!(Movie::parse(&text).unwrap(), m);
        assert!(Movie::parse("BIRTH").is_err());
        let e = Movie::parse("START U\nSADDLE 1").unwrap_err();
        assert!(matches!(e, CobordismError::Parse { line: 2, .. }));
    }

    #[test]
    fn compose_checks_the_splice() {
        let t = trefoil();
        let u = PlanarDiagram::unknot();
        assert!(matches!(
            Movie::empty(t).compose(&Movie::empty(u)),
            Err(CobordismError::Splice { .. })
        ));
    }
}
