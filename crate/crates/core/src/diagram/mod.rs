//! Oriented, basepointed planar diagrams of knots and links.
//!
//! A crossing is written `X[a,b,c,d]`: the four arc labels in
//! counterclockwise order, starting from the incoming under-strand. So the
//! under-strand runs `a -> c`, and the crossing is positive when the
//! over-strand runs `d -> b`. Components with no crossings at all are kept as
//! separately labelled free circles.

mod braid;
mod faces;
mod parse;
pub mod reidemeister;

pub use braid::{braid_closure, parse_braid, torus_braid, BraidWord};
pub use faces::{Face, FaceSide};
pub use parse::parse_pd;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc {label} appears {count} times (every arc must appear exactly twice)")]
    LabelCount { label: u32, count: usize },
    #[error("label {0} is used both by a crossing arc and a free circle")]
    LabelClash(u32),
    #[error("arc labels must be positive")]
    ZeroLabel,
    #[error("inconsistent orientation at arc {0}")]
    Orientation(u32),
    #[error("crossing {index} has sign {given} but its orientation gives {actual}")]
    Sign { index: usize, given: i8, actual: i8 },
    #[error("diagram is not planar: {faces} faces where {expected} are required")]
    NonPlanar { faces: usize, expected: usize },
    #[error("basepoint {0} is not an arc or circle of the diagram")]
    Basepoint(u32),
    #[error("invalid braid word: {0}")]
    Braid(String),
    #[error("{0}")]
    Move(String),
}

/// One crossing: arc labels counterclockwise from the incoming under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub arcs: [u32; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Position (0..4) of the incoming over-strand.
    pub fn over_in_pos(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }

    pub fn over_out_pos(&self) -> usize {
        if self.sign > 0 {
            1
        } else {
            3
        }
    }

    /// True if position `p` is an incoming end.
    pub fn is_incoming(&self, p: usize) -> bool {
        p == 0 || p == self.over_in_pos()
    }

    /// Position where the strand entering at `p` leaves.
    pub fn through(p: usize) -> usize {
        (p + 2) % 4
    }
}

/// Where the basepoint sits: on a crossing arc or on a free circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basepoint {
    Arc(u32),
    Circle(u32),
}

impl Basepoint {
    pub fn label(&self) -> u32 {
        match self {
            Basepoint::Arc(l) | Basepoint::Circle(l) => *l,
        }
    }
}

/// Position of one end of an arc: crossing index and slot 0..4.
pub type Slot = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArcEnds {
    /// Slot where the arc starts (an outgoing slot).
    pub tail: Slot,
    /// Slot where the arc ends (an incoming slot).
    pub head: Slot,
}

/// An oriented planar diagram with a basepoint. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    free: Vec<u32>,
    basepoint: Basepoint,
    ends: BTreeMap<u32, ArcEnds>,
}

impl PlanarDiagram {
    /// Builds a diagram from raw tuples, deducing orientation and signs.
    pub fn from_tuples(
        tuples: &[[u32; 4]],
        free: &[u32],
        basepoint: Option<u32>,
    ) -> Result<Self, DiagramError> {
        let signs = deduce_signs(tuples)?;
        let crossings = tuples
            .iter()
            .zip(signs)
            .map(|(arcs, sign)| Crossing { arcs: *arcs, sign })
            .collect();
        Self::build(crossings, free.to_vec(), basepoint)
    }

    /// Builds a diagram from crossings with explicit signs, checking them.
    pub fn from_crossings(
        crossings: Vec<Crossing>,
        free: Vec<u32>,
        basepoint: Option<u32>,
    ) -> Result<Self, DiagramError> {
        let tuples: Vec<[u32; 4]> = crossings.iter().map(|c| c.arcs).collect();
        // Components lying over everything have no forced direction; the
        // given signs decide them.
        let signs = deduce_signs_with_hint(&tuples, Some(&crossings))?;
        for (index, (c, s)) in crossings.iter().zip(&signs).enumerate() {
            if c.sign != *s {
                return Err(DiagramError::Sign { index, given: c.sign, actual: *s });
            }
        }
        Self::build(crossings, free, basepoint)
    }

    fn build(
        crossings: Vec<Crossing>,
        mut free: Vec<u32>,
        basepoint: Option<u32>,
    ) -> Result<Self, DiagramError> {
        let mut occ: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (k, c) in crossings.iter().enumerate() {
            for (p, a) in c.arcs.iter().enumerate() {
                if *a == 0 {
                    return Err(DiagramError::ZeroLabel);
                }
                occ.entry(*a).or_default().push((k, p));
            }
        }
        for (label, slots) in &occ {
            if slots.len() != 2 {
                return Err(DiagramError::LabelCount { label: *label, count: slots.len() });
            }
        }
        free.sort_unstable();
        for w in free.windows(2) {
            if w[0] == w[1] {
                return Err(DiagramError::LabelCount { label: w[0], count: 2 });
            }
        }
        for f in &free {
            if *f == 0 {
                return Err(DiagramError::ZeroLabel);
            }
            if occ.contains_key(f) {
                return Err(DiagramError::LabelClash(*f));
            }
        }
        let mut ends = BTreeMap::new();
        for (label, slots) in &occ {
            let (s0, s1) = (slots[0], slots[1]);
            let in0 = crossings[s0.0].is_incoming(s0.1);
            let in1 = crossings[s1.0].is_incoming(s1.1);
            if in0 == in1 {
                return Err(DiagramError::Orientation(*label));
            }
            let (tail, head) = if in0 { (s1, s0) } else { (s0, s1) };
            ends.insert(*label, ArcEnds { tail, head });
        }
        let basepoint = match basepoint {
            Some(b) if ends.contains_key(&b) => Basepoint::Arc(b),
            Some(b) if free.contains(&b) => Basepoint::Circle(b),
            Some(b) => return Err(DiagramError::Basepoint(b)),
            None if ends.contains_key(&1) => Basepoint::Arc(1),
            None if free.contains(&1) => Basepoint::Circle(1),
            None => match (ends.keys().next(), free.first()) {
                (Some(a), _) => Basepoint::Arc(*a),
                (None, Some(c)) => Basepoint::Circle(*c),
                (None, None) => {
                    // The empty diagram is treated as a single unknot.
                    free.push(1);
                    Basepoint::Circle(1)
                }
            },
        };
        let d = PlanarDiagram { crossings, free, basepoint, ends };
        d.check_planar()?;
        Ok(d)
    }

    /// The standard zero-crossing unknot, one circle labelled 1.
    pub fn unknot() -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            free: vec![1],
            basepoint: Basepoint::Circle(1),
            ends: BTreeMap::new(),
        }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_circles(&self) -> &[u32] {
        &self.free
    }

    pub fn basepoint(&self) -> Basepoint {
        self.basepoint
    }

    /// Arc labels in increasing order (free circles excluded).
    pub fn arcs(&self) -> impl Iterator<Item = u32> + '_ {
        self.ends.keys().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.ends.len()
    }

    pub fn has_arc(&self, a: u32) -> bool {
        self.ends.contains_key(&a)
    }

    pub fn has_circle(&self, c: u32) -> bool {
        self.free.binary_search(&c).is_ok()
    }

    pub fn arc_ends(&self, a: u32) -> Option<ArcEnds> {
        self.ends.get(&a).copied()
    }

    /// Every label in use, arcs and free circles.
    pub fn labels(&self) -> BTreeSet<u32> {
        self.ends.keys().chain(self.free.iter()).copied().collect()
    }

    /// Smallest label not in use.
    pub fn fresh_label(&self) -> u32 {
        self.labels().iter().next_back().map_or(1, |m| m + 1)
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    /// Arc leaving the crossing slot `(k, p)`.
    pub fn arc_at(&self, s: Slot) -> u32 {
        self.crossings[s.0].arcs[s.1]
    }

    /// The arc following `a` along the orientation.
    pub fn next_arc(&self, a: u32) -> u32 {
        let (k, p) = self.ends[&a].head;
        self.crossings[k].arcs[Crossing::through(p)]
    }

    /// Crossing components as arc cycles in orientation order, each starting
    /// at its smallest label; ordered by that label.
    pub fn arc_components(&self) -> Vec<Vec<u32>> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for a in self.ends.keys() {
            if seen.contains(a) {
                continue;
            }
            let mut comp = vec![*a];
            seen.insert(*a);
            let mut x = self.next_arc(*a);
            while x != *a {
                seen.insert(x);
                comp.push(x);
                x = self.next_arc(x);
            }
            comps.push(comp);
        }
        comps
    }

    /// Number of link components, free circles included.
    pub fn component_count(&self) -> usize {
        self.arc_components().len() + self.free.len()
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    /// Mirror image: every crossing changes over and under.
    pub fn mirror(&self) -> PlanarDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.arcs;
                if c.sign > 0 {
                    Crossing { arcs: [d, a, b, cc], sign: -1 }
                } else {
                    Crossing { arcs: [b, cc, d, a], sign: 1 }
                }
            })
            .collect();
        PlanarDiagram::build(crossings, self.free.clone(), Some(self.basepoint.label()))
            .expect("mirror of a valid diagram is valid")
    }

    /// Same diagram with a different basepoint.
    pub fn with_basepoint(&self, b: u32) -> Result<PlanarDiagram, DiagramError> {
        PlanarDiagram::build(self.crossings.clone(), self.free.clone(), Some(b))
    }

    /// Renumbers arcs `1..=2n` along the orientation, starting with the
    /// basepoint's component (at the basepoint arc), then the remaining
    /// components in order of their smallest old label. Free circles follow.
    pub fn relabeled(&self) -> PlanarDiagram {
        let mut map: FxHashMap<u32, u32> = FxHashMap::default();
        let mut next = 1u32;
        let comps = self.arc_components();
        let mut order: Vec<Vec<u32>> = Vec::new();
        if let Basepoint::Arc(b) = self.basepoint {
            let comp = comps.iter().find(|c| c.contains(&b)).unwrap();
            let start = comp.iter().position(|x| *x == b).unwrap();
            let mut rotated = comp[start..].to_vec();
            rotated.extend_from_slice(&comp[..start]);
            order.push(rotated);
        }
        for c in &comps {
            if !order.iter().any(|o| o.contains(&c[0])) {
                order.push(c.clone());
            }
        }
        for c in &order {
            for a in c {
                map.insert(*a, next);
                next += 1;
            }
        }
        let mut free = Vec::new();
        if let Basepoint::Circle(c) = self.basepoint {
            map.insert(c, next);
            free.push(next);
            next += 1;
        }
        for c in &self.free {
            if !map.contains_key(c) {
                map.insert(*c, next);
                free.push(next);
                next += 1;
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing { arcs: c.arcs.map(|a| map[&a]), sign: c.sign })
            .collect();
        PlanarDiagram::build(crossings, free, Some(map[&self.basepoint.label()]))
            .expect("relabelling preserves validity")
    }

    /// Applies a label substitution (must be injective on used labels).
    pub fn renamed(&self, f: impl Fn(u32) -> u32) -> Result<PlanarDiagram, DiagramError> {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing { arcs: c.arcs.map(&f), sign: c.sign })
            .collect();
        let free = self.free.iter().map(|c| f(*c)).collect();
        PlanarDiagram::build(crossings, free, Some(f(self.basepoint.label())))
    }

    /// Component containing the basepoint, as an arc cycle starting at the
    /// basepoint arc. Empty when the basepoint is on a free circle.
    pub fn basepoint_component(&self) -> Vec<u32> {
        match self.basepoint {
            Basepoint::Circle(_) => Vec::new(),
            Basepoint::Arc(b) => {
                let mut comp = vec![b];
                let mut x = self.next_arc(b);
                while x != b {
                    comp.push(x);
                    x = self.next_arc(x);
                }
                comp
            }
        }
    }

    /// PD text for this diagram, accepted by [`parse_pd`].
    pub fn to_pd_string(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X[{},{},{},{}]", c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3]))
            .collect();
        for c in &self.free {
            parts.push(format!("U[{c}]"));
        }
        parts.push(format!("base={}", self.basepoint.label()));
        parts.join(" ")
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarDiagram({})", self.to_pd_string())
    }
}

fn deduce_signs(tuples: &[[u32; 4]]) -> Result<Vec<i8>, DiagramError> {
    deduce_signs_with_hint(tuples, None)
}

/// Solves for the direction of every over-strand. Under-strands are fixed by
/// the tuple convention; each arc must then have one incoming and one
/// outgoing end.
fn deduce_signs_with_hint(
    tuples: &[[u32; 4]],
    hint: Option<&[Crossing]>,
) -> Result<Vec<i8>, DiagramError> {
    let mut occ: FxHashMap<u32, Vec<Slot>> = FxHashMap::default();
    for (k, t) in tuples.iter().enumerate() {
        for (p, a) in t.iter().enumerate() {
            occ.entry(*a).or_default().push((k, p));
        }
    }
    for (label, slots) in &occ {
        if slots.len() != 2 {
            return Err(DiagramError::LabelCount { label: *label, count: slots.len() });
        }
    }
    // incoming[k][p]: Some(true) when slot is an incoming end.
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[Some(true), None, Some(false), None]; tuples.len()];
    let mut stack: Vec<Slot> = Vec::new();
    for k in 0..tuples.len() {
        stack.push((k, 0));
        stack.push((k, 2));
    }
    let mut seed = 0usize;
    loop {
        while let Some((k, p)) = stack.pop() {
            let v = incoming[k][p].unwrap();
            // the other end of the same arc
            let a = tuples[k][p];
            let other = occ[&a].iter().copied().find(|s| *s != (k, p)).unwrap();
            match incoming[other.0][other.1] {
                None => {
                    incoming[other.0][other.1] = Some(!v);
                    stack.push(other);
                }
                Some(w) if w == v => return Err(DiagramError::Orientation(a)),
                _ => {}
            }
            // the partner slot on the same over-strand
            if p % 2 == 1 {
                let q = Crossing::through(p);
                match incoming[k][q] {
                    None => {
                        incoming[k][q] = Some(!v);
                        stack.push((k, q));
                    }
                    Some(w) if w == v => return Err(DiagramError::Orientation(tuples[k][q])),
                    _ => {}
                }
            }
        }
        // Any over-strand still undecided belongs to a component that never
        // passes under; orient it by the hint, else as a positive crossing.
        while seed < tuples.len() && incoming[seed][1].is_some() {
            seed += 1;
        }
        if seed == tuples.len() {
            break;
        }
        let positive = hint.map_or(true, |h| h[seed].sign > 0);
        incoming[seed][3] = Some(positive);
        incoming[seed][1] = Some(!positive);
        stack.push((seed, 1));
        stack.push((seed, 3));
    }
    Ok(incoming
        .iter()
        .map(|s| if s[3] == Some(true) { 1 } else { -1 })
        .collect())
}
