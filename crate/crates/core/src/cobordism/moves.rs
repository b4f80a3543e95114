//! Elementary moves, their text form, and how they act on diagrams.

use std::fmt;

use crate::diagram::reidemeister::{r1, r1_inverse, r2, r2_inverse, r3, saddle_compatible};
use crate::diagram::{Basepoint, DiagramError, PlanarDiagram};

/// One elementary move of a movie.
///
/// Optional fields are filled in when a movie is built, so that a stored
/// movie replays exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// A new free circle (the next unused label if none is given).
    Birth { circle: Option<u32> },
    /// Removes a free circle that does not carry the basepoint.
    Death { circle: u32 },
    /// A 1-handle between two labels of the diagram.
    ///
    /// Two arcs: their heads are exchanged. An arc or circle and a second
    /// circle: the second circle is merged into the first. A present label
    /// and an unused one: a free circle with the unused label splits off.
    /// `base` says where the basepoint ends up.
    Saddle { a: u32, b: u32, base: Option<u32> },
    R1 { arc: u32, positive: bool, left: bool, at: Option<usize>, labels: Option<[u32; 2]> },
    R1Inv { crossing: usize },
    R2 { over: u32, under: u32, face: usize, at: Option<[usize; 2]>, labels: Option<[u32; 4]> },
    R2Inv { crossings: [usize; 2] },
    R3 { crossings: [usize; 3] },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    Birth,
    Death,
    Saddle,
    R1,
    R1Inv,
    R2,
    R2Inv,
    R3,
}

impl MoveKind {
    pub fn is_reidemeister(self) -> bool {
        !matches!(self, MoveKind::Birth | MoveKind::Death | MoveKind::Saddle)
    }
}

/// A move carried out on a diagram.
#[derive(Clone, Debug)]
pub(crate) struct Applied {
    pub diagram: PlanarDiagram,
    pub resolved: Move,
    pub inverse: Move,
    pub old_local: Vec<usize>,
    pub new_local: Vec<usize>,
}

fn err(msg: impl Into<String>) -> DiagramError {
    DiagramError::Move(msg.into())
}

fn rebuild(d: &PlanarDiagram, crossings: Option<Vec<crate::diagram::Crossing>>, free: Vec<u32>, base: u32) -> Result<PlanarDiagram, DiagramError> {
    let crossings = crossings.unwrap_or_else(|| d.crossings().to_vec());
    PlanarDiagram::from_crossings(crossings, free, Some(base))
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Birth { .. } => MoveKind::Birth,
            Move::Death { .. } => MoveKind::Death,
            Move::Saddle { .. } => MoveKind::Saddle,
            Move::R1 { .. } => MoveKind::R1,
            Move::R1Inv { .. } => MoveKind::R1Inv,
            Move::R2 { .. } => MoveKind::R2,
            Move::R2Inv { .. } => MoveKind::R2Inv,
            Move::R3 { .. } => MoveKind::R3,
        }
    }

    /// Change in Euler characteristic of the surface.
    pub fn euler(&self) -> i64 {
        match self.kind() {
            MoveKind::Birth | MoveKind::Death => 1,
            MoveKind::Saddle => -1,
            _ => 0,
        }
    }

    pub(crate) fn apply(&self, d: &PlanarDiagram) -> Result<Applied, DiagramError> {
        let bp = d.basepoint().label();
        let plain = |diagram, resolved, inverse| Applied {
            diagram,
            resolved,
            inverse,
            old_local: Vec::new(),
            new_local: Vec::new(),
        };
        match *self {
            Move::Birth { circle } => {
                let c = circle.unwrap_or_else(|| d.fresh_label());
                if c == 0 || d.labels().contains(&c) {
                    return Err(err(format!("BIRTH: label {c} is already in use")));
                }
                let mut free = d.free_circles().to_vec();
                free.push(c);
                let nd = rebuild(d, None, free, bp)?;
                Ok(plain(nd, Move::Birth { circle: Some(c) }, Move::Death { circle: c }))
            }
            Move::Death { circle } => {
                if !d.has_circle(circle) {
                    return Err(err(format!("DEATH: {circle} is not a free circle")));
                }
                if d.basepoint() == Basepoint::Circle(circle) {
                    return Err(err(format!("DEATH: circle {circle} carries the basepoint")));
                }
                let free = d.free_circles().iter().copied().filter(|c| *c != circle).collect();
                let nd = rebuild(d, None, free, bp)?;
                Ok(plain(nd, Move::Death { circle }, Move::Birth { circle: Some(circle) }))
            }
            Move::Saddle { a, b, base } => saddle(d, a, b, base),
            Move::R1 { arc, positive, left, at, labels } => {
                let (rw, s) = r1(d, arc, positive, left, at, labels)?;
                Ok(Applied {
                    diagram: rw.diagram,
                    resolved: Move::R1 { arc, positive, left, at: Some(s.at), labels: Some(s.labels) },
                    inverse: Move::R1Inv { crossing: s.at },
                    old_local: rw.old_local,
                    new_local: rw.new_local,
                })
            }
            Move::R1Inv { crossing } => {
                let (rw, s) = r1_inverse(d, crossing)?;
                Ok(Applied {
                    diagram: rw.diagram,
                    resolved: Move::R1Inv { crossing },
                    inverse: Move::R1 {
                        arc: s.arc,
                        positive: s.positive,
                        left: s.left,
                        at: Some(s.at),
                        labels: Some(s.labels),
                    },
                    old_local: rw.old_local,
                    new_local: rw.new_local,
                })
            }
            Move::R2 { over, under, face, at, labels } => {
                let (rw, s) = r2(d, over, under, face, at, labels)?;
                let mut pair = s.at;
                pair.sort_unstable();
                Ok(Applied {
                    diagram: rw.diagram,
                    resolved: Move::R2 { over, under, face: s.face, at: Some(s.at), labels: Some(s.labels) },
                    inverse: Move::R2Inv { crossings: pair },
                    old_local: rw.old_local,
                    new_local: rw.new_local,
                })
            }
            Move::R2Inv { crossings } => {
                let mut pair = crossings;
                pair.sort_unstable();
                let (rw, s) = r2_inverse(d, pair[0], pair[1])?;
                Ok(Applied {
                    diagram: rw.diagram,
                    resolved: Move::R2Inv { crossings: pair },
                    inverse: Move::R2 {
                        over: s.over,
                        under: s.under,
                        face: s.face,
                        at: Some(s.at),
                        labels: Some(s.labels),
                    },
                    old_local: rw.old_local,
                    new_local: rw.new_local,
                })
            }
            Move::R3 { crossings } => {
                let mut t = crossings;
                t.sort_unstable();
                let rw = r3(d, t[0], t[1], t[2])?;
                Ok(Applied {
                    diagram: rw.diagram,
                    resolved: Move::R3 { crossings: t },
                    inverse: Move::R3 { crossings: t },
                    old_local: rw.old_local,
                    new_local: rw.new_local,
                })
            }
        }
    }
}

fn saddle(d: &PlanarDiagram, a: u32, b: u32, base: Option<u32>) -> Result<Applied, DiagramError> {
    if a == b {
        return Err(err("SADDLE needs two different labels"));
    }
    let bp = d.basepoint().label();
    let labels = d.labels();
    let plain = |diagram, resolved, inverse| Applied {
        diagram,
        resolved,
        inverse,
        old_local: Vec::new(),
        new_local: Vec::new(),
    };
    match (labels.contains(&a), labels.contains(&b)) {
        (false, false) => Err(err(format!("SADDLE: neither {a} nor {b} is in the diagram"))),
        (true, true) if d.has_arc(a) && d.has_arc(b) => {
            if base.is_some_and(|x| x != bp) {
                return Err(err("SADDLE: a saddle between two arcs keeps the basepoint"));
            }
            if !saddle_compatible(d, a, b) {
                return Err(err(format!("SADDLE: arcs {a} and {b} do not run the same way around a common face")));
            }
            let (ha, hb) = (d.arc_ends(a).unwrap().head, d.arc_ends(b).unwrap().head);
            let mut crossings = d.crossings().to_vec();
            crossings[ha.0].arcs[ha.1] = b;
            crossings[hb.0].arcs[hb.1] = a;
            let nd = rebuild(d, Some(crossings), d.free_circles().to_vec(), bp)?;
            let m = Move::Saddle { a: a.min(b), b: a.max(b), base: None };
            Ok(plain(nd, m.clone(), m))
        }
        (true, true) => {
            // merge a free circle into the other label
            let (kept, gone) = if d.has_circle(b) { (a, b) } else { (b, a) };
            let nbp = if bp == gone { kept } else { bp };
            if base.is_some_and(|x| x != nbp) {
                return Err(err(format!("SADDLE: the basepoint ends up on {nbp}")));
            }
            let free = d.free_circles().iter().copied().filter(|c| *c != gone).collect();
            let nd = rebuild(d, None, free, nbp)?;
            Ok(plain(
                nd,
                Move::Saddle { a: kept, b: gone, base: Some(nbp) },
                Move::Saddle { a: kept, b: gone, base: Some(bp) },
            ))
        }
        (pa, _) => {
            // split a new free circle off the present label
            let (kept, new) = if pa { (a, b) } else { (b, a) };
            if new == 0 {
                return Err(err("SADDLE: label 0 is not allowed"));
            }
            let nbp = base.unwrap_or(bp);
            if nbp != bp && !(nbp == new && bp == kept) {
                return Err(err(format!("SADDLE: the basepoint cannot move to {nbp}")));
            }
            let mut free = d.free_circles().to_vec();
            free.push(new);
            let nd = rebuild(d, None, free, nbp)?;
            Ok(plain(
                nd,
                Move::Saddle { a: kept, b: new, base: Some(nbp) },
                Move::Saddle { a: kept, b: new, base: Some(bp) },
            ))
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Birth { circle: None } => write!(f, "BIRTH"),
            Move::Birth { circle: Some(c) } => write!(f, "BIRTH {c}"),
            Move::Death { circle } => write!(f, "DEATH {circle}"),
            Move::Saddle { a, b, base } => {
                write!(f, "SADDLE {a} {b}")?;
                if let Some(x) = base {
                    write!(f, " base={x}")?;
                }
                Ok(())
            }
            Move::R1 { arc, positive, left, at, labels } => {
                write!(
                    f,
                    "R1 {arc} {} {}",
                    if *positive { '+' } else { '-' },
                    if *left { 'L' } else { 'R' }
                )?;
                if let Some(k) = at {
                    write!(f, " at={k}")?;
                }
                if let Some([l, a2]) = labels {
                    write!(f, " labels={l},{a2}")?;
                }
                Ok(())
            }
            Move::R1Inv { crossing } => write!(f, "R1INV {crossing}"),
            Move::R2 { over, under, face, at, labels } => {
                write!(f, "R2 {over} {under} face={face}")?;
                if let Some([p, q]) = at {
                    write!(f, " at={p},{q}")?;
                }
                if let Some([a1, a2, b1, b2]) = labels {
                    write!(f, " labels={a1},{a2},{b1},{b2}")?;
                }
                Ok(())
            }
            Move::R2Inv { crossings: [x, y] } => write!(f, "R2INV {x} {y}"),
            Move::R3 { crossings: [x, y, z] } => write!(f, "R3 {x} {y} {z}"),
        }
    }
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("bad {what} '{s}'"))
}

fn list<const N: usize, T: std::str::FromStr + Copy + Default>(s: &str, what: &str) -> Result<[T; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("{what} needs {N} comma-separated values"));
    }
    let mut out = [T::default(); N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = num(p.trim(), what)?;
    }
    Ok(out)
}

impl std::str::FromStr for Move {
    type Err = String;

    /// Parses one move line (without comments).
    fn from_str(line: &str) -> Result<Move, String> {
        let mut words = line.split_whitespace();
        let cmd = words.next().ok_or("empty move")?.to_ascii_uppercase();
        let mut args = Vec::new();
        let mut opts = Vec::new();
        for w in words {
            match w.split_once('=') {
                Some((k, v)) => opts.push((k.to_ascii_lowercase(), v)),
                None => args.push(w),
            }
        }
        let arity = |lo: usize, hi: usize| -> Result<(), String> {
            if args.len() < lo || args.len() > hi {
                Err(format!("{cmd} takes {lo}..={hi} arguments, got {}", args.len()))
            } else {
                Ok(())
            }
        };
        let mut opt = |key: &str| -> Option<&str> {
            let p = opts.iter().position(|(k, _)| k == key)?;
            Some(opts.remove(p).1)
        };
        let m = match cmd.as_str() {
            "BIRTH" => {
                arity(0, 1)?;
                Move::Birth { circle: args.first().map(|s| num(s, "circle")).transpose()? }
            }
            "DEATH" => {
                arity(1, 1)?;
                Move::Death { circle: num(args[0], "circle")? }
            }
            "SADDLE" => {
                arity(2, 2)?;
                Move::Saddle {
                    a: num(args[0], "label")?,
                    b: num(args[1], "label")?,
                    base: opt("base").map(|s| num(s, "basepoint")).transpose()?,
                }
            }
            "R1" => {
                arity(1, 3)?;
                let (mut positive, mut left) = (true, true);
                for w in &args[1..] {
                    match *w {
                        "+" => positive = true,
                        "-" => positive = false,
                        "L" | "l" => left = true,
                        "R" | "r" => left = false,
                        _ => return Err(format!("R1: unknown argument '{w}'")),
                    }
                }
                Move::R1 {
                    arc: num(args[0], "arc")?,
                    positive,
                    left,
                    at: opt("at").map(|s| num(s, "position")).transpose()?,
                    labels: opt("labels").map(|s| list::<2, u32>(s, "labels")).transpose()?,
                }
            }
            "R1INV" => {
                arity(1, 1)?;
                Move::R1Inv { crossing: num(args[0], "crossing")? }
            }
            "R2" => {
                arity(2, 2)?;
                Move::R2 {
                    over: num(args[0], "arc")?,
                    under: num(args[1], "arc")?,
                    face: opt("face").map(|s| num(s, "face")).transpose()?.unwrap_or(0),
                    at: opt("at").map(|s| list::<2, usize>(s, "positions")).transpose()?,
                    labels: opt("labels").map(|s| list::<4, u32>(s, "labels")).transpose()?,
                }
            }
            "R2INV" => {
                arity(2, 2)?;
                Move::R2Inv { crossings: [num(args[0], "crossing")?, num(args[1], "crossing")?] }
            }
            "R3" => {
                arity(3, 3)?;
                Move::R3 {
                    crossings: [
                        num(args[0], "crossing")?,
                        num(args[1], "crossing")?,
                        num(args[2], "crossing")?,
                    ],
                }
            }
            _ => return Err(format!("unknown move '{cmd}'")),
        };
        if let Some((k, _)) = opts.first() {
            return Err(format!("{cmd}: unknown option '{k}'"));
        }
        Ok(m)
    }
}
