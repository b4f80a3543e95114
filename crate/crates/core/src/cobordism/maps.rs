//! Chain maps of single moves between full cube complexes.
//!
//! Births, deaths and saddles act vertex by vertex through the unit, counit,
//! product and coproduct. A Reidemeister move is handled by cancelling, on
//! both sides, the cube edges that merely add or remove a small circle at
//! the move's crossings; the two cancelled complexes are then matched
//! generator by generator.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::diagram::{Basepoint, Face, PlanarDiagram};
use crate::exactalg::{reduce_where, Bigrading, Rational, Reduction, SparseVec};
use crate::khovanov::{CircleRef, CubeComplex, CubeLayout, FrobeniusSpec, Label, V_PLUS};

/// A chain map between the cube complexes of consecutive slices.
pub(crate) enum StepMap {
    Local(LocalMap),
    Retract(RetractMap),
    /// A map of the crossing parts, the identity on the lowest `bits` bits
    /// of each generator, which belong to free circles.
    Free { map: Box<StepMap>, bits: usize },
}

impl StepMap {
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        match self {
            StepMap::Local(m) => m.apply(v),
            StepMap::Retract(m) => m.apply(v),
            StepMap::Free { map, bits } => {
                let mask = (1u32 << bits) - 1;
                let mut parts: BTreeMap<u32, SparseVec> = BTreeMap::new();
                for (g, c) in v.iter() {
                    parts.entry(g & mask).or_default().add_term(g >> bits, c);
                }
                let mut out = SparseVec::new();
                for (fb, p) in parts {
                    for (g, c) in map.apply(&p).iter() {
                        out.add_term((g << bits) | fb, c);
                    }
                }
                out
            }
        }
    }
}

struct VertexRule {
    transfers: Vec<(u8, u8)>,
    ins: Vec<Option<u8>>,
    outs: Vec<Option<u8>>,
}

/// Birth, death or saddle: one Frobenius operation on the circles through
/// the given labels, the identity elsewhere.
pub(crate) struct LocalMap {
    src: Arc<CubeLayout>,
    dst: Arc<CubeLayout>,
    spec: FrobeniusSpec,
    rules: Vec<VertexRule>,
}

fn dedup(v: Vec<CircleRef>) -> Vec<CircleRef> {
    let mut out = Vec::new();
    for c in v {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

impl LocalMap {
    /// `labels` are the labels touched by the move; those missing from a
    /// side are ignored there.
    pub fn new(
        src: Arc<CubeLayout>,
        dst: Arc<CubeLayout>,
        spec: FrobeniusSpec,
        labels: &[u32],
    ) -> Result<LocalMap, String> {
        let (sd, dd) = (src.diagram(), dst.diagram());
        if sd.crossing_count() != dd.crossing_count() {
            return Err("a local move must keep the crossings".into());
        }
        let present = |d: &PlanarDiagram| -> Vec<u32> {
            let ls = d.labels();
            labels.iter().copied().filter(|l| ls.contains(l)).collect()
        };
        let (sl, dl) = (present(sd), present(dd));
        let mut rules = Vec::with_capacity(src.vertex_count());
        for v in 0..src.vertex_count() as u32 {
            let ins = dedup(sl.iter().map(|l| src.circle_of(v, *l)).collect());
            let outs = dedup(dl.iter().map(|l| dst.circle_of(v, *l)).collect());
            if !matches!((ins.len(), outs.len()), (0, 1) | (1, 0) | (2, 1) | (1, 2)) {
                return Err(format!("vertex {v}: {} circles in, {} out", ins.len(), outs.len()));
            }
            let mut transfers = Vec::new();
            for (c, bit) in src.circles(v) {
                if ins.contains(&c) {
                    continue;
                }
                let image = match c {
                    CircleRef::Crossing(id) => dst.circle_of(v, src.circle_arc(v, id)),
                    CircleRef::Free(l) => CircleRef::Free(l),
                };
                match (bit, dst.bit_of(v, image)) {
                    (Some(a), Some(b)) => transfers.push((a, b)),
                    (None, None) => {}
                    _ => return Err(format!("vertex {v}: the basepoint circle moved")),
                }
            }
            rules.push(VertexRule {
                transfers,
                ins: ins.iter().map(|c| src.bit_of(v, *c)).collect(),
                outs: outs.iter().map(|c| dst.bit_of(v, *c)).collect(),
            });
        }
        Ok(LocalMap { src, dst, spec, rules })
    }

    fn image(&self, g: u32, out: &mut Vec<(u32, i64)>) {
        let (v, gb) = self.src.decode(g);
        let r = &self.rules[v as usize];
        let mut base = 0u32;
        for (s, t) in &r.transfers {
            if gb >> s & 1 == 1 {
                base |= 1 << t;
            }
        }
        let val = |b: Option<u8>| b.map(|b| gb >> b & 1 == 1);
        let set = |bits: u32, b: Option<u8>, l: Label| match b {
            Some(b) if l => bits | 1 << b,
            _ => bits,
        };
        let enc = |bits: u32| self.dst.encode(v, bits);
        let s = &self.spec;
        match (r.ins.len(), r.outs.len()) {
            (0, 1) => out.push((enc(set(base, r.outs[0], V_PLUS)), 1)),
            (1, 0) => {
                let c = s.counit(val(r.ins[0]).expect("death of the basepoint circle"));
                if c != 0 {
                    out.push((enc(base), c));
                }
            }
            (2, 1) => match (val(r.ins[0]), val(r.ins[1])) {
                (Some(x), Some(y)) => {
                    for (z, c) in s.mul(x, y) {
                        out.push((enc(set(base, r.outs[0], z)), c));
                    }
                }
                (None, Some(x)) | (Some(x), None) => {
                    let c = s.basepoint_mul(x);
                    if c != 0 {
                        out.push((enc(base), c));
                    }
                }
                (None, None) => unreachable!("two basepoint circles"),
            },
            (1, 2) => match val(r.ins[0]) {
                Some(x) => {
                    for ((l, rr), c) in s.comul(x) {
                        out.push((enc(set(set(base, r.outs[0], l), r.outs[1], rr)), c));
                    }
                }
                None => {
                    let other = r.outs[0].or(r.outs[1]);
                    for (l, c) in s.basepoint_element() {
                        out.push((enc(set(base, other, l)), c));
                    }
                }
            },
            _ => unreachable!(),
        }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut res = SparseVec::new();
        let mut buf = Vec::new();
        for (g, c) in v.iter() {
            buf.clear();
            self.image(g, &mut buf);
            for (t, k) in &buf {
                res.add_term(*t, &(c * &Rational::from_integer(*k)));
            }
        }
        res
    }
}

/// Where a circle of a resolution meets the rest of the diagram: the slots
/// it occupies at crossings away from the move (by rank among those
/// crossings), and the free circles of either side it contains.
type Signature = (Vec<(usize, usize)>, Vec<u32>, Vec<u32>);

/// Per-generator data for matching the two sides of a move.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct GenKey {
    outer: u32,
    /// For a triangle: resolutions of the two crossings on the top strand,
    /// except on the half of the cube where the cancellation happens. The
    /// move exchanges the roles of the two, so one side lists them swapped.
    local: Option<(u32, u32)>,
    grading: Bigrading,
    /// Label of each circle that reaches outside the move, by signature id;
    /// `None` for the basepoint circle.
    circles: Vec<(u32, Option<bool>)>,
}

struct Side {
    reduction: Reduction,
    keys: Vec<GenKey>,
}

impl Side {
    fn new(
        cube: Arc<CubeComplex>,
        local: &[usize],
        anchors: &[u32],
        sigs: &mut HashMap<Signature, u32>,
        swap: bool,
    ) -> Result<Side, String> {
        let lay = cube.layout();
        let d = lay.diagram();
        let n = d.crossing_count();
        let rank: Vec<Option<usize>> = {
            let mut r = 0;
            (0..n)
                .map(|k| {
                    if local.contains(&k) {
                        None
                    } else {
                        r += 1;
                        Some(r - 1)
                    }
                })
                .collect()
        };
        let face = move_face(d, local);
        let face_arcs: Vec<u32> = face.iter().flat_map(|f| f.arcs()).collect();
        let pair = cancel_at(d, local, face.as_ref());
        let local_mask: u32 = pair.iter().map(|k| 1u32 << k).sum();
        let base = d.basepoint().label();
        // per vertex: (signature id, bit) of outer circles, bits of local ones
        let mut vinfo: Vec<(Vec<(u32, Option<u8>)>, Vec<u8>)> = Vec::with_capacity(lay.vertex_count());
        for v in 0..lay.vertex_count() as u32 {
            let mut outer = Vec::new();
            let mut inner = Vec::new();
            let mut add = |sig: Signature, c: CircleRef, small: bool, has_base: bool| -> Result<(), String> {
                let bit = lay.bit_of(v, c);
                if small {
                    if has_base {
                        return Err("the basepoint lies inside the move".into());
                    }
                    inner.push(bit.expect("only the basepoint circle has no bit"));
                } else {
                    let next = sigs.len() as u32;
                    outer.push((*sigs.entry(sig).or_insert(next), bit));
                }
                Ok(())
            };
            for (id, arcs) in lay.crossing_circles(v).into_iter().enumerate() {
                let mut slots = Vec::new();
                let mut anc = Vec::new();
                for a in &arcs {
                    let e = d.arc_ends(*a).unwrap();
                    for (k, p) in [e.tail, e.head] {
                        if let Some(r) = rank[k] {
                            slots.push((r, p));
                        }
                    }
                    if anchors.contains(a) {
                        anc.push(*a);
                    }
                }
                slots.sort_unstable();
                anc.sort_unstable();
                let small = arcs.iter().all(|a| face_arcs.contains(a));
                // a circle closing up near the move without being its face
                // can only be told apart by its arcs
                let closed = if slots.is_empty() && anc.is_empty() { arcs.clone() } else { Vec::new() };
                add((slots, anc, closed), CircleRef::Crossing(id as u8), small, arcs.contains(&base))?;
            }
            for c in d.free_circles() {
                let anc = if anchors.contains(c) { vec![*c] } else { Vec::new() };
                add((Vec::new(), anc, Vec::new()), CircleRef::Free(*c), false, d.basepoint() == Basepoint::Circle(*c))?;
            }
            outer.sort_unstable();
            vinfo.push((outer, inner));
        }
        let compress = |v: u32| -> u32 {
            let mut out = 0;
            for (k, r) in rank.iter().enumerate() {
                if let Some(r) = r {
                    out |= (v >> k & 1) << r;
                }
            }
            out
        };
        // third corner of a triangle, and its resolution carrying the face
        let third = local.iter().copied().find(|k| !pair.contains(k));
        let face_side = third.and_then(|z| {
            (0..lay.vertex_count()).find(|v| !vinfo[*v].1.is_empty()).map(|v| (v as u32) >> z & 1)
        });
        let (lo, hi) = (pair.iter().copied().min().unwrap_or(0), pair.iter().copied().max().unwrap_or(0));
        let local_key = |v: u32| -> Option<(u32, u32)> {
            let z = third?;
            let (a, b) = (v >> lo & 1, v >> hi & 1);
            (Some(v >> z & 1) != face_side).then_some(if swap { (b, a) } else { (a, b) })
        };
        let c = cube.complex();
        let keys: Vec<GenKey> = (0..c.len() as u32)
            .map(|g| {
                let (v, bits) = lay.decode(g);
                let circles = vinfo[v as usize]
                    .0
                    .iter()
                    .map(|(s, b)| (*s, b.map(|b| bits >> b & 1 == 1)))
                    .collect();
                GenKey { outer: compress(v), local: local_key(v), grading: c.grading(g), circles }
            })
            .collect();
        // Cancel an edge at a move crossing that only adds or removes one
        // small circle, with the label that makes the coefficient a unit.
        let allowed = |g: u32, h: u32| -> bool {
            let (vg, bg) = lay.decode(g);
            let (vh, bh) = lay.decode(h);
            let x = vg ^ vh;
            if x.count_ones() != 1 || x & local_mask == 0 || vg & x != 0 {
                return false;
            }
            if keys[g as usize].circles != keys[h as usize].circles {
                return false;
            }
            let (ig, ih) = (&vinfo[vg as usize].1, &vinfo[vh as usize].1);
            match (ig.len(), ih.len()) {
                // split off a small circle labelled v-
                (0, 1) => bh >> ih[0] & 1 == 1,
                // merge a small circle labelled v+
                (1, 0) => bg >> ig[0] & 1 == 0,
                _ => false,
            }
        };
        let reduction = reduce_where(c, allowed);
        Ok(Side { reduction, keys })
    }

    fn survivor_key(&self, k: u32) -> &GenKey {
        &self.keys[self.reduction.survivors()[k as usize] as usize]
    }
}

/// The face a move acts on: the loop, bigon or triangle whose corners are
/// exactly the move's crossings. If there are two, as in a diagram that is
/// only a kink, the one away from the basepoint.
fn move_face(d: &PlanarDiagram, local: &[usize]) -> Option<Face> {
    let mut corners = local.to_vec();
    corners.sort_unstable();
    let base = d.basepoint().label();
    d.faces()
        .into_iter()
        .filter(|f| {
            let mut fc: Vec<usize> = f.corners().collect();
            fc.sort_unstable();
            f.sides.len() == local.len() && fc == corners
        })
        .min_by_key(|f| f.sides.iter().any(|s| s.arc == base))
}

/// Crossings whose cube edges may be cancelled. For a triangle these are
/// the two where the strand on top passes over; cancelling at the third
/// corner as well can leave the elimination stuck.
fn cancel_at(d: &PlanarDiagram, local: &[usize], face: Option<&Face>) -> Vec<usize> {
    if local.len() == 3 {
        for side in face.map(|f| &f.sides[..]).unwrap_or(&[]) {
            let e = d.arc_ends(side.arc).unwrap();
            if e.tail.1 % 2 == 1 && e.head.1 % 2 == 1 {
                return vec![e.tail.0, e.head.0];
            }
        }
    }
    local.to_vec()
}

/// A Reidemeister move: retract both sides onto the generators away from
/// the move and identify them.
pub(crate) struct RetractMap {
    src: Side,
    dst: Side,
    // source survivor -> (target survivor, sign)
    phi: Vec<(u32, Rational)>,
}

impl RetractMap {
    pub fn new(
        src: Arc<CubeComplex>,
        dst: Arc<CubeComplex>,
        src_local: &[usize],
        dst_local: &[usize],
    ) -> Result<RetractMap, String> {
        let (sd, dd) = (src.diagram(), dst.diagram());
        if sd.basepoint().label() != dd.basepoint().label() {
            return Err("the move changed the basepoint".into());
        }
        let (sl, dl) = (sd.labels(), dd.labels());
        let anchors: Vec<u32> = sl
            .intersection(&dl)
            .copied()
            .filter(|l| sd.has_circle(*l) || dd.has_circle(*l))
            .collect();
        let mut sigs = HashMap::new();
        let src = Side::new(src, src_local, &anchors, &mut sigs, false)?;
        let dst = Side::new(dst, dst_local, &anchors, &mut sigs, true)?;
        let (rs, rd) = (src.reduction.complex(), dst.reduction.complex());
        let mut by_key: HashMap<&GenKey, u32> = HashMap::new();
        for k in 0..rd.len() as u32 {
            if by_key.insert(dst.survivor_key(k), k).is_some() {
                return Err("two remaining generators look alike".into());
            }
        }
        let mut target = Vec::with_capacity(rs.len());
        for k in 0..rs.len() as u32 {
            let t = by_key
                .get(src.survivor_key(k))
                .ok_or_else(|| format!("no partner for {:?}", src.survivor_key(k)))?;
            target.push(*t);
        }
        // Signs: d' phi = phi d forces the ratio of matching entries.
        let entries = |k: u32| -> Result<BTreeMap<u32, (Rational, Rational)>, String> {
            let mut m: BTreeMap<u32, (Rational, Rational)> = BTreeMap::new();
            for (t, c) in rs.differential(k) {
                m.insert(target[*t as usize], (c.clone(), Rational::ZERO));
            }
            for (t, c) in rd.differential(target[k as usize]) {
                match m.get_mut(t) {
                    Some(e) => e.1 = c.clone(),
                    None => return Err("differentials differ after the move".into()),
                }
            }
            Ok(m)
        };
        let mut inv = vec![u32::MAX; target.len()];
        for (k, t) in target.iter().enumerate() {
            inv[*t as usize] = k as u32;
        }
        let mut adj: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); rs.len()];
        for k in 0..rs.len() as u32 {
            for (t, (c, c2)) in entries(k)? {
                if c2.is_zero() {
                    return Err("differentials differ after the move".into());
                }
                let ratio = &c2 / &c;
                if !ratio.abs().is_one() {
                    return Err(format!("differential entries {c} and {c2} differ by more than a sign"));
                }
                let j = inv[t as usize];
                adj[k as usize].push((j, ratio.clone()));
                adj[j as usize].push((k, ratio));
            }
        }
        let mut eps: Vec<Option<Rational>> = vec![None; rs.len()];
        for s in 0..rs.len() {
            if eps[s].is_some() {
                continue;
            }
            eps[s] = Some(Rational::ONE);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let ex = eps[x].clone().unwrap();
                for (y, r) in &adj[x] {
                    let want = &ex * r;
                    match &eps[*y as usize] {
                        None => {
                            eps[*y as usize] = Some(want);
                            queue.push_back(*y as usize);
                        }
                        Some(e) if *e == want => {}
                        Some(_) => return Err("no consistent choice of signs".into()),
                    }
                }
            }
        }
        let phi = target.into_iter().zip(eps.into_iter().map(Option::unwrap)).collect();
        Ok(RetractMap { src, dst, phi })
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let p = self.src.reduction.project(v);
        let mut w = SparseVec::new();
        for (k, c) in p.iter() {
            let (t, e) = &self.phi[k as usize];
            w.add_term(*t, &(c * e));
        }
        self.dst.reduction.include(&w)
    }
}
