//! Reidemeister moves on planar diagrams.
//!
//! Every move keeps the crossings it does not touch, in their original
//! order, and keeps arc labels on the strand pieces that survive. New
//! crossings go to the end of the list unless a position is given, so that
//! each move can be undone exactly.

use std::collections::{BTreeMap, BTreeSet};

use super::{Crossing, DiagramError, PlanarDiagram};

/// A diagram produced by a move, with the crossings involved on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub diagram: PlanarDiagram,
    /// Crossings of the old diagram that take part in the move.
    pub old_local: Vec<usize>,
    /// Crossings of the new diagram that take part in the move.
    pub new_local: Vec<usize>,
}

/// Everything needed to perform a particular first move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct R1Spec {
    /// Arc or free circle that receives the kink.
    pub arc: u32,
    pub positive: bool,
    /// Loop on the left of the strand (seen along the orientation).
    pub left: bool,
    /// Index of the new crossing.
    pub at: usize,
    /// Label of the loop, then of the strand piece after the kink (equal to
    /// `arc` on a free circle).
    pub labels: [u32; 2],
}

/// Everything needed to perform a particular second move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct R2Spec {
    pub over: u32,
    pub under: u32,
    /// Which of the faces shared by the two arcs the finger crosses.
    pub face: usize,
    /// Indices of the crossing the over-strand meets first, then second.
    pub at: [usize; 2],
    /// Over-strand pieces after each crossing, then under-strand pieces
    /// after each crossing it meets.
    pub labels: [u32; 4],
}

fn err(msg: impl Into<String>) -> DiagramError {
    DiagramError::Move(msg.into())
}

fn sign_of(over_in_pos: usize) -> i8 {
    if over_in_pos == 3 {
        1
    } else {
        -1
    }
}

/// Inserts `items` (index, crossing) so that each ends at its index.
fn insert_at(mut list: Vec<Crossing>, mut items: Vec<(usize, Crossing)>) -> Result<Vec<Crossing>, DiagramError> {
    items.sort_by_key(|x| x.0);
    for (k, c) in items {
        if k > list.len() {
            return Err(err(format!("crossing position {k} out of range")));
        }
        list.insert(k, c);
    }
    Ok(list)
}

fn fresh(d: &PlanarDiagram, n: usize) -> Vec<u32> {
    let f = d.fresh_label();
    (0..n as u32).map(|k| f + k).collect()
}

fn check_fresh(d: &PlanarDiagram, labels: &[u32]) -> Result<(), DiagramError> {
    let used = d.labels();
    let mut seen = BTreeSet::new();
    for l in labels {
        if *l == 0 || used.contains(l) || !seen.insert(*l) {
            return Err(err(format!("label {l} is not free")));
        }
    }
    Ok(())
}

/// Adds a kink to an arc or free circle.
pub fn r1(
    d: &PlanarDiagram,
    arc: u32,
    positive: bool,
    left: bool,
    at: Option<usize>,
    labels: Option<[u32; 2]>,
) -> Result<(Rewrite, R1Spec), DiagramError> {
    let on_circle = d.has_circle(arc);
    if !on_circle && !d.has_arc(arc) {
        return Err(err(format!("R1: no arc or circle {arc}")));
    }
    let [l, mut a2] = match labels {
        Some(x) => x,
        None => {
            let f = fresh(d, 2);
            [f[0], f[1]]
        }
    };
    if on_circle {
        a2 = arc;
        check_fresh(d, &[l])?;
    } else {
        check_fresh(d, &[l, a2])?;
    }
    let mut crossings = d.crossings().to_vec();
    if !on_circle {
        let (k, p) = d.arc_ends(arc).unwrap().head;
        crossings[k].arcs[p] = a2;
    }
    let a = arc;
    let tuple = match (positive, left) {
        (true, true) => [a, a2, l, l],
        (true, false) => [l, l, a2, a],
        (false, true) => [l, a, a2, l],
        (false, false) => [a, l, l, a2],
    };
    let new = Crossing { arcs: tuple, sign: if positive { 1 } else { -1 } };
    let at = at.unwrap_or(crossings.len());
    let crossings = insert_at(crossings, vec![(at, new)])?;
    let free: Vec<u32> = d.free_circles().iter().copied().filter(|c| *c != arc).collect();
    let diagram = PlanarDiagram::from_crossings(crossings, free, Some(d.basepoint().label()))?;
    let old_local = Vec::new();
    let spec = R1Spec { arc, positive, left, at, labels: [l, a2] };
    Ok((Rewrite { diagram, old_local, new_local: vec![at] }, spec))
}

/// Strand pieces through removed crossings, joined up.
struct Splice {
    crossings: Vec<Crossing>,
    // chains that close up without meeting a kept crossing
    closed: Vec<Vec<u32>>,
    removed_labels: BTreeSet<u32>,
}

fn splice(d: &PlanarDiagram, remove: &[usize]) -> Splice {
    let gone: BTreeSet<usize> = remove.iter().copied().collect();
    let mut crossings = d.crossings().to_vec();
    let mut visited = BTreeSet::new();
    let mut removed_labels = BTreeSet::new();
    for a in d.arcs() {
        let e = d.arc_ends(a).unwrap();
        if gone.contains(&e.tail.0) || visited.contains(&a) {
            continue;
        }
        visited.insert(a);
        let mut last = a;
        while gone.contains(&d.arc_ends(last).unwrap().head.0) {
            last = d.next_arc(last);
            visited.insert(last);
            removed_labels.insert(last);
        }
        if last != a {
            let (k, p) = d.arc_ends(last).unwrap().head;
            crossings[k].arcs[p] = a;
        }
    }
    let mut closed = Vec::new();
    for a in d.arcs() {
        if visited.contains(&a) {
            continue;
        }
        let mut cycle = vec![a];
        visited.insert(a);
        let mut x = d.next_arc(a);
        while x != a {
            visited.insert(x);
            cycle.push(x);
            x = d.next_arc(x);
        }
        closed.push(cycle);
    }
    let crossings = crossings
        .into_iter()
        .enumerate()
        .filter(|(k, _)| !gone.contains(k))
        .map(|(_, c)| c)
        .collect();
    Splice { crossings, closed, removed_labels }
}

/// Finishes a splice: closed chains become free circles named by `name`.
fn finish_splice(
    d: &PlanarDiagram,
    s: Splice,
    name: impl Fn(&[u32]) -> u32,
) -> Result<PlanarDiagram, DiagramError> {
    let mut free = d.free_circles().to_vec();
    let mut removed = s.removed_labels;
    for c in &s.closed {
        let keep = name(c);
        free.push(keep);
        removed.extend(c.iter().copied().filter(|x| *x != keep));
    }
    let b = d.basepoint().label();
    if removed.contains(&b) {
        return Err(err(format!("the basepoint is on arc {b}, which the move removes")));
    }
    PlanarDiagram::from_crossings(s.crossings, free, Some(b))
}

/// Removes a kink at crossing `k`. Also returns the first move that puts it
/// back.
pub fn r1_inverse(d: &PlanarDiagram, k: usize) -> Result<(Rewrite, R1Spec), DiagramError> {
    let c = *d
        .crossings()
        .get(k)
        .ok_or_else(|| err(format!("R1INV: no crossing {k}")))?;
    let t = c.arcs;
    // A loop joins an outgoing slot to the next incoming slot.
    let candidates: Vec<(usize, bool)> = if c.sign > 0 {
        [(2, true, t[2] == t[3]), (0, false, t[0] == t[1])]
    } else {
        [(3, true, t[3] == t[0]), (1, false, t[1] == t[2])]
    }
    .into_iter()
    .filter(|x| x.2)
    .map(|x| (x.0, x.1))
    .collect();
    // A lone kinked circle has two loops; the one without the basepoint,
    // else the larger label, goes.
    let b = d.basepoint().label();
    let (loop_pos, left) = match candidates[..] {
        [] => return Err(err(format!("R1INV: crossing {k} has no kink"))),
        [x] => x,
        [x, y] => {
            let key = |z: (usize, bool)| (t[z.0] != b, t[z.0]);
            if key(x) > key(y) {
                x
            } else {
                y
            }
        }
        _ => unreachable!(),
    };
    let l = t[loop_pos];
    // incoming piece and outgoing piece of the strand, outside the loop
    let (a, a2) = match (c.sign > 0, left) {
        (true, true) => (t[0], t[1]),
        (true, false) => (t[3], t[2]),
        (false, true) => (t[1], t[2]),
        (false, false) => (t[0], t[3]),
    };
    if a == l {
        return Err(err(format!("R1INV: crossing {k} is a figure-eight curve")));
    }
    let s = splice(d, &[k]);
    let diagram = finish_splice(d, s, |cyc| if cyc.contains(&a) { a } else { cyc[0] })?;
    let spec = R1Spec { arc: a, positive: c.sign > 0, left, at: k, labels: [l, a2] };
    Ok((Rewrite { diagram, old_local: vec![k], new_local: Vec::new() }, spec))
}

/// Sides of a common face: (face index, a traversed forward, b traversed
/// forward), in face order.
fn shared_faces(d: &PlanarDiagram, a: u32, b: u32) -> Vec<(usize, bool, bool)> {
    let mut out = Vec::new();
    for (fi, f) in d.faces().iter().enumerate() {
        for sa in f.sides.iter().filter(|s| s.arc == a) {
            for sb in f.sides.iter().filter(|s| s.arc == b) {
                out.push((fi, sa.forward, sb.forward));
            }
        }
    }
    out
}

/// True when the saddle joining arcs `a` and `b` is orientable and planar:
/// both arcs run the same way around a common face.
pub fn saddle_compatible(d: &PlanarDiagram, a: u32, b: u32) -> bool {
    shared_faces(d, a, b).iter().any(|(_, fa, fb)| fa == fb)
}

/// Pushes arc `over` across arc `under` through a face they share.
pub fn r2(
    d: &PlanarDiagram,
    over: u32,
    under: u32,
    face: usize,
    at: Option<[usize; 2]>,
    labels: Option<[u32; 4]>,
) -> Result<(Rewrite, R2Spec), DiagramError> {
    if over == under {
        return Err(err("R2 needs two different arcs"));
    }
    for x in [over, under] {
        if !d.has_arc(x) {
            return Err(err(format!("R2: no arc {x} (free circles must be kinked first)")));
        }
    }
    let faces = shared_faces(d, over, under);
    let (_, fa, fb) = *faces
        .get(face)
        .ok_or_else(|| err(format!("R2: arcs {over} and {under} share no face number {face}")))?;
    let labels = match labels {
        Some(x) => x,
        None => {
            let f = fresh(d, 4);
            [f[0], f[1], f[2], f[3]]
        }
    };
    check_fresh(d, &labels)?;
    let [a1, a2, b1, b2] = labels;
    let (a, b) = (over, under);
    let (first, second) = match (fa, fb) {
        (true, true) => ([b1, a1, b2, a], [b, a1, b1, a2]),
        (true, false) => ([b, a, b1, a1], [b1, a2, b2, a1]),
        (false, true) => ([b, a1, b1, a], [b1, a1, b2, a2]),
        (false, false) => ([b1, a, b2, a1], [b, a2, b1, a1]),
    };
    let over_in = |t: [u32; 4], x: u32| if t[3] == x { 3 } else { 1 };
    let c1 = Crossing { arcs: first, sign: sign_of(over_in(first, a)) };
    let c2 = Crossing { arcs: second, sign: sign_of(over_in(second, a1)) };
    let mut crossings = d.crossings().to_vec();
    let (ka, pa) = d.arc_ends(a).unwrap().head;
    crossings[ka].arcs[pa] = a2;
    let (kb, pb) = d.arc_ends(b).unwrap().head;
    crossings[kb].arcs[pb] = b2;
    let n = crossings.len();
    let at = at.unwrap_or([n, n + 1]);
    if at[0] == at[1] {
        return Err(err("R2: the two new crossings need different positions"));
    }
    let crossings = insert_at(crossings, vec![(at[0], c1), (at[1], c2)])?;
    let diagram = PlanarDiagram::from_crossings(crossings, d.free_circles().to_vec(), Some(d.basepoint().label()))?;
    let mut new_local = at.to_vec();
    new_local.sort_unstable();
    let spec = R2Spec { over, under, face, at, labels };
    Ok((Rewrite { diagram, old_local: Vec::new(), new_local }, spec))
}

/// Removes a bigon between crossings `x` and `y`. Also returns the second
/// move that puts it back.
pub fn r2_inverse(d: &PlanarDiagram, x: usize, y: usize) -> Result<(Rewrite, R2Spec), DiagramError> {
    let n = d.crossing_count();
    if x == y || x >= n || y >= n {
        return Err(err(format!("R2INV: bad crossings {x} {y}")));
    }
    let (cx, cy) = (d.crossings()[x], d.crossings()[y]);
    if cx.sign == cy.sign {
        return Err(err("R2INV: the crossings have the same sign"));
    }
    // The over-strand goes from `first` to `second` along arc a1.
    let mut found = None;
    for (p, q) in [(x, y), (y, x)] {
        let (cp, cq) = (d.crossings()[p], d.crossings()[q]);
        let a1 = cp.arcs[cp.over_out_pos()];
        if cq.arcs[cq.over_in_pos()] != a1 {
            continue;
        }
        // under-strand between the two, in either direction
        for (r, s) in [(p, q), (q, p)] {
            let (cr, cs) = (d.crossings()[r], d.crossings()[s]);
            let b1 = cr.arcs[2];
            if cs.arcs[0] == b1 {
                found = Some((p, q, a1, r, s, b1));
            }
        }
    }
    let (p, q, a1, r, s, b1) =
        found.ok_or_else(|| err(format!("R2INV: crossings {x} and {y} do not form a bigon")))?;
    let is_face = d.faces().iter().any(|f| {
        f.sides.len() == 2 && f.arcs().any(|z| z == a1) && f.arcs().any(|z| z == b1)
    });
    if !is_face {
        return Err(err(format!("R2INV: crossings {x} and {y} do not bound a bigon")));
    }
    let (cp, cq) = (d.crossings()[p], d.crossings()[q]);
    let a = cp.arcs[cp.over_in_pos()];
    let a2 = cq.arcs[cq.over_out_pos()];
    let b = d.crossings()[r].arcs[0];
    let b2 = d.crossings()[s].arcs[2];
    let sp = splice(d, &[x, y]);
    let diagram = finish_splice(d, sp, |cyc| *cyc.iter().min().unwrap())?;
    let mut old_local = vec![x, y];
    old_local.sort_unstable();
    let mut spec = R2Spec { over: a, under: b, face: 0, at: [p, q], labels: [a1, a2, b1, b2] };
    // Find which shared face reproduces the bigon.
    let found_face = (0..shared_faces(&diagram, a, b).len()).find(|f| {
        r2(&diagram, a, b, *f, Some(spec.at), Some(spec.labels))
            .map(|(rw, _)| rw.diagram == *d)
            .unwrap_or(false)
    });
    match found_face {
        Some(f) => spec.face = f,
        None => return Err(err(format!("R2INV: crossings {x} and {y} cannot be recreated by a second move"))),
    }
    Ok((Rewrite { diagram, old_local, new_local: Vec::new() }, spec))
}

/// Slides one strand across the crossing of the other two, around the
/// triangular face with corners `x`, `y`, `z`. Crossings keep their indices.
pub fn r3(d: &PlanarDiagram, x: usize, y: usize, z: usize) -> Result<Rewrite, DiagramError> {
    let corners: BTreeSet<usize> = [x, y, z].into_iter().collect();
    if corners.len() != 3 || corners.iter().any(|k| *k >= d.crossing_count()) {
        return Err(err(format!("R3: bad crossings {x} {y} {z}")));
    }
    let face = d
        .faces()
        .into_iter()
        .find(|f| f.sides.len() == 3 && f.corners().collect::<BTreeSet<_>>() == corners)
        .ok_or_else(|| err(format!("R3: crossings {x} {y} {z} do not bound a triangle")))?;
    struct Piece {
        mid: u32,
        inn: u32,
        out: u32,
        first: usize,
        second: usize,
        over_first: bool,
        over_second: bool,
    }
    let mut pieces = Vec::new();
    for side in &face.sides {
        let e = d.arc_ends(side.arc).unwrap();
        let (p, q) = (e.tail, e.head);
        let cp = d.crossings()[p.0];
        let cq = d.crossings()[q.0];
        pieces.push(Piece {
            mid: side.arc,
            inn: cp.arcs[Crossing::through(p.1)],
            out: cq.arcs[Crossing::through(q.1)],
            first: p.0,
            second: q.0,
            over_first: p.1 % 2 == 1,
            over_second: q.1 % 2 == 1,
        });
    }
    let tops = pieces.iter().filter(|s| s.over_first && s.over_second).count();
    let bottoms = pieces.iter().filter(|s| !s.over_first && !s.over_second).count();
    if tops != 1 || bottoms != 1 {
        return Err(err(format!("R3: the triangle {x} {y} {z} has no strand passing over both others")));
    }
    // At each corner: (in, out, over) for its two strands, after the move.
    let mut at: BTreeMap<usize, Vec<(u32, u32, bool)>> = BTreeMap::new();
    for s in &pieces {
        // the strand now meets its old second crossing first
        at.entry(s.second).or_default().push((s.inn, s.mid, s.over_second));
        at.entry(s.first).or_default().push((s.mid, s.out, s.over_first));
    }
    let mut crossings = d.crossings().to_vec();
    for (k, strands) in at {
        let (u, o) = match strands[..] {
            [s0, s1] if !s0.2 && s1.2 => (s0, s1),
            [s0, s1] if s0.2 && !s1.2 => (s1, s0),
            _ => return Err(err("R3: inconsistent triangle")),
        };
        let sign = crossings[k].sign;
        let arcs = if sign > 0 { [u.0, o.1, u.1, o.0] } else { [u.0, o.0, u.1, o.1] };
        crossings[k] = Crossing { arcs, sign };
    }
    let diagram = PlanarDiagram::from_crossings(crossings, d.free_circles().to_vec(), Some(d.basepoint().label()))?;
    let local: Vec<usize> = corners.into_iter().collect();
    Ok(Rewrite { diagram, old_local: local.clone(), new_local: local })
}

/// Triangular faces on which a third move applies.
pub fn r3_triangles(d: &PlanarDiagram) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for f in d.faces() {
        if f.sides.len() != 3 {
            continue;
        }
        let mut c: Vec<usize> = f.corners().collect();
        c.sort_unstable();
        c.dedup();
        if c.len() == 3 && r3(d, c[0], c[1], c[2]).is_ok() {
            out.push([c[0], c[1], c[2]]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_pd, torus_braid, BraidWord};
    use crate::khovanov::{jones_polynomial, kh_dims};

    fn trefoil() -> PlanarDiagram {
        braid_closure(&torus_braid(2, 3).unwrap())
    }

    #[test]
    fn kinks_in_all_four_ways_and_back() {
        let t = trefoil();
        let kh = kh_dims(&t).unwrap();
        for positive in [true, false] {
            for left in [true, false] {
                for arc in t.arcs().collect::<Vec<_>>() {
                    let (rw, spec) = r1(&t, arc, positive, left, None, None).unwrap();
                    assert_eq!(rw.diagram.writhe(), t.writhe() + if positive { 1 } else { -1 });
                    assert_eq!(kh_dims(&rw.diagram).unwrap(), kh);
                    let (back, spec2) = r1_inverse(&rw.diagram, spec.at).unwrap();
                    assert_eq!(back.diagram, t);
                    assert_eq!(spec2, spec);
                }
            }
        }
    }

    #[test]
    fn kink_on_a_free_circle() {
        let u = parse_pd("U[3]").unwrap();
        for positive in [true, false] {
            for left in [true, false] {
                let (rw, spec) = r1(&u, 3, positive, left, None, None).unwrap();
                assert_eq!(rw.diagram.crossing_count(), 1);
                assert!(rw.diagram.is_knot());
                let (back, spec2) = r1_inverse(&rw.diagram, 0).unwrap();
                assert_eq!(back.diagram, u);
                assert_eq!(spec2, spec);
            }
        }
    }

    #[test]
    fn second_moves_in_every_shared_face() {
        let t = trefoil();
        let jones = jones_polynomial(&t);
        let arcs: Vec<u32> = t.arcs().collect();
        let mut count = 0;
        for &a in &arcs {
            for &b in &arcs {
                if a == b {
                    continue;
                }
                for f in 0..shared_faces(&t, a, b).len() {
                    let (rw, spec) = r2(&t, a, b, f, None, None).unwrap();
                    assert_eq!(rw.diagram.crossing_count(), 5);
                    assert_eq!(rw.diagram.writhe(), t.writhe());
                    assert_eq!(jones_polynomial(&rw.diagram), jones);
                    let (back, spec2) = r2_inverse(&rw.diagram, 3, 4).unwrap();
                    assert_eq!(back.diagram, t);
                    assert_eq!((spec2.over, spec2.under, spec2.labels), (a, b, spec.labels));
                    let (again, _) = r2(&t, a, b, spec2.face, Some(spec2.at), Some(spec2.labels)).unwrap();
                    assert_eq!(again.diagram, rw.diagram);
                    count += 1;
                }
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn third_move_relates_braid_words() {
        // closures of s1 s2 s1 and s2 s1 s2, with an extra letter to make a knot
        let d = braid_closure(&BraidWord::new(3, vec![1, 2, 1, 2]).unwrap());
        let tris = r3_triangles(&d);
        assert!(!tris.is_empty());
        let jones = jones_polynomial(&d);
        let kh = kh_dims(&d).unwrap();
        for [x, y, z] in tris {
            let rw = r3(&d, x, y, z).unwrap();
            assert_eq!(jones_polynomial(&rw.diagram), jones);
            assert_eq!(kh_dims(&rw.diagram).unwrap(), kh);
            let back = r3(&rw.diagram, x, y, z).unwrap();
            assert_eq!(back.diagram, d);
        }
    }

    #[test]
    fn bad_moves_are_rejected() {
        let t = trefoil();
        assert!(r1_inverse(&t, 0).is_err());
        assert!(r2_inverse(&t, 0, 1).is_err());
        assert!(r3(&t, 0, 1, 2).is_err());
        assert!(r1(&t, 99, true, true, None, None).is_err());
    }
}
