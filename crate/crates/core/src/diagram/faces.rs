use rustc_hash::FxHashMap;

use super::{DiagramError, PlanarDiagram, Slot};

/// One side of a face: an arc traversed from slot `from` to slot `to`, with
/// the face on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceSide {
    pub arc: u32,
    /// True when the traversal follows the arc's orientation.
    pub forward: bool,
    pub from: Slot,
    pub to: Slot,
}

/// A complementary region of the diagram, given by its boundary sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub sides: Vec<FaceSide>,
}

impl Face {
    pub fn arcs(&self) -> impl Iterator<Item = u32> + '_ {
        self.sides.iter().map(|s| s.arc)
    }

    /// Crossings at the corners, in traversal order.
    pub fn corners(&self) -> impl Iterator<Item = usize> + '_ {
        self.sides.iter().map(|s| s.to.0)
    }
}

impl PlanarDiagram {
    fn other_end(&self, s: Slot) -> Slot {
        let a = self.arc_at(s);
        let e = self.arc_ends(a).unwrap();
        if e.tail == s {
            e.head
        } else {
            e.tail
        }
    }

    /// All faces of the crossing part of the diagram.
    ///
    /// Leaving slot `(k, p)` along its arc we arrive at slot `(k', p')`; the
    /// next side leaves from `(k', p' - 1)`, which is a left turn because
    /// slots are listed counterclockwise.
    pub fn faces(&self) -> Vec<Face> {
        let n = self.crossing_count();
        let mut used = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for k in 0..n {
            for p in 0..4 {
                if used[k][p] {
                    continue;
                }
                let mut sides = Vec::new();
                let mut s = (k, p);
                while !used[s.0][s.1] {
                    used[s.0][s.1] = true;
                    let arc = self.arc_at(s);
                    let to = self.other_end(s);
                    let forward = self.arc_ends(arc).unwrap().tail == s;
                    sides.push(FaceSide { arc, forward, from: s, to });
                    s = (to.0, (to.1 + 3) % 4);
                }
                faces.push(Face { sides });
            }
        }
        faces
    }

    /// Number of connected pieces of the crossing graph.
    fn crossing_pieces(&self) -> usize {
        let n = self.crossing_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for a in self.arcs().collect::<Vec<_>>() {
            let e = self.arc_ends(a).unwrap();
            let (x, y) = (find(&mut parent, e.tail.0), find(&mut parent, e.head.0));
            parent[x] = y;
        }
        let mut roots: FxHashMap<usize, ()> = FxHashMap::default();
        for k in 0..n {
            let r = find(&mut parent, k);
            roots.insert(r, ());
        }
        roots.len()
    }

    /// Each connected piece with `n` crossings must bound `n + 2` faces.
    pub(super) fn check_planar(&self) -> Result<(), DiagramError> {
        if self.crossing_count() == 0 {
            return Ok(());
        }
        let faces = self.faces().len();
        let expected = self.crossing_count() + 2 * self.crossing_pieces();
        if faces != expected {
            return Err(DiagramError::NonPlanar { faces, expected });
        }
        Ok(())
    }
}
