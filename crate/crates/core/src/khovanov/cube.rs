use rustc_hash::FxHashMap;

use super::frobenius::{FrobeniusSpec, Label};
use super::KhError;
use crate::diagram::{Basepoint, PlanarDiagram};
use crate::exactalg::{Bigrading, ChainComplex, Rational};

/// A full resolution of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeVertex {
    pub bits: u32,
    /// Circles as sorted label lists (free circles included), ordered by
    /// least label.
    pub circles: Vec<Vec<u32>>,
    pub basepoint_circle: usize,
}

/// Circles of the resolution `bits` (bit `k` is the smoothing of crossing `k`).
///
/// The 0-smoothing of `X[a,b,c,d]` joins `a` to `b` and `c` to `d`; the
/// 1-smoothing joins `a` to `d` and `b` to `c`.
pub fn state_circles(d: &PlanarDiagram, bits: u32) -> CubeVertex {
    let arcs: Vec<u32> = d.arcs().collect();
    let index: FxHashMap<u32, usize> = arcs.iter().enumerate().map(|(k, a)| (*a, k)).collect();
    let mut uf = UnionFind::new(arcs.len());
    for (k, c) in d.crossings().iter().enumerate() {
        let [a, b, cc, dd] = c.arcs.map(|x| index[&x]);
        if bits >> k & 1 == 0 {
            uf.union(a, b);
            uf.union(cc, dd);
        } else {
            uf.union(a, dd);
            uf.union(b, cc);
        }
    }
    let mut groups: FxHashMap<usize, Vec<u32>> = FxHashMap::default();
    for (k, a) in arcs.iter().enumerate() {
        groups.entry(uf.find(k)).or_default().push(*a);
    }
    let mut circles: Vec<Vec<u32>> = groups.into_values().collect();
    circles.extend(d.free_circles().iter().map(|c| vec![*c]));
    for c in circles.iter_mut() {
        c.sort_unstable();
    }
    circles.sort();
    let b = d.basepoint().label();
    let basepoint_circle = circles.iter().position(|c| c.contains(&b)).unwrap();
    CubeVertex { bits, circles, basepoint_circle }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (x, y) = (self.find(a), self.find(b));
        if x != y {
            self.parent[x.max(y)] = x.min(y);
        }
    }
}

/// Which circle of a resolution an arc or free circle lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CircleRef {
    /// A circle through crossings, by its index within the vertex.
    Crossing(u8),
    /// A free circle, by label.
    Free(u32),
}

#[derive(Clone, Debug)]
struct VertexData {
    offset: u32,
    // circle id per arc index
    circ: Vec<u8>,
    // first arc index of each circle
    rep: Vec<u8>,
    // generator bit of each crossing circle, -1 on the basepoint circle
    bit: Vec<i8>,
    nbits: u8,
}

/// Generator bookkeeping for the cube of resolutions of a diagram, without
/// the differential.
///
/// A generator at vertex `v` is a word of label bits (set bit = `v-`). Free
/// circles not carrying the basepoint take the low bits in label order, so
/// the complex of `D ⊔ U` is the complex of `D` tensored with one factor per
/// free circle, that factor varying fastest. Crossing circles follow in
/// order of their least arc label. In the reduced theory the basepoint
/// circle carries no bit.
#[derive(Clone, Debug)]
pub struct CubeLayout {
    diagram: PlanarDiagram,
    reduced: bool,
    arc_index: FxHashMap<u32, usize>,
    tuples: Vec<[usize; 4]>,
    free_bits: Vec<u32>,
    basepoint_free: bool,
    vertices: Vec<VertexData>,
    len: usize,
}

impl CubeLayout {
    /// Fails if the cube would have more than `budget` generators.
    pub fn new(d: &PlanarDiagram, reduced: bool, budget: usize) -> Result<CubeLayout, KhError> {
        let n = d.crossing_count();
        if n > 30 {
            return Err(KhError::Budget { needed: usize::MAX, budget });
        }
        let arcs: Vec<u32> = d.arcs().collect();
        let arc_index: FxHashMap<u32, usize> =
            arcs.iter().enumerate().map(|(k, a)| (*a, k)).collect();
        let tuples: Vec<[usize; 4]> =
            d.crossings().iter().map(|c| c.arcs.map(|a| arc_index[&a])).collect();
        let (bp_arc, basepoint_free) = match (reduced, d.basepoint()) {
            (false, _) => (None, false),
            (true, Basepoint::Arc(a)) => (Some(arc_index[&a]), false),
            (true, Basepoint::Circle(_)) => (None, true),
        };
        let free_bits: Vec<u32> = d
            .free_circles()
            .iter()
            .copied()
            .filter(|c| !(basepoint_free && *c == d.basepoint().label()))
            .collect();
        let f = free_bits.len();

        let mut vertices = Vec::with_capacity(1 << n);
        let mut total: usize = 0;
        for v in 0..(1u32 << n) {
            let mut uf = UnionFind::new(arcs.len());
            for (k, t) in tuples.iter().enumerate() {
                if v >> k & 1 == 0 {
                    uf.union(t[0], t[1]);
                    uf.union(t[2], t[3]);
                } else {
                    uf.union(t[0], t[3]);
                    uf.union(t[1], t[2]);
                }
            }
            let mut circ = vec![0u8; arcs.len()];
            let mut rep = Vec::new();
            let mut root_id: FxHashMap<usize, u8> = FxHashMap::default();
            for (k, c) in circ.iter_mut().enumerate() {
                let r = uf.find(k);
                let id = *root_id.entry(r).or_insert_with(|| {
                    rep.push(k as u8);
                    (rep.len() - 1) as u8
                });
                *c = id;
            }
            let bp_circle = bp_arc.map(|a| circ[a]);
            let mut bit = Vec::with_capacity(rep.len());
            let mut next = f as i8;
            for id in 0..rep.len() as u8 {
                if Some(id) == bp_circle {
                    bit.push(-1);
                } else {
                    bit.push(next);
                    next += 1;
                }
            }
            let nbits = next as u8;
            vertices.push(VertexData { offset: total as u32, circ, rep, bit, nbits });
            total += 1usize << nbits;
            if total > budget {
                return Err(KhError::Budget { needed: total, budget });
            }
        }
        Ok(CubeLayout {
            diagram: d.clone(),
            reduced,
            arc_index,
            tuples,
            free_bits,
            basepoint_free,
            vertices,
            len: total,
        })
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        &self.diagram
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn offset(&self, v: u32) -> u32 {
        self.vertices[v as usize].offset
    }

    /// Number of label bits at vertex `v`.
    pub fn label_bits(&self, v: u32) -> u8 {
        self.vertices[v as usize].nbits
    }

    /// Free circles carrying a label bit, in bit order.
    pub fn free_bit_circles(&self) -> &[u32] {
        &self.free_bits
    }

    /// True when the reduced basepoint sits on a free circle.
    pub fn basepoint_is_free(&self) -> bool {
        self.basepoint_free
    }

    pub fn encode(&self, v: u32, bits: u32) -> u32 {
        debug_assert!(bits < 1 << self.vertices[v as usize].nbits);
        self.vertices[v as usize].offset + bits
    }

    pub fn decode(&self, g: u32) -> (u32, u32) {
        let v = self.vertices.partition_point(|x| x.offset <= g) - 1;
        (v as u32, g - self.vertices[v].offset)
    }

    /// Bigrading of generator `g`.
    pub fn grading(&self, g: u32) -> Bigrading {
        let (v, bits) = self.decode(g);
        let i = v.count_ones() as i64 - self.diagram.n_minus() as i64;
        let deg = self.label_bits(v) as i64 - 2 * bits.count_ones() as i64;
        (i, deg + i + self.diagram.writhe())
    }

    /// The circle through arc `a` (or the free circle `a`) at vertex `v`.
    pub fn circle_of(&self, v: u32, a: u32) -> CircleRef {
        match self.arc_index.get(&a) {
            Some(k) => CircleRef::Crossing(self.vertices[v as usize].circ[*k]),
            None => CircleRef::Free(a),
        }
    }

    /// Label bit of a circle at vertex `v`; `None` for the basepoint circle.
    pub fn bit_of(&self, v: u32, c: CircleRef) -> Option<u8> {
        match c {
            CircleRef::Crossing(id) => {
                let b = self.vertices[v as usize].bit[id as usize];
                (b >= 0).then_some(b as u8)
            }
            CircleRef::Free(l) => self.free_bits.iter().position(|x| *x == l).map(|p| p as u8),
        }
    }

    /// Number of crossing circles at `v`.
    pub fn crossing_circle_count(&self, v: u32) -> usize {
        self.vertices[v as usize].rep.len()
    }

    /// An arc label on crossing circle `id` of vertex `v`.
    pub fn circle_arc(&self, v: u32, id: u8) -> u32 {
        let k = self.vertices[v as usize].rep[id as usize] as usize;
        self.diagram.arcs().nth(k).unwrap()
    }

    /// Crossing circles at `v`, each as its sorted arc labels, by circle id.
    pub fn crossing_circles(&self, v: u32) -> Vec<Vec<u32>> {
        let vd = &self.vertices[v as usize];
        let mut circles = vec![Vec::new(); vd.rep.len()];
        for (a, k) in &self.arc_index {
            circles[vd.circ[*k] as usize].push(*a);
        }
        for c in circles.iter_mut() {
            c.sort_unstable();
        }
        circles
    }

    /// Every circle at `v` with its label bit: crossing circles by id, then
    /// free circles.
    pub fn circles(&self, v: u32) -> Vec<(CircleRef, Option<u8>)> {
        let mut out: Vec<(CircleRef, Option<u8>)> = (0..self.crossing_circle_count(v) as u8)
            .map(|id| (CircleRef::Crossing(id), self.bit_of(v, CircleRef::Crossing(id))))
            .collect();
        for c in self.diagram.free_circles() {
            out.push((CircleRef::Free(*c), self.bit_of(v, CircleRef::Free(*c))));
        }
        out
    }

    fn differential(&self, spec: FrobeniusSpec) -> Result<ChainComplex, KhError> {
        let n = self.diagram.crossing_count();
        let f = self.free_bits.len();
        let vertices = &self.vertices;
        let degs: Vec<Bigrading> = (0..self.len as u32).map(|g| self.grading(g)).collect();
        let mut out: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); self.len];
        for v in 0..(1u32 << n) {
            let vd = &vertices[v as usize];
            for (k, t) in self.tuples.iter().enumerate() {
                if v >> k & 1 == 1 {
                    continue;
                }
                let w = v | 1 << k;
                let wd = &vertices[w as usize];
                let sign: i64 = if (v & ((1 << k) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                let p = vd.circ[t[0]];
                let q = vd.circ[t[2]];
                // bits of circles not touched by the edge
                let mut transfer: Vec<(u8, u8)> = Vec::new();
                for id in 0..vd.rep.len() as u8 {
                    if id == p || id == q || vd.bit[id as usize] < 0 {
                        continue;
                    }
                    let img = wd.circ[vd.rep[id as usize] as usize];
                    transfer.push((vd.bit[id as usize] as u8, wd.bit[img as usize] as u8));
                }
                let low_mask = (1u32 << f) - 1;
                for gb in 0..(1u32 << vd.nbits) {
                    let mut base = gb & low_mask;
                    for (s, dbit) in &transfer {
                        if gb >> s & 1 == 1 {
                            base |= 1 << dbit;
                        }
                    }
                    let src = vd.offset + gb;
                    let get = |id: u8| -> Option<Label> {
                        let b = vd.bit[id as usize];
                        (b >= 0).then(|| gb >> b & 1 == 1)
                    };
                    let targets = &mut out[src as usize];
                    if p != q {
                        let r = wd.circ[t[0]];
                        let rb = wd.bit[r as usize];
                        match (get(p), get(q)) {
                            (Some(x), Some(y)) => {
                                for (z, c) in spec.mul(x, y) {
                                    let tb = if z { base | 1 << rb } else { base };
                                    targets.push((wd.offset + tb, Rational::from_integer(sign * c)));
                                }
                            }
                            (None, Some(x)) | (Some(x), None) => {
                                let c = spec.basepoint_mul(x);
                                if c != 0 {
                                    targets.push((wd.offset + base, Rational::from_integer(sign * c)));
                                }
                            }
                            (None, None) => unreachable!("two basepoint circles"),
                        }
                    } else {
                        let r1 = wd.circ[t[0]];
                        let r2 = wd.circ[t[1]];
                        let (b1, b2) = (wd.bit[r1 as usize], wd.bit[r2 as usize]);
                        match get(p) {
                            Some(x) => {
                                for ((l, r), c) in spec.comul(x) {
                                    let mut tb = base;
                                    if l {
                                        tb |= 1 << b1;
                                    }
                                    if r {
                                        tb |= 1 << b2;
                                    }
                                    targets.push((wd.offset + tb, Rational::from_integer(sign * c)));
                                }
                            }
                            None => {
                                let other = if b1 < 0 { b2 } else { b1 };
                                for (l, c) in spec.basepoint_element() {
                                    let tb = if l { base | 1 << other } else { base };
                                    targets.push((wd.offset + tb, Rational::from_integer(sign * c)));
                                }
                            }
                        }
                    }
                }
            }
        }
        ChainComplex::new(degs, out).map_err(|e| KhError::Internal(e.to_string()))
    }
}

/// The cube of resolutions complex of a diagram over a Frobenius algebra.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    layout: CubeLayout,
    spec: FrobeniusSpec,
    complex: ChainComplex,
}

impl CubeComplex {
    /// Builds the complex; fails if it would exceed `budget` generators.
    pub fn new(
        d: &PlanarDiagram,
        spec: FrobeniusSpec,
        reduced: bool,
        budget: usize,
    ) -> Result<CubeComplex, KhError> {
        let layout = CubeLayout::new(d, reduced, budget)?;
        let complex = layout.differential(spec)?;
        Ok(CubeComplex { layout, spec, complex })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChainComplex {
        self.complex
    }

    pub fn layout(&self) -> &CubeLayout {
        &self.layout
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        self.layout.diagram()
    }

    pub fn spec(&self) -> FrobeniusSpec {
        self.spec
    }

    pub fn is_reduced(&self) -> bool {
        self.layout.reduced
    }

    pub fn vertex_count(&self) -> usize {
        self.layout.vertex_count()
    }

    pub fn encode(&self, v: u32, bits: u32) -> u32 {
        self.layout.encode(v, bits)
    }

    pub fn decode(&self, g: u32) -> (u32, u32) {
        self.layout.decode(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_pd, torus_braid};

    fn trefoil() -> PlanarDiagram {
        braid_closure(&torus_braid(2, 3).unwrap())
    }

    #[test]
    fn circle_counts() {
        assert_eq!(state_circles(&parse_pd("U").unwrap(), 0).circles.len(), 1);
        let t = trefoil();
        // All-0 is the oriented resolution of the positive braid: 2 circles.
        assert_eq!(state_circles(&t, 0).circles.len(), 2);
        assert_eq!(state_circles(&t, 0b111).circles.len(), 3);
    }

    /// Independent circle count by walking the smoothed arcs.
    fn walk_count(d: &PlanarDiagram, bits: u32) -> usize {
        let mut partner: FxHashMap<(usize, usize), (usize, usize)> = FxHashMap::default();
        for (k, c) in d.crossings().iter().enumerate() {
            let pairs = if bits >> k & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
            for (x, y) in pairs {
                partner.insert((k, x), (k, y));
                partner.insert((k, y), (k, x));
            }
            let _ = c;
        }
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for k in 0..d.crossing_count() {
            for p in 0..4 {
                if seen.contains(&(k, p)) {
                    continue;
                }
                count += 1;
                let mut s = (k, p);
                loop {
                    seen.insert(s);
                    let a = d.arc_at(s);
                    let e = d.arc_ends(a).unwrap();
                    let o = if e.tail == s { e.head } else { e.tail };
                    seen.insert(o);
                    s = partner[&o];
                    if seen.contains(&s) {
                        break;
                    }
                }
            }
        }
        count + d.free_circles().len()
    }

    #[test]
    fn circle_counts_match_walk() {
        for d in [trefoil(), braid_closure(&torus_braid(3, 4).unwrap())] {
            for v in 0..(1u32 << d.crossing_count()) {
                assert_eq!(state_circles(&d, v).circles.len(), walk_count(&d, v));
            }
        }
    }

    #[test]
    fn d_squared_vanishes() {
        for spec in [FrobeniusSpec::khovanov(), FrobeniusSpec::lee()] {
            for reduced in [false, true] {
                let c = CubeComplex::new(&trefoil(), spec, reduced, 1 << 20).unwrap();
                c.complex().check_d_squared().unwrap();
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let e = CubeComplex::new(&trefoil(), FrobeniusSpec::khovanov(), true, 5).unwrap_err();
        assert!(matches!(e, KhError::Budget { .. }));
    }

    #[test]
    fn encode_decode() {
        let c = CubeComplex::new(&trefoil(), FrobeniusSpec::khovanov(), false, 1 << 20).unwrap();
        for g in 0..c.complex().len() as u32 {
            let (v, b) = c.decode(g);
            assert_eq!(c.encode(v, b), g);
            assert_eq!(c.layout().grading(g), c.complex().grading(g));
        }
    }
}
