//! Gaussian elimination of invertible differential entries.
//!
//! Cancelling an entry `λ = <d a, b>` replaces the complex by a smaller,
//! chain homotopy equivalent one. Every step is recorded so that the
//! projection onto the reduced complex and the inclusion back into the
//! original can be applied to arbitrary vectors afterwards.

use std::collections::BTreeMap;

use log::debug;
use rayon::prelude::*;

use super::{ChainComplex, Rational, SparseVec};

/// Which entries may be used as pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Any nonzero entry.
    Any,
    /// Only entries between generators of equal quantum grading. On a
    /// filtered complex this keeps every recorded map filtered.
    SameQuantum,
}

#[derive(Clone, Debug)]
struct Step {
    a: u32,
    b: u32,
    pivot: Rational,
    // d(a) minus its b-term, at the time of cancellation.
    row: Vec<(u32, Rational)>,
    // Sources other than a with an entry into b.
    col: Vec<(u32, Rational)>,
}

#[derive(Clone, Debug)]
struct Block {
    globals: Vec<u32>,
    steps: Vec<Step>,
    // local id -> index in the reduced complex
    new_index: Vec<u32>,
}

/// Result of a reduction: the smaller complex plus the maps relating it to
/// the original one.
#[derive(Clone, Debug)]
pub struct Reduction {
    complex: ChainComplex,
    blocks: Vec<Block>,
    // original id -> (block, local id)
    locate: Vec<(u32, u32)>,
    // reduced id -> original id
    survivors: Vec<u32>,
}

const NONE: u32 = u32::MAX;

struct Reduced {
    out: Vec<Vec<(u32, Rational)>>,
    alive: Vec<bool>,
    steps: Vec<Step>,
}

struct Reducer<'a> {
    out: Vec<Vec<(u32, Rational)>>,
    inn: Vec<Vec<u32>>,
    alive: Vec<bool>,
    steps: Vec<Step>,
    globals: &'a [u32],
    allowed: &'a (dyn Fn(u32, u32) -> bool + Sync),
}

impl<'a> Reducer<'a> {
    fn new(
        out: Vec<Vec<(u32, Rational)>>,
        globals: &'a [u32],
        allowed: &'a (dyn Fn(u32, u32) -> bool + Sync),
    ) -> Self {
        let n = out.len();
        let mut inn = vec![Vec::new(); n];
        for (g, row) in out.iter().enumerate() {
            for (t, _) in row {
                inn[*t as usize].push(g as u32);
            }
        }
        Reducer { out, inn, alive: vec![true; n], steps: Vec::new(), globals, allowed }
    }

    fn clean_in(&mut self, b: u32) {
        let mut v = std::mem::take(&mut self.inn[b as usize]);
        v.retain(|&x| {
            self.alive[x as usize]
                && self.out[x as usize].binary_search_by_key(&b, |e| e.0).is_ok()
        });
        v.sort_unstable();
        v.dedup();
        self.inn[b as usize] = v;
    }

    fn run(&mut self) {
        let n = self.out.len() as u32;
        let mut threshold: u64 = 0;
        loop {
            let mut changed = false;
            for a in 0..n {
                if !self.alive[a as usize] || self.out[a as usize].is_empty() {
                    continue;
                }
                let out_a = self.out[a as usize].len() as u64;
                let mut best: Option<(u64, bool, u64, u32)> = None;
                for k in 0..self.out[a as usize].len() {
                    let (b, ref v) = self.out[a as usize][k];
                    if !(self.allowed)(self.globals[a as usize], self.globals[b as usize]) {
                        continue;
                    }
                    let key_unit = !v.is_unit();
                    let height = v.height();
                    self.clean_in(b);
                    let in_b = self.inn[b as usize].len() as u64;
                    let cost = (in_b - 1) * (out_a - 1);
                    let key = (cost, key_unit, height, b);
                    if best.as_ref().is_none_or(|cur| key < *cur) {
                        best = Some(key);
                    }
                }
                if let Some((cost, _, _, b)) = best {
                    if cost <= threshold {
                        self.eliminate(a, b);
                        changed = true;
                    }
                }
            }
            if !changed {
                if threshold == u64::MAX {
                    break;
                }
                threshold = if threshold >= 1 << 20 {
                    u64::MAX
                } else {
                    (threshold * 2).max(1)
                };
            }
        }
    }

    fn eliminate(&mut self, a: u32, b: u32) {
        let row_a = std::mem::take(&mut self.out[a as usize]);
        let pivot = row_a
            .iter()
            .find(|e| e.0 == b)
            .map(|e| e.1.clone())
            .expect("pivot entry present");
        self.clean_in(b);
        let sources: Vec<u32> = self.inn[b as usize].iter().copied().filter(|&x| x != a).collect();
        let mut col = Vec::with_capacity(sources.len());
        for x in sources {
            let xrow = std::mem::take(&mut self.out[x as usize]);
            let mu = xrow
                .iter()
                .find(|e| e.0 == b)
                .map(|e| e.1.clone())
                .expect("column entry present");
            let f = &mu / &pivot;
            let merged = subtract_scaled(&xrow, &f, &row_a, |y| self.inn[y as usize].push(x));
            self.out[x as usize] = merged;
            col.push((x, mu));
        }
        self.clean_in(a);
        for x in std::mem::take(&mut self.inn[a as usize]) {
            let row = &mut self.out[x as usize];
            if let Ok(p) = row.binary_search_by_key(&a, |e| e.0) {
                row.remove(p);
            }
        }
        self.alive[a as usize] = false;
        self.alive[b as usize] = false;
        self.out[b as usize] = Vec::new();
        self.inn[b as usize] = Vec::new();
        let row = row_a.into_iter().filter(|e| e.0 != b).collect();
        self.steps.push(Step { a, b, pivot, row, col });
    }
}

/// `x - f * y` for sorted term lists; calls `on_new` for each target absent from `x`.
fn subtract_scaled<F: FnMut(u32)>(
    x: &[(u32, Rational)],
    f: &Rational,
    y: &[(u32, Rational)],
    mut on_new: F,
) -> Vec<(u32, Rational)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut p, mut q) = (0, 0);
    while p < x.len() || q < y.len() {
        if q == y.len() || (p < x.len() && x[p].0 < y[q].0) {
            out.push(x[p].clone());
            p += 1;
        } else if p == x.len() || y[q].0 < x[p].0 {
            on_new(y[q].0);
            out.push((y[q].0, -(f * &y[q].1)));
            q += 1;
        } else {
            let v = &x[p].1 - &(f * &y[q].1);
            if !v.is_zero() {
                out.push((x[p].0, v));
            }
            p += 1;
            q += 1;
        }
    }
    out
}

/// Reduces `c` by Gaussian elimination under the given pivot rule.
///
/// When the differential preserves the quantum grading, each quantum
/// grading is reduced independently and in parallel.
pub fn reduce(c: &ChainComplex, rule: PivotRule) -> Reduction {
    match rule {
        PivotRule::Any => reduce_where(c, |_, _| true),
        PivotRule::SameQuantum => reduce_where(c, |a, b| c.grading(a).1 == c.grading(b).1),
    }
}

/// Reduces `c`, cancelling only entries `a -> b` for which `allowed(a, b)`
/// holds (in original ids).
pub fn reduce_where<F>(c: &ChainComplex, allowed: F) -> Reduction
where
    F: Fn(u32, u32) -> bool + Sync,
{
    let n = c.len();
    let mut groups: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    if c.is_homogeneous() {
        for g in 0..n as u32 {
            groups.entry(c.grading(g).1).or_default().push(g);
        }
    } else {
        groups.insert(0, (0..n as u32).collect());
    }
    let mut locate = vec![(NONE, NONE); n];
    for (bi, globals) in groups.values().enumerate() {
        for (l, g) in globals.iter().enumerate() {
            locate[*g as usize] = (bi as u32, l as u32);
        }
    }
    let group_list: Vec<Vec<u32>> = groups.into_values().collect();
    let reduced: Vec<(Vec<u32>, Reduced)> = group_list
        .into_par_iter()
        .map(|globals| {
            let out = globals
                .iter()
                .map(|g| {
                    c.differential(*g)
                        .iter()
                        .map(|(t, v)| (locate[*t as usize].1, v.clone()))
                        .collect()
                })
                .collect();
            let mut r = Reducer::new(out, &globals, &allowed);
            r.run();
            let Reducer { out, alive, steps, .. } = r;
            (globals, Reduced { out, alive, steps })
        })
        .collect();

    // Assign reduced ids in original order.
    let mut survivors = Vec::new();
    for g in 0..n as u32 {
        let (bi, l) = locate[g as usize];
        if reduced[bi as usize].1.alive[l as usize] {
            survivors.push(g);
        }
    }
    let mut new_of_orig = vec![NONE; n];
    for (k, g) in survivors.iter().enumerate() {
        new_of_orig[*g as usize] = k as u32;
    }
    let mut degs = Vec::with_capacity(survivors.len());
    let mut out = Vec::with_capacity(survivors.len());
    for g in &survivors {
        let (bi, l) = locate[*g as usize];
        let (globals, r) = &reduced[bi as usize];
        degs.push(c.grading(*g));
        let mut row: Vec<(u32, Rational)> = r.out[l as usize]
            .iter()
            .map(|(t, v)| (new_of_orig[globals[*t as usize] as usize], v.clone()))
            .collect();
        row.sort_by_key(|e| e.0);
        out.push(row);
    }
    let blocks: Vec<Block> = reduced
        .into_iter()
        .map(|(globals, r)| {
            let new_index = globals.iter().map(|g| new_of_orig[*g as usize]).collect();
            Block { globals, steps: r.steps, new_index }
        })
        .collect();
    let complex = ChainComplex::from_parts_unchecked(degs, out);
    debug!(
        "reduced {} generators to {} in {} blocks",
        n,
        complex.len(),
        blocks.len()
    );
    Reduction { complex, blocks, locate, survivors }
}

/// Cancels every invertible entry; the result has zero differential.
pub fn simplify(c: &ChainComplex) -> ChainComplex {
    reduce(c, PivotRule::Any).complex
}

impl Reduction {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChainComplex {
        self.complex
    }

    /// Original ids of the surviving generators, indexed by reduced id.
    pub fn survivors(&self) -> &[u32] {
        &self.survivors
    }

    pub fn original_len(&self) -> usize {
        self.locate.len()
    }

    pub fn steps(&self) -> usize {
        self.blocks.iter().map(|b| b.steps.len()).sum()
    }

    fn split(&self, v: &SparseVec) -> Vec<SparseVec> {
        let mut parts = vec![SparseVec::new(); self.blocks.len()];
        for (g, c) in v.iter() {
            let (bi, l) = self.locate[g as usize];
            parts[bi as usize].add_term(l, c);
        }
        parts
    }

    /// Projection from the original complex onto the reduced one (a chain map).
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let mut result = SparseVec::new();
        for (block, mut w) in self.blocks.iter().zip(self.split(v)) {
            if w.is_zero() {
                continue;
            }
            for s in &block.steps {
                let c = w.remove(s.b);
                if !c.is_zero() {
                    w.add_scaled(&(-(&c / &s.pivot)), &s.row);
                }
                w.remove(s.a);
            }
            for (l, c) in w.iter() {
                let k = block.new_index[l as usize];
                debug_assert_ne!(k, NONE);
                result.add_term(k, c);
            }
        }
        result
    }

    /// Inclusion of the reduced complex into the original (a chain map).
    pub fn include(&self, w: &SparseVec) -> SparseVec {
        let mut parts = vec![SparseVec::new(); self.blocks.len()];
        for (k, c) in w.iter() {
            let g = self.survivors[k as usize];
            let (bi, l) = self.locate[g as usize];
            parts[bi as usize].add_term(l, c);
        }
        let mut result = SparseVec::new();
        for (block, mut v) in self.blocks.iter().zip(parts) {
            if v.is_zero() {
                continue;
            }
            for s in block.steps.iter().rev() {
                let mut acc = Rational::ZERO;
                for (x, mu) in &s.col {
                    if let Some(c) = v_get(&v, *x) {
                        acc += &(&c * mu);
                    }
                }
                if !acc.is_zero() {
                    v.add_term(s.a, &(-(&acc / &s.pivot)));
                }
            }
            for (l, c) in v.iter() {
                result.add_term(block.globals[l as usize], c);
            }
        }
        result
    }
}

fn v_get(v: &SparseVec, g: u32) -> Option<Rational> {
    if v.contains(g) {
        Some(v.get(g))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::BigradedDims;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn acyclic_pair_vanishes() {
        let c = ChainComplex::new(vec![(0, 0), (1, 0)], vec![vec![(1, r(1))], vec![]]).unwrap();
        assert!(simplify(&c).is_empty());
    }

    #[test]
    fn zero_differential_unchanged() {
        let c = ChainComplex::from_gradings(vec![(0, 0), (1, 2)]);
        assert_eq!(simplify(&c), c);
    }

    #[test]
    fn same_quantum_rule_keeps_higher_entries() {
        // a -> b at degree 0, c -> d at degree 2.
        let c = ChainComplex::new(
            vec![(0, 0), (1, 0), (0, 0), (1, 2)],
            vec![vec![(1, r(1))], vec![], vec![(3, r(1))], vec![]],
        )
        .unwrap();
        let red = reduce(&c, PivotRule::SameQuantum);
        assert_eq!(red.complex().len(), 2);
        assert_eq!(red.complex().nnz(), 1);
    }

    /// Random complexes built as d = P D P^{-1}-style compositions: start
    /// from a direct sum of elementary pieces and mix by a unitriangular
    /// change of basis inside each bigrading.
    fn random_complex(
        pieces: &[(u8, i64)],
        mix: &[(usize, usize, i64)],
    ) -> (ChainComplex, BigradedDims) {
        let mut degs = Vec::new();
        let mut out: Vec<Vec<(u32, Rational)>> = Vec::new();
        let mut homology = BigradedDims::new();
        for (kind, i) in pieces {
            let i = *i;
            let j = (*kind as i64 % 2) * 2;
            if kind % 3 == 0 {
                degs.push((i, j));
                out.push(vec![]);
                homology.add((i, j), 1);
            } else {
                let n = degs.len() as u32;
                degs.push((i, j));
                degs.push((i + 1, j));
                out.push(vec![(n + 1, r(*kind as i64 % 5 + 1))]);
                out.push(vec![]);
            }
        }
        let n = degs.len();
        // Basis change: e_s <- e_s + k e_t for s < t in the same bigrading.
        // The matrix of d in the new basis is E^{-1} D E.
        let mut dense: Vec<Vec<Rational>> = vec![vec![Rational::ZERO; n]; n];
        for (s, row) in out.iter().enumerate() {
            for (t, v) in row {
                dense[*t as usize][s] = v.clone();
            }
        }
        for (s, t, k) in mix {
            let (s, t) = (s % n.max(1), t % n.max(1));
            if n == 0 || s >= t || degs[s] != degs[t] {
                continue;
            }
            let k = r(*k);
            // columns: col_t += k col_s ; rows: row_s -= k row_t
            for x in 0..n {
                let v = &dense[x][s] * &k;
                dense[x][t] += &v;
            }
            for x in 0..n {
                let v = &dense[t][x] * &k;
                dense[s][x] -= &v;
            }
        }
        let out = (0..n)
            .map(|s| {
                (0..n)
                    .filter(|t| !dense[*t][s].is_zero())
                    .map(|t| (t as u32, dense[t][s].clone()))
                    .collect()
            })
            .collect();
        (ChainComplex::new(degs, out).unwrap(), homology)
    }

    proptest! {
        #[test]
        fn simplify_preserves_homology(
            pieces in proptest::collection::vec((0u8..12, -2i64..3), 0..10),
            mix in proptest::collection::vec((0usize..20, 0usize..20, -3i64..4), 0..30),
        ) {
            let (c, expected) = random_complex(&pieces, &mix);
            c.check_d_squared().unwrap();
            prop_assert_eq!(c.homology_dims().unwrap(), expected.clone());
            let red = reduce(&c, PivotRule::Any);
            prop_assert!(red.complex().len() <= c.len());
            prop_assert_eq!(red.complex().nnz(), 0);
            prop_assert_eq!(red.complex().generator_dims(), expected);
        }

        #[test]
        fn projection_and_inclusion_are_chain_maps(
            pieces in proptest::collection::vec((0u8..12, -2i64..3), 0..8),
            mix in proptest::collection::vec((0usize..16, 0usize..16, -3i64..4), 0..20),
        ) {
            let (c, _) = random_complex(&pieces, &mix);
            let red = reduce(&c, PivotRule::Any);
            for g in 0..c.len() as u32 {
                let v = SparseVec::basis(g);
                let lhs = red.project(&c.apply(&v));
                let rhs = red.complex().apply(&red.project(&v));
                prop_assert_eq!(lhs, rhs);
            }
            for k in 0..red.complex().len() as u32 {
                let w = SparseVec::basis(k);
                let lhs = c.apply(&red.include(&w));
                let rhs = red.include(&red.complex().apply(&w));
                prop_assert_eq!(lhs, rhs);
                // π ∘ ι = id
                prop_assert_eq!(red.project(&red.include(&w)), w);
            }
        }
    }
}
