use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{BigradedDims, Bigrading, ExactAlgError, Rational, SparseMatrix, SparseVec};

/// A finite chain complex over the rationals with bigraded generators.
///
/// Generators are numbered `0..len()`. The differential raises the homological
/// grading by exactly one; its quantum degree may vary per entry (this is how
/// filtered complexes are carried).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainComplex {
    degs: Vec<Bigrading>,
    out: Vec<Vec<(u32, Rational)>>,
}

impl ChainComplex {
    /// Builds a complex, sorting each differential row and summing duplicates.
    pub fn new(
        degs: Vec<Bigrading>,
        out: Vec<Vec<(u32, Rational)>>,
    ) -> Result<Self, ExactAlgError> {
        if degs.len() != out.len() {
            return Err(ExactAlgError::Shape(format!(
                "{} gradings for {} differential rows",
                degs.len(),
                out.len()
            )));
        }
        let n = degs.len();
        let mut rows = Vec::with_capacity(n);
        for (g, row) in out.into_iter().enumerate() {
            let row = normalize_row(row);
            for (t, _) in &row {
                let t = *t as usize;
                if t >= n {
                    return Err(ExactAlgError::Shape(format!(
                        "generator {g} maps to missing generator {t}"
                    )));
                }
                if degs[t].0 != degs[g].0 + 1 {
                    return Err(ExactAlgError::Shape(format!(
                        "entry {g} -> {t} has homological degree {}",
                        degs[t].0 - degs[g].0
                    )));
                }
            }
            rows.push(row);
        }
        Ok(ChainComplex { degs, out: rows })
    }

    /// A complex with zero differential.
    pub fn from_gradings(degs: Vec<Bigrading>) -> Self {
        let n = degs.len();
        ChainComplex { degs, out: vec![Vec::new(); n] }
    }

    pub(crate) fn from_parts_unchecked(
        degs: Vec<Bigrading>,
        out: Vec<Vec<(u32, Rational)>>,
    ) -> Self {
        debug_assert_eq!(degs.len(), out.len());
        ChainComplex { degs, out }
    }

    pub fn len(&self) -> usize {
        self.degs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degs.is_empty()
    }

    pub fn grading(&self, g: u32) -> Bigrading {
        self.degs[g as usize]
    }

    pub fn gradings(&self) -> &[Bigrading] {
        &self.degs
    }

    /// `d(g)` as a list of `(target, coefficient)` sorted by target.
    pub fn differential(&self, g: u32) -> &[(u32, Rational)] {
        &self.out[g as usize]
    }

    pub fn nnz(&self) -> usize {
        self.out.iter().map(|r| r.len()).sum()
    }

    pub fn generator_dims(&self) -> BigradedDims {
        let mut d = BigradedDims::new();
        for b in &self.degs {
            d.add(*b, 1);
        }
        d
    }

    pub fn generators_at(&self, b: Bigrading) -> Vec<u32> {
        (0..self.len() as u32).filter(|g| self.degs[*g as usize] == b).collect()
    }

    /// Set of quantum degrees `j(target) - j(source)` over all nonzero entries.
    pub fn quantum_degrees(&self) -> BTreeSet<i64> {
        let mut s = BTreeSet::new();
        for (g, row) in self.out.iter().enumerate() {
            for (t, _) in row {
                s.insert(self.degs[*t as usize].1 - self.degs[g].1);
            }
        }
        s
    }

    /// True if every entry preserves the quantum grading.
    pub fn is_homogeneous(&self) -> bool {
        self.out.iter().enumerate().all(|(g, row)| {
            row.iter().all(|(t, _)| self.degs[*t as usize].1 == self.degs[g].1)
        })
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut w = SparseVec::new();
        for (g, c) in v.iter() {
            w.add_scaled(c, &self.out[g as usize]);
        }
        w
    }

    /// Verifies `d ∘ d = 0`, reporting the bigrading of the first offending source.
    pub fn check_d_squared(&self) -> Result<(), ExactAlgError> {
        let bad = (0..self.len())
            .into_par_iter()
            .filter(|&g| {
                let mut acc = SparseVec::new();
                for (t, c) in &self.out[g] {
                    acc.add_scaled(c, &self.out[*t as usize]);
                }
                !acc.is_zero()
            })
            .min();
        match bad {
            None => Ok(()),
            Some(g) => {
                let (i, j) = self.degs[g];
                Err(ExactAlgError::NotAComplex { i, j })
            }
        }
    }

    /// Differential from homological degree `i` to `i + 1` restricted to the
    /// given quantum gradings, with the generator lists for rows and columns.
    fn block_matrix(
        &self,
        src: &[u32],
        dst: &[u32],
    ) -> SparseMatrix {
        let mut pos = rustc_hash::FxHashMap::default();
        for (k, g) in dst.iter().enumerate() {
            pos.insert(*g, k);
        }
        let mut trip = Vec::new();
        for (c, g) in src.iter().enumerate() {
            for (t, v) in &self.out[*g as usize] {
                if let Some(r) = pos.get(t) {
                    trip.push((*r, c, v.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(dst.len(), src.len(), trip)
    }

    /// Matrix of the differential from all grade-`i` generators to all
    /// grade-`i+1` generators, columns and rows in generator order.
    pub fn differential_matrix(&self, i: i64) -> (SparseMatrix, Vec<u32>, Vec<u32>) {
        let src: Vec<u32> = (0..self.len() as u32).filter(|g| self.degs[*g as usize].0 == i).collect();
        let dst: Vec<u32> =
            (0..self.len() as u32).filter(|g| self.degs[*g as usize].0 == i + 1).collect();
        (self.block_matrix(&src, &dst), src, dst)
    }

    /// Bigraded homology dimensions by exact rank computations.
    ///
    /// Requires the differential to preserve the quantum grading.
    pub fn homology_dims(&self) -> Result<BigradedDims, ExactAlgError> {
        self.check_d_squared()?;
        if !self.is_homogeneous() {
            return Err(ExactAlgError::Inhomogeneous);
        }
        let mut by_grading: BTreeMap<Bigrading, Vec<u32>> = BTreeMap::new();
        for (g, b) in self.degs.iter().enumerate() {
            by_grading.entry(*b).or_default().push(g as u32);
        }
        let empty = Vec::new();
        let ranks: BTreeMap<Bigrading, usize> = by_grading
            .par_iter()
            .map(|((i, j), src)| {
                let dst = by_grading.get(&(i + 1, *j)).unwrap_or(&empty);
                ((*i, *j), self.block_matrix(src, dst).rank())
            })
            .collect();
        let mut dims = BigradedDims::new();
        for ((i, j), gens) in &by_grading {
            let out_rank = ranks[&(*i, *j)];
            let in_rank = ranks.get(&(i - 1, *j)).copied().unwrap_or(0);
            dims.add((*i, *j), gens.len() - out_rank - in_rank);
        }
        Ok(dims)
    }

    /// Homology dimension per homological degree, ignoring quantum gradings.
    pub fn homology_dims_by_i(&self) -> Result<BTreeMap<i64, usize>, ExactAlgError> {
        self.check_d_squared()?;
        let degrees: BTreeSet<i64> = self.degs.iter().map(|b| b.0).collect();
        let ranks: BTreeMap<i64, usize> = degrees
            .par_iter()
            .map(|i| (*i, self.differential_matrix(*i).0.rank()))
            .collect();
        let mut out = BTreeMap::new();
        for i in degrees {
            let n = self.degs.iter().filter(|b| b.0 == i).count();
            let h = n - ranks[&i] - ranks.get(&(i - 1)).copied().unwrap_or(0);
            if h > 0 {
                out.insert(i, h);
            }
        }
        Ok(out)
    }

    /// Shifts every grading by `(di, dj)`.
    pub fn shifted(&self, di: i64, dj: i64) -> ChainComplex {
        ChainComplex {
            degs: self.degs.iter().map(|(i, j)| (i + di, j + dj)).collect(),
            out: self.out.clone(),
        }
    }
}

fn normalize_row(mut row: Vec<(u32, Rational)>) -> Vec<(u32, Rational)> {
    row.sort_by_key(|(t, _)| *t);
    let mut out: Vec<(u32, Rational)> = Vec::with_capacity(row.len());
    for (t, v) in row {
        match out.last_mut() {
            Some((lt, lv)) if *lt == t => *lv += &v,
            _ => out.push((t, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn zero_differential_counts_generators() {
        let c = ChainComplex::from_gradings(vec![(0, 0), (1, 0), (1, 2)]);
        assert_eq!(c.homology_dims().unwrap(), c.generator_dims());
    }

    #[test]
    fn acyclic_two_term() {
        let c = ChainComplex::new(vec![(0, 0), (1, 0)], vec![vec![(1, r(1))], vec![]]).unwrap();
        assert!(c.homology_dims().unwrap().is_empty());
    }

    #[test]
    fn rank_nullity() {
        let c = ChainComplex::new(
            vec![(0, 0), (0, 0), (1, 0)],
            vec![vec![(2, r(1))], vec![], vec![]],
        )
        .unwrap();
        assert_eq!(c.homology_dims().unwrap(), BigradedDims::ones([(0, 0)]));
    }

    #[test]
    fn detects_nonzero_square() {
        let c = ChainComplex::new(
            vec![(0, 5), (1, 5), (2, 5)],
            vec![vec![(1, r(1))], vec![(2, r(1))], vec![]],
        )
        .unwrap();
        assert_eq!(c.check_d_squared(), Err(ExactAlgError::NotAComplex { i: 0, j: 5 }));
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(ChainComplex::new(vec![(0, 0), (2, 0)], vec![vec![(1, r(1))], vec![]]).is_err());
    }
}
