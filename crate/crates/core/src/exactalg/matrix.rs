use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use super::Rational;

/// Sparse rational matrix stored by columns. No explicit zeros are kept.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    // Each column sorted by row index.
    data: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|k| vec![(k, Rational::ONE)]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "index ({r},{c}) out of range {rows}x{cols}");
            let e = acc[c].entry(r).or_insert(Rational::ZERO);
            *e += &v;
        }
        let data = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_triplets(
            r,
            c,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, v)| (i, j, Rational::from_integer(*v)))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn column(&self, c: usize) -> &[(usize, Rational)] {
        &self.data[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[c].binary_search_by_key(&r, |(k, _)| *k) {
            Ok(p) => self.data[c][p].1.clone(),
            Err(_) => Rational::ZERO,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut data = Vec::with_capacity(rhs.cols);
        for col in &rhs.data {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, b) in col {
                for (r, a) in &self.data[*k] {
                    let e = acc.entry(*r).or_insert(Rational::ZERO);
                    *e += &(a * b);
                }
            }
            data.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        SparseMatrix { rows: self.rows, cols: rhs.cols, data }
    }

    pub fn scaled(&self, s: &Rational) -> SparseMatrix {
        if s.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v * s)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::ZERO; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            m[r][c] = v.clone();
        }
        m
    }

    /// Exact rank over the rationals.
    ///
    /// Rows are cleared of denominators and reduced by fraction-free
    /// elimination; the pivot row is always a sparsest remaining row and the
    /// pivot column the one touching the fewest remaining rows.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Option<Vec<(usize, BigInt)>>> = vec![Some(Vec::new()); self.rows];
        {
            let mut acc: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
            for (r, c, v) in self.triplets() {
                acc[r].push((c, v.clone()));
            }
            for (r, entries) in acc.into_iter().enumerate() {
                if entries.is_empty() {
                    rows[r] = None;
                    continue;
                }
                let lcm = entries
                    .iter()
                    .fold(BigInt::from(1), |l, (_, v)| l.lcm(&v.denom()));
                let mut row: Vec<(usize, BigInt)> = entries
                    .into_iter()
                    .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                remove_content(&mut row);
                rows[r] = Some(row);
            }
        }

        let mut col_rows: FxHashMap<usize, FxHashSet<usize>> = FxHashMap::default();
        for (r, row) in rows.iter().enumerate() {
            if let Some(row) = row {
                for (c, _) in row {
                    col_rows.entry(*c).or_default().insert(r);
                }
            }
        }

        let mut rank = 0;
        loop {
            let pivot_row = rows
                .iter()
                .enumerate()
                .filter_map(|(r, row)| row.as_ref().map(|x| (x.len(), r)))
                .min();
            let Some((_, pr)) = pivot_row else { break };
            let prow = rows[pr].take().unwrap();
            for (c, _) in &prow {
                col_rows.get_mut(c).unwrap().remove(&pr);
            }
            let (pc, pv) = prow
                .iter()
                .min_by_key(|(c, _)| (col_rows[c].len(), *c))
                .map(|(c, v)| (*c, v.clone()))
                .unwrap();
            rank += 1;

            let targets: Vec<usize> = col_rows[&pc].iter().copied().collect();
            for r in targets {
                let row = rows[r].take().unwrap();
                let rv = row
                    .iter()
                    .find(|(c, _)| *c == pc)
                    .map(|(_, v)| v.clone())
                    .unwrap();
                for (c, _) in &row {
                    col_rows.get_mut(c).unwrap().remove(&r);
                }
                // row <- pv * row - rv * prow
                let mut merged = combine(&pv, &row, &rv, &prow);
                remove_content(&mut merged);
                if merged.is_empty() {
                    continue;
                }
                for (c, _) in &merged {
                    col_rows.entry(*c).or_default().insert(r);
                }
                rows[r] = Some(merged);
            }
        }
        rank
    }
}

fn combine(
    a: &BigInt,
    x: &[(usize, BigInt)],
    b: &BigInt,
    y: &[(usize, BigInt)],
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut p, mut q) = (0, 0);
    while p < x.len() || q < y.len() {
        let cx = x.get(p).map(|e| e.0);
        let cy = y.get(q).map(|e| e.0);
        match (cx, cy) {
            (Some(i), Some(j)) if i == j => {
                let v = a * &x[p].1 - b * &y[q].1;
                if !v.is_zero() {
                    out.push((i, v));
                }
                p += 1;
                q += 1;
            }
            (Some(i), Some(j)) if i < j => {
                out.push((i, a * &x[p].1));
                p += 1;
            }
            (Some(i), None) => {
                out.push((i, a * &x[p].1));
                p += 1;
            }
            (_, Some(j)) => {
                out.push((j, -(b * &y[q].1)));
                q += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn remove_content(row: &mut [(usize, BigInt)]) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && g != BigInt::from(1) {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    if let Some((_, v)) = row.first() {
        if v.is_negative() {
            for (_, v) in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                let s: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", s.join(", "))?;
            }
        } else {
            writeln!(f, "  {} nonzeros", self.nnz())?;
        }
        write!(f, "]")
    }
}
