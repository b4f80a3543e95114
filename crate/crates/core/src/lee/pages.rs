use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FilteredComplex, LeeError};
use crate::exactalg::dense::{self, DVec};
use crate::exactalg::{BigradedDims, Bigrading, Rational};

/// One page differential between two bigradings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDifferential {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub rank: usize,
}

/// A page of the spectral sequence of the quantum filtration.
///
/// Pages are numbered so that the associated graded homology (Khovanov
/// homology) is page 2; the differential on page `r` raises `j` by `2(r-1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Page {
    pub r: usize,
    pub dims: BigradedDims,
    pub differentials: Vec<PageDifferential>,
    #[serde(skip)]
    pub(crate) data: PageData,
}

/// Bases and matrices behind a page, used to push maps through pages.
#[derive(Clone, Debug, Default)]
pub(crate) struct PageData {
    /// Representatives of a basis of each bigraded piece, as vectors over the
    /// generators of that homological degree.
    pub reps: BTreeMap<Bigrading, Vec<DVec>>,
    /// What the representatives are taken modulo, in the same coordinates.
    pub den: BTreeMap<Bigrading, Vec<DVec>>,
    /// Page differential from each bigrading: rows indexed by the target
    /// basis, columns by the source basis.
    pub diff: BTreeMap<Bigrading, Vec<DVec>>,
    /// Basis of the next page in coordinates of this page's basis.
    pub lift: BTreeMap<Bigrading, Vec<DVec>>,
}

impl Page {
    /// Quantum degree raised by this page's differential.
    pub fn shift(&self) -> i64 {
        2 * (self.r as i64 - 1)
    }

    pub fn total_rank(&self) -> usize {
        self.differentials.iter().map(|d| d.rank).sum()
    }

    /// Checks homological degree, rank bounds and the page-to-page dimension
    /// count against `next`.
    pub fn check_against(&self, next: Option<&Page>) -> Result<(), LeeError> {
        let mut remaining = self.dims.clone();
        for d in &self.differentials {
            if d.to[0] != d.from[0] + 1 {
                return Err(LeeError::Inconsistent(format!("differential {d:?} not of degree +1")));
            }
            let (s, t) = ((d.from[0], d.from[1]), (d.to[0], d.to[1]));
            if d.rank > self.dims.get(s).min(self.dims.get(t)) {
                return Err(LeeError::Inconsistent(format!("rank too large in {d:?}")));
            }
            remaining.sub(s, d.rank);
            remaining.sub(t, d.rank);
        }
        if let Some(n) = next {
            if n.dims != remaining {
                return Err(LeeError::Inconsistent(format!(
                    "page {} dims {} do not follow from page {}",
                    n.r, n.dims, self.r
                )));
            }
        }
        Ok(())
    }
}

struct Layout {
    // generators of each homological degree, with their quantum grading
    by_i: BTreeMap<i64, Vec<(u32, i64)>>,
    // position of each generator inside its homological degree
    pos: Vec<usize>,
}

impl Layout {
    fn new(f: &FilteredComplex) -> Self {
        let c = f.complex();
        let mut by_i: BTreeMap<i64, Vec<(u32, i64)>> = BTreeMap::new();
        let mut pos = vec![0; c.len()];
        for g in 0..c.len() as u32 {
            let (i, j) = c.grading(g);
            let v = by_i.entry(i).or_default();
            pos[g as usize] = v.len();
            v.push((g, j));
        }
        Layout { by_i, pos }
    }

    fn dim(&self, i: i64) -> usize {
        self.by_i.get(&i).map_or(0, |v| v.len())
    }
}

struct Ctx<'a> {
    f: &'a FilteredComplex,
    lay: Layout,
    zcache: BTreeMap<(usize, i64, i64), Vec<DVec>>,
}

impl Ctx<'_> {
    /// `Z_k^{i,p} = {x in F_p C_i : dx in F_{p+2k}}`.
    fn z(&mut self, k: usize, i: i64, p: i64) -> Vec<DVec> {
        if let Some(v) = self.zcache.get(&(k, i, p)) {
            return v.clone();
        }
        let n = self.lay.dim(i);
        let gens = self.lay.by_i.get(&i).cloned().unwrap_or_default();
        let cols: Vec<usize> = (0..n).filter(|&c| gens[c].1 >= p).collect();
        let bound = p + 2 * k as i64;
        let targets = self.lay.by_i.get(&(i + 1)).cloned().unwrap_or_default();
        let rows_idx: Vec<usize> = (0..targets.len()).filter(|&r| targets[r].1 < bound).collect();
        let row_of: BTreeMap<usize, usize> =
            rows_idx.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let mut rows = vec![vec![Rational::ZERO; cols.len()]; rows_idx.len()];
        for (ci, c) in cols.iter().enumerate() {
            let g = gens[*c].0;
            for (t, v) in self.f.complex().differential(g) {
                if let Some(r) = row_of.get(&self.lay.pos[*t as usize]) {
                    rows[*r][ci] = v.clone();
                }
            }
        }
        let ns = dense::nullspace(&rows, cols.len());
        let out: Vec<DVec> = ns
            .into_iter()
            .map(|x| {
                let mut v = vec![Rational::ZERO; n];
                for (ci, c) in cols.iter().enumerate() {
                    v[*c] = x[ci].clone();
                }
                v
            })
            .collect();
        self.zcache.insert((k, i, p), out.clone());
        out
    }

    fn apply_d(&self, i: i64, x: &DVec) -> DVec {
        let gens = &self.lay.by_i[&i];
        let mut out = vec![Rational::ZERO; self.lay.dim(i + 1)];
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (t, v) in self.f.complex().differential(gens[c].0) {
                let t = self.lay.pos[*t as usize];
                let add = xc * v;
                out[t] += &add;
            }
        }
        out
    }

    /// `Z_{k-1}^{p+2} + d Z_{k-1}^{p-2(k-1)}` inside `C_i`.
    fn denominator(&mut self, k: usize, i: i64, p: i64) -> Vec<DVec> {
        let n = self.lay.dim(i);
        let mut v = self.z(k - 1, i, p + 2);
        if self.lay.dim(i - 1) > 0 {
            let src = self.z(k - 1, i - 1, p - 2 * (k as i64 - 1));
            for x in src {
                v.push(self.apply_d(i - 1, &x));
            }
        }
        dense::rref(&v, n).0
    }
}

/// Coordinates of `v` against `reps`, modulo the span of `den`.
fn coords(reps: &[DVec], den: &[DVec], v: &DVec) -> Option<DVec> {
    let mut basis = reps.to_vec();
    basis.extend(den.iter().cloned());
    dense::solve(&basis, v).map(|c| c[..reps.len()].to_vec())
}

/// Computes all pages from the subquotients of the filtration, up to and
/// including the first page after which every differential vanishes.
pub(crate) fn compute_pages(f: &FilteredComplex) -> Result<Vec<Page>, LeeError> {
    let mut ctx = Ctx { f, lay: Layout::new(f), zcache: BTreeMap::new() };
    let c = f.complex();
    let bigradings: Vec<Bigrading> = c.generator_dims().support().collect();
    let (jmin, jmax) = match (
        bigradings.iter().map(|b| b.1).min(),
        bigradings.iter().map(|b| b.1).max(),
    ) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(vec![Page { r: 2, dims: BigradedDims::new(), differentials: vec![], data: PageData::default() }]),
    };
    // Beyond this index every differential leaves the support.
    let kmax = ((jmax - jmin) / 2 + 1).max(1) as usize;

    let mut raw: Vec<(BTreeMap<Bigrading, Vec<DVec>>, BTreeMap<Bigrading, Vec<DVec>>)> = Vec::new();
    for k in 1..=kmax + 1 {
        let mut reps = BTreeMap::new();
        let mut dens = BTreeMap::new();
        for &(i, p) in &bigradings {
            let n = ctx.lay.dim(i);
            let z = ctx.z(k, i, p);
            let den = ctx.denominator(k, i, p);
            let zr = dense::rank(&z, n);
            let mut both = z.clone();
            both.extend(den.iter().cloned());
            if dense::rank(&both, n) != zr {
                return Err(LeeError::Inconsistent(format!(
                    "boundary space not inside cycles at ({i},{p}), page {}",
                    k + 1
                )));
            }
            let r = dense::complement(&den, &z, n);
            if !r.is_empty() {
                reps.insert((i, p), r);
            }
            dens.insert((i, p), den);
        }
        raw.push((reps, dens));
    }

    let mut pages = Vec::new();
    for k in 1..=kmax {
        let (reps, dens) = &raw[k - 1];
        let shift = 2 * k as i64;
        let mut data = PageData { reps: reps.clone(), den: dens.clone(), ..Default::default() };
        let mut dims = BigradedDims::new();
        let mut differentials = Vec::new();
        for (b, r) in reps {
            dims.add(*b, r.len());
            let t = (b.0 + 1, b.1 + shift);
            let empty = Vec::new();
            let trep = reps.get(&t).unwrap_or(&empty);
            // no generators sit at t itself, but higher filtration still counts
            let far;
            let tden = match dens.get(&t) {
                Some(x) => x,
                None => {
                    far = ctx.denominator(k, t.0, t.1);
                    &far
                }
            };
            let mut cols = Vec::new();
            for z in r {
                let dz = ctx.apply_d(b.0, z);
                let cz = if trep.is_empty() {
                    // must already vanish in the quotient
                    let ok = dz.iter().all(|x| x.is_zero())
                        || dense::solve(tden, &dz).is_some();
                    if !ok {
                        return Err(LeeError::Inconsistent(format!("d leaves page {} at {b:?}", k + 1)));
                    }
                    Vec::new()
                } else {
                    coords(trep, tden, &dz).ok_or_else(|| {
                        LeeError::Inconsistent(format!("d of a page {} class at {b:?}", k + 1))
                    })?
                };
                cols.push(cz);
            }
            if !trep.is_empty() {
                // rows = target basis, columns = source basis
                let m: Vec<DVec> = (0..trep.len())
                    .map(|row| cols.iter().map(|col| col[row].clone()).collect())
                    .collect();
                let rank = dense::rank(&m, r.len());
                if rank > 0 {
                    differentials.push(PageDifferential {
                        from: [b.0, b.1],
                        to: [t.0, t.1],
                        rank,
                    });
                }
                data.diff.insert(*b, m);
            }
            // lift the next page's basis
            let (nreps, _) = &raw[k];
            if let Some(nr) = nreps.get(b) {
                let den = &dens[b];
                let mut lift = Vec::new();
                for z in nr {
                    lift.push(coords(r, den, z).ok_or_else(|| {
                        LeeError::Inconsistent(format!("page {} class not a page {} cycle", k + 2, k + 1))
                    })?);
                }
                data.lift.insert(*b, lift);
            }
        }
        pages.push(Page { r: k + 1, dims, differentials, data });
    }
    // Keep pages through the first one after which nothing changes.
    let last = pages
        .iter()
        .rposition(|p| !p.differentials.is_empty())
        .map_or(0, |x| x + 1);
    pages.truncate(last + 1);
    for w in 0..pages.len() {
        let next = pages.get(w + 1).cloned();
        pages[w].check_against(next.as_ref())?;
    }
    Ok(pages)
}
