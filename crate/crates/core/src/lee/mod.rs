//! Lee's deformation, the spectral sequence of its quantum filtration, and
//! the s-invariant.

mod pages;

pub use pages::{Page, PageDifferential};

use std::collections::BTreeSet;

use log::info;
use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::exactalg::{reduce, BigradedDims, ChainComplex, PivotRule, Rational, Reduction};
use crate::khovanov::{CubeComplex, FrobeniusSpec, KhError, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeeError {
    #[error(transparent)]
    Kh(#[from] KhError),
    #[error("differential entry of quantum degree {0} is not filtered")]
    NotFiltered(i64),
    #[error("Lee homology should be one-dimensional at i = 0, found {0}")]
    NotOneDimensional(BigradedDims),
    #[error("inconsistent spectral sequence: {0}")]
    Inconsistent(String),
}

/// A complex whose differential never lowers the quantum grading, split as
/// `d = d_0 + d_2 + d_4 + ...` by how much each entry raises it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: ChainComplex,
}

impl FilteredComplex {
    pub fn new(complex: ChainComplex) -> Result<Self, LeeError> {
        for k in complex.quantum_degrees() {
            if k < 0 || k % 2 != 0 {
                return Err(LeeError::NotFiltered(k));
            }
        }
        Ok(FilteredComplex { complex })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Quantum degrees occurring in the differential.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.complex.quantum_degrees()
    }

    /// The part of the differential raising `j` by exactly `k`.
    pub fn degree_part(&self, k: i64) -> ChainComplex {
        let c = &self.complex;
        let out: Vec<Vec<(u32, Rational)>> = (0..c.len() as u32)
            .map(|g| {
                c.differential(g)
                    .iter()
                    .filter(|(t, _)| c.grading(*t).1 - c.grading(g).1 == k)
                    .cloned()
                    .collect()
            })
            .collect();
        ChainComplex::new(c.gradings().to_vec(), out).expect("sub-differential is well formed")
    }
}

/// Reduced Lee complex: the Khovanov cube with `X^2 = 1` and basepoint
/// element `X + 1`.
pub fn lee_complex(d: &PlanarDiagram) -> Result<FilteredComplex, LeeError> {
    FilteredComplex::new(LeeReduction::cube(d, DEFAULT_BUDGET)?.into_complex())
}

/// The reduced Lee cube together with its filtered cancellation.
///
/// Only entries that preserve `j` are cancelled, so the projection and
/// inclusion are filtered maps and the small complex has the same pages
/// from page 2 on.
#[derive(Clone, Debug)]
pub struct LeeReduction {
    cube: CubeComplex,
    reduction: Reduction,
    small: FilteredComplex,
}

impl LeeReduction {
    fn cube(d: &PlanarDiagram, budget: usize) -> Result<CubeComplex, LeeError> {
        if !d.is_knot() {
            return Err(KhError::NotAKnot(d.component_count()).into());
        }
        Ok(CubeComplex::new(d, FrobeniusSpec::lee(), true, budget)?)
    }

    pub fn new(d: &PlanarDiagram, budget: usize) -> Result<Self, LeeError> {
        let cube = Self::cube(d, budget)?;
        let reduction = reduce(cube.complex(), PivotRule::SameQuantum);
        let small = FilteredComplex::new(reduction.complex().clone())?;
        info!(
            "lee: {} generators -> {} after filtered cancellation",
            cube.complex().len(),
            small.complex().len()
        );
        Ok(LeeReduction { cube, reduction, small })
    }

    pub fn cube_complex(&self) -> &CubeComplex {
        &self.cube
    }

    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }

    pub fn small(&self) -> &FilteredComplex {
        &self.small
    }

    pub fn pages(&self) -> Result<Vec<Page>, LeeError> {
        pages::compute_pages(&self.small)
    }
}

/// Pages of the spectral sequence of a filtered complex, from page 2 until
/// the sequence stops changing. The input is first shrunk by cancelling
/// `j`-preserving entries, which leaves every page from 2 on unchanged.
pub fn ss_pages(f: &FilteredComplex) -> Result<Vec<Page>, LeeError> {
    let r = reduce(f.complex(), PivotRule::SameQuantum);
    let small = FilteredComplex::new(r.into_complex())?;
    pages::compute_pages(&small)
}

/// Pages computed on the given complex as is, with no cancellation.
pub fn ss_pages_direct(f: &FilteredComplex) -> Result<Vec<Page>, LeeError> {
    pages::compute_pages(f)
}

/// Pages of the reduced Lee spectral sequence of a knot.
pub fn lee_pages(d: &PlanarDiagram) -> Result<Vec<Page>, LeeError> {
    LeeReduction::new(d, DEFAULT_BUDGET)?.pages()
}

/// The quantum grading of the surviving Lee class.
pub fn s_from_pages(pages: &[Page]) -> Result<i64, LeeError> {
    let last = pages.last().map(|p| p.dims.clone()).unwrap_or_default();
    let entries: Vec<_> = last.iter().collect();
    match entries[..] {
        [((0, j), 1)] => Ok(j),
        _ => Err(LeeError::NotOneDimensional(last)),
    }
}

pub fn s_invariant(d: &PlanarDiagram) -> Result<i64, LeeError> {
    s_from_pages(&lee_pages(d)?)
}
