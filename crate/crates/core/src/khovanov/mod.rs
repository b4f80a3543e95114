//! Reduced rational Khovanov homology from the cube of resolutions.

mod cube;
mod frobenius;
mod jones;

pub use cube::{state_circles, CircleRef, CubeComplex, CubeLayout, CubeVertex};
pub use frobenius::{FrobeniusSpec, Label, Theory, V_MINUS, V_PLUS};
pub use jones::{jones_polynomial, kauffman_bracket, Laurent};

use std::collections::HashMap;
use std::sync::Arc;

use log::info;
use thiserror::Error;

use crate::diagram::{Basepoint, PlanarDiagram};
use crate::exactalg::{reduce, BigradedDims, Bigrading, ChainComplex, PivotRule, Reduction, SparseVec};

/// Default cap on the number of cube generators.
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhError {
    #[error("complex needs {needed} generators, over the budget of {budget}")]
    Budget { needed: usize, budget: usize },
    #[error("the reduced theory needs a knot, got {0} components")]
    NotAKnot(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

/// The cube complex of `d` over `spec`. With `reduced`, `d` must be a knot.
pub fn build_complex(
    d: &PlanarDiagram,
    spec: FrobeniusSpec,
    reduced: bool,
) -> Result<ChainComplex, KhError> {
    build_complex_with_budget(d, spec, reduced, DEFAULT_BUDGET)
}

pub fn build_complex_with_budget(
    d: &PlanarDiagram,
    spec: FrobeniusSpec,
    reduced: bool,
    budget: usize,
) -> Result<ChainComplex, KhError> {
    if reduced && !d.is_knot() {
        return Err(KhError::NotAKnot(d.component_count()));
    }
    Ok(CubeComplex::new(d, spec, reduced, budget)?.into_complex())
}

/// Reduced Khovanov homology dimensions, computed by cancellation.
pub fn kh_dims(d: &PlanarDiagram) -> Result<BigradedDims, KhError> {
    kh_dims_with_budget(d, DEFAULT_BUDGET)
}

pub fn kh_dims_with_budget(d: &PlanarDiagram, budget: usize) -> Result<BigradedDims, KhError> {
    if !d.is_knot() {
        return Err(KhError::NotAKnot(d.component_count()));
    }
    Ok(KhHomology::new(d, budget)?.dims())
}

/// Reduced Khovanov homology dimensions from exact ranks on the full cube.
pub fn kh_dims_naive(d: &PlanarDiagram) -> Result<BigradedDims, KhError> {
    let c = build_complex(d, FrobeniusSpec::khovanov(), true)?;
    c.homology_dims().map_err(|e| KhError::Internal(e.to_string()))
}

/// The reduced cube complex of a diagram's crossing part and its
/// cancellation down to homology.
#[derive(Clone, Debug)]
pub struct KhCore {
    cube: CubeComplex,
    reduction: Reduction,
}

impl KhCore {
    fn new(core: &PlanarDiagram, budget: usize) -> Result<KhCore, KhError> {
        let cube = CubeComplex::new(core, FrobeniusSpec::khovanov(), true, budget)?;
        let (vertices, gens) = (cube.vertex_count(), cube.complex().len());
        let reduction = reduce(cube.complex(), PivotRule::Any);
        info!(
            "khovanov: {} crossings, {} vertices, {} generators -> {} classes",
            core.crossing_count(),
            vertices,
            gens,
            reduction.complex().len()
        );
        Ok(KhCore { cube, reduction })
    }
}

/// Reuses the reduction of a crossing part across diagrams that differ only
/// in their free circles.
#[derive(Default)]
pub struct KhCache {
    cores: HashMap<String, Arc<KhCore>>,
}

impl KhCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn homology(&mut self, d: &PlanarDiagram, budget: usize) -> Result<KhHomology, KhError> {
        let (core, free) = split_free(d);
        let key = core.to_pd_string();
        let shared = match self.cores.get(&key) {
            Some(c) => c.clone(),
            None => {
                let c = Arc::new(KhCore::new(&core, budget)?);
                self.cores.insert(key, c.clone());
                c
            }
        };
        Ok(KhHomology { diagram: d.clone(), core: shared, free })
    }
}

/// Reduced Khovanov homology of a basepointed diagram, with the maps that
/// relate it to the cube complex.
///
/// Only the crossing part of the diagram is reduced; each free circle
/// without the basepoint contributes a tensor factor with zero differential.
/// Slice generator `g` of the full cube corresponds to crossing-part
/// generator `g >> f` with free labels `g & (2^f - 1)`, and likewise for
/// homology classes.
#[derive(Clone, Debug)]
pub struct KhHomology {
    diagram: PlanarDiagram,
    core: Arc<KhCore>,
    free: Vec<u32>,
}

impl KhHomology {
    pub fn new(d: &PlanarDiagram, budget: usize) -> Result<KhHomology, KhError> {
        KhCache::new().homology(d, budget)
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        &self.diagram
    }

    /// Cube complex of the crossing part (free circles removed).
    pub fn core_cube(&self) -> &CubeComplex {
        &self.core.cube
    }

    pub fn reduction(&self) -> &Reduction {
        &self.core.reduction
    }

    /// Free circles carrying a tensor factor, in bit order.
    pub fn free_circles(&self) -> &[u32] {
        &self.free
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Number of homology classes.
    pub fn len(&self) -> usize {
        self.core.reduction.complex().len() << self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of generators of the full cube complex of the diagram.
    pub fn cube_len(&self) -> usize {
        self.core.cube.complex().len() << self.free.len()
    }

    fn free_degree(&self, fb: u32) -> i64 {
        self.free.len() as i64 - 2 * fb.count_ones() as i64
    }

    /// Bigrading of homology class `k`.
    pub fn grading(&self, k: u32) -> Bigrading {
        let f = self.free.len();
        let (i, j) = self.core.reduction.complex().grading(k >> f);
        (i, j + self.free_degree(k & ((1 << f) - 1)))
    }

    /// Bigrading of cube generator `g`.
    pub fn cube_grading(&self, g: u32) -> Bigrading {
        let f = self.free.len();
        let (i, j) = self.core.cube.complex().grading(g >> f);
        (i, j + self.free_degree(g & ((1 << f) - 1)))
    }

    pub fn dims(&self) -> BigradedDims {
        let mut d = BigradedDims::new();
        for k in 0..self.len() as u32 {
            d.add(self.grading(k), 1);
        }
        d
    }

    fn split(&self, v: &SparseVec) -> Vec<SparseVec> {
        let f = self.free.len();
        let mut parts = vec![SparseVec::new(); 1 << f];
        for (g, c) in v.iter() {
            parts[(g & ((1 << f) - 1)) as usize].add_term(g >> f, c);
        }
        parts
    }

    /// Homology class of a cycle of the cube complex.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let f = self.free.len();
        let mut out = SparseVec::new();
        for (fb, part) in self.split(v).into_iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            for (k, c) in self.core.reduction.project(&part).iter() {
                out.add_term((k << f) | fb as u32, c);
            }
        }
        out
    }

    /// A cycle representing the given combination of classes.
    pub fn include(&self, h: &SparseVec) -> SparseVec {
        let f = self.free.len();
        let mut out = SparseVec::new();
        for (fb, part) in self.split(h).into_iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            for (g, c) in self.core.reduction.include(&part).iter() {
                out.add_term((g << f) | fb as u32, c);
            }
        }
        out
    }
}

/// The crossing part of a diagram (keeping a free circle that carries the
/// basepoint) and the remaining free circles.
pub(crate) fn split_free(d: &PlanarDiagram) -> (PlanarDiagram, Vec<u32>) {
    let free: Vec<u32> = d
        .free_circles()
        .iter()
        .copied()
        .filter(|c| d.basepoint() != Basepoint::Circle(*c))
        .collect();
    let keep: Vec<u32> = d.free_circles().iter().copied().filter(|c| !free.contains(c)).collect();
    if d.crossing_count() == 0 && keep.is_empty() {
        return (PlanarDiagram::unknot(), free);
    }
    let core = PlanarDiagram::from_crossings(d.crossings().to_vec(), keep, Some(d.basepoint().label()))
        .expect("the crossing part of a valid diagram is valid");
    (core, free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_pd, torus_braid, BraidWord};

    fn trefoil() -> PlanarDiagram {
        braid_closure(&torus_braid(2, 3).unwrap())
    }

    #[test]
    fn unknot() {
        let u = parse_pd("U").unwrap();
        assert_eq!(kh_dims(&u).unwrap(), BigradedDims::ones([(0, 0)]));
        assert_eq!(kh_dims_naive(&u).unwrap(), BigradedDims::ones([(0, 0)]));
    }

    #[test]
    fn trefoils() {
        let t = trefoil();
        let want = BigradedDims::ones([(0, 2), (2, 6), (3, 8)]);
        assert_eq!(kh_dims_naive(&t).unwrap(), want);
        assert_eq!(kh_dims(&t).unwrap(), want);
        assert_eq!(kh_dims(&t.mirror()).unwrap(), want.mirrored());
    }

    #[test]
    fn figure_eight() {
        let d = braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2]).unwrap());
        let want = BigradedDims::ones([(-2, -4), (-1, -2), (0, 0), (1, 2), (2, 4)]);
        assert_eq!(kh_dims_naive(&d).unwrap(), want);
        assert_eq!(kh_dims(&d).unwrap(), want);
    }

    #[test]
    fn free_circle_tensor_factor() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] U[9]").unwrap();
        let h = KhHomology::new(&d, DEFAULT_BUDGET).unwrap();
        let base = kh_dims(&parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap()).unwrap();
        let want = BigradedDims::from_entries(
            base.iter().flat_map(|((i, j), n)| [((i, j + 1), n), ((i, j - 1), n)]),
        );
        assert_eq!(h.dims(), want);
        // agrees with the full cube of the link
        let full = CubeComplex::new(&d, FrobeniusSpec::khovanov(), true, DEFAULT_BUDGET).unwrap();
        assert_eq!(full.complex().homology_dims().unwrap(), want);
        assert_eq!(full.complex().len(), h.cube_len());
    }

    #[test]
    fn reduced_link_is_rejected() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] U").unwrap();
        assert!(matches!(
            build_complex(&d, FrobeniusSpec::khovanov(), true),
            Err(KhError::NotAKnot(2))
        ));
    }

    #[test]
    fn euler_characteristic_is_jones() {
        for d in [trefoil(), trefoil().mirror(), braid_closure(&torus_braid(3, 4).unwrap())] {
            assert_eq!(kh_dims(&d).unwrap().euler_characteristic(), jones_polynomial(&d));
        }
    }
}
