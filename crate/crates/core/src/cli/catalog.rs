use crate::diagram::{braid_closure, parse_braid, parse_pd, torus_braid, PlanarDiagram};
use crate::exactalg::BigradedDims;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Torus(usize, usize),
    Braid(&'static str),
    Pd(&'static str),
}

/// Reference values kept for regression, with where they come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub kh: &'static [(i64, i64)],
    pub s: i64,
    pub note: &'static str,
}

impl Expected {
    pub fn dims(&self) -> BigradedDims {
        BigradedDims::ones(self.kh.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub source: Source,
    pub expected: Option<Expected>,
}

impl CatalogEntry {
    pub fn diagram(&self) -> PlanarDiagram {
        let d = match self.source {
            Source::Torus(p, q) => torus_braid(p, q).map(|b| braid_closure(&b)),
            Source::Braid(w) => parse_braid(w).map(|b| braid_closure(&b)),
            Source::Pd(s) => parse_pd(s),
        };
        d.expect("catalog entries are valid")
    }

    pub fn matches(&self, name: &str) -> bool {
        let n = name.trim();
        self.name.eq_ignore_ascii_case(n) || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(n))
    }
}

const COMPUTED: &str = "computed on the full cube of resolutions";

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "unknot",
        aliases: &["U", "0_1"],
        source: Source::Pd("U"),
        expected: Some(Expected { kh: &[(0, 0)], s: 0, note: "normalization" }),
    },
    CatalogEntry {
        name: "trefoil",
        aliases: &["right-trefoil", "3_1", "T(2,3)"],
        source: Source::Torus(2, 3),
        expected: Some(Expected { kh: &[(0, 2), (2, 6), (3, 8)], s: 2, note: COMPUTED }),
    },
    CatalogEntry {
        name: "left-trefoil",
        aliases: &["mirror-trefoil", "T(2,-3)"],
        source: Source::Braid("[-1,-1,-1]"),
        expected: Some(Expected { kh: &[(-3, -8), (-2, -6), (0, -2)], s: -2, note: COMPUTED }),
    },
    CatalogEntry {
        name: "figure-eight",
        aliases: &["4_1"],
        source: Source::Braid("[1,-2,1,-2]"),
        expected: Some(Expected { kh: &[(-2, -4), (-1, -2), (0, 0), (1, 2), (2, 4)], s: 0, note: COMPUTED }),
    },
    CatalogEntry {
        name: "T(2,5)",
        aliases: &["5_1"],
        source: Source::Torus(2, 5),
        expected: Some(Expected { kh: &[(0, 4), (2, 8), (3, 10), (4, 12), (5, 14)], s: 4, note: COMPUTED }),
    },
    CatalogEntry {
        name: "T(2,7)",
        aliases: &["7_1"],
        source: Source::Torus(2, 7),
        expected: Some(Expected {
            kh: &[(0, 6), (2, 10), (3, 12), (4, 14), (5, 16), (6, 18), (7, 20)],
            s: 6,
            note: COMPUTED,
        }),
    },
    CatalogEntry {
        name: "T(3,4)",
        aliases: &["8_19"],
        source: Source::Torus(3, 4),
        expected: Some(Expected { kh: &[(0, 6), (2, 10), (3, 12), (4, 12), (5, 16)], s: 6, note: COMPUTED }),
    },
    CatalogEntry {
        name: "T(3,5)",
        aliases: &["10_124"],
        source: Source::Torus(3, 5),
        expected: Some(Expected {
            kh: &[(0, 8), (2, 12), (3, 14), (4, 14), (5, 18), (6, 18), (7, 20)],
            s: 8,
            note: COMPUTED,
        }),
    },
    CatalogEntry {
        name: "T(4,5)",
        aliases: &[],
        source: Source::Torus(4, 5),
        expected: Some(Expected {
            kh: &[(0, 12), (2, 16), (3, 18), (4, 18), (5, 22), (6, 20), (7, 24), (8, 24), (9, 26)],
            s: 12,
            note: "published table",
        }),
    },
];

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.matches(name))
}

/// `T(p,q)` for any torus knot, or `None` when `name` has another shape.
fn torus(name: &str) -> Option<Result<PlanarDiagram, String>> {
    let inner = name.trim().strip_prefix("T(")?.strip_suffix(')')?;
    let (p, q) = inner.split_once(',')?;
    let (p, q) = (p.trim().parse::<usize>().ok()?, q.trim().parse::<usize>().ok()?);
    Some(torus_braid(p, q).map(|b| braid_closure(&b)).map_err(|e| e.to_string()))
}

/// A knot named in the catalog, any torus knot `T(p,q)`, a braid word in
/// brackets, or an inline PD code.
pub fn resolve(text: &str) -> Result<PlanarDiagram, String> {
    if let Some(e) = lookup(text) {
        return Ok(e.diagram());
    }
    if let Some(d) = torus(text) {
        return d;
    }
    let t = text.trim();
    if t.starts_with('[') {
        return parse_braid(t).map(|b| braid_closure(&b)).map_err(|e| e.to_string());
    }
    parse_pd(t).map_err(|e| format!("'{t}' is not a catalog name or a diagram: {e}"))
}
