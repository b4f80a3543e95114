use rustc_hash::FxHashMap;

use super::Rational;

/// Sparse rational vector indexed by generator id.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SparseVec {
    map: FxHashMap<u32, Rational>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(g: u32) -> Self {
        let mut v = Self::new();
        v.map.insert(g, Rational::ONE);
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (u32, Rational)>>(iter: I) -> Self {
        let mut v = Self::new();
        for (g, c) in iter {
            v.add_term(g, &c);
        }
        v
    }

    pub fn get(&self, g: u32) -> Rational {
        self.map.get(&g).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn contains(&self, g: u32) -> bool {
        self.map.contains_key(&g)
    }

    pub fn remove(&mut self, g: u32) -> Rational {
        self.map.remove(&g).unwrap_or(Rational::ZERO)
    }

    pub fn add_term(&mut self, g: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&g) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.map.remove(&g);
                }
            }
            None => {
                self.map.insert(g, c.clone());
            }
        }
    }

    /// `self += s * other`, with `other` given as a term list.
    pub fn add_scaled(&mut self, s: &Rational, other: &[(u32, Rational)]) {
        if s.is_zero() {
            return;
        }
        for (g, c) in other {
            self.add_term(*g, &(s * c));
        }
    }

    pub fn add_vec(&mut self, s: &Rational, other: &SparseVec) {
        if s.is_zero() {
            return;
        }
        for (g, c) in &other.map {
            self.add_term(*g, &(s * c));
        }
    }

    pub fn scale(&mut self, s: &Rational) {
        if s.is_zero() {
            self.map.clear();
        } else {
            for c in self.map.values_mut() {
                *c = &*c * s;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        self.map.iter().map(|(g, c)| (*g, c))
    }

    /// Terms sorted by generator id.
    pub fn terms(&self) -> Vec<(u32, Rational)> {
        let mut t: Vec<(u32, Rational)> = self.map.iter().map(|(g, c)| (*g, c.clone())).collect();
        t.sort_by_key(|(g, _)| *g);
        t
    }

    pub fn map_indices<F: FnMut(u32) -> Option<u32>>(&self, mut f: F) -> SparseVec {
        let mut out = SparseVec::new();
        for (g, c) in &self.map {
            if let Some(h) = f(*g) {
                out.add_term(h, c);
            }
        }
        out
    }
}

impl std::fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms().iter().map(|(g, c)| format!("{c}*g{g}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
