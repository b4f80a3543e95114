use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A bigrading `(i, j)`: homological grading `i`, quantum grading `j`.
pub type Bigrading = (i64, i64);

/// Finitely supported map `(i, j) -> dimension`. Zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BigradedDims {
    map: BTreeMap<Bigrading, usize>,
}

/// One row of the JSON form of [`BigradedDims`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub i: i64,
    pub j: i64,
    pub dim: usize,
}

impl BigradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (Bigrading, usize)>>(iter: I) -> Self {
        let mut d = Self::new();
        for (b, n) in iter {
            d.add(b, n);
        }
        d
    }

    /// Every listed bigrading with dimension 1.
    pub fn ones<I: IntoIterator<Item = Bigrading>>(iter: I) -> Self {
        Self::from_entries(iter.into_iter().map(|b| (b, 1)))
    }

    pub fn get(&self, b: Bigrading) -> usize {
        self.map.get(&b).copied().unwrap_or(0)
    }

    pub fn add(&mut self, b: Bigrading, n: usize) {
        if n > 0 {
            *self.map.entry(b).or_insert(0) += n;
        }
    }

    pub fn set(&mut self, b: Bigrading, n: usize) {
        if n == 0 {
            self.map.remove(&b);
        } else {
            self.map.insert(b, n);
        }
    }

    /// Subtracts `n` at `b`; panics if that would go negative.
    pub fn sub(&mut self, b: Bigrading, n: usize) {
        let cur = self.get(b);
        assert!(cur >= n, "dimension underflow at {b:?}: {cur} - {n}");
        self.set(b, cur - n);
    }

    pub fn total(&self) -> usize {
        self.map.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bigrading, usize)> + '_ {
        self.map.iter().map(|(b, n)| (*b, *n))
    }

    pub fn support(&self) -> impl Iterator<Item = Bigrading> + '_ {
        self.map.keys().copied()
    }

    /// Total dimension in homological grading `i`.
    pub fn dim_at_i(&self, i: i64) -> usize {
        self.map.range((i, i64::MIN)..=(i, i64::MAX)).map(|(_, n)| n).sum()
    }

    pub fn homological_degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.map.keys().map(|b| b.0).collect();
        v.dedup();
        v
    }

    /// `(i, j) -> (-i, -j)`, the effect of mirroring a knot.
    pub fn mirrored(&self) -> Self {
        Self::from_entries(self.iter().map(|((i, j), n)| ((-i, -j), n)))
    }

    pub fn shifted(&self, di: i64, dj: i64) -> Self {
        Self::from_entries(self.iter().map(|((i, j), n)| ((i + di, j + dj), n)))
    }

    /// Graded Euler characteristic `sum (-1)^i q^j dim`, as `q`-exponent -> coefficient.
    pub fn euler_characteristic(&self) -> BTreeMap<i64, i64> {
        let mut p = BTreeMap::new();
        for ((i, j), n) in self.iter() {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            *p.entry(j).or_insert(0) += s * n as i64;
        }
        p.retain(|_, c| *c != 0);
        p
    }

    /// Entries sorted by `(i, j)`.
    pub fn entries(&self) -> Vec<DimEntry> {
        self.iter().map(|((i, j), dim)| DimEntry { i, j, dim }).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.entries()).expect("dims serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        let entries: Vec<DimEntry> = serde_json::from_str(s)?;
        Ok(Self::from_entries(entries.into_iter().map(|e| ((e.i, e.j), e.dim))))
    }
}

impl Serialize for BigradedDims {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BigradedDims {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<DimEntry>::deserialize(deserializer)?;
        Ok(Self::from_entries(entries.into_iter().map(|e| ((e.i, e.j), e.dim))))
    }
}

impl fmt::Debug for BigradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

impl fmt::Display for BigradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|((i, j), n)| format!("({i},{j}):{n}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_sorted_and_round_trips() {
        let d = BigradedDims::from_entries([((2, 6), 1), ((0, 2), 1), ((3, 8), 1)]);
        assert_eq!(
            d.to_json(),
            r#"[{"i":0,"j":2,"dim":1},{"i":2,"j":6,"dim":1},{"i":3,"j":8,"dim":1}]"#
        );
        assert_eq!(BigradedDims::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn zero_entries_are_dropped() {
        let mut d = BigradedDims::from_entries([((0, 0), 0), ((1, 1), 2)]);
        assert_eq!(d.iter().count(), 1);
        d.sub((1, 1), 2);
        assert!(d.is_empty());
    }

    #[test]
    fn euler_characteristic_of_trefoil_table() {
        let d = BigradedDims::ones([(0, 2), (2, 6), (3, 8)]);
        let chi: Vec<_> = d.euler_characteristic().into_iter().collect();
        assert_eq!(chi, vec![(2, 1), (6, 1), (8, -1)]);
    }
}
