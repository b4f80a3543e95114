use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactalg::{BigradedDims, Bigrading};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    IsomorphismCertified,
    /// The map could not be shown to be an isomorphism.
    NotCertified,
}

impl Verdict {
    /// Process exit code: 0 when the check went through, 3 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::NotObstructed | Verdict::IsomorphismCertified => 0,
            Verdict::Obstructed | Verdict::NotCertified => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessData {
    /// Dimensions of the two knots' homology.
    Dimension { source: usize, target: usize },
    /// Rank of a map against the dimension of its source.
    Rank { rank: usize, dim: usize },
    /// The s-invariants differ; the bigrading is where the first knot's
    /// Lee class survives.
    SInvariant { source: i64, target: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub i: i64,
    pub j: i64,
    #[serde(flatten)]
    pub data: WitnessData,
}

impl Witness {
    pub fn bigrading(&self) -> Bigrading {
        (self.i, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub narrative: Vec<String>,
}

impl ObstructionReport {
    pub fn new(verdict: Verdict, witnesses: Vec<Witness>, narrative: Vec<String>) -> Self {
        assert!(!narrative.is_empty(), "a report explains itself");
        assert!(
            verdict != Verdict::Obstructed || !witnesses.is_empty(),
            "an obstruction needs a witness"
        );
        ObstructionReport { verdict, witnesses, narrative }
    }

    /// JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Certifies a self-map from its ranks: an isomorphism exactly when the
/// rank equals the dimension in every bigrading. Otherwise every deficient
/// bigrading is a witness.
pub fn rank_report(
    dims: &BigradedDims,
    ranks: &BTreeMap<Bigrading, usize>,
    mut narrative: Vec<String>,
) -> ObstructionReport {
    let mut full = Vec::new();
    let mut short = Vec::new();
    for (b, n) in dims.iter() {
        let r = ranks.get(&b).copied().unwrap_or(0);
        let w = Witness { i: b.0, j: b.1, data: WitnessData::Rank { rank: r, dim: n } };
        if r == n {
            full.push(w);
        } else {
            short.push(w);
        }
    }
    if short.is_empty() {
        narrative.push(format!("rank equals dimension in all {} bigradings", full.len()));
        ObstructionReport::new(Verdict::IsomorphismCertified, full, narrative)
    } else {
        let at: Vec<String> = short.iter().map(|w| format!("({},{})", w.i, w.j)).collect();
        narrative.push(format!("rank falls short of dimension at {}", at.join(", ")));
        ObstructionReport::new(Verdict::NotCertified, short, narrative)
    }
}
