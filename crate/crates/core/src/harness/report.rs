//! The persisted experiment report. Field order is the serialization order,
//! and nothing time- or machine-dependent is recorded, so equal inputs give
//! byte-identical JSON.

use serde::{Deserialize, Serialize};

use crate::polygon::Polygon;

pub const SCHEMA: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub n: u64,
    pub d: u64,
    pub p: u64,
    pub a: usize,
}

impl Parameters {
    pub fn new(n: u64, d: u64, p: u64, a: usize) -> Parameters {
        Parameters { n, d, p, a }
    }
}

/// One sampled polynomial and its Newton polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpSummary {
    pub case: usize,
    pub index: u64,
    pub seed: u64,
    pub f: String,
    pub np: Polygon,
    pub symmetric: bool,
    pub endpoint_ok: bool,
    pub ge_hp: bool,
    pub ge_fp: Option<bool>,
}

/// Reference polygons of one case and the sampled minimum against them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case: usize,
    pub hp: Option<Polygon>,
    pub fp: Option<Polygon>,
    pub pp: Option<Polygon>,
    /// Pointwise minimum of the sampled Newton polygons. This is a sampled
    /// estimate of the generic Newton polygon, never the infimum itself.
    pub sampled_min_np: Option<Polygon>,
    /// Number of samples after which the minimum no longer changed.
    pub stabilized_at: Option<u64>,
    pub min_equals_hp: Option<bool>,
    pub min_equals_fp: Option<bool>,
    pub min_equals_pp: Option<bool>,
}

/// `ord_pi nu_k` against `(p-1) Prem(k)` and the twisted Hasse value at one
/// vertex of one sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRecord {
    pub case: usize,
    pub sample: u64,
    pub k: u64,
    pub premium: [i64; 2],
    pub target_ord: u64,
    pub ord_nu: Option<u64>,
    /// Encoded element of `F_q`.
    pub th: u64,
    /// Residue of `nu_k / pi^target` when the valuation is exactly the target.
    pub residue: Option<u64>,
}

/// The residue sign conventions consistent with every record of a case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRecord {
    pub case: usize,
    pub consistent: Vec<String>,
    pub chosen: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub assertion: String,
    pub case: Option<usize>,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub kind: String,
    pub parameters: Vec<Parameters>,
    pub seed: u64,
    pub samples: u64,
    pub np: Vec<NpSummary>,
    pub cases: Vec<CaseSummary>,
    pub congruence: Vec<CongruenceRecord>,
    pub signs: Vec<SignRecord>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn new(kind: impl Into<String>, parameters: Vec<Parameters>, seed: u64, samples: u64) -> Self {
        ExperimentReport {
            schema: SCHEMA.to_string(),
            kind: kind.into(),
            parameters,
            seed,
            samples,
            np: Vec::new(),
            cases: Vec::new(),
            congruence: Vec::new(),
            signs: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn verdict(&mut self, assertion: &str, case: Option<usize>, pass: bool, witness: impl Into<String>) {
        self.verdicts.push(Verdict {
            assertion: assertion.to_string(),
            case,
            pass,
            witness: witness.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }
}
