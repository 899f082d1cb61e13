//! JSON-lines reports. Every line is one [`Line`]: the schema tag plus a
//! record tagged by `kind`.
//!
//! Element pairs are written as `[g, h]` with `g` and `h` indices into the
//! Cayley tables of `G` and `H`; as a single index of `G x H` the pair is
//! `g * |H| + h`. Index 0 is the identity of every group.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use subdirect_core::extensibility::PrimeVerdict;

use crate::error::{CliError, Result};
use crate::spec::GroupSpec;

pub const SCHEMA: &str = "subdirect-report/1";

pub const PAIR_ENCODING: &str = "pairs are [g, h] with g, h Cayley-table indices of G and H (0 is the identity); \
     the single index of (g, h) in G x H is g * |H| + h";

pub const COEFFICIENT_MODEL: &str = "p-extensibility is tested against Hom(-, C_m) with m the p-part of exp(G x H)";

pub const INCONSISTENT: &str = "INCONSISTENT";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub schema: String,
    #[serde(flatten)]
    pub record: Record,
}

impl Line {
    pub fn new(record: Record) -> Self {
        Line { schema: SCHEMA.to_string(), record }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Header(Box<Header>),
    Analysis(Box<AnalysisRecord>),
    Star(Box<StarRecord>),
    Summary(Summary),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRef {
    pub name: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GroupSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub command: String,
    pub pair_encoding: String,
    pub coefficients: String,
    pub g: GroupRef,
    pub h: GroupRef,
    /// `abelianization`, `raw-table` or `none`.
    pub oracle: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub order: usize,
    pub pairs: Vec<(usize, usize)>,
}

/// Orders of `p1(U)`, `k1(U)`, `p2(U)`, `k2(U)` and the Goursat quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoursatSummary {
    pub p1: usize,
    pub k1: usize,
    pub p2: usize,
    pub k2: usize,
    pub q: QuotientId,
}

/// What `q(U)` is, as far as cheap invariants and a small name list tell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientId {
    pub order: usize,
    /// `C6`, `C2xC2`, `S3`, `D8`, `Q8`, `A4`, ... or `order-n` when unnamed.
    pub name: String,
    pub abelian: bool,
    /// Invariant factors of the abelianization.
    pub abelianization: Vec<usize>,
    pub sylows_cyclic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub g: GroupRef,
    pub h: GroupRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    pub subgroup: SubgroupRecord,
    pub subdirect: bool,
    pub goursat: GoursatSummary,
    /// Images of an automorphism `phi` with `Δ(G, phi) <= U`, when `G = H` and one exists.
    pub diagonal: Option<Vec<usize>>,
    pub pi: Vec<usize>,
    pub per_prime: Vec<PrimeEntry>,
    /// Conjunction over `pi`; absent when `U` is not subdirect.
    pub extensible: Option<bool>,
    /// `true` when every Sylow subgroup of `q(U)` is cyclic.
    pub cyclic_sylow: bool,
    /// Primes at which the central shortcut fires; absent without a twisted diagonal.
    pub central_primes: Option<Vec<usize>>,
    pub consistent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Map keys are kept out of the records: internally tagged enums buffer
/// their content and then cannot read numeric keys back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub prime: usize,
    #[serde(flatten)]
    pub verdict: PrimeVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCount {
    pub prime: usize,
    pub extensible: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionChecks {
    pub q_uv_order: usize,
    pub section_of_q_u: bool,
    pub section_of_q_v: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCondition {
    pub side1: bool,
    pub side2: bool,
    /// Both sides hold exactly when `U * V` is extensible.
    pub predicts_extensible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarRecord {
    pub u: SubgroupRecord,
    pub v: SubgroupRecord,
    pub u_extensible: Option<bool>,
    pub v_extensible: Option<bool>,
    pub sections: SectionChecks,
    /// Present when `U` and `V` both contain `Δ(G)` and are extensible.
    pub condition: Option<StarCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_note: Option<String>,
    pub product: AnalysisRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    /// Number of records that are `p`-extensible, per prime.
    pub extensible_count: Vec<PrimeCount>,
    pub extensible_all: usize,
    pub inconsistent: usize,
}

pub fn write_lines<W: Write>(out: &mut W, lines: &[Line]) -> Result<()> {
    for line in lines {
        serde_json::to_writer(&mut *out, line)?;
        out.write_all(b"\n").map_err(|e| CliError::io("<output>", e))?;
    }
    Ok(())
}

pub fn read_lines<R: BufRead>(input: R) -> Result<Vec<Line>> {
    let mut lines = Vec::new();
    for text in input.lines() {
        let text = text.map_err(|e| CliError::io("<input>", e))?;
        if !text.trim().is_empty() {
            lines.push(serde_json::from_str(&text)?);
        }
    }
    Ok(lines)
}

/// Every analysis record in `lines`, including the `U * V` part of star records.
pub fn analyses(lines: &[Line]) -> impl Iterator<Item = &AnalysisRecord> {
    lines.iter().filter_map(|l| match &l.record {
        Record::Analysis(a) => Some(a.as_ref()),
        Record::Star(s) => Some(&s.product),
        _ => None,
    })
}
