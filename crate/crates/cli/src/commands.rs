//! The analyze, subdirects, star and catalog workflows. Each returns the
//! report lines; writing them out is left to the caller.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use subdirect_core::abelian::decompose_abelian;
use subdirect_core::arith::prime_factors;
use subdirect_core::extensibility::{analyze, central_primes_with, is_extensible, star_preservation_condition};
use subdirect_core::goursat::{
    enumerate_subdirect, goursat_quintuple, is_section, star_product_in, SubdirectCertificate,
};
use subdirect_core::hom::is_isomorphic;
use subdirect_core::oracle::HomSearch;
use subdirect_core::subgroup::{is_cyclic, is_cyclic_group, sylow_subgroup};
use subdirect_core::{abelianization, catalog, Caps, Error, FiniteGroup, ProductGroup, ProductSubgroup};

use crate::descriptor::Descriptor;
use crate::error::{CliError, Result};
use crate::report::{
    AnalysisRecord, GoursatSummary, GroupRef, Header, Line, PrimeCount, PrimeEntry, QuotientId, Record, SectionChecks,
    StarCondition, StarRecord, SubgroupRecord, Summary, COEFFICIENT_MODEL, INCONSISTENT, PAIR_ENCODING,
};
use crate::spec::{load_group, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub caps: Caps,
    /// Cross-check every verdict against the hom oracle.
    pub oracle: Option<HomSearch>,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { caps: Caps::default(), oracle: Some(HomSearch::Abelianization), timing: false }
    }
}

impl Options {
    fn oracle_name(&self) -> &'static str {
        match self.oracle {
            Some(HomSearch::Abelianization) => "abelianization",
            Some(HomSearch::RawTable) => "raw-table",
            None => "none",
        }
    }
}

/// A loaded group together with the spec it came from.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub spec: GroupSpec,
    pub group: Arc<FiniteGroup>,
}

impl Loaded {
    pub fn new(spec: GroupSpec, caps: &Caps) -> Result<Self> {
        let group = load_group(&spec, caps)?;
        Ok(Loaded { spec, group })
    }

    pub fn parse(s: &str, caps: &Caps) -> Result<Self> {
        Loaded::new(GroupSpec::parse(s)?, caps)
    }

    fn reference(&self, with_spec: bool) -> GroupRef {
        GroupRef { name: self.spec.name.clone(), order: self.group.order(), spec: with_spec.then(|| self.spec.clone()) }
    }

    /// The same group object when both specs are equal, so products compose.
    fn shared(&self, other: &Loaded) -> Loaded {
        if self.spec == other.spec {
            self.clone()
        } else {
            other.clone()
        }
    }
}

fn header(command: &str, g: &Loaded, h: &Loaded, options: &Options) -> Line {
    Line::new(Record::Header(Box::new(Header {
        command: command.to_string(),
        pair_encoding: PAIR_ENCODING.to_string(),
        coefficients: COEFFICIENT_MODEL.to_string(),
        g: g.reference(true),
        h: h.reference(true),
        oracle: options.oracle_name().to_string(),
    })))
}

/// Names `q` when it is cyclic, abelian, or isomorphic to a small nonabelian
/// group of its order; `order-n` otherwise.
pub fn identify_quotient(q: &Arc<FiniteGroup>, caps: &Caps) -> Result<QuotientId> {
    let n = q.order();
    let ab = abelianization(q).invariants.divisors().to_vec();
    let sylows_cyclic = prime_factors(n).into_iter().all(|p| is_cyclic(&sylow_subgroup(q, p)));
    let name = if is_cyclic_group(q) {
        format!("C{n}")
    } else if q.is_abelian() {
        let d = decompose_abelian(q)?;
        d.invariants.divisors().iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x")
    } else {
        let mut candidates: Vec<(String, FiniteGroup)> = Vec::new();
        match n {
            6 => candidates.push(("S3".into(), catalog::symmetric(3))),
            8 => candidates.push(("Q8".into(), catalog::quaternion8())),
            12 => candidates.push(("A4".into(), catalog::alternating(4))),
            24 => candidates.push(("S4".into(), catalog::symmetric(4))),
            60 => candidates.push(("A5".into(), catalog::alternating(5))),
            _ => {}
        }
        if n % 2 == 0 {
            candidates.push((format!("D{n}"), catalog::dihedral(n)));
        }
        let mut name = format!("order-{n}");
        if n <= caps.max_iso_order {
            for (label, c) in candidates {
                if c.order() == n && is_isomorphic(q, &c, caps)? {
                    name = label;
                    break;
                }
            }
        }
        name
    };
    Ok(QuotientId { order: n, name, abelian: q.is_abelian(), abelianization: ab, sylows_cyclic })
}

fn subgroup_record(u: &ProductSubgroup) -> SubgroupRecord {
    SubgroupRecord { order: u.order(), pairs: u.pairs().collect() }
}

/// Full record for `U <= G x H`. A non-subdirect `U` gets a record with a
/// note and no verdicts.
pub fn analysis_record(
    g: &Loaded,
    h: &Loaded,
    u: &ProductSubgroup,
    descriptor: Option<&str>,
    pi: &[usize],
    options: &Options,
) -> Result<AnalysisRecord> {
    let start = Instant::now();
    let caps = &options.caps;
    let q = goursat_quintuple(u);
    let goursat = GoursatSummary {
        p1: q.p1.order(),
        k1: q.k1.order(),
        p2: q.p2.order(),
        k2: q.k2.order(),
        q: identify_quotient(q.quotient_group(), caps)?,
    };
    let subdirect = u.is_subdirect();
    let mut record = AnalysisRecord {
        g: g.reference(false),
        h: h.reference(false),
        descriptor: descriptor.map(str::to_string),
        subgroup: subgroup_record(u),
        subdirect,
        cyclic_sylow: goursat.q.sylows_cyclic,
        goursat,
        diagonal: None,
        pi: pi.to_vec(),
        per_prime: Vec::new(),
        extensible: None,
        central_primes: None,
        consistent: true,
        flag: None,
        note: None,
        timing_ms: None,
    };
    if subdirect {
        let report =
            analyze(u, pi, &subdirect_core::extensibility::AnalyzeOptions { oracle: options.oracle, caps: *caps })?;
        if let Some(phi) = &report.subject.diagonal {
            record.diagonal = Some(phi.images().to_vec());
            record.central_primes = Some(central_primes_with(u, phi)?);
        }
        record.per_prime = report.per_prime.into_iter().map(|(prime, verdict)| PrimeEntry { prime, verdict }).collect();
        record.extensible = Some(report.overall);
        record.consistent = report.consistent;
    } else {
        let cert = SubdirectCertificate::new(u, caps)?;
        record.diagonal = cert.diagonal.map(|phi| phi.images().to_vec());
        record.note = Some(format!(
            "not subdirect: |p1(U)| = {} of |G| = {}, |p2(U)| = {} of |H| = {}",
            record.goursat.p1,
            g.group.order(),
            record.goursat.p2,
            h.group.order()
        ));
    }
    if !record.consistent {
        record.flag = Some(INCONSISTENT.to_string());
    }
    if options.timing {
        record.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(record)
}

fn default_pi(g: &Loaded, h: &Loaded, pi: Option<&[usize]>) -> Result<Vec<usize>> {
    match pi {
        Some(pi) => {
            if let Some(&p) = pi.iter().find(|&&p| !subdirect_core::arith::is_prime(p)) {
                return Err(CliError::parse(format!("{p} is not prime")));
            }
            let mut pi = pi.to_vec();
            pi.sort_unstable();
            pi.dedup();
            Ok(pi)
        }
        None => Ok(prime_factors(g.group.order() * h.group.order())),
    }
}

fn product_of(g: &Loaded, h: &Loaded, caps: &Caps) -> Result<ProductGroup> {
    Ok(ProductGroup::new(&g.group, &h.group, caps.max_product_order)?)
}

pub fn cmd_analyze(g: &Loaded, h: &Loaded, u: &str, pi: Option<&[usize]>, options: &Options) -> Result<Vec<Line>> {
    let h = g.shared(h);
    let product = product_of(g, &h, &options.caps)?;
    let pi = default_pi(g, &h, pi)?;
    let sub = Descriptor::parse(u)?.resolve(&product)?;
    let record = analysis_record(g, &h, &sub, Some(u), &pi, options)?;
    Ok(vec![header("analyze", g, &h, options), Line::new(Record::Analysis(Box::new(record)))])
}

/// One record per subdirect product of `G x H`, in enumeration order, and a summary.
pub fn cmd_subdirects(g: &Loaded, h: &Loaded, pi: Option<&[usize]>, options: &Options) -> Result<Vec<Line>> {
    let h = g.shared(h);
    let pi = default_pi(g, &h, pi)?;
    let subs = enumerate_subdirect(&g.group, &h.group, &options.caps)?;
    let records = subs.par_iter().map(|u| analysis_record(g, &h, u, None, &pi, options)).collect::<Result<Vec<_>>>()?;
    let summary = Summary {
        count: records.len(),
        extensible_count: pi
            .iter()
            .map(|&prime| PrimeCount {
                prime,
                extensible: records
                    .iter()
                    .filter(|r| r.per_prime.iter().any(|e| e.prime == prime && e.verdict.extensible))
                    .count(),
            })
            .collect(),
        extensible_all: records.iter().filter(|r| r.extensible == Some(true)).count(),
        inconsistent: records.iter().filter(|r| r.flag.is_some()).count(),
    };
    let mut lines = vec![header("subdirects", g, &h, options)];
    lines.extend(records.into_iter().map(|r| Line::new(Record::Analysis(Box::new(r)))));
    lines.push(Line::new(Record::Summary(summary)));
    Ok(lines)
}

/// Where a star operand comes from: a descriptor, a report file, or inline
/// JSON holding a report line or an analysis record.
pub fn resolve_operand(input: &str, product: &ProductGroup) -> Result<ProductSubgroup> {
    let input = input.trim();
    let record: Option<AnalysisRecord> = if input.starts_with('{') {
        Some(match serde_json::from_str::<Line>(input) {
            Ok(line) => first_subgroup(std::slice::from_ref(&line), input)?,
            Err(_) => serde_json::from_str(input)?,
        })
    } else if std::path::Path::new(input).is_file() {
        let file = std::fs::File::open(input).map_err(|e| CliError::io(input, e))?;
        let lines = crate::report::read_lines(std::io::BufReader::new(file))?;
        Some(first_subgroup(&lines, input)?)
    } else {
        None
    };
    let Some(record) = record else {
        return Descriptor::parse(input)?.resolve(product);
    };
    for (side, r, f) in [("G", &record.g, product.left()), ("H", &record.h, product.right())] {
        if r.order != f.order() {
            return Err(Error::FactorMismatch(format!(
                "record factor {side} = {} has order {}, expected {} of order {}",
                r.name,
                r.order,
                f.label(),
                f.order()
            ))
            .into());
        }
    }
    let sub = product.generated_by_pairs(&record.subgroup.pairs)?;
    if sub.order() != record.subgroup.order {
        return Err(CliError::parse(format!("record pairs of {input:?} do not form a subgroup")));
    }
    Ok(ProductSubgroup::new(product, sub))
}

fn first_subgroup(lines: &[Line], source: &str) -> Result<AnalysisRecord> {
    crate::report::analyses(lines)
        .next()
        .cloned()
        .ok_or_else(|| CliError::parse(format!("{source:?} holds no analysis record")))
}

fn extensible_or_none(u: &ProductSubgroup) -> Result<Option<bool>> {
    match is_extensible(u) {
        Ok(b) => Ok(Some(b)),
        Err(Error::NotSubdirect { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `U * V` for `U <= G x H` and `V <= H x K`, with the section checks and,
/// for `U, V >= Δ(G)` both extensible, the preservation condition.
pub fn cmd_star(g: &Loaded, h: &Loaded, k: &Loaded, u: &str, v: &str, options: &Options) -> Result<Vec<Line>> {
    let caps = &options.caps;
    let h = g.shared(h);
    let k = g.shared(k);
    let pu = product_of(g, &h, caps)?;
    let pv = product_of(&h, &k, caps)?;
    let pw = product_of(g, &k, caps)?;
    let su = resolve_operand(u, &pu)?;
    let sv = resolve_operand(v, &pv)?;
    let w = star_product_in(&su, &sv, &pw)?;
    let pi = default_pi(g, &k, None)?;
    let mut product = analysis_record(g, &k, &w, None, &pi, options)?;
    let (qu, qv, qw) = (
        goursat_quintuple(&su).quotient_group().clone(),
        goursat_quintuple(&sv).quotient_group().clone(),
        goursat_quintuple(&w).quotient_group().clone(),
    );
    let sections = SectionChecks {
        q_uv_order: qw.order(),
        section_of_q_u: is_section(&qw, &qu, caps)?,
        section_of_q_v: is_section(&qw, &qv, caps)?,
    };
    let (u_ext, v_ext) = (extensible_or_none(&su)?, extensible_or_none(&sv)?);
    let mut condition = None;
    let mut condition_note = None;
    let untwisted = |x: &ProductSubgroup| (0..g.group.order()).all(|a| x.contains_pair(a, a));
    if !(pu.is_square() && pv.is_square() && pu == pv) {
        condition_note = Some("condition needs U, V <= G x G".to_string());
    } else if !(untwisted(&su) && untwisted(&sv)) {
        condition_note = Some("condition needs U and V to contain the diagonal".to_string());
    } else if u_ext != Some(true) || v_ext != Some(true) {
        condition_note = Some("condition needs U and V extensible".to_string());
    } else {
        let side1 = star_preservation_condition(&su, &sv, 1)?;
        let side2 = star_preservation_condition(&su, &sv, 2)?;
        let predicts = side1 && side2;
        if product.extensible != Some(predicts) {
            product.consistent = false;
            product.flag = Some(INCONSISTENT.to_string());
        }
        condition = Some(StarCondition { side1, side2, predicts_extensible: predicts });
    }
    if !(sections.section_of_q_u && sections.section_of_q_v) {
        product.consistent = false;
        product.flag = Some(INCONSISTENT.to_string());
    }
    let record = StarRecord {
        u: subgroup_record(&su),
        v: subgroup_record(&sv),
        u_extensible: u_ext,
        v_extensible: v_ext,
        sections,
        condition,
        condition_note,
        product,
    };
    Ok(vec![header("star", g, &k, options), Line::new(Record::Star(Box::new(record)))])
}

/// The groups `verify` runs on by default.
pub fn default_catalog() -> Vec<GroupSpec> {
    ["C2", "C3", "C4", "C2^2", "C6", "S3", "D8", "Q8"].iter().map(|s| GroupSpec::parse(s).expect("valid")).collect()
}

/// Catalog listing: one [`GroupRef`] per default group, with its spec.
pub fn cmd_catalog(caps: &Caps) -> Result<Vec<GroupRef>> {
    default_catalog().into_iter().map(|spec| Ok(Loaded::new(spec, caps)?.reference(true))).collect()
}
