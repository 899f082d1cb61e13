//! `verify`: runs the invariants of every module on a catalog of groups and
//! counts checks per property.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use subdirect_core::arith::{p_part, prime_factors};
use subdirect_core::extensibility::{
    central_inextensibility_with, check_projection_identities, check_twisted_kernel_identities,
    cyclic_sylow_sufficient, extensibility_sides, is_extensible, is_p_extensible, star_preservation_condition,
    twisted_kernel_identity_with,
};
use subdirect_core::goursat::{
    contains_twisted_diagonal_among, enumerate_subdirect, goursat_quintuple, goursat_quotient, is_section,
    star_product, subgroup_from_quintuple,
};
use subdirect_core::hom::automorphisms;
use subdirect_core::oracle::{
    coefficient_modulus, enumerate_homs, enumerate_homs_with, hom_count_formula, oracle_is_p_extensible,
    rho_kernel_image_sizes, HomSearch,
};
use subdirect_core::subgroup::all_subgroups;
use subdirect_core::{abelianization, Caps, FiniteGroup, ProductGroup, ProductSubgroup};

use crate::commands::{cmd_subdirects, default_catalog, Loaded, Options};
use crate::error::{CliError, Result};
use crate::report::{read_lines, write_lines, INCONSISTENT};
use crate::spec::GroupSpec;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCount {
    pub checked: usize,
    pub failed: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub groups: Vec<String>,
    pub properties: BTreeMap<String, PropertyCount>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Default)]
struct Tally(BTreeMap<&'static str, PropertyCount>);

impl Tally {
    fn check(&mut self, property: &'static str, ok: bool, what: impl FnOnce() -> String) {
        let c = self.0.entry(property).or_default();
        c.checked += 1;
        if !ok {
            c.failed += 1;
            c.first_failure.get_or_insert_with(what);
        }
    }

    /// Counts a fallible check; an error is a failure.
    fn check_result(&mut self, property: &'static str, r: subdirect_core::Result<bool>, what: impl Fn() -> String) {
        match r {
            Ok(ok) => self.check(property, ok, what),
            Err(e) => self.check(property, false, || format!("{}: {e}", what())),
        }
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.0 {
            let c = self.0.entry(k).or_default();
            c.checked += v.checked;
            c.failed += v.failed;
            if c.first_failure.is_none() {
                c.first_failure = v.first_failure;
            }
        }
    }
}

/// `""` selects nothing; otherwise a comma list of shorthands or a JSON file
/// holding an array of group specs.
pub fn parse_catalog(selection: Option<&str>) -> Result<Vec<GroupSpec>> {
    let Some(s) = selection.map(str::trim) else {
        return Ok(default_catalog());
    };
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.starts_with('[') {
        return Ok(serde_json::from_str(s)?);
    }
    if s.ends_with(".json") {
        let text = std::fs::read_to_string(s).map_err(|e| CliError::io(s, e))?;
        return Ok(serde_json::from_str(&text)?);
    }
    s.split(',').map(GroupSpec::parse).collect()
}

fn label(u: &ProductSubgroup) -> String {
    let p = u.product();
    format!("U of order {} in {} x {}", u.order(), p.left().label(), p.right().label())
}

fn group_checks(g: &Arc<FiniteGroup>, t: &mut Tally) {
    let name = g.label().to_string();
    let inv = abelianization(g).invariants;
    for m in 1..=g.exponent().max(2) * 2 {
        let homs = enumerate_homs(g, m);
        t.check("hom-count-formula", homs.len() == hom_count_formula(&inv, m), || format!("{name} mod {m}"));
        let mut raw: Vec<Vec<usize>> =
            enumerate_homs_with(g, m, HomSearch::RawTable).iter().map(|h| h.values().to_vec()).collect();
        let mut lib: Vec<Vec<usize>> = homs.iter().map(|h| h.values().to_vec()).collect();
        raw.sort();
        lib.sort();
        t.check("hom-search-agreement", raw == lib, || format!("{name} mod {m}"));
    }
    if g.is_abelian() {
        let primes = prime_factors(g.order());
        for mask in 0..1usize << primes.len() {
            let pi: Vec<usize> =
                primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let m = p_part(g.exponent(), &pi);
            t.check("abelian-hom-count", enumerate_homs(g, m).len() == p_part(g.order(), &pi), || {
                format!("{name} with pi {pi:?}")
            });
        }
    }
}

fn lattice_checks(p: &ProductGroup, caps: &Caps, t: &mut Tally) -> subdirect_core::Result<()> {
    if p.group().order() > caps.max_lattice_order {
        return Ok(());
    }
    for s in all_subgroups(p.group(), caps.max_lattice_order)? {
        let u = ProductSubgroup::new(p, s);
        t.check("projection-identities", check_projection_identities(&u).is_ok(), || label(&u));
        let back = subgroup_from_quintuple(&goursat_quintuple(&u));
        t.check("goursat-roundtrip", back.subgroup() == u.subgroup(), || label(&u));
    }
    Ok(())
}

fn subdirect_checks(u: &ProductSubgroup, t: &mut Tally) {
    let primes = prime_factors(u.product().group().order());
    t.check_result("side-symmetry", extensibility_sides(u).map(|(a, b)| a == b), || label(u));
    let mut all = true;
    for &p in &primes {
        let exact = is_p_extensible(u, p);
        let oracle = oracle_is_p_extensible(u, p, HomSearch::Abelianization);
        all &= exact.as_ref().is_ok_and(|&b| b);
        t.check_result("criterion-oracle", exact.and_then(|a| Ok(a == oracle?)), || format!("{} at {p}", label(u)));
    }
    t.check_result("prime-conjunction", is_extensible(u).map(|e| e == all), || label(u));
    let m = p_part(u.product().group().exponent(), &primes);
    let q = goursat_quotient(u);
    let expected = hom_count_formula(&abelianization(&q).invariants, m);
    t.check_result(
        "kernel-hom-count",
        rho_kernel_image_sizes(u, m, HomSearch::Abelianization).map(|c| c.kernel == expected && c.fibers_uniform),
        || format!("{} mod {m}", label(u)),
    );
    if cyclic_sylow_sufficient(u) == Some(true) {
        t.check_result("cyclic-sylow-sound", is_extensible(u), || label(u));
    }
    for &p in &primes {
        let m = coefficient_modulus(u, p);
        let grown = subdirect_core::oracle::oracle_is_extensible_mod(u, m * p, HomSearch::Abelianization);
        let base = subdirect_core::oracle::oracle_is_extensible_mod(u, m, HomSearch::Abelianization);
        t.check_result("coefficient-growth", base.and_then(|a| Ok(a == grown?)), || format!("{} at {p}", label(u)));
    }
}

fn square_checks(g: &Arc<FiniteGroup>, caps: &Caps, t: &mut Tally) -> subdirect_core::Result<()> {
    let autos = automorphisms(g, caps)?;
    let subs = enumerate_subdirect(g, g, caps)?;
    let twisted: Vec<_> =
        subs.iter().filter_map(|u| contains_twisted_diagonal_among(u, &autos).map(|phi| (u.clone(), phi))).collect();
    for (u, phi) in &twisted {
        t.check("twisted-kernel-identity", twisted_kernel_identity_with(u, phi).is_ok(), || label(u));
        if central_inextensibility_with(u, phi)? == Some(false) {
            t.check_result("central-shortcut-sound", is_extensible(u).map(|e| !e), || label(u));
        }
    }
    for (u, phi) in &twisted {
        for (v, psi) in &twisted {
            t.check("twisted-kernel-composition", check_twisted_kernel_identities(u, phi, v, psi).is_ok(), || {
                format!("{} with {}", label(u), label(v))
            });
            let w = star_product(u, v)?;
            let qw = goursat_quotient(&w);
            let ok = is_section(&qw, &goursat_quotient(u), caps)? && is_section(&qw, &goursat_quotient(v), caps)?;
            t.check("section-relation", ok, || format!("{} with {}", label(u), label(v)));
            if cyclic_sylow_sufficient(u).is_some() && cyclic_sylow_sufficient(v).is_some() {
                t.check("cyclic-sylow-closure", cyclic_sylow_sufficient(&w).is_some(), || {
                    format!("{} with {}", label(u), label(v))
                });
            }
        }
    }
    let over_diagonal: Vec<&ProductSubgroup> = twisted
        .iter()
        .filter(|(u, _)| (0..g.order()).all(|x| u.contains_pair(x, x)))
        .map(|(u, _)| u)
        .filter(|u| is_extensible(u).unwrap_or(false))
        .collect();
    for u in &over_diagonal {
        for v in &over_diagonal {
            let lhs = star_preservation_condition(u, v, 1)? && star_preservation_condition(u, v, 2)?;
            let rhs = is_extensible(&star_product(u, v)?)?;
            t.check("star-preservation", lhs == rhs, || format!("{} with {}", label(u), label(v)));
        }
    }
    Ok(())
}

fn report_checks(g: &GroupSpec, h: &GroupSpec, caps: &Caps, t: &mut Tally) -> Result<()> {
    let options = Options { caps: *caps, ..Options::default() };
    let (lg, lh) = (Loaded::new(g.clone(), caps)?, Loaded::new(h.clone(), caps)?);
    let render = |lines: &[crate::report::Line]| -> Result<Vec<u8>> {
        let mut out = Vec::new();
        write_lines(&mut out, lines)?;
        Ok(out)
    };
    let first = cmd_subdirects(&lg, &lh, None, &options)?;
    let bytes = render(&first)?;
    let again = render(&cmd_subdirects(&lg, &lh, None, &options)?)?;
    let name = format!("{} x {}", g.name, h.name);
    t.check("report-determinism", bytes == again, || name.clone());
    let parsed = read_lines(bytes.as_slice())?;
    t.check("report-roundtrip", parsed == first, || name.clone());
    let text = String::from_utf8_lossy(&bytes);
    t.check("no-inconsistent-flag", !text.contains(INCONSISTENT), || name.clone());
    Ok(())
}

/// Runs every check. Groups that fail to load are reported as failures of
/// `group-axioms`; nothing else runs on them.
pub fn cmd_verify(catalog: &[GroupSpec], caps: &Caps) -> Result<VerifyReport> {
    let mut tally = Tally::default();
    let mut loaded = Vec::new();
    for spec in catalog {
        match Loaded::new(spec.clone(), caps) {
            Ok(l) => {
                tally.check("group-axioms", true, String::new);
                loaded.push(l);
            }
            Err(e) => tally.check("group-axioms", false, || format!("{}: {e}", spec.name)),
        }
    }
    let singles: Vec<Tally> = loaded
        .par_iter()
        .map(|l| -> Result<Tally> {
            let mut t = Tally::default();
            group_checks(&l.group, &mut t);
            if l.group.order() * l.group.order() <= caps.max_product_order {
                square_checks(&l.group, caps, &mut t)?;
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..loaded.len()).flat_map(|i| (0..loaded.len()).map(move |j| (i, j))).collect();
    let paired: Vec<Tally> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Tally> {
            let mut t = Tally::default();
            let (g, h) = (&loaded[i], &loaded[j]);
            if g.group.order() * h.group.order() > caps.max_product_order {
                return Ok(t);
            }
            let h = if i == j { g } else { h };
            let p = ProductGroup::new(&g.group, &h.group, caps.max_product_order)?;
            if i <= j {
                lattice_checks(&p, caps, &mut t)?;
            }
            for u in enumerate_subdirect(&g.group, &h.group, caps)? {
                subdirect_checks(&u, &mut t);
            }
            if i <= j {
                report_checks(&g.spec, &h.spec, caps, &mut t)?;
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    for t in singles.into_iter().chain(paired) {
        tally.merge(t);
    }
    let properties: BTreeMap<String, PropertyCount> = tally.0.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let first_failure = properties.iter().find_map(|(k, v)| v.first_failure.as_ref().map(|f| format!("{k}: {f}")));
    Ok(VerifyReport {
        groups: catalog.iter().map(|s| s.name.clone()).collect(),
        passed: first_failure.is_none(),
        properties,
        first_failure,
    })
}
