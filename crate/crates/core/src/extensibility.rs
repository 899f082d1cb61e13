//! Extensibility of homomorphisms from `U <= G x H` to `G x H`.
//!
//! The exact test compares `G' ∩ k1(U)` with `k1(U')`; everything else here is
//! either a per-prime refinement of it, a sufficient condition, or a structural
//! identity for subgroups containing a twisted diagonal.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{decompose_abelian, AbelianInvariants};
use crate::arith;
use crate::error::{Error, Result};
use crate::goursat::{contains_twisted_diagonal, goursat_quotient, star_product, SubdirectCertificate};
use crate::group::{same_group, Caps};
use crate::hom::GroupHom;
use crate::oracle::{self, HomSearch};
use crate::product::ProductSubgroup;
use crate::quotient::quotient_group;
use crate::subgroup::{center, commutator_subgroup, derived, is_cyclic, mutual_commutator, sylow_subgroup, Subgroup};

/// `k_i(U')`, `[k_i(U), p_i(U)]` and `p_i(U)' ∩ k_i(U)` for one side `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCommutatorData {
    pub k_of_uprime: Subgroup,
    pub commutator_k_p: Subgroup,
    pub pprime_cap_k: Subgroup,
}

impl KernelCommutatorData {
    /// `k_i(U') = p_i(U)' ∩ k_i(U)`.
    pub fn criterion_holds(&self) -> bool {
        self.k_of_uprime == self.pprime_cap_k
    }

    /// `k_i(U')` contains a Sylow `p`-subgroup of `p_i(U)' ∩ k_i(U)`.
    pub fn criterion_holds_at(&self, p: usize) -> bool {
        arith::p_part(self.k_of_uprime.order(), &[p]) == arith::p_part(self.pprime_cap_k.order(), &[p])
    }
}

/// Both sides; the chain `[k, p] <= k(U') <= p' ∩ k` is checked on each.
pub fn kernel_commutator_data(u: &ProductSubgroup) -> Result<[KernelCommutatorData; 2]> {
    let pk = u.projections_kernels();
    let dk = u.derived().projections_kernels();
    let side = |p: &Subgroup, k: &Subgroup, k_of_uprime: Subgroup| -> Result<KernelCommutatorData> {
        let commutator_k_p = mutual_commutator(k, p);
        let pprime_cap_k = derived(p).intersection(k);
        if !commutator_k_p.is_subset(&k_of_uprime) || !k_of_uprime.is_subset(&pprime_cap_k) {
            return Err(Error::Inconsistent(format!(
                "commutator chain broken: orders {} / {} / {}",
                commutator_k_p.order(),
                k_of_uprime.order(),
                pprime_cap_k.order()
            )));
        }
        Ok(KernelCommutatorData { k_of_uprime, commutator_k_p, pprime_cap_k })
    };
    Ok([side(&pk.p1, &pk.k1, dk.k1)?, side(&pk.p2, &pk.k2, dk.k2)?])
}

/// The remaining structural identities for an arbitrary `U`:
/// `|U| = |p_i(U)| |k_j(U)|` and `p_i(U') = p_i(U)'`.
pub fn check_projection_identities(u: &ProductSubgroup) -> Result<()> {
    let pk = u.projections_kernels();
    if u.order() != pk.p1.order() * pk.k2.order() || u.order() != pk.p2.order() * pk.k1.order() {
        return Err(Error::Inconsistent(format!(
            "|U| = {} but |p1||k2| = {} and |p2||k1| = {}",
            u.order(),
            pk.p1.order() * pk.k2.order(),
            pk.p2.order() * pk.k1.order()
        )));
    }
    let dk = u.derived().projections_kernels();
    if dk.p1 != derived(&pk.p1) || dk.p2 != derived(&pk.p2) {
        return Err(Error::Inconsistent("projection of U' differs from derived projection".into()));
    }
    kernel_commutator_data(u).map(|_| ())
}

/// `(G' ∩ k1(U) = k1(U'), H' ∩ k2(U) = k2(U'))`, without comparing them.
pub fn extensibility_sides(u: &ProductSubgroup) -> Result<(bool, bool)> {
    u.require_subdirect()?;
    let [a, b] = kernel_commutator_data(u)?;
    Ok((a.criterion_holds(), b.criterion_holds()))
}

pub fn is_extensible(u: &ProductSubgroup) -> Result<bool> {
    match extensibility_sides(u)? {
        (a, b) if a == b => Ok(a),
        (a, b) => Err(Error::Inconsistent(format!("k1 side says {a}, k2 side says {b}"))),
    }
}

fn require_prime(p: usize) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not prime")))
    }
}

pub fn is_p_extensible(u: &ProductSubgroup, p: usize) -> Result<bool> {
    require_prime(p)?;
    u.require_subdirect()?;
    let [a, _] = kernel_commutator_data(u)?;
    Ok(a.criterion_holds_at(p))
}

pub fn is_a_extensible(u: &ProductSubgroup, pi: &[usize]) -> Result<bool> {
    for &p in pi {
        if !is_p_extensible(u, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(K ∩ G') / [K, G]` for `K` normal in `G`.
#[derive(Debug, Clone)]
pub struct ObstructionQuotient {
    pub base: Subgroup,
    pub denominator: Subgroup,
    pub invariants: AbelianInvariants,
}

impl ObstructionQuotient {
    pub fn order(&self) -> usize {
        self.base.order() / self.denominator.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.base.order() == self.denominator.order()
    }

    pub fn is_trivial_at(&self, p: usize) -> bool {
        arith::p_part(self.order(), &[p]) == 1
    }
}

pub fn obstruction_quotient(k: &Subgroup) -> Result<ObstructionQuotient> {
    let g = k.parent();
    if !k.is_normal() {
        return Err(Error::NotNormal { order: k.order(), ambient: g.order() });
    }
    let base = k.intersection(&commutator_subgroup(g));
    let denominator = mutual_commutator(k, &Subgroup::whole(g));
    if !denominator.is_subset(&base) {
        return Err(Error::Inconsistent("[K, G] is not contained in K ∩ G'".into()));
    }
    let local = base.to_group();
    let (q, _) = quotient_group(&base.localize(&denominator, &local))?;
    let invariants = decompose_abelian(&q)
        .map_err(|_| Error::Inconsistent("obstruction quotient is not abelian".into()))?
        .invariants;
    Ok(ObstructionQuotient { base, denominator, invariants })
}

/// `Some(true)` when every Sylow subgroup of `q(U)` is cyclic; no conclusion otherwise.
pub fn cyclic_sylow_sufficient(u: &ProductSubgroup) -> Option<bool> {
    let q = goursat_quotient(u);
    arith::prime_factors(q.order()).into_iter().all(|p| is_cyclic(&sylow_subgroup(&q, p))).then_some(true)
}

/// Per-prime form: a cyclic Sylow `p`-subgroup of `q(U)` forces `p`-extensibility.
pub fn cyclic_sylow_at(u: &ProductSubgroup, p: usize) -> Option<bool> {
    is_cyclic(&sylow_subgroup(&goursat_quotient(u), p)).then_some(true)
}

fn require_diagonal(u: &ProductSubgroup, caps: &Caps) -> Result<GroupHom> {
    contains_twisted_diagonal(u, caps)?.ok_or(Error::NoDiagonal)
}

fn check_diagonal(u: &ProductSubgroup, phi: &GroupHom) -> Result<()> {
    let g = u.product().left();
    if !u.product().is_square() || !same_group(phi.domain(), g) {
        return Err(Error::NoDiagonal);
    }
    if (0..g.order()).all(|x| u.contains_pair(x, phi.apply(x))) {
        Ok(())
    } else {
        Err(Error::NoDiagonal)
    }
}

/// `k_i(U')` and `[k_i(U), G]` for both sides of some `U` containing a twisted diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedKernelData {
    pub k_of_uprime: [Subgroup; 2],
    pub commutator_k_g: [Subgroup; 2],
}

pub fn twisted_kernel_identity(u: &ProductSubgroup, caps: &Caps) -> Result<TwistedKernelData> {
    let phi = require_diagonal(u, caps)?;
    twisted_kernel_identity_with(u, &phi)
}

/// As [`twisted_kernel_identity`] with the automorphism `phi` (`Δ(G, phi) <= U`) supplied.
pub fn twisted_kernel_identity_with(u: &ProductSubgroup, phi: &GroupHom) -> Result<TwistedKernelData> {
    check_diagonal(u, phi)?;
    let g = Subgroup::whole(u.product().left());
    let pk = u.projections_kernels();
    let dk = u.derived().projections_kernels();
    let data = TwistedKernelData {
        k_of_uprime: [dk.k1, dk.k2],
        commutator_k_g: [mutual_commutator(&pk.k1, &g), mutual_commutator(&pk.k2, &g)],
    };
    for i in 0..2 {
        if data.k_of_uprime[i] != data.commutator_k_g[i] {
            return Err(Error::Inconsistent(format!(
                "k{}(U') has order {} but [k{}(U), G] has order {}",
                i + 1,
                data.k_of_uprime[i].order(),
                i + 1,
                data.commutator_k_g[i].order()
            )));
        }
    }
    Ok(data)
}

/// `Some(false)` when for some side `1 < k_i(U) ∩ G'` and `k_i(U) <= Z(G)`.
pub fn central_inextensibility(u: &ProductSubgroup, caps: &Caps) -> Result<Option<bool>> {
    let phi = require_diagonal(u, caps)?;
    central_inextensibility_with(u, &phi)
}

pub fn central_inextensibility_with(u: &ProductSubgroup, phi: &GroupHom) -> Result<Option<bool>> {
    Ok((!central_primes_with(u, phi)?.is_empty()).then_some(false))
}

/// The primes at which the central shortcut decides `U` is not `p`-extensible:
/// those dividing `|k_i(U) ∩ G'|` for a side with `k_i(U)` central.
pub fn central_primes_with(u: &ProductSubgroup, phi: &GroupHom) -> Result<Vec<usize>> {
    check_diagonal(u, phi)?;
    let g = u.product().left();
    let z = center(g);
    let gd = commutator_subgroup(g);
    let pk = u.projections_kernels();
    let mut primes = Vec::new();
    for k in [&pk.k1, &pk.k2] {
        let cap = k.intersection(&gd);
        if !cap.is_trivial() && k.is_subset(&z) {
            primes.extend(arith::prime_factors(cap.order()));
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

fn require_untwisted(u: &ProductSubgroup) -> Result<()> {
    check_diagonal(u, &GroupHom::identity(u.product().left()))
}

fn require_common_square(u: &ProductSubgroup, v: &ProductSubgroup) -> Result<()> {
    if u.product() != v.product() {
        return Err(Error::FactorMismatch("U and V must live in the same G x G".into()));
    }
    Ok(())
}

/// `k_i(U*V) ∩ G' = (k_i(U) ∩ G')(k_i(V) ∩ G')` for `U, V` extensible and
/// containing `Δ(G)`; `i` is 1 or 2.
pub fn star_preservation_condition(u: &ProductSubgroup, v: &ProductSubgroup, i: usize) -> Result<bool> {
    if i != 1 && i != 2 {
        return Err(Error::InvalidInput(format!("side must be 1 or 2, got {i}")));
    }
    require_common_square(u, v)?;
    for (name, w) in [("U", u), ("V", v)] {
        if require_untwisted(w).is_err() {
            return Err(Error::PreconditionFailed(format!("{name} does not contain the diagonal")));
        }
        if !is_extensible(w)? {
            return Err(Error::PreconditionFailed(format!("{name} is not extensible")));
        }
    }
    let w = star_product(u, v)?;
    let gd = commutator_subgroup(u.product().left());
    let kernel = |x: &ProductSubgroup| {
        let pk = x.projections_kernels();
        let (_, k) = pk.side(i);
        k.intersection(&gd)
    };
    Ok(kernel(&w) == kernel(u).join(&kernel(v)))
}

/// Orders of the four quotients in the pair of isomorphisms relating the
/// kernels of `(U*V)'` with those of `U'` and `V'`, for `U, V >= Δ(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientOrders {
    /// `|k1((U*V)') / (k1(U) ∩ k1((U*V)'))|`
    pub lhs1: usize,
    /// `|k1(V') / (k2(U) ∩ k1(V'))|`
    pub rhs1: usize,
    /// `|k2((U*V)') / (k2(V) ∩ k2((U*V)'))|`
    pub lhs2: usize,
    /// `|k2(U') / (k1(V) ∩ k2(U'))|`
    pub rhs2: usize,
}

pub fn star_kernel_quotient_orders(u: &ProductSubgroup, v: &ProductSubgroup) -> Result<QuotientOrders> {
    require_common_square(u, v)?;
    require_untwisted(u)?;
    require_untwisted(v)?;
    let w = star_product(u, v)?;
    let (pu, pv) = (u.projections_kernels(), v.projections_kernels());
    let (du, dv, dw) =
        (u.derived().projections_kernels(), v.derived().projections_kernels(), w.derived().projections_kernels());
    let index = |a: &Subgroup, b: &Subgroup| a.order() / a.intersection(b).order();
    let orders = QuotientOrders {
        lhs1: index(&dw.k1, &pu.k1),
        rhs1: index(&dv.k1, &pu.k2),
        lhs2: index(&dw.k2, &pv.k2),
        rhs2: index(&du.k2, &pv.k1),
    };
    if orders.lhs1 != orders.rhs1 || orders.lhs2 != orders.rhs2 {
        return Err(Error::Inconsistent(format!("quotient orders disagree: {orders:?}")));
    }
    Ok(orders)
}

/// Checks, for `Δ(G, phi) <= U` and `Δ(G, psi) <= V`:
/// `k2(U) = phi(k1(U))`, `k2(V) = psi(k1(V))`,
/// `k1(U*V) = k1(U) phi^-1(k1(V))` and `k2(U*V) = k2(V) psi(k2(U))`.
pub fn check_twisted_kernel_identities(
    u: &ProductSubgroup,
    phi: &GroupHom,
    v: &ProductSubgroup,
    psi: &GroupHom,
) -> Result<()> {
    require_common_square(u, v)?;
    check_diagonal(u, phi)?;
    check_diagonal(v, psi)?;
    let phi_inv = phi.inverse().ok_or_else(|| Error::NotAutomorphism("phi is not bijective".into()))?;
    let w = star_product(u, v)?;
    let (pu, pv, pw) = (u.projections_kernels(), v.projections_kernels(), w.projections_kernels());
    let fail = |what: &str| Err(Error::Inconsistent(format!("{what} does not hold")));
    if pu.k2 != phi.map_subgroup(&pu.k1) {
        return fail("k2(U) = phi(k1(U))");
    }
    if pv.k2 != psi.map_subgroup(&pv.k1) {
        return fail("k2(V) = psi(k1(V))");
    }
    if pw.k1 != pu.k1.join(&phi_inv.map_subgroup(&pv.k1)) {
        return fail("k1(U*V) = k1(U) phi^-1(k1(V))");
    }
    if pw.k2 != pv.k2.join(&psi.map_subgroup(&pu.k2)) {
        return fail("k2(U*V) = k2(V) psi(k2(U))");
    }
    Ok(())
}

/// The procedure that decided (or confirmed) a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactCriterion,
    CyclicSylow,
    CentralShortcut,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactCriterion => "exact-criterion",
            Method::CyclicSylow => "cyclic-sylow",
            Method::CentralShortcut => "central-shortcut",
            Method::Oracle => "oracle",
        }
    }
}

/// Orders of the subgroups behind the exact test, plus the invariant
/// factors of `(k1(U) ∩ G') / [k1(U), G]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub k1_of_uprime: usize,
    pub derived_cap_k1: usize,
    pub commutator_k1_g: usize,
    pub obstruction_divisors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    pub extensible: bool,
    /// Every method that reached a conclusion, in the order exact criterion,
    /// cyclic Sylow, central shortcut, oracle. The verdict is the exact one.
    pub methods: Vec<Method>,
    /// Methods whose conclusion contradicts the verdict. Empty unless
    /// something is broken.
    pub conflicts: Vec<Method>,
    /// Hom-oracle verdict, when the oracle was run.
    pub oracle: Option<bool>,
    pub obstruction_trivial: bool,
    pub witnesses: Witnesses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Cross-check every prime against the hom oracle with this search.
    pub oracle: Option<HomSearch>,
    pub caps: Caps,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { oracle: Some(HomSearch::Abelianization), caps: Caps::default() }
    }
}

#[derive(Debug, Clone)]
pub struct ExtensibilityReport {
    pub subject: SubdirectCertificate,
    pub per_prime: BTreeMap<usize, PrimeVerdict>,
    /// Conjunction over the requested primes.
    pub overall: bool,
    /// The two sides of the exact test agree and no method conflicts.
    pub consistent: bool,
}

/// Runs every applicable test for each prime in `pi`.
pub fn analyze(u: &ProductSubgroup, pi: &[usize], options: &AnalyzeOptions) -> Result<ExtensibilityReport> {
    for &p in pi {
        require_prime(p)?;
    }
    let subject = SubdirectCertificate::new(u, &options.caps)?;
    u.require_subdirect()?;
    let [side1, side2] = kernel_commutator_data(u)?;
    let obstruction = obstruction_quotient(&u.projections_kernels().k1)?;
    let witnesses = Witnesses {
        k1_of_uprime: side1.k_of_uprime.order(),
        derived_cap_k1: side1.pprime_cap_k.order(),
        commutator_k1_g: side1.commutator_k_p.order(),
        obstruction_divisors: obstruction.invariants.divisors().to_vec(),
    };
    let central = match &subject.diagonal {
        Some(phi) => Some(central_primes_with(u, phi)?),
        None => None,
    };
    let mut consistent = side1.criterion_holds() == side2.criterion_holds();
    let mut per_prime = BTreeMap::new();
    for &p in pi {
        let extensible = side1.criterion_holds_at(p);
        let mut methods = vec![Method::ExactCriterion];
        let mut conflicts = Vec::new();
        if extensible != side2.criterion_holds_at(p) {
            conflicts.push(Method::ExactCriterion);
        }
        let mut record = |m: Method, verdict: bool| {
            methods.push(m);
            if verdict != extensible {
                conflicts.push(m);
            }
        };
        if cyclic_sylow_at(u, p).is_some() {
            record(Method::CyclicSylow, true);
        }
        if central.as_ref().is_some_and(|c| c.contains(&p)) {
            record(Method::CentralShortcut, false);
        }
        let oracle = match options.oracle {
            Some(search) => Some(oracle::oracle_is_p_extensible(u, p, search)?),
            None => None,
        };
        if let Some(verdict) = oracle {
            record(Method::Oracle, verdict);
        }
        let obstruction_trivial = obstruction.is_trivial_at(p);
        if obstruction_trivial && !extensible {
            conflicts.push(Method::ExactCriterion);
        }
        conflicts.dedup();
        consistent &= conflicts.is_empty();
        per_prime.insert(
            p,
            PrimeVerdict { extensible, methods, conflicts, oracle, obstruction_trivial, witnesses: witnesses.clone() },
        );
    }
    let overall = per_prime.values().all(|v| v.extensible);
    Ok(ExtensibilityReport { subject, per_prime, overall, consistent })
}
