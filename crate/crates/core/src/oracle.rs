//! Ground truth by enumeration: homomorphisms into the cyclic group `C_m`,
//! the restriction map `Hom(G x H, C_m) -> Hom(U, C_m)` and extensibility
//! decided by counting its image.
//!
//! Any homomorphism from a finite group into an abelian group whose torsion
//! of each order `n` is cyclic of order `n_pi` lands in a finite cyclic
//! subgroup. Testing against `C_m` with `m` the `p`-part of `exp(G x H)`
//! therefore decides `p`-extensibility for every such coefficient group.

use std::collections::HashMap;
use std::sync::Arc;

use crate::abelian::{abelianization, AbelianInvariants};
use crate::arith;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::product::ProductSubgroup;
use crate::subgroup::Subgroup;

/// The coefficient group `C_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicCoefficient {
    modulus: usize,
}

impl CyclicCoefficient {
    pub fn new(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be at least 1".into()));
        }
        Ok(CyclicCoefficient { modulus })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }
}

/// A homomorphism into `C_m`, as residues indexed by domain element.
#[derive(Clone, PartialEq, Eq)]
pub struct CyclicHom {
    domain: Arc<FiniteGroup>,
    modulus: usize,
    values: Vec<usize>,
}

impl CyclicHom {
    pub fn new(domain: &Arc<FiniteGroup>, modulus: usize, values: Vec<usize>) -> Result<Self> {
        CyclicCoefficient::new(modulus)?;
        if values.len() != domain.order() {
            return Err(Error::InvalidInput("value table has the wrong length".into()));
        }
        if values.iter().any(|&v| v >= modulus) {
            return Err(Error::InvalidInput("value out of range".into()));
        }
        for x in 0..domain.order() {
            for y in 0..domain.order() {
                if values[domain.mul(x, y)] != (values[x] + values[y]) % modulus {
                    return Err(Error::InvalidInput(format!("not additive at ({x}, {y})")));
                }
            }
        }
        Ok(CyclicHom { domain: Arc::clone(domain), modulus, values })
    }

    pub fn zero(domain: &Arc<FiniteGroup>, modulus: usize) -> Self {
        CyclicHom { domain: Arc::clone(domain), modulus, values: vec![0; domain.order()] }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

impl std::fmt::Debug for CyclicHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CyclicHom({} -> C{}: {:?})", self.domain.label(), self.modulus, self.values)
    }
}

/// How homomorphisms are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HomSearch {
    /// Through the abelianization and its invariant-factor basis.
    #[default]
    Abelianization,
    /// Backtracking over generator values with table-wide consistency checks;
    /// does not touch commutator subgroups at all.
    RawTable,
}

/// `|Hom(A, C_m)| = prod gcd(d_i, m)` over the invariant factors of `A`.
pub fn hom_count_formula(invariants: &AbelianInvariants, m: usize) -> usize {
    invariants.divisors().iter().map(|&d| arith::gcd(d, m)).product()
}

pub fn enumerate_homs(g: &Arc<FiniteGroup>, m: usize) -> Vec<CyclicHom> {
    enumerate_homs_with(g, m, HomSearch::Abelianization)
}

pub fn enumerate_homs_with(g: &Arc<FiniteGroup>, m: usize, search: HomSearch) -> Vec<CyclicHom> {
    assert!(m >= 1, "modulus must be at least 1");
    match search {
        HomSearch::Abelianization => via_abelianization(g, m),
        HomSearch::RawTable => raw_search(g, m),
    }
}

/// Homomorphisms on a subgroup, indexed by position in `s.elements()`.
pub fn enumerate_homs_on(s: &Subgroup, m: usize, search: HomSearch) -> Vec<CyclicHom> {
    enumerate_homs_with(&s.to_group(), m, search)
}

fn via_abelianization(g: &Arc<FiniteGroup>, m: usize) -> Vec<CyclicHom> {
    let ab = abelianization(g);
    let divisors = ab.invariants.divisors();
    // admissible images of basis element i: multiples of m / gcd(d_i, m)
    let steps: Vec<(usize, usize)> = divisors
        .iter()
        .map(|&d| {
            let c = arith::gcd(d, m);
            (c, m / c)
        })
        .collect();
    let coords = &ab.decomposition.coordinates;
    let mut out = Vec::new();
    let mut choice = vec![0usize; steps.len()];
    loop {
        let basis_values: Vec<usize> = choice.iter().zip(&steps).map(|(&k, &(_, step))| k * step).collect();
        let values = (0..g.order())
            .map(|x| {
                let c = &coords[ab.projection.apply(x)];
                c.iter().zip(&basis_values).map(|(&e, &v)| e * v).sum::<usize>() % m
            })
            .collect();
        out.push(CyclicHom { domain: Arc::clone(g), modulus: m, values });
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < steps[i].0 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    out
}

fn raw_search(g: &Arc<FiniteGroup>, m: usize) -> Vec<CyclicHom> {
    let gens = Subgroup::whole(g).generators();
    let mut out = Vec::new();
    let mut vals = Vec::with_capacity(gens.len());
    raw_descend(g, m, &gens, &mut vals, &mut out);
    out
}

/// Propagates generator values over right multiplication; `None` on conflict.
fn propagate(g: &FiniteGroup, m: usize, gens: &[usize], vals: &[usize]) -> Option<Vec<usize>> {
    let mut table = vec![usize::MAX; g.order()];
    table[0] = 0;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&s, &v) in gens.iter().zip(vals) {
            let y = g.mul(x, s);
            let val = (table[x] + v) % m;
            if table[y] == usize::MAX {
                table[y] = val;
                queue.push(y);
            } else if table[y] != val {
                return None;
            }
        }
        i += 1;
    }
    Some(table)
}

fn raw_descend(g: &Arc<FiniteGroup>, m: usize, gens: &[usize], vals: &mut Vec<usize>, out: &mut Vec<CyclicHom>) {
    let level = vals.len();
    if level == gens.len() {
        let table = propagate(g, m, gens, vals).expect("checked on the way down");
        out.push(CyclicHom { domain: Arc::clone(g), modulus: m, values: table });
        return;
    }
    let order = g.element_order(gens[level]);
    for v in 0..m {
        if (order * v) % m != 0 {
            continue;
        }
        vals.push(v);
        if propagate(g, m, &gens[..=level], vals).is_some() {
            raw_descend(g, m, gens, vals, out);
        }
        vals.pop();
    }
}

/// Values on `U` of `(g, h) -> phi_g(g) + phi_h(h)`, in the order of `U`'s elements.
fn restricted_values(u: &ProductSubgroup, left: &CyclicHom, right: &CyclicHom) -> Vec<usize> {
    let m = left.modulus;
    u.pairs().map(|(g, h)| (left.values[g] + right.values[h]) % m).collect()
}

/// Restriction of a homomorphism on the product group to `U`; the result is
/// defined on `U.subgroup().to_group()`.
pub fn restriction_map(phi: &CyclicHom, u: &ProductSubgroup) -> Result<CyclicHom> {
    if **phi.domain() != **u.product().group() {
        return Err(Error::InvalidInput("homomorphism is not defined on the product".into()));
    }
    let values = u.subgroup().elements().iter().map(|&x| phi.values[x]).collect();
    Ok(CyclicHom { domain: u.subgroup().to_group(), modulus: phi.modulus, values })
}

/// `(g, h) -> phi_g(g) + phi_h(h)` on `G x H`.
pub fn product_hom(u: &ProductSubgroup, left: &CyclicHom, right: &CyclicHom) -> CyclicHom {
    let p = u.product();
    let values = (0..p.group().order())
        .map(|x| {
            let (g, h) = p.unpair(x);
            (left.values[g] + right.values[h]) % left.modulus
        })
        .collect();
    CyclicHom { domain: Arc::clone(p.group()), modulus: left.modulus, values }
}

/// Sizes attached to the restriction map `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoCounts {
    /// `|Hom(G x H, C_m)|`.
    pub total: usize,
    pub kernel: usize,
    pub image: usize,
    /// Every fibre over the image has `kernel` elements.
    pub fibers_uniform: bool,
}

pub fn rho_kernel_image_sizes(u: &ProductSubgroup, m: usize, search: HomSearch) -> Result<RhoCounts> {
    u.require_subdirect()?;
    let left = enumerate_homs_with(u.product().left(), m, search);
    let right = enumerate_homs_with(u.product().right(), m, search);
    let mut fibers: HashMap<Vec<usize>, usize> = HashMap::new();
    for a in &left {
        for b in &right {
            *fibers.entry(restricted_values(u, a, b)).or_default() += 1;
        }
    }
    let total = left.len() * right.len();
    let kernel = fibers.get(&vec![0; u.order()]).copied().unwrap_or(0);
    let image = fibers.len();
    let fibers_uniform = fibers.values().all(|&c| c == kernel);
    if kernel * image != total {
        return Err(Error::Inconsistent(format!("|ker| * |im| = {kernel} * {image} != {total}")));
    }
    Ok(RhoCounts { total, kernel, image, fibers_uniform })
}

/// `m = p^e` with `p^e` the exact power of `p` dividing `exp(G x H)`.
pub fn coefficient_modulus(u: &ProductSubgroup, p: usize) -> usize {
    arith::p_part(u.product().group().exponent(), &[p])
}

/// Decides `p`-extensibility by comparing `|im rho|` with `|Hom(U, C_m)|`.
pub fn oracle_is_p_extensible(u: &ProductSubgroup, p: usize, search: HomSearch) -> Result<bool> {
    oracle_is_extensible_mod(u, coefficient_modulus(u, p), search)
}

/// Surjectivity of `rho` for coefficients `C_m`.
pub fn oracle_is_extensible_mod(u: &ProductSubgroup, m: usize, search: HomSearch) -> Result<bool> {
    let counts = rho_kernel_image_sizes(u, m, search)?;
    let on_u = enumerate_homs_on(u.subgroup(), m, search).len();
    Ok(counts.image == on_u)
}

/// Some homomorphism on `G x H` restricting to `phi` (a homomorphism on
/// `U.subgroup().to_group()`), searching `Hom(G, C_m) x Hom(H, C_m)` in
/// enumeration order.
pub fn extend_hom(phi: &CyclicHom, u: &ProductSubgroup) -> Result<Option<CyclicHom>> {
    u.require_subdirect()?;
    if phi.domain().order() != u.order() {
        return Err(Error::InvalidInput("homomorphism is not defined on U".into()));
    }
    let m = phi.modulus;
    let left = enumerate_homs(u.product().left(), m);
    let right = enumerate_homs(u.product().right(), m);
    for a in &left {
        for b in &right {
            if restricted_values(u, a, b) == phi.values {
                return Ok(Some(product_hom(u, a, b)));
            }
        }
    }
    Ok(None)
}

/// Constructive check: every homomorphism `U -> C_m` has an extension.
pub fn every_hom_extends(u: &ProductSubgroup, m: usize) -> Result<bool> {
    for phi in enumerate_homs_on(u.subgroup(), m, HomSearch::Abelianization) {
        if extend_hom(&phi, u)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::goursat::diagonal;
    use crate::product::ProductGroup;
    use crate::subgroup::{center, commutator_subgroup};

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_homs(&arc(catalog::cyclic(1)), 5).len(), 1);
        let s3 = arc(catalog::symmetric(3));
        assert_eq!(enumerate_homs(&s3, 6).len(), 2);
        assert_eq!(enumerate_homs_with(&s3, 6, HomSearch::RawTable).len(), 2);
        let v4 = arc(catalog::elementary_abelian(2, 2));
        assert_eq!(enumerate_homs(&v4, 2).len(), 4);
        for h in enumerate_homs(&arc(catalog::abelian(&[2, 4, 3])), 12) {
            assert!(CyclicHom::new(h.domain(), 12, h.values().to_vec()).is_ok());
        }
    }

    #[test]
    fn both_searches_find_the_same_homs() {
        for g in catalog::small_catalog().into_iter().chain([catalog::alternating(4), catalog::abelian(&[2, 6])]) {
            let g = arc(g);
            for m in 1..=12 {
                let mut a: Vec<Vec<usize>> = enumerate_homs(&g, m).iter().map(|h| h.values.clone()).collect();
                let mut b: Vec<Vec<usize>> =
                    enumerate_homs_with(&g, m, HomSearch::RawTable).iter().map(|h| h.values.clone()).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b, "{g} mod {m}");
                assert_eq!(a.len(), hom_count_formula(&abelianization(&g).invariants, m));
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let c2 = arc(catalog::cyclic(2));
        let p = ProductGroup::new(&c2, &c2, 100).unwrap();
        let full = ProductSubgroup::full(&p);
        let sum = CyclicHom::new(p.group(), 2, (0..4).map(|x| (x / 2 + x % 2) % 2).collect()).unwrap();
        let zero = CyclicHom::zero(p.group(), 2);
        assert!(restriction_map(&zero, &full).unwrap().is_zero());
        let d = diagonal(&p).unwrap();
        assert!(restriction_map(&sum, &d).unwrap().is_zero());
        let left = ProductSubgroup::new(&p, p.generated_by_pairs(&[(1, 0)]).unwrap());
        assert_eq!(restriction_map(&sum, &left).unwrap().values(), &[0, 1]);
    }

    fn kernel_diagonal(g: FiniteGroup, k: impl Fn(&Arc<FiniteGroup>) -> Subgroup) -> ProductSubgroup {
        let g = arc(g);
        let p = ProductGroup::new(&g, &g, 10_000).unwrap();
        let k = k(&g);
        let kk = p.product_subgroup(&k, &Subgroup::trivial(&g));
        ProductSubgroup::new(&p, diagonal(&p).unwrap().subgroup().join(&kk))
    }

    #[test]
    fn rho_examples() {
        let s3 = arc(catalog::symmetric(3));
        let p = ProductGroup::new(&s3, &s3, 100).unwrap();
        let full = ProductSubgroup::full(&p);
        assert_eq!(rho_kernel_image_sizes(&full, 6, HomSearch::Abelianization).unwrap().kernel, 1);

        let a3 = commutator_subgroup(&s3);
        let u = ProductSubgroup::new(&p, diagonal(&p).unwrap().subgroup().join(&p.product_subgroup(&a3, &a3)));
        let c = rho_kernel_image_sizes(&u, 6, HomSearch::Abelianization).unwrap();
        assert_eq!(c.kernel, 2);
        assert!(c.fibers_uniform);

        let u = kernel_diagonal(catalog::dihedral(8), center);
        let c = rho_kernel_image_sizes(&u, 8, HomSearch::RawTable).unwrap();
        assert_eq!(c.kernel, 4);
        assert_eq!(c.total, 16);
    }

    #[test]
    fn oracle_examples() {
        let u = kernel_diagonal(catalog::dihedral(8), center);
        assert_eq!(coefficient_modulus(&u, 2), 4);
        assert!(!oracle_is_p_extensible(&u, 2, HomSearch::Abelianization).unwrap());
        assert!(!oracle_is_p_extensible(&u, 2, HomSearch::RawTable).unwrap());
        assert!(oracle_is_p_extensible(&u, 3, HomSearch::Abelianization).unwrap());
        assert!(!every_hom_extends(&u, 4).unwrap());

        let u = kernel_diagonal(catalog::symmetric(3), commutator_subgroup);
        assert!(oracle_is_p_extensible(&u, 2, HomSearch::Abelianization).unwrap());
        assert!(oracle_is_p_extensible(&u, 3, HomSearch::Abelianization).unwrap());
        assert!(every_hom_extends(&u, 6).unwrap());

        let d8 = arc(catalog::dihedral(8));
        let p = ProductGroup::new(&d8, &d8, 100).unwrap();
        assert!(oracle_is_p_extensible(&ProductSubgroup::full(&p), 2, HomSearch::Abelianization).unwrap());
    }

    #[test]
    fn extension_witnesses() {
        let u = kernel_diagonal(catalog::dihedral(8), center);
        let ug = u.subgroup().to_group();
        let zero = CyclicHom::zero(&ug, 4);
        assert!(extend_hom(&zero, &u).unwrap().unwrap().is_zero());

        // an order-2 character of U that is nontrivial on Z x 1
        let z = center(u.product().left()).elements().iter().copied().find(|&x| x != 0).unwrap();
        let zpos = u.subgroup().elements().binary_search(&u.product().pair(z, 0)).unwrap();
        let bad = enumerate_homs(&ug, 2).into_iter().find(|h| h.apply(zpos) == 1).expect("U has such a character");
        assert!(extend_hom(&bad, &u).unwrap().is_none());

        let g = arc(catalog::cyclic(4));
        let p = ProductGroup::new(&g, &g, 100).unwrap();
        let full = ProductSubgroup::full(&p);
        for phi in enumerate_homs(p.group(), 4) {
            let on_u = restriction_map(&phi, &full).unwrap();
            let ext = extend_hom(&on_u, &full).unwrap().unwrap();
            assert_eq!(ext.values(), phi.values());
        }
    }
}
