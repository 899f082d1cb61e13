//! Goursat data of subgroups of `G x H`, subdirect products, the `*`-product
//! and twisted diagonals.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{same_group, Caps, FiniteGroup};
use crate::hom::{automorphisms, isomorphism, GroupHom};
use crate::product::{ProductGroup, ProductSubgroup};
use crate::quotient::Quotient;
use crate::subgroup::{all_subgroups, normal_subgroups, Subgroup};

/// `(p1, k1, phi, k2, p2)` with `phi : p1/k1 -> p2/k2` an isomorphism.
///
/// `phi` is stored as a map between the explicitly constructed quotient
/// groups `q1 = p1/k1` and `q2 = p2/k2` (cosets numbered by minimal element).
#[derive(Debug, Clone)]
pub struct GoursatQuintuple {
    product: ProductGroup,
    pub p1: Subgroup,
    pub k1: Subgroup,
    pub p2: Subgroup,
    pub k2: Subgroup,
    pub q1: Quotient,
    pub q2: Quotient,
    pub phi: GroupHom,
}

impl GoursatQuintuple {
    /// Validates the data; `phi_images[c]` is the image of coset `c` of `p1/k1`.
    pub fn new(
        product: &ProductGroup,
        p1: Subgroup,
        k1: Subgroup,
        p2: Subgroup,
        k2: Subgroup,
        phi_images: Vec<usize>,
    ) -> Result<Self> {
        let (q1, q2) = Self::quotients(product, &p1, &k1, &p2, &k2)?;
        let phi = GroupHom::new(Arc::clone(q1.group()), Arc::clone(q2.group()), phi_images)
            .map_err(|e| Error::InvalidQuintuple(format!("phi: {e}")))?;
        if !phi.is_bijective() {
            return Err(Error::InvalidQuintuple("phi is not an isomorphism".into()));
        }
        Ok(GoursatQuintuple { product: product.clone(), p1, k1, p2, k2, q1, q2, phi })
    }

    /// Builds `phi` from pairs `(g, h)` meaning `g k1 -> h k2`. The `g` must
    /// generate `p1` modulo `k1`.
    pub fn from_generator_images(
        product: &ProductGroup,
        p1: Subgroup,
        k1: Subgroup,
        p2: Subgroup,
        k2: Subgroup,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let (q1, q2) = Self::quotients(product, &p1, &k1, &p2, &k2)?;
        let mut gens = Vec::new();
        let mut images = Vec::new();
        for &(g, h) in pairs {
            let a = q1.project(g).ok_or_else(|| Error::InvalidQuintuple(format!("{g} is not in p1")))?;
            let b = q2.project(h).ok_or_else(|| Error::InvalidQuintuple(format!("{h} is not in p2")))?;
            gens.push(a);
            images.push(b);
        }
        let map = crate::hom::extend_generator_images(q1.group(), q2.group(), &gens, &images)
            .ok_or_else(|| Error::InvalidQuintuple("generator images do not define a homomorphism".into()))?;
        if map.contains(&usize::MAX) {
            return Err(Error::InvalidQuintuple("pairs do not generate p1 modulo k1".into()));
        }
        GoursatQuintuple::new(product, p1, k1, p2, k2, map)
    }

    fn quotients(
        product: &ProductGroup,
        p1: &Subgroup,
        k1: &Subgroup,
        p2: &Subgroup,
        k2: &Subgroup,
    ) -> Result<(Quotient, Quotient)> {
        if !same_group(p1.parent(), product.left()) || !same_group(p2.parent(), product.right()) {
            return Err(Error::InvalidQuintuple("subgroups do not live in the product's factors".into()));
        }
        let q1 = Quotient::new(p1, k1).map_err(|e| Error::InvalidQuintuple(format!("p1/k1: {e}")))?;
        let q2 = Quotient::new(p2, k2).map_err(|e| Error::InvalidQuintuple(format!("p2/k2: {e}")))?;
        if q1.group().order() != q2.group().order() {
            return Err(Error::InvalidQuintuple(format!(
                "|p1/k1| = {} but |p2/k2| = {}",
                q1.group().order(),
                q2.group().order()
            )));
        }
        Ok((q1, q2))
    }

    pub fn product(&self) -> &ProductGroup {
        &self.product
    }

    /// The Goursat quotient `q(U) = p1/k1`.
    pub fn quotient_group(&self) -> &Arc<FiniteGroup> {
        self.q1.group()
    }
}

pub fn goursat_quintuple(u: &ProductSubgroup) -> GoursatQuintuple {
    let pk = u.projections_kernels();
    let q1 = Quotient::new(&pk.p1, &pk.k1).expect("k1 is normal in p1");
    let q2 = Quotient::new(&pk.p2, &pk.k2).expect("k2 is normal in p2");
    let mut phi = vec![usize::MAX; q1.group().order()];
    for (g, h) in u.pairs() {
        let a = q1.project(g).expect("g in p1");
        let b = q2.project(h).expect("h in p2");
        debug_assert!(phi[a] == usize::MAX || phi[a] == b);
        phi[a] = b;
    }
    let phi = GroupHom::new_unchecked(Arc::clone(q1.group()), Arc::clone(q2.group()), phi);
    GoursatQuintuple { product: u.product().clone(), p1: pk.p1, k1: pk.k1, p2: pk.p2, k2: pk.k2, q1, q2, phi }
}

/// `{(g, h) : g in p1, h in p2, phi(g k1) = h k2}`.
pub fn subgroup_from_quintuple(q: &GoursatQuintuple) -> ProductSubgroup {
    let product = &q.product;
    let mut m = FixedBitSet::with_capacity(product.group().order());
    for &g in q.p1.elements() {
        let target = q.phi.apply(q.q1.project(g).expect("in p1"));
        for &h in q.p2.elements() {
            if q.q2.project(h) == Some(target) {
                m.insert(product.pair(g, h));
            }
        }
    }
    ProductSubgroup::new(product, Subgroup::from_bits_unchecked(product.group(), m))
}

/// `q(U) = p1(U)/k1(U)`.
pub fn goursat_quotient(u: &ProductSubgroup) -> Arc<FiniteGroup> {
    let pk = u.projections_kernels();
    Arc::clone(Quotient::new(&pk.p1, &pk.k1).expect("k1 is normal in p1").group())
}

/// All subdirect products of `G x H`, each once, sorted by element set.
///
/// For every pair of normal subgroups `K`, `L` with `G/K` isomorphic to
/// `H/L`, every isomorphism `theta : G/K -> H/L` gives the subdirect product
/// `{(g, h) : theta(gK) = hL}`.
pub fn enumerate_subdirect(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, caps: &Caps) -> Result<Vec<ProductSubgroup>> {
    let product = ProductGroup::new(g, h, caps.max_product_order)?;
    let left: Vec<Quotient> =
        normal_subgroups(g).iter().map(|k| Quotient::new(&Subgroup::whole(g), k).expect("normal")).collect();
    let right: Vec<Quotient> =
        normal_subgroups(h).iter().map(|l| Quotient::new(&Subgroup::whole(h), l).expect("normal")).collect();
    let mut auts: HashMap<usize, Vec<GroupHom>> = HashMap::new();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (ki, qk) in left.iter().enumerate() {
        for ql in &right {
            if qk.group().order() != ql.group().order() {
                continue;
            }
            let Some(iso) = isomorphism(qk.group(), ql.group(), caps)? else {
                continue;
            };
            if let std::collections::hash_map::Entry::Vacant(e) = auts.entry(ki) {
                e.insert(automorphisms(qk.group(), caps)?);
            }
            for alpha in &auts[&ki] {
                let theta = alpha.then(&iso);
                let mut elems = Vec::with_capacity(g.order() * ql.kernel().order());
                for x in 0..g.order() {
                    let target = theta.apply(qk.project(x).expect("whole"));
                    for y in 0..h.order() {
                        if ql.project(y) == Some(target) {
                            elems.push(product.pair(x, y));
                        }
                    }
                }
                found.insert(elems);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|elems| {
            let mut m = FixedBitSet::with_capacity(product.group().order());
            m.extend(elems);
            ProductSubgroup::new(&product, Subgroup::from_bits_unchecked(product.group(), m))
        })
        .collect())
}

/// `U * V` for `U <= F x G` and `V <= G x H`, as a subgroup of `target = F x H`.
pub fn star_product_in(u: &ProductSubgroup, v: &ProductSubgroup, target: &ProductGroup) -> Result<ProductSubgroup> {
    let (up, vp) = (u.product(), v.product());
    if !same_group(up.right(), vp.left()) {
        return Err(Error::FactorMismatch(format!(
            "right factor {} of U differs from left factor {} of V",
            up.right().label(),
            vp.left().label()
        )));
    }
    if !same_group(target.left(), up.left()) || !same_group(target.right(), vp.right()) {
        return Err(Error::FactorMismatch("target product does not match the outer factors".into()));
    }
    let mut by_middle: Vec<Vec<usize>> = vec![Vec::new(); vp.left().order()];
    for (x, w) in v.pairs() {
        by_middle[x].push(w);
    }
    let mut m = FixedBitSet::with_capacity(target.group().order());
    for (a, x) in u.pairs() {
        for &w in &by_middle[x] {
            m.insert(target.pair(a, w));
        }
    }
    let sub = Subgroup::from_elements(target.group(), m.ones())
        .map_err(|e| Error::Inconsistent(format!("star product not closed: {e}")))?;
    Ok(ProductSubgroup::new(target, sub))
}

/// `U * V`, reusing an input's product when it already is `F x H`.
pub fn star_product(u: &ProductSubgroup, v: &ProductSubgroup) -> Result<ProductSubgroup> {
    let (up, vp) = (u.product(), v.product());
    let target = if same_group(up.right(), vp.right()) {
        up.clone()
    } else if same_group(vp.left(), up.left()) {
        vp.clone()
    } else {
        ProductGroup::new(up.left(), vp.right(), usize::MAX)?
    };
    star_product_in(u, v, &target)
}

/// `Delta(G, phi) = {(g, phi(g))}`.
pub fn twisted_diagonal(product: &ProductGroup, phi: &GroupHom) -> Result<ProductSubgroup> {
    if !product.is_square() {
        return Err(Error::FactorMismatch("twisted diagonals need G x G".into()));
    }
    let g = product.left();
    if !same_group(phi.domain(), g) || !same_group(phi.codomain(), g) {
        return Err(Error::NotAutomorphism("map is not an endomorphism of the factor".into()));
    }
    if !phi.is_bijective() {
        return Err(Error::NotAutomorphism("map is not bijective".into()));
    }
    for x in 0..g.order() {
        for y in 0..g.order() {
            if phi.apply(g.mul(x, y)) != g.mul(phi.apply(x), phi.apply(y)) {
                return Err(Error::NotAutomorphism(format!("not multiplicative at ({x}, {y})")));
            }
        }
    }
    let mut m = FixedBitSet::with_capacity(product.group().order());
    for x in 0..g.order() {
        m.insert(product.pair(x, phi.apply(x)));
    }
    Ok(ProductSubgroup::new(product, Subgroup::from_bits_unchecked(product.group(), m)))
}

/// The untwisted diagonal `Delta(G)`.
pub fn diagonal(product: &ProductGroup) -> Result<ProductSubgroup> {
    twisted_diagonal(product, &GroupHom::identity(product.left()))
}

/// First automorphism in `autos` whose graph lies in `U`.
pub fn contains_twisted_diagonal_among(u: &ProductSubgroup, autos: &[GroupHom]) -> Option<GroupHom> {
    if !u.product().is_square() {
        return None;
    }
    let n = u.product().left().order();
    autos.iter().find(|phi| (0..n).all(|x| u.contains_pair(x, phi.apply(x)))).cloned()
}

/// Some `phi` with `Delta(G, phi) <= U`, scanning automorphisms with the
/// identity first.
pub fn contains_twisted_diagonal(u: &ProductSubgroup, caps: &Caps) -> Result<Option<GroupHom>> {
    if !u.product().is_square() {
        return Ok(None);
    }
    let autos = automorphisms(u.product().left(), caps)?;
    Ok(contains_twisted_diagonal_among(u, &autos))
}

/// Whether `Q` is isomorphic to a quotient of a subgroup of `G`.
pub fn is_section(q: &Arc<FiniteGroup>, g: &Arc<FiniteGroup>, caps: &Caps) -> Result<bool> {
    let (qn, gn) = (q.order(), g.order());
    if qn == 1 {
        return Ok(true);
    }
    if gn % qn != 0 || g.exponent() % q.exponent() != 0 {
        return Ok(false);
    }
    if qn == gn {
        return Ok(isomorphism(q, g, caps)?.is_some());
    }
    for s in all_subgroups(g, caps.max_lattice_order.max(caps.max_iso_order))? {
        if s.order() % qn != 0 {
            continue;
        }
        let sg = s.to_group();
        for n in normal_subgroups(&sg) {
            if n.order() * qn != s.order() {
                continue;
            }
            let quotient = Quotient::new(&Subgroup::whole(&sg), &n)?;
            if isomorphism(q, quotient.group(), caps)?.is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Subdirectness of `U` and, for `U <= G x G`, a twisted diagonal witness.
#[derive(Debug, Clone)]
pub struct SubdirectCertificate {
    pub subgroup: ProductSubgroup,
    pub is_subdirect: bool,
    pub diagonal: Option<GroupHom>,
}

impl SubdirectCertificate {
    pub fn new(u: &ProductSubgroup, caps: &Caps) -> Result<Self> {
        Ok(SubdirectCertificate {
            subgroup: u.clone(),
            is_subdirect: u.is_subdirect(),
            diagonal: contains_twisted_diagonal(u, caps)?,
        })
    }

    pub fn contains_diagonal(&self) -> bool {
        self.diagonal.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hom::is_isomorphic;
    use crate::subgroup::{center, commutator_subgroup};

    fn caps() -> Caps {
        Caps::default()
    }

    fn square(g: FiniteGroup) -> ProductGroup {
        let g = Arc::new(g);
        ProductGroup::new(&g, &g, 10_000).unwrap()
    }

    /// `(K x 1) Delta(G)`.
    fn kernel_diagonal(p: &ProductGroup, k: &Subgroup) -> ProductSubgroup {
        let d = diagonal(p).unwrap();
        let k1 = p.product_subgroup(k, &Subgroup::trivial(p.right()));
        ProductSubgroup::new(p, d.subgroup().join(&k1))
    }

    #[test]
    fn a3_diagonal_example() {
        let p = square(catalog::symmetric(3));
        let a3 = commutator_subgroup(p.left());
        let a3a3 = p.product_subgroup(&a3, &a3);
        let u = ProductSubgroup::new(&p, diagonal(&p).unwrap().subgroup().join(&a3a3));
        assert_eq!(u.order(), 18);
        let pk = u.projections_kernels();
        assert!(pk.p1.is_whole() && pk.p2.is_whole());
        assert_eq!(pk.k1, a3);
        assert_eq!(pk.k2, a3);
        let q = goursat_quintuple(&u);
        assert_eq!(q.quotient_group().order(), 2);
        assert_eq!(u.order(), q.p1.order() * q.k2.order());
        assert_eq!(subgroup_from_quintuple(&q), u);
        // U * U = U
        assert_eq!(star_product(&u, &u).unwrap(), u);
    }

    #[test]
    fn diagonal_quintuple() {
        let p = square(catalog::cyclic(2));
        let d = diagonal(&p).unwrap();
        let q = goursat_quintuple(&d);
        assert!(q.p1.is_whole() && q.k1.is_trivial() && q.k2.is_trivial() && q.p2.is_whole());
        assert!(q.phi.is_identity());

        let full = ProductSubgroup::full(&p);
        let q = goursat_quintuple(&full);
        assert_eq!(q.quotient_group().order(), 1);
        assert_eq!(subgroup_from_quintuple(&q), full);
    }

    #[test]
    fn quintuple_validation() {
        let p = square(catalog::symmetric(3));
        let g = p.left();
        let whole = Subgroup::whole(g);
        let t = Subgroup::generated(g, [(0..6).find(|&x| g.element_order(x) == 2).unwrap()]);
        // k1 not normal
        let err = GoursatQuintuple::new(&p, whole.clone(), t, whole.clone(), whole.clone(), vec![0, 0, 0]);
        assert!(matches!(err, Err(Error::InvalidQuintuple(_))));
        // phi not injective
        let a3 = commutator_subgroup(g);
        let err = GoursatQuintuple::new(&p, whole.clone(), a3.clone(), whole.clone(), a3.clone(), vec![0, 0]);
        assert!(matches!(err, Err(Error::InvalidQuintuple(_))));
        let ok = GoursatQuintuple::new(&p, whole.clone(), a3.clone(), whole.clone(), a3.clone(), vec![0, 1]).unwrap();
        assert_eq!(subgroup_from_quintuple(&ok).order(), 18);

        let odd = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let from_pairs = GoursatQuintuple::from_generator_images(
            &p,
            whole.clone(),
            a3.clone(),
            whole.clone(),
            a3.clone(),
            &[(odd, odd)],
        )
        .unwrap();
        assert_eq!(subgroup_from_quintuple(&from_pairs), subgroup_from_quintuple(&ok));
        let err = GoursatQuintuple::from_generator_images(&p, whole.clone(), a3.clone(), whole, a3, &[]);
        assert!(matches!(err, Err(Error::InvalidQuintuple(_))));
    }

    #[test]
    fn d8_center_diagonal_quotient() {
        let p = square(catalog::dihedral(8));
        let u = kernel_diagonal(&p, &center(p.left()));
        assert_eq!(u.order(), 16);
        let q = goursat_quotient(&u);
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        assert!(is_isomorphic(&q, &catalog::elementary_abelian(2, 2), &caps()).unwrap());
    }

    #[test]
    fn subdirect_counts() {
        let c2 = Arc::new(catalog::cyclic(2));
        let c3 = Arc::new(catalog::cyclic(3));
        assert_eq!(enumerate_subdirect(&c2, &c2, &caps()).unwrap().len(), 2);
        assert_eq!(enumerate_subdirect(&c2, &c3, &caps()).unwrap().len(), 1);
        let s3 = Arc::new(catalog::symmetric(3));
        let from_goursat = enumerate_subdirect(&s3, &s3, &caps()).unwrap();
        let p = ProductGroup::new(&s3, &s3, 100).unwrap();
        let from_lattice: Vec<ProductSubgroup> = all_subgroups(p.group(), 100)
            .unwrap()
            .into_iter()
            .map(|s| ProductSubgroup::new(&p, s))
            .filter(|u| u.is_subdirect())
            .collect();
        assert_eq!(from_goursat.len(), from_lattice.len());
        for u in &from_goursat {
            assert!(from_lattice.contains(u));
        }
    }

    #[test]
    fn star_products() {
        let p = square(catalog::symmetric(3));
        let auts = automorphisms(p.left(), &caps()).unwrap();
        for phi in &auts {
            for psi in &auts {
                let a = twisted_diagonal(&p, phi).unwrap();
                let b = twisted_diagonal(&p, psi).unwrap();
                let expect = twisted_diagonal(&p, &phi.then(psi)).unwrap();
                assert_eq!(star_product(&a, &b).unwrap(), expect);
            }
        }
        let c2 = Arc::new(catalog::cyclic(2));
        let c3 = Arc::new(catalog::cyclic(3));
        let s3 = Arc::clone(p.left());
        let fg = ProductGroup::new(&c2, &s3, 100).unwrap();
        let gh = ProductGroup::new(&s3, &c3, 100).unwrap();
        let w = star_product(&ProductSubgroup::full(&fg), &ProductSubgroup::full(&gh)).unwrap();
        assert_eq!(w.order(), 6);
        assert!(w.subgroup().is_whole());
        let err = star_product(&ProductSubgroup::full(&gh), &ProductSubgroup::full(&fg)).unwrap_err();
        assert!(matches!(err, Error::FactorMismatch(_)));
    }

    #[test]
    fn twisted_diagonals() {
        let p = square(catalog::symmetric(3));
        let d = diagonal(&p).unwrap();
        assert_eq!(d.order(), 6);
        assert!(contains_twisted_diagonal(&d, &caps()).unwrap().unwrap().is_identity());
        let full = ProductSubgroup::full(&p);
        assert!(contains_twisted_diagonal(&full, &caps()).unwrap().unwrap().is_identity());
        let a3 = commutator_subgroup(p.left());
        let u = kernel_diagonal(&p, &a3);
        assert!(contains_twisted_diagonal(&u, &caps()).unwrap().is_some());
        let not_aut = GroupHom::new(Arc::clone(p.left()), Arc::clone(p.left()), vec![0; 6]).unwrap();
        assert!(matches!(twisted_diagonal(&p, &not_aut), Err(Error::NotAutomorphism(_))));
        // a subgroup missing every twisted diagonal
        let a3a3 = ProductSubgroup::new(&p, p.product_subgroup(&a3, &a3));
        assert!(contains_twisted_diagonal(&a3a3, &caps()).unwrap().is_none());
    }

    #[test]
    fn sections() {
        let trivial = Arc::new(catalog::cyclic(1));
        let c4 = Arc::new(catalog::cyclic(4));
        let v4 = Arc::new(catalog::elementary_abelian(2, 2));
        let d8 = Arc::new(catalog::dihedral(8));
        let s3 = Arc::new(catalog::symmetric(3));
        assert!(is_section(&trivial, &s3, &caps()).unwrap());
        assert!(!is_section(&c4, &v4, &caps()).unwrap());
        assert!(is_section(&v4, &d8, &caps()).unwrap());
        assert!(is_section(&c4, &d8, &caps()).unwrap());
        let q8 = Arc::new(catalog::quaternion8());
        assert!(is_section(&v4, &q8, &caps()).unwrap());
        assert!(!is_section(&q8, &d8, &caps()).unwrap());
        assert!(!is_section(&Arc::new(catalog::cyclic(8)), &d8, &caps()).unwrap());
        assert!(is_section(&Arc::new(catalog::cyclic(2)), &s3, &caps()).unwrap());
    }
}
