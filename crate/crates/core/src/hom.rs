//! Group homomorphisms as image tables, and generator-image backtracking for
//! isomorphisms and automorphisms.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup};
use crate::subgroup::Subgroup;

#[derive(Clone)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    image: Vec<usize>,
}

impl GroupHom {
    pub(crate) fn new_unchecked(domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>, image: Vec<usize>) -> Self {
        debug_assert_eq!(image.len(), domain.order());
        GroupHom { domain, codomain, image }
    }

    /// Checks `image[xy] = image[x] image[y]` for all pairs.
    pub fn new(domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>, image: Vec<usize>) -> Result<Self> {
        if image.len() != domain.order() {
            return Err(Error::InvalidInput(format!(
                "image table has {} entries for a domain of order {}",
                image.len(),
                domain.order()
            )));
        }
        if image.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::InvalidInput("image entry out of range".into()));
        }
        for x in 0..domain.order() {
            for y in 0..domain.order() {
                if image[domain.mul(x, y)] != codomain.mul(image[x], image[y]) {
                    return Err(Error::InvalidInput(format!("not a homomorphism at ({x}, {y})")));
                }
            }
        }
        Ok(GroupHom { domain, codomain, image })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom::new_unchecked(Arc::clone(g), Arc::clone(g), (0..g.order()).collect())
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain.order() != self.codomain.order() {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(self.codomain.order());
        self.image.iter().all(|&y| !seen.put(y))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom::new_unchecked(
            Arc::clone(&self.domain),
            Arc::clone(&other.codomain),
            self.image.iter().map(|&y| other.image[y]).collect(),
        )
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Some(GroupHom::new_unchecked(Arc::clone(&self.codomain), Arc::clone(&self.domain), inv))
    }

    pub fn kernel(&self) -> Subgroup {
        let mut m = FixedBitSet::with_capacity(self.domain.order());
        for (x, &y) in self.image.iter().enumerate() {
            if y == 0 {
                m.insert(x);
            }
        }
        Subgroup::from_bits_unchecked(&self.domain, m)
    }

    /// Image of a subgroup of the domain.
    pub fn map_subgroup(&self, s: &Subgroup) -> Subgroup {
        s.map_into(&self.codomain, |x| self.image[x])
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image && *self.domain == *other.domain && *self.codomain == *other.codomain
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({} -> {}: {:?})", self.domain.label(), self.codomain.label(), self.image)
    }
}

const UNSET: usize = usize::MAX;

/// Extends `gens[i] -> images[i]` to the subgroup generated by `gens`.
///
/// Returns the partial image table (`usize::MAX` outside the generated
/// subgroup) when the assignment is consistent, i.e. defines a homomorphism.
pub fn extend_generator_images(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    extend_checked(domain, codomain, gens, images, false).map(|(map, _)| map)
}

/// Breadth-first propagation of `f(x s) = f(x) f(s)`; optionally rejects
/// non-injective extensions. Also returns the number of elements reached.
fn extend_checked(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    injective: bool,
) -> Option<(Vec<usize>, usize)> {
    let mut map = vec![UNSET; domain.order()];
    let mut hit = FixedBitSet::with_capacity(codomain.order());
    map[0] = 0;
    hit.insert(0);
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x];
        for (&s, &t) in gens.iter().zip(images) {
            let y = domain.mul(x, s);
            let fy = codomain.mul(fx, t);
            if map[y] == UNSET {
                if injective && hit.put(fy) {
                    return None;
                }
                map[y] = fy;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
        i += 1;
    }
    Some((map, queue.len()))
}

/// Depth-first search over generator images. Generators of the source are
/// chosen greedily (`Subgroup::generators`), candidates are filtered by
/// element order and conjugacy-class size, and every prefix assignment is
/// checked for consistency and injectivity before descending.
struct IsoSearch<'a> {
    src: &'a FiniteGroup,
    dst: &'a FiniteGroup,
    gens: Vec<usize>,
    candidates: Vec<Vec<usize>>,
}

impl<'a> IsoSearch<'a> {
    fn new(src: &'a Arc<FiniteGroup>, dst: &'a Arc<FiniteGroup>) -> Self {
        let gens = Subgroup::whole(src).generators();
        let candidates = gens
            .iter()
            .map(|&g| {
                let key = (src.element_order(g), src.class_size(g));
                (0..dst.order()).filter(|&y| (dst.element_order(y), dst.class_size(y)) == key).collect()
            })
            .collect();
        IsoSearch { src, dst, gens, candidates }
    }

    /// Calls `visit` on every isomorphism in lexicographic order of generator
    /// images; stops early when `visit` returns `false`.
    fn run(&self, visit: &mut dyn FnMut(Vec<usize>) -> bool) {
        let mut images = Vec::with_capacity(self.gens.len());
        self.descend(&mut images, visit);
    }

    fn descend(&self, images: &mut Vec<usize>, visit: &mut dyn FnMut(Vec<usize>) -> bool) -> bool {
        let level = images.len();
        if level == self.gens.len() {
            let (map, reached) =
                extend_checked(self.src, self.dst, &self.gens, images, true).expect("checked on the way down");
            debug_assert_eq!(reached, self.src.order());
            return visit(map);
        }
        for &c in &self.candidates[level] {
            images.push(c);
            let ok = extend_checked(self.src, self.dst, &self.gens[..=level], images, true).is_some();
            if ok && !self.descend(images, visit) {
                images.pop();
                return false;
            }
            images.pop();
        }
        true
    }
}

fn invariants_match(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.order() == b.order() && a.order_class_profile() == b.order_class_profile()
}

fn check_cap(g: &FiniteGroup, caps: &Caps) -> Result<()> {
    if g.order() > caps.max_iso_order {
        return Err(Error::OrderLimitExceeded { order: g.order(), cap: caps.max_iso_order });
    }
    Ok(())
}

/// Some isomorphism `a -> b`, if one exists.
pub fn isomorphism(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>, caps: &Caps) -> Result<Option<GroupHom>> {
    check_cap(a, caps)?;
    check_cap(b, caps)?;
    if !invariants_match(a, b) {
        return Ok(None);
    }
    let mut found = None;
    IsoSearch::new(a, b).run(&mut |map| {
        found = Some(map);
        false
    });
    Ok(found.map(|m| GroupHom::new_unchecked(Arc::clone(a), Arc::clone(b), m)))
}

pub fn is_isomorphic(a: &FiniteGroup, b: &FiniteGroup, caps: &Caps) -> Result<bool> {
    let a = Arc::new(a.clone());
    let b = Arc::new(b.clone());
    Ok(isomorphism(&a, &b, caps)?.is_some())
}

/// All automorphisms; the identity first, then the rest in lexicographic
/// order of generator images.
pub fn automorphisms(g: &Arc<FiniteGroup>, caps: &Caps) -> Result<Vec<GroupHom>> {
    check_cap(g, caps)?;
    let mut out = vec![GroupHom::identity(g)];
    IsoSearch::new(g, g).run(&mut |map| {
        if map.iter().enumerate().any(|(i, &y)| i != y) {
            out.push(GroupHom::new_unchecked(Arc::clone(g), Arc::clone(g), map));
        }
        true
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn isomorphism_examples() {
        let c4 = catalog::cyclic(4);
        let v4 = catalog::elementary_abelian(2, 2);
        let d8 = catalog::dihedral(8);
        let q8 = catalog::quaternion8();
        assert!(is_isomorphic(&d8, &d8, &caps()).unwrap());
        assert!(!is_isomorphic(&c4, &v4, &caps()).unwrap());
        assert!(!is_isomorphic(&d8, &q8, &caps()).unwrap());
        let s3_perm = catalog::symmetric(3);
        let d6 = catalog::dihedral(6);
        assert!(is_isomorphic(&s3_perm, &d6, &caps()).unwrap());
        let c6 = catalog::cyclic(6);
        let c2c3 = catalog::abelian(&[2, 3]);
        assert!(is_isomorphic(&c6, &c2c3, &caps()).unwrap());
    }

    #[test]
    fn d8_and_q8_differ_in_involution_count() {
        let d8 = catalog::dihedral(8);
        let q8 = catalog::quaternion8();
        let involutions = |g: &FiniteGroup| g.element_orders().iter().filter(|&&o| o == 2).count();
        // r^2 and four reflections against -1 alone
        assert_eq!(involutions(&d8), 5);
        assert_eq!(involutions(&q8), 1);
    }

    #[test]
    fn witness_is_a_bijective_homomorphism() {
        let a = Arc::new(catalog::symmetric(3));
        let b = Arc::new(catalog::dihedral(6));
        let iso = isomorphism(&a, &b, &caps()).unwrap().unwrap();
        assert!(iso.is_bijective());
        assert!(GroupHom::new(Arc::clone(&a), Arc::clone(&b), iso.images().to_vec()).is_ok());
    }

    #[test]
    fn automorphism_counts() {
        let v4 = Arc::new(catalog::elementary_abelian(2, 2));
        assert_eq!(automorphisms(&v4, &caps()).unwrap().len(), 6);
        let s3 = Arc::new(catalog::symmetric(3));
        let auts = automorphisms(&s3, &caps()).unwrap();
        assert_eq!(auts.len(), 6);
        assert!(auts[0].is_identity());
        let d8 = Arc::new(catalog::dihedral(8));
        assert_eq!(automorphisms(&d8, &caps()).unwrap().len(), 8);
        let q8 = Arc::new(catalog::quaternion8());
        assert_eq!(automorphisms(&q8, &caps()).unwrap().len(), 24);
        let a4 = Arc::new(catalog::alternating(4));
        assert_eq!(automorphisms(&a4, &caps()).unwrap().len(), 24);
        let c1 = Arc::new(catalog::cyclic(1));
        assert_eq!(automorphisms(&c1, &caps()).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let big = catalog::cyclic(65);
        let err = is_isomorphic(&big, &big, &caps()).unwrap_err();
        assert_eq!(err, Error::OrderLimitExceeded { order: 65, cap: 64 });
    }

    #[test]
    fn generator_extension() {
        let c4 = catalog::cyclic(4);
        let c2 = catalog::cyclic(2);
        // 1 -> 1 defines the reduction C4 -> C2
        let map = extend_generator_images(&c4, &c2, &[1], &[1]).unwrap();
        assert_eq!(map, vec![0, 1, 0, 1]);
        // C2 -> C4 with 1 -> 1 is inconsistent (order 2 to order 4)
        assert!(extend_generator_images(&c2, &c4, &[1], &[1]).is_none());
    }
}
