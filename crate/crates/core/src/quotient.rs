//! Quotients `P / K` of a subgroup `P` by a subgroup `K` normal in `P`.
//!
//! Cosets are numbered in increasing order of their minimal element, which is
//! also the coset representative; the identity coset is therefore index 0.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::subgroup::Subgroup;

const OUTSIDE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct Quotient {
    group: Arc<FiniteGroup>,
    ambient: Subgroup,
    kernel: Subgroup,
    coset_of: Vec<usize>,
    representatives: Vec<usize>,
}

impl Quotient {
    pub fn new(ambient: &Subgroup, kernel: &Subgroup) -> Result<Self> {
        if !kernel.is_subset(ambient) {
            return Err(Error::InvalidInput("kernel is not contained in the ambient subgroup".into()));
        }
        if !kernel.is_normal_in(ambient) {
            return Err(Error::NotNormal { order: kernel.order(), ambient: ambient.order() });
        }
        let g = ambient.parent();
        let mut coset_of = vec![OUTSIDE; g.order()];
        let mut representatives = Vec::with_capacity(ambient.order() / kernel.order());
        for &x in ambient.elements() {
            if coset_of[x] != OUTSIDE {
                continue;
            }
            let id = representatives.len();
            representatives.push(x);
            for &k in kernel.elements() {
                coset_of[g.mul(x, k)] = id;
            }
        }
        let n = representatives.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &representatives {
            for &b in &representatives {
                table.push(coset_of[g.mul(a, b)] as u32);
            }
        }
        let label = if ambient.is_whole() {
            format!("{}/{}", g.label(), kernel.order())
        } else {
            format!("{}<{}>/{}", g.label(), ambient.order(), kernel.order())
        };
        Ok(Quotient {
            group: Arc::new(FiniteGroup::from_table_unchecked(n, table, label)),
            ambient: ambient.clone(),
            kernel: kernel.clone(),
            coset_of,
            representatives,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// Coset index of a parent element, or `None` outside the ambient subgroup.
    pub fn project(&self, x: usize) -> Option<usize> {
        match self.coset_of[x] {
            OUTSIDE => None,
            c => Some(c),
        }
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.representatives[coset]
    }

    /// Image of a subgroup of the ambient subgroup.
    pub fn image(&self, s: &Subgroup) -> Subgroup {
        assert!(s.is_subset(&self.ambient));
        s.map_into(&self.group, |x| self.coset_of[x])
    }

    /// Full preimage in the parent group of a subgroup of the quotient.
    pub fn preimage(&self, s: &Subgroup) -> Subgroup {
        let g = self.ambient.parent();
        let mut m = FixedBitSet::with_capacity(g.order());
        for &x in self.ambient.elements() {
            if s.contains(self.coset_of[x]) {
                m.insert(x);
            }
        }
        Subgroup::from_bits_unchecked(g, m)
    }

    /// The canonical projection, when the ambient subgroup is the whole group.
    pub fn projection(&self) -> Option<GroupHom> {
        if !self.ambient.is_whole() {
            return None;
        }
        Some(GroupHom::new_unchecked(Arc::clone(self.ambient.parent()), Arc::clone(&self.group), self.coset_of.clone()))
    }
}

/// `G / N` with its canonical projection.
pub fn quotient_group(normal: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    let q = Quotient::new(&Subgroup::whole(normal.parent()), normal)?;
    let proj = q.projection().expect("ambient is whole");
    Ok((q.group, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hom::is_isomorphic;
    use crate::subgroup::{center, commutator_subgroup};
    use crate::Caps;

    #[test]
    fn examples() {
        let s3 = Arc::new(catalog::symmetric(3));
        let (q, _) = quotient_group(&Subgroup::whole(&s3)).unwrap();
        assert_eq!(q.order(), 1);
        let (q, proj) = quotient_group(&commutator_subgroup(&s3)).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.apply(0), 0);

        let d8 = Arc::new(catalog::dihedral(8));
        let (q, _) = quotient_group(&center(&d8)).unwrap();
        assert_eq!(q.order(), 4);
        let v4 = catalog::elementary_abelian(2, 2);
        assert!(is_isomorphic(&q, &v4, &Caps::default()).unwrap());
    }

    #[test]
    fn not_normal() {
        let s3 = Arc::new(catalog::symmetric(3));
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let err = quotient_group(&Subgroup::generated(&s3, [t])).unwrap_err();
        assert_eq!(err, Error::NotNormal { order: 2, ambient: 6 });
    }

    #[test]
    fn representatives_are_minimal() {
        let d8 = Arc::new(catalog::dihedral(8));
        let z = center(&d8);
        let q = Quotient::new(&Subgroup::whole(&d8), &z).unwrap();
        for c in 0..q.group().order() {
            let rep = q.representative(c);
            let min = (0..8).filter(|&x| q.project(x) == Some(c)).min().unwrap();
            assert_eq!(rep, min);
        }
        assert_eq!(q.preimage(&Subgroup::trivial(q.group())), z);
    }
}
