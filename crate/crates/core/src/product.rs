//! Direct products `G x H` and subgroups living in them.
//!
//! The pair `(g, h)` is encoded as the index `g * |H| + h`, so the identity
//! pair is index 0.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{same_group, FiniteGroup};
use crate::subgroup::Subgroup;

#[derive(Clone)]
pub struct ProductGroup {
    left: Arc<FiniteGroup>,
    right: Arc<FiniteGroup>,
    group: Arc<FiniteGroup>,
}

impl ProductGroup {
    pub fn new(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>, cap: usize) -> Result<Self> {
        let (n, m) = (left.order(), right.order());
        let order = n.saturating_mul(m);
        if order > cap {
            return Err(Error::OrderLimitExceeded { order, cap });
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let (g1, h1) = (a / m, a % m);
            for b in 0..order {
                let (g2, h2) = (b / m, b % m);
                table.push((left.mul(g1, g2) * m + right.mul(h1, h2)) as u32);
            }
        }
        let label = format!("{}x{}", left.label(), right.label());
        Ok(ProductGroup {
            left: Arc::clone(left),
            right: Arc::clone(right),
            group: Arc::new(FiniteGroup::from_table_unchecked(order, table, label)),
        })
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        &self.right
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn pair(&self, g: usize, h: usize) -> usize {
        g * self.right.order() + h
    }

    #[inline]
    pub fn unpair(&self, x: usize) -> (usize, usize) {
        (x / self.right.order(), x % self.right.order())
    }

    /// Both factors are the same group, so twisted diagonals make sense.
    pub fn is_square(&self) -> bool {
        same_group(&self.left, &self.right)
    }

    /// `A x B` for subgroups `A <= G`, `B <= H`.
    pub fn product_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        assert!(same_group(a.parent(), &self.left) && same_group(b.parent(), &self.right));
        let mut m = FixedBitSet::with_capacity(self.group.order());
        for &g in a.elements() {
            for &h in b.elements() {
                m.insert(self.pair(g, h));
            }
        }
        Subgroup::from_bits_unchecked(&self.group, m)
    }

    /// Subgroup generated by the given `(g, h)` pairs.
    pub fn generated_by_pairs(&self, pairs: &[(usize, usize)]) -> Result<Subgroup> {
        for &(g, h) in pairs {
            if g >= self.left.order() || h >= self.right.order() {
                return Err(Error::InvalidInput(format!("pair ({g}, {h}) out of range")));
            }
        }
        Ok(Subgroup::generated(&self.group, pairs.iter().map(|&(g, h)| self.pair(g, h))))
    }
}

impl fmt::Debug for ProductGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProductGroup({} x {})", self.left.label(), self.right.label())
    }
}

/// `p1(U), k1(U), p2(U), k2(U)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projections {
    pub p1: Subgroup,
    pub k1: Subgroup,
    pub p2: Subgroup,
    pub k2: Subgroup,
}

impl Projections {
    /// `(p_i, k_i)` for `i` in `{1, 2}`.
    pub fn side(&self, i: usize) -> (&Subgroup, &Subgroup) {
        match i {
            1 => (&self.p1, &self.k1),
            2 => (&self.p2, &self.k2),
            _ => panic!("side must be 1 or 2"),
        }
    }
}

/// A subgroup `U <= G x H` together with its ambient product.
#[derive(Clone, PartialEq, Eq)]
pub struct ProductSubgroup {
    product: ProductGroup,
    subgroup: Subgroup,
}

impl PartialEq for ProductGroup {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.left, &other.left) && same_group(&self.right, &other.right)
    }
}

impl Eq for ProductGroup {}

impl ProductSubgroup {
    pub fn new(product: &ProductGroup, subgroup: Subgroup) -> Self {
        assert!(same_group(subgroup.parent(), &product.group), "subgroup of a different group");
        ProductSubgroup { product: product.clone(), subgroup }
    }

    pub fn full(product: &ProductGroup) -> Self {
        ProductSubgroup::new(product, Subgroup::whole(&product.group))
    }

    pub fn product(&self) -> &ProductGroup {
        &self.product
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.subgroup.elements().iter().map(|&x| self.product.unpair(x))
    }

    pub fn contains_pair(&self, g: usize, h: usize) -> bool {
        self.subgroup.contains(self.product.pair(g, h))
    }

    pub fn projections_kernels(&self) -> Projections {
        let (g, h) = (&self.product.left, &self.product.right);
        let mut p1 = FixedBitSet::with_capacity(g.order());
        let mut k1 = FixedBitSet::with_capacity(g.order());
        let mut p2 = FixedBitSet::with_capacity(h.order());
        let mut k2 = FixedBitSet::with_capacity(h.order());
        for (a, b) in self.pairs() {
            p1.insert(a);
            p2.insert(b);
            if b == 0 {
                k1.insert(a);
            }
            if a == 0 {
                k2.insert(b);
            }
        }
        Projections {
            p1: Subgroup::from_bits_unchecked(g, p1),
            k1: Subgroup::from_bits_unchecked(g, k1),
            p2: Subgroup::from_bits_unchecked(h, p2),
            k2: Subgroup::from_bits_unchecked(h, k2),
        }
    }

    pub fn is_subdirect(&self) -> bool {
        let pk = self.projections_kernels();
        pk.p1.is_whole() && pk.p2.is_whole()
    }

    pub(crate) fn require_subdirect(&self) -> Result<Projections> {
        let pk = self.projections_kernels();
        if pk.p1.is_whole() && pk.p2.is_whole() {
            Ok(pk)
        } else {
            Err(Error::NotSubdirect {
                p1: pk.p1.order(),
                g: self.product.left.order(),
                p2: pk.p2.order(),
                h: self.product.right.order(),
            })
        }
    }

    /// `U'` as a subgroup of the same product.
    pub fn derived(&self) -> ProductSubgroup {
        ProductSubgroup::new(&self.product, crate::subgroup::derived(&self.subgroup))
    }
}

impl fmt::Debug for ProductSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ProductSubgroup(order {} in {}: {:?})",
            self.order(),
            self.product.group.label(),
            self.pairs().collect::<Vec<_>>()
        )
    }
}
