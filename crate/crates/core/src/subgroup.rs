//! Subgroups as sorted index sets with a bitset for membership.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{same_group, FiniteGroup};

#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    members: FixedBitSet,
}

/// Incremental closure: keeps a subgroup closed under right multiplication
/// by every generator added so far.
struct Closure<'a> {
    group: &'a FiniteGroup,
    members: FixedBitSet,
    elements: Vec<usize>,
    gens: Vec<usize>,
}

impl<'a> Closure<'a> {
    fn trivial(group: &'a FiniteGroup) -> Self {
        let mut members = FixedBitSet::with_capacity(group.order());
        members.insert(0);
        Closure { group, members, elements: vec![0], gens: Vec::new() }
    }

    fn from_subgroup(sub: &'a Subgroup, gens: Vec<usize>) -> Self {
        Closure { group: &sub.parent, members: sub.members.clone(), elements: sub.elements.clone(), gens }
    }

    fn add(&mut self, x: usize) {
        if self.members.contains(x) {
            return;
        }
        self.gens.push(x);
        let mut i = 0;
        while i < self.elements.len() {
            let y = self.elements[i];
            for &s in &self.gens {
                let z = self.group.mul(y, s);
                if !self.members.put(z) {
                    self.elements.push(z);
                }
            }
            i += 1;
        }
    }

    fn finish(mut self, parent: &Arc<FiniteGroup>) -> Subgroup {
        self.elements.sort_unstable();
        Subgroup { parent: Arc::clone(parent), elements: self.elements, members: self.members }
    }
}

impl Subgroup {
    pub(crate) fn from_bits_unchecked(parent: &Arc<FiniteGroup>, members: FixedBitSet) -> Self {
        let elements = members.ones().collect();
        Subgroup { parent: Arc::clone(parent), elements, members }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Closure::trivial(parent).finish(parent)
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        let mut members = FixedBitSet::with_capacity(parent.order());
        members.insert_range(..);
        Subgroup::from_bits_unchecked(parent, members)
    }

    /// Smallest subgroup containing `seed`.
    pub fn generated(parent: &Arc<FiniteGroup>, seed: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Closure::trivial(parent);
        for x in seed {
            assert!(x < parent.order(), "element {x} out of range");
            c.add(x);
        }
        c.finish(parent)
    }

    /// Validates that `elements` form a subgroup.
    pub fn from_elements(parent: &Arc<FiniteGroup>, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = parent.order();
        let mut members = FixedBitSet::with_capacity(n);
        for x in elements {
            if x >= n {
                return Err(Error::InvalidInput(format!("element {x} out of range for order {n}")));
            }
            members.insert(x);
        }
        if !members.contains(0) {
            return Err(Error::InvalidInput("subset does not contain the identity".into()));
        }
        let s = Subgroup::from_bits_unchecked(parent, members);
        for &a in &s.elements {
            for &b in &s.elements {
                if !s.members.contains(parent.mul(a, b)) {
                    return Err(Error::InvalidInput(format!("subset not closed: {a} * {b} escapes")));
                }
            }
        }
        Ok(s)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    fn check_parent(&self, other: &Subgroup) {
        assert!(same_group(&self.parent, &other.parent), "subgroups of different groups");
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.check_parent(other);
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        self.check_parent(other);
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        Subgroup::from_bits_unchecked(&self.parent, m)
    }

    /// Subgroup generated by both.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        self.check_parent(other);
        let mut c = Closure::from_subgroup(self, self.generators());
        for &x in &other.elements {
            c.add(x);
        }
        c.finish(&self.parent)
    }

    /// Subgroup generated by this one and `x`.
    pub fn join_element(&self, x: usize) -> Subgroup {
        let mut c = Closure::from_subgroup(self, self.generators());
        c.add(x);
        c.finish(&self.parent)
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn generators(&self) -> Vec<usize> {
        let orders = self.parent.element_orders();
        let mut candidates = self.elements.clone();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
        let mut c = Closure::trivial(&self.parent);
        for x in candidates {
            if c.elements.len() == self.order() {
                break;
            }
            c.add(x);
        }
        c.gens
    }

    pub fn normalizes(&self, g: usize) -> bool {
        self.elements.iter().all(|&x| self.contains(self.parent.conjugate(x, g)))
    }

    /// Normal in the whole parent group.
    pub fn is_normal(&self) -> bool {
        (0..self.parent.order()).all(|g| self.normalizes(g))
    }

    /// Normal in `ambient` (which must contain it).
    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        self.is_subset(ambient) && ambient.elements.iter().all(|&g| self.normalizes(g))
    }

    /// Image of this subgroup under the parent-group map `f`.
    pub(crate) fn map_into(&self, target: &Arc<FiniteGroup>, f: impl Fn(usize) -> usize) -> Subgroup {
        let mut m = FixedBitSet::with_capacity(target.order());
        for &x in &self.elements {
            m.insert(f(x));
        }
        Subgroup::from_bits_unchecked(target, m)
    }

    /// This subgroup as a group in its own right. Element `i` of the returned
    /// group is `self.elements()[i]`; in particular index 0 stays the identity.
    pub fn to_group(&self) -> Arc<FiniteGroup> {
        let n = self.order();
        let mut local = vec![usize::MAX; self.parent.order()];
        for (i, &x) in self.elements.iter().enumerate() {
            local[x] = i;
        }
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                table.push(local[self.parent.mul(a, b)] as u32);
            }
        }
        let label = format!("{}<{}>", self.parent.label(), n);
        Arc::new(FiniteGroup::from_table_unchecked(n, table, label))
    }

    /// Regards a subgroup of the parent contained in `self` as a subgroup of
    /// `self.to_group()`.
    pub fn localize(&self, inner: &Subgroup, local_group: &Arc<FiniteGroup>) -> Subgroup {
        assert!(inner.is_subset(self));
        let mut m = FixedBitSet::with_capacity(self.order());
        for &x in &inner.elements {
            m.insert(self.elements.binary_search(&x).expect("inner subset"));
        }
        Subgroup::from_bits_unchecked(local_group, m)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && same_group(&self.parent, &other.parent)
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {}: {:?})", self.order(), self.parent.label(), self.elements)
    }
}

/// `[X, Y]`: generated by all `x^-1 y^-1 x y` with `x` in `X`, `y` in `Y`.
pub fn mutual_commutator(x: &Subgroup, y: &Subgroup) -> Subgroup {
    x.check_parent(y);
    let g = &x.parent;
    let mut c = Closure::trivial(g);
    for &a in &x.elements {
        for &b in &y.elements {
            c.add(g.commutator(a, b));
        }
    }
    c.finish(g)
}

/// `G'`.
pub fn commutator_subgroup(g: &Arc<FiniteGroup>) -> Subgroup {
    let whole = Subgroup::whole(g);
    mutual_commutator(&whole, &whole)
}

/// The derived subgroup of a subgroup, as a subgroup of the same parent.
pub fn derived(x: &Subgroup) -> Subgroup {
    mutual_commutator(x, x)
}

pub fn center(g: &Arc<FiniteGroup>) -> Subgroup {
    let n = g.order();
    let gens = Subgroup::whole(g).generators();
    let mut m = FixedBitSet::with_capacity(n);
    for x in 0..n {
        if gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x)) {
            m.insert(x);
        }
    }
    Subgroup::from_bits_unchecked(g, m)
}

/// Smallest normal subgroup containing `seed`.
pub fn normal_closure(g: &Arc<FiniteGroup>, seed: impl IntoIterator<Item = usize>) -> Subgroup {
    let mut c = Closure::trivial(g);
    for x in seed {
        for h in 0..g.order() {
            c.add(g.conjugate(x, h));
        }
    }
    // conjugates of generators generate a normal subgroup
    c.finish(g)
}

/// A Sylow `p`-subgroup, grown from the trivial group by adjoining the first
/// (in index order) `p`-element that normalises the current `p`-subgroup
/// without lying in it. Trivial if `p` does not divide `|G|`.
pub fn sylow_subgroup(g: &Arc<FiniteGroup>, p: usize) -> Subgroup {
    let target = arith::p_part(g.order(), &[p]);
    let orders = g.element_orders();
    let mut current = Subgroup::trivial(g);
    while current.order() < target {
        let next = (0..g.order())
            .find(|&x| !current.contains(x) && arith::p_part(orders[x], &[p]) == orders[x] && current.normalizes(x))
            .expect("Sylow growth step always exists below full p-part");
        current = current.join_element(next);
    }
    current
}

pub fn is_cyclic_group(g: &FiniteGroup) -> bool {
    g.element_orders().iter().any(|&o| o == g.order())
}

pub fn is_cyclic(s: &Subgroup) -> bool {
    let orders = s.parent.element_orders();
    s.elements.iter().any(|&x| orders[x] == s.order())
}

/// All normal subgroups, sorted by order then elements.
pub fn normal_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let class_closures: Vec<Subgroup> = {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for class in &g.conjugacy_classes().classes {
            let n = normal_closure(g, class.iter().copied());
            if seen.insert(n.elements.clone()) {
                out.push(n);
            }
        }
        out
    };
    let mut found = vec![Subgroup::trivial(g)];
    let mut seen: HashSet<Vec<usize>> = found.iter().map(|s| s.elements.clone()).collect();
    let mut i = 0;
    while i < found.len() {
        for c in &class_closures {
            if c.is_subset(&found[i]) {
                continue;
            }
            let j = found[i].join(c);
            if seen.insert(j.elements.clone()) {
                found.push(j);
            }
        }
        i += 1;
    }
    sort_subgroups(&mut found);
    found
}

/// Every subgroup of `g`, sorted by order then elements. Each subgroup is a
/// join of cyclic subgroups, so breadth-first joining with cyclic subgroups
/// from the trivial group reaches all of them.
pub fn all_subgroups(g: &Arc<FiniteGroup>, cap: usize) -> Result<Vec<Subgroup>> {
    if g.order() > cap {
        return Err(Error::OrderLimitExceeded { order: g.order(), cap });
    }
    let mut cyclic_reps = Vec::new();
    {
        let mut seen = HashSet::new();
        for x in 1..g.order() {
            let c = Subgroup::generated(g, [x]);
            if seen.insert(c.elements) {
                cyclic_reps.push(x);
            }
        }
    }
    let mut found = vec![Subgroup::trivial(g)];
    let mut gens: Vec<Vec<usize>> = vec![Vec::new()];
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    seen.insert(found[0].members.clone());
    let mut i = 0;
    while i < found.len() {
        for &x in &cyclic_reps {
            if found[i].contains(x) {
                continue;
            }
            let mut c = Closure::from_subgroup(&found[i], gens[i].clone());
            c.add(x);
            if !seen.contains(&c.members) {
                seen.insert(c.members.clone());
                gens.push(c.gens.clone());
                found.push(c.finish(g));
            }
        }
        i += 1;
    }
    sort_subgroups(&mut found);
    Ok(found)
}

pub(crate) fn sort_subgroups(v: &mut [Subgroup]) {
    v.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
}
