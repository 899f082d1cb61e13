//! Finite groups stored as dense multiplication tables.
//!
//! Elements are the indices `0..order`; the identity is always index `0`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Size limits applied by constructions whose cost grows quickly with order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `|G x H|` a direct product may have.
    pub max_product_order: usize,
    /// Largest order accepted by isomorphism and automorphism searches.
    pub max_iso_order: usize,
    /// Largest closure produced from permutation generators.
    pub max_perm_order: usize,
    /// Largest group whose full subgroup lattice may be enumerated.
    pub max_lattice_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_product_order: 1296, max_iso_order: 64, max_perm_order: 20000, max_lattice_order: 144 }
    }
}

/// Above this order `from_cayley_table` switches from the full triple scan
/// to Light's test over a generating set.
const FULL_ASSOCIATIVITY_LIMIT: usize = 64;

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    label: String,
    element_orders: OnceLock<Vec<usize>>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Partition of a group into conjugacy classes.
#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    /// Class index of every element; classes are numbered by smallest member.
    pub class_of: Vec<usize>,
    /// Members of each class, ascending.
    pub classes: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from a table already known to satisfy the axioms with
    /// identity at index 0.
    pub(crate) fn from_table_unchecked(order: usize, table: Vec<u32>, label: String) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            let y = row.iter().position(|&z| z == 0).expect("Latin row");
            inverse[x] = y as u32;
        }
        FiniteGroup { order, table, inverse, label, element_orders: OnceLock::new(), classes: OnceLock::new() }
    }

    /// Validates a square Cayley table and normalises its identity to index 0.
    ///
    /// If the identity sits at index `e != 0`, indices `0` and `e` are swapped.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {r} has length {} but the table has {n} rows", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::NotAGroup(format!("row {r} contains out-of-range entry {bad}")));
            }
        }
        for r in 0..n {
            let mut seen = FixedBitSet::with_capacity(n);
            for c in 0..n {
                if seen.put(table[r][c]) {
                    return Err(Error::NotAGroup(format!(
                        "row {r} repeats entry {} (not a Latin square)",
                        table[r][c]
                    )));
                }
            }
        }
        for c in 0..n {
            let mut seen = FixedBitSet::with_capacity(n);
            for r in 0..n {
                if seen.put(table[r][c]) {
                    return Err(Error::NotAGroup(format!(
                        "column {c} repeats entry {} (not a Latin square)",
                        table[r][c]
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;

        let relabel = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }
        let group = FiniteGroup::from_table_unchecked(n, flat, format!("T{n}"));
        let failing = if n <= FULL_ASSOCIATIVITY_LIMIT {
            group.associativity_counterexample()
        } else {
            group.light_associativity_counterexample()
        };
        if let Some((a, b, c)) = failing {
            // report in the caller's labelling
            return Err(Error::NotAGroup(format!(
                "associativity fails for ({}, {}, {})",
                relabel(a),
                relabel(b),
                relabel(c)
            )));
        }
        for x in 0..n {
            let y = group.inv(x);
            if group.mul(y, x) != 0 {
                return Err(Error::NotAGroup(format!("element {} has no two-sided inverse", relabel(x))));
            }
        }
        Ok(group)
    }

    /// Closure of permutation generators under composition.
    ///
    /// The product `x * y` applies `x` first, then `y`. Elements are numbered
    /// in breadth-first order from the identity, trying generators in the
    /// order given.
    pub fn from_permutation_generators(degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::InvalidInput(format!("generator {i} has {} images for degree {degree}", g.len())));
            }
            let mut seen = FixedBitSet::with_capacity(degree);
            for &v in g {
                if v >= degree || seen.put(v) {
                    return Err(Error::InvalidInput(format!("generator {i} is not a bijection of 0..{degree}")));
                }
            }
        }
        let compose = |x: &[u32], y: &[u32]| -> Vec<u32> { x.iter().map(|&i| y[i as usize]).collect() };
        let gens: Vec<Vec<u32>> = gens.iter().map(|g| g.iter().map(|&v| v as u32).collect()).collect();

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let p = compose(&elements[i], g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::OrderLimitExceeded { order: elements.len() + 1, cap });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])] as u32;
            }
        }
        Ok(FiniteGroup::from_table_unchecked(n, table, format!("Perm{degree}[{n}]")))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// The table as nested rows, in this group's labelling.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn element_orders(&self) -> &[usize] {
        self.element_orders.get_or_init(|| {
            (0..self.order)
                .map(|x| {
                    let mut k = 1;
                    let mut y = x;
                    while y != 0 {
                        y = self.mul(y, x);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.element_orders()[x]
    }

    pub fn exponent(&self) -> usize {
        self.element_orders().iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for x in 0..n {
                if class_of[x] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = Vec::new();
                for g in 0..n {
                    let y = self.conjugate(x, g);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            ConjugacyClasses { class_of, classes }
        })
    }

    pub fn class_size(&self, x: usize) -> usize {
        let cc = self.conjugacy_classes();
        cc.classes[cc.class_of[x]].len()
    }

    /// Sorted multiset of `(element order, class size)` pairs; an isomorphism
    /// invariant used to prune searches.
    pub fn order_class_profile(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = (0..self.order).map(|x| (self.element_order(x), self.class_size(x))).collect();
        v.sort_unstable();
        v
    }

    /// Full `O(n^3)` scan; returns the first failing triple in index order.
    pub fn associativity_counterexample(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Light's test: `(x s) y = x (s y)` for all `x, y` and `s` in a set that
    /// generates the table as a magma.
    fn light_associativity_counterexample(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let mut reached = FixedBitSet::with_capacity(n);
        reached.insert(0);
        let mut list = vec![0usize];
        let mut gens = Vec::new();
        for candidate in 0..n {
            if reached.contains(candidate) {
                continue;
            }
            gens.push(candidate);
            // right-multiplication orbit of the identity under the generators
            let mut i = 0;
            while i < list.len() {
                for &s in &gens {
                    let z = self.mul(list[i], s);
                    if !reached.put(z) {
                        list.push(z);
                    }
                }
                i += 1;
            }
        }
        for &s in &gens {
            for x in 0..n {
                let xs = self.mul(x, s);
                for y in 0..n {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Some((x, s, y));
                    }
                }
            }
        }
        None
    }
}

impl PartialEq for FiniteGroup {
    /// Equal as labelled tables; the display label is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// True when both handles describe the same labelled group.
pub fn same_group(a: &std::sync::Arc<FiniteGroup>, b: &std::sync::Arc<FiniteGroup>) -> bool {
    std::sync::Arc::ptr_eq(a, b) || **a == **b
}
