//! Abelianization and invariant-factor decomposition of finite abelian groups.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::quotient::quotient_group;
use crate::subgroup::{commutator_subgroup, Subgroup};

/// Invariant factors `d1 | d2 | ... | dk`, each at least 2. Empty for the
/// trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianInvariants {
    divisors: Vec<usize>,
}

impl AbelianInvariants {
    pub fn new(divisors: Vec<usize>) -> Result<Self> {
        if divisors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidInput(format!("invariant factors must be >= 2: {divisors:?}")));
        }
        if divisors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidInput(format!("not a divisor chain: {divisors:?}")));
        }
        Ok(AbelianInvariants { divisors })
    }

    pub fn divisors(&self) -> &[usize] {
        &self.divisors
    }

    pub fn order(&self) -> usize {
        self.divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.divisors.len() <= 1
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.divisors)
    }
}

/// A basis of an abelian group adapted to its invariant factors, with the
/// coordinates of every element.
#[derive(Debug, Clone)]
pub struct AbelianDecomposition {
    pub invariants: AbelianInvariants,
    /// `basis[i]` has order `invariants.divisors()[i]`.
    pub basis: Vec<usize>,
    /// `coordinates[x][i]` is the exponent of `basis[i]` in `x`.
    pub coordinates: Vec<Vec<usize>>,
}

/// Decomposes an abelian group by repeatedly taking an element of maximal
/// order modulo the span of the basis found so far and lifting it to an
/// element of the same order.
pub fn decompose_abelian(g: &Arc<FiniteGroup>) -> Result<AbelianDecomposition> {
    if !g.is_abelian() {
        return Err(Error::InvalidInput(format!("{} is not abelian", g.label())));
    }
    let n = g.order();
    let orders = g.element_orders();
    let mut span = Subgroup::trivial(g);
    let mut found: Vec<(usize, usize)> = Vec::new();
    while span.order() < n {
        // order of x modulo the span
        let rel_order = |x: usize| {
            let mut k = 1;
            let mut y = x;
            while !span.contains(y) {
                y = g.mul(y, x);
                k += 1;
            }
            k
        };
        let (x, t) =
            (0..n).map(|x| (x, rel_order(x))).max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).expect("nonempty");
        let lift = span
            .elements()
            .iter()
            .map(|&s| g.mul(x, s))
            .find(|&y| orders[y] == t)
            .ok_or_else(|| Error::Inconsistent("no lift of maximal relative order".into()))?;
        found.push((lift, t));
        span = span.join_element(lift);
    }
    found.reverse();
    let divisors: Vec<usize> = found.iter().map(|&(_, t)| t).collect();
    let basis: Vec<usize> = found.iter().map(|&(b, _)| b).collect();
    let invariants = AbelianInvariants::new(divisors.clone())?;

    let mut coordinates = vec![Vec::new(); n];
    let mut assigned = 0;
    let mut digits = vec![0usize; basis.len()];
    loop {
        let x = digits.iter().zip(&basis).fold(0, |acc, (&c, &b)| g.mul(acc, g.pow(b, c)));
        if assigned > 0 && !coordinates[x].is_empty() {
            return Err(Error::Inconsistent("basis coordinates are not unique".into()));
        }
        coordinates[x] = digits.clone();
        assigned += 1;
        // mixed-radix increment
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < divisors[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    if assigned != n {
        return Err(Error::Inconsistent("basis does not span the group".into()));
    }
    Ok(AbelianDecomposition { invariants, basis, coordinates })
}

/// `G / G'` with projection and an adapted basis.
#[derive(Debug, Clone)]
pub struct Abelianization {
    pub invariants: AbelianInvariants,
    pub group: Arc<FiniteGroup>,
    pub projection: GroupHom,
    pub decomposition: AbelianDecomposition,
}

pub fn abelianization(g: &Arc<FiniteGroup>) -> Abelianization {
    let derived = commutator_subgroup(g);
    let (group, projection) = quotient_group(&derived).expect("derived subgroup is normal");
    let decomposition = decompose_abelian(&group).expect("G/G' is abelian");
    Abelianization { invariants: decomposition.invariants.clone(), group, projection, decomposition }
}
