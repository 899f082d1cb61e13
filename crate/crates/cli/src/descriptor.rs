//! U-descriptors: how a subgroup of `G x H` is named on the command line.
//!
//! | descriptor | subgroup |
//! |---|---|
//! | `full` | `G x H` |
//! | `diagonal` | `Δ(G)`, needs `G = H` |
//! | `center-diagonal` | `(Z(G) x 1) Δ(G)` |
//! | `derived-diagonal` | `(G' x 1) Δ(G)`, which equals `(G' x G') Δ(G)` |
//! | `normal-diagonal:3,5` | `(N x 1) Δ(G)`, `N` the normal closure of the listed elements |
//! | `pairs:1,0;0,2` | generated by the listed `(g, h)` pairs |
//! | `quintuple:{...}` or `quintuple:@file.json` | built from Goursat data |
//!
//! Quintuple JSON lists generators of each subgroup and the images of
//! generators of `p1` modulo `k1`:
//!
//! ```json
//! {"p1": [1, 2], "k1": [], "p2": [1, 2], "k2": [], "phi": [[1, 1], [2, 2]]}
//! ```

use serde::{Deserialize, Serialize};

use subdirect_core::goursat::{diagonal, subgroup_from_quintuple, GoursatQuintuple};
use subdirect_core::subgroup::{center, commutator_subgroup, normal_closure};
use subdirect_core::{Error, ProductGroup, ProductSubgroup, Subgroup};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuintupleSpec {
    pub p1: Vec<usize>,
    #[serde(default)]
    pub k1: Vec<usize>,
    pub p2: Vec<usize>,
    #[serde(default)]
    pub k2: Vec<usize>,
    pub phi: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Full,
    Diagonal,
    CenterDiagonal,
    DerivedDiagonal,
    NormalDiagonal(Vec<usize>),
    Pairs(Vec<(usize, usize)>),
    Quintuple(QuintupleSpec),
}

fn numbers(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::parse(format!("bad element index {t:?}"))))
        .collect()
}

impl Descriptor {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        Ok(match (head, arg) {
            ("full", None) => Descriptor::Full,
            ("diagonal", None) => Descriptor::Diagonal,
            ("center-diagonal", None) => Descriptor::CenterDiagonal,
            ("derived-diagonal", None) => Descriptor::DerivedDiagonal,
            ("normal-diagonal", Some(a)) => Descriptor::NormalDiagonal(numbers(a)?),
            ("pairs", Some(a)) => {
                let pairs = a
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| match numbers(t)?.as_slice() {
                        &[g, h] => Ok((g, h)),
                        _ => Err(CliError::parse(format!("expected a pair g,h, got {t:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Descriptor::Pairs(pairs)
            }
            ("quintuple", Some(a)) => {
                let text = match a.strip_prefix('@') {
                    Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?,
                    None => a.to_string(),
                };
                Descriptor::Quintuple(serde_json::from_str(&text)?)
            }
            _ => return Err(CliError::parse(format!("unknown subgroup descriptor {s:?}"))),
        })
    }

    /// The subgroup of `product` this descriptor names.
    pub fn resolve(&self, product: &ProductGroup) -> Result<ProductSubgroup> {
        let check = |elems: &[usize], order: usize| match elems.iter().find(|&&x| x >= order) {
            Some(x) => Err(CliError::parse(format!("element {x} out of range for a group of order {order}"))),
            None => Ok(()),
        };
        let over_diagonal = |n: Subgroup| -> Result<ProductSubgroup> {
            let d = diagonal(product)?;
            let nn = product.product_subgroup(&n, &Subgroup::trivial(product.right()));
            Ok(ProductSubgroup::new(product, d.subgroup().join(&nn)))
        };
        let (g, h) = (product.left(), product.right());
        match self {
            Descriptor::Full => Ok(ProductSubgroup::full(product)),
            Descriptor::Diagonal => Ok(diagonal(product)?),
            Descriptor::CenterDiagonal => over_diagonal(center(g)),
            Descriptor::DerivedDiagonal => over_diagonal(commutator_subgroup(g)),
            Descriptor::NormalDiagonal(elems) => {
                check(elems, g.order())?;
                over_diagonal(normal_closure(g, elems.iter().copied()))
            }
            Descriptor::Pairs(pairs) => {
                let (a, b): (Vec<usize>, Vec<usize>) = pairs.iter().copied().unzip();
                check(&a, g.order())?;
                check(&b, h.order())?;
                Ok(ProductSubgroup::new(product, product.generated_by_pairs(pairs)?))
            }
            Descriptor::Quintuple(q) => {
                check(&q.p1, g.order())?;
                check(&q.k1, g.order())?;
                check(&q.p2, h.order())?;
                check(&q.k2, h.order())?;
                let (a, b): (Vec<usize>, Vec<usize>) = q.phi.iter().copied().unzip();
                check(&a, g.order())?;
                check(&b, h.order())?;
                let quintuple = GoursatQuintuple::from_generator_images(
                    product,
                    Subgroup::generated(g, q.p1.iter().copied()),
                    Subgroup::generated(g, q.k1.iter().copied()),
                    Subgroup::generated(h, q.p2.iter().copied()),
                    Subgroup::generated(h, q.k2.iter().copied()),
                    &q.phi,
                )?;
                Ok(subgroup_from_quintuple(&quintuple))
            }
        }
    }
}

/// A descriptor that needs `G = H` on a non-square product.
pub fn require_square(product: &ProductGroup) -> Result<()> {
    if product.is_square() {
        Ok(())
    } else {
        Err(Error::FactorMismatch(format!(
            "diagonal descriptors need G = H, got {} and {}",
            product.left().label(),
            product.right().label()
        ))
        .into())
    }
}
