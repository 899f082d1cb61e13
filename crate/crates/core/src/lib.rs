//! Finite groups given by explicit Cayley tables, subgroups of direct products
//! described through Goursat quintuples, and exact criteria deciding whether
//! every homomorphism from a subdirect product `U <= G x H` into an abelian
//! coefficient group extends to all of `G x H`.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`], [`subgroup`], [`quotient`], [`hom`], [`abelian`]: table-based
//!   groups with subgroup, quotient, commutator, Sylow, abelianization and
//!   isomorphism machinery.
//! - [`product`], [`goursat`]: direct products, Goursat data, subdirect
//!   enumeration, the `*`-product and twisted diagonals.
//! - [`extensibility`]: the kernel/commutator criterion and the sufficient
//!   conditions built on top of it.
//! - [`oracle`]: brute-force enumeration of homomorphisms into cyclic groups,
//!   used as independent ground truth.
//! - [`catalog`]: preset groups (cyclic, dihedral, symmetric, ...).

pub mod abelian;
pub mod arith;
pub mod catalog;
pub mod error;
pub mod extensibility;
pub mod goursat;
pub mod group;
pub mod hom;
pub mod oracle;
pub mod product;
pub mod quotient;
pub mod subgroup;

pub use abelian::{abelianization, AbelianInvariants, Abelianization};
pub use error::{Error, Result};
pub use group::{Caps, FiniteGroup};
pub use hom::GroupHom;
pub use product::{ProductGroup, ProductSubgroup};
pub use quotient::Quotient;
pub use subgroup::Subgroup;
