//! Group descriptions: JSON objects with `name`, `kind` and `data`, or
//! shorthand strings on the command line.
//!
//! ```json
//! {"name": "C3", "kind": "cayley", "data": [[0,1,2],[1,2,0],[2,0,1]]}
//! {"name": "S3", "kind": "permutations", "data": {"degree": 3, "generators": ["(0 1 2)", [1,0,2]]}}
//! {"name": "D8", "kind": "preset", "data": {"id": "dihedral", "params": [8]}}
//! {"name": "D8xC2", "kind": "product", "data": {"left": {...}, "right": {...}}}
//! ```
//!
//! Permutations are accepted in cycle notation (`"(0 1 2)(3 4)"`, points
//! from 0) or as image lists (`[1, 2, 0]` sends `i` to `list[i]`).
//!
//! Shorthands: `C4`, `D8` (order 8), `Q8`, `S3`, `A4`, `V4`, `C2^3`,
//! `cyclic:4`, `dihedral:8`, `symmetric:3`, `alternating:4`, `quaternion8`,
//! `elementary_abelian:2:2`, products such as `C2xC2` or `D8xC2`, and paths
//! to JSON files holding a spec.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use subdirect_core::{catalog, Caps, Error, FiniteGroup, ProductGroup};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: GroupKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum GroupKind {
    Cayley(Vec<Vec<usize>>),
    Permutations {
        degree: usize,
        generators: Vec<Permutation>,
    },
    Preset {
        id: PresetId,
        #[serde(default)]
        params: Vec<usize>,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Permutation {
    Images(Vec<usize>),
    Cycles(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetId {
    Cyclic,
    Dihedral,
    Symmetric,
    Alternating,
    Quaternion8,
    ElementaryAbelian,
}

impl PresetId {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cyclic" => PresetId::Cyclic,
            "dihedral" => PresetId::Dihedral,
            "symmetric" => PresetId::Symmetric,
            "alternating" => PresetId::Alternating,
            "quaternion8" => PresetId::Quaternion8,
            "elementary_abelian" => PresetId::ElementaryAbelian,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            PresetId::Quaternion8 => 0,
            PresetId::ElementaryAbelian => 2,
            _ => 1,
        }
    }
}

impl GroupSpec {
    pub fn preset(name: impl Into<String>, id: PresetId, params: Vec<usize>) -> Self {
        GroupSpec { name: name.into(), kind: GroupKind::Preset { id, params } }
    }

    pub fn product(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec {
            name: format!("{}x{}", left.name, right.name),
            kind: GroupKind::Product { left: Box::new(left), right: Box::new(right) },
        }
    }

    /// A shorthand string, a JSON object, or a path to a JSON file.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        if s.ends_with(".json") || Path::new(s).is_file() {
            let text = std::fs::read_to_string(s).map_err(|e| CliError::io(s, e))?;
            return Ok(serde_json::from_str(&text)?);
        }
        let mut parts = s.split('x');
        let first = parse_atom(parts.next().unwrap_or(""))?;
        parts.try_fold(first, |acc, part| Ok(GroupSpec::product(acc, parse_atom(part)?)))
    }
}

fn number(s: &str, whole: &str) -> Result<usize> {
    s.parse().map_err(|_| CliError::parse(format!("bad number {s:?} in group {whole:?}")))
}

fn parse_atom(s: &str) -> Result<GroupSpec> {
    if s.is_empty() {
        return Err(CliError::parse("empty group name"));
    }
    if s.contains(':') || PresetId::parse(s).is_some() {
        let mut it = s.split(':');
        let id = it.next().unwrap_or("");
        let id = PresetId::parse(id).ok_or_else(|| CliError::parse(format!("unknown preset {id:?}")))?;
        let params = it.map(|p| number(p, s)).collect::<Result<Vec<_>>>()?;
        return Ok(GroupSpec::preset(s, id, params));
    }
    let spec = match s {
        "Q8" => GroupSpec::preset(s, PresetId::Quaternion8, vec![]),
        "V4" => GroupSpec::preset(s, PresetId::ElementaryAbelian, vec![2, 2]),
        _ => {
            let (head, rest) = s.split_at(1);
            let id = match head {
                "C" => PresetId::Cyclic,
                "D" => PresetId::Dihedral,
                "S" => PresetId::Symmetric,
                "A" => PresetId::Alternating,
                _ => return Err(CliError::parse(format!("unknown group {s:?}"))),
            };
            match (id, rest.split_once('^')) {
                (PresetId::Cyclic, Some((p, k))) => {
                    GroupSpec::preset(s, PresetId::ElementaryAbelian, vec![number(p, s)?, number(k, s)?])
                }
                (_, None) => GroupSpec::preset(s, id, vec![number(rest, s)?]),
                _ => return Err(CliError::parse(format!("unknown group {s:?}"))),
            }
        }
    };
    Ok(spec)
}

/// Cycle notation, points numbered from 0: `"(0 1 2)(3 4)"`, `"(0,1)"`, `"()"`.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut seen = vec![false; degree];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| CliError::parse(format!("bad cycle notation {s:?}")))?;
        let points = body
            .0
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| number(t, s))
            .collect::<Result<Vec<_>>>()?;
        for (i, &p) in points.iter().enumerate() {
            if p >= degree || std::mem::replace(&mut seen[p], true) {
                return Err(CliError::parse(format!("point {p} out of range or repeated in {s:?}")));
            }
            perm[p] = points[(i + 1) % points.len()];
        }
        rest = body.1.trim_start();
    }
    Ok(perm)
}

fn preset_group(id: PresetId, params: &[usize], caps: &Caps) -> Result<FiniteGroup> {
    if params.len() != id.arity() {
        return Err(CliError::parse(format!("preset {id:?} takes {} parameters, got {}", id.arity(), params.len())));
    }
    let bad = |msg: &str| Err(CliError::parse(format!("preset {id:?}: {msg}")));
    let cap = |order: Option<usize>| -> Result<()> {
        match order {
            Some(n) if n <= caps.max_perm_order => Ok(()),
            Some(n) => Err(Error::OrderLimitExceeded { order: n, cap: caps.max_perm_order }.into()),
            None => Err(Error::OrderLimitExceeded { order: usize::MAX, cap: caps.max_perm_order }.into()),
        }
    };
    let factorial = |n: usize| (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
    Ok(match id {
        PresetId::Cyclic => match params[0] {
            0 => return bad("order must be positive"),
            n => {
                cap(Some(n))?;
                catalog::cyclic(n)
            }
        },
        PresetId::Dihedral => match params[0] {
            n if n < 2 || n % 2 != 0 => return bad("order must be even and at least 2"),
            n => {
                cap(Some(n))?;
                catalog::dihedral(n)
            }
        },
        PresetId::Symmetric => {
            cap(factorial(params[0]))?;
            catalog::symmetric(params[0])
        }
        PresetId::Alternating => {
            cap(factorial(params[0]).map(|f| (f / 2).max(1)))?;
            catalog::alternating(params[0])
        }
        PresetId::Quaternion8 => catalog::quaternion8(),
        PresetId::ElementaryAbelian => {
            let (p, k) = (params[0], params[1]);
            if !subdirect_core::arith::is_prime(p) {
                return bad("first parameter must be prime");
            }
            cap(u32::try_from(k).ok().and_then(|k| p.checked_pow(k)))?;
            catalog::elementary_abelian(p, k)
        }
    })
}

/// Resolves a spec to a validated group labelled with the spec's name.
pub fn load_group(spec: &GroupSpec, caps: &Caps) -> Result<Arc<FiniteGroup>> {
    let g = match &spec.kind {
        GroupKind::Cayley(table) => FiniteGroup::from_cayley_table(table)?,
        GroupKind::Permutations { degree, generators } => {
            let gens = generators
                .iter()
                .map(|p| match p {
                    Permutation::Images(v) => Ok(v.clone()),
                    Permutation::Cycles(s) => parse_cycles(s, *degree),
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::from_permutation_generators(*degree, &gens, caps.max_perm_order)?
        }
        GroupKind::Preset { id, params } => preset_group(*id, params, caps)?,
        GroupKind::Product { left, right } => {
            let (l, r) = (load_group(left, caps)?, load_group(right, caps)?);
            let p = ProductGroup::new(&l, &r, caps.max_product_order)?;
            Arc::try_unwrap(Arc::clone(p.group())).unwrap_or_else(|g| (*g).clone())
        }
    };
    Ok(Arc::new(g.with_label(spec.name.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(s: &str) -> usize {
        load_group(&GroupSpec::parse(s).unwrap(), &Caps::default()).unwrap().order()
    }

    #[test]
    fn shorthands() {
        for (s, n) in [
            ("C1", 1),
            ("C4", 4),
            ("D8", 8),
            ("Q8", 8),
            ("S3", 6),
            ("A4", 12),
            ("V4", 4),
            ("C2^3", 8),
            ("cyclic:1", 1),
            ("symmetric:3", 6),
            ("elementary_abelian:2:2", 4),
            ("quaternion8", 8),
            ("C2xC3", 6),
            ("D8xD8", 64),
            ("C2xC2xC2", 8),
        ] {
            assert_eq!(order(s), n, "{s}");
        }
        for bad in ["", "X3", "C", "Cx", "dihedral:7", "cyclic:0", "elementary_abelian:4:2", "cyclic:2:3"] {
            let r = GroupSpec::parse(bad).and_then(|s| load_group(&s, &Caps::default()));
            assert!(r.is_err(), "{bad}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let spec = GroupSpec::parse("D8xC2").unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains(r#""kind":"product""#));
        assert_eq!(serde_json::from_str::<GroupSpec>(&text).unwrap(), spec);

        let perms =
            r#"{"name": "S3", "kind": "permutations", "data": {"degree": 3, "generators": ["(0 1 2)", [1, 0, 2]]}}"#;
        let spec = GroupSpec::parse(perms).unwrap();
        assert_eq!(load_group(&spec, &Caps::default()).unwrap().order(), 6);
        let back: GroupSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn cycles() {
        assert_eq!(parse_cycles("(0 1 2)(3 4)", 5).unwrap(), vec![1, 2, 0, 4, 3]);
        assert_eq!(parse_cycles("(0,1)", 3).unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_cycles("()", 2).unwrap(), vec![0, 1]);
        assert_eq!(parse_cycles("", 2).unwrap(), vec![0, 1]);
        assert!(parse_cycles("(0 1)(1 2)", 3).is_err());
        assert!(parse_cycles("(0 5)", 3).is_err());
        assert!(parse_cycles("0 1", 3).is_err());
    }

    #[test]
    fn quaternion_regular_representation() {
        // left multiplication by i and j on the element numbering of the Q8 preset
        let q = catalog::quaternion8();
        let gens: Vec<Permutation> =
            [2, 4].iter().map(|&g| Permutation::Images((0..8).map(|x| q.mul(g, x)).collect())).collect();
        let spec = GroupSpec { name: "Q8reg".into(), kind: GroupKind::Permutations { degree: 8, generators: gens } };
        assert_eq!(load_group(&spec, &Caps::default()).unwrap().order(), 8);
    }

    #[test]
    fn errors_and_caps() {
        let caps = Caps::default();
        let bad = GroupSpec { name: "bad".into(), kind: GroupKind::Cayley(vec![vec![0, 1], vec![1, 1]]) };
        assert!(matches!(load_group(&bad, &caps), Err(CliError::Core(Error::NotAGroup(_)))));
        let big = GroupSpec::parse("S8").unwrap();
        let err = load_group(&big, &caps).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let wide = GroupSpec::parse("S4xS4xC3").unwrap();
        assert_eq!(load_group(&wide, &caps).unwrap_err().exit_code(), 3);
    }
}
