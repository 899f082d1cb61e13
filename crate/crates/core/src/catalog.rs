//! Preset groups.
//!
//! Presets are built from explicit tables or permutation generators, so the
//! element numbering of each preset is fixed:
//!
//! - `cyclic(n)`: element `k` is `k mod n`.
//! - `dihedral(2n)`: element `i + n*j` is `r^i s^j` with `s r s = r^-1`; in
//!   particular index 1 is the rotation `r` and index `n` the reflection `s`.
//! - `quaternion8()`: `0 = 1, 1 = -1, 2 = i, 3 = -i, 4 = j, 5 = -j, 6 = k, 7 = -k`.
//! - `abelian(&[n1, n2, ...])`: mixed radix, first factor least significant.
//! - `symmetric(n)`, `alternating(n)`: breadth-first closure of permutation
//!   generators (`(0 1 .. n-1), (0 1)` and `(0 1 i)` for `i >= 2` respectively).

use crate::group::FiniteGroup;

fn from_fn(order: usize, label: String, mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            table.push(mul(a, b) as u32);
        }
    }
    FiniteGroup::from_table_unchecked(order, table, label)
}

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    from_fn(n, format!("C{n}"), |a, b| (a + b) % n)
}

/// Dihedral group of the given order (which must be even).
pub fn dihedral(order: usize) -> FiniteGroup {
    assert!(order >= 2 && order % 2 == 0, "dihedral order must be even");
    let n = order / 2;
    from_fn(order, format!("D{order}"), |a, b| {
        let (i, j) = (a % n, a / n);
        let (k, l) = (b % n, b / n);
        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        rot + n * ((j + l) % 2)
    })
}

pub fn quaternion8() -> FiniteGroup {
    // unit products: UNIT[u][v] = (sign flip, unit) for u*v with 1,i,j,k = 0..4
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    from_fn(8, "Q8".into(), |a, b| {
        let (u, su) = (a / 2, a % 2 == 1);
        let (v, sv) = (b / 2, b % 2 == 1);
        let (flip, w) = UNIT[u][v];
        2 * w + usize::from(su ^ sv ^ flip)
    })
}

/// Direct product of cyclic groups of the given orders.
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    assert!(orders.iter().all(|&n| n >= 1));
    let order: usize = orders.iter().product();
    let label = if orders.is_empty() {
        "C1".to_string()
    } else {
        orders.iter().map(|n| format!("C{n}")).collect::<Vec<_>>().join("x")
    };
    from_fn(order, label, |mut a, mut b| {
        let mut out = 0;
        let mut scale = 1;
        for &n in orders {
            out += ((a % n + b % n) % n) * scale;
            a /= n;
            b /= n;
            scale *= n;
        }
        out
    })
}

pub fn elementary_abelian(p: usize, k: usize) -> FiniteGroup {
    abelian(&vec![p; k]).with_label(format!("C{p}^{k}"))
}

pub fn symmetric(n: usize) -> FiniteGroup {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push((0..n).map(|i| (i + 1) % n).collect());
        if n >= 3 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
    }
    FiniteGroup::from_permutation_generators(n.max(1), &gens, usize::MAX)
        .expect("valid generators")
        .with_label(format!("S{n}"))
}

pub fn alternating(n: usize) -> FiniteGroup {
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|i| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = i;
            p[i] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutation_generators(n.max(1), &gens, usize::MAX)
        .expect("valid generators")
        .with_label(format!("A{n}"))
}

/// The groups the property scans run over by default:
/// `C2, C3, C4, C2^2, C6, S3, D8, Q8`.
pub fn small_catalog() -> Vec<FiniteGroup> {
    vec![cyclic(2), cyclic(3), cyclic(4), elementary_abelian(2, 2), cyclic(6), symmetric(3), dihedral(8), quaternion8()]
}

/// All abelian groups of order at most `max_order`, one per isomorphism type,
/// given by their invariant factors.
pub fn abelian_groups_up_to(max_order: usize) -> Vec<(Vec<usize>, FiniteGroup)> {
    fn chains(last: usize, prod: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        // each further invariant factor is a multiple of the previous one
        let mut d = last.max(2);
        while prod * d <= max {
            if d % last == 0 {
                cur.push(d);
                chains(d, prod * d, max, cur, out);
                cur.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    chains(1, 1, max_order, &mut Vec::new(), &mut out);
    out.sort_by_key(|c| (c.iter().product::<usize>(), c.clone()));
    out.into_iter()
        .map(|c| {
            let g = abelian(&c);
            (c, g)
        })
        .collect()
}
