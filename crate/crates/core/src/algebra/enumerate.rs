use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::{Algebra, Kind, Obj};
use crate::error::{Error, Result};

/// Largest order enumerated unless a caller raises the bound explicitly.
pub const DEFAULT_ENUMERATION_BOUND: usize = 4;

fn key_under(a: &Algebra, perm: &[usize], inv: &[usize]) -> Vec<usize> {
    let n = a.order();
    let mut key = Vec::with_capacity(a.constants().len() + a.kind().arity() * n * n);
    key.extend(a.constants().iter().map(|&c| perm[c]));
    for k in 0..a.kind().arity() {
        for i in 0..n {
            for j in 0..n {
                key.push(perm[a.op(k, inv[i], inv[j])]);
            }
        }
    }
    key
}

fn apply_perm(a: &Algebra, perm: &[usize]) -> Algebra {
    let n = a.order();
    let mut inv = vec![0; n];
    for (x, &p) in perm.iter().enumerate() {
        inv[p] = x;
    }
    let key = key_under(a, perm, &inv);
    let c = a.constants().len();
    let ops = key[c..].chunks(n * n).map(|t| t.to_vec()).collect();
    Algebra::from_parts(a.kind(), n, ops, key[..c].to_vec())
}

/// Calls `visit` on every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// The isomorphic copy whose key (constants, then tables row-major) is
/// lexicographically least, with the relabelling that produces it.
///
/// All `n!` relabellings are scanned, so this is meant for small orders.
pub fn canonical_form(a: &Algebra) -> (Algebra, Vec<usize>) {
    let n = a.order();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut inv = vec![0; n];
    for_each_permutation(n, |perm| {
        for (x, &p) in perm.iter().enumerate() {
            inv[p] = x;
        }
        let key = key_under(a, perm, &inv);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, perm.to_vec()));
        }
    });
    let (_, perm) = best.expect("at least one permutation");
    let mut canon = apply_perm(a, &perm);
    canon.name = a.name.clone();
    (canon, perm)
}

fn canonical_key(a: &Algebra) -> Vec<usize> {
    let (c, _) = canonical_form(a);
    let mut key = c.constants().to_vec();
    for t in c.flat_ops() {
        key.extend_from_slice(t);
    }
    key
}

/// Partial-table associativity check over the defined cells.
fn partial_associative(n: usize, t: &[usize]) -> bool {
    const U: usize = usize::MAX;
    for a in 0..n {
        for b in 0..n {
            let ab = t[a * n + b];
            if ab == U {
                continue;
            }
            for c in 0..n {
                let bc = t[b * n + c];
                if bc == U {
                    continue;
                }
                let l = t[ab * n + c];
                let r = t[a * n + bc];
                if l != U && r != U && l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// Labelled monoid tables with unit 0 (commutative ones only if asked).
fn monoid_tables(n: usize, commutative: bool) -> Vec<Vec<usize>> {
    let mut t = vec![usize::MAX; n * n];
    for a in 0..n {
        t[a] = a;
        t[a * n] = a;
    }
    let cells: Vec<(usize, usize)> = (1..n)
        .flat_map(|a| (1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !commutative || a <= b)
        .collect();
    let mut out = Vec::new();
    fn go(
        n: usize,
        t: &mut Vec<usize>,
        cells: &[(usize, usize)],
        i: usize,
        commutative: bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == cells.len() {
            out.push(t.clone());
            return;
        }
        let (a, b) = cells[i];
        for v in 0..n {
            t[a * n + b] = v;
            if commutative {
                t[b * n + a] = v;
            }
            if partial_associative(n, t) {
                go(n, t, cells, i + 1, commutative, out);
            }
        }
        t[a * n + b] = usize::MAX;
        if commutative {
            t[b * n + a] = usize::MAX;
        }
    }
    go(n, &mut t, &cells, 0, commutative, &mut out);
    out
}

fn permutations_fixing(n: usize, fixed: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_permutation(n, |p| {
        if p[fixed] == fixed {
            out.push(p.to_vec());
        }
    });
    out.sort();
    out
}

fn quandle_tables(n: usize) -> Vec<Vec<usize>> {
    let columns: Vec<Vec<Vec<usize>>> = (0..n).map(|b| permutations_fixing(n, b)).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let mut t = vec![0; n * n];
        for b in 0..n {
            for a in 0..n {
                t[a * n + b] = columns[b][choice[b]][a];
            }
        }
        let distributive = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| t[t[a * n + b] * n + c] == t[t[a * n + c] * n + t[b * n + c]])
            })
        });
        if distributive {
            out.push(t);
        }
        let mut i = 0;
        while i < n {
            choice[i] += 1;
            if choice[i] < columns[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// Semiring table pairs with zero 0 and (for n > 1) one 1.
fn semiring_tables(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    if n == 1 {
        return vec![(vec![0], vec![0])];
    }
    let adds = monoid_tables(n, true);
    let free: Vec<(usize, usize)> = (2..n).flat_map(|a| (2..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for add in adds {
        let mut mul = vec![usize::MAX; n * n];
        for a in 0..n {
            mul[a] = 0;
            mul[a * n] = 0;
            mul[n + a] = a;
            mul[a * n + 1] = a;
        }
        let total = n.pow(free.len() as u32);
        for code in 0..total {
            let mut c = code;
            for &(a, b) in &free {
                mul[a * n + b] = c % n;
                c /= n;
            }
            if !partial_associative(n, &mul) {
                continue;
            }
            let distributive = (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|c| {
                        mul[a * n + add[b * n + c]] == add[mul[a * n + b] * n + mul[a * n + c]]
                            && mul[add[a * n + b] * n + c] == add[mul[a * n + c] * n + mul[b * n + c]]
                    })
                })
            });
            if distributive {
                out.push((add.clone(), mul.clone()));
            }
        }
    }
    out
}

fn labelled(kind: Kind, n: usize) -> Vec<Algebra> {
    match kind {
        Kind::Monoid => monoid_tables(n, false)
            .into_iter()
            .map(|t| Algebra::from_parts(kind, n, vec![t], vec![0]))
            .collect(),
        Kind::Quandle => quandle_tables(n)
            .into_iter()
            .map(|t| Algebra::from_parts(kind, n, vec![t], vec![]))
            .collect(),
        Kind::Semiring => semiring_tables(n)
            .into_iter()
            .map(|(add, mul)| {
                let one = usize::from(n > 1);
                Algebra::from_parts(kind, n, vec![add, mul], vec![0, one])
            })
            .collect(),
    }
}

type Cache = Mutex<HashMap<(Kind, usize), Vec<Algebra>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All algebras of order `n` up to isomorphism, as canonical forms sorted
/// by canonical key. Each is named `<kind><n>#<index>`.
pub fn enumerate_algebras(kind: Kind, n: usize) -> Result<Vec<Algebra>> {
    enumerate_algebras_bounded(kind, n, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_algebras_bounded(kind: Kind, n: usize, bound: usize) -> Result<Vec<Algebra>> {
    if n > bound {
        return Err(Error::BoundExceeded {
            what: format!("{kind:?} enumeration"),
            size: n,
            bound,
        });
    }
    if n == 0 {
        return Ok(vec![]);
    }
    if let Some(hit) = cache().lock().expect("cache lock").get(&(kind, n)) {
        return Ok(hit.clone());
    }
    let mut classes: BTreeMap<Vec<usize>, Algebra> = BTreeMap::new();
    for a in labelled(kind, n) {
        let key = canonical_key(&a);
        classes.entry(key).or_insert_with(|| canonical_form(&a).0);
    }
    let out: Vec<Algebra> = classes
        .into_values()
        .enumerate()
        .map(|(i, a)| a.named(format!("{}{n}#{i}", kind.short_name())))
        .collect();
    cache()
        .lock()
        .expect("cache lock")
        .insert((kind, n), out.clone());
    Ok(out)
}

/// The algebras of one signature of orders `1..=max_order`.
#[derive(Debug, Clone)]
pub struct Catalog {
    kind: Kind,
    by_order: Vec<Vec<Obj>>,
}

impl Catalog {
    pub fn new(kind: Kind, max_order: usize) -> Result<Catalog> {
        Catalog::with_bound(kind, max_order, DEFAULT_ENUMERATION_BOUND)
    }

    pub fn with_bound(kind: Kind, max_order: usize, bound: usize) -> Result<Catalog> {
        let by_order = (1..=max_order)
            .map(|n| {
                enumerate_algebras_bounded(kind, n, bound)
                    .map(|v| v.into_iter().map(Arc::new).collect())
            })
            .collect::<Result<_>>()?;
        Ok(Catalog { kind, by_order })
    }

    /// A catalog made of explicitly supplied algebras.
    pub fn from_algebras(kind: Kind, algebras: Vec<Obj>) -> Result<Catalog> {
        let max = algebras.iter().map(|a| a.order()).max().unwrap_or(0);
        let mut by_order = vec![Vec::new(); max];
        for a in algebras {
            if a.kind() != kind {
                return Err(Error::SignatureMismatch(format!("{:?} in a {kind:?} catalog", a.kind())));
            }
            by_order[a.order() - 1].push(a);
        }
        Ok(Catalog { kind, by_order })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn max_order(&self) -> usize {
        self.by_order.len()
    }

    pub fn of_order(&self, n: usize) -> &[Obj] {
        if n == 0 || n > self.by_order.len() {
            &[]
        } else {
            &self.by_order[n - 1]
        }
    }

    pub fn all(&self) -> Vec<Obj> {
        self.by_order.iter().flatten().cloned().collect()
    }

    pub fn up_to(&self, n: usize) -> Vec<Obj> {
        self.by_order.iter().take(n).flatten().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.by_order.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, is_isomorphic};

    #[test]
    fn monoid_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| enumerate_algebras(Kind::Monoid, n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 7, 35]);
    }

    #[test]
    fn quandle_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| enumerate_algebras(Kind::Quandle, n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 3, 7]);
    }

    #[test]
    fn order_two_monoids_are_z2_and_b() {
        let ms = enumerate_algebras(Kind::Monoid, 2).unwrap();
        assert_eq!(ms[0], fixtures::cyclic_group(2));
        assert_eq!(ms[1], fixtures::semilattice_b());
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_algebras(Kind::Monoid, 5),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn canonical_form_is_invariant() {
        let s3 = fixtures::symmetric_group_s3();
        let (c, perm) = canonical_form(&s3);
        assert!(c.revalidate().is_ok());
        let relabelled = apply_perm(&s3, &[5, 4, 3, 2, 1, 0]);
        assert_eq!(canonical_form(&relabelled).0, c);
        assert_eq!(apply_perm(&s3, &perm), c);
        assert!(is_isomorphic(&c.into_obj(), &s3.into_obj()));
    }

    #[test]
    fn catalog_members_are_pairwise_non_isomorphic() {
        for kind in [Kind::Monoid, Kind::Quandle, Kind::Semiring] {
            let cat = Catalog::new(kind, 3).unwrap();
            let all = cat.all();
            for (i, a) in all.iter().enumerate() {
                assert!(a.revalidate().is_ok(), "{a:?}");
                for b in &all[i + 1..] {
                    assert!(!is_isomorphic(a, b), "{a:?} ~ {b:?}");
                }
            }
        }
    }
}
