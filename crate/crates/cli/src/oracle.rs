//! Direct, unoptimized re-computations used to cross-check the core
//! algorithms. Nothing here calls into the algorithm under test.

use std::collections::BTreeSet;

use sigma_lab::{Algebra, Hom, Kind};

/// Closure of `seed` by naive fixpoint over every operation and constant.
pub fn closure(a: &Algebra, seed: &[bool]) -> Vec<bool> {
    let n = a.order();
    let mut set = seed.to_vec();
    for &c in a.constants() {
        set[c] = true;
    }
    loop {
        let mut grew = false;
        for x in 0..n {
            for y in 0..n {
                if !(set[x] && set[y]) {
                    continue;
                }
                for k in 0..a.kind().arity() {
                    let z = a.op(k, x, y);
                    if !set[z] {
                        set[z] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return set;
        }
    }
}

pub fn is_closed(a: &Algebra, set: &[bool]) -> bool {
    a.constants().iter().all(|&c| set[c])
        && (0..a.order()).all(|x| {
            (0..a.order()).all(|y| !(set[x] && set[y]) || (0..a.kind().arity()).all(|k| set[a.op(k, x, y)]))
        })
}

/// Every subset of the carrier, as membership vectors.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

pub fn subalgebras(a: &Algebra) -> Vec<Vec<bool>> {
    subsets(a.order()).filter(|s| is_closed(a, s)).collect()
}

/// `R ∘ S = {(x, z) : x R y, y S z}`.
pub fn compose(r: &[(usize, usize)], s: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &(x, y) in r {
        for &(y2, z) in s {
            if y == y2 {
                out.insert((x, z));
            }
        }
    }
    out.into_iter().collect()
}

pub fn sorted(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let set: BTreeSet<_> = pairs.iter().copied().collect();
    set.into_iter().collect()
}

pub fn is_transitive(pairs: &[(usize, usize)]) -> bool {
    let set: BTreeSet<_> = pairs.iter().copied().collect();
    pairs
        .iter()
        .all(|&(x, y)| pairs.iter().filter(|p| p.0 == y).all(|&(_, z)| set.contains(&(x, z))))
}

/// Equivalence relation compatible with every operation.
pub fn is_congruence(a: &Algebra, pairs: &[(usize, usize)]) -> bool {
    let set: BTreeSet<_> = pairs.iter().copied().collect();
    let n = a.order();
    let equivalence = (0..n).all(|x| set.contains(&(x, x)))
        && pairs.iter().all(|&(x, y)| set.contains(&(y, x)))
        && is_transitive(pairs);
    equivalence
        && pairs.iter().all(|&(x, y)| {
            pairs.iter().all(|&(u, v)| (0..a.kind().arity()).all(|k| set.contains(&(a.op(k, x, u), a.op(k, y, v)))))
        })
}

/// Size of `{(b, c) : g(b) = f(c)}`.
pub fn pullback_size(g: &Hom, f: &Hom) -> usize {
    let (nb, nc) = (g.source().order(), f.source().order());
    (0..nb).map(|b| (0..nc).filter(|&c| g.apply(b) == f.apply(c)).count()).sum()
}

/// `f⁻¹(Y') ∪ s(Y)` generates `X` for every subalgebra `Y'` of `Y`.
pub fn is_strongly_split(f: &Hom, s: &Hom) -> bool {
    let (x, y) = (f.source(), f.target());
    subalgebras(y).into_iter().all(|sub| {
        let mut seed = vec![false; x.order()];
        for e in 0..x.order() {
            seed[e] = sub[f.apply(e)];
        }
        for e in 0..y.order() {
            seed[s.apply(e)] = true;
        }
        closure(x, &seed).iter().all(|&b| b)
    })
}

/// `(weakly Schreier, Schreier)` for a point of monoids or semirings:
/// `k -> k · s(y)` from the kernel `f⁻¹(f(0-constant))` onto the fiber over
/// `y` is surjective, respectively bijective, for every `y`.
pub fn schreier_classes(f: &Hom, s: &Hom) -> (bool, bool) {
    let (x, y) = (f.source(), f.target());
    let e = y.constants()[0];
    let kernel: Vec<usize> = (0..x.order()).filter(|&k| f.apply(k) == e).collect();
    let (mut weak, mut strict) = (true, true);
    for b in 0..y.order() {
        let sb = s.apply(b);
        let fiber: BTreeSet<usize> = (0..x.order()).filter(|&a| f.apply(a) == b).collect();
        let image: Vec<usize> = kernel.iter().map(|&k| x.op(0, k, sb)).collect();
        let reached: BTreeSet<usize> = image.iter().copied().collect();
        let onto = fiber.is_subset(&reached);
        weak &= onto;
        strict &= onto && reached.len() == image.len();
    }
    (weak, strict)
}

fn is_permutation(row: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for v in row {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Groups among monoids, rings among semirings, latin quandles.
pub fn expected_special(a: &Algebra) -> bool {
    let n = a.order();
    match a.kind() {
        Kind::Monoid => {
            let e = a.constants()[0];
            (0..n).all(|x| (0..n).any(|y| a.op(0, x, y) == e && a.op(0, y, x) == e))
        }
        Kind::Semiring => {
            let z = a.constants()[0];
            (0..n).all(|x| (0..n).any(|y| a.op(0, x, y) == z))
        }
        Kind::Quandle => (0..n).all(|x| is_permutation((0..n).map(|y| a.op(0, x, y)), n)),
    }
}

/// Normalized 2-cocycles `c: Z_n × Z_n -> Z_m` for the trivial action.
pub fn cocycles(n: usize, m: usize) -> Vec<Vec<usize>> {
    let free: Vec<(usize, usize)> = (1..n).flat_map(|g| (1..n).map(move |h| (g, h))).collect();
    let total = m.pow(free.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = vec![0; n * n];
        let mut rest = code;
        for &(g, h) in &free {
            c[g * n + h] = rest % m;
            rest /= m;
        }
        let ok = (0..n).all(|g| {
            (0..n).all(|h| {
                (0..n).all(|k| {
                    (c[h * n + k] + c[g * n + (h + k) % n]) % m == (c[(g + h) % n * n + k] + c[g * n + h]) % m
                })
            })
        });
        if ok {
            out.push(c);
        }
    }
    out
}

/// Least representative of `c + δφ` over normalized cochains `φ`.
pub fn cohomology_class(c: &[usize], n: usize, m: usize) -> Vec<usize> {
    let total = m.pow((n - 1) as u32);
    (0..total)
        .map(|code| {
            let mut phi = vec![0; n];
            let mut rest = code;
            for p in phi.iter_mut().skip(1) {
                *p = rest % m;
                rest /= m;
            }
            (0..n * n)
                .map(|i| {
                    let (g, h) = (i / n, i % n);
                    (c[i] + phi[g] + phi[h] + m - phi[(g + h) % n]) % m
                })
                .collect::<Vec<_>>()
        })
        .min()
        .expect("nonempty")
}

/// The group `Z_m ×_c Z_n` with `(a, g)(b, h) = (a + b + c(g, h), g + h)`,
/// element `(a, g)` at index `g * m + a`.
pub fn extension_group(c: &[usize], n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..n * m)
        .map(|x| {
            let (g, a) = (x / m, x % m);
            (0..n * m)
                .map(|y| {
                    let (h, b) = (y / m, y % m);
                    (g + h) % n * m + (a + b + c[g * n + h]) % m
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_of_cyclic_groups() {
        for (n, m, classes) in [(2, 2, 2), (3, 3, 3), (2, 3, 1)] {
            let set: BTreeSet<_> = cocycles(n, m).iter().map(|c| cohomology_class(c, n, m)).collect();
            assert_eq!(set.len(), classes, "H2(Z{n}, Z{m})");
        }
    }
}
