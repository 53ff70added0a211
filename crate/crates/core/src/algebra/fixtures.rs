//! Named small algebras used throughout tests, examples and the suite.

use super::{Algebra, Kind};
use crate::fault::{self, Fault};

fn table(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| f(a, b)).collect()
}

/// Deterministic cell corruption driven by a seed (SplitMix64 step).
fn corrupt(t: &mut [usize], n: usize, seed: u64) {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    let n64 = n as u64;
    let cell = (z % (n64 * n64)) as usize;
    let shift = 1 + ((z >> 32) % (n64 - 1)) as usize;
    t[cell] = (t[cell] + shift) % n;
}

/// The cyclic group `Z_n` written additively, as a monoid.
pub fn cyclic_group(n: usize) -> Algebra {
    assert!(n >= 1);
    let mut t = table(n, |a, b| (a + b) % n);
    if let Some(Fault::FixtureCell(seed)) = fault::current() {
        if n > 1 {
            corrupt(&mut t, n, seed);
        }
    }
    Algebra::from_parts(Kind::Monoid, n, vec![t], vec![0]).named(format!("Z{n}"))
}

/// `Z_2 × Z_2` with `(a, b)` encoded as `2a + b`.
pub fn klein_four() -> Algebra {
    Algebra::from_parts(Kind::Monoid, 4, vec![table(4, |a, b| a ^ b)], vec![0]).named("V4")
}

/// `Z_3 × Z_3` with `(a, b)` encoded as `3a + b`.
pub fn z3_squared() -> Algebra {
    let t = table(9, |x, y| 3 * ((x / 3 + y / 3) % 3) + (x % 3 + y % 3) % 3);
    Algebra::from_parts(Kind::Monoid, 9, vec![t], vec![0]).named("Z3xZ3")
}

/// Two-element meet semilattice: the unit is index 0, the absorbing element
/// index 1.
pub fn semilattice_b() -> Algebra {
    Algebra::from_parts(Kind::Monoid, 2, vec![vec![0, 1, 1, 1]], vec![0]).named("B")
}

/// `{0, .., cap}` under addition truncated at `cap`.
pub fn truncated_addition(cap: usize) -> Algebra {
    let n = cap + 1;
    Algebra::from_parts(Kind::Monoid, n, vec![table(n, |a, b| (a + b).min(cap))], vec![0])
        .named(format!("T{cap}"))
}

/// The symmetric group on three letters, elements listed in lexicographic
/// order of their one-line notation (index 0 is the identity).
pub fn symmetric_group_s3() -> Algebra {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
    let t = table(6, |a, b| {
        let (p, q) = (perms[a], perms[b]);
        index([p[q[0]], p[q[1]], p[q[2]]])
    });
    Algebra::from_parts(Kind::Monoid, 6, vec![t], vec![0]).named("S3")
}

/// Two left zeros `1, 2` (`x·y = x`) with an adjoined unit `0`; the
/// smallest non-commutative monoid.
pub fn left_zero_monoid() -> Algebra {
    let t = table(3, |a, b| if a == 0 { b } else { a });
    Algebra::from_parts(Kind::Monoid, 3, vec![t], vec![0]).named("L2+1")
}

/// Dihedral quandle `a ◁ b = 2b - a mod n`.
pub fn dihedral_quandle(n: usize) -> Algebra {
    let t = table(n, |a, b| (2 * b + n - a) % n);
    Algebra::from_parts(Kind::Quandle, n, vec![t], vec![]).named(format!("R{n}"))
}

/// Trivial quandle `a ◁ b = a`.
pub fn trivial_quandle(n: usize) -> Algebra {
    Algebra::from_parts(Kind::Quandle, n, vec![table(n, |a, _| a)], vec![]).named(format!("T{n}"))
}

/// The ring `Z/n`.
pub fn ring_zn(n: usize) -> Algebra {
    assert!(n >= 1);
    let one = 1 % n;
    Algebra::from_parts(
        Kind::Semiring,
        n,
        vec![table(n, |a, b| (a + b) % n), table(n, |a, b| (a * b) % n)],
        vec![0, one],
    )
    .named(format!("Z/{n}"))
}

/// The Boolean semiring `({0, 1}, or, and)`.
pub fn boolean_semiring() -> Algebra {
    Algebra::from_parts(
        Kind::Semiring,
        2,
        vec![table(2, |a, b| a | b), table(2, |a, b| a & b)],
        vec![0, 1],
    )
    .named("Bool")
}

/// The semiring `{0, 1, .., cap}` with addition and multiplication truncated at `cap`.
pub fn truncated_semiring(cap: usize) -> Algebra {
    let n = cap + 1;
    Algebra::from_parts(
        Kind::Semiring,
        n,
        vec![table(n, |a, b| (a + b).min(cap)), table(n, |a, b| (a * b).min(cap))],
        vec![0, 1 % n],
    )
    .named(format!("N{cap}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for a in [
            cyclic_group(1),
            cyclic_group(4),
            klein_four(),
            z3_squared(),
            semilattice_b(),
            truncated_addition(2),
            symmetric_group_s3(),
            left_zero_monoid(),
            dihedral_quandle(3),
            dihedral_quandle(4),
            trivial_quandle(2),
            ring_zn(4),
            boolean_semiring(),
            truncated_semiring(2),
        ] {
            assert!(a.revalidate().is_ok(), "{a:?}");
        }
        assert!(symmetric_group_s3().is_group());
        assert!(!symmetric_group_s3().is_commutative(0));
        assert!(!left_zero_monoid().is_commutative(0));
        assert!(dihedral_quandle(3).is_latin());
        assert!(!dihedral_quandle(4).is_latin());
    }

    #[test]
    fn fixture_fault_corrupts_cyclic_tables() {
        for seed in 0..20 {
            let bad = fault::with_fault(Some(Fault::FixtureCell(seed)), || cyclic_group(4));
            assert_ne!(bad, cyclic_group(4));
        }
    }
}
