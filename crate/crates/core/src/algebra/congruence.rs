use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::hom::subalgebra_inclusion;
use super::{Algebra, Hom, Obj};
use crate::error::{Error, Result};
use crate::fault::{self, Fault};

/// A congruence, stored as a canonical class labelling: classes are
/// numbered in order of their least element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    algebra: Obj,
    labels: Vec<usize>,
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.classes())
    }
}

fn normalize(labels: &[usize]) -> Vec<usize> {
    let mut renumber = vec![usize::MAX; labels.iter().max().map_or(0, |m| m + 1)];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if renumber[l] == usize::MAX {
                renumber[l] = next;
                next += 1;
            }
            renumber[l]
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl Congruence {
    pub fn identity(obj: &Obj) -> Congruence {
        Congruence {
            algebra: obj.clone(),
            labels: (0..obj.order()).collect(),
        }
    }

    pub fn total(obj: &Obj) -> Congruence {
        Congruence {
            algebra: obj.clone(),
            labels: vec![0; obj.order()],
        }
    }

    /// Kernel of a hom: `a ~ b` iff `h(a) = h(b)`.
    pub fn kernel(h: &Hom) -> Congruence {
        Congruence {
            algebra: h.source().clone(),
            labels: normalize(h.map()),
        }
    }

    /// Checks that `pairs` is reflexive, symmetric, transitive and
    /// compatible with the operations.
    pub fn from_pairs(obj: &Obj, pairs: &[(usize, usize)]) -> Result<Congruence> {
        let n = obj.order();
        let mut rel = vec![false; n * n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Shape(format!("pair ({a}, {b}) out of range")));
            }
            rel[a * n + b] = true;
        }
        let bad = |reason: &str, witness: Vec<usize>| Error::NotACongruence {
            reason: reason.to_string(),
            witness,
        };
        for a in 0..n {
            if !rel[a * n + a] {
                return Err(bad("not reflexive", vec![a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if rel[a * n + b] && !rel[b * n + a] {
                    return Err(bad("not symmetric", vec![a, b]));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !rel[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if rel[b * n + c] && !rel[a * n + c] {
                        return Err(bad("not transitive", vec![a, b, c]));
                    }
                }
            }
        }
        for k in 0..obj.kind().arity() {
            for a in 0..n {
                for b in 0..n {
                    if !rel[a * n + b] {
                        continue;
                    }
                    for c in 0..n {
                        for d in 0..n {
                            if rel[c * n + d] && !rel[obj.op(k, a, c) * n + obj.op(k, b, d)] {
                                return Err(bad("not compatible", vec![k, a, b, c, d]));
                            }
                        }
                    }
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| rel[a * n + b]).expect("reflexive")).collect();
        Ok(Congruence {
            algebra: obj.clone(),
            labels: normalize(&labels),
        })
    }

    /// The least congruence containing `pairs`.
    pub fn generated(obj: &Obj, pairs: impl IntoIterator<Item = (usize, usize)>) -> Congruence {
        let n = obj.order();
        let mut uf = UnionFind((0..n).collect());
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for (a, b) in pairs {
            if uf.union(a, b) {
                queue.push_back((a, b));
            }
        }
        // (a, b) identified implies every translate is identified
        while let Some((a, b)) = queue.pop_front() {
            for c in 0..n {
                for k in 0..obj.kind().arity() {
                    for (x, y) in [(obj.op(k, a, c), obj.op(k, b, c)), (obj.op(k, c, a), obj.op(k, c, b))] {
                        if uf.union(x, y) {
                            queue.push_back((x, y));
                        }
                    }
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|a| uf.find(a)).collect();
        Congruence {
            algebra: obj.clone(),
            labels: normalize(&labels),
        }
    }

    pub fn algebra(&self) -> &Obj {
        &self.algebra
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (a, &l) in self.labels.iter().enumerate() {
            out[l].push(a);
        }
        out
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.labels.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.contains(a, b))
            .collect()
    }

    pub fn pair_count(&self) -> usize {
        self.classes().iter().map(|c| c.len() * c.len()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.class_count() == self.labels.len()
    }

    pub fn is_total(&self) -> bool {
        self.class_count() <= 1
    }

    pub fn le(&self, other: &Congruence) -> bool {
        let n = self.labels.len();
        (0..n).all(|a| (0..n).all(|b| !self.contains(a, b) || other.contains(a, b)))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let n = self.labels.len();
        let labels: Vec<usize> = (0..n)
            .map(|a| self.labels[a] * n + other.labels[a])
            .collect();
        Congruence {
            algebra: self.algebra.clone(),
            labels: normalize(&labels),
        }
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        Congruence::generated(
            &self.algebra,
            self.pairs().into_iter().chain(other.pairs()),
        )
    }
}

/// A quotient algebra with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: Obj,
    pub projection: Hom,
}

/// Quotient by a congruence; class `i` of the quotient is the `i`-th class
/// in order of least elements.
pub fn congruence_quotient(obj: &Obj, theta: &Congruence) -> Result<Quotient> {
    if *theta.algebra != **obj {
        return Err(Error::ObjectMismatch("congruence lives on another algebra".into()));
    }
    let classes = theta.classes();
    let m = classes.len();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let ops = (0..obj.kind().arity())
        .map(|k| {
            let mut t = Vec::with_capacity(m * m);
            for &a in &reps {
                for &b in &reps {
                    t.push(theta.labels[obj.op(k, a, b)]);
                }
            }
            t
        })
        .collect();
    let constants = obj.constants().iter().map(|&c| theta.labels[c]).collect();
    let algebra = Arc::new(Algebra::from_parts(obj.kind(), m, ops, constants));
    let mut map = theta.labels.clone();
    if fault::active(Fault::QuotientMisroutes) {
        for class in &classes {
            if class.len() > 1 {
                map[*class.last().expect("nonempty")] = 0;
            }
        }
    }
    Ok(Quotient {
        projection: Hom::new_unchecked(obj.clone(), algebra.clone(), map),
        algebra,
    })
}

/// Validates a pair set as a congruence and forms the quotient.
pub fn quotient_by_pairs(obj: &Obj, pairs: &[(usize, usize)]) -> Result<Quotient> {
    let theta = Congruence::from_pairs(obj, pairs)?;
    congruence_quotient(obj, &theta)
}

/// All congruences, ordered by number of pairs and then by labelling.
///
/// The principal congruences are joined breadth-first until no new
/// congruence appears.
pub fn enumerate_congruences(obj: &Obj) -> Vec<Congruence> {
    let n = obj.order();
    let mut principal = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principal.insert(Congruence::generated(obj, [(a, b)]).labels);
        }
    }
    let principal: Vec<Vec<usize>> = principal.into_iter().collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let identity = Congruence::identity(obj);
    seen.insert(identity.labels.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(theta) = queue.pop_front() {
        for p in &principal {
            let other = Congruence {
                algebra: obj.clone(),
                labels: p.clone(),
            };
            if other.le(&theta) {
                continue;
            }
            let joined = theta.join(&other);
            if seen.insert(joined.labels.clone()) {
                queue.push_back(joined);
            }
        }
    }
    let mut out: Vec<Congruence> = seen
        .into_iter()
        .map(|labels| Congruence {
            algebra: obj.clone(),
            labels,
        })
        .collect();
    out.sort_by(|a, b| {
        a.pair_count()
            .cmp(&b.pair_count())
            .then_with(|| b.labels.cmp(&a.labels))
    });
    out
}

/// Factors `f` as a surjection onto its image followed by the inclusion.
pub fn image_factorization(f: &Hom) -> (Hom, Hom) {
    let image = f.image();
    let mono = subalgebra_inclusion(f.target(), &image).expect("hom images are subalgebras");
    let mut pos = vec![usize::MAX; f.target().order()];
    for (i, &m) in mono.map().iter().enumerate() {
        pos[m] = i;
    }
    let epi = Hom::new_unchecked(
        f.source().clone(),
        mono.source().clone(),
        f.map().iter().map(|&v| pos[v]).collect(),
    );
    (epi, mono)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, is_isomorphic};

    #[test]
    fn parity_quotient_of_z4() {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let parity: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|(a, b)| a % 2 == b % 2)
            .collect();
        let q = quotient_by_pairs(&z4, &parity).unwrap();
        assert_eq!(q.algebra.order(), 2);
        assert!(is_isomorphic(&q.algebra, &fixtures::cyclic_group(2).into_obj()));
        assert_eq!(q.projection.map(), &[0, 1, 0, 1]);
        assert!(q.projection.verify().is_ok());
    }

    #[test]
    fn identity_and_total_quotients() {
        let s3 = fixtures::symmetric_group_s3().into_obj();
        let q = congruence_quotient(&s3, &Congruence::identity(&s3)).unwrap();
        assert!(is_isomorphic(&q.algebra, &s3));
        let q = congruence_quotient(&s3, &Congruence::total(&s3)).unwrap();
        assert_eq!(q.algebra.order(), 1);
    }

    #[test]
    fn non_congruence_rejected() {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let mut pairs: Vec<(usize, usize)> = (0..4).map(|a| (a, a)).collect();
        pairs.extend([(0, 1), (1, 0)]);
        assert!(matches!(
            Congruence::from_pairs(&z4, &pairs),
            Err(Error::NotACongruence { .. })
        ));
    }

    #[test]
    fn congruences_of_small_groups() {
        // congruences of a group correspond to normal subgroups
        let z4 = fixtures::cyclic_group(4).into_obj();
        assert_eq!(enumerate_congruences(&z4).len(), 3);
        let s3 = fixtures::symmetric_group_s3().into_obj();
        assert_eq!(enumerate_congruences(&s3).len(), 3);
        let v4 = fixtures::klein_four().into_obj();
        assert_eq!(enumerate_congruences(&v4).len(), 5);
        let b = fixtures::semilattice_b().into_obj();
        let cs = enumerate_congruences(&b);
        assert_eq!(cs.len(), 2);
        assert!(cs[0].is_identity() && cs[1].is_total());
    }

    #[test]
    fn image_of_constant_map() {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let z2 = fixtures::cyclic_group(2).into_obj();
        let f = Hom::new(z4, z2, vec![0; 4]).unwrap();
        let (epi, mono) = image_factorization(&f);
        assert_eq!(epi.target().order(), 1);
        assert_eq!(mono.after(&epi).unwrap(), f);
    }
}
