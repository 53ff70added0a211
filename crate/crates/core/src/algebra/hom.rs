use std::fmt;
use std::sync::Arc;

use super::{Algebra, Obj};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fault::{self, Fault};

/// A structure-preserving map, tabulated on the source carrier.
#[derive(Clone)]
pub struct Hom {
    source: Obj,
    target: Obj,
    map: Vec<usize>,
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.source == other.source && self.target == other.target
    }
}

impl Eq for Hom {}

impl fmt::Debug for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} {:?}",
            self.source.label(),
            self.target.label(),
            self.map
        )
    }
}

fn check_preserves(source: &Algebra, target: &Algebra, map: &[usize]) -> Result<()> {
    if !fault::active(Fault::HomIgnoresConstants) {
        for (i, (&c, &d)) in source.constants().iter().zip(target.constants()).enumerate() {
            if map[c] != d {
                return Err(Error::NotAHom(format!(
                    "constant {i}: h({c}) = {} but target constant is {d}",
                    map[c]
                )));
            }
        }
    }
    let n = source.order();
    for k in 0..source.kind().arity() {
        for a in 0..n {
            for b in 0..n {
                let lhs = map[source.op(k, a, b)];
                let rhs = target.op(k, map[a], map[b]);
                if lhs != rhs {
                    return Err(Error::NotAHom(format!(
                        "operation {k} at ({a}, {b}): h(a*b) = {lhs}, h(a)*h(b) = {rhs}"
                    )));
                }
            }
        }
    }
    Ok(())
}

impl Hom {
    /// Checks that `map` preserves every operation and constant.
    pub fn new(source: Obj, target: Obj, map: Vec<usize>) -> Result<Hom> {
        if source.kind() != target.kind() {
            return Err(Error::SignatureMismatch(format!(
                "{:?} -> {:?}",
                source.kind(),
                target.kind()
            )));
        }
        if map.len() != source.order() {
            return Err(Error::Shape(format!(
                "map has length {}, source has order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some((i, &v)) = map.iter().enumerate().find(|(_, &v)| v >= target.order()) {
            return Err(Error::Shape(format!(
                "map[{i}] = {v} out of range 0..{}",
                target.order()
            )));
        }
        check_preserves(&source, &target, &map)?;
        Ok(Hom {
            source,
            target,
            map,
        })
    }

    /// For maps that are homs by construction.
    pub(crate) fn new_unchecked(source: Obj, target: Obj, map: Vec<usize>) -> Hom {
        debug_assert_eq!(map.len(), source.order());
        Hom {
            source,
            target,
            map,
        }
    }

    pub fn identity(obj: &Obj) -> Hom {
        Hom::new_unchecked(obj.clone(), obj.clone(), (0..obj.order()).collect())
    }

    /// The unique map into a one-element algebra.
    pub fn terminal(obj: &Obj, terminal: &Obj) -> Hom {
        debug_assert_eq!(terminal.order(), 1);
        Hom::new_unchecked(obj.clone(), terminal.clone(), vec![0; obj.order()])
    }

    pub fn source(&self) -> &Obj {
        &self.source
    }

    pub fn target(&self) -> &Obj {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Re-runs the homomorphism check.
    pub fn verify(&self) -> Result<()> {
        check_preserves(&self.source, &self.target, &self.map)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Hom) -> Result<Hom> {
        if *first.target != *self.source {
            return Err(Error::ObjectMismatch(format!(
                "cannot compose {self:?} after {first:?}"
            )));
        }
        Ok(Hom::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            first.map.iter().map(|&a| self.map[a]).collect(),
        ))
    }

    pub fn image(&self) -> BitSet {
        BitSet::from_indices(self.target.order(), self.map.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BitSet::new(self.target.order());
        self.map.iter().all(|&v| seen.insert(v))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full()
    }

    pub fn is_iso(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    /// Inverse of a bijective hom.
    pub fn inverse(&self) -> Result<Hom> {
        if !self.is_iso() {
            return Err(Error::NotMono(format!("{self:?} is not bijective")));
        }
        let mut inv = vec![0; self.target.order()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Ok(Hom::new_unchecked(self.target.clone(), self.source.clone(), inv))
    }

    /// Elements of the source mapped to `b`.
    pub fn fiber(&self, b: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&a| self.map[a] == b).collect()
    }

    pub fn preimage(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.source.order(),
            (0..self.map.len()).filter(|&a| set.contains(self.map[a])),
        )
    }
}

/// The subalgebra on `set` together with its inclusion.
pub fn subalgebra_inclusion(obj: &Obj, set: &BitSet) -> Result<Hom> {
    if !obj.is_closed(set) {
        return Err(Error::NotClosed(format!("{set:?} in {}", obj.label())));
    }
    let members = set.to_vec();
    let mut pos = vec![usize::MAX; obj.order()];
    for (i, &m) in members.iter().enumerate() {
        pos[m] = i;
    }
    let m = members.len();
    let ops = (0..obj.kind().arity())
        .map(|k| {
            let mut t = Vec::with_capacity(m * m);
            for &a in &members {
                for &b in &members {
                    t.push(pos[obj.op(k, a, b)]);
                }
            }
            t
        })
        .collect();
    let constants = obj.constants().iter().map(|&c| pos[c]).collect();
    let sub = Arc::new(Algebra::from_parts(obj.kind(), m, ops, constants));
    Ok(Hom::new_unchecked(sub, obj.clone(), members))
}

/// Restrictions on the maps returned by [`enumerate_homs`].
#[derive(Debug, Clone, Default)]
pub struct HomConstraints {
    /// Pairs `(a, b)` forcing `h(a) = b`.
    pub fixed: Vec<(usize, usize)>,
    pub injective: bool,
    pub surjective: bool,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
    /// Only map elements to targets with the same isomorphism invariants.
    pub signature_pruning: bool,
}

struct Search<'a> {
    a: &'a Algebra,
    b: &'a Algebra,
    map: Vec<Option<usize>>,
    assigned: Vec<usize>,
    used: Vec<usize>,
    constraints: &'a HomConstraints,
    generators: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Assigns `h(x) = v` and propagates over all assigned pairs. Returns
    /// false on a conflict; the caller rolls back to its trail mark.
    fn assign(&mut self, x: usize, v: usize) -> bool {
        let mut queue = vec![(x, v)];
        while let Some((x, v)) = queue.pop() {
            match self.map[x] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            if self.constraints.injective {
                if self.used[v] != usize::MAX {
                    return false;
                }
                self.used[v] = x;
            }
            self.map[x] = Some(v);
            self.assigned.push(x);
            let count = self.assigned.len();
            for i in 0..count {
                let y = self.assigned[i];
                let hy = self.map[y].expect("assigned");
                for k in 0..self.a.kind().arity() {
                    queue.push((self.a.op(k, x, y), self.b.op(k, v, hy)));
                    queue.push((self.a.op(k, y, x), self.b.op(k, hy, v)));
                }
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().expect("nonempty");
            if let Some(v) = self.map[x].take() {
                if self.constraints.injective {
                    self.used[v] = usize::MAX;
                }
            }
        }
    }

    fn done(&self) -> bool {
        self.constraints
            .limit
            .is_some_and(|limit| self.out.len() >= limit)
    }

    fn run(&mut self, depth: usize) {
        if self.done() {
            return;
        }
        if depth == self.generators.len() {
            let map: Vec<usize> = self
                .map
                .iter()
                .map(|v| v.expect("generators generate"))
                .collect();
            if self.constraints.surjective {
                let mut seen = BitSet::new(self.b.order());
                for &v in &map {
                    seen.insert(v);
                }
                if !seen.is_full() {
                    return;
                }
            }
            self.out.push(map);
            return;
        }
        let g = self.generators[depth];
        if self.map[g].is_some() {
            self.run(depth + 1);
            return;
        }
        for i in 0..self.candidates[depth].len() {
            let v = self.candidates[depth][i];
            let mark = self.assigned.len();
            if self.assign(g, v) {
                self.run(depth + 1);
            }
            self.rollback(mark);
            if self.done() {
                return;
            }
        }
    }
}

/// All homs `A -> B` satisfying `constraints`, in lexicographic order of
/// the images of the generators.
///
/// Constants and fixed pairs are assigned first; a greedy generating set of
/// `A` over them is then backtracked, propagating every assignment through
/// the operation tables.
pub fn enumerate_homs(a: &Obj, b: &Obj, constraints: &HomConstraints) -> Result<Vec<Hom>> {
    if a.kind() != b.kind() {
        return Err(Error::SignatureMismatch(format!(
            "{:?} -> {:?}",
            a.kind(),
            b.kind()
        )));
    }
    if b.order() == 0 {
        return Ok(if a.order() == 0 {
            vec![Hom::new_unchecked(a.clone(), b.clone(), vec![])]
        } else {
            vec![]
        });
    }
    let mut search = Search {
        a,
        b,
        map: vec![None; a.order()],
        assigned: Vec::new(),
        used: vec![usize::MAX; b.order()],
        constraints,
        generators: Vec::new(),
        candidates: Vec::new(),
        out: Vec::new(),
    };
    let mut base = BitSet::new(a.order());
    let ignore_constants = fault::active(Fault::HomIgnoresConstants);
    if !ignore_constants {
        for (&c, &d) in a.constants().iter().zip(b.constants()) {
            if !search.assign(c, d) {
                return Ok(vec![]);
            }
        }
    }
    for &(x, v) in &constraints.fixed {
        if x >= a.order() || v >= b.order() {
            return Err(Error::Shape(format!("fixed pair ({x}, {v}) out of range")));
        }
        if !search.assign(x, v) {
            return Ok(vec![]);
        }
    }
    for &x in &search.assigned {
        base.insert(x);
    }
    let generators = if ignore_constants {
        // without constants the closure of the base may not contain them
        let mut gens = Vec::new();
        let mut current = base.clone();
        for x in 0..a.order() {
            if !current.contains(x) {
                gens.push(x);
                current.insert(x);
                current = closure_without_constants(a, &current);
            }
        }
        gens
    } else {
        a.generators_over(&base)
    };
    let signatures_b: Vec<Vec<usize>> = if constraints.signature_pruning {
        (0..b.order()).map(|y| b.element_signature(y)).collect()
    } else {
        vec![]
    };
    search.candidates = generators
        .iter()
        .map(|&g| {
            if constraints.signature_pruning {
                let sig = a.element_signature(g);
                (0..b.order()).filter(|&y| signatures_b[y] == sig).collect()
            } else {
                (0..b.order()).collect()
            }
        })
        .collect();
    search.generators = generators;
    search.run(0);
    Ok(search
        .out
        .into_iter()
        .map(|map| Hom::new_unchecked(a.clone(), b.clone(), map))
        .collect())
}

fn closure_without_constants(a: &Algebra, seed: &BitSet) -> BitSet {
    let mut set = seed.clone();
    loop {
        let members = set.to_vec();
        let mut grew = false;
        for &x in &members {
            for &y in &members {
                for k in 0..a.kind().arity() {
                    grew |= set.insert(a.op(k, x, y));
                }
            }
        }
        if !grew {
            return set;
        }
    }
}

pub fn find_isomorphism(a: &Obj, b: &Obj) -> Option<Hom> {
    if a.kind() != b.kind() || a.order() != b.order() {
        return None;
    }
    let constraints = HomConstraints {
        injective: true,
        limit: Some(1),
        signature_pruning: true,
        ..Default::default()
    };
    enumerate_homs(a, b, &constraints)
        .ok()
        .and_then(|mut v| v.pop())
}

pub fn is_isomorphic(a: &Obj, b: &Obj) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, Kind};

    #[test]
    fn homs_z2_z2() {
        let z2 = fixtures::cyclic_group(2).into_obj();
        let homs = enumerate_homs(&z2, &z2, &HomConstraints::default()).unwrap();
        let maps: Vec<_> = homs.iter().map(|h| h.map().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn terminal_and_initial() {
        let one = Algebra::trivial(Kind::Monoid).into_obj();
        for a in [
            fixtures::cyclic_group(4),
            fixtures::semilattice_b(),
            fixtures::symmetric_group_s3(),
        ] {
            let a = a.into_obj();
            assert_eq!(enumerate_homs(&a, &one, &Default::default()).unwrap().len(), 1);
            assert_eq!(enumerate_homs(&one, &a, &Default::default()).unwrap().len(), 1);
        }
    }

    #[test]
    fn hom_check_rejects() {
        let z2 = fixtures::cyclic_group(2).into_obj();
        let b = fixtures::semilattice_b().into_obj();
        assert!(Hom::new(z2.clone(), b.clone(), vec![0, 1]).is_err());
        assert!(Hom::new(b, z2, vec![0, 0]).is_ok());
    }

    #[test]
    fn klein_is_not_z4() {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let v4 = fixtures::klein_four().into_obj();
        assert!(!is_isomorphic(&z4, &v4));
        let v4b = crate::algebra::product(
            &fixtures::cyclic_group(2).into_obj(),
            &fixtures::cyclic_group(2).into_obj(),
        )
        .unwrap();
        assert!(is_isomorphic(v4b.obj(), &v4));
    }

    #[test]
    fn subalgebra_of_z4() {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let inc = subalgebra_inclusion(&z4, &BitSet::from_indices(4, [0, 2])).unwrap();
        assert_eq!(inc.map(), &[0, 2]);
        assert!(inc.verify().is_ok());
        assert!(subalgebra_inclusion(&z4, &BitSet::from_indices(4, [0, 1])).is_err());
    }
}
