//! Finite algebras given by operation tables.
//!
//! Three signatures are supported: monoids `(X, ·, 1)`, quandles `(X, ◁)`
//! and semirings `(X, +, ·, 0, 1)` with an absorbing zero. Carriers are the
//! dense index sets `{0, .., n-1}`; operation `k` applied to `(a, b)` is read
//! from a flat row-major table.

mod congruence;
mod enumerate;
pub mod fixtures;
mod hom;
mod tuples;

pub use congruence::{
    congruence_quotient, enumerate_congruences, image_factorization, quotient_by_pairs,
    Congruence, Quotient,
};
pub use enumerate::{
    canonical_form, enumerate_algebras, enumerate_algebras_bounded, Catalog,
    DEFAULT_ENUMERATION_BOUND,
};
pub use hom::{
    enumerate_homs, find_isomorphism, is_isomorphic, subalgebra_inclusion, Hom, HomConstraints,
};
pub use tuples::{product, pullback, Product, Pullback, TupleAlgebra};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fault::{self, Fault};

/// Signature of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Monoid,
    Quandle,
    Semiring,
}

impl Kind {
    /// Number of binary operations.
    pub fn arity(self) -> usize {
        match self {
            Kind::Monoid | Kind::Quandle => 1,
            Kind::Semiring => 2,
        }
    }

    /// Number of distinguished constants.
    pub fn constant_count(self) -> usize {
        match self {
            Kind::Monoid => 1,
            Kind::Quandle => 0,
            Kind::Semiring => 2,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Kind::Monoid => "mon",
            Kind::Quandle => "qnd",
            Kind::Semiring => "srg",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "mon" | "monoid" => Some(Kind::Monoid),
            "qnd" | "quandle" => Some(Kind::Quandle),
            "srg" | "semiring" => Some(Kind::Semiring),
            _ => None,
        }
    }
}

/// Shared handle to an immutable algebra.
pub type Obj = Arc<Algebra>;

/// A validated finite algebra.
///
/// For monoids operation 0 is the multiplication and constant 0 the unit.
/// For semirings operation 0 is the addition, operation 1 the
/// multiplication, constant 0 the zero and constant 1 the one; the additive
/// reduct therefore sits at the same indices as a monoid.
#[derive(Clone)]
pub struct Algebra {
    kind: Kind,
    order: usize,
    ops: Vec<Vec<usize>>,
    constants: Vec<usize>,
    name: Option<String>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.order == other.order
            && self.constants == other.constants
            && self.ops == other.ops
    }
}

impl Eq for Algebra {}

impl Hash for Algebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.order.hash(state);
        self.constants.hash(state);
        self.ops.hash(state);
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(name) = &self.name {
            write!(f, " {name}")?;
        }
        write!(f, " (order {}) consts {:?}", self.order, self.constants)?;
        for op in 0..self.kind.arity() {
            write!(f, " {:?}", self.table(op))?;
        }
        Ok(())
    }
}

/// Unvalidated operation tables, as read from a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAlgebra {
    pub tables: Vec<Vec<Vec<usize>>>,
    pub unit: Option<usize>,
    pub name: Option<String>,
}

fn violation(axiom: &str, witness: Vec<usize>) -> Error {
    Error::AxiomViolation {
        axiom: axiom.to_string(),
        witness,
    }
}

fn flatten(table: &[Vec<usize>], what: &str) -> Result<(usize, Vec<usize>)> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Shape(format!("{what}: empty table")));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "{what}: row {i} has length {}, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::Shape(format!(
                    "{what}: entry ({i}, {j}) = {v} out of range 0..{n}"
                )));
            }
        }
        flat.extend_from_slice(row);
    }
    Ok((n, flat))
}

fn check_associative(n: usize, t: &[usize], axiom: &str) -> Result<()> {
    for a in 0..n {
        for b in 0..n {
            let ab = t[a * n + b];
            for c in 0..n {
                if t[ab * n + c] != t[a * n + t[b * n + c]] {
                    return Err(violation(axiom, vec![a, b, c]));
                }
            }
        }
    }
    Ok(())
}

fn check_unit(n: usize, t: &[usize], e: usize, axiom: &str) -> Result<()> {
    for a in 0..n {
        if t[e * n + a] != a || t[a * n + e] != a {
            return Err(violation(axiom, vec![a]));
        }
    }
    Ok(())
}

fn find_unit(n: usize, t: &[usize]) -> Option<usize> {
    (0..n).find(|&e| (0..n).all(|a| t[e * n + a] == a && t[a * n + e] == a))
}

/// Validates raw tables against the axioms of `kind`.
///
/// Monoids need one table and a unit; quandles one table; semirings an
/// addition and a multiplication table (zero and one are read off the
/// tables). On failure the first violated axiom is reported together with
/// the witnessing elements.
pub fn validate(kind: Kind, raw: RawAlgebra) -> Result<Algebra> {
    let expected = kind.arity();
    if raw.tables.len() != expected {
        return Err(Error::Shape(format!(
            "{kind:?} needs {expected} table(s), got {}",
            raw.tables.len()
        )));
    }
    let mut flats = Vec::with_capacity(expected);
    let mut order = None;
    for (k, t) in raw.tables.iter().enumerate() {
        let (n, flat) = flatten(t, &format!("table {k}"))?;
        if let Some(m) = order {
            if m != n {
                return Err(Error::Shape(format!("tables have orders {m} and {n}")));
            }
        }
        order = Some(n);
        flats.push(flat);
    }
    let n = order.expect("at least one table");
    let constants = match kind {
        Kind::Monoid => {
            let e = raw
                .unit
                .ok_or_else(|| Error::Shape("monoid needs a unit".into()))?;
            if e >= n {
                return Err(Error::Shape(format!("unit {e} out of range 0..{n}")));
            }
            let t = &flats[0];
            check_associative(n, t, "associativity")?;
            check_unit(n, t, e, "unit law")?;
            vec![e]
        }
        Kind::Quandle => {
            if raw.unit.is_some() {
                return Err(Error::Shape("quandles have no unit".into()));
            }
            let t = &flats[0];
            for a in 0..n {
                if t[a * n + a] != a {
                    return Err(violation("idempotency", vec![a]));
                }
            }
            for b in 0..n {
                let mut seen = vec![None; n];
                for a in 0..n {
                    let v = t[a * n + b];
                    if let Some(prev) = seen[v] {
                        return Err(violation("right translation bijective", vec![b, prev, a]));
                    }
                    seen[v] = Some(a);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let lhs = t[t[a * n + b] * n + c];
                        let rhs = t[t[a * n + c] * n + t[b * n + c]];
                        if lhs != rhs {
                            return Err(violation("self-distributivity", vec![a, b, c]));
                        }
                    }
                }
            }
            vec![]
        }
        Kind::Semiring => {
            if raw.unit.is_some() {
                return Err(Error::Shape(
                    "semirings take zero and one from their tables".into(),
                ));
            }
            let (add, mul) = (&flats[0], &flats[1]);
            check_associative(n, add, "additive associativity")?;
            let zero =
                find_unit(n, add).ok_or_else(|| violation("additive identity", vec![]))?;
            for a in 0..n {
                for b in 0..n {
                    if add[a * n + b] != add[b * n + a] {
                        return Err(violation("additive commutativity", vec![a, b]));
                    }
                }
            }
            check_associative(n, mul, "multiplicative associativity")?;
            let one = find_unit(n, mul)
                .ok_or_else(|| violation("multiplicative identity", vec![]))?;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let bc = add[b * n + c];
                        if mul[a * n + bc] != add[mul[a * n + b] * n + mul[a * n + c]] {
                            return Err(violation("left distributivity", vec![a, b, c]));
                        }
                        let ab = add[a * n + b];
                        if mul[ab * n + c] != add[mul[a * n + c] * n + mul[b * n + c]] {
                            return Err(violation("right distributivity", vec![a, b, c]));
                        }
                    }
                }
            }
            for a in 0..n {
                if mul[zero * n + a] != zero || mul[a * n + zero] != zero {
                    return Err(violation("absorbing zero", vec![a]));
                }
            }
            vec![zero, one]
        }
    };
    Ok(Algebra {
        kind,
        order: n,
        ops: flats,
        constants,
        name: raw.name,
    })
}

impl Algebra {
    /// Builds an algebra whose axioms are guaranteed by construction
    /// (products, subalgebras, quotients).
    pub(crate) fn from_parts(kind: Kind, order: usize, ops: Vec<Vec<usize>>, constants: Vec<usize>) -> Self {
        debug_assert_eq!(ops.len(), kind.arity());
        debug_assert_eq!(constants.len(), kind.constant_count());
        debug_assert!(ops.iter().all(|t| t.len() == order * order));
        Algebra {
            kind,
            order,
            ops,
            constants,
            name: None,
        }
    }

    pub fn monoid(table: Vec<Vec<usize>>, unit: usize) -> Result<Algebra> {
        validate(
            Kind::Monoid,
            RawAlgebra {
                tables: vec![table],
                unit: Some(unit),
                name: None,
            },
        )
    }

    pub fn quandle(table: Vec<Vec<usize>>) -> Result<Algebra> {
        validate(
            Kind::Quandle,
            RawAlgebra {
                tables: vec![table],
                unit: None,
                name: None,
            },
        )
    }

    pub fn semiring(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Algebra> {
        validate(
            Kind::Semiring,
            RawAlgebra {
                tables: vec![add, mul],
                unit: None,
                name: None,
            },
        )
    }

    /// Re-checks every axiom of the signature.
    pub fn revalidate(&self) -> Result<()> {
        validate(self.kind, self.to_raw()).map(|_| ())
    }

    pub fn to_raw(&self) -> RawAlgebra {
        RawAlgebra {
            tables: (0..self.kind.arity()).map(|k| self.table(k)).collect(),
            unit: match self.kind {
                Kind::Monoid => Some(self.constants[0]),
                _ => None,
            },
            name: self.name.clone(),
        }
    }

    /// The one-element algebra of the given signature (terminal object).
    pub fn trivial(kind: Kind) -> Algebra {
        Algebra::from_parts(kind, 1, vec![vec![0]; kind.arity()], vec![0; kind.constant_count()])
            .named("1")
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn into_obj(self) -> Obj {
        Arc::new(self)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}{}", self.kind.short_name(), self.order))
    }

    pub fn constants(&self) -> &[usize] {
        &self.constants
    }

    /// Applies operation `k`.
    #[inline]
    pub fn op(&self, k: usize, a: usize, b: usize) -> usize {
        self.ops[k][a * self.order + b]
    }

    /// Operation 0: monoid multiplication, quandle `◁`, semiring addition.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.ops[0][a * self.order + b]
    }

    /// Constant 0: monoid unit or semiring zero.
    pub fn unit(&self) -> Option<usize> {
        self.constants.first().copied()
    }

    pub fn table(&self, k: usize) -> Vec<Vec<usize>> {
        self.ops[k]
            .chunks(self.order)
            .map(|row| row.to_vec())
            .collect()
    }

    pub(crate) fn flat_ops(&self) -> &[Vec<usize>] {
        &self.ops
    }

    /// Smallest subset containing `seed` and the constants that is closed
    /// under every operation. Elements are processed in ascending order.
    pub fn closure(&self, seed: &BitSet) -> BitSet {
        assert_eq!(seed.capacity(), self.order);
        let mut set = seed.clone();
        if !fault::active(Fault::ClosureNoConstants) {
            for &c in &self.constants {
                set.insert(c);
            }
        }
        if fault::active(Fault::ClosureSinglePass) {
            let members = set.to_vec();
            for &a in &members {
                for &b in &members {
                    for k in 0..self.kind.arity() {
                        set.insert(self.op(k, a, b));
                    }
                }
            }
            return set;
        }
        let mut members: Vec<usize> = set.to_vec();
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(e) = queue.pop_front() {
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for k in 0..self.kind.arity() {
                    for v in [self.op(k, e, x), self.op(k, x, e)] {
                        if set.insert(v) {
                            members.push(v);
                            queue.push_back(v);
                        }
                    }
                }
                i += 1;
            }
        }
        set
    }

    pub fn closure_of(&self, seed: impl IntoIterator<Item = usize>) -> BitSet {
        self.closure(&BitSet::from_indices(self.order, seed))
    }

    pub fn is_closed(&self, set: &BitSet) -> bool {
        if self.constants.iter().any(|&c| !set.contains(c)) {
            return false;
        }
        let members = set.to_vec();
        members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| (0..self.kind.arity()).all(|k| set.contains(self.op(k, a, b))))
        })
    }

    /// All subalgebras containing `seed`, smallest first then lexicographic.
    ///
    /// The closure system is explored breadth-first from `closure(seed)`,
    /// adding one element at a time.
    pub fn subalgebras_containing(&self, seed: &BitSet) -> Vec<BitSet> {
        let start = self.closure(seed);
        let mut seen: BTreeSet<BitSet> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(current) = queue.pop_front() {
            for e in 0..self.order {
                if current.contains(e) {
                    continue;
                }
                let mut next = current.clone();
                next.insert(e);
                let next = self.closure(&next);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<BitSet> = seen.into_iter().collect();
        out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.to_vec().cmp(&b.to_vec())));
        out
    }

    /// All subalgebras (for quandles this includes the empty one).
    pub fn subalgebras(&self) -> Vec<BitSet> {
        self.subalgebras_containing(&BitSet::new(self.order))
    }

    pub fn is_commutative(&self, k: usize) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.op(k, a, b) == self.op(k, b, a)))
    }

    /// Monoid whose every element has a two-sided inverse.
    pub fn is_group(&self) -> bool {
        self.kind == Kind::Monoid && self.has_inverses(0)
    }

    /// Semiring whose additive monoid is a group.
    pub fn is_ring(&self) -> bool {
        self.kind == Kind::Semiring && self.has_inverses(0)
    }

    /// Quandle whose left translations `b -> a ◁ b` are bijective.
    pub fn is_latin(&self) -> bool {
        self.kind == Kind::Quandle
            && (0..self.order).all(|a| {
                let mut seen = BitSet::new(self.order);
                (0..self.order).all(|b| seen.insert(self.mul(a, b)))
            })
    }

    fn has_inverses(&self, k: usize) -> bool {
        let e = self.constants[0];
        (0..self.order).all(|a| (0..self.order).any(|b| self.op(k, a, b) == e && self.op(k, b, a) == e))
    }

    /// Per-element invariants preserved by isomorphisms.
    pub(crate) fn element_signature(&self, a: usize) -> Vec<usize> {
        let n = self.order;
        let mut sig = Vec::with_capacity(4 * self.kind.arity() + self.constants.len());
        for &c in &self.constants {
            sig.push(usize::from(c == a));
        }
        for k in 0..self.kind.arity() {
            sig.push(usize::from(self.op(k, a, a) == a));
            sig.push((0..n).filter(|&b| self.op(k, a, b) == b).count());
            sig.push((0..n).filter(|&b| self.op(k, b, a) == b).count());
            let mut image = BitSet::new(n);
            for b in 0..n {
                image.insert(self.op(k, a, b));
            }
            sig.push(image.count());
            // length of the power sequence a, a^2, ...
            let mut seen = BitSet::new(n);
            let mut x = a;
            while seen.insert(x) {
                x = self.op(k, x, a);
            }
            sig.push(seen.count());
        }
        sig
    }

    /// A minimal-by-greed generating set: ascending elements not already
    /// generated by the previous ones.
    pub fn generators(&self) -> Vec<usize> {
        self.generators_over(&BitSet::new(self.order))
    }

    /// Elements which, together with `base`, generate the whole algebra.
    pub fn generators_over(&self, base: &BitSet) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.closure(base);
        for a in 0..self.order {
            if !current.contains(a) {
                gens.push(a);
                current.insert(a);
                current = self.closure(&current);
            }
        }
        gens
    }
}

/// Subalgebra generated by `seed`, as a sorted list.
pub fn subalgebra_closure(algebra: &Algebra, seed: &[usize]) -> Vec<usize> {
    algebra.closure_of(seed.iter().copied()).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(tables: Vec<Vec<Vec<usize>>>, unit: Option<usize>) -> RawAlgebra {
        RawAlgebra {
            tables,
            unit,
            name: None,
        }
    }

    #[test]
    fn trivial_monoid_validates() {
        let a = Algebra::monoid(vec![vec![0]], 0).unwrap();
        assert_eq!(a.order(), 1);
        assert_eq!(a.unit(), Some(0));
    }

    #[test]
    fn z2_and_semilattice_validate() {
        let z2 = Algebra::monoid(vec![vec![0, 1], vec![1, 0]], 0).unwrap();
        assert!(z2.is_group());
        let b = Algebra::monoid(vec![vec![0, 1], vec![1, 1]], 0).unwrap();
        assert!(!b.is_group());
        assert!(b.is_commutative(0));
        assert_eq!(b.mul(1, 1), 1);
    }

    #[test]
    fn dihedral_quandle_r3() {
        let t = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        let q = Algebra::quandle(t.clone()).unwrap();
        // direct loop over the three axioms
        for a in 0..3 {
            assert_eq!(t[a][a], a);
            for b in 0..3 {
                assert_eq!(t[a][b], (2 * b + 3 - a) % 3);
                for c in 0..3 {
                    assert_eq!(t[t[a][b]][c], t[t[a][c]][t[b][c]]);
                }
            }
        }
        assert!(q.is_latin());
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            validate(Kind::Monoid, raw(vec![vec![vec![0, 1]]], Some(0))),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            validate(Kind::Monoid, raw(vec![vec![vec![0, 2], vec![1, 0]]], Some(0))),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            validate(Kind::Monoid, raw(vec![vec![vec![0]]], None)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn axiom_violation_reports_witness() {
        // 1*1 = 0 but unit claimed to be 1
        let err = Algebra::monoid(vec![vec![0, 0], vec![0, 0]], 1).unwrap_err();
        match err {
            Error::AxiomViolation { axiom, witness } => {
                assert_eq!(axiom, "unit law");
                assert_eq!(witness, vec![1]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = Algebra::quandle(vec![vec![0, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { ref axiom, .. } if axiom == "right translation bijective"));
    }

    #[test]
    fn semiring_requires_absorbing_zero() {
        // additive Z2, multiplication making 0 a unit-like element is rejected
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![0, 0], vec![0, 1]];
        let s = Algebra::semiring(add, mul).unwrap();
        assert_eq!(s.constants(), &[0, 1]);
        assert!(s.is_ring());
        let bad_mul = vec![vec![0, 1], vec![1, 1]];
        assert!(Algebra::semiring(vec![vec![0, 1], vec![1, 1]], bad_mul).is_err());
    }

    #[test]
    fn closure_examples() {
        let z2 = Algebra::monoid(vec![vec![0, 1], vec![1, 0]], 0).unwrap();
        assert_eq!(subalgebra_closure(&z2, &[]), vec![0]);
        assert_eq!(subalgebra_closure(&z2, &[1]), vec![0, 1]);
        let trunc = fixtures::truncated_addition(2);
        assert_eq!(subalgebra_closure(&trunc, &[1]), vec![0, 1, 2]);
    }

    #[test]
    fn quandle_subalgebras_include_empty() {
        let t2 = fixtures::trivial_quandle(2);
        let subs = t2.subalgebras();
        assert_eq!(subs.len(), 4);
        assert!(subs[0].is_empty());
    }
}
