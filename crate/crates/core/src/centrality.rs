//! Connectors, double centralizing relations, centralizers and
//! action-distinctive relations.
//!
//! For reflexive relations `R`, `S` on `X` the domain `R ×_X S` is the set of
//! triples `(x, y, z)` with `x R y` and `y S z`. A connector is a hom
//! `p: R ×_X S -> X` with `p(x, x, z) = z` and `p(x, y, y) = x`.

use std::collections::VecDeque;

use serde_json::Value;

use crate::algebra::{enumerate_congruences, Congruence, Hom, Obj, TupleAlgebra};
use crate::document::Witness;
use crate::error::{Error, Result};
use crate::fault::{self, Fault};
use crate::points::{is_pullback_square, SigmaClass, SplitPoint};
use crate::relations::{inverse_image, is_sigma_relation, kernel_pair, Relation};
use crate::report::AuditReport;

/// Default bound on `|R ×_X S|` for [`connector_oracle`].
pub const ORACLE_BOUND: usize = 16;

/// Bound on the order of the carrier for [`centralizer`].
pub const CENTRALIZER_BOUND: usize = 16;

const UNSET: usize = usize::MAX;

/// The triples of `R ×_X S` with products computed componentwise.
#[derive(Debug, Clone)]
pub struct Triples {
    x: Obj,
    list: Vec<[usize; 3]>,
    index: Vec<usize>,
}

impl Triples {
    pub fn new(r: &Relation, s: &Relation) -> Result<Triples> {
        let x = r.source().clone();
        for o in [r.target(), s.source(), s.target()] {
            if **o != *x {
                return Err(Error::ObjectMismatch("connector needs relations on one object".into()));
            }
        }
        let n = x.order();
        let mut list = Vec::new();
        let mut index = vec![UNSET; n * n * n];
        for (a, b) in r.pair_list() {
            for c in 0..n {
                if s.contains(b, c) {
                    index[(a * n + b) * n + c] = list.len();
                    list.push([a, b, c]);
                }
            }
        }
        Ok(Triples { x, list, index })
    }

    pub fn carrier(&self) -> &Obj {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn triple(&self, i: usize) -> [usize; 3] {
        self.list[i]
    }

    pub fn list(&self) -> &[[usize; 3]] {
        &self.list
    }

    pub fn index_of(&self, t: [usize; 3]) -> Option<usize> {
        let n = self.x.order();
        if t.iter().any(|&v| v >= n) {
            return None;
        }
        Some(self.index[(t[0] * n + t[1]) * n + t[2]]).filter(|&i| i != UNSET)
    }

    /// Operation `k` on the triples `i`, `j`.
    pub fn op(&self, k: usize, i: usize, j: usize) -> usize {
        let (a, b) = (self.list[i], self.list[j]);
        let t = [0, 1, 2].map(|c| self.x.op(k, a[c], b[c]));
        self.index_of(t).expect("R ×_X S is a subalgebra")
    }

    /// The constant triples `(c, c, c)`.
    pub fn constants(&self) -> Vec<usize> {
        self.x
            .constants()
            .iter()
            .map(|&c| self.index_of([c, c, c]).expect("reflexive relations contain constants"))
            .collect()
    }

    /// The values forced by the two Mal'tsev conditions.
    fn forced(&self, i: usize) -> Option<usize> {
        let [x, y, z] = self.list[i];
        if x == y {
            Some(z)
        } else if y == z {
            Some(x)
        } else {
            None
        }
    }

    /// The triples as a subalgebra of `X³`.
    pub fn to_tuple_algebra(&self) -> Result<TupleAlgebra> {
        let x = self.x.clone();
        TupleAlgebra::from_tuples(vec![x.clone(), x.clone(), x], self.list.iter().map(|t| t.to_vec()).collect())
    }
}

/// A total connector for the pair `(R, S)`.
#[derive(Debug, Clone)]
pub struct Connector {
    r: Relation,
    s: Relation,
    domain: Triples,
    values: Vec<usize>,
}

impl Connector {
    pub fn r(&self) -> &Relation {
        &self.r
    }

    pub fn s(&self) -> &Relation {
        &self.s
    }

    pub fn domain(&self) -> &Triples {
        &self.domain
    }

    /// `p` listed along [`Triples::list`].
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `p(x, y, z)`, if `x R y S z`.
    pub fn apply(&self, x: usize, y: usize, z: usize) -> Option<usize> {
        self.domain.index_of([x, y, z]).map(|i| self.values[i])
    }

    /// `p` as a hom out of the tuple algebra `R ×_X S`.
    pub fn hom(&self) -> Result<Hom> {
        let dom = self.domain.to_tuple_algebra()?;
        let map = dom
            .tuples()
            .iter()
            .map(|t| self.apply(t[0], t[1], t[2]).expect("same triples"))
            .collect();
        Hom::new(dom.obj().clone(), self.domain.x.clone(), map)
    }

    pub fn witness(&self) -> Value {
        pair_witness(&self.r, &self.s)
            .value(
                "p",
                self.domain
                    .list
                    .iter()
                    .zip(&self.values)
                    .map(|(t, v)| [t[0], t[1], t[2], *v])
                    .collect::<Vec<_>>(),
            )
            .build()
    }
}

fn pair_witness(r: &Relation, s: &Relation) -> Witness {
    Witness::new()
        .algebra("X", r.source())
        .relation("R", &r.pair_list())
        .relation("S", &s.pair_list())
}

/// Witness naming the relations of a pair, for reports.
pub fn relation_pair_witness(r: &Relation, s: &Relation) -> Value {
    pair_witness(r, s).build()
}

/// Computes the connector by propagation from the Mal'tsev conditions.
///
/// Values are forced on the images of `σ0^R` and `σ0^S` and pushed through
/// the operations of `R ×_X S`. A clash gives [`Error::Inconsistent`]; a
/// triple never reached gives [`Error::Underdetermined`].
pub fn connector(r: &Relation, s: &Relation) -> Result<Connector> {
    let domain = Triples::new(r, s)?;
    let x = domain.x.clone();
    let m = domain.len();
    let mut values = vec![UNSET; m];
    let mut assigned = Vec::with_capacity(m);
    for (i, slot) in values.iter_mut().enumerate() {
        if let Some(v) = domain.forced(i) {
            *slot = v;
            assigned.push(i);
        }
    }
    if !fault::active(Fault::ConnectorNoPropagation) {
        let mut queue: VecDeque<usize> = assigned.iter().copied().collect();
        let mut done: Vec<usize> = Vec::with_capacity(m);
        while let Some(i) = queue.pop_front() {
            done.push(i);
            for &j in &done {
                for k in 0..x.kind().arity() {
                    for (a, b) in [(i, j), (j, i)] {
                        let l = domain.op(k, a, b);
                        let v = x.op(k, values[a], values[b]);
                        if values[l] == UNSET {
                            values[l] = v;
                            queue.push_back(l);
                        } else if values[l] != v {
                            return Err(Error::Inconsistent {
                                element: l,
                                first: values[l],
                                second: v,
                            });
                        }
                    }
                }
            }
        }
    }
    if let Some(i) = values.iter().position(|&v| v == UNSET) {
        return Err(Error::Underdetermined(i));
    }
    Ok(Connector {
        r: r.clone(),
        s: s.clone(),
        domain,
        values,
    })
}

/// Every hom `R ×_X S -> X` satisfying the Mal'tsev conditions, by
/// exhaustive backtracking over maps.
pub fn connector_oracle(r: &Relation, s: &Relation, bound: usize) -> Result<Vec<Vec<usize>>> {
    let domain = Triples::new(r, s)?;
    let m = domain.len();
    if m > bound {
        return Err(Error::BoundExceeded {
            what: "R ×_X S".into(),
            size: m,
            bound,
        });
    }
    let x = domain.x.clone();
    let n = x.order();
    let mut constant_of = vec![None; m];
    for (c, &i) in domain.constants().iter().enumerate() {
        constant_of[i] = Some(x.constants()[c]);
    }
    let mut out = Vec::new();
    let mut values = vec![UNSET; m];
    fn consistent(domain: &Triples, values: &[usize], i: usize) -> bool {
        let x = &domain.x;
        for j in 0..=i {
            for k in 0..x.kind().arity() {
                for (a, b) in [(i, j), (j, i)] {
                    let l = domain.op(k, a, b);
                    if l <= i && values[l] != x.op(k, values[a], values[b]) {
                        return false;
                    }
                }
            }
        }
        // `i` may also be the product of two earlier triples.
        for a in 0..i {
            for b in 0..i {
                for k in 0..x.kind().arity() {
                    if domain.op(k, a, b) == i && values[i] != x.op(k, values[a], values[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(
        domain: &Triples,
        constant_of: &[Option<usize>],
        n: usize,
        i: usize,
        values: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == values.len() {
            out.push(values.clone());
            return;
        }
        let [a, b, c] = domain.list[i];
        for v in 0..n {
            if a == b && v != c || b == c && v != a {
                continue;
            }
            if constant_of[i].is_some_and(|e| e != v) {
                continue;
            }
            values[i] = v;
            if consistent(domain, values, i) {
                go(domain, constant_of, n, i + 1, values, out);
            }
        }
        values[i] = UNSET;
    }
    go(&domain, &constant_of, n, 0, &mut values, &mut out);
    Ok(out)
}

/// Checks the Mal'tsev, coherence and associativity conditions of a
/// connector. Right associativity is only checked when `R` is a preorder.
pub fn check_coherence(c: &Connector) -> AuditReport {
    let mut report = AuditReport::new("coherence");
    let (r, s) = (&c.r, &c.s);
    let n = c.domain.x.order();
    let base = || pair_witness(r, s);
    for (i, &[x, y, z]) in c.domain.list.iter().enumerate() {
        let p = c.values[i];
        let maltsev = (x != y || p == z) && (y != z || p == x);
        report.record(
            maltsev,
            || format!("Mal'tsev condition fails at ({x},{y},{z})"),
            || base().value("triple", [x, y, z]).value("p", p).build(),
        );
        report.record(
            s.contains(x, p) && r.contains(p, z),
            || format!("coherence fails: p({x},{y},{z}) = {p}"),
            || base().value("triple", [x, y, z]).value("p", p).build(),
        );
    }
    // Left associativity: p(p(x,y,z), z, t) = p(x, y, t) for x R y S z S t.
    for (i, &[x, y, z]) in c.domain.list.iter().enumerate() {
        let p = c.values[i];
        for t in (0..n).filter(|&t| s.contains(z, t)) {
            let (Some(lhs), Some(rhs)) = (c.apply(p, z, t), c.apply(x, y, t)) else {
                continue;
            };
            report.record(
                lhs == rhs,
                || format!("left associativity fails at ({x},{y},{z},{t})"),
                || base().value("quadruple", [x, y, z, t]).build(),
            );
        }
    }
    // Right associativity: p(x, y, p(y,z,t)) = p(x, z, t) for x R y R z S t.
    if r.is_preorder() {
        for (i, &[y, z, t]) in c.domain.list.iter().enumerate() {
            let q = c.values[i];
            for x in (0..n).filter(|&x| r.contains(x, y)) {
                let (Some(lhs), Some(rhs)) = (c.apply(x, y, q), c.apply(x, z, t)) else {
                    continue;
                };
                report.record(
                    lhs == rhs,
                    || format!("right associativity fails at ({x},{y},{z},{t})"),
                    || base().value("quadruple", [x, y, z, t]).build(),
                );
            }
        }
    }
    report
}

/// The centralizing double relation `R ⋊_X S` of a connector, with
/// `p0^R(x,y,z) = (x,y)`, `p1^R = (p, z)`, `p0^S = (x, p)`, `p1^S = (y, z)`.
#[derive(Debug, Clone)]
pub struct DoubleCentralizingRelation {
    pub carrier: TupleAlgebra,
    pub p0r: Hom,
    pub p1r: Hom,
    pub p0s: Hom,
    pub p1s: Hom,
}

impl DoubleCentralizingRelation {
    /// Fails with [`Error::Precondition`] when the coherence conditions do
    /// not hold, since then `p1^R` or `p0^S` does not land in the relation.
    pub fn new(c: &Connector) -> Result<DoubleCentralizingRelation> {
        let carrier = c.domain.to_tuple_algebra()?;
        let (r, s) = (&c.r, &c.s);
        let mut maps = [vec![], vec![], vec![], vec![]];
        for t in carrier.tuples() {
            let (x, y, z) = (t[0], t[1], t[2]);
            let p = c.apply(x, y, z).expect("same triples");
            let pick = |rel: &Relation, a: usize, b: usize| {
                rel.index_of(a, b)
                    .ok_or_else(|| Error::Precondition(format!("coherence fails at ({x},{y},{z})")))
            };
            maps[0].push(pick(r, x, y)?);
            maps[1].push(pick(r, p, z)?);
            maps[2].push(pick(s, x, p)?);
            maps[3].push(pick(s, y, z)?);
        }
        let [m0, m1, m2, m3] = maps;
        let dom = carrier.obj().clone();
        Ok(DoubleCentralizingRelation {
            p0r: Hom::new(dom.clone(), r.obj().clone(), m0)?,
            p1r: Hom::new(dom.clone(), r.obj().clone(), m1)?,
            p0s: Hom::new(dom.clone(), s.obj().clone(), m2)?,
            p1s: Hom::new(dom, s.obj().clone(), m3)?,
            carrier,
        })
    }

    /// The square `(p0^R, p1^S)` over `(d1^R, d0^S)` is a pullback.
    pub fn is_pullback(&self, r: &Relation, s: &Relation) -> bool {
        is_pullback_square(&self.p0r, &self.p1s, &r.d1(), &s.d0())
    }
}

/// The largest double relation `R □ S`: quadruples `(x, y, z, w)` with
/// `x R y`, `y S z`, `x S w` and `w R z`.
pub fn largest_double_relation(r: &Relation, s: &Relation) -> Result<TupleAlgebra> {
    let x = r.source().clone();
    let n = x.order();
    let mut quads = Vec::new();
    for (a, b) in r.pair_list() {
        for c in (0..n).filter(|&c| s.contains(b, c)) {
            for w in (0..n).filter(|&w| s.contains(a, w) && r.contains(w, c)) {
                quads.push(vec![a, b, c, w]);
            }
        }
    }
    TupleAlgebra::from_tuples(vec![x.clone(), x.clone(), x.clone(), x], quads)
}

/// Reads a connector off `R □ S` when every triple `x R y S z` has exactly
/// one completion `w`; this is the situation of `R ∩ S = Δ`.
pub fn connector_from_double_relation(r: &Relation, s: &Relation) -> Result<Option<Vec<usize>>> {
    let domain = Triples::new(r, s)?;
    let quads = largest_double_relation(r, s)?;
    let mut values = vec![UNSET; domain.len()];
    for q in quads.tuples() {
        let i = domain.index_of([q[0], q[1], q[2]]).expect("quadruples project to triples");
        if values[i] != UNSET {
            return Ok(None);
        }
        values[i] = q[3];
    }
    Ok(values.iter().all(|&v| v != UNSET).then_some(values))
}

/// `[R, S] = 0`: the connector exists and is coherent.
pub fn centralizes(r: &Relation, s: &Relation, sigma: &SigmaClass) -> Result<bool> {
    if !is_sigma_relation(s, sigma) {
        return Err(Error::NotSigmaRelation(sigma.name()));
    }
    centralizes_unchecked(r, s)
}

fn centralizes_unchecked(r: &Relation, s: &Relation) -> Result<bool> {
    match connector(r, s) {
        Ok(c) => Ok(check_coherence(&c).ok()),
        Err(Error::Inconsistent { .. } | Error::Underdetermined(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Result of a centralizer search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Centralizer {
    /// The largest centralizing congruence.
    Maximum(Congruence),
    /// No maximum: the maximal centralizing congruences.
    Antichain(Vec<Congruence>),
}

impl Centralizer {
    pub fn maximum(&self) -> Option<&Congruence> {
        match self {
            Centralizer::Maximum(z) => Some(z),
            Centralizer::Antichain(_) => None,
        }
    }
}

/// All congruences `R` of `X` with `[R, S] = 0`, in the order of
/// [`enumerate_congruences`].
pub fn centralizing_congruences(s: &Relation, sigma: &SigmaClass) -> Result<Vec<Congruence>> {
    check_centralizer_input(s, sigma)?;
    let mut out = Vec::new();
    for theta in enumerate_congruences(s.source()) {
        if centralizes_unchecked(&Relation::from_congruence(&theta), s)? {
            out.push(theta);
        }
    }
    Ok(out)
}

fn check_centralizer_input(s: &Relation, sigma: &SigmaClass) -> Result<()> {
    let n = s.source().order();
    if n > CENTRALIZER_BOUND {
        return Err(Error::BoundExceeded {
            what: "centralizer carrier".into(),
            size: n,
            bound: CENTRALIZER_BOUND,
        });
    }
    if !s.is_equivalence() {
        return Err(Error::Precondition("centralizer of a relation that is not an equivalence".into()));
    }
    if !is_sigma_relation(s, sigma) {
        return Err(Error::NotSigmaRelation(sigma.name()));
    }
    Ok(())
}

/// The largest congruence centralizing the `sigma`-equivalence relation `S`.
pub fn centralizer(s: &Relation, sigma: &SigmaClass) -> Result<Centralizer> {
    check_centralizer_input(s, sigma)?;
    if fault::active(Fault::CentralizerFirstFound) {
        for theta in enumerate_congruences(s.source()) {
            if centralizes_unchecked(&Relation::from_congruence(&theta), s)? {
                return Ok(Centralizer::Maximum(theta));
            }
        }
    }
    let all = centralizing_congruences(s, sigma)?;
    if let Some(z) = all.iter().find(|z| all.iter().all(|t| t.le(z))) {
        return Ok(Centralizer::Maximum(z.clone()));
    }
    let maximal = all
        .iter()
        .filter(|z| !all.iter().any(|t| t != *z && z.le(t)))
        .cloned()
        .collect();
    Ok(Centralizer::Antichain(maximal))
}

/// The largest cartesian equivalence relation `(D_X, D_Y)` on a split point.
#[derive(Debug, Clone)]
pub struct ActionDistinctive {
    pub point: SplitPoint,
    /// `D_X[f, s]` on `X`.
    pub dx: Relation,
    /// `D_Y[f, s]` on `Y`.
    pub dy: Relation,
    /// `Z[R[f]]`.
    pub centralizer: Congruence,
}

impl ActionDistinctive {
    pub fn witness(&self) -> Value {
        Witness::new()
            .point("point", &self.point)
            .relation("DX", &self.dx.pair_list())
            .relation("DY", &self.dy.pair_list())
            .build()
    }
}

/// Builds `D[f, s]` from the centralizer `Z` of `R[f]`:
/// `D_Y = s⁻¹(Z)` and `D_X = {(x, x') : sfx Z sfx', x = p(sfx, sfx', x')}`
/// where `p` is the connector of `(Z, R[f])`.
pub fn action_distinctive(point: &SplitPoint, sigma: &SigmaClass) -> Result<ActionDistinctive> {
    let (f, s) = (point.f(), point.s());
    let rf = kernel_pair(f);
    if !is_sigma_relation(&rf, sigma) {
        return Err(Error::NotSigmaRelation(sigma.name()));
    }
    let z = match centralizer(&rf, sigma)? {
        Centralizer::Maximum(z) => z,
        Centralizer::Antichain(a) => {
            return Err(Error::NoCentralizer(format!("{} maximal centralizing congruences", a.len())))
        }
    };
    let zr = Relation::from_congruence(&z);
    let conn = connector(&zr, &rf)?;
    let x = point.domain();
    let n = x.order();
    let sf = |a: usize| s.apply(f.apply(a));
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if zr.contains(sf(a), sf(b)) && conn.apply(sf(a), sf(b), b) == Some(a) {
                pairs.push((a, b));
            }
        }
    }
    let dx = Relation::new(x, x, pairs)?;
    let dy = inverse_image(s, &zr)?;
    Ok(ActionDistinctive {
        point: point.clone(),
        dx,
        dy,
        centralizer: z,
    })
}

/// Whether the equivalence relations `T` on `X` and `R` on `Y` form a
/// cartesian equivalence relation on the point: `f(T) ⊆ R`, `s(R) ⊆ T` and
/// the `d0`-square is a pullback.
pub fn is_cartesian_equivalence(point: &SplitPoint, t: &Relation, r: &Relation) -> bool {
    let (f, s) = (point.f(), point.s());
    let (nx, ny) = (point.domain().order(), point.base().order());
    if !t.is_equivalence() || !r.is_equivalence() {
        return false;
    }
    if t.pair_list().iter().any(|&(a, b)| !r.contains(f.apply(a), f.apply(b))) {
        return false;
    }
    if r.pair_list().iter().any(|&(a, b)| !t.contains(s.apply(a), s.apply(b))) {
        return false;
    }
    // Each x and each y' with f(x) R y' lift uniquely to x T x' over y'.
    (0..nx).all(|a| {
        (0..ny).filter(|&y| r.contains(f.apply(a), y)).all(|y| {
            (0..nx).filter(|&b| f.apply(b) == y && t.contains(a, b)).count() == 1
        })
    })
}

/// All cartesian equivalence relations on a point, found by scanning the
/// congruences of `X` (the base relation is then `s⁻¹(T)`).
pub fn cartesian_equivalences(point: &SplitPoint) -> Result<Vec<(Relation, Relation)>> {
    let mut out = Vec::new();
    for theta in enumerate_congruences(point.domain()) {
        let t = Relation::from_congruence(&theta);
        let r = inverse_image(point.s(), &t)?;
        if is_cartesian_equivalence(point, &t, &r) {
            out.push((t, r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, product};

    fn obj(a: crate::algebra::Algebra) -> Obj {
        a.into_obj()
    }

    #[test]
    fn diagonal_centralizes_everything() {
        let x = obj(fixtures::semilattice_b());
        let s = Relation::full(&x);
        let c = connector(&Relation::diagonal(&x), &s).unwrap();
        for (a, b) in s.pair_list() {
            assert_eq!(c.apply(a, a, b), Some(b));
        }
        assert!(check_coherence(&c).ok());
        assert_eq!(connector_oracle(&Relation::diagonal(&x), &s, 16).unwrap().len(), 1);
    }

    #[test]
    fn z2_full_pair_is_the_ternary_sum() {
        let x = obj(fixtures::cyclic_group(2));
        let nabla = Relation::full(&x);
        let c = connector(&nabla, &nabla).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for d in 0..2 {
                    assert_eq!(c.apply(a, b, d), Some((a + b + d) % 2));
                }
            }
        }
        assert!(check_coherence(&c).ok());
        let all = connector_oracle(&nabla, &nabla, 16).unwrap();
        assert_eq!(all, vec![c.values().to_vec()]);
        assert!(c.hom().is_ok());
    }

    #[test]
    fn product_projections_kernel_pairs() {
        let z2 = obj(fixtures::cyclic_group(2));
        let z3 = obj(fixtures::cyclic_group(3));
        let prod = product(&z2, &z3).unwrap();
        let x = prod.obj().clone();
        let r = kernel_pair(&prod.projection(1));
        let s = kernel_pair(&prod.projection(0));
        let c = connector(&r, &s).unwrap();
        for t in c.domain().list() {
            let (a, bp) = (prod.tuple(t[0])[0], prod.tuple(t[2])[1]);
            assert_eq!(c.apply(t[0], t[1], t[2]), prod.index_of(&[a, bp]));
        }
        assert!(centralizes(&r, &s, &SigmaClass::WeaklySchreier).unwrap());
        assert_eq!(connector_from_double_relation(&r, &s).unwrap().as_deref(), Some(c.values()));
        let dcr = DoubleCentralizingRelation::new(&c).unwrap();
        assert!(dcr.is_pullback(&r, &s));
        assert_eq!(x.order(), 6);
    }

    #[test]
    fn s3_is_not_abelian() {
        let x = obj(fixtures::symmetric_group_s3());
        let nabla = Relation::full(&x);
        assert!(!centralizes(&nabla, &nabla, &SigmaClass::WeaklySchreier).unwrap());
        match centralizer(&nabla, &SigmaClass::WeaklySchreier).unwrap() {
            Centralizer::Maximum(z) => assert!(z.is_identity()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn centralizer_examples() {
        let z2 = obj(fixtures::cyclic_group(2));
        let ws = SigmaClass::WeaklySchreier;
        let z = centralizer(&Relation::full(&z2), &ws).unwrap();
        assert!(z.maximum().unwrap().is_total());
        let b = obj(fixtures::semilattice_b());
        let z = centralizer(&Relation::diagonal(&b), &ws).unwrap();
        assert!(z.maximum().unwrap().is_total());
        assert!(matches!(
            centralizes(&Relation::full(&b), &Relation::full(&b), &ws),
            Err(Error::NotSigmaRelation(_))
        ));
    }

    #[test]
    fn action_distinctive_on_product_point() {
        let y = obj(fixtures::cyclic_group(2));
        let a = obj(fixtures::cyclic_group(2));
        let p = SplitPoint::product_projection(&y, &a, 0).unwrap();
        let ws = SigmaClass::WeaklySchreier;
        let d = action_distinctive(&p, &ws).unwrap();
        let all = cartesian_equivalences(&p).unwrap();
        assert!(is_cartesian_equivalence(&p, &d.dx, &d.dy));
        for (t, r) in &all {
            assert!(t.is_subset(&d.dx) && r.is_subset(&d.dy));
        }
        let id = SplitPoint::identity(&y);
        let d = action_distinctive(&id, &ws).unwrap();
        assert_eq!(d.dx, Relation::full(&y));
    }

    #[test]
    fn first_found_fault_returns_the_diagonal() {
        let z2 = obj(fixtures::cyclic_group(2));
        let z = fault::with_fault(Some(Fault::CentralizerFirstFound), || {
            centralizer(&Relation::full(&z2), &SigmaClass::WeaklySchreier).unwrap()
        });
        assert!(z.maximum().unwrap().is_identity());
    }
}
