//! Abelian Σ-special extensions, their directions, torsors and Baer sums.
//!
//! A torsor over the direction `Ā = (f̄, s̄): Ā -> Y` is a surjection
//! `f: X -> Y` with a hom `q: R[f] -> Ā` such that the square
//! `f̄ ∘ q = f ∘ d0` is a pullback and `q(a, c) = q(a, b) + q(b, c)`.

use serde_json::Value;

use crate::algebra::{congruence_quotient, enumerate_homs, pullback, Congruence, Hom, HomConstraints, Obj};
use crate::centrality::{centralizes, connector};
use crate::document::Witness;
use crate::error::{Error, Result};
use crate::fault::{self, Fault};
use crate::maltsev::is_abelian_point;
use crate::points::{is_pullback_square, SigmaClass, SplitPoint};
use crate::relations::{is_sigma_relation, kernel_pair, Relation};
use crate::report::AuditReport;

const UNSET: usize = usize::MAX;

/// An abelian group object `(f̄, s̄): Ā -> Y` in the fiber over `Y`.
#[derive(Debug, Clone)]
pub struct Direction {
    point: SplitPoint,
    add: Vec<usize>,
    neg: Vec<usize>,
}

impl PartialEq for Direction {
    fn eq(&self, other: &Self) -> bool {
        self.point == other.point
    }
}

impl Eq for Direction {}

impl Direction {
    /// Reads the unique fiberwise group structure off an abelian point.
    pub fn new(point: SplitPoint, sigma: &SigmaClass) -> Result<Direction> {
        let verdict = is_abelian_point(&point, sigma)?;
        let op = match (&verdict.operation, verdict.connector_route && verdict.group_route) {
            (Some(op), true) => op,
            _ => return Err(Error::NotAbelianSpecial(format!("{point:?} is not an abelian point"))),
        };
        let n = point.domain().order();
        let mut add = vec![UNSET; n * n];
        for u in 0..n {
            for v in 0..n {
                if let Some(w) = op.compose(u, v) {
                    add[u * n + v] = w;
                }
            }
        }
        let neg = (0..n)
            .map(|u| {
                let zero = point.s().apply(point.f().apply(u));
                (0..n).find(|&v| add[u * n + v] == zero).expect("groups have inverses")
            })
            .collect();
        Ok(Direction { point, add, neg })
    }

    /// The product point `Y × A -> Y` of an abelian group `A`.
    pub fn product(y: &Obj, a: &Obj, sigma: &SigmaClass) -> Result<Direction> {
        let e = a.unit().ok_or(Error::UnsupportedKind {
            kind: a.kind(),
            op: "direction",
        })?;
        Direction::new(SplitPoint::product_projection(y, a, e)?, sigma)
    }

    pub fn point(&self) -> &SplitPoint {
        &self.point
    }

    pub fn abar(&self) -> &Obj {
        self.point.domain()
    }

    pub fn base(&self) -> &Obj {
        self.point.base()
    }

    /// `u + v` for `u`, `v` in one fiber.
    pub fn add(&self, u: usize, v: usize) -> Option<usize> {
        let w = self.add[u * self.abar().order() + v];
        (w != UNSET).then_some(w)
    }

    pub fn neg(&self, u: usize) -> usize {
        self.neg[u]
    }

    pub fn zero(&self, y: usize) -> usize {
        self.point.s().apply(y)
    }
}

/// An `Ā`-torsor `(f, R[f], q)`.
#[derive(Debug, Clone)]
pub struct Torsor {
    pub f: Hom,
    pub rf: Relation,
    pub direction: Direction,
    pub q: Hom,
}

impl Torsor {
    /// Builds and validates a torsor.
    pub fn new(f: Hom, direction: Direction, q: Hom) -> Result<Torsor> {
        let rf = kernel_pair(&f);
        let t = Torsor { f, rf, direction, q };
        let report = t.validate();
        if let Some(fail) = report.failures.first() {
            return Err(Error::Precondition(format!("not a torsor: {}", fail.verdict)));
        }
        Ok(t)
    }

    pub fn domain(&self) -> &Obj {
        self.f.source()
    }

    /// `q(a, b)` for `f(a) = f(b)`.
    pub fn q_at(&self, a: usize, b: usize) -> Option<usize> {
        self.rf.index_of(a, b).map(|i| self.q.apply(i))
    }

    /// Checks the torsor invariants: `q` is a hom, the square over `f` is a
    /// pullback, `q(x, x) = s̄(f(x))`, `q(a, c) = q(a, b) + q(b, c)` and
    /// `q(b, a) = -q(a, b)`.
    pub fn validate(&self) -> AuditReport {
        let mut report = AuditReport::new("torsor");
        let d = &self.direction;
        let w = || self.witness();
        report.record(self.q.verify().is_ok(), || "q is not a hom".into(), w);
        report.record(
            **self.q.source() == **self.rf.obj() && **self.q.target() == **d.abar(),
            || "q has the wrong type".into(),
            w,
        );
        if !report.ok() {
            return report;
        }
        report.record(
            is_pullback_square(&self.q, &self.rf.d0(), d.point().f(), &self.f),
            || "square over f is not a pullback".into(),
            w,
        );
        let n = self.domain().order();
        for x in 0..n {
            report.record(
                self.q_at(x, x) == Some(d.zero(self.f.apply(x))),
                || format!("q({x},{x}) is not zero"),
                w,
            );
        }
        for (a, b) in self.rf.pair_list() {
            let qab = self.q_at(a, b).expect("pair of R[f]");
            report.record(
                self.q_at(b, a) == Some(d.neg(qab)),
                || format!("q({b},{a}) != -q({a},{b})"),
                w,
            );
            for c in (0..n).filter(|&c| self.rf.contains(b, c)) {
                let sum = self.q_at(b, c).and_then(|qbc| d.add(qab, qbc));
                report.record(
                    sum == self.q_at(a, c),
                    || format!("q({a},{c}) != q({a},{b}) + q({b},{c})"),
                    w,
                );
            }
        }
        report
    }

    pub fn witness(&self) -> Value {
        Witness::new()
            .hom("f", &self.f)
            .point("direction", self.direction.point())
            .value("q", self.rf.pair_list().iter().map(|&(a, b)| [a, b, self.q_at(a, b).unwrap_or(UNSET)]).collect::<Vec<_>>())
            .build()
    }
}

/// `f` is surjective, `R[f]` is a Σ-relation and `[R[f], R[f]] = 0`.
pub fn is_abelian_sigma_special(f: &Hom, sigma: &SigmaClass) -> Result<bool> {
    if !f.is_surjective() {
        return Err(Error::NotEpi(format!("{f:?}")));
    }
    let rf = kernel_pair(f);
    Ok(is_sigma_relation(&rf, sigma) && centralizes(&rf, &rf, sigma)?)
}

/// The torsor of an abelian Σ-special extension over its own direction.
///
/// `R[f]` is divided by `(a, b) ~ (c, d)` iff `b = p(a, c, d)`, where `p` is
/// the connector of `(R[f], R[f])`; the quotient is `Ā`, with
/// `f̄[(a, b)] = f(a)` and `s̄(y) = [(x, x)]` for any `x` over `y`.
pub fn direction(f: &Hom, sigma: &SigmaClass) -> Result<Torsor> {
    if !is_abelian_sigma_special(f, sigma)? {
        return Err(Error::NotAbelianSpecial(format!("{f:?}")));
    }
    let rf = kernel_pair(f);
    let conn = connector(&rf, &rf)?;
    let m = rf.len();
    let mut pairs = Vec::new();
    for i in 0..m {
        let (a, b) = rf.pair(i);
        for j in 0..m {
            let (c, d) = rf.pair(j);
            if f.apply(a) == f.apply(c) && conn.apply(a, c, d) == Some(b) {
                pairs.push((i, j));
            }
        }
    }
    let theta = Congruence::from_pairs(rf.obj(), &pairs)?;
    let quotient = congruence_quotient(rf.obj(), &theta)?;
    let abar = quotient.algebra.clone();
    let q = quotient.projection;
    let mut fbar = vec![UNSET; abar.order()];
    for i in 0..m {
        fbar[q.apply(i)] = f.apply(rf.pair(i).0);
    }
    let fbar = Hom::new(abar.clone(), f.target().clone(), fbar)?;
    let sbar = (0..f.target().order())
        .map(|y| {
            let x = (0..f.source().order()).find(|&x| f.apply(x) == y).expect("f is surjective");
            q.apply(rf.index_of(x, x).expect("reflexive"))
        })
        .collect();
    let sbar = Hom::new(f.target().clone(), abar, sbar)?;
    let d = Direction::new(SplitPoint::new(fbar, sbar)?, sigma)?;
    Torsor::new(f.clone(), d, q)
}

fn twist_map(rf: &Relation) -> Hom {
    let map = rf
        .pair_list()
        .into_iter()
        .map(|(a, b)| rf.index_of(b, a).expect("kernel pairs are symmetric"))
        .collect();
    Hom::new(rf.obj().clone(), rf.obj().clone(), map).expect("the twist is a hom")
}

/// `(f, R^op[f], q)`: the same extension with `q ∘ tw`.
pub fn torsor_twist(t: &Torsor) -> Torsor {
    if fault::active(Fault::TwistIdentity) {
        return t.clone();
    }
    let q = t.q.after(&twist_map(&t.rf)).expect("composable");
    Torsor {
        f: t.f.clone(),
        rf: t.rf.clone(),
        direction: t.direction.clone(),
        q,
    }
}

/// The direction itself as a torsor, `q(u, v) = v - u`.
pub fn split_torsor(d: &Direction) -> Result<Torsor> {
    let f = d.point().f().clone();
    let rf = kernel_pair(&f);
    let map = rf
        .pair_list()
        .into_iter()
        .map(|(u, v)| d.add(v, d.neg(u)).expect("same fiber"))
        .collect();
    let q = Hom::new(rf.obj().clone(), d.abar().clone(), map)?;
    Torsor::new(f, d.clone(), q)
}

/// Re-expresses `t` over `d` through an isomorphism of points between the
/// two directions.
pub fn transport(t: &Torsor, d: &Direction) -> Result<Torsor> {
    if t.direction == *d {
        return Ok(t.clone());
    }
    if **t.direction.base() != **d.base() {
        return Err(Error::DirectionMismatch("directions over different bases".into()));
    }
    let from = t.direction.point();
    let to = d.point();
    let isos = enumerate_homs(
        from.domain(),
        to.domain(),
        &HomConstraints {
            injective: true,
            surjective: true,
            ..Default::default()
        },
    )?;
    let h = isos
        .into_iter()
        .find(|h| {
            (0..from.domain().order()).all(|u| to.f().apply(h.apply(u)) == from.f().apply(u))
                && (0..from.base().order()).all(|y| h.apply(from.s().apply(y)) == to.s().apply(y))
        })
        .ok_or_else(|| Error::DirectionMismatch("directions are not isomorphic".into()))?;
    Torsor::new(t.f.clone(), d.clone(), h.after(&t.q)?)
}

/// A morphism of torsors `h: X1 -> X2` with `f2 ∘ h = f1` and
/// `q2(h a, h b) = q1(a, b)`; every one found is checked to be bijective.
pub fn torsor_iso(t1: &Torsor, t2: &Torsor) -> Result<Option<Hom>> {
    if t1.direction != t2.direction {
        return Err(Error::DirectionMismatch("torsors over different directions".into()));
    }
    if t1.domain().order() != t2.domain().order() || t1.domain().kind() != t2.domain().kind() {
        return Ok(None);
    }
    let homs = enumerate_homs(t1.domain(), t2.domain(), &HomConstraints::default())?;
    for h in homs {
        let n = t1.domain().order();
        if (0..n).any(|x| t2.f.apply(h.apply(x)) != t1.f.apply(x)) {
            continue;
        }
        let ok = t1
            .rf
            .pair_list()
            .into_iter()
            .all(|(a, b)| t2.q_at(h.apply(a), h.apply(b)) == t1.q_at(a, b));
        if ok {
            if !h.is_iso() {
                return Err(Error::NotMono(format!("torsor morphism {h:?} is not bijective")));
            }
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// The Baer sum `X1 ⊗ X2`: the fiber product `P = X1 ×_Y X2` divided by
/// `(u1, u1') ~ (u2, u2')` iff `q1(u2, u1) = q2(u1', u2')`, with
/// `q([(a, a')], [(b, b')]) = q1(a, b) + q2(a', b')`.
pub fn baer_sum(t1: &Torsor, t2: &Torsor) -> Result<Torsor> {
    if t1.direction != t2.direction {
        return Err(Error::DirectionMismatch("torsors over different directions".into()));
    }
    let d = &t1.direction;
    let p = pullback(&t1.f, &t2.f)?;
    let m = p.len();
    let flip = fault::active(Fault::BaerSignFlip);
    let mut pairs = Vec::new();
    for i in 0..m {
        let (u1, v1) = (p.tuple(i)[0], p.tuple(i)[1]);
        for j in 0..m {
            let (u2, v2) = (p.tuple(j)[0], p.tuple(j)[1]);
            let lhs = if flip { t1.q_at(u1, u2) } else { t1.q_at(u2, u1) };
            if lhs.is_some() && lhs == t2.q_at(v1, v2) {
                pairs.push((i, j));
            }
        }
    }
    let by_pullback = sum_relation_by_pullback(t1, t2, &p)?;
    let mut sorted = pairs.clone();
    sorted.sort_unstable();
    if sorted != by_pullback {
        return Err(Error::Precondition(
            "sum relation differs from the pullback of R[f2] and R^op[f1]".into(),
        ));
    }
    let theta = Congruence::from_pairs(p.obj(), &pairs)?;
    let quotient = congruence_quotient(p.obj(), &theta)?;
    let x = quotient.algebra.clone();
    let proj = &quotient.projection;
    let mut f = vec![UNSET; x.order()];
    for i in 0..m {
        f[proj.apply(i)] = t1.f.apply(p.tuple(i)[0]);
    }
    let f = Hom::new(x.clone(), t1.f.target().clone(), f)?;
    let rf = kernel_pair(&f);
    let mut q = vec![UNSET; rf.len()];
    for i in 0..m {
        for j in 0..m {
            let (a, a2) = (p.tuple(i)[0], p.tuple(i)[1]);
            let (b, b2) = (p.tuple(j)[0], p.tuple(j)[1]);
            let Some(k) = rf.index_of(proj.apply(i), proj.apply(j)) else { continue };
            let v = t1
                .q_at(a, b)
                .zip(t2.q_at(a2, b2))
                .and_then(|(x1, x2)| d.add(x1, x2))
                .ok_or_else(|| Error::Precondition(format!("({a},{a2}) and ({b},{b2}) lie over different points")))?;
            if q[k] != UNSET && q[k] != v {
                return Err(Error::Inconsistent {
                    element: k,
                    first: q[k],
                    second: v,
                });
            }
            q[k] = v;
        }
    }
    let q = Hom::new(rf.obj().clone(), d.abar().clone(), q)?;
    Torsor::new(f, d.clone(), q)
}

/// The sum relation as the pullback of `q2: R[f2] -> Ā` against
/// `q1 ∘ tw: R[f1] -> Ā`, expressed on indices of `P`.
fn sum_relation_by_pullback(t1: &Torsor, t2: &Torsor, p: &crate::algebra::TupleAlgebra) -> Result<Vec<(usize, usize)>> {
    let q1op = t1.q.after(&twist_map(&t1.rf))?;
    let pb = pullback(&t2.q, &q1op)?;
    let mut out = Vec::with_capacity(pb.len());
    for t in pb.tuples() {
        let (v1, v2) = t2.rf.pair(t[0]);
        let (u1, u2) = t1.rf.pair(t[1]);
        if let (Some(i), Some(j)) = (p.index_of(&[u1, v1]), p.index_of(&[u2, v2])) {
            out.push((i, j));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All torsors over `d` whose domain is one of `candidates`.
pub fn enumerate_torsors(d: &Direction, candidates: &[Obj]) -> Result<Vec<Torsor>> {
    let y = d.base();
    let mut out = Vec::new();
    for x in candidates.iter().filter(|x| x.order() == d.abar().order() && x.kind() == y.kind()) {
        let fs = enumerate_homs(
            x,
            y,
            &HomConstraints {
                surjective: true,
                ..Default::default()
            },
        )?;
        for f in fs {
            let rf = kernel_pair(&f);
            let fixed = (0..x.order())
                .map(|a| (rf.index_of(a, a).expect("reflexive"), d.zero(f.apply(a))))
                .collect();
            let qs = enumerate_homs(
                rf.obj(),
                d.abar(),
                &HomConstraints {
                    fixed,
                    ..Default::default()
                },
            )?;
            for q in qs {
                let t = Torsor {
                    f: f.clone(),
                    rf: rf.clone(),
                    direction: d.clone(),
                    q,
                };
                if t.validate().ok() {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// `Ext(Ā, Y)` with its Baer-sum table.
#[derive(Debug, Clone)]
pub struct ExtTable {
    pub classes: Vec<Torsor>,
    pub sum: Vec<Vec<usize>>,
    pub zero: usize,
    pub neg: Vec<usize>,
}

impl ExtTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of `t`.
    pub fn class_of(&self, t: &Torsor) -> Result<Option<usize>> {
        for (i, c) in self.classes.iter().enumerate() {
            if torsor_iso(t, c)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Checks the abelian group laws of the table, with the split class as
    /// unit and twists as inverses.
    pub fn audit(&self) -> AuditReport {
        let mut report = AuditReport::new("ext-table");
        let n = self.len();
        let w = |what: &str, idx: Vec<usize>| Witness::new().value("law", what).value("classes", idx).build();
        for a in 0..n {
            report.record(self.sum[a][self.zero] == a, || format!("unit fails at {a}"), || w("unit", vec![a]));
            report.record(
                self.sum[a][self.neg[a]] == self.zero,
                || format!("twist is not inverse at {a}"),
                || w("inverse", vec![a]),
            );
            for b in 0..n {
                report.record(
                    self.sum[a][b] == self.sum[b][a],
                    || format!("not commutative at {a},{b}"),
                    || w("commutativity", vec![a, b]),
                );
                for c in 0..n {
                    report.record(
                        self.sum[self.sum[a][b]][c] == self.sum[a][self.sum[b][c]],
                        || format!("not associative at {a},{b},{c}"),
                        || w("associativity", vec![a, b, c]),
                    );
                }
            }
        }
        report
    }
}

/// Classifies the torsors over `d` with domains among `candidates` and
/// tabulates the Baer sum.
pub fn ext_table(d: &Direction, candidates: &[Obj], bound: usize) -> Result<ExtTable> {
    if d.abar().order() > bound {
        return Err(Error::BoundExceeded {
            what: "torsor domain".into(),
            size: d.abar().order(),
            bound,
        });
    }
    let mut classes: Vec<Torsor> = Vec::new();
    let split = split_torsor(d)?;
    classes.push(split);
    for t in enumerate_torsors(d, candidates)? {
        let mut known = false;
        for c in &classes {
            if torsor_iso(&t, c)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            classes.push(t);
        }
    }
    let mut table = ExtTable {
        sum: vec![vec![UNSET; classes.len()]; classes.len()],
        neg: vec![UNSET; classes.len()],
        zero: 0,
        classes,
    };
    let n = table.len();
    let missing = |what: String| Error::Precondition(format!("{what} is outside the enumerated classes"));
    for a in 0..n {
        for b in 0..n {
            let s = baer_sum(&table.classes[a], &table.classes[b])?;
            table.sum[a][b] = table.class_of(&s)?.ok_or_else(|| missing(format!("sum {a}+{b}")))?;
        }
        let tw = torsor_twist(&table.classes[a]);
        table.neg[a] = table.class_of(&tw)?.ok_or_else(|| missing(format!("twist of {a}")))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures;

    fn obj(a: crate::algebra::Algebra) -> Obj {
        a.into_obj()
    }

    fn z4_to_z2() -> Hom {
        Hom::new(obj(fixtures::cyclic_group(4)), obj(fixtures::cyclic_group(2)), vec![0, 1, 0, 1]).unwrap()
    }

    #[test]
    fn z4_direction() {
        let ws = SigmaClass::Schreier;
        let t = direction(&z4_to_z2(), &ws).unwrap();
        assert_eq!(t.direction.abar().order(), 4);
        for y in 0..2 {
            assert_eq!(t.direction.point().fiber(y).len(), 2);
        }
        assert!(t.validate().ok());
        let tt = torsor_twist(&torsor_twist(&t));
        assert_eq!(tt.q, t.q);
        assert!(torsor_iso(&t, &t).unwrap().is_some());
    }

    #[test]
    fn abelian_kernels() {
        let ws = SigmaClass::Schreier;
        let s3 = obj(fixtures::symmetric_group_s3());
        let sign = Hom::new(s3.clone(), obj(fixtures::cyclic_group(2)), vec![0, 1, 1, 0, 0, 1]).unwrap();
        assert!(is_abelian_sigma_special(&sign, &ws).unwrap());
        let bang = Hom::new(s3, obj(fixtures::cyclic_group(1)), vec![0; 6]).unwrap();
        assert!(!is_abelian_sigma_special(&bang, &ws).unwrap());
        let t = direction(&sign, &ws).unwrap();
        assert_eq!(t.direction.abar().order(), 6);
    }

    #[test]
    fn ext_of_z2_by_z2() {
        let sigma = SigmaClass::Schreier;
        let y = obj(fixtures::cyclic_group(2));
        let d = Direction::product(&y, &obj(fixtures::cyclic_group(2)), &sigma).unwrap();
        let cands = vec![obj(fixtures::cyclic_group(4)), obj(fixtures::klein_four())];
        let table = ext_table(&d, &cands, 4).unwrap();
        assert_eq!(table.len(), 2);
        assert!(table.audit().ok());
        let z4 = (0..2).find(|&i| table.classes[i].domain().order() == 4 && table.classes[i].domain().is_commutative(0) && !(0..4).all(|a| table.classes[i].domain().mul(a, a) == 0)).unwrap();
        assert_eq!(table.sum[z4][z4], table.zero);
    }

    #[test]
    fn z9_sign_convention() {
        let sigma = SigmaClass::Schreier;
        let y = obj(fixtures::cyclic_group(3));
        let d = Direction::product(&y, &obj(fixtures::cyclic_group(3)), &sigma).unwrap();
        let cands = vec![obj(fixtures::cyclic_group(9)), obj(fixtures::z3_squared())];
        let table = ext_table(&d, &cands, 9).unwrap();
        assert_eq!(table.len(), 3);
        assert!(table.audit().ok());
        let t = &table.classes[1];
        let flipped = fault::with_fault(Some(Fault::BaerSignFlip), || baer_sum(t, t));
        assert!(flipped.is_err());
    }
}
