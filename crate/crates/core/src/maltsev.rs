//! The Σ-Mal'tsev square condition and its consequences: internal
//! categories and groupoids on Σ-graphs, abelian points, base change along
//! split epimorphisms, normal monomorphisms and cores.

use std::collections::VecDeque;

use serde_json::Value;

use crate::algebra::{
    enumerate_congruences, enumerate_homs, pullback, subalgebra_inclusion, Catalog, Hom, HomConstraints, Kind,
    Obj, TupleAlgebra,
};
use crate::bitset::BitSet;
use crate::centrality::{centralizes, connector};
use crate::document::Witness;
use crate::error::{Error, Result};
use crate::points::{
    fiber_morphisms, is_pullback_square, joint_closure, points_between, pullback_point, strongly_split_witness,
    PointSquare, SigmaClass, SplitPoint,
};
use crate::relations::{enumerate_reflexive_relations, is_sigma_relation, kernel_pair, Relation, RelationFilter};
use crate::report::AuditReport;

const UNSET: usize = usize::MAX;

/// Verdict of the square condition on one pullback of points.
#[derive(Debug, Clone)]
pub struct MaltsevSquareReport {
    pub square: PointSquare,
    pub verdict: bool,
    /// An element of `X'` outside the subalgebra generated by the sections.
    pub witness: Option<usize>,
}

impl MaltsevSquareReport {
    pub fn witness_value(&self) -> Value {
        let mut v = self.square.witness();
        if let (Some(w), Value::Object(m)) = (self.witness, &mut v) {
            m.insert("missed".into(), Value::from(self.square.carrier.tuple(w).to_vec()));
        }
        v
    }
}

/// Checks that `(s', t̄)` is jointly extremally epic on the pullback carrier.
pub fn maltsev_square(square: &PointSquare) -> Result<MaltsevSquareReport> {
    if !square.is_pullback {
        return Err(Error::NotPullback("square of points".into()));
    }
    let tbar = square
        .top_section
        .as_ref()
        .ok_or_else(|| Error::Precondition("square has no induced section".into()))?;
    let closed = joint_closure(square.pulled.s(), tbar)?;
    let witness = (0..square.carrier.len()).find(|&i| !closed.contains(i));
    Ok(MaltsevSquareReport {
        square: square.clone(),
        verdict: witness.is_none(),
        witness,
    })
}

/// Extends the forced values of a map `domain -> target` through the
/// operations of `domain`; fails on a clash or when something is unreached.
fn propagate(domain: &Obj, target: &Obj, forced: &[(usize, usize)]) -> Result<Vec<usize>> {
    let m = domain.order();
    let mut values = vec![UNSET; m];
    let mut queue = VecDeque::new();
    let set = |values: &mut Vec<usize>, queue: &mut VecDeque<usize>, l: usize, v: usize| -> Result<()> {
        if values[l] == UNSET {
            values[l] = v;
            queue.push_back(l);
            Ok(())
        } else if values[l] != v {
            Err(Error::Inconsistent {
                element: l,
                first: values[l],
                second: v,
            })
        } else {
            Ok(())
        }
    };
    for &(a, v) in forced {
        set(&mut values, &mut queue, a, v)?;
    }
    for (&c, &d) in domain.constants().iter().zip(target.constants()) {
        set(&mut values, &mut queue, c, d)?;
    }
    let mut done = Vec::with_capacity(m);
    while let Some(i) = queue.pop_front() {
        done.push(i);
        for j in done.clone() {
            for k in 0..domain.kind().arity() {
                for (a, b) in [(i, j), (j, i)] {
                    let v = target.op(k, values[a], values[b]);
                    set(&mut values, &mut queue, domain.op(k, a, b), v)?;
                }
            }
        }
    }
    if let Some(i) = values.iter().position(|&v| v == UNSET) {
        return Err(Error::Underdetermined(i));
    }
    Ok(values)
}

/// A reflexive graph `d0, d1: X1 -> X0` with common section `s0`.
///
/// An element `a` of `X1` is read as an arrow from `d0(a)` to `d1(a)`.
#[derive(Debug, Clone)]
pub struct ReflexiveGraph {
    pub d0: Hom,
    pub d1: Hom,
    pub s0: Hom,
}

impl ReflexiveGraph {
    pub fn new(d0: Hom, d1: Hom, s0: Hom) -> Result<ReflexiveGraph> {
        if **d0.source() != **d1.source() || **d0.target() != **d1.target() {
            return Err(Error::ObjectMismatch("d0 and d1 are not parallel".into()));
        }
        if **s0.source() != **d0.target() || **s0.target() != **d0.source() {
            return Err(Error::ObjectMismatch("s0 is not opposite to d0".into()));
        }
        if let Some(x) = (0..d0.target().order()).find(|&x| d0.apply(s0.apply(x)) != x || d1.apply(s0.apply(x)) != x)
        {
            return Err(Error::NotSplit(format!("d_i(s0({x})) != {x}")));
        }
        Ok(ReflexiveGraph { d0, d1, s0 })
    }

    pub fn from_relation(r: &Relation) -> Result<ReflexiveGraph> {
        ReflexiveGraph::new(r.d0(), r.d1(), r.s0()?)
    }

    /// The graph with `d0 = d1 = f` and `s0 = s`.
    pub fn from_point(p: &SplitPoint) -> ReflexiveGraph {
        ReflexiveGraph {
            d0: p.f().clone(),
            d1: p.f().clone(),
            s0: p.s().clone(),
        }
    }

    pub fn x1(&self) -> &Obj {
        self.d0.source()
    }

    pub fn x0(&self) -> &Obj {
        self.d0.target()
    }

    /// The point `(d0, s0)`.
    pub fn point(&self) -> Result<SplitPoint> {
        SplitPoint::new(self.d0.clone(), self.s0.clone())
    }

    /// `X2`: pairs `(a, b)` with `d1(a) = d0(b)`.
    pub fn composable(&self) -> Result<TupleAlgebra> {
        pullback(&self.d1, &self.d0)
    }

    /// `X3`: composable triples.
    pub fn composable_triples(&self) -> Vec<[usize; 3]> {
        let n = self.x1().order();
        let mut out = Vec::new();
        for a in 0..n {
            for b in (0..n).filter(|&b| self.d1.apply(a) == self.d0.apply(b)) {
                for c in (0..n).filter(|&c| self.d1.apply(b) == self.d0.apply(c)) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    pub fn witness(&self) -> Value {
        Witness::new().hom("d0", &self.d0).hom("d1", &self.d1).hom("s0", &self.s0).build()
    }
}

/// A composition `X2 -> X1` making a reflexive graph a category.
#[derive(Debug, Clone)]
pub struct CategoryStructure {
    pub graph: ReflexiveGraph,
    pub composable: TupleAlgebra,
    /// `comp(a, b)` is `a` followed by `b`.
    pub comp: Hom,
}

impl CategoryStructure {
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.composable.index_of(&[a, b]).map(|i| self.comp.apply(i))
    }

    /// Every arrow has a two-sided inverse.
    pub fn is_groupoid(&self) -> bool {
        let g = &self.graph;
        (0..g.x1().order()).all(|a| {
            (0..g.x1().order()).any(|h| {
                self.compose(a, h) == Some(g.s0.apply(g.d0.apply(a)))
                    && self.compose(h, a) == Some(g.s0.apply(g.d1.apply(a)))
            })
        })
    }
}

/// Values of the composition forced by the identity laws.
fn identity_constraints(g: &ReflexiveGraph, x2: &TupleAlgebra) -> Vec<(usize, usize)> {
    let mut forced = Vec::new();
    for a in 0..g.x1().order() {
        let right = g.s0.apply(g.d1.apply(a));
        let left = g.s0.apply(g.d0.apply(a));
        forced.push((x2.index_of(&[a, right]).expect("identity is composable"), a));
        forced.push((x2.index_of(&[left, a]).expect("identity is composable"), a));
    }
    forced
}

/// Checks incidence and associativity of a candidate composition.
fn category_axioms(g: &ReflexiveGraph, x2: &TupleAlgebra, comp: &[usize]) -> Result<()> {
    for (i, t) in x2.tuples().iter().enumerate() {
        let c = comp[i];
        if g.d0.apply(c) != g.d0.apply(t[0]) || g.d1.apply(c) != g.d1.apply(t[1]) {
            return Err(Error::AxiomViolation {
                axiom: "incidence".into(),
                witness: t.clone(),
            });
        }
    }
    let at = |a: usize, b: usize| x2.index_of(&[a, b]).map(|i| comp[i]);
    for [a, b, c] in g.composable_triples() {
        let lhs = at(a, b).and_then(|ab| at(ab, c));
        let rhs = at(b, c).and_then(|bc| at(a, bc));
        if lhs.is_none() || lhs != rhs {
            return Err(Error::AxiomViolation {
                axiom: "associativity".into(),
                witness: vec![a, b, c],
            });
        }
    }
    Ok(())
}

/// The unique category structure on a Σ-graph, propagated from the
/// identity laws over `X2` and checked on `X3`.
pub fn graph_category_structure(g: &ReflexiveGraph, sigma: &SigmaClass) -> Result<CategoryStructure> {
    if !sigma.contains(&g.point()?) {
        return Err(Error::NotSigmaGraph(sigma.name()));
    }
    category_structure_unchecked(g)
}

fn category_structure_unchecked(g: &ReflexiveGraph) -> Result<CategoryStructure> {
    let x2 = g.composable()?;
    let values = propagate(x2.obj(), g.x1(), &identity_constraints(g, &x2))?;
    category_axioms(g, &x2, &values)?;
    let comp = Hom::new(x2.obj().clone(), g.x1().clone(), values)?;
    Ok(CategoryStructure {
        graph: g.clone(),
        composable: x2,
        comp,
    })
}

/// Every composition hom satisfying the identity laws, incidence and
/// associativity, found by hom enumeration.
pub fn category_structure_oracle(g: &ReflexiveGraph) -> Result<Vec<Hom>> {
    let x2 = g.composable()?;
    let homs = enumerate_homs(
        x2.obj(),
        g.x1(),
        &HomConstraints {
            fixed: identity_constraints(g, &x2),
            ..Default::default()
        },
    )?;
    Ok(homs
        .into_iter()
        .filter(|h| category_axioms(g, &x2, h.map()).is_ok())
        .collect())
}

/// The internal monoid structure `R[f] -> X` of a point in `sigma`, if any.
pub fn fiber_monoid_structure(p: &SplitPoint, sigma: &SigmaClass) -> Result<Option<CategoryStructure>> {
    match graph_category_structure(&ReflexiveGraph::from_point(p), sigma) {
        Ok(c) => Ok(Some(c)),
        Err(Error::Inconsistent { .. } | Error::Underdetermined(_) | Error::AxiomViolation { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `m(a, b) = m(b, a)` for a fiberwise structure.
pub fn is_commutative_structure(c: &CategoryStructure) -> bool {
    c.composable
        .tuples()
        .iter()
        .all(|t| c.compose(t[0], t[1]) == c.compose(t[1], t[0]))
}

/// Groupoid composition read off the connector of `(R[d0], R[d1])`:
/// for `a` followed by `b`, `comp(a, b) = p(b, 1, a)` with `1 = s0(d1(a))`.
pub fn groupoid_from_connector(g: &ReflexiveGraph) -> Result<CategoryStructure> {
    let r0 = kernel_pair(&g.d0);
    let r1 = kernel_pair(&g.d1);
    let c = connector(&r0, &r1)?;
    let x2 = g.composable()?;
    let mut values = Vec::with_capacity(x2.len());
    for t in x2.tuples() {
        let (a, b) = (t[0], t[1]);
        let one = g.s0.apply(g.d1.apply(a));
        values.push(c.apply(b, one, a).ok_or_else(|| Error::Precondition(format!("({b},{one},{a}) not in domain")))?);
    }
    category_axioms(g, &x2, &values)?;
    let comp = Hom::new(x2.obj().clone(), g.x1().clone(), values)?;
    Ok(CategoryStructure {
        graph: g.clone(),
        composable: x2,
        comp,
    })
}

/// Verdict of the groupoid characterization on a reflexive graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidVerdict {
    /// `R[d0]` is a Σ-relation.
    pub sigma_kernel: bool,
    /// `[R[d0], R[d1]] = 0`.
    pub centralized: bool,
    /// The composition from the connector is a groupoid.
    pub groupoid: bool,
}

impl GroupoidVerdict {
    pub fn holds(&self) -> bool {
        self.sigma_kernel && self.centralized && self.groupoid
    }
}

/// Whether the graph underlies an internal Σ-groupoid.
pub fn is_internal_groupoid(g: &ReflexiveGraph, sigma: &SigmaClass) -> Result<GroupoidVerdict> {
    let r0 = kernel_pair(&g.d0);
    let sigma_kernel = is_sigma_relation(&r0, sigma);
    let centralized = sigma_kernel && centralizes(&r0, &kernel_pair(&g.d1), sigma)?;
    let groupoid = centralized
        && match groupoid_from_connector(g) {
            Ok(c) => c.is_groupoid(),
            Err(Error::AxiomViolation { .. } | Error::Precondition(_)) => false,
            Err(e) => return Err(e),
        };
    Ok(GroupoidVerdict {
        sigma_kernel,
        centralized,
        groupoid,
    })
}

/// Both routes of the abelian-point characterization.
#[derive(Debug, Clone)]
pub struct AbelianVerdict {
    /// `R[f]` is a Σ-relation and `[R[f], R[f]] = 0`.
    pub connector_route: bool,
    /// The point is in Σ and carries an internal group structure.
    pub group_route: bool,
    /// The fiberwise operation when it exists.
    pub operation: Option<CategoryStructure>,
}

impl AbelianVerdict {
    pub fn agree(&self) -> bool {
        self.connector_route == self.group_route
    }
}

pub fn is_abelian_point(p: &SplitPoint, sigma: &SigmaClass) -> Result<AbelianVerdict> {
    let rf = kernel_pair(p.f());
    let connector_route = is_sigma_relation(&rf, sigma) && centralizes(&rf, &rf, sigma)?;
    let operation = if sigma.contains(p) {
        fiber_monoid_structure(p, sigma)?
    } else {
        None
    };
    let group_route = operation.as_ref().is_some_and(|c| c.is_groupoid());
    Ok(AbelianVerdict {
        connector_route,
        group_route,
        operation,
    })
}

/// Comparison of fiber hom-sets under base change along `g`.
#[derive(Debug, Clone)]
pub struct FullFaithfulness {
    pub upstairs: usize,
    pub downstairs: usize,
    /// `g*(k)` for each `k: A -> B`, as indices into the downstairs list.
    pub bijection: Vec<usize>,
    pub is_bijective: bool,
}

/// `g*(k)(y', x) = (y', k(x))` between the pulled-back carriers.
fn pulled_morphism(a: &PointSquare, b: &PointSquare, k: &Hom) -> Result<Hom> {
    let map = a
        .carrier
        .tuples()
        .iter()
        .map(|t| b.carrier.index_of(&[t[0], k.apply(t[1])]).ok_or_else(|| Error::NotAHom("g*(k)".into())))
        .collect::<Result<Vec<_>>>()?;
    Hom::new(a.carrier.obj().clone(), b.carrier.obj().clone(), map)
}

/// Full faithfulness of `g*` on `A -> B` for points `A`, `B` over `Z`.
pub fn base_change_hom_bijection(g: &Hom, a: &SplitPoint, b: &SplitPoint) -> Result<FullFaithfulness> {
    let up = fiber_morphisms(a, b)?;
    let pa = pullback_point(a, g)?;
    let pb = pullback_point(b, g)?;
    let down = fiber_morphisms(&pa.pulled, &pb.pulled)?;
    let mut bijection = Vec::with_capacity(up.len());
    let mut hit = BitSet::new(down.len());
    let mut injective = true;
    for k in &up {
        let h = pulled_morphism(&pa, &pb, k)?;
        let i = down.iter().position(|d| *d == h).ok_or_else(|| Error::NotAHom("g*(k) is not a fiber map".into()))?;
        injective &= hit.insert(i);
        bijection.push(i);
    }
    Ok(FullFaithfulness {
        upstairs: up.len(),
        downstairs: down.len(),
        is_bijective: injective && hit.is_full(),
        bijection,
    })
}

/// Sub-points of `p`: subalgebras of the domain containing `s(Y)`.
fn sub_points(p: &SplitPoint) -> Result<Vec<(BitSet, SplitPoint)>> {
    let seed = p.s().image();
    let mut out = Vec::new();
    for sub in p.domain().subalgebras_containing(&seed) {
        let inc = subalgebra_inclusion(p.domain(), &sub)?;
        let mut pos = vec![UNSET; p.domain().order()];
        for (i, &m) in inc.map().iter().enumerate() {
            pos[m] = i;
        }
        let f = p.f().after(&inc)?;
        let s = Hom::new(
            p.base().clone(),
            inc.source().clone(),
            (0..p.base().order()).map(|y| pos[p.s().apply(y)]).collect(),
        )?;
        out.push((sub, SplitPoint::new(f, s)?));
    }
    Ok(out)
}

/// Comparison of Σ-subobjects under base change.
#[derive(Debug, Clone)]
pub struct SubobjectSaturation {
    pub upstairs: usize,
    pub downstairs: usize,
    pub bijection: Vec<usize>,
    pub is_bijective: bool,
}

/// Sub-points of `B` in `sigma` against sub-points of `g*(B)` in `sigma`,
/// matched by `M -> g*(M)`.
pub fn base_change_subobject_bijection(g: &Hom, b: &SplitPoint, sigma: &SigmaClass) -> Result<SubobjectSaturation> {
    let pb = pullback_point(b, g)?;
    let up: Vec<BitSet> = sub_points(b)?
        .into_iter()
        .filter(|(_, p)| sigma.contains(p))
        .map(|(m, _)| m)
        .collect();
    let down: Vec<BitSet> = sub_points(&pb.pulled)?
        .into_iter()
        .filter(|(_, p)| sigma.contains(p))
        .map(|(m, _)| m)
        .collect();
    let mut bijection = Vec::with_capacity(up.len());
    let mut hit = BitSet::new(down.len());
    let mut injective = true;
    for m in &up {
        let image = BitSet::from_indices(
            pb.carrier.len(),
            (0..pb.carrier.len()).filter(|&i| m.contains(pb.carrier.tuple(i)[1])),
        );
        match down.iter().position(|d| *d == image) {
            Some(i) => {
                injective &= hit.insert(i);
                bijection.push(i);
            }
            None => {
                injective = false;
                bijection.push(UNSET);
            }
        }
    }
    Ok(SubobjectSaturation {
        upstairs: up.len(),
        downstairs: down.len(),
        is_bijective: injective && hit.is_full(),
        bijection,
    })
}

/// Runs both saturation checks for the split epimorphism `(g, t): Y -> Z`
/// against the points `A` (in `sigma`) and `B` over `Z`.
pub fn base_change_fully_faithful(q: &SplitPoint, points: &[SplitPoint], sigma: &SigmaClass) -> Result<AuditReport> {
    let mut report = AuditReport::new(format!("base-change:{}", sigma.name()));
    let g = q.f();
    let over: Vec<&SplitPoint> = points.iter().filter(|p| **p.base() == **g.target()).collect();
    for a in over.iter().filter(|a| sigma.contains(a)) {
        for b in &over {
            let ff = base_change_hom_bijection(g, a, b)?;
            report.record(
                ff.is_bijective && ff.upstairs == ff.downstairs,
                || format!("hom sets {} upstairs, {} downstairs", ff.upstairs, ff.downstairs),
                || Witness::new().point("split", q).point("A", a).point("B", b).build(),
            );
        }
    }
    for b in &over {
        let sat = base_change_subobject_bijection(g, b, sigma)?;
        report.record(
            sat.is_bijective && sat.upstairs == sat.downstairs,
            || format!("subobjects {} upstairs, {} downstairs", sat.upstairs, sat.downstairs),
            || Witness::new().point("split", q).point("B", b).build(),
        );
    }
    Ok(report)
}

/// Evidence that `m: U -> X` is normal to `S`.
#[derive(Debug, Clone)]
pub struct NormalityCertificate {
    pub m: Hom,
    pub s: Relation,
    /// The map `U × U -> S`, `(u, v) -> (m u, m v)`.
    pub square_map: Hom,
}

/// Whether `m⁻¹(S) = ∇_U` and the squares of `(U × U ⇉ U) -> (S ⇉ X)` are
/// pullbacks.
pub fn is_normal_mono(m: &Hom, s: &Relation) -> Result<Option<NormalityCertificate>> {
    if !m.is_injective() {
        return Err(Error::NotMono(format!("{m:?}")));
    }
    if !s.is_equivalence() || **s.source() != **m.target() {
        return Err(Error::Precondition("normality needs an equivalence relation on the codomain".into()));
    }
    let u = m.source();
    let n = u.order();
    if (0..n).any(|a| (0..n).any(|b| !s.contains(m.apply(a), m.apply(b)))) {
        return Ok(None);
    }
    let full = Relation::full(u);
    let map = full
        .pair_list()
        .into_iter()
        .map(|(a, b)| s.index_of(m.apply(a), m.apply(b)).expect("m⁻¹(S) is total"))
        .collect();
    let square_map = Hom::new(full.obj().clone(), s.obj().clone(), map)?;
    let pull0 = is_pullback_square(&square_map, &full.d0(), &s.d0(), m);
    let pull1 = is_pullback_square(&square_map, &full.d1(), &s.d1(), m);
    Ok((pull0 && pull1).then(|| NormalityCertificate {
        m: m.clone(),
        s: s.clone(),
        square_map,
    }))
}

/// The Σ-equivalence relations of `X` to which `m` is normal.
pub fn normal_sigma_equivalences(m: &Hom, sigma: &SigmaClass) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for theta in enumerate_congruences(m.target()) {
        let s = Relation::from_congruence(&theta);
        if is_sigma_relation(&s, sigma) && is_normal_mono(m, &s)?.is_some() {
            out.push(s);
        }
    }
    Ok(out)
}

/// `R[f]` is a Σ-relation.
pub fn is_sigma_special_morphism(f: &Hom, sigma: &SigmaClass) -> bool {
    is_sigma_relation(&kernel_pair(f), sigma)
}

/// The terminal map of `X` is Σ-special, i.e. `∇_X` is a Σ-relation.
pub fn is_sigma_special_object(x: &Obj, sigma: &SigmaClass) -> bool {
    is_sigma_relation(&Relation::full(x), sigma)
}

/// Core membership of one catalog algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMember {
    pub name: String,
    pub order: usize,
    pub special: bool,
    pub expected: bool,
}

/// Result of [`core_audit`].
#[derive(Debug, Clone)]
pub struct CoreAudit {
    pub members: Vec<CoreMember>,
    pub report: AuditReport,
}

/// The direct axiom check that the core is expected to match: groups,
/// rings and latin quandles.
pub fn expected_core_member(x: &Obj) -> bool {
    match x.kind() {
        Kind::Monoid => x.is_group(),
        Kind::Semiring => x.is_ring(),
        Kind::Quandle => x.is_latin(),
    }
}

/// Partitions the catalog into Σ-special objects and the rest, compares
/// with [`expected_core_member`], and checks Mal'tsev behavior inside the
/// core: every reflexive relation is an equivalence, and, for the Schreier
/// classes, every point between core members is strongly split.
pub fn core_audit(catalog: &Catalog, sigma: &SigmaClass, max_order: usize) -> Result<CoreAudit> {
    let mut report = AuditReport::new(format!("core:{}", sigma.name()));
    let mut members = Vec::new();
    let mut core: Vec<Obj> = Vec::new();
    for x in catalog.up_to(max_order) {
        let special = is_sigma_special_object(&x, sigma);
        let expected = expected_core_member(&x);
        report.record(
            special == expected,
            || format!("{} special={special} expected={expected}", x.label()),
            || Witness::new().algebra("X", &x).build(),
        );
        members.push(CoreMember {
            name: x.label(),
            order: x.order(),
            special,
            expected,
        });
        if special {
            core.push(x);
        }
    }
    for x in &core {
        for r in enumerate_reflexive_relations(x, &RelationFilter::default())? {
            report.record(
                r.is_equivalence(),
                || format!("reflexive relation on core member {} is not an equivalence", x.label()),
                || Witness::new().algebra("X", x).relation("R", &r.pair_list()).build(),
            );
        }
    }
    if matches!(sigma, SigmaClass::Schreier) {
        for x in &core {
            for y in &core {
                for p in points_between(x, y)? {
                    let w = strongly_split_witness(&p);
                    report.record(
                        w.is_none(),
                        || "point between core members is not strongly split".into(),
                        || Witness::new().point("point", &p).value("subalgebra", &w).build(),
                    );
                }
            }
        }
    }
    Ok(CoreAudit { members, report })
}

/// Bounded pushout check for the upward square `ḡ ∘ s' = s ∘ g` of a
/// pullback of points: every cocone `(φ, σ)` into a test codomain factors
/// through `X` (necessarily as `φ ∘ t̄`).
pub fn pushout_square_check(square: &PointSquare, codomains: &[Obj]) -> Result<AuditReport> {
    let mut report = AuditReport::new("pushout-square");
    let tbar = square
        .top_section
        .as_ref()
        .ok_or_else(|| Error::Precondition("square has no induced section".into()))?;
    let (s2, s, g, gbar) = (square.pulled.s(), square.point.s(), &square.bottom, &square.top);
    for t in codomains.iter().filter(|t| t.kind() == g.source().kind()) {
        let phis = enumerate_homs(s2.target(), t, &HomConstraints::default())?;
        let sigmas = enumerate_homs(s.source(), t, &HomConstraints::default())?;
        for phi in &phis {
            for sg in &sigmas {
                let cocone = (0..g.source().order()).all(|y| phi.apply(s2.apply(y)) == sg.apply(g.apply(y)));
                if !cocone {
                    continue;
                }
                let psi = phi.after(tbar)?;
                let factors = (0..gbar.source().order()).all(|x| psi.apply(gbar.apply(x)) == phi.apply(x))
                    && (0..s.source().order()).all(|y| psi.apply(s.apply(y)) == sg.apply(y));
                report.record(
                    factors,
                    || "cocone does not factor through the square".into(),
                    || square.witness(),
                );
            }
        }
    }
    Ok(report)
}

/// A morphism of reflexive graphs given by `g1: X1 -> X1'` and
/// `g0: X0 -> X0'`, tested for cartesianness of both squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSquares {
    pub d0_pullback: bool,
    pub d1_pullback: bool,
}

pub fn split_graph_cartesian_check(
    upper: &ReflexiveGraph,
    lower: &ReflexiveGraph,
    g1: &Hom,
    g0: &Hom,
) -> Result<GraphSquares> {
    let n = upper.x1().order();
    for a in 0..n {
        if g0.apply(upper.d0.apply(a)) != lower.d0.apply(g1.apply(a))
            || g0.apply(upper.d1.apply(a)) != lower.d1.apply(g1.apply(a))
        {
            return Err(Error::Precondition(format!("graph morphism fails to commute at {a}")));
        }
    }
    Ok(GraphSquares {
        d0_pullback: is_pullback_square(g1, &upper.d0, &lower.d0, g0),
        d1_pullback: is_pullback_square(g1, &upper.d1, &lower.d1, g0),
    })
}

/// The graph morphism `(p0^R, d0^S)` from the centralizing double relation
/// `R ⋊_X S ⇉ S` down to `R ⇉ X`.
pub fn double_relation_graphs(r: &Relation, s: &Relation) -> Result<(ReflexiveGraph, ReflexiveGraph, Hom, Hom)> {
    let c = connector(r, s)?;
    let dcr = crate::centrality::DoubleCentralizingRelation::new(&c)?;
    let map = s
        .pair_list()
        .into_iter()
        .map(|(x, z)| dcr.carrier.index_of(&[x, x, z]).expect("(x, x, z) is a triple"))
        .collect();
    let section = Hom::new(s.obj().clone(), dcr.carrier.obj().clone(), map)?;
    let upper = ReflexiveGraph::new(dcr.p0s.clone(), dcr.p1s.clone(), section)?;
    let lower = ReflexiveGraph::from_relation(r)?;
    Ok((upper, lower, dcr.p0r.clone(), s.d0()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, Algebra};
    use crate::points::{pullback_of_points, SplitPoint};

    fn obj(a: Algebra) -> Obj {
        a.into_obj()
    }

    #[test]
    fn square_with_iso_base_change_is_epic() {
        let y = obj(fixtures::cyclic_group(2));
        let p = SplitPoint::product_projection(&y, &obj(fixtures::semilattice_b()), 0).unwrap();
        let q = SplitPoint::identity(&y);
        let sq = pullback_of_points(&p, &q).unwrap();
        assert!(maltsev_square(&sq).unwrap().verdict);
    }

    #[test]
    fn semilattice_nabla_square_fails() {
        let b = obj(fixtures::semilattice_b());
        let p = SplitPoint::nabla(&b);
        let sq = pullback_of_points(&p, &p).unwrap();
        let rep = maltsev_square(&sq).unwrap();
        assert!(!rep.verdict);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn congruence_graph_is_a_groupoid() {
        let z4 = obj(fixtures::cyclic_group(4));
        let z2 = obj(fixtures::cyclic_group(2));
        let f = Hom::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        let g = ReflexiveGraph::from_relation(&kernel_pair(&f)).unwrap();
        let ws = SigmaClass::WeaklySchreier;
        let c = graph_category_structure(&g, &ws).unwrap();
        assert!(c.is_groupoid());
        assert_eq!(category_structure_oracle(&g).unwrap(), vec![c.comp.clone()]);
        let v = is_internal_groupoid(&g, &ws).unwrap();
        assert!(v.holds());
        assert_eq!(groupoid_from_connector(&g).unwrap().comp, c.comp);
    }

    #[test]
    fn fiber_monoids() {
        let y = obj(fixtures::cyclic_group(2));
        let ws = SigmaClass::WeaklySchreier;
        let comm = SplitPoint::product_projection(&y, &obj(fixtures::cyclic_group(3)), 0).unwrap();
        let c = fiber_monoid_structure(&comm, &ws).unwrap().unwrap();
        assert!(is_commutative_structure(&c));
        let lz = SplitPoint::product_projection(&y, &obj(fixtures::left_zero_monoid()), 0).unwrap();
        assert!(fiber_monoid_structure(&lz, &SigmaClass::All).unwrap().is_none());
        let id = SplitPoint::identity(&y);
        assert!(fiber_monoid_structure(&id, &ws).unwrap().is_some());
    }

    #[test]
    fn abelian_points() {
        let y = obj(fixtures::cyclic_group(2));
        let ws = SigmaClass::WeaklySchreier;
        let z3 = SplitPoint::product_projection(&y, &obj(fixtures::cyclic_group(3)), 0).unwrap();
        let v = is_abelian_point(&z3, &ws).unwrap();
        assert!(v.connector_route && v.group_route);
        let b = SplitPoint::product_projection(&y, &obj(fixtures::semilattice_b()), 0).unwrap();
        let v = is_abelian_point(&b, &ws).unwrap();
        assert!(!v.connector_route && v.agree());
    }

    #[test]
    fn normality() {
        let z4 = obj(fixtures::cyclic_group(4));
        let z2 = obj(fixtures::cyclic_group(2));
        let f = Hom::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        let k = subalgebra_inclusion(&z4, &BitSet::from_indices(4, [0, 2])).unwrap();
        assert!(is_normal_mono(&k, &kernel_pair(&f)).unwrap().is_some());
        assert!(is_normal_mono(&Hom::identity(&z4), &Relation::full(&z4)).unwrap().is_some());
        assert_eq!(normal_sigma_equivalences(&k, &SigmaClass::Schreier).unwrap().len(), 1);
        assert!(is_sigma_special_object(&z4, &SigmaClass::Schreier));
        assert!(!is_sigma_special_object(&obj(fixtures::semilattice_b()), &SigmaClass::WeaklySchreier));
    }

    #[test]
    fn base_change_along_iso_is_bijective() {
        let z = obj(fixtures::cyclic_group(2));
        let id = SplitPoint::identity(&z);
        let pts = vec![
            SplitPoint::identity(&z),
            SplitPoint::product_projection(&z, &obj(fixtures::cyclic_group(2)), 0).unwrap(),
        ];
        assert!(base_change_fully_faithful(&id, &pts, &SigmaClass::Schreier).unwrap().ok());
    }

    #[test]
    fn pushout_and_graph_squares() {
        let y = obj(fixtures::cyclic_group(2));
        let p = SplitPoint::product_projection(&y, &obj(fixtures::cyclic_group(2)), 0).unwrap();
        let sq = pullback_of_points(&p, &p).unwrap();
        let rep = pushout_square_check(&sq, &[y.clone(), obj(fixtures::klein_four())]).unwrap();
        assert!(rep.ok() && rep.instances > 0);
        let x = obj(fixtures::klein_four());
        let r = kernel_pair(&Hom::new(x.clone(), y.clone(), vec![0, 0, 1, 1]).unwrap());
        let s = kernel_pair(&Hom::new(x, y, vec![0, 1, 0, 1]).unwrap());
        let (upper, lower, g1, g0) = double_relation_graphs(&r, &s).unwrap();
        let sq = split_graph_cartesian_check(&upper, &lower, &g1, &g0).unwrap();
        assert!(sq.d0_pullback && sq.d1_pullback);
    }
}
