//! Split points, their pullbacks, and the concrete classes of points.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{
    congruence_quotient, enumerate_congruences, enumerate_homs, pullback, subalgebra_inclusion,
    Congruence, Hom, HomConstraints, Kind, Obj, TupleAlgebra,
};
use crate::bitset::BitSet;
use crate::document::Witness;
use crate::error::{Error, Result};
use crate::fault::{self, Fault};
use crate::report::AuditReport;

/// A split epimorphism `f: X -> Y` with a chosen section `s`.
#[derive(Clone, PartialEq, Eq)]
pub struct SplitPoint {
    f: Hom,
    s: Hom,
}

impl fmt::Debug for SplitPoint {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "point f={:?} s={:?}", self.f, self.s)
    }
}

impl SplitPoint {
    pub fn new(f: Hom, s: Hom) -> Result<SplitPoint> {
        if **f.source() != **s.target() || **f.target() != **s.source() {
            return Err(Error::ObjectMismatch(format!("{f:?} and {s:?} do not form a point")));
        }
        if let Some(y) = (0..f.target().order()).find(|&y| f.apply(s.apply(y)) != y) {
            return Err(Error::NotSplit(format!("f(s({y})) = {}", f.apply(s.apply(y)))));
        }
        Ok(SplitPoint { f, s })
    }

    /// The identity point `(id_X, id_X)`.
    pub fn identity(x: &Obj) -> SplitPoint {
        SplitPoint {
            f: Hom::identity(x),
            s: Hom::identity(x),
        }
    }

    /// The projection `Y × K -> Y` split by `y -> (y, k0)`.
    pub fn product_projection(y: &Obj, k: &Obj, k0: usize) -> Result<SplitPoint> {
        let prod = crate::algebra::product(y, k)?;
        let f = prod.projection(0);
        let map = (0..y.order())
            .map(|b| prod.index_of(&[b, k0]).expect("product is full"))
            .collect();
        let s = Hom::new(y.clone(), prod.obj().clone(), map)?;
        SplitPoint::new(f, s)
    }

    /// The point `(d0, s0)` of the full relation `∇_X = X × X`.
    pub fn nabla(x: &Obj) -> SplitPoint {
        let prod = crate::algebra::product(x, x).expect("same signature");
        let f = prod.projection(0);
        let id = Hom::identity(x);
        let s = prod.pairing(&[&id, &id]).expect("diagonal");
        SplitPoint { f, s }
    }

    /// The terminal point `X -> 1` split by the element `e` (which must be
    /// a one-element subalgebra).
    pub fn terminal(x: &Obj, e: usize) -> Result<SplitPoint> {
        let one = Arc::new(crate::algebra::Algebra::trivial(x.kind()));
        let f = Hom::terminal(x, &one);
        let s = Hom::new(one, x.clone(), vec![e])?;
        SplitPoint::new(f, s)
    }

    pub fn f(&self) -> &Hom {
        &self.f
    }

    pub fn s(&self) -> &Hom {
        &self.s
    }

    /// The domain `X`.
    pub fn domain(&self) -> &Obj {
        self.f.source()
    }

    /// The base `Y`.
    pub fn base(&self) -> &Obj {
        self.f.target()
    }

    pub fn kind(&self) -> Kind {
        self.domain().kind()
    }

    pub fn fiber(&self, y: usize) -> Vec<usize> {
        self.f.fiber(y)
    }

    /// `f^{-1}(0)` for the distinguished constant 0 of the base: the monoid
    /// unit, or the semiring zero.
    pub fn kernel(&self) -> Result<Vec<usize>> {
        let e = self.base().unit().ok_or(Error::UnsupportedKind {
            kind: self.kind(),
            op: "kernel",
        })?;
        Ok(self.fiber(e))
    }

    pub fn is_iso(&self) -> bool {
        self.f.is_iso()
    }

    pub fn witness(&self) -> serde_json::Value {
        Witness::new().point("point", self).build()
    }
}

/// Checks that `p0: P -> A`, `p1: P -> B` exhibit `P` as the pullback of
/// `f: A -> C` and `g: B -> C`.
pub fn is_pullback_square(p0: &Hom, p1: &Hom, f: &Hom, g: &Hom) -> bool {
    let p = p0.source().order();
    if (0..p).any(|x| f.apply(p0.apply(x)) != g.apply(p1.apply(x))) {
        return false;
    }
    let (na, nb) = (p0.target().order(), p1.target().order());
    let mut seen = BitSet::new(na * nb);
    if !(0..p).all(|x| seen.insert(p0.apply(x) * nb + p1.apply(x))) {
        return false;
    }
    let expected = (0..na)
        .flat_map(|a| (0..nb).map(move |b| (a, b)))
        .filter(|&(a, b)| f.apply(a) == g.apply(b))
        .count();
    expected == p
}

/// A commutative square of split points obtained by pullback: `(f', s')`
/// over `Y'` is the pullback of `(f, s)` over `Y` along `g: Y' -> Y`.
#[derive(Debug, Clone)]
pub struct PointSquare {
    /// `(f, s): X -> Y`.
    pub point: SplitPoint,
    /// `(f', s'): X' -> Y'`.
    pub pulled: SplitPoint,
    /// `ḡ: X' -> X`.
    pub top: Hom,
    /// `g: Y' -> Y`.
    pub bottom: Hom,
    /// Section `t` of `g`, when the square is a pullback of two points.
    pub bottom_section: Option<Hom>,
    /// The induced section `t̄: X -> X'` of `ḡ`.
    pub top_section: Option<Hom>,
    /// Elements of `X'` as pairs `(y', x)`.
    pub carrier: TupleAlgebra,
    pub is_pullback: bool,
}

impl PointSquare {
    /// Checks that all faces commute, including with the sections.
    pub fn commutes(&self) -> bool {
        let (f, s) = (&self.point.f, &self.point.s);
        let (f2, s2) = (&self.pulled.f, &self.pulled.s);
        let xs = self.top.source().order();
        let ys = self.bottom.source().order();
        let faces = (0..xs).all(|x| f.apply(self.top.apply(x)) == self.bottom.apply(f2.apply(x)))
            && (0..ys).all(|y| self.top.apply(s2.apply(y)) == s.apply(self.bottom.apply(y)));
        let sections = match (&self.bottom_section, &self.top_section) {
            (Some(t), Some(tb)) => (0..f.source().order()).all(|x| {
                self.top.apply(tb.apply(x)) == x && f2.apply(tb.apply(x)) == t.apply(f.apply(x))
            }),
            (None, None) => true,
            _ => false,
        };
        faces && sections
    }

    pub fn witness(&self) -> serde_json::Value {
        let mut w = Witness::new().point("point", &self.point).hom("g", &self.bottom);
        if let Some(t) = &self.bottom_section {
            w = w.hom("t", t);
        }
        w.build()
    }
}

/// Pulls `p` back along `g: Y' -> Y`.
pub fn pullback_point(p: &SplitPoint, g: &Hom) -> Result<PointSquare> {
    if p.kind() != g.source().kind() {
        return Err(Error::SignatureMismatch(format!("{:?} and {:?}", p.kind(), g.source().kind())));
    }
    if **g.target() != **p.base() {
        return Err(Error::ObjectMismatch("base change along a map into another base".into()));
    }
    let carrier = pullback(g, &p.f)?;
    let f2 = carrier.projection(0);
    let top = carrier.projection(1);
    let id = Hom::identity(g.source());
    let sg = p.s.after(g)?;
    let s2 = carrier.pairing(&[&id, &sg])?;
    let is_pullback = is_pullback_square(&f2, &top, g, &p.f);
    Ok(PointSquare {
        point: p.clone(),
        pulled: SplitPoint { f: f2, s: s2 },
        top,
        bottom: g.clone(),
        bottom_section: None,
        top_section: None,
        carrier,
        is_pullback,
    })
}

/// The pullback of `p = (f, s)` along the split epimorphism `q = (g, t)`
/// over the same base, with the induced section `t̄(x) = (t(f(x)), x)`.
pub fn pullback_of_points(p: &SplitPoint, q: &SplitPoint) -> Result<PointSquare> {
    let mut square = pullback_point(p, &q.f)?;
    let tf = q.s.after(&p.f)?;
    let id = Hom::identity(p.domain());
    let tbar = square.carrier.pairing(&[&tf, &id])?;
    square.bottom_section = Some(q.s.clone());
    square.top_section = Some(tbar);
    Ok(square)
}

/// Whether the images of `u` and `v` generate their common codomain.
pub fn jointly_extremally_epic(u: &Hom, v: &Hom) -> Result<bool> {
    Ok(joint_closure(u, v)?.is_full())
}

/// Subalgebra generated by the images of `u` and `v`.
pub fn joint_closure(u: &Hom, v: &Hom) -> Result<BitSet> {
    if u.target().kind() != v.target().kind() {
        return Err(Error::SignatureMismatch("maps into different signatures".into()));
    }
    if **u.target() != **v.target() {
        return Err(Error::ObjectMismatch("maps into different codomains".into()));
    }
    let mut seed = u.image();
    seed.union_with(&v.image());
    Ok(u.target().closure(&seed))
}

/// Orientation of the fiber translation in the quandle classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `t -> s(y) ◁ t`.
    #[default]
    Left,
    /// `t -> t ◁ s(y)`.
    Right,
}

fn schreier_map_check(p: &SplitPoint, injective: bool) -> Result<bool> {
    if p.kind() == Kind::Quandle {
        return Err(Error::UnsupportedKind {
            kind: p.kind(),
            op: "schreier classes",
        });
    }
    let x = p.domain();
    let kernel = p.kernel()?;
    for y in 0..p.base().order() {
        let sy = p.s.apply(y);
        let fiber = p.fiber(y);
        let mut hit = BitSet::new(x.order());
        let mut collision = false;
        for &k in &kernel {
            // operation 0 is the monoid product or the semiring addition
            if !hit.insert(x.mul(k, sy)) {
                collision = true;
            }
        }
        if fiber.iter().any(|&e| !hit.contains(e)) {
            return Ok(false);
        }
        if injective && collision {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every fiber `f^{-1}(y)` equals `{k · s(y) : k ∈ f^{-1}(1)}`.
pub fn is_weakly_schreier(p: &SplitPoint) -> Result<bool> {
    if fault::active(Fault::WeaklySchreierAlwaysTrue) {
        return Ok(true);
    }
    schreier_map_check(p, false)
}

/// `k -> k · s(y)` is a bijection from the kernel onto every fiber.
pub fn is_schreier(p: &SplitPoint) -> Result<bool> {
    let injective = !fault::active(Fault::SchreierDropsInjectivity);
    schreier_map_check(p, injective)
}

fn translation_check(p: &SplitPoint, orientation: Orientation, bijective: bool) -> Result<bool> {
    if p.kind() != Kind::Quandle {
        return Err(Error::UnsupportedKind {
            kind: p.kind(),
            op: "puncturing classes",
        });
    }
    let orientation = if fault::active(Fault::PuncturingMirrored) {
        match orientation {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    } else {
        orientation
    };
    let x = p.domain();
    for y in 0..p.base().order() {
        let sy = p.s.apply(y);
        let fiber = p.fiber(y);
        let mut hit = BitSet::new(x.order());
        let mut collision = false;
        for &t in &fiber {
            let v = match orientation {
                Orientation::Left => x.mul(sy, t),
                Orientation::Right => x.mul(t, sy),
            };
            if !hit.insert(v) {
                collision = true;
            }
        }
        if fiber.iter().any(|&e| !hit.contains(e)) || (bijective && collision) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `t -> s(y) ◁ t` maps every fiber onto itself.
pub fn is_puncturing(p: &SplitPoint) -> Result<bool> {
    translation_check(p, Orientation::Left, false)
}

/// `t -> s(y) ◁ t` is a bijection of every fiber.
pub fn is_acupuncturing(p: &SplitPoint) -> Result<bool> {
    translation_check(p, Orientation::Left, true)
}

pub fn is_puncturing_oriented(p: &SplitPoint, orientation: Orientation, bijective: bool) -> Result<bool> {
    translation_check(p, orientation, bijective)
}

/// For every subalgebra `Y'` of `Y`, `f^{-1}(Y')` and `s(Y)` generate `X`.
pub fn is_strongly_split(p: &SplitPoint) -> bool {
    strongly_split_witness(p).is_none()
}

/// A subalgebra `Y'` of `Y` for which `f^{-1}(Y') ∪ s(Y)` does not
/// generate `X`.
pub fn strongly_split_witness(p: &SplitPoint) -> Option<Vec<usize>> {
    let y = p.base();
    let subs = if fault::active(Fault::StronglySplitTopOnly) {
        vec![BitSet::full(y.order())]
    } else {
        y.subalgebras()
    };
    let section = p.s.image();
    for sub in subs {
        let mut seed = p.f.preimage(&sub);
        seed.union_with(&section);
        if !p.domain().closure(&seed).is_full() {
            return Some(sub.to_vec());
        }
    }
    None
}

/// A user-supplied predicate on points.
#[derive(Clone)]
pub struct CustomClass {
    name: String,
    predicate: Arc<dyn Fn(&SplitPoint) -> bool + Send + Sync>,
}

impl CustomClass {
    pub fn new(name: impl Into<String>, predicate: impl Fn(&SplitPoint) -> bool + Send + Sync + 'static) -> Self {
        CustomClass {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }
}

/// A class `Σ` of split points.
#[derive(Clone)]
pub enum SigmaClass {
    WeaklySchreier,
    Schreier,
    Puncturing,
    Acupuncturing,
    StronglySplit,
    All,
    Custom(CustomClass),
}

impl fmt::Debug for SigmaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl SigmaClass {
    pub fn parse(name: &str) -> Option<SigmaClass> {
        Some(match name {
            "weakly-schreier" => SigmaClass::WeaklySchreier,
            "schreier" => SigmaClass::Schreier,
            "puncturing" => SigmaClass::Puncturing,
            "acupuncturing" => SigmaClass::Acupuncturing,
            "strongly-split" => SigmaClass::StronglySplit,
            "all" => SigmaClass::All,
            _ => return None,
        })
    }

    pub fn name(&self) -> String {
        match self {
            SigmaClass::WeaklySchreier => "weakly-schreier".into(),
            SigmaClass::Schreier => "schreier".into(),
            SigmaClass::Puncturing => "puncturing".into(),
            SigmaClass::Acupuncturing => "acupuncturing".into(),
            SigmaClass::StronglySplit => "strongly-split".into(),
            SigmaClass::All => "all".into(),
            SigmaClass::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// Custom class of points all of whose fibers have the same size.
    pub fn equal_fibers() -> SigmaClass {
        SigmaClass::Custom(CustomClass::new("equal-fibers", |p| {
            let sizes: Vec<usize> = (0..p.base().order()).map(|y| p.fiber(y).len()).collect();
            sizes.windows(2).all(|w| w[0] == w[1])
        }))
    }

    /// Decides membership; fails for a class not defined on the signature.
    pub fn test(&self, p: &SplitPoint) -> Result<bool> {
        match self {
            SigmaClass::WeaklySchreier => is_weakly_schreier(p),
            SigmaClass::Schreier => is_schreier(p),
            SigmaClass::Puncturing => is_puncturing(p),
            SigmaClass::Acupuncturing => is_acupuncturing(p),
            SigmaClass::StronglySplit => Ok(is_strongly_split(p)),
            SigmaClass::All => Ok(true),
            SigmaClass::Custom(c) => Ok((c.predicate)(p)),
        }
    }

    /// Membership, treating classes undefined on the signature as empty.
    pub fn contains(&self, p: &SplitPoint) -> bool {
        self.test(p).unwrap_or(false)
    }

    pub fn supports(&self, kind: Kind) -> bool {
        match self {
            SigmaClass::WeaklySchreier | SigmaClass::Schreier => kind != Kind::Quandle,
            SigmaClass::Puncturing | SigmaClass::Acupuncturing => kind == Kind::Quandle,
            _ => true,
        }
    }
}

/// All split points `X -> Y`, ordered by section then by projection.
pub fn points_between(x: &Obj, y: &Obj) -> Result<Vec<SplitPoint>> {
    if y.order() > x.order() {
        return Ok(vec![]);
    }
    let sections = enumerate_homs(
        y,
        x,
        &HomConstraints {
            injective: true,
            ..Default::default()
        },
    )?;
    let mut out = Vec::new();
    for s in sections {
        let fixed = (0..y.order()).map(|b| (s.apply(b), b)).collect();
        let fs = enumerate_homs(
            x,
            y,
            &HomConstraints {
                fixed,
                ..Default::default()
            },
        )?;
        for f in fs {
            out.push(SplitPoint { f, s: s.clone() });
        }
    }
    Ok(out)
}

/// Every point and every base map `g: Y' -> Y` of an instance set.
#[derive(Debug, Clone)]
pub struct BaseChange {
    pub point: SplitPoint,
    pub along: Hom,
}

/// Checks that `sigma` contains the isomorphisms and is stable under the
/// given base changes.
pub fn audit_fibrational(sigma: &SigmaClass, instances: &[BaseChange]) -> AuditReport {
    let mut report = AuditReport::new(format!("fibrational:{}", sigma.name()));
    for inst in instances {
        for obj in [inst.point.domain(), inst.along.source()] {
            let id = SplitPoint::identity(obj);
            report.record(
                sigma.contains(&id),
                || "identity point not in class".into(),
                || id.witness(),
            );
        }
        if !sigma.contains(&inst.point) {
            continue;
        }
        match pullback_point(&inst.point, &inst.along) {
            Ok(square) => {
                let ok = square.is_pullback && sigma.contains(&square.pulled);
                report.record(
                    ok,
                    || "pullback of a class member leaves the class".into(),
                    || square.witness(),
                );
            }
            Err(e) => report.fail(e.to_string(), Witness::new().point("point", &inst.point).hom("g", &inst.along).build()),
        }
    }
    report
}

/// Fiber product over `Y` of two points, with the induced section.
pub fn fiber_product(p: &SplitPoint, q: &SplitPoint) -> Result<SplitPoint> {
    if **p.base() != **q.base() {
        return Err(Error::ObjectMismatch("points over different bases".into()));
    }
    let carrier = pullback(&p.f, &q.f)?;
    let f = p.f.after(&carrier.projection(0))?;
    let s = carrier.pairing(&[&p.s, &q.s])?;
    SplitPoint::new(f, s)
}

/// Morphisms `u: p -> q` in the fiber over the common base.
pub fn fiber_morphisms(p: &SplitPoint, q: &SplitPoint) -> Result<Vec<Hom>> {
    let fixed = (0..p.base().order()).map(|y| (p.s.apply(y), q.s.apply(y))).collect();
    let homs = enumerate_homs(
        p.domain(),
        q.domain(),
        &HomConstraints {
            fixed,
            ..Default::default()
        },
    )?;
    Ok(homs
        .into_iter()
        .filter(|u| (0..p.domain().order()).all(|x| q.f.apply(u.apply(x)) == p.f.apply(x)))
        .collect())
}

/// The sub-point of `p` on the equalizer of two fiber morphisms.
pub fn equalizer_point(p: &SplitPoint, u: &Hom, v: &Hom) -> Result<SplitPoint> {
    let eq = BitSet::from_indices(
        p.domain().order(),
        (0..p.domain().order()).filter(|&x| u.apply(x) == v.apply(x)),
    );
    let inc = subalgebra_inclusion(p.domain(), &eq)?;
    let f = p.f.after(&inc)?;
    let mut pos = vec![usize::MAX; p.domain().order()];
    for (i, &m) in inc.map().iter().enumerate() {
        pos[m] = i;
    }
    let s = Hom::new(
        p.base().clone(),
        inc.source().clone(),
        (0..p.base().order()).map(|y| pos[p.s.apply(y)]).collect(),
    )?;
    SplitPoint::new(f, s)
}

/// Checks closure of `sigma` under the finite limits of the fiber over `y`:
/// the terminal point, binary fiber products and equalizers.
pub fn audit_point_congruous(sigma: &SigmaClass, y: &Obj, instances: &[SplitPoint]) -> AuditReport {
    let mut report = AuditReport::new(format!("point-congruous:{}", sigma.name()));
    let id = SplitPoint::identity(y);
    report.record(sigma.contains(&id), || "terminal point not in class".into(), || id.witness());
    let members: Vec<&SplitPoint> = instances
        .iter()
        .filter(|p| **p.base() == **y && sigma.contains(p))
        .collect();
    for (i, p) in members.iter().enumerate() {
        for q in &members[i..] {
            match fiber_product(p, q) {
                Ok(prod) => report.record(
                    sigma.contains(&prod),
                    || "fiber product leaves the class".into(),
                    || Witness::new().point("p", p).point("q", q).build(),
                ),
                Err(e) => report.fail(e.to_string(), Witness::new().point("p", p).point("q", q).build()),
            }
        }
        for q in &members {
            let Ok(morphisms) = fiber_morphisms(p, q) else { continue };
            for (a, u) in morphisms.iter().enumerate() {
                for v in &morphisms[a + 1..] {
                    match equalizer_point(p, u, v) {
                        Ok(e) => report.record(
                            sigma.contains(&e),
                            || "equalizer leaves the class".into(),
                            || Witness::new().point("p", p).point("q", q).hom("u", u).hom("v", v).build(),
                        ),
                        Err(err) => report.fail(err.to_string(), Witness::new().point("p", p).hom("u", u).hom("v", v).build()),
                    }
                }
            }
        }
    }
    report
}

/// A commutative square of surjections `x: X -> X'`, `y: Y -> Y'` over
/// `f: X -> Y` and `f': X' -> Y'`.
#[derive(Debug, Clone)]
pub struct SurjectiveSquare {
    pub f: Hom,
    pub f_prime: Hom,
    pub top: Hom,
    pub bottom: Hom,
}

impl SurjectiveSquare {
    pub fn witness(&self) -> serde_json::Value {
        Witness::new()
            .hom("f", &self.f)
            .hom("f'", &self.f_prime)
            .hom("x", &self.top)
            .hom("y", &self.bottom)
            .build()
    }
}

/// Whether the comparison `X -> Y ×_{Y'} X'` is surjective.
pub fn is_regular_pushout(sq: &SurjectiveSquare) -> Result<bool> {
    for (name, h) in [("f", &sq.f), ("f'", &sq.f_prime), ("x", &sq.top), ("y", &sq.bottom)] {
        if !h.is_surjective() {
            return Err(Error::NotEpi(format!("{name} = {h:?}")));
        }
    }
    let n = sq.f.source().order();
    if (0..n).any(|a| sq.f_prime.apply(sq.top.apply(a)) != sq.bottom.apply(sq.f.apply(a))) {
        return Err(Error::Precondition("square does not commute".into()));
    }
    if fault::active(Fault::RegularPushoutAssumed) {
        return Ok(true);
    }
    let (ny, nx) = (sq.f.target().order(), sq.top.target().order());
    let mut hit = BitSet::new(ny * nx);
    for a in 0..n {
        hit.insert(sq.f.apply(a) * nx + sq.top.apply(a));
    }
    let target = (0..ny)
        .flat_map(|b| (0..nx).map(move |c| (b, c)))
        .filter(|&(b, c)| sq.bottom.apply(b) == sq.f_prime.apply(c))
        .count();
    Ok(hit.count() == target)
}

/// A morphism of points `(x, y): (f, s) -> (f', s')`.
#[derive(Debug, Clone)]
pub struct PointMorphism {
    pub domain: SplitPoint,
    pub codomain: SplitPoint,
    pub top: Hom,
    pub bottom: Hom,
}

impl PointMorphism {
    pub fn is_levelwise_surjective(&self) -> bool {
        self.top.is_surjective() && self.bottom.is_surjective()
    }

    pub fn square(&self) -> SurjectiveSquare {
        SurjectiveSquare {
            f: self.domain.f.clone(),
            f_prime: self.codomain.f.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
        }
    }

    /// Whether the square `(x, y, f, f')` is a pullback.
    pub fn is_cartesian(&self) -> bool {
        is_pullback_square(&self.domain.f, &self.top, &self.bottom, &self.codomain.f)
    }

    /// The point `(R(f), R(s)): R[x] -> R[y]` induced on kernel relations.
    pub fn kernel_point(&self) -> Result<SplitPoint> {
        let rx = pullback(&self.top, &self.top)?;
        let ry = pullback(&self.bottom, &self.bottom)?;
        let f = &self.domain.f;
        let s = &self.domain.s;
        let rf: Vec<usize> = rx
            .tuples()
            .iter()
            .map(|t| {
                ry.index_of(&[f.apply(t[0]), f.apply(t[1])])
                    .ok_or_else(|| Error::Precondition("f does not respect kernels".into()))
            })
            .collect::<Result<_>>()?;
        let rs: Vec<usize> = ry
            .tuples()
            .iter()
            .map(|t| {
                rx.index_of(&[s.apply(t[0]), s.apply(t[1])])
                    .ok_or_else(|| Error::Precondition("s does not respect kernels".into()))
            })
            .collect::<Result<_>>()?;
        let rf = Hom::new(rx.obj().clone(), ry.obj().clone(), rf)?;
        let rs = Hom::new(ry.obj().clone(), rx.obj().clone(), rs)?;
        SplitPoint::new(rf, rs)
    }

    pub fn witness(&self) -> serde_json::Value {
        Witness::new()
            .point("domain", &self.domain)
            .point("codomain", &self.codomain)
            .hom("x", &self.top)
            .hom("y", &self.bottom)
            .build()
    }
}

/// Every levelwise-surjective morphism out of `p`, up to isomorphism of the
/// codomain: one for each pair of congruences `θ` on `X`, `φ` on `Y` with
/// `f(θ) ⊆ φ` and `s(φ) ⊆ θ`.
pub fn quotient_morphisms(p: &SplitPoint) -> Result<Vec<PointMorphism>> {
    let xs = enumerate_congruences(p.domain());
    let ys = enumerate_congruences(p.base());
    let mut out = Vec::new();
    for phi in &ys {
        let qy = congruence_quotient(p.base(), phi)?;
        for theta in &xs {
            if !compatible(p, theta, phi) {
                continue;
            }
            let qx = congruence_quotient(p.domain(), theta)?;
            let classes_x = theta.classes();
            let classes_y = phi.classes();
            let f2: Vec<usize> = classes_x
                .iter()
                .map(|c| qy.projection.apply(p.f.apply(c[0])))
                .collect();
            let s2: Vec<usize> = classes_y
                .iter()
                .map(|c| qx.projection.apply(p.s.apply(c[0])))
                .collect();
            let f2 = Hom::new(qx.algebra.clone(), qy.algebra.clone(), f2)?;
            let s2 = Hom::new(qy.algebra.clone(), qx.algebra.clone(), s2)?;
            out.push(PointMorphism {
                domain: p.clone(),
                codomain: SplitPoint::new(f2, s2)?,
                top: qx.projection.clone(),
                bottom: qy.projection.clone(),
            });
        }
    }
    Ok(out)
}

fn compatible(p: &SplitPoint, theta: &Congruence, phi: &Congruence) -> bool {
    let n = p.domain().order();
    let m = p.base().order();
    (0..n).all(|a| (0..n).all(|b| !theta.contains(a, b) || phi.contains(p.f.apply(a), p.f.apply(b))))
        && (0..m).all(|a| (0..m).all(|b| !phi.contains(a, b) || theta.contains(p.s.apply(a), p.s.apply(b))))
}

/// Regularity levels of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularLevel {
    /// Cartesian morphisms only.
    One,
    /// Morphisms whose kernel-relation point is in the class.
    Two,
    /// All levelwise-surjective morphisms.
    Three,
}

impl RegularLevel {
    pub fn from_number(n: u8) -> Option<RegularLevel> {
        match n {
            1 => Some(RegularLevel::One),
            2 => Some(RegularLevel::Two),
            3 => Some(RegularLevel::Three),
            _ => None,
        }
    }
}

/// For each eligible instance (levelwise surjective, domain in `sigma`,
/// plus the level's extra hypothesis) checks that the codomain is in
/// `sigma`. Ineligible instances are not counted.
pub fn audit_regular_level(sigma: &SigmaClass, level: RegularLevel, instances: &[PointMorphism]) -> AuditReport {
    let mut report = AuditReport::new(format!("regular-level-{level:?}:{}", sigma.name()));
    for m in instances {
        if !m.is_levelwise_surjective() || !sigma.contains(&m.domain) {
            continue;
        }
        let eligible = match level {
            RegularLevel::One => m.is_cartesian(),
            RegularLevel::Two => m.kernel_point().map(|k| sigma.contains(&k)).unwrap_or(false),
            RegularLevel::Three => true,
        };
        if !eligible {
            continue;
        }
        report.record(
            sigma.contains(&m.codomain),
            || "codomain point leaves the class".into(),
            || m.witness(),
        );
    }
    report
}

/// Regular-pushout check over levelwise-surjective morphisms whose domain is
/// in `sigma`.
pub fn audit_regular_pushouts(sigma: &SigmaClass, instances: &[PointMorphism]) -> AuditReport {
    let mut report = AuditReport::new(format!("regular-pushout:{}", sigma.name()));
    for m in instances {
        if !m.is_levelwise_surjective() || !sigma.contains(&m.domain) {
            continue;
        }
        match is_regular_pushout(&m.square()) {
            Ok(ok) => report.record(ok, || "comparison map not surjective".into(), || m.witness()),
            Err(e) => report.fail(e.to_string(), m.witness()),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, Algebra};

    fn obj(a: Algebra) -> Obj {
        a.into_obj()
    }

    #[test]
    fn nabla_points() {
        let b = obj(fixtures::semilattice_b());
        let z2 = obj(fixtures::cyclic_group(2));
        assert!(!is_weakly_schreier(&SplitPoint::nabla(&b)).unwrap());
        assert!(!is_schreier(&SplitPoint::nabla(&b)).unwrap());
        assert!(is_schreier(&SplitPoint::nabla(&z2)).unwrap());
    }

    #[test]
    fn product_projection_is_schreier() {
        for k in [fixtures::semilattice_b(), fixtures::cyclic_group(3), fixtures::left_zero_monoid()] {
            let k = obj(k);
            let y = obj(fixtures::semilattice_b());
            let p = SplitPoint::product_projection(&y, &k, 0).unwrap();
            assert!(is_schreier(&p).unwrap());
            assert!(is_weakly_schreier(&p).unwrap());
            assert!(is_strongly_split(&p));
        }
    }

    #[test]
    fn quandle_terminal_points() {
        let r3 = obj(fixtures::dihedral_quandle(3));
        let p = SplitPoint::terminal(&r3, 0).unwrap();
        assert!(is_acupuncturing(&p).unwrap());
        let t2 = obj(fixtures::trivial_quandle(2));
        let p = SplitPoint::terminal(&t2, 0).unwrap();
        assert!(!is_puncturing(&p).unwrap());
        // the mirrored form accepts it: t ◁ s = t
        assert!(is_puncturing_oriented(&p, Orientation::Right, true).unwrap());
    }

    #[test]
    fn identity_point_is_in_every_class() {
        let z3 = obj(fixtures::cyclic_group(3));
        let id = SplitPoint::identity(&z3);
        for c in [SigmaClass::WeaklySchreier, SigmaClass::Schreier, SigmaClass::StronglySplit, SigmaClass::All] {
            assert!(c.contains(&id));
        }
        let r3 = obj(fixtures::dihedral_quandle(3));
        let id = SplitPoint::identity(&r3);
        assert!(is_puncturing(&id).unwrap() && is_acupuncturing(&id).unwrap());
    }

    #[test]
    fn b_terminal_point_not_strongly_split() {
        // closure of f^{-1}(1) ∪ s(1) for the terminal point of B split at its unit
        let b = obj(fixtures::semilattice_b());
        let p = SplitPoint::terminal(&b, 0).unwrap();
        // Y = 1 has only itself as subalgebra, so this is strongly split
        assert!(is_strongly_split(&p));
        // ∇_B is not
        assert_eq!(strongly_split_witness(&SplitPoint::nabla(&b)), Some(vec![0]));
    }

    #[test]
    fn pullback_of_projection() {
        let y = obj(fixtures::cyclic_group(2));
        let k = obj(fixtures::semilattice_b());
        let p = SplitPoint::product_projection(&y, &k, 0).unwrap();
        let y2 = obj(fixtures::cyclic_group(4));
        let g = Hom::new(y2.clone(), y.clone(), vec![0, 1, 0, 1]).unwrap();
        let sq = pullback_point(&p, &g).unwrap();
        assert!(sq.is_pullback && sq.commutes());
        assert_eq!(sq.pulled.domain().order(), 8);
        let direct = SplitPoint::product_projection(&y2, &k, 0).unwrap();
        assert!(crate::algebra::is_isomorphic(sq.pulled.domain(), direct.domain()));
        let id = pullback_point(&p, &Hom::identity(&y)).unwrap();
        assert_eq!(id.pulled.domain().order(), p.domain().order());
    }

    #[test]
    fn jointly_epic_examples() {
        let z4 = obj(fixtures::cyclic_group(4));
        let z2 = obj(fixtures::cyclic_group(2));
        let u = Hom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let one = obj(Algebra::trivial(Kind::Monoid));
        let c = Hom::new(one.clone(), z4.clone(), vec![0]).unwrap();
        assert!(!jointly_extremally_epic(&u, &c).unwrap());
        let z4b = Hom::identity(&z4);
        assert!(jointly_extremally_epic(&c, &z4b).unwrap());
        let c2 = Hom::new(one, z2.clone(), vec![0]).unwrap();
        assert!(!jointly_extremally_epic(&c2, &c2).unwrap());
    }

    #[test]
    fn regular_pushout_of_pullback_square() {
        let z4 = obj(fixtures::cyclic_group(4));
        let z2 = obj(fixtures::cyclic_group(2));
        let one = obj(Algebra::trivial(Kind::Monoid));
        let f = Hom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let sq = SurjectiveSquare {
            f: f.clone(),
            f_prime: Hom::terminal(&z2, &one),
            top: f.clone(),
            bottom: Hom::terminal(&z2, &one),
        };
        // comparison Z4 -> Z2 × Z2 has image of size 2, target of size 4
        assert!(!is_regular_pushout(&sq).unwrap());
        let sq = SurjectiveSquare {
            f: f.clone(),
            f_prime: Hom::identity(&z2),
            top: f.clone(),
            bottom: Hom::identity(&z2),
        };
        assert!(is_regular_pushout(&sq).unwrap());
    }

    #[test]
    fn custom_classes_can_fail() {
        let small = SigmaClass::Custom(CustomClass::new("order<=2", |p| p.domain().order() <= 2));
        let z2 = obj(fixtures::cyclic_group(2));
        let one = obj(Algebra::trivial(Kind::Monoid));
        let p = SplitPoint::terminal(&z2, 0).unwrap();
        let g = Hom::terminal(&z2, &one);
        let report = audit_fibrational(&small, &[BaseChange { point: p, along: g }]);
        assert!(!report.ok());
        assert!(!report.failures[0].witness.is_null());
    }
}
