//! Internal relations: subalgebras of `X × Y` given by their pairs.

use std::fmt;

use crate::algebra::{product, pullback, Congruence, Hom, Obj, TupleAlgebra};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fault::{self, Fault};
use crate::points::{SigmaClass, SplitPoint};

/// A relation `R ↣ X × Y` closed under the componentwise operations.
///
/// Relations on a single object are the reflexive relations, equivalence
/// relations, kernel pairs and so on of the workbench; the predicates below
/// tell them apart.
#[derive(Clone)]
pub struct Relation {
    pairs: TupleAlgebra,
    matrix: BitSet,
}

/// A relation on one object containing the diagonal.
pub type ReflexiveRelation = Relation;

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
    }
}

impl Eq for Relation {}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.pair_list())
    }
}

impl Relation {
    /// Builds a relation, checking that the pairs form a subalgebra.
    pub fn new(source: &Obj, target: &Obj, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let tuples = pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
        let pairs = TupleAlgebra::from_tuples(vec![source.clone(), target.clone()], tuples)?;
        Ok(Relation::from_tuple_algebra(pairs))
    }

    /// Builds a reflexive relation on `x`.
    pub fn reflexive(x: &Obj, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let r = Relation::new(x, x, pairs)?;
        if let Some(a) = (0..x.order()).find(|&a| !r.contains(a, a)) {
            return Err(Error::NotReflexive(a));
        }
        Ok(r)
    }

    pub(crate) fn from_tuple_algebra(pairs: TupleAlgebra) -> Relation {
        assert_eq!(pairs.factors().len(), 2);
        let m = pairs.factors()[1].order();
        let n = pairs.factors()[0].order();
        let matrix = BitSet::from_indices(n * m, pairs.tuples().iter().map(|t| t[0] * m + t[1]));
        Relation { pairs, matrix }
    }

    /// The least relation containing `seed`.
    pub fn generated(source: &Obj, target: &Obj, seed: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let prod = product(source, target)?;
        let m = target.order();
        let seed = BitSet::from_indices(prod.len(), seed.into_iter().map(|(a, b)| a * m + b));
        let closed = prod.obj().closure(&seed);
        Relation::new(source, target, closed.iter().map(|i| (i / m, i % m)))
    }

    /// `Δ_X`.
    pub fn diagonal(x: &Obj) -> Relation {
        Relation::new(x, x, (0..x.order()).map(|a| (a, a))).expect("diagonal is a subalgebra")
    }

    /// `∇_X`.
    pub fn full(x: &Obj) -> Relation {
        let n = x.order();
        Relation::new(x, x, (0..n).flat_map(|a| (0..n).map(move |b| (a, b)))).expect("product is a subalgebra")
    }

    pub fn from_congruence(theta: &Congruence) -> Relation {
        Relation::new(theta.algebra(), theta.algebra(), theta.pairs()).expect("congruences are subalgebras")
    }

    pub fn source(&self) -> &Obj {
        &self.pairs.factors()[0]
    }

    pub fn target(&self) -> &Obj {
        &self.pairs.factors()[1]
    }

    /// The algebra `R` itself (elements are pair indices).
    pub fn obj(&self) -> &Obj {
        self.pairs.obj()
    }

    pub fn tuples(&self) -> &TupleAlgebra {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.matrix.contains(a * self.target().order() + b)
    }

    /// Pair at index `i` of `R`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        let t = self.pairs.tuple(i);
        (t[0], t[1])
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.index_of(&[a, b])
    }

    pub fn pair_list(&self) -> Vec<(usize, usize)> {
        self.pairs.tuples().iter().map(|t| (t[0], t[1])).collect()
    }

    pub fn d0(&self) -> Hom {
        self.pairs.projection(0)
    }

    pub fn d1(&self) -> Hom {
        self.pairs.projection(1)
    }

    /// The diagonal `s0: X -> R` of a reflexive relation.
    pub fn s0(&self) -> Result<Hom> {
        let id = Hom::identity(self.source());
        if **self.source() != **self.target() {
            return Err(Error::ObjectMismatch("s0 of a heterogeneous relation".into()));
        }
        self.pairs.pairing(&[&id, &id]).map_err(|_| {
            let a = (0..self.source().order()).find(|&a| !self.contains(a, a)).unwrap_or(0);
            Error::NotReflexive(a)
        })
    }

    /// The point `(d0, s0)`.
    pub fn point(&self) -> Result<SplitPoint> {
        SplitPoint::new(self.d0(), self.s0()?)
    }

    /// The point `(d1, s0)`.
    pub fn point_d1(&self) -> Result<SplitPoint> {
        SplitPoint::new(self.d1(), self.s0()?)
    }

    /// `R^op`.
    pub fn transpose(&self) -> Relation {
        Relation::new(self.target(), self.source(), self.pair_list().into_iter().map(|(a, b)| (b, a)))
            .expect("transposes of subalgebras are subalgebras")
    }

    fn is_endo(&self) -> bool {
        **self.source() == **self.target()
    }

    pub fn is_reflexive(&self) -> bool {
        self.is_endo() && (0..self.source().order()).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_endo() && self.pair_list().iter().all(|&(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    /// A triple `x R y R z` with `(x, z) ∉ R`.
    pub fn transitivity_witness(&self) -> Option<[usize; 3]> {
        if !self.is_endo() {
            return None;
        }
        let n = self.source().order();
        for (a, b) in self.pair_list() {
            for c in 0..n {
                if self.contains(b, c) && !self.contains(a, c) {
                    return Some([a, b, c]);
                }
            }
        }
        None
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    /// Equivalence relation; being a subalgebra, then also a congruence.
    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    pub fn to_congruence(&self) -> Result<Congruence> {
        Congruence::from_pairs(self.source(), &self.pair_list())
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pair_list().iter().all(|&(a, b)| other.contains(a, b))
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        if **self.source() != **other.source() || **self.target() != **other.target() {
            return Err(Error::ObjectMismatch("intersection of relations on different objects".into()));
        }
        Relation::new(
            self.source(),
            self.target(),
            self.pair_list().into_iter().filter(|&(a, b)| other.contains(a, b)),
        )
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_reflexive() && self.len() == self.source().order()
    }
}

/// `R[f] = {(a, b) : f(a) = f(b)}`.
pub fn kernel_pair(f: &Hom) -> Relation {
    let x = f.source();
    let n = x.order();
    let pairs = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| f.apply(a) == f.apply(b));
    if fault::active(Fault::KernelPairHalf) {
        return Relation::generated(x, x, pairs.filter(|&(a, b)| a <= b)).expect("same signature");
    }
    Relation::new(x, x, pairs).expect("kernel pairs are subalgebras")
}

/// Whether `(d0, s0)` of the reflexive relation `r` is in `sigma`.
pub fn is_sigma_relation(r: &Relation, sigma: &SigmaClass) -> bool {
    r.point().map(|p| sigma.contains(&p)).unwrap_or(false)
}

/// `R ×_X R`: composable pairs `((a, b), (b, c))` of a relation, as pairs of
/// indices of `R`.
pub fn composable_pairs(r: &Relation) -> Result<TupleAlgebra> {
    pullback(&r.d1(), &r.d0())
}

/// The simplicial kernel of a reflexive relation.
#[derive(Debug, Clone)]
pub struct SimplicialKernel {
    /// Triples `(x0, x1, x2)` pairwise related in order.
    pub triples: TupleAlgebra,
    /// `(x0, x1)`.
    pub pi0: Hom,
    /// `(x0, x2)`.
    pub pi1: Hom,
    /// `(x1, x2)`.
    pub pi2: Hom,
}

pub fn simplicial_kernel(r: &Relation) -> Result<SimplicialKernel> {
    if !r.is_reflexive() {
        let a = (0..r.source().order()).find(|&a| !r.contains(a, a)).unwrap_or(0);
        return Err(Error::NotReflexive(a));
    }
    let x = r.source();
    let n = x.order();
    let mut tuples = Vec::new();
    for (a, b) in r.pair_list() {
        for c in 0..n {
            if r.contains(b, c) && r.contains(a, c) {
                tuples.push(vec![a, b, c]);
            }
        }
    }
    let triples = TupleAlgebra::from_tuples(vec![x.clone(); 3], tuples)?;
    let proj = |i: usize, j: usize| {
        let map = triples
            .tuples()
            .iter()
            .map(|t| r.index_of(t[i], t[j]).expect("pairs of triples are related"))
            .collect();
        Hom::new(triples.obj().clone(), r.obj().clone(), map)
    };
    Ok(SimplicialKernel {
        pi0: proj(0, 1)?,
        pi1: proj(0, 2)?,
        pi2: proj(1, 2)?,
        triples,
    })
}

/// Outcome of the transitivity construction.
#[derive(Debug, Clone)]
pub enum Transitivity {
    /// `π1 ∘ (π0, π2)^{-1}: R ×_X R -> R`.
    Map { composable: TupleAlgebra, map: Hom },
    /// A composable pair `x R y`, `y R z` outside the image of `(π0, π2)`.
    Missing { first: (usize, usize), second: (usize, usize) },
}

/// Tries to invert the factorization `(π0, π2): K -> R ×_X R`.
pub fn transitivity_by_construction(r: &Relation) -> Result<Transitivity> {
    let k = simplicial_kernel(r)?;
    let composable = composable_pairs(r)?;
    let mut preimage = vec![usize::MAX; composable.len()];
    for t in 0..k.triples.len() {
        let i = composable
            .index_of(&[k.pi0.apply(t), k.pi2.apply(t)])
            .expect("(π0, π2) lands in composable pairs");
        preimage[i] = t;
    }
    let assume_iso = fault::active(Fault::SimplicialAssumedIso);
    let mut map = Vec::with_capacity(composable.len());
    for (i, &t) in preimage.iter().enumerate() {
        if t == usize::MAX {
            let (p, q) = (composable.tuple(i)[0], composable.tuple(i)[1]);
            if assume_iso {
                let (a, _) = r.pair(p);
                map.push(r.index_of(a, a).expect("reflexive"));
                continue;
            }
            return Ok(Transitivity::Missing {
                first: r.pair(p),
                second: r.pair(q),
            });
        }
        map.push(k.pi1.apply(t));
    }
    let map = Hom::new(composable.obj().clone(), r.obj().clone(), map)?;
    Ok(Transitivity::Map { composable, map })
}

/// Checks that a transitivity map sends `((x, y), (y, z))` to `(x, z)`.
pub fn transitivity_map_is_sound(r: &Relation, t: &Transitivity) -> bool {
    match t {
        Transitivity::Map { composable, map } => (0..composable.len()).all(|i| {
            let (x, _) = r.pair(composable.tuple(i)[0]);
            let (_, z) = r.pair(composable.tuple(i)[1]);
            r.pair(map.apply(i)) == (x, z)
        }),
        Transitivity::Missing { .. } => true,
    }
}

/// `R ∘ S = {(x, z) : ∃y, x R y ∧ y S z}` for `R: X ↛ Y`, `S: Y ↛ Z`.
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation> {
    if **r.target() != **s.source() {
        return Err(Error::ObjectMismatch("composite of relations with different middle objects".into()));
    }
    if fault::active(Fault::ComposeIntersects) && **r.source() == **s.target() {
        return r.intersection(s);
    }
    let zs = s.target().order();
    let mut out = BitSet::new(r.source().order() * zs);
    for (x, y) in r.pair_list() {
        for z in 0..zs {
            if s.contains(y, z) {
                out.insert(x * zs + z);
            }
        }
    }
    Relation::new(r.source(), s.target(), out.iter().map(|i| (i / zs, i % zs)))
}

/// `R ∘ S = S ∘ R`.
pub fn permutes(r: &Relation, s: &Relation) -> Result<bool> {
    Ok(compose(r, s)? == compose(s, r)?)
}

/// `f(S) = {(f(a), f(b)) : a S b}` along a surjection `f`.
pub fn direct_image(f: &Hom, s: &Relation) -> Result<Relation> {
    if !f.is_surjective() {
        return Err(Error::NotEpi(format!("{f:?}")));
    }
    if **s.source() != **f.source() || **s.target() != **f.source() {
        return Err(Error::ObjectMismatch("relation not on the domain of f".into()));
    }
    let y = f.target();
    if fault::active(Fault::DirectImageDiagonal) {
        return Ok(Relation::diagonal(y));
    }
    Relation::new(y, y, s.pair_list().into_iter().map(|(a, b)| (f.apply(a), f.apply(b))))
}

/// `u^{-1}(S) = {(a, b) : u(a) S u(b)}`.
pub fn inverse_image(u: &Hom, s: &Relation) -> Result<Relation> {
    if **s.source() != **u.target() || **s.target() != **u.target() {
        return Err(Error::ObjectMismatch("relation not on the codomain of u".into()));
    }
    let n = u.source().order();
    Relation::new(
        u.source(),
        u.source(),
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| s.contains(u.apply(a), u.apply(b))),
    )
}

/// Filters for [`enumerate_reflexive_relations`].
#[derive(Debug, Clone, Default)]
pub struct RelationFilter {
    pub symmetric: bool,
    pub equivalence: bool,
    pub sigma: Option<SigmaClass>,
}

/// Default bound on the order of `X` for relation enumeration.
pub const RELATION_BOUND: usize = 4;

/// All reflexive relations on `x`, ordered by size then pairs.
pub fn enumerate_reflexive_relations(x: &Obj, filter: &RelationFilter) -> Result<Vec<Relation>> {
    enumerate_reflexive_relations_bounded(x, filter, RELATION_BOUND)
}

pub fn enumerate_reflexive_relations_bounded(x: &Obj, filter: &RelationFilter, bound: usize) -> Result<Vec<Relation>> {
    if x.order() > bound {
        return Err(Error::BoundExceeded {
            what: "relation enumeration".into(),
            size: x.order(),
            bound,
        });
    }
    let n = x.order();
    let prod = product(x, x)?;
    let diagonal = BitSet::from_indices(n * n, (0..n).map(|a| a * n + a));
    let mut out = Vec::new();
    for sub in prod.obj().subalgebras_containing(&diagonal) {
        let r = Relation::new(x, x, sub.iter().map(|i| (i / n, i % n)))?;
        if filter.symmetric && !r.is_symmetric() {
            continue;
        }
        if filter.equivalence && !r.is_equivalence() {
            continue;
        }
        if let Some(sigma) = &filter.sigma {
            if !is_sigma_relation(&r, sigma) {
                continue;
            }
        }
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, Algebra, Kind};

    fn parity() -> (Obj, Hom, Relation) {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let z2 = fixtures::cyclic_group(2).into_obj();
        let f = Hom::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        let r = kernel_pair(&f);
        (z4, f, r)
    }

    #[test]
    fn kernel_pairs() {
        let (z4, _, r) = parity();
        assert_eq!(r.len(), 8);
        assert!(r.is_equivalence());
        assert_eq!(kernel_pair(&Hom::identity(&z4)), Relation::diagonal(&z4));
        let one = Algebra::trivial(Kind::Monoid).into_obj();
        assert_eq!(kernel_pair(&Hom::terminal(&z4, &one)), Relation::full(&z4));
    }

    #[test]
    fn sigma_relations() {
        let z2 = fixtures::cyclic_group(2).into_obj();
        let b = fixtures::semilattice_b().into_obj();
        assert!(is_sigma_relation(&Relation::full(&z2), &SigmaClass::Schreier));
        assert!(!is_sigma_relation(&Relation::full(&b), &SigmaClass::WeaklySchreier));
        assert!(is_sigma_relation(&Relation::diagonal(&b), &SigmaClass::Schreier));
    }

    #[test]
    fn simplicial_kernel_sizes() {
        let z2 = fixtures::cyclic_group(2).into_obj();
        assert_eq!(simplicial_kernel(&Relation::full(&z2)).unwrap().triples.len(), 8);
        let s3 = fixtures::symmetric_group_s3().into_obj();
        assert_eq!(simplicial_kernel(&Relation::diagonal(&s3)).unwrap().triples.len(), 6);
    }

    #[test]
    fn order_on_b_is_not_symmetric() {
        let b = fixtures::semilattice_b().into_obj();
        let all = enumerate_reflexive_relations(&b, &RelationFilter::default()).unwrap();
        let order = Relation::reflexive(&b, [(0, 0), (1, 1), (0, 1)]).unwrap();
        assert!(all.contains(&order));
        assert!(!order.is_symmetric() && order.is_transitive());
    }

    #[test]
    fn relations_on_z2_and_trivial() {
        let z2 = fixtures::cyclic_group(2).into_obj();
        let all = enumerate_reflexive_relations(&z2, &RelationFilter::default()).unwrap();
        assert_eq!(all, vec![Relation::diagonal(&z2), Relation::full(&z2)]);
        let one = Algebra::trivial(Kind::Monoid).into_obj();
        assert_eq!(enumerate_reflexive_relations(&one, &RelationFilter::default()).unwrap().len(), 1);
    }

    #[test]
    fn composition_laws() {
        let (z4, _, r) = parity();
        let d = Relation::diagonal(&z4);
        assert_eq!(compose(&r, &d).unwrap(), r);
        assert_eq!(compose(&d, &r).unwrap(), r);
        assert_eq!(compose(&r, &r).unwrap(), r);
        assert!(permutes(&r, &d).unwrap());
    }

    #[test]
    fn images() {
        let (z4, f, r) = parity();
        let z2 = f.target().clone();
        assert_eq!(direct_image(&f, &r).unwrap(), Relation::diagonal(&z2));
        assert_eq!(direct_image(&f, &Relation::full(&z4)).unwrap(), Relation::full(&z2));
        assert_eq!(direct_image(&Hom::identity(&z4), &r).unwrap(), r);
        let sub = crate::algebra::subalgebra_inclusion(&z4, &BitSet::from_indices(4, [0, 2])).unwrap();
        let back = inverse_image(&sub, &r).unwrap();
        assert_eq!(back, Relation::full(sub.source()));
        assert_eq!(inverse_image(&Hom::identity(&z4), &r).unwrap(), r);
    }

    #[test]
    fn transitivity_construction_on_order() {
        let (_, _, r) = parity();
        let t = transitivity_by_construction(&r).unwrap();
        assert!(matches!(t, Transitivity::Map { .. }));
        assert!(transitivity_map_is_sound(&r, &t));
    }

    #[test]
    fn non_transitive_relation_has_missing_pair() {
        // search the catalog for a reflexive non-transitive relation
        let mut found = false;
        for n in 1..=3 {
            for a in crate::algebra::enumerate_algebras(Kind::Monoid, n).unwrap() {
                let a = a.into_obj();
                for r in enumerate_reflexive_relations(&a, &RelationFilter::default()).unwrap() {
                    if !r.is_transitive() {
                        found = true;
                        assert!(matches!(
                            transitivity_by_construction(&r).unwrap(),
                            Transitivity::Missing { .. }
                        ));
                    }
                }
            }
        }
        assert!(found);
    }
}
