use std::fmt;
use std::sync::Arc;

use super::{Algebra, Hom, Obj};
use crate::error::{Error, Result};
use crate::fault::{self, Fault};

/// A subalgebra of a finite product `A_0 × ... × A_k`, stored as the sorted
/// list of its tuples together with the algebra structure on tuple indices.
///
/// Products, pullbacks, relations and the higher objects of composable
/// tuples are all instances.
#[derive(Clone)]
pub struct TupleAlgebra {
    algebra: Obj,
    factors: Vec<Obj>,
    tuples: Vec<Vec<usize>>,
    index: Vec<usize>,
    strides: Vec<usize>,
}

impl fmt::Debug for TupleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.tuples.iter()).finish()
    }
}

impl PartialEq for TupleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.tuples == other.tuples && self.factors == other.factors
    }
}

impl Eq for TupleAlgebra {}

/// Product of two algebras with its projections.
pub type Product = TupleAlgebra;
/// Pullback of a cospan with its projections.
pub type Pullback = TupleAlgebra;

const DENSE_LIMIT: usize = 1 << 24;

impl TupleAlgebra {
    /// Builds the subalgebra on `tuples`; fails if they are not closed
    /// under the componentwise operations and constants.
    pub fn from_tuples(factors: Vec<Obj>, mut tuples: Vec<Vec<usize>>) -> Result<TupleAlgebra> {
        let kind = factors
            .first()
            .ok_or_else(|| Error::Shape("tuple algebra needs at least one factor".into()))?
            .kind();
        if let Some(bad) = factors.iter().find(|f| f.kind() != kind) {
            return Err(Error::SignatureMismatch(format!(
                "{kind:?} and {:?} factors",
                bad.kind()
            )));
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut size = 1usize;
        for f in &factors {
            strides.push(size);
            size = size
                .checked_mul(f.order())
                .filter(|&s| s <= DENSE_LIMIT)
                .ok_or_else(|| Error::BoundExceeded {
                    what: "tuple product".into(),
                    size: usize::MAX,
                    bound: DENSE_LIMIT,
                })?;
        }
        for t in &tuples {
            if t.len() != factors.len() || t.iter().zip(&factors).any(|(&x, f)| x >= f.order()) {
                return Err(Error::Shape(format!("tuple {t:?} out of range")));
            }
        }
        tuples.sort();
        tuples.dedup();
        let code = |t: &[usize]| t.iter().zip(&strides).map(|(x, s)| x * s).sum::<usize>();
        let mut index = vec![usize::MAX; size];
        for (i, t) in tuples.iter().enumerate() {
            index[code(t)] = i;
        }
        let m = tuples.len();
        let arity = kind.arity();
        let mut ops = vec![Vec::with_capacity(m * m); arity];
        let mut buf = vec![0; factors.len()];
        for (k, table) in ops.iter_mut().enumerate() {
            for s in &tuples {
                for t in &tuples {
                    for (j, f) in factors.iter().enumerate() {
                        buf[j] = f.op(k, s[j], t[j]);
                    }
                    let i = index[code(&buf)];
                    if i == usize::MAX {
                        return Err(Error::NotClosed(format!(
                            "operation {k} on {s:?}, {t:?} gives {buf:?}"
                        )));
                    }
                    table.push(i);
                }
            }
        }
        let mut constants = Vec::with_capacity(kind.constant_count());
        for c in 0..kind.constant_count() {
            for (j, f) in factors.iter().enumerate() {
                buf[j] = f.constants()[c];
            }
            let i = index[code(&buf)];
            if i == usize::MAX {
                return Err(Error::NotClosed(format!("constant {c} tuple {buf:?} missing")));
            }
            constants.push(i);
        }
        let algebra = Arc::new(Algebra::from_parts(kind, m, ops, constants));
        Ok(TupleAlgebra {
            algebra,
            factors,
            tuples,
            index,
            strides,
        })
    }

    pub fn obj(&self) -> &Obj {
        &self.algebra
    }

    pub fn factors(&self) -> &[Obj] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        if t.len() != self.factors.len() || t.iter().zip(&self.factors).any(|(&x, f)| x >= f.order()) {
            return None;
        }
        let code: usize = t.iter().zip(&self.strides).map(|(x, s)| x * s).sum();
        match self.index[code] {
            usize::MAX => None,
            i => Some(i),
        }
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.index_of(t).is_some()
    }

    /// Projection onto factor `j`.
    pub fn projection(&self, j: usize) -> Hom {
        Hom::new_unchecked(
            self.algebra.clone(),
            self.factors[j].clone(),
            self.tuples.iter().map(|t| t[j]).collect(),
        )
    }

    /// The map `x -> (h_0(x), ..., h_k(x))` into this subalgebra.
    pub fn pairing(&self, homs: &[&Hom]) -> Result<Hom> {
        let source = homs
            .first()
            .ok_or_else(|| Error::Shape("pairing needs at least one map".into()))?
            .source()
            .clone();
        if homs.len() != self.factors.len() {
            return Err(Error::Shape(format!(
                "pairing of {} maps into {} factors",
                homs.len(),
                self.factors.len()
            )));
        }
        for (h, f) in homs.iter().zip(&self.factors) {
            if **h.source() != *source || **h.target() != **f {
                return Err(Error::ObjectMismatch(format!("{h:?} does not fit the cone")));
            }
        }
        let mut map = Vec::with_capacity(source.order());
        for x in 0..source.order() {
            let t: Vec<usize> = homs.iter().map(|h| h.apply(x)).collect();
            let i = self
                .index_of(&t)
                .ok_or_else(|| Error::NotPullback(format!("{t:?} is not in the limit")))?;
            map.push(i);
        }
        Ok(Hom::new_unchecked(source, self.algebra.clone(), map))
    }
}

/// Cartesian product `A × B`.
pub fn product(a: &Obj, b: &Obj) -> Result<Product> {
    if a.kind() != b.kind() {
        return Err(Error::SignatureMismatch(format!(
            "{:?} × {:?}",
            a.kind(),
            b.kind()
        )));
    }
    let tuples = (0..a.order())
        .flat_map(|x| (0..b.order()).map(move |y| vec![x, y]))
        .collect();
    TupleAlgebra::from_tuples(vec![a.clone(), b.clone()], tuples)
}

/// Pullback `{(x, y) : f(x) = g(y)}` of `f: X -> Z` and `g: Y -> Z`.
pub fn pullback(f: &Hom, g: &Hom) -> Result<Pullback> {
    if f.source().kind() != g.source().kind() {
        return Err(Error::SignatureMismatch(format!(
            "{:?} and {:?}",
            f.source().kind(),
            g.source().kind()
        )));
    }
    if **f.target() != **g.target() {
        return Err(Error::ObjectMismatch("pullback of maps with different codomains".into()));
    }
    let drop_check = fault::active(Fault::PullbackDropsCheck);
    let tuples = (0..f.source().order())
        .flat_map(|x| (0..g.source().order()).map(move |y| (x, y)))
        .filter(|&(x, y)| drop_check || f.apply(x) == g.apply(y))
        .map(|(x, y)| vec![x, y])
        .collect();
    TupleAlgebra::from_tuples(vec![f.source().clone(), g.source().clone()], tuples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, Kind};

    #[test]
    fn klein_from_product() {
        let z2 = fixtures::cyclic_group(2).into_obj();
        let p = product(&z2, &z2).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.obj().revalidate().is_ok());
        assert!(p.projection(0).verify().is_ok());
        for x in 0..4 {
            assert_eq!(p.obj().mul(x, x), p.obj().unit().unwrap());
        }
    }

    #[test]
    fn r3_squared_is_a_quandle() {
        let r3 = fixtures::dihedral_quandle(3).into_obj();
        let p = product(&r3, &r3).unwrap();
        assert_eq!(p.len(), 9);
        assert!(p.obj().revalidate().is_ok());
    }

    #[test]
    fn kernel_pair_of_parity() {
        let z4 = fixtures::cyclic_group(4).into_obj();
        let z2 = fixtures::cyclic_group(2).into_obj();
        let f = Hom::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        let kp = pullback(&f, &f).unwrap();
        assert_eq!(kp.len(), 8);
        let id = Hom::identity(&z4);
        assert_eq!(pullback(&id, &id).unwrap().len(), 4);
        let one = Algebra::trivial(Kind::Monoid).into_obj();
        let t = Hom::terminal(&z4, &one);
        assert_eq!(pullback(&t, &t).unwrap().len(), 16);
    }

    #[test]
    fn pairing_into_product() {
        let z3 = fixtures::cyclic_group(3).into_obj();
        let p = product(&z3, &z3).unwrap();
        let id = Hom::identity(&z3);
        let diag = p.pairing(&[&id, &id]).unwrap();
        assert!(diag.verify().is_ok());
        assert_eq!(p.projection(0).after(&diag).unwrap(), id);
    }
}
