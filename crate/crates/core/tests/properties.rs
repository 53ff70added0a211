use std::sync::OnceLock;

use proptest::prelude::*;
use sigma_lab::algebra::{
    congruence_quotient, enumerate_congruences, enumerate_homs, fixtures, is_isomorphic, validate, Catalog,
    Congruence, HomConstraints, RawAlgebra,
};
use sigma_lab::centrality::{centralizes, connector, connector_oracle, Triples};
use sigma_lab::extensions::{baer_sum, enumerate_torsors, ext_table, Direction, ExtTable, Torsor};
use sigma_lab::relations::{enumerate_reflexive_relations, inverse_image, kernel_pair, RelationFilter};
use sigma_lab::{BitSet, Error, Kind, Obj, Relation, SigmaClass};

fn monoids() -> &'static Vec<Obj> {
    static CELL: OnceLock<Vec<Obj>> = OnceLock::new();
    CELL.get_or_init(|| Catalog::new(Kind::Monoid, 4).unwrap().all())
}

fn quandles() -> &'static Vec<Obj> {
    static CELL: OnceLock<Vec<Obj>> = OnceLock::new();
    CELL.get_or_init(|| Catalog::new(Kind::Quandle, 4).unwrap().all())
}

fn mask(n: usize, bits: u32) -> BitSet {
    BitSet::from_indices(n, (0..n).filter(|i| bits >> i & 1 == 1))
}

/// Ext over Z3 with every torsor found, grouped by class.
fn z3_ext() -> &'static (ExtTable, Vec<(Torsor, usize)>) {
    static CELL: OnceLock<(ExtTable, Vec<(Torsor, usize)>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let z3 = fixtures::cyclic_group(3).into_obj();
        let d = Direction::product(&z3, &z3, &SigmaClass::Schreier).unwrap();
        let cands = vec![fixtures::cyclic_group(9).into_obj(), fixtures::z3_squared().into_obj()];
        let table = ext_table(&d, &cands, 9).unwrap();
        let torsors = enumerate_torsors(&d, &cands)
            .unwrap()
            .into_iter()
            .map(|t| {
                let c = table.class_of(&t).unwrap().unwrap();
                (t, c)
            })
            .collect();
        (table, torsors)
    })
}

/// A witness reported by `validate` really violates the named axiom.
fn witness_is_real(t: &[Vec<usize>], unit: usize, axiom: &str, w: &[usize]) -> bool {
    match axiom {
        "associativity" => t[t[w[0]][w[1]]][w[2]] != t[w[0]][t[w[1]][w[2]]],
        "unit law" => t[unit][w[0]] != w[0] || t[w[0]][unit] != w[0],
        _ => false,
    }
}

fn quandle_witness_is_real(t: &[Vec<usize>], axiom: &str, w: &[usize]) -> bool {
    match axiom {
        "idempotency" => t[w[0]][w[0]] != w[0],
        "right translation bijective" => w[1] != w[2] && t[w[1]][w[0]] == t[w[2]][w[0]],
        "self-distributivity" => t[t[w[0]][w[1]]][w[2]] != t[t[w[0]][w[2]]][t[w[1]][w[2]]],
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_closure_operator(i in 0usize..1000, a in 0u32..16, b in 0u32..16) {
        let x = &monoids()[i % monoids().len()];
        let n = x.order();
        let (s, t) = (mask(n, a), mask(n, b & a));
        let cs = x.closure(&s);
        prop_assert!(s.is_subset(&cs));
        prop_assert_eq!(x.closure(&cs), cs.clone());
        prop_assert!(x.closure(&t).is_subset(&cs));
        prop_assert!(x.is_closed(&cs));
    }

    #[test]
    fn mutated_monoid_tables_are_caught_with_real_witnesses(i in 0usize..1000, cell in 0usize..16, v in 0usize..4) {
        let x = &monoids()[i % monoids().len()];
        let n = x.order();
        let mut t = x.table(0);
        let (r, c) = (cell / n % n, cell % n);
        t[r][c] = v % n;
        let unit = x.unit().unwrap();
        match validate(Kind::Monoid, RawAlgebra { tables: vec![t.clone()], unit: Some(unit), name: None }) {
            Ok(_) => {}
            Err(Error::AxiomViolation { axiom, witness }) => prop_assert!(witness_is_real(&t, unit, &axiom, &witness)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn mutated_quandle_tables_are_caught_with_real_witnesses(i in 0usize..1000, cell in 0usize..16, v in 0usize..4) {
        let x = &quandles()[i % quandles().len()];
        let n = x.order();
        let mut t = x.table(0);
        t[cell / n % n][cell % n] = v % n;
        match validate(Kind::Quandle, RawAlgebra { tables: vec![t.clone()], unit: None, name: None }) {
            Ok(_) => {}
            Err(Error::AxiomViolation { axiom, witness }) => prop_assert!(quandle_witness_is_real(&t, &axiom, &witness)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn kernel_pair_quotient_is_the_image(i in 0usize..1000, j in 0usize..1000, k in 0usize..64) {
        let (a, b) = (&monoids()[i % monoids().len()], &monoids()[j % monoids().len()]);
        let homs = enumerate_homs(a, b, &HomConstraints::default()).unwrap();
        let f = &homs[k % homs.len()];
        let theta = Congruence::kernel(f);
        let q = congruence_quotient(a, &theta).unwrap();
        prop_assert_eq!(q.algebra.order(), f.image().count());
        let image = sigma_lab::algebra::image_factorization(f).0;
        prop_assert!(is_isomorphic(&q.algebra, image.target()));
        prop_assert_eq!(kernel_pair(f).len(), theta.pair_count());
    }

    #[test]
    fn inverse_image_is_pointwise(i in 0usize..1000, j in 0usize..1000, k in 0usize..64, r in 0usize..64) {
        let (a, b) = (&monoids()[i % monoids().len()], &monoids()[j % monoids().len()]);
        let homs = enumerate_homs(a, b, &HomConstraints::default()).unwrap();
        let u = &homs[k % homs.len()];
        let rels = enumerate_reflexive_relations(b, &RelationFilter::default()).unwrap();
        let s = &rels[r % rels.len()];
        let pre = inverse_image(u, s).unwrap();
        for x in 0..a.order() {
            for y in 0..a.order() {
                prop_assert_eq!(pre.contains(x, y), s.contains(u.apply(x), u.apply(y)));
            }
        }
        prop_assert!(pre.is_reflexive());
    }

    #[test]
    fn connector_is_unique(i in 0usize..1000, r in 0usize..256, s in 0usize..256) {
        let x = &monoids()[i % monoids().len()];
        let all = enumerate_reflexive_relations(x, &RelationFilter::default()).unwrap();
        let ws = enumerate_reflexive_relations(x, &RelationFilter { sigma: Some(SigmaClass::WeaklySchreier), ..Default::default() }).unwrap();
        let (rel, srel) = (&all[r % all.len()], &ws[s % ws.len()]);
        prop_assume!(Triples::new(rel, srel).unwrap().len() <= 16);
        let solutions = connector_oracle(rel, srel, 16).unwrap();
        prop_assert!(solutions.len() <= 1);
        match connector(rel, srel) {
            Ok(c) => prop_assert_eq!(vec![c.values().to_vec()], solutions),
            Err(_) => prop_assert!(solutions.is_empty()),
        }
    }

    #[test]
    fn centralizing_is_downward_closed(i in 0usize..1000, s in 0usize..64) {
        let x = &monoids()[i % monoids().len()];
        let sigma = SigmaClass::WeaklySchreier;
        let ws = enumerate_reflexive_relations(x, &RelationFilter { equivalence: true, sigma: Some(sigma.clone()), ..Default::default() }).unwrap();
        let srel = &ws[s % ws.len()];
        let congruences = enumerate_congruences(x);
        let central: Vec<bool> = congruences
            .iter()
            .map(|t| centralizes(&Relation::from_congruence(t), srel, &sigma).unwrap())
            .collect();
        for (a, ta) in congruences.iter().enumerate() {
            for (b, tb) in congruences.iter().enumerate() {
                if tb.le(ta) && central[a] {
                    prop_assert!(central[b]);
                }
            }
        }
    }

    #[test]
    fn baer_sum_ignores_representatives(a in 0usize..10_000, b in 0usize..10_000) {
        let (table, torsors) = z3_ext();
        let (t1, c1) = &torsors[a % torsors.len()];
        let (t2, c2) = &torsors[b % torsors.len()];
        let sum = baer_sum(t1, t2).unwrap();
        prop_assert_eq!(table.class_of(&sum).unwrap(), Some(table.sum[*c1][*c2]));
    }
}
