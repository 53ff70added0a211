//! The suite modules. Each one sweeps a bounded instance set, asks the core
//! for a verdict and, where possible, re-derives it with [`crate::oracle`].

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sigma_lab::algebra::{
    congruence_quotient, enumerate_congruences, enumerate_homs, find_isomorphism, fixtures, is_isomorphic, product,
    Algebra, Catalog, Congruence, HomConstraints,
};
use sigma_lab::centrality::{
    action_distinctive, centralizer, centralizes, connector, connector_from_double_relation, connector_oracle,
    Centralizer, Triples, ORACLE_BOUND,
};
use sigma_lab::document::Witness;
use sigma_lab::extensions::{ext_table, Direction, ExtTable, Torsor};
use sigma_lab::fault;
use sigma_lab::maltsev::{base_change_fully_faithful, is_sigma_special_object, maltsev_square, normal_sigma_equivalences};
use sigma_lab::maltsev::core_audit;
use sigma_lab::points::{
    audit_regular_level, audit_regular_pushouts, is_regular_pushout, points_between, pullback_of_points,
    quotient_morphisms, strongly_split_witness, PointMorphism, RegularLevel,
};
use sigma_lab::relations::{
    compose, direct_image, enumerate_reflexive_relations, kernel_pair, permutes, transitivity_by_construction,
    transitivity_map_is_sound, RelationFilter, Transitivity,
};
use sigma_lab::{AuditReport, Error, Hom, Kind, Obj, Relation, SigmaClass, SplitPoint};

use crate::oracle;

/// Order up to which Mal'tsev squares and saturation are swept exhaustively.
pub const EXHAUSTIVE_SQUARE_ORDER: usize = 3;

/// Resolved parameters shared by the modules.
#[derive(Debug, Clone)]
pub struct Context {
    pub kind: Option<Kind>,
    pub sigma: Option<SigmaClass>,
    pub max_order: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Context {
    fn kind(&self) -> Kind {
        self.kind.unwrap_or(Kind::Monoid)
    }

    /// The configured class, or the weakly Schreier / puncturing default.
    fn sigma(&self) -> SigmaClass {
        self.sigma.clone().unwrap_or(match self.kind() {
            Kind::Quandle => SigmaClass::Puncturing,
            _ => SigmaClass::WeaklySchreier,
        })
    }

    fn catalog(&self) -> Result<Catalog, Error> {
        Catalog::new(self.kind(), self.max_order)
    }
}

/// Something a sweep runs over, describable as a reproducible witness.
pub trait Instance {
    fn describe(&self) -> Value;
}

impl Instance for Obj {
    fn describe(&self) -> Value {
        Witness::new().algebra("X", self).build()
    }
}

impl Instance for SplitPoint {
    fn describe(&self) -> Value {
        Witness::new().point("point", self).build()
    }
}

impl Instance for (Obj, Obj) {
    fn describe(&self) -> Value {
        Witness::new().algebra("A", &self.0).algebra("B", &self.1).build()
    }
}

impl Instance for (SplitPoint, SplitPoint) {
    fn describe(&self) -> Value {
        Witness::new().point("point", &self.0).point("split", &self.1).build()
    }
}

impl Instance for (Obj, Relation) {
    fn describe(&self) -> Value {
        Witness::new().algebra("X", &self.0).relation("S", &self.1.pair_list()).build()
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Runs `f` on every item in parallel, keeping the calling thread's fault
/// and merging in input order. A panic fails the item it occurred on.
fn sweep<T: Sync + Instance>(check: &str, items: &[T], f: impl Fn(&T, &mut AuditReport) + Sync) -> AuditReport {
    let installed = fault::current();
    let parts: Vec<AuditReport> = items
        .par_iter()
        .map(|item| {
            fault::with_fault(installed, || {
                let run = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                    let mut r = AuditReport::new(check);
                    f(item, &mut r);
                    r
                }));
                run.unwrap_or_else(|payload| {
                    let mut r = AuditReport::new(check);
                    r.fail(format!("panic: {}", panic_message(payload.as_ref())), item.describe());
                    r
                })
            })
        })
        .collect();
    let mut report = AuditReport::new(check);
    for p in parts {
        report.absorb(p);
    }
    report
}

/// Records an error raised while handling one instance.
fn record_error(report: &mut AuditReport, e: &Error, witness: impl FnOnce() -> Value) {
    report.fail(format!("error: {e}"), witness());
}

fn setup_failure(check: &str, e: Error) -> AuditReport {
    let mut r = AuditReport::new(check);
    r.fail(format!("setup error: {e}"), json!({ "error": e.to_string() }));
    r
}

fn seed_of(set: &[bool]) -> Vec<usize> {
    (0..set.len()).filter(|&i| set[i]).collect()
}

fn all_points(objs: &[Obj], bases: &[Obj]) -> Result<Vec<SplitPoint>, Error> {
    let mut out = Vec::new();
    for y in bases {
        for x in objs {
            out.extend(points_between(x, y)?);
        }
    }
    Ok(out)
}

/// Brute-force enumeration of maps that preserve operations and constants.
fn brute_force_hom_count(a: &Algebra, b: &Algebra) -> usize {
    let (n, m) = (a.order(), b.order());
    let mut count = 0;
    let mut map = vec![0usize; n];
    loop {
        let consts = a.constants().iter().zip(b.constants()).all(|(&c, &d)| map[c] == d);
        let ops = consts
            && (0..n).all(|x| {
                (0..n).all(|y| (0..a.kind().arity()).all(|k| map[a.op(k, x, y)] == b.op(k, map[x], map[y])))
            });
        if ops {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

/// Fixture tables, closure, hom search, kernel pairs and quotients against
/// direct recomputation.
pub fn fixtures_check(ctx: &Context) -> AuditReport {
    let check = "fixtures";
    let mut report = AuditReport::new(check);
    for n in 1..=9 {
        let g = fixtures::cyclic_group(n);
        let ok = g.revalidate().is_ok()
            && (0..n).all(|a| (0..n).all(|b| g.mul(a, b) == (a + b) % n))
            && oracle::expected_special(&g);
        report.record(ok, || format!("Z{n} fixture is not addition mod {n}"), || {
            Witness::new().value("table", g.table(0)).build()
        });
    }
    for (name, a) in [
        ("klein-four", fixtures::klein_four()),
        ("z3-squared", fixtures::z3_squared()),
        ("S3", fixtures::symmetric_group_s3()),
        ("ring-Z4", fixtures::ring_zn(4)),
        ("R3", fixtures::dihedral_quandle(3)),
    ] {
        let ok = a.revalidate().is_ok() && oracle::expected_special(&a);
        report.record(ok, || format!("{name} fixture is invalid"), || json!({ "fixture": name }));
    }
    let kind = ctx.kind();
    let catalog = match Catalog::new(kind, ctx.max_order.min(EXHAUSTIVE_SQUARE_ORDER)) {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    let objs = catalog.all();
    report.absorb(sweep(check, &objs, |x, r| {
        for set in oracle::subsets(x.order()) {
            let seed = seed_of(&set);
            let got = x.closure_of(seed.iter().copied()).to_vec();
            let want = seed_of(&oracle::closure(x, &set));
            r.record(got == want, || format!("closure of {seed:?} is {got:?}, expected {want:?}"), || {
                Witness::new().algebra("X", x).value("seed", &seed).build()
            });
        }
    }));
    let pairs: Vec<(Obj, Obj)> = objs
        .iter()
        .flat_map(|a| objs.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    report.absorb(sweep(check, &pairs, |(a, b), r| {
        let homs = match enumerate_homs(a, b, &HomConstraints::default()) {
            Ok(h) => h,
            Err(e) => return record_error(r, &e, || Witness::new().algebra("A", a).algebra("B", b).build()),
        };
        let want = brute_force_hom_count(a, b);
        r.record(homs.len() == want, || format!("{} homs found, {want} exist", homs.len()), || {
            Witness::new().algebra("A", a).algebra("B", b).build()
        });
        for f in homs {
            let rf = kernel_pair(&f);
            let want: Vec<(usize, usize)> = (0..a.order())
                .flat_map(|x| (0..a.order()).map(move |y| (x, y)))
                .filter(|&(x, y)| f.apply(x) == f.apply(y))
                .collect();
            r.record(oracle::sorted(&rf.pair_list()) == want, || "kernel pair differs from f(a) = f(b)".into(), || {
                Witness::new().hom("f", &f).build()
            });
            let quotient = Congruence::from_pairs(a, &want).and_then(|theta| congruence_quotient(a, &theta));
            let ok = match quotient {
                Ok(q) => {
                    let p = &q.projection;
                    p.verify().is_ok()
                        && want.iter().all(|&(x, y)| p.apply(x) == p.apply(y))
                        && (0..a.order()).all(|x| (0..a.order()).all(|y| p.apply(x) != p.apply(y) || f.apply(x) == f.apply(y)))
                        && is_isomorphic(&q.algebra, &image_algebra(&f))
                }
                Err(_) => false,
            };
            r.record(ok, || "quotient by the kernel pair is not the image".into(), || {
                Witness::new().hom("f", &f).build()
            });
        }
    }));
    report
}

fn image_algebra(f: &Hom) -> Obj {
    let img = f.image();
    let elems = img.to_vec();
    let b = f.target();
    let idx = |v: usize| elems.iter().position(|&e| e == v).expect("image is closed");
    let tables = (0..b.kind().arity())
        .map(|k| elems.iter().map(|&x| elems.iter().map(|&y| idx(b.op(k, x, y))).collect()).collect())
        .collect();
    let raw = sigma_lab::RawAlgebra {
        tables,
        unit: b.unit().map(idx),
        name: None,
    };
    sigma_lab::algebra::validate(b.kind(), raw)
        .expect("images are subalgebras")
        .into_obj()
}

fn square_instance(p: &SplitPoint, q: &SplitPoint, r: &mut AuditReport) {
    let w = || Witness::new().point("point", p).point("split", q).build();
    let square = match pullback_of_points(p, q) {
        Ok(s) => s,
        Err(e) => return record_error(r, &e, w),
    };
    let size = oracle::pullback_size(q.f(), p.f());
    if square.carrier.len() != size {
        return r.fail(format!("pullback has {} elements, expected {size}", square.carrier.len()), w());
    }
    let verdict = match maltsev_square(&square) {
        Ok(v) => v,
        Err(e) => return record_error(r, &e, w),
    };
    let carrier = square.carrier.obj();
    let mut seed = vec![false; carrier.order()];
    for y in 0..q.domain().order() {
        seed[square.pulled.s().apply(y)] = true;
    }
    let tbar = square.top_section.as_ref().expect("pullback of points");
    for x in 0..p.domain().order() {
        seed[tbar.apply(x)] = true;
    }
    let generated = oracle::closure(carrier, &seed).iter().all(|&b| b);
    r.record(
        verdict.verdict && generated,
        || format!("(s', t̄) not jointly extremally epic (core {}, direct {generated})", verdict.verdict),
        || verdict.witness_value(),
    );
}

/// Pullbacks of Σ-points along split epimorphisms: `(s', t̄)` generates.
pub fn maltsev_check(ctx: &Context) -> AuditReport {
    let check = "maltsev";
    let sigma = ctx.sigma();
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    let small = catalog.up_to(ctx.max_order.min(EXHAUSTIVE_SQUARE_ORDER));
    let mut instances = Vec::new();
    for y in &small {
        let over = match all_points(&small, std::slice::from_ref(y)) {
            Ok(p) => p,
            Err(e) => return setup_failure(check, e),
        };
        for p in over.iter().filter(|p| sigma.contains(p)) {
            for q in &over {
                instances.push((p.clone(), q.clone()));
            }
        }
    }
    let mut report = sweep(check, &instances, |(p, q), r| square_instance(p, q, r));
    if ctx.max_order >= 4 && ctx.samples > 0 {
        let big = catalog.of_order(4).to_vec();
        let bases = catalog.up_to(4);
        let mut families = Vec::new();
        for y in &bases {
            let over = match all_points(&big, std::slice::from_ref(y)) {
                Ok(p) => p,
                Err(e) => return setup_failure(check, e),
            };
            let in_sigma: Vec<SplitPoint> = over.iter().filter(|p| sigma.contains(p)).cloned().collect();
            if !in_sigma.is_empty() {
                families.push((in_sigma, over));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut sampled = Vec::with_capacity(ctx.samples);
        let weights: Vec<usize> = families.iter().map(|(s, all)| s.len() * all.len()).collect();
        let total: usize = weights.iter().sum();
        if total > 0 {
            for _ in 0..ctx.samples {
                let mut pick = rand::Rng::gen_range(&mut rng, 0..total);
                let mut fam = 0;
                while pick >= weights[fam] {
                    pick -= weights[fam];
                    fam += 1;
                }
                let (in_sigma, over) = &families[fam];
                let p = in_sigma.choose(&mut rng).expect("nonempty").clone();
                let q = over.choose(&mut rng).expect("nonempty").clone();
                sampled.push((p, q));
            }
        }
        report.absorb(sweep(check, &sampled, |(p, q), r| square_instance(p, q, r)));
    }
    report
}

fn relations_on(x: &Obj, filter: &RelationFilter) -> Result<Vec<Relation>, Error> {
    enumerate_reflexive_relations(x, filter)
}

/// Σ-relations are transitive and symmetric ones are congruences; the
/// transitivity construction agrees with direct transitivity everywhere.
pub fn transitivity_check(ctx: &Context) -> AuditReport {
    let check = "transitivity";
    let sigma = ctx.sigma();
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    sweep(check, &catalog.all(), |x, r| {
        let rels = match relations_on(x, &RelationFilter::default()) {
            Ok(v) => v,
            Err(e) => return record_error(r, &e, || Witness::new().algebra("X", x).build()),
        };
        for rel in rels {
            let pairs = rel.pair_list();
            let w = || Witness::new().algebra("X", x).relation("R", &pairs).build();
            let transitive = oracle::is_transitive(&pairs);
            let constructed = match transitivity_by_construction(&rel) {
                Ok(t) => {
                    let is_map = matches!(t, Transitivity::Map { .. });
                    is_map == transitive && transitivity_map_is_sound(&rel, &t)
                }
                Err(_) => false,
            };
            r.record(
                constructed && rel.is_transitive() == transitive,
                || "transitivity construction disagrees with direct transitivity".into(),
                w,
            );
            if !sigma.contains(&match rel.point() {
                Ok(p) => p,
                Err(e) => return record_error(r, &e, w),
            }) {
                continue;
            }
            r.record(transitive, || "Σ-relation is not transitive".into(), w);
            if rel.is_symmetric() {
                let congruence = oracle::is_congruence(x, &pairs) && Congruence::from_pairs(x, &pairs).is_ok();
                r.record(congruence, || "symmetric Σ-relation is not a congruence".into(), w);
            }
        }
    })
}

/// Reflexive relations permute with symmetric Σ-relations.
pub fn permutation_check(ctx: &Context) -> AuditReport {
    let check = "permutation";
    let sigma = ctx.sigma();
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    sweep(check, &catalog.all(), |x, r| {
        let all = relations_on(x, &RelationFilter::default());
        let sym = relations_on(
            x,
            &RelationFilter {
                symmetric: true,
                sigma: Some(sigma.clone()),
                ..Default::default()
            },
        );
        let (all, sym) = match (all, sym) {
            (Ok(a), Ok(s)) => (a, s),
            (Err(e), _) | (_, Err(e)) => return record_error(r, &e, || Witness::new().algebra("X", x).build()),
        };
        for s in &sym {
            let sp = s.pair_list();
            for rel in &all {
                let rp = rel.pair_list();
                let w = || Witness::new().algebra("X", x).relation("R", &rp).relation("S", &sp).build();
                let rs = oracle::compose(&rp, &sp);
                let sr = oracle::compose(&sp, &rp);
                let core_rs = compose(rel, s).map(|c| oracle::sorted(&c.pair_list()));
                let core_permutes = permutes(rel, s);
                let ok = core_rs.as_ref() == Ok(&rs) && core_permutes == Ok(true) && rs == sr;
                r.record(ok, || "R∘S and S∘R differ".into(), w);
            }
        }
    })
}

/// Propagated connectors agree with the exhaustive oracle, which finds at
/// most one solution.
pub fn connector_check(ctx: &Context) -> AuditReport {
    let check = "connector";
    let sigma = ctx.sigma();
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    sweep(check, &catalog.all(), |x, r| {
        let all = relations_on(x, &RelationFilter::default());
        let ss = relations_on(
            x,
            &RelationFilter {
                sigma: Some(sigma.clone()),
                ..Default::default()
            },
        );
        let (all, ss) = match (all, ss) {
            (Ok(a), Ok(s)) => (a, s),
            (Err(e), _) | (_, Err(e)) => return record_error(r, &e, || Witness::new().algebra("X", x).build()),
        };
        for s in &ss {
            for rel in &all {
                let w = || {
                    Witness::new()
                        .algebra("X", x)
                        .relation("R", &rel.pair_list())
                        .relation("S", &s.pair_list())
                        .build()
                };
                let size = match Triples::new(rel, s) {
                    Ok(t) => t.len(),
                    Err(e) => return record_error(r, &e, w),
                };
                if size > ORACLE_BOUND {
                    continue;
                }
                let solutions = match connector_oracle(rel, s, ORACLE_BOUND) {
                    Ok(v) => v,
                    Err(e) => return record_error(r, &e, w),
                };
                let propagated = connector(rel, s);
                let ok = solutions.len() <= 1
                    && match &propagated {
                        Ok(c) => solutions.len() == 1 && c.values() == solutions[0].as_slice(),
                        Err(Error::Inconsistent { .. } | Error::Underdetermined(_)) => solutions.is_empty(),
                        Err(_) => false,
                    };
                r.record(
                    ok,
                    || {
                        format!(
                            "oracle found {} connectors, propagation {}",
                            solutions.len(),
                            if propagated.is_ok() { "succeeded" } else { "failed" }
                        )
                    },
                    w,
                );
            }
        }
    })
}

/// `R ∩ S = Δ` for an equivalence `R` and a Σ-congruence `S` forces
/// `[R, S] = 0`.
pub fn cap_check(ctx: &Context) -> AuditReport {
    let check = "cap";
    let sigma = ctx.sigma();
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    sweep(check, &catalog.all(), |x, r| {
        let all = relations_on(
            x,
            &RelationFilter {
                equivalence: true,
                ..Default::default()
            },
        );
        let cong = relations_on(
            x,
            &RelationFilter {
                equivalence: true,
                sigma: Some(sigma.clone()),
                ..Default::default()
            },
        );
        let (all, cong) = match (all, cong) {
            (Ok(a), Ok(s)) => (a, s),
            (Err(e), _) | (_, Err(e)) => return record_error(r, &e, || Witness::new().algebra("X", x).build()),
        };
        for s in &cong {
            for rel in &all {
                let meet: Vec<(usize, usize)> =
                    rel.pair_list().into_iter().filter(|&(a, b)| s.contains(a, b)).collect();
                if meet.iter().any(|&(a, b)| a != b) {
                    continue;
                }
                let w = || {
                    Witness::new()
                        .algebra("X", x)
                        .relation("R", &rel.pair_list())
                        .relation("S", &s.pair_list())
                        .build()
                };
                let central = centralizes(rel, s, &sigma);
                let via_double = connector_from_double_relation(rel, s);
                let propagated = connector(rel, s);
                let agree = match (&via_double, &propagated) {
                    (Ok(Some(v)), Ok(c)) => v.as_slice() == c.values(),
                    _ => false,
                };
                r.record(
                    central == Ok(true) && agree,
                    || format!("R ∩ S = Δ but centralizes = {central:?}, double relation agrees = {agree}"),
                    w,
                );
            }
        }
    })
}

/// Centralizers of Σ-congruences exist, are the maximum of all centralizing
/// congruences, and are recovered by the action-distinctive construction.
pub fn centralizer_check(ctx: &Context) -> AuditReport {
    let check = "centralizer";
    let sigma = ctx.sigma();
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    let mut instances = Vec::new();
    for x in catalog.all() {
        let filter = RelationFilter {
            equivalence: true,
            sigma: Some(sigma.clone()),
            ..Default::default()
        };
        match relations_on(&x, &filter) {
            Ok(v) => instances.extend(v.into_iter().map(|s| (x.clone(), s))),
            Err(e) => return setup_failure(check, e),
        }
    }
    sweep(check, &instances, |(x, s), r| {
        let w = || Witness::new().algebra("X", x).relation("S", &s.pair_list()).build();
        let z = match centralizer(s, &sigma) {
            Ok(Centralizer::Maximum(z)) => z,
            Ok(Centralizer::Antichain(a)) => {
                return r.fail(format!("{} maximal centralizing congruences", a.len()), w());
            }
            Err(e) => return record_error(r, &e, w),
        };
        let mut central = Vec::new();
        for theta in enumerate_congruences(x) {
            if centralizes(&Relation::from_congruence(&theta), s, &sigma) == Ok(true) {
                central.push(theta);
            }
        }
        let maximum = central.contains(&z) && central.iter().all(|t| t.le(&z));
        r.record(maximum, || "centralizer is not the largest centralizing congruence".into(), w);
        let point = match s.point() {
            Ok(p) => p,
            Err(e) => return record_error(r, &e, w),
        };
        match action_distinctive(&point, &sigma) {
            Ok(d) => {
                let dy = oracle::sorted(&d.dy.pair_list());
                r.record(dy == oracle::sorted(&z.pairs()), || "action-distinctive D_Y differs from Z(S)".into(), || {
                    d.witness()
                });
            }
            Err(e) => record_error(r, &e, w),
        }
    })
}

/// The classes whose special objects are the groups, latin quandles and
/// rings, for each signature.
pub fn core_sigma(kind: Kind) -> SigmaClass {
    match kind {
        Kind::Monoid | Kind::Semiring => SigmaClass::Schreier,
        Kind::Quandle => SigmaClass::Acupuncturing,
    }
}

/// Σ-special objects coincide with groups, latin quandles and rings.
pub fn cores_check(ctx: &Context) -> AuditReport {
    let check = "cores";
    let kinds = match ctx.kind {
        Some(k) => vec![k],
        None => vec![Kind::Monoid, Kind::Quandle, Kind::Semiring],
    };
    let mut report = AuditReport::new(check);
    for kind in kinds {
        let sigma = match &ctx.sigma {
            Some(s) if s.supports(kind) => s.clone(),
            _ => core_sigma(kind),
        };
        let catalog = match Catalog::new(kind, ctx.max_order) {
            Ok(c) => c,
            Err(e) => return setup_failure(check, e),
        };
        match core_audit(&catalog, &sigma, ctx.max_order) {
            Ok(audit) => report.absorb(audit.report),
            Err(e) => report.fail(format!("error: {e}"), json!({ "kind": kind.short_name() })),
        }
        report.absorb(sweep(check, &catalog.all(), |x, r| {
            let special = is_sigma_special_object(x, &sigma);
            let direct = oracle::expected_special(x);
            r.record(special == direct, || format!("special = {special}, direct axiom check = {direct}"), || {
                Witness::new().algebra("X", x).value("class", sigma.name()).build()
            });
        }));
    }
    report
}

/// Schreier points are strongly split, and monos are normal to at most one
/// Schreier equivalence.
pub fn protomodularity_check(ctx: &Context) -> AuditReport {
    let check = "protomodularity";
    let sigma = ctx.sigma.clone().unwrap_or(SigmaClass::Schreier);
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    let objs = catalog.all();
    let points = match all_points(&objs, &objs) {
        Ok(p) => p,
        Err(e) => return setup_failure(check, e),
    };
    let mut report = sweep(check, &points, |p, r| {
        let core = strongly_split_witness(p);
        let direct = oracle::is_strongly_split(p.f(), p.s());
        r.record(core.is_none() == direct, || "strong splitness differs from the direct check".into(), || {
            Witness::new().point("point", p).value("subalgebra", &core).build()
        });
        if p.kind() != Kind::Quandle {
            let (weak, strict) = oracle::schreier_classes(p.f(), p.s());
            let core = (SigmaClass::WeaklySchreier.contains(p), SigmaClass::Schreier.contains(p));
            r.record(core == (weak, strict), || format!("class membership {core:?}, direct {:?}", (weak, strict)), || {
                Witness::new().point("point", p).build()
            });
        }
        if sigma.contains(p) {
            r.record(direct, || "Σ-point is not strongly split".into(), || {
                Witness::new().point("point", p).value("subalgebra", &core).build()
            });
        }
    });
    let pairs: Vec<(Obj, Obj)> = objs
        .iter()
        .flat_map(|u| objs.iter().filter(|x| x.order() >= u.order()).map(move |x| (u.clone(), x.clone())))
        .collect();
    report.absorb(sweep(check, &pairs, |(u, x), r| {
        let monos = match enumerate_homs(
            u,
            x,
            &HomConstraints {
                injective: true,
                ..Default::default()
            },
        ) {
            Ok(m) => m,
            Err(e) => return record_error(r, &e, || Witness::new().algebra("U", u).algebra("X", x).build()),
        };
        for m in monos {
            let w = || Witness::new().hom("m", &m).build();
            match normal_sigma_equivalences(&m, &sigma) {
                Ok(rels) => {
                    let ok = rels.len() <= 1 && rels.iter().all(|s| oracle::is_congruence(x, &s.pair_list()));
                    r.record(ok, || format!("normal to {} Σ-equivalences", rels.len()), w);
                }
                Err(e) => record_error(r, &e, w),
            }
        }
    }));
    report
}

/// Direct recomputation of the regular-pushout comparison.
fn regular_pushout_direct(m: &PointMorphism) -> bool {
    let (f, f2, x, y) = (m.domain.f(), m.codomain.f(), &m.top, &m.bottom);
    let mut hit = BTreeSet::new();
    for a in 0..f.source().order() {
        hit.insert((f.apply(a), x.apply(a)));
    }
    (0..f.target().order())
        .flat_map(|b| (0..x.target().order()).map(move |c| (b, c)))
        .filter(|&(b, c)| y.apply(b) == f2.apply(c))
        .all(|bc| hit.contains(&bc))
}

/// Regularity levels and regular pushouts over quotient morphisms of points.
pub fn regularity_check(ctx: &Context) -> AuditReport {
    let check = "regularity";
    let ws = SigmaClass::WeaklySchreier;
    let schreier = SigmaClass::Schreier;
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    let objs = catalog.all();
    let points = match all_points(&objs, &objs) {
        Ok(p) => p,
        Err(e) => return setup_failure(check, e),
    };
    sweep(check, &points, |p, r| {
        let morphisms = match quotient_morphisms(p) {
            Ok(m) => m,
            Err(e) => return record_error(r, &e, || Witness::new().point("point", p).build()),
        };
        for m in &morphisms {
            let w = || m.witness();
            let wellformed = m.top.verify().is_ok()
                && m.bottom.verify().is_ok()
                && m.is_levelwise_surjective()
                && (0..p.domain().order())
                    .all(|a| m.codomain.f().apply(m.top.apply(a)) == m.bottom.apply(p.f().apply(a)));
            r.record(wellformed, || "quotient morphism is not a morphism of points".into(), w);
            let direct = regular_pushout_direct(m);
            r.record(
                is_regular_pushout(&m.square()).map(|v| v == direct).unwrap_or(false),
                || "regular-pushout verdict differs from the direct comparison".into(),
                w,
            );
            let rf = kernel_pair(p.f());
            let want: BTreeSet<(usize, usize)> =
                rf.pair_list().iter().map(|&(a, b)| (m.top.apply(a), m.top.apply(b))).collect();
            let got = direct_image(&m.top, &rf).map(|d| d.pair_list().into_iter().collect::<BTreeSet<_>>());
            r.record(got.as_ref() == Ok(&want), || "direct image of R[f] differs".into(), w);
        }
        r.absorb(audit_regular_level(&ws, RegularLevel::Three, &morphisms));
        r.absorb(audit_regular_level(&schreier, RegularLevel::Two, &morphisms));
        r.absorb(audit_regular_pushouts(&ws, &morphisms));
    })
}

/// Base change along split epimorphisms is fully faithful and saturated on
/// subobjects.
pub fn saturation_check(ctx: &Context) -> AuditReport {
    let check = "saturation";
    let sigma = ctx.sigma.clone().unwrap_or(SigmaClass::Schreier);
    let catalog = match ctx.catalog() {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    let objs = catalog.up_to(ctx.max_order.min(EXHAUSTIVE_SQUARE_ORDER));
    let splits = match all_points(&objs, &objs) {
        Ok(p) => p,
        Err(e) => return setup_failure(check, e),
    };
    let points = splits.clone();
    sweep(check, &splits, |q, r| match base_change_fully_faithful(q, &points, &sigma) {
        Ok(a) => r.absorb(a),
        Err(e) => record_error(r, &e, || Witness::new().point("split", q).build()),
    })
}

/// The `Y`-component of an element of `Y × A`, read off a product.
fn fiber_component(y: &Obj, a: &Obj) -> Result<Vec<usize>, Error> {
    let prod = product(y, a)?;
    Ok(prod.tuples().iter().map(|t| t[1]).collect())
}

/// `c(g, h) = q(σ(g + h), σ(g) σ(h))` read in `A`, for a section `σ`
/// with `σ(0) = 0`.
fn torsor_cocycle(t: &Torsor, a_of: &[usize], n: usize) -> Option<Vec<usize>> {
    let x = t.domain();
    let sect: Vec<usize> = (0..n)
        .map(|g| {
            if g == 0 {
                x.unit()
            } else {
                (0..x.order()).find(|&e| t.f.apply(e) == g)
            }
        })
        .collect::<Option<_>>()?;
    let mut c = vec![0; n * n];
    for g in 0..n {
        for h in 0..n {
            let gh = t.f.target().mul(g, h);
            let v = t.q_at(sect[gh], x.mul(sect[g], sect[h]))?;
            c[g * n + h] = a_of[v];
        }
    }
    Some(c)
}

fn ext_audit(check: &str, n: usize, candidates: Vec<Obj>, r: &mut AuditReport) -> Option<(ExtTable, Vec<Vec<usize>>)> {
    let y = fixtures::cyclic_group(n).into_obj();
    let a = fixtures::cyclic_group(n).into_obj();
    let w = || json!({ "base": format!("Z{n}"), "fiber": format!("Z{n}") });
    let run = || -> Result<(ExtTable, Vec<usize>), Error> {
        let d = Direction::product(&y, &a, &SigmaClass::Schreier)?;
        let table = ext_table(&d, &candidates, n * n)?;
        Ok((table, fiber_component(&y, &a)?))
    };
    let (table, a_of) = match run() {
        Ok(v) => v,
        Err(e) => {
            record_error(r, &e, w);
            return None;
        }
    };
    r.absorb(table.audit());
    let h2: BTreeSet<Vec<usize>> = oracle::cocycles(n, n).iter().map(|c| oracle::cohomology_class(c, n, n)).collect();
    r.record(table.len() == h2.len(), || format!("{} extension classes, cohomology has {}", table.len(), h2.len()), w);
    let mut classes = Vec::new();
    for t in &table.classes {
        match torsor_cocycle(t, &a_of, n) {
            Some(c) => classes.push(oracle::cohomology_class(&c, n, n)),
            None => {
                r.fail("torsor has no normalized section", t.witness());
                return None;
            }
        }
    }
    let distinct: BTreeSet<_> = classes.iter().cloned().collect();
    r.record(distinct.len() == classes.len(), || "two extension classes share a cocycle class".into(), w);
    r.record(classes[table.zero].iter().all(|&v| v == 0), || "split class has a nontrivial cocycle".into(), w);
    for i in 0..table.len() {
        for j in 0..table.len() {
            let sum: Vec<usize> = classes[i].iter().zip(&classes[j]).map(|(u, v)| (u + v) % n).collect();
            let want = oracle::cohomology_class(&sum, n, n);
            r.record(classes[table.sum[i][j]] == want, || format!("[{i}] + [{j}] is not the sum of cocycles"), || {
                json!({ "check": check, "classes": [i, j], "sum": table.sum[i][j] })
            });
        }
    }
    Some((table, classes))
}

/// Ext tables with Baer sums over `Z2` and `Z3` against group cohomology.
pub fn baer_check(ctx: &Context) -> AuditReport {
    let check = "baer";
    let mut report = AuditReport::new(check);
    let catalog = match Catalog::new(Kind::Monoid, ctx.max_order.max(4)) {
        Ok(c) => c,
        Err(e) => return setup_failure(check, e),
    };
    if let Some((table, classes)) = ext_audit(check, 2, catalog.of_order(4).to_vec(), &mut report) {
        let z4 = Algebra::monoid(oracle::extension_group(&[0, 0, 0, 1], 2, 2), 0).map(Algebra::into_obj);
        let v4 = Algebra::monoid(oracle::extension_group(&[0, 0, 0, 0], 2, 2), 0).map(Algebra::into_obj);
        match (z4, v4) {
            (Ok(z4), Ok(v4)) => {
                let find = |g: &Obj| (0..table.len()).find(|&i| find_isomorphism(table.classes[i].domain(), g).is_some());
                let ok = match (find(&z4), find(&v4)) {
                    (Some(i), Some(j)) => table.sum[i][i] == j && j == table.zero && classes[i] != classes[j],
                    _ => false,
                };
                report.record(ok, || "[Z4] + [Z4] is not [Z2 x Z2]".into(), || {
                    json!({ "sum": table.sum, "domains": table.classes.iter().map(|t| t.domain().table(0)).collect::<Vec<_>>() })
                });
            }
            _ => report.fail("cohomology oracle groups are invalid", json!({})),
        }
    }
    let z9 = vec![fixtures::cyclic_group(9).into_obj(), fixtures::z3_squared().into_obj()];
    ext_audit(check, 3, z9, &mut report);
    report
}

/// Runs one module by name.
pub fn run_module(name: &str, ctx: &Context) -> AuditReport {
    match name {
        "fixtures" => fixtures_check(ctx),
        "maltsev" => maltsev_check(ctx),
        "transitivity" => transitivity_check(ctx),
        "permutation" => permutation_check(ctx),
        "connector" => connector_check(ctx),
        "cap" => cap_check(ctx),
        "centralizer" => centralizer_check(ctx),
        "cores" => cores_check(ctx),
        "protomodularity" => protomodularity_check(ctx),
        "regularity" => regularity_check(ctx),
        "saturation" => saturation_check(ctx),
        "baer" => baer_check(ctx),
        other => {
            let mut r = AuditReport::new(other);
            r.fail(format!("unknown module {other}"), json!({ "module": other }));
            r
        }
    }
}
