use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use sigma_lab::algebra::{enumerate_congruences, fixtures};
use sigma_lab::centrality::{centralizer, connector};
use sigma_lab::extensions::{ext_table, Direction};
use sigma_lab::maltsev::maltsev_square;
use sigma_lab::points::pullback_of_points;
use sigma_lab::{BitSet, Relation, SigmaClass, SplitPoint};

fn closure(c: &mut Criterion) {
    let s3 = fixtures::symmetric_group_s3().into_obj();
    let gens = BitSet::from_indices(s3.order(), [1]);
    c.bench_function("closure_s3", |b| b.iter(|| s3.closure(black_box(&gens))));
}

fn connector_and_centralizer(c: &mut Criterion) {
    let x = fixtures::cyclic_group(6).into_obj();
    let congruences: Vec<Relation> = enumerate_congruences(&x).iter().map(Relation::from_congruence).collect();
    let (r, s) = (&congruences[1], &congruences[congruences.len() - 2]);
    c.bench_function("connector_z6", |b| b.iter(|| connector(black_box(r), black_box(s))));
    c.bench_function("centralizer_z6", |b| {
        b.iter(|| centralizer(black_box(s), &SigmaClass::WeaklySchreier))
    });
}

fn square(c: &mut Criterion) {
    let y = fixtures::cyclic_group(2).into_obj();
    let k = fixtures::truncated_addition(2).into_obj();
    let p = SplitPoint::product_projection(&y, &k, 0).expect("projection");
    let q = SplitPoint::product_projection(&y, &y, 0).expect("projection");
    let sq = pullback_of_points(&p, &q).expect("pullback");
    c.bench_function("maltsev_square", |b| b.iter(|| maltsev_square(black_box(&sq))));
}

fn ext(c: &mut Criterion) {
    let z2 = fixtures::cyclic_group(2).into_obj();
    let d = Direction::product(&z2, &z2, &SigmaClass::Schreier).expect("abelian");
    let candidates = vec![fixtures::cyclic_group(4).into_obj(), fixtures::klein_four().into_obj()];
    c.bench_function("ext_table_z2", |b| b.iter(|| ext_table(black_box(&d), &candidates, 4)));
}

criterion_group!(benches, closure, connector_and_centralizer, square, ext);
criterion_main!(benches);
