use criterion::{black_box, criterion_group, criterion_main, Criterion};
use uproj::adjoint::{adjoint_generators, adjoint_projector, Options};
use uproj::genrep::{self, rep_projector, RepInput};
use uproj::groupconj::{self, conj_projector};
use uproj::liealg::ChevalleyBasis;
use uproj::rootsystem::{RootSystem, Series};
use uproj::symfield::parse;

fn basis(s: Series, r: usize) -> ChevalleyBasis {
    ChevalleyBasis::new(&RootSystem::new(s, r).unwrap()).unwrap()
}

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("construct");
    for (s, r) in [(Series::A, 2), (Series::A, 3), (Series::B, 2), (Series::G, 2)] {
        let b = basis(s, r);
        g.bench_function(format!("adjoint projector {s}{r}"), |bench| {
            bench.iter(|| adjoint_projector(black_box(&b)).unwrap())
        });
    }
    g.bench_function("conj projector n=3", |bench| {
        bench.iter(|| conj_projector(3, &groupconj::Options { check: false, ..Default::default() }).unwrap())
    });
    let rep = RepInput::sl_defining(3).unwrap();
    g.bench_function("rep projector sl4 defining", |bench| {
        bench.iter(|| rep_projector(&rep, &genrep::Options { check: false, ..Default::default() }).unwrap())
    });
    g.finish();
}

fn application(c: &mut Criterion) {
    let (adj, p) = adjoint_projector(&basis(Series::A, 2)).unwrap();
    let a = parse("F11^2*H1 + E10*F01*H2 - 3*F10*F01", adj.universe()).unwrap();
    c.bench_function("apply A2 cubic", |bench| bench.iter(|| p.apply(black_box(&a)).unwrap()));
    let (adj, p) = adjoint_projector(&basis(Series::G, 2)).unwrap();
    let a = parse("F10*F01 + H1*H2", adj.universe()).unwrap();
    c.bench_function("apply G2 quadratic", |bench| bench.iter(|| p.apply(black_box(&a)).unwrap()));
}

fn verification(c: &mut Criterion) {
    let b = basis(Series::A, 2);
    let opts = Options { trials: 5, ..Default::default() };
    c.bench_function("adjoint generators A2 with checks", |bench| {
        bench.iter(|| adjoint_generators(black_box(&b), &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = construction, application, verification
}
criterion_main!(benches);
