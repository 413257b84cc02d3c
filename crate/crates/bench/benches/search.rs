use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mlcif_core::{
    enumerate_mlcifs, enumerate_mlcifs_direct, hit_brute, hit_trace, make_named, xclasses, Classifier, FamilySpec,
    Mode, Params, XClass,
};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for (n, r) in [(12, 3), (30, 3), (16, 4)] {
        let p = Params::new(n, r).unwrap();
        group.bench_with_input(BenchmarkId::new("trace", format!("n{n}r{r}")), &p, |b, &p| {
            b.iter(|| enumerate_mlcifs(black_box(p)).unwrap())
        });
    }
    let p = Params::new(9, 3).unwrap();
    group.bench_function("direct/n9r3", |b| {
        b.iter(|| enumerate_mlcifs_direct(black_box(p)).unwrap())
    });
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_all");
    group.sample_size(20);
    for (n, r, mode) in [(12, 3, Mode::Trace), (12, 3, Mode::Brute), (30, 3, Mode::Trace)] {
        let catalog = enumerate_mlcifs(Params::new(n, r).unwrap()).unwrap();
        let classifier = Classifier::new(&catalog, mode).unwrap();
        group.bench_function(format!("{mode:?}/n{n}r{r}").to_lowercase(), |b| {
            b.iter(|| classifier.classify_all().unwrap())
        });
    }
    group.finish();
}

fn hitting(c: &mut Criterion) {
    let p = Params::new(12, 3).unwrap();
    let spec = FamilySpec::parse("ahm:4", p).unwrap();
    let gens = spec.declared_generators().unwrap();
    let family = make_named(&spec).unwrap();
    let classes: Vec<XClass> = xclasses(p).unwrap();
    let queries: Vec<_> = classes.iter().map(|xc| xc.representative_query().unwrap()).collect();
    let mut group = c.benchmark_group("hit");
    group.bench_function("trace/n12r3", |b| {
        b.iter(|| {
            classes
                .iter()
                .map(|xc| hit_trace(&gens, xc).unwrap())
                .collect::<Vec<_>>()
        })
    });
    group.bench_function("brute/n12r3", |b| {
        b.iter(|| queries.iter().map(|x| hit_brute(&family, x)).collect::<Vec<_>>())
    });
    group.finish();
}

criterion_group!(benches, enumeration, classification, hitting);
criterion_main!(benches);
