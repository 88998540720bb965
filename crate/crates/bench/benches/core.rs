use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use freealg::basis::is_basis;
use freealg::bigpowers::{choose_marker, decode_seq, encode_seq};
use freealg::centralizers::centralizer_window;
use freealg::folog::catalog::{catalog, CatalogParams};
use freealg::folog::{eval, PolyStructure};
use freealg::interp::{sentences, verify_translation, InterpScheme};
use freealg::superstructure::{decode_pair, encode_poly};
use freealg::FieldSpec;
use freealg_bench::{dense, poly};

fn arithmetic(c: &mut Criterion) {
    let q = FieldSpec::rationals();
    let mut g = c.benchmark_group("mul");
    for k in [3, 5, 7] {
        let f = dense(q, k);
        g.bench_with_input(BenchmarkId::from_parameter(k), &f, |b, f| b.iter(|| black_box(f * f)));
    }
    g.finish();
    let f = dense(q, 6);
    c.bench_function("pair roundtrip", |b| b.iter(|| decode_pair(&encode_poly(black_box(&f)), 2).unwrap()));
}

fn big_powers(c: &mut Criterion) {
    let q = FieldSpec::rationals();
    let fs = vec![dense(q, 2), poly("x1*x2 - 1", q), dense(q, 3)];
    let a = choose_marker(&fs);
    let enc = encode_seq(&fs, 3, &a).unwrap();
    c.bench_function("big powers encode", |b| b.iter(|| encode_seq(black_box(&fs), 3, &a).unwrap()));
    c.bench_function("big powers decode", |b| b.iter(|| decode_seq(black_box(&enc), &a, 3).unwrap()));
}

fn centralizers(c: &mut Criterion) {
    let q = FieldSpec::rationals();
    let p = poly("x1*x2*x1 + x1", q).pow(2);
    let mut g = c.benchmark_group("centralizer window");
    for d in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| b.iter(|| centralizer_window(&p, d).unwrap()));
    }
    g.finish();
}

fn bases(c: &mut Criterion) {
    let q = FieldSpec::rationals();
    let v = vec![poly("x1 + x2^3 + x2*x1*x2", q), poly("x2 + 2*x1^2", q)];
    let no = vec![poly("x1*x2", q), poly("x2", q)];
    c.bench_function("basis yes", |b| b.iter(|| is_basis(black_box(&v), 8).unwrap()));
    c.bench_function("basis no", |b| b.iter(|| is_basis(black_box(&no), 8).unwrap()));
}

fn formulas(c: &mut Criterion) {
    let f2 = FieldSpec::prime(2).unwrap();
    let s = PolyStructure::slice(f2, 2, 3).unwrap();
    let irr = catalog("Irr", &CatalogParams::default()).unwrap();
    let x = poly("x1*x2*x1 + x1 + 1", f2);
    c.bench_function("Irr on F_2 slice", |b| b.iter(|| eval(&s, &irr, &[("x", x.clone())]).unwrap()));

    let scheme = InterpScheme::fixture("z2_in_z4").unwrap();
    let target = scheme.model().unwrap();
    let ss = sentences::small_sentences(2);
    c.bench_function("verify z2 in z4", |b| {
        b.iter(|| ss.iter().all(|f| verify_translation(&scheme, &target, f).unwrap().agree))
    });
}

criterion_group!(benches, arithmetic, big_powers, centralizers, bases, formulas);
criterion_main!(benches);
