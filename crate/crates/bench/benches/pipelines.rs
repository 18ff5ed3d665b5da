use criterion::{black_box, criterion_group, criterion_main, Criterion};
use equichar_core::matrix::examples::m3;
use equichar_core::repspaces::{equivariant_basis, symmetric_generators, tensor_action};
use equichar_core::{classify_group, close_group, signed_normalize, GroupSpec, DEFAULT_CLOSURE_CAP, DEFAULT_TOL};

fn closure(c: &mut Criterion) {
    let s5 = GroupSpec::symmetric(5);
    c.bench_function("close_group sym5", |b| b.iter(|| close_group(black_box(&s5), DEFAULT_CLOSURE_CAP, DEFAULT_TOL)));
    let signed = GroupSpec::signed_symmetric(4);
    c.bench_function("close_group signed-sym4", |b| {
        b.iter(|| close_group(black_box(&signed), DEFAULT_CLOSURE_CAP, DEFAULT_TOL))
    });
}

fn basis(c: &mut Criterion) {
    let gens = symmetric_generators(4);
    let a = tensor_action(4, 2, &gens).unwrap();
    c.bench_function("equivariant_basis sym4 k=2", |b| b.iter(|| equivariant_basis(black_box(&a), black_box(&a))));
    let gens = symmetric_generators(6);
    let a_in = tensor_action(6, 3, &gens).unwrap();
    let a_out = tensor_action(6, 2, &gens).unwrap();
    c.bench_function("equivariant_basis sym6 k=(3,2)", |b| {
        b.iter(|| equivariant_basis(black_box(&a_in), black_box(&a_out)))
    });
}

fn classify(c: &mut Criterion) {
    let m = GroupSpec::new("M", 3, vec![m3()], DEFAULT_TOL).unwrap();
    c.bench_function("classify M", |b| b.iter(|| classify_group(black_box(&m), DEFAULT_TOL)));
    let rot = GroupSpec::rotation(6);
    c.bench_function("classify rotation6", |b| b.iter(|| classify_group(black_box(&rot), DEFAULT_TOL)));
}

fn normalize(c: &mut Criterion) {
    let n = 64;
    let gens = GroupSpec::symmetric(n).generators().to_vec();
    let d: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / 8.0).collect();
    let scaled: Vec<_> = gens
        .iter()
        .map(|g| {
            let mut s = g.clone();
            for r in 0..n {
                for col in 0..n {
                    s.set(r, col, d[r] * g.get(r, col) / d[col]);
                }
            }
            s
        })
        .collect();
    let spec = GroupSpec::new("scaled-sym64", n, scaled, DEFAULT_TOL).unwrap();
    c.bench_function("signed_normalize scaled sym64", |b| b.iter(|| signed_normalize(black_box(&spec), 1e-8)));
}

criterion_group!(benches, closure, basis, classify, normalize);
criterion_main!(benches);
