use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tq_bench::{d4, linear, window};
use tq_core::metric::Metric;
use tq_core::sections::{compute_heart, tilt_construction, verify_section, Section};

fn window_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("window_build");
    for n in [3usize, 5, 8] {
        let q = linear(n);
        g.bench_with_input(BenchmarkId::new("linear", n), &q, |b, q| b.iter(|| window(black_box(q), 4)));
    }
    let q = d4();
    g.bench_function("d4", |b| b.iter(|| window(black_box(&q), 4)));
    g.finish();
}

fn all_pair_distances(c: &mut Criterion) {
    let w = window(&linear(5), 4);
    c.bench_function("lightcone_all_pairs_a5", |b| {
        b.iter(|| {
            // A fresh metric each round so no cached reachability is reused.
            let m = Metric::new(&w);
            let mut exact = 0usize;
            for x in 0..w.len() {
                for y in 0..w.len() {
                    exact += usize::from(m.lightcone(x, y).unwrap().is_exact());
                }
            }
            exact
        })
    });
}

fn sections(c: &mut Criterion) {
    let w = window(&d4(), 4);
    let m = Metric::new(&w);
    let seed = w.lookup("d").unwrap();
    c.bench_function("tilt_d4", |b| b.iter(|| tilt_construction(&m, black_box(&[seed])).unwrap()));
    let s = Section::projective(&w);
    c.bench_function("verify_section_d4", |b| b.iter(|| verify_section(&m, black_box(&s))));
    c.bench_function("heart_d4", |b| b.iter(|| compute_heart(&m, black_box(&s)).unwrap()));
}

criterion_group!(benches, window_build, all_pair_distances, sections);
criterion_main!(benches);
