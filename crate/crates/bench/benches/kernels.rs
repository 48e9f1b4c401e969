use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hyperspec::algebra::rational::int;
use hyperspec::algebra::{det_mod, ModMatrix, RationalMatrix};
use hyperspec::hypergraph::{canonical_form, Hypergraph};
use hyperspec::spectra::{char_poly, SpectralConfig};
use hyperspec::tensor::{mat_sim, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 2_305_843_009_213_693_951;

fn det_modular(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [32, 128] {
        let entries = (0..n * n).map(|_| rng.random_range(0..P)).collect();
        let m = ModMatrix::new(P, n, entries).unwrap();
        c.bench_function(&format!("det_mod/{n}"), |b| b.iter(|| det_mod(black_box(&m))));
    }
}

fn characteristic(c: &mut Criterion) {
    let cfg = SpectralConfig::default();
    let mut group = c.benchmark_group("char_poly");
    group.sample_size(10);
    for h in [Hypergraph::new(3, 3, [vec![0, 1, 2]]).unwrap(), Hypergraph::complete(4, 3).unwrap()] {
        let a = h.adjacency_tensor();
        group.bench_function(format!("n{}", h.n()), |b| b.iter(|| char_poly(black_box(&a), &cfg).unwrap()));
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 7;
    let edges: Vec<Vec<usize>> = (0..12)
        .map(|_| {
            let mut e = vec![rng.random_range(0..n)];
            while e.len() < 3 {
                let v = rng.random_range(0..n);
                if !e.contains(&v) {
                    e.push(v);
                }
            }
            e
        })
        .collect();
    let h = Hypergraph::new(n, 3, edges).unwrap();
    c.bench_function("canonical_form/n7", |b| b.iter(|| canonical_form(black_box(&h)).unwrap()));
}

fn similarity(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dim = 8;
    let a =
        Tensor::from_entries(3, dim, (0..dim * dim * dim).map(|_| int(rng.random_range(-3..=3))).collect()).unwrap();
    let mut p = RationalMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            p.set(i, j, int(rng.random_range(-2..=2)));
        }
    }
    c.bench_function("mat_sim/order3_dim8", |b| b.iter(|| mat_sim(black_box(&p), black_box(&a)).unwrap()));
}

criterion_group!(benches, det_modular, characteristic, canonical, similarity);
criterion_main!(benches);
