use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fowl_core::align::{build_signature_map, levenshtein, AlignConfig};
use fowl_core::fol::{Symbol, SymbolRole};
use fowl_core::owl::{Entity, EntityKind, Iri};
use fowl_core::par::map_ordered;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn word(rng: &mut StdRng, len: usize) -> String {
    (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect()
}

fn signature(n: usize) -> (BTreeSet<Symbol>, Vec<(Entity, Vec<String>)>) {
    let mut rng = StdRng::seed_from_u64(42);
    let entities = (0..n)
        .map(|i| {
            let iri = Iri::new(format!("http://example.org/e{i}")).unwrap();
            (Entity::new(EntityKind::Class, iri), vec![format!("{} {}", word(&mut rng, 6), word(&mut rng, 8))])
        })
        .collect();
    let symbols = (0..n / 4)
        .map(|_| Symbol { name: format!("{}_{}", word(&mut rng, 6), word(&mut rng, 8)), role: SymbolRole::Predicate, arity: 1 })
        .collect();
    (symbols, entities)
}

fn alignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("alignment");
    group.sample_size(10);
    for n in [400, 1600] {
        let (symbols, entities) = signature(n);
        for (label, threads) in [("sequential", Some(1)), ("parallel", None)] {
            let cfg = AlignConfig { threads, ..AlignConfig::default() };
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, _| {
                b.iter(|| build_signature_map(&symbols, &entities, &cfg))
            });
        }
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let pairs: Vec<(String, String)> = (0..20_000).map(|_| (word(&mut rng, 24), word(&mut rng, 24))).collect();
    let mut group = c.benchmark_group("map_ordered");
    for (label, threads) in [("sequential", Some(1)), ("parallel", None)] {
        group.bench_function(label, |b| b.iter(|| map_ordered(&pairs, threads, |(a, b)| levenshtein(a, b))));
    }
    group.finish();
}

criterion_group!(benches, alignment, distances);
criterion_main!(benches);
