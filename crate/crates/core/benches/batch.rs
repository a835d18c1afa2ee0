use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slocc_core::algebra::Scalar;
use slocc_core::catalogue::{hierarchy_with, ConvertOptions};
use slocc_core::corpus::{random_scrambled_pencil, random_witness};
use slocc_core::exec::{self, ExecMode};
use slocc_core::kronecker::canonical_pencil;
use slocc_core::slocc::{apply_slocc, pencil_to_state, slocc_equivalent_with, State};
use slocc_core::{kronecker_invariants, KroneckerInvariants};

const MODES: [(&str, ExecMode); 2] = [
    ("sequential", ExecMode::Sequential),
    ("parallel", ExecMode::Parallel),
];

fn corpus(count: usize) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut out = Vec::new();
    while out.len() < count {
        if let Ok(s) = pencil_to_state(&random_scrambled_pencil(&mut rng, 6, 8).0) {
            out.push(s);
        }
    }
    out
}

/// A pair with six simple points on each side: the trio search dominates.
fn many_points() -> (State, State) {
    let mut inv = KroneckerInvariants {
        normal_rank: 6,
        right_minimal_indices: Vec::new(),
        left_minimal_indices: Vec::new(),
        finite_divisors: (0..6).map(|x| (Scalar::from_int(x * x), vec![1])).collect(),
        infinite_divisors: Vec::new(),
    };
    inv.finite_divisors.insert(Scalar::from_int(-1), vec![2]);
    inv.normal_rank = 8;
    let s = pencil_to_state(&canonical_pencil(&inv, 8, 8).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = apply_slocc(&s, &random_witness(&mut rng, 8, 8)).unwrap();
    (s, t)
}

fn batch_invariants(c: &mut Criterion) {
    let states = corpus(64);
    let mut g = c.benchmark_group("batch_invariants");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec::map(mode, &states, |s| kronecker_invariants(s.pencil()).is_ok()))
        });
    }
    g.finish();
}

fn trio_search(c: &mut Criterion) {
    let (s, t) = many_points();
    let mut g = c.benchmark_group("trio_search");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| slocc_equivalent_with(&s, &t, mode).unwrap())
        });
    }
    g.finish();
}

fn pairwise_convertibility(c: &mut Criterion) {
    let opts = ConvertOptions {
        budget: 300,
        prefer_exact: false,
        ..ConvertOptions::default()
    };
    let mut g = c.benchmark_group("hierarchy_2x3x6");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| hierarchy_with(3, 6, &opts, mode).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    batch_invariants,
    trio_search,
    pairwise_convertibility
);
criterion_main!(benches);
