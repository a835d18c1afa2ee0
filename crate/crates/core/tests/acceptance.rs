//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are reported as failing but do
//! not fail the process; every other failure does.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slocc_core::algebra::{Matrix, Scalar};
use slocc_core::catalogue::{
    classify, convertibility, enumerate_classes, tensor_rank, ConvertVerdict,
};
use slocc_core::corpus::{
    perturb_class, random_invariants, random_invertible, random_pencil, random_scrambled_pencil,
    random_witness,
};
use slocc_core::exec::{self, ExecMode};
use slocc_core::invariants::minimal_indices;
use slocc_core::kronecker::{canonical_pencil, reduce_to_canonical};
use slocc_core::slocc::{
    apply_local_maps, apply_slocc, local_ranks, pencil_to_state, slocc_equivalent, EquivVerdict,
    SloccWitness, State,
};
use slocc_core::{Error, Pencil};

/// Reference listing of the (3,6) catalogue: `((rA, rB, rC), tensor rank)`.
const REFERENCE_TABLE: [((usize, usize, usize), usize); 26] = [
    ((1, 1, 1), 1),
    ((2, 2, 1), 2),
    ((2, 1, 2), 2),
    ((1, 2, 2), 2),
    ((2, 2, 2), 2),
    ((2, 2, 2), 3),
    ((2, 2, 3), 3),
    ((2, 2, 3), 3),
    ((2, 2, 4), 4),
    ((2, 3, 2), 3),
    ((2, 3, 2), 3),
    ((2, 3, 3), 3),
    ((2, 3, 3), 3),
    ((1, 3, 3), 2),
    ((2, 3, 3), 4),
    ((2, 3, 3), 4),
    ((2, 3, 3), 4),
    ((2, 3, 3), 4),
    ((2, 3, 4), 4),
    ((2, 3, 4), 4),
    ((2, 3, 4), 5),
    ((2, 3, 4), 4),
    ((2, 3, 4), 4),
    ((2, 3, 5), 5),
    ((2, 3, 5), 5),
    ((2, 3, 5), 6),
];

/// The printed table is internally inconsistent in two rows, see the
/// criterion 2 report.
const EXPECTED_FAILURES: [usize; 1] = [2];

type Outcome = Result<String, String>;

/// Right minimal indices, `(point, degrees)` pairs, infinite degrees.
type Structure<'a> = (&'a [usize], &'a [(i64, &'a [usize])], &'a [usize]);

type Criterion = (usize, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_failure(results: Vec<Result<(), String>>) -> Result<(), String> {
    results
        .into_iter()
        .collect::<Result<Vec<()>, String>>()
        .map(|_| ())
}

fn c1_class_counts() -> Outcome {
    let t = Instant::now();
    let mut got = Vec::new();
    for (m, n, want) in [(2, 2, 6), (2, 4, 9), (3, 6, 26)] {
        let count = enumerate_classes(m, n).map_err(|e| e.to_string())?.count();
        ensure(count == want, || {
            format!("({m},{n}) gave {count}, expected {want}")
        })?;
        got.push(format!("({m},{n})={count}"));
    }
    match enumerate_classes(4, 4) {
        Err(Error::InfiniteFamilies(_)) => got.push("(4,4)=InfiniteFamilies".into()),
        other => return Err(format!("(4,4) gave {other:?}")),
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{} in {elapsed:.2?}", got.join(" ")))
}

fn multiset(
    rows: impl IntoIterator<Item = ((usize, usize, usize), usize)>,
) -> BTreeMap<String, isize> {
    let mut out = BTreeMap::new();
    for ((a, b, c), t) in rows {
        *out.entry(format!("({a},{b},{c})/{t}")).or_insert(0) += 1;
    }
    out
}

fn c2_reference_table() -> Outcome {
    let cat = enumerate_classes(3, 6).map_err(|e| e.to_string())?;
    let ours = multiset(cat.classes.iter().map(|d| (d.local_ranks, d.tensor_rank)));
    let table = multiset(REFERENCE_TABLE);
    let mut only_ours = Vec::new();
    let mut only_table = Vec::new();
    for key in ours.keys().chain(table.keys()) {
        let diff = ours.get(key).unwrap_or(&0) - table.get(key).unwrap_or(&0);
        if diff > 0 && !only_ours.contains(key) {
            only_ours.push(key.clone());
        }
        if diff < 0 && !only_table.contains(key) {
            only_table.push(key.clone());
        }
    }
    if only_ours.is_empty() && only_table.is_empty() {
        return Ok("catalogue multiset equals the 26 table rows".into());
    }
    Err(format!(
        "catalogue has {} where the table lists {}; the (1,3,3) class is |0>(|00>+|11>+|22>) \
         with Schmidt rank 3, and eps[1,1,1] needs 6 columns",
        only_ours.join(", "),
        only_table.join(", ")
    ))
}

fn c3_witness_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc3);
    let n_cases = 1000;
    let mut pairs = Vec::new();
    while pairs.len() < n_cases {
        let (inv, m, n) = random_invariants(&mut rng, 6, 8);
        if inv.normal_rank == 0 {
            continue;
        }
        let Some(perturbed) = perturb_class(&inv) else {
            continue;
        };
        let k = canonical_pencil(&inv, m, n).map_err(|e| e.to_string())?;
        let w1 = random_witness(&mut rng, m, n);
        let w2 = random_witness(&mut rng, m, n);
        let other = canonical_pencil(&perturbed, m, n).map_err(|e| e.to_string())?;
        let w3 = random_witness(&mut rng, m, n);
        pairs.push((k, w1, w2, other, w3));
    }
    let results = exec::map(ExecMode::default(), &pairs, |(k, w1, w2, other, w3)| {
        let s = pencil_to_state(k).map_err(|e| e.to_string())?;
        let s1 = apply_slocc(&s, w1).map_err(|e| e.to_string())?;
        let s2 = apply_slocc(&s, w2).map_err(|e| e.to_string())?;
        match slocc_equivalent(&s1, &s2).map_err(|e| e.to_string())? {
            EquivVerdict::Equivalent(w) => {
                let image = apply_slocc(&s1, &w).map_err(|e| e.to_string())?;
                ensure(w.is_invertible() && image.ratio_to(&s2).is_some(), || {
                    format!("witness does not verify for {:?}", k.shape())
                })?;
            }
            v => return Err(format!("equivalent pair rejected: {v:?}")),
        }
        let s3 = apply_slocc(&pencil_to_state(other).map_err(|e| e.to_string())?, w3)
            .map_err(|e| e.to_string())?;
        match slocc_equivalent(&s1, &s3).map_err(|e| e.to_string())? {
            EquivVerdict::NotEquivalent(_) => Ok(()),
            EquivVerdict::Equivalent(_) => Err("cross-class pair accepted".to_string()),
        }
    });
    first_failure(results)?;
    Ok(format!("{n_cases} equivalent pairs verified, {n_cases} cross-class pairs rejected (dims up to 2x6x8)"))
}

fn c4_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc4);
    let cases: Vec<_> = (0..1000)
        .map(|_| random_scrambled_pencil(&mut rng, 6, 8))
        .collect();
    let results = exec::map(ExecMode::default(), &cases, |(p, inv)| {
        let d = reduce_to_canonical(p).map_err(|e| e.to_string())?;
        ensure(d.inv == *inv, || {
            format!("invariants {:?} != {inv:?}", d.inv)
        })?;
        let k = canonical_pencil(inv, p.rows(), p.cols()).map_err(|e| e.to_string())?;
        ensure(p.transform(&d.b, &d.c) == d.k && d.k == k, || {
            "B P C^T != K".into()
        })
    });
    first_failure(results)?;
    Ok(format!(
        "{} scrambled pencils up to 6x8 reduced exactly",
        cases.len()
    ))
}

/// Ranks of the three flattenings, computed directly from amplitudes.
fn flattening_ranks(s: &State) -> (usize, usize, usize) {
    let a = s.amplitudes();
    let (m, n) = s.dims();
    let fa = Matrix::from_fn(2, m * n, |i, jk| a[i][jk / n][jk % n].clone());
    let fb = Matrix::from_fn(m, 2 * n, |j, ik| a[ik / n][j][ik % n].clone());
    let fc = Matrix::from_fn(n, 2 * m, |k, ij| a[ij / m][ij % m][k].clone());
    (fa.rank(), fb.rank(), fc.rank())
}

fn c5_local_ranks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc5);
    let mut states = Vec::new();
    while states.len() < 1000 {
        let p = if states.len() % 2 == 0 {
            random_scrambled_pencil(&mut rng, 6, 8).0
        } else {
            let (m, n) = (
                rand::Rng::gen_range(&mut rng, 1..=6),
                rand::Rng::gen_range(&mut rng, 1..=8),
            );
            random_pencil(&mut rng, m, n)
        };
        if let Ok(s) = pencil_to_state(&p) {
            states.push(s);
        }
    }
    let results = exec::map(ExecMode::default(), &states, |s| {
        let (got, want) = (local_ranks(s), flattening_ranks(s));
        ensure(got == want, || {
            format!("local ranks {got:?} != flattening ranks {want:?}")
        })
    });
    first_failure(results)?;
    Ok(format!(
        "{} states agree with flattening ranks",
        states.len()
    ))
}

fn c6_alice_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc6);
    let cases: Vec<(Pencil, Matrix)> = (0..1000)
        .map(|_| {
            (
                random_scrambled_pencil(&mut rng, 6, 8).0,
                random_invertible(&mut rng, 2),
            )
        })
        .collect();
    let results = exec::map(ExecMode::default(), &cases, |(p, a)| {
        let moved = apply_local_maps(
            p,
            a,
            &Matrix::identity(p.rows()),
            &Matrix::identity(p.cols()),
        )
        .map_err(|e| e.to_string())?;
        let before = minimal_indices(p).map_err(|e| e.to_string())?;
        let after = minimal_indices(&moved).map_err(|e| e.to_string())?;
        ensure(before == after, || format!("{before:?} -> {after:?}"))
    });
    first_failure(results)?;
    Ok(format!(
        "minimal indices fixed under {} Alice operations",
        cases.len()
    ))
}

fn c7_tensor_rank() -> Outcome {
    let ghz = tensor_rank(&State::ghz()).map_err(|e| e.to_string())?;
    let w = tensor_rank(&State::w()).map_err(|e| e.to_string())?;
    ensure(ghz == 2 && w == 3, || format!("GHZ {ghz}, W {w}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc7);
    let mut cases: Vec<(State, SloccWitness)> = Vec::new();
    while cases.len() < 1000 {
        let (p, _) = random_scrambled_pencil(&mut rng, 6, 8);
        if let Ok(s) = pencil_to_state(&p) {
            let (m, n) = s.dims();
            cases.push((s, random_witness(&mut rng, m, n)));
        }
    }
    let results = exec::map(ExecMode::default(), &cases, |(s, w)| {
        let before = tensor_rank(s).map_err(|e| e.to_string())?;
        let after = tensor_rank(&apply_slocc(s, w).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(before == after, || {
            format!("tensor rank {before} -> {after}")
        })
    });
    first_failure(results)?;
    Ok(format!(
        "GHZ=2, W=3, invariant under {} random SLOCC witnesses",
        cases.len()
    ))
}

fn c8_conversions() -> Outcome {
    let cat = enumerate_classes(3, 6).map_err(|e| e.to_string())?;
    let find = |label: &str| {
        cat.classes
            .iter()
            .find(|d| d.label == label)
            .cloned()
            .ok_or_else(|| format!("class {label} missing"))
    };
    // L2 + M1(0): deleting the first column of the essential pencil and
    // adding c2, c3 times it to columns two and three gives determinant
    // lambda (mu^2 + c2 lambda mu - c3 lambda^2)
    let src = find("zero[0x2]+eps[2]+M1(0)")?;
    let dst = find("zero[0x3]+M1(0)+M1(1)+M1(2)")?;
    ensure(src.local_ranks == (2, 3, 4) && src.tensor_rank == 4, || {
        "source is not (2,3,4)/4".into()
    })?;
    let det = dst.representative_pencil().block(0, 3, 3, 3).determinant();
    let expected = Pencil::new(
        Matrix::from_ints(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]),
        Matrix::identity(3),
    )
    .map_err(|e| e.to_string())?
    .determinant();
    ensure(det == expected, || format!("target determinant {det:?}"))?;
    let w = match convertibility(&src, &dst, 10_000, 0) {
        ConvertVerdict::Convertible(w) => w,
        v => return Err(format!("no witness: {v:?}")),
    };
    let half = |a, b| Scalar::from_ratio(a, b);
    let pattern = vec![vec![half(3, 2)], vec![half(-1, 2)], vec![Scalar::ZERO]];
    ensure(
        w.deleted_columns == vec![2] && w.column_coefficients == pattern,
        || {
            format!(
                "witness {:?} {:?}",
                w.deleted_columns, w.column_coefficients
            )
        },
    )?;
    let image = apply_local_maps(
        &src.representative_pencil(),
        &w.maps.a,
        &w.maps.b,
        &w.maps.c,
    )
    .map_err(|e| e.to_string())?;
    let landed = classify(&pencil_to_state(&image).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(landed == dst, || format!("witness lands in {landed}"))?;

    let src = find("zero[0x1]+eps[1,1]+M1(0)")?;
    let dst = find("zero[0x2]+eps[3]")?;
    match convertibility(&src, &dst, 10_000, 0) {
        ConvertVerdict::Undecided { samples } => Ok(format!(
            "(3/2, -1/2) witness found after {} samples and verified; eps[1,1]+M1 -> eps[3] undecided after {samples}",
            w.samples
        )),
        v => Err(format!("eps[1,1]+M1 -> eps[3] gave {v:?}")),
    }
}

fn mean_time(cases: &[(State, State)]) -> Result<Duration, String> {
    let mut total = Duration::ZERO;
    for (a, b) in cases {
        let t = Instant::now();
        match slocc_equivalent(a, b).map_err(|e| e.to_string())? {
            EquivVerdict::Equivalent(_) => {}
            v => return Err(format!("{v:?} on an equivalent pair")),
        }
        total += t.elapsed();
    }
    Ok(total / cases.len() as u32)
}

fn equivalent_pair(rng: &mut ChaCha8Rng, p: &Pencil) -> Result<(State, State), String> {
    let s = pencil_to_state(p).map_err(|e| e.to_string())?;
    let (m, n) = s.dims();
    let w = random_witness(rng, m, n);
    Ok((s.clone(), apply_slocc(&s, &w).map_err(|e| e.to_string())?))
}

fn c9_scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc9);
    // generic 8x16 pencils, and structured ones with a regular part and
    // repeated points
    let mut big = Vec::new();
    for _ in 0..3 {
        let p = random_pencil(&mut rng, 8, 16);
        big.push(equivalent_pair(&mut rng, &p)?);
    }
    let structured: [Structure; 3] = [
        (&[0, 0, 1, 1, 1, 1, 1, 1], &[(1, &[2])], &[]),
        (&[0, 0, 0, 1, 1, 1, 1, 2], &[(0, &[1]), (-1, &[1])], &[]),
        (&[0, 0, 0, 0, 1, 1, 2, 2], &[(2, &[1])], &[1]),
    ];
    for (right, finite, infinite) in structured {
        let mut inv = random_invariants(&mut rng, 1, 1).0;
        inv.right_minimal_indices = right.to_vec();
        inv.left_minimal_indices.clear();
        inv.finite_divisors = finite
            .iter()
            .map(|(x, d)| (Scalar::from_int(*x), d.to_vec()))
            .collect();
        inv.infinite_divisors = infinite.to_vec();
        inv.normal_rank = right.iter().sum::<usize>() + inv.regular_size();
        let k = canonical_pencil(&inv, 8, 16).map_err(|e| e.to_string())?;
        let scrambled = k.transform(
            &random_invertible(&mut rng, 8),
            &random_invertible(&mut rng, 16),
        );
        big.push(equivalent_pair(&mut rng, &scrambled)?);
    }
    let mut worst = Duration::ZERO;
    for pair in &big {
        worst = worst.max(mean_time(std::slice::from_ref(pair))?);
    }
    ensure(worst < Duration::from_secs(5), || {
        format!("slowest large instance took {worst:.2?}")
    })?;

    let sample = |rng: &mut ChaCha8Rng, n: usize| -> Result<Vec<(State, State)>, String> {
        (0..5)
            .map(|_| {
                let p = random_pencil(rng, 2, n);
                equivalent_pair(rng, &p)
            })
            .collect()
    };
    let small = sample(&mut rng, 4)?;
    let large = sample(&mut rng, 40)?;
    // repeat the small instances so timer resolution does not dominate
    let reps = 20;
    let mut t_small = Duration::ZERO;
    for _ in 0..reps {
        t_small += mean_time(&small)?;
    }
    let t_small = t_small / reps;
    let t_large = mean_time(&large)?;
    let ratio = t_large.as_secs_f64() / t_small.as_secs_f64().max(1e-9);
    ensure(ratio < 100.0, || {
        format!("n 4 -> 40 at m = 2 grew runtime {ratio:.1}x ({t_small:.2?} -> {t_large:.2?})")
    })?;
    Ok(format!(
        "slowest 8x16 instance {worst:.2?}; n 4 -> 40 at m = 2 grew runtime {ratio:.1}x ({t_small:.2?} -> {t_large:.2?})"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "class counts", c1_class_counts),
        (2, "reference table multiset", c2_reference_table),
        (3, "witness soundness", c3_witness_soundness),
        (4, "Kronecker round trip", c4_round_trip),
        (5, "local ranks vs flattenings", c5_local_ranks),
        (6, "minimal indices under Alice", c6_alice_invariance),
        (7, "tensor rank", c7_tensor_rank),
        (8, "conversion witnesses", c8_conversions),
        (9, "scaling", c9_scaling),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => {
                passed += 1;
                println!("criterion {id} PASS {name}: {detail} [{elapsed:.2?}]");
            }
            Err(detail) => {
                let expected = EXPECTED_FAILURES.contains(&id);
                let tag = if expected { "FAIL (expected)" } else { "FAIL" };
                println!("criterion {id} {tag} {name}: {detail} [{elapsed:.2?}]");
                if !expected {
                    unexpected.push(id);
                }
            }
        }
    }
    println!("{passed}/9 criteria pass");
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
