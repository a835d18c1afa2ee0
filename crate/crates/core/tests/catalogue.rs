use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slocc_core::catalogue::{
    classify, convertibility, convertibility_with, enumerate_classes, enumerate_classes_with,
    hierarchy, hierarchy_with, ClassDescriptor, ConvertOptions, ConvertVerdict, Hierarchy,
    Obstruction,
};
use slocc_core::corpus::random_witness;
use slocc_core::exec::ExecMode;
use slocc_core::slocc::{apply_local_maps, apply_slocc, pencil_to_state};
use slocc_core::Error;

fn lands_in(
    src: &ClassDescriptor,
    dst: &ClassDescriptor,
    maps: &slocc_core::catalogue::LocalMaps,
) -> bool {
    let image = apply_local_maps(&src.representative_pencil(), &maps.a, &maps.b, &maps.c).unwrap();
    classify(&pencil_to_state(&image).unwrap()).unwrap() == *dst
}

fn check_hierarchy(h: &Hierarchy) {
    for e in &h.edges {
        let (s, d) = (&h.nodes[e.src], &h.nodes[e.dst]);
        assert!(lands_in(s, d, &e.witness.maps), "{s} -> {d}");
        let (sa, sb, sc) = s.local_ranks;
        let (da, db, dc) = d.local_ranks;
        assert!(da <= sa && db <= sb && dc <= sc, "{s} -> {d}");
        assert!(d.tensor_rank <= s.tensor_rank, "{s} -> {d}");
    }
}

#[test]
fn two_qubit_hierarchy_has_eleven_edges() {
    let h = hierarchy(2, 2, 2000, 0).unwrap();
    assert_eq!(h.nodes.len(), 6);
    assert_eq!(h.edges.len(), 11);
    assert!(h.undecided.is_empty());
    check_hierarchy(&h);
    let alias = |i: usize| h.nodes[i].aliases.first().cloned().unwrap_or_default();
    for top in ["GHZ", "W"] {
        let targets: Vec<String> = h
            .edges
            .iter()
            .filter(|e| alias(e.src) == top)
            .map(|e| alias(e.dst))
            .collect();
        assert_eq!(targets.len(), 4, "{top}: {targets:?}");
    }
    // everything above the product class reaches it directly, so only the
    // bipartite classes survive as intermediate steps
    let reduced = h.transitive_reduction();
    assert_eq!(reduced.edges.len(), 11 - 2);
}

#[test]
fn hierarchy_edges_verify_in_larger_systems() {
    let h = hierarchy(2, 3, 3000, 1).unwrap();
    check_hierarchy(&h);
    assert!(!h.edges.is_empty());
}

#[test]
fn parallel_and_sequential_results_agree() {
    let opts = ConvertOptions {
        budget: 500,
        seed: 3,
        prefer_exact: false,
        ..ConvertOptions::default()
    };
    let a = hierarchy_with(2, 3, &opts, ExecMode::Sequential).unwrap();
    let b = hierarchy_with(2, 3, &opts, ExecMode::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        enumerate_classes_with(3, 6, ExecMode::Sequential).unwrap(),
        enumerate_classes_with(3, 6, ExecMode::default()).unwrap()
    );
}

#[test]
fn infinite_families_from_four_by_four_on() {
    for (m, n) in [(4, 4), (4, 7), (5, 4)] {
        assert!(matches!(
            enumerate_classes(m, n),
            Err(Error::InfiniteFamilies(_))
        ));
    }
    assert!(enumerate_classes(3, 9).is_ok());
}

#[test]
fn catalogue_labels_are_unique_and_descriptors_self_classify() {
    let cat = enumerate_classes(3, 6).unwrap();
    let mut labels: Vec<&str> = cat.classes.iter().map(|d| d.label.as_str()).collect();
    labels.sort_unstable();
    labels.dedup();
    assert_eq!(labels.len(), 26);
    for d in &cat.classes {
        assert_eq!(&classify(&d.representative()).unwrap(), d);
    }
}

#[test]
fn table_discrepancies_are_the_two_known_rows() {
    let cat = enumerate_classes(3, 6).unwrap();
    let find = |ranks| cat.classes.iter().filter(move |d| d.local_ranks == ranks);
    let schmidt3: Vec<_> = find((1, 3, 3)).collect();
    assert_eq!(schmidt3.len(), 1);
    assert_eq!(schmidt3[0].tensor_rank, 3);
    let wide: Vec<_> = find((2, 3, 6)).collect();
    assert_eq!((wide.len(), wide[0].tensor_rank), (1, 6));
    assert_eq!(wide[0].label, "eps[1,1,1]");
}

#[test]
fn charlie_rank_increase_is_obstructed() {
    let cat = enumerate_classes(3, 6).unwrap();
    let by = |l: &str| cat.classes.iter().find(|d| d.label == l).unwrap();
    assert_eq!(
        convertibility(by("zero[0x2]+eps[3]"), by("zero[0x1]+eps[1,2]"), 100, 0),
        ConvertVerdict::Obstructed(Obstruction::LocalRankIncrease { party: 'C' })
    );
}

#[test]
fn disabling_the_tensor_rank_obstruction_falls_back_to_search() {
    let cat = enumerate_classes(2, 2).unwrap();
    let by = |a: &str| {
        cat.classes
            .iter()
            .find(|d| d.aliases.iter().any(|x| x == a))
            .unwrap()
    };
    let opts = ConvertOptions {
        budget: 200,
        tensor_rank_obstruction: false,
        ..ConvertOptions::default()
    };
    // same local ranks: only invertible maps apply
    assert_eq!(
        convertibility_with(by("GHZ"), by("W"), &opts),
        ConvertVerdict::Obstructed(Obstruction::NoLocalRankDrop)
    );
}

#[test]
fn same_class_converts_by_identity() {
    let cat = enumerate_classes(2, 3).unwrap();
    for d in &cat.classes {
        match convertibility(d, d, 10, 0) {
            ConvertVerdict::Convertible(w) => {
                assert!(w.deleted_columns.is_empty() && w.deleted_rows.is_empty());
                assert!(lands_in(d, d, &w.maps));
            }
            v => panic!("{d}: {v:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slocc_images_of_representatives_classify_back(seed in any::<u64>(), idx in 0usize..26) {
        let cat = enumerate_classes(3, 6).unwrap();
        let d = &cat.classes[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = apply_slocc(&d.representative(), &random_witness(&mut rng, 3, 6)).unwrap();
        prop_assert_eq!(&classify(&s).unwrap(), d);
    }

    #[test]
    fn convertible_witnesses_verify(seed in any::<u64>(), i in 0usize..9, j in 0usize..9) {
        let cat = enumerate_classes(2, 4).unwrap();
        let (s, d) = (&cat.classes[i], &cat.classes[j]);
        if let ConvertVerdict::Convertible(w) = convertibility(s, d, 300, seed) {
            prop_assert!(lands_in(s, d, &w.maps));
            prop_assert_eq!(w.scale.is_zero(), false);
        }
    }
}
