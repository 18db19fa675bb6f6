use ctopo_core::matrix::{edge_order, EdgeOrdering, SymmetricMatrix};
use ctopo_core::topology::{
    betti_curves, betti_curves_of, flag_filtration, starting_edge_density, TopologyConfig, DEFAULT_SIMPLEX_BUDGET,
};
use ctopo_testkit as kit;
use proptest::prelude::*;

fn to_matrix(rows: &[Vec<f64>]) -> SymmetricMatrix {
    SymmetricMatrix::new(rows.len(), rows.iter().flatten().copied().collect()).unwrap()
}

fn check_against_oracle(rows: &[Vec<f64>], ordering: EdgeOrdering) {
    let m = to_matrix(rows);
    let cfg = TopologyConfig::default().with_ordering(ordering);
    let bc = betti_curves_of(&m, &cfg).unwrap();
    let (b0, b1) = kit::brute_force_betti_curves(rows, ordering == EdgeOrdering::Descending);
    assert_eq!(bc.curve(0).unwrap(), &b0[..], "beta_0 mismatch for {rows:?}");
    assert_eq!(bc.curve(1).unwrap(), &b1[..], "beta_1 mismatch for {rows:?}");
}

#[test]
fn four_cycle_matches_brute_force() {
    let rows = vec![
        vec![0.0, 10.0, 2.0, 7.0],
        vec![10.0, 0.0, 9.0, 1.0],
        vec![2.0, 9.0, 0.0, 8.0],
        vec![7.0, 1.0, 8.0, 0.0],
    ];
    let (_, b1) = kit::brute_force_betti_curves(&rows, true);
    assert_eq!(b1, vec![0, 0, 0, 0, 1, 0, 0]);
    check_against_oracle(&rows, EdgeOrdering::Descending);
}

#[test]
fn seeded_random_matrices_match_brute_force() {
    let mut rng = kit::rng(0xC11C);
    for case in 0..120 {
        let n = 4 + case % 5;
        // Every third matrix is quantized so ties exercise the tie-break.
        let levels = if case % 3 == 0 { 4 } else { 0 };
        let rows = kit::random_symmetric_rows(n, levels, &mut rng);
        let ordering = if case % 2 == 0 {
            EdgeOrdering::Descending
        } else {
            EdgeOrdering::Ascending
        };
        check_against_oracle(&rows, ordering);
    }
}

#[test]
fn euler_characteristic_matches_betti_numbers() {
    let mut rng = kit::rng(42);
    for n in 3..=5 {
        for _ in 0..10 {
            let rows = kit::random_symmetric_rows(n, 0, &mut rng);
            let ef = edge_order(&to_matrix(&rows), EdgeOrdering::Descending).unwrap();
            let max_dim = n - 1;
            let sf = flag_filtration(&ef, max_dim, DEFAULT_SIMPLEX_BUDGET).unwrap();
            let bc = betti_curves(&sf, max_dim - 1).unwrap();
            for v in 0..=ef.len() {
                let chi: i64 = sf
                    .iter()
                    .filter(|s| s.birth <= v)
                    .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
                    .sum();
                let alt: i64 = (0..=bc.k_max())
                    .map(|k| {
                        let b = bc.beta(k, v).unwrap() as i64;
                        if k % 2 == 0 {
                            b
                        } else {
                            -b
                        }
                    })
                    .sum();
                assert_eq!(chi, alt, "n={n} v={v}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn betti_curves_match_oracle(n in 2usize..=8, seed in any::<u64>(), levels in prop_oneof![Just(0u32), 2u32..6]) {
        let rows = kit::random_symmetric_rows(n, levels, &mut kit::rng(seed));
        check_against_oracle(&rows, EdgeOrdering::Descending);
    }

    #[test]
    fn curve_endpoints_and_sed_contract(n in 2usize..=12, seed in any::<u64>()) {
        let rows = kit::random_symmetric_rows(n, 0, &mut kit::rng(seed));
        let bc = betti_curves_of(&to_matrix(&rows), &TopologyConfig::default()).unwrap();
        let b0 = bc.curve(0).unwrap();
        let b1 = bc.curve(1).unwrap();
        prop_assert_eq!(b0[0], n);
        prop_assert_eq!(b1[0], 0);
        prop_assert_eq!(*b0.last().unwrap(), 1);
        prop_assert_eq!(*b1.last().unwrap(), 0);
        match starting_edge_density(&bc, 1).unwrap() {
            Some(s) => {
                prop_assert!(b1[s] >= 1);
                prop_assert!(b1[..s].iter().all(|&b| b == 0));
            }
            None => prop_assert!(b1.iter().all(|&b| b == 0)),
        }
    }
}
