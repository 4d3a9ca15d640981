//! Cross-module invariant suites: randomized matrices for the linear
//! algebra, randomized complexes for the differentials, and the series
//! identities that tie the algebraic models together.

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use toric_core::cobar::{
    cobar_d_squared_failures, flag_divergence, flag_loop_series, graph_product_dims,
    normalize_graph_word, CobarOptions,
};
use toric_core::exactlin::{rat, Rational, SparseMatrix};
use toric_core::facering::{sr_basis, sr_poincare_series, GradingConvention};
use toric_core::koszul::d_squared_failures;
use toric_core::SimplicialComplex;

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-4i64..5, c..=c), r..=r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_invariant_under_row_permutation_and_scaling(rows in matrix_strategy()) {
        let m = SparseMatrix::from_int_rows(&rows);
        let base = m.rank();

        let mut reversed = rows.clone();
        reversed.reverse();
        prop_assert_eq!(SparseMatrix::from_int_rows(&reversed).rank(), base);

        let scaled: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&x| x * (i as i64 + 2)).collect())
            .collect();
        prop_assert_eq!(SparseMatrix::from_int_rows(&scaled).rank(), base);
    }

    #[test]
    fn kernel_vectors_are_exact(rows in matrix_strategy()) {
        let m = SparseMatrix::from_int_rows(&rows);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            let image = m.apply(v);
            prop_assert!(image.iter().all(|x| x == &rat(0)), "A*v != 0");
        }
    }
}

/// Deterministic random complex: `m` vertices, a handful of facets of
/// bounded size.
fn random_complex(rng: &mut StdRng, max_m: usize) -> SimplicialComplex {
    let m = rng.gen_range(1..=max_m);
    let facet_count = rng.gen_range(1..=m.min(4));
    let mut facets = Vec::new();
    for _ in 0..facet_count {
        let size = rng.gen_range(1..=m.min(3));
        let mut facet: Vec<usize> = Vec::new();
        while facet.len() < size {
            let v = rng.gen_range(1..=m);
            if !facet.contains(&v) {
                facet.push(v);
            }
        }
        facet.sort_unstable();
        facets.push(facet);
    }
    SimplicialComplex::from_facets(m, &facets).expect("random facets are valid")
}

#[test]
fn differentials_square_to_zero_on_random_complexes() {
    let mut rng = StdRng::seed_from_u64(0x0007_071c);
    let opts = CobarOptions::default();
    for _ in 0..12 {
        let k = random_complex(&mut rng, 6);
        assert!(
            d_squared_failures(&k, 5).is_empty(),
            "koszul d^2 != 0 on {k:?}"
        );
        let failures = cobar_d_squared_failures(&k, 5, &opts).unwrap();
        assert!(failures.is_empty(), "cobar d^2 != 0 on {k:?}: {failures:?}");
    }
}

#[test]
fn face_ring_series_counts_random_complexes() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..20 {
        let k = random_complex(&mut rng, 6);
        let fh = k.f_h_vectors();
        assert!(fh.identity_holds(), "f/h identity fails on {k:?}");
        let series = sr_poincare_series(&k, GradingConvention::VertexDegreeOne);
        let coeffs = series.expand(7);
        for deg in 0..=7u32 {
            assert_eq!(
                BigInt::from(sr_basis(&k, deg).len()),
                coeffs[deg as usize],
                "series coefficient {deg} on {k:?}"
            );
        }
    }
}

#[test]
fn flag_complexes_agree_with_their_series() {
    let mut rng = StdRng::seed_from_u64(7);
    let opts = CobarOptions::default();
    let mut tested = 0;
    while tested < 8 {
        let k = random_complex(&mut rng, 4);
        if !k.is_flag() {
            continue;
        }
        tested += 1;
        let dims = graph_product_dims(&k, 6).unwrap();
        let expansion = flag_loop_series(&k).unwrap().expand(6);
        for deg in 0..=6 {
            assert_eq!(
                BigInt::from(dims[deg]),
                expansion[deg],
                "graph dims vs series at degree {deg} on {k:?}"
            );
        }
        assert_eq!(
            flag_divergence(&k, 4, &opts).unwrap(),
            None,
            "flag {k:?} diverged"
        );
    }
}

#[test]
fn lie_ranks_of_computed_loop_homology_round_trip() {
    // the PBW extraction applies to the dimensions coming out of the
    // cobar engine itself, not just to closed-form series
    use toric_core::cobar::{lie_ranks, loop_homology, pbw_series};
    let opts = CobarOptions::default();
    for k in [
        SimplicialComplex::discrete(3),
        SimplicialComplex::four_cycle(),
        SimplicialComplex::simplex(3),
    ] {
        let dims = loop_homology(&k, 6, &opts).unwrap();
        let coeffs: Vec<BigInt> = (0..=6)
            .map(|d| BigInt::from(dims.get(&d).copied().unwrap_or(0)))
            .collect();
        let ranks = lie_ranks(&coeffs, 6).unwrap();
        assert!(
            ranks.values().all(|l| l >= &BigInt::from(0)),
            "homotopy ranks are non-negative on {k:?}"
        );
        assert_eq!(pbw_series(&ranks, 6), coeffs, "PBW round trip on {k:?}");
    }
}

#[test]
fn first_divergence_sits_at_twice_the_smallest_missing_face_minus_two() {
    let opts = CobarOptions::default();
    let samples = [
        SimplicialComplex::boundary_simplex(2),
        SimplicialComplex::simplex(4).skeleton(1),
        SimplicialComplex::from_facets(4, &[vec![1, 2], vec![1, 3], vec![2, 3], vec![4]]).unwrap(),
    ];
    for k in samples {
        // missing 2-faces are quadratic data seen by the graph product;
        // the first extra cycle comes from the smallest larger one
        let smallest = k
            .missing_faces()
            .iter()
            .map(|f| f.len())
            .filter(|&l| l >= 3)
            .min()
            .unwrap();
        let expected = 2 * smallest - 2;
        let found = flag_divergence(&k, expected, &opts).unwrap();
        assert_eq!(
            found.map(|(deg, _)| deg),
            Some(expected),
            "divergence location on {k:?}"
        );
    }
}

#[test]
fn moment_angle_manifolds_of_cross_polytopes_are_sphere_products() {
    use toric_core::koszul::zk_betti;
    // boundary of the n-dimensional cross-polytope: Z_K = (S^3)^n
    for n in [2usize, 3] {
        let m = 2 * n;
        // vertices i and i+n are opposite; facets pick one from each pair
        let mut facets = Vec::new();
        for choice in 0u32..(1 << n) {
            let facet: Vec<usize> = (0..n)
                .map(|i| {
                    if choice >> i & 1 == 0 {
                        i + 1
                    } else {
                        i + 1 + n
                    }
                })
                .collect();
            facets.push(facet);
        }
        let k = SimplicialComplex::from_facets(m, &facets).unwrap();
        let betti = zk_betti(&k);
        let binomial =
            |n: usize, j: usize| -> usize { (0..j).fold(1usize, |acc, i| acc * (n - i) / (i + 1)) };
        for j in 0..=n {
            assert_eq!(betti.dim(3 * j), binomial(n, j), "H^{} of (S^3)^{n}", 3 * j);
        }
        let total: usize = betti.total.values().sum();
        assert_eq!(total, 1 << n, "total rank of (S^3)^{n}");
    }
}

fn expand_usize(num: &[i64], den: &[i64], n: usize) -> Vec<usize> {
    use toric_core::graded::{IntPoly, PoincareSeries};
    PoincareSeries::new(IntPoly::from_i64(num), IntPoly::from_i64(den))
        .unwrap()
        .expand(n)
        .iter()
        .map(|c| usize::try_from(c).unwrap())
        .collect()
}

#[test]
fn boundary_tetrahedron_is_a_seven_sphere_with_loop_series() {
    use toric_core::koszul::zk_betti;
    let k = SimplicialComplex::boundary_simplex(3);
    // Z_K = S^7
    let betti = zk_betti(&k);
    let expected: std::collections::BTreeMap<usize, usize> = [(0, 1), (7, 1)].into_iter().collect();
    assert_eq!(betti.total, expected);
    // loop homology carries an extra degree-6 class: (1+t)^4 / (1 - t^6)
    let dims = toric_core::cobar::loop_homology(&k, 6, &CobarOptions::default()).unwrap();
    let series = expand_usize(&[1, 4, 6, 4, 1], &[1, 0, 0, 0, 0, 0, -1], 6);
    let got: Vec<usize> = (0..=6)
        .map(|d| dims.get(&d).copied().unwrap_or(0))
        .collect();
    assert_eq!(got, series);
}

#[test]
fn flagification_fixes_exactly_the_flag_complexes() {
    let mut rng = StdRng::seed_from_u64(0x0f1a_6000);
    for _ in 0..30 {
        let k = random_complex(&mut rng, 5);
        let fl = k.flagification();
        // flagification contains K and is flag
        for face in k.faces() {
            assert!(
                fl.is_face(&face),
                "flagification lost face {face:?} of {k:?}"
            );
        }
        assert!(fl.is_flag());
        assert_eq!(fl == k, k.is_flag(), "fixed point iff flag on {k:?}");
    }
}

#[test]
fn reduced_and_full_koszul_models_agree_on_random_samples() {
    use toric_core::koszul::{zk_betti, zk_betti_via_full_model};
    let mut rng = StdRng::seed_from_u64(0x000b_e77e);
    for _ in 0..10 {
        let k = random_complex(&mut rng, 5);
        let reduced = zk_betti(&k);
        let cap = ((k.vertex_count() as i64 + k.dim() + 1) as usize).max(2);
        let full = zk_betti_via_full_model(&k, cap).unwrap();
        for degree in 0..=cap {
            assert_eq!(
                reduced.dim(degree),
                full.get(&degree).copied().unwrap_or(0),
                "oracle mismatch at degree {degree} on {k:?}"
            );
        }
    }
}

#[test]
fn graph_words_canonicalize_consistently_under_random_moves() {
    let mut rng = StdRng::seed_from_u64(99);
    let k = SimplicialComplex::from_facets(
        4,
        &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4], vec![1, 3]],
    )
    .unwrap();
    for _ in 0..300 {
        let len = rng.gen_range(1..=5);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        let canon = normalize_graph_word(&k, &word);
        // wander with random valid anticommuting swaps, then recanonicalize
        let mut wandered = word.clone();
        let mut sign = 1i64;
        for _ in 0..6 {
            if wandered.len() < 2 {
                break;
            }
            let i = rng.gen_range(0..wandered.len() - 1);
            let (a, b) = (wandered[i], wandered[i + 1]);
            if a != b && k.is_face(&[a.min(b), a.max(b)]) {
                wandered.swap(i, i + 1);
                sign = -sign;
            }
        }
        let rec = normalize_graph_word(&k, &wandered).map(|(s, w)| (s * sign, w));
        assert_eq!(canon, rec, "canonical class changed for word {word:?}");
    }
}

#[test]
fn homology_representatives_are_cycles_independent_mod_boundaries() {
    // representatives at degree 3 of the reduced model of the 4-cycle
    use toric_core::{ChainComplexWindow, Direction};
    // small hand-built window: d(a)=x+y, d(b)=y+z at degree 1 -> 0
    let w: ChainComplexWindow<&'static str> = ChainComplexWindow::build(
        Direction::Homological,
        -1,
        vec![vec![], vec!["x", "y", "z"], vec!["a", "b"], vec![]],
        |deg, j| {
            if deg != 1 {
                return vec![];
            }
            if j == 0 {
                vec![(0, rat(1)), (1, rat(1))]
            } else {
                vec![(1, rat(1)), (2, rat(1))]
            }
        },
    );
    let reps = w.homology_representatives(0).unwrap();
    let dims = w.homology_dims().unwrap();
    assert_eq!(dims, vec![(0, 1), (1, 0)]);
    assert_eq!(reps.len(), 1);
    // boundaries are spanned by (1,1,0) and (0,1,1), i.e. v1 = v0 + v2
    let v: &Vec<Rational> = &reps[0];
    assert!(
        v[1] != v[0].clone() + v[2].clone(),
        "representative lies in the boundary span"
    );
}
