//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its measured runtime. Everything is exact arithmetic; the
//! stated budgets are asserted.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use toric_core::cobar::{
    cobar_d_squared_failures, flag_divergence, froberg_check, graph_product_dims, loop_homology,
    omega_zk_series, CobarOptions,
};
use toric_core::facering::lsop_quotient;
use toric_core::graded::{IntPoly, PoincareSeries};
use toric_core::koszul::{d_squared_failures, zk_betti, zk_betti_via_full_model};
use toric_core::SimplicialComplex;

fn finish(criterion: usize, label: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "[acceptance] criterion {criterion:2} ({label}): PASS in {:.2?} (budget {:.0?})",
        elapsed, budget
    );
    assert!(
        elapsed <= budget,
        "criterion {criterion} overran its budget: {elapsed:.2?} > {budget:.2?}"
    );
}

/// All isomorphism-class representatives of simplicial complexes with at
/// most `max_m` vertices (ghost vertices included), by brute-force
/// antichain enumeration and canonical relabelling.
fn iso_class_representatives(max_m: usize) -> Vec<SimplicialComplex> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for m in 0..=max_m {
        let subsets: Vec<u64> = (1u64..(1 << m)).collect();
        let n = subsets.len();
        for family in 0u64..(1 << n) {
            let chosen: Vec<u64> = (0..n)
                .filter(|&i| family >> i & 1 == 1)
                .map(|i| subsets[i])
                .collect();
            let antichain = chosen
                .iter()
                .all(|&a| chosen.iter().all(|&b| a == b || (a & b != a && a & b != b)));
            if !antichain {
                continue;
            }
            let facets: Vec<Vec<usize>> = chosen
                .iter()
                .map(|&mask| (1..=m).filter(|&v| mask >> (v - 1) & 1 == 1).collect())
                .collect();
            let k = SimplicialComplex::from_facets(m, &facets).expect("valid facets");
            if seen.insert(k.canonical_key()) {
                out.push(k);
            }
        }
    }
    out
}

fn expand_i64(num: &[i64], den: &[i64], n: usize) -> Vec<usize> {
    PoincareSeries::new(IntPoly::from_i64(num), IntPoly::from_i64(den))
        .unwrap()
        .expand(n)
        .iter()
        .map(|c| usize::try_from(c).expect("non-negative dimension"))
        .collect()
}

fn dims_vec(map: &BTreeMap<usize, usize>, n: usize) -> Vec<usize> {
    (0..=n).map(|d| map.get(&d).copied().unwrap_or(0)).collect()
}

#[test]
fn criterion_01_h_vectors_of_simplices_and_boundaries() {
    let started = Instant::now();
    for n in 1..=5usize {
        let simplex = SimplicialComplex::simplex(n).f_h_vectors();
        let mut expected = vec![0i64; n + 1];
        expected[0] = 1;
        assert_eq!(
            simplex.h, expected,
            "h-vector of the simplex on {n} vertices"
        );
        assert!(simplex.identity_holds());

        let boundary = SimplicialComplex::boundary_simplex(n).f_h_vectors();
        assert_eq!(
            boundary.h,
            vec![1i64; n + 1],
            "h-vector of the boundary of the {n}-simplex"
        );
        assert!(boundary.identity_holds());
    }
    finish(1, "h-vectors", started, Duration::from_secs(1));
}

#[test]
fn criterion_02_d_squared_zero_on_randomized_complexes() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xd5_5d);
    let opts = CobarOptions {
        word_cap: 3_000_000,
    };
    for sample in 0..50 {
        let m = rng.gen_range(1..=5usize);
        let facet_count = rng.gen_range(1..=m);
        let mut facets = Vec::new();
        for _ in 0..facet_count {
            let size = rng.gen_range(1..=m.min(4));
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
        let k = SimplicialComplex::from_facets(m, &facets).unwrap();
        let koszul = d_squared_failures(&k, 8);
        assert!(
            koszul.is_empty(),
            "sample {sample}: koszul d^2 != 0 on {k:?}: {koszul:?}"
        );
        let cobar = cobar_d_squared_failures(&k, 8, &opts).unwrap();
        assert!(
            cobar.is_empty(),
            "sample {sample}: cobar d^2 != 0 on {k:?}: {cobar:?}"
        );
    }
    finish(2, "d^2 = 0 suite", started, Duration::from_secs(120));
}

#[test]
fn criterion_03_moment_angle_betti_of_three_points() {
    let started = Instant::now();
    let betti = zk_betti(&SimplicialComplex::discrete(3));
    let expected: BTreeMap<usize, usize> = [(0, 1), (3, 3), (4, 2)].into_iter().collect();
    assert_eq!(
        betti.total, expected,
        "Z_K of three points is S^3 v S^3 v S^3 v S^4 v S^4"
    );
    finish(
        3,
        "Z_K Betti, discrete m=3",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_04_reduced_vs_full_koszul_oracle_exhaustive() {
    let started = Instant::now();
    let reps = iso_class_representatives(4);
    assert!(
        reps.len() > 30,
        "enumeration found only {} classes",
        reps.len()
    );
    for k in &reps {
        let reduced = zk_betti(k);
        let cap = ((k.vertex_count() as i64 + k.dim() + 1) as usize).max(2);
        let full = zk_betti_via_full_model(k, cap).unwrap();
        for degree in 0..=cap {
            assert_eq!(
                reduced.dim(degree),
                full.get(&degree).copied().unwrap_or(0),
                "oracle mismatch at degree {degree} on {k:?}"
            );
        }
    }
    println!(
        "[acceptance] criterion  4: checked {} isomorphism classes",
        reps.len()
    );
    finish(
        4,
        "reduced vs full Koszul",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_05_loop_homology_of_the_triangle_boundary() {
    let started = Instant::now();
    let k = SimplicialComplex::boundary_simplex(2);
    let dims = loop_homology(&k, 8, &CobarOptions::default()).unwrap();
    let expected = expand_i64(&[1, 3, 3, 1], &[1, 0, 0, 0, -1], 8);
    assert_eq!(dims_vec(&dims, 8), expected);
    assert_eq!(expected, vec![1, 3, 3, 1, 1, 3, 3, 1, 1]);
    finish(5, "loop homology of ∂Δ²", started, Duration::from_secs(120));
}

#[test]
fn criterion_06_flag_agreement_for_the_four_cycle() {
    let started = Instant::now();
    let k = SimplicialComplex::four_cycle();
    let loop_dims = loop_homology(&k, 5, &CobarOptions::default()).unwrap();
    let graph_dims = graph_product_dims(&k, 5).unwrap();
    let series = expand_i64(&[1, 2, 1], &[1, -2, 1], 5);
    assert_eq!(series, vec![1, 4, 8, 12, 16, 20]);
    assert_eq!(dims_vec(&loop_dims, 5), series);
    let graph_as_usize: Vec<usize> = graph_dims
        .iter()
        .map(|&v| usize::try_from(v).unwrap())
        .collect();
    assert_eq!(graph_as_usize, series);
    finish(
        6,
        "flag agreement, 4-cycle",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_07_froberg_identity() {
    let started = Instant::now();
    let four_cycle = SimplicialComplex::four_cycle();
    assert!(froberg_check(&four_cycle, 10).unwrap());
    let path3 = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![2, 3]]).unwrap();
    assert!(froberg_check(&path3, 10).unwrap());
    let mut flag_count = 0;
    for k in iso_class_representatives(4) {
        if k.is_flag() {
            flag_count += 1;
            assert!(
                froberg_check(&k, 10).unwrap(),
                "Fröberg identity fails on {k:?}"
            );
        }
    }
    println!("[acceptance] criterion  7: checked {flag_count} flag classes with m <= 4");
    finish(7, "Fröberg identity", started, Duration::from_secs(10));
}

#[test]
fn criterion_08_divergence_of_boundary_simplices() {
    let started = Instant::now();
    for m in [3usize, 4] {
        let k = SimplicialComplex::boundary_simplex(m - 1);
        let expected_degree = 2 * m - 2;
        let divergence = flag_divergence(&k, expected_degree, &CobarOptions::default()).unwrap();
        assert_eq!(
            divergence,
            Some((expected_degree, 1)),
            "first divergence of the boundary of the ({}-1)-simplex",
            m
        );
    }
    finish(
        8,
        "non-flag divergence, ∂Δ^{m-1}",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_09_skeleton_of_the_tetrahedron() {
    let started = Instant::now();
    let k = SimplicialComplex::simplex(4).skeleton(1);
    let divergence = flag_divergence(&k, 4, &CobarOptions::default()).unwrap();
    assert_eq!(divergence, Some((4, 4)), "four new classes at degree 4");
    let dims = loop_homology(&k, 4, &CobarOptions::default()).unwrap();
    assert_eq!(dims.get(&4), Some(&5), "total dim H_4 = 5");
    finish(9, "1-skeleton of Δ³", started, Duration::from_secs(300));
}

#[test]
fn criterion_10_quasitoric_quotient_cp2() {
    let started = Instant::now();
    let k = SimplicialComplex::boundary_simplex(2);
    let lambda = vec![vec![1, 0, -1], vec![0, 1, -1]];
    let q = lsop_quotient(&k, &lambda, 20).unwrap();
    assert!(q.finite_dimensional);
    assert_eq!(&q.dims[..3], &[1, 1, 1]);
    assert!(q.dims[3..].iter().all(|&d| d == 0));
    let h_sum: i64 = k.f_h_vectors().h.iter().sum();
    assert_eq!(q.total_dimension(), Some(3));
    assert_eq!(h_sum, 3);
    finish(10, "quasitoric quotient", started, Duration::from_secs(1));
}

#[test]
fn criterion_11_omega_zk_series_of_the_four_cycle() {
    let started = Instant::now();
    let coeffs = omega_zk_series(&SimplicialComplex::four_cycle(), 10).unwrap();
    let expected: Vec<BigInt> = (0..=10)
        .map(|d| {
            if d % 2 == 0 {
                BigInt::from(d / 2 + 1)
            } else {
                BigInt::from(0)
            }
        })
        .collect();
    assert_eq!(coeffs, expected, "expansion of 1/(1-t^2)^2");
    finish(11, "ΩZ_K series, 4-cycle", started, Duration::from_secs(1));
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run_stripped(args: &[String]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-calc"))
        .args(args)
        .env_remove("TORIC_CALC_THREADS")
        .env_remove("TORIC_CALC_WORD_CAP")
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .expect("utf-8 output")
        .lines()
        .filter(|line| !line.contains("timing_ms") && !line.starts_with("elapsed:"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_12_cli_determinism_across_runs_and_thread_counts() {
    let started = Instant::now();
    let complexes = [
        "simplex_3",
        "boundary_2",
        "discrete_3",
        "four_cycle",
        "path_3",
    ];
    let mut commands: Vec<Vec<String>> = Vec::new();
    for name in complexes {
        let path = fixtures().join("complexes").join(format!("{name}.json"));
        let path = path.display().to_string();
        commands.push(vec![
            "info".into(),
            path.clone(),
            "--format".into(),
            "json".into(),
        ]);
        commands.push(vec![
            "betti-zk".into(),
            path.clone(),
            "--bigraded".into(),
            "--format".into(),
            "json".into(),
        ]);
        commands.push(vec![
            "loop".into(),
            path,
            "--max-degree".into(),
            "4".into(),
            "--format".into(),
            "json".into(),
        ]);
    }
    for args in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "4"] {
            let mut with_threads = args.clone();
            with_threads.push("--threads".into());
            with_threads.push(threads.into());
            outputs.push(run_stripped(&with_threads));
            outputs.push(run_stripped(&with_threads));
        }
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "output differs across runs/threads for {args:?}"
        );
        assert!(!outputs[0].is_empty());
    }
    finish(12, "CLI determinism", started, Duration::from_secs(120));
}
