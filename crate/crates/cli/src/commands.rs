//! The five subcommands: info, betti-zk, loop, quasitoric, verify.
//! Each returns a JSON payload plus ready-made text lines; exit-code
//! policy lives in `main`.

use std::collections::BTreeMap;

use anyhow::Result;
use serde_json::{json, Map, Value};
use toric_core::cobar::{
    self, flag_divergence, flag_loop_series, froberg_check, graph_product_dims, loop_homology,
    omega_zk_series, CobarError, CobarOptions,
};
use toric_core::facering::{
    default_lsop_cap, lsop_quotient, sr_basis, sr_coproduct, sr_poincare_series, GradingConvention,
};
use toric_core::koszul::{
    corrupted_reduced_d_squared_is_zero, d_squared_failures, zk_betti, zk_betti_via_full_model,
};
use toric_core::SimplicialComplex;

use crate::report::{json_bigint, json_u128, text_table};

pub struct CommandOutput {
    pub result: Value,
    pub text_lines: Vec<String>,
    /// process exit code demanded by the command semantics
    pub exit: u8,
}

fn ok(result: Value, text_lines: Vec<String>) -> CommandOutput {
    CommandOutput {
        result,
        text_lines,
        exit: 0,
    }
}

pub fn cmd_info(k: &SimplicialComplex) -> CommandOutput {
    let fh = k.f_h_vectors();
    let missing = k.missing_faces();
    let ghosts = k.ghost_vertices();
    let flag = k.is_flag();
    let result = json!({
        "m": k.vertex_count(),
        "dimension": k.dim(),
        "face_count": k.face_count(),
        "f_vector": fh.f,
        "h_vector": fh.h,
        "flag": flag,
        "missing_faces": missing,
        "ghost_vertices": ghosts,
    });
    let lines = vec![
        format!("m:             {}", k.vertex_count()),
        format!("dimension:     {}", k.dim()),
        format!(
            "faces:         {} (including the empty face)",
            k.face_count()
        ),
        format!("f-vector:      {:?}", fh.f),
        format!("h-vector:      {:?}", fh.h),
        format!("flag:          {flag}"),
        format!("missing faces: {missing:?}"),
        format!("ghosts:        {ghosts:?}"),
    ];
    ok(result, lines)
}

pub fn cmd_betti_zk(k: &SimplicialComplex, bigraded: bool) -> CommandOutput {
    let betti = zk_betti(k);
    let mut result = Map::new();
    let table: BTreeMap<usize, u128> = betti.total.iter().map(|(&d, &v)| (d, v as u128)).collect();
    result.insert("betti".into(), crate::report::json_degree_table(&table));
    let mut lines = text_table(
        "Betti numbers of Z_K",
        betti.total.iter().map(|(&d, &v)| (d, v)),
    );
    if bigraded {
        let rows: Vec<Value> = betti
            .bigraded
            .iter()
            .map(|(&(i, j2), &dim)| json!({"exterior": i, "internal": j2, "dim": dim}))
            .collect();
        result.insert("bigraded".into(), Value::Array(rows));
        lines.push(String::new());
        lines.push("bigraded (Tor^{-i,2j}):".to_string());
        for (&(i, j2), &dim) in &betti.bigraded {
            lines.push(format!("  Tor^{{-{i},{j2}}} = {dim}"));
        }
    }
    ok(Value::Object(result), lines)
}

pub fn cmd_loop(
    k: &SimplicialComplex,
    max_degree: usize,
    opts: &CobarOptions,
) -> Result<CommandOutput, CobarError> {
    let dims = loop_homology(k, max_degree, opts)?;
    let graph = graph_product_dims(k, max_degree)?;
    let divergence = flag_divergence(k, max_degree, opts)?;
    let flag = k.is_flag();

    let mut result = Map::new();
    result.insert("max_degree".into(), json!(max_degree));
    result.insert("flag".into(), json!(flag));
    let loop_table: BTreeMap<usize, u128> = dims.iter().map(|(&d, &v)| (d, v as u128)).collect();
    result.insert(
        "loop_homology".into(),
        crate::report::json_degree_table(&loop_table),
    );
    let graph_table: BTreeMap<usize, u128> =
        graph.iter().enumerate().map(|(d, &v)| (d, v)).collect();
    result.insert(
        "graph_product".into(),
        crate::report::json_degree_table(&graph_table),
    );
    result.insert(
        "divergence".into(),
        match divergence {
            Some((deg, excess)) => json!({"degree": deg, "excess": json_u128(excess)}),
            None => Value::Null,
        },
    );

    let mut lines = text_table("loop homology of DJ(K)", dims.iter().map(|(&d, &v)| (d, v)));
    lines.push(String::new());
    lines.extend(text_table(
        "graph product (quadratic dual)",
        graph.iter().enumerate().map(|(d, &v)| (d, v)),
    ));
    lines.push(String::new());
    match divergence {
        Some((deg, excess)) => lines.push(format!("divergence: degree {deg}, excess {excess}")),
        None => lines.push("divergence: none (agreement in every tested degree)".to_string()),
    }

    if flag {
        let series = flag_loop_series(k)?;
        let expansion = series.expand(max_degree);
        result.insert(
            "series".into(),
            json!({
                "numerator": series.numerator().to_string(),
                "denominator": series.denominator().to_string(),
                "expansion": expansion.iter().map(json_bigint).collect::<Vec<_>>(),
            }),
        );
        // the splitting off the m-torus needs every vertex to carry a
        // circle factor, which ghost vertices do not
        if k.ghost_vertices().is_empty() {
            let zk = omega_zk_series(k, max_degree)?;
            result.insert(
                "omega_zk_expansion".into(),
                Value::Array(zk.iter().map(json_bigint).collect()),
            );
        }
        lines.push(format!("series: {series}"));
        lines.push(format!(
            "expansion: [{}]",
            expansion
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(ok(Value::Object(result), lines))
}

pub fn cmd_quasitoric(
    k: &SimplicialComplex,
    lambda: &[Vec<i64>],
    degree_cap: Option<u32>,
) -> Result<CommandOutput> {
    let n = lambda.len();
    let expected = (k.dim() + 1) as usize;
    if n != expected {
        anyhow::bail!(
            "parameter matrix has {n} rows but dim K + 1 = {expected}; quasitoric data \
             needs one linear form per dimension"
        );
    }
    let cap = degree_cap.unwrap_or_else(|| default_lsop_cap(k));
    let q = lsop_quotient(k, lambda, cap)?;
    let fh = k.f_h_vectors();
    let h_sum: i64 = fh.h.iter().sum();
    let total = q.total_dimension();
    let matches_h = total.map(|t| t as i64 == h_sum);
    let result = json!({
        "dims": q.dims,
        "finite_dimensional": q.finite_dimensional,
        "total_dimension": total,
        "h_vector": fh.h,
        "h_total": h_sum,
        "total_matches_h": matches_h,
        "degree_cap": cap,
    });
    let mut lines = text_table(
        "dimensions of Q[K]/(L) by exponent degree",
        q.dims.iter().enumerate().map(|(d, &v)| (d, v)),
    );
    lines.push(String::new());
    if q.finite_dimensional {
        lines.push(format!(
            "verdict: finite-dimensional, total {} (sum of h-vector: {h_sum})",
            total.unwrap()
        ));
    } else {
        lines.push(format!(
            "verdict: not finite-dimensional up to the degree cap {cap} \
             (L is not a linear system of parameters at this scale)"
        ));
    }
    Ok(ok(result, lines))
}

struct Check {
    name: &'static str,
    passed: bool,
    details: String,
}

pub fn cmd_verify(
    k: &SimplicialComplex,
    max_degree: usize,
    opts: &CobarOptions,
    sabotage: bool,
) -> Result<CommandOutput> {
    let mut checks: Vec<Check> = Vec::new();

    let fh = k.f_h_vectors();
    checks.push(Check {
        name: "f-h-identity",
        passed: fh.identity_holds(),
        details: format!("f={:?} h={:?}", fh.f, fh.h),
    });

    let series = sr_poincare_series(k, GradingConvention::VertexDegreeOne);
    let coeffs = series.expand(6);
    let series_ok =
        (0..=6u32).all(|d| num_bigint::BigInt::from(sr_basis(k, d).len()) == coeffs[d as usize]);
    checks.push(Check {
        name: "face-ring-series",
        passed: series_ok,
        details: "expansion coefficients equal monomial-basis counts up to degree 6".into(),
    });

    let coassoc = coproduct_coassociative(k);
    checks.push(Check {
        name: "coproduct-coassociativity",
        passed: coassoc,
        details: "flattened left and right coproducts agree on all monomials of exponent <= 3"
            .into(),
    });

    let koszul_cap = ((k.vertex_count() as i64 + k.dim() + 1) as usize).min(max_degree.max(2));
    let koszul_failures = d_squared_failures(k, koszul_cap);
    checks.push(Check {
        name: "koszul-d-squared",
        passed: koszul_failures.is_empty(),
        details: if koszul_failures.is_empty() {
            format!("both Koszul models square to zero (full model to degree {koszul_cap})")
        } else {
            koszul_failures.join("; ")
        },
    });

    let cobar_failures = cobar::cobar_d_squared_failures(k, max_degree.min(6), opts)?;
    checks.push(Check {
        name: "cobar-d-squared",
        passed: cobar_failures.is_empty(),
        details: if cobar_failures.is_empty() {
            format!(
                "cobar differential squares to zero up to degree {}",
                max_degree.min(6)
            )
        } else {
            cobar_failures.join("; ")
        },
    });

    let reduced = zk_betti(k);
    let oracle_cap = (k.vertex_count() as i64 + k.dim() + 1) as usize;
    let full = zk_betti_via_full_model(k, oracle_cap.max(2))?;
    let oracle_ok = (0..=oracle_cap).all(|d| reduced.dim(d) == full.get(&d).copied().unwrap_or(0));
    checks.push(Check {
        name: "reduced-vs-full-koszul",
        passed: oracle_ok,
        details: format!("Betti numbers agree in all degrees 0..={oracle_cap}"),
    });

    if k.is_flag() {
        let froberg = froberg_check(k, 10)?;
        checks.push(Check {
            name: "froberg-identity",
            passed: froberg,
            details: "F(Q[K];-t) * F(H_*(ΩDJ(K));t) = 1 up to t^10".into(),
        });
        let divergence = flag_divergence(k, max_degree, opts)?;
        checks.push(Check {
            name: "flag-agreement",
            passed: divergence.is_none(),
            details: format!("loop homology equals the graph product up to degree {max_degree}"),
        });
    } else {
        // non-edges are quadratic data; the first divergence is driven by
        // the smallest missing face with at least 3 vertices
        let min_missing = k
            .missing_faces()
            .iter()
            .map(|f| f.len())
            .filter(|&l| l >= 3)
            .min()
            .expect("non-flag complexes have a missing face with >= 3 vertices");
        let expected_degree = 2 * min_missing - 2;
        if expected_degree <= max_degree {
            let divergence = flag_divergence(k, max_degree, opts)?;
            let passed = matches!(divergence, Some((d, _)) if d == expected_degree);
            checks.push(Check {
                name: "divergence-location",
                passed,
                details: format!(
                    "first divergence expected at degree {expected_degree}, found {divergence:?}"
                ),
            });
        } else {
            checks.push(Check {
                name: "divergence-location",
                passed: true,
                details: format!(
                    "skipped: first divergence at degree {expected_degree} is beyond \
                     --max-degree {max_degree}"
                ),
            });
        }
    }

    if sabotage {
        // the check's value is the corrupted window's d^2=0 verdict, so
        // a working detector makes this check fail
        let still_zero = corrupted_reduced_d_squared_is_zero(k);
        checks.push(Check {
            name: "sabotaged-differential",
            passed: still_zero.unwrap_or(false),
            details: format!(
                "negative control: flipped one differential entry, d^2=0 now reports \
                 {still_zero:?}"
            ),
        });
    }

    let all_passed = checks.iter().all(|c| c.passed);
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "details": c.details}))
        .collect();
    let mut lines = Vec::new();
    for c in &checks {
        lines.push(format!(
            "[{}] {:<28} {}",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.details
        ));
    }
    lines.push(String::new());
    lines.push(if all_passed {
        "all checks passed".to_string()
    } else {
        "one or more checks FAILED".to_string()
    });
    Ok(CommandOutput {
        result: json!({"checks": rows, "all_passed": all_passed}),
        text_lines: lines,
        exit: if all_passed { 0 } else { 1 },
    })
}

fn coproduct_coassociative(k: &SimplicialComplex) -> bool {
    for total in 1..=3u32 {
        for a in sr_basis(k, total) {
            let cop = match sr_coproduct(k, &a) {
                Ok(c) => c,
                Err(_) => return false,
            };
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (b, c) in &cop {
                for (b1, b2) in sr_coproduct(k, b).expect("valid monomial") {
                    left.push((b1, b2, c.clone()));
                }
                for (c1, c2) in sr_coproduct(k, c).expect("valid monomial") {
                    right.push((b.clone(), c1, c2));
                }
            }
            left.sort();
            right.sort();
            if left != right {
                return false;
            }
        }
    }
    true
}
