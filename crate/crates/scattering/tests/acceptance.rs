//! End-to-end acceptance gate. Each numbered criterion prints exactly one
//! PASS/FAIL line; all criteria are evaluated before the final assertion so
//! a single failure never hides the state of the others.

mod common;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use common::oracle_tau_bruteforce;
use num::traits::Zero;

use cluster_scattering::diagram::{
    check_table_consistency, factorize, ComputeCache, WallExponentTable,
};
use cluster_scattering::group::{g_factor, DiagramParams, Direction};
use cluster_scattering::ratio::{binom_int, rat, Rat};
use cluster_scattering::reconstruct::{big_u_sample, reconstruct_alpha, reconstruct_alpha_on_grid};
use cluster_scattering::series::TruncatedSeries;
use cluster_scattering::tau::{tau_numeric, tau_via_partitions, TauContext};
use cluster_scattering::verify::{
    self, interior_directions, CheckStatus, VerifyConfig,
};

fn params(b: u32, c: u32) -> DiagramParams {
    DiagramParams::new(b, c).unwrap()
}

fn d(n1: u32, n2: u32) -> Direction {
    Direction::new(n1, n2)
}

struct Outcome {
    number: u32,
    label: &'static str,
    failure: Option<String>,
}

struct Gate {
    outcomes: Vec<Outcome>,
}

impl Gate {
    fn record(&mut self, number: u32, label: &'static str, failure: Option<String>) {
        match &failure {
            None => println!("criterion {number:2}: PASS  {label}"),
            Some(why) => println!("criterion {number:2}: FAIL  {label} -- {why}"),
        }
        self.outcomes.push(Outcome {
            number,
            label,
            failure,
        });
    }

    fn check(&mut self, number: u32, label: &'static str, run: impl FnOnce() -> Result<(), String>) {
        self.record(number, label, run().err());
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

fn interior_u_hats(table: &WallExponentTable) -> Vec<(Direction, Rat)> {
    table
        .entries()
        .filter(|(n, v)| n.n1() > 0 && n.n2() > 0 && !v.is_zero())
        .map(|(n, v)| (*n, v.clone()))
        .collect()
}

#[test]
fn acceptance() {
    let suite_start = Instant::now();
    let cache = ComputeCache::new();
    let ctx = TauContext::new(&cache);
    let mut gate = Gate { outcomes: Vec::new() };

    // 1. simplest diagram: three walls, all exponents one, under a second
    gate.check(1, "pentagon golden table at (1, 1), depth 8", || {
        let t0 = Instant::now();
        let table = factorize(params(1, 1), 8).map_err(|e| e.to_string())?;
        let elapsed = t0.elapsed();
        let oracle = common::oracle_pentagon_rewrite();
        let nonzero: Vec<(Direction, Rat)> = table
            .entries()
            .filter(|(_, v)| !v.is_zero())
            .map(|(n, v)| (*n, v.clone()))
            .collect();
        let expected: Vec<(Direction, Rat)> = {
            let mut dirs: Vec<Direction> =
                oracle.iter().map(|((a, b), _)| d(*a, *b)).collect();
            dirs.sort();
            dirs.into_iter().map(|n| (n, rat(1))).collect()
        };
        expect("nonzero exponents", nonzero, expected)?;
        if elapsed >= Duration::from_secs(1) {
            return Err(format!("took {elapsed:?}, budget 1 s"));
        }
        Ok(())
    });

    // 2. the (1, 2) interior exponents, asserted at their documented values
    gate.check(2, "interior exponents of the (1, 2) diagram at depth 6", || {
        let table = factorize(params(1, 2), 6).map_err(|e| e.to_string())?;
        let mut failures = String::new();
        let checks = [(d(1, 1), rat(2)), (d(2, 1), rat(1))];
        for (n, want) in &checks {
            let got = table.u_hat(*n);
            if got != *want {
                let _ = write!(
                    failures,
                    "u_hat{:?}: expected {}, got {}; ",
                    (n.n1(), n.n2()),
                    want,
                    got
                );
            }
        }
        for (n, v) in interior_u_hats(&table) {
            if !checks.iter().any(|(m, _)| *m == n) {
                let _ = write!(failures, "unexpected nonzero u_hat at {:?} = {v}; ", (n.n1(), n.n2()));
            }
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(failures)
        }
    });

    // 3. the two initial walls are exact and universal
    gate.check(3, "initial walls carry exponent 1 and binomial functions", || {
        for b in 1..=5 {
            for c in 1..=5 {
                let table = cache.table(params(b, c), 4).map_err(|e| e.to_string())?;
                expect(&format!("u_hat(e1) at ({b}, {c})"), table.u_hat(d(1, 0)), rat(1))?;
                expect(&format!("u_hat(e2) at ({b}, {c})"), table.u_hat(d(0, 1)), rat(1))?;
                let f1 = table.wall_function(d(1, 0));
                let f2 = table.wall_function(d(0, 1));
                expect(
                    &format!("f_e1 at ({b}, {c})"),
                    f1,
                    TruncatedSeries::one_plus(4, cluster_scattering::series::Monomial::new(1, 0)),
                )?;
                expect(
                    &format!("f_e2 at ({b}, {c})"),
                    f2,
                    TruncatedSeries::one_plus(4, cluster_scattering::series::Monomial::new(0, 1)),
                )?;
            }
        }
        Ok(())
    });

    // 4. loop consistency plus the perturbed negative control
    gate.check(4, "full-loop consistency at depth 8, with negative control", || {
        for (b, c) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 3)] {
            let table = cache.table(params(b, c), 8).map_err(|e| e.to_string())?;
            let report = check_table_consistency(&table).map_err(|e| e.to_string())?;
            if !report.consistent {
                return Err(format!(
                    "loop at ({b}, {c}) broke at degree {:?}",
                    report.first_failure_degree
                ));
            }
        }
        let mut bad = factorize(params(1, 1), 8).map_err(|e| e.to_string())?;
        bad.set_u_hat(d(1, 1), rat(2));
        let report = check_table_consistency(&bad).map_err(|e| e.to_string())?;
        expect("perturbed table consistent flag", report.consistent, false)?;
        expect("perturbed first failure degree", report.first_failure_degree, Some(2))
    });

    // 5. closed forms for the edge coefficients over the full grid
    gate.check(5, "edge coefficient closed forms up to n = 6 on [1, 6]^2", || {
        let mut cases = 0u32;
        for k in 1..=6u32 {
            for b in 1..=6 {
                for c in 1..=6 {
                    let p = params(b, c);
                    let table = cache.table(p, k + 1).map_err(|e| e.to_string())?;
                    let g_row = rat(g_factor(d(k, 1), p) as i64);
                    let want_row = &g_row / rat(i64::from(c)) * binom_int(u64::from(c), k);
                    expect(
                        &format!("tau({k}, 1) at ({b}, {c})"),
                        tau_numeric(&table, d(k, 1)),
                        want_row,
                    )?;
                    let g_col = rat(g_factor(d(1, k), p) as i64);
                    let want_col = &g_col / rat(i64::from(b)) * binom_int(u64::from(b), k);
                    expect(
                        &format!("tau(1, {k}) at ({b}, {c})"),
                        tau_numeric(&table, d(1, k)),
                        want_col,
                    )?;
                    cases += 2;
                }
            }
        }
        expect("number of equalities", cases, 432)
    });

    // 6. partition formula == direct coefficient == brute-force expansion
    gate.check(6, "three-way coefficient agreement to degree 10", || {
        for (b, c) in [(1, 2), (2, 2), (2, 3), (3, 4)] {
            let table = cache.table(params(b, c), 10).map_err(|e| e.to_string())?;
            let mut dirs = interior_directions(10);
            for k in 1..=10 {
                dirs.push(d(k, 0));
                dirs.push(d(0, k));
            }
            for n in dirs {
                let n0 = n.primitive();
                let k = n.gcd();
                let u_hats: Vec<Rat> = (1..=k).map(|j| table.u_hat(n0.scaled(j))).collect();
                let oracle = oracle_tau_bruteforce((n0.n1(), n0.n2()), &u_hats, k);
                expect(
                    &format!("numeric tau at {:?}, ({b}, {c})", (n.n1(), n.n2())),
                    tau_numeric(&table, n),
                    oracle.clone(),
                )?;
                expect(
                    &format!("partition tau at {:?}, ({b}, {c})", (n.n1(), n.n2())),
                    tau_via_partitions(&table, n),
                    oracle,
                )?;
            }
        }
        Ok(())
    });

    // 7. closed-form reconstruction: integral coefficients, out-of-sample
    //    agreement, grid independence
    gate.check(7, "exponent reconstruction to degree 8", || {
        for n in interior_directions(8) {
            let alpha = reconstruct_alpha(&cache, n).map_err(|e| e.to_string())?;
            for ((i, j), v) in alpha.entries() {
                if !cluster_scattering::ratio::is_nonneg_integer(v) {
                    return Err(format!(
                        "alpha({i}, {j}) at {:?} is {v} (not a nonnegative integer)",
                        (n.n1(), n.n2())
                    ));
                }
            }
            let u = alpha.symbolic_u();
            for (b, c) in [(7, 5), (5, 7)] {
                let sample = big_u_sample(&cache, n, b, c).map_err(|e| e.to_string())?;
                expect(
                    &format!("U at {:?} out of sample ({b}, {c})", (n.n1(), n.n2())),
                    u.eval(&rat(i64::from(c)), &rat(i64::from(b)), &rat(0)),
                    sample,
                )?;
            }
            let shifted = reconstruct_alpha_on_grid(&cache, n, 2, 2).map_err(|e| e.to_string())?;
            if shifted.alpha(1, 1) != alpha.alpha(1, 1)
                || shifted.symbolic_u() != u
                || shifted.entries().count() != alpha.entries().count()
            {
                return Err(format!("shifted grid disagrees at {:?}", (n.n1(), n.n2())));
            }
        }
        Ok(())
    });

    // 8. degree structure of the symbolic exponents and coefficients
    gate.check(8, "degree claims for symbolic U and tau to degree 8", || {
        let report = verify::verify_degree_structure(&ctx, 8).map_err(|e| e.to_string())?;
        if report.proved_claims_hold() {
            Ok(())
        } else {
            Err(format!("{report:?}"))
        }
    });

    // 9. diagonal specialization: degree and binomial-basis positivity
    gate.check(9, "diagonal-parameter coefficient expansion to degree 8", || {
        let report = verify::verify_diagonal_expansion(&ctx, 8).map_err(|e| e.to_string())?;
        if report.proved_claims_hold() {
            Ok(())
        } else {
            Err(format!("{report:?}"))
        }
    });

    // 10. g-slice bounds and the two exact slice identities
    gate.check(10, "g-slice identities for primitive directions to degree 4", || {
        let report = verify::verify_g_slices_sweep(&ctx, 4, 4).map_err(|e| e.to_string())?;
        if report.proved_claims_hold() {
            Ok(())
        } else {
            Err(format!("{report:?}"))
        }
    });

    // 11. the empirical report runs and finds the known non-integral U
    gate.check(11, "empirical observations, including the known U = 1/2", || {
        let report = verify::report_observations(&ctx, 8, 6).map_err(|e| e.to_string())?;
        for row in &report.rows {
            if row.status != CheckStatus::EmpiricalObservation {
                return Err(format!("row {} is not observational", row.id));
            }
        }
        let u_row = report
            .rows
            .iter()
            .find(|r| r.id == "u-integrality")
            .ok_or("missing u-integrality row")?;
        let found = u_row.witnesses.iter().any(|w| {
            w.n == Some(d(2, 1)) && w.b == Some(1) && w.c == Some(2)
        });
        if found {
            Ok(())
        } else {
            Err("expected non-integral U witness at n = (2, 1), (b, c) = (1, 2)".into())
        }
    });

    // 12. performance envelope
    gate.check(12, "factorization at (6, 6) to depth 12 under 10 s", || {
        let t0 = Instant::now();
        factorize(params(6, 6), 12).map_err(|e| e.to_string())?;
        let elapsed = t0.elapsed();
        if elapsed < Duration::from_secs(10) {
            Ok(())
        } else {
            Err(format!("took {elapsed:?}"))
        }
    });

    let suite_elapsed = suite_start.elapsed();
    println!("acceptance suite wall time: {suite_elapsed:?}");
    assert!(
        suite_elapsed < Duration::from_secs(300),
        "suite exceeded the five-minute budget: {suite_elapsed:?}"
    );

    let failures: Vec<String> = gate
        .outcomes
        .iter()
        .filter_map(|o| {
            o.failure
                .as_ref()
                .map(|why| format!("criterion {} ({}): {why}", o.number, o.label))
        })
        .collect();
    assert!(
        failures.is_empty(),
        "acceptance criteria failed:\n{}",
        failures.join("\n")
    );
}

// The documented value u_hat(1, 1) = 2 asserted by criterion 2 does not
// distinguish the two exponent normalizations; the dilogarithm-normalized
// exponent u at (1, 1) is 2 while the wall-function exponent u_hat is 1
// (delta(1, 1; 1, 2) = 2 relates them). This companion test pins the
// internally consistent values so the discrepancy above stays visible
// without casting doubt on the engine.
#[test]
fn type_c2_interior_exponents_in_both_normalizations() {
    let p = params(1, 2);
    let table = factorize(p, 6).unwrap();
    assert_eq!(table.u_hat(d(1, 1)), rat(1));
    assert_eq!(table.u(d(1, 1)), rat(2));
    assert_eq!(table.u_hat(d(2, 1)), rat(1));
    assert_eq!(table.u(d(2, 1)), rat(1));
    assert_eq!(interior_u_hats(&table).len(), 2);
    // both normalizations reproduce a consistent diagram
    let report = check_table_consistency(&table).unwrap();
    assert!(report.consistent);
}

// Keep the unused-config lint honest: the default ranges used across the
// suite match the documented desk-scale defaults.
#[test]
fn default_verification_ranges_are_the_documented_desk_scale() {
    let cfg = VerifyConfig::default();
    assert_eq!(
        (cfg.max_deg, cfg.grid_max, cfg.max_n, cfg.max_n0_deg, cfg.k_max),
        (8, 6, 6, 4, 4)
    );
}
