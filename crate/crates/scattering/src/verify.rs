//! Machine verification of the structural claims about wall exponents and
//! expanded coefficients, over configurable ranges.
//!
//! Checks come in two kinds. Proved claims must hold; any violation is
//! reported with a full witness and is treated as an engine defect.
//! Empirical observations (equality attainment in the degree bounds,
//! integrality of `U`, integrality and positivity of `tau`) never fail a
//! run; they are emitted as observation rows with counts and witnesses.

use serde::Serialize;

use crate::group::{g_factor, DiagramParams, Direction};
use crate::poly::{shifted_binomial_expand, MultiPolynomial, Var};
use crate::ratio::{binom_int, factorial, format_rat, is_nonneg_integer, rat, ratio, Rat};
use crate::reconstruct::{big_u_sample, reconstruct_alpha};
use crate::tau::{tau_numeric, TauContext};
use crate::Result;

/// Verdict of one check row.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    ProvedClaimHolds,
    ProvedClaimViolated,
    EmpiricalObservation,
}

/// One concrete instance backing a violation or an observation.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
    pub detail: String,
}

impl Witness {
    fn at_n(n: Direction, detail: String) -> Self {
        Witness {
            n: Some(n),
            b: None,
            c: None,
            detail,
        }
    }

    fn at(n: Direction, b: u32, c: u32, detail: String) -> Self {
        Witness {
            n: Some(n),
            b: Some(b),
            c: Some(c),
            detail,
        }
    }
}

/// One verified claim (or recorded observation) with its case count.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub id: String,
    pub status: CheckStatus,
    pub cases: u64,
    pub witnesses: Vec<Witness>,
}

fn proved(id: &str, cases: u64, witnesses: Vec<Witness>) -> CheckRow {
    CheckRow {
        id: id.to_string(),
        status: if witnesses.is_empty() {
            CheckStatus::ProvedClaimHolds
        } else {
            CheckStatus::ProvedClaimViolated
        },
        cases,
        witnesses,
    }
}

fn observed(id: &str, cases: u64, witnesses: Vec<Witness>) -> CheckRow {
    CheckRow {
        id: id.to_string(),
        status: CheckStatus::EmpiricalObservation,
        cases,
        witnesses,
    }
}

/// The outcome of one verification pass.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub range: String,
    pub rows: Vec<CheckRow>,
}

impl VerificationReport {
    /// True iff no proved claim is violated (observations never count).
    pub fn proved_claims_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.status != CheckStatus::ProvedClaimViolated)
    }
}

/// Interior directions (both coordinates positive) up to a total degree.
pub fn interior_directions(max_deg: u32) -> Vec<Direction> {
    let mut out = Vec::new();
    for deg in 2..=max_deg {
        for n1 in 1..deg {
            out.push(Direction::new(n1, deg - n1));
        }
    }
    out
}

fn interior_primitives(max_deg: u32) -> Vec<Direction> {
    interior_directions(max_deg)
        .into_iter()
        .filter(|n| n.is_primitive())
        .collect()
}

/// Degree and factorization structure of symbolic `tau` and `U`:
/// `deg_g tau = gcd(n)`, `tau` divisible by `g`,
/// `deg_(b,c) tau = (n2 - 1, n1 - 1)`, and
/// `deg_(c,b) U = (n1 - 1, n2 - 1)`, for all interior `n` up to `max_deg`.
pub fn verify_degree_structure(ctx: &TauContext, max_deg: u32) -> Result<VerificationReport> {
    let dirs = interior_directions(max_deg);
    let cases = dirs.len() as u64;
    let mut w_deg_g = Vec::new();
    let mut w_factor = Vec::new();
    let mut w_deg_bc = Vec::new();
    let mut w_deg_u = Vec::new();
    for &n in &dirs {
        let tau = ctx.tau_symbolic(n)?;
        if tau.degree_in(Var::G) != Some(n.gcd()) {
            w_deg_g.push(Witness::at_n(
                n,
                format!(
                    "deg_g tau = {:?}, expected {}",
                    tau.degree_in(Var::G),
                    n.gcd()
                ),
            ));
        }
        if !tau.coefficient_of_power(Var::G, 0).is_zero() {
            w_factor.push(Witness::at_n(
                n,
                format!(
                    "tau has g-free part {}",
                    tau.coefficient_of_power(Var::G, 0)
                ),
            ));
        }
        let expect_bc = (Some(n.n2() - 1), Some(n.n1() - 1));
        if (tau.degree_in(Var::B), tau.degree_in(Var::C)) != expect_bc {
            w_deg_bc.push(Witness::at_n(
                n,
                format!(
                    "deg_(b,c) tau = ({:?}, {:?}), expected ({}, {})",
                    tau.degree_in(Var::B),
                    tau.degree_in(Var::C),
                    n.n2() - 1,
                    n.n1() - 1
                ),
            ));
        }
        let u = ctx.symbolic_u(n)?;
        let expect_cb = (Some(n.n1() - 1), Some(n.n2() - 1));
        if (u.degree_in(Var::C), u.degree_in(Var::B)) != expect_cb {
            w_deg_u.push(Witness::at_n(
                n,
                format!(
                    "deg_(c,b) U = ({:?}, {:?}), expected ({}, {})",
                    u.degree_in(Var::C),
                    u.degree_in(Var::B),
                    n.n1() - 1,
                    n.n2() - 1
                ),
            ));
        }
    }
    Ok(VerificationReport {
        check: "props123".into(),
        range: format!("interior n with deg(n) <= {max_deg}"),
        rows: vec![
            proved("tau-degree-in-g-equals-gcd", cases, w_deg_g),
            proved("tau-divisible-by-g", cases, w_factor),
            proved("tau-degree-in-b-c", cases, w_deg_bc),
            proved("u-degree-in-c-b", cases, w_deg_u),
        ],
    })
}

/// Closed forms for one-step walls: for all `n1, n2 <= max_n` and
/// `(b, c)` in the square grid, `tau(n1, 1) = (g/c) binom(c, n1)` and
/// `tau(1, n2) = (g/b) binom(b, n2)`, exactly.
pub fn verify_edge_closed_forms(ctx: &TauContext, max_n: u32, grid_max: u32) -> Result<VerificationReport> {
    let cache = ctx.compute_cache();
    let mut w_row = Vec::new();
    let mut w_col = Vec::new();
    let mut cases = 0u64;
    for k in 1..=max_n {
        for b in 1..=grid_max {
            for c in 1..=grid_max {
                let params = DiagramParams::new(b, c)?;
                let table = cache.table(params, k + 1)?;
                cases += 1;

                let n = Direction::new(k, 1);
                let g = rat(g_factor(n, params) as i64);
                let closed = g * binom_int(u64::from(c), k) / rat(i64::from(c));
                let got = tau_numeric(&table, n);
                if got != closed {
                    w_row.push(Witness::at(
                        n,
                        b,
                        c,
                        format!("tau = {}, closed form = {}", format_rat(&got), format_rat(&closed)),
                    ));
                }

                let n = Direction::new(1, k);
                let g = rat(g_factor(n, params) as i64);
                let closed = g * binom_int(u64::from(b), k) / rat(i64::from(b));
                let got = tau_numeric(&table, n);
                if got != closed {
                    w_col.push(Witness::at(
                        n,
                        b,
                        c,
                        format!("tau = {}, closed form = {}", format_rat(&got), format_rat(&closed)),
                    ));
                }
            }
        }
    }
    Ok(VerificationReport {
        check: "props56".into(),
        range: format!("(n1, 1), (1, n2) with n <= {max_n}; (b, c) in [1, {grid_max}]^2"),
        rows: vec![
            proved("tau-closed-form-n1-1", cases, w_row),
            proved("tau-closed-form-1-n2", cases, w_col),
        ],
    })
}

/// On the diagonal `c = b` (where also `g = b`), `tau` becomes a univariate
/// polynomial in `b` of degree `n1 + n2 - 1` whose expansion in the basis
/// `binom(b - 1, l)` has only nonnegative coefficients.
pub fn verify_diagonal_expansion(ctx: &TauContext, max_deg: u32) -> Result<VerificationReport> {
    let dirs = interior_directions(max_deg);
    let cases = dirs.len() as u64;
    let mut w_deg = Vec::new();
    let mut w_pos = Vec::new();
    let bvar = MultiPolynomial::var(Var::B);
    for &n in &dirs {
        let tau = ctx.tau_symbolic(n)?;
        let on_diagonal = tau.substitute(Var::C, &bvar).substitute(Var::G, &bvar);
        let expected = n.degree() - 1;
        if on_diagonal.degree_in(Var::B) != Some(expected) {
            w_deg.push(Witness::at_n(
                n,
                format!(
                    "deg_b tau(b, b) = {:?}, expected {expected}",
                    on_diagonal.degree_in(Var::B)
                ),
            ));
        }
        let coeffs = shifted_binomial_expand(&on_diagonal, Var::B);
        if let Some((l, bad)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, v)| *v < &Rat::from_integer(0.into()))
        {
            w_pos.push(Witness::at_n(
                n,
                format!("negative coefficient {} of binom(b-1, {l})", format_rat(bad)),
            ));
        }
    }
    Ok(VerificationReport {
        check: "prop11".into(),
        range: format!("interior n with deg(n) <= {max_deg}, diagonal c = b"),
        rows: vec![
            proved("diagonal-tau-degree", cases, w_deg),
            proved("diagonal-tau-binomial-positivity", cases, w_pos),
        ],
    })
}

/// The `g`-expansion claims along one primitive interior direction `n0`:
/// for `k <= k_max` and all `j`, the proved degree bounds
/// `deg_b tau(k n0; j) <= k n0_2 - j`, `deg_c tau(k n0; j) <= k n0_1 - j`;
/// the exact identities `tau(k n0; k) = tau(n0; 1)^k / k!` and, for
/// `k >= 2`, `tau(k n0; k-1) = tau(n0; 1)^(k-2) p / (k-2)!` with the
/// `k`-independent polynomial `p = U(2 n0) - U(n0) / 2`; plus the recorded
/// observation of where the degree bounds are attained with equality.
pub fn verify_g_slices(
    ctx: &TauContext,
    n0: Direction,
    k_max: u32,
) -> Result<VerificationReport> {
    assert!(n0.is_primitive(), "g-slice checks run along a primitive direction");
    let tau1 = ctx
        .tau_symbolic(n0)?
        .coefficient_of_power(Var::G, 1);
    let p_poly = ctx
        .symbolic_u(n0.scaled(2))?
        .sub(&ctx.symbolic_u(n0)?.scale(&ratio(1, 2)));
    let mut w_bounds = Vec::new();
    let mut w_eq15 = Vec::new();
    let mut w_eq1618 = Vec::new();
    let mut w_attain = Vec::new();
    let mut bound_cases = 0u64;
    for k in 1..=k_max {
        let n = n0.scaled(k);
        let tau = ctx.tau_symbolic(n)?;
        for j in 1..=k {
            let slice = tau.coefficient_of_power(Var::G, j);
            bound_cases += 1;
            let bound_b = k * n0.n2() - j;
            let bound_c = k * n0.n1() - j;
            let deg_b = slice.degree_in(Var::B).unwrap_or(0);
            let deg_c = slice.degree_in(Var::C).unwrap_or(0);
            if deg_b > bound_b || deg_c > bound_c {
                w_bounds.push(Witness::at_n(
                    n,
                    format!("deg tau(k n0; {j}) = (b: {deg_b}, c: {deg_c}), bounds ({bound_b}, {bound_c})"),
                ));
            }
            if slice.is_zero() || deg_b < bound_b || deg_c < bound_c {
                w_attain.push(Witness::at_n(
                    n,
                    format!("bound not attained at j = {j}: deg = (b: {deg_b}, c: {deg_c}), bounds ({bound_b}, {bound_c})"),
                ));
            }
        }
        let top = tau.coefficient_of_power(Var::G, k);
        let expected = tau1.pow_u32(k).scale(&factorial(k).recip());
        if top != expected {
            w_eq15.push(Witness::at_n(n, format!("tau(k n0; k) = {top}, expected {expected}")));
        }
        if k >= 2 {
            let next = tau.coefficient_of_power(Var::G, k - 1);
            let expected = tau1
                .pow_u32(k - 2)
                .mul(&p_poly)
                .scale(&factorial(k - 2).recip());
            if next != expected {
                w_eq1618.push(Witness::at_n(
                    n,
                    format!("tau(k n0; k-1) = {next}, expected {expected}"),
                ));
            }
        }
    }
    Ok(VerificationReport {
        check: "props1418".into(),
        range: format!("n0 = {n0}, k <= {k_max}"),
        rows: vec![
            proved("g-slice-degree-bounds", bound_cases, w_bounds),
            proved("top-slice-power-identity", u64::from(k_max), w_eq15),
            proved(
                "subtop-slice-identity-with-k-independent-p",
                u64::from(k_max.saturating_sub(1)),
                w_eq1618,
            ),
            observed("degree-bound-equality-attainment", bound_cases, w_attain),
        ],
    })
}

/// Runs [`verify_g_slices`] for every interior primitive `n0` up to
/// `max_n0_deg` and merges the reports.
pub fn verify_g_slices_sweep(
    ctx: &TauContext,
    max_n0_deg: u32,
    k_max: u32,
) -> Result<VerificationReport> {
    let mut rows = Vec::new();
    for n0 in interior_primitives(max_n0_deg) {
        let report = verify_g_slices(ctx, n0, k_max)?;
        for mut row in report.rows {
            row.id = format!("{}[n0={},{}]", row.id, n0.n1(), n0.n2());
            rows.push(row);
        }
    }
    Ok(VerificationReport {
        check: "props1418".into(),
        range: format!("primitive interior n0 with deg(n0) <= {max_n0_deg}, k <= {k_max}"),
        rows,
    })
}

/// Empirical observations over a parameter grid: integrality of every
/// sampled `U(n)`, nonnegative-integrality of the reconstructed `alpha`
/// coefficients, and integrality plus nonnegativity of every `tau(n)`.
pub fn report_observations(
    ctx: &TauContext,
    max_deg: u32,
    grid_max: u32,
) -> Result<VerificationReport> {
    let cache = ctx.compute_cache();
    let mut w_u = Vec::new();
    let mut w_tau_int = Vec::new();
    let mut w_tau_pos = Vec::new();
    let mut grid_cases = 0u64;
    for &n in &interior_directions(max_deg) {
        for b in 1..=grid_max {
            for c in 1..=grid_max {
                grid_cases += 1;
                let u = big_u_sample(cache, n, b, c)?;
                if !is_nonneg_integer(&u) {
                    w_u.push(Witness::at(n, b, c, format!("U = {}", format_rat(&u))));
                }
                let table = cache.table(DiagramParams::new(b, c)?, n.degree())?;
                let tau = tau_numeric(&table, n);
                if !tau.is_integer() {
                    w_tau_int.push(Witness::at(n, b, c, format!("tau = {}", format_rat(&tau))));
                }
                if tau < Rat::from_integer(0.into()) {
                    w_tau_pos.push(Witness::at(n, b, c, format!("tau = {}", format_rat(&tau))));
                }
            }
        }
    }
    let mut w_alpha = Vec::new();
    let dirs = interior_directions(max_deg);
    let alpha_cases = dirs.len() as u64;
    for &n in &dirs {
        let alpha = reconstruct_alpha(cache, n)?;
        for ((i, j), v) in alpha.entries() {
            if !is_nonneg_integer(v) {
                w_alpha.push(Witness::at_n(
                    n,
                    format!("alpha({i}, {j}) = {}", format_rat(v)),
                ));
            }
        }
    }
    Ok(VerificationReport {
        check: "observations".into(),
        range: format!("interior n with deg(n) <= {max_deg}; (b, c) in [1, {grid_max}]^2"),
        rows: vec![
            observed("u-integrality", grid_cases, w_u),
            observed("alpha-nonnegative-integrality", alpha_cases, w_alpha),
            observed("tau-integrality", grid_cases, w_tau_int),
            observed("tau-nonnegativity", grid_cases, w_tau_pos),
        ],
    })
}

/// Ranges for a full verification run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub max_deg: u32,
    pub grid_max: u32,
    pub max_n: u32,
    pub max_n0_deg: u32,
    pub k_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_deg: 8,
            grid_max: 6,
            max_n: 6,
            max_n0_deg: 4,
            k_max: 4,
        }
    }
}

/// Pre-computes every factorization table a run with this configuration
/// will request, fanning the independent jobs out in parallel.
pub fn warm_cache(ctx: &TauContext, cfg: &VerifyConfig) -> Result<()> {
    let mut jobs: Vec<(DiagramParams, u32)> = Vec::new();
    // parameter-grid sweeps
    for b in 1..=cfg.grid_max {
        for c in 1..=cfg.grid_max {
            jobs.push((DiagramParams::new(b, c)?, cfg.max_deg.max(cfg.max_n + 1)));
        }
    }
    // reconstruction grids: every direction whose symbolic U a run touches
    let mut dirs = interior_directions(cfg.max_deg);
    for n0 in interior_primitives(cfg.max_n0_deg) {
        for k in 1..=cfg.k_max.max(2) {
            dirs.push(n0.scaled(k));
        }
    }
    for n in dirs {
        for c in 1..=n.n1() + 1 {
            for b in 1..=n.n2() + 1 {
                jobs.push((DiagramParams::new(b, c)?, n.degree()));
            }
        }
    }
    ctx.compute_cache().warm(&jobs)
}

/// Runs every check at the given ranges and returns all reports.
pub fn run_all(ctx: &TauContext, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    warm_cache(ctx, cfg)?;
    Ok(vec![
        verify_degree_structure(ctx, cfg.max_deg)?,
        verify_edge_closed_forms(ctx, cfg.max_n, cfg.grid_max)?,
        verify_diagonal_expansion(ctx, cfg.max_deg)?,
        verify_g_slices_sweep(ctx, cfg.max_n0_deg, cfg.k_max)?,
        report_observations(ctx, cfg.max_deg, cfg.grid_max)?,
    ])
}
