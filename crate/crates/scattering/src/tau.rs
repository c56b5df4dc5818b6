//! Expanded wall-function coefficients, numeric and symbolic.
//!
//! For `n = k n0` with `n0` primitive, `tau(n)` is the coefficient of
//! `y^n` in the wall function attached to `n0`. Expanding the product
//! `prod_j (1 + y^(j n0))^(u_hat(j n0))` term by term gives the closed
//! combinatorial form
//! `tau(n) = sum over (s_1, ..., s_k) with sum j s_j = k of
//! prod_j binom(u_hat(j n0), s_j)`,
//! and replacing each `u_hat(j n0)` by `g * U(j n0)` with `U` in its
//! reconstructed polynomial form turns `tau` into a polynomial in
//! `(c, b, g)`.

use std::collections::HashMap;
use std::sync::Mutex;

use num::traits::{One, Zero};

use crate::diagram::{ComputeCache, WallExponentTable};
use crate::group::Direction;
use crate::poly::{poly_binomial, MultiPolynomial, Var};
use crate::ratio::{binom_rat, Rat};
use crate::reconstruct::symbolic_big_u;
use crate::Result;

/// All multiplicity profiles `(s_1, ..., s_k)` with `sum j s_j = k`: the
/// partitions of `k` recorded by part multiplicities.
pub fn partition_profiles(k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; k as usize];
    fn go(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            current[part as usize - 1] += 1;
            go(remaining - part, part, current, out);
            current[part as usize - 1] -= 1;
        }
    }
    go(k, k, &mut current, &mut out);
    out
}

/// `tau(n)` read directly off the wall function: the coefficient of `y^n`
/// in the function attached to the primitive direction under `n`.
pub fn tau_numeric(table: &WallExponentTable, n: Direction) -> Rat {
    assert!(
        n.degree() <= table.truncation(),
        "tau at degree {} needs a table truncated at {} or deeper",
        n.degree(),
        table.truncation()
    );
    table
        .wall_function_at(n.primitive(), n.degree())
        .coeff(n.monomial())
}

/// `tau(n)` through the partition formula over the exponents of the
/// multiples of `n0`. Agrees with [`tau_numeric`] identically.
pub fn tau_via_partitions(table: &WallExponentTable, n: Direction) -> Rat {
    let n0 = n.primitive();
    let k = n.gcd();
    let mut acc = Rat::zero();
    for profile in partition_profiles(k) {
        let mut term = Rat::one();
        for (idx, &s) in profile.iter().enumerate() {
            if s > 0 {
                let u_hat = table.u_hat(n0.scaled(idx as u32 + 1));
                term *= binom_rat(&u_hat, s);
            }
        }
        acc += term;
    }
    acc
}

/// `tau(n)` as a polynomial in `(c, b, g)`: the partition formula with each
/// `u_hat(j n0)` replaced by `g * U(j n0)` in reconstructed symbolic form.
pub fn tau_symbolic(cache: &ComputeCache, n: Direction) -> Result<MultiPolynomial> {
    let n0 = n.primitive();
    let k = n.gcd();
    let g = MultiPolynomial::var(Var::G);
    let mut args: Vec<MultiPolynomial> = Vec::with_capacity(k as usize);
    for j in 1..=k {
        args.push(g.mul(&symbolic_big_u(cache, n0.scaled(j))?));
    }
    let mut acc = MultiPolynomial::zero();
    for profile in partition_profiles(k) {
        let mut term = MultiPolynomial::one();
        for (idx, &s) in profile.iter().enumerate() {
            if s > 0 {
                term = term.mul(&poly_binomial(&args[idx], s));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The expansion of a symbolic `tau` in powers of `g`: `coefficients[k]` is
/// the polynomial coefficient of `g^(k+1)`. The constant (in `g`) part is
/// reported separately so callers can check it vanishes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TauGExpansion {
    pub g_free_part: MultiPolynomial,
    pub coefficients: Vec<MultiPolynomial>,
}

pub fn tau_g_expansion(tau: &MultiPolynomial) -> TauGExpansion {
    let deg = tau.degree_in(Var::G).unwrap_or(0);
    TauGExpansion {
        g_free_part: tau.coefficient_of_power(Var::G, 0),
        coefficients: (1..=deg)
            .map(|k| tau.coefficient_of_power(Var::G, k))
            .collect(),
    }
}

/// Memoizing context for the symbolic layer: shares one [`ComputeCache`]
/// and keeps every reconstructed `U` and `tau` polynomial.
pub struct TauContext<'a> {
    cache: &'a ComputeCache,
    u_memo: Mutex<HashMap<Direction, MultiPolynomial>>,
    tau_memo: Mutex<HashMap<Direction, MultiPolynomial>>,
}

impl<'a> TauContext<'a> {
    pub fn new(cache: &'a ComputeCache) -> Self {
        TauContext {
            cache,
            u_memo: Mutex::new(HashMap::new()),
            tau_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn compute_cache(&self) -> &ComputeCache {
        self.cache
    }

    pub fn symbolic_u(&self, n: Direction) -> Result<MultiPolynomial> {
        if let Some(p) = self.u_memo.lock().unwrap().get(&n) {
            return Ok(p.clone());
        }
        let p = symbolic_big_u(self.cache, n)?;
        self.u_memo.lock().unwrap().insert(n, p.clone());
        Ok(p)
    }

    pub fn tau_symbolic(&self, n: Direction) -> Result<MultiPolynomial> {
        if let Some(p) = self.tau_memo.lock().unwrap().get(&n) {
            return Ok(p.clone());
        }
        let n0 = n.primitive();
        let k = n.gcd();
        let g = MultiPolynomial::var(Var::G);
        let mut args = Vec::with_capacity(k as usize);
        for j in 1..=k {
            args.push(g.mul(&self.symbolic_u(n0.scaled(j))?));
        }
        let mut acc = MultiPolynomial::zero();
        for profile in partition_profiles(k) {
            let mut term = MultiPolynomial::one();
            for (idx, &s) in profile.iter().enumerate() {
                if s > 0 {
                    term = term.mul(&poly_binomial(&args[idx], s));
                }
            }
            acc = acc.add(&term);
        }
        self.tau_memo.lock().unwrap().insert(n, acc.clone());
        Ok(acc)
    }
}
