//! Lifting numeric wall exponents to symbolic polynomials in `(c, b)`.
//!
//! For an interior direction `n = (n1, n2)` the rescaled exponent `U(n)`,
//! viewed as a function of the diagram parameters, is a linear combination
//! of the separated basis functions
//! `phi_ij(c, b) = binom(c, i) binom(b, j) / (c b)` with `1 <= i <= n1`,
//! `1 <= j <= n2`. Sampling `U(n)` on an `n1 x n2` integer grid determines
//! the coefficients `alpha_ij` by an exact linear solve; each `phi_ij` is a
//! polynomial in `(c, b)`, so the result is a closed-form polynomial for
//! `U(n)`. Every reconstruction is validated against one extra sample off
//! the grid before it is returned.

use std::collections::BTreeMap;

use num::traits::Zero;

use crate::diagram::ComputeCache;
use crate::group::{DiagramParams, Direction};
use crate::poly::{MultiPolynomial, Var};
use crate::ratio::{binom_rat, factorial, format_rat, rat, Rat};
use crate::{Error, Result};

/// One numeric sample `U(n)` at parameters `(b, c)`.
pub fn big_u_sample(cache: &ComputeCache, n: Direction, b: u32, c: u32) -> Result<Rat> {
    let params = DiagramParams::new(b, c)?;
    let table = cache.table(params, n.degree())?;
    Ok(table.big_u(n))
}

/// The coefficients `alpha_ij` of `U(n)` in the separated binomial basis,
/// together with the grid they were fitted on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaTable {
    n: Direction,
    base: (u32, u32),
    alpha: BTreeMap<(u32, u32), Rat>,
}

impl AlphaTable {
    pub fn n(&self) -> Direction {
        self.n
    }

    /// Lower-left corner `(c0, b0)` of the sampling grid.
    pub fn base(&self) -> (u32, u32) {
        self.base
    }

    pub fn alpha(&self, i: u32, j: u32) -> Rat {
        self.alpha.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Nonzero coefficients in `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.alpha.iter()
    }

    /// The closed-form polynomial `U(n)(c, b) = sum alpha_ij phi_ij`.
    pub fn symbolic_u(&self) -> MultiPolynomial {
        let mut acc = MultiPolynomial::zero();
        for ((i, j), a) in &self.alpha {
            acc = acc.add(&basis_poly(*i, *j).scale(a));
        }
        acc
    }
}

/// `phi_ij` as a polynomial:
/// `binom(c, i)/c = (c-1)...(c-i+1)/i!` times the same in `(b, j)`.
fn basis_poly(i: u32, j: u32) -> MultiPolynomial {
    let falling = |v: Var, k: u32| {
        let mut acc = MultiPolynomial::one();
        for t in 1..k {
            acc = acc.mul(
                &MultiPolynomial::var(v).sub(&MultiPolynomial::constant(rat(i64::from(t)))),
            );
        }
        acc.scale(&factorial(k).recip())
    };
    falling(Var::C, i).mul(&falling(Var::B, j))
}

/// `phi_ij` evaluated numerically at integer `(c, b)`.
fn basis_value(i: u32, j: u32, c: u32, b: u32) -> Rat {
    binom_rat(&rat(i64::from(c)), i) * binom_rat(&rat(i64::from(b)), j)
        / (rat(i64::from(c)) * rat(i64::from(b)))
}

/// Exact solve of a square system by Gaussian elimination with partial
/// (first-nonzero) pivoting. The grid systems here are always nonsingular
/// because the basis separates into univariate polynomials of distinct
/// degrees, unisolvent on any set of distinct sample points.
fn solve_linear(mut a: Vec<Vec<Rat>>, mut y: Vec<Rat>) -> Vec<Rat> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .expect("reconstruction grid system is singular");
        a.swap(col, pivot);
        y.swap(col, pivot);
        let inv = a[col][col].clone().recip();
        for v in a[col].iter_mut() {
            *v *= inv.clone();
        }
        y[col] *= inv;
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in 0..m {
                    let delta = &factor * &a[col][k];
                    a[r][k] -= delta;
                }
                let delta = &factor * &y[col];
                y[r] -= delta;
            }
        }
    }
    y
}

/// Reconstructs the `alpha` coefficients of `U(n)` from samples on the
/// default grid based at `(c0, b0) = (1, 1)`.
pub fn reconstruct_alpha(cache: &ComputeCache, n: Direction) -> Result<AlphaTable> {
    reconstruct_alpha_on_grid(cache, n, 1, 1)
}

/// Reconstructs `alpha` from the grid `c in [c0, c0 + n1)`,
/// `b in [b0, b0 + n2)`, then validates the result against the fresh sample
/// at `(c0 + n1, b0 + n2)` and refuses to return on any mismatch.
pub fn reconstruct_alpha_on_grid(
    cache: &ComputeCache,
    n: Direction,
    c0: u32,
    b0: u32,
) -> Result<AlphaTable> {
    if n.n1() == 0 || n.n2() == 0 {
        return Err(Error::AxisDirection(n.n1(), n.n2()));
    }
    assert!(c0 >= 1 && b0 >= 1, "grid base must be positive");
    let (n1, n2) = (n.n1(), n.n2());
    let keys: Vec<(u32, u32)> = (1..=n1)
        .flat_map(|i| (1..=n2).map(move |j| (i, j)))
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for c in c0..c0 + n1 {
        for b in b0..b0 + n2 {
            rows.push(
                keys.iter()
                    .map(|&(i, j)| basis_value(i, j, c, b))
                    .collect::<Vec<Rat>>(),
            );
            rhs.push(big_u_sample(cache, n, b, c)?);
        }
    }
    let solution = solve_linear(rows, rhs);
    let mut alpha = BTreeMap::new();
    for (key, value) in keys.iter().zip(solution) {
        if !value.is_zero() {
            alpha.insert(*key, value);
        }
    }
    let table = AlphaTable {
        n,
        base: (c0, b0),
        alpha,
    };

    let (cv, bv) = (c0 + n1, b0 + n2);
    let expected = big_u_sample(cache, n, bv, cv)?;
    let got: Rat = table
        .alpha
        .iter()
        .map(|((i, j), a)| a * basis_value(*i, *j, cv, bv))
        .fold(Rat::zero(), |acc, t| acc + t);
    if got != expected {
        return Err(Error::ReconstructionMismatch {
            n,
            c: cv,
            b: bv,
            expected: format_rat(&expected),
            got: format_rat(&got),
        });
    }
    Ok(table)
}

/// Convenience: the closed-form polynomial for `U(n)`, reconstructed and
/// validated on the default grid.
pub fn symbolic_big_u(cache: &ComputeCache, n: Direction) -> Result<MultiPolynomial> {
    Ok(reconstruct_alpha(cache, n)?.symbolic_u())
}
