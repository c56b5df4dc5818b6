//! Independent brute-force oracles used to certify the engine.
//!
//! Everything here is written from scratch against the definitions, on a
//! naive dense representation; the only item shared with the library under
//! test is the rational scalar type. In particular composition is done by
//! literal monomial-by-monomial substitution and tau coefficients by fully
//! expanding a product of binomial series, so a convention error in the
//! engine (composition order, pairing sign, normalization of the exponents)
//! cannot cancel out here.

// each integration test binary uses only the oracles it needs
#![allow(dead_code)]

use std::collections::BTreeMap;

use num::traits::{One, Zero};

// The one permitted shared item: the exact rational scalar.
pub type Rat = cluster_scattering::ratio::Rat;

/// A polynomial in two variables truncated by total degree, as a plain map
/// from exponent pairs to coefficients. Zero coefficients are never stored.
pub type Poly = BTreeMap<(u32, u32), Rat>;

pub fn rq(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn pone() -> Poly {
    let mut p = Poly::new();
    p.insert((0, 0), Rat::one());
    p
}

fn padd_term(p: &mut Poly, key: (u32, u32), v: Rat) {
    let entry = p.entry(key).or_insert_with(Rat::zero);
    *entry += v;
    if entry.is_zero() {
        p.remove(&key);
    }
}

pub fn padd(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (k, v) in b {
        padd_term(&mut out, *k, v.clone());
    }
    out
}

pub fn pmul(a: &Poly, b: &Poly, l: u32) -> Poly {
    let mut out = Poly::new();
    for ((a1, a2), av) in a {
        for ((b1, b2), bv) in b {
            let key = (a1 + b1, a2 + b2);
            if key.0 + key.1 <= l {
                padd_term(&mut out, key, av * bv);
            }
        }
    }
    out
}

fn ppow_u(base: &Poly, k: u32, l: u32) -> Poly {
    let mut acc = pone();
    for _ in 0..k {
        acc = pmul(&acc, base, l);
    }
    acc
}

/// Local binomial coefficient for a rational exponent:
/// `e (e-1) ... (e-j+1) / j!`.
fn binom(e: &Rat, j: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..j {
        acc *= (e - rq(i64::from(i))) / rq(i64::from(i) + 1);
    }
    acc
}

/// `base^e` for a polynomial with constant term 1 and rational exponent,
/// via the binomial series in `h = base - 1`.
pub fn ppow_rat(base: &Poly, e: &Rat, l: u32) -> Poly {
    assert_eq!(base.get(&(0, 0)), Some(&Rat::one()), "constant term must be 1");
    let mut h = base.clone();
    h.remove(&(0, 0));
    let mut out = pone();
    let mut h_power = pone();
    for j in 1..=l {
        h_power = pmul(&h_power, &h, l);
        if h_power.is_empty() {
            break;
        }
        let coeff = binom(e, j);
        for (k, v) in &h_power {
            padd_term(&mut out, *k, v * &coeff);
        }
    }
    out
}

/// `1 + y1^{n1} y2^{n2}`.
pub fn pone_plus(n1: u32, n2: u32) -> Poly {
    let mut p = pone();
    p.insert((n1, n2), Rat::one());
    p
}

/// Substitutes `y_i -> y_i * g_i` by expanding each monomial of `p`
/// independently: the coefficient of `y1^a y2^b` picks up `g1^a g2^b`.
pub fn psubstitute(p: &Poly, g1: &Poly, g2: &Poly, l: u32) -> Poly {
    let mut out = Poly::new();
    for ((a, b), coeff) in p {
        let mut term = ppow_u(g1, *a, l);
        term = pmul(&term, &ppow_u(g2, *b, l), l);
        for ((t1, t2), tv) in &term {
            let key = (t1 + a, t2 + b);
            if key.0 + key.1 <= l {
                padd_term(&mut out, key, tv * coeff);
            }
        }
    }
    out
}

/// A composed automorphism, recorded by its two multipliers: the map is
/// `y_i -> y_i * m_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OracleElement {
    pub m1: Poly,
    pub m2: Poly,
}

/// `delta(n; b, c) = bc / gcd(n1 b, n2 c)` as a rational (always an
/// integer).
fn delta(n1: u32, n2: u32, b: u32, c: u32) -> Rat {
    let num = u64::from(b) * u64::from(c);
    let den = num::integer::gcd(u64::from(n1) * u64::from(b), u64::from(n2) * u64::from(c));
    Rat::new((num as i64).into(), (den as i64).into())
}

/// Composes a written-left-to-right sequence of elementary walls
/// `(n, s)` — the leftmost factor acting first — entirely by naive
/// substitution. The wall for `(n, s)` multiplies `y_i` by
/// `(1 + y^n)^{s delta(n) {n, e_i}}` with `{n, e1} = -n2`, `{n, e2} = n1`.
pub fn oracle_expand_compose(
    b: u32,
    c: u32,
    walls: &[((u32, u32), Rat)],
    l: u32,
) -> OracleElement {
    let mut m1 = pone();
    let mut m2 = pone();
    for ((n1, n2), s) in walls {
        let d = delta(*n1, *n2, b, c);
        let base = pone_plus(*n1, *n2);
        let w1 = ppow_rat(&base, &(s * &d * rq(-i64::from(*n2))), l);
        let w2 = ppow_rat(&base, &(s * &d * rq(i64::from(*n1))), l);
        let s1 = psubstitute(&m1, &w1, &w2, l);
        let s2 = psubstitute(&m2, &w1, &w2, l);
        m1 = pmul(&w1, &s1, l);
        m2 = pmul(&w2, &s2, l);
    }
    OracleElement { m1, m2 }
}

/// The `(b, c) = (1, 1)` wall table obtained from the single pentagon
/// rewrite, with no peeling: the two initial walls and the diagonal, every
/// exponent equal to one.
pub fn oracle_pentagon_rewrite() -> Vec<((u32, u32), Rat)> {
    vec![
        ((0, 1), Rat::one()),
        ((1, 1), Rat::one()),
        ((1, 0), Rat::one()),
    ]
}

/// The coefficient of `y^{k n0}` in `prod_j (1 + y^{j n0})^{u_hats[j-1]}`,
/// computed by fully expanding the product — no partition formula.
pub fn oracle_tau_bruteforce(n0: (u32, u32), u_hats: &[Rat], k: u32) -> Rat {
    let deg0 = n0.0 + n0.1;
    let l = deg0 * k;
    let mut f = pone();
    for (idx, u) in u_hats.iter().enumerate() {
        let j = idx as u32 + 1;
        let base = pone_plus(n0.0 * j, n0.1 * j);
        f = pmul(&f, &ppow_rat(&base, u, l), l);
    }
    f.get(&(n0.0 * k, n0.1 * k)).cloned().unwrap_or_else(Rat::zero)
}
