//! Sparse exact polynomials in the three named indeterminates `c`, `b`, `g`.
//!
//! These carry the symbolic side of the crate: wall exponents reconstructed
//! as polynomials in the diagram parameters, and expanded wall-function
//! coefficients as polynomials in `(c, b, g)`. Coefficients are exact
//! rationals and all operations are closed-form; evaluation at integer
//! parameters must agree with the numeric engine exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Zero};

use crate::ratio::{binom_int, factorial, rat, Rat};

/// The three indeterminates, in storage order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    C,
    B,
    G,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::C, Var::B, Var::G];

    fn index(self) -> usize {
        match self {
            Var::C => 0,
            Var::B => 1,
            Var::G => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Var::C => "c",
            Var::B => "b",
            Var::G => "g",
        }
    }
}

/// A polynomial in `c`, `b`, `g` with rational coefficients, stored sparsely
/// by exponent triple `[e_c, e_b, e_g]`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPolynomial {
    coeffs: BTreeMap<[u32; 3], Rat>,
}

impl MultiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(value: Rat) -> Self {
        let mut p = Self::zero();
        if !value.is_zero() {
            p.coeffs.insert([0, 0, 0], value);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0u32; 3];
        e[v.index()] = 1;
        let mut p = Self::zero();
        p.coeffs.insert(e, Rat::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; 3], Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|e| *e == [0, 0, 0])
    }

    pub fn constant_value(&self) -> Rat {
        self.coeff([0, 0, 0])
    }

    pub fn coeff(&self, e: [u32; 3]) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Rat)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, e: [u32; 3], c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= k.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow_u32(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation at `(c, b, g)`.
    pub fn eval(&self, c: &Rat, b: &Rat, g: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, k) in &self.coeffs {
            let mut term = k.clone();
            for (v, ex) in [(c, e[0]), (b, e[1]), (g, e[2])] {
                for _ in 0..ex {
                    term *= v.clone();
                }
            }
            acc += term;
        }
        acc
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.coeffs.keys().map(|e| e[v.index()]).max()
    }

    /// The polynomial coefficient of `v^k`: all terms with `v`-exponent
    /// exactly `k`, with that exponent removed.
    pub fn coefficient_of_power(&self, v: Var, k: u32) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (e, c) in &self.coeffs {
            if e[i] == k {
                let mut e2 = *e;
                e2[i] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, v: Var, value: &Self) -> Self {
        let i = v.index();
        let max = self.degree_in(v).unwrap_or(0);
        let mut pows = Vec::with_capacity(max as usize + 1);
        pows.push(Self::one());
        for k in 1..=max {
            let next = pows[k as usize - 1].mul(value);
            pows.push(next);
        }
        let mut out = Self::zero();
        for (e, c) in &self.coeffs {
            let mut rest = [0u32; 3];
            rest.copy_from_slice(e);
            rest[i] = 0;
            let base = Self::from_terms([(rest, c.clone())]);
            out = out.add(&base.mul(&pows[e[i] as usize]));
        }
        out
    }
}

/// Generalized binomial coefficient of a polynomial argument:
/// `binom(p, k) = p (p - 1) ... (p - k + 1) / k!`.
pub fn poly_binomial(p: &MultiPolynomial, k: u32) -> MultiPolynomial {
    let mut acc = MultiPolynomial::one();
    for i in 0..k {
        acc = acc.mul(&p.sub(&MultiPolynomial::constant(rat(i64::from(i)))));
    }
    acc.scale(&factorial(k).recip())
}

/// The polynomial `binom(x, k)` in the variable `v`.
pub fn binomial_in_var(v: Var, k: u32) -> MultiPolynomial {
    poly_binomial(&MultiPolynomial::var(v), k)
}

/// Rewrites a polynomial `p` that is univariate in `v` in the shifted
/// binomial basis: returns `(c_0, ..., c_d)` with
/// `p(x) = sum_l c_l * binom(x - 1, l)`.
///
/// The coefficients are the forward differences `c_l = (delta^l p)(1)`,
/// computed from the exact values `p(1), ..., p(d + 1)`. Panics if `p`
/// involves any variable other than `v`.
pub fn shifted_binomial_expand(p: &MultiPolynomial, v: Var) -> Vec<Rat> {
    for (e, _) in p.terms() {
        for w in Var::ALL {
            assert!(
                w == v || e[w.index()] == 0,
                "shifted_binomial_expand requires a polynomial univariate in {}",
                v.name()
            );
        }
    }
    let d = p.degree_in(v).unwrap_or(0);
    let at = |x: i64| p.eval(&rat(x), &rat(x), &rat(x));
    let mut values: Vec<Rat> = (0..=i64::from(d)).map(|m| at(1 + m)).collect();
    let mut out = Vec::with_capacity(values.len());
    for _ in 0..values.len() {
        out.push(values[0].clone());
        for i in 0..values.len() - 1 {
            values[i] = &values[i + 1] - &values[i];
        }
        values.pop();
    }
    out
}

/// Evaluates a shifted binomial expansion back at a point: the inverse of
/// [`shifted_binomial_expand`] under evaluation.
pub fn eval_shifted_binomial(coeffs: &[Rat], x: &Rat) -> Rat {
    let shifted = x - rat(1);
    let mut acc = Rat::zero();
    for (l, c) in coeffs.iter().enumerate() {
        acc += c * crate::ratio::binom_rat(&shifted, l as u32);
    }
    acc
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num::traits::Signed;
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&[u32; 3], &Rat)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(e, _)| (e[0] + e[1] + e[2], **e));
        let mut first = true;
        for (e, c) in terms {
            let mut body = String::new();
            for v in Var::ALL {
                let ex = e[v.index()];
                if ex > 0 {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    body.push_str(v.name());
                    if ex > 1 {
                        body.push_str(&format!("^{ex}"));
                    }
                }
            }
            let mag = crate::ratio::format_rat(&c.clone().abs());
            let coeff_part = if body.is_empty() {
                mag
            } else if mag == "1" {
                String::new()
            } else {
                format!("{mag}*")
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{coeff_part}{body}")?;
        }
        Ok(())
    }
}

/// `binom(n, k)` for a nonnegative integer `n`, re-exported here because the
/// symbolic layer states its closed forms through it.
pub fn binom(n: u64, k: u32) -> Rat {
    binom_int(n, k)
}
