//! Truncated bivariate formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] is an element of `Q[[y1, y2]]` with every monomial
//! of total degree above the truncation bound discarded. Series are kept in
//! canonical sparse form: only nonzero coefficients are stored, and two
//! series are equal iff their truncation degrees and coefficient maps match.
//! Values are immutable after construction and all operations are pure, so
//! they are freely shareable between threads.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Signed, Zero};

use crate::ratio::{rat, Rat};

/// A monomial `y1^n1 * y2^n2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub n1: u32,
    pub n2: u32,
}

impl Monomial {
    pub const fn new(n1: u32, n2: u32) -> Self {
        Monomial { n1, n2 }
    }

    /// Total degree `n1 + n2`.
    pub const fn degree(&self) -> u32 {
        self.n1 + self.n2
    }
}

/// A formal power series in `y1, y2` truncated at a total degree bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    truncation: u32,
    coeffs: BTreeMap<Monomial, Rat>,
}

impl TruncatedSeries {
    /// The zero series at truncation degree `l`.
    pub fn zero(l: u32) -> Self {
        TruncatedSeries {
            truncation: l,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series `1` at truncation degree `l`.
    pub fn one(l: u32) -> Self {
        Self::constant(l, Rat::one())
    }

    /// A constant series.
    pub fn constant(l: u32, value: Rat) -> Self {
        let mut s = Self::zero(l);
        if !value.is_zero() {
            s.coeffs.insert(Monomial::new(0, 0), value);
        }
        s
    }

    /// A single monomial term `coeff * y1^n1 * y2^n2`; terms beyond the
    /// truncation bound collapse to zero.
    pub fn monomial(l: u32, m: Monomial, coeff: Rat) -> Self {
        let mut s = Self::zero(l);
        if m.degree() <= l && !coeff.is_zero() {
            s.coeffs.insert(m, coeff);
        }
        s
    }

    /// Builds a series from `(monomial, coefficient)` pairs, dropping
    /// out-of-range monomials and summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(l: u32, terms: I) -> Self {
        let mut s = Self::zero(l);
        for (m, c) in terms {
            if m.degree() <= l {
                s.add_term(m, c);
            }
        }
        s
    }

    /// Convenience: `1 + y^n` at truncation `l`.
    pub fn one_plus(l: u32, m: Monomial) -> Self {
        let mut s = Self::one(l);
        if m.degree() <= l {
            s.add_term(m, Rat::one());
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1
            && self
                .coeffs
                .get(&Monomial::new(0, 0))
                .map_or(false, |c| c.is_one())
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(Monomial::new(0, 0))
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: Monomial) -> Rat {
        self.coeffs.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterates stored (nonzero) terms in the map's fixed order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.coeffs.iter()
    }

    /// Smallest total degree with a nonzero coefficient, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.degree()).min()
    }

    /// Largest total degree with a nonzero coefficient, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.degree()).max()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(m) {
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

    fn assert_same_truncation(&self, other: &Self) {
        assert_eq!(
            self.truncation, other.truncation,
            "mismatched truncation degrees: {} vs {}",
            self.truncation, other.truncation
        );
    }

    /// Coefficient-wise sum. Panics on mismatched truncation degrees.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_truncation(other);
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_truncation(other);
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, -c.clone());
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
            return Self::zero(self.truncation);
        }
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= k.clone();
        }
        out
    }

    /// Convolution product with everything above the truncation bound
    /// discarded. Panics on mismatched truncation degrees.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_truncation(other);
        self.mul_bounded(other, self.truncation)
    }

    /// Product keeping only terms of total degree `<= bound`.
    pub(crate) fn mul_bounded(&self, other: &Self, bound: u32) -> Self {
        let bound = bound.min(self.truncation);
        let mut out = Self::zero(self.truncation);
        for (ma, ca) in &self.coeffs {
            let da = ma.degree();
            if da > bound {
                continue;
            }
            let room = bound - da;
            for (mb, cb) in &other.coeffs {
                if mb.degree() > room {
                    continue;
                }
                out.add_term(Monomial::new(ma.n1 + mb.n1, ma.n2 + mb.n2), ca * cb);
            }
        }
        out
    }

    /// Multiplies by a single monomial term (a shift plus a scale).
    pub fn mul_monomial(&self, m: Monomial, coeff: &Rat) -> Self {
        let mut out = Self::zero(self.truncation);
        if coeff.is_zero() {
            return out;
        }
        for (ma, ca) in &self.coeffs {
            let shifted = Monomial::new(ma.n1 + m.n1, ma.n2 + m.n2);
            if shifted.degree() <= self.truncation {
                out.coeffs.insert(shifted, ca * coeff);
            }
        }
        out
    }

    /// Nonnegative integer power by repeated multiplication.
    pub fn pow_u32(&self, k: u32) -> Self {
        let mut out = Self::one(self.truncation);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Raises a series with constant term `1` to an arbitrary rational
    /// exponent via the generalized binomial series in `u = self - 1`:
    /// `sum_k binom(s, k) u^k`. The sum is finite because `u` has positive
    /// minimum degree. Panics when the constant term is not exactly `1`.
    pub fn pow_rational(&self, s: &Rat) -> Self {
        assert!(
            self.constant_term().is_one(),
            "pow_rational requires constant term exactly 1"
        );
        let one = Self::one(self.truncation);
        let u = self.sub(&one);
        if u.is_zero() || s.is_zero() {
            return one;
        }
        let mut result = one;
        let mut upow = Self::one(self.truncation);
        let mut coeff = Rat::one();
        let mut k: i64 = 0;
        loop {
            upow = upow.mul(&u);
            coeff *= (s - rat(k)) / rat(k + 1);
            k += 1;
            if upow.is_zero() || coeff.is_zero() {
                break;
            }
            result = result.add(&upow.scale(&coeff));
            if k as u32 > self.truncation {
                break;
            }
        }
        result
    }

    /// Monomial-wise substitution `y1 -> y1*g1`, `y2 -> y2*g2`, truncated.
    /// `g1` and `g2` must have constant term `1` and share this series'
    /// truncation degree.
    pub fn substitute_scaled(&self, g1: &Self, g2: &Self) -> Self {
        self.assert_same_truncation(g1);
        self.assert_same_truncation(g2);
        assert!(
            g1.constant_term().is_one() && g2.constant_term().is_one(),
            "substitute_scaled requires multiplier constant terms exactly 1"
        );
        if g1.is_one() && g2.is_one() {
            return self.clone();
        }
        let l = self.truncation;
        // Group terms by the y1-exponent: the contribution of the slice with
        // y1-exponent a is y1^a * g1^a * sum_b c_{a,b} y2^b g2^b.
        let mut by_n1: BTreeMap<u32, Vec<(u32, &Rat)>> = BTreeMap::new();
        for (m, c) in &self.coeffs {
            by_n1.entry(m.n1).or_default().push((m.n2, c));
        }
        let max_n2 = self.coeffs.keys().map(|m| m.n2).max().unwrap_or(0);
        let pow2 = power_table(g2, max_n2, l);
        let mut out = Self::zero(l);
        let mut g1_pow = Self::one(l);
        let mut g1_pow_exp = 0u32;
        for (a, slice) in by_n1 {
            while g1_pow_exp < a {
                g1_pow = g1_pow.mul(g1);
                g1_pow_exp += 1;
            }
            let mut inner = Self::zero(l);
            for (b, c) in slice {
                inner = inner.add(&pow2[b as usize].mul_monomial(Monomial::new(0, b), c));
            }
            let contrib = inner
                .mul_bounded(&g1_pow, l.saturating_sub(a))
                .mul_monomial(Monomial::new(a, 0), &Rat::one());
            out = out.add(&contrib);
        }
        out
    }

    /// Projection to a lower truncation degree.
    pub fn truncated(&self, l: u32) -> Self {
        assert!(l <= self.truncation, "cannot raise a truncation degree");
        let mut out = Self::zero(l);
        for (m, c) in &self.coeffs {
            if m.degree() <= l {
                out.coeffs.insert(*m, c.clone());
            }
        }
        out
    }
}

fn power_table(g: &TruncatedSeries, up_to: u32, l: u32) -> Vec<TruncatedSeries> {
    let mut pows = Vec::with_capacity(up_to as usize + 1);
    pows.push(TruncatedSeries::one(l));
    for k in 1..=up_to {
        let next = pows[k as usize - 1].mul(g);
        pows.push(next);
    }
    pows
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // render in (total degree, n1) order
        let mut terms: Vec<(&Monomial, &Rat)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(m, _)| (m.degree(), m.n1));
        let mut first = true;
        for (m, c) in terms {
            let var = |name: &str, e: u32| {
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            };
            let body = match (m.n1, m.n2) {
                (0, 0) => String::new(),
                (a, 0) => var("y1", a),
                (0, b) => var("y2", b),
                (a, b) => format!("{}*{}", var("y1", a), var("y2", b)),
            };
            let mag = crate::ratio::format_rat(&c.clone().abs());
            let coeff_part = if body.is_empty() || mag != "1" {
                if body.is_empty() {
                    mag
                } else {
                    format!("{mag}*")
                }
            } else {
                String::new()
            };
            if first {
                if *c < Rat::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < Rat::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{coeff_part}{body}")?;
        }
        Ok(())
    }
}
