//! Wall-crossing group elements in their faithful finite-degree
//! representation.
//!
//! A group element is stored as the pair of multiplier series of its action
//! on the two exchange-type variables: `y1 -> y1 * mult1`, `y2 -> y2 * mult2`.
//! Both multipliers have constant term exactly 1. This action determines the
//! element, so products, inverses, and comparisons are all carried out on
//! multiplier pairs.
//!
//! An elementary wall with normal `n` and parameter `s` acts with multiplier
//! `(1 + y^n)^(s * delta(n) * {n, e_i})` on `y_i`. The exponent on a general
//! monomial `y^n'` is `delta(n) * {n, n'}`: writing `y^n'` in the underlying
//! Laurent variables as `x1^(c n2') x2^(-b n1')` and pairing with
//! `delta(n) n` under the skew-symmetrizer weights gives
//! `delta(n) (n1 n2' - n2 n1')`, so the action preserves the `y`-subring and
//! the two multipliers above capture it completely.

use std::fmt;

use num::traits::One;
use serde::{Deserialize, Serialize};

use crate::ratio::{gcd_u64, rat, Rat};
use crate::series::{Monomial, TruncatedSeries};
use crate::{Error, Result};

/// The positive integer pair `(b, c)` fixing the exchange matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DiagramParams {
    b: u32,
    c: u32,
}

impl DiagramParams {
    pub fn new(b: u32, c: u32) -> Result<Self> {
        if b < 1 || c < 1 {
            return Err(Error::NonPositiveParams);
        }
        Ok(DiagramParams { b, c })
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }
}

impl fmt::Display for DiagramParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(b={}, c={})", self.b, self.c)
    }
}

/// A nonzero lattice direction with nonnegative coordinates.
///
/// Ordered by `(total degree, n1)`, which is also the canonical
/// serialization order for exponent tables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct Direction {
    n1: u32,
    n2: u32,
}

impl Direction {
    /// Panics on the zero vector; use [`Direction::try_new`] for input data.
    pub fn new(n1: u32, n2: u32) -> Self {
        Self::try_new(n1, n2).expect("direction must be nonzero")
    }

    pub fn try_new(n1: u32, n2: u32) -> Result<Self> {
        if n1 == 0 && n2 == 0 {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction { n1, n2 })
    }

    pub fn e1() -> Self {
        Direction { n1: 1, n2: 0 }
    }

    pub fn e2() -> Self {
        Direction { n1: 0, n2: 1 }
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn degree(&self) -> u32 {
        self.n1 + self.n2
    }

    pub fn gcd(&self) -> u32 {
        gcd_u64(u64::from(self.n1), u64::from(self.n2)) as u32
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    /// The primitive direction this is a multiple of.
    pub fn primitive(&self) -> Direction {
        let g = self.gcd();
        Direction {
            n1: self.n1 / g,
            n2: self.n2 / g,
        }
    }

    pub fn scaled(&self, k: u32) -> Direction {
        assert!(k >= 1);
        Direction {
            n1: self.n1 * k,
            n2: self.n2 * k,
        }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.n1, self.n2)
    }
}

impl From<Direction> for [u32; 2] {
    fn from(d: Direction) -> Self {
        [d.n1, d.n2]
    }
}

impl TryFrom<[u32; 2]> for Direction {
    type Error = String;
    fn try_from(v: [u32; 2]) -> std::result::Result<Self, String> {
        Direction::try_new(v[0], v[1]).map_err(|e| e.to_string())
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.n1).cmp(&(other.degree(), other.n1))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n1, self.n2)
    }
}

/// Skew-symmetric pairing `{n, m} = n1 m2 - n2 m1`.
pub fn pairing_skew(n: Direction, m: Direction) -> i64 {
    i64::from(n.n1) * i64::from(m.n2) - i64::from(n.n2) * i64::from(m.n1)
}

/// The normalized factor `delta(n) = bc / gcd(n1 b, n2 c)`: the smallest
/// positive rational with `delta(n) * n` in the rescaled sublattice
/// `(cZ) + (bZ)`.
pub fn normalized_factor(n: Direction, p: DiagramParams) -> Rat {
    let bc = u64::from(p.b) * u64::from(p.c);
    let g = gcd_u64(
        u64::from(n.n1) * u64::from(p.b),
        u64::from(n.n2) * u64::from(p.c),
    );
    Rat::new((bc as i64).into(), (g as i64).into())
}

/// The overall wall-function exponent `g(n; b, c) = gcd(n1 b, n2 c) / gcd(n1, n2)`,
/// always a positive integer.
pub fn g_factor(n: Direction, p: DiagramParams) -> u64 {
    let g = gcd_u64(
        u64::from(n.n1) * u64::from(p.b),
        u64::from(n.n2) * u64::from(p.c),
    );
    g / u64::from(n.gcd())
}

/// A structure-group element represented by its `y`-multiplier pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElement {
    params: DiagramParams,
    mult1: TruncatedSeries,
    mult2: TruncatedSeries,
}

impl GroupElement {
    /// Builds an element from its multiplier pair. Panics unless both have
    /// constant term exactly 1 and equal truncation degrees.
    pub fn from_multipliers(
        params: DiagramParams,
        mult1: TruncatedSeries,
        mult2: TruncatedSeries,
    ) -> Self {
        assert_eq!(
            mult1.truncation(),
            mult2.truncation(),
            "multiplier truncation degrees must match"
        );
        assert!(
            mult1.constant_term().is_one() && mult2.constant_term().is_one(),
            "multipliers must have constant term exactly 1"
        );
        GroupElement {
            params,
            mult1,
            mult2,
        }
    }

    pub fn identity(params: DiagramParams, l: u32) -> Self {
        GroupElement {
            params,
            mult1: TruncatedSeries::one(l),
            mult2: TruncatedSeries::one(l),
        }
    }

    pub fn params(&self) -> DiagramParams {
        self.params
    }

    pub fn truncation(&self) -> u32 {
        self.mult1.truncation()
    }

    pub fn mult1(&self) -> &TruncatedSeries {
        &self.mult1
    }

    pub fn mult2(&self) -> &TruncatedSeries {
        &self.mult2
    }

    pub fn is_identity(&self) -> bool {
        self.mult1.is_one() && self.mult2.is_one()
    }

    /// The elementary dilogarithm wall with normal `n` and parameter `s`,
    /// acting with multiplier `(1 + y^n)^(s * delta(n) * {n, e_i})` on `y_i`.
    pub fn elementary_wall(n: Direction, s: &Rat, params: DiagramParams, l: u32) -> Self {
        let base = TruncatedSeries::one_plus(l, n.monomial());
        let delta = normalized_factor(n, params);
        let e1 = s * &delta * rat(pairing_skew(n, Direction::e1()));
        let e2 = s * &delta * rat(pairing_skew(n, Direction::e2()));
        GroupElement {
            params,
            mult1: base.pow_rational(&e1),
            mult2: base.pow_rational(&e2),
        }
    }

    /// The element of the parallel subgroup of `n0` whose wall function is
    /// `f`: it multiplies `y_i` by `f^(delta(n0) * {n0, e_i})`.
    pub fn from_wall_function(
        n0: Direction,
        f: &TruncatedSeries,
        params: DiagramParams,
    ) -> Self {
        let delta = normalized_factor(n0, params);
        let e1 = &delta * rat(pairing_skew(n0, Direction::e1()));
        let e2 = &delta * rat(pairing_skew(n0, Direction::e2()));
        GroupElement {
            params,
            mult1: f.pow_rational(&e1),
            mult2: f.pow_rational(&e2),
        }
    }

    /// Group multiplication: the product `self * other` where the leftmost
    /// factor acts first (innermost). The composite multiplies `y_i` by
    /// `other`'s multiplier times `self`'s multiplier evaluated on the
    /// images `y_j * mult_j(other)`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.params, other.params, "parameter mismatch in compose");
        assert_eq!(
            self.truncation(),
            other.truncation(),
            "truncation degree mismatch in compose"
        );
        let s1 = self.mult1.substitute_scaled(&other.mult1, &other.mult2);
        let s2 = self.mult2.substitute_scaled(&other.mult1, &other.mult2);
        GroupElement {
            params: self.params,
            mult1: other.mult1.mul(&s1),
            mult2: other.mult2.mul(&s2),
        }
    }

    /// Group inverse, solved degree by degree as the fixed point of
    /// `m_i = (mult_i evaluated on the inverse's images)^(-1)`.
    pub fn invert(&self) -> Self {
        let l = self.truncation();
        let mut m1 = TruncatedSeries::one(l);
        let mut m2 = TruncatedSeries::one(l);
        for _ in 0..=l {
            let s1 = self.mult1.substitute_scaled(&m1, &m2);
            let s2 = self.mult2.substitute_scaled(&m1, &m2);
            let n1 = s1.pow_rational(&rat(-1));
            let n2 = s2.pow_rational(&rat(-1));
            if n1 == m1 && n2 == m2 {
                break;
            }
            m1 = n1;
            m2 = n2;
        }
        GroupElement {
            params: self.params,
            mult1: m1,
            mult2: m2,
        }
    }

    /// True iff both multiplier pairs agree after re-truncation at degree `l`.
    pub fn equal_mod_degree(&self, other: &Self, l: u32) -> bool {
        assert!(
            l <= self.truncation() && l <= other.truncation(),
            "comparison degree exceeds stored truncation"
        );
        self.mult1.truncated(l) == other.mult1.truncated(l)
            && self.mult2.truncated(l) == other.mult2.truncated(l)
    }

    /// Smallest degree at which this element deviates from the identity,
    /// together with the offending monomials; `None` for the identity.
    pub fn first_deviation(&self) -> Option<(u32, Vec<Monomial>)> {
        let mut best: Option<u32> = None;
        let one = TruncatedSeries::one(self.truncation());
        let mut monomials = Vec::new();
        for mult in [&self.mult1, &self.mult2] {
            let dev = mult.sub(&one);
            if let Some(d) = dev.min_degree() {
                if best.map_or(true, |b| d < b) {
                    best = Some(d);
                    monomials.clear();
                }
                if best == Some(d) {
                    for (m, _) in dev.terms() {
                        if m.degree() == d && !monomials.contains(m) {
                            monomials.push(*m);
                        }
                    }
                }
            }
        }
        best.map(|d| (d, monomials))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    fn p(b: u32, c: u32) -> DiagramParams {
        DiagramParams::new(b, c).unwrap()
    }

    fn d(n1: u32, n2: u32) -> Direction {
        Direction::new(n1, n2)
    }

    #[test]
    fn skew_pairing_values() {
        assert_eq!(pairing_skew(Direction::e1(), Direction::e2()), 1);
        assert_eq!(pairing_skew(d(2, 3), d(2, 3)), 0);
        assert_eq!(pairing_skew(d(1, 1), d(1, 0)), -1);
    }

    #[test]
    fn normalized_factor_values() {
        assert_eq!(normalized_factor(d(1, 0), p(3, 5)), rat(5));
        assert_eq!(normalized_factor(d(1, 1), p(2, 2)), rat(2));
        assert_eq!(normalized_factor(d(2, 1), p(1, 2)), rat(1));
        // delta(n) * n lands in (cZ) + (bZ)
        let delta = normalized_factor(d(2, 1), p(1, 2));
        assert_eq!(&delta * rat(2) / rat(2), rat(1)); // first coord / c
        assert_eq!(&delta * rat(1) / rat(1), rat(1)); // second coord / b
    }

    #[test]
    fn g_factor_values() {
        assert_eq!(g_factor(d(1, 1), p(2, 2)), 2);
        assert_eq!(g_factor(d(2, 1), p(1, 2)), 2);
        for k in 1..=4 {
            assert_eq!(g_factor(d(k, k), p(4, 6)), g_factor(d(1, 1), p(4, 6)));
        }
    }

    #[test]
    fn elementary_wall_initial_form() {
        // normal e1, s = 1 at (b, c) = (1, 1): trivial action on y1 and
        // multiplication by 1 + y1 on y2.
        let w = GroupElement::elementary_wall(Direction::e1(), &rat(1), p(1, 1), 4);
        assert!(w.mult1().is_one());
        assert_eq!(
            *w.mult2(),
            TruncatedSeries::one_plus(4, Monomial::new(1, 0))
        );
    }

    #[test]
    fn elementary_wall_diagonal_form() {
        let w = GroupElement::elementary_wall(d(1, 1), &rat(1), p(1, 1), 4);
        let base = TruncatedSeries::one_plus(4, Monomial::new(1, 1));
        assert_eq!(*w.mult1(), base.pow_rational(&rat(-1)));
        assert_eq!(*w.mult2(), base);
    }

    #[test]
    fn elementary_wall_zero_parameter_is_identity() {
        let w = GroupElement::elementary_wall(d(2, 3), &rat(0), p(2, 5), 6);
        assert!(w.is_identity());
    }

    #[test]
    fn compose_with_identity() {
        let params = p(2, 3);
        let x = GroupElement::elementary_wall(d(1, 2), &ratio(1, 3), params, 6);
        let id = GroupElement::identity(params, 6);
        assert_eq!(x.compose(&id), x);
        assert_eq!(id.compose(&x), x);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let w = GroupElement::elementary_wall(d(1, 1), &rat(3), p(1, 1), 6);
        assert!(w.compose(&w.invert()).is_identity());
        assert!(w.invert().compose(&w).is_identity());
    }

    #[test]
    fn pentagon_golden_convention_test() {
        // At (b, c) = (1, 1) the product of the two initial elementary walls
        // taken as "e2 first, then e1" must equal "e1, then (1,1), then e2".
        // This pins the composition-order convention; a flipped convention
        // produces the mirror image and must fail here.
        let params = p(1, 1);
        let l = 6;
        let e1 = GroupElement::elementary_wall(Direction::e1(), &rat(1), params, l);
        let e2 = GroupElement::elementary_wall(Direction::e2(), &rat(1), params, l);
        let mid = GroupElement::elementary_wall(d(1, 1), &rat(1), params, l);
        let lhs = e2.compose(&e1);
        let rhs = e1.compose(&mid).compose(&e2);
        assert_eq!(lhs, rhs);
        for deg in 0..=l {
            assert!(lhs.equal_mod_degree(&rhs, deg));
        }
    }

    #[test]
    fn pentagon_relation_all_small_primitive_pairs() {
        // For primitive n, n' with s = {n', n} != 0 and degrees <= 3:
        // psi[n']^(1/s) psi[n]^(1/s) = psi[n]^(1/s) psi[n+n']^(1/s) psi[n']^(1/s)
        // in the representation at truncation 8. The elementary-wall
        // parameter for psi[m]^t is t / delta(m).
        let l = 8;
        for (pb, pc) in [(1, 1), (2, 3)] {
            let params = p(pb, pc);
            let dirs: Vec<Direction> = (0..=3u32)
                .flat_map(|a| (0..=3u32).map(move |b| (a, b)))
                .filter(|&(a, b)| (a, b) != (0, 0) && a + b <= 3)
                .map(|(a, b)| d(a, b))
                .filter(|n| n.is_primitive())
                .collect();
            let psi = |n: Direction, t: &Rat| {
                let s_param = t / normalized_factor(n, params);
                GroupElement::elementary_wall(n, &s_param, params, l)
            };
            for &n in &dirs {
                for &np in &dirs {
                    let s = pairing_skew(n, np);
                    if s == 0 {
                        continue;
                    }
                    let t = ratio(1, s);
                    let sum = d(n.n1() + np.n1(), n.n2() + np.n2());
                    let lhs = psi(np, &t).compose(&psi(n, &t));
                    let rhs = psi(n, &t).compose(&psi(sum, &t)).compose(&psi(np, &t));
                    assert_eq!(lhs, rhs, "pentagon failed at n={n}, n'={np}");
                }
            }
        }
    }

    #[test]
    fn parallel_walls_commute() {
        let params = p(2, 3);
        let a = GroupElement::elementary_wall(d(1, 2), &rat(2), params, 8);
        let b = GroupElement::elementary_wall(d(2, 4), &ratio(-1, 2), params, 8);
        assert_eq!(a.compose(&b), b.compose(&a));
    }

    #[test]
    fn elementary_wall_determines_normal_and_parameter() {
        // distinct (n, s) pairs with deg(n) <= 4 give distinct elements
        let params = p(2, 3);
        let l = 6;
        let mut seen: Vec<((u32, u32, Rat), GroupElement)> = Vec::new();
        for n1 in 0..=4u32 {
            for n2 in 0..=4u32 {
                if (n1, n2) == (0, 0) || n1 + n2 > 4 {
                    continue;
                }
                for s in [rat(1), rat(2), ratio(1, 2)] {
                    let w =
                        GroupElement::elementary_wall(d(n1, n2), &s, params, l);
                    for (key, other) in &seen {
                        assert_ne!(
                            &w, other,
                            "collision between ({n1},{n2},{s}) and {key:?}"
                        );
                    }
                    seen.push(((n1, n2, s.clone()), w));
                }
            }
        }
    }

    #[test]
    fn invert_is_parameter_negation_for_elementary_walls() {
        let params = p(2, 2);
        let w = GroupElement::elementary_wall(d(1, 1), &rat(3), params, 6);
        let neg = GroupElement::elementary_wall(d(1, 1), &rat(-3), params, 6);
        assert_eq!(w.invert(), neg);
        assert_eq!(w.invert().invert(), w);
    }

    #[test]
    fn equal_mod_degree_detects_first_deviation() {
        let params = p(1, 1);
        let w = GroupElement::elementary_wall(d(1, 1), &rat(1), params, 4);
        let id = GroupElement::identity(params, 4);
        assert!(w.equal_mod_degree(&id, 1));
        assert!(!w.equal_mod_degree(&id, 2));
        assert_eq!(w.first_deviation().unwrap().0, 2);
    }

    #[test]
    fn compose_is_associative() {
        let params = p(2, 3);
        let l = 6;
        let a = GroupElement::elementary_wall(d(1, 0), &rat(1), params, l);
        let b = GroupElement::elementary_wall(d(1, 1), &ratio(2, 3), params, l);
        let c = GroupElement::elementary_wall(d(0, 1), &rat(-1), params, l);
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }
}
