//! The factorization engine and the scattering diagram it produces.
//!
//! The product of the two initial wall elements admits a unique ordered
//! factorization into wall elements with normals of ascending slope. The
//! engine recovers it degree by degree: at each total degree `l` it forms
//! the ordered product of the walls found so far, composes its inverse with
//! the target, and reads the new degree-`l` exponents off the leading terms
//! of the residual.
//!
//! The resulting exponent table induces a scattering diagram whose walls are
//! rays from the origin, and path-ordered products across those rays are
//! evaluated by exact angular sweeps: ray directions are integer vectors and
//! every comparison is an exact cross-product test, so consistency checks
//! involve no floating point anywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num::traits::{One, Zero};

use crate::group::{normalized_factor, pairing_skew, DiagramParams, Direction, GroupElement};
use crate::ratio::{rat, Rat};
use crate::series::{Monomial, TruncatedSeries};
use crate::{Error, Result};

/// The wall exponents of a diagram at parameters `(b, c)`, truncated at a
/// total degree bound: a map `n -> u_hat(n)` over nonzero entries only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WallExponentTable {
    params: DiagramParams,
    truncation: u32,
    u_hat: BTreeMap<Direction, Rat>,
}

impl WallExponentTable {
    fn new(params: DiagramParams, truncation: u32) -> Self {
        WallExponentTable {
            params,
            truncation,
            u_hat: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> DiagramParams {
        self.params
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// The normalized exponent `u_hat(n)` (zero when `n` carries no wall).
    pub fn u_hat(&self, n: Direction) -> Rat {
        self.u_hat.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    /// The raw exponent `u(n) = u_hat(n) * delta(n)`.
    pub fn u(&self, n: Direction) -> Rat {
        self.u_hat(n) * normalized_factor(n, self.params)
    }

    /// The rescaled exponent `U(n) = k * u(n) / (b c)` where `k = gcd(n)`,
    /// so that `u_hat(n) = g(n0) * U(n)` for the primitive `n0` under `n`.
    pub fn big_u(&self, n: Direction) -> Rat {
        let bc = i64::from(self.params.b()) * i64::from(self.params.c());
        self.u(n) * rat(i64::from(n.gcd())) / rat(bc)
    }

    /// Overwrites one entry; a zero value removes it. Intended for building
    /// perturbed tables in consistency experiments.
    pub fn set_u_hat(&mut self, n: Direction, value: Rat) {
        if value.is_zero() {
            self.u_hat.remove(&n);
        } else {
            self.u_hat.insert(n, value);
        }
    }

    /// Nonzero entries in `(total degree, n1)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&Direction, &Rat)> {
        self.u_hat.iter()
    }

    /// Directions carrying a nonzero exponent, in `(total degree, n1)` order.
    pub fn directions(&self) -> impl Iterator<Item = &Direction> {
        self.u_hat.keys()
    }

    /// Primitive directions under which some nonzero exponent lives.
    pub fn primitive_directions(&self) -> Vec<Direction> {
        let set: BTreeSet<Direction> = self.u_hat.keys().map(|n| n.primitive()).collect();
        set.into_iter().collect()
    }

    /// Rebuilds a table from stored entries.
    pub fn from_entries<I>(params: DiagramParams, truncation: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Direction, Rat)>,
    {
        let mut t = Self::new(params, truncation);
        for (n, v) in entries {
            if n.degree() > truncation {
                return Err(Error::DegreeOutOfRange(n.degree(), truncation));
            }
            t.set_u_hat(n, v);
        }
        Ok(t)
    }

    /// The same table with everything above degree `l` dropped.
    pub fn restricted(&self, l: u32) -> Result<Self> {
        if l > self.truncation {
            return Err(Error::DegreeOutOfRange(l, self.truncation));
        }
        let mut t = Self::new(self.params, l);
        for (n, v) in &self.u_hat {
            if n.degree() <= l {
                t.u_hat.insert(*n, v.clone());
            }
        }
        Ok(t)
    }

    /// The wall function attached to a primitive direction at the table's
    /// truncation degree: `prod_k (1 + y^(k n0))^(u_hat(k n0))`.
    pub fn wall_function(&self, n0: Direction) -> TruncatedSeries {
        self.wall_function_at(n0, self.truncation)
    }

    /// The wall function truncated at degree `l <= truncation`.
    pub fn wall_function_at(&self, n0: Direction, l: u32) -> TruncatedSeries {
        assert!(n0.is_primitive(), "wall functions attach to primitive directions");
        let mut f = TruncatedSeries::one(l);
        let step = n0.degree();
        let mut k = 1u32;
        while k * step <= l {
            let kn = n0.scaled(k);
            let uh = self.u_hat(kn);
            if !uh.is_zero() {
                f = f.mul(&TruncatedSeries::one_plus(l, kn.monomial()).pow_rational(&uh));
            }
            k += 1;
        }
        f
    }
}

/// The product of the two initial wall elements, the element every ordered
/// factorization must reproduce. Written left to right it is "the `e2` wall,
/// then the `e1` wall", with the leftmost factor acting first.
pub fn target_element(params: DiagramParams, l: u32) -> GroupElement {
    let one = Rat::one();
    let w2 = GroupElement::elementary_wall(Direction::e2(), &one, params, l);
    let w1 = GroupElement::elementary_wall(Direction::e1(), &one, params, l);
    w2.compose(&w1)
}

/// The ordered product of all wall elements in the table, normals sorted by
/// ascending slope (`e1` first, `e2` last), at the table's truncation.
pub fn ordered_product(table: &WallExponentTable) -> GroupElement {
    ordered_product_at(table, table.truncation())
}

/// The ordered product truncated at degree `l`.
pub fn ordered_product_at(table: &WallExponentTable, l: u32) -> GroupElement {
    let params = table.params();
    let mut prims = table.primitive_directions();
    // ascending slope: a comes before b iff {a, b} > 0
    prims.sort_by(|a, b| 0.cmp(&pairing_skew(*a, *b)));
    let mut acc = GroupElement::identity(params, l);
    for n0 in prims {
        let f = table.wall_function_at(n0, l);
        let wall = GroupElement::from_wall_function(n0, &f, params);
        acc = acc.compose(&wall);
    }
    acc
}

/// Computes the full wall-exponent table at `(b, c)` up to total degree `l`
/// by degree-by-degree factorization of the target element.
pub fn factorize(params: DiagramParams, l: u32) -> Result<WallExponentTable> {
    if l < 1 {
        return Err(Error::TruncationTooSmall { min: 1, got: l });
    }
    let mut table = WallExponentTable::new(params, l);
    table.set_u_hat(Direction::e1(), Rat::one());
    table.set_u_hat(Direction::e2(), Rat::one());
    for deg in 2..=l {
        let target = target_element(params, deg);
        let known = ordered_product_at(&table, deg);
        // the two elements agree below this degree, so the residual
        // known^(-1) * target has multipliers 1 + (target_i - known_i) in
        // its leading degree and the new exponents can be read off the
        // plain difference
        let dev1 = target.mult1().sub(known.mult1());
        let dev2 = target.mult2().sub(known.mult2());
        debug_assert!(dev1.min_degree().map_or(true, |d| d >= deg));
        debug_assert!(dev2.min_degree().map_or(true, |d| d >= deg));
        for n1 in 0..=deg {
            let n = Direction::new(n1, deg - n1);
            let delta = normalized_factor(n, params);
            let m = n.monomial();
            let u_hat = if n1 > 0 {
                dev2.coeff(m) / (&delta * rat(i64::from(n1)))
            } else {
                -dev1.coeff(m) / (&delta * rat(i64::from(deg)))
            };
            if !u_hat.is_zero() {
                table.set_u_hat(n, u_hat);
            }
        }
    }
    assert_eq!(
        ordered_product(&table),
        target_element(params, l),
        "ordered product fails to reproduce the target at degree {l}"
    );
    Ok(table)
}

/// Sweep orientation for path-ordered products.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    Ccw,
    Cw,
}

/// One wall of the diagram: a ray from the origin with a normal direction
/// and a wall function.
#[derive(Clone, Debug)]
pub struct Wall {
    normal: Direction,
    ray: (i64, i64),
    function: TruncatedSeries,
}

impl Wall {
    pub fn normal(&self) -> Direction {
        self.normal
    }

    /// Primitive integer direction vector of the supporting ray.
    pub fn ray(&self) -> (i64, i64) {
        self.ray
    }

    pub fn function(&self) -> &TruncatedSeries {
        &self.function
    }
}

/// A rank-2 scattering diagram truncated at a total degree bound: the two
/// initial line walls (stored as two rays each) plus one ray per interior
/// primitive direction with a nontrivial wall function.
#[derive(Clone, Debug)]
pub struct ScatteringDiagram {
    params: DiagramParams,
    truncation: u32,
    walls: Vec<Wall>,
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    i128::from(a.0) * i128::from(b.1) - i128::from(a.1) * i128::from(b.0)
}

fn dot(a: (i64, i64), b: (i64, i64)) -> i128 {
    i128::from(a.0) * i128::from(b.0) + i128::from(a.1) * i128::from(b.1)
}

fn same_ray(a: (i64, i64), b: (i64, i64)) -> bool {
    cross(a, b) == 0 && dot(a, b) > 0
}

/// Strict "comes earlier" in the counterclockwise sweep starting just after
/// direction `s`. Neither argument may point along `s`.
fn ccw_before(s: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    let half = |v: (i64, i64)| u8::from(cross(s, v) <= 0);
    match half(a).cmp(&half(b)) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => cross(a, b) > 0,
    }
}

impl ScatteringDiagram {
    /// Builds the diagram induced by a wall-exponent table. The initial
    /// walls are full lines (two rays each); an interior primitive `n0`
    /// contributes the ray spanned by `(-c n2, b n1)`.
    pub fn from_table(table: &WallExponentTable) -> Self {
        let params = table.params();
        let l = table.truncation();
        let mut walls = Vec::new();
        let f1 = table.wall_function(Direction::e1());
        for ray in [(0i64, 1i64), (0, -1)] {
            walls.push(Wall {
                normal: Direction::e1(),
                ray,
                function: f1.clone(),
            });
        }
        let f2 = table.wall_function(Direction::e2());
        for ray in [(1i64, 0i64), (-1, 0)] {
            walls.push(Wall {
                normal: Direction::e2(),
                ray,
                function: f2.clone(),
            });
        }
        for n0 in table.primitive_directions() {
            if n0.n1() == 0 || n0.n2() == 0 {
                continue;
            }
            let f = table.wall_function(n0);
            if f.is_one() {
                continue;
            }
            let rx = -i64::from(params.c()) * i64::from(n0.n2());
            let ry = i64::from(params.b()) * i64::from(n0.n1());
            let g = num::integer::gcd(rx.unsigned_abs(), ry.unsigned_abs()) as i64;
            walls.push(Wall {
                normal: n0,
                ray: (rx / g, ry / g),
                function: f,
            });
        }
        ScatteringDiagram {
            params,
            truncation: l,
            walls,
        }
    }

    /// Factorizes at `(b, c)` up to degree `l` and builds the diagram.
    pub fn build(params: DiagramParams, l: u32) -> Result<Self> {
        Ok(Self::from_table(&factorize(params, l)?))
    }

    pub fn params(&self) -> DiagramParams {
        self.params
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    fn check_endpoint(&self, v: (i64, i64)) -> Result<()> {
        if v == (0, 0) {
            return Err(Error::ZeroEndpoint);
        }
        if self.walls.iter().any(|w| same_ray(w.ray, v)) {
            return Err(Error::EndpointOnRay(v.0, v.1));
        }
        Ok(())
    }

    /// The wall element for one crossing: the element of the wall's parallel
    /// subgroup, inverted when the crossing sign is negative. A ray crossed
    /// counterclockwise at direction `m` has sign `+1` iff
    /// `-m2 n1 b + m1 n2 c < 0`, the exact sign of the pairing between the
    /// rotated tangent and the normal.
    fn crossing_element(&self, wall: &Wall, ccw: bool) -> GroupElement {
        let n = wall.normal;
        let val = -i128::from(wall.ray.1) * i128::from(n.n1()) * i128::from(self.params.b())
            + i128::from(wall.ray.0) * i128::from(n.n2()) * i128::from(self.params.c());
        debug_assert!(val != 0, "crossing sign undefined on the wall itself");
        let positive = (val < 0) == ccw;
        // the inverse of a wall element is the element of the reciprocal
        // wall function, which is far cheaper than a generic inversion
        let f = if positive {
            wall.function.clone()
        } else {
            wall.function.pow_rational(&rat(-1))
        };
        GroupElement::from_wall_function(n, &f, self.params)
    }

    fn sweep(&self, s: (i64, i64), walls: Vec<&Wall>, ccw: bool) -> GroupElement {
        let mut ordered = walls;
        ordered.sort_by(|a, b| {
            if ccw_before(s, a.ray, b.ray) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        if !ccw {
            ordered.reverse();
        }
        let mut acc = GroupElement::identity(self.params, self.truncation);
        for w in ordered {
            acc = acc.compose(&self.crossing_element(w, ccw));
        }
        acc
    }

    /// Path-ordered product along the arc from direction `start` to
    /// direction `end` in the given orientation (always less than a full
    /// turn). Crossings compose left to right in crossing order, the
    /// earliest acting first. Both endpoints must avoid all wall rays.
    pub fn path_ordered_product(
        &self,
        start: (i64, i64),
        end: (i64, i64),
        orientation: Orientation,
    ) -> Result<GroupElement> {
        self.check_endpoint(start)?;
        self.check_endpoint(end)?;
        if same_ray(start, end) {
            return Ok(GroupElement::identity(self.params, self.truncation));
        }
        // the cw arc from start to end crosses exactly the rays of the ccw
        // arc from end to start, in reverse order and with opposite signs
        let (s, e, ccw) = match orientation {
            Orientation::Ccw => (start, end, true),
            Orientation::Cw => (end, start, false),
        };
        let crossed: Vec<&Wall> = self
            .walls
            .iter()
            .filter(|w| ccw_before(s, w.ray, e))
            .collect();
        Ok(self.sweep(s, crossed, ccw))
    }

    /// Path-ordered product around a full loop based at `start`.
    pub fn full_loop(&self, start: (i64, i64), orientation: Orientation) -> Result<GroupElement> {
        self.check_endpoint(start)?;
        let all: Vec<&Wall> = self.walls.iter().collect();
        Ok(self.sweep(start, all, orientation == Orientation::Ccw))
    }
}

/// Outcome of a consistency check: whether the full counterclockwise loop
/// is the identity modulo the truncation degree, with the first failing
/// degree and its monomials when it is not.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub params: DiagramParams,
    pub truncation: u32,
    pub consistent: bool,
    pub first_failure_degree: Option<u32>,
    pub failing_monomials: Vec<Monomial>,
}

/// Checks diagram consistency for the given table: the full loop based at
/// `(1, -1)` (a direction never on a wall ray) must act trivially.
pub fn check_table_consistency(table: &WallExponentTable) -> Result<ConsistencyReport> {
    let diagram = ScatteringDiagram::from_table(table);
    let loop_element = diagram.full_loop((1, -1), Orientation::Ccw)?;
    let failure = loop_element.first_deviation();
    Ok(ConsistencyReport {
        params: table.params(),
        truncation: table.truncation(),
        consistent: failure.is_none(),
        first_failure_degree: failure.as_ref().map(|(d, _)| *d),
        failing_monomials: failure.map(|(_, ms)| ms).unwrap_or_default(),
    })
}

/// Factorizes at `(b, c)` up to degree `l` and checks consistency.
pub fn check_consistency(params: DiagramParams, l: u32) -> Result<ConsistencyReport> {
    check_table_consistency(&factorize(params, l)?)
}

/// An in-memory cache of factorization results, keyed by `(b, c)` and
/// keeping the deepest truncation computed so far for each key. Safe to
/// share across threads; [`ComputeCache::warm`] fills it in parallel.
#[derive(Default)]
pub struct ComputeCache {
    tables: Mutex<HashMap<(u32, u32), Arc<WallExponentTable>>>,
}

impl ComputeCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table for `(b, c)` with truncation at least `l`, computing and
    /// storing it if nothing deep enough is cached.
    pub fn table(&self, params: DiagramParams, l: u32) -> Result<Arc<WallExponentTable>> {
        let key = (params.b(), params.c());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            if t.truncation() >= l {
                return Ok(Arc::clone(t));
            }
        }
        let fresh = Arc::new(factorize(params, l)?);
        let mut guard = self.tables.lock().unwrap();
        let slot = guard.entry(key).or_insert_with(|| Arc::clone(&fresh));
        if slot.truncation() < l {
            *slot = Arc::clone(&fresh);
        }
        Ok(Arc::clone(slot))
    }

    /// Precomputes tables for many `(params, l)` jobs, in parallel when the
    /// `parallel` feature is on.
    pub fn warm(&self, jobs: &[(DiagramParams, u32)]) -> Result<()> {
        // keep only the deepest request per key
        let mut deepest: HashMap<(u32, u32), (DiagramParams, u32)> = HashMap::new();
        for &(p, l) in jobs {
            let e = deepest.entry((p.b(), p.c())).or_insert((p, l));
            if l > e.1 {
                e.1 = l;
            }
        }
        let jobs: Vec<(DiagramParams, u32)> = deepest.into_values().collect();
        let results = crate::par::map(jobs, |(p, l)| factorize(p, l));
        for r in results {
            let t = r?;
            let key = (t.params().b(), t.params().c());
            let mut guard = self.tables.lock().unwrap();
            let t = Arc::new(t);
            let slot = guard.entry(key).or_insert_with(|| Arc::clone(&t));
            if slot.truncation() < t.truncation() {
                *slot = t;
            }
        }
        Ok(())
    }
}
