//! Rank-two Newton polygon calculus over the boundary valuation.
//!
//! Coefficient valuations are pairs (pi-adic, T-adic) ordered
//! lexicographically. The polynomial model for the degree-q^2 isogeny is
//! `pi X + T X^q + X^(q^2)`; its lower hulls, iterated through the torsion
//! tower, re-derive the depth values that the ramification module produces
//! from a closed formula. The two routes share no code, so their agreement
//! is a genuine cross-check.
//!
//! The residue tower and the factorization identity over F_q[T] are exact
//! polynomial computations; valuations of tower uniformizers are tracked as
//! rational bookkeeping without constructing field extensions.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{rat, ratz, Rat};

/// Valuation pair (pi-adic, T-adic), compared lexicographically.
pub type ValPair = (Rat, Rat);

/// A polynomial remembered only through its support: exponent to
/// coefficient valuation. Colliding points keep the smaller valuation.
#[derive(Clone, Debug)]
pub struct ValuedPoly {
    support: BTreeMap<u64, ValPair>,
}

impl ValuedPoly {
    pub fn new(points: impl IntoIterator<Item = (u64, ValPair)>) -> Self {
        let mut support: BTreeMap<u64, ValPair> = BTreeMap::new();
        for (x, v) in points {
            match support.get(&x) {
                Some(old) if *old <= v => {}
                _ => {
                    support.insert(x, v);
                }
            }
        }
        ValuedPoly { support }
    }

    /// The isogeny model `pi X + T X^q + X^(q^2)`.
    pub fn model(q: u64) -> Self {
        ValuedPoly::new([
            (1, (ratz(1), ratz(0))),
            (q, (ratz(0), ratz(1))),
            (q * q, (ratz(0), ratz(0))),
        ])
    }

    /// Adds a term `c pi X^j` with `val c = (a, b)`, both nonnegative.
    pub fn perturb(&self, j: u64, c_val: ValPair) -> Self {
        assert!(!c_val.0.is_negative() && !c_val.1.is_negative());
        let v = (c_val.0 + ratz(1), c_val.1);
        ValuedPoly::new(self.support.clone().into_iter().chain([(j, v)]))
    }

    /// Shifts the constant coefficient to valuation `v`, as in solving
    /// `poly(X) = u` for a value `u` of valuation `v`.
    pub fn with_constant(&self, v: ValPair) -> Self {
        ValuedPoly::new(self.support.clone().into_iter().chain([(0, v)]))
    }

    pub fn points(&self) -> Vec<(u64, ValPair)> {
        self.support.iter().map(|(&x, v)| (x, v.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: ValPair,
    /// Horizontal span, which is also the number of roots with valuation
    /// equal to the negated slope.
    pub length: u64,
}

#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u64, ValPair)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Valuation of the roots on the leftmost segment.
    pub fn first_root_val(&self) -> ValPair {
        let s = &self.segments[0].slope;
        (-&s.0, -&s.1)
    }

    pub fn negative_segments(&self) -> Vec<Segment> {
        let zero = (Rat::zero(), Rat::zero());
        self.segments.iter().filter(|s| s.slope < zero).cloned().collect()
    }
}

fn slope_between(a: &(u64, ValPair), b: &(u64, ValPair)) -> ValPair {
    assert!(b.0 > a.0);
    let dx = ratz((b.0 - a.0) as i64);
    ((&b.1 .0 - &a.1 .0) / &dx, (&b.1 .1 - &a.1 .1) / &dx)
}

/// Lower convex hull of the support, collinear interior points merged.
pub fn lower_hull(poly: &ValuedPoly) -> NewtonPolygon {
    let pts = poly.points();
    assert!(pts.len() >= 2, "polygon needs at least two support points");
    let mut hull: Vec<(u64, ValPair)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            if slope_between(a, b) >= slope_between(b, &p) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let segments: Vec<Segment> = hull
        .windows(2)
        .map(|w| Segment { slope: slope_between(&w[0], &w[1]), length: w[1].0 - w[0].0 })
        .collect();
    for w in segments.windows(2) {
        assert!(w[0].slope < w[1].slope, "hull slopes increase strictly");
    }
    let span: u64 = segments.iter().map(|s| s.length).sum();
    assert_eq!(span, hull.last().unwrap().0 - hull[0].0, "segment lengths cover the span");
    NewtonPolygon { vertices: hull, segments }
}

/// One torsion level: depth of the level structure, its raw local count,
/// and the count normalized to level n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelValuation {
    pub flat: Rat,
    pub raw_sharp: i64,
    pub normalized_sharp: i64,
}

#[derive(Clone, Debug)]
pub struct LevelValuations {
    pub levels: Vec<LevelValuation>,
    /// Normalized counts of the complementary level structures v_m.
    pub v_normalized_sharps: Vec<i64>,
}

/// Valuations of the level structures u_1..u_n, flats read off iterated
/// Newton polygons of the isogeny model and sharps from the local count
/// recursion. Nothing here consults the ramification module.
pub fn level_valuations(q: u64, n: u32) -> LevelValuations {
    assert!(q >= 2 && n >= 1);
    let phi = ValuedPoly::model(q);

    // u_1 is a root of the model itself; u_(m+1) solves phi(X) = u_m
    let mut flats: Vec<Rat> = Vec::new();
    let mut current = lower_hull(&phi);
    assert_eq!(current.segments[0].length, q - 1, "q-1 nonzero roots at the first level");
    let mut val = current.first_root_val();
    for _ in 0..n {
        flats.push(val.0.clone());
        current = lower_hull(&phi.with_constant(val));
        assert_eq!(current.segments[0].length, q, "each value pulls back to q roots");
        val = current.first_root_val();
    }

    // raw counts: #u_1 = -q, and each level multiplies the defect against
    // the T-multisection count #T_m = (q-1) q^(2m-1)
    let mut raw: Vec<i64> = Vec::new();
    let mut acc: i64 = -(q as i64);
    for m in 1..=n {
        raw.push(acc);
        let t_count = (q as i64 - 1) * (q as i64).pow(2 * m - 1);
        acc = (q as i64) * (acc - t_count);
    }

    let levels = flats
        .into_iter()
        .zip(raw)
        .enumerate()
        .map(|(idx, (flat, raw_sharp))| {
            let m = idx as u32 + 1;
            let scale = (q as i64).pow(2 * (n - m));
            LevelValuation { flat, raw_sharp, normalized_sharp: raw_sharp * scale }
        })
        .collect();
    let v_normalized_sharps = (1..=n).map(|m| (q as i64).pow(2 * (n - m))).collect();
    LevelValuations { levels, v_normalized_sharps }
}

#[derive(Clone, Debug)]
pub struct TowerStep {
    pub degree: u64,
    pub z_val: Rat,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub steps: Vec<TowerStep>,
    pub total_degree: u64,
}

/// The residue tower: one tame step adjoining a (q-1)-st root of T, then
/// n-1 Eisenstein steps X^q + T^(q^m) X - z_m. Every polygon must be a
/// single segment; anything else falsifies the tower and is fatal.
pub fn eisenstein_tower(q: u64, n: u32) -> Tower {
    assert!(q >= 2 && n >= 1);
    let mut steps: Vec<TowerStep> = Vec::new();

    let first = ValuedPoly::new([(0, (ratz(0), ratz(1))), (q - 1, (ratz(0), ratz(0)))]);
    let hull = lower_hull(&first);
    assert_eq!(hull.segments.len(), 1, "tame step is a single segment");
    let mut z = hull.first_root_val().1;
    assert_eq!(z, rat(1, q as i64 - 1));
    steps.push(TowerStep { degree: q - 1, z_val: z.clone() });

    for m in 1..n {
        let step = ValuedPoly::new([
            (0, (ratz(0), z.clone())),
            (1, (ratz(0), ratz((q as i64).pow(m)))),
            (q, (ratz(0), ratz(0))),
        ]);
        let hull = lower_hull(&step);
        assert_eq!(hull.segments.len(), 1, "wild step stays Eisenstein");
        let root = hull.first_root_val().1;
        assert_eq!(root, &z / ratz(q as i64), "uniformizer valuation divides by q");
        z = root;
        steps.push(TowerStep { degree: q, z_val: z.clone() });
    }

    let total_degree: u64 = steps.iter().map(|s| s.degree).product();
    let expected = (q - 1) * q.pow(n - 1);
    assert_eq!(total_degree, expected, "tower degree matches the level count");
    Tower { steps, total_degree }
}

/// Sparse polynomial over F_p[T][X]: (X exponent, T exponent) -> coefficient.
type ResiduePoly = BTreeMap<(u64, u64), u64>;

fn smallest_prime_factor(q: u64) -> u64 {
    (2..=q).find(|d| q % d == 0).unwrap()
}

fn rp_add(p: u64, a: &ResiduePoly, b: &ResiduePoly) -> ResiduePoly {
    let mut out = a.clone();
    for (&k, &c) in b {
        let e = out.entry(k).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            out.remove(&k);
        }
    }
    out
}

/// Frobenius power f^(q^e): in characteristic p every coefficient is fixed
/// and exponents scale.
fn rp_frob(f: &ResiduePoly, q: u64, e: u32) -> ResiduePoly {
    let s = q.pow(e);
    f.iter().map(|(&(x, t), &c)| ((x * s, t * s), c)).collect()
}

fn rp_mul_t(f: &ResiduePoly, t_pow: u64) -> ResiduePoly {
    f.iter().map(|(&(x, t), &c)| ((x, t + t_pow), c)).collect()
}

/// Checks the exact identity over F_q[T]: composing the residue of the
/// isogeny with itself n times equals the staircase composition
/// E compose E^(1) compose ... compose E^(n-1) applied to X^(q^n), where
/// E^(i)(X) = T^(q^i) X + X^q.
pub fn residue_factorization_check(q: u64, n: u32) -> bool {
    assert!(q >= 2 && n >= 1);
    let p = smallest_prime_factor(q);

    // left side: f(X) = T X^q + X^(q^2), composed n times
    let mut lhs: ResiduePoly = BTreeMap::from([((1, 0), 1)]);
    for _ in 0..n {
        lhs = rp_add(p, &rp_mul_t(&rp_frob(&lhs, q, 1), 1), &rp_frob(&lhs, q, 2));
    }

    // right side: seed X^(q^n), then apply E^(i) innermost first
    let mut rhs: ResiduePoly = BTreeMap::from([((q.pow(n), 0), 1)]);
    for i in (0..n).rev() {
        rhs = rp_add(p, &rp_mul_t(&rhs, q.pow(i)), &rp_frob(&rhs, q, 1));
    }

    lhs == rhs
}

/// Random perturbations c pi X^j (j >= q, val c >= (0,0)) must leave every
/// negative-slope hull segment of the model untouched.
pub fn slope_stability(q: u64, trials: u32, seed: u64) -> bool {
    let base = ValuedPoly::model(q);
    let reference = lower_hull(&base).negative_segments();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let j = rng.gen_range(q..=q * q + 3);
        let a = ratz(rng.gen_range(0..4));
        let b = ratz(rng.gen_range(0..4));
        let hull = lower_hull(&base.perturb(j, (a, b)));
        if hull.negative_segments() != reference {
            return false;
        }
    }
    true
}
