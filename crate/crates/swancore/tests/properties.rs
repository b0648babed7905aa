//! Randomized structural invariants.
//!
//! Each property is an exact identity over rationals or cyclotomic
//! integers, so every sampled case is checked at zero tolerance.

use std::sync::Arc;

use num::Signed;
use once_cell::sync::Lazy;
use proptest::prelude::*;

use swancore::classfn::ClassFunction;
use swancore::conductor::end_of;
use swancore::cyclotomic::Cyclotomic;
use swancore::dixon::character_table;
use swancore::gl2::{ball_stabilizer, full_group};
use swancore::group::FinGroup;
use swancore::logpair::LogPair;
use swancore::newton::{lower_hull, ValPair, ValuedPoly};
use swancore::profile::{delta_by_elements, sweep};
use swancore::ramify::{depth_pair, filtration_of};
use swancore::reptypes::principal_members;
use swancore::ring::{ResidueRing, RingKind};
use swancore::{rat, ratz, Rat};

struct Fixture {
    ring: Arc<ResidueRing>,
    k: Arc<FinGroup>,
    ball: Arc<FinGroup>,
    k_table: Vec<ClassFunction>,
    ball_table: Vec<ClassFunction>,
}

fn fixture(p: u32, n: u32) -> Fixture {
    let ring = Arc::new(ResidueRing::new(p, 1, n, RingKind::Mixed).unwrap());
    let k = Arc::new(full_group(&ring));
    let ball = Arc::new(ball_stabilizer(&ring));
    let k_table = character_table(&k);
    let ball_table = character_table(&ball);
    Fixture { ring, k, ball, k_table, ball_table }
}

static F3: Lazy<Fixture> = Lazy::new(|| fixture(3, 1));
static Z4: Lazy<Fixture> = Lazy::new(|| fixture(2, 2));

fn rational_class_function(group: &Arc<FinGroup>, coeffs: &[i64]) -> ClassFunction {
    let values = coeffs.iter().map(|&c| Cyclotomic::from_rat(1, ratz(c))).collect();
    ClassFunction::new(Arc::clone(group), values)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frobenius_reciprocity_holds(
        coeffs in prop::collection::vec(-3i64..=3, 6),
        which in 0usize..8,
    ) {
        let fx = &*F3;
        let f = rational_class_function(&fx.ball, &coeffs);
        let chi = &fx.k_table[which];
        let lhs = f.induce_to(&fx.k).pairing(chi);
        let rhs = f.pairing(&chi.restrict_to(&fx.ball));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn conjugation_transport_preserves_pairings(
        g_idx in 0usize..48,
        which in 0usize..8,
    ) {
        let fx = &*F3;
        let g = fx.k.elems[g_idx];
        let target = Arc::new(
            fx.k.subgroup_where("moved", |x| fx.ball.contains(fx.k.conjugate(g, x))),
        );
        let ring = Arc::clone(&fx.ring);
        let end = end_of(&fx.ball, |m| depth_pair(&ring, m));
        let moved = end.sw_fn.conjugate_by(&target, &fx.k, g);
        let chi = &fx.k_table[which];
        prop_assert_eq!(
            end.sw_fn.pairing_rat(&chi.restrict_to(&fx.ball)),
            moved.pairing_rat(&chi.restrict_to(&target))
        );
        let mut before: Vec<Rat> =
            fx.ball.elems.iter().map(|&x| end.sw_fn.value_at(x).expect_rat("sw")).collect();
        let mut after: Vec<Rat> =
            target.elems.iter().map(|&x| moved.value_at(x).expect_rat("sw")).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn route_equality_for_virtual_characters(
        coeffs in prop::collection::vec(0i64..=2, 8),
    ) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let fx = &*Z4;
        let mut chi = ClassFunction::trivial(&fx.ball).scale(&ratz(0));
        for (c, irr) in coeffs.iter().zip(&fx.ball_table) {
            chi = chi.add(&irr.scale(&ratz(*c)));
        }
        let ring = Arc::clone(&fx.ring);
        let end = end_of(&fx.ball, |m| depth_pair(&ring, m));
        let (sw, delta) = end.pairing_conductor(&chi);
        let breaks = end.break_conductor(&chi);
        prop_assert_eq!(sw, breaks.sw);
        prop_assert_eq!(delta, breaks.delta);
    }

    #[test]
    fn profile_agrees_with_element_sums(
        which in 0usize..8,
        num in 1i64..=60,
        den in 1i64..=20,
    ) {
        let fx = &*Z4;
        let ring = Arc::clone(&fx.ring);
        let filt = filtration_of(&fx.ball, |m| depth_pair(&ring, m));
        let chi = &fx.ball_table[which];
        let profile = sweep(&filt, chi, &ratz(2));
        let s = rat(num, 30 * den);
        if let Some(value) = profile.delta_at(&s) {
            prop_assert_eq!(value, delta_by_elements(&filt, chi, &s));
        }
    }

    #[test]
    fn fixed_spaces_grow_down_principal_levels(which in 0usize..8) {
        let fx = &*Z4;
        let chi = &fx.k_table[which];
        let mut prev = ratz(-1);
        for r in 0..=fx.ring.n {
            let dim = chi.average_over(&principal_members(&fx.ring, &fx.k, r));
            prop_assert!(dim.is_integer() && !dim.is_negative());
            prop_assert!(prev <= dim);
            prev = dim;
        }
        prop_assert_eq!(prev, chi.degree());
    }

    #[test]
    fn slide_composes(
        fnum in 0i64..=24, fden in 1i64..=6, sharp in -12i64..=12,
        s1n in 0i64..=10, s1d in 1i64..=5,
        s2n in 0i64..=10, s2d in 1i64..=5,
    ) {
        let p = LogPair::new(rat(fnum, fden), sharp);
        let s1 = rat(s1n, s1d);
        let s2 = rat(s2n, s2d);
        prop_assert_eq!(p.slide(&(&s1 + &s2)), p.slide(&s1).slide(&s2));
    }

    #[test]
    fn hull_lies_on_or_below_every_point(
        points in prop::collection::btree_map(
            0u64..24,
            (-15i64..=15, 1i64..=4, -15i64..=15, 1i64..=4),
            2..8,
        ),
    ) {
        let poly = ValuedPoly::new(
            points
                .iter()
                .map(|(&x, &(a, b, c, d))| (x, (rat(a, b), rat(c, d)))),
        );
        let hull = lower_hull(&poly);
        for (x, v) in poly.points() {
            let below = hull_value_at(&hull.vertices, x);
            prop_assert!(below <= v, "hull exceeds a support point at {x}");
        }
        // vertices are support points
        for (x, v) in &hull.vertices {
            prop_assert_eq!(poly.points().iter().find(|(px, _)| px == x).map(|(_, pv)| pv.clone()), Some(v.clone()));
        }
    }

    #[test]
    fn points_above_the_hull_leave_it_unchanged(
        q in prop::sample::select(vec![2u64, 3]),
        j in 1u64..12,
        bump_n in 1i64..=8,
        bump_d in 1i64..=3,
    ) {
        let poly = ValuedPoly::model(q);
        let hull = lower_hull(&poly);
        let span = hull.vertices.last().unwrap().0;
        prop_assume!(j <= span);
        let at = hull_value_at(&hull.vertices, j);
        let lifted = (&at.0 + rat(bump_n, bump_d), at.1.clone());
        let again = lower_hull(&ValuedPoly::new(
            poly.points().into_iter().chain([(j, lifted)]),
        ));
        prop_assert_eq!(hull.vertices, again.vertices);
    }

    #[test]
    fn cyclotomic_roots_form_a_cycle(m in 1u32..=24, j in 0u32..24, k in 0u32..24) {
        let j = j % m;
        let k = k % m;
        let prod = Cyclotomic::root(m, j).mul(&Cyclotomic::root(m, k));
        prop_assert!(prod.sub(&Cyclotomic::root(m, (j + k) % m)).is_zero());
        let back = Cyclotomic::root(m, j).conj();
        prop_assert!(back.sub(&Cyclotomic::root(m, (m - j) % m)).is_zero());
        if m > 1 {
            let mut sum = Cyclotomic::zero(m);
            for t in 0..m {
                sum = sum.add(&Cyclotomic::root(m, t));
            }
            prop_assert!(sum.is_zero());
        }
    }

    #[test]
    fn valuation_is_ultrametric(
        spec in prop::sample::select(vec![
            "2:1:1:mixed", "2:1:2:mixed", "2:1:3:mixed",
            "3:1:1:mixed", "3:1:2:mixed", "2:2:1:equal", "2:1:2:equal",
        ]),
        a_raw in 0u64..1024,
        b_raw in 0u64..1024,
    ) {
        let ring = ResidueRing::parse(spec).unwrap();
        let a = (a_raw % ring.size as u64) as u16;
        let b = (b_raw % ring.size as u64) as u16;
        let va = ring.val(a);
        let vb = ring.val(b);
        prop_assert_eq!(ring.val(ring.mul(a, b)), (va + vb).min(ring.n));
        prop_assert!(ring.val(ring.add(a, b)) >= va.min(vb));
        prop_assert_eq!(ring.is_unit(a), va == 0);
    }
}

/// Lexicographic hull height at `x`, interpolated on the segment that
/// contains it.
fn hull_value_at(vertices: &[(u64, ValPair)], x: u64) -> ValPair {
    let i = vertices
        .windows(2)
        .position(|w| w[0].0 <= x && x <= w[1].0)
        .expect("x within the hull span");
    let (x0, v0) = &vertices[i];
    let (x1, v1) = &vertices[i + 1];
    let t = rat((x - x0) as i64, (x1 - x0) as i64);
    (&v0.0 + (&v1.0 - &v0.0) * &t, &v0.1 + (&v1.1 - &v0.1) * &t)
}
