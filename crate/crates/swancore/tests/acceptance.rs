//! Acceptance gate: nine criteria, one test each, exact arithmetic, zero
//! tolerance.
//!
//! Every expected value is a closed form evaluated here independently of
//! the code under test. Criteria whose published tables a faithful
//! computation contradicts are asserted as published and fail honestly;
//! the oracles suite freezes the honest values alongside.

use std::sync::Arc;
use std::time::{Duration, Instant};

use swancore::conductor::{cohomology, end_of, hom_dims_report, Base, End};
use swancore::dixon::character_table;
use swancore::gl2::{ball_stabilizer, full_group, opposite_stabilizer};
use swancore::group::FinGroup;
use swancore::newton::{
    eisenstein_tower, level_valuations, residue_factorization_check, slope_stability,
};
use swancore::profile::{delta_by_elements, sweep};
use swancore::ramify::{depth_pair, opposite_depth_pair};
use swancore::reptypes::{
    borel_subgroup, iwahori_subgroup, ramified_candidates, u_char, unit_char_exponent, unit_group,
    unramified_candidates,
};
use swancore::ring::ResidueRing;
use swancore::{rat, ratz, Rat};

const FILTRATION_RINGS: [&str; 7] = [
    "2:1:1:mixed",
    "2:1:2:mixed",
    "2:1:3:mixed",
    "3:1:1:mixed",
    "3:1:2:mixed",
    "2:2:1:equal",
    "2:1:2:equal",
];

const CONDUCTOR_RINGS: [&str; 5] =
    ["2:1:1:mixed", "3:1:1:mixed", "2:1:2:mixed", "3:1:2:mixed", "2:2:1:equal"];

const RAMIFIED_RINGS: [&str; 2] = ["2:1:2:mixed", "3:1:2:mixed"];

fn dims(v: &[Rat]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

fn ring(spec: &str) -> Arc<ResidueRing> {
    Arc::new(ResidueRing::parse(spec).unwrap())
}

fn qn(r: &ResidueRing) -> (i64, i64) {
    (r.q as i64, r.n as i64)
}

fn qpow(q: i64, e: i64) -> i64 {
    assert!(e >= 0);
    q.pow(e as u32)
}

fn ball_end(r: &Arc<ResidueRing>) -> (Arc<FinGroup>, End) {
    let ball = Arc::new(ball_stabilizer(r));
    let end = end_of(&ball, |m| depth_pair(r, m));
    (ball, end)
}

fn opposite_end(r: &Arc<ResidueRing>) -> (Arc<FinGroup>, End) {
    let opp = Arc::new(opposite_stabilizer(r));
    let end = end_of(&opp, |m| opposite_depth_pair(r, m));
    (opp, end)
}

#[test]
fn criterion_1_filtration_closed_forms() {
    let t0 = Instant::now();
    for spec in FILTRATION_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let (_, end) = ball_end(&r);
        let filt = &end.filt;
        assert_eq!(filt.jumps.len() as i64, 2 * n - 1, "{spec}: jump count");
        for i in 1..=(2 * n - 1) {
            let jump = &filt.jumps[(i - 1) as usize];
            assert_eq!(
                jump.subgroup_order as i64,
                qpow(q, 2 * n - i),
                "{spec}: subgroup order at jump {i}"
            );
            if i <= n - 1 {
                assert_eq!(jump.pair.flat, ratz(0), "{spec}: flat at shallow jump {i}");
                assert_eq!(jump.pair.sharp, qpow(q, 2 * i) - 1, "{spec}: sharp at jump {i}");
            } else {
                let j = i - n;
                assert_eq!(
                    jump.pair.flat,
                    rat(1, (q - 1) * qpow(q, n - 1 - j)),
                    "{spec}: flat at deep jump {i}"
                );
                assert_eq!(
                    jump.pair.sharp,
                    -(qpow(q, 2 * n - 1) + 1),
                    "{spec}: sharp at deep jump {i}"
                );
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(10), "criterion 1 exceeded its time budget");
    println!("criterion 1: PASS (jump values and subgroup orders on 7 rings in {elapsed:?})");
}

#[test]
fn criterion_2_upper_numbering_closed_forms() {
    for spec in FILTRATION_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let (_, end) = ball_end(&r);
        let upper = end.filt.upper_jumps();
        for i in 1..=(2 * n - 1) {
            let u = &upper[(i - 1) as usize];
            let expected = if i <= n - 1 {
                rat((q + 1) * (qpow(q, i) - 1), q - 1)
            } else {
                rat(-(q + 1), q - 1)
            };
            assert_eq!(u.sharp, expected, "{spec}: upper sharp at jump {i}");
        }
        let top = upper.last().unwrap();
        assert_eq!(top.flat, rat(n * q - n + 1, q - 1), "{spec}: top upper flat");
    }
    println!("criterion 2: PASS (upper numbered sharps and top flat on 7 rings)");
}

#[test]
fn criterion_3_unramified_conductors() {
    let t0 = Instant::now();
    for spec in CONDUCTOR_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let k = Arc::new(full_group(&r));
        let table = character_table(&k);
        let unit_table = character_table(&unit_group(&r));
        let cands = unramified_candidates(&r, &k, &table, &unit_table);
        assert!(!cands.is_empty(), "{spec}: no unramified candidates");
        let (ball, end) = ball_end(&r);
        let expected = (ratz(-(q + 1) * qpow(q, n - 1)), ratz((n * q - n + 1) * qpow(q, n - 1)));
        for chi in &cands {
            let got = end.pairing_conductor(&chi.restrict_to(&ball));
            assert_eq!(got, expected, "{spec}: conductor pair mismatch");
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(300), "criterion 3 exceeded its time budget");
    println!("criterion 3: PASS (every candidate on 5 rings in {elapsed:?})");
}

#[test]
fn criterion_4_ramified_conductors_at_both_ends() {
    let mut bad: Vec<String> = Vec::new();
    for spec in RAMIFIED_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let k = Arc::new(full_group(&r));
        let kp = iwahori_subgroup(&r, &k);
        let table = character_table(&kp);
        let cands = ramified_candidates(&r, &kp, &table);
        assert!(!cands.is_empty(), "{spec}: no ramified candidates");
        let (ball, near) = ball_end(&r);
        let (opp, far) = opposite_end(&r);
        let expected =
            (ratz(-(q + 1) * qpow(q, n - 2)), ratz((n * q - q - n) * qpow(q, n - 2)));
        for (idx, chi) in cands.iter().enumerate() {
            for (end_name, group, end) in [("near", &ball, &near), ("far", &opp, &far)] {
                let got = end.pairing_conductor(&chi.restrict_to(group));
                if got != expected {
                    bad.push(format!(
                        "{spec}: candidate {idx} at the {end_name} end: computed (sw, delta) = ({}, {}), published ({}, {})",
                        got.0, got.1, expected.0, expected.1
                    ));
                }
            }
        }
    }
    assert!(bad.is_empty(), "criterion 4: FAIL\n{}", bad.join("\n"));
    println!("criterion 4: PASS (ramified conductor pairs at both ends)");
}

#[test]
fn criterion_5_cohomology_dimensions() {
    let mut bad: Vec<String> = Vec::new();

    for spec in CONDUCTOR_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let k = Arc::new(full_group(&r));
        let table = character_table(&k);
        let unit_table = character_table(&unit_group(&r));
        let cands = unramified_candidates(&r, &k, &table, &unit_table);
        let (_, end) = ball_end(&r);
        let expected = ratz(2 * qpow(q, n - 1));
        for (idx, chi) in cands.iter().enumerate() {
            let coh = cohomology(Base::Disk, &k, chi, &[&end]);
            if coh.h1p != expected {
                bad.push(format!(
                    "{spec}: unramified candidate {idx}: h1p = {}, published {expected}",
                    coh.h1p
                ));
            }
        }
        let report = hom_dims_report(&r);
        let expected_hom = vec![ratz(4 * qpow(q, n - 1))];
        if report.unramified != expected_hom {
            bad.push(format!(
                "{spec}: unramified hom dims {}, published {}",
                dims(&report.unramified),
                dims(&expected_hom)
            ));
        }
        if r.n >= 2 {
            let expected_ram = vec![ratz(2 * (q + 1) * qpow(q, n - 2))];
            if report.ramified != expected_ram {
                bad.push(format!(
                    "{spec}: ramified hom dims {}, published {}",
                    dims(&report.ramified),
                    dims(&expected_ram)
                ));
            }
        }
    }

    for spec in RAMIFIED_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let k = Arc::new(full_group(&r));
        let kp = iwahori_subgroup(&r, &k);
        let table = character_table(&kp);
        let cands = ramified_candidates(&r, &kp, &table);
        let (_, near) = ball_end(&r);
        let (_, far) = opposite_end(&r);
        let expected = ratz(2 * (q + 1) * qpow(q, n - 2));
        for (idx, chi) in cands.iter().enumerate() {
            let coh = cohomology(Base::Annulus, &kp, chi, &[&near, &far]);
            if coh.h1p != expected {
                bad.push(format!(
                    "{spec}: ramified candidate {idx}: h1p = {}, published {expected}",
                    coh.h1p
                ));
            }
        }
    }

    assert!(bad.is_empty(), "criterion 5: FAIL\n{}", bad.join("\n"));
    println!("criterion 5: PASS (parabolic dimensions and multiplicity arithmetic)");
}

#[test]
fn criterion_6_induced_character_program() {
    let mut bad: Vec<String> = Vec::new();
    for spec in ["2:1:1:mixed", "3:1:1:mixed", "2:1:2:mixed"] {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let k = Arc::new(full_group(&r));
        let borel = borel_subgroup(&r, &k);
        let units = unit_group(&r);
        let eps_list: Vec<_> = character_table(&units)
            .into_iter()
            .filter(|e| unit_char_exponent(&r, e) as i64 == n)
            .collect();
        assert!(!eps_list.is_empty(), "{spec}: no characters of full exponent");
        let (ball, end) = ball_end(&r);

        let expected_fixed: Vec<Rat> = (1..=(2 * n - 1))
            .map(|i| if i <= n - 1 { ratz(0) } else { ratz(1 + qpow(q, i - n)) })
            .collect();
        let expected_breaks: Vec<Rat> = (1..=(2 * n - 1))
            .map(|i| {
                if i <= n - 2 {
                    ratz(0)
                } else if i == n - 1 {
                    ratz(2)
                } else if i < 2 * n - 1 {
                    let j = i - n;
                    ratz(qpow(q, j + 1) - qpow(q, j))
                } else {
                    ratz(qpow(q, n) - 1)
                }
            })
            .collect();

        for (e_idx, eps) in eps_list.iter().enumerate() {
            let u = u_char(&r, &k, &borel, eps);
            let breaks = end.break_conductor(&u.restrict_to(&ball));
            if breaks.fixed_dims != expected_fixed {
                bad.push(format!(
                    "{spec}: eps {e_idx}: fixed dims {}, published {}",
                    dims(&breaks.fixed_dims),
                    dims(&expected_fixed)
                ));
            }
            if breaks.break_dims != expected_breaks {
                bad.push(format!(
                    "{spec}: eps {e_idx}: break dims {}, published {}",
                    dims(&breaks.break_dims),
                    dims(&expected_breaks)
                ));
            }
            let expected_sw = ratz(-(q + 1) * qpow(q, n - 1));
            if breaks.sw != expected_sw {
                bad.push(format!(
                    "{spec}: eps {e_idx}: sw = {}, published {expected_sw}",
                    breaks.sw
                ));
            }
            let coh = cohomology(Base::Disk, &k, &u, &[&end]);
            if coh.h1p != ratz(0) {
                bad.push(format!("{spec}: eps {e_idx}: h1p = {}, published 0", coh.h1p));
            }
        }
    }
    assert!(bad.is_empty(), "criterion 6: FAIL\n{}", bad.join("\n"));
    println!("criterion 6: PASS (induced character dimensions, sw, and vanishing)");
}

#[test]
fn criterion_7_route_equality_everywhere() {
    // pairs (character source, end) covering every tested group
    let mut checked = 0usize;

    let mut check = |chi: &swancore::classfn::ClassFunction, end: &End, what: &str| {
        let restricted = chi.restrict_to(end.group());
        let (sw, delta) = end.pairing_conductor(&restricted);
        let breaks = end.break_conductor(&restricted);
        assert_eq!(sw, breaks.sw, "{what}: swan routes disagree");
        assert_eq!(delta, breaks.delta, "{what}: delta routes disagree");
        let mut total = breaks.fixed_dims[0].clone();
        for (d, f) in breaks.break_dims.iter().zip(breaks.fixed_dims.iter()) {
            assert!(f.is_integer() && f >= &ratz(0), "{what}: fixed dims are dimensions");
            assert!(d.is_integer() && d >= &ratz(0), "{what}: break dims are dimensions");
            total += d;
        }
        assert_eq!(total, restricted.degree(), "{what}: break dims must sum to the dimension");
        checked += 1;
    };

    for spec in FILTRATION_RINGS {
        let r = ring(spec);
        let (ball, end) = ball_end(&r);
        for (i, chi) in character_table(&ball).iter().enumerate() {
            check(chi, &end, &format!("{spec} stabilizer irreducible {i}"));
        }
    }
    for spec in CONDUCTOR_RINGS {
        let r = ring(spec);
        let k = Arc::new(full_group(&r));
        let (_, end) = ball_end(&r);
        for (i, chi) in character_table(&k).iter().enumerate() {
            check(chi, &end, &format!("{spec} ambient irreducible {i}"));
        }
    }
    for spec in RAMIFIED_RINGS {
        let r = ring(spec);
        let k = Arc::new(full_group(&r));
        let kp = iwahori_subgroup(&r, &k);
        let (_, near) = ball_end(&r);
        let (opp, far) = opposite_end(&r);
        for (i, chi) in character_table(&kp).iter().enumerate() {
            check(chi, &near, &format!("{spec} parahoric irreducible {i} (near)"));
            check(chi, &far, &format!("{spec} parahoric irreducible {i} (far)"));
        }
        for (i, chi) in character_table(&opp).iter().enumerate() {
            check(chi, &far, &format!("{spec} opposite irreducible {i}"));
        }
    }
    println!("criterion 7: PASS (route equality on {checked} character/end pairs)");
}

#[test]
fn criterion_8_polygon_oracle() {
    // closed forms of the polygon route, then exact agreement with the
    // group-theoretic filtration
    for q in [2i64, 3] {
        for n in 1..=3i64 {
            let lv = level_valuations(q as u64, n as u32);
            for m in 1..=n {
                let level = &lv.levels[(m - 1) as usize];
                assert_eq!(level.flat, rat(1, (q - 1) * qpow(q, m - 1)), "flat at level {m}");
                assert_eq!(level.normalized_sharp, -qpow(q, 2 * n - 1), "sharp at level {m}");
            }
            let r = ring(&format!("{q}:1:{n}:mixed"));
            let (_, end) = ball_end(&r);
            let pairs = end.filt.pairs();
            for j in 0..n {
                let jump = &pairs[(n - 1 + j) as usize];
                let level = &lv.levels[(n - j - 1) as usize];
                assert_eq!(jump.flat, level.flat, "q={q} n={n}: wild flat at layer {j}");
                assert_eq!(
                    jump.sharp,
                    level.normalized_sharp - lv.v_normalized_sharps[(n - 1) as usize],
                    "q={q} n={n}: wild sharp at layer {j}"
                );
            }
            for i in 1..n {
                let jump = &pairs[(i - 1) as usize];
                assert_eq!(
                    jump.sharp,
                    lv.v_normalized_sharps[(n - i - 1) as usize]
                        - lv.v_normalized_sharps[(n - 1) as usize],
                    "q={q} n={n}: shallow sharp at layer {i}"
                );
            }
        }
    }

    for q in [2u64, 3, 4] {
        for n in 1..=3u32 {
            assert!(residue_factorization_check(q, n), "factorization at q={q} n={n}");
            let tower = eisenstein_tower(q, n);
            assert_eq!(
                tower.total_degree,
                (q - 1) * q.pow(n - 1),
                "tower degree at q={q} n={n}"
            );
        }
    }

    for q in [2u64, 3] {
        assert!(slope_stability(q, 100, 7), "slope stability at q={q}");
    }
    println!("criterion 8: PASS (polygon closed forms, filtration match, factorization, tower, stability)");
}

#[test]
fn criterion_9_profile_properties() {
    for spec in CONDUCTOR_RINGS {
        let r = ring(spec);
        let (q, n) = qn(&r);
        let k = Arc::new(full_group(&r));
        let table = character_table(&k);
        let unit_table = character_table(&unit_group(&r));
        let cands = unramified_candidates(&r, &k, &table, &unit_table);
        let (ball, end) = ball_end(&r);
        let filt = &end.filt;
        let s_one = rat(1, (q - 1) * qpow(q, n - 1) * (qpow(q, 2 * n - 1) + 1));
        for chi in &cands {
            let rest = chi.restrict_to(&ball);
            let profile = sweep(filt, &rest, &ratz(1));

            // profile at s = 0 equals the boundary report
            let (sw0, delta0) = end.pairing_conductor(&rest);
            assert_eq!(profile.pieces[0].delta_start, delta0, "{spec}: delta(0)");
            assert_eq!(profile.pieces[0].sw, sw0, "{spec}: sw(0)");
            assert_eq!(
                profile.pieces[0].group_order,
                ball.elems.len() as u64,
                "{spec}: everything survives at radius zero"
            );
            assert_eq!(sw0, ratz(-(q + 1) * qpow(q, n - 1)), "{spec}: sw(0) closed form");
            assert_eq!(
                delta0,
                ratz((n * q - n + 1) * qpow(q, n - 1)),
                "{spec}: delta(0) closed form"
            );

            // exact breakpoint solve
            assert_eq!(profile.first_departure, Some(s_one.clone()), "{spec}: first break");
            let dying = filt
                .jumps
                .iter()
                .filter(|j| j.pair.sharp < 0)
                .map(|j| &j.pair.flat / ratz(-j.pair.sharp))
                .min()
                .unwrap();
            assert_eq!(dying, s_one, "{spec}: independent breakpoint solve");

            // convex, non-increasing, integral sw of decaying magnitude
            for w in profile.pieces.windows(2) {
                assert!(w[0].slope <= w[1].slope, "{spec}: convexity");
                assert!(w[0].sw <= w[1].sw, "{spec}: sw magnitude decay");
                let left = &w[0].delta_start + &w[0].slope * (&w[0].end - &w[0].start);
                assert_eq!(left, w[1].delta_start, "{spec}: continuity at a cut");
            }
            for p in &profile.pieces {
                assert!(p.slope <= ratz(0), "{spec}: delta non-increasing");
                assert!(p.sw.is_integer(), "{spec}: integral sw");
            }

            // dense rational sampling against the element route
            let domain_end = profile.pieces.last().unwrap().end.clone();
            for t in 0..=48 {
                let s = &domain_end * rat(t, 48);
                let by_pieces = profile.delta_at(&s).unwrap();
                assert_eq!(by_pieces, delta_by_elements(filt, &rest, &s), "{spec}: sample at {s}");
            }
            // the knee is where the element route leaves the initial line
            let before = delta_by_elements(filt, &rest, &(&s_one * rat(47, 48)));
            let affine = &delta0 + &profile.pieces[0].slope * (&s_one * rat(47, 48));
            assert_eq!(before, affine, "{spec}: affine up to the first break");
        }
    }
    println!("criterion 9: PASS (profile shape, breakpoints, and sampling on 5 rings)");
}
