//! Closed-form verification targets behind the `verify` subcommand.
//!
//! Every target recomputes the relevant quantities on the configured ring
//! and compares them with the closed forms, reporting one check per
//! compared value. A check failure is a verification failure (exit 1),
//! never a crash.

use std::sync::Arc;

use swancore::conductor::{cohomology, end_of, Base, End};
use swancore::dixon::character_table;
use swancore::gl2::{ball_stabilizer, full_group, opposite_stabilizer};
use swancore::group::FinGroup;
use swancore::newton::{eisenstein_tower, level_valuations, residue_factorization_check};
use swancore::ramify::{depth_pair, opposite_depth_pair};
use swancore::reptypes::{
    borel_subgroup, iwahori_subgroup, ramified_candidates, u_char, unit_char_exponent, unit_group,
    unramified_candidates,
};
use swancore::ring::ResidueRing;
use swancore::{rat, ratz, Rat};

pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, ok: bool, detail: String) -> Check {
    Check { name: name.into(), ok, detail }
}

fn eq_check<T: PartialEq + std::fmt::Display>(name: impl Into<String>, got: T, want: T) -> Check {
    let ok = got == want;
    check(name, ok, format!("computed {got}, closed form {want}"))
}

fn qn(r: &ResidueRing) -> (i64, i64) {
    (r.q as i64, r.n as i64)
}

fn qpow(q: i64, e: i64) -> i64 {
    assert!(e >= 0);
    q.pow(e as u32)
}

fn dims(v: &[Rat]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

pub fn ball_end(r: &Arc<ResidueRing>) -> (Arc<FinGroup>, End) {
    let ball = Arc::new(ball_stabilizer(r));
    let end = end_of(&ball, |m| depth_pair(r, m));
    (ball, end)
}

pub fn far_end(r: &Arc<ResidueRing>) -> (Arc<FinGroup>, End) {
    let opp = Arc::new(opposite_stabilizer(r));
    let end = end_of(&opp, |m| opposite_depth_pair(r, m));
    (opp, end)
}

/// Jump values and subgroup orders of the boundary filtration.
pub fn jumps(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let (_, end) = ball_end(r);
    let filt = &end.filt;
    let mut out = vec![eq_check("jump count", filt.jumps.len() as i64, 2 * n - 1)];
    for (idx, jump) in filt.jumps.iter().enumerate() {
        let i = idx as i64 + 1;
        let (want_flat, want_sharp) = if i <= n - 1 {
            (ratz(0), qpow(q, 2 * i) - 1)
        } else {
            (rat(1, (q - 1) * qpow(q, 2 * n - 1 - i)), -(qpow(q, 2 * n - 1) + 1))
        };
        out.push(eq_check(format!("jump {i} flat"), jump.pair.flat.clone(), want_flat));
        out.push(eq_check(format!("jump {i} sharp"), jump.pair.sharp, want_sharp));
        out.push(eq_check(
            format!("jump {i} order"),
            jump.subgroup_order as i64,
            qpow(q, 2 * n - i),
        ));
    }
    out
}

/// Upper numbered jump values and the top flat value.
pub fn upper(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let (_, end) = ball_end(r);
    let upper = end.filt.upper_jumps();
    let mut out = Vec::new();
    for (idx, u) in upper.iter().enumerate() {
        let i = idx as i64 + 1;
        let want = if i <= n - 1 {
            rat((q + 1) * (qpow(q, i) - 1), q - 1)
        } else {
            rat(-(q + 1), q - 1)
        };
        out.push(eq_check(format!("upper jump {i} sharp"), u.sharp.clone(), want));
    }
    out.push(eq_check(
        "top flat",
        upper.last().expect("at least one jump").flat.clone(),
        rat(n * q - n + 1, q - 1),
    ));
    out
}

/// Conductor pair of every full-level candidate of the matrix group.
pub fn unramified(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let k = Arc::new(full_group(r));
    let table = character_table(&k);
    let unit_table = character_table(&unit_group(r));
    let cands = unramified_candidates(r, &k, &table, &unit_table);
    let mut out = vec![check(
        "candidates nonempty",
        !cands.is_empty(),
        format!("{} candidate(s)", cands.len()),
    )];
    let (ball, end) = ball_end(r);
    let want = (ratz(-(q + 1) * qpow(q, n - 1)), ratz((n * q - n + 1) * qpow(q, n - 1)));
    for (j, chi) in cands.iter().enumerate() {
        let got = end.pairing_conductor(&chi.restrict_to(&ball));
        out.push(check(
            format!("candidate {j} pair"),
            got == want,
            format!("computed ({}, {}), closed form ({}, {})", got.0, got.1, want.0, want.1),
        ));
    }
    out
}

/// Conductor pairs of every parahoric candidate, at both boundary ends.
pub fn ramified(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let k = Arc::new(full_group(r));
    let kp = iwahori_subgroup(r, &k);
    let table = character_table(&kp);
    let cands = ramified_candidates(r, &kp, &table);
    let mut out = vec![check(
        "candidates nonempty",
        !cands.is_empty(),
        format!("{} candidate(s)", cands.len()),
    )];
    let (ball, near) = ball_end(r);
    let (opp, far) = far_end(r);
    let want = (ratz(-(q + 1) * qpow(q, n - 2)), ratz((n * q - q - n) * qpow(q, n - 2)));
    for (j, chi) in cands.iter().enumerate() {
        for (end_name, group, end) in [("near", &ball, &near), ("far", &opp, &far)] {
            let got = end.pairing_conductor(&chi.restrict_to(group));
            out.push(check(
                format!("candidate {j} {end_name} pair"),
                got == want,
                format!("computed ({}, {}), closed form ({}, {})", got.0, got.1, want.0, want.1),
            ));
        }
    }
    out
}

fn exponent_n_unit_chars(r: &Arc<ResidueRing>) -> Vec<swancore::classfn::ClassFunction> {
    character_table(&unit_group(r))
        .into_iter()
        .filter(|e| unit_char_exponent(r, e) == r.n)
        .collect()
}

/// Break dimensions, Swan conductor and parabolic vanishing of the
/// characters induced from the upper triangular subgroup.
pub fn induced(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let k = Arc::new(full_group(r));
    let borel = borel_subgroup(r, &k);
    let eps_list = exponent_n_unit_chars(r);
    let (ball, end) = ball_end(r);
    let mut out = vec![check(
        "characters of full exponent exist",
        !eps_list.is_empty(),
        format!("{} character(s)", eps_list.len()),
    )];
    let want_breaks: Vec<Rat> = (1..=(2 * n - 1))
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
        let u = u_char(r, &k, &borel, eps);
        let breaks = end.break_conductor(&u.restrict_to(&ball));
        out.push(check(
            format!("eps {e_idx} break dims"),
            breaks.break_dims == want_breaks,
            format!("computed {}, closed form {}", dims(&breaks.break_dims), dims(&want_breaks)),
        ));
        out.push(eq_check(
            format!("eps {e_idx} swan"),
            breaks.sw.clone(),
            ratz(-(q + 1) * qpow(q, n - 1)),
        ));
        let coh = cohomology(Base::Disk, &k, &u, &[&end]);
        out.push(eq_check(format!("eps {e_idx} h1p"), coh.h1p.clone(), ratz(0)));
    }
    out
}

/// Fixed space dimensions of the induced characters down the filtration.
pub fn induced_fixed(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let k = Arc::new(full_group(r));
    let borel = borel_subgroup(r, &k);
    let eps_list = exponent_n_unit_chars(r);
    let (ball, end) = ball_end(r);
    let want_fixed: Vec<Rat> = (1..=(2 * n - 1))
        .map(|i| if i <= n - 1 { ratz(0) } else { ratz(1 + qpow(q, i - n)) })
        .collect();
    let mut out = Vec::new();
    for (e_idx, eps) in eps_list.iter().enumerate() {
        let u = u_char(r, &k, &borel, eps);
        let breaks = end.break_conductor(&u.restrict_to(&ball));
        out.push(check(
            format!("eps {e_idx} fixed dims"),
            breaks.fixed_dims == want_fixed,
            format!("computed {}, closed form {}", dims(&breaks.fixed_dims), dims(&want_fixed)),
        ));
    }
    out
}

/// Level valuations of the polygon route against both the closed forms
/// and the group filtration.
pub fn valuations(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let lv = level_valuations(r.q as u64, r.n);
    let mut out = Vec::new();
    for m in 1..=n {
        let level = &lv.levels[(m - 1) as usize];
        out.push(eq_check(
            format!("level {m} flat"),
            level.flat.clone(),
            rat(1, (q - 1) * qpow(q, m - 1)),
        ));
        out.push(eq_check(
            format!("level {m} normalized sharp"),
            level.normalized_sharp,
            -qpow(q, 2 * n - 1),
        ));
    }
    let (_, end) = ball_end(r);
    let pairs = end.filt.pairs();
    for j in 0..n {
        let jump = &pairs[(n - 1 + j) as usize];
        let level = &lv.levels[(n - j - 1) as usize];
        out.push(eq_check(
            format!("wild layer {j} flat match"),
            jump.flat.clone(),
            level.flat.clone(),
        ));
        out.push(eq_check(
            format!("wild layer {j} sharp match"),
            jump.sharp,
            level.normalized_sharp - lv.v_normalized_sharps[(n - 1) as usize],
        ));
    }
    for i in 1..n {
        let jump = &pairs[(i - 1) as usize];
        out.push(eq_check(
            format!("shallow layer {i} sharp match"),
            jump.sharp,
            lv.v_normalized_sharps[(n - i - 1) as usize] - lv.v_normalized_sharps[(n - 1) as usize],
        ));
    }
    out
}

/// Eisenstein tower step valuations and total degree.
pub fn tower(r: &Arc<ResidueRing>) -> Vec<Check> {
    let (q, n) = qn(r);
    let t = eisenstein_tower(r.q as u64, r.n);
    let mut out = Vec::new();
    for (idx, step) in t.steps.iter().enumerate() {
        let m = idx as i64 + 1;
        out.push(eq_check(
            format!("step {m} valuation"),
            step.z_val.clone(),
            rat(1, (q - 1) * qpow(q, m - 1)),
        ));
    }
    out.push(eq_check("total degree", t.total_degree as i64, (q - 1) * qpow(q, n - 1)));
    out
}

/// Residue factorization identity for the iterated isogeny.
pub fn compose(r: &Arc<ResidueRing>) -> Vec<Check> {
    let ok = residue_factorization_check(r.q as u64, r.n);
    vec![check(
        "residue factorization",
        ok,
        format!("q = {}, n = {}: composed product {} the iterate", r.q, r.n, if ok { "equals" } else { "differs from" }),
    )]
}
