//! Conductor profiles along a radius sweep.
//!
//! Sliding the boundary end inward by `s` (measured in `-log_q` of the
//! radius) moves every element's depth by `s` times its sharp part. Wild
//! elements, whose sharp parts are negative, eventually stop contracting
//! and drop out of the stabilizer; the discriminant conductor is piecewise
//! linear in `s` with kinks exactly at those departure points.
//!
//! Shell weights are computed once at `s = 0` from the fixed space
//! dimensions of the representation; the sweep itself is pure bookkeeping
//! over which shells are still alive. After a departure the surviving
//! members may or may not form a subgroup. While they do, the family stays
//! an honest equivariant sheaf on the smaller annulus and the sweep
//! continues; the first time they do not, the profile is truncated and
//! says so.

use num::{Signed, Zero};

use crate::classfn::ClassFunction;
use crate::cyclotomic::Cyclotomic;
use crate::ramify::Filtration;
use crate::{ratz, Rat};

/// One linear piece of the profile, on `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Rat,
    pub end: Rat,
    /// Value of delta at `start`; the piece is `delta_start + slope (s - start)`.
    pub delta_start: Rat,
    pub slope: Rat,
    /// Swan conductor on this piece, `slope / group_order`.
    pub sw: Rat,
    /// Order of the surviving stabilizer on this piece.
    pub group_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    /// The sweep stayed a group sweep all the way to `s_max`.
    Full,
    /// Survivors stopped being closed under multiplication here; pieces
    /// beyond this point would not describe an equivariant family.
    StructuralBreak { at: Rat },
}

#[derive(Debug)]
pub struct Profile {
    pub pieces: Vec<Piece>,
    pub validity: Validity,
    /// Smallest departure point of any wild shell, regardless of weights
    /// and of where the sweep gets truncated.
    pub first_departure: Option<Rat>,
    pub s_max: Rat,
}

impl Profile {
    /// Exact value of delta at `s`, from the piece containing it.
    pub fn delta_at(&self, s: &Rat) -> Option<Rat> {
        let p = self.pieces.iter().find(|p| &p.start <= s && s <= &p.end)?;
        Some(&p.delta_start + &p.slope * (s - &p.start))
    }
}

struct Shell {
    flat: Rat,
    sharp: i64,
    weight: Rat,
    members: Vec<u64>,
    /// Departure point, for wild shells only.
    death: Option<Rat>,
}

/// Sweeps the profile of `chi` (a character of the filtration's group) up
/// to `s_max`.
pub fn sweep(filt: &Filtration, chi: &ClassFunction, s_max: &Rat) -> Profile {
    assert!(s_max.is_positive());
    let deg = chi.degree();
    let l = filt.jumps.len();

    // weight of shell i: |G_i| (deg - F_i) - |G_(i+1)| (deg - F_(i+1)),
    // the contribution of the shell to both conductor pairings
    let mut defect: Vec<Rat> = (0..l)
        .map(|i| {
            let fixed = chi.average_over(&filt.subgroup_members(i));
            ratz(filt.jumps[i].subgroup_order as i64) * (&deg - fixed)
        })
        .collect();
    defect.push(Rat::zero());
    let shells: Vec<Shell> = filt
        .jumps
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let weight = &defect[i] - &defect[i + 1];
            assert!(weight.is_integer() && !weight.is_negative(), "shell weights are counts");
            assert!(
                !j.pair.flat.is_zero() || j.pair.sharp > 0,
                "a depth zero shell with nonpositive sharp part is not in the stabilizer"
            );
            let death =
                (j.pair.sharp < 0).then(|| &j.pair.flat / ratz(-j.pair.sharp));
            Shell { flat: j.pair.flat.clone(), sharp: j.pair.sharp, weight, members: j.members.clone(), death }
        })
        .collect();

    let first_departure = shells.iter().filter_map(|s| s.death.clone()).min();

    // departure points inside the window, ascending and distinct
    let mut cuts: Vec<Rat> = shells
        .iter()
        .filter_map(|s| s.death.clone())
        .filter(|d| d < s_max)
        .collect();
    cuts.sort();
    cuts.dedup();
    cuts.push(s_max.clone());

    let mut alive: Vec<bool> = vec![true; shells.len()];
    let mut pieces: Vec<Piece> = Vec::new();
    let mut validity = Validity::Full;
    let mut start = Rat::zero();
    for cut in cuts {
        let mut delta_start = Rat::zero();
        let mut slope = Rat::zero();
        let mut order = 1 + filt.tame.len() as u64;
        for (sh, &live) in shells.iter().zip(&alive) {
            if !live {
                continue;
            }
            delta_start += (&sh.flat + ratz(sh.sharp) * &start) * &sh.weight;
            slope += ratz(sh.sharp) * &sh.weight;
            order += sh.members.len() as u64;
        }
        let sw = &slope / ratz(order as i64);
        assert!(sw.is_integer(), "Swan stays integral while the sweep is a group sweep");
        assert!(!delta_start.is_negative(), "delta stays nonnegative");
        pieces.push(Piece { start: start.clone(), end: cut.clone(), delta_start, slope, sw, group_order: order });

        if &cut == s_max {
            break;
        }
        // retire the shells departing at this cut and test closure
        for (sh, live) in shells.iter().zip(alive.iter_mut()) {
            if sh.death.as_ref() == Some(&cut) {
                *live = false;
            }
        }
        let mut survivors: Vec<u64> = vec![filt.group.one];
        survivors.extend_from_slice(&filt.tame);
        for (sh, &live) in shells.iter().zip(&alive) {
            if live {
                survivors.extend_from_slice(&sh.members);
            }
        }
        survivors.sort_unstable();
        let closed = survivors.iter().all(|&a| {
            survivors.iter().all(|&b| survivors.binary_search(&filt.group.mul(a, b)).is_ok())
        });
        if !closed {
            validity = Validity::StructuralBreak { at: cut };
            break;
        }
        start = cut;
    }

    // merge neighbours that happen to carry identical data
    let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match merged.last_mut() {
            Some(prev)
                if prev.slope == p.slope
                    && prev.sw == p.sw
                    && prev.group_order == p.group_order
                    && prev.end == p.start =>
            {
                prev.end = p.end;
            }
            _ => merged.push(p),
        }
    }

    // shape invariants on the validated pieces
    for w in merged.windows(2) {
        assert!(w[0].slope <= w[1].slope, "delta is convex: slopes cannot decrease");
        assert!(w[0].sw.abs() >= w[1].sw.abs(), "wildness only decays along the sweep");
        let left = &w[0].delta_start + &w[0].slope * (&w[0].end - &w[0].start);
        let right = w[1]
            .delta_start
            .clone();
        assert_eq!(left, right, "delta is continuous across cuts");
    }

    Profile { pieces: merged, validity, first_departure, s_max: s_max.clone() }
}

/// Independent evaluation of delta at one `s`, straight from the element
/// sum: every surviving element contributes its slid flat depth times its
/// character defect. Used to cross-check the piecewise form.
pub fn delta_by_elements(filt: &Filtration, chi: &ClassFunction, s: &Rat) -> Rat {
    let m = chi.conductor();
    let deg = Cyclotomic::from_rat(m, chi.degree());
    let mut acc = Cyclotomic::zero(m);
    for j in &filt.jumps {
        let slid = j.pair.slide(s);
        let alive = slid.flat.is_positive() || (slid.flat.is_zero() && slid.sharp > 0);
        if !alive {
            continue;
        }
        for &g in &j.members {
            // single defects may be complex; the sum over a level is real
            // because levels are closed under inversion
            let defect = deg.sub(chi.value_at(g));
            acc = acc.add(&defect.scale(&slid.flat));
        }
    }
    acc.expect_rat("delta element sum")
}

/// Smallest departure point among wild jumps that carry a nonzero break
/// dimension of `chi`. `None` when no such jump departs, in particular
/// for the trivial character.
pub fn first_break_of(filt: &Filtration, chi: &ClassFunction) -> Option<Rat> {
    let deg = chi.degree();
    let l = filt.jumps.len();
    let fixed: Vec<Rat> =
        (0..l).map(|i| chi.average_over(&filt.subgroup_members(i))).collect();
    let mut best: Option<Rat> = None;
    for (i, j) in filt.jumps.iter().enumerate() {
        let above = if i + 1 < l { &fixed[i + 1] } else { &deg };
        let dim = above - &fixed[i];
        if dim.is_zero() || j.pair.sharp >= 0 {
            continue;
        }
        let death = &j.pair.flat / ratz(-j.pair.sharp);
        if best.as_ref().is_none_or(|b| &death < b) {
            best = Some(death);
        }
    }
    best
}
