//! Swan and discriminant conductors at a boundary end, two ways.
//!
//! Given the ramification filtration of an end stabilizer, the conductors
//! of a representation can be computed either by pairing against the sw
//! and delta class functions or by weighting the upper numbered jumps with
//! the break decomposition. The two routes agree on the nose for genuine
//! characters; the acceptance suite insists on that for every irreducible
//! of every group it touches.
//!
//! Sign conventions: depths store `-log h`, so the sharp data of a wild
//! element is negative and sw of a wildly ramified representation comes
//! out negative, while delta is nonnegative. The identity values of the
//! class functions are forced by `<sw, 1> = <delta, 1> = 0`.

use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::classfn::ClassFunction;
use crate::cyclotomic::Cyclotomic;
use crate::group::FinGroup;
use crate::logpair::LogPair;
use crate::ramify::{filtration_of, Filtration};
use crate::{ratz, Rat};

/// A boundary end: the stabilizer filtration plus its conductor class
/// functions.
pub struct End {
    pub filt: Filtration,
    pub sw_fn: ClassFunction,
    pub delta_fn: ClassFunction,
}

/// Builds the end data for a stabilizer group under a depth assignment.
pub fn end_of(group: &Arc<FinGroup>, depth: impl Fn(u64) -> Option<LogPair>) -> End {
    let filt = filtration_of(group, &depth);
    let order = ratz(group.order() as i64);

    let mut sharp_total = Rat::zero();
    let mut flat_total = Rat::zero();
    for j in &filt.jumps {
        let count = ratz(j.members.len() as i64);
        sharp_total += ratz(j.pair.sharp) * &count;
        flat_total += &j.pair.flat * &count;
    }

    let sw_fn = ClassFunction::from_fn(group, 1, |g| {
        let v = match depth(g) {
            None => sharp_total.clone(),
            Some(p) => ratz(-p.sharp),
        };
        Cyclotomic::from_rat(1, v)
    });
    let delta_fn = ClassFunction::from_fn(group, 1, |g| {
        let v = match depth(g) {
            None => &flat_total * &order,
            Some(p) => -p.flat * &order,
        };
        Cyclotomic::from_rat(1, v)
    });
    // both class functions must pair to zero against the trivial character
    let triv = ClassFunction::trivial(group);
    assert!(sw_fn.pairing_rat(&triv).is_zero());
    assert!(delta_fn.pairing_rat(&triv).is_zero());

    End { filt, sw_fn, delta_fn }
}

impl End {
    pub fn group(&self) -> &Arc<FinGroup> {
        &self.filt.group
    }

    /// Conductors `(sw, delta)` by pairing with the class functions.
    /// `chi` must live on the end group; restrict first.
    pub fn pairing_conductor(&self, chi: &ClassFunction) -> (Rat, Rat) {
        (chi.pairing_rat(&self.sw_fn), chi.pairing_rat(&self.delta_fn))
    }

    /// Conductors through the break decomposition along the upper jumps.
    pub fn break_conductor(&self, chi: &ClassFunction) -> Breaks {
        let deg = chi.degree();
        let fixed_dims: Vec<Rat> = (0..self.filt.jumps.len())
            .map(|i| chi.average_over(&self.filt.subgroup_members(i)))
            .collect();
        let mut break_dims = Vec::with_capacity(fixed_dims.len());
        for i in 0..fixed_dims.len() {
            let above = if i + 1 < fixed_dims.len() { &fixed_dims[i + 1] } else { &deg };
            break_dims.push(above - &fixed_dims[i]);
        }
        let mut sw = Rat::zero();
        let mut delta = Rat::zero();
        for (u, d) in self.filt.upper_jumps().iter().zip(&break_dims) {
            sw += &u.sharp * d;
            delta += &u.flat * d;
        }
        Breaks { sw, delta, fixed_dims, break_dims }
    }
}

/// The break route output: conductors plus the dimension data behind them.
#[derive(Debug)]
pub struct Breaks {
    pub sw: Rat,
    pub delta: Rat,
    /// Fixed space dimension at each filtration level, outermost first.
    pub fixed_dims: Vec<Rat>,
    /// Dimensions of the graded pieces between consecutive levels.
    pub break_dims: Vec<Rat>,
}

/// Base curve shape for the Euler characteristic bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Disk,
    Annulus,
}

impl Base {
    fn euler(self) -> Rat {
        match self {
            Base::Disk => Rat::one(),
            Base::Annulus => Rat::zero(),
        }
    }
}

/// Compactly supported cohomology of the sheaf attached to `chi` on the
/// base, from the Euler characteristic formula and duality:
///
/// * `chi_c = rank * chi_c(base) + sum of sw over the ends`;
/// * `h2c = h0 = <chi, 1>` over the ambient group;
/// * `h1c = h0 - chi_c` (the compactly supported `h0` vanishes);
/// * the parabolic part subtracts the boundary corrections
///   `sum of iota_e - h0`, where `iota_e` is the fixed dimension at the
///   end stabilizer.
#[derive(Debug)]
pub struct Cohomology {
    pub rank: Rat,
    pub chi_c: Rat,
    pub h0: Rat,
    pub h1c: Rat,
    pub h2c: Rat,
    pub iota_sum: Rat,
    pub h1p: Rat,
    /// True when the boundary corrections cancel, so `h1p = h1c`.
    pub corrections_vanish: bool,
}

pub fn cohomology(
    base: Base,
    ambient: &Arc<FinGroup>,
    chi: &ClassFunction,
    ends: &[&End],
) -> Cohomology {
    assert!(Arc::ptr_eq(&chi.group, ambient), "chi must live on the ambient group");
    let rank = chi.degree();
    let h0 = chi.pairing_rat(&ClassFunction::trivial(ambient));
    let mut chi_c = &rank * base.euler();
    let mut iota_sum = Rat::zero();
    for end in ends {
        let restricted = chi.restrict_to(end.group());
        let (sw, _) = end.pairing_conductor(&restricted);
        chi_c += sw;
        iota_sum += chi.fixed_dim(end.group());
    }
    let h1c = &h0 - &chi_c;
    let kernel = &iota_sum - &h0;
    let h1p = &h1c - &kernel;
    assert!(!h1c.is_negative(), "first compactly supported cohomology cannot be negative");
    assert!(!kernel.is_negative(), "boundary corrections cannot be negative");
    assert!(!h1p.is_negative(), "parabolic cohomology cannot be negative");
    Cohomology {
        rank,
        chi_c,
        h0: h0.clone(),
        h1c,
        h2c: h0,
        iota_sum: iota_sum.clone(),
        h1p,
        corrections_vanish: kernel.is_zero(),
    }
}

/// Multiplicity dimensions recomputed from the parabolic cohomology
/// outputs: doubled h1p over the unramified candidates, h1p itself over
/// the ramified candidates. Each list holds the distinct values found, in
/// increasing order; the ramified list is empty below depth two.
#[derive(Debug)]
pub struct HomDimsReport {
    pub unramified: Vec<Rat>,
    pub ramified: Vec<Rat>,
}

pub fn hom_dims_report(ring: &Arc<crate::ring::ResidueRing>) -> HomDimsReport {
    use crate::dixon::character_table;
    use crate::gl2::{ball_stabilizer, full_group, opposite_stabilizer};
    use crate::ramify::{depth_pair, opposite_depth_pair};
    use crate::reptypes::{
        iwahori_subgroup, ramified_candidates, unit_group, unramified_candidates,
    };

    let k = Arc::new(full_group(ring));
    let table = character_table(&k);
    let unit_table = character_table(&unit_group(ring));
    let ball = Arc::new(ball_stabilizer(ring));
    let end = end_of(&ball, |m| depth_pair(ring, m));

    let mut unramified: Vec<Rat> = unramified_candidates(ring, &k, &table, &unit_table)
        .iter()
        .map(|chi| cohomology(Base::Disk, &k, chi, &[&end]).h1p * ratz(2))
        .collect();
    unramified.sort();
    unramified.dedup();

    let mut ramified: Vec<Rat> = Vec::new();
    if ring.n >= 2 {
        let kp = iwahori_subgroup(ring, &k);
        let kp_table = character_table(&kp);
        let opp = Arc::new(opposite_stabilizer(ring));
        let far = end_of(&opp, |m| opposite_depth_pair(ring, m));
        for chi in ramified_candidates(ring, &kp, &kp_table) {
            ramified.push(cohomology(Base::Annulus, &kp, &chi, &[&end, &far]).h1p);
        }
        ramified.sort();
        ramified.dedup();
    }

    HomDimsReport { unramified, ramified }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dixon::character_table;
    use crate::gl2::{ball_stabilizer, full_group};
    use crate::ramify::depth_pair;
    use crate::ring::{ResidueRing, RingKind};

    fn sign_character_end() -> (End, ClassFunction) {
        // GL2(F_2) is the symmetric group on three letters; the sign
        // character is its unique wild candidate
        let ring = Arc::new(ResidueRing::new(2, 1, 1, RingKind::Mixed).unwrap());
        let k = Arc::new(full_group(&ring));
        let chars = character_table(&k);
        let sign = chars
            .iter()
            .find(|c| {
                c.degree() == ratz(1) && c.class_values().iter().any(|v| v.as_rat() != Some(ratz(1)))
            })
            .unwrap()
            .clone();
        let ball = Arc::new(ball_stabilizer(&ring));
        let end = end_of(&ball, |m| depth_pair(&ring, m));
        let restricted = sign.restrict_to(end.group());
        (end, restricted)
    }

    #[test]
    fn sign_character_conductors() {
        let (end, chi) = sign_character_end();
        let (sw, delta) = end.pairing_conductor(&chi);
        assert_eq!(sw, ratz(-3));
        assert_eq!(delta, ratz(2));
        let b = end.break_conductor(&chi);
        assert_eq!(b.sw, sw);
        assert_eq!(b.delta, delta);
        assert_eq!(b.fixed_dims, vec![ratz(0)]);
        assert_eq!(b.break_dims, vec![ratz(1)]);
    }

    #[test]
    fn trivial_character_has_no_conductor() {
        let ring = Arc::new(ResidueRing::new(3, 1, 1, RingKind::Mixed).unwrap());
        let ball = Arc::new(ball_stabilizer(&ring));
        let end = end_of(&ball, |m| depth_pair(&ring, m));
        let triv = ClassFunction::trivial(end.group());
        assert_eq!(end.pairing_conductor(&triv), (ratz(0), ratz(0)));
        let b = end.break_conductor(&triv);
        assert_eq!((b.sw, b.delta), (ratz(0), ratz(0)));
    }

    #[test]
    fn route_equality_for_all_characters_of_a_stabilizer() {
        let ring = Arc::new(ResidueRing::new(3, 1, 2, RingKind::Mixed).unwrap());
        let ball = Arc::new(ball_stabilizer(&ring));
        let end = end_of(&ball, |m| depth_pair(&ring, m));
        for chi in character_table(end.group()) {
            let (sw, delta) = end.pairing_conductor(&chi);
            let b = end.break_conductor(&chi);
            assert_eq!(b.sw, sw);
            assert_eq!(b.delta, delta);
            assert!(b.break_dims.iter().all(|d| !d.is_negative() && d.is_integer()));
        }
    }

    #[test]
    fn hom_dims_cover_both_kinds_of_candidate() {
        let ring = Arc::new(ResidueRing::new(2, 1, 1, RingKind::Mixed).unwrap());
        let report = hom_dims_report(&ring);
        assert_eq!(report.unramified, vec![ratz(4)]);
        assert!(report.ramified.is_empty());

        let ring = Arc::new(ResidueRing::new(3, 1, 1, RingKind::Mixed).unwrap());
        let report = hom_dims_report(&ring);
        assert_eq!(report.unramified, vec![ratz(4)]);

        // at depth two the ramified fingerprint admits an impostor whose
        // parabolic dimension is 2, next to the genuine value 6
        let ring = Arc::new(ResidueRing::new(2, 1, 2, RingKind::Mixed).unwrap());
        let report = hom_dims_report(&ring);
        assert_eq!(report.unramified, vec![ratz(8)]);
        assert_eq!(report.ramified, vec![ratz(2), ratz(6)]);
    }

    #[test]
    fn euler_characteristic_of_the_sign_sheaf() {
        let ring = Arc::new(ResidueRing::new(2, 1, 1, RingKind::Mixed).unwrap());
        let k = Arc::new(full_group(&ring));
        let chars = character_table(&k);
        let sign = chars
            .iter()
            .find(|c| {
                c.degree() == ratz(1) && c.class_values().iter().any(|v| v.as_rat() != Some(ratz(1)))
            })
            .unwrap();
        let ball = Arc::new(ball_stabilizer(&ring));
        let end = end_of(&ball, |m| depth_pair(&ring, m));
        let coh = cohomology(Base::Disk, &k, sign, &[&end]);
        assert_eq!(coh.chi_c, ratz(-2));
        assert_eq!(coh.h0, ratz(0));
        assert_eq!(coh.h1c, ratz(2));
        assert_eq!(coh.h1p, ratz(2), "h1p is twice q^(n-1) here");
        assert!(coh.corrections_vanish);
    }
}
