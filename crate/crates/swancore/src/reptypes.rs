//! Fingerprints that locate the relevant irreducible characters.
//!
//! Instead of constructing induced models, the irreducibles of the full
//! matrix group (and of its Iwahori subgroup) are brute-forced and then
//! filtered by dimension, congruence level, unipotent fixed vectors and
//! minimality under determinant twists. The conductor theorems are checked
//! against every character passing the filter, not a chosen one.

use std::sync::Arc;

use num::{One, Zero};

use crate::classfn::ClassFunction;
use crate::gl2::{self, unpack};
use crate::group::{FinGroup, InvFn, MulFn};
use crate::ring::{RElt, ResidueRing};
use crate::{ratz, Rat};

/// Multiplicative group of the ring's units, coded by ring element values.
pub fn unit_group(ring: &Arc<ResidueRing>) -> Arc<FinGroup> {
    let elems: Vec<u64> = ring.units().iter().map(|&u| u as u64).collect();
    let r1 = Arc::clone(ring);
    let r2 = Arc::clone(ring);
    let mul: MulFn = Arc::new(move |a, b| r1.mul(a as RElt, b as RElt) as u64);
    let inv: InvFn = Arc::new(move |a| r2.inv(a as RElt).unwrap() as u64);
    let name = format!("units({})", ring.spec_string());
    Arc::new(FinGroup::new(&name, elems, ring.one as u64, mul, inv))
}

/// Smallest m >= 1 such that `eps` is trivial on the units at depth m,
/// that is on {u : val(u - 1) >= m}. Always at most n.
pub fn unit_char_exponent(ring: &ResidueRing, eps: &ClassFunction) -> u32 {
    for m in 1..=ring.n {
        let members: Vec<u64> = ring
            .units()
            .iter()
            .filter(|&&u| ring.val(ring.sub(u, ring.one)) >= m)
            .map(|&u| u as u64)
            .collect();
        if eps.kernel_contains(&members) {
            return m;
        }
    }
    unreachable!("every character is trivial at depth n, where only 1 remains")
}

/// Upper triangular subgroup of the full matrix group.
pub fn borel_subgroup(ring: &Arc<ResidueRing>, k: &Arc<FinGroup>) -> Arc<FinGroup> {
    let zero = ring.zero;
    let name = format!("borel({})", ring.spec_string());
    Arc::new(k.subgroup_where(&name, move |x| unpack(x)[2] == zero))
}

/// Index-(q+1)q^(n-1) subgroup with lower left entry divisible by pi.
pub fn iwahori_subgroup(ring: &Arc<ResidueRing>, k: &Arc<FinGroup>) -> Arc<FinGroup> {
    let r = Arc::clone(ring);
    let name = format!("iwahori({})", ring.spec_string());
    Arc::new(k.subgroup_where(&name, move |x| r.val(unpack(x)[2]) >= 1))
}

/// Extends a unit character to the upper triangular subgroup through the
/// top left entry and induces. The result has dimension (q+1)q^(n-1) and
/// congruence level exactly n; it is irreducible except for the trivial
/// unit character at n = 1, where it splits off the trivial summand.
pub fn u_char(
    ring: &Arc<ResidueRing>,
    k: &Arc<FinGroup>,
    borel: &Arc<FinGroup>,
    eps: &ClassFunction,
) -> ClassFunction {
    let m = eps.conductor();
    let eps_tilde = ClassFunction::from_fn(borel, m, |x| eps.value_at(unpack(x)[0] as u64).clone());
    for &x in borel.elems.iter().take(64) {
        for &y in borel.elems.iter().rev().take(64) {
            let xy = borel.mul(x, y);
            assert_eq!(
                eps_tilde.value_at(xy),
                &eps_tilde.value_at(x).mul(eps_tilde.value_at(y)),
                "extension stays multiplicative"
            );
        }
    }
    let u = eps_tilde.induce_to(k);
    let q = ring.q as i64;
    assert_eq!(u.degree(), ratz((q + 1) * q.pow(ring.n - 1)), "induced dimension");
    assert_eq!(level_in_principal(ring, &u), ring.n, "congruence level is exactly n");
    let trivial_eps = eps.class_values().iter().all(|v| v.as_rat() == Some(Rat::one()));
    let norm = u.pairing_rat(&u);
    if trivial_eps {
        assert_eq!(norm, ratz(2), "trivial unit character splits into two summands");
    } else {
        assert_eq!(norm, Rat::one(), "nontrivial unit character induces irreducibly");
    }
    u
}

/// Elements of `g` congruent to the identity at depth m.
pub fn principal_members(ring: &ResidueRing, g: &FinGroup, m: u32) -> Vec<u64> {
    g.elems.iter().copied().filter(|&x| gl2::in_principal(ring, x, m)).collect()
}

/// Smallest m with the depth-m principal congruence subgroup inside the
/// kernel. Zero exactly for the trivial character.
pub fn level_in_principal(ring: &ResidueRing, chi: &ClassFunction) -> u32 {
    (0..=ring.n)
        .find(|&m| chi.kernel_contains(&principal_members(ring, &chi.group, m)))
        .expect("depth n leaves only the identity")
}

/// Elements of `g` congruent to the identity along the Iwahori step
/// filtration at depth m.
pub fn parahoric_members(ring: &ResidueRing, g: &FinGroup, m: u32) -> Vec<u64> {
    g.elems.iter().copied().filter(|&x| gl2::in_parahoric_step(ring, x, m)).collect()
}

/// Smallest m with the depth-m Iwahori step subgroup inside the kernel.
pub fn level_in_parahoric(ring: &ResidueRing, chi: &ClassFunction) -> u32 {
    (0..=2 * ring.n)
        .find(|&m| chi.kernel_contains(&parahoric_members(ring, &chi.group, m)))
        .expect("depth 2n leaves only the identity")
}

/// Upper unipotent elements (1, b; 0, 1) of `g` with val(b) >= r.
pub fn unipotent_members(ring: &ResidueRing, g: &FinGroup, r: u32) -> Vec<u64> {
    g.elems
        .iter()
        .copied()
        .filter(|&x| {
            let [a, b, c, d] = unpack(x);
            a == ring.one && d == ring.one && c == ring.zero && ring.val(b) >= r
        })
        .collect()
}

/// Smallest r such that the restriction to the depth-r unipotent subgroup
/// has a nonzero fixed vector.
pub fn fixed_threshold(ring: &ResidueRing, chi: &ClassFunction) -> u32 {
    (0..=ring.n)
        .find(|&r| !chi.average_over(&unipotent_members(ring, &chi.group, r)).is_zero())
        .expect("only the identity remains at depth n")
}

/// The unit character `eta` composed with the determinant.
pub fn det_character(ring: &Arc<ResidueRing>, g: &Arc<FinGroup>, eta: &ClassFunction) -> ClassFunction {
    ClassFunction::from_fn(g, eta.conductor(), |x| {
        eta.value_at(gl2::det(ring, x) as u64).clone()
    })
}

/// Whether no determinant twist lowers the congruence level.
pub fn is_minimal(
    ring: &Arc<ResidueRing>,
    chi: &ClassFunction,
    unit_table: &[ClassFunction],
) -> bool {
    let base = level_in_principal(ring, chi);
    unit_table.iter().all(|eta| {
        let twisted = chi.pointwise_mul(&det_character(ring, &chi.group, eta));
        level_in_principal(ring, &twisted) >= base
    })
}

/// Irreducibles of the full matrix group whose dimension, level, unipotent
/// fixed vectors and minimality match the unramified pattern.
pub fn unramified_candidates(
    ring: &Arc<ResidueRing>,
    k: &Arc<FinGroup>,
    table: &[ClassFunction],
    unit_table: &[ClassFunction],
) -> Vec<ClassFunction> {
    let q = ring.q as i64;
    let n = ring.n;
    let want = ratz((q - 1) * q.pow(n - 1));
    table
        .iter()
        .filter(|chi| {
            chi.degree() == want
                && chi.average_over(&unipotent_members(ring, k, n - 1)).is_zero()
                && level_in_principal(ring, chi) == n
                && is_minimal(ring, chi, unit_table)
        })
        .cloned()
        .collect()
}

/// Irreducibles of the Iwahori subgroup matching the ramified pattern:
/// dimension (q-1)q^(n-2), step level exactly 2n-2, and unipotent fixed
/// vectors appearing from depth n-1 on and not before.
pub fn ramified_candidates(
    ring: &Arc<ResidueRing>,
    kp: &Arc<FinGroup>,
    table: &[ClassFunction],
) -> Vec<ClassFunction> {
    assert!(ring.n >= 2, "the ramified pattern needs depth at least two");
    let q = ring.q as i64;
    let n = ring.n;
    let want = ratz((q - 1) * q.pow(n - 2));
    table
        .iter()
        .filter(|chi| {
            chi.degree() == want
                && level_in_parahoric(ring, chi) == 2 * n - 2
                && (0..n).all(|r| {
                    let fixed = !chi.average_over(&unipotent_members(ring, kp, r)).is_zero();
                    fixed == (r >= n - 1)
                })
        })
        .cloned()
        .collect()
}
