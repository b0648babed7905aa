//! Ramification filtrations of ball stabilizers acting on the boundary.
//!
//! Every nontrivial element of the stabilizer displaces the boundary point
//! by a definite amount, recorded as a [`LogPair`]: minus the flat and sharp
//! logarithms of the displacement norm. Grouping elements by displacement
//! yields a descending chain of subgroups with finitely many jumps; passing
//! the jump data through the Herbrand sums produces the upper numbering
//! used by the conductor pairings.
//!
//! The depth of an upper triangular element `(a b; 0 a^-1)` over `O/pi^n`
//! with residue cardinality `q` depends only on `val(a-1)` and `val(b)`:
//!
//! * `val(a-1) = 0`: depth `(0, 0)`, the tame shell;
//! * `0 < val(a-1) = i < n`: depth `(0, q^(2i) - 1)`;
//! * `a = 1`, `val(b) = j`: depth `(1/((q-1) q^(n-1-j)), -q^(2n-1) - 1)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::gl2::{mat_mul, unpack, weyl_swap};
use crate::group::FinGroup;
use crate::logpair::{LogPair, UpperJump};
use crate::ring::ResidueRing;
use crate::{rat, ratz, Rat};

/// Depth of a ball stabilizer element, `None` at the identity.
pub fn depth_pair(r: &ResidueRing, m: u64) -> Option<LogPair> {
    let [a, b, c, d] = unpack(m);
    assert_eq!(c, r.zero, "depth is defined on upper triangular elements");
    assert_eq!(r.mul(a, d), r.one, "depth needs an inverse pair on the diagonal");
    let (q, n) = (r.q as i64, r.n);
    let i = r.val(r.sub(a, r.one));
    if i == 0 {
        return Some(LogPair::new(Rat::zero(), 0));
    }
    if i < n {
        return Some(LogPair::new(Rat::zero(), q.pow(2 * i) - 1));
    }
    // diagonal is trivial, depth is carried by the unipotent part
    let j = r.val(b);
    if j == n {
        return None;
    }
    let denom = (q - 1) * q.pow(n - 1 - j);
    Some(LogPair::new(rat(1, denom), -q.pow(2 * n - 1) - 1))
}

/// Depth on the opposite stabilizer `(u 0; c u^-1)`, which the Weyl swap
/// carries onto upper triangular form.
pub fn opposite_depth_pair(r: &ResidueRing, m: u64) -> Option<LogPair> {
    let w = weyl_swap(r);
    depth_pair(r, mat_mul(r, mat_mul(r, w, m), w))
}

/// A single jump of the filtration: all elements sharing one depth, plus
/// the order of the subgroup they generate together with everything deeper.
#[derive(Clone, Debug)]
pub struct Jump {
    pub pair: LogPair,
    /// Sorted codes of the elements at exactly this depth.
    pub members: Vec<u64>,
    /// Order of the filtration subgroup at this jump.
    pub subgroup_order: u64,
}

pub struct Filtration {
    pub group: Arc<FinGroup>,
    /// Jumps in increasing depth, so the subgroup orders decrease.
    pub jumps: Vec<Jump>,
    /// Nonidentity elements of depth `(0, 0)`. They sit in the stabilizer
    /// but in no filtration subgroup.
    pub tame: Vec<u64>,
}

/// Builds the filtration of `group` under the given depth assignment.
/// `depth` must return `None` exactly at the identity. Each filtration
/// level is checked to be closed under multiplication.
pub fn filtration_of(
    group: &Arc<FinGroup>,
    depth: impl Fn(u64) -> Option<LogPair>,
) -> Filtration {
    let mut shells: BTreeMap<(Rat, i64), Vec<u64>> = BTreeMap::new();
    let mut tame = Vec::new();
    for &g in &group.elems {
        match depth(g) {
            None => assert_eq!(g, group.one, "only the identity may have no depth"),
            Some(p) if p.flat.is_zero() && p.sharp == 0 => tame.push(g),
            Some(p) => shells.entry(p.log_key()).or_default().push(g),
        }
    }

    let mut jumps: Vec<Jump> = Vec::with_capacity(shells.len());
    let mut deeper: u64 = 1; // the identity
    for ((flat, sharp), members) in shells.into_iter().rev() {
        deeper += members.len() as u64;
        jumps.push(Jump { pair: LogPair::new(flat, sharp), members, subgroup_order: deeper });
    }
    jumps.reverse();

    let filt = Filtration { group: Arc::clone(group), jumps, tame };
    for i in 0..filt.jumps.len() {
        filt.assert_level_closed(i);
    }
    filt
}

impl Filtration {
    pub fn ambient_order(&self) -> u64 {
        self.group.order() as u64
    }

    pub fn pairs(&self) -> Vec<LogPair> {
        self.jumps.iter().map(|j| j.pair.clone()).collect()
    }

    pub fn subgroup_orders(&self) -> Vec<u64> {
        self.jumps.iter().map(|j| j.subgroup_order).collect()
    }

    /// Members of the `i`-th filtration subgroup: the identity plus every
    /// shell at depth `i` or beyond.
    pub fn subgroup_members(&self, i: usize) -> Vec<u64> {
        let mut out = vec![self.group.one];
        for j in &self.jumps[i..] {
            out.extend_from_slice(&j.members);
        }
        out.sort_unstable();
        out
    }

    fn assert_level_closed(&self, i: usize) {
        let members = self.subgroup_members(i);
        for &a in &members {
            for &b in &members {
                let ab = self.group.mul(a, b);
                assert!(
                    members.binary_search(&ab).is_ok(),
                    "filtration level {i} of {} is not a subgroup",
                    self.group.name
                );
            }
        }
    }

    /// Upper numbering of the jumps through the Herbrand sums: the flat
    /// part accumulates `(flat_i - flat_(i-1)) |G_i|`, the sharp part
    /// accumulates `(sharp_i - sharp_(i-1)) |G_i| / |G|`.
    pub fn upper_jumps(&self) -> Vec<UpperJump> {
        let ambient = ratz(self.ambient_order() as i64);
        let mut out = Vec::with_capacity(self.jumps.len());
        let mut flat_acc = Rat::zero();
        let mut sharp_acc = Rat::zero();
        let mut prev = LogPair::new(Rat::zero(), 0);
        for j in &self.jumps {
            let order = ratz(j.subgroup_order as i64);
            flat_acc += (&j.pair.flat - &prev.flat) * &order;
            sharp_acc += ratz(j.pair.sharp - prev.sharp) * &order / &ambient;
            prev = j.pair.clone();
            out.push(UpperJump { flat: flat_acc.clone(), sharp: sharp_acc.clone() });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::ball_stabilizer;
    use crate::ring::RingKind;

    fn filt(p: u32, f: u32, n: u32, kind: RingKind) -> Filtration {
        let ring = Arc::new(ResidueRing::new(p, f, n, kind).unwrap());
        let g = Arc::new(ball_stabilizer(&ring));
        filtration_of(&g, |m| depth_pair(&ring, m))
    }

    #[test]
    fn depth_two_binary_filtration() {
        let f = filt(2, 1, 2, RingKind::Mixed);
        assert_eq!(f.pairs(), vec![
            LogPair::new(ratz(0), 3),
            LogPair::new(rat(1, 2), -9),
            LogPair::new(ratz(1), -9),
        ]);
        assert_eq!(f.subgroup_orders(), vec![8, 4, 2]);
        assert!(f.tame.is_empty(), "no tame shell over residue field of size two");
        let upper = f.upper_jumps();
        let flats: Vec<Rat> = upper.iter().map(|u| u.flat.clone()).collect();
        let sharps: Vec<Rat> = upper.iter().map(|u| u.sharp.clone()).collect();
        assert_eq!(flats, vec![ratz(0), ratz(2), ratz(3)]);
        assert_eq!(sharps, vec![ratz(3), ratz(-3), ratz(-3)]);
    }

    #[test]
    fn depth_one_ternary_filtration() {
        let f = filt(3, 1, 1, RingKind::Mixed);
        assert_eq!(f.pairs(), vec![LogPair::new(rat(1, 2), -4)]);
        assert_eq!(f.subgroup_orders(), vec![3]);
        assert_eq!(f.tame.len(), 3, "three elements with nontrivial diagonal");
        let upper = f.upper_jumps();
        assert_eq!(upper[0].flat, rat(3, 2));
        assert_eq!(upper[0].sharp, ratz(-2));
    }

    #[test]
    fn quartic_residue_field_wild_jump() {
        let ring = Arc::new(ResidueRing::new(2, 2, 1, RingKind::Equal).unwrap());
        let g = Arc::new(ball_stabilizer(&ring));
        let f = filtration_of(&g, |m| depth_pair(&ring, m));
        assert_eq!(f.pairs(), vec![LogPair::new(rat(1, 3), -5)]);
        let upper = f.upper_jumps();
        assert_eq!(upper[0].flat, rat(4, 3));
        assert_eq!(upper[0].sharp, rat(-5, 3));
    }

    #[test]
    fn opposite_end_filtration_swaps_roles_of_the_entries() {
        let ring = Arc::new(ResidueRing::new(2, 1, 2, RingKind::Mixed).unwrap());
        let h = Arc::new(crate::gl2::opposite_stabilizer(&ring));
        let f = filtration_of(&h, |m| opposite_depth_pair(&ring, m));
        assert_eq!(f.pairs(), vec![LogPair::new(ratz(0), 3), LogPair::new(ratz(1), -9)]);
        assert_eq!(f.subgroup_orders(), vec![4, 2]);
    }

    #[test]
    fn shell_sizes_account_for_every_element() {
        for (p, f_, n, kind) in [
            (2, 1, 3, RingKind::Mixed),
            (3, 1, 2, RingKind::Mixed),
            (2, 2, 1, RingKind::Equal),
        ] {
            let f = filt(p, f_, n, kind);
            let shell_total: u64 = f.jumps.iter().map(|j| j.members.len() as u64).sum();
            assert_eq!(shell_total + f.tame.len() as u64 + 1, f.ambient_order());
            // subgroup orders are the suffix sums plus the identity
            assert_eq!(f.jumps[0].subgroup_order, shell_total + 1);
            for w in f.jumps.windows(2) {
                assert_eq!(
                    w[0].subgroup_order,
                    w[1].subgroup_order + w[0].members.len() as u64
                );
                assert!(w[0].pair.log_key() < w[1].pair.log_key(), "depths strictly increase");
            }
        }
    }
}
