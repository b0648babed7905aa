//! Two-by-two matrix groups over a residue ring.
//!
//! A matrix `(a b; c d)` is packed into a `u64` as four 16-bit element
//! indices, `a` lowest. Group elements everywhere in this crate are these
//! packed codes, so the closures handed to [`FinGroup`] are plain table
//! arithmetic.
//!
//! Besides the full unit group this module knows the handful of subgroups
//! the conductor computations live on: the stabilizer of the standard
//! vertex ball (upper triangular with inverse diagonal), its wild one
//! parameter pieces, the standard parahoric with its square-root
//! congruence filtration, and the principal congruence kernels.

use std::sync::Arc;

use crate::group::{FinGroup, InvFn, MulFn};
use crate::ring::{RElt, ResidueRing};

#[inline]
pub fn pack(a: RElt, b: RElt, c: RElt, d: RElt) -> u64 {
    a as u64 | (b as u64) << 16 | (c as u64) << 32 | (d as u64) << 48
}

#[inline]
pub fn unpack(m: u64) -> [RElt; 4] {
    [m as RElt, (m >> 16) as RElt, (m >> 32) as RElt, (m >> 48) as RElt]
}

pub fn identity(r: &ResidueRing) -> u64 {
    pack(r.one, r.zero, r.zero, r.one)
}

pub fn mat_mul(r: &ResidueRing, x: u64, y: u64) -> u64 {
    let [a, b, c, d] = unpack(x);
    let [e, f, g, h] = unpack(y);
    pack(
        r.add(r.mul(a, e), r.mul(b, g)),
        r.add(r.mul(a, f), r.mul(b, h)),
        r.add(r.mul(c, e), r.mul(d, g)),
        r.add(r.mul(c, f), r.mul(d, h)),
    )
}

pub fn det(r: &ResidueRing, x: u64) -> RElt {
    let [a, b, c, d] = unpack(x);
    r.sub(r.mul(a, d), r.mul(b, c))
}

/// Inverse by adjugate; panics on non-units.
pub fn mat_inv(r: &ResidueRing, x: u64) -> u64 {
    let [a, b, c, d] = unpack(x);
    let di = r.inv(det(r, x)).expect("matrix must be invertible");
    pack(
        r.mul(di, d),
        r.mul(di, r.neg(b)),
        r.mul(di, r.neg(c)),
        r.mul(di, a),
    )
}

fn ops(ring: &Arc<ResidueRing>) -> (MulFn, InvFn) {
    let r1 = Arc::clone(ring);
    let r2 = Arc::clone(ring);
    (
        Arc::new(move |x, y| mat_mul(&r1, x, y)),
        Arc::new(move |x| mat_inv(&r2, x)),
    )
}

/// The full unit group `GL_2(O/pi^n)`.
pub fn full_group(ring: &Arc<ResidueRing>) -> FinGroup {
    let mut elems = Vec::new();
    for a in 0..ring.size as RElt {
        for b in 0..ring.size as RElt {
            for c in 0..ring.size as RElt {
                for d in 0..ring.size as RElt {
                    let m = pack(a, b, c, d);
                    if ring.is_unit(det(ring, m)) {
                        elems.push(m);
                    }
                }
            }
        }
    }
    let (mul, inv) = ops(ring);
    FinGroup::new(&format!("GL2({})", ring.spec_string()), elems, identity(ring), mul, inv)
}

/// The vertex ball stabilizer `{(a b; 0 a^-1)}`, of order `(q-1) q^(2n-1)`.
pub fn ball_stabilizer(ring: &Arc<ResidueRing>) -> FinGroup {
    let mut elems = Vec::new();
    for &a in ring.units() {
        let ai = ring.inv(a).unwrap();
        for b in 0..ring.size as RElt {
            elems.push(pack(a, b, ring.zero, ai));
        }
    }
    let (mul, inv) = ops(ring);
    FinGroup::new(&format!("B({})", ring.spec_string()), elems, identity(ring), mul, inv)
}

/// The opposite ball stabilizer `{(u 0; c u^-1) : val(c) >= 1}` inside the
/// parahoric, conjugate to a subgroup of [`ball_stabilizer`] by the Weyl
/// swap.
pub fn opposite_stabilizer(ring: &Arc<ResidueRing>) -> FinGroup {
    let mut elems = Vec::new();
    for &u in ring.units() {
        let ui = ring.inv(u).unwrap();
        for c in 0..ring.size as RElt {
            if ring.val(c) >= 1 {
                elems.push(pack(u, ring.zero, c, ui));
            }
        }
    }
    let (mul, inv) = ops(ring);
    FinGroup::new(&format!("Bop({})", ring.spec_string()), elems, identity(ring), mul, inv)
}

pub fn weyl_swap(r: &ResidueRing) -> u64 {
    pack(r.zero, r.one, r.one, r.zero)
}

/// Membership in the principal congruence kernel `1 + pi^m M_2`.
pub fn in_principal(r: &ResidueRing, x: u64, m: u32) -> bool {
    let [a, b, c, d] = unpack(x);
    let m = m.min(r.n);
    r.val(r.sub(a, r.one)) >= m
        && r.val(b) >= m
        && r.val(c) >= m
        && r.val(r.sub(d, r.one)) >= m
}

/// Membership in the parahoric filtration step of depth `m`, the square
/// root pattern: with `n1 = floor(m/2)` and `n2 = ceil(m/2)`, diagonal
/// entries are `1 mod pi^n2`, the upper right is `0 mod pi^n1`, the lower
/// left `0 mod pi^(n1+1)`. Depth 0 is the parahoric itself.
pub fn in_parahoric_step(r: &ResidueRing, x: u64, m: u32) -> bool {
    let [a, b, c, d] = unpack(x);
    let n1 = (m / 2).min(r.n);
    let n2 = m.div_ceil(2).min(r.n);
    let low = (m / 2 + 1).min(r.n);
    r.val(r.sub(a, r.one)) >= n2
        && r.val(b) >= n1
        && r.val(c) >= low
        && r.val(r.sub(d, r.one)) >= n2
}

/// Largest `m <= 2n` with `x` in the depth `m` parahoric step, or `None`
/// when `x` is not in the parahoric at all.
pub fn parahoric_depth(r: &ResidueRing, x: u64) -> Option<u32> {
    if !in_parahoric_step(r, x, 0) {
        return None;
    }
    let mut m = 0;
    while m < 2 * r.n && in_parahoric_step(r, x, m + 1) {
        m += 1;
    }
    Some(m)
}

/// Conjugation by the degree one Atkin-Lehner element: `(a b; c d)` goes to
/// `(d, c/pi; pi b, a)`. Only defined on the parahoric, where the lower
/// left entry has positive valuation; the division is by canonical lift.
pub fn atkin_lehner_conj(r: &ResidueRing, x: u64) -> u64 {
    let [a, b, c, d] = unpack(x);
    let c_over = r.div_pi(c).expect("Atkin-Lehner conjugation needs val(c) >= 1");
    pack(d, c_over, r.mul(r.pi, b), a)
}
