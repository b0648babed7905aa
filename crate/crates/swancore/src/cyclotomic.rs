//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! An element is a rational coefficient vector on the power basis
//! `1, zeta, ..., zeta^(phi(m)-1)`. Reduction data for each conductor `m`
//! (the coordinates of `zeta^j` for every exponent that can appear during a
//! product or a Galois twist) is integral and gets computed once per `m`,
//! then shared behind a process wide cache.
//!
//! Character values land here; everything stays exact.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num::{BigInt, One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::Rat;

fn euler_phi(m: u32) -> u32 {
    let mut out = m;
    let mut x = m;
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            out -= out / p;
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out -= out / x;
    }
    out
}

/// Dense integer polynomials, little endian, for building reduction rows.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division must be exact");
    quot
}

fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut f = vec![0i64; m as usize + 1];
    f[0] = -1;
    f[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            f = poly_div_exact(&f, &cyclotomic_poly(d));
        }
    }
    f
}

struct Reduction {
    phi: usize,
    /// `rows[j]` holds the basis coordinates of `zeta^j`.
    rows: Vec<Vec<i64>>,
}

static REDUCTIONS: Lazy<Mutex<HashMap<u32, Arc<Reduction>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn reduction(m: u32) -> Arc<Reduction> {
    let mut cache = REDUCTIONS.lock().unwrap();
    Arc::clone(cache.entry(m).or_insert_with(|| {
        let phi = euler_phi(m) as usize;
        let min_poly = cyclotomic_poly(m);
        debug_assert_eq!(min_poly.len(), phi + 1);
        let top = (2 * phi - 1).max(m as usize);
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(top);
        for j in 0..top {
            if j < phi {
                let mut row = vec![0i64; phi];
                row[j] = 1;
                rows.push(row);
            } else {
                // zeta^j = zeta * zeta^(j-1), then substitute
                // zeta^phi = -(c_0 + ... + c_(phi-1) zeta^(phi-1))
                let prev = &rows[j - 1];
                let spill = prev[phi - 1];
                let mut row = vec![0i64; phi];
                for k in 1..phi {
                    row[k] = prev[k - 1];
                }
                for (k, r) in row.iter_mut().enumerate() {
                    *r -= spill * min_poly[k];
                }
                rows.push(row);
            }
        }
        Arc::new(Reduction { phi, rows })
    }))
}

/// An element of `Q(zeta_m)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    pub m: u32,
    coeffs: Vec<Rat>,
}

impl Cyclotomic {
    pub fn zero(m: u32) -> Self {
        Cyclotomic { m, coeffs: vec![Rat::zero(); euler_phi(m) as usize] }
    }

    pub fn from_rat(m: u32, r: Rat) -> Self {
        let mut out = Self::zero(m);
        out.coeffs[0] = r;
        out
    }

    pub fn one(m: u32) -> Self {
        Self::from_rat(m, Rat::one())
    }

    /// The root of unity `zeta_m^k`.
    pub fn root(m: u32, k: u32) -> Self {
        let red = reduction(m);
        let row = &red.rows[(k % m) as usize];
        Cyclotomic { m, coeffs: row.iter().map(|&c| Rat::from(BigInt::from(c))).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mixed conductors, lift first");
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { m: self.m, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mixed conductors, lift first");
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { m: self.m, coeffs }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mixed conductors, lift first");
        let red = reduction(self.m);
        let phi = red.phi;
        let mut out = vec![Rat::zero(); phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                for (k, &c) in red.rows[i + j].iter().enumerate() {
                    if c != 0 {
                        out[k] += &prod * Rat::from(BigInt::from(c));
                    }
                }
            }
        }
        Cyclotomic { m: self.m, coeffs: out }
    }

    /// Complex conjugation, `zeta` to `zeta^(m-1)`.
    pub fn conj(&self) -> Self {
        let m = self.m;
        let mut out = Self::zero(m);
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&Self::root(m, (m - j as u32) % m).scale(a));
            }
        }
        out
    }

    /// Reinterprets in `Q(zeta_target)` for a multiple of the conductor.
    pub fn lift_to(&self, target: u32) -> Self {
        assert_eq!(target % self.m, 0, "target conductor must be a multiple");
        if target == self.m {
            return self.clone();
        }
        let step = target / self.m;
        let mut out = Self::zero(target);
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&Self::root(target, j as u32 * step).scale(a));
            }
        }
        out
    }

    /// Coordinates on the power basis, for deterministic orderings.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Returns the value as a rational if it lies in the prime field.
    pub fn as_rat(&self) -> Option<Rat> {
        self.coeffs[1..].iter().all(Rat::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn expect_rat(&self, what: &str) -> Rat {
        self.as_rat().unwrap_or_else(|| panic!("{what} must be rational, got {self:?}"))
    }
}

impl std::fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = if c.abs().is_one() && j > 0 { String::new() } else { c.abs().to_string() };
            let var = match j {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{j}"),
            };
            let sep = if !mag.is_empty() && !var.is_empty() { "*" } else { "" };
            let sign = if c.is_negative() { "-" } else if terms.is_empty() { "" } else { "+" };
            terms.push(format!("{sign}{mag}{sep}{var}"));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{} (z = e^(2 pi i / {}))", terms.join(""), self.m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratz};

    #[test]
    fn phi_and_polynomials() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(72), 24);
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let i = Cyclotomic::root(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::from_rat(4, ratz(-1)));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let mut s = Cyclotomic::zero(3);
        for k in 0..3 {
            s = s.add(&Cyclotomic::root(3, k));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn conjugation_inverts_the_root() {
        for m in [5, 8, 12] {
            let z = Cyclotomic::root(m, 1);
            assert_eq!(z.conj(), Cyclotomic::root(m, m - 1));
            assert_eq!(z.mul(&z.conj()), Cyclotomic::one(m));
        }
    }

    #[test]
    fn galois_sum_is_rational() {
        // the full orbit sum of zeta_5 is -1
        let mut s = Cyclotomic::zero(5);
        for k in 1..5 {
            s = s.add(&Cyclotomic::root(5, k));
        }
        assert_eq!(s.as_rat(), Some(ratz(-1)));
        // a partial sum is not rational
        assert_eq!(Cyclotomic::root(5, 1).add(&Cyclotomic::root(5, 4)).as_rat(), None);
    }

    #[test]
    fn lifting_preserves_values() {
        let z3 = Cyclotomic::root(3, 1);
        assert_eq!(z3.lift_to(12), Cyclotomic::root(12, 4));
        let half = Cyclotomic::from_rat(6, rat(1, 2));
        assert_eq!(half.lift_to(12).as_rat(), Some(rat(1, 2)));
    }

    #[test]
    fn multiplication_matches_exponent_addition() {
        for m in [7, 9, 12] {
            for a in 0..m {
                for b in 0..m {
                    let lhs = Cyclotomic::root(m, a).mul(&Cyclotomic::root(m, b));
                    assert_eq!(lhs, Cyclotomic::root(m, (a + b) % m));
                }
            }
        }
    }
}
