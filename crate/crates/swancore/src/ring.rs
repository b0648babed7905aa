//! Residue rings `O/pi^n` of a local field, with full lookup tables.
//!
//! Two shapes occur:
//!
//! * `mixed`: `O = Z_p` unramified of residue degree 1, so `O/pi^n = Z/p^n`;
//! * `equal`: `O = F_q[[t]]`, so `O/pi^n = F_q[t]/t^n` with `q = p^f`.
//!
//! Elements are dense indices `0..size` into precomputed addition,
//! multiplication, negation, inversion and valuation tables. Rings are tiny
//! (the cap is 128 elements), the groups built on top of them are not.

use thiserror::Error;

/// Index of a ring element into the lookup tables.
pub type RElt = u16;

const MAX_SIZE: u64 = 128;
const NO_INV: RElt = RElt::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// `Z/p^n`, mixed characteristic.
    Mixed,
    /// `F_q[t]/t^n`, equal characteristic.
    Equal,
}

#[derive(Error, Debug)]
pub enum RingError {
    #[error("ring spec must look like p:f:n:mixed or p:f:n:equal, got {0:?}")]
    BadSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("mixed characteristic requires residue degree f = 1, got f = {0}")]
    MixedNeedsPrimeField(u32),
    #[error("parameters p={p} f={f} n={n} give a ring of size {size}, cap is {MAX_SIZE}")]
    TooLarge { p: u32, f: u32, n: u32, size: u64 },
    #[error("f and n must be at least 1")]
    ZeroParameter,
}

/// A residue ring `O/pi^n` with all element operations tabulated.
pub struct ResidueRing {
    pub p: u32,
    pub f: u32,
    pub n: u32,
    pub kind: RingKind,
    /// Residue field cardinality `q = p^f`.
    pub q: u32,
    /// Ring cardinality `q^n`.
    pub size: u32,
    pub zero: RElt,
    pub one: RElt,
    /// Image of the uniformizer. Zero when `n = 1`.
    pub pi: RElt,
    add: Vec<RElt>,
    mul: Vec<RElt>,
    neg: Vec<RElt>,
    inv: Vec<RElt>,
    /// `pi`-adic valuation, with `val(0) = n`.
    val: Vec<u32>,
    units: Vec<RElt>,
}

fn is_prime(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over `F_p`, dense little-endian coefficients, used only while
/// building the `F_q` tables.
fn poly_mod_reduce(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m is monic of degree m.len()-1
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for j in 0..dm {
                let t = (a[shift + j] + (p - lead % p) * m[j] % p) % p;
                a[shift + j] = t % p;
            }
        }
        a.pop();
    }
    while a.len() > 1 && *a.last().unwrap() % p == 0 {
        a.pop();
    }
    a.iter_mut().for_each(|c| *c %= p);
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Decodes index `i` as the coefficient vector of a degree `< f` polynomial.
fn decode_poly(mut i: u32, f: u32, p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(f as usize);
    for _ in 0..f {
        out.push(i % p);
        i /= p;
    }
    out
}

fn encode_poly(c: &[u32], p: u32) -> u32 {
    let mut out = 0u32;
    for &x in c.iter().rev() {
        out = out * p + x % p;
    }
    out
}

/// Finds a monic irreducible polynomial of degree `f` over `F_p` by scanning
/// constant terms upward and testing divisibility by every smaller monic.
fn find_irreducible(p: u32, f: u32) -> Vec<u32> {
    if f == 1 {
        return vec![0, 1];
    }
    let pf = p.pow(f);
    'cand: for tail in 0..pf {
        let mut cand = decode_poly(tail, f, p);
        cand.push(1); // monic of degree f
        if cand[0] == 0 {
            continue; // divisible by x
        }
        // trial division by all monic polynomials of degree 1..=f/2
        for d in 1..=f / 2 {
            for dt in 0..p.pow(d) {
                let mut div = decode_poly(dt, d, p);
                div.push(1);
                if poly_divides(&div, &cand, p) {
                    continue 'cand;
                }
            }
        }
        return cand;
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

fn poly_divides(d: &[u32], a: &[u32], p: u32) -> bool {
    let r = poly_mod_reduce(a.to_vec(), d, p);
    r.len() == 1 && r[0] == 0
}

impl ResidueRing {
    pub fn new(p: u32, f: u32, n: u32, kind: RingKind) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if f == 0 || n == 0 {
            return Err(RingError::ZeroParameter);
        }
        if kind == RingKind::Mixed && f != 1 {
            return Err(RingError::MixedNeedsPrimeField(f));
        }
        let q64 = (p as u64).pow(f);
        let size64 = q64.pow(n);
        if size64 > MAX_SIZE {
            return Err(RingError::TooLarge { p, f, n, size: size64 });
        }
        let q = q64 as u32;
        let size = size64 as u32;

        let mut ring = ResidueRing {
            p,
            f,
            n,
            kind,
            q,
            size,
            zero: 0,
            one: 1,
            pi: 0,
            add: vec![0; (size * size) as usize],
            mul: vec![0; (size * size) as usize],
            neg: vec![0; size as usize],
            inv: vec![NO_INV; size as usize],
            val: vec![0; size as usize],
            units: Vec::new(),
        };

        match kind {
            RingKind::Mixed => ring.fill_mixed(),
            RingKind::Equal => ring.fill_equal(),
        }

        for a in 0..size as usize {
            // scan for the inverse; the tables are small enough for this
            for b in 0..size {
                if ring.mul[a * size as usize + b as usize] == ring.one {
                    ring.inv[a] = b as RElt;
                    break;
                }
            }
            if ring.inv[a] != NO_INV {
                ring.units.push(a as RElt);
            }
        }
        assert_eq!(
            ring.units.len() as u64,
            q64.pow(n) - q64.pow(n) / q64,
            "unit count must be q^n - q^(n-1)"
        );
        assert_eq!(ring.val[ring.zero as usize], n);
        Ok(ring)
    }

    fn fill_mixed(&mut self) {
        let m = self.size;
        for a in 0..m {
            for b in 0..m {
                self.add[(a * m + b) as usize] = ((a + b) % m) as RElt;
                self.mul[(a * m + b) as usize] = ((a * b) % m) as RElt;
            }
            self.neg[a as usize] = ((m - a) % m) as RElt;
            let mut v = 0;
            let mut x = a;
            while v < self.n && x % self.p == 0 {
                if x == 0 {
                    v = self.n;
                    break;
                }
                x /= self.p;
                v += 1;
            }
            self.val[a as usize] = v;
        }
        self.pi = (self.p % m) as RElt;
    }

    fn fill_equal(&mut self) {
        let (p, f, n, q) = (self.p, self.f, self.n, self.q);
        let modulus = find_irreducible(p, f);

        // F_q element tables, indexed by encoded coefficient vectors
        let fq_mul: Vec<u32> = (0..q * q)
            .map(|ij| {
                let (i, j) = (ij / q, ij % q);
                let prod = poly_mul(&decode_poly(i, f, p), &decode_poly(j, f, p), p);
                encode_poly(&poly_mod_reduce(prod, &modulus, p), p)
            })
            .collect();
        let fq_add: Vec<u32> = (0..q * q)
            .map(|ij| {
                let (i, j) = (ij / q, ij % q);
                let (a, b) = (decode_poly(i, f, p), decode_poly(j, f, p));
                let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
                encode_poly(&sum, p)
            })
            .collect();
        let fq_neg: Vec<u32> = (0..q)
            .map(|i| {
                let c: Vec<u32> = decode_poly(i, f, p).iter().map(|x| (p - x % p) % p).collect();
                encode_poly(&c, p)
            })
            .collect();

        let digits = |mut i: u32| -> Vec<u32> {
            let mut d = Vec::with_capacity(n as usize);
            for _ in 0..n {
                d.push(i % q);
                i /= q;
            }
            d
        };
        let undigits = |d: &[u32]| -> u32 {
            let mut out = 0;
            for &x in d.iter().rev() {
                out = out * q + x;
            }
            out
        };

        let m = self.size;
        for a in 0..m {
            let da = digits(a);
            for b in 0..m {
                let db = digits(b);
                let sum: Vec<u32> =
                    da.iter().zip(&db).map(|(&x, &y)| fq_add[(x * q + y) as usize]).collect();
                self.add[(a * m + b) as usize] = undigits(&sum) as RElt;
                // truncated convolution in t
                let mut prod = vec![0u32; n as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        if i + j < n as usize {
                            let t = fq_mul[(x * q + y) as usize];
                            prod[i + j] = fq_add[(prod[i + j] * q + t) as usize];
                        }
                    }
                }
                self.mul[(a * m + b) as usize] = undigits(&prod) as RElt;
            }
            let negd: Vec<u32> = da.iter().map(|&x| fq_neg[x as usize]).collect();
            self.neg[a as usize] = undigits(&negd) as RElt;
            self.val[a as usize] =
                da.iter().position(|&x| x != 0).map(|k| k as u32).unwrap_or(n);
        }
        self.pi = if n == 1 { 0 } else { q as RElt };
    }

    /// Parses `"p:f:n:mixed"` or `"p:f:n:equal"`.
    pub fn parse(spec: &str) -> Result<Self, RingError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || RingError::BadSpec(spec.to_string());
        if parts.len() != 4 {
            return Err(bad());
        }
        let p: u32 = parts[0].parse().map_err(|_| bad())?;
        let f: u32 = parts[1].parse().map_err(|_| bad())?;
        let n: u32 = parts[2].parse().map_err(|_| bad())?;
        let kind = match parts[3] {
            "mixed" | "m" => RingKind::Mixed,
            "equal" | "e" => RingKind::Equal,
            _ => return Err(bad()),
        };
        ResidueRing::new(p, f, n, kind)
    }

    pub fn spec_string(&self) -> String {
        let kind = match self.kind {
            RingKind::Mixed => "mixed",
            RingKind::Equal => "equal",
        };
        format!("{}:{}:{}:{}", self.p, self.f, self.n, kind)
    }

    #[inline]
    pub fn add(&self, a: RElt, b: RElt) -> RElt {
        self.add[(a as u32 * self.size + b as u32) as usize]
    }

    #[inline]
    pub fn sub(&self, a: RElt, b: RElt) -> RElt {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: RElt, b: RElt) -> RElt {
        self.mul[(a as u32 * self.size + b as u32) as usize]
    }

    #[inline]
    pub fn neg(&self, a: RElt) -> RElt {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: RElt) -> Option<RElt> {
        let i = self.inv[a as usize];
        (i != NO_INV).then_some(i)
    }

    /// `pi`-adic valuation of `a`, with `val(0) = n`.
    #[inline]
    pub fn val(&self, a: RElt) -> u32 {
        self.val[a as usize]
    }

    #[inline]
    pub fn is_unit(&self, a: RElt) -> bool {
        self.inv[a as usize] != NO_INV
    }

    /// The unit group as a sorted list of element indices.
    pub fn units(&self) -> &[RElt] {
        &self.units
    }

    /// Divides by the uniformizer, for elements of positive valuation.
    ///
    /// The quotient of the canonical representative is itself canonical:
    /// integer division by `p` in the mixed case, a digit shift in the equal
    /// case. Returns `None` on units.
    pub fn div_pi(&self, a: RElt) -> Option<RElt> {
        if self.val(a) == 0 {
            return None;
        }
        Some(match self.kind {
            RingKind::Mixed => (a as u32 / self.p) as RElt,
            RingKind::Equal => (a as u32 / self.q) as RElt,
        })
    }

    /// `pi^k` as a ring element.
    pub fn pi_pow(&self, k: u32) -> RElt {
        let mut out = self.one;
        for _ in 0..k {
            out = self.mul(out, self.pi);
        }
        out
    }
}
