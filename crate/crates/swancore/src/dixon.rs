//! Exact character tables by the eigenvector method.
//!
//! The class sums of a finite group act on the center of the group algebra;
//! over a prime field `F_l` with `l = 1 mod exp(G)` and `l > 2 sqrt(|G|)`
//! that action is split semisimple, and its simultaneous eigenvectors are
//! the central characters. We split the coordinate space along one class
//! matrix at a time, read off degrees from the first orthogonality
//! relation, and lift the modular values back to the cyclotomic field
//! `Q(zeta_exp(G))` by discrete Fourier inversion over the powers of each
//! class representative.
//!
//! Everything about the procedure is deterministic: subspaces are kept in
//! first-in-first-out order, eigenvalues are scanned in ascending order,
//! and the finished table is sorted by degree and then by value
//! coordinates. The result is exact; the modulus is only scaffolding.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::classfn::ClassFunction;
use crate::cyclotomic::Cyclotomic;
use crate::group::FinGroup;
use crate::{ratz, Rat};

#[inline]
fn mm(a: u64, b: u64, l: u64) -> u64 {
    a * b % l
}

fn mpow(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut out = 1 % l;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            out = mm(out, b, l);
        }
        b = mm(b, b, l);
        e >>= 1;
    }
    out
}

fn minv(a: u64, l: u64) -> u64 {
    mpow(a, l - 2, l)
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn is_prime(m: u64) -> bool {
    m > 1 && prime_factors(m) == [m]
}

/// Smallest prime congruent to 1 mod `e` and larger than `2 sqrt(order)`.
fn working_prime(e: u64, order: u64) -> u64 {
    let mut l = e + 1;
    loop {
        if l * l > 4 * order && is_prime(l) {
            return l;
        }
        l += e;
    }
}

fn primitive_root(l: u64) -> u64 {
    let fs = prime_factors(l - 1);
    (2..l)
        .find(|&g| fs.iter().all(|&p| mpow(g, (l - 1) / p, l) != 1))
        .expect("prime fields have primitive roots")
}

/// A subspace of the class coordinate space, as reduced basis columns with
/// identity on the pivot rows. Coordinates of a member vector with respect
/// to the basis can be read off at the pivot rows directly.
struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Space {
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Column reduction to a reduced echelon basis with sorted pivot rows.
fn reduce_columns(vecs: Vec<Vec<u64>>, l: u64) -> Space {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut v in vecs {
        for (b, &p) in basis.iter().zip(&pivots) {
            let c = v[p];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + l - mm(c, *y, l)) % l;
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let s = minv(v[p], l);
            v.iter_mut().for_each(|x| *x = mm(*x, s, l));
            for b in basis.iter_mut() {
                let c = b[p];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = (*x + l - mm(c, *y, l)) % l;
                    }
                }
            }
            basis.push(v);
            pivots.push(p);
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let basis = order.iter().map(|&i| basis[i].clone()).collect();
    let mut pivots: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();
    pivots.sort_unstable();
    Space { basis, pivots }
}

/// Restriction of a class matrix to a subspace, in basis coordinates.
fn restrict(m: &[Vec<u64>], sp: &Space, l: u64) -> Vec<Vec<u64>> {
    let d = sp.dim();
    let mut r = vec![vec![0u64; d]; d];
    for (c, b) in sp.basis.iter().enumerate() {
        for (row, &p) in sp.pivots.iter().enumerate() {
            let mut acc = 0u64;
            for (k, &bk) in b.iter().enumerate() {
                if bk != 0 {
                    acc = (acc + mm(m[p][k], bk, l)) % l;
                }
            }
            r[row][c] = acc;
        }
    }
    r
}

/// Similarity reduction to upper Hessenberg form.
fn hessenberg(mut a: Vec<Vec<u64>>, l: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    for c in 0..d.saturating_sub(2) {
        let pivot = (c + 1..d).find(|&r| a[r][c] != 0);
        let Some(pr) = pivot else { continue };
        if pr != c + 1 {
            a.swap(pr, c + 1);
            for row in a.iter_mut() {
                row.swap(pr, c + 1);
            }
        }
        let inv = minv(a[c + 1][c], l);
        for r2 in c + 2..d {
            let f = mm(a[r2][c], inv, l);
            if f == 0 {
                continue;
            }
            for j in 0..d {
                let sub = mm(f, a[c + 1][j], l);
                a[r2][j] = (a[r2][j] + l - sub) % l;
            }
            for i in 0..d {
                let add = mm(f, a[i][r2], l);
                a[i][c + 1] = (a[i][c + 1] + add) % l;
            }
        }
    }
    a
}

/// Characteristic polynomial, monic, low coefficients first.
fn charpoly(a: &[Vec<u64>], l: u64) -> Vec<u64> {
    let d = a.len();
    let h = hessenberg(a.to_vec(), l);
    // p_i = det(t I_i - H_i), expanded along the last column
    let mut ps: Vec<Vec<u64>> = vec![vec![1]];
    for i in 1..=d {
        let prev = &ps[i - 1];
        let diag = h[i - 1][i - 1];
        let mut p = vec![0u64; prev.len() + 1];
        for (k, &c) in prev.iter().enumerate() {
            p[k + 1] = (p[k + 1] + c) % l;
            p[k] = (p[k] + l - mm(diag, c, l)) % l;
        }
        let mut prod = 1u64;
        for k in (0..i.saturating_sub(1)).rev() {
            prod = mm(prod, h[k + 1][k], l);
            if prod == 0 {
                break;
            }
            let coef = mm(h[k][i - 1], prod, l);
            if coef == 0 {
                continue;
            }
            for (j, &c) in ps[k].iter().enumerate() {
                p[j] = (p[j] + l - mm(coef, c, l)) % l;
            }
        }
        ps.push(p);
    }
    ps.pop().unwrap()
}

fn poly_eval(p: &[u64], x: u64, l: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| (mm(acc, x, l) + c) % l)
}

/// Null space of a square matrix, as column vectors, deterministic order.
fn kernel(mut a: Vec<Vec<u64>>, l: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; d];
    let mut row = 0;
    for col in 0..d {
        let Some(pr) = (row..d).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, pr);
        let inv = minv(a[row][col], l);
        for j in 0..d {
            a[row][j] = mm(a[row][j], inv, l);
        }
        for r in 0..d {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for j in 0..d {
                    let sub = mm(f, a[row][j], l);
                    a[r][j] = (a[r][j] + l - sub) % l;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == d {
            break;
        }
    }
    let mut out = Vec::new();
    for free in 0..d {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for col in 0..d {
            if let Some(r) = pivot_of_col[col] {
                v[col] = (l - a[r][free]) % l;
            }
        }
        out.push(v);
    }
    out
}

/// The class matrix of class `i`: entry `(j, k)` counts elements `x` of
/// class `i` with `x^-1 g_k` in class `j`.
fn class_matrix(g: &FinGroup, i: usize, l: u64) -> Vec<Vec<u64>> {
    let k = g.classes.len();
    let mut m = vec![vec![0u64; k]; k];
    for &x in &g.classes[i].members {
        let xi = g.inv(x);
        for (kc, class) in g.classes.iter().enumerate() {
            let j = g.class_index_of(g.mul(xi, class.rep)) as usize;
            m[j][kc] = (m[j][kc] + 1) % l;
        }
    }
    m
}

/// The full table of irreducible characters, sorted by degree and then by
/// value coordinates. Values live in `Q(zeta_exp(G))`.
pub fn character_table(group: &Arc<FinGroup>) -> Vec<ClassFunction> {
    let g = group.as_ref();
    let k = g.classes.len();
    let order = g.order() as u64;
    let e = g.exponent();
    let l = working_prime(e, order);

    // split the class coordinate space into common eigenvectors
    let full = reduce_columns(
        (0..k)
            .map(|i| {
                let mut v = vec![0u64; k];
                v[i] = 1;
                v
            })
            .collect(),
        l,
    );
    let mut spaces: VecDeque<Space> = VecDeque::from([full]);
    for i in 1..k {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let m = class_matrix(g, i, l);
        let mut next: VecDeque<Space> = VecDeque::new();
        while let Some(sp) = spaces.pop_front() {
            if sp.dim() == 1 {
                next.push_back(sp);
                continue;
            }
            let r = restrict(&m, &sp, l);
            let cp = charpoly(&r, l);
            let roots: Vec<u64> = (0..l).filter(|&x| poly_eval(&cp, x, l) == 0).collect();
            if roots.len() == 1 {
                next.push_back(sp);
                continue;
            }
            let mut split_total = 0;
            for &lam in &roots {
                let mut shifted = r.clone();
                for (idx, row) in shifted.iter_mut().enumerate() {
                    row[idx] = (row[idx] + l - lam) % l;
                }
                let kern = kernel(shifted, l);
                split_total += kern.len();
                let lifted: Vec<Vec<u64>> = kern
                    .iter()
                    .map(|v| {
                        let mut w = vec![0u64; k];
                        for (c, &vc) in v.iter().enumerate() {
                            if vc != 0 {
                                for (wk, &bk) in w.iter_mut().zip(&sp.basis[c]) {
                                    *wk = (*wk + mm(vc, bk, l)) % l;
                                }
                            }
                        }
                        w
                    })
                    .collect();
                next.push_back(reduce_columns(lifted, l));
            }
            assert_eq!(split_total, sp.dim(), "class action must be semisimple");
        }
        spaces = next;
    }
    assert!(
        spaces.iter().all(|s| s.dim() == 1),
        "one pass over the class matrices must separate all central characters"
    );

    // normalize: coordinate at the identity class is 1
    let omegas: Vec<Vec<u64>> = spaces
        .into_iter()
        .map(|sp| {
            let v = &sp.basis[0];
            assert_ne!(v[0], 0, "central characters are nonzero at the identity");
            let s = minv(v[0], l);
            v.iter().map(|&x| mm(x, s, l)).collect()
        })
        .collect();
    assert_eq!(omegas.len(), k, "as many irreducibles as classes");

    let sizes: Vec<u64> = g.classes.iter().map(|c| c.size() as u64).collect();
    let inv_sizes: Vec<u64> = sizes.iter().map(|&s| minv(s % l, l)).collect();
    let inverse_class: Vec<usize> = g
        .classes
        .iter()
        .map(|c| g.class_index_of(g.inv(c.rep)) as usize)
        .collect();

    // powers of each representative, for the Fourier lift
    let power_class: Vec<Vec<usize>> = g
        .classes
        .iter()
        .map(|c| (0..e).map(|v| g.class_index_of(g.pow(c.rep, v)) as usize).collect())
        .collect();
    let theta = mpow(primitive_root(l), (l - 1) / e, l);
    let theta_pow: Vec<u64> = (0..e).map(|t| mpow(theta, t, l)).collect();
    let inv_e = minv(e % l, l);

    let mut table: Vec<(u64, Vec<Cyclotomic>)> = omegas
        .iter()
        .map(|w| {
            let mut s = 0u64;
            for j in 0..k {
                s = (s + mm(mm(w[j], w[inverse_class[j]], l), inv_sizes[j], l)) % l;
            }
            let target = mm(order % l, minv(s, l), l);
            let deg = (1..)
                .take_while(|d| d * d <= order)
                .find(|&d| mm(d % l, d % l, l) == target)
                .expect("degree must divide the group order and be at most sqrt(|G|)");

            let chi_bar: Vec<u64> =
                (0..k).map(|j| mm(mm(deg % l, w[j], l), inv_sizes[j], l)).collect();
            let values: Vec<Cyclotomic> = (0..k)
                .map(|j| {
                    let mut val = Cyclotomic::zero(e as u32);
                    let mut total = 0u64;
                    for u in 0..e {
                        let mut m_u = 0u64;
                        for v in 0..e {
                            let t = ((e - u * v % e) % e) as usize;
                            m_u = (m_u + mm(chi_bar[power_class[j][v as usize]], theta_pow[t], l)) % l;
                        }
                        m_u = mm(m_u, inv_e, l);
                        assert!(m_u <= deg, "eigenvalue multiplicities are bounded by the degree");
                        if m_u > 0 {
                            total += m_u;
                            val = val
                                .add(&Cyclotomic::root(e as u32, u as u32).scale(&ratz(m_u as i64)));
                        }
                    }
                    assert_eq!(total, deg, "multiplicities sum to the degree");
                    val
                })
                .collect();
            (deg, values)
        })
        .collect();

    table.sort_by(|(da, va), (db, vb)| {
        da.cmp(db).then_with(|| {
            for (x, y) in va.iter().zip(vb) {
                match x.coeffs().cmp(y.coeffs()) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let chars: Vec<ClassFunction> = table
        .into_iter()
        .map(|(_, values)| ClassFunction::new(Arc::clone(group), values))
        .collect();

    // verification net: degrees, norms, and the regular character
    let sum_sq: Rat = chars.iter().map(|c| c.degree() * c.degree()).sum();
    assert_eq!(sum_sq, ratz(order as i64), "degree squares must sum to |G|");
    for c in &chars {
        assert!(c.is_irreducible(), "table rows must have norm one");
    }
    for j in 1..k {
        let mut acc = Cyclotomic::zero(e as u32);
        for c in &chars {
            acc = acc.add(&c.class_values()[j].scale(&c.degree()));
        }
        assert!(acc.is_zero(), "regular character must vanish off the identity");
    }

    chars
}
