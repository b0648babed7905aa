//! Finite groups given by explicit element lists and multiplication closures.
//!
//! Elements are opaque `u64` codes (packed matrices, ring indices, whatever
//! the caller uses). A group owns its sorted element list, an index map, and
//! its conjugacy classes, which are computed eagerly on construction. All
//! orderings are deterministic: elements ascend by code, the identity class
//! comes first, and the remaining classes appear in order of their smallest
//! member.

use std::collections::HashMap;
use std::sync::Arc;

use num::integer::lcm;

pub type MulFn = Arc<dyn Fn(u64, u64) -> u64 + Send + Sync>;
pub type InvFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

#[derive(Clone, Debug)]
pub struct Class {
    /// Smallest member by code, except for the identity class where it is
    /// the identity.
    pub rep: u64,
    /// Sorted member codes.
    pub members: Vec<u64>,
}

impl Class {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub struct FinGroup {
    pub name: String,
    /// Sorted element codes.
    pub elems: Vec<u64>,
    index: HashMap<u64, u32>,
    mul_fn: MulFn,
    inv_fn: InvFn,
    pub one: u64,
    pub classes: Vec<Class>,
    class_of: Vec<u32>,
}

impl FinGroup {
    /// Builds the group, verifying closure under product and inverse and
    /// computing conjugacy classes. Panics if the element list is not a
    /// group under the given operations.
    pub fn new(name: &str, mut elems: Vec<u64>, one: u64, mul_fn: MulFn, inv_fn: InvFn) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let index: HashMap<u64, u32> =
            elems.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        assert!(index.contains_key(&one), "identity must be listed in {name}");
        for &a in &elems {
            assert!(
                index.contains_key(&inv_fn(a)),
                "inverse closure fails in {name}"
            );
            for &b in &elems {
                assert!(
                    index.contains_key(&mul_fn(a, b)),
                    "product closure fails in {name}"
                );
            }
        }

        let n = elems.len();
        let mut class_of = vec![u32::MAX; n];
        let mut classes: Vec<Class> = Vec::new();
        let assign = |start: u64,
                          class_of: &mut Vec<u32>,
                          classes: &mut Vec<Class>| {
            let cid = classes.len() as u32;
            let mut members: Vec<u64> = elems
                .iter()
                .map(|&g| mul_fn(mul_fn(g, start), inv_fn(g)))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[index[&m] as usize] = cid;
            }
            classes.push(Class { rep: start, members });
        };
        assign(one, &mut class_of, &mut classes);
        for i in 0..n {
            if class_of[i] == u32::MAX {
                assign(elems[i], &mut class_of, &mut classes);
            }
        }
        assert_eq!(
            classes.iter().map(Class::size).sum::<usize>(),
            n,
            "classes must partition {name}"
        );

        FinGroup { name: name.to_string(), elems, index, mul_fn, inv_fn, one, classes, class_of }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (self.mul_fn)(a, b)
    }

    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        (self.inv_fn)(a)
    }

    pub fn pow(&self, a: u64, k: u64) -> u64 {
        let mut out = self.one;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        out
    }

    pub fn contains(&self, a: u64) -> bool {
        self.index.contains_key(&a)
    }

    /// Index of `a` in the sorted element list.
    pub fn idx(&self, a: u64) -> u32 {
        self.index[&a]
    }

    pub fn class_index_of(&self, a: u64) -> u32 {
        self.class_of[self.index[&a] as usize]
    }

    pub fn conjugate(&self, g: u64, x: u64) -> u64 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u64) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.one {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent of the group, the lcm of the class representative orders.
    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1, |e, c| lcm(e, self.element_order(c.rep)))
    }

    pub fn centralizer_order(&self, a: u64) -> usize {
        self.order() / self.classes[self.class_index_of(a) as usize].size()
    }

    /// Builds a subgroup from a member list, sharing the operation closures.
    /// The list must actually be closed; the constructor checks.
    pub fn subgroup(&self, name: &str, members: Vec<u64>) -> FinGroup {
        for &m in &members {
            assert!(self.contains(m), "subgroup member {m} not in {}", self.name);
        }
        FinGroup::new(name, members, self.one, Arc::clone(&self.mul_fn), Arc::clone(&self.inv_fn))
    }

    /// Builds the subgroup of elements satisfying `pred`.
    pub fn subgroup_where(&self, name: &str, pred: impl Fn(u64) -> bool) -> FinGroup {
        self.subgroup(name, self.elems.iter().copied().filter(|&g| pred(g)).collect())
    }

    /// Left coset representatives of a subgroup, smallest code per coset.
    pub fn coset_reps(&self, h: &FinGroup) -> Vec<u64> {
        assert_eq!(self.order() % h.order(), 0);
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::with_capacity(self.order() / h.order());
        for (i, &g) in self.elems.iter().enumerate() {
            if seen[i] {
                continue;
            }
            reps.push(g);
            for &x in &h.elems {
                seen[self.idx(self.mul(g, x)) as usize] = true;
            }
        }
        reps
    }
}
