//! Class functions with exact cyclotomic values.
//!
//! A class function stores one value per conjugacy class of its group, all
//! in the same cyclotomic field. Restriction, induction, pointwise algebra,
//! the invariant pairing and fixed vector dimensions are provided here;
//! everything downstream (conductor pairings, fingerprint tests, break
//! decompositions) reduces to these.

use std::sync::Arc;

use num::integer::lcm;
use num::{One, Signed};

use crate::cyclotomic::Cyclotomic;
use crate::group::FinGroup;
use crate::{ratz, Rat};

#[derive(Clone)]
pub struct ClassFunction {
    pub group: Arc<FinGroup>,
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(group: Arc<FinGroup>, values: Vec<Cyclotomic>) -> Self {
        assert_eq!(values.len(), group.classes.len(), "one value per class");
        let m = values[0].m;
        assert!(values.iter().all(|v| v.m == m), "values must share a conductor");
        ClassFunction { group, values }
    }

    /// Evaluates `f` once on each class representative.
    pub fn from_fn(group: &Arc<FinGroup>, m: u32, f: impl Fn(u64) -> Cyclotomic) -> Self {
        let values = group.classes.iter().map(|c| f(c.rep).lift_to(m)).collect();
        ClassFunction::new(Arc::clone(group), values)
    }

    pub fn trivial(group: &Arc<FinGroup>) -> Self {
        let values = vec![Cyclotomic::one(1); group.classes.len()];
        ClassFunction::new(Arc::clone(group), values)
    }

    pub fn conductor(&self) -> u32 {
        self.values[0].m
    }

    pub fn class_values(&self) -> &[Cyclotomic] {
        &self.values
    }

    #[inline]
    pub fn value_at(&self, g: u64) -> &Cyclotomic {
        &self.values[self.group.class_index_of(g) as usize]
    }

    /// Value at the identity; rational for every virtual character.
    pub fn degree(&self) -> Rat {
        self.values[0].expect_rat("degree")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Cyclotomic::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Cyclotomic::sub)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        self.zip(other, Cyclotomic::mul)
    }

    fn zip(&self, other: &Self, op: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Self {
        assert!(Arc::ptr_eq(&self.group, &other.group), "class functions on different groups");
        let m = lcm(self.conductor(), other.conductor());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(&a.lift_to(m), &b.lift_to(m)))
            .collect();
        ClassFunction::new(Arc::clone(&self.group), values)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let values = self.values.iter().map(|v| v.scale(r)).collect();
        ClassFunction::new(Arc::clone(&self.group), values)
    }

    /// The invariant pairing `<self, other> = |G|^-1 sum f(g) conj(h(g))`.
    pub fn pairing(&self, other: &Self) -> Cyclotomic {
        assert!(Arc::ptr_eq(&self.group, &other.group), "pairing needs a common group");
        let m = lcm(self.conductor(), other.conductor());
        let mut acc = Cyclotomic::zero(m);
        for (k, class) in self.group.classes.iter().enumerate() {
            let term = self.values[k].lift_to(m).mul(&other.values[k].lift_to(m).conj());
            acc = acc.add(&term.scale(&ratz(class.size() as i64)));
        }
        acc.scale(&Rat::new(1.into(), (self.group.order() as i64).into()))
    }

    pub fn pairing_rat(&self, other: &Self) -> Rat {
        self.pairing(other).expect_rat("pairing")
    }

    /// Restriction to a subgroup given by its own class data. Members of
    /// `sub` must be codes of this group's elements.
    pub fn restrict_to(&self, sub: &Arc<FinGroup>) -> ClassFunction {
        let m = self.conductor();
        ClassFunction::from_fn(sub, m, |g| self.value_at(g).clone())
    }

    /// Induction to an overgroup: the standard average over conjugators,
    /// with the function extended by zero off this group.
    pub fn induce_to(&self, big: &Arc<FinGroup>) -> ClassFunction {
        let m = self.conductor();
        let scale = Rat::new(1.into(), (self.group.order() as i64).into());
        let values: Vec<Cyclotomic> = big
            .classes
            .iter()
            .map(|c| {
                let mut acc = Cyclotomic::zero(m);
                for &x in &big.elems {
                    let y = big.conjugate(x, c.rep);
                    if self.group.contains(y) {
                        acc = acc.add(self.value_at(y));
                    }
                }
                acc.scale(&scale)
            })
            .collect();
        ClassFunction::new(Arc::clone(big), values)
    }

    /// Dimension of the fixed space under a subgroup, the average of values
    /// over its elements. A genuine character must yield a nonnegative
    /// integer; anything else aborts.
    pub fn fixed_dim(&self, sub: &FinGroup) -> Rat {
        let d = self.average_over(&sub.elems);
        assert!(
            d.is_integer() && !d.is_negative(),
            "fixed space dimension must be a nonnegative integer"
        );
        d
    }

    /// Transport along conjugation: the result on `target` takes at s the
    /// value of this function at g s g^(-1), computed with the ambient
    /// group's operations. `target` must be the g-conjugate of this
    /// function's group.
    pub fn conjugate_by(&self, target: &Arc<FinGroup>, ambient: &FinGroup, g: u64) -> ClassFunction {
        let m = self.conductor();
        ClassFunction::from_fn(target, m, |s| self.value_at(ambient.conjugate(g, s)).clone())
    }

    /// Average of values over an explicit member list. Equals the fixed
    /// space dimension when the list enumerates a subgroup.
    pub fn average_over(&self, members: &[u64]) -> Rat {
        let mut acc = Cyclotomic::zero(self.conductor());
        for &h in members {
            acc = acc.add(self.value_at(h));
        }
        acc.scale(&Rat::new(1.into(), (members.len() as i64).into()))
            .expect_rat("fixed space dimension")
    }

    /// Whether every listed element acts trivially, i.e. the value there
    /// equals the degree. For a genuine character this tests kernel
    /// membership.
    pub fn kernel_contains(&self, members: &[u64]) -> bool {
        members.iter().all(|&g| self.value_at(g) == &self.values[0])
    }

    pub fn is_irreducible(&self) -> bool {
        self.pairing_rat(self) == Rat::one()
    }
}

impl std::fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassFunction on {} {:?}", self.group.name, self.values)
    }
}
