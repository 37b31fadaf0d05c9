//! The degree-generic view of a ring of integers with unique factorization.
//!
//! Everything above this layer (residue rings, the Wieferich test, the
//! decomposition scan, abc heights) is written against [`NumberRing`] and is
//! instantiated for the rational integers (degree 1) and for rings of
//! integers of real quadratic fields of class number one (degree 2).

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factorint::{factor_integer, FactorBudget};
use crate::field::{QuadInt, QuadraticField};
use crate::prime::{ElementFactorization, PrimeElement};
use crate::surd::Surd;

#[allow(clippy::wrong_self_convention)]
pub trait NumberRing: Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    /// Degree of the field over `Q`.
    fn degree(&self) -> usize;

    /// Tag identifying the ring in caches and reports (`m`, or 1 for `Z`).
    fn tag(&self) -> i64;

    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Signed field norm.
    fn norm(&self, a: &Self::Elem) -> BigInt;

    fn abs_norm(&self, a: &Self::Elem) -> BigInt {
        self.norm(a).abs()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.abs_norm(a).is_one()
    }

    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    fn factor(&self, a: &Self::Elem, budget: &FactorBudget) -> Result<ElementFactorization<Self::Elem>>;

    /// Coordinates in the fixed integral basis.
    fn coords(&self, a: &Self::Elem) -> Vec<BigInt>;
    fn from_coords(&self, c: &[BigInt]) -> Self::Elem;

    /// Exact comparison of `|a|` (first real embedding) with `t >= 0`.
    fn compare_abs(&self, a: &Self::Elem, t: &BigRational) -> Ordering;

    /// Value of `a` in the first real embedding.
    fn embed(&self, a: &Self::Elem) -> Surd;

    /// The automorphisms `g_1 = id, g_2, ...` such that `embed(g_k(a))` is
    /// the `k`-th real embedding of `a`.
    fn conjugates(&self, a: &Self::Elem) -> Vec<Self::Elem>;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// Description of the integral basis for report headers.
    fn basis_description(&self) -> String;

    /// Field discriminant (1 for `Q`).
    fn discriminant(&self) -> i64;
}

/// The rational integers, the degree-one instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl NumberRing for Integers {
    type Elem = BigInt;

    fn degree(&self) -> usize {
        1
    }

    fn tag(&self) -> i64 {
        1
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn norm(&self, a: &BigInt) -> BigInt {
        a.clone()
    }

    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(a, b);
        r.is_zero().then_some(q)
    }

    fn factor(&self, a: &BigInt, budget: &FactorBudget) -> Result<ElementFactorization<BigInt>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let unit = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
        let factors = factor_integer(a, budget)?
            .into_iter()
            .map(|(p, k)| {
                (
                    PrimeElement {
                        pi: p.clone(),
                        p,
                        f: 1,
                        e: 1,
                    },
                    k,
                )
            })
            .collect();
        Ok(ElementFactorization { unit, factors })
    }

    fn coords(&self, a: &BigInt) -> Vec<BigInt> {
        vec![a.clone()]
    }

    fn from_coords(&self, c: &[BigInt]) -> BigInt {
        c[0].clone()
    }

    fn compare_abs(&self, a: &BigInt, t: &BigRational) -> Ordering {
        BigRational::from_integer(a.abs()).cmp(t)
    }

    fn embed(&self, a: &BigInt) -> Surd {
        Surd::integer(a.clone())
    }

    fn conjugates(&self, a: &BigInt) -> Vec<BigInt> {
        vec![a.clone()]
    }

    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigInt> {
        s.trim().parse().map_err(|_| Error::Parse {
            input: s.to_string(),
            reason: "expected a rational integer".into(),
        })
    }

    fn basis_description(&self) -> String {
        "Z".into()
    }

    fn discriminant(&self) -> i64 {
        1
    }
}

impl NumberRing for QuadraticField {
    type Elem = QuadInt;

    fn degree(&self) -> usize {
        2
    }

    fn tag(&self) -> i64 {
        self.m()
    }

    fn one(&self) -> QuadInt {
        QuadraticField::one(self)
    }

    fn from_int(&self, n: &BigInt) -> QuadInt {
        QuadraticField::from_int(self, n.clone())
    }

    fn add(&self, a: &QuadInt, b: &QuadInt) -> QuadInt {
        a + b
    }

    fn sub(&self, a: &QuadInt, b: &QuadInt) -> QuadInt {
        a - b
    }

    fn mul(&self, a: &QuadInt, b: &QuadInt) -> QuadInt {
        a * b
    }

    fn neg(&self, a: &QuadInt) -> QuadInt {
        -a
    }

    fn is_zero(&self, a: &QuadInt) -> bool {
        a.is_zero()
    }

    fn pow(&self, a: &QuadInt, n: u64) -> QuadInt {
        a.pow(n)
    }

    fn norm(&self, a: &QuadInt) -> BigInt {
        a.norm()
    }

    fn exact_div(&self, a: &QuadInt, b: &QuadInt) -> Option<QuadInt> {
        a.exact_div(b)
    }

    fn factor(&self, a: &QuadInt, budget: &FactorBudget) -> Result<ElementFactorization<QuadInt>> {
        self.factor_element(a, budget)
    }

    fn coords(&self, a: &QuadInt) -> Vec<BigInt> {
        vec![a.x().clone(), a.y().clone()]
    }

    fn from_coords(&self, c: &[BigInt]) -> QuadInt {
        self.elem(c[0].clone(), c[1].clone())
    }

    fn compare_abs(&self, a: &QuadInt, t: &BigRational) -> Ordering {
        QuadraticField::compare_abs(self, a, t)
    }

    fn embed(&self, a: &QuadInt) -> Surd {
        a.to_surd()
    }

    fn conjugates(&self, a: &QuadInt) -> Vec<QuadInt> {
        vec![a.clone(), a.conj()]
    }

    fn format(&self, a: &QuadInt) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<QuadInt> {
        QuadraticField::parse(self, s)
    }

    fn basis_description(&self) -> String {
        format!("x+y*w with w = {}", self.omega_description())
    }

    fn discriminant(&self) -> i64 {
        self.disc()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_factorization_keeps_sign_in_unit() {
        let f = Integers.factor(&BigInt::from(-72), &FactorBudget::default()).unwrap();
        assert_eq!(f.unit, BigInt::from(-1));
        let pairs: Vec<_> = f.factors.iter().map(|(q, k)| (q.pi.clone(), *k)).collect();
        assert_eq!(pairs, vec![(BigInt::from(2), 3), (BigInt::from(3), 2)]);
    }

    #[test]
    fn generic_pow_matches_specialized() {
        let k = QuadraticField::new(7).unwrap();
        let a = k.elem(3, -2);
        let generic = (0..9).fold(NumberRing::one(&k), |acc, _| NumberRing::mul(&k, &acc, &a));
        assert_eq!(NumberRing::pow(&k, &a, 9), generic);
        assert_eq!(NumberRing::pow(&Integers, &BigInt::from(3), 5), BigInt::from(243));
    }
}
