//! Prime elements of `O_K` and factorization of elements into them.
//!
//! With class number one every prime ideal is principal. Generators are found
//! by walking the continued fraction of the ideal `[p, (b + sqrt D)/2]`
//! until it reaches the whole ring; the product of the step factors is the
//! generator.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, sqrt_mod_prime};
use crate::cfrac::{QuadIrr, WalkEnd};
use crate::error::{Error, Result};
use crate::factorint::{factor_integer, FactorBudget};
use crate::field::{BasisMode, QuadInt, QuadraticField};
use crate::unit::surd_to_quadint;

/// How a rational prime decomposes in `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// A prime element together with the rational prime below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeElement<E> {
    pub pi: E,
    pub p: BigInt,
    /// Residue degree.
    pub f: u32,
    /// Ramification index.
    pub e: u32,
}

impl<E> PrimeElement<E> {
    /// `p^f`.
    pub fn abs_norm(&self) -> BigInt {
        self.p.pow(self.f)
    }

    /// `N(p)^{e}`, the contribution of this prime to an abc radical.
    pub fn radical_weight(&self) -> BigInt {
        self.p.pow(self.f * self.e)
    }
}

/// `unit * prod(pi_i ^ k_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementFactorization<E> {
    pub unit: E,
    pub factors: Vec<(PrimeElement<E>, u32)>,
}

impl<E> ElementFactorization<E> {
    pub fn exponent_of(&self, pi: &E) -> u32
    where
        E: PartialEq,
    {
        self.factors.iter().find(|(q, _)| q.pi == *pi).map_or(0, |(_, k)| *k)
    }
}

impl ElementFactorization<QuadInt> {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> QuadInt {
        self.factors
            .iter()
            .fold(self.unit.clone(), |acc, (q, k)| &acc * &q.pi.pow(*k as u64))
    }
}

fn check_prime(p: &BigInt) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.clone()))
    }
}

impl QuadraticField {
    /// Decomposition type of the rational prime `p`.
    pub fn splitting_type(&self, p: &BigInt) -> Result<SplittingType> {
        check_prime(p)?;
        let d = BigInt::from(self.disc());
        if (&d % p).is_zero() {
            return Ok(SplittingType::Ramified);
        }
        if *p == BigInt::from(2) {
            // D is odd here, so D = 1 (mod 4).
            return Ok(if d.mod_floor(&BigInt::from(8)) == BigInt::one() {
                SplittingType::Split
            } else {
                SplittingType::Inert
            });
        }
        Ok(if crate::arith::jacobi(&d, p) == 1 {
            SplittingType::Split
        } else {
            SplittingType::Inert
        })
    }

    /// Smallest `r` in `[0, p)` with `w = r (mod P)` for a prime `P | p`,
    /// i.e. the smallest root of the minimal polynomial of `w` modulo `p`.
    fn omega_root_mod(&self, p: &BigInt) -> Option<BigInt> {
        let two = BigInt::from(2);
        let m = BigInt::from(self.m());
        if *p == two {
            let roots: Vec<BigInt> = (0..2)
                .map(BigInt::from)
                .filter(|r| self.omega_min_poly(r).is_even())
                .collect();
            return roots.into_iter().next();
        }
        let s = sqrt_mod_prime(&m, p)?;
        let cands = match self.basis_mode() {
            BasisMode::Sqrt => vec![s.clone(), (p - &s).mod_floor(p)],
            BasisMode::HalfSqrt => {
                let inv2 = (p + 1u32) / 2u32;
                vec![
                    ((BigInt::one() + &s) * &inv2).mod_floor(p),
                    ((BigInt::one() - &s) * &inv2).mod_floor(p),
                ]
            }
        };
        cands.into_iter().min()
    }

    fn omega_min_poly(&self, r: &BigInt) -> BigInt {
        match self.basis_mode() {
            BasisMode::Sqrt => r * r - self.m(),
            BasisMode::HalfSqrt => r * r - r - (self.m() - 1) / 4,
        }
    }

    /// A generator of the prime ideal `(p, w - r)`, normalized to its
    /// canonical associate. Inert primes are represented by `p` itself.
    pub fn prime_above(&self, p: &BigInt) -> Result<PrimeElement<QuadInt>> {
        let kind = self.splitting_type(p)?;
        if kind == SplittingType::Inert {
            return Ok(PrimeElement {
                pi: self.from_int(p.clone()),
                p: p.clone(),
                f: 2,
                e: 1,
            });
        }
        let r = self.omega_root_mod(p).expect("split or ramified primes have a root");
        let b = match self.basis_mode() {
            BasisMode::Sqrt => -(&r * 2u32),
            BasisMode::HalfSqrt => BigInt::one() - &r * 2u32,
        };
        let disc = self.discriminant();
        let start = QuadIrr::new(b, p * 2u32);
        let steps = 4 * (self.disc() as usize + 16) + 4 * p.bits() as usize;
        let gen = match disc.walk_to_unit_ideal(&start, 0, steps)? {
            WalkEnd::Principal(g) => g,
            WalkEnd::NonPrincipal => return Err(Error::NonPrincipal(p.clone())),
        };
        let pi = surd_to_quadint(self, &gen).expect("generator of an integral ideal is integral");
        debug_assert_eq!(pi.abs_norm(), *p);
        Ok(PrimeElement {
            pi: self.canonical_associate(&pi),
            p: p.clone(),
            f: 1,
            e: if kind == SplittingType::Ramified { 2 } else { 1 },
        })
    }

    /// Canonical representative of the associate class of a nonzero
    /// non-unit: `eps^k * pi` with `1 <= |.| < eps`, then the sign that makes
    /// the first nonzero coordinate positive.
    pub fn canonical_associate(&self, pi: &QuadInt) -> QuadInt {
        assert!(!pi.is_zero(), "zero has no associates");
        let eps = self.epsilon();
        let eps_inv = eps.conj().scale(&eps.norm());
        let one = BigRational::one();
        let mut a = pi.clone();
        while a.cmp_abs(eps) != Ordering::Less {
            a = &a * &eps_inv;
        }
        while self.compare_abs(&a, &one) == Ordering::Less {
            a = &a * eps;
        }
        let lead = if a.x().is_zero() { a.y() } else { a.x() };
        if lead.is_negative() {
            -a
        } else {
            a
        }
    }

    /// `beta / pi`, or `NotDivisible`.
    pub fn exact_divide(&self, beta: &QuadInt, pi: &QuadInt) -> Result<QuadInt> {
        beta.exact_div(pi).ok_or_else(|| Error::NotDivisible {
            beta: beta.to_string(),
            pi: pi.to_string(),
        })
    }

    /// Factors `beta` into canonical prime elements and a unit.
    pub fn factor_element(&self, beta: &QuadInt, budget: &FactorBudget) -> Result<ElementFactorization<QuadInt>> {
        if beta.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.require_class_number_one()?;
        let norm_factors = factor_integer(&beta.norm(), budget)?;
        let mut rest = beta.clone();
        let mut factors = Vec::new();
        for (p, _) in norm_factors {
            let first = self.prime_above(&p)?;
            let mut primes = vec![first.clone()];
            if self.splitting_type(&p)? == SplittingType::Split {
                let other = PrimeElement {
                    pi: self.canonical_associate(&first.pi.conj()),
                    ..first
                };
                primes.push(other);
                primes.sort();
            }
            for q in primes {
                let mut k = 0;
                while let Some(next) = rest.exact_div(&q.pi) {
                    rest = next;
                    k += 1;
                }
                if k > 0 {
                    factors.push((q, k));
                }
            }
        }
        assert!(rest.is_unit(), "cofactor {rest} of {beta} is not a unit");
        Ok(ElementFactorization { unit: rest, factors })
    }
}

/// Largest `k` with `pi^k | beta`.
pub fn valuation(beta: &QuadInt, pi: &QuadInt) -> Result<u32> {
    if beta.is_zero() {
        return Err(Error::ZeroElement);
    }
    if pi.is_unit() {
        return Err(Error::Invalid(format!("{pi} is a unit")));
    }
    let mut rest = beta.clone();
    let mut k = 0;
    while let Some(next) = rest.exact_div(pi) {
        rest = next;
        k += 1;
    }
    Ok(k)
}

/// Counts the primes below `limit` by splitting type.
pub fn count_by_type(field: &QuadraticField, limit: u64) -> BTreeMap<&'static str, u64> {
    let mut out = BTreeMap::new();
    for p in crate::arith::sieve(limit.to_u32().unwrap_or(u32::MAX)) {
        let key = match field.splitting_type(&BigInt::from(p)).unwrap() {
            SplittingType::Split => "split",
            SplittingType::Inert => "inert",
            SplittingType::Ramified => "ramified",
        };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: i64) -> QuadraticField {
        QuadraticField::new(m).unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(q(5).splitting_type(&b(5)).unwrap(), SplittingType::Ramified);
        assert_eq!(q(2).splitting_type(&b(7)).unwrap(), SplittingType::Split);
        assert_eq!(q(2).splitting_type(&b(3)).unwrap(), SplittingType::Inert);
        assert_eq!(q(17).splitting_type(&b(2)).unwrap(), SplittingType::Split);
        assert_eq!(q(5).splitting_type(&b(2)).unwrap(), SplittingType::Inert);
        assert_eq!(q(2).splitting_type(&b(9)), Err(Error::NotPrime(b(9))));
    }

    #[test]
    fn primes_above_small_primes() {
        let f = q(2);
        let two = f.prime_above(&b(2)).unwrap();
        assert_eq!((two.pi.clone(), two.e, two.f), (f.elem(0, 1), 2, 1));
        let seven = f.prime_above(&b(7)).unwrap();
        assert_eq!(seven.pi, f.elem(3, -1));
        assert_eq!(seven.abs_norm(), b(7));
        // The other prime above 7 is the conjugate class, containing 3 + sqrt 2.
        let other = f.canonical_associate(&f.elem(3, 1));
        assert!(f.elem(3, 1).exact_div(&other).unwrap().is_unit());
        assert_ne!(other, seven.pi);
        let three = f.prime_above(&b(3)).unwrap();
        assert_eq!((three.pi, three.f, three.e), (f.elem(3, 0), 2, 1));
    }

    #[test]
    fn prime_above_in_half_integer_basis() {
        let f = q(13);
        for p in [3, 13, 17, 23, 29, 1009] {
            let pe = f.prime_above(&b(p)).unwrap();
            assert_eq!(pe.pi.abs_norm(), pe.abs_norm(), "p = {p}");
            assert_eq!(pe.f == 2, f.splitting_type(&b(p)).unwrap() == SplittingType::Inert);
        }
        let f = q(17);
        assert_eq!(f.prime_above(&b(2)).unwrap().pi.abs_norm(), b(2));
    }

    #[test]
    fn non_principal_prime_is_reported() {
        let f = q(10);
        assert_eq!(f.prime_above(&b(2)), Err(Error::NonPrincipal(b(2))));
    }

    #[test]
    fn factor_examples() {
        let f = q(2);
        let budget = FactorBudget::default();
        let fac = f.factor_element(&f.elem(6, 5), &budget).unwrap();
        assert_eq!(fac.unit, f.elem(3, 2));
        let pis: Vec<_> = fac.factors.iter().map(|(q, k)| (q.pi.clone(), *k)).collect();
        assert_eq!(pis, vec![(f.elem(0, 1), 1), (f.elem(3, -1), 1)]);
        assert_eq!(fac.expand(), f.elem(6, 5));

        let fac = f.factor_element(&f.elem(2, 2), &budget).unwrap();
        assert_eq!(fac.unit, f.elem(1, 1));
        assert_eq!(fac.factors.len(), 1);
        assert_eq!((fac.factors[0].0.pi.clone(), fac.factors[0].1), (f.elem(0, 1), 2));

        let fac = f.factor_element(&f.elem(1, 1), &budget).unwrap();
        assert_eq!(fac.unit, f.elem(1, 1));
        assert!(fac.factors.is_empty());

        assert_eq!(f.factor_element(&f.zero(), &budget), Err(Error::ZeroElement));
        let g = q(10);
        assert!(matches!(
            g.factor_element(&g.elem(3, 1), &budget),
            Err(Error::ClassNumberNotOne { .. })
        ));
    }

    #[test]
    fn exact_divide_examples() {
        let f = q(2);
        assert_eq!(f.exact_divide(&f.elem(6, 5), &f.elem(0, 1)).unwrap(), f.elem(5, 3));
        assert!(matches!(
            f.exact_divide(&f.elem(3, 1), &f.elem(3, -1)),
            Err(Error::NotDivisible { .. })
        ));
        assert_eq!(f.exact_divide(&f.elem(6, 5), &f.one()).unwrap(), f.elem(6, 5));
    }

    #[test]
    fn valuation_examples() {
        let f = q(2);
        assert_eq!(valuation(&f.from_int(8), &f.elem(0, 1)).unwrap(), 6);
        assert_eq!(valuation(&f.elem(6, 5), &f.elem(3, 1)).unwrap(), 0);
        assert_eq!(valuation(&f.elem(6, 5), &f.elem(3, -1)).unwrap(), 1);
        assert_eq!(valuation(&f.one(), &f.elem(0, 1)).unwrap(), 0);
    }

    #[test]
    fn split_and_inert_counts_are_balanced() {
        for m in [2, 3, 5, 13] {
            let counts = count_by_type(&q(m), 10_000);
            let ratio = counts["split"] as f64 / counts["inert"] as f64;
            eprintln!("m = {m}: {counts:?}, split/inert = {ratio:.3}");
        }
    }
}
