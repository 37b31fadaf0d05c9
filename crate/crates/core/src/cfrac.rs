//! Continued-fraction walks over ideals of a real quadratic order.
//!
//! A primitive ideal `[Q/2, (P + sqrt(D))/2]` is tracked through the
//! quadratic irrational `(P + sqrt(D))/Q`, with `2Q | D - P^2`. One step of
//! the regular continued fraction maps the ideal `I` to `I'` with
//! `I = theta * I'` and `theta = (sqrt(D) - P')/Q'`. Walking until `|Q| = 2`
//! (the whole ring) yields a generator of the starting ideal; walking once
//! around the cycle of the whole ring yields the fundamental unit; counting
//! the cycles of reduced irrationals gives the class number.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::surd::Surd;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct QuadIrr {
    pub p: BigInt,
    pub q: BigInt,
}

impl QuadIrr {
    pub fn new(p: BigInt, q: BigInt) -> QuadIrr {
        QuadIrr { p, q }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Discriminant {
    d: BigInt,
    root: BigInt,
}

pub(crate) enum WalkEnd {
    /// Reached the unit ideal; the accumulated product generates the start.
    Principal(Surd),
    /// Went once around a reduced cycle that does not contain the unit ideal.
    NonPrincipal,
}

impl Discriminant {
    pub fn new(d: BigInt) -> Discriminant {
        let root = isqrt(&d);
        assert!(&root * &root != d, "discriminant must not be a square");
        Discriminant { d, root }
    }

    fn floor(&self, x: &QuadIrr) -> BigInt {
        if x.q.is_positive() {
            (&x.p + &self.root).div_floor(&x.q)
        } else {
            (-(&x.p + &self.root) - 1u32).div_floor(&(-&x.q))
        }
    }

    /// Next complete quotient.
    pub fn step(&self, x: &QuadIrr) -> QuadIrr {
        let a = self.floor(x);
        let p = &a * &x.q - &x.p;
        let q = (&self.d - &p * &p) / &x.q;
        QuadIrr { p, q }
    }

    /// `x > 1` and `-1 < conj(x) < 0`.
    pub fn is_reduced(&self, x: &QuadIrr) -> bool {
        let d = &self.d;
        if !x.q.is_positive() || !x.p.is_positive() || &(&x.p * &x.p) >= d {
            return false;
        }
        let s = &x.p + &x.q;
        let t = &x.q - &x.p;
        s.is_positive() && &(&s * &s) > d && (t.is_negative() || &(&t * &t) < d)
    }

    /// The reduced irrational attached to the ring itself.
    pub fn principal_reduced(&self) -> QuadIrr {
        let mut b = self.root.clone();
        if (&b - &self.d).is_odd() {
            b -= 1u32;
        }
        QuadIrr::new(b, BigInt::from(2))
    }

    /// Walk from `start` until the unit ideal is reached (after at least
    /// `min_steps` steps), multiplying up the step factors.
    pub fn walk_to_unit_ideal(&self, start: &QuadIrr, min_steps: usize, max_steps: usize) -> Result<WalkEnd> {
        let two = BigInt::from(2);
        let mut cur = start.clone();
        let mut prod = Surd::new(BigInt::one(), BigInt::zero(), self.d.clone(), BigInt::one());
        let mut anchor: Option<QuadIrr> = None;
        if min_steps == 0 && cur.q.abs() == two {
            return Ok(WalkEnd::Principal(prod));
        }
        if self.is_reduced(&cur) {
            anchor = Some(cur.clone());
        }
        for steps in 1..=max_steps {
            let next = self.step(&cur);
            let theta = Surd::new(-&next.p, BigInt::one(), self.d.clone(), next.q.clone());
            prod = prod.mul(&theta);
            cur = next;
            if steps >= min_steps && cur.q.abs() == two {
                return Ok(WalkEnd::Principal(prod));
            }
            if self.is_reduced(&cur) {
                match &anchor {
                    Some(a) if *a == cur => return Ok(WalkEnd::NonPrincipal),
                    Some(_) => {}
                    None => anchor = Some(cur.clone()),
                }
            }
        }
        Err(Error::SearchOverflow {
            norm: start.q.abs() / 2u32,
            steps: max_steps,
        })
    }

    /// All reduced irrationals `(P + sqrt D)/Q` with `2Q | D - P^2`.
    pub fn reduced_forms(&self) -> Vec<QuadIrr> {
        let mut out = Vec::new();
        let mut p = BigInt::one();
        while p <= self.root {
            if (&p - &self.d).is_even() {
                let diff = &self.d - &p * &p;
                let mut q = BigInt::from(2);
                let q_max = &self.root + &p + 1u32;
                while q <= q_max {
                    if (&diff % (&q * 2u32)).is_zero() {
                        let x = QuadIrr::new(p.clone(), q.clone());
                        if self.is_reduced(&x) {
                            out.push(x);
                        }
                    }
                    q += 2u32;
                }
            }
            p += 1u32;
        }
        out
    }

    /// Number of continued-fraction cycles among the reduced irrationals,
    /// which is the (wide) class number of the order of discriminant `D`.
    pub fn cycle_count(&self) -> u64 {
        let forms = self.reduced_forms();
        let all: HashSet<QuadIrr> = forms.iter().cloned().collect();
        let mut seen: HashSet<QuadIrr> = HashSet::new();
        let mut cycles = 0;
        for f in &forms {
            if seen.contains(f) {
                continue;
            }
            cycles += 1;
            let mut cur = f.clone();
            loop {
                debug_assert!(all.contains(&cur));
                seen.insert(cur.clone());
                cur = self.step(&cur);
                if cur == *f {
                    break;
                }
            }
        }
        cycles
    }
}
