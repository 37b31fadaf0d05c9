//! Exact real numbers of the form `(a + b*sqrt(r)) / d`.
//!
//! Signs and comparisons are decided with integer arithmetic only; decimal
//! approximations are produced from integer square roots at a requested
//! precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{isqrt, ln_big};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    a: BigInt,
    b: BigInt,
    r: BigInt,
    d: BigInt,
}

/// Sign of `a + b*sqrt(r)` for `r >= 0`.
pub fn sign_of(a: &BigInt, b: &BigInt, r: &BigInt) -> Ordering {
    let sa = a.sign_cmp();
    let sb = if r.is_zero() { Ordering::Equal } else { b.sign_cmp() };
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        _ => {
            // Opposite signs: the larger of a^2 and b^2 r wins.
            let lhs = a * a;
            let rhs = b * b * r;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl Surd {
    pub fn new(a: BigInt, b: BigInt, r: BigInt, d: BigInt) -> Surd {
        assert!(!r.is_negative(), "negative radicand");
        assert!(!d.is_zero(), "zero denominator");
        let (a, b, d) = if d.is_negative() { (-a, -b, -d) } else { (a, b, d) };
        let mut s = Surd { a, b, r, d };
        s.normalize();
        s
    }

    pub fn integer(n: BigInt) -> Surd {
        Surd::new(n, BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn rational(q: &BigRational) -> Surd {
        Surd::new(q.numer().clone(), BigInt::zero(), BigInt::zero(), q.denom().clone())
    }

    fn normalize(&mut self) {
        if self.b.is_zero() || self.r.is_zero() {
            self.b = BigInt::zero();
            self.r = BigInt::zero();
        }
        let g = self.a.gcd(&self.b).gcd(&self.d);
        if !g.is_zero() && !g.is_one() {
            self.a /= &g;
            self.b /= &g;
            self.d /= &g;
        }
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.r, &self.d)
    }

    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.r)
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn abs(&self) -> Surd {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Surd {
        Surd {
            a: -&self.a,
            b: -&self.b,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    fn radicand_for(&self, other: &Surd) -> BigInt {
        if self.b.is_zero() {
            other.r.clone()
        } else {
            assert!(other.b.is_zero() || other.r == self.r, "mixed radicands");
            self.r.clone()
        }
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        let r = self.radicand_for(other);
        Surd::new(
            &self.a * &other.d - &other.a * &self.d,
            &self.b * &other.d - &other.b * &self.d,
            r,
            &self.d * &other.d,
        )
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        let r = self.radicand_for(other);
        Surd::new(
            &self.a * &other.a + &self.b * &other.b * &r,
            &self.a * &other.b + &self.b * &other.a,
            r,
            &self.d * &other.d,
        )
    }

    /// Divide by a nonzero rational integer.
    pub fn div_int(&self, k: &BigInt) -> Surd {
        Surd::new(self.a.clone(), self.b.clone(), self.r.clone(), &self.d * k)
    }

    /// Exact comparison of two surds sharing a radicand.
    pub fn cmp_exact(&self, other: &Surd) -> Ordering {
        self.sub(other).signum()
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        self.cmp_exact(&Surd::rational(q))
    }

    /// Integer bounds `lo <= self * 2^bits <= hi` with `hi - lo <= 2`.
    pub fn scaled_bounds(&self, bits: u64) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        let a = &self.a * &scale;
        let bsq = &self.b * &self.b * &self.r * &scale * &scale;
        let root = isqrt(&bsq);
        let (lo_num, hi_num) = if self.b.is_negative() {
            (&a - &root - 1u32, &a - &root)
        } else {
            (&a + &root, &a + &root + 1u32)
        };
        (lo_num.div_floor(&self.d), (hi_num + &self.d - 1u32).div_floor(&self.d))
    }

    /// Floor of the value.
    pub fn floor(&self) -> BigInt {
        let (lo, hi) = self.scaled_bounds(0);
        // lo <= floor <= hi; settle by exact comparison.
        let mut k = hi;
        while k > lo && self.cmp_exact(&Surd::integer(k.clone())) == Ordering::Less {
            k -= 1u32;
        }
        k
    }

    /// Interval `[lo, hi]` of the natural logarithm of a positive surd, with
    /// precision refined until its width is below `tol`.
    pub fn ln_interval(&self, tol: f64) -> (f64, f64) {
        assert_eq!(self.signum(), Ordering::Greater, "ln of non-positive surd");
        let mut bits = 64u64;
        loop {
            let (lo, hi) = self.scaled_bounds(bits);
            if lo.is_positive() {
                let shift = bits as f64 * std::f64::consts::LN_2;
                let l = ln_big(&lo) - shift;
                let h = ln_big(&hi) - shift;
                if h - l < tol {
                    return (l, h);
                }
            }
            bits += 64;
        }
    }

    /// Midpoint decimal approximation.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (l, h) = self.abs().ln_interval(1e-14);
        let mag = ((l + h) / 2.0).exp();
        if self.signum() == Ordering::Less {
            -mag
        } else {
            mag
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.b.is_zero() {
            format!("{}", self.a)
        } else if self.a.is_zero() {
            format!("{}*sqrt({})", self.b, self.r)
        } else if self.b.is_negative() {
            format!("{}-{}*sqrt({})", self.a, -&self.b, self.r)
        } else {
            format!("{}+{}*sqrt({})", self.a, self.b, self.r)
        };
        if self.d.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{}", self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: i64, b: i64, r: i64, d: i64) -> Surd {
        Surd::new(a.into(), b.into(), r.into(), d.into())
    }

    #[test]
    fn sign_cases() {
        assert_eq!(s(1, 1, 2, 1).signum(), Ordering::Greater);
        assert_eq!(s(1, -1, 2, 1).signum(), Ordering::Less);
        assert_eq!(s(-1, 1, 2, 1).signum(), Ordering::Greater);
        assert_eq!(s(-3, 2, 2, 1).signum(), Ordering::Less);
        assert_eq!(s(0, 0, 2, 1).signum(), Ordering::Equal);
        assert_eq!(s(2, -1, 4, 1).signum(), Ordering::Equal);
    }

    #[test]
    fn floor_and_bounds() {
        assert_eq!(s(1, 1, 2, 1).floor(), BigInt::from(2));
        assert_eq!(s(1, -1, 2, 1).floor(), BigInt::from(-1));
        assert_eq!(s(3, 1, 13, 2).floor(), BigInt::from(3));
        let (lo, hi) = s(0, 1, 2, 1).scaled_bounds(20);
        let v = 2f64.sqrt() * (1u64 << 20) as f64;
        assert!(lo <= BigInt::from(v as i64) && BigInt::from(v as i64) <= hi);
    }

    #[test]
    fn ln_of_tiny_difference() {
        // (1+sqrt 2)^-20 is about 2.2e-8; the interval must resolve it.
        let mut p = s(1, 0, 2, 1);
        let e = s(-1, 1, 2, 1);
        for _ in 0..20 {
            p = p.mul(&e);
        }
        let (l, h) = p.ln_interval(1e-12);
        let expected = -20.0 * (1.0 + 2f64.sqrt()).ln();
        assert!(l <= expected + 1e-12 && expected - 1e-12 <= h);
    }

    #[test]
    fn display() {
        assert_eq!(s(1, 1, 5, 2).to_string(), "(1+1*sqrt(5))/2");
        assert_eq!(s(4, -2, 2, 2).to_string(), "2-1*sqrt(2)");
    }
}
