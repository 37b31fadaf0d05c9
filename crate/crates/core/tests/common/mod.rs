//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's number theory beyond basic
//! element arithmetic.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use wieferich_core::{QuadInt, QuadraticField};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n.is_multiple_of(d) {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn rad(n: u64) -> u64 {
    trial_factor(n).iter().map(|(p, _)| p).product()
}

pub fn is_squarefree(m: i64) -> bool {
    trial_factor(m as u64).iter().all(|(_, k)| *k == 1)
}

/// Sign of `a + b*sqrt(m)` for rationals `a`, `b`.
pub fn sign_sqrt(a: &BigRational, b: &BigRational, m: i64) -> Ordering {
    let zero = BigRational::zero();
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    if sa == Ordering::Equal {
        return sb;
    }
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    let a2 = a * a;
    let b2m = b * b * BigRational::from_integer(big(m));
    match a2.cmp(&b2m) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Compares `|x|` (real embedding) with the rational `t >= 0`.
pub fn cmp_abs_rational(x: &QuadInt, t: &BigRational) -> Ordering {
    let (mut a, mut b) = x.sqrt_coords();
    if sign_sqrt(&a, &b, x.m()) == Ordering::Less {
        a = -a;
        b = -b;
    }
    sign_sqrt(&(a - t), &b, x.m())
}

/// Fundamental unit by brute force: the least `y >= 1` with
/// `D y^2 - 4` or `D y^2 + 4` a square `x^2`, giving `(x + y sqrt D)/2`.
/// Returns `(a, b)` with `eps = a + b*sqrt(m)`.
pub fn pell_unit(m: i64) -> (BigRational, BigRational) {
    let d: u128 = if m % 4 == 1 { m as u128 } else { 4 * m as u128 };
    let mut y: u128 = 1;
    loop {
        let t = d * y * y;
        for s in [t - 4, t + 4] {
            let x = s.sqrt();
            if x * x == s {
                let two = big(2);
                let x = BigRational::new(BigInt::from(x), two.clone());
                let (a, b) = if d == m as u128 {
                    (x, BigRational::new(BigInt::from(y), two))
                } else {
                    // sqrt D = 2 sqrt m.
                    (x, BigRational::from_integer(BigInt::from(y)))
                };
                return (a, b);
            }
        }
        y += 1;
    }
}

/// `base^(N(pi) - 1) = 1 (mod pi^2)`, computed with coordinates reduced
/// modulo `p^2` (which lies in `pi^2 O_K`) and a final divisibility test.
pub fn wieferich_oracle(k: &QuadraticField, pi: &QuadInt, p: &BigInt, norm: &BigInt, base: &QuadInt) -> bool {
    let p2 = p * p;
    let red = |a: &QuadInt| k.elem(a.x().mod_floor(&p2), a.y().mod_floor(&p2));
    let mut e = norm - 1u32;
    let mut acc = k.one();
    let mut sq = red(base);
    while !e.is_zero() {
        if e.is_odd() {
            acc = red(&(&acc * &sq));
        }
        sq = red(&(&sq * &sq));
        e >>= 1;
    }
    let pi2 = pi * pi;
    (&acc - &k.one()).exact_div(&pi2).is_some()
}

/// `true` when `pi` is prime in `O_K`: its norm is `p` or `p^2` for a
/// rational prime `p`, and in the latter case `pi` is an associate of `p`
/// with `p` inert.
pub fn looks_prime(k: &QuadraticField, pi: &QuadInt) -> bool {
    let n = pi.abs_norm();
    let Some(n64) = n.to_u64() else { return false };
    if trial_is_prime(n64) {
        return true;
    }
    let r = n64.sqrt();
    if r * r != n64 || !trial_is_prime(r) {
        return false;
    }
    let p = k.from_int(r as i64);
    let assoc = p.exact_div(pi).is_some_and(|u| u.abs_norm().is_one());
    // Inert iff D is not a square mod p (odd p), or D = 5 mod 8 for p = 2.
    let d = k.disc();
    let inert = if r == 2 {
        d.rem_euclid(8) == 5
    } else {
        let dm = d.rem_euclid(r as i64) as u64;
        dm != 0 && (1..r).all(|x| (x * x) % r != dm)
    };
    assoc && inert
}
