//! Factorization of rational integers: trial division followed by Brent's
//! variant of Pollard rho, with an iteration budget and deterministic seeding.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mul_mod_u64, small_primes};
use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_LIMIT: u32 = 1_000_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed_2013;

/// Limits for factoring one integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Trial division runs over primes below this bound (at most 10^6).
    pub trial_limit: u32,
    /// Total Pollard rho iterations allowed per integer.
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: DEFAULT_TRIAL_LIMIT,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
            seed: DEFAULT_SEED,
        }
    }
}

impl FactorBudget {
    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.rho_iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Factor `|n|` into primes with multiplicities, ascending.
pub fn factor_integer(n: &BigInt, budget: &FactorBudget) -> Result<BTreeMap<BigInt, u32>> {
    let mut out = BTreeMap::new();
    let mut rest = n.abs();
    if rest.is_zero() {
        return Err(Error::ZeroElement);
    }
    let limit = budget.trial_limit.min(DEFAULT_TRIAL_LIMIT);
    for &p in small_primes() {
        if p >= limit {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            out.insert(pb, k);
        }
    }
    if rest.is_one() {
        return Ok(out);
    }
    let mut rng = budget.seed;
    let mut spent = 0u64;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some(r) = crate::arith::exact_sqrt(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = find_divisor(&m, budget, &mut spent, &mut rng).ok_or_else(|| Error::NormFactorizationTimeout {
            n: n.abs(),
            iterations: budget.rho_iterations,
        })?;
        let q = &m / &d;
        stack.push(d);
        stack.push(q);
    }
    Ok(out)
}

fn find_divisor(n: &BigInt, budget: &FactorBudget, spent: &mut u64, rng: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    while *spent < budget.rho_iterations {
        let x0 = splitmix64(rng);
        let c = splitmix64(rng) | 1;
        let remaining = budget.rho_iterations - *spent;
        let (found, used) = match n.to_u64() {
            Some(small) => {
                let (d, used) = brent_u64(small, x0 % small, c % small, remaining);
                (d.map(BigInt::from), used)
            }
            None => brent_big(n, &BigInt::from(x0), &BigInt::from(c), remaining),
        };
        *spent += used;
        if let Some(d) = found {
            if !d.is_one() && &d != n {
                return Some(d);
            }
        }
    }
    None
}

const BATCH: u64 = 128;

// Brent cycle detection on x -> x^2 + c, batching gcds over `BATCH` steps.
fn brent_u64(n: u64, x0: u64, c: u64, max_iter: u64) -> (Option<u64>, u64) {
    let f = |x: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let mut y = x0;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut used = 0u64;
    let mut x;
    let mut ys;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            used += steps;
            let g = gcd_u64(q, n);
            k += steps;
            if g != 1 {
                if g == n {
                    // Backtrack one step at a time.
                    loop {
                        ys = f(ys);
                        let g = gcd_u64(x.abs_diff(ys), n);
                        if g != 1 {
                            return (if g == n { None } else { Some(g) }, used);
                        }
                    }
                }
                return (Some(g), used);
            }
            if k >= r || used >= max_iter {
                break;
            }
        }
        if used >= max_iter {
            return (None, used);
        }
        r *= 2;
    }
}

fn brent_big(n: &BigInt, x0: &BigInt, c: &BigInt, max_iter: u64) -> (Option<BigInt>, u64) {
    let f = |x: &BigInt| (x * x + c) % n;
    let mut y = x0 % n;
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut used = 0u64;
    loop {
        let x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            let mut ys = y.clone();
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            used += steps;
            let g = q.gcd(n);
            k += steps;
            if !g.is_one() {
                if &g == n {
                    loop {
                        ys = f(&ys);
                        let g = (&x - &ys).abs().gcd(n);
                        if !g.is_one() {
                            return (if &g == n { None } else { Some(g) }, used);
                        }
                    }
                }
                return (Some(g), used);
            }
            if k >= r || used >= max_iter {
                break;
            }
        }
        if used >= max_iter {
            return (None, used);
        }
        r *= 2;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
