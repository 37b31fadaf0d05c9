//! Squarefree/squarefull decomposition of `eps^n - 1` and the harvest of
//! non-Wieferich primes from its squarefree part.
//!
//! Writing `eps^n - 1 = unit * u_n * v_n`, where `u_n` is the product of the
//! primes that divide `eps^n - 1` exactly once and `v_n` collects the rest,
//! every prime dividing `u_n` fails the Wieferich congruence to the base
//! `eps`. The scan checks that for each `n`, and checks the norm inequalities
//! `N(eps^n - 1) <= 2|eps^n - 1|` and `N(v_n) < 2|eps|^n / N(u_n)` exactly.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::ln_big;
use crate::cache::Factorizer;
use crate::error::{Error, Result};
use crate::prime::PrimeElement;
use crate::residue::is_wieferich;
use crate::ring::NumberRing;

pub const DEFAULT_N_MAX: u64 = 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<E> {
    pub n: u64,
    /// `eps^n - 1`.
    pub value: E,
    pub unit: E,
    pub u: E,
    pub v: E,
    pub nu: BigInt,
    pub nv: BigInt,
    /// Primes of exponent exactly one, i.e. the prime divisors of `u`.
    pub u_primes: Vec<PrimeElement<E>>,
    /// Prime powers making up `v`; every exponent is at least two.
    pub v_factors: Vec<(PrimeElement<E>, u32)>,
}

/// Checks that `base` is admissible: `|base| > 1`, and for fields of degree
/// above one a unit that is positive in the real embedding.
pub fn validate_base<R: NumberRing>(ring: &R, base: &R::Elem) -> Result<()> {
    let bad = |reason: &str| Error::InvalidBase {
        base: ring.format(base),
        reason: reason.into(),
    };
    if ring.compare_abs(base, &BigRational::one()) != Ordering::Greater {
        return Err(bad("absolute value must exceed 1"));
    }
    if ring.degree() > 1 {
        if !ring.is_unit(base) {
            return Err(bad("not a unit"));
        }
        if ring.embed(base).signum() != Ordering::Greater {
            return Err(bad("must be positive in the real embedding"));
        }
    }
    Ok(())
}

/// Factors `base^n - 1` and splits it into unit, squarefree and squarefull
/// parts.
pub fn decompose<R: NumberRing>(ring: &R, base: &R::Elem, n: u64, fz: &Factorizer) -> Result<Decomposition<R::Elem>> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let value = ring.sub(&ring.pow(base, n), &ring.one());
    if ring.is_zero(&value) {
        return Err(Error::InvalidBase {
            base: ring.format(base),
            reason: format!("base^{n} = 1"),
        });
    }
    let fac = fz.factor(ring, &value)?;
    let mut u = ring.one();
    let mut v = ring.one();
    let mut u_primes = Vec::new();
    let mut v_factors = Vec::new();
    for (q, k) in fac.factors {
        if k == 1 {
            u = ring.mul(&u, &q.pi);
            u_primes.push(q);
        } else {
            v = ring.mul(&v, &ring.pow(&q.pi, k as u64));
            v_factors.push((q, k));
        }
    }
    Ok(Decomposition {
        n,
        nu: ring.abs_norm(&u),
        nv: ring.abs_norm(&v),
        value,
        unit: fac.unit,
        u,
        v,
        u_primes,
        v_factors,
    })
}

/// Structural checks on a decomposition: reconstruction, squarefullness of
/// `v`, coprimality of `u` and `v`, and norm bookkeeping.
pub fn check_decomposition<R: NumberRing>(ring: &R, d: &Decomposition<R::Elem>) -> Result<()> {
    let fail = |what: &str| Error::InequalityViolation {
        n: d.n,
        check: what.into(),
    };
    let rebuilt = ring.mul(&ring.mul(&d.unit, &d.u), &d.v);
    if rebuilt != d.value {
        return Err(fail("unit * u * v = eps^n - 1"));
    }
    if !ring.is_unit(&d.unit) {
        return Err(fail("leftover factor is a unit"));
    }
    for (q, k) in &d.v_factors {
        let q2 = ring.mul(&q.pi, &q.pi);
        if *k < 2 || ring.exact_div(&d.v, &q2).is_none() {
            return Err(fail("v is squarefull"));
        }
    }
    for q in &d.u_primes {
        if ring.exact_div(&d.v, &q.pi).is_some() {
            return Err(fail("gcd(u, v) = 1"));
        }
        let q2 = ring.mul(&q.pi, &q.pi);
        if ring.exact_div(&d.value, &q2).is_some() {
            return Err(fail("u is squarefree in eps^n - 1"));
        }
    }
    if &d.nu * &d.nv != ring.abs_norm(&d.value) {
        return Err(fail("N(u) N(v) = N(eps^n - 1)"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow<E> {
    pub decomposition: Decomposition<E>,
    /// `floor(|eps|^n)` and `floor(|eps|^n) + 1`.
    pub eps_pow_lower: BigInt,
    pub eps_pow_upper: BigInt,
}

impl<E> ScanRow<E> {
    pub fn n(&self) -> u64 {
        self.decomposition.n
    }

    /// Non-Wieferich primes harvested at this `n`.
    pub fn primes(&self) -> &[PrimeElement<E>] {
        &self.decomposition.u_primes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport<E> {
    pub base: E,
    pub rows: Vec<ScanRow<E>>,
    /// Harvested primes, deduplicated, in order of first appearance.
    pub distinct_primes: Vec<PrimeElement<E>>,
}

fn scan_row<R: NumberRing>(ring: &R, base: &R::Elem, n: u64, fz: &Factorizer) -> Result<ScanRow<R::Elem>> {
    let d = decompose(ring, base, n, fz)?;
    check_decomposition(ring, &d)?;
    for q in &d.u_primes {
        if is_wieferich(ring, q, base) {
            return Err(Error::LemmaViolation {
                n,
                pi: ring.format(&q.pi),
            });
        }
    }
    let pow = ring.embed(&ring.pow(base, n)).abs();
    let lower = pow.floor();
    Ok(ScanRow {
        decomposition: d,
        eps_pow_upper: &lower + 1u32,
        eps_pow_lower: lower,
    })
}

/// Decomposes `base^n - 1` for `n = 1..=n_max` and collects the prime
/// divisors of each `u_n`, verifying each one is non-Wieferich.
pub fn harvest_nonwieferich<R: NumberRing>(
    ring: &R,
    base: &R::Elem,
    n_max: u64,
    fz: &Factorizer,
) -> Result<ScanReport<R::Elem>> {
    validate_base(ring, base)?;
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| scan_row(ring, base, n, fz))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    let mut distinct_primes = Vec::new();
    for row in &rows {
        for q in row.primes() {
            if seen.insert(q.pi.clone()) {
                distinct_primes.push(q.clone());
            }
        }
    }
    Ok(ScanReport {
        base: base.clone(),
        rows,
        distinct_primes,
    })
}

/// Outcome of the exact inequality checks for one row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub n: u64,
    /// `N(u) N(v) = N(eps^n - 1)`.
    pub norm_product: bool,
    /// `N(eps^n - 1) <= 2 |eps^n - 1|`.
    pub norm_bound: bool,
    /// `N(v) < 2 |eps|^n / N(u)`.
    pub squarefull_bound: bool,
    /// `log N(u) / (n log |eps|)`; monitored, not asserted.
    pub quality_exponent: f64,
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Runs the exact norm checks over every row of a report.
pub fn verify_growth_chain<R: NumberRing>(ring: &R, report: &ScanReport<R::Elem>) -> Result<Vec<ChainCheck>> {
    let base_abs = ring.embed(&report.base).abs();
    let (lo, hi) = base_abs.ln_interval(1e-13);
    let ln_base = (lo + hi) / 2.0;
    let mut out = Vec::with_capacity(report.rows.len());
    for row in &report.rows {
        let d = &row.decomposition;
        let n = d.n;
        let norm = ring.abs_norm(&d.value);
        let norm_product = &d.nu * &d.nv == norm;
        // N <= 2|x|  <=>  |x| >= N/2.
        let half_norm = BigRational::new(norm.clone(), BigInt::from(2));
        let norm_bound = ring.compare_abs(&d.value, &half_norm) != Ordering::Less;
        // N(v) < 2|eps|^n / N(u)  <=>  |eps^n| > N(u) N(v) / 2.
        let half_prod = BigRational::new(&d.nu * &d.nv, BigInt::from(2));
        let squarefull_bound = ring.compare_abs(&ring.pow(&report.base, n), &half_prod) == Ordering::Greater;
        for (ok, what) in [
            (norm_product, "N(u_n) N(v_n) = N(eps^n - 1)"),
            (norm_bound, "N(eps^n - 1) <= 2|eps^n - 1|"),
            (squarefull_bound, "N(v_n) < 2|eps|^n / N(u_n)"),
        ] {
            if !ok {
                return Err(Error::InequalityViolation { n, check: what.into() });
            }
        }
        let quality_exponent = if d.nu.is_one() || d.nu.is_zero() {
            0.0
        } else {
            round12(ln_big(&d.nu) / (n as f64 * ln_base))
        };
        out.push(ChainCheck {
            n,
            norm_product,
            norm_bound,
            squarefull_bound,
            quality_exponent,
        });
    }
    Ok(out)
}

/// Running maximum of `N(u_n)` over the rows.
pub fn max_nu<E>(report: &ScanReport<E>) -> BigInt {
    report
        .rows
        .iter()
        .map(|r| r.decomposition.nu.clone())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Serializable form of a scan: elements as `x+y*w` strings and integers
/// as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    pub field: FieldHeader,
    pub unit: String,
    pub n_max: u64,
    pub rows: Vec<RowDocument>,
    pub distinct_primes: Vec<String>,
    pub chain_checks: Vec<ChainCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub m: i64,
    pub disc: i64,
    pub basis: String,
}

impl FieldHeader {
    pub fn of<R: NumberRing>(ring: &R) -> FieldHeader {
        FieldHeader {
            m: ring.tag(),
            disc: ring.discriminant(),
            basis: ring.basis_description(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDocument {
    pub n: u64,
    pub u: String,
    pub v: String,
    pub unit: String,
    #[serde(rename = "Nu")]
    pub nu: String,
    #[serde(rename = "Nv")]
    pub nv: String,
    pub eps_pow_floor: String,
    pub eps_pow_ceil: String,
    pub primes: Vec<String>,
}

impl ScanDocument {
    pub fn build<R: NumberRing>(ring: &R, report: &ScanReport<R::Elem>, checks: Vec<ChainCheck>) -> ScanDocument {
        let rows = report
            .rows
            .iter()
            .map(|row| {
                let d = &row.decomposition;
                RowDocument {
                    n: d.n,
                    u: ring.format(&d.u),
                    v: ring.format(&d.v),
                    unit: ring.format(&d.unit),
                    nu: d.nu.to_string(),
                    nv: d.nv.to_string(),
                    eps_pow_floor: row.eps_pow_lower.to_string(),
                    eps_pow_ceil: row.eps_pow_upper.to_string(),
                    primes: row.primes().iter().map(|q| ring.format(&q.pi)).collect(),
                }
            })
            .collect();
        ScanDocument {
            field: FieldHeader::of(ring),
            unit: ring.format(&report.base),
            n_max: report.rows.len() as u64,
            rows,
            distinct_primes: report.distinct_primes.iter().map(|q| ring.format(&q.pi)).collect(),
            chain_checks: checks,
        }
    }

    /// One line per `(n, prime)` pair, with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,prime,Nu,Nv\n");
        for row in &self.rows {
            for p in &row.primes {
                out.push_str(&format!("{},{},{},{}\n", row.n, p, row.nu, row.nv));
            }
        }
        out
    }
}
