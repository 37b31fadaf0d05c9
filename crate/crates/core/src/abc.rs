//! Heights, radicals and qualities of abc triples `a + b + c = 0` in `O_K`.
//!
//! The height is the product over all places of the largest normalized
//! absolute value of the three members. At a finite prime `p` that factor is
//! `N(p)^{-min v_p}`; at each real embedding it is the largest absolute
//! value. The archimedean part is an algebraic number, so `H` is kept exactly
//! as a surd and only the quality is reported in floating point.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::ln_big;
use crate::cache::Factorizer;
use crate::error::{Error, Result};
use crate::prime::{ElementFactorization, PrimeElement};
use crate::ring::NumberRing;
use crate::scan::decompose;
use crate::surd::Surd;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcTriple<E> {
    members: [E; 3],
}

impl<E: Clone> AbcTriple<E> {
    pub fn new<R: NumberRing<Elem = E>>(ring: &R, a: E, b: E, c: E) -> Result<AbcTriple<E>> {
        for (i, x) in [&a, &b, &c].into_iter().enumerate() {
            if ring.is_zero(x) {
                return Err(Error::ZeroMember(i));
            }
        }
        if !ring.is_zero(&ring.add(&ring.add(&a, &b), &c)) {
            return Err(Error::TripleSumNonzero);
        }
        Ok(AbcTriple { members: [a, b, c] })
    }

    pub fn members(&self) -> &[E; 3] {
        &self.members
    }
}

/// Valuations of the three members at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeValuations<E> {
    pub prime: PrimeElement<E>,
    pub valuations: [u32; 3],
}

impl<E> PrimeValuations<E> {
    pub fn unequal(&self) -> bool {
        let [x, y, z] = self.valuations;
        !(x == y && y == z)
    }
}

fn factor_members<R: NumberRing>(
    ring: &R,
    t: &AbcTriple<R::Elem>,
    fz: &Factorizer,
) -> Result<Vec<PrimeValuations<R::Elem>>> {
    let facs: Vec<ElementFactorization<R::Elem>> =
        t.members.iter().map(|x| fz.factor(ring, x)).collect::<Result<_>>()?;
    let mut primes = BTreeSet::new();
    for f in &facs {
        for (q, _) in &f.factors {
            primes.insert(q.clone());
        }
    }
    Ok(primes
        .into_iter()
        .map(|q| {
            let valuations = [0, 1, 2].map(|i| facs[i].exponent_of(&q.pi));
            PrimeValuations { prime: q, valuations }
        })
        .collect())
}

/// The archimedean factor: for each real embedding, the largest absolute
/// value among the members, multiplied together.
fn archimedean_part<R: NumberRing>(ring: &R, t: &AbcTriple<R::Elem>) -> Surd {
    let conj: Vec<Vec<R::Elem>> = t.members.iter().map(|x| ring.conjugates(x)).collect();
    let mut prod = ring.one();
    for k in 0..ring.degree() {
        let mut best = &conj[0][k];
        let mut best_abs = ring.embed(best).abs();
        for c in &conj[1..] {
            let v = ring.embed(&c[k]).abs();
            if v.cmp_exact(&best_abs) == Ordering::Greater {
                best = &c[k];
                best_abs = v;
            }
        }
        prod = ring.mul(&prod, best);
    }
    ring.embed(&prod).abs()
}

fn finite_part<E>(vals: &[PrimeValuations<E>]) -> BigInt {
    vals.iter()
        .map(|pv| pv.prime.abs_norm().pow(*pv.valuations.iter().min().unwrap()))
        .product()
}

/// `H_K(a, b, c)` as an exact surd.
pub fn height_k<R: NumberRing>(ring: &R, t: &AbcTriple<R::Elem>, fz: &Factorizer) -> Result<Surd> {
    let vals = factor_members(ring, t, fz)?;
    Ok(archimedean_part(ring, t).div_int(&finite_part(&vals)))
}

/// `rad_K(a, b, c)`: the product of `N(p)^{e_p}` over the primes at which
/// the three valuations are not all equal.
pub fn radical_k<R: NumberRing>(ring: &R, t: &AbcTriple<R::Elem>, fz: &Factorizer) -> Result<BigInt> {
    let vals = factor_members(ring, t, fz)?;
    Ok(vals
        .iter()
        .filter(|v| v.unequal())
        .map(|v| v.prime.radical_weight())
        .product())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub prime: String,
    pub p: String,
    pub valuations: [u32; 3],
    pub contribution: String,
}

/// `|eps^n|` against `(N(u)^2 sqrt(N(v)))^{1+delta}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthComparison {
    pub n: u64,
    pub delta: String,
    pub nu: String,
    pub nv: String,
    pub eps_pow_approx: f64,
    pub bound_approx: f64,
    /// Exact ordering of the left side against the right: "less", "equal"
    /// or "greater".
    pub ordering: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcReport {
    pub triple: [String; 3],
    pub height_exact: String,
    pub height_approx: f64,
    pub rad: String,
    /// `log H / log rad`, absent when `rad = 1`.
    pub quality: Option<f64>,
    pub support: Vec<SupportEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<GrowthComparison>,
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

/// `log H / log rad` from a tight interval on `log H`.
pub fn quality(height: &Surd, rad: &BigInt) -> Option<f64> {
    if rad <= &BigInt::one() {
        return None;
    }
    let ln_rad = ln_big(rad);
    let (lo, hi) = height.ln_interval(1e-13);
    Some(round12((lo + hi) / 2.0 / ln_rad))
}

pub fn abc_report<R: NumberRing>(ring: &R, t: &AbcTriple<R::Elem>, fz: &Factorizer) -> Result<AbcReport> {
    let vals = factor_members(ring, t, fz)?;
    let height = archimedean_part(ring, t).div_int(&finite_part(&vals));
    let mut rad = BigInt::one();
    let mut support = Vec::new();
    for v in vals.iter().filter(|v| v.unequal()) {
        let w = v.prime.radical_weight();
        rad *= &w;
        support.push(SupportEntry {
            prime: ring.format(&v.prime.pi),
            p: v.prime.p.to_string(),
            valuations: v.valuations,
            contribution: w.to_string(),
        });
    }
    Ok(AbcReport {
        triple: t.members.clone().map(|x| ring.format(&x)),
        height_exact: height.to_string(),
        height_approx: height.to_f64(),
        quality: quality(&height, &rad),
        rad: rad.to_string(),
        support,
        comparison: None,
    })
}

/// Exact comparison of `|x|` with `(nu^2 sqrt(nv))^{1+delta}`, done as
/// `|x|^{2q}` against `(nu^4 nv)^{q+p}` for `delta = p/q`.
pub fn compare_growth<R: NumberRing>(
    ring: &R,
    x: &R::Elem,
    nu: &BigInt,
    nv: &BigInt,
    delta: &BigRational,
) -> Result<Ordering> {
    let one_plus = delta + BigRational::one();
    if !one_plus.is_positive() {
        return Err(Error::Invalid(format!("delta = {delta} must exceed -1")));
    }
    let q = delta
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Invalid("delta denominator too large".into()))?;
    let e = one_plus
        .numer()
        .to_u32()
        .ok_or_else(|| Error::Invalid("delta too large".into()))?;
    let lhs = ring.pow(x, 2 * q);
    let rhs = (nu.pow(4) * nv).pow(e);
    Ok(ring.compare_abs(&lhs, &BigRational::from_integer(rhs)))
}

/// Report for the triple `(-eps^n, 1, eps^n - 1)` together with the growth
/// comparison at `delta`.
pub fn abc_report_for_scan<R: NumberRing>(
    ring: &R,
    eps: &R::Elem,
    n: u64,
    delta: &BigRational,
    fz: &Factorizer,
) -> Result<AbcReport> {
    let d = decompose(ring, eps, n, fz)?;
    let pow = ring.pow(eps, n);
    let t = AbcTriple::new(ring, ring.neg(&pow), ring.one(), d.value.clone())?;
    let mut report = abc_report(ring, &t, fz)?;
    let ordering = compare_growth(ring, &pow, &d.nu, &d.nv, delta)?;
    let exponent = delta.to_f64().unwrap_or(0.0) + 1.0;
    let bound = ((2.0 * ln_big(&d.nu) + 0.5 * ln_big(&d.nv)) * exponent).exp();
    report.comparison = Some(GrowthComparison {
        n,
        delta: delta.to_string(),
        nu: d.nu.to_string(),
        nv: d.nv.to_string(),
        eps_pow_approx: ring.embed(&pow).abs().to_f64(),
        bound_approx: bound,
        ordering: ordering_name(ordering).into(),
    });
    Ok(report)
}

/// The classical height `max(|a|, |b|, |c|) / gcd` and radical of a rational
/// triple, for cross-checks.
pub fn rational_height_and_radical(a: &BigInt, b: &BigInt, c: &BigInt, fz: &Factorizer) -> Result<(BigInt, BigInt)> {
    let ring = crate::ring::Integers;
    let t = AbcTriple::new(&ring, a.clone(), b.clone(), c.clone())?;
    let h = height_k(&ring, &t, fz)?;
    let rad = radical_k(&ring, &t, fz)?;
    Ok((h.floor(), rad))
}
