//! Quotient rings `O_K / (pi^k)` and the Wieferich congruence
//! `base^(N(pi) - 1) = 1 (mod pi^2)`.
//!
//! The ideal `(pi^k)` is stored as the Hermite normal form of the lattice
//! spanned by `pi^k * b_i` over the integral basis `b_i`. The matrix is lower
//! triangular with the lattice generators in its columns, so reduction walks
//! the coordinates top to bottom.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime_u64, pow_mod_u64};
use crate::error::{Error, Result};
use crate::prime::PrimeElement;
use crate::ring::NumberRing;

/// Lower-triangular Hermite normal form; `h[row][col]`, generators are the
/// columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    h: Vec<Vec<BigInt>>,
}

#[allow(clippy::needless_range_loop)]
impl Hnf {
    /// HNF of the lattice generated by the given column vectors, which must
    /// span a full-rank lattice.
    pub fn from_columns(cols: Vec<Vec<BigInt>>) -> Hnf {
        let n = cols.len();
        let mut c = cols;
        for i in 0..n {
            // Fold columns i+1.. into column i with extended gcds on row i.
            for j in i + 1..n {
                if c[j][i].is_zero() {
                    continue;
                }
                let a = c[i][i].clone();
                let b = c[j][i].clone();
                let eg = a.extended_gcd(&b);
                let (g, s, t) = (eg.gcd, eg.x, eg.y);
                let (ag, bg) = (&a / &g, &b / &g);
                let ci = c[i].clone();
                let cj = c[j].clone();
                for r in 0..n {
                    c[i][r] = &s * &ci[r] + &t * &cj[r];
                    c[j][r] = &bg * &ci[r] - &ag * &cj[r];
                }
            }
            assert!(!c[i][i].is_zero(), "lattice is not full rank");
            if c[i][i].is_negative() {
                for r in 0..n {
                    c[i][r] = -&c[i][r];
                }
            }
        }
        // Reduce entries below the diagonal into [0, h[r][r]).
        for i in 0..n {
            for r in i + 1..n {
                let q = c[i][r].div_floor(&c[r][r]);
                if !q.is_zero() {
                    let cr = c[r].clone();
                    for k in 0..n {
                        c[i][k] -= &q * &cr[k];
                    }
                }
            }
        }
        let h = (0..n).map(|r| (0..n).map(|col| c[col][r].clone()).collect()).collect();
        Hnf { h }
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.h
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.h.len()).map(|i| self.h[i][i].clone()).collect()
    }

    /// Lattice index, the product of the diagonal.
    pub fn index(&self) -> BigInt {
        self.diagonal().iter().product()
    }

    /// Canonical representative with `0 <= c_i < h[i][i]`.
    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut c = coords.to_vec();
        let n = c.len();
        for i in 0..n {
            let q = c[i].div_floor(&self.h[i][i]);
            if !q.is_zero() {
                for r in i..n {
                    c[r] -= &q * &self.h[r][i];
                }
            }
        }
        c
    }

    pub fn contains(&self, coords: &[BigInt]) -> bool {
        self.reduce(coords).iter().all(Zero::is_zero)
    }
}

/// The ring `O_K / (pi^power)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueModulus<E> {
    pub pi: PrimeElement<E>,
    pub power: u32,
    pub hnf: Hnf,
}

impl<E> ResidueModulus<E> {
    /// `|O_K / (pi^power)| = N(pi)^power`.
    pub fn index(&self) -> BigInt {
        self.hnf.index()
    }
}

/// Builds `O_K / (pi^power)` from the lattice spanned by `pi^power * b_i`.
pub fn make_modulus<R: NumberRing>(ring: &R, pi: &PrimeElement<R::Elem>, power: u32) -> ResidueModulus<R::Elem> {
    let gen = ring.pow(&pi.pi, power as u64);
    let n = ring.degree();
    let cols = (0..n)
        .map(|i| {
            let mut unit = vec![BigInt::zero(); n];
            unit[i] = BigInt::one();
            ring.coords(&ring.mul(&gen, &ring.from_coords(&unit)))
        })
        .collect();
    ResidueModulus {
        pi: pi.clone(),
        power,
        hnf: Hnf::from_columns(cols),
    }
}

pub fn reduce_mod<R: NumberRing>(ring: &R, a: &R::Elem, m: &ResidueModulus<R::Elem>) -> R::Elem {
    ring.from_coords(&m.hnf.reduce(&ring.coords(a)))
}

/// Square-and-multiply with a reduction after every product.
pub fn pow_mod<R: NumberRing>(ring: &R, base: &R::Elem, exp: &BigInt, m: &ResidueModulus<R::Elem>) -> R::Elem {
    assert!(!exp.is_negative(), "negative exponent");
    let mut acc = reduce_mod(ring, &ring.one(), m);
    let b = reduce_mod(ring, base, m);
    for i in (0..exp.bits()).rev() {
        acc = reduce_mod(ring, &ring.mul(&acc, &acc), m);
        if exp.bit(i) {
            acc = reduce_mod(ring, &ring.mul(&acc, &b), m);
        }
    }
    acc
}

/// The residue `base^(N(pi) - 1) mod pi^2`, together with the reduced
/// representative of 1 it is compared against.
fn wieferich_pair<R: NumberRing>(ring: &R, pi: &PrimeElement<R::Elem>, base: &R::Elem) -> (R::Elem, R::Elem) {
    let m = make_modulus(ring, pi, 2);
    let exp = pi.abs_norm() - 1u32;
    (pow_mod(ring, base, &exp, &m), reduce_mod(ring, &ring.one(), &m))
}

/// The residue `base^(N(pi) - 1) mod pi^2`.
pub fn wieferich_residue<R: NumberRing>(ring: &R, pi: &PrimeElement<R::Elem>, base: &R::Elem) -> R::Elem {
    wieferich_pair(ring, pi, base).0
}

/// `true` iff `base^(N(pi) - 1) = 1 (mod pi^2)`.
pub fn is_wieferich<R: NumberRing>(ring: &R, pi: &PrimeElement<R::Elem>, base: &R::Elem) -> bool {
    let (r, one) = wieferich_pair(ring, pi, base);
    r == one
}

/// Rational test `a^(p-1) = 1 (mod p^2)` in machine arithmetic, for primes
/// below 2^32.
pub fn is_wieferich_rational(p: u64, a: i64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    if p > u32::MAX as u64 {
        return Err(Error::Invalid(format!("prime {p} exceeds 2^32")));
    }
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::BaseDivisible {
            p: BigInt::from(p),
            base: a.to_string(),
        });
    }
    let m = p * p;
    let base = a.rem_euclid(m as i64) as u64;
    Ok(pow_mod_u64(base, p - 1, m) == 1)
}

/// Calls `found` for every Wieferich prime `p <= limit` to the base `a`,
/// in increasing order. Primes dividing `a` are skipped. Uses a segmented
/// sieve so memory stays bounded.
pub fn rational_wieferich_scan(a: i64, limit: u64, mut found: impl FnMut(u64)) -> Result<()> {
    if limit > u32::MAX as u64 {
        return Err(Error::Invalid(format!("limit {limit} exceeds 2^32")));
    }
    if a == 0 {
        return Err(Error::Invalid("base must be nonzero".into()));
    }
    let root = (limit as f64).sqrt() as u64 + 2;
    let base_primes = crate::arith::sieve(root.min(u32::MAX as u64) as u32 + 1);
    const SEGMENT: u64 = 1 << 18;
    let mut lo = 2u64;
    let mut mark = vec![false; SEGMENT as usize];
    while lo <= limit {
        let hi = (lo + SEGMENT).min(limit + 1);
        mark.iter_mut().for_each(|x| *x = false);
        for &q in &base_primes {
            let q = q as u64;
            if q * q >= hi {
                break;
            }
            let start = (q * q).max(lo.div_ceil(q) * q);
            let mut j = start;
            while j < hi {
                mark[(j - lo) as usize] = true;
                j += q;
            }
        }
        for n in lo..hi {
            if !mark[(n - lo) as usize] && a.rem_euclid(n as i64) != 0 {
                let m = n * n;
                let base = a.rem_euclid(m as i64) as u64;
                if pow_mod_u64(base, n - 1, m) == 1 {
                    found(n);
                }
            }
        }
        lo = hi;
    }
    Ok(())
}

/// Convenience wrapper collecting [`rational_wieferich_scan`] into a vector.
pub fn rational_wieferich_primes(a: i64, limit: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    rational_wieferich_scan(a, limit, |p| out.push(p))?;
    Ok(out)
}

/// Converts a small rational prime into a prime element of `Z`.
pub fn rational_prime(p: u64) -> PrimeElement<BigInt> {
    let p = BigInt::from(p);
    PrimeElement {
        pi: p.clone(),
        p,
        f: 1,
        e: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticField;
    use crate::ring::Integers;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn moduli_examples() {
        let k = QuadraticField::new(2).unwrap();
        let sqrt2 = k.prime_above(&b(2)).unwrap();
        let m = make_modulus(&k, &sqrt2, 2);
        assert_eq!(m.hnf.rows(), &[vec![b(2), b(0)], vec![b(0), b(2)]]);
        assert_eq!(m.index(), b(4));

        let three = k.prime_above(&b(3)).unwrap();
        let m = make_modulus(&k, &three, 2);
        assert_eq!(m.hnf.diagonal(), vec![b(9), b(9)]);
        assert_eq!(m.index(), b(81));

        let seven = PrimeElement {
            pi: k.elem(3, 1),
            p: b(7),
            f: 1,
            e: 1,
        };
        assert_eq!(make_modulus(&k, &seven, 2).index(), b(49));
    }

    #[test]
    fn reduction_examples() {
        let k = QuadraticField::new(2).unwrap();
        let sqrt2 = k.prime_above(&b(2)).unwrap();
        let m = make_modulus(&k, &sqrt2, 2);
        assert!(reduce_mod(&k, &k.from_int(2), &m).is_zero());
        assert_eq!(reduce_mod(&k, &k.elem(1, 1), &m), k.elem(1, 1));
        assert_eq!(reduce_mod(&k, &k.elem(7, 5), &m), k.elem(1, 1));
    }

    #[test]
    fn pow_mod_examples() {
        let z = Integers;
        let three = rational_prime(3);
        let m81 = make_modulus(&z, &three, 4);
        assert_eq!(pow_mod(&z, &b(2), &b(10), &m81), b(52));
        assert_eq!(pow_mod(&z, &b(7), &b(0), &m81), b(1));

        let k = QuadraticField::new(2).unwrap();
        let pi = PrimeElement {
            pi: k.elem(3, 1),
            p: b(7),
            f: 1,
            e: 1,
        };
        let m = make_modulus(&k, &pi, 2);
        let e = k.elem(1, 1);
        assert_eq!(pow_mod(&k, &e, &b(6), &m), reduce_mod(&k, &e.pow(6), &m));
    }

    #[test]
    fn wieferich_examples() {
        let k = QuadraticField::new(2).unwrap();
        let sqrt2 = k.prime_above(&b(2)).unwrap();
        assert!(!is_wieferich(&k, &sqrt2, &k.elem(1, 1)));
        assert!(is_wieferich(&Integers, &rational_prime(1093), &b(2)));
        assert!(!is_wieferich(&Integers, &rational_prime(3), &b(2)));

        assert_eq!(is_wieferich_rational(3511, 2), Ok(true));
        assert_eq!(is_wieferich_rational(11, 3), Ok(true));
        assert_eq!(is_wieferich_rational(5, 2), Ok(false));
        assert!(matches!(is_wieferich_rational(3, 6), Err(Error::BaseDivisible { .. })));
        assert!(matches!(is_wieferich_rational(9, 2), Err(Error::NotPrime(_))));
    }

    #[test]
    fn small_rational_scan() {
        assert_eq!(rational_wieferich_primes(2, 10_000).unwrap(), vec![1093, 3511]);
        // Base 3: 11 and 1006003.
        assert_eq!(rational_wieferich_primes(3, 2_000).unwrap(), vec![11]);
    }

    #[test]
    fn hnf_of_rank_three_lattice() {
        let h = Hnf::from_columns(vec![
            vec![b(2), b(3), b(4)],
            vec![b(0), b(5), b(1)],
            vec![b(7), b(0), b(6)],
        ]);
        let rows = h.rows();
        assert!(rows[0][1].is_zero() && rows[0][2].is_zero() && rows[1][2].is_zero());
        // |det| = |2*(30-0) - 0 + 7*(3-20)| = 59.
        assert_eq!(h.index(), b(59));
    }

    #[test]
    fn residue_of_one_need_not_be_one() {
        // The reduced form of 1 modulo (3 - sqrt 2)^2 is not 1 + 0*w.
        let k = QuadraticField::new(2).unwrap();
        let pi = k.prime_above(&b(7)).unwrap();
        let m = make_modulus(&k, &pi, 2);
        assert_ne!(reduce_mod(&k, &k.one(), &m), k.one());
        assert!(is_wieferich(&k, &pi, &k.elem(-3, 7)));
    }
}
