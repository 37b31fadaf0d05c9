//! Cross-checks against independent brute-force or analytic computations.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use common::*;
use wieferich_core::residue::{is_wieferich, make_modulus, rational_wieferich_primes, reduce_mod};
use wieferich_core::scan::harvest_nonwieferich;
use wieferich_core::{Factorizer, Integers, PrimeElement, QuadraticField, SplittingType};

fn squarefree_below(n: i64) -> impl Iterator<Item = i64> {
    (2..n).filter(|&m| is_squarefree(m))
}

fn disc(m: i64) -> i64 {
    if m % 4 == 1 {
        m
    } else {
        4 * m
    }
}

/// Kronecker symbol `(d / a)` for `a >= 1`.
fn kronecker(d: i64, a: u64) -> i64 {
    trial_factor(a)
        .into_iter()
        .map(|(q, e)| {
            let s: i64 = if q == 2 {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                let r = d.rem_euclid(q as i64) as u64;
                if r == 0 {
                    0
                } else {
                    let mut acc = 1u64;
                    for _ in 0..(q - 1) / 2 {
                        acc = acc * r % q;
                    }
                    if acc == 1 {
                        1
                    } else {
                        -1
                    }
                }
            };
            s.pow(e)
        })
        .product()
}

/// `h = -(1 / (2 log eps)) * sum_{a < D} (D/a) log sin(pi a / D)`.
fn analytic_class_number(m: i64) -> u64 {
    let d = disc(m);
    let (a, b) = pell_unit(m);
    let eps = a.to_f64().unwrap() + b.to_f64().unwrap() * (m as f64).sqrt();
    let s: f64 = (1..d as u64)
        .map(|x| kronecker(d, x) as f64 * (PI * x as f64 / d as f64).sin().ln())
        .sum();
    let h = -s / (2.0 * eps.ln());
    assert!((h - h.round()).abs() < 1e-6, "m = {m}: h = {h}");
    h.round() as u64
}

#[test]
fn class_numbers_match_analytic_formula() {
    for m in squarefree_below(100) {
        let k = QuadraticField::new(m).unwrap();
        assert_eq!(k.class_number(), analytic_class_number(m), "m = {m}");
    }
}

#[test]
fn class_number_one_matches_minkowski_check() {
    // With class number one, every prime ideal of norm at most sqrt(D)/2
    // is principal, i.e. some (X + Y sqrt D)/2 has norm +-p.
    for m in squarefree_below(100) {
        let d = disc(m);
        let (a, b) = pell_unit(m);
        let eps = a.to_f64().unwrap() + b.to_f64().unwrap() * (m as f64).sqrt();
        let bound = ((d as f64).sqrt() / 2.0) as u64;
        let all_principal = (2..=bound).filter(|&p| trial_is_prime(p)).all(|p| {
            let inert = (0..p).all(|x| (x * x) % p != (d.rem_euclid(p as i64) as u64)) && p != 2
                || p == 2 && d.rem_euclid(8) == 5;
            if inert {
                return true;
            }
            let y_max = ((eps + p as f64) / (d as f64).sqrt()) as i128 + 2;
            (0..=y_max).any(|y| {
                [-4 * p as i128, 4 * p as i128].iter().any(|&t| {
                    let x2 = t + d as i128 * y * y;
                    if x2 < 0 {
                        return false;
                    }
                    let x = (x2 as f64).sqrt().round() as i128;
                    (x - 1..=x + 1).any(|x| x >= 0 && x * x == x2)
                })
            })
        });
        let k = QuadraticField::new(m).unwrap();
        assert_eq!(k.has_class_number_one(), all_principal, "m = {m}");
    }
}

#[test]
fn splitting_matches_root_count() {
    for m in squarefree_below(60) {
        let k = QuadraticField::new(m).unwrap();
        for p in (2..300u64).filter(|&p| trial_is_prime(p)) {
            // Roots of the minimal polynomial of w modulo p.
            let roots = (0..p)
                .filter(|&x| {
                    let (x, mm) = (x as i64, m);
                    let v = if m % 4 == 1 {
                        x * x - x - (mm - 1) / 4
                    } else {
                        x * x - mm
                    };
                    v.rem_euclid(p as i64) == 0
                })
                .count();
            let want = match roots {
                2 => SplittingType::Split,
                1 => SplittingType::Ramified,
                _ => SplittingType::Inert,
            };
            assert_eq!(k.splitting_type(&BigInt::from(p)).unwrap(), want, "m = {m}, p = {p}");
        }
    }
}

#[test]
fn residue_rings_have_the_right_size() {
    for m in [2, 5, 13, 6] {
        let k = QuadraticField::new(m).unwrap();
        for p in [2i64, 3, 5, 7, 11] {
            let q = k.prime_above(&BigInt::from(p)).unwrap();
            for power in 1..=2 {
                let modulus = make_modulus(&k, &q, power);
                let idx = modulus.index().to_i64().unwrap();
                if idx > 400 {
                    continue;
                }
                assert_eq!(BigInt::from(idx), q.pi.abs_norm().pow(power));
                let gen = q.pi.pow(power as u64);
                let mut seen = BTreeSet::new();
                for x in 0..idx {
                    for y in 0..idx {
                        let a = k.elem(x, y);
                        let r = reduce_mod(&k, &a, &modulus);
                        assert!((&a - &r).exact_div(&gen).is_some());
                        seen.insert(r);
                    }
                }
                assert_eq!(seen.len() as i64, idx, "m = {m}, pi = {}, power {power}", q.pi);
            }
        }
    }
}

#[test]
fn base_two_over_the_integers() {
    let report = harvest_nonwieferich(&Integers, &BigInt::from(2), 30, &Factorizer::default()).unwrap();
    for row in &report.rows {
        let d = &row.decomposition;
        let value = (1u64 << d.n) - 1;
        let facs = trial_factor(value);
        let u: u64 = facs.iter().filter(|(_, e)| *e == 1).map(|(p, _)| p).product();
        let v: u64 = facs.iter().filter(|(_, e)| *e > 1).map(|(p, e)| p.pow(*e)).product();
        assert_eq!(
            (d.u.clone(), d.v.clone()),
            (BigInt::from(u), BigInt::from(v)),
            "n = {}",
            d.n
        );
        assert_eq!(&d.unit * &d.u * &d.v, BigInt::from(value));
        for q in row.primes() {
            assert_ne!(q.p, BigInt::from(1093));
            assert_ne!(q.p, BigInt::from(3511));
        }
    }
}

#[test]
fn base_three_wieferich_primes() {
    assert_eq!(rational_wieferich_primes(3, 2_000_000).unwrap(), vec![11, 1_006_003]);
}

#[test]
fn quadratic_wieferich_test_matches_oracle() {
    let mut wieferich_seen = 0;
    for m in [2, 3, 5, 13] {
        let k = QuadraticField::new(m).unwrap();
        for p in (2..400u64).filter(|&p| trial_is_prime(p)) {
            let q = k.prime_above(&BigInt::from(p)).unwrap();
            let mut bases = vec![k.epsilon().clone(), k.elem(2, 1), k.elem(-3, 7)];
            // 1 + pi^2 t is always Wieferich.
            bases.push(&k.one() + &(&(&q.pi * &q.pi) * &k.elem(1, 2)));
            for base in bases {
                if base.exact_div(&q.pi).is_some() {
                    continue;
                }
                let want = wieferich_oracle(&k, &q.pi, &q.p, &q.pi.abs_norm(), &base);
                assert_eq!(
                    is_wieferich(&k, &q, &base),
                    want,
                    "m = {m}, pi = {}, base = {base}",
                    q.pi
                );
                wieferich_seen += want as u32;
            }
        }
    }
    assert!(wieferich_seen > 0);
}

#[test]
fn rational_prime_elements_in_degree_one() {
    let q: PrimeElement<BigInt> = wieferich_core::residue::rational_prime(1093);
    assert!(is_wieferich(&Integers, &q, &BigInt::from(2)));
    assert!(!is_wieferich(
        &Integers,
        &wieferich_core::residue::rational_prime(1091),
        &BigInt::from(2)
    ));
}
