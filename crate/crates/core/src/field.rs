//! Real quadratic fields `Q(sqrt m)` and exact arithmetic in their rings of
//! integers, in the integral basis `{1, w}`.
//!
//! `w = (1 + sqrt m)/2` when `m = 1 (mod 4)` and `w = sqrt m` otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_squarefree;
use crate::cfrac::Discriminant;
use crate::error::{Error, Result};
use crate::surd::{sign_of, Surd};
use crate::unit::UnitCertificate;

/// Which generator the integral basis uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisMode {
    /// `w = sqrt(m)`, for `m = 2, 3 (mod 4)`.
    Sqrt,
    /// `w = (1 + sqrt(m))/2`, for `m = 1 (mod 4)`.
    HalfSqrt,
}

impl BasisMode {
    pub fn for_m(m: i64) -> BasisMode {
        if m.rem_euclid(4) == 1 {
            BasisMode::HalfSqrt
        } else {
            BasisMode::Sqrt
        }
    }
}

/// The field `Q(sqrt m)` together with its discriminant and class number.
#[derive(Debug, Clone)]
pub struct QuadraticField {
    m: i64,
    disc: i64,
    mode: BasisMode,
    class_number: u64,
    unit: OnceLock<UnitCertificate>,
}

impl PartialEq for QuadraticField {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for QuadraticField {}

impl QuadraticField {
    /// Builds the field for a squarefree `m > 1`, computing its class number.
    pub fn new(m: i64) -> Result<QuadraticField> {
        if m < 0 {
            return Err(Error::ComplexField { m });
        }
        if m < 2 {
            return Err(Error::DegenerateField { m });
        }
        if !is_squarefree(m) {
            return Err(Error::NotSquarefree { m });
        }
        let mode = BasisMode::for_m(m);
        let disc = match mode {
            BasisMode::HalfSqrt => m,
            BasisMode::Sqrt => 4 * m,
        };
        let class_number = Discriminant::new(BigInt::from(disc)).cycle_count();
        Ok(QuadraticField {
            m,
            disc,
            mode,
            class_number,
            unit: OnceLock::new(),
        })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn basis_mode(&self) -> BasisMode {
        self.mode
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn has_class_number_one(&self) -> bool {
        self.class_number == 1
    }

    pub fn require_class_number_one(&self) -> Result<()> {
        if self.has_class_number_one() {
            Ok(())
        } else {
            Err(Error::ClassNumberNotOne {
                m: self.m,
                class_number: self.class_number,
            })
        }
    }

    /// Human-readable description of `w`.
    pub fn omega_description(&self) -> String {
        match self.mode {
            BasisMode::HalfSqrt => format!("(1+sqrt({}))/2", self.m),
            BasisMode::Sqrt => format!("sqrt({})", self.m),
        }
    }

    pub(crate) fn discriminant(&self) -> Discriminant {
        Discriminant::new(BigInt::from(self.disc))
    }

    pub(crate) fn unit_cell(&self) -> &OnceLock<UnitCertificate> {
        &self.unit
    }

    pub fn elem(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> QuadInt {
        QuadInt::new(self.m, x.into(), y.into())
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> QuadInt {
        self.elem(n, 0)
    }

    pub fn one(&self) -> QuadInt {
        self.elem(1, 0)
    }

    pub fn zero(&self) -> QuadInt {
        self.elem(0, 0)
    }

    pub fn omega(&self) -> QuadInt {
        self.elem(0, 1)
    }

    /// `sqrt(m)` in basis coordinates.
    pub fn sqrt_m(&self) -> QuadInt {
        match self.mode {
            BasisMode::HalfSqrt => self.elem(-1, 2),
            BasisMode::Sqrt => self.elem(0, 1),
        }
    }

    /// Converts `a + b*sqrt(m)` with rational `a`, `b` into basis form,
    /// failing when the number is not an algebraic integer.
    pub fn from_sqrt_coords(&self, a: &BigRational, b: &BigRational) -> Result<QuadInt> {
        let (x, y) = match self.mode {
            BasisMode::Sqrt => (a.clone(), b.clone()),
            BasisMode::HalfSqrt => (a - b, b * BigRational::from_integer(BigInt::from(2))),
        };
        if !x.is_integer() || !y.is_integer() {
            return Err(Error::Parse {
                input: format!("{a}+{b}*sqrt({})", self.m),
                reason: "not an algebraic integer of this field".into(),
            });
        }
        Ok(self.elem(x.to_integer(), y.to_integer()))
    }

    pub fn parse(&self, s: &str) -> Result<QuadInt> {
        parse_element(self, s)
    }

    /// Exact comparison of `|a|` (real embedding `sqrt m > 0`) with a
    /// nonnegative rational threshold.
    pub fn compare_abs(&self, a: &QuadInt, threshold: &BigRational) -> Ordering {
        a.to_surd().abs().cmp_rational(threshold)
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.m)
    }
}

/// An algebraic integer `x + y*w` of `Q(sqrt m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    m: i64,
    x: BigInt,
    y: BigInt,
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.m, &self.x, &self.y).cmp(&(&other.m, &other.x, &other.y))
    }
}

impl QuadInt {
    pub fn new(m: i64, x: BigInt, y: BigInt) -> QuadInt {
        QuadInt { m, x, y }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn mode(&self) -> BasisMode {
        BasisMode::for_m(self.m)
    }

    fn omega_sq_const(&self) -> BigInt {
        match self.mode() {
            BasisMode::HalfSqrt => BigInt::from((self.m - 1) / 4),
            BasisMode::Sqrt => BigInt::from(self.m),
        }
    }

    fn check(&self, other: &QuadInt) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.m,
                right: other.m,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// True when the element is a rational integer.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn checked_add(&self, other: &QuadInt) -> Result<QuadInt> {
        self.check(other)?;
        Ok(QuadInt::new(self.m, &self.x + &other.x, &self.y + &other.y))
    }

    pub fn checked_sub(&self, other: &QuadInt) -> Result<QuadInt> {
        self.check(other)?;
        Ok(QuadInt::new(self.m, &self.x - &other.x, &self.y - &other.y))
    }

    pub fn checked_mul(&self, other: &QuadInt) -> Result<QuadInt> {
        self.check(other)?;
        let yy = &self.y * &other.y;
        let x = &self.x * &other.x + &yy * self.omega_sq_const();
        let mut y = &self.x * &other.y + &self.y * &other.x;
        if self.mode() == BasisMode::HalfSqrt {
            y += yy;
        }
        Ok(QuadInt::new(self.m, x, y))
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt::new(self.m, &self.x * k, &self.y * k)
    }

    pub fn pow(&self, mut n: u64) -> QuadInt {
        let mut base = self.clone();
        let mut acc = QuadInt::new(self.m, BigInt::one(), BigInt::zero());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Galois conjugate.
    pub fn conj(&self) -> QuadInt {
        match self.mode() {
            BasisMode::HalfSqrt => QuadInt::new(self.m, &self.x + &self.y, -&self.y),
            BasisMode::Sqrt => QuadInt::new(self.m, self.x.clone(), -&self.y),
        }
    }

    /// Field norm `a * conj(a)`.
    pub fn norm(&self) -> BigInt {
        let c = self.omega_sq_const();
        match self.mode() {
            BasisMode::HalfSqrt => &self.x * &self.x + &self.x * &self.y - c * &self.y * &self.y,
            BasisMode::Sqrt => &self.x * &self.x - c * &self.y * &self.y,
        }
    }

    /// Absolute value of the norm.
    pub fn abs_norm(&self) -> BigInt {
        self.norm().abs()
    }

    pub fn trace(&self) -> BigInt {
        match self.mode() {
            BasisMode::HalfSqrt => &self.x * 2u32 + &self.y,
            BasisMode::Sqrt => &self.x * 2u32,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.abs_norm().is_one()
    }

    /// The element as `(a + b*sqrt(m))/d` in the real embedding with
    /// `sqrt(m) > 0`.
    pub fn to_surd(&self) -> Surd {
        let m = BigInt::from(self.m);
        match self.mode() {
            BasisMode::HalfSqrt => Surd::new(&self.x * 2u32 + &self.y, self.y.clone(), m, BigInt::from(2)),
            BasisMode::Sqrt => Surd::new(self.x.clone(), self.y.clone(), m, BigInt::one()),
        }
    }

    /// Rational coordinates `(a, b)` with `self = a + b*sqrt(m)`.
    pub fn sqrt_coords(&self) -> (BigRational, BigRational) {
        match self.mode() {
            BasisMode::HalfSqrt => {
                let two = BigInt::from(2);
                (
                    BigRational::new(&self.x * 2u32 + &self.y, two.clone()),
                    BigRational::new(self.y.clone(), two),
                )
            }
            BasisMode::Sqrt => (
                BigRational::from_integer(self.x.clone()),
                BigRational::from_integer(self.y.clone()),
            ),
        }
    }

    /// Sign of the element in the real embedding.
    pub fn signum(&self) -> Ordering {
        let s = self.to_surd();
        let (a, b, r, _) = s.parts();
        sign_of(a, b, r)
    }

    /// Compares `|self|` with `|other|` in the real embedding.
    pub fn cmp_abs(&self, other: &QuadInt) -> Ordering {
        self.to_surd().abs().cmp_exact(&other.to_surd().abs())
    }

    /// Exact quotient `self / d`, or `None` when it is not integral.
    pub fn exact_div(&self, d: &QuadInt) -> Option<QuadInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let t = self * &d.conj();
        let (qx, rx) = t.x.div_rem(&n);
        let (qy, ry) = t.y.div_rem(&n);
        (rx.is_zero() && ry.is_zero()).then(|| QuadInt::new(self.m, qx, qy))
    }

    /// Renders `a + b*sqrt(m)`, with halves where needed.
    pub fn sqrt_form(&self) -> String {
        let (a, b) = self.sqrt_coords();
        if b.is_zero() {
            return format!("{a}");
        }
        let bpart = if b.is_one() {
            format!("sqrt({})", self.m)
        } else if (-b.clone()).is_one() {
            format!("-sqrt({})", self.m)
        } else {
            format!("{b}*sqrt({})", self.m)
        };
        if a.is_zero() {
            bpart
        } else if bpart.starts_with('-') {
            format!("{a}{bpart}")
        } else {
            format!("{a}+{bpart}")
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_negative() {
            write!(f, "{}-{}*w", self.x, -&self.y)
        } else {
            write!(f, "{}+{}*w", self.x, self.y)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadInt> for &'a QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &'a QuadInt) -> QuadInt {
                self.$checked(rhs)
                    .expect("quadratic integers from different fields")
            }
        }
        impl $tr for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: QuadInt) -> QuadInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.m, -&self.x, -&self.y)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

// ---- parsing -------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum Atom {
    One,
    Omega,
    Sqrt,
}

fn parse_error(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Splits `s` into signed terms, leaving signs inside parentheses alone.
pub(crate) fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut depth = 0;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && !cur.is_empty() && !cur.ends_with('*') && !cur.ends_with('/') => {
                terms.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            }
            '+' | '-' if depth == 0 && cur.is_empty() => {
                if ch == '-' {
                    negative = !negative;
                }
            }
            _ => cur.push(ch),
        }
    }
    terms.push((negative, cur));
    terms
}

fn parse_rational(input: &str, s: &str) -> Result<BigRational> {
    let bad = || parse_error(input, format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

fn parse_atom(input: &str, s: &str, m: i64) -> Result<Atom> {
    if s == "w" {
        return Ok(Atom::Omega);
    }
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let k: i64 = inner
            .parse()
            .map_err(|_| parse_error(input, format!("bad radicand `{inner}`")))?;
        if k != m {
            return Err(parse_error(input, format!("sqrt({k}) does not belong to Q(sqrt({m}))")));
        }
        return Ok(Atom::Sqrt);
    }
    Err(parse_error(input, format!("unknown symbol `{s}`")))
}

fn parse_term(input: &str, term: &str, m: i64) -> Result<(BigRational, Atom)> {
    if term.is_empty() {
        return Err(parse_error(input, "empty term"));
    }
    if let Some((coef, atom)) = term.rsplit_once('*') {
        let atom = parse_atom(input, atom, m)?;
        let coef = if coef.is_empty() || coef == "+" {
            BigRational::one()
        } else if coef == "-" {
            -BigRational::one()
        } else {
            parse_rational(input, coef)?
        };
        return Ok((coef, atom));
    }
    if term.starts_with(|c: char| c.is_ascii_digit()) {
        return Ok((parse_rational(input, term)?, Atom::One));
    }
    Ok((BigRational::one(), parse_atom(input, term, m)?))
}

fn parse_element(field: &QuadraticField, s: &str) -> Result<QuadInt> {
    if s.trim().is_empty() {
        return Err(parse_error(s, "empty expression"));
    }
    let zero = || BigRational::zero();
    let (mut c, mut cw, mut cs) = (zero(), zero(), zero());
    for (negative, term) in split_terms(s) {
        let (mut coef, atom) = parse_term(s, &term, field.m)?;
        if negative {
            coef = -coef;
        }
        match atom {
            Atom::One => c += coef,
            Atom::Omega => cw += coef,
            Atom::Sqrt => cs += coef,
        }
    }
    if !cw.is_integer() {
        return Err(parse_error(s, "coefficient of w must be an integer"));
    }
    let base = field
        .from_sqrt_coords(&c, &cs)
        .map_err(|_| parse_error(s, "not an algebraic integer of this field"))?;
    Ok(&base + &field.omega().scale(&cw.to_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> QuadraticField {
        QuadraticField::new(2).unwrap()
    }

    #[test]
    fn field_construction() {
        let f = QuadraticField::new(2).unwrap();
        assert_eq!((f.disc(), f.basis_mode(), f.class_number()), (8, BasisMode::Sqrt, 1));
        let f = QuadraticField::new(5).unwrap();
        assert_eq!(
            (f.disc(), f.basis_mode(), f.class_number()),
            (5, BasisMode::HalfSqrt, 1)
        );
        assert_eq!(QuadraticField::new(12).unwrap_err(), Error::NotSquarefree { m: 12 });
        assert_eq!(QuadraticField::new(-3).unwrap_err(), Error::ComplexField { m: -3 });
        assert_eq!(QuadraticField::new(1).unwrap_err(), Error::DegenerateField { m: 1 });
    }

    #[test]
    fn class_numbers() {
        for (m, h) in [(2, 1), (10, 2), (13, 1), (15, 2), (79, 3), (82, 4)] {
            assert_eq!(QuadraticField::new(m).unwrap().class_number(), h, "m = {m}");
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f = q2();
        let a = f.elem(1, 1);
        assert_eq!(&a * &a, f.elem(3, 2));
        let g = QuadraticField::new(5).unwrap();
        assert_eq!(g.omega() * g.omega(), g.elem(1, 1));
        assert_eq!(&a * &f.one(), a);
        assert_eq!(-&a + a.clone(), f.zero());
    }

    #[test]
    fn field_mismatch() {
        let a = q2().one();
        let b = QuadraticField::new(3).unwrap().one();
        assert_eq!(a.checked_mul(&b), Err(Error::FieldMismatch { left: 2, right: 3 }));
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_sub(&b).is_err());
    }

    #[test]
    fn norms() {
        let f = q2();
        assert_eq!(f.elem(1, 1).norm(), BigInt::from(-1));
        assert_eq!(f.elem(3, 1).norm(), BigInt::from(7));
        assert_eq!(f.elem(6, 5).abs_norm(), BigInt::from(14));
        let e = f.elem(6, 5);
        assert_eq!((&e * &e.conj()), f.from_int(e.norm()));
    }

    #[test]
    fn compare_abs_examples() {
        let f = q2();
        let one = BigRational::one();
        assert_eq!(f.compare_abs(&f.elem(1, 1), &one), Ordering::Greater);
        assert_eq!(f.compare_abs(&f.elem(1, -1), &one), Ordering::Less);
        assert_eq!(
            f.compare_abs(&f.elem(0, 1), &BigRational::from_integer(2.into())),
            Ordering::Less
        );
    }

    #[test]
    fn parse_forms() {
        let f = q2();
        assert_eq!(f.parse("3+2*w").unwrap(), f.elem(3, 2));
        assert_eq!(f.parse("3-1*w").unwrap(), f.elem(3, -1));
        assert_eq!(f.parse("-w").unwrap(), f.elem(0, -1));
        assert_eq!(f.parse("6+5*sqrt(2)").unwrap(), f.elem(6, 5));
        assert_eq!(f.parse("sqrt(2)").unwrap(), f.elem(0, 1));
        assert_eq!(f.parse(" 7 ").unwrap(), f.elem(7, 0));
        assert!(f.parse("1/2+1/2*sqrt(2)").is_err());
        assert!(f.parse("1+sqrt(3)").is_err());
        assert!(f.parse("").is_err());
        let g = QuadraticField::new(5).unwrap();
        assert_eq!(g.parse("1/2+1/2*sqrt(5)").unwrap(), g.omega());
        assert_eq!(g.parse("sqrt(5)").unwrap(), g.elem(-1, 2));
    }

    #[test]
    fn display_round_trips() {
        let f = QuadraticField::new(13).unwrap();
        for (x, y) in [(0, 0), (3, -1), (-4, 7), (1, 0)] {
            let a = f.elem(x, y);
            assert_eq!(f.parse(&a.to_string()).unwrap(), a);
            assert_eq!(f.parse(&a.sqrt_form()).unwrap(), a);
        }
    }

    #[test]
    fn exact_division() {
        let f = q2();
        assert_eq!(f.elem(6, 5).exact_div(&f.elem(0, 1)), Some(f.elem(5, 3)));
        assert_eq!(f.elem(3, 1).exact_div(&f.elem(3, -1)), None);
    }
}
