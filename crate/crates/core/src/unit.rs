//! Fundamental units of real quadratic fields.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cfrac::WalkEnd;
use crate::error::{Error, Result};
use crate::field::{BasisMode, QuadInt, QuadraticField};
use crate::surd::Surd;

/// The fundamental unit `eps > 1` with exactly checked side conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCertificate {
    pub epsilon: QuadInt,
    /// `norm(epsilon)`, either 1 or -1.
    pub norm_sign: i8,
    pub abs_gt_one: bool,
    pub conj_abs_lt_one: bool,
}

/// Plain-data view of a certificate for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSummary {
    pub m: i64,
    pub epsilon: String,
    pub sqrt_form: String,
    pub norm: i8,
    pub abs_gt_one: bool,
    pub conj_abs_lt_one: bool,
}

impl UnitCertificate {
    pub fn summary(&self) -> UnitSummary {
        UnitSummary {
            m: self.epsilon.m(),
            epsilon: self.epsilon.to_string(),
            sqrt_form: self.epsilon.sqrt_form(),
            norm: self.norm_sign,
            abs_gt_one: self.abs_gt_one,
            conj_abs_lt_one: self.conj_abs_lt_one,
        }
    }

    fn certify(epsilon: QuadInt) -> UnitCertificate {
        let one = BigRational::one();
        let norm = epsilon.norm();
        let norm_sign = if norm == BigInt::one() { 1 } else { -1 };
        let abs_gt_one = epsilon.to_surd().abs().cmp_rational(&one) == Ordering::Greater;
        let conj_abs_lt_one = epsilon.conj().to_surd().abs().cmp_rational(&one) == Ordering::Less;
        UnitCertificate {
            epsilon,
            norm_sign,
            abs_gt_one,
            conj_abs_lt_one,
        }
    }
}

/// Converts `(a + b*sqrt(D))/d` into basis coordinates when integral.
pub(crate) fn surd_to_quadint(field: &QuadraticField, s: &Surd) -> Option<QuadInt> {
    let (a, b, _, d) = s.parts();
    // sqrt(D) = 2*sqrt(m) or 2w - 1.
    let (xn, yn) = match field.basis_mode() {
        BasisMode::Sqrt => (a.clone(), b * 2u32),
        BasisMode::HalfSqrt => (a - b, b * 2u32),
    };
    let (x, rx) = num_integer::Integer::div_rem(&xn, d);
    let (y, ry) = num_integer::Integer::div_rem(&yn, d);
    (num_traits::Zero::is_zero(&rx) && num_traits::Zero::is_zero(&ry)).then(|| field.elem(x, y))
}

/// Picks the associate among `±u, ±u^-1` that exceeds 1.
pub fn normalize_unit(u: &QuadInt) -> QuadInt {
    let inv = u.conj().scale(&u.norm());
    let one = BigRational::one();
    let big = if u.to_surd().abs().cmp_rational(&one) == Ordering::Greater {
        u.clone()
    } else {
        inv
    };
    if big.signum() == Ordering::Less {
        -big
    } else {
        big
    }
}

impl QuadraticField {
    /// Fundamental unit `eps > 1`, found by walking the continued fraction of
    /// the reduced generator of the ring once around its period.
    pub fn fundamental_unit(&self) -> &UnitCertificate {
        self.unit_cell().get_or_init(|| {
            let disc = self.discriminant();
            let start = disc.principal_reduced();
            let steps = 4 * (self.disc() as usize + 16);
            let unit = match disc.walk_to_unit_ideal(&start, 1, steps) {
                Ok(WalkEnd::Principal(s)) => s,
                _ => unreachable!("the ring's own cycle always returns to it"),
            };
            let eps = surd_to_quadint(self, &unit).expect("period product is integral");
            UnitCertificate::certify(normalize_unit(&eps))
        })
    }

    pub fn epsilon(&self) -> &QuadInt {
        &self.fundamental_unit().epsilon
    }
}

/// `eps^n` by repeated squaring.
pub fn unit_power(eps: &QuadInt, n: u64) -> Result<QuadInt> {
    if !eps.is_unit() {
        return Err(Error::InvalidBase {
            base: eps.to_string(),
            reason: "not a unit".into(),
        });
    }
    Ok(eps.pow(n))
}
