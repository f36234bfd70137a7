//! Exact scalar arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every scalar carries its field so that mixed-field arithmetic is caught
//! at the first operation instead of producing garbage.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The coefficient field of an algebra: `ℚ` or `𝔽_p` for a prime `p < 2³¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("mixed-field arithmetic: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Builds `𝔽_p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { p: *p, val: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Fp { p: *p, val: 1 },
        }
    }

    /// The image of an integer in the field.
    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let p64 = *p as i64;
                let val = ((n % p64) + p64) % p64;
                Scalar::Fp { p: *p, val: val as u32 }
            }
        }
    }

    /// `num/den` in the field; over `𝔽_p` the denominator is inverted mod p.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.from_int(num).div(&self.from_int(den))
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, val: u32 },
}

fn fp_inv(a: u64, p: u64) -> Result<u64, FieldError> {
    if a == 0 {
        return Err(FieldError::DivisionByZero);
    }
    // extended Euclid on (a, p), p prime
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus not prime");
    Ok((((t % p as i64) + p as i64) % p as i64) as u64)
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field() != other.field() {
            return Err(FieldError::Mismatch(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => Scalar::Fp {
                p: *p,
                val: ((*a as u64 + *b as u64) % *p as u64) as u32,
            },
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => Scalar::Fp {
                p: *p,
                val: ((*a as u64 * *b as u64) % *p as u64) as u32,
            },
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        match self {
            Scalar::Q(a) => {
                if a.is_zero() {
                    Err(FieldError::DivisionByZero)
                } else {
                    Ok(Scalar::Q(a.recip()))
                }
            }
            Scalar::Fp { p, val } => Ok(Scalar::Fp {
                p: *p,
                val: fp_inv(*val as u64, *p as u64)? as u32,
            }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.mul(&other.inv()?)
    }

    /// `self^n` for any integer exponent (negative uses the inverse).
    pub fn pow(&self, n: i64) -> Result<Scalar, FieldError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Multiplicative order, or `None` if it exceeds `max`.
    pub fn mult_order(&self, max: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=max {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul(self).ok()?;
        }
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

/// Renders a scalar the way the session format expects it (used by the
/// serializer; kept here so core and CLI agree byte-for-byte).
pub fn scalar_to_session_string(s: &Scalar) -> String {
    match s {
        Scalar::Q(q) => {
            if q.is_negative() {
                let a = -q;
                if a.denom().is_one() {
                    return alloc::format!("-{}", a.numer());
                }
                return alloc::format!("-{}/{}", a.numer(), a.denom());
            }
            s.to_string()
        }
        Scalar::Fp { .. } => s.to_string(),
    }
}
