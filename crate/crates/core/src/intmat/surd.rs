//! Exact numbers of the form `a + b·√d` with rational `a`, `b` and a
//! squarefree radicand `d`.
//!
//! Arithmetic operators panic when both operands carry different nonzero
//! radicands; the `checked_*` variants report that as an error instead.

use crate::rat::{format_rational, q, to_f64, Q};
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest radicand accepted by [`QuadraticSurd::sqrt_of`] and friends.
pub const MAX_RADICAND: u64 = 1_000_000_000_000;
const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurdError {
    #[error("radicand {0} exceeds the supported bound {MAX_RADICAND}")]
    RadicandTooLarge(BigInt),
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("incompatible radicands {0} and {1}")]
    MixedRadicands(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
}

/// Splits `n > 0` into `(m, d)` with `n = m²·d` and `d` squarefree.
pub fn square_free_decompose(n: &BigInt) -> Result<(BigInt, BigInt), SurdError> {
    if n.is_negative() {
        return Err(SurdError::NegativeRadicand(n.clone()));
    }
    let small = n
        .to_u64()
        .filter(|v| *v <= MAX_RADICAND)
        .ok_or_else(|| SurdError::RadicandTooLarge(n.clone()))?;
    if small == 0 {
        return Ok((BigInt::zero(), BigInt::zero()));
    }
    let mut rest = small;
    let mut m: u64 = 1;
    let mut d: u64 = 1;
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT && p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        m *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // Whatever remains has no factor up to √rest, so it is 1 or a prime.
    d *= rest;
    Ok((BigInt::from(m), BigInt::from(d)))
}

/// An exact real number `a + b√d`.
///
/// Invariant: either `d = 0` and `b = 0` (a rational), or `d ≥ 2` is
/// squarefree and `b ≠ 0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticSurd {
    #[serde(with = "crate::rat::serde_q")]
    a: Q,
    #[serde(with = "crate::rat::serde_q")]
    b: Q,
    #[serde(with = "crate::rat::serde_bigint")]
    d: BigInt,
}

impl QuadraticSurd {
    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn rational(a: Q) -> Self {
        QuadraticSurd {
            a,
            b: Q::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(q(n))
    }

    /// `a + b√n` for an arbitrary nonnegative integer `n`; square factors of
    /// `n` are pulled into `b`.
    pub fn new(a: Q, b: Q, n: &BigInt) -> Result<Self, SurdError> {
        let (m, d) = square_free_decompose(n)?;
        let b = b * Q::from_integer(m);
        Ok(Self::normalized(a, b, d))
    }

    /// `√n` for a nonnegative integer `n`.
    pub fn sqrt_of(n: &BigInt) -> Result<Self, SurdError> {
        Self::new(Q::zero(), Q::one(), n)
    }

    fn normalized(a: Q, b: Q, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self::rational(a);
        }
        if d.is_one() {
            return Self::rational(a + b);
        }
        QuadraticSurd { a, b, d }
    }

    pub fn rational_part(&self) -> &Q {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Q {
        &self.b
    }

    /// Squarefree radicand, `0` for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.a.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt, SurdError> {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(SurdError::MixedRadicands(self.d.clone(), other.d.clone())),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, SurdError> {
        let d = self.common_radicand(o)?;
        Ok(Self::normalized(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, SurdError> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, SurdError> {
        let d = self.common_radicand(o)?;
        let dq = Q::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dq;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::normalized(a, b, d))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, SurdError> {
        let inv = o.checked_recip()?;
        self.checked_mul(&inv)
    }

    pub fn checked_recip(&self) -> Result<Self, SurdError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(SurdError::DivisionByZero);
        }
        let c = self.conj();
        Ok(Self::normalized(&c.a / &n, &c.b / &n, c.d))
    }

    pub fn recip(&self) -> Self {
        self.checked_recip().expect("reciprocal of zero surd")
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Self {
        Self::normalized(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// Field norm `a² − b²d`; zero only for the zero element.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - &self.b * &self.b * Q::from_integer(self.d.clone())
    }

    /// Field trace `2a`.
    pub fn trace(&self) -> Q {
        &self.a * q(2)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::normalized(&self.a * c, &self.b * c, self.d.clone())
    }

    pub fn add_rational(&self, c: &Q) -> Self {
        Self::normalized(&self.a + c, self.b.clone(), self.d.clone())
    }

    /// Exact sign, decided by comparing `a²` with `b²d` when the parts disagree.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Q::from_integer(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_cmp(&self, o: &Self) -> Result<Ordering, SurdError> {
        let diff = self.checked_sub(o)?;
        Ok(diff.signum().cmp(&0))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let approx = self.to_f64().floor();
        let mut n = if approx.is_finite() {
            BigInt::from(approx as i64)
        } else {
            self.a.floor().to_integer()
        };
        loop {
            let nq = Self::rational(Q::from_integer(n.clone()));
            if self.checked_cmp(&nq).expect("rational comparison") == Ordering::Less {
                n -= 1;
                continue;
            }
            let n1 = Self::rational(Q::from_integer(&n + 1));
            if self.checked_cmp(&n1).expect("rational comparison") != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return to_f64(&self.a);
        }
        let root = to_f64(&Q::from_integer(self.d.clone())).sqrt();
        let a = to_f64(&self.a);
        let b = to_f64(&self.b);
        let naive = a + b * root;
        // Cancellation: recover the small conjugate from the exact norm.
        if a.signum() != b.signum() && a != 0.0 {
            let n = to_f64(&self.norm());
            let other = a - b * root;
            if other != 0.0 {
                return n / other;
            }
        }
        naive
    }

    /// Integer square root helper used when checking perfect squares.
    pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
        if n.is_negative() {
            return None;
        }
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    }
}

fn sign_of(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&format_rational(&self.a));
        }
        let (sign, mag) = if self.b.is_negative() {
            ("-", -self.b.clone())
        } else {
            ("+", self.b.clone())
        };
        let coef = if mag.is_one() {
            String::new()
        } else {
            format!("{}*", format_rational(&mag))
        };
        if self.a.is_zero() {
            let lead = if sign == "-" { "-" } else { "" };
            write!(f, "{lead}{coef}sqrt({})", self.d)
        } else {
            write!(f, "{} {sign} {coef}sqrt({})", format_rational(&self.a), self.d)
        }
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl From<Q> for QuadraticSurd {
    fn from(a: Q) -> Self {
        Self::rational(a)
    }
}

impl From<i64> for QuadraticSurd {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.checked_cmp(o).ok()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: &QuadraticSurd) -> QuadraticSurd {
                self.$checked(o).expect(concat!("surd ", stringify!($m)))
            }
        }
        impl $tr<QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd {
                (&self).$m(&o)
            }
        }
        impl $tr<&QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: &QuadraticSurd) -> QuadraticSurd {
                (&self).$m(o)
            }
        }
        impl $tr<QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd {
                self.$m(&o)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd::normalized(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        -&self
    }
}
