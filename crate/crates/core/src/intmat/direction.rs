//! Exact ray directions in the plane.

use super::surd::{QuadraticSurd, SurdError};
use crate::rat::Q;
use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A planar vector with surd coordinates.
pub type SurdVec = [QuadraticSurd; 2];

pub fn surd_vec(x: &[Q; 2]) -> SurdVec {
    [QuadraticSurd::rational(x[0].clone()), QuadraticSurd::rational(x[1].clone())]
}

pub fn surd_vec_f64(x: &SurdVec) -> [f64; 2] {
    [x[0].to_f64(), x[1].to_f64()]
}

pub fn surd_vec_add(x: &SurdVec, y: &SurdVec) -> SurdVec {
    [&x[0] + &y[0], &x[1] + &y[1]]
}

pub fn surd_vec_scale(c: &QuadraticSurd, x: &SurdVec) -> SurdVec {
    [c * &x[0], c * &x[1]]
}

/// 2×2 determinant of the columns `x`, `y`.
pub fn surd_cross(x: &SurdVec, y: &SurdVec) -> QuadraticSurd {
    &(&x[0] * &y[1]) - &(&x[1] * &y[0])
}

pub fn surd_dot(x: &SurdVec, y: &SurdVec) -> QuadraticSurd {
    &(&x[0] * &y[0]) + &(&x[1] * &y[1])
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DirectionError {
    #[error("the zero vector has no direction")]
    ZeroVector,
    #[error(transparent)]
    Surd(#[from] SurdError),
}

/// A canonical representative of the ray `R₊·(x, y)`.
///
/// Rational rays are stored as primitive integer vectors. Irrational rays
/// are stored as `(±1, slope)`, or `(0, ±1)` for vertical rays, so that two
/// directions are equal exactly when the rays coincide.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Direction2 {
    x: QuadraticSurd,
    y: QuadraticSurd,
}

impl Direction2 {
    pub fn new(x: QuadraticSurd, y: QuadraticSurd) -> Result<Self, DirectionError> {
        if x.is_zero() && y.is_zero() {
            return Err(DirectionError::ZeroVector);
        }
        if let (Some(a), Some(b)) = (x.as_rational(), y.as_rational()) {
            let (a, b) = primitive(a, b);
            return Ok(Direction2 {
                x: QuadraticSurd::rational(Q::from_integer(a)),
                y: QuadraticSurd::rational(Q::from_integer(b)),
            });
        }
        if x.is_zero() {
            return Ok(Direction2 {
                x: QuadraticSurd::zero(),
                y: QuadraticSurd::from_int(y.signum() as i64),
            });
        }
        let ax = x.abs();
        let slope = y.checked_div(&ax)?;
        Ok(Direction2 {
            x: QuadraticSurd::from_int(x.signum() as i64),
            y: slope,
        })
    }

    pub fn from_ints(x: i64, y: i64) -> Result<Self, DirectionError> {
        Self::new(QuadraticSurd::from_int(x), QuadraticSurd::from_int(y))
    }

    pub fn from_vec(v: &SurdVec) -> Result<Self, DirectionError> {
        Self::new(v[0].clone(), v[1].clone())
    }

    pub fn from_rational(v: &[Q; 2]) -> Result<Self, DirectionError> {
        Self::from_vec(&surd_vec(v))
    }

    pub fn x(&self) -> &QuadraticSurd {
        &self.x
    }

    pub fn y(&self) -> &QuadraticSurd {
        &self.y
    }

    pub fn vector(&self) -> SurdVec {
        [self.x.clone(), self.y.clone()]
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    /// Unit vector in double precision.
    pub fn unit_f64(&self) -> [f64; 2] {
        let [a, b] = self.to_f64();
        let n = a.hypot(b);
        [a / n, b / n]
    }

    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    pub fn opposite(&self) -> Self {
        Direction2 {
            x: -&self.x,
            y: -&self.y,
        }
    }

    /// Representative of the unoriented line: first nonzero coordinate positive.
    pub fn line_key(&self) -> Self {
        let lead = if self.x.is_zero() { &self.y } else { &self.x };
        if lead.is_negative() {
            self.opposite()
        } else {
            self.clone()
        }
    }

    /// `y/x`, or `None` for vertical rays.
    pub fn slope(&self) -> Option<QuadraticSurd> {
        if self.x.is_zero() {
            None
        } else {
            Some(&self.y / &self.x)
        }
    }

    pub fn is_parallel(&self, o: &Self) -> bool {
        surd_cross(&self.vector(), &o.vector()).is_zero()
    }
}

fn primitive(a: &Q, b: &Q) -> (BigInt, BigInt) {
    let l = a.denom().lcm(b.denom());
    let ai = (a * Q::from_integer(l.clone())).to_integer();
    let bi = (b * Q::from_integer(l)).to_integer();
    let g = ai.gcd(&bi);
    if g.is_zero() || g.is_one() {
        return (ai, bi);
    }
    let g = g.abs();
    (ai / &g, bi / &g)
}

impl fmt::Debug for Direction2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dir({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Direction2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}
