//! Exact scalars: rationals, signed square roots of rationals, and finite
//! ℚ-linear combinations of square roots with a decidable zero test.
//!
//! Every amplitude that appears in the codes and error operators handled by
//! this crate is of the form `±√r` with `r` rational, and every inner product
//! is a finite sum of such terms. Grouping terms by the square-free part of
//! their radicand gives a canonical form, because square roots of distinct
//! square-free integers are linearly independent over ℚ. Zero testing is then
//! a matter of checking that every group cancels.

mod factor;
mod radical;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use rug::Float;

use crate::error::{Error, Result};

pub use radical::{to_float, RadicalSum, REPORT_PRECISION_BITS};
pub use rug::{Integer, Rational};

/// Builds the canonical fraction `num/den`.
pub fn normalize(num: impl Into<Integer>, den: impl Into<Integer>) -> Result<Rational> {
    let num = num.into();
    let den = den.into();
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::from((num, den)))
}

/// Writes a positive rational as `scale² · kernel` with `kernel` a square-free
/// positive integer.
pub fn squarefree_decompose(r: &Rational) -> Result<(Rational, Integer)> {
    if r.cmp0() != Ordering::Greater {
        return Err(Error::NotPositive(r.to_string()));
    }
    // p/q = (pq)/q², so only the integer pq needs splitting.
    let pq = Integer::from(r.numer() * r.denom());
    let (square, kernel) = factor::squarefree_split(&pq);
    let scale = Rational::from((square, r.denom().clone()));
    Ok((scale, kernel))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_i32(v: i32) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Positive),
            _ => None,
        }
    }

    pub fn of_ordering(ord: Ordering) -> Sign {
        match ord {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i32(self.as_i32() * rhs.as_i32()).unwrap()
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_i32(-self.as_i32()).unwrap()
    }
}

/// The real number `sign · √radicand`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: Sign,
    radicand: Rational,
}

impl SqrtRational {
    pub fn new(sign: Sign, radicand: Rational) -> Result<Self> {
        match radicand.cmp0() {
            Ordering::Less => Err(Error::Precondition(format!(
                "radicand {radicand} is negative"
            ))),
            Ordering::Equal if sign != Sign::Zero => Err(Error::Precondition(
                "nonzero sign with zero radicand".into(),
            )),
            Ordering::Greater if sign == Sign::Zero => Err(Error::Precondition(
                "zero sign with nonzero radicand".into(),
            )),
            _ => Ok(SqrtRational { sign, radicand }),
        }
    }

    pub fn zero() -> Self {
        SqrtRational {
            sign: Sign::Zero,
            radicand: Rational::new(),
        }
    }

    pub fn one() -> Self {
        SqrtRational {
            sign: Sign::Positive,
            radicand: Rational::from(1),
        }
    }

    /// `+√r` for `r ≥ 0`.
    pub fn sqrt_of(r: Rational) -> Result<Self> {
        let sign = Sign::of_ordering(r.cmp0());
        Self::new(sign, r)
    }

    /// `sign · √r` where a zero radicand forces the zero sign.
    pub fn signed_sqrt(sign: Sign, r: Rational) -> Result<Self> {
        if r.cmp0() == Ordering::Equal {
            return Self::new(Sign::Zero, r);
        }
        Self::new(sign, r)
    }

    /// The rational `v`, written as `sign(v)·√(v²)`.
    pub fn from_rational(v: &Rational) -> Self {
        SqrtRational {
            sign: Sign::of_ordering(v.cmp0()),
            radicand: Rational::from(v * v),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// The square of the value with the value's sign attached.
    pub fn signed_square(&self) -> Rational {
        match self.sign {
            Sign::Negative => Rational::from(-&self.radicand),
            _ => self.radicand.clone(),
        }
    }

    /// Rewrites the value as `coeff · √kernel` with a square-free kernel.
    pub fn to_surd(&self) -> Surd {
        if self.is_zero() {
            return Surd::zero();
        }
        let (scale, kernel) =
            squarefree_decompose(&self.radicand).expect("radicand is positive");
        let coeff = match self.sign {
            Sign::Negative => -scale,
            _ => scale,
        };
        Surd { coeff, kernel }
    }

    pub fn to_float(&self, precision_bits: u32) -> Float {
        let root = Float::with_val(precision_bits, &self.radicand).sqrt();
        match self.sign {
            Sign::Negative => -root,
            _ => root,
        }
    }

    pub fn scale_radicand(&self, factor: &Rational) -> Result<Self> {
        Self::signed_sqrt(self.sign, Rational::from(&self.radicand * factor))
    }
}

/// Product of two signed square roots.
pub fn sqrt_mul(a: &SqrtRational, b: &SqrtRational) -> SqrtRational {
    let sign = a.sign * b.sign;
    if sign == Sign::Zero {
        return SqrtRational::zero();
    }
    SqrtRational {
        sign,
        radicand: Rational::from(&a.radicand * &b.radicand),
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        sqrt_mul(self, rhs)
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        sqrt_mul(&self, &rhs)
    }
}

impl Neg for SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        SqrtRational {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            Sign::Positive => write!(f, "√({})", self.radicand),
            Sign::Negative => write!(f, "-√({})", self.radicand),
        }
    }
}

/// `coeff · √kernel` with `kernel` a square-free positive integer.
///
/// Products of surds stay surds without any factoring: for square-free
/// `k₁, k₂` with `g = gcd(k₁, k₂)`, `k₁k₂ = g² · (k₁/g)(k₂/g)` and the
/// cofactor is again square-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: Rational,
    kernel: Integer,
}

impl Surd {
    pub fn zero() -> Self {
        Surd {
            coeff: Rational::new(),
            kernel: Integer::from(1),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Surd {
            coeff: r,
            kernel: Integer::from(1),
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn kernel(&self) -> &Integer {
        &self.kernel
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.cmp0() == Ordering::Equal
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        if self.is_zero() || other.is_zero() {
            return Surd::zero();
        }
        if self.kernel == 1 || other.kernel == 1 {
            return Surd {
                coeff: Rational::from(&self.coeff * &other.coeff),
                kernel: Integer::from(&self.kernel * &other.kernel),
            };
        }
        let g = Integer::from(self.kernel.gcd_ref(&other.kernel));
        let k1 = Integer::from(self.kernel.div_exact_ref(&g));
        let k2 = Integer::from(other.kernel.div_exact_ref(&g));
        Surd {
            coeff: Rational::from(&self.coeff * &other.coeff) * g,
            kernel: k1 * k2,
        }
    }

    pub fn scale(&self, r: &Rational) -> Surd {
        if r.cmp0() == Ordering::Equal {
            return Surd::zero();
        }
        Surd {
            coeff: Rational::from(&self.coeff * r),
            kernel: self.kernel.clone(),
        }
    }

    pub fn to_sqrt_rational(&self) -> SqrtRational {
        let sign = Sign::of_ordering(self.coeff.cmp0());
        let radicand = Rational::from(&self.coeff * &self.coeff) * &self.kernel;
        SqrtRational::signed_sqrt(sign, radicand).expect("square is nonnegative")
    }

    pub fn to_float(&self, precision_bits: u32) -> Float {
        let root = Float::with_val(precision_bits, &self.kernel).sqrt();
        root * Float::with_val(precision_bits, &self.coeff)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kernel == 1 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.kernel)
        }
    }
}
