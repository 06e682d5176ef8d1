use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rug::{Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{SqrtRational, Surd};

/// Decimal precision used when rendering residuals for humans.
pub const REPORT_PRECISION_BITS: u32 = 200;

/// `Σ coeff·√kernel`, keyed by square-free kernel. Zero coefficients are never
/// stored, so the empty map is the only representation of zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RadicalSum {
    terms: BTreeMap<Integer, Rational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_surd(s: &Surd) -> Self {
        let mut out = Self::zero();
        out.add_surd(s);
        out
    }

    pub fn from_sqrt(s: &SqrtRational) -> Self {
        Self::from_surd(&s.to_surd())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_surd(&Surd::from_rational(r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (ascending kernel) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Integer, &Rational)> {
        self.terms.iter()
    }

    /// The rational part if the sum has no irrational terms.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Integer::from(1)).cloned(),
            _ => None,
        }
    }

    pub fn add_surd(&mut self, s: &Surd) {
        if s.is_zero() {
            return;
        }
        self.add_term(s.kernel(), s.coeff());
    }

    /// Adds the product `a·b` of two surds.
    pub fn add_product(&mut self, a: &Surd, b: &Surd) {
        let p = a.mul(b);
        self.add_surd(&p);
    }

    fn add_term(&mut self, kernel: &Integer, coeff: &Rational) {
        match self.terms.get_mut(kernel) {
            Some(c) => {
                *c += coeff;
                if c.cmp0() == Ordering::Equal {
                    self.terms.remove(kernel);
                }
            }
            None => {
                self.terms.insert(kernel.clone(), coeff.clone());
            }
        }
    }

    pub fn add_sum(&mut self, other: &RadicalSum) {
        for (k, c) in &other.terms {
            self.add_term(k, c);
        }
    }

    pub fn sub_sum(&mut self, other: &RadicalSum) {
        for (k, c) in &other.terms {
            self.add_term(k, &Rational::from(-c));
        }
    }

    pub fn scale(&self, r: &Rational) -> RadicalSum {
        if r.cmp0() == Ordering::Equal {
            return RadicalSum::zero();
        }
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), Rational::from(c * r)))
                .collect(),
        }
    }

    pub fn mul_surd(&self, s: &Surd) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (k, c) in &self.terms {
            let term = Surd::from_parts(c.clone(), k.clone());
            out.add_product(&term, s);
        }
        out
    }

    pub fn mul_sum(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (k, c) in &other.terms {
            out.add_sum(&self.mul_surd(&Surd::from_parts(c.clone(), k.clone())));
        }
        out
    }

    pub fn to_float(&self, precision_bits: u32) -> Float {
        to_float(self, precision_bits)
    }

    pub fn to_decimal(&self, precision_bits: u32) -> String {
        let f = self.to_float(precision_bits);
        // ~0.3 decimal digits per bit
        let digits = (f64::from(precision_bits) * 0.301).floor() as usize;
        f.to_string_radix(10, Some(digits.max(1)))
    }
}

impl Surd {
    pub(crate) fn from_parts(coeff: Rational, kernel: Integer) -> Surd {
        Surd { coeff, kernel }
    }
}

/// Evaluates the sum at `precision_bits` (at least 53) of binary precision.
///
/// Each term is rounded once for the square root and once for the scaling;
/// terms are accumulated in ascending order of magnitude.
pub fn to_float(a: &RadicalSum, precision_bits: u32) -> Float {
    let prec = precision_bits.max(53);
    let mut terms: Vec<Float> = a
        .terms
        .iter()
        .map(|(k, c)| Float::with_val(prec, k).sqrt() * Float::with_val(prec, c))
        .collect();
    terms.sort_by(|x, y| {
        x.cmp_abs(y)
            .expect("finite terms are totally ordered by magnitude")
    });
    let mut acc = Float::with_val(prec, 0);
    for t in terms {
        acc += t;
    }
    acc
}

impl Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out.add_sum(rhs);
        out
    }
}

impl Sub for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out.sub_sum(rhs);
        out
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), Rational::from(-c)))
                .collect(),
        }
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *k == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({k})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for RadicalSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RadicalSum", 2)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("decimal", &self.to_decimal(REPORT_PRECISION_BITS))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::normalize;

    fn sq(n: i64, d: i64) -> SqrtRational {
        SqrtRational::sqrt_of(normalize(n, d).unwrap()).unwrap()
    }

    #[test]
    fn cancellation() {
        let mut s = RadicalSum::from_sqrt(&sq(2, 1));
        s.add_sum(&-&RadicalSum::from_sqrt(&sq(2, 1)));
        assert!(s.is_zero());
    }

    #[test]
    fn perfect_square_collapses() {
        let a = sq(3, 10).to_surd();
        let mut s = RadicalSum::zero();
        s.add_product(&a, &a);
        s.add_sum(&RadicalSum::from_rational(normalize(-3, 10).unwrap()));
        assert!(s.is_zero());
    }

    #[test]
    fn distinct_kernels_do_not_cancel() {
        let s = &RadicalSum::from_sqrt(&sq(2, 1)) + &RadicalSum::from_sqrt(&sq(3, 1));
        assert!(!s.is_zero());
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn float_rendering() {
        let s = RadicalSum::from_sqrt(&sq(3, 10));
        let f = s.to_float(200);
        let expected = Float::with_val(400, normalize(3, 10).unwrap()).sqrt();
        let err = Float::with_val(400, &f - &expected).abs();
        assert!(err < Float::with_val(400, Float::i_exp(1, -199)));

        assert_eq!(RadicalSum::zero().to_float(64), 0.0);

        let half_root_four = Surd::from_parts(normalize(1, 2).unwrap(), Integer::from(1))
            .mul(&sq(4, 1).to_surd());
        assert_eq!(RadicalSum::from_surd(&half_root_four).to_float(64), 1.0);
    }
}
