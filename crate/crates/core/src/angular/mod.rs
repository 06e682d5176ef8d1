//! Angular-momentum labels, exact Clebsch-Gordan coefficients and
//! floating-point Wigner rotation matrices.

mod wigner;

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom_int, SweepReport};
use crate::error::{Error, Result};
use crate::exactnum::{RadicalSum, Sign, SqrtRational};

pub use wigner::{wigner_d, ComplexMatrix, Su2};

/// A half-integer `twice / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_rational(self) -> Rational {
        Rational::from((self.0, 2))
    }

    /// Parses `"7/2"`, `"-3"` or `"1.5"`.
    pub fn parse(s: &str) -> Result<HalfInt> {
        let s = s.trim();
        let bad = || Error::Format(format!("not a half-integer: {s}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt(2 * num)),
                _ => Err(bad()),
            };
        }
        if let Some(stripped) = s.strip_suffix(".5") {
            let whole: i64 = stripped.parse().map_err(|_| bad())?;
            let neg = stripped.starts_with('-');
            return Ok(HalfInt(2 * whole + if neg { -1 } else { 1 }));
        }
        let v: i64 = s.parse().map_err(|_| bad())?;
        Ok(HalfInt(2 * v))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Labels of `C^{J,M}_{j1,m1;j2,m2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CgIndex {
    pub j1: HalfInt,
    pub m1: HalfInt,
    pub j2: HalfInt,
    pub m2: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl CgIndex {
    /// Builds the index from doubled labels.
    pub fn from_twice(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> Self {
        CgIndex {
            j1: HalfInt(j1),
            m1: HalfInt(m1),
            j2: HalfInt(j2),
            m2: HalfInt(m2),
            j: HalfInt(j),
            m: HalfInt(m),
        }
    }
}

fn fact(n: i64) -> Integer {
    debug_assert!(n >= 0);
    Integer::from(Integer::factorial(n as u32))
}

fn sqrt_signed_square(sum: Rational, radicand: Rational) -> SqrtRational {
    let sign = Sign::of_ordering(sum.cmp0());
    if sign == Sign::Zero {
        return SqrtRational::zero();
    }
    let value = radicand * Rational::from(&sum * &sum);
    SqrtRational::new(sign, value).expect("positive by construction")
}

/// Exact Clebsch-Gordan coefficient in the Condon-Shortley phase convention.
/// Labels violating a selection rule give zero.
pub fn clebsch_gordan(idx: &CgIndex) -> SqrtRational {
    let (tj1, tm1, tj2, tm2, tj, tm) = (
        idx.j1.0, idx.m1.0, idx.j2.0, idx.m2.0, idx.j.0, idx.m.0,
    );
    if tj1 < 0 || tj2 < 0 || tj < 0 || tm1 + tm2 != tm {
        return SqrtRational::zero();
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return SqrtRational::zero();
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return SqrtRational::zero();
    }
    if tj > tj1 + tj2 || tj < (tj1 - tj2).abs() || (tj1 + tj2 + tj) % 2 != 0 {
        return SqrtRational::zero();
    }
    let h = |x: i64| x / 2;
    let mut radicand = Rational::from((
        Integer::from(tj + 1)
            * fact(h(tj + tj1 - tj2))
            * fact(h(tj - tj1 + tj2))
            * fact(h(tj1 + tj2 - tj)),
        fact(h(tj1 + tj2 + tj) + 1),
    ));
    radicand *= fact(h(tj + tm))
        * fact(h(tj - tm))
        * fact(h(tj1 - tm1))
        * fact(h(tj1 + tm1))
        * fact(h(tj2 - tm2))
        * fact(h(tj2 + tm2));

    let upper = [h(tj1 + tj2 - tj), h(tj1 - tm1), h(tj2 + tm2)];
    let lower = [h(tj - tj2 + tm1), h(tj - tj1 - tm2)];
    let k_min = 0.max(-lower[0]).max(-lower[1]);
    let k_max = upper.iter().copied().min().unwrap();
    let mut sum = Rational::new();
    for k in k_min..=k_max {
        let den = fact(k)
            * fact(upper[0] - k)
            * fact(upper[1] - k)
            * fact(upper[2] - k)
            * fact(lower[0] + k)
            * fact(lower[1] + k);
        let term = Rational::from((Integer::from(1), den));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sqrt_signed_square(sum, radicand)
}

/// Checks `0 <= t-r <= a, q <= t+r <= 2t` and `n >= 2t`.
pub fn check_specialized_indices(n: i64, t: i64, r: i64, a: i64, q: i64) -> Result<()> {
    let lo = t - r;
    let hi = t + r;
    let ok = t >= 0 && r >= 0 && lo >= 0 && hi <= 2 * t && n >= 2 * t;
    if ok && (lo..=hi).contains(&a) && (lo..=hi).contains(&q) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "need 0 <= t-r <= a,q <= t+r <= 2t and n >= 2t, got n={n} t={t} r={r} a={a} q={q}"
        )))
    }
}

/// `true` when `j` lies in `[-min(a,q), n - max(a, 2t-q)]`, outside of which
/// the specialized coefficient vanishes.
pub fn specialized_window(n: i64, t: i64, a: i64, q: i64, j: i64) -> bool {
    -a.min(q) <= j && j <= n - a.max(2 * t - q)
}

/// The square-root prefactor shared by the binomial form and its expansion,
/// `binom(n,t+r-q)·binom(2r,r+t-q) / (binom(n+q+r-t+1,r+t-q)·binom(2r,a+r-t))`.
pub fn specialized_prefactor(n: i64, t: i64, r: i64, a: i64, q: i64) -> Rational {
    Rational::from((
        binom_int(n, t + r - q) * binom_int(2 * r, r + t - q),
        binom_int(n + q + r - t + 1, r + t - q) * binom_int(2 * r, a + r - t),
    ))
}

/// The binomial-sum form of `C^{n/2-t+q, j-n/2+t}_{n/2, j+a-n/2; r, t-a}`
/// without the phase correction that aligns it with Condon-Shortley.
///
/// With `n̄ = n-2t+q` it is
/// `√(prefactor / (binom(n,j+a)·binom(n̄+q,j+q))) · Σ_{k=t-r}^{q} (-1)^k binom(q-(t-r),k-(t-r))·binom(t+r-q,a-k)·binom(n̄+(t-r),j+k)`.
pub fn cg_binomial_form(n: i64, t: i64, r: i64, a: i64, q: i64, j: i64) -> Result<SqrtRational> {
    check_specialized_indices(n, t, r, a, q)?;
    if !specialized_window(n, t, a, q, j) {
        return Ok(SqrtRational::zero());
    }
    let nbar = n - 2 * t + q;
    let radicand = specialized_prefactor(n, t, r, a, q)
        / Rational::from(binom_int(n, j + a) * binom_int(nbar + q, j + q));
    let mut sum = Integer::new();
    for k in (t - r)..=q {
        let term = binom_int(q - (t - r), k - (t - r))
            * binom_int(t + r - q, a - k)
            * binom_int(nbar + (t - r), j + k);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sqrt_signed_square(Rational::from(sum), radicand))
}

/// `C^{n/2-t+q, j-n/2+t}_{n/2, j+a-n/2; r, t-a}` in the Condon-Shortley
/// convention, evaluated through the binomial-sum form.
///
/// The binomial form differs from Condon-Shortley by `(-1)^(a+q+t-r)`; the
/// magnitudes agree.
pub fn cg_specialized(n: i64, t: i64, r: i64, a: i64, q: i64, j: i64) -> Result<SqrtRational> {
    let raw = cg_binomial_form(n, t, r, a, q, j)?;
    Ok(if (a + q + t - r).rem_euclid(2) == 1 {
        -raw
    } else {
        raw
    })
}

/// The general-formula index that `cg_specialized(n, t, r, a, q, j)` stands for.
pub fn specialized_index(n: i64, t: i64, r: i64, a: i64, q: i64, j: i64) -> CgIndex {
    CgIndex::from_twice(
        n,
        2 * (j + a) - n,
        2 * r,
        2 * (t - a),
        n - 2 * t + 2 * q,
        2 * j - n + 2 * t,
    )
}

/// Compares `cg_specialized` with `clebsch_gordan` on every admissible
/// `(n, t, r, a, q)` with `n <= max_n`, `t <= max_t`, and `j` running three
/// steps past the nonzero window on each side.
pub fn sweep_specialized_agreement(max_n: i64, max_t: i64) -> SweepReport {
    let mut checked = 0;
    let mut failures = Vec::new();
    for t in 0..=max_t {
        for n in 2 * t..=max_n {
            for r in 0..=t {
                for a in (t - r)..=(t + r) {
                    for q in (t - r)..=(t + r) {
                        for j in (-q - 3)..=(n + 3) {
                            checked += 1;
                            let general = clebsch_gordan(&specialized_index(n, t, r, a, q, j));
                            match cg_specialized(n, t, r, a, q, j) {
                                Ok(v) if v == general => {}
                                Ok(v) => failures.push(format!(
                                    "n={n} t={t} r={r} a={a} q={q} j={j}: {v} vs {general}"
                                )),
                                Err(e) => failures.push(format!("n={n} t={t} r={r} a={a} q={q}: {e}")),
                            }
                        }
                    }
                }
            }
        }
    }
    SweepReport {
        identity: "specialized_cg_agreement",
        range: format!("n <= {max_n}, t <= {max_t}"),
        checked,
        failures,
    }
}

/// Exact check of `Σ_J C^{J,M}_{j1,m1;j2,m2}·C^{J,M}_{j1,m1';j2,m2'} = δ` for
/// all `j1, j2 <= max_twice_j / 2`.
pub fn sweep_orthogonality(max_twice_j: i64) -> SweepReport {
    let mut checked = 0;
    let mut failures = Vec::new();
    for tj1 in 0..=max_twice_j {
        for tj2 in 0..=max_twice_j {
            let js: Vec<i64> = ((tj1 - tj2).abs()..=tj1 + tj2).step_by(2).collect();
            for tm in (-(tj1 + tj2)..=tj1 + tj2).step_by(2) {
                let pairs: Vec<(i64, i64)> = (-tj1..=tj1)
                    .step_by(2)
                    .map(|m1| (m1, tm - m1))
                    .filter(|(_, m2)| m2.abs() <= tj2)
                    .collect();
                for (i, &(m1, m2)) in pairs.iter().enumerate() {
                    for &(p1, p2) in &pairs[i..] {
                        checked += 1;
                        let mut acc = RadicalSum::zero();
                        for &tj in &js {
                            let x = clebsch_gordan(&CgIndex::from_twice(tj1, m1, tj2, m2, tj, tm));
                            let y = clebsch_gordan(&CgIndex::from_twice(tj1, p1, tj2, p2, tj, tm));
                            acc.add_product(&x.to_surd(), &y.to_surd());
                        }
                        let expect = if m1 == p1 { 1 } else { 0 };
                        if acc != RadicalSum::from_rational(Rational::from(expect)) {
                            failures.push(format!(
                                "j1={tj1}/2 j2={tj2}/2 ({m1},{m2}) ({p1},{p2}) sums to {acc}"
                            ));
                        }
                    }
                }
            }
        }
    }
    SweepReport {
        identity: "cg_orthogonality",
        range: format!("j1, j2 <= {max_twice_j}/2"),
        checked,
        failures,
    }
}
