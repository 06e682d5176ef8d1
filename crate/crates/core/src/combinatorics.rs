//! Generalized binomial coefficients and exact checkers for the binomial-sum
//! identities that the code constructions rely on.
//!
//! `binom(x, k)` is `x(x-1)…(x-k+1)/k!` for `k > 0`, `1` for `k = 0` and `0`
//! for `k < 0`, with `x` any rational. Every checker evaluates both sides in
//! exact rational arithmetic.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};

/// Generalized binomial coefficient with rational upper argument.
pub fn binom(x: &Rational, k: i64) -> Rational {
    if k < 0 {
        return Rational::new();
    }
    if *x.denom() == 1 {
        if let Some(n) = x.numer().to_i64() {
            return Rational::from(binom_int(n, k));
        }
    }
    let mut acc = Rational::from(1);
    let mut factor = x.clone();
    for i in 1..=k {
        if factor == 0 {
            return Rational::new();
        }
        acc *= &factor;
        acc /= i;
        factor -= 1;
    }
    acc
}

/// `binom(n, k)` for integer `n` (possibly negative).
pub fn binom_int(n: i64, k: i64) -> Integer {
    if k < 0 {
        return Integer::new();
    }
    if n >= 0 {
        if k > n {
            return Integer::new();
        }
        let k = k.min(n - k);
        return Integer::from(n).binomial(k as u32);
    }
    // binom(-m, k) = (-1)^k binom(m+k-1, k)
    let m = -n;
    let v = Integer::from(m + k - 1).binomial(k as u32);
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

fn b(n: i64, k: i64) -> Rational {
    Rational::from(binom_int(n, k))
}

/// A binomial symbol `binom(upper, lower)` kept unevaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialArg {
    pub upper: Rational,
    pub lower: i64,
}

impl BinomialArg {
    pub fn new(upper: Rational, lower: i64) -> Self {
        BinomialArg { upper, lower }
    }

    pub fn eval(&self) -> Rational {
        binom(&self.upper, self.lower)
    }
}

/// Checks `binom(n-r, k-a)/binom(n, k) = binom(n-k, r-a)·binom(k, a) / (binom(n, r)·binom(r, a))`
/// for `n ≥ r ≥ a` and `n ≥ k ≥ a`.
pub fn check_binomial_ratio_exchange(n: i64, k: i64, r: i64, a: i64) -> Result<bool> {
    if a < 0 || !(n >= r && r >= a && n >= k && k >= a) {
        return Err(Error::Precondition(format!(
            "need n >= r >= a >= 0 and n >= k >= a, got n={n} k={k} r={r} a={a}"
        )));
    }
    let lhs = b(n - r, k - a) / b(n, k);
    let rhs = b(n - k, r - a) * b(k, a) / (b(n, r) * b(r, a));
    Ok(lhs == rhs)
}

/// Checks
/// `binom(a+c+d+e, a+c)·binom(b+c+d+e, c+e) = Σ_i binom(a+b+c+d+e-i, a+b+c+d)·binom(a+d, i+d)·binom(b+c, i+c)`
/// with `i` over the window where the last two factors can be nonzero.
pub fn check_double_binomial_convolution(a: i64, b_: i64, c: i64, d: i64, e: i64) -> Result<bool> {
    if a < 0 || b_ < 0 || c < 0 || d < 0 || e < 0 {
        return Err(Error::Precondition("arguments must be nonnegative".into()));
    }
    let lhs = b(a + c + d + e, a + c) * b(b_ + c + d + e, c + e);
    let mut rhs = Rational::new();
    for i in (-d).max(-c)..=a.min(b_) {
        rhs += b(a + b_ + c + d + e - i, a + b_ + c + d) * b(a + d, i + d) * b(b_ + c, i + c);
    }
    Ok(lhs == rhs)
}

/// Checks
/// `binom(n+m+r, n+r)·binom(l+m, r) = Σ_{i=0}^{m} binom(n+l+m+i, i)·binom(n+m, n+i)·binom(l, r-i)`.
/// Both sides vanish for `r < 0`.
pub fn check_bounded_convolution(n: i64, l: i64, m: i64, r: i64) -> Result<bool> {
    if n < 0 || l < 0 || m < 0 {
        return Err(Error::Precondition("n, l, m must be nonnegative".into()));
    }
    let lhs = b(n + m + r, n + r) * b(l + m, r);
    let mut rhs = Rational::new();
    for i in 0..=m {
        rhs += b(n + l + m + i, i) * b(n + m, n + i) * b(l, r - i);
    }
    Ok(lhs == rhs)
}

/// Arguments of the expansion coefficient used by [`check_ratio_expansion`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FCoeffArgs {
    pub z1: i64,
    pub z2: i64,
    pub u: i64,
    pub v: i64,
    pub w: i64,
    pub q: i64,
    pub t: i64,
    pub n: i64,
}

impl FCoeffArgs {
    pub fn validate(&self) -> Result<()> {
        let FCoeffArgs { z1, z2, u, v, w, q, t, n } = *self;
        let ok = 0 <= z2
            && z2 <= z1
            && z1 <= q
            && q <= 2 * t
            && n >= 2 * t
            && n > 0
            && (0..=z2).contains(&u)
            && (0..=q - z1).contains(&v)
            && (0..=z2 - u).contains(&w);
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("invalid expansion indices {self:?}")))
        }
    }
}

/// Coefficient of `binom(n-2t, j-v-w+z2)` in the expansion of
/// `binom(n̄, j+z1)·binom(n̄, j+z2)/binom(n̄+q, j+q)`, `n̄ = n-2t+q`.
///
/// With `d = z1-z2` this is
/// `binom(z2,u)·binom(n̄,u+d)·binom(n̄-u+v,v)·binom(q-z2,d+v)·binom(z2-u,w) / (binom(q,z1)·binom(n̄+q,q))`.
pub fn f_coeff(args: &FCoeffArgs) -> Result<Rational> {
    args.validate()?;
    let FCoeffArgs { z1, z2, u, v, w, q, t, n } = *args;
    let nbar = n - 2 * t + q;
    let d = z1 - z2;
    let num = b(z2, u) * b(nbar, u + d) * b(nbar - u + v, v) * b(q - z2, d + v) * b(z2 - u, w);
    let den = b(q, z1) * b(nbar + q, q);
    Ok(num / den)
}

/// Checks that `binom(n̄, j+z1)·binom(n̄, j+z2)/binom(n̄+q, j+q)` equals
/// `Σ_{u,v,w} f_coeff·binom(n-2t, j-v-w+z2)`, where the left side is read as
/// `0` when its denominator vanishes (the numerator then vanishes too).
pub fn check_ratio_expansion(n: i64, q: i64, z1: i64, z2: i64, t: i64, j: i64) -> Result<bool> {
    if !(0 <= z2 && z2 <= z1 && z1 <= q && q <= 2 * t && n >= 2 * t) {
        return Err(Error::Precondition(format!(
            "need 0 <= z2 <= z1 <= q <= 2t and n >= 2t, got n={n} q={q} z1={z1} z2={z2} t={t}"
        )));
    }
    let nbar = n - 2 * t + q;
    let den = b(nbar + q, j + q);
    let lhs = if den == 0 {
        if b(nbar, j + z1) * b(nbar, j + z2) != 0 {
            return Ok(false);
        }
        Rational::new()
    } else {
        b(nbar, j + z1) * b(nbar, j + z2) / den
    };
    let mut rhs = Rational::new();
    for u in 0..=z2 {
        for v in 0..=q - z1 {
            for w in 0..=z2 - u {
                let args = FCoeffArgs { z1, z2, u, v, w, q, t, n };
                rhs += f_coeff(&args)? * b(n - 2 * t, j - v - w + z2);
            }
        }
    }
    Ok(lhs == rhs)
}

/// Outcome of an exhaustive sweep of one identity.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub identity: &'static str,
    pub range: String,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

fn sweep<F>(identity: &'static str, range: String, mut body: F) -> SweepReport
where
    F: FnMut(&mut dyn FnMut(String, Result<bool>)),
{
    let mut checked = 0;
    let mut failures = Vec::new();
    body(&mut |label, outcome| {
        checked += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => failures.push(label),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    });
    SweepReport {
        identity,
        range,
        checked,
        failures,
    }
}

pub fn sweep_binomial_ratio_exchange(max_n: i64) -> SweepReport {
    sweep("binomial_ratio_exchange", format!("n <= {max_n}"), |rec| {
        for n in 0..=max_n {
            for k in 0..=n {
                for r in 0..=n {
                    for a in 0..=k.min(r) {
                        rec(
                            format!("n={n} k={k} r={r} a={a}"),
                            check_binomial_ratio_exchange(n, k, r, a),
                        );
                    }
                }
            }
        }
    })
}

pub fn sweep_double_binomial_convolution(max_arg: i64) -> SweepReport {
    sweep(
        "double_binomial_convolution",
        format!("all arguments <= {max_arg}"),
        |rec| {
            for a in 0..=max_arg {
                for b_ in 0..=max_arg {
                    for c in 0..=max_arg {
                        for d in 0..=max_arg {
                            for e in 0..=max_arg {
                                rec(
                                    format!("a={a} b={b_} c={c} d={d} e={e}"),
                                    check_double_binomial_convolution(a, b_, c, d, e),
                                );
                            }
                        }
                    }
                }
            }
        },
    )
}

pub fn sweep_bounded_convolution(max_nlm: i64, r_min: i64, r_max: i64) -> SweepReport {
    sweep(
        "bounded_convolution",
        format!("n,l,m <= {max_nlm}, {r_min} <= r <= {r_max}"),
        |rec| {
            for n in 0..=max_nlm {
                for l in 0..=max_nlm {
                    for m in 0..=max_nlm {
                        for r in r_min..=r_max {
                            rec(
                                format!("n={n} l={l} m={m} r={r}"),
                                check_bounded_convolution(n, l, m, r),
                            );
                        }
                    }
                }
            }
        },
    )
}

/// Sweeps every admissible `(t, q, z1, z2)` for `2t <= n <= max_n`, with `j`
/// running over a window that extends three steps past the support of both
/// sides.
pub fn sweep_ratio_expansion(max_n: i64, max_t: i64) -> SweepReport {
    sweep(
        "ratio_expansion",
        format!("n <= {max_n}, t <= {max_t}, full j windows"),
        |rec| {
            for t in 0..=max_t {
                for n in (2 * t).max(1)..=max_n {
                    for q in 0..=2 * t {
                        for z1 in 0..=q {
                            for z2 in 0..=z1 {
                                for j in (-q - 3)..=(n + 3) {
                                    rec(
                                        format!("n={n} t={t} q={q} z1={z1} z2={z2} j={j}"),
                                        check_ratio_expansion(n, q, z1, z2, t, j),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        },
    )
}
