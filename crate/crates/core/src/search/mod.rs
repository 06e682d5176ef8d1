//! Search for two-dimensional AE codes with staggered supports.
//!
//! When every pair of occupied indices is at least `2t + 1` apart, the
//! off-diagonal moment conditions vanish and the remaining ones are linear in
//! the squared amplitudes `x_j = α_j²`, `y_j = β_j²`:
//!
//! `Σ x = Σ y = 1` and `Σ_j (x_j - y_j) j^i = 0` for `1 <= i <= 2t`
//!
//! (the `i = 0` equation follows from the normalizations). Solutions are found
//! exactly with a rational simplex.

mod simplex;

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::codes::{CodeBasis, CodeKind};
use crate::error::{Error, Result};
use crate::errorset::ErrorSetCache;
use crate::exactnum::{Sign, SqrtRational};
use crate::verify::{check_kl_correct, cross_validate_cached};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSpec {
    pub n: u32,
    pub t: u32,
    pub support0: Vec<u32>,
    pub support1: Vec<u32>,
    pub require_counter_symmetric: bool,
}

impl SearchSpec {
    pub fn new(n: u32, t: u32, support0: Vec<u32>, support1: Vec<u32>) -> Self {
        SearchSpec {
            n,
            t,
            support0,
            support1,
            require_counter_symmetric: false,
        }
    }

    fn union(&self) -> Vec<u32> {
        let mut all: Vec<u32> = self.support0.iter().chain(&self.support1).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn validate(&self) -> Result<()> {
        for s in [&self.support0, &self.support1] {
            if s.is_empty() {
                return Err(Error::Precondition("supports must be nonempty".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Precondition("supports must be strictly increasing".into()));
            }
            if s.iter().any(|&j| j > self.n) {
                return Err(Error::Precondition(format!("support index beyond n = {}", self.n)));
            }
        }
        let all = self.union();
        for w in all.windows(2) {
            if w[1] - w[0] < 2 * self.t + 1 {
                return Err(Error::NotStaggered(w[0], w[1]));
            }
        }
        if self.require_counter_symmetric && !self.is_counter_symmetric() {
            return Err(Error::Precondition(
                "occupied indices are not symmetric about n/2".into(),
            ));
        }
        Ok(())
    }

    /// Occupied indices are symmetric under `j ↦ n - j`.
    pub fn is_counter_symmetric(&self) -> bool {
        let all = self.union();
        all.iter().zip(all.iter().rev()).all(|(a, b)| a + b == self.n)
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub spec: SearchSpec,
    pub feasible: bool,
    pub x: BTreeMap<u32, Rational>,
    pub y: BTreeMap<u32, Rational>,
    pub code: Option<CodeBasis>,
}

struct RationalMap<'a>(&'a BTreeMap<u32, Rational>);

impl Serialize for RationalMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(&k.to_string(), &v.to_string())?;
        }
        m.end()
    }
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SearchResult", 4)?;
        st.serialize_field("spec", &self.spec)?;
        st.serialize_field("feasible", &self.feasible)?;
        st.serialize_field("x", &RationalMap(&self.x))?;
        st.serialize_field("y", &RationalMap(&self.y))?;
        st.end()
    }
}

fn power(j: u32, i: u32) -> Rational {
    Rational::from(Integer::from(j).pow(i))
}

/// Residuals `Σ x_j j^i - Σ y_j j^i` for `0 <= i <= 2t`.
pub fn moment_residuals(
    x: &BTreeMap<u32, Rational>,
    y: &BTreeMap<u32, Rational>,
    t: u32,
) -> Vec<Rational> {
    (0..=2 * t)
        .map(|i| {
            let sx = x.iter().fold(Rational::new(), |acc, (j, v)| acc + v * power(*j, i));
            let sy = y.iter().fold(Rational::new(), |acc, (j, v)| acc + v * power(*j, i));
            sx - sy
        })
        .collect()
}

/// Solves the moment system on the given supports. Underdetermined systems
/// yield the lexicographically smallest solution in the order
/// `support0` ascending, then `support1` ascending.
pub fn solve_staggered(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let n0 = spec.support0.len();
    let nvars = n0 + spec.support1.len();
    let mut a = Vec::new();
    let mut b = Vec::new();

    let mut row = vec![Rational::new(); nvars];
    for v in row.iter_mut().take(n0) {
        *v = Rational::from(1);
    }
    a.push(row);
    b.push(Rational::from(1));
    let mut row = vec![Rational::new(); nvars];
    for v in row.iter_mut().skip(n0) {
        *v = Rational::from(1);
    }
    a.push(row);
    b.push(Rational::from(1));
    for i in 1..=2 * spec.t {
        let mut row = Vec::with_capacity(nvars);
        row.extend(spec.support0.iter().map(|&j| power(j, i)));
        row.extend(spec.support1.iter().map(|&j| -power(j, i)));
        a.push(row);
        b.push(Rational::new());
    }

    let Some(sol) = simplex::lexicographic_min(&a, &b) else {
        return Ok(SearchResult {
            spec: spec.clone(),
            feasible: false,
            x: BTreeMap::new(),
            y: BTreeMap::new(),
            code: None,
        });
    };
    let x: BTreeMap<u32, Rational> = spec.support0.iter().copied().zip(sol[..n0].iter().cloned()).collect();
    let y: BTreeMap<u32, Rational> = spec.support1.iter().copied().zip(sol[n0..].iter().cloned()).collect();

    let sums_ok = x.values().fold(Rational::new(), |a, v| a + v) == 1
        && y.values().fold(Rational::new(), |a, v| a + v) == 1;
    if !sums_ok || moment_residuals(&x, &y, spec.t).iter().any(|r| *r != 0) {
        return Err(Error::SearchVerification("moment residual is nonzero".into()));
    }

    let vector = |m: &BTreeMap<u32, Rational>| -> Result<Vec<SqrtRational>> {
        let mut v = vec![SqrtRational::zero(); spec.n as usize + 1];
        for (j, val) in m {
            v[*j as usize] = SqrtRational::signed_sqrt(Sign::Positive, val.clone())?;
        }
        Ok(v)
    };
    let label = format!("staggered(n={},t={},{:?},{:?})", spec.n, spec.t, spec.support0, spec.support1);
    let code = CodeBasis::new(CodeKind::Ae, spec.n, label, vec![vector(&x)?, vector(&y)?])?;
    Ok(SearchResult {
        spec: spec.clone(),
        feasible: true,
        x,
        y,
        code: Some(code),
    })
}

/// Strictly increasing sequences in `[0, n]` of length `1..=max_size` with
/// consecutive gaps of at least `gap`, in lexicographic order.
fn spaced_sequences(n: u32, gap: u32, max_size: usize) -> Vec<Vec<u32>> {
    fn extend(n: u32, gap: u32, max_size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let start = cur.last().map_or(0, |&l| l + gap);
        for j in start..=n {
            cur.push(j);
            out.push(cur.clone());
            if cur.len() < max_size {
                extend(n, gap, max_size, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if max_size > 0 {
        extend(n, gap, max_size, &mut Vec::new(), &mut out);
    }
    out
}

fn disjoint_staggered(a: &[u32], b: &[u32], gap: u32) -> bool {
    a.iter().all(|&x| b.iter().all(|&y| x.abs_diff(y) >= gap))
}

/// Solves every staggered support pair with at most `max_support_size`
/// indices per logical state and returns up to `limit` feasible results.
///
/// Pairs are visited in lexicographic order of `(support0, support1)`;
/// pairs with `support1[0] < support0[0]` are skipped since they only swap
/// the logical labels. Each returned code is checked against the exact KL
/// conditions at order `t` before it is returned.
pub fn enumerate_and_search(
    n: u32,
    t: u32,
    max_support_size: usize,
    limit: usize,
) -> Result<Vec<SearchResult>> {
    enumerate_with(n, t, max_support_size, limit, false)
}

pub fn enumerate_with(
    n: u32,
    t: u32,
    max_support_size: usize,
    limit: usize,
    require_counter_symmetric: bool,
) -> Result<Vec<SearchResult>> {
    if n < 2 * t + 1 {
        return Err(Error::Precondition(format!("need n >= 2t+1, got n={n} t={t}")));
    }
    let gap = 2 * t + 1;
    let seqs = spaced_sequences(n, gap, max_support_size);
    let mut cache = ErrorSetCache::default();
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for s0 in &seqs {
        for s1 in &seqs {
            if s1[0] < s0[0] || !disjoint_staggered(s0, s1, gap) {
                continue;
            }
            let mut spec = SearchSpec::new(n, t, s0.clone(), s1.clone());
            spec.require_counter_symmetric = require_counter_symmetric;
            if require_counter_symmetric && !spec.is_counter_symmetric() {
                continue;
            }
            let res = solve_staggered(&spec)?;
            if !res.feasible {
                continue;
            }
            let code = res.code.as_ref().expect("feasible results carry a code");
            let set = cache.ae(n, t)?;
            let kl = check_kl_correct(code, &set)?;
            if !kl.pass {
                return Err(Error::SearchVerification(format!(
                    "{} fails KL at order {t}",
                    code.label()
                )));
            }
            if !cross_validate_cached(code, t, &mut cache)?.consistent {
                return Err(Error::SearchVerification(format!(
                    "{} disagrees between verifiers",
                    code.label()
                )));
            }
            out.push(res);
            if out.len() >= limit {
                return Ok(out);
            }
        }
    }
    Ok(out)
}
