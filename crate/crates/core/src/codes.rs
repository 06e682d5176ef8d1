//! Code data model, the explicit `(g, m, δ, ε)` constructions, the relabeling
//! maps between PI, AE and spin codes, and the worked example codes.
//!
//! A basis vector of a code with `two_j = n` has `n + 1` entries. For AE and
//! spin codes entry `j` is the amplitude of `|n/2, j - n/2⟩`; for PI codes it
//! is the amplitude of the Dicke state of weight `j`.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::exactnum::{RadicalSum, Sign, SqrtRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CodeKind {
    Ae,
    Pi,
    Spin,
}

impl CodeKind {
    pub fn parse(s: &str) -> Result<CodeKind> {
        match s.to_ascii_lowercase().as_str() {
            "ae" => Ok(CodeKind::Ae),
            "pi" => Ok(CodeKind::Pi),
            "spin" => Ok(CodeKind::Spin),
            other => Err(Error::Format(format!("unknown code kind {other:?}"))),
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Ae => "AE",
            CodeKind::Pi => "PI",
            CodeKind::Spin => "SPIN",
        })
    }
}

/// `k` real basis vectors of length `two_j + 1` with exact entries.
///
/// Orthonormality is not enforced here so that deliberately broken codes can
/// be loaded and rejected by the verifiers; see [`CodeBasis::is_orthonormal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeBasis {
    kind: CodeKind,
    two_j: u32,
    label: String,
    basis: Vec<Vec<SqrtRational>>,
}

impl CodeBasis {
    pub fn new(
        kind: CodeKind,
        two_j: u32,
        label: impl Into<String>,
        basis: Vec<Vec<SqrtRational>>,
    ) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::Precondition("two_J must be positive".into()));
        }
        if basis.is_empty() {
            return Err(Error::Precondition("a code needs at least one basis vector".into()));
        }
        for (i, v) in basis.iter().enumerate() {
            if v.len() != two_j as usize + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "basis vector {i} has {} entries, expected {}",
                    v.len(),
                    two_j + 1
                )));
            }
        }
        Ok(CodeBasis {
            kind,
            two_j,
            label: label.into(),
            basis,
        })
    }

    /// Builds a code from sparse `(index, signed radicand)` lists, where a
    /// negative radicand `-r` stands for `-√r`.
    pub fn from_signed_squares(
        kind: CodeKind,
        two_j: u32,
        label: impl Into<String>,
        vectors: &[&[(usize, Rational)]],
    ) -> Result<Self> {
        let mut basis = Vec::with_capacity(vectors.len());
        for entries in vectors {
            let mut v = vec![SqrtRational::zero(); two_j as usize + 1];
            for (idx, signed) in entries.iter() {
                let slot = v.get_mut(*idx).ok_or_else(|| {
                    Error::DimensionMismatch(format!("index {idx} beyond two_J = {two_j}"))
                })?;
                let sign = Sign::of_ordering(signed.cmp0());
                *slot = SqrtRational::signed_sqrt(sign, Rational::from(signed.abs_ref()))?;
            }
            basis.push(v);
        }
        Self::new(kind, two_j, label, basis)
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis(&self) -> &[Vec<SqrtRational>] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn with_kind(mut self, kind: CodeKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `Σ_j c_j²`, always rational.
    pub fn norm_squared(&self, i: usize) -> Rational {
        self.basis[i]
            .iter()
            .fold(Rational::new(), |acc, c| acc + c.radicand())
    }

    pub fn inner(&self, i: usize, j: usize) -> RadicalSum {
        inner(&self.basis[i], &self.basis[j])
    }

    pub fn is_orthonormal(&self) -> bool {
        (0..self.dimension()).all(|i| {
            self.norm_squared(i) == 1 && (i + 1..self.dimension()).all(|j| self.inner(i, j).is_zero())
        })
    }

    /// Indices with a nonzero entry in some basis vector.
    pub fn support(&self, i: usize) -> Vec<usize> {
        self.basis[i]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Exact inner product of two real coefficient vectors.
pub fn inner(a: &[SqrtRational], b: &[SqrtRational]) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc.add_surd(&(x * y).to_surd());
    }
    acc
}

/// Parameters of the `(g, m, δ, ε)` family, of length `n = 2gm + δ + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GmdeParams {
    pub g: u32,
    pub m: u32,
    pub delta: u32,
    pub epsilon: i8,
}

impl GmdeParams {
    pub fn new(g: u32, m: u32, delta: u32, epsilon: i8) -> Result<Self> {
        let p = GmdeParams { g, m, delta, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        2 * self.g * self.m + self.delta + 1
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(Error::Precondition(format!(
                "epsilon must be +1 or -1, got {}",
                self.epsilon
            )));
        }
        if self.g == 0 {
            return Err(Error::Precondition("g must be positive (n/g appears in b_l)".into()));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!(
            "gmde(g={},m={},delta={},epsilon={})",
            self.g, self.m, self.delta, self.epsilon
        )
    }

    /// `γ² = binom(n/(2g), m)·(n-2gm)/(g(m+1))`.
    pub fn gamma_squared(&self) -> Rational {
        let n = i64::from(self.n());
        let g = i64::from(self.g);
        let m = i64::from(self.m);
        binom(&Rational::from((n, 2 * g)), m) * Rational::from((n - 2 * g * m, g * (m + 1)))
    }

    /// `b_l² = binom(m, l)/binom(n/g - l, m+1)`, or `None` when the denominator vanishes.
    pub fn b_squared(&self, l: u32) -> Option<Rational> {
        let n = i64::from(self.n());
        let g = i64::from(self.g);
        let m = i64::from(self.m);
        let l = i64::from(l);
        let den = binom(&(Rational::from((n, g)) - l), m + 1);
        if den == 0 {
            return None;
        }
        Some(binom(&Rational::from(m), l) / den)
    }
}

fn construct(p: &GmdeParams, kind: CodeKind) -> Result<CodeBasis> {
    p.validate()?;
    let n = p.n();
    let gamma2 = p.gamma_squared();
    if gamma2.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::Precondition(format!("gamma^2 = {gamma2} is not positive")));
    }
    let mut c0 = vec![SqrtRational::zero(); n as usize + 1];
    let mut c1 = vec![SqrtRational::zero(); n as usize + 1];
    let eps = if p.epsilon < 0 { Sign::Negative } else { Sign::Positive };
    for l in 0..=p.m {
        let b2 = p.b_squared(l).ok_or(Error::NegativeRadicand { l })?;
        if b2.cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::NegativeRadicand { l });
        }
        let amp = Rational::from(&gamma2 * &b2);
        let low = (p.g * l) as usize;
        let high = (n - p.g * l) as usize;
        if l % 2 == 0 {
            c0[low] = SqrtRational::new(Sign::Positive, amp.clone())?;
            c1[high] = SqrtRational::new(eps, amp)?;
        } else {
            c1[low] = SqrtRational::new(Sign::Positive, amp.clone())?;
            c0[high] = SqrtRational::new(Sign::Positive, amp)?;
        }
    }
    CodeBasis::new(kind, n, p.label(), vec![c0, c1])
}

/// The two-dimensional AE code of spin `J = n/2` with amplitudes `γ·b_l` at
/// `m = gl - n/2` and `m = n/2 - gl`.
pub fn construct_ae_gmde(p: &GmdeParams) -> Result<CodeBasis> {
    construct(p, CodeKind::Ae)
}

/// The `n`-qubit PI code with the same amplitudes on Dicke weights `gl` and `n - gl`.
pub fn construct_pi_gmde(p: &GmdeParams) -> Result<CodeBasis> {
    construct(p, CodeKind::Pi)
}

fn expect_kind(c: &CodeBasis, expected: CodeKind) -> Result<()> {
    if c.kind != expected {
        return Err(Error::WrongKind {
            expected: expected.to_string(),
            found: c.kind.to_string(),
        });
    }
    Ok(())
}

fn reversed(c: &CodeBasis) -> Vec<Vec<SqrtRational>> {
    c.basis
        .iter()
        .map(|v| v.iter().rev().cloned().collect())
        .collect()
}

/// PI → AE: Dicke weight `j` becomes `|n/2, j - n/2⟩`, so the stored vectors
/// are unchanged.
pub fn map_e(c: &CodeBasis) -> Result<CodeBasis> {
    expect_kind(c, CodeKind::Pi)?;
    Ok(c.clone().with_kind(CodeKind::Ae))
}

/// SPIN → PI: `|J, m⟩` becomes the Dicke state of weight `J - m`, which
/// reverses the stored vectors.
pub fn map_h(c: &CodeBasis) -> Result<CodeBasis> {
    expect_kind(c, CodeKind::Spin)?;
    CodeBasis::new(CodeKind::Pi, c.two_j, c.label.clone(), reversed(c))
}

/// SPIN → AE, the composition `e ∘ h`: `|J, m⟩` becomes `|J, -m⟩`.
pub fn map_f(c: &CodeBasis) -> Result<CodeBasis> {
    map_e(&map_h(c)?)
}

fn q(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// The worked example codes, keyed by name, with the printed amplitudes.
pub fn fixtures() -> BTreeMap<&'static str, CodeBasis> {
    let mut out = BTreeMap::new();
    let ae = |two_j, label: &str, vectors: &[&[(usize, Rational)]]| {
        CodeBasis::from_signed_squares(CodeKind::Ae, two_j, label, vectors)
            .expect("fixture data is well formed")
    };
    out.insert(
        "J7half",
        ae(
            7,
            "J7half",
            &[&[(0, q(3, 10)), (5, q(7, 10))], &[(2, q(7, 10)), (7, q(-3, 10))]],
        ),
    );
    out.insert(
        "J21half",
        ae(
            21,
            "J21half",
            &[
                &[(0, q(5, 68)), (8, q(7, 12)), (17, q(35, 102))],
                &[(4, q(35, 102)), (13, q(-7, 12)), (21, q(-5, 68))],
            ],
        ),
    );
    out.insert(
        "J27half",
        ae(
            27,
            "J27half",
            &[
                &[(0, q(1, 16)), (12, q(3, 4)), (24, q(3, 16))],
                &[(3, q(3, 16)), (15, q(3, 4)), (27, q(1, 16))],
                &[(6, q(3, 8)), (18, q(5, 8))],
                &[(9, q(5, 8)), (21, q(3, 8))],
            ],
        ),
    );
    out.insert(
        "J11half",
        ae(
            11,
            "J11half",
            &[&[(0, q(5, 16)), (8, q(11, 16))], &[(3, q(11, 16)), (11, q(5, 16))]],
        ),
    );
    out
}

/// Looks up a fixture by name.
pub fn fixture(name: &str) -> Result<CodeBasis> {
    fixtures()
        .remove(name)
        .ok_or_else(|| Error::Precondition(format!("unknown fixture {name:?}")))
}

/// Returns `c` with entry `(vector, index)` scaled by `factor` and the vector
/// renormalized exactly. A zero entry is set to `factor - 1` instead.
///
/// Used for negative controls.
pub fn perturb_entry(c: &CodeBasis, vector: usize, index: usize, factor: &Rational) -> Result<CodeBasis> {
    let mut basis = c.basis.clone();
    let v = basis
        .get_mut(vector)
        .ok_or_else(|| Error::DimensionMismatch(format!("no basis vector {vector}")))?;
    let entry = v
        .get_mut(index)
        .ok_or_else(|| Error::DimensionMismatch(format!("no entry {index}")))?;
    *entry = if entry.is_zero() {
        SqrtRational::from_rational(&Rational::from(factor - 1u32))
    } else {
        entry.scale_radicand(&Rational::from(factor * factor))?
    };
    let norm2: Rational = v.iter().fold(Rational::new(), |acc, x| acc + x.radicand());
    let inv = Rational::from(norm2.recip_ref());
    for x in v.iter_mut() {
        *x = x.scale_radicand(&inv)?;
    }
    CodeBasis::new(c.kind, c.two_j, format!("{} (perturbed)", c.label), basis)
}

/// Parameters swept for the family-wide invariants: `1 <= g <= 5`,
/// `m <= 3`, `δ <= 6`, both signs of `ε`.
pub fn small_parameter_grid() -> Vec<GmdeParams> {
    let mut out = Vec::new();
    for g in 1..=5 {
        for m in 0..=3 {
            for delta in 0..=6 {
                for epsilon in [-1i8, 1] {
                    out.push(GmdeParams { g, m, delta, epsilon });
                }
            }
        }
    }
    out
}

/// Parameters covered by the correction guarantee of the family: for each
/// `t <= max_t`, all `m >= t`, `δ >= 2t` and `g >= 2t` (`ε = -1`) or
/// `g >= 2t + 1` (`ε = +1`) with `n <= max_n`.
///
/// `g = 0` is excluded because `n/g` is undefined. For `m = 0` the code does
/// not depend on `g`, so `g` is bounded as if `m` were 1.
pub fn correction_family_sweep(max_t: u32, max_n: u32) -> Vec<(u32, GmdeParams)> {
    let mut out = Vec::new();
    for t in 0..=max_t {
        for epsilon in [-1i8, 1] {
            let g_min = if epsilon < 0 { 2 * t } else { 2 * t + 1 }.max(1);
            for g in g_min.. {
                if 2 * g * t.max(1) + 2 * t + 1 > max_n {
                    break;
                }
                for m in t.. {
                    if 2 * g * m.max(1) + 2 * t + 1 > max_n {
                        break;
                    }
                    for delta in 2 * t.. {
                        let p = GmdeParams { g, m, delta, epsilon };
                        if p.n() > max_n {
                            break;
                        }
                        out.push((t, p));
                    }
                }
            }
        }
    }
    out
}

/// A `k`-dimensional code with `support` random nonzero entries per vector,
/// each vector normalized but not orthogonalized.
pub fn random_code<R: rand::Rng>(
    rng: &mut R,
    two_j: u32,
    k: usize,
    support: usize,
) -> Result<CodeBasis> {
    let support = support.clamp(1, two_j as usize + 1);
    let mut basis = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v = vec![SqrtRational::zero(); two_j as usize + 1];
        let idx = rand::seq::index::sample(rng, two_j as usize + 1, support);
        let mut total = Rational::new();
        let mut raw = Vec::with_capacity(support);
        for i in idx.iter() {
            let r = Rational::from((rng.random_range(1..1000u32), rng.random_range(1..1000u32)));
            total += &r;
            let sign = if rng.random_bool(0.5) { Sign::Positive } else { Sign::Negative };
            raw.push((i, sign, r));
        }
        for (i, sign, r) in raw {
            v[i] = SqrtRational::new(sign, r / &total)?;
        }
        basis.push(v);
    }
    CodeBasis::new(CodeKind::Ae, two_j, "random", basis)
}

/// Integer helper for the big-integer parse paths.
pub(crate) fn parse_integer(s: &str) -> Result<Integer> {
    Integer::parse(s.trim())
        .map(Integer::from)
        .map_err(|_| Error::Format(format!("not an integer: {s:?}")))
}
