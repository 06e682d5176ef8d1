//! Exact Knill-Laflamme checks and the binomial moment conditions on pairs of
//! real basis vectors.
//!
//! For basis vectors `α, β` of a code on `n + 1` levels the moment conditions
//! at order `(t, t')` are, for all `0 <= a, b <= t'`,
//!
//! * (C1) `Σ_j α_j β_j = 0`
//! * (C2) `Σ_j α_j² = Σ_j β_j² = 1`
//! * (C3) `Σ_j binom(n-2t, j) α_{j+a} β_{j+b} / √(binom(n, j+a) binom(n, j+b)) = 0`
//! * (C4) the same sum with `α_{j+a} α_{j+b} - β_{j+a} β_{j+b}`
//!
//! where coefficients past index `n` count as zero.

use std::collections::BTreeMap;

use rug::Rational;
use serde::Serialize;

use crate::codes::CodeBasis;
use crate::combinatorics::binom_int;
use crate::error::{Error, Result};
use crate::errorset::{sector_inner, sparse_surds, ErrorSet, ErrorSetCache, SectorVector};
use crate::exactnum::{RadicalSum, SqrtRational, Surd};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KlMode {
    Correct,
    Detect,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct KlOptions {
    /// Also evaluate operator pairs from different `δJ` sectors, which must
    /// vanish identically.
    pub cross_sector: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KlViolation {
    pub i: usize,
    pub j: usize,
    pub op_a: String,
    pub op_b: Option<String>,
    pub residual: RadicalSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramEntry {
    pub op_a: String,
    pub op_b: Option<String>,
    pub value: RadicalSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub mode: KlMode,
    pub pass: bool,
    pub checked: u64,
    pub violations: Vec<KlViolation>,
    pub gram: Vec<GramEntry>,
}

fn check_dims(c: &CodeBasis, e: &ErrorSet) -> Result<()> {
    if c.two_j() != e.source_two_j {
        return Err(Error::DimensionMismatch(format!(
            "code has two_J = {}, error set acts on two_J = {}",
            c.two_j(),
            e.source_two_j
        )));
    }
    Ok(())
}

/// Tests `⟨c_i|E_a† E_b|c_j⟩ = δ_ij g_ab` for every pair of operators with
/// equal `δJ`. The products are real, so the pair `(b, a)` is the transpose
/// of `(a, b)` and only `a <= b` is evaluated.
pub fn check_kl_correct(c: &CodeBasis, e: &ErrorSet) -> Result<KlReport> {
    check_kl_correct_with(c, e, KlOptions::default())
}

pub fn check_kl_correct_with(c: &CodeBasis, e: &ErrorSet, opts: KlOptions) -> Result<KlReport> {
    check_dims(c, e)?;
    let k = c.dimension();
    let vectors: Vec<_> = c.basis().iter().map(|v| sparse_surds(v)).collect();
    let images: Vec<Vec<SectorVector>> = e
        .ops
        .iter()
        .map(|op| vectors.iter().map(|v| op.apply_surds(v)).collect())
        .collect();

    let mut checked = 0;
    let mut violations = Vec::new();
    let mut gram = Vec::new();
    for a in 0..e.ops.len() {
        for b in a..e.ops.len() {
            let (oa, ob) = (&e.ops[a], &e.ops[b]);
            let same_sector = oa.delta_j() == ob.delta_j();
            if !same_sector && !opts.cross_sector {
                continue;
            }
            let mut diag: Option<RadicalSum> = None;
            for i in 0..k {
                let j_start = if a == b { i } else { 0 };
                for j in j_start..k {
                    checked += 1;
                    let value = sector_inner(&images[a][i], &images[b][j]);
                    let residual = if i != j {
                        value
                    } else {
                        match &diag {
                            None => {
                                diag = Some(value);
                                continue;
                            }
                            Some(d) => &value - d,
                        }
                    };
                    if !residual.is_zero() {
                        violations.push(KlViolation {
                            i,
                            j,
                            op_a: oa.tag(),
                            op_b: Some(ob.tag()),
                            residual,
                        });
                    }
                }
            }
            if let Some(value) = diag {
                if !same_sector && !value.is_zero() {
                    violations.push(KlViolation {
                        i: 0,
                        j: 0,
                        op_a: oa.tag(),
                        op_b: Some(ob.tag()),
                        residual: value.clone(),
                    });
                }
                gram.push(GramEntry {
                    op_a: oa.tag(),
                    op_b: Some(ob.tag()),
                    value,
                });
            }
        }
    }
    Ok(KlReport {
        mode: KlMode::Correct,
        pass: violations.is_empty(),
        checked,
        violations,
        gram,
    })
}

/// Tests `⟨c_i|E|c_j⟩ = δ_ij g_E`. Operators with `δJ ≠ 0` leave the code's
/// sector and contribute zero; they are skipped unless `cross_sector` is set.
pub fn check_kl_detect(c: &CodeBasis, e: &ErrorSet) -> Result<KlReport> {
    check_kl_detect_with(c, e, KlOptions::default())
}

#[allow(clippy::needless_range_loop)]
pub fn check_kl_detect_with(c: &CodeBasis, e: &ErrorSet, opts: KlOptions) -> Result<KlReport> {
    check_dims(c, e)?;
    let k = c.dimension();
    let vectors: Vec<SectorVector> = c
        .basis()
        .iter()
        .map(|v| SectorVector::from_coefficients(c.two_j(), v))
        .collect();

    let mut checked = 0;
    let mut violations = Vec::new();
    let mut gram = Vec::new();
    for op in &e.ops {
        if op.delta_j() != 0 && !opts.cross_sector {
            continue;
        }
        let images: Vec<SectorVector> = vectors.iter().map(|v| op.apply_surds(&v.entries)).collect();
        let mut diag: Option<RadicalSum> = None;
        for i in 0..k {
            for j in 0..k {
                checked += 1;
                let value = sector_inner(&vectors[i], &images[j]);
                let residual = if i != j {
                    value
                } else {
                    match &diag {
                        None => {
                            diag = Some(value);
                            continue;
                        }
                        Some(d) => &value - d,
                    }
                };
                if !residual.is_zero() {
                    violations.push(KlViolation {
                        i,
                        j,
                        op_a: op.tag(),
                        op_b: None,
                        residual,
                    });
                }
            }
        }
        if let Some(value) = diag {
            gram.push(GramEntry {
                op_a: op.tag(),
                op_b: None,
                value,
            });
        }
    }
    Ok(KlReport {
        mode: KlMode::Detect,
        pass: violations.is_empty(),
        checked,
        violations,
        gram,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionFailure {
    /// Basis vectors the condition was evaluated on.
    pub pair: (usize, usize),
    pub a: u32,
    pub b: u32,
    pub residual: RadicalSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub t: u32,
    pub t_prime: u32,
    pub c1: bool,
    pub c2: bool,
    pub c1_failures: Vec<(usize, usize)>,
    pub c2_failures: Vec<usize>,
    pub c3_failures: Vec<ConditionFailure>,
    pub c4_failures: Vec<ConditionFailure>,
}

impl ConditionReport {
    pub fn pass(&self) -> bool {
        self.c1 && self.c2 && self.c3_failures.is_empty() && self.c4_failures.is_empty()
    }
}

/// `α_k / √binom(n, k)` for every nonzero `α_k`.
fn normalized(v: &[SqrtRational], n: u32) -> BTreeMap<usize, Surd> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let b = Rational::from(binom_int(i64::from(n), k as i64));
            let scaled = c
                .scale_radicand(&Rational::from(b.recip_ref()))
                .expect("binomial is positive inside the range");
            (k, scaled.to_surd())
        })
        .collect()
}

/// `Σ_j binom(n-2t, j) x_{j+a} y_{j+b}` over the sparse normalized vectors.
fn moment(x: &BTreeMap<usize, Surd>, y: &BTreeMap<usize, Surd>, n: u32, t: u32, a: u32, b: u32) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    let top = i64::from(n) - 2 * i64::from(t);
    for (k, xv) in x {
        let j = *k as i64 - i64::from(a);
        if j < 0 || j > top {
            continue;
        }
        let Some(yv) = y.get(&((j + i64::from(b)) as usize)) else {
            continue;
        };
        let w = Rational::from(binom_int(top, j));
        acc.add_surd(&xv.mul(yv).scale(&w));
    }
    acc
}

/// Evaluates (C1)–(C4) on every unordered pair of basis vectors.
pub fn check_conditions(c: &CodeBasis, t: u32, t_prime: u32) -> Result<ConditionReport> {
    if t_prime != t && t_prime != 2 * t {
        return Err(Error::Precondition(format!(
            "t' must be t or 2t, got t={t} t'={t_prime}"
        )));
    }
    let n = c.two_j();
    if n < 2 * t {
        return Err(Error::Precondition(format!("n = {n} is smaller than 2t = {}", 2 * t)));
    }
    let k = c.dimension();
    let norm: Vec<_> = c.basis().iter().map(|v| normalized(v, n)).collect();

    let c2_failures: Vec<usize> = (0..k).filter(|&i| c.norm_squared(i) != 1).collect();
    let mut c1_failures = Vec::new();
    let mut c3_failures = Vec::new();
    let mut c4_failures = Vec::new();
    for p in 0..k {
        for q in p + 1..k {
            if !c.inner(p, q).is_zero() {
                c1_failures.push((p, q));
            }
            for a in 0..=t_prime {
                for b in 0..=t_prime {
                    let c3 = moment(&norm[p], &norm[q], n, t, a, b);
                    if !c3.is_zero() {
                        c3_failures.push(ConditionFailure { pair: (p, q), a, b, residual: c3 });
                    }
                    let mut c4 = moment(&norm[p], &norm[p], n, t, a, b);
                    c4.sub_sum(&moment(&norm[q], &norm[q], n, t, a, b));
                    if !c4.is_zero() {
                        c4_failures.push(ConditionFailure { pair: (p, q), a, b, residual: c4 });
                    }
                }
            }
        }
    }
    Ok(ConditionReport {
        t,
        t_prime,
        c1: c1_failures.is_empty(),
        c2: c2_failures.is_empty(),
        c1_failures,
        c2_failures,
        c3_failures,
        c4_failures,
    })
}

/// Both verifiers on one code, and whether they agree with the sufficiency
/// direction: conditions at `t' = 2t` imply correction, at `t' = t` detection.
#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub t: u32,
    pub conditions_2t: bool,
    pub kl_correct: bool,
    pub conditions_t: bool,
    pub kl_detect: bool,
    pub consistent: bool,
}

pub fn cross_validate(c: &CodeBasis, t: u32) -> Result<CrossValidation> {
    let mut cache = ErrorSetCache::default();
    cross_validate_cached(c, t, &mut cache)
}

pub fn cross_validate_cached(c: &CodeBasis, t: u32, cache: &mut ErrorSetCache) -> Result<CrossValidation> {
    let set = cache.ae(c.two_j(), t)?;
    let conditions_2t = check_conditions(c, t, 2 * t)?.pass();
    let conditions_t = check_conditions(c, t, t)?.pass();
    let kl_correct = check_kl_correct(c, &set)?.pass;
    let kl_detect = check_kl_detect(c, &set)?.pass;
    Ok(CrossValidation {
        t,
        conditions_2t,
        kl_correct,
        conditions_t,
        kl_detect,
        consistent: (!conditions_2t || kl_correct) && (!conditions_t || kl_detect),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{construct_ae_gmde, fixture, CodeKind, GmdeParams};
    use crate::errorset::build_ae_error_set;

    #[test]
    fn seven_half_corrects_order_one() {
        let c = fixture("J7half").unwrap();
        let set = build_ae_error_set(7, 1).unwrap();
        let rep = check_kl_correct(&c, &set).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
        assert!(!rep.gram.is_empty());
    }

    #[test]
    fn duplicated_vector_fails_identity_orthogonality() {
        let c = fixture("J7half").unwrap();
        let v = c.basis()[0].clone();
        let dup = CodeBasis::new(CodeKind::Ae, 7, "dup", vec![v.clone(), v]).unwrap();
        let set = build_ae_error_set(7, 1).unwrap();
        let rep = check_kl_correct(&dup, &set).unwrap();
        assert!(!rep.pass);
        assert!(rep
            .violations
            .iter()
            .any(|x| x.i == 0 && x.j == 1 && x.op_a == "E(r=0,dJ=0,dm=0)"));
        let cond = check_conditions(&dup, 1, 2).unwrap();
        assert!(!cond.c1);
        assert!(cond.c2);
    }

    #[test]
    fn conditions_on_constructions() {
        for (g, m, d, e) in [(2, 1, 2, -1), (3, 1, 4, 1)] {
            let c = construct_ae_gmde(&GmdeParams::new(g, m, d, e).unwrap()).unwrap();
            let rep = check_conditions(&c, 1, 2).unwrap();
            assert!(rep.pass(), "{:?}", rep);
        }
    }

    #[test]
    fn rejects_bad_t_prime() {
        let c = fixture("J7half").unwrap();
        assert!(check_conditions(&c, 1, 3).is_err());
        assert!(check_conditions(&c, 4, 8).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let c = fixture("J7half").unwrap();
        let set = build_ae_error_set(9, 1).unwrap();
        assert!(check_kl_correct(&c, &set).is_err());
        assert!(check_kl_detect(&c, &set).is_err());
    }

    #[test]
    fn cross_sector_pairs_vanish() {
        let c = fixture("J7half").unwrap();
        let set = build_ae_error_set(7, 1).unwrap();
        let plain = check_kl_correct(&c, &set).unwrap();
        let debug = check_kl_correct_with(&c, &set, KlOptions { cross_sector: true }).unwrap();
        assert!(debug.pass);
        assert!(debug.checked > plain.checked);
    }
}
