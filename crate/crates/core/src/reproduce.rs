//! End-to-end checks of the worked examples and family-wide claims, one
//! entry per acceptance criterion. Shared by the acceptance test target and
//! the `reproduce-paper` CLI subcommand.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angular::{sweep_orthogonality, sweep_specialized_agreement};
use crate::codes::{
    construct_ae_gmde, construct_pi_gmde, correction_family_sweep, fixture, map_e, map_f,
    perturb_entry, random_code, small_parameter_grid, CodeBasis, CodeKind, GmdeParams,
};
use crate::combinatorics::{
    sweep_binomial_ratio_exchange, sweep_bounded_convolution, sweep_double_binomial_convolution,
    sweep_ratio_expansion, SweepReport,
};
use crate::covariance::{check_covariance, GroupSpec};
use crate::error::Result;
use crate::errorset::{build_ae_error_set, ErrorSetCache};
use crate::exactnum::Rational;
use crate::search::{enumerate_and_search, SearchResult};
use crate::verify::{check_conditions, check_kl_correct, check_kl_detect, cross_validate_cached, CrossValidation};

/// Largest spin (as `2J`) in the family sweep.
pub const FAMILY_MAX_N: u32 = 60;
/// Largest order in the family sweep.
pub const FAMILY_MAX_T: u32 = 2;
/// `(n, t, max_support_size)` runs whose codes join the cross-validation.
pub const SEARCH_RUNS: [(u32, u32, usize); 5] = [(9, 1, 2), (11, 1, 3), (13, 1, 3), (17, 2, 2), (21, 2, 3)];
pub const COVARIANCE_PRECISION: u32 = 200;
pub const COVARIANCE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproductionReport {
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "construction fidelity"),
    (2, "order-1 correction"),
    (3, "order-2 correction"),
    (4, "four-dimensional code"),
    (5, "family sweep"),
    (6, "cross-validation"),
    (7, "mapping identities"),
    (8, "binomial identities"),
    (9, "Clebsch-Gordan consistency"),
    (10, "search witness"),
    (11, "covariance"),
    (12, "negative controls"),
];

#[derive(Clone, Debug)]
struct SweepEntry {
    t: u32,
    params: GmdeParams,
    verdicts: CrossValidation,
}

type Shared<T> = OnceLock<std::result::Result<T, String>>;

fn family_sweep() -> std::result::Result<&'static Vec<SweepEntry>, String> {
    static CELL: Shared<Vec<SweepEntry>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut cache = ErrorSetCache::default();
        correction_family_sweep(FAMILY_MAX_T, FAMILY_MAX_N)
            .into_iter()
            .map(|(t, params)| {
                let c = construct_ae_gmde(&params)?;
                let verdicts = cross_validate_cached(&c, t, &mut cache)?;
                Ok(SweepEntry { t, params, verdicts })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn search_results() -> std::result::Result<&'static Vec<SearchResult>, String> {
    static CELL: Shared<Vec<SearchResult>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for (n, t, size) in SEARCH_RUNS {
            out.extend(enumerate_and_search(n, t, size, usize::MAX).map_err(|e| e.to_string())?);
        }
        Ok(out)
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn radicands(c: &CodeBasis) -> BTreeSet<Rational> {
    c.basis()
        .iter()
        .flatten()
        .filter(|e| !e.is_zero())
        .map(|e| e.radicand().clone())
        .collect()
}

fn gmde(g: u32, m: u32, delta: u32, epsilon: i8) -> Result<CodeBasis> {
    construct_ae_gmde(&GmdeParams::new(g, m, delta, epsilon)?)
}

fn construction_fidelity() -> Result<(bool, String)> {
    let built = gmde(2, 1, 2, -1)?;
    let fx = fixture("J7half")?;
    let same = built.basis() == fx.basis() && built.two_j() == 7;
    let rads = radicands(&built) == [q(3, 10), q(7, 10)].into_iter().collect();
    Ok((same && rads, format!("basis equal: {same}, radicands {{3/10, 7/10}}: {rads}")))
}

fn order_one_correction() -> Result<(bool, String)> {
    let set = build_ae_error_set(7, 1)?;
    let rep = check_kl_correct(&fixture("J7half")?, &set)?;
    let ok = rep.pass && set.len() == 10;
    Ok((ok, format!("{} operators, KL correct: {}", set.len(), rep.pass)))
}

fn order_two_correction() -> Result<(bool, String)> {
    let c = gmde(4, 2, 4, -1)?;
    let rads = radicands(&c) == [q(5, 68), q(7, 12), q(35, 102)].into_iter().collect();
    let set = build_ae_error_set(c.two_j(), 2)?;
    let kl = check_kl_correct(&c, &set)?.pass;
    Ok((
        rads && kl && set.len() == 35,
        format!("radicands match: {rads}, {} operators, KL correct: {kl}", set.len()),
    ))
}

fn four_dimensional_code() -> Result<(bool, String)> {
    let c = fixture("J27half")?;
    let correct = check_kl_correct(&c, &build_ae_error_set(27, 1)?)?.pass;
    let detect = check_kl_detect(&c, &build_ae_error_set(27, 2)?)?.pass;
    Ok((
        correct && detect && c.dimension() == 4,
        format!("dimension {}, correct t=1: {correct}, detect t=2: {detect}", c.dimension()),
    ))
}

fn family_claims() -> Result<(bool, String)> {
    let sweep = family_sweep().map_err(crate::error::Error::Precondition)?;
    let failing: Vec<String> = sweep
        .iter()
        .filter(|e| !(e.verdicts.conditions_2t && e.verdicts.kl_correct))
        .map(|e| format!("t={} {}", e.t, e.params.label()))
        .collect();
    let mut detail = format!("{} instances (t <= {FAMILY_MAX_T}, n <= {FAMILY_MAX_N})", sweep.len());
    if !failing.is_empty() {
        detail.push_str(&format!(", {} failing, first: {}", failing.len(), failing[0]));
    }
    Ok((failing.is_empty() && !sweep.is_empty(), detail))
}

fn cross_validation() -> Result<(bool, String)> {
    let sweep = family_sweep().map_err(crate::error::Error::Precondition)?;
    let found = search_results().map_err(crate::error::Error::Precondition)?;
    let mut cache = ErrorSetCache::default();
    let mut bad = Vec::new();
    for e in sweep {
        if !e.verdicts.consistent {
            bad.push(format!("t={} {}", e.t, e.params.label()));
        }
    }
    for r in found {
        let code = r.code.as_ref().expect("feasible results carry a code");
        if !cross_validate_cached(code, r.spec.t, &mut cache)?.consistent {
            bad.push(code.label().to_string());
        }
    }
    let mut detail = format!(
        "{} family codes + {} search codes, {} counterexamples",
        sweep.len(),
        found.len(),
        bad.len()
    );
    if let Some(b) = bad.first() {
        detail.push_str(&format!(", first: {b}"));
    }
    Ok((bad.is_empty(), detail))
}

fn mapping_identities() -> Result<(bool, String)> {
    let mut params: Vec<GmdeParams> = correction_family_sweep(FAMILY_MAX_T, FAMILY_MAX_N)
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    params.extend(small_parameter_grid());
    params.sort_by_key(|p| (p.g, p.m, p.delta, p.epsilon));
    params.dedup();
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in &params {
        let (Ok(ae), Ok(pi)) = (construct_ae_gmde(p), construct_pi_gmde(p)) else {
            continue;
        };
        checked += 1;
        if map_e(&pi)?.basis() != ae.basis() {
            bad.push(format!("e: {}", p.label()));
        }
        // f acts on coefficient vectors, so each code is read as a spin code
        for c in [&ae, &pi] {
            let once = map_f(&c.clone().with_kind(CodeKind::Spin))?;
            if map_f(&once.with_kind(CodeKind::Spin))?.basis() != c.basis() {
                bad.push(format!("f∘f: {}", p.label()));
            }
        }
    }
    Ok((
        bad.is_empty() && checked > 0,
        format!("{checked} parameter sets, {} mismatches", bad.len()),
    ))
}

fn sweep_summary(reports: &[SweepReport]) -> (bool, String) {
    let pass = reports.iter().all(SweepReport::pass);
    let detail = reports
        .iter()
        .map(|r| format!("{} {}: {} checked, {} failures", r.identity, r.range, r.checked, r.failures.len()))
        .collect::<Vec<_>>()
        .join("; ");
    (pass, detail)
}

fn binomial_identities() -> Result<(bool, String)> {
    Ok(sweep_summary(&[
        sweep_binomial_ratio_exchange(20),
        sweep_double_binomial_convolution(6),
        sweep_bounded_convolution(8, -2, 10),
        sweep_ratio_expansion(8, 2),
    ]))
}

fn clebsch_gordan_consistency() -> Result<(bool, String)> {
    Ok(sweep_summary(&[sweep_specialized_agreement(12, 2), sweep_orthogonality(8)]))
}

fn search_witness() -> Result<(bool, String)> {
    let found = enumerate_and_search(9, 1, 2, usize::MAX)?;
    let witness = found.iter().any(|r| {
        r.spec.support0 == [0, 6]
            && r.spec.support1 == [3, 9]
            && r.x.values().cloned().collect::<Vec<_>>() == [q(1, 4), q(3, 4)]
            && r.y.values().cloned().collect::<Vec<_>>() == [q(3, 4), q(1, 4)]
    });
    let set = build_ae_error_set(9, 1)?;
    let mut all_kl = true;
    for r in &found {
        all_kl &= check_kl_correct(r.code.as_ref().expect("feasible"), &set)?.pass;
    }
    Ok((
        witness && all_kl,
        format!("{} codes found, witness present: {witness}, all KL correct: {all_kl}", found.len()),
    ))
}

fn covariance_claims() -> Result<(bool, String)> {
    let (prec, tol) = (COVARIANCE_PRECISION, COVARIANCE_TOLERANCE);
    let bd8 = GroupSpec::binary_dihedral(4)?;
    let two_i = GroupSpec::binary_icosahedral();
    let eleven = check_covariance(&gmde(3, 1, 4, 1)?, &bd8, tol, prec)?;
    let seven = check_covariance(&fixture("J7half")?, &two_i, tol, prec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random_fail = true;
    for (tj, g) in [(11, &bd8), (7, &two_i)] {
        for _ in 0..5 {
            let c = random_code(&mut rng, tj, 2, tj as usize + 1)?;
            random_fail &= !check_covariance(&c, g, tol, prec)?.pass;
        }
    }
    Ok((
        eleven.pass && seven.pass && random_fail,
        format!(
            "J=11/2 vs BD(b=4): {:.3e}, J=7/2 vs 2I: {:.3e}, random subspaces all fail: {random_fail}",
            eleven.max_residual.to_f64(),
            seven.max_residual.to_f64()
        ),
    ))
}

/// Verdicts each fixture is expected to pass, as `(t_correct, t_detect)`.
const FIXTURE_CLAIMS: [(&str, u32, Option<u32>); 4] = [
    ("J7half", 1, None),
    ("J21half", 2, None),
    ("J27half", 1, Some(2)),
    ("J11half", 1, Some(2)),
];

fn claims_hold(c: &CodeBasis, t: u32, detect: Option<u32>, cache: &mut ErrorSetCache) -> Result<bool> {
    let mut ok = check_kl_correct(c, &*cache.ae(c.two_j(), t)?)?.pass;
    if let Some(d) = detect {
        ok &= check_kl_detect(c, &*cache.ae(c.two_j(), d)?)?.pass;
    }
    Ok(ok)
}

fn negative_controls() -> Result<(bool, String)> {
    let j7 = fixture("J7half")?;
    let dup = CodeBasis::new(j7.kind(), j7.two_j(), "duplicated", vec![j7.basis()[0].clone(); 2])?;
    let c1_fails = !check_conditions(&dup, 1, 2)?.c1;

    let factor = q(1001, 1000);
    let mut cache = ErrorSetCache::default();
    let mut total = 0;
    let mut survivors = Vec::new();
    for (name, t, detect) in FIXTURE_CLAIMS {
        let c = fixture(name)?;
        if !claims_hold(&c, t, detect, &mut cache)? {
            survivors.push(format!("{name} unperturbed fails"));
        }
        for v in 0..c.dimension() {
            for idx in 0..=c.two_j() as usize {
                total += 1;
                let p = perturb_entry(&c, v, idx, &factor)?;
                if claims_hold(&p, t, detect, &mut cache)? {
                    survivors.push(format!("{name}[{v}][{idx}]"));
                }
            }
        }
    }
    let mut detail = format!(
        "duplicate vectors fail orthogonality: {c1_fails}; {total} perturbations, {} left all verdicts passing",
        survivors.len()
    );
    if let Some(s) = survivors.first() {
        detail.push_str(&format!(", first: {s}"));
    }
    Ok((c1_fails && survivors.is_empty(), detail))
}

/// Runs one criterion by number.
pub fn run_criterion(id: u32) -> CriterionResult {
    let start = Instant::now();
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, n)| *n);
    let outcome = match id {
        1 => construction_fidelity(),
        2 => order_one_correction(),
        3 => order_two_correction(),
        4 => four_dimensional_code(),
        5 => family_claims(),
        6 => cross_validation(),
        7 => mapping_identities(),
        8 => binomial_identities(),
        9 => clebsch_gordan_consistency(),
        10 => search_witness(),
        11 => covariance_claims(),
        12 => negative_controls(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> ReproductionReport {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|(id, _)| run_criterion(*id)).collect();
    ReproductionReport {
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    }
}
