mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aecodes_core::angular::{clebsch_gordan, CgIndex, HalfInt};
use aecodes_core::codes::{construct_ae_gmde, construct_pi_gmde, fixture, map_e, map_f, map_h, CodeBasis, CodeKind, GmdeParams};
use aecodes_core::combinatorics::{
    sweep_binomial_ratio_exchange, sweep_bounded_convolution, sweep_double_binomial_convolution,
    sweep_ratio_expansion,
};
use aecodes_core::covariance::{check_covariance, check_covariance_full, logical_action, GroupSpec};
use aecodes_core::errorset::{build_ae_error_set, build_spin_error_set, ErrorSet, ErrorSetCache};
use aecodes_core::format::{from_json, to_json};
use aecodes_core::reproduce::{run_all, run_criterion, ReproductionReport};
use aecodes_core::search::enumerate_and_search;
use aecodes_core::verify::{check_conditions, check_kl_correct_with, check_kl_detect_with, cross_validate_cached, KlOptions};
use aecodes_core::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "aecodes", version, about = "Construct and verify absorption-emission, PI and spin codes")]
struct Cli {
    /// Also write a run manifest (input digests, parameters, verdicts) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from the (g, m, delta, epsilon) family or a named fixture.
    Construct(ConstructArgs),
    /// Check a code file against KL conditions or the moment conditions.
    Verify(VerifyArgs),
    /// List the transition operators up to order t.
    Errors(ErrorsArgs),
    /// Exact Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m>.
    Cg(CgArgs),
    /// Relabel a code between the spin, PI and AE pictures.
    Map(MapArgs),
    /// Search for codes with staggered supports.
    Search(SearchArgs),
    /// Check covariance of a code under a finite subgroup of SU(2).
    Covariance(CovarianceArgs),
    /// Exhaustive sweeps of the binomial identities.
    Identities,
    /// Run every acceptance scenario and print a consolidated report.
    ReproducePaper {
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ae,
    Pi,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, required_unless_present = "fixture")]
    g: Option<u32>,
    #[arg(long, required_unless_present = "fixture")]
    m: Option<u32>,
    #[arg(long, required_unless_present = "fixture")]
    delta: Option<u32>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "fixture")]
    epsilon: Option<i8>,
    #[arg(long, value_enum, default_value = "ae")]
    kind: KindArg,
    /// One of J7half, J21half, J27half, J11half.
    #[arg(long, conflicts_with_all = ["g", "m", "delta", "epsilon"])]
    fixture: Option<String>,
    /// Write the code here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Correct,
    Detect,
    Conditions,
    Cross,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long)]
    t: u32,
    #[arg(long, value_enum, default_value = "correct")]
    mode: Mode,
    /// For `conditions`: t or 2t (default 2t).
    #[arg(long)]
    t_prime: Option<u32>,
    /// Also evaluate operator pairs from different δJ sectors.
    #[arg(long)]
    cross_sector: bool,
}

#[derive(Args)]
struct ErrorsArgs {
    #[arg(long = "two-j")]
    two_j: u32,
    #[arg(long)]
    t: u32,
    /// Only δJ = 0 operators (random rotations of a single spin).
    #[arg(long)]
    spin: bool,
}

#[derive(Args)]
struct CgArgs {
    #[arg(long, allow_hyphen_values = true)]
    j1: String,
    #[arg(long, allow_hyphen_values = true)]
    m1: String,
    #[arg(long, allow_hyphen_values = true)]
    j2: String,
    #[arg(long, allow_hyphen_values = true)]
    m2: String,
    #[arg(long, allow_hyphen_values = true)]
    j: String,
    #[arg(long, allow_hyphen_values = true)]
    m: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    E,
    H,
    F,
}

#[derive(Args)]
struct MapArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    via: Via,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    #[arg(long, default_value_t = 2)]
    max_size: usize,
    #[arg(long, default_value_t = 10)]
    limit: usize,
    /// Directory for code files and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    #[value(name = "2o")]
    TwoO,
    #[value(name = "2i")]
    TwoI,
    Bd,
}

#[derive(Args)]
struct CovarianceArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    group: GroupArg,
    /// Binary dihedral parameter b (group order 8b).
    #[arg(long, default_value_t = 4)]
    b: u32,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, env = "AECODES_PRECISION_BITS", default_value_t = 200)]
    precision: u32,
    /// Check every group element instead of the generators.
    #[arg(long)]
    full_group: bool,
}

fn print_json(v: &impl serde::Serialize) {
    let text = serde_json::to_string_pretty(v).expect("reports serialize");
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn load(path: &Path, manifest: &mut RunManifest) -> Result<CodeBasis> {
    let bytes = std::fs::read(path)?;
    manifest.input(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?;
    from_json(&text)
}

fn write_out(path: &Path, text: &str, manifest: &mut RunManifest) -> Result<()> {
    std::fs::write(path, text)?;
    manifest.output(path, text.as_bytes());
    Ok(())
}

fn emit_code(c: &CodeBasis, out: Option<&Path>, manifest: &mut RunManifest) -> Result<()> {
    let text = to_json(c) + "\n";
    match out {
        Some(p) => {
            write_out(p, &text, manifest)?;
            print_json(&json!({"written": p.display().to_string(), "label": c.label()}));
        }
        None => {
            let _ = write!(std::io::stdout().lock(), "{text}");
        }
    }
    Ok(())
}

fn construct(a: &ConstructArgs, man: &mut RunManifest) -> Result<bool> {
    let c = match &a.fixture {
        Some(name) => {
            man.param("fixture", name);
            fixture(name)?
        }
        None => {
            let p = GmdeParams::new(
                a.g.unwrap_or_default(),
                a.m.unwrap_or_default(),
                a.delta.unwrap_or_default(),
                a.epsilon.unwrap_or_default(),
            )?;
            man.param("params", p.label());
            match a.kind {
                KindArg::Ae => construct_ae_gmde(&p)?,
                KindArg::Pi => construct_pi_gmde(&p)?,
            }
        }
    };
    man.param("kind", c.kind());
    emit_code(&c, a.out.as_deref(), man)?;
    Ok(true)
}

fn error_set_for(c: &CodeBasis, t: u32) -> Result<ErrorSet> {
    match c.kind() {
        CodeKind::Ae => build_ae_error_set(c.two_j(), t),
        CodeKind::Spin => build_spin_error_set(c.two_j(), t),
        CodeKind::Pi => Err(Error::WrongKind {
            expected: "AE or SPIN (map PI codes with `map --via e`)".into(),
            found: "PI".into(),
        }),
    }
}

fn verify(a: &VerifyArgs, man: &mut RunManifest) -> Result<bool> {
    let c = load(&a.file, man)?;
    man.param("t", a.t);
    let opts = KlOptions {
        cross_sector: a.cross_sector,
    };
    let (pass, report) = match a.mode {
        Mode::Correct => {
            man.param("mode", "correct");
            let r = check_kl_correct_with(&c, &error_set_for(&c, a.t)?, opts)?;
            (r.pass, serde_json::to_value(&r)?)
        }
        Mode::Detect => {
            man.param("mode", "detect");
            let r = check_kl_detect_with(&c, &error_set_for(&c, a.t)?, opts)?;
            (r.pass, serde_json::to_value(&r)?)
        }
        Mode::Conditions => {
            let tp = a.t_prime.unwrap_or(2 * a.t);
            man.param("mode", "conditions");
            man.param("t_prime", tp);
            let r = check_conditions(&c, a.t, tp)?;
            let mut v = serde_json::to_value(&r)?;
            v["pass"] = Value::Bool(r.pass());
            (r.pass(), v)
        }
        Mode::Cross => {
            man.param("mode", "cross");
            let r = cross_validate_cached(&c, a.t, &mut ErrorSetCache::default())?;
            (r.consistent, serde_json::to_value(&r)?)
        }
    };
    man.verdict("pass", pass);
    print_json(&report);
    Ok(pass)
}

fn errors(a: &ErrorsArgs, man: &mut RunManifest) -> Result<bool> {
    man.param("two_J", a.two_j);
    man.param("t", a.t);
    man.param("spin", a.spin);
    let set = if a.spin {
        build_spin_error_set(a.two_j, a.t)?
    } else {
        build_ae_error_set(a.two_j, a.t)?
    };
    man.verdict("operators", set.len());
    print_json(&set);
    Ok(true)
}

fn cg(a: &CgArgs, man: &mut RunManifest) -> Result<bool> {
    let idx = CgIndex {
        j1: HalfInt::parse(&a.j1)?,
        m1: HalfInt::parse(&a.m1)?,
        j2: HalfInt::parse(&a.j2)?,
        m2: HalfInt::parse(&a.m2)?,
        j: HalfInt::parse(&a.j)?,
        m: HalfInt::parse(&a.m)?,
    };
    for (k, v) in [("j1", idx.j1), ("m1", idx.m1), ("j2", idx.j2), ("m2", idx.m2), ("j", idx.j), ("m", idx.m)] {
        man.param(k, v);
    }
    let v = clebsch_gordan(&idx);
    print_json(&json!({
        "j1": idx.j1.to_string(),
        "m1": idx.m1.to_string(),
        "j2": idx.j2.to_string(),
        "m2": idx.m2.to_string(),
        "j": idx.j.to_string(),
        "m": idx.m.to_string(),
        "exact": v.to_string(),
        "sign": v.sign().as_i32(),
        "squared": v.radicand().to_string(),
        "decimal": format!("{:.30}", v.to_float(128)),
    }));
    Ok(true)
}

fn map(a: &MapArgs, man: &mut RunManifest) -> Result<bool> {
    let c = load(&a.file, man)?;
    let (name, out) = match a.via {
        Via::E => ("e", map_e(&c)?),
        Via::H => ("h", map_h(&c)?),
        Via::F => ("f", map_f(&c)?),
    };
    man.param("via", name);
    emit_code(&out, a.out.as_deref(), man)?;
    Ok(true)
}

fn search(a: &SearchArgs, man: &mut RunManifest) -> Result<bool> {
    man.param("n", a.n);
    man.param("t", a.t);
    man.param("max_size", a.max_size);
    man.param("limit", a.limit);
    let found = enumerate_and_search(a.n, a.t, a.max_size, a.limit)?;
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
    }
    let mut cache = ErrorSetCache::default();
    let mut entries = Vec::new();
    for (i, r) in found.iter().enumerate() {
        let code = r.code.as_ref().expect("feasible results carry a code");
        let cv = cross_validate_cached(code, a.t, &mut cache)?;
        let mut entry = serde_json::to_value(r)?;
        entry["verification"] = serde_json::to_value(&cv)?;
        if let Some(dir) = &a.out {
            let path = dir.join(format!("code_{i:03}.json"));
            write_out(&path, &(to_json(code) + "\n"), man)?;
            entry["file"] = Value::String(path.display().to_string());
        }
        entries.push(entry);
    }
    let summary = json!({"n": a.n, "t": a.t, "found": entries.len(), "results": entries});
    if let Some(dir) = &a.out {
        let text = serde_json::to_string_pretty(&summary)? + "\n";
        write_out(&dir.join("summary.json"), &text, man)?;
    }
    man.verdict("found", found.len());
    print_json(&summary);
    Ok(true)
}

fn covariance(a: &CovarianceArgs, man: &mut RunManifest) -> Result<bool> {
    let c = load(&a.file, man)?;
    let g = match a.group {
        GroupArg::TwoO => GroupSpec::binary_octahedral(),
        GroupArg::TwoI => GroupSpec::binary_icosahedral(),
        GroupArg::Bd => GroupSpec::binary_dihedral(a.b)?,
    };
    man.param("group", g.name());
    man.param("tol", a.tol);
    man.param("precision_bits", a.precision);
    man.param("full_group", a.full_group);
    let rep = if a.full_group {
        check_covariance_full(&c, &g, a.tol, a.precision)?
    } else {
        check_covariance(&c, &g, a.tol, a.precision)?
    };
    let mut v = serde_json::to_value(&rep)?;
    if rep.pass && !a.full_group {
        let mut actions = serde_json::Map::new();
        for (name, u) in g.generators(a.precision)? {
            let l = logical_action(&c, &u, a.precision)?;
            let rows: Vec<Vec<String>> = (0..l.rows())
                .map(|i| {
                    (0..l.cols())
                        .map(|j| {
                            let z = &l[(i, j)];
                            format!("{:.12e}{:+.12e}i", z.real().to_f64(), z.imag().to_f64())
                        })
                        .collect()
                })
                .collect();
            actions.insert(name, json!(rows));
        }
        v["logical_action"] = Value::Object(actions);
    }
    man.verdict("pass", rep.pass);
    man.verdict("max_residual", format!("{:.6e}", rep.max_residual.to_f64()));
    print_json(&v);
    Ok(rep.pass)
}

fn identities(man: &mut RunManifest) -> Result<bool> {
    let reports = [
        sweep_binomial_ratio_exchange(20),
        sweep_double_binomial_convolution(6),
        sweep_bounded_convolution(8, -2, 10),
        sweep_ratio_expansion(8, 2),
    ];
    let pass = reports.iter().all(|r| r.pass());
    for r in &reports {
        man.verdict(r.identity, r.pass());
    }
    print_json(&json!({"pass": pass, "sweeps": reports}));
    Ok(pass)
}

fn reproduce(criterion: Option<u32>, man: &mut RunManifest) -> Result<bool> {
    let report = match criterion {
        Some(id) => {
            man.param("criterion", id);
            let r = run_criterion(id);
            ReproductionReport {
                pass: r.pass,
                criteria: vec![r],
            }
        }
        None => run_all(),
    };
    for r in &report.criteria {
        eprintln!("{} {:>2} {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name);
        man.verdict(&format!("criterion_{:02}", r.id), r.pass);
    }
    print_json(&report);
    Ok(report.pass)
}

fn run(cli: &Cli) -> Result<bool> {
    let name = match &cli.command {
        Command::Construct(_) => "construct",
        Command::Verify(_) => "verify",
        Command::Errors(_) => "errors",
        Command::Cg(_) => "cg",
        Command::Map(_) => "map",
        Command::Search(_) => "search",
        Command::Covariance(_) => "covariance",
        Command::Identities => "identities",
        Command::ReproducePaper { .. } => "reproduce-paper",
    };
    let mut man = RunManifest::new(name);
    let pass = match &cli.command {
        Command::Construct(a) => construct(a, &mut man),
        Command::Verify(a) => verify(a, &mut man),
        Command::Errors(a) => errors(a, &mut man),
        Command::Cg(a) => cg(a, &mut man),
        Command::Map(a) => map(a, &mut man),
        Command::Search(a) => search(a, &mut man),
        Command::Covariance(a) => covariance(a, &mut man),
        Command::Identities => identities(&mut man),
        Command::ReproducePaper { criterion } => reproduce(*criterion, &mut man),
    }?;
    if let Some(path) = &cli.manifest {
        std::fs::write(path, man.to_json())?;
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a search result that fails re-verification is a verification failure
        Err(Error::SearchVerification(msg)) => {
            eprintln!("aecodes: search verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("aecodes: {e}");
            ExitCode::from(2)
        }
    }
}
