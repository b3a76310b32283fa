//! `monadforge` command-line front end.
//!
//! Every JSON document starts with a run manifest (command, params, seed,
//! tool version, timestamp) followed by a `result` field. Exit codes: 0 on
//! success, 1 when a mathematical check fails, 2 on usage errors.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monadforge::chow::{invariants_of_e, invariants_of_t, BundleInvariants, DegreeDiscrepancy};
use monadforge::cohomology::line_cohomology;
use monadforge::les::{rank_of_e, twisted_dual_sequence};
use monadforge::mring::{MERSENNE_31, PRIME_1E9_7};
use monadforge::stability::{normalization_shift, rank_of_t, run_stability_scan};
use monadforge::{
    CohTable, MonadSpec, MultiDegree, RankReport, RankVerdict, SimplicityCertificate, SpaceParams, StabilityReport,
    StabilityScanConfig,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

const THREADS_ENV: &str = "MONADFORGE_THREADS";

#[derive(Parser)]
#[command(name = "monadforge", version, about = "Linear monads on Pⁿ×Pⁿ×Pᵐ×Pᵐ and their bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the monad f, g for the given parameters.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check f·g = 0 and the maximal-rank condition.
    Verify {
        #[arg(long, value_parser = positive(), required_unless_present = "input", conflicts_with = "input")]
        n: Option<u32>,
        #[arg(long, value_parser = positive(), required_unless_present = "input", conflicts_with = "input")]
        m: Option<u32>,
        #[arg(long, value_parser = positive(), required_unless_present = "input", conflicts_with = "input")]
        k: Option<u32>,
        /// A monad document written by `build`, checked instead of a fresh one.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cohomology table of the line bundle O(a,b,c,d).
    Cohomology {
        #[command(flatten)]
        params: ParamArgs,
        /// Multidegree `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        degree: MultiDegree,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rank, c1, degree and slope of T and E.
    Invariants {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Vanishing scan for the stability of T.
    Stability {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simplicity certificate for E.
    Simplicity {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invariants, stability scan and simplicity certificate in one document.
    Report {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn positive() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, value_parser = positive())]
    n: u32,
    #[arg(long, value_parser = positive())]
    m: u32,
    #[arg(long, value_parser = positive())]
    k: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ParamArgs {
    fn params(&self) -> SpaceParams {
        SpaceParams::new(self.n, self.m, self.k).expect("clap enforces positive parameters")
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Largest exterior power; defaults to min(8, rank T − 1).
    #[arg(long)]
    max_q: Option<u32>,
    #[arg(long, default_value_t = 4)]
    max_psum: i64,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(0..))]
    component_bound: i64,
    /// Smallest Σpᵢ scanned. Negative values leave the criterion's range and
    /// are only useful to watch the scan fail.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    min_psum: i64,
}

impl ScanArgs {
    fn config(&self, params: SpaceParams) -> Result<StabilityScanConfig, Failure> {
        let defaults = StabilityScanConfig::defaults(params);
        let max_q = self.max_q.unwrap_or(defaults.max_q);
        StabilityScanConfig::new(params, max_q, self.max_psum, self.component_bound)
            .map(|c| c.with_min_psum(self.min_psum))
            .map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Usage(String),
    Check(String),
}

#[derive(Serialize, Deserialize)]
struct RunManifest {
    command: String,
    params: SpaceParams,
    seed: u64,
    tool_version: String,
    timestamp: String,
}

#[derive(Serialize)]
struct Envelope<T> {
    #[serde(flatten)]
    manifest: RunManifest,
    result: T,
}

/// Input side of `verify`: a full `build` document or a bare monad.
#[derive(Deserialize)]
#[serde(untagged)]
enum MonadDocument {
    Enveloped { result: MonadSpec },
    Bare(MonadSpec),
}

/// Fixed unless `SOURCE_DATE_EPOCH` is set, so repeated runs produce the same bytes.
fn timestamp() -> Result<String, Failure> {
    let secs = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(v) => {
            v.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("SOURCE_DATE_EPOCH={v:?} is not an integer")))?
        }
        Err(_) => 0,
    };
    let t = OffsetDateTime::from_unix_timestamp(secs).map_err(|e| Failure::Usage(e.to_string()))?;
    t.format(&Rfc3339).map_err(|e| Failure::Usage(e.to_string()))
}

fn manifest(command: &str, params: SpaceParams, seed: u64) -> Result<RunManifest, Failure> {
    Ok(RunManifest {
        command: command.to_string(),
        params,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp()?,
    })
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn emit_json<T: Serialize>(out: &OutArgs, manifest: RunManifest, result: T) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(&Envelope { manifest, result }).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV}={v:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| Failure::Usage(e.to_string()))
}

#[derive(Serialize)]
struct VerifyReport {
    structure: bool,
    block_gradings: bool,
    composition_zero: bool,
    rank: Vec<RankReport>,
    rank_error: Option<String>,
    certified: bool,
}

fn verify(spec: &MonadSpec, trials: u32, seed: u64) -> VerifyReport {
    let structure = spec.check_structure();
    let block_gradings = structure && spec.check_block_gradings();
    let composition_zero = spec.verify_composition();
    let mut rank = Vec::new();
    let mut rank_error = None;
    if structure {
        for field in [MERSENNE_31, PRIME_1E9_7] {
            match spec.verify_maximal_rank_in(trials, seed, field) {
                Ok(r) => rank.push(r),
                Err(e) => {
                    rank_error = Some(e.to_string());
                    break;
                }
            }
        }
    } else {
        rank_error = Some("structure check failed; ranks not sampled".into());
    }
    let ranks_ok = rank_error.is_none() && rank.iter().all(|r| r.verdict == RankVerdict::Maximal);
    let certified = structure && block_gradings && composition_zero && ranks_ok;
    VerifyReport { structure, block_gradings, composition_zero, rank, rank_error, certified }
}

fn read_monad(path: &Path) -> Result<MonadSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let doc: MonadDocument = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: not a monad document: {e}", path.display())))?;
    Ok(match doc {
        MonadDocument::Enveloped { result } => result,
        MonadDocument::Bare(spec) => spec,
    })
}

#[derive(Serialize)]
struct CohomologyResult {
    degree: MultiDegree,
    cohomology: CohTable,
    euler_characteristic: String,
}

#[derive(Serialize)]
struct InvariantsResult {
    #[serde(rename = "T")]
    t: BundleInvariants,
    #[serde(rename = "E")]
    e: BundleInvariants,
    normalization_shift_e: String,
    degree_discrepancy: DegreeDiscrepancy,
}

fn invariants(params: SpaceParams) -> InvariantsResult {
    let e = invariants_of_e(params);
    InvariantsResult {
        t: invariants_of_t(params),
        normalization_shift_e: normalization_shift(&e, params).to_string(),
        e,
        degree_discrepancy: DegreeDiscrepancy::for_t(params),
    }
}

#[derive(Serialize)]
struct Report {
    rank_e: u64,
    rank_t: u32,
    degree_t: String,
    verdict: monadforge::Conclusion,
    invariants: InvariantsResult,
    stability: StabilityReport,
    simplicity: SimplicityCertificate,
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Build { params: p, format, out } => {
            let spec = MonadSpec::assemble(p.params());
            match format {
                Format::Json => emit_json(&out, manifest("build", p.params(), p.seed)?, &spec),
                Format::Text => emit(&out, &render::monad_text(&spec)),
            }
        }
        Command::Verify { n, m, k, input, trials, seed, out } => {
            let spec = match input {
                Some(path) => read_monad(&path)?,
                None => {
                    let params = SpaceParams::new(n.unwrap(), m.unwrap(), k.unwrap())
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    MonadSpec::assemble(params)
                }
            };
            let report = verify(&spec, trials, seed);
            let certified = report.certified;
            emit_json(&out, manifest("verify", spec.params(), seed)?, report)?;
            if certified {
                Ok(())
            } else {
                Err(Failure::Check("monad conditions not certified".into()))
            }
        }
        Command::Cohomology { params: p, degree, out } => {
            let params = p.params();
            let table = line_cohomology(&params, degree);
            let chi = table.dims().iter().enumerate().fold(BigInt::from(0), |acc, (t, h)| {
                let h = BigInt::from(h.clone());
                if t % 2 == 0 {
                    acc + h
                } else {
                    acc - h
                }
            });
            let result = CohomologyResult { degree, cohomology: table, euler_characteristic: chi.to_string() };
            emit_json(&out, manifest("cohomology", params, p.seed)?, result)
        }
        Command::Invariants { params: p, out } => {
            emit_json(&out, manifest("invariants", p.params(), p.seed)?, invariants(p.params()))
        }
        Command::Stability { params: p, scan, out } => {
            let cfg = scan.config(p.params())?;
            let report = run_stability_scan(&cfg).map_err(|e| Failure::Check(e.to_string()))?;
            let ok = report.all_vanish();
            emit_json(&out, manifest("stability", p.params(), p.seed)?, &report)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check(format!("stability scan found {:?}", report.verdict)))
            }
        }
        Command::Simplicity { params: p, scan, out } => {
            let cfg = scan.config(p.params())?;
            let cert =
                monadforge::les::simplicity_certificate(p.params(), &cfg).map_err(|e| Failure::Check(e.to_string()))?;
            let ok = cert.is_certified();
            emit_json(&out, manifest("simplicity", p.params(), p.seed)?, &cert)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check(format!("{:?}", cert.conclusion)))
            }
        }
        Command::Report { params: p, scan, out } => {
            let params = p.params();
            let cfg = scan.config(params)?;
            let (stability, propagated) =
                rayon::join(|| run_stability_scan(&cfg), || twisted_dual_sequence(params).propagate());
            let stability = stability.map_err(|e| Failure::Check(e.to_string()))?;
            let propagated = propagated.map_err(|e| Failure::Check(e.to_string()))?;
            let simplicity = SimplicityCertificate::conclude(params, &stability, propagated);
            let inv = invariants(params);
            let ok = simplicity.is_certified();
            let report = Report {
                rank_e: rank_of_e(params),
                rank_t: rank_of_t(&params),
                degree_t: inv.t.degree_l.to_string(),
                verdict: simplicity.conclusion.clone(),
                invariants: inv,
                stability,
                simplicity,
            };
            emit_json(&out, manifest("report", params, p.seed)?, report)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check("simplicity not certified".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
