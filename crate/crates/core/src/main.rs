//! Command-line surface: Betti tables, homogeneous-bundle cohomology,
//! Chern-class reports, model construction, and the verification suites.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 usage, 3 resource or
//! degenerate computation.

use clap::{Args, Parser, Subcommand};
use koszul::bott::{bott_cohomology, BottResult, BottWeight, FlagSignature};
use koszul::chow::{verify_tango_constraints, verify_theorem44_dims, CheckReport};
use koszul::field::FieldSpec;
use koszul::models::{ModelKind, ModelSpec};
use koszul::ring::{ModelJson, Presentation};
use koszul::verify::{
    render_report, table_for_model, verify_duality, verify_hyperplane_principle, verify_remark46,
    verify_theorem45, VerificationReport,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

const EXIT_OK: u8 = 0;
const EXIT_ASSERT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "koszul",
    about = "Exact Betti tables of embedded varieties with representation- and intersection-theoretic cross-checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the graded Betti table of a model or an input presentation.
    Betti(BettiArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Cohomology of one homogeneous bundle on a Grassmannian or flag.
    Bott(BottArgs),
    /// Chern-class and Euler-characteristic reports for the model bundles.
    Chern(ChernArgs),
    /// List the bundled model kinds or export one as JSON.
    Model(ModelArgs),
}

#[derive(Args)]
struct CommonModelArgs {
    /// Model spec such as rnc:3, veronese:2,2, ci:2,3, mukai:6, section:mukai:6.
    #[arg(long)]
    model: Option<String>,
    /// Presentation JSON file (alternative to --model).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Working field: gfp:<p> or qq.
    #[arg(long, default_value = "gfp:65537")]
    field: String,
    /// Seed for every random coefficient.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// On-disk cache directory (defaults to the platform cache dir).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Disable the on-disk cache.
    #[arg(long, default_value_t = false)]
    no_cache: bool,
}

#[derive(Args)]
struct BettiArgs {
    #[command(flatten)]
    common: CommonModelArgs,
    /// Largest column of the table.
    #[arg(long)]
    pmax: Option<usize>,
    /// Largest row of the table.
    #[arg(long, default_value_t = 3)]
    qmax: usize,
    /// Memory budget for a single elimination.
    #[arg(long, default_value_t = 4096)]
    budget_mb: usize,
    /// Write the table as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which claim to run: thm45, rem46, duality, hyperplane.
    claim: String,
    /// k for the vanishing suite (2, 3, or 4).
    #[arg(long)]
    k: Option<usize>,
    /// Number of consecutive seeds to run.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "gfp:65537")]
    field: String,
    /// Model for the duality and hyperplane claims.
    #[arg(long)]
    model: Option<String>,
    /// Write the report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 4096)]
    budget_mb: usize,
}

#[derive(Args)]
struct BottArgs {
    /// Dimension of the ambient vector space.
    #[arg(long)]
    n: usize,
    /// Quotient block sizes, e.g. 3 or 1,2.
    #[arg(long)]
    quotient: String,
    /// Weight with block separators, e.g. "1,1,0|0,0,0,0".
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

#[derive(Args)]
struct ChernArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    sigma: usize,
    /// Which report: tango or thm44.
    #[arg(long)]
    check: String,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// list or export.
    action: String,
    #[command(flatten)]
    common: CommonModelArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorJson {
    error: String,
}

fn fail(code: u8, message: impl ToString) -> ExitCode {
    let payload = ErrorJson {
        error: message.to_string(),
    };
    eprintln!("{}", serde_json::to_string(&payload).expect("error payload"));
    ExitCode::from(code)
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("KOSZUL_CACHE_DIR") {
        return Some(PathBuf::from(dir));
    }
    if let Ok(dir) = std::env::var("XDG_CACHE_HOME") {
        return Some(PathBuf::from(dir).join("koszul"));
    }
    std::env::var("HOME")
        .ok()
        .map(|h| PathBuf::from(h).join(".cache").join("koszul"))
}

fn resolve_presentation(common: &CommonModelArgs) -> Result<(Presentation, FieldSpec), (u8, String)> {
    let field = FieldSpec::parse(&common.field).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let mut pres = match (&common.model, &common.input) {
        (Some(m), None) => {
            let spec = ModelSpec::parse(m, field, common.seed)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            spec.build().map_err(|e| (EXIT_RESOURCE, e.to_string()))?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let json: ModelJson =
                serde_json::from_str(&text).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            Presentation::from_model_json(&json).map_err(|e| (EXIT_USAGE, e.to_string()))?
        }
        _ => {
            return Err((
                EXIT_USAGE,
                "exactly one of --model or --input is required".to_string(),
            ))
        }
    };
    if !common.no_cache {
        pres.set_cache_dir(common.cache.clone().or_else(default_cache_dir));
    }
    Ok((pres, field))
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), (u8, String)> {
    if let Some(path) = path {
        let pretty =
            serde_json::to_string_pretty(value).map_err(|e| (EXIT_RESOURCE, e.to_string()))?;
        std::fs::write(path, pretty + "\n").map_err(|e| (EXIT_RESOURCE, e.to_string()))?;
    }
    Ok(())
}

fn run_betti(args: &BettiArgs) -> Result<u8, (u8, String)> {
    let (pres, _) = resolve_presentation(&args.common)?;
    let p_max = args.pmax.unwrap_or_else(|| pres.ambient_dim().saturating_sub(1));
    let table = koszul::betti::betti_table(
        &pres,
        &koszul::betti::TableOptions {
            p_max,
            q_max: args.qmax,
            budget_mb: args.budget_mb,
            seed: args.common.seed,
        },
    );
    print!("{}", table.render_text());
    let mut json = table.to_json();
    json["generated_at"] = serde_json::json!(timestamp());
    write_json(&args.json, &json)?;
    Ok(if table.is_complete() {
        EXIT_OK
    } else {
        EXIT_RESOURCE
    })
}

fn run_verify(args: &VerifyArgs) -> Result<u8, (u8, String)> {
    let field = FieldSpec::parse(&args.field).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let seeds: Vec<u64> = (0..args.seeds).map(|i| args.seed + i).collect();
    let report: VerificationReport = match args.claim.as_str() {
        "thm45" => {
            let k = args.k.ok_or((EXIT_USAGE, "thm45 needs --k".to_string()))?;
            verify_theorem45(k, field, &seeds).map_err(|e| (EXIT_USAGE, e.to_string()))?
        }
        "rem46" => verify_remark46(field, &seeds).map_err(|e| (EXIT_USAGE, e.to_string()))?,
        "duality" => {
            let model = args
                .model
                .as_ref()
                .ok_or((EXIT_USAGE, "duality needs --model".to_string()))?;
            let spec = ModelSpec::parse(model, field, args.seed)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let r = spec
                .kind
                .genus()
                .ok_or((EXIT_USAGE, format!("{model} is not a K3 model")))?;
            let (_, table, _) = table_for_model(&spec, r.saturating_sub(2), 2, args.budget_mb)
                .map_err(|e| (EXIT_RESOURCE, e.to_string()))?;
            verify_duality(&table)
        }
        "hyperplane" => {
            let model = args
                .model
                .as_ref()
                .ok_or((EXIT_USAGE, "hyperplane needs --model".to_string()))?;
            let spec = ModelSpec::parse(model, field, args.seed)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            verify_hyperplane_principle(&spec, args.seed)
                .map_err(|e| (EXIT_RESOURCE, e.to_string()))?
        }
        other => return Err((EXIT_USAGE, format!("unknown claim `{other}`"))),
    };
    print!("{}", render_report(&report));
    let mut json = serde_json::to_value(&report).map_err(|e| (EXIT_RESOURCE, e.to_string()))?;
    json["generated_at"] = serde_json::json!(timestamp());
    write_json(&args.json, &json)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_ASSERT })
}

fn run_bott(args: &BottArgs) -> Result<u8, (u8, String)> {
    let blocks: Vec<usize> = args
        .quotient
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let sig = FlagSignature::new(args.n, blocks.clone()).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let (weight, parsed_blocks) =
        BottWeight::parse(&args.weight).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    if parsed_blocks.len() >= 2 {
        let declared: Vec<usize> = parsed_blocks[..parsed_blocks.len() - 1].to_vec();
        if declared != blocks {
            return Err((
                EXIT_USAGE,
                format!("weight blocks {declared:?} disagree with --quotient {blocks:?}"),
            ));
        }
    }
    let result = bott_cohomology(&sig, &weight).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let json = match result {
        BottResult::Zero => serde_json::json!({ "zero": true }),
        BottResult::NonZero {
            degree,
            weight,
            dim,
        } => serde_json::json!({ "degree": degree, "weight": weight, "dim": dim as u64 }),
    };
    println!("{json}");
    Ok(EXIT_OK)
}

fn run_chern(args: &ChernArgs) -> Result<u8, (u8, String)> {
    let report: CheckReport = match args.check.as_str() {
        "tango" => {
            if args.sigma != 0 {
                return Err((
                    EXIT_USAGE,
                    "the rank-k bundle constraints apply to sigma = 0 only".to_string(),
                ));
            }
            verify_tango_constraints(args.k).map_err(|e| (EXIT_USAGE, e.to_string()))?
        }
        "thm44" => verify_theorem44_dims(args.k, args.sigma)
            .map_err(|e| (EXIT_USAGE, e.to_string()))?,
        other => return Err((EXIT_USAGE, format!("unknown check `{other}`"))),
    };
    let mut json = serde_json::to_value(&report).map_err(|e| (EXIT_RESOURCE, e.to_string()))?;
    json["generated_at"] = serde_json::json!(timestamp());
    println!(
        "{}",
        serde_json::to_string_pretty(&json).map_err(|e| (EXIT_RESOURCE, e.to_string()))?
    );
    write_json(&args.json, &json)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_ASSERT })
}

fn run_model(args: &ModelArgs) -> Result<u8, (u8, String)> {
    match args.action.as_str() {
        "list" => {
            for kind in ModelKind::catalog() {
                println!("{:<18} {}", kind.to_string(), kind.describe());
            }
            Ok(EXIT_OK)
        }
        "export" => {
            let (pres, _) = resolve_presentation(&args.common)?;
            let json = serde_json::to_value(pres.to_model_json())
                .map_err(|e| (EXIT_RESOURCE, e.to_string()))?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json).map_err(|e| (EXIT_RESOURCE, e.to_string()))?
            );
            write_json(&args.json, &json)?;
            Ok(EXIT_OK)
        }
        other => Err((EXIT_USAGE, format!("unknown model action `{other}`"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Betti(args) => run_betti(args),
        Command::Verify(args) => run_verify(args),
        Command::Bott(args) => run_bott(args),
        Command::Chern(args) => run_chern(args),
        Command::Model(args) => run_model(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => fail(code, message),
    }
}
