use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fpsums_core::energy::{
    collinear_quadruples, collinear_triples, d_times, d_times_tilde, energy, energy3, n_count,
    r3_pivot_sum, triples_product_literal, unit_line_incidences, CountResult,
};
use fpsums_core::expsum::{trilinear_s, trilinear_t, trinomial_sum, PairWeights, WeightVec};
use fpsums_core::{ArithOp, FieldCtx, FpSet, Strategy};
use fpsums_harness::{
    config::Config,
    error::{HarnessError, Result},
    family::{FamilySpec, TrinomDescriptor},
    report::{row_from_json_line, write_csv, write_jsonl},
    sweep::{default_plan, plan_from_config, replay, run_plan},
};

#[derive(Parser)]
#[command(
    name = "fpsums",
    about = "Exact counting and exponential sums over prime fields: compute, verify, sweep, replay"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Oracle,
    Fast,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Oracle => Strategy::Oracle,
            StrategyArg::Fast => Strategy::Fast,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Add,
    Sub,
    Mul,
    Div,
}

impl From<OpArg> for ArithOp {
    fn from(o: OpArg) -> ArithOp {
        match o {
            OpArg::Add => ArithOp::Add,
            OpArg::Sub => ArithOp::Sub,
            OpArg::Mul => ArithOp::Mul,
            OpArg::Div => ArithOp::Div,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity on explicit sets and print the exact value.
    Compute {
        /// energy | energy3 | dtimes | dtimes_tilde | ncount |
        /// triples_slope | triples_product | quadruples | r3_pivot |
        /// unit_lines | trilinear_s | trilinear_t | trinomial
        quantity: String,
        #[arg(long)]
        p: u64,
        /// Set descriptor (see the family grammar); for trinomial, a
        /// trinom:a:b:c:k:l:m:j descriptor.
        #[arg(long)]
        set: String,
        #[arg(long)]
        set2: Option<String>,
        #[arg(long)]
        set3: Option<String>,
        #[arg(long, value_enum, default_value = "fast")]
        strategy: StrategyArg,
        /// Operation for the energy quantities.
        #[arg(long, value_enum, default_value = "mul")]
        op: OpArg,
        /// Line coefficients for unit_lines.
        #[arg(long, default_value_t = 1)]
        u: u64,
        #[arg(long, default_value_t = 1)]
        v: u64,
        /// Fixed reduction order (bit-identical reruns).
        #[arg(long, default_value_t = true)]
        deterministic: bool,
    },
    /// Run the exact-law suite and print one outcome line per check.
    Verify {
        #[arg(long, conflicts_with = "default")]
        config: Option<PathBuf>,
        /// Built-in configuration (p in {11,31,101}, 25 trials).
        #[arg(long)]
        default: bool,
    },
    /// Evaluate the ratio report plan and write rows to a file.
    Sweep {
        #[arg(long, conflicts_with = "default")]
        config: Option<PathBuf>,
        /// Built-in plan covering every modeled growth statement.
        #[arg(long)]
        default: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Recompute one JSONL report row from its recorded identity.
    Replay {
        /// A single row as emitted by `sweep --format jsonl`.
        #[arg(long)]
        row: String,
    },
    /// Quick internal consistency pass (small verify run plus anchors).
    Selftest,
}

fn build_set(ctx: &std::sync::Arc<FieldCtx>, text: &str) -> Result<FpSet> {
    FamilySpec::parse(text)?.build(ctx)
}

fn need(set: &Option<String>, flag: &str) -> Result<String> {
    set.clone()
        .ok_or_else(|| HarnessError::Config(format!("this quantity needs {flag}")))
}

fn print_count(quantity: &str, p: u64, r: CountResult) {
    println!(
        "{quantity} p={p} value={} strategy={:?} elapsed_ms={:.3}",
        r.value,
        r.strategy,
        r.elapsed.as_secs_f64() * 1e3
    );
}

#[allow(clippy::too_many_arguments)]
fn compute(
    quantity: &str,
    p: u64,
    set: &str,
    set2: &Option<String>,
    set3: &Option<String>,
    strategy: Strategy,
    op: ArithOp,
    u: u64,
    v: u64,
    deterministic: bool,
) -> Result<()> {
    let ctx = FieldCtx::new(p)?;
    match quantity {
        "energy" | "energy3" | "dtimes" | "dtimes_tilde" | "triples_slope" | "triples_product" => {
            let a = build_set(&ctx, set)?;
            let b = match set2 {
                Some(t) => build_set(&ctx, t)?,
                None => a.clone(),
            };
            let r = match quantity {
                "energy" => energy(&a, &b, op, strategy)?,
                "energy3" => energy3(&a, &b, op, strategy)?,
                "dtimes" => d_times(&a, &b, strategy)?,
                "dtimes_tilde" => d_times_tilde(&a, &b, strategy)?,
                "triples_slope" => collinear_triples(&a, &b, strategy)?,
                _ => triples_product_literal(&a, &b, strategy)?,
            };
            print_count(quantity, p, r);
        }
        "ncount" => {
            let a = build_set(&ctx, set)?;
            let b = build_set(&ctx, &need(set2, "--set2")?)?;
            let c = build_set(&ctx, &need(set3, "--set3")?)?;
            print_count(quantity, p, n_count(&a, &b, &c, strategy)?);
        }
        "quadruples" | "r3_pivot" => {
            let a = build_set(&ctx, set)?;
            let r = if quantity == "quadruples" {
                collinear_quadruples(&a, strategy)?
            } else {
                r3_pivot_sum(&a, strategy)?
            };
            print_count(quantity, p, r);
        }
        "unit_lines" => {
            let a = build_set(&ctx, set)?;
            let b = build_set(&ctx, &need(set2, "--set2")?)?;
            let n = unit_line_incidences(&a, &b, u, v)?;
            println!("unit_lines p={p} u={u} v={v} value={n}");
        }
        "trilinear_s" => {
            let x = WeightVec::ones(build_set(&ctx, set)?);
            let y = WeightVec::ones(build_set(&ctx, &need(set2, "--set2")?)?);
            let z = WeightVec::ones(build_set(&ctx, &need(set3, "--set3")?)?);
            let s = trilinear_s(&x, &y, &z, strategy, deterministic)?;
            println!(
                "trilinear_s p={p} value={} modulus={} strategy={strategy:?}",
                s,
                s.norm()
            );
        }
        "trilinear_t" => {
            let x = build_set(&ctx, set)?;
            let y = build_set(&ctx, &need(set2, "--set2")?)?;
            let z = build_set(&ctx, &need(set3, "--set3")?)?;
            let rho = PairWeights::ones(x.clone(), y.clone())?;
            let sigma = PairWeights::ones(x, z.clone())?;
            let tau = PairWeights::ones(y, z)?;
            let t = trilinear_t(&rho, &sigma, &tau, deterministic)?;
            println!("trilinear_t p={p} value={} modulus={}", t, t.norm());
        }
        "trinomial" => {
            let d = TrinomDescriptor::parse(set)?;
            let s = trinomial_sum(&ctx, &d.to_spec(), deterministic);
            println!(
                "trinomial p={p} spec={set} value={} modulus={}",
                s,
                s.norm()
            );
        }
        other => {
            return Err(HarnessError::Config(format!(
                "unknown compute quantity {other:?}"
            )))
        }
    }
    Ok(())
}

fn load_config(config: &Option<PathBuf>, default: bool) -> Result<Config> {
    match (config, default) {
        (Some(path), false) => Config::load(path),
        (None, true) => Ok(Config::default_verify()),
        _ => Err(HarnessError::Config(
            "pass exactly one of --config FILE or --default".into(),
        )),
    }
}

fn verify(config: &Option<PathBuf>, default: bool) -> Result<()> {
    let cfg = load_config(config, default)?;
    let outcomes = fpsums_harness::run_exact_suite(&cfg)?;
    let mut failed = Vec::new();
    for o in &outcomes {
        println!("{o}");
        if !o.passed() {
            failed.push(o.name.clone());
        }
    }
    if failed.is_empty() {
        println!("verify: all {} checks passed", outcomes.len());
        Ok(())
    } else {
        Err(HarnessError::CheckFailure(failed.join(", ")))
    }
}

fn sweep(config: &Option<PathBuf>, default: bool, out: &Path, format: FormatArg) -> Result<()> {
    let (plan, deterministic) = if default {
        if config.is_some() {
            return Err(HarnessError::Config(
                "pass exactly one of --config FILE or --default".into(),
            ));
        }
        (default_plan(), true)
    } else {
        let cfg = load_config(config, false)?;
        (plan_from_config(&cfg)?, cfg.flags.determinism)
    };
    let rows = run_plan(&plan, deterministic)?;
    match format {
        FormatArg::Csv => write_csv(&rows, out)?,
        FormatArg::Jsonl => write_jsonl(&rows, out)?,
    }
    println!("sweep: wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn selftest() -> Result<()> {
    // Worked instance: p=5, A={1,2}.
    let ctx = FieldCtx::new(5)?;
    let a = FpSet::from_elems(&ctx, [1, 2]);
    let d = d_times(&a, &a, Strategy::Oracle)?.value;
    if d != 152u32.into() {
        return Err(HarnessError::CheckFailure(format!(
            "selftest: d_times({{1,2}}) = {d}, want 152"
        )));
    }
    println!("selftest: worked instance OK (d_times = 152)");

    // Gauss anchor: |sum chi(x) e_5(x)| = sqrt(5).
    let spec = TrinomDescriptor::parse("trinom:1:0:0:1:1:1:1")?.to_spec();
    let g = trinomial_sum(&ctx, &spec, true).norm();
    if (g - 5f64.sqrt()).abs() > 1e-9 {
        return Err(HarnessError::CheckFailure(format!(
            "selftest: Gauss modulus {g}, want sqrt(5)"
        )));
    }
    println!("selftest: Gauss anchor OK (|S| = sqrt(5))");

    // Trimmed exact suite.
    let mut cfg = Config::default_verify();
    cfg.primes = vec![11, 31];
    cfg.trials = 5;
    let outcomes = fpsums_harness::run_exact_suite(&cfg)?;
    for o in &outcomes {
        println!("{o}");
        if !o.passed() {
            return Err(HarnessError::CheckFailure(o.name.clone()));
        }
    }
    println!("selftest: all checks passed");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute {
            quantity,
            p,
            set,
            set2,
            set3,
            strategy,
            op,
            u,
            v,
            deterministic,
        } => compute(
            &quantity,
            p,
            &set,
            &set2,
            &set3,
            strategy.into(),
            op.into(),
            u,
            v,
            deterministic,
        ),
        Command::Verify { config, default } => verify(&config, default),
        Command::Sweep {
            config,
            default,
            out,
            format,
        } => sweep(&config, default, &out, format),
        Command::Replay { row } => {
            let parsed = row_from_json_line(&row)?;
            replay(&parsed)?;
            println!(
                "replay OK: p={} quantity={} value={}",
                parsed.p, parsed.quantity, parsed.value
            );
            Ok(())
        }
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
