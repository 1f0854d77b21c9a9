//! `lur` — entanglement tests from local uncertainty relations.
//!
//! Exit codes: 0 = detection succeeded (or the command completed and any
//! certification gap stayed within tolerance), 1 = inconclusive result,
//! 2 = invalid input or a numerical failure. Shell pipelines gate on the
//! verdict directly.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use lur::format::{fmt_sig12, sig12};
use lur::ingest::{self, Sampling};
use lur::relations::{evaluate_with_tolerances, LurReport, LurSpec, Verdict, WernerSweepRow};
use lur::states::State;
use lur::uncertainty::{
    analytic_bound, minimize_sum_uncertainty, BoundKind, MinimizeOptions, Provenance,
};
use lur::{Spin, Tolerances};

#[derive(Parser)]
#[command(
    name = "lur",
    version,
    about = "Detect and quantify entanglement by violating local uncertainty relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a sum-uncertainty bound numerically and compare it with the
    /// analytic registry value.
    Bounds {
        /// Bound kind: spin3, pauli3, pauli2 or spin1_xy.
        kind: String,
        /// Spin quantum number (required for spin3), e.g. 0.5, 1, 1.5, 2.
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        /// Optimizer tolerance; also the acceptance gate on |gap|.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate a relation on a state file and print the verdict.
    CheckState {
        state_file: PathBuf,
        /// Relation: spin3, pauli3, pauli2 or spin1_xy.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        l: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate a relation on measured joint statistics.
    CheckData {
        data_file: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        l: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Tabulate relative violations and concurrence across Werner states.
    WernerSweep {
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Produce the measurement dataset a relation's settings would record.
    Simulate {
        state_file: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        l: Option<f64>,
        /// Draw one multinomial sample of this size per setting.
        #[arg(long, conflicts_with = "exact")]
        shots: Option<u64>,
        /// Emit exact Born probabilities instead of sampling.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Overrides for tolerance/restart defaults, merged below explicit flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    restarts: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    max_iters: Option<usize>,
    judge: Option<f64>,
}

impl ConfigFile {
    fn load(path: &Option<PathBuf>) -> Result<Self, String> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", p.display()))
            }
        }
    }

    fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(j) = self.judge {
            tol.judge = j;
        }
        tol
    }

    fn minimize_options(
        &self,
        restarts: Option<usize>,
        tol: Option<f64>,
        seed: Option<u64>,
        default_tol: f64,
    ) -> MinimizeOptions {
        let defaults = MinimizeOptions::default();
        MinimizeOptions {
            restarts: restarts.or(self.restarts).unwrap_or(defaults.restarts),
            tol: tol.or(self.tol).unwrap_or(default_tol),
            max_iters: self.max_iters.unwrap_or(defaults.max_iters),
            seed: seed.or(self.seed).unwrap_or(defaults.seed),
        }
    }
}

fn parse_kind(kind: &str, l: Option<f64>) -> Result<BoundKind, String> {
    match kind {
        "pauli3" => Ok(BoundKind::Pauli3),
        "pauli2" => Ok(BoundKind::Pauli2),
        "spin1_xy" => Ok(BoundKind::Spin1Xy),
        "spin3" => {
            let l = l.ok_or("spin3 requires --l <half-integer>")?;
            let spin = Spin::try_from_value(l).map_err(|e| e.to_string())?;
            Ok(BoundKind::Spin3(spin))
        }
        other => Err(format!(
            "unknown kind '{other}' (expected spin3, pauli3, pauli2 or spin1_xy)"
        )),
    }
}

fn print_report(report: &LurReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", ingest::report_to_csv(report)),
        Format::Pretty => {
            println!("spec:    {} (bound {})", report.spec, fmt_sig12(report.bound));
            println!("input:   {}", report.input_digest);
            for s in &report.per_setting {
                match s.shots {
                    Some(n) => println!(
                        "  δ({0}(A)+{0}(B))² = {1}   [{2} shots]",
                        s.label,
                        fmt_sig12(s.variance),
                        n
                    ),
                    None => println!("  δ({0}(A)+{0}(B))² = {1}", s.label, fmt_sig12(s.variance)),
                }
            }
            println!("total:   {}", fmt_sig12(report.total));
            println!("margin:  {}", fmt_sig12(report.margin));
            println!("c_lur:   {}", fmt_sig12(report.c_lur));
            let verdict = match report.verdict {
                Verdict::Entangled => "ENTANGLED",
                Verdict::Inconclusive => "INCONCLUSIVE",
            };
            println!("verdict: {verdict}");
        }
    }
}

fn verdict_exit(report: &LurReport) -> ExitCode {
    match report.verdict {
        Verdict::Entangled => ExitCode::SUCCESS,
        Verdict::Inconclusive => ExitCode::from(1),
    }
}

fn run_bounds(
    kind: &str,
    l: Option<f64>,
    restarts: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    format: Format,
    config: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let cfg = ConfigFile::load(config)?;
    let kind = parse_kind(kind, l)?;
    let opts = cfg.minimize_options(restarts, tol, seed, 1e-6);

    let analytic = analytic_bound(kind);
    let obs = kind.observable_set();
    let numeric = minimize_sum_uncertainty(&obs, &opts).map_err(|e| e.to_string())?;
    let gap = numeric.value - analytic.value;

    let achiever: Vec<[f64; 2]> = match &numeric.provenance {
        Provenance::Numeric { best_state, .. } => best_state
            .amplitudes()
            .iter()
            .map(|z| [sig12(z.re), sig12(z.im)])
            .collect(),
        Provenance::Analytic => Vec::new(),
    };

    match format {
        Format::Json | Format::Csv => {
            let doc = json!({
                "kind": analytic.observable_set_label,
                "analytic": sig12(analytic.value),
                "numeric": sig12(numeric.value),
                "gap": sig12(gap),
                "restarts": opts.restarts,
                "tol": opts.tol,
                "seed": opts.seed,
                "achiever": achiever,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        Format::Pretty => {
            println!("bound:    {}", analytic.observable_set_label);
            println!("analytic: {}", fmt_sig12(analytic.value));
            println!("numeric:  {}", fmt_sig12(numeric.value));
            println!("gap:      {}", fmt_sig12(gap));
            println!(
                "restarts: {}   tol: {}   seed: {}",
                opts.restarts, opts.tol, opts.seed
            );
            let rendered: Vec<String> = achiever
                .iter()
                .map(|[re, im]| format!("{} {:+}i", fmt_sig12(*re), sig12(*im)))
                .collect();
            println!("achiever: [{}]", rendered.join(", "));
        }
    }

    Ok(if gap.abs() <= opts.tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_spec(spec: &str, l: Option<f64>) -> Result<LurSpec, String> {
    Ok(LurSpec::builtin(parse_kind(spec, l)?))
}

fn run_check_state(
    state_file: &PathBuf,
    spec: &str,
    l: Option<f64>,
    format: Format,
    config: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let cfg = ConfigFile::load(config)?;
    let spec = load_spec(spec, l)?;
    let text = fs::read_to_string(state_file)
        .map_err(|e| format!("cannot read {}: {e}", state_file.display()))?;
    let state = State::from_json(&text).map_err(|e| e.to_string())?;
    let report = evaluate_with_tolerances(&state.to_density(), &spec, &cfg.tolerances())
        .map_err(|e| e.to_string())?;
    print_report(&report, format);
    Ok(verdict_exit(&report))
}

fn run_check_data(
    data_file: &PathBuf,
    spec: &str,
    l: Option<f64>,
    format: Format,
    config: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let cfg = ConfigFile::load(config)?;
    let spec = load_spec(spec, l)?;
    let text = fs::read_to_string(data_file)
        .map_err(|e| format!("cannot read {}: {e}", data_file.display()))?;
    let ds = ingest::parse(&text).map_err(|e| e.to_string())?;
    let report = ingest::evaluate_from_data_with_tolerances(&ds, &spec, &cfg.tolerances())
        .map_err(|e| e.to_string())?;
    print_report(&report, format);
    Ok(verdict_exit(&report))
}

fn run_werner_sweep(from: f64, to: f64, steps: usize, format: Format) -> Result<ExitCode, String> {
    if steps < 2 || !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from > to {
        return Err(format!(
            "invalid grid: from={from}, to={to}, steps={steps} (need 0 <= from <= to <= 1, steps >= 2)"
        ));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        .collect();
    let rows = lur::werner_sweep(&grid).map_err(|e| e.to_string())?;

    match format {
        Format::Csv | Format::Pretty => {
            println!("p_s,c_lur_pauli3,c_lur_pauli2,concurrence");
            for r in &rows {
                println!(
                    "{},{},{},{}",
                    fmt_sig12(r.p_s),
                    fmt_sig12(r.c_lur_pauli3),
                    fmt_sig12(r.c_lur_pauli2),
                    fmt_sig12(r.concurrence)
                );
            }
        }
        Format::Json => {
            let rounded: Vec<WernerSweepRow> = rows
                .iter()
                .map(|r| WernerSweepRow {
                    p_s: sig12(r.p_s),
                    c_lur_pauli3: sig12(r.c_lur_pauli3),
                    c_lur_pauli2: sig12(r.c_lur_pauli2),
                    concurrence: sig12(r.concurrence),
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rounded).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    state_file: &PathBuf,
    spec: &str,
    l: Option<f64>,
    shots: Option<u64>,
    exact: bool,
    seed: Option<u64>,
    output: &Option<PathBuf>,
    config: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let cfg = ConfigFile::load(config)?;
    let spec = load_spec(spec, l)?;
    let sampling = match (shots, exact) {
        (Some(n), false) => Sampling::Shots(n),
        (None, _) => Sampling::Exact,
        (Some(_), true) => unreachable!("clap rejects --shots with --exact"),
    };
    let text = fs::read_to_string(state_file)
        .map_err(|e| format!("cannot read {}: {e}", state_file.display()))?;
    let state = State::from_json(&text).map_err(|e| e.to_string())?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let ds = ingest::simulate(&state.to_density(), &spec, sampling, seed)
        .map_err(|e| e.to_string())?;
    let rendered = ds.to_json();
    match output {
        Some(path) => fs::write(path, rendered + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => println!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds {
            kind,
            l,
            restarts,
            tol,
            seed,
            format,
            config,
        } => run_bounds(kind, *l, *restarts, *tol, *seed, *format, config),
        Command::CheckState {
            state_file,
            spec,
            l,
            format,
            config,
        } => run_check_state(state_file, spec, *l, *format, config),
        Command::CheckData {
            data_file,
            spec,
            l,
            format,
            config,
        } => run_check_data(data_file, spec, *l, *format, config),
        Command::WernerSweep {
            from,
            to,
            steps,
            format,
        } => run_werner_sweep(*from, *to, *steps, *format),
        Command::Simulate {
            state_file,
            spec,
            l,
            shots,
            exact,
            seed,
            output,
            config,
        } => run_simulate(state_file, spec, *l, *shots, *exact, *seed, output, config),
    };

    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
