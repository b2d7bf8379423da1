//! Command-line front end: single-point reports, SNR sweeps, DM-engine runs.

use clap::{Args, Parser, Subcommand, ValueEnum};
use relay_bounds::dm::{
    dm_search, is_degraded, BestFactorization, DiscreteChannelSpec, SearchConfig, SearchMode,
};
use relay_bounds::gaussian::ChannelParams;
use relay_bounds::optim::GridSpec;
use relay_bounds::sweep::{
    compute_report, db_to_linear, report_text, run_sweep, to_csv, to_svg, BoundKind, SweepAxis,
    SweepSpec,
};
use relay_bounds::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "relay-bounds",
    version,
    about = "Capacity bounds for relay channels with interference known at the relay"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report all bounds at one channel configuration
    Bounds(BoundsArgs),
    /// Sweep an axis and emit CSV/SVG rate curves
    Sweep(SweepArgs),
    /// Search discrete-channel bounds from a JSON spec file
    Dm(DmArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Source power P1 (linear)
    #[arg(long, conflicts_with = "p1_db")]
    p1: Option<f64>,
    /// Source power P1 (dB)
    #[arg(long)]
    p1_db: Option<f64>,
    /// Relay power P2 (linear)
    #[arg(long, conflicts_with = "p2_db")]
    p2: Option<f64>,
    /// Relay power P2 (dB)
    #[arg(long)]
    p2_db: Option<f64>,
    /// Interference variance Q (linear)
    #[arg(long, conflicts_with = "q_db")]
    q: Option<f64>,
    /// Interference variance Q (dB)
    #[arg(long)]
    q_db: Option<f64>,
    /// Relay noise variance N2 (linear)
    #[arg(long, conflicts_with = "n2_db")]
    n2: Option<f64>,
    /// Relay noise variance N2 (dB)
    #[arg(long)]
    n2_db: Option<f64>,
    /// Destination noise variance N3 (linear)
    #[arg(long, conflicts_with = "n3_db")]
    n3: Option<f64>,
    /// Destination noise variance N3 (dB)
    #[arg(long)]
    n3_db: Option<f64>,
    /// Physically degraded model (pass `--degraded false` for the general one)
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    degraded: bool,
}

impl ParamArgs {
    /// All constants default to 10 dB, the reference configuration.
    fn channel(&self) -> Result<ChannelParams, Error> {
        let pick = |lin: Option<f64>, db: Option<f64>| match (lin, db) {
            (Some(v), _) => v,
            (None, Some(d)) => db_to_linear(d),
            (None, None) => 10.0,
        };
        ChannelParams::new(
            pick(self.p1, self.p1_db),
            pick(self.p2, self.p2_db),
            pick(self.q, self.q_db),
            pick(self.n2, self.n2_db),
            pick(self.n3, self.n3_db),
            self.degraded,
        )
    }
}

#[derive(Args)]
struct GridArgs {
    /// Grid points per axis
    #[arg(long, default_value_t = 101)]
    grid_points: usize,
    /// Local refinement rounds
    #[arg(long, default_value_t = 3)]
    refine: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<GridSpec, Error> {
        GridSpec::new(self.grid_points, self.refine, 0.1)
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
    Both,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Axis to vary: snr (= P1/N2, varies N2), p1, p2, q, n2, n3
    #[arg(long, default_value = "snr")]
    axis: String,
    /// Axis range start (dB)
    #[arg(long, default_value_t = -10.0)]
    from_db: f64,
    /// Axis range end (dB)
    #[arg(long, default_value_t = 30.0)]
    to_db: f64,
    /// Number of sweep points
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Bounds to compute (comma separated):
    /// lower,upper,upper_equiv,trivial_lower,trivial_upper
    #[arg(long, value_delimiter = ',')]
    bounds: Option<Vec<String>>,
    /// Output path stem; `.csv`/`.svg` are appended per format
    #[arg(long, default_value = "sweep")]
    out: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Accepted for reproducible invocations; the Gaussian sweep itself is
    /// deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lower,
    Upper,
    Trivial,
}

#[derive(Args)]
struct DmArgs {
    /// Path to the channel spec JSON document
    spec: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Lower)]
    mode: ModeArg,
    /// Random restarts of the factor search
    #[arg(long, default_value_t = 20)]
    budget: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Auxiliary alphabet size |U1| (lower mode)
    #[arg(long, default_value_t = 2)]
    aux_u1: usize,
    /// Auxiliary alphabet size |U2| (lower mode)
    #[arg(long, default_value_t = 2)]
    aux_u2: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Dm(args) => cmd_dm(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), Error> {
    let ch = args.params.channel()?;
    let grid = args.grid.grid()?;
    let report = compute_report(&ch, &grid)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report_text(&report));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Error> {
    let base = args.params.channel()?;
    let axis: SweepAxis = args.axis.parse()?;
    let bounds = match &args.bounds {
        None => BoundKind::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| n.parse())
            .collect::<Result<Vec<BoundKind>, Error>>()?,
    };
    let spec = SweepSpec {
        base,
        axis,
        lo_db: args.from_db,
        hi_db: args.to_db,
        points: args.points,
        bounds,
        seed: args.seed,
    };
    let table = run_sweep(&spec, &args.grid.grid()?)?;

    let stem = args
        .out
        .trim_end_matches(".csv")
        .trim_end_matches(".svg")
        .to_string();
    if matches!(args.format, FormatArg::Csv | FormatArg::Both) {
        let path = format!("{stem}.csv");
        std::fs::write(&path, to_csv(&table))?;
        println!("wrote {path}");
    }
    if matches!(args.format, FormatArg::Svg | FormatArg::Both) {
        let path = format!("{stem}.svg");
        std::fs::write(&path, to_svg(&table))?;
        println!("wrote {path}");
    }
    Ok(())
}

fn cmd_dm(args: DmArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.spec)?;
    let spec = DiscreteChannelSpec::from_json(&text)?;
    let mode = match args.mode {
        ModeArg::Lower => SearchMode::Lower,
        ModeArg::Upper => SearchMode::Upper,
        ModeArg::Trivial => SearchMode::TrivialUpper,
    };
    let config = SearchConfig {
        mode,
        restarts: args.budget,
        aux_u1: args.aux_u1,
        aux_u2: args.aux_u2,
        seed: args.seed,
    };
    let outcome = dm_search(&spec, &config)?;

    println!(
        "bound: {:.6} bits/use (raw {:.6})",
        outcome.rate, outcome.raw_rate
    );
    println!(
        "search: {} restarts, {} evaluations, seed {}",
        outcome.restarts, outcome.evaluations, args.seed
    );
    println!("physically degraded kernel: {}", is_degraded(&spec));
    println!("best factorization:");
    print!("{}", describe_factorization(&spec, &outcome.factorization));
    Ok(())
}

fn describe_factorization(spec: &DiscreteChannelSpec, best: &BestFactorization) -> String {
    let fmt_rows = |name: &str, data: &[f64], width: usize| -> String {
        data.chunks(width)
            .enumerate()
            .map(|(i, row)| {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
                format!("  {name}[{i}] = [{}]\n", cells.join(", "))
            })
            .collect()
    };
    let n = &spec.sizes;
    match best {
        BestFactorization::Lower(f) => {
            let mut out = fmt_rows("P(u1)", &f.p_u1, f.u1);
            out += &fmt_rows("P(x1|u1)", &f.p_x1_given_u1, n.x1);
            out += &fmt_rows("P(u2|u1,s)", &f.p_u2_given_u1_s, f.u2);
            out += &fmt_rows("P(x2|u1,u2,s)", &f.p_x2_given_u1_u2_s, n.x2);
            out
        }
        BestFactorization::Upper(f) => {
            let mut out = match &f.x1 {
                relay_bounds::dm::SourceDist::Unconditional(p) => fmt_rows("P(x1)", p, n.x1),
                relay_bounds::dm::SourceDist::PerState(p) => fmt_rows("P(x1|s)", p, n.x1),
            };
            out += &fmt_rows("P(x2|x1,s)", &f.p_x2_given_x1_s, n.x2);
            out
        }
    }
}
