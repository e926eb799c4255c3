//! Command-line front end for the transitivity and LEO tests.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use lorenz_chaos::density::{empirical_density, voltage_time_series, DensityConfig};
use lorenz_chaos::exec::with_threads;
use lorenz_chaos::io;
use lorenz_chaos::leo::{leo_test, LeoConfig};
use lorenz_chaos::maps::{CnvParams, ExampleMap, IntervalMap, MapSpec, NlCnvParams, PlCnvParams};
use lorenz_chaos::sweep::{diff_map, run_sweep, SweepConfig, SweepGrid, SweepResult, TestKind};
use lorenz_chaos::transitivity::{num_trans_test, TransitivityConfig};
use lorenz_chaos::Execution;

#[derive(Parser)]
#[command(name = "lorenz-chaos", version, about = "Numerical transitivity and LEO tests for Lorenz-type interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Numerical transitivity test of one map; prints true or false.
    TestTrans {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        trans: TransArgs,
    },
    /// Numerical LEO test of one map; prints true or false.
    TestLeo {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        leo: LeoArgs,
        /// Accepted for symmetry with test-trans; the LEO test is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify a grid of parameters and write CSV or PPM.
    Sweep(SweepArgs),
    /// Invariant density histogram of a long orbit as CSV.
    Density {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1_000_000)]
        iters: usize,
        #[arg(long, default_value_t = 1000)]
        transient: usize,
        #[arg(long, default_value_t = 1000)]
        bins: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Voltage time series of a CNV map as CSV.
    Timeseries {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        transient: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cells where a transitivity sweep and a LEO sweep disagree.
    Diff {
        /// Sweep providing the transitivity outcome.
        #[arg(long)]
        in1: PathBuf,
        /// Sweep providing the LEO outcome.
        #[arg(long)]
        in2: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Beta,
    Plcnv,
    Nlcnv,
    LorenzLike,
    Expanding,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlaneArg {
    Triangle,
    Bc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestArg {
    Trans,
    Leo,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Ppm,
}

/// Map selection. CNV maps take their shape from `--m0/--m1/--mu/--a/--d`
/// and either `--b/--c` or `--alpha/--beta`.
#[derive(Args)]
struct MapArgs {
    #[arg(long, value_enum, default_value = "beta")]
    family: Family,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Lower end of the CNV invariant interval.
    #[arg(long)]
    b: Option<f64>,
    /// Upper end of the CNV invariant interval.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long, default_value_t = 0.864)]
    m0: f64,
    #[arg(long, default_value_t = 0.65)]
    m1: f64,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 0.2)]
    a: f64,
    #[arg(long, default_value_t = 0.4)]
    d: f64,
}

#[derive(Args)]
struct TransArgs {
    #[arg(long, default_value_t = 50_000)]
    iters: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 200)]
    transient: usize,
    #[arg(long, default_value_t = 1000)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TransArgs {
    fn config(&self) -> TransitivityConfig {
        TransitivityConfig {
            iterations: self.iters,
            num_trials: self.trials,
            transient: self.transient,
            bins: self.bins,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct LeoArgs {
    #[arg(long, default_value_t = 100)]
    subdivisions: usize,
    /// Cap on image iterations per subinterval.
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

impl LeoArgs {
    fn config(&self) -> LeoConfig {
        LeoConfig { subdivisions: self.subdivisions, max_image_iterations: self.max_iters, ..LeoConfig::default() }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    plane: PlaneArg,
    /// Defaults to `beta` on the triangle; required on the (b, c) plane.
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    mesh: usize,
    #[arg(long, value_enum)]
    test: TestArg,
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    trans: TransArgs,
    #[command(flatten)]
    leo: LeoArgs,
    /// Worker threads; 0 uses all cores, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn shape_for(family: Family, shape: &ShapeArgs) -> Result<CnvParams, Failure> {
    let err = |e: lorenz_chaos::Error| usage(e.to_string());
    match family {
        Family::Plcnv => Ok(PlCnvParams::new(shape.m0, shape.m1, shape.a, shape.d, 0.0, 0.0).map_err(err)?.into()),
        Family::Nlcnv => Ok(NlCnvParams::new(shape.mu, shape.a, shape.d, 0.0, 0.0).map_err(err)?.into()),
        _ => Err(usage("not a CNV family")),
    }
}

fn build_map(args: &MapArgs) -> Result<MapSpec, Failure> {
    let err = |e: lorenz_chaos::Error| usage(e.to_string());
    match args.family {
        Family::Beta => {
            let (Some(beta), Some(alpha)) = (args.beta, args.alpha) else {
                return Err(usage("--family beta needs --beta and --alpha"));
            };
            MapSpec::beta_transformation(beta, alpha).map_err(err)
        }
        Family::Plcnv | Family::Nlcnv => {
            let shape = shape_for(args.family, &args.shape)?;
            let params = match (args.b, args.c, args.alpha, args.beta) {
                (Some(b), Some(c), _, _) => shape.with_endpoints(b, c).map_err(err)?,
                (None, None, Some(alpha), Some(beta)) => match shape {
                    CnvParams::Pl(p) => PlCnvParams { alpha, beta, ..p }.into(),
                    CnvParams::Nl(p) => NlCnvParams { alpha, beta, ..p }.into(),
                },
                _ => return Err(usage("CNV families need --b and --c, or --alpha and --beta")),
            };
            let map = MapSpec::cnv(params).map_err(err)?;
            if !params.check_invariant_conditions(map.domain_lo, map.domain_hi) {
                return Err(usage(format!(
                    "[{}, {}) is not a valid invariant interval for these parameters",
                    map.domain_lo, map.domain_hi
                )));
            }
            Ok(map)
        }
        Family::LorenzLike => Ok(MapSpec::example(ExampleMap::LorenzLike)),
        Family::Expanding => Ok(MapSpec::example(ExampleMap::ExpandingNonlinear)),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_sweep(result: &SweepResult, path: &Path, format: Format) -> Result<(), Failure> {
    match format {
        Format::Csv => write_file(path, io::sweep_to_csv(result).as_bytes()),
        Format::Ppm => write_file(path, &io::sweep_to_ppm(result)),
    }
}

fn read_sweep(path: &Path) -> Result<SweepResult, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let result = io::sweep_from_csv(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(result)
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let grid = match (args.plane, args.family) {
        (PlaneArg::Triangle, None | Some(Family::Beta)) => SweepGrid::triangle(args.mesh, args.trans.seed),
        (PlaneArg::Bc, Some(family @ (Family::Plcnv | Family::Nlcnv))) => {
            SweepGrid::bc(shape_for(family, &args.shape)?, args.mesh, args.trans.seed)
        }
        _ => return Err(usage("use --plane triangle with --family beta, --plane bc with plcnv or nlcnv")),
    };
    let cfg = SweepConfig {
        test: match args.test {
            TestArg::Trans => TestKind::Transitivity,
            TestArg::Leo => TestKind::Leo,
            TestArg::Both => TestKind::Both,
        },
        trans: args.trans.config(),
        leo: args.leo.config(),
        execution: if args.threads == 1 { Execution::Sequential } else { Execution::Parallel },
    };
    grid.validate().map_err(|e| usage(e.to_string()))?;
    let result = with_threads(args.threads, || run_sweep(&grid, &cfg)).map_err(|e| usage(e.to_string()))?;
    if let Some(t) = &result.timing {
        eprintln!("{} cells ({} valid) in {:.2?}", result.cells.len(), result.valid_count(), t.total);
    }
    write_sweep(&result, &args.out, args.format)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::TestTrans { map, trans } => {
            let map = build_map(&map)?;
            let (lo, hi) = map.domain();
            let passed = num_trans_test(&map, lo, hi, &trans.config()).map_err(|e| usage(e.to_string()))?;
            println!("{passed}");
        }
        Command::TestLeo { map, leo, seed: _ } => {
            let map = build_map(&map)?;
            let (lo, hi) = map.domain();
            let passed =
                leo_test(&map, map.discontinuity(), lo, hi, &leo.config()).context("running the LEO test")?;
            println!("{passed}");
        }
        Command::Sweep(args) => sweep(&args)?,
        Command::Density { map, iters, transient, bins, seed, out } => {
            let map = build_map(&map)?;
            let (lo, hi) = map.domain();
            let cfg = DensityConfig { iterations: iters, transient, bins, seed };
            let estimate = empirical_density(&map, lo, hi, &cfg).map_err(|e| usage(e.to_string()))?;
            write_file(&out, io::density_to_csv(&estimate).as_bytes())?;
        }
        Command::Timeseries { map, x0, n, transient, out } => {
            if !matches!(map.family, Family::Plcnv | Family::Nlcnv) {
                return Err(usage("timeseries needs --family plcnv or nlcnv"));
            }
            let map = build_map(&map)?;
            let orbit = voltage_time_series(&map, x0, n, transient).map_err(|e| usage(e.to_string()))?;
            write_file(&out, io::time_series_to_csv(&orbit).as_bytes())?;
        }
        Command::Diff { in1, in2, out, format } => {
            let r1 = read_sweep(&in1)?;
            let r2 = read_sweep(&in2)?;
            let diff = diff_map(&r1, &r2).context("comparing sweeps")?;
            write_sweep(&diff, &out, format)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
