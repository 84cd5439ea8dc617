use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmem_core::phase::{
    coexistence_band, correlation_contours, extract_boundaries, scan_gaussian, scan_mp, scan_subclass, write_csv,
    PolylineDocument,
};
use qmem_core::spec::SearchSettings;
use qmem_core::verify::{self, Fault, VerifyOptions};
use qmem_core::{ChannelSpec, Domain, Error, PhasePoint, ScanGrid, DEFAULT_TIE_TOL};

const EXIT_VERIFY: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_IO: u8 = 3;

const BAND_BINS: usize = 500;

/// Correlated two-qubit Pauli channels: optimal inputs, phase diagrams, self-checks.
#[derive(Parser)]
#[command(name = "qmem", version)]
struct Cli {
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, env = "QMEM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal input state and capacity quantities of one channel.
    Classify {
        /// Channel document: a file path or an inline JSON string.
        #[arg(long)]
        channel: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase classification of every grid node.
    Scan(ScanArgs),
    /// Phase-boundary or correlation-level polylines of a scan.
    Contours {
        #[command(flatten)]
        scan: ScanArgs,
        /// Correlation levels; phase boundaries when omitted.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
    },
    /// Phase scan of the Gaussian rotation model over (p1, sigma).
    Gaussian {
        #[arg(long, default_value = "128x128", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, default_value_t = 2.0)]
        sigma_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Runs the self-check suite and writes a JSON report.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args, Clone)]
struct ScanArgs {
    /// Bundled grid, domain and levels: fig1/fig2 subclass simplex 512², fig3 Gaussian plane 512².
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, value_enum, default_value_t = DomainArg::Subclass)]
    domain: DomainArg,
    /// Grid size as NxM.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Upper sigma for the Gaussian domain.
    #[arg(long, default_value_t = 2.0)]
    sigma_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum DomainArg {
    Subclass,
    Gaussian,
    Mp,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    YSign,
}

enum Failure {
    Verify(String),
    Validation(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verify(_) => EXIT_VERIFY,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalConsistency(_) => Failure::Verify(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn io_failure(what: &str, e: io::Error) -> Failure {
    Failure::Io(format!("{what}: {e}"))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad grid size `{v}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_VALIDATION);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verify(m) | Failure::Validation(m) | Failure::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { channel, out } => classify(&channel, out),
        Command::Scan(args) => scan(&args),
        Command::Contours { scan, levels } => contours(&scan, levels),
        Command::Gaussian { grid, sigma_max, out, format } => {
            let args = ScanArgs {
                preset: None,
                domain: DomainArg::Gaussian,
                grid: Some(grid),
                sigma_max,
                out,
                format: Some(format),
            };
            let points = evaluate(&args)?;
            emit_points(&points, &args)?;
            let flips = points.iter().filter(|p| p.phase == qmem_core::PhaseLabel::Product).count();
            summary(&args.out, &format!("{} points, {flips} product-optimal", points.len()));
            Ok(())
        }
        Command::Verify { seed, out, inject_fault } => {
            let fault = inject_fault.map(|FaultArg::YSign| Fault::FlipYSign);
            let report = verify::run(&VerifyOptions { seed, fault });
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(&out, |w| writeln!(w, "{json}"))?;
            let passed = report.checks.iter().filter(|c| c.pass).count();
            let line = format!("{passed}/{} checks passed", report.checks.len());
            summary(&out, &line);
            if report.all_pass() {
                Ok(())
            } else {
                let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                Err(Failure::Verify(format!("{line}; failed: {}", failed.join(", "))))
            }
        }
    }
}

fn load_channel(arg: &str) -> Result<ChannelSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| io_failure(&format!("reading {arg}"), e))?
    };
    Ok(ChannelSpec::parse(&text)?)
}

fn classify(channel: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    let spec = load_channel(channel)?;
    let report = spec.classify(DEFAULT_TIE_TOL, SearchSettings::default())?;
    let json = serde_json::to_string(&report).expect("report serializes");
    write_output(&out, |w| writeln!(w, "{json}"))
}

fn grid_for(args: &ScanArgs) -> ScanGrid {
    let (domain, default_size) = match args.preset {
        Some(Preset::Fig1 | Preset::Fig2) => (DomainArg::Subclass, (512, 512)),
        Some(Preset::Fig3) => (DomainArg::Gaussian, (512, 512)),
        None => (args.domain, (128, 128)),
    };
    let (nx, ny) = args.grid.unwrap_or(default_size);
    match domain {
        DomainArg::Subclass => ScanGrid::subclass(nx, ny),
        DomainArg::Gaussian => ScanGrid::gaussian(nx, ny, args.sigma_max),
        DomainArg::Mp => ScanGrid::mp_slice(nx, ny),
    }
}

fn evaluate(args: &ScanArgs) -> Result<Vec<PhasePoint>, Failure> {
    let grid = grid_for(args);
    Ok(match grid.domain {
        Domain::SubclassSimplex => scan_subclass(&grid)?,
        Domain::GaussianPlane => scan_gaussian(&grid)?,
        Domain::MpSlice => scan_mp(&grid)?,
    })
}

fn scan(args: &ScanArgs) -> Result<(), Failure> {
    let points = evaluate(args)?;
    emit_points(&points, args)?;
    let mut line = format!("{} points", points.len());
    if let Some(band) = coexistence_band(&points, BAND_BINS)? {
        line.push_str(&format!("; coexistence band [{:.4}, {:.4}]", band.c_low, band.c_high));
    }
    summary(&args.out, &line);
    Ok(())
}

fn emit_points(points: &[PhasePoint], args: &ScanArgs) -> Result<(), Failure> {
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => write_output(&args.out, |w| write_csv(points, w)),
        Format::Json => {
            let json = serde_json::to_string(points).expect("points serialize");
            write_output(&args.out, |w| writeln!(w, "{json}"))
        }
    }
}

fn contours(args: &ScanArgs, levels: Option<Vec<f64>>) -> Result<(), Failure> {
    if args.format == Some(Format::Csv) {
        return Err(Failure::Validation("contours are written as JSON only".into()));
    }
    let levels = levels.or(match args.preset {
        Some(Preset::Fig2) => Some(vec![0.43, 0.5]),
        _ => None,
    });
    let points = evaluate(args)?;
    let documents: Vec<PolylineDocument> = match &levels {
        Some(levels) => correlation_contours(&points, levels)
            .into_iter()
            .map(|(level, polylines)| PolylineDocument { level: Some(level), polylines })
            .collect(),
        None => vec![PolylineDocument { level: None, polylines: extract_boundaries(&points) }],
    };
    let json = serde_json::to_string(&documents).expect("documents serialize");
    write_output(&args.out, |w| writeln!(w, "{json}"))?;
    let total: usize = documents.iter().map(|d| d.polylines.len()).sum();
    summary(&args.out, &format!("{} documents, {total} polylines", documents.len()));
    Ok(())
}

fn write_output(out: &Option<PathBuf>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let what = format!("writing {}", path.display());
            let file = File::create(path).map_err(|e| io_failure(&what, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(&what, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure("writing stdout", e))
        }
    }
}

/// Summary goes to stdout when the payload went to a file, else to stderr.
fn summary(out: &Option<PathBuf>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}
