use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use zsnft::io::{read_signal_csv, write_golden};
use zsnft::reference::{sech_analytic_ab, sech_signal, RefinedOracle, SechSpec, Target};
use zsnft::scattering::output_nodes;
use zsnft::{build_grid, evaluate_spectrum, scatter_direct, scatter_fast, Kappa, Method, Pipeline, SampledPotential};
use zsnft_cli::plot::{plot_csv, Axes};
use zsnft_cli::study::{run_convergence, run_errmax, run_tradeoff, write_rows, StudyConfig, StudyError, StudyRow};

#[derive(Parser)]
#[command(name = "zsnft", version, about = "Continuous nonlinear Fourier spectrum of sampled signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error against N for the sech signal
    Convergence(StudyArgs),
    /// Error against median wall time
    Tradeoff(StudyArgs),
    /// Error against Q_max = h max|q| at fixed N
    Errmax(StudyArgs),
    /// Spectrum of one signal
    Compute(ComputeArgs),
    /// Write golden reference files for the sech signal
    Oracle(OracleArgs),
}

fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(|x| x.trim().parse::<T>().map_err(|e| format!("`{x}`: {e}"))).collect()
}

#[derive(Args)]
struct StudyArgs {
    /// Comma-separated methods, or `all`
    #[arg(long, default_value = "all")]
    method: String,
    /// Comma-separated sech amplitudes
    #[arg(long)]
    amplitude: Option<String>,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    kappa: i32,
    #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    t2: f64,
    /// Comma-separated sample counts N = 2 Ns
    #[arg(long)]
    nlist: Option<String>,
    #[arg(long, default_value = "b")]
    target: String,
    /// Output directory for CSV and SVG files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    repeats: Option<usize>,
}

#[derive(Args)]
struct ComputeArgs {
    /// Signal CSV with columns t,re_q,im_q; the builtin sech is used otherwise
    #[arg(long)]
    signal: Option<PathBuf>,
    /// Amplitude of the builtin sech signal
    #[arg(long, default_value_t = 4.4)]
    amplitude: f64,
    #[arg(long, default_value = "ERK34")]
    method: String,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    kappa: i32,
    #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    t2: f64,
    /// Number of steps Ns
    #[arg(long, default_value_t = 512)]
    steps: usize,
    /// `fast` or `direct`; defaults to the method's preferred pipeline
    #[arg(long)]
    pipeline: Option<String>,
    /// Spectrum CSV
    #[arg(long, default_value = "spectrum.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Comma-separated sech amplitudes
    #[arg(long, default_value = "0.8,4.4")]
    amplitude: String,
    /// Comma-separated spectral nodes; 16 points on [-3, 3] by default
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<String>,
    #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    t2: f64,
    /// Base number of steps before refinement
    #[arg(long, default_value_t = 1024)]
    steps: usize,
    #[arg(long, default_value_t = 64)]
    refine: usize,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Run(String),
}

impl From<StudyError> for Failure {
    fn from(e: StudyError) -> Self {
        match e {
            StudyError::Config(m) => Failure::Config(m),
            StudyError::Nft(e) => Failure::Config(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

impl From<zsnft::NftError> for Failure {
    fn from(e: zsnft::NftError) -> Self {
        match e {
            zsnft::NftError::Io(_) => Failure::Run(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

/// `Ok(true)` when every row or node came out clean.
type Outcome = Result<bool, Failure>;

fn parse_methods(s: &str) -> Result<Vec<Method>, Failure> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    list(s).map_err(Failure::Config)
}

fn kappa(k: i32) -> Result<Kappa, Failure> {
    Kappa::try_from(k).map_err(|e| Failure::Config(e.to_string()))
}

fn study_config(a: &StudyArgs, amplitudes: &str, nlist: &str, repeats: usize) -> Result<StudyConfig, Failure> {
    Ok(StudyConfig {
        methods: parse_methods(&a.method)?,
        amplitudes: list(a.amplitude.as_deref().unwrap_or(amplitudes)).map_err(Failure::Config)?,
        kappa: kappa(a.kappa)?,
        t1: a.t1,
        t2: a.t2,
        nlist: list(a.nlist.as_deref().unwrap_or(nlist)).map_err(Failure::Config)?,
        target: a.target.parse::<Target>()?,
        repeats: a.repeats.unwrap_or(repeats),
    })
}

fn print_rows(rows: &[StudyRow]) {
    println!("{:<6} {:>7} {:>6} {:>10} {:>12} {:>10} {:>6}  note", "method", "N", "A", "q_max", "e_rel", "time[s]", "order");
    let f = |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$e}")).unwrap_or_else(|| "-".into());
    for r in rows {
        println!(
            "{:<6} {:>7} {:>6} {:>10.4} {:>12} {:>10} {:>6}  {}",
            r.method.label(),
            r.n,
            r.amplitude,
            r.q_max,
            f(r.e_rel, 3),
            f(r.wall_time, 2),
            r.observed_order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into()),
            r.note.as_deref().unwrap_or("")
        );
    }
}

fn emit(out: &Path, stem: &str, title: &str, axes: Axes, rows: &[StudyRow]) -> Outcome {
    std::fs::create_dir_all(out)?;
    let csv = out.join(format!("{stem}.csv"));
    write_rows(&csv, rows)?;
    // the plot is rebuilt from the file just written
    let svg = out.join(format!("{stem}.svg"));
    plot_csv(&csv, &svg, title, axes)?;
    print_rows(rows);
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(rows.iter().all(StudyRow::is_complete))
}

fn convergence(a: &StudyArgs) -> Outcome {
    let cfg = study_config(a, "4.4", "1024,2048,4096,8192,16384", 1)?;
    let rows = run_convergence(&cfg)?;
    emit(&a.out, "convergence", "Convergence, sech signal", Axes::ErrorVsN, &rows)
}

fn tradeoff(a: &StudyArgs) -> Outcome {
    let cfg = study_config(a, "4.4", "1024,2048,4096,8192,16384", 3)?;
    let rows = run_tradeoff(&cfg)?;
    emit(&a.out, "tradeoff", "Accuracy against run time", Axes::ErrorVsTime, &rows)
}

fn errmax(a: &StudyArgs) -> Outcome {
    let cfg = study_config(a, "0.5,1.5,2.5,4.4,6.4,8.4,10.4,12.4", "1024", 1)?;
    let rows = run_errmax(&cfg)?;
    emit(&a.out, "errmax", "Error against Q_max", Axes::ErrorVsQmax, &rows)
}

fn compute(a: &ComputeArgs) -> Outcome {
    let method: Method = a.method.parse()?;
    let pipeline = match &a.pipeline {
        Some(p) => p.parse()?,
        None => Pipeline::preferred(method),
    };
    if pipeline == Pipeline::Fast && !method.is_polynomial() {
        return Err(Failure::Config(format!("{method} has no fast pipeline; use --pipeline direct")));
    }
    let kappa = kappa(a.kappa)?;
    let grid = build_grid(a.t1, a.t2, a.steps)?;
    let pot = match &a.signal {
        Some(path) => {
            let file = File::open(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            let q = read_signal_csv(file, &grid)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            SampledPotential::from_values(&grid, kappa, &q)?
        }
        None => sech_signal(&SechSpec { amplitude: a.amplitude, kappa }, &grid),
    };
    if pot.boundary_warning() {
        eprintln!("warning: |q| at the window edges is not negligible");
    }
    let start = Instant::now();
    let spectrum = match pipeline {
        Pipeline::Fast => evaluate_spectrum(&scatter_fast(method, &pot, &grid)?, None)?,
        Pipeline::Direct => {
            let zetas: Vec<Complex64> = output_nodes(method, &grid).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
            scatter_direct(method, &pot, &grid, &zetas)?
        }
    };
    let wall = start.elapsed().as_secs_f64();
    spectrum.write_csv(BufWriter::new(File::create(&a.out)?))?;
    println!(
        "N = {}, h = {}, method = {method}, pipeline = {pipeline}, nodes = {}, NaN = {}, time = {wall:.3e} s",
        grid.samples(),
        grid.h(),
        spectrum.len(),
        spectrum.nan_count
    );
    println!("wrote {}", a.out.display());
    Ok(spectrum.nan_count == 0)
}

fn oracle(a: &OracleArgs) -> Outcome {
    let amps: Vec<f64> = list(&a.amplitude).map_err(Failure::Config)?;
    let xi: Vec<f64> = match &a.xi {
        Some(s) => list(s).map_err(Failure::Config)?,
        None => (0..16).map(|k| -3.0 + 6.0 * k as f64 / 15.0).collect(),
    };
    std::fs::create_dir_all(&a.out)?;
    let mut clean = true;
    for amp in amps {
        let sech = SechSpec::new(amp);
        let analytic = sech_analytic_ab(&sech, &xi)?;
        let oracle = RefinedOracle::new(|t| sech.eval(t), Kappa::Focusing, a.t1, a.t2, a.steps, a.refine)?;
        let brute = oracle.spectrum(&xi);
        let scale = analytic.b.iter().map(|b| b.norm()).fold(0.0, f64::max).max(1e-300);
        let dev = (0..xi.len())
            .map(|j| (brute.b[j] - analytic.b[j]).norm().max((brute.a[j] - analytic.a[j]).norm()))
            .fold(0.0, f64::max)
            / scale;
        let ok = dev <= 1e-6;
        clean &= ok;
        let params = format!(
            "A={amp}; kappa=-1; target=b; cross-check=oracle_propagate(T1={}; T2={}; Ns={}; refine={}); max_rel_dev={dev:.3e}",
            a.t1, a.t2, a.steps, a.refine
        );
        let path = a.out.join(format!("sech_b_A{amp}.csv"));
        write_golden(BufWriter::new(File::create(&path)?), "sech_analytic_ab", &params, &xi, &analytic.b)?;
        println!("A = {amp}: max relative deviation {dev:.3e} {}, wrote {}", if ok { "ok" } else { "TOO LARGE" }, path.display());
    }
    Ok(clean)
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("NFT_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Failure::Config(format!("NFT_THREADS = `{v}` is not a count")))?;
        if n == 0 {
            return Err(Failure::Config("NFT_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Run(e.to_string()))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<(), Failure> {
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Convergence(a) => convergence(a),
        Command::Tradeoff(a) => tradeoff(a),
        Command::Errmax(a) => errmax(a),
        Command::Compute(a) => compute(a),
        Command::Oracle(a) => oracle(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("finished with annotated rows");
            ExitCode::from(2)
        }
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
