use bakerlab::classical::{escape_check, torus_baker_f64};
use bakerlab::rational::{mod_one, parse_rat};
use bakerlab::scan::{scan_theta, summarize, theorem_verdict, theta_grid, DEFAULT_TOL};
use bakerlab::serialize;
use bakerlab::theta::Theta;
use bakerlab::{matrix_f, matrix_vs_comb_check};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "bakerlab",
    version,
    about = "Quantum baker's map on the θ-torus: invariance scans, propagator matrices, classical checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep (N, θ), record invariance residuals, and print the verdict
    Scan(ScanArgs),
    /// Build the N×N propagator matrix (N even) with eigenphases and checks
    Matrix(MatrixArgs),
    /// Classical covering dynamics: orbit dumps and the escape check
    Classical(ClassicalArgs),
    /// Run the acceptance suite and print a one-page summary
    Verify,
}

#[derive(Args)]
struct ScanArgs {
    /// Dimensions to scan: a single value "4" or an inclusive range "1..8"
    #[arg(long, default_value = "1..8")]
    n: String,
    /// Scan every θ with both coordinates of denominator ≤ this
    #[arg(long, default_value_t = 8)]
    theta_denom: i64,
    /// Additional explicit θ points "p/q,p/q" (repeatable); replaces the
    /// grid when --theta-denom is 0
    #[arg(long)]
    theta: Vec<String>,
    /// Invariance tolerance on max(rx, ry)
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (JSON lines or CSV summary); defaults to scan.jsonl / scan.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix dimension; must be even
    #[arg(long)]
    n: u32,
    /// Also report the unitarity deviation and the matrix-vs-comb deviation
    #[arg(long)]
    check: bool,
    /// Directory for matrix_<N>.csv, matrix_<N>.json and eigenphases_<N>.csv
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Iterate the torus baker map from "x,p" (exact rationals in [0,1))
    #[arg(long, conflicts_with = "escape")]
    orbit: Option<String>,
    /// Number of orbit steps
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// Run the momentum-lattice escape check instead of an orbit
    #[arg(long)]
    escape: bool,
    /// Dimension N for the escape check
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// θ₂ for the escape check, "p/q"
    #[arg(long, default_value = "1/2")]
    theta2: String,
    #[arg(long, default_value_t = -4)]
    k_min: i64,
    #[arg(long, default_value_t = 4)]
    k_max: i64,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    // die quietly on closed pipes like any other unix tool
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    match Cli::parse().command {
        Command::Scan(args) => cmd_scan(args),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Classical(args) => cmd_classical(args),
        Command::Verify => cmd_verify(),
    }
    .unwrap_or_else(|e| {
        eprintln!("error: {e}");
        2
    })
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

/// Relative output paths may be redirected with BAKERLAB_OUT_DIR.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("BAKERLAB_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn write_out(path: &Path, contents: &str) -> std::io::Result<PathBuf> {
    let path = resolve_out(path);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn parse_n_spec(spec: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("invalid --n {spec:?}: expected \"4\" or \"1..8\"");
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo < 1 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        let n: u32 = spec.trim().parse().map_err(|_| bad())?;
        if n < 1 {
            return Err(bad());
        }
        Ok(vec![n])
    }
}

fn cmd_scan(args: ScanArgs) -> CmdResult {
    let ns = parse_n_spec(&args.n)?;
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(format!("--tol must lie in (0,1), got {}", args.tol).into());
    }
    let mut thetas = if args.theta_denom > 0 { theta_grid(args.theta_denom) } else { Vec::new() };
    for spec in &args.theta {
        let t = Theta::parse(spec)?;
        if !thetas.contains(&t) {
            thetas.push(t);
        }
    }
    if thetas.is_empty() {
        return Err("no θ points to scan (set --theta-denom or --theta)".into());
    }
    let records = scan_theta(&ns, &thetas, args.tol)?;
    let verdict = theorem_verdict(&records);

    let (default_name, contents) = match args.format {
        Format::Json => {
            let mut text = serialize::scan_records_jsonl(&records);
            text.push_str(&serialize::verdict_json(&verdict).to_string());
            text.push('\n');
            ("scan.jsonl", text)
        }
        Format::Csv => ("scan.csv", serialize::scan_summary_csv(&summarize(&records))),
    };
    let out = args.out.unwrap_or_else(|| PathBuf::from(default_name));
    let written = write_out(&out, &contents)?;

    println!(
        "scanned {} records over {} θ-points × N ∈ {:?}; wrote {}",
        records.len(),
        thetas.len(),
        ns,
        written.display()
    );
    for point in &verdict.invariant_points {
        println!("invariant: N={} θ=({},{})", point.0, point.1, point.2);
    }
    for v in &verdict.violations {
        println!("violation: {v}");
    }
    println!("verdict: {}", if verdict.pass { "PASS" } else { "FAIL" });
    Ok(if verdict.pass { 0 } else { 1 })
}

fn cmd_matrix(args: MatrixArgs) -> CmdResult {
    if args.n < 2 || !args.n.is_multiple_of(2) {
        eprintln!("error: N must be even (the matrix form exists on the periodic fiber only)");
        return Ok(2);
    }
    let m = matrix_f(args.n)?;
    let base = args.out_dir.clone();
    let csv_path = write_out(&base.join(format!("matrix_{}.csv", args.n)), &serialize::matrix_csv(&m))?;
    let json_path = write_out(
        &base.join(format!("matrix_{}.json", args.n)),
        &serialize::matrix_json(&m).to_string(),
    )?;
    let phases = m.eigenphases();
    let eig_path = write_out(
        &base.join(format!("eigenphases_{}.csv", args.n)),
        &serialize::eigenphases_csv(&phases),
    )?;
    println!(
        "wrote {}, {}, {}",
        csv_path.display(),
        json_path.display(),
        eig_path.display()
    );
    if args.check {
        let unitarity = m.unitarity_deviation();
        let report = matrix_vs_comb_check(args.n)?;
        println!("unitarity deviation: {unitarity:.3e}");
        println!(
            "matrix vs comb pipeline: max deviation {:.3e} at fitted global phase {:.3e} rad",
            report.max_dev, report.fitted_phase
        );
    }
    Ok(0)
}

fn cmd_classical(args: ClassicalArgs) -> CmdResult {
    let contents = if args.escape {
        let theta2 = mod_one(parse_rat(&args.theta2)?);
        if args.n < 1 || args.k_min > args.k_max {
            return Err("need N ≥ 1 and k_min ≤ k_max".into());
        }
        let report = escape_check(args.n, theta2, args.k_min, args.k_max);
        let mut v = serde_json::to_value(&report)?;
        v["schema"] = serde_json::Value::String(serialize::SCHEMA.into());
        println!(
            "escape fraction (n=0 family): {} over k ∈ [{}, {}]",
            report.n0_fraction, args.k_min, args.k_max
        );
        format!("{v}\n")
    } else if let Some(start) = &args.orbit {
        let theta_like = Theta::parse(start)?; // reuses the "p/q,p/q" parser and mod-1 reduction
        // orbit plotting runs in float mode: the exact map's p-denominators
        // double every step
        let (mut x, mut p) = (
            bakerlab::rational::rat_to_f64(theta_like.theta1()),
            bakerlab::rational::rat_to_f64(theta_like.theta2()),
        );
        let mut rows = Vec::with_capacity(args.steps);
        for step in 1..=args.steps {
            (x, p) = torus_baker_f64(x, p);
            rows.push((step, x, p));
        }
        serialize::orbit_csv(&rows)
    } else {
        return Err("choose --orbit x,p or --escape".into());
    };
    match &args.out {
        Some(path) => {
            let written = write_out(path, &contents)?;
            println!("wrote {}", written.display());
        }
        None => print!("{contents}"),
    }
    Ok(0)
}

fn cmd_verify() -> CmdResult {
    println!("bakerlab acceptance suite");
    println!("-------------------------");
    let results = bakerlab::acceptance::run_all();
    let mut all_pass = true;
    for r in &results {
        println!("{r}");
        all_pass &= r.pass;
    }
    println!("-------------------------");
    println!(
        "{} of {} criteria passed",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    Ok(if all_pass { 0 } else { 1 })
}
