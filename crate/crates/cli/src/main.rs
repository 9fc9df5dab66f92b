//! Command-line driver: construction runs, verification, bound sweeps and
//! table emission.
//!
//! Exit codes: 0 on success, 1 when a verification or validation fails,
//! 2 on argument errors. Sweeps evaluate samples in parallel; set
//! `RAYON_NUM_THREADS` to override the thread count.

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use satq::bounds::{self, BoundReport, BoundSelection};
use satq::field::{build_field, prime_power};
use satq::pg3::ProjSpace;
use satq::quadric::EllipticQuadric;
use satq::saturator::{run, verify_2_saturating, GreedyConfig, Strategy, VerifyOutcome};
use satq::setfile::SetFile;
use std::path::PathBuf;
use std::process::ExitCode;

/// Largest q accepted by the construction commands. Above this the full
/// greedy scan stops being a desk-scale computation.
const MAX_CONSTRUCTION_Q: u64 = 128;

/// Largest q for the exhaustive quadric invariant scan (O(q^5) work).
const MAX_QUADRIC_CHECK_Q: u64 = 49;

#[derive(Parser)]
#[command(name = "satq", version, about = "Saturating sets in PG(3,q) and covering-code length bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    /// Full scan, maximum new-coverage candidate.
    GreedyMax,
    /// Seeded random candidate pool.
    Rand,
    /// Fixed order of points, first improving candidate.
    Fop,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::GreedyMax => Strategy::GreedyMax,
            StrategyArg::Rand => Strategy::RandomizedGreedy,
            StrategyArg::Fop => Strategy::Fop,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the deterministic field construction for GF(p^h).
    FieldInfo {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        h: u32,
    },
    /// Build the elliptic quadric and re-check its invariants exhaustively.
    QuadricCheck {
        #[arg(long)]
        q: u64,
    },
    /// Construct a 2-saturating set on the elliptic quadric.
    Saturate {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "greedy-max")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidate pool size for the rand strategy.
        #[arg(long, default_value_t = 50)]
        pool: usize,
        /// Where to write the set file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-check after every step that line coverage adds nothing.
        #[arg(long, default_value_t = false)]
        line_rule_check: bool,
        /// Suppress the per-step trace.
        #[arg(long, default_value_t = false)]
        quiet: bool,
    },
    /// Re-verify a saved set file.
    Verify {
        #[arg(long)]
        set: PathBuf,
    },
    /// Evaluate bounds on a log-spaced q grid and emit CSV.
    BoundsSweep {
        #[arg(long)]
        q_from: u64,
        #[arg(long)]
        q_to: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Comma-separated subset of A,B,C,knw,ratio.
        #[arg(long, default_value = "A,B,C,knw,ratio")]
        bounds: String,
        /// k parameter for Bound C.
        #[arg(long, default_value_t = 20.339)]
        k: f64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the explicit-bound table over the standard k values.
    Table1 {
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solve F(k,q) = 0 for the validity floor of the explicit bound.
    SolveWk {
        #[arg(long)]
        k: f64,
    },
    /// Lift a starting length to codimension r = 3t+1.
    Lift {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q: u128,
        /// Explicit starting length n0 < q.
        #[arg(long)]
        n0: Option<u128>,
        /// Derive n0 from a bound instead: a, e or knw.
        #[arg(long)]
        bound: Option<String>,
    },
    /// Ratio of the known bound to Bound A over a q grid (CSV).
    Compare {
        #[arg(long, default_value_t = 14983)]
        q_from: u64,
        #[arg(long, default_value_t = 5_000_000)]
        q_to: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build the parity-check matrix of a saved set and check d and R.
    CodeCheck {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = false)]
        dump_matrix: bool,
    },
}

enum CliError {
    /// Bad argument values: exit code 2.
    Usage(String),
    /// A check or verification failed: exit code 1.
    Validation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::FieldInfo { p, h } => field_info(p, h),
        Cmd::QuadricCheck { q } => quadric_check(q),
        Cmd::Saturate { q, strategy, seed, pool, out, line_rule_check, quiet } => {
            saturate(q, strategy, seed, pool, out, line_rule_check, quiet)
        }
        Cmd::Verify { set } => verify(set),
        Cmd::BoundsSweep { q_from, q_to, samples, bounds, k, csv } => {
            bounds_sweep(q_from, q_to, samples, &bounds, k, csv)
        }
        Cmd::Table1 { csv } => table1(csv),
        Cmd::SolveWk { k } => solve_wk(k),
        Cmd::Lift { r, q, n0, bound } => lift(r, q, n0, bound),
        Cmd::Compare { q_from, q_to, samples, csv } => {
            bounds_sweep(q_from, q_to, samples, "A,knw,ratio", 20.339, csv)
        }
        Cmd::CodeCheck { set, dump_matrix } => code_check(set, dump_matrix),
    }
}

fn poly_string(modulus: &[u32]) -> String {
    let h = modulus.len();
    let mut terms = vec![format!("x^{h}")];
    for (i, &c) in modulus.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        terms.push(t);
    }
    terms.join(" + ")
}

fn field_info(p: u32, h: u32) -> Result<(), CliError> {
    let f = build_field(p, h).map_err(usage)?;
    println!("GF({}) = GF({}^{})", f.order(), p, h);
    println!(
        "modulus: {}  (coefficients c0..c{}: {})",
        poly_string(f.modulus()),
        h.saturating_sub(1),
        f.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    );
    println!("element encoding: integer 0..{} via base-{} digits", f.order() - 1, p);
    Ok(())
}

fn geometry_for(q: u64) -> Result<(ProjSpace, EllipticQuadric), CliError> {
    let (p, h) =
        prime_power(q).ok_or_else(|| usage(format!("q = {q} is not a prime power in range")))?;
    let field = build_field(p, h).map_err(usage)?;
    let space = ProjSpace::new(field);
    let quadric = EllipticQuadric::build(&space);
    Ok((space, quadric))
}

fn quadric_check(q: u64) -> Result<(), CliError> {
    if q > MAX_QUADRIC_CHECK_Q {
        return Err(usage(format!(
            "quadric-check scans all planes; q <= {MAX_QUADRIC_CHECK_Q} supported"
        )));
    }
    let (space, quadric) = geometry_for(q)?;
    let (b, c) = quadric.form();
    println!("quadric: x0*x1 = x2^2 + {b}*x2*x3 + {c}*x3^2");
    println!("points: {} (expected q^2+1 = {})", quadric.points().len(), q * q + 1);

    let mut tangent = 0u64;
    let mut secant = 0u64;
    for pl in space.planes() {
        match quadric.plane_section(&space, pl).len() {
            1 => tangent += 1,
            s if s == q as usize + 1 => secant += 1,
            0 => return Err(validation(format!("plane {pl:?} is external to the quadric"))),
            s => return Err(validation(format!("plane {pl:?} meets the quadric in {s} points"))),
        }
    }
    println!("tangent planes: {tangent} (expected {})", q * q + 1);
    println!("secant planes:  {secant} (expected {})", q * (q * q + 1));
    if tangent != q * q + 1 || secant != q * (q * q + 1) {
        return Err(validation("plane classification off".to_string()));
    }
    println!("ok");
    Ok(())
}

fn saturate(
    q: u64,
    strategy: StrategyArg,
    seed: u64,
    pool: usize,
    out: Option<PathBuf>,
    line_rule_check: bool,
    quiet: bool,
) -> Result<(), CliError> {
    if q > MAX_CONSTRUCTION_Q {
        return Err(usage(format!("construction supports q <= {MAX_CONSTRUCTION_Q}")));
    }
    let (space, quadric) = geometry_for(q)?;
    let cfg = GreedyConfig {
        strategy: strategy.into(),
        seed,
        pool_size: pool,
        line_rule_check,
    };
    let (set, trace) = run(&space, &quadric, &cfg).map_err(validation)?;

    if !quiet {
        println!("{:>4} {:>10} {:>8} {:>12} {:>14}", "w", "chosen", "delta", "uncovered", "recurrence");
        for s in &trace.steps {
            println!(
                "{:>4} {:>10} {:>8} {:>12} {:>14}",
                s.w, s.chosen.0, s.delta, s.uncovered_after, s.recurrence_cap
            );
        }
        if let Some(p) = trace.augmented {
            println!("augmented with point {} to cover the final residual", p.0);
        }
    }

    match verify_2_saturating(&space, &set) {
        VerifyOutcome::Saturating => {}
        VerifyOutcome::NotSaturating { witness, uncovered } => {
            return Err(validation(format!(
                "constructed set fails verification: {uncovered} uncovered, first {witness:?}"
            )));
        }
    }
    let cap = bounds::bound_a(q).map_err(validation)?;
    println!(
        "n = {} (verified 2-saturating), bound A cap n_A = {}, n/cbrt(q ln q) = {:.4}",
        set.len(),
        cap.n,
        bounds::normalized(set.len() as f64, q as f64),
    );
    if set.len() as u64 > cap.n {
        return Err(validation(format!("set size {} exceeds Bound A {}", set.len(), cap.n)));
    }

    if let Some(path) = out {
        let sf = SetFile::from_construction(&space, &quadric, &set);
        std::fs::write(&path, sf.render())
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn read_set(path: &PathBuf) -> Result<SetFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    SetFile::parse(&text).map_err(validation)
}

fn verify(path: PathBuf) -> Result<(), CliError> {
    let sf = read_set(&path)?;
    let (space, _quadric, set) = sf.resolve().map_err(validation)?;
    match verify_2_saturating(&space, &set) {
        VerifyOutcome::Saturating => {
            println!("ok: {} points, 2-saturating in PG(3,{})", set.len(), space.q());
            Ok(())
        }
        VerifyOutcome::NotSaturating { witness, uncovered } => Err(validation(format!(
            "not 2-saturating: {uncovered} points uncovered, first witness {}",
            witness.0
        ))),
    }
}

fn parse_selection(bounds: &str) -> Result<BoundSelection, CliError> {
    let mut sel = BoundSelection::default();
    for tok in bounds.split(',') {
        match tok.trim().to_ascii_lowercase().as_str() {
            "a" => sel.a = true,
            "b" => sel.b = true,
            "c" => sel.c = true,
            "knw" => sel.knw = true,
            "ratio" => sel.ratio = true,
            "" => {}
            other => return Err(usage(format!("unknown bound '{other}'"))),
        }
    }
    Ok(sel)
}

/// Log-spaced integer grid over `[from, to]`, deduplicated.
fn log_grid(from: u64, to: u64, samples: usize) -> Vec<u64> {
    assert!(from >= 2 && to >= from && samples >= 1);
    if samples == 1 || from == to {
        return vec![from];
    }
    let (lf, lt) = ((from as f64).ln(), (to as f64).ln());
    let mut qs: Vec<u64> = (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            (lf + t * (lt - lf)).exp().round() as u64
        })
        .collect();
    qs[0] = from;
    *qs.last_mut().unwrap() = to;
    qs.sort_unstable();
    qs.dedup();
    qs
}

fn emit(csv: Option<PathBuf>, content: String) -> Result<(), CliError> {
    match csv {
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn bounds_sweep(
    q_from: u64,
    q_to: u64,
    samples: usize,
    bounds_list: &str,
    k: f64,
    csv: Option<PathBuf>,
) -> Result<(), CliError> {
    if q_from < 2 || q_to < q_from {
        return Err(usage("need 2 <= q_from <= q_to".to_string()));
    }
    if samples == 0 {
        return Err(usage("need at least one sample".to_string()));
    }
    let sel = parse_selection(bounds_list)?;
    let grid = log_grid(q_from, q_to, samples);
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&q| BoundReport::compute(q, k, &sel).csv_row())
        .collect();
    let mut content = String::from(BoundReport::CSV_HEADER);
    content.push('\n');
    for row in rows {
        content.push_str(&row);
        content.push('\n');
    }
    emit(csv, content)
}

fn table1(csv: Option<PathBuf>) -> Result<(), CliError> {
    let rows = bounds::table1();
    println!(
        "{:>9} {:>16} {:>9} {:>10} {:>8}",
        "k", "ceil(W(k))", "nC_norm", "nknw_norm", "ratio"
    );
    for r in &rows {
        if r.usable {
            println!(
                "{:>9} {:>16} {:>9.4} {:>10.4} {:>8.4}",
                r.k,
                r.ceil_w,
                r.nc_norm.unwrap(),
                r.nknw_norm.unwrap(),
                r.ratio.unwrap()
            );
        } else {
            println!("{:>9} {:>16}   (root below V = {}, unusable)", r.k, r.ceil_w, bounds::V_THRESHOLD);
        }
    }
    if csv.is_some() {
        let mut content = String::from("k,ceilW,nC_norm,nknw_norm,ratio\n");
        for r in &rows {
            let cell = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
            content.push_str(&format!(
                "{},{},{},{},{}\n",
                r.k,
                r.ceil_w,
                cell(r.nc_norm),
                cell(r.nknw_norm),
                cell(r.ratio)
            ));
        }
        emit(csv, content)?;
    }
    Ok(())
}

fn solve_wk(k: f64) -> Result<(), CliError> {
    let root = bounds::solve_w(k).map_err(usage)?;
    if root.usable {
        println!("ceil(W({k})) = {} (> V = {}, usable)", root.ceil_w, bounds::V_THRESHOLD);
    } else {
        println!(
            "F({k},q) first turns nonnegative at q = {} <= V = {}: bound unusable at this k",
            root.ceil_w,
            bounds::V_THRESHOLD
        );
    }
    Ok(())
}

fn lift(r: u32, q: u128, n0: Option<u128>, bound: Option<String>) -> Result<(), CliError> {
    match (n0, bound) {
        (Some(n0), None) => {
            let n = bounds::lift_length(n0, r, q).map_err(usage)?;
            println!("n = {n}  (n0 = {n0}, r = {r}, q = {q}, Delta = {})", bounds::delta_lift(r, q).map_err(usage)?);
        }
        (None, Some(which)) => match which.to_ascii_lowercase().as_str() {
            "a" => {
                let q64 = u64::try_from(q).map_err(usage)?;
                let a = bounds::bound_a(q64).map_err(usage)?;
                let n = bounds::lift_length(a.n as u128, r, q).map_err(usage)?;
                println!("n = {n}  (n0 = n_A = {}, r = {r}, q = {q})", a.n);
            }
            "e" => {
                let q64 = u64::try_from(q).map_err(usage)?;
                let e = bounds::bound_e(q64).map_err(usage)?;
                let t = (r - 1) / 3;
                let lifted = e.n * (q as f64).powi(t as i32 - 1)
                    + bounds::delta_lift(r, q).map_err(usage)? as f64;
                println!("n <= {lifted:.2}  (n0 = n_E = {:.2}, r = {r}, q = {q})", e.n);
            }
            "knw" => {
                let n = bounds::known_lift(r, q, bounds::lambda_star()).map_err(usage)?;
                println!("n <= {n:.2}  (known bound lifted, r = {r}, q = {q})");
            }
            other => return Err(usage(format!("unknown bound '{other}', expected a, e or knw"))),
        },
        _ => return Err(usage("pass exactly one of --n0 or --bound".to_string())),
    }
    Ok(())
}

fn code_check(path: PathBuf, dump_matrix: bool) -> Result<(), CliError> {
    let sf = read_set(&path)?;
    let (space, _quadric, set) = sf.resolve().map_err(validation)?;
    let code = satq::codes::parity_check_from_set(&space, &set).map_err(validation)?;
    println!("parity-check matrix: 4 x {} over GF({})", code.n(), code.q());
    if dump_matrix {
        print!("{}", code.dump_matrix());
    }

    match code.min_distance(&space) {
        Ok(d) => println!("minimum distance: {d:?}"),
        Err(e) => println!("minimum distance: skipped ({e})"),
    }

    let geometric = verify_2_saturating(&space, &set).is_saturating();
    match code.covering_radius_le3(&space) {
        Ok(le3) => {
            println!("covering radius <= 3: {le3}; geometric 2-saturation: {geometric}");
            if le3 != geometric {
                return Err(validation("covering-radius and geometric checks disagree"));
            }
        }
        Err(e) => {
            println!("covering radius: skipped ({e}); geometric 2-saturation: {geometric}");
        }
    }
    if !geometric {
        return Err(validation("set is not 2-saturating".to_string()));
    }
    println!("ok");
    Ok(())
}
