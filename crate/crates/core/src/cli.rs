//! Command-line front end. [`run`] parses `argv`, dispatches one
//! subcommand and returns the process exit code: 0 on success, 2 for input
//! errors (the diagnostic names the offending field), 3 for numerical
//! failures (the diagnostic starts with the error name).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codec::{helper_pipeline, sw_random_binning, synthesize_channel, Mode};
use crate::entropy::Distribution;
use crate::error::{Error, Result};
use crate::io::{self, ErrorRow, SourceSpec, TvRow};
use crate::optimize::SearchConfig;
use crate::oracles::{grid_search_chelper, grid_search_qubit_povm, GridSpec};
use crate::regions::{
    accessible_information, default_dc_list, default_mu_grid, separation_gap, trace_boundary_chelper,
    trace_boundary_fq, trace_boundary_qhelper, BoundaryCurve, SweepConfig, TestChannel,
};
use crate::tolerance::{set_tolerances, tolerances, Tolerances};

/// Environment variable read when `--seed` is absent.
pub const SEED_ENV: &str = "HELPERRATE_SEED";

/// Restart and weight indices share a 20-bit field of the stream id.
const MAX_INDEX: usize = (1 << 20) - 1;

#[derive(Debug, Parser)]
#[command(name = "helperrate", version, about = "Rate regions for source compression with a helper")]
struct Cli {
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical helper boundary over test channels.
    RegionChelper(RegionArgs),
    /// Quantum helper boundary over POVMs.
    RegionQhelper(RegionArgs),
    /// Fully quantum inner bound over helper isometries.
    RegionFq(FqArgs),
    /// Accessible information of a cq ensemble.
    Accinfo(InfoArgs),
    /// Measure-then-compress rates of the accessible-information POVM.
    Sepgap(InfoArgs),
    /// Exhaustive qubit POVM staircase.
    OracleQhelper(OracleArgs),
    /// Exhaustive test-channel staircase for |Y| <= 3.
    OracleChelper(OracleArgs),
    /// Total variation of the likelihood-encoder channel synthesis.
    SimulateSynthesis(SynthArgs),
    /// Block error of random binning with side information.
    SimulateSw(SwArgs),
    /// Block error of the two-stage helper scheme.
    SimulatePipeline(PipelineArgs),
    /// Type-check a source file, or recompute a witness file's rate pair.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Source JSON file.
    #[arg(long)]
    src: PathBuf,
    /// Seed (falls back to HELPERRATE_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// POVM completeness tolerance.
    #[arg(long)]
    tol_completeness: Option<f64>,
    /// Probability-sum tolerance.
    #[arg(long)]
    tol_probability: Option<f64>,
    /// Commutator norm below which an ensemble commutes.
    #[arg(long)]
    tol_commutator: Option<f64>,
    /// Hermiticity tolerance.
    #[arg(long)]
    tol_hermitian: Option<f64>,
    /// Negative-eigenvalue tolerance for PSD checks.
    #[arg(long)]
    tol_psd: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Restarts per weight.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Objective evaluations per restart.
    #[arg(long, default_value_t = 2000)]
    evaluations: usize,
    /// Comma-separated weights; default is 0, 33 log-spaced in [1e-3, 1e3], 1e6.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    /// Rounds of weights added at hull-edge slopes.
    #[arg(long, default_value_t = 2)]
    refine_rounds: usize,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    common: Common,
    /// Per-weight rows, one witness file each.
    #[arg(long)]
    out: PathBuf,
    /// Optional Pareto staircase over all evaluated candidates, same schema.
    #[arg(long)]
    staircase: Option<PathBuf>,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Debug, Args)]
struct FqArgs {
    #[command(flatten)]
    region: RegionArgs,
    /// Comma-separated helper output dimensions (default 1..=d_B^2).
    #[arg(long, value_delimiter = ',')]
    dc: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct InfoArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: PathBuf,
    /// Projective measurement angle pitch, radians.
    #[arg(long, default_value_t = 1e-3)]
    angle_step: f64,
    /// Simplex pitch for test-channel columns; must divide 1.
    #[arg(long, default_value_t = 0.05)]
    prob_step: f64,
    /// Bloch-angle pitch of the three-outcome scan, radians.
    #[arg(long, default_value_t = std::f64::consts::PI / 18.0)]
    trine_angle_step: f64,
    #[arg(long, default_value_t = 5)]
    trine_levels: usize,
    /// Largest enumeration size.
    #[arg(long, default_value_t = 1e8)]
    cap: f64,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// Test channel in witness format (`type`, `probs`; other keys optional).
    #[arg(long, conflicts_with = "bsc")]
    channel: Option<PathBuf>,
    /// Binary symmetric test channel with this crossover.
    #[arg(long)]
    bsc: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    rate: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

#[derive(Debug, Args)]
struct SwArgs {
    /// Classical source read as the joint of `X` and the side information.
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    r1: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    r1: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    r2: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["src", "witness"])))]
struct ValidateArgs {
    #[arg(long)]
    src: Option<PathBuf>,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let saved = tolerances();
    let result = threaded(cli.threads, move || dispatch(cli.cmd));
    set_tolerances(saved);
    match result {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) if e.is_input() => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            3
        }
    }
}

fn threaded<F>(threads: Option<usize>, f: F) -> Result<String>
where
    F: FnOnce() -> Result<String> + Send,
{
    if threads == Some(0) {
        return Err(Error::input("threads", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::input("threads", e.to_string()))?;
    pool.install(f)
}

fn seed_of(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::input(SEED_ENV, format!("`{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn summary(cmd: &str, points: usize, seed: u64) -> String {
    format!("{cmd} points={points} seed={seed}")
}

impl TolArgs {
    fn apply(&self) -> Result<Tolerances> {
        let mut t = tolerances();
        for (field, v, slot) in [
            ("tol-completeness", self.tol_completeness, &mut t.completeness),
            ("tol-probability", self.tol_probability, &mut t.probability),
            ("tol-commutator", self.tol_commutator, &mut t.commutator),
            ("tol-hermitian", self.tol_hermitian, &mut t.hermitian),
            ("tol-psd", self.tol_psd, &mut t.psd),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0 && v <= 1e-2) {
                    return Err(Error::input(field, format!("{v} is outside (0, 1e-2]")));
                }
                *slot = v;
            }
        }
        set_tolerances(t);
        Ok(t)
    }
}

fn tol_params(t: &Tolerances) -> Vec<(String, String)> {
    vec![
        ("tol_completeness".into(), t.completeness.to_string()),
        ("tol_probability".into(), t.probability.to_string()),
        ("tol_commutator".into(), t.commutator.to_string()),
        ("tol_hermitian".into(), t.hermitian.to_string()),
        ("tol_psd".into(), t.psd.to_string()),
    ]
}

/// Applies tolerances, resolves the seed and loads the source.
fn prepare(c: &Common) -> Result<(SourceSpec, u64, Vec<(String, String)>)> {
    let t = c.tol.apply()?;
    let seed = seed_of(c.seed)?;
    let src = io::read_source(&c.src)?;
    let mut params = vec![
        ("src".into(), c.src.display().to_string()),
        ("seed".into(), seed.to_string()),
    ];
    params.extend(tol_params(&t));
    Ok((src, seed, params))
}

fn check_index(field: &str, v: usize) -> Result<()> {
    if v == 0 || v > MAX_INDEX {
        return Err(Error::input(field, format!("{v} is outside 1..={MAX_INDEX}")));
    }
    Ok(())
}

fn list(v: &[impl ToString]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

impl SweepArgs {
    fn config(&self, seed: u64, params: &mut Vec<(String, String)>) -> Result<SweepConfig> {
        check_index("restarts", self.restarts)?;
        if self.evaluations == 0 {
            return Err(Error::input("evaluations", "must be at least 1"));
        }
        let mu_grid = self.mu.clone().unwrap_or_else(default_mu_grid);
        if mu_grid.len() > MAX_INDEX / 2 {
            return Err(Error::input("mu", "too many weights"));
        }
        if self.refine_rounds > 16 {
            return Err(Error::input("refine-rounds", "must be at most 16"));
        }
        let cfg = SweepConfig {
            mu_grid,
            restarts: self.restarts,
            seed,
            search: SearchConfig {
                evaluations: self.evaluations,
                ..SearchConfig::default()
            },
            refine_rounds: self.refine_rounds,
        };
        params.push(("restarts".into(), cfg.restarts.to_string()));
        params.push(("evaluations".into(), cfg.search.evaluations.to_string()));
        params.push(("refine_rounds".into(), cfg.refine_rounds.to_string()));
        params.push(("mu".into(), list(&cfg.mu_grid)));
        Ok(cfg)
    }
}

fn write_curve(
    cmd: &str,
    args: &RegionArgs,
    curve: &BoundaryCurve,
    src: &SourceSpec,
    params: &[(String, String)],
) -> Result<usize> {
    let header = io::header_line(cmd, params);
    let rows = io::write_curve_csv(&args.out, &header, &curve.samples, src)?;
    if let Some(path) = &args.staircase {
        io::write_curve_csv(path, &header, &curve.points, src)?;
    }
    Ok(rows)
}

fn region(cmd: &str, args: &RegionArgs, dc: Option<&[usize]>) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    let cfg = args.sweep.config(seed, &mut params)?;
    let curve = match cmd {
        "region-chelper" => trace_boundary_chelper(src.classical()?, &cfg)?,
        "region-qhelper" => trace_boundary_qhelper(src.cq()?, &cfg)?,
        _ => {
            let b = src.bipartite()?;
            let dcs = dc.map_or_else(|| default_dc_list(b.dims().1), <[usize]>::to_vec);
            if dcs.is_empty() || dcs.iter().any(|&d| d == 0 || d > 16) {
                return Err(Error::input("dc", "each entry must be in 1..=16"));
            }
            params.push(("dc".into(), list(&dcs)));
            trace_boundary_fq(b, &dcs, &cfg)?
        }
    };
    let rows = write_curve(cmd, args, &curve, &src, &params)?;
    Ok(summary(cmd, rows, seed))
}

fn accinfo(args: &InfoArgs) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    check_index("restarts", args.restarts)?;
    params.push(("restarts".into(), args.restarts.to_string()));
    let (i_acc, povm) = accessible_information(src.cq()?, args.restarts, seed)?;
    println!("I_acc = {i_acc:.6}");
    if let Some(out) = &args.out {
        io::write_table(
            out,
            &io::header_line("accinfo", &params),
            &["i_acc_bits", "outcomes", "seed", "restarts"],
            &[vec![
                i_acc.to_string(),
                povm.len().to_string(),
                seed.to_string(),
                args.restarts.to_string(),
            ]],
        )?;
    }
    Ok(summary("accinfo", 1, seed))
}

fn sepgap(args: &InfoArgs) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    check_index("restarts", args.restarts)?;
    params.push(("restarts".into(), args.restarts.to_string()));
    let g = separation_gap(src.cq()?, args.restarts, seed)?;
    println!(
        "H(U*) = {:.6} I(U*;B) = {:.6} gap = {:.6} I_acc = {:.6}",
        g.h_ustar, g.i_ub_star, g.gap, g.i_acc
    );
    if let Some(out) = &args.out {
        io::write_table(
            out,
            &io::header_line("sepgap", &params),
            &["h_ustar_bits", "i_ub_star_bits", "gap_bits", "i_acc_bits", "seed"],
            &[vec![
                g.h_ustar.to_string(),
                g.i_ub_star.to_string(),
                g.gap.to_string(),
                g.i_acc.to_string(),
                seed.to_string(),
            ]],
        )?;
    }
    Ok(summary("sepgap", 1, seed))
}

fn oracle(cmd: &str, args: &OracleArgs) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    let grid = GridSpec {
        angle_step: args.angle_step,
        prob_step: args.prob_step,
        trine_angle_step: args.trine_angle_step,
        trine_levels: args.trine_levels,
        cap: args.cap,
    };
    for (k, v) in [
        ("angle_step", grid.angle_step.to_string()),
        ("prob_step", grid.prob_step.to_string()),
        ("trine_angle_step", grid.trine_angle_step.to_string()),
        ("trine_levels", grid.trine_levels.to_string()),
        ("cap", grid.cap.to_string()),
    ] {
        params.push((k.into(), v));
    }
    let curve = if cmd == "oracle-qhelper" {
        grid_search_qubit_povm(src.cq()?, &grid)?
    } else {
        grid_search_chelper(src.classical()?, &grid)?
    };
    let header = io::header_line(cmd, &params);
    let rows = io::write_curve_csv(&args.out, &header, &curve.points, &src)?;
    Ok(summary(cmd, rows, seed))
}

fn channel_of(args: &ChannelArgs, ny: usize, params: &mut Vec<(String, String)>) -> Result<TestChannel> {
    let w = match (&args.channel, args.bsc) {
        (Some(path), _) => {
            params.push(("channel".into(), path.display().to_string()));
            io::read_test_channel(path)?
        }
        (None, Some(eps)) => {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::input("bsc", format!("{eps} is outside [0, 1]")));
            }
            params.push(("bsc".into(), eps.to_string()));
            TestChannel::bsc(eps)
        }
        (None, None) => return Err(Error::input("channel", "give --channel or --bsc")),
    };
    if w.ny() != ny {
        return Err(Error::input(
            "channel",
            format!("reads {} letters, source helper has {ny}", w.ny()),
        ));
    }
    Ok(w)
}

fn check_trials(t: usize) -> Result<()> {
    if t == 0 || t > u32::MAX as usize {
        return Err(Error::input("trials", format!("{t} is outside 1..=2^32-1")));
    }
    Ok(())
}

fn simulate_synthesis(args: &SynthArgs) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    let joint = src.classical()?;
    let w = channel_of(&args.channel, joint.ny(), &mut params)?;
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Mc => Mode::MonteCarlo,
    };
    check_trials(args.trials)?;
    let p_y = Distribution::new(joint.y_marginal())?;
    params.push(("mode".into(), io::mode_name(mode).into()));
    params.push(("trials".into(), args.trials.to_string()));
    let mut rows = Vec::new();
    for &n in &args.n {
        for &rate in &args.rate {
            let tv = synthesize_channel(&p_y, &w, n, rate, seed, mode, args.trials)?;
            rows.push(TvRow { n, rate, mode, tv });
        }
    }
    let k = io::write_tv_csv(&args.out, &io::header_line("simulate-synthesis", &params), &rows)?;
    Ok(summary("simulate-synthesis", k, seed))
}

fn simulate_sw(args: &SwArgs) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    let joint = src.classical()?;
    check_trials(args.trials)?;
    params.push(("trials".into(), args.trials.to_string()));
    let mut rows = Vec::new();
    for &n in &args.n {
        for &r1 in &args.r1 {
            let error_rate = sw_random_binning(joint, n, r1, args.trials, seed)?;
            rows.push(ErrorRow {
                n,
                r1,
                r2: None,
                trials: args.trials,
                seed,
                error_rate,
            });
        }
    }
    let k = io::write_error_csv(&args.out, &io::header_line("simulate-sw", &params), &rows)?;
    Ok(summary("simulate-sw", k, seed))
}

fn simulate_pipeline(args: &PipelineArgs) -> Result<String> {
    let (src, seed, mut params) = prepare(&args.common)?;
    let joint = src.classical()?;
    let w = channel_of(&args.channel, joint.ny(), &mut params)?;
    check_trials(args.trials)?;
    params.push(("trials".into(), args.trials.to_string()));
    let mut rows = Vec::new();
    for &n in &args.n {
        for &r1 in &args.r1 {
            for &r2 in &args.r2 {
                let error_rate = helper_pipeline(joint, &w, n, r1, r2, args.trials, seed)?;
                rows.push(ErrorRow {
                    n,
                    r1,
                    r2: Some(r2),
                    trials: args.trials,
                    seed,
                    error_rate,
                });
            }
        }
    }
    let k = io::write_error_csv(&args.out, &io::header_line("simulate-pipeline", &params), &rows)?;
    Ok(summary("simulate-pipeline", k, seed))
}

/// Largest disagreement accepted by `validate --witness`.
pub const WITNESS_TOL: f64 = 1e-9;

fn validate(args: &ValidateArgs) -> Result<String> {
    args.tol.apply()?;
    if let Some(path) = &args.src {
        let src = io::read_source(path)?;
        println!("valid {} source", src.kind());
    }
    let Some(path) = &args.witness else {
        return Ok(summary("validate", 0, 0));
    };
    let w = io::read_witness(path)?;
    let src = w
        .source
        .as_ref()
        .ok_or_else(|| Error::input("source", "missing"))?;
    let r1 = w.r1.ok_or_else(|| Error::input("r1", "missing"))?;
    let r2 = w.r2.ok_or_else(|| Error::input("r2", "missing"))?;
    let (got_r1, got_r2) = io::recompute(src, &w.witness)?;
    let diff = (got_r1 - r1).abs().max((got_r2 - r2).abs());
    if !(diff <= WITNESS_TOL) {
        return Err(Error::RateMismatch {
            r1,
            r2,
            got_r1,
            got_r2,
            diff,
        });
    }
    println!("witness ok: ({got_r1:.9}, {got_r2:.9}), max deviation {diff:.3e}");
    Ok(summary("validate", 1, w.seed.unwrap_or(0)))
}

fn dispatch(cmd: Command) -> Result<String> {
    match &cmd {
        Command::RegionChelper(a) => region("region-chelper", a, None),
        Command::RegionQhelper(a) => region("region-qhelper", a, None),
        Command::RegionFq(a) => region("region-fq", &a.region, a.dc.as_deref()),
        Command::Accinfo(a) => accinfo(a),
        Command::Sepgap(a) => sepgap(a),
        Command::OracleQhelper(a) => oracle("oracle-qhelper", a),
        Command::OracleChelper(a) => oracle("oracle-chelper", a),
        Command::SimulateSynthesis(a) => simulate_synthesis(a),
        Command::SimulateSw(a) => simulate_sw(a),
        Command::SimulatePipeline(a) => simulate_pipeline(a),
        Command::Validate(a) => validate(a),
    }
}

/// Resolves a `witness_file` cell of a curve CSV against the CSV's location.
pub fn witness_path(csv: &Path, cell: &str) -> PathBuf {
    csv.parent().unwrap_or_else(|| Path::new(".")).join(cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(run(["helperrate", "no-such-command"]), 2);
        assert_eq!(run(["helperrate", "region-qhelper"]), 2);
        assert_eq!(run(["helperrate", "validate"]), 2);
    }

    #[test]
    fn help_exits_0() {
        assert_eq!(run(["helperrate", "--help"]), 0);
    }

    #[test]
    fn missing_file_is_input_error() {
        assert_eq!(run(["helperrate", "validate", "--src", "/nonexistent/x.json"]), 2);
    }

    #[test]
    fn tolerance_range_checked() {
        let t = TolArgs {
            tol_completeness: Some(0.5),
            tol_probability: None,
            tol_commutator: None,
            tol_hermitian: None,
            tol_psd: None,
        };
        let saved = tolerances();
        assert!(matches!(t.apply(), Err(Error::Input { field, .. }) if field == "tol-completeness"));
        set_tolerances(saved);
    }

    #[test]
    fn explicit_seed_wins() {
        assert_eq!(seed_of(Some(5)).unwrap(), 5);
    }
}
