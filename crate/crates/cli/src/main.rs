use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamesolve::analysis::{
    directional_period, figure_grid_with_axes, lattice_outcome, render_ascii, render_pbm,
    translation_period_check, Axes, LatticeDirection, ProbeConfig, TripleWindow,
};
use gamesolve::sweep::par_map;
use gamesolve::theorems::{run, SweepOptions, TheoremId};
use gamesolve::{Family, MemoTable, PlayConvention, Position, RuleSet};
use serde::Serialize;

const THEOREM_HELP: &str = "Theorem ids:
  thm1             Nim nimbers are the XOR of the heaps
  cor2             Nim P-positions are exactly XOR zero
  thm3             misere Nim outcome rule
  thm4             k-Slow Nim nimbers are XOR of heaps mod (k+1)
  thm5             misere k-Slow Nim outcome rule
  thm6-grundy      extended games keep the non-extended nimbers
  thm6-pset        extended games keep the non-extended P-positions
  thm7             Monotonic (Slow) Nim reduces to the difference position
  lemma8           2-Diet Chomp normal play: P iff total = 0 mod 3
  lemma9           2-Diet Chomp misere on one or two columns
  bulk-conjecture  3-column misere 2-Diet Chomp bulk rule away from the margins
  all              every id above at its default bounds";

/// Solvers and closed-form checks for Nim variants and Diet Chomp.
#[derive(Parser, Debug)]
#[command(name = "gamesolve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a single position.
    Outcome(OutcomeArgs),
    /// Check a closed form against the solver over a bounded domain.
    #[command(after_help = THEOREM_HELP)]
    Verify(VerifyArgs),
    /// Write P-position rasters of 3-column Diet Chomp, one per a1 value.
    Figure(FigureArgs),
    /// Detect eventual periods along a lattice direction, or check a translation period.
    Period(PeriodArgs),
    /// Solve every position listed in a file, one per line.
    Batch(BatchArgs),
}

#[derive(Args, Debug, Clone)]
struct GameArgs {
    /// Game family: nim, slow-nim, extended-nim, extended-slow-nim,
    /// monotonic-nim, monotonic-slow-nim or diet-chomp.
    #[arg(long)]
    game: Option<Family>,
    /// Move limit k for slow and diet variants.
    #[arg(long)]
    k: Option<u32>,
    /// Largest addition for extended-nim.
    #[arg(long)]
    add_limit: Option<u32>,
    /// normal or misere.
    #[arg(long)]
    convention: Option<PlayConvention>,
}

impl GameArgs {
    fn resolve(
        &self,
        default_game: Family,
        default_convention: PlayConvention,
    ) -> gamesolve::Result<(RuleSet, PlayConvention)> {
        let family = self.game.unwrap_or(default_game);
        let k = match (self.k, family) {
            (None, Family::DietChomp) => Some(2),
            (k, _) => k,
        };
        let rules = RuleSet::new(family, k, self.add_limit)?;
        Ok((rules, self.convention.unwrap_or(default_convention)))
    }
}

#[derive(Args, Debug)]
struct OutcomeArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Comma-separated entries, e.g. 1,2,3 (empty or 0 for the terminal position).
    #[arg(long, allow_hyphen_values = true)]
    position: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Theorem id (see below), or `all`.
    #[arg(long)]
    theorem: String,
    /// Largest number of heaps, piles or columns.
    #[arg(long, visible_aliases = ["max-piles", "max-cols"])]
    max_heaps: Option<usize>,
    /// Largest heap size or column height.
    #[arg(long, visible_aliases = ["max-entry"])]
    max_height: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    add_limit: Option<u32>,
    #[arg(long)]
    convention: Option<PlayConvention>,
    /// Worker threads; GAMESOLVE_THREADS takes precedence.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Pbm,
    Ascii,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AxesArg {
    Differences,
    Absolute,
}

#[derive(Args, Debug)]
struct FigureArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Single value `N` or inclusive range `N..M`.
    #[arg(long, value_parser = parse_range)]
    a1: RangeInclusive<u32>,
    #[arg(long, default_value_t = 30)]
    width: usize,
    #[arg(long, default_value_t = 30)]
    height: usize,
    #[arg(long, value_enum, default_value_t = Format::Pbm)]
    format: Format,
    /// Output directory. ASCII goes to stdout unless this is given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AxesArg::Differences)]
    axes: AxesArg,
}

#[derive(Args, Debug)]
struct PeriodArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Lattice direction, e.g. 0,0,1.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "translation"
    )]
    direction: Option<Vec<i64>>,
    /// Starting point of the probe.
    #[arg(long, value_delimiter = ',', default_value = "0,0,0")]
    base: Vec<u32>,
    #[arg(long, default_value_t = 60)]
    probe: usize,
    #[arg(long, default_value_t = 16)]
    max_period: usize,
    #[arg(long, default_value_t = 24)]
    max_preperiod: usize,
    /// Check that every point of the window repeats after this shift along (1,1,1).
    #[arg(long, conflicts_with = "direction")]
    translation: Option<u32>,
    #[arg(long, default_value_t = 12)]
    max_a1: u32,
    #[arg(long, default_value_t = 20)]
    max_extent: u32,
}

#[derive(Args, Debug)]
struct BatchArgs {
    #[command(flatten)]
    game: GameArgs,
    /// File with one position per line; blank lines and `#` lines are skipped.
    #[arg(long)]
    input: PathBuf,
    /// Worker threads; GAMESOLVE_THREADS takes precedence.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad a1 value {t:?}: {e}"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok(lo..=hi)
        }
        None => num(s).map(|v| v..=v),
    }
}

/// Thread count with the environment override applied.
fn threads(flag: usize) -> Result<usize, Failure> {
    match std::env::var("GAMESOLVE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Usage(format!(
                "GAMESOLVE_THREADS must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) if flag == 0 => Err(Failure::Usage("--threads must be at least 1".into())),
        Err(_) => Ok(flag),
    }
}

enum Failure {
    /// Exit 1: the run completed but found counterexamples or bad lines.
    Found,
    /// Exit 2: bad arguments or an I/O problem.
    Usage(String),
}

impl From<gamesolve::Error> for Failure {
    fn from(e: gamesolve::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Serialize)]
struct OutcomeLine {
    position: Position,
    outcome: gamesolve::Outcome,
    grundy: Option<u32>,
}

fn solve(
    memo: &mut MemoTable,
    rules: RuleSet,
    conv: PlayConvention,
    p: Position,
) -> gamesolve::Result<OutcomeLine> {
    let outcome = memo.outcome(rules, conv, &p)?;
    let grundy = match conv {
        PlayConvention::Normal => Some(memo.grundy(rules, &p)?.0),
        PlayConvention::Misere => None,
    };
    Ok(OutcomeLine {
        position: p,
        outcome,
        grundy,
    })
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

fn cmd_outcome(args: OutcomeArgs) -> Result<(), Failure> {
    let (rules, conv) = args.game.resolve(Family::Nim, PlayConvention::Normal)?;
    let p = Position::parse(&args.position, rules.family())?;
    let line = solve(&mut MemoTable::new(), rules, conv, p)?;
    emit(&mut io::stdout().lock(), &line)?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let ids: Vec<TheoremId> = if args.theorem == "all" {
        TheoremId::ALL.to_vec()
    } else {
        vec![args.theorem.parse()?]
    };
    let threads = threads(args.threads)?;
    let mut out = io::stdout().lock();
    let mut clean = true;
    for id in ids {
        let mut opts = SweepOptions::defaults(id);
        if let Some(n) = args.max_heaps {
            opts.max_piles = n;
        }
        if let Some(h) = args.max_height {
            opts.max_entry = h;
        }
        opts.k = args.k;
        opts.add_limit = args.add_limit;
        opts.convention = args.convention;
        opts.threads = threads;
        for report in run(id, &opts)? {
            clean &= report.passed();
            emit(&mut out, &report)?;
        }
    }
    if clean {
        Ok(())
    } else {
        Err(Failure::Found)
    }
}

fn cmd_figure(args: FigureArgs) -> Result<(), Failure> {
    let (rules, conv) = args
        .game
        .resolve(Family::DietChomp, PlayConvention::Misere)?;
    if rules.family().is_loopy() {
        return Err(gamesolve::Error::LoopyFamily(rules.family()).into());
    }
    let axes = match args.axes {
        AxesArg::Differences => Axes::Differences,
        AxesArg::Absolute => Axes::Absolute,
    };
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut memo = MemoTable::new();
    let mut stdout = io::stdout().lock();
    for a1 in args.a1.clone() {
        let grid =
            figure_grid_with_axes(&mut memo, rules, conv, a1, args.width, args.height, axes)?;
        let (bytes, ext) = match args.format {
            Format::Pbm => (render_pbm(&grid), "pbm"),
            Format::Ascii => (render_ascii(&grid).into_bytes(), "txt"),
        };
        let dir = match (&args.out, args.format) {
            (None, Format::Ascii) => {
                stdout.write_all(&bytes)?;
                continue;
            }
            (Some(dir), _) => dir.clone(),
            (None, Format::Pbm) => PathBuf::from("."),
        };
        let path = dir.join(format!("fig-a1-{a1}.{ext}"));
        fs::write(&path, &bytes)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        writeln!(stdout, "{}", path.display())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TranslationLine {
    period: u32,
    window: TripleWindow,
    #[serde(flatten)]
    report: gamesolve::VerificationReport,
}

fn cmd_period(args: PeriodArgs) -> Result<(), Failure> {
    let (rules, conv) = args
        .game
        .resolve(Family::DietChomp, PlayConvention::Misere)?;
    let mut memo = MemoTable::new();
    let mut out = io::stdout().lock();
    if let Some(period) = args.translation {
        if period == 0 {
            return Err(Failure::Usage("--translation must be at least 1".into()));
        }
        let window = TripleWindow {
            max_a1: args.max_a1,
            max_extent: args.max_extent,
        };
        let report = translation_period_check(&mut memo, rules, conv, window.points(), period)?;
        let passed = report.passed();
        emit(
            &mut out,
            &TranslationLine {
                period,
                window,
                report,
            },
        )?;
        return if passed { Ok(()) } else { Err(Failure::Found) };
    }
    let direction = LatticeDirection::new(args.direction.unwrap_or_default())?;
    let probe = ProbeConfig {
        probe_length: args.probe,
        max_period: args.max_period,
        max_preperiod: args.max_preperiod,
    };
    let report = directional_period(
        |pt| lattice_outcome(&mut memo, rules, conv, pt),
        &args.base,
        &direction,
        probe,
    )?;
    emit(&mut out, &report)?;
    Ok(())
}

#[derive(Serialize)]
struct BatchError {
    line: usize,
    input: String,
    error: String,
}

fn cmd_batch(args: BatchArgs) -> Result<(), Failure> {
    let (rules, conv) = args.game.resolve(Family::Nim, PlayConvention::Normal)?;
    let threads = threads(args.threads)?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results = par_map(&lines, threads, MemoTable::new, |memo, &(line, input)| {
        let solved =
            Position::parse(input, rules.family()).and_then(|p| solve(memo, rules, conv, p));
        solved.map_err(|e| BatchError {
            line,
            input: input.to_string(),
            error: e.to_string(),
        })
    });
    let mut out = io::stdout().lock();
    let mut clean = true;
    for r in results {
        match r {
            Ok(line) => emit(&mut out, &line)?,
            Err(e) => {
                clean = false;
                emit(&mut out, &e)?
            }
        }
    }
    if clean {
        Ok(())
    } else {
        Err(Failure::Found)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Outcome(a) => cmd_outcome(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Period(a) => cmd_period(a),
        Command::Batch(a) => cmd_batch(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Found) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
