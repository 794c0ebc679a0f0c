use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use house_edge::Rational;

mod cache;
mod commands;
mod report;

use report::{Format, Style};

/// Exact odds, expectations, strategies and game solutions for casino games.
#[derive(Parser)]
#[command(name = "house-edge", version)]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal places for decimal renderings.
    #[arg(long, global = true, default_value_t = 7)]
    digits: usize,
    /// Print exact rationals instead of decimals.
    #[arg(long, global = true)]
    exact: bool,
    /// Also write the rendered output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel enumerations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for cached class tables; HOUSE_EDGE_CACHE takes precedence.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

pub fn rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: house_edge::Error| e.to_string())
}

/// A nonnegative integer, also accepting forms such as `1e6`.
pub fn count(s: &str) -> Result<u64, String> {
    let r = rational(s)?;
    if !r.is_integer() || r.is_negative() {
        return Err(format!("{s:?} is not a nonnegative integer"));
    }
    r.numer().to_string().parse().map_err(|_| format!("{s:?} is too large"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PushArg {
    Include,
    Exclude,
}

impl From<PushArg> for house_edge::wager::Pushes {
    fn from(p: PushArg) -> Self {
        match p {
            PushArg::Include => house_edge::wager::Pushes::Include,
            PushArg::Exclude => house_edge::wager::Pushes::Exclude,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Double-zero roulette bets and the biased-wheel test.
    #[command(subcommand)]
    Roulette(RouletteCmd),
    /// Craps line bets, free odds, hand length and the Fire Bet.
    #[command(subcommand)]
    Craps(CrapsCmd),
    /// Keno catch probabilities and way tickets.
    #[command(subcommand)]
    Keno(KenoCmd),
    /// Lotto prize-category probabilities.
    Lotto {
        /// Game; only 649 is built in.
        #[arg(default_value = "649")]
        game: String,
    },
    /// Baccarat drawing rules and bet expectations.
    #[command(subcommand)]
    Baccarat(BaccaratCmd),
    /// Chemin de fer as a game between Player and Banker.
    #[command(subcommand)]
    Cdf(CdfCmd),
    /// Solve matrix and bimatrix games.
    #[command(subcommand)]
    Game(GameCmd),
    /// Snackjack basic strategy and expectations.
    #[command(subcommand)]
    Snackjack(SnackjackCmd),
    /// Jacks-or-better video poker.
    #[command(subcommand)]
    Vp(VpCmd),
    /// Heads-up Texas hold'em preflop matchups and rankings.
    #[command(subcommand)]
    Holdem(HoldemCmd),
    /// Betting-system simulation.
    #[command(subcommand)]
    System(SystemCmd),
    /// Gambler's ruin: probability of winning W units before losing L.
    Ruin {
        #[arg(long, value_parser = rational)]
        p: Rational,
        /// Loss probability; defaults to 1 − p.
        #[arg(long, value_parser = rational)]
        q: Option<Rational>,
        #[arg(long = "W", visible_alias = "w")]
        w: u32,
        #[arg(long = "L", visible_alias = "l")]
        l: u32,
    },
    /// Kelly fraction and growth rate.
    Kelly {
        #[arg(long, value_parser = rational)]
        p: Rational,
        /// Payoff odds (b to 1).
        #[arg(long, value_parser = rational, default_value = "1")]
        b: Rational,
    },
    /// Bold play at red-and-black.
    Boldplay {
        /// Fortune as a fraction of the goal; must be dyadic.
        #[arg(long, value_parser = rational)]
        f: Rational,
        #[arg(long, value_parser = rational)]
        p: Rational,
    },
    /// Coherence of bets on A, A∩B and B given A.
    Coherence {
        #[arg(long, value_parser = rational)]
        pa: Rational,
        #[arg(long, value_parser = rational)]
        pab: Rational,
        #[arg(long, value_parser = rational)]
        pba: Rational,
        /// Dutch book to build when incoherent.
        #[arg(long, value_enum, default_value_t = commands::BookTarget::Win)]
        target: commands::BookTarget,
    },
}

#[derive(Subcommand)]
pub enum RouletteCmd {
    /// One bet on a set of numbers.
    Bet {
        /// Comma-separated pockets, e.g. 0,00,1,2,3.
        #[arg(long)]
        numbers: String,
        #[arg(long, value_parser = rational, default_value = "1")]
        size: Rational,
    },
    /// The two-bet system of a column and the black numbers.
    Cuban,
    /// Whether a number's count in N spins exceeds the critical value.
    Bias {
        #[arg(long, value_parser = count)]
        spins: u64,
        #[arg(long, value_parser = count)]
        count: u64,
        /// ethier_05, ethier_20, epstein_05 or epstein_20.
        #[arg(long, conflicts_with = "c")]
        preset: Option<String>,
        #[arg(long, value_parser = rational)]
        c: Option<Rational>,
        /// Use n/38 instead of n/36 for the centre.
        #[arg(long)]
        base38: bool,
    },
}

#[derive(Subcommand)]
pub enum CrapsCmd {
    Pass,
    Dontpass {
        #[arg(long, value_enum, default_value_t = PushArg::Exclude)]
        pushes: PushArg,
    },
    /// Pass line with m-times free odds.
    Odds {
        #[arg(long, value_parser = rational)]
        m: Rational,
    },
    /// Length of a shooter's hand.
    Hand {
        #[arg(long, default_value_t = 154)]
        at_least: usize,
    },
    Fire {
        /// points:payoff pairs, e.g. 4:24,5:249,6:999.
        #[arg(long)]
        paytable: Option<String>,
    },
    /// Rolls per pass-line decision.
    Duration,
    Simulate {
        #[arg(long, value_parser = count, default_value = "1e5")]
        hands: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
pub enum KenoCmd {
    Catch {
        #[arg(long)]
        spots: u64,
        #[arg(long)]
        catches: u64,
        #[arg(long, default_value_t = 80)]
        pool: u64,
        #[arg(long, default_value_t = 20)]
        drawn: u64,
    },
    /// C(r, t) ways, each the union of t of r groups of s spots.
    Way {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        /// catches:payout pairs per unit bet on one way.
        #[arg(long)]
        paytable: String,
        #[arg(long, value_parser = rational, default_value = "1")]
        unit: Rational,
    },
}

#[derive(Subcommand)]
pub enum BaccaratCmd {
    /// Banker's drawing table.
    Table,
    /// Banker's expectation drawing and standing at one cell.
    Ev {
        #[arg(long)]
        x: u8,
        /// Player's third card, or "none".
        #[arg(long, default_value = "none")]
        y: String,
    },
    /// Player, Banker and Tie probabilities and bet expectations.
    Bets {
        #[arg(long, value_parser = rational, default_value = "1/20")]
        commission: Rational,
        #[arg(long, value_enum, default_value_t = PushArg::Include)]
        pushes: PushArg,
    },
}

#[derive(Subcommand)]
pub enum CdfCmd {
    Solve {
        #[arg(long, value_parser = rational, default_value = "0")]
        commission: Rational,
    },
}

#[derive(Subcommand)]
pub enum GameCmd {
    /// Solve a game from a JSON file.
    Solve {
        #[arg(long)]
        file: PathBuf,
    },
    /// The basic poker endgame.
    Endgame {
        #[arg(long, value_parser = rational)]
        a: Rational,
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long, value_parser = rational)]
        p: Rational,
        #[arg(long, value_enum, default_value_t = commands::PotArg::Neutral)]
        convention: commands::PotArg,
    },
}

#[derive(Subcommand)]
pub enum SnackjackCmd {
    Strategy {
        #[arg(long, value_parser = rational, default_value = "3/2")]
        natural_pays: Rational,
    },
    /// Expectation of each action, or of one action, for a hand.
    Ev {
        /// Cards such as 3,3 or A,2.
        #[arg(long)]
        hand: String,
        #[arg(long)]
        up: char,
        #[arg(long)]
        action: Option<String>,
        #[arg(long, value_parser = rational, default_value = "3/2")]
        natural_pays: Rational,
    },
    /// Dealer drawing sequences.
    Sequences,
    Simulate {
        #[arg(long, value_parser = count, default_value = "1e6")]
        rounds: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
pub enum VpCmd {
    /// Optimal-strategy return and variance of a paytable.
    Analyze {
        /// Preset: 9-6, 9-6-940, 8-5-2500 or 8-5.
        #[arg(long, default_value = "9-6", conflicts_with = "file")]
        paytable: String,
        /// Paytable JSON file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Include the distribution of optimal hand values.
        #[arg(long)]
        histogram: bool,
    },
    /// All 32 holds of a hand ranked by expectation.
    Hand {
        #[arg(long)]
        cards: String,
        #[arg(long, default_value = "9-6")]
        paytable: String,
    },
    /// Validate and print a paytable.
    Paytable {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum HoldemCmd {
    /// Exact result of one hand against another over all boards.
    Matchup {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
    },
    /// All 169 starting hands by net gain against a random hand.
    Rank {
        #[arg(long)]
        top: Option<usize>,
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
    },
    /// Net gain of one hand or class against a random hand.
    VsRandom {
        /// Cards such as "As Ah" or a class such as AKs.
        #[arg(long)]
        hand: String,
    },
    Simulate {
        #[arg(long)]
        hand: String,
        #[arg(long, default_value_t = 1)]
        opponents: usize,
        #[arg(long, value_parser = count, default_value = "1e5")]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
pub enum SystemCmd {
    Sim(commands::SimArgs),
}

/// Help for the deepest subcommand named on the command line.
fn subcommand_help(argv: &[String]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    for arg in argv.iter().skip(1) {
        let next = cmd.get_subcommands().find(|c| c.get_name() == arg).cloned();
        match next {
            Some(c) => cmd = c,
            None if arg.starts_with('-') => continue,
            None => break,
        }
    }
    cmd.render_help().to_string()
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            if e.kind() != clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprintln!("\n{}", subcommand_help(&argv));
            }
            return ExitCode::from(2);
        }
    };
    let mut format = cli.output.format;
    if let Command::Holdem(HoldemCmd::Rank { json: true, .. }) = cli.command {
        format = Format::Json;
    }
    if let Some(n) = cli.output.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let cache_dir = std::env::var_os("HOUSE_EDGE_CACHE").map(PathBuf::from).or(cli.output.cache.clone());
    let style = Style { digits: cli.output.digits, exact: cli.output.exact };
    let ctx = commands::Context { style, cache: cache_dir.as_deref().map(cache::Cache::new) };
    let report = match commands::run(cli.command, &ctx) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = report.render(format, style);
    if let Some(path) = &cli.output.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
