//! Subcommand implementations. Each builds a [`Report`]; rendering happens
//! in `main`.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, ValueEnum};
use house_edge::baccarat::{self, Action};
use house_edge::cards::{format_cards, parse_cards, Card};
use house_edge::coherence::{self, BetSystem, Target};
use house_edge::gametheory::{
    self, basic_endgame, reduce_dominance, solve_zero_sum, support_enumeration, verify_minimax, AnyGame,
    BimatrixGame, GameFile, MatrixGame, PotConvention,
};
use house_edge::holdem::{self, HoleHandClass, Ranking};
use house_edge::lotteries::{self, WayTicket};
use house_edge::roulette::{self, BiasPreset, RouletteBet};
use house_edge::snackjack::{self, Hand, Rules, SnackAction, SnackState, Solver, FULL_DECK, RANKS};
use house_edge::systems::{self, BettingSystem, LimitPolicy, RuinProblem, SimConfig};
use house_edge::videopoker::{self, Analyzer, PayTable};
use house_edge::wager::{Denominator, PayoffDistribution, Pushes};
use house_edge::{craps, Error, Rational, Result};

use crate::cache::Cache;
use crate::report::{Report, Style, Table, Val};
use crate::{
    count, rational, BaccaratCmd, CdfCmd, Command, CrapsCmd, GameCmd, HoldemCmd, KenoCmd, PushArg, RouletteCmd,
    SnackjackCmd, SystemCmd, VpCmd,
};

pub struct Context {
    pub style: Style,
    pub cache: Option<Cache>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BookTarget {
    Win,
    Loss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotArg {
    Neutral,
    Owned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Martingale,
    Fibonacci,
    Labouchere,
    Dalembert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Forfeit,
    Cap,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    kind: SystemKind,
    /// Initial Labouchere list, e.g. 1,2,3.
    #[arg(long, default_value = "1,2,3")]
    list: String,
    /// Fibonacci index of the first bet.
    #[arg(long, default_value_t = 1)]
    start: u32,
    /// Win probability per coup.
    #[arg(long, value_parser = rational)]
    p: Rational,
    #[arg(long, value_parser = count, default_value = "1e5")]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximum coups per trial.
    #[arg(long, value_parser = count, default_value = "1000")]
    horizon: u64,
    /// Bankroll in units.
    #[arg(long)]
    bankroll: Option<i128>,
    /// Stop once profit reaches this many units.
    #[arg(long)]
    target: Option<i128>,
    /// House limit in units.
    #[arg(long)]
    limit: Option<i128>,
    #[arg(long, value_enum, default_value_t = PolicyArg::Forfeit)]
    policy: PolicyArg,
    #[arg(long, value_parser = rational, default_value = "1")]
    unit: Rational,
}

pub fn run(cmd: Command, ctx: &Context) -> Result<Report> {
    match cmd {
        Command::Roulette(c) => roulette(c, ctx),
        Command::Craps(c) => craps_cmd(c),
        Command::Keno(c) => keno(c),
        Command::Lotto { game } => lotto(&game),
        Command::Baccarat(c) => baccarat_cmd(c),
        Command::Cdf(CdfCmd::Solve { commission }) => cdf(&commission),
        Command::Game(c) => game(c),
        Command::Snackjack(c) => snackjack_cmd(c),
        Command::Vp(c) => vp(c, ctx),
        Command::Holdem(c) => holdem_cmd(c, ctx),
        Command::System(SystemCmd::Sim(a)) => system(a),
        Command::Ruin { p, q, w, l } => ruin(p, q, w, l),
        Command::Kelly { p, b } => kelly(&p, &b),
        Command::Boldplay { f, p } => boldplay(&f, &p),
        Command::Coherence { pa, pab, pba, target } => coherence_cmd(pa, pab, pba, target),
    }
}

fn progress(msg: &str) {
    eprintln!("house-edge: {msg}");
}

/// Runs `compute` unless the cache already holds the report keyed by
/// `report`'s command and inputs.
fn cached(ctx: &Context, mut report: Report, compute: impl FnOnce(&mut Report) -> Result<()>) -> Result<Report> {
    let key = Cache::key(&report);
    if let Some(c) = &ctx.cache {
        if let Some(hit) = c.load(&key) {
            progress("using cached result");
            return Ok(hit);
        }
    }
    compute(&mut report)?;
    if let Some(c) = &ctx.cache {
        if let Err(e) = c.store(&key, &report) {
            progress(&format!("cache write failed: {e}"));
        }
    }
    Ok(report)
}

fn pairs<K: std::str::FromStr + Ord>(s: &str) -> Result<BTreeMap<K, Rational>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected key:value, got {p:?}")))?;
            let k = k.trim().parse().map_err(|_| Error::Parse(format!("bad key {k:?}")))?;
            Ok((k, v.parse()?))
        })
        .collect()
}

fn distribution_table(name: &str, d: &PayoffDistribution) -> Table {
    let mut t = Table::new(name, &["payoff", "probability"]);
    for a in &d.merged().atoms {
        t.push(vec![a.payoff.clone().into(), a.prob.clone().into()]);
    }
    t
}

fn sd(v: &Rational, digits: usize) -> Val {
    Val::Text(v.sqrt_decimal(digits).expect("variances are nonnegative"))
}

fn roulette(c: RouletteCmd, ctx: &Context) -> Result<Report> {
    let digits = ctx.style.digits;
    match c {
        RouletteCmd::Bet { numbers, size } => {
            let bet = RouletteBet::new(RouletteBet::parse_numbers(&numbers)?, size.clone())?;
            let d = bet.distribution();
            let mut r = Report::new("roulette bet");
            r.input("numbers", &numbers).input("size", &size);
            let parts = bet.decompose();
            let identity = roulette::Pocket::all()
                .all(|p| roulette::portfolio_payoff(&parts, p) == bet.net_payoff(p));
            r.field("m", bet.m())
                .field("payoff_odds", bet.payoff_odds())
                .field("ev", d.expectation())
                .field("house_advantage", -d.expectation() / &size)
                .field("variance", d.variance())
                .field("sd", sd(&d.variance(), digits))
                .field("equals_single_number_portfolio", identity);
            let mut t = Table::new("decomposition", &["number", "size", "ev"]);
            for p in &parts {
                let n = p.numbers.iter().next().expect("single number").to_string();
                t.push(vec![n.into(), p.size.clone().into(), p.distribution().expectation().into()]);
            }
            r.table(t);
            Ok(r)
        }
        RouletteCmd::Cuban => {
            let d = roulette::combined_distribution(&roulette::cuban_system());
            let mut r = Report::new("roulette cuban");
            r.field("ev", d.expectation())
                .field("total_bet", 2u32)
                .field("house_advantage", -d.expectation() / Rational::from(2))
                .field("variance", d.variance());
            r.table(distribution_table("distribution", &d));
            Ok(r)
        }
        RouletteCmd::Bias { spins, count, preset, c, base38 } => {
            let (c, name) = match (c, preset) {
                (Some(c), _) => (c, "custom".to_string()),
                (None, p) => {
                    let p: BiasPreset = p.as_deref().unwrap_or("ethier_05").parse()?;
                    (p.c(), p.name().to_string())
                }
            };
            let cv = if base38 {
                roulette::biased_wheel_critical_38(spins, &c, digits + 4)?
            } else {
                roulette::biased_wheel_critical(spins, &c, digits + 4)?
            };
            let exceeded = cv.exceeded_by(count);
            let mut r = Report::new("roulette bias");
            r.input("spins", spins).input("count", count).input("c", &c).input("preset", &name);
            r.field("base", cv.base).field(
                "critical_value",
                if cv.exact { Val::Exact(cv.value.clone()) } else { Val::Text(cv.value.to_decimal(digits)) },
            );
            r.field("exceeded", exceeded).field(
                "verdict",
                if exceeded { "count exceeds the critical value" } else { "count does not exceed the critical value" },
            );
            r.note(roulette::BIAS_CAVEAT);
            Ok(r)
        }
    }
}

fn craps_cmd(c: CrapsCmd) -> Result<Report> {
    match c {
        CrapsCmd::Pass => {
            let d = craps::pass_line();
            let mut r = Report::new("craps pass");
            r.field("win_probability", craps::pass_line_win_probability())
                .field("ev", d.expectation())
                .field("house_advantage", -d.expectation())
                .field("variance", d.variance());
            let mut t = Table::new("wins_by_roll", &["come_out_or_point", "probability"]);
            for (j, p) in craps::pass_line_terms() {
                t.push(vec![j.into(), p.into()]);
            }
            r.table(t);
            Ok(r)
        }
        CrapsCmd::Dontpass { pushes } => {
            let w = craps::dont_pass();
            let ha = w.house_advantage(pushes.into(), Denominator::Initial)?;
            let mut r = Report::new("craps dontpass");
            r.input("pushes", format!("{pushes:?}").to_lowercase());
            r.field("ev", w.expectation.clone())
                .field("push_probability", w.push_probability.clone())
                .field("house_advantage", ha)
                .field("house_advantage_pushes_included", w.house_advantage(Pushes::Include, Denominator::Initial)?)
                .field("house_advantage_pushes_excluded", w.house_advantage(Pushes::Exclude, Denominator::Initial)?);
            r.table(distribution_table("distribution", &craps::dont_pass_distribution()));
            Ok(r)
        }
        CrapsCmd::Odds { m } => {
            let a = craps::pass_with_odds(&m)?;
            let (d, total) = craps::pass_with_odds_distribution(&m);
            let mut r = Report::new("craps odds");
            r.input("m", &m);
            r.field("ev", a.ev)
                .field("odds_bet_ev", a.odds_bet_ev)
                .field("expected_total_bet", a.expected_total_bet)
                .field("house_advantage", a.house_advantage)
                .field("distribution_ev", d.expectation())
                .field("distribution_total_bet", total)
                .field("variance", d.variance());
            Ok(r)
        }
        CrapsCmd::Hand { at_least } => {
            let h = craps::hand_length(at_least)?;
            let stats = craps::hand_length_stats();
            let mut r = Report::new("craps hand");
            r.input("at_least", at_least);
            r.field("probability", h.survival.clone());
            if h.survival.is_positive() {
                r.field("one_in", Val::Text(h.survival.recip().to_decimal(1)));
            }
            r.field("mean", stats.mean.clone())
                .field("variance", stats.variance)
                .field("median", stats.median);
            Ok(r)
        }
        CrapsCmd::Fire { paytable } => {
            let table = match paytable {
                Some(s) => pairs::<u8>(&s)?,
                None => craps::standard_fire_paytable(),
            };
            let d = craps::fire_bet(&table)?;
            let mut r = Report::new("craps fire");
            let text: Vec<String> = table.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            r.input("paytable", text.join(","));
            r.field("ev", d.expectation()).field("house_advantage", -d.expectation());
            let mut t = Table::new("distinct_points", &["points", "probability"]);
            for (k, p) in craps::fire_distribution().into_iter().enumerate() {
                t.push(vec![k.into(), p.into()]);
            }
            r.table(t);
            Ok(r)
        }
        CrapsCmd::Duration => {
            let mut r = Report::new("craps duration");
            r.field("mean_rolls", craps::decision_duration_mean())
                .field("mean_rolls_by_chain", craps::decision_duration_chain());
            Ok(r)
        }
        CrapsCmd::Simulate { hands, seed } => {
            if hands == 0 {
                return Err(Error::InvalidParameters("need at least one hand".into()));
            }
            let s = craps::simulate_hands(seed, hands);
            let mut r = Report::new("craps simulate");
            r.input("hands", hands).input("seed", seed).monte_carlo(seed, hands);
            r.field("mean_rolls_per_hand", s.total_rolls as f64 / hands as f64)
                .field("pass_win_rate", s.pass_wins as f64 / s.pass_decisions.max(1) as f64)
                .field("mean_rolls_per_decision", s.decision_rolls as f64 / s.pass_decisions.max(1) as f64);
            let mut t = Table::new("distinct_points", &["points", "hands", "exact_probability"]);
            for (k, p) in craps::fire_distribution().into_iter().enumerate() {
                t.push(vec![k.into(), s.distinct_points[k].into(), p.into()]);
            }
            r.table(t);
            Ok(r)
        }
    }
}

fn keno(c: KenoCmd) -> Result<Report> {
    match c {
        KenoCmd::Catch { spots, catches, pool, drawn } => {
            let p = lotteries::keno_catch_in(pool, drawn, spots, catches)?;
            let agree = lotteries::keno_catch_ticket_form(pool, drawn, spots, catches)
                == lotteries::keno_catch_draw_form(pool, drawn, spots, catches);
            let mut r = Report::new("keno catch");
            r.input("spots", spots).input("catches", catches).input("pool", pool).input("drawn", drawn);
            r.field("probability", p).field("forms_agree", agree);
            Ok(r)
        }
        KenoCmd::Way { r: groups, s, t, paytable, unit } => {
            let w = WayTicket::new(groups, s, t)?;
            let table = pairs::<u64>(&paytable)?;
            let ev = lotteries::way_ticket_ev(&w, &table, &unit)?;
            let mut r = Report::new("keno way");
            r.input("r", groups).input("s", s).input("t", t).input("paytable", &paytable).input("unit", &unit);
            r.field("ways", ev.ways)
                .field("spots_per_way", w.spots_per_way())
                .field("total_bet", ev.total_bet.clone())
                .field("expected_payout", ev.expected_payout.clone())
                .field("expected_profit", ev.expected_profit.clone())
                .field("house_advantage", -&ev.expected_profit / &ev.total_bet);
            Ok(r)
        }
    }
}

fn lotto(game: &str) -> Result<Report> {
    if game != "649" {
        return Err(Error::InvalidParameters(format!("unknown lotto game {game:?}; only 649 is built in")));
    }
    let mut r = Report::new("lotto");
    r.input("game", game);
    let mut t = Table::new("categories", &["category", "probability", "one_in"]);
    for (c, p) in lotteries::lotto_649_categories() {
        let one_in = Val::Text(p.recip().to_decimal(1));
        t.push(vec![c.label().into(), p.into(), one_in]);
    }
    r.field("no_prize", lotteries::lotto_649_no_prize());
    r.table(t);
    Ok(r)
}

fn third_card(y: &str) -> Result<Option<u8>> {
    match y.trim() {
        "none" | "-" | "" => Ok(None),
        s => s.parse().map(Some).map_err(|_| Error::Parse(format!("bad third card {s:?}"))),
    }
}

fn baccarat_cmd(c: BaccaratCmd) -> Result<Report> {
    match c {
        BaccaratCmd::Table => {
            let mut headers: Vec<String> = vec!["banker".into()];
            headers.extend((0..10).map(|y| y.to_string()));
            headers.push("none".into());
            let hs: Vec<&str> = headers.iter().map(String::as_str).collect();
            let mut t = Table::new("banker_draws", &hs);
            for (x, row) in baccarat::banker_table().iter().enumerate() {
                let mut cells: Vec<Val> = vec![x.into()];
                cells.extend(row.iter().map(|a| Val::Text(a.letter().to_string())));
                t.push(cells);
            }
            let mut r = Report::new("baccarat table");
            r.table(t);
            r.note("rows are Banker's total, columns Player's third card; D draws, S stands");
            Ok(r)
        }
        BaccaratCmd::Ev { x, y } => {
            let y = third_card(&y)?;
            let draw = baccarat::banker_choice_ev(x, y, Action::Draw)?;
            let stand = baccarat::banker_choice_ev(x, y, Action::Stand)?;
            let mut r = Report::new("baccarat ev");
            r.input("x", x).input("y", y.map_or("none".to_string(), |v| v.to_string()));
            let better = match draw.cmp(&stand) {
                std::cmp::Ordering::Greater => "draw",
                std::cmp::Ordering::Less => "stand",
                std::cmp::Ordering::Equal => "either",
            };
            r.field("draw", draw)
                .field("stand", stand)
                .field("better", better)
                .field("rule", baccarat::banker_action(x, y)?.letter().to_string());
            Ok(r)
        }
        BaccaratCmd::Bets { commission, pushes } => {
            let o = baccarat::coup_outcome(Action::Stand, |x, y| baccarat::banker_action(x, y).expect("valid cell"));
            let player = baccarat::player_bet_ev();
            let banker = baccarat::banker_bet_ev(&commission);
            let live = Rational::one() - &o.tie;
            let ha = |ev: &Rational| match pushes {
                PushArg::Include => -ev,
                PushArg::Exclude => -ev / &live,
            };
            let mut r = Report::new("baccarat bets");
            r.input("commission", &commission).input("pushes", format!("{pushes:?}").to_lowercase());
            r.field("player_wins", o.player.clone())
                .field("banker_wins", o.banker.clone())
                .field("tie", o.tie.clone())
                .field("player_bet_ev", player.clone())
                .field("banker_bet_ev", banker.clone())
                .field("player_house_advantage", ha(&player))
                .field("banker_house_advantage", ha(&banker));
            Ok(r)
        }
    }
}

fn mix_table(name: &str, labels: &[String], mix: &[Rational]) -> Table {
    let mut t = Table::new(name, &["strategy", "probability"]);
    for (l, p) in labels.iter().zip(mix) {
        if !p.is_zero() {
            t.push(vec![l.clone().into(), p.clone().into()]);
        }
    }
    t
}

fn zero_sum_report(r: &mut Report, g: &MatrixGame) -> Result<()> {
    let red = reduce_dominance(&g.to_bimatrix());
    let s = solve_zero_sum(g)?;
    r.field("rows", g.payoffs.rows())
        .field("cols", g.payoffs.cols())
        .field("reduced_rows", red.game.rows())
        .field("reduced_cols", red.game.cols())
        .field("value", s.value.clone())
        .field("verified", verify_minimax(g, &s.row_mix, &s.col_mix, &s.value));
    r.table(mix_table("row_strategy", &g.row_labels, &s.row_mix));
    r.table(mix_table("col_strategy", &g.col_labels, &s.col_mix));
    Ok(())
}

fn bimatrix_report(r: &mut Report, g: &BimatrixGame) {
    let red = reduce_dominance(g);
    let eq = support_enumeration(&red.game);
    r.field("rows", g.rows())
        .field("cols", g.cols())
        .field("reduced_rows", red.game.rows())
        .field("reduced_cols", red.game.cols())
        .field("equilibria", eq.solutions.len())
        .field("degenerate", eq.degenerate);
    let mut t = Table::new("equilibria", &["equilibrium", "player", "strategy", "probability"]);
    let mut v = Table::new("values", &["equilibrium", "row_value", "col_value"]);
    for (k, s) in eq.solutions.iter().enumerate() {
        for (side, labels, mix) in [("row", &red.game.row_labels, &s.row_mix), ("col", &red.game.col_labels, &s.col_mix)] {
            for (l, p) in labels.iter().zip(mix) {
                if !p.is_zero() {
                    t.push(vec![(k + 1).into(), side.into(), l.clone().into(), p.clone().into()]);
                }
            }
        }
        v.push(vec![(k + 1).into(), s.value.clone().into(), s.col_value.clone().into()]);
    }
    r.table(t).table(v);
}

fn cdf(commission: &Rational) -> Result<Report> {
    let mut r = Report::new("cdf solve");
    r.input("commission", commission);
    match baccarat::build_chemin_game(commission)? {
        AnyGame::Zero(g) => zero_sum_report(&mut r, &g)?,
        AnyGame::General(g) => bimatrix_report(&mut r, &g),
    }
    r.note("Player rows: draw or stand on 5; Banker columns: actions at (3,9), (4,1), (5,4), (6,none)");
    Ok(r)
}

fn game(c: GameCmd) -> Result<Report> {
    match c {
        GameCmd::Solve { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", file.display())))?;
            let gf: GameFile = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let mut r = Report::new("game solve");
            r.input("file", file.display());
            match gf.into_game()? {
                AnyGame::Zero(g) => zero_sum_report(&mut r, &g)?,
                AnyGame::General(g) => bimatrix_report(&mut r, &g),
            }
            Ok(r)
        }
        GameCmd::Endgame { a, b, p, convention } => {
            let conv = match convention {
                PotArg::Neutral => PotConvention::PotNeutral,
                PotArg::Owned => PotConvention::PotOwned,
            };
            let g = basic_endgame(&a, &b, &p, conv)?;
            let mut r = Report::new("game endgame");
            r.input("a", &a).input("b", &b).input("p", &p).input("convention", format!("{convention:?}").to_lowercase());
            let eq = gametheory::solve_bimatrix_2x2(&g)?;
            r.field("equilibria", eq.solutions.len()).field("degenerate", eq.degenerate);
            let mut t = Table::new("equilibria", &["equilibrium", "player", "strategy", "probability"]);
            let mut v = Table::new("values", &["equilibrium", "row_value", "col_value"]);
            for (k, s) in eq.solutions.iter().enumerate() {
                for (side, labels, mix) in [("row", &g.row_labels, &s.row_mix), ("col", &g.col_labels, &s.col_mix)] {
                    for (l, q) in labels.iter().zip(mix) {
                        t.push(vec![(k + 1).into(), side.into(), l.clone().into(), q.clone().into()]);
                    }
                }
                v.push(vec![(k + 1).into(), s.value.clone().into(), s.col_value.clone().into()]);
            }
            r.table(t).table(v);
            Ok(r)
        }
    }
}

fn upcard(c: char) -> Result<usize> {
    snackjack::rank_index(c.to_ascii_uppercase())
}

fn snackjack_cmd(c: SnackjackCmd) -> Result<Report> {
    match c {
        SnackjackCmd::Strategy { natural_pays } => {
            let rules = Rules { natural_pays: natural_pays.clone(), ..Rules::default() };
            let table = snackjack::basic_strategy(&rules);
            let mut r = Report::new("snackjack strategy");
            r.input("natural_pays", &natural_pays);
            r.field("decision_points", table.points.len()).field("game_ev", table.game_ev.clone());
            let mut t = Table::new("strategy", &["hand", "upcard", "total", "soft", "action", "ev", "tie"]);
            for p in &table.points {
                t.push(vec![
                    p.hand.clone().into(),
                    p.upcard.to_string().into(),
                    p.total.into(),
                    p.soft.into(),
                    p.action.name().into(),
                    p.ev.clone().into(),
                    p.tie.into(),
                ]);
            }
            r.table(t);
            Ok(r)
        }
        SnackjackCmd::Ev { hand, up, action, natural_pays } => {
            let h = Hand::parse(&hand)?;
            let state = SnackState::deal(h, upcard(up)?)?;
            let rules = Rules { natural_pays: natural_pays.clone(), ..Rules::default() };
            let mut solver = Solver::new(rules);
            let actions: Vec<SnackAction> = match &action {
                Some(a) => vec![a.parse()?],
                None => SnackAction::ALL.iter().copied().filter(|&a| state.legal(a)).collect(),
            };
            let mut r = Report::new("snackjack ev");
            r.input("hand", &hand).input("up", up.to_ascii_uppercase()).input("natural_pays", &natural_pays);
            if let Some(a) = &action {
                r.input("action", a);
            }
            let mut t = Table::new("actions", &["action", "ev"]);
            for a in actions {
                let ev = solver.action_ev(&state, a)?;
                if action.is_some() {
                    r.field("ev", ev.clone());
                }
                t.push(vec![a.name().into(), ev.into()]);
            }
            r.table(t);
            Ok(r)
        }
        SnackjackCmd::Sequences => {
            let mut r = Report::new("snackjack sequences");
            let mut t = Table::new("sequences", &["upcard", "cards", "probability", "total"]);
            let mut distinct = std::collections::BTreeSet::new();
            for u in 0..3 {
                let deck = FULL_DECK.minus(u).expect("deck holds every rank");
                for s in snackjack::dealer_sequences(u, deck)? {
                    let cards: String = s.cards.iter().collect();
                    distinct.insert(s.cards.clone());
                    let total = s.total.map_or(Val::Text("bust".into()), Val::from);
                    t.push(vec![RANKS[u].to_string().into(), cards.into(), s.probability.into(), total]);
                }
            }
            r.field("distinct_sequences", distinct.len());
            r.table(t);
            Ok(r)
        }
        SnackjackCmd::Simulate { rounds, seed } => {
            if rounds < 2 {
                return Err(Error::InvalidParameters("need at least two rounds".into()));
            }
            let rules = Rules::default();
            let table = snackjack::basic_strategy(&rules);
            let (mean, var) = snackjack::simulate(&table, &rules, rounds, seed);
            let mut r = Report::new("snackjack simulate");
            r.input("rounds", rounds).input("seed", seed).monte_carlo(seed, rounds);
            r.field("mean", mean)
                .field("ci95", 1.96 * (var / rounds as f64).sqrt())
                .field("exact_game_ev", table.game_ev);
            Ok(r)
        }
    }
}

fn paytable_from_file(path: &std::path::Path) -> Result<PayTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let pt: PayTable = serde_json::from_str(&text).map_err(|e| Error::InvalidPaytable(e.to_string()))?;
    pt.validate()?;
    Ok(pt)
}

fn paytable_table(pt: &PayTable) -> Table {
    let mut t = Table::new("paytable", &["hand", "pays"]);
    for (name, pay) in videopoker::CLASS_NAMES.iter().zip(pt.by_class()) {
        t.push(vec![(*name).into(), pay.into()]);
    }
    t
}

fn vp(c: VpCmd, ctx: &Context) -> Result<Report> {
    match c {
        VpCmd::Analyze { paytable, file, histogram } => {
            let pt = match &file {
                Some(f) => paytable_from_file(f)?,
                None => PayTable::preset(&paytable)?,
            };
            let mut r = Report::new("vp analyze");
            match &file {
                // The contents, not the path, key the cache.
                Some(_) => r.input("paytable", serde_json::to_string(&pt).expect("paytables serialize")),
                None => r.input("paytable", &paytable),
            };
            r.input("histogram", histogram);
            cached(ctx, r, |r| {
                let start = Instant::now();
                progress("building subset tables");
                let analyzer = Analyzer::new();
                progress("evaluating all initial hands");
                let a = analyzer.analyze(&pt)?;
                let classes = house_edge::cards::five_card_classes().len();
                progress(&format!("done in {:.1}s", start.elapsed().as_secs_f64()));
                r.field("paytable_name", pt.name.clone())
                    .field("return", a.expected_return.clone())
                    .field("variance", a.variance.clone())
                    .field("sd", Val::Text(a.sd_decimal(4)))
                    .field("royal_probability", a.royal_probability.clone())
                    .field("royal_one_in", Val::Text(a.royal_probability.recip().to_decimal(1)))
                    .field("equivalence_classes", classes)
                    .field("distinct_values", a.distinct_values)
                    .field("distinct_non_garbage", a.distinct_non_garbage)
                    .field("garbage_hands", a.garbage_hands)
                    .field("tied_hold_classes", a.ties.classes)
                    .field("tied_hold_hands", a.ties.hands)
                    .field("payout_relevant_ties", a.ties.effective_classes);
                r.table(paytable_table(&pt));
                let mut mp = Table::new("multi_play_variance", &["lines", "divided_stake", "per_play_total"]);
                for n in [1u32, 3, 5, 10, 50, 100] {
                    let v = a.multi_play(n);
                    mp.push(vec![n.into(), v.divided_stake.into(), v.per_play_total.into()]);
                }
                r.table(mp);
                if histogram {
                    let mut h = Table::new("histogram", &["value", "hands"]);
                    for (v, n) in &a.histogram {
                        h.push(vec![v.clone().into(), (*n).into()]);
                    }
                    r.table(h);
                }
                Ok(())
            })
        }
        VpCmd::Hand { cards, paytable } => {
            let pt = PayTable::preset(&paytable)?;
            let hand = parse_cards(&cards)?;
            let analyzer = Analyzer::new();
            let h = videopoker::analyze_hand(&analyzer, &hand, &pt)?;
            let mut r = Report::new("vp hand");
            r.input("cards", &cards).input("paytable", &paytable);
            r.field("best_hold", format_cards(&h.per_hold[0].0))
                .field("best_ev", h.best_ev.clone());
            let mut t = Table::new("holds", &["rank", "hold", "ev"]);
            for (i, (held, _, ev)) in h.per_hold.iter().enumerate() {
                let label = if held.is_empty() { "(discard all)".to_string() } else { format_cards(held) };
                t.push(vec![(i + 1).into(), label.into(), ev.clone().into()]);
            }
            r.table(t);
            Ok(r)
        }
        VpCmd::Paytable { file } => {
            let pt = paytable_from_file(&file)?;
            let mut r = Report::new("vp paytable");
            r.input("file", file.display());
            r.field("name", pt.name.clone()).field("valid", true);
            r.table(paytable_table(&pt));
            Ok(r)
        }
    }
}

fn hole(s: &str) -> Result<Vec<Card>> {
    let cards = parse_cards(s)?;
    if cards.len() != 2 {
        return Err(Error::InvalidParameters(format!("{s:?} is not two hole cards")));
    }
    Ok(cards)
}

fn ranking(ctx: &Context) -> Result<Report> {
    let r = Report::new("holdem rank");
    cached(ctx, r, |r| {
        let start = Instant::now();
        progress("ranking 169 starting hands over all board classes");
        let ranking = Ranking::compute();
        progress(&format!("done in {:.1}s", start.elapsed().as_secs_f64()));
        let mut t = Table::new("ranking", &["rank", "hand", "combos", "net_gain"]);
        for (i, (c, v)) in ranking.entries.iter().enumerate() {
            t.push(vec![(i + 1).into(), c.to_string().into(), c.size().into(), v.clone().into()]);
        }
        r.table(t);
        Ok(())
    })
}

fn holdem_cmd(c: HoldemCmd, ctx: &Context) -> Result<Report> {
    match c {
        HoldemCmd::Matchup { h1, h2 } => {
            let (a, b) = (hole(&h1)?, hole(&h2)?);
            let m = holdem::matchup(&a, &b)?;
            let mut r = Report::new("holdem matchup");
            r.input("h1", &h1).input("h2", &h2);
            let equity = (Rational::from(2 * m.wins + m.ties)) / Rational::from(2 * m.total);
            r.field("wins", m.wins)
                .field("ties", m.ties)
                .field("losses", m.losses)
                .field("boards", m.total)
                .field("equity", equity)
                .field("net_gain", m.net_gain);
            Ok(r)
        }
        HoldemCmd::Rank { top, .. } => {
            let mut r = ranking(ctx)?;
            if let Some(n) = top {
                r.input("top", n);
                for t in &mut r.tables {
                    t.rows.truncate(n);
                }
            }
            Ok(r)
        }
        HoldemCmd::VsRandom { hand } => {
            let class = match hand.parse::<HoleHandClass>() {
                Ok(c) => c,
                Err(_) => {
                    let h = hole(&hand)?;
                    house_edge::cards::check_distinct(&h)?;
                    HoleHandClass::of(h[0], h[1])
                }
            };
            let full = ranking(ctx)?;
            let rows = &full.tables[0].rows;
            let row = rows
                .iter()
                .find(|row| row[1] == Val::Text(class.to_string()))
                .ok_or_else(|| Error::UnreachableState(format!("{class} missing from ranking")))?;
            let mut r = Report::new("holdem vs-random");
            r.input("hand", &hand);
            r.field("class", class.to_string()).field("rank", row[0].clone()).field("net_gain", row[3].clone());
            Ok(r)
        }
        HoldemCmd::Simulate { hand, opponents, trials, seed } => {
            let h = hole(&hand)?;
            let mean = holdem::simulate_vs_random(&h, opponents, trials, seed)?;
            let mut r = Report::new("holdem simulate");
            r.input("hand", &hand).input("opponents", opponents).input("trials", trials).input("seed", seed);
            r.monte_carlo(seed, trials);
            r.field("net_gain", mean);
            Ok(r)
        }
    }
}

fn system(a: SimArgs) -> Result<Report> {
    let mut s = match a.kind {
        SystemKind::Martingale => BettingSystem::martingale(),
        SystemKind::Fibonacci => BettingSystem::fibonacci(a.start)?,
        SystemKind::Labouchere => {
            let list = a
                .list
                .split(',')
                .map(|x| x.trim().parse::<i128>().map_err(|_| Error::Parse(format!("bad list entry {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            BettingSystem::labouchere(list)?
        }
        SystemKind::Dalembert => BettingSystem::dalembert(),
    }
    .with_unit(a.unit.clone())?;
    if let Some(l) = a.limit {
        let policy = match a.policy {
            PolicyArg::Forfeit => LimitPolicy::Forfeit,
            PolicyArg::Cap => LimitPolicy::Cap,
        };
        s = s.with_limit(l, policy)?;
    }
    let cfg = SimConfig {
        p: a.p.clone(),
        trials: a.trials,
        seed: a.seed,
        horizon: a.horizon,
        bankroll: a.bankroll,
        target: a.target,
    };
    let sum = systems::simulate(&s, &cfg)?;
    let mut r = Report::new("system sim");
    r.input("kind", format!("{:?}", a.kind).to_lowercase())
        .input("p", &a.p)
        .input("trials", a.trials)
        .input("seed", a.seed)
        .input("horizon", a.horizon)
        .input("unit", &a.unit);
    match a.kind {
        SystemKind::Labouchere => {
            r.input("list", &a.list);
        }
        SystemKind::Fibonacci => {
            r.input("start", a.start);
        }
        _ => {}
    }
    for (k, v) in [("bankroll", a.bankroll), ("target", a.target), ("limit", a.limit)] {
        if let Some(v) = v {
            r.input(k, v);
        }
    }
    if a.limit.is_some() {
        r.input("policy", format!("{:?}", a.policy).to_lowercase());
    }
    r.monte_carlo(a.seed, a.trials);
    r.field("mean_profit_units", sum.mean_profit)
        .field("sd_profit_units", sum.sd_profit)
        .field("ci95", sum.ci95)
        .field("median_max_bet", sum.max_bet_quantile(0.5))
        .field("p99_max_bet", sum.max_bet_quantile(0.99))
        .field("max_bet", sum.max_bet_quantile(1.0));
    let mut t = Table::new("stop_causes", &["cause", "trials"]);
    for (c, n) in &sum.causes {
        let name = serde_json::to_value(c).expect("causes serialize");
        t.push(vec![name.as_str().unwrap_or("?").into(), (*n).into()]);
    }
    r.table(t);
    Ok(r)
}

fn ruin(p: Rational, q: Option<Rational>, w: u32, l: u32) -> Result<Report> {
    let q = q.unwrap_or_else(|| Rational::one() - &p);
    let rp = RuinProblem::new(p.clone(), q.clone(), w, l)?;
    let mut r = Report::new("ruin");
    r.input("p", &p).input("q", &q).input("W", w).input("L", l);
    let win = systems::ruin_probability(&rp);
    r.field("win_probability", win.clone()).field("ruin_probability", Rational::one() - win.clone());
    if w + l <= 60 {
        r.field("chain_agrees", systems::ruin_by_chain(&rp) == win);
    }
    Ok(r)
}

fn kelly(p: &Rational, b: &Rational) -> Result<Report> {
    let k = systems::kelly(p, b)?;
    let mut r = Report::new("kelly");
    r.input("p", p).input("b", b);
    r.field("fraction", k.fraction).field("growth_rate", k.growth);
    Ok(r)
}

fn boldplay(f: &Rational, p: &Rational) -> Result<Report> {
    let q = systems::bold_play(f, p)?;
    let mut r = Report::new("boldplay");
    r.input("f", f).input("p", p);
    r.field("success_probability", q);
    // Flat one-unit bets with the goal split into 2^k units.
    let d = f.denom().clone();
    let k = d.bits() - 1;
    if !f.is_zero() && !f.is_one() && k <= 20 {
        let units: u32 = (f * Rational::from_integer(d.clone())).numer().to_string().parse().expect("small");
        let goal = 1u32 << k;
        let flat = RuinProblem::new(p.clone(), Rational::one() - p, goal - units, units)?;
        r.field("flat_unit_probability", systems::ruin_probability(&flat));
    }
    Ok(r)
}

fn coherence_cmd(pa: Rational, pab: Rational, pba: Rational, target: BookTarget) -> Result<Report> {
    let s = BetSystem::new(pa.clone(), pab.clone(), pba.clone())?;
    let m = coherence::build_stake_matrix(&s);
    let verdict = coherence::is_coherent(&s);
    let mut r = Report::new("coherence");
    r.input("pa", &pa).input("pab", &pab).input("pba", &pba);
    r.field("det", verdict.det.clone()).field("coherent", verdict.coherent);
    let mut mt = Table::new("stake_matrix", &["cell", "bet_a", "bet_ab", "bet_b_given_a"]);
    for (i, row) in m.to_rows().into_iter().enumerate() {
        let mut cells: Vec<Val> = vec![format!("D{}", i + 1).into()];
        cells.extend(row.into_iter().map(Val::from));
        mt.push(cells);
    }
    r.table(mt);
    if !verdict.coherent {
        let t = match target {
            BookTarget::Win => Target::SureWin,
            BookTarget::Loss => Target::SureLoss,
        };
        r.input("target", format!("{target:?}").to_lowercase());
        let b = coherence::dutch_book(&s, t)?;
        let mut bt = Table::new("dutch_book", &["bet", "stake"]);
        for (name, v) in ["A", "A and B", "B given A"].iter().zip(&b) {
            bt.push(vec![(*name).into(), v.clone().into()]);
        }
        let mut st = Table::new("settlement", &["cell", "winnings"]);
        for (i, w) in m.mul_vec(&b).into_iter().enumerate() {
            st.push(vec![format!("D{}", i + 1).into(), w.into()]);
        }
        r.table(bt).table(st);
    }
    Ok(r)
}
