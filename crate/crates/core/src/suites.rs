//! Property suites, one per acceptance criterion. Shared by the `check`
//! command and the acceptance tests.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::{find_winning_strategy, solve_spm, solve_zielonka, DEFAULT_STRATEGY_BOUND};
use crate::game::{
    limsup_winner, sample_plays, strategy_subgraph, GameGraph, LassoWord, Letter, Player, Priority,
};
use crate::gen::{all_small_games, gen_random, GenSpec};
use crate::product::{
    build_full_product, build_product, solve_safety_product, solve_with_registers,
    solve_with_safety, Position, ProductError,
};
use crate::register::{count_states_r, lasso_accepts_r, rn, RegisterAutomaton};
use crate::safety::{count_states_s, lasso_accepts_s, SafetyAutomaton};
use crate::witness::{
    adversarial_word_vs_strategy, bad_of_lasso_run, build_game_tree, build_witness_run_in,
    lift_to_safety, rejected_even_word, Bad, LowestOddRegister, NeverReset, SeededRandom,
    TransitionStrategy, Verdict, DEFAULT_FOLD_BUDGET,
};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random games in the oracle suite.
    pub random_games: usize,
    /// Random games whose Odd wins are sampled for rejection.
    pub rejection_games: usize,
    /// Minimum number of (game, strategy, play) triples for witness runs.
    pub witness_triples: usize,
    /// Product node cap.
    pub cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20_240_601,
            random_games: 500,
            rejection_games: 200,
            witness_triples: 200,
            cap: crate::product::DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub criterion: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checked: usize,
    /// Summary line, plus the first failures if any.
    pub detail: String,
    pub elapsed: Duration,
}

impl SuiteReport {
    /// `PASS`/`FAIL`, criterion, name, count, time and summary on one line.
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} checks in {:.2?}; {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.checked,
            self.elapsed,
            self.detail.lines().next().unwrap_or("")
        )
    }
}

type SuiteFn = fn(&SuiteConfig) -> Outcome;

/// Criterion number, name and body of every suite.
const SUITES: [(usize, &str, SuiteFn); 10] = [
    (1, "oracle", oracle),
    (2, "state-counts", state_counts),
    (3, "product-sizes", product_sizes),
    (4, "strong-rejection", strong_rejection),
    (5, "register-language", register_language),
    (6, "bad-bound", bad_bound),
    (7, "lift", lift),
    (8, "adversary", adversary),
    (9, "safety-gap", safety_gap),
    (10, "linearity", linearity),
];

/// `(criterion, name)` of every suite, in criterion order.
pub fn suite_names() -> Vec<(usize, &'static str)> {
    SUITES.iter().map(|&(c, name, _)| (c, name)).collect()
}

/// Suite names matched by a filter: a suite name, `sizes` for both size
/// suites, or `all`. Empty if nothing matches.
pub fn select(filter: &str) -> Vec<&'static str> {
    SUITES
        .iter()
        .map(|&(_, name, _)| name)
        .filter(|&name| match filter {
            "all" => true,
            "sizes" => name == "state-counts" || name == "product-sizes",
            f => f == name,
        })
        .collect()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Option<SuiteReport> {
    let &(criterion, name, body) = SUITES.iter().find(|s| s.1 == name)?;
    let start = Instant::now();
    let out = body(cfg);
    Some(SuiteReport {
        criterion,
        name,
        passed: out.failures.is_empty() && out.checked > 0,
        checked: out.checked,
        detail: out.render(),
        elapsed: start.elapsed(),
    })
}

#[derive(Default)]
struct Outcome {
    checked: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checked += 1;
        self.failures.push(what);
    }

    fn note(&mut self, what: String) {
        self.notes.push(what);
    }

    fn render(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} failures", self.failures.len());
        for n in &self.notes {
            let _ = write!(out, "; {n}");
        }
        for f in self.failures.iter().take(5) {
            let _ = write!(out, "\n  {f}");
        }
        out
    }
}

/// Why [`all_winners`] gave no answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WinnersError {
    /// A product exceeded the node cap.
    Cap(ProductError),
    Other(String),
}

impl fmt::Display for WinnersError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WinnersError::Cap(e) => e.fmt(f),
            WinnersError::Other(e) => f.write_str(e),
        }
    }
}

impl From<ProductError> for WinnersError {
    fn from(e: ProductError) -> Self {
        match e {
            ProductError::ResourceLimit { .. } => WinnersError::Cap(e),
            e => WinnersError::Other(e.to_string()),
        }
    }
}

/// Winners by every solver, in the order safety, parity, zielonka, spm, brute.
pub fn all_winners(g: &GameGraph, cap: usize) -> Result<[Player; 5], WinnersError> {
    let safety = solve_with_safety(g, cap)?.winner;
    let parity = solve_with_registers(g, cap)?.winner;
    let brute = crate::baselines::brute_force_winner(g, DEFAULT_STRATEGY_BOUND)
        .map_err(|e| WinnersError::Other(e.to_string()))?;
    Ok([safety, parity, solve_zielonka(g), solve_spm(g), brute])
}

/// An endless seeded stream of random games with `n <= max_n`, `d <= max_d`.
pub fn random_games(seed: u64, max_n: usize, max_d: Priority) -> impl Iterator<Item = GameGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(move || {
        let spec = GenSpec {
            n: rng.gen_range(1..=max_n),
            d: rng.gen_range(1..=max_d),
            density: rng.gen_range(1.0..3.0),
            even_bias: 0.5,
            seed: rng.gen(),
        };
        gen_random(&spec)
    })
}

/// The first `count` games of [`random_games`].
pub fn random_corpus(seed: u64, count: usize, max_n: usize, max_d: Priority) -> Vec<GameGraph> {
    random_games(seed, max_n, max_d).take(count).collect()
}

fn compare_winners(out: &mut Outcome, g: &GameGraph, cap: usize, label: &str) {
    match all_winners(g, cap) {
        Ok(w) => out.check(w.iter().all(|&p| p == w[0]), || {
            format!(
                "{label}: winners differ {w:?}\n{}",
                crate::format::render_game(g)
            )
        }),
        Err(e) => out.fail(format!("{label}: {e}")),
    }
}

/// Compares the random stream until `cfg.random_games` games got an answer
/// from every solver. Games whose product exceeds the cap are listed, not
/// counted; every other error fails.
fn oracle(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    let mut capped = Vec::new();
    for (i, g) in random_games(cfg.seed, 8, 6).enumerate() {
        if out.checked >= cfg.random_games {
            break;
        }
        match all_winners(&g, cfg.cap) {
            Ok(w) => out.check(w.iter().all(|&p| p == w[0]), || {
                format!(
                    "random game {i}: winners differ {w:?}\n{}",
                    crate::format::render_game(&g)
                )
            }),
            Err(WinnersError::Cap(_)) => capped.push(i),
            Err(e) => out.fail(format!("random game {i}: {e}")),
        }
    }
    let random = out.checked;
    for (n, max_out) in [(1, 2), (2, 4), (3, 2)] {
        for (i, g) in all_small_games(n, 2, max_out).iter().enumerate() {
            compare_winners(&mut out, g, cfg.cap, &format!("small game n={n} #{i}"));
        }
    }
    out.note(format!(
        "{random} random, {} exhaustive",
        out.checked - random
    ));
    if !capped.is_empty() {
        out.note(format!(
            "{} random games over the cap of {} nodes, not counted: {capped:?}",
            capped.len(),
            cfg.cap
        ));
    }
    out
}

/// Non-increasing sequences of length `len` over `1..=d`, by odometer.
fn count_monotone(len: usize, d: Priority) -> u128 {
    let mut digits = vec![1; len];
    let mut count = 0;
    loop {
        if digits.windows(2).all(|w| w[0] >= w[1]) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == len {
                return count;
            }
            digits[i] += 1;
            if digits[i] <= d {
                break;
            }
            digits[i] = 1;
            i += 1;
        }
    }
}

fn state_counts(_: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    for n in 1..=6 {
        for d in [2, 4, 6] {
            let r = rn(n);
            let eta = count_monotone(r, d);
            let xi = eta * (n as u128).pow(r as u32 + 1) + 1;
            out.check(count_states_r(n, d) == Ok(eta), || {
                format!("eta({n},{d}) != {eta}")
            });
            out.check(count_states_s(n, d) == Ok(xi), || {
                format!("xi({n},{d}) != {xi}")
            });
            let a = SafetyAutomaton::new(n, d).expect("valid parameters");
            out.check(
                a.register_automaton().all_states().len() as u128 == eta,
                || format!("R_{{{n},{d}}} lists a wrong number of states"),
            );
            out.check(a.all_states().len() as u128 == xi, || {
                format!("S_{{{n},{d}}} lists a wrong number of states")
            });
        }
    }
    out
}

/// Games for the product-size suite: every one-node game with `d <= 4`,
/// plus random games with `n <= 3`, `d <= 4`.
fn size_games(seed: u64) -> Vec<GameGraph> {
    let mut games = all_small_games(1, 4, 2);
    games.extend(random_corpus(seed ^ 0x5153, 60, 3, 4));
    games
}

fn product_sizes(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    for (i, g) in size_games(cfg.seed).iter().enumerate() {
        let (n, m) = (g.n() as u128, g.edge_count() as u128);
        let r = RegisterAutomaton::new(g.n(), g.d()).expect("valid parameters");
        let eta = count_states_r(g.n(), r.d()).expect("small");
        let regs = r.registers() as u128;
        match build_full_product(g, &r, cfg.cap) {
            Ok(p) => {
                out.check(p.node_count() as u128 == (n + m) * eta, || {
                    format!("game {i}: R product nodes")
                });
                out.check(p.edge_count() as u128 == m * eta * (regs + 2), || {
                    format!("game {i}: R product edges")
                });
                out.check(
                    well_formed(g, &p, |q, e| {
                        r.transitions(q, e)
                            .iter()
                            .map(|t| (t.priority, t.target.clone()))
                            .collect()
                    }),
                    || format!("game {i}: malformed R product"),
                );
            }
            Err(e) => out.fail(format!("game {i}: {e}")),
        }
        let s = SafetyAutomaton::new(g.n(), g.d()).expect("valid parameters");
        let xi = count_states_s(g.n(), s.d()).expect("small");
        match build_full_product(g, &s, cfg.cap) {
            Ok(p) => {
                out.check(p.node_count() as u128 == (n + m) * xi, || {
                    format!("game {i}: S product nodes")
                });
                out.check(p.edge_count() as u128 <= m * xi * (regs + 2), || {
                    format!("game {i}: S product edges")
                });
                out.check(
                    well_formed(g, &p, |q, e| {
                        s.transitions(q, e)
                            .into_iter()
                            .map(|t| (t.priority, t.target))
                            .collect()
                    }),
                    || format!("game {i}: malformed S product"),
                );
            }
            Err(e) => out.fail(format!("game {i}: {e}")),
        }
    }
    out
}

/// Every product edge comes from exactly one clause of the definition, and
/// every clause is present.
fn well_formed<S: Clone + Eq + std::hash::Hash>(
    g: &GameGraph,
    p: &crate::product::ProductGame<S>,
    transitions: impl Fn(&S, Letter) -> Vec<(Priority, S)>,
) -> bool {
    use std::collections::{BTreeSet, HashMap};
    let index: HashMap<(Position, &S), usize> = (0..p.node_count())
        .map(|v| ((p.position(v), p.state(v)), v))
        .collect();
    (0..p.node_count()).all(|v| {
        let q = p.state(v);
        let expected: Option<BTreeSet<(Priority, usize)>> = match p.position(v) {
            Position::Node(u) => g
                .out_edges(u)
                .iter()
                .map(|e| {
                    index
                        .get(&(Position::Edge(g.edge_index(e)?), q))
                        .map(|&w| (1, w))
                })
                .collect(),
            Position::Edge(i) => {
                let e = g.edges()[i];
                transitions(q, e)
                    .into_iter()
                    .map(|(pr, t)| index.get(&(Position::Node(e.target), &t)).map(|&w| (pr, w)))
                    .collect()
            }
        };
        let actual: BTreeSet<(Priority, usize)> = p
            .arena()
            .successors(v)
            .iter()
            .map(|&(pr, w)| (pr, w as usize))
            .collect();
        let owner_ok = match p.position(v) {
            Position::Node(u) => p.arena().owner(v) == g.owner(u),
            Position::Edge(_) => p.arena().owner(v) == Player::Even,
        };
        owner_ok
            && expected == Some(actual)
            && p.arena().successors(v).len()
                == p.arena()
                    .successors(v)
                    .iter()
                    .collect::<BTreeSet<_>>()
                    .len()
    })
}

fn strong_rejection(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    let corpus = random_corpus(cfg.seed ^ 0x0dd, cfg.rejection_games, 8, 6);
    let mut odd_games = 0;
    for (i, g) in corpus.iter().enumerate() {
        let strategy = match find_winning_strategy(g, Player::Odd, DEFAULT_STRATEGY_BOUND) {
            Ok(Some(s)) => s,
            Ok(None) => continue,
            Err(e) => {
                out.fail(format!("game {i}: {e}"));
                continue;
            }
        };
        odd_games += 1;
        let sg = strategy_subgraph(g, &strategy);
        for (j, w) in sample_plays(&sg, 20, 12, cfg.seed.wrapping_add(i as u64))
            .iter()
            .enumerate()
        {
            out.check(limsup_winner(w) == Player::Odd, || {
                format!("game {i} play {j}: {w} not won by Odd")
            });
            out.check(lasso_accepts_r(g.n(), g.d(), w) == Ok(false), || {
                format!("game {i} play {j}: R accepts {w}")
            });
            out.check(lasso_accepts_s(g.n(), g.d(), w) == Ok(false), || {
                format!("game {i} play {j}: S accepts {w}")
            });
        }
    }
    out.note(format!("{odd_games} games won by Odd"));
    out
}

/// Every lasso over `letters` with `|prefix| + |cycle| <= max_len`.
fn for_each_lasso(letters: &[Letter], max_len: usize, mut visit: impl FnMut(&LassoWord)) {
    for len in 1..=max_len {
        let mut digits = vec![0usize; len];
        'words: loop {
            let word: Vec<Letter> = digits.iter().map(|&i| letters[i]).collect();
            for split in 0..len {
                let w = LassoWord::new(word[..split].to_vec(), word[split..].to_vec())
                    .expect("nonempty cycle");
                visit(&w);
            }
            let mut i = 0;
            loop {
                if i == len {
                    break 'words;
                }
                digits[i] += 1;
                if digits[i] < letters.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

fn register_language(_: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    for n in 1..=2 {
        for d in [2, 4] {
            let letters: Vec<Letter> = (1..=n)
                .flat_map(|u| (1..=d).flat_map(move |p| (1..=n).map(move |v| Letter::new(u, p, v))))
                .collect();
            for_each_lasso(&letters, 5, |w| {
                let expected = limsup_winner(w) == Player::Even;
                out.check(lasso_accepts_r(n, d, w) == Ok(expected), || {
                    format!("n={n} d={d}: {w}")
                });
            });
        }
    }
    out
}

/// Triples for the witness-run suites: random games won by Even, one
/// brute-forced winning strategy each, and sampled plays.
fn witness_triples(
    cfg: &SuiteConfig,
) -> Vec<(GameGraph, crate::game::PositionalStrategy, Vec<LassoWord>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xbad);
    let mut triples = Vec::new();
    let mut plays = 0;
    while plays < cfg.witness_triples {
        let spec = GenSpec {
            n: rng.gen_range(1..=7),
            d: rng.gen_range(1..=6),
            density: rng.gen_range(1.0..3.0),
            even_bias: 0.5,
            seed: rng.gen(),
        };
        let g = gen_random(&spec);
        let Ok(Some(strategy)) = find_winning_strategy(&g, Player::Even, DEFAULT_STRATEGY_BOUND)
        else {
            continue;
        };
        let sg = strategy_subgraph(&g, &strategy);
        let ws = sample_plays(&sg, 5, 16, rng.gen());
        plays += ws.len();
        triples.push((g.clone(), strategy, ws));
    }
    triples
}

fn bad_bound(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    let mut worst = 0;
    for (i, (g, strategy, plays)) in witness_triples(cfg).iter().enumerate() {
        let sg = strategy_subgraph(g, strategy);
        let tree = match build_game_tree(&sg) {
            Ok(t) => t,
            Err(e) => {
                out.fail(format!("game {i}: {e}"));
                continue;
            }
        };
        let v_tau = sg.reachable().len();
        for w in plays {
            match build_witness_run_in(&tree, &sg, w, DEFAULT_FOLD_BUDGET) {
                Ok(run) => {
                    let bad = bad_of_lasso_run(&run);
                    if let Bad::Finite(b) = bad {
                        worst = worst.max(b);
                    }
                    out.check(bad <= Bad::Finite(v_tau - 1) && v_tau <= g.n(), || {
                        format!("game {i}: bad {bad} > |V_tau| - 1 = {} on {w}", v_tau - 1)
                    });
                }
                Err(e) => out.fail(format!("game {i}: {e} on {w}")),
            }
        }
    }
    out.note(format!("largest bad {worst}"));
    out
}

fn lift(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    for (i, (g, strategy, plays)) in witness_triples(cfg).iter().enumerate() {
        let sg = strategy_subgraph(g, strategy);
        let Ok(tree) = build_game_tree(&sg) else {
            out.fail(format!("game {i}: no game tree"));
            continue;
        };
        for w in plays {
            match build_witness_run_in(&tree, &sg, w, DEFAULT_FOLD_BUDGET) {
                Ok(run) => {
                    let lifted = lift_to_safety(g.n(), g.d(), &run, DEFAULT_FOLD_BUDGET);
                    out.check(lifted.is_ok(), || format!("game {i}: {lifted:?} on {w}"));
                }
                Err(e) => out.fail(format!("game {i}: {e} on {w}")),
            }
        }
    }
    out
}

fn adversary(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    for n in [2, 4] {
        let d = 2 * rn(n) as Priority + 2;
        let strategies: [(&str, Box<dyn TransitionStrategy>); 3] = [
            ("never-reset", Box::new(NeverReset)),
            ("lowest-odd-register", Box::new(LowestOddRegister)),
            ("seeded-random", Box::new(SeededRandom { seed: cfg.seed })),
        ];
        for (name, mut s) in strategies {
            match adversarial_word_vs_strategy(n, d, s.as_mut(), 1_000_000) {
                Ok(o) => out.check(o.verdict == Verdict::StrategyFails, || {
                    format!(
                        "n={n} {name}: run accepting={} on {} won by {}",
                        o.run_accepting, o.word, o.word_winner
                    )
                }),
                Err(e) => out.fail(format!("n={n} {name}: {e}")),
            }
        }
    }
    out
}

fn safety_gap(_: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    for n in [1, 2] {
        for d in [2, 4] {
            match rejected_even_word(n, d) {
                Ok(w) => {
                    out.check(limsup_winner(&w) == Player::Even, || {
                        format!("n={n} d={d}: {w} not LimsupEven")
                    });
                    out.check(lasso_accepts_s(n, d, &w) == Ok(false), || {
                        format!("n={n} d={d}: S accepts {w}")
                    });
                    out.note(format!("n={n} d={d}: k={}", w.prefix.len() - 1));
                }
                Err(e) => out.fail(format!("n={n} d={d}: {e}")),
            }
        }
    }
    out
}

/// The game with every node split into two copies, each edge switching copy.
/// Plays of the cover read the same priorities as plays of `g`.
pub fn double_cover(g: &GameGraph) -> GameGraph {
    let n = g.n();
    let owners = g.owners().iter().chain(g.owners()).copied().collect();
    let edges = g.edges().iter().flat_map(|e| {
        [
            Letter::new(e.source, e.priority, e.target + n),
            Letter::new(e.source + n, e.priority, e.target),
        ]
    });
    GameGraph::new(owners, g.start(), edges).expect("cover keeps out-degrees")
}

/// Fastest of `reps` solves; noise from other work only adds time.
fn fastest_solve_time<S>(p: &crate::product::ProductGame<S>, reps: usize) -> Duration {
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(solve_safety_product(std::hint::black_box(p)));
            t.elapsed()
        })
        .min()
        .expect("at least one repetition")
}

/// Ratio of fastest safety-solve times between a game's double cover and the
/// game itself, with the same automaton, when the cover doubles the product
/// up to 0.1% of its edges.
fn linearity(cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x11);
    let mut attempts = 0;
    let mut worst: f64 = 0.0;
    while out.checked < 5 && attempts < 1000 {
        attempts += 1;
        let spec = GenSpec {
            n: 4,
            d: 4,
            density: 2.0,
            even_bias: 0.5,
            seed: rng.gen(),
        };
        let g = gen_random(&spec);
        // Odd cycles through the start let the cover reach both copies.
        if !g.out_edges(g.start()).iter().any(|e| e.target == g.start()) {
            continue;
        }
        let cover = double_cover(&g);
        let a = SafetyAutomaton::new(cover.n(), g.d()).expect("valid parameters");
        let (Ok(small), Ok(big)) = (
            build_product(&g, &a, cfg.cap / 4),
            build_product(&cover, &a, cfg.cap),
        ) else {
            continue;
        };
        let doubled = 2 * small.edge_count();
        if small.edge_count() < 1_500_000 || big.edge_count().abs_diff(doubled) * 1000 > doubled {
            continue;
        }
        let t1 = fastest_solve_time(&small, 15);
        let t2 = fastest_solve_time(&big, 15);
        let ratio = t2.as_secs_f64() / t1.as_secs_f64();
        worst = worst.max(ratio);
        out.check(ratio < 3.0, || {
            format!(
                "{} -> {} edges: {t1:?} -> {t2:?} (x{ratio:.2})",
                small.edge_count(),
                big.edge_count()
            )
        });
    }
    if out.checked < 5 {
        out.fail(format!(
            "only {} families in {attempts} attempts",
            out.checked
        ));
    }
    out.note(format!("worst ratio x{worst:.2}"));
    out
}
