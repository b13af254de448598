//! The `parikh` command-line tool.
//!
//! [`run`] parses arguments, dispatches to `parikh-core` and writes either
//! plain text or compact JSON. Exit codes: 0 affirmative, 1 negative (or the
//! requested rule does not apply), 2 usage error, 3 inconclusive.

use std::ffi::OsString;
use std::io::Write;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use parikh_core::search::{DEFAULT_FACTOR_CAP, DEFAULT_MAX_STEPS, DEFAULT_NODE_CAP};
use parikh_core::{
    analyze, apply_alpha_beta, apply_e1, apply_se, apply_strong_2t, apply_strong_3t,
    check_strong_not_mse, count_factor, count_subword, decompose, detect_alpha_beta_sites,
    detect_strong_2t, detect_strong_3t, enumerate_class, irreducible_family, m_equivalent,
    msae_search, mse_equivalent, parikh_matrix, predict_pair_swap_deltas, strong_2t_only_family,
    strong_3t_only_family, strongly_m_equivalent, validate_classic_2t, Alphabet, ClassMode,
    Counter, Derivation, DerivationStep, Detection3t, Error, FactorClass, Letter, MsaeOutcome,
    MseOutcome, OrderedAlphabet, ParikhMatrix, SwapSpec, TripleFactor, TripleFactorSpec, Word,
};
use serde_json::{json, Value};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPPED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "parikh",
    version,
    about = "Parikh matrices and M-equivalence of words"
)]
struct Cli {
    /// Letters of the alphabet, in registration order.
    #[arg(long, global = true, default_value = "abc")]
    alphabet: String,

    /// Ordering such as "a<b<c" (default: registration order).
    #[arg(long, global = true)]
    order: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Maximum number of states a search may visit.
    #[arg(long, global = true, env = "PARIKH_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,

    /// Maximum derivation length for `search msae`.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,

    /// Maximum number of differing blocks for `detect s3t`.
    #[arg(long, global = true, default_value_t = DEFAULT_FACTOR_CAP)]
    factor_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parikh matrix of a word under the ordering.
    Matrix { word: String },
    /// Occurrences of a pattern as a scattered subword (or a factor).
    Count {
        word: String,
        pattern: String,
        #[arg(long)]
        factor: bool,
    },
    /// Whether two words share a Parikh matrix under the ordering.
    Equiv { first: String, second: String },
    /// Whether two words share Parikh matrices under every ordering.
    StrongEquiv { first: String, second: String },
    /// All anagrams of a word in its (strong) M-equivalence class.
    Class {
        word: String,
        #[arg(long)]
        strong: bool,
    },
    /// Apply one rewriting rule.
    Transform {
        #[command(subcommand)]
        rule: Rule,
    },
    /// pq pairs, validity, reducibility and decomposition of a strong (2·t) spec.
    Irreducible(SwapArgs),
    /// Split a strong (2·t) transformation into irreducible stages.
    Decompose(SwapArgs),
    /// Find a transformation between two words, or the αβ-sites of one word.
    Detect {
        #[command(subcommand)]
        kind: DetectKind,
    },
    /// Bounded search for SE or counter-balanced αβ derivations.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
    /// Generate an example family member.
    Family {
        #[command(subcommand)]
        kind: FamilyKind,
    },
    /// Check that a strong (2·t) image is not reachable by Rule SE.
    NotMse(SwapArgs),
}

#[derive(Debug, clap::Args)]
struct SwapArgs {
    word: String,
    /// Letter pair, first letter first, e.g. "ab".
    #[arg(long)]
    pair: String,
    /// Block start positions, e.g. "0,3,5,8".
    #[arg(long, value_delimiter = ',', required = true)]
    blocks: Vec<usize>,
}

#[derive(Debug, Subcommand)]
enum Rule {
    /// Rule E1 at one position.
    E1 {
        word: String,
        #[arg(long)]
        pos: usize,
    },
    /// Rule SE at a pair of blocks.
    Se {
        word: String,
        #[arg(long)]
        first: usize,
        #[arg(long)]
        second: usize,
    },
    /// Strong (2·t) transformation.
    S2t(SwapArgs),
    /// Strong (3·t) transformation; factors as "start-end:CLASS".
    S3t {
        word: String,
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<String>,
    },
    /// Check the side conditions of a classic (2·t) transformation.
    Classic2t {
        #[command(flatten)]
        swap: SwapArgs,
        /// Block index pairs, e.g. "0-1,2-3".
        #[arg(long, value_delimiter = ',', required = true)]
        grouping: Vec<String>,
    },
    /// αβ-step with its counter.
    Alphabeta {
        word: String,
        #[arg(long)]
        first: usize,
        #[arg(long)]
        second: usize,
    },
    /// Predicted subword-count changes of an ab…ba swap.
    Deltas {
        word: String,
        #[arg(long)]
        first: usize,
        #[arg(long)]
        second: usize,
    },
}

#[derive(Debug, Subcommand)]
enum DetectKind {
    S2t { first: String, second: String },
    S3t { first: String, second: String },
    Sites { word: String },
}

#[derive(Debug, Subcommand)]
enum SearchKind {
    Mse { first: String, second: String },
    Msae { first: String, second: String },
}

#[derive(Debug, Subcommand)]
enum FamilyKind {
    /// Irreducible strong (2·t) transformations.
    Irreducible { n: usize },
    /// Strong (2·t) with no strong (3·t) counterpart.
    Not3t { n: usize },
    /// Strong (3·t) with no strong (2·t) counterpart.
    Not2t { n: usize },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// What a command prints, in both formats, and its exit code.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn yes(text: impl Into<String>, json: Value) -> Report {
        Report {
            text: text.into(),
            json,
            code: EXIT_YES,
        }
    }

    fn with_code(mut self, code: i32) -> Report {
        self.code = code;
        self
    }
}

struct Context {
    alphabet: Alphabet,
    ordering: OrderedAlphabet,
    node_cap: usize,
    max_steps: usize,
    factor_cap: usize,
}

impl Context {
    fn word(&self, text: &str) -> Outcome<Word> {
        Ok(self.alphabet.parse_word(text)?)
    }

    fn pair(&self, text: &str) -> Outcome<(Letter, Letter)> {
        let letters: Vec<char> = text.chars().collect();
        let [x, y] = letters[..] else {
            return Err(Failure::Usage(format!(
                "pair must be two letters, got {text:?}"
            )));
        };
        let find = |ch: char| {
            self.alphabet
                .letter(ch)
                .ok_or_else(|| Failure::Usage(format!("{ch:?} is not in the alphabet")))
        };
        Ok((find(x)?, find(y)?))
    }

    fn swap(&self, args: &SwapArgs) -> Outcome<(Word, SwapSpec)> {
        let w = self.word(&args.word)?;
        let spec = SwapSpec::locate(&w, self.pair(&args.pair)?, &args.blocks)?;
        Ok((w, spec))
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let path = command_path(&cli.command);
    let format = cli.output;
    match execute(cli) {
        Ok(report) => {
            let _ = match format {
                Output::Text => writeln!(out, "{}", report.text),
                Output::Json => writeln!(out, "{}", report.json),
            };
            report.code
        }
        Err(failure) => {
            let (message, code) = match failure {
                Failure::Usage(m) => (m, EXIT_USAGE),
                Failure::Core(e) => {
                    let code = exit_code(&e);
                    (e.to_string(), code)
                }
            };
            let _ = writeln!(err, "error: {message}");
            if code == EXIT_USAGE {
                let _ = writeln!(err, "{}", synopsis(&path));
            }
            code
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotE1 { .. }
        | Error::NotSe { .. }
        | Error::NotStrong2t { .. }
        | Error::NotStrong3t { .. }
        | Error::NotAlphaBeta { .. }
        | Error::Shape(_) => EXIT_NO,
        Error::Cap { .. } => EXIT_CAPPED,
        _ => EXIT_USAGE,
    }
}

fn command_path(command: &Command) -> Vec<&'static str> {
    match command {
        Command::Matrix { .. } => vec!["matrix"],
        Command::Count { .. } => vec!["count"],
        Command::Equiv { .. } => vec!["equiv"],
        Command::StrongEquiv { .. } => vec!["strong-equiv"],
        Command::Class { .. } => vec!["class"],
        Command::Transform { rule } => vec![
            "transform",
            match rule {
                Rule::E1 { .. } => "e1",
                Rule::Se { .. } => "se",
                Rule::S2t(_) => "s2t",
                Rule::S3t { .. } => "s3t",
                Rule::Classic2t { .. } => "classic2t",
                Rule::Alphabeta { .. } => "alphabeta",
                Rule::Deltas { .. } => "deltas",
            },
        ],
        Command::Irreducible(_) => vec!["irreducible"],
        Command::Decompose(_) => vec!["decompose"],
        Command::Detect { kind } => vec![
            "detect",
            match kind {
                DetectKind::S2t { .. } => "s2t",
                DetectKind::S3t { .. } => "s3t",
                DetectKind::Sites { .. } => "sites",
            },
        ],
        Command::Search { kind } => vec![
            "search",
            match kind {
                SearchKind::Mse { .. } => "mse",
                SearchKind::Msae { .. } => "msae",
            },
        ],
        Command::Family { kind } => vec![
            "family",
            match kind {
                FamilyKind::Irreducible { .. } => "irreducible",
                FamilyKind::Not3t { .. } => "not3t",
                FamilyKind::Not2t { .. } => "not2t",
            },
        ],
        Command::NotMse(_) => vec!["not-mse"],
    }
}

fn synopsis(path: &[&str]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    // after build() every subcommand knows its full bin name
    let mut current = cmd;
    for name in path {
        match current.find_subcommand(name) {
            Some(sub) => current = sub.clone(),
            None => break,
        }
    }
    current.render_usage().to_string()
}

fn execute(cli: Cli) -> Outcome<Report> {
    let alphabet = Alphabet::parse(&cli.alphabet)?;
    let ordering = match &cli.order {
        Some(text) => OrderedAlphabet::parse(text, &alphabet)?,
        None => OrderedAlphabet::natural(&alphabet),
    };
    let ctx = Context {
        alphabet,
        ordering,
        node_cap: cli.node_cap,
        max_steps: cli.max_steps,
        factor_cap: cli.factor_cap,
    };
    match cli.command {
        Command::Matrix { word } => matrix(&ctx, &word),
        Command::Count {
            word,
            pattern,
            factor,
        } => count(&ctx, &word, &pattern, factor),
        Command::Equiv { first, second } => {
            let (w, v) = (ctx.word(&first)?, ctx.word(&second)?);
            let eq = m_equivalent(&w, &v, &ctx.ordering)?;
            let text = if eq {
                "M-equivalent"
            } else {
                "not M-equivalent"
            };
            let json = json!({"equivalent": eq, "ordering": ctx.ordering.to_string()});
            Ok(Report::yes(text, json).with_code(if eq { EXIT_YES } else { EXIT_NO }))
        }
        Command::StrongEquiv { first, second } => {
            let (w, v) = (ctx.word(&first)?, ctx.word(&second)?);
            let eq = strongly_m_equivalent(&w, &v)?;
            let text = if eq {
                "strongly M-equivalent"
            } else {
                "not strongly M-equivalent"
            };
            Ok(
                Report::yes(text, json!({"strongly_equivalent": eq})).with_code(if eq {
                    EXIT_YES
                } else {
                    EXIT_NO
                }),
            )
        }
        Command::Class { word, strong } => {
            let w = ctx.word(&word)?;
            let mode = if strong {
                ClassMode::Strong
            } else {
                ClassMode::M(ctx.ordering.clone())
            };
            let class: Vec<String> = enumerate_class(&w, &mode)?
                .iter()
                .map(Word::to_string)
                .collect();
            let json = json!({"size": class.len(), "words": class});
            Ok(Report::yes(class.join("\n"), json))
        }
        Command::Transform { rule } => transform(&ctx, rule),
        Command::Irreducible(args) => irreducible(&ctx, &args),
        Command::Decompose(args) => {
            let (w, spec) = ctx.swap(&args)?;
            let stages = decompose(&w, &spec)?;
            let text = stages
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    format!(
                        "stage {}: {} -> {} (blocks {})",
                        i + 1,
                        s.source,
                        s.target,
                        join(&s.spec.positions())
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let json = Value::Array(
                stages
                    .iter()
                    .map(|s| {
                        json!({"source": s.source.to_string(), "target": s.target.to_string(),
                               "blocks": s.spec.positions()})
                    })
                    .collect(),
            );
            Ok(Report::yes(text, json))
        }
        Command::Detect { kind } => detect(&ctx, kind),
        Command::Search { kind } => search(&ctx, kind),
        Command::Family { kind } => family(kind),
        Command::NotMse(args) => {
            let (w, spec) = ctx.swap(&args)?;
            let r = check_strong_not_mse(&w, &spec)?;
            let text = format!(
                "{}\n{}",
                r.image,
                if r.confirmed {
                    "strongly M-equivalent but not MSE-equivalent"
                } else {
                    "not confirmed"
                }
            );
            let json = json!({"image": r.image.to_string(), "confirmed": r.confirmed});
            Ok(Report::yes(text, json).with_code(if r.confirmed { EXIT_YES } else { EXIT_NO }))
        }
    }
}

fn join(items: &[usize]) -> String {
    items
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn matrix(ctx: &Context, word: &str) -> Outcome<Report> {
    let w = ctx.word(word)?;
    // entries beyond u64 are printed as JSON strings
    let (text, rows) = match parikh_matrix::<u64>(&w, &ctx.ordering) {
        Ok(m) => (m.to_string(), rows_json(&m, |c| json!(c))),
        Err(Error::Overflow) => {
            let m: ParikhMatrix<BigUint> = parikh_matrix(&w, &ctx.ordering)?;
            let cell = |c: &BigUint| match u64::try_from(c) {
                Ok(small) => json!(small),
                Err(_) => json!(c.to_string()),
            };
            (m.to_string(), rows_json(&m, cell))
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Report::yes(text, rows))
}

fn rows_json<C: parikh_core::Count>(m: &ParikhMatrix<C>, cell: impl Fn(&C) -> Value) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(&cell).collect()))
            .collect(),
    )
}

fn count(ctx: &Context, word: &str, pattern: &str, factor: bool) -> Outcome<Report> {
    let w = ctx.word(word)?;
    let v = ctx.word(pattern)?;
    let n = if factor {
        count_factor(&w, &v)?.to_string()
    } else {
        match count_subword::<u64>(&w, &v) {
            Ok(n) => n.to_string(),
            Err(Error::Overflow) => count_subword::<BigUint>(&w, &v)?.to_string(),
            Err(e) => return Err(e.into()),
        }
    };
    let json = match n.parse::<u64>() {
        Ok(small) => json!(small),
        Err(_) => json!(n),
    };
    Ok(Report::yes(n, json))
}

fn counter_json(c: Counter) -> Value {
    json!([c.abc, c.acb, c.bac])
}

fn parse_factors(items: &[String]) -> Outcome<TripleFactorSpec> {
    let bad = |item: &str| {
        Failure::Usage(format!(
            "factor {item:?} is not of the form start-end:CLASS"
        ))
    };
    let mut factors = Vec::new();
    for item in items {
        let (span, class) = item.split_once(':').ok_or_else(|| bad(item))?;
        let (start, end) = span.split_once('-').ok_or_else(|| bad(item))?;
        factors.push(TripleFactor {
            start: start.trim().parse().map_err(|_| bad(item))?,
            end: end.trim().parse().map_err(|_| bad(item))?,
            class: FactorClass::parse(class.trim()).ok_or_else(|| bad(item))?,
        });
    }
    Ok(TripleFactorSpec::new(factors)?)
}

fn parse_grouping(items: &[String]) -> Outcome<Vec<(usize, usize)>> {
    items
        .iter()
        .map(|item| {
            let bad = || Failure::Usage(format!("group {item:?} is not of the form i-j"));
            let (i, j) = item.split_once('-').ok_or_else(bad)?;
            Ok((
                i.trim().parse().map_err(|_| bad())?,
                j.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn factors_text(spec: &TripleFactorSpec) -> String {
    spec.factors()
        .iter()
        .map(|f| format!("{}-{}:{}", f.start, f.end, f.class))
        .collect::<Vec<_>>()
        .join(",")
}

fn factors_json(spec: &TripleFactorSpec) -> Value {
    Value::Array(
        spec.factors()
            .iter()
            .map(|f| json!({"start": f.start, "end": f.end, "class": f.class.name()}))
            .collect(),
    )
}

fn word_report(w: Word) -> Report {
    Report::yes(w.to_string(), json!({"word": w.to_string()}))
}

fn transform(ctx: &Context, rule: Rule) -> Outcome<Report> {
    match rule {
        Rule::E1 { word, pos } => Ok(word_report(apply_e1(
            &ctx.word(&word)?,
            pos,
            &ctx.ordering,
        )?)),
        Rule::Se {
            word,
            first,
            second,
        } => Ok(word_report(apply_se(&ctx.word(&word)?, first, second)?)),
        Rule::S2t(args) => {
            let (w, spec) = ctx.swap(&args)?;
            Ok(word_report(apply_strong_2t(&w, &spec)?))
        }
        Rule::S3t { word, factors } => {
            let w = ctx.word(&word)?;
            Ok(word_report(apply_strong_3t(&w, &parse_factors(&factors)?)?))
        }
        Rule::Classic2t { swap, grouping } => {
            let (w, spec) = ctx.swap(&swap)?;
            let groups = parse_grouping(&grouping)?;
            let valid = validate_classic_2t(&w, &spec, &groups, &ctx.ordering)?;
            let image = spec.rewrite(&w)?.to_string();
            let text = if valid {
                format!("{image}\nvalid")
            } else {
                "not valid".to_string()
            };
            let json =
                json!({"valid": valid, "word": if valid { json!(image) } else { Value::Null }});
            Ok(Report::yes(text, json).with_code(if valid { EXIT_YES } else { EXIT_NO }))
        }
        Rule::Alphabeta {
            word,
            first,
            second,
        } => {
            let (v, counter) = apply_alpha_beta(&ctx.word(&word)?, first, second)?;
            Ok(Report::yes(
                format!("{v}\ncounter {counter}"),
                json!({"word": v.to_string(), "counter": counter_json(counter)}),
            ))
        }
        Rule::Deltas {
            word,
            first,
            second,
        } => {
            let d = predict_pair_swap_deltas(&ctx.word(&word)?, first, second)?;
            let rows = [
                ("abc", d.abc),
                ("cba", d.cba),
                ("bac", d.bac),
                ("cab", d.cab),
                ("acb", d.acb),
                ("bca", d.bca),
            ];
            let text = rows
                .iter()
                .map(|(k, v)| format!("{k} {v}"))
                .collect::<Vec<_>>()
                .join("\n");
            let json = Value::Object(
                rows.iter()
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect(),
            );
            Ok(Report::yes(text, json))
        }
    }
}

fn irreducible(ctx: &Context, args: &SwapArgs) -> Outcome<Report> {
    let (w, spec) = ctx.swap(args)?;
    let r = analyze(&w, &spec)?;
    let stages = if r.valid {
        decompose(&w, &spec)?
    } else {
        Vec::new()
    };
    let pairs = r
        .pairs
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let mut text = vec![
        format!("pq: {pairs}"),
        format!("valid: {}", r.valid),
        format!("reducible: {}", r.reducible),
        format!(
            "witness: {}",
            r.witness.as_deref().map_or("none".to_string(), join)
        ),
    ];
    for (i, s) in stages.iter().enumerate() {
        text.push(format!(
            "stage {}: {} -> {} (blocks {})",
            i + 1,
            s.source,
            s.target,
            join(&s.spec.positions())
        ));
    }
    let json = json!({
        "pairs": r.pairs.iter().map(|p| json!([p.p, p.q])).collect::<Vec<_>>(),
        "valid": r.valid,
        "reducible": r.reducible,
        "witness": r.witness,
        "stages": stages.iter().map(|s| json!({
            "source": s.source.to_string(),
            "target": s.target.to_string(),
            "blocks": s.spec.positions(),
        })).collect::<Vec<_>>(),
    });
    let code = if r.valid && !r.reducible {
        EXIT_YES
    } else {
        EXIT_NO
    };
    Ok(Report::yes(text.join("\n"), json).with_code(code))
}

fn detect(ctx: &Context, kind: DetectKind) -> Outcome<Report> {
    match kind {
        DetectKind::S2t { first, second } => {
            let (w, v) = (ctx.word(&first)?, ctx.word(&second)?);
            Ok(match detect_strong_2t(&w, &v)? {
                Some(spec) => {
                    let (x, y) = spec.pair();
                    let pair: String = [x, y].iter().map(|&l| w.alphabet().char_of(l)).collect();
                    Report::yes(
                        format!("pair {pair} blocks {}", join(&spec.positions())),
                        json!({"found": true, "pair": pair, "blocks": spec.positions()}),
                    )
                }
                None => Report::yes("none", json!({"found": false})).with_code(EXIT_NO),
            })
        }
        DetectKind::S3t { first, second } => {
            let (w, v) = (ctx.word(&first)?, ctx.word(&second)?);
            Ok(match detect_strong_3t(&w, &v, ctx.factor_cap)? {
                Detection3t::Found(spec) => Report::yes(
                    factors_text(&spec),
                    json!({"found": true, "factors": factors_json(&spec)}),
                ),
                Detection3t::NotFound => {
                    Report::yes("none", json!({"found": false})).with_code(EXIT_NO)
                }
                Detection3t::Capped { blocks } => Report::yes(
                    format!("inconclusive: {blocks} differing blocks exceed the factor cap"),
                    json!({"found": Value::Null, "capped": true, "blocks": blocks}),
                )
                .with_code(EXIT_CAPPED),
            })
        }
        DetectKind::Sites { word } => {
            let sites = detect_alpha_beta_sites(&ctx.word(&word)?);
            let text = sites
                .iter()
                .map(|(i, j)| format!("{i} {j}"))
                .collect::<Vec<_>>()
                .join("\n");
            let json = Value::Array(sites.iter().map(|(i, j)| json!([i, j])).collect());
            Ok(Report::yes(text, json))
        }
    }
}

fn step_json(step: &DerivationStep) -> Value {
    match step {
        DerivationStep::Se { first, second } => {
            json!({"rule": step.name(), "first": first, "second": second})
        }
        DerivationStep::E1 { pos, ordering } => {
            json!({"rule": step.name(), "pos": pos, "ordering": ordering.to_string()})
        }
        DerivationStep::Strong2t(spec) => json!({"rule": step.name(), "blocks": spec.positions()}),
        DerivationStep::Strong3t(spec) => {
            json!({"rule": step.name(), "factors": factors_json(spec)})
        }
        DerivationStep::AlphaBeta {
            first,
            second,
            counter,
        } => json!({"rule": step.name(), "first": first, "second": second,
                    "counter": counter_json(*counter)}),
    }
}

fn derivation_report(d: &Derivation, verdict: &str) -> Outcome<Report> {
    let words = d.words()?;
    let mut text = vec![format!("{verdict} ({} steps)", d.len())];
    for (step, word) in d.steps.iter().zip(&words[1..]) {
        let detail = match step {
            DerivationStep::AlphaBeta {
                first,
                second,
                counter,
            } => format!("{} {first} {second} counter {counter}", step.name()),
            DerivationStep::Se { first, second } => format!("{} {first} {second}", step.name()),
            other => other.name().to_string(),
        };
        text.push(format!("{detail} -> {word}"));
    }
    let json = json!({
        "found": true,
        "start": d.start.to_string(),
        "steps": d.steps.iter().map(step_json).collect::<Vec<_>>(),
        "words": words.iter().map(Word::to_string).collect::<Vec<_>>(),
    });
    Ok(Report::yes(text.join("\n"), json))
}

fn search(ctx: &Context, kind: SearchKind) -> Outcome<Report> {
    let capped = |explored: usize| {
        Report::yes(
            format!("inconclusive: node cap reached after {explored} states"),
            json!({"found": Value::Null, "capped": true, "explored": explored}),
        )
        .with_code(EXIT_CAPPED)
    };
    match kind {
        SearchKind::Mse { first, second } => {
            let (w, v) = (ctx.word(&first)?, ctx.word(&second)?);
            match mse_equivalent(&w, &v, ctx.node_cap)? {
                MseOutcome::Equivalent(d) => derivation_report(&d, "MSE-equivalent"),
                MseOutcome::NotEquivalent { explored } => Ok(Report::yes(
                    format!("not MSE-equivalent (closure of {explored} words exhausted)"),
                    json!({"found": false, "explored": explored}),
                )
                .with_code(EXIT_NO)),
                MseOutcome::Capped { explored } => Ok(capped(explored)),
            }
        }
        SearchKind::Msae { first, second } => {
            let (w, v) = (ctx.word(&first)?, ctx.word(&second)?);
            match msae_search(&w, &v, ctx.max_steps, ctx.node_cap)? {
                MsaeOutcome::Found(d) => derivation_report(&d, "MSAE derivation found"),
                MsaeOutcome::NoneFound { explored } => Ok(Report::yes(
                    format!(
                        "no MSAE derivation within {} steps ({explored} states)",
                        ctx.max_steps
                    ),
                    json!({"found": false, "explored": explored}),
                )
                .with_code(EXIT_NO)),
                MsaeOutcome::Capped { explored } => Ok(capped(explored)),
            }
        }
    }
}

fn family(kind: FamilyKind) -> Outcome<Report> {
    let swap_report = |f: parikh_core::Family<SwapSpec>| {
        Report::yes(
            format!(
                "{}\n{}\nblocks {}",
                f.word,
                f.image,
                join(&f.spec.positions())
            ),
            json!({"word": f.word.to_string(), "image": f.image.to_string(),
                   "blocks": f.spec.positions()}),
        )
    };
    Ok(match kind {
        FamilyKind::Irreducible { n } => swap_report(irreducible_family(n)?),
        FamilyKind::Not3t { n } => swap_report(strong_2t_only_family(n)?),
        FamilyKind::Not2t { n } => {
            let f = strong_3t_only_family(n)?;
            Report::yes(
                format!("{}\n{}\nfactors {}", f.word, f.image, factors_text(&f.spec)),
                json!({"word": f.word.to_string(), "image": f.image.to_string(),
                       "factors": factors_json(&f.spec)}),
            )
        }
    })
}
