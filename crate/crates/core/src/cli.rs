//! Command-line surface: argument model, dispatch and rendering.

use std::collections::BTreeSet;
use std::fmt::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::alphabet::{parse_alphabet, parse_alphabet_for_words, AlphabetPoset};
use crate::chains::{bracketed_id, enumerate_chains, ChainRow, format_table, parse_chain_id, render_chain_table, MaximalChain, TableFormat};
use crate::error::{Error, Result};
use crate::formulas::{bjorner_mu, mu_formula};
use crate::interval::{mobius_recursive, Interval};
use crate::morse::matching::DEFAULT_SIMPLEX_CAP;
use crate::morse::{analysed_chains, build_matching, census_euler, homotopy_report, mobius_via_critical, validate_matching, HomotopyType};
use crate::verify::{sweep, SweepConfig};
use crate::words::{is_factor, parse_word, render_word, Word};

#[derive(Debug, Parser)]
#[command(name = "factor-mobius", version, about = "Möbius function of generalized factor order")]
pub struct Cli {
    /// `antichain:a,b`, `chain:N`, `chain:auto`, `forest:<name> <parent|root>;...`,
    /// or `auto` to infer from the words.
    #[arg(long, global = true, default_value = "auto")]
    pub alphabet: String,
    #[arg(long, global = true, value_enum, default_value_t = Method::All)]
    pub method: Method,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest interval, chain list or complex to build.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,
    #[arg(long, global = true, default_value_t = 4)]
    pub max_word_len: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursive,
    Euler,
    Critical,
    Formula,
    Bjorner,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print μ(u, w).
    Mobius { u: String, w: String },
    /// Maximal chains of [u, w] with their embeddings.
    Chains { u: String, w: String },
    /// Minimally skipped intervals and J(C) of every chain.
    Msis { u: String, w: String },
    /// Critical chains, the critical-cell census and the homotopy type.
    Critical { u: String, w: String },
    /// The explicit Morse matching on the order complex.
    Matching { u: String, w: String },
    /// Hasse diagram as a DOT digraph.
    Hasse { u: String, w: String },
    /// Cross-check every route over all small pairs plus random samples.
    Verify,
}

/// Text to print and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Cycle(_)
        | Error::DuplicateLetter(_)
        | Error::AlphabetMismatch
        | Error::NotComparable { .. }
        | Error::NotAntichain
        | Error::EmptyBottomWord
        | Error::Length => 2,
        Error::SizeCapExceeded { .. } => 3,
        Error::Disagreement { .. } => 4,
        Error::Invariant(_) | Error::Structural { .. } => 5,
        _ => 1,
    }
}

/// Runs a parsed command line; errors carry their exit code via [`exit_code`].
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Mobius { u, w } => cmd_mobius(cli, u, w),
        Command::Chains { u, w } => cmd_chains(cli, u, w),
        Command::Msis { u, w } => cmd_msis(cli, u, w),
        Command::Critical { u, w } => cmd_critical(cli, u, w),
        Command::Matching { u, w } => cmd_matching(cli, u, w),
        Command::Hasse { u, w } => cmd_hasse(cli, u, w),
        Command::Verify => cmd_verify(cli),
    }
}

/// Parses argv, runs, and returns the outcome with errors folded in.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match run(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

/// Alphabet for the given words; `auto` picks `chain:auto` for digit words
/// and the antichain on the letters used otherwise.
pub fn resolve_alphabet(spec: &str, words: &[&str]) -> Result<AlphabetPoset> {
    if spec.trim() != "auto" {
        return parse_alphabet_for_words(spec, words);
    }
    let letters: BTreeSet<char> = words.iter().flat_map(|w| w.chars()).filter(|c| *c != ',' && *c != 'ε').collect();
    if letters.is_empty() {
        return Err(Error::Parse("cannot infer an alphabet from empty words; pass --alphabet".into()));
    }
    if letters.iter().all(|c| ('1'..='9').contains(c)) {
        return parse_alphabet_for_words("chain:auto", words);
    }
    if words.iter().any(|w| w.contains(',')) {
        return Err(Error::Parse("comma-separated words need an explicit --alphabet".into()));
    }
    let names: Vec<String> = letters.iter().map(char::to_string).collect();
    AlphabetPoset::antichain(&names)
}

fn table_format(f: Format) -> Result<TableFormat> {
    match f {
        Format::Text => Ok(TableFormat::Text),
        Format::Tsv => Ok(TableFormat::Tsv),
        Format::Dot => Err(Error::Parse("--format dot only applies to `hasse`".into())),
    }
}

fn cap_or(cli: &Cli, default: usize) -> usize {
    cli.cap.map_or(default, |c| usize::try_from(c).unwrap_or(usize::MAX))
}

struct Pair {
    alpha: AlphabetPoset,
    u: Word,
    w: Word,
}

impl Pair {
    fn parse(cli: &Cli, u: &str, w: &str) -> Result<Pair> {
        let alpha = resolve_alphabet(&cli.alphabet, &[u, w])?;
        let u = parse_word(&alpha, u)?;
        let w = parse_word(&alpha, w)?;
        Ok(Pair { alpha, u, w })
    }

    fn interval(&self, cap: usize) -> Result<Interval<'_>> {
        Interval::with_cap(&self.alpha, &self.u, &self.w, cap)
    }

    fn show(&self, x: &Word) -> String {
        render_word(&self.alpha, x)
    }
}

/// Values reported by `mobius --method all`, in print order; `None` marks
/// a method that does not apply.
pub fn mobius_values(alpha: &AlphabetPoset, u: &Word, w: &Word, cap: usize) -> Result<Vec<(&'static str, Option<i64>)>> {
    if !is_factor(alpha, u, w) {
        return Ok(["recursive", "euler", "critical", "formula"].map(|m| (m, Some(0))).to_vec());
    }
    let iv = Interval::with_cap(alpha, u, w, cap)?;
    let rec = iv.mobius_table()[iv.top_id() as usize];
    let formula = match mu_formula(alpha, u, w) {
        Ok(v) => Some(v),
        Err(Error::EmptyBottomWord) => None,
        Err(e) => return Err(e),
    };
    Ok(vec![
        ("recursive", Some(rec)),
        ("euler", Some(iv.euler_characteristic())),
        ("critical", Some(mobius_via_critical(&iv))),
        ("formula", formula),
    ])
}

fn cmd_mobius(cli: &Cli, u: &str, w: &str) -> Result<Outcome> {
    let p = Pair::parse(cli, u, w)?;
    let fmt = table_format(cli.format)?;
    let cap = cap_or(cli, DEFAULT_SIMPLEX_CAP);
    let single = |v: i64| Ok(Outcome::ok(format!("{v}\n")));
    let comparable = is_factor(&p.alpha, &p.u, &p.w);
    match cli.method {
        Method::Recursive => single(mobius_recursive(&p.alpha, &p.u, &p.w)?),
        Method::Formula => single(mu_formula(&p.alpha, &p.u, &p.w)?),
        Method::Bjorner => single(bjorner_mu(&p.alpha, &p.u, &p.w)?),
        Method::Euler | Method::Critical if !comparable => single(0),
        Method::Euler => single(p.interval(cap)?.euler_characteristic()),
        Method::Critical => single(mobius_via_critical(&p.interval(cap)?)),
        Method::All => {
            let values = mobius_values(&p.alpha, &p.u, &p.w, cap)?;
            let table: Vec<Vec<String>> = values
                .iter()
                .map(|(m, v)| vec![m.to_string(), v.map_or("n/a (empty bottom word)".into(), |x| x.to_string())])
                .collect();
            let stdout = format_table(&table, fmt);
            let distinct: BTreeSet<i64> = values.iter().filter_map(|v| v.1).collect();
            if distinct.len() > 1 {
                let detail = values
                    .iter()
                    .filter_map(|(m, v)| v.map(|x| format!("{m}={x}")))
                    .collect::<Vec<_>>()
                    .join(", ");
                let e = Error::Disagreement { u: p.show(&p.u), w: p.show(&p.w), detail };
                return Ok(Outcome { stdout, stderr: format!("error: {e}\n"), code: exit_code(&e) });
            }
            Ok(Outcome::ok(stdout))
        }
    }
}

fn cmd_chains(cli: &Cli, u: &str, w: &str) -> Result<Outcome> {
    let p = Pair::parse(cli, u, w)?;
    let fmt = table_format(cli.format)?;
    let cap = cap_or(cli, DEFAULT_SIMPLEX_CAP);
    let iv = p.interval(cap)?;
    let rows: Vec<ChainRow> =
        enumerate_chains(&iv, cap)?.into_iter().map(|c| (c, Vec::new(), Vec::new())).collect();
    Ok(Outcome::ok(render_chain_table(&iv, &rows, &[], fmt)))
}

fn interval_set(iv: &Interval, c: &MaximalChain, ranges: &[(usize, usize)]) -> String {
    let parts: Vec<String> = ranges
        .iter()
        .map(|&(a, b)| format!("[{},{}]", render_word(iv.alpha, iv.word(c.ids[a])), render_word(iv.alpha, iv.word(c.ids[b]))))
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_msis(cli: &Cli, u: &str, w: &str) -> Result<Outcome> {
    let p = Pair::parse(cli, u, w)?;
    let fmt = table_format(cli.format)?;
    let cap = cap_or(cli, DEFAULT_SIMPLEX_CAP);
    let iv = p.interval(cap)?;
    let rows: Vec<_> = analysed_chains(&iv, cap)?
        .into_iter()
        .map(|(c, msis, jset)| {
            let brackets: Vec<(usize, usize)> = msis.iter().map(|m| m.vertex_range()).collect();
            let critical = jset.covers && iv.len() > 1;
            let extra = vec![
                interval_set(&iv, &c, &brackets),
                interval_set(&iv, &c, &jset.ranges()),
                bracketed_id(&c, &jset.ranges()),
                if critical { "critical".into() } else { String::new() },
                if critical { jset.dimension().to_string() } else { String::new() },
            ];
            (c, brackets, extra)
        })
        .collect();
    Ok(Outcome::ok(render_chain_table(&iv, &rows, &["I(C)", "J(C)", "J id", "Critical", "Dim"], fmt)))
}

fn cmd_critical(cli: &Cli, u: &str, w: &str) -> Result<Outcome> {
    let p = Pair::parse(cli, u, w)?;
    let fmt = table_format(cli.format)?;
    let cap = cap_or(cli, DEFAULT_SIMPLEX_CAP);
    let iv = p.interval(cap)?;
    if iv.len() == 1 {
        return Ok(Outcome::ok("single-point interval; μ = 1\n".into()));
    }
    let rows: Vec<_> = analysed_chains(&iv, cap)?
        .into_iter()
        .filter(|(_, _, j)| j.covers)
        .map(|(c, _, jset)| {
            let ranges = jset.ranges();
            let extra = vec![interval_set(&iv, &c, &ranges), jset.dimension().to_string()];
            (c, ranges, extra)
        })
        .collect();
    let report = homotopy_report(&iv);
    if rows.is_empty() {
        return Ok(Outcome::ok("no critical chains; contractible\n".into()));
    }
    let mut s = render_chain_table(&iv, &rows, &["J(C)", "Dim"], fmt);
    let census: Vec<String> = report.census.iter().map(|(d, m)| format!("{d}:{m}")).collect();
    let _ = writeln!(s, "critical cells by dimension: {}", census.join(" "));
    let _ = writeln!(s, "mu = {}", census_euler(&report.census));
    let _ = match report.classification {
        HomotopyType::Undetermined => writeln!(s, "homotopy type: not determined by the census"),
        t => writeln!(s, "homotopy type: {t}"),
    };
    Ok(Outcome::ok(s))
}

fn cmd_matching(cli: &Cli, u: &str, w: &str) -> Result<Outcome> {
    let p = Pair::parse(cli, u, w)?;
    let fmt = table_format(cli.format)?;
    let cap = cap_or(cli, DEFAULT_SIMPLEX_CAP);
    let iv = p.interval(cap)?;
    if iv.len() == 1 {
        return Ok(Outcome::ok("single-point interval; the order complex is empty\n".into()));
    }
    let m = build_matching(&iv, cap)?;
    let mut table = vec![vec!["Dim".to_string(), "Simplex".to_string(), "Partner".to_string()]];
    table.extend(m.dump(&iv).into_iter().map(|r| r.to_vec()));
    let mut s = format_table(&table, fmt);
    let summary = validate_matching(&m)?;
    let census: Vec<String> = summary.critical.iter().map(|(d, k)| format!("{d}:{k}")).collect();
    let _ = writeln!(s, "simplices: {}, matched pairs: {}", summary.simplices, summary.pairs);
    let _ = writeln!(s, "critical cells by dimension: {}", census.join(" "));
    let _ = writeln!(s, "alternating sum: {}", census_euler(&summary.critical));
    Ok(Outcome::ok(s))
}

fn cmd_hasse(cli: &Cli, u: &str, w: &str) -> Result<Outcome> {
    let p = Pair::parse(cli, u, w)?;
    if cli.format == Format::Tsv {
        return Err(Error::Parse("`hasse` prints DOT; use --format dot or text".into()));
    }
    let iv = p.interval(cap_or(cli, DEFAULT_SIMPLEX_CAP))?;
    Ok(Outcome::ok(iv.to_dot()))
}

fn cmd_verify(cli: &Cli) -> Result<Outcome> {
    if cli.alphabet.trim() == "auto" || cli.alphabet.contains(":auto") {
        return Err(Error::Parse("`verify` needs an explicit --alphabet".into()));
    }
    let alpha = parse_alphabet(&cli.alphabet)?;
    let defaults = SweepConfig::default();
    let cfg = SweepConfig {
        max_word_len: cli.max_word_len,
        samples: cli.samples,
        sample_max_len: cli.max_word_len + 2,
        seed: cli.seed,
        interval_cap: cap_or(cli, defaults.interval_cap),
        ..defaults
    };
    let summary = sweep(&alpha, &cfg);
    let stdout = format!("alphabet: {alpha}\n{}", summary.render());
    let code = if summary.ok() { 0 } else { 5 };
    Ok(Outcome { stdout, stderr: String::new(), code })
}

/// Chain ids read back from the first column of a rendered chain table.
pub fn parse_rendered_ids(table: &str) -> Result<Vec<Vec<u32>>> {
    table
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_chain_id(l.split(['\t', ' ']).next().unwrap_or_default()))
        .collect()
}
