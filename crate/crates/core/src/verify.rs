//! Exhaustive and sampled cross-checks of every route to `μ`, the MSI and
//! `J(C)` characterisations, and the explicit Morse matching.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::alphabet::AlphabetPoset;
use crate::chains::{classify_steps, count_chains, StepKind};
use crate::error::Error;
use crate::formulas::{all_descent_data, bjorner_mu, rooted_identity_sides, same_length_mu, FormulaEngine};
use crate::interval::Interval;
use crate::morse::structure::{structural_check, StructureReport};
use crate::morse::{build_matching, census, census_euler, critical_chains, validate_matching};
use crate::words::{all_words, is_factor, is_flat, is_rooted, render_word, Word};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Every comparable pair with `|w|` up to this bound is checked.
    pub max_word_len: usize,
    /// Extra random pairs with longer tops.
    pub samples: usize,
    pub sample_max_len: usize,
    pub seed: u64,
    /// Largest interval (in elements) examined.
    pub interval_cap: usize,
    /// Largest maximal-chain count for the chain-by-chain structural check.
    pub chain_cap: u128,
    /// Largest order complex built as an explicit matching.
    pub simplex_cap: usize,
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_word_len: 4,
            samples: 0,
            sample_max_len: 7,
            seed: 0,
            interval_cap: 5_000,
            chain_cap: 10_000_000,
            simplex_cap: 1 << 13,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub u: String,
    pub w: String,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on [{}, {}]: {}", self.check, self.u, self.w, self.detail)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub pairs: u64,
    pub sampled: u64,
    /// How often each check ran.
    pub passed: BTreeMap<&'static str, u64>,
    /// How often each check was skipped, by reason.
    pub skipped: BTreeMap<&'static str, u64>,
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    pub structure: StructureReport,
}

impl SweepSummary {
    pub fn ok(&self) -> bool {
        self.failure_count == 0
    }

    fn merge(&mut self, o: PairOutcome) {
        for k in o.passed {
            *self.passed.entry(k).or_default() += 1;
        }
        for k in o.skipped {
            *self.skipped.entry(k).or_default() += 1;
        }
        self.failure_count += o.failures.len() as u64;
        for f in o.failures {
            if self.failures.len() < 20 {
                self.failures.push(f);
            }
        }
        if let Some(s) = o.structure {
            self.structure.merge(&s);
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("pairs checked: {} exhaustive, {} sampled\n", self.pairs, self.sampled);
        for (k, v) in &self.passed {
            s.push_str(&format!("  pass  {v:>9}  {k}\n"));
        }
        for (k, v) in &self.skipped {
            s.push_str(&format!("  skip  {v:>9}  {k}\n"));
        }
        s.push_str(&format!(
            "structure: {} chains, {} critical\n",
            self.structure.chains, self.structure.critical_chains
        ));
        s.push_str(&format!("failures: {}\n", self.failure_count));
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("first counterexample: {f}\n"));
        }
        s
    }
}

#[derive(Default)]
struct PairOutcome {
    passed: Vec<&'static str>,
    skipped: Vec<&'static str>,
    failures: Vec<Failure>,
    structure: Option<StructureReport>,
}

impl PairOutcome {
    fn expect(&mut self, ok: bool, check: &'static str, u: &str, w: &str, detail: impl FnOnce() -> String) {
        if ok {
            self.passed.push(check);
        } else {
            self.failures.push(Failure { check, u: u.into(), w: w.into(), detail: detail() });
        }
    }
}

/// Runs every applicable check on `[u, w]`; `u <= w` is assumed.
fn check_pair(alpha: &AlphabetPoset, engine: &FormulaEngine, cfg: &SweepConfig, u: &Word, w: &Word) -> PairOutcome {
    let mut out = PairOutcome::default();
    let (us, ws) = (render_word(alpha, u), render_word(alpha, w));
    let iv = match Interval::with_cap(alpha, u, w, cfg.interval_cap) {
        Ok(iv) => iv,
        Err(Error::SizeCapExceeded { .. }) => {
            out.skipped.push("interval over cap");
            return out;
        }
        Err(e) => {
            out.failures.push(Failure { check: "interval", u: us, w: ws, detail: e.to_string() });
            return out;
        }
    };
    let rec = iv.mobius_table()[iv.top_id() as usize];
    let euler = iv.euler_characteristic();
    let crit = critical_chains(&iv);
    let via_crit = if iv.len() == 1 {
        1
    } else {
        crit.iter().map(|c| if c.dimension % 2 == 0 { 1 } else { -1 }).sum()
    };
    out.expect(euler == rec, "euler characteristic equals recursion", &us, &ws, || format!("{euler} vs {rec}"));
    out.expect(via_crit == rec, "critical chains equal recursion", &us, &ws, || format!("{via_crit} vs {rec}"));
    match engine.mu(u, w) {
        Ok(f) => out.expect(f == rec, "formula equals recursion", &us, &ws, || format!("{f} vs {rec}")),
        Err(Error::EmptyBottomWord) => out.skipped.push("formula: empty bottom word"),
        Err(e) => out.failures.push(Failure { check: "formula", u: us.clone(), w: ws.clone(), detail: e.to_string() }),
    }
    if is_rooted(alpha, w) {
        let b = bjorner_mu(alpha, u, w).expect("rooted comparable pair");
        out.expect(b == rec, "bjorner equals recursion", &us, &ws, || format!("{b} vs {rec}"));
        out.expect((-1..=1).contains(&b), "bjorner value in {-1,0,1}", &us, &ws, || b.to_string());
        if !u.is_empty() && !is_flat(alpha, w) && w.len() >= u.len() + 2 {
            let (sum, direct) = rooted_identity_sides(alpha, u, w).expect("rooted comparable pair");
            out.expect(sum == direct, "rooted triple sum equals mu(u, o(w))", &us, &ws, || format!("{sum} vs {direct}"));
        }
    }
    if u.len() == w.len() {
        let s = same_length_mu(alpha, u, w).expect("equal lengths");
        out.expect(s == rec, "same-length formula equals recursion", &us, &ws, || format!("{s} vs {rec}"));
    }
    if iv.len() > 1 {
        let c = census(&iv);
        let e = census_euler(&c);
        out.expect(e == rec, "census alternating sum equals mu", &us, &ws, || format!("{e} vs {rec}"));
    }
    if alpha.is_antichain() && iv.len() > 1 {
        let last = lex_last_ids(&iv);
        let ok = crit.len() <= 1 && crit.iter().all(|c| c.chain.ids == last);
        out.expect(ok, "antichain: at most the last chain is critical", &us, &ws, || format!("{} critical", crit.len()));
    }
    if iv.rank_gap() > 1 {
        let t = all_descent_data(alpha, u, w).t;
        let morse_t = crit
            .iter()
            .filter(|c| classify_steps(&iv, &c.chain).iter().all(|k| *k == StepKind::StrongDescent))
            .count() as u32;
        out.expect(t == morse_t && t <= 2, "all-descent count", &us, &ws, || format!("formula {t}, morse {morse_t}"));
    }
    let chains = if iv.len() > 1 { count_chains(&iv) } else { 0 };
    if u.is_empty() {
        out.skipped.push("structure: empty bottom word");
    } else if chains <= cfg.chain_cap {
        match structural_check(&iv) {
            Ok(r) => {
                out.passed.push("structural MSI and J(C) checks");
                out.structure = Some(r);
            }
            Err(e) => out.failures.push(Failure { check: "structure", u: us.clone(), w: ws.clone(), detail: e.to_string() }),
        }
    } else {
        out.skipped.push("structure: too many chains");
    }
    let simplices: u128 = 1 + iv.face_counts().iter().sum::<u128>();
    if iv.len() == 1 {
        out.skipped.push("matching: single-point interval");
    } else if simplices <= cfg.simplex_cap as u128 {
        match build_matching(&iv, cfg.simplex_cap).and_then(|m| validate_matching(&m)) {
            Ok(summary) => {
                let want = census(&iv);
                out.expect(summary.critical == want, "matching validates", &us, &ws, || {
                    format!("{:?} vs {:?}", summary.critical, want)
                });
            }
            Err(e) => out.failures.push(Failure { check: "matching", u: us, w: ws, detail: e.to_string() }),
        }
    } else {
        out.skipped.push("matching: complex over cap");
    }
    out
}

/// Chain ids of the lexicographically last maximal chain.
fn lex_last_ids(iv: &Interval) -> Vec<u32> {
    let mut x = iv.top_id();
    let mut ids = vec![x];
    while let Some(m) = iv.moves(x).last() {
        x = m.child;
        ids.push(x);
    }
    ids
}

/// Every comparable pair with `|w| <= max_len`.
pub fn comparable_pairs(alpha: &AlphabetPoset, max_len: usize) -> Vec<(Word, Word)> {
    let words = all_words(alpha, max_len);
    let mut out = Vec::new();
    for w in &words {
        for u in &words {
            if u.len() <= w.len() && is_factor(alpha, u, w) {
                out.push((u.clone(), w.clone()));
            }
        }
    }
    out
}

/// A random top of the given length and a random factor of it.
pub fn random_pair(alpha: &AlphabetPoset, rng: &mut StdRng, len: usize) -> (Word, Word) {
    let letters: Vec<_> = alpha.letters().collect();
    let w = Word::new((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect());
    let ulen = rng.gen_range(1..=len);
    let start = rng.gen_range(0..=len - ulen);
    let u = Word::new(
        w.window(start, ulen)
            .iter()
            .map(|&x| {
                let below = alpha.down_set(x);
                below[rng.gen_range(0..below.len())]
            })
            .collect(),
    );
    (u, w)
}

fn run_pairs(alpha: &AlphabetPoset, cfg: &SweepConfig, pairs: &[(Word, Word)], summary: &mut SweepSummary) {
    let engine = FormulaEngine::new(alpha);
    let next = AtomicUsize::new(0);
    let shared = Mutex::new(std::mem::take(summary));
    std::thread::scope(|s| {
        for _ in 0..cfg.threads.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((u, w)) = pairs.get(i) else { break };
                let o = check_pair(alpha, &engine, cfg, u, w);
                shared.lock().expect("summary lock").merge(o);
            });
        }
    });
    *summary = shared.into_inner().expect("summary lock");
}

/// Checks all pairs up to the length bound, then `samples` random pairs
/// with tops between the bound and `sample_max_len`.
pub fn sweep(alpha: &AlphabetPoset, cfg: &SweepConfig) -> SweepSummary {
    let mut summary = SweepSummary::default();
    let pairs = comparable_pairs(alpha, cfg.max_word_len);
    summary.pairs = pairs.len() as u64;
    run_pairs(alpha, cfg, &pairs, &mut summary);
    if cfg.samples > 0 && cfg.sample_max_len > cfg.max_word_len {
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let sampled: Vec<(Word, Word)> = (0..cfg.samples)
            .map(|_| {
                let len = rng.gen_range(cfg.max_word_len + 1..=cfg.sample_max_len);
                random_pair(alpha, &mut rng, len)
            })
            .collect();
        summary.sampled = sampled.len() as u64;
        run_pairs(alpha, cfg, &sampled, &mut summary);
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::parse_alphabet;

    #[test]
    fn small_sweeps_pass() {
        for spec in ["antichain:a,b", "chain:2", "forest:root a;b a;root 1;2 1"] {
            let a = parse_alphabet(spec).unwrap();
            let cfg = SweepConfig { max_word_len: 3, samples: 10, sample_max_len: 5, ..Default::default() };
            let s = sweep(&a, &cfg);
            assert!(s.ok(), "{spec}: {}\n{:#?}", s.render(), s.failures);
            assert!(s.pairs > 0 && s.sampled == 10);
        }
    }

    #[test]
    fn random_pairs_are_comparable() {
        let a = parse_alphabet("chain:3").unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let (u, w) = random_pair(&a, &mut rng, 6);
            assert!(is_factor(&a, &u, &w));
        }
    }

    #[test]
    fn lex_last_chain_of_bbabb() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        let u = crate::words::parse_word(&a, "b").unwrap();
        let w = crate::words::parse_word(&a, "bbabb").unwrap();
        let iv = Interval::new(&a, &u, &w).unwrap();
        let crit = critical_chains(&iv);
        assert_eq!(crit[0].chain.ids, lex_last_ids(&iv));
    }
}
