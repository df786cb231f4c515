//! Structural characterisations of MSIs and of `J(C)` for critical chains,
//! checked against the skipped-interval engine chain by chain.

use std::collections::{BTreeMap, HashMap};

use crate::alphabet::AlphabetKind;
use crate::chains::{
    join_labels, lex_first_chain_to, step_kind, walk_chains, ChainPath, ChainVisitor, MaximalChain, StepKind,
};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::words::{
    inner_word, is_factor, is_flat, is_rooted, maximal_outer_factors, outer_word, primary_prefix,
    principal_factors, render_word, Embedding, PrincipalFactor, Word,
};

use super::{refine_to_j, JInterval, JSet, Msi, MsiTracker};

/// Role of a member of `J(C)` in a critical chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum JType {
    /// A single strong descent.
    Descent,
    /// An untruncated MSI ending at a principal factor.
    Principal,
    /// The remainder of an MSI ending at a shorter principal factor.
    Truncated,
}

impl JType {
    pub fn number(self) -> u8 {
        match self {
            JType::Descent => 1,
            JType::Principal => 2,
            JType::Truncated => 3,
        }
    }

    fn may_follow(prev: Option<JType>, next: JType) -> bool {
        use JType::*;
        matches!(
            (prev, next),
            (None, Descent | Principal)
                | (Some(Descent), Descent | Principal)
                | (Some(Principal), Descent | Truncated)
                | (Some(Truncated), Descent)
        )
    }
}

/// Counts of the individual properties verified, keyed by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub chains: u64,
    pub critical_chains: u64,
    pub checks: BTreeMap<&'static str, u64>,
}

impl StructureReport {
    fn tick(&mut self, name: &'static str) {
        *self.checks.entry(name).or_default() += 1;
    }

    fn absorb(&mut self, tally: Tally) {
        for (k, v) in tally.0 {
            *self.checks.entry(k).or_default() += v;
        }
    }

    pub fn merge(&mut self, other: &StructureReport) {
        self.chains += other.chains;
        self.critical_chains += other.critical_chains;
        for (k, v) in &other.checks {
            *self.checks.entry(k).or_default() += v;
        }
    }
}

/// Per-walk counters; names are compared by address first.
#[derive(Default)]
struct Tally(Vec<(&'static str, u64)>);

impl Tally {
    #[inline]
    fn tick(&mut self, name: &'static str) {
        match self.0.iter_mut().find(|(k, _)| std::ptr::eq(*k, name) || *k == name) {
            Some((_, v)) => *v += 1,
            None => self.0.push((name, 1)),
        }
    }
}

/// `(element id, start)` along a lex-first chain down to a prefix embedding.
type Segments = Vec<(u32, u32)>;

struct Facts {
    kind: AlphabetKind,
    top_rooted: bool,
    same_length: bool,
    /// Principal factors of each element that lie in the interval.
    pf_of: Vec<Vec<(u32, usize)>>,
    outer: Vec<Option<u32>>,
    outer_not_below_inner: Vec<bool>,
    top_outer_factors: Vec<Word>,
    // the lex-first chain from an element down to the prefix embedding of
    // one of its principal factors, as (id, start relative to the element)
    segments: HashMap<(u32, u32), Option<Segments>>,
}

impl Facts {
    fn new(iv: &Interval) -> Self {
        let alpha = iv.alpha;
        let n = iv.len();
        let mut pf_of = vec![Vec::new(); n];
        let mut outer = vec![None; n];
        let mut outer_not_below_inner = vec![false; n];
        for x in 0..n as u32 {
            let w = iv.word(x);
            for pf in principal_factors(alpha, w) {
                if let Some(id) = iv.id(&pf.word) {
                    pf_of[x as usize].push((id, pf.index));
                }
            }
            if alpha.is_antichain() && w.len() >= 2 {
                let o = outer_word(w);
                outer[x as usize] = iv.id(&o);
                let i = inner_word(w).expect("length at least two");
                outer_not_below_inner[x as usize] = !(o != i && is_factor(alpha, &o, &i));
            }
        }
        Facts {
            kind: alpha.kind(),
            top_rooted: is_rooted(alpha, iv.top()),
            same_length: iv.top().len() == iv.bottom().len(),
            pf_of,
            outer,
            outer_not_below_inner,
            top_outer_factors: maximal_outer_factors(alpha, iv.top()),
            segments: HashMap::new(),
        }
    }

    fn segment(&mut self, iv: &Interval, x: u32, p: u32) -> Option<&Segments> {
        self.segments
            .entry((x, p))
            .or_insert_with(|| {
                let host = iv.word(x);
                let eta = Embedding::new(iv.word(p).clone(), 0, host.len());
                let path = lex_first_chain_to(iv.alpha, host, &eta).ok()?;
                path.iter().map(|e| Some((iv.id(&e.word)?, e.start as u32))).collect()
            })
            .as_ref()
    }
}

/// Whether `C(v_i, v_j)` is an MSI caused by the principal factor `v_j` of
/// `v_i`: the first label is the principal index and the segment is the
/// first admissible chain down to the prefix embedding.
fn caused_by_principal(facts: &mut Facts, iv: &Interval, path: &ChainPath, i: usize, j: usize) -> bool {
    let (x, p) = (path.ids[i], path.ids[j]);
    let Some(&(_, index)) = facts.pf_of[x as usize].iter().find(|(id, _)| *id == p) else {
        return false;
    };
    if path.labels[i + 1] != path.starts[i] + index as u32 {
        return false;
    }
    let base = path.starts[i];
    match facts.segment(iv, x, p) {
        Some(seg) => {
            seg.len() == j - i + 1
                && seg.iter().enumerate().all(|(k, &(id, s))| path.ids[i + k] == id && path.starts[i + k] == base + s)
        }
        None => false,
    }
}

fn kind_at(iv: &Interval, path: &ChainPath, k: usize) -> StepKind {
    step_kind(iv, &path.ids, &path.starts, &path.labels[1..], k)
}

/// Candidate types of each member of `J(C)`.
fn classify(facts: &mut Facts, iv: &Interval, path: &ChainPath, jset: &JSet) -> Vec<Vec<JType>> {
    let alpha = iv.alpha;
    let js = &jset.intervals;
    let mut out = Vec::with_capacity(js.len());
    for (k, j) in js.iter().enumerate() {
        let mut cands = Vec::new();
        let (a, b) = (j.first, j.last);
        if a == b && !j.truncated() && j.origin.end == a + 1 && kind_at(iv, path, a) == StepKind::StrongDescent {
            cands.push(JType::Descent);
        }
        if !j.truncated() && caused_by_principal(facts, iv, path, a - 1, b + 1) {
            cands.push(JType::Principal);
        }
        if k > 0 {
            let prev: &JInterval = &js[k - 1];
            let va = iv.word(path.ids[a]).clone();
            let is_target = |facts: &Facts, c: usize| {
                let vc = iv.word(path.ids[c]);
                vc.len() < va.len()
                    && va.letters()[..vc.len()] == *vc.letters()
                    && va.letters()[vc.len()..].iter().all(|&l| alpha.is_root(l))
                    && (prev.first..=prev.last)
                        .any(|h| facts.pf_of[path.ids[h] as usize].iter().any(|(p, _)| *p == path.ids[c]))
            };
            if prev.last + 1 == a && is_target(facts, b + 1) {
                let others = (a + 1..=path.depth()).filter(|&c| c != b + 1 && is_target(facts, c)).count();
                if others == 0 {
                    cands.push(JType::Truncated);
                }
            }
        }
        out.push(cands);
    }
    out
}

struct Checker<'i, 'a> {
    iv: &'i Interval<'a>,
    facts: Facts,
    tracker: MsiTracker,
    report: StructureReport,
    tally: Tally,
    error: Option<Error>,
    check_jsets: bool,
    // principal index of the bottom in the top, while its chain is pending
    bottom_principal: Option<u32>,
    // MSIs of the chains of the interval, kept while there are at most two
    first_two: Vec<Vec<Msi>>,
}

impl<'i, 'a> Checker<'i, 'a> {
    fn fail(&mut self, check: &'static str, path: &ChainPath, d: usize, detail: String) {
        if self.error.is_none() {
            let alpha = self.iv.alpha;
            self.error = Some(Error::Structural {
                check,
                interval: format!("{},{}", render_word(alpha, self.iv.bottom()), render_word(alpha, self.iv.top())),
                chain: join_labels(&path.labels[1..=d]),
                detail,
            });
        }
    }

    fn word(&self, path: &ChainPath, k: usize) -> &Word {
        self.iv.word(path.ids[k])
    }

    fn check_vertex(&mut self, path: &ChainPath, d: usize) {
        let iv = self.iv;
        let found = self.tracker.msi_ending_at(d).map(|s| s as usize);
        let mut expected = [0usize; 2];
        let mut count = 0;
        if d >= 2 && kind_at(iv, path, d - 1) == StepKind::StrongDescent {
            expected[0] = d - 2;
            count = 1;
            self.tally.tick("strong descent is an MSI");
        }
        // the segment ends at the prefix embedding, so starts agree
        for i in (0..d.saturating_sub(1)).rev().take_while(|&i| path.starts[i] == path.starts[d]) {
            if caused_by_principal(&mut self.facts, iv, path, i, d) {
                if count < 2 {
                    expected[count] = i;
                }
                count += 1;
                self.tally.tick("principal factor MSI");
            }
        }
        let agrees = match (count, found) {
            (0, None) => true,
            (1, Some(f)) => expected[0] == f,
            _ => false,
        };
        if !agrees {
            let expected = &expected[..count.min(2)];
            self.fail(
                "MSI characterisation",
                path,
                d,
                format!("structural starts {expected:?}, engine start {found:?} for MSIs ending at vertex {d}"),
            );
            return;
        }
        self.tally.tick("MSI characterisation");
        if d < 2 {
            return;
        }
        let k = d - 1;
        let kind = kind_at(iv, path, k);
        if kind.is_descent() && self.facts.kind == AlphabetKind::Chain {
            if (found == Some(k - 1)) != (kind == StepKind::StrongDescent) {
                self.fail("length-one MSIs are strong descents", path, d, format!("vertex {k} is a {kind:?}"));
                return;
            }
            self.tally.tick("length-one MSIs are strong descents");
        }
        if kind.is_descent() && self.word(path, k - 1).len() == self.word(path, k + 1).len() {
            if found != Some(k - 1) {
                self.fail("descents between equal lengths are MSIs", path, d, format!("vertex {k}"));
                return;
            }
            self.tally.tick("descents between equal lengths are MSIs");
        }
        if let Some(i) = found {
            if self.facts.same_length && (d - i != 2 || !kind.is_descent()) {
                self.fail("same-length MSIs are descents", path, d, format!("MSI ({i},{d})"));
                return;
            }
            if self.facts.kind == AlphabetKind::Antichain {
                if let Some(a) = (i + 1..d).find(|&a| kind_at(iv, path, a) == StepKind::Ascent) {
                    self.fail("no MSI contains an ascent", path, d, format!("ascent at vertex {a} in ({i},{d})"));
                    return;
                }
                self.tally.tick("no MSI contains an ascent");
            }
        }
        if self.facts.kind == AlphabetKind::Antichain {
            let target = path.ids[d];
            for i in 0..d - 1 {
                let x = path.ids[i] as usize;
                if self.facts.outer[x] == Some(target)
                    && self.facts.outer_not_below_inner[x]
                    && path.labels[i + 1..=d].windows(2).all(|p| p[0] > p[1])
                {
                    if found != Some(i) {
                        self.fail("outer-word MSIs", path, d, format!("C(v_{i},v_{d}) is not an MSI"));
                        return;
                    }
                    self.tally.tick("outer-word MSIs");
                }
            }
        }
    }

    fn check_critical(&mut self, path: &ChainPath, msis: &[Msi], jset: &JSet) {
        let iv = self.iv;
        let n = path.depth();
        self.report.critical_chains += 1;
        if self.facts.top_rooted || n < 2 {
            return;
        }
        // overlap pairing
        for (k, m) in msis.iter().enumerate() {
            let overlaps = msis
                .iter()
                .enumerate()
                .filter(|&(o, x)| o != k && x.first().max(m.first()) <= x.last().min(m.last()))
                .count();
            if overlaps > 1 {
                self.fail("an MSI overlaps at most one other", path, n, format!("{m:?} overlaps {overlaps}"));
                return;
            }
        }
        self.tally.tick("an MSI overlaps at most one other");
        for m in msis {
            if m.end == n || m.end - m.start == 2 || !caused_by_principal(&mut self.facts, iv, path, m.start, m.end) {
                continue;
            }
            let j = m.end;
            let held = msis.iter().any(|o| o.contains(j) && (o.end - o.start == 2 || o.start + 2 <= j));
            if is_rooted(iv.alpha, self.word(path, j)) || !held {
                self.fail("principal factors of critical chains", path, n, format!("{m:?}"));
                return;
            }
            self.tally.tick("principal factors of critical chains");
        }
        // typed decomposition
        let cands = classify(&mut self.facts, iv, path, jset);
        let mut reach: Vec<Vec<(JType, usize)>> = Vec::with_capacity(cands.len());
        for (k, cs) in cands.iter().enumerate() {
            let mut here = Vec::new();
            for &t in cs {
                let from = if k == 0 {
                    JType::may_follow(None, t).then_some(usize::MAX)
                } else {
                    reach[k - 1].iter().position(|&(p, _)| JType::may_follow(Some(p), t))
                };
                if let Some(f) = from {
                    here.push((t, f));
                }
            }
            reach.push(here);
        }
        let Some(last) = reach.last().and_then(|r| r.first()).copied() else {
            self.fail("typed J(C) decomposition", path, n, format!("candidates {cands:?}"));
            return;
        };
        let mut types = vec![last.0];
        let mut back = last.1;
        for k in (0..reach.len() - 1).rev() {
            let (t, f) = reach[k][back];
            types.push(t);
            back = f;
        }
        types.reverse();
        self.tally.tick("typed J(C) decomposition");
        // a principal interval is followed by a truncated one exactly when
        // the primary prefix of its factor appears
        for (k, j) in jset.intervals.iter().enumerate() {
            if types[k] != JType::Principal {
                continue;
            }
            let host = self.word(path, j.first - 1).clone();
            let p = self.word(path, j.last + 1).clone();
            let index = (path.labels[j.first] - path.starts[j.first - 1]) as usize;
            let x = primary_prefix(iv.alpha, &host, &PrincipalFactor { word: p, index });
            let x_at = x.as_ref().and_then(|x| (j.last + 1..=n).find(|&c| self.word(path, c) == x));
            let followed = types.get(k + 1) == Some(&JType::Truncated);
            let consistent = match (followed, x_at) {
                (true, Some(c)) => jset.intervals[k + 1].last + 1 == c,
                (false, None) => true,
                _ => false,
            };
            if !consistent {
                self.fail("primary prefix follows a principal interval", path, n, format!("types {types:?}"));
                return;
            }
            self.tally.tick("primary prefix follows a principal interval");
        }
        if self.facts.kind == AlphabetKind::Chain && !path.labels[1..].windows(2).all(|p| p[0] > p[1]) {
            let alpha = iv.alpha;
            let hit = (0..n).any(|i| {
                self.facts.pf_of[path.ids[i] as usize].iter().any(|&(p, _)| {
                    let p = iv.word(p);
                    self.facts.top_outer_factors.iter().any(|f| {
                        f.len() >= p.len()
                            && f.letters()[..p.len()] == *p.letters()
                            && f.letters()[p.len()..].iter().all(|&l| alpha.is_root(l))
                    })
                })
            });
            if !hit {
                self.fail("critical chains reach a maximal outer factor", path, n, String::new());
                return;
            }
            self.tally.tick("critical chains reach a maximal outer factor");
        }
    }
}

impl ChainVisitor for Checker<'_, '_> {
    fn enter(&mut self, path: &ChainPath, d: usize) -> bool {
        self.tracker.push(self.iv, path, d);
        if self.error.is_none() {
            self.check_vertex(path, d);
        }
        self.error.is_none()
    }

    fn leave(&mut self, d: usize) {
        self.tracker.pop(d);
    }

    fn complete(&mut self, path: &ChainPath) {
        let n = path.depth();
        self.report.chains += 1;
        let wanted = self.first_two.len() < 3 || self.bottom_principal.is_some() || self.tracker.covers_all(n);
        if !wanted {
            return;
        }
        let msis = self.tracker.msis();
        if self.first_two.len() < 3 {
            self.first_two.push(msis.clone());
        }
        if let Some(idx) = self.bottom_principal {
            if n >= 1 && path.labels[1] == idx {
                self.bottom_principal = None;
                if !msis.contains(&Msi { start: 0, end: n }) {
                    self.fail("a principal factor bottom gives an MSI", path, n, format!("I(C) = {msis:?}"));
                    return;
                }
                self.tally.tick("a principal factor bottom gives an MSI");
            }
        }
        if self.check_jsets && self.tracker.covers_all(n) {
            let jset = refine_to_j(&msis, n);
            if jset.covers {
                self.check_critical(path, &msis, &jset);
            }
        }
    }
}

/// Walks every maximal chain of `iv`, comparing the engine's MSIs with the
/// structural characterisation and, for critical chains, checking the
/// typed decomposition of `J(C)`.
pub fn structural_check(iv: &Interval) -> Result<StructureReport> {
    let alpha = iv.alpha;
    let (u, w) = (iv.bottom().clone(), iv.top().clone());
    let bottom_principal = principal_factors(alpha, &w).into_iter().find(|p| p.word == u).map(|p| p.index as u32);
    let mut c = Checker {
        iv,
        facts: Facts::new(iv),
        tracker: MsiTracker::new(),
        report: StructureReport::default(),
        tally: Tally::default(),
        error: None,
        check_jsets: true,
        bottom_principal,
        first_two: Vec::new(),
    };
    walk_chains(iv, &mut c);
    let tally = std::mem::take(&mut c.tally);
    c.report.absorb(tally);
    if let Some(e) = c.error {
        return Err(e);
    }
    if c.bottom_principal.is_some() {
        return Err(Error::Structural {
            check: "a principal factor bottom gives an MSI",
            interval: format!("{},{}", render_word(alpha, &u), render_word(alpha, &w)),
            chain: String::new(),
            detail: "no chain starts at the principal index".into(),
        });
    }
    if alpha.is_antichain() && !is_flat(alpha, &w) && w.len() >= 2 {
        let i = inner_word(&w).expect("length at least two");
        let o = outer_word(&w);
        let applies = u == i || (u == o && !is_factor(alpha, &o, &i));
        if applies {
            let n = (iv.rank_gap()) as usize;
            let ok = c.first_two.len() == 2 && c.first_two[1] == [Msi { start: 0, end: n }];
            if !ok {
                return Err(Error::Structural {
                    check: "inner and outer word intervals",
                    interval: format!("{},{}", render_word(alpha, &u), render_word(alpha, &w)),
                    chain: String::new(),
                    detail: format!("MSIs per chain {:?}", c.first_two),
                });
            }
            c.report.tick("inner and outer word intervals");
        }
    }
    Ok(c.report)
}

/// Typed decomposition of `J(C)` for each critical chain of an interval
/// whose top word is not rooted.
pub fn jset_types(iv: &Interval) -> Vec<(MaximalChain, JSet, Option<Vec<JType>>)> {
    let mut facts = Facts::new(iv);
    let mut found = Vec::new();
    super::for_each_critical(iv, |path, jset| found.push((path.clone(), jset.clone())));
    found
        .into_iter()
        .map(|(path, jset)| {
            let types = if facts.top_rooted { None } else { resolve_types(&classify(&mut facts, iv, &path, &jset)) };
            (path.to_chain(), jset, types)
        })
        .collect()
}

fn resolve_types(cands: &[Vec<JType>]) -> Option<Vec<JType>> {
    fn go(cands: &[Vec<JType>], prev: Option<JType>, acc: &mut Vec<JType>) -> bool {
        let Some((first, rest)) = cands.split_first() else { return true };
        for &t in first {
            if JType::may_follow(prev, t) {
                acc.push(t);
                if go(rest, Some(t), acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(cands, None, &mut acc).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{parse_alphabet, AlphabetPoset};
    use crate::words::parse_word;

    fn iv<'a>(a: &'a AlphabetPoset, u: &str, w: &str) -> Interval<'a> {
        Interval::new(a, &parse_word(a, u).unwrap(), &parse_word(a, w).unwrap()).unwrap()
    }

    #[test]
    fn worked_intervals_pass() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        let c = parse_alphabet("chain:2").unwrap();
        for (alpha, u, w) in [
            (&a, "b", "bbabb"),
            (&a, "a", "abbabb"),
            (&a, "a", "ababa"),
            (&c, "2", "2212"),
            (&c, "121", "1221"),
        ] {
            let r = structural_check(&iv(alpha, u, w)).unwrap_or_else(|e| panic!("{e}"));
            assert!(r.chains > 0);
        }
    }

    #[test]
    fn typed_decompositions() {
        let c = parse_alphabet("chain:2").unwrap();
        let t = jset_types(&iv(&c, "2", "2212"));
        let crit: Vec<_> = t.iter().filter(|(ch, _, _)| ch.id_string() == "2-4-4-3-2").collect();
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].2.as_deref(), Some(&[JType::Principal, JType::Truncated][..]));
        let t = jset_types(&iv(&c, "121", "1221"));
        let two_one = t.iter().find(|(ch, _, _)| ch.id_string() == "2-1").unwrap();
        assert_eq!(two_one.2.as_deref(), Some(&[JType::Descent][..]));
    }

    #[test]
    fn forest_principal_segment() {
        let f = parse_alphabet("forest:root a;b a;root 1").unwrap();
        let r = structural_check(&iv(&f, "b", "bb1")).unwrap();
        assert!(r.checks["principal factor MSI"] >= 1);
    }
}
