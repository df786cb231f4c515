//! Maximal chains, chain ids and their lexicographic enumeration.
//!
//! A maximal chain of `[u, w]` is walked down from `w` one cover at a time.
//! Each step reduces one host position of the current embedding; the
//! sequence of those positions is the chain id. Chains are produced in
//! lexicographic order of their ids.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::alphabet::AlphabetPoset;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::words::{cell_le, cell_rank, is_flat, render_cells, Embedding, Word};

/// A maximal chain given by element ids of its interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaximalChain {
    /// `v_0 = w` down to `v_n = u`.
    pub ids: Vec<u32>,
    /// Padding cells before the support of each `v_k`.
    pub starts: Vec<u32>,
    /// `labels[k - 1]` is the host position reduced from `v_{k-1}` to `v_k`.
    pub labels: Vec<u32>,
}

impl MaximalChain {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, k: usize) -> u32 {
        self.labels[k - 1]
    }

    pub fn words<'a>(&self, iv: &'a Interval) -> Vec<&'a Word> {
        self.ids.iter().map(|&id| iv.word(id)).collect()
    }

    pub fn embedding(&self, iv: &Interval, k: usize) -> Embedding {
        Embedding::new(iv.word(self.ids[k]).clone(), self.starts[k] as usize, iv.top().len())
    }

    pub fn id_string(&self) -> String {
        join_labels(&self.labels)
    }
}

pub fn join_labels(labels: &[u32]) -> String {
    labels.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
}

/// The chain under construction during a walk.
#[derive(Debug, Clone, Default)]
pub struct ChainPath {
    pub ids: Vec<u32>,
    pub starts: Vec<u32>,
    /// `labels[0]` is unused so that `labels[k]` is `l_k`.
    pub labels: Vec<u32>,
}

impl ChainPath {
    pub fn depth(&self) -> usize {
        self.ids.len() - 1
    }

    pub fn to_chain(&self) -> MaximalChain {
        MaximalChain { ids: self.ids.clone(), starts: self.starts.clone(), labels: self.labels[1..].to_vec() }
    }
}

/// Callbacks for a lexicographic depth-first walk over maximal chains.
pub trait ChainVisitor {
    /// Vertex `d` was just pushed; returning `false` skips its subtree.
    fn enter(&mut self, path: &ChainPath, d: usize) -> bool;
    /// Vertex `d` is about to be popped.
    fn leave(&mut self, _d: usize) {}
    /// The path reached the bottom of the interval.
    fn complete(&mut self, path: &ChainPath);
}

/// Walks every maximal chain of `iv` in lexicographic order of chain ids.
pub fn walk_chains<V: ChainVisitor>(iv: &Interval, visitor: &mut V) {
    let top = iv.top_id();
    let mut path = ChainPath { ids: vec![top], starts: vec![0], labels: vec![0] };
    if !visitor.enter(&path, 0) {
        return;
    }
    if top == 0 {
        visitor.complete(&path);
        visitor.leave(0);
        return;
    }
    let mut next = vec![0usize];
    loop {
        let d = path.depth();
        let moves = iv.moves(path.ids[d]);
        if next[d] < moves.len() {
            let m = moves[next[d]];
            next[d] += 1;
            let start = path.starts[d];
            path.ids.push(m.child);
            path.starts.push(start + m.shift);
            path.labels.push(start + m.pos);
            next.push(0);
            let descend = visitor.enter(&path, d + 1);
            if descend && m.child != 0 {
                continue;
            }
            if descend {
                visitor.complete(&path);
            }
            visitor.leave(d + 1);
            path.ids.pop();
            path.starts.pop();
            path.labels.pop();
            next.pop();
        } else {
            visitor.leave(d);
            if d == 0 {
                return;
            }
            path.ids.pop();
            path.starts.pop();
            path.labels.pop();
            next.pop();
        }
    }
}

struct Collect {
    out: Vec<MaximalChain>,
    cap: usize,
    overflow: bool,
}

impl ChainVisitor for Collect {
    fn enter(&mut self, _: &ChainPath, _: usize) -> bool {
        !self.overflow
    }

    fn complete(&mut self, path: &ChainPath) {
        if self.out.len() == self.cap {
            self.overflow = true;
        } else {
            self.out.push(path.to_chain());
        }
    }
}

pub const DEFAULT_CHAIN_CAP: usize = 1 << 22;

/// All maximal chains of `iv` in lexicographic order.
pub fn enumerate_chains(iv: &Interval, cap: usize) -> Result<Vec<MaximalChain>> {
    let mut c = Collect { out: Vec::new(), cap, overflow: false };
    walk_chains(iv, &mut c);
    if c.overflow {
        return Err(Error::SizeCapExceeded { what: "chain list", found: cap + 1, cap });
    }
    Ok(c.out)
}

/// Number of maximal chains, by dynamic programming over covers.
pub fn count_chains(iv: &Interval) -> u128 {
    let mut count = vec![0u128; iv.len()];
    count[0] = 1;
    for x in 1..iv.len() as u32 {
        count[x as usize] = iv.moves(x).iter().map(|m| count[m.child as usize]).sum();
    }
    count[iv.top_id() as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Ascent,
    /// The same position is reduced twice in a row.
    Repeat,
    /// The two steps delete the last two cells of the support.
    WeakDescent,
    StrongDescent,
}

impl StepKind {
    pub fn is_descent(self) -> bool {
        matches!(self, StepKind::WeakDescent | StepKind::StrongDescent)
    }
}

/// Tags each interior vertex `v_1 .. v_{n-1}`; entry `k - 1` is for `v_k`.
pub fn classify_steps(iv: &Interval, c: &MaximalChain) -> Vec<StepKind> {
    (1..c.len()).map(|k| step_kind(iv, &c.ids, &c.starts, &c.labels, k)).collect()
}

/// Kind of vertex `k` given ids, starts and 0-based labels (`labels[k - 1]`
/// is `l_k`).
pub fn step_kind(iv: &Interval, ids: &[u32], starts: &[u32], labels: &[u32], k: usize) -> StepKind {
    let (a, b) = (labels[k - 1], labels[k]);
    if a < b {
        return StepKind::Ascent;
    }
    if a == b {
        return StepKind::Repeat;
    }
    let deletes_last = |j: usize| {
        let (x, y) = (iv.word(ids[j]), iv.word(ids[j + 1]));
        y.len() < x.len() && labels[j] == starts[j] + x.len() as u32
    };
    if deletes_last(k - 1) && deletes_last(k) {
        StepKind::WeakDescent
    } else {
        StepKind::StrongDescent
    }
}

/// The multiset `M_η`: how many steps each host position drops from `w`
/// to the embedding `η`.
pub fn multiset(alpha: &AlphabetPoset, w: &Word, eta: &Embedding) -> Result<Vec<u32>> {
    if eta.host_len != w.len() {
        return Err(Error::InvalidMultiset);
    }
    (1..=w.len())
        .map(|i| {
            let (top, bottom) = (w.cell(i), eta.cell(i));
            if !cell_le(alpha, bottom, top) {
                return Err(Error::InvalidMultiset);
            }
            Ok((cell_rank(alpha, top) - cell_rank(alpha, bottom)) as u32)
        })
        .collect()
}

fn counts_match(ids: &[u32], m: &[u32]) -> bool {
    let mut seen = vec![0u32; m.len()];
    for &l in ids {
        if l == 0 || l as usize > m.len() {
            return false;
        }
        seen[l as usize - 1] += 1;
    }
    seen == m
}

fn last_index(ids: &[u32], value: u32) -> Option<usize> {
    ids.iter().rposition(|&l| l == value)
}

/// Whether `ids` is an admissible permutation of `M_η` for an embedding
/// with support `f..=ell` in a host of length `m.len()`.
pub fn is_admissible(ids: &[u32], m: &[u32], f: usize, ell: usize) -> bool {
    if !counts_match(ids, m) {
        return false;
    }
    let n = m.len();
    let before = |a: u32, b: u32| match (last_index(ids, a), last_index(ids, b)) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    };
    (1..f.saturating_sub(1)).all(|i| before(i as u32, i as u32 + 1))
        && (ell + 2..=n).all(|j| before(j as u32, j as u32 - 1))
}

/// Admissible, and the last `ell + 1` precedes one value of `f..=ell` or
/// two copies of a value below `f`.
pub fn is_strongly_admissible(ids: &[u32], m: &[u32], f: usize, ell: usize) -> bool {
    if !is_admissible(ids, m, f, ell) {
        return false;
    }
    let Some(pos) = last_index(ids, ell as u32 + 1) else { return true };
    let after = &ids[pos + 1..];
    if after.iter().any(|&l| (f..=ell).contains(&(l as usize))) {
        return true;
    }
    (1..f).any(|v| after.iter().filter(|&&l| l as usize == v).count() >= 2)
}

/// The lexicographically first maximal chain from `w` ending at `eta`,
/// found by a depth-first search in label order.
pub fn lex_first_chain_to(alpha: &AlphabetPoset, w: &Word, eta: &Embedding) -> Result<Vec<Embedding>> {
    fn go(alpha: &AlphabetPoset, cur: &Embedding, eta: &Embedding, out: &mut Vec<Embedding>) -> bool {
        if cur == eta {
            return true;
        }
        for pos in cur.reducible_positions(alpha) {
            let next = cur.reduce_at(alpha, pos).expect("reducible");
            if next.dominates(alpha, eta) {
                out.push(next.clone());
                if go(alpha, &next, eta, out) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }
    let top = Embedding::identity(w.clone());
    if !top.dominates(alpha, eta) {
        return Err(Error::InvalidMultiset);
    }
    let mut out = vec![top.clone()];
    if go(alpha, &top, eta, &mut out) {
        Ok(out)
    } else {
        Err(Error::InvalidMultiset)
    }
}

/// Labels of a sequence of embeddings.
pub fn labels_of(path: &[Embedding]) -> Vec<u32> {
    path.windows(2)
        .map(|p| {
            (1..=p[0].host_len)
                .find(|&i| p[0].cell(i) != p[1].cell(i))
                .expect("consecutive embeddings differ") as u32
        })
        .collect()
}

/// The first admissible chain ending at `eta`: the unimodal arrangement of
/// `M_η` whose decreasing tail is `|w|, |w|-1, .., ell+1`.
pub fn first_admissible_chain(alpha: &AlphabetPoset, w: &Word, eta: &Embedding) -> Result<Vec<Embedding>> {
    if is_flat(alpha, &eta.word) || eta.word.is_empty() {
        return Err(Error::FlatSource);
    }
    let m = multiset(alpha, w, eta)?;
    let (_, ell) = eta.support().expect("non-empty");
    let mut rising = Vec::new();
    for (i, &k) in m.iter().enumerate() {
        let pos = i as u32 + 1;
        let copies = if i + 1 > ell { k - 1 } else { k };
        rising.extend(std::iter::repeat_n(pos, copies as usize));
    }
    let tail = (ell + 1..=w.len()).rev().map(|p| p as u32);
    let mut cur = Embedding::identity(w.clone());
    let mut out = vec![cur.clone()];
    for pos in rising.into_iter().chain(tail) {
        cur = cur.reduce_at(alpha, pos as usize).map_err(|_| Error::InvalidMultiset)?;
        out.push(cur.clone());
    }
    if &cur != eta {
        return Err(Error::InvalidMultiset);
    }
    Ok(out)
}

/// Strips MSI brackets from a rendered chain id.
pub fn parse_chain_id(s: &str) -> Result<Vec<u32>> {
    s.chars()
        .filter(|c| *c != '[' && *c != ']')
        .collect::<String>()
        .split('-')
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad chain id `{s}`"))))
        .collect()
}

/// Bracket annotations as inclusive vertex ranges `first..=last` over
/// `v_1 .. v_{n-1}`.
pub type Brackets<'b> = &'b [(usize, usize)];

fn bracket_counts(brackets: Brackets, k: usize) -> (usize, usize) {
    let opens = brackets.iter().filter(|r| r.0 == k).count();
    let closes = brackets.iter().filter(|r| r.1 == k).count();
    (opens, closes)
}

/// Chain id with `[` and `]` around each bracketed run of vertices.
pub fn bracketed_id(c: &MaximalChain, brackets: Brackets) -> String {
    let mut s = String::new();
    for k in 1..=c.len() {
        s.push_str(&c.label(k).to_string());
        if k < c.len() {
            let (o, cl) = bracket_counts(brackets, k);
            s.push_str(&"[".repeat(o));
            s.push('-');
            s.push_str(&"]".repeat(cl));
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Tsv,
}

/// A chain, its bracketed vertex ranges and any trailing columns.
pub type ChainRow = (MaximalChain, Vec<(usize, usize)>, Vec<String>);

/// One row per chain: bracketed id, then `v_0, l_1, v_1, ..` with
/// embeddings printed as padded cells.
pub fn render_chain_table(
    iv: &Interval,
    rows: &[ChainRow],
    extra_headers: &[&str],
    format: TableFormat,
) -> String {
    let n = rows.first().map_or(0, |r| r.0.len());
    let mut header = vec!["Chain Id".to_string(), "v_0".to_string()];
    for k in 1..=n {
        header.push(format!("l_{k}"));
        header.push(format!("v_{k}"));
    }
    header.extend(extra_headers.iter().map(|s| s.to_string()));
    let mut table = vec![header];
    for (c, brackets, extra) in rows {
        let mut row = vec![bracketed_id(c, brackets)];
        for k in 0..=c.len() {
            if k > 0 {
                row.push(c.label(k).to_string());
            }
            let (o, cl) = if k == 0 || k == c.len() { (0, 0) } else { bracket_counts(brackets, k) };
            let cells = render_cells(iv.alpha, &c.embedding(iv, k).cells());
            row.push(format!("{}{}{}", "[".repeat(o), cells, "]".repeat(cl)));
        }
        row.extend(extra.iter().cloned());
        table.push(row);
    }
    format_table(&table, format)
}

pub fn format_table(table: &[Vec<String>], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Tsv => {
            for row in table {
                let _ = writeln!(out, "{}", row.join("\t"));
            }
        }
        TableFormat::Text => {
            let cols = table.iter().map(Vec::len).max().unwrap_or(0);
            let mut width = vec![0; cols];
            for row in table {
                for (i, cell) in row.iter().enumerate() {
                    width[i] = width[i].max(cell.chars().count());
                }
            }
            for row in table {
                let line: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| format!("{cell:<w$}", w = width[i]))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }
    }
    out
}

/// Chain ids grouped by the start offset of the embedding each chain
/// ends at.
pub fn ids_by_endpoint(chains: &[MaximalChain]) -> BTreeMap<u32, Vec<Vec<u32>>> {
    let mut out: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for c in chains {
        out.entry(*c.starts.last().expect("non-empty")).or_default().push(c.labels.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::parse_alphabet;
    use crate::words::parse_word;

    fn chains_of(alpha: &AlphabetPoset, u: &str, w: &str) -> Vec<String> {
        let iv = Interval::new(alpha, &parse_word(alpha, u).unwrap(), &parse_word(alpha, w).unwrap()).unwrap();
        enumerate_chains(&iv, 1000).unwrap().iter().map(MaximalChain::id_string).collect()
    }

    #[test]
    fn chain_ids_of_b_bbabb() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        assert_eq!(
            chains_of(&a, "b", "bbabb"),
            ["1-2-3-4", "1-2-5-3", "1-5-2-3", "1-5-4-3", "5-1-2-3", "5-1-4-3", "5-4-1-3", "5-4-3-1"]
        );
    }

    #[test]
    fn chain_ids_of_121_1221() {
        let c = parse_alphabet("chain:2").unwrap();
        assert_eq!(chains_of(&c, "121", "1221"), ["1-2", "2-1", "3-4", "4-3"]);
    }

    #[test]
    fn chain_count_matches_enumeration() {
        let c = parse_alphabet("chain:2").unwrap();
        let iv = Interval::new(&c, &parse_word(&c, "2").unwrap(), &parse_word(&c, "2212").unwrap()).unwrap();
        assert_eq!(count_chains(&iv), 17);
        assert_eq!(enumerate_chains(&iv, 100).unwrap().len(), 17);
        assert!(matches!(enumerate_chains(&iv, 5), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn descents_on_b_bbabb() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        let iv = Interval::new(&a, &parse_word(&a, "b").unwrap(), &parse_word(&a, "bbabb").unwrap()).unwrap();
        let chains = enumerate_chains(&iv, 100).unwrap();
        let c = chains.iter().find(|c| c.id_string() == "5-4-1-3").unwrap();
        assert_eq!(
            classify_steps(&iv, c),
            [StepKind::WeakDescent, StepKind::StrongDescent, StepKind::Ascent]
        );
    }

    #[test]
    fn first_admissible_chains() {
        let c = parse_alphabet("chain:2").unwrap();
        let w = parse_word(&c, "1221").unwrap();
        let eta = Embedding::new(parse_word(&c, "121").unwrap(), 0, 4);
        assert_eq!(labels_of(&first_admissible_chain(&c, &w, &eta).unwrap()), [3, 4]);
        assert_eq!(labels_of(&lex_first_chain_to(&c, &w, &eta).unwrap()), [3, 4]);
        let w = parse_word(&c, "2212").unwrap();
        let eta = Embedding::new(parse_word(&c, "2").unwrap(), 0, 4);
        assert_eq!(labels_of(&first_admissible_chain(&c, &w, &eta).unwrap()), [2, 4, 4, 3, 2]);
        let flat = Embedding::new(parse_word(&c, "1").unwrap(), 0, 4);
        assert!(matches!(first_admissible_chain(&c, &w, &flat), Err(Error::FlatSource)));
    }

    #[test]
    fn admissibility_examples() {
        // eta = 0200 in 2212
        let m = [2, 0, 1, 2];
        assert!(is_admissible(&[1, 4, 4, 1, 3], &m, 2, 2));
        assert!(!is_admissible(&[1, 4, 3, 1, 4], &m, 2, 2));
        // eta = 00110 in 22122
        let m = [2, 2, 0, 1, 2];
        assert!(is_strongly_admissible(&[2, 4, 5, 5, 1, 1, 2], &m, 3, 4));
        assert!(is_strongly_admissible(&[1, 1, 2, 2, 5, 5, 4], &m, 3, 4));
        assert!(!is_strongly_admissible(&[1, 1, 2, 2, 4, 5, 5], &m, 3, 4));
    }

    #[test]
    fn bracket_rendering_round_trips() {
        let c = MaximalChain { ids: vec![0; 6], starts: vec![0; 6], labels: vec![2, 4, 4, 3, 2] };
        let s = bracketed_id(&c, &[(1, 2), (2, 4)]);
        assert_eq!(s, "2[-4[-]4-3-]2");
        assert_eq!(parse_chain_id(&s).unwrap(), c.labels);
    }
}
