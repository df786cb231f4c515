//! Skipped intervals, critical chains and the lexicographic Morse matching
//! on the order complex of an interval.

pub mod engine;
pub mod matching;
pub mod structure;

use std::collections::BTreeMap;
use std::fmt;

use crate::chains::{ChainPath, MaximalChain};
use crate::error::Result;
use crate::interval::Interval;

pub use engine::{ChainReport, MsiTracker, MsiWalk};
pub use matching::{build_matching, validate_matching, MorseMatching, MatchingSummary};

/// The open interval `C(v_start, v_end)`; its vertices are
/// `v_{start+1} ..= v_{end-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Msi {
    pub start: usize,
    pub end: usize,
}

impl Msi {
    pub fn first(&self) -> usize {
        self.start + 1
    }

    pub fn last(&self) -> usize {
        self.end - 1
    }

    pub fn contains(&self, k: usize) -> bool {
        self.start < k && k < self.end
    }

    pub fn vertex_range(&self) -> (usize, usize) {
        (self.first(), self.last())
    }
}

/// One member of `J(C)`: vertices `first ..= last`, cut from `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JInterval {
    pub first: usize,
    pub last: usize,
    pub origin: Msi,
}

impl JInterval {
    /// Whether overlap with earlier members shortened the original MSI.
    pub fn truncated(&self) -> bool {
        self.first != self.origin.first()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JSet {
    pub intervals: Vec<JInterval>,
    /// The intervals partition `v_1 .. v_{n-1}`.
    pub covers: bool,
}

impl JSet {
    /// Dimension of the critical cell a covering `J(C)` contributes.
    pub fn dimension(&self) -> i64 {
        self.intervals.len() as i64 - 1
    }

    pub fn ranges(&self) -> Vec<(usize, usize)> {
        self.intervals.iter().map(|j| (j.first, j.last)).collect()
    }
}

/// Whether `C(v_i, v_j)` is skipped: some chain in `earlier` agrees with
/// `c` everywhere outside the open interval.
pub fn is_skipped(c: &MaximalChain, earlier: &[MaximalChain], i: usize, j: usize) -> bool {
    earlier.iter().any(|e| {
        e.ids.len() == c.ids.len()
            && (0..=i).chain(j..c.ids.len()).all(|k| e.ids[k] == c.ids[k])
    })
}

/// `I(C)` by definition: every skipped open interval of `c` that contains
/// no smaller skipped interval, ordered by first vertex.
pub fn msi_set(c: &MaximalChain, earlier: &[MaximalChain]) -> Vec<Msi> {
    let n = c.len();
    let mut skipped = Vec::new();
    for i in 0..n {
        for j in i + 2..=n {
            if is_skipped(c, earlier, i, j) {
                skipped.push(Msi { start: i, end: j });
            }
        }
    }
    let mut out: Vec<Msi> = skipped
        .iter()
        .filter(|a| {
            !skipped
                .iter()
                .any(|b| b != *a && a.start <= b.start && b.end <= a.end)
        })
        .copied()
        .collect();
    out.sort();
    out
}

/// Refines `I(C)` to the disjoint family `J(C)` for a chain of length `n`.
pub fn refine_to_j(msis: &[Msi], n: usize) -> JSet {
    let mut remaining: Vec<JInterval> = msis
        .iter()
        .map(|m| JInterval { first: m.first(), last: m.last(), origin: *m })
        .collect();
    remaining.sort_by_key(|j| (j.first, j.last));
    let mut chosen: Vec<JInterval> = Vec::new();
    while !remaining.is_empty() {
        let pick = remaining.remove(0);
        chosen.push(pick);
        let mut next: Vec<JInterval> = remaining
            .iter()
            .filter_map(|j| {
                let first = if j.first <= pick.last { pick.last + 1 } else { j.first };
                (first <= j.last).then_some(JInterval { first, ..*j })
            })
            .collect();
        let snapshot = next.clone();
        next.retain(|a| {
            !snapshot
                .iter()
                .any(|b| (b.first, b.last) != (a.first, a.last) && a.first <= b.first && b.last <= a.last)
        });
        next.sort_by_key(|j| (j.first, j.last));
        remaining = next;
    }
    let mut hit = vec![false; n.max(1)];
    for j in &chosen {
        hit[j.first..=j.last].fill(true);
    }
    let covers = (1..n).all(|k| hit[k]);
    JSet { intervals: chosen, covers }
}

/// A critical chain with its `J(C)` and cell dimension.
#[derive(Debug, Clone)]
pub struct CriticalChain {
    pub chain: MaximalChain,
    pub jset: JSet,
    pub dimension: i64,
}

/// Every maximal chain together with `I(C)` and `J(C)`, in lex order.
pub fn analysed_chains(iv: &Interval, cap: usize) -> Result<Vec<(MaximalChain, Vec<Msi>, JSet)>> {
    let mut out = Vec::new();
    let mut over = false;
    MsiWalk::new(iv, false, |r: ChainReport| {
        if out.len() < cap {
            out.push((r.path.to_chain(), r.msis, r.jset));
        } else {
            over = true;
        }
    })
    .run();
    if over {
        return Err(crate::error::Error::SizeCapExceeded { what: "chain list", found: cap + 1, cap });
    }
    Ok(out)
}

/// Chains whose `J(C)` covers the open chain, with dimension `#J(C) - 1`.
pub fn critical_chains(iv: &Interval) -> Vec<CriticalChain> {
    let mut out = Vec::new();
    for_each_critical(iv, |path: &ChainPath, jset: &JSet| {
        out.push(CriticalChain { chain: path.to_chain(), jset: jset.clone(), dimension: jset.dimension() });
    });
    out
}

/// Streams critical chains without materialising the others.
pub fn for_each_critical<F: FnMut(&ChainPath, &JSet)>(iv: &Interval, mut f: F) {
    MsiWalk::new(iv, true, |r: ChainReport| f(r.path, &r.jset)).run();
}

/// `μ(u, w)` as the signed count of critical chains.
pub fn mobius_via_critical(iv: &Interval) -> i64 {
    if iv.len() == 1 {
        return 1;
    }
    let mut mu = 0i64;
    for_each_critical(iv, |_, j| mu += if j.dimension().rem_euclid(2) == 0 { 1 } else { -1 });
    mu
}

/// Critical cells per dimension.
pub type Census = BTreeMap<i64, u64>;

pub fn census(iv: &Interval) -> Census {
    let mut out = Census::new();
    if iv.len() == 1 {
        return out;
    }
    for_each_critical(iv, |_, j| *out.entry(j.dimension()).or_default() += 1);
    out
}

pub fn census_euler(c: &Census) -> i64 {
    c.iter().map(|(&d, &m)| if d.rem_euclid(2) == 0 { m as i64 } else { -(m as i64) }).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyType {
    Contractible,
    Sphere(i64),
    Undetermined,
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyType::Contractible => write!(f, "contractible"),
            HomotopyType::Sphere(d) => write!(f, "S^{d}"),
            HomotopyType::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HomotopyReport {
    pub census: Census,
    pub classification: HomotopyType,
}

/// A single critical cell forces a sphere and none forces contractibility;
/// larger censuses are left unclassified.
pub fn homotopy_report(iv: &Interval) -> HomotopyReport {
    let census = census(iv);
    let cells: u64 = census.values().sum();
    let classification = match cells {
        0 => HomotopyType::Contractible,
        1 => HomotopyType::Sphere(*census.keys().next().expect("one cell")),
        _ => HomotopyType::Undetermined,
    };
    HomotopyReport { census, classification }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{parse_alphabet, AlphabetPoset};
    use crate::chains::enumerate_chains;
    use crate::words::parse_word;

    fn iv<'a>(a: &'a AlphabetPoset, u: &str, w: &str) -> Interval<'a> {
        Interval::new(a, &parse_word(a, u).unwrap(), &parse_word(a, w).unwrap()).unwrap()
    }

    #[test]
    fn engine_agrees_with_definition() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        let c = parse_alphabet("chain:2").unwrap();
        for (alpha, u, w) in [(&a, "b", "bbabb"), (&a, "a", "abbabb"), (&c, "2", "2212"), (&c, "121", "1221")] {
            let iv = iv(alpha, u, w);
            let chains = enumerate_chains(&iv, 1000).unwrap();
            let fast = analysed_chains(&iv, 1000).unwrap();
            assert_eq!(fast.len(), chains.len());
            for (k, (chain, msis, _)) in fast.iter().enumerate() {
                assert_eq!(chain, &chains[k]);
                assert_eq!(msis, &msi_set(chain, &chains[..k]), "{u} {w} chain {}", chain.id_string());
            }
        }
    }

    #[test]
    fn refinement_truncates_overlaps() {
        let i = [Msi { start: 0, end: 3 }, Msi { start: 1, end: 4 }, Msi { start: 2, end: 5 }];
        let j = refine_to_j(&i, 5);
        assert_eq!(j.ranges(), [(1, 2), (3, 3)]);
        assert!(!j.covers);
        let i = [Msi { start: 0, end: 3 }, Msi { start: 1, end: 5 }];
        let j = refine_to_j(&i, 5);
        assert_eq!(j.ranges(), [(1, 2), (3, 4)]);
        assert!(j.covers);
        assert!(j.intervals[1].truncated());
    }

    #[test]
    fn critical_chains_of_small_intervals() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        let crit = critical_chains(&iv(&a, "b", "bbabb"));
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].chain.id_string(), "5-4-3-1");
        assert_eq!(crit[0].dimension, 1);
        assert!(critical_chains(&iv(&a, "a", "abbabb")).is_empty());
        let c = parse_alphabet("chain:2").unwrap();
        let ids: Vec<String> = critical_chains(&iv(&c, "121", "1221")).iter().map(|k| k.chain.id_string()).collect();
        assert_eq!(ids, ["2-1", "3-4", "4-3"]);
        assert_eq!(mobius_via_critical(&iv(&c, "2", "2212")), -1);
    }

    #[test]
    fn homotopy_types() {
        let a = parse_alphabet("antichain:a,b").unwrap();
        assert_eq!(homotopy_report(&iv(&a, "b", "bbabb")).classification, HomotopyType::Sphere(1));
        assert_eq!(homotopy_report(&iv(&a, "a", "abbabb")).classification, HomotopyType::Contractible);
        assert_eq!(homotopy_report(&iv(&a, "a", "ababa")).classification, HomotopyType::Sphere(2));
    }
}
