//! The explicit acyclic matching on the order complex of an open interval,
//! assembled chain by chain from `I(C)` and `J(C)`.

use std::collections::HashMap;

use crate::chains::MaximalChain;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::words::render_word;

use super::{analysed_chains, Census, JSet, Msi};

/// Default bound on the number of simplices an explicit matching may hold.
pub const DEFAULT_SIMPLEX_CAP: usize = 1 << 18;

#[derive(Debug, Clone)]
pub struct Simplex {
    /// Index of the first maximal chain containing the simplex.
    pub chain: usize,
    /// Interior positions of that chain, bit `k` for `v_k`.
    pub mask: u64,
    pub vertices: Vec<u32>,
}

impl Simplex {
    pub fn dimension(&self) -> i64 {
        self.vertices.len() as i64 - 1
    }
}

#[derive(Debug, Clone)]
pub struct MorseMatching {
    pub chains: Vec<(MaximalChain, Vec<Msi>, JSet)>,
    pub simplices: Vec<Simplex>,
    pub partner: Vec<Option<usize>>,
    /// Every simplex of the complex, the empty one included.
    pub expected_simplices: u128,
    index: HashMap<Vec<u32>, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSummary {
    pub simplices: usize,
    pub pairs: usize,
    pub critical: Census,
}

fn mask_positions(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |k| mask >> k & 1 == 1)
}

fn hits_all(mask: u64, msis: &[Msi]) -> bool {
    msis.iter().all(|m| (m.first()..=m.last()).any(|k| mask >> k & 1 == 1))
}

fn range_mask(first: usize, last: usize) -> u64 {
    (first..=last).fold(0, |m, k| m | 1 << k)
}

/// One step of the per-chain matching, over the positions after the
/// previous step's interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Some position is in no remaining interval; toggle the last such.
    Free(usize),
    /// `first ..= last` is the next member of `J(C)`; toggle `pivot` unless
    /// the simplex meets the member in exactly the pivot.
    Split { first: usize, last: usize, pivot: usize },
}

/// The matching recipe of a chain of length `n` with minimally skipped
/// intervals `msis`. The pivot of a member is its last position lying in
/// no other remaining interval, so toggling it never unhits one.
pub fn matching_levels(msis: &[Msi], n: usize) -> Vec<Level> {
    let mut family: Vec<(usize, usize)> = msis.iter().map(Msi::vertex_range).collect();
    family.sort();
    let mut levels = Vec::new();
    let mut ground = 1;
    loop {
        let mut covered = vec![false; n.max(1)];
        for &(a, b) in &family {
            covered[a..=b].iter_mut().for_each(|c| *c = true);
        }
        if let Some(x) = (ground..n).rev().find(|&k| !covered[k]) {
            levels.push(Level::Free(x));
            return levels;
        }
        let Some(&(a, b)) = family.first() else {
            return levels;
        };
        let pivot = family.get(1).map_or(b, |&(a2, _)| b.min(a2 - 1));
        levels.push(Level::Split { first: a, last: b, pivot });
        let cut: Vec<(usize, usize)> =
            family[1..].iter().map(|&(s, e)| (s.max(b + 1), e)).filter(|&(s, e)| s <= e).collect();
        family = cut
            .iter()
            .filter(|&&(s, e)| !cut.iter().any(|&(s2, e2)| (s2, e2) != (s, e) && s <= s2 && e2 <= e))
            .copied()
            .collect();
        family.sort();
        family.dedup();
        ground = b + 1;
    }
}

/// Partner of a new simplex `h` under `levels`, or `None` when `h` is the
/// critical simplex.
pub fn partner_of(h: u64, levels: &[Level]) -> Option<u64> {
    for level in levels {
        match *level {
            Level::Free(x) => return Some(h ^ 1 << x),
            Level::Split { first, last, pivot } => {
                if h & range_mask(first, last) != 1 << pivot {
                    return Some(h ^ 1 << pivot);
                }
            }
        }
    }
    None
}

/// Builds the matching, refusing complexes with more than `cap` simplices.
pub fn build_matching(iv: &Interval, cap: usize) -> Result<MorseMatching> {
    let expected: u128 = 1 + iv.face_counts().iter().sum::<u128>();
    if expected > cap as u128 {
        return Err(Error::SizeCapExceeded { what: "order complex", found: expected.min(usize::MAX as u128) as usize, cap });
    }
    let chains = if iv.len() == 1 { Vec::new() } else { analysed_chains(iv, cap)? };
    if chains.iter().any(|(c, _, _)| c.len() > 64) {
        return Err(Error::SizeCapExceeded { what: "chain length", found: chains[0].0.len(), cap: 64 });
    }
    let mut simplices = Vec::new();
    let mut index = HashMap::new();
    let mut local: Vec<HashMap<u64, usize>> = Vec::with_capacity(chains.len());
    for (ci, (c, msis, _)) in chains.iter().enumerate() {
        let n = c.len();
        let free = n.saturating_sub(1);
        let mut here = HashMap::new();
        for bits in 0u64..(1u64 << free) {
            let mask = bits << 1;
            if !hits_all(mask, msis) {
                continue;
            }
            let mut vertices: Vec<u32> = mask_positions(mask).map(|k| c.ids[k]).collect();
            vertices.sort_unstable();
            let id = simplices.len();
            if index.insert(vertices.clone(), id).is_some() {
                return Err(Error::Invariant(format!("simplex claimed twice, second time by chain {}", c.id_string())));
            }
            here.insert(mask, id);
            simplices.push(Simplex { chain: ci, mask, vertices });
        }
        local.push(here);
    }
    let levels: Vec<Vec<Level>> = chains.iter().map(|(c, msis, _)| matching_levels(msis, c.len())).collect();
    let mut partner = vec![None; simplices.len()];
    for (id, s) in simplices.iter().enumerate() {
        let c = &chains[s.chain].0;
        if let Some(other) = partner_of(s.mask, &levels[s.chain]) {
            let Some(&j) = local[s.chain].get(&other) else {
                return Err(Error::Invariant(format!(
                    "partner of a simplex of chain {} is not new to that chain",
                    c.id_string()
                )));
            };
            partner[id] = Some(j);
        }
    }
    Ok(MorseMatching { chains, simplices, partner, expected_simplices: expected, index })
}

/// Checks that the matching partitions the complex, pairs faces of
/// adjacent dimension symmetrically, is acyclic, and that its critical
/// cells agree with the census read off `J(C)`.
pub fn validate_matching(m: &MorseMatching) -> Result<MatchingSummary> {
    let bad = |s: String| Err(Error::Invariant(s));
    if m.simplices.len() as u128 != m.expected_simplices {
        return bad(format!("{} simplices assigned, complex has {}", m.simplices.len(), m.expected_simplices));
    }
    let mut pairs = 0;
    let mut critical = Census::new();
    for (i, s) in m.simplices.iter().enumerate() {
        match m.partner[i] {
            None => *critical.entry(s.dimension()).or_default() += 1,
            Some(j) => {
                if m.partner[j] != Some(i) {
                    return bad(format!("matching is not symmetric at {:?}", s.vertices));
                }
                let t = &m.simplices[j];
                if (s.dimension() - t.dimension()).abs() != 1 {
                    return bad(format!("matched simplices {:?} {:?} differ in dimension", s.vertices, t.vertices));
                }
                let (small, big) = if s.vertices.len() < t.vertices.len() { (s, t) } else { (t, s) };
                if !small.vertices.iter().all(|v| big.vertices.binary_search(v).is_ok()) {
                    return bad(format!("matched simplices {:?} {:?} are not incident", s.vertices, t.vertices));
                }
                if i < j {
                    pairs += 1;
                }
            }
        }
    }
    // Face graph: matched edges point up, all others down.
    let n = m.simplices.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (i, s) in m.simplices.iter().enumerate() {
        for k in 0..s.vertices.len() {
            let mut face = s.vertices.clone();
            face.remove(k);
            let Some(&f) = m.index.get(&face) else {
                return bad(format!("face {face:?} missing from the complex"));
            };
            let (a, b) = if m.partner[f] == Some(i) { (f, i) } else { (i, f) };
            out[a].push(b);
            indeg[b] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(x) = stack.pop() {
        seen += 1;
        for &y in &out[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    if seen != n {
        return bad("matching has a directed cycle".into());
    }
    let mut from_j = Census::new();
    for (c, _, j) in &m.chains {
        if j.covers {
            *from_j.entry(j.dimension()).or_default() += 1;
        } else if c.len() == 1 {
            *from_j.entry(-1).or_default() += 1;
        }
    }
    if from_j != critical {
        return bad(format!("critical cells {critical:?} disagree with census {from_j:?}"));
    }
    Ok(MatchingSummary { simplices: n, pairs, critical })
}

/// Vertices from the highest rank down, joined by `-`; `{}` for the empty
/// simplex.
pub fn render_simplex(iv: &Interval, vertices: &[u32]) -> String {
    if vertices.is_empty() {
        return "{}".into();
    }
    let mut v = vertices.to_vec();
    v.sort_by_key(|&x| std::cmp::Reverse((iv.rank(x), x)));
    v.iter().map(|&x| render_word(iv.alpha, iv.word(x))).collect::<Vec<_>>().join("-")
}

impl MorseMatching {
    pub fn simplex_id(&self, vertices: &[u32]) -> Option<usize> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        self.index.get(&v).copied()
    }

    /// Rows `dim`, simplex, partner or `CRITICAL`, by chain then simplex.
    pub fn dump(&self, iv: &Interval) -> Vec<[String; 3]> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let partner = match self.partner[i] {
                    Some(j) => render_simplex(iv, &self.simplices[j].vertices),
                    None => "CRITICAL".into(),
                };
                [s.dimension().to_string(), render_simplex(iv, &s.vertices), partner]
            })
            .collect()
    }
}
