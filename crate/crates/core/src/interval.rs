//! Closed intervals `[u, w]` of factor order, materialised as a graded
//! poset with dense element indices.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::alphabet::AlphabetPoset;
use crate::error::{Error, Result};
use crate::words::{covers_of, is_factor, render_word, word_rank, Word};

pub const DEFAULT_ELEMENT_CAP: usize = 1 << 20;

/// A cover step from an element to one it covers, by local position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    /// 1-based position in the source word.
    pub pos: u32,
    pub child: u32,
    /// 1 when the first letter was deleted.
    pub shift: u32,
}

#[derive(Debug, Clone)]
pub struct Interval<'a> {
    pub alpha: &'a AlphabetPoset,
    /// Elements sorted by rank, then lexicographically; `0` is the bottom.
    elements: Vec<Word>,
    index: HashMap<Word, u32>,
    rank: Vec<u32>,
    moves: Vec<Vec<Move>>,
    parents: Vec<Vec<u32>>,
    words_per_row: usize,
    // down[x] is the bitset of elements below or equal to x
    down: Vec<u64>,
}

impl<'a> Interval<'a> {
    pub fn new(alpha: &'a AlphabetPoset, u: &Word, w: &Word) -> Result<Self> {
        Self::with_cap(alpha, u, w, DEFAULT_ELEMENT_CAP)
    }

    /// Builds `[u, w]` by walking covers down from `w`, failing once more
    /// than `cap` elements are discovered.
    pub fn with_cap(alpha: &'a AlphabetPoset, u: &Word, w: &Word, cap: usize) -> Result<Self> {
        if !is_factor(alpha, u, w) {
            return Err(Error::NotComparable { u: render_word(alpha, u), w: render_word(alpha, w) });
        }
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(w.clone());
        let mut stack = vec![w.clone()];
        while let Some(x) = stack.pop() {
            for (_, y) in covers_of(alpha, &x) {
                if !seen.contains(&y) && is_factor(alpha, u, &y) {
                    seen.insert(y.clone());
                    if seen.len() > cap {
                        return Err(Error::SizeCapExceeded { what: "interval", found: seen.len(), cap });
                    }
                    stack.push(y);
                }
            }
        }
        let base = word_rank(alpha, u);
        let mut elements: Vec<Word> = seen.into_iter().collect();
        elements.sort_by_cached_key(|x| (word_rank(alpha, x), x.clone()));
        let index: HashMap<Word, u32> =
            elements.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
        let rank: Vec<u32> = elements.iter().map(|x| (word_rank(alpha, x) - base) as u32).collect();
        let n = elements.len();
        let mut moves = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for (i, x) in elements.iter().enumerate() {
            for (pos, y) in covers_of(alpha, x) {
                if let Some(&j) = index.get(&y) {
                    let shift = u32::from(pos == 1 && y.len() < x.len());
                    moves[i].push(Move { pos: pos as u32, child: j, shift });
                    parents[j as usize].push(i as u32);
                }
            }
        }
        let words_per_row = n.div_ceil(64);
        let mut down = vec![0u64; n * words_per_row];
        for i in 0..n {
            let row = i * words_per_row;
            down[row + i / 64] |= 1 << (i % 64);
            for m in moves[i].clone() {
                let c = m.child as usize * words_per_row;
                for k in 0..words_per_row {
                    down[row + k] |= down[c + k];
                }
            }
        }
        Ok(Interval { alpha, elements, index, rank, moves, parents, words_per_row, down })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> &Word {
        &self.elements[0]
    }

    pub fn top(&self) -> &Word {
        self.elements.last().expect("intervals are non-empty")
    }

    pub fn top_id(&self) -> u32 {
        (self.elements.len() - 1) as u32
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn word(&self, id: u32) -> &Word {
        &self.elements[id as usize]
    }

    pub fn id(&self, w: &Word) -> Option<u32> {
        self.index.get(w).copied()
    }

    /// Rank above the bottom element.
    pub fn rank(&self, id: u32) -> u32 {
        self.rank[id as usize]
    }

    pub fn rank_gap(&self) -> u32 {
        self.rank[self.elements.len() - 1]
    }

    /// Cover steps leaving `id` inside the interval, by increasing position.
    pub fn moves(&self, id: u32) -> &[Move] {
        &self.moves[id as usize]
    }

    pub fn parents(&self, id: u32) -> &[u32] {
        &self.parents[id as usize]
    }

    /// `x <= y` inside the interval.
    #[inline]
    pub fn le(&self, x: u32, y: u32) -> bool {
        let x = x as usize;
        self.down[y as usize * self.words_per_row + x / 64] >> (x % 64) & 1 == 1
    }

    pub fn cover_count(&self) -> usize {
        self.moves.iter().map(Vec::len).sum()
    }

    fn below(&self, y: u32) -> impl Iterator<Item = u32> + '_ {
        let row = &self.down[y as usize * self.words_per_row..(y as usize + 1) * self.words_per_row];
        row.iter().enumerate().flat_map(|(k, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros();
                bits &= bits - 1;
                Some((k * 64) as u32 + t)
            })
        })
    }

    /// `μ(u, x)` for every element `x`, by the defining recursion.
    pub fn mobius_table(&self) -> Vec<i64> {
        let mut mu = vec![0i64; self.len()];
        mu[0] = 1;
        for x in 1..self.len() as u32 {
            let s: i64 = self.below(x).filter(|&y| y != x).map(|y| mu[y as usize]).sum();
            mu[x as usize] = -s;
        }
        mu
    }

    /// Number of chains of the open interval by vertex count; entry `k`
    /// counts chains with `k + 1` vertices.
    pub fn face_counts(&self) -> Vec<u128> {
        let n = self.len();
        if n < 2 {
            return Vec::new();
        }
        let top = n - 1;
        let depth = self.rank_gap() as usize;
        // ending[x][k]: chains of k+1 open-interval elements with maximum x
        let mut ending = vec![vec![0u128; depth]; n];
        let mut faces = vec![0u128; depth.saturating_sub(1)];
        for x in 1..top as u32 {
            ending[x as usize][0] = 1;
            let below: Vec<u32> = self.below(x).filter(|&y| y != x && y != 0).collect();
            for y in below {
                for k in 1..depth {
                    let add = ending[y as usize][k - 1];
                    if add != 0 {
                        ending[x as usize][k] = ending[x as usize][k].checked_add(add).expect("face count overflow");
                    }
                }
            }
            for (k, f) in faces.iter_mut().enumerate() {
                *f += ending[x as usize][k];
            }
        }
        faces
    }

    /// Reduced Euler characteristic of the order complex of the open
    /// interval; `1` when the interval is a single point.
    pub fn euler_characteristic(&self) -> i64 {
        if self.len() == 1 {
            return 1;
        }
        let mut chi: i128 = -1;
        for (k, &f) in self.face_counts().iter().enumerate() {
            let f = f as i128;
            chi += if k % 2 == 0 { f } else { -f };
        }
        chi as i64
    }

    /// Graphviz rendering of the Hasse diagram, covers drawn top to bottom
    /// and each vertex labelled with `μ(u, x)`.
    pub fn to_dot(&self) -> String {
        let mu = self.mobius_table();
        let mut s = String::from("digraph interval {\n  rankdir=TB;\n  node [shape=plaintext];\n");
        for id in (0..self.len()).rev() {
            let name = render_word(self.alpha, &self.elements[id]);
            let _ = writeln!(s, "  n{id} [label=\"{name} ({})\"];", mu[id]);
        }
        for id in (0..self.len()).rev() {
            for m in &self.moves[id] {
                let _ = writeln!(s, "  n{id} -> n{};", m.child);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `μ(u, w)` by the defining recursion on `[u, w]`; zero when `u` is not
/// below `w`.
pub fn mobius_recursive(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Result<i64> {
    if !is_factor(alpha, u, w) {
        return Ok(0);
    }
    let iv = Interval::new(alpha, u, w)?;
    Ok(iv.mobius_table()[iv.top_id() as usize])
}
