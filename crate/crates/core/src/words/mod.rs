//! Words, embeddings and the generalized factor order.
//!
//! `u <= w` when some window of `w` of length `|u|` dominates `u`
//! letterwise. An embedding records such a window as a padded copy of `u`
//! inside `w`, with `0` marking padding cells. Positions are 1-based
//! throughout the public interface.

mod principal;

pub use principal::{
    bases, maximal_outer_factors, primary_prefix, principal_factors, principal_factors_of_degree,
    principal_index, Base, PrincipalFactor,
};

use std::fmt;

use crate::alphabet::{AlphabetPoset, Letter};
use crate::error::{Error, Result};

/// A cell of an embedding; `None` is the padding symbol.
pub type Cell = Option<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> Letter {
        self.0[i - 1]
    }

    /// Letter at 1-based position `i`, or padding past either end.
    pub fn cell(&self, i: usize) -> Cell {
        if i == 0 {
            None
        } else {
            self.0.get(i - 1).copied()
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.0.len() - len..].to_vec())
    }

    pub fn window(&self, start: usize, len: usize) -> &[Letter] {
        &self.0[start..start + len]
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// An occurrence of a word inside a host of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    /// Number of padding cells before the support.
    pub start: usize,
    pub word: Word,
    pub host_len: usize,
}

impl Embedding {
    pub fn new(word: Word, start: usize, host_len: usize) -> Self {
        assert!(start + word.len() <= host_len, "embedding overflows its host");
        Embedding { start, word, host_len }
    }

    /// The whole word as an embedding of itself.
    pub fn identity(word: Word) -> Self {
        let n = word.len();
        Embedding { start: 0, word, host_len: n }
    }

    pub fn cells(&self) -> Vec<Cell> {
        (1..=self.host_len).map(|i| self.cell(i)).collect()
    }

    pub fn cell(&self, i: usize) -> Cell {
        if i <= self.start || i > self.start + self.word.len() {
            None
        } else {
            Some(self.word.at(i - self.start))
        }
    }

    /// First and last host positions of the support, when non-empty.
    pub fn support(&self) -> Option<(usize, usize)> {
        (!self.word.is_empty()).then(|| (self.start + 1, self.start + self.word.len()))
    }

    /// Reducible host positions, in increasing order.
    pub fn reducible_positions(&self, alpha: &AlphabetPoset) -> Vec<usize> {
        reducible_positions(alpha, &self.word).into_iter().map(|p| p + self.start).collect()
    }

    /// Applies the cover reduction at host position `i`.
    pub fn reduce_at(&self, alpha: &AlphabetPoset, i: usize) -> Result<Embedding> {
        if i <= self.start {
            return Err(Error::NotReducible(i));
        }
        let (word, shift) = reduce_word_at(alpha, &self.word, i - self.start)?;
        Ok(Embedding { start: self.start + shift, word, host_len: self.host_len })
    }

    /// Cellwise domination, with padding below every letter.
    pub fn dominates(&self, alpha: &AlphabetPoset, other: &Embedding) -> bool {
        self.host_len == other.host_len
            && (1..=self.host_len).all(|i| cell_le(alpha, other.cell(i), self.cell(i)))
    }
}

pub fn cell_le(alpha: &AlphabetPoset, a: Cell, b: Cell) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => alpha.letter_le(x, y),
    }
}

/// Rank of a cell: padding is -1, a root 0.
pub fn cell_rank(alpha: &AlphabetPoset, c: Cell) -> i64 {
    c.map_or(-1, |x| alpha.letter_rank(x) as i64)
}

/// Whether `u` sits in `w` at offset `start`.
pub fn embeds_at(alpha: &AlphabetPoset, u: &Word, w: &Word, start: usize) -> bool {
    start + u.len() <= w.len()
        && u.letters().iter().zip(w.window(start, u.len())).all(|(&a, &b)| alpha.letter_le(a, b))
}

/// `u <= w` in generalized factor order.
pub fn is_factor(alpha: &AlphabetPoset, u: &Word, w: &Word) -> bool {
    u.len() <= w.len() && (0..=w.len() - u.len()).any(|s| embeds_at(alpha, u, w, s))
}

/// Offsets of every occurrence of `u` in `w`.
pub fn embedding_starts(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Vec<usize> {
    if u.len() > w.len() {
        return Vec::new();
    }
    (0..=w.len() - u.len()).filter(|&s| embeds_at(alpha, u, w, s)).collect()
}

pub fn embeddings(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Vec<Embedding> {
    embedding_starts(alpha, u, w)
        .into_iter()
        .map(|s| Embedding::new(u.clone(), s, w.len()))
        .collect()
}

/// `p` dominates the first `|p|` letters of `w`.
pub fn is_prefix(alpha: &AlphabetPoset, p: &Word, w: &Word) -> bool {
    embeds_at(alpha, p, w, 0)
}

/// `p` dominates the last `|p|` letters of `w`.
pub fn is_suffix(alpha: &AlphabetPoset, p: &Word, w: &Word) -> bool {
    p.len() <= w.len() && embeds_at(alpha, p, w, w.len() - p.len())
}

/// Non-empty and a power of a single root.
pub fn is_flat(alpha: &AlphabetPoset, w: &Word) -> bool {
    match w.letters().first() {
        None => false,
        Some(&x) => alpha.is_root(x) && w.letters().iter().all(|&y| y == x),
    }
}

/// Every letter is a root.
pub fn is_rooted(alpha: &AlphabetPoset, w: &Word) -> bool {
    w.letters().iter().all(|&x| alpha.is_root(x))
}

/// Sum of `rank(letter) + 1`; the rank of `w` in factor order.
pub fn word_rank(alpha: &AlphabetPoset, w: &Word) -> u64 {
    w.letters().iter().map(|&x| alpha.letter_rank(x) as u64 + 1).sum()
}

/// Positions whose reduction yields a word covered by `w`: every non-root
/// letter, the first letter, and the last letter unless `w` is flat.
pub fn reducible_positions(alpha: &AlphabetPoset, w: &Word) -> Vec<usize> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let flat = is_flat(alpha, w);
    (1..=n)
        .filter(|&i| i == 1 || !alpha.is_root(w.at(i)) || (i == n && !flat))
        .collect()
}

pub fn is_reducible(alpha: &AlphabetPoset, w: &Word, i: usize) -> bool {
    let n = w.len();
    if i == 0 || i > n {
        return false;
    }
    i == 1 || !alpha.is_root(w.at(i)) || (i == n && !is_flat(alpha, w))
}

/// Reduces the letter at `i` one step; a root at either end is deleted.
pub fn reduce_at(alpha: &AlphabetPoset, w: &Word, i: usize) -> Result<Word> {
    reduce_word_at(alpha, w, i).map(|(v, _)| v)
}

// Returns the reduced word and the shift of its start (1 when the first
// letter was deleted).
fn reduce_word_at(alpha: &AlphabetPoset, w: &Word, i: usize) -> Result<(Word, usize)> {
    if !is_reducible(alpha, w, i) {
        return Err(Error::NotReducible(i));
    }
    let mut letters = w.letters().to_vec();
    match alpha.reduce_letter(w.at(i)) {
        Some(p) => {
            letters[i - 1] = p;
            Ok((Word(letters), 0))
        }
        None => {
            letters.remove(i - 1);
            Ok((Word(letters), usize::from(i == 1)))
        }
    }
}

/// The words covered by `w`, one per reducible position.
pub fn covers_of(alpha: &AlphabetPoset, w: &Word) -> Vec<(usize, Word)> {
    reducible_positions(alpha, w)
        .into_iter()
        .map(|i| (i, reduce_at(alpha, w, i).expect("reducible position")))
        .collect()
}

/// Longest proper prefix of `w` that is also a suffix, letter for letter.
pub fn outer_word(w: &Word) -> Word {
    let n = w.len();
    (0..n)
        .rev()
        .find(|&k| w.letters()[..k] == w.letters()[n - k..])
        .map(|k| w.prefix(k))
        .unwrap_or_default()
}

/// `w` without its first and last letters.
pub fn inner_word(w: &Word) -> Result<Word> {
    if w.len() < 2 {
        return Err(Error::Length);
    }
    Ok(Word::new(w.letters()[1..w.len() - 1].to_vec()))
}

/// Removes `k` trailing root letters; `None` when fewer trail `w`.
pub fn strip_minimal_suffix(alpha: &AlphabetPoset, w: &Word, k: usize) -> Option<Word> {
    if k > w.len() {
        return None;
    }
    let keep = w.len() - k;
    w.letters()[keep..]
        .iter()
        .all(|&x| alpha.is_root(x))
        .then(|| w.prefix(keep))
}

/// Parses a word. Letters are single characters when every letter name is
/// one character long, and comma separated otherwise. The empty string and
/// `ε` denote the empty word.
pub fn parse_word(alpha: &AlphabetPoset, s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() || (s == "ε" && alpha.letter("ε").is_none()) {
        return Ok(Word::empty());
    }
    let tokens: Vec<String> = if s.contains(',') {
        s.split(',').map(|t| t.trim().to_string()).collect()
    } else if alpha.single_char_names() {
        s.chars().map(String::from).collect()
    } else {
        match alpha.letter(s) {
            Some(_) => vec![s.to_string()],
            None => {
                return Err(Error::Parse(format!(
                    "`{s}` is ambiguous; separate multi-character letters with commas"
                )))
            }
        }
    };
    tokens
        .iter()
        .map(|t| alpha.letter(t).ok_or_else(|| Error::Parse(format!("unknown letter `{t}`"))))
        .collect::<Result<Vec<_>>>()
        .map(Word)
}

/// Checks that every letter of `w` belongs to `alpha`.
pub fn check_word(alpha: &AlphabetPoset, w: &Word) -> Result<()> {
    if w.letters().iter().all(|x| x.index() < alpha.len()) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

pub fn render_word(alpha: &AlphabetPoset, w: &Word) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    let sep = if alpha.single_char_names() { "" } else { "," };
    w.letters().iter().map(|&x| alpha.name(x)).collect::<Vec<_>>().join(sep)
}

/// Renders cells with `0` for padding.
pub fn render_cells(alpha: &AlphabetPoset, cells: &[Cell]) -> String {
    let sep = if alpha.single_char_names() { "" } else { "," };
    cells
        .iter()
        .map(|c| c.map_or("0", |x| alpha.name(x)))
        .collect::<Vec<_>>()
        .join(sep)
}

/// Display adaptor pairing a word with its alphabet.
pub struct Show<'a>(pub &'a AlphabetPoset, pub &'a Word);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_word(self.0, self.1))
    }
}

/// All words of length at most `max_len`, shortest first.
pub fn all_words(alpha: &AlphabetPoset, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alpha.len());
        for w in &layer {
            for x in alpha.letters() {
                let mut v = w.0.clone();
                v.push(x);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::parse_alphabet;

    fn ab() -> AlphabetPoset {
        parse_alphabet("antichain:a,b").unwrap()
    }

    fn w(alpha: &AlphabetPoset, s: &str) -> Word {
        parse_word(alpha, s).unwrap()
    }

    #[test]
    fn factor_order_on_an_antichain() {
        let a = ab();
        assert!(is_factor(&a, &w(&a, "ab"), &w(&a, "bbabb")));
        assert!(!is_factor(&a, &w(&a, "aa"), &w(&a, "bbabb")));
        assert!(is_factor(&a, &Word::empty(), &w(&a, "b")));
        assert_eq!(embedding_starts(&a, &w(&a, "b"), &w(&a, "bbabb")), vec![0, 1, 3, 4]);
    }

    #[test]
    fn factor_order_dominates_letterwise() {
        let c = parse_alphabet("chain:3").unwrap();
        assert!(is_factor(&c, &w(&c, "121"), &w(&c, "1221")));
        assert_eq!(embedding_starts(&c, &w(&c, "121"), &w(&c, "1221")), vec![0, 1]);
        assert!(!is_factor(&c, &w(&c, "3"), &w(&c, "2212")));
    }

    #[test]
    fn reducible_positions_follow_flatness() {
        let a = ab();
        assert_eq!(reducible_positions(&a, &w(&a, "bab")), vec![1, 3]);
        assert_eq!(reducible_positions(&a, &w(&a, "bbb")), vec![1]);
        let c = parse_alphabet("chain:3").unwrap();
        assert_eq!(reducible_positions(&c, &w(&c, "1221")), vec![1, 2, 3, 4]);
        assert_eq!(reducible_positions(&c, &w(&c, "2112")), vec![1, 4]);
        assert_eq!(reducible_positions(&c, &w(&c, "111")), vec![1]);
    }

    #[test]
    fn reductions_are_covers() {
        let a = ab();
        assert_eq!(reduce_at(&a, &w(&a, "bab"), 1).unwrap(), w(&a, "ab"));
        assert_eq!(reduce_at(&a, &w(&a, "bab"), 3).unwrap(), w(&a, "ba"));
        assert!(matches!(reduce_at(&a, &w(&a, "bab"), 2), Err(Error::NotReducible(2))));
        let c = parse_alphabet("chain:3").unwrap();
        assert_eq!(reduce_at(&c, &w(&c, "1221"), 3).unwrap(), w(&c, "1211"));
    }

    #[test]
    fn embedding_reduction_tracks_padding() {
        let a = ab();
        let e = Embedding::identity(w(&a, "bbabb"));
        let e = e.reduce_at(&a, 1).unwrap();
        assert_eq!(render_cells(&a, &e.cells()), "0babb");
        let e = e.reduce_at(&a, 5).unwrap();
        assert_eq!(render_cells(&a, &e.cells()), "0bab0");
        assert_eq!(e.reducible_positions(&a), vec![2, 4]);
    }

    #[test]
    fn outer_and_inner_words() {
        let a = ab();
        assert_eq!(outer_word(&w(&a, "abab")), w(&a, "ab"));
        assert_eq!(outer_word(&w(&a, "bbabb")), w(&a, "bb"));
        assert_eq!(outer_word(&w(&a, "ab")), Word::empty());
        assert_eq!(inner_word(&w(&a, "bbabb")).unwrap(), w(&a, "bab"));
        assert_eq!(inner_word(&w(&a, "ab")).unwrap(), Word::empty());
        assert!(matches!(inner_word(&w(&a, "b")), Err(Error::Length)));
    }

    #[test]
    fn strip_minimal_suffix_needs_roots() {
        let c = parse_alphabet("chain:3").unwrap();
        assert_eq!(strip_minimal_suffix(&c, &w(&c, "3111"), 2), Some(w(&c, "31")));
        assert_eq!(strip_minimal_suffix(&c, &w(&c, "3111"), 4), None);
        assert_eq!(strip_minimal_suffix(&c, &w(&c, "3111"), 0), Some(w(&c, "3111")));
    }

    #[test]
    fn multi_character_letters_need_commas() {
        let c = parse_alphabet("chain:12").unwrap();
        let v = parse_word(&c, "1,12,3").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(render_word(&c, &v), "1,12,3");
        assert!(matches!(parse_word(&c, "123"), Err(Error::Parse(_))));
        assert_eq!(parse_word(&c, "12").unwrap().len(), 1);
    }

    #[test]
    fn rank_counts_letter_depths() {
        let c = parse_alphabet("chain:3").unwrap();
        assert_eq!(word_rank(&c, &w(&c, "1221")), 6);
        assert_eq!(word_rank(&c, &Word::empty()), 0);
    }
}
