//! Rooted-forest alphabets.
//!
//! A letter is covered by its children; the minimal letters are the roots.
//! Three textual forms are accepted:
//!
//! ```text
//! antichain:a,b,c
//! chain:4            letters 1..4, k+1 covers k
//! forest:            followed by lines `child parent` or `root name`
//! ```
//!
//! Forest bodies may separate lines with `;` and use `#` comments.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetKind {
    /// Every letter is a root.
    Antichain,
    /// A single root with a single path of covers above it.
    Chain,
    Forest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetPoset {
    names: Vec<String>,
    parent: Vec<Option<Letter>>,
    rank: Vec<u32>,
    index: HashMap<String, Letter>,
    // le[x * n + y] holds x <= y
    le: Vec<bool>,
    kind: AlphabetKind,
    single_char: bool,
}

impl AlphabetPoset {
    /// Builds an alphabet from letter names and parent indices.
    pub fn from_parents(names: Vec<String>, parent: Vec<Option<usize>>) -> Result<Self> {
        assert_eq!(names.len(), parent.len());
        let n = names.len();
        if n == 0 {
            return Err(Error::Parse("alphabet has no letters".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::Parse("alphabet is too large".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(',') || name.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid letter name `{name}`")));
            }
            if index.insert(name.clone(), Letter(i as u16)).is_some() {
                return Err(Error::DuplicateLetter(name.clone()));
            }
        }
        for p in parent.iter().flatten() {
            if *p >= n {
                return Err(Error::Parse(format!("parent index {p} out of range")));
            }
        }
        let mut rank = vec![u32::MAX; n];
        for start in 0..n {
            let mut path = Vec::new();
            let mut cur = Some(start);
            while let Some(c) = cur {
                if rank[c] != u32::MAX {
                    break;
                }
                if path.len() > n {
                    return Err(Error::Cycle(names[c].clone()));
                }
                path.push(c);
                cur = parent[c];
            }
            let base = cur.map_or(0, |c| rank[c] + 1);
            for (r, &v) in (base..).zip(path.iter().rev()) {
                rank[v] = r;
            }
        }
        let parent: Vec<Option<Letter>> = parent.into_iter().map(|p| p.map(|p| Letter(p as u16))).collect();
        let mut le = vec![false; n * n];
        for y in 0..n {
            let mut cur = Some(Letter(y as u16));
            while let Some(x) = cur {
                le[x.index() * n + y] = true;
                cur = parent[x.index()];
            }
        }
        let roots = parent.iter().filter(|p| p.is_none()).count();
        let mut children = vec![0usize; n];
        for p in parent.iter().flatten() {
            children[p.index()] += 1;
        }
        let kind = if roots == n {
            AlphabetKind::Antichain
        } else if roots == 1 && children.iter().all(|&c| c <= 1) {
            AlphabetKind::Chain
        } else {
            AlphabetKind::Forest
        };
        let single_char = names.iter().all(|s| s.chars().count() == 1);
        Ok(AlphabetPoset { names, parent, rank, index, le, kind, single_char })
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("chain needs at least one letter".into()));
        }
        let names = (1..=n).map(|k| k.to_string()).collect();
        let parent = (0..n).map(|k| k.checked_sub(1)).collect();
        Self::from_parents(names, parent)
    }

    pub fn antichain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        let parent = vec![None; names.len()];
        Self::from_parents(names, parent)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn is_antichain(&self) -> bool {
        self.kind == AlphabetKind::Antichain
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| Letter(i as u16))
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.names[x.index()]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    /// Names render without separators when every name is one character.
    pub fn single_char_names(&self) -> bool {
        self.single_char
    }

    pub fn letter_le(&self, x: Letter, y: Letter) -> bool {
        self.le[x.index() * self.names.len() + y.index()]
    }

    pub fn letter_lt(&self, x: Letter, y: Letter) -> bool {
        x != y && self.letter_le(x, y)
    }

    pub fn is_root(&self, x: Letter) -> bool {
        self.parent[x.index()].is_none()
    }

    /// The unique letter covered by `x`, or `None` for a root.
    pub fn reduce_letter(&self, x: Letter) -> Option<Letter> {
        self.parent[x.index()]
    }

    /// Depth of `x` in its tree; roots have rank 0.
    pub fn letter_rank(&self, x: Letter) -> u32 {
        self.rank[x.index()]
    }

    pub fn roots(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters().filter(|&x| self.is_root(x))
    }

    /// The greatest common lower bound of `x` and `y`, if they share a tree.
    pub fn meet(&self, x: Letter, y: Letter) -> Option<Letter> {
        let mut cur = Some(x);
        while let Some(c) = cur {
            if self.letter_le(c, y) {
                return Some(c);
            }
            cur = self.reduce_letter(c);
        }
        None
    }

    /// All letters at or below `x`, from `x` down to its root.
    pub fn down_set(&self, x: Letter) -> Vec<Letter> {
        let mut out = vec![x];
        let mut cur = x;
        while let Some(p) = self.reduce_letter(cur) {
            out.push(p);
            cur = p;
        }
        out
    }

    pub fn spec(&self) -> String {
        match self.kind {
            AlphabetKind::Antichain => format!("antichain:{}", self.names.join(",")),
            AlphabetKind::Chain if self.names.iter().enumerate().all(|(i, s)| *s == (i + 1).to_string()) => {
                format!("chain:{}", self.names.len())
            }
            _ => {
                let mut s = String::from("forest:");
                for x in self.letters() {
                    match self.reduce_letter(x) {
                        None => s.push_str(&format!("\nroot {}", self.name(x))),
                        Some(p) => s.push_str(&format!("\n{} {}", self.name(x), self.name(p))),
                    }
                }
                s
            }
        }
    }
}

impl fmt::Display for AlphabetPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec().replace('\n', ";"))
    }
}

/// Parses an alphabet description. `chain:auto` is rejected here; see
/// [`parse_alphabet_for_words`].
pub fn parse_alphabet(spec: &str) -> Result<AlphabetPoset> {
    parse_alphabet_for_words(spec, &[])
}

/// Parses an alphabet description, sizing `chain:auto` from the largest
/// numeric letter occurring in `words`.
pub fn parse_alphabet_for_words(spec: &str, words: &[&str]) -> Result<AlphabetPoset> {
    let spec = spec.trim();
    let (head, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected `kind:body`, got `{spec}`")))?;
    match head.trim() {
        "antichain" => {
            let names: Vec<&str> = body.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            AlphabetPoset::antichain(&names)
        }
        "chain" => {
            let body = body.trim();
            if body == "auto" {
                let n = words.iter().map(|w| max_numeric_letter(w)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0);
                return AlphabetPoset::chain(n.max(1));
            }
            let n: usize = body
                .parse()
                .map_err(|_| Error::Parse(format!("chain size `{body}` is not a number")))?;
            AlphabetPoset::chain(n)
        }
        "forest" => parse_forest(body),
        other => Err(Error::Parse(format!("unknown alphabet kind `{other}`"))),
    }
}

fn max_numeric_letter(word: &str) -> Result<usize> {
    let parts: Vec<String> = if word.contains(',') {
        word.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        word.chars().map(String::from).collect()
    };
    let mut best = 0;
    for p in parts.iter().filter(|p| !p.is_empty()) {
        let v: usize = p
            .parse()
            .map_err(|_| Error::Parse(format!("`{p}` is not a chain letter")))?;
        if v == 0 {
            return Err(Error::Parse("chain letters start at 1".into()));
        }
        best = best.max(v);
    }
    Ok(best)
}

fn parse_forest(body: &str) -> Result<AlphabetPoset> {
    let mut names: Vec<String> = Vec::new();
    let mut parent_names: Vec<Option<String>> = Vec::new();
    for raw in body.split(['\n', ';']) {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (child, parent) = match toks.as_slice() {
            ["root", name] => (*name, None),
            [child, parent] => (*child, Some(parent.to_string())),
            _ => return Err(Error::Parse(format!("cannot read forest line `{line}`"))),
        };
        if names.iter().any(|n| n == child) {
            return Err(Error::DuplicateLetter(child.to_string()));
        }
        names.push(child.to_string());
        parent_names.push(parent);
    }
    let mut parents = Vec::with_capacity(names.len());
    for p in &parent_names {
        parents.push(match p {
            None => None,
            Some(p) => Some(
                names
                    .iter()
                    .position(|n| n == p)
                    .ok_or_else(|| Error::Parse(format!("parent `{p}` is never declared")))?,
            ),
        });
    }
    AlphabetPoset::from_parents(names, parents)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_letters_cover_their_predecessor() {
        let a = parse_alphabet("chain:3").unwrap();
        assert_eq!(a.kind(), AlphabetKind::Chain);
        let one = a.letter("1").unwrap();
        let three = a.letter("3").unwrap();
        assert!(a.letter_le(one, three));
        assert!(!a.letter_le(three, one));
        assert_eq!(a.reduce_letter(three), a.letter("2"));
        assert_eq!(a.letter_rank(three), 2);
        assert!(a.is_root(one));
    }

    #[test]
    fn antichain_letters_are_incomparable() {
        let a = parse_alphabet("antichain:a, b").unwrap();
        assert!(a.is_antichain());
        let (x, y) = (a.letter("a").unwrap(), a.letter("b").unwrap());
        assert!(!a.letter_le(x, y) && !a.letter_le(y, x));
        assert!(a.letter_le(x, x));
        assert_eq!(a.meet(x, y), None);
    }

    #[test]
    fn forest_with_comments_and_semicolons() {
        let a = parse_alphabet("forest:\nroot a # base\nb a\nroot 1; 2 1").unwrap();
        assert_eq!(a.kind(), AlphabetKind::Forest);
        let b = a.letter("b").unwrap();
        let two = a.letter("2").unwrap();
        assert_eq!(a.reduce_letter(b), a.letter("a"));
        assert_eq!(a.meet(b, two), None);
        assert_eq!(a.meet(b, a.letter("a").unwrap()), a.letter("a"));
        assert_eq!(a.roots().count(), 2);
    }

    #[test]
    fn forest_errors() {
        assert!(matches!(parse_alphabet("forest:\nx y\ny x"), Err(Error::Cycle(_))));
        assert!(matches!(parse_alphabet("forest:\nroot a\nroot a"), Err(Error::DuplicateLetter(_))));
        assert!(matches!(parse_alphabet("forest:\nb a"), Err(Error::Parse(_))));
        assert!(matches!(parse_alphabet("lattice:3"), Err(Error::Parse(_))));
        assert!(matches!(parse_alphabet("chain:x"), Err(Error::Parse(_))));
        assert!(matches!(parse_alphabet("antichain:a,a"), Err(Error::DuplicateLetter(_))));
    }

    #[test]
    fn chain_auto_takes_the_largest_letter() {
        let a = parse_alphabet_for_words("chain:auto", &["2212", "13"]).unwrap();
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn spec_round_trips() {
        for spec in ["antichain:a,b", "chain:4", "forest:\nroot a\nb a\nc a\nroot x"] {
            let a = parse_alphabet(spec).unwrap();
            assert_eq!(parse_alphabet(&a.spec()).unwrap(), a);
        }
    }
}
