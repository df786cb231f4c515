use std::collections::BTreeSet;

use super::{
    cell_le, embedding_starts, is_factor, is_flat, is_reducible, is_rooted, reduce_at, strip_minimal_suffix,
    Word,
};
use crate::alphabet::{AlphabetPoset, Letter};

/// A principal factor together with its principal index in the host.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrincipalFactor {
    pub word: Word,
    pub index: usize,
}

/// A word obtained from `w` by lowering some positions one step each.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Base {
    pub word: Word,
    /// Lowered positions of the host, increasing.
    pub lowered: Vec<usize>,
}

impl Base {
    pub fn degree(&self) -> usize {
        self.lowered.len()
    }
}

// Cartesian product of per-position letter choices.
fn product(choices: &[Vec<Letter>]) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for opts in choices {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for &x in opts {
                let mut v: Vec<Letter> = prefix.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(Word::new).collect()
}

// Words of length `len` dominated by `w` at both offsets `s` and `t`.
fn common_factors(alpha: &AlphabetPoset, w: &Word, s: usize, t: usize, len: usize) -> Vec<Word> {
    let mut choices = Vec::with_capacity(len);
    for i in 0..len {
        match alpha.meet(w.letters()[s + i], w.letters()[t + i]) {
            Some(m) => choices.push(alpha.down_set(m)),
            None => return Vec::new(),
        }
    }
    product(&choices)
}

/// Outer factors of `w` (proper prefixes that are also proper suffixes)
/// that are not factors of a longer outer factor.
pub fn maximal_outer_factors(alpha: &AlphabetPoset, w: &Word) -> Vec<Word> {
    let n = w.len();
    let mut outer: BTreeSet<Word> = BTreeSet::new();
    for len in 1..n {
        outer.extend(common_factors(alpha, w, 0, n - len, len));
    }
    outer
        .iter()
        .filter(|u| !outer.iter().any(|v| v.len() > u.len() && is_factor(alpha, u, v)))
        .cloned()
        .collect()
}

/// Smallest reducible position `i` of `w` with `p(i) < w(i)`, treating
/// positions past the end of `p` as padding.
pub fn principal_index(alpha: &AlphabetPoset, w: &Word, p: &Word) -> Option<usize> {
    (1..=w.len()).find(|&i| {
        let (pc, wc) = (p.cell(i), w.cell(i));
        pc != wc && cell_le(alpha, pc, wc) && is_reducible(alpha, w, i)
    })
}

/// Principal factors of `w`: prefixes with another occurrence in `w`, not
/// extended by a longer such prefix, whose other occurrences all vanish
/// once the letter at the principal index is reduced.
pub fn principal_factors(alpha: &AlphabetPoset, w: &Word) -> Vec<PrincipalFactor> {
    let n = w.len();
    if n < 2 || is_flat(alpha, w) {
        return Vec::new();
    }
    let mut repeated: BTreeSet<Word> = BTreeSet::new();
    for s in 1..n {
        for len in 1..=n - s {
            repeated.extend(common_factors(alpha, w, 0, s, len));
        }
    }
    let mut out = Vec::new();
    for p in &repeated {
        let k = p.len();
        let extended = (1..n - k).any(|s| {
            super::embeds_at(alpha, p, w, s) && alpha.meet(w.at(k + 1), w.at(s + k + 1)).is_some()
        });
        if extended {
            continue;
        }
        let Some(index) = principal_index(alpha, w, p) else { continue };
        let reduced = reduce_at(alpha, w, index).expect("principal index is reducible");
        if embedding_starts(alpha, p, &reduced) == [0] {
            out.push(PrincipalFactor { word: p.clone(), index });
        }
    }
    out
}

/// Bases of `w`: each non-root letter may drop one step and a trailing
/// root may be deleted. Rooted words only have themselves as base.
pub fn bases(alpha: &AlphabetPoset, w: &Word) -> Vec<Base> {
    let n = w.len();
    if is_rooted(alpha, w) {
        return vec![Base { word: w.clone(), lowered: Vec::new() }];
    }
    let lowerable: Vec<usize> = (1..=n)
        .filter(|&i| !alpha.is_root(w.at(i)) || i == n)
        .collect();
    let mut out = Vec::with_capacity(1 << lowerable.len());
    for mask in 0u64..(1u64 << lowerable.len()) {
        let lowered: Vec<usize> = lowerable
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        let mut letters = w.letters().to_vec();
        for &i in &lowered {
            match alpha.reduce_letter(w.at(i)) {
                Some(p) => letters[i - 1] = p,
                None => {
                    letters.pop();
                }
            }
        }
        out.push(Base { word: Word::new(letters), lowered });
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.lowered.cmp(&b.lowered)));
    out
}

/// Principal factors of degree `degree`: principal factors of a base of
/// that degree whose principal index lies before the first lowered
/// position. Each entry carries the base it came from.
pub fn principal_factors_of_degree(
    alpha: &AlphabetPoset,
    w: &Word,
    degree: usize,
) -> Vec<(PrincipalFactor, Base)> {
    let mut out = Vec::new();
    for base in bases(alpha, w).into_iter().filter(|b| b.degree() == degree) {
        let limit = base.lowered.first().copied().unwrap_or(w.len() + 1);
        for pf in principal_factors(alpha, &base.word) {
            if pf.index < limit {
                out.push((pf, base.clone()));
            }
        }
    }
    out
}

/// The longest `p` with `k > 0` trailing roots stripped that occurs at
/// least twice in `host` once the principal index of `p` is reduced.
pub fn primary_prefix(alpha: &AlphabetPoset, host: &Word, pf: &PrincipalFactor) -> Option<Word> {
    let lowered = reduce_at(alpha, host, pf.index).ok()?;
    (1..=pf.word.len())
        .map_while(|k| strip_minimal_suffix(alpha, &pf.word, k))
        .find(|x| embedding_starts(alpha, x, &lowered).len() >= 2)
}
