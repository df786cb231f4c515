//! Closed and recursive formulas for `μ(u, w)`: Björner's formula for
//! ordinary factor order, the same-length product formula, and the
//! principal-factor recursion through `d(u, w)` and `ν`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::alphabet::AlphabetPoset;
use crate::error::{Error, Result};
use crate::words::{
    cell_rank, embedding_starts, inner_word, is_factor, is_flat, is_rooted, outer_word, primary_prefix,
    principal_factors_of_degree, render_word, strip_minimal_suffix, word_rank, Embedding, Word,
};

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn not_comparable(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Error {
    Error::NotComparable { u: render_word(alpha, u), w: render_word(alpha, w) }
}

/// `ρ(w) - ρ(u)`.
pub fn rank_gap(alpha: &AlphabetPoset, u: &Word, w: &Word) -> i64 {
    word_rank(alpha, w) as i64 - word_rank(alpha, u) as i64
}

/// Björner's four-case formula. Both words must be rooted, which is
/// automatic over an antichain.
pub fn bjorner_mu(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Result<i64> {
    if !is_rooted(alpha, u) || !is_rooted(alpha, w) {
        return Err(Error::NotAntichain);
    }
    if !is_factor(alpha, u, w) {
        return Err(not_comparable(alpha, u, w));
    }
    Ok(bjorner_rec(alpha, u, w))
}

fn bjorner_rec(alpha: &AlphabetPoset, u: &Word, w: &Word) -> i64 {
    let gap = (w.len() - u.len()) as i64;
    if gap < 2 {
        return sign(gap);
    }
    let o = outer_word(w);
    let i = inner_word(w).expect("gap of two needs two letters");
    if gap > 2 {
        if is_factor(alpha, u, &o) && !is_factor(alpha, &o, &i) {
            return bjorner_rec(alpha, u, &o);
        }
        return 0;
    }
    if !is_flat(alpha, w) && (*u == o || *u == i) {
        1
    } else {
        0
    }
}

/// `(-1)^ρ(u, w)` when no position rises by more than one rank, else 0.
pub fn same_length_mu(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Result<i64> {
    if u.len() != w.len() {
        return Err(Error::Length);
    }
    if !is_factor(alpha, u, w) {
        return Err(not_comparable(alpha, u, w));
    }
    let small = u
        .letters()
        .iter()
        .zip(w.letters())
        .all(|(&a, &b)| alpha.letter_rank(b) - alpha.letter_rank(a) <= 1);
    Ok(if small { sign(rank_gap(alpha, u, w)) } else { 0 })
}

/// The number `t` of all-strong-descent critical chains and `d(u, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentData {
    pub t: u32,
    pub d: i64,
}

/// Counts embeddings `η` of `u` with every cell at most one rank below `w`
/// and at most one padding cell at either end.
pub fn all_descent_data(alpha: &AlphabetPoset, u: &Word, w: &Word) -> DescentData {
    let rho = rank_gap(alpha, u, w);
    if rho <= 1 {
        return DescentData { t: 0, d: sign(rho) };
    }
    let n = w.len();
    if is_flat(alpha, w) || n < 2 {
        return DescentData { t: 0, d: 0 };
    }
    let t = embedding_starts(alpha, u, w)
        .into_iter()
        .filter(|&s| !u.is_empty() && s <= 1 && n - s - u.len() <= 1)
        .map(|s| Embedding::new(u.clone(), s, n))
        .filter(|eta| {
            (1..=n).all(|i| cell_rank(alpha, Some(w.at(i))) - cell_rank(alpha, eta.cell(i)) <= 1)
        })
        .count() as u32;
    DescentData { t, d: t as i64 * sign(rho) }
}

/// One summand of the principal-factor formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleContribution {
    pub base: Word,
    pub degree: usize,
    pub principal_factor: Word,
    pub primary_prefix: Option<Word>,
    /// `(-1)^degree (ν(u, p) - ν(u, x))`.
    pub term: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub descent: DescentData,
    pub triples: Vec<TripleContribution>,
    /// Signed coefficient of each `ν(u, v)` after collecting like terms.
    pub coefficients: BTreeMap<Word, i64>,
}

impl CoefficientTable {
    pub fn mu(&self) -> i64 {
        self.descent.d + self.triples.iter().map(|t| t.term).sum::<i64>()
    }
}

/// Memoised evaluation of the principal-factor recursion over one
/// alphabet. The cache may be shared between threads.
pub struct FormulaEngine<'a> {
    alpha: &'a AlphabetPoset,
    memo: Mutex<HashMap<(Word, Word), i64>>,
}

impl<'a> FormulaEngine<'a> {
    pub fn new(alpha: &'a AlphabetPoset) -> Self {
        FormulaEngine { alpha, memo: Mutex::new(HashMap::new()) }
    }

    fn check(&self, u: &Word, w: &Word) -> Result<()> {
        if u.is_empty() {
            return Err(Error::EmptyBottomWord);
        }
        if !is_factor(self.alpha, u, w) {
            return Err(not_comparable(self.alpha, u, w));
        }
        Ok(())
    }

    pub fn mu(&self, u: &Word, w: &Word) -> Result<i64> {
        self.check(u, w)?;
        Ok(self.mu_unchecked(u, w))
    }

    /// `Σ_i μ(u, v \ i)` over the defined strippings still above `u`.
    pub fn nu(&self, u: &Word, v: &Word) -> i64 {
        let mut total = 0;
        for i in 0..=v.len() {
            let Some(x) = strip_minimal_suffix(self.alpha, v, i) else { break };
            if !is_factor(self.alpha, u, &x) {
                break;
            }
            total += self.mu_unchecked(u, &x);
        }
        total
    }

    fn mu_unchecked(&self, u: &Word, w: &Word) -> i64 {
        let key = (u.clone(), w.clone());
        if let Some(&m) = self.memo.lock().expect("memo lock").get(&key) {
            return m;
        }
        let m = if is_flat(self.alpha, w) {
            let rho = rank_gap(self.alpha, u, w);
            if rho <= 1 {
                sign(rho)
            } else {
                0
            }
        } else {
            self.table_unchecked(u, w).mu()
        };
        self.memo.lock().expect("memo lock").insert(key, m);
        m
    }

    pub fn coefficient_table(&self, u: &Word, w: &Word) -> Result<CoefficientTable> {
        self.check(u, w)?;
        Ok(self.table_unchecked(u, w))
    }

    fn table_unchecked(&self, u: &Word, w: &Word) -> CoefficientTable {
        let alpha = self.alpha;
        let descent = all_descent_data(alpha, u, w);
        let mut triples = Vec::new();
        let mut coefficients: BTreeMap<Word, i64> = BTreeMap::new();
        if !is_flat(alpha, w) {
            for degree in 0..=w.len() {
                for (pf, base) in principal_factors_of_degree(alpha, w, degree) {
                    let x = primary_prefix(alpha, &base.word, &pf);
                    let s = sign(degree as i64);
                    let nx = x.as_ref().map_or(0, |x| self.nu(u, x));
                    let term = s * (self.nu(u, &pf.word) - nx);
                    *coefficients.entry(pf.word.clone()).or_default() += s;
                    if let Some(x) = &x {
                        *coefficients.entry(x.clone()).or_default() -= s;
                    }
                    triples.push(TripleContribution {
                        base: base.word,
                        degree,
                        principal_factor: pf.word,
                        primary_prefix: x,
                        term,
                    });
                }
            }
        }
        CoefficientTable { descent, triples, coefficients }
    }
}

/// `μ(u, w)` by the principal-factor recursion.
pub fn mu_formula(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Result<i64> {
    FormulaEngine::new(alpha).mu(u, w)
}

pub fn nu(alpha: &AlphabetPoset, u: &Word, v: &Word) -> i64 {
    FormulaEngine::new(alpha).nu(u, v)
}

pub fn coefficient_table(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Result<CoefficientTable> {
    FormulaEngine::new(alpha).coefficient_table(u, w)
}

/// For rooted `w`, the triple sum of the recursion and `μ(u, o(w))` from
/// Björner's formula. The latter is taken as zero unless `u <= o(w)` and
/// `o(w)` is not a factor of `i(w)`, the only case where `o(w)` is a
/// principal factor. The two agree when `w` is not flat and
/// `|w| - |u| >= 2`.
pub fn rooted_identity_sides(alpha: &AlphabetPoset, u: &Word, w: &Word) -> Result<(i64, i64)> {
    let table = coefficient_table(alpha, u, w)?;
    let sum: i64 = table.triples.iter().map(|t| t.term).sum();
    if w.len() < 2 {
        return Ok((sum, 0));
    }
    let o = outer_word(w);
    let i = inner_word(w)?;
    let direct = if is_factor(alpha, u, &o) && !is_factor(alpha, &o, &i) { bjorner_mu(alpha, u, &o)? } else { 0 };
    Ok((sum, direct))
}
