//! Incremental minimally skipped intervals along a lexicographic walk.
//!
//! For a chain `v_0 > .. > v_n`, the open interval `C(v_i, v_j)` is skipped
//! exactly when the segment `v_i .. v_j` is not the lexicographically first
//! path from `v_i` down to `v_j`: any earlier chain avoiding the segment
//! agrees with `C` up to `v_i` and diverges to a smaller label inside it.
//! Skipped intervals are closed under enlargement, so at depth `d` the
//! skipped starts form a prefix `0..=t_d` and at most one minimal interval
//! ends at `d`, namely `(t_d, d)` when `t_{d-1} < t_d`.

use crate::chains::{ChainPath, ChainVisitor};
use crate::interval::Interval;

use super::{refine_to_j, JSet, Msi};

/// First cover of `x` on a path down to `y`.
#[inline]
pub fn first_step(iv: &Interval, x: u32, y: u32) -> u32 {
    iv.moves(x)
        .iter()
        .find(|m| iv.le(y, m.child))
        .map(|m| m.child)
        .expect("every element above y has a cover above y")
}

/// Per-depth skipped-interval state.
#[derive(Debug, Default, Clone)]
pub struct MsiTracker {
    // largest skipped start ending at each depth, or -1
    t: Vec<i32>,
    // start of the MSI ending at each depth
    msi_at: Vec<Option<u32>>,
    // how many known MSIs cover each vertex
    cover: Vec<u32>,
}

impl MsiTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records vertex `d` of `path` and returns the start of the MSI ending
    /// there, if any.
    pub fn push(&mut self, iv: &Interval, path: &ChainPath, d: usize) -> Option<u32> {
        debug_assert_eq!(self.t.len(), d);
        let mut t = -1i32;
        if d >= 2 {
            let y = path.ids[d];
            for k in (0..=d - 2).rev() {
                if path.ids[k + 1] != first_step(iv, path.ids[k], y) {
                    t = k as i32;
                    break;
                }
            }
        }
        let prev = if d >= 1 { self.t[d - 1] } else { -1 };
        let msi = (t >= 0 && t > prev).then_some(t as u32);
        self.t.push(t);
        self.msi_at.push(msi);
        if self.cover.len() <= d {
            self.cover.resize(d + 1, 0);
        }
        self.cover[d] = 0;
        if let Some(i) = msi {
            for k in i as usize + 1..d {
                self.cover[k] += 1;
            }
        }
        msi
    }

    pub fn pop(&mut self, d: usize) {
        debug_assert_eq!(self.t.len(), d + 1);
        if let Some(i) = self.msi_at[d] {
            for k in i as usize + 1..d {
                self.cover[k] -= 1;
            }
        }
        self.t.pop();
        self.msi_at.pop();
    }

    /// Largest start `i` with `C(v_i, v_d)` skipped.
    pub fn skipped_start(&self, d: usize) -> i32 {
        self.t[d]
    }

    pub fn msi_ending_at(&self, d: usize) -> Option<u32> {
        self.msi_at[d]
    }

    /// Some vertex at or before `t_d + 1` is uncovered and can no longer be
    /// covered: any later MSI reaching it would contain `C(v_{k-1}, v_d)`.
    pub fn doomed(&self, d: usize) -> bool {
        let t = self.t[d];
        t >= 0 && (1..=(t as usize + 1).min(d.saturating_sub(1))).any(|k| self.cover[k] == 0)
    }

    /// Every interior vertex of the current path lies in some MSI.
    pub fn covers_all(&self, n: usize) -> bool {
        (1..n).all(|k| self.cover[k] > 0)
    }

    /// `I(C)` of the current path, ordered by start.
    pub fn msis(&self) -> Vec<Msi> {
        self.msi_at
            .iter()
            .enumerate()
            .filter_map(|(j, s)| s.map(|i| Msi { start: i as usize, end: j }))
            .collect()
    }
}

/// A completed chain as reported by [`MsiWalk`].
pub struct ChainReport<'p> {
    pub path: &'p ChainPath,
    pub msis: Vec<Msi>,
    pub jset: JSet,
}

/// Walks all chains, or only chains that can still be critical, handing
/// each completed chain with its `I(C)` and `J(C)` to `sink`.
pub struct MsiWalk<'i, 'a, F> {
    iv: &'i Interval<'a>,
    tracker: MsiTracker,
    critical_only: bool,
    sink: F,
}

impl<'i, 'a, F: FnMut(ChainReport)> MsiWalk<'i, 'a, F> {
    pub fn new(iv: &'i Interval<'a>, critical_only: bool, sink: F) -> Self {
        MsiWalk { iv, tracker: MsiTracker::new(), critical_only, sink }
    }

    pub fn run(mut self) {
        let iv = self.iv;
        crate::chains::walk_chains(iv, &mut self);
    }
}

impl<F: FnMut(ChainReport)> ChainVisitor for MsiWalk<'_, '_, F> {
    fn enter(&mut self, path: &ChainPath, d: usize) -> bool {
        self.tracker.push(self.iv, path, d);
        !(self.critical_only && self.tracker.doomed(d))
    }

    fn leave(&mut self, d: usize) {
        self.tracker.pop(d);
    }

    fn complete(&mut self, path: &ChainPath) {
        let n = path.depth();
        if self.critical_only && !self.tracker.covers_all(n) {
            return;
        }
        let msis = self.tracker.msis();
        let jset = refine_to_j(&msis, n);
        if self.critical_only && !jset.covers {
            return;
        }
        (self.sink)(ChainReport { path, msis, jset });
    }
}
