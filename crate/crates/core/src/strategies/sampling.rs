//! Shared draw helpers. Every helper consumes exactly one index draw so
//! the Monte Carlo source and the enumerating source see identical choice
//! points.

use crate::bits::{self, VertexBits};
use crate::board::{EdgeId, MakerView};
use crate::error::Result;
use crate::rng::RandomSource;

/// Uniform element of a non-empty list (one draw).
pub fn draw_from<T: Copy>(rng: &mut dyn RandomSource, items: &[T]) -> Result<T> {
    let i = rng.uniform_index(items.len())?;
    Ok(items[i])
}

/// Uniform ordered pair of distinct indices from `0..len` (two draws,
/// the second over `len - 1` options).
pub fn draw_distinct_pair(rng: &mut dyn RandomSource, len: usize) -> Result<(usize, usize)> {
    debug_assert!(len >= 2);
    let first = rng.uniform_index(len)?;
    let second = rng.uniform_index(len - 1)?;
    Ok((first, if second >= first { second + 1 } else { second }))
}

/// Number of unknown edges from `v` into the complement of `exclude`.
pub fn unknown_deg_outside(view: &MakerView, v: usize, exclude: &VertexBits) -> usize {
    let words = exclude.words().len();
    let mut cnt = 0usize;
    for wi in 0..words {
        cnt += (view.unknown_word(v, wi) & !exclude.words()[wi]).count_ones() as usize;
    }
    cnt
}

/// The i-th unknown neighbour of `v` outside `exclude`.
pub fn select_unknown_outside(view: &MakerView, v: usize, exclude: &VertexBits, i: usize) -> EdgeId {
    let words = exclude.words().len();
    let w = bits::select_ith(words, i, |wi| view.unknown_word(v, wi) & !exclude.words()[wi]);
    EdgeId::new(v as u32, w as u32)
}

/// Number of unknown edges from `v` into `include`.
pub fn unknown_deg_inside(view: &MakerView, v: usize, include: &VertexBits) -> usize {
    let words = include.words().len();
    let mut cnt = 0usize;
    for wi in 0..words {
        cnt += (view.unknown_word(v, wi) & include.words()[wi]).count_ones() as usize;
    }
    cnt
}

/// The i-th unknown neighbour of `v` inside `include`.
pub fn select_unknown_inside(view: &MakerView, v: usize, include: &VertexBits, i: usize) -> EdgeId {
    let words = include.words().len();
    let w = bits::select_ith(words, i, |wi| view.unknown_word(v, wi) & include.words()[wi]);
    EdgeId::new(v as u32, w as u32)
}

/// Uniform unknown edge between the vertex set `member_mask` and its
/// complement, in one draw. Returns `None` when no such edge is left.
/// Members are walked in ascending vertex order so the slot-to-edge map
/// depends only on the set, not on any insertion history.
pub fn sample_cross_edge(
    view: &MakerView,
    member_mask: &VertexBits,
    rng: &mut dyn RandomSource,
) -> Result<Option<EdgeId>> {
    let mut total = 0usize;
    for m in member_mask.iter() {
        total += unknown_deg_outside(view, m, member_mask);
    }
    if total == 0 {
        return Ok(None);
    }
    let mut r = rng.uniform_index(total)?;
    for m in member_mask.iter() {
        let d = unknown_deg_outside(view, m, member_mask);
        if r < d {
            return Ok(Some(select_unknown_outside(view, m, member_mask, r)));
        }
        r -= d;
    }
    unreachable!("cross-edge slot walk exhausted");
}

/// A set of vertices supporting O(1) uniform draws and O(1) removal.
#[derive(Clone, Debug, Default)]
pub struct VertexPool {
    items: Vec<u32>,
    /// Position of each vertex in `items`, or `NONE`.
    pos: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl VertexPool {
    pub fn full(n: usize) -> Self {
        VertexPool {
            items: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        VertexPool {
            items: Vec::new(),
            pos: vec![NONE; n],
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != NONE
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.items
    }

    pub fn insert(&mut self, v: u32) {
        if !self.contains(v) {
            self.pos[v as usize] = self.items.len() as u32;
            self.items.push(v);
        }
    }

    pub fn remove(&mut self, v: u32) {
        let p = self.pos[v as usize];
        if p == NONE {
            return;
        }
        let last = *self.items.last().unwrap();
        self.items[p as usize] = last;
        self.pos[last as usize] = p;
        self.items.pop();
        self.pos[v as usize] = NONE;
    }

    pub fn draw(&self, rng: &mut dyn RandomSource) -> Result<u32> {
        let i = rng.uniform_index(self.items.len())?;
        Ok(self.items[i])
    }

    /// Uniform ordered pair of distinct members.
    pub fn draw_pair(&self, rng: &mut dyn RandomSource) -> Result<(u32, u32)> {
        let (i, j) = draw_distinct_pair(rng, self.items.len())?;
        Ok((self.items[i], self.items[j]))
    }

    /// Canonical byte encoding (list order matters for replay).
    pub fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.items.len() as u32).to_le_bytes());
        for &v in &self.items {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;

    #[test]
    fn pool_insert_remove_draw() {
        let mut p = VertexPool::full(5);
        p.remove(2);
        assert_eq!(p.len(), 4);
        assert!(!p.contains(2));
        p.insert(2);
        assert!(p.contains(2));
        let mut rng = TrialRng::seeded(1);
        let mut seen = [false; 5];
        for _ in 0..200 {
            seen[p.draw(&mut rng).unwrap() as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn distinct_pair_is_uniform_over_ordered_pairs() {
        let mut rng = TrialRng::seeded(5);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..12_000 {
            let p = draw_distinct_pair(&mut rng, 4).unwrap();
            assert_ne!(p.0, p.1);
            *counts.entry(p).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 12);
        for (_, c) in counts {
            assert!(c > 700);
        }
    }
}
