//! Bit-matrix edge sets and the small numeric helpers the samplers build on.
//!
//! Boards are dense: every edge set over `K_n` is stored as a symmetric
//! n×n bit matrix so that per-vertex rows can be combined with plain word
//! operations. All uniform draws reduce to "select the i-th set bit of a
//! virtual row", which keeps every random choice a single index draw.

/// Symmetric adjacency bit matrix over `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBits {
    n: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl EdgeBits {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        EdgeBits {
            n,
            words_per_row,
            words: vec![0; words_per_row * n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.words[v * self.words_per_row..(v + 1) * self.words_per_row]
    }

    #[inline]
    pub fn has(&self, u: usize, v: usize) -> bool {
        self.words[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }

    /// Inserts the undirected edge `{u, v}` (sets both directions).
    #[inline]
    pub fn set(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.words[u * self.words_per_row + v / 64] |= 1 << (v % 64);
        self.words[v * self.words_per_row + u / 64] |= 1 << (u % 64);
    }

    /// Number of set bits in `row(v)` after masking with `mask` words.
    pub fn count_row_masked(&self, v: usize, mask: &[u64]) -> usize {
        self.row(v)
            .iter()
            .zip(mask)
            .map(|(w, m)| (w & m).count_ones() as usize)
            .sum()
    }

    pub fn iter_row(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }
}

/// Iterates the indices of set bits in a word slice, in ascending order.
pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Selects the index of the `i`-th (0-based) set bit of a virtual row whose
/// `w`-th word is produced by `word_at`. The caller guarantees `i` is less
/// than the row popcount.
pub fn select_ith(words_per_row: usize, mut i: usize, mut word_at: impl FnMut(usize) -> u64) -> usize {
    for wi in 0..words_per_row {
        let w = word_at(wi);
        let c = w.count_ones() as usize;
        if i < c {
            return wi * 64 + select_in_word(w, i as u32) as usize;
        }
        i -= c;
    }
    unreachable!("select index out of range");
}

/// Position of the `i`-th set bit within a single word.
#[inline]
fn select_in_word(mut w: u64, mut i: u32) -> u32 {
    loop {
        let b = w.trailing_zeros();
        if i == 0 {
            return b;
        }
        w &= w - 1;
        i -= 1;
    }
}

/// Mask with bits `[0, n)` set in the last partial word, full words before.
pub fn full_mask(n: usize, word_index: usize) -> u64 {
    let full_words = n / 64;
    if word_index < full_words {
        !0
    } else if word_index == full_words {
        let rem = n % 64;
        if rem == 0 {
            0
        } else {
            (1u64 << rem) - 1
        }
    } else {
        0
    }
}

/// Plain dense bitset over vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexBits {
    n: usize,
    words: Vec<u64>,
}

impl VertexBits {
    pub fn new(n: usize) -> Self {
        VertexBits {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn filled(n: usize) -> Self {
        let mut b = Self::new(n);
        for (wi, w) in b.words.iter_mut().enumerate() {
            *w = full_mask(n, wi);
        }
        b
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn has(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn clear(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn clear_all(&mut self) {
        self.words.fill(0);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.words)
    }
}

/// Fenwick tree over per-vertex weights; backs single-draw weighted sampling.
#[derive(Clone, Debug)]
pub struct Fenwick {
    tree: Vec<u64>,
    total: u64,
}

impl Fenwick {
    pub fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
            total: 0,
        }
    }

    pub fn from_weights(weights: &[u64]) -> Self {
        let mut f = Fenwick::new(weights.len());
        for (i, &w) in weights.iter().enumerate() {
            if w > 0 {
                f.add(i, w as i64);
            }
        }
        f
    }

    pub fn add(&mut self, i: usize, delta: i64) {
        self.total = self.total.checked_add_signed(delta).expect("fenwick underflow");
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].checked_add_signed(delta).expect("fenwick underflow");
            i += i & i.wrapping_neg();
        }
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Finds the smallest index whose prefix sum exceeds `r`; returns the
    /// index and the residual offset into its weight. `r < total()`.
    pub fn descend(&self, mut r: u64) -> (usize, u64) {
        debug_assert!(r < self.total);
        let mut pos = 0usize;
        let mut mask = self.tree.len().next_power_of_two() / 2;
        while mask > 0 {
            let next = pos + mask;
            if next < self.tree.len() && self.tree[next] <= r {
                r -= self.tree[next];
                pos = next;
            }
            mask /= 2;
        }
        (pos, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_bits_roundtrip() {
        let mut e = EdgeBits::new(70);
        e.set(0, 69);
        e.set(3, 5);
        assert!(e.has(0, 69) && e.has(69, 0) && e.has(5, 3));
        assert!(!e.has(0, 68));
        assert_eq!(e.iter_row(0).collect::<Vec<_>>(), vec![69]);
    }

    #[test]
    fn select_matches_iteration() {
        let mut e = EdgeBits::new(130);
        for v in [1usize, 63, 64, 65, 127, 129] {
            e.set(0, v);
        }
        let row: Vec<usize> = e.iter_row(0).collect();
        for (i, &v) in row.iter().enumerate() {
            let got = select_ith(e.words_per_row, i, |w| e.row(0)[w]);
            assert_eq!(got, v);
        }
    }

    #[test]
    fn fenwick_descend_covers_all_slots() {
        let weights = vec![3u64, 0, 5, 1, 0, 2];
        let f = Fenwick::from_weights(&weights);
        assert_eq!(f.total(), 11);
        let mut seen = vec![0u64; weights.len()];
        for r in 0..11 {
            let (i, res) = f.descend(r);
            assert!(res < weights[i]);
            seen[i] += 1;
        }
        assert_eq!(seen, weights);
    }

    #[test]
    fn fenwick_updates() {
        let mut f = Fenwick::new(4);
        f.add(2, 7);
        f.add(0, 1);
        f.add(2, -3);
        assert_eq!(f.total(), 5);
        let (i, r) = f.descend(4);
        assert_eq!((i, r), (2, 3));
    }

    #[test]
    fn vertex_bits_filled() {
        let b = VertexBits::filled(67);
        assert_eq!(b.count(), 67);
        assert!(b.has(66));
    }
}
