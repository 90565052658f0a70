//! Winning-set checks for the four games, with exact small-board
//! fallbacks for the NP-hard ones.
//!
//! Perfect-matching and Hamiltonicity detection accept a strategy-tracked
//! certificate when one exists; otherwise exact subset dynamic programs
//! are used, capped at n ≤ 24 and n ≤ 20 respectively.

use crate::bits::EdgeBits;
use crate::board::EdgeId;
use crate::error::{GameError, Result};

pub const PM_EXACT_MAX_N: usize = 24;
pub const HAMILTON_EXACT_MAX_N: usize = 20;

/// Union-find over the vertices with component sizes. Path compression
/// plus union by size; the reported representative is the smallest vertex
/// id in the component so traversal order never leaks into transcripts.
#[derive(Clone, Debug)]
pub struct ComponentIndex {
    parent: Vec<u32>,
    size: Vec<u32>,
    min_id: Vec<u32>,
    components: usize,
}

impl ComponentIndex {
    pub fn new(n: usize) -> Self {
        ComponentIndex {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            min_id: (0..n as u32).collect(),
            components: n,
        }
    }

    /// Root of v's component (an internal id; see [`Self::representative`]
    /// for the canonical one).
    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let gp = self.parent[self.parent[v] as usize];
            self.parent[v] = gp;
            v = gp as usize;
        }
        v
    }

    fn root(&mut self, v: usize) -> usize {
        self.find(v)
    }

    /// Smallest vertex id in v's component.
    pub fn representative(&mut self, v: usize) -> u32 {
        let r = self.root(v);
        self.min_id[r]
    }

    pub fn same(&mut self, u: usize, v: usize) -> bool {
        self.root(u) == self.root(v)
    }

    pub fn size_of(&mut self, v: usize) -> u32 {
        let r = self.root(v);
        self.size[r]
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Merges the components of `u` and `v`; false if already joined.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        self.union_roots(u, v).is_some()
    }

    /// As [`Self::union`], reporting `(kept_root, absorbed_root)`.
    pub fn union_roots(&mut self, u: usize, v: usize) -> Option<(usize, usize)> {
        let (mut ru, mut rv) = (self.root(u), self.root(v));
        if ru == rv {
            return None;
        }
        if self.size[ru] < self.size[rv] {
            std::mem::swap(&mut ru, &mut rv);
        }
        self.parent[rv] = ru as u32;
        self.size[ru] += self.size[rv];
        self.min_id[ru] = self.min_id[ru].min(self.min_id[rv]);
        self.components -= 1;
        Some((ru, rv))
    }
}

/// min-degree-k check over a degree table.
pub fn check_mindegree(degrees: &[u32], k: u32) -> bool {
    degrees.iter().all(|&d| d >= k)
}

/// Spanning connectivity of the edge list over `n` vertices.
pub fn check_connectivity(n: usize, edges: &[EdgeId]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut ci = ComponentIndex::new(n);
    for e in edges {
        ci.union(e.u as usize, e.v as usize);
    }
    ci.components() == 1
}

/// Dead-position criterion: some vertex can never reach Maker degree k.
pub fn blocked_mindegree(maker_deg: &[u32], free_deg: impl Fn(usize) -> u32, k: u32) -> bool {
    (0..maker_deg.len()).any(|v| maker_deg[v] + free_deg(v) < k)
}

/// Does the graph contain a perfect matching? Exact bitmask DP,
/// restricted to n ≤ 24.
pub fn check_perfect_matching(n: usize, adj: &EdgeBits) -> Result<bool> {
    if !n.is_multiple_of(2) {
        return Err(GameError::InvalidConfig(
            "perfect matching check requires even n".into(),
        ));
    }
    if n > PM_EXACT_MAX_N {
        return Err(GameError::Unsupported(format!(
            "exact perfect matching detection capped at n <= {PM_EXACT_MAX_N}, got {n}"
        )));
    }
    // matchable[mask] == true iff the vertex set `mask` has a perfect
    // matching; process the lowest set vertex to keep the recursion linear
    // in matchable masks.
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut matchable = vec![false; (full as usize) + 1];
    matchable[0] = true;
    for mask in 1..=(full as usize) {
        let m = mask as u32;
        if !m.count_ones().is_multiple_of(2) {
            continue;
        }
        let u = m.trailing_zeros() as usize;
        let rest = m & !(1 << u);
        let mut partners = rest;
        let mut ok = false;
        while partners != 0 {
            let v = partners.trailing_zeros() as usize;
            partners &= partners - 1;
            if adj.has(u, v) && matchable[(rest & !(1 << v)) as usize] {
                ok = true;
                break;
            }
        }
        matchable[mask] = ok;
    }
    Ok(matchable[full as usize])
}

/// Does the graph contain a Hamilton cycle? Held-Karp style reachability
/// over vertex subsets, restricted to n ≤ 20.
pub fn check_hamilton(n: usize, adj: &EdgeBits) -> Result<bool> {
    if n > HAMILTON_EXACT_MAX_N {
        return Err(GameError::Unsupported(format!(
            "exact Hamiltonicity detection capped at n <= {HAMILTON_EXACT_MAX_N}, got {n}"
        )));
    }
    if n == 1 {
        return Ok(true);
    }
    if n == 2 {
        return Ok(false);
    }
    // reach[mask] = bitset of endpoints v such that a path over exactly
    // `mask` starts at vertex 0 and ends at v. Vertex 0 anchors the cycle.
    let full: u32 = (1u32 << n) - 1;
    let mut reach = vec![0u32; (full as usize) + 1];
    reach[1] = 1;
    for mask in 1..=(full as usize) {
        if mask & 1 == 0 || reach[mask] == 0 {
            continue;
        }
        let ends = reach[mask];
        let absent = full & !(mask as u32);
        let mut cand = absent;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let mut e = ends;
            while e != 0 {
                let u = e.trailing_zeros() as usize;
                e &= e - 1;
                if adj.has(u, v) {
                    reach[mask | (1 << v)] |= 1 << v;
                    break;
                }
            }
        }
    }
    let ends = reach[full as usize];
    let mut e = ends & !1;
    while e != 0 {
        let v = e.trailing_zeros() as usize;
        e &= e - 1;
        if adj.has(v, 0) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Strategy-maintained witness for a claimed win.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WinCertificate {
    /// partner[v] for every vertex; an involution without fixed points.
    PerfectMatching(Vec<u32>),
    /// Cycle as a vertex sequence covering every vertex once.
    HamiltonCycle(Vec<u32>),
}

/// Verifies a certificate edge-by-edge against Maker's graph.
pub fn verify_certificate(n: usize, maker: &EdgeBits, cert: &WinCertificate) -> bool {
    match cert {
        WinCertificate::PerfectMatching(partner) => {
            if partner.len() != n {
                return false;
            }
            (0..n).all(|v| {
                let p = partner[v] as usize;
                p < n && p != v && partner[p] as usize == v && maker.has(v, p)
            })
        }
        WinCertificate::HamiltonCycle(order) => {
            if order.len() != n || n < 3 {
                return false;
            }
            let mut seen = vec![false; n];
            for &v in order {
                if v as usize >= n || seen[v as usize] {
                    return false;
                }
                seen[v as usize] = true;
            }
            (0..n).all(|i| {
                let u = order[i] as usize;
                let v = order[(i + 1) % n] as usize;
                maker.has(u, v)
            })
        }
    }
}
