//! Path surgery: absorbing a new vertex into a path using two pre-owned
//! star edges plus one freshly claimed edge.
//!
//! Input: the current path enumerated from the active endpoint `y`
//! (`order[0] == y`), a new vertex `x` off the path with the edge `x–x'`
//! owned, and an endpoint `y'` with `y–y'` owned (`x' != y'`). Depending
//! on whether `x'` and `y'` lie on the path, one designated edge turns
//! those three edges plus the old path edges into a longer path from `x`
//! to the old far endpoint.

use crate::board::EdgeId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surgery {
    /// Claim `edge`; on success the path becomes `new_order` (which
    /// starts at `x` and ends at the old far endpoint).
    Claim { edge: EdgeId, new_order: Vec<u32> },
    /// The rewrite refers to a vertex off the end of the path, or the
    /// designated edge is already owned; the caller redraws.
    Degenerate,
}

/// Classifies the pair `(x', y')` and produces the designated edge and
/// rewritten order. `owns` answers "is this edge already Maker's".
pub fn path_surgery(
    order: &[u32],
    x: u32,
    xp: u32,
    yp: u32,
    owns: &dyn Fn(EdgeId) -> bool,
) -> Surgery {
    debug_assert!(order.len() >= 2);
    debug_assert!(!order.contains(&x));
    debug_assert!(xp != yp && xp != x && yp != x);
    debug_assert!(xp != order[0] && yp != order[0], "star edges never target y");

    let max_id = order
        .iter()
        .copied()
        .chain([x, xp, yp])
        .max()
        .unwrap() as usize;
    let mut pos = vec![u32::MAX; max_id + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    let len = order.len();
    let p = pos[xp as usize];
    let q = pos[yp as usize];

    let claim = |edge: EdgeId, new_order: Vec<u32>| {
        if owns(edge) {
            Surgery::Degenerate
        } else {
            debug_assert_eq!(new_order.len(), len + 1 + usize::from(pos[xp as usize] == u32::MAX) + usize::from(pos[yp as usize] == u32::MAX));
            Surgery::Claim { edge, new_order }
        }
    };

    match (p != u32::MAX, q != u32::MAX) {
        // both endpoints off the path: x-x'-y'-y-...
        (false, false) => {
            let mut new_order = Vec::with_capacity(len + 3);
            new_order.extend([x, xp, yp]);
            new_order.extend_from_slice(order);
            claim(EdgeId::new(xp, yp), new_order)
        }
        // both on the path: reconnect the three pieces around them
        (true, true) => {
            let (p, q) = (p as usize, q as usize);
            if p == 0 || q == 0 {
                return Surgery::Degenerate;
            }
            if p < q {
                if q + 1 >= len {
                    return Surgery::Degenerate;
                }
                let mut new_order = Vec::with_capacity(len + 1);
                new_order.push(x);
                new_order.extend_from_slice(&order[p..=q - 1]); // x', then up to v_{j-1}
                new_order.push(order[q]); // y'
                new_order.push(order[0]); // y
                new_order.extend_from_slice(&order[1..=p - 1]);
                new_order.extend_from_slice(&order[q + 1..]);
                claim(EdgeId::new(order[p - 1], order[q + 1]), new_order)
            } else {
                if p + 1 >= len {
                    return Surgery::Degenerate;
                }
                let mut new_order = Vec::with_capacity(len + 1);
                new_order.push(x);
                new_order.push(order[p]); // x'
                new_order.extend(order[q + 1..=p - 1].iter().rev());
                new_order.push(order[q]); // y'
                new_order.push(order[0]); // y
                new_order.extend_from_slice(&order[1..=q - 1]);
                new_order.extend_from_slice(&order[p + 1..]);
                claim(EdgeId::new(order[q - 1], order[p + 1]), new_order)
            }
        }
        // x' on the path, y' off: walk back from x' to y, then jump out
        (true, false) => {
            let p = p as usize;
            if p == 0 || p + 1 >= len {
                return Surgery::Degenerate;
            }
            let mut new_order = Vec::with_capacity(len + 2);
            new_order.push(x);
            new_order.push(order[p]); // x'
            new_order.extend(order[1..=p - 1].iter().rev());
            new_order.push(order[0]); // y
            new_order.push(yp);
            new_order.extend_from_slice(&order[p + 1..]);
            claim(EdgeId::new(order[p + 1], yp), new_order)
        }
        // y' on the path, x' off: mirror of the previous case
        (false, true) => {
            let q = q as usize;
            if q == 0 {
                return Surgery::Degenerate;
            }
            let mut new_order = Vec::with_capacity(len + 2);
            new_order.push(x);
            new_order.push(xp);
            new_order.extend(order[1..=q - 1].iter().rev());
            new_order.push(order[0]); // y
            new_order.push(order[q]); // y'
            new_order.extend_from_slice(&order[q + 1..]);
            claim(EdgeId::new(xp, order[q - 1]), new_order)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_owned(_: EdgeId) -> bool {
        false
    }

    #[test]
    fn both_off_path() {
        // P = (y, v2, v3); x' and y' fresh
        let order = [0u32, 1, 2];
        match path_surgery(&order, 10, 11, 12, &no_owned) {
            Surgery::Claim { edge, new_order } => {
                assert_eq!(edge, EdgeId::new(11, 12));
                assert_eq!(new_order, vec![10, 11, 12, 0, 1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn both_on_path_forward() {
        // P = (v1..v6) = 0..5, x' = v3 = 2, y' = v5 = 4 (1-based i=3 < j=5):
        // claim v2 v6 and reroute
        let order = [0u32, 1, 2, 3, 4, 5];
        match path_surgery(&order, 9, 2, 4, &no_owned) {
            Surgery::Claim { edge, new_order } => {
                assert_eq!(edge, EdgeId::new(1, 5));
                assert_eq!(new_order, vec![9, 2, 3, 4, 0, 1, 5]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn both_on_path_backward() {
        // x' = v5 = 4, y' = v3 = 2 (i=5 > j=3): claim v2 v6
        let order = [0u32, 1, 2, 3, 4, 5];
        match path_surgery(&order, 9, 4, 2, &no_owned) {
            Surgery::Claim { edge, new_order } => {
                assert_eq!(edge, EdgeId::new(1, 5));
                assert_eq!(new_order, vec![9, 4, 3, 2, 0, 1, 5]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn path_end_indices_degenerate() {
        let order = [0u32, 1, 2, 3];
        // y' at the far end: v_{j+1} does not exist
        assert_eq!(path_surgery(&order, 9, 1, 3, &no_owned), Surgery::Degenerate);
        // x' at the far end in case (c)
        assert_eq!(path_surgery(&order, 9, 3, 7, &no_owned), Surgery::Degenerate);
    }

    #[test]
    fn owned_designated_edge_degenerate() {
        let order = [0u32, 1, 2];
        let owns = |e: EdgeId| e == EdgeId::new(11, 12);
        assert_eq!(path_surgery(&order, 10, 11, 12, &owns), Surgery::Degenerate);
    }

    #[test]
    fn rewrites_are_paths_over_the_right_vertices() {
        // exhaustive over small configurations: all (x', y') placements
        let order = [0u32, 1, 2, 3, 4];
        let off = [10u32, 11];
        let mut cases = Vec::new();
        for xp in order.iter().skip(1).copied().chain(off) {
            for yp in order.iter().skip(1).copied().chain(off) {
                if xp != yp {
                    cases.push((xp, yp));
                }
            }
        }
        for (xp, yp) in cases {
            let x = 20;
            match path_surgery(&order, x, xp, yp, &no_owned) {
                Surgery::Degenerate => {}
                Surgery::Claim { edge, new_order } => {
                    // starts at x, ends at the old far endpoint
                    assert_eq!(new_order[0], x);
                    assert_eq!(*new_order.last().unwrap(), 4);
                    // no repeats
                    let mut sorted = new_order.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    assert_eq!(sorted.len(), new_order.len(), "repeat in {new_order:?}");
                    // expected vertex set
                    let mut expect: Vec<u32> = order.to_vec();
                    expect.push(x);
                    for w in [xp, yp] {
                        if !order.contains(&w) {
                            expect.push(w);
                        }
                    }
                    expect.sort_unstable();
                    assert_eq!(sorted, expect, "cover mismatch for ({xp},{yp})");
                    // every consecutive pair is an old path edge, a star
                    // edge, or the designated edge
                    let mut allowed: Vec<EdgeId> =
                        order.windows(2).map(|w| EdgeId::new(w[0], w[1])).collect();
                    allowed.push(EdgeId::new(x, xp));
                    allowed.push(EdgeId::new(order[0], yp));
                    allowed.push(edge);
                    for w in new_order.windows(2) {
                        let e = EdgeId::new(w[0], w[1]);
                        assert!(allowed.contains(&e), "edge {e} not justified");
                    }
                }
            }
        }
    }
}
