use crate::resolution::{Hypercube, State, Token};
use crate::{Error, Result};

/// Pairing of the circles after the two first surgeries of a butterfly face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ButterflyMatching {
    pub state: State,
    pub sites: [usize; 2],
    /// The single circle of `D(state)` met by both arcs.
    pub circle: usize,
    /// Token ranges `(start, len)` of the four segments of the circle between
    /// consecutive arc endpoints, in traversal order.
    pub segments: [(usize, usize); 4],
    /// Which opposite pair is `{P, Q}`: segments 0 and 2, or 1 and 3.
    pub pq: [usize; 2],
    pub basis: PqBasis,
    /// Circle containing `P` after surgery at `sites[0]` and at `sites[1]`.
    pub p: [usize; 2],
    /// Likewise for `Q`.
    pub q: [usize; 2],
}

/// What decided `{P, Q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PqBasis {
    /// Exactly one opposite pair has no odd crossing count between its two
    /// segments. With one double point these are the lobes.
    DoublePoints,
    /// Crossings with one passage in the pair and one outside have nonzero
    /// total handedness; the pair seeing them positively wins.
    Handedness,
    /// Neither rule decides: the pair whose segment ends attach on the same side.
    Sides,
}

/// Computes `P`, `Q` and the induced circle pairing of the butterfly face
/// `(v, {i, j})`.
///
/// With a single double point `P` and `Q` are the two lobes: the opposite
/// segments that do not run through the double point. With more double
/// points the same parity test is used when it decides, then the handedness
/// of crossings straddling the pair, then the attachment sides.
pub fn butterfly_match(hc: &Hypercube, v: State, i: usize, j: usize) -> Result<ButterflyMatching> {
    let d = hc.diagram(v);
    let [(z, pi0), (zi1, pi1)] = d.strands(i);
    let [(zj0, pj0), (zj1, pj1)] = d.strands(j);
    if z != zi1 || z != zj0 || z != zj1 {
        return Err(Error::Internal(format!("face v={v} ({i},{j}) is not a butterfly")));
    }
    let len = d.circles[z].len();
    let mut ends = [(pi0, 0), (pi1, 0), (pj0, 1), (pj1, 1)];
    ends.sort_unstable();
    if ends[0].1 == ends[1].1 || ends[1].1 == ends[2].1 || ends[2].1 == ends[3].1 {
        return Err(Error::Internal(format!("arcs of butterfly v={v} ({i},{j}) do not interleave")));
    }
    let segments: [(usize, usize); 4] = std::array::from_fn(|k| {
        let a = ends[k].0;
        let b = ends[(k + 1) % 4].0;
        (a + 1, (b + len - a - 1) % len)
    });
    let seg_of = |pos: usize| -> usize {
        (0..4)
            .find(|&k| {
                let (s, l) = segments[k];
                (pos + len - s % len) % len < l
            })
            .expect("site passage on an arc endpoint")
    };
    let mut odd = [[false; 4]; 4];
    for t in 0..hc.n() {
        if !v.bit(t) {
            continue;
        }
        let [(c0, p0), (c1, p1)] = d.strands(t);
        if c0 == z && c1 == z {
            let (a, b) = (seg_of(p0), seg_of(p1));
            if a != b {
                odd[a][b] ^= true;
                odd[b][a] ^= true;
            }
        }
    }
    let by_parity = match (odd[0][2], odd[1][3]) {
        (false, true) => Some([0, 2]),
        (true, false) => Some([1, 3]),
        _ => None,
    };
    let sign = |pos: usize| match d.circles[z][pos] {
        Token::Site { forward, .. } => if forward { 1 } else { -1 },
        Token::Edge { .. } => unreachable!(),
    };
    // Handedness of the strand-1 passage crossing the strand-0 passage is
    // the product of their directions; seen from segments 0 and 2.
    let mut hand = 0i64;
    for t in 0..hc.n() {
        if !v.bit(t) {
            continue;
        }
        let [(c0, p0), (c1, p1)] = d.strands(t);
        if c0 != z || c1 != z {
            continue;
        }
        let e = sign(p0) * sign(p1);
        match (seg_of(p0) % 2 == 0, seg_of(p1) % 2 == 0) {
            (true, false) => hand += e,
            (false, true) => hand -= e,
            _ => {}
        }
    }
    let (pq, basis) = if let Some(pq) = by_parity {
        (pq, PqBasis::DoublePoints)
    } else if hand != 0 {
        (if hand > 0 { [0, 2] } else { [1, 3] }, PqBasis::Handedness)
    } else {
        // Side of the circle each arc endpoint attaches on, in traversal order.
        let mut right = [false; 4];
        for (site, strand) in [(i, 0), (i, 1), (j, 0), (j, 1)] {
            let (_, pos) = d.strands(site)[strand];
            let forward = sign(pos) > 0;
            right[ends.iter().position(|e| e.0 == pos).unwrap()] = (strand == 0) == forward;
        }
        (if right[0] == right[1] { [0, 2] } else { [1, 3] }, PqBasis::Sides)
    };
    let edge_in = |k: usize| -> usize {
        let (s, l) = segments[k];
        (0..l)
            .find_map(|o| match d.circles[z][(s + o) % len] {
                Token::Edge { edge, .. } => Some(edge),
                _ => None,
            })
            .expect("segment without an edge passage")
    };
    let (ep, eq) = (edge_in(pq[0]), edge_in(pq[1]));
    let after = |site: usize, e: usize| hc.diagram(v.with(site)).circle_of_edge(e).unwrap();
    let p = [after(i, ep), after(j, ep)];
    let q = [after(i, eq), after(j, eq)];
    if p[0] == q[0] || p[1] == q[1] {
        return Err(Error::Internal(format!("P and Q share a circle in butterfly v={v} ({i},{j})")));
    }
    Ok(ButterflyMatching { state: v, sites: [i, j], circle: z, segments, pq, basis, p, q })
}
