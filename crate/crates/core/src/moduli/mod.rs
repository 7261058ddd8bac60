//! Chain-level data of the 2-factor flow category.
//!
//! A decorated face is a cube face `(v, S)` with labelings `y` at the bottom
//! and `x` at the top. Its poset holds the labeled intermediate resolutions
//! reachable by single m- or Δ-surgeries; maximal chains are the 0-cells of
//! the moduli space, index-2 intervals its 1-cells.

use std::collections::HashMap;
use std::fmt;

use crate::invariants::label_string;
use crate::resolution::{ArcKind, Hypercube, Labels, State};
use crate::{Error, Result};

mod boundary;
mod butterfly;
mod dual;
mod realization;

pub use boundary::{
    boundary_graph, cover_check, pair_interval, verify_six_cycles, BoundaryGraph, CoverReport, PairingRule,
    SixCycleReport, SixCycleRow,
};
pub use butterfly::{butterfly_match, ButterflyMatching, PqBasis};
pub use dual::{dual_poset_check, dual_check_all, DualReport};
pub use realization::{realization_report, RealizationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedFace {
    pub base: State,
    /// Coordinates surgered, ascending.
    pub sites: Vec<usize>,
    /// Bottom labeling, on the circles of `D(base)`.
    pub y: Labels,
    /// Top labeling, on the circles of `D(top)`.
    pub x: Labels,
}

impl DecoratedFace {
    pub fn top(&self) -> State {
        self.sites.iter().fold(self.base, |s, &i| s.with(i))
    }

    pub fn index(&self) -> usize {
        self.sites.len()
    }

    pub fn describe(&self, hc: &Hypercube) -> String {
        let sites: Vec<String> = self.sites.iter().map(|s| s.to_string()).collect();
        format!(
            "v={} S={} x={} y={}",
            self.base,
            sites.join(","),
            label_string(self.x, hc.circle_count(self.top())),
            label_string(self.y, hc.circle_count(self.base))
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PosetElement {
    pub state: State,
    pub labels: Labels,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPoset {
    pub face: DecoratedFace,
    /// Sorted by rank, then state, then labeling.
    pub elements: Vec<PosetElement>,
    pub ranks: Vec<usize>,
    /// `(lower, upper, site)` covering pairs.
    pub covers: Vec<(usize, usize, usize)>,
    /// Maximal chains, bottom to top, in lexicographic order of element indices.
    pub chains: Vec<Vec<usize>>,
}

impl ChainPoset {
    pub fn find(&self, e: PosetElement) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }

    pub fn at_rank(&self, r: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&k| self.ranks[k] == r).collect()
    }

    /// Elements strictly between the bottom and top of an index-2 face.
    pub fn middle_count(&self) -> usize {
        self.at_rank(1).len()
    }

    /// Coordinates surgered along a chain, in order.
    pub fn chain_sites(&self, chain: &[usize]) -> Vec<usize> {
        chain
            .windows(2)
            .map(|w| {
                let d = self.elements[w[1]].state.mask() ^ self.elements[w[0]].state.mask();
                d.trailing_zeros() as usize
            })
            .collect()
    }

    /// Elements of the closed interval `[lo, hi]`.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        let up = self.reach(lo, true);
        let down = self.reach(hi, false);
        (0..self.elements.len()).filter(|&k| up[k] && down[k]).collect()
    }

    fn reach(&self, from: usize, upward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.elements.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(a) = stack.pop() {
            for &(l, u, _) in &self.covers {
                let (s, t) = if upward { (l, u) } else { (u, l) };
                if s == a && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Whether the poset splits as `P0 × {0,1}` along surgeries at `site`.
    pub fn is_product_along(&self, site: usize) -> bool {
        let bit = 1u64 << site;
        let mut partner = vec![usize::MAX; self.elements.len()];
        let mut incoming = vec![0; self.elements.len()];
        for &(l, u, s) in &self.covers {
            if s == site {
                if partner[l] != usize::MAX {
                    return false;
                }
                partner[l] = u;
                incoming[u] += 1;
            }
        }
        for (k, e) in self.elements.iter().enumerate() {
            let surgered = e.state.mask() & bit != 0;
            if surgered && incoming[k] != 1 || !surgered && partner[k] == usize::MAX {
                return false;
            }
        }
        let covers: std::collections::HashSet<(usize, usize)> = self.covers.iter().map(|&(l, u, _)| (l, u)).collect();
        self.covers
            .iter()
            .filter(|&&(l, _, s)| s != site && self.elements[l].state.mask() & bit == 0)
            .all(|&(l, u, _)| covers.contains(&(partner[l], partner[u])))
    }
}

/// Builds the poset of a decorated face.
pub fn face_poset(hc: &Hypercube, face: &DecoratedFace) -> Result<ChainPoset> {
    let (elements, covers) = closure_up(hc, face.base, &face.sites, face.y);
    let top = PosetElement { state: face.top(), labels: face.x };
    let Some(t) = elements.iter().position(|&e| e == top) else {
        return Err(Error::NotDecoratedFace);
    };
    Ok(trim(face.clone(), elements, covers, 0, t))
}

type Covers = Vec<(usize, usize, usize)>;

// Everything reachable upward from `(base, y)` inside the face.
fn closure_up(hc: &Hypercube, base: State, sites: &[usize], y: Labels) -> (Vec<PosetElement>, Covers) {
    let mut elements = vec![PosetElement { state: base, labels: y }];
    let mut index: HashMap<PosetElement, usize> = HashMap::new();
    index.insert(elements[0], 0);
    let mut covers = Vec::new();
    let mut level = vec![0];
    for _ in 0..sites.len() {
        let mut next = Vec::new();
        for &a in &level {
            let e = elements[a];
            for &i in sites {
                if e.state.bit(i) {
                    continue;
                }
                let w = e.state.with(i);
                for x in hc.edge(e.state, i).up(e.labels) {
                    let f = PosetElement { state: w, labels: x };
                    let b = *index.entry(f).or_insert_with(|| {
                        elements.push(f);
                        next.push(elements.len() - 1);
                        elements.len() - 1
                    });
                    covers.push((a, b, i));
                }
            }
        }
        level = next;
    }
    (elements, covers)
}

// Restricts to the interval [bottom, top] and sorts canonically.
fn trim(
    face: DecoratedFace,
    elements: Vec<PosetElement>,
    covers: Covers,
    bottom: usize,
    top: usize,
) -> ChainPoset {
    let n = elements.len();
    let mut up = vec![false; n];
    let mut down = vec![false; n];
    up[bottom] = true;
    down[top] = true;
    // covers are generated level by level, so one pass each way suffices
    for &(l, u, _) in &covers {
        if up[l] {
            up[u] = true;
        }
    }
    for &(l, u, _) in covers.iter().rev() {
        if down[u] {
            down[l] = true;
        }
    }
    let base_rank = face.base.weight();
    let mut keep: Vec<usize> = (0..n).filter(|&k| up[k] && down[k]).collect();
    keep.sort_by_key(|&k| {
        let e = elements[k];
        (e.state.weight(), e.state, e.labels.reverse_bits())
    });
    let mut new_index = vec![usize::MAX; n];
    for (p, &k) in keep.iter().enumerate() {
        new_index[k] = p;
    }
    let mut cov: Covers = covers
        .iter()
        .filter(|&&(l, u, _)| new_index[l] != usize::MAX && new_index[u] != usize::MAX)
        .map(|&(l, u, s)| (new_index[l], new_index[u], s))
        .collect();
    cov.sort_unstable();
    let elements: Vec<PosetElement> = keep.iter().map(|&k| elements[k]).collect();
    let ranks = elements.iter().map(|e| e.state.weight() - base_rank).collect();
    let mut p = ChainPoset { face, elements, ranks, covers: cov, chains: Vec::new() };
    let b = 0;
    let t = p.elements.len() - 1;
    let mut chains = Vec::new();
    let mut path = vec![b];
    extend_chains(&p.covers, t, &mut path, &mut chains);
    p.chains = chains;
    p
}

fn extend_chains(covers: &Covers, top: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    if last == top {
        out.push(path.clone());
        return;
    }
    for &(l, u, _) in covers {
        if l == last {
            path.push(u);
            extend_chains(covers, top, path, out);
            path.pop();
        }
    }
}

/// All `(v, S)` with `|S| = k` zero coordinates of `v`, by state then `S`.
pub fn cube_faces(n: usize, k: usize) -> Vec<(State, Vec<usize>)> {
    let mut out = Vec::new();
    for v in State::all(n) {
        let z = v.zeros();
        for s in subsets(&z, k) {
            out.push((v, s));
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (a, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[a + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Whether some cube edge inside the face `(v, S)` is an η-edge.
pub fn face_has_eta(hc: &Hypercube, v: State, sites: &[usize]) -> bool {
    let k = sites.len();
    for t in 0..1u64 << k {
        let u = (0..k).filter(|&a| t >> a & 1 == 1).fold(v, |s, a| s.with(sites[a]));
        for &i in sites {
            if !u.bit(i) && hc.kind(u, i) == ArcKind::Eta {
                return true;
            }
        }
    }
    false
}

/// Every decorated face on the cube face `(v, S)`, with x₊ on the circles
/// the face does not touch.
pub fn decorated_faces(hc: &Hypercube, v: State, sites: &[usize]) -> Vec<ChainPoset> {
    let d = hc.diagram(v);
    let mut touched: Vec<usize> = sites.iter().flat_map(|&i| d.touched(i)).collect();
    touched.sort_unstable();
    touched.dedup();
    let top = sites.iter().fold(v, |s, &i| s.with(i));
    let mut out = Vec::new();
    for r in 0..1u64 << touched.len() {
        let y = touched.iter().enumerate().filter(|(k, _)| r >> k & 1 == 1).fold(0, |acc, (_, &c)| acc | 1 << c);
        let (elements, covers) = closure_up(hc, v, sites, y);
        let mut tops: Vec<usize> = (0..elements.len()).filter(|&k| elements[k].state == top).collect();
        tops.sort_by_key(|&k| elements[k].labels.reverse_bits());
        for t in tops {
            let face = DecoratedFace { base: v, sites: sites.to_vec(), y, x: elements[t].labels };
            out.push(trim(face, elements.clone(), covers.clone(), 0, t));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index2Class {
    LeafOrColeaf,
    TwoCircleParallel,
    Butterfly,
    /// Faces with an η-edge, outside the classification.
    Other,
}

impl Index2Class {
    pub fn k(self) -> Option<usize> {
        match self {
            Index2Class::LeafOrColeaf | Index2Class::TwoCircleParallel => Some(2),
            Index2Class::Butterfly => Some(4),
            Index2Class::Other => None,
        }
    }
}

impl fmt::Display for Index2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Index2Class::LeafOrColeaf => "leaf_or_coleaf",
            Index2Class::TwoCircleParallel => "two_circle_parallel",
            Index2Class::Butterfly => "butterfly",
            Index2Class::Other => "other",
        })
    }
}

/// Classifies the index-2 face `(v, {i, j})` from its basic configuration.
pub fn classify_index2(hc: &Hypercube, v: State, i: usize, j: usize) -> Index2Class {
    if face_has_eta(hc, v, &[i, j]) {
        return Index2Class::Other;
    }
    let g = hc.configuration(v, &[i, j], true);
    if g.has_leaf() || g.has_coleaf() {
        return Index2Class::LeafOrColeaf;
    }
    let parallel = g.circles.len() == 2 && g.arcs.iter().all(|&(_, a, b)| a != b);
    if parallel {
        return Index2Class::TwoCircleParallel;
    }
    if g.circles.len() == 1 && hc.kind(v, i) == ArcKind::Delta && hc.kind(v, j) == ArcKind::Delta {
        return Index2Class::Butterfly;
    }
    Index2Class::Other
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassificationReport {
    /// Decorated index-2 faces per `(class, middle count)`.
    pub histogram: Vec<(String, usize, usize)>,
    /// η-free faces whose middle count disagrees with the class.
    pub mismatches: Vec<String>,
}

impl ClassificationReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, k, count) in &self.histogram {
            writeln!(f, "class {c} k={k} faces={count}")?;
        }
        for m in &self.mismatches {
            writeln!(f, "mismatch {m}")?;
        }
        Ok(())
    }
}

/// Checks middle counts of every index-2 decorated face against
/// [`classify_index2`].
pub fn classification_check(hc: &Hypercube) -> ClassificationReport {
    let mut hist: std::collections::BTreeMap<(String, usize), usize> = Default::default();
    let mut mismatches = Vec::new();
    for (v, s) in cube_faces(hc.n(), 2) {
        let c = classify_index2(hc, v, s[0], s[1]);
        for p in decorated_faces(hc, v, &s) {
            let k = p.middle_count();
            *hist.entry((c.to_string(), k)).or_insert(0) += 1;
            if c != Index2Class::Other && c.k() != Some(k) {
                mismatches.push(format!("{} class={c} k={k}", p.face.describe(hc)));
            }
            if c == Index2Class::Other && !face_has_eta(hc, v, &s) {
                mismatches.push(format!("{} unclassified k={k}", p.face.describe(hc)));
            }
        }
    }
    ClassificationReport { histogram: hist.into_iter().map(|((c, k), n)| (c, k, n)).collect(), mismatches }
}
