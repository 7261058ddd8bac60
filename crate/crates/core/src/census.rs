//! Census of plane trivalent multigraphs with a perfect matching: what share
//! lies in 𝒢.
//!
//! Exhaustive mode lists every loopless connected cubic multigraph on `2m`
//! vertices, every genus-0 rotation system of it and every perfect matching.
//! Results are grouped two ways: per embedding (maps up to isomorphism and
//! mirror) and per abstract pair `(G, M)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::plane_graph::{Edge, HalfEdge, MatchedGraph};
use crate::resolution::in_family_g;
use crate::{Error, Result};

pub const EXHAUSTIVE_MAX_M: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// One embedded graph with matching.
#[derive(Clone, Debug)]
pub struct CensusItem {
    pub graph: MatchedGraph,
    pub member: bool,
    pub embedding_key: Vec<u32>,
    pub abstract_key: Vec<(usize, usize, bool)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grouped {
    pub total: usize,
    pub members: usize,
}

impl Grouped {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.members as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub m: usize,
    pub mode: CensusMode,
    pub per_embedding: Grouped,
    /// Abstract pairs all of whose embeddings are members.
    pub per_abstract_all: Grouped,
    /// Abstract pairs with at least one member embedding.
    pub per_abstract_any: Grouped,
    /// A non-member with the fewest sites, first in enumeration order.
    pub smallest_non_member: Option<MatchedGraph>,
}

impl CensusReport {
    pub fn in_range(&self, lo: f64, hi: f64) -> bool {
        [&self.per_embedding, &self.per_abstract_all, &self.per_abstract_any]
            .iter()
            .any(|g| (lo..=hi).contains(&g.fraction()))
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            CensusMode::Exhaustive => writeln!(f, "census m={} mode=exhaustive", self.m)?,
            CensusMode::Sample { count, seed } => {
                writeln!(f, "census m={} mode=sample count={count} seed={seed}", self.m)?
            }
        }
        let row = |f: &mut fmt::Formatter<'_>, name: &str, g: &Grouped| {
            writeln!(f, "{name} total={} members={} fraction={:.4}", g.total, g.members, g.fraction())
        };
        row(f, "per_embedding", &self.per_embedding)?;
        if self.mode == CensusMode::Exhaustive {
            row(f, "per_abstract_all", &self.per_abstract_all)?;
            row(f, "per_abstract_any", &self.per_abstract_any)?;
        }
        Ok(())
    }
}

pub fn census(m: usize, mode: CensusMode) -> Result<CensusReport> {
    if m == 0 {
        return Err(Error::Invalid(vec!["census needs m >= 1".into()]));
    }
    let items = match mode {
        CensusMode::Exhaustive if m > EXHAUSTIVE_MAX_M => {
            return Err(Error::Invalid(vec![format!("m={m} is too large for exhaustive mode; use sample mode")]))
        }
        CensusMode::Exhaustive => exhaustive(m),
        CensusMode::Sample { count, seed } => sample(m, count, seed)?,
    };
    Ok(summarize(m, mode, items))
}

fn summarize(m: usize, mode: CensusMode, items: Vec<CensusItem>) -> CensusReport {
    let mut per_embedding = Grouped::default();
    let mut abstracts: BTreeMap<&[(usize, usize, bool)], (bool, bool)> = BTreeMap::new();
    let mut smallest_non_member = None;
    match mode {
        CensusMode::Exhaustive => {
            let mut seen = BTreeSet::new();
            for it in &items {
                if !seen.insert(&it.embedding_key) {
                    continue;
                }
                per_embedding.total += 1;
                per_embedding.members += it.member as usize;
                let e = abstracts.entry(&it.abstract_key).or_insert((true, false));
                e.0 &= it.member;
                e.1 |= it.member;
                if !it.member && smallest_non_member.is_none() {
                    smallest_non_member = Some(it.graph.clone());
                }
            }
        }
        CensusMode::Sample { .. } => {
            for it in &items {
                per_embedding.total += 1;
                per_embedding.members += it.member as usize;
                if !it.member && smallest_non_member.is_none() {
                    smallest_non_member = Some(it.graph.clone());
                }
            }
        }
    }
    let per_abstract_all = Grouped { total: abstracts.len(), members: abstracts.values().filter(|e| e.0).count() };
    let per_abstract_any = Grouped { total: abstracts.len(), members: abstracts.values().filter(|e| e.1).count() };
    CensusReport { m, mode, per_embedding, per_abstract_all, per_abstract_any, smallest_non_member }
}

/// Multiplicity matrices of loopless connected cubic multigraphs on `nv`
/// labeled vertices, one per isomorphism class.
pub fn cubic_multigraphs(nv: usize) -> Vec<Vec<(usize, usize)>> {
    fn fill(pairs: &[(usize, usize)], k: usize, deg: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if k == pairs.len() {
            if deg.iter().all(|&d| d == 3) {
                out.push(cur.clone());
            }
            return;
        }
        let (a, b) = pairs[k];
        // vertex a sees no pairs after its last one
        let last_a = pairs.iter().rposition(|p| p.0 == a || p.1 == a).unwrap();
        for mult in 0..=3 {
            if deg[a] + mult > 3 || deg[b] + mult > 3 {
                break;
            }
            if k == last_a && deg[a] + mult != 3 {
                continue;
            }
            deg[a] += mult;
            deg[b] += mult;
            for _ in 0..mult {
                cur.push((a, b));
            }
            fill(pairs, k + 1, deg, cur, out);
            for _ in 0..mult {
                cur.pop();
            }
            deg[a] -= mult;
            deg[b] -= mult;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..nv).tuple_combinations().collect();
    let mut all = Vec::new();
    fill(&pairs, 0, &mut vec![0; nv], &mut Vec::new(), &mut all);
    let mut seen = BTreeSet::new();
    all.into_iter()
        .filter(|es| connected(nv, es))
        .filter(|es| seen.insert(abstract_key(nv, &es.iter().map(|&(a, b)| (a, b, false)).collect::<Vec<_>>())))
        .collect()
}

fn connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Least relabeled sorted edge list over all vertex permutations.
fn abstract_key(nv: usize, edges: &[(usize, usize, bool)]) -> Vec<(usize, usize, bool)> {
    (0..nv)
        .permutations(nv)
        .map(|p| {
            let mut k: Vec<(usize, usize, bool)> = edges
                .iter()
                .map(|&(a, b, mk)| (p[a].min(p[b]), p[a].max(p[b]), mk))
                .collect();
            k.sort_unstable();
            k
        })
        .min()
        .unwrap()
}

fn perfect_matchings(nv: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn go(edges: &[(usize, usize)], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = used.iter().position(|u| !u) else {
            out.push(cur.clone());
            return;
        };
        for (k, &(a, b)) in edges.iter().enumerate() {
            if (a == v || b == v) && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                cur.push(k);
                go(edges, used, cur, out);
                cur.pop();
                used[a] = false;
                used[b] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(edges, &mut vec![false; nv], &mut Vec::new(), &mut out);
    out
}

fn build(nv: usize, edges: &[(usize, usize)], flips: u64, matching: &[usize]) -> Result<MatchedGraph> {
    let mut darts: Vec<Vec<HalfEdge>> = vec![Vec::new(); nv];
    for (k, &(a, b)) in edges.iter().enumerate() {
        darts[a].push(HalfEdge::new(k, 0));
        darts[b].push(HalfEdge::new(k, 1));
    }
    for (v, d) in darts.iter_mut().enumerate() {
        if flips >> v & 1 == 1 {
            d.swap(1, 2);
        }
    }
    let vertices = (0..nv).map(|v| format!("v{v}")).collect();
    let es = edges.iter().enumerate().map(|(k, &(a, b))| Edge { id: format!("e{k}"), ends: [a, b] }).collect();
    MatchedGraph::from_parts("census", vertices, es, darts, matching.to_vec())
}

fn item(g: MatchedGraph, edges: &[(usize, usize)], matching: &[usize]) -> CensusItem {
    let member = in_family_g(&g).member;
    let marked: Vec<(usize, usize, bool)> =
        edges.iter().enumerate().map(|(k, &(a, b))| (a, b, matching.contains(&k))).collect();
    CensusItem { embedding_key: map_key(&g), abstract_key: abstract_key(g.vertex_count(), &marked), graph: g, member }
}

fn exhaustive(m: usize) -> Vec<CensusItem> {
    let nv = 2 * m;
    let mut work = Vec::new();
    for edges in cubic_multigraphs(nv) {
        let matchings = perfect_matchings(nv, &edges);
        for flips in 0..1u64 << nv {
            let g = build(nv, &edges, flips, &matchings[0]).expect("census graph");
            if g.euler_characteristic() != 2 {
                continue;
            }
            for mt in &matchings {
                work.push((edges.clone(), flips, mt.clone()));
            }
        }
    }
    crate::par::map(work, |(edges, flips, mt)| item(build(nv, &edges, flips, &mt).expect("census graph"), &edges, &mt))
}

fn sample(m: usize, count: usize, seed: u64) -> Result<Vec<CensusItem>> {
    const ATTEMPTS: usize = 1_000_000;
    let nv = 2 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > ATTEMPTS * count.max(1) {
            return Err(Error::Invalid(vec![format!("sampling m={m} found no planar graph in {ATTEMPTS} attempts")]));
        }
        let mut points: Vec<usize> = (0..3 * nv).map(|p| p / 3).collect();
        points.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        if edges.iter().any(|&(a, b)| a == b) || !connected(nv, &edges) {
            continue;
        }
        let flips: u64 = rng.gen::<u64>() & ((1u64 << nv) - 1);
        let probe = build(nv, &edges, flips, &[])?;
        if probe.euler_characteristic() != 2 {
            continue;
        }
        let matchings = perfect_matchings(nv, &edges);
        let Some(mt) = matchings.choose(&mut rng) else { continue };
        out.push(item(build(nv, &edges, flips, mt)?, &edges, mt));
    }
    Ok(out)
}

/// Canonical code of the map with its matching, least over every starting
/// dart in both orientations.
pub fn map_key(g: &MatchedGraph) -> Vec<u32> {
    let ne = g.edge_count();
    let idx = |h: HalfEdge| 2 * h.edge + h.end;
    let mut best: Option<Vec<u32>> = None;
    for start in 0..2 * ne {
        for mirror in [false, true] {
            let mut label = vec![u32::MAX; 2 * ne];
            let mut order = Vec::with_capacity(2 * ne);
            let mut queue = VecDeque::new();
            let s = HalfEdge::new(start / 2, start % 2);
            label[idx(s)] = 0;
            order.push(s);
            queue.push_back(s);
            while let Some(h) = queue.pop_front() {
                let r = if mirror { g.pred(h) } else { g.succ(h) };
                for x in [h.opposite(), r] {
                    if label[idx(x)] == u32::MAX {
                        label[idx(x)] = order.len() as u32;
                        order.push(x);
                        queue.push_back(x);
                    }
                }
            }
            let mut code = Vec::with_capacity(3 * order.len());
            for &h in &order {
                let r = if mirror { g.pred(h) } else { g.succ(h) };
                code.push(label[idx(h.opposite())]);
                code.push(label[idx(r)]);
                code.push(g.site_of(h.edge).is_some() as u32);
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // theta; K4 and the square with two doubled sides
        assert_eq!(cubic_multigraphs(2).len(), 1);
        assert_eq!(cubic_multigraphs(4).len(), 2);
    }

    #[test]
    fn one_site_is_all_members() {
        let r = census(1, CensusMode::Exhaustive).unwrap();
        assert_eq!(r.per_embedding.fraction(), 1.0);
    }

    #[test]
    fn exhaustive_cap() {
        let e = census(4, CensusMode::Exhaustive).unwrap_err();
        assert!(e.to_string().contains("use sample mode"));
    }
}
