//! Plane trivalent multigraphs with a perfect matching, stored as rotation systems.

use std::collections::BTreeSet;

use crate::{Error, Result};

mod io;

pub use io::{read_graph, write_graph};

/// Half-edge token `edge.end`; it sits at `edges[edge].ends[end]`.
///
/// Read as a dart it points away from that endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: usize,
}

impl HalfEdge {
    pub fn new(edge: usize, end: usize) -> Self {
        HalfEdge { edge, end }
    }

    pub fn opposite(self) -> Self {
        HalfEdge { edge: self.edge, end: 1 - self.end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedGraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    rotations: Vec<[HalfEdge; 3]>,
    matching: Vec<usize>,
    // (vertex, slot) of every half-edge, indexed [edge][end]
    slots: Vec<[(usize, usize); 2]>,
    site_of: Vec<Option<usize>>,
}

impl MatchedGraph {
    /// Assembles a graph from index data.
    ///
    /// Fails on structural errors only (missing or dangling tokens, loops,
    /// rotation length). Matching, connectivity and genus are checked by
    /// [`MatchedGraph::validate`].
    pub fn from_parts(
        name: impl Into<String>,
        vertices: Vec<String>,
        edges: Vec<Edge>,
        rotations: Vec<Vec<HalfEdge>>,
        matching: Vec<usize>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if rotations.len() != nv {
            return Err(Error::Structural(format!(
                "{} rotations for {} vertices",
                rotations.len(),
                nv
            )));
        }
        for e in &edges {
            if e.ends[0] >= nv || e.ends[1] >= nv {
                return Err(Error::Structural(format!("edge {} has an unknown endpoint", e.id)));
            }
            if e.ends[0] == e.ends[1] {
                return Err(Error::Structural(format!("loop edge {}", e.id)));
            }
        }
        let mut slots = vec![[(usize::MAX, 0); 2]; edges.len()];
        let mut rots = Vec::with_capacity(nv);
        for (v, rot) in rotations.iter().enumerate() {
            if rot.len() != 3 {
                return Err(Error::Structural(format!(
                    "rotation length ≠ 3 at vertex {}",
                    vertices[v]
                )));
            }
            for &h in rot {
                if h.edge >= edges.len() || h.end > 1 {
                    return Err(Error::Structural(format!("dangling token at vertex {}", vertices[v])));
                }
                let e = &edges[h.edge];
                if e.ends[h.end] != v {
                    return Err(Error::Structural(format!(
                        "dangling token {}.{} at vertex {} (edge ends at {})",
                        e.id, h.end, vertices[v], vertices[e.ends[h.end]]
                    )));
                }
                if slots[h.edge][h.end].0 != usize::MAX {
                    return Err(Error::Structural(format!("duplicate token {}.{}", e.id, h.end)));
                }
                slots[h.edge][h.end] = (v, 0);
            }
            rots.push(canonical_rotation([rot[0], rot[1], rot[2]]));
        }
        for (ei, s) in slots.iter().enumerate() {
            for end in 0..2 {
                if s[end].0 == usize::MAX {
                    return Err(Error::Structural(format!(
                        "token {}.{} missing from the rotation of {}",
                        edges[ei].id, end, vertices[edges[ei].ends[end]]
                    )));
                }
            }
        }
        let mut site_of = vec![None; edges.len()];
        for (i, &e) in matching.iter().enumerate() {
            if e >= edges.len() {
                return Err(Error::Structural("matching names an unknown edge".into()));
            }
            if site_of[e].is_some() {
                return Err(Error::Structural(format!("edge {} matched twice", edges[e].id)));
            }
            site_of[e] = Some(i);
        }
        let mut g = MatchedGraph {
            name: name.into(),
            vertices,
            edges,
            rotations: rots,
            matching,
            slots,
            site_of,
        };
        g.fill_slots();
        Ok(g)
    }

    fn fill_slots(&mut self) {
        for (v, rot) in self.rotations.iter().enumerate() {
            for (k, h) in rot.iter().enumerate() {
                self.slots[h.edge][h.end] = (v, k);
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|x| x == id)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> [HalfEdge; 3] {
        self.rotations[v]
    }

    /// Matching edges in coordinate order.
    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// Number of matching edges, i.e. the hypercube dimension.
    pub fn n(&self) -> usize {
        self.matching.len()
    }

    /// Coordinate of a matching edge.
    pub fn site_of(&self, e: usize) -> Option<usize> {
        self.site_of[e]
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.slots[h.edge][h.end].0
    }

    /// Next half-edge in the rotation at the vertex of `h`.
    pub fn succ(&self, h: HalfEdge) -> HalfEdge {
        let (v, k) = self.slots[h.edge][h.end];
        self.rotations[v][(k + 1) % 3]
    }

    pub fn pred(&self, h: HalfEdge) -> HalfEdge {
        let (v, k) = self.slots[h.edge][h.end];
        self.rotations[v][(k + 2) % 3]
    }

    /// Face boundaries as dart cycles: the dart after `d` is the rotation
    /// successor of its reverse.
    pub fn faces(&self) -> Vec<Vec<HalfEdge>> {
        let mut seen = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for end in 0..2 {
                if seen[e][end] {
                    continue;
                }
                let start = HalfEdge::new(e, end);
                let mut face = Vec::new();
                let mut d = start;
                loop {
                    seen[d.edge][d.end] = true;
                    face.push(d);
                    d = self.succ(d.opposite());
                    if d == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces().len() as i64
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for h in self.rotations[v] {
                let w = self.edges[h.edge].ends[1 - h.end];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Lists every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push("graph has no vertices".to_string());
        }
        if self.matching.is_empty() {
            out.push("matching is empty".to_string());
        }
        let mut cover = vec![0usize; self.vertices.len()];
        for &e in &self.matching {
            for v in self.edges[e].ends {
                cover[v] += 1;
            }
        }
        for (v, &c) in cover.iter().enumerate() {
            if c != 1 {
                out.push(format!(
                    "matching not perfect: vertex {} covered {} times",
                    self.vertices[v], c
                ));
            }
        }
        if !self.is_connected() {
            out.push("graph is not connected".to_string());
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            out.push(format!(
                "embedding is not genus 0: V - E + F = {} - {} + {} = {}",
                self.vertices.len(),
                self.edges.len(),
                self.faces().len(),
                chi
            ));
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub fn apply_flip(&self, disk: &FlipDisk) -> Result<MatchedGraph> {
        let mut g = self.clone();
        for &v in &disk.vertices {
            if v >= g.vertices.len() {
                return Err(Error::NotFlipDisk(format!("vertex index {v} out of range")));
            }
            let [a, b, c] = g.rotations[v];
            g.rotations[v] = [a, c, b];
        }
        g.fill_slots();
        if g.euler_characteristic() != 2 {
            return Err(Error::Internal("flip broke the genus-0 embedding".into()));
        }
        Ok(g)
    }

    /// Relabels the coordinates: coordinate `i` of the result is `order[i]` here.
    pub fn reorder_matching(&self, order: &[usize]) -> Result<MatchedGraph> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.n()).collect::<Vec<_>>() {
            return Err(Error::Usage("matching order must be a permutation".into()));
        }
        let matching = order.iter().map(|&i| self.matching[i]).collect();
        self.rebuild(self.rotations.iter().map(|r| r.to_vec()).collect(), matching)
    }

    /// The same graph with every rotation reversed.
    pub fn mirror(&self) -> MatchedGraph {
        let mut g = self.clone();
        for r in g.rotations.iter_mut() {
            *r = [r[0], r[2], r[1]];
        }
        g.fill_slots();
        g
    }

    fn rebuild(&self, rotations: Vec<Vec<HalfEdge>>, matching: Vec<usize>) -> Result<MatchedGraph> {
        MatchedGraph::from_parts(
            self.name.clone(),
            self.vertices.clone(),
            self.edges.clone(),
            rotations,
            matching,
        )
    }

    /// Number of 2-factors containing the matching.
    pub fn two_factor_count(&self) -> u64 {
        let mut choice = vec![None; self.vertices.len()];
        self.count_from(0, &mut choice)
    }

    fn non_matching_at(&self, v: usize) -> [HalfEdge; 2] {
        let r = self.rotations[v];
        let mut out = [r[0]; 2];
        let mut k = 0;
        for h in r {
            if self.site_of[h.edge].is_none() && k < 2 {
                out[k] = h;
                k += 1;
            }
        }
        out
    }

    // Each vertex picks one of its two non-matching edges; an edge is in the
    // 2-factor iff both its endpoints pick it. Picks are made in pairs, so an
    // unpicked vertex has no picked edge yet.
    fn count_from(&self, v: usize, choice: &mut Vec<Option<usize>>) -> u64 {
        if v == self.vertices.len() {
            return 1;
        }
        if choice[v].is_some() {
            return self.count_from(v + 1, choice);
        }
        let mut total = 0;
        for h in self.non_matching_at(v) {
            let w = self.edges[h.edge].ends[1 - h.end];
            if choice[w].is_some() {
                continue;
            }
            choice[v] = Some(h.edge);
            choice[w] = Some(h.edge);
            total += self.count_from(v + 1, choice);
            choice[v] = None;
            choice[w] = None;
        }
        total
    }
}

fn canonical_rotation(r: [HalfEdge; 3]) -> [HalfEdge; 3] {
    let k = (0..3).min_by_key(|&k| r[k]).unwrap();
    [r[k], r[(k + 1) % 3], r[(k + 2) % 3]]
}

/// Vertex set of a disk whose boundary meets the graph in at most two edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipDisk {
    vertices: BTreeSet<usize>,
    kind: usize,
}

impl FlipDisk {
    pub fn new(graph: &MatchedGraph, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        if vertices.is_empty() || vertices.len() >= graph.vertex_count() {
            return Err(Error::NotFlipDisk("subset must be proper and nonempty".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= graph.vertex_count()) {
            return Err(Error::NotFlipDisk(format!("vertex index {v} out of range")));
        }
        let kind = graph
            .edges
            .iter()
            .filter(|e| vertices.contains(&e.ends[0]) != vertices.contains(&e.ends[1]))
            .count();
        if kind > 2 {
            return Err(Error::NotFlipDisk(format!("cut size {kind} > 2")));
        }
        Ok(FlipDisk { vertices, kind })
    }

    pub fn from_ids(graph: &MatchedGraph, ids: &[&str]) -> Result<Self> {
        let mut vs = Vec::new();
        for id in ids {
            vs.push(
                graph
                    .vertex_index(id)
                    .ok_or_else(|| Error::NotFlipDisk(format!("unknown vertex {id}")))?,
            );
        }
        FlipDisk::new(graph, vs)
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    /// Cut size: 0, 1 or 2.
    pub fn kind(&self) -> usize {
        self.kind
    }

    /// All flip disks of a graph, by brute force over vertex subsets.
    ///
    /// A subset and its complement give mirror-equivalent flips; only the
    /// subset not containing vertex 0 is kept.
    pub fn enumerate(graph: &MatchedGraph) -> Vec<FlipDisk> {
        let nv = graph.vertex_count();
        assert!(nv <= 24, "flip enumeration is exponential");
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << nv) {
            if mask & 1 == 1 {
                continue;
            }
            let set = (0..nv).filter(|v| mask >> v & 1 == 1);
            if let Ok(d) = FlipDisk::new(graph, set) {
                out.push(d);
            }
        }
        out
    }
}
