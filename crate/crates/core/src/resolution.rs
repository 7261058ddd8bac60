//! Resolution diagrams, arc kinds, bad faces and membership in the family G.
//!
//! At the matching edge `e = (a, b)` let `S_x`/`P_x` be the half-edges that
//! follow/precede `e` in the rotation at `x`. The 0-resolution replaces `e`
//! by two strands running along its two sides, `S_a-P_b` and `P_a-S_b`; the
//! 1-resolution crosses them, `S_a-S_b` and `P_a-P_b`, leaving a double
//! point. Every non-matching edge is traversed once per state.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use crate::plane_graph::{HalfEdge, MatchedGraph};
use crate::{par, Error, Result};

/// A vertex of the hypercube; bit `i` is coordinate `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct State {
    bits: u64,
    n: usize,
}

impl State {
    pub fn zero(n: usize) -> State {
        assert!(n < 64, "at most 63 matching edges");
        State { bits: 0, n }
    }

    pub fn ones(n: usize) -> State {
        State { bits: full(n), n }
    }

    pub fn from_mask(bits: u64, n: usize) -> State {
        assert!(n < 64 && bits & !full(n) == 0);
        State { bits, n }
    }

    pub fn parse(s: &str) -> Result<State> {
        let mut bits = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::Usage(format!("bad state `{s}`"))),
            }
        }
        if s.is_empty() || s.len() >= 64 {
            return Err(Error::Usage(format!("bad state `{s}`")));
        }
        Ok(State { bits, n: s.len() })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn mask(self) -> u64 {
        self.bits
    }

    pub fn bit(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> State {
        State { bits: self.bits | 1 << i, n: self.n }
    }

    pub fn without(self, i: usize) -> State {
        State { bits: self.bits & !(1 << i), n: self.n }
    }

    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn zeros(self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.bit(i)).collect()
    }

    /// All states in lexicographic order of their bit strings.
    pub fn all(n: usize) -> Vec<State> {
        let mut v: Vec<State> = (0..1u64 << n).map(|b| State { bits: b, n }).collect();
        v.sort();
        v
    }
}

fn full(n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            let d = self.bits ^ other.bits;
            if d == 0 {
                Ordering::Equal
            } else if self.bit(d.trailing_zeros() as usize) {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One passage of a circle: along a non-matching edge, or through a site.
///
/// `forward` is end 0 to end 1 for edges and the `a`-side to the `b`-side
/// for sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Edge { edge: usize, forward: bool },
    Site { site: usize, strand: usize, forward: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub site: usize,
    /// `(circle, position)` of the strand-0 and strand-1 passages.
    pub ends: [(usize, usize); 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionDiagram {
    pub state: State,
    pub circles: Vec<Vec<Token>>,
    pub double_points: Vec<Vec<usize>>,
    pub arcs: Vec<Arc>,
    edge_circle: Vec<usize>,
    strand_at: Vec<[(usize, usize); 2]>,
}

impl ResolutionDiagram {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Circle through a non-matching edge.
    pub fn circle_of_edge(&self, edge: usize) -> Option<usize> {
        match self.edge_circle[edge] {
            usize::MAX => None,
            c => Some(c),
        }
    }

    /// `(circle, position)` of each strand passage through `site`.
    pub fn strands(&self, site: usize) -> [(usize, usize); 2] {
        self.strand_at[site]
    }

    /// Circles passing through `site`, sorted and deduplicated.
    pub fn touched(&self, site: usize) -> Vec<usize> {
        let [(c0, _), (c1, _)] = self.strand_at[site];
        if c0 == c1 {
            vec![c0]
        } else {
            vec![c0.min(c1), c0.max(c1)]
        }
    }

    /// Arc kind from the local picture: different circles merge; on one circle
    /// the two strands split it iff they run the same way along the edge.
    pub fn local_arc_kind(&self, site: usize) -> ArcKind {
        let [(c0, p0), (c1, p1)] = self.strand_at[site];
        if c0 != c1 {
            return ArcKind::M;
        }
        let dir = |c: usize, p: usize| match self.circles[c][p] {
            Token::Site { forward, .. } => forward,
            Token::Edge { .. } => unreachable!(),
        };
        if dir(c0, p0) == dir(c1, p1) {
            ArcKind::Delta
        } else {
            ArcKind::Eta
        }
    }
}

// Per site: the four non-matching half-edges around the matching edge.
#[derive(Clone, Copy)]
struct SiteFrame {
    sa: HalfEdge,
    pa: HalfEdge,
    sb: HalfEdge,
    pb: HalfEdge,
}

fn frames(g: &MatchedGraph) -> Vec<SiteFrame> {
    g.matching()
        .iter()
        .map(|&e| {
            let ma = HalfEdge::new(e, 0);
            let mb = HalfEdge::new(e, 1);
            SiteFrame { sa: g.succ(ma), pa: g.pred(ma), sb: g.succ(mb), pb: g.pred(mb) }
        })
        .collect()
}

fn check_state(g: &MatchedGraph, v: State) -> Result<()> {
    if v.n() != g.n() {
        return Err(Error::StateLength { got: v.n(), want: g.n() });
    }
    Ok(())
}

pub fn resolve(g: &MatchedGraph, v: State) -> Result<ResolutionDiagram> {
    check_state(g, v)?;
    Ok(resolve_with(g, &frames(g), v))
}

fn resolve_with(g: &MatchedGraph, fr: &[SiteFrame], v: State) -> ResolutionDiagram {
    let ne = g.edge_count();
    // link[edge][end] = (site, strand, side, partner)
    let mut link = vec![[(0usize, 0usize, 0usize, HalfEdge::new(0, 0)); 2]; ne];
    for (i, f) in fr.iter().enumerate() {
        let pairs = if v.bit(i) { [(f.sa, f.sb), (f.pa, f.pb)] } else { [(f.sa, f.pb), (f.pa, f.sb)] };
        for (s, (x, y)) in pairs.into_iter().enumerate() {
            link[x.edge][x.end] = (i, s, 0, y);
            link[y.edge][y.end] = (i, s, 1, x);
        }
    }
    let mut edge_circle = vec![usize::MAX; ne];
    let mut strand_at = vec![[(usize::MAX, 0); 2]; g.n()];
    let mut circles = Vec::new();
    for e in 0..ne {
        if g.site_of(e).is_some() || edge_circle[e] != usize::MAX {
            continue;
        }
        let c = circles.len();
        let start = HalfEdge::new(e, 0);
        let mut tokens = Vec::new();
        let mut h = start;
        loop {
            edge_circle[h.edge] = c;
            tokens.push(Token::Edge { edge: h.edge, forward: h.end == 0 });
            let t = h.opposite();
            let (site, strand, side, next) = link[t.edge][t.end];
            strand_at[site][strand] = (c, tokens.len());
            tokens.push(Token::Site { site, strand, forward: side == 0 });
            h = next;
            if h == start {
                break;
            }
        }
        circles.push(tokens);
    }
    let double_points = circles
        .iter()
        .map(|ts| {
            ts.iter()
                .filter_map(|t| match *t {
                    Token::Site { site, .. } if v.bit(site) => Some(site),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let arcs = v.zeros().into_iter().map(|i| Arc { site: i, ends: strand_at[i] }).collect();
    ResolutionDiagram { state: v, circles, double_points, arcs, edge_circle, strand_at }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcKind {
    M,
    Delta,
    Eta,
}

impl ArcKind {
    fn from_counts(before: usize, after: usize) -> ArcKind {
        match after as i64 - before as i64 {
            -1 => ArcKind::M,
            1 => ArcKind::Delta,
            0 => ArcKind::Eta,
            d => panic!("surgery changed the circle count by {d}"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ArcKind::M => "m",
            ArcKind::Delta => "delta",
            ArcKind::Eta => "eta",
        }
    }
}

impl fmt::Display for ArcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Circle count of every state, indexed by state mask.
pub fn circle_counts(g: &MatchedGraph) -> Vec<usize> {
    let n = g.n();
    assert!(n < 40, "state space too large");
    let fr = frames(g);
    par::map((0..1u64 << n).collect(), |b| resolve_with(g, &fr, State::from_mask(b, n)).circle_count())
}

pub fn arc_kind(g: &MatchedGraph, v: State, i: usize) -> Result<ArcKind> {
    check_state(g, v)?;
    if i >= g.n() || v.bit(i) {
        return Err(Error::NotZeroCoordinate(i));
    }
    let fr = frames(g);
    let a = resolve_with(g, &fr, v).circle_count();
    let b = resolve_with(g, &fr, v.with(i)).circle_count();
    Ok(ArcKind::from_counts(a, b))
}

/// Surgery data for the cube edge `v -> v + e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeEdge {
    pub kind: ArcKind,
    /// Circles of the lower state through the site.
    pub lower: Vec<usize>,
    /// Circles of the upper state through the site.
    pub upper: Vec<usize>,
    /// `carry[c]`: the upper circle equal to lower circle `c`, or `usize::MAX`
    /// when `c` is touched.
    pub carry: Vec<usize>,
}

/// Labelings are bit masks over circles; a set bit is x₋.
pub type Labels = u64;

impl CubeEdge {
    fn carried(&self, y: Labels) -> Labels {
        let mut x = 0;
        for (c, &t) in self.carry.iter().enumerate() {
            if t != usize::MAX && y >> c & 1 == 1 {
                x |= 1 << t;
            }
        }
        x
    }

    /// Images of a lower labeling under the Frobenius map of this edge.
    pub fn up(&self, y: Labels) -> Vec<Labels> {
        let base = self.carried(y);
        match self.kind {
            ArcKind::Eta => vec![],
            ArcKind::M => {
                let (a, b, c) = (self.lower[0], self.lower[1], self.upper[0]);
                match (y >> a & 1, y >> b & 1) {
                    (1, 1) => vec![],
                    (0, 0) => vec![base],
                    _ => vec![base | 1 << c],
                }
            }
            ArcKind::Delta => {
                let (c, a, b) = (self.lower[0], self.upper[0], self.upper[1]);
                if y >> c & 1 == 1 {
                    vec![base | 1 << a | 1 << b]
                } else {
                    vec![base | 1 << b, base | 1 << a]
                }
            }
        }
    }

    /// The step read top-down with complemented labels: the reverse edge
    /// carries the dual surgery, whose kind swaps m and Δ.
    pub fn down(&self, x: Labels, lower_count: usize) -> Vec<Labels> {
        let mut base = 0;
        for c in 0..lower_count {
            let t = self.carry[c];
            if t != usize::MAX && x >> t & 1 == 1 {
                base |= 1 << c;
            }
        }
        match self.kind {
            ArcKind::Eta => vec![],
            ArcKind::Delta => {
                // dual m: upper a, b merge into lower c
                let (a, b, c) = (self.upper[0], self.upper[1], self.lower[0]);
                match (x >> a & 1, x >> b & 1) {
                    (1, 1) => vec![],
                    (0, 0) => vec![base],
                    _ => vec![base | 1 << c],
                }
            }
            ArcKind::M => {
                // dual Δ: upper c splits into lower a, b
                let (c, a, b) = (self.upper[0], self.lower[0], self.lower[1]);
                if x >> c & 1 == 1 {
                    vec![base | 1 << a | 1 << b]
                } else {
                    vec![base | 1 << b, base | 1 << a]
                }
            }
        }
    }
}

/// All resolution diagrams of a graph, with cube-edge data computed on demand.
pub struct Hypercube {
    graph: MatchedGraph,
    n: usize,
    diagrams: Vec<ResolutionDiagram>,
    edges: Vec<OnceLock<CubeEdge>>,
}

impl Hypercube {
    pub fn new(g: &MatchedGraph) -> Hypercube {
        let n = g.n();
        assert!(n <= 24, "hypercube of dimension {n} is too large");
        let fr = frames(g);
        let diagrams = par::map((0..1u64 << n).collect(), |b| resolve_with(g, &fr, State::from_mask(b, n)));
        let edges = (0..(n << n)).map(|_| OnceLock::new()).collect();
        Hypercube { graph: g.clone(), n, diagrams, edges }
    }

    pub fn graph(&self) -> &MatchedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagram(&self, v: State) -> &ResolutionDiagram {
        &self.diagrams[v.mask() as usize]
    }

    pub fn circle_count(&self, v: State) -> usize {
        self.diagram(v).circle_count()
    }

    pub fn kind(&self, v: State, i: usize) -> ArcKind {
        debug_assert!(!v.bit(i));
        ArcKind::from_counts(self.circle_count(v), self.circle_count(v.with(i)))
    }

    /// Data for the edge `v -> v + e_i`; `v_i` must be 0.
    pub fn edge(&self, v: State, i: usize) -> &CubeEdge {
        assert!(!v.bit(i), "coordinate {i} of {v} is not 0");
        self.edges[(v.mask() as usize) * self.n + i].get_or_init(|| {
            let lo = self.diagram(v);
            let hi = self.diagram(v.with(i));
            let lower = lo.touched(i);
            let upper = hi.touched(i);
            let carry = (0..lo.circle_count())
                .map(|c| {
                    if lower.contains(&c) {
                        return usize::MAX;
                    }
                    let e = lo.circles[c]
                        .iter()
                        .find_map(|t| match *t {
                            Token::Edge { edge, .. } => Some(edge),
                            _ => None,
                        })
                        .expect("circle without an edge passage");
                    hi.circle_of_edge(e).unwrap()
                })
                .collect();
            CubeEdge { kind: ArcKind::from_counts(lo.circle_count(), hi.circle_count()), lower, upper, carry }
        })
    }

    pub fn face_report(&self, v: State, i: usize, j: usize) -> FaceReport {
        let kinds = [
            self.kind(v, i),
            self.kind(v.with(i), j),
            self.kind(v, j),
            self.kind(v.with(j), i),
        ];
        FaceReport { base: v, i, j, kinds, bad: is_bad(kinds) }
    }

    /// Every 2-face, ordered by base state then coordinate pair.
    pub fn faces(&self) -> Vec<FaceReport> {
        let mut out = Vec::new();
        for v in State::all(self.n) {
            let z = v.zeros();
            for (a, &i) in z.iter().enumerate() {
                for &j in &z[a + 1..] {
                    out.push(self.face_report(v, i, j));
                }
            }
        }
        out
    }

    pub fn first_bad_face(&self) -> Option<FaceReport> {
        for v in State::all(self.n) {
            let z = v.zeros();
            for (a, &i) in z.iter().enumerate() {
                for &j in &z[a + 1..] {
                    let r = self.face_report(v, i, j);
                    if r.bad {
                        return Some(r);
                    }
                }
            }
        }
        None
    }

    /// Configuration graph of `D(v)` restricted to the arcs at `sites`.
    ///
    /// With `basic` only circles meeting those arcs are vertices; otherwise
    /// all circles of `D(v)` are.
    pub fn configuration(&self, v: State, sites: &[usize], basic: bool) -> ConfigurationGraph {
        let lo = self.diagram(v);
        let top = sites.iter().fold(v, |s, &i| s.with(i));
        let hi = self.diagram(top);
        let build = |d: &ResolutionDiagram| -> (Vec<usize>, Vec<(usize, usize, usize)>) {
            let mut verts: Vec<usize> = if basic {
                sites.iter().flat_map(|&i| d.touched(i)).collect()
            } else {
                (0..d.circle_count()).collect()
            };
            verts.sort_unstable();
            verts.dedup();
            let pos = |c: usize| verts.binary_search(&c).unwrap();
            let edges = sites
                .iter()
                .map(|&i| {
                    let [(c0, _), (c1, _)] = d.strands(i);
                    (i, pos(c0), pos(c1))
                })
                .collect();
            (verts, edges)
        };
        let (circles, arcs) = build(lo);
        let (dual_circles, dual_arcs) = build(hi);
        let leaf = degree_one(circles.len(), &arcs);
        let dual_leaf = degree_one(dual_circles.len(), &dual_arcs);
        let coleaf = dual_arcs.iter().map(|&(_, a, b)| dual_leaf[a] || dual_leaf[b]).collect();
        ConfigurationGraph { state: v, circles, arcs, leaf, coleaf }
    }
}

fn degree_one(nv: usize, arcs: &[(usize, usize, usize)]) -> Vec<bool> {
    let mut deg = vec![0; nv];
    for &(_, a, b) in arcs {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.into_iter().map(|d| d == 1).collect()
}

/// The graph G(D): one vertex per circle, one edge per arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationGraph {
    pub state: State,
    /// Circle index of each vertex.
    pub circles: Vec<usize>,
    /// `(site, vertex, vertex)` per arc.
    pub arcs: Vec<(usize, usize, usize)>,
    pub leaf: Vec<bool>,
    /// Per arc: its dual arc ends on a leaf of G(D*).
    pub coleaf: Vec<bool>,
}

impl ConfigurationGraph {
    pub fn has_leaf(&self) -> bool {
        self.leaf.iter().any(|&l| l)
    }

    pub fn has_coleaf(&self) -> bool {
        self.coleaf.iter().any(|&l| l)
    }
}

pub fn configuration_graph(g: &MatchedGraph, v: State) -> Result<ConfigurationGraph> {
    check_state(g, v)?;
    let hc = Hypercube::new(g);
    Ok(hc.configuration(v, &v.zeros(), false))
}

fn is_bad(k: [ArcKind; 4]) -> bool {
    use ArcKind::*;
    let (p, q) = ((k[0], k[1]), (k[2], k[3]));
    (p == (Delta, M) && q == (Eta, Eta)) || (q == (Delta, M) && p == (Eta, Eta))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceReport {
    pub base: State,
    pub i: usize,
    pub j: usize,
    /// Arc `i` at `v`, arc `j` at `v+e_i`, arc `j` at `v`, arc `i` at `v+e_j`.
    pub kinds: [ArcKind; 4],
    pub bad: bool,
}

impl fmt::Display for FaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.kinds;
        write!(
            f,
            "v={} face=({},{}) kinds={},{}|{},{} bad={}",
            self.base, self.i, self.j, k[0], k[1], k[2], k[3], self.bad as u8
        )
    }
}

pub fn scan_faces(g: &MatchedGraph) -> Vec<FaceReport> {
    Hypercube::new(g).faces()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<FaceReport>,
}

pub fn in_family_g(g: &MatchedGraph) -> Membership {
    let witness = Hypercube::new(g).first_bad_face();
    Membership { member: witness.is_none(), witness }
}
