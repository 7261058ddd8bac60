#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use twofactor::invariants::QBlock;
use twofactor::resolution::State;
use twofactor::webs::{flatten, parse_pd, FlatteningState, LinkDiagram};
use twofactor::{read_graph, MatchedGraph};

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn graph(name: &str) -> MatchedGraph {
    read_graph(&fixture(name)).unwrap()
}

pub fn link(name: &str) -> LinkDiagram {
    parse_pd(&fixture(&format!("{name}.pd"))).unwrap().with_name(name)
}

/// Every flattening of `name` that produces a graph.
pub fn webs(name: &str) -> Vec<MatchedGraph> {
    let l = link(name);
    State::all(l.crossing_count())
        .into_iter()
        .filter_map(|v| flatten(&l, FlatteningState::Bits(v)).ok())
        .collect()
}

pub const GRAPHS: [&str; 6] = ["theta.tfg", "l2.tfg", "k4-af.tfg", "k4-bd.tfg", "k4-ce.tfg", "prism.tfg"];
pub const LINKS: [&str; 4] = ["trefoil", "trefoil-left", "hopf", "figure8"];

pub fn corpus() -> Vec<MatchedGraph> {
    let mut out: Vec<MatchedGraph> = GRAPHS.iter().map(|f| graph(f)).collect();
    for l in LINKS {
        out.extend(webs(l));
    }
    out
}

/// 2-factors containing the matching, by trying every subset of the other edges.
pub fn brute_two_factors(g: &MatchedGraph) -> u64 {
    let others: Vec<usize> = (0..g.edge_count()).filter(|&e| g.site_of(e).is_none()).collect();
    let mut base = vec![0u32; g.vertex_count()];
    for &e in g.matching() {
        for v in g.edge(e).ends {
            base[v] += 1;
        }
    }
    let mut count = 0;
    for mask in 0u64..1 << others.len() {
        let mut deg = base.clone();
        for (k, &e) in others.iter().enumerate() {
            if mask >> k & 1 == 1 {
                for v in g.edge(e).ends {
                    deg[v] += 1;
                }
            }
        }
        if deg.iter().all(|&d| d == 2) {
            count += 1;
        }
    }
    count
}

/// Circles of the resolution at `v`, counted with union-find over the
/// non-matching edges. Walking from `a` to `b` along a matching edge, the
/// rotation successor at `a` and the predecessor at `b` lie on the left, so
/// the parallel (0) resolution joins those two and the crossing (1)
/// resolution joins successor with successor.
pub fn circles(g: &MatchedGraph, v: State) -> usize {
    let ne = g.edge_count();
    let mut parent: Vec<usize> = (0..ne).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, &m) in g.matching().iter().enumerate() {
        let (a, b) = (twofactor::HalfEdge::new(m, 0), twofactor::HalfEdge::new(m, 1));
        let (sa, pa, sb, pb) = (g.succ(a).edge, g.pred(a).edge, g.succ(b).edge, g.pred(b).edge);
        let pairs = if v.bit(i) { [(sa, sb), (pa, pb)] } else { [(sa, pb), (pa, sb)] };
        for (x, y) in pairs {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    let others: Vec<usize> = (0..ne).filter(|&e| g.site_of(e).is_none()).collect();
    let mut roots: Vec<usize> = others.iter().map(|&e| find(&mut parent, e)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// State sum `Σ (-q)^|v| (q + q^-1)^circles(v)` as exponent -> coefficient.
pub fn state_sum(g: &MatchedGraph) -> BTreeMap<i64, i64> {
    let mut total = BTreeMap::new();
    for v in State::all(g.n()) {
        let c = circles(g, v);
        let h = v.weight() as i64;
        for k in 0..=c {
            let binom = (0..k).fold(1i64, |acc, t| acc * (c - t) as i64 / (t + 1) as i64);
            let exp = h + c as i64 - 2 * k as i64;
            *total.entry(exp).or_insert(0) += if h % 2 == 0 { binom } else { -binom };
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

/// Independent face count by walking darts through the rotation system.
pub fn face_count(g: &MatchedGraph) -> usize {
    let ne = g.edge_count();
    let mut seen = vec![false; 2 * ne];
    let mut faces = 0;
    for start in 0..2 * ne {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            // dart d = edge d/2 leaving end d%2; step to the far end and turn
            let far = twofactor::HalfEdge::new(d / 2, 1 - d % 2);
            let nx = g.succ(far);
            d = 2 * nx.edge + nx.end;
        }
    }
    faces
}

/// dim ker - dim im at each homological degree of a block over GF(2), by
/// listing every vector. Only for small blocks.
pub fn brute_gf2_homology(b: &QBlock) -> Vec<usize> {
    let dims: Vec<usize> = b.bases.iter().map(Vec::len).collect();
    let apply = |i: usize, x: u32| -> u32 {
        let d = &b.diffs[i];
        let mut y = 0u32;
        for r in 0..d.rows() {
            let mut s = 0i64;
            for c in 0..d.cols() {
                if x >> c & 1 == 1 {
                    s += d.get(r, c);
                }
            }
            if s.rem_euclid(2) == 1 {
                y |= 1 << r;
            }
        }
        y
    };
    let mut kernel = vec![0usize; dims.len()];
    let mut image = vec![0usize; dims.len()];
    for i in 0..dims.len() {
        assert!(dims[i] <= 16, "block too large for brute force");
        if i < b.diffs.len() {
            let mut seen = std::collections::HashSet::new();
            let mut zeros = 0usize;
            for x in 0..1u32 << dims[i] {
                let y = apply(i, x);
                if y == 0 {
                    zeros += 1;
                }
                seen.insert(y);
            }
            kernel[i] = zeros.trailing_zeros() as usize;
            image[i + 1] = seen.len().trailing_zeros() as usize;
        } else {
            kernel[i] = dims[i];
        }
    }
    (0..dims.len()).map(|i| kernel[i] - image[i]).collect()
}
