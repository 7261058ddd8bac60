mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use twofactor::census::cubic_multigraphs;
use twofactor::moduli::{butterfly_match, classify_index2, cube_faces, verify_six_cycles, Index2Class, PairingRule};
use twofactor::resolution::{Hypercube, State, Token};
use twofactor::{
    build_complex, euler_check, homology, in_family_g, read_graph, two_factor_polynomial, write_graph, FlipDisk,
    MatchedGraph, Ring,
};

fn corpus() -> &'static [MatchedGraph] {
    static C: OnceLock<Vec<MatchedGraph>> = OnceLock::new();
    C.get_or_init(common::corpus)
}

fn multigraphs() -> &'static [Vec<Vec<(usize, usize)>>] {
    static M: OnceLock<Vec<Vec<Vec<(usize, usize)>>>> = OnceLock::new();
    M.get_or_init(|| [2, 4, 6].iter().map(|&nv| cubic_multigraphs(nv)).collect())
}

/// Plane matched graph from an abstract cubic multigraph, a choice of local
/// orientations and a perfect matching, if the choice is genus 0.
fn plane_graph(size: usize, pick: usize, orient: u32, matching: usize) -> Option<MatchedGraph> {
    let gs = &multigraphs()[size];
    let edges = &gs[pick % gs.len()];
    let nv = 2 * (size + 1);
    let mut text = String::from("graph random\n");
    for v in 0..nv {
        text += &format!("vertex v{v}\n");
    }
    for (k, (a, b)) in edges.iter().enumerate() {
        text += &format!("edge e{k} v{a} v{b}\n");
    }
    for v in 0..nv {
        let mut hs: Vec<String> = Vec::new();
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a == v {
                hs.push(format!("e{k}.0"));
            }
            if b == v {
                hs.push(format!("e{k}.1"));
            }
        }
        if orient >> v & 1 == 1 {
            hs.swap(1, 2);
        }
        text += &format!("rotation v{v} {}\n", hs.join(" "));
    }
    let ms: Vec<Vec<usize>> = (0u32..1 << edges.len())
        .filter(|m| m.count_ones() as usize == nv / 2)
        .map(|m| (0..edges.len()).filter(|k| m >> k & 1 == 1).collect::<Vec<_>>())
        .filter(|m| {
            let mut seen = BTreeSet::new();
            m.iter().all(|&k| seen.insert(edges[k].0) && seen.insert(edges[k].1))
        })
        .collect();
    let m = &ms[matching % ms.len()];
    let ids: Vec<String> = m.iter().map(|k| format!("e{k}")).collect();
    text += &format!("matching {}\n", ids.join(" "));
    let g = read_graph(&text).ok()?;
    g.validate().is_empty().then_some(g)
}

fn random_plane() -> impl Strategy<Value = MatchedGraph> {
    (0usize..3, any::<usize>(), any::<u32>(), any::<usize>())
        .prop_filter_map("not planar", |(s, p, o, m)| plane_graph(s, p, o, m))
}

fn corpus_graph() -> impl Strategy<Value = MatchedGraph> {
    (0..corpus().len()).prop_map(|k| corpus()[k].clone())
}

fn hom_table(g: &MatchedGraph) -> String {
    homology(&build_complex(g, Ring::Z2).unwrap()).to_string()
}

/// Same graph text with rotation lines re-rooted and edge lines permuted.
fn rerooted(g: &MatchedGraph, shift: usize, perm_seed: usize) -> MatchedGraph {
    let text = write_graph(g);
    let mut edges = Vec::new();
    let mut out = Vec::new();
    for line in text.lines() {
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.first() {
            Some(&"edge") => edges.push(line.to_string()),
            Some(&"rotation") => {
                let mut t = w[2..].to_vec();
                t.rotate_left(shift % 3);
                out.push(format!("rotation {} {}", w[1], t.join(" ")));
            }
            _ => out.push(line.to_string()),
        }
    }
    let n = edges.len();
    edges.rotate_left(perm_seed % n);
    if perm_seed / n % 2 == 1 {
        edges.reverse();
    }
    let pos = out.iter().position(|l| l.starts_with("rotation")).unwrap();
    out.splice(pos..pos, edges);
    read_graph(&out.join("\n")).unwrap()
}

fn edge_set(g: &MatchedGraph, tokens: &[Token]) -> BTreeSet<String> {
    tokens
        .iter()
        .filter_map(|t| match *t {
            Token::Edge { edge, .. } => Some(g.edge(edge).id.clone()),
            _ => None,
        })
        .collect()
}

/// Butterfly pairings in terms of edge names, so they survive relabeling.
fn butterflies(g: &MatchedGraph) -> Vec<(State, usize, usize, BTreeSet<BTreeSet<String>>)> {
    let hc = Hypercube::new(g);
    let mut out = Vec::new();
    for (v, s) in cube_faces(g.n(), 2) {
        if classify_index2(&hc, v, s[0], s[1]) != Index2Class::Butterfly {
            continue;
        }
        let b = butterfly_match(&hc, v, s[0], s[1]).unwrap();
        let circle = |state: State, c: usize| edge_set(g, &hc.diagram(state).circles[c]);
        let (vi, vj) = (v.with(s[0]), v.with(s[1]));
        let pairs: BTreeSet<BTreeSet<String>> = [(b.p[0], b.p[1]), (b.q[0], b.q[1])]
            .iter()
            .map(|&(x, y)| {
                let mut s = circle(vi, x);
                s.extend(circle(vj, y).into_iter().map(|e| format!("'{e}")));
                s
            })
            .collect();
        out.push((v, s[0], s[1], pairs));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(g in random_plane()) {
        prop_assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn euler_consistency(g in random_plane()) {
        let r = euler_check(&g);
        prop_assert!(r.pass(), "{:?}", r.checks);
        prop_assert_eq!(r.two_factor_count, common::brute_two_factors(&g));
    }

    #[test]
    fn flips(g in corpus_graph(), k in any::<usize>()) {
        let disks = FlipDisk::enumerate(&g);
        prop_assume!(!disks.is_empty());
        let d = &disks[k % disks.len()];
        let h = g.apply_flip(d).unwrap();
        prop_assert_eq!(h.apply_flip(d).unwrap(), g.clone());
        prop_assert!(h.validate().is_empty());
        prop_assert_eq!(two_factor_polynomial(&h), two_factor_polynomial(&g));
        prop_assert_eq!(in_family_g(&h).member, in_family_g(&g).member);
    }

    #[test]
    fn flips_on_random_graphs(g in random_plane(), k in any::<usize>()) {
        let disks = FlipDisk::enumerate(&g);
        prop_assume!(!disks.is_empty());
        let h = g.apply_flip(&disks[k % disks.len()]).unwrap();
        prop_assert_eq!(two_factor_polynomial(&h), two_factor_polynomial(&g));
        prop_assert_eq!(hom_table(&h), hom_table(&g));
        prop_assert_eq!(in_family_g(&h).member, in_family_g(&g).member);
    }

    #[test]
    fn butterfly_ignores_traversal_start(g in corpus_graph(), shift in 1usize..3, perm in any::<usize>()) {
        let h = rerooted(&g, shift, perm);
        prop_assert_eq!(butterflies(&h), butterflies(&g));
        let (a, b) = (Hypercube::new(&g), Hypercube::new(&h));
        let six = |hc: &Hypercube| {
            verify_six_cycles(hc, PairingRule::Canonical).rows.into_iter().map(|r| (r.face, r.components)).collect::<Vec<_>>()
        };
        prop_assert_eq!(six(&b), six(&a));
    }

    #[test]
    fn dd_zero(g in random_plane()) {
        prop_assert!(build_complex(&g, Ring::Z2).unwrap().dd_is_zero());
        if in_family_g(&g).member {
            prop_assert!(build_complex(&g, Ring::Z).unwrap().dd_is_zero());
        }
    }
}
