use std::collections::{HashMap, HashSet};

use super::{cube_faces, decorated_faces, ChainPoset, PosetElement};
use crate::resolution::Hypercube;

fn complement(hc: &Hypercube, e: PosetElement) -> PosetElement {
    let c = hc.circle_count(e.state);
    let full = if c == 0 { 0 } else { u64::MAX >> (64 - c) };
    PosetElement { state: e.state, labels: !e.labels & full }
}

/// Reads the face top-down with complemented labels and checks that
/// `(T, z) -> (S \ T, z̄)` reverses the order.
pub fn dual_poset_check(hc: &Hypercube, p: &ChainPoset) -> bool {
    let bottom = complement(hc, p.elements[p.elements.len() - 1]);
    let target = complement(hc, p.elements[0]);
    let sites = &p.face.sites;

    let mut elements = vec![bottom];
    let mut index: HashMap<PosetElement, usize> = HashMap::from([(bottom, 0)]);
    let mut covers = Vec::new();
    let mut level = vec![0];
    for _ in 0..sites.len() {
        let mut next = Vec::new();
        for &a in &level {
            let e = elements[a];
            for &i in sites {
                if !e.state.bit(i) {
                    continue;
                }
                let lower = e.state.without(i);
                for l in hc.edge(lower, i).down(e.labels, hc.circle_count(lower)) {
                    let f = PosetElement { state: lower, labels: l };
                    let b = *index.entry(f).or_insert_with(|| {
                        elements.push(f);
                        next.push(elements.len() - 1);
                        elements.len() - 1
                    });
                    covers.push((a, b));
                }
            }
        }
        level = next;
    }
    let Some(&t) = index.get(&target) else { return false };
    let n = elements.len();
    let mut up = vec![false; n];
    let mut down = vec![false; n];
    up[0] = true;
    down[t] = true;
    for &(l, u) in &covers {
        up[u] |= up[l];
    }
    for &(l, u) in covers.iter().rev() {
        down[l] |= down[u];
    }
    let dual_elems: HashSet<PosetElement> = (0..n).filter(|&k| up[k] && down[k]).map(|k| elements[k]).collect();
    let dual_covers: HashSet<(PosetElement, PosetElement)> = covers
        .iter()
        .filter(|&&(l, u)| up[l] && down[l] && up[u] && down[u])
        .map(|&(l, u)| (elements[l], elements[u]))
        .collect();

    let primal_elems: HashSet<PosetElement> = p.elements.iter().map(|&e| complement(hc, e)).collect();
    let primal_covers: HashSet<(PosetElement, PosetElement)> = p
        .covers
        .iter()
        .map(|&(l, u, _)| (complement(hc, p.elements[u]), complement(hc, p.elements[l])))
        .collect();
    primal_elems == dual_elems && primal_covers == dual_covers
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl DualReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `dual_poset_check` on every decorated face of index 1 to `max_index`.
pub fn dual_check_all(hc: &Hypercube, max_index: usize) -> DualReport {
    let mut rep = DualReport::default();
    for k in 1..=max_index.min(hc.n()) {
        for (v, s) in cube_faces(hc.n(), k) {
            for p in decorated_faces(hc, v, &s) {
                rep.checked += 1;
                if !dual_poset_check(hc, &p) {
                    rep.failures.push(p.face.describe(hc));
                }
            }
        }
    }
    rep
}
