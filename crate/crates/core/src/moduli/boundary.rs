use std::collections::HashMap;
use std::fmt;

use super::{classify_index2, cube_faces, decorated_faces, face_has_eta, ChainPoset, Index2Class};
use crate::moduli::butterfly::butterfly_match;
use crate::resolution::Hypercube;

/// How butterfly intervals are paired. Only `Canonical` is the real rule;
/// the others exist as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingRule {
    Canonical,
    /// `P` after one surgery paired with `Q` after the other, everywhere.
    Opposite,
    /// `Opposite` on butterflies whose base state has odd weight.
    Mixed,
}

/// Pairs the middle elements of the index-2 interval `[lo, hi]` of `poset`.
pub fn pair_interval(
    hc: &Hypercube,
    poset: &ChainPoset,
    lo: usize,
    hi: usize,
    rule: PairingRule,
) -> Result<Vec<(usize, usize)>, String> {
    let (a, b) = (poset.elements[lo], poset.elements[hi]);
    let diff = b.state.mask() ^ a.state.mask();
    if diff.count_ones() != 2 || b.state.mask() & diff != diff {
        return Err("interval is not index 2".into());
    }
    let i = diff.trailing_zeros() as usize;
    let j = 63 - diff.leading_zeros() as usize;
    let mid: Vec<usize> = poset.interval(lo, hi).into_iter().filter(|&k| k != lo && k != hi).collect();
    let via_i: Vec<usize> = mid.iter().copied().filter(|&k| poset.elements[k].state == a.state.with(i)).collect();
    let via_j: Vec<usize> = mid.iter().copied().filter(|&k| poset.elements[k].state == a.state.with(j)).collect();
    let at = || format!("v={} ({},{})", a.state, i, j);
    match (via_i.len(), via_j.len()) {
        (1, 1) => Ok(vec![(via_i[0], via_j[0])]),
        (2, 2) => {
            if classify_index2(hc, a.state, i, j) != Index2Class::Butterfly {
                return Err(format!("k=4 interval at {} is not a butterfly", at()));
            }
            let m = butterfly_match(hc, a.state, i, j).map_err(|e| e.to_string())?;
            let flip = match rule {
                PairingRule::Canonical => false,
                PairingRule::Opposite => true,
                PairingRule::Mixed => a.state.weight() % 2 == 1,
            };
            let cj = if flip { m.q[1] } else { m.p[1] };
            let key_i = |k: usize| poset.elements[k].labels >> m.p[0] & 1;
            let key_j = |k: usize| poset.elements[k].labels >> cj & 1;
            if key_i(via_i[0]) == key_i(via_i[1]) || key_j(via_j[0]) == key_j(via_j[1]) {
                return Err(format!("butterfly labels at {} do not separate the chains", at()));
            }
            Ok(via_i
                .iter()
                .map(|&x| (x, *via_j.iter().find(|&&y| key_j(y) == key_i(x)).unwrap()))
                .collect())
        }
        (p, q) => Err(format!("interval at {} has {p}+{q} middle elements", at())),
    }
}

/// Chains of an index-3 poset joined along the intervals of its six index-2
/// sub-faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryGraph {
    pub vertices: usize,
    /// `(chain, chain, top)`; `top` marks edges from intervals ending at the top.
    pub edges: Vec<(usize, usize, bool)>,
    pub two_regular: bool,
    /// Component sizes, ascending.
    pub components: Vec<usize>,
}

impl BoundaryGraph {
    pub fn all_six_cycles(&self) -> bool {
        self.two_regular && self.components.iter().all(|&c| c == 6)
    }
}

pub fn boundary_graph(hc: &Hypercube, poset: &ChainPoset, rule: PairingRule) -> Result<BoundaryGraph, String> {
    if poset.face.index() != 3 {
        return Err("boundary graphs need an index-3 face".into());
    }
    let chains = &poset.chains;
    let index: HashMap<&[usize], usize> = chains.iter().enumerate().map(|(k, c)| (c.as_slice(), k)).collect();
    let mut cache: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut partner = |lo: usize, hi: usize, m: usize| -> Result<usize, String> {
        if !cache.contains_key(&(lo, hi)) {
            cache.insert((lo, hi), pair_interval(hc, poset, lo, hi, rule)?);
        }
        let pairs = &cache[&(lo, hi)];
        pairs
            .iter()
            .find_map(|&(a, b)| if a == m { Some(b) } else if b == m { Some(a) } else { None })
            .ok_or_else(|| "element missing from its interval pairing".to_string())
    };
    let mut edges = Vec::new();
    for (k, c) in chains.iter().enumerate() {
        let m2 = partner(c[1], c[3], c[2])?;
        let t = index[[c[0], c[1], m2, c[3]].as_slice()];
        if k < t {
            edges.push((k, t, true));
        }
        let m1 = partner(c[0], c[2], c[1])?;
        let b = index[[c[0], m1, c[2], c[3]].as_slice()];
        if k < b {
            edges.push((k, b, false));
        }
    }
    let nv = chains.len();
    let mut adj = vec![Vec::new(); nv];
    for &(a, b, _) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let two_regular = adj.iter().all(|a| a.len() == 2);
    let mut seen = vec![false; nv];
    let mut components = Vec::new();
    for s in 0..nv {
        if seen[s] {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(a) = stack.pop() {
            size += 1;
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        components.push(size);
    }
    components.sort_unstable();
    Ok(BoundaryGraph { vertices: nv, edges, two_regular, components })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixCycleRow {
    pub face: String,
    pub components: Vec<usize>,
    pub error: Option<String>,
    pub pass: bool,
}

impl fmt::Display for SixCycleRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.components.iter().map(|x| x.to_string()).collect();
        write!(f, "face {} components={} pass={}", self.face, c.join(","), self.pass as u8)?;
        if let Some(e) = &self.error {
            write!(f, " error={}", e.replace(' ', "_"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixCycleReport {
    pub rows: Vec<SixCycleRow>,
    /// Index-3 cube faces skipped because they contain an η-edge.
    pub eta_faces: usize,
}

impl SixCycleReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Boundary graphs of every η-free index-3 decorated face.
pub fn verify_six_cycles(hc: &Hypercube, rule: PairingRule) -> SixCycleReport {
    let mut eta_faces = 0;
    let mut work = Vec::new();
    for (v, s) in cube_faces(hc.n(), 3) {
        if face_has_eta(hc, v, &s) {
            eta_faces += 1;
        } else {
            work.push((v, s));
        }
    }
    let rows = crate::par::map(work, |(v, s)| {
        decorated_faces(hc, v, &s)
            .into_iter()
            .map(|p| {
                let face = p.face.describe(hc);
                match boundary_graph(hc, &p, rule) {
                    Ok(g) => SixCycleRow { face, pass: g.all_six_cycles(), components: g.components, error: None },
                    Err(e) => SixCycleRow { face, components: vec![], error: Some(e), pass: false },
                }
            })
            .collect::<Vec<_>>()
    });
    SixCycleReport { rows: rows.into_iter().flatten().collect(), eta_faces }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverReport {
    pub faces_checked: usize,
    pub failures: Vec<String>,
    /// Decorated faces with a nonempty poset on a cube face containing an η-edge.
    pub eta_covers: Vec<String>,
}

impl CoverReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Chain-level covering data: chains project onto the cube's chains with
/// constant multiplicity, and interval pairings swap adjacent surgeries.
pub fn cover_check(hc: &Hypercube) -> CoverReport {
    let mut rep = CoverReport::default();
    for k in 1..=3.min(hc.n()) {
        for (v, s) in cube_faces(hc.n(), k) {
            let eta = face_has_eta(hc, v, &s);
            for p in decorated_faces(hc, v, &s) {
                let name = p.face.describe(hc);
                if eta {
                    rep.eta_covers.push(name);
                    continue;
                }
                rep.faces_checked += 1;
                if let Err(e) = check_cover(hc, &p) {
                    rep.failures.push(format!("{name}: {e}"));
                }
            }
        }
    }
    rep
}

fn check_cover(hc: &Hypercube, p: &ChainPoset) -> Result<(), String> {
    let mut per_order: HashMap<Vec<usize>, usize> = HashMap::new();
    for c in &p.chains {
        *per_order.entry(p.chain_sites(c)).or_insert(0) += 1;
    }
    let perms: usize = (1..=p.face.index()).product();
    if per_order.len() != perms {
        return Err(format!("chains reach {} of {} surgery orders", per_order.len(), perms));
    }
    let mult: Vec<usize> = per_order.values().copied().collect();
    if mult.iter().any(|&m| m != mult[0]) {
        return Err(format!("uneven multiplicities {mult:?}"));
    }
    match p.face.index() {
        2 => {
            let pairs = pair_interval(hc, p, 0, p.elements.len() - 1, PairingRule::Canonical)?;
            if pairs.len() * 2 != p.middle_count() {
                return Err("pairing is not perfect".into());
            }
        }
        3 => {
            let g = boundary_graph(hc, p, PairingRule::Canonical)?;
            for &(a, b, top) in &g.edges {
                let (sa, sb) = (p.chain_sites(&p.chains[a]), p.chain_sites(&p.chains[b]));
                let swapped = if top { [sa[0], sa[2], sa[1]] } else { [sa[1], sa[0], sa[2]] };
                if swapped.as_slice() != sb.as_slice() {
                    return Err(format!("edge {a}-{b} does not swap adjacent surgeries"));
                }
            }
        }
        _ => {}
    }
    Ok(())
}
