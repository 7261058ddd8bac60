//! Oriented link diagrams as PD codes, and the closed webs obtained by
//! flattening their crossings.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::par;
use crate::plane_graph::{Edge, HalfEdge, MatchedGraph};
use crate::resolution::{in_family_g, resolve, ArcKind, FaceReport, Hypercube, State, Token};
use crate::{Error, Result};

/// Crossing slots `a b c d`: `a` is the incoming under-strand, the rest follow
/// counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    name: String,
    crossings: Vec<[usize; 4]>,
    /// Per crossing: does the over-strand leave through `b`.
    over_to_b: Vec<bool>,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn components(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut p: Vec<usize> = (0..n).collect();
    let mut count = n;
    for (a, b) in pairs {
        let (ra, rb) = (find(&mut p, a), find(&mut p, b));
        if ra != rb {
            p[ra] = rb;
            count -= 1;
        }
    }
    count
}

impl LinkDiagram {
    /// Arc labels are renumbered `1..=2n` by first appearance.
    pub fn new(crossings: Vec<[usize; 4]>) -> Result<Self> {
        if crossings.is_empty() {
            return Err(Error::Pd("no crossings".into()));
        }
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for c in &crossings {
            for &l in c {
                if !relabel.contains_key(&l) {
                    relabel.insert(l, order.len());
                    order.push(l);
                }
            }
        }
        let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); order.len()];
        for (k, c) in crossings.iter().enumerate() {
            for (p, l) in c.iter().enumerate() {
                slots[relabel[l]].push((k, p));
            }
        }
        for (i, s) in slots.iter().enumerate() {
            if s.len() != 2 {
                return Err(Error::Pd(format!("arc label {} used {} times", order[i], s.len())));
            }
        }
        let crossings: Vec<[usize; 4]> = crossings.iter().map(|c| c.map(|l| relabel[&l] + 1)).collect();

        // Slot orientation: true = the strand enters the crossing here.
        let slot = |k: usize, p: usize| 4 * k + p;
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); 4 * crossings.len()];
        let mut link = |x: usize, y: usize, differ: bool| {
            adj[x].push((y, differ));
            adj[y].push((x, differ));
        };
        for s in &slots {
            link(slot(s[0].0, s[0].1), slot(s[1].0, s[1].1), true);
        }
        for k in 0..crossings.len() {
            link(slot(k, 0), slot(k, 2), true);
            link(slot(k, 1), slot(k, 3), true);
        }
        let mut enters: Vec<Option<bool>> = vec![None; adj.len()];
        let mut seeds: Vec<(usize, bool)> = (0..crossings.len()).map(|k| (slot(k, 0), true)).collect();
        seeds.extend((0..crossings.len()).map(|k| (slot(k, 3), true)));
        for (s, val) in seeds {
            if enters[s].is_some() {
                continue;
            }
            enters[s] = Some(val);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let vx = enters[x].unwrap();
                for &(y, differ) in &adj[x] {
                    let want = vx ^ differ;
                    match enters[y] {
                        None => {
                            enters[y] = Some(want);
                            queue.push_back(y);
                        }
                        Some(v) if v != want => {
                            return Err(Error::Pd(format!(
                                "orientation inconsistency at crossing {}",
                                y / 4 + 1
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        let over_to_b = (0..crossings.len()).map(|k| enters[slot(k, 3)] == Some(true)).collect();
        Ok(LinkDiagram { name: "link".into(), crossings, over_to_b })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// +1 when the over-strand runs `d -> b`.
    pub fn sign(&self, k: usize) -> i8 {
        if self.over_to_b[k] {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.crossings.len()).map(|k| self.sign(k)).collect()
    }

    pub fn writhe(&self) -> i64 {
        self.signs().iter().map(|&s| s as i64).sum()
    }

    /// Does the strand at slot `p` of crossing `k` enter the crossing.
    fn enters(&self, k: usize, p: usize) -> bool {
        match p {
            0 => true,
            2 => false,
            _ => (p == 3) == self.over_to_b[k],
        }
    }

    /// Slot pairs joined by the oriented smoothing at crossing `k`, incoming first.
    fn oriented_pairs(&self, k: usize) -> [(usize, usize); 2] {
        if self.over_to_b[k] {
            [(0, 1), (3, 2)]
        } else {
            [(0, 3), (1, 2)]
        }
    }

    /// Outgoing slot joined to incoming slot `p` by the oriented smoothing.
    fn smoothing_partner(&self, k: usize, p: usize) -> usize {
        self.oriented_pairs(k).iter().find(|pr| pr.0 == p).map(|pr| pr.1).unwrap()
    }

    /// Loops of the oriented smoothing.
    pub fn seifert_circles(&self) -> usize {
        let pairs = self.crossings.iter().enumerate().flat_map(|(k, c)| {
            self.oriented_pairs(k).map(|(x, y)| (c[x] - 1, c[y] - 1))
        });
        components(2 * self.crossings.len(), pairs)
    }
}

pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let mut crossings = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] != "X" || toks.len() != 5 {
            return Err(Error::Syntax { line: ln + 1, col: 1, msg: "expected `X a b c d`".into() });
        }
        let mut c = [0; 4];
        for (p, t) in toks[1..].iter().enumerate() {
            c[p] = t.parse().map_err(|_| Error::Syntax {
                line: ln + 1,
                col: raw.find(t).map_or(1, |x| x + 1),
                msg: format!("bad arc label `{t}`"),
            })?;
        }
        crossings.push(c);
    }
    LinkDiagram::new(crossings)
}

pub fn write_pd(link: &LinkDiagram) -> String {
    link.crossings.iter().map(|c| format!("X {} {} {} {}\n", c[0], c[1], c[2], c[3])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatteningState {
    /// 0-flattening at positive crossings, 1 at negative ones: every crossing
    /// becomes a thick edge.
    Oriented,
    /// The complement of `Oriented`: every crossing is smoothed.
    DualOriented,
    Bits(State),
}

impl FlatteningState {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "of" | "OF" => Ok(FlatteningState::Oriented),
            "dof" | "DOF" => Ok(FlatteningState::DualOriented),
            _ => State::parse(s).map(FlatteningState::Bits),
        }
    }

    pub fn bits(self, link: &LinkDiagram) -> Result<State> {
        let n = link.crossing_count();
        let of = link.signs().iter().enumerate().fold(State::zero(n), |v, (k, &s)| if s < 0 { v.with(k) } else { v });
        match self {
            FlatteningState::Oriented => Ok(of),
            FlatteningState::DualOriented => Ok(State::from_mask(State::ones(n).mask() ^ of.mask(), n)),
            FlatteningState::Bits(v) if v.n() == n => Ok(v),
            FlatteningState::Bits(v) => Err(Error::StateLength { got: v.n(), want: n }),
        }
    }
}

/// Crossing `k` flattened to a thick edge becomes vertices `c<k>u` (sink) and
/// `c<k>w` (source) joined by the matching edge `m<k>`; elsewhere the strands
/// pass through the oriented smoothing. Each strand between thick edges
/// becomes edge `a<l>`, `l` its first arc label, end 0 at its tail.
pub fn flatten(link: &LinkDiagram, f: FlatteningState) -> Result<MatchedGraph> {
    let bits = f.bits(link)?;
    let n = link.crossing_count();
    let thick: Vec<usize> = (0..n).filter(|&k| bits.bit(k) == (link.sign(k) < 0)).collect();
    if thick.is_empty() {
        return Err(Error::Structural("flattening has no thick edges".into()));
    }
    let mut site = vec![usize::MAX; n];
    let mut vertices = Vec::with_capacity(2 * thick.len());
    for (i, &k) in thick.iter().enumerate() {
        site[k] = i;
        vertices.push(format!("c{}u", k + 1));
        vertices.push(format!("c{}w", k + 1));
    }
    // Sink side then source side, each in rotation order after the matching edge.
    let side = |k: usize| if link.over_to_b[k] { [[3, 0], [1, 2]] } else { [[0, 1], [2, 3]] };
    let head = |l: usize| {
        link.crossings
            .iter()
            .enumerate()
            .flat_map(|(k, c)| (0..4).map(move |p| (k, p, c[p])))
            .find(|&(k, p, x)| x == l && link.enters(k, p))
            .map(|(k, p, _)| (k, p))
            .unwrap()
    };
    let mut seen = vec![false; 2 * n];
    let mut paths = Vec::new();
    for &k in &thick {
        for &p in &side(k)[1] {
            let first = link.crossings[k][p];
            let mut l = first;
            let end = loop {
                seen[l - 1] = true;
                let (k2, p2) = head(l);
                if site[k2] != usize::MAX {
                    break (k2, p2);
                }
                l = link.crossings[k2][link.smoothing_partner(k2, p2)];
            };
            paths.push((first, (k, p), end));
        }
    }
    let mut free = 0;
    for start in 1..=2 * n {
        if seen[start - 1] {
            continue;
        }
        free += 1;
        let mut l = start;
        while !seen[l - 1] {
            seen[l - 1] = true;
            let (k2, p2) = head(l);
            l = link.crossings[k2][link.smoothing_partner(k2, p2)];
        }
    }
    if free > 0 {
        return Err(Error::Structural(format!("flattening leaves {free} closed loop(s) without vertices")));
    }
    paths.sort();
    let m = thick.len();
    let vertex_of = |k: usize, p: usize| 2 * site[k] + side(k)[1].contains(&p) as usize;
    let mut edges: Vec<Edge> = thick.iter().enumerate().map(|(i, &k)| Edge { id: format!("m{}", k + 1), ends: [2 * i, 2 * i + 1] }).collect();
    let mut tokens: Vec<[Option<HalfEdge>; 4]> = vec![[None; 4]; n];
    for (e, &(first, (k0, p0), (k1, p1))) in paths.iter().enumerate() {
        edges.push(Edge { id: format!("a{first}"), ends: [vertex_of(k0, p0), vertex_of(k1, p1)] });
        tokens[k0][p0] = Some(HalfEdge::new(m + e, 0));
        tokens[k1][p1] = Some(HalfEdge::new(m + e, 1));
    }
    let mut rotations = Vec::with_capacity(2 * m);
    for (i, &k) in thick.iter().enumerate() {
        for (half, s) in side(k).iter().enumerate() {
            let mut r = vec![HalfEdge::new(i, half)];
            r.extend(s.iter().map(|&p| tokens[k][p].unwrap()));
            rotations.push(r);
        }
    }
    let name = format!("{}-{}", link.name, bits);
    let g = MatchedGraph::from_parts(name, vertices, edges, rotations, (0..m).collect())?;
    if g.is_connected() && g.euler_characteristic() != 2 {
        return Err(Error::NonPlanarFlattening);
    }
    let problems = g.validate();
    if !problems.is_empty() {
        return Err(Error::Invalid(problems));
    }
    Ok(g)
}

/// Circle orientations making every arc coherent, or an odd cycle of sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientabilityCertificate {
    Orientation(Vec<bool>),
    OddCycle(Vec<usize>),
}

impl OrientabilityCertificate {
    pub fn exists(&self) -> bool {
        matches!(self, OrientabilityCertificate::Orientation(_))
    }
}

/// Reversing circle `c` when `o[c]`, both strands at every 0-resolved site
/// must then cross the matching edge the same way.
pub fn orientability(g: &MatchedGraph, v: State) -> Result<OrientabilityCertificate> {
    let d = resolve(g, v)?;
    let c = d.circle_count();
    let forward = |(circle, pos): (usize, usize)| match d.circles[circle][pos] {
        Token::Site { forward, .. } => forward,
        Token::Edge { .. } => unreachable!(),
    };
    let mut adj: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); c];
    for i in v.zeros() {
        let [s0, s1] = d.strands(i);
        let differ = forward(s0) != forward(s1);
        if s0.0 == s1.0 {
            if differ {
                return Ok(OrientabilityCertificate::OddCycle(vec![i]));
            }
            continue;
        }
        adj[s0.0].push((s1.0, differ, i));
        adj[s1.0].push((s0.0, differ, i));
    }
    let mut o: Vec<Option<bool>> = vec![None; c];
    let mut via: Vec<Option<(usize, usize)>> = vec![None; c];
    for root in 0..c {
        if o[root].is_some() {
            continue;
        }
        o[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, differ, site) in &adj[x] {
                let want = o[x].unwrap() ^ differ;
                match o[y] {
                    None => {
                        o[y] = Some(want);
                        via[y] = Some((x, site));
                        queue.push_back(y);
                    }
                    Some(b) if b != want => {
                        let path = |mut z: usize| {
                            let mut p = Vec::new();
                            while let Some((up, s)) = via[z] {
                                p.push(s);
                                z = up;
                            }
                            p
                        };
                        let mut cycle = path(x);
                        cycle.push(site);
                        cycle.extend(path(y).into_iter().rev());
                        return Ok(OrientabilityCertificate::OddCycle(cycle));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(OrientabilityCertificate::Orientation(o.into_iter().map(Option::unwrap).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroStateAudit {
    pub circles: usize,
    /// Sites whose 0̄-state arc is not an m-arc.
    pub non_m: Vec<(usize, ArcKind)>,
    pub certificate: OrientabilityCertificate,
    /// Loop count of the oriented smoothing, when a source link is known.
    pub seifert: Option<usize>,
}

impl ZeroStateAudit {
    pub fn all_m(&self) -> bool {
        self.non_m.is_empty()
    }

    pub fn seifert_match(&self) -> Option<bool> {
        self.seifert.map(|s| s == self.circles)
    }

    pub fn pass(&self) -> bool {
        self.all_m() && self.certificate.exists() && self.seifert_match() != Some(false)
    }
}

impl fmt::Display for ZeroStateAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circles={} all_m={} orientable={}", self.circles, self.all_m() as u8, self.certificate.exists() as u8)?;
        if let Some(s) = self.seifert {
            write!(f, " seifert={} match={}", s, (s == self.circles) as u8)?;
        }
        for (i, k) in &self.non_m {
            write!(f, " site{i}={k}")?;
        }
        if let OrientabilityCertificate::OddCycle(c) = &self.certificate {
            let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, " odd_cycle={}", c.join(","))?;
        }
        Ok(())
    }
}

pub fn zero_state_audit(g: &MatchedGraph, link: Option<&LinkDiagram>) -> Result<ZeroStateAudit> {
    let zero = State::zero(g.n());
    let hc = Hypercube::new(g);
    let non_m = (0..g.n()).map(|i| (i, hc.kind(zero, i))).filter(|&(_, k)| k != ArcKind::M).collect();
    Ok(ZeroStateAudit {
        circles: hc.circle_count(zero),
        non_m,
        certificate: orientability(g, zero)?,
        seifert: link.map(LinkDiagram::seifert_circles),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatteningRow {
    pub state: State,
    pub oriented: bool,
    pub outcome: std::result::Result<(bool, Option<FaceReport>, ZeroStateAudit), String>,
}

impl fmt::Display for FlatteningRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "flattening {}{}", self.state, if self.oriented { " of" } else { "" })?;
        match &self.outcome {
            Ok((member, witness, audit)) => {
                write!(f, " member={} {}", *member as u8, audit)?;
                if let Some(w) = witness {
                    write!(f, " witness=[{w}]")?;
                }
                Ok(())
            }
            Err(e) => write!(f, " error={e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebFamilyReport {
    pub crossings: usize,
    pub sampled: bool,
    pub rows: Vec<FlatteningRow>,
}

impl WebFamilyReport {
    /// Every flattening that yields a graph lies in the family.
    pub fn all_members(&self) -> bool {
        self.rows.iter().all(|r| r.outcome.as_ref().map_or(true, |o| o.0))
    }

    pub fn oriented_audit_pass(&self) -> bool {
        self.rows.iter().filter(|r| r.oriented).all(|r| r.outcome.as_ref().is_ok_and(|o| o.2.pass()))
    }

    pub fn pass(&self) -> bool {
        self.all_members() && self.oriented_audit_pass()
    }
}

pub const WEB_CAP: usize = 12;

/// Runs over all `2^n` flattenings, or `samples` seeded ones when `n` exceeds
/// `cap`. The oriented flattening is always included.
pub fn web_family_check(link: &LinkDiagram, cap: usize, samples: usize, seed: u64) -> WebFamilyReport {
    let n = link.crossing_count();
    let of = FlatteningState::Oriented.bits(link).expect("oriented flattening");
    let sampled = n > cap;
    let mut states: Vec<State> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s: Vec<State> = (0..samples).map(|_| State::from_mask(rng.gen::<u64>(), n)).collect();
        s.push(of);
        s
    } else {
        State::all(n)
    };
    states.sort();
    states.dedup();
    let rows = par::map(states, |v| {
        let outcome = flatten(link, FlatteningState::Bits(v))
            .and_then(|g| {
                let m = in_family_g(&g);
                Ok((m.member, m.witness, zero_state_audit(&g, Some(link))?))
            })
            .map_err(|e| e.to_string());
        FlatteningRow { state: v, oriented: v == of, outcome }
    });
    WebFamilyReport { crossings: n, sampled, rows }
}
