use std::collections::BTreeMap;
use std::fmt;

use super::linalg::Matrix;
use crate::resolution::{Hypercube, Labels, State};
use crate::{Error, MatchedGraph, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Z2,
    Z,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z2 => "z2",
            Ring::Z => "z",
        })
    }
}

/// A labeled resolution: bit `k` of `labels` set means circle `k` carries x₋.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub state: State,
    pub labels: Labels,
    pub circles: usize,
}

impl Generator {
    pub fn gr_h(&self) -> i64 {
        self.state.weight() as i64
    }

    pub fn gr_q(&self) -> i64 {
        let minus = self.labels.count_ones() as i64;
        self.gr_h() + self.circles as i64 - 2 * minus
    }

    pub fn label_string(&self) -> String {
        label_string(self.labels, self.circles)
    }

    /// `<state bits>/<labels>`, e.g. `0/+-`.
    pub fn id(&self) -> String {
        format!("{}/{}", self.state, self.label_string())
    }
}

pub fn label_string(labels: Labels, circles: usize) -> String {
    (0..circles).map(|k| if labels >> k & 1 == 1 { '-' } else { '+' }).collect()
}

// Basis position of a labeling: the label string read as a binary number
// with x₊ = 0 and circle 0 most significant.
fn label_rank(labels: Labels, circles: usize) -> usize {
    (0..circles).fold(0, |acc, k| acc << 1 | (labels >> k & 1) as usize)
}

fn labels_of_rank(r: usize, circles: usize) -> Labels {
    (0..circles).fold(0, |acc, k| acc | (((r >> (circles - 1 - k)) & 1) as Labels) << k)
}

/// The complex in one quantum grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBlock {
    pub j: i64,
    /// `bases[i]`: generator indices of `C^{i,j}`, in basis order.
    pub bases: Vec<Vec<usize>>,
    /// `diffs[i]`: `C^{i,j} -> C^{i+1,j}`, rows indexed by `bases[i+1]`.
    pub diffs: Vec<Matrix>,
}

impl QBlock {
    pub fn euler(&self) -> i64 {
        self.bases.iter().enumerate().map(|(i, b)| if i % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) }).sum()
    }

    pub fn dd_is_zero(&self, ring: Ring) -> bool {
        self.diffs.windows(2).all(|w| {
            let p = w[1].mul(&w[0]);
            match ring {
                Ring::Z => p.is_zero(),
                Ring::Z2 => p.reduce_mod2().is_zero(),
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct BigradedComplex {
    pub ring: Ring,
    pub n: usize,
    pub generators: Vec<Generator>,
    /// Ascending `j`.
    pub blocks: Vec<QBlock>,
    offsets: Vec<usize>,
}

impl BigradedComplex {
    pub fn index_of(&self, state: State, labels: Labels) -> usize {
        let g0 = self.generators[self.offsets[state.mask() as usize]];
        self.offsets[state.mask() as usize] + label_rank(labels, g0.circles)
    }

    pub fn block(&self, j: i64) -> Option<&QBlock> {
        self.blocks.iter().find(|b| b.j == j)
    }

    /// Nonzero entries of `∂(gen)` as `(target, coefficient)`.
    pub fn boundary(&self, gen: usize) -> Vec<(usize, i64)> {
        let g = self.generators[gen];
        let Some(b) = self.block(g.gr_q()) else { return vec![] };
        let i = g.gr_h() as usize;
        if i >= b.diffs.len() {
            return vec![];
        }
        let col = b.bases[i].iter().position(|&x| x == gen).unwrap();
        (0..b.diffs[i].rows())
            .filter_map(|r| match b.diffs[i].get(r, col) {
                0 => None,
                x => Some((b.bases[i + 1][r], x)),
            })
            .collect()
    }

    pub fn dd_is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.dd_is_zero(self.ring))
    }
}

/// Standard cube sign for the edge `v -> v + e_i`.
pub fn cube_sign(v: State, i: usize) -> i64 {
    if (v.mask() & ((1u64 << i) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn build_complex(g: &MatchedGraph, ring: Ring) -> Result<BigradedComplex> {
    build_complex_from(&Hypercube::new(g), ring)
}

pub fn build_complex_from(hc: &Hypercube, ring: Ring) -> Result<BigradedComplex> {
    if ring == Ring::Z {
        if let Some(bad) = hc.first_bad_face() {
            return Err(Error::ZLiftUnavailable(bad.to_string()));
        }
    }
    let n = hc.n();
    let mut generators = Vec::new();
    let mut offsets = vec![0; 1 << n];
    for v in State::all(n) {
        let c = hc.circle_count(v);
        offsets[v.mask() as usize] = generators.len();
        for r in 0..1usize << c {
            generators.push(Generator { state: v, labels: labels_of_rank(r, c), circles: c });
        }
    }
    let total: usize = State::all(n).iter().map(|&v| 1usize << hc.circle_count(v)).sum();
    assert_eq!(total, generators.len());

    let mut by_j: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
    let mut pos = vec![0; generators.len()];
    for (k, g) in generators.iter().enumerate() {
        let bases = by_j.entry(g.gr_q()).or_insert_with(|| vec![Vec::new(); n + 1]);
        let i = g.gr_h() as usize;
        pos[k] = bases[i].len();
        bases[i].push(k);
    }
    let mut blocks: Vec<QBlock> = by_j
        .into_iter()
        .map(|(j, bases)| {
            let diffs = (0..n).map(|i| Matrix::zeros(bases[i + 1].len(), bases[i].len())).collect();
            QBlock { j, bases, diffs }
        })
        .collect();
    let block_of: BTreeMap<i64, usize> = blocks.iter().enumerate().map(|(k, b)| (b.j, k)).collect();

    for (k, g) in generators.iter().enumerate() {
        for i in g.state.zeros() {
            let e = hc.edge(g.state, i);
            let w = g.state.with(i);
            for x in e.up(g.labels) {
                let t = offsets[w.mask() as usize] + label_rank(x, hc.circle_count(w));
                let tg = generators[t];
                assert_eq!(tg.gr_q(), g.gr_q(), "differential changed the quantum grading");
                assert_eq!(tg.gr_h(), g.gr_h() + 1);
                let coef = match ring {
                    Ring::Z2 => 1,
                    Ring::Z => cube_sign(g.state, i),
                };
                let b = &mut blocks[block_of[&g.gr_q()]];
                b.diffs[g.gr_h() as usize].add_to(pos[t], pos[k], coef);
            }
        }
    }
    Ok(BigradedComplex { ring, n, generators, blocks, offsets })
}
