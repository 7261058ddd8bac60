use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::complex::{BigradedComplex, Ring};
use super::linalg::{rank_gf2, smith_invariants};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub i: i64,
    pub j: i64,
    /// Dimension over Z2, free rank over Z.
    pub rank: usize,
    /// Torsion orders over Z; always empty over Z2.
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedGroups {
    pub ring: Ring,
    /// Nonzero groups sorted by `j` descending, then `i` ascending.
    pub groups: Vec<HomologyGroup>,
}

impl BigradedGroups {
    pub fn rank(&self, i: i64, j: i64) -> usize {
        self.groups.iter().find(|g| g.i == i && g.j == j).map_or(0, |g| g.rank)
    }

    pub fn torsion(&self, i: i64, j: i64) -> &[BigInt] {
        self.groups.iter().find(|g| g.i == i && g.j == j).map_or(&[], |g| &g.torsion)
    }

    /// Σ (-1)^i rank at quantum grading `j`.
    pub fn euler(&self, j: i64) -> i64 {
        self.groups.iter().filter(|g| g.j == j).map(|g| if g.i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum()
    }
}

impl fmt::Display for BigradedGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            match self.ring {
                Ring::Z2 => writeln!(f, "H[i={}][j={}] dim={}", g.i, g.j, g.rank)?,
                Ring::Z => {
                    let t: Vec<String> = g.torsion.iter().map(|x| x.to_string()).collect();
                    writeln!(f, "H[i={}][j={}] rank={} torsion={}", g.i, g.j, g.rank, t.join(","))?
                }
            }
        }
        Ok(())
    }
}

pub fn homology(c: &BigradedComplex) -> BigradedGroups {
    let ring = c.ring;
    let per_block = par::map(c.blocks.iter().collect(), |b| {
        let n = b.diffs.len();
        let mut ranks = vec![0usize; n];
        let mut tors: Vec<Vec<BigInt>> = vec![Vec::new(); n + 1];
        for (i, d) in b.diffs.iter().enumerate() {
            match ring {
                Ring::Z2 => ranks[i] = rank_gf2(d),
                Ring::Z => {
                    let inv = smith_invariants(d);
                    ranks[i] = inv.len();
                    tors[i + 1] = inv.into_iter().filter(|x| !x.is_one()).collect();
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..=n {
            let dim = b.bases[i].len();
            let out_rank = if i < n { ranks[i] } else { 0 };
            let in_rank = if i > 0 { ranks[i - 1] } else { 0 };
            let rank = dim - out_rank - in_rank;
            let torsion = std::mem::take(&mut tors[i]);
            if rank > 0 || !torsion.is_empty() {
                out.push(HomologyGroup { i: i as i64, j: b.j, rank, torsion });
            }
        }
        out
    });
    let mut groups: Vec<HomologyGroup> = per_block.into_iter().flatten().collect();
    groups.sort_by(|a, b| b.j.cmp(&a.j).then(a.i.cmp(&b.i)));
    BigradedGroups { ring, groups }
}
