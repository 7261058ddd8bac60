use crate::invariants::linalg::{rank_gf2, smith_invariants, Matrix};
use crate::invariants::{build_complex_from, cube_sign, Ring};
use crate::resolution::{ArcKind, CubeEdge, Hypercube, Labels};
use crate::Result;

/// Index-1 order relation, read literally: labels agree on the circles the
/// surgery leaves alone, and the surgered circles obey the merge/split rule.
fn related(e: &CubeEdge, y: Labels, x: Labels) -> bool {
    for (c, &t) in e.carry.iter().enumerate() {
        if t != usize::MAX && (y >> c & 1) != (x >> t & 1) {
            return false;
        }
    }
    let minus = |l: Labels, c: usize| l >> c & 1 == 1;
    match e.kind {
        ArcKind::Delta => {
            let (zi, zj, zk) = (minus(y, e.lower[0]), minus(x, e.upper[0]), minus(x, e.upper[1]));
            (zi && zj && zk) || (!zi && zj != zk)
        }
        ArcKind::M => {
            let (zi, zj, zk) = (minus(y, e.lower[0]), minus(y, e.lower[1]), minus(x, e.upper[0]));
            (!zi && !zj && !zk) || (zi != zj && zk)
        }
        ArcKind::Eta => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationReport {
    pub ring: Ring,
    /// Cell dimension minus homological grading.
    pub shift: i64,
    pub lines: Vec<String>,
    pub mismatches: Vec<String>,
}

impl RealizationReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// One cell per generator, attached along 0-dimensional moduli counts, and
/// the comparison of the resulting cochain complex with the chain complex.
pub fn realization_report(hc: &Hypercube, ring: Ring) -> Result<RealizationReport> {
    const D0: i64 = 1;
    let shift = D0;
    let complex = build_complex_from(hc, ring)?;
    let mut lines = vec![format!("# realization ring={ring} N={shift} d0={D0}")];
    let mut mismatches = Vec::new();
    let mut cohomology = Vec::new();
    for b in complex.blocks.iter().rev() {
        lines.push(format!("j={}", b.j));
        let mut rebuilt = Vec::new();
        for i in 0..b.diffs.len() {
            let mut m = Matrix::zeros(b.bases[i + 1].len(), b.bases[i].len());
            for (c, &gy) in b.bases[i].iter().enumerate() {
                let y = complex.generators[gy];
                for (r, &gx) in b.bases[i + 1].iter().enumerate() {
                    let x = complex.generators[gx];
                    let d = x.state.mask() ^ y.state.mask();
                    if d.count_ones() != 1 || x.state.mask() & d == 0 {
                        continue;
                    }
                    let k = d.trailing_zeros() as usize;
                    if related(hc.edge(y.state, k), y.labels, x.labels) {
                        m.set(r, c, if ring == Ring::Z { cube_sign(y.state, k) } else { 1 });
                    }
                }
            }
            let equal = match ring {
                Ring::Z => m == b.diffs[i],
                Ring::Z2 => m.reduce_mod2() == b.diffs[i].reduce_mod2(),
            };
            if !equal {
                mismatches.push(format!("j={} i={}", b.j, i));
            }
            rebuilt.push(m);
        }
        for (i, basis) in b.bases.iter().enumerate() {
            for (r, &gx) in basis.iter().enumerate() {
                let x = complex.generators[gx];
                let attach: Vec<String> = if i == 0 {
                    vec![]
                } else {
                    let m = &rebuilt[i - 1];
                    (0..m.cols())
                        .filter(|&c| m.get(r, c) != 0)
                        .map(|c| format!("{}:{}", complex.generators[b.bases[i - 1][c]].id(), m.get(r, c)))
                        .collect()
                };
                lines.push(format!("cell gen={} dim={} attach={}", x.id(), x.gr_h() + shift, attach.join(",")));
            }
        }
        let ranks: Vec<usize> = rebuilt
            .iter()
            .map(|m| match ring {
                Ring::Z2 => rank_gf2(m),
                Ring::Z => smith_invariants(m).len(),
            })
            .collect();
        for (i, basis) in b.bases.iter().enumerate() {
            let r = basis.len()
                - if i < ranks.len() { ranks[i] } else { 0 }
                - if i > 0 { ranks[i - 1] } else { 0 };
            if r > 0 {
                cohomology.push(format!("cohomology i={} j={} rank={}", i, b.j, r));
            }
        }
    }
    lines.extend(cohomology);
    lines.push(format!("cochain equality pass={}", mismatches.is_empty() as u8));
    Ok(RealizationReport { ring, shift, lines, mismatches })
}
