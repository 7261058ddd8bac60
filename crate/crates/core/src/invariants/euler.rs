use super::complex::{build_complex_from, Ring};
use super::homology::homology;
use super::laurent::LaurentPoly;
use crate::resolution::{circle_counts, Hypercube, State};
use crate::MatchedGraph;

/// Σ_v (-1)^|v| q^|v| (q + q⁻¹)^c(v).
pub fn two_factor_polynomial(g: &MatchedGraph) -> LaurentPoly {
    let n = g.n();
    let counts = circle_counts(g);
    polynomial_from_counts(n, &counts)
}

fn polynomial_from_counts(n: usize, counts: &[usize]) -> LaurentPoly {
    let mut qq = LaurentPoly::monomial(1, 1);
    qq.add_term(-1, 1);
    let max_c = counts.iter().copied().max().unwrap_or(0);
    let powers: Vec<LaurentPoly> = (0..=max_c as u32).map(|k| qq.pow(k)).collect();
    let mut total = LaurentPoly::zero();
    for b in 0..1u64 << n {
        let w = State::from_mask(b, n).weight() as i64;
        let sign = if w % 2 == 0 { 1 } else { -1 };
        let term = &LaurentPoly::monomial(sign, w) * &powers[counts[b as usize]];
        total = &total + &term;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub polynomial: LaurentPoly,
    pub chain_euler: LaurentPoly,
    pub homology_euler_z2: LaurentPoly,
    /// `None` outside G.
    pub homology_euler_z: Option<LaurentPoly>,
    pub two_factor_count: u64,
    /// `(name, pass)` per check.
    pub checks: Vec<(String, bool)>,
}

impl EulerReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

pub fn euler_check(g: &MatchedGraph) -> EulerReport {
    let hc = Hypercube::new(g);
    let counts: Vec<usize> = (0..1u64 << g.n()).map(|b| hc.circle_count(State::from_mask(b, g.n()))).collect();
    let polynomial = polynomial_from_counts(g.n(), &counts);
    let c2 = build_complex_from(&hc, Ring::Z2).expect("Z2 complex always exists");
    let mut chain_euler = LaurentPoly::zero();
    for b in &c2.blocks {
        chain_euler.add_term(b.j, b.euler());
    }
    let h2 = homology(&c2);
    let mut homology_euler_z2 = LaurentPoly::zero();
    for b in &c2.blocks {
        homology_euler_z2.add_term(b.j, h2.euler(b.j));
    }
    let homology_euler_z = build_complex_from(&hc, Ring::Z).ok().map(|cz| {
        let hz = homology(&cz);
        let mut p = LaurentPoly::zero();
        for b in &cz.blocks {
            p.add_term(b.j, hz.euler(b.j));
        }
        p
    });
    let two_factor_count = g.two_factor_count();
    let mut checks = vec![
        ("chain_vs_poly".to_string(), chain_euler == polynomial),
        ("hom_z2_vs_chain".to_string(), homology_euler_z2 == chain_euler),
    ];
    if let Some(p) = &homology_euler_z {
        checks.push(("hom_z_vs_chain".to_string(), *p == chain_euler));
    }
    checks.push((
        "poly_at_one_vs_count".to_string(),
        polynomial.eval_at_one() == two_factor_count as i64,
    ));
    EulerReport { polynomial, chain_euler, homology_euler_z2, homology_euler_z, two_factor_count, checks }
}
