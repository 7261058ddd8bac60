mod common;

use common::*;
use twofactor::resolution::{Hypercube, State};
use twofactor::{build_complex, homology, two_factor_polynomial, Ring};

#[test]
fn polynomial_matches_state_sum() {
    for g in corpus() {
        let p = two_factor_polynomial(&g);
        let want = state_sum(&g);
        let got: std::collections::BTreeMap<i64, i64> = p.terms().collect();
        assert_eq!(got, want, "{}", g.name());
    }
}

#[test]
fn circle_counts_match_union_find() {
    for g in corpus() {
        let hc = Hypercube::new(&g);
        for v in State::all(g.n()) {
            assert_eq!(hc.circle_count(v), circles(&g, v), "{} v={v}", g.name());
        }
    }
}

#[test]
fn count_at_one_is_brute_force() {
    for g in corpus() {
        let b = brute_two_factors(&g);
        assert_eq!(g.two_factor_count(), b, "{}", g.name());
        assert_eq!(two_factor_polynomial(&g).eval_at_one(), b as i64, "{}", g.name());
    }
}

#[test]
fn known_polynomials() {
    for (f, want) in [
        ("theta.tfg", "1 + q^-2"),
        ("k4-af.tfg", "q^4 + q - 1 + q^-1"),
        ("prism.tfg", "-q^4 + q^3 - q^2 + q^-3"),
    ] {
        assert_eq!(two_factor_polynomial(&graph(f)).to_string(), want, "{f}");
    }
}

#[test]
fn faces_and_genus() {
    for g in corpus() {
        let f = face_count(&g);
        assert_eq!(f, g.faces().len(), "{}", g.name());
        assert_eq!(g.vertex_count() as i64 - g.edge_count() as i64 + f as i64, 2, "{}", g.name());
    }
}

#[test]
fn gf2_homology_by_enumeration() {
    let mut small = 0;
    for g in corpus() {
        let c = build_complex(&g, Ring::Z2).unwrap();
        if c.blocks.iter().any(|b| b.bases.iter().any(|x| x.len() > 16)) {
            continue;
        }
        small += 1;
        let h = homology(&c);
        for b in &c.blocks {
            let brute = brute_gf2_homology(b);
            for (i, &d) in brute.iter().enumerate() {
                assert_eq!(h.rank(i as i64, b.j), d, "{} i={i} j={}", g.name(), b.j);
            }
        }
    }
    assert!(small >= 8, "only {small} graphs were small enough");
}

#[test]
fn z_homology_reduces_to_z2() {
    // universal coefficients: dim H(Z2) = rank + #even torsion in degrees i and i+1
    for g in corpus().into_iter().filter(|g| twofactor::in_family_g(g).member) {
        let hz = homology(&build_complex(&g, Ring::Z).unwrap());
        let h2 = homology(&build_complex(&g, Ring::Z2).unwrap());
        for gr in &h2.groups {
            let even = |i: i64| {
                hz.torsion(i, gr.j).iter().filter(|t| (*t % 2u32) == 0u32.into()).count()
            };
            let want = hz.rank(gr.i, gr.j) + even(gr.i) + even(gr.i + 1);
            assert_eq!(gr.rank, want, "{} i={} j={}", g.name(), gr.i, gr.j);
        }
    }
}
