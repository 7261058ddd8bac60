//! Browser bindings. Every export takes and returns plain strings; a failed
//! call returns text starting with `error:` so the page never has to catch.

use twofactor::webs::{flatten, parse_pd, FlatteningState};
use twofactor::{build_complex, homology, in_family_g, read_graph, two_factor_polynomial, write_graph, Ring};
use wasm_bindgen::prelude::*;

fn or_error(r: Result<String, twofactor::Error>) -> String {
    r.unwrap_or_else(|e| format!("error: {e}"))
}

/// Membership in G with the first bad face, if any.
#[wasm_bindgen]
pub fn check(graph: &str) -> String {
    or_error(read_graph(graph).map(|g| match in_family_g(&g).witness {
        None => "member of G".to_string(),
        Some(w) => format!("not in G\nwitness {w}"),
    }))
}

/// Polynomial on the first line, then one `H[i][j]=...` line per nonzero group.
#[wasm_bindgen]
pub fn homology_table(graph: &str, ring: &str) -> String {
    let ring = match ring {
        "z" | "Z" => Ring::Z,
        _ => Ring::Z2,
    };
    or_error(read_graph(graph).and_then(|g| {
        let h = homology(&build_complex(&g, ring)?);
        let mut out = format!("poly {}\n", two_factor_polynomial(&g));
        for gr in &h.groups {
            let tors: Vec<String> = gr.torsion.iter().map(|t| format!(" + Z/{t}")).collect();
            out.push_str(&format!("H[{}][{}]={}{}\n", gr.i, gr.j, gr.rank, tors.concat()));
        }
        Ok(out)
    }))
}

/// Closed web of a PD code under a flattening (`of` or a bit string), as graph text.
#[wasm_bindgen]
pub fn weave(pd: &str, state: &str) -> String {
    or_error((|| {
        let link = parse_pd(pd)?.with_name("web");
        Ok(write_graph(&flatten(&link, FlatteningState::parse(state)?)?))
    })())
}
