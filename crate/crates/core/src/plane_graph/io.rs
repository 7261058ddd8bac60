use std::collections::HashMap;

use super::{Edge, HalfEdge, MatchedGraph};
use crate::{Error, Result};

struct Line<'a> {
    no: usize,
    words: Vec<(usize, &'a str)>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let mut words = Vec::new();
        let mut start = None;
        for (k, ch) in body.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    words.push((s, &body[s..k]));
                }
            } else if start.is_none() {
                start = Some(k);
            }
        }
        if let Some(s) = start {
            words.push((s, &body[s..]));
        }
        if !words.is_empty() {
            out.push(Line { no: i + 1, words });
        }
    }
    out
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col: col + 1, msg: msg.into() }
}

/// Parses the line-oriented graph format. Declaration order is preserved.
pub fn read_graph(text: &str) -> Result<MatchedGraph> {
    let lines = tokenize(text);
    let first = lines.first().ok_or_else(|| syntax(1, 0, "empty input: expected `graph <name>`"))?;
    if first.words[0].1 != "graph" || first.words.len() != 2 {
        return Err(syntax(first.no, first.words[0].0, "expected `graph <name>`"));
    }
    let name = first.words[1].1.to_string();

    let mut vertices: Vec<String> = Vec::new();
    let mut vindex: HashMap<&str, usize> = HashMap::new();
    for l in &lines[1..] {
        if l.words[0].1 == "vertex" {
            if l.words.len() != 2 {
                return Err(syntax(l.no, l.words[0].0, "expected `vertex <vid>`"));
            }
            let id = l.words[1].1;
            if vindex.insert(id, vertices.len()).is_some() {
                return Err(syntax(l.no, l.words[1].0, format!("duplicate vertex `{id}`")));
            }
            vertices.push(id.to_string());
        }
    }

    let mut edges: Vec<Edge> = Vec::new();
    let mut eindex: HashMap<&str, usize> = HashMap::new();
    for l in &lines[1..] {
        if l.words[0].1 == "edge" {
            if l.words.len() != 4 {
                return Err(syntax(l.no, l.words[0].0, "expected `edge <eid> <vid> <vid>`"));
            }
            let id = l.words[1].1;
            let mut ends = [0; 2];
            for k in 0..2 {
                let vid = l.words[2 + k].1;
                ends[k] = *vindex
                    .get(vid)
                    .ok_or_else(|| Error::UnknownId { line: l.no, id: vid.to_string() })?;
            }
            if eindex.insert(id, edges.len()).is_some() {
                return Err(syntax(l.no, l.words[1].0, format!("duplicate edge `{id}`")));
            }
            edges.push(Edge { id: id.to_string(), ends });
        }
    }

    let mut rotations: Vec<Option<Vec<HalfEdge>>> = vec![None; vertices.len()];
    let mut matching: Option<Vec<usize>> = None;
    for l in &lines[1..] {
        match l.words[0].1 {
            "vertex" | "edge" => {}
            "graph" => return Err(syntax(l.no, l.words[0].0, "second `graph` line")),
            "rotation" => {
                if l.words.len() < 2 {
                    return Err(syntax(l.no, l.words[0].0, "expected `rotation <vid> <tok> <tok> <tok>`"));
                }
                let vid = l.words[1].1;
                let v = *vindex
                    .get(vid)
                    .ok_or_else(|| Error::UnknownId { line: l.no, id: vid.to_string() })?;
                let toks = &l.words[2..];
                if toks.len() != 3 {
                    return Err(Error::RotationLength { line: l.no, vertex: vid.to_string(), len: toks.len() });
                }
                let mut rot = Vec::new();
                for &(col, tok) in toks {
                    let (eid, end) = tok
                        .rsplit_once('.')
                        .ok_or_else(|| syntax(l.no, col, format!("bad half-edge token `{tok}`")))?;
                    let end = match end {
                        "0" => 0,
                        "1" => 1,
                        _ => return Err(syntax(l.no, col, format!("bad half-edge token `{tok}`"))),
                    };
                    let e = *eindex
                        .get(eid)
                        .ok_or_else(|| Error::UnknownId { line: l.no, id: eid.to_string() })?;
                    rot.push(HalfEdge::new(e, end));
                }
                if rotations[v].is_some() {
                    return Err(syntax(l.no, l.words[1].0, format!("second rotation for `{vid}`")));
                }
                rotations[v] = Some(rot);
            }
            "matching" => {
                if matching.is_some() {
                    return Err(syntax(l.no, l.words[0].0, "second `matching` line"));
                }
                let mut m = Vec::new();
                for &(_, eid) in &l.words[1..] {
                    m.push(
                        *eindex
                            .get(eid)
                            .ok_or_else(|| Error::UnknownId { line: l.no, id: eid.to_string() })?,
                    );
                }
                matching = Some(m);
            }
            other => {
                return Err(syntax(l.no, l.words[0].0, format!("unknown keyword `{other}`")));
            }
        }
    }
    let last = lines.last().map_or(1, |l| l.no);
    let matching = matching.ok_or_else(|| syntax(last, 0, "missing `matching` line"))?;
    let mut rots = Vec::with_capacity(vertices.len());
    for (v, r) in rotations.into_iter().enumerate() {
        match r {
            Some(r) => rots.push(r),
            None => {
                return Err(Error::Structural(format!("vertex {} has no rotation", vertices[v])));
            }
        }
    }
    MatchedGraph::from_parts(name, vertices, edges, rots, matching)
}

/// Writes the normal form: declaration order kept, each rotation starting at
/// its smallest token (edge order, then end).
pub fn write_graph(g: &MatchedGraph) -> String {
    let mut s = format!("graph {}\n", g.name);
    for v in &g.vertices {
        s += &format!("vertex {v}\n");
    }
    for e in &g.edges {
        s += &format!("edge {} {} {}\n", e.id, g.vertices[e.ends[0]], g.vertices[e.ends[1]]);
    }
    for (v, rot) in g.rotations.iter().enumerate() {
        s += &format!("rotation {}", g.vertices[v]);
        for h in rot {
            s += &format!(" {}.{}", g.edges[h.edge].id, h.end);
        }
        s.push('\n');
    }
    s += "matching";
    for &e in &g.matching {
        s += &format!(" {}", g.edges[e].id);
    }
    s.push('\n');
    s
}
