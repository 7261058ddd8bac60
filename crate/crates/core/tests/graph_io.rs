mod common;

use twofactor::{read_graph, write_graph, Error, FlipDisk};

const THETA: &str = "graph t\nvertex u\nvertex w\nedge a u w\nedge b u w\nedge c u w\n";

fn with(rot: &str, matching: &str) -> String {
    format!("{THETA}{rot}matching {matching}\n")
}

const ROT: &str = "rotation u a.0 b.0 c.0\nrotation w a.1 c.1 b.1\n";

#[test]
fn parses_theta() {
    let g = read_graph(&with(ROT, "a")).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count(), g.n()), (2, 3, 1));
    assert!(g.validate().is_empty());
    assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
}

#[test]
fn syntax_errors_carry_positions() {
    match read_graph("grph t\n") {
        Err(Error::Syntax { line: 1, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(read_graph(""), Err(Error::Syntax { .. })));
}

#[test]
fn unknown_ids() {
    let bad = with("rotation u a.0 b.0 z.0\nrotation w a.1 c.1 b.1\n", "a");
    assert!(matches!(read_graph(&bad), Err(Error::UnknownId { ref id, .. }) if id.starts_with('z')), "{:?}", read_graph(&bad));
}

#[test]
fn rotation_length() {
    let bad = with("rotation u a.0 b.0\nrotation w a.1 c.1 b.1\n", "a");
    assert!(matches!(read_graph(&bad), Err(Error::RotationLength { len: 2, .. })), "{:?}", read_graph(&bad));
}

#[test]
fn validation_reports_matching_and_genus() {
    let g = read_graph(&with(ROT, "a b")).unwrap();
    assert!(g.validate().iter().any(|m| m.contains("matching")));
    // same local order at both ends puts theta on the torus
    let g = read_graph(&with("rotation u a.0 b.0 c.0\nrotation w a.1 b.1 c.1\n", "a")).unwrap();
    assert!(g.validate().iter().any(|m| m.contains("genus")));
}

#[test]
fn flip_disks_need_small_cuts() {
    let g = common::graph("k4-af.tfg");
    assert!(FlipDisk::enumerate(&g).is_empty());
    assert!(matches!(FlipDisk::from_ids(&g, &["1", "2"]), Err(Error::NotFlipDisk(_))));
    let t = common::graph("trefoil-000.tfg");
    let d = FlipDisk::from_ids(&t, &["c1w", "c3u"]).unwrap();
    assert_eq!(d.kind(), 2);
    assert_ne!(t.apply_flip(&d).unwrap(), t);
    assert_eq!(t.mirror().mirror(), t);
}
