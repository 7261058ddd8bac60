use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn tf(args: &[&str]) -> Output {
    tf_env(args, &[])
}

fn tf_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tf"));
    c.args(args).current_dir(root());
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str], code: i32) {
    let o = tf(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let want = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap();
    assert_eq!(stdout(&o), want, "{name}");
}

#[test]
fn goldens() {
    golden("check-theta.txt", &["check", "fixtures/theta.tfg"], 0);
    golden("check-badface.txt", &["check", "fixtures/badface.tfg"], 1);
    golden("check-badface-kv.txt", &["--format", "kv", "check", "fixtures/badface.tfg", "--faces"], 1);
    golden("poly-corpus.txt", &["poly", "fixtures/theta.tfg", "fixtures/k4-af.tfg", "fixtures/prism.tfg"], 0);
    golden("hom-theta-z2.txt", &["hom", "fixtures/theta.tfg", "--ring", "z2"], 0);
    golden("hom-k4-af-z.txt", &["hom", "fixtures/k4-af.tfg", "--ring", "z"], 0);
    golden("verify-trefoil-000.txt", &["verify", "fixtures/trefoil-000.tfg", "--suite", "all"], 0);
    golden("census-m3.txt", &["census", "--m", "3", "--mode", "exhaustive"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(tf(&["check", "fixtures/missing.tfg"]).status.code(), Some(2));
    assert_eq!(tf(&["poly", "fixtures/trefoil.pd"]).status.code(), Some(2));
    assert_eq!(tf(&["hom", "fixtures/badface.tfg", "--ring", "z"]).status.code(), Some(2));
    assert_eq!(tf(&["hom", "fixtures/badface.tfg", "--ring", "z2"]).status.code(), Some(0));
    assert_eq!(tf(&["flip", "fixtures/k4-af.tfg", "--disk", "nope"]).status.code(), Some(2));
    assert_eq!(tf(&["verify", "fixtures/theta.tfg", "fixtures/missing.tfg"]).status.code(), Some(2));
    assert_eq!(tf(&["check", "fixtures/theta.tfg", "fixtures/badface.tfg"]).status.code(), Some(1));
    assert_eq!(tf(&["frobnicate"]).status.code(), Some(2));
    let o = tf(&["census", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("use sample mode"));
}

#[test]
fn census_small_and_sampled() {
    let one = stdout(&tf(&["census", "--m", "1"]));
    assert!(one.contains("per_embedding total=1 members=1 fraction=1.0000"), "{one}");
    let args = ["census", "--m", "3", "--mode", "sample", "--seed", "0", "--count", "100"];
    let a = tf(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, tf(&args).stdout);
    assert_ne!(a.stdout, tf(&["census", "--m", "3", "--mode", "sample", "--seed", "1", "--count", "100"]).stdout);
}

#[test]
fn thread_count_does_not_change_bytes() {
    let args = ["verify", "fixtures/trefoil-000.tfg", "fixtures/k4-af.tfg", "fixtures/prism.tfg", "fixtures/badface.tfg"];
    let one = tf_env(&args, &[("TF_THREADS", "1")]);
    let four = tf_env(&args, &[("TF_THREADS", "4")]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, tf(&[&["--threads", "3"][..], &args].concat()).stdout);
}

#[test]
fn weave_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = tf(&["weave", "fixtures/hopf.pd", "--state", "of", "--dir", d]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let file = dir.path().join("hopf-11.tfg");
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("graph hopf-11\n"));
    assert_eq!(tf(&["verify", file.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(root().join("fixtures/trefoil-000.tfg")).unwrap(),
        {
            tf(&["weave", "fixtures/trefoil.pd", "--state", "000", "--dir", d]);
            std::fs::read_to_string(dir.path().join("trefoil-000.tfg")).unwrap()
        }
    );
    assert_eq!(tf(&["weave", "fixtures/hopf.pd", "--state", "dof", "--dir", d]).status.code(), Some(2));
    assert_eq!(tf(&["weave", "fixtures/hopf.pd", "--state", "1", "--dir", d]).status.code(), Some(2));
}

#[test]
fn flip_twice_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.tfg");
    let o = tf(&["flip", "fixtures/trefoil-000.tfg", "--disk", "c1w,c3u", "-o", once.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let twice = tf(&["flip", once.to_str().unwrap(), "--disk", "c1w,c3u"]);
    let once_text = stdout(&tf(&["flip", "fixtures/trefoil-000.tfg", "--disk", "c1w,c3u"]));
    assert_ne!(once_text, stdout(&twice));
    let p = |f: &str| stdout(&tf(&["poly", f]));
    assert_eq!(p(once.to_str().unwrap()), p("fixtures/trefoil-000.tfg"));
    let back = dir.path().join("back.tfg");
    std::fs::write(&back, stdout(&twice)).unwrap();
    assert_eq!(
        strip_comments(&back),
        strip_comments(&root().join("fixtures/trefoil-000.tfg"))
    );
}

/// Graph text without comments, for comparing a file with a rewritten copy.
fn strip_comments(p: &Path) -> String {
    let s = std::fs::read_to_string(p).unwrap();
    s.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n").trim().to_string()
}

#[test]
fn cells_report() {
    let o = tf(&["cells", "fixtures/theta.tfg", "--ring", "z"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# realization ring=z"), "{s}");
    assert!(s.ends_with("pass=1\n"));
}
