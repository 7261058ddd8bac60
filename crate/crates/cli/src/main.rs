use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use twofactor::census::{census, CensusMode};
use twofactor::moduli::{
    classification_check, cover_check, dual_check_all, realization_report, verify_six_cycles, PairingRule,
};
use twofactor::webs::{flatten, parse_pd, FlatteningState};
use twofactor::{
    build_complex, euler_check, homology, in_family_g, read_graph, two_factor_polynomial, write_graph, Error,
    FlipDisk, Hypercube, MatchedGraph, Ring,
};

#[derive(Parser)]
#[command(name = "tf", version, about = "2-factor homology of plane trivalent graphs with perfect matchings")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; overrides TF_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z2,
    Z,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Z2 => Ring::Z2,
            RingArg::Z => Ring::Z,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Faces,
    Moduli,
    Euler,
    Cover,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Subcommand)]
enum Cmd {
    /// Membership in G; exit 1 with a bad-face witness otherwise.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Print every 2-face, not just the witness.
        #[arg(long)]
        faces: bool,
    },
    /// 2-factor polynomial.
    Poly {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Bigraded homology.
    Hom {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = RingArg::Z2)]
        ring: RingArg,
    },
    /// Reflect a flip disk and print the new graph.
    Flip {
        file: PathBuf,
        /// Comma separated vertex ids.
        #[arg(long, value_delimiter = ',', required = true)]
        disk: Vec<String>,
    },
    /// Run verification suites.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Flatten a PD code into a closed web, written as `<link>-<state>.tfg`.
    Weave {
        pd: PathBuf,
        /// Bit string, `of` (oriented) or `dof` (dual oriented).
        #[arg(long, default_value = "of")]
        state: String,
        /// Directory for the graph file.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Cellular realization report.
    Cells {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RingArg::Z2)]
        ring: RingArg,
    },
    /// Fraction of pairs (G, M) with |M| = m that lie in G.
    Census {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

/// Report text and exit code for one input.
struct Out {
    text: String,
    code: u8,
}

impl Out {
    fn ok(text: String) -> Out {
        Out { text, code: 0 }
    }
    fn input(e: impl std::fmt::Display) -> Out {
        Out { text: format!("error: {e}\n"), code: 2 }
    }
}

fn load(path: &Path) -> Result<MatchedGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn check(g: &MatchedGraph, fmt: Format, all: bool) -> Out {
    let hc = Hypercube::new(g);
    let faces = hc.faces();
    let bad: Vec<_> = faces.iter().filter(|f| f.bad).collect();
    let mut s = String::new();
    match (fmt, bad.first()) {
        (Format::Text, None) if faces.is_empty() => s.push_str("member of G (no 2-faces)\n"),
        (Format::Text, None) => writeln!(s, "member of G ({} 2-faces, none bad)", faces.len()).unwrap(),
        (Format::Text, Some(w)) => writeln!(s, "not in G ({} of {} 2-faces bad)\nwitness {w}", bad.len(), faces.len()).unwrap(),
        (Format::Kv, w) => {
            writeln!(s, "member={} faces={} bad={}", w.is_none() as u8, faces.len(), bad.len()).unwrap();
            if let Some(w) = w {
                writeln!(s, "witness {w}").unwrap();
            }
        }
    }
    if all {
        for f in &faces {
            writeln!(s, "{f}").unwrap();
        }
    }
    Out { text: s, code: if bad.is_empty() { 0 } else { 1 } }
}

fn poly(g: &MatchedGraph, fmt: Format) -> Out {
    let p = two_factor_polynomial(g);
    Out::ok(match fmt {
        Format::Text => format!("{p}\n"),
        Format::Kv => format!("poly={p} at_one={} two_factors={}\n", p.eval_at_one(), g.two_factor_count()),
    })
}

fn hom(g: &MatchedGraph, ring: Ring, fmt: Format) -> Out {
    let c = match build_complex(g, ring) {
        Ok(c) => c,
        Err(e) => return Out::input(e),
    };
    let h = homology(&c);
    let mut s = String::new();
    for gr in &h.groups {
        if gr.rank == 0 && gr.torsion.is_empty() {
            continue;
        }
        match (fmt, ring) {
            (Format::Kv, _) => {
                let t: Vec<String> = gr.torsion.iter().map(|x| x.to_string()).collect();
                writeln!(s, "i={} j={} rank={} torsion={}", gr.i, gr.j, gr.rank, t.join(",")).unwrap()
            }
            (Format::Text, Ring::Z2) => writeln!(s, "H[{}][{}]={}", gr.i, gr.j, gr.rank).unwrap(),
            (Format::Text, Ring::Z) => {
                let mut parts = Vec::new();
                if gr.rank > 0 {
                    parts.push(if gr.rank == 1 { "Z".to_string() } else { format!("Z^{}", gr.rank) });
                }
                parts.extend(gr.torsion.iter().map(|t| format!("Z/{t}")));
                writeln!(s, "H[{}][{}]={}", gr.i, gr.j, parts.join(" + ")).unwrap()
            }
        }
    }
    if s.is_empty() {
        s.push_str("H=0\n");
    }
    Out::ok(s)
}

fn verify(g: &MatchedGraph, suite: Suite) -> Out {
    let hc = Hypercube::new(g);
    let on = |x: Suite| suite == Suite::All || suite == x;
    let mut s = String::new();
    let mut ok = true;
    let mut line = |s: &mut String, name: &str, pass: bool, rest: String| {
        ok &= pass;
        writeln!(s, "suite={name} pass={} {rest}", pass as u8).unwrap();
    };
    if on(Suite::Faces) {
        let m = in_family_g(g);
        let cls = classification_check(&hc);
        line(
            &mut s,
            "faces",
            cls.pass(),
            format!("member={} faces={} mismatches={}", m.member as u8, hc.faces().len(), cls.mismatches.len()),
        );
        for x in &cls.mismatches {
            writeln!(s, "  mismatch {x}").unwrap();
        }
    }
    if on(Suite::Moduli) {
        let six = verify_six_cycles(&hc, PairingRule::Canonical);
        let failed: Vec<_> = six.rows.iter().filter(|r| !r.pass).collect();
        line(
            &mut s,
            "six-cycles",
            failed.is_empty(),
            format!("faces={} eta_faces={} failed={}", six.rows.len(), six.eta_faces, failed.len()),
        );
        for r in failed {
            writeln!(s, "  {r}").unwrap();
        }
        let dual = dual_check_all(&hc, 3);
        line(&mut s, "dual", dual.pass(), format!("checked={} failed={}", dual.checked, dual.failures.len()));
        for x in &dual.failures {
            writeln!(s, "  {x}").unwrap();
        }
        let member = in_family_g(g).member;
        for ring in [Ring::Z2, Ring::Z] {
            if ring == Ring::Z && !member {
                writeln!(s, "suite=realization-z skipped=1 reason=outside_G").unwrap();
                continue;
            }
            match realization_report(&hc, ring) {
                Ok(r) => {
                    line(&mut s, &format!("realization-{ring}"), r.pass(), format!("mismatches={}", r.mismatches.len()));
                    for x in &r.mismatches {
                        writeln!(s, "  {x}").unwrap();
                    }
                }
                Err(e) => line(&mut s, &format!("realization-{ring}"), false, format!("error={}", e.to_string().replace(' ', "_"))),
            }
        }
    }
    if on(Suite::Euler) {
        let e = euler_check(g);
        let checks: Vec<String> = e.checks.iter().map(|(n, p)| format!("{n}={}", *p as u8)).collect();
        line(&mut s, "euler", e.pass(), checks.join(" "));
    }
    if on(Suite::Cover) {
        let c = cover_check(&hc);
        line(
            &mut s,
            "cover",
            c.pass(),
            format!("checked={} failed={} eta_covers={}", c.faces_checked, c.failures.len(), c.eta_covers.len()),
        );
        for x in &c.failures {
            writeln!(s, "  {x}").unwrap();
        }
    }
    Out { text: s, code: if ok { 0 } else { 1 } }
}

fn per_file(files: &[PathBuf], f: impl Fn(&MatchedGraph) -> Out + Sync) -> Out {
    let outs: Vec<Out> = files
        .par_iter()
        .map(|p| match load(p) {
            Ok(g) => f(&g),
            Err(e) => Out::input(e),
        })
        .collect();
    if outs.len() == 1 {
        return outs.into_iter().next().unwrap();
    }
    let mut text = String::new();
    let mut code = 0;
    for (p, o) in files.iter().zip(outs) {
        writeln!(text, "# {}", p.display()).unwrap();
        text.push_str(&o.text);
        code = code.max(o.code);
    }
    Out { text, code }
}

fn weave(pd: &Path, state: &str, dir: &Path, fmt: Format) -> Out {
    let text = match std::fs::read_to_string(pd) {
        Ok(t) => t,
        Err(e) => return Out::input(format!("{}: {e}", pd.display())),
    };
    let stem = pd.file_stem().and_then(|s| s.to_str()).unwrap_or("link");
    let run = || -> Result<(PathBuf, MatchedGraph), Error> {
        let link = parse_pd(&text)?.with_name(stem);
        let g = flatten(&link, FlatteningState::parse(state)?)?;
        let path = dir.join(format!("{}.tfg", g.name()));
        std::fs::write(&path, write_graph(&g)).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
        Ok((path, g))
    };
    match run() {
        Ok((path, g)) => {
            let m = in_family_g(&g).member as u8;
            Out::ok(match fmt {
                Format::Text => format!("wrote {} ({} vertices, {} matching edges)\n", path.display(), g.vertex_count(), g.n()),
                Format::Kv => format!("path={} vertices={} n={} member={m}\n", path.display(), g.vertex_count(), g.n()),
            })
        }
        Err(e) => Out::input(e),
    }
}

fn cells(g: &MatchedGraph, ring: Ring) -> Out {
    match realization_report(&Hypercube::new(g), ring) {
        Ok(r) => {
            let mut s = r.lines.join("\n");
            s.push('\n');
            for m in &r.mismatches {
                writeln!(s, "mismatch {m}").unwrap();
            }
            writeln!(s, "pass={}", r.pass() as u8).unwrap();
            Out { code: if r.pass() { 0 } else { 1 }, text: s }
        }
        Err(e) => Out::input(e),
    }
}

fn run(cli: &Cli) -> Out {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Check { files, faces } => per_file(files, |g| check(g, fmt, *faces)),
        Cmd::Poly { files } => per_file(files, |g| poly(g, fmt)),
        Cmd::Hom { files, ring } => per_file(files, |g| hom(g, (*ring).into(), fmt)),
        Cmd::Verify { files, suite } => per_file(files, |g| verify(g, *suite)),
        Cmd::Flip { file, disk } => per_file(std::slice::from_ref(file), |g| {
            let ids: Vec<&str> = disk.iter().map(|s| s.trim()).collect();
            match FlipDisk::from_ids(g, &ids).and_then(|d| g.apply_flip(&d)) {
                Ok(h) => Out::ok(write_graph(&h)),
                Err(e) => Out::input(e),
            }
        }),
        Cmd::Weave { pd, state, dir } => weave(pd, state, dir, fmt),
        Cmd::Cells { file, ring } => per_file(std::slice::from_ref(file), |g| cells(g, (*ring).into())),
        Cmd::Census { m, mode, seed, count } => {
            let mode = match mode {
                Mode::Exhaustive => CensusMode::Exhaustive,
                Mode::Sample => CensusMode::Sample { count: *count, seed: *seed },
            };
            match census(*m, mode) {
                Ok(r) => Out::ok(r.to_string()),
                Err(e) => Out::input(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| std::env::var("TF_THREADS").ok().and_then(|t| t.parse().ok()));
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let out = run(&cli);
    let (body, err) = if out.code == 2 { (String::new(), out.text) } else { (out.text, String::new()) };
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    eprint!("{err}");
    ExitCode::from(out.code)
}
