//! `crystpres` command-line front end.
//!
//! Exit status: 0 when everything requested succeeded and verified, 2 for
//! input errors, 3 when a verification was inconclusive, 4 for failed
//! verifications and other hard errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crystpres::cayley::{coordination_sequence, geodesics};
use crystpres::coset::Verdict;
use crystpres::corpus;
use crystpres::group::MatrixGroup;
use crystpres::periodic::{
    catalog_load, catalog_names, from_cayley, quotient_by_sublattice, schlafli_symbol, strong_rings, LabeledQuotientGraph,
    Node, RingOptions, DEFAULT_MAX_RING,
};
use crystpres::pipeline::{build_extension_data, present, verify, PresentOptions, Verification};
use crystpres::rational::parse_rational;
use crystpres::{parse_generating_set, parse_word, Error, GeneratingSetDocument, Presentation};

const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(name = "crystpres", version, about = "Short presentations and periodic-graph analysis for crystallographic groups")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and verify a short presentation for a generating set.
    Present {
        #[arg(long)]
        input: String,
        /// Verification moduli, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        m: Vec<usize>,
        /// Retry under every generator order and keep the shortest result.
        #[arg(long)]
        permute: bool,
        /// Word-length cap for the translation harvest.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Verify a presentation given as relators on a document's generators.
    Verify {
        #[arg(long)]
        input: String,
        /// Relators, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        relators: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        m: Vec<usize>,
    },
    /// Coordination sequence of a Cayley graph or a net.
    Cseq {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10)]
        radius: usize,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
    },
    /// Length and number of shortest paths to a target.
    Geodesics {
        #[command(flatten)]
        source: Source,
        /// Cell vector `4,12` (with --net) or a word (with --input).
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Target vertex in the quotient graph (with --net).
        #[arg(long, default_value_t = 0)]
        to_vertex: usize,
        /// Give up beyond this length.
        #[arg(long, default_value_t = 64)]
        max: usize,
    },
    /// Strong rings and the ring symbol.
    Rings {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_MAX_RING)]
        max: usize,
        /// Analyse only this vertex instead of checking all of them.
        #[arg(long)]
        vertex: Option<usize>,
        /// Enlarge the locality ball by 2.
        #[arg(long)]
        widen: bool,
        /// Check a GF(2) decomposition for every rejected cycle.
        #[arg(long)]
        witnesses: bool,
    },
    /// Quotient of a net by translation vectors.
    Quotient {
        #[arg(long)]
        net: String,
        /// Translation in the net's cell coordinates, e.g. `5/2,5/2,1/2`; repeatable.
        #[arg(long = "vector", required = true, allow_hyphen_values = true)]
        vectors: Vec<String>,
        /// Accept vectors with non-coprime lattice coordinates.
        #[arg(long)]
        imprimitive: bool,
        #[arg(long, default_value_t = 10)]
        radius: usize,
        /// Also compute the ring symbol up to this size.
        #[arg(long)]
        max: Option<usize>,
    },
    /// List bundled nets, or print one.
    Catalog { name: Option<String> },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Generating-set document: a JSON path or a bundled document name.
    #[arg(long)]
    input: Option<String>,
    /// Net name from the catalog.
    #[arg(long)]
    net: Option<String>,
}

/// Report plus exit status.
struct Outcome {
    text: String,
    report: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String, report: &impl Serialize) -> Self {
        Outcome { text, report: to_json(report), code: 0 }
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::ComponentCount { .. }
            | Error::UnknownVariable { .. }
            | Error::DimensionMismatch { .. }
            | Error::Document(_)
            | Error::NotUnimodular
            | Error::IdentityGenerator(_)
            | Error::Graph(_)
            | Error::UnknownNet(_)
            | Error::Invalid(_)
            | Error::Unassigned(_)
    )
}

enum Failure {
    Input(String),
    Hard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if input_error(&e) {
            Failure::Input(e.to_string())
        } else {
            Failure::Hard(e.to_string())
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn load_document(input: &str) -> Run<GeneratingSetDocument> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{input}: {e}")))?;
        return Ok(parse_generating_set(&text)?);
    }
    corpus::document(input).map_err(|_| Failure::Input(format!("{input}: no such file or bundled document")))
}

fn parse_cell_vector(text: &str) -> Run<Vec<i64>> {
    text.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Input(format!("bad integer vector `{text}`"))))
        .collect()
}

fn source_graph(source: &Source) -> Run<LabeledQuotientGraph> {
    match (&source.net, &source.input) {
        (Some(net), _) => Ok(catalog_load(net)?),
        (None, Some(input)) => Ok(from_cayley(&load_document(input)?)?.graph),
        (None, None) => Err(Failure::Input("one of --net or --input is required".into())),
    }
}

fn check_m(m: &[usize]) -> Run<()> {
    if m.is_empty() || m.iter().any(|&x| x < 2) {
        return Err(Failure::Input("--m values must be at least 2".into()));
    }
    Ok(())
}

fn verification_code(v: &Verification) -> u8 {
    if !v.identity || v.order_checks.iter().any(|c| matches!(c.verdict, Verdict::Fail { .. })) {
        EXIT_FAILURE
    } else if v.any_inconclusive() {
        EXIT_INCONCLUSIVE
    } else {
        0
    }
}

fn verification_text(v: &Verification) -> String {
    let mut parts = vec![format!("identity {}", if v.identity { "ok" } else { "FAILED" })];
    for c in &v.order_checks {
        let verdict = match &c.verdict {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail { found } => format!("FAIL (found {found})"),
            Verdict::Inconclusive => "inconclusive".to_string(),
        };
        parts.push(format!("m={} order {} {}", c.m, c.expected, verdict));
    }
    parts.join("; ")
}

fn cmd_present(input: &str, m: Vec<usize>, permute: bool, radius: Option<usize>) -> Run<Outcome> {
    check_m(&m)?;
    let doc = load_document(input)?;
    let mut options = PresentOptions { verify_m: m, permute, ..Default::default() };
    if let Some(r) = radius {
        options.radius_cap = r;
    }
    let report = present(&doc, &options)?;
    let mut text = format!(
        "{}: {} relators, total length {}\npoint group order {}, lattice rank {}\n",
        report.label.as_deref().unwrap_or("input"),
        report.relators.len(),
        report.total_length,
        report.point_group_order,
        report.lattice_rank
    );
    for r in &report.relators {
        text.push_str(&format!("  {r}\n"));
    }
    text.push_str(&format!("verification: {}\n", verification_text(&report.verification)));
    let code = verification_code(&report.verification);
    Ok(Outcome { text, report: report.to_json() + "\n", code })
}

fn cmd_verify(input: &str, relators: &[String], m: Vec<usize>) -> Run<Outcome> {
    check_m(&m)?;
    let doc = load_document(input)?;
    let texts: Vec<&str> = relators.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    let p = Presentation::parse(&doc.names(), &texts)?;
    let options = PresentOptions { verify_m: m, ..Default::default() };
    let e = build_extension_data(&doc, &options)?;
    let v = verify(&e, &p, &options)?;
    let text = format!("{} relators\nverification: {}\n", p.relators.len(), verification_text(&v));
    let report = json!({
        "generators": doc.names().iter().map(char::to_string).collect::<Vec<_>>(),
        "relators": p.relator_texts(),
        "point_group_order": e.point_order(),
        "lattice_rank": e.rank(),
        "verification": v,
    });
    Ok(Outcome { code: verification_code(&v), text, report: to_json(&report) })
}

fn cmd_cseq(source: &Source, radius: usize, vertex: usize) -> Run<Outcome> {
    let (name, seq) = match (&source.net, &source.input) {
        (Some(net), _) => {
            let g = catalog_load(net)?;
            if vertex >= g.vertex_count() {
                return Err(Failure::Input(format!("vertex {vertex} out of range")));
            }
            (g.name().to_string(), g.coordination_sequence(vertex, radius))
        }
        (None, Some(input)) => {
            let doc = load_document(input)?;
            let group = MatrixGroup::new(&doc.ops())?;
            (doc.label.clone().unwrap_or_else(|| input.to_string()), coordination_sequence(&group, radius)?)
        }
        (None, None) => return Err(Failure::Input("one of --net or --input is required".into())),
    };
    let density: usize = seq.iter().sum();
    let text = format!(
        "{}\nTD{radius} {density}\n",
        seq.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    );
    let report = json!({ "source": name, "radius": radius, "sequence": seq, "topological_density": density });
    Ok(Outcome::ok(text, &report))
}

fn count_value(c: u128) -> Value {
    u64::try_from(c).map_or_else(|_| Value::String(c.to_string()), Value::from)
}

fn cmd_geodesics(source: &Source, target: &str, to_vertex: usize, max: usize) -> Run<Outcome> {
    let (length, count) = match (&source.net, &source.input) {
        (Some(net), _) => {
            let g = catalog_load(net)?;
            let cell = parse_cell_vector(target)?;
            if cell.len() != g.rank() || to_vertex >= g.vertex_count() {
                return Err(Failure::Input(format!("target must be vertex < {} with {} coordinates", g.vertex_count(), g.rank())));
            }
            g.geodesics(0, &Node::new(to_vertex, cell), max)?
        }
        (None, Some(input)) => {
            let doc = load_document(input)?;
            let group = MatrixGroup::new(&doc.ops())?;
            let w = parse_word(target, &doc.names())?;
            let set = geodesics(&group, &group.evaluate(&w)?, max, None)?;
            (set.length, set.count)
        }
        (None, None) => return Err(Failure::Input("one of --net or --input is required".into())),
    };
    let text = format!("length {length}, {count} geodesics\n");
    let report = json!({ "target": target, "length": length, "count": count_value(count) });
    Ok(Outcome::ok(text, &report))
}

fn cmd_rings(source: &Source, max: usize, vertex: Option<usize>, widen: bool, witnesses: bool) -> Run<Outcome> {
    let g = source_graph(source)?;
    let options = RingOptions { max_size: max, widen, witnesses };
    let mut code = 0;
    let mut report = json!({ "graph": g.name(), "max_size": max, "widen": widen });
    let symbol = match vertex {
        Some(v) => {
            let a = strong_rings(&g, v, &options)?;
            report["vertex"] = json!(v);
            report["rings"] = json!(a.rings.len());
            report["rejected"] = json!(a.rejected.len());
            if witnesses {
                let ok = a.witnesses_hold(&g);
                report["witnesses_hold"] = json!(ok);
                if !ok {
                    code = EXIT_FAILURE;
                }
            }
            a.symbol()
        }
        None => {
            if witnesses {
                for v in 0..g.vertex_count() {
                    if !strong_rings(&g, v, &options)?.witnesses_hold(&g) {
                        code = EXIT_FAILURE;
                    }
                }
                report["witnesses_hold"] = json!(code == 0);
            }
            schlafli_symbol(&g, &options)?
        }
    };
    report["symbol"] = json!(symbol.to_string());
    report["counts"] = json!(symbol.counts);
    Ok(Outcome { text: format!("{symbol}\n"), report: to_json(&report), code })
}

fn cmd_quotient(net: &str, vectors: &[String], imprimitive: bool, radius: usize, max: Option<usize>) -> Run<Outcome> {
    let g = catalog_load(net)?;
    let mut lattice_vectors = Vec::new();
    for v in vectors {
        let comps = v
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<crystpres::Result<Vec<_>>>()?;
        lattice_vectors.push(g.to_lattice_coordinates(&comps)?);
    }
    let q = quotient_by_sublattice(&g, &lattice_vectors, imprimitive)?;
    let densities: Vec<usize> = (0..q.vertex_count()).map(|v| q.topological_density(v, radius)).collect();
    let mut text = format!(
        "rank {}, {} vertices\nlattice vectors {}\nTD{radius} {}\n",
        q.rank(),
        q.vertex_count(),
        lattice_vectors.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" "),
        densities.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    );
    let mut report = json!({
        "net": g.name(),
        "vectors": vectors,
        "lattice_vectors": lattice_vectors,
        "rank": q.rank(),
        "vertices": q.vertex_count(),
        "radius": radius,
        "topological_density": densities,
        "quotient": q.to_net_text(),
    });
    if let Some(max) = max {
        let symbol = schlafli_symbol(&q, &RingOptions::up_to(max))?;
        text.push_str(&format!("{symbol}\n"));
        report["symbol"] = json!(symbol.to_string());
    }
    Ok(Outcome::ok(text, &report))
}

fn cmd_catalog(name: Option<&str>) -> Run<Outcome> {
    match name {
        Some(n) => {
            let g = catalog_load(n)?;
            let text = g.to_net_text();
            let report = json!({ "name": g.name(), "rank": g.rank(), "vertices": g.vertex_count(), "net": text });
            Ok(Outcome::ok(text, &report))
        }
        None => {
            let mut text = String::new();
            let mut entries = Vec::new();
            for n in catalog_names() {
                let g = catalog_load(n)?;
                text.push_str(&format!("{n}\trank {}\t{} vertices\t{} edges\n", g.rank(), g.vertex_count(), g.edges().len()));
                entries.push(json!({ "name": n, "rank": g.rank(), "vertices": g.vertex_count(), "edges": g.edges().len() }));
            }
            Ok(Outcome::ok(text, &entries))
        }
    }
}

fn run(cli: &Cli) -> Run<Outcome> {
    match &cli.command {
        Command::Present { input, m, permute, radius } => cmd_present(input, m.clone(), *permute, *radius),
        Command::Verify { input, relators, m } => cmd_verify(input, relators, m.clone()),
        Command::Cseq { source, radius, vertex } => cmd_cseq(source, *radius, *vertex),
        Command::Geodesics { source, target, to_vertex, max } => cmd_geodesics(source, target, *to_vertex, *max),
        Command::Rings { source, max, vertex, widen, witnesses } => cmd_rings(source, *max, *vertex, *widen, *witnesses),
        Command::Quotient { net, vectors, imprimitive, radius, max } => {
            cmd_quotient(net, vectors, *imprimitive, *radius, *max)
        }
        Command::Catalog { name } => cmd_catalog(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_INPUT);
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, &outcome.report) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Hard(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
