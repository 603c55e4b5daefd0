//! End-to-end acceptance checks; prints one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use crystpres::affine::AffineIsometry;
use crystpres::cayley::{coordination_sequence, geodesics, lattice_geodesic_count, odd_girth, shortest_translation_words, HarvestOptions};
use crystpres::coset::{coset_enumerate, group_order, Enumeration};
use crystpres::corpus::{document, document_names, reference_corpus};
use crystpres::group::MatrixGroup;
use crystpres::periodic::{
    catalog_load, catalog_names, from_cayley, quotient_by_sublattice, schlafli_symbol, strong_rings, Node, RingOptions,
};
use crystpres::pipeline::{
    build_extension_data, check_equivalence, ndia_generators, present, relator_ring_census, PresentOptions,
    PresentationReport, Witness,
};
use crystpres::rational::{frac, int, parse_rational, Rational};
use crystpres::tietze::{tietze_simplify, DEFAULT_BUDGET};
use crystpres::{parse_generating_set, GeneratingSetDocument, Presentation, Word};

type Check = std::result::Result<String, String>;

/// Name, time limit in seconds, and check.
type Criterion = (&'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn plane(extra: (i64, i64)) -> GeneratingSetDocument {
    let text = format!(
        r#"{{"dimension":2,"generators":[{{"name":"a","xyz":"x+1,y"}},{{"name":"b","xyz":"x,y+1"}},{{"name":"c","xyz":"x+{},y+{}"}}]}}"#,
        extra.0, extra.1
    );
    parse_generating_set(&text).expect("valid document")
}

/// Passes when every reference relator is a consequence and the finite quotients agree.
fn equivalent_to(report: &PresentationReport, doc: &GeneratingSetDocument, reference: &[&str]) -> Check {
    let e = build_extension_data(doc, &PresentOptions::default()).map_err(err)?;
    let reference = Presentation::parse(&doc.names(), reference).map_err(err)?;
    let eq = check_equivalence(&report.presentation, &reference, &e.group, &e.basis_words);
    let inconclusive: Vec<&str> =
        eq.consequences.iter().filter(|c| c.witness == Witness::Inconclusive).map(|c| c.relator.as_str()).collect();
    ensure!(inconclusive.is_empty(), "inconclusive witnesses for {inconclusive:?}");
    ensure!(eq.equivalent(), "not equivalent: {eq:?} ours {:?}", report.relators);
    Ok(format!("{:?}", report.relators))
}

fn i42d_pipeline() -> Check {
    let doc = document("i42d_gis").map_err(err)?;
    let r = present(&doc, &PresentOptions::default()).map_err(err)?;
    ensure!(r.verification.identity, "a relator is not the identity");
    let orders: Vec<(usize, usize, bool)> = r
        .verification
        .order_checks
        .iter()
        .map(|c| (c.m, c.expected, c.verdict == crystpres::coset::Verdict::Pass))
        .collect();
    ensure!(orders == vec![(2, 64, true), (3, 216, true)], "order checks {orders:?}");
    equivalent_to(&r, &doc, &["a^2", "b^2", "c^4", "bc^-1ac", "abcabac^-1b"])
}

fn z2_families() -> Check {
    let doc = plane((1, 1));
    let r = present(&doc, &PresentOptions::default()).map_err(err)?;
    ensure!(r.presentation.relators.iter().map(Word::len).collect::<Vec<_>>() == vec![3, 3], "{:?}", r.relators);
    equivalent_to(&r, &doc, &["abc^-1", "bac^-1"])?;
    for n in 2..=4 {
        let doc = plane((n, n));
        let r = present(&doc, &PresentOptions::default()).map_err(err)?;
        equivalent_to(&r, &doc, &["[a,b]", &format!("(ab)^{n}c^-1")])?;
        let group = MatrixGroup::new(&doc.ops()).map_err(err)?;
        let girth = odd_girth(&group, 2, 20).map_err(err)?;
        ensure!(girth == (2 * n + 1) as usize, "odd girth {girth} for n = {n}");
    }
    Ok("n = 1..4".into())
}

fn elv_harvest() -> Check {
    let doc = document("elv").map_err(err)?;
    let group = MatrixGroup::new(&doc.ops()).map_err(err)?;
    let h = shortest_translation_words(&group, &HarvestOptions { min_radius: 6, ..Default::default() }).map_err(err)?;
    let v = |a: Rational, b: Rational, c: Rational| vec![a, b, c];
    let want = vec![
        (3, v(frac(3, 2), frac(-3, 2), frac(3, 2))),
        (4, v(int(0), int(0), int(2))),
        (4, v(int(0), int(2), int(-1))),
        (4, v(int(1), int(0), int(2))),
    ];
    let got: Vec<(usize, Vec<Rational>)> = h.words().iter().map(|t| (t.word.len(), t.vector.clone())).collect();
    ensure!(got == want, "harvest {got:?}");
    let first = h.first_appearance(&v(frac(-1, 2), frac(1, 2), frac(1, 2)));
    ensure!(first == Some(6), "first appearance {first:?}");
    Ok("4 words, (-1/2,1/2,1/2) at 6".into())
}

fn gis_census() -> Check {
    let doc = document("i42d_gis").map_err(err)?;
    let e = build_extension_data(&doc, &PresentOptions::default()).map_err(err)?;
    let p = Presentation::parse(&doc.names(), &["c^4", "bc^-1ac", "abcabac^-1b"]).map_err(err)?;
    let census = relator_ring_census(&p, &e.group, e.point_order(), 2).map_err(err)?;
    let counts: Vec<usize> = census.iter().map(|c| c.per_vertex).collect();
    ensure!(counts == vec![1, 2, 4], "census {counts:?}");
    let g = from_cayley(&doc).map_err(err)?.graph;
    let symbol = schlafli_symbol(&g, &RingOptions::up_to(8)).map_err(err)?.to_string();
    ensure!(symbol == "4^3.8^4", "symbol {symbol}");
    Ok(format!("census {counts:?}, {symbol}"))
}

fn square_geodesics() -> Check {
    let sql = catalog_load("sql").map_err(err)?;
    let group = MatrixGroup::new(&[
        AffineIsometry::from_translation(vec![int(1), int(0)]),
        AffineIsometry::from_translation(vec![int(0), int(1)]),
    ])
    .map_err(err)?;
    for (v, want) in [([4i64, 12], (16usize, 1820u128)), ([5, 12], (17, 6188))] {
        let net = sql.geodesics(0, &Node::new(0, v.to_vec()), 40).map_err(err)?;
        let target = group.from_isometry(&AffineIsometry::from_translation(v.iter().map(|&x| int(x)).collect())).map_err(err)?;
        let words = geodesics(&group, &target, 40, None).map_err(err)?;
        let oracle = lattice_geodesic_count(&v);
        ensure!(net == want, "net count {net:?} for {v:?}");
        ensure!((words.length, words.count) == want, "word count {:?}", (words.length, words.count));
        ensure!(oracle == Some(want.1), "oracle {oracle:?}");
    }
    Ok("1820, 6188".into())
}

fn ths_quotients() -> Check {
    let ths = catalog_load("ths").map_err(err)?;
    let cases = [
        (["5/2", "5/2", "1/2"], 424, "10^10.12^3"),
        (["2", "2", "1"], 445, "10^10.12^6"),
        (["1/2", "1/2", "-3/2"], 460, "10^10.12^9"),
    ];
    let mut out = Vec::new();
    for (v, td, symbol) in cases {
        let v: Vec<Rational> = v.iter().map(|x| parse_rational(x)).collect::<Result<_, _>>().map_err(err)?;
        let iv = ths.to_lattice_coordinates(&v).map_err(err)?;
        let q = quotient_by_sublattice(&ths, &[iv], false).map_err(err)?;
        let got: Vec<usize> = (0..q.vertex_count()).map(|b| q.topological_density(b, 10)).collect();
        ensure!(got.iter().all(|&x| x == td), "TD10 {got:?}, expected {td}");
        let s = schlafli_symbol(&q, &RingOptions::up_to(12)).map_err(err)?.to_string();
        ensure!(s == symbol, "symbol {s}, expected {symbol}");
        out.push(format!("{td} {s}"));
    }
    Ok(out.join(", "))
}

fn pnna_pair() -> Check {
    let acd = from_cayley(&document("pnna_acd").map_err(err)?).map_err(err)?.graph;
    let bcd = from_cayley(&document("pnna_bcd").map_err(err)?).map_err(err)?.graph;
    let (a, b) = (acd.coordination_sequence(0, 20), bcd.coordination_sequence(0, 20));
    ensure!(a[..20] == b[..20], "sequences differ before radius 20");
    ensure!(a[20] != b[20], "sequences agree at radius 20");
    let options = RingOptions::up_to(14);
    let (sa, sb) = (
        schlafli_symbol(&acd, &options).map_err(err)?.to_string(),
        schlafli_symbol(&bcd, &options).map_err(err)?.to_string(),
    );
    ensure!(sa == "10^5.14^14" && sb == sa, "symbols {sa} / {sb}");
    Ok(format!("split at 20 ({} vs {}), {sa}", a[20], b[20]))
}

fn ndia() -> Check {
    let mut out = Vec::new();
    for n in 2..=4usize {
        let doc = ndia_generators(n).map_err(err)?;
        let r = present(&doc, &PresentOptions::default()).map_err(err)?;
        let lengths: Vec<usize> = r.presentation.relators.iter().map(Word::len).collect();
        let involutions = r.presentation.relators.iter().filter(|w| w.len() == 2 && w.letters()[0] == w.letters()[1]).count();
        let sixes = lengths.iter().filter(|&&l| l == 6).count();
        ensure!(
            involutions == n + 1 && sixes == n * (n - 1) / 2 && lengths.len() == involutions + sixes,
            "n = {n}: {:?}",
            r.relators
        );
        ensure!(r.verification.all_pass(), "n = {n}: verification {:?}", r.verification);
        let g = from_cayley(&doc).map_err(err)?.graph;
        let symbol = schlafli_symbol(&g, &RingOptions::up_to(6)).map_err(err)?;
        let six = symbol.counts.get(&6).copied().unwrap_or(0);
        ensure!(six == n * (n - 1) * (n + 1) / 2, "n = {n}: {symbol}");
        out.push(format!("6^{six}"));
    }
    Ok(out.join(" "))
}

/// Sphere sizes of the coset graph of `p` with `extra` relators, from coset 0.
fn coset_spheres(p: &Presentation, extra: &[Word], radius: usize) -> Option<Vec<usize>> {
    let Enumeration::Complete(t) = coset_enumerate(&p.with_extra(extra), &[], 2_000_000) else { return None };
    let mut dist = vec![usize::MAX; t.index()];
    dist[0] = 0;
    let mut frontier = vec![0];
    let mut out = vec![1];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &c in &frontier {
            for code in 0..2 * p.generator_count() {
                let x = t.act(c, code);
                if dist[x] == usize::MAX {
                    dist[x] = d;
                    next.push(x);
                }
            }
        }
        out.push(next.len());
        frontier = next;
    }
    Some(out)
}

fn property_suites() -> Check {
    const RADIUS: usize = 3;
    const M: usize = 8;
    let mut notes = Vec::new();
    for name in document_names() {
        let doc = document(name).map_err(err)?;
        let report = present(&doc, &PresentOptions::default()).map_err(err)?;
        ensure!(report.verification.identity, "{name}: a relator is not the identity");
        let again = present(&doc, &PresentOptions::default()).map_err(err)?;
        ensure!(again.relators == report.relators, "{name}: pipeline is not deterministic");
        let e = build_extension_data(&doc, &PresentOptions::default()).map_err(err)?;
        let powers: Vec<Word> = report.basis.iter().map(|y| y.pow(M as i64)).collect();
        let quotient = coset_spheres(&report.presentation, &powers, RADIUS).ok_or(format!("{name}: G/{M}T overflowed"))?;
        let cover = coordination_sequence(&e.group, RADIUS).map_err(err)?;
        ensure!(quotient == cover, "{name}: G/{M}T spheres {quotient:?} vs {cover:?}");
    }
    notes.push("relators hold, G/mT spheres match".to_string());
    let mut rejected = 0;
    for name in catalog_names() {
        let g = catalog_load(name).map_err(err)?;
        for v in 0..g.vertex_count() {
            let a = strong_rings(&g, v, &RingOptions { max_size: 10, widen: false, witnesses: true }).map_err(err)?;
            ensure!(a.witnesses_hold(&g), "{name}: witness failed at vertex {v}");
            ensure!(a.rejected.iter().all(|r| !r.witness.is_empty()), "{name}: rejected cycle without witness");
            rejected += a.rejected.len();
        }
    }
    notes.push(format!("{rejected} witnesses"));
    for entry in reference_corpus().map_err(err)? {
        let e = build_extension_data(&entry.document, &PresentOptions::default()).map_err(err)?;
        // Pad with consequences so there is something to remove.
        let mut padded = entry.reference.relators.clone();
        for (i, r) in entry.reference.relators.iter().enumerate() {
            let s = &entry.reference.relators[(i + 1) % entry.reference.relators.len()];
            padded.push(r.concat(s));
            padded.push(r.rotate(1));
        }
        let before = Presentation::new(entry.reference.names.clone(), padded);
        let first = tietze_simplify(&before, DEFAULT_BUDGET);
        let second = tietze_simplify(&before, DEFAULT_BUDGET);
        ensure!(first == second, "{}: Tietze is not deterministic", entry.name);
        let after = &first.presentation;
        ensure!(
            after.total_length() <= before.total_length() && after.relators.len() <= before.relators.len(),
            "{}: simplification grew the presentation",
            entry.name
        );
        for m in [2usize, 3] {
            let powers = e.lattice_powers(m);
            let (x, y) = (group_order(&before.with_extra(&powers), 1_000_000), group_order(&after.with_extra(&powers), 1_000_000));
            ensure!(x.is_some() && x == y, "{}: order {x:?} -> {y:?} at m = {m}", entry.name);
        }
    }
    notes.push("Tietze preserves orders".into());
    Ok(notes.join("; "))
}

fn corpus_equivalence() -> Check {
    let mut out = Vec::new();
    for entry in reference_corpus().map_err(err)? {
        if !["hcb p6", "dia P-1", "dia P2_12_12_1", "GIS I4_1/a"].contains(&entry.name.as_str()) {
            continue;
        }
        let r = present(&entry.document, &PresentOptions::default()).map_err(err)?;
        let texts = entry.reference.relator_texts();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        equivalent_to(&r, &entry.document, &refs).map_err(|m| format!("{}: {m}", entry.name))?;
        out.push(entry.name);
    }
    ensure!(out.len() == 4, "missing corpus entries, found {out:?}");
    Ok(out.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("I-42d pipeline", 10, i42d_pipeline),
        ("Z2 families", 5, z2_families),
        ("elv translation words", 30, elv_harvest),
        ("GIS ring census", 30, gis_census),
        ("square-lattice geodesics", 5, square_geodesics),
        ("ths quotients", 120, ths_quotients),
        ("Pnna pair", 120, pnna_pair),
        ("n-dia", 60, ndia),
        ("property suites", 600, property_suites),
        ("corpus equivalence", 600, corpus_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {elapsed:.1?}, limit {limit} s")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({elapsed:.2?}): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
