use std::path::PathBuf;
use std::process::{Command, Output};

fn crystpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystpres")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("crystpres-cli-{}-{tag}.json", std::process::id()))
}

#[test]
fn present_i42d_verifies_and_reports() {
    let path = report_path("present");
    let o = crystpres(&["present", "--input", "i42d_gis", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("m=2 order 64 pass; m=3 order 216 pass"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["point_group_order"], 8);
    assert_eq!(report["options"]["verify_m"], serde_json::json!([2, 3]));
    std::fs::remove_file(path).ok();
}

#[test]
fn reports_are_byte_stable() {
    let (a, b) = (report_path("stable-a"), report_path("stable-b"));
    for (p, threads) in [(&a, "1"), (&b, "4")] {
        let o = crystpres(&["present", "--input", "p6_hcb", "--threads", threads, "--report", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

#[test]
fn trivial_one_dimensional_group_has_no_relators() {
    let dir = std::env::temp_dir().join(format!("crystpres-cli-{}-z1.json", std::process::id()));
    std::fs::write(&dir, r#"{"dimension":1,"generators":[{"name":"a","xyz":"x+1"}]}"#).unwrap();
    let o = crystpres(&["present", "--input", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("input: 0 relators"), "{}", stdout(&o));
    assert!(stdout(&o).contains("lattice rank 1"));
    std::fs::remove_file(dir).ok();
}

#[test]
fn pnna_coordination_sequences_split_at_twenty() {
    let a = stdout(&crystpres(&["cseq", "--input", "pnna_acd", "--radius", "20"]));
    let b = stdout(&crystpres(&["cseq", "--input", "pnna_bcd", "--radius", "20"]));
    let seq = |s: &str| s.lines().next().unwrap().split(' ').map(|x| x.parse::<usize>().unwrap()).collect::<Vec<_>>();
    let (a, b) = (seq(&a), seq(&b));
    assert_eq!(a[..20], b[..20]);
    assert_ne!(a[20], b[20]);
}

#[test]
fn rings_geodesics_and_quotient() {
    assert_eq!(stdout(&crystpres(&["rings", "--net", "pcu", "--max", "6"])), "4^12\n");
    assert_eq!(stdout(&crystpres(&["geodesics", "--net", "sql", "--target", "4,12"])), "length 16, 1820 geodesics\n");
    let q = stdout(&crystpres(&["quotient", "--net", "ths", "--vector", "1/2,1/2,-3/2", "--max", "12"]));
    assert!(q.contains("TD10 460 460 460 460"), "{q}");
    assert!(q.ends_with("10^10.12^9\n"), "{q}");
}

#[test]
fn catalog_lists_and_prints() {
    let list = stdout(&crystpres(&["catalog"]));
    assert!(list.lines().any(|l| l.starts_with("pcu\trank 3")));
    let pcu = stdout(&crystpres(&["catalog", "pcu"]));
    assert!(pcu.contains("edges\n0 0 1 0 0\n"));
}

#[test]
fn exit_codes_distinguish_failures() {
    assert_eq!(crystpres(&["present", "--input", "missing.json"]).status.code(), Some(2));
    assert_eq!(crystpres(&["rings", "--net", "nosuch"]).status.code(), Some(2));
    assert_eq!(crystpres(&["present", "--input", "p6_hcb", "--m", "1"]).status.code(), Some(2));
    // Too few relators: the finite quotients overflow.
    assert_eq!(crystpres(&["verify", "--input", "i42d_gis", "--relators", "a^2,b^2"]).status.code(), Some(3));
    // A relator that does not hold.
    assert_eq!(crystpres(&["verify", "--input", "p6_hcb", "--relators", "a^2,b^6,(ab)^3,ab"]).status.code(), Some(4));
}

#[test]
fn catalog_directory_override() {
    let dir = std::env::temp_dir().join(format!("crystpres-cli-{}-nets", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("pcu.net"), "rank 2\nvertices 1\nedges\n0 0 1 0\n0 0 0 1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_crystpres"))
        .args(["cseq", "--net", "pcu", "--radius", "2"])
        .env("CRYSTPRES_NET_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "1 4 8\nTD2 13\n");
    std::fs::remove_dir_all(dir).ok();
}
