use std::path::{Path, PathBuf};
use std::process::Command;

use homcount::sigstruct::are_isomorphic;
use homcount::sigstruct::disjoint_union;
use homcount::sigstruct::graphs::{complete, cycle, digraph, discrete};
use homcount::Structure;
use homcount_cli::formats::{parse_one_structure, write_structure};
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("homcount").chain(args.iter().copied());
    let code = homcount_cli::run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn structure(dir: &TempDir, name: &str, s: &Structure) -> String {
    file(dir, &format!("{name}.struct"), &write_structure(name, s))
        .to_str()
        .unwrap()
        .to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_prints_one_integer() {
    let dir = TempDir::new().unwrap();
    let (c, a) = (
        structure(&dir, "k3", &complete(3)),
        structure(&dir, "k4", &complete(4)),
    );
    let r = run(&["count", "--class", "hom", &c, &a]);
    assert_eq!((r.code, r.out.as_str()), (0, "24\n"));
    let r = run(&["count", "--class", "surjection", &a, &c]);
    assert_eq!((r.code, r.out.as_str()), (0, "0\n"));
    let r = run(&["count", "--limit", "2", &c, &a]);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "24");
    assert!(lines[1].starts_with("map\t"));
    assert_eq!(lines[1].split('\t').count(), 4);
}

#[test]
fn distinguish_c6_from_two_triangles() {
    let dir = TempDir::new().unwrap();
    let c6 = structure(&dir, "c6", &cycle(6));
    let tt = structure(&dir, "2c3", &disjoint_union(&cycle(3), &cycle(3)).unwrap());
    let r = run(&["distinguish", "--budget", "3", &c6, &tt]);
    assert_eq!(r.code, 1, "{}", r.err);
    let block: String = r
        .out
        .lines()
        .take_while(|l| !l.starts_with("counts"))
        .map(|l| format!("{l}\n"))
        .collect();
    let witness = parse_one_structure(&block).unwrap();
    assert!(are_isomorphic(&witness.structure, &complete(3)).unwrap());
    assert!(r.out.contains("counts\t0\t12\n"));
    // Graphs are equal on all trees, so a budget-2 search finds nothing.
    let r = run(&["distinguish", "--budget", "2", &c6, &tt]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("profiles-equal-within-budget\t"));
}

#[test]
fn distinguish_on_the_left_and_isomorphic_inputs() {
    let dir = TempDir::new().unwrap();
    let a = structure(&dir, "a", &digraph(3, &[(0, 1), (1, 2)]));
    let b = structure(&dir, "b", &digraph(3, &[(2, 1), (1, 0)]));
    let c = structure(&dir, "c", &digraph(3, &[(0, 1), (0, 2)]));
    for side in ["left", "right"] {
        let r = run(&["distinguish", "--side", side, "--budget", "3", &a, &b]);
        assert_eq!((r.code, r.out.lines().count()), (0, 1), "{side}");
        let r = run(&[
            "distinguish",
            "--side",
            side,
            "--budget",
            "3",
            "--system",
            "e-sm",
            &a,
            &c,
        ]);
        assert_eq!(r.code, 1, "{side}");
    }
    assert_eq!(run(&["iso", &a, &b]).out, "isomorphic\n");
    let r = run(&["iso", &a, &c]);
    assert_eq!((r.code, r.out.as_str()), (1, "not-isomorphic\n"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = file(
        &dir,
        "bad.struct",
        "signature E/2\nstructure x size 2\nE: (0,5)\nend\n",
    );
    let good = structure(&dir, "good", &discrete(1));
    let r = run(&["count", p(&bad), &good]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("line 3"), "{}", r.err);
    assert_eq!(run(&["count", "--system", "sem", &good, &good]).code, 2);
    assert_eq!(run(&["count", &good]).code, 2);
    assert_eq!(run(&["count", &good, "/nonexistent/x.struct"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    let sig2 = file(&dir, "r.struct", "signature R/3\nstructure r size 1\nend\n");
    assert_eq!(run(&["count", p(&sig2), &good]).code, 2);
}

#[test]
fn cap_exceeded_exits_3() {
    let dir = TempDir::new().unwrap();
    let a = structure(&dir, "a", &cycle(3));
    let r = run(&["--cap", "5", "profile", "--budget", "3", &a]);
    assert_eq!(r.code, 3, "{}", r.err);
    assert!(r.err.contains("limit"));
    let r = run(&["profile", "--budget", "2", "--family", "all", &a]);
    assert_eq!(r.code, 0);
    // 1 + 2 + 10 structures on at most two elements.
    assert_eq!(r.out.lines().count(), 13);
    let first = r.out.lines().next().unwrap();
    assert_eq!(first, "00000000ff\t1");
}

#[test]
fn env_var_sets_the_cap() {
    let dir = TempDir::new().unwrap();
    let a = structure(&dir, "a", &cycle(3));
    let bin = env!("CARGO_BIN_EXE_homcount");
    let status = Command::new(bin)
        .args(["profile", "--budget", "3", "--family", "all", &a])
        .env("HOMCOUNT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
    let ok = Command::new(bin)
        .args(["profile", "--budget", "1", &a])
        .env("HOMCOUNT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn mobius_and_kernel_tables() {
    let dir = TempDir::new().unwrap();
    let c = structure(&dir, "c", &digraph(2, &[(0, 1)]));
    let a = structure(&dir, "a", &complete(3));
    let r = run(&["mobius", &c, &a]);
    assert_eq!(r.code, 0, "{}", r.err);
    let elements = r.out.lines().filter(|l| l.starts_with("element\t")).count();
    assert!(elements >= 2);
    assert!(r.out.lines().any(|l| l.starts_with("edge\t")));
    let mono = run(&["count", "--class", "mono", &c, &a]).out;
    assert_eq!(
        r.out.lines().last().unwrap(),
        format!("embeddings\t{}", mono.trim())
    );

    let r = run(&["kernel", &c, &a]);
    let hom = run(&["count", &c, &a]).out;
    assert!(r.out.contains(&format!("total\t{}", hom.trim())));
    assert!(r.out.ends_with(&format!("hom\t{}", hom)));
    let rows: Vec<&str> = r
        .out
        .lines()
        .filter(|l| !l.starts_with("total") && !l.starts_with("hom"))
        .collect();
    assert_eq!(rows.len(), elements);
}

#[test]
fn stirling_rows() {
    let r = run(&["stirling", "3", "--a", "2"]);
    assert_eq!(
        r.out,
        "0\t0\t1\t0\n1\t1\t2\t2\n2\t3\t2\t6\n3\t1\t0\t0\ntotal\t8\npower\t8\n"
    );
    assert_eq!(run(&["stirling", "5", "2"]).out, "15\n");
    assert_eq!(run(&["stirling", "2"]).out, "0\t0\n1\t1\n2\t1\n");
}

#[test]
fn treewidth_and_decomposition() {
    let dir = TempDir::new().unwrap();
    let k4 = structure(&dir, "k4", &complete(4));
    assert_eq!(run(&["treewidth", &k4]).out, "3\n");
    let c6 = structure(&dir, "c6", &cycle(6));
    let r = run(&["treewidth", "--decomposition", &c6]);
    assert!(r.out.starts_with("2\n"));
    let bags = r.out.lines().filter(|l| l.starts_with("bag\t")).count();
    let edges = r.out.lines().filter(|l| l.starts_with("edge\t")).count();
    assert_eq!(bags, edges + 1);
}

#[test]
fn counting_logic_verdicts() {
    let dir = TempDir::new().unwrap();
    let c6 = structure(&dir, "c6", &cycle(6));
    let tt = structure(&dir, "2c3", &disjoint_union(&cycle(3), &cycle(3)).unwrap());
    let r = run(&["ck", "--k", "2", "--budget", "6", &c6, &tt]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("hom-profile\tequal\t"));
    assert!(r.out.ends_with("wl-oracle\tequal\n"));
    let r = run(&["ck", "--k", "3", "--budget", "3", &c6, &tt]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("counts\t0\t12\n"));
    assert!(r.out.ends_with("wl-oracle\tdistinguished\n"));
}

#[test]
fn tree_commands() {
    let dir = TempDir::new().unwrap();
    let chain = file(&dir, "chain.tree", "tree c size 3 parents - 0 1 end\n");
    let cherry = file(&dir, "cherry.tree", "tree y size 3 parents - 0 0 end\n");
    assert_eq!(run(&["trees", "count", p(&chain), p(&cherry)]).out, "0\n");
    assert_eq!(run(&["trees", "count", p(&cherry), p(&cherry)]).out, "4\n");
    let r = run(&[
        "trees",
        "distinguish",
        "--budget",
        "3",
        p(&chain),
        p(&cherry),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("tree witness size "));
    let r = run(&["trees", "distinguish", p(&cherry), p(&cherry)]);
    assert_eq!(r.code, 0);
    let spec = file(
        &dir,
        "bin.rat",
        "rational b states 1 start 0 children 0 0 end\n",
    );
    let r = run(&["trees", "truncate", "--depth", "2", p(&spec)]);
    assert_eq!(r.out, "tree depth2 size 7 parents - 0 0 1 1 2 2 end\n");
}

#[test]
fn tower_commands() {
    let dir = TempDir::new().unwrap();
    let towers = file(
        &dir,
        "towers.grp",
        "tower z2 levels Z/2 Z/4 maps 0 1 0 1 end\n\
         tower v levels Z/2 Z/4xZ/2 maps 0 1 0 1 0 1 0 1 end\n",
    );
    let r = run(&["tower", "count", "--family", "Z/2,Z/4", p(&towers)]);
    assert_eq!(
        r.out,
        "z2\tZ/2\t2\tstabilized\t2,2\n\
         z2\tZ/4\t4\tunstable\t2,4\n\
         v\tZ/2\t4\tunstable\t2,4\n\
         v\tZ/4\t8\tunstable\t2,8\n"
    );
    let r = run(&["tower", "distinguish", "--family", "Z/2", p(&towers)]);
    assert_eq!(r.code, 1, "{}", r.err);
    assert!(r.out.contains("counts\t2\t4\n"));
    assert!(r.out.starts_with("unstable\tZ/2\n"));
    let r = run(&["tower", "surjections", "--family", "Z/2xZ/2", p(&towers)]);
    assert_eq!(r.out, "z2\tZ/2xZ/2\tfalse\nv\tZ/2xZ/2\ttrue\n");
    let r = run(&["tower", "count", "--family", "Q8", p(&towers)]);
    assert_eq!(r.code, 2);
}

#[test]
fn selftest_smoke_passes() {
    let r = run(&["selftest", "--level", "smoke"]);
    assert_eq!(r.code, 0, "{}", r.out);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.iter().all(|l| l.starts_with("PASS\t")));
    assert_eq!(run(&["selftest", "--only", "9"]).code, 2);
}

#[test]
fn help_names_the_statement() {
    for (args, needle) in [
        (vec!["distinguish", "--help"], "isomorphic if and only if"),
        (vec!["mobius", "--help"], "Möbius inversion"),
        (vec!["kernel", "--help"], "generic"),
        (vec!["stirling", "--help"], "S(n, m)"),
        (vec!["ck", "--help"], "counting logic"),
        (vec!["trees", "distinguish", "--help"], "tree morphisms"),
        (
            vec!["tower", "distinguish", "--help"],
            "continuous homomorphisms",
        ),
        (vec!["profile", "--help"], "Lovász"),
    ] {
        let r = run(&args);
        assert_eq!(r.code, 0);
        assert!(r.out.contains(needle), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let c = structure(&dir, "c", &digraph(3, &[(0, 1), (1, 2), (2, 0)]));
    for args in [
        vec!["mobius", "--system", "e-sm", c.as_str()],
        vec!["profile", "--side", "left", c.as_str()],
    ] {
        assert_eq!(run(&args).out, run(&args).out);
    }
}
