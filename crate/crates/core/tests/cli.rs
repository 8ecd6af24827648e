use std::process::{Command, Output};

fn gmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmk")).args(args).output().expect("gmk runs")
}

fn gmk_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmk"))
        .args(args)
        .env("GMK_THREADS", threads)
        .output()
        .expect("gmk runs")
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> &str {
    std::str::from_utf8(&o.stderr).unwrap()
}

#[test]
fn growth_table_example() {
    let o = gmk(&["growth", "--m", "2", "--k", "2", "--n-max", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o)).unwrap();
    assert_eq!(v["gr"][3], 19);
}

#[test]
fn permrep_verify_exits_zero() {
    let o = gmk(&["permrep", "--m", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"relators_ok\": true"));
}

#[test]
fn base_vh_failure_exits_one_with_certificate() {
    let o = gmk(&["special", "--m", "3", "--base", "--assert-vh"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o)).unwrap();
    let cert = v["vh"]["certificate"].as_array().unwrap();
    assert_eq!(cert.len() % 2, 1);
    let o = gmk(&["special", "--m", "3", "--base"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_name_the_flag() {
    for (args, flag) in [
        (&["growth", "--m", "7", "--k", "1", "--n-max", "3"][..], "--m"),
        (&["growth", "--m", "2", "--k", "3", "--n-max", "3"][..], "--k"),
        (&["growth", "--m", "2", "--k", "2", "--n-max", "41"][..], "--n-max"),
        (&["growth", "--m", "2", "--k", "2", "--n-max", "4", "--format", "dot"][..], "--format"),
        (&["special", "--m", "2", "--base", "--cover"][..], "--cover"),
        (&["reproduce", "--only", "nothing"][..], "--only"),
    ] {
        let o = gmk(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(gmk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gmk(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("gmk_cli_out_{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = gmk(&["abelian", "--m", "2", "--k", "1", "--n", "4", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let direct = gmk(&["abelian", "--m", "2", "--k", "1", "--n", "4"]);
    assert_eq!(written, stdout(&direct));
}

#[test]
fn output_independent_of_thread_count() {
    for args in [
        &["growth", "--m", "4", "--k", "4", "--n-max", "16", "--format", "csv"][..],
        &["cover", "--m", "2", "--emit", "dot"][..],
        &["special", "--m", "4"][..],
        &["reproduce", "--only", "walls"][..],
    ] {
        let one = gmk_threads(args, "1");
        let many = gmk_threads(args, "4");
        let auto = gmk_threads(args, "0");
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(one.stdout, auto.stdout, "{args:?}");
    }
}

#[test]
fn reproduce_filter_prints_wall_lines_only() {
    let o = gmk(&["reproduce", "--only", "walls"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<&str> = stdout(&o).lines().collect();
    assert!(lines[0].starts_with("PASS  8 "));
    assert_eq!(lines.last().unwrap(), &"1/1 criteria passed");
}

#[test]
fn dot_output_sorted_by_vertex_then_label() {
    let o = gmk(&["cover", "--m", "1", "--emit", "dot"]);
    let edges: Vec<(String, String)> = stdout(&o)
        .lines()
        .filter(|l| l.contains("->"))
        .map(|l| {
            let src = l.trim().split('"').nth(1).unwrap().to_string();
            let label = l.split("label=\"").nth(1).unwrap().split('"').next().unwrap().to_string();
            (src, label)
        })
        .collect();
    assert_eq!(edges.len(), 24);
    let mut sorted = edges.clone();
    sorted.sort();
    assert_eq!(edges, sorted);
}

#[test]
fn dehn_and_comb_audit() {
    let o = gmk(&["dehn", "--m", "1", "--k", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o)).unwrap();
    assert_eq!(v["word_length"], 4 * 2 + 4 * 2 + 2 * 2);
    assert_eq!(v["filling_exponent"], 3);
    let o = gmk(&["comb-audit", "--m", "1", "--k", "1", "--radius", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = gmk(&["comb-audit", "--m", "2", "--k", "2", "--radius", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("guard"));
}
