use std::process::{Command, Output};

use motzkin_cli::{self as cli, Curve, Format, SizeList};
use motzkin_core::{FieldSpec, Matrix01};

fn motzkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motzkin"))
        .args(args)
        .env("MOTZKIN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = motzkin(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn count_of_empty_monoid() {
    assert_eq!(stdout(&["count", "0"]).lines().next(), Some("1"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&["count", "7", "--format", "json"])).unwrap();
    assert_eq!(json["size"], "113634");
    assert_eq!(json["lcell"][1], "196");
}

#[test]
fn count_enumerates_on_request() {
    assert_eq!(stdout(&["count", "4", "--enumerate"]).lines().next(), Some("323"));
}

#[test]
fn gram_prints_matrix_and_rank() {
    let out = stdout(&["gram", "3", "1"]);
    assert!(out.contains("()|  11010"));
    assert_eq!(out.lines().last(), Some("rank 5 over Q"));
    let out = stdout(&["gram", "3", "1", "--field=GF2"]);
    assert_eq!(out.lines().last(), Some("rank 5 over GF2"));
}

#[test]
fn gram_json_shape() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["gram", "4", "2", "--format", "json"])).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["k"], 2);
    assert_eq!(v["order"].as_array().unwrap().len(), 9);
    assert_eq!(v["order"][0], "()||");
    assert_eq!(v["rows"][0], "110010000");
    assert_eq!(v["rank"], 8);
}

#[test]
fn exported_matrix_feeds_rank_command() {
    let dir = std::env::temp_dir().join(format!("motzkin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g42.txt");
    stdout(&["gram", "4", "2", "--matrix", "--output", path.to_str().unwrap()]);
    let m: Matrix01 = std::fs::read_to_string(&path).unwrap().parse().unwrap();
    assert_eq!((m.rows(), m.cols()), (9, 9));
    assert_eq!(stdout(&["rank", path.to_str().unwrap()]), "rank 8 over Q\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn table_rows_and_header() {
    let csv = stdout(&["table", "4", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,k,ssdim,rank_Q,rank_GF2"));
    assert!(csv.contains("\n4,2,9,8,8\n"));
    assert_eq!(lines.count(), 15);
    let three = stdout(&["table", "2", "--fields", "Q,GF3", "--format", "csv"]);
    assert!(three.starts_with("n,k,ssdim,rank_Q,rank_GF3\n"));
}

#[test]
fn curves_have_headers() {
    let csv = stdout(&["curve", "peak-vs-n", "--n", "600", "--format", "csv"]);
    assert_eq!(csv, "n,value\n600,188\n");
    let csv = stdout(&["curve", "ssdim-vs-k", "--n", "3"]);
    assert_eq!(csv, "k,value\n0,4\n1,5\n2,3\n3,1\n");
    let csv = stdout(&["curve", "nthroot", "--n", "100..=300:100"]);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("n,value,reference\n100,2.52"));
}

#[test]
fn size_lists() {
    assert_eq!("1..4".parse::<SizeList>(), Ok(SizeList(vec![1, 2, 3])));
    assert_eq!("1..=9:4".parse::<SizeList>(), Ok(SizeList(vec![1, 5, 9])));
    assert_eq!("7,3".parse::<SizeList>(), Ok(SizeList(vec![7, 3])));
    assert!("1..=9:0".parse::<SizeList>().is_err());
    assert!("x".parse::<SizeList>().is_err());
}

#[test]
fn curve_needs_single_n_for_per_n_series() {
    assert!(cli::curve(Curve::SsdimVsK, &[3, 4], Format::Csv).is_err());
}

#[test]
fn guards_exit_with_three() {
    for args in [
        &["connected", "7"][..],
        &["cells", "9"],
        &["count", "9", "--enumerate"],
        &["gram", "14", "1"],
    ] {
        let out = motzkin(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    }
}

#[test]
fn bad_arguments_exit_with_two() {
    for args in [
        &["gram", "3", "4"][..],
        &["gram", "3", "1", "--field=GF4"],
        &["gram", "x", "1"],
        &["table", "3", "--fields", "R"],
        &["stickel", "1"],
    ] {
        let out = motzkin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_repeatable() {
    for args in [
        &["stickel", "--seed", "4", "--format", "json"][..],
        &["cells", "3"],
        &["submatrix", "5", "1", "--format", "json"],
        &["connected", "3"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn stickel_transcript() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["stickel", "--trials", "50", "--format", "json"])).unwrap();
    assert_eq!(v["transcript"]["keys_agree"], true);
    assert_eq!(v["transcript"]["key_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["statistics"]["agreements"], 50);
    assert!(v["transcript"].get("private").is_none());
}

#[test]
fn connectedness_report() {
    let out = stdout(&["connected", "4"]);
    assert!(out.contains("well-connected: true"));
}

#[test]
fn cells_grid_marks_idempotents() {
    let out = cli::cells(3, false, Format::Pretty).unwrap();
    assert!(out.contains("J_1 : 5 x 5, 11 idempotents"));
    let csv = cli::cells(2, false, Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4 + 4 + 1);
}

#[test]
fn submatrix_reports_bound() {
    let out = cli::submatrix(5, 1, FieldSpec::Rationals, Format::Pretty).unwrap();
    assert!(out.contains("rank 9 over Q; bound 9"));
}
