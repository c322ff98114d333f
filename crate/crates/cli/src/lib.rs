//! Command implementations behind the `motzkin` binary.
//!
//! Every command renders to a `String` so output is assembled in one
//! place and is byte-identical for identical arguments.

use std::fmt::Write as _;

use serde_json::json;
use thiserror::Error;

use motzkin_core::cells::{self, CellError};
use motzkin_core::combinatorics::{self as comb, BigCount};
use motzkin_core::diagram::{enumerate_monoid, DiagramError};
use motzkin_core::linalg::{self, LinalgError};
use motzkin_core::stickel::{self, ProtocolError, StickelParams};
use motzkin_core::{FieldSpec, Matrix01};

/// Largest `n` whose monoid is enumerated element by element.
pub const MAX_ENUMERATION_N: usize = 8;
/// Largest Gram dimension ranked over the rationals.
pub const MAX_RATIONAL_DIMENSION: usize = 6000;
/// Largest `n` for the full multiplication-table scan.
pub const MAX_CONNECTED_N: usize = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0} (pass --force to run anyway)")]
    TooLarge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::TooLarge(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        }
    )*};
}
invalid_from!(CellError, DiagramError, LinalgError, ProtocolError, comb::CombinatoricsError);

pub type CliResult = Result<String, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Curve {
    SsdimVsK,
    SummandVsT,
    PeakVsN,
    Nthroot,
    Ratios,
}

fn guard(force: bool, ok: bool, what: impl FnOnce() -> String) -> Result<(), CliError> {
    if force || ok {
        Ok(())
    } else {
        Err(CliError::TooLarge(what()))
    }
}

fn json_text(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serialisable");
    s.push('\n');
    s
}

fn check_k(n: usize, k: usize) -> Result<(), CliError> {
    if k > n {
        return Err(CliError::Invalid(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// Monoid size and per-cell sizes from the counting formulas. With
/// `enumerate`, the monoid is also listed and its size cross-checked.
pub fn count(n: usize, enumerate: bool, force: bool, format: Format) -> CliResult {
    let lcells: Vec<BigCount> = (0..=n).map(|k| comb::lcell_size(n, k)).collect();
    let total = comb::motzkin_number(2 * n);
    if enumerate {
        guard(force, n <= MAX_ENUMERATION_N, || {
            format!("enumerating Mo_{n} is refused above n = {MAX_ENUMERATION_N}")
        })?;
        let listed = enumerate_monoid(n).len();
        if BigCount::from(listed) != total {
            return Err(CliError::Invalid(format!(
                "enumeration found {listed} elements, formula gives {total}"
            )));
        }
    }
    let jcells: Vec<BigCount> = lcells.iter().map(|l| l * l).collect();
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("n,k,lcell,jcell\n");
            for k in 0..=n {
                writeln!(s, "{n},{k},{},{}", lcells[k], jcells[k]).unwrap();
            }
            s
        }
        Format::Json => json_text(json!({
            "n": n,
            "size": total.to_string(),
            "lcell": comb::decimal_strings(&lcells),
            "jcell": comb::decimal_strings(&jcells),
        })),
        Format::Pretty => {
            let mut s = format!("{total}\n");
            for k in 0..=n {
                writeln!(s, "  k={k}: {} L-cells, J-cell of {}", lcells[k], jcells[k]).unwrap();
            }
            s
        }
    })
}

/// Every J-cell laid out as a top-by-bottom grid, idempotents marked `*`.
pub fn cells(n: usize, force: bool, format: Format) -> CliResult {
    guard(force, n <= MAX_ENUMERATION_N, || {
        format!("listing the cells of Mo_{n} is refused above n = {MAX_ENUMERATION_N}")
    })?;
    let grams: Vec<cells::GramMatrix> = (0..=n)
        .map(|k| cells::gram_matrix(n, k))
        .collect::<Result<_, _>>()?;
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("n,k,top,bottom,idempotent\n");
            for g in &grams {
                for (i, top) in g.rows.iter().enumerate() {
                    for (j, bottom) in g.cols.iter().enumerate() {
                        writeln!(s, "{n},{},{top},{bottom},{}", g.k, g.entries.get(i, j) as u8).unwrap();
                    }
                }
            }
            s
        }
        Format::Json => json_text(json!({
            "n": n,
            "cells": grams.iter().map(|g| json!({
                "k": g.k,
                "halves": g.rows.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
                "idempotents": g.entries.count_ones(),
                "grid": (0..g.entries.rows()).map(|i| g.entries.row_string(i)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Pretty => {
            let mut s = String::new();
            for g in &grams {
                writeln!(
                    s,
                    "J_{} : {} x {}, {} idempotents (rows: top, columns: bottom)",
                    g.k,
                    g.rows.len(),
                    g.cols.len(),
                    g.entries.count_ones()
                )
                .unwrap();
                writeln!(s, "{:n$}  {}", "", g.cols.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(" ")).unwrap();
                for (i, top) in g.rows.iter().enumerate() {
                    let marks: Vec<String> = (0..g.cols.len())
                        .map(|j| format!("{:^n$}", if g.entries.get(i, j) { '*' } else { '.' }))
                        .collect();
                    writeln!(s, "{top}  {}", marks.join(" ").trim_end()).unwrap();
                }
                s.push('\n');
            }
            s
        }
    })
}

/// Gram matrix of `J_k` and its rank. `matrix_only` emits just the matrix
/// in the `rows cols` text format.
pub fn gram(n: usize, k: usize, field: FieldSpec, matrix_only: bool, force: bool, format: Format) -> CliResult {
    check_k(n, k)?;
    let dim = comb::lcell_size(n, k);
    guard(
        force,
        field != FieldSpec::Rationals || dim <= BigCount::from(MAX_RATIONAL_DIMENSION),
        || format!("Gram dimension {dim} exceeds {MAX_RATIONAL_DIMENSION} over Q"),
    )?;
    let g = cells::gram_matrix(n, k)?;
    if matrix_only {
        return Ok(g.entries.to_string());
    }
    let rank = g.rank(field)?;
    Ok(match format {
        Format::Json => {
            let mut v = g.to_json();
            v["field"] = json!(field.to_string());
            v["rank"] = json!(rank);
            json_text(v)
        }
        Format::Csv => {
            let mut s = String::from("top");
            for h in &g.cols {
                write!(s, ",{h}").unwrap();
            }
            s.push('\n');
            for (i, h) in g.rows.iter().enumerate() {
                write!(s, "{h}").unwrap();
                for j in 0..g.cols.len() {
                    write!(s, ",{}", g.entries.get(i, j) as u8).unwrap();
                }
                s.push('\n');
            }
            s
        }
        Format::Pretty => pretty_matrix(&g, &format!("rank {rank} over {field}")),
    })
}

fn pretty_matrix(g: &cells::GramMatrix, footer: &str) -> String {
    let mut s = format!("Gram matrix of J_{} in Mo_{} ({} x {})\n", g.k, g.n, g.rows.len(), g.cols.len());
    for (i, h) in g.rows.iter().enumerate() {
        writeln!(s, "{h}  {}", g.entries.row_string(i)).unwrap();
    }
    writeln!(s, "{footer}").unwrap();
    s
}

/// Square block of `J_k` on rows with through strands at `1..=k`.
pub fn submatrix(n: usize, k: usize, field: FieldSpec, format: Format) -> CliResult {
    check_k(n, k)?;
    let g = cells::consecutive_submatrix(n, k)?;
    let rank = g.rank(field)?;
    let bound = comb::submatrix_bound(n, k);
    Ok(match format {
        Format::Json => {
            let mut v = g.to_json();
            v["field"] = json!(field.to_string());
            v["rank"] = json!(rank);
            v["bound"] = json!(bound.to_string());
            json_text(v)
        }
        Format::Csv => g.entries.to_string(),
        Format::Pretty => {
            let mut s = pretty_matrix(&g, &format!("rank {rank} over {field}; bound {bound}"));
            writeln!(s, "columns: {}", g.cols.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(" ")).unwrap();
            s
        }
    })
}

/// Cell-module size and Gram ranks for every `(n, k)` with `n ≤ n_max`.
pub fn table(n_max: usize, fields: &[FieldSpec], force: bool, format: Format) -> CliResult {
    if fields.is_empty() {
        return Err(CliError::Invalid("at least one field is required".into()));
    }
    if fields.contains(&FieldSpec::Rationals) {
        let worst = (0..=n_max).map(|k| comb::lcell_size(n_max, k)).max().unwrap();
        guard(force, worst <= BigCount::from(MAX_RATIONAL_DIMENSION), || {
            format!("Gram dimension {worst} exceeds {MAX_RATIONAL_DIMENSION} over Q")
        })?;
    }
    let rows = (0..=n_max)
        .map(|n| cells::apex_table(n, fields))
        .collect::<Result<Vec<_>, _>>()?
        .concat();
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("n,k,ssdim");
            for f in fields {
                write!(s, ",rank_{f}").unwrap();
            }
            s.push('\n');
            for r in &rows {
                write!(s, "{},{},{}", r.n, r.k, r.ssdim).unwrap();
                for x in &r.ranks {
                    write!(s, ",{x}").unwrap();
                }
                s.push('\n');
            }
            s
        }
        Format::Json => json_text(json!({
            "fields": fields.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "rows": rows,
        })),
        Format::Pretty => {
            let mut s = String::new();
            for n in 0..=n_max {
                let cells: Vec<String> = rows
                    .iter()
                    .filter(|r| r.n == n)
                    .map(|r| {
                        let ranks: Vec<String> = r.ranks.iter().map(|x| x.to_string()).collect();
                        format!("{}/{}", r.ssdim, ranks.join("/"))
                    })
                    .collect();
                writeln!(s, "n={n}: {}", cells.join("  ")).unwrap();
            }
            s
        }
    })
}

/// Data series behind the growth plots. `ns` is the `n` axis for the
/// `n`-indexed curves and a single `n` for the others.
pub fn curve(which: Curve, ns: &[usize], format: Format) -> CliResult {
    let single = || match ns {
        [n] => Ok(*n),
        _ => Err(CliError::Invalid(format!("{which:?} takes exactly one n"))),
    };
    use serde_json::Value;
    let (header, rows): (Vec<&str>, Vec<Vec<Value>>) = match which {
        Curve::SsdimVsK => {
            let n = single()?;
            (
                vec!["k", "value"],
                comb::ssdim_curve(n).into_iter().map(|(k, v)| vec![json!(k), json!(v.to_string())]).collect(),
            )
        }
        Curve::SummandVsT => {
            let n = single()?;
            (
                vec!["t", "ln_value"],
                comb::summand_curve(n).into_iter().map(|(t, v)| vec![json!(t), json!(v)]).collect(),
            )
        }
        Curve::PeakVsN => (
            vec!["n", "value"],
            ns.iter().map(|&n| vec![json!(n), json!(comb::peak_t(n))]).collect(),
        ),
        Curve::Nthroot => (
            vec!["n", "value", "reference"],
            comb::nth_root_curve(ns.iter().copied())
                .into_iter()
                .map(|p| vec![json!(p.n), json!(p.value), json!(p.reference)])
                .collect(),
        ),
        Curve::Ratios => (
            vec!["n", "ssgapr", "gapr_root", "faithr"],
            comb::ratio_curves(ns.iter().copied())
                .into_iter()
                .map(|p| vec![json!(p.n), json!(p.ssgapr), json!(p.gapr_root), json!(p.faithr)])
                .collect(),
        ),
    };
    Ok(match format {
        Format::Csv | Format::Pretty => {
            let mut s = header.join(",");
            s.push('\n');
            for r in rows {
                let cells: Vec<String> = r
                    .into_iter()
                    .map(|v| match v {
                        Value::String(x) => x,
                        other => other.to_string(),
                    })
                    .collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => json_text(Value::Array(
            rows.into_iter()
                .map(|r| header.iter().map(|h| h.to_string()).zip(r).collect::<serde_json::Map<_, _>>().into())
                .collect(),
        )),
    })
}


pub fn connected(n: usize, force: bool, format: Format) -> CliResult {
    guard(force, n <= MAX_CONNECTED_N, || {
        format!("the connectedness scan is refused above n = {MAX_CONNECTED_N}")
    })?;
    let r = cells::connectedness(n)?;
    Ok(match format {
        Format::Json => json_text(json!({
            "report": r,
            "left_connected": r.left_connected(),
            "right_connected": r.right_connected(),
            "well_connected": r.well_connected(),
        })),
        Format::Csv => format!(
            "n,elements,null,left,right\n{n},{},{},{},{}\n",
            r.elements,
            r.is_group() || r.null_connected,
            r.left_connected(),
            r.right_connected()
        ),
        Format::Pretty => format!(
            "Mo_{n}: {} elements\nnull-connected: {}\nleft-connected: {} ({} classes)\nright-connected: {} ({} classes)\nwell-connected: {}\n",
            r.elements,
            r.is_group() || r.null_connected,
            r.left_connected(),
            r.left_classes,
            r.right_connected(),
            r.right_classes,
            r.well_connected()
        ),
    })
}

/// One transcript for `seed` and, with `trials > 1`, agreement and
/// distinct-key counts over seeds `0..trials`.
pub fn stickel(n: usize, seed: u64, trials: usize, exponent_bound: u32, format: Format) -> CliResult {
    let params = StickelParams::from_seed(n, seed, exponent_bound)?;
    let transcript = stickel::run_exchange(&params, seed)?;
    let stats = (trials > 1)
        .then(|| stickel::collision_stats(&params, trials))
        .transpose()?;
    Ok(match format {
        Format::Csv => format!(
            "seed,keys_agree,key_hash\n{seed},{},{}\n",
            transcript.keys_agree, transcript.key_hash
        ),
        Format::Json => {
            let mut v = json!({ "transcript": transcript });
            if let Some(st) = &stats {
                v["statistics"] = json!(st);
            }
            json_text(v)
        }
        Format::Pretty => {
            let mut s = format!(
                "g = {}\nh = {}\nA publishes {}\nB publishes {}\nkeys agree: {}\nkey hash: {}\n",
                params.g, params.h, transcript.alice_public, transcript.bob_public, transcript.keys_agree, transcript.key_hash
            );
            if let Some(st) = stats {
                writeln!(s, "{} trials: {} agreed, {} distinct keys", st.trials, st.agreements, st.distinct_keys).unwrap();
            }
            s
        }
    })
}

/// Rank of a matrix given in the `rows cols` text format.
pub fn rank_text(text: &str, field: FieldSpec, force: bool) -> CliResult {
    let m: Matrix01 = text.parse()?;
    guard(
        force,
        field != FieldSpec::Rationals || m.rows().max(m.cols()) <= MAX_RATIONAL_DIMENSION,
        || format!("matrix dimension exceeds {MAX_RATIONAL_DIMENSION} over Q"),
    )?;
    Ok(format!("rank {} over {field}\n", linalg::rank(&m, field)?))
}

/// A list of sizes: `a..b`, `a..=b`, `a..=b:step`, or comma-separated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

impl std::str::FromStr for SizeList {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("invalid number {s:?}"));
        let (range, step) = match text.split_once(':') {
            Some((r, st)) => (r, num(st)?),
            None => (text, 1),
        };
        if step == 0 {
            return Err("step must be positive".into());
        }
        let list = if let Some((a, b)) = range.split_once("..=") {
            (num(a)?..=num(b)?).step_by(step).collect()
        } else if let Some((a, b)) = range.split_once("..") {
            (num(a)?..num(b)?).step_by(step).collect()
        } else {
            text.split(',').map(num).collect::<Result<_, _>>()?
        };
        Ok(SizeList(list))
    }
}
