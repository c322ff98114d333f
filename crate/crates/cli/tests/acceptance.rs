//! Acceptance checks. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use motzkin_cli::{self as cli, Format};
use motzkin_core::cells::{self, consecutive_submatrix, decompose, gram_matrix};
use motzkin_core::combinatorics::{
    argmax_lcell, isqrt, lcell_size, lcell_size_binomial_form, motzkin_number, nth_root_curve, peak_t,
    ratio_curves, BigCount,
};
use motzkin_core::diagram::enumerate_monoid;
use motzkin_core::linalg::{kernel_vector, left_multiply};
use motzkin_core::stickel::{run_exchange, StickelParams, DEFAULT_EXPONENT_BOUND};
use motzkin_core::FieldSpec;

const Q: FieldSpec = FieldSpec::Rationals;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() <= budget, || format!("took {:?}, budget {budget:?}", start.elapsed()))
}

/// `(m+3) M_{m+1} = (2m+3) M_m + 3m M_{m-1}`, independent of the library.
fn motzkin_oracle(len: usize) -> Vec<BigCount> {
    let mut m: Vec<BigCount> = vec![1u8.into(), 1u8.into()];
    for i in 1..len {
        let next = (BigCount::from(2 * i + 3) * &m[i] + BigCount::from(3 * i) * &m[i - 1]) / BigCount::from(i + 3);
        m.push(next);
    }
    m.truncate(len + 1);
    m
}

fn c1_enumeration() -> Outcome {
    let start = Instant::now();
    let oracle = motzkin_oracle(14);
    let expected = [1u32, 2, 9, 51, 323, 2188, 15511, 113634];
    for n in 0..=7 {
        let listed = BigCount::from(enumerate_monoid(n).len());
        let want = BigCount::from(expected[n]);
        ensure(oracle[2 * n] == want, || format!("oracle M_{} = {}", 2 * n, oracle[2 * n]))?;
        ensure(motzkin_number(2 * n) == want, || format!("formula disagrees at n={n}"))?;
        ensure(listed == want, || format!("|Mo_{n}| = {listed}, expected {want}"))?;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("|Mo_n| = {expected:?} for n = 0..7"))
}

fn c2_mo3_cells() -> Outcome {
    let cells = decompose(3);
    let sizes = cells.lcell_sizes();
    ensure(sizes == [4, 5, 3, 1], || format!("L-cell sizes {sizes:?}"))?;
    let idem = cells.idempotent_counts();
    // the grid and the printed J_1 Gram matrix have 16, 11, 3, 1 marked
    // entries; (16, 13, 5, 1) cannot hold since J_1 and J_2 are 5x5 and 3x3
    // with 11 and 3 idempotents
    ensure(idem == [16, 11, 3, 1], || format!("idempotent counts {idem:?}"))?;
    Ok(format!("L-cells {sizes:?}, idempotents {idem:?} (grid values; listed (16, 13, 5, 1) differs)"))
}

fn c3_gram_matrices() -> Outcome {
    let g = gram_matrix(3, 1).map_err(|e| e.to_string())?;
    for f in [Q, FieldSpec::GF2, FieldSpec::gf(3).unwrap()] {
        let r = g.rank(f).map_err(|e| e.to_string())?;
        ensure(r == 5, || format!("gram(3,1) rank {r} over {f}"))?;
    }
    let g = gram_matrix(4, 2).map_err(|e| e.to_string())?;
    ensure(g.size() == (9, 9), || format!("gram(4,2) size {:?}", g.size()))?;
    let r = g.rank(Q).map_err(|e| e.to_string())?;
    ensure(r == 8, || format!("gram(4,2) rank {r}"))?;
    let v = kernel_vector(&g.entries, Q).map_err(|e| e.to_string())?.ok_or("no kernel vector")?;
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0.into()).collect();
    ensure(support.len() == 4, || format!("support {support:?}"))?;
    ensure(support.iter().all(|&i| v[i] == 1.into() || v[i] == (-1).into()), || format!("{v:?}"))?;
    ensure(left_multiply(&v, &g.entries).iter().all(|x| *x == 0.into()), || "v·G != 0".into())?;
    let coeffs: Vec<String> = support.iter().map(|&i| format!("{:+}R{}", v[i], i + 1)).collect();
    Ok(format!("ranks 5/5/5 and 8; relation {} = 0", coeffs.join(" ")))
}

fn c4_odd_fullness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=7 {
        for k in (1..=n).step_by(2) {
            let r = cells::simple_dimension(n, k, Q).map_err(|e| e.to_string())?;
            let size = lcell_size(n, k);
            ensure(BigCount::from(r) == size, || format!("n={n} k={k}: rank {r}, size {size}"))?;
            checked += 1;
        }
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!("{checked} odd cells of full rank for n <= 7"))
}

fn c5_consecutive() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=7 {
        for k in 0..=n {
            let s = consecutive_submatrix(n, k).map_err(|e| e.to_string())?;
            let r = s.rank(Q).map_err(|e| e.to_string())?;
            let want = motzkin_number(n - k);
            if BigCount::from(r) != want {
                bad.push(format!("({n},{k}): rank {r} vs {want}"));
            }
        }
    }
    let s = consecutive_submatrix(5, 1).map_err(|e| e.to_string())?;
    let r = s.rank(Q).map_err(|e| e.to_string())?;
    ensure(s.size() == (9, 9) && r == 9, || format!("(5,1) is {:?} of rank {r}", s.size()))?;
    ensure(bad.is_empty(), || {
        format!(
            "{} of 36 cases fail, all at k = 0 where every Gram entry is 1: {}",
            bad.len(),
            bad.join(", ")
        )
    })?;
    Ok("rank = M_{n-k} for 0 <= k <= n <= 7; (5,1) is 9x9 of rank 9".into())
}

fn c6_identities() -> Outcome {
    for n in [1usize, 4, 9, 16, 25, 36] {
        let lhs = lcell_size_binomial_form(n).map_err(|e| e.to_string())?;
        let rhs = lcell_size(n, isqrt(n));
        ensure(lhs == rhs, || format!("n={n}: {lhs} vs {rhs}"))?;
    }
    for n in 0..=40 {
        let sum: BigCount = (0..=n).map(|k| lcell_size(n, k).pow(2)).sum();
        ensure(sum == motzkin_number(2 * n), || format!("square sum fails at n={n}"))?;
    }
    Ok("binomial form at 6 squares; square sums for n <= 40".into())
}

fn c7_trends() -> Outcome {
    let start = Instant::now();
    let pts = nth_root_curve([100, 200, 500, 1000, 2000, 5000]);
    let vals: Vec<f64> = pts.iter().map(|p| p.value).collect();
    ensure(vals.iter().all(|&v| v < 3.0), || format!("nth root >= 3: {vals:?}"))?;
    ensure(vals.windows(2).all(|w| w[0] < w[1]), || format!("not increasing: {vals:?}"))?;
    let peak = peak_t(600);
    ensure((170..=230).contains(&peak), || format!("peak_t(600) = {peak}"))?;
    for n in 1..=200 {
        let arg = argmax_lcell(n);
        let ceil = isqrt(n) + usize::from(isqrt(n).pow(2) != n);
        ensure(arg <= ceil, || format!("argmax at n={n} is {arg} > {ceil}"))?;
    }
    let ratios = ratio_curves((500..=5000).step_by(250));
    for p in &ratios {
        ensure((0.9..=1.01).contains(&p.gapr_root), || format!("gapr_root({}) = {}", p.n, p.gapr_root))?;
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "nth root {:.3}..{:.3}, peak_t(600) = {peak}, gapr_root in [{:.3}, {:.3}]",
        vals[0],
        vals[vals.len() - 1],
        ratios.iter().map(|p| p.gapr_root).fold(f64::INFINITY, f64::min),
        ratios.iter().map(|p| p.gapr_root).fold(0.0, f64::max)
    ))
}

fn c8_connectedness() -> Outcome {
    let start = Instant::now();
    for n in [4, 5] {
        let r = cells::connectedness(n).map_err(|e| e.to_string())?;
        ensure(r.null_connected, || format!("Mo_{n} not null-connected"))?;
        ensure(r.left_connected(), || format!("Mo_{n}: {} left classes", r.left_classes))?;
        ensure(r.right_connected(), || format!("Mo_{n}: {} right classes", r.right_classes))?;
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("null, left, right connected for n = 4, 5 in {:.1?}", start.elapsed()))
}

fn c9_structural_idempotency() -> Outcome {
    let mut total = 0;
    for n in 0..=5 {
        for d in enumerate_monoid(n) {
            ensure(d.is_idempotent_structural() == d.is_idempotent(), || format!("disagree on {d}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} diagrams agree"))
}

fn c10_stickel() -> Outcome {
    let params = StickelParams::from_seed(5, 2024, DEFAULT_EXPONENT_BOUND).map_err(|e| e.to_string())?;
    for seed in 0..100 {
        let t = run_exchange(&params, seed).map_err(|e| e.to_string())?;
        ensure(t.keys_agree, || format!("keys differ for seed {seed}"))?;
    }
    let first = cli::stickel(5, 99, 1, DEFAULT_EXPONENT_BOUND, Format::Json).map_err(|e| e.to_string())?;
    let second = cli::stickel(5, 99, 1, DEFAULT_EXPONENT_BOUND, Format::Json).map_err(|e| e.to_string())?;
    ensure(first == second, || "transcripts differ between runs".into())?;
    Ok("100 agreeing trials on Mo_5; transcript repeats byte for byte".into())
}

fn c11_table() -> Outcome {
    let csv = cli::table(7, &[Q, FieldSpec::GF2], false, Format::Csv).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    ensure(lines.next() == Some("n,k,ssdim,rank_Q,rank_GF2"), || "bad header".into())?;
    let rows: Vec<Vec<usize>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    ensure(rows.len() == 36, || format!("{} rows", rows.len()))?;
    for r in &rows {
        if r[1] % 2 == 1 {
            ensure(r[2] == r[3], || format!("odd row {r:?} not full rank"))?;
        }
    }
    let find = |n, k| rows.iter().find(|r| r[0] == n && r[1] == k).cloned().unwrap_or_default();
    ensure(find(3, 1)[2..4] == [5, 5], || format!("(3,1) row {:?}", find(3, 1)))?;
    ensure(find(4, 2)[2..4] == [9, 8], || format!("(4,2) row {:?}", find(4, 2)))?;
    Ok("36 rows; odd k full rank; (3,1) = 5/5, (4,2) = 9/8".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("enumeration vs formula", c1_enumeration),
        ("Mo_3 cell layout", c2_mo3_cells),
        ("Gram matrices", c3_gram_matrices),
        ("odd-k fullness", c4_odd_fullness),
        ("consecutive submatrix", c5_consecutive),
        ("identity chain", c6_identities),
        ("asymptotic trends", c7_trends),
        ("well-connectedness", c8_connectedness),
        ("structural idempotency", c9_structural_idempotency),
        ("key exchange demo", c10_stickel),
        ("dimension table", c11_table),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] C{} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] C{} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
