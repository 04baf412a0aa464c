//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p dessin-core --test acceptance`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use dessin_core::evolution::exp_series;
use dessin_core::kp::{kp_report_standard, KpEquation};
use dessin_core::oracle::{compare_with_engine, Strategy};
use dessin_core::specialize::{closed_genus0, closed_genus1, genus_table};
use dessin_core::{
    coeff_recursion_rhs, compute_f, genus_of, partition_function, EngineState, GradedSeries,
    MonomialKey, Partition, Rational,
};

const GOLDEN: &str = include_str!("../testdata/genus_table_marked.csv");
const TABLE_BUDGET: Duration = Duration::from_secs(60);
const MUTATIONS: usize = 5;
const MUTATION_SEED: u64 = 0x00d3_5510;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn dessin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dessin"));
    cmd.env_remove("DESSIN_CACHE");
    cmd
}

fn run_ok(cmd: &mut Command) -> Result<Vec<u8>, String> {
    let output = cmd
        .output()
        .map_err(|e| format!("cannot run dessin: {e}"))?;
    if !output.status.success() {
        return Err(format!(
            "dessin exited with {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr).trim()
        ));
    }
    Ok(output.stdout)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Indecomposable permutations of `1..=n`: `a(n) = n! - sum_{k<n} k! a(n-k)`.
fn indecomposable(nmax: u32) -> Vec<BigInt> {
    let mut a = vec![BigInt::zero(); nmax as usize + 1];
    for n in 1..=nmax {
        let mut v = factorial(n);
        for k in 1..n {
            v -= factorial(k) * &a[(n - k) as usize];
        }
        a[n as usize] = v;
    }
    a
}

fn golden_cells() -> Vec<(u32, u32, BigInt)> {
    GOLDEN
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
            )
        })
        .collect()
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let stdout = run_ok(dessin().args([
        "table", "--dmax", "14", "--gmax", "4", "--marked", "--format", "csv",
    ]))?;
    let elapsed = start.elapsed();
    let produced = String::from_utf8(stdout).map_err(|e| e.to_string())?;

    let expected = golden_cells();
    let mut rows = produced.lines();
    if rows.next() != GOLDEN.lines().next() {
        return Err("CSV header differs from the golden file".into());
    }
    let got: Vec<&str> = rows.collect();
    let mut wrong = Vec::new();
    for (i, (d, g, value)) in expected.iter().enumerate() {
        let want = format!("{d},{g},{value}");
        match got.get(i) {
            Some(line) if *line == want => {}
            Some(line) => wrong.push(format!("(d={d}, g={g}) golden {value}, produced `{line}`")),
            None => wrong.push(format!("(d={d}, g={g}) missing")),
        }
    }
    if got.len() != expected.len() {
        wrong.push(format!(
            "{} rows produced, {} expected",
            got.len(),
            expected.len()
        ));
    }
    let matched = expected.len() - wrong.len().min(expected.len());
    let timing = format!("{:.2}s", elapsed.as_secs_f64());

    if wrong.is_empty() && produced == GOLDEN && elapsed < TABLE_BUDGET {
        return Ok(format!("70/70 entries byte-identical in {timing}"));
    }

    let sums = indecomposable(15);
    let table = genus_table(&compute_f(14)).map_err(|e| e.to_string())?;
    let sums_ok = (1..=14).all(|d| table.marked_row_sum(d) == sums[d as usize + 1]);
    let mut msg = format!("{matched}/{} entries match in {timing}", expected.len());
    for w in &wrong {
        msg.push_str(&format!("; {w}"));
    }
    if elapsed >= TABLE_BUDGET {
        msg.push_str(&format!("; runtime {timing} over budget"));
    }
    msg.push_str(&format!(
        "; produced row sums {} the indecomposable-permutation counts for d = 1..14",
        if sums_ok { "equal" } else { "do NOT equal" }
    ));
    Err(msg)
}

fn closed_formulas(f20: &EngineState) -> Outcome {
    let table = genus_table(f20).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for d in 1..=20 {
        if table.marked(d, 0) != closed_genus0(d) {
            bad.push(format!(
                "g=0 d={d}: engine {} closed {}",
                table.marked(d, 0),
                closed_genus0(d)
            ));
        }
        if table.marked(d, 1) != closed_genus1(d) {
            bad.push(format!(
                "g=1 d={d}: engine {} closed {}",
                table.marked(d, 1),
                closed_genus1(d)
            ));
        }
    }
    for (d, g, value) in golden_cells() {
        let closed = match g {
            0 => closed_genus0(d),
            1 => closed_genus1(d),
            _ => continue,
        };
        if closed != value {
            bad.push(format!("g={g} d={d}: closed {closed} golden {value}"));
        }
    }
    if bad.is_empty() {
        Ok(
            "genus 0 and 1 exact for d <= 20, closed forms equal the golden table for d <= 14"
                .into(),
        )
    } else {
        Err(bad.join("; "))
    }
}

fn oracle_equivalence(f9: &EngineState) -> Outcome {
    let table = genus_table(f9).map_err(|e| e.to_string())?;
    let mut report = Vec::new();
    for d in 1..=9 {
        let strategy = Strategy::for_degree(d);
        let expected_strategy = if d <= 7 {
            Strategy::Full
        } else {
            Strategy::ClassReduced
        };
        if strategy != expected_strategy {
            return Err(format!("d={d}: unexpected strategy {strategy:?}"));
        }
        let diff = compare_with_engine(f9, d).map_err(|e| e.to_string())?;
        if let Some(m) = diff.mismatches.first() {
            return Err(format!(
                "d={d}: {} mismatches, first (k={}, l={}, m={}) engine {} oracle {}",
                diff.mismatches.len(),
                m.key.k,
                m.key.l,
                m.key.m,
                m.engine,
                m.oracle
            ));
        }
        let implied = table.marked_row_sum(d) * factorial(d - 1);
        if BigInt::from(diff.total_pairs.clone()) != implied {
            return Err(format!(
                "d={d}: {} transitive pairs, engine implies {implied}",
                diff.total_pairs
            ));
        }
        report.push(format!("{}", diff.total_pairs));
    }
    Ok(format!(
        "all keys equal for d <= 9 (full to 7, class-reduced 8-9); pair totals {}",
        report.join(",")
    ))
}

fn observable(key: &MonomialKey, equations: &[KpEquation]) -> bool {
    let mono = GradedSeries::monomial(key.clone(), Rational::one(), key.weight());
    equations
        .iter()
        .flat_map(|eq| &eq.terms)
        .flat_map(|t| &t.factors)
        .any(|alpha| {
            !alpha
                .iter()
                .fold(mono.clone(), |acc, &i| acc.diff_t(i))
                .is_empty()
        })
}

fn kp_residuals(f12: &EngineState) -> Outcome {
    let report = kp_report_standard(f12, 12).map_err(|e| e.to_string())?;
    if let Some(row) = report.rows.iter().find(|r| !r.pass) {
        return Err(format!(
            "equation {} at n={} leaves {} residual terms",
            row.eq, row.n, row.residual_terms
        ));
    }

    let equations = KpEquation::standard();
    let candidates: Vec<MonomialKey> = f12
        .pieces()
        .iter()
        .flat_map(|p| p.keys().cloned())
        .filter(|k| observable(k, &equations))
        .collect();
    let mut rng = StdRng::seed_from_u64(MUTATION_SEED);
    let picks: Vec<&MonomialKey> = candidates.choose_multiple(&mut rng, MUTATIONS).collect();
    let mut caught = Vec::new();
    for key in picks {
        let mut corrupted = f12.clone();
        let old = corrupted
            .coefficient(key.k, key.l, &key.m)
            .map_err(|e| e.to_string())?;
        corrupted
            .set_coefficient(key.clone(), old + Rational::one())
            .map_err(|e| e.to_string())?;
        let r = kp_report_standard(&corrupted, 12).map_err(|e| e.to_string())?;
        match r.rows.iter().find(|row| !row.pass) {
            Some(row) => caught.push(format!(
                "(k={}, l={}, m={}) -> eq {} n={}",
                key.k, key.l, key.m, row.eq, row.n
            )),
            None => {
                return Err(format!(
                    "corruption of (k={}, l={}, m={}) left every residual zero",
                    key.k, key.l, key.m
                ))
            }
        }
    }
    if caught.len() < 3 {
        return Err(format!("only {} mutations drawn", caught.len()));
    }
    Ok(format!(
        "{} residuals zero for n <= 12; {} mutations detected: {}",
        report.rows.len(),
        caught.len(),
        caught.join(", ")
    ))
}

fn partition_identity(f10: &EngineState) -> Outcome {
    let z = partition_function(10);
    let e = exp_series(f10);
    let diff = z.sub(&e);
    if let Some((key, c)) = diff.iter().next() {
        return Err(format!(
            "{} differing terms, first (k={}, l={}, m={}) differs by {c}",
            diff.len(),
            key.k,
            key.l,
            key.m
        ));
    }
    Ok(format!(
        "Z equals exp(F) through weight 10 ({} terms)",
        z.len()
    ))
}

fn structural(f14: &EngineState) -> Outcome {
    let mut keys = 0usize;
    for (idx, piece) in f14.pieces().iter().enumerate() {
        let d = idx as u32 + 1;
        for (key, c) in piece.iter() {
            keys += 1;
            let mirror = MonomialKey::new(key.l, key.k, key.m.clone());
            if piece.coefficient(&mirror) != *c {
                return Err(format!(
                    "u<->v symmetry broken at (k={}, l={}, m={})",
                    key.k, key.l, key.m
                ));
            }
            if !(c * Rational::from_integer(d.into())).is_integer() {
                return Err(format!(
                    "d*N not integral at (k={}, l={}, m={}): {c}",
                    key.k, key.l, key.m
                ));
            }
            if *c <= Rational::zero() {
                return Err(format!(
                    "non-positive coefficient at (k={}, l={}, m={})",
                    key.k, key.l, key.m
                ));
            }
            genus_of(key).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!(
        "{keys} keys for d <= 14: symmetric, d*N integral, genus a non-negative integer"
    ))
}

fn path_equivalence(f10: &EngineState) -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for d in 1..=10u32 {
        for m in Partition::all_of_weight(d) {
            for k in 1..=d {
                for l in 1..=d {
                    let key = MonomialKey::new(k, l, m.clone());
                    if genus_of(&key).is_err() {
                        continue;
                    }
                    checked += 1;
                    let engine = f10.coefficient(k, l, &m).map_err(|e| e.to_string())?;
                    let rhs = coeff_recursion_rhs(f10, &key).map_err(|e| e.to_string())?;
                    if engine != rhs {
                        bad.push(format!(
                            "(d={d}, k={k}, l={l}, m={m}) engine {engine} recursion {rhs}"
                        ));
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} admissible keys with d <= 10 agree"))
    } else {
        Err(format!("{} keys disagree: {}", bad.len(), bad.join("; ")))
    }
}

fn artifacts(dir: &Path, threads: &str) -> Result<Vec<(String, Vec<u8>)>, String> {
    fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let cache = dir.join("f.cache");
    let csv = dir.join("table.csv");
    let json = dir.join("table.json");
    let common = ["--threads", threads, "--cache"];
    run_ok(
        dessin()
            .args(common)
            .arg(&cache)
            .args(["table", "--dmax", "12", "--format", "csv", "--out"])
            .arg(&csv),
    )?;
    run_ok(
        dessin()
            .args(common)
            .arg(&cache)
            .args([
                "table", "--dmax", "12", "--marked", "--format", "json", "--out",
            ])
            .arg(&json),
    )?;
    let stdout =
        run_ok(dessin().args(["--threads", threads, "table", "--dmax", "12", "--marked"]))?;
    let read = |p: &PathBuf| fs::read(p).map_err(|e| format!("{}: {e}", p.display()));
    Ok(vec![
        ("csv".into(), read(&csv)?),
        ("json".into(), read(&json)?),
        ("cache".into(), read(&cache)?),
        ("stdout".into(), stdout),
    ])
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: Vec<_> = ["1", "4", "0"]
        .iter()
        .map(|t| artifacts(&tmp.path().join(format!("threads-{t}")), t))
        .collect::<Result<_, _>>()?;
    for other in &runs[1..] {
        for ((name, a), (_, b)) in runs[0].iter().zip(other) {
            if a != b {
                return Err(format!("{name} differs between thread counts"));
            }
        }
    }
    let sizes: Vec<String> = runs[0]
        .iter()
        .map(|(n, b)| format!("{n} {}B", b.len()))
        .collect();
    Ok(format!(
        "--threads 1/4/0 byte-identical: {}",
        sizes.join(", ")
    ))
}

fn main() -> ExitCode {
    let f20 = compute_f(20);
    let truncated = |d| f20.truncated(d);
    let (f9, f10, f12, f14) = (truncated(9), truncated(10), truncated(12), truncated(14));

    let criteria: Vec<Criterion> = vec![
        (
            "table reproduction (d <= 14, g <= 4, marked)",
            Box::new(table_reproduction),
        ),
        (
            "closed formulas, genus 0 and 1, d <= 20",
            Box::new(|| closed_formulas(&f20)),
        ),
        (
            "brute-force oracle, d <= 9",
            Box::new(|| oracle_equivalence(&f9)),
        ),
        (
            "KP residuals n <= 12 and mutation sensitivity",
            Box::new(|| kp_residuals(&f12)),
        ),
        (
            "partition function equals exp(F) to weight 10",
            Box::new(|| partition_identity(&f10)),
        ),
        (
            "structural properties d <= 14",
            Box::new(|| structural(&f14)),
        ),
        (
            "coefficient recursion equals operator form, d <= 10",
            Box::new(|| path_equivalence(&f10)),
        ),
        ("determinism across --threads", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name} [{secs:.2}s]: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
