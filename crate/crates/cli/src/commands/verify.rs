use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use lee_toric::interleaver::{trial_rng, InterleavingMap};
use lee_toric::lattice::IntVector;
use lee_toric::lee_code::{build_generators, PackingMode, PerfectLeeCode};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::OutputFormat;
use crate::{CliError, Report, VerifyArgs, VerifyMode};

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub q: u32,
    pub mode: &'static str,
    pub samples: Option<u64>,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Outcome {
    passed: bool,
    detail: String,
    witnesses: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Outcome { passed, detail, witnesses: Vec::new() }
    }

    fn with_witnesses(mut self, w: Vec<String>) -> Self {
        self.witnesses = w;
        self
    }
}

fn determinant(code: &PerfectLeeCode) -> Outcome {
    let det = code.matrix().determinant();
    let ok = code.matrix().abs_determinant() == Some(code.q() as u64);
    Outcome::new(ok, format!("det A = {det}, expected |det A| = {}", code.q()))
}

fn orthogonality(code: &PerfectLeeCode) -> Outcome {
    let h = code.check_functional();
    let q = code.q() as i64;
    let bad: Vec<String> = code
        .generators()
        .labelled()
        .into_iter()
        .filter(|(_, g)| h.dot(g).rem_euclid(q) != 0)
        .map(|(label, g)| format!("{label} = {g}: h.{label} = {} (mod {q})", h.dot(g).rem_euclid(q)))
        .collect();
    let total = code.generators().rows().len();
    Outcome::new(bad.is_empty(), format!("{} of {total} generators orthogonal to h = {h}", total - bad.len()))
        .with_witnesses(bad)
}

fn nested_chain(code: &PerfectLeeCode) -> Outcome {
    let n = code.n();
    let q = code.q() as i64;
    let mut bad = Vec::new();
    for i in 0..n {
        let x = IntVector::unit(n, i).scaled(q);
        if !code.lattice_membership(&x) {
            bad.push(format!("q e{} = {x} not in A Z^n", i + 1));
        }
    }
    for (label, g) in code.generators().labelled() {
        if !code.lattice_membership(g) {
            bad.push(format!("row {label} = {g} not in ker h"));
        }
    }
    let cosets = code.hypercubes() / code.q() as u64;
    if cosets != code.size() {
        bad.push(format!("q^n / q = {cosets} but code size is {}", code.size()));
    }
    Outcome::new(bad.is_empty(), format!("Z^n > A Z^n > q Z^n, |A Z^n / q Z^n| = {cosets}")).with_witnesses(bad)
}

fn packing(code: &PerfectLeeCode, mode: PackingMode) -> Outcome {
    let r = code.verify_perfect_packing(mode);
    let detail = format!(
        "{} hypercubes checked ({}), {} codewords, {} violations",
        r.hypercubes_checked,
        if r.exhaustive { "exhaustive" } else { "sampled" },
        r.codewords,
        r.violation_count
    );
    Outcome::new(r.passed(), detail).with_witnesses(r.violations.iter().map(ToString::to_string).collect())
}

fn min_distance(code: &PerfectLeeCode) -> Outcome {
    let s = code.min_mannheim_distance(4);
    let counts: Vec<String> = s.candidates.iter().map(|(w, c)| format!("w{w}:{c}")).collect();
    let witness = s.witness.as_ref().map(|w| IntVector::new(w.clone()).to_string()).unwrap_or_else(|| "none".into());
    let detail = format!(
        "d_M = {}, witness {witness}, candidates {}",
        s.distance.map_or_else(|| format!(">= {}", s.lower_bound), |d| d.to_string()),
        counts.join(" ")
    );
    Outcome::new(s.distance == Some(3), detail)
}

fn section_distance(code: &PerfectLeeCode) -> Outcome {
    let s = code.section_subcode_distance();
    let (a, b) = s.witness;
    Outcome::new(
        s.distance == 4,
        format!(
            "min weight of a v + b v1 = {} at (a, b) = ({a}, {b}) over {} combinations",
            s.distance, s.combinations
        ),
    )
}

fn rank_bijection(code: &PerfectLeeCode, mode: VerifyMode, samples: u64, seed: u64) -> Outcome {
    let q = code.q();
    let per = code.codewords_per_section();
    let check = |j: u32, r: u64| -> Option<String> {
        let c = code.codeword_from_rank(j, r).expect("rank in range");
        if code.syndrome(&c.point) != 0 {
            return Some(format!("(j={j}, r={r}) -> {} has syndrome {}", c.point, code.syndrome(&c.point)));
        }
        match code.rank_of(&c.point) {
            Ok(back) if back == c => None,
            Ok(back) => Some(format!("(j={j}, r={r}) -> {} -> (j={}, r={})", c.point, back.section, back.rank)),
            Err(_) => Some(format!("(j={j}, r={r}) -> {} is not a codeword", c.point)),
        }
    };
    let (checked, bad): (u64, Vec<String>) = match mode {
        VerifyMode::Exhaustive => {
            let bad = (0..q as u64 * per)
                .into_par_iter()
                .filter_map(|i| check((i / per) as u32, i % per))
                .collect::<Vec<_>>();
            (q as u64 * per, bad)
        }
        VerifyMode::Sampled => {
            let mut rng = trial_rng(seed, 1);
            let bad = (0..samples).filter_map(|_| check(rng.random_range(0..q), rng.random_range(0..per))).collect();
            (samples, bad)
        }
    };
    let n_bad = bad.len();
    Outcome::new(bad.is_empty(), format!("{checked} (section, rank) pairs round-trip, {n_bad} failures"))
        .with_witnesses(bad.into_iter().take(MAX_WITNESSES).collect())
}

fn interleaver_bijection(map: &InterleavingMap, mode: VerifyMode, samples: u64, seed: u64) -> Outcome {
    let total = map.total_slots();
    let round_trip = |i: u64| -> Result<u64, String> {
        let p = map.logical_to_physical_index(i).map_err(|e| e.to_string())?;
        let back = map.physical_to_logical_index(p).map_err(|e| e.to_string())?;
        if back == i {
            Ok(p)
        } else {
            Err(format!("logical {i} -> physical {p} -> logical {back}"))
        }
    };
    match mode {
        VerifyMode::Exhaustive => {
            let seen: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
            let mut bad: Vec<(u64, String)> = (0..total)
                .into_par_iter()
                .filter_map(|i| match round_trip(i) {
                    Ok(p) => {
                        let prev = seen[(p / 64) as usize].fetch_or(1 << (p % 64), Ordering::Relaxed);
                        (prev & (1 << (p % 64)) != 0).then(|| (i, format!("physical {p} hit twice (logical {i})")))
                    }
                    Err(e) => Some((i, e)),
                })
                .collect();
            bad.sort();
            let n_bad = bad.len();
            Outcome::new(n_bad == 0, format!("{total} slots round-trip exhaustively, {n_bad} failures"))
                .with_witnesses(bad.into_iter().take(MAX_WITNESSES).map(|(_, e)| e).collect())
        }
        VerifyMode::Sampled => {
            let mut rng = trial_rng(seed, 2);
            let mut bad = Vec::new();
            for _ in 0..samples {
                let i = rng.random_range(0..total);
                if let Err(e) = round_trip(i) {
                    bad.push(e);
                }
                // physical side: every face must come back to itself
                let p = rng.random_range(0..total);
                match map.physical_to_logical_index(p).and_then(|l| map.logical_to_physical_index(l)) {
                    Ok(back) if back == p => {}
                    Ok(back) => bad.push(format!("physical {p} -> physical {back}")),
                    Err(e) => bad.push(e.to_string()),
                }
            }
            let n_bad = bad.len();
            Outcome::new(n_bad == 0, format!("{samples} logical and {samples} physical round-trips, {n_bad} failures"))
                .with_witnesses(bad.into_iter().take(MAX_WITNESSES).collect())
        }
    }
}

pub fn build_report(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let mut generators = build_generators(args.n)?;
    if args.corrupt_generator {
        let last = generators.vertical[0].entries().len() - 1;
        let mut g = generators.vertical[0].entries().to_vec();
        g[last] += 1;
        generators.vertical[0] = IntVector::new(g);
    }
    let code = PerfectLeeCode::from_generators(generators)?;
    let map = InterleavingMap::from_code(code.clone());
    let packing_mode = match args.mode {
        VerifyMode::Exhaustive => PackingMode::Exhaustive,
        VerifyMode::Sampled => PackingMode::Sampled { samples: args.samples, seed: args.seed },
    };

    let mut checks = Vec::new();
    let mut timed = |name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        checks.push(Check {
            name,
            passed: o.passed,
            detail: o.detail,
            witnesses: o.witnesses,
            seconds: Some(start.elapsed().as_secs_f64()),
        });
    };
    timed("determinant", &|| determinant(&code));
    timed("generator-orthogonality", &|| orthogonality(&code));
    timed("nested-chain", &|| nested_chain(&code));
    timed("perfect-packing", &|| packing(&code, packing_mode));
    timed("min-distance", &|| min_distance(&code));
    timed("section-distance", &|| section_distance(&code));
    timed("codeword-rank-bijection", &|| rank_bijection(&code, args.mode, args.samples, args.seed));
    timed("interleaver-bijection", &|| interleaver_bijection(&map, args.mode, args.samples, args.seed));

    Ok(VerifyReport {
        n: code.n(),
        q: code.q(),
        mode: match args.mode {
            VerifyMode::Exhaustive => "exhaustive",
            VerifyMode::Sampled => "sampled",
        },
        samples: (args.mode == VerifyMode::Sampled).then_some(args.samples),
        seed: args.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn render(report: &VerifyReport, format: OutputFormat, timing: bool) -> String {
    match format {
        OutputFormat::Json => {
            let mut r = serde_json::to_value(report).expect("serializable");
            if !timing {
                for c in r["checks"].as_array_mut().expect("array") {
                    c.as_object_mut().expect("object").shift_remove("seconds");
                }
            }
            serde_json::to_string_pretty(&r).expect("serializable") + "\n"
        }
        OutputFormat::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for c in &report.checks {
                writeln!(s, "{},{},\"{}\"", c.name, c.passed, c.detail.replace('"', "'")).unwrap();
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            writeln!(s, "verify n = {}, q = {}, mode {}", report.n, report.q, report.mode).unwrap();
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                write!(s, "{status}  {:<24} {}", c.name, c.detail).unwrap();
                match c.seconds {
                    Some(t) => writeln!(s, "  [{t:.3} s]").unwrap(),
                    None => writeln!(s).unwrap(),
                }
                for w in &c.witnesses {
                    writeln!(s, "        witness: {w}").unwrap();
                }
            }
            writeln!(s, "{}", if report.passed { "all checks passed" } else { "some checks FAILED" }).unwrap();
            s
        }
    }
}

pub fn run(args: &VerifyArgs) -> Result<Report, CliError> {
    let report = build_report(args)?;
    let body = render(&report, args.output.format, args.timing);
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    Ok(Report {
        body,
        passed: report.passed,
        failure: (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", "))),
    })
}
