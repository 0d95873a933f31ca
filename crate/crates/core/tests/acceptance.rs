//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p lee-toric --test acceptance` (add `--release` for
//! production timings; the dev profile is already optimized).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lee_toric::interleaver::{
    deinterleave_and_correct, interleaved_params, make_burst_with, simulate, trial_rng, BurstModel,
};
use lee_toric::lattice::{mannheim_weight, IntVector, ResidueVector};
use lee_toric::lee_code::{check_functional, PackingMode};
use lee_toric::toric::{code_params, kitaev_2d_stabilizers};
use lee_toric::{InterleavingMap, PerfectLeeCode};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < budget, || format!("{what} took {:.2} s, budget {:.0} s", t.as_secs_f64(), budget.as_secs_f64()))
}

/// Printed 5-decimal literal as an exact rational.
fn printed(s: &str) -> Ratio<u128> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let scale = 10u128.pow(frac.len() as u32);
    Ratio::new(int.parse::<u128>().unwrap() * scale + frac.parse::<u128>().unwrap_or(0), scale)
}

fn diff(a: &Ratio<u128>, b: &Ratio<u128>) -> Ratio<u128> {
    if a > b {
        a - b
    } else {
        b - a
    }
}

fn table1() -> Outcome {
    let start = Instant::now();
    let rows = [
        (5, 110, 10, 3, "0.09091", "0.18182"),
        (6, 195, 15, 3, "0.07692", "0.15385"),
        (7, 315, 21, 3, "0.06667", "0.13333"),
        (8, 476, 28, 3, "0.05882", "0.11765"),
    ];
    let tol = Ratio::new(5, 1_000_000);
    for (n, len, k, d, r, g) in rows {
        let p = code_params(n).map_err(|e| e.to_string())?;
        ensure((p.length, p.dimension, p.distance) == (len, k, d), || {
            format!("n = {n}: [[{},{},{}]] != [[{len},{k},{d}]]", p.length, p.dimension, p.distance)
        })?;
        for (name, got, want) in [("R", &p.rate, printed(r)), ("G", &p.gain, printed(g))] {
            ensure(diff(got, &want) <= tol, || format!("n = {n}: {name} = {got} outside +-5e-6 of {r}"))?;
        }
    }
    within_budget(start, Duration::from_secs(1), "toric parameter table")?;
    Ok("[[110,10,3]] [[195,15,3]] [[315,21,3]] [[476,28,3]], R and G within 5e-6".into())
}

fn determinant() -> Outcome {
    let start = Instant::now();
    for n in 5..=12 {
        let code = PerfectLeeCode::new(n).map_err(|e| e.to_string())?;
        let q = 2 * n as u64 + 1;
        let det = code.matrix().determinant();
        ensure(det.magnitude() == &q.into(), || format!("n = {n}: det = {det}, expected +-{q}"))?;
        let h = check_functional(n).map_err(|e| e.to_string())?;
        for (i, row) in code.matrix().rows().iter().enumerate() {
            ensure(row.dot(&h).rem_euclid(q as i64) == 0, || format!("n = {n}: row {i} not orthogonal to h"))?;
        }
        for i in 0..n {
            let qe = IntVector::unit(n, i).scaled(q as i64);
            ensure(code.lattice_membership(&qe), || format!("n = {n}: q e_{i} outside the lattice"))?;
        }
    }
    within_budget(start, Duration::from_secs(1), "determinant")?;
    Ok("|det A| = 2n+1 for n = 5..12, rows orthogonal to h, q e_i in lattice".into())
}

fn distance() -> Outcome {
    let start = Instant::now();
    let mut witnesses = Vec::new();
    for n in 5..=8 {
        let code = PerfectLeeCode::new(n).map_err(|e| e.to_string())?;
        let q = code.q();
        let search = code.min_mannheim_distance(3);
        ensure(search.distance == Some(3), || format!("n = {n}: distance {:?}", search.distance))?;
        ensure(search.lower_bound >= 3, || format!("n = {n}: weights below {} unchecked", search.lower_bound))?;
        for w in [1u32, 2] {
            ensure(search.candidates.iter().any(|&(cw, _)| cw == w), || format!("n = {n}: weight {w} not enumerated"))?;
        }
        let witness = search.witness.clone().ok_or("missing witness")?;
        let x = ResidueVector::from_ints(&witness, q).map_err(|e| e.to_string())?;
        ensure(mannheim_weight(&x) == 3 && code.syndrome(&x) == 0 && !x.is_zero(), || {
            format!("n = {n}: witness {witness:?} is not a weight-3 codeword")
        })?;
        ensure(code.lattice_membership(&IntVector::new(witness.clone())), || {
            format!("n = {n}: witness not in lattice")
        })?;
        let section = code.section_subcode_distance();
        ensure(section.distance == 4, || format!("n = {n}: section distance {}", section.distance))?;
        witnesses.push(format!("{witness:?}"));
    }
    within_budget(start, Duration::from_secs(10), "distance")?;
    Ok(format!("d_M = 3 for n = 5..8 (witness n=5 {}), section distance 4", witnesses[0]))
}

fn packing() -> Outcome {
    let start = Instant::now();
    let code = PerfectLeeCode::new(5).map_err(|e| e.to_string())?;
    let report = code.verify_perfect_packing(PackingMode::Exhaustive);
    ensure(report.passed() && report.exhaustive && report.hypercubes_checked == 11u64.pow(5), || {
        format!("n = 5 exhaustive: {:?}", report.violations)
    })?;
    within_budget(start, Duration::from_secs(30), "exhaustive packing at n = 5")?;
    let t5 = start.elapsed().as_secs_f64();
    for n in 6..=8 {
        let code = PerfectLeeCode::new(n).map_err(|e| e.to_string())?;
        let report = code.verify_perfect_packing(PackingMode::Sampled { samples: 1_000_000, seed: n as u64 });
        ensure(report.passed() && report.hypercubes_checked == 1_000_000, || {
            format!("n = {n} sampled: {} violations, first {:?}", report.violation_count, report.violations.first())
        })?;
    }
    Ok(format!("11^5 hypercubes covered once ({t5:.2} s), 10^6 samples clean at n = 6,7,8"))
}

fn interleaver() -> Outcome {
    let start = Instant::now();
    let map = InterleavingMap::new(5).map_err(|e| e.to_string())?;
    let total = map.total_slots();
    ensure(total == 1_610_510, || format!("n = 5 has {total} slots"))?;
    let mut seen = vec![false; total as usize];
    for (logical, physical) in map.permutation() {
        ensure(physical < total && !seen[physical as usize], || {
            format!("physical {physical} repeated or out of range")
        })?;
        seen[physical as usize] = true;
        let back = map.physical_to_logical_index(physical).map_err(|e| e.to_string())?;
        ensure(back == logical, || format!("logical {logical} -> {physical} -> {back}"))?;
    }
    within_budget(start, Duration::from_secs(60), "exhaustive interleaver at n = 5")?;
    let t5 = start.elapsed().as_secs_f64();
    for n in 6..=8 {
        let map = InterleavingMap::new(n).map_err(|e| e.to_string())?;
        let total = map.total_slots();
        let mut rng = ChaCha8Rng::seed_from_u64(0x1ea5e + n as u64);
        for _ in 0..1_000_000 {
            let x = rng.random_range(0..total);
            let p = map.logical_to_physical_index(x).map_err(|e| e.to_string())?;
            let l = map.physical_to_logical_index(p).map_err(|e| e.to_string())?;
            ensure(l == x, || format!("n = {n}: logical {x} -> {p} -> {l}"))?;
            let y = map.physical_to_logical_index(x).map_err(|e| e.to_string())?;
            let z = map.logical_to_physical_index(y).map_err(|e| e.to_string())?;
            ensure(z == x, || format!("n = {n}: physical {x} -> {y} -> {z}"))?;
        }
    }
    Ok(format!("1,610,510 slots round-trip ({t5:.2} s), 10^6 sampled both ways at n = 6,7,8"))
}

fn burst_spread() -> Outcome {
    for (n, trials) in [(5usize, 100_000u64), (6, 10_000)] {
        let map = InterleavingMap::new(n).map_err(|e| e.to_string())?;
        let q = map.q() as usize;
        for trial in 0..trials {
            let mut rng = trial_rng(0x5eed, trial);
            let burst = make_burst_with(&map, BurstModel::Translate, &mut rng).map_err(|e| e.to_string())?;
            ensure(burst.len() == q, || format!("n = {n} trial {trial}: {} faces", burst.len()))?;
            let report = deinterleave_and_correct(&map, &burst).map_err(|e| e.to_string())?;
            ensure(report.codewords_hit() == q, || {
                format!("n = {n} trial {trial}: {} distinct codewords, {:?}", report.codewords_hit(), report.failures)
            })?;
        }
    }
    Ok("10^5 translate bursts at n = 5 and 10^4 at n = 6 hit q distinct codewords".into())
}

fn aligned_capability() -> Outcome {
    let start = Instant::now();
    let map = InterleavingMap::new(5).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let stats = pool.install(|| simulate(&map, BurstModel::Aligned, 10_000, 0)).map_err(|e| e.to_string())?;
    ensure(stats.successes == stats.trials && stats.success_rate == 1.0, || {
        format!("success rate {} (failed trials {:?})", stats.success_rate, stats.failed_trials)
    })?;
    ensure(stats.total_errors == 121 * 10_000, || format!("{} errors in total", stats.total_errors))?;
    within_budget(start, Duration::from_secs(300), "aligned simulation")?;
    Ok(format!("10^4 aligned bursts of 121 errors, success rate 1.0, max tally {}", stats.max_tally))
}

fn table2() -> Outcome {
    let rows = [
        (5u32, 10u128, "0.09091", "11.09102"),
        (6, 15, "0.07692", "13.0764"),
        (7, 21, "0.06667", "15.06742"),
        (8, 28, "0.05882", "17.0578"),
    ];
    let rate_tol = Ratio::new(5, 1_000_000);
    let gain_tol = Ratio::new(5, 1000);
    let mut worst = Ratio::from_integer(0);
    for (n, alpha, r, g) in rows {
        let q = 2 * n as u128 + 1;
        let p = interleaved_params(n as usize).map_err(|e| e.to_string())?;
        let (len, k, t) = (alpha * q.pow(n), alpha * q.pow(n - 1), q * q);
        ensure((p.length, p.dimension, p.capability as u128) == (len, k, t), || {
            format!("n = {n}: [[{},{},{}]] != [[{len},{k},{t}]]", p.length, p.dimension, p.capability)
        })?;
        ensure(diff(&p.rate, &printed(r)) <= rate_tol, || format!("n = {n}: R_i = {}", p.rate))?;
        let dev = diff(&p.gain, &printed(g));
        ensure(dev <= gain_tol, || format!("n = {n}: G_i = {} deviates {dev} from {g}", p.gain))?;
        worst = worst.max(dev);
    }
    Ok(format!(
        "[[alpha q^n, alpha q^(n-1), q^2]] exact, max gain deviation {:.5}",
        *worst.numer() as f64 / *worst.denom() as f64
    ))
}

fn control() -> Outcome {
    let map = InterleavingMap::new(5).map_err(|e| e.to_string())?;
    let stats = simulate(&map, BurstModel::UniformRandom { count: 121 }, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(stats.success_rate < 1.0, || format!("uniform-random success rate {}", stats.success_rate))?;
    Ok(format!("uniform-random 121 errors, success rate {:.4} < 1", stats.success_rate))
}

fn kitaev() -> Outcome {
    let start = Instant::now();
    let check = kitaev_2d_stabilizers(5).map_err(|e| e.to_string())?;
    ensure(check.edges == 50, || format!("{} edges", check.edges))?;
    ensure(check.pairs_checked == 25 * 25, || format!("{} pairs checked", check.pairs_checked))?;
    ensure(check.commutes(), || format!("odd overlaps {:?}", check.odd_overlaps))?;
    within_budget(start, Duration::from_secs(1), "kitaev")?;
    Ok("50 edges, 625 vertex/face pairs, all overlaps even".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("toric parameter table", table1),
        ("determinant and chain", determinant),
        ("minimum distance", distance),
        ("perfect packing", packing),
        ("interleaver bijection", interleaver),
        ("burst spread", burst_spread),
        ("aligned burst capability", aligned_capability),
        ("interleaved parameter table", table2),
        ("uniform-random control", control),
        ("kitaev torus", kitaev),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.2} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
