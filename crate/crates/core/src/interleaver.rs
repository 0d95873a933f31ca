//! Burst-error interleaving of the `alpha q^n` qubits of the `q^n` torus.
//!
//! A logical address `(j, r, o, p)` names qubit `p` of orientation block `o`
//! of logical codeword `r` in cross-section `j`. With `s = q^{n-3}`, the rank
//! splits into a super-block `B = r / s` and a block rank `t = r % s`. The
//! qubit is placed on the hypercube at slot `B` of the Lee sphere around the
//! physical codeword of rank `t q + p` in section `j`, keeping orientation `o`.
//!
//! Consequently the `q` qubits of one logical codeword and orientation occupy
//! the same slot of `q` distinct physical codewords. Two hypercubes of one Lee
//! sphere can only share a logical codeword if they share a slot, which would
//! make their codewords differ by a vector of weight at most 2.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::{hypercube_from_index_unchecked, slot_order, ResidueVector, SlotOffset};
use crate::lee_code::{PerfectLeeCode, MIN_DIMENSION};
use crate::toric::FaceIndex;

pub use crate::lattice::slot_order as sphere_slot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicalAddress {
    pub section: u32,
    pub rank: u64,
    pub orientation: usize,
    pub position: u32,
}

/// The interleaving permutation, evaluated on demand in `O(n^2)` per query.
#[derive(Debug, Clone)]
pub struct InterleavingMap {
    code: PerfectLeeCode,
    /// `q^{n-3}`, codewords per super-block.
    block: u64,
}

impl InterleavingMap {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self::from_code(PerfectLeeCode::new(n)?))
    }

    pub fn from_code(code: PerfectLeeCode) -> Self {
        let block = (code.q() as u64).pow(code.n() as u32 - 3);
        InterleavingMap { code, block }
    }

    pub fn code(&self) -> &PerfectLeeCode {
        &self.code
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn q(&self) -> u32 {
        self.code.q()
    }

    pub fn alpha(&self) -> usize {
        self.code.alpha()
    }

    /// `alpha q^n`.
    pub fn total_slots(&self) -> u64 {
        self.code.hypercubes() * self.alpha() as u64
    }

    pub fn super_block(&self, addr: &LogicalAddress) -> u64 {
        addr.rank / self.block
    }

    pub fn block_rank(&self, addr: &LogicalAddress) -> u64 {
        addr.rank % self.block
    }

    fn check_address(&self, addr: &LogicalAddress) -> Result<()> {
        if addr.section >= self.q()
            || addr.rank >= self.code.codewords_per_section()
            || addr.orientation >= self.alpha()
            || addr.position >= self.q()
        {
            return invalid(format!("logical address {addr} out of range for n = {}", self.n()));
        }
        Ok(())
    }

    /// `((j q^{n-2} + r) alpha + o) q + p`.
    pub fn logical_index(&self, addr: &LogicalAddress) -> Result<u64> {
        self.check_address(addr)?;
        let q = self.q() as u64;
        let codeword = addr.section as u64 * self.code.codewords_per_section() + addr.rank;
        Ok((codeword * self.alpha() as u64 + addr.orientation as u64) * q + addr.position as u64)
    }

    pub fn logical_from_index(&self, index: u64) -> Result<LogicalAddress> {
        if index >= self.total_slots() {
            return invalid(format!("logical index {index} out of range 0..{}", self.total_slots()));
        }
        let q = self.q() as u64;
        let alpha = self.alpha() as u64;
        let position = (index % q) as u32;
        let rest = index / q;
        let orientation = (rest % alpha) as usize;
        let codeword = rest / alpha;
        let per_section = self.code.codewords_per_section();
        Ok(LogicalAddress {
            section: (codeword / per_section) as u32,
            rank: codeword % per_section,
            orientation,
            position,
        })
    }

    pub fn logical_to_physical(&self, addr: &LogicalAddress) -> Result<FaceIndex> {
        self.check_address(addr)?;
        let super_block = (addr.rank / self.block) as usize;
        let t = addr.rank % self.block;
        let c = self.code.codeword_unchecked(addr.section, t * self.q() as u64 + addr.position as u64);
        let anchor = c.point.offset(slot_order(self.n(), super_block)?);
        FaceIndex::with_orientation(anchor, addr.orientation)
    }

    pub fn physical_to_logical(&self, face: &FaceIndex) -> Result<LogicalAddress> {
        let anchor = face.anchor();
        if anchor.dim() != self.n() || anchor.modulus() != self.q() {
            return invalid(format!(
                "face of dimension {} mod {} used with n = {}",
                anchor.dim(),
                anchor.modulus(),
                self.n()
            ));
        }
        let tile = self.code.tile_assign(anchor);
        let q = self.q() as u64;
        let physical_rank = tile.codeword.rank;
        let (t, position) = (physical_rank / q, (physical_rank % q) as u32);
        Ok(LogicalAddress {
            section: tile.codeword.section,
            rank: tile.slot as u64 * self.block + t,
            orientation: face.orientation(),
            position,
        })
    }

    /// Physical face index of the qubit at `logical` position of the stream.
    pub fn logical_to_physical_index(&self, logical: u64) -> Result<u64> {
        let addr = self.logical_from_index(logical)?;
        Ok(self.logical_to_physical(&addr)?.linear_index())
    }

    pub fn physical_to_logical_index(&self, physical: u64) -> Result<u64> {
        let face = FaceIndex::from_linear_index(physical, self.n(), self.q())?;
        self.logical_index(&self.physical_to_logical(&face)?)
    }

    /// `(logical, physical)` pairs in logical order.
    pub fn permutation(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..self.total_slots()).map(move |i| (i, self.logical_to_physical_index(i).expect("index in range")))
    }
}

impl fmt::Display for LogicalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j={}, r={}, o={}, p={})", self.section, self.rank, self.orientation, self.position)
    }
}

/// `[[alpha q^n, alpha q^{n-1}, t_i = q^2]]` with rate and gain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavedParams {
    pub n: usize,
    pub q: u32,
    pub length: u128,
    pub dimension: u128,
    pub capability: u64,
    pub rate: Ratio<u128>,
    pub gain: Ratio<u128>,
}

pub fn interleaved_params(n: usize) -> Result<InterleavedParams> {
    if n < MIN_DIMENSION {
        return Err(Error::UnsupportedDimension(n));
    }
    let q = 2 * n as u128 + 1;
    let alpha = (n * (n - 1) / 2) as u128;
    let overflow = || Error::InvalidArgument(format!("interleaved length overflows for n = {n}"));
    let dimension = (1..n).try_fold(alpha, |acc, _| acc.checked_mul(q)).ok_or_else(overflow)?;
    let length = dimension.checked_mul(q).ok_or_else(overflow)?;
    let capability = (q * q) as u64;
    let rate = Ratio::new(1, q);
    Ok(InterleavedParams {
        n,
        q: q as u32,
        length,
        dimension,
        capability,
        rate,
        gain: rate * Ratio::from_integer(capability as u128 + 1),
    })
}

/// Burst channel models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BurstModel {
    /// One code-aligned Lee sphere per cross-section, `q^2` errors.
    Aligned,
    /// One Lee sphere at a uniform center, `q` errors.
    Translate,
    /// `q` Lee spheres, the `j`-th centered in section `j`.
    MultiTranslate,
    /// `count` distinct uniform faces, no shape constraint.
    UniformRandom { count: u64 },
}

impl BurstModel {
    pub fn tag(&self) -> &'static str {
        match self {
            BurstModel::Aligned => "aligned",
            BurstModel::Translate => "translate",
            BurstModel::MultiTranslate => "multi-translate",
            BurstModel::UniformRandom { .. } => "uniform-random",
        }
    }

    /// Parses a model tag; `uniform-random` takes its error count from `count`.
    pub fn parse(tag: &str, count: Option<u64>) -> Result<Self> {
        match tag {
            "aligned" => Ok(BurstModel::Aligned),
            "translate" => Ok(BurstModel::Translate),
            "multi-translate" => Ok(BurstModel::MultiTranslate),
            "uniform-random" => match count {
                Some(count) => Ok(BurstModel::UniformRandom { count }),
                None => invalid("uniform-random needs an error count"),
            },
            other => invalid(format!("unknown burst model '{other}'")),
        }
    }
}

impl FromStr for BurstModel {
    type Err = Error;

    /// Accepts `uniform-random:<count>` in addition to the bare tags.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("uniform-random", count)) => {
                let count = count.parse().map_err(|_| Error::InvalidArgument(format!("bad error count in '{s}'")))?;
                Ok(BurstModel::UniformRandom { count })
            }
            _ => BurstModel::parse(s, None),
        }
    }
}

impl fmt::Display for BurstModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BurstModel::UniformRandom { count } => write!(f, "uniform-random:{count}"),
            other => f.write_str(other.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurstPattern {
    pub model: BurstModel,
    /// Distinct errored faces.
    pub faces: Vec<FaceIndex>,
    pub centers: Vec<ResidueVector>,
}

impl BurstPattern {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

pub fn make_burst(map: &InterleavingMap, model: BurstModel, seed: u64) -> Result<BurstPattern> {
    make_burst_with(map, model, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn make_burst_with<R: Rng + ?Sized>(map: &InterleavingMap, model: BurstModel, rng: &mut R) -> Result<BurstPattern> {
    let n = map.n();
    let q = map.q();
    let alpha = map.alpha();
    let code = map.code();
    let sphere_faces =
        |center: &ResidueVector, rng: &mut R, faces: &mut Vec<FaceIndex>, used: &mut HashSet<ResidueVector>| {
            for b in 0..=2 * n {
                let cube = center.offset(slot_order(n, b).expect("slot in range"));
                if used.insert(cube.clone()) {
                    let o = rng.random_range(0..alpha);
                    faces.push(FaceIndex::with_orientation(cube, o).expect("orientation in range"));
                }
            }
        };

    let mut faces = Vec::new();
    let mut centers = Vec::new();
    let mut used = HashSet::new();
    match model {
        BurstModel::Aligned => {
            for j in 0..q {
                let c = code.codeword_unchecked(j, rng.random_range(0..code.codewords_per_section()));
                sphere_faces(&c.point, rng, &mut faces, &mut used);
                centers.push(c.point);
            }
        }
        BurstModel::Translate => {
            let z = hypercube_from_index_unchecked(rng.random_range(0..code.hypercubes()), n, q);
            sphere_faces(&z, rng, &mut faces, &mut used);
            centers.push(z);
        }
        BurstModel::MultiTranslate => {
            // overlapping spheres keep the first error placed on a shared hypercube
            for j in 0..q {
                let mut z =
                    hypercube_from_index_unchecked(rng.random_range(0..code.hypercubes()), n, q).entries().to_vec();
                z[0] = j;
                let z = ResidueVector::from_raw(z, q);
                sphere_faces(&z, rng, &mut faces, &mut used);
                centers.push(z);
            }
        }
        BurstModel::UniformRandom { count } => {
            let total = map.total_slots();
            if count > total {
                return invalid(format!("cannot place {count} distinct errors on {total} faces"));
            }
            let mut chosen = HashSet::with_capacity(count as usize);
            while (chosen.len() as u64) < count {
                let idx = rng.random_range(0..total);
                if chosen.insert(idx) {
                    faces.push(FaceIndex::from_linear_index(idx, n, q)?);
                }
            }
        }
    }
    Ok(BurstPattern { model, faces, centers })
}

/// Per-logical-codeword error census after deinterleaving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionReport {
    /// `(section, rank) -> errors`, only codewords that were hit.
    pub tallies: BTreeMap<(u32, u64), u32>,
    pub success: bool,
    /// Codewords holding more than one error.
    pub failures: Vec<((u32, u64), u32)>,
}

impl CorrectionReport {
    pub fn max_tally(&self) -> u32 {
        self.tallies.values().copied().max().unwrap_or(0)
    }

    pub fn codewords_hit(&self) -> usize {
        self.tallies.len()
    }

    pub fn errors(&self) -> u64 {
        self.tallies.values().map(|&c| c as u64).sum()
    }
}

/// Component-code correction capability, `t = floor((d_M - 1) / 2)` with `d_M = 3`.
pub const COMPONENT_CAPABILITY: u32 = 1;

pub fn deinterleave_and_correct(map: &InterleavingMap, burst: &BurstPattern) -> Result<CorrectionReport> {
    let mut tallies = BTreeMap::new();
    for face in &burst.faces {
        let addr = map.physical_to_logical(face)?;
        *tallies.entry((addr.section, addr.rank)).or_insert(0u32) += 1;
    }
    let failures: Vec<_> = tallies.iter().filter(|(_, &c)| c > COMPONENT_CAPABILITY).map(|(&k, &c)| (k, c)).collect();
    Ok(CorrectionReport { success: failures.is_empty(), tallies, failures })
}

/// Aggregate over many independent bursts. Every field derives from integer
/// sums, so the record is identical for any worker count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationStats {
    pub n: usize,
    pub q: u32,
    pub model: String,
    pub trials: u64,
    pub master_seed: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub total_errors: u64,
    pub mean_errors_per_trial: f64,
    /// Largest per-codeword tally seen in any trial.
    pub max_tally: u32,
    pub mean_max_tally: f64,
    /// `k -> number of (trial, codeword) pairs holding exactly k errors`.
    pub tally_histogram: BTreeMap<u32, u64>,
    /// `k -> number of trials whose worst codeword held k errors`.
    pub max_tally_histogram: BTreeMap<u32, u64>,
    /// Lowest failing trial indices, at most [`MAX_FAILURE_WITNESSES`].
    pub failed_trials: Vec<u64>,
}

pub const MAX_FAILURE_WITNESSES: usize = 16;

/// RNG of trial `trial`: the master seed picks the ChaCha key, the trial index
/// the stream, so trials are independent of scheduling.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Default, Clone)]
struct Tally {
    trials: u64,
    successes: u64,
    errors: u64,
    max_tally: u32,
    max_tally_sum: u64,
    hist: HashMap<u32, u64>,
    max_hist: HashMap<u32, u64>,
    failed: Vec<u64>,
}

impl Tally {
    fn record(mut self, trial: u64, report: &CorrectionReport) -> Self {
        let m = report.max_tally();
        self.trials += 1;
        self.errors += report.errors();
        self.max_tally = self.max_tally.max(m);
        self.max_tally_sum += m as u64;
        *self.max_hist.entry(m).or_default() += 1;
        for &c in report.tallies.values() {
            *self.hist.entry(c).or_default() += 1;
        }
        if report.success {
            self.successes += 1;
        } else {
            self.failed.push(trial);
        }
        self
    }

    fn merge(mut self, other: Tally) -> Self {
        self.trials += other.trials;
        self.successes += other.successes;
        self.errors += other.errors;
        self.max_tally = self.max_tally.max(other.max_tally);
        self.max_tally_sum += other.max_tally_sum;
        for (k, v) in other.hist {
            *self.hist.entry(k).or_default() += v;
        }
        for (k, v) in other.max_hist {
            *self.max_hist.entry(k).or_default() += v;
        }
        self.failed.extend(other.failed);
        self.failed.sort_unstable();
        self.failed.truncate(MAX_FAILURE_WITNESSES);
        self
    }
}

pub fn simulate(map: &InterleavingMap, model: BurstModel, trials: u64, master_seed: u64) -> Result<SimulationStats> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    if let BurstModel::UniformRandom { count } = model {
        if count > map.total_slots() {
            return invalid(format!("cannot place {count} distinct errors on {} faces", map.total_slots()));
        }
    }
    let tally = (0..trials)
        .into_par_iter()
        .try_fold(Tally::default, |acc, trial| -> Result<Tally> {
            let burst = make_burst_with(map, model, &mut trial_rng(master_seed, trial))?;
            Ok(acc.record(trial, &deinterleave_and_correct(map, &burst)?))
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    Ok(SimulationStats {
        n: map.n(),
        q: map.q(),
        model: model.to_string(),
        trials,
        master_seed,
        successes: tally.successes,
        success_rate: tally.successes as f64 / trials as f64,
        total_errors: tally.errors,
        mean_errors_per_trial: tally.errors as f64 / trials as f64,
        max_tally: tally.max_tally,
        mean_max_tally: tally.max_tally_sum as f64 / trials as f64,
        tally_histogram: tally.hist.into_iter().collect(),
        max_tally_histogram: tally.max_hist.into_iter().collect(),
        failed_trials: tally.failed,
    })
}

/// Whether one hypercube per slot of the sphere around `center` lands in
/// `q` distinct logical codewords, for every choice of orientations.
pub fn sphere_spreads(map: &InterleavingMap, center: &ResidueVector) -> Result<bool> {
    let n = map.n();
    let mut seen = HashSet::new();
    for b in 0..=2 * n {
        let offset: SlotOffset = slot_order(n, b)?;
        // orientation is carried through unchanged, so one orientation suffices
        let face = FaceIndex::with_orientation(center.offset(offset), 0)?;
        let addr = map.physical_to_logical(&face)?;
        if !seen.insert((addr.section, addr.rank)) {
            return Ok(false);
        }
    }
    Ok(true)
}
