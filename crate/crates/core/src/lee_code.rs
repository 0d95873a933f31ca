//! The single-error-correcting perfect Lee code `A Z^n / q Z^n`, `q = 2n + 1`.
//!
//! The code is the kernel of the check functional `h = (1, 2, ..., n)` modulo
//! `q`. Its generator matrix has rows `v, v1, v2, ..., v_{n-2}, v_{n-1}`:
//!
//! * `v = (0, ..., 0, 1, 2n-2)` and `v1 = (0, ..., 0, 1, -3)` generate each
//!   `q x q` cross-section,
//! * `v_k` for `2 <= k <= n-2` has ones at positions `k ..= n-1` (1-based) and
//!   moves between the `q x q` sections of a cross-section,
//! * `v_{n-1} = (1, 0, ..., 0, 2)` moves between the `q^{n-1}` cross-sections.
//!
//! Codewords of cross-section `j` are ranked by writing the rank in base `q`
//! with the `v` digit least significant, then the `v2`, `v3`, ... digits.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::{
    canonical_rep, hypercube_count, hypercube_from_index_unchecked, hypercube_lin_index, lee_sphere, mannheim_weight,
    slot_order, IntMatrix, IntVector, ResidueVector, SlotOffset,
};

/// Smallest dimension for which the generator family below is defined.
pub const MIN_DIMENSION: usize = 5;

/// `h = (1, 2, ..., n)`. Accepts `n >= 2` so the low-dimensional codes can be
/// checked as well.
pub fn check_functional(n: usize) -> Result<IntVector> {
    if n < 2 {
        return invalid(format!("check functional needs n >= 2, got {n}"));
    }
    Ok(IntVector::new((1..=n as i64).collect()))
}

pub fn modulus_for(n: usize) -> Result<u32> {
    u32::try_from(2 * n + 1).map_err(|_| Error::InvalidArgument(format!("dimension {n} too large")))
}

/// Generators of the code lattice, named after their role in the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub n: usize,
    pub q: u32,
    /// `(0, ..., 0, 1, 2n-2)`.
    pub v: IntVector,
    /// `(0, ..., 0, 1, -3)`.
    pub v1: IntVector,
    /// `v2 ..= v_{n-2}`, in that order.
    pub vertical: Vec<IntVector>,
    /// `v_{n-1} = (1, 0, ..., 0, 2)`.
    pub rise: IntVector,
}

impl GeneratorSet {
    /// Generator matrix rows in the order `v, v1, v2, ..., v_{n-2}, v_{n-1}`.
    pub fn rows(&self) -> Vec<IntVector> {
        let mut rows = Vec::with_capacity(self.n);
        rows.push(self.v.clone());
        rows.push(self.v1.clone());
        rows.extend(self.vertical.iter().cloned());
        rows.push(self.rise.clone());
        rows
    }

    /// `(label, generator)` pairs in matrix row order.
    pub fn labelled(&self) -> Vec<(String, &IntVector)> {
        let mut out = vec![("v".to_string(), &self.v), ("v1".to_string(), &self.v1)];
        for (i, g) in self.vertical.iter().enumerate() {
            out.push((format!("v{}", i + 2), g));
        }
        out.push((format!("v{}", self.n - 1), &self.rise));
        out
    }

    /// `v_k` for `1 <= k <= n-1`.
    pub fn generator(&self, k: usize) -> Option<&IntVector> {
        match k {
            1 => Some(&self.v1),
            k if k == self.n - 1 => Some(&self.rise),
            k if (2..=self.n - 2).contains(&k) => self.vertical.get(k - 2),
            _ => None,
        }
    }
}

pub fn build_generators(n: usize) -> Result<GeneratorSet> {
    if n < MIN_DIMENSION {
        return Err(Error::UnsupportedDimension(n));
    }
    let q = modulus_for(n)?;
    let ni = n as i64;

    let mut v = vec![0i64; n];
    v[n - 2] = 1;
    v[n - 1] = 2 * ni - 2;

    let mut v1 = vec![0i64; n];
    v1[n - 2] = 1;
    v1[n - 1] = -3;

    // v_{n-i}: ones at 1-based positions n-i ..= n-1, last coordinate solves
    // h . v_{n-i} = 0 (mod q), which reduces to -i(i+2) since n = -1/2 (mod q).
    let vertical = (2..=n - 2)
        .map(|k| {
            let i = (n - k) as i64;
            let mut g = vec![0i64; n];
            for x in &mut g[k - 1..n - 1] {
                *x = 1;
            }
            g[n - 1] = if i == 2 {
                2 * ni - 7
            } else {
                let r = (-i * (i + 2)).rem_euclid(q as i64) as u64;
                canonical_rep(r, q as u64).expect("odd modulus")
            };
            IntVector::new(g)
        })
        .collect();

    let mut rise = vec![0i64; n];
    rise[0] = 1;
    rise[n - 1] = 2;

    Ok(GeneratorSet { n, q, v: v.into(), v1: v1.into(), vertical, rise: rise.into() })
}

/// A codeword together with its cross-section label and rank inside it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    pub point: ResidueVector,
    pub section: u32,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileAssignment {
    pub codeword: Codeword,
    /// Lee-sphere slot of the queried hypercube relative to `codeword`.
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: Codeword,
    /// Offset of the received word from `codeword`, Mannheim weight at most 1.
    pub error: IntVector,
    pub slot: SlotOffset,
}

/// Outcome of the sphere search for the minimum nonzero codeword weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceSearch {
    /// `Some(d)` when a codeword of weight `d <= radius_cap` was found.
    pub distance: Option<u32>,
    /// Every nonzero vector of weight below this bound was checked and rejected.
    pub lower_bound: u32,
    pub witness: Option<Vec<i64>>,
    /// `(weight, vectors enumerated)` for each searched weight.
    pub candidates: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubcodeDistance {
    pub distance: u32,
    /// Coefficients `(a, b)` of the minimum-weight `a v + b v1`.
    pub witness: (u32, u32),
    pub combinations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PackingViolation {
    /// `{0} u {+-h_i}` misses or repeats a residue.
    ResidueCover { residue: u32, hits: u32 },
    /// A hypercube covered by zero or several codeword spheres.
    Cover { hypercube: Vec<u32>, count: u32 },
    /// The tile of a hypercube does not reconstruct from its (section, rank).
    Inconsistent { hypercube: Vec<u32>, codeword: Vec<u32>, reconstructed: Vec<u32> },
}

impl fmt::Display for PackingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tuple(v: &[u32]) -> String {
            let parts: Vec<String> = v.iter().map(u32::to_string).collect();
            format!("({})", parts.join(","))
        }
        match self {
            PackingViolation::ResidueCover { residue, hits } => {
                write!(f, "residue {residue} hit {hits} times by {{0, +-h_i}}")
            }
            PackingViolation::Cover { hypercube, count } => {
                write!(f, "hypercube {} covered {count} times", tuple(hypercube))
            }
            PackingViolation::Inconsistent { hypercube, codeword, reconstructed } => write!(
                f,
                "hypercube {} tiles onto {} but its rank reconstructs {}",
                tuple(hypercube),
                tuple(codeword),
                tuple(reconstructed)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingReport {
    pub exhaustive: bool,
    pub residue_cover_ok: bool,
    pub hypercubes_checked: u64,
    pub codewords: u64,
    pub violation_count: u64,
    /// First few violations, in index order.
    pub violations: Vec<PackingViolation>,
}

impl PackingReport {
    pub fn passed(&self) -> bool {
        self.residue_cover_ok && self.violation_count == 0
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 8;

/// The perfect Lee code of dimension `n`, immutable after construction.
#[derive(Debug, Clone)]
pub struct PerfectLeeCode {
    n: usize,
    q: u32,
    alpha: usize,
    h: IntVector,
    generators: GeneratorSet,
    matrix: IntMatrix,
    /// Generators reduced mod q, in rank-digit order: v, v2, ..., v_{n-2}.
    digit_generators: Vec<Vec<u32>>,
    rise: Vec<u32>,
    /// `syndrome -> slot` lookup, one entry per residue.
    slot_by_syndrome: Vec<Option<usize>>,
}

impl PerfectLeeCode {
    /// Builds the code and its generator matrix for `n >= 5`.
    pub fn new(n: usize) -> Result<Self> {
        Self::from_generators(build_generators(n)?)
    }

    /// Builds a code around an arbitrary generator set of the expected shape.
    ///
    /// No orthogonality check is made here, so a perturbed generator set
    /// produces a code whose verification reports fail. `new` is the normal
    /// entry point.
    pub fn from_generators(generators: GeneratorSet) -> Result<Self> {
        let n = generators.n;
        if n < MIN_DIMENSION {
            return Err(Error::UnsupportedDimension(n));
        }
        let q = modulus_for(n)?;
        if generators.q != q || generators.vertical.len() != n - 3 {
            return invalid("generator set does not match its dimension");
        }
        let rows = generators.rows();
        if rows.iter().any(|r| r.dim() != n) {
            return invalid("generator of wrong length");
        }
        let matrix = IntMatrix::new(rows)?;
        let h = check_functional(n)?;
        let reduce = |g: &IntVector| g.reduce(q).map(|r| r.entries().to_vec());
        let mut digit_generators = vec![reduce(&generators.v)?];
        for g in &generators.vertical {
            digit_generators.push(reduce(g)?);
        }
        let rise = reduce(&generators.rise)?;

        let mut slot_by_syndrome = vec![None; q as usize];
        for b in 0..=2 * n {
            let s = slot_order(n, b)?.syndrome(h.entries(), q) as usize;
            slot_by_syndrome[s].get_or_insert(b);
        }

        Ok(PerfectLeeCode {
            n,
            q,
            alpha: n * (n - 1) / 2,
            h,
            generators,
            matrix,
            digit_generators,
            rise,
            slot_by_syndrome,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Faces per hypercube, `n(n-1)/2`.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn check_functional(&self) -> &IntVector {
        &self.h
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `q^{n-2}`.
    pub fn codewords_per_section(&self) -> u64 {
        (self.q as u64).pow(self.n as u32 - 2)
    }

    /// `q^{n-1}`.
    pub fn size(&self) -> u64 {
        (self.q as u64).pow(self.n as u32 - 1)
    }

    /// `q^n`, the number of hypercubes of the torus.
    pub fn hypercubes(&self) -> u64 {
        hypercube_count(self.n, self.q).expect("q^n fits in u64")
    }

    /// Whether `x` lies in `A Z^n`, i.e. `h . x = 0 (mod q)`.
    pub fn lattice_membership(&self, x: &IntVector) -> bool {
        x.dim() == self.n && self.h.dot(x).rem_euclid(self.q as i64) == 0
    }

    pub fn syndrome(&self, x: &ResidueVector) -> u32 {
        let q = self.q as u64;
        let s: u64 = x.entries().iter().zip(self.h.entries()).map(|(&xi, &hi)| xi as u64 * hi as u64 % q).sum();
        (s % q) as u32
    }

    fn check_residue(&self, x: &ResidueVector) {
        assert!(
            x.dim() == self.n && x.modulus() == self.q,
            "residue vector of dim {} mod {} used with code n = {}",
            x.dim(),
            x.modulus(),
            self.n
        );
    }

    pub fn codeword_from_rank(&self, section: u32, rank: u64) -> Result<Codeword> {
        if section >= self.q {
            return invalid(format!("section {section} out of range 0..{}", self.q));
        }
        if rank >= self.codewords_per_section() {
            return invalid(format!("rank {rank} out of range 0..{}", self.codewords_per_section()));
        }
        Ok(self.codeword_unchecked(section, rank))
    }

    pub(crate) fn codeword_unchecked(&self, section: u32, rank: u64) -> Codeword {
        let q = self.q as u64;
        let mut acc: Vec<u64> = self.rise.iter().map(|&x| x as u64 * section as u64).collect();
        let mut r = rank;
        for g in &self.digit_generators {
            let digit = r % q;
            r /= q;
            if digit != 0 {
                for (a, &x) in acc.iter_mut().zip(g) {
                    *a += digit * x as u64;
                }
            }
        }
        let entries = acc.into_iter().map(|a| (a % q) as u32).collect();
        Codeword { point: ResidueVector::from_raw(entries, self.q), section, rank }
    }

    /// `(section, rank)` read off coordinates `1 ..= n-2` (0-based) using the
    /// unit-staircase shape of `v, v2, ..., v_{n-2}`. Only meaningful for
    /// codewords; see [`Self::rank_of`] for the checked version.
    fn rank_digits(&self, point: &ResidueVector) -> (u32, u64) {
        let q = self.q;
        let x = point.entries();
        let n = self.n;
        let diff = |a: u32, b: u32| (a + q - b) % q;
        let q64 = q as u64;
        // digits m_v, m_2, m_3, ..., m_{n-2}; rank = m_v + q m_2 + q^2 m_3 + ...
        let mut rank = 0u64;
        for k in (3..=n - 2).rev() {
            rank = rank * q64 + diff(x[k - 1], x[k - 2]) as u64;
        }
        rank = rank * q64 + x[1] as u64;
        rank = rank * q64 + diff(x[n - 2], x[n - 3]) as u64;
        (x[0], rank)
    }

    /// Inverse of [`Self::codeword_from_rank`]; fails if `point` is not a codeword.
    pub fn rank_of(&self, point: &ResidueVector) -> Result<Codeword> {
        self.check_residue(point);
        let (section, rank) = self.rank_digits(point);
        let c = self.codeword_unchecked(section, rank);
        if c.point != *point {
            return invalid(format!("{point} is not a codeword"));
        }
        Ok(c)
    }

    fn slot_for_syndrome(&self, s: u32) -> usize {
        self.slot_by_syndrome[s as usize].expect("{0, +-h_i} covers Z_q for q = 2n+1")
    }

    /// Nearest codeword and the unit error separating it from `x`.
    pub fn decode_single(&self, x: &ResidueVector) -> Decoded {
        let tile = self.tile_assign(x);
        let slot = slot_order(self.n, tile.slot).expect("slot in range");
        Decoded { codeword: tile.codeword, error: slot.to_vector(self.n), slot }
    }

    /// The codeword whose Lee sphere contains `z`, with the slot of `z` in it.
    pub fn tile_assign(&self, z: &ResidueVector) -> TileAssignment {
        self.check_residue(z);
        let slot = self.slot_for_syndrome(self.syndrome(z));
        let offset = slot_order(self.n, slot).expect("slot in range");
        let center = z.translate(&offset.to_vector(self.n).scaled(-1));
        let (section, rank) = self.rank_digits(&center);
        TileAssignment { codeword: Codeword { point: center, section, rank }, slot }
    }

    /// Sphere search: enumerates every vector of Mannheim weight
    /// `1 ..= radius_cap` and returns the first weight holding a codeword.
    pub fn min_mannheim_distance(&self, radius_cap: u32) -> DistanceSearch {
        let max_entry = (self.q as i64 - 1) / 2;
        let mut candidates = Vec::new();
        for w in 1..=radius_cap {
            let mut count = 0u64;
            let mut witness = None;
            let mut buf = vec![0i64; self.n];
            enumerate_weight(&mut buf, 0, w as i64, max_entry, &mut |x| {
                count += 1;
                if witness.is_none() && self.lattice_membership(&IntVector::new(x.to_vec())) {
                    witness = Some(x.to_vec());
                }
            });
            candidates.push((w, count));
            if witness.is_some() {
                return DistanceSearch { distance: Some(w), lower_bound: w, witness, candidates };
            }
        }
        DistanceSearch { distance: None, lower_bound: radius_cap + 1, witness: None, candidates }
    }

    /// Minimum weight of the nonzero `a v + b v1 (mod q)`, exhaustive in `(a, b)`.
    pub fn section_subcode_distance(&self) -> SubcodeDistance {
        let q = self.q;
        let v = self.generators.v.reduce(q).expect("valid modulus");
        let v1 = self.generators.v1.reduce(q).expect("valid modulus");
        let mut best: Option<(u32, (u32, u32))> = None;
        for a in 0..q {
            for b in 0..q {
                let entries: Vec<u32> = v
                    .entries()
                    .iter()
                    .zip(v1.entries())
                    .map(|(&x, &y)| ((a as u64 * x as u64 + b as u64 * y as u64) % q as u64) as u32)
                    .collect();
                let p = ResidueVector::from_raw(entries, q);
                if p.is_zero() {
                    continue;
                }
                let w = mannheim_weight(&p) as u32;
                if best.is_none_or(|(bw, _)| w < bw) {
                    best = Some((w, (a, b)));
                }
            }
        }
        let (distance, witness) = best.unwrap_or((0, (0, 0)));
        SubcodeDistance { distance, witness, combinations: (q as u64) * (q as u64) }
    }

    fn residue_cover(&self) -> Vec<PackingViolation> {
        let mut hits = vec![0u32; self.q as usize];
        for b in 0..=2 * self.n {
            let s = slot_order(self.n, b).expect("slot in range").syndrome(self.h.entries(), self.q);
            hits[s as usize] += 1;
        }
        hits.iter()
            .enumerate()
            .filter(|&(_, &c)| c != 1)
            .map(|(r, &c)| PackingViolation::ResidueCover { residue: r as u32, hits: c })
            .collect()
    }

    /// Checks a single hypercube: its tile reconstructs from (section, rank)
    /// and exactly one of its `q` sphere neighbours is a generated codeword.
    fn check_hypercube(&self, z: &ResidueVector) -> Option<PackingViolation> {
        let tile = self.tile_assign(z);
        let rebuilt = self.codeword_unchecked(tile.codeword.section, tile.codeword.rank);
        if rebuilt.point != tile.codeword.point {
            return Some(PackingViolation::Inconsistent {
                hypercube: z.entries().to_vec(),
                codeword: tile.codeword.point.entries().to_vec(),
                reconstructed: rebuilt.point.entries().to_vec(),
            });
        }
        let covering = (0..=2 * self.n)
            .filter(|&b| {
                let offset = slot_order(self.n, b).expect("slot in range");
                let c = z.translate(&offset.to_vector(self.n).scaled(-1));
                let (section, rank) = self.rank_digits(&c);
                self.codeword_unchecked(section, rank).point == c
            })
            .count() as u32;
        (covering != 1).then(|| PackingViolation::Cover { hypercube: z.entries().to_vec(), count: covering })
    }

    pub fn verify_perfect_packing(&self, mode: PackingMode) -> PackingReport {
        let mut violations = self.residue_cover();
        let residue_cover_ok = violations.is_empty();
        let mut violation_count = violations.len() as u64;
        let total = self.hypercubes();

        let (hypercubes_checked, local) = match mode {
            PackingMode::Exhaustive => {
                let mut found = self.sphere_cover_violations();
                // per-hypercube tile consistency, order-independent: keep the
                // lowest-index witnesses
                let tile_bad: Vec<(u64, PackingViolation)> = (0..total)
                    .into_par_iter()
                    .filter_map(|idx| {
                        let z = hypercube_from_index_unchecked(idx, self.n, self.q);
                        let tile = self.tile_assign(&z);
                        let rebuilt = self.codeword_unchecked(tile.codeword.section, tile.codeword.rank);
                        (rebuilt.point != tile.codeword.point).then(|| {
                            (
                                idx,
                                PackingViolation::Inconsistent {
                                    hypercube: z.entries().to_vec(),
                                    codeword: tile.codeword.point.entries().to_vec(),
                                    reconstructed: rebuilt.point.entries().to_vec(),
                                },
                            )
                        })
                    })
                    .collect();
                found.extend(tile_bad);
                found.sort_by_key(|(idx, _)| *idx);
                (total, found)
            }
            PackingMode::Sampled { samples, seed } => {
                const CHUNK: u64 = 4096;
                let chunks = samples.div_ceil(CHUNK);
                let found: Vec<(u64, PackingViolation)> = (0..chunks)
                    .into_par_iter()
                    .flat_map_iter(|chunk| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(chunk);
                        let len = CHUNK.min(samples - chunk * CHUNK);
                        (0..len)
                            .filter_map(move |i| {
                                let idx = rng.random_range(0..total);
                                let z = hypercube_from_index_unchecked(idx, self.n, self.q);
                                self.check_hypercube(&z).map(|v| (chunk * CHUNK + i, v))
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                (samples, found)
            }
        };
        violation_count += local.len() as u64;
        violations.extend(local.into_iter().map(|(_, v)| v));
        violations.truncate(MAX_REPORTED_VIOLATIONS);

        PackingReport {
            exhaustive: matches!(mode, PackingMode::Exhaustive),
            residue_cover_ok,
            hypercubes_checked,
            codewords: self.size(),
            violation_count,
            violations,
        }
    }

    /// Marks the sphere of every generated codeword and reports hypercubes not
    /// covered exactly once.
    fn sphere_cover_violations(&self) -> Vec<(u64, PackingViolation)> {
        let total = self.hypercubes() as usize;
        let mut cover = vec![0u8; total];
        for section in 0..self.q {
            for rank in 0..self.codewords_per_section() {
                let c = self.codeword_unchecked(section, rank);
                for m in lee_sphere(&c.point).members {
                    let idx = hypercube_lin_index(&m) as usize;
                    cover[idx] = cover[idx].saturating_add(1);
                }
            }
        }
        cover
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 1)
            .map(|(idx, &c)| {
                let z = hypercube_from_index_unchecked(idx as u64, self.n, self.q);
                (idx as u64, PackingViolation::Cover { hypercube: z.entries().to_vec(), count: c as u32 })
            })
            .collect()
    }
}

/// Calls `f` on every integer vector with `sum |x_i| == weight` and every
/// `|x_i| <= max_entry`, positions from `pos` onward free.
fn enumerate_weight(buf: &mut [i64], pos: usize, weight: i64, max_entry: i64, f: &mut impl FnMut(&[i64])) {
    if weight == 0 {
        f(buf);
        return;
    }
    if pos == buf.len() {
        return;
    }
    // entry at `pos` is zero
    enumerate_weight(buf, pos + 1, weight, max_entry, f);
    for mag in 1..=weight.min(max_entry) {
        for sign in [1, -1] {
            buf[pos] = sign * mag;
            enumerate_weight(buf, pos + 1, weight - mag, max_entry, f);
        }
    }
    buf[pos] = 0;
}
