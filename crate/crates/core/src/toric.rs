//! Parameters of the n-dimensional toric codes, qubit (face) indexing of the
//! `q^n` hypercubic torus, and the 2D Kitaev stabilizer commutation check.

use num_rational::Ratio;

use crate::error::{invalid, Error, Result};
use crate::lattice::{hypercube_count, hypercube_from_index_unchecked, hypercube_lin_index, ResidueVector};
use crate::lee_code::{modulus_for, PerfectLeeCode, MIN_DIMENSION};

/// `[[N, k, d]]` of the toric code on one Lee-sphere fundamental region,
/// together with its rate `k/N` and gain `(k/N)(t+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricParams {
    pub n: usize,
    pub q: u32,
    pub length: u64,
    pub dimension: u64,
    pub distance: u32,
    pub capability: u32,
    pub rate: Ratio<u128>,
    pub gain: Ratio<u128>,
}

/// `n(n-1)/2`, the number of 2-faces owned by one hypercube.
pub fn faces_per_hypercube(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

pub fn code_params(n: usize) -> Result<ToricParams> {
    if n < MIN_DIMENSION {
        return Err(Error::UnsupportedDimension(n));
    }
    let code = PerfectLeeCode::new(n)?;
    let distance = code
        .min_mannheim_distance(4)
        .distance
        .ok_or_else(|| Error::InvalidArgument(format!("no codeword of weight <= 4 for n = {n}")))?;
    Ok(params_from(&code, distance))
}

pub(crate) fn params_from(code: &PerfectLeeCode, distance: u32) -> ToricParams {
    let alpha = code.alpha() as u64;
    let q = code.q();
    let length = alpha * q as u64;
    let dimension = alpha;
    let capability = (distance - 1) / 2;
    let rate = Ratio::new(dimension as u128, length as u128);
    let gain = rate * Ratio::from_integer(capability as u128 + 1);
    ToricParams { n: code.n(), q, length, dimension, distance, capability, rate, gain }
}

/// `alpha q^n` qubits on the full `q^n` torus, for `n >= 2`.
pub fn face_count(n: usize) -> Result<u128> {
    if n < 2 {
        return invalid(format!("face count needs n >= 2, got {n}"));
    }
    let q = modulus_for(n)? as u128;
    let alpha = faces_per_hypercube(n) as u128;
    (0..n)
        .try_fold(alpha, |acc, _| acc.checked_mul(q))
        .ok_or_else(|| Error::InvalidArgument(format!("face count overflows for n = {n}")))
}

/// Rank of the axis pair `(a, b)`, `1 <= a < b <= n`, in lexicographic order.
pub fn orientation_rank(n: usize, a: usize, b: usize) -> Result<usize> {
    if !(1 <= a && a < b && b <= n) {
        return invalid(format!("malformed axis pair ({a},{b}) for n = {n}"));
    }
    let before: usize = (1..a).map(|i| n - i).sum();
    Ok(before + (b - a - 1))
}

pub fn orientation_axes(n: usize, mut o: usize) -> Result<(usize, usize)> {
    if o >= faces_per_hypercube(n) {
        return invalid(format!("orientation {o} out of range for n = {n}"));
    }
    for a in 1..n {
        let row = n - a;
        if o < row {
            return Ok((a, a + 1 + o));
        }
        o -= row;
    }
    unreachable!("orientation bound checked above")
}

/// A 2-face of the torus: the hypercube owning it (its minimal corner) and the
/// unordered axis pair spanning it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FaceIndex {
    anchor: ResidueVector,
    orientation: usize,
}

impl FaceIndex {
    /// Face spanned by 1-based axes `a < b`.
    pub fn new(anchor: ResidueVector, a: usize, b: usize) -> Result<Self> {
        let orientation = orientation_rank(anchor.dim(), a, b)?;
        Ok(FaceIndex { anchor, orientation })
    }

    pub fn with_orientation(anchor: ResidueVector, orientation: usize) -> Result<Self> {
        if orientation >= faces_per_hypercube(anchor.dim()) {
            return invalid(format!("orientation {orientation} out of range for n = {}", anchor.dim()));
        }
        Ok(FaceIndex { anchor, orientation })
    }

    pub fn anchor(&self) -> &ResidueVector {
        &self.anchor
    }

    pub fn orientation(&self) -> usize {
        self.orientation
    }

    pub fn axes(&self) -> (usize, usize) {
        orientation_axes(self.anchor.dim(), self.orientation).expect("orientation validated")
    }

    /// `lin(anchor) * alpha + orientation`.
    pub fn linear_index(&self) -> u64 {
        hypercube_lin_index(&self.anchor) * faces_per_hypercube(self.anchor.dim()) as u64 + self.orientation as u64
    }

    pub fn from_linear_index(index: u64, n: usize, q: u32) -> Result<Self> {
        let alpha = faces_per_hypercube(n) as u64;
        let cubes = hypercube_count(n, q).ok_or_else(|| Error::InvalidArgument("q^n overflows".into()))?;
        // validates q as well
        ResidueVector::zero(n, q)?;
        match cubes.checked_mul(alpha) {
            Some(total) if index < total => {}
            _ => return invalid(format!("face index {index} out of range for n = {n}")),
        }
        Ok(FaceIndex {
            anchor: hypercube_from_index_unchecked(index / alpha, n, q),
            orientation: (index % alpha) as usize,
        })
    }
}

pub fn face_index(face: &FaceIndex) -> u64 {
    face.linear_index()
}

/// `[[2q^2, 2, q]]` of the Kitaev code on the `q x q` torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KitaevParams {
    pub length: u64,
    pub dimension: u64,
    pub distance: u64,
}

/// Vertex (`A_v`) and face (`B_f`) operator supports on the `q x q` torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCheck2D {
    pub q: usize,
    pub edges: usize,
    pub vertex_supports: Vec<[usize; 4]>,
    pub face_supports: Vec<[usize; 4]>,
    pub pairs_checked: usize,
    /// `(vertex, face)` pairs with odd overlap; empty when all operators commute.
    pub odd_overlaps: Vec<(usize, usize)>,
}

impl StabilizerCheck2D {
    pub fn commutes(&self) -> bool {
        self.odd_overlaps.is_empty()
    }

    pub fn params(&self) -> KitaevParams {
        let q = self.q as u64;
        KitaevParams { length: 2 * q * q, dimension: 2, distance: q }
    }
}

/// Brute-force commutation check of every `A_v`, `B_f` pair.
///
/// Edge `2 (x q + y) + 0` joins `(x, y)` to `(x+1, y)`; edge `2 (x q + y) + 1`
/// joins `(x, y)` to `(x, y+1)`. Face `(x, y)` is the square with lower-left
/// corner `(x, y)`.
pub fn kitaev_2d_stabilizers(q: usize) -> Result<StabilizerCheck2D> {
    if q < 2 {
        return invalid(format!("torus side must be at least 2, got {q}"));
    }
    let edge = |x: usize, y: usize, dir: usize| 2 * ((x % q) * q + (y % q)) + dir;
    let mut vertex_supports = Vec::with_capacity(q * q);
    let mut face_supports = Vec::with_capacity(q * q);
    for x in 0..q {
        for y in 0..q {
            vertex_supports.push([edge(x, y, 0), edge(x + q - 1, y, 0), edge(x, y, 1), edge(x, y + q - 1, 1)]);
            face_supports.push([edge(x, y, 0), edge(x, y + 1, 0), edge(x, y, 1), edge(x + 1, y, 1)]);
        }
    }
    let mut odd_overlaps = Vec::new();
    for (vi, vs) in vertex_supports.iter().enumerate() {
        for (fi, fs) in face_supports.iter().enumerate() {
            let overlap = vs.iter().filter(|e| fs.contains(e)).count();
            if overlap % 2 == 1 {
                odd_overlaps.push((vi, fi));
            }
        }
    }
    Ok(StabilizerCheck2D {
        q,
        edges: 2 * q * q,
        pairs_checked: vertex_supports.len() * face_supports.len(),
        vertex_supports,
        face_supports,
        odd_overlaps,
    })
}
