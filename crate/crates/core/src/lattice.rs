//! Exact integer vectors and matrices, the Lee (Mannheim) metric on `Z_q^n`,
//! radius-1 Lee spheres and the linear indexing of the `q^n` hypercubes.
//!
//! Residues are stored in `0..q` and lifted to the centered range
//! `-(q-1)/2 ..= (q-1)/2` whenever a magnitude is needed. `q` is always odd,
//! so the centered lift has no tie.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{invalid, Result};

/// A point of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntVector(Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![0; n])
    }

    /// The unit vector along `axis` (0-based).
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut v = vec![0; n];
        v[axis] = 1;
        IntVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn dot(&self, other: &IntVector) -> i64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot product");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Reduces every entry modulo `q`.
    pub fn reduce(&self, q: u32) -> Result<ResidueVector> {
        ResidueVector::from_ints(&self.0, q)
    }

    /// Sum of absolute values of the integer entries (no modular reduction).
    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in addition");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = T>) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

fn check_modulus(q: u32) -> Result<()> {
    if q < 5 || q.is_multiple_of(2) {
        return invalid(format!("modulus must be odd and at least 5, got {q}"));
    }
    Ok(())
}

/// An element of `Z_q^n`, entries in `0..q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueVector {
    entries: Vec<u32>,
    modulus: u32,
}

impl ResidueVector {
    pub fn new(entries: Vec<u32>, q: u32) -> Result<Self> {
        check_modulus(q)?;
        if entries.len() < 2 {
            return invalid(format!("dimension must be at least 2, got {}", entries.len()));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= q) {
            return invalid(format!("residue {bad} out of range for modulus {q}"));
        }
        Ok(ResidueVector { entries, modulus: q })
    }

    pub fn zero(n: usize, q: u32) -> Result<Self> {
        ResidueVector::new(vec![0; n], q)
    }

    /// Reduces arbitrary integers into `0..q`.
    pub fn from_ints(values: &[i64], q: u32) -> Result<Self> {
        check_modulus(q)?;
        let entries = values.iter().map(|&x| x.rem_euclid(q as i64) as u32).collect();
        ResidueVector::new(entries, q)
    }

    pub(crate) fn from_raw(entries: Vec<u32>, modulus: u32) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus));
        ResidueVector { entries, modulus }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Centered integer representatives of every entry.
    pub fn centered(&self) -> IntVector {
        IntVector(self.entries.iter().map(|&x| centered(x, self.modulus)).collect())
    }

    /// `self + delta (mod q)` for an integer displacement.
    pub fn translate(&self, delta: &IntVector) -> ResidueVector {
        assert_eq!(self.dim(), delta.dim(), "dimension mismatch in translate");
        let q = self.modulus as i64;
        let entries =
            self.entries.iter().zip(delta.entries()).map(|(&x, &d)| (x as i64 + d).rem_euclid(q) as u32).collect();
        ResidueVector::from_raw(entries, self.modulus)
    }

    /// Moves one step along `offset`.
    pub fn offset(&self, offset: SlotOffset) -> ResidueVector {
        let mut entries = self.entries.clone();
        let q = self.modulus;
        match offset {
            SlotOffset::Center => {}
            SlotOffset::Plus(axis) => entries[axis] = (entries[axis] + 1) % q,
            SlotOffset::Minus(axis) => entries[axis] = (entries[axis] + q - 1) % q,
        }
        ResidueVector::from_raw(entries, q)
    }

    fn check_compatible(&self, other: &ResidueVector) -> Result<()> {
        if self.modulus != other.modulus || self.dim() != other.dim() {
            return invalid(format!(
                "incompatible residue vectors: dim {} mod {} vs dim {} mod {}",
                self.dim(),
                self.modulus,
                other.dim(),
                other.modulus
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ResidueVector) -> Result<ResidueVector> {
        self.check_compatible(other)?;
        let q = self.modulus;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| (a + b) % q).collect();
        Ok(ResidueVector::from_raw(entries, q))
    }

    pub fn checked_sub(&self, other: &ResidueVector) -> Result<ResidueVector> {
        self.check_compatible(other)?;
        let q = self.modulus;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| (a + q - b) % q).collect();
        Ok(ResidueVector::from_raw(entries, q))
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.entries.iter())
    }
}

/// Unchecked centered lift; callers guarantee `x < q` with `q` odd.
#[inline]
pub(crate) fn centered(x: u32, q: u32) -> i64 {
    if x > q / 2 {
        x as i64 - q as i64
    } else {
        x as i64
    }
}

/// The representative of `x (mod q)` in `-(q-1)/2 ..= (q-1)/2`.
pub fn canonical_rep(x: u64, q: u64) -> Result<i64> {
    if q.is_multiple_of(2) {
        return invalid(format!("modulus must be odd, got {q}"));
    }
    if x >= q {
        return invalid(format!("residue {x} out of range for modulus {q}"));
    }
    Ok(if x > q / 2 { x as i64 - q as i64 } else { x as i64 })
}

pub fn mannheim_weight(v: &ResidueVector) -> u64 {
    let q = v.modulus;
    v.entries.iter().map(|&x| centered(x, q).unsigned_abs()).sum()
}

/// `w_M(u - v mod q)`.
pub fn lee_distance(u: &ResidueVector, v: &ResidueVector) -> Result<u64> {
    Ok(mannheim_weight(&u.checked_sub(v)?))
}

/// One of the `2n + 1` offsets of a radius-1 Lee sphere. Axes are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotOffset {
    Center,
    Plus(usize),
    Minus(usize),
}

impl SlotOffset {
    pub fn to_vector(self, n: usize) -> IntVector {
        let mut v = IntVector::zeros(n);
        match self {
            SlotOffset::Center => {}
            SlotOffset::Plus(a) => v.0[a] = 1,
            SlotOffset::Minus(a) => v.0[a] = -1,
        }
        v
    }

    /// Inverse of [`slot_order`].
    pub fn slot(self) -> usize {
        match self {
            SlotOffset::Center => 0,
            SlotOffset::Plus(a) => 2 * a + 1,
            SlotOffset::Minus(a) => 2 * a + 2,
        }
    }

    /// Residue `h . offset (mod q)` for a check functional `h`.
    pub(crate) fn syndrome(self, h: &[i64], q: u32) -> u32 {
        let q = q as i64;
        match self {
            SlotOffset::Center => 0,
            SlotOffset::Plus(a) => h[a].rem_euclid(q) as u32,
            SlotOffset::Minus(a) => (-h[a]).rem_euclid(q) as u32,
        }
    }
}

impl fmt::Display for SlotOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotOffset::Center => f.write_str("0"),
            SlotOffset::Plus(a) => write!(f, "+e{}", a + 1),
            SlotOffset::Minus(a) => write!(f, "-e{}", a + 1),
        }
    }
}

/// Canonical slot order of a Lee sphere: `0, +e1, -e1, +e2, -e2, ..., +en, -en`.
pub fn slot_order(n: usize, b: usize) -> Result<SlotOffset> {
    match b {
        0 => Ok(SlotOffset::Center),
        b if b <= 2 * n => {
            let axis = (b - 1) / 2;
            Ok(if b % 2 == 1 { SlotOffset::Plus(axis) } else { SlotOffset::Minus(axis) })
        }
        _ => invalid(format!("slot {b} out of range 0..={}", 2 * n)),
    }
}

/// Radius-1 Lee sphere around a point of `Z_q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeeSphere {
    pub center: ResidueVector,
    /// Members in slot order.
    pub members: Vec<ResidueVector>,
}

pub fn lee_sphere(center: &ResidueVector) -> LeeSphere {
    let n = center.dim();
    let members = (0..=2 * n).map(|b| center.offset(slot_order(n, b).expect("slot in range"))).collect();
    LeeSphere { center: center.clone(), members }
}

/// `q^n`, or `None` on overflow.
pub fn hypercube_count(n: usize, q: u32) -> Option<u64> {
    (q as u64).checked_pow(u32::try_from(n).ok()?)
}

/// Big-endian base-`q` index: the first coordinate is the most significant digit.
pub fn hypercube_lin_index(z: &ResidueVector) -> u64 {
    let q = z.modulus as u64;
    z.entries.iter().fold(0u64, |acc, &x| acc * q + x as u64)
}

pub fn hypercube_from_index(index: u64, n: usize, q: u32) -> Result<ResidueVector> {
    check_modulus(q)?;
    match hypercube_count(n, q) {
        Some(total) if index < total => {}
        Some(total) => return invalid(format!("hypercube index {index} out of range 0..{total}")),
        None => return invalid(format!("q^n overflows for n = {n}, q = {q}")),
    }
    Ok(hypercube_from_index_unchecked(index, n, q))
}

pub(crate) fn hypercube_from_index_unchecked(mut index: u64, n: usize, q: u32) -> ResidueVector {
    let mut entries = vec![0u32; n];
    for slot in entries.iter_mut().rev() {
        *slot = (index % q as u64) as u32;
        index /= q as u64;
    }
    ResidueVector::from_raw(entries, q)
}

/// A square integer matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<IntVector>,
}

impl IntMatrix {
    pub fn new(rows: Vec<IntVector>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.dim() != n) {
            return invalid(format!("matrix is not square: {n} rows, a row of length {}", bad.dim()));
        }
        Ok(IntMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { rows: (0..n).map(|i| IntVector::unit(n, i)).collect() }
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let rows = diag.iter().enumerate().map(|(i, &d)| IntVector::unit(n, i).scaled(d)).collect();
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    ///
    /// Every intermediate `M[i][j]` after step `k` is the `(k+1)`-th order
    /// leading minor bordered by row `i` and column `j`, so the division by
    /// the previous pivot is always exact.
    pub fn determinant(&self) -> BigInt {
        let n = self.dim();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut m: Vec<Vec<BigInt>> =
            self.rows.iter().map(|r| r.entries().iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// `|det|` as a `u64`, when it fits.
    pub fn abs_determinant(&self) -> Option<u64> {
        u64::try_from(self.determinant().abs()).ok()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rv(entries: &[u32], q: u32) -> ResidueVector {
        ResidueVector::new(entries.to_vec(), q).unwrap()
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        let mut total = 0i128;
        for col in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &x)| x).collect())
                .collect();
            let term = m[0][col] as i128 * cofactor_det(&minor);
            total += if col % 2 == 0 { term } else { -term };
        }
        total
    }

    #[test]
    fn canonical_rep_examples() {
        assert_eq!(canonical_rep(0, 11).unwrap(), 0);
        assert_eq!(canonical_rep(9, 11).unwrap(), -2);
        assert_eq!(canonical_rep(5, 11).unwrap(), 5);
        assert_eq!(canonical_rep(6, 11).unwrap(), -5);
    }

    #[test]
    fn canonical_rep_rejects_bad_input() {
        assert!(canonical_rep(1, 10).is_err());
        assert!(canonical_rep(11, 11).is_err());
    }

    #[test]
    fn residue_vector_validation() {
        assert!(ResidueVector::new(vec![0, 11], 11).is_err());
        assert!(ResidueVector::new(vec![0, 1], 8).is_err());
        assert!(ResidueVector::new(vec![0], 11).is_err());
        assert_eq!(ResidueVector::from_ints(&[-1, 12, 3], 11).unwrap().entries(), &[10, 1, 3]);
    }

    #[test]
    fn mannheim_weight_examples() {
        assert_eq!(mannheim_weight(&rv(&[0, 0, 0, 0, 0], 11)), 0);
        assert_eq!(mannheim_weight(&rv(&[1, 1, 10, 0, 0], 11)), 3);
        assert_eq!(mannheim_weight(&rv(&[0, 0, 0, 1, 8], 11)), 4);
    }

    #[test]
    fn lee_distance_examples() {
        let zero = rv(&[0, 0, 0, 0, 0], 11);
        assert_eq!(lee_distance(&zero, &zero).unwrap(), 0);
        assert_eq!(lee_distance(&zero, &rv(&[0, 0, 0, 0, 1], 11)).unwrap(), 1);
        assert_eq!(lee_distance(&zero, &rv(&[1, 1, 10, 0, 0], 11)).unwrap(), 3);
        assert!(lee_distance(&zero, &rv(&[0, 0, 0, 0], 11)).is_err());
        assert!(lee_distance(&zero, &rv(&[0, 0, 0, 0, 0], 13)).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(IntMatrix::identity(5).determinant(), BigInt::from(1));
        assert_eq!(IntMatrix::diagonal(&[11, 1, 1, 1, 1]).determinant(), BigInt::from(11));
        let a = IntMatrix::new(
            [vec![0, 0, 0, 1, 8], vec![0, 0, 0, 1, -3], vec![0, 1, 1, 1, -4], vec![0, 0, 1, 1, 3], vec![1, 0, 0, 0, 2]]
                .into_iter()
                .map(IntVector::new)
                .collect(),
        )
        .unwrap();
        let rows: Vec<Vec<i64>> = a.rows().iter().map(|r| r.entries().to_vec()).collect();
        assert_eq!(cofactor_det(&rows), -11);
        assert_eq!(a.determinant(), BigInt::from(-11));
    }

    #[test]
    fn determinant_singular_and_pivoting() {
        let singular = IntMatrix::new(vec![vec![1, 2].into(), vec![2, 4].into()]).unwrap();
        assert!(singular.determinant().is_zero());
        let swap = IntMatrix::new(vec![vec![0, 1].into(), vec![1, 0].into()]).unwrap();
        assert_eq!(swap.determinant(), BigInt::from(-1));
        assert!(IntMatrix::new(vec![vec![1, 2, 3].into(), vec![1, 2].into()]).is_err());
    }

    #[test]
    fn lee_sphere_examples() {
        let s = lee_sphere(&ResidueVector::zero(5, 11).unwrap());
        assert_eq!(s.members.len(), 11);
        assert_eq!(s.members[1].entries(), &[1, 0, 0, 0, 0]);
        assert_eq!(s.members[2].entries(), &[10, 0, 0, 0, 0]);
        assert_eq!(s.members[10].entries(), &[0, 0, 0, 0, 10]);

        let wrap = lee_sphere(&rv(&[10, 0, 0, 0, 0], 11));
        assert!(wrap.members.contains(&ResidueVector::zero(5, 11).unwrap()));
    }

    #[test]
    fn slot_order_examples() {
        assert_eq!(slot_order(5, 0).unwrap(), SlotOffset::Center);
        assert_eq!(slot_order(5, 1).unwrap(), SlotOffset::Plus(0));
        assert_eq!(slot_order(5, 10).unwrap(), SlotOffset::Minus(4));
        assert!(slot_order(5, 11).is_err());
        for b in 0..=10 {
            assert_eq!(slot_order(5, b).unwrap().slot(), b);
        }
    }

    #[test]
    fn lin_index_examples() {
        assert_eq!(hypercube_lin_index(&ResidueVector::zero(5, 11).unwrap()), 0);
        assert_eq!(hypercube_lin_index(&rv(&[0, 0, 0, 0, 1], 11)), 1);
        assert_eq!(hypercube_lin_index(&rv(&[1, 0, 0, 0, 0], 11)), 14641);
        assert!(hypercube_from_index(161051, 5, 11).is_err());
    }

    #[test]
    fn lin_index_exhaustive_bijection_n5() {
        let total = hypercube_count(5, 11).unwrap();
        assert_eq!(total, 161_051);
        for idx in 0..total {
            let z = hypercube_from_index(idx, 5, 11).unwrap();
            assert_eq!(hypercube_lin_index(&z), idx);
        }
    }

    fn residue_vec(n: usize, q: u32) -> impl Strategy<Value = ResidueVector> {
        proptest::collection::vec(0..q, n).prop_map(move |e| ResidueVector::new(e, q).unwrap())
    }

    proptest! {
        #[test]
        fn canonical_rep_is_congruent_and_small(q in (2u64..200).prop_map(|k| 2 * k + 1), x in 0u64..1000) {
            let x = x % q;
            let r = canonical_rep(x, q).unwrap();
            prop_assert_eq!((r - x as i64).rem_euclid(q as i64), 0);
            prop_assert!(r.unsigned_abs() <= (q - 1) / 2);
        }

        #[test]
        fn lee_distance_is_a_metric(
            (u, v, w) in (5usize..9).prop_flat_map(|n| {
                let q = 2 * n as u32 + 1;
                (residue_vec(n, q), residue_vec(n, q), residue_vec(n, q))
            })
        ) {
            let duv = lee_distance(&u, &v).unwrap();
            prop_assert_eq!(duv, lee_distance(&v, &u).unwrap());
            prop_assert_eq!(duv == 0, u == v);
            let dvw = lee_distance(&v, &w).unwrap();
            let duw = lee_distance(&u, &w).unwrap();
            prop_assert!(duw <= duv + dvw);
        }

        #[test]
        fn lee_sphere_members_are_distinct_and_close(
            z in (2usize..10).prop_flat_map(|n| residue_vec(n, 2 * n as u32 + 1))
        ) {
            let q = z.modulus() as usize;
            let s = lee_sphere(&z);
            prop_assert_eq!(s.members.len(), q);
            let mut sorted = s.members.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), q);
            for a in &s.members {
                prop_assert!(lee_distance(a, &z).unwrap() <= 1);
                for b in &s.members {
                    prop_assert!(lee_distance(a, b).unwrap() <= 2);
                }
            }
        }

        #[test]
        fn lin_index_round_trips(z in (5usize..12).prop_flat_map(|n| residue_vec(n, 2 * n as u32 + 1))) {
            let idx = hypercube_lin_index(&z);
            prop_assert_eq!(hypercube_from_index(idx, z.dim(), z.modulus()).unwrap(), z);
        }

        #[test]
        fn determinant_matches_cofactor_expansion(
            rows in (4usize..6).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n))
        ) {
            let oracle = cofactor_det(&rows);
            let m = IntMatrix::new(rows.into_iter().map(IntVector::new).collect()).unwrap();
            prop_assert_eq!(m.determinant(), BigInt::from(oracle));
        }
    }
}
