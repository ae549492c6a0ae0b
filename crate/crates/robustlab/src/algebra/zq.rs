//! Dense vectors and matrices over Z_q, word-packed.
//!
//! Supported moduli are primes and powers of two. Elimination pivots only
//! on unit (odd, for q = 2^k) entries; a system that would need a
//! non-unit pivot signals `NonUnitPivot` and callers resample.

use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZqVec {
    q: u64,
    entries: Vec<u64>,
}

impl ZqVec {
    pub fn zeros(len: usize, q: u64) -> Self {
        assert!(q >= 2);
        ZqVec { q, entries: vec![0; len] }
    }

    pub fn from_entries(entries: Vec<u64>, q: u64) -> Self {
        assert!(entries.iter().all(|&e| e < q));
        ZqVec { q, entries }
    }

    pub fn constant(len: usize, value: u64, q: u64) -> Self {
        assert!(value < q);
        ZqVec { q, entries: vec![value; len] }
    }

    pub fn random<R: Rng>(len: usize, q: u64, rng: &mut R) -> Self {
        ZqVec { q, entries: (0..len).map(|_| rng.gen_range(0..q)).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: u64) {
        assert!(v < self.q);
        self.entries[i] = v;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Centered lift of entry `i` into [-floor(q/2), floor(q/2)].
    pub fn centered(&self, i: usize) -> i64 {
        centered_lift(self.entries[i], self.q)
    }

    pub fn add(&self, other: &ZqVec) -> ZqVec {
        assert_eq!(self.q, other.q);
        assert_eq!(self.len(), other.len());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_mod(a, b, self.q))
            .collect();
        ZqVec { q: self.q, entries }
    }

    pub fn sub(&self, other: &ZqVec) -> ZqVec {
        assert_eq!(self.q, other.q);
        assert_eq!(self.len(), other.len());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| sub_mod(a, b, self.q))
            .collect();
        ZqVec { q: self.q, entries }
    }

    /// Centered l_inf distance.
    pub fn linf_distance(&self, other: &ZqVec) -> u64 {
        let d = self.sub(other);
        (0..d.len()).map(|i| d.centered(i).unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

pub fn centered_lift(v: u64, q: u64) -> i64 {
    debug_assert!(v < q);
    if v > q / 2 {
        v as i64 - q as i64
    } else {
        v as i64
    }
}

pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Inverse of a unit mod q (prime q: any nonzero; 2^k: odd entries).
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    // Extended Euclid over i128.
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let d = r0 / r1;
        (r0, r1) = (r1, r0 - d * r1);
        (s0, s1) = (s1, s0 - d * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(q as i128) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZqMat {
    q: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ZqMat {
    pub fn zeros(rows: usize, cols: usize, q: u64) -> Self {
        assert!(q >= 2);
        ZqMat { q, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, q: u64) -> Self {
        let mut m = ZqMat::zeros(n, n, q);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, q: u64, rng: &mut R) -> Self {
        ZqMat {
            q,
            rows,
            cols,
            entries: (0..rows * cols).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    pub fn from_rows(rows: &[ZqVec]) -> Self {
        assert!(!rows.is_empty());
        let q = rows[0].modulus();
        let cols = rows[0].len();
        let mut m = ZqMat::zeros(rows.len(), cols, q);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.modulus(), q);
            m.set_row(i, r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(v < self.q);
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> ZqVec {
        ZqVec {
            q: self.q,
            entries: self.entries[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &ZqVec) {
        assert_eq!(v.len(), self.cols);
        self.entries[r * self.cols..(r + 1) * self.cols].copy_from_slice(v.entries());
    }

    pub fn col(&self, c: usize) -> ZqVec {
        ZqVec {
            q: self.q,
            entries: (0..self.rows).map(|r| self.get(r, c)).collect(),
        }
    }

    /// Max |centered entry| over the whole matrix.
    pub fn max_centered_abs(&self) -> u64 {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .map(|(r, c)| centered_lift(self.get(r, c), self.q).unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &ZqVec) -> Result<ZqVec> {
        if v.len() != self.cols || v.modulus() != self.q {
            return Err(Error::DimensionMismatch("mul_vec shape/modulus".into()));
        }
        let q128 = self.q as u128;
        let mut out = ZqVec::zeros(self.rows, self.q);
        for r in 0..self.rows {
            let mut acc: u128 = 0;
            for c in 0..self.cols {
                acc += self.get(r, c) as u128 * v.get(c) as u128;
                if acc >= (1u128 << 120) {
                    acc %= q128;
                }
            }
            out.set(r, (acc % q128) as u64);
        }
        Ok(out)
    }

    /// `s^T * self` for a row selector `s` of length `rows`.
    pub fn combine_rows(&self, s: &ZqVec) -> Result<ZqVec> {
        if s.len() != self.rows || s.modulus() != self.q {
            return Err(Error::DimensionMismatch("combine_rows shape/modulus".into()));
        }
        let q128 = self.q as u128;
        let mut out = ZqVec::zeros(self.cols, self.q);
        for c in 0..self.cols {
            let mut acc: u128 = 0;
            for r in 0..self.rows {
                acc += s.get(r) as u128 * self.get(r, c) as u128;
                if acc >= (1u128 << 120) {
                    acc %= q128;
                }
            }
            out.set(c, (acc % q128) as u64);
        }
        Ok(out)
    }

    /// `self * other` mod q.
    pub fn mul(&self, other: &ZqMat) -> Result<ZqMat> {
        if self.cols != other.rows || self.q != other.q {
            return Err(Error::DimensionMismatch("matrix product shape/modulus".into()));
        }
        let q128 = self.q as u128;
        let mut out = ZqMat::zeros(self.rows, other.cols, self.q);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u128 * other.get(k, c) as u128;
                    if acc >= (1u128 << 120) {
                        acc %= q128;
                    }
                }
                out.set(r, c, (acc % q128) as u64);
            }
        }
        Ok(out)
    }
}

/// Solve `a x = b` mod q, pivoting only on unit entries.
///
/// For prime q every nonzero entry is a unit; for q = 2^k only odd
/// entries are. If at some column no unit pivot is available among the
/// remaining rows but eliminating it is required for consistency, the
/// routine signals `NonUnitPivot`. Free variables are set to zero.
pub fn zq_solve(a: &ZqMat, b: &ZqVec) -> Result<ZqVec> {
    if b.len() != a.rows || b.modulus() != a.q {
        return Err(Error::DimensionMismatch("zq_solve shape/modulus".into()));
    }
    let q = a.q;
    let mut work = a.clone();
    let mut rhs = b.clone();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for c in 0..work.cols {
        // Find a unit pivot at or below `rank`.
        let mut pivot = None;
        for r in rank..work.rows {
            if inv_mod(work.get(r, c), q).is_some() {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else {
            // No unit available. Fine if the whole remaining column is
            // zero, pathological otherwise.
            if (rank..work.rows).any(|r| work.get(r, c) != 0) {
                return Err(Error::NonUnitPivot);
            }
            continue;
        };
        // Swap into place.
        for cc in 0..work.cols {
            let (x, y) = (work.get(rank, cc), work.get(p, cc));
            work.set(rank, cc, y);
            work.set(p, cc, x);
        }
        let (x, y) = (rhs.get(rank), rhs.get(p));
        rhs.set(rank, y);
        rhs.set(p, x);
        // Scale the pivot row to make the pivot 1.
        let inv = inv_mod(work.get(rank, c), q).unwrap();
        for cc in 0..work.cols {
            work.set(rank, cc, mul_mod(work.get(rank, cc), inv, q));
        }
        rhs.set(rank, mul_mod(rhs.get(rank), inv, q));
        // Eliminate the column everywhere else.
        for r in 0..work.rows {
            if r != rank {
                let f = work.get(r, c);
                if f != 0 {
                    for cc in 0..work.cols {
                        let v = sub_mod(work.get(r, cc), mul_mod(f, work.get(rank, cc), q), q);
                        work.set(r, cc, v);
                    }
                    rhs.set(r, sub_mod(rhs.get(r), mul_mod(f, rhs.get(rank), q), q));
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == work.rows {
            break;
        }
    }
    for r in rank..work.rows {
        if rhs.get(r) != 0 {
            return Err(Error::InconsistentSystem);
        }
    }
    let mut x = ZqVec::zeros(a.cols, q);
    for (r, &c) in pivot_cols.iter().enumerate() {
        x.set(c, rhs.get(r));
    }
    Ok(x)
}

/// Incremental unit-pivot row basis over Z_q, the Z_q analogue of
/// `gf2::RowBasis`. Membership means membership in the free module the
/// reduced rows generate.
#[derive(Debug, Clone)]
pub struct ZqRowBasis {
    q: u64,
    width: usize,
    rows: Vec<ZqVec>,
    pivots: Vec<usize>,
    /// Rows whose residue had no unit entry; the basis cannot absorb them.
    pub rejected: usize,
}

impl ZqRowBasis {
    pub fn new(width: usize, q: u64) -> Self {
        ZqRowBasis { q, width, rows: Vec::new(), pivots: Vec::new(), rejected: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &ZqVec) -> ZqVec {
        assert_eq!(v.len(), self.width);
        let mut res = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = res.get(p);
            if f != 0 {
                for c in 0..self.width {
                    res.set(c, sub_mod(res.get(c), mul_mod(f, row.get(c), self.q), self.q));
                }
            }
        }
        res
    }

    pub fn contains(&self, v: &ZqVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn insert(&mut self, v: &ZqVec) -> bool {
        let res = self.reduce(v);
        if res.is_zero() {
            return false;
        }
        let pivot = (0..self.width).find(|&c| inv_mod(res.get(c), self.q).is_some());
        let Some(pivot) = pivot else {
            self.rejected += 1;
            return false;
        };
        let inv = inv_mod(res.get(pivot), self.q).unwrap();
        let mut norm = ZqVec::zeros(self.width, self.q);
        for c in 0..self.width {
            norm.set(c, mul_mod(res.get(c), inv, self.q));
        }
        for row in &mut self.rows {
            let f = row.get(pivot);
            if f != 0 {
                for c in 0..self.width {
                    row.set(c, sub_mod(row.get(c), mul_mod(f, norm.get(c), self.q), self.q));
                }
            }
        }
        self.rows.push(norm);
        self.pivots.push(pivot);
        true
    }

    pub fn basis_rows(&self) -> &[ZqVec] {
        &self.rows
    }

    /// Uniform element of the module (uniform coefficients work because
    /// every basis row has a unit pivot, so the module is free).
    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> ZqVec {
        let mut out = ZqVec::zeros(self.width, self.q);
        for row in &self.rows {
            let f = rng.gen_range(0..self.q);
            if f != 0 {
                for c in 0..self.width {
                    out.set(c, add_mod(out.get(c), mul_mod(f, row.get(c), self.q), self.q));
                }
            }
        }
        out
    }
}
