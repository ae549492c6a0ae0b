//! Bit-packed vectors and matrices over GF(2).
//!
//! Rows are packed into 64-bit words, row-major, least-significant bit
//! first. XOR row operations make Gaussian elimination fast at the
//! m ~ 10^3 sizes the task families use.

use crate::error::{Error, Result};
use rand::Rng;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Mask selecting the valid bits of the last word of a `len`-bit row.
fn tail_mask(len: usize) -> u64 {
    let r = len % WORD_BITS;
    if r == 0 {
        !0
    } else {
        (1u64 << r) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vec {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Gf2Vec { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Gf2Vec { len, words: vec![!0u64; words_for(len)] };
        if let Some(last) = v.words.last_mut() {
            *last &= tail_mask(len);
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Gf2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        let mut words: Vec<u64> = (0..words_for(len)).map(|_| rng.gen()).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Gf2Vec { len, words }
    }

    /// Low `width` bits of `value`, LSB first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        assert!(width <= 64);
        let mut v = Gf2Vec::zeros(width);
        if width > 0 {
            v.words[0] = if width == 64 { value } else { value & ((1u64 << width) - 1) };
        }
        v
    }

    /// Interpret the vector (len <= 64) as an integer, bit 0 least significant.
    pub fn to_uint(&self) -> u64 {
        assert!(self.len <= 64);
        if self.len == 0 {
            0
        } else {
            self.words[0]
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        if bit {
            *w |= 1u64 << (i % WORD_BITS);
        } else {
            *w &= !(1u64 << (i % WORD_BITS));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xored(&self, other: &Gf2Vec) -> Gf2Vec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn hamming_distance(&self, other: &Gf2Vec) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Parity of `<self, other>`.
    pub fn dot(&self, other: &Gf2Vec) -> bool {
        assert_eq!(self.len, other.len);
        let acc: u64 = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        acc.count_ones() % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Packed little-endian bytes, `ceil(len/8)` of them.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len.div_ceil(8);
        let mut out = vec![0u8; n];
        for (i, byte) in out.iter_mut().enumerate() {
            let word = self.words[i / 8];
            *byte = ((word >> ((i % 8) * 8)) & 0xff) as u8;
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Parse(format!(
                "expected {} bytes for {} bits, got {}",
                len.div_ceil(8),
                len,
                bytes.len()
            )));
        }
        let mut v = Gf2Vec::zeros(len);
        for (i, &b) in bytes.iter().enumerate() {
            v.words[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        if let Some(last) = v.words.last() {
            if last & !tail_mask(len) != 0 {
                return Err(Error::Parse("nonzero padding bits".into()));
            }
        }
        Ok(v)
    }

    pub fn concat(&self, other: &Gf2Vec) -> Gf2Vec {
        let mut out = Gf2Vec::zeros(self.len + other.len);
        for i in 0..self.len {
            if self.get(i) {
                out.set(i, true);
            }
        }
        for i in 0..other.len {
            if other.get(i) {
                out.set(self.len + i, true);
            }
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> Gf2Vec {
        assert!(start + len <= self.len);
        let mut out = Gf2Vec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Mat {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Gf2Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Gf2Mat { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Gf2Mat::zeros(rows, cols);
        for r in 0..rows {
            let row = Gf2Vec::random(cols, rng);
            m.set_row(r, &row);
        }
        m
    }

    pub fn from_rows(rows: &[Gf2Vec]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        let mut m = Gf2Mat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
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

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.words[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.words[r * self.stride + c / WORD_BITS];
        if bit {
            *w |= 1u64 << (c % WORD_BITS);
        } else {
            *w &= !(1u64 << (c % WORD_BITS));
        }
    }

    pub fn row(&self, r: usize) -> Gf2Vec {
        assert!(r < self.rows);
        let words = self.words[r * self.stride..(r + 1) * self.stride].to_vec();
        Gf2Vec { len: self.cols, words }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn set_row(&mut self, r: usize, v: &Gf2Vec) {
        assert_eq!(v.len, self.cols);
        self.words[r * self.stride..(r + 1) * self.stride].copy_from_slice(&v.words);
    }

    pub fn xor_row_into(&self, r: usize, target: &mut Gf2Vec) {
        assert_eq!(target.len, self.cols);
        for (t, w) in target.words.iter_mut().zip(self.row_words(r)) {
            *t ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (lo, hi) = self.words.split_at_mut(b * self.stride);
        lo[a * self.stride..(a + 1) * self.stride].swap_with_slice(&mut hi[..self.stride]);
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        assert_ne!(target, source);
        let (a, b) = (target.min(source), target.max(source));
        let (lo, hi) = self.words.split_at_mut(b * self.stride);
        let lo_row = &mut lo[a * self.stride..(a + 1) * self.stride];
        let hi_row = &mut hi[..self.stride];
        if target < source {
            for (t, s) in lo_row.iter_mut().zip(hi_row.iter()) {
                *t ^= *s;
            }
        } else {
            for (t, s) in hi_row.iter_mut().zip(lo_row.iter()) {
                *t ^= *s;
            }
        }
    }

    /// Matrix-vector product `self * v` (v combines columns).
    pub fn mul_vec(&self, v: &Gf2Vec) -> Result<Gf2Vec> {
        if v.len != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows, self.cols, v.len
            )));
        }
        let mut out = Gf2Vec::zeros(self.rows);
        for r in 0..self.rows {
            let acc = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .fold(0u64, |acc, (a, b)| acc ^ (a & b));
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Row combination `s^T * self` for an s of length `rows`.
    pub fn combine_rows(&self, s: &Gf2Vec) -> Result<Gf2Vec> {
        if s.len != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, selector has length {}",
                self.rows, s.len
            )));
        }
        let mut out = Gf2Vec::zeros(self.cols);
        for r in s.iter_ones() {
            self.xor_row_into(r, &mut out);
        }
        Ok(out)
    }

    /// `self * other` over GF(2).
    pub fn mul(&self, other: &Gf2Mat) -> Result<Gf2Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = Gf2Vec::zeros(other.cols);
            for c in 0..self.cols {
                if self.get(r, c) {
                    other.xor_row_into(c, &mut acc);
                }
            }
            out.set_row(r, &acc);
        }
        Ok(out)
    }

    /// Stack `self` on top of `other`.
    pub fn stack(&self, other: &Gf2Mat) -> Result<Gf2Mat> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("stack width mismatch".into()));
        }
        let mut out = Gf2Mat::zeros(self.rows + other.rows, self.cols);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.words[self.words.len()..].copy_from_slice(&other.words);
        Ok(out)
    }

    /// Basis of the right kernel `{x : self * x = 0}`, one row per basis vector.
    pub fn kernel_basis(&self) -> Gf2Mat {
        // Row-reduce a working copy, tracking pivot columns.
        let mut work = self.clone();
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        for c in 0..work.cols {
            let mut pivot = None;
            for r in rank..work.rows {
                if work.get(r, c) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            work.swap_rows(rank, p);
            for r in 0..work.rows {
                if r != rank && work.get(r, c) {
                    work.xor_rows(r, rank);
                }
            }
            pivot_cols.push(c);
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        let free_cols: Vec<usize> =
            (0..work.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Gf2Mat::zeros(free_cols.len(), work.cols);
        for (bi, &fc) in free_cols.iter().enumerate() {
            basis.set(bi, fc, true);
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                if work.get(ri, fc) {
                    basis.set(bi, pc, true);
                }
            }
        }
        basis
    }
}

/// Result of Gaussian elimination over GF(2).
#[derive(Debug, Clone)]
pub struct Gf2Elimination {
    pub rank: usize,
    /// Row-reduced basis of the row span of the input.
    pub basis: Gf2Mat,
    /// Solution of `A x = b` (free variables zero) when `b` was supplied
    /// and consistent.
    pub solution: Option<Gf2Vec>,
}

/// Gaussian elimination on the rows of `a`, optionally solving `a x = b`.
///
/// Returns the rank, a row-reduced basis of rowspan(a), and the solution
/// when requested. Signals `InconsistentSystem` if `b` is not reachable.
pub fn gf2_eliminate(a: &Gf2Mat, b: Option<&Gf2Vec>) -> Result<Gf2Elimination> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if let Some(v) = b {
        if v.len != a.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs length {} vs {} rows",
                v.len, a.rows
            )));
        }
    }
    let mut work = a.clone();
    let mut rhs = b.cloned();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for c in 0..work.cols {
        let mut pivot = None;
        for r in rank..work.rows {
            if work.get(r, c) {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        work.swap_rows(rank, p);
        if let Some(v) = rhs.as_mut() {
            let (br, bp) = (v.get(rank), v.get(p));
            v.set(rank, bp);
            v.set(p, br);
        }
        for r in 0..work.rows {
            if r != rank && work.get(r, c) {
                work.xor_rows(r, rank);
                if let Some(v) = rhs.as_mut() {
                    let x = v.get(rank);
                    if x {
                        v.flip(r);
                    }
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == work.rows {
            break;
        }
    }

    let solution = match rhs {
        None => None,
        Some(v) => {
            // Rows past the rank are zero; b must be zero there too.
            for r in rank..work.rows {
                if v.get(r) {
                    return Err(Error::InconsistentSystem);
                }
            }
            let mut x = Gf2Vec::zeros(work.cols);
            for (r, &c) in pivot_cols.iter().enumerate() {
                if v.get(r) {
                    x.set(c, true);
                }
            }
            Some(x)
        }
    };

    let mut basis = Gf2Mat::zeros(rank, a.cols);
    for r in 0..rank {
        basis.set_row(r, &work.row(r));
    }
    Ok(Gf2Elimination { rank, basis, solution })
}

/// Is `v` a GF(2) combination of the rows of `a`?
pub fn gf2_rowspan_contains(a: &Gf2Mat, v: &Gf2Vec) -> Result<bool> {
    if v.len != a.cols {
        return Err(Error::DimensionMismatch(format!(
            "width {} vs vector length {}",
            a.cols, v.len
        )));
    }
    Ok(RowBasis::from_matrix(a).contains(v))
}

/// Incrementally maintained row-reduced basis. Used by the span learner
/// and for repeated membership queries against a fixed matrix.
#[derive(Debug, Clone)]
pub struct RowBasis {
    width: usize,
    /// Reduced rows, each with a unique leading (pivot) column.
    rows: Vec<Gf2Vec>,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn new(width: usize) -> Self {
        RowBasis { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_matrix(a: &Gf2Mat) -> Self {
        let mut b = RowBasis::new(a.cols);
        for r in 0..a.rows {
            b.insert(&a.row(r));
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; returns the residue.
    pub fn reduce(&self, v: &Gf2Vec) -> Gf2Vec {
        assert_eq!(v.len, self.width);
        let mut res = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if res.get(p) {
                res.xor_assign(row);
            }
        }
        res
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert `v`; returns true if it extended the basis (rank grew).
    pub fn insert(&mut self, v: &Gf2Vec) -> bool {
        let res = self.reduce(v);
        let Some(pivot) = res.iter_ones().next() else { return false };
        // Keep reduced form: clear the new pivot from existing rows.
        for row in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&res);
            }
        }
        self.rows.push(res);
        self.pivots.push(pivot);
        true
    }

    pub fn basis_rows(&self) -> &[Gf2Vec] {
        &self.rows
    }

    /// Uniform element of the span.
    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> Gf2Vec {
        let mut out = Gf2Vec::zeros(self.width);
        for row in &self.rows {
            if rng.gen::<bool>() {
                out.xor_assign(row);
            }
        }
        out
    }
}

/// Uniform vector of length `m` with Hamming weight exactly `t`.
pub fn gf2_sample_fixed_weight<R: Rng>(m: usize, t: usize, rng: &mut R) -> Result<Gf2Vec> {
    if t > m {
        return Err(Error::WeightOutOfRange { weight: t, len: m });
    }
    let idx = rand::seq::index::sample(rng, m, t);
    let mut v = Gf2Vec::zeros(m);
    for i in idx {
        v.set(i, true);
    }
    Ok(v)
}
