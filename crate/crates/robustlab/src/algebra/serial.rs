//! Text serialization of matrices and vectors.
//!
//! Format: a header line `gf2 rows cols` or `zq rows cols q`, then one
//! hex line per row. GF(2) rows are bit-packed little-endian bytes; Z_q
//! rows are little-endian u64 words. Vectors serialize as 1 x len
//! matrices.

use crate::algebra::gf2::{Gf2Mat, Gf2Vec};
use crate::algebra::zq::{ZqMat, ZqVec};
use crate::error::{Error, Result};

pub fn gf2_mat_to_string(m: &Gf2Mat) -> String {
    let mut out = format!("gf2 {} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        out.push_str(&hex::encode(m.row(r).to_bytes()));
        out.push('\n');
    }
    out
}

pub fn gf2_vec_to_string(v: &Gf2Vec) -> String {
    format!("gf2 1 {}\n{}\n", v.len(), hex::encode(v.to_bytes()))
}

pub fn zq_mat_to_string(m: &ZqMat) -> String {
    let mut out = format!("zq {} {} {}\n", m.rows(), m.cols(), m.modulus());
    for r in 0..m.rows() {
        let row = m.row(r);
        let mut bytes = Vec::with_capacity(row.len() * 8);
        for i in 0..row.len() {
            bytes.extend_from_slice(&row.get(i).to_le_bytes());
        }
        out.push_str(&hex::encode(bytes));
        out.push('\n');
    }
    out
}

pub fn zq_vec_to_string(v: &ZqVec) -> String {
    let mut bytes = Vec::with_capacity(v.len() * 8);
    for i in 0..v.len() {
        bytes.extend_from_slice(&v.get(i).to_le_bytes());
    }
    format!("zq 1 {} {}\n{}\n", v.len(), v.modulus(), hex::encode(bytes))
}

/// Parse lines produced by the writers above. `lines` is advanced past
/// the consumed block.
pub fn gf2_mat_from_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Gf2Mat> {
    let header = lines.next().ok_or_else(|| Error::Parse("missing gf2 header".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "gf2" {
        return Err(Error::Parse(format!("bad gf2 header: {header}")));
    }
    let rows: usize = parts[1].parse().map_err(|_| Error::Parse("bad row count".into()))?;
    let cols: usize = parts[2].parse().map_err(|_| Error::Parse("bad col count".into()))?;
    let mut m = Gf2Mat::zeros(rows, cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse("missing gf2 row".into()))?;
        let bytes = hex::decode(line.trim()).map_err(|e| Error::Parse(e.to_string()))?;
        m.set_row(r, &Gf2Vec::from_bytes(&bytes, cols)?);
    }
    Ok(m)
}

pub fn gf2_vec_from_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Gf2Vec> {
    let m = gf2_mat_from_lines(lines)?;
    if m.rows() != 1 {
        return Err(Error::Parse("expected a 1-row vector".into()));
    }
    Ok(m.row(0))
}

pub fn zq_mat_from_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<ZqMat> {
    let header = lines.next().ok_or_else(|| Error::Parse("missing zq header".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "zq" {
        return Err(Error::Parse(format!("bad zq header: {header}")));
    }
    let rows: usize = parts[1].parse().map_err(|_| Error::Parse("bad row count".into()))?;
    let cols: usize = parts[2].parse().map_err(|_| Error::Parse("bad col count".into()))?;
    let q: u64 = parts[3].parse().map_err(|_| Error::Parse("bad modulus".into()))?;
    if q < 2 {
        return Err(Error::Parse("modulus must be >= 2".into()));
    }
    let mut m = ZqMat::zeros(rows, cols, q);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse("missing zq row".into()))?;
        let bytes = hex::decode(line.trim()).map_err(|e| Error::Parse(e.to_string()))?;
        if bytes.len() != cols * 8 {
            return Err(Error::Parse(format!(
                "zq row byte length {} != {}",
                bytes.len(),
                cols * 8
            )));
        }
        for c in 0..cols {
            let mut w = [0u8; 8];
            w.copy_from_slice(&bytes[c * 8..(c + 1) * 8]);
            let v = u64::from_le_bytes(w);
            if v >= q {
                return Err(Error::Parse(format!("entry {v} >= modulus {q}")));
            }
            m.set(r, c, v);
        }
    }
    Ok(m)
}

pub fn zq_vec_from_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<ZqVec> {
    let m = zq_mat_from_lines(lines)?;
    if m.rows() != 1 {
        return Err(Error::Parse("expected a 1-row vector".into()));
    }
    Ok(m.row(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rng::RngStream;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn prop_gf2_round_trip(rows in 1usize..8, cols in 1usize..130, seed in any::<u64>()) {
            let mut rng = RngStream::from_seed_u64(seed).rng();
            let m = Gf2Mat::random(rows, cols, &mut rng);
            let s = gf2_mat_to_string(&m);
            let back = gf2_mat_from_lines(&mut s.lines()).unwrap();
            prop_assert_eq!(m, back);
        }

        #[test]
        fn prop_zq_round_trip(rows in 1usize..6, cols in 1usize..20, seed in any::<u64>(), q in prop::sample::select(vec![2u64, 7, 64, 4096, 65536])) {
            let mut rng = RngStream::from_seed_u64(seed).rng();
            let m = ZqMat::random(rows, cols, q, &mut rng);
            let s = zq_mat_to_string(&m);
            let back = zq_mat_from_lines(&mut s.lines()).unwrap();
            prop_assert_eq!(m, back);
        }
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let s = "zq 1 1 4\n0500000000000000\n";
        assert!(zq_mat_from_lines(&mut s.lines()).is_err());
    }
}
