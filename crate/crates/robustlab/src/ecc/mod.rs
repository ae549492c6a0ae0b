//! Uniquely decodable binary code with constant-fraction decoding radius.
//!
//! Construction: an outer rate-1/2 Reed-Solomon code over GF(64)
//! concatenated with the [32, 6, 16] first-order Reed-Muller inner code.
//! Decoding is generalized-minimum-distance: inner nearest-codeword
//! decoding produces per-block reliabilities, then outer
//! errors-and-erasures decoding runs at every erasure threshold and
//! candidates are verified by Hamming distance to the received word.
//!
//! For message length n this yields code length m = 64 * ceil(n/6) and a
//! guaranteed radius of 8 * (ceil(n/6) + 1) - 1, which always covers
//! floor(m/8). Unique decoding within the radius follows from the
//! product minimum distance 16 * (ceil(n/6) + 1) exceeding twice the
//! radius. Beyond the radius decoding is best effort: it may fail or
//! return a different message.

pub mod gf64;
pub mod inner;
pub mod rs;

use crate::algebra::gf2::Gf2Vec;
use crate::error::{Error, Result};
use inner::InnerCode;
use rs::RsCode;

/// Largest supported message length: the outer code lives in GF(64), so
/// 2 * ceil(n/6) <= 63.
pub const MAX_MSG_LEN: usize = 186;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub msg_len: usize,
    pub code_len: usize,
    /// Every error pattern of weight <= radius decodes exactly.
    pub radius: usize,
}

#[derive(Debug, Clone)]
pub struct Code {
    params: CodeParams,
    outer: RsCode,
    inner: InnerCode,
    outer_k: usize,
    outer_n: usize,
}

/// Build the code for `msg_len`-bit messages.
pub fn ecc_build(msg_len: usize) -> Result<Code> {
    if msg_len < 8 {
        return Err(Error::InvalidParameter(format!("msg_len {msg_len} < 8")));
    }
    if msg_len > MAX_MSG_LEN {
        return Err(Error::InvalidParameter(format!(
            "msg_len {msg_len} exceeds supported maximum {MAX_MSG_LEN}"
        )));
    }
    let outer_k = msg_len.div_ceil(inner::SYMBOL_BITS);
    let outer_n = 2 * outer_k;
    let outer = RsCode::new(outer_n, outer_k)?;
    let code_len = outer_n * inner::BLOCK_BITS;
    // GMD radius: half the product distance, minus one.
    let radius = (inner::MIN_DISTANCE * outer.min_distance()).div_ceil(2) - 1;
    debug_assert!(radius >= code_len / 8);
    Ok(Code {
        params: CodeParams { msg_len, code_len, radius },
        outer,
        inner: InnerCode::new(),
        outer_k,
        outer_n,
    })
}

impl Code {
    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn msg_len(&self) -> usize {
        self.params.msg_len
    }

    pub fn code_len(&self) -> usize {
        self.params.code_len
    }

    pub fn radius(&self) -> usize {
        self.params.radius
    }

    fn symbols_of_message(&self, x: &Gf2Vec) -> Vec<u8> {
        let mut symbols = vec![0u8; self.outer_k];
        for i in 0..x.len() {
            if x.get(i) {
                symbols[i / inner::SYMBOL_BITS] |= 1 << (i % inner::SYMBOL_BITS);
            }
        }
        symbols
    }

    fn message_of_symbols(&self, symbols: &[u8]) -> Result<Gf2Vec> {
        let mut x = Gf2Vec::zeros(self.params.msg_len);
        for (si, &sym) in symbols.iter().enumerate() {
            for b in 0..inner::SYMBOL_BITS {
                if (sym >> b) & 1 == 1 {
                    let pos = si * inner::SYMBOL_BITS + b;
                    if pos >= self.params.msg_len {
                        // A codeword of the padded code outside the
                        // message subcode; only reachable beyond the
                        // guaranteed radius.
                        return Err(Error::DecodeFailure);
                    }
                    x.set(pos, true);
                }
            }
        }
        Ok(x)
    }

    fn blocks_of_word(&self, y: &Gf2Vec) -> Vec<u32> {
        let words = y.words();
        (0..self.outer_n)
            .map(|j| {
                let w = words[j / 2];
                if j % 2 == 0 {
                    (w & 0xFFFF_FFFF) as u32
                } else {
                    (w >> 32) as u32
                }
            })
            .collect()
    }

    fn word_of_blocks(&self, blocks: &[u32]) -> Gf2Vec {
        let mut y = Gf2Vec::zeros(self.params.code_len);
        for (j, &b) in blocks.iter().enumerate() {
            for i in 0..inner::BLOCK_BITS {
                if (b >> i) & 1 == 1 {
                    y.set(j * inner::BLOCK_BITS + i, true);
                }
            }
        }
        y
    }

    pub fn encode(&self, x: &Gf2Vec) -> Result<Gf2Vec> {
        if x.len() != self.params.msg_len {
            return Err(Error::DimensionMismatch(format!(
                "message length {} != {}",
                x.len(),
                self.params.msg_len
            )));
        }
        let symbols = self.symbols_of_message(x);
        let cw = self.outer.encode(&symbols);
        let blocks: Vec<u32> = cw.iter().map(|&s| self.inner.encode(s)).collect();
        Ok(self.word_of_blocks(&blocks))
    }

    /// GMD decoding. Guaranteed exact for every error pattern of weight
    /// at most `radius`; best effort beyond.
    pub fn decode(&self, y: &Gf2Vec) -> Result<Gf2Vec> {
        if y.len() != self.params.code_len {
            return Err(Error::DimensionMismatch(format!(
                "word length {} != {}",
                y.len(),
                self.params.code_len
            )));
        }
        let blocks = self.blocks_of_word(y);
        let mut hard = vec![0u8; self.outer_n];
        let mut reliability: Vec<(u32, usize)> = Vec::with_capacity(self.outer_n);
        for (j, &b) in blocks.iter().enumerate() {
            let (sym, dist) = self.inner.decode(b);
            hard[j] = sym;
            reliability.push((dist, j));
        }
        // Least reliable first; ties by position for determinism.
        reliability.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let two_t = self.outer.redundancy();
        for tau in 0..=two_t {
            let erased: Vec<usize> = reliability[..tau].iter().map(|&(_, j)| j).collect();
            let Ok(msg_symbols) = self.outer.decode_erasures(&hard, &erased) else {
                continue;
            };
            let cw = self.outer.encode(&msg_symbols);
            let cand_blocks: Vec<u32> = cw.iter().map(|&s| self.inner.encode(s)).collect();
            let dist: u32 = blocks
                .iter()
                .zip(&cand_blocks)
                .map(|(a, b)| (a ^ b).count_ones())
                .sum();
            if dist as usize <= self.params.radius {
                return self.message_of_symbols(&msg_symbols);
            }
        }
        Err(Error::DecodeFailure)
    }
}
