//! First-order Reed-Muller inner code [32, 6, 16].
//!
//! Six message bits map to a 32-bit block: one complement bit plus five
//! affine coordinate masks. Decoding is exhaustive nearest-codeword
//! search over the 64 codewords; ties break toward the smaller symbol so
//! decoding is deterministic.

pub const BLOCK_BITS: usize = 32;
pub const SYMBOL_BITS: usize = 6;
pub const MIN_DISTANCE: usize = 16;

const MASKS: [u32; 6] = [
    0xFFFF_FFFF, // constant term
    0xAAAA_AAAA, // index bit 0
    0xCCCC_CCCC, // index bit 1
    0xF0F0_F0F0, // index bit 2
    0xFF00_FF00, // index bit 3
    0xFFFF_0000, // index bit 4
];

#[derive(Debug, Clone)]
pub struct InnerCode {
    codewords: [u32; 64],
}

impl InnerCode {
    pub fn new() -> Self {
        let mut codewords = [0u32; 64];
        for (sym, cw) in codewords.iter_mut().enumerate() {
            let mut c = 0u32;
            for (bit, mask) in MASKS.iter().enumerate() {
                if (sym >> bit) & 1 == 1 {
                    c ^= mask;
                }
            }
            *cw = c;
        }
        InnerCode { codewords }
    }

    pub fn encode(&self, symbol: u8) -> u32 {
        self.codewords[symbol as usize & 0x3f]
    }

    /// Nearest codeword: returns (symbol, distance).
    pub fn decode(&self, block: u32) -> (u8, u32) {
        let mut best_sym = 0u8;
        let mut best_dist = u32::MAX;
        for (sym, &cw) in self.codewords.iter().enumerate() {
            let d = (block ^ cw).count_ones();
            if d < best_dist {
                best_dist = d;
                best_sym = sym as u8;
            }
        }
        (best_sym, best_dist)
    }
}

impl Default for InnerCode {
    fn default() -> Self {
        Self::new()
    }
}
