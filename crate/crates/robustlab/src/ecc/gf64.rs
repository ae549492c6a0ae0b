//! GF(2^6) arithmetic via log/antilog tables.
//!
//! Field generated by x^6 + x + 1; alpha = x is primitive.

const POLY: u16 = 0b100_0011;
pub const FIELD_SIZE: usize = 64;
pub const ORDER: usize = FIELD_SIZE - 1;

#[derive(Debug, Clone)]
pub struct Gf64 {
    exp: [u8; 2 * ORDER],
    log: [u8; FIELD_SIZE],
}

impl Gf64 {
    pub fn new() -> Self {
        let mut exp = [0u8; 2 * ORDER];
        let mut log = [0u8; FIELD_SIZE];
        let mut v: u16 = 1;
        for i in 0..ORDER {
            exp[i] = v as u8;
            log[v as usize] = i as u8;
            v <<= 1;
            if v & 0b100_0000 != 0 {
                v ^= POLY;
            }
        }
        for i in ORDER..2 * ORDER {
            exp[i] = exp[i - ORDER];
        }
        Gf64 { exp, log }
    }

    #[inline]
    pub fn alpha_pow(&self, e: usize) -> u8 {
        self.exp[e % ORDER]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.exp[ORDER - self.log[a as usize] as usize]
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> u8 {
        debug_assert!(b != 0);
        if a == 0 {
            0
        } else {
            self.exp
                [(self.log[a as usize] as usize + ORDER - self.log[b as usize] as usize) % ORDER]
        }
    }

    /// Evaluate a polynomial (coefficients low-to-high) at `x`.
    pub fn poly_eval(&self, coeffs: &[u8], x: u8) -> u8 {
        let mut acc = 0u8;
        for &c in coeffs.iter().rev() {
            acc = self.mul(acc, x) ^ c;
        }
        acc
    }
}

impl Default for Gf64 {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_exhaustive() {
        let f = Gf64::new();
        for a in 1..64u8 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
        }
        for a in 0..64u8 {
            for b in 0..64u8 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..64u8 {
                    // distributivity (xor is field addition)
                    assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                }
            }
        }
    }

    #[test]
    fn alpha_has_full_order() {
        let f = Gf64::new();
        let mut seen = std::collections::HashSet::new();
        for e in 0..ORDER {
            seen.insert(f.alpha_pow(e));
        }
        assert_eq!(seen.len(), ORDER);
    }
}
