//! Pinned xorshift64* generator used for reproducible random grids.
//!
//! The constants and shift triple are fixed so that verification reports are
//! bit-identical across runs and implementations.

const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;
const MULTIPLIER: u64 = 2_685_821_657_736_338_717;

#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    /// Seed 0 is remapped, since the all-zero state is a fixed point.
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 {
            ZERO_SEED_REPLACEMENT
        } else {
            seed
        };
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut s = self.state;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state = s;
        s.wrapping_mul(MULTIPLIER)
    }

    /// Bit 63 of the next output.
    pub fn next_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

impl Iterator for XorShift64Star {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_u64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from an independent reference run of the same recurrence.
    #[test]
    fn seed_one_sequence() {
        let outs: Vec<u64> = XorShift64Star::new(1).take(4).collect();
        assert_eq!(
            outs,
            vec![
                0x47e4_ce4b_896c_dd1d,
                0xabcf_a6a8_e079_651d,
                0xb9d1_0d8f_eb73_1f57,
                0x4db4_18a0_bb1b_019d
            ]
        );
    }

    #[test]
    fn zero_seed_is_remapped() {
        let a: Vec<u64> = XorShift64Star::new(0).take(3).collect();
        let b: Vec<u64> = XorShift64Star::new(ZERO_SEED_REPLACEMENT).take(3).collect();
        assert_eq!(a, b);
        let bits: Vec<bool> = {
            let mut g = XorShift64Star::new(0);
            (0..6).map(|_| g.next_bit()).collect()
        };
        assert_eq!(bits, vec![false, false, true, false, true, true]);
    }
}
