//! Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//!
//! A stream is identified by a 64-bit key (the user seed) and a 64-bit stream
//! id placed in the upper two counter words; the lower two words count
//! blocks. Each 128-bit block yields two `u64`s, `w1:w0` then `w3:w2`.

const MUL0: u32 = 0xD251_1F53;
const MUL1: u32 = 0xCD9E_8D57;
const WEYL0: u32 = 0x9E37_79B9;
const WEYL1: u32 = 0xBB67_AE85;

#[inline]
fn round(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let p0 = MUL0 as u64 * ctr[0] as u64;
    let p1 = MUL1 as u64 * ctr[2] as u64;
    [
        (p1 >> 32) as u32 ^ ctr[1] ^ key[0],
        p1 as u32,
        (p0 >> 32) as u32 ^ ctr[3] ^ key[1],
        p0 as u32,
    ]
}

/// One Philox4x32 block with ten rounds.
pub fn philox4x32_10(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = ctr;
    let mut k = key;
    for r in 0..10 {
        if r > 0 {
            k[0] = k[0].wrapping_add(WEYL0);
            k[1] = k[1].wrapping_add(WEYL1);
        }
        c = round(c, k);
    }
    c
}

#[derive(Debug, Clone)]
pub struct PhiloxStream {
    key: [u32; 2],
    stream: u64,
    block: u64,
    buf: [u64; 2],
    used: usize,
}

impl PhiloxStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        PhiloxStream {
            key: [seed as u32, (seed >> 32) as u32],
            stream,
            block: 0,
            buf: [0; 2],
            used: 2,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        if self.used == 2 {
            let ctr = [
                self.block as u32,
                (self.block >> 32) as u32,
                self.stream as u32,
                (self.stream >> 32) as u32,
            ];
            let w = philox4x32_10(ctr, self.key);
            self.buf = [
                (w[1] as u64) << 32 | w[0] as u64,
                (w[3] as u64) << 32 | w[2] as u64,
            ];
            self.block += 1;
            self.used = 0;
        }
        let v = self.buf[self.used];
        self.used += 1;
        v
    }

    /// Uniform on `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
