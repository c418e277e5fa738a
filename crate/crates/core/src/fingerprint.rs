//! Deterministic 128-bit fingerprints built from the splitmix64 finalizer.
//! Fixed constants, so fingerprints are stable across runs and platforms.

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fingerprint(pub u64, pub u64);

/// Order-dependent hash of a word sequence.
#[derive(Debug, Clone, Copy)]
pub struct SeqHasher {
    a: u64,
    b: u64,
}

impl SeqHasher {
    pub fn new(seed: u64) -> Self {
        SeqHasher { a: mix64(seed), b: mix64(seed ^ 0x5555_5555_5555_5555) }
    }

    #[inline]
    pub fn push(&mut self, x: u64) {
        self.a = mix64(self.a ^ x).wrapping_add(0x2545_F491_4F6C_DD1D);
        self.b = mix64(self.b.rotate_left(17) ^ x ^ 0xA076_1D64_78BD_642F);
    }

    pub fn finish(self) -> Fingerprint {
        Fingerprint(self.a, self.b)
    }
}

/// Order-independent hash of a multiset of words: a sum of per-entry mixes
/// in two independent lanes.
#[derive(Debug, Clone, Copy, Default)]
pub struct MultisetHasher {
    a: u64,
    b: u64,
}

impl MultisetHasher {
    #[inline]
    pub fn add(&mut self, x: u64) {
        self.a = self.a.wrapping_add(mix64(x));
        self.b = self.b.wrapping_add(mix64(x ^ 0xD6E8_FEB8_6659_FD93).rotate_left(23));
    }

    pub fn finish(self) -> Fingerprint {
        Fingerprint(self.a, self.b)
    }
}
