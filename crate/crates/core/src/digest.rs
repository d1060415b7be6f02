use sha2::{Digest, Sha256};

/// Length-prefixed SHA-256 feeder so adjacent fields cannot alias.
pub(crate) struct Feed(Sha256);

impl Feed {
    pub(crate) fn new() -> Self {
        Self(Sha256::new())
    }

    pub(crate) fn tag(&mut self, s: &str) {
        self.usize(s.len());
        self.0.update(s.as_bytes());
    }

    pub(crate) fn usize(&mut self, v: usize) {
        self.0.update((v as u64).to_le_bytes());
    }

    pub(crate) fn u32(&mut self, v: u32) {
        self.0.update(v.to_le_bytes());
    }

    pub(crate) fn f64(&mut self, v: f64) {
        self.0.update(v.to_bits().to_le_bytes());
    }

    pub(crate) fn f64s(&mut self, v: &[f64]) {
        self.usize(v.len());
        for &x in v {
            self.f64(x);
        }
    }

    pub(crate) fn finish(self) -> [u8; 32] {
        self.0.finalize().into()
    }
}
