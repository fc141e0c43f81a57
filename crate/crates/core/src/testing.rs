//! Deterministic RNG for hand-traced tests.

use rand::RngCore;

/// Replays a fixed list of uniforms. `rng.random::<f64>()` returns them
/// exactly (to 53 bits) in order; the script repeats when exhausted.
pub struct ScriptedRng {
    values: Vec<u64>,
    next: usize,
}

impl ScriptedRng {
    pub fn new(uniforms: &[f64]) -> Self {
        let values = uniforms
            .iter()
            .map(|&u| {
                assert!((0.0..1.0).contains(&u));
                ((u * (1u64 << 53) as f64) as u64) << 11
            })
            .collect();
        Self { values, next: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.next
    }
}

impl RngCore for ScriptedRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.values[self.next % self.values.len()];
        self.next += 1;
        v
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;

    #[test]
    fn replays_uniforms_exactly() {
        let mut rng = ScriptedRng::new(&[0.25, 0.0, 0.75]);
        assert_eq!(rng.random::<f64>(), 0.25);
        assert_eq!(rng.random::<f64>(), 0.0);
        assert_eq!(rng.random::<f64>(), 0.75);
        assert_eq!(rng.consumed(), 3);
    }
}
