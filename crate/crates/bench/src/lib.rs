//! Shared fixtures for the benchmarks.

use invgraph::{InvolutiveAlphabet, Letter, Word};

/// Deterministic pseudo-random word over the closure.
pub fn scrambled_word(alpha: &InvolutiveAlphabet, len: usize, seed: u64) -> Word {
    let letters: Vec<Letter> = alpha.letters().collect();
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        out.push(letters[(state as usize) % letters.len()]);
    }
    Word(out)
}
