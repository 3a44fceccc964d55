//! Stable seed derivation for independent trials and replicates.
//!
//! Parallel and sequential execution must produce identical results, so
//! every trial gets its own RNG seeded from a value that depends only on the
//! master seed and the trial's coordinates. The mixer is a fixed splitmix64
//! chain; it does not depend on any hasher the standard library might change.

/// splitmix64 step; full-period mixer over u64.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a path of coordinates
/// (e.g. cell index, replicate index).
pub fn derive(master: u64, path: &[u64]) -> u64 {
    let mut s = splitmix64(master);
    for &c in path {
        s = splitmix64(s ^ c.wrapping_add(0x6a09_e667_f3bc_c909));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_stable() {
        // Frozen values: changing the mixer would silently re-randomize
        // every experiment, so pin the function here.
        assert_eq!(splitmix64(0), 0xe220a8397b1dcdaf);
        assert_eq!(derive(42, &[0, 0]), derive(42, &[0, 0]));
        assert_ne!(derive(42, &[0, 0]), derive(42, &[0, 1]));
        assert_ne!(derive(42, &[0, 1]), derive(42, &[1, 0]));
        assert_ne!(derive(42, &[0]), derive(43, &[0]));
    }
}
