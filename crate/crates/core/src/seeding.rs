//! Deterministic derivation of independent sub-seeds from one run seed.

/// Derive a sub-seed for a `(lane, step)` coordinate, e.g. one lane per
/// dataset example and one step per candidate batch.
///
/// SplitMix64 finalizer over the mixed words; cheap, stable across
/// platforms, and well-spread for nearby inputs.
pub fn derive_seed(base: u64, lane: u64, step: u64) -> u64 {
    let mut z = base
        .wrapping_add(lane.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(step.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearby_coordinates_get_distinct_seeds() {
        let a = derive_seed(7, 0, 0);
        let b = derive_seed(7, 0, 1);
        let c = derive_seed(7, 1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, c);
    }

    #[test]
    fn derivation_is_pure() {
        assert_eq!(derive_seed(42, 3, 9), derive_seed(42, 3, 9));
    }
}
