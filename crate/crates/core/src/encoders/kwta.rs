//! k-winners-take-all binarisation.
//!
//! Exactly `k` positions are set: those holding the largest pre-activations.
//! Ties at the k-th value go to the lowest index, so the result is a pure
//! function of the input.

use std::cmp::Ordering;

use super::hash::BitVector;
use crate::error::{argument, Result};

fn check_k(len: usize, k: usize) -> Result<()> {
    if k == 0 || k > len {
        return argument(format!("k-WTA needs 1 <= k <= {len}, got k = {k}"));
    }
    Ok(())
}

/// k-WTA over real pre-activations. Values are ranked with `f64::total_cmp`,
/// so a NaN (positive payload) outranks every finite value.
pub fn k_wta(pre_activations: &[f64], k: usize) -> Result<BitVector> {
    check_k(pre_activations.len(), k)?;
    let mut order: Vec<u32> = (0..pre_activations.len() as u32).collect();
    let rank = |a: &u32, b: &u32| -> Ordering {
        pre_activations[*b as usize]
            .total_cmp(&pre_activations[*a as usize])
            .then(a.cmp(b))
    };
    if k < order.len() {
        order.select_nth_unstable_by(k - 1, rank);
    }
    Ok(BitVector::from_indices(
        pre_activations.len(),
        order[..k].iter().map(|&i| i as usize),
    ))
}

/// Integer k-WTA used by the sparse binary encoder. Each candidate is packed
/// into one `u64` key (value high, inverted index low) so a single unstable
/// selection yields the winners with lowest-index tie-breaking.
pub(crate) fn k_wta_u32(pre_activations: &[u32], k: usize) -> Result<BitVector> {
    check_k(pre_activations.len(), k)?;
    if pre_activations.len() > u32::MAX as usize {
        return argument("k-WTA input longer than 2^32");
    }
    let mut keys: Vec<u64> = pre_activations
        .iter()
        .enumerate()
        .map(|(i, &v)| (u64::from(v) << 32) | u64::from(!(i as u32)))
        .collect();
    if k < keys.len() {
        keys.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
    }
    Ok(BitVector::from_indices(
        pre_activations.len(),
        keys[..k].iter().map(|&key| !(key as u32) as usize),
    ))
}
