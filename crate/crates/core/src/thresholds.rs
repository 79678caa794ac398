//! Exact solving of the proportion-active equations.
//!
//! The proportion of active particles at tolerance `eps` is a step function
//! of `eps` that jumps at the realized per-particle minimum distances, so
//! the equation `PA(eps) = alpha * PA_prev` is solved by enumeration: the
//! returned threshold is the largest `eps` keeping at most the target number
//! of particles active under the strict `distance < eps` convention.

use crate::error::AbcError;

/// Number of particles to keep active: `round(alpha * active)`.
pub fn pa_target_count(alpha: f64, active: usize) -> Result<usize, AbcError> {
    let target = (alpha * active as f64).round() as usize;
    if target == 0 {
        return Err(AbcError::NoActiveParticles);
    }
    Ok(target)
}

/// Largest threshold `eps <= eps_prev` with at most `target` of the given
/// minimum distances strictly below it.
///
/// With distances sorted ascending this is the `(target+1)`-th smallest
/// value: exactly `target` entries lie strictly below it when values are
/// distinct, and never more than `target` under ties. When `target` covers
/// every entry the previous threshold is returned unchanged (no tightening).
pub fn select_pa_threshold(min_distances: &[f64], target: usize, eps_prev: f64) -> f64 {
    debug_assert!(min_distances.iter().all(|d| *d < eps_prev));
    if target >= min_distances.len() {
        return eps_prev;
    }
    let mut sorted = min_distances.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted[target]
}
