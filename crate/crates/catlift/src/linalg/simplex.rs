//! Euclidean projection onto the probability simplex {w ≥ 0, Σw = 1}.

use crate::scalar::Real;

/// Sort-and-threshold projection: the output minimizes ‖w − v‖₂ over the
/// simplex. O(n log n).
pub fn project_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let n = v.len();
    assert!(n > 0, "cannot project the empty vector");
    let mut sorted: Vec<T> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());

    // Largest k with sorted[k] + (1 − prefix_sum)/(k+1) > 0.
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let count = T::from_usize(k + 1).unwrap();
        let candidate = (cumulative - T::one()) / count;
        if u - candidate > T::zero() {
            theta = candidate;
        }
    }

    v.iter()
        .map(|&x| (x - theta).max(T::zero()))
        .collect()
}
