//! Squared centered L²-discrepancy of positions rescaled to `[0, 1)`:
//!
//! ```text
//! CL2^2 = 13/12 - (2/N) sum_i (1 + |z_i - 1/2|/2 - |z_i - 1/2|^2/2)
//!       + (1/N^2) sum_{i,j} (1 + |z_i - 1/2|/2 + |z_j - 1/2|/2 - |z_i - z_j|/2)
//! ```

fn single_sum(z: &[f64]) -> f64 {
    z.iter()
        .map(|&zi| {
            let a = (zi - 0.5).abs();
            1.0 + 0.5 * a - 0.5 * a * a
        })
        .sum()
}

fn finish(value: f64) -> f64 {
    // cancellation in the closed form can leave tiny negative residues
    value.max(0.0)
}

/// O(N²) evaluation of the double-sum closed form.
pub fn centered_l2_discrepancy_direct(positions: &[f64], length: f64) -> f64 {
    let n = positions.len() as f64;
    let z: Vec<f64> = positions.iter().map(|&x| x / length).collect();
    let mut double = 0.0;
    for &zi in &z {
        let ai = (zi - 0.5).abs();
        for &zj in &z {
            let aj = (zj - 0.5).abs();
            double += 1.0 + 0.5 * ai + 0.5 * aj - 0.5 * (zi - zj).abs();
        }
    }
    finish(13.0 / 12.0 - 2.0 / n * single_sum(&z) + double / (n * n))
}

/// O(N log N) evaluation: the pairwise `|z_i - z_j|` sum is taken from the
/// sorted sample.
pub fn centered_l2_discrepancy(positions: &[f64], length: f64) -> f64 {
    let n = positions.len();
    let nf = n as f64;
    let mut z: Vec<f64> = positions.iter().map(|&x| x / length).collect();
    let single = single_sum(&z);
    let abs_sum: f64 = z.iter().map(|&zi| (zi - 0.5).abs()).sum();
    z.sort_by(f64::total_cmp);
    // sum_{i<j} (z_(j) - z_(i)) = sum_k z_(k) (2k - n + 1)
    let pair: f64 = z
        .iter()
        .enumerate()
        .map(|(k, &zk)| zk * (2.0 * k as f64 - nf + 1.0))
        .sum();
    let double = nf * nf + nf * abs_sum - pair;
    finish(13.0 / 12.0 - 2.0 / nf * single + double / (nf * nf))
}

/// Expected discrepancy of `n` i.i.d. uniform points, `(5/4 - 13/12)/n`.
pub fn uniform_discrepancy_mean(n: usize) -> f64 {
    (5.0 / 4.0 - 13.0 / 12.0) / n as f64
}
