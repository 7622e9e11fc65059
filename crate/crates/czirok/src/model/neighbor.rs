//! Kernel-weighted velocity averages `<u>_i`.
//!
//! The self term `j = i` is included in both averaging modes, so under the
//! normalized rule the weight sum is at least `phi(0) > 0` and the zero branch
//! only guards degenerate kernels.

use super::{torus_distance, Averaging, KernelShape, KernelSpec, ModelParams, SwarmState};

/// Below this many agents the O(N^2) sum is used directly.
const FAST_PATH_MIN_AGENTS: usize = 64;

/// Reusable buffers for the sorted sweep.
///
/// Agents are ordered by position, so the neighbours of each agent form a
/// circular run of the ordering. Two monotone pointers track the run and a
/// prefix sum over the doubly unrolled ordering gives each window sum, for
/// O(N log N) work per call (O(N) when the order barely changes).
#[derive(Debug, Default, Clone)]
pub struct NeighborSearch {
    order: Vec<usize>,
    sorted_x: Vec<f64>,
    prefix: Vec<f64>,
}

/// Total order on agents: position, then index. Results never depend on the
/// order left behind by a previous call.
fn key_cmp(x: &[f64], a: usize, b: usize) -> std::cmp::Ordering {
    x[a].total_cmp(&x[b]).then(a.cmp(&b))
}

/// `key_cmp(x, a, b).is_gt()` for finite positions.
#[inline]
fn key_gt(x: &[f64], a: usize, b: usize) -> bool {
    x[a] > x[b] || (x[a] == x[b] && a > b)
}

/// Insertion sort for an almost sorted order; gives up after `budget` moves.
fn insertion_sort(order: &mut [usize], x: &[f64], budget: usize) -> bool {
    let mut moves = 0;
    for i in 1..order.len() {
        let cur = order[i];
        let mut j = i;
        while j > 0 && key_gt(x, order[j - 1], cur) {
            order[j] = order[j - 1];
            j -= 1;
            moves += 1;
        }
        order[j] = cur;
        if moves > budget {
            return false;
        }
    }
    true
}

fn finish(sum: f64, weight: f64, n: usize, averaging: Averaging) -> f64 {
    match averaging {
        Averaging::Symmetric => sum / n as f64,
        Averaging::Normalized => {
            if weight > 0.0 {
                sum / weight
            } else {
                0.0
            }
        }
    }
}

/// Reference O(N^2) evaluation of `<u>_i` for every agent.
pub fn neighbor_average_direct(state: &SwarmState, kernel: &KernelSpec, averaging: Averaging) -> Vec<f64> {
    let n = state.len();
    let l = kernel.length();
    (0..n)
        .map(|i| {
            let xi = state.x[i];
            let mut sum = 0.0;
            let mut weight = 0.0;
            for j in 0..n {
                let w = kernel.weight(torus_distance(state.x[j], xi, l));
                sum += state.u[j] * w;
                weight += w;
            }
            finish(sum, weight, n, averaging)
        })
        .collect()
}

/// `<u>_i` for every agent using the fastest applicable method.
pub fn neighbor_average(state: &SwarmState, params: &ModelParams) -> Vec<f64> {
    let mut out = vec![0.0; state.len()];
    NeighborSearch::default().average_into(state, &params.kernel, params.averaging, &mut out);
    out
}

impl NeighborSearch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whether the sorted sweep is used for this configuration.
    pub fn uses_fast_path(n: usize, kernel: &KernelSpec) -> bool {
        match kernel.shape() {
            KernelShape::TopHat { r } => n >= FAST_PATH_MIN_AGENTS && r <= kernel.length() / 4.0,
            KernelShape::Uniform => false,
        }
    }

    pub fn average_into(
        &mut self,
        state: &SwarmState,
        kernel: &KernelSpec,
        averaging: Averaging,
        out: &mut [f64],
    ) {
        let n = state.len();
        assert_eq!(out.len(), n, "output buffer length must equal agent count");
        match kernel.shape() {
            KernelShape::Uniform => {
                // phi == 1: both rules reduce to the global mean
                let avg = state.u.iter().sum::<f64>() / n as f64;
                out.iter_mut().for_each(|o| *o = avg);
            }
            KernelShape::TopHat { r } if Self::uses_fast_path(n, kernel) => {
                self.sweep(state, kernel, r, averaging, out)
            }
            KernelShape::TopHat { .. } => {
                out.copy_from_slice(&neighbor_average_direct(state, kernel, averaging))
            }
        }
    }

    fn sweep(&mut self, state: &SwarmState, kernel: &KernelSpec, r: f64, averaging: Averaging, out: &mut [f64]) {
        let n = state.len();
        let l = kernel.length();
        let amplitude = kernel.amplitude();
        let x = &state.x;

        if self.order.len() != n {
            self.order = (0..n).collect();
            self.order.sort_by(|&a, &b| key_cmp(x, a, b));
        } else if !insertion_sort(&mut self.order, x, 8 * n) {
            self.order.sort_by(|&a, &b| key_cmp(x, a, b));
        }
        self.sorted_x.clear();
        self.sorted_x.extend(self.order.iter().map(|&i| x[i]));
        self.prefix.clear();
        self.prefix.push(0.0);
        let mut acc = 0.0;
        for _ in 0..3 {
            for &i in &self.order {
                acc += state.u[i];
                self.prefix.push(acc);
            }
        }
        // directional offsets; below L/2 they agree bit for bit with torus_distance
        let sx = &self.sorted_x;
        let wrap = |d: f64| if d < 0.0 { d + l } else { d };
        let at = |e: usize| if e >= 2 * n { sx[e - 2 * n] } else if e >= n { sx[e - n] } else { sx[e] };
        let ahead = |k: usize, e: usize| wrap(at(e) - sx[k]) <= r;
        let behind = |k: usize, e: usize| wrap(sx[k] - at(e)) <= r;

        // unrolled indices: agent k of the ordering sits at n + k
        let mut lo = 0usize;
        let mut hi = n + 1;
        for k in 0..n {
            let centre = n + k;
            hi = hi.max(centre + 1);
            while hi < centre + n && ahead(k, hi) {
                hi += 1;
            }
            lo = lo.max(centre + 1 - n);
            while lo < centre && !behind(k, lo) {
                lo += 1;
            }
            let (a, b) = if hi - lo > n { (n, 2 * n) } else { (lo, hi) };
            let sum = self.prefix[b] - self.prefix[a];
            out[self.order[k]] = finish(amplitude * sum, amplitude * (b - a) as f64, n, averaging);
        }
    }
}
