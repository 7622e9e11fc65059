use serde::{Deserialize, Serialize};

use super::error::invalid;
use super::StatsError;

/// Wrapped-Gaussian density estimate on the grid `x_j = j L / grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kde {
    pub length: f64,
    pub density: Vec<f64>,
}

impl Kde {
    pub fn dx(&self) -> f64 {
        self.length / self.density.len() as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.density.len()).map(|j| j as f64 * dx).collect()
    }

    /// Periodic trapezoid integral of the density.
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.dx()
    }
}

pub fn periodic_kde(positions: &[f64], length: f64, bandwidth: f64, grid: usize) -> Result<Kde, StatsError> {
    if positions.is_empty() {
        return Err(invalid("positions", "empty sample"));
    }
    if !(length > 0.0) {
        return Err(invalid("length", format!("must be positive, got {length}")));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(invalid("bandwidth", format!("must be positive, got {bandwidth}")));
    }
    if grid < 16 {
        return Err(invalid("grid", format!("need at least 16 points, got {grid}")));
    }
    let dx = length / grid as f64;
    let cutoff = 8.0 * bandwidth;
    let images = (cutoff / length).ceil() as i64;
    let inv = 1.0 / (2.0 * bandwidth * bandwidth);
    let mut density = vec![0.0; grid];
    for (j, slot) in density.iter_mut().enumerate() {
        let xj = j as f64 * dx;
        let mut acc = 0.0;
        for &x in positions {
            let mut d = (xj - x).rem_euclid(length);
            if d > 0.5 * length {
                d -= length;
            }
            for m in -images..=images {
                let dm = d + m as f64 * length;
                if dm.abs() <= cutoff {
                    acc += (-dm * dm * inv).exp();
                }
            }
        }
        *slot = acc;
    }
    let mass: f64 = density.iter().sum::<f64>() * dx;
    for v in &mut density {
        *v /= mass;
    }
    Ok(Kde { length, density })
}

/// Location and height of the density maximum, refined by a parabola through
/// the three grid values around the argmax.
pub fn kde_peak(kde: &Kde) -> (f64, f64) {
    let n = kde.density.len();
    let (j, &f0) = kde
        .density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let fm = kde.density[(j + n - 1) % n];
    let fp = kde.density[(j + 1) % n];
    let curv = fm - 2.0 * f0 + fp;
    let offset = if curv < 0.0 { 0.5 * (fm - fp) / curv } else { 0.0 };
    let x = ((j as f64 + offset) * kde.dx()).rem_euclid(kde.length);
    (x, f0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterOptions {
    pub bandwidth: f64,
    pub grid: usize,
    pub min_peak_ratio: f64,
    pub min_snapshots: usize,
    pub min_span: f64,
}

impl ClusterOptions {
    pub fn new(bandwidth: f64) -> Self {
        ClusterOptions {
            bandwidth,
            grid: 256,
            min_peak_ratio: 1.5,
            min_snapshots: 10,
            min_span: 5.0,
        }
    }
}

/// Velocity of the dominant density peak, from a least-squares line through
/// the unwrapped peak trajectory.
pub fn cluster_velocity(snapshots: &[(f64, Vec<f64>)], length: f64, bandwidth: f64) -> Result<f64, StatsError> {
    cluster_velocity_with(snapshots, length, &ClusterOptions::new(bandwidth))
}

pub fn cluster_velocity_with(
    snapshots: &[(f64, Vec<f64>)],
    length: f64,
    opts: &ClusterOptions,
) -> Result<f64, StatsError> {
    let span = match (snapshots.first(), snapshots.last()) {
        (Some(a), Some(b)) => b.0 - a.0,
        _ => 0.0,
    };
    if snapshots.len() < opts.min_snapshots || span < opts.min_span {
        return Err(StatsError::TooFewSnapshots {
            needed: opts.min_snapshots,
            span: opts.min_span,
            got: snapshots.len(),
            got_span: span,
        });
    }
    let mut times = Vec::with_capacity(snapshots.len());
    let mut peaks = Vec::with_capacity(snapshots.len());
    let mut weak = 0;
    let mut prev: Option<f64> = None;
    for (t, x) in snapshots {
        let kde = periodic_kde(x, length, opts.bandwidth, opts.grid)?;
        let (p, height) = kde_peak(&kde);
        if height * length < opts.min_peak_ratio {
            weak += 1;
        }
        let unwrapped = match prev {
            None => p,
            Some(q) => {
                let mut step = (p - q).rem_euclid(length);
                if step >= 0.5 * length {
                    step -= length;
                }
                q + step
            }
        };
        prev = Some(unwrapped);
        times.push(*t);
        peaks.push(unwrapped);
    }
    if 2 * weak > snapshots.len() {
        return Err(StatsError::NoCoherentCluster {
            threshold: opts.min_peak_ratio,
            weak,
            total: snapshots.len(),
        });
    }
    Ok(slope(&times, &peaks))
}

pub(crate) fn slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&ti, &yi) in t.iter().zip(y) {
        num += (ti - tm) * (yi - ym);
        den += (ti - tm) * (ti - tm);
    }
    num / den
}
