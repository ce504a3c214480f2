//! Post-processing of simulated trajectories: peaks, interspike intervals,
//! transient detection and periodicity.

mod bifurcation;

pub use bifurcation::{
    bifurcation_scan, distinct_values, scan_cells, BifurcationCell, BifurcationParameter,
    BifurcationScan, BifurcationSetup, StepRule,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fde::Trajectory;
use crate::scalar::{from_usize, lit, Real};

/// Local maxima of one component.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpikeTrain<T> {
    pub indices: Vec<usize>,
    /// Peak times after parabolic refinement.
    pub times: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> SpikeTrain<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn intervals(&self) -> Vec<T> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Keep only peaks at or after `t_min`.
    pub fn after(&self, t_min: T) -> Self {
        let start = self.times.partition_point(|&t| t < t_min);
        Self {
            indices: self.indices[start..].to_vec(),
            times: self.times[start..].to_vec(),
            values: self.values[start..].to_vec(),
        }
    }

    pub fn isi_cv(&self) -> Option<T> {
        let isi = self.intervals();
        coefficient_of_variation(&isi)
    }
}

pub(crate) fn mean<T: Real>(x: &[T]) -> T {
    x.iter().copied().sum::<T>() / from_usize(x.len())
}

pub(crate) fn coefficient_of_variation<T: Real>(x: &[T]) -> Option<T> {
    if x.len() < 2 {
        return None;
    }
    let m = mean(x);
    let var = x.iter().map(|&v| (v - m) * (v - m)).sum::<T>() / from_usize(x.len() - 1);
    Some(var.sqrt() / m)
}

/// Peaks of a sampled signal: `y[i-1] < y[i] >= y[i+1]` and `y[i] >= threshold`.
pub fn find_peaks<T: Real>(times: &[T], y: &[T], threshold: T) -> SpikeTrain<T> {
    assert_eq!(times.len(), y.len());
    let mut out = SpikeTrain { indices: Vec::new(), times: Vec::new(), values: Vec::new() };
    let half = lit::<T>(0.5);
    for i in 1..y.len().saturating_sub(1) {
        let (l, c, r) = (y[i - 1], y[i], y[i + 1]);
        if !(l < c && c >= r && c >= threshold) {
            continue;
        }
        let curvature = l - c - c + r;
        let (mut t, mut v) = (times[i], c);
        if curvature < T::zero() {
            // vertex of the parabola through the three samples
            let offset = half * (l - r) / curvature;
            let dt = half * (times[i + 1] - times[i - 1]);
            t = times[i] + offset * dt;
            v = c - lit::<T>(0.25) * (l - r) * offset;
        }
        out.indices.push(i);
        out.times.push(t);
        out.values.push(v);
    }
    out
}

pub fn detect_peaks<T: Real>(trajectory: &Trajectory<T>, component: usize, threshold: T) -> SpikeTrain<T> {
    find_peaks(trajectory.times(), &trajectory.component(component), threshold)
}

/// Mean of the component over `t >= t_min` plus 10 mV.
pub fn default_threshold<T: Real>(trajectory: &Trajectory<T>, component: usize, t_min: T) -> T {
    let start = trajectory.index_at_or_after(t_min).min(trajectory.len().saturating_sub(1));
    let y = trajectory.component(component);
    mean(&y[start..]) + lit(10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientEstimate<T> {
    pub t_transient: T,
    pub converged: bool,
    pub method: &'static str,
}

fn window_stats<T: Real>(y: &[T]) -> (T, T) {
    let (lo, hi) = y.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (mean(y), hi - lo)
}

/// First time after which consecutive windows of length `window` all share
/// the mean and peak-to-peak amplitude of the final window within
/// `tolerance`.
pub fn estimate_transient<T: Real>(
    trajectory: &Trajectory<T>,
    component: usize,
    window: T,
    tolerance: T,
) -> Result<TransientEstimate<T>> {
    let t_end = trajectory.t_end();
    if !(window > T::zero()) || t_end < window + window {
        return Err(Error::InvalidArgument(format!(
            "transient estimate needs t_end >= 2*window, got t_end={t_end}, window={window}"
        )));
    }
    let y = trajectory.component(component);
    let count = (t_end / window).floor().to_usize().unwrap_or(0);
    let stats: Vec<(T, T)> = (0..count)
        .map(|k| {
            let a = trajectory.index_at_or_after(from_usize::<T>(k) * window);
            let b = trajectory.index_at_or_after(from_usize::<T>(k + 1) * window).max(a + 1).min(y.len());
            window_stats(&y[a..b])
        })
        .collect();
    let reference = stats[count - 1];
    let agrees = |s: &(T, T)| (s.0 - reference.0).abs() <= tolerance && (s.1 - reference.1).abs() <= tolerance;
    let mut first = count - 1;
    while first > 0 && agrees(&stats[first - 1]) {
        first -= 1;
    }
    if first + 1 >= count {
        return Ok(TransientEstimate { t_transient: t_end * lit(0.5), converged: false, method: "windowed-mean-amplitude" });
    }
    Ok(TransientEstimate {
        t_transient: from_usize::<T>(first) * window,
        converged: true,
        method: "windowed-mean-amplitude",
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Periodicity<T> {
    Periodic { period: T, cv: T },
    Aperiodic { cv: T },
}

impl<T> Periodicity<T> {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Periodicity::Periodic { .. })
    }
}

/// Periodic when the interspike-interval coefficient of variation is below
/// `rel_tol`.
pub fn periodicity_test<T: Real>(spikes: &SpikeTrain<T>, rel_tol: T) -> Result<Periodicity<T>> {
    let isi = spikes.intervals();
    if isi.len() < 5 {
        return Err(Error::InsufficientSpikes { needed: 6, got: spikes.len() });
    }
    let cv = coefficient_of_variation(&isi).unwrap_or(T::zero());
    Ok(if cv < rel_tol { Periodicity::Periodic { period: mean(&isi), cv } } else { Periodicity::Aperiodic { cv } })
}

/// Time from each spike's downward half-height crossing to the next spike's
/// upward crossing. Half height is midway between the peak and the minimum
/// before the next spike.
pub fn refractory_periods<T: Real>(trajectory: &Trajectory<T>, component: usize, spikes: &SpikeTrain<T>) -> Vec<T> {
    let y = trajectory.component(component);
    let t = trajectory.times();
    let crossing = |i: usize, level: T| {
        let (a, b) = (y[i], y[i + 1]);
        t[i] + (level - a) / (b - a) * (t[i + 1] - t[i])
    };
    let mut out = Vec::new();
    for w in spikes.indices.windows(2) {
        let (p, q) = (w[0], w[1]);
        let trough = y[p..=q].iter().copied().fold(T::infinity(), T::min);
        let level = lit::<T>(0.5) * (y[p] + trough);
        let down = (p..q).find(|&i| y[i] >= level && y[i + 1] < level);
        let up = (p..q).rev().find(|&i| y[i] < level && y[i + 1] >= level);
        if let (Some(d), Some(u)) = (down, up) {
            if u >= d {
                out.push(crossing(u, level) - crossing(d, level));
            }
        }
    }
    out
}

/// Post-`t_min` samples projected onto the `(V_s, V_d)` plane.
pub fn attractor_section<T: Real>(trajectory: &Trajectory<T>, t_min: T) -> Vec<(T, T)> {
    use crate::model::idx;
    let start = trajectory.index_at_or_after(t_min);
    (start..trajectory.len())
        .map(|k| {
            let y = trajectory.state(k);
            (y[idx::VS], y[idx::VD])
        })
        .collect()
}
