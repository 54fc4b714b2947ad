//! Parallel (θ, J) phase-diagram scans and the fitting/peak utilities used to
//! classify the dynamical regimes.
//!
//! Each grid cell is an isolated trajectory evolved from the same initial
//! state; workers pull cells off a shared counter and write results keyed by
//! cell index, so the outcome is identical for any worker count. The number
//! of in-flight state vectors is additionally bounded by the memory cap.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::config::WalkConfig;
use crate::error::{Error, Result};
use crate::hilbert::build_initial_state;
use crate::observables::{
    ks_distance, mean_spin, particle_density, partition_entropy, PartitionLabel,
};

/// A rectangular grid over (θ, J) sharing one run template.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub theta_values: Vec<f64>,
    pub j_values: Vec<f64>,
    /// Per-point config; its own `theta`/`J` entries are replaced cell by
    /// cell, everything else is shared.
    pub template: WalkConfig,
}

impl SweepGrid {
    /// Evenly spaced `resolution`×`resolution` grid over (0, π)².
    pub fn over_unit_box(resolution: usize, template: WalkConfig) -> Self {
        let vals = |n: usize| -> Vec<f64> {
            (1..=n)
                .map(|i| std::f64::consts::PI * i as f64 / (n + 1) as f64)
                .collect()
        };
        SweepGrid {
            theta_values: vals(resolution),
            j_values: vals(resolution),
            template,
        }
    }
}

/// Long-run scalars of one grid cell, averaged over the template's window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMetrics {
    pub theta: f64,
    pub j: f64,
    /// KS distance of the window-averaged density to uniform.
    pub d_ks: f64,
    pub s_x: f64,
    pub s_c: f64,
    pub s_s: f64,
    pub mean_spin_norm: f64,
}

/// Grid results in row-major order: cell (it, ij) at `it * j_values.len() + ij`.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub theta_values: Vec<f64>,
    pub j_values: Vec<f64>,
    pub cells: Vec<std::result::Result<CellMetrics, String>>,
}

impl SweepResult {
    pub fn cell(&self, it: usize, ij: usize) -> &std::result::Result<CellMetrics, String> {
        &self.cells[it * self.j_values.len() + ij]
    }
}

fn run_cell(template: &WalkConfig, theta: f64, j: f64, memory_cap: usize) -> Result<CellMetrics> {
    let mut cfg = template.clone();
    cfg.theta = Some(theta);
    cfg.theta_minus = None;
    cfg.theta_plus = None;
    cfg.j = j;
    let resolved = cfg.resolve()?;
    let basis = resolved.basis(memory_cap)?;
    let op = resolved.step_operator();
    let mut state = build_initial_state(&resolved.initial, basis)?;

    let (w0, w1) = resolved.average_window;
    let stride = resolved.sample_stride;
    let num_nodes = resolved.lattice.num_nodes();
    let mut p_acc = vec![0.0; num_nodes];
    let mut p_count = 0usize;
    let mut sums = [0.0f64; 4];
    let mut samples = 0usize;
    for t in 1..=resolved.steps {
        op.step(&mut state);
        if (w0..w1).contains(&t) {
            for (acc, p) in p_acc.iter_mut().zip(particle_density(&state)) {
                *acc += p;
            }
            p_count += 1;
            if t % stride == 0 {
                sums[0] += partition_entropy(&state, PartitionLabel::Positions);
                sums[1] += partition_entropy(&state, PartitionLabel::Colors);
                sums[2] += partition_entropy(&state, PartitionLabel::Spins);
                sums[3] += mean_spin(&state).norm();
                samples += 1;
            }
        }
    }
    if p_count == 0 || samples == 0 {
        return Err(Error::InvalidArgument(
            "averaging window contains no samples".into(),
        ));
    }
    for acc in &mut p_acc {
        *acc /= p_count as f64;
    }
    let n = samples as f64;
    Ok(CellMetrics {
        theta,
        j,
        d_ks: ks_distance(&p_acc)?,
        s_x: sums[0] / n,
        s_c: sums[1] / n,
        s_s: sums[2] / n,
        mean_spin_norm: sums[3] / n,
    })
}

/// Evolve every grid cell, `parallelism` at a time (additionally bounded by
/// the memory cap ÷ per-state footprint). Per-cell failures land in the
/// result; the sweep itself never aborts.
pub fn run_sweep(grid: &SweepGrid, parallelism: usize, memory_cap: usize) -> Result<SweepResult> {
    if grid.theta_values.is_empty() || grid.j_values.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep grid must not be empty".into(),
        ));
    }
    let num_cells = grid.theta_values.len() * grid.j_values.len();

    // bound in-flight states by what fits in the cap (state + shift scratch)
    let resolved = {
        let mut cfg = grid.template.clone();
        cfg.theta = Some(grid.theta_values[0]);
        cfg.theta_minus = None;
        cfg.theta_plus = None;
        cfg.j = grid.j_values[0];
        cfg.resolve()?
    };
    let per_state =
        resolved.basis(memory_cap)?.dim() * 2 * std::mem::size_of::<num_complex::Complex64>();
    let by_memory = (memory_cap / per_state).max(1);
    let workers = parallelism.clamp(1, by_memory).min(num_cells);

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<std::result::Result<CellMetrics, String>>>> =
        Mutex::new(vec![None; num_cells]);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let cell = next.fetch_add(1, Ordering::Relaxed);
                if cell >= num_cells {
                    break;
                }
                let theta = grid.theta_values[cell / grid.j_values.len()];
                let j = grid.j_values[cell % grid.j_values.len()];
                let outcome =
                    run_cell(&grid.template, theta, j, memory_cap).map_err(|e| e.to_string());
                results.lock().expect("no panics hold this lock")[cell] = Some(outcome);
            });
        }
    });

    let cells = results
        .into_inner()
        .expect("all workers joined")
        .into_iter()
        .map(|slot| slot.expect("every cell visited"))
        .collect();
    Ok(SweepResult {
        theta_values: grid.theta_values.clone(),
        j_values: grid.j_values.clone(),
        cells,
    })
}

/// Least-squares slope of `values` against `times` over the index window
/// [window.0, window.1) in time units.
pub fn fit_linear_slope(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t < window.1)
        .map(|(t, v)| (*t, *v))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "slope window [{}, {}) holds {} points, need ≥ 2",
            window.0,
            window.1,
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|(t, _)| t).sum::<f64>() / n;
    let mean_v = pts.iter().map(|(_, v)| v).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in &pts {
        num += (t - mean_t) * (v - mean_v);
        den += (t - mean_t) * (t - mean_t);
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument(
            "degenerate slope window (single time)".into(),
        ));
    }
    Ok(num / den)
}

/// Result of a stretched-exponential fit S(t)/S_sat ≈ 1 − e^{−ν t^α}.
#[derive(Debug, Clone, Copy)]
pub struct StretchedExpFit {
    pub nu: f64,
    pub alpha: f64,
    /// Root-mean-square residual of the normalized series.
    pub residual: f64,
}

/// Fit 1 − e^{−ν t^α} to a series already normalized to its saturation value.
/// Log-log linearization seeds a Gauss–Newton refinement.
pub fn fit_stretched_exponential(times: &[f64], normalized: &[f64]) -> Result<StretchedExpFit> {
    if times.len() != normalized.len() || times.len() < 4 {
        return Err(Error::InvalidArgument("need ≥ 4 points to fit".into()));
    }
    // seed: ln(−ln(1−y)) = ln ν + α ln t on the informative middle of the curve
    let mut lt = Vec::new();
    let mut lg = Vec::new();
    for (&t, &y) in times.iter().zip(normalized) {
        if t > 0.0 && y > 0.01 && y < 0.99 {
            lt.push(t.ln());
            lg.push((-(1.0 - y).ln()).ln());
        }
    }
    if lt.len() < 2 {
        return Err(Error::FitDiverged(
            "no points in the rising part of the curve".into(),
        ));
    }
    let n = lt.len() as f64;
    let mt = lt.iter().sum::<f64>() / n;
    let mg = lg.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in lt.iter().zip(&lg) {
        num += (a - mt) * (b - mg);
        den += (a - mt) * (a - mt);
    }
    let mut alpha = num / den;
    let mut nu = (mg - alpha * mt).exp();

    // Gauss-Newton on the full series
    let residual_of = |nu: f64, alpha: f64| -> f64 {
        let mut acc = 0.0;
        for (&t, &y) in times.iter().zip(normalized) {
            let f = 1.0 - (-nu * t.powf(alpha)).exp();
            acc += (y - f) * (y - f);
        }
        (acc / times.len() as f64).sqrt()
    };
    for _ in 0..200 {
        let mut jtj = [[0.0f64; 2]; 2];
        let mut jtr = [0.0f64; 2];
        for (&t, &y) in times.iter().zip(normalized) {
            if t <= 0.0 {
                continue;
            }
            let ta = t.powf(alpha);
            let e = (-nu * ta).exp();
            let f = 1.0 - e;
            let r = y - f;
            let d_nu = e * ta;
            let d_alpha = e * nu * ta * t.ln();
            jtj[0][0] += d_nu * d_nu;
            jtj[0][1] += d_nu * d_alpha;
            jtj[1][1] += d_alpha * d_alpha;
            jtr[0] += d_nu * r;
            jtr[1] += d_alpha * r;
        }
        jtj[1][0] = jtj[0][1];
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let d_nu = (jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
        let d_alpha = (jtj[0][0] * jtr[1] - jtj[1][0] * jtr[0]) / det;
        nu += d_nu;
        alpha += d_alpha;
        if !nu.is_finite() || !alpha.is_finite() || nu <= 0.0 {
            return Err(Error::FitDiverged(format!(
                "parameters left the domain (ν={nu}, α={alpha})"
            )));
        }
        if d_nu.abs() < 1e-12 && d_alpha.abs() < 1e-12 {
            break;
        }
    }
    let residual = residual_of(nu, alpha);
    if !residual.is_finite() {
        return Err(Error::FitDiverged(format!(
            "non-finite residual (ν={nu}, α={alpha})"
        )));
    }
    Ok(StretchedExpFit {
        nu,
        alpha,
        residual,
    })
}

/// A local maximum of the smoothed series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    /// Raw (unsmoothed) series value at the peak index.
    pub height: f64,
}

/// Local maxima of `series` after a centered moving average of width
/// `smooth_window` (the raw series carries fine-grained fluctuation).
pub fn find_peaks(series: &[f64], smooth_window: usize, min_height: f64) -> Vec<Peak> {
    let n = series.len();
    if n < 3 {
        return Vec::new();
    }
    let half = smooth_window / 2;
    let smoothed: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            series[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if smoothed[i] > smoothed[i - 1]
            && smoothed[i] >= smoothed[i + 1]
            && series[i] >= min_height
        {
            peaks.push(Peak {
                index: i,
                height: series[i],
            });
        }
    }
    peaks
}

/// Dominant oscillation period of a mean-removed multi-component signal by
/// scanning the periodogram over [p_min, p_max] in steps of `dp`.
pub fn dominant_period(components: &[Vec<f64>], p_min: f64, p_max: f64, dp: f64) -> Result<f64> {
    let n = components.first().map(|c| c.len()).unwrap_or(0);
    if n < 8 {
        return Err(Error::InvalidArgument(
            "series too short for a period estimate".into(),
        ));
    }
    let centered: Vec<Vec<f64>> = components
        .iter()
        .map(|c| {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            c.iter().map(|v| v - mean).collect()
        })
        .collect();
    let mut best = (0.0f64, -1.0f64);
    let mut period = p_min;
    while period <= p_max {
        let omega = 2.0 * std::f64::consts::PI / period;
        let mut power = 0.0;
        for comp in &centered {
            let mut re = 0.0;
            let mut im = 0.0;
            for (t, v) in comp.iter().enumerate() {
                let (s, c) = (omega * t as f64).sin_cos();
                re += v * c;
                im += v * s;
            }
            power += re * re + im * im;
        }
        if power > best.1 {
            best = (period, power);
        }
        period += dp;
    }
    Ok(best.0)
}
