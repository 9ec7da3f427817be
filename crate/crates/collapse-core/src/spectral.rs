//! Welch spectral estimation for uniformly sampled records, and statistical
//! comparison of an estimated spectrum against an analytic one.
//!
//! Convention: double-sided density. White noise of variance sigma^2 per
//! sample estimates a flat level sigma^2 dt, so a white force of
//! delta-correlator strength D appears directly as the level D.

use crate::error::{Error, Result};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rectangular,
    /// Periodic Hann, w_n = 0.5 (1 - cos(2 pi n / L)).
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchConfig {
    /// Samples per segment; a power of two.
    pub segment_length: usize,
    /// Fractional segment overlap, 0 to 0.9.
    pub overlap: f64,
    pub window: Window,
}

impl WelchConfig {
    pub fn hop(&self) -> usize {
        let l = self.segment_length as f64;
        ((l * (1.0 - self.overlap)).round() as usize).max(1)
    }

    /// Number of segments a record of n samples yields.
    pub fn segments_for(&self, n: usize) -> usize {
        if n < self.segment_length {
            0
        } else {
            1 + (n - self.segment_length) / self.hop()
        }
    }

    pub fn validate(&self, n: usize) -> Result<usize> {
        if !self.segment_length.is_power_of_two() || self.segment_length < 2 {
            return Err(Error::InvalidInput(format!(
                "segment_length = {} must be a power of two (at least 2)",
                self.segment_length
            )));
        }
        if !(0.0..=0.9).contains(&self.overlap) {
            return Err(Error::InvalidInput(format!(
                "overlap = {} outside [0, 0.9]",
                self.overlap
            )));
        }
        let segments = self.segments_for(n);
        if segments == 0 {
            return Err(Error::RecordTooShort {
                len: n,
                min: self.segment_length,
            });
        }
        Ok(segments)
    }
}

/// One-grid spectral estimate with its averaging statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    /// Angular frequencies 2 pi j / (L dt), j = 0..=L/2 (rad/s).
    pub omega: Vec<f64>,
    /// Double-sided density per bin.
    pub values: Vec<f64>,
    pub segments: usize,
    /// 1/sqrt(segments); per-bin fractional scatter of the averaged estimate.
    pub relative_standard_error: f64,
}

/// Welch average of windowed, mean-removed periodograms:
/// S_j = dt / (W n_seg) sum_seg |DFT(w (x - mean))_j|^2 with W = sum w_n^2.
pub fn welch_psd(samples: &[f64], dt: f64, config: &WelchConfig) -> Result<PsdEstimate> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositive {
            name: "dt",
            value: dt,
        });
    }
    let segments = config.validate(samples.len())?;
    let l = config.segment_length;
    let hop = config.hop();

    let window: Vec<f64> = match config.window {
        Window::Rectangular => vec![1.0; l],
        Window::Hann => (0..l)
            .map(|n| 0.5 * (1.0 - (2.0 * PI * n as f64 / l as f64).cos()))
            .collect(),
    };
    let w_power: f64 = window.iter().map(|w| w * w).sum();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(l);
    let mut buf = vec![Complex::new(0.0, 0.0); l];
    let mut acc = vec![0.0f64; l / 2 + 1];

    for s in 0..segments {
        let seg = &samples[s * hop..s * hop + l];
        let mean = seg.iter().sum::<f64>() / l as f64;
        for (slot, (&x, &w)) in buf.iter_mut().zip(seg.iter().zip(&window)) {
            *slot = Complex::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }

    let norm = dt / (w_power * segments as f64);
    let d_omega = 2.0 * PI / (l as f64 * dt);
    Ok(PsdEstimate {
        omega: (0..=l / 2).map(|j| j as f64 * d_omega).collect(),
        values: acc.into_iter().map(|a| a * norm).collect(),
        segments,
        relative_standard_error: 1.0 / (segments as f64).sqrt(),
    })
}

/// Bin-by-bin deviation report of an estimate against an analytic spectrum
/// restricted to a frequency band (rad/s, inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Frequencies of the compared bins.
    pub omega: Vec<f64>,
    /// (estimate - analytic) / (analytic * rse) per compared bin.
    pub z_scores: Vec<f64>,
    /// Indices into `omega`/`z_scores` where |z| > 4.
    pub flagged: Vec<usize>,
    /// mean(estimate) / mean(analytic) over the band.
    pub band_ratio: f64,
    pub band: (f64, f64),
}

impl ComparisonReport {
    pub fn band_ratio_ok(&self) -> bool {
        (0.95..=1.05).contains(&self.band_ratio)
    }
}

const Z_FLAG_THRESHOLD: f64 = 4.0;

/// Compare an estimate to analytic values sampled on the same grid. Grids
/// must agree bin-for-bin within the band to one part in 1e9.
pub fn compare_to_analytic(
    estimate: &PsdEstimate,
    analytic_omega: &[f64],
    analytic_values: &[f64],
    band: (f64, f64),
) -> Result<ComparisonReport> {
    if !(band.0 >= 0.0 && band.1 > band.0 && band.1.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "band ({:e}, {:e}) is not an ordered frequency interval",
            band.0, band.1
        )));
    }
    if analytic_omega.len() != analytic_values.len() {
        return Err(Error::InvalidInput(
            "analytic grid and values differ in length".into(),
        ));
    }
    let rse = estimate.relative_standard_error;

    let mut omega = Vec::new();
    let mut z_scores = Vec::new();
    let mut sum_est = 0.0;
    let mut sum_ana = 0.0;
    let mut cursor = 0usize;
    for (&w, &est) in estimate.omega.iter().zip(&estimate.values) {
        if w < band.0 || w > band.1 {
            continue;
        }
        // analytic grids are sorted; advance to the matching bin
        while cursor < analytic_omega.len()
            && analytic_omega[cursor] < w - 1e-9 * w.max(1.0)
        {
            cursor += 1;
        }
        let matched = cursor < analytic_omega.len()
            && (analytic_omega[cursor] - w).abs() <= 1e-9 * w.max(1.0);
        if !matched {
            return Err(Error::InvalidInput(format!(
                "analytic spectrum is not sampled at estimate bin omega = {:e} rad/s",
                w
            )));
        }
        let ana = analytic_values[cursor];
        if ana <= 0.0 || ana.is_nan() {
            return Err(Error::InvalidInput(format!(
                "analytic density must be positive at omega = {:e} rad/s",
                w
            )));
        }
        omega.push(w);
        z_scores.push((est - ana) / (ana * rse));
        sum_est += est;
        sum_ana += ana;
    }
    if omega.is_empty() {
        return Err(Error::InvalidInput(format!(
            "band ({:e}, {:e}) rad/s contains no estimate bins",
            band.0, band.1
        )));
    }
    let flagged = z_scores
        .iter()
        .enumerate()
        .filter(|(_, z)| z.abs() > Z_FLAG_THRESHOLD)
        .map(|(i, _)| i)
        .collect();
    Ok(ComparisonReport {
        omega,
        z_scores,
        flagged,
        band_ratio: sum_est / sum_ana,
        band,
    })
}
