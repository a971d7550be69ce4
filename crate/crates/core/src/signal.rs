//! Timescale extraction from sampled curves: prominence-filtered peaks, FFT
//! dominant frequency, carrier-peak envelope period, log-log regression and the
//! effective-coupling prefactor.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::LadderParams;

/// Prominence used to pick carrier peaks out of a concurrence/fidelity curve.
pub const CARRIER_PROMINENCE: f64 = 0.05;

/// Lower edge of the band searched for the carrier, in units of the coupling.
pub const CARRIER_BAND_MIN: f64 = 0.5;

/// Minimum relative amplitude for a subharmonic line to count as the fundamental.
pub const SUBHARMONIC_MIN_RATIO: f64 = 0.1;

/// Relative envelope range below which there is no slow modulation to time.
/// The modulation depth shrinks like `(J∥/h)²`, about 1e-4 at `h = 400`.
pub const ENVELOPE_FLAT_TOL: f64 = 1e-8;

/// Uniformly sampled real signal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid("times and values differ in length"));
        }
        if times.len() >= 2 {
            let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            if dt <= 0.0 {
                return Err(Error::invalid("times must be strictly increasing"));
            }
            let scale = times[0].abs().max(times[times.len() - 1].abs()).max(dt);
            if times
                .windows(2)
                .any(|w| w[1] <= w[0] || ((w[1] - w[0]) - dt).abs() > 1e-12 * scale)
            {
                return Err(Error::invalid("times must be uniformly spaced"));
            }
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }

    pub fn max(&self) -> Option<(f64, f64)> {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((i, v)),
            })?;
        Some((self.times[i], v))
    }

    pub fn min(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }

    /// `a·v + b` on the same grid.
    pub fn affine(&self, a: f64, b: f64) -> Self {
        TimeSeries {
            times: self.times.clone(),
            values: self.values.iter().map(|v| a * v + b).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub time: f64,
    pub value: f64,
    /// Sample index of the discrete maximum.
    pub index: usize,
    pub prominence: f64,
}

/// Vertex of the parabola through three equally spaced samples, as an offset in
/// `[-0.5, 0.5]` steps from the middle sample and the interpolated height.
fn parabolic_vertex(y0: f64, y1: f64, y2: f64) -> (f64, f64) {
    let denom = y0 - 2.0 * y1 + y2;
    if denom >= 0.0 {
        return (0.0, y1);
    }
    let delta = (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5);
    (delta, y1 - 0.25 * (y0 - y2) * delta)
}

/// Range-minimum queries in O(1) after O(n log n) setup.
struct SparseMin {
    levels: Vec<Vec<f64>>,
}

impl SparseMin {
    fn new(v: &[f64]) -> Self {
        let mut levels = vec![v.to_vec()];
        let mut width = 1;
        while 2 * width <= v.len() {
            let prev = levels.last().unwrap();
            let next = (0..=v.len() - 2 * width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        SparseMin { levels }
    }

    /// Minimum over `lo..=hi`.
    fn query(&self, lo: usize, hi: usize) -> f64 {
        let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        self.levels[k][lo].min(self.levels[k][hi + 1 - (1 << k)])
    }
}

/// Local maxima whose topographic prominence is at least `min_prominence`,
/// refined by a parabola through the three samples around each maximum.
///
/// A plateau counts as one maximum located at its middle sample.
pub fn find_peaks(series: &TimeSeries, min_prominence: f64) -> Result<Vec<Peak>> {
    let v = series.values();
    let n = v.len();
    if n < 3 {
        return Err(Error::InsufficientData("peak search needs at least 3 samples".into()));
    }

    // Nearest strictly higher sample on each side.
    let mut left_higher = vec![None; n];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..n {
        while stack.last().is_some_and(|&j| v[j] <= v[i]) {
            stack.pop();
        }
        left_higher[i] = stack.last().copied();
        stack.push(i);
    }
    let mut right_higher = vec![None; n];
    stack.clear();
    for i in (0..n).rev() {
        while stack.last().is_some_and(|&j| v[j] <= v[i]) {
            stack.pop();
        }
        right_higher[i] = stack.last().copied();
        stack.push(i);
    }
    let rmq = SparseMin::new(v);

    let dt = series.step();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if v[i - 1] < v[i] {
            let mut j = i;
            while j + 1 < n && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < n && v[j + 1] < v[i] {
                let mid = (i + j) / 2;
                let lo = left_higher[i].map_or(0, |l| l + 1);
                let hi = right_higher[j].map_or(n - 1, |r| r - 1);
                let base = rmq.query(lo, i).max(rmq.query(j, hi));
                let prominence = v[i] - base;
                if prominence >= min_prominence {
                    let (delta, value) = if i == j {
                        parabolic_vertex(v[i - 1], v[i], v[i + 1])
                    } else {
                        (0.0, v[i])
                    };
                    peaks.push(Peak {
                        time: series.times()[mid] + delta * dt,
                        value,
                        index: mid,
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(peaks)
}

/// Magnitude spectrum of the mean-subtracted, Hann-windowed series.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Angular frequency spacing of the bins.
    pub d_omega: f64,
    pub magnitude: Vec<f64>,
    /// Bins closer to zero than this are window leakage from the mean.
    pub first_bin: usize,
}

impl Spectrum {
    pub fn omega(&self, bin: f64) -> f64 {
        bin * self.d_omega
    }

    fn bin_of(&self, omega: f64) -> usize {
        (omega / self.d_omega).round() as usize
    }

    /// Largest bin within `[lo, hi]` angular frequency, refined on log magnitude.
    /// Returns `(omega, magnitude)`.
    pub fn peak_in(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let last = self.magnitude.len() - 1;
        let a = self.bin_of(lo).max(self.first_bin).max(1);
        let b = self.bin_of(hi).min(last - 1);
        if a > b {
            return None;
        }
        let k = (a..=b).fold(a, |best, k| {
            if self.magnitude[k] > self.magnitude[best] { k } else { best }
        });
        if self.magnitude[k] <= 0.0 {
            return None;
        }
        let ln = |i: usize| self.magnitude[i].max(f64::MIN_POSITIVE).ln();
        let (delta, _) = parabolic_vertex(ln(k - 1), ln(k), ln(k + 1));
        Some((self.omega(k as f64 + delta), self.magnitude[k]))
    }

    /// Whether bin `k` (nearest to `omega`, searched ±`tol` relative) holds a local maximum,
    /// returning the refined line.
    pub fn line_near(&self, omega: f64, tol: f64) -> Option<(f64, f64)> {
        let (omega_hit, mag) = self.peak_in(omega * (1.0 - tol), omega * (1.0 + tol))?;
        let k = self.bin_of(omega_hit);
        let is_local_max = k > 0
            && k + 1 < self.magnitude.len()
            && self.magnitude[k] >= self.magnitude[k - 1]
            && self.magnitude[k] >= self.magnitude[k + 1];
        is_local_max.then_some((omega_hit, mag))
    }
}

/// Zero padding factor applied before the FFT.
const PAD: usize = 8;

pub fn spectrum(series: &TimeSeries) -> Result<Spectrum> {
    let n = series.len();
    if n < 16 {
        return Err(Error::InsufficientData(format!(
            "spectrum needs at least 16 samples, got {n}"
        )));
    }
    let mean = series.values().iter().sum::<f64>() / n as f64;
    let len = (n * PAD).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = series
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos();
            Complex::new((v - mean) * w, 0.0)
        })
        .collect();
    buf.resize(len, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let magnitude = buf[..len / 2 + 1].iter().map(|c| c.norm()).collect();
    let dt = series.step();
    Ok(Spectrum {
        d_omega: 2.0 * PI / (len as f64 * dt),
        magnitude,
        // The Hann main lobe spans two bins of the unpadded record.
        first_bin: 2 * len / n + 1,
    })
}

/// Angular frequency of the strongest non-zero-frequency spectral line.
///
/// Fails with `InsufficientData` if that line completes fewer than 10 cycles in
/// the record.
pub fn dominant_frequency(series: &TimeSeries) -> Result<f64> {
    dominant_frequency_in(series, 0.0, f64::INFINITY)
}

/// As [`dominant_frequency`], restricted to angular frequencies in `[lo, hi]`.
pub fn dominant_frequency_in(series: &TimeSeries, lo: f64, hi: f64) -> Result<f64> {
    let sp = spectrum(series)?;
    let (omega, _) = sp
        .peak_in(lo, hi)
        .ok_or_else(|| Error::InsufficientData("no spectral line in band".into()))?;
    let span = series.times()[series.len() - 1] - series.times()[0];
    if omega * span / (2.0 * PI) < 10.0 {
        return Err(Error::InsufficientData(format!(
            "dominant line at ω = {omega:.4} spans fewer than 10 periods"
        )));
    }
    Ok(omega)
}

/// Carrier reading of a concurrence/fidelity curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarrierFrequency {
    /// Strongest line at or above the band floor.
    pub raw: f64,
    /// Lowest significant subharmonic of `raw` (equal to `raw` if none).
    pub fundamental: f64,
    /// Harmonic order of `raw` relative to `fundamental`.
    pub order: usize,
}

/// Fast carrier of a curve sampled on a ladder with coupling scale `j`.
///
/// Only lines at `ω ≥ CARRIER_BAND_MIN · j` are searched so the slow envelope
/// cannot win. A line at `raw / m` (m = 3, then 2) carrying at least
/// `SUBHARMONIC_MIN_RATIO` of the raw amplitude is taken as the fundamental.
pub fn carrier_frequency(series: &TimeSeries, j: f64) -> Result<CarrierFrequency> {
    let floor = CARRIER_BAND_MIN * j.abs();
    let sp = spectrum(series)?;
    let (raw, raw_mag) = sp
        .peak_in(floor, f64::INFINITY)
        .ok_or_else(|| Error::InsufficientData("no carrier line".into()))?;
    dominant_frequency_in(series, floor, f64::INFINITY)?;
    for m in [3usize, 2] {
        let target = raw / m as f64;
        if target < floor {
            continue;
        }
        if let Some((omega, mag)) = sp.line_near(target, 0.03) {
            if mag >= SUBHARMONIC_MIN_RATIO * raw_mag {
                return Ok(CarrierFrequency {
                    raw,
                    fundamental: omega,
                    order: m,
                });
            }
        }
    }
    Ok(CarrierFrequency {
        raw,
        fundamental: raw,
        order: 1,
    })
}

/// Carrier peaks and their smoothed envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    pub smooth_times: Vec<f64>,
    pub smooth_values: Vec<f64>,
}

/// Carrier peaks (prominence [`CARRIER_PROMINENCE`]) smoothed by a centred
/// moving average over an odd window of about 1/8 of the peak count.
pub fn envelope(series: &TimeSeries) -> Result<Envelope> {
    envelope_with(series, CARRIER_PROMINENCE)
}

pub fn envelope_with(series: &TimeSeries, prominence: f64) -> Result<Envelope> {
    let peaks = find_peaks(series, prominence)?;
    let peak_times: Vec<f64> = peaks.iter().map(|p| p.time).collect();
    let peak_values: Vec<f64> = peaks.iter().map(|p| p.value).collect();
    let n = peaks.len();
    let mut w = (n / 8).max(1);
    if w % 2 == 0 {
        w += 1;
    }
    let avg = |xs: &[f64]| -> Vec<f64> {
        if xs.len() < w {
            return Vec::new();
        }
        xs.windows(w).map(|s| s.iter().sum::<f64>() / w as f64).collect()
    };
    Ok(Envelope {
        smooth_times: avg(&peak_times),
        smooth_values: avg(&peak_values),
        peak_times,
        peak_values,
    })
}

/// `T_slow = 2 t*`, with `t*` the time of the envelope's interior maximum.
///
/// A maximum at either end of the record, or an envelope flat to
/// [`ENVELOPE_FLAT_TOL`] relative, is reported as `InsufficientData`.
pub fn envelope_period(series: &TimeSeries) -> Result<f64> {
    envelope_period_with(series, CARRIER_PROMINENCE)
}

pub fn envelope_period_with(series: &TimeSeries, prominence: f64) -> Result<f64> {
    Ok(2.0 * envelope_peak_time_with(series, prominence)?)
}

pub fn envelope_peak_time(series: &TimeSeries) -> Result<f64> {
    envelope_peak_time_with(series, CARRIER_PROMINENCE)
}

pub fn envelope_peak_time_with(series: &TimeSeries, prominence: f64) -> Result<f64> {
    let env = envelope_with(series, prominence)?;
    let v = &env.smooth_values;
    if v.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "only {} carrier peaks above prominence {prominence}",
            env.peak_values.len()
        )));
    }
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if hi - lo <= ENVELOPE_FLAT_TOL * hi.abs() {
        return Err(Error::InsufficientData("envelope is flat".into()));
    }
    let k = v
        .iter()
        .enumerate()
        .fold(0, |best, (i, &x)| if x > v[best] { i } else { best });
    if k == 0 || k == v.len() - 1 {
        return Err(Error::InsufficientData(
            "envelope maximum lies at the edge of the record".into(),
        ));
    }
    Ok(env.smooth_times[k])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("xs and ys differ in length"));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData("log-log fit needs at least 3 points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid("log-log fit needs finite positive data"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("log-log fit needs at least two distinct x values"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        alpha: None,
    })
}

/// Effective coupling implied by a slow period: in the two-rail model
/// `-J_eff (X1 X5 + X2 X6)` the initial state first returns after `π / J_eff`.
pub fn effective_coupling(t_slow: f64) -> Result<f64> {
    if !(t_slow > 0.0) || !t_slow.is_finite() {
        return Err(Error::invalid("slow period must be positive"));
    }
    Ok(PI / t_slow)
}

/// `α = J_eff h / J∥²` with `J_eff` from [`effective_coupling`].
pub fn extract_alpha(t_slow: f64, params: &LadderParams) -> Result<f64> {
    if params.h == 0.0 || !params.h.is_finite() {
        return Err(Error::invalid("α is undefined without a field"));
    }
    if params.j_parallel == 0.0 {
        return Err(Error::invalid("α is undefined without leg coupling"));
    }
    Ok(effective_coupling(t_slow)? * params.h.abs() / params.j_parallel.powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t_end: f64, n: usize, f: impl Fn(f64) -> f64) -> TimeSeries {
        let times: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
        let values = times.iter().map(|&t| f(t)).collect();
        TimeSeries::new(times, values).unwrap()
    }

    #[test]
    fn series_validation() {
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0, 3.0], vec![1.0; 3]).is_err());
        assert!(TimeSeries::new(vec![0.0, 0.0, 0.0], vec![1.0; 3]).is_err());
    }

    #[test]
    fn sine_has_one_peak() {
        let s = sample(2.0 * PI, 1000, f64::sin);
        let p = find_peaks(&s, 0.1).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0].time - PI / 2.0).abs() < s.step());
        assert!((p[0].value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_has_no_peaks() {
        let s = sample(1.0, 50, |_| 0.3);
        assert!(find_peaks(&s, 0.0).unwrap().is_empty());
        assert!(find_peaks(&sample(1.0, 2, |t| t), 0.0).is_err());
    }

    #[test]
    fn prominence_filters_ripples() {
        // Large bump with a small ripple on its flank.
        let s = sample(10.0, 2001, |t| (-(t - 5.0).powi(2)).exp() + 0.002 * (20.0 * t).sin());
        let strong = find_peaks(&s, 0.5).unwrap();
        assert_eq!(strong.len(), 1);
        assert!((strong[0].time - 5.0).abs() < 0.05);
        assert!(find_peaks(&s, 0.0).unwrap().len() > 10);
    }

    #[test]
    fn prominence_matches_brute_force() {
        let s = sample(30.0, 3001, |t| t.sin() * (0.3 * t).cos() + 0.2 * (2.7 * t).sin());
        let v = s.values();
        for p in find_peaks(&s, 0.0).unwrap() {
            let i = p.index;
            let mut l = i;
            let mut lmin = v[i];
            while l > 0 && v[l - 1] <= v[i] {
                l -= 1;
                lmin = lmin.min(v[l]);
            }
            let mut r = i;
            let mut rmin = v[i];
            while r + 1 < v.len() && v[r + 1] <= v[i] {
                r += 1;
                rmin = rmin.min(v[r]);
            }
            assert!((p.prominence - (v[i] - lmin.max(rmin))).abs() < 1e-15);
        }
    }

    #[test]
    fn known_tone() {
        let s = sample(40.0, 8000, |t| (3.0 * t).cos());
        let w = dominant_frequency(&s).unwrap();
        assert!((w - 3.0).abs() < 3e-3, "{w}");
    }

    #[test]
    fn frequency_is_affine_invariant() {
        let s = sample(60.0, 6000, |t| (2.2 * t).sin().powi(2) + 0.3 * (0.7 * t).cos());
        let w = dominant_frequency(&s).unwrap();
        let w2 = dominant_frequency(&s.affine(-3.5, 12.0)).unwrap();
        assert!((w - w2).abs() < 1e-9);
    }

    #[test]
    fn short_record_is_insufficient() {
        let s = sample(5.0, 500, |t| t.sin());
        assert!(matches!(dominant_frequency(&s), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn carrier_prefers_subharmonic_with_weight() {
        // Line at 2 with 30% weight under a dominant line at 4.
        let s = sample(400.0, 20001, |t| 0.3 * (2.0 * t).cos() + (4.0 * t).cos() + 0.8 * (0.03 * t).cos());
        let c = carrier_frequency(&s, 1.0).unwrap();
        assert!((c.raw - 4.0).abs() < 4e-3);
        assert!((c.fundamental - 2.0).abs() < 2e-3);
        assert_eq!(c.order, 2);
        let pure = sample(400.0, 20001, |t| (4.0 * t).cos());
        assert_eq!(carrier_frequency(&pure, 1.0).unwrap().order, 1);
    }

    #[test]
    fn beat_envelope_period() {
        let s = sample(400.0, 40001, |t| (0.01 * t).sin().powi(2) * (3.0 * t).sin().powi(2));
        let t = envelope_period(&s).unwrap();
        assert!((t - 100.0 * PI).abs() < 0.02 * 100.0 * PI, "{t}");
    }

    #[test]
    fn single_tone_has_no_envelope() {
        let s = sample(400.0, 40001, |t| (3.0 * t).sin().powi(2));
        assert!(matches!(envelope_period(&s), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn monotone_envelope_is_insufficient() {
        let s = sample(100.0, 20001, |t| (0.01 * t).sin().powi(2) * (3.0 * t).sin().powi(2));
        assert!(matches!(envelope_period(&s), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn loglog_known_laws() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let f = loglog_fit(&xs, &xs.map(|x| 5.0 * x)).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 5f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let f2 = loglog_fit(&xs, &xs.map(|x| x * x)).unwrap();
        assert!((f2.slope - 2.0).abs() < 1e-12);
        assert!(loglog_fit(&xs, &[1.0, -1.0, 2.0, 3.0]).is_err());
        assert!(loglog_fit(&xs[..2], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn alpha_mapping() {
        let p = LadderParams::reference(3);
        // J_eff = J²/h exactly gives α = 1.
        let t = PI / (1.0 / p.h);
        assert!((extract_alpha(t, &p).unwrap() - 1.0).abs() < 1e-12);
        assert!(extract_alpha(t, &p.clone().with_h(0.0)).is_err());
        assert!(extract_alpha(-1.0, &p).is_err());
    }
}
