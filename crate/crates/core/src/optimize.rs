//! One-dimensional maximization helpers.

use alloc::vec::Vec;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns the best `(x, f(x))` seen, including the bracket interior points;
/// for non-unimodal `f` this is still a genuine sample, just maybe not the global max.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, iterations: u32) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iterations {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Grid local maxima refined by [`angular_max`] and [`angular_zoom_max`].
pub(crate) const ANGULAR_CANDIDATES: usize = 3;

/// Best grid sample over `steps` angles in `[0, 2 pi)` and the largest grid local maxima.
fn angular_peaks(f: &mut impl FnMut(f64) -> f64, steps: u32) -> ((f64, f64), Vec<f64>) {
    let h = core::f64::consts::TAU / steps as f64;
    let values: Vec<f64> = (0..steps).map(|m| f(h * m as f64)).collect();
    let n = values.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&m| values[m] >= values[(m + n - 1) % n] && values[m] >= values[(m + 1) % n])
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let top = values.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (m, &v)| if v > acc.1 { (m, v) } else { acc });
    let thetas = peaks.iter().take(ANGULAR_CANDIDATES).map(|&m| h * m as f64).collect();
    ((h * top.0 as f64, top.1), thetas)
}

/// Grid maximum of `f` over `steps` equally spaced angles in `[0, 2 pi)` followed by
/// golden-section refinement in the two cells around each of the
/// [`ANGULAR_CANDIDATES`] largest grid local maxima.
pub(crate) fn angular_max(mut f: impl FnMut(f64) -> f64, steps: u32, iterations: u32) -> (f64, f64) {
    let h = core::f64::consts::TAU / steps as f64;
    let (mut best, candidates) = angular_peaks(&mut f, steps);
    if iterations > 0 {
        for theta in candidates {
            let refined = golden_max(&mut f, theta - h, theta + h, iterations);
            if refined.1 > best.1 {
                best = refined;
            }
        }
    }
    best
}

/// Samples per level of [`angular_zoom_max`].
pub(crate) const ZOOM_SAMPLES: u32 = 64;

/// Like [`angular_max`], but each candidate is refined by `levels` rounds of a
/// local grid of [`ZOOM_SAMPLES`] points re-centred on the best sample.
///
/// Slower than golden section; for envelopes of many close peaks where golden
/// section can settle on a lower one.
pub(crate) fn angular_zoom_max(mut f: impl FnMut(f64) -> f64, steps: u32, levels: u32) -> (f64, f64) {
    let h = core::f64::consts::TAU / steps as f64;
    let (mut best, candidates) = angular_peaks(&mut f, steps);
    for theta in candidates {
        let (mut center, mut half) = (theta, h);
        for _ in 0..levels {
            let step = 2.0 * half / ZOOM_SAMPLES as f64;
            for j in 0..=ZOOM_SAMPLES {
                let t = center - half + step * j as f64;
                let v = f(t);
                if v > best.1 {
                    best = (t, v);
                }
            }
            if best.1 >= f(center) {
                center = best.0;
            }
            half = 2.0 * step;
        }
    }
    best
}
