//! Windowed-sinc fractional delay of a finite block.
//!
//! The shifted signal is evaluated at positions n - delta with a kernel of
//! 2*L_h + 1 taps centered on the nearest sample. Taps are tapered by an
//! integer-indexed window and scaled so they sum to one, which pins the
//! kernel's DC gain at unity for every fractional phase; at delta = 0 the
//! taps collapse to the identity and the input is reproduced bit-for-bit.
//! Source samples outside the block contribute zero.

use num_complex::Complex64;

use crate::window::WindowKind;

/// sinc(x) = sin(pi*x)/(pi*x), exactly 1 at 0 and exactly 0 at other integers.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x == x.trunc() {
        0.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Normalized kernel taps for one fractional phase.
///
/// `taps[j + half_width]` weights source sample `center + j`, where `center`
/// is `m` for delta < 0.5 and `m - 1` otherwise (output position m - delta).
#[derive(Debug, Clone)]
pub(crate) struct ShiftKernel {
    pub taps: Vec<f64>,
    pub center_shift: i64,
    pub half_width: i64,
}

impl ShiftKernel {
    pub fn new(delta: f64, half_width: usize, window: WindowKind) -> Self {
        debug_assert!((0.0..1.0).contains(&delta), "delta must lie in [0, 1)");
        let l = half_width as i64;
        let center_shift = if delta < 0.5 { 0 } else { -1 };
        // Offset of the evaluation point from the tap center.
        let u = -delta - center_shift as f64;
        let mut taps: Vec<f64> = (-l..=l)
            .map(|j| window.tap(j, half_width) * sinc(u - j as f64))
            .collect();
        let gain: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= gain;
        }
        Self {
            taps,
            center_shift,
            half_width: l,
        }
    }

    /// Evaluate the shifted signal at integer output position `m`.
    fn eval(&self, samples: &[Complex64], m: i64) -> Complex64 {
        let center = m + self.center_shift;
        let n = samples.len() as i64;
        let mut acc = Complex64::default();
        for (idx, &t) in self.taps.iter().enumerate() {
            let k = center + idx as i64 - self.half_width;
            if k >= 0 && k < n {
                acc += samples[k as usize] * t;
            }
        }
        acc
    }
}

/// The block evaluated at fractional positions n - delta for n = 0..N-1.
pub fn fractional_shift(
    samples: &[Complex64],
    delta: f64,
    half_width: usize,
    window: WindowKind,
) -> Vec<Complex64> {
    if delta == 0.0 {
        return samples.to_vec();
    }
    let kernel = ShiftKernel::new(delta, half_width, window);
    (0..samples.len() as i64)
        .map(|m| kernel.eval(samples, m))
        .collect()
}

/// A fractionally shifted block evaluated on an index range widened by
/// `margin` on both sides, so correlation lags near the block edges see the
/// full kernel response instead of a truncated one.
#[derive(Debug, Clone)]
pub(crate) struct ExtendedShift {
    margin: i64,
    values: Vec<Complex64>,
}

impl ExtendedShift {
    pub fn new(
        samples: &[Complex64],
        delta: f64,
        half_width: usize,
        window: WindowKind,
        margin: usize,
    ) -> Self {
        let kernel = ShiftKernel::new(delta, half_width, window);
        let margin = margin as i64;
        let n = samples.len() as i64;
        let values = (-margin..n + margin)
            .map(|m| kernel.eval(samples, m))
            .collect();
        Self { margin, values }
    }

    /// Shifted value at integer position `m`; zero outside the stored range.
    #[inline]
    pub fn at(&self, m: i64) -> Complex64 {
        let idx = m + self.margin;
        if idx >= 0 && (idx as usize) < self.values.len() {
            self.values[idx as usize]
        } else {
            Complex64::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    // Test-local kernel arithmetic, kept independent of the implementation.
    fn oracle_sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            (PI * x).sin() / (PI * x)
        }
    }

    fn oracle_hann(m: i64, l: i64) -> f64 {
        if m.abs() > l {
            0.0
        } else {
            0.5 * (1.0 + (PI * m as f64 / l as f64).cos())
        }
    }

    #[test]
    fn zero_delta_is_the_identity() {
        let samples: Vec<Complex64> = (0..32)
            .map(|i| Complex64::new((i as f64 * 0.3).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let out = fractional_shift(&samples, 0.0, 4, WindowKind::Hann);
        assert_eq!(out, samples);
        // The kernel path itself must also be exact at delta = 0.
        let kernel = ShiftKernel::new(0.0, 4, WindowKind::Hann);
        for (m, s) in samples.iter().enumerate() {
            let v = kernel.eval(&samples, m as i64);
            assert_eq!(v, *s);
        }
    }

    #[test]
    fn impulse_reads_off_the_normalized_kernel() {
        let l = 8usize;
        let delta = 0.25;
        let mut samples = vec![Complex64::default(); 32];
        samples[0] = Complex64::new(1.0, 0.0);
        let out = fractional_shift(&samples, delta, l, WindowKind::Hann);
        let gain: f64 = (-(l as i64)..=l as i64)
            .map(|j| oracle_hann(j, l as i64) * oracle_sinc(delta + j as f64))
            .sum();
        for (n, v) in out.iter().enumerate() {
            let expect = if n as i64 <= l as i64 {
                oracle_hann(n as i64, l as i64) * oracle_sinc(n as f64 - delta) / gain
            } else {
                0.0
            };
            assert!(
                (v.re - expect).abs() < 1e-13 && v.im.abs() < 1e-13,
                "tap {n}: got {v}, want {expect}"
            );
        }
    }

    #[test]
    fn bandlimited_sinusoid_shifts_analytically() {
        // e^{j 2 pi f0 n} shifted by half a sample should match the closed
        // form away from the block edges.
        let f0 = 0.05;
        let n = 64usize;
        let l = 8usize;
        let samples: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * f0 * i as f64))
            .collect();
        let out = fractional_shift(&samples, 0.5, l, WindowKind::Hann);
        for (m, v) in out.iter().enumerate().skip(l + 1).take(n - 2 * l - 2) {
            let expect = Complex64::from_polar(1.0, 2.0 * PI * f0 * (m as f64 - 0.5));
            let err = (v - expect).norm();
            assert!(err < 1e-3, "sample {m}: err {err}");
        }
    }

    #[test]
    fn shift_is_linear() {
        let a: Vec<Complex64> = (0..24)
            .map(|i| Complex64::new((i as f64).cos(), (2.0 * i as f64).sin()))
            .collect();
        let b: Vec<Complex64> = (0..24)
            .map(|i| Complex64::new((0.5 * i as f64).sin(), -(i as f64 * 0.2).cos()))
            .collect();
        let combo: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x + 0.5 * y).collect();
        let sa = fractional_shift(&a, 0.375, 6, WindowKind::Hann);
        let sb = fractional_shift(&b, 0.375, 6, WindowKind::Hann);
        let sc = fractional_shift(&combo, 0.375, 6, WindowKind::Hann);
        for i in 0..24 {
            let err = (sc[i] - (2.0 * sa[i] + 0.5 * sb[i])).norm();
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn extended_shift_agrees_inside_and_rings_outside() {
        let samples: Vec<Complex64> = (0..16).map(|_| Complex64::new(1.0, 0.0)).collect();
        let ext = ExtendedShift::new(&samples, 0.5, 4, WindowKind::Hann, 5);
        let plain = fractional_shift(&samples, 0.5, 4, WindowKind::Hann);
        for (m, v) in plain.iter().enumerate() {
            assert_eq!(ext.at(m as i64), *v);
        }
        // The block edge rings into the margin but dies out past the kernel.
        assert!(ext.at(-1).norm() > 1e-3);
        assert_eq!(ext.at(-6), Complex64::default());
        assert_eq!(ext.at(30), Complex64::default());
    }
}
