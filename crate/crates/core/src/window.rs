//! Taper windows for the truncated interpolation kernel.

/// Taper applied to the sinc kernel taps, indexed by integer tap offset m
/// with |m| <= half-width. Every window satisfies w[0] = 1.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum WindowKind {
    /// w[m] = 0.5 * (1 + cos(pi*m/L_h)). Parameter-free, zero at |m| = L_h.
    Hann,
    /// w[m] = I0(beta * sqrt(1 - (m/L_h)^2)) / I0(beta).
    Kaiser { beta: f64 },
    /// No taper inside the support.
    Rectangular,
}

impl WindowKind {
    /// Window value at integer tap offset `m` for the given half-width.
    pub fn tap(&self, m: i64, half_width: usize) -> f64 {
        let l = half_width as i64;
        if m.abs() > l {
            return 0.0;
        }
        match self {
            WindowKind::Rectangular => 1.0,
            WindowKind::Hann => {
                0.5 * (1.0 + (std::f64::consts::PI * m as f64 / l as f64).cos())
            }
            WindowKind::Kaiser { beta } => {
                let frac = m as f64 / l as f64;
                bessel_i0(beta * (1.0 - frac * frac).sqrt()) / bessel_i0(*beta)
            }
        }
    }
}

/// Modified Bessel function of the first kind, order zero, by power series.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=64 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}
