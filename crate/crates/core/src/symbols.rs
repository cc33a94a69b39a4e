//! Symbol blocks: normalized square-QAM draws and the all-ones sensing block.
//!
//! Random draws use a counter-mode ChaCha generator so that a campaign can
//! derive an independent, reproducible stream per realization from one
//! 64-bit master seed, regardless of how work is split across threads.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// How the entries of a [`SymbolBlock`] are produced.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum SymbolMode {
    /// Independent draws from a normalized square M-QAM constellation.
    RandomQam { order: usize, seed: u64 },
    /// Every entry equals 1 + 0j (sensing-only signaling).
    Unimodular,
}

/// A length-N vector of complex data symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    pub values: Vec<Complex64>,
    pub mode: SymbolMode,
}

impl SymbolBlock {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of |x[n]|^2 over the block.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// All-ones block of length `n`.
    pub fn unimodular(n: usize) -> Result<Self> {
        check_block_len(n)?;
        Ok(Self {
            values: vec![Complex64::new(1.0, 0.0); n],
            mode: SymbolMode::Unimodular,
        })
    }

    /// Block of `n` independent draws from the normalized `order`-QAM
    /// constellation, reproducible per `seed`.
    pub fn random_qam(n: usize, order: usize, seed: u64) -> Result<Self> {
        check_block_len(n)?;
        let mut rng = realization_rng(seed, 0);
        Self::draw_qam(&mut rng, n, order)
    }

    /// Draw a block from an already-positioned generator. Used by campaigns
    /// so that symbol and permutation draws share one per-realization stream.
    pub fn draw_qam(rng: &mut ChaCha8Rng, n: usize, order: usize) -> Result<Self> {
        check_block_len(n)?;
        let points = qam_constellation(order)?;
        let m = points.len() as u64;
        let values = (0..n)
            .map(|_| points[sample_below(rng, m) as usize])
            .collect();
        Ok(Self {
            values,
            mode: SymbolMode::RandomQam { order, seed: 0 },
        })
    }
}

/// Generate a symbol block for the given mode.
pub fn generate_symbols(mode: SymbolMode, n: usize) -> Result<SymbolBlock> {
    match mode {
        SymbolMode::Unimodular => SymbolBlock::unimodular(n),
        SymbolMode::RandomQam { order, seed } => SymbolBlock::random_qam(n, order, seed),
    }
}

/// The square M-QAM constellation, row-major over the lattice, normalized to
/// unit average power: (1/M)·sum |c|^2 = 1.
///
/// No Gray mapping is applied; ambiguity statistics depend only on the
/// power-normalized point set.
pub fn qam_constellation(order: usize) -> Result<Vec<Complex64>> {
    let side = (order as f64).sqrt().round() as usize;
    if order < 4 || side * side != order {
        return Err(Error::Config(format!(
            "M = {order} is not a supported square QAM size (4, 16, 64, ...)"
        )));
    }
    // Per-axis levels ±1, ±3, ..., ±(side-1); average power is 2(M-1)/3.
    let scale = (2.0 * (order as f64 - 1.0) / 3.0).sqrt();
    let level = |k: usize| (2.0 * k as f64 - (side as f64 - 1.0)) / scale;
    let mut points = Vec::with_capacity(order);
    for row in 0..side {
        for col in 0..side {
            points.push(Complex64::new(level(col), level(row)));
        }
    }
    Ok(points)
}

/// The generator for realization `r` of a campaign seeded with `master_seed`.
///
/// ChaCha's 64-bit stream counter gives independent sequences per realization
/// without any sequential dependency between them.
pub fn realization_rng(master_seed: u64, realization: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(realization);
    rng
}

/// Unbiased integer in [0, bound) by rejection sampling.
///
/// Hand-rolled so draws stay bit-stable across dependency upgrades.
pub(crate) fn sample_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = (u64::MAX / bound) * bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

fn check_block_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Config(format!("block length N = {n} must be >= 2")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_block_is_all_ones() {
        let block = SymbolBlock::unimodular(4).unwrap();
        assert_eq!(block.values, vec![Complex64::new(1.0, 0.0); 4]);
        assert_eq!(block.mode, SymbolMode::Unimodular);
    }

    #[test]
    fn constellations_have_unit_average_power() {
        for order in [4, 16, 64] {
            let points = qam_constellation(order).unwrap();
            assert_eq!(points.len(), order);
            let avg: f64 = points.iter().map(|c| c.norm_sqr()).sum::<f64>() / order as f64;
            assert!((avg - 1.0).abs() < 1e-12, "M={order}: avg power {avg}");
        }
    }

    #[test]
    fn qam4_entries_lie_on_the_normalized_lattice() {
        let block = SymbolBlock::random_qam(64, 4, 123).unwrap();
        let q = 1.0 / 2.0f64.sqrt();
        for v in &block.values {
            assert!((v.re.abs() - q).abs() < 1e-15 && (v.im.abs() - q).abs() < 1e-15);
        }
    }

    #[test]
    fn large_block_mean_power_approaches_one() {
        // Law of large numbers on a 16-QAM draw.
        let block = SymbolBlock::random_qam(100_000, 16, 7).unwrap();
        let mean = block.energy() / block.len() as f64;
        assert!((mean - 1.0).abs() < 1e-2, "mean power {mean}");
    }

    #[test]
    fn draws_are_reproducible_per_seed() {
        let a = SymbolBlock::random_qam(256, 16, 42).unwrap();
        let b = SymbolBlock::random_qam(256, 16, 42).unwrap();
        let c = SymbolBlock::random_qam(256, 16, 43).unwrap();
        assert_eq!(a.values, b.values);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn realization_streams_are_distinct() {
        let a = SymbolBlock::draw_qam(&mut realization_rng(9, 0), 64, 16).unwrap();
        let b = SymbolBlock::draw_qam(&mut realization_rng(9, 1), 64, 16).unwrap();
        assert_ne!(a.values, b.values);
    }

    #[test]
    fn invalid_orders_are_rejected() {
        assert!(matches!(qam_constellation(8), Err(Error::Config(_))));
        assert!(matches!(qam_constellation(5), Err(Error::Config(_))));
        assert!(matches!(qam_constellation(2), Err(Error::Config(_))));
    }

    #[test]
    fn short_blocks_are_rejected() {
        assert!(SymbolBlock::unimodular(1).is_err());
        assert!(SymbolBlock::random_qam(0, 16, 1).is_err());
    }
}
