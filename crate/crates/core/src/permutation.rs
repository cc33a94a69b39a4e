//! Permutations of {0, ..., N-1} for the chirp-permuted modulator.
//!
//! A permutation can be given explicitly, drawn reproducibly from a seed, or
//! selected by its rank in lexicographic order. Lexicographic ranks are only
//! accepted for N <= 20: 20! still fits in a u64, 21! does not, and the rank
//! representation is purely notational beyond that point.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{Error, Result};
use crate::symbols::sample_below;

/// Largest block length for which lexicographic ranks are accepted.
pub const MAX_LEX_LEN: usize = 20;

/// How a permutation of {0, ..., N-1} is specified.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum PermutationSpec {
    /// The identity permutation.
    Identity,
    /// An explicit index array; must be a bijection on {0, ..., N-1}.
    Explicit(Vec<usize>),
    /// A uniform random permutation, reproducible per seed.
    Seeded(u64),
    /// The rank-th permutation in lexicographic order (N <= 20).
    LexRank(u64),
}

/// Materialize a permutation specification as an index array of length `n`.
pub fn resolve_permutation(spec: &PermutationSpec, n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::Config("permutation length must be >= 1".into()));
    }
    match spec {
        PermutationSpec::Identity => Ok((0..n).collect()),
        PermutationSpec::Explicit(indices) => {
            validate_bijection(indices, n)?;
            Ok(indices.clone())
        }
        PermutationSpec::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(shuffled_identity(&mut rng, n))
        }
        PermutationSpec::LexRank(rank) => lex_unrank(*rank, n),
    }
}

/// Draw a uniform permutation from an already-positioned generator.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    shuffled_identity(rng, n)
}

fn shuffled_identity(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    // Fisher-Yates with an unbiased bounded sampler.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = sample_below(rng, (i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    perm
}

fn validate_bijection(indices: &[usize], n: usize) -> Result<()> {
    if indices.len() != n {
        return Err(Error::Dimension {
            what: "explicit permutation",
            expected: n,
            got: indices.len(),
        });
    }
    let mut seen = vec![false; n];
    for &idx in indices {
        if idx >= n || seen[idx] {
            return Err(Error::Config(format!(
                "explicit permutation is not a bijection on 0..{n} (offending index {idx})"
            )));
        }
        seen[idx] = true;
    }
    Ok(())
}

/// Exact factorial for n <= 20 (20! < 2^64).
fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The rank-th permutation of (0, ..., n-1) in lexicographic order, by
/// factorial-number-system unranking.
fn lex_unrank(rank: u64, n: usize) -> Result<Vec<usize>> {
    if n > MAX_LEX_LEN {
        return Err(Error::Config(format!(
            "lexicographic rank is only supported for N <= {MAX_LEX_LEN} (got N = {n}); \
             use an explicit or seeded permutation instead"
        )));
    }
    let total = factorial_u64(n);
    if rank >= total {
        return Err(Error::Config(format!(
            "lexicographic rank {rank} out of range: N = {n} has {total} permutations"
        )));
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut perm = Vec::with_capacity(n);
    let mut rank = rank;
    for pos in 0..n {
        let block = factorial_u64(n - 1 - pos);
        let digit = (rank / block) as usize;
        rank %= block;
        perm.push(remaining.remove(digit));
    }
    Ok(perm)
}
