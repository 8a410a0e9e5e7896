//! Seeded samplers. All randomness flows through an explicit [`Stream`], so a
//! trial is reproducible from `(seed, index)` alone.

use crate::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::hermitian::HermitianMatrix;
use super::matrix::{inner, norm, ComplexMatrix};
use super::MAX_DIM;
use crate::{Error, Result};

/// Counter-based random stream (ChaCha8 keyed by the seed, with the stream
/// id selecting an independent substream).
#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent substream `index` of `seed`; substreams never overlap.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Stream(rng)
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: n, reason: "samplers support 1..=16" });
    }
    Ok(())
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    check_dim(n)?;
    Ok(ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng)))
}

/// GUE sample `(G + G*) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix> {
    let g = gaussian_matrix(n, rng)?;
    Ok(HermitianMatrix::symmetrize(g))
}

/// Haar-distributed unitary.
///
/// Columns of a Gaussian matrix are orthonormalized by Gram–Schmidt (run
/// twice for stability). Gram–Schmidt produces the QR factorization whose
/// triangular factor has a positive real diagonal, which is the phase fix
/// that makes `Q` Haar distributed.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let g = gaussian_matrix(n, rng)?;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let r = inner(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= r * qi;
                }
            }
        }
        let r = norm(&v);
        // a Gaussian matrix is singular with probability zero
        if r <= f64::MIN_POSITIVE {
            return Err(Error::InvalidArgument("degenerate Gaussian sample"));
        }
        v.iter_mut().for_each(|z| *z /= r);
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(n);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    Ok(u)
}

/// Uniform unit vector in `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    check_dim(n)?;
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let r = norm(&v);
        if r > 1e-150 {
            return Ok(v.into_iter().map(|z| z / r).collect());
        }
    }
}

/// `Σ c_j x_j ⊗ x_j` over `k` orthonormal Haar vectors with `|c_j| ∈ [0.5, 2)`
/// and random signs.
pub fn random_rank_k_hermitian<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<HermitianMatrix> {
    if k > n {
        return Err(Error::InvalidArgument("rank exceeds dimension"));
    }
    let u = random_unitary(n, rng)?;
    let coeffs: Vec<f64> = (0..k)
        .map(|_| {
            let m: f64 = 0.5 + 1.5 * rng.random::<f64>();
            if rng.random::<bool>() {
                m
            } else {
                -m
            }
        })
        .collect();
    Ok(HermitianMatrix::symmetrize(ComplexMatrix::from_fn(n, |i, j| {
        (0..k).map(|l| u[(i, l)] * u[(j, l)].conj() * coeffs[l]).sum()
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = Stream::new(1);
        for n in 1..=16 {
            let u = random_unitary(n, &mut rng).unwrap();
            assert!(u.unitary_deviation() <= 1e-12, "n={n}");
        }
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a = random_hermitian(3, &mut Stream::substream(5, 9)).unwrap();
        let b = random_hermitian(3, &mut Stream::substream(5, 9)).unwrap();
        let c = random_hermitian(3, &mut Stream::substream(5, 10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_vectors_have_unit_norm() {
        let mut rng = Stream::new(3);
        for _ in 0..100 {
            let v = random_unit_vector(5, &mut rng).unwrap();
            assert!((norm(&v) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dimension_limits() {
        let mut rng = Stream::new(0);
        assert!(random_hermitian(17, &mut rng).is_err());
        assert!(random_rank_k_hermitian(3, 4, &mut rng).is_err());
    }

    #[test]
    fn gue_spectrum_mean_is_zero() {
        // eigenvalue sum = trace = Re g_00 + Re g_11, each N(0, 1/2):
        // the per-sample mean of the two eigenvalues has variance 1/4.
        let mut rng = Stream::new(2024);
        let samples = 10_000;
        let mut sum = 0.0;
        for _ in 0..samples {
            let a = random_hermitian(2, &mut rng).unwrap();
            let ev = crate::matcore::hermitian_eigen(&a).unwrap().eigenvalues;
            sum += (ev[0] + ev[1]) / 2.0;
        }
        let mean = sum / samples as f64;
        let sigma = (0.25f64 / samples as f64).sqrt();
        assert!(mean.abs() < 5.0 * sigma, "mean {mean}");
    }
}
