//! Sup norms of multilinear forms.
//!
//! Over the real cube `[-1, 1]^N` the form is affine in every coordinate,
//! so its maximum modulus is attained at a sign vertex and exhaustive
//! enumeration is exact. Flipping all signs of the first slot negates the
//! form, so the first coordinate of the first slot can be pinned to `+1`,
//! halving the vertex count.
//!
//! Over the complex polydisk only a certified lower bound is produced:
//! block coordinate ascent on the torus sets a whole slot to the phases of
//! its contraction against the other slots, which can only increase the
//! modulus. Restarts mix the all-ones start with random sign vertices and
//! random phase vectors; the returned value is re-evaluated at the witness
//! so a single evaluation reproduces it.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

use super::{FormScalar, MultilinearForm, RealFormScalar};

/// Exact sup norm of a real form over the unit cube, by sign-vertex
/// enumeration with the first coordinate of the first slot fixed to `+1`.
///
/// Fails with a resource error when `2^{m N}` exceeds the configured budget
/// (`m N > max_bits`).
pub fn sup_norm_real<S: RealFormScalar>(form: &MultilinearForm<S>, max_bits: u32) -> Result<S> {
    let m = form.degree() as usize;
    let n = form.dim();
    let bits = m * n;
    if bits as u32 > max_bits.min(40) {
        return Err(Error::resource(format!(
            "vertex enumeration needs 2^{bits} evaluations, above the 2^{} budget",
            max_bits.min(40)
        )));
    }

    let one = S::one();
    let mut points: Vec<Vec<S>> = vec![vec![one; n]; m];
    let mut scratch: Vec<S> = Vec::with_capacity(form.coeffs().len());
    let mut best = S::zero();
    let total: u64 = 1u64 << (bits - 1);
    for mask in 0..total {
        let mut b = mask;
        // Coordinate (slot 0, index 0) stays +1; the rest follow the mask.
        for (k, point) in points.iter_mut().enumerate() {
            for (i, coord) in point.iter_mut().enumerate() {
                if k == 0 && i == 0 {
                    continue;
                }
                *coord = if b & 1 == 1 { -one } else { one };
                b >>= 1;
            }
        }
        let value = form.eval_with_scratch(&points, &mut scratch).abs();
        best = best.maximum(value);
    }
    Ok(best)
}

/// A certified lower bound on the polydisk sup norm with the torus point
/// attaining it.
#[derive(Clone, Debug)]
pub struct SupLowerBound<S> {
    pub value: S,
    pub witness: Vec<Vec<Complex<S>>>,
}

impl<S: RealScalar> SupLowerBound<S> {
    /// Re-evaluates the witness; equals `value` up to rounding by
    /// construction.
    pub fn check(&self, form: &MultilinearForm<Complex<S>>) -> S {
        form.eval(&self.witness).modulus()
    }
}

/// Lower bound on the complex polydisk sup norm by multistart phase ascent.
///
/// Deterministic for a fixed seed: restart `r` draws from stream `r` of a
/// counter-based generator, so the result does not depend on evaluation
/// order. Quality improves with `restarts` and `iters`; the bound is always
/// valid.
pub fn sup_norm_complex_lower<S: RealScalar>(
    form: &MultilinearForm<Complex<S>>,
    restarts: u32,
    iters: u32,
    seed: u64,
) -> SupLowerBound<S> {
    let m = form.degree() as usize;
    let n = form.dim();
    let one = Complex::new(S::one(), S::zero());

    let mut best_value = S::zero();
    let mut best_witness: Vec<Vec<Complex<S>>> = vec![vec![one; n]; m];
    let mut scratch: Vec<Complex<S>> = Vec::with_capacity(form.coeffs().len());

    for r in 0..=restarts {
        let mut points: Vec<Vec<Complex<S>>> = if r == 0 {
            vec![vec![one; n]; m]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(u64::from(r));
            (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if r % 2 == 0 {
                                // Random sign vertex.
                                if rng.random::<bool>() {
                                    one
                                } else {
                                    -one
                                }
                            } else {
                                // Random phase.
                                let theta = rng.random::<f64>() * std::f64::consts::TAU;
                                Complex::new(S::embed(theta.cos()), S::embed(theta.sin()))
                            }
                        })
                        .collect()
                })
                .collect()
        };

        let mut current = S::zero();
        for _ in 0..iters {
            let mut improved = false;
            for k in 0..m {
                let contraction = slot_contraction(form, &points, k, &mut scratch);
                let mut value = S::zero();
                for (i, &c) in contraction.iter().enumerate() {
                    let modulus = c.modulus();
                    value += modulus;
                    points[k][i] = if modulus.is_zero() {
                        one
                    } else {
                        Complex::new(c.re / modulus, -(c.im / modulus))
                    };
                }
                if value > current * (S::one() + S::embed(1e-15)) {
                    current = value;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }

        // Quote the bound at the witness itself so it is checkable by one
        // evaluation.
        let value = form.eval_with_scratch(&points, &mut scratch).modulus();
        if value > best_value {
            best_value = value;
            best_witness = points;
        }
    }

    SupLowerBound {
        value: best_value,
        witness: best_witness,
    }
}

/// Contracts every slot except `k` at the given points, leaving the length-N
/// coefficient vector of slot `k`.
fn slot_contraction<S: RealScalar>(
    form: &MultilinearForm<Complex<S>>,
    points: &[Vec<Complex<S>>],
    k: usize,
    scratch: &mut Vec<Complex<S>>,
) -> Vec<Complex<S>> {
    let m = form.degree() as usize;
    let dim = form.dim();
    scratch.clear();
    scratch.extend_from_slice(form.coeffs());
    let mut len = scratch.len();

    // Contract trailing slots m-1, ..., k+1 (last index fastest).
    for slot in ((k + 1)..m).rev() {
        let z = &points[slot];
        len /= dim;
        for j in 0..len {
            let mut acc = Complex::new(S::zero(), S::zero());
            let base = j * dim;
            for (i, &zi) in z.iter().enumerate() {
                acc += scratch[base + i] * zi;
            }
            scratch[j] = acc;
        }
    }

    // Contract leading slots 0, ..., k-1 (first index slowest).
    for z in &points[..k] {
        let stride = len / dim;
        for j in 0..stride {
            let mut acc = Complex::new(S::zero(), S::zero());
            for (i, &zi) in z.iter().enumerate() {
                acc += scratch[i * stride + j] * zi;
            }
            scratch[j] = acc;
        }
        len = stride;
    }

    scratch[..dim].to_vec()
}
