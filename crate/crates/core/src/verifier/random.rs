//! Seeded random forms and the ratio lower-bound search.
//!
//! Every form draws from the stream `(seed, index)` of a counter-based
//! generator, so trial `i` produces the same tensor no matter how many
//! other trials ran before it.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::Result;
use crate::scalar::RealScalar;

use super::{
    littlewood_padded, tensor_len, Form, FormScalar, MultilinearForm, RealFormScalar,
    ScalarField, SupOptions,
};

/// Coefficient distribution for random forms.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dist {
    /// Entries from `{-1, +1}`; unit modulus with uniform phase over the
    /// complex field.
    SignUniform,
    /// Standard normal entries; independent real and imaginary parts over
    /// the complex field.
    Gaussian,
}

impl Dist {
    pub fn label(self) -> &'static str {
        match self {
            Dist::SignUniform => "sign-uniform",
            Dist::Gaussian => "gaussian",
        }
    }
}

impl std::fmt::Display for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random real form for trial `index` of the stream `seed`.
pub fn random_real_form<S: RealFormScalar>(
    degree: u32,
    dim: usize,
    dist: Dist,
    seed: u64,
    index: u64,
) -> Result<MultilinearForm<S>> {
    let len = tensor_len(degree, dim)?;
    let mut rng = substream(seed, index);
    let coeffs = (0..len)
        .map(|_| match dist {
            Dist::SignUniform => {
                if rng.random::<bool>() {
                    S::one()
                } else {
                    -S::one()
                }
            }
            Dist::Gaussian => S::embed(StandardNormal.sample(&mut rng)),
        })
        .collect();
    MultilinearForm::new(degree, dim, coeffs)
}

/// Random complex form for trial `index` of the stream `seed`.
pub fn random_complex_form<S: RealScalar>(
    degree: u32,
    dim: usize,
    dist: Dist,
    seed: u64,
    index: u64,
) -> Result<MultilinearForm<Complex<S>>> {
    let len = tensor_len(degree, dim)?;
    let mut rng = substream(seed, index);
    let coeffs = (0..len)
        .map(|_| match dist {
            Dist::SignUniform => {
                let theta = rng.random::<f64>() * std::f64::consts::TAU;
                Complex::new(S::embed(theta.cos()), S::embed(theta.sin()))
            }
            Dist::Gaussian => {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex::new(S::embed(re), S::embed(im))
            }
        })
        .collect();
    MultilinearForm::new(degree, dim, coeffs)
}

/// Field-dispatched random form over `f64` scalars.
pub fn random_form(
    degree: u32,
    dim: usize,
    field: ScalarField,
    dist: Dist,
    seed: u64,
    index: u64,
) -> Result<Form> {
    Ok(match field {
        ScalarField::Real => Form::Real(random_real_form(degree, dim, dist, seed, index)?),
        ScalarField::Complex => Form::Complex(random_complex_form(degree, dim, dist, seed, index)?),
    })
}

/// Result of a [`lower_bound_search`].
#[derive(Clone, Debug)]
pub struct SearchReport {
    /// Best observed `bh_lhs / sup`; a valid lower bound on the optimal
    /// constant at this degree only when `certified` is set.
    pub best_ratio: f64,
    /// True over the real field, where the sup norm is exact.
    pub certified: bool,
    /// Forms examined, canonical seeds included.
    pub trials: u32,
    pub best_form: Form,
}

fn ratio_of(form: &Form, opts: &SupOptions) -> Result<f64> {
    let (sup, _exact) = match form {
        Form::Real(f) => f64::sup_norm(f, opts)?,
        Form::Complex(f) => Complex::<f64>::sup_norm(f, opts)?,
    };
    if sup == 0.0 {
        return Ok(0.0);
    }
    Ok(form.bh_lhs() / sup)
}

/// Searches sampled and perturbed forms for large `bh_lhs / sup` ratios.
///
/// The single-entry form and (at degree 2) the Littlewood form seed the
/// search, so the degree-2 real search returns at least `sqrt(2)` for any
/// budget. Over the complex field the returned ratio is an estimate only,
/// since the sup norm is a lower bound.
pub fn lower_bound_search(
    degree: u32,
    dim: usize,
    field: ScalarField,
    seed: u64,
    budget: u32,
) -> Result<SearchReport> {
    let len = tensor_len(degree, dim)?;
    let opts = SupOptions {
        seed,
        ..SupOptions::default()
    };

    let mut canonical: Vec<Form> = Vec::new();
    // Single-entry form: ratio exactly 1, a universal baseline.
    let mut single = vec![0.0f64; len];
    single[0] = 1.0;
    let single = MultilinearForm::new(degree, dim, single)?;
    canonical.push(match field {
        ScalarField::Real => Form::Real(single),
        ScalarField::Complex => Form::Complex(super::complexify(&single)),
    });
    if degree == 2 && dim >= 2 {
        let lw = littlewood_padded::<f64>(dim)?;
        canonical.push(match field {
            ScalarField::Real => Form::Real(lw),
            ScalarField::Complex => Form::Complex(super::complexify(&lw)),
        });
    }

    let mut trials = 0u32;
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_form = canonical[0].clone();
    for form in canonical {
        let r = ratio_of(&form, &opts)?;
        trials += 1;
        if r > best_ratio {
            best_ratio = r;
            best_form = form;
        }
    }

    // Sampling phase: half the budget, alternating distributions.
    let sample_trials = budget / 2;
    for i in 0..sample_trials {
        let dist = if i % 2 == 0 { Dist::Gaussian } else { Dist::SignUniform };
        let form = random_form(degree, dim, field, dist, seed, u64::from(i))?;
        let r = ratio_of(&form, &opts)?;
        trials += 1;
        if r > best_ratio {
            best_ratio = r;
            best_form = form;
        }
    }

    // Perturbation phase: Gaussian nudges around the incumbent, shrinking.
    let perturb_trials = budget - sample_trials;
    for i in 0..perturb_trials {
        let mut rng = substream(seed, (1 << 32) + u64::from(i));
        let sigma = 0.3 * 0.97f64.powi(i.min(300) as i32);
        let candidate = match &best_form {
            Form::Real(f) => {
                let coeffs = f
                    .coeffs()
                    .iter()
                    .map(|&c| {
                        let noise: f64 = StandardNormal.sample(&mut rng);
                        c + sigma * noise
                    })
                    .collect();
                Form::Real(MultilinearForm::new(degree, dim, coeffs)?)
            }
            Form::Complex(f) => {
                let coeffs = f
                    .coeffs()
                    .iter()
                    .map(|&c| {
                        let dre: f64 = StandardNormal.sample(&mut rng);
                        let dim_part: f64 = StandardNormal.sample(&mut rng);
                        c + Complex::new(sigma * dre, sigma * dim_part)
                    })
                    .collect();
                Form::Complex(MultilinearForm::new(degree, dim, coeffs)?)
            }
        };
        let r = ratio_of(&candidate, &opts)?;
        trials += 1;
        if r > best_ratio {
            best_ratio = r;
            best_form = candidate;
        }
    }

    Ok(SearchReport {
        best_ratio,
        certified: field == ScalarField::Real,
        trials,
        best_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CompensatedSum;

    #[test]
    fn same_seed_same_form() {
        let a = random_real_form::<f64>(3, 3, Dist::Gaussian, 9, 4).unwrap();
        let b = random_real_form::<f64>(3, 3, Dist::Gaussian, 9, 4).unwrap();
        assert_eq!(a, b);
        let c = random_real_form::<f64>(3, 3, Dist::Gaussian, 9, 5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sign_uniform_entries_are_signs() {
        let f = random_real_form::<f64>(2, 3, Dist::SignUniform, 1, 0).unwrap();
        assert!(f.coeffs().iter().all(|&c| c == 1.0 || c == -1.0));
        let g = random_complex_form::<f64>(2, 2, Dist::SignUniform, 1, 0).unwrap();
        assert!(g.coeffs().iter().all(|c| (c.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gaussian_checksum_fixture() {
        // Generate-once fixture pinning the sampling layout of the stream
        // (seed 7, index 0) for a 2x3x3 tensor.
        let f = random_real_form::<f64>(2, 3, Dist::Gaussian, 7, 0).unwrap();
        let mut sum = CompensatedSum::<f64>::new();
        for &c in f.coeffs() {
            sum.add(c);
        }
        assert!((sum.total() - (-1.57626970543457934)).abs() < 1e-12);
    }

    #[test]
    fn search_finds_littlewood_at_degree_two() {
        let report = lower_bound_search(2, 2, ScalarField::Real, 0, 50).unwrap();
        assert!(report.certified);
        assert!(report.best_ratio >= std::f64::consts::SQRT_2 - 1e-9);
    }

    #[test]
    fn rank_one_search_stays_at_one() {
        let report = lower_bound_search(2, 1, ScalarField::Real, 0, 30).unwrap();
        assert!((report.best_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_three_search_respects_theorem_bound() {
        // Fixture value recorded from this deterministic search; bounded by
        // C_3 = 2^{5/6}.
        let report = lower_bound_search(3, 2, ScalarField::Real, 0, 200).unwrap();
        assert!(report.best_ratio <= 2f64.powf(5.0 / 6.0) + 1e-9);
        assert!((report.best_ratio - 1.18287958916145075).abs() < 1e-12);
        let again = lower_bound_search(3, 2, ScalarField::Real, 0, 200).unwrap();
        assert_eq!(report.best_ratio, again.best_ratio);
    }

    #[test]
    fn complex_search_reports_estimates() {
        let report = lower_bound_search(2, 2, ScalarField::Complex, 0, 20).unwrap();
        assert!(!report.certified);
        assert!(report.best_ratio > 0.0);
    }

    #[test]
    fn best_ratio_from_lhs_over_sup() {
        // The stored best form reproduces the reported ratio.
        let report = lower_bound_search(2, 2, ScalarField::Real, 3, 40).unwrap();
        let opts = SupOptions {
            seed: 3,
            ..SupOptions::default()
        };
        let r = ratio_of(&report.best_form, &opts).unwrap();
        assert_eq!(r, report.best_ratio);
        assert!(bh_lhs_nonzero(&report.best_form));
    }

    fn bh_lhs_nonzero(form: &Form) -> bool {
        form.bh_lhs() > 0.0
    }
}
