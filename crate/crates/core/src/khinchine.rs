//! Khinchine constants `A_p` for the recursion exponents `1 < p <= 2`.
//!
//! Two evaluation rules are provided. [`KhinchineMode::GammaFormula`]
//! applies `A_p = sqrt(2) (Γ((p+1)/2) / sqrt(π))^{1/p}` at every `p`.
//! [`KhinchineMode::HaagerupPiecewise`] uses the optimal constant
//! `2^{1/2 - 1/p}` below the crossover exponent `p0` and the Gamma formula
//! above it; the two rules agree at `p0` and at `p = 2`. The recursion
//! arguments `2m/(m+2)` fall below `p0` for small `m`, which is where the
//! two modes produce different constant tables.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::RealScalar;
use crate::specialfn::{find_p0, ln_gamma, p0_residual};

/// Selects the `A_p` evaluation rule.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KhinchineMode {
    GammaFormula,
    HaagerupPiecewise,
}

impl KhinchineMode {
    pub const ALL: [KhinchineMode; 2] =
        [KhinchineMode::GammaFormula, KhinchineMode::HaagerupPiecewise];

    pub fn label(self) -> &'static str {
        match self {
            KhinchineMode::GammaFormula => "gamma",
            KhinchineMode::HaagerupPiecewise => "haagerup",
        }
    }
}

impl fmt::Display for KhinchineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

static P0_F64: OnceLock<f64> = OnceLock::new();

fn p0_f64() -> f64 {
    *P0_F64.get_or_init(|| {
        find_p0(1e-12f64).expect("the default bracket [1.5, 2] contains p0")
    })
}

/// The crossover exponent `p0`, resolved once per process at `f64` precision
/// and refined by secant steps for wider scalar types.
pub fn resolved_p0<S: RealScalar>() -> S {
    let seed = p0_f64();
    if S::DIGITS <= 15 {
        return S::embed(seed);
    }
    let mut x0 = S::embed(seed - 1e-8);
    let mut x1 = S::embed(seed + 1e-8);
    let mut f0 = p0_residual(x0).expect("p0 seed lies inside (1, 2)");
    let mut f1 = p0_residual(x1).expect("p0 seed lies inside (1, 2)");
    for _ in 0..8 {
        if f1.is_zero() || f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = p0_residual(x1).expect("secant iterate stays inside (1, 2)");
    }
    x1
}

/// `ln A_p`. Domain: `1 < p <= 2`; exactly zero at `p = 2` in both modes.
pub fn ln_a_p<S: RealScalar>(p: S, mode: KhinchineMode) -> Result<S> {
    let one = S::one();
    let two = S::embed(2.0);
    if !p.is_finite() || p <= one || p > two {
        return Err(Error::domain(format!(
            "a_p requires 1 < p <= 2, got {p}"
        )));
    }
    if p == two {
        return Ok(S::zero());
    }
    let half = S::embed(0.5);
    match mode {
        KhinchineMode::GammaFormula => gamma_formula_ln(p),
        KhinchineMode::HaagerupPiecewise => {
            if p <= resolved_p0::<S>() {
                Ok((half - one / p) * S::ln_2())
            } else {
                gamma_formula_ln(p)
            }
        }
    }
}

fn gamma_formula_ln<S: RealScalar>(p: S) -> Result<S> {
    let half = S::embed(0.5);
    let ln_sqrt_pi = S::pi().ln() * half;
    Ok(half * S::ln_2() + (ln_gamma((p + S::one()) * half)? - ln_sqrt_pi) / p)
}

/// The Khinchine constant `A_p` itself.
pub fn a_p<S: RealScalar>(p: S, mode: KhinchineMode) -> Result<S> {
    ln_a_p(p, mode).map(|v| v.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddouble::DoubleDouble;

    type DD = DoubleDouble;

    #[test]
    fn value_at_two_is_exactly_one() {
        for mode in KhinchineMode::ALL {
            assert_eq!(a_p(2.0f64, mode).unwrap(), 1.0);
        }
    }

    #[test]
    fn gamma_formula_collapses_at_p0() {
        // At p0 the defining equation gives Γ((p0+1)/2)/sqrt(π) = 1/2, so the
        // Gamma formula reduces to 2^{1/2 - 1/p0}.
        let p0 = resolved_p0::<f64>();
        let gamma_value = a_p(p0, KhinchineMode::GammaFormula).unwrap();
        let closed = 2f64.powf(0.5 - 1.0 / p0);
        assert!((gamma_value - closed).abs() < 1e-12);
    }

    #[test]
    fn haagerup_closed_form_below_p0() {
        let got = a_p(4.0f64 / 3.0, KhinchineMode::HaagerupPiecewise).unwrap();
        assert!((got - 2f64.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn gamma_formula_fixture_at_four_thirds() {
        // sqrt(2) (Γ(7/6)/sqrt(π))^{3/4}, 32-digit reference.
        let got = a_p(4.0f64 / 3.0, KhinchineMode::GammaFormula).unwrap();
        assert!((got - 0.8702544467840698).abs() < 1e-15);

        let dd = a_p(DD::embed(4.0) / DD::embed(3.0), KhinchineMode::GammaFormula).unwrap();
        let reference = DD::from_parts(0.8702544467840698, -9.790575911835659e-18);
        assert!((dd - reference).abs().nearest_f64() < 1e-27);
    }

    #[test]
    fn strictly_increasing_above_p0_in_gamma_mode() {
        let p0 = resolved_p0::<f64>();
        let mut prev = a_p(p0, KhinchineMode::GammaFormula).unwrap();
        let steps = 400;
        for i in 1..=steps {
            let p = p0 + (2.0 - p0) * f64::from(i) / f64::from(steps);
            let v = a_p(p, KhinchineMode::GammaFormula).unwrap();
            assert!(v > prev, "A_p not increasing at p = {p}");
            prev = v;
        }
    }

    #[test]
    fn bounded_by_one_on_the_whole_domain() {
        for mode in KhinchineMode::ALL {
            for i in 1..=1000 {
                let p = 1.0 + f64::from(i) / 1000.0;
                let v = a_p(p, mode).unwrap();
                assert!(v > 0.0 && v <= 1.0, "A_p out of range at p = {p} ({mode})");
            }
        }
    }

    #[test]
    fn modes_agree_above_p0() {
        let p0 = resolved_p0::<f64>();
        for i in 0..=500 {
            let p = p0 + (2.0 - p0) * f64::from(i) / 500.0;
            let a = a_p(p, KhinchineMode::GammaFormula).unwrap();
            let b = a_p(p, KhinchineMode::HaagerupPiecewise).unwrap();
            assert!((a - b).abs() < 1e-12, "modes disagree at p = {p}");
        }
        // And at the crossover itself.
        let a = a_p(p0, KhinchineMode::GammaFormula).unwrap();
        let b = a_p(p0, KhinchineMode::HaagerupPiecewise).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn piecewise_never_exceeds_gamma_formula() {
        // Below p0 the optimal constant is the smaller two-point bound.
        for i in 1..=500 {
            let p = 1.0 + f64::from(i) / 500.0;
            let g = a_p(p, KhinchineMode::GammaFormula).unwrap();
            let h = a_p(p, KhinchineMode::HaagerupPiecewise).unwrap();
            assert!(h <= g + 1e-15, "piecewise above gamma formula at p = {p}");
        }
    }

    #[test]
    fn rejects_out_of_domain_exponents() {
        for mode in KhinchineMode::ALL {
            assert!(a_p(1.0f64, mode).is_err());
            assert!(a_p(0.5f64, mode).is_err());
            assert!(a_p(2.0000001f64, mode).is_err());
            assert!(a_p(f64::NAN, mode).is_err());
        }
    }

    #[test]
    fn resolved_p0_refines_for_double_double() {
        let p0 = resolved_p0::<DD>();
        let reference = DD::from_parts(1.847416336076342, 9.333218186953702e-17);
        assert!((p0 - reference).abs().nearest_f64() < 1e-25);
        let residual = p0_residual(p0).unwrap();
        assert!(residual.abs().nearest_f64() < 1e-25);
    }
}
