//! Euler-constant limit identities and the empirical verification that the
//! consecutive-constant ratios `D_n = C_{n+1}/C_n` tend to one.
//!
//! The closed-form limit targets are always rebuilt from
//! [`euler_gamma`](crate::specialfn::euler_gamma), never hard-coded as
//! decimals. The claim checks are tail scans over a prebuilt
//! [`ConstantTable`]: limit statements are rendered as residual decay with
//! explicit tolerances, since the underlying statements carry no rates.
//! Scan grids follow the dyadic structure of the claims (`n` against `2n`).

use serde::Serialize;

use crate::bhconstants::{ConstantTable, FamilySpec};
use crate::error::{Error, Result};
use crate::khinchine::{ln_a_p, KhinchineMode};
use crate::scalar::RealScalar;
use crate::specialfn::{euler_gamma, ln_gamma};

/// The six limit identities with closed forms in the Euler constant.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    /// `(Γ(1/2 - x)/Γ(1/2))^{1/x} -> 4 e^γ` as `x -> 0`.
    HalfShift,
    /// `(Γ(3/2 - x)/Γ(3/2))^{1/x} -> 4 e^{γ-2}` as `x -> 0`.
    ThreeHalfShift,
    /// `(Γ((3m+2)/(2m+4))/Γ(3/2))^m -> 16 e^{2γ-4}`.
    SequencePower,
    /// `2^{m/4} (Γ((2m/(m+2)+1)/2)/sqrt(π))^{(m+2)/4} = A_{2m/(m+2)}^{m/2}
    /// -> sqrt(2) e^{γ/2 - 1}`.
    KhinchinePrefactor,
    /// `(A_{2m/(m+2)}^{m/2})^{-1} -> e^{1-γ/2}/sqrt(2)`, the limit of
    /// `C_{2n}/C_n`.
    EvenRatio,
    /// `(A_{(2m-2)/(m+1)}^{(m+1)/2})^{-(m-1)/(2m)} -> e^{1/2-γ/4}/2^{1/4}`,
    /// one factor of the odd-degree recursion.
    OddRatio,
}

impl LimitKind {
    pub const ALL: [LimitKind; 6] = [
        LimitKind::HalfShift,
        LimitKind::ThreeHalfShift,
        LimitKind::SequencePower,
        LimitKind::KhinchinePrefactor,
        LimitKind::EvenRatio,
        LimitKind::OddRatio,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LimitKind::HalfShift => "half-shift",
            LimitKind::ThreeHalfShift => "three-half-shift",
            LimitKind::SequencePower => "sequence-power",
            LimitKind::KhinchinePrefactor => "khinchine-prefactor",
            LimitKind::EvenRatio => "even-ratio",
            LimitKind::OddRatio => "odd-ratio",
        }
    }
}

impl std::fmt::Display for LimitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A limit kind paired with its closed-form value.
#[derive(Copy, Clone, Debug)]
pub struct LimitTarget<S> {
    pub kind: LimitKind,
    pub closed_form_value: S,
}

/// Closed-form value of a limit, built from the stored Euler constant.
pub fn limit_target<S: RealScalar>(kind: LimitKind) -> S {
    let g = euler_gamma::<S>();
    let one = S::one();
    let two = S::embed(2.0);
    let four = S::embed(4.0);
    let half = S::embed(0.5);
    let quarter = S::embed(0.25);
    match kind {
        LimitKind::HalfShift => four * g.exp(),
        LimitKind::ThreeHalfShift => four * (g - two).exp(),
        LimitKind::SequencePower => S::embed(16.0) * (two * g - four).exp(),
        LimitKind::KhinchinePrefactor => two.sqrt() * (g * half - one).exp(),
        LimitKind::EvenRatio => (one - g * half).exp() / two.sqrt(),
        LimitKind::OddRatio => (half - g * quarter).exp() / two.sqrt().sqrt(),
    }
}

/// All six targets, in declaration order.
pub fn limit_targets<S: RealScalar>() -> Vec<LimitTarget<S>> {
    LimitKind::ALL
        .iter()
        .map(|&kind| LimitTarget {
            kind,
            closed_form_value: limit_target(kind),
        })
        .collect()
}

/// Evaluates the exact pre-limit expression behind `kind` at a finite
/// parameter: the shift kinds take `x` in `(0, 0.4]`, the sequence kinds a
/// degree `m >= 2` (not necessarily integral). The Khinchine factors use the
/// Gamma formula, matching the expressions whose limits are taken.
pub fn gamma_limit_value<S: RealScalar>(kind: LimitKind, param: S) -> Result<S> {
    let half = S::embed(0.5);
    let two = S::embed(2.0);
    match kind {
        LimitKind::HalfShift | LimitKind::ThreeHalfShift => {
            let x = param;
            if !(x > S::zero() && x <= S::embed(0.4)) {
                return Err(Error::domain(format!(
                    "shift parameter must lie in (0, 0.4], got {x}"
                )));
            }
            let base = if kind == LimitKind::HalfShift { half } else { S::embed(1.5) };
            Ok(((ln_gamma(base - x)? - ln_gamma(base)?) / x).exp())
        }
        LimitKind::SequencePower => {
            let m = require_degree(param)?;
            // (3m+2)/(2m+4) = 3/2 - 2/(m+2)
            let arg = (S::embed(3.0) * m + two) / (two * m + S::embed(4.0));
            Ok((m * (ln_gamma(arg)? - ln_gamma(S::embed(1.5))?)).exp())
        }
        LimitKind::KhinchinePrefactor => {
            let m = require_degree(param)?;
            let p = two * m / (m + two);
            Ok((m * half * ln_a_p(p, KhinchineMode::GammaFormula)?).exp())
        }
        LimitKind::EvenRatio => {
            let m = require_degree(param)?;
            let p = two * m / (m + two);
            Ok((-(m * half) * ln_a_p(p, KhinchineMode::GammaFormula)?).exp())
        }
        LimitKind::OddRatio => {
            let m = require_degree(param)?;
            let p = (two * m - two) / (m + S::one());
            // exponent (m+1)/2 * (m-1)/(2m) = (m^2 - 1)/(4m)
            let exponent = (m * m - S::one()) / (S::embed(4.0) * m);
            Ok((-exponent * ln_a_p(p, KhinchineMode::GammaFormula)?).exp())
        }
    }
}

fn require_degree<S: RealScalar>(m: S) -> Result<S> {
    if !(m >= S::embed(2.0)) || !m.is_finite() {
        return Err(Error::domain(format!("degree parameter must be >= 2, got {m}")));
    }
    Ok(m)
}

/// `C_{2n} / C_n` from a prebuilt table.
pub fn even_ratio<S: RealScalar>(table: &ConstantTable<S>, n: u32) -> Result<S> {
    if n < 2 {
        return Err(Error::domain(format!("even_ratio requires n >= 2, got {n}")));
    }
    Ok((table.log_constant(2 * n)? - table.log_constant(n)?).exp())
}

/// Residuals of the asymptotic identities `D_{2n-1} ~ sqrt(D_{n-1})` and
/// `D_{2n} ~ sqrt(D_n)`: returns
/// `(|D_{2n-1}/sqrt(D_{n-1}) - 1|, |D_{2n}/sqrt(D_n) - 1|)`.
pub fn check_claim1<S: RealScalar>(table: &ConstantTable<S>, n: u32) -> Result<(S, S)> {
    if n < 3 {
        return Err(Error::domain(format!("claim 1 requires n >= 3, got {n}")));
    }
    let one = S::one();
    let r_odd = (table.ratio(2 * n - 1)? / table.ratio(n - 1)?.sqrt() - one).abs();
    let r_even = (table.ratio(2 * n)? / table.ratio(n)?.sqrt() - one).abs();
    Ok((r_odd, r_even))
}

/// Outcome of a tail scan against a threshold.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum TailScan<S> {
    /// Every scanned `n > from` satisfied the bound; `from` is the least
    /// such start index the scan could certify.
    Holds { from: u32 },
    /// The bound failed at the very end of the range, leaving no tail.
    Fails { witness: u32, value: S },
}

impl<S> TailScan<S> {
    pub fn holds(&self) -> bool {
        matches!(self, TailScan::Holds { .. })
    }
}

/// Contraction scan: under the hypothesis `D_n < K` on `(n_start, n_end]`
/// (checked, with a hypothesis error on violation), finds the least scanned
/// `m1` with `D_n < K^{5/8}` for all scanned `n` in `(m1, n_end]`.
pub fn check_contraction<S: RealScalar>(
    table: &ConstantTable<S>,
    k_bound: S,
    n_start: u32,
    n_end: u32,
) -> Result<TailScan<S>> {
    if !(k_bound > S::one()) || !k_bound.is_finite() {
        return Err(Error::domain(format!("K must exceed 1, got {k_bound}")));
    }
    scan_range_ok(table, n_start, n_end)?;
    let threshold = (k_bound.ln() * S::embed(0.625)).exp(); // K^{5/8}
    let mut last_fail = None;
    for n in (n_start + 1)..=n_end {
        let d = table.ratio(n)?;
        if d >= k_bound {
            return Err(Error::Hypothesis {
                witness: n,
                value: d.nearest_f64(),
                bound: k_bound.nearest_f64(),
            });
        }
        if d >= threshold {
            last_fail = Some((n, d));
        }
    }
    Ok(match last_fail {
        None => TailScan::Holds { from: n_start },
        Some((n, d)) if n == n_end => TailScan::Fails { witness: n, value: d },
        Some((n, _)) => TailScan::Holds { from: n },
    })
}

/// Envelope scan: finds the least scanned `n0` with `D_n < C^{2^{-s}}` for
/// all scanned `n` in `(n0, n_end]`, scanning from `n = 2`.
pub fn envelope<S: RealScalar>(
    table: &ConstantTable<S>,
    s: u32,
    c_bound: S,
    n_end: u32,
) -> Result<TailScan<S>> {
    if !(c_bound > S::one()) || !c_bound.is_finite() {
        return Err(Error::domain(format!("C must exceed 1, got {c_bound}")));
    }
    if s > 60 {
        return Err(Error::domain(format!("envelope exponent s = {s} is too large")));
    }
    scan_range_ok(table, 2, n_end)?;
    let threshold = (c_bound.ln() * S::embed(0.5).powi(s as i32)).exp(); // C^{2^-s}
    let mut last_fail = None;
    for n in 2..=n_end {
        let d = table.ratio(n)?;
        if d >= threshold {
            last_fail = Some((n, d));
        }
    }
    Ok(match last_fail {
        None => TailScan::Holds { from: 2 },
        Some((n, d)) if n == n_end => TailScan::Fails { witness: n, value: d },
        Some((n, _)) => TailScan::Holds { from: n },
    })
}

fn scan_range_ok<S: RealScalar>(table: &ConstantTable<S>, n_start: u32, n_end: u32) -> Result<()> {
    if n_start < 2 || n_end <= n_start {
        return Err(Error::domain(format!(
            "scan range ({n_start}, {n_end}] must satisfy 2 <= n_start < n_end"
        )));
    }
    if table.m_max() < n_end + 1 {
        return Err(Error::domain(format!(
            "table reaches m = {} but the scan needs C_{}",
            table.m_max(),
            n_end + 1
        )));
    }
    Ok(())
}

/// Tail statistics of `D_n` over the last dyadic block `[n_max/2, n_max]`.
#[derive(Clone, Debug)]
pub struct ConvergenceReport<S> {
    pub family: FamilySpec,
    pub n_max: u32,
    /// Max of `D_n` over the block.
    pub tail_sup: S,
    /// Min of `D_n` over the block.
    pub tail_inf: S,
    /// Weighted least-squares fit of the constant `c` in the decay model
    /// `ln D_n = c/n`, with weights `1/n` so the fitted constant reproduces
    /// the block's dyadic product `Π D_j = C_{2n}/C_n`. Under that model
    /// `c = ln(EvenRatio target)/ln 2`.
    pub fitted_c: S,
    /// Max residuals of the two claim-1 identities over the dyadic sample
    /// points `n_max/8`, `n_max/4`, `n_max/2`.
    pub claim1_odd_max: S,
    pub claim1_even_max: S,
    /// Whether the tail already beats the previously conjectured per-step
    /// rate `2^{1/8}`.
    pub beats_conjectured_rate: bool,
}

/// Builds the convergence report; requires `n_max >= 2^10` and a table
/// reaching `n_max + 1`.
pub fn convergence_report<S: RealScalar>(
    table: &ConstantTable<S>,
    n_max: u32,
) -> Result<ConvergenceReport<S>> {
    if n_max < 1 << 10 {
        return Err(Error::domain(format!(
            "convergence report needs n_max >= 1024, got {n_max}"
        )));
    }
    scan_range_ok(table, 2, n_max)?;

    let lo = n_max / 2;
    let mut tail_sup = table.ratio(lo)?;
    let mut tail_inf = tail_sup;
    let mut sum_ln_d = S::zero();
    let mut sum_inv_n = S::zero();
    for n in lo..=n_max {
        let ln_d = table.log_constant(n + 1)? - table.log_constant(n)?;
        let d = ln_d.exp();
        tail_sup = tail_sup.maximum(d);
        tail_inf = tail_inf.minimum(d);
        sum_ln_d += ln_d;
        sum_inv_n += S::one() / S::embed(f64::from(n));
    }
    let fitted_c = sum_ln_d / sum_inv_n;

    let mut claim1_odd_max = S::zero();
    let mut claim1_even_max = S::zero();
    for n in [n_max / 8, n_max / 4, n_max / 2] {
        let (odd, even) = check_claim1(table, n)?;
        claim1_odd_max = claim1_odd_max.maximum(odd);
        claim1_even_max = claim1_even_max.maximum(even);
    }

    let conjectured = (S::ln_2() * S::embed(0.125)).exp(); // 2^{1/8}
    Ok(ConvergenceReport {
        family: table.spec(),
        n_max,
        tail_sup,
        tail_inf,
        fitted_c,
        claim1_odd_max,
        claim1_even_max,
        beats_conjectured_rate: tail_sup < conjectured,
    })
}
