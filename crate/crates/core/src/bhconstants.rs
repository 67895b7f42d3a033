//! Bohnenblust-Hille constant families, computed entirely in log space.
//!
//! Five families are implemented: the original Bohnenblust-Hille constants
//! `m^{(m+1)/(2m)} 2^{(m-1)/2}`, the Davie-Kaijser family `2^{(m-1)/2}`, the
//! Queffelec / Defant-Sevilla-Peris family `(2/sqrt(π))^{m-1}`, and the two
//! recursive families (real and complex scalars) driven by the Khinchine
//! constants:
//!
//! * even degree: `C_m = C_{m/2} / A_{2m/(m+2)}^{m/2}`,
//! * odd degree:
//!   `C_m = (C_{(m-1)/2} / A_{(2m-2)/(m+1)}^{(m+1)/2})^{(m-1)/(2m)}
//!        · (C_{(m+1)/2} / A_{(2m+2)/(m+3)}^{(m-1)/2})^{(m+1)/(2m)}`,
//!
//! with base cases `C_2 = sqrt(2)`, `C_3 = 2^{5/6}` over the reals and
//! `C_m = (2/sqrt(π))^{m-1}` for `m = 2..6` over the complex field. The
//! recursion is never applied below its stated range, and `m = 1` is a
//! domain error rather than an invented convention.
//!
//! `C_m` grows without bound even though consecutive ratios tend to 1, so
//! tables store `ln C_m`; a dense upward sweep makes a full table up to `M`
//! cost `O(M)` Khinchine evaluations. After construction a table is
//! immutable and safe to share across threads.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::khinchine::{ln_a_p, KhinchineMode};
use crate::scalar::RealScalar;

/// Hard cap on table length, as a guard against absurd allocations.
const MAX_TABLE_LEN: u32 = 1 << 24;

/// The constant families implemented by this crate.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `m^{(m+1)/(2m)} 2^{(m-1)/2}`
    Original,
    /// `2^{(m-1)/2}`
    DavieKaijser,
    /// `(2/sqrt(π))^{m-1}`
    Queffelec,
    /// Recursive family for real Banach spaces.
    RecursiveReal,
    /// Recursive family for complex Banach spaces.
    RecursiveComplex,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Original,
        Family::DavieKaijser,
        Family::Queffelec,
        Family::RecursiveReal,
        Family::RecursiveComplex,
    ];

    pub fn is_recursive(self) -> bool {
        matches!(self, Family::RecursiveReal | Family::RecursiveComplex)
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Original => "original",
            Family::DavieKaijser => "davie-kaijser",
            Family::Queffelec => "queffelec",
            Family::RecursiveReal => "recursive-real",
            Family::RecursiveComplex => "recursive-complex",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A family together with the Khinchine mode feeding its recursion. The mode
/// is ignored by the closed-form families.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub mode: KhinchineMode,
}

impl FamilySpec {
    pub fn new(family: Family, mode: KhinchineMode) -> Self {
        FamilySpec { family, mode }
    }

    /// Spec with the default (Gamma-formula) mode.
    pub fn gamma(family: Family) -> Self {
        FamilySpec::new(family, KhinchineMode::GammaFormula)
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.family.is_recursive() {
            write!(f, "{}/{}", self.family, self.mode)
        } else {
            self.family.fmt(f)
        }
    }
}

/// A constant stored as its natural logarithm, tagged with its degree.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LogValue<S> {
    pub m: u32,
    pub log_value: S,
}

impl<S: RealScalar> LogValue<S> {
    /// `C_m = exp(ln C_m)`; may overflow to infinity for very large degrees.
    pub fn value(&self) -> S {
        self.log_value.exp()
    }
}

/// Dense table of `ln C_m` for `m = 2..=m_max`.
#[derive(Clone, Debug)]
pub struct ConstantTable<S> {
    spec: FamilySpec,
    ln_values: Vec<S>,
}

impl<S: RealScalar> ConstantTable<S> {
    /// Builds the table with a single upward sweep.
    pub fn build(spec: FamilySpec, m_max: u32) -> Result<Self> {
        if m_max < 2 {
            return Err(Error::domain(format!("m_max must be at least 2, got {m_max}")));
        }
        if m_max > MAX_TABLE_LEN {
            return Err(Error::resource(format!(
                "table up to m = {m_max} exceeds the {MAX_TABLE_LEN}-entry cap"
            )));
        }
        let ln_values = match spec.family {
            Family::RecursiveReal => build_recursive(true, spec.mode, m_max)?,
            Family::RecursiveComplex => build_recursive(false, spec.mode, m_max)?,
            closed => (2..=m_max).map(|m| closed_form_ln::<S>(closed, m)).collect(),
        };
        Ok(ConstantTable { spec, ln_values })
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn m_max(&self) -> u32 {
        self.ln_values.len() as u32 + 1
    }

    fn index(&self, m: u32) -> Result<usize> {
        if m < 2 {
            return Err(Error::domain(format!("degree must be at least 2, got {m}")));
        }
        if m > self.m_max() {
            return Err(Error::domain(format!(
                "degree {m} exceeds the table bound {}",
                self.m_max()
            )));
        }
        Ok((m - 2) as usize)
    }

    /// `ln C_m`.
    pub fn log_constant(&self, m: u32) -> Result<S> {
        Ok(self.ln_values[self.index(m)?])
    }

    pub fn log_value(&self, m: u32) -> Result<LogValue<S>> {
        Ok(LogValue {
            m,
            log_value: self.log_constant(m)?,
        })
    }

    pub fn values(&self) -> impl Iterator<Item = LogValue<S>> + '_ {
        self.ln_values.iter().enumerate().map(|(i, &v)| LogValue {
            m: i as u32 + 2,
            log_value: v,
        })
    }

    /// `D_n = C_{n+1} / C_n`.
    pub fn ratio(&self, n: u32) -> Result<S> {
        let hi = self.log_constant(n + 1)?;
        let lo = self.log_constant(n)?;
        Ok((hi - lo).exp())
    }

    /// Ratios for `n = 2..n_max-1`, flagging entries below one.
    pub fn ratio_series(&self, n_max: u32) -> Result<RatioSeries<S>> {
        if n_max < 3 {
            return Err(Error::domain(format!("n_max must be at least 3, got {n_max}")));
        }
        let mut entries = Vec::with_capacity((n_max - 2) as usize);
        let mut below_one = Vec::new();
        for n in 2..n_max {
            let d = self.ratio(n)?;
            if d < S::one() {
                below_one.push(n);
            }
            entries.push((n, d));
        }
        Ok(RatioSeries { entries, below_one })
    }
}

/// Ratio sequence with any entries that dip below one, which would
/// contradict non-decreasingness of the family.
#[derive(Clone, Debug)]
pub struct RatioSeries<S> {
    pub entries: Vec<(u32, S)>,
    pub below_one: Vec<u32>,
}

fn closed_form_ln<S: RealScalar>(family: Family, m: u32) -> S {
    let mf = S::embed(f64::from(m));
    let half = S::embed(0.5);
    let m_minus_1 = S::embed(f64::from(m - 1));
    match family {
        Family::Original => {
            let exponent = (mf + S::one()) / (S::embed(2.0) * mf);
            exponent * mf.ln() + m_minus_1 * half * S::ln_2()
        }
        Family::DavieKaijser => m_minus_1 * half * S::ln_2(),
        Family::Queffelec => m_minus_1 * (S::ln_2() - S::pi().ln() * half),
        _ => unreachable!("closed_form_ln called on a recursive family"),
    }
}

// Index arithmetic mirrors the theorem's (m-1)/2 and (m+1)/2 notation.
#[allow(clippy::manual_div_ceil)]
fn build_recursive<S: RealScalar>(
    real: bool,
    mode: KhinchineMode,
    m_max: u32,
) -> Result<Vec<S>> {
    let mut ln_c: Vec<S> = Vec::with_capacity((m_max - 1) as usize);
    let half = S::embed(0.5);
    let two = S::embed(2.0);

    let first_recursive = if real {
        ln_c.push(S::ln_2() * half); // C_2 = sqrt(2)
        if m_max >= 3 {
            ln_c.push(S::ln_2() * S::embed(5.0) / S::embed(6.0)); // C_3 = 2^{5/6}
        }
        4
    } else {
        let ln_2_over_sqrt_pi = S::ln_2() - S::pi().ln() * half;
        for m in 2..=m_max.min(6) {
            ln_c.push(S::embed(f64::from(m - 1)) * ln_2_over_sqrt_pi);
        }
        7
    };

    for m in first_recursive..=m_max {
        let mf = f64::from(m);
        let value = if m % 2 == 0 {
            // C_m = C_{m/2} / A_{2m/(m+2)}^{m/2}
            let p = S::embed(2.0 * mf) / S::embed(mf + 2.0);
            let prev = ln_c[(m / 2 - 2) as usize];
            prev - S::embed(mf) * half * ln_a_p(p, mode)?
        } else {
            // Two-factor odd recursion with exponents (m-1)/(2m), (m+1)/(2m).
            let p1 = S::embed(2.0 * mf - 2.0) / S::embed(mf + 1.0);
            let p2 = S::embed(2.0 * mf + 2.0) / S::embed(mf + 3.0);
            let lower = ln_c[((m - 1) / 2 - 2) as usize];
            let upper = ln_c[((m + 1) / 2 - 2) as usize];
            let t1 = lower - S::embed((mf + 1.0) / 2.0) * ln_a_p(p1, mode)?;
            let t2 = upper - S::embed((mf - 1.0) / 2.0) * ln_a_p(p2, mode)?;
            let w1 = S::embed(mf - 1.0) / (two * S::embed(mf));
            let w2 = S::embed(mf + 1.0) / (two * S::embed(mf));
            w1 * t1 + w2 * t2
        };
        ln_c.push(value);
    }
    Ok(ln_c)
}

/// `ln C_m` for a single degree. Builds the prefix table; use
/// [`ConstantTable`] directly when many degrees are needed.
pub fn log_constant<S: RealScalar>(spec: FamilySpec, m: u32) -> Result<LogValue<S>> {
    ConstantTable::build(spec, m)?.log_value(m)
}

/// The full table as a list of [`LogValue`] entries for `m = 2..=m_max`.
pub fn constant_table<S: RealScalar>(spec: FamilySpec, m_max: u32) -> Result<Vec<LogValue<S>>> {
    Ok(ConstantTable::build(spec, m_max)?.values().collect())
}

/// `D_n = C_{n+1} / C_n` for a single index.
pub fn ratio<S: RealScalar>(spec: FamilySpec, n: u32) -> Result<S> {
    ConstantTable::build(spec, n + 1)?.ratio(n)
}

/// Ratio sequence for `n = 2..n_max-1`.
pub fn ratio_series<S: RealScalar>(spec: FamilySpec, n_max: u32) -> Result<RatioSeries<S>> {
    ConstantTable::build(spec, n_max)?.ratio_series(n_max)
}
