//! Empirical testing of the Bohnenblust-Hille inequality on explicit
//! finite-dimensional multilinear forms.
//!
//! A form of degree `m` and dimension `N` is stored as its full coefficient
//! tensor `U(e_{i_1}, ..., e_{i_m})` in row-major lexicographic order on
//! `(i_1, ..., i_m)`. The mixed-norm left side uses compensated summation;
//! sup norms come from [`norms`]: exact vertex enumeration over the real
//! cube, certified lower bounds by torus phase ascent over the complex
//! polydisk. Checks with a heuristic sup norm report pass/inconclusive,
//! never fail, because a lower bound on the sup norm can only inflate the
//! observed ratio.
//!
//! Form evaluation and enumeration are pure; Monte-Carlo trials draw from
//! per-index substreams so parallel or out-of-order generation yields
//! identical forms.

mod norms;
mod random;
mod textio;

pub use norms::{sup_norm_complex_lower, sup_norm_real, SupLowerBound};
pub use random::{lower_bound_search, random_complex_form, random_form, random_real_form, Dist, SearchReport};
pub use textio::{form_to_string, parse_form, write_form};

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::bhconstants::{log_constant, FamilySpec};
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, RealScalar};

/// Cap on coefficient tensor size.
pub const MAX_TENSOR_ENTRIES: usize = 1_000_000;

/// Scalar field of a form.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    pub fn label(self) -> &'static str {
        match self {
            ScalarField::Real => "real",
            ScalarField::Complex => "complex",
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Coefficient scalar of a multilinear form: a real scalar or a complex
/// pair over one. Carries the sup-norm strategy for its field.
pub trait FormScalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    type Real: RealScalar;

    const FIELD: ScalarField;

    fn modulus(self) -> Self::Real;

    fn modulus_sqr(self) -> Self::Real;

    fn scale(self, t: Self::Real) -> Self;

    fn from_real(r: Self::Real) -> Self;

    /// `(re, im)` decomposition; the imaginary part is zero for real scalars.
    fn parts(self) -> (Self::Real, Self::Real);

    /// Builds from `(re, im)`; `None` if a nonzero imaginary part is given
    /// for a real scalar type.
    fn from_re_im(re: Self::Real, im: Self::Real) -> Option<Self>;

    fn element_is_finite(self) -> bool;

    /// `(sup norm estimate, is_exact)` for a form over this scalar.
    fn sup_norm(form: &MultilinearForm<Self>, opts: &SupOptions) -> Result<(Self::Real, bool)>;
}

/// A real scalar that is also its own form scalar. Implemented for every
/// concrete [`RealScalar`] type.
pub trait RealFormScalar: RealScalar + FormScalar<Real = Self> {}

impl<T: RealScalar + FormScalar<Real = T>> RealFormScalar for T {}

macro_rules! impl_form_scalar_for_real {
    ($t:ty) => {
        impl FormScalar for $t {
            type Real = $t;

            const FIELD: ScalarField = ScalarField::Real;

            #[inline]
            fn modulus(self) -> $t {
                RealScalar::abs(self)
            }

            #[inline]
            fn modulus_sqr(self) -> $t {
                self * self
            }

            #[inline]
            fn scale(self, t: $t) -> $t {
                self * t
            }

            #[inline]
            fn from_real(r: $t) -> $t {
                r
            }

            #[inline]
            fn parts(self) -> ($t, $t) {
                (self, <$t as Zero>::zero())
            }

            #[inline]
            fn from_re_im(re: $t, im: $t) -> Option<$t> {
                im.is_zero().then_some(re)
            }

            #[inline]
            fn element_is_finite(self) -> bool {
                RealScalar::is_finite(self)
            }

            fn sup_norm(form: &MultilinearForm<$t>, opts: &SupOptions) -> Result<($t, bool)> {
                sup_norm_real(form, opts.max_vertex_bits).map(|v| (v, true))
            }
        }
    };
}

impl_form_scalar_for_real!(f64);
impl_form_scalar_for_real!(f32);
impl_form_scalar_for_real!(crate::ddouble::DoubleDouble);

impl<S: RealScalar> FormScalar for Complex<S> {
    type Real = S;

    const FIELD: ScalarField = ScalarField::Complex;

    #[inline]
    fn modulus(self) -> S {
        self.modulus_sqr().sqrt()
    }

    #[inline]
    fn modulus_sqr(self) -> S {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    fn scale(self, t: S) -> Self {
        Complex::new(self.re * t, self.im * t)
    }

    #[inline]
    fn from_real(r: S) -> Self {
        Complex::new(r, S::zero())
    }

    #[inline]
    fn parts(self) -> (S, S) {
        (self.re, self.im)
    }

    #[inline]
    fn from_re_im(re: S, im: S) -> Option<Self> {
        Some(Complex::new(re, im))
    }

    #[inline]
    fn element_is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn sup_norm(form: &MultilinearForm<Self>, opts: &SupOptions) -> Result<(S, bool)> {
        let bound = sup_norm_complex_lower(form, opts.restarts, opts.iters, opts.seed);
        Ok((bound.value, false))
    }
}

/// Budget knobs for sup-norm computations.
#[derive(Copy, Clone, Debug)]
pub struct SupOptions {
    /// Multistart count for the complex phase ascent.
    pub restarts: u32,
    /// Sweep limit per ascent start.
    pub iters: u32,
    /// Base seed for the ascent starts.
    pub seed: u64,
    /// Largest allowed `m * N` for exact vertex enumeration (`2^{mN}` work).
    pub max_vertex_bits: u32,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions {
            restarts: 16,
            iters: 100,
            seed: 0,
            max_vertex_bits: 24,
        }
    }
}

pub(crate) fn tensor_len(degree: u32, dim: usize) -> Result<usize> {
    if degree < 2 {
        return Err(Error::domain(format!("degree must be at least 2, got {degree}")));
    }
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1".to_string()));
    }
    let len = dim
        .checked_pow(degree)
        .filter(|&l| l <= MAX_TENSOR_ENTRIES)
        .ok_or_else(|| {
            Error::resource(format!(
                "tensor of shape {dim}^{degree} exceeds the {MAX_TENSOR_ENTRIES}-entry budget"
            ))
        })?;
    Ok(len)
}

/// Degree-`m`, dimension-`N` multilinear form given by its coefficient
/// tensor in row-major lexicographic order (last index fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm<T: FormScalar> {
    degree: u32,
    dim: usize,
    coeffs: Vec<T>,
}

impl<T: FormScalar> MultilinearForm<T> {
    pub fn new(degree: u32, dim: usize, coeffs: Vec<T>) -> Result<Self> {
        let expected = tensor_len(degree, dim)?;
        if coeffs.len() != expected {
            return Err(Error::domain(format!(
                "coefficient tensor has {} entries, expected {dim}^{degree} = {expected}",
                coeffs.len()
            )));
        }
        if !coeffs.iter().all(|c| c.element_is_finite()) {
            return Err(Error::domain("coefficient tensor contains non-finite entries"));
        }
        Ok(MultilinearForm { degree, dim, coeffs })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn field(&self) -> ScalarField {
        T::FIELD
    }

    /// `U(z_1, ..., z_m)`. Panics if the point count or a coordinate length
    /// does not match the form shape.
    pub fn eval(&self, points: &[Vec<T>]) -> T {
        let mut scratch = Vec::new();
        self.eval_with_scratch(points, &mut scratch)
    }

    /// Evaluation that reuses a scratch buffer across calls.
    pub(crate) fn eval_with_scratch(&self, points: &[Vec<T>], scratch: &mut Vec<T>) -> T {
        assert_eq!(points.len(), self.degree as usize, "one point per slot");
        scratch.clear();
        scratch.extend_from_slice(&self.coeffs);
        let mut len = self.coeffs.len();
        for z in points.iter().rev() {
            assert_eq!(z.len(), self.dim, "point dimension mismatch");
            len /= self.dim;
            for j in 0..len {
                let mut acc = T::zero();
                let base = j * self.dim;
                for (i, &zi) in z.iter().enumerate() {
                    acc += scratch[base + i] * zi;
                }
                scratch[j] = acc;
            }
        }
        scratch[0]
    }

    /// The same form with every coefficient multiplied by `t`.
    pub fn scaled(&self, t: T::Real) -> Self {
        MultilinearForm {
            degree: self.degree,
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c.scale(t)).collect(),
        }
    }
}

/// Mixed-norm left side of the inequality:
/// `(Σ |U(e_{i_1},...,e_{i_m})|^{2m/(m+1)})^{(m+1)/(2m)}`.
pub fn bh_lhs<T: FormScalar>(form: &MultilinearForm<T>) -> T::Real {
    fn inner<T: FormScalar<Real = R>, R: RealScalar>(form: &MultilinearForm<T>) -> R {
        let m = f64::from(form.degree());
        let q = R::embed(2.0 * m / (m + 1.0));
        let mut sum = CompensatedSum::<R>::new();
        for &c in form.coeffs() {
            let a = c.modulus();
            if !a.is_zero() {
                sum.add(a.powf(q));
            }
        }
        let total = sum.total();
        if total.is_zero() {
            return R::zero();
        }
        total.powf(R::embed((m + 1.0) / (2.0 * m)))
    }
    inner(form)
}

/// The 2x2 bilinear form with coefficients `[[1, 1], [1, -1]]`, the equality
/// case of the degree-2 inequality.
pub fn littlewood_form<S: RealFormScalar>() -> MultilinearForm<S> {
    let one = S::one();
    MultilinearForm::new(2, 2, vec![one, one, one, -one]).expect("static shape is valid")
}

/// [`littlewood_form`] zero-padded to dimension `dim >= 2`.
pub fn littlewood_padded<S: RealFormScalar>(dim: usize) -> Result<MultilinearForm<S>> {
    if dim < 2 {
        return Err(Error::domain("the Littlewood form needs dimension >= 2"));
    }
    let len = tensor_len(2, dim)?;
    let mut coeffs = vec![S::zero(); len];
    let one = S::one();
    coeffs[0] = one;
    coeffs[1] = one;
    coeffs[dim] = one;
    coeffs[dim + 1] = -one;
    MultilinearForm::new(2, dim, coeffs)
}

/// Reinterprets a real form over the complex field.
pub fn complexify<S: RealFormScalar>(form: &MultilinearForm<S>) -> MultilinearForm<Complex<S>> {
    MultilinearForm {
        degree: form.degree,
        dim: form.dim,
        coeffs: form.coeffs.iter().map(|&c| Complex::new(c, S::zero())).collect(),
    }
}

/// Outcome of an inequality check.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The sup norm was only a lower bound and the sufficient condition did
    /// not hold; nothing can be concluded.
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Result of checking one form against one constant family.
#[derive(Clone, Debug)]
pub struct InequalityReport<S> {
    pub degree: u32,
    pub dim: usize,
    pub field: ScalarField,
    pub lhs: S,
    pub sup_norm: S,
    pub sup_is_exact: bool,
    /// `lhs / sup_norm`; an upper estimate of the true ratio when the sup
    /// norm is only a lower bound.
    pub ratio: S,
    /// `C_m` of the selected family.
    pub bound: S,
    pub verdict: Verdict,
}

impl<S> InequalityReport<S> {
    pub fn pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Options for [`check_inequality`].
#[derive(Copy, Clone, Debug)]
pub struct InequalityOptions {
    pub sup: SupOptions,
    /// Relative slack on the pass condition `lhs <= C_m * sup * (1 + tol)`.
    pub pass_tol: f64,
}

impl Default for InequalityOptions {
    fn default() -> Self {
        InequalityOptions {
            sup: SupOptions::default(),
            pass_tol: 1e-9,
        }
    }
}

/// Checks the inequality for one form against the family `spec`.
///
/// With an exact sup norm the verdict is pass or fail. With a lower bound,
/// `lhs <= C_m * bound` is sufficient to pass; otherwise the verdict is
/// inconclusive, never fail.
pub fn check_inequality<T: FormScalar>(
    form: &MultilinearForm<T>,
    spec: FamilySpec,
    opts: &InequalityOptions,
) -> Result<InequalityReport<T::Real>> {
    fn inner<T: FormScalar<Real = R>, R: RealScalar>(
        form: &MultilinearForm<T>,
        spec: FamilySpec,
        opts: &InequalityOptions,
    ) -> Result<InequalityReport<R>> {
        if !(opts.pass_tol >= 0.0) || !opts.pass_tol.is_finite() {
            return Err(Error::domain(format!(
                "pass tolerance must be non-negative, got {}",
                opts.pass_tol
            )));
        }
        let bound = log_constant::<R>(spec, form.degree())?.log_value.exp();
        let lhs = bh_lhs(form);
        let (sup, sup_is_exact) = T::sup_norm(form, &opts.sup)?;
        let slack = R::one() + R::embed(opts.pass_tol);

        let (ratio, verdict) = if sup.is_zero() {
            // Only the zero form has zero sup norm; it passes trivially.
            let verdict = if lhs.is_zero() { Verdict::Pass } else { Verdict::Fail };
            (R::zero(), verdict)
        } else {
            let ratio = lhs / sup;
            let verdict = if lhs <= bound * sup * slack {
                Verdict::Pass
            } else if sup_is_exact {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            };
            (ratio, verdict)
        };

        Ok(InequalityReport {
            degree: form.degree(),
            dim: form.dim(),
            field: T::FIELD,
            lhs,
            sup_norm: sup,
            sup_is_exact,
            ratio,
            bound,
            verdict,
        })
    }
    inner(form, spec, opts)
}

/// A concrete `f64` form over either scalar field, for I/O and the CLI.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Real(MultilinearForm<f64>),
    Complex(MultilinearForm<Complex<f64>>),
}

impl Form {
    pub fn degree(&self) -> u32 {
        match self {
            Form::Real(f) => f.degree(),
            Form::Complex(f) => f.degree(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Form::Real(f) => f.dim(),
            Form::Complex(f) => f.dim(),
        }
    }

    pub fn field(&self) -> ScalarField {
        match self {
            Form::Real(_) => ScalarField::Real,
            Form::Complex(_) => ScalarField::Complex,
        }
    }

    pub fn bh_lhs(&self) -> f64 {
        match self {
            Form::Real(f) => bh_lhs(f),
            Form::Complex(f) => bh_lhs(f),
        }
    }

    pub fn check(&self, spec: FamilySpec, opts: &InequalityOptions) -> Result<InequalityReport<f64>> {
        match self {
            Form::Real(f) => check_inequality(f, spec, opts),
            Form::Complex(f) => check_inequality(f, spec, opts),
        }
    }
}
