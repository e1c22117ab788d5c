//! Truncated power series in the deformation parameter `t`, exponentials,
//! the Campbell-Hausdorff logarithm and the lift `ε(t) ↦ a(t)`.
//!
//! Coefficients are stored plain: `Σ_k c_k t^k`. Families written as
//! `Σ a_k t^k/k!` enter through [`TruncSeries::from_factorial`].

use crate::brackets::lbar_wedge_basis;
use crate::coeff::{Coeff, Scalar};
use crate::error::{GkError, Result};
use crate::gc::{GCStructure, Grading};
use crate::multivector::keyed::{combine, express_form};
use crate::multivector::{CliffordElement, FormField};

/// `Σ_{k ≤ N} c_k t^k`; always holds `N + 1` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<T> {
    coeffs: Vec<T>,
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

impl<T: Clone> TruncSeries<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs its constant term");
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Plain coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn set(&mut self, k: usize, c: T) {
        self.coeffs[k] = c;
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> TruncSeries<U> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Keeps orders `≤ n`.
    pub fn truncate(&self, n: usize) -> Self {
        TruncSeries {
            coeffs: self.coeffs[..=n.min(self.order())].to_vec(),
        }
    }
}

/// Operations the series arithmetic needs from its coefficients.
pub trait SeriesCoeff: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
}

impl<C: Coeff> SeriesCoeff for CliffordElement<C> {
    fn zero_like(&self) -> Self {
        CliffordElement::zero(self.m(), self.rdim())
    }
    fn is_zero(&self) -> bool {
        CliffordElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CliffordElement::add(self, o)
    }
    fn scale(&self, s: &Scalar) -> Self {
        CliffordElement::scale(self, s)
    }
}

impl<C: Coeff> SeriesCoeff for FormField<C> {
    fn zero_like(&self) -> Self {
        FormField::zero(self.m(), self.rdim())
    }
    fn is_zero(&self) -> bool {
        FormField::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        FormField::add(self, o)
    }
    fn scale(&self, s: &Scalar) -> Self {
        FormField::scale(self, s)
    }
}

impl SeriesCoeff for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

impl<T: SeriesCoeff> TruncSeries<T> {
    /// Zero series of order `n` shaped like `like`.
    pub fn zero(like: &T, n: usize) -> Self {
        TruncSeries {
            coeffs: vec![like.zero_like(); n + 1],
        }
    }

    /// `Σ_k f_k t^k / k!` stored plainly.
    pub fn from_factorial(f: Vec<T>) -> Self {
        let coeffs = f
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&Scalar::ratio(1, factorial(k))))
            .collect();
        TruncSeries { coeffs }
    }

    /// Coefficients in the factorial convention, `k!·c_k`.
    pub fn factorial_coeffs(&self) -> Vec<T> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&Scalar::int(factorial(k))))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SeriesCoeff::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k].add(&o.coeffs[k])).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Lowest order with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// Truncated convolution `(A ⋆ B)_k = Σ_{i+j=k} A_i ⋆ B_j`.
fn convolve<A, B, O: SeriesCoeff>(
    a: &TruncSeries<A>,
    b: &TruncSeries<B>,
    zero: O,
    op: impl Fn(&A, &B) -> O,
) -> TruncSeries<O>
where
    A: SeriesCoeff,
    B: SeriesCoeff,
{
    let n = a.order().min(b.order());
    let mut out = vec![zero; n + 1];
    for (i, ai) in a.coeffs.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&op(ai, bj));
            }
        }
    }
    TruncSeries { coeffs: out }
}

pub type CliffordSeries<C> = TruncSeries<CliffordElement<C>>;
pub type FormSeries<C> = TruncSeries<FormField<C>>;

impl<C: Coeff> CliffordSeries<C> {
    pub fn mul(&self, o: &Self) -> Self {
        convolve(self, o, self.coeffs[0].zero_like(), |a, b| a.mul(b))
    }

    pub fn conj(&self) -> Self {
        self.map(CliffordElement::conj)
    }

    /// Termwise spin action on a form series.
    pub fn spin(&self, psi: &FormSeries<C>) -> FormSeries<C> {
        convolve(self, psi, psi.coeffs[0].zero_like(), |a, f| a.spin(f))
    }

    /// Constant series `x`.
    pub fn constant(x: &CliffordElement<C>, n: usize) -> Self {
        let mut s = Self::zero(x, n);
        s.coeffs[0] = x.clone();
        s
    }

    pub fn one(m: usize, rdim: usize, n: usize) -> Self {
        Self::constant(&CliffordElement::one(m, rdim), n)
    }

    fn require_no_constant(&self) -> Result<()> {
        if self.coeffs[0].is_zero() {
            Ok(())
        } else {
            Err(GkError::NonzeroConstantTerm)
        }
    }
}

impl<C: Coeff> FormSeries<C> {
    pub fn constant(x: &FormField<C>, n: usize) -> Self {
        let mut s = Self::zero(x, n);
        s.coeffs[0] = x.clone();
        s
    }

    /// Termwise exterior derivative.
    pub fn d(&self) -> Self {
        self.map(FormField::d)
    }
}

/// `e^{a(t)} mod t^{N+1}` as `Σ_{j ≤ N} a^j/j!`.
pub fn exp_series<C: Coeff>(a: &CliffordSeries<C>) -> Result<CliffordSeries<C>> {
    a.require_no_constant()?;
    let like = &a.coeffs[0];
    let n = a.order();
    let mut out = CliffordSeries::one(like.m(), like.rdim(), n);
    let mut term = out.clone();
    for j in 1..=n {
        term = term.mul(a).scale(&Scalar::ratio(1, j as i64));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// `e^{a(t)}·ψ mod t^{N+1}` without forming `e^{a}`.
pub fn exp_action<C: Coeff>(a: &CliffordSeries<C>, psi: &FormField<C>) -> Result<FormSeries<C>> {
    a.require_no_constant()?;
    let n = a.order();
    let mut term = FormSeries::constant(psi, n);
    let mut out = term.clone();
    for j in 1..=n {
        term = a.spin(&term).scale(&Scalar::ratio(1, j as i64));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// `e^{a} E e^{−a} mod t^{N+1}` for a constant element `E`.
pub fn adjoint_series<C: Coeff>(
    a: &CliffordSeries<C>,
    e: &CliffordElement<C>,
) -> Result<CliffordSeries<C>> {
    let n = a.order();
    let ea = exp_series(a)?;
    let ema = exp_series(&a.neg())?;
    Ok(ea.mul(&CliffordSeries::constant(e, n)).mul(&ema))
}

/// `z` with `e^{z} = e^{a}e^{b} mod t^{N+1}`, solved order by order:
/// `z_k = (e^{a}e^{b})_k − (e^{z_{<k}})_k`.
pub fn cbh_log<C: Coeff>(
    a: &CliffordSeries<C>,
    b: &CliffordSeries<C>,
) -> Result<CliffordSeries<C>> {
    a.require_no_constant()?;
    b.require_no_constant()?;
    let n = a.order().min(b.order());
    let target = exp_series(&a.truncate(n))?.mul(&exp_series(&b.truncate(n))?);
    let mut z = CliffordSeries::zero(&a.coeffs[0], n);
    for k in 1..=n {
        let partial = exp_series(&z)?;
        let zk = target.coeffs[k].sub(&partial.coeffs[k]);
        z.coeffs[k] = zk;
    }
    Ok(z)
}

/// Residual `(e^{−ε}e^{a})_{[k]}φ` test helper: true iff the form lies in the
/// canonical line `U^{−n}` of `J`.
pub fn in_canonical_line<C: Coeff>(g: &Grading, r: &FormField<C>) -> bool {
    g.project(r, -g.n()) == *r
}

/// Lift of an `ε(t) ∈ Λ²L̄` family to a real `a(t) ∈ (Λ²L̄ ⊕ Λ²L)^ℝ` with
/// `(e^{−ε(t)}e^{a(t)})_{[k]}φ ∈ K_J` for every `k ≤ N`.
///
/// At order `k` the residual `R` with `a_k = 0` must lie in
/// `U^{−n} ⊕ U^{−n+2}`; then `hφ = −π_{−n+2}R` with `h ∈ Λ²L̄` and
/// `a_k = h + h̄`, which kills the `U^{−n+2}` part because `h̄φ = 0`.
pub fn real_lift<C: Coeff>(
    eps: &CliffordSeries<C>,
    j: &GCStructure,
    phi: &FormField<Scalar>,
) -> Result<CliffordSeries<C>> {
    eps.require_no_constant()?;
    let n = eps.order();
    let like = &eps.coeffs[0];
    let (m, rdim) = (like.m(), like.rdim());
    let g = Grading::new(j)?;
    let top = -g.n();
    if phi.is_zero() || g.project(phi, top) != *phi {
        return Err(GkError::Invalid(
            "φ is not a section of the canonical line".into(),
        ));
    }
    let phi_c: FormField<C> = phi.lift(rdim);
    let basis = lbar_wedge_basis(j, 2);
    let images: Vec<FormField<Scalar>> = basis.iter().map(|b| b.spin(phi)).collect();
    let e_neg = exp_series(&eps.neg())?;
    let mut a = CliffordSeries::zero(like, n);
    for k in 1..=n {
        let prod = e_neg.mul(&exp_series(&a)?);
        let r = prod.coeffs[k].spin(&phi_c);
        let low = g.project(&r, top + 2);
        let rest = r.sub(&g.project(&r, top)).sub(&low);
        if !rest.is_zero() {
            return Err(GkError::LiftFailure {
                order: k,
                reason: "residual outside U^{-n} ⊕ U^{-n+2}".into(),
            });
        }
        let coeffs = express_form(&low.neg(), &images).ok_or_else(|| GkError::LiftFailure {
            order: k,
            reason: "U^{-n+2} component outside Λ²L̄·φ".into(),
        })?;
        let h = combine(m, rdim, &coeffs, &basis);
        a.coeffs[k] = h.add(&h.conj());
    }
    Ok(a)
}

/// Checks the defining congruence of [`real_lift`] at every order.
pub fn lift_congruence_holds<C: Coeff>(
    eps: &CliffordSeries<C>,
    a: &CliffordSeries<C>,
    j: &GCStructure,
    phi: &FormField<Scalar>,
) -> Result<Vec<bool>> {
    let g = Grading::new(j)?;
    let rdim = a.coeffs[0].rdim();
    let prod = exp_series(&eps.neg())?.mul(&exp_series(a)?);
    let phi_c: FormField<C> = phi.lift(rdim);
    Ok(prod
        .coeffs
        .iter()
        .map(|c| in_canonical_line(&g, &c.spin(&phi_c)))
        .collect())
}

#[cfg(test)]
mod tests;
