//! Exact coefficient rings: Gaussian rationals, trigonometric polynomials on
//! the flat torus, and polynomials on an affine chart.

mod affine;
mod scalar;
mod trig;

use std::fmt::Debug;
use std::hash::Hash;

use nalgebra::Complex;

pub use affine::{AffinePoly, Exponent};
pub use scalar::{format_q, parse_q, q, q_to_f64, qi, Scalar, Q};
pub use trig::{Mode, TrigPoly};

use crate::error::GkError;

/// Largest supported real dimension of a model (torus or chart).
pub const MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Constant,
    Trig,
    Affine,
}

/// Common interface of the coefficient rings.
///
/// All rings are commutative, so `conj` is a ring homomorphism. `dim` is the
/// number of real coordinates the coefficients depend on (0 for constants).
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Key: Copy + Ord + Eq + Hash + Debug + Send + Sync;
    const KIND: RingKind;

    fn dim(&self) -> usize;
    fn zero(dim: usize) -> Self;
    fn monomial(dim: usize, key: Self::Key, c: Scalar) -> Self;
    fn constant_key(dim: usize) -> Self::Key;
    fn is_zero(&self) -> bool;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn conj(&self) -> Self;

    /// Partial derivative in the real coordinate `x_j`.
    fn partial(&self, j: usize) -> Self;
    fn eval_at_zero(&self) -> Scalar;
    /// Floating-point evaluation at a real point.
    fn eval_f64(&self, x: &[f64]) -> Complex<f64>;
    /// Exact evaluation at a rational point, when the ring admits it there.
    fn eval_exact(&self, x: &[Q]) -> Option<Scalar>;

    fn terms(&self) -> Vec<(Self::Key, Scalar)>;
    /// Size of a key: `|k|_∞` for modes, total degree for exponents.
    fn key_size(key: &Self::Key) -> u32;

    /// Keys `k` with `k·b = a` for some `a ∈ num`, `b ∈ den`, sorted.
    fn key_quotients(num: &[Self::Key], den: &[Self::Key]) -> Vec<Self::Key>;

    /// A non-constant function of `x_j` used to probe `C^∞`-linearity:
    /// `e^{ix_j}` on the torus, `x_j` on a chart; `None` for constants.
    fn coordinate_probe(dim: usize, j: usize) -> Option<Self> {
        let _ = (dim, j);
        None
    }

    fn constant(dim: usize, c: Scalar) -> Self {
        Self::monomial(dim, Self::constant_key(dim), c)
    }

    fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    /// The value if the element has no non-constant terms.
    fn as_constant(&self) -> Option<Scalar> {
        let k0 = Self::constant_key(self.dim());
        let mut out = Scalar::zero();
        for (k, c) in self.terms() {
            if k != k0 {
                return None;
            }
            out = c;
        }
        Some(out)
    }

    fn max_key_size(&self) -> u32 {
        self.terms()
            .iter()
            .map(|(k, _)| Self::key_size(k))
            .max()
            .unwrap_or(0)
    }

    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }

    fn add_scaled(&mut self, o: &Self, s: &Scalar) {
        *self = self.add(&o.scale(s));
    }

    fn is_real_valued(&self) -> bool {
        self.conj() == *self
    }
}

impl Coeff for Scalar {
    type Key = ();
    const KIND: RingKind = RingKind::Constant;

    fn dim(&self) -> usize {
        0
    }
    fn zero(_: usize) -> Self {
        Scalar::zero()
    }
    fn monomial(_: usize, _: (), c: Scalar) -> Self {
        c
    }
    fn constant_key(_: usize) {}
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn partial(&self, _: usize) -> Self {
        Scalar::zero()
    }
    fn eval_at_zero(&self) -> Scalar {
        self.clone()
    }
    fn eval_f64(&self, _: &[f64]) -> Complex<f64> {
        self.to_c64()
    }
    fn eval_exact(&self, _: &[Q]) -> Option<Scalar> {
        Some(self.clone())
    }
    fn terms(&self) -> Vec<((), Scalar)> {
        if Scalar::is_zero(self) {
            vec![]
        } else {
            vec![((), self.clone())]
        }
    }
    fn key_quotients(num: &[()], den: &[()]) -> Vec<()> {
        if num.is_empty() || den.is_empty() {
            vec![]
        } else {
            vec![()]
        }
    }
    fn key_size(_: &()) -> u32 {
        0
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn add_scaled(&mut self, o: &Self, s: &Scalar) {
        *self += &(o * s);
    }
}

/// A coefficient from either function ring, for callers that only learn the
/// ring at run time (scene literals). Mixing rings is reported, not coerced.
#[derive(Clone, Debug, PartialEq)]
pub enum DynCoeff {
    Trig(TrigPoly),
    Affine(AffinePoly),
}

impl DynCoeff {
    fn pair<'a>(&'a self, o: &'a Self) -> Result<Pair<'a>, GkError> {
        match (self, o) {
            (DynCoeff::Trig(a), DynCoeff::Trig(b)) if a.dim() == b.dim() => Ok(Pair::Trig(a, b)),
            (DynCoeff::Affine(a), DynCoeff::Affine(b)) if a.dim() == b.dim() => {
                Ok(Pair::Affine(a, b))
            }
            (DynCoeff::Trig(_), DynCoeff::Trig(_)) | (DynCoeff::Affine(_), DynCoeff::Affine(_)) => {
                Err(GkError::DimMismatch)
            }
            _ => Err(GkError::MixedRing),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, GkError> {
        Ok(match self.pair(o)? {
            Pair::Trig(a, b) => DynCoeff::Trig(a.add(b)),
            Pair::Affine(a, b) => DynCoeff::Affine(a.add(b)),
        })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, GkError> {
        Ok(match self.pair(o)? {
            Pair::Trig(a, b) => DynCoeff::Trig(a.mul(b)),
            Pair::Affine(a, b) => DynCoeff::Affine(a.mul(b)),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            DynCoeff::Trig(a) => DynCoeff::Trig(a.neg()),
            DynCoeff::Affine(a) => DynCoeff::Affine(a.neg()),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            DynCoeff::Trig(a) => DynCoeff::Trig(a.conj()),
            DynCoeff::Affine(a) => DynCoeff::Affine(a.conj()),
        }
    }

    pub fn eval_at_zero(&self) -> Scalar {
        match self {
            DynCoeff::Trig(a) => a.eval_at_zero(),
            DynCoeff::Affine(a) => a.eval_at_zero(),
        }
    }
}

enum Pair<'a> {
    Trig(&'a TrigPoly, &'a TrigPoly),
    Affine(&'a AffinePoly, &'a AffinePoly),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_rings_are_rejected() {
        let t = DynCoeff::Trig(TrigPoly::one(2));
        let a = DynCoeff::Affine(AffinePoly::one(2));
        assert_eq!(t.checked_mul(&a), Err(GkError::MixedRing));
        assert_eq!(
            t.checked_add(&DynCoeff::Trig(TrigPoly::one(3))),
            Err(GkError::DimMismatch)
        );
        assert!(t.checked_mul(&t).is_ok());
    }

    #[test]
    fn scalar_ring_constant() {
        assert_eq!(Scalar::int(3).as_constant(), Some(Scalar::int(3)));
    }
}
