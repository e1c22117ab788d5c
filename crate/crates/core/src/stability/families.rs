//! Standard deformation families on the flat `T⁴` model.

use crate::coeff::{Coeff, Scalar, TrigPoly};
use crate::gc::structure::dz;
use crate::gc::{bivector_as_clifford, form_as_clifford};
use crate::multivector::CliffordElement;
use crate::series::CliffordSeries;

fn zero_series(m: usize, n: usize) -> CliffordSeries<TrigPoly> {
    CliffordSeries::zero(&CliffordElement::zero(m, m), n)
}

/// `ε(t) = t·f dz̄₁∧dz̄₂`, a Maurer-Cartan solution for `J_cx` on `T⁴`.
pub fn bfield_family(f: &TrigPoly, n: usize) -> CliffordSeries<TrigPoly> {
    let b = dz(4, 0).wedge(&dz(4, 1)).conj();
    let mut s = zero_series(4, n);
    s.set(1, form_as_clifford(&b.lift::<TrigPoly>(4)).mul_coeff(f));
    s
}

/// `ε(t) = t·c ∂_{z₁}∧∂_{z₂}`, a constant holomorphic Poisson bivector.
pub fn poisson_family(c: Scalar, n: usize) -> CliffordSeries<TrigPoly> {
    let half = Scalar::ratio(1, 2);
    let dzj = |j: usize| {
        CliffordElement::<Scalar>::vector(4, 0, 2 * j)
            .add(&CliffordElement::vector(4, 0, 2 * j + 1).scale(&-Scalar::i()))
            .scale(&half)
    };
    let mut s = zero_series(4, n);
    s.set(
        1,
        bivector_as_clifford(&TrigPoly::constant(4, c), &dzj(0), &dzj(1)),
    );
    s
}

/// `e^{ix₁} + ½e^{i(x₄−x₃)}`, a mode-one profile for [`bfield_family`].
pub fn mode_one_profile() -> TrigPoly {
    TrigPoly::exp_mode(4, &[1, 0, 0, 0], Scalar::one()).add(&TrigPoly::exp_mode(
        4,
        &[0, 0, -1, 1],
        Scalar::ratio(1, 2),
    ))
}
