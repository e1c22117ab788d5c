use crate::coeff::{Coeff, Scalar};
use crate::error::{GkError, Result};
use crate::multivector::{CliffordElement, FormField};

/// The form `Σ c_S dx^S` as the Clifford element acting by `dx^S ∧`.
pub fn form_as_clifford<C: Coeff>(form: &FormField<C>) -> CliffordElement<C> {
    let m = form.m();
    CliffordElement::from_terms(
        m,
        form.rdim(),
        form.terms().iter().map(|(s, c)| (s << m, c.clone())),
    )
}

/// Polyvector `f·v∧w` as the Clifford element `f·w·v`, so that its spin
/// action on `dx^{v}∧dx^{w}`-type forms is `ι_w ι_v`, matching `e^{β}Ω = Ω + f`
/// for `β = f ∂₁∧∂₂`, `Ω = dx¹∧dx²`.
pub fn bivector_as_clifford<C: Coeff>(
    f: &C,
    v: &CliffordElement<Scalar>,
    w: &CliffordElement<Scalar>,
) -> CliffordElement<C> {
    let rdim = f.dim();
    w.mul(v).lift::<C>(rdim).mul_coeff(f)
}

/// A pure spinor together with a spanning set of its annihilator, valid at
/// every point rather than only at the origin.
#[derive(Clone, Debug)]
pub struct TransportedSpinor<C: Coeff> {
    pub phi: FormField<C>,
    pub annihilator: Vec<CliffordElement<C>>,
}

/// `e^{X}φ₀` with annihilator `e^{X} L₀ e^{−X}`, for `X` of nilpotent action.
pub fn transport<C: Coeff>(
    x: &CliffordElement<C>,
    phi0: &FormField<Scalar>,
    l0: &[CliffordElement<Scalar>],
) -> Result<TransportedSpinor<C>> {
    let rdim = x.rdim();
    let nil = || GkError::Invalid("transform is not nilpotent".into());
    let phi = x.exp_spin(&phi0.lift(rdim)).ok_or_else(nil)?;
    let annihilator = l0
        .iter()
        .map(|e| x.exp_adjoint(&e.lift(rdim)).ok_or_else(nil))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransportedSpinor { phi, annihilator })
}

impl<C: Coeff> TransportedSpinor<C> {
    pub fn annihilates(&self) -> bool {
        self.annihilator.iter().all(|e| e.spin(&self.phi).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::TrigPoly;
    use crate::gc::structure::{holomorphic_volume, GCStructure};

    #[test]
    fn b_transform_of_holomorphic_volume() {
        let m = 4;
        let j = GCStructure::standard_complex(m);
        let f = TrigPoly::exp_mode(m, &[0, 1, 0, 0], Scalar::one());
        let b = FormField::basis(m, m, 0b0101, f);
        let t = transport(&form_as_clifford(&b), &holomorphic_volume(m), &j.l_basis()).unwrap();
        assert!(t.annihilates());
        assert_eq!(
            t.phi,
            holomorphic_volume(m)
                .lift(m)
                .add(&b.wedge(&holomorphic_volume(m).lift(m)))
        );
    }
}
