use std::collections::BTreeMap;

use crate::coeff::{Coeff, Scalar};
use crate::linalg::Matrix;

use super::{CliffordElement, FormField};

/// Solves `Σ_i c_i b_i = target` for ring-valued `c_i`, one coefficient key
/// at a time, where the `b_i` are constant vectors indexed by `u32` labels.
fn express<C: Coeff>(
    rdim: usize,
    target: &BTreeMap<u32, C>,
    basis: &[BTreeMap<u32, Scalar>],
) -> Option<Vec<C>> {
    let mut labels: Vec<u32> = basis.iter().flat_map(|b| b.keys().copied()).collect();
    labels.extend(target.keys().copied());
    labels.sort_unstable();
    labels.dedup();
    let row: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut a = Matrix::zeros(labels.len(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        for (l, c) in b {
            a[(row[l], j)] = c.clone();
        }
    }
    let mut rhs: BTreeMap<C::Key, Vec<Scalar>> = BTreeMap::new();
    for (l, c) in target {
        for (k, v) in c.terms() {
            rhs.entry(k)
                .or_insert_with(|| vec![Scalar::zero(); labels.len()])[row[l]] = v;
        }
    }
    let f = a.factor();
    let mut out = vec![C::zero(rdim); basis.len()];
    for (k, v) in rhs {
        let x = f.solve(&v)?;
        for (o, xi) in out.iter_mut().zip(x) {
            if !xi.is_zero() {
                o.add_assign(&C::monomial(rdim, k, xi));
            }
        }
    }
    Some(out)
}

/// Ring-valued coordinates of `target` in the span of constant elements.
pub fn express_element<C: Coeff>(
    target: &CliffordElement<C>,
    basis: &[CliffordElement<Scalar>],
) -> Option<Vec<C>> {
    let b: Vec<BTreeMap<u32, Scalar>> = basis.iter().map(|e| e.terms().clone()).collect();
    express(target.rdim(), target.terms(), &b)
}

/// Ring-valued coordinates of `target` in the span of constant forms.
pub fn express_form<C: Coeff>(
    target: &FormField<C>,
    basis: &[FormField<Scalar>],
) -> Option<Vec<C>> {
    let b: Vec<BTreeMap<u32, Scalar>> = basis.iter().map(|e| e.terms().clone()).collect();
    express(target.rdim(), target.terms(), &b)
}

/// `Σ_i c_i b_i`.
pub fn combine<C: Coeff>(
    m: usize,
    rdim: usize,
    coeffs: &[C],
    basis: &[CliffordElement<Scalar>],
) -> CliffordElement<C> {
    let mut out = CliffordElement::zero(m, rdim);
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            out.add_assign(&b.lift::<C>(rdim).mul_coeff(c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::TrigPoly;

    #[test]
    fn express_roundtrip() {
        let basis = vec![
            CliffordElement::<Scalar>::vector(2, 0, 0).add(&CliffordElement::covector(2, 0, 1)),
            CliffordElement::<Scalar>::covector(2, 0, 0),
        ];
        let c = vec![
            TrigPoly::exp_mode(2, &[1, 0], Scalar::int(3)),
            TrigPoly::exp_mode(2, &[0, -1], Scalar::i()),
        ];
        let e = combine(2, 2, &c, &basis);
        assert_eq!(express_element(&e, &basis).unwrap(), c);
        let outside = CliffordElement::<TrigPoly>::vector(2, 2, 1);
        assert!(express_element(&outside, &basis).is_none());
    }
}
