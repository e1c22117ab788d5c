use crate::coeff::{Coeff, Scalar, Q};
use crate::error::{GkError, Result};
use crate::linalg::Matrix;
use crate::multivector::{CliffordElement, FormField};

use super::structure::{pair_vectors, GCStructure};

/// A pure spinor with a basis of its annihilator.
#[derive(Clone, Debug)]
pub struct PureSpinorData<C: Coeff> {
    pub spinor: FormField<C>,
    pub annihilator_basis: Vec<CliffordElement<C>>,
}

impl<C: Coeff> PureSpinorData<C> {
    /// Exact check that each basis element kills the spinor.
    pub fn annihilates(&self) -> bool {
        self.annihilator_basis
            .iter()
            .all(|e| e.spin(&self.spinor).is_zero())
    }

    /// Exact isotropy check `⟨E_i, E_j⟩ = 0`.
    pub fn isotropic(&self) -> bool {
        self.annihilator_basis.iter().all(|a| {
            self.annihilator_basis.iter().all(|b| {
                crate::multivector::pairing(a, b)
                    .map(|p| p.is_zero())
                    .unwrap_or(false)
            })
        })
    }
}

/// Matrix whose column `a` is `e_a · φ` for a constant `φ`.
fn action_columns(phi: &FormField<Scalar>) -> Matrix {
    let m = phi.m();
    let cols: Vec<Vec<Scalar>> = (0..2 * m)
        .map(|g| {
            CliffordElement::<Scalar>::generator(m, 0, g)
                .spin(phi)
                .to_vec()
        })
        .collect();
    Matrix::from_cols(1 << m, &cols)
}

/// Annihilator of a constant form as coordinate vectors.
pub fn annihilator_vectors(phi: &FormField<Scalar>) -> Vec<Vec<Scalar>> {
    action_columns(phi).nullspace()
}

/// `L_φ = {E : E·φ = 0}`, computed at `x = 0` for non-constant `φ`.
pub fn annihilator<C: Coeff>(phi: &FormField<C>) -> Result<PureSpinorData<C>> {
    let m = phi.m();
    let phi0 = phi.as_constant().unwrap_or_else(|| phi.eval_at_zero());
    if phi0.is_zero() {
        return Err(GkError::Invalid(
            "spinor vanishes at the evaluation point".into(),
        ));
    }
    let l = annihilator_vectors(&phi0);
    if l.len() != m {
        return Err(GkError::NotPure {
            rank: l.len(),
            expected: m,
        });
    }
    if !nondegenerate(m, &l) {
        return Err(GkError::NotNondegenerate);
    }
    Ok(PureSpinorData {
        spinor: phi.clone(),
        annihilator_basis: l
            .iter()
            .map(|v| CliffordElement::from_vector(m, 0, v).lift(phi.rdim()))
            .collect(),
    })
}

fn nondegenerate(m: usize, l: &[Vec<Scalar>]) -> bool {
    let mut cols = l.to_vec();
    cols.extend(
        l.iter()
            .map(|v| v.iter().map(Scalar::conj).collect::<Vec<_>>()),
    );
    Matrix::from_cols(2 * m, &cols).rank() == 2 * m
}

/// `J_φ`: `−i` on `L_φ`, `+i` on `L̄_φ`; evaluated at `x = 0`.
pub fn induced_structure<C: Coeff>(phi: &FormField<C>) -> Result<GCStructure> {
    let m = phi.m();
    let phi0 = phi.as_constant().unwrap_or_else(|| phi.eval_at_zero());
    annihilator(&phi0)?;
    let l = annihilator_vectors(&phi0);
    let mut cols = l.clone();
    cols.extend(
        l.iter()
            .map(|v| v.iter().map(Scalar::conj).collect::<Vec<_>>()),
    );
    let b = Matrix::from_cols(2 * m, &cols);
    let mut d = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        d[(i, i)] = -Scalar::i();
        d[(m + i, m + i)] = Scalar::i();
    }
    let binv = b.inverse().ok_or(GkError::NotNondegenerate)?;
    let j = b.mul(&d).mul(&binv);
    debug_assert!(j.conj() == j);
    Ok(GCStructure::from_matrix(m, j).with_spinor(phi0))
}

/// Isotropy of a list of coordinate vectors.
pub fn is_isotropic(m: usize, vs: &[Vec<Scalar>]) -> bool {
    vs.iter()
        .all(|u| vs.iter().all(|v| pair_vectors(m, u, v).is_zero()))
}

/// Where to evaluate a spinor for [`type_at`].
#[derive(Clone, Debug)]
pub enum Point {
    Origin,
    /// Exact rational coordinates; supported by rings with exact evaluation.
    Exact(Vec<Q>),
    /// Floating-point coordinates; a degree counts as present above `tol`.
    Float {
        x: Vec<f64>,
        tol: f64,
    },
}

/// Minimal degree of a nonzero component of `φ(x)`.
pub fn type_at<C: Coeff>(phi: &FormField<C>, x: &Point) -> Result<usize> {
    let missing = || GkError::Invalid("spinor vanishes at the point".into());
    match x {
        Point::Origin => phi.eval_at_zero().min_degree().ok_or_else(missing),
        Point::Exact(p) => phi
            .eval_exact(p)
            .ok_or_else(|| GkError::EvaluationError(format!("{p:?}")))?
            .min_degree()
            .ok_or_else(missing),
        Point::Float { x, tol } => {
            let v = phi.eval_f64(x);
            (0..v.len())
                .filter(|&s| v[s].norm() > *tol)
                .map(|s| (s as u32).count_ones() as usize)
                .min()
                .ok_or_else(missing)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gc::structure::exp_form;
    use crate::gc::structure::{holomorphic_volume, standard_omega_matrix, two_form_from_matrix};

    fn e_i_omega(m: usize) -> FormField<Scalar> {
        exp_form(&two_form_from_matrix(&standard_omega_matrix(m)).scale(&Scalar::i()))
    }

    fn span_equal(m: usize, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
        let ra = Matrix::from_cols(2 * m, a).rank();
        let rb = Matrix::from_cols(2 * m, b).rank();
        let mut all = a.to_vec();
        all.extend(b.iter().cloned());
        ra == rb && Matrix::from_cols(2 * m, &all).rank() == ra
    }

    fn vec_of(m: usize, entries: &[(usize, Scalar)]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); 2 * m];
        for (i, c) in entries {
            v[*i] = c.clone();
        }
        v
    }

    #[test]
    fn complex_annihilator() {
        let m = 4;
        let l = annihilator_vectors(&holomorphic_volume(m));
        let half = Scalar::ratio(1, 2);
        let half_i = Scalar::new(Q::from_integer(0.into()), crate::coeff::q(1, 2));
        // ∂_{z̄_j} = ½(∂_{x} + i∂_{y}), dz_j = dx + i dy.
        let expect = vec![
            vec_of(m, &[(0, half.clone()), (1, half_i.clone())]),
            vec_of(m, &[(2, half.clone()), (3, half_i.clone())]),
            vec_of(m, &[(4, Scalar::one()), (5, Scalar::i())]),
            vec_of(m, &[(6, Scalar::one()), (7, Scalar::i())]),
        ];
        assert!(span_equal(m, &l, &expect));
    }

    #[test]
    fn symplectic_annihilator() {
        let m = 2;
        let l = annihilator_vectors(&e_i_omega(m));
        let expect = vec![
            vec_of(m, &[(0, Scalar::one()), (3, -Scalar::i())]),
            vec_of(m, &[(1, Scalar::one()), (2, Scalar::i())]),
        ];
        assert!(span_equal(m, &l, &expect));
    }

    #[test]
    fn degenerate_spinor() {
        let phi = FormField::<Scalar>::basis(2, 0, 0b01, Scalar::one());
        assert_eq!(annihilator(&phi).unwrap_err(), GkError::NotNondegenerate);
    }

    #[test]
    fn induced_matches_constructors() {
        let j = induced_structure(&e_i_omega(2)).unwrap();
        assert_eq!(j.matrix(), GCStructure::standard_symplectic(2).matrix());
        let jc = induced_structure(&holomorphic_volume(4)).unwrap();
        assert_eq!(jc.matrix(), GCStructure::standard_complex(4).matrix());
        let j2 = induced_structure(&e_i_omega(2).scale(&Scalar::int(2))).unwrap();
        assert_eq!(j2.matrix(), j.matrix());
        assert!(j.validate().passed());
    }

    #[test]
    fn type_of_symplectic() {
        assert_eq!(type_at(&e_i_omega(4), &Point::Origin).unwrap(), 0);
        assert_eq!(type_at(&holomorphic_volume(4), &Point::Origin).unwrap(), 2);
    }
}
