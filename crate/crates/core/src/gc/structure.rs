use crate::coeff::{Coeff, Scalar};
use crate::linalg::Matrix;
use crate::multivector::{CliffordElement, FormField};

/// Constant endomorphism `J` of `(T ⊕ T*) ⊗ ℂ` in the ordered basis
/// `(∂₁…∂_m, dx¹…dx^m)`; column `a` holds the image of the `a`-th generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GCStructure {
    m: usize,
    matrix: Matrix,
    canonical_spinor: Option<FormField<Scalar>>,
}

/// Outcome of [`GCStructure::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub squares_to_minus_one: bool,
    pub orthogonal: bool,
    pub real: bool,
    /// `L` has rank `m`, is isotropic, and `L ⊕ L̄` spans.
    pub eigenspaces: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.squares_to_minus_one && self.orthogonal && self.real && self.eigenspaces
    }
}

/// Gram matrix of the split pairing: `⟨∂_i, dx^i⟩ = ½`.
pub fn pairing_matrix(m: usize) -> Matrix {
    let mut p = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        p[(i, m + i)] = Scalar::ratio(1, 2);
        p[(m + i, i)] = Scalar::ratio(1, 2);
    }
    p
}

/// `⟨u, v⟩` for coordinate vectors (bilinear, no conjugation).
pub fn pair_vectors(m: usize, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for i in 0..m {
        s += &(&u[i] * &v[m + i]);
        s += &(&u[m + i] * &v[i]);
    }
    s * Scalar::ratio(1, 2)
}

impl GCStructure {
    pub fn from_matrix(m: usize, matrix: Matrix) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (2 * m, 2 * m));
        GCStructure {
            m,
            matrix,
            canonical_spinor: None,
        }
    }

    pub fn with_spinor(mut self, phi: FormField<Scalar>) -> Self {
        self.canonical_spinor = Some(phi);
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `n = m/2`.
    pub fn n(&self) -> usize {
        self.m / 2
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn canonical_spinor(&self) -> Option<&FormField<Scalar>> {
        self.canonical_spinor.as_ref()
    }

    /// Lift `diag(J_cx, −J_cxᵀ)` of a complex structure on `T`.
    pub fn complex_lift(jcx: &Matrix) -> Self {
        let m = jcx.rows();
        let mut j = Matrix::zeros(2 * m, 2 * m);
        for a in 0..m {
            for b in 0..m {
                j[(a, b)] = jcx[(a, b)].clone();
                j[(m + a, m + b)] = -&jcx[(b, a)];
            }
        }
        Self::from_matrix(m, j)
    }

    /// Standard complex structure with `z_j = x_{2j} + i x_{2j+1}`, carrying
    /// the canonical spinor `dz_1 ∧ … ∧ dz_n`.
    pub fn standard_complex(m: usize) -> Self {
        assert!(m % 2 == 0, "complex structures need even dimension");
        let mut jcx = Matrix::zeros(m, m);
        for j in 0..m / 2 {
            jcx[(2 * j + 1, 2 * j)] = Scalar::one();
            jcx[(2 * j, 2 * j + 1)] = -Scalar::one();
        }
        Self::complex_lift(&jcx).with_spinor(holomorphic_volume(m))
    }

    /// `J_ω` for a constant symplectic form with antisymmetric matrix `w`
    /// (`ω = Σ_{i<j} w_ij dx^i∧dx^j`): `J(v) = −ι_vω`, `J(θ) = (ω♭)⁻¹θ`.
    /// Carries the canonical spinor `e^{iω}`. Returns `None` if `w` is singular.
    pub fn symplectic(w: &Matrix) -> Option<Self> {
        let m = w.rows();
        let winv = w.inverse()?;
        let mut j = Matrix::zeros(2 * m, 2 * m);
        for a in 0..m {
            for b in 0..m {
                j[(m + a, b)] = w[(a, b)].clone();
                j[(a, m + b)] = -&winv[(a, b)];
            }
        }
        let omega = two_form_from_matrix(w);
        let spinor = exp_form(&omega.scale(&Scalar::i()));
        Some(Self::from_matrix(m, j).with_spinor(spinor))
    }

    /// Standard `ω = Σ_j dx^{2j} ∧ dx^{2j+1}`.
    pub fn standard_symplectic(m: usize) -> Self {
        Self::symplectic(&standard_omega_matrix(m)).expect("standard ω is nondegenerate")
    }

    /// Symplectic partner of [`standard_complex`](Self::standard_complex) with
    /// positive generalized metric: `ω_K = Σ_j dx^{2j+1} ∧ dx^{2j}`.
    ///
    /// With `L` the `−i`-eigenspace, `(J_cx, J_ω)` is positive exactly when
    /// `ω(∂_x, J∂_x) < 0`, which excludes the standard `ω`.
    pub fn kahler_symplectic(m: usize) -> Self {
        Self::symplectic(&kahler_omega_matrix(m)).expect("ω_K is nondegenerate")
    }

    pub fn neg(&self) -> Self {
        GCStructure {
            m: self.m,
            matrix: self.matrix.scale(&-Scalar::one()),
            canonical_spinor: self.canonical_spinor.as_ref().map(FormField::conj),
        }
    }

    /// Image `J·E` of a degree-1 element.
    pub fn apply<C: Coeff>(&self, e: &CliffordElement<C>) -> crate::Result<CliffordElement<C>> {
        let v = e.to_vector()?;
        let out: Vec<C> = (0..2 * self.m)
            .map(|r| {
                let mut s = C::zero(e.rdim());
                for (c, vc) in v.iter().enumerate() {
                    let a = &self.matrix[(r, c)];
                    if !a.is_zero() {
                        s.add_assign(&vc.scale(a));
                    }
                }
                s
            })
            .collect();
        Ok(CliffordElement::from_vector(self.m, e.rdim(), &out))
    }

    /// Basis of the `−i`-eigenspace `L` as coordinate vectors.
    pub fn l_vectors(&self) -> Vec<Vec<Scalar>> {
        let n2 = 2 * self.m;
        let shifted = self.matrix.add(&Matrix::identity(n2).scale(&Scalar::i()));
        shifted.nullspace()
    }

    /// Basis of `L` as degree-1 constant elements.
    pub fn l_basis(&self) -> Vec<CliffordElement<Scalar>> {
        self.l_vectors()
            .iter()
            .map(|v| CliffordElement::from_vector(self.m, 0, v))
            .collect()
    }

    /// Basis of `L̄` (conjugates of the `L` basis).
    pub fn lbar_basis(&self) -> Vec<CliffordElement<Scalar>> {
        self.l_basis().iter().map(CliffordElement::conj).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let n2 = 2 * self.m;
        let id = Matrix::identity(n2);
        let squares = self.matrix.mul(&self.matrix).add(&id).is_zero();
        let p = pairing_matrix(self.m);
        let orthogonal = self.matrix.transpose().mul(&p).mul(&self.matrix) == p;
        let real = self.matrix.conj() == self.matrix;
        let l = self.l_vectors();
        let isotropic = l
            .iter()
            .all(|u| l.iter().all(|v| pair_vectors(self.m, u, v).is_zero()));
        let mut cols = l.clone();
        cols.extend(
            l.iter()
                .map(|v| v.iter().map(Scalar::conj).collect::<Vec<_>>()),
        );
        let spans = !cols.is_empty() && Matrix::from_cols(n2, &cols).rank() == n2;
        ValidationReport {
            squares_to_minus_one: squares,
            orthogonal,
            real,
            eigenspaces: l.len() == self.m && isotropic && spans,
        }
    }

    /// Exact commutation test `J₀J₁ = J₁J₀`.
    pub fn commutes_with(&self, o: &GCStructure) -> bool {
        self.matrix.mul(&o.matrix) == o.matrix.mul(&self.matrix)
    }
}

/// `ω = Σ_j dx^{2j} ∧ dx^{2j+1}` as an antisymmetric matrix.
pub fn standard_omega_matrix(m: usize) -> Matrix {
    let mut w = Matrix::zeros(m, m);
    for j in 0..m / 2 {
        w[(2 * j, 2 * j + 1)] = Scalar::one();
        w[(2 * j + 1, 2 * j)] = -Scalar::one();
    }
    w
}

/// Matrix of `ω_K = −Σ_j dx^{2j} ∧ dx^{2j+1}`.
pub fn kahler_omega_matrix(m: usize) -> Matrix {
    standard_omega_matrix(m).scale(&-Scalar::one())
}

/// The constant 2-form `Σ_{i<j} w_ij dx^i ∧ dx^j`.
pub fn two_form_from_matrix(w: &Matrix) -> FormField<Scalar> {
    let m = w.rows();
    let mut out = FormField::zero(m, 0);
    for i in 0..m {
        for j in i + 1..m {
            out.add_term((1 << i) | (1 << j), &w[(i, j)]);
        }
    }
    out
}

/// `dz_j = dx^{2j} + i dx^{2j+1}` as a constant 1-form.
pub fn dz(m: usize, j: usize) -> FormField<Scalar> {
    FormField::from_terms(
        m,
        0,
        [
            (1 << (2 * j), Scalar::one()),
            (1 << (2 * j + 1), Scalar::i()),
        ],
    )
}

/// `dz_1 ∧ … ∧ dz_n`.
pub fn holomorphic_volume(m: usize) -> FormField<Scalar> {
    let mut out = FormField::one(m, 0);
    for j in 0..m / 2 {
        out = out.wedge(&dz(m, j));
    }
    out
}

/// `e^{β} = Σ_k β^{∧k}/k!` for an even form with no degree-0 part; the sum is
/// finite because wedge powers vanish above degree `m`.
pub fn exp_form<C: Coeff>(beta: &FormField<C>) -> FormField<C> {
    let mut out = FormField::one(beta.m(), beta.rdim());
    let mut term = out.clone();
    for k in 1..=beta.m() {
        term = term.wedge(beta).scale(&Scalar::ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_structures_validate() {
        for m in [2, 4] {
            assert!(GCStructure::standard_complex(m).validate().passed());
            assert!(GCStructure::standard_symplectic(m).validate().passed());
        }
        let id = GCStructure::from_matrix(2, Matrix::identity(4));
        let r = id.validate();
        assert!(!r.squares_to_minus_one && !r.passed());
    }

    #[test]
    fn symplectic_action() {
        let j = GCStructure::standard_symplectic(2);
        let dx = CliffordElement::<Scalar>::vector(2, 0, 0);
        let dy = CliffordElement::<Scalar>::covector(2, 0, 1);
        assert_eq!(j.apply(&dx).unwrap(), dy.neg());
        assert_eq!(j.apply(&dy).unwrap(), dx);
    }

    #[test]
    fn exp_i_omega() {
        let w = standard_omega_matrix(4);
        let omega = two_form_from_matrix(&w);
        let e = exp_form(&omega.scale(&Scalar::i()));
        // 1 + iω − ω²/2 with ω² = 2 dx¹²³⁴.
        assert_eq!(e.coeff(0), Scalar::one());
        assert_eq!(e.coeff(0b0011), Scalar::i());
        assert_eq!(e.coeff(0b1111), -Scalar::one());
    }
}
